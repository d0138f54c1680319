"""Tests for the fretcavity command line."""
import pytest
import sys
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from click.testing import CliRunner

from fretcavity.models import CheckResult
from fretcavity_cli import cli as cli_module
from fretcavity_cli.cli import EXIT_CONFIG, EXIT_SOLVER, EXIT_TOLERANCE, cli


@pytest.fixture
def runner():
    """Return a click test runner."""
    return CliRunner()


@pytest.fixture
def config_file(tmp_path, minimal_config_text):
    """Write the minimal sweep config and return its path."""
    path = tmp_path / "sweep.conf"
    path.write_text(minimal_config_text)
    return str(path)


class TestPresetsCommand:
    """Test the presets command."""

    def test_lists_presets(self, runner):
        """Test every preset is listed with its description."""
        result = runner.invoke(cli, ["presets", "--output", "json"], obj={})
        assert result.exit_code == 0
        assert "fig4d" in result.output
        assert "Strong coupling" in result.output


class TestOracleCommand:
    """Test the oracle command."""

    def test_value(self, runner):
        """Test a closed form is evaluated from key=value pairs."""
        result = runner.invoke(
            cli, ["oracle", "free_space_simple", "--params", "Delta=0,Omega=1", "-o", "json"], obj={}
        )
        assert result.exit_code == 0
        assert '"value": 0.4' in result.output

    def test_bad_params(self, runner):
        """Test a malformed parameter list exits with the config code."""
        result = runner.invoke(cli, ["oracle", "free_space_simple", "--params", "Delta"], obj={})
        assert result.exit_code == EXIT_CONFIG

    def test_unknown_formula(self, runner):
        """Test an unknown formula exits with the config code."""
        result = runner.invoke(cli, ["oracle", "forster"], obj={})
        assert result.exit_code == EXIT_CONFIG

    def test_singular(self, runner):
        """Test a singular evaluation exits with the solver code."""
        result = runner.invoke(
            cli,
            ["oracle", "free_space_full", "--params", "Delta=0,Omega=0,gamma_bar=1"],
            obj={},
        )
        assert result.exit_code == EXIT_SOLVER

    def test_resonance(self, runner):
        """Test a laser on a polariton exits with the solver code."""
        params = "Delta=0,delta=0,g_D=1,g_A=1,gamma=1,eta=0.1,omega_L=0"
        result = runner.invoke(cli, ["oracle", "coherent_cavity", "--params", params], obj={})
        assert result.exit_code == EXIT_SOLVER


class TestSweepCommand:
    """Test the sweep command."""

    def test_csv_to_stdout(self, runner, config_file):
        """Test the CSV goes to stdout without --out."""
        result = runner.invoke(cli, ["sweep", config_file], obj={})
        assert result.exit_code == 0
        assert "# fretcavity:" in result.output
        assert "Omega,J,status" in result.output

    def test_csv_to_file(self, runner, config_file, tmp_path):
        """Test --out writes the file and prints a summary."""
        out = tmp_path / "out.csv"
        result = runner.invoke(cli, ["sweep", config_file, "--out", str(out), "-o", "json"], obj={})
        assert result.exit_code == 0
        assert out.read_text().startswith("# fretcavity:")
        assert '"points": 4' in result.output

    def test_out_from_environment(self, runner, config_file, tmp_path):
        """Test FRETCAVITY_OUT sets the default output path."""
        out = tmp_path / "env.csv"
        result = runner.invoke(cli, ["sweep", config_file], obj={}, env={"FRETCAVITY_OUT": str(out)})
        assert result.exit_code == 0
        assert out.exists()

    def test_requires_config(self, runner):
        """Test sweep without a file or preset exits with the config code."""
        result = runner.invoke(cli, ["sweep"], obj={})
        assert result.exit_code == EXIT_CONFIG

    def test_config_error(self, runner, tmp_path):
        """Test a bad config exits with the config code."""
        path = tmp_path / "bad.conf"
        path.write_text("sweep.Omega = 0,1,2\ngammma = 1\noutputs = J\n")
        result = runner.invoke(cli, ["sweep", str(path)], obj={})
        assert result.exit_code == EXIT_CONFIG
        assert "gammma" in result.output

    def test_failed_points(self, runner, tmp_path):
        """Test failing grid points exit with the solver code."""
        path = tmp_path / "singular.conf"
        path.write_text("sweep.Delta = values:0,1\nOmega = 1\ngamma_bar = 1\noutputs = J\n")
        result = runner.invoke(cli, ["sweep", str(path)], obj={})
        assert result.exit_code == EXIT_SOLVER

    def test_bad_environment(self, runner, config_file):
        """Test a non-integer FRETCAVITY_THREADS exits with the config code."""
        result = runner.invoke(cli, ["sweep", config_file], obj={}, env={"FRETCAVITY_THREADS": "many"})
        assert result.exit_code == EXIT_CONFIG

    @pytest.mark.parametrize("ncav", ["0", "16"])
    def test_environment_cutoff_out_of_range(self, runner, config_file, ncav):
        """Test FRETCAVITY_NCAV outside 1..15 exits with the config code."""
        result = runner.invoke(cli, ["sweep", config_file], obj={}, env={"FRETCAVITY_NCAV": ncav})
        assert result.exit_code == EXIT_CONFIG
        assert "FRETCAVITY_NCAV" in result.output

    def test_option_cutoff_out_of_range(self, runner, config_file):
        """Test --ncav above the cutoff bound is rejected by click."""
        result = runner.invoke(cli, ["sweep", config_file, "--ncav", "16"], obj={})
        assert result.exit_code == 2
        assert "--ncav" in result.output


class TestCheckCommand:
    """Test the check command with stubbed checks."""

    def _result(self, passed: bool) -> CheckResult:
        return CheckResult(
            name="flow_maximum",
            description="J/Gamma peaks at 1/2",
            passed=passed,
            value=1e-4,
            tolerance=5e-3,
        )

    def test_all_pass(self, runner, monkeypatch):
        """Test passing checks exit 0."""
        monkeypatch.setattr(cli_module, "run_checks", lambda names: [self._result(True)])
        result = runner.invoke(cli, ["check", "--only", "flow_maximum"], obj={})
        assert result.exit_code == 0
        assert "checks passed" in result.output

    def test_failure(self, runner, monkeypatch):
        """Test a failing check exits with the tolerance code."""
        monkeypatch.setattr(cli_module, "run_checks", lambda names: [self._result(False)])
        result = runner.invoke(cli, ["check", "-o", "yaml"], obj={})
        assert result.exit_code == EXIT_TOLERANCE
        assert "passed: false" in result.output


class TestVersion:
    """Test --version."""

    def test_version(self, runner):
        """Test the version string is printed."""
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "fretcavity" in result.output
