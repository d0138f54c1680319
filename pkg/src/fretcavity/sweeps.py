"""Configuration-driven parameter sweeps.

Config files are flat UTF-8 ``key = value`` lines with ``#`` comments::

    preset = fig2a_parallel          # optional base preset
    sweep.d = 0.01,0.5,60,log        # min,max,count[,lin|log]
    sweep.gamma_prime = values:0,0.1,1,10
    Delta = 200
    outputs = J,Omega
    solver = analytic                # or a comma list of solvers

Physical quantities are in units of gamma, separations ``d`` in units of
the wavelength (``d_nm`` in nanometres with ``wavelength_nm``).
"""

from __future__ import annotations

import asyncio
import io
import itertools
import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from typing import Any

import pandas as pd
from dotenv.parser import parse_stream
from pydantic import ValidationError

from .analytic import cooperativity_window_issue, flow_for_spec, j_intermediate_level
from .const import (
    CSV_FLOAT_FORMAT,
    DEFAULT_N_CAV,
    DEFAULT_PUMP_RATE,
    DEFAULT_THREADS,
    DEFAULT_WAVELENGTH_NM,
    STATUS_OK,
    VERSION,
)
from .exceptions import ConfigError, FretCavityError, ParseError
from .models import (
    AxisScale,
    AxisSpec,
    EmitterRates,
    FormulaId,
    GeometrySpec,
    Normalization,
    PumpMode,
    SolverKind,
    SweepConfig,
    SweepResult,
    SystemSpec,
)
from .moments import moment_stability_margin, moment_steady_state
from .observables import flows_from_moments, normalize
from .polariton import BRANCHES, COMPONENTS, optimal_cavity_detuning, polariton_modes
from .solver import MasterEquationSolver
from .system import spec_from_geometry

_LOGGER = logging.getLogger(__name__)

PRESET_PACKAGE = "fretcavity.presets"

SPEC_KEYS = ("Delta", "delta", "Omega", "gamma_bar", "g_D", "g_A", "kappa")
RATE_KEYS = ("gamma_D", "gamma_A", "gamma_prime", "gamma_phi", "gamma_nr")
PUMP_KEYS = ("Gamma", "eta", "omega_L")
GEOMETRY_KEYS = ("d", "d_nm", "wavelength_nm")
SHORTHAND_KEYS = ("g", "gamma")
STRING_KEYS = {
    "pump": tuple(m.value for m in PumpMode),
    "orientation": ("parallel", "perpendicular"),
    "collective": ("on", "off"),
}
NUMERIC_KEYS = SPEC_KEYS + RATE_KEYS + PUMP_KEYS + GEOMETRY_KEYS + SHORTHAND_KEYS
PARAMETER_KEYS = NUMERIC_KEYS + tuple(STRING_KEYS)
META_KEYS = ("preset", "outputs", "solver", "solvers", "normalize", "n_cav", "converge", "out")
OPTIMAL = "optimal"

FLOW_OUTPUTS = ("J", "J_D", "J_A", "J_r", "p_D", "p_A", "n")
POLARITON_OUTPUTS = tuple(f"E_{b}" for b in BRANCHES) + tuple(
    f"{b}_{c}" for b in BRANCHES for c in COMPONENTS
)
PARAMETER_OUTPUTS = ("Omega", "gamma_bar", "delta", "delta_opt", "J_i", "k_FS") + POLARITON_OUTPUTS
SOLVER_OUTPUTS = {
    SolverKind.MASTER_EQUATION: FLOW_OUTPUTS + ("concurrence", "margin"),
    SolverKind.MOMENTS: FLOW_OUTPUTS + ("margin",),
    SolverKind.ANALYTIC: ("J", "J_A"),
}
GAP_OUTPUTS = ("J", "J_D", "J_A", "J_r", "p_D", "p_A", "n", "concurrence")


@dataclass
class _Entry:
    value: str
    line: int
    swept: bool


def _tokenize(text: str) -> tuple[dict[str, _Entry], dict[str, _Entry]]:
    """Split config text into (parameters, meta keys), keyed by name."""
    params: dict[str, _Entry] = {}
    meta: dict[str, _Entry] = {}
    for binding in parse_stream(io.StringIO(text)):
        line = binding.original.line
        if binding.error:
            raise ParseError(line, None, f"cannot parse '{binding.original.string.strip()}'")
        if binding.key is None:
            continue
        key = binding.key.strip()
        if binding.value is None or binding.value.strip() == "":
            raise ParseError(line, key, "missing value")
        value = binding.value.strip()

        swept = key.startswith("sweep.")
        name = key[len("sweep."):] if swept else key
        if not swept and name in META_KEYS:
            target = meta
        elif name in PARAMETER_KEYS:
            target = params
        else:
            raise ParseError(line, key, "unknown key")
        if name in target:
            raise ParseError(line, key, f"duplicate key (first set on line {target[name].line})")
        target[name] = _Entry(value=value, line=line, swept=swept)
    return params, meta


def load_preset_text(name: str) -> str:
    """Text of a shipped preset.

    Raises:
        ConfigError: no preset with this name
    """
    resource = resources.files(PRESET_PACKAGE).joinpath(f"{name}.conf")
    if not resource.is_file():
        raise ConfigError(f"Unknown preset '{name}' (known: {', '.join(list_presets())})", key="preset")
    return resource.read_text(encoding="utf-8")


def list_presets() -> list[str]:
    """Names of the shipped presets, sorted."""
    return sorted(
        entry.name[: -len(".conf")]
        for entry in resources.files(PRESET_PACKAGE).iterdir()
        if entry.name.endswith(".conf")
    )


def _parse_axis(name: str, entry: _Entry) -> AxisSpec:
    if name in STRING_KEYS:
        raise ParseError(entry.line, f"sweep.{name}", "only numeric parameters can be swept")
    text = entry.value
    try:
        if text.startswith("values:"):
            values = tuple(float(v) for v in text[len("values:"):].split(",") if v.strip())
            return AxisSpec(name=name, scale=AxisScale.VALUES, values=values)
        parts = [p.strip() for p in text.split(",")]
        if len(parts) not in (3, 4):
            raise ParseError(entry.line, f"sweep.{name}", "expected min,max,count[,lin|log]")
        scale = AxisScale(parts[3].lower()) if len(parts) == 4 else AxisScale.LIN
        if scale is AxisScale.VALUES:
            raise ValueError("use the values: form for explicit lists")
        return AxisSpec(
            name=name,
            scale=scale,
            start=float(parts[0]),
            stop=float(parts[1]),
            count=int(parts[2]),
        )
    except (ValueError, ValidationError) as err:
        raise ParseError(entry.line, f"sweep.{name}", str(err).splitlines()[0]) from err


def _parse_fixed(name: str, entry: _Entry) -> float | str:
    if name in STRING_KEYS:
        value = entry.value.lower()
        if value in ("true", "yes"):
            value = "on"
        elif value in ("false", "no"):
            value = "off"
        if value not in STRING_KEYS[name]:
            raise ParseError(entry.line, name, f"expected one of {', '.join(STRING_KEYS[name])}")
        return value
    if name == "delta" and entry.value.lower() == OPTIMAL:
        return OPTIMAL
    try:
        value = float(entry.value)
    except ValueError as err:
        raise ParseError(entry.line, name, f"not a number: '{entry.value}'") from err
    if not math.isfinite(value):
        raise ParseError(entry.line, name, "value must be finite")
    return value


def _parse_solvers(entry: _Entry) -> tuple[SolverKind, ...]:
    aliases = {kind.value.replace("_", ""): kind for kind in SolverKind}
    solvers = []
    for token in entry.value.split(","):
        key = token.strip().lower().replace("_", "")
        if key not in aliases:
            raise ParseError(entry.line, "solver", f"unknown solver '{token.strip()}'")
        solvers.append(aliases[key])
    return tuple(dict.fromkeys(solvers))


def _parse_normalization(entry: _Entry) -> Normalization:
    for norm in Normalization:
        if entry.value.lower() == norm.value.lower():
            return norm
    raise ParseError(entry.line, "normalize", f"expected one of {', '.join(n.value for n in Normalization)}")


def _parse_bool(entry: _Entry, key: str) -> bool:
    value = entry.value.lower()
    if value in ("true", "yes", "on", "1"):
        return True
    if value in ("false", "no", "off", "0"):
        return False
    raise ParseError(entry.line, key, f"expected true or false, got '{entry.value}'")


def _default_normalization(pump: str) -> Normalization:
    if pump == PumpMode.INCOHERENT.value:
        return Normalization.PER_GAMMA
    if pump == PumpMode.COHERENT.value:
        return Normalization.PER_ETA
    return Normalization.RAW


def _validate(config: SweepConfig) -> None:
    """Cross-key checks that must fail before any point is computed."""
    fixed = config.fixed
    swept = {axis.name for axis in config.axes}
    names = set(fixed) | swept
    pump = str(fixed.get("pump", PumpMode.INCOHERENT.value))

    for output in config.outputs:
        if output in PARAMETER_OUTPUTS:
            continue
        supporting = [s for s in config.solvers if output in SOLVER_OUTPUTS[s]]
        if not supporting:
            raise ConfigError(
                f"output '{output}' is not produced by {', '.join(s.value for s in config.solvers)}",
                key="outputs",
            )
    if SolverKind.MOMENTS in config.solvers and pump == PumpMode.COHERENT.value:
        raise ConfigError("the moment solver does not support a coherent drive", key="solver")
    if SolverKind.ANALYTIC in config.solvers and pump == PumpMode.NONE.value:
        raise ConfigError("analytic flows need a pump", key="solver")
    if config.normalization is Normalization.PER_GAMMA and pump != PumpMode.INCOHERENT.value:
        raise ConfigError("per_Gamma needs an incoherent pump", key="normalize")
    if config.normalization is Normalization.PER_ETA and pump != PumpMode.COHERENT.value:
        raise ConfigError("per_eta needs a coherent drive", key="normalize")
    if names & {"d", "d_nm"}:
        if {"d", "d_nm"} <= names:
            raise ConfigError("set either d or d_nm, not both", key="d")
        clash = names & {"Omega", "gamma_bar"}
        if clash:
            raise ConfigError(
                f"{', '.join(sorted(clash))} are derived from the geometry when d is set",
                key=sorted(clash)[0],
            )
    if "g" in names and names & {"g_D", "g_A"}:
        raise ConfigError("set either g or g_D/g_A", key="g")
    if "gamma" in names and names & {"gamma_D", "gamma_A"}:
        raise ConfigError("set either gamma or gamma_D/gamma_A", key="gamma")


def parse_config(text: str) -> SweepConfig:
    """Parse sweep config text, merging it over a preset when one is named.

    Raises:
        ParseError: malformed line, unknown or duplicate key, bad value
        ConfigError: inconsistent combination of keys
    """
    params, meta = _tokenize(text)
    preset = meta["preset"].value if "preset" in meta else None
    if preset is not None:
        base_params, base_meta = _tokenize(load_preset_text(preset))
        if "preset" in base_meta:
            raise ConfigError("presets cannot include other presets", key="preset")
        for name, entry in params.items():
            base_params[name] = entry
        params = base_params
        meta = {**base_meta, **meta}

    axes = tuple(_parse_axis(name, e) for name, e in params.items() if e.swept)
    fixed = {name: _parse_fixed(name, e) for name, e in params.items() if not e.swept}
    if not axes:
        raise ConfigError("at least one sweep.<param> axis is required", key="sweep")
    if "outputs" not in meta:
        raise ConfigError("outputs must be given", key="outputs")
    outputs = tuple(o.strip() for o in meta["outputs"].value.split(",") if o.strip())
    known = set(PARAMETER_OUTPUTS).union(*SOLVER_OUTPUTS.values())
    for output in outputs:
        if output not in known:
            raise ParseError(meta["outputs"].line, "outputs", f"unknown output '{output}'")
    if "solver" in meta and "solvers" in meta:
        raise ParseError(meta["solvers"].line, "solvers", "duplicate of solver")
    solver_entry = meta.get("solver") or meta.get("solvers")
    solvers = _parse_solvers(solver_entry) if solver_entry else (SolverKind.ANALYTIC,)

    pump = str(fixed.get("pump", PumpMode.INCOHERENT.value))
    normalization = (
        _parse_normalization(meta["normalize"]) if "normalize" in meta else _default_normalization(pump)
    )
    n_cav = DEFAULT_N_CAV
    if "n_cav" in meta:
        try:
            n_cav = int(meta["n_cav"].value)
        except ValueError as err:
            raise ParseError(meta["n_cav"].line, "n_cav", "not an integer") from err
    try:
        config = SweepConfig(
            preset=preset,
            axes=axes,
            fixed=fixed,
            outputs=outputs,
            solvers=solvers,
            normalization=normalization,
            n_cav=n_cav,
            converge=_parse_bool(meta["converge"], "converge") if "converge" in meta else False,
            output_path=meta["out"].value if "out" in meta else None,
        )
    except ValidationError as err:
        raise ConfigError(str(err).splitlines()[0]) from err
    _validate(config)
    _LOGGER.debug("Parsed config with %d axes, %d points", len(axes), config.point_count)
    return config


def load_config(path: str | None = None, preset: str | None = None) -> SweepConfig:
    """Read a config file, a preset, or a file on top of a preset."""
    text = ""
    if path is not None:
        try:
            with open(path, encoding="utf-8") as handle:
                text = handle.read()
        except OSError as err:
            raise ConfigError(f"cannot read {path}: {err.strerror}", key="config") from err
    if preset is not None:
        params, meta = _tokenize(text)
        if "preset" in meta and meta["preset"].value != preset:
            raise ConfigError(
                f"config names preset '{meta['preset'].value}' but '{preset}' was requested",
                key="preset",
            )
        if "preset" not in meta:
            text = f"preset = {preset}\n{text}"
    if not text.strip():
        raise ConfigError("empty configuration", key="config")
    return parse_config(text)


def resolve_point(params: dict[str, float | str], n_cav: int = DEFAULT_N_CAV) -> SystemSpec:
    """Turn one grid point's parameters into a SystemSpec.

    A separation (``d`` or ``d_nm``) derives Omega and gamma_bar from the
    geometry; ``collective = off`` forces gamma_bar = 0; ``delta = optimal``
    places the cavity at delta_opt. Free-space points (g_D = g_A = 0) use
    n_cav = 1 since the cavity is never populated.
    """
    p = dict(params)
    g = p.pop("g", None)
    gamma = p.pop("gamma", None)
    if g is not None:
        p.setdefault("g_D", g)
        p.setdefault("g_A", g)
    if gamma is not None:
        p.setdefault("gamma_D", gamma)
        p.setdefault("gamma_A", gamma)

    rates = EmitterRates(**{k: float(p.pop(k)) for k in RATE_KEYS if k in p})
    mode = PumpMode(p.pop("pump", PumpMode.INCOHERENT.value))
    pump: dict[str, Any] = {"mode": mode}
    pump.update({k: float(p.pop(k)) for k in PUMP_KEYS if k in p})
    if mode is PumpMode.INCOHERENT:
        pump.setdefault("Gamma", DEFAULT_PUMP_RATE)

    collective = p.pop("collective", "on") == "on"
    orientation = str(p.pop("orientation", "parallel"))
    wavelength_nm = float(p.pop("wavelength_nm", DEFAULT_WAVELENGTH_NM))
    d = p.pop("d", None)
    d_nm = p.pop("d_nm", None)
    delta = p.pop("delta", 0.0)

    fields: dict[str, Any] = {k: float(v) for k, v in p.items()}
    if fields.get("g_D", 0.0) == 0.0 and fields.get("g_A", 0.0) == 0.0:
        n_cav = 1
    if delta == OPTIMAL:
        delta = optimal_cavity_detuning(
            fields.get("Delta", 0.0), fields.get("g_D", 0.0), fields.get("g_A", 0.0)
        )
    fields.update(delta=float(delta), pump=pump, n_cav=n_cav)

    if d is not None or d_nm is not None:
        separation = float(d) if d is not None else float(d_nm) / wavelength_nm
        geom = GeometrySpec.from_preset(orientation, separation)
        return spec_from_geometry(geom, rates, collective=collective, **fields)
    if not collective:
        fields["gamma_bar"] = 0.0
    return SystemSpec(rates=rates, **fields)


def _parameter_outputs(spec: SystemSpec, wanted: Iterable[str]) -> dict[str, float]:
    values: dict[str, float] = {}
    wanted = set(wanted)
    if "Omega" in wanted:
        values["Omega"] = spec.Omega
    if "gamma_bar" in wanted:
        values["gamma_bar"] = spec.gamma_bar
    if "delta" in wanted:
        values["delta"] = spec.delta
    if "delta_opt" in wanted:
        values["delta_opt"] = optimal_cavity_detuning(spec.Delta, spec.g_D, spec.g_A)
    if wanted & {"J_i", "k_FS"}:
        flow, k_fs = j_intermediate_level(spec.Omega, spec.rates.gamma_D, spec.rates.gamma_nr)
        values.update(J_i=flow, k_FS=k_fs)
    if wanted & set(POLARITON_OUTPUTS):
        modes = polariton_modes(spec.Delta, spec.delta, spec.g_D, spec.g_A)
        for branch, energy, weights in zip(BRANCHES, modes.energies, modes.hopfield):
            values[f"E_{branch}"] = energy
            values.update({f"{branch}_{c}": w for c, w in zip(COMPONENTS, weights)})
    return {k: v for k, v in values.items() if k in wanted}


def _analytic_outputs(
    spec: SystemSpec, normalization: Normalization, wanted: tuple[str, ...]
) -> tuple[dict[str, float], list[str]]:
    result = flow_for_spec(spec)
    target = "J_A" if result.formula_id is FormulaId.COHERENT_CAVITY else "J"
    incoherent = spec.pump.mode is PumpMode.INCOHERENT
    value = result.value
    if incoherent and normalization is not Normalization.PER_GAMMA:
        value *= spec.pump.Gamma
    if normalization is Normalization.PER_ETA:
        value /= spec.pump.eta
    notes = [] if not result.singular else [f"{result.formula_id.value} is singular"]
    if result.formula_id is FormulaId.CAVITY_COOPERATIVITY:
        issue = cooperativity_window_issue(spec)
        if issue is not None:
            notes.append(f"outside cavity_cooperativity regime: {issue}")
    values = {}
    for name in wanted:
        if name == target:
            values[name] = value
        else:
            values[name] = math.nan
            notes.append(f"{name} not provided by {result.formula_id.value}")
    return values, notes


def _relative_gap(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / abs(b) if b != 0.0 else math.inf


class SweepRunner:
    """Evaluates a SweepConfig over its grid, fanning points out to threads.

    Example:
        >>> runner = SweepRunner(parse_config(text), threads=4)
        >>> result = await runner.run()
    """

    def __init__(self, config: SweepConfig, threads: int = DEFAULT_THREADS):
        """Initialize the runner.

        Args:
            config: Validated sweep configuration
            threads: Number of grid points evaluated concurrently
        """
        if threads < 1:
            raise ConfigError(f"threads must be >= 1, got {threads}", key="threads")
        self.config = config
        self.threads = threads
        self.axis_names = tuple(axis.name for axis in config.axes)
        self._solver_outputs = {
            solver: tuple(o for o in config.outputs if o in SOLVER_OUTPUTS[solver])
            for solver in config.solvers
        }
        self._parameter_outputs = tuple(o for o in config.outputs if o in PARAMETER_OUTPUTS)

    @property
    def columns(self) -> list[str]:
        """Table columns in output order."""
        columns = list(self.axis_names) + list(self._parameter_outputs)
        prefixed = len(self.config.solvers) > 1
        for solver, outputs in self._solver_outputs.items():
            columns += [f"{solver.value}.{o}" if prefixed else o for o in outputs]
        columns += [f"gap.{o}" for o in self._gap_outputs]
        if SolverKind.MASTER_EQUATION in self.config.solvers:
            columns.append("n_cav")
        columns.append("status")
        return columns

    @property
    def _gap_outputs(self) -> tuple[str, ...]:
        if len(self.config.solvers) < 2:
            return ()
        first, second = (self._solver_outputs[s] for s in self.config.solvers[:2])
        return tuple(o for o in first if o in second and o in GAP_OUTPUTS)

    def points(self) -> list[tuple[float, ...]]:
        """Grid points in row-major order (last axis fastest)."""
        grids = [axis.grid() for axis in self.config.axes]
        return [tuple(float(v) for v in point) for point in itertools.product(*grids)]

    def _solve(
        self, solver: SolverKind, spec: SystemSpec
    ) -> tuple[dict[str, float], list[str], int | None]:
        wanted = self._solver_outputs[solver]
        norm = self.config.normalization
        if solver is SolverKind.ANALYTIC:
            values, notes = _analytic_outputs(spec, norm, wanted)
            return values, notes, None

        if solver is SolverKind.MOMENTS:
            report = normalize(flows_from_moments(moment_steady_state(spec), spec), spec, norm)
            values = {o: getattr(report, o) for o in wanted if o in FLOW_OUTPUTS}
            if "margin" in wanted:
                values["margin"] = moment_stability_margin(spec)
            return values, [], None

        me_solver = MasterEquationSolver(spec)
        if self.config.converge:
            report, conc, n_cav = me_solver.converged_flows(norm)
        else:
            report, conc, n_cav = me_solver.flows(norm), None, spec.n_cav
        values = {o: getattr(report, o) for o in wanted if o in FLOW_OUTPUTS}
        if "concurrence" in wanted:
            values["concurrence"] = conc if conc is not None else me_solver.concurrence()
        if "margin" in wanted:
            values["margin"] = me_solver.stability_margin()
        return values, [], n_cav

    def evaluate_point(self, point: tuple[float, ...]) -> dict[str, Any]:
        """One table row; solver errors end up in the status column."""
        row: dict[str, Any] = dict.fromkeys(self.columns, math.nan)
        row.update(zip(self.axis_names, point))
        notes: list[str] = []
        params: dict[str, float | str] = {**self.config.fixed, **dict(zip(self.axis_names, point))}
        prefixed = len(self.config.solvers) > 1

        try:
            spec = resolve_point(params, self.config.n_cav)
        except (FretCavityError, ValidationError) as err:
            row["status"] = _describe(err)
            return row
        try:
            row.update(_parameter_outputs(spec, self._parameter_outputs))
        except FretCavityError as err:
            notes.append(_describe(err))

        results: dict[SolverKind, dict[str, float]] = {}
        for solver in self.config.solvers:
            try:
                values, solver_notes, n_cav = self._solve(solver, spec)
            except (FretCavityError, ValidationError) as err:
                notes.append(f"{solver.value}: {_describe(err)}")
                continue
            results[solver] = values
            notes += [f"{solver.value}: {n}" for n in solver_notes]
            if n_cav is not None:
                row["n_cav"] = n_cav
            for name, value in values.items():
                row[f"{solver.value}.{name}" if prefixed else name] = value

        if len(results) == len(self.config.solvers) and self._gap_outputs:
            first, second = (results[s] for s in self.config.solvers[:2])
            for name in self._gap_outputs:
                row[f"gap.{name}"] = _relative_gap(first[name], second[name])

        numeric = [v for k, v in row.items() if k != "status" and isinstance(v, float)]
        if not notes and not all(math.isfinite(v) for v in numeric):
            notes.append("non-finite output")
        row["status"] = "; ".join(notes) if notes else STATUS_OK
        return row

    def header(self) -> dict[str, str]:
        config = self.config
        header = {
            "fretcavity": VERSION,
            "preset": config.preset or "",
            "solvers": ",".join(s.value for s in config.solvers),
            "normalize": config.normalization.value,
            "n_cav": str(config.n_cav),
            "converge": str(config.converge).lower(),
            "outputs": ",".join(config.outputs),
            "points": str(config.point_count),
        }
        for axis in config.axes:
            if axis.scale is AxisScale.VALUES:
                header[f"sweep.{axis.name}"] = "values:" + ",".join(repr(v) for v in axis.values)
            else:
                header[f"sweep.{axis.name}"] = f"{axis.start!r},{axis.stop!r},{axis.count},{axis.scale.value}"
        for name, value in config.fixed.items():
            header[name] = repr(value) if isinstance(value, float) else value
        header["generated"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return header

    async def run(self) -> SweepResult:
        """Evaluate every grid point; rows come back in grid order."""
        points = self.points()
        semaphore = asyncio.Semaphore(self.threads)
        _LOGGER.info(
            "Sweeping %d points with %s on %d thread(s)",
            len(points),
            ",".join(s.value for s in self.config.solvers),
            self.threads,
        )

        async def _one(point: tuple[float, ...]) -> dict[str, Any]:
            async with semaphore:
                return await asyncio.to_thread(self.evaluate_point, point)

        rows = await asyncio.gather(*(_one(point) for point in points))
        table = pd.DataFrame(list(rows), columns=self.columns)
        failed = int((table["status"] != STATUS_OK).sum())
        if failed:
            _LOGGER.warning("%d of %d points reported a problem", failed, len(points))
        return SweepResult(header=self.header(), table=table)


def _describe(err: Exception) -> str:
    message = getattr(err, "message", None) or str(err).splitlines()[0]
    return f"{type(err).__name__}: {message}"


def run_sweep(config: SweepConfig, threads: int = DEFAULT_THREADS) -> SweepResult:
    """Synchronous wrapper around SweepRunner.run()."""
    return asyncio.run(SweepRunner(config, threads=threads).run())


def format_csv(result: SweepResult) -> str:
    """CSV text: ``# key: value`` metadata lines, then the table."""
    lines = [f"# {key}: {value}" for key, value in result.header.items()]
    body = result.table.to_csv(
        index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n", na_rep="nan"
    )
    return "\n".join(lines) + "\n" + body


def write_csv(result: SweepResult, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(format_csv(result))
    _LOGGER.info("Wrote %d rows to %s", result.row_count, path)
