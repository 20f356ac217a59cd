"""Reader for the line-oriented ``[section]`` / ``key = value`` scenario and sweep files."""

import logging
import math
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Tuple, Union

from pydantic import ValidationError

from app.config import settings
from app.models.schemas import ScenarioSpec, SweepSpec
from engines.environment import EnvironmentModel
from engines.errors import ScenarioParseError
from engines.optimization import ControlBounds, FreeParameter, SolverConfig
from engines.vehicle import AnalyticCoefficients, VehicleParams

logger = logging.getLogger(__name__)

STATE_KEYS = ("u", "w", "q", "theta", "z")

SCENARIO_KEYS: Dict[str, set] = {
    "scenario": {"name", "phase", "launch_mode", "t_f", "dt", "t_max"},
    "initial": {"u", "w", "q", "theta", "z", "altitude"},
    "terminal": {"u", "w", "q", "theta", "z", "altitude"},
    "bounds": {"thrust_min", "thrust_max", "deflection_max"},
    "free": {"z0", "uf", "altitude_f"},
    "vehicle": {
        "mass", "inertia_x", "inertia_y", "inertia_z", "length", "diameter", "reference_area", "volume",
        "x_cg", "x_cb", "nose_length", "thrust_arm", "added_mass_reference", "axial_added_mass_coefficient",
    },
    "environment": {
        "water_density", "gravity", "isa_sea_level_density", "isa_sea_level_temperature", "isa_lapse_rate",
        "isa_gravity", "gas_constant_air", "sound_speed_air",
    },
    "coefficients": {"table", "preset", "axial", "normal_slope", "pitch_slope", "pitch_damping"},
    "solver": {
        "constraint_tol", "gradient_tol", "max_outer", "max_inner", "substeps", "step", "hold",
        "thrust_weight", "deflection_weight",
    },
    "boost": {"u", "theta", "z", "altitude", "t_f"},
}

SWEEP_KEYS: Dict[str, set] = {"sweep": {"base", "parameter", "values", "paired_tf", "out"}}

# phase/mode defaults: (initial, terminal); None = free, theta in degrees
DEFAULTS = {
    ("launch", "horizontal"): ([10.0, 0.0, 0.0, 0.0, 100.0], [35.0, None, None, None, 0.0]),
    ("launch", "vertical"): ([10.0, 0.0, 0.0, 90.0, 100.0], [35.0, None, None, 90.0, 0.0]),
    ("boost", "horizontal"): ([35.0, 0.0, 0.0, None, 0.0], [135.0, None, None, 0.0, -600.0]),
    ("boost", "vertical"): ([35.0, 0.0, 0.0, 90.0, 0.0], [135.0, None, None, 0.0, -600.0]),
}
BOOST_TERMINAL = [135.0, None, None, 0.0, -600.0]
BOOST_T_F = 15.0

SETTINGS_OVERRIDES = {
    "constraint_tol": "CONSTRAINT_TOL",
    "gradient_tol": "GRADIENT_TOL",
    "max_outer": "SOLVER_MAX_OUTER",
    "max_inner": "SOLVER_MAX_INNER",
    "substeps": "SOLVER_SUBSTEPS",
    "integrator_step": "INTEGRATOR_STEP",
}


class Entry(NamedTuple):
    value: str
    line: int


Sections = Dict[str, Dict[str, Entry]]


def read_sections(path: Union[str, Path], allowed: Dict[str, set]) -> Sections:
    """Split a file into {section: {key: Entry}}, rejecting unknown sections and keys."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioParseError(f"cannot read {path}: {e}") from e

    sections: Sections = {}
    current: Optional[str] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            if current not in allowed:
                raise ScenarioParseError(f"unknown section [{current}]", line=number)
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise ScenarioParseError(f"expected 'key = value', got '{line}'", line=number)
        if current is None:
            raise ScenarioParseError("key outside of any [section]", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in allowed[current]:
            raise ScenarioParseError(f"unknown key '{key}' in [{current}]", line=number, field=f"{current}.{key}")
        if key in sections[current]:
            raise ScenarioParseError(f"duplicate key '{key}' in [{current}]", line=number, field=f"{current}.{key}")
        sections[current][key] = Entry(value, number)
    return sections


def _number(entry: Entry, field: str) -> float:
    try:
        value = float(entry.value)
    except ValueError:
        raise ScenarioParseError(f"expected a number, got '{entry.value}'", line=entry.line, field=field)
    if not math.isfinite(value):
        raise ScenarioParseError("value must be finite", line=entry.line, field=field)
    return value


def _integer(entry: Entry, field: str) -> int:
    value = _number(entry, field)
    if value != int(value):
        raise ScenarioParseError(f"expected an integer, got '{entry.value}'", line=entry.line, field=field)
    return int(value)


def _numbers(entry: Entry, field: str) -> List[float]:
    parts = [p.strip() for p in entry.value.split(",") if p.strip()]
    if not parts:
        raise ScenarioParseError("expected a comma-separated list of numbers", line=entry.line, field=field)
    return [_number(Entry(p, entry.line), field) for p in parts]


def _state_block(section: Dict[str, Entry], name: str, base: List[Optional[float]],
                 allow_free: bool) -> Tuple[List[Optional[float]], Dict[str, int]]:
    """Overlay a state section on ``base``; theta in degrees, altitude stored as -z."""
    values = list(base)
    lines: Dict[str, int] = {}
    if "z" in section and "altitude" in section:
        entry = section["altitude"]
        raise ScenarioParseError("give either z or altitude, not both", line=entry.line, field=f"{name}.altitude")
    for key, entry in section.items():
        field = f"{name}.{key}"
        index = STATE_KEYS.index("z" if key == "altitude" else key)
        lines[STATE_KEYS[index]] = entry.line
        if entry.value.lower() == "free":
            if not allow_free:
                raise ScenarioParseError("only terminal components may be free", line=entry.line, field=field)
            values[index] = None
            continue
        value = _number(entry, field)
        if key == "theta":
            value = math.radians(value)
        elif key == "altitude":
            value = -value
        values[index] = value
    for index, key in enumerate(STATE_KEYS):
        # defaults are stored in degrees
        if key == "theta" and key not in lines and values[index] is not None:
            values[index] = math.radians(values[index])
    return values, lines


def _free_parameters(section: Dict[str, Entry]) -> List[FreeParameter]:
    builders = {
        "z0": FreeParameter.initial_depth,
        "uf": FreeParameter.final_velocity,
        "altitude_f": FreeParameter.final_altitude,
    }
    free = []
    for key, entry in section.items():
        box = _numbers(entry, f"free.{key}")
        if len(box) != 2 or box[1] < box[0]:
            raise ScenarioParseError("expected 'lower, upper' with lower <= upper", line=entry.line, field=f"free.{key}")
        free.append(builders[key](box[0], box[1]))
    return free


def _vehicle(section: Dict[str, Entry]) -> Tuple[VehicleParams, Dict[str, object]]:
    defaults = VehicleParams()
    fields: Dict[str, object] = {}
    extras: Dict[str, object] = {}
    inertia = list(defaults.inertia)
    cg, cb = list(defaults.cg_position), list(defaults.cb_position)
    for key, entry in section.items():
        field = f"vehicle.{key}"
        if key == "added_mass_reference":
            if entry.value.lower() not in ("cb", "cg"):
                raise ScenarioParseError("expected 'cb' or 'cg'", line=entry.line, field=field)
            extras[key] = entry.value.lower()
        elif key == "axial_added_mass_coefficient":
            extras[key] = _number(entry, field)
        elif key.startswith("inertia_"):
            inertia["xyz".index(key[-1])] = _number(entry, field)
        elif key == "x_cg":
            cg[0] = _number(entry, field)
        elif key == "x_cb":
            cb[0] = _number(entry, field)
        else:
            fields[key] = _number(entry, field)
    try:
        vehicle = VehicleParams(
            **fields, inertia=tuple(inertia), cg_position=tuple(cg), cb_position=tuple(cb)
        )
    except ValidationError as e:
        first = section[next(iter(section))] if section else None
        raise ScenarioParseError(f"invalid vehicle parameters: {_first_message(e)}",
                                 line=first.line if first else None, field="vehicle")
    return vehicle, extras


def _first_message(error: ValidationError) -> str:
    detail = error.errors()[0]
    location = ".".join(str(p) for p in detail.get("loc", ()))
    return f"{location}: {detail['msg']}" if location else detail["msg"]


def parse_scenario(path: Union[str, Path]) -> ScenarioSpec:
    """Read and validate a scenario file, filling every documented default."""
    path = Path(path)
    sections = read_sections(path, SCENARIO_KEYS)
    head = sections.get("scenario", {})
    lines: Dict[str, int] = {f"scenario.{k}": e.line for k, e in head.items()}

    phase = head["phase"].value.lower() if "phase" in head else "launch"
    if phase not in ("launch", "boost", "combined"):
        raise ScenarioParseError(f"unknown phase '{phase}'", line=head["phase"].line, field="scenario.phase")
    mode = head["launch_mode"].value.lower() if "launch_mode" in head else "horizontal"
    if mode not in ("horizontal", "vertical"):
        raise ScenarioParseError(f"unknown launch mode '{mode}'", line=head["launch_mode"].line,
                                 field="scenario.launch_mode")

    base_initial, base_terminal = DEFAULTS[("boost" if phase == "boost" else "launch", mode)]
    initial, _ = _state_block(sections.get("initial", {}), "initial", base_initial, allow_free=False)
    terminal, _ = _state_block(sections.get("terminal", {}), "terminal", base_terminal, allow_free=True)
    if phase == "boost" and initial[3] is None:
        raise ScenarioParseError("boost scenarios need an initial pitch (water-exit angle)", field="initial.theta")
    if phase in ("launch", "combined") and mode == "horizontal" and terminal[3] is None \
            and "theta" not in sections.get("terminal", {}):
        raise ScenarioParseError("horizontal launch scenarios need a terminal pitch (water-exit angle)",
                                 field="terminal.theta")

    dt = _number(head["dt"], "scenario.dt") if "dt" in head else 0.2
    if "t_f" not in head:
        raise ScenarioParseError("missing final time", field="scenario.t_f")
    t_f = _number(head["t_f"], "scenario.t_f")
    if dt <= 0 or t_f <= 0:
        raise ScenarioParseError("t_f and dt must be positive", line=head["t_f"].line, field="scenario.t_f")
    ratio = t_f / dt
    if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
        raise ScenarioParseError("t_f must be a multiple of dt", line=head["t_f"].line, field="scenario.t_f")

    spec: Dict[str, object] = {
        "name": head["name"].value if "name" in head else path.stem,
        "phase": phase,
        "launch_mode": mode,
        "initial": tuple(initial),
        "terminal": tuple(terminal),
        "t_f": t_f,
        "dt": dt,
    }
    if "t_max" in head:
        spec["t_max"] = _number(head["t_max"], "scenario.t_max")

    bounds = sections.get("bounds", {})
    bound_values = {}
    for key, entry in bounds.items():
        value = _number(entry, f"bounds.{key}")
        bound_values[key] = math.radians(value) if key == "deflection_max" else value
        lines[f"bounds.{key}"] = entry.line
    if bound_values:
        spec["bounds"] = _build(ControlBounds, bound_values, "bounds", lines)

    spec["free_parameters"] = _free_parameters(sections.get("free", {}))

    vehicle, extras = _vehicle(sections.get("vehicle", {}))
    spec["vehicle"] = vehicle
    spec.update(extras)

    environment = {k: _number(e, f"environment.{k}") for k, e in sections.get("environment", {}).items()}
    if environment:
        spec["environment"] = _build(EnvironmentModel, environment, "environment", lines)

    spec.update(_coefficients(sections.get("coefficients", {}), path.parent))
    spec.update(_solver(sections.get("solver", {}), lines))

    if phase == "combined":
        boost = sections.get("boost", {})
        boost_terminal, _ = _state_block({k: e for k, e in boost.items() if k != "t_f"}, "boost",
                                         BOOST_TERMINAL, allow_free=True)
        spec["boost_terminal"] = tuple(boost_terminal)
        spec["boost_t_f"] = _number(boost["t_f"], "boost.t_f") if "t_f" in boost else BOOST_T_F
    elif "boost" in sections:
        raise ScenarioParseError("[boost] is only valid for combined scenarios", field="boost")

    try:
        scenario = ScenarioSpec(**spec)
    except ValidationError as e:
        detail = e.errors()[0]
        field = ".".join(str(p) for p in detail.get("loc", ())) or None
        raise ScenarioParseError(f"invalid scenario: {_first_message(e)}",
                                 line=lines.get(f"scenario.{field}") if field else None, field=field)
    logger.info(f"Parsed scenario '{scenario.name}' ({scenario.phase}, t_f={scenario.t_f} s) from {path}")
    return scenario


def _build(model, values: Dict[str, object], section: str, lines: Dict[str, int]):
    try:
        return model(**values)
    except ValidationError as e:
        detail = e.errors()[0]
        key = str(detail["loc"][0]) if detail.get("loc") else None
        field = f"{section}.{key}" if key else section
        raise ScenarioParseError(f"invalid [{section}]: {_first_message(e)}", line=lines.get(field), field=field)


def _coefficients(section: Dict[str, Entry], base_dir: Path) -> Dict[str, object]:
    out: Dict[str, object] = {}
    if "table" in section:
        entry = section["table"]
        table = (base_dir / entry.value).resolve()
        if not table.is_file():
            raise ScenarioParseError(f"coefficient table not found: {table}", line=entry.line,
                                     field="coefficients.table")
        out["coefficient_table"] = str(table)
    preset = section["preset"].value.lower() if "preset" in section else "default"
    if preset not in ("default", "placeholder"):
        raise ScenarioParseError(f"unknown preset '{preset}'", line=section["preset"].line,
                                 field="coefficients.preset")
    base = AnalyticCoefficients.placeholder() if preset == "placeholder" else AnalyticCoefficients()
    overrides = {k: _number(e, f"coefficients.{k}") for k, e in section.items() if k not in ("table", "preset")}
    out["coefficients"] = base.model_copy(update=overrides)
    return out


def _solver(section: Dict[str, Entry], lines: Dict[str, int]) -> Dict[str, object]:
    config = {
        "constraint_tol": settings.CONSTRAINT_TOL,
        "gradient_tol": settings.GRADIENT_TOL,
        "max_outer": settings.SOLVER_MAX_OUTER,
        "max_inner": settings.SOLVER_MAX_INNER,
    }
    out: Dict[str, object] = {"substeps": settings.SOLVER_SUBSTEPS, "integrator_step": settings.INTEGRATOR_STEP}
    weights = [1.0, 0.0]
    for key, entry in section.items():
        field = f"solver.{key}"
        lines[field] = entry.line
        if key in ("max_outer", "max_inner"):
            config[key] = _integer(entry, field)
        elif key in ("constraint_tol", "gradient_tol"):
            config[key] = _number(entry, field)
        elif key == "substeps":
            out["substeps"] = _integer(entry, field)
        elif key == "step":
            out["integrator_step"] = _number(entry, field)
        elif key == "hold":
            hold = entry.value.lower()
            if hold not in ("linear", "zero_order"):
                raise ScenarioParseError("expected 'linear' or 'zero_order'", line=entry.line, field=field)
            out["hold"] = hold
        elif key == "thrust_weight":
            weights[0] = _number(entry, field)
        elif key == "deflection_weight":
            weights[1] = _number(entry, field)
    # values set through the environment win over the file
    for key, name in SETTINGS_OVERRIDES.items():
        if name in settings.model_fields_set:
            target = config if key in config else out
            target[key] = getattr(settings, name)
    out["solver"] = _build(SolverConfig, config, "solver", lines)
    out["weights"] = tuple(weights)
    return out


def parse_sweep(path: Union[str, Path]) -> SweepSpec:
    """Read a sweep file; ``base`` is resolved relative to the sweep file."""
    path = Path(path)
    sections = read_sections(path, SWEEP_KEYS)
    sweep = sections.get("sweep")
    if not sweep:
        raise ScenarioParseError("missing [sweep] section", field="sweep")
    for key in ("base", "parameter", "values"):
        if key not in sweep:
            raise ScenarioParseError(f"missing key '{key}'", field=f"sweep.{key}")

    base_path = (path.parent / sweep["base"].value).resolve()
    if not base_path.is_file():
        raise ScenarioParseError(f"base scenario not found: {base_path}", line=sweep["base"].line, field="sweep.base")
    base = parse_scenario(base_path)

    values = _numbers(sweep["values"], "sweep.values")
    paired = _numbers(sweep["paired_tf"], "sweep.paired_tf") if "paired_tf" in sweep else None
    try:
        spec = SweepSpec(
            base_path=str(base_path),
            base=base,
            parameter=sweep["parameter"].value.lower(),
            values=values,
            paired_tf=paired,
            out=sweep["out"].value if "out" in sweep else None,
        )
    except ValidationError as e:
        detail = e.errors()[0]
        key = str(detail["loc"][0]) if detail.get("loc") else "sweep"
        entry = sweep.get(key)
        raise ScenarioParseError(f"invalid sweep: {_first_message(e)}", line=entry.line if entry else None,
                                 field=f"sweep.{key}")
    logger.info(f"Parsed sweep over '{spec.parameter}' with {len(spec.values)} values from {path}")
    return spec
