"""Run configuration: JSON parsing, validation, and CLI overrides.

The simulate/selfsimilar schema is flat for the physics scalars with two
optional nested blocks:

    {
      "N": 256, "dt": 0.01, "t_final": 1.0,
      "A": 0.5,               # or "self-similar"
      "lambda": 1.5, "S_inv": 2.0,
      "R0": 1.988, "modes": [[3, 0.05, "cos"]],
      "snapshot_interval": 50,
      "bending": {"kind": "weakening", "C": 0.95, "lambda_c": 1.25},
      "numerics": {"gmres_tol_nutrient": 1e-12, ...},
      "output_dir": "out", "figures": true
    }

Unknown keys are rejected.  `--set key=value` (dotted for nested blocks)
overrides scalars before validation.
"""

import json
import warnings
from dataclasses import dataclass, field, fields

from .bending import BendingModel


class ConfigError(ValueError):
    """Base class for configuration problems (CLI exit code 2)."""


class MissingFieldError(ConfigError):
    pass


class InvalidEnumError(ConfigError):
    pass


class GridSizeError(ConfigError):
    pass


SELF_SIMILAR = "self-similar"


@dataclass
class Numerics:
    gmres_tol_nutrient: float = 1e-12
    gmres_tol_stokes: float = 1e-11
    gmres_restart: int = 200
    gmres_maxit: int = 500
    filter_strength: float = 10.0
    filter_order: int = 25
    krasny_threshold: float = 1e-13
    ssd_prefactor: float = 1.0
    reproject_interval: int = 50


@dataclass
class RunConfig:
    n_points: int
    dt: float
    t_final: float
    apoptosis: object            # float or "self-similar"
    viscosity_ratio: float
    s_inv: float
    r0: float
    modes: list                  # [(l, amplitude, "cos"|"sin"), ...]
    snapshot_interval: int = 50
    bending: BendingModel = None
    numerics: Numerics = field(default_factory=Numerics)
    output_dir: str = "out"
    figures: bool = True

    @property
    def self_similar(self):
        return self.apoptosis == SELF_SIMILAR


@dataclass
class LinearConfig:
    """Inputs of the closed-form theory tables and trajectories."""

    mode: int = 3
    apoptosis: float = 0.5
    apoptosis_values: list = field(
        default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0])
    viscosity_ratios: list = field(default_factory=lambda: [0.5, 1.5, 2.5])
    s_inv: float = 2.0
    r_min: float = 1.5
    r_max: float = 5.0
    r_samples: int = 141
    r0: float = 1.988
    delta_over_r0: float = 0.025
    t_final: float = 30.0
    dt: float = 0.01
    output_dir: str = "out"
    figures: bool = True


_RUN_KEYS = {"N", "dt", "t_final", "A", "lambda", "S_inv", "R0", "modes",
             "snapshot_interval", "bending", "numerics", "output_dir",
             "figures"}
_BENDING_KEYS = {"kind", "C", "lambda_c"}
_REQUIRED = ("N", "dt", "t_final", "A", "lambda", "S_inv", "R0", "modes")


def _reject_unknown(data, allowed, context):
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown {context} key(s): {sorted(unknown)}")


def _positive(value, name):
    if not isinstance(value, (int, float)) or value <= 0:
        raise ConfigError(f"{name} must be a positive number, got {value!r}")
    return float(value)


def build_run_config(data):
    """Validate a raw dict into a RunConfig."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    _reject_unknown(data, _RUN_KEYS, "config")
    for key in _REQUIRED:
        if key not in data:
            raise MissingFieldError(f"missing required config field {key!r}")

    n = data["N"]
    if not isinstance(n, int) or n < 8 or (n & (n - 1)) != 0:
        raise GridSizeError(f"N must be a power of two >= 8, got {n!r}")

    dt = _positive(data["dt"], "dt")
    t_final = data["t_final"]
    if not isinstance(t_final, (int, float)) or t_final < 0:
        raise ConfigError(f"t_final must be nonnegative, got {t_final!r}")

    apoptosis = data["A"]
    if apoptosis == SELF_SIMILAR:
        pass
    elif isinstance(apoptosis, (int, float)) and apoptosis >= 0:
        apoptosis = float(apoptosis)
    else:
        raise InvalidEnumError(
            f'A must be a nonnegative number or "{SELF_SIMILAR}", '
            f"got {apoptosis!r}")

    lam = _positive(data["lambda"], "lambda")
    s_inv = data["S_inv"]
    if not isinstance(s_inv, (int, float)) or s_inv < 0:
        raise ConfigError(f"S_inv must be nonnegative, got {s_inv!r}")
    r0 = _positive(data["R0"], "R0")

    raw_modes = data["modes"]
    if not isinstance(raw_modes, list) or not raw_modes:
        raise ConfigError("modes must be a nonempty list of [l, amp, kind]")
    modes = []
    for entry in raw_modes:
        if (not isinstance(entry, (list, tuple)) or len(entry) != 3
                or not isinstance(entry[0], int) or entry[0] < 1
                or not isinstance(entry[1], (int, float))):
            raise ConfigError(f"bad mode entry {entry!r}; "
                              "expected [l >= 1, amplitude, 'cos'|'sin']")
        if entry[2] not in ("cos", "sin"):
            raise InvalidEnumError(
                f"mode kind must be 'cos' or 'sin', got {entry[2]!r}")
        if abs(entry[1]) > 0.5 * r0:
            warnings.warn(
                f"mode amplitude {entry[1]} exceeds half the base radius "
                f"{r0}; the perturbation is outside the small-shape regime")
        modes.append((entry[0], float(entry[1]), entry[2]))

    bending_block = data.get("bending", {})
    if not isinstance(bending_block, dict):
        raise ConfigError("bending must be an object")
    _reject_unknown(bending_block, _BENDING_KEYS, "bending")
    kind = bending_block.get("kind", "uniform")
    if kind not in ("uniform", "weakening"):
        raise InvalidEnumError(f"bending kind must be 'uniform' or "
                               f"'weakening', got {kind!r}")
    if "C" in bending_block and "lambda_c" not in bending_block:
        raise ConfigError("bending.C requires bending.lambda_c")
    try:
        bending = BendingModel(
            kind=kind, s_inv=float(s_inv),
            rigidity_fraction=float(bending_block.get("C", 0.0)),
            lambda_c=float(bending_block.get("lambda_c", 1.0)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    numerics_block = data.get("numerics", {})
    if not isinstance(numerics_block, dict):
        raise ConfigError("numerics must be an object")
    allowed = {f.name for f in fields(Numerics)}
    _reject_unknown(numerics_block, allowed, "numerics")
    numerics = Numerics(**numerics_block)

    snapshot_interval = data.get("snapshot_interval", 50)
    if not isinstance(snapshot_interval, int) or snapshot_interval < 1:
        raise ConfigError("snapshot_interval must be a positive integer")

    return RunConfig(
        n_points=n, dt=dt, t_final=float(t_final), apoptosis=apoptosis,
        viscosity_ratio=lam, s_inv=float(s_inv), r0=r0, modes=modes,
        snapshot_interval=snapshot_interval, bending=bending,
        numerics=numerics, output_dir=str(data.get("output_dir", "out")),
        figures=bool(data.get("figures", True)))


def build_linear_config(data):
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    allowed = {f.name for f in fields(LinearConfig)}
    _reject_unknown(data, allowed, "linear config")
    try:
        cfg = LinearConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.mode < 2:
        raise ConfigError("mode must be >= 2 for the shape-factor theory")
    if cfg.r_min <= 0 or cfg.r_max <= cfg.r_min:
        raise ConfigError("need 0 < r_min < r_max")
    if cfg.r_samples < 2:
        raise ConfigError("r_samples must be >= 2")
    return cfg


def parse_config(path, overrides=(), kind="run"):
    """Load, override, validate.  `kind` is "run" or "linear"."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    for item in overrides:
        data = apply_override(data, item)
    if kind == "linear":
        return build_linear_config(data)
    return build_run_config(data)


def apply_override(data, assignment):
    """Apply one "key=value" or "block.key=value" override to a raw dict."""
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} is not key=value")
    key, _, raw_value = assignment.partition("=")
    try:
        value = json.loads(raw_value)
    except json.JSONDecodeError:
        value = raw_value          # bare strings like cos / self-similar
    target = data
    parts = key.split(".")
    for part in parts[:-1]:
        target = target.setdefault(part, {})
        if not isinstance(target, dict):
            raise ConfigError(f"cannot override inside non-object {part!r}")
    target[parts[-1]] = value
    return data
