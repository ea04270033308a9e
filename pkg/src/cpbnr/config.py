"""Plain-text ``key = value`` run configuration.

Example::

    # resonant, lossless
    params.omega0 = 2000
    params.omegaC = 2000
    params.gamma = 0
    params.delta = 0
    params.detuning.kind = zero
    initial.meanN = 9
    plan.tEnd = 25
    plan.step = 5e-5
    plan.recordEvery = 200

Unknown keys are rejected so that typos never pass silently.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from pathlib import Path

from .dynamics import IntegrationPlan
from .errors import ParseError, ValidationError
from .model import Constant, ModelParams, Sinusoid, Zero
from .state import DEFAULT_TAIL_TOL, CoherentSpec

FORMATS = ("csv", "jsonl")
DETUNING_KINDS = ("zero", "constant", "sinusoid")

_FLOAT_KEYS = {
    "params.omega0", "params.omegaC", "params.gamma", "params.delta",
    "params.detuning.value", "params.detuning.eta", "params.detuning.omegaPrime",
    "initial.meanN", "initial.phase", "initial.tailTol",
    "plan.tEnd", "plan.step",
}
_INT_KEYS = {"initial.nMax", "plan.recordEvery"}
_BOOL_KEYS = {"output.normalizeEntropy"}
_STR_KEYS = {"params.detuning.kind", "output.path", "output.format"}
KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _BOOL_KEYS | _STR_KEYS

DEFAULTS = {
    "params.omega0": 2000.0,
    "params.omegaC": 2000.0,
    "params.gamma": 0.0,
    "params.delta": 0.0,
    "params.detuning.kind": "zero",
    "initial.meanN": 9.0,
    "initial.phase": 0.0,
    "initial.tailTol": DEFAULT_TAIL_TOL,
    "plan.tEnd": 25.0,
    "plan.step": 5e-5,
    "plan.recordEvery": 200,
    "output.normalizeEntropy": True,
    "output.format": "csv",
}


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    initial: CoherentSpec
    plan: IntegrationPlan
    normalize_entropy: bool = True
    output_path: str | None = None
    output_format: str = "csv"
    n_max: int | None = None
    tail_tol: float = DEFAULT_TAIL_TOL
    name: str = "run"

    def __post_init__(self):
        if self.output_format not in FORMATS:
            raise ValidationError(f"output.format must be one of {FORMATS}, got {self.output_format!r}")
        if self.n_max is not None and self.n_max < 1:
            raise ValidationError(f"initial.nMax must be >= 1, got {self.n_max}")
        if not 0 < self.tail_tol < 1:
            raise ValidationError(f"initial.tailTol must lie in (0, 1), got {self.tail_tol}")


def _convert(key, raw, lineno):
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
    except ValueError:
        raise ParseError(f"{key} expects a number", lineno, raw) from None
    if key in _BOOL_KEYS:
        low = raw.lower()
        if low in ("true", "yes", "on", "1"):
            return True
        if low in ("false", "no", "off", "0"):
            return False
        raise ParseError(f"{key} expects true/false", lineno, raw)
    return raw


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError("expected 'key = value'", lineno, body)
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ParseError("unknown key", lineno, key)
        if key in values:
            raise ParseError("duplicate key", lineno, key)
        if not raw:
            raise ParseError(f"missing value for {key}", lineno, body)
        values[key] = _convert(key, raw, lineno)
    return values


def _detuning(values):
    kind = values["params.detuning.kind"].lower()
    if kind not in DETUNING_KINDS:
        raise ValidationError(f"params.detuning.kind must be one of {DETUNING_KINDS}, got {kind!r}")
    needed = {
        "zero": (),
        "constant": ("params.detuning.value",),
        "sinusoid": ("params.detuning.eta", "params.detuning.omegaPrime"),
    }[kind]
    extra = {"params.detuning.value", "params.detuning.eta", "params.detuning.omegaPrime"} - set(needed)
    for key in needed:
        if key not in values:
            raise ValidationError(f"detuning kind {kind!r} requires {key}")
    for key in sorted(extra):
        if key in values:
            raise ValidationError(f"{key} is not used by detuning kind {kind!r}")
    if kind == "constant":
        value = values["params.detuning.value"]
        return Constant(value) if value != 0 else Zero()
    if kind == "sinusoid":
        return Sinusoid(values["params.detuning.eta"], values["params.detuning.omegaPrime"])
    return Zero()


def _loss(value):
    return Constant(value) if value != 0 else Zero()


def build_config(values: dict, name: str = "run") -> RunConfig:
    merged = {**DEFAULTS, **values}
    if merged["params.gamma"] < 0:
        raise ValidationError(f"params.gamma must be >= 0, got {merged['params.gamma']}")
    if merged["params.delta"] < 0:
        raise ValidationError(f"params.delta must be >= 0, got {merged['params.delta']}")
    params = ModelParams(
        omega0=merged["params.omega0"],
        omega_c=merged["params.omegaC"],
        gamma=_loss(merged["params.gamma"]),
        delta=_loss(merged["params.delta"]),
        detuning=_detuning(merged),
    )
    initial = CoherentSpec(merged["initial.meanN"], merged["initial.phase"])
    plan = IntegrationPlan(merged["plan.tEnd"], merged["plan.step"], merged["plan.recordEvery"])
    return RunConfig(
        params=params,
        initial=initial,
        plan=plan,
        normalize_entropy=merged["output.normalizeEntropy"],
        output_path=merged.get("output.path"),
        output_format=merged["output.format"].lower(),
        n_max=merged.get("initial.nMax"),
        tail_tol=merged["initial.tailTol"],
        name=name,
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return build_config(parse_config_text(text), name=path.stem)


def config_to_values(cfg: RunConfig) -> dict:
    p = cfg.params
    values = {
        "params.omega0": p.omega0,
        "params.omegaC": p.omega_c,
        "params.gamma": p.gamma.evaluate(0.0),
        "params.delta": p.delta.evaluate(0.0),
        "initial.meanN": cfg.initial.mean_n,
        "initial.phase": cfg.initial.phase,
        "initial.tailTol": cfg.tail_tol,
        "plan.tEnd": cfg.plan.t_end,
        "plan.step": cfg.plan.step,
        "plan.recordEvery": cfg.plan.record_every,
        "output.normalizeEntropy": cfg.normalize_entropy,
        "output.format": cfg.output_format,
    }
    det = p.detuning
    if isinstance(det, Constant):
        values["params.detuning.kind"] = "constant"
        values["params.detuning.value"] = det.value
    elif isinstance(det, Sinusoid):
        values["params.detuning.kind"] = "sinusoid"
        values["params.detuning.eta"] = det.eta
        values["params.detuning.omegaPrime"] = det.omega_prime
    else:
        values["params.detuning.kind"] = "zero"
    if cfg.n_max is not None:
        values["initial.nMax"] = cfg.n_max
    return values


def dump_config(cfg: RunConfig) -> str:
    """Canonical text form: sorted keys, ``repr`` floats, no output path."""
    lines = []
    for key, value in sorted(config_to_values(cfg).items()):
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif key in _FLOAT_KEYS:
            text = repr(float(value))
        else:
            text = str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"


def config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(dump_config(cfg).encode("utf-8")).hexdigest()


def with_overrides(
    cfg: RunConfig,
    *,
    step: float | None = None,
    t_end: float | None = None,
    normalize_entropy: bool | None = None,
    output_path: str | None = None,
    output_format: str | None = None,
) -> RunConfig:
    """Apply command-line overrides; they take precedence over file values.

    Changing the step keeps the recording interval in time fixed, so the
    output grid is the same whichever step is used.
    """
    plan = cfg.plan
    if step is not None or t_end is not None:
        new_step = plan.step if step is None else step
        new_t_end = plan.t_end if t_end is None else t_end
        interval = plan.record_interval
        every = max(1, int(round(interval / new_step)))
        if abs(every * new_step - interval) > 1e-9 * interval:
            raise ValidationError(
                f"step {new_step:g} does not divide the record interval {interval:g}"
            )
        plan = IntegrationPlan(new_t_end, new_step, every)
    changes = {"plan": plan}
    if normalize_entropy is not None:
        changes["normalize_entropy"] = normalize_entropy
    if output_path is not None:
        changes["output_path"] = output_path
    if output_format is not None:
        changes["output_format"] = output_format
    return replace(cfg, **changes)
