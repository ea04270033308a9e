"""Bundled configurations reproducing the regimes of the reference figures."""

from __future__ import annotations

from importlib.resources import files

from .config import RunConfig, build_config, parse_config_text
from .model import Constant, Sinusoid

PRESET_NAMES = (
    "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b",
    "fig5a", "fig5b", "fig5c", "fig6a", "fig7a", "fig7b", "fig7c",
)


def preset_text(name: str) -> str:
    if name not in PRESET_NAMES:
        raise KeyError(name)
    return files("cpbnr").joinpath("presets", f"{name}.cfg").read_text(encoding="utf-8")


def load_preset(name: str) -> RunConfig:
    return build_config(parse_config_text(preset_text(name)), name=name)


def _profile_summary(profile) -> str:
    if isinstance(profile, Constant):
        return f"{profile.value:g} (constant)"
    if isinstance(profile, Sinusoid):
        return f"{profile.eta:g}*sin({profile.omega_prime:g}t)"
    return "0"


def preset_summary(name: str) -> str:
    cfg = load_preset(name)
    p = cfg.params
    title = preset_text(name).splitlines()[0].lstrip("# ").strip()
    return (
        f"gamma={p.gamma.evaluate(0):g} delta={p.delta.evaluate(0):g} "
        f"f(t)={_profile_summary(p.detuning)} meanN={cfg.initial.mean_n:g} "
        f"omega0={p.omega0:g} omegaC={p.omega_c:g}  [{title}]"
    )


def list_presets() -> str:
    width = max(len(n) for n in PRESET_NAMES)
    lines = [f"{name:<{width}}  {preset_summary(name)}" for name in PRESET_NAMES]
    lines.append("(rates and frequencies in units of lambda0)")
    return "\n".join(lines) + "\n"
