"""Configuration documents: strict schema, Hz-to-rad/s conversion, presets.

The same pydantic models validate config files fed to the CLI and request
bodies posted to the service, so both surfaces reject exactly the same
documents. Physical frequencies are linear (Hz) in the document and
converted to angular internally; grid bounds and widths carry an explicit
_rad_s suffix to match the output columns.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import ConfigError
from .params import SystemParams

TWO_PI = 2.0 * math.pi

REQUIRED_PARAM_KEYS = (
    "lambda_c_m",
    "cavity_length_m",
    "m_eff_kg",
    "omega_m_hz",
    "gamma_m_hz",
    "kappa_hz",
    "r0_m",
    "capacitance_f",
    "bias_voltage_v",
    "pump_power_w",
)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", strict=True, frozen=True)


class ParamsModel(_Strict):
    """Mirror of SystemParams with documented units; no unit inference."""

    lambda_c_m: float = Field(gt=0)
    cavity_length_m: float = Field(gt=0)
    m_eff_kg: float = Field(gt=0)
    omega_m_hz: float = Field(gt=0)
    gamma_m_hz: float = Field(gt=0)
    kappa_hz: float = Field(gt=0)
    r0_m: float = Field(gt=0)
    capacitance_f: float = Field(gt=0)
    bias_voltage_v: float = Field(ge=0)
    pump_power_w: float = Field(ge=0)
    n_charge: int = Field(default=0, ge=0)
    delta_c_policy: Literal["resonant_at_zero_charge", "explicit"] = (
        "resonant_at_zero_charge"
    )
    delta_c_hz: Optional[float] = None
    repulsive: bool = False

    @model_validator(mode="after")
    def _policy_consistent(self):
        if self.delta_c_policy == "explicit" and self.delta_c_hz is None:
            raise ValueError("delta_c_policy 'explicit' requires delta_c_hz")
        if self.delta_c_policy != "explicit" and self.delta_c_hz is not None:
            raise ValueError("delta_c_hz is only accepted with delta_c_policy 'explicit'")
        return self

    def to_system_params(self) -> SystemParams:
        return SystemParams(
            lambda_c=self.lambda_c_m,
            cavity_length=self.cavity_length_m,
            m_eff=self.m_eff_kg,
            omega_m=TWO_PI * self.omega_m_hz,
            gamma_m=TWO_PI * self.gamma_m_hz,
            kappa=TWO_PI * self.kappa_hz,
            r0=self.r0_m,
            capacitance=self.capacitance_f,
            bias_voltage=self.bias_voltage_v,
            pump_power=self.pump_power_w,
            n_charge=self.n_charge,
            delta_c_policy=self.delta_c_policy,
            delta_c_explicit=(
                None if self.delta_c_hz is None else TWO_PI * self.delta_c_hz
            ),
            repulsive=self.repulsive,
        )


class SpectrumModel(_Strict):
    """Grid for spectrum-type commands; bounds default to a sqrt(beta) span."""

    x_min_rad_s: Optional[float] = None
    x_max_rad_s: Optional[float] = None
    points: int = Field(default=2001, ge=2)
    x_span_sqrt_beta: float = Field(default=4.0, gt=0)

    @model_validator(mode="after")
    def _bounds_consistent(self):
        if (self.x_min_rad_s is None) != (self.x_max_rad_s is None):
            raise ValueError("x_min_rad_s and x_max_rad_s must be given together")
        if self.x_min_rad_s is not None and not self.x_min_rad_s < self.x_max_rad_s:
            raise ValueError("x_min_rad_s must be below x_max_rad_s")
        return self


class SweepModel(_Strict):
    n_min: int = Field(default=0, ge=0)
    n_max: int = Field(default=80, ge=0)

    @model_validator(mode="after")
    def _ordered(self):
        if self.n_min > self.n_max:
            raise ValueError("n_min must not exceed n_max")
        return self


class InvertModel(_Strict):
    width_rad_s: float = Field(gt=0)
    n_min: int = Field(default=0, ge=0)
    n_max: int = Field(default=80, ge=1)


class OracleModel(_Strict):
    """Settings for the time-domain check; 'scaled' swaps in the fast-settling set."""

    mode: Literal["scaled", "literal"] = "scaled"
    n_deltas: int = Field(default=11, ge=1)
    x_span_sqrt_beta: float = Field(default=2.0, ge=0)
    eps_p_ratio: float = Field(default=0.005, gt=0, le=0.1)
    settle_gamma_m: float = Field(default=30.0, gt=0)
    window_periods: int = Field(default=40, ge=1)
    samples_per_period: int = Field(default=64, ge=4)


class OutputModel(_Strict):
    path: Optional[str] = None
    format: Literal["csv", "json"] = "csv"


class RunConfigModel(_Strict):
    """Top-level config document; unknown keys are rejected at every level."""

    params: ParamsModel
    spectrum: Optional[SpectrumModel] = None
    sweep: Optional[SweepModel] = None
    invert: Optional[InvertModel] = None
    oracle: Optional[OracleModel] = None
    output: Optional[OutputModel] = None

    def resolved_document(self) -> dict:
        """Canonical JSON-compatible form with defaults applied."""
        return self.model_dump(mode="json")


def _format_issue(err: dict) -> str:
    loc = ".".join(str(part) for part in err["loc"])
    kind = err["type"]
    if kind == "extra_forbidden":
        return f"unknown key '{loc}'"
    if kind == "missing":
        msg = f"missing required key '{loc}'"
        if loc == "params":
            msg += " (required fields: " + ", ".join(REQUIRED_PARAM_KEYS) + ")"
        return msg
    return f"invalid value for '{loc}': {err['msg']}"


def parse_config(document) -> RunConfigModel:
    """Validate a config document (JSON text or mapping) strictly.

    Raises ConfigError naming every offending key.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ConfigError(
            f"config document must be a JSON object, got {type(document).__name__}"
        )
    try:
        return RunConfigModel.model_validate(document)
    except ValidationError as exc:
        issues = "; ".join(_format_issue(e) for e in exc.errors())
        raise ConfigError(issues) from exc


def apply_overrides(document: dict, overrides) -> dict:
    """Apply KEY.PATH=VALUE overrides to a raw document (returns a copy).

    Values are parsed as JSON scalars, falling back to plain strings.
    """
    doc = json.loads(json.dumps(document))
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override must look like key.path=value, got {item!r}")
        path, raw = item.split("=", 1)
        keys = [k for k in path.strip().split(".") if k]
        if not keys:
            raise ConfigError(f"override has an empty key path: {item!r}")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = doc
        for key in keys[:-1]:
            nxt = node.get(key)
            if not isinstance(nxt, dict):
                nxt = {}
                node[key] = nxt
            node = nxt
        node[keys[-1]] = value
    return doc


def list_presets() -> list[str]:
    root = resources.files("omitcharge") / "presets"
    return sorted(
        p.name.removesuffix(".config")
        for p in root.iterdir()
        if p.name.endswith(".config")
    )


def load_preset(name: str) -> dict:
    """Shipped configuration document by name ('fig2' or 'fig2.config')."""
    stem = name.removesuffix(".config")
    path = resources.files("omitcharge") / "presets" / f"{stem}.config"
    if not path.is_file():
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(list_presets())}"
        )
    return json.loads(path.read_text(encoding="utf-8"))
