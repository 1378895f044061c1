"""Model parameters and the key=value parameter file format.

All connection weights, rest levels, thresholds and the cycle limit live in
one flat ``Parameters`` record so that a complete configuration can be
written as a plain text file, one ``NAME = VALUE`` per line.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import IO

from .errors import ConfigError


@dataclass(frozen=True)
class Parameters:
    # activation range and decay
    MIN_ACT: float = -0.2
    MAX_ACT: float = 1.0
    DECAY_RATE: float = 0.07

    # resting levels
    MIN_REST: float = -0.2
    MAX_REST: float = 0.0
    # normalisation constant for frequency-derived rest levels; None means
    # "use the maximum observed in the loaded lexicon", a number switches to
    # the fixed-constant compatibility mode.
    MAX_OPB: float | None = None
    I_rest: float = 1.0
    S_rest: float = -0.2
    L_rest: float = -0.2

    # input-to-orthography weighting
    IO_multiplier: float = 0.2

    # excitatory connection weights (alpha), one per direction
    OP_alpha: float = 0.03
    OS_alpha: float = 0.03
    PO_alpha: float = 0.03
    PS_alpha: float = 0.3
    SO_alpha: float = 0.03
    SP_alpha: float = 0.3
    LO_alpha: float = 0.0
    LP_alpha: float = 0.0
    OL_alpha: float = 0.0
    PL_alpha: float = 0.0

    # inhibitory pool weights (gamma), all <= 0
    OO_gamma: float = -0.001
    PP_gamma: float = -0.001
    SS_gamma: float = -0.5
    LL_gamma: float = 0.0
    LO_gamma: float = 0.0
    LP_gamma: float = 0.0
    OL_gamma: float = 0.0
    PL_gamma: float = 0.0

    SS_multiplier: float = 0.0

    # task/decision thresholds
    criterion_value: float = 0.72
    shortlist_input_threshold: float = 0.7
    shortlist_output_threshold: float = 0.5

    # linear cycles -> milliseconds report mapping
    timestep_multiplier: float = 1.0
    timestep_adder: float = 0.0

    max_cycles: int = 40

    def validate(self) -> None:
        if self.max_cycles < 1:
            raise ConfigError("max_cycles must be >= 1")
        if not (self.MIN_ACT <= self.MIN_REST <= self.MAX_REST <= self.MAX_ACT):
            raise ConfigError("rest range must satisfy MIN_ACT <= MIN_REST <= MAX_REST <= MAX_ACT")
        for name in ("S_rest", "L_rest"):
            value = getattr(self, name)
            if not (self.MIN_ACT <= value <= self.MAX_REST):
                raise ConfigError(f"{name}={value} outside [MIN_ACT, MAX_REST]")
        for name in GAMMA_NAMES:
            if getattr(self, name) > 0:
                raise ConfigError(f"{name} must be <= 0")
        if self.SS_multiplier < 0:
            raise ConfigError("SS_multiplier must be >= 0")
        if self.MAX_OPB is not None and self.MAX_OPB <= 0:
            raise ConfigError("MAX_OPB must be positive when given")

    def updated(self, **changes) -> "Parameters":
        p = replace(self, **changes)
        p.validate()
        return p

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


GAMMA_NAMES = (
    "OO_gamma", "PP_gamma", "SS_gamma",
    "LL_gamma", "LO_gamma", "LP_gamma", "OL_gamma", "PL_gamma",
)

_FIELD_TYPES = {f.name: f.type for f in fields(Parameters)}
PARAMETER_NAMES = tuple(_FIELD_TYPES)


def _convert(name: str, raw: str):
    raw = raw.strip()
    try:
        if name == "max_cycles":
            return int(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"parameter {name}: cannot parse value {raw!r}") from None


def parse_assignment(text: str) -> tuple[str, float | int]:
    """Parse one ``NAME = VALUE`` (or ``NAME=VALUE``) assignment."""
    if "=" not in text:
        raise ConfigError(f"expected NAME=VALUE, got {text!r}")
    name, raw = text.split("=", 1)
    name = name.strip()
    if name not in _FIELD_TYPES:
        known = ", ".join(sorted(PARAMETER_NAMES))
        raise ConfigError(f"unknown parameter {name!r}; valid names: {known}")
    return name, _convert(name, raw)


def load_parameters(source: str | IO[str], base: Parameters | None = None) -> Parameters:
    """Read a parameter file, overriding ``base`` (defaults if omitted).

    Blank lines and lines starting with ``#`` are skipped.
    """
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source.read().splitlines()
    changes = {}
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            name, value = parse_assignment(stripped)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
        changes[name] = value
    params = replace(base or Parameters(), **changes)
    params.validate()
    return params


def dump_parameters(params: Parameters) -> str:
    """Render a parameter set in the file format accepted by load_parameters."""
    lines = []
    for name, value in params.as_dict().items():
        if value is None:
            continue
        lines.append(f"{name} = {value!r}")
    return "\n".join(lines) + "\n"
