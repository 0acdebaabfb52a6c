import logging
from dataclasses import dataclass, fields
from typing import List, Optional, Union

import numpy as np

from commands import (
    admissible_command,
    bb_region_command,
    check_command,
    min_beta_command,
    region_command,
    starlike_command,
    trial_command,
)
from conditions import ConditionFamily, ParameterError, TheoremParams
from geometry import JanowskiPair
from utils import Utils

logger = logging.getLogger(__name__)

ROUTES = {
    "check": check_command,
    "min-beta": min_beta_command,
    "admissible": admissible_command,
    "trial": trial_command,
    "starlike": starlike_command,
    "region": region_command,
    "bb-region": bb_region_command,
}

NO_FAMILY = frozenset({"starlike", "region", "bb-region"})


def parse_complex(value):
    if value is None:
        return None
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ParameterError(f"complex values are [re, im] pairs, got {value!r}")
        re, im = (_number("complex part", part, float) for part in value)
        return complex(re, im)
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", "").replace("i", "j"))
        except ValueError:
            raise ParameterError(f"cannot read '{value}' as a complex number") from None
    if isinstance(value, bool) or not isinstance(value, (int, float, complex, np.number)):
        raise ParameterError(f"cannot read {value!r} as a complex number")
    return complex(value)


@dataclass
class RunConfig:
    command: str
    family: Optional[str] = None
    A: Optional[float] = None
    B: Optional[float] = None
    D: Optional[float] = None
    E: Optional[float] = None
    starlike_order: Optional[float] = None
    beta: Optional[complex] = None
    alpha: float = 0.0
    gamma: float = 0.0
    k: Optional[int] = None
    n_theta: int = 256
    m_grid: Optional[List[float]] = None
    samples: int = 100
    degree: int = 8
    truncation: int = 12
    seed: int = 0
    radius: float = 0.999
    grid: int = 2048
    leading_order: int = 1
    variant: Optional[str] = None
    series: Union[str, list, None] = None
    points: int = 64
    beta_grid: Optional[List[float]] = None
    gamma_grid: Optional[List[float]] = None
    explore: bool = False
    out: Optional[str] = None

    @classmethod
    def from_mapping(cls, data, utils=None):
        """Build a config from CLI or JSON fields; a "params" file or object supplies defaults."""
        data = {key.replace("-", "_"): value for key, value in data.items()}
        base = data.pop("params", None)
        if isinstance(base, str):
            base = (utils or Utils()).load_json(base)
        if base is not None and not isinstance(base, dict):
            raise ParameterError("params must be a JSON object of parameter fields")
        merged = dict(base or {})
        merged.update({key: value for key, value in data.items() if value is not None})

        known = {f.name for f in fields(cls)}
        unknown = sorted(set(merged) - known)
        if unknown:
            raise ParameterError(f"unknown fields: {', '.join(unknown)}")
        if "command" not in merged:
            raise ParameterError("command is required")
        config = cls(**merged)
        config._normalise()
        return config

    def _normalise(self):
        if not isinstance(self.command, str) or self.command not in ROUTES:
            raise ParameterError(f"unknown command '{self.command}' (known: {', '.join(ROUTES)})")
        if self.family is not None:
            self.family = ConditionFamily.parse(self.family).value
        elif self.command not in NO_FAMILY:
            raise ParameterError(f"{self.command} needs --family")
        for name in ("A", "B", "D", "E", "starlike_order", "alpha", "gamma", "radius"):
            value = getattr(self, name)
            if value is not None:
                setattr(self, name, _number(name, value, float))
        for name in ("n_theta", "samples", "degree", "truncation", "seed", "grid", "leading_order", "points"):
            setattr(self, name, _number(name, getattr(self, name), int))
        if self.k is not None:
            self.k = _number("k", self.k, int)
        for name in ("m_grid", "beta_grid", "gamma_grid"):
            values = getattr(self, name)
            if values is not None:
                if not isinstance(values, (list, tuple)):
                    raise ParameterError(f"{name} must be a list of numbers, got {values!r}")
                setattr(self, name, [_number(name, value, float) for value in values])
        if self.variant is not None and not isinstance(self.variant, str):
            raise ParameterError(f"variant must be a string, got {self.variant!r}")
        if isinstance(self.series, (list, tuple)):
            self.series = [parse_complex(item) for item in self.series]
        elif self.series is not None and not isinstance(self.series, str):
            raise ParameterError("series must be a coefficient list or a JSON file path")
        self.beta = parse_complex(self.beta)
        self.explore = _flag("explore", self.explore)

    @property
    def condition_family(self):
        return ConditionFamily.parse(self.family)

    def outer_pair(self):
        if self.starlike_order is not None:
            if self.A is not None or self.B is not None:
                raise ParameterError("--starlike-order replaces --A and --B; give one or the other")
            return JanowskiPair.starlike_order(self.starlike_order)
        if self.A is None or self.B is None:
            raise ParameterError("--A and --B are required")
        return JanowskiPair(self.A, self.B)

    def theorem_params(self):
        if self.D is None or self.E is None:
            raise ParameterError("--D and --E are required")
        family = ConditionFamily.parse(self.family) if self.family else None
        k = self.k if self.k is not None else (family.default_k if family else 0)
        return TheoremParams(
            self.outer_pair(), JanowskiPair(self.D, self.E), self.beta, self.alpha, self.gamma, k
        )


def _number(name, value, kind):
    if isinstance(value, bool):
        raise ParameterError(f"{name} must be numeric, got {value!r}")
    try:
        number = kind(value)
    except (TypeError, ValueError, OverflowError):
        raise ParameterError(f"{name} must be {kind.__name__}, got {value!r}") from None
    if kind is int and number != float(value):
        raise ParameterError(f"{name} must be an integer, got {value!r}")
    return number


def _flag(name, value):
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.strip().lower() in ("true", "false", "1", "0", "yes", "no"):
        return value.strip().lower() in ("true", "1", "yes")
    if isinstance(value, int) and value in (0, 1):
        return bool(value)
    raise ParameterError(f"{name} must be true or false, got {value!r}")


def route_decision(config: RunConfig):
    return ROUTES[config.command]


def run(config: RunConfig):
    logger.info(f"Running {config.command}" + (f" for {config.family}" if config.family else ""))
    return route_decision(config)(config)


def invoke(data, utils=None):
    """JSON front door: returns (status, payload); invalid input becomes {"error": ...}."""
    try:
        if any(isinstance(data.get(key), str) for key in ("params", "series")):
            raise ParameterError("params and series must be sent inline, not as file paths")
        result = run(RunConfig.from_mapping(data, utils))
    except ValueError as e:
        logger.warning(f"Rejected request: {e}")
        return 400, {"error": str(e)}
    payload = dict(result.report)
    if result.rows is not None:
        payload["rows"] = [list(row) for row in result.rows]
    return 200, payload
