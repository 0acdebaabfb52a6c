"""Sufficient conditions on beta for p in P[A, B].

Each condition family is a closed inequality in (A, B, D, E, |beta|, alpha, k).
All of them except the Briot-Bouquet one are affine in |beta|: the printed
inequality holds iff a * |beta| >= b, with the |E beta ...| term moved to the
favourable side.
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np

from geometry import JanowskiPair

logger = logging.getLogger(__name__)

INFEASIBLE = math.inf

SIGN_CONSTRAINT = "requires -1 <= E < 0 < D <= 1"
PAIR_CONSTRAINT = "requires -1 <= E < D <= 1"


class ParameterError(ValueError):
    pass


class ConditionFamily(str, Enum):
    LINEAR_DERIV = "linear-deriv"
    SQUARED_DERIV = "squared-deriv"
    PLUS_OVER_P2 = "plus-over-p2"
    CONVEX_COMBO = "convex-combo"
    CONVEX_COMBO_OVER_P = "convex-combo-over-p"
    RECIPROCAL = "reciprocal"
    BRIOT_BOUQUET = "briot-bouquet"
    COR_LINEAR = "cor-linear"
    COR_SQUARE = "cor-square"
    COR_OVER_P = "cor-over-p"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            known = ", ".join(f.value for f in cls)
            raise ParameterError(f"unknown family '{name}' (known: {known})") from None

    @property
    def default_k(self):
        return 1 if self is ConditionFamily.CONVEX_COMBO_OVER_P else 0

    @property
    def is_affine(self):
        return self is not ConditionFamily.BRIOT_BOUQUET

    @property
    def uses_k(self):
        return self in (ConditionFamily.LINEAR_DERIV, ConditionFamily.SQUARED_DERIV, ConditionFamily.RECIPROCAL)


# families whose statement carries -1 <= E < 0 < D <= 1
SIGNED_FAMILIES = frozenset({
    ConditionFamily.SQUARED_DERIV,
    ConditionFamily.CONVEX_COMBO,
    ConditionFamily.CONVEX_COMBO_OVER_P,
    ConditionFamily.RECIPROCAL,
    ConditionFamily.COR_LINEAR,
    ConditionFamily.COR_SQUARE,
    ConditionFamily.COR_OVER_P,
})

# families whose statement carries beta != 0
NONZERO_BETA_FAMILIES = frozenset({
    ConditionFamily.LINEAR_DERIV,
    ConditionFamily.SQUARED_DERIV,
    ConditionFamily.CONVEX_COMBO,
    ConditionFamily.COR_LINEAR,
    ConditionFamily.COR_SQUARE,
    ConditionFamily.COR_OVER_P,
})


def family_constraints(family):
    family = ConditionFamily.parse(family)
    text = SIGN_CONSTRAINT if family in SIGNED_FAMILIES else PAIR_CONSTRAINT
    if family in NONZERO_BETA_FAMILIES:
        text += ", beta != 0"
    if family in (ConditionFamily.CONVEX_COMBO, ConditionFamily.CONVEX_COMBO_OVER_P):
        text += f", 0 <= alpha <= 1, k = {family.default_k}"
    if family is ConditionFamily.BRIOT_BOUQUET:
        text += ", real beta and gamma with beta * gamma > 0"
    return text


@dataclass(frozen=True)
class TheoremParams:
    """Outer pair (A, B) of the conclusion, inner pair (D, E) of the hypothesis."""

    outer: JanowskiPair
    inner: JanowskiPair
    beta: Optional[complex] = None
    alpha: float = 0.0
    gamma: float = 0.0
    k: int = 0

    @classmethod
    def of(cls, A, B, D, E, beta=None, alpha=0.0, gamma=0.0, k=0):
        return cls(JanowskiPair(A, B), JanowskiPair(D, E), beta, alpha, gamma, k)

    def with_beta(self, beta):
        return replace(self, beta=beta)

    def to_dict(self):
        beta = None if self.beta is None else complex(self.beta)
        return {
            "A": self.outer.upper,
            "B": self.outer.lower,
            "D": self.inner.upper,
            "E": self.inner.lower,
            "beta": None if beta is None else [beta.real, beta.imag],
            "alpha": self.alpha,
            "gamma": self.gamma,
            "k": self.k,
        }


@dataclass(frozen=True)
class AffineCondition:
    a: float
    b: float

    def margin(self, beta_abs):
        return self.a * beta_abs - self.b

    def holds(self, beta_abs):
        return self.margin(beta_abs) >= 0

    @property
    def feasible_description(self):
        return f"{self.a!r} * |beta| >= {self.b!r}"


def validate_params(family, params: TheoremParams, strict_signs=True, need_beta=True):
    family = ConditionFamily.parse(family)
    if not isinstance(params.k, (int, np.integer)) or isinstance(params.k, bool) or params.k < 0:
        raise ParameterError(f"k must be a non-negative integer, got {params.k!r}")
    if family in (ConditionFamily.CONVEX_COMBO, ConditionFamily.CONVEX_COMBO_OVER_P):
        if params.k != family.default_k:
            raise ParameterError(f"{family.value} requires k = {family.default_k}, got k = {params.k}")
        if not 0.0 <= params.alpha <= 1.0:
            raise ParameterError(f"{family.value} requires 0 <= alpha <= 1, got {params.alpha}")
    D, E = params.inner.upper, params.inner.lower
    if strict_signs and family in SIGNED_FAMILIES and not (E < 0 < D):
        raise ParameterError(f"{family.value} {SIGN_CONSTRAINT}, got D = {D}, E = {E}")
    if family is ConditionFamily.BRIOT_BOUQUET:
        if params.beta is None:
            raise ParameterError("briot-bouquet needs beta")
        beta, gamma = complex(params.beta), complex(params.gamma)
        if beta.imag != 0 or gamma.imag != 0:
            raise ParameterError("briot-bouquet requires real beta and gamma")
        if not beta.real * gamma.real > 0:
            raise ParameterError(f"briot-bouquet requires beta * gamma > 0, got {beta.real} * {gamma.real}")
        return family
    if need_beta:
        if params.beta is None:
            raise ParameterError(f"{family.value} needs beta")
        if family in NONZERO_BETA_FAMILIES and params.beta == 0:
            raise ParameterError(f"{family.value} requires beta != 0")
    return family


def _inverse_gap(x):
    return math.inf if x == 0 else 1.0 / x


def _affine_terms(family, params: TheoremParams):
    A, B = params.outer.upper, params.outer.lower
    D, E = params.inner.upper, params.inner.lower
    alpha, k = params.alpha, params.k
    ab = A - B
    e = abs(E)
    g = 1 + abs(A)
    hb = 1 + abs(B)
    lb = 1 - abs(B)

    if family is ConditionFamily.LINEAR_DERIV:
        if k <= 2:
            return ab * (1 - e), (D - E) * g**k * hb ** (2 - k)
        return ab * (lb ** (k - 2) - e * hb ** (k - 2)), (D - E) * g**k

    if family is ConditionFamily.SQUARED_DERIV:
        if k < 4:
            return ab**2 * (1 - e), (D - E) * g**k * hb ** (4 - k)
        return ab**2 * (lb ** (k - 4) - e * hb ** (k - 4)), (D - E) * g**k

    if family is ConditionFamily.PLUS_OVER_P2:
        return ab * (lb - e * hb), ab * g**2 + g**2 * ((D - E) + abs(D * B - E * A))

    if family is ConditionFamily.CONVEX_COMBO:
        b = ab * (hb + alpha * g) + hb * (D * hb - E * (1 - alpha) * g) - E * alpha * g**2
        return ab * (1 - e), b

    if family is ConditionFamily.CONVEX_COMBO_OVER_P:
        # alpha * G^2 / (1 - |B|) is read as 0 when alpha = 0, even for |B| = 1
        inv = _inverse_gap(lb)
        cross = 0.0 if alpha == 0 else alpha * g**2 * inv
        cube = 0.0 if alpha == 0 else alpha * g**3 * inv
        b = ab * (g + cross) + g * (D * hb - E * (1 - alpha) * g) - E * cube
        return ab * (1 - e), b

    if family is ConditionFamily.RECIPROCAL:
        tail = D * g - E * hb
        if k == 0:
            return ab * (1 - abs(A)) - e * ab * g, ab * hb**2 + hb**2 * tail
        if k <= 2:
            h = g ** (k - 1) * hb ** (2 - k)
            return ab * (1 - e), ab * h + h * tail
        return ab * (lb ** (k - 2) - e * hb ** (k - 2)), ab * g ** (k - 1) + g ** (k - 1) * tail

    if family is ConditionFamily.COR_LINEAR:
        b = ab * hb + (D - E) + abs(2 * B * D - E * (A + B)) + abs(D * B**2 - E * A * B)
        return ab * (1 - e), b

    if family is ConditionFamily.COR_SQUARE:
        return ab * (1 - e), ab * (hb + g) + D * hb**2 - E * g**2

    if family is ConditionFamily.COR_OVER_P:
        b = ab * g + (D - E) + abs(D * (B + A) - 2 * E * A) + abs(D * B * A - E * A**2)
        return ab * (1 - e), b

    raise ParameterError(f"{family.value} is not affine in |beta|")


def condition_coeffs(family, params: TheoremParams, strict_signs=True) -> AffineCondition:
    family = ConditionFamily.parse(family)
    if not family.is_affine:
        raise ParameterError("briot-bouquet is not affine in |beta|; use check_condition")
    validate_params(family, params, strict_signs=strict_signs, need_beta=False)
    a, b = _affine_terms(family, params)
    return AffineCondition(float(a), float(b))


def bb_margin(outer: JanowskiPair, inner: JanowskiPair, beta, gamma):
    """Slack of the Briot-Bouquet inequality, LHS - RHS."""
    A, B = outer.upper, outer.lower
    D, E = inner.upper, inner.lower
    spread = (beta * (1 + abs(A)) + gamma * (1 + abs(B))) ** 2
    lhs = (A - B) * ((1 - abs(B)) - spread)
    rhs = spread * ((D - E) + abs(D * B - E * A)) + abs(E) * (A - B) * (1 + abs(B))
    return lhs - rhs


def check_condition(family, params: TheoremParams, strict_signs=True):
    """Returns (holds, margin); the inequality is closed, no tolerance applied."""
    family = validate_params(family, params, strict_signs=strict_signs)
    if family is ConditionFamily.BRIOT_BOUQUET:
        margin = bb_margin(params.outer, params.inner, complex(params.beta).real, complex(params.gamma).real)
    else:
        margin = condition_coeffs(family, params, strict_signs).margin(abs(params.beta))
    return bool(margin >= 0), float(margin)


def min_beta(family, params: TheoremParams, strict_signs=True):
    """Smallest |beta| for which the condition holds, or INFEASIBLE."""
    condition = condition_coeffs(family, params, strict_signs)
    if condition.a > 0:
        threshold = max(condition.b, 0.0) / condition.a
        if not math.isfinite(threshold):
            return INFEASIBLE
        # b / a can round below the root; step up until the closed inequality holds
        while not condition.holds(threshold):
            threshold = math.nextafter(threshold, math.inf)
        return threshold
    if condition.b > 0:
        return INFEASIBLE
    return 0.0


def bb_grid(outer: JanowskiPair, inner: JanowskiPair, betas, gammas):
    """(beta, gamma, margin) for every grid cell with beta * gamma > 0."""
    cells = []
    for beta in betas:
        for gamma in gammas:
            if beta * gamma > 0:
                cells.append((float(beta), float(gamma), float(bb_margin(outer, inner, beta, gamma))))
    return cells


def feasible_region_bb(outer: JanowskiPair, inner: JanowskiPair, betas, gammas):
    return [(beta, gamma) for beta, gamma, margin in bb_grid(outer, inner, betas, gammas) if margin >= 0]
