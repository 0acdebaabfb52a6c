"""Janowski disk geometry: the Mobius map q(z) = (1+Az)/(1+Bz), the
membership functional chi and the boundary data used by admissibility."""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)

ANGLE_GUARD = 1e-6


class PoleError(ValueError):
    pass


class DegenerateBoundaryError(PoleError):
    pass


class InvalidPairError(ValueError):
    pass


@dataclass(frozen=True)
class JanowskiPair:
    """Ordered coefficients (upper, lower) of q(z) = (1 + upper z)/(1 + lower z).

    Used both for the conclusion class (A, B) and the hypothesis class (D, E).
    """

    upper: float
    lower: float

    def __post_init__(self):
        upper, lower = float(self.upper), float(self.lower)
        if not (math.isfinite(upper) and math.isfinite(lower)):
            raise InvalidPairError("Janowski pair requires finite coefficients")
        if not (-1.0 <= lower < upper <= 1.0):
            raise InvalidPairError(
                f"Janowski pair requires -1 <= lower < upper <= 1, got ({upper}, {lower})"
            )
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)

    @classmethod
    def starlike_order(cls, alpha):
        # S*[1 - 2a, -1] is the class of starlike functions of order a
        if not 0.0 <= alpha < 1.0:
            raise InvalidPairError(f"starlike order requires 0 <= alpha < 1, got {alpha}")
        return cls(1.0 - 2.0 * alpha, -1.0)

    def pole_angle(self) -> Optional[float]:
        if abs(self.lower) < 1.0:
            return None
        return 0.0 if self.lower < 0 else math.pi

    def as_tuple(self):
        return (self.upper, self.lower)


@dataclass(frozen=True)
class BoundaryPoint:
    theta: float
    m: float
    r: complex
    s: complex
    curvature_bound: float


@dataclass(frozen=True)
class RegionDescriptor:
    kind: str  # "disk" or "half-plane"
    center: Optional[complex] = None
    radius: Optional[float] = None
    abscissa: Optional[float] = None

    def contains(self, w):
        w = np.asarray(w, dtype=complex)
        if self.kind == "disk":
            return np.abs(w - self.center) < self.radius
        return w.real > self.abscissa


def janowski_map(z, pair: JanowskiPair):
    denominator = 1 + pair.lower * z
    if np.any(denominator == 0):
        raise PoleError(f"q has a pole at z = {-1 / pair.lower}")
    return (1 + pair.upper * z) / denominator


def chi(w, pair: JanowskiPair) -> float:
    """|(w - 1)/(upper - lower w)|; strictly below 1 iff w lies in q(D)."""
    denominator = pair.upper - pair.lower * w
    if denominator == 0:
        raise PoleError(f"chi is undefined at w = {w} for pair {pair.as_tuple()}")
    return abs((w - 1) / denominator)


def chi_values(w, pair: JanowskiPair, allow_infinite=False):
    """Vectorised chi. With allow_infinite, poles and nan inputs map to inf instead of raising."""
    w = np.asarray(w, dtype=complex)
    denominator = pair.upper - pair.lower * w
    if not allow_infinite:
        if np.any(denominator == 0):
            raise PoleError(f"chi is undefined at w = {pair.upper / pair.lower}")
        return np.abs((w - 1) / denominator)
    # zeros of the denominator are q(infinity)
    with np.errstate(divide="ignore", invalid="ignore"):
        distances = np.abs((w - 1) / denominator)
    return np.where(np.isnan(distances), np.inf, distances)


def region_margin(values, pair: JanowskiPair, allow_infinite=False):
    """Returns (1 - max chi, index of the maximising value)."""
    distances = chi_values(values, pair, allow_infinite)
    index = int(np.argmax(distances))
    return 1.0 - float(distances[index]), index


def _angle_guarded(thetas, pair: JanowskiPair):
    pole = pair.pole_angle()
    thetas = np.asarray(thetas, dtype=float)
    if pole is None:
        return np.zeros(thetas.shape, dtype=bool)
    offset = np.mod(thetas - pole, 2 * math.pi)
    return np.minimum(offset, 2 * math.pi - offset) < ANGLE_GUARD


def boundary_grid(thetas, m, pair: JanowskiPair):
    """Vectorised boundary data at angles `thetas` for multiplier m.

    Returns (r, s, curvature_bound, guarded). Guarded entries sit within
    ANGLE_GUARD of the exceptional point and are left as nan.
    """
    thetas = np.asarray(thetas, dtype=float)
    guarded = _angle_guarded(thetas, pair)
    zeta = np.exp(1j * thetas)
    base = 1 + pair.lower * zeta
    safe = np.where(guarded, 1.0, base)
    r = (1 + pair.upper * zeta) / safe
    s = m * (pair.upper - pair.lower) * zeta / safe**2
    b = pair.lower
    curvature = (1 - b * b) / (1 + b * b + 2 * b * np.cos(thetas))
    r = np.where(guarded, np.nan, r)
    s = np.where(guarded, np.nan, s)
    return r, s, curvature, guarded


def boundary_data(theta: float, m: float, pair: JanowskiPair) -> BoundaryPoint:
    if not 0.0 < theta < 2 * math.pi:
        raise ValueError(f"theta must lie in (0, 2*pi), got {theta}")
    if m < 1:
        raise ValueError(f"admissibility multiplier requires m >= 1, got {m}")
    zeta = complex(math.cos(theta), math.sin(theta))
    base = 1 + pair.lower * zeta
    if _angle_guarded([theta], pair)[0] or base == 0:
        raise DegenerateBoundaryError(
            f"theta = {theta} is the pole angle of pair {pair.as_tuple()}"
        )
    b = pair.lower
    return BoundaryPoint(
        theta=theta,
        m=m,
        r=(1 + pair.upper * zeta) / base,
        s=m * (pair.upper - pair.lower) * zeta / base**2,
        curvature_bound=(1 - b * b) / (1 + b * b + 2 * b * math.cos(theta)),
    )


def region_descriptor(pair: JanowskiPair) -> RegionDescriptor:
    a, b = pair.upper, pair.lower
    if abs(b) < 1:
        return RegionDescriptor(
            kind="disk",
            center=complex((1 - a * b) / (1 - b * b)),
            radius=(a - b) / (1 - b * b),
        )
    return RegionDescriptor(kind="half-plane", abscissa=(1 - a) / 2)


def midpoint_angles(points: int):
    # midpoints of a uniform partition of (0, 2*pi); never hits 0 or 2*pi
    return (np.arange(points) + 0.5) * (2 * math.pi / points)


def region_curve(pair: JanowskiPair, points: int):
    """Boundary trace rows (theta, re, im, chi) for plotting q(D)."""
    if points < 1:
        raise ValueError("region curve needs at least one point")
    thetas = midpoint_angles(points)
    rows = []
    for theta in thetas:
        if _angle_guarded([theta], pair)[0]:
            continue
        w = janowski_map(complex(math.cos(theta), math.sin(theta)), pair)
        rows.append((float(theta), float(w.real), float(w.imag), chi(w, pair)))
    return rows
