"""Numerical certification of the admissibility conditions.

The admissibility sweep evaluates psi at the boundary data (r, s) of the outer
pair and measures chi against the inner pair; psi is admissible on the grid
when chi never drops below 1. Implication trials feed sampled test functions
through the same psi and look for hypothesis members whose p escapes the
outer region.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed
from numpy.polynomial import polynomial as P

from analytic import (
    DEFAULT_GRID,
    DEFAULT_RADIUS,
    AnalyticFn,
    compose_janowski,
    disk_circle,
    eval_with_derivative,
    sample_schwarz,
    winding_number,
)
from conditions import ConditionFamily, ParameterError, TheoremParams, check_condition, validate_params
from geometry import JanowskiPair, PoleError, boundary_grid, chi_values, midpoint_angles, region_margin
from utils import Utils

logger = logging.getLogger(__name__)

DEFAULT_M_GRID = (1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0)
DEFAULT_N_THETA = 256
TOLERANCE = 1e-9
POLE_GUARD = 1e-9
GUARD_FRACTION = 0.01
PHI_SLACK = 1e-12
EPS_HYPOTHESIS = 1e-3
EPS_CONCLUSION = 1e-3

# psi divides by a power of p for these
DIVIDES_BY_P = frozenset({
    ConditionFamily.PLUS_OVER_P2,
    ConditionFamily.CONVEX_COMBO_OVER_P,
    ConditionFamily.RECIPROCAL,
    ConditionFamily.COR_OVER_P,
})

STARLIKE_VARIANTS = {
    "a": (ConditionFamily.SQUARED_DERIV, 2),
    "b": (ConditionFamily.PLUS_OVER_P2, 0),
    "c": (ConditionFamily.CONVEX_COMBO, 0),
    "i": (ConditionFamily.RECIPROCAL, 1),
    "ii": (ConditionFamily.RECIPROCAL, 2),
}


def _divides_by_p(family, params):
    if family in DIVIDES_BY_P:
        return True
    return family in (ConditionFamily.LINEAR_DERIV, ConditionFamily.SQUARED_DERIV) and params.k >= 1


def _guarded_quotient(numerator, denominator):
    guarded = ~(np.abs(denominator) >= POLE_GUARD)
    return numerator / np.where(guarded, 1.0, denominator), guarded


def psi_values(family, params: TheoremParams, r, s):
    """Vectorised psi(r, s); returns (values, guarded) with guarded points set to nan."""
    family = ConditionFamily.parse(family)
    r = np.asarray(r, dtype=complex)
    s = np.asarray(s, dtype=complex)
    beta = complex(params.beta)
    alpha, k = params.alpha, params.k
    guarded = np.zeros(np.broadcast(r, s).shape, dtype=bool)

    if family is ConditionFamily.LINEAR_DERIV:
        quotient, guarded = _guarded_quotient(s, r**k)
        values = 1 + beta * quotient
    elif family is ConditionFamily.SQUARED_DERIV:
        quotient, guarded = _guarded_quotient(s**2, r**k)
        values = 1 + beta * quotient
    elif family is ConditionFamily.PLUS_OVER_P2:
        quotient, guarded = _guarded_quotient(s, r**2)
        values = r + beta * quotient
    elif family is ConditionFamily.CONVEX_COMBO:
        values = (1 - alpha) * r + alpha * r**2 + beta * s
    elif family is ConditionFamily.CONVEX_COMBO_OVER_P:
        quotient, guarded = _guarded_quotient(s, r)
        values = (1 - alpha) * r + alpha * r**2 + beta * quotient
    elif family is ConditionFamily.RECIPROCAL:
        inverse, near_zero = _guarded_quotient(np.ones_like(r), r)
        quotient, guarded = _guarded_quotient(s, r**k)
        guarded = guarded | near_zero
        values = inverse - beta * quotient
    elif family is ConditionFamily.BRIOT_BOUQUET:
        gamma = complex(params.gamma)
        quotient, guarded = _guarded_quotient(s, (beta * r + gamma) ** 2)
        values = r + quotient
    elif family is ConditionFamily.COR_LINEAR:
        values = r + beta * s
    elif family is ConditionFamily.COR_SQUARE:
        values = r**2 + beta * s
    else:
        quotient, guarded = _guarded_quotient(s, r)
        values = r + beta * quotient

    guarded = guarded | ~np.isfinite(values)
    return np.where(guarded, np.nan, values), guarded


def psi_eval(family, params: TheoremParams, p_value, zp_deriv):
    """psi(r, s) with r = p(z) and s = z p'(z); raises PoleError at guarded points."""
    values, guarded = psi_values(family, params, p_value, zp_deriv)
    if bool(np.any(guarded)):
        raise PoleError(f"psi of {ConditionFamily.parse(family).value} is pole-guarded at r = {p_value}")
    return complex(values) if np.ndim(values) == 0 else values


@dataclass(frozen=True)
class PhiBound:
    """phi(m) = (n1 m^power - n0) / (d0 + d1 m^power)."""

    n1: float
    n0: float
    d0: float
    d1: float
    power: int = 1

    def __call__(self, m):
        m = np.asarray(m, dtype=float)
        if not (math.isfinite(self.n0) and math.isfinite(self.d0)):
            return np.full(m.shape, -np.inf)
        mp = m**self.power
        return (self.n1 * mp - self.n0) / (self.d0 + self.d1 * mp)


def phi_bound(family, params: TheoremParams) -> PhiBound:
    """Lower bound for chi along the boundary, from the closing step of each proof."""
    family = ConditionFamily.parse(family)
    A, B = params.outer.upper, params.outer.lower
    D, E = params.inner.upper, params.inner.lower
    alpha, k = params.alpha, params.k
    beta = abs(complex(params.beta)) if params.beta is not None else 0.0
    ab, g, hb, lb = A - B, 1 + abs(A), 1 + abs(B), 1 - abs(B)
    e_beta = abs(E) * beta * ab

    if family is ConditionFamily.LINEAR_DERIV:
        if k <= 2:
            return PhiBound(beta * ab, 0.0, (D - E) * g**k * hb ** (2 - k), e_beta)
        return PhiBound(beta * ab * lb ** (k - 2), 0.0, (D - E) * g**k, e_beta * hb ** (k - 2))
    if family is ConditionFamily.SQUARED_DERIV:
        if k < 4:
            return PhiBound(beta * ab**2, 0.0, (D - E) * g**k * hb ** (4 - k), e_beta * ab, power=2)
        return PhiBound(beta * ab**2 * lb ** (k - 4), 0.0, (D - E) * g**k, e_beta * ab * hb ** (k - 4), power=2)
    if family is ConditionFamily.PLUS_OVER_P2:
        return PhiBound(ab * beta * lb, ab * g**2, g**2 * ((D - E) + abs(D * B - E * A)), e_beta * hb)
    if family is ConditionFamily.CONVEX_COMBO:
        d0 = hb * (D * hb - E * (1 - alpha) * g) - E * alpha * g**2
        return PhiBound(ab * beta, ab * (hb + alpha * g), d0, e_beta)
    if family is ConditionFamily.CONVEX_COMBO_OVER_P:
        inv = math.inf if lb == 0 else 1 / lb
        cross = 0.0 if alpha == 0 else alpha * g**2 * inv
        cube = 0.0 if alpha == 0 else alpha * g**3 * inv
        return PhiBound(ab * beta, ab * (g + cross), g * (D * hb - E * (1 - alpha) * g) - E * cube, e_beta)
    if family is ConditionFamily.RECIPROCAL:
        tail = D * g - E * hb
        if k == 0:
            return PhiBound(ab * beta * (1 - abs(A)), ab * hb**2, hb**2 * tail, e_beta * g)
        if k <= 2:
            h = g ** (k - 1) * hb ** (2 - k)
            return PhiBound(ab * beta, ab * h, h * tail, e_beta)
        return PhiBound(ab * beta * lb ** (k - 2), ab * g ** (k - 1), g ** (k - 1) * tail, e_beta * hb ** (k - 2))
    if family is ConditionFamily.BRIOT_BOUQUET:
        spread = (complex(params.beta).real * g + complex(params.gamma).real * hb) ** 2
        return PhiBound(ab * lb, ab * spread, spread * ((D - E) + abs(D * B - E * A)), abs(E) * ab * hb)
    if family is ConditionFamily.COR_LINEAR:
        d0 = (D - E) + abs(2 * B * D - E * (A + B)) + abs(D * B**2 - E * A * B)
        return PhiBound(ab * beta, ab * hb, d0, e_beta)
    if family is ConditionFamily.COR_SQUARE:
        return PhiBound(ab * beta, ab * (hb + g), D * hb**2 - E * g**2, e_beta)
    d0 = (D - E) + abs(D * (B + A) - 2 * E * A) + abs(D * B * A - E * A**2)
    return PhiBound(ab * beta, ab * g, d0, e_beta)


def phi_check(family, params: TheoremParams, m_grid=DEFAULT_M_GRID, strict_signs=True):
    """True iff the proof's phi(m) is nondecreasing on m_grid (within PHI_SLACK)."""
    family = validate_params(family, params, strict_signs=strict_signs)
    m_grid = np.asarray(m_grid, dtype=float)
    if m_grid.size == 0 or m_grid[0] < 1 or np.any(np.diff(m_grid) <= 0):
        raise ValueError("m grid must be increasing and start at m >= 1")
    phi = phi_bound(family, params)(m_grid)
    steps = (phi[1:] >= phi[:-1] - PHI_SLACK) | (phi[1:] == phi[:-1])
    return bool(np.all(steps))


@dataclass
class AdmissibilityReport:
    min_chi: float
    argmin: Tuple[float, float]
    passed: bool
    grid: Tuple[int, Tuple[float, ...]]
    tolerance: float = TOLERANCE
    guarded: int = 0
    phi_monotone: Optional[bool] = None

    def to_dict(self):
        return {
            "min_chi": self.min_chi,
            "argmin": {"theta": self.argmin[0], "m": self.argmin[1]},
            "pass": self.passed,
            "tolerance": self.tolerance,
            "grid": {"n_theta": self.grid[0], "m_values": list(self.grid[1])},
            "guarded": self.guarded,
            "phi_monotone": self.phi_monotone,
        }


@dataclass
class SampleOutcome:
    hypothesis_margin: float
    conclusion_margin: float
    witness: complex


@dataclass
class SampleVerdict:
    n_total: int = 0
    n_hypothesis_true: int = 0
    n_violations: int = 0
    violations: List[dict] = field(default_factory=list)
    skipped: int = 0

    def to_dict(self):
        return {
            "n_total": self.n_total,
            "n_hypothesis_true": self.n_hypothesis_true,
            "n_violations": self.n_violations,
            "skipped": self.skipped,
            "violations": self.violations,
        }


def starlike_functional(f: AnalyticFn, variant, params: TheoremParams, z):
    """Values of the variant's functional of zf'/f and 1 + zf''/f' at points z."""
    if variant not in STARLIKE_VARIANTS:
        raise ParameterError(f"unknown starlike variant '{variant}' (known: {', '.join(STARLIKE_VARIANTS)})")
    a = f.coefficients
    j = np.arange(a.size)
    value, zd = eval_with_derivative(f, z)
    zzdd = P.polyval(z, j * (j - 1) * a)
    if np.any(np.abs(value) < POLE_GUARD) or np.any(np.abs(zd) < POLE_GUARD):
        raise PoleError("f or f' vanishes on the evaluation circle")
    quotient = zd / value
    curvature = 1 + zzdd / zd
    beta, alpha = complex(params.beta), params.alpha
    if variant == "a":
        return quotient + beta * (curvature - quotient) ** 2
    if variant == "b":
        return quotient + beta * (curvature - quotient) / quotient
    if variant == "c":
        return (1 - alpha + beta) * quotient + (alpha - beta) * quotient**2 + beta * (curvature - 1)
    if variant == "i":
        return (1 - beta * quotient * (curvature - quotient)) / quotient
    return (1 - beta * (curvature - quotient)) / quotient


class Verifier:

    def __init__(self, threads=None):
        self.utils = Utils()
        self.threads = threads if threads is not None else self.utils.threads

    def _parallel(self, task, count):
        return Parallel(n_jobs=self.threads, prefer="threads")(delayed(task)(index) for index in range(count))

    def _require_condition(self, family, params, explore):
        holds, margin = check_condition(family, params, strict_signs=not explore)
        if not holds and not explore:
            raise ParameterError(
                f"{family.value} condition fails with margin {margin!r}; enable exploration to run anyway"
            )
        return holds, margin

    def admissibility_check(self, family, params: TheoremParams, n_theta=DEFAULT_N_THETA, m_values=None,
                            tolerance=TOLERANCE, leading_order=1, explore=False) -> AdmissibilityReport:
        family = validate_params(family, params, strict_signs=not explore)
        self._require_condition(family, params, explore)
        if n_theta < 64:
            raise ValueError(f"admissibility sweep needs n_theta >= 64, got {n_theta}")
        if m_values is None:
            m_values = [leading_order * m for m in DEFAULT_M_GRID]
        m_values = sorted(float(m) for m in m_values if m >= leading_order)
        if not m_values or m_values[0] != leading_order:
            raise ValueError(f"m grid must contain the binding multiplier m = {leading_order}")

        thetas = midpoint_angles(n_theta)
        logger.info(f"Admissibility sweep for {family.value}: {n_theta} angles x {len(m_values)} multipliers")

        def sweep_row(index):
            m = m_values[index]
            r, s, _, edge = boundary_grid(thetas, m, params.outer)
            psi, guarded = psi_values(family, params, r, s)
            guarded = guarded | edge
            if guarded.all():
                return math.nan, math.nan, int(guarded.sum())
            distances = np.where(guarded, np.inf, chi_values(psi, params.inner, allow_infinite=True))
            best = int(np.argmin(distances))
            return float(distances[best]), float(thetas[best]), int(guarded.sum())

        rows = self._parallel(sweep_row, len(m_values))

        min_chi, argmin, guarded = math.inf, (math.nan, math.nan), 0
        for m, (row_min, row_theta, row_guarded) in zip(m_values, rows):
            guarded += row_guarded
            if row_min < min_chi:
                min_chi, argmin = row_min, (row_theta, m)
        if not math.isfinite(min_chi):
            min_chi = math.nan

        total = n_theta * len(m_values)
        if guarded:
            logger.warning(f"{guarded} of {total} grid points were pole-guarded")
        passed = guarded <= GUARD_FRACTION * total and min_chi >= 1 - tolerance
        report = AdmissibilityReport(
            min_chi=min_chi,
            argmin=argmin,
            passed=bool(passed),
            grid=(n_theta, tuple(m_values)),
            tolerance=tolerance,
            guarded=guarded,
            phi_monotone=phi_check(family, params, m_values, strict_signs=not explore),
        )
        logger.info(f"Admissibility sweep done: min chi {min_chi!r}, pass {report.passed}")
        return report

    def evaluate_sample(self, family, params: TheoremParams, p: AnalyticFn, grid=DEFAULT_GRID,
                        radius=DEFAULT_RADIUS) -> Optional[SampleOutcome]:
        """Hypothesis and conclusion margins of one test function; None when pole-guarded."""
        family = ConditionFamily.parse(family)
        z = disk_circle(grid, radius)
        value, zderiv = eval_with_derivative(p, z)
        psi, guarded = psi_values(family, params, value, zderiv)
        if guarded.any():
            return None
        # psi is only analytic in the disk when its denominator has no zeros inside
        if _divides_by_p(family, params) and winding_number(value) != 0:
            return None
        if family is ConditionFamily.BRIOT_BOUQUET:
            if winding_number(complex(params.beta) * value + complex(params.gamma)) != 0:
                return None
        hypothesis, _ = region_margin(psi, params.inner, allow_infinite=True)
        conclusion, index = region_margin(value, params.outer, allow_infinite=True)
        return SampleOutcome(hypothesis, conclusion, complex(z[index]))

    def _draw_sample(self, outer: JanowskiPair, degree, truncation, seed, index, leading_order):
        rng = np.random.default_rng([seed, index])
        if rng.random() < 0.5:
            # member of a wider Janowski class, shrunk towards 1
            lower = rng.uniform(-1.0, outer.lower) if outer.lower > -1 else -1.0
            wider = JanowskiPair(rng.uniform(outer.upper, 1.0), lower)
            omega = sample_schwarz(degree, leading_order, seed=int(rng.integers(2**32)))
            coefficients = compose_janowski(omega, wider, truncation, warn=False).coefficients.copy()
            coefficients[1:] *= 10 ** rng.uniform(-3.0, 0.0)
        else:
            count = degree - leading_order + 1
            noise = np.sqrt(rng.uniform(0.0, 1.0, count)) * np.exp(2j * math.pi * rng.uniform(0.0, 1.0, count))
            coefficients = np.zeros(truncation + 1, dtype=complex)
            coefficients[0] = 1
            coefficients[leading_order:degree + 1] = 10 ** rng.uniform(-3.0, math.log10(2.0)) * noise
        return AnalyticFn(coefficients, leading_order)

    def implication_trial(self, family, params: TheoremParams, n_samples=100, degree=8, truncation=12, seed=0,
                          leading_order=1, explore=False, grid=DEFAULT_GRID, radius=DEFAULT_RADIUS,
                          eps_hypothesis=EPS_HYPOTHESIS, eps_conclusion=EPS_CONCLUSION) -> SampleVerdict:
        family = validate_params(family, params, strict_signs=not explore)
        self._require_condition(family, params, explore)
        if degree > truncation:
            raise ValueError(f"degree {degree} exceeds truncation {truncation}")
        logger.info(f"Implication trial for {family.value}: {n_samples} samples, degree {degree}, seed {seed}")

        def run_sample(index):
            p = self._draw_sample(params.outer, degree, truncation, seed, index, leading_order)
            return p, self.evaluate_sample(family, params, p, grid, radius)

        verdict = SampleVerdict(n_total=n_samples)
        for index, (p, outcome) in enumerate(self._parallel(run_sample, n_samples)):
            if outcome is None:
                verdict.skipped += 1
                continue
            if outcome.hypothesis_margin <= eps_hypothesis:
                continue
            verdict.n_hypothesis_true += 1
            if outcome.conclusion_margin < -eps_conclusion:
                verdict.n_violations += 1
                verdict.violations.append({
                    "seed": [seed, index],
                    "witness": [outcome.witness.real, outcome.witness.imag],
                    "hypothesis_margin": outcome.hypothesis_margin,
                    "conclusion_margin": outcome.conclusion_margin,
                    "coefficients": p.to_json(),
                })
        if verdict.n_violations:
            logger.warning(f"{verdict.n_violations} violations found for {family.value}")
        logger.info(
            f"Implication trial done: {verdict.n_hypothesis_true} hypothesis members, {verdict.skipped} skipped"
        )
        return verdict

    def starlike_sufficiency_check(self, f: AnalyticFn, variant, params: TheoremParams, grid=DEFAULT_GRID,
                                   radius=DEFAULT_RADIUS, explore=False):
        """(hypothesis margin against (D, E), conclusion margin of zf'/f against (A, B))."""
        if variant not in STARLIKE_VARIANTS:
            raise ParameterError(f"unknown starlike variant '{variant}' (known: {', '.join(STARLIKE_VARIANTS)})")
        a = f.coefficients
        if a[0] != 0:
            raise ValueError("starlike check requires f(0) = 0")
        if a.size < 2 or a[1] == 0:
            raise PoleError("starlike check requires a non-zero first coefficient")
        if abs(a[1] - 1) > 1e-12:
            raise ValueError(f"starlike check requires f'(0) = 1, got {a[1]}")
        family, k = STARLIKE_VARIANTS[variant]
        params = replace(params, k=k)
        self._require_condition(validate_params(family, params, strict_signs=not explore), params, explore)

        z = disk_circle(grid, radius)
        value, zd = eval_with_derivative(f, z)
        # boundary margins only bound the interior when zf'/f and 1 + zf''/f' are analytic inside
        if winding_number(value / z) != 0 or winding_number(zd / z) != 0:
            raise PoleError(f"f/z or f' vanishes inside |z| < {radius}; f is not starlike there")
        functional = starlike_functional(f, variant, params, z)
        hypothesis, _ = region_margin(functional, params.inner, allow_infinite=True)
        conclusion, _ = region_margin(zd / value, params.outer, allow_infinite=True)
        return hypothesis, conclusion
