"""One handler per command; each takes a RunConfig and returns a CommandResult."""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from analytic import AnalyticFn
from conditions import (
    ConditionFamily,
    ParameterError,
    bb_grid,
    check_condition,
    condition_coeffs,
    family_constraints,
    min_beta,
)
from geometry import region_curve, region_descriptor
from utils import Utils
from verifier import Verifier

logger = logging.getLogger(__name__)

REGION_HEADER = ("theta", "re", "im", "chi")
BB_HEADER = ("beta", "gamma", "margin")
DEFAULT_BB_GRID = tuple(np.round(np.linspace(-1.0, 1.0, 41), 10))


@dataclass
class CommandResult:
    exit_code: int
    report: dict
    summary: str
    header: Optional[Sequence[str]] = None
    rows: Optional[List[tuple]] = None


def _header(config, family=None):
    report = {"command": config.command}
    if family is not None:
        report["family"] = family.value
    return report


def check_command(config):
    family = config.condition_family
    params = config.theorem_params()
    strict = not config.explore
    holds, margin = check_condition(family, params, strict_signs=strict)

    report = _header(config, family)
    report["params"] = params.to_dict()
    report["constraints"] = family_constraints(family)
    if family.is_affine:
        condition = condition_coeffs(family, params, strict_signs=strict)
        report["a"] = condition.a
        report["b"] = condition.b
        report["inequality"] = condition.feasible_description
    report["margin"] = margin
    report["passed"] = holds
    state = "holds" if holds else "fails"
    return CommandResult(0 if holds else 1, report, f"{family.value}: condition {state}, margin {margin!r}")


def min_beta_command(config):
    family = config.condition_family
    if not family.is_affine:
        raise ParameterError(f"{family.value} has no single beta threshold; use bb-region")
    params = config.theorem_params()
    strict = not config.explore
    condition = condition_coeffs(family, params, strict_signs=strict)
    threshold = min_beta(family, params, strict_signs=strict)
    feasible = math.isfinite(threshold)

    report = _header(config, family)
    report["params"] = params.to_dict()
    report["a"] = condition.a
    report["b"] = condition.b
    report["threshold"] = threshold if feasible else "INFEASIBLE"
    report["passed"] = feasible
    summary = f"{family.value}: |beta| >= {threshold!r}" if feasible else f"{family.value}: INFEASIBLE"
    return CommandResult(0 if feasible else 1, report, summary)


def admissible_command(config):
    family = config.condition_family
    params = config.theorem_params()
    verifier = Verifier()
    result = verifier.admissibility_check(
        family,
        params,
        n_theta=config.n_theta,
        m_values=config.m_grid,
        leading_order=config.leading_order,
        explore=config.explore,
    )
    report = _header(config, family)
    report["params"] = params.to_dict()
    report.update(result.to_dict())
    report["passed"] = result.passed
    summary = f"{family.value}: min chi {result.min_chi!r} at theta {result.argmin[0]!r}, m {result.argmin[1]!r}"
    return CommandResult(0 if result.passed else 1, report, summary)


def trial_command(config):
    family = config.condition_family
    params = config.theorem_params()
    verdict = Verifier().implication_trial(
        family,
        params,
        n_samples=config.samples,
        degree=config.degree,
        truncation=config.truncation,
        seed=config.seed,
        leading_order=config.leading_order,
        explore=config.explore,
        grid=config.grid,
        radius=config.radius,
    )
    report = _header(config, family)
    report["params"] = params.to_dict()
    report["seed"] = config.seed
    report["explore"] = config.explore
    report.update(verdict.to_dict())
    report["passed"] = verdict.n_violations == 0
    summary = (
        f"{family.value}: {verdict.n_violations} violations in {verdict.n_total} samples "
        f"({verdict.n_hypothesis_true} hypothesis members, {verdict.skipped} skipped)"
    )
    return CommandResult(0 if verdict.n_violations == 0 else 1, report, summary)


def _load_function(config):
    if config.series is None:
        raise ParameterError("starlike needs --series with the coefficients of f")
    if isinstance(config.series, str):
        return Utils().load_series(config.series)
    return AnalyticFn.from_json([(c.real, c.imag) for c in config.series])


def starlike_command(config):
    if config.variant is None:
        raise ParameterError("starlike needs --variant (one of a, b, c, i, ii)")
    f = _load_function(config)
    params = config.theorem_params()
    hypothesis, conclusion = Verifier().starlike_sufficiency_check(
        f, config.variant, params, grid=config.grid, radius=config.radius, explore=config.explore
    )
    certified = hypothesis > 0
    report = _header(config)
    report["variant"] = config.variant
    report["params"] = params.to_dict()
    report["hypothesis_margin"] = hypothesis
    report["conclusion_margin"] = conclusion
    report["certified"] = certified
    report["passed"] = certified and conclusion > 0
    summary = f"variant {config.variant}: hypothesis margin {hypothesis!r}, conclusion margin {conclusion!r}"
    return CommandResult(0 if report["passed"] else 1, report, summary)


def region_command(config):
    pair = config.outer_pair()
    rows = region_curve(pair, config.points)
    report = _header(config)
    report["pair"] = list(pair.as_tuple())
    descriptor = region_descriptor(pair)
    report["region"] = {
        "kind": descriptor.kind,
        "center": descriptor.center,
        "radius": descriptor.radius,
        "abscissa": descriptor.abscissa,
    }
    report["points"] = len(rows)
    report["passed"] = True
    return CommandResult(0, report, f"{len(rows)} boundary points of q(D)", REGION_HEADER, rows)


def bb_region_command(config):
    params = config.theorem_params()
    betas = config.beta_grid or DEFAULT_BB_GRID
    gammas = config.gamma_grid or DEFAULT_BB_GRID
    cells = bb_grid(params.outer, params.inner, betas, gammas)
    feasible = sum(1 for _, _, margin in cells if margin >= 0)
    report = _header(config, ConditionFamily.BRIOT_BOUQUET)
    report["params"] = params.to_dict()
    report["cells"] = len(cells)
    report["feasible"] = feasible
    report["passed"] = True
    return CommandResult(0, report, f"{feasible} of {len(cells)} (beta, gamma) cells feasible", BB_HEADER, cells)
