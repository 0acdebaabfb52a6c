import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from conditions import (  # noqa: E402
    SIGNED_FAMILIES,
    ConditionFamily,
    TheoremParams,
    check_condition,
    min_beta,
)

CONVEX_FAMILIES = (ConditionFamily.CONVEX_COMBO, ConditionFamily.CONVEX_COMBO_OVER_P)


def draw_tuple(family, rng, bound=1.0, max_k=4, k=None):
    """Random (A, B, D, E, alpha, k) respecting the family's printed constraints; beta unset."""
    family = ConditionFamily.parse(family)
    while True:
        B = rng.uniform(-bound, bound)
        A = rng.uniform(B, bound)
        if family in SIGNED_FAMILIES:
            E, D = rng.uniform(-1.0, 0.0), rng.uniform(0.0, 1.0)
            if not E < 0 < D:
                continue
        else:
            E = rng.uniform(-1.0, 1.0)
            D = rng.uniform(E, 1.0)
        if not -1 <= B < A <= 1 or not E < D:
            continue
        alpha = rng.uniform(0.0, 1.0) if family in CONVEX_FAMILIES else 0.0
        if k is None:
            k = int(rng.integers(0, max_k + 1)) if family.uses_k else family.default_k
        return TheoremParams.of(A, B, D, E, alpha=alpha, k=k)


def draw_valid_params(family, rng, bound=1.0, max_k=4, k=None, max_threshold=1e3):
    """Random tuple for which the family's condition holds."""
    family = ConditionFamily.parse(family)
    for _ in range(100000):
        params = draw_tuple(family, rng, bound, max_k, k)
        if family is ConditionFamily.BRIOT_BOUQUET:
            sign = rng.choice([-1.0, 1.0])
            beta, gamma = sign * 10 ** rng.uniform(-3, -0.5), sign * 10 ** rng.uniform(-3, -0.5)
            params = TheoremParams(params.outer, params.inner, beta=beta, gamma=gamma)
        else:
            threshold = min_beta(family, params)
            if not math.isfinite(threshold) or threshold > max_threshold:
                continue
            modulus = max(threshold, 1e-3) * rng.uniform(1.0, 3.0)
            params = params.with_beta(modulus * np.exp(1j * rng.uniform(0.0, 2 * math.pi)))
        if check_condition(family, params)[0]:
            return params
    raise RuntimeError(f"no valid tuple found for {family.value}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture
def nunokawa():
    return TheoremParams.of(1, 0, 1, 0, beta=1, k=0)
