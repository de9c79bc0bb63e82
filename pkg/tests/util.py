"""Shared test helpers: brute-force oracles and hypothesis strategies.

The enumeration oracles recompute finite-window quantities directly from
their definitions, summing over every hidden path and observed word.  They
are deliberately independent of the tree traversal in the package so the
two implementations can check each other.
"""

import math
from fractions import Fraction
from itertools import product

from hypothesis import strategies as st

from hmpseries import (
    AlmostMemoryless,
    HighSnr,
    HmpModel,
    LogLinearValue,
    PerturbationMatrix,
    StochasticMatrix,
    stationary_distribution,
)


def word_probability(model: HmpModel, ys) -> Fraction:
    """P([Y]_1^n = ys) by summing over all hidden paths (exact)."""
    s = model.size
    n = len(ys)
    total = Fraction(0)
    for xs in product(range(s), repeat=n):
        p = model.pi[xs[0]]
        for a, b in zip(xs, xs[1:]):
            p *= model.M.rows[a][b]
        for x, y in zip(xs, ys):
            p *= model.R.rows[x][y]
        total += p
    return total


def word_distribution(model: HmpModel, n: int) -> dict:
    return {
        ys: word_probability(model, ys)
        for ys in product(range(model.size), repeat=n)
    }


def joint_distribution(model: HmpModel, n: int) -> dict:
    """P(X_1 = x1, [Y]_1^n = ys), exact, for every x1 and word ys."""
    s = model.size
    out = {}
    for x1 in range(s):
        for ys in product(range(s), repeat=n):
            total = Fraction(0)
            for rest in product(range(s), repeat=n - 1):
                xs = (x1,) + rest
                p = model.pi[x1]
                for a, b in zip(xs, xs[1:]):
                    p *= model.M.rows[a][b]
                for x, y in zip(xs, ys):
                    p *= model.R.rows[x][y]
                total += p
            out[(x1, ys)] = total
    return out


def entropy_float(dist) -> float:
    """Shannon entropy of an exact distribution, evaluated in floats (nats)."""
    return -math.fsum(float(p) * math.log(p) for p in dist.values() if p)


def entropy_exact(dist) -> LogLinearValue:
    """Shannon entropy as a LogLinearValue, summed term by term."""
    total = LogLinearValue.make(0)
    for p in dist.values():
        if p:
            total = total + LogLinearValue.log_of(p) * (-p)
    return total


def brute_finite_entropy(model: HmpModel, n: int) -> LogLinearValue:
    return entropy_exact(word_distribution(model, n))


def brute_increment(model: HmpModel, n: int) -> LogLinearValue:
    """C_n = H_n - H_{n-1} with the C_1 = H_1 convention, by enumeration."""
    if n == 1:
        return brute_finite_entropy(model, 1)
    return brute_finite_entropy(model, n) - brute_finite_entropy(model, n - 1)


def brute_lower_bound(model: HmpModel, n: int) -> LogLinearValue:
    """c_n = H(X_1, [Y]_1^n) - H(X_1, [Y]_1^{n-1}), by enumeration."""
    return entropy_exact(joint_distribution(model, n)) - entropy_exact(
        joint_distribution(model, n - 1)
    )


def ll_close(a, b, rel=1e-12) -> bool:
    """Float agreement between two values of possibly different kinds."""
    fa, fb = float(a), float(b)
    return math.isclose(fa, fb, rel_tol=rel, abs_tol=1e-14)


# ---------------------------------------------------------------------------
# hypothesis strategies over exact rational models
# ---------------------------------------------------------------------------

@st.composite
def stochastic_rows(draw, size: int, max_weight: int = 9):
    """Strictly positive stochastic matrix with small rational entries."""
    rows = []
    for _ in range(size):
        weights = [
            draw(st.integers(min_value=1, max_value=max_weight))
            for _ in range(size)
        ]
        total = sum(weights)
        rows.append(tuple(Fraction(w, total) for w in weights))
    return StochasticMatrix(tuple(rows))


@st.composite
def hmp_models(draw, size: int = 2):
    m = draw(stochastic_rows(size))
    r = draw(stochastic_rows(size))
    return HmpModel(m, r, stationary_distribution(m))


@st.composite
def emission_perturbations(draw, size: int = 2, max_weight: int = 4):
    """Zero row sums with nonnegative off-diagonal entries."""
    rows = []
    for i in range(size):
        off = [
            draw(st.integers(min_value=0, max_value=max_weight))
            for _ in range(size - 1)
        ]
        row = []
        it = iter(off)
        for j in range(size):
            row.append(Fraction(-sum(off)) if j == i else Fraction(next(it)))
        rows.append(tuple(row))
    return PerturbationMatrix(tuple(rows))


@st.composite
def zero_sum_perturbations(draw, size: int = 2, max_weight: int = 4):
    """Zero row sums with entries of either sign."""
    rows = []
    for _ in range(size):
        head = [
            draw(st.integers(min_value=-max_weight, max_value=max_weight))
            for _ in range(size - 1)
        ]
        rows.append(tuple(Fraction(v) for v in head) + (Fraction(-sum(head)),))
    return PerturbationMatrix(tuple(rows))


@st.composite
def high_snr_specs(draw, size: int = 2):
    return HighSnr(draw(stochastic_rows(size)), draw(emission_perturbations(size)))


@st.composite
def am_specs(draw, size: int = 2):
    return AlmostMemoryless(
        draw(stochastic_rows(size)), draw(zero_sum_perturbations(size))
    )
