"""Exact and floating entropies of finite observation windows.

Everything here reduces to one shared-prefix traversal of the observation
tree.  The state carried down the tree is the row vector
beta_d(j) = P([Y]_1^d, X_{d+1} = j); extending by a symbol y multiplies by
the emission column for y (giving the pre-transition vector gamma, whose sum
is the sequence probability) and then by the transition matrix.  Starting
from beta_0 = pi is valid uniformly because pi M = pi.  Subtrees with
identically zero probability are pruned, which is exactly the 0*log(0)
convention.

The traversal is generic over an accumulation domain, so the same walker
serves exact scalars, floats, jets (see expansion) and multisite
polynomials (see multisite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .backends import EXACT, FLOAT64
from .errors import DepthCapExceeded, ZeroMarginal
from .loglinear import _LLAccumulator
from .model import HmpModel

DEFAULT_DEPTH_CAP = 14


def _check_depth(n: int, depth_cap: int):
    if n < 1:
        raise ValueError(f"window length must be positive, got {n}")
    if n > depth_cap:
        raise DepthCapExceeded(f"depth {n} exceeds the cap {depth_cap}")


def _walk(beta, emit_cols_at, trans_cols_at, depth, n, sums, domain):
    """One traversal layer; emit/trans column tables are indexed by depth."""
    cols = emit_cols_at[depth]
    last = depth + 1 == n
    acc = sums.get(depth + 1)
    tcols = None if last else trans_cols_at[depth]
    for col in cols:
        gamma = [bj * cj for bj, cj in zip(beta, col)]
        p = gamma[0]
        for g in gamma[1:]:
            p = p + g
        if domain.is_zero(p):
            continue
        if acc is not None:
            domain.add_term(acc, p)
        if not last:
            nxt = []
            for tc in tcols:
                t = gamma[0] * tc[0]
                for gj, mj in zip(gamma[1:], tc[1:]):
                    t = t + gj * mj
                nxt.append(t)
            _walk(nxt, emit_cols_at, trans_cols_at, depth + 1, n, sums, domain)


class _ExactScalarDomain:
    @staticmethod
    def is_zero(p):
        return not p

    @staticmethod
    def new_acc():
        return _LLAccumulator()

    @staticmethod
    def add_term(acc, p):
        acc.add_neg_plogp(p)

    @staticmethod
    def finish(acc):
        return acc.value()


class _FloatScalarDomain:
    def __init__(self, log):
        self._log = log

    @staticmethod
    def is_zero(p):
        return not p

    @staticmethod
    def new_acc():
        return [0]

    def add_term(self, acc, p):
        acc[0] = acc[0] - p * self._log(p)

    @staticmethod
    def finish(acc):
        return acc[0]


class _SumDomain:
    """Accumulates the plain sum of sequence probabilities (any domain)."""

    @staticmethod
    def is_zero(p):
        return not p

    @staticmethod
    def new_acc():
        return [None]

    @staticmethod
    def add_term(acc, p):
        acc[0] = p if acc[0] is None else acc[0] + p

    @staticmethod
    def finish(acc):
        return acc[0]


def _scalar_domain(backend):
    return _ExactScalarDomain() if backend.is_exact else _FloatScalarDomain(backend.log)


def _scalar_tables(model: HmpModel, backend):
    sc = backend.scalar
    s = model.size
    emit_cols = [[sc(model.R.rows[j][y]) for j in range(s)] for y in range(s)]
    trans_cols = [[sc(model.M.rows[j][k]) for j in range(s)] for k in range(s)]
    beta0 = [sc(p) for p in model.pi]
    return beta0, emit_cols, trans_cols


def _run(model, n, record, domain, backend, per_state=False):
    beta0, emit_cols, trans_cols = _scalar_tables(model, backend)
    sums = {d: domain.new_acc() for d in record}
    emit_at = [emit_cols] * n
    trans_at = [trans_cols] * max(n - 1, 0)
    if per_state:
        zero = backend.scalar(Fraction(0))
        for i in range(model.size):
            start = [beta0[i] if j == i else zero for j in range(model.size)]
            _walk(start, emit_at, trans_at, 0, n, sums, domain)
    else:
        _walk(beta0, emit_at, trans_at, 0, n, sums, domain)
    return {d: domain.finish(a) for d, a in sums.items()}


def finite_entropy(model: HmpModel, n: int, backend=EXACT, depth_cap: int = DEFAULT_DEPTH_CAP):
    """H_n = H([Y]_1^n) of the stationary process, in nats."""
    _check_depth(n, depth_cap)
    domain = _scalar_domain(backend)
    with backend.ctx():
        return _run(model, n, {n}, domain, backend)[n]


def conditional_increment(model: HmpModel, n: int, backend=EXACT, depth_cap: int = DEFAULT_DEPTH_CAP):
    """C_n = H_n - H_{n-1}, an upper bound on the entropy rate.

    Both entropies come from one traversal.  C_1 := H_1 by convention.
    """
    _check_depth(n, depth_cap)
    domain = _scalar_domain(backend)
    with backend.ctx():
        if n == 1:
            return _run(model, 1, {1}, domain, backend)[1]
        out = _run(model, n, {n - 1, n}, domain, backend)
        return out[n] - out[n - 1]


def lower_bound(model: HmpModel, n: int, backend=EXACT, depth_cap: int = DEFAULT_DEPTH_CAP):
    """c_n = H(Y_n | X_1, [Y]_1^{n-1}), a lower bound on the entropy rate.

    Conditioning on X_1 splits the traversal into one run per starting
    state, all feeding the same accumulators.
    """
    _check_depth(n, depth_cap)
    if n < 2:
        raise ValueError("the conditional lower bound needs n >= 2")
    domain = _scalar_domain(backend)
    with backend.ctx():
        out = _run(model, n, {n - 1, n}, domain, backend, per_state=True)
        return out[n] - out[n - 1]


@dataclass(frozen=True)
class EntropyBracket:
    n: int
    lower: object
    upper: object
    midpoint: object
    half_gap: object
    backend: str


def entropy_rate_bracket(model: HmpModel, n: int, backend=EXACT,
                         depth_cap: int = DEFAULT_DEPTH_CAP) -> EntropyBracket:
    """The sandwich c_n <= entropy rate <= C_n with midpoint and half-gap."""
    lo = lower_bound(model, n, backend, depth_cap)
    up = conditional_increment(model, n, backend, depth_cap)
    half = Fraction(1, 2)
    return EntropyBracket(n, lo, up, (lo + up) * half, (up - lo) * half, backend.tag)


def total_probability(model: HmpModel, n: int, backend=EXACT,
                      depth_cap: int = DEFAULT_DEPTH_CAP):
    """Sum of P([Y]_1^n) over all length-n observation sequences (= 1)."""
    _check_depth(n, depth_cap)
    with backend.ctx():
        return _run(model, n, {n}, _SumDomain(), backend)[n]


def c2_closed_form(model: HmpModel, backend=EXACT, strict: bool = False):
    """C_2 from the closed form over the pair marginal F = R^t diag(pi) M R.

    C_2 = sum_i (pi R)_i log (pi R)_i - sum_ij F_ij log F_ij.  When some
    pair probability vanishes the log is undefined there; the computation
    falls back to the direct two-step traversal, whose pruning implements
    0*log(0) = 0 (or raises ZeroMarginal when strict).
    """
    s = model.size
    pi, m, r = model.pi, model.M.rows, model.R.rows
    diag = [[pi[a] * m[a][b] for b in range(s)] for a in range(s)]
    f = [
        [
            sum(r[a][i] * diag[a][b] * r[b][j] for a in range(s) for b in range(s))
            for j in range(s)
        ]
        for i in range(s)
    ]
    p1 = [sum(f[i][j] for j in range(s)) for i in range(s)]
    if any(x == 0 for row in f for x in row) or any(x == 0 for x in p1):
        if strict:
            raise ZeroMarginal("some pair of observable symbols has probability 0")
        return conditional_increment(model, 2, backend)
    with backend.ctx():
        sc, lg = backend.scalar, backend.log
        total = 0
        for x in p1:
            total = total + lg(sc(x)) * sc(x)
        for row in f:
            for x in row:
                total = total - lg(sc(x)) * sc(x)
        return total


def sequence_log_probability(model: HmpModel, ys, backend=FLOAT64, with_steps: bool = False):
    """log P([Y]_1^n = ys) via the scaled forward recursion (float domains).

    With with_steps=True also returns the per-symbol log increments, whose
    sum is the total.
    """
    if backend.is_exact:
        raise ValueError("forward scaling is a floating-point computation")
    with backend.ctx():
        sc, lg = backend.scalar, backend.log
        s = model.size
        m = [[sc(x) for x in row] for row in model.M.rows]
        r = [[sc(x) for x in row] for row in model.R.rows]
        q = [sc(x) for x in model.pi]
        steps = []
        for t, y in enumerate(ys):
            if t:
                q = [sum(q[i] * m[i][j] for i in range(s)) for j in range(s)]
            alpha = [q[j] * r[j][y] for j in range(s)]
            z = sum(alpha)
            if not z > 0:
                raise ValueError(f"observation sequence has probability zero at step {t}")
            steps.append(lg(z))
            q = [a / z for a in alpha]
        total = math.fsum(steps) if not backend.bits else sum(steps)
        return (total, tuple(steps)) if with_steps else total


@dataclass(frozen=True)
class EntropyReport:
    """One row of the finite-window entropy table."""

    n: int
    entropy: object
    increment: object
    lower: object | None
    backend: str


def entropy_report(model: HmpModel, n: int, backend=EXACT,
                   depth_cap: int = DEFAULT_DEPTH_CAP) -> EntropyReport:
    _check_depth(n, depth_cap)
    domain = _scalar_domain(backend)
    with backend.ctx():
        if n == 1:
            h = _run(model, 1, {1}, domain, backend)[1]
            return EntropyReport(1, h, h, None, backend.tag)
        out = _run(model, n, {n - 1, n}, domain, backend)
        low = _run(model, n, {n - 1, n}, domain, backend, per_state=True)
        return EntropyReport(
            n, out[n], out[n] - out[n - 1], low[n] - low[n - 1], backend.tag
        )
