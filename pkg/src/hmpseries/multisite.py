"""Mixed partial derivatives of finite-window entropies per site.

Each site i of the length-n window carries its own perturbation parameter
(eps_i on the emission at site i in the high-SNR regime; delta_i on the
transition into site i, and through the stationary start for site 1, in the
almost-memoryless regime).  F_n^{kvec} is the mixed partial derivative of
F_n = H_n - H_{n-1} at the origin, equal to prod(k_i!) times the multivariate
Taylor coefficient.

The traversal is the shared one from the entropy module, run over truncated
multivariate polynomials with per-variable degree caps k_i, so only the one
needed coefficient is ever carried.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .backends import EXACT
from .entropy import _walk
from .errors import NonpositiveConstantTerm, WeightCapExceeded
from .loglinear import LogLinearValue, factor_positive
from .model import (
    AlmostMemoryless,
    HighSnr,
    RegimeSpec,
    parse_rational,
    perturbed_identity,
    perturbed_uniform,
    stationary_distribution,
)
from .expansion import stationary_series

WEIGHT_CAP = 4
SITE_CAP = 6


@dataclass(frozen=True)
class MultiSiteSpec:
    """A window length n and one derivative order per site."""

    n: int
    kvec: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "kvec", tuple(int(k) for k in self.kvec))
        if len(self.kvec) != self.n:
            raise ValueError(f"kvec length {len(self.kvec)} != n = {self.n}")
        if any(k < 0 for k in self.kvec):
            raise ValueError("derivative orders must be nonnegative")

    @property
    def weight(self) -> int:
        return sum(self.kvec)


class MultiPoly:
    """Multivariate polynomial truncated to per-variable degree caps."""

    __slots__ = ("caps", "terms")

    def __init__(self, caps, terms=None):
        self.caps = tuple(caps)
        kept = {}
        for e, c in (terms or {}).items():
            if c and all(ei <= cap for ei, cap in zip(e, self.caps)):
                kept[tuple(e)] = c
        self.terms = kept

    @classmethod
    def constant(cls, c, caps):
        zeros = (0,) * len(tuple(caps))
        return cls(caps, {zeros: c})

    @classmethod
    def linear(cls, c0, var: int, c1, caps):
        caps = tuple(caps)
        zeros = (0,) * len(caps)
        e = tuple(1 if i == var else 0 for i in range(len(caps)))
        return cls(caps, {zeros: c0, e: c1})

    def _zeros(self):
        return (0,) * len(self.caps)

    def constant_term(self):
        return self.terms.get(self._zeros(), 0)

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), 0)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.caps == other.caps and self.terms == other.terms
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"MultiPoly(caps={self.caps}, terms={self.terms})"

    def _check(self, other):
        if other.caps != self.caps:
            raise ValueError("mixed degree caps")

    def __add__(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            out = dict(self.terms)
            for e, c in other.terms.items():
                out[e] = out.get(e, 0) + c
            return MultiPoly(self.caps, out)
        out = dict(self.terms)
        z = self._zeros()
        out[z] = out.get(z, 0) + other
        return MultiPoly(self.caps, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.caps, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return MultiPoly(self.caps, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        caps = self.caps
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if all(ei <= cap for ei, cap in zip(e, caps)):
                    out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(caps, out)

    __rmul__ = __mul__


def _log1p_part(p: MultiPoly, c0):
    """W with log(p) = log(c0) + W, via the nilpotent series for log(1 + q)."""
    q = p * (1 / c0) - 1
    total = None
    power = q
    m = 1
    bound = sum(p.caps) + 1
    while power and m <= bound:
        term = power * (Fraction((-1) ** (m + 1), m))
        total = term if total is None else total + term
        power = power * q
        m += 1
    return total if total is not None else MultiPoly(p.caps, {})


class _MultiExactAcc:
    __slots__ = ("rat", "logs")

    def __init__(self):
        self.rat: dict = {}
        self.logs: dict = {}


class _MultiExactDomain:
    def __init__(self, caps):
        self.caps = tuple(caps)

    @staticmethod
    def is_zero(p):
        return not p

    def new_acc(self):
        return _MultiExactAcc()

    @staticmethod
    def add_term(acc, p):
        c0 = p.constant_term()
        if c0 <= 0:
            raise NonpositiveConstantTerm(
                f"sequence probability polynomial has constant term {c0}"
            )
        w = _log1p_part(p, c0)
        rat = acc.rat
        for e, c in (p * w).terms.items():
            rat[e] = rat.get(e, 0) - c
        for prime, ex in factor_positive(c0):
            d = acc.logs.setdefault(prime, {})
            for e, c in p.terms.items():
                d[e] = d.get(e, 0) - ex * c

    @staticmethod
    def finish(acc):
        return acc


class _MultiFloatDomain:
    def __init__(self, caps, log):
        self.caps = tuple(caps)
        self._log = log

    @staticmethod
    def is_zero(p):
        return not p

    def new_acc(self):
        return {}

    def add_term(self, acc, p):
        c0 = p.constant_term()
        if not c0 > 0:
            raise NonpositiveConstantTerm(
                f"sequence probability polynomial has constant term {c0!r}"
            )
        lg0 = self._log(c0)
        for e, c in p.terms.items():
            acc[e] = acc.get(e, 0) - c * lg0
        for e, c in (p * _log1p_part(p, c0)).terms.items():
            acc[e] = acc.get(e, 0) - c

    @staticmethod
    def finish(acc):
        return acc


def _check_caps(mspec: MultiSiteSpec, weight_cap: int, site_cap: int):
    if mspec.weight > weight_cap:
        raise WeightCapExceeded(
            f"total derivative weight {mspec.weight} exceeds cap {weight_cap}"
        )
    if mspec.n > site_cap:
        raise WeightCapExceeded(f"window length {mspec.n} exceeds cap {site_cap}")
    if mspec.n < 2:
        raise ValueError("per-site derivatives need n >= 2")


def _multi_tables(spec: RegimeSpec, mspec: MultiSiteSpec, backend):
    sc = backend.scalar
    caps = mspec.kvec
    n = mspec.n

    def const(v):
        return MultiPoly.constant(sc(v), caps)

    def lin(a, b, var):
        return MultiPoly.linear(sc(a), var, sc(b), caps)

    if isinstance(spec, HighSnr):
        s = spec.M.size
        pi = stationary_distribution(spec.M)
        beta0 = [const(p) for p in pi]
        emit_at = [
            [
                [lin(1 if j == y else 0, spec.T.rows[j][y], i) for j in range(s)]
                for y in range(s)
            ]
            for i in range(n)
        ]
        trans_cols = [[const(spec.M.rows[j][k]) for j in range(s)] for k in range(s)]
        trans_at = [trans_cols] * (n - 1)
    else:
        s = spec.R.size
        start = stationary_series(spec.T, caps[0])
        beta0 = [
            MultiPoly(
                caps,
                {
                    tuple(m if v == 0 else 0 for v in range(n)): sc(c)
                    for m, c in enumerate(ser.coeffs)
                },
            )
            for ser in start
        ]
        emit_cols = [[const(spec.R.rows[j][y]) for j in range(s)] for y in range(s)]
        emit_at = [emit_cols] * n
        trans_at = [
            [
                [lin(Fraction(1, s), spec.T.rows[j][k], d + 1) for j in range(s)]
                for k in range(s)
            ]
            for d in range(n - 1)
        ]
    return beta0, emit_at, trans_at


def multisite_derivative(mspec: MultiSiteSpec, spec: RegimeSpec, backend=EXACT,
                         weight_cap: int = WEIGHT_CAP, site_cap: int = SITE_CAP):
    """F_n^{kvec}: the mixed partial derivative of H_n - H_{n-1} at 0.

    Exact backend returns a LogLinearValue; floating backends return their
    own scalar.
    """
    _check_caps(mspec, weight_cap, site_cap)
    caps = mspec.kvec
    n = mspec.n
    fact = 1
    for k in caps:
        fact *= factorial(k)
    with backend.ctx():
        beta0, emit_at, trans_at = _multi_tables(spec, mspec, backend)
        if backend.is_exact:
            domain = _MultiExactDomain(caps)
        else:
            domain = _MultiFloatDomain(caps, backend.log)
        sums = {n - 1: domain.new_acc(), n: domain.new_acc()}
        _walk(beta0, emit_at, trans_at, 0, n, sums, domain)
        hi, lo = sums[n], sums[n - 1]
        kv = caps
        if backend.is_exact:
            rat = (hi.rat.get(kv, 0) - lo.rat.get(kv, 0)) * fact
            primes = set(hi.logs) | set(lo.logs)
            logs = {
                p: (hi.logs.get(p, {}).get(kv, 0) - lo.logs.get(p, {}).get(kv, 0)) * fact
                for p in primes
            }
            return LogLinearValue.make(Fraction(rat), logs)
        return (hi.get(kv, 0) - lo.get(kv, 0)) * fact


def multisite_value(spec: RegimeSpec, params, backend=EXACT,
                    site_cap: int = SITE_CAP):
    """F_n = H_n - H_{n-1} at explicit per-site parameter values.

    The window length is len(params).  No derivatives: this is the plain
    finite-system increment of the per-site model, used to exhibit the
    blocking identity numerically.
    """
    params = [parse_rational(v) for v in params]
    n = len(params)
    if n < 2:
        raise ValueError("per-site increments need n >= 2")
    if n > site_cap:
        raise WeightCapExceeded(f"window length {n} exceeds cap {site_cap}")
    from .entropy import _scalar_domain

    sc = backend.scalar
    if isinstance(spec, HighSnr):
        s = spec.M.size
        pi = stationary_distribution(spec.M)
        beta0_frac = list(pi)
        emits = [perturbed_identity(spec.T, v) for v in params]
        transs = [spec.M] * (n - 1)
    else:
        s = spec.R.size
        start = perturbed_uniform(spec.T, params[0])
        beta0_frac = list(stationary_distribution(start))
        emits = [spec.R] * n
        transs = [perturbed_uniform(spec.T, params[i + 1]) for i in range(n - 1)]
    with backend.ctx():
        beta0 = [sc(x) for x in beta0_frac]
        emit_at = [
            [[sc(e.rows[j][y]) for j in range(s)] for y in range(s)] for e in emits
        ]
        trans_at = [
            [[sc(t.rows[j][k]) for j in range(s)] for k in range(s)] for t in transs
        ]
        domain = _scalar_domain(backend)
        sums = {n - 1: domain.new_acc(), n: domain.new_acc()}
        _walk(beta0, emit_at, trans_at, 0, n, sums, domain)
        return domain.finish(sums[n]) - domain.finish(sums[n - 1])
