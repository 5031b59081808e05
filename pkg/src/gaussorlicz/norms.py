"""Luxemburg and Orlicz norms over the Gaussian weight.

The Luxemburg norm is the scale rho at which the modular E_M[Y(f/rho)]
saturates at 1; it is found by bracketing and bisection on values of f
cached at the quadrature nodes, so the solve costs one expression
evaluation per refinement level and pure array work per iterate.  The
dual (Orlicz) norm uses the Amemiya form inf_k (1 + E_M[Y(k f)])/k, an
exact equivalent of the sup-over-unit-ball definition.

Modulars are summed in log space, so enormous but integrable values do
not overflow; a modular that is genuinely infinite surfaces as
NoConvergence, the computable stand-in for +infinity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .checks import CheckReport, make_report
from .errors import NoConvergence, NonFinite
from .expr import Expr
from .quadrature import (IntegralResult, QuadratureSpec, integrand_values,
                         lebesgue_integral_ball, nodes)
from .young import COSH_CONJ, COSH_MINUS_ONE, YoungFunction

_BRACKET_STEPS = 60


@dataclass(frozen=True)
class LuxemburgNorm:
    value: float
    young: YoungFunction
    modular_at_value: float   # audit: modular of f/value on the refined rule


class _ModularTable:
    """Node values of f (and optional weight density) at two refinement levels."""

    def __init__(self, f, Y, spec, weight=None):
        self.young = Y
        self.levels = []
        for sp in (spec, spec.refined()):
            X, w = nodes(sp)
            fv = integrand_values(f, X)
            with np.errstate(divide="ignore"):
                logw = np.log(w)
            if weight is not None:
                pv = integrand_values(weight, X)
                if np.any(pv < 0):
                    raise NonFinite("weight density is negative on a quadrature node")
                with np.errstate(divide="ignore"):
                    logw = logw + np.where(pv > 0, np.log(np.maximum(pv, 1e-300)), -np.inf)
            self.levels.append((fv, logw))

    def max_abs(self):
        return max(float(np.max(np.abs(fv))) if fv.size else 0.0
                   for fv, _ in self.levels)

    def modular(self, rho, level=0):
        fv, logw = self.levels[level]
        if np.isnan(fv).any():
            raise NonFinite("integrand is NaN on a quadrature node")
        with np.errstate(over="ignore"):
            terms = self.young.log_eval(fv / rho) + logw
            return float(np.exp(logsumexp(terms)))


def modular(f, Y: YoungFunction, spec: QuadratureSpec, weight=None,
            rel_tol=1e-3) -> IntegralResult:
    """E_M[Y(f)] (optionally against the weighted measure p.M).

    Divergence -- a non-finite refinement value or failure to settle under
    two refinement doublings -- raises NoConvergence, which callers read
    as modular = +infinity.
    """
    t1 = _ModularTable(f, Y, spec.refined(), weight)
    v1, v2 = t1.modular(1.0, 0), t1.modular(1.0, 1)
    err = abs(v2 - v1)
    if not (math.isfinite(v1) and math.isfinite(v2)):
        raise NoConvergence("modular is not finite under refinement")
    if err > rel_tol * max(1.0, abs(v2)):
        raise NoConvergence(f"modular did not settle: levels {v1!r} -> {v2!r}")
    return IntegralResult(value=v2, error_estimate=err, spec=spec.refined().refined())


def modular_or_inf(f, Y, spec, weight=None) -> float:
    try:
        return modular(f, Y, spec, weight=weight).value
    except (NoConvergence, NonFinite):
        return math.inf


def luxemburg_norm(f, Y: YoungFunction, spec: QuadratureSpec, weight=None,
                   rel_tol=1e-8) -> LuxemburgNorm:
    """Solve E_M[Y(f/rho)] = 1 for rho by bracketing and bisection.

    The bracket is grown by doubling/halving from rho = 1 for up to 60
    steps; if the modular never drops to 1 the function is declared
    outside the space (NoConvergence).  Infinite modulars count as > 1.
    """
    table = _ModularTable(f, Y, spec, weight)
    if table.max_abs() == 0.0:
        return LuxemburgNorm(value=0.0, young=Y, modular_at_value=0.0)

    def g(rho):
        try:
            return table.modular(rho, level=0)
        except NonFinite:
            return math.inf

    lo = hi = 1.0
    if g(1.0) >= 1.0:
        for _ in range(_BRACKET_STEPS):
            hi *= 2.0
            if g(hi) < 1.0:
                break
        else:
            raise NoConvergence("modular stays above 1 at every scaling: not in the space")
        lo = hi / 2.0
    else:
        for _ in range(_BRACKET_STEPS):
            lo /= 2.0
            if g(lo) >= 1.0:
                break
        else:
            lo = 0.0  # f is numerically indistinguishable from 0 at this rule
        hi = lo * 2.0 if lo else hi
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if g(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
    rho = 0.5 * (lo + hi)
    return LuxemburgNorm(value=rho, young=Y, modular_at_value=table.modular(rho, level=1))


def luxemburg_or_inf(f, Y, spec, weight=None) -> float:
    try:
        return luxemburg_norm(f, Y, spec, weight=weight).value
    except (NoConvergence, NonFinite):
        return math.inf


def orlicz_dual_norm(f, Y: YoungFunction, spec: QuadratureSpec, rel_tol=1e-8) -> float:
    """Orlicz norm by the Amemiya formula, golden-section search on log k."""
    table = _ModularTable(f, Y, spec)
    if table.max_abs() == 0.0:
        return 0.0

    def h(logk):
        k = math.exp(logk)
        try:
            m = table.modular(1.0 / k, level=0)
        except NonFinite:
            return math.inf
        return (1.0 + m) / k if math.isfinite(m) else math.inf

    # coarse scan for the finite unimodal pocket
    logs = np.log(2.0) * np.arange(-_BRACKET_STEPS, _BRACKET_STEPS + 1)
    vals = np.array([h(u) for u in logs])
    if not np.isfinite(vals).any():
        raise NoConvergence("Amemiya objective infinite at every scaling: not in the space")
    i = int(np.nanargmin(np.where(np.isfinite(vals), vals, np.inf)))
    a = logs[max(i - 1, 0)]
    b = logs[min(i + 1, len(logs) - 1)]
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - phi * (b - a), a + phi * (b - a)
    hc, hd = h(c), h(d)
    while d - c > rel_tol:
        if hc <= hd:
            b, d, hd = d, c, hc
            c = b - phi * (b - a)
            hc = h(c)
        else:
            a, c, hc = c, d, hd
            d = a + phi * (b - a)
            hd = h(d)
    return min(h(0.5 * (a + b)), hc, hd)


def _lp_norm_or_inf(f, a, spec):
    from .quadrature import expect_converged

    def g(X):
        return np.abs(integrand_values(f, X)) ** a

    v, ok = expect_converged(g, spec)
    return v ** (1.0 / a) if ok and math.isfinite(v) else math.inf


def lebesgue_inclusion_check(f, a, R, spec: QuadratureSpec,
                             tolerance=1e-9) -> CheckReport:
    """Walk the inclusion chain Lexp -> L^a -> LlogL -> L^1 plus restriction.

    Records where the function enters the chain; passes when finiteness is
    monotone down the chain (an earlier-finite, later-infinite pair is the
    only failure) and the L^a(ball R) restriction is finite whenever the
    L^a(M) norm is.
    """
    if a <= 1:
        raise NoConvergence("exponent must exceed 1")
    stages = [
        ("Lexp", lambda: luxemburg_or_inf(f, COSH_MINUS_ONE, spec)),
        (f"L^{a}(M)", lambda: _lp_norm_or_inf(f, a, spec)),
        ("LlogL", lambda: luxemburg_or_inf(f, COSH_CONJ, spec)),
        ("L^1(M)", lambda: _lp_norm_or_inf(f, 1.0001, spec)),
    ]
    values = [(nm, fn()) for nm, fn in stages]
    finite = [math.isfinite(v) for _, v in values]
    monotone = all(finite[i + 1] for i in range(len(finite) - 1) if finite[i])
    try:
        restr = lebesgue_integral_ball(lambda X: np.abs(integrand_values(f, X)) ** a,
                                       R, spec).value ** (1.0 / a)
    except NonFinite:
        restr = math.inf
    restriction_ok = math.isfinite(restr) or not finite[1]
    first = next((nm for (nm, v), fin in zip(values, finite) if fin), "none")
    note = ("; ".join(f"{nm}={v:.6g}" for nm, v in values)
            + f"; L^{a}(ball {R})={restr:.6g}; enters chain at {first}")
    ok = monotone and restriction_ok
    return make_report(f"lebesgue-inclusion[a={a},R={R}]", 0.5, 1.0 if ok else 0.0,
                       0.25, note=note)
