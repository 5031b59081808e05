"""Entropy of Gaussian-space densities and its mixture-space equivalence.

For a positive density p (E_M[p] = 1) the entropy -E_M[p log p] is finite
exactly when p lies in the mixture space, i.e. when E_M[(cosh-1)*(p)] is
finite; both finiteness verdicts here are the two-doubling quadrature
surrogate.  The log+ bracket pins the entropy between -E_M[p log+ p] and
e^-1 - E_M[p log+ p].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .checks import CheckReport, verdict_report
from .errors import DomainError, GaussOrliczError
from .norms import modular_or_inf
from .quadrature import QuadratureSpec, expect_converged, integrand_values, normalize_density
from .young import COSH_CONJ


@dataclass(frozen=True)
class EntropyReport:
    entropy: float            # -E_M[p log p]; -inf when divergent
    logplus_integral: float   # E_M[p log+ p]; +inf when divergent
    mixture_modular: float    # E_M[(cosh-1)*(p)]; +inf when divergent

    @property
    def entropy_finite(self) -> bool:
        return math.isfinite(self.entropy)

    @property
    def mixture_finite(self) -> bool:
        return math.isfinite(self.mixture_modular)


def _plogp(p):
    # xlogy extends p log p continuously by 0 where the density underflows
    def g(X):
        v = integrand_values(p, X)
        if np.any(v < 0.0):
            raise DomainError("density is negative on a quadrature node")
        return xlogy(v, v)
    return g


def _plogplusp(p):
    def g(X):
        v = integrand_values(p, X)
        if np.any(v < 0.0):
            raise DomainError("density is negative on a quadrature node")
        return xlogy(v, np.maximum(v, 1.0))
    return g


def entropy(p, spec: QuadratureSpec, bracket_slack=1e-4) -> EntropyReport:
    """Entropy, log+ integral and mixture modular of a density.

    The density is renormalized when E_M[p] is within 1% of 1 and rejected
    otherwise (NotADensity).  When all three integrals are finite the log+
    bracket is asserted up to quadrature slack; a gross violation signals a
    broken quadrature and raises.
    """
    p, _ = normalize_density(p, spec)
    plogp, ok_e = expect_converged(_plogp(p), spec)
    logplus, ok_l = expect_converged(_plogplusp(p), spec)
    mix = modular_or_inf(p, COSH_CONJ, spec)
    ent = -plogp if ok_e else -math.inf
    lpl = logplus if ok_l else math.inf
    rep = EntropyReport(entropy=ent, logplus_integral=lpl, mixture_modular=mix)
    if rep.entropy_finite and math.isfinite(lpl):
        lo, hi = -lpl, math.exp(-1.0) - lpl
        if not (lo - bracket_slack <= ent <= hi + bracket_slack):
            raise GaussOrliczError(
                f"log+ bracket violated: {lo} <= {ent} <= {hi} (quadrature breakdown)")
    return rep


def entropy_membership_check(p, spec: QuadratureSpec) -> CheckReport:
    """Finite entropy <=> finite mixture modular, judged by convergence."""
    rep = entropy(p, spec)
    agree = rep.entropy_finite == rep.mixture_finite
    if rep.entropy_finite:
        lo = -rep.logplus_integral
        hi = math.exp(-1.0) - rep.logplus_integral
        detail = (f"entropy={rep.entropy:.6g} in bracket [{lo:.6g}, {hi:.6g}]; "
                  f"mixture modular={rep.mixture_modular:.6g}")
    else:
        detail = "entropy divergent; mixture modular divergent" if not rep.mixture_finite \
            else f"entropy divergent but mixture modular={rep.mixture_modular:.6g}"
    return verdict_report("entropy-mixture-equivalence", agree, note=detail)
