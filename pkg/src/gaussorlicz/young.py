"""The four Young functions generating the exponential and mixture spaces.

cosh - 1 and its Legendre conjugate pair with the classical couple
Phi(x) = e^x - 1 - x,  Psi(y) = (1+y) log(1+y) - y,
which they sandwich up to the constants checked by
`conjugacy_sandwich_check`.  All evaluations symmetrize through |t| and
use cancellation-free forms near zero.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .checks import CheckReport, make_report
from .errors import DomainError

COSH_MINUS_ONE_KIND = "cosh-minus-one"
COSH_CONJ_KIND = "cosh-conj"
EXP_PHI_KIND = "exp-phi"
LOG_PSI_KIND = "log-psi"


def _cosh_minus_one(t):
    # 2 sinh^2(t/2) avoids cancellation for small t
    with np.errstate(over="ignore"):
        s = np.sinh(t / 2.0)
        return 2.0 * s * s


def _cosh_conj(y):
    # y asinh y - (sqrt(1+y^2) - 1), the second factor written stably
    return y * np.arcsinh(y) - y * y / (np.sqrt(1.0 + y * y) + 1.0)


def _exp_phi(t):
    with np.errstate(over="ignore"):
        return np.expm1(t) - t


def _log_psi(y):
    return (1.0 + y) * np.log1p(y) - y


_EVAL = {
    COSH_MINUS_ONE_KIND: _cosh_minus_one,
    COSH_CONJ_KIND: _cosh_conj,
    EXP_PHI_KIND: _exp_phi,
    LOG_PSI_KIND: _log_psi,
}

_DERIV = {
    COSH_MINUS_ONE_KIND: np.sinh,
    COSH_CONJ_KIND: np.arcsinh,
    EXP_PHI_KIND: lambda t: np.expm1(t),
    LOG_PSI_KIND: lambda y: np.log1p(y),
}

_CONJ = {
    COSH_MINUS_ONE_KIND: COSH_CONJ_KIND,
    COSH_CONJ_KIND: COSH_MINUS_ONE_KIND,
    EXP_PHI_KIND: LOG_PSI_KIND,
    LOG_PSI_KIND: EXP_PHI_KIND,
}


@dataclass(frozen=True)
class YoungFunction:
    """Convex, even, zero-at-zero generator of a Gaussian Orlicz space."""
    kind: str

    def __call__(self, t):
        return _EVAL[self.kind](np.abs(np.asarray(t, dtype=float)))

    def deriv(self, t):
        """Derivative on t >= 0 (odd extension elsewhere)."""
        t = np.asarray(t, dtype=float)
        return np.sign(t) * _DERIV[self.kind](np.abs(t))

    def log_eval(self, t):
        """log(Y(|t|)), stable for arguments far beyond overflow."""
        t = np.abs(np.asarray(t, dtype=float))
        if self.kind == COSH_MINUS_ONE_KIND:
            out = np.full(t.shape, -np.inf)
            small = (t > 0) & (t < 30.0)
            out[small] = np.log(_cosh_minus_one(t[small]))
            big = t >= 30.0
            # cosh t - 1 = e^t (1 + e^{-2t} - 2 e^{-t}) / 2
            tb = t[big]
            out[big] = tb - np.log(2.0) + np.log1p(np.exp(-2.0 * tb) - 2.0 * np.exp(-tb))
            return out
        if self.kind == EXP_PHI_KIND:
            out = np.full(t.shape, -np.inf)
            small = (t > 0) & (t < 700.0)
            out[small] = np.log(_exp_phi(t[small]))
            big = t >= 700.0
            out[big] = t[big]
            return out
        v = _EVAL[self.kind](t)
        with np.errstate(divide="ignore"):
            return np.where(v > 0, np.log(np.maximum(v, 1e-300)), -np.inf)

    @property
    def conjugate(self) -> "YoungFunction":
        return YoungFunction(_CONJ[self.kind])


COSH_MINUS_ONE = YoungFunction(COSH_MINUS_ONE_KIND)
COSH_CONJ = YoungFunction(COSH_CONJ_KIND)
EXP_PHI = YoungFunction(EXP_PHI_KIND)
LOG_PSI = YoungFunction(LOG_PSI_KIND)


def young_eval(Y: YoungFunction, t) -> float:
    return float(Y(t))


def delta2_constant(a) -> float:
    return max(abs(a), a * a)


def delta2_check(a, ygrid, tolerance=1e-12) -> CheckReport:
    """Y*(a y) <= C(a) Y*(y) with C(a) = max(|a|, a^2), pointwise on the grid."""
    y = np.asarray(ygrid, dtype=float)
    if y.size == 0:
        raise DomainError("delta2_check needs a nonempty grid")
    lhs = COSH_CONJ(a * y)
    rhs = delta2_constant(a) * COSH_CONJ(y)
    i = int(np.argmin(rhs - lhs))
    return make_report(f"delta2[a={a}]", lhs[i], rhs[i], tolerance,
                       note=f"worst point y={y[i]:.6g} over {y.size}-point grid")


def conjugacy_sandwich_check(grid, tolerance=1e-12) -> CheckReport:
    """Psi <= (cosh-1)* <= Psi(2.)/2 and Phi/2 <= cosh-1 <= Phi on the grid.

    Both sides grow like e^t, so each point is compared at its own scale:
    the reported lhs/rhs are divided by max(1, |lhs|, |rhs|) and the margin
    is the worst relative gap.  Points where both sides overflow are
    vacuous and skipped.
    """
    t = np.asarray(grid, dtype=float)
    pairs = [
        ("Psi <= coshconj", LOG_PSI(t), COSH_CONJ(t)),
        ("coshconj <= Psi(2y)/2", COSH_CONJ(t), 0.5 * LOG_PSI(2 * t)),
        ("Phi/2 <= cosh-1", 0.5 * EXP_PHI(t), COSH_MINUS_ONE(t)),
        ("cosh-1 <= Phi", COSH_MINUS_ONE(t), EXP_PHI(t)),
    ]
    worst_name, worst_l, worst_r, worst_gap = None, 0.0, 1.0, np.inf
    for nm, lo, hi in pairs:
        scl = np.maximum(1.0, np.maximum(np.abs(lo), np.abs(hi)))
        with np.errstate(invalid="ignore"):
            gap = (hi - lo) / scl
        gap = np.where(np.isnan(gap), np.inf, gap)
        i = int(np.argmin(gap))
        if gap[i] < worst_gap:
            worst_name, worst_gap = nm, gap[i]
            worst_l, worst_r = lo[i] / scl[i], hi[i] / scl[i]
    return make_report("conjugacy-sandwich", worst_l, worst_r, tolerance,
                       note=f"worst inequality (per-point scaled): {worst_name}")


def fenchel_young_check(xgrid, ygrid=None, tolerance=1e-10) -> CheckReport:
    """x y <= (cosh-1)(x) + (cosh-1)*(y), equality at y = sinh(x)."""
    x = np.asarray(xgrid, dtype=float)
    y = np.sinh(x) if ygrid is None else np.asarray(ygrid, dtype=float)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    lhs = xx * yy
    rhs = COSH_MINUS_ONE(xx) + COSH_CONJ(yy)
    gap = rhs - lhs
    i = np.unravel_index(int(np.argmin(gap)), gap.shape)
    # equality on the diagonal y = sinh(x)
    eq_gap = np.abs(COSH_MINUS_ONE(x) + COSH_CONJ(np.sinh(x)) - x * np.sinh(x))
    note = f"max |equality defect| at y=sinh(x): {float(eq_gap.max()):.3e}"
    rep = make_report("fenchel-young", lhs[i], rhs[i], tolerance, note=note)
    if float(eq_gap.max()) > max(tolerance, 1e-9 * float(np.max(np.abs(lhs)) + 1)):
        rep = CheckReport(name=rep.name, lhs=rep.lhs, rhs=rep.rhs, margin=rep.margin,
                          passed=False, tolerance=rep.tolerance, note=note)
    return rep
