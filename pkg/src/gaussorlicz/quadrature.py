"""Gaussian expectations and the quadratures behind every other module.

The base measure is the standard Gaussian density
M(x) = (2 pi)^(-n/2) exp(-|x|^2/2) on R^n.  Two schemes are supported:

* gauss-hermite-tensor: per-axis Gauss-Hermite nodes rescaled to the
  standard normal (exact for polynomials of degree < 2m per axis),
  tensorized; restricted to n <= 4 because the cost is m^n.
* qmc: a scrambled Sobol sequence mapped through the Gaussian inverse CDF;
  the sequence is extensible, so doubling the sample count reuses the
  first half and gives a natural refinement error estimate.

Error estimates everywhere are refinement differences: the reported value
comes from the doubled rule, the estimate is |value - coarser value|.
Divergent integrals surface as NoConvergence (or as +inf from the
log-space helpers), never as silent infinities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate
from scipy.special import logsumexp, ndtri, roots_hermitenorm
from scipy.stats import qmc

from .errors import ConfigError, DimensionMismatch, NoConvergence, NonFinite, NotADensity
from .expr import Expr, eval_batch, scale as expr_scale

GAUSS_HERMITE = "gauss-hermite-tensor"
QMC = "qmc"

# per-axis defaults keep the tensor cost m^n at desk scale
_DEFAULT_ORDER = {1: 128, 2: 48, 3: 20, 4: 12}
_MAX_TENSOR_NODES = 25_000_000


@dataclass(frozen=True)
class QuadratureSpec:
    """Scheme + resolution for Gaussian expectations in a fixed dimension."""
    dim: int
    scheme: str = GAUSS_HERMITE
    order: int = 0          # per-axis Gauss-Hermite order; 0 = dimension default
    samples: int = 4096     # QMC sample count (power of two)
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigError("dimension must be a positive integer")
        if self.scheme == GAUSS_HERMITE:
            if self.dim > 4:
                raise ConfigError("gauss-hermite-tensor is limited to dim <= 4 (cost m^n)")
            if self.order and self.order < 2:
                raise ConfigError("tensor order must be >= 2")
        elif self.scheme == QMC:
            if self.samples < 1024:
                raise ConfigError("qmc needs at least 1024 samples")
            if self.samples & (self.samples - 1):
                raise ConfigError("qmc sample count must be a power of two")
        else:
            raise ConfigError(f"unknown quadrature scheme {self.scheme!r}")

    @property
    def effective_order(self) -> int:
        return self.order if self.order else _DEFAULT_ORDER[self.dim]

    def refined(self) -> "QuadratureSpec":
        if self.scheme == GAUSS_HERMITE:
            return replace(self, order=2 * self.effective_order)
        return replace(self, samples=2 * self.samples)


def default_spec(dim, scheme=GAUSS_HERMITE, seed=0) -> QuadratureSpec:
    if scheme == GAUSS_HERMITE and dim > 4:
        scheme = QMC
    return QuadratureSpec(dim=dim, scheme=scheme, seed=seed)


@dataclass(frozen=True)
class IntegralResult:
    """A quadrature value with its refinement-difference error estimate."""
    value: float
    error_estimate: float
    spec: QuadratureSpec | None = None


@lru_cache(maxsize=64)
def _gh_axis(order):
    # probabilists' weight: stable to order ~1000, unlike numpy's hermgauss
    x, w = roots_hermitenorm(order)
    return x, w / w.sum()


@lru_cache(maxsize=32)
def _gh_tensor(dim, order):
    if order ** dim > _MAX_TENSOR_NODES:
        raise ConfigError(f"tensor rule with {order}^{dim} nodes is beyond desk scale")
    z, w = _gh_axis(order)
    grids = np.meshgrid(*([z] * dim), indexing="ij")
    X = np.stack([g.reshape(-1) for g in grids], axis=1)
    wgrids = np.meshgrid(*([w] * dim), indexing="ij")
    W = np.ones(X.shape[0])
    for g in wgrids:
        W = W * g.reshape(-1)
    return X, W


@lru_cache(maxsize=32)
def _qmc_nodes(dim, samples, seed):
    sob = qmc.Sobol(d=dim, scramble=True, seed=seed)
    u = sob.random(samples)
    X = ndtri(u)
    W = np.full(samples, 1.0 / samples)
    return X, W


def nodes(spec: QuadratureSpec):
    """(X, w) with sum(w) = 1 so that E_M[f] ~= sum(w * f(X))."""
    if spec.scheme == GAUSS_HERMITE:
        return _gh_tensor(spec.dim, spec.effective_order)
    return _qmc_nodes(spec.dim, spec.samples, spec.seed)


def integrand_values(f, X) -> np.ndarray:
    """Evaluate an expression or a batch callable on the node matrix."""
    if isinstance(f, Expr):
        return eval_batch(f, X)
    out = np.asarray(f(X), dtype=float)
    if out.shape != (X.shape[0],):
        raise DimensionMismatch(f"callable integrand returned shape {out.shape}")
    return out


def _level_value(f, spec):
    X, w = nodes(spec)
    v = integrand_values(f, X)
    if not np.isfinite(v).all():
        raise NonFinite("integrand is not finite on a quadrature node")
    return float(np.dot(w, v))


def gauss_expect(f, spec: QuadratureSpec, tol=None, max_doublings=6) -> IntegralResult:
    """E_M[f] with a refinement-doubling error estimate.

    With `tol` set, the rule keeps doubling until successive values agree
    within tol (absolute) and raises NoConvergence past `max_doublings`.
    """
    cur = spec
    prev = _level_value(f, cur)
    for k in range(max_doublings):
        nxt = cur.refined()
        val = _level_value(f, nxt)
        err = abs(val - prev)
        if tol is None or err <= tol:
            return IntegralResult(value=val, error_estimate=err, spec=nxt)
        prev, cur = val, nxt
    raise NoConvergence(f"no convergence to tol={tol} after {max_doublings} doublings")


def _level_logvalue(logf, spec):
    """log E_M[e^logf] by logsumexp; +inf values mean genuine divergence."""
    X, w = nodes(spec)
    L = integrand_values(logf, X)
    if np.isnan(L).any():
        raise NonFinite("log-integrand is NaN on a quadrature node")
    return float(logsumexp(L + np.log(w)))


def gauss_expect_log(logf, spec: QuadratureSpec) -> IntegralResult:
    """E_M[exp(logf)] computed in log space (overflow-safe for exponentials)."""
    v0 = _level_logvalue(logf, spec)
    fine = spec.refined()
    v1 = _level_logvalue(logf, fine)
    value = math.exp(v1) if v1 < 709.0 else math.inf
    prev = math.exp(v0) if v0 < 709.0 else math.inf
    err = abs(value - prev) if math.isfinite(value) and math.isfinite(prev) else math.inf
    return IntegralResult(value=value, error_estimate=err, spec=fine)


def expect_converged(f, spec: QuadratureSpec, rel_tol=1e-3, log_form=False):
    """(value, converged): the two-doubling finiteness surrogate.

    Finiteness of an integral is operationalized as stability of the
    quadrature value under two refinement doublings: the last doubling must
    move the value by less than rel_tol relative.  Non-finite node values
    count as divergence, not as errors.
    """
    level = _level_logvalue if log_form else _level_value
    try:
        v1 = level(f, spec.refined())
        v2 = level(f, spec.refined().refined())
    except NonFinite:
        return math.inf, False
    if log_form:
        if v2 >= 709.0 or v1 >= 709.0:
            return math.inf, False
        v1, v2 = math.exp(v1), math.exp(v2)
    if not (math.isfinite(v1) and math.isfinite(v2)):
        return math.inf, False
    ok = abs(v2 - v1) <= rel_tol * max(1.0, abs(v2))
    return v2, ok


@lru_cache(maxsize=64)
def _gl_axis(order):
    x, w = leggauss(order)
    return x, w


@lru_cache(maxsize=32)
def _gl_tensor(dim, order):
    if order ** dim > _MAX_TENSOR_NODES:
        raise ConfigError(f"tensor rule with {order}^{dim} nodes is beyond desk scale")
    x, w = _gl_axis(order)
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    X = np.stack([g.reshape(-1) for g in grids], axis=1)
    wg = np.meshgrid(*([w] * dim), indexing="ij")
    W = np.ones(X.shape[0])
    for g in wg:
        W = W * g.reshape(-1)
    return X, W


def _ball_value(f, R, dim, order):
    Z, W = _gl_tensor(dim, order)
    X = R * Z
    v = integrand_values(f, X)
    if not np.isfinite(v).all():
        raise NonFinite("integrand is not finite on a quadrature node")
    if dim > 1:
        v = v * (np.sum(X * X, axis=1) < R * R)
    return float(np.dot(W, v)) * R ** dim


def lebesgue_integral_ball(f, R, spec: QuadratureSpec) -> IntegralResult:
    """Lebesgue integral of f over the open ball |x| < R.

    Tensor Gauss-Legendre rule on the bounding box [-R, R]^n with the ball
    indicator (no indicator needed in 1-d where box and ball coincide).
    """
    if R <= 0:
        raise ConfigError("ball radius must be positive")
    order = spec.effective_order if spec.scheme == GAUSS_HERMITE else 64
    v0 = _ball_value(f, R, spec.dim, order)
    v1 = _ball_value(f, R, spec.dim, 2 * order)
    return IntegralResult(value=v1, error_estimate=abs(v1 - v0), spec=spec)


# ---------------------------------------------------------------------------
# mollification

@lru_cache(maxsize=16)
def _cube_rule(dim, order):
    """Nodes/weights on [-1,1]^n carrying the normalized standard bump.

    Self-normalizing: the bump integral is computed with the same rule, so
    the discrete weights sum to exactly 1 and constants mollify to
    themselves exactly.
    """
    Z, W = _gl_tensor(dim, order)
    s = np.sum(Z * Z, axis=1)
    prof = np.zeros_like(s)
    m = s < 1.0
    prof[m] = np.exp(-1.0 / (1.0 - s[m]))
    wb = W * prof
    return Z, wb / wb.sum()


def mollify(f, lam, spec: QuadratureSpec, cube_order=24):
    """Convolution f * omega_lam as a numerically evaluable function.

    omega is the normalized bump exp(-1/(1-|z|^2)) supported in the unit
    ball of [-1,1]^n; the returned callable maps a batch (N, n) to (N,).
    """
    if lam <= 0:
        raise ConfigError("mollifier scale must be positive")
    Z, W = _cube_rule(spec.dim, cube_order)

    def convolved(X):
        X = np.asarray(X, dtype=float)
        out = np.zeros(X.shape[0])
        for k in range(Z.shape[0]):
            out += W[k] * integrand_values(f, X - lam * Z[k])
        return out

    return convolved


# ---------------------------------------------------------------------------
# 1-d adaptive fallback and density normalization

def adaptive_expect_1d(f, singular_points=(), tol=1e-10) -> IntegralResult:
    """E_M[f] in one dimension via adaptive quadrature.

    Used where the tensor rule cannot reach the required accuracy:
    integrands with integrable interior singularities (fractional moments)
    or kinks at known locations.  The line is split at the listed points so
    QUADPACK sees them as endpoints.
    """
    g = (lambda x: float(integrand_values(f, np.array([[x]]))[0] *
                        math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)))
    cuts = sorted(set(float(s) for s in singular_points))
    pieces = [(-np.inf, cuts[0])] if cuts else [(-np.inf, np.inf)]
    for a, b in zip(cuts[:-1], cuts[1:]):
        pieces.append((a, b))
    if cuts:
        pieces.append((cuts[-1], np.inf))
    total, err = 0.0, 0.0
    for a, b in pieces:
        v, e = integrate.quad(g, a, b, epsabs=tol, epsrel=tol, limit=200)
        total += v
        err += e
    return IntegralResult(value=total, error_estimate=err, spec=None)


def normalize_density(p: Expr, spec: QuadratureSpec, slack=0.01):
    """Rescale a claimed density so E_M[p] = 1 under the given rule.

    Deviations beyond `slack` are treated as corpus mistakes and raise
    NotADensity rather than being silently absorbed.
    """
    res = gauss_expect(p, spec)
    z = res.value
    if not math.isfinite(z) or abs(z - 1.0) > slack:
        raise NotADensity(f"E_M[p] = {z!r}, outside 1 +- {slack}")
    if z == 1.0:
        return p, z
    return expr_scale(1.0 / z, p), z
