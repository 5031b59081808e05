"""Expression trees for closed-form scalar functions on R^n.

Functions enter the library as small immutable ASTs: polynomials,
exponentials, hyperbolics, bumps, indicators and affine reparametrizations.
A registry of named C^1 scalar maps keeps symbolic differentiation closed
under the node set (the derivative of log needs a reciprocal, asinh needs
(1+u^2)^(-1/2), bump profiles need their own closed-form derivatives).

Evaluation is vectorized over batches of points, shape (N, dim) -> (N,).
Differentiation and translation are exact tree rewrites, so classical and
distributional derivatives coincide on this class by construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import singledispatch
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, DomainError, NotDifferentiable


class Expr:
    """Immutable expression node.  Construct through the module builders."""

    dim: int

    def __call__(self, x):
        return evaluate(self, x)

    def __add__(self, other):
        return add(self, _coerce(other, self.dim))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, scale(-1.0, _coerce(other, self.dim)))

    def __rsub__(self, other):
        return add(_coerce(other, self.dim), scale(-1.0, self))

    def __mul__(self, other):
        return mul(self, _coerce(other, self.dim))

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, Expr):
            raise TypeError("division only by scalars; wrap 1/f as scalar_map('recip', f)")
        return scale(1.0 / float(c), self)

    def __neg__(self):
        return scale(-1.0, self)

    def __pow__(self, k):
        return power(self, k)


@dataclass(frozen=True)
class Const(Expr):
    dim: int
    value: float


@dataclass(frozen=True)
class Coord(Expr):
    dim: int
    index: int


@dataclass(frozen=True)
class AffineForm(Expr):
    """a . x + b"""
    dim: int
    a: tuple
    b: float


@dataclass(frozen=True)
class Add(Expr):
    dim: int
    children: tuple


@dataclass(frozen=True)
class Mul(Expr):
    dim: int
    children: tuple


@dataclass(frozen=True)
class Scale(Expr):
    dim: int
    factor: float
    child: Expr


@dataclass(frozen=True)
class Power(Expr):
    """child ** k with integer k >= 0."""
    dim: int
    child: Expr
    exponent: int


@dataclass(frozen=True)
class Abs(Expr):
    dim: int
    child: Expr


@dataclass(frozen=True)
class Exp(Expr):
    dim: int
    child: Expr


@dataclass(frozen=True)
class Log(Expr):
    dim: int
    child: Expr


@dataclass(frozen=True)
class Cosh(Expr):
    dim: int
    child: Expr


@dataclass(frozen=True)
class Sinh(Expr):
    dim: int
    child: Expr


@dataclass(frozen=True)
class Asinh(Expr):
    dim: int
    child: Expr


@dataclass(frozen=True)
class Tanh(Expr):
    dim: int
    child: Expr


@dataclass(frozen=True)
class Min(Expr):
    dim: int
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Max(Expr):
    dim: int
    left: Expr
    right: Expr


@dataclass(frozen=True)
class ComposeAffine(Expr):
    """child(A x + b); A has child.dim rows and dim columns."""
    dim: int
    child: Expr
    matrix: tuple
    offset: tuple


@dataclass(frozen=True)
class Bump(Expr):
    """exp(-1/(1-|z|^2)) on |z| < 1, z = (x - center)/radius; 0 outside."""
    dim: int
    center: tuple
    radius: float


@dataclass(frozen=True)
class IndicatorBall(Expr):
    """1 on |x| < radius, 0 outside."""
    dim: int
    radius: float


@dataclass(frozen=True)
class ScalarMap(Expr):
    """Named C^1 scalar map from the registry applied to the child value."""
    dim: int
    name: str
    child: Expr
    params: tuple = ()


# ---------------------------------------------------------------------------
# builders (light constant folding keeps derivative trees small)

def _coerce(v, dim):
    if isinstance(v, Expr):
        if v.dim != dim:
            raise DimensionMismatch(f"mixing expressions of dim {v.dim} and {dim}")
        return v
    return Const(dim, float(v))


def constant(c, dim):
    if dim < 1:
        raise DimensionMismatch("dimension must be a positive integer")
    return Const(dim, float(c))


def coordinate(j, dim):
    if not 0 <= j < dim:
        raise DimensionMismatch(f"coordinate index {j} out of range for dim {dim}")
    return Coord(dim, int(j))


def affine(a, b=0.0):
    a = tuple(float(v) for v in a)
    if not a:
        raise DimensionMismatch("affine form needs at least one coefficient")
    if all(v == 0.0 for v in a):
        return Const(len(a), float(b))
    return AffineForm(len(a), a, float(b))


def add(*children):
    flat, total, dim = [], 0.0, None
    for c in children:
        if dim is None:
            dim = c.dim
        elif c.dim != dim:
            raise DimensionMismatch("children of add have different dimensions")
        if isinstance(c, Add):
            flat.extend(c.children)
        elif isinstance(c, Const):
            total += c.value
        else:
            flat.append(c)
    # second pass folds constants exposed by flattening
    out = []
    for c in flat:
        if isinstance(c, Const):
            total += c.value
        else:
            out.append(c)
    if dim is None:
        raise DimensionMismatch("add of nothing")
    if total != 0.0 or not out:
        out.append(Const(dim, total))
    return out[0] if len(out) == 1 else Add(dim, tuple(out))


def mul(*children):
    flat, factor, dim = [], 1.0, None
    for c in children:
        if dim is None:
            dim = c.dim
        elif c.dim != dim:
            raise DimensionMismatch("children of mul have different dimensions")
        if isinstance(c, Mul):
            flat.extend(c.children)
        else:
            flat.append(c)
    out = []
    for c in flat:
        if isinstance(c, Const):
            factor *= c.value
        elif isinstance(c, Scale):
            factor *= c.factor
            out.append(c.child)
        else:
            out.append(c)
    if dim is None:
        raise DimensionMismatch("mul of nothing")
    if factor == 0.0:
        return Const(dim, 0.0)
    if not out:
        return Const(dim, factor)
    core = out[0] if len(out) == 1 else Mul(dim, tuple(out))
    return core if factor == 1.0 else Scale(dim, factor, core)


def scale(c, child):
    c = float(c)
    if c == 1.0:
        return child
    if isinstance(child, Const):
        return Const(child.dim, c * child.value)
    if isinstance(child, Scale):
        return scale(c * child.factor, child.child)
    if c == 0.0:
        return Const(child.dim, 0.0)
    return Scale(child.dim, c, child)


def power(child, k):
    k = int(k)
    if k < 0:
        raise DomainError("power node requires integer exponent >= 0")
    if k == 0:
        return Const(child.dim, 1.0)
    if k == 1:
        return child
    if isinstance(child, Const):
        return Const(child.dim, child.value ** k)
    return Power(child.dim, child, k)


def absval(child):
    return Abs(child.dim, child)


def exp_(child):
    return Exp(child.dim, child)


def log_(child):
    # log(e^u) = u holds unconditionally and keeps chart/patch round trips exact
    if isinstance(child, Exp):
        return child.child
    return Log(child.dim, child)


def cosh_(child):
    return Cosh(child.dim, child)


def sinh_(child):
    return Sinh(child.dim, child)


def asinh_(child):
    return Asinh(child.dim, child)


def tanh_(child):
    return Tanh(child.dim, child)


def min_(left, right):
    right = _coerce(right, left.dim)
    return Min(left.dim, left, right)


def max_(left, right):
    right = _coerce(right, left.dim)
    return Max(left.dim, left, right)


def compose_affine(child, matrix, offset):
    A = np.asarray(matrix, dtype=float)
    b = np.asarray(offset, dtype=float).reshape(-1)
    if A.ndim != 2 or A.shape[0] != child.dim or b.shape[0] != child.dim:
        raise DimensionMismatch(
            f"compose-affine needs a ({child.dim}, n) matrix and offset of length {child.dim}"
        )
    dim = A.shape[1]
    if isinstance(child, ComposeAffine):
        # (u o (A1 . + b1)) o (A2 . + b2) = u o (A1 A2 . + A1 b2 + b1)
        A1 = np.asarray(child.matrix, dtype=float)
        b1 = np.asarray(child.offset, dtype=float)
        return compose_affine(child.child, A1 @ A, A1 @ b + b1)
    if dim == child.dim and np.array_equal(A, np.eye(dim)) and not b.any():
        return child
    return ComposeAffine(dim, child,
                         tuple(tuple(float(v) for v in row) for row in A),
                         tuple(float(v) for v in b))


def translate(f, h):
    """x |-> f(x - h), realized as composition with an affine shift."""
    h = np.asarray(h, dtype=float).reshape(-1)
    if h.shape[0] != f.dim:
        raise DimensionMismatch(f"shift has dim {h.shape[0]}, function has dim {f.dim}")
    return compose_affine(f, np.eye(f.dim), -h)


def bump(center, radius):
    center = tuple(float(v) for v in center)
    if not center:
        raise DimensionMismatch("bump needs an explicit center of positive dimension")
    if radius <= 0:
        raise DomainError("bump radius must be positive")
    return Bump(len(center), center, float(radius))


def indicator_ball(radius, dim):
    if radius <= 0:
        raise DomainError("indicator-ball radius must be positive")
    return IndicatorBall(dim, float(radius))


def scalar_map(name, child, params=()):
    if name not in SCALAR_MAPS:
        raise DomainError(f"unknown scalar map {name!r}")
    return ScalarMap(child.dim, name, child, tuple(float(p) for p in params))


# ---------------------------------------------------------------------------
# evaluation

def eval_batch(f: Expr, X) -> np.ndarray:
    """Evaluate on a batch of points, shape (N, dim) -> (N,)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != f.dim:
        raise DimensionMismatch(f"expected batch of shape (N, {f.dim}), got {X.shape}")
    return _ev(f, X)


def evaluate(f: Expr, x) -> float:
    """Evaluate at a single point in R^dim."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != f.dim:
        raise DimensionMismatch(f"point has dim {x.shape[0]}, function has dim {f.dim}")
    return float(eval_batch(f, x[None, :])[0])


@singledispatch
def _ev(node, X):
    raise TypeError(f"cannot evaluate {type(node).__name__}")


@_ev.register(Const)
def _(node, X):
    return np.full(X.shape[0], node.value)


@_ev.register(Coord)
def _(node, X):
    return X[:, node.index].copy()


@_ev.register(AffineForm)
def _(node, X):
    return X @ np.asarray(node.a) + node.b


@_ev.register(Add)
def _(node, X):
    out = _ev(node.children[0], X)
    for c in node.children[1:]:
        out = out + _ev(c, X)
    return out


@_ev.register(Mul)
def _(node, X):
    out = _ev(node.children[0], X)
    for c in node.children[1:]:
        out = out * _ev(c, X)
    return out


@_ev.register(Scale)
def _(node, X):
    return node.factor * _ev(node.child, X)


@_ev.register(Power)
def _(node, X):
    return _ev(node.child, X) ** node.exponent


@_ev.register(Abs)
def _(node, X):
    return np.abs(_ev(node.child, X))


@_ev.register(Exp)
def _(node, X):
    with np.errstate(over="ignore"):
        return np.exp(_ev(node.child, X))


@_ev.register(Log)
def _(node, X):
    v = _ev(node.child, X)
    if np.any(v <= 0.0):
        raise DomainError("log of a nonpositive value")
    return np.log(v)


@_ev.register(Cosh)
def _(node, X):
    with np.errstate(over="ignore"):
        return np.cosh(_ev(node.child, X))


@_ev.register(Sinh)
def _(node, X):
    with np.errstate(over="ignore"):
        return np.sinh(_ev(node.child, X))


@_ev.register(Asinh)
def _(node, X):
    return np.arcsinh(_ev(node.child, X))


@_ev.register(Tanh)
def _(node, X):
    return np.tanh(_ev(node.child, X))


@_ev.register(Min)
def _(node, X):
    return np.minimum(_ev(node.left, X), _ev(node.right, X))


@_ev.register(Max)
def _(node, X):
    return np.maximum(_ev(node.left, X), _ev(node.right, X))


@_ev.register(ComposeAffine)
def _(node, X):
    A = np.asarray(node.matrix)
    b = np.asarray(node.offset)
    return _ev(node.child, X @ A.T + b)


@_ev.register(Bump)
def _(node, X):
    z = (X - np.asarray(node.center)) / node.radius
    s = np.sum(z * z, axis=1)
    return _bump_profile(s)


@_ev.register(IndicatorBall)
def _(node, X):
    return (np.sum(X * X, axis=1) < node.radius ** 2).astype(float)


@_ev.register(ScalarMap)
def _(node, X):
    return SCALAR_MAPS[node.name].fn(_ev(node.child, X), node.params)


def _bump_profile(s):
    """exp(-1/(1-s)) for s < 1, 0 otherwise (s = |z|^2)."""
    out = np.zeros_like(s)
    m = s < 1.0
    out[m] = np.exp(-1.0 / (1.0 - s[m]))
    return out


# ---------------------------------------------------------------------------
# scalar-map registry

@dataclass(frozen=True)
class _MapDef:
    fn: Callable          # (values, params) -> values
    outer: Callable       # (child_expr, params) -> Expr, derivative wrt the child value


def _fn_recip(v, _):
    if np.any(v == 0.0):
        raise DomainError("reciprocal at zero")
    return 1.0 / v


def _fn_dasinh(v, _):
    return 1.0 / np.sqrt(1.0 + v * v)


def _fn_atan(v, _):
    return np.arctan(v)


def _fn_datan(v, _):
    return 1.0 / (1.0 + v * v)


def _fn_bump_dprofile(s, _):
    out = np.zeros_like(s)
    m = s < 1.0
    r = 1.0 - s[m]
    out[m] = -np.exp(-1.0 / r) / (r * r)
    return out


def _fn_bump_d2profile(s, _):
    out = np.zeros_like(s)
    m = s < 1.0
    r = 1.0 - s[m]
    out[m] = np.exp(-1.0 / r) * (1.0 / r ** 4 - 2.0 / r ** 3)
    return out


def _tail(t):
    """exp(-1/t) for t > 0, else 0; C-infinity glue for cutoffs."""
    out = np.zeros_like(t)
    m = t > 0.0
    out[m] = np.exp(-1.0 / t[m])
    return out


def _tail_d(t):
    out = np.zeros_like(t)
    m = t > 0.0
    tm = t[m]
    out[m] = np.exp(-1.0 / tm) / (tm * tm)
    return out


def _fn_smoothstep_down(v, _):
    a = _tail(1.0 - v)
    b = _tail(v)
    return a / (a + b)


def _fn_smoothstep_down_d(v, _):
    a = _tail(1.0 - v)
    b = _tail(v)
    da = -_tail_d(1.0 - v)
    db = _tail_d(v)
    return (da * b - a * db) / (a + b) ** 2


def _chi(v):
    """C-infinity cutoff: 1 on |v| <= 1, 0 on |v| >= 2."""
    return _fn_smoothstep_down(np.abs(v) - 1.0, ())


def _chi_d(v):
    return _fn_smoothstep_down_d(np.abs(v) - 1.0, ()) * np.sign(v)


def _fn_cutoff_exp(v, params):
    # chi(v/n) e^v; mask first so the vanished region never sees exp overflow
    (n,) = params
    out = np.zeros_like(v)
    m = np.abs(v) < 2.0 * n
    out[m] = _chi(v[m] / n) * np.exp(v[m])
    return out


def _fn_cutoff_exp_d(v, params):
    (n,) = params
    out = np.zeros_like(v)
    m = np.abs(v) < 2.0 * n
    vm = v[m]
    out[m] = (_chi_d(vm / n) / n + _chi(vm / n)) * np.exp(vm)
    return out


def _no_second(name):
    def raiser(u, params):
        raise NotDifferentiable(f"derivatives beyond those provided for {name!r}")
    return raiser


SCALAR_MAPS = {
    "recip": _MapDef(_fn_recip, lambda u, p: scale(-1.0, power(scalar_map("recip", u), 2))),
    "dasinh": _MapDef(_fn_dasinh, lambda u, p: scale(-1.0, mul(u, power(scalar_map("dasinh", u), 3)))),
    "atan": _MapDef(_fn_atan, lambda u, p: scalar_map("datan", u)),
    "datan": _MapDef(_fn_datan, lambda u, p: scale(-2.0, mul(u, power(scalar_map("datan", u), 2)))),
    "bump-dprofile": _MapDef(_fn_bump_dprofile, lambda u, p: scalar_map("bump-d2profile", u)),
    "bump-d2profile": _MapDef(_fn_bump_d2profile, _no_second("bump-d2profile")),
    "smoothstep-down": _MapDef(_fn_smoothstep_down, lambda u, p: scalar_map("smoothstep-down-d", u)),
    "smoothstep-down-d": _MapDef(_fn_smoothstep_down_d, _no_second("smoothstep-down-d")),
    "cutoff-exp": _MapDef(_fn_cutoff_exp, lambda u, p: scalar_map("cutoff-exp-d", u, p)),
    "cutoff-exp-d": _MapDef(_fn_cutoff_exp_d, _no_second("cutoff-exp-d")),
}


# ---------------------------------------------------------------------------
# symbolic differentiation

def derivative(f: Expr, j: int) -> Expr:
    """Exact expression tree of the partial derivative d f / d x_j."""
    if not 0 <= j < f.dim:
        raise DimensionMismatch(f"coordinate index {j} out of range for dim {f.dim}")
    return _d(f, j)


def gradient(f: Expr) -> tuple:
    return tuple(derivative(f, j) for j in range(f.dim))


@singledispatch
def _d(node, j):
    raise NotDifferentiable(f"node {type(node).__name__} has no symbolic derivative")


@_d.register(Const)
def _(node, j):
    return Const(node.dim, 0.0)


@_d.register(Coord)
def _(node, j):
    return Const(node.dim, 1.0 if node.index == j else 0.0)


@_d.register(AffineForm)
def _(node, j):
    return Const(node.dim, node.a[j])


@_d.register(Add)
def _(node, j):
    return add(*[_d(c, j) for c in node.children])


@_d.register(Mul)
def _(node, j):
    terms = []
    for i, c in enumerate(node.children):
        rest = node.children[:i] + node.children[i + 1:]
        terms.append(mul(_d(c, j), *rest))
    return add(*terms)


@_d.register(Scale)
def _(node, j):
    return scale(node.factor, _d(node.child, j))


@_d.register(Power)
def _(node, j):
    return mul(scale(node.exponent, power(node.child, node.exponent - 1)), _d(node.child, j))


@_d.register(Exp)
def _(node, j):
    return mul(node, _d(node.child, j))


@_d.register(Log)
def _(node, j):
    return mul(scalar_map("recip", node.child), _d(node.child, j))


@_d.register(Cosh)
def _(node, j):
    return mul(sinh_(node.child), _d(node.child, j))


@_d.register(Sinh)
def _(node, j):
    return mul(cosh_(node.child), _d(node.child, j))


@_d.register(Asinh)
def _(node, j):
    return mul(scalar_map("dasinh", node.child), _d(node.child, j))


@_d.register(Tanh)
def _(node, j):
    one = Const(node.dim, 1.0)
    return mul(add(one, scale(-1.0, power(tanh_(node.child), 2))), _d(node.child, j))


@_d.register(ComposeAffine)
def _(node, j):
    A = node.matrix
    terms = []
    for i in range(node.child.dim):
        if A[i][j] != 0.0:
            terms.append(scale(A[i][j], ComposeAffine(node.dim, _d(node.child, i), A, node.offset)))
    if not terms:
        return Const(node.dim, 0.0)
    return add(*terms)


@_d.register(Bump)
def _(node, j):
    r2 = node.radius ** 2
    parts = []
    for i, c in enumerate(node.center):
        e = [0.0] * node.dim
        e[i] = 1.0 / node.radius
        parts.append(power(affine(e, -c / node.radius), 2))
    s_expr = add(*parts)
    ds = affine([2.0 / r2 if i == j else 0.0 for i in range(node.dim)], -2.0 * node.center[j] / r2)
    return mul(scalar_map("bump-dprofile", s_expr), ds)


@_d.register(ScalarMap)
def _(node, j):
    outer = SCALAR_MAPS[node.name].outer(node.child, node.params)
    return mul(outer, _d(node.child, j))


# ---------------------------------------------------------------------------
# convenience constructions

def hermite_expr(k, dim=1, axis=0):
    """Probabilists' Hermite polynomial He_k in coordinate `axis`."""
    x = coordinate(axis, dim)
    prev, cur = constant(1.0, dim), x
    if k == 0:
        return prev
    for m in range(2, k + 1):
        prev, cur = cur, add(mul(x, cur), scale(-(m - 1), prev))
    return cur


def sum_sq(dim):
    """|x|^2 as an expression."""
    return add(*[power(coordinate(j, dim), 2) for j in range(dim)])


def cutoff_ball(R, dim):
    """C-infinity cutoff: 1 on |x| <= R-1, 0 on |x| >= R (requires R > 1)."""
    if R <= 1.0:
        raise DomainError("cutoff_ball needs R > 1 so the inner plateau is nonempty")
    lo = (R - 1.0) ** 2
    hi = R ** 2
    arg = scale(1.0 / (hi - lo), add(sum_sq(dim), constant(-lo, dim)))
    return scalar_map("smoothstep-down", arg)


# ---------------------------------------------------------------------------
# JSON expression-tree format (documented in the README schema section)

def to_json(f: Expr) -> dict:
    return _tj(f)


@singledispatch
def _tj(node):
    raise TypeError(f"cannot serialize {type(node).__name__}")


@_tj.register(Const)
def _(node):
    return {"node": "constant", "value": node.value}


@_tj.register(Coord)
def _(node):
    return {"node": "coordinate", "index": node.index}


@_tj.register(AffineForm)
def _(node):
    return {"node": "affine", "a": list(node.a), "b": node.b}


@_tj.register(Add)
def _(node):
    return {"node": "add", "children": [_tj(c) for c in node.children]}


@_tj.register(Mul)
def _(node):
    return {"node": "mul", "children": [_tj(c) for c in node.children]}


@_tj.register(Scale)
def _(node):
    return {"node": "scale", "factor": node.factor, "child": _tj(node.child)}


@_tj.register(Power)
def _(node):
    return {"node": "power", "exponent": node.exponent, "child": _tj(node.child)}


@_tj.register(Min)
def _(node):
    return {"node": "min", "children": [_tj(node.left), _tj(node.right)]}


@_tj.register(Max)
def _(node):
    return {"node": "max", "children": [_tj(node.left), _tj(node.right)]}


@_tj.register(ComposeAffine)
def _(node):
    return {
        "node": "compose-affine",
        "matrix": [list(row) for row in node.matrix],
        "offset": list(node.offset),
        "child": _tj(node.child),
    }


@_tj.register(Bump)
def _(node):
    return {"node": "bump", "center": list(node.center), "radius": node.radius}


@_tj.register(IndicatorBall)
def _(node):
    return {"node": "indicator-ball", "radius": node.radius}


@_tj.register(ScalarMap)
def _(node):
    return {"node": "scalar-map", "name": node.name, "params": list(node.params),
            "child": _tj(node.child)}


_UNARY_TAGS = {Abs: "abs", Exp: "exp", Log: "log", Cosh: "cosh", Sinh: "sinh",
               Asinh: "asinh", Tanh: "tanh"}
for _cls, _tag in _UNARY_TAGS.items():
    _tj.register(_cls, lambda node, _t=_tag: {"node": _t, "child": _tj(node.child)})

_UNARY_BUILDERS = {"abs": absval, "exp": exp_, "log": log_, "cosh": cosh_,
                   "sinh": sinh_, "asinh": asinh_, "tanh": tanh_}


def from_json(obj: dict, dim: int) -> Expr:
    """Rebuild an expression from its JSON tree; dim comes from the corpus entry."""
    tag = obj.get("node")
    if tag == "constant":
        return constant(obj["value"], dim)
    if tag == "coordinate":
        return coordinate(obj["index"], dim)
    if tag == "affine":
        e = affine(obj["a"], obj.get("b", 0.0))
        if e.dim != dim:
            raise DimensionMismatch("affine coefficients disagree with declared dimension")
        return e
    if tag == "add":
        return add(*[from_json(c, dim) for c in obj["children"]])
    if tag == "mul":
        return mul(*[from_json(c, dim) for c in obj["children"]])
    if tag == "scale":
        return scale(obj["factor"], from_json(obj["child"], dim))
    if tag == "power":
        return power(from_json(obj["child"], dim), obj["exponent"])
    if tag in _UNARY_BUILDERS:
        return _UNARY_BUILDERS[tag](from_json(obj["child"], dim))
    if tag == "min":
        a, b = obj["children"]
        return min_(from_json(a, dim), from_json(b, dim))
    if tag == "max":
        a, b = obj["children"]
        return max_(from_json(a, dim), from_json(b, dim))
    if tag == "compose-affine":
        inner_dim = len(obj["offset"])
        return compose_affine(from_json(obj["child"], inner_dim), obj["matrix"], obj["offset"])
    if tag == "bump":
        e = bump(obj["center"], obj["radius"])
        if e.dim != dim:
            raise DimensionMismatch("bump center disagrees with declared dimension")
        return e
    if tag == "indicator-ball":
        return indicator_ball(obj["radius"], dim)
    if tag == "scalar-map":
        return scalar_map(obj["name"], from_json(obj["child"], dim), obj.get("params", ()))
    raise DomainError(f"unknown expression node tag {tag!r}")
