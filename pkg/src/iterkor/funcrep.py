"""Representations of continuous functions on [0, 1].

Three interchangeable forms: black-box evaluation rules, sampled grids with
piecewise-linear interpolation, and exact monomial-basis polynomials.  Linear
interpolation is deliberate: it preserves the range of the sampled values, so
grid round-trips through positive operators can never manufacture negative
values from nonnegative data.  The module also hosts sup-norm probing, the two
endpoint limit functionals, CSV round-trips, and the classical integration
helpers the operator families rely on.
"""

from __future__ import annotations

import csv
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import legendre as nleg
from numpy.polynomial import polynomial as npoly

DEFAULT_NODES = 513
DEFAULT_PROBES = 2049
MAX_POLY_DEGREE = 32

_DOMAIN_SLACK = 1e-12


def _as_domain_array(x) -> np.ndarray:
    """Coerce to float ndarray, rejecting points outside [0, 1] (tiny float
    noise beyond the endpoints is clipped rather than rejected)."""
    xs = np.asarray(x, dtype=float)
    if xs.size:
        lo, hi = float(xs.min()), float(xs.max())
        if lo < -_DOMAIN_SLACK or hi > 1.0 + _DOMAIN_SLACK:
            raise ValueError(f"evaluation point outside [0, 1]: min={lo}, max={hi}")
    return np.clip(xs, 0.0, 1.0)


def _match_shape(values: np.ndarray, x) -> float | np.ndarray:
    if np.ndim(x) == 0:
        return float(values)
    return values


class FuncRep:
    """Base interface: vectorized evaluation on [0, 1]."""

    label: str | None = None

    def eval(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return self.eval(x)


class Blackbox(FuncRep):
    """Wrap an arbitrary evaluation rule x -> f(x).

    The rule is probed once at construction; scalar-only callables are
    evaluated pointwise behind the array interface.
    """

    def __init__(self, fn: Callable, label: str | None = None):
        self._fn = fn
        self.label = label
        try:
            probe = np.asarray(fn(np.array([0.0, 0.5, 1.0])), dtype=float)
            self._vectorized = probe.shape == (3,)
        except Exception:
            self._vectorized = False

    def eval(self, x):
        xs = _as_domain_array(x)
        flat = np.atleast_1d(xs)
        if self._vectorized:
            vals = np.asarray(self._fn(flat), dtype=float)
        else:
            vals = np.array([float(self._fn(float(t))) for t in flat.ravel()])
            vals = vals.reshape(flat.shape)
        return _match_shape(vals.reshape(flat.shape), x)

    def __repr__(self):
        return f"Blackbox({self.label or self._fn!r})"


class Polynomial(FuncRep):
    """Exact polynomial in the monomial basis, coefficients ascending."""

    def __init__(self, coeffs, label: str | None = None,
                 max_degree: int | None = MAX_POLY_DEGREE):
        c = np.atleast_1d(np.asarray(coeffs, dtype=float)).ravel()
        c = npoly.polytrim(c, tol=0.0)
        if max_degree is not None and len(c) - 1 > max_degree:
            raise ValueError(f"polynomial degree {len(c) - 1} exceeds cap {max_degree}")
        c.flags.writeable = False
        self.coeffs = c
        self.label = label

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def eval(self, x):
        xs = _as_domain_array(x)
        return _match_shape(npoly.polyval(xs, self.coeffs), x)

    def antiderivative(self) -> "Polynomial":
        return Polynomial(npoly.polyint(self.coeffs), max_degree=None)

    def definite_integral(self, a: float, b: float) -> float:
        anti = npoly.polyint(self.coeffs)
        return float(npoly.polyval(b, anti) - npoly.polyval(a, anti))

    def __add__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(npoly.polyadd(self.coeffs, other.coeffs), max_degree=None)
        return Polynomial(npoly.polyadd(self.coeffs, [float(other)]), max_degree=None)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(npoly.polysub(self.coeffs, other.coeffs), max_degree=None)
        return Polynomial(npoly.polysub(self.coeffs, [float(other)]), max_degree=None)

    def __mul__(self, scalar):
        return Polynomial(self.coeffs * float(scalar), max_degree=None)

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(-self.coeffs, max_degree=None)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"


class GridFunction(FuncRep):
    """Sampled values on a strictly increasing mesh spanning [0, 1]; points
    in between are filled in by linear interpolation."""

    def __init__(self, nodes, values, label: str | None = None):
        nodes = np.asarray(nodes, dtype=float).ravel()
        values = np.asarray(values, dtype=float).ravel()
        if nodes.size < 2 or nodes.size != values.size:
            raise ValueError("need matching node/value vectors with at least 2 entries")
        if np.any(np.diff(nodes) <= 0.0):
            raise ValueError("grid nodes must be strictly increasing")
        if abs(nodes[0]) > _DOMAIN_SLACK or abs(nodes[-1] - 1.0) > _DOMAIN_SLACK:
            raise ValueError("grid must span [0, 1] exactly")
        nodes = nodes.copy()
        nodes[0], nodes[-1] = 0.0, 1.0
        nodes.flags.writeable = False
        values = values.copy()
        values.flags.writeable = False
        self.nodes = nodes
        self.values = values
        self.label = label

    def eval(self, x):
        xs = _as_domain_array(x)
        return _match_shape(np.interp(xs, self.nodes, self.values), x)

    def cumulative_at(self, x):
        """Exact integral of the interpolant from 0 to each query point."""
        xs = _as_domain_array(x)
        flat = np.atleast_1d(xs)
        nodes, vals = self.nodes, self.values
        cell = np.clip(np.searchsorted(nodes, flat, side="right") - 1, 0, nodes.size - 2)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(nodes))])
        x0 = nodes[cell]
        v0 = vals[cell]
        slope = (vals[cell + 1] - v0) / (nodes[cell + 1] - x0)
        dt = flat - x0
        out = cum[cell] + v0 * dt + 0.5 * slope * dt * dt
        return _match_shape(out.reshape(flat.shape), x)

    def __repr__(self):
        return f"GridFunction(<{self.nodes.size} nodes>, label={self.label!r})"


def monomial(i: int) -> Polynomial:
    """The test monomial x^i."""
    if i < 0:
        raise ValueError("monomial exponent must be nonnegative")
    return Polynomial([0.0] * i + [1.0], label=f"e{i}")


def as_funcrep(f, label: str | None = None) -> FuncRep:
    if isinstance(f, FuncRep):
        return f
    if callable(f):
        return Blackbox(f, label=label)
    raise TypeError(f"cannot interpret {type(f).__name__} as a function on [0, 1]")


def uniform_nodes(count: int) -> np.ndarray:
    if count < 2:
        raise ValueError("need at least 2 nodes")
    return np.linspace(0.0, 1.0, count)


def sample(f: FuncRep, node_count: int) -> GridFunction:
    """Sample onto a uniform grid with both endpoints included."""
    nodes = uniform_nodes(node_count)
    g = as_funcrep(f)
    return GridFunction(nodes, np.atleast_1d(g.eval(nodes)), label=g.label)


def sup_distance(f: FuncRep, g: FuncRep, probe_count: int = DEFAULT_PROBES) -> float:
    """Max of |f - g| over a uniform probe mesh: a lower bound on the true
    sup-norm that converges as the mesh is refined."""
    xs = uniform_nodes(probe_count)
    fv = np.atleast_1d(as_funcrep(f).eval(xs))
    gv = np.atleast_1d(as_funcrep(g).eval(xs))
    return float(np.max(np.abs(fv - gv)))


def sup_norm(f: FuncRep, probe_count: int = DEFAULT_PROBES) -> float:
    xs = uniform_nodes(probe_count)
    return float(np.max(np.abs(np.atleast_1d(as_funcrep(f).eval(xs)))))


class LimitFunctional(Enum):
    """The two limits the iterated families contract to: the endpoint
    interpolant (1-x) f(0) + x f(1), or evaluation at zero."""

    P = "P"
    EVAL_AT_ZERO = "eval_at_zero"


def apply_limit(kind: LimitFunctional, f: FuncRep) -> Polynomial:
    f = as_funcrep(f)
    f0 = float(f.eval(0.0))
    if kind is LimitFunctional.EVAL_AT_ZERO:
        return Polynomial([f0])
    f1 = float(f.eval(1.0))
    return Polynomial([f0, f1 - f0])


# ---------------------------------------------------------------------------
# CSV round-trip (two columns, header row, 17 significant digits)
# ---------------------------------------------------------------------------

def to_csv(f: FuncRep, path, node_count: int = DEFAULT_NODES) -> None:
    g = f if isinstance(f, GridFunction) else sample(as_funcrep(f), node_count)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "f(x)"])
        for x, v in zip(g.nodes, g.values):
            writer.writerow([format(x, ".17g"), format(v, ".17g")])


def grid_from_csv(path) -> GridFunction:
    nodes, values = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)  # header
        for row in reader:
            if not row:
                continue
            nodes.append(float(row[0]))
            values.append(float(row[1]))
    return GridFunction(nodes, values)


# ---------------------------------------------------------------------------
# Classical integration
# ---------------------------------------------------------------------------

def _simpson_batch(fn: Callable, a, b, tol, max_depth: int = 48) -> np.ndarray:
    """Adaptive Simpson quadrature over a batch of intervals, vectorized over
    the batch.  Each interval carries its own absolute tolerance; accepted
    pieces get the usual delta/15 Richardson correction."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    eps = np.broadcast_to(np.asarray(tol, dtype=float), a.shape).copy()
    out = np.zeros(a.shape)
    idx = np.arange(a.size)
    m = 0.5 * (a + b)
    fa = np.atleast_1d(fn(a))
    fm = np.atleast_1d(fn(m))
    fb = np.atleast_1d(fn(b))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    for depth in range(max_depth):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = np.atleast_1d(fn(lm))
        frm = np.atleast_1d(fn(rm))
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        done = np.abs(delta) <= 15.0 * eps
        if depth == max_depth - 1:
            done = np.ones_like(done, dtype=bool)
        np.add.at(out, idx[done], (left + right + delta / 15.0)[done])
        keep = ~done
        if not keep.any():
            break
        a = np.concatenate([a[keep], m[keep]])
        b = np.concatenate([m[keep], b[keep]])
        fa = np.concatenate([fa[keep], fm[keep]])
        fb = np.concatenate([fm[keep], fb[keep]])
        whole = np.concatenate([left[keep], right[keep]])
        m = np.concatenate([lm[keep], rm[keep]])
        fm = np.concatenate([flm[keep], frm[keep]])
        half = 0.5 * eps[keep]
        eps = np.concatenate([half, half])
        idx = np.concatenate([idx[keep], idx[keep]])
    return out


def adaptive_simpson(fn: Callable, a: float, b: float, tol: float = 1e-12) -> float:
    return float(_simpson_batch(fn, [a], [b], [tol])[0])


def adaptive_simpson_segments(fn: Callable, edges, tol: float = 1e-12) -> np.ndarray:
    """Per-segment integrals between consecutive edges; the tolerance is
    distributed proportionally to segment length."""
    edges = np.asarray(edges, dtype=float)
    lengths = np.diff(edges)
    span = float(lengths.sum()) or 1.0
    tols = np.maximum(tol * lengths / span, 1e-300)
    return _simpson_batch(fn, edges[:-1], edges[1:], tols)


def integral(f, a: float = 0.0, b: float = 1.0, tol: float = 1e-12) -> float:
    """Classical integral of f over [a, b] in [0, 1].

    Exact for polynomials (antiderivative) and for grid functions (closed-form
    integral of the interpolant); adaptive Simpson for black boxes.
    """
    f = as_funcrep(f)
    if isinstance(f, Polynomial):
        return f.definite_integral(a, b)
    if isinstance(f, GridFunction):
        return float(f.cumulative_at(b) - f.cumulative_at(a))
    return adaptive_simpson(f.eval, a, b, tol)


def weighted_integral(f, w_coeffs: Sequence[float], tol: float = 1e-12) -> float:
    """Integral of w(t) f(t) over [0, 1] for a polynomial weight w.

    Polynomial f is folded into w exactly; grid functions are integrated cell
    by cell with a Gauss rule of sufficient order for the piecewise-polynomial
    product; black boxes fall back to adaptive Simpson.
    """
    f = as_funcrep(f)
    w = np.asarray(w_coeffs, dtype=float)
    if isinstance(f, Polynomial):
        prod = npoly.polymul(w, f.coeffs)
        anti = npoly.polyint(prod)
        return float(npoly.polyval(1.0, anti) - npoly.polyval(0.0, anti))
    if isinstance(f, GridFunction):
        degree = (w.size - 1) + 1
        npts = max(2, (degree + 3) // 2)
        gx, gw = nleg.leggauss(npts)
        mid = 0.5 * (f.nodes[1:] + f.nodes[:-1])
        half = 0.5 * np.diff(f.nodes)
        pts = mid[:, None] + half[:, None] * gx[None, :]
        integrand = npoly.polyval(pts, w) * np.interp(pts, f.nodes, f.values)
        return float(np.sum(integrand * gw[None, :] * half[:, None]))
    return adaptive_simpson(lambda t: npoly.polyval(t, w) * f.eval(t), 0.0, 1.0, tol)
