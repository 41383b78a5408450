"""q-calculus primitives shared by the q-parameterized operator families.

Provides q-integers, q-factorials, q-binomial coefficients, the finite
product prod_{s<count} (1 - q^s x), and the Jackson integral on [0, 1] with a
rigorous geometric tail bound.  Everything is restricted to 0 < q <= 1; at
q = 1 the definitions degenerate to their classical counterparts.
"""

from __future__ import annotations

import math

import numpy as np

from . import funcrep

DEFAULT_CACHE_LEN = 128
MAX_JACKSON_TERMS = 10**6


class NonConvergenceError(RuntimeError):
    """A truncated series failed to reach its tolerance within the term cap."""


class QContext:
    """Deformation parameter q in (0, 1] with a cache of q-integers.

    The cache is built by the recurrence cache[k] = cache[k-1] + q^(k-1), so
    cache[k] = k exactly at q = 1 and equals (1 - q^k)/(1 - q) otherwise.
    Instances are immutable and safe to share across threads.
    """

    __slots__ = ("q", "_cache")

    def __init__(self, q: float, cache_len: int = DEFAULT_CACHE_LEN):
        q = float(q)
        if not 0.0 < q <= 1.0:
            raise ValueError(f"q must lie in (0, 1], got {q}")
        if cache_len < 2:
            raise ValueError("cache_len must be at least 2")
        self.q = q
        cache = np.empty(cache_len)
        cache[0] = 0.0
        power = 1.0
        for k in range(1, cache_len):
            cache[k] = cache[k - 1] + power
            power *= q
        cache.flags.writeable = False
        self._cache = cache

    @property
    def cache(self) -> np.ndarray:
        return self._cache

    @property
    def cache_len(self) -> int:
        return self._cache.size

    def __repr__(self):
        return f"QContext(q={self.q!r})"


def q_integer(ctx: QContext, n: int) -> float:
    """[n]_q = (1 - q^n)/(1 - q), with [n]_1 = n and [0]_q = 0."""
    if n < 0 or n != int(n):
        raise ValueError(f"q_integer needs a nonnegative integer, got {n}")
    n = int(n)
    if n < ctx.cache_len:
        return float(ctx.cache[n])
    if ctx.q == 1.0:
        return float(n)
    return (1.0 - ctx.q**n) / (1.0 - ctx.q)


def q_number(ctx: QContext, t: float) -> float:
    """[t]_q extended to real t >= 0 (used for the Stancu shift parameters)."""
    t = float(t)
    if t < 0.0:
        raise ValueError(f"q_number needs a nonnegative argument, got {t}")
    if ctx.q == 1.0:
        return t
    return (1.0 - ctx.q**t) / (1.0 - ctx.q)


def q_integer_array(ctx: QContext, ns) -> np.ndarray:
    ns = np.asarray(ns, dtype=float)
    if ctx.q == 1.0:
        return ns.copy()
    return (1.0 - ctx.q**ns) / (1.0 - ctx.q)


def q_factorial(ctx: QContext, n: int) -> float:
    """[n]_q! = [1]_q [2]_q ... [n]_q, empty product for n = 0."""
    if n < 0 or n != int(n):
        raise ValueError(f"q_factorial needs a nonnegative integer, got {n}")
    acc = 1.0
    for k in range(1, int(n) + 1):
        acc *= q_integer(ctx, k)
    if math.isinf(acc):
        raise OverflowError(f"q_factorial overflows at n={n} (q={ctx.q})")
    return acc


def q_binomial(ctx: QContext, n: int, k: int) -> float:
    """Gaussian binomial coefficient, computed as a product of ratios
    [n-k+i]_q / [i]_q to avoid factorial overflow."""
    if n < 0 or k < 0 or n != int(n) or k != int(k):
        raise ValueError("q_binomial needs nonnegative integers")
    n, k = int(n), int(k)
    if k > n:
        raise ValueError(f"q_binomial requires k <= n, got n={n}, k={k}")
    k = min(k, n - k)
    acc = 1.0
    for i in range(1, k + 1):
        acc *= q_integer(ctx, n - k + i) / q_integer(ctx, i)
    if math.isinf(acc):
        raise OverflowError(f"q_binomial overflows at n={n}, k={k}")
    return acc


def q_pochhammer_1mx(ctx: QContext, x: float, count: int) -> float:
    """prod_{s=0}^{count-1} (1 - q^s x); equals (1 - x)^count at q = 1."""
    x = float(x)
    if not -funcrep._DOMAIN_SLACK <= x <= 1.0 + funcrep._DOMAIN_SLACK:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    acc = 1.0
    power = 1.0
    for _ in range(int(count)):
        acc *= 1.0 - power * x
        power *= ctx.q
    return acc


def q_pochhammer_1mx_array(ctx: QContext, xs, count: int) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    acc = np.ones_like(xs)
    power = 1.0
    for _ in range(int(count)):
        acc *= 1.0 - power * xs
        power *= ctx.q
    return acc


def jackson_integral(ctx: QContext, f, tol: float = 1e-12,
                     max_terms: int = MAX_JACKSON_TERMS) -> float:
    """Jackson integral of f over [0, 1]: (1 - q) sum_j q^j f(q^j).

    The series is truncated once the remaining geometric weight q^J times the
    largest sampled |f| drops below tol; that weight is exactly the neglected
    mass, so the bound is rigorous whenever the sampled maximum is.  At q = 1
    this is the classical integral and is delegated to quadrature.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    f = funcrep.as_funcrep(f)
    if ctx.q == 1.0:
        return funcrep.integral(f, 0.0, 1.0, tol=tol)
    q = ctx.q
    total = 0.0
    fmax = 0.0
    j = 0
    block = 256
    while j < max_terms:
        js = np.arange(j, min(j + block, max_terms))
        t_nodes = q**js.astype(float)
        fv = np.atleast_1d(f.eval(t_nodes))
        total += (1.0 - q) * float(np.dot(t_nodes, fv))
        fmax = max(fmax, float(np.max(np.abs(fv))))
        j = int(js[-1]) + 1
        if (q**j) * fmax < tol:
            return total
    raise NonConvergenceError(
        f"Jackson integral did not reach tol={tol} within {max_terms} terms (q={q})")
