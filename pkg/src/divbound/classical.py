"""Finite distributions, q-deformed functions and classical divergences.

All logarithms are natural. Divergences may legitimately return ``inf``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

NORMALIZATION_TOL = 1e-12

ArrayLike = Union[Sequence[float], np.ndarray]


class DimensionMismatch(ValueError):
    """Raised when two distributions live on alphabets of different size."""


@dataclass(frozen=True)
class Distribution:
    """Probability mass function over symbols ``0..n-1``.

    Construction validates the input: entries must be finite and
    nonnegative and sum to one within ``NORMALIZATION_TOL``. Inputs are
    never renormalized.
    """

    probs: np.ndarray

    def __init__(self, probs: ArrayLike):
        arr = np.array(probs, dtype=float).reshape(-1)
        if arr.size < 1:
            raise ValueError("distribution must have at least one entry")
        if not np.all(np.isfinite(arr)):
            raise ValueError("distribution entries must be finite")
        if np.any(arr < 0):
            raise ValueError("distribution entries must be >= 0")
        total = float(arr.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"distribution sum != 1 (sum={total!r})")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    def __len__(self) -> int:
        return self.probs.size

    def __iter__(self):
        return iter(self.probs.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.probs.shape == other.probs.shape and bool(
            np.all(self.probs == other.probs)
        )

    def __hash__(self) -> int:
        return hash(self.probs.tobytes())

    def __repr__(self) -> str:
        return f"Distribution({self.probs.tolist()!r})"

    def to_json(self) -> str:
        return json.dumps(self.probs.tolist())

    @classmethod
    def from_json(cls, text: str) -> "Distribution":
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("distribution JSON must be an array of numbers")
        return cls(data)

    def to_csv(self) -> str:
        return "".join(f"{p!r}\n" for p in self.probs.tolist())

    @classmethod
    def from_csv(cls, text: str) -> "Distribution":
        values = []
        for row in csv.reader(io.StringIO(text)):
            if not row or not row[0].strip():
                continue
            if len(row) != 1:
                raise ValueError("distribution CSV must have a single column")
            values.append(float(row[0]))
        return cls(values)


def as_distribution(value) -> Distribution:
    if isinstance(value, Distribution):
        return value
    return Distribution(value)


def _pair(P, Q) -> tuple[np.ndarray, np.ndarray]:
    P, Q = as_distribution(P), as_distribution(Q)
    if len(P) != len(Q):
        raise DimensionMismatch(f"support sizes differ: {len(P)} vs {len(Q)}")
    return P.probs, Q.probs


def _check_q(q: float) -> float:
    q = float(q)
    if not q > 0:
        raise ValueError(f"q must be > 0, got {q}")
    return q


# q-deformed elementary functions


def q_log(x, q: float):
    """q-logarithm ``(x**(1-q) - 1) / (1-q)``; natural log at ``q == 1``.

    Evaluated as ``expm1((1-q) log x) / (1-q)`` so that it stays accurate
    as ``q`` approaches 1.
    """
    q = _check_q(q)
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("q_log is defined for x > 0 only")
    out = _lnq(arr, q)
    return float(out) if np.ndim(out) == 0 else out


def _lnq(x, q: float):
    """Unchecked q-log; ``x == 0`` gives the limit (``-1/(1-q)`` or ``-inf``)."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        logx = np.log(x)
        if q == 1.0:
            return logx
        return np.expm1((1.0 - q) * logx) / (1.0 - q)


def q_exp(x, q: float):
    """q-exponential, the inverse of :func:`q_log`.

    Returns ``(1 + (1-q) x)**(1/(1-q))`` where the base is positive and
    exactly 0 elsewhere.
    """
    q = _check_q(q)
    arr = np.asarray(x, dtype=float)
    if q == 1.0:
        out = np.exp(arr)
    else:
        base = 1.0 + (1.0 - q) * arr
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            val = np.exp(np.log1p((1.0 - q) * arr) / (1.0 - q))
        out = np.where(base > 0, val, 0.0)
    return float(out) if np.ndim(out) == 0 else out


# divergences


@dataclass(frozen=True)
class DivergenceSpec:
    """Convex generator ``f`` with ``f(1) = 0`` defining a Csiszar f-divergence.

    ``value_at_zero`` is ``lim_{t->0+} f(t)`` and ``slope_at_infinity`` is
    ``lim_{t->inf} f(t)/t``; both may be ``inf``. They settle the
    zero-probability terms of the divergence sum. A spec with
    ``symmetric=True`` claims ``f(u) = u f(1/u) + c (u - 1)`` with
    ``c = symmetry_constant``.
    """

    generator: Callable[[np.ndarray], np.ndarray]
    derivative_at_one: float
    value_at_zero: float
    slope_at_infinity: float
    symmetry_constant: float = 0.0
    symmetric: bool = False
    name: str = field(default="f")

    def __post_init__(self):
        f1 = float(self.generator(np.array([1.0]))[0])
        if abs(f1) > 1e-12:
            raise ValueError(f"generator must vanish at 1, got f(1)={f1!r}")

    def __call__(self, t):
        return self.generator(np.asarray(t, dtype=float))

    def symmetry_residual(self, grid: Sequence[float] = (0.1, 0.5, 2.0, 10.0)) -> float:
        """Largest ``|f(u) - u f(1/u) - c (u-1)|`` over ``grid``."""
        u = np.asarray(grid, dtype=float)
        res = self(u) - u * self(1.0 / u) - self.symmetry_constant * (u - 1.0)
        return float(np.max(np.abs(res)))

    def check_symmetric(self, tol: float = 1e-9) -> None:
        if not self.symmetric:
            raise ValueError(f"divergence spec {self.name!r} is not declared symmetric")
        res = self.symmetry_residual()
        if res > tol:
            raise ValueError(
                f"divergence spec {self.name!r} fails the symmetry condition "
                f"(residual {res:.3g})"
            )


def tsallis_spec(q: float) -> DivergenceSpec:
    """Generator ``f(t) = -t ln_q(1/t)`` of the Tsallis divergence."""
    q = _check_q(q)

    def f(t):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(t > 0, -t * _lnq(1.0 / np.where(t > 0, t, 1.0), q), 0.0)

    slope = 1.0 / (1.0 - q) if q < 1 else math.inf
    return DivergenceSpec(f, 1.0, 0.0, slope, name=f"tsallis(q={q})")


def jst_spec(q: float) -> DivergenceSpec:
    """Generator of the Jensen-Shannon-Tsallis divergence.

    ``f(t) = -t ln_q((t+1)/(2t)) - ln_q((t+1)/2)``
    """
    q = _check_q(q)

    def f(t):
        safe = np.where(t > 0, t, 1.0)
        first = np.where(t > 0, -safe * _lnq((safe + 1.0) / (2.0 * safe), q), 0.0)
        return first - _lnq((t + 1.0) / 2.0, q)

    at_zero = -float(_lnq(0.5, q))
    return DivergenceSpec(f, 0.0, at_zero, at_zero, 0.0, True, name=f"jst(q={q})")


def jeffrey_tsallis_spec(q: float) -> DivergenceSpec:
    """Generator ``f(t) = (t**q - 1) ln_q(t) / 2`` of the Jeffrey-Tsallis divergence."""
    q = _check_q(q)

    def f(t):
        safe = np.where(t > 0, t, 1.0)
        val = (safe**q - 1.0) * _lnq(safe, q) / 2.0
        return np.where(t > 0, val, 0.5 / (1.0 - q) if q < 1 else math.inf)

    limit = 0.5 / (1.0 - q) if q < 1 else math.inf
    return DivergenceSpec(f, 0.0, limit, limit, 0.0, True, name=f"jeffrey(q={q})")


def jeffrey_spec() -> DivergenceSpec:
    """Classical Jeffrey generator ``f(t) = (t - 1) ln(t) / 2``."""

    def f(t):
        safe = np.where(t > 0, t, 1.0)
        return np.where(t > 0, 0.5 * (safe - 1.0) * np.log(safe), math.inf)

    return DivergenceSpec(f, 0.0, math.inf, math.inf, 0.0, True, name="jeffrey")


def f_divergence(P, Q, spec: DivergenceSpec) -> float:
    """``sum_x Q(x) f(P(x)/Q(x))`` with the limiting conventions at zeros.

    ``0 f(0/0) = 0``; a term with ``Q(x) = 0 < P(x)`` contributes
    ``P(x) * slope_at_infinity`` and one with ``P(x) = 0 < Q(x)``
    contributes ``Q(x) * value_at_zero``.
    """
    p, q = _pair(P, Q)
    both = (p > 0) & (q > 0)
    total = 0.0
    if np.any(both):
        total += float(np.sum(q[both] * spec(p[both] / q[both])))
    only_p = (p > 0) & (q == 0)
    if np.any(only_p):
        total += _times(float(p[only_p].sum()), spec.slope_at_infinity)
    only_q = (p == 0) & (q > 0)
    if np.any(only_q):
        total += _times(float(q[only_q].sum()), spec.value_at_zero)
    return total


def _times(weight: float, value: float) -> float:
    return 0.0 if weight == 0 else weight * value


def _tsallis_terms(p: np.ndarray, q_: np.ndarray, q: float) -> float:
    """Raw Tsallis divergence of aligned arrays (no validation)."""
    mask = p > 0
    p, q_ = p[mask], q_[mask]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = np.log(q_) - np.log(p)
        if q == 1.0:
            terms = -p * ratio
        else:
            terms = -p * np.expm1((1.0 - q) * ratio) / (1.0 - q)
    if np.any(np.isposinf(terms)):
        return math.inf
    return float(np.sum(terms))


def tsallis_divergence(P, Q, q: float) -> float:
    """Tsallis relative entropy ``sum (P - P**q Q**(1-q)) / (1-q)``; KL at ``q == 1``."""
    q = _check_q(q)
    p, q_ = _pair(P, Q)
    return _tsallis_terms(p, q_, q)


def kl_divergence(P, Q) -> float:
    return tsallis_divergence(P, Q, 1.0)


def jensen_shannon_tsallis(P, Q, q: float) -> float:
    """``D_q(P || M) + D_q(Q || M)`` with ``M`` the midpoint mixture."""
    q = _check_q(q)
    p, q_ = _pair(P, Q)
    m = 0.5 * (p + q_)
    return _tsallis_terms(p, m, q) + _tsallis_terms(q_, m, q)


def jeffrey_tsallis(P, Q, q: float) -> float:
    """Average of the two directed Tsallis divergences."""
    q = _check_q(q)
    p, q_ = _pair(P, Q)
    return 0.5 * (_tsallis_terms(p, q_, q) + _tsallis_terms(q_, p, q))


def total_variation(P, Q) -> float:
    p, q = _pair(P, Q)
    return 0.5 * float(np.sum(np.abs(p - q)))


def binary_reduction(P, Q) -> tuple[Distribution, Distribution]:
    """Coarse-grain both distributions onto ``A = {x : P(x) > Q(x)}`` and its complement."""
    p, q = _pair(P, Q)
    A = p > q
    pa, qa = float(p[A].sum()), float(q[A].sum())
    return Distribution([pa, 1.0 - pa]), Distribution([qa, 1.0 - qa])
