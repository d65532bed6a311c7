"""Codeword-length bookkeeping and q-deformed redundancy bounds.

Two bound variants are supported. ``THEOREM1`` normalizes ``d**-l`` by the
Kraft sum and uses the ``c**(q-1)``-weighted average length; ``PROP_A``
normalizes ``exp_q(-l ln d)`` by its own sum and uses ``sum p**q l``. At
``q = 1`` the two coincide.
"""

from __future__ import annotations

import csv
import enum
import heapq
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .classical import Distribution, _check_q, _lnq, as_distribution, q_exp
from .report import DEFAULT_TOL, BoundReport, check, digest

KRAFT_TOL = 1e-12


class HypothesisError(ValueError):
    """An input violates a hypothesis the requested bound depends on."""


class BoundVariant(enum.Enum):
    THEOREM1 = "THEOREM1"
    PROP_A = "PROP_A"


@dataclass(frozen=True)
class Source:
    """Memoryless source: symbol probabilities, all strictly positive."""

    dist: Distribution
    labels: Optional[tuple[str, ...]] = None

    def __init__(self, dist, labels: Optional[Sequence[str]] = None):
        dist = as_distribution(dist)
        if np.any(dist.probs <= 0):
            raise ValueError("source probabilities must all be > 0")
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != len(dist):
                raise ValueError("labels must align with the probabilities")
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "labels", labels)

    @property
    def probs(self) -> np.ndarray:
        return self.dist.probs

    def __len__(self) -> int:
        return len(self.dist)

    @classmethod
    def from_csv(cls, text: str) -> "Source":
        labels, probs = [], []
        for row in csv.reader(io.StringIO(text)):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 2:
                raise ValueError("source CSV rows must be 'symbol,probability'")
            try:
                p = float(row[1])
            except ValueError:
                if not probs:  # header row
                    continue
                raise
            labels.append(row[0].strip())
            probs.append(p)
        return cls(probs, labels)

    @classmethod
    def from_json(cls, text: str) -> "Source":
        data = json.loads(text)
        if isinstance(data, list):
            return cls(data)
        return cls(data["probs"], data.get("labels"))


@dataclass(frozen=True)
class Code:
    """Codeword-length profile ``l(u) >= 1`` over a ``d``-letter code alphabet."""

    lengths: tuple[int, ...]
    d: int = 2

    def __init__(self, lengths: Sequence[int], d: int = 2, uniquely_decodable: bool = False):
        ls = tuple(int(x) for x in lengths)
        if any(x != y for x, y in zip(ls, lengths)):
            raise ValueError("codeword lengths must be integers")
        if not ls or min(ls) < 1:
            raise ValueError("codeword lengths must all be >= 1")
        if int(d) != d or d < 2:
            raise ValueError("code alphabet size d must be an integer >= 2")
        object.__setattr__(self, "lengths", ls)
        object.__setattr__(self, "d", int(d))
        if uniquely_decodable and kraft_sum(self) > 1 + KRAFT_TOL:
            raise HypothesisError("Kraft-McMillan sum exceeds 1")

    def __len__(self) -> int:
        return len(self.lengths)

    def to_json(self) -> str:
        return json.dumps({"d": self.d, "lengths": list(self.lengths)})

    @classmethod
    def from_json(cls, text: str) -> "Code":
        data = json.loads(text)
        return cls(data["lengths"], data["d"])


def _aligned(source: Source, code: Code) -> tuple[np.ndarray, np.ndarray]:
    if len(source) != len(code):
        raise ValueError(f"source has {len(source)} symbols but code has {len(code)} lengths")
    return source.probs, np.asarray(code.lengths, dtype=float)


def kraft_sum_exact(code: Code) -> Fraction:
    return sum((Fraction(1, code.d**l) for l in code.lengths), Fraction(0))


def kraft_sum(code: Code) -> float:
    """``sum d**-l(u)``, rounded once from the exact rational value."""
    return float(kraft_sum_exact(code))


def _qexp_weights(code: Code, q: float) -> np.ndarray:
    ls = np.asarray(code.lengths, dtype=float)
    return np.asarray(q_exp(-ls * math.log(code.d), q), dtype=float)


def kraft_sum_q(code: Code, q: float) -> float:
    """``sum exp_q(-l(u) ln d)``; equals :func:`kraft_sum` at ``q = 1``."""
    q = _check_q(q)
    if q == 1.0:
        return kraft_sum(code)
    return float(_qexp_weights(code, q).sum())


def induced_distribution(code: Code, q: float = 1.0, variant: BoundVariant = BoundVariant.THEOREM1) -> Distribution:
    q = _check_q(q)
    variant = BoundVariant(variant)
    if variant is BoundVariant.THEOREM1 or q == 1.0:
        c = kraft_sum_exact(code)
        return Distribution([float(Fraction(1, code.d**l) / c) for l in code.lengths])
    w = _qexp_weights(code, q)
    total = w.sum()
    if not total > 0:
        raise HypothesisError("q-Kraft sum is zero; every codeword hit the q-exponential cutoff")
    return Distribution(w / total)


def tsallis_entropy_base_d(source, d: int, q: float) -> float:
    """``-(1/ln d) sum p**q ln_q p``; Shannon entropy in base ``d`` at ``q = 1``."""
    q = _check_q(q)
    if d < 2:
        raise ValueError("d must be >= 2")
    p = source.probs if isinstance(source, Source) else as_distribution(source).probs
    p = p[p > 0]
    return float(-np.sum(p**q * _lnq(p, q)) / math.log(d))


def avg_codelength_q(source: Source, code: Code, q: float, variant: BoundVariant = BoundVariant.THEOREM1) -> float:
    q = _check_q(q)
    variant = BoundVariant(variant)
    p, ls = _aligned(source, code)
    if q == 1.0:
        return float(np.sum(p * ls))
    if variant is BoundVariant.PROP_A:
        return float(np.sum(p**q * ls))
    c = kraft_sum(code)
    lnd = math.log(code.d)
    return float(-(c ** (q - 1.0)) / lnd * np.sum(p**q * _lnq(np.exp(-ls * lnd), q)))


def delta_dq(source: Source, code: Code, q: float, variant: BoundVariant = BoundVariant.THEOREM1) -> float:
    """q-redundancy: average length minus base-``d`` Tsallis entropy."""
    return avg_codelength_q(source, code, q, variant) - tsallis_entropy_base_d(source, code.d, q)


def _check_bound_hypotheses(code: Code, q: float, variant: BoundVariant) -> None:
    if q < 1.0:
        raise HypothesisError(f"redundancy bound requires q >= 1, got {q}")
    if variant is BoundVariant.THEOREM1:
        if kraft_sum(code) > 1.0 + KRAFT_TOL:
            raise HypothesisError("Kraft-McMillan sum exceeds 1")
    elif kraft_sum_q(code, q) > 1.0 + KRAFT_TOL:
        raise HypothesisError(f"q-Kraft sum exceeds 1 at q={q}")


def redundancy_bound(source: Source, code: Code, q: float, variant: BoundVariant = BoundVariant.THEOREM1) -> float:
    """``min(1, sqrt(delta_dq * ln d / 2))``, an upper bound on ``d_TV(p, Q)``."""
    q = _check_q(q)
    variant = BoundVariant(variant)
    _check_bound_hypotheses(code, q, variant)
    delta = delta_dq(source, code, q, variant)
    # delta >= 0 under the hypotheses; clamp rounding noise only
    return min(1.0, math.sqrt(max(delta, 0.0) * math.log(code.d) / 2.0))


def l1_deviation(source: Source, code: Code, q: float = 1.0, variant: BoundVariant = BoundVariant.THEOREM1) -> float:
    """``sum |p(u) - Q(u)|`` against the variant's induced distribution."""
    p, _ = _aligned(source, code)
    return float(np.sum(np.abs(p - induced_distribution(code, q, variant).probs)))


def _length_for(p: float, d: int) -> int:
    frac = Fraction(p).limit_denominator(10**6)
    if float(frac) == p:
        # smallest l with d**-l <= p, in exact integer arithmetic
        l, power = 0, 1
        while power * frac.numerator < frac.denominator:
            l += 1
            power *= d
        return max(l, 1)
    return max(1, math.ceil(-math.log(p) / math.log(d) - 1e-12))


def shannon_fano_lengths(source: Source, d: int = 2) -> Code:
    """Lengths ``ceil(-log_d p(u))``, at least 1 per symbol."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return Code([_length_for(float(p), d) for p in source.probs], d)


def huffman_lengths(source: Source) -> Code:
    """Binary Huffman codeword lengths.

    Ties between equal weights go to the node holding the smallest symbol
    index, then to the earliest-created node.
    """
    p = source.probs
    n = len(p)
    if n < 2:
        raise ValueError("Huffman coding needs at least 2 symbols")
    heap = [(float(w), i, i, (i,)) for i, w in enumerate(p)]
    heapq.heapify(heap)
    depth = [0] * n
    created = n
    while len(heap) > 1:
        w1, m1, _, s1 = heapq.heappop(heap)
        w2, m2, _, s2 = heapq.heappop(heap)
        for s in s1 + s2:
            depth[s] += 1
        heapq.heappush(heap, (w1 + w2, min(m1, m2), created, s1 + s2))
        created += 1
    return Code(depth, 2)


def prop3_check(source: Source, code: Code, q_grid: Sequence[float], tol: float = DEFAULT_TOL) -> list[BoundReport]:
    """For complete codes, check that the q = 1 redundancy never exceeds the q-redundancy."""
    if kraft_sum_exact(code) != 1:
        raise HypothesisError(f"Kraft sum must equal 1, got {kraft_sum_exact(code)}")
    base = delta_dq(source, code, 1.0)
    tag = digest(source.probs, np.asarray(code.lengths))
    out = []
    for q in q_grid:
        if q < 1:
            raise HypothesisError(f"q must be >= 1, got {q}")
        out.append(check(f"delta_q_ge_delta_1[q={q:g}]", delta_dq(source, code, q), base, tol, tag))
    return out


def verify_coding_bounds(
    source: Source, code: Code, q: float, variant: BoundVariant = BoundVariant.THEOREM1, tol: float = DEFAULT_TOL
) -> list[BoundReport]:
    """Report ``bound >= d_TV(p, Q)`` for one variant."""
    variant = BoundVariant(variant)
    bound = redundancy_bound(source, code, q, variant)
    half_l1 = 0.5 * l1_deviation(source, code, q, variant)
    tag = digest(source.probs, np.asarray(code.lengths), np.array([q, code.d]))
    return [check(f"redundancy_bound[{variant.value},q={q:g}]", bound, half_l1, tol, tag)]


def coding_table(source: Source, code: Code, q_grid: Sequence[float], variant: BoundVariant = BoundVariant.THEOREM1) -> list[dict]:
    """Rows of ``(q, n_q, H_dq, delta_dq, bound, l1_deviation, variant)``."""
    variant = BoundVariant(variant)
    rows = []
    for q in q_grid:
        try:
            bound = redundancy_bound(source, code, q, variant)
        except HypothesisError:
            bound = math.nan
        try:
            dev = l1_deviation(source, code, q, variant)
        except HypothesisError:
            dev = math.nan
        rows.append({
            "q": q,
            "n_q": avg_codelength_q(source, code, q, variant),
            "H_dq": tsallis_entropy_base_d(source, code.d, q),
            "delta_dq": delta_dq(source, code, q, variant),
            "bound": bound,
            "l1_deviation": dev,
            "variant": variant.value,
        })
    return rows
