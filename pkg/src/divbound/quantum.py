"""Dense density-matrix divergences and their trace-distance bounds.

Every matrix function goes through a Hermitian eigendecomposition.
Eigenvalues below ``EIG_CUTOFF`` are set to zero and treated as lying
outside the support.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .classical import Distribution, DivergenceSpec, jeffrey_tsallis
from .report import DEFAULT_TOL, BoundReport, check, digest

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-12
EIG_CUTOFF = 1e-12
GOLDEN_WIDTH = 1e-10


class RankError(ValueError):
    """A rank-deficient state was passed where full rank is required."""


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def of(cls, matrix: np.ndarray) -> "SpectralDecomposition":
        w, v = np.linalg.eigh(matrix)
        return cls(w[::-1].copy(), v[:, ::-1].copy())

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def apply(self, func) -> np.ndarray:
        """``V func(Lambda) V*``."""
        v = self.eigenvectors
        return (v * func(self.eigenvalues)) @ v.conj().T


class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace complex matrix."""

    __slots__ = ("matrix", "_spectrum")

    def __init__(self, entries):
        a = np.array(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"density matrix must be square, got shape {a.shape}")
        if np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix must be Hermitian")
        a = 0.5 * (a + a.conj().T)
        if abs(np.trace(a).real - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix must have unit trace (trace={np.trace(a).real!r})")
        spec = SpectralDecomposition.of(a)
        if spec.eigenvalues[-1] < -PSD_TOL:
            raise ValueError(
                f"density matrix must be positive semidefinite (min eigenvalue {spec.eigenvalues[-1]:.3g})"
            )
        a.setflags(write=False)
        self.matrix = a
        lam = np.where(spec.eigenvalues < EIG_CUTOFF, 0.0, spec.eigenvalues)
        self._spectrum = SpectralDecomposition(lam, spec.eigenvectors)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def spectrum(self) -> SpectralDecomposition:
        return self._spectrum

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self._spectrum.eigenvalues))

    def sqrt(self) -> np.ndarray:
        return self._spectrum.apply(np.sqrt)

    def __repr__(self) -> str:
        return f"DensityMatrix(n={self.n}, rank={self.rank})"

    @classmethod
    def diagonal(cls, probs) -> "DensityMatrix":
        return cls(np.diag(np.asarray(probs, dtype=float)))

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "re": self.matrix.real.tolist(), "im": self.matrix.imag.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "DensityMatrix":
        data = json.loads(text)
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != (data["n"], data["n"]) or im.shape != re.shape:
            raise ValueError("density matrix JSON: 're'/'im' must be n x n arrays")
        return cls(re + 1j * im)


def _same_dim(rho: DensityMatrix, sigma: DensityMatrix) -> None:
    if rho.n != sigma.n:
        raise ValueError(f"dimension mismatch: {rho.n} vs {sigma.n}")


def _overlaps(rho: DensityMatrix, sigma: DensityMatrix) -> np.ndarray:
    """``W[i, j] = |<r_i|s_j>|**2`` for eigenvectors of rho (rows) and sigma (columns)."""
    return np.abs(rho.spectrum.eigenvectors.conj().T @ sigma.spectrum.eigenvectors) ** 2


def random_density_matrix(n: int, rank: int | None = None, seed: int = 0) -> DensityMatrix:
    """``G G* / Tr`` for a complex Gaussian ``n x rank`` factor ``G``."""
    rank = n if rank is None else rank
    if not 1 <= rank <= n:
        raise ValueError(f"rank must satisfy 1 <= rank <= n, got rank={rank}, n={n}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    a = g @ g.conj().T
    a = a / np.trace(a).real
    return DensityMatrix(0.5 * (a + a.conj().T))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    _same_dim(rho, sigma)
    w = np.linalg.eigvalsh(rho.matrix - sigma.matrix)
    return min(1.0, 0.5 * float(np.sum(np.abs(w))))


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """``Tr |rho^(1/2) sigma^(1/2)|``, the sum of singular values of the product."""
    _same_dim(rho, sigma)
    s = np.linalg.svd(rho.sqrt() @ sigma.sqrt(), compute_uv=False)
    return min(1.0, float(np.sum(s)))


def sqrt_overlap(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """``Tr[rho^(1/2) sigma^(1/2)]`` (real and nonnegative)."""
    _same_dim(rho, sigma)
    return float(np.real(np.trace(rho.sqrt() @ sigma.sqrt())))


def _chernoff_objective(rho: DensityMatrix, sigma: DensityMatrix):
    r, s = rho.spectrum.eigenvalues, sigma.spectrum.eigenvalues
    ri, sj = r > 0, s > 0
    W = _overlaps(rho, sigma)[np.ix_(ri, sj)]
    log_r, log_s = np.log(r[ri]), np.log(s[sj])

    def objective(t: float) -> float:
        # zero eigenvalues drop out: rho^0 is the support projector
        return float(np.exp(t * log_r) @ W @ np.exp((1.0 - t) * log_s))

    return objective


def _golden_section(func, lo: float, hi: float, width: float) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = func(c), func(d)
    while b - a > width:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = func(d)
    x = 0.5 * (a + b)
    return x, func(x)


def chernoff_minimizer(rho: DensityMatrix, sigma: DensityMatrix) -> tuple[float, float]:
    """Return ``(s*, min_s Tr[rho^s sigma^(1-s)])`` over ``s`` in ``[0, 1]``."""
    _same_dim(rho, sigma)
    objective = _chernoff_objective(rho, sigma)
    best = _golden_section(objective, 0.0, 1.0, GOLDEN_WIDTH)
    for s in (0.0, 1.0):
        val = objective(s)
        if val < best[1]:
            best = (s, val)
    return best


def chernoff_information(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """``-log min_s Tr[rho^s sigma^(1-s)]``; ``inf`` for orthogonal supports."""
    _, value = chernoff_minimizer(rho, sigma)
    if value <= 0.0:
        return math.inf
    return max(0.0, -math.log(value))


def chernoff_min_closed_form(eps: float) -> float:
    """Smallest Chernoff information at trace distance ``eps``."""
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    if eps == 1.0:
        return math.inf
    return -0.5 * math.log1p(-eps * eps)


def _support_leak(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Weight of rho outside the support of sigma."""
    r, s = rho.spectrum.eigenvalues, sigma.spectrum.eigenvalues
    W = _overlaps(rho, sigma)
    return float(r @ W[:, s == 0].sum(axis=1))


def quantum_relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """``Tr[rho (log rho - log sigma)]``; ``inf`` unless supp(rho) lies in supp(sigma)."""
    _same_dim(rho, sigma)
    if _support_leak(rho, sigma) > EIG_CUTOFF:
        return math.inf
    r, s = rho.spectrum.eigenvalues, sigma.spectrum.eigenvalues
    ri, sj = r > 0, s > 0
    W = _overlaps(rho, sigma)[np.ix_(ri, sj)]
    rr = r[ri]
    value = float(rr @ np.log(rr) - rr @ W @ np.log(s[sj]))
    return max(value, 0.0)


def quantum_jeffrey(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    return 0.5 * (quantum_relative_entropy(rho, sigma) + quantum_relative_entropy(sigma, rho))


def quantum_f_divergence(rho: DensityMatrix, sigma: DensityMatrix, spec: DivergenceSpec) -> float:
    """``sum_ij f(s_i / r_j) r_j |<s_i|r_j>|**2`` over eigenpairs of sigma and rho.

    ``rho`` must be full rank. Zero eigenvalues of ``sigma`` use the
    generator's value at 0.
    """
    _same_dim(rho, sigma)
    if rho.rank < rho.n:
        raise RankError("quantum f-divergence needs a full-rank first argument")
    r, s = rho.spectrum.eigenvalues, sigma.spectrum.eigenvalues
    W = _overlaps(sigma, rho)  # W[i, j] = |<s_i|r_j>|^2
    ratio = s[:, None] / r[None, :]
    pos = ratio > 0
    vals = np.where(pos, spec(np.where(pos, ratio, 1.0)), 0.0)
    weight = W * r[None, :]
    total = float(np.sum(np.where(pos, vals * weight, 0.0)))
    zero_weight = float(np.sum(np.where(pos, 0.0, weight)))
    if zero_weight > 0.0:
        total += zero_weight * spec.value_at_zero
    return total


def dominance_measurement(rho: DensityMatrix, sigma: DensityMatrix) -> tuple[Distribution, Distribution]:
    """Outcome distributions of measuring both states in an eigenbasis of ``rho - sigma``."""
    _same_dim(rho, sigma)
    _, v = np.linalg.eigh(rho.matrix - sigma.matrix)
    p = np.real(np.einsum("ki,kl,li->i", v.conj(), rho.matrix, v))
    q = np.real(np.einsum("ki,kl,li->i", v.conj(), sigma.matrix, v))
    p, q = np.clip(p, 0.0, None), np.clip(q, 0.0, None)
    return Distribution(p / p.sum()), Distribution(q / q.sum())


def jeffrey_lower_bound(d: float) -> float:
    """``d log((1 + d)/(1 - d))``, infinite at ``d = 1``."""
    if d >= 1.0:
        return math.inf
    return d * (math.log1p(d) - math.log1p(-d))


def verify_quantum_bounds(rho: DensityMatrix, sigma: DensityMatrix, tol: float = DEFAULT_TOL) -> list[BoundReport]:
    """Check every trace-distance bound on one pair of states."""
    _same_dim(rho, sigma)
    tag = digest(rho.matrix, sigma.matrix)
    d = trace_distance(rho, sigma)
    F = fidelity(rho, sigma)
    D = quantum_relative_entropy(rho, sigma)
    J = quantum_jeffrey(rho, sigma)
    overlap = sqrt_overlap(rho, sigma)
    neg_log_overlap = math.inf if overlap <= 0.0 else -2.0 * math.log(overlap)
    root_diff = rho.sqrt() - sigma.sqrt()
    hellinger = float(np.real(np.trace(root_diff @ root_diff)))
    P, Q = dominance_measurement(rho, sigma)
    return [
        check("fidelity_lower", F, 1.0 - d, tol, tag),
        check("fidelity_upper", math.sqrt(max(0.0, 1.0 - d * d)), F, tol, tag),
        check("chernoff_lower", chernoff_information(rho, sigma), chernoff_min_closed_form(d), tol, tag),
        check("pinsker", D, 0.5 * (2.0 * d) ** 2, tol, tag),
        check("pinsker_renyi_half", D, neg_log_overlap, tol, tag),
        check("renyi_half_sqrt_gap", neg_log_overlap, hellinger, tol, tag),
        check("jeffrey_trace_distance", J, jeffrey_lower_bound(d), tol, tag),
        check("jeffrey_monotone", J, jeffrey_tsallis(P, Q, 1.0), tol, tag),
    ]
