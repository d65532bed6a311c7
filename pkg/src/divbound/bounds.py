"""Tight lower bounds for symmetric divergences at fixed total variation.

Closed forms for the constrained minima, the q-Pinsker gap, a seeded
counterexample search for ``q < 1`` and a brute-force grid oracle that
checks the closed forms independently.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .classical import (
    Distribution,
    DivergenceSpec,
    _check_q,
    _lnq,
    _pair,
    as_distribution,
    jeffrey_tsallis,
    jensen_shannon_tsallis,
    total_variation,
    tsallis_divergence,
)
from .report import DEFAULT_TOL, BoundReport, check, digest


def _check_eps(eps: float, allow_one: bool = True) -> float:
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    if eps == 1.0 and not allow_one:
        raise ValueError("eps = 1 is not supported here")
    return eps


def gilardoni_infimum(spec: DivergenceSpec, eps: float) -> float:
    """Infimum of a symmetric f-divergence over pairs at total variation ``eps``.

    ``(1 - eps) f((1 + eps)/(1 - eps)) - 2 f'(1) eps``. At ``eps = 1`` the
    first term tends to ``2 * lim f(t)/t``, which is used when finite.
    """
    spec.check_symmetric()
    eps = _check_eps(eps)
    if eps == 1.0:
        return 2.0 * spec.slope_at_infinity - 2.0 * spec.derivative_at_one
    u = (1.0 + eps) / (1.0 - eps)
    return float((1.0 - eps) * spec(np.array([u]))[0] - 2.0 * spec.derivative_at_one * eps)


def extremal_pair(eps: float) -> tuple[Distribution, Distribution]:
    eps = _check_eps(eps)
    lo, hi = (1.0 - eps) / 2.0, (1.0 + eps) / 2.0
    return Distribution([lo, hi]), Distribution([hi, lo])


def _neg_x_lnq_inv(x: float, q: float) -> float:
    # -x ln_q(1/x), continuously extended by 0 at x = 0
    if x == 0.0:
        return 0.0
    return float(-x * _lnq(1.0 / x, q))


def jst_min(eps: float, q: float) -> float:
    """Minimum Jensen-Shannon-Tsallis divergence at total variation ``eps``."""
    q = _check_q(q)
    eps = _check_eps(eps)
    return _neg_x_lnq_inv(1.0 - eps, q) + _neg_x_lnq_inv(1.0 + eps, q)


def jeffrey_min(eps: float, q: float) -> float:
    """Minimum Jeffrey-Tsallis divergence at total variation ``eps``."""
    q = _check_q(q)
    eps = _check_eps(eps)
    if eps == 1.0:
        # (1+eps) ln_q(0) term survives; the other vanishes for q > 0
        return 1.0 / (1.0 - q) if q < 1 else math.inf
    a, b = 1.0 - eps, 1.0 + eps
    return float(-0.5 * (b * _lnq(a / b, q) + a * _lnq(b / a, q)))


def q_pinsker_gap(P, Q, q: float) -> float:
    """``D_q(P || Q) - 2 d_TV(P, Q)**2``; nonnegative whenever ``q >= 1``."""
    tv = total_variation(P, Q)
    return tsallis_divergence(P, Q, q) - 2.0 * tv * tv


# counterexample search

_SWEEP_POINTS = 1001  # grid resolution per axis for the two-point sweep
_MAX_SUPPORT = 5


def _batch_tsallis(P: np.ndarray, Q: np.ndarray, q: float) -> np.ndarray:
    """Row-wise Tsallis divergence of stacked distributions."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = np.log(Q) - np.log(P)
        if q == 1.0:
            terms = -P * ratio
        else:
            terms = -P * np.expm1((1.0 - q) * ratio) / (1.0 - q)
    terms = np.where(P > 0, terms, 0.0)
    return terms.sum(axis=1)


def _sample_block(rng: np.random.Generator, start: int, size: int, stride: int, offset: int):
    """Trials ``start..start+size``: even indices random Dirichlet pairs, odd ones grid sweep."""
    idx = np.arange(start, start + size)
    P = np.zeros((size, _MAX_SUPPORT))
    Q = np.zeros((size, _MAX_SUPPORT))

    k = rng.integers(2, _MAX_SUPPORT + 1, size=size)
    mask = np.arange(_MAX_SUPPORT)[None, :] < k[:, None]
    gp = np.where(mask, rng.gamma(1.0, size=(size, _MAX_SUPPORT)), 0.0)
    gq = np.where(mask, rng.gamma(1.0, size=(size, _MAX_SUPPORT)), 0.0)
    P_rand = gp / gp.sum(axis=1, keepdims=True)
    Q_rand = gq / gq.sum(axis=1, keepdims=True)

    n_cells = _SWEEP_POINTS * _SWEEP_POINTS
    cell = (stride * (idx // 2) + offset) % n_cells
    x = (cell // _SWEEP_POINTS) / (_SWEEP_POINTS - 1)
    y = (cell % _SWEEP_POINTS) / (_SWEEP_POINTS - 1)
    P_grid = np.zeros_like(P)
    Q_grid = np.zeros_like(Q)
    P_grid[:, 0], P_grid[:, 1] = x, 1.0 - x
    Q_grid[:, 0], Q_grid[:, 1] = y, 1.0 - y

    even = (idx % 2 == 0)[:, None]
    P = np.where(even, P_rand, P_grid)
    Q = np.where(even, Q_rand, Q_grid)
    return P, Q


def counterexample_search(
    q: float, trials: int, seed: int, threshold: float = -1e-9, block: int = 4096
) -> Optional[tuple[Distribution, Distribution, float]]:
    """Look for a pair violating the q-Pinsker inequality when ``0 < q < 1``.

    Even-numbered trials draw random pairs on supports of size 2 to 5; odd
    ones walk a seeded permutation of a fine grid of two-point pairs.
    Returns the lowest-index pair whose gap is below ``threshold``, or
    ``None`` when the budget runs out.
    """
    q = float(q)
    if not 0.0 < q < 1.0:
        raise ValueError(f"counterexample search needs 0 < q < 1, got {q}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    n_cells = _SWEEP_POINTS * _SWEEP_POINTS
    # a stride coprime to the cell count makes the walk a permutation
    stride = int(rng.integers(1, n_cells))
    while math.gcd(stride, n_cells) != 1:
        stride += 1
    offset = int(rng.integers(0, n_cells))

    for start in range(0, trials, block):
        size = min(block, trials - start)
        P, Q = _sample_block(rng, start, size, stride, offset)
        tv = 0.5 * np.abs(P - Q).sum(axis=1)
        gaps = _batch_tsallis(P, Q, q) - 2.0 * tv * tv
        bad = np.flatnonzero(gaps < threshold)
        if bad.size:
            i = int(bad[0])
            keep = (P[i] > 0) | (Q[i] > 0)
            Pd, Qd = _renormalized(P[i][keep]), _renormalized(Q[i][keep])
            return Pd, Qd, q_pinsker_gap(Pd, Qd, q)
    return None


def _renormalized(row: np.ndarray) -> Distribution:
    return Distribution(row / row.sum())


# brute-force oracle

_DIVERGENCES = ("jst", "jeffrey")


def _batch_divergence(name: str, q: float, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    if name == "jst":
        M = 0.5 * (P + Q)
        return _batch_tsallis(P, M, q) + _batch_tsallis(Q, M, q)
    if name == "jeffrey":
        return 0.5 * (_batch_tsallis(P, Q, q) + _batch_tsallis(Q, P, q))
    raise ValueError(f"unknown divergence {name!r}; expected one of {_DIVERGENCES}")


def closed_form_min(name: str, eps: float, q: float) -> float:
    if name == "jst":
        return jst_min(eps, q)
    if name == "jeffrey":
        return jeffrey_min(eps, q)
    raise ValueError(f"unknown divergence {name!r}; expected one of {_DIVERGENCES}")


def _pairs_support2(a: np.ndarray, sign: float, eps: float):
    b = a - sign * eps
    P = np.stack([a, 1.0 - a], axis=-1)
    Q = np.stack([b, 1.0 - b], axis=-1)
    return P, Q


def _min_support2(name, q, eps, grid, refine):
    best = math.inf
    for sign in (1.0, -1.0):
        lo, hi = (eps, 1.0) if sign > 0 else (0.0, 1.0 - eps)
        a = np.linspace(lo, hi, grid + 1)
        vals = _batch_divergence(name, q, *_pairs_support2(a, sign, eps))
        k = int(np.argmin(vals))
        cand = float(vals[k])
        if refine and np.isfinite(cand) and grid > 0:
            h = (hi - lo) / grid
            res = minimize_scalar(
                lambda x: float(_batch_divergence(name, q, *_pairs_support2(np.array([x]), sign, eps))[0]),
                bounds=(max(lo, a[k] - h), min(hi, a[k] + h)),
                method="bounded",
                options={"xatol": 1e-12},
            )
            if res.fun < cand:
                cand = float(res.fun)
        best = min(best, cand)
    return best


_PATTERNS = [(a, s) for a in range(3) for s in (1.0, -1.0)]


def _pairs_support3(p1, p2, t, pattern, eps):
    a, sign = pattern
    b, c = [i for i in range(3) if i != a]
    P = np.stack([p1, p2, 1.0 - p1 - p2], axis=-1)
    delta = np.zeros_like(P)
    delta[..., a] = sign * eps
    delta[..., b] = -sign * eps * t
    delta[..., c] = -sign * eps * (1.0 - t)
    Q = P + delta
    return P, Q


def _feasible(P, Q, tol=1e-15):
    return np.all(P >= -tol, axis=-1) & np.all(Q >= -tol, axis=-1)


def _min_support3(name, q, eps, grid, refine, t_points=21, starts=4):
    i, j = np.meshgrid(np.arange(grid + 1), np.arange(grid + 1), indexing="ij")
    keep = i + j <= grid
    p1 = (i[keep] / grid).astype(float)
    p2 = (j[keep] / grid).astype(float)
    ts = np.linspace(0.0, 1.0, t_points)

    candidates = []
    for pattern in _PATTERNS:
        for t in ts:
            P, Q = _pairs_support3(p1, p2, np.full_like(p1, t), pattern, eps)
            ok = _feasible(P, Q)
            if not np.any(ok):
                continue
            P, Q = np.clip(P[ok], 0.0, 1.0), np.clip(Q[ok], 0.0, 1.0)
            vals = _batch_divergence(name, q, P, Q)
            order = np.argsort(vals, kind="stable")[:starts]
            for k in order:
                candidates.append((float(vals[k]), pattern, P[k, 0], P[k, 1], t))
    if not candidates:
        return math.inf
    candidates.sort(key=lambda c: c[0])
    best = candidates[0][0]
    if not refine:
        return best

    for val, pattern, x1, x2, t in candidates[:starts]:
        if not np.isfinite(val):
            continue

        def objective(z, pattern=pattern):
            P, Q = _pairs_support3(np.array([z[0]]), np.array([z[1]]), np.array([z[2]]), pattern, eps)
            if not (_feasible(P, Q)[0] and 0.0 <= z[2] <= 1.0):
                return math.inf
            P, Q = np.clip(P, 0.0, 1.0), np.clip(Q, 0.0, 1.0)
            return float(_batch_divergence(name, q, P, Q)[0])

        res = minimize(
            objective,
            np.array([x1, x2, t]),
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000,
                     "initial_simplex": _local_simplex(x1, x2, t, 1.0 / grid)},
        )
        if np.isfinite(res.fun) and res.fun < best:
            best = float(res.fun)
    return best


def _local_simplex(x1, x2, t, h):
    base = np.array([x1, x2, t])
    return np.vstack([base, base + [h, 0, 0], base + [0, h, 0], base + [0, 0, h]])


def brute_force_min(
    divergence: str, q: float, eps: float, support: int = 2, grid: int = 2000, refine: bool = True
) -> float:
    """Grid-search minimum of ``divergence`` over pairs with total variation ``eps``.

    Pairs are a base point plus a zero-sum perturbation of l1 norm
    ``2 eps``; perturbed points leaving the simplex are discarded. With
    ``refine`` the best grid cells are polished by a local search.
    """
    q = _check_q(q)
    eps = _check_eps(eps)
    if divergence not in _DIVERGENCES:
        raise ValueError(f"unknown divergence {divergence!r}; expected one of {_DIVERGENCES}")
    if grid < 50:
        raise ValueError("grid resolution must be >= 50")
    if support == 2:
        return _min_support2(divergence, q, eps, grid, refine)
    if support == 3:
        return _min_support3(divergence, q, eps, grid, refine)
    raise ValueError(f"unsupported support size {support}; use 2 or 3")


def verify_classical_bounds(P, Q, q: float, tol: float = DEFAULT_TOL) -> list[BoundReport]:
    """Check the Jensen-Shannon-Tsallis, Jeffrey-Tsallis and q-Pinsker bounds on one pair."""
    q = _check_q(q)
    p, q_ = _pair(P, Q)
    P, Q = as_distribution(P), as_distribution(Q)
    tag = digest(p, q_, np.array([q]))
    tv = min(total_variation(P, Q), 1.0)
    reports = [
        check("jst_lower_bound", jensen_shannon_tsallis(P, Q, q), jst_min(tv, q), tol, tag),
        check("jeffrey_lower_bound", jeffrey_tsallis(P, Q, q), jeffrey_min(tv, q), tol, tag),
    ]
    if q >= 1.0:
        d = tsallis_divergence(P, Q, q)
        reports.append(check("q_pinsker", d, 2.0 * tv * tv, tol, tag))
        reports.append(check("q_pinsker_stated", d, 0.5 * tv * tv, tol, tag))
    return reports
