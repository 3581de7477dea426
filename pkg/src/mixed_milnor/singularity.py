"""Mixed-singularity residuals and the shell search certifying that family
members have no mixed singular point away from the origin.

A point is mixed singular iff conj(d_z f) = lambda * d_zbar f for some
unimodular lambda; the residual below is the distance to that condition,
minimized over lambda in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import MixedPolynomial, evaluate, wirtinger_gradient
from .errors import InputError, PreconditionError
from .families import DeformationFamily
from .numerics import complexify, realify, rng_for

FD_STEP = 1e-6


@dataclass(frozen=True)
class SingularityResidualReport:
    point: tuple[complex, ...]
    t: Optional[float]
    residual: float
    lambda_star: Optional[complex]
    on_variety: float


@dataclass(frozen=True)
class ShellSearchReport:
    spec: object
    t_grid: tuple[float, ...]
    radius: float
    min_residual_found: float
    argmin_point: tuple[complex, ...]
    argmin_t: float
    restarts: int
    iterations: int
    seed: int
    converged: bool


def singularity_residual(
    poly: MixedPolynomial, point: Sequence[complex], t: Optional[float] = None
) -> SingularityResidualReport:
    """min over |lambda|=1 of || conj(d_z f) - lambda d_zbar f ||.

    With u = conj(d_z f), v = d_zbar f the minimum is
    sqrt(||u||^2 + ||v||^2 - 2 |<u, v>|), attained at lambda = phase <u, v>.
    """
    grad = wirtinger_gradient(poly, point)
    u = np.conj(np.asarray(grad.d_z))
    v = np.asarray(grad.d_zbar)
    inner = complex(np.sum(u * np.conj(v)))
    uu = float(np.sum(np.abs(u) ** 2))
    vv = float(np.sum(np.abs(v) ** 2))
    residual = math.sqrt(max(0.0, uu + vv - 2.0 * abs(inner)))
    if np.any(v != 0):
        lam = inner / abs(inner) if inner != 0 else 1.0 + 0j
    else:
        lam = None
        residual = math.sqrt(uu)
    return SingularityResidualReport(
        tuple(complex(z) for z in point),
        t,
        residual,
        lam,
        abs(evaluate(poly, point)),
    )


def _shell_objective(poly: MixedPolynomial, x: np.ndarray) -> float:
    return singularity_residual(poly, complexify(x)).residual ** 2


def _project_tangent(g: np.ndarray, x: np.ndarray) -> np.ndarray:
    xhat = x / np.linalg.norm(x)
    return g - np.dot(g, xhat) * xhat


def _minimize_on_sphere(
    poly: MixedPolynomial,
    x0: np.ndarray,
    radius: float,
    rng: np.random.Generator,
    max_iter: int = 120,
) -> tuple[np.ndarray, float, int]:
    """Projected gradient descent with backtracking; pattern-search fallback
    when the line search stalls (the objective is only piecewise smooth)."""
    x = x0 * (radius / np.linalg.norm(x0))
    f = _shell_objective(poly, x)
    iters = 0
    for _ in range(max_iter):
        iters += 1
        g = np.empty_like(x)
        for i in range(x.size):
            xp = x.copy()
            xm = x.copy()
            xp[i] += FD_STEP
            xm[i] -= FD_STEP
            g[i] = (_shell_objective(poly, xp) - _shell_objective(poly, xm)) / (2 * FD_STEP)
        g = _project_tangent(g, x)
        gn = np.linalg.norm(g)
        if gn < 1e-12:
            break
        alpha = 0.1 * radius / max(gn, 1e-12)
        improved = False
        for _ in range(30):
            cand = x - alpha * g
            cand *= radius / np.linalg.norm(cand)
            fc = _shell_objective(poly, cand)
            if fc < f - 1e-12 * abs(f):
                x, f = cand, fc
                improved = True
                break
            alpha *= 0.5
        if not improved:
            # pattern search: a few random tangent probes at shrinking scale
            scale = 1e-3 * radius
            for _ in range(10):
                d = _project_tangent(rng.standard_normal(x.size), x)
                d /= max(np.linalg.norm(d), 1e-300)
                for sgn in (1.0, -1.0):
                    cand = x + sgn * scale * d
                    cand *= radius / np.linalg.norm(cand)
                    fc = _shell_objective(poly, cand)
                    if fc < f:
                        x, f = cand, fc
                        improved = True
                        break
                if improved:
                    break
                scale *= 0.5
            if not improved:
                break
    return x, f, iters


def certify_smooth_shell(
    fam: DeformationFamily,
    t_grid: Sequence[float],
    radius: float,
    restarts: int = 32,
    seed: int = 0,
) -> ShellSearchReport:
    """Global-ish minimum of the singularity residual over the shell ||z|| = radius.

    Numerical evidence only, never a proof: a positive minimum over all
    seeded restarts is the echo of the no-singularity lemma, reported with
    full provenance.
    """
    if radius <= 0:
        raise InputError("radius must be positive")
    if any(not 0.0 <= t <= 1.0 for t in t_grid):
        raise PreconditionError("t_grid must lie within [0, 1]")
    best = math.inf
    best_point: tuple[complex, ...] = ()
    best_t = float("nan")
    total_iters = 0
    converged = False
    for ti, t in enumerate(t_grid):
        poly = fam.member(float(t))
        for k in range(restarts):
            rng = rng_for(seed, f"shell:t={ti}:restart:{k}")
            x0 = rng.standard_normal(2 * fam.n)
            x, f, iters = _minimize_on_sphere(poly, x0, radius, rng)
            total_iters += iters
            converged = converged or iters < 120
            if f < best:
                best = f
                best_point = complexify(x)
                best_t = float(t)
    return ShellSearchReport(
        spec=fam.spec,
        t_grid=tuple(float(t) for t in t_grid),
        radius=float(radius),
        min_residual_found=math.sqrt(max(best, 0.0)),
        argmin_point=best_point,
        argmin_t=best_t,
        restarts=restarts,
        iterations=total_iters,
        seed=seed,
        converged=converged,
    )


@dataclass(frozen=True)
class IndexInequality:
    index: int  # 1-based, as in the per-term formulas
    L: float
    R: float
    strict: bool


def lemma_inequality_check(
    fam: DeformationFamily, t: float, point: Sequence[complex]
) -> tuple[IndexInequality, ...]:
    """Per-index lower bound |L| >= L_bound vs exact |R| from the
    no-singularity argument; strict inequality must hold whenever the
    governing coordinates are nonzero and 0 < t < 1."""
    if not 0.0 < t < 1.0:
        raise PreconditionError("inequality check applies for 0 < t < 1 only")
    w = [complex(z) for z in point]
    if len(w) != fam.n:
        raise InputError("point length mismatch")
    a, b, n = fam.spec.a, fam.spec.b, fam.n
    mods = [abs(z) for z in w]
    out: list[IndexInequality] = []
    if fam.spec.kind == "brieskorn":
        for j in range(n):
            base = mods[j] ** (a[j] + 2 * b[j]) * (1.0 - t)
            L = (a[j] + b[j]) * base
            R = b[j] * base
            out.append(IndexInequality(j + 1, L, R, L > R))
    elif fam.spec.kind == "type_i":
        if mods[n - 1] != 0:
            # governing index s = min{j | w_k != 0 for all k >= j}
            s = n - 1
            while s > 0 and mods[s - 1] != 0:
                s -= 1
            if s == n - 1:
                base = mods[s] ** (a[s] + 2 * b[s]) * (1.0 - t)
            else:
                base = mods[s] ** (a[s] + 2 * b[s]) * mods[s + 1] * (1.0 - t)
            L = (a[s] + b[s]) * base
            R = b[s] * base
            out.append(IndexInequality(s + 1, L, R, L > R))
    else:  # type_ii: max index m, ties broken by smallest index
        scores = [mods[j] ** (a[j] + 2 * b[j]) * mods[(j + 1) % n] for j in range(n)]
        m = max(range(n), key=lambda j: (scores[j], -j))
        base = scores[m] * (1.0 - t)
        L = (a[m] + b[m] - 1) * base
        R = b[m] * base
        out.append(IndexInequality(m + 1, L, R, L > R))
    return tuple(out)
