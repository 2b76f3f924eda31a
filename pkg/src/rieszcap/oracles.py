"""Slow reference implementations used as independent test anchors.

Nothing here is meant for production use.  Each oracle re-derives its value
with plain Python loops and scalar math so it shares no summation code with
the vectorized energy routines it cross-checks.  Keep it that way: reusing
the fast paths would void the independence these anchors exist to provide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .energies import TruncationWindow, WolffExponents
from .errors import DomainError, ToleranceNotMetError
from .measures import DiscreteMeasure


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    max_subdivisions: int = 48

    def __post_init__(self):
        if self.rel_tol <= 0.0:
            raise DomainError(f"tolerance must be positive, got {self.rel_tol}")
        if self.max_subdivisions < 1:
            raise DomainError(f"need at least one subdivision, got {self.max_subdivisions}")


def _dist(p, q) -> float:
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(p, q)))


def _kernel(p, q, alpha: float):
    """k_a(q - p) as a plain tuple."""
    d = _dist(p, q)
    scale = d ** (-(1.0 + alpha))
    return tuple((b - a) * scale for a, b in zip(p, q))


def _dot(u, v) -> float:
    return sum(a * b for a, b in zip(u, v))


def _sym_raw(x, y, z, alpha: float) -> float:
    """Cyclic three-term kernel symmetrization, scalar arithmetic only."""
    return (
        _dot(_kernel(x, y, alpha), _kernel(x, z, alpha))
        + _dot(_kernel(y, z, alpha), _kernel(y, x, alpha))
        + _dot(_kernel(z, x, alpha), _kernel(z, y, alpha))
    )


def _atom_rows(mu: DiscreteMeasure):
    atoms = [tuple(float(v) for v in row) for row in np.asarray(mu.atoms)]
    weights = [float(w) for w in np.asarray(mu.weights)]
    return atoms, weights


def naive_symmetrization_energy(mu: DiscreteMeasure, alpha: float, eps: float) -> float:
    """Triple loop over ALL ordered atom triples with the eps tests inline."""
    atoms, weights = _atom_rows(mu)
    m = len(atoms)
    total = 0.0
    for i in range(m):
        for j in range(m):
            if j == i or _dist(atoms[i], atoms[j]) <= eps:
                continue
            for k in range(m):
                if k == i or k == j:
                    continue
                if _dist(atoms[i], atoms[k]) <= eps or _dist(atoms[j], atoms[k]) <= eps:
                    continue
                total += (
                    weights[i]
                    * weights[j]
                    * weights[k]
                    * _sym_raw(atoms[i], atoms[j], atoms[k], alpha)
                )
    return total


def naive_riesz_l2_energy(mu: DiscreteMeasure, alpha: float, eps: float) -> float:
    """Double loop: weighted squared norm of the truncated transform at atoms."""
    atoms, weights = _atom_rows(mu)
    m = len(atoms)
    n = len(atoms[0])
    total = 0.0
    for i in range(m):
        acc = [0.0] * n
        for j in range(m):
            if j == i or _dist(atoms[i], atoms[j]) <= eps:
                continue
            k = _kernel(atoms[i], atoms[j], alpha)
            for c in range(n):
                acc[c] += weights[j] * k[c]
        total += weights[i] * sum(v * v for v in acc)
    return total


def naive_symmetrization_potential_sq(
    mu: DiscreteMeasure, x, alpha: float, eps: float
) -> float:
    """Ordered double sum of the full three-point symmetrization around x."""
    atoms, weights = _atom_rows(mu)
    p = tuple(float(v) for v in np.asarray(x, dtype=float))
    m = len(atoms)
    total = 0.0
    for j in range(m):
        if _dist(p, atoms[j]) <= eps:
            continue
        for k in range(m):
            if k == j:
                continue
            if _dist(p, atoms[k]) <= eps or _dist(atoms[j], atoms[k]) <= eps:
                continue
            total += weights[j] * weights[k] * _sym_raw(p, atoms[j], atoms[k], alpha)
    return total


# ---------------------------------------------------------------------------
# Adaptive Simpson quadrature for the radial Wolff integral
# ---------------------------------------------------------------------------


def _simpson(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, fa, b, fb, whole, m, fm, tol, depth):
    if depth <= 0:
        raise ToleranceNotMetError("adaptive Simpson hit its subdivision cap")
    lm, flm, left = _simpson(f, a, fa, m, fm)
    rm, frm, right = _simpson(f, m, fm, b, fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return _adaptive(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1) + _adaptive(
        f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1
    )


def _integrate_smooth(f, a, b, rel_tol, max_depth):
    if b <= a:
        return 0.0
    fa, fb = f(a), f(b)
    m, fm, whole = _simpson(f, a, fa, b, fb)
    tol = rel_tol * max(abs(whole), 1e-300)
    return _adaptive(f, a, fa, b, fb, whole, m, fm, tol, max_depth)


def quadrature_wolff(
    mu: DiscreteMeasure,
    x,
    exps: WolffExponents,
    window: TruncationWindow,
    qcfg: QuadratureConfig = QuadratureConfig(),
) -> float:
    """Wolff-type radial integral by adaptive Simpson on log radius.

    Integrates (mu(B(x, r)) / r^trace)^dual_exp dr/r over the window.  The
    integrand is piecewise smooth between the sorted atom distances, so the
    quadrature runs piece by piece up to twice the largest breakpoint; the
    remaining tail, where the ball mass is constant, is added analytically.
    """
    trace = exps.trace
    dual_exp = exps.dual_exp
    eps = window.eps
    r_out = window.outer
    beta = trace * dual_exp
    if beta <= 0.0:
        raise DomainError(f"tail diverges for trace*dual_exp = {beta}")
    atoms, weights = _atom_rows(mu)
    p = tuple(float(v) for v in np.asarray(x, dtype=float))
    pairs = sorted(zip((_dist(p, a) for a in atoms), weights))

    def ball_mass(r: float) -> float:
        return sum(w for d, w in pairs if d <= r)

    def integrand_log(u: float) -> float:
        r = math.exp(u)
        m = ball_mass(r)
        return 0.0 if m <= 0.0 else (m / r**trace) ** dual_exp

    last = max(d for d, _ in pairs)
    r_num = min(max(2.0 * last, 2.0 * eps), r_out)
    cuts = sorted({eps, r_num} | {d for d, _ in pairs if eps < d < r_num})
    # The integrand jumps exactly at the cuts, so each piece samples a hair
    # inside its own interval; the clamp is a few ulps wide and contributes
    # nothing at the tolerances in play.
    pad = 5e-15
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        ua, ub = math.log(a), math.log(b)
        lo, hi = ua + pad, ub - pad
        if hi <= lo:
            total += (ub - ua) * integrand_log(0.5 * (ua + ub))
            continue
        clamped = lambda u, lo=lo, hi=hi: integrand_log(min(max(u, lo), hi))
        total += _integrate_smooth(clamped, ua, ub, qcfg.rel_tol, qcfg.max_subdivisions)
    if r_num < r_out:
        m_tail = ball_mass(r_num)
        top = 0.0 if math.isinf(r_out) else r_out ** (-beta)
        total += m_tail**dual_exp * (r_num ** (-beta) - top) / beta
    return total


# ---------------------------------------------------------------------------
# Monte-Carlo spot check of the ball-mass double sum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MCEstimate:
    value: float
    stderr: float
    samples: int


def mc_double_sum(
    mu: DiscreteMeasure, alpha: float, eps: float, samples: int, seed: int
) -> MCEstimate:
    """Monte-Carlo estimate of sum_{i != j} w_i w_j mu(B(x_i, d_ij)) / d_ij^(2a).

    Draws ordered atom pairs with probability proportional to their weights;
    pairs at distance <= eps (including i = j) contribute zero, matching the
    truncated exact double sum.  Deterministic for a fixed seed.
    """
    if samples < 1000:
        raise DomainError(f"need at least 1000 samples, got {samples}")
    atoms, weights = _atom_rows(mu)
    total_mass = sum(weights)
    probs = [w / total_mass for w in weights]
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(atoms), size=(samples, 2), p=probs)
    vals = np.empty(samples)
    for s, (i, j) in enumerate(idx):
        if i == j:
            vals[s] = 0.0
            continue
        d = _dist(atoms[i], atoms[j])
        if d <= eps:
            vals[s] = 0.0
            continue
        mass = sum(w for a, w in zip(atoms, weights) if _dist(atoms[i], a) <= d)
        vals[s] = mass / d ** (2.0 * alpha)
    scale = total_mass * total_mass
    mean = float(vals.mean())
    sem = float(vals.std(ddof=1) / math.sqrt(samples))
    return MCEstimate(value=scale * mean, stderr=scale * sem, samples=samples)
