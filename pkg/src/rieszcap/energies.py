"""Energy and potential functionals of discrete measures.

Implements, for an atomic measure mu with weights w_i at sites x_i:

* the triple-sum symmetrization energy over ordered atom triples whose
  pairwise distances all exceed a cutoff eps (positive for 0 < a < 1);
* truncated Riesz transforms R_eps(mu)(x) and their L2(mu) energy;
* the exact decomposition 3 * L2-energy = triple sum + residual, where the
  residual collects the degenerate ordered configurations (equal indices
  and pairs closer than eps);
* Wolff potentials/energies in closed piecewise form;
* the pointwise squared symmetrization potential and the combined
  maximal-plus-potential energy whose reciprocal feeds capacity estimates;
* the ball-mass double sum, a third independent estimator comparable to the
  triple-sum energy.

Every functional carries an explicit truncation window.  Atomic measures
make the untruncated Wolff integral and maximal function infinite, so the
inner radius should normally be at least the measure resolution ``delta``.
Cutoff comparisons are strict (> eps); ties at exactly eps are excluded.

Evaluation modes
----------------
``mode="sequential"`` iterates unordered triples in plain Python (one
deterministic pass, no vectorization) and exists for debugging and tiny
inputs.  ``mode="direct"`` evaluates the same sum center by center with
masked pair matrices; it is the default for small measures and is what the
identity and oracle checks run against.  ``mode="fused"`` rewrites each
center's pair sum as a completed square corrected by the explicitly
enumerated close pairs; it is algebraically identical, runs in O(N^2), and
is the default above ``FUSED_THRESHOLD`` atoms.  Tolerances of 1e-10..1e-12
absorb the reassociation differences between modes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedExponentError
from .kernels import KernelParams, as_point
from .measures import DiscreteMeasure, ball_profile, maximal_at_atoms, maximal_function

# Above this atom count the O(N^2) fused path replaces the direct one.
FUSED_THRESHOLD = 330

# Fused-path negativity slack: squared potentials are clamped to zero when a
# completed square undershoots by at most this relative amount.
_CANCEL_RTOL = 1e-8


@dataclass(frozen=True)
class TruncationWindow:
    """Inner cutoff radius eps (> 0) and optional outer cutoff r_out."""

    eps: float
    r_out: float | None = None

    def __post_init__(self):
        if not (self.eps > 0.0) or not math.isfinite(self.eps):
            raise DomainError(f"eps must be positive and finite, got {self.eps}")
        if self.r_out is not None and not (self.r_out > self.eps):
            raise DomainError(
                f"r_out={self.r_out} must exceed eps={self.eps} (or be omitted)"
            )

    @property
    def outer(self) -> float:
        return math.inf if self.r_out is None else self.r_out

    def scaled(self, factor: float) -> "TruncationWindow":
        """Window with both radii multiplied by a positive factor."""
        if factor <= 0.0:
            raise DomainError(f"scale factor must be positive, got {factor}")
        r = None if self.r_out is None else self.r_out * factor
        return TruncationWindow(self.eps * factor, r)


@dataclass(frozen=True)
class WolffExponents:
    """Smoothness/integrability exponents (s, p) of a Wolff potential in R^n.

    Requires 1 < p and 0 < s*p <= n.  Derived quantities: ``trace`` is
    n - s*p, the power of r dividing the ball mass, and ``dual_exp`` is
    p' - 1 = 1/(p - 1), the outer power of the integrand.
    """

    s: float
    p: float
    n: int

    def __post_init__(self):
        if not (self.p > 1.0) or not math.isfinite(self.p):
            raise DomainError(f"p must lie in (1, inf), got {self.p}")
        sp = self.s * self.p
        if not (0.0 < sp <= self.n):
            raise DomainError(f"s*p must lie in (0, n] = (0, {self.n}], got {sp}")

    @property
    def trace(self) -> float:
        return self.n - self.s * self.p

    @property
    def dual_exp(self) -> float:
        return 1.0 / (self.p - 1.0)

    @classmethod
    def matched(cls, params: KernelParams) -> "WolffExponents":
        """Exponents s = (2/3)(n - a), p = 3/2, for which trace = a and
        dual_exp = 2, so the radial integrand is (mu(B(x,r))/r^a)^2."""
        return cls(s=(2.0 / 3.0) * (params.n - params.alpha), p=1.5, n=params.n)


def _require_alpha_in(params: KernelParams, hi: float) -> None:
    if not (0.0 < params.alpha < hi):
        raise DomainError(f"alpha must lie in (0, {hi}), got {params.alpha}")


def _check_dims(mu: DiscreteMeasure, params: KernelParams) -> None:
    if mu.n != params.n:
        raise DomainError(f"measure lives in R^{mu.n} but params expect R^{params.n}")


def _row_block(n_atoms: int, n_dim: int, budget_bytes: int = 32 << 20) -> int:
    return max(1, budget_bytes // max(1, n_atoms * n_dim * 8))


def _kernel_rows(mu: DiscreteMeasure, alpha: float, i0: int, i1: int) -> np.ndarray:
    """K[m, j] = k_a(x_j - x_{i0+m}); rows at zero distance are zeroed."""
    x = mu.atoms
    diffs = x[None, :, :] - x[i0:i1, None, :]
    d = mu.distance_matrix()[i0:i1]
    with np.errstate(divide="ignore"):
        scale = d ** (-(1.0 + alpha))
    scale[d == 0.0] = 0.0
    return diffs * scale[:, :, None]


def _kernel_from_point(mu: DiscreteMeasure, x: np.ndarray, alpha: float):
    """Kernel legs k_a(x_j - x) for every atom, plus the distances."""
    diffs = mu.atoms - x[None, :]
    d = np.linalg.norm(diffs, axis=1)
    with np.errstate(divide="ignore"):
        scale = d ** (-(1.0 + alpha))
    scale[d == 0.0] = 0.0
    return diffs * scale[:, None], d


def _close_pairs(mu: DiscreteMeasure, eps: float) -> np.ndarray:
    """Unordered atom pairs (a, b), a < b, with 0 < distance <= eps."""
    d = mu.distance_matrix()
    a, b = np.nonzero(np.triu(d <= eps, k=1))
    return np.stack([a, b], axis=1) if a.size else np.empty((0, 2), dtype=int)


# ---------------------------------------------------------------------------
# Truncated Riesz transform and its L2(mu) energy
# ---------------------------------------------------------------------------


def truncated_riesz_transform(
    mu: DiscreteMeasure, x, params: KernelParams, eps: float
) -> np.ndarray:
    """Sum of w_j k_a(x_j - x) over atoms strictly farther than eps from x."""
    if eps <= 0.0:
        raise DomainError(f"eps must be positive, got {eps}")
    _check_dims(mu, params)
    p = as_point(x, mu.n)
    kernels, d = _kernel_from_point(mu, p, params.alpha)
    wv = np.where(d > eps, mu.weights, 0.0)
    return np.einsum("jn,j->n", kernels, wv)


def riesz_transform_at_atoms(
    mu: DiscreteMeasure, params: KernelParams, eps: float
) -> np.ndarray:
    """Truncated transform evaluated at every atom site, shape (N, n)."""
    if eps <= 0.0:
        raise DomainError(f"eps must be positive, got {eps}")
    _check_dims(mu, params)
    n_atoms = mu.size
    out = np.empty((n_atoms, mu.n))
    d = mu.distance_matrix()
    block = _row_block(n_atoms, mu.n)
    for i0 in range(0, n_atoms, block):
        i1 = min(i0 + block, n_atoms)
        kernels = _kernel_rows(mu, params.alpha, i0, i1)
        wv = np.where(d[i0:i1] > eps, mu.weights[None, :], 0.0)
        out[i0:i1] = np.einsum("mjn,mj->mn", kernels, wv)
    return out


def riesz_l2_energy(mu: DiscreteMeasure, params: KernelParams, eps: float) -> float:
    """sum_i w_i |R_eps(mu)(x_i)|^2 over atom sites."""
    r = riesz_transform_at_atoms(mu, params, eps)
    return float(np.dot(mu.weights, np.einsum("in,in->i", r, r)))


# ---------------------------------------------------------------------------
# Triple-sum symmetrization energy
# ---------------------------------------------------------------------------


def _resolve_mode(mode: str, mu: DiscreteMeasure, eps: float) -> str:
    if mode not in ("auto", "direct", "fused", "sequential"):
        raise DomainError(f"unknown evaluation mode {mode!r}")
    if mode != "auto":
        return mode
    if mu.size <= FUSED_THRESHOLD:
        return "direct"
    if len(_close_pairs(mu, eps)) > mu.size * mu.size // 4:
        return "direct"
    return "fused"


def _warn_below_delta(window: TruncationWindow, mu: DiscreteMeasure) -> None:
    if window.eps < mu.delta * (1.0 - 1e-12):
        warnings.warn(
            f"eps={window.eps} is below the measure resolution delta={mu.delta}; "
            "truncated functionals probe scales where the atomic representation "
            "is not meaningful",
            stacklevel=3,
        )


def symmetrization_energy(
    mu: DiscreteMeasure,
    params: KernelParams,
    window: TruncationWindow,
    mode: str = "auto",
) -> float:
    """Triple sum of the kernel symmetrization over eps-separated atoms.

    Sums w_i w_j w_k times the three-point symmetrization over all ordered
    triples of distinct atoms whose three pairwise distances exceed
    window.eps; equivalently six times the sum over unordered triples.
    Nonincreasing in eps for 0 < alpha < 1.  The outer window radius does
    not apply to triple sums.
    """
    _require_alpha_in(params, params.n)
    _check_dims(mu, params)
    _warn_below_delta(window, mu)
    eps = window.eps
    if mu.size < 3:
        return 0.0
    mode = _resolve_mode(mode, mu, eps)
    if mode == "sequential":
        return _sym_energy_sequential(mu, params, eps)
    if mode == "direct":
        return _sym_energy_direct(mu, params, eps)
    return _sym_energy_fused(mu, params, eps)


def _sym_energy_sequential(mu: DiscreteMeasure, params: KernelParams, eps: float) -> float:
    from .kernels import symmetrization

    d = mu.distance_matrix()
    w = mu.weights
    x = mu.atoms
    total = 0.0
    m = mu.size
    for i in range(m):
        for j in range(i + 1, m):
            if d[i, j] <= eps:
                continue
            for k in range(j + 1, m):
                if d[i, k] <= eps or d[j, k] <= eps:
                    continue
                total += w[i] * w[j] * w[k] * symmetrization(x[i], x[j], x[k], params)
    return 6.0 * total


def _sym_energy_direct(mu: DiscreteMeasure, params: KernelParams, eps: float) -> float:
    # Grouped by center m: the ordered triple sum equals
    #   3 * sum_m w_m sum_{j != k, all separations > eps} w_j w_k K_mj . K_mk
    d = mu.distance_matrix()
    sep = d > eps
    w = mu.weights
    n_atoms = mu.size
    total = 0.0
    block = max(1, (64 << 20) // max(1, n_atoms * n_atoms * 8))
    for i0 in range(0, n_atoms, block):
        i1 = min(i0 + block, n_atoms)
        kernels = _kernel_rows(mu, params.alpha, i0, i1)
        wv = np.where(sep[i0:i1], w[None, :], 0.0)
        gram = np.einsum("mjn,mkn->mjk", kernels, kernels)
        gram *= sep[None, :, :]
        t = np.einsum("mjk,mk->mj", gram, wv)
        total += float(np.dot(w[i0:i1], np.einsum("mj,mj->m", t, wv)))
    return 3.0 * total


def _sym_energy_fused(mu: DiscreteMeasure, params: KernelParams, eps: float) -> float:
    per_center = _fused_center_sums(mu, params.alpha, eps)
    return 3.0 * float(np.dot(mu.weights, per_center))


def _fused_center_sums(mu: DiscreteMeasure, alpha: float, eps: float) -> np.ndarray:
    """For each center m: sum over separated ordered pairs of K_mj.K_mk w_j w_k,
    computed as |R_m|^2 minus the diagonal and the enumerated close pairs."""
    d = mu.distance_matrix()
    w = mu.weights
    r = riesz_transform_at_atoms(mu, KernelParams(alpha, mu.n), eps)
    sq = np.einsum("mn,mn->m", r, r)
    with np.errstate(divide="ignore"):
        inv = d ** (-2.0 * alpha)
    inv[d == 0.0] = 0.0
    diag = np.where(d > eps, inv * (w * w)[None, :], 0.0).sum(axis=1)
    close = np.zeros(mu.size)
    pairs = _close_pairs(mu, eps)
    if len(pairs):
        a, b = pairs[:, 0], pairs[:, 1]
        x = mu.atoms
        da, db = d[:, a], d[:, b]
        with np.errstate(divide="ignore"):
            sa = da ** (-(1.0 + alpha))
            sb = db ** (-(1.0 + alpha))
        sa[da == 0.0] = 0.0
        sb[db == 0.0] = 0.0
        dot = np.einsum(
            "mpn,mpn->mp",
            (x[a][None, :, :] - x[:, None, :]) * sa[:, :, None],
            (x[b][None, :, :] - x[:, None, :]) * sb[:, :, None],
        )
        vis = (da > eps) & (db > eps)
        close = 2.0 * np.einsum("mp,mp,p->m", dot, vis, w[a] * w[b])
    return sq - diag - close


# ---------------------------------------------------------------------------
# Decomposition identity: 3 * L2 energy = triple sum + residual
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """Exact split of three times the truncated-transform L2 energy."""

    lhs: float
    p_part: float
    residual: float

    @property
    def gap(self) -> float:
        """lhs - (p_part + residual); zero up to float reassociation."""
        return self.lhs - (self.p_part + self.residual)


def symmetrization_decomposition(
    mu: DiscreteMeasure, params: KernelParams, eps: float
) -> Decomposition:
    """Split 3 * riesz_l2_energy into the triple sum plus a residual.

    The residual is enumerated independently over the degenerate ordered
    configurations: pairs j = k, and pairs 0 < |x_j - x_k| <= eps with both
    atoms eps-visible from the center.  The triple sum is evaluated in
    ``direct`` mode so the identity remains a genuine cross-check.
    """
    lhs = 3.0 * riesz_l2_energy(mu, params, eps)
    p_part = symmetrization_energy(mu, params, TruncationWindow(eps), mode="direct")
    residual = _residual_enumeration(mu, params, eps)
    return Decomposition(lhs=lhs, p_part=p_part, residual=residual)


def _residual_enumeration(mu: DiscreteMeasure, params: KernelParams, eps: float) -> float:
    """Degenerate ordered configurations, straight from their definitions."""
    d = mu.distance_matrix()
    w = mu.weights
    alpha = params.alpha
    x = mu.atoms
    total = 0.0
    # j = k: the center sees atom j twice, contributing w_j^2 |k(x_j-x_i)|^2.
    for i in range(mu.size):
        for j in range(mu.size):
            if d[i, j] > eps:
                total += w[i] * w[j] * w[j] * d[i, j] ** (-2.0 * alpha)
    # j != k with |x_j - x_k| <= eps: both visible from the center but the
    # pair itself falls outside the separated region.
    for j in range(mu.size):
        for k in range(mu.size):
            if k == j or d[j, k] > eps:
                continue
            for i in range(mu.size):
                if d[i, j] > eps and d[i, k] > eps:
                    kj = (x[j] - x[i]) * d[i, j] ** (-(1.0 + alpha))
                    kk = (x[k] - x[i]) * d[i, k] ** (-(1.0 + alpha))
                    total += w[i] * w[j] * w[k] * float(np.dot(kj, kk))
    return float(3.0 * total)


# ---------------------------------------------------------------------------
# Wolff potentials and energy (closed piecewise form)
# ---------------------------------------------------------------------------


def _wolff_beta(exps: WolffExponents) -> float:
    beta = exps.trace * exps.dual_exp
    if beta <= 0.0:
        raise UnsupportedExponentError(
            f"radial tail diverges: (n - s*p) * (p' - 1) = {beta} <= 0"
        )
    return beta


def _wolff_from_steps(radii, masses, exps: WolffExponents, window: TruncationWindow) -> float:
    """Integrate (m(r)/r^trace)^dual_exp dr/r over [eps, outer] piece by piece.

    ``radii``/``masses`` describe the right-continuous ball-mass step
    function; between breakpoints the integrand is an exact power of r.
    """
    beta = _wolff_beta(exps)
    e = exps.dual_exp
    lo = np.clip(radii, window.eps, window.outer)
    hi = np.concatenate([radii[1:], [math.inf]])
    hi = np.clip(hi, window.eps, window.outer)
    with np.errstate(divide="ignore"):
        drop = lo ** (-beta) - np.where(np.isinf(hi), 0.0, hi ** (-beta))
    terms = np.where(masses > 0.0, masses, 0.0) ** e * drop / beta
    return float(terms.sum())


def wolff_potential(
    mu: DiscreteMeasure, x, exps: WolffExponents, window: TruncationWindow
) -> float:
    """Truncated Wolff potential at x, evaluated in closed form.

    Monotone nondecreasing as eps decreases; finite for every eps > 0 even
    at atom sites, where the untruncated integral diverges.
    """
    prof = ball_profile(mu, x)
    return _wolff_from_steps(prof.radii, prof.masses, exps, window)


def wolff_potentials_at_atoms(
    mu: DiscreteMeasure, exps: WolffExponents, window: TruncationWindow
) -> np.ndarray:
    """Vectorized wolff_potential at every atom site."""
    beta = _wolff_beta(exps)
    e = exps.dual_exp
    d = mu.distance_matrix()
    order = np.argsort(d, axis=1, kind="stable")
    sorted_d = np.take_along_axis(d, order, axis=1)
    cum = np.cumsum(mu.weights[order], axis=1)
    lo = np.clip(sorted_d, window.eps, window.outer)
    hi = np.concatenate([sorted_d[:, 1:], np.full((mu.size, 1), math.inf)], axis=1)
    hi = np.clip(hi, window.eps, window.outer)
    with np.errstate(divide="ignore"):
        drop = lo ** (-beta) - np.where(np.isinf(hi), 0.0, hi ** (-beta))
    return (cum**e * drop / beta).sum(axis=1)


def wolff_energy(
    mu: DiscreteMeasure, exps: WolffExponents, window: TruncationWindow
) -> float:
    """mu-integral of the truncated Wolff potential."""
    return float(np.dot(mu.weights, wolff_potentials_at_atoms(mu, exps, window)))


# ---------------------------------------------------------------------------
# Pointwise squared symmetrization potential and the combined energy
# ---------------------------------------------------------------------------


def symmetrization_potential_sq(
    mu: DiscreteMeasure, x, params: KernelParams, window: TruncationWindow
) -> float:
    """Double sum of the full three-point symmetrization around x.

    Sums w_j w_k sym(x, x_j, x_k) over ordered pairs of distinct atoms, both
    strictly farther than eps from x and mutually separated by more than
    eps.  This is the SQUARE of the potential entering the combined energy;
    take its square root for the potential itself.
    """
    _require_alpha_in(params, 1.0)
    _check_dims(mu, params)
    p = as_point(x, mu.n)
    eps = window.eps
    kernels, dist = _kernel_from_point(mu, p, params.alpha)
    wv = np.where(dist > eps, mu.weights, 0.0)
    sep = mu.distance_matrix() > eps
    gram = (kernels @ kernels.T) * sep
    base = float(wv @ gram @ wv)
    cross = 2.0 * float(
        np.einsum("kn,kn->", kernels * wv[:, None], _pair_field(mu, params.alpha, eps, wv))
    )
    value = base + cross
    # Each admissible pair contributes a positive term for alpha < 1, so a
    # tiny negative total is pure float noise.
    if value < -_CANCEL_RTOL * (abs(base) + abs(cross) + 1e-300):
        raise DomainError("squared potential came out negative beyond float noise")
    return max(value, 0.0)


def _pair_field(mu: DiscreteMeasure, alpha: float, eps: float, coeffs: np.ndarray) -> np.ndarray:
    """F_k = sum_j coeffs_j sep_jk k_a(x_k - x_j), accumulated over row blocks."""
    d = mu.distance_matrix()
    out = np.zeros((mu.size, mu.n))
    block = _row_block(mu.size, mu.n)
    for j0 in range(0, mu.size, block):
        j1 = min(j0 + block, mu.size)
        kernels = _kernel_rows(mu, alpha, j0, j1)  # [j, k] = k(x_k - x_j)
        mask = np.where(d[j0:j1] > eps, coeffs[j0:j1, None], 0.0)
        out += np.einsum("jkn,jk->kn", kernels, mask)
    return out


def symmetrization_potentials_sq_at_atoms(
    mu: DiscreteMeasure,
    params: KernelParams,
    window: TruncationWindow,
    mode: str = "auto",
) -> np.ndarray:
    """Squared symmetrization potential at every atom site.

    The cross terms (legs joining the two moving atoms) are accumulated
    exactly in every mode; ``fused`` only rewrites the center-leg Gram part
    as a completed square.  Tiny negative values from that cancellation are
    clamped to zero; an undershoot beyond the expected float noise raises.
    """
    _require_alpha_in(params, 1.0)
    _check_dims(mu, params)
    _warn_below_delta(window, mu)
    eps = window.eps
    alpha = params.alpha
    mode = _resolve_mode(mode, mu, eps)
    if mode == "sequential":
        return np.array(
            [symmetrization_potential_sq(mu, x, params, window) for x in mu.atoms]
        )
    d = mu.distance_matrix()
    w = mu.weights
    vis = d > eps
    n_atoms = mu.size
    n_dim = mu.n

    # Cross part: X_i = 2 sum_k (w_k vis_ik) E_ik . F^(i)_k with
    # F^(i)_k = sum_j (w_j vis_ij) sep_jk k(x_k - x_j) and E_ik = k(x_k - x_i).
    # The j-contraction is one matrix product per column block.
    cross = np.zeros(n_atoms)
    coeff = vis * w[None, :]
    col_block = _row_block(n_atoms, n_dim)
    for k0 in range(0, n_atoms, col_block):
        k1 = min(k0 + col_block, n_atoms)
        width = k1 - k0
        # rows index the full atom range, columns the slice; diffs[a, k]
        # equals x_k - x_a, serving as both the j->k and i->k kernel legs.
        diffs = mu.atoms[None, k0:k1, :] - mu.atoms[:, None, :]
        dk = d[:, k0:k1]
        with np.errstate(divide="ignore"):
            scale = dk ** (-(1.0 + alpha))
        scale[dk == 0.0] = 0.0
        e = diffs * scale[:, :, None]
        se = e * (dk > eps)[:, :, None]
        f = (coeff @ se.reshape(n_atoms, width * n_dim)).reshape(n_atoms, width, n_dim)
        cross += 2.0 * ((e * f).sum(axis=2) * coeff[:, k0:k1]).sum(axis=1)

    if mode == "direct":
        gram_part = np.empty(n_atoms)
        sep = vis
        block = max(1, (64 << 20) // max(1, n_atoms * n_atoms * 8))
        for i0 in range(0, n_atoms, block):
            i1 = min(i0 + block, n_atoms)
            kernels = _kernel_rows(mu, alpha, i0, i1)
            wv = coeff[i0:i1]
            gram = np.einsum("mjn,mkn->mjk", kernels, kernels)
            gram *= sep[None, :, :]
            t = np.einsum("mjk,mk->mj", gram, wv)
            gram_part[i0:i1] = np.einsum("mj,mj->m", t, wv)
    else:
        gram_part = _fused_center_sums(mu, alpha, eps)

    pp = gram_part + cross
    floor = -_CANCEL_RTOL * (np.abs(gram_part) + np.abs(cross) + 1e-300)
    if np.any(pp < floor):
        raise DomainError(
            "squared potential came out negative beyond cancellation slack; "
            "this indicates a numerically hostile configuration"
        )
    return np.maximum(pp, 0.0)


def maximal_potential(
    mu: DiscreteMeasure, x, params: KernelParams, window: TruncationWindow
) -> float:
    """Truncated maximal function plus the square-rooted potential at x."""
    m = maximal_function(mu, x, params.alpha, r_min=window.eps, r_max=window.outer)
    return m + math.sqrt(symmetrization_potential_sq(mu, x, params, window))


def maximal_potential_values(
    mu: DiscreteMeasure,
    params: KernelParams,
    window: TruncationWindow,
    mode: str = "auto",
) -> np.ndarray:
    """Per-atom combined potential values M_i + sqrt(pp_i)."""
    m = maximal_at_atoms(mu, params.alpha, r_min=window.eps, r_max=window.outer)
    pp = symmetrization_potentials_sq_at_atoms(mu, params, window, mode=mode)
    return m + np.sqrt(pp)


def maximal_potential_energy(
    mu: DiscreteMeasure,
    params: KernelParams,
    window: TruncationWindow,
    mode: str = "auto",
) -> float:
    """mu-integral of the combined maximal-plus-potential values.

    Scales as lambda^(-alpha) under spatial dilation by lambda (window
    scaled along, mass fixed); its reciprocal on probability measures is
    the positive-capacity proxy.
    """
    return float(
        np.dot(mu.weights, maximal_potential_values(mu, params, window, mode=mode))
    )


# ---------------------------------------------------------------------------
# Ball-mass double sum (independent third estimator)
# ---------------------------------------------------------------------------


def ball_mass_double_sum(
    mu: DiscreteMeasure, params: KernelParams, window: TruncationWindow
) -> float:
    """sum over ordered pairs i != j, d_ij > eps of w_i w_j mu(B(x_i, d_ij)) / d_ij^(2a).

    Closed-ball masses; comparable (two-sided, constants depending on alpha)
    to the triple-sum symmetrization energy.
    """
    _require_alpha_in(params, params.n)
    d = mu.distance_matrix()
    eps = window.eps
    w = mu.weights
    order = np.argsort(d, axis=1, kind="stable")
    sorted_d = np.take_along_axis(d, order, axis=1)
    cum = np.cumsum(w[order], axis=1)
    total = 0.0
    for i in range(mu.size):
        idx = np.searchsorted(sorted_d[i], d[i], side="right") - 1
        mass = cum[i][idx]
        keep = d[i] > eps
        with np.errstate(divide="ignore"):
            vals = np.where(keep, w * mass * d[i] ** (-2.0 * params.alpha), 0.0)
        total += w[i] * float(vals.sum())
    return total


# ---------------------------------------------------------------------------
# Energy report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnergyReport:
    """All energy functionals of one measure at one truncation window."""

    params: KernelParams
    window: TruncationWindow
    n_atoms: int
    symmetrization: float
    riesz_l2: float
    sup_riesz_l2: float
    wolff: float
    maximal_potential: float
    max_maximal: float

    CSV_COLUMNS = ("n", "alpha", "eps", "N_atoms", "p_alpha", "riesz_l2", "wolff",
                   "E_alpha", "M_max")

    def to_json_dict(self) -> dict:
        return {
            "n": self.params.n,
            "alpha": self.params.alpha,
            "eps": self.window.eps,
            "r_out": self.window.r_out,
            "N_atoms": self.n_atoms,
            "p_alpha": self.symmetrization,
            "riesz_l2": self.riesz_l2,
            "sup_riesz_l2": self.sup_riesz_l2,
            "wolff": self.wolff,
            "E_alpha": self.maximal_potential,
            "M_max": self.max_maximal,
        }

    def to_csv_row(self) -> tuple:
        return (
            self.params.n,
            self.params.alpha,
            self.window.eps,
            self.n_atoms,
            self.symmetrization,
            self.riesz_l2,
            self.wolff,
            self.maximal_potential,
            self.max_maximal,
        )


def default_eps_sweep(mu: DiscreteMeasure, eps: float, count: int = 24) -> np.ndarray:
    """Geometric eps grid from the window cutoff up to the diameter."""
    top = max(mu.diameter, 2.0 * eps)
    return np.geomspace(eps, top, count)


def energy_report(
    mu: DiscreteMeasure,
    params: KernelParams,
    window: TruncationWindow | None = None,
    eps_sweep=None,
    mode: str = "auto",
) -> EnergyReport:
    """Evaluate every report functional of one measure at one window.

    ``sup_riesz_l2`` maximizes the transform energy over the supplied eps
    sweep (a geometric grid up to the diameter by default); it is a finite
    surrogate for the supremum over all eps.
    """
    if window is None:
        window = TruncationWindow(mu.delta)
    _require_alpha_in(params, 1.0)
    sweep = default_eps_sweep(mu, window.eps) if eps_sweep is None else np.asarray(eps_sweep)
    sup_r = max(riesz_l2_energy(mu, params, float(e)) for e in sweep)
    exps = WolffExponents.matched(params)
    m_vals = maximal_at_atoms(mu, params.alpha, r_min=window.eps, r_max=window.outer)
    return EnergyReport(
        params=params,
        window=window,
        n_atoms=mu.size,
        symmetrization=symmetrization_energy(mu, params, window, mode=mode),
        riesz_l2=riesz_l2_energy(mu, params, window.eps),
        sup_riesz_l2=float(sup_r),
        wolff=wolff_energy(mu, exps, window),
        maximal_potential=maximal_potential_energy(mu, params, window, mode=mode),
        max_maximal=float(m_vals.max()),
    )
