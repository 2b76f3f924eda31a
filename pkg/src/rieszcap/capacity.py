"""Capacity estimation on fixed atom supports.

Capacities are estimated through energies of probability measures carried
by the support: the reciprocal of the combined maximal-plus-potential
energy (positive-capacity route), and the reciprocal of the Wolff energy
raised to p - 1 (nonlinear Riesz-capacity route).  Atom positions stay
fixed; only the weight vector moves, by projected gradient descent on the
probability simplex.

The Wolff energy is the optimization target: for the matched exponents its
dual exponent is 2, making the objective a smooth cubic polynomial of the
weights, whereas the combined energy carries a maximal function and square
roots.  The two energies are comparable, so minimizers are interchangeable
up to constants; the combined energy is evaluated on the Wolff-optimal
witness (and optionally refined by a few subgradient steps).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .energies import (
    TruncationWindow,
    WolffExponents,
    maximal_potential_energy,
    truncated_riesz_transform,
)
from .errors import (
    DomainError,
    EmptyRestrictionError,
    UnsupportedExponentError,
)
from .kernels import KernelParams
from .measures import DiscreteMeasure, measure_to_json

METHOD_ENERGY = "max-potential-energy"
METHOD_WOLFF = "wolff-energy"
METHOD_ADMISSIBLE = "admissible-lower"


@dataclass(frozen=True)
class OptimizerConfig:
    """Projected-gradient settings.

    ``tolerance`` is the relative energy-decrease threshold that stops the
    iteration; ``step_rule`` is "backtracking" (halving from a scale-free
    initial step) or "fixed".  ``seed`` feeds any randomized initialization;
    the default start is the uniform weight vector, which is deterministic.
    """

    max_iters: int = 400
    step_rule: str = "backtracking"
    tolerance: float = 1e-10
    seed: int = 0
    step_size: float = 1.0

    def __post_init__(self):
        if self.max_iters < 1:
            raise DomainError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tolerance <= 0.0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance}")
        if self.step_rule not in ("fixed", "backtracking"):
            raise DomainError(f"unknown step rule {self.step_rule!r}")
        if self.step_size <= 0.0:
            raise DomainError(f"step_size must be positive, got {self.step_size}")


@dataclass(frozen=True)
class CapacityEstimate:
    """A capacity proxy value with its witnessing measure and diagnostics."""

    value: float
    method: str
    witness: DiscreteMeasure
    window: TruncationWindow
    diagnostics: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "window": {"eps": self.window.eps, "r_out": self.window.r_out},
            "diagnostics": dict(self.diagnostics),
            "witness": json.loads(measure_to_json(self.witness)),
        }


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sorting algorithm)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    rho = np.nonzero(u > css / np.arange(1, len(v) + 1))[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


# ---------------------------------------------------------------------------
# Wolff energy as a function of the weight vector, with analytic gradient
# ---------------------------------------------------------------------------


class _WolffObjective:
    """E(w) = sum_i w_i integral (m_i(r; w)/r^trace)^e dr/r on a fixed support.

    Precomputes, per atom row, the sorted distance order; each evaluation is
    O(N^2).  Gradient requires e >= 1 (p <= 2) so the integrand stays
    differentiable where cumulative masses vanish.
    """

    def __init__(self, support: DiscreteMeasure, exps: WolffExponents,
                 window: TruncationWindow):
        beta = exps.trace * exps.dual_exp
        if beta <= 0.0:
            raise UnsupportedExponentError(
                f"radial tail diverges: trace*dual_exp = {beta} <= 0"
            )
        if exps.dual_exp < 1.0:
            raise UnsupportedExponentError(
                "weight optimization needs dual_exp >= 1 (i.e. p <= 2); "
                f"got p = {exps.p}"
            )
        self.exps = exps
        self.beta = beta
        d = support.distance_matrix()
        self.order = np.argsort(d, axis=1, kind="stable")
        self.rank = np.argsort(self.order, axis=1, kind="stable")
        sorted_d = np.take_along_axis(d, self.order, axis=1)
        lo = np.clip(sorted_d, window.eps, window.outer)
        hi = np.concatenate(
            [sorted_d[:, 1:], np.full((support.size, 1), math.inf)], axis=1
        )
        hi = np.clip(hi, window.eps, window.outer)
        with np.errstate(divide="ignore"):
            self.drop = (lo ** (-beta) - np.where(np.isinf(hi), 0.0, hi ** (-beta))) / beta

    def potentials(self, w: np.ndarray) -> np.ndarray:
        cum = np.cumsum(w[self.order], axis=1)
        return (cum**self.exps.dual_exp * self.drop).sum(axis=1)

    def energy(self, w: np.ndarray) -> float:
        return float(np.dot(w, self.potentials(w)))

    def energy_and_gradient(self, w: np.ndarray) -> tuple:
        e = self.exps.dual_exp
        cum = np.cumsum(w[self.order], axis=1)
        pot = (cum**e * self.drop).sum(axis=1)
        # dW_i/dw_m = e * sum over pieces at radius >= d_im of m^(e-1) drop;
        # suffix sums over the sorted pieces, gathered back per atom.
        suffix = np.cumsum((cum ** (e - 1.0) * self.drop)[:, ::-1], axis=1)[:, ::-1]
        j = np.take_along_axis(suffix, self.rank, axis=1)
        grad = pot + e * (w @ j)
        return float(np.dot(w, pot)), grad


def _descend(objective, w0: np.ndarray, cfg: OptimizerConfig) -> tuple:
    """Monotone projected gradient descent; returns (w, energy, diagnostics)."""
    w = np.asarray(w0, dtype=float)
    energy, grad = objective.energy_and_gradient(w)
    iters = 0
    backtracks = 0
    converged = False
    for iters in range(1, cfg.max_iters + 1):
        gsq = float(np.dot(grad, grad))
        if gsq <= 0.0:
            converged = True
            break
        # Scale-free step: invariant under rescaling the objective, so
        # dilating the support reproduces the same iterate path.
        t = cfg.step_size * energy / gsq
        accepted = False
        for _ in range(60):
            w_new = project_to_simplex(w - t * grad)
            e_new = objective.energy(w_new)
            if e_new < energy:
                accepted = True
                break
            if cfg.step_rule == "fixed":
                break
            t *= 0.5
            backtracks += 1
        if not accepted:
            converged = True
            break
        drop = (energy - e_new) / energy
        w = w_new
        energy, grad = objective.energy_and_gradient(w)
        if drop < cfg.tolerance:
            converged = True
            break
    diag = {
        "iterations": float(iters),
        "backtracks": float(backtracks),
        "final_grad_norm": float(np.linalg.norm(grad)),
        "converged": 1.0 if converged else 0.0,
    }
    return w, energy, diag


def minimize_wolff_energy(
    support: DiscreteMeasure,
    exps: WolffExponents,
    window: TruncationWindow,
    cfg: OptimizerConfig = OptimizerConfig(),
) -> CapacityEstimate:
    """Minimize the truncated Wolff energy over probability weights.

    Returns value = 1 / E^(p-1) at the optimal weights (1/sqrt(E) for
    p = 3/2), the witnessing probability measure, and optimizer
    diagnostics.  Accepted iterations never increase the energy; if the
    iteration cap is hit the best iterate is returned with
    ``converged = 0`` in the diagnostics.
    """
    objective = _WolffObjective(support, exps, window)
    w0 = np.full(support.size, 1.0 / support.size)
    w, energy, diag = _descend(objective, w0, cfg)
    diag["energy"] = energy
    witness = support.with_weights(w)
    return CapacityEstimate(
        value=energy ** -(exps.p - 1.0),
        method=METHOD_WOLFF,
        witness=witness,
        window=window,
        diagnostics=diag,
    )


# ---------------------------------------------------------------------------
# Positive-capacity proxy through the combined energy
# ---------------------------------------------------------------------------


def estimate_positive_capacity(
    support: DiscreteMeasure,
    params: KernelParams,
    window: TruncationWindow,
    cfg: OptimizerConfig = OptimizerConfig(),
    refine: bool = False,
    mode: str = "auto",
) -> CapacityEstimate:
    """Best 1 / combined-energy over candidate probability weights.

    Candidates: uniform weights, the Wolff-optimal witness, and (with
    ``refine``) a short projected-subgradient descent of the combined
    energy itself starting from the better of the two.
    """
    params.require_fractional()
    uniform = support.with_weights(np.full(support.size, 1.0 / support.size))
    exps = WolffExponents.matched(params)
    wolff_est = minimize_wolff_energy(support, exps, window, cfg)
    candidates = [uniform, wolff_est.witness]
    energies = [
        maximal_potential_energy(m, params, window, mode=mode) for m in candidates
    ]
    diag = {
        "uniform_energy": energies[0],
        "wolff_witness_energy": energies[1],
        "wolff_iterations": wolff_est.diagnostics["iterations"],
        "refined": 0.0,
    }
    best = int(np.argmin(energies))
    witness, energy = candidates[best], energies[best]
    if refine:
        w, e_ref, _ = _refine_combined(support, params, window, witness.weights, cfg)
        if e_ref < energy:
            witness, energy = support.with_weights(w), e_ref
            diag["refined"] = 1.0
    diag["energy"] = energy
    return CapacityEstimate(
        value=1.0 / energy,
        method=METHOD_ENERGY,
        witness=witness,
        window=window,
        diagnostics=diag,
    )


def _refine_combined(support, params, window, w0, cfg, iters: int = 25):
    """Short monotone subgradient descent on the combined energy."""

    class _Objective:
        def energy(self, w):
            return maximal_potential_energy(support.with_weights(w), params, window)

        def energy_and_gradient(self, w):
            return self.energy(w), _combined_subgradient(support, params, window, w)

    small_cfg = OptimizerConfig(
        max_iters=min(cfg.max_iters, iters),
        step_rule="backtracking",
        tolerance=cfg.tolerance,
        seed=cfg.seed,
    )
    return _descend(_Objective(), w0, small_cfg)


def _combined_subgradient(support, params, window, w) -> np.ndarray:
    """Subgradient of sum_i w_i (M_i + sqrt(pp_i)) in the weights."""
    from .energies import symmetrization_potentials_sq_at_atoms

    mu = support.with_weights(w)
    alpha = params.alpha
    d = mu.distance_matrix()
    order = np.argsort(d, axis=1, kind="stable")
    sorted_d = np.take_along_axis(d, order, axis=1)
    cum = np.cumsum(mu.weights[order], axis=1)
    r = np.clip(sorted_d, window.eps, window.outer)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where((cum > 0.0) & (sorted_d <= window.outer), cum / r**alpha, 0.0)
    best = np.argmax(vals, axis=1)
    m_vals = vals[np.arange(mu.size), best]
    r_star = r[np.arange(mu.size), best]
    # dM_i/dw_m = [d_im <= r*_i] / r*_i^alpha at the attaining radius.
    ind = d <= r_star[:, None]
    grad_m_term = m_vals + (mu.weights * (1.0 / r_star**alpha)) @ ind
    pp = symmetrization_potentials_sq_at_atoms(mu, params, window, mode="auto")
    root = np.sqrt(pp)
    u = np.where(root > 0.0, 0.5 * mu.weights / np.maximum(root, 1e-300), 0.0)
    bilinear = _pp_bilinear_at_atoms(mu, params, window, u)
    return grad_m_term + root + 2.0 * bilinear


def _pp_bilinear_at_atoms(mu, params, window, left) -> np.ndarray:
    """B_m = sum_{i,k} left_i w_k sym(x_m, x_i, x_k) over separated triples."""
    from .energies import _kernel_rows

    eps = window.eps
    d = mu.distance_matrix()
    vis = d > eps
    w = mu.weights
    out = np.empty(mu.size)
    lcoef = np.where(vis, left[None, :], 0.0)
    rcoef = np.where(vis, w[None, :], 0.0)
    for m in range(mu.size):
        kernels = _kernel_rows(mu, params.alpha, m, m + 1)[0]  # k(x_j - x_m)
        lc = lcoef[m]
        rc = rcoef[m]
        gram = (kernels @ kernels.T) * vis
        base = lc @ gram @ rc
        # cross legs between the two moving atoms
        f_r = _field(mu, params.alpha, eps, rc)
        f_l = _field(mu, params.alpha, eps, lc)
        cross = float(np.einsum("kn,kn->", kernels * lc[:, None], f_r)) + float(
            np.einsum("kn,kn->", kernels * rc[:, None], f_l)
        )
        out[m] = base + cross
    return out


def _field(mu, alpha, eps, coeffs) -> np.ndarray:
    from .energies import _pair_field

    return _pair_field(mu, alpha, eps, coeffs)


# ---------------------------------------------------------------------------
# Chebyshev restriction
# ---------------------------------------------------------------------------


def chebyshev_restrict(
    mu: DiscreteMeasure, potential_values, t: float
) -> DiscreteMeasure:
    """Restrict a probability measure to atoms with potential <= t, renormalized.

    Markov's inequality guarantees the retained pre-normalization mass is at
    least 1 - E/t, where E is the weighted mean of the potential values; at
    t = 2E at least half the mass survives.
    """
    vals = np.asarray(potential_values, dtype=float).reshape(-1)
    if vals.shape[0] != mu.size:
        raise DomainError(
            f"{vals.shape[0]} potential values for {mu.size} atoms"
        )
    if np.any(vals < 0.0) or not np.all(np.isfinite(vals)):
        raise DomainError("potential values must be finite and nonnegative")
    if t <= 0.0:
        raise DomainError(f"threshold must be positive, got {t}")
    if abs(mu.total_mass - 1.0) > 1e-9:
        raise DomainError("restriction expects a probability measure")
    keep = vals <= t
    if not keep.any():
        raise EmptyRestrictionError(f"no atom has potential <= {t}")
    retained = float(mu.weights[keep].sum())
    if retained <= 0.0:
        raise EmptyRestrictionError("retained atoms carry zero mass")
    return DiscreteMeasure(
        mu.atoms[keep], mu.weights[keep] / retained, delta=mu.delta
    )


# ---------------------------------------------------------------------------
# Admissible lower bound
# ---------------------------------------------------------------------------


def admissible_grid(
    mu: DiscreteMeasure, eps: float, extra=None, displacement: float = 2.0
) -> np.ndarray:
    """Near-field evaluation grid: atoms displaced along +-coordinate axes.

    The displacement is ``displacement * eps`` (strictly more than eps, so a
    displaced point still sees its anchor atom through the strict cutoff);
    points that land within eps of any atom are dropped.  User points in
    ``extra`` are appended and filtered the same way.
    """
    if displacement <= 1.0:
        raise DomainError("displacement must exceed 1 (in units of eps)")
    shifts = np.vstack([np.eye(mu.n), -np.eye(mu.n)]) * (displacement * eps)
    pts = (mu.atoms[:, None, :] + shifts[None, :, :]).reshape(-1, mu.n)
    if extra is not None:
        extra = np.atleast_2d(np.asarray(extra, dtype=float))
        pts = np.vstack([pts, extra])
    dmin = np.min(
        np.linalg.norm(pts[:, None, :] - mu.atoms[None, :, :], axis=2), axis=1
    )
    return pts[dmin >= eps]


def admissible_lower_bound(
    mu: DiscreteMeasure,
    params: KernelParams,
    eval_points,
    eps: float,
) -> CapacityEstimate:
    """Lower-bound proxy from the componentwise sup of the truncated transform.

    Rescales mu so every transform component stays within 1 on the grid and
    reports the rescaled total mass.  This is an eps-resolution surrogate:
    the true sup over all of R^n is infinite for atomic measures, so the
    value is meaningful only relative to the smearing scale eps.
    """
    pts = np.atleast_2d(np.asarray(eval_points, dtype=float))
    if pts.shape[0] == 0:
        raise DomainError("evaluation grid is empty")
    if pts.shape[1] != mu.n:
        raise DomainError(f"grid dimension {pts.shape[1]} != measure dimension {mu.n}")
    dmin = np.min(
        np.linalg.norm(pts[:, None, :] - mu.atoms[None, :, :], axis=2), axis=1
    )
    if np.any(dmin < eps * (1.0 - 1e-12)):
        raise DomainError("an evaluation point lies inside an eps-ball of an atom")
    b = 0.0
    for p in pts:
        r = truncated_riesz_transform(mu, p, params, eps)
        b = max(b, float(np.max(np.abs(r))))
    if b == 0.0:
        raise DomainError(
            "the truncated transform vanishes on the whole grid; "
            "the admissible bound is degenerate there"
        )
    window = TruncationWindow(eps)
    return CapacityEstimate(
        value=mu.total_mass / b,
        method=METHOD_ADMISSIBLE,
        witness=mu.with_weights(mu.weights / b),
        window=window,
        diagnostics={"sup_component": b, "eval_points": float(len(pts))},
    )


# ---------------------------------------------------------------------------
# Comparability and bilipschitz experiments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComparabilityReport:
    """The two capacity proxies of one support and their ratio."""

    energy_proxy: CapacityEstimate
    wolff_proxy: CapacityEstimate

    @property
    def ratio(self) -> float:
        return self.energy_proxy.value / self.wolff_proxy.value


def comparability_report(
    support: DiscreteMeasure,
    alpha: float,
    window: TruncationWindow,
    cfg: OptimizerConfig = OptimizerConfig(),
    mode: str = "auto",
) -> ComparabilityReport:
    """Evaluate both capacity proxies on the same support and window."""
    params = KernelParams(alpha, support.n)
    exps = WolffExponents.matched(params)
    wolff_est = minimize_wolff_energy(support, exps, window, cfg)
    energy_est = estimate_positive_capacity(support, params, window, cfg, mode=mode)
    return ComparabilityReport(energy_proxy=energy_est, wolff_proxy=wolff_est)


@dataclass(frozen=True)
class PlanarMap:
    """A registered bilipschitz self-map of the plane.

    ``distortion`` is (an upper bound on) the Lipschitz constant L of the
    map and its inverse; ``scale_hint`` is the global scale factor used to
    rescale truncation windows (1 except for pure dilations).
    """

    name: str
    distortion: float
    scale_hint: float
    fn: object

    def apply(self, atoms: np.ndarray) -> np.ndarray:
        return np.apply_along_axis(lambda p: np.asarray(self.fn(p), dtype=float), 1, atoms)


def _shear_sine(p):
    return (p[0], p[1] + 0.3 * math.sin(p[0]))


_ROT = math.sqrt(0.5)

PLANAR_MAPS = {
    "identity": PlanarMap("identity", 1.0, 1.0, lambda p: (p[0], p[1])),
    "shear_sine": PlanarMap("shear_sine", 1.17, 1.0, _shear_sine),
    "rotation": PlanarMap(
        "rotation", 1.0, 1.0,
        lambda p: (_ROT * p[0] - _ROT * p[1] + 0.25, _ROT * p[0] + _ROT * p[1] - 0.5),
    ),
    "dilation_2": PlanarMap("dilation_2", 2.0, 2.0, lambda p: (2.0 * p[0], 2.0 * p[1])),
    "dilation_half": PlanarMap(
        "dilation_half", 2.0, 0.5, lambda p: (0.5 * p[0], 0.5 * p[1])
    ),
}


@dataclass(frozen=True)
class BilipschitzResult:
    map_name: str
    distortion: float
    scale_hint: float
    before: float
    after: float

    @property
    def ratio(self) -> float:
        return self.after / self.before


def bilipschitz_experiment(
    support: DiscreteMeasure,
    map_id: str,
    alpha: float,
    window: TruncationWindow,
    cfg: OptimizerConfig = OptimizerConfig(),
) -> BilipschitzResult:
    """Positive-capacity proxy before and after a registered planar map.

    The truncation window is rescaled by the map's scale hint, so pure
    dilations report the clean homogeneity ratio while shape-distorting
    maps are compared at the same truncation.
    """
    if support.n != 2:
        raise DomainError("bilipschitz experiments are planar (n = 2)")
    if map_id not in PLANAR_MAPS:
        raise DomainError(
            f"unknown map {map_id!r}; registered: {sorted(PLANAR_MAPS)}"
        )
    pm = PLANAR_MAPS[map_id]
    params = KernelParams(alpha, 2)
    before = estimate_positive_capacity(support, params, window, cfg)
    mapped_atoms = pm.apply(support.atoms)
    mapped = DiscreteMeasure(mapped_atoms, support.weights, delta=None)
    mapped = DiscreteMeasure(
        mapped_atoms,
        support.weights,
        delta=min(support.delta * pm.scale_hint, mapped.min_gap),
    )
    after = estimate_positive_capacity(mapped, params, window.scaled(pm.scale_hint), cfg)
    return BilipschitzResult(
        map_name=pm.name,
        distortion=pm.distortion,
        scale_hint=pm.scale_hint,
        before=before.value,
        after=after.value,
    )
