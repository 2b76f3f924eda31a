import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_random_measure
from rieszcap.capacity import (
    METHOD_ADMISSIBLE,
    METHOD_ENERGY,
    METHOD_WOLFF,
    OptimizerConfig,
    PLANAR_MAPS,
    admissible_grid,
    admissible_lower_bound,
    bilipschitz_experiment,
    chebyshev_restrict,
    comparability_report,
    estimate_positive_capacity,
    minimize_wolff_energy,
    project_to_simplex,
)
from rieszcap.defaults import THRESHOLDS
from rieszcap.energies import (
    TruncationWindow,
    WolffExponents,
    maximal_potential_energy,
    wolff_energy,
    wolff_potentials_at_atoms,
)
from rieszcap.errors import DomainError, EmptyRestrictionError
from rieszcap.experiments import semiadditivity_probe
from rieszcap.kernels import KernelParams
from rieszcap.measures import DiscreteMeasure, cantor_measure, cantor_spec_for_dimension

P2 = KernelParams(0.5, 2)
MATCHED = WolffExponents.matched(P2)


class TestSimplexProjection:
    def test_already_on_simplex(self, rng):
        w = rng.uniform(0.1, 1.0, 6)
        w /= w.sum()
        assert np.allclose(project_to_simplex(w), w, atol=1e-14)

    def test_feasibility(self, rng):
        for _ in range(100):
            v = rng.uniform(-3, 3, int(rng.integers(1, 10)))
            p = project_to_simplex(v)
            assert p.min() >= 0.0
            assert p.sum() == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(
            st.floats(min_value=-50.0, max_value=50.0, allow_nan=False),
            min_size=1,
            max_size=12,
        )
    )
    def test_feasibility_property(self, values):
        p = project_to_simplex(np.array(values))
        assert p.min() >= 0.0
        assert abs(p.sum() - 1.0) <= 1e-12
        # projecting twice is a no-op
        assert np.allclose(project_to_simplex(p), p, atol=1e-12)

    def test_is_nearest_point(self, rng):
        # brute-force check on a fine simplex grid in 3d
        v = rng.uniform(-1, 2, 3)
        p = project_to_simplex(v)
        best = None
        grid = np.linspace(0, 1, 101)
        for a in grid:
            for b in grid[grid <= 1 - a + 1e-12]:
                q = np.array([a, b, 1 - a - b])
                if q[2] < -1e-12:
                    continue
                dist = np.sum((v - q) ** 2)
                if best is None or dist < best[0]:
                    best = (dist, q)
        assert np.allclose(p, best[1], atol=2e-2)
        assert np.sum((v - p) ** 2) <= best[0] + 1e-12


class TestWolffMinimization:
    def test_single_atom(self):
        mu = DiscreteMeasure([[0.0, 0.0]], [1.0], delta=1.0)
        est = minimize_wolff_energy(mu, MATCHED, TruncationWindow(1.0))
        assert est.witness.weights.tolist() == [1.0]
        assert est.method == METHOD_WOLFF
        # value = 1/sqrt(self energy at eps) = sqrt(2 alpha) eps^alpha
        assert est.value == pytest.approx(1.0, rel=1e-12)

    def test_two_symmetric_atoms(self):
        mu = DiscreteMeasure([[-0.5, 0.0], [0.5, 0.0]], np.ones(2), delta=0.2)
        est = minimize_wolff_energy(mu, MATCHED, TruncationWindow(0.2))
        assert np.allclose(est.witness.weights, [0.5, 0.5], atol=1e-6)
        assert est.value == pytest.approx(
            est.diagnostics["energy"] ** -0.5, rel=1e-10
        )

    def test_cantor_descent_beats_uniform(self):
        mu = cantor_measure(cantor_spec_for_dimension(2, 0.75, 3))
        window = TruncationWindow(mu.delta)
        est = minimize_wolff_energy(mu, MATCHED, window, OptimizerConfig(max_iters=300))
        uniform = wolff_energy(mu, MATCHED, window)
        assert est.diagnostics["energy"] <= uniform * (1 + 1e-12)
        w = est.witness.weights
        assert w.sum() == pytest.approx(1.0, abs=1e-12)
        assert w.min() >= -1e-15

    def test_witness_energy_matches_value(self, rng):
        mu = make_random_measure(rng, 9)
        window = TruncationWindow(0.05)
        est = minimize_wolff_energy(mu, MATCHED, window)
        recomputed = wolff_energy(est.witness, MATCHED, window)
        assert est.value == pytest.approx(recomputed**-0.5, rel=1e-10)

    def test_fixed_step_rule_descends(self, rng):
        mu = make_random_measure(rng, 9)
        window = TruncationWindow(0.05)
        cfg = OptimizerConfig(max_iters=50, step_rule="fixed", step_size=0.05)
        est = minimize_wolff_energy(mu, MATCHED, window, cfg)
        assert est.diagnostics["energy"] <= wolff_energy(mu, MATCHED, window) * (
            1 + 1e-12
        )

    def test_unsupported_p_above_two(self):
        from rieszcap.errors import UnsupportedExponentError

        mu = DiscreteMeasure([[0.0, 0.0], [1.0, 0.0]], np.ones(2), delta=0.5)
        with pytest.raises(UnsupportedExponentError):
            minimize_wolff_energy(
                mu, WolffExponents(s=0.3, p=2.5, n=2), TruncationWindow(0.5)
            )


class TestPositiveCapacity:
    def test_single_atom_value_one(self):
        mu = DiscreteMeasure([[0.0, 0.0]], [1.0], delta=1.0)
        est = estimate_positive_capacity(mu, P2, TruncationWindow(1.0))
        assert est.value == pytest.approx(1.0, rel=1e-12)
        assert est.method == METHOD_ENERGY

    def test_value_is_reciprocal_witness_energy(self, rng):
        mu = make_random_measure(rng, 10)
        window = TruncationWindow(0.05)
        est = estimate_positive_capacity(mu, P2, window)
        energy = maximal_potential_energy(est.witness, P2, window)
        assert est.value == pytest.approx(1.0 / energy, rel=1e-10)

    def test_dilation_covariance(self, rng):
        mu = make_random_measure(rng, 8)
        window = TruncationWindow(0.06)
        base = estimate_positive_capacity(mu, P2, window).value
        lam = 2.0
        scaled = estimate_positive_capacity(
            mu.dilated(lam), P2, window.scaled(lam)
        ).value
        assert scaled == pytest.approx(base * lam**0.5, rel=1e-6)

    def test_refinement_never_worse(self, rng):
        mu = make_random_measure(rng, 8)
        window = TruncationWindow(0.08)
        plain = estimate_positive_capacity(mu, P2, window)
        refined = estimate_positive_capacity(mu, P2, window, refine=True)
        assert refined.value >= plain.value * (1 - 1e-12)


class TestChebyshevRestriction:
    def test_keep_everything_at_double_mean(self):
        mu = DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5], delta=0.5)
        out = chebyshev_restrict(mu, [3.0, 3.0], 6.0)
        assert out.size == 2
        assert out.total_mass == pytest.approx(1.0)

    def test_two_level_example(self):
        mu = DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5], delta=0.5)
        # potentials (1, 3): mean E = 2
        kept_all = chebyshev_restrict(mu, [1.0, 3.0], 4.0)
        assert kept_all.size == 2
        dropped = chebyshev_restrict(mu, [1.0, 3.0], 2.0)
        assert dropped.size == 1
        assert dropped.weights.tolist() == [1.0]
        # pre-normalization retained mass was exactly 1/2 = 1 - E/t

    def test_markov_guarantee_random(self, rng):
        for _ in range(50):
            mu = make_random_measure(rng, 15).normalized()
            vals = rng.uniform(0.0, 4.0, mu.size)
            energy = float(np.dot(mu.weights, vals))
            t = float(rng.uniform(1.1, 5.0)) * energy
            retained = float(mu.weights[vals <= t].sum())
            assert retained >= 1.0 - energy / t - 1e-12
            chebyshev_restrict(mu, vals, t)  # must not raise

    def test_empty_restriction_raises(self):
        mu = DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5], delta=0.5)
        with pytest.raises(EmptyRestrictionError):
            chebyshev_restrict(mu, [5.0, 6.0], 1.0)

    def test_requires_probability(self):
        mu = DiscreteMeasure([[0.0], [1.0]], [1.0, 1.0], delta=0.5)
        with pytest.raises(DomainError):
            chebyshev_restrict(mu, [1.0, 1.0], 3.0)

    def test_restricted_wolff_growth_bound(self, rng):
        # Restrict at t = 2E, then confirm the renormalized measure keeps
        # its truncated potentials below t / retained^2 and satisfies the
        # dyadic growth bound with margin against 18E.
        mu = make_random_measure(rng, 20).normalized()
        window = TruncationWindow(0.05)
        pots = wolff_potentials_at_atoms(mu, MATCHED, window)
        energy = float(np.dot(mu.weights, pots))
        t = 2.0 * energy
        keep = pots <= t
        retained = float(mu.weights[keep].sum())
        assert retained >= 0.5 - 1e-12
        nu = chebyshev_restrict(mu, pots, t)
        nu_pots = wolff_potentials_at_atoms(nu, MATCHED, window)
        assert nu_pots.max() <= t / retained**2 * (1 + 1e-10)
        # dyadic growth: C_alpha (nu(B(x, r))/r^alpha)^2 <= 18 E
        alpha = 0.5
        c_alpha = (1.0 - 2.0 ** (-2 * alpha)) / (2 * alpha)
        from rieszcap.measures import maximal_at_atoms

        m_vals = maximal_at_atoms(nu, alpha, r_min=window.eps)
        assert c_alpha * float(m_vals.max()) ** 2 <= 18.0 * energy * (1 + 1e-10)


class TestAdmissibleLowerBound:
    def test_single_atom_unit_sphere(self):
        mu = DiscreteMeasure([[0.0, 0.0]], [1.0], delta=1.0)
        pts = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [0.6, 0.8]]
        est = admissible_lower_bound(mu, P2, pts, eps=0.5)
        assert est.method == METHOD_ADMISSIBLE
        assert est.value == pytest.approx(1.0, rel=1e-12)
        assert est.diagnostics["sup_component"] == pytest.approx(1.0, rel=1e-12)

    def test_symmetric_pair_cancels_at_midpoint(self):
        mu = DiscreteMeasure([[-1.0, 0.0], [1.0, 0.0]], np.ones(2), delta=0.5)
        with pytest.raises(DomainError):
            # the transform vanishes exactly at the midpoint: degenerate grid
            admissible_lower_bound(mu, P2, [[0.0, 0.0]], eps=0.5)
        pts = [[0.0, 0.0], [2.0, 0.0]]
        est = admissible_lower_bound(mu, P2, pts, eps=0.5)
        assert est.value > 0.0  # the sup is attained elsewhere on the grid

    def test_point_inside_eps_ball_rejected(self):
        mu = DiscreteMeasure([[0.0, 0.0]], [1.0], delta=1.0)
        with pytest.raises(DomainError):
            admissible_lower_bound(mu, P2, [[0.1, 0.0]], eps=0.5)

    def test_default_grid_sees_anchor(self):
        mu = DiscreteMeasure([[0.0, 0.0]], [1.0], delta=1.0)
        pts = admissible_grid(mu, eps=0.25)
        assert len(pts) == 4
        est = admissible_lower_bound(mu, P2, pts, eps=0.25)
        # anchor at distance 2 eps: |k| = (2 eps)^(-alpha)
        assert est.diagnostics["sup_component"] == pytest.approx(
            (0.5) ** -0.5 * 0.0 + (2 * 0.25) ** -0.5, rel=1e-12
        )

    def test_cross_method_ratio_reported(self, rng):
        mu = cantor_measure(cantor_spec_for_dimension(2, 0.75, 2))
        window = TruncationWindow(mu.delta)
        grid = admissible_grid(mu, window.eps)
        adm = admissible_lower_bound(mu, P2, grid, window.eps)
        proxy = estimate_positive_capacity(mu, P2, window)
        ratio = adm.value / proxy.value
        assert math.isfinite(ratio) and ratio > 0.0


class TestComparabilityAndMaps:
    def test_single_atom_ratio_finite(self):
        mu = DiscreteMeasure([[0.0, 0.0]], [1.0], delta=1.0)
        rep = comparability_report(mu, 0.5, TruncationWindow(1.0))
        assert math.isfinite(rep.ratio) and rep.ratio > 0.0

    def test_dilation_leaves_ratio_fixed(self, rng):
        mu = make_random_measure(rng, 9)
        window = TruncationWindow(0.07)
        r0 = comparability_report(mu, 0.5, window).ratio
        r1 = comparability_report(mu.dilated(5.0), 0.5, window.scaled(5.0)).ratio
        assert r1 == pytest.approx(r0, rel=1e-4)

    def test_identity_map_ratio_one(self):
        mu = cantor_measure(cantor_spec_for_dimension(2, 0.7, 2))
        res = bilipschitz_experiment(mu, "identity", 0.5, TruncationWindow(mu.delta))
        assert res.ratio == 1.0

    def test_pure_dilation_matches_homogeneity(self):
        mu = cantor_measure(cantor_spec_for_dimension(2, 0.7, 2))
        res = bilipschitz_experiment(mu, "dilation_2", 0.5, TruncationWindow(mu.delta))
        assert res.ratio == pytest.approx(2.0**0.5, rel=1e-4)

    def test_shear_within_recorded_bound(self):
        mu = cantor_measure(cantor_spec_for_dimension(2, 0.75, 4))
        res = bilipschitz_experiment(mu, "shear_sine", 0.5, TruncationWindow(mu.delta))
        bound = THRESHOLDS["bilipschitz_bounds"]["shear_sine"]
        assert 1.0 / bound <= res.ratio <= bound

    def test_unknown_map_rejected(self):
        mu = DiscreteMeasure([[0.0, 0.0]], [1.0], delta=1.0)
        with pytest.raises(DomainError):
            bilipschitz_experiment(mu, "banana", 0.5, TruncationWindow(1.0))

    def test_registry_contents(self):
        assert {"identity", "shear_sine", "rotation", "dilation_2",
                "dilation_half"} <= set(PLANAR_MAPS)

    def test_semiadditivity_probe(self):
        out = semiadditivity_probe(0.6, depth=2)
        assert out["union"] <= THRESHOLDS["semiadditivity_factor"] * (
            out["part_1"] + out["part_2"]
        )
