import numpy as np
import pytest

from qbsim import atom_eigensystem_exact, effective_hamiltonian
from qbsim.errors import EdgeSingularity, OnBranchCut
from qbsim.spectral import (
    BandInfo,
    analytic_amplitude,
    branch_cut_integral,
    branch_cut_integrand,
    discrete_lattice_sum,
    find_bound_states,
    lattice_sum,
    long_time_probability,
)
from conftest import random_params


class TestLatticeSum:
    def test_closed_form_above_and_below(self, fig2_params):
        p = fig2_params
        n = p.n_cavities
        assert lattice_sum(p.omega0 + 3.0, p) == pytest.approx(n / np.sqrt(5.0))
        assert lattice_sum(p.omega0 - 3.0, p) == pytest.approx(-n / np.sqrt(5.0))

    def test_matches_discrete_sum(self, fig2_params):
        p = fig2_params
        e = p.omega0 + 2.1
        closed = lattice_sum(e, p)
        direct = discrete_lattice_sum(e, p)
        assert abs(closed - direct) / abs(direct) < 0.005

    def test_on_branch_cut_raises(self, fig2_params):
        with pytest.raises(OnBranchCut):
            lattice_sum(fig2_params.omega0 + 1.0, fig2_params)

    def test_branch_continuity_upper_half_plane(self, fig2_params):
        # Walk a semicircular arc from above-band to below-band through
        # Im E > 0; successive values must stay close (no branch jumps).
        p = fig2_params
        theta = np.linspace(0.0, np.pi, 400)
        path = p.omega0 + 3.0 * np.exp(1j * theta)
        vals = np.array([lattice_sum(z, p) for z in path])
        steps = np.abs(np.diff(vals))
        assert steps.max() < 5.0 * np.median(steps) + 1e-9


class TestBoundStates:
    def test_symmetric_case(self, fig2_params):
        bs = find_bound_states(fig2_params, 20.0 + 0j)
        assert bs.count == 2
        lo, hi = bs.state("below_band"), bs.state("above_band")
        # delta ~ 2.0005 xi, symmetric about omega0
        assert hi.energy.real - 20.0 == pytest.approx(2.000506, abs=1e-4)
        assert (hi.energy.real - 20.0) == pytest.approx(20.0 - lo.energy.real, abs=1e-10)
        assert hi.pole_amplitude == pytest.approx(-lo.pole_amplitude)
        assert hi.residue_weight == pytest.approx(lo.residue_weight)
        assert bs.phi == pytest.approx(hi.energy - lo.energy)

    def test_far_dark_state_gives_one_significant(self, fig3b_params):
        e1 = atom_eigensystem_exact(fig3b_params).dark_energy
        bs = find_bound_states(fig3b_params, e1)
        assert bs.count == 1
        sig = [s for s in bs.states if s.significant]
        assert sig[0].location == "above_band"

    def test_lattice_roots_match_matrix_eigenvalues(self, fig2_params):
        p = fig2_params
        for e1 in (20.0, 19.2, 21.5):
            bs = find_bound_states(p, complex(e1))
            h = effective_hamiltonian(p, "site", e1=complex(e1))
            ev = np.linalg.eigvalsh(h.real)
            out = ev[(ev < p.band_lower) | (ev > p.band_upper)]
            for s in bs.states:
                assert np.min(np.abs(out - s.lattice_energy.real)) < 1e-6

    def test_count_transitions_at_band_edges(self, fig2_params):
        p = fig2_params
        grid = np.linspace(p.omega0 - 4.0, p.omega0 + 4.0, 200)
        counts = np.array([find_bound_states(p, complex(e)).count for e in grid])
        inside = (grid > p.band_lower) & (grid < p.band_upper)
        changes = grid[np.nonzero(np.diff(counts))[0]]
        assert np.all(counts[inside] == 2)
        assert np.all(counts[~inside] <= 2)  # boundary points may straddle
        strictly_outside = (grid < p.band_lower - 0.05) | (grid > p.band_upper + 0.05)
        assert np.all(counts[strictly_outside] <= 1)
        for c in changes:
            assert min(abs(c - p.band_lower), abs(c - p.band_upper)) <= 0.05

    def test_decoupled_limit(self, fig2_params):
        p = fig2_params.replace(g1=0.0, g2=0.0)
        assert find_bound_states(p, 20.0 + 0j).n_roots == 0
        bs = find_bound_states(p, 25.0 + 0j)
        assert bs.n_roots == 1 and bs.states[0].energy == 25.0 + 0j


class TestBranchCut:
    def test_edge_singularity(self, fig2_params):
        with pytest.raises(EdgeSingularity):
            branch_cut_integrand(2.0, 0.0, fig2_params, 20.0 + 0j)

    def test_vanishes_toward_edges(self, fig2_params):
        # The g^4/(4 xi^2 - x^2) term beats the 1/sqrt prefactor: C -> 0
        # like sqrt(2 xi - x) at the edge.
        mid = abs(branch_cut_integrand(0.3, 0.0, fig2_params, 20.5 + 0j))
        closer = abs(branch_cut_integrand(2.0 - 1e-6, 0.0, fig2_params, 20.5 + 0j))
        closest = abs(branch_cut_integrand(2.0 - 1e-12, 0.0, fig2_params, 20.5 + 0j))
        assert closer < mid
        assert closest < 1e-3 * mid

    def test_sum_rule_t0(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            p = random_params(rng, kappa=0.0).replace(n_cavities=253)
            e1 = complex(rng.uniform(p.band_lower + 0.05, p.band_upper - 0.05))
            bs = find_bound_states(p, e1)
            poles = sum(s.residue_weight * s.pole_amplitude for s in bs.states)
            branch = branch_cut_integral(0.0, p, e1)
            assert abs(poles + branch) <= 1e-6

    def test_fig3a_branch_dephased_at_t50(self, fig3a_params):
        e1 = atom_eigensystem_exact(fig3a_params).dark_energy
        assert abs(branch_cut_integral(50.0, fig3a_params, e1)) < 0.02


class TestAnalyticAmplitude:
    def test_initial_completeness(self, fig2_params):
        u0 = analytic_amplitude(0.0, fig2_params, 20.3 + 0j, include_branch_cut=True)
        assert abs(u0) < 1e-6

    def test_oscillation_period_matches_phi(self, fig2_params):
        bs = find_bound_states(fig2_params, 20.0 + 0j)
        period = 2.0 * np.pi / bs.phi.real
        t = np.linspace(0.0, 4.0 * period, 4001)
        p = np.abs(analytic_amplitude(t, fig2_params, 20.0 + 0j, bound=bs)) ** 2
        # |u|^2 is periodic with the pole splitting.
        shift = int(round(period / (t[1] - t[0])))
        assert np.max(np.abs(p[shift:] - p[:-shift])) < 1e-8

    def test_single_state_monotone_tail(self, fig3b_params):
        e1 = atom_eigensystem_exact(fig3b_params).dark_energy
        bs = find_bound_states(fig3b_params, e1)
        t = np.linspace(20.0, 100.0, 501)
        sig = [s for s in bs.states if s.significant]
        p = np.abs(sig[0].residue_weight * sig[0].pole_amplitude
                   * np.exp(-1j * sig[0].energy * t)) ** 2
        assert np.all(np.diff(p) <= 0)


class TestLongTimeProbability:
    def test_symmetric_zero_at_t0(self, fig2_params):
        bs = find_bound_states(fig2_params, 20.0 + 0j)
        assert long_time_probability(0.0, bs) == pytest.approx(0.0, abs=1e-12)

    def test_symmetric_maximum_at_half_period(self, fig2_params):
        bs = find_bound_states(fig2_params, 20.0 + 0j)
        hi = bs.state("above_band")
        t_half = np.pi / bs.phi.real
        expected = 4.0 * abs(hi.pole_amplitude) ** 2 * abs(hi.residue_weight) ** 2
        assert long_time_probability(t_half, bs) == pytest.approx(expected, rel=1e-10)
