"""
Test contact detection, the stochastic coalescence pass and the
pure-coalescence references.
"""

import numpy as np
import pytest
from scipy import stats

from cloudrain.coalescence import (
    brute_force_contact_pairs,
    coalesce_pass,
    find_contact_pairs,
    gillespie_run,
    pair_rates,
    stepped_coalescence_run,
    tn_delta_rate,
)
from cloudrain.core import make_generator, radius_from_volume, volume_from_radius
from cloudrain.types import (
    CoalescenceParams,
    KernelRateParams,
    Particle,
    ParticleSet,
)


class TestFindContactPairs:
    """Test cases for find_contact_pairs."""

    def test_matches_brute_force(self, random_particles, domain):
        assert find_contact_pairs(random_particles, domain) == brute_force_contact_pairs(
            random_particles, domain
        )

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force_dense(self, seed, domain):
        gen = make_generator(seed)
        n = 400
        positions = gen.uniform(-2, 2, size=(n, 2))
        volumes = volume_from_radius(gen.uniform(0.01, 0.06, size=n))
        particles = ParticleSet.from_arrays(positions, volumes)
        pairs = find_contact_pairs(particles, domain)
        assert pairs == brute_force_contact_pairs(particles, domain)
        assert len(pairs) > 0

    def test_large_particles_use_brute_force_path(self, domain):
        volumes = volume_from_radius(np.array([0.9, 0.1, 0.1]))
        particles = ParticleSet.from_arrays([[0, 0], [0.95, 0], [1.5, 1.5]], volumes)
        assert find_contact_pairs(particles, domain) == [(0, 1, pytest.approx(0.95))]

    def test_pair_across_boundary(self, domain):
        volumes = np.full(2, volume_from_radius(0.02))
        particles = ParticleSet.from_arrays([[1.99, 0.0], [-1.99, 0.0]], volumes)
        pairs = find_contact_pairs(particles, domain)
        assert [(i, j) for i, j, _ in pairs] == [(0, 1)]
        assert pairs[0][2] == pytest.approx(0.02, abs=1e-12)

    def test_exact_contact_is_inclusive(self, domain):
        volumes = np.array([volume_from_radius(0.01), volume_from_radius(0.02)])
        r = radius_from_volume(volumes)
        particles = ParticleSet.from_arrays([[0.0, 0.0], [r[0] + r[1], 0.0]], volumes)
        assert len(find_contact_pairs(particles, domain)) == 1

    def test_sorted_by_distance(self, random_particles, domain):
        dists = [d for _, _, d in find_contact_pairs(random_particles, domain)]
        assert dists == sorted(dists)

    def test_removed_particles_ignored(self, domain):
        volumes = np.array([volume_from_radius(0.02), 0.0])
        particles = ParticleSet.from_arrays(np.zeros((2, 2)), volumes)
        assert find_contact_pairs(particles, domain) == []


class TestCoalescePass:
    """Test cases for coalesce_pass."""

    def test_larger_absorbs(self, rng):
        particles = ParticleSet.from_arrays([[0, 0], [0.01, 0]], [1.0, 2.0])
        merged, events = coalesce_pass(particles, [(0, 1, 0.01)], CoalescenceParams(), rng)
        assert merged.volumes.tolist() == [0.0, 3.0]
        assert merged.alive.tolist() == [False, True]
        assert (events[0].absorber_id, events[0].absorbed_id) == (1, 0)
        np.testing.assert_array_equal(merged.positions, particles.positions)

    def test_tie_goes_to_lower_index(self, rng):
        particles = ParticleSet.from_arrays(np.zeros((2, 2)), [1.0, 1.0])
        merged, events = coalesce_pass(particles, [(0, 1, 0.0)], CoalescenceParams(), rng)
        assert events[0].absorber_id == 0
        assert merged.volumes.tolist() == [2.0, 0.0]

    def test_chain_skips_removed_member(self, rng):
        particles = ParticleSet.from_arrays(np.zeros((3, 2)), [2.0, 1.0, 1.5])
        pairs = [(0, 1, 0.0), (1, 2, 0.0), (0, 2, 0.0)]
        merged, events = coalesce_pass(particles, pairs, CoalescenceParams(), rng)
        assert [(e.absorber_id, e.absorbed_id) for e in events] == [(0, 1), (0, 2)]
        assert merged.volumes[0] == 4.5
        assert merged.n_alive == 1

    def test_p_mean_one_never_merges(self, random_particles, domain, rng):
        pairs = find_contact_pairs(random_particles, domain)
        merged, events = coalesce_pass(
            random_particles, pairs, CoalescenceParams(p_mean=1.0), rng
        )
        assert events == []
        np.testing.assert_array_equal(merged.volumes, random_particles.volumes)

    def test_volume_conserved(self, random_particles, domain, rng):
        pairs = find_contact_pairs(random_particles, domain)
        merged, events = coalesce_pass(random_particles, pairs, CoalescenceParams(), rng)
        assert len(events) > 0
        assert merged.volumes.sum() == pytest.approx(random_particles.volumes.sum(), rel=1e-12)

    def test_bounce_probability(self):
        particles = ParticleSet.from_arrays(np.zeros((2, 2)), [1.0, 1.0])
        gen = make_generator(11)
        merges = sum(
            len(coalesce_pass(particles, [(0, 1, 0.0)], CoalescenceParams(p_mean=0.3), gen)[1])
            for _ in range(4000)
        )
        assert merges / 4000 == pytest.approx(0.7, abs=0.03)

    def test_events_carry_time_and_epoch(self, rng):
        particles = ParticleSet.from_arrays(np.zeros((2, 2)), [1.0, 1.0])
        _, events = coalesce_pass(
            particles, [(0, 1, 0.0)], CoalescenceParams(), rng, time=0.5, epoch=7
        )
        assert (events[0].time, events[0].epoch, events[0].volume_after) == (0.5, 7, 2.0)


class TestPairRates:
    """Test cases for tn_delta_rate and pair_rates."""

    def test_coincident_pair_rate(self, domain):
        i = Particle(id=0, position=(0.0, 0.0), volume=1.0)
        j = Particle(id=1, position=(0.0, 0.0), volume=1.0)
        kp = KernelRateParams(delta=1.0, n_scale=2)
        assert tn_delta_rate(i, j, kp, domain) == pytest.approx(0.25)

    def test_removed_particle_rate(self, domain):
        i = Particle(id=0, position=(0.0, 0.0), volume=1.0)
        j = Particle(id=1, position=(0.0, 0.0), volume=0.0, alive=False)
        assert tn_delta_rate(i, j, KernelRateParams(delta=1.0, n_scale=2), domain) == 0.0

    def test_vectorised_rates_match_scalar(self, domain, rng):
        particles = ParticleSet.from_arrays(rng.uniform(-0.5, 0.5, (8, 2)), rng.uniform(0.1, 1, 8))
        kp = KernelRateParams(delta=0.3, n_scale=8, efficiency=lambda v, w: v + w)
        i, j, _, rates = pair_rates(particles, kp, domain)
        for a, b, rate in zip(i, j, rates):
            expected = tn_delta_rate(particles.particle(a), particles.particle(b), kp, domain)
            assert rate == pytest.approx(expected)

    def test_pair_guard(self, domain):
        particles = ParticleSet.from_arrays(np.zeros((142, 2)), np.ones(142))
        with pytest.raises(ValueError, match="Invalid Oracle Size"):
            pair_rates(particles, KernelRateParams(delta=1.0, n_scale=142), domain)


class TestPureCoalescence:
    """Test cases for gillespie_run and stepped_coalescence_run."""

    def test_first_pair_uniform(self):
        particles = ParticleSet.from_arrays(np.zeros((3, 2)), np.ones(3))
        kp = KernelRateParams(delta=1.0, n_scale=3)
        counts = {(0, 1): 0, (0, 2): 0, (1, 2): 0}
        for r in range(3000):
            _, events = gillespie_run(particles, kp, 1e6, make_generator(1, r))
            first = events[0]
            counts[tuple(sorted((first.absorber_id, first.absorbed_id)))] += 1
        _, p_value = stats.chisquare(list(counts.values()))
        assert p_value > 0.001

    def test_single_pair_waiting_time(self):
        # coincident pair, k = 1, delta = 1, N = 2: rate 1/4, mean wait 4
        particles = ParticleSet.from_arrays(np.zeros((2, 2)), np.ones(2))
        kp = KernelRateParams(delta=1.0, n_scale=2)
        waits = [
            gillespie_run(particles, kp, 1e9, make_generator(4, r))[1][0].time
            for r in range(10_000)
        ]
        assert np.mean(waits) == pytest.approx(4.0, rel=0.03)

    def test_zero_horizon(self):
        particles = ParticleSet.from_arrays(np.zeros((3, 2)), np.ones(3))
        _, events = gillespie_run(
            particles, KernelRateParams(delta=1.0, n_scale=3), 0.0, make_generator(0)
        )
        assert events == []

    def test_out_of_range_never_merges(self):
        particles = ParticleSet.from_arrays([[0, 0], [1, 1]], [1e-6, 1e-6])
        kp = KernelRateParams(delta=0.01, n_scale=2)
        for run in (
            lambda: gillespie_run(particles, kp, 10.0, make_generator(0)),
            lambda: stepped_coalescence_run(particles, kp, 10.0, 0.01, make_generator(0)),
        ):
            state, events = run()
            assert events == [] and state.n_alive == 2

    def test_runs_until_one_left(self):
        particles = ParticleSet.from_arrays(np.zeros((5, 2)), np.ones(5))
        state, events = gillespie_run(
            particles, KernelRateParams(delta=1.0, n_scale=5), 1e9, make_generator(2)
        )
        assert state.n_alive == 1 and len(events) == 4
        assert state.volumes.sum() == 5.0
        times = [e.time for e in events]
        assert times == sorted(times)

    def test_stepped_events_on_grid(self):
        particles = ParticleSet.from_arrays(np.zeros((4, 2)), np.ones(4))
        _, events = stepped_coalescence_run(
            particles, KernelRateParams(delta=1.0, n_scale=4), 5.0, 0.01, make_generator(3)
        )
        assert events
        for e in events:
            assert e.time == pytest.approx(e.epoch * 0.01)

    def test_stepped_agrees_with_gillespie_small(self):
        particles = ParticleSet.from_arrays(np.zeros((4, 2)), np.ones(4))
        kp = KernelRateParams(delta=1.0, n_scale=4)
        exact = np.mean(
            [len(gillespie_run(particles, kp, 2.0, make_generator(5, r))[1]) for r in range(3000)]
        )
        stepped = np.mean(
            [
                len(stepped_coalescence_run(particles, kp, 2.0, 0.01, make_generator(6, r))[1])
                for r in range(3000)
            ]
        )
        assert stepped == pytest.approx(exact, rel=0.1)