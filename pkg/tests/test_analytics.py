import math
from fractions import Fraction

import mpmath
import pytest

from tracelab import (FieldDesc, PreconditionError, QQ, QuadElem,
                      RingOfIntegers, catalog, cluster_counts,
                      delta_c_cluster_witness, delta_c_set, dn_set,
                      enumerate_ball, f_map, g_map, gap, growth_count,
                      growth_profile, is_delta_c_member, kronecker_gap_demo,
                      omega_collision_scan, ring_of_integers, rn_set,
                      rn_two_to_one_check, theta_map, totient_sum_check,
                      totients, trace_set)

FI = FieldDesc(-1)


def q(a, b=0, field=QQ):
    return QuadElem.of(a, b, field)


class TestCluster:
    def test_small_example(self):
        grid = cluster_counts([0.5, 1.5, 1.6, 2.9])
        assert grid.max_count == 2
        assert grid.counts[(1, 0)] == 2
        assert grid.cells_touched == 3

    def test_mass_conservation(self):
        pts = [0.1, 0.2, 5.5, -3.3, 2 + 1j, 2.5 + 1.5j]
        grid = cluster_counts(pts)
        assert grid.mass == len(pts)

    def test_half_open_boundary(self):
        grid = cluster_counts([1.0, 0.999999, 2.0])
        assert grid.counts[(1, 0)] == 1
        assert grid.counts[(0, 0)] == 1
        assert grid.counts[(2, 0)] == 1

    def test_integer_traces_one_per_cell(self):
        ts = trace_set(enumerate_ball(catalog("psl2z"), 6))
        grid = cluster_counts(ts.embedded)
        assert grid.max_count == 1

    def test_hecke5_max_count_grows(self):
        ts = trace_set(enumerate_ball(catalog("hecke(5)"), 10))
        low = cluster_counts(ts.restrict(6).embedded).max_count
        high = cluster_counts(ts.restrict(10).embedded).max_count
        assert high > low


class TestGapGrowth:
    def test_gap_examples(self):
        assert gap([2, 3, 5]) == 1
        assert gap(trace_set(enumerate_ball(catalog("psl2z"), 6)).embedded) == 1.0

    def test_gap_needs_two_points(self):
        with pytest.raises(PreconditionError):
            gap([1.0])

    def test_complex_gap_matches_full_scan(self):
        pts = [complex(m, n * 0.866) for m in range(6) for n in range(6)]
        pts += [0.3 + 0.25j, 5.9 + 4.33j]
        oracle = min(abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:])
        assert abs(gap(pts) - oracle) < 1e-15

    def test_far_apart_points(self):
        assert gap([0.0, 10.0 + 3j, 20.0]) == abs(10 + 3j - 20)

    def test_growth_count_and_slope(self):
        pts = list(range(-10, 11))
        assert growth_count(pts, 5) == 11
        counts, slope = growth_profile(pts, list(range(1, 11)))
        assert counts[0] == (1, 3)
        assert abs(slope - 2.0) < 0.2


class TestThetaOmega:
    def test_zero(self):
        assert theta_map(q(1), q(1), q(2), q(1), 0, 0) == q(0)

    def test_degenerate_family_collides_per_l(self):
        # a = b = 0: value is l*c, so each fiber is a full row of k values
        rep = omega_collision_scan(q(0), q(0), q(2), q(1), 5)
        assert rep.n_distinct == 11
        for value, kls in rep.collision_groups:
            ls = {l for _, l in kls}
            assert len(ls) == 1
            assert len(kls) == 11

    def test_rational_instance_against_recount(self):
        a, b, c, b2 = q(1), q(1), q(2), q(1)
        rep = omega_collision_scan(a, b, c, b2, 20)
        counts = {}
        for k in range(-20, 21):
            for l in range(-20, 21):
                v = (k * l) + k + 2 * l  # beta^2 a = 1, beta^2 b = 1, c = 2
                counts[v] = counts.get(v, 0) + 1
        assert rep.n_distinct == len(counts)
        assert sum(len(g[1]) for g in rep.collision_groups) == sum(
            c for c in counts.values() if c > 1)

    def test_phi_comparison(self):
        # beta^2 a = s beta^2 b + t c with s = 1, t = 0 here
        rep = omega_collision_scan(q(1), q(1), q(2), q(1), 8,
                                   s=Fraction(1), t=Fraction(0))
        assert rep.phi_checked
        assert rep.phi_equal_collision_pairs + rep.phi_distinct_collision_pairs > 0


class TestCountingSets:
    def test_dn4_exact_list(self):
        ds = dn_set(4)
        assert set(ds.tuples) == {(1, 1), (1, 2), (2, 1), (1, 3), (3, 1),
                                  (1, 4), (2, 2), (4, 1)}
        assert ds.size == 8

    def test_dn_lower_bound(self):
        for n in (10, 100, 1000):
            ds = dn_set(n)
            assert ds.size >= n * math.log(n) - n
            # independent count
            assert ds.size == sum(n // k for k in range(1, n + 1))

    def test_rn1(self):
        assert rn_set(1).tuples == ((1, 1, 1, 1),)

    def test_rn_formula_against_bruteforce_totient(self):
        # phi recomputed by gcd counting, independent of the sieve
        def phi_brute(m):
            return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)
        n = 30
        rs = rn_set(n)
        formula = sum(phi_brute(i) * sum(phi_brute(j) for j in range(1, n // i + 1))
                      for i in range(1, n + 1))
        assert rs.size == formula

    def test_rn_constraints_hold(self):
        for r1, r2, r3, r4 in rn_set(12).tuples:
            assert 1 <= r2 <= r1 <= 12
            assert math.gcd(r1, r2) == 1
            assert 1 <= r4 <= r3 <= 12 // r1
            assert math.gcd(r3, r4) == 1

    def test_f_g_examples(self):
        assert f_map(1, 1, 1, 1) == (1, 2, 1)
        assert f_map(2, 1, 1, 1) == (1, 3, 2)
        x = Fraction(7, 3)
        assert g_map(x, (1, 1, 1, 1)) == x * x + 2 * x + 1

    def test_f_g_compatibility(self, rng):
        # tuples with equal f-image evaluate identically under g_x
        u, v = (2, 1, 1, 1), (1, 1, 2, 1)
        assert f_map(*u) == f_map(*v)
        for _ in range(100):
            x = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
            assert g_map(x, u) == g_map(x, v)

    def test_two_to_one_small(self):
        rep = rn_two_to_one_check(4)
        assert rep.ok and rep.max_fiber_size <= 2

    def test_two_to_one_swap_fiber(self):
        rs = rn_set(2)
        assert (2, 1, 1, 1) in rs.tuples and (1, 1, 2, 1) in rs.tuples
        assert f_map(2, 1, 1, 1) == f_map(1, 1, 2, 1)
        rep = rn_two_to_one_check(2)
        assert rep.swap_fibers_ok

    def test_two_to_one_diagonal(self):
        # (3, 2, 3, 2) is diagonal and must sit alone in its fiber
        rep = rn_two_to_one_check(9)
        assert rep.diagonal_ok
        others = [u for u in rn_set(9).tuples
                  if f_map(*u) == f_map(3, 2, 3, 2)]
        assert others == [(3, 2, 3, 2)]

    def test_two_to_one_bound(self):
        with pytest.raises(PreconditionError):
            rn_two_to_one_check(401)

    def test_totient_sum(self):
        rep = totient_sum_check(10)
        assert rep.sum_phi == 32
        assert abs(rep.ratio_to_asymptotic - 32 * math.pi ** 2 / 300) < 1e-12
        assert rep.pointwise_ok

    def test_totient_pointwise_at_3(self):
        eg = math.exp(0.5772156649015329)
        ll = math.log(math.log(3))
        assert 2 > 3 / (eg * ll + 3 / ll)

    def test_totients_sieve_matches_bruteforce(self):
        phi = totients(60)
        for m in range(1, 61):
            assert phi[m] == sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)


class TestDeltaCSet:
    def test_integral_c_stays_integral(self):
        zz = RingOfIntegers.integers()
        vals = delta_c_set(q(2), zz, 3, 2)
        assert set(vals) == {q(k * 2 ** (2 ** n)) for k in range(-3, 4)
                             for n in range(0, 3)}
        for v in vals:
            assert v.a.denominator == 1

    def test_three_halves_powers_present(self):
        zz = RingOfIntegers.integers()
        vals = set(delta_c_set(q(Fraction(3, 2)), zz, 2, 2))
        assert q(Fraction(9, 4)) in vals
        assert q(Fraction(81, 16)) in vals

    def test_gaussian_denominators_grow(self):
        ring = ring_of_integers(FI)
        c = q(Fraction(1, 2), Fraction(1, 2), FI)
        for n in range(0, 4):
            power = c ** (2 ** n)
            assert power.norm().denominator == 2 ** (2 ** n)

    def test_bounds_required(self):
        with pytest.raises(PreconditionError):
            delta_c_set(q(2), RingOfIntegers.integers(), 0, 2)


WITNESS_CASES = [
    ("3/2", None),
    ("5/3", None),
    ("1/2+1/2*sqrt(-1)", -1),   # (1+i)/2
    ("3/2-3/2*sqrt(-1)", -1),   # 3/(1+i)
]


class TestDeltaWitness:
    @pytest.mark.parametrize("ctext,d", WITNESS_CASES)
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_witness_contract(self, ctext, d, n):
        from tracelab import parse_quadelem
        ring = (RingOfIntegers.integers() if d is None
                else ring_of_integers(FieldDesc(d)))
        c = parse_quadelem(ctext, ring.field)
        wit = delta_c_cluster_witness(c, ring, n)
        assert len(wit.points) == n + 1
        assert len(set(wit.points)) == n + 1
        # membership in Delta_c, via the carried lattice factor and exponent
        for z, x, e in zip(wit.points, wit.lattice_factors, wit.exponents):
            assert ring.contains(x)
            assert z == x * wit.m1 * c ** (2 ** e)
            assert is_delta_c_member(z, c, ring, e, wit.m1)
        # |z_j - z_0| <= 1/2 at 30 significant digits, and diameter <= 1
        with mpmath.workdps(30):
            z0 = wit.points[0]
            for z in wit.points:
                diff = z - z0
                nrm = diff.norm()
                dev = mpmath.sqrt(mpmath.mpf(nrm.numerator) / mpmath.mpf(nrm.denominator))
                assert dev <= mpmath.mpf(1) / 2
        assert wit.max_deviation() <= 0.5
        dev = wit.max_deviation()
        assert 2 * dev <= 1.0  # diameter bound

    def test_f_values_strictly_increase(self):
        zz = RingOfIntegers.integers()
        wit = delta_c_cluster_witness(q(Fraction(3, 2)), zz, 4)
        fs = wit.f_values
        assert all(b > a for a, b in zip(fs, fs[1:]))

    def test_integral_c_rejected(self):
        with pytest.raises(PreconditionError):
            delta_c_cluster_witness(q(2), RingOfIntegers.integers(), 3)

    def test_non_euclidean_rejected(self):
        ring = ring_of_integers(FieldDesc(-19))
        c = q(Fraction(1, 2), Fraction(1, 2), FieldDesc(-19))
        with pytest.raises(PreconditionError):
            delta_c_cluster_witness(c, ring, 2)


def sqrt2_best_approx_oracle(k_max: int) -> float:
    """Best |q*sqrt(2) - p| over convergents with p, q <= K."""
    s2 = math.sqrt(2)
    best = float("inf")
    p0, q0, p1, q1 = 1, 0, 1, 1
    for a in [2] * 30:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > k_max or p1 > k_max:
            break
        best = min(best, abs(q1 * s2 - p1))
    return best


class TestKronecker:
    def test_envelope_non_increasing(self):
        env = kronecker_gap_demo(math.sqrt(2), 1.0, 100)
        vals = [m for _, m in env]
        assert all(b <= a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 0.01

    def test_matches_continued_fraction_oracle(self):
        env = kronecker_gap_demo(math.sqrt(2), 1.0, 100)
        assert abs(env[-1][1] - sqrt2_best_approx_oracle(100)) < 1e-12

    def test_commensurable_degenerate(self):
        env = kronecker_gap_demo(1.7, 1.7, 3)
        assert env[-1][1] == 0.0

    def test_k1_exhaustive(self):
        th1, th2, delta = 1.3, 0.4, 0.05
        env = kronecker_gap_demo(th1, th2, 1, delta)
        oracle = min(abs(k * th1 - l * th2 - delta)
                     for k in (-1, 0, 1) for l in (-1, 0, 1)
                     if (k, l) != (0, 0))
        assert env[0][1] == oracle
