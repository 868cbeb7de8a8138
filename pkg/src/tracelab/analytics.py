"""Clustering, gap and growth statistics, the counting sets D_N and R_N with
their totient estimates, the collision maps, the truncated sets Delta_c, and
the constructive clustering-failure witness for non-integral c."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import mpmath

from .errors import PreconditionError
from .qfield import (QuadElem, RingOfIntegers, bezout_bounded, gcd_ring,
                     m2_constant, prime_power_factor)

Number = Union[int, float, complex, Fraction]
EULER_GAMMA = 0.5772156649015329


# -- clustering -------------------------------------------------------------

@dataclass(frozen=True)
class ClusterGrid:
    """Counts of points per half-open unit cell [m, m+1) x [n, n+1)."""

    counts: dict[tuple[int, int], int]
    max_count: int
    cells_touched: int

    @property
    def mass(self) -> int:
        return sum(self.counts.values())


def cluster_counts(points: Iterable[Number]) -> ClusterGrid:
    counts: dict[tuple[int, int], int] = {}
    for p in points:
        z = complex(p)
        cell = (math.floor(z.real), math.floor(z.imag))
        counts[cell] = counts.get(cell, 0) + 1
    max_count = max(counts.values(), default=0)
    return ClusterGrid(counts, max_count, len(counts))


# -- gap and growth ---------------------------------------------------------

def gap(points: Sequence[Number]) -> float:
    """Minimum pairwise distance over distinct points."""
    pts = list(dict.fromkeys(complex(p) for p in points))
    if len(pts) < 2:
        raise PreconditionError("gap requires at least 2 distinct points")
    if all(z.imag == 0 for z in pts):
        xs = sorted(z.real for z in pts)
        return min(b - a for a, b in zip(xs, xs[1:]))
    # spatial hash; a pair closer than 1 lies in a 3x3 cell neighbourhood
    best = float("inf")
    grid: dict[tuple[int, int], list[complex]] = {}
    for z in pts:
        cell = (math.floor(z.real), math.floor(z.imag))
        grid.setdefault(cell, []).append(z)
    for (cx, cy), bucket in grid.items():
        neighbours = [w for dx in (-1, 0, 1) for dy in (-1, 0, 1)
                      for w in grid.get((cx + dx, cy + dy), ())]
        for z in bucket:
            for w in neighbours:
                if w != z:
                    best = min(best, abs(z - w))
    if best > 1.0:
        # no close pair found locally; the minimum may connect far cells
        best = min(abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:])
    return best


def growth_count(points: Sequence[Number], n: float) -> int:
    return sum(1 for p in points if abs(complex(p)) <= n)


def growth_profile(points: Sequence[Number], n_values: Sequence[float]
                   ) -> tuple[list[tuple[float, int]], float]:
    """Counts #{|a| <= n} per n plus the least-squares slope."""
    counts = [(n, growth_count(points, n)) for n in n_values]
    if len(counts) >= 2:
        slope = statistics.linear_regression([c[0] for c in counts],
                                             [float(c[1]) for c in counts]).slope
    else:
        slope = float("nan")
    return counts, slope


# -- collision maps ---------------------------------------------------------

def theta_map(a, b, c, beta_sq, k, l):
    """k*l*beta^2*a + k*beta^2*b + l*c, evaluated exactly."""
    return beta_sq * a * k * l + beta_sq * b * k + c * l


def phi_map(s, t, k: int, l: int):
    return (s * k * l + k, t * k * l + l)


@dataclass(frozen=True)
class CollisionReport:
    n_pairs: int
    n_distinct: int
    collision_groups: tuple[tuple[object, tuple[tuple[int, int], ...]], ...]
    phi_checked: bool
    phi_equal_collision_pairs: int
    phi_distinct_collision_pairs: int


def omega_collision_scan(a, b, c, beta_sq, k_range: int,
                         s=None, t=None) -> CollisionReport:
    """Scan k, l in [-K, K]^2 for collisions of the trace-increment map,
    and compare collision pairs under (k,l) -> (skl+k, tkl+l) when s, t
    are supplied."""
    groups: dict[object, list[tuple[int, int]]] = {}
    for k in range(-k_range, k_range + 1):
        for l in range(-k_range, k_range + 1):
            v = theta_map(a, b, c, beta_sq, k, l)
            groups.setdefault(v, []).append((k, l))
    collisions = [(v, tuple(kl)) for v, kl in groups.items() if len(kl) > 1]
    phi_eq = phi_ne = 0
    phi_checked = s is not None and t is not None
    if phi_checked:
        for _, kls in collisions:
            for i in range(len(kls)):
                for j in range(i + 1, len(kls)):
                    if phi_map(s, t, *kls[i]) == phi_map(s, t, *kls[j]):
                        phi_eq += 1
                    else:
                        phi_ne += 1
    n_pairs = (2 * k_range + 1) ** 2
    return CollisionReport(n_pairs, len(groups), tuple(collisions),
                           phi_checked, phi_eq, phi_ne)


# -- counting sets ----------------------------------------------------------

@dataclass(frozen=True)
class CountingSet:
    kind: str  # "D_N" or "R_N"
    n: int
    tuples: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.tuples)


def dn_set(n: int) -> CountingSet:
    """{(k, l) : 1 <= kl <= N}; its size is at least N ln N - N."""
    if n < 1:
        raise PreconditionError("dn_set requires N >= 1")
    tuples = [(k, l) for k in range(1, n + 1) for l in range(1, n // k + 1)]
    assert len(tuples) >= n * math.log(n) - n
    return CountingSet("D_N", n, tuple(tuples))


def totients(n: int) -> list[int]:
    """phi(0..n) by sieve."""
    phi = list(range(n + 1))
    for i in range(2, n + 1):
        if phi[i] == i:  # i prime
            for j in range(i, n + 1, i):
                phi[j] -= phi[j] // i
    return phi


def rn_set(n: int) -> CountingSet:
    """Tuples (r1, r2, r3, r4) with 1 <= r2 <= r1 <= N, (r1, r2) = 1,
    1 <= r4 <= r3 <= N/r1, (r3, r4) = 1; size cross-checked against the
    totient double-sum formula."""
    if n < 1:
        raise PreconditionError("rn_set requires N >= 1")
    tuples = []
    for r1 in range(1, n + 1):
        for r2 in range(1, r1 + 1):
            if math.gcd(r1, r2) != 1:
                continue
            for r3 in range(1, n // r1 + 1):
                for r4 in range(1, r3 + 1):
                    if math.gcd(r3, r4) == 1:
                        tuples.append((r1, r2, r3, r4))
    phi = totients(n)
    formula = sum(phi[i] * sum(phi[j] for j in range(1, n // i + 1))
                  for i in range(1, n + 1))
    assert len(tuples) == formula
    return CountingSet("R_N", n, tuple(tuples))


def f_map(m: int, n: int, mp: int, np: int) -> tuple:
    return (n * np, n * mp + m * np, m * mp)


def g_map(x, tup) -> object:
    m, n, mp, np = tup
    return n * np * x * x + (n * mp + m * np) * x + m * mp


@dataclass(frozen=True)
class TwoToOneReport:
    n: int
    n_tuples: int
    n_fibers: int
    max_fiber_size: int
    swap_fibers_ok: bool
    diagonal_ok: bool

    @property
    def ok(self) -> bool:
        return self.max_fiber_size <= 2 and self.swap_fibers_ok and self.diagonal_ok


def rn_two_to_one_check(n: int, max_n: int = 400) -> TwoToOneReport:
    """Group R_N by its image under f; every fiber has size <= 2, size-2
    fibers are swaps (r1,r2,r3,r4) <-> (r3,r4,r1,r2), diagonal tuples sit
    in singleton fibers."""
    if n > max_n:
        raise PreconditionError(f"rn_two_to_one_check is exhaustive only up to N={max_n}")
    rn = rn_set(n)
    fibers: dict[tuple, list[tuple]] = {}
    for u in rn.tuples:
        fibers.setdefault(f_map(*u), []).append(u)
    max_size = max((len(v) for v in fibers.values()), default=0)
    swap_ok = all(v[1] == (v[0][2], v[0][3], v[0][0], v[0][1])
                  for v in fibers.values() if len(v) == 2)
    diagonal_ok = all(len(v) == 1 for v in fibers.values()
                      if any(u[:2] == u[2:] for u in v))
    return TwoToOneReport(n, rn.size, len(fibers), max_size, swap_ok, diagonal_ok)


@dataclass(frozen=True)
class TotientSumReport:
    n: int
    sum_phi: int
    ratio_to_asymptotic: float  # sum / ((3/pi^2) N^2)
    pointwise_ok: bool          # phi(m) > m/(e^g loglog m + 3/loglog m), 3 <= m <= N
    pointwise_checked_from: int = 3


def totient_sum_check(n: int) -> TotientSumReport:
    if n < 2:
        raise PreconditionError("totient_sum_check requires N >= 2")
    phi = totients(n)
    total = sum(phi[1:])
    ratio = total / ((3 / math.pi ** 2) * n * n)
    # the displayed lower bound is vacuous at m = 2 where loglog < 0
    ok = True
    eg = math.exp(EULER_GAMMA)
    for m in range(3, n + 1):
        ll = math.log(math.log(m))
        if phi[m] <= m / (eg * ll + 3 / ll):
            ok = False
            break
    return TotientSumReport(n, total, ratio, ok)


# -- truncated Delta_c sets -------------------------------------------------

def _sort_key(x: QuadElem):
    z = complex(x.embed())
    return (z.real, z.imag, x.a.numerator, x.a.denominator,
            x.b.numerator, x.b.denominator)


def delta_c_set(c: QuadElem, ring: RingOfIntegers, k_bound: int, n_bound: int,
                m1: int = 1) -> list[QuadElem]:
    """Exact truncation {m1 * x * c^(2^n)} over lattice x with coordinates of
    absolute value <= k_bound and 0 <= n <= n_bound, deduplicated and
    sorted by embedding."""
    if k_bound < 1 or n_bound < 1:
        raise PreconditionError("delta_c_set requires positive bounds")
    powers = [c ** (2 ** n) for n in range(0, n_bound + 1)]
    values: set[QuadElem] = set()
    if ring.is_rational:
        for pw in powers:
            scaled = pw * m1
            for k in range(-k_bound, k_bound + 1):
                values.add(scaled * k)
    else:
        for pw in powers:
            scaled = pw * m1
            for i in range(-k_bound, k_bound + 1):
                base = scaled * i
                for j in range(-k_bound, k_bound + 1):
                    values.add(base + scaled * ring.omega * j)
    return sorted(values, key=_sort_key)


def is_delta_c_member(z: QuadElem, c: QuadElem, ring: RingOfIntegers,
                      exponent: int, m1: int = 1) -> bool:
    """Membership z = m1 * x * c^(2^exponent) with x integral, checked exactly."""
    x = z / (c ** (2 ** exponent) * m1)
    return ring.contains(x)


# -- the clustering-failure witness -----------------------------------------

@dataclass(frozen=True)
class DeltaWitness:
    """Family z_0..z_n of distinct members of Delta_c within diameter <= 1."""

    points: tuple[QuadElem, ...]
    lattice_factors: tuple[QuadElem, ...]
    exponents: tuple[int, ...]
    f_values: tuple[int, ...]
    p: QuadElem
    q: QuadElem
    m1: int

    @property
    def n(self) -> int:
        return len(self.points) - 1

    def max_deviation(self) -> float:
        """max_j |z_j - z_0| at 30 significant digits."""
        with mpmath.workdps(30):
            return max(float(_abs_mp(zj - self.points[0])) for zj in self.points)


def _abs_mp(x: QuadElem):
    n = x.norm()
    if x.field.is_rational or x.field.is_imaginary:
        return mpmath.sqrt(mpmath.mpf(n.numerator) / mpmath.mpf(n.denominator))
    a = mpmath.mpf(x.a.numerator) / mpmath.mpf(x.a.denominator)
    b = mpmath.mpf(x.b.numerator) / mpmath.mpf(x.b.denominator)
    return abs(a + b * mpmath.sqrt(x.field.d))


def _log_abs(x: QuadElem) -> float:
    n = x.norm()
    return 0.5 * (math.log(n.numerator) - math.log(n.denominator))


def _half_norm_bound(x: QuadElem) -> bool:
    """|x| <= 1/2, exactly."""
    n = x.norm()  # equals |x|^2 for rational and imaginary quadratic fields
    return n <= Fraction(1, 4)


def lowest_terms(c: QuadElem, ring: RingOfIntegers) -> tuple[QuadElem, QuadElem]:
    """c = p/q with p, q integral and coprime, q a canonical associate."""
    m, n = ring.lattice_coords(c)
    q0 = QuadElem.rational(math.lcm(m.denominator, n.denominator), ring.field)
    p0 = c * q0
    g = gcd_ring(p0, q0, ring)
    p, q = p0 / g, q0 / g
    unit = ring.canonical_associate(q) / q
    return p * unit, q * unit


# order of the ideal class group as 2^s * h (h odd), and t with
# 2^t = 1 (mod h); all supported rings have class number 1
_CLASS_GROUP_CONSTANTS = {None: (0, 1, 1), -1: (0, 1, 1), -2: (0, 1, 1),
                          -3: (0, 1, 1), -7: (0, 1, 1), -11: (0, 1, 1)}


def delta_c_cluster_witness(c: QuadElem, ring: RingOfIntegers, n: int,
                            m1: int = 1) -> DeltaWitness:
    """Construct z_0..z_n in Delta_c, pairwise distinct, with
    |z_j - z_0| <= 1/2 for every j.

    Write c = p/q in lowest terms and pick the primary factor q1 of q. The
    exponent schedule f(0) = 0 < f(1) < ... < f(n) takes values 2^k - 1 and
    is chosen so |q|^f(j) dominates 2 M^j |c| prod_{i<j} |p|^f(i) with
    M = max(M1, M2). Downward induction then produces Bezout data
    u_i p^f(i) - v_i (v_{i+1}..v_n) q^f(i) = 1 with (v_i, q1) = 1 and
    |v_i| <= M|p|^f(i), and the points are z_0 = M1 (prod v_i) c,
    z_j = M1 u_j (prod_{i<j} v_i) c (p/q)^f(j). Distinctness and the 1/2
    bound are asserted exactly; the telescoping identity makes
    z_j - z_0 = M1 c (prod_{i<j} v_i) / q^f(j).
    """
    if n < 1:
        raise PreconditionError("delta_c_cluster_witness requires n >= 1")
    if not ring.is_euclidean:
        raise PreconditionError("witness construction needs a Euclidean ring or Z")
    if ring.contains(c):
        raise PreconditionError("c is an algebraic integer: Delta_c clusters boundedly")
    s_const, h_const, t_const = _CLASS_GROUP_CONSTANTS[ring.field.d]
    assert (s_const, h_const, t_const) == (0, 1, 1)
    p, q = lowest_terms(c, ring)
    q1 = prime_power_factor(q, ring)
    m2 = m2_constant(ring)
    big_m = max(float(m1), m2)
    log_p, log_q, log_c = _log_abs(p), _log_abs(q), _log_abs(c)
    assert log_q > 0

    # g(k) = 2^k - 1 satisfies c^(2^k) = (p/q)^g(k) * c; verify the k we use
    f = [0]
    for j in range(1, n + 1):
        target = math.log(2) + j * math.log(big_m) + log_c + sum(fi * log_p for fi in f)
        k = 1
        while (2 ** k - 1) <= f[-1] or (2 ** k - 1) * log_q < target - 1e-9:
            k += 1
        if (2 ** k - 1) * log_q < target + 1e-9:
            # near-tie: re-decide at high precision
            with mpmath.workdps(80):
                lq = mpmath.log(_abs_mp(q))
                tgt = (mpmath.log(2) + j * mpmath.log(big_m) + mpmath.log(_abs_mp(c))
                       + sum(fi * mpmath.log(_abs_mp(p)) for fi in f))
                while (2 ** k - 1) * lq < tgt:
                    k += 1
        f.append(2 ** k - 1)

    pq = p / q
    for fj in f:
        k = (fj + 1).bit_length() - 1
        assert 2 ** k - 1 == fj
        assert (c ** (2 ** k) - c * pq ** fj).is_zero()

    u: list[Optional[QuadElem]] = [None] * (n + 1)
    v: list[Optional[QuadElem]] = [None] * (n + 1)
    tail = QuadElem.rational(1, ring.field)
    for i in range(n, 0, -1):
        r_i = p ** f[i]
        s_i = -(tail * q ** f[i])
        u_i, v_i = bezout_bounded(r_i, s_i, q1, ring)
        u[i], v[i] = u_i, v_i
        tail = tail * v_i

    prod_v = QuadElem.rational(1, ring.field)
    factors = [None] * (n + 1)
    for i in range(1, n + 1):
        prod_v = prod_v * v[i]
    factors[0] = prod_v
    points = [factors[0] * m1 * c]
    exponents = [0]
    running = QuadElem.rational(1, ring.field)
    for j in range(1, n + 1):
        factors[j] = u[j] * running
        k_j = (f[j] + 1).bit_length() - 1
        points.append(factors[j] * m1 * c * pq ** f[j])
        exponents.append(k_j)
        running = running * v[j]

    assert len(set(points)) == n + 1, "witness points collided"
    for j, (z, x, e) in enumerate(zip(points, factors, exponents)):
        assert ring.contains(x), f"lattice factor {j} not integral"
        assert (z - x * m1 * c ** (2 ** e)).is_zero()
        assert _half_norm_bound(z - points[0]), f"|z_{j} - z_0| > 1/2"
    return DeltaWitness(tuple(points), tuple(factors), tuple(exponents),
                        tuple(f), p, q, m1)


# -- Kronecker gap collapse demo --------------------------------------------

def kronecker_gap_demo(theta1: float, theta2: float, k_max: int,
                       delta: float = 0.0) -> list[tuple[int, float]]:
    """Running minimum over |k*theta1 - l*theta2 - delta| for k, l in
    [-K, K]^2, (k, l) != (0, 0), reported as the envelope K -> min."""
    if k_max < 1:
        raise PreconditionError("kronecker_gap_demo requires K >= 1")
    best = float("inf")
    envelope = []
    for k_cur in range(1, k_max + 1):
        # pairs with max(|k|, |l|) == k_cur; (0, 0) is never visited
        for k in range(-k_cur, k_cur + 1):
            for l in (-k_cur, k_cur):
                best = min(best, abs(k * theta1 - l * theta2 - delta))
        for l in range(-k_cur + 1, k_cur):
            for k in (-k_cur, k_cur):
                best = min(best, abs(k * theta1 - l * theta2 - delta))
        envelope.append((k_cur, best))
    return envelope
