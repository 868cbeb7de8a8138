"""Word-ball enumeration for finitely generated subgroups of PSL(2) over
exact fields, a catalog of standard groups, and trace-set extraction."""

from __future__ import annotations

import functools
import json
import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, PreconditionError
from .psl2 import ProjMat, format_mat2, parse_mat2
from .qfield import QQ, FieldDesc, QuadElem

DEFAULT_CAP = 5_000_000

ARITHMETIC = "arithmetic"
NON_ARITHMETIC = "non_arithmetic"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class GroupSpec:
    """Generator presentation; expected_class is metadata only."""

    name: str
    generators: tuple[ProjMat, ...]
    field: FieldDesc
    expected_class: str = UNKNOWN

    def __post_init__(self):
        if not self.generators:
            raise ValueError("generator list must be nonempty")
        for g in self.generators:
            if g.field != self.field and not g.field.is_rational:
                raise ValueError(f"generator field {g.field} != group field {self.field}")
        if self.expected_class not in (ARITHMETIC, NON_ARITHMETIC, UNKNOWN):
            raise ValueError(f"unknown expected_class {self.expected_class!r}")


@dataclass(frozen=True)
class Ball:
    """Deduplicated word ball: every element carries its least word length."""

    radius: int
    elements: tuple[ProjMat, ...]
    word_length: dict[ProjMat, int]
    complete: bool = True

    @property
    def size(self) -> int:
        return len(self.elements)

    def per_radius_counts(self) -> list[tuple[int, int]]:
        counts: dict[int, int] = {}
        for wl in self.word_length.values():
            counts[wl] = counts.get(wl, 0) + 1
        total = 0
        out = []
        for r in range(self.radius + 1):
            total += counts.get(r, 0)
            out.append((r, total))
        return out


def _letters(spec: GroupSpec) -> list[ProjMat]:
    out: list[ProjMat] = []
    for g in spec.generators:
        for cand in (g, g.inv()):
            if not cand.is_identity() and cand not in out:
                out.append(cand)
    return out


def enumerate_ball(spec: GroupSpec, radius: int, cap: int = DEFAULT_CAP) -> Ball:
    """Breadth-first ball of all distinct elements of word length <= radius.

    Raises BudgetExceededError (carrying the ball truncated to the last
    fully completed radius) when the element budget is exceeded.
    """
    if radius < 1:
        raise PreconditionError("enumerate_ball requires radius >= 1")
    ident = ProjMat.identity(spec.field)
    letters = _letters(spec)
    seen: dict[ProjMat, int] = {ident: 0}
    order: list[ProjMat] = [ident]
    frontier: list[ProjMat] = [ident]
    for level in range(1, radius + 1):
        new_frontier: list[ProjMat] = []
        for g in frontier:
            for let in letters:
                h = g * let
                if h not in seen:
                    seen[h] = level
                    order.append(h)
                    new_frontier.append(h)
            if len(seen) > cap:
                done = level - 1
                kept = [e for e in order if seen[e] <= done]
                partial = Ball(done, tuple(kept),
                               {e: seen[e] for e in kept}, complete=False)
                raise BudgetExceededError(
                    f"element budget {cap} exceeded at radius {level}; "
                    f"completed radius {done}", partial=partial)
        frontier = new_frontier
    return Ball(radius, tuple(order), seen)


def enumerate_largest_ball(spec: GroupSpec, radius: int,
                           cap: int = DEFAULT_CAP) -> Ball:
    """The requested ball, or the largest completed one under the budget."""
    try:
        return enumerate_ball(spec, radius, cap)
    except BudgetExceededError as exc:
        return exc.partial


@dataclass(frozen=True)
class TraceSet:
    """Sorted canonical reduced (or full) trace set with numeric embeddings
    and least-word-length provenance."""

    exact: tuple[QuadElem, ...]
    embedded: tuple[complex, ...]
    provenance: dict[QuadElem, int]
    reduced: bool
    field: FieldDesc
    radius: int

    @property
    def size(self) -> int:
        return len(self.exact)

    def restrict(self, radius: int) -> "TraceSet":
        """Traces first realized at word length <= radius."""
        kept = [t for t in self.exact if self.provenance[t] <= radius]
        return TraceSet(tuple(kept), tuple(t.embed() for t in kept),
                        {t: self.provenance[t] for t in kept},
                        self.reduced, self.field, radius)


def _sorted_traces(prov: dict[QuadElem, int]) -> list[QuadElem]:
    return sorted(prov, key=functools.cmp_to_key(lambda x, y: x.compare_embedded(y)))


def trace_set(ball: Ball, reduced: bool = True) -> TraceSet:
    prov: dict[QuadElem, int] = {}
    field = QQ
    for g in ball.elements:
        if reduced and g.is_identity():
            continue
        t = g.trace()
        if not t.field.is_rational:
            field = t.field
        wl = ball.word_length[g]
        if t not in prov or wl < prov[t]:
            prov[t] = wl
    exact = _sorted_traces(prov)
    return TraceSet(tuple(exact), tuple(t.embed() for t in exact),
                    {t: prov[t] for t in exact}, reduced, field, ball.radius)


def gamma2_ball(ball: Ball, pair_budget: int = 90_000) -> Ball:
    """Squares of ball elements plus pairwise products of squares drawn from
    the largest sub-ball whose square count fits the pair budget; word
    lengths are inherited from the constructions."""
    prov: dict[ProjMat, int] = {}

    def visit(g: ProjMat, wl: int):
        if g not in prov or wl < prov[g]:
            prov[g] = wl

    squares: list[tuple[ProjMat, int]] = []
    for g in ball.elements:
        sq = g * g
        wl = 2 * ball.word_length[g]
        visit(sq, wl)
        squares.append((sq, wl))
    sub_radius = ball.radius
    while sub_radius > 0:
        n_sub = sum(1 for g in ball.elements if ball.word_length[g] <= sub_radius)
        if n_sub * n_sub <= pair_budget:
            break
        sub_radius -= 1
    sub = [(sq, wl) for (sq, wl) in squares
           if wl <= 2 * sub_radius]
    for s1, w1 in sub:
        for s2, w2 in sub:
            visit(s1 * s2, w1 + w2)
    # deterministic order: by provenance, ties by insertion
    order = sorted(prov, key=lambda g: prov[g])
    return Ball(2 * ball.radius, tuple(order), dict(prov))


# -- catalog ----------------------------------------------------------------

def _psl2z_gens() -> tuple[ProjMat, ...]:
    return (ProjMat.make(0, -1, 1, 0), ProjMat.make(1, 1, 0, 1))


_GAMMA0_TABLES = {
    2: [[1, 1, 0, 1], [1, -1, 2, -1]],
    3: [[1, 1, 0, 1], [1, -1, 3, -2]],
    4: [[1, 1, 0, 1], [1, 0, 4, 1]],
    5: [[1, 1, 0, 1], [2, -1, 5, -2], [-2, -1, 5, 2]],
    6: [[1, 1, 0, 1], [5, -1, 6, -1], [7, -3, 12, -5]],
}

_HECKE_LAMBDA = {
    4: (2, QuadElem.of(0, 1, FieldDesc(2))),                      # sqrt(2)
    5: (5, QuadElem.of(Fraction(1, 2), Fraction(1, 2), FieldDesc(5))),
    6: (3, QuadElem.of(0, 1, FieldDesc(3))),                      # sqrt(3)
}

BIANCHI_DS = (-1, -2, -3, -7, -11)


def catalog_names() -> list[str]:
    names = ["psl2z"]
    names += [f"gamma0({n})" for n in sorted(_GAMMA0_TABLES)]
    names += [f"hecke({q})" for q in sorted(_HECKE_LAMBDA)]
    names += [f"bianchi({d})" for d in BIANCHI_DS]
    return names


def catalog(name: str) -> GroupSpec:
    key = name.replace(" ", "").lower()
    if key == "psl2z" or key == "gamma0(1)":
        return GroupSpec("psl2z", _psl2z_gens(), QQ, ARITHMETIC)
    if key.startswith("gamma0(") and key.endswith(")"):
        n = int(key[7:-1])
        if n in _GAMMA0_TABLES:
            gens = tuple(ProjMat.make(*row) for row in _GAMMA0_TABLES[n])
            return GroupSpec(f"gamma0({n})", gens, QQ, ARITHMETIC)
    if key.startswith("hecke(") and key.endswith(")"):
        q = int(key[6:-1])
        if q in _HECKE_LAMBDA:
            d, lam = _HECKE_LAMBDA[q]
            fld = FieldDesc(d)
            gens = (ProjMat.make(0, -1, 1, 0, field=fld),
                    ProjMat.make(1, lam, 0, 1, field=fld))
            cls = NON_ARITHMETIC if q == 5 else ARITHMETIC
            return GroupSpec(f"hecke({q})", gens, fld, cls)
    if key.startswith("bianchi(") and key.endswith(")"):
        d = int(key[8:-1])
        if d in BIANCHI_DS:
            fld = FieldDesc(d)
            omega = (QuadElem.of(Fraction(1, 2), Fraction(1, 2), fld)
                     if d % 4 == 1 else QuadElem.of(0, 1, fld))
            gens = (ProjMat.make(1, 1, 0, 1, field=fld),
                    ProjMat.make(1, omega, 0, 1, field=fld),
                    ProjMat.make(0, -1, 1, 0, field=fld))
            return GroupSpec(f"bianchi({d})", gens, fld, ARITHMETIC)
    raise KeyError(f"unknown catalog group {name!r}; known: {', '.join(catalog_names())}")


# -- group spec files -------------------------------------------------------

def group_spec_to_dict(spec: GroupSpec) -> dict:
    return {
        "name": spec.name,
        "field_d": spec.field.d,
        "generators": [format_mat2(g.rep) for g in spec.generators],
        "expected_class": spec.expected_class,
    }


def group_spec_from_dict(data: dict) -> GroupSpec:
    d = data.get("field_d")
    fld = QQ if d is None else FieldDesc(int(d))
    gens = tuple(ProjMat.of(parse_mat2(text, fld)) for text in data["generators"])
    return GroupSpec(str(data["name"]), gens, fld,
                     str(data.get("expected_class", UNKNOWN)))


def load_group_spec(path: str | os.PathLike) -> GroupSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return group_spec_from_dict(json.load(fh))
