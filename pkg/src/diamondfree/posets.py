"""Finite Cayley posets over finite abelian groups.

Vertices are (group element, integer level) pairs.  In the ``standard``
convention (g1, i1) <= (g2, i2) holds when i2 >= i1 and g2 - g1 is an
(i2 - i1)-term sum of generators; the ``mirror`` convention tests
g1 - g2 instead.  The module provides diamond and strong-chain witness
detection, the strongly-diamond-free verifier, the six stock
constructions, structural transforms, the chain-partition certificate
and a line-oriented text format.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

from .groups import (
    FiniteAbelianGroup,
    GeneratorSet,
    GroupElement,
    format_element,
    format_group,
    iterated_sumset,
    make_gens,
    make_group,
    parse_element,
    parse_group,
)

CONVENTIONS = ("standard", "mirror")


@dataclass(frozen=True)
class PosetElement:
    gamma: GroupElement
    level: int

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.level, self.gamma.residues)


@dataclass(frozen=True)
class CayleyPoset:
    group: FiniteAbelianGroup
    gens: GeneratorSet
    elements: frozenset[PosetElement]
    convention: str = "standard"

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")
        if self.gens.group != self.group:
            raise ValueError("generator set belongs to a different group")
        elems = frozenset(self.elements)
        for p in elems:
            if p.gamma.group != self.group:
                raise ValueError("poset element belongs to a different group")
        object.__setattr__(self, "elements", elems)

    def __len__(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> list[PosetElement]:
        """Canonical order: level first, then residues lexicographically."""
        return sorted(self.elements, key=PosetElement.sort_key)

    def leq(self, p1: PosetElement, p2: PosetElement) -> bool:
        return leq(p1, p2, self.gens, self.convention)


def make_poset(
    group: FiniteAbelianGroup,
    gens: GeneratorSet,
    pairs: Iterable[tuple[int | Iterable[int], int]],
    convention: str = "standard",
) -> CayleyPoset:
    """Convenience constructor from (residues, level) pairs."""
    elems = frozenset(PosetElement(group.element(r), int(i)) for r, i in pairs)
    return CayleyPoset(group, gens, elems, convention)


def _gap_delta(p1: PosetElement, p2: PosetElement, convention: str) -> GroupElement:
    if convention == "standard":
        return p2.gamma - p1.gamma
    return p1.gamma - p2.gamma


def leq(
    p1: PosetElement, p2: PosetElement, gens: GeneratorSet, convention: str = "standard"
) -> bool:
    """Cayley poset order; reflexive because the empty sum is {identity}."""
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    gap = p2.level - p1.level
    if gap < 0:
        return False
    return _gap_delta(p1, p2, convention) in iterated_sumset(gens, gap)


def usable_generators(
    delta: GroupElement, k: int, gens: GeneratorSet
) -> tuple[GroupElement, ...]:
    """Generators that can appear as a term in some k-term sum equal to delta.

    Returns {eta in H : delta - eta in (k-1) x H} in canonical order;
    empty exactly when delta is not in k x H.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    lower = iterated_sumset(gens, k - 1)
    return tuple(eta for eta in gens.elements if (delta - eta) in lower)


@dataclass(frozen=True)
class DiamondWitness:
    """Four distinct elements bottom <= mid_a, mid_b <= top with mid_a != mid_b.

    Weak-subposet semantics: the middles need not be incomparable, so a
    4-chain is a diamond too.
    """

    bottom: PosetElement
    mid_a: PosetElement
    mid_b: PosetElement
    top: PosetElement


@dataclass(frozen=True)
class StrongChainWitness:
    """Three comparable elements whose consecutive gaps share a usable generator."""

    first: PosetElement
    second: PosetElement
    third: PosetElement
    shared_eta: GroupElement


@dataclass(frozen=True)
class SdfVerdict:
    """Verifier outcome; ``ok`` means no diamond and no strong chain."""

    ok: bool
    diamond: Optional[DiamondWitness]
    strong_chain: Optional[StrongChainWitness]

    def __bool__(self) -> bool:
        return self.ok


def _strict_less_matrix(poset: CayleyPoset) -> tuple[list[PosetElement], list[list[bool]]]:
    elems = poset.sorted_elements()
    n = len(elems)
    less = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and poset.leq(elems[i], elems[j]):
                less[i][j] = True
    return elems, less


def diamond_witness(poset: CayleyPoset) -> Optional[DiamondWitness]:
    """First diamond in canonical order, or None.

    Scan order: bottom ascending, top ascending, middles ascending; the
    witness carries the two canonically smallest middles.
    """
    elems, less = _strict_less_matrix(poset)
    n = len(elems)
    for wi in range(n):
        row = less[wi]
        for zi in range(n):
            if not row[zi]:
                continue
            mids = []
            for k in range(n):
                if k != wi and k != zi and row[k] and less[k][zi]:
                    mids.append(k)
                    if len(mids) == 2:
                        return DiamondWitness(
                            elems[wi], elems[mids[0]], elems[mids[1]], elems[zi]
                        )
    return None


def strong_chain_witness(poset: CayleyPoset) -> Optional[StrongChainWitness]:
    """First strong chain in canonical order, or None.

    Scan order: first ascending, second ascending, third ascending; the
    reported eta is the canonically smallest shared generator.
    """
    elems, less = _strict_less_matrix(poset)
    n = len(elems)
    usable: dict[tuple[int, int], frozenset[GroupElement]] = {}

    def usable_for(i: int, j: int) -> frozenset[GroupElement]:
        got = usable.get((i, j))
        if got is None:
            delta = _gap_delta(elems[i], elems[j], poset.convention)
            got = frozenset(
                usable_generators(delta, elems[j].level - elems[i].level, poset.gens)
            )
            usable[(i, j)] = got
        return got

    for i in range(n):
        for j in range(n):
            if not less[i][j]:
                continue
            low = usable_for(i, j)
            if not low:
                continue
            for k in range(n):
                if not less[j][k]:
                    continue
                shared = low & usable_for(j, k)
                if shared:
                    eta = min(shared, key=lambda e: e.residues)
                    return StrongChainWitness(elems[i], elems[j], elems[k], eta)
    return None


def is_strongly_diamond_free(poset: CayleyPoset) -> SdfVerdict:
    dia = diamond_witness(poset)
    chain = strong_chain_witness(poset)
    return SdfVerdict(ok=(dia is None and chain is None), diamond=dia, strong_chain=chain)


def transform_poset(
    poset: CayleyPoset,
    translate_by: Optional[GroupElement] = None,
    shift_levels: int = 0,
    negate: bool = False,
) -> CayleyPoset:
    """Apply (g, i) -> (g + c, i + s); with ``negate`` switch to the other
    convention over the negated generating set (an order-preserving
    re-presentation of the same poset)."""
    c = translate_by if translate_by is not None else poset.group.identity()
    if c.group != poset.group:
        raise ValueError("translation element belongs to a different group")
    elems = frozenset(
        PosetElement(p.gamma + c, p.level + shift_levels) for p in poset.elements
    )
    gens = poset.gens
    convention = poset.convention
    if negate:
        gens = gens.negated()
        convention = "mirror" if convention == "standard" else "standard"
    return CayleyPoset(poset.group, gens, elems, convention)


def chain_partition_histogram(
    poset: CayleyPoset, eta: GroupElement
) -> dict[GroupElement, int]:
    """Occupancy of the chains {(g + i*eta, i)} keyed by g = gamma - i*eta.

    For strong-chain-free posets every chain holds at most 2 elements,
    which certifies the 2m size cap.
    """
    if eta not in poset.gens:
        raise ValueError("eta must be one of the poset's generators")
    counter: Counter[GroupElement] = Counter()
    for p in poset.elements:
        counter[p.gamma - eta.scaled(p.level)] += 1
    return dict(counter)


def example_poset(kind: int, **params) -> CayleyPoset:
    """The six stock constructions.

    1: two consecutive full levels over any (group, gens); params group,
       gens, base_level (default 0).
    2: odd m, gens {a, b} with gcd(a, b) = 1; three levels 1..3.
    3: the 13-vertex poset over Z7 with gens {2, 3, 5}.
    4: m = 4k - 1, gens {2k-1, 2k}, k >= 2; levels 1..4.
    5: m = 4k + 1, gens {2k, 2k+1}, k >= 2; levels 1..4.
    6: the 6-vertex poset over Z3 with gens {0, 2}, levels -1..1.
    """
    if kind == 1:
        group: FiniteAbelianGroup = params["group"]
        gens: GeneratorSet = params["gens"]
        base = int(params.get("base_level", 0))
        elems = frozenset(
            PosetElement(g, lvl) for g in group.elements() for lvl in (base, base + 1)
        )
        return CayleyPoset(group, gens, elems)
    if kind == 2:
        m = int(params["m"])
        if m < 3 or m % 2 == 0:
            raise ValueError(f"kind 2 needs odd m >= 3, got {m}")
        group = make_group((m,))
        a = group.element(int(params["a"]))
        b = group.element(int(params["b"]))
        if a == b:
            raise ValueError("kind 2 needs distinct a, b modulo m")
        import math as _math

        if _math.gcd(a.residues[0], b.residues[0]) != 1:
            raise ValueError(
                f"kind 2 needs gcd(a, b) = 1, got gcd({a.residues[0]}, {b.residues[0]})"
            )
        gens = GeneratorSet(group, (a, b))
        top_excluded = a + b
        elems = set()
        for g in group.elements():
            if g != top_excluded:
                elems.add(PosetElement(g, 3))
            if not g.is_identity():
                elems.add(PosetElement(g, 1))
        elems.add(PosetElement(a, 2))
        elems.add(PosetElement(b, 2))
        return CayleyPoset(group, gens, frozenset(elems))
    if kind == 3:
        group = make_group((7,))
        gens = make_gens(group, [2, 3, 5])
        excluded3 = {0, 1, 5}
        elems = set()
        for g in group.elements():
            if g.residues[0] not in excluded3:
                elems.add(PosetElement(g, 3))
            if not g.is_identity():
                elems.add(PosetElement(g, 1))
        for r in (2, 3, 5):
            elems.add(PosetElement(group.element(r), 2))
        return CayleyPoset(group, gens, frozenset(elems))
    if kind in (4, 5):
        k = int(params["k"])
        if k < 2:
            raise ValueError(f"kind {kind} needs k >= 2, got {k}")
        if kind == 4:
            m = 4 * k - 1
            gen_res = (2 * k - 1, 2 * k)
            top_range = range(k + 2, 3 * k - 3 + 1)
            body_range = range(k, 3 * k - 1 + 1)
        else:
            m = 4 * k + 1
            gen_res = (2 * k, 2 * k + 1)
            top_range = range(k + 2, 3 * k - 2 + 1)
            body_range = range(k, 3 * k + 1)
        group = make_group((m,))
        gens = make_gens(group, gen_res)
        elems = set()
        for i in top_range:
            elems.add(PosetElement(group.element(i), 4))
        for i in body_range:
            for j in (1, 2, 3):
                elems.add(PosetElement(group.element(i), j))
        return CayleyPoset(group, gens, frozenset(elems))
    if kind == 6:
        group = make_group((3,))
        gens = make_gens(group, [0, 2])
        elems = set()
        for lvl, excluded in ((1, 1), (0, 0), (-1, 2)):
            for g in group.elements():
                if g.residues[0] != excluded:
                    elems.add(PosetElement(g, lvl))
        return CayleyPoset(group, gens, frozenset(elems))
    raise ValueError(f"unknown example kind {kind}; expected 1..6")


class PosetParseError(ValueError):
    """Malformed poset text; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_poset(text: str) -> CayleyPoset:
    """Parse the line format (`group`, `gens`, `conv`, `elem` statements)."""
    group: Optional[FiniteAbelianGroup] = None
    gens: Optional[GeneratorSet] = None
    convention = None
    elems: list[PosetElement] = []
    seen: set[PosetElement] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        directive, args = parts[0], parts[1:]
        try:
            if directive == "group":
                if group is not None:
                    raise ValueError("duplicate group statement")
                if len(args) != 1:
                    raise ValueError("group takes one literal")
                group = parse_group(args[0])
            elif directive == "gens":
                if group is None:
                    raise ValueError("gens before group")
                if gens is not None:
                    raise ValueError("duplicate gens statement")
                if not args:
                    raise ValueError("gens needs at least one element")
                gens = GeneratorSet(group, tuple(parse_element(a, group) for a in args))
            elif directive == "conv":
                if convention is not None:
                    raise ValueError("duplicate conv statement")
                if len(args) != 1 or args[0] not in CONVENTIONS:
                    raise ValueError("conv takes standard or mirror")
                convention = args[0]
            elif directive == "elem":
                if group is None:
                    raise ValueError("elem before group")
                if len(args) != 2:
                    raise ValueError("elem takes an element literal and a level")
                gamma = parse_element(args[0], group)
                try:
                    level = int(args[1])
                except ValueError:
                    raise ValueError(f"bad level {args[1]!r}") from None
                p = PosetElement(gamma, level)
                if p in seen:
                    raise ValueError(f"duplicate element {args[0]} {level}")
                seen.add(p)
                elems.append(p)
            else:
                raise ValueError(f"unknown directive {directive!r}")
        except PosetParseError:
            raise
        except ValueError as exc:
            raise PosetParseError(str(exc), lineno) from None
    if group is None:
        raise PosetParseError("missing group statement", 1)
    if gens is None:
        raise PosetParseError("missing gens statement", 1)
    return CayleyPoset(group, gens, frozenset(elems), convention or "standard")


def emit_poset(poset: CayleyPoset) -> str:
    """Canonical text form; emit(parse(x)) is byte-stable."""
    lines = [
        f"group {format_group(poset.group)}",
        "gens " + " ".join(format_element(e) for e in poset.gens.elements),
        f"conv {poset.convention}",
    ]
    for p in poset.sorted_elements():
        lines.append(f"elem {format_element(p.gamma)} {p.level}")
    return "\n".join(lines) + "\n"
