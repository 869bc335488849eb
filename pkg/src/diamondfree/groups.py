"""Finite abelian groups as direct products of cyclic factors.

Residue-vector arithmetic, subgroup closure, iterated sumsets and the
period analysis that classifies a generating set as aperiodic (period 1)
or periodic (period d > 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator


class NotGeneratingError(ValueError):
    """The requested quantity is only defined for generating sets."""


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct product Z_f1 x ... x Z_fr; the empty product is the trivial group."""

    factors: tuple[int, ...]

    def __post_init__(self):
        facs = tuple(int(f) for f in self.factors)
        for f in facs:
            if f < 1:
                raise ValueError(f"cyclic factor must be >= 1, got {f}")
        object.__setattr__(self, "factors", facs)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def element(self, residues: int | Iterable[int]) -> "GroupElement":
        """Build an element, reducing each residue modulo its factor."""
        if isinstance(residues, int):
            residues = (residues,)
        res = tuple(int(r) for r in residues)
        if len(res) != self.rank:
            raise ValueError(
                f"expected {self.rank} residues for {format_group(self)}, got {len(res)}"
            )
        return GroupElement(self, tuple(r % f for r, f in zip(res, self.factors)))

    def elements(self) -> Iterator["GroupElement"]:
        """All elements in lexicographic residue order."""
        for res in product(*(range(f) for f in self.factors)):
            yield GroupElement(self, res)


def make_group(factors: Iterable[int]) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(tuple(factors))


@dataclass(frozen=True)
class GroupElement:
    """An element in canonical (componentwise reduced) form."""

    group: FiniteAbelianGroup
    residues: tuple[int, ...]

    def __post_init__(self):
        if len(self.residues) != self.group.rank:
            raise ValueError("residue vector length does not match the group rank")
        for r, f in zip(self.residues, self.group.factors):
            if not 0 <= r < f:
                raise ValueError(f"residue {r} not reduced modulo {f}")

    def _check_same_group(self, other: "GroupElement") -> None:
        if self.group != other.group:
            raise ValueError("elements belong to different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check_same_group(other)
        return GroupElement(
            self.group,
            tuple((a + b) % f for a, b, f in zip(self.residues, other.residues, self.group.factors)),
        )

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check_same_group(other)
        return GroupElement(
            self.group,
            tuple((a - b) % f for a, b, f in zip(self.residues, other.residues, self.group.factors)),
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(
            self.group, tuple((-a) % f for a, f in zip(self.residues, self.group.factors))
        )

    def scaled(self, c: int) -> "GroupElement":
        """Integer multiple c*g; c may be negative."""
        return GroupElement(
            self.group, tuple((a * c) % f for a, f in zip(self.residues, self.group.factors))
        )

    def is_identity(self) -> bool:
        return all(r == 0 for r in self.residues)


@dataclass(frozen=True)
class GeneratorSet:
    """A nonempty set of distinct elements, stored in lexicographic residue order."""

    group: FiniteAbelianGroup
    elements: tuple[GroupElement, ...]

    def __post_init__(self):
        if not self.elements:
            raise ValueError("generator set must be nonempty")
        for e in self.elements:
            if e.group != self.group:
                raise ValueError("generator does not belong to the group")
        ordered = tuple(sorted(self.elements, key=lambda e: e.residues))
        if any(a == b for a, b in zip(ordered, ordered[1:])):
            raise ValueError("duplicate generator")
        object.__setattr__(self, "elements", ordered)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, e: GroupElement) -> bool:
        return e in self.elements

    def negated(self) -> "GeneratorSet":
        return GeneratorSet(self.group, tuple(-e for e in self.elements))


def make_gens(group: FiniteAbelianGroup, residue_vectors: Iterable[int | Iterable[int]]) -> GeneratorSet:
    return GeneratorSet(group, tuple(group.element(r) for r in residue_vectors))


@dataclass(frozen=True)
class PeriodInfo:
    """Period d = gcd of lengths of generator sums returning to the identity."""

    period_d: int
    aperiodic: bool
    difference_subgroup_size: int


def generated_subgroup(
    group: FiniteAbelianGroup, seed: Iterable[GroupElement]
) -> frozenset[GroupElement]:
    """Smallest subgroup containing ``seed``, by closure under addition.

    A finite additively closed set containing the identity is already a
    subgroup, so closing under + alone suffices.
    """
    seeds = list(seed)
    for e in seeds:
        if e.group != group:
            raise ValueError("seed element does not belong to the group")
    closure = {group.identity()}
    frontier = list(closure)
    while frontier:
        nxt = []
        for x in frontier:
            for s in seeds:
                y = x + s
                if y not in closure:
                    closure.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(closure)


def is_generating(group: FiniteAbelianGroup, gens: GeneratorSet) -> bool:
    return len(generated_subgroup(group, gens.elements)) == group.order


_SUMSET_CACHE: dict[tuple[GeneratorSet, int], frozenset[GroupElement]] = {}


def iterated_sumset(gens: GeneratorSet, k: int) -> frozenset[GroupElement]:
    """The set k x H of all k-term sums of generators, with repetition.

    k = 0 is the empty sum {identity}.  Results are cached per (H, k); the
    fill is idempotent, so concurrent computation is harmless.
    """
    if k < 0:
        raise ValueError(f"sumset exponent must be >= 0, got {k}")
    key = (gens, k)
    cached = _SUMSET_CACHE.get(key)
    if cached is not None:
        return cached
    current = _SUMSET_CACHE.get((gens, 0))
    if current is None:
        current = frozenset({gens.group.identity()})
        _SUMSET_CACHE[(gens, 0)] = current
    for j in range(1, k + 1):
        nxt = _SUMSET_CACHE.get((gens, j))
        if nxt is None:
            nxt = frozenset({x + h for x in current for h in gens.elements})
            _SUMSET_CACHE[(gens, j)] = nxt
        current = nxt
    return current


def period(
    group: FiniteAbelianGroup, gens: GeneratorSet, *, method: str = "quotient"
) -> PeriodInfo:
    """Period d of a generating set: gcd{l >= 1 : identity in l x H}.

    ``method="quotient"`` (primary): let K be the subgroup generated by the
    pairwise differences H - H; d is the order of h0 + K in the quotient
    group, for any h0 in H.  ``method="gcd-oracle"`` walks the sumset
    sequence up to 4m^2 steps and takes the gcd of the return lengths
    directly; it exists as an independent cross-check.
    """
    if method not in ("quotient", "gcd-oracle"):
        raise ValueError(f"unknown period method {method!r}")
    if not is_generating(group, gens):
        raise NotGeneratingError("period is undefined: H does not generate the group")
    diffs = {a - b for a in gens.elements for b in gens.elements}
    subgroup = generated_subgroup(group, diffs)
    if method == "quotient":
        h0 = gens.elements[0]
        acc = h0
        d = 1
        while acc not in subgroup:
            acc = acc + h0
            d += 1
    else:
        d = _period_gcd_oracle(group, gens)
    return PeriodInfo(period_d=d, aperiodic=(d == 1), difference_subgroup_size=len(subgroup))


def _period_gcd_oracle(group: FiniteAbelianGroup, gens: GeneratorSet) -> int:
    """gcd of {l <= 4m^2 : identity in l x H}, by direct sumset iteration."""
    m = group.order
    elems = list(group.elements())
    index = {e: i for i, e in enumerate(elems)}
    steps = [[index[e + h] for h in gens.elements] for e in elems]
    ident = index[group.identity()]
    current = {ident}
    g = 0
    for ell in range(1, 4 * m * m + 1):
        current = {t for x in current for t in steps[x]}
        if ident in current:
            g = math.gcd(g, ell)
            if g == 1:
                break
    if g == 0:
        raise AssertionError("generating set never returned to the identity")
    return g


# Literal syntax shared by files and the CLI: factors joined by "x"
# (e.g. "3", "2x4"); element residues joined by ":" (e.g. "2", "1:3").

def parse_group(text: str) -> FiniteAbelianGroup:
    parts = text.strip().split("x")
    if not text.strip():
        raise ValueError("empty group literal")
    try:
        factors = tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"bad group literal {text!r}") from None
    return make_group(factors)


def format_group(group: FiniteAbelianGroup) -> str:
    if not group.factors:
        return "1"
    return "x".join(str(f) for f in group.factors)


def parse_element(text: str, group: FiniteAbelianGroup) -> GroupElement:
    parts = text.strip().split(":")
    if not text.strip():
        raise ValueError("empty element literal")
    try:
        residues = tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"bad element literal {text!r}") from None
    if len(residues) != group.rank:
        raise ValueError(
            f"element literal {text!r} has {len(residues)} residues, "
            f"group {format_group(group)} needs {group.rank}"
        )
    return group.element(residues)


def format_element(e: GroupElement) -> str:
    return ":".join(str(r) for r in e.residues)
