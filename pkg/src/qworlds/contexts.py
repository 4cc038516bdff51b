"""Boolean subalgebras of a finite OML, their Stone spaces and restriction maps."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as _cartesian

from .oml import Oml

DEFAULT_CONTEXT_CAP = 4096


class SizeLimitExceeded(RuntimeError):
    pass


class ElementNotInContext(KeyError):
    pass


@dataclass(frozen=True)
class BooleanContext:
    id: int
    carrier: frozenset[int]
    atoms: tuple[int, ...]
    lattice: Oml = field(repr=False, compare=False)

    @cached_property
    def atom_pos(self) -> dict[int, int]:
        return {c: i for i, c in enumerate(self.atoms)}

    @property
    def full_mask(self) -> int:
        return (1 << len(self.atoms)) - 1

    def mask_of(self, b: int) -> int:
        """Stone representation of ``b`` as a bitmask over ``atoms``."""
        if b not in self.carrier:
            raise ElementNotInContext(f"{self.lattice.name(b)} is not in context {self.id}")
        L = self.lattice
        m = 0
        for i, c in enumerate(self.atoms):
            if L.leq(c, b):
                m |= 1 << i
        return m

    def element_of(self, mask: int) -> int:
        """The carrier element named by a set of atoms (their join)."""
        L = self.lattice
        return L.join_all(c for i, c in enumerate(self.atoms) if mask >> i & 1)

    def dominate(self, a: int) -> int:
        """Smallest carrier element above ``a``."""
        L = self.lattice
        return L.meet_all(b for b in self.carrier if L.leq(a, b))

    def label(self) -> str:
        L = self.lattice
        return "{" + ", ".join(L.name(x) for x in sorted(self.carrier)) + "}"


class ContextPoset:
    """All Boolean subalgebras of ``L`` ordered by inclusion."""

    def __init__(self, lattice: Oml, carriers: list[frozenset[int]]):
        self.lattice = lattice
        carriers = sorted(carriers, key=lambda c: (len(c), sorted(c)))
        self.contexts = tuple(
            BooleanContext(i, c, _atoms_of(lattice, c), lattice) for i, c in enumerate(carriers))
        k = len(self.contexts)
        # below[i] = ids of contexts included in context i (including i)
        self.below = tuple(
            frozenset(j for j in range(k) if self.contexts[j].carrier <= self.contexts[i].carrier)
            for i in range(k))
        self._restrictions: dict[tuple[int, int], tuple[int, ...]] = {}
        for i in range(k):
            for j in self.below[i]:
                self._restrictions[i, j] = self._build_restriction(i, j)

    def __len__(self) -> int:
        return len(self.contexts)

    def __iter__(self):
        return iter(self.contexts)

    def __getitem__(self, i: int) -> BooleanContext:
        return self.contexts[i]

    def leq(self, i: int, j: int) -> bool:
        return i in self.below[j]

    def _build_restriction(self, big: int, small: int) -> tuple[int, ...]:
        L = self.lattice
        B, S = self.contexts[big], self.contexts[small]
        out = []
        for c in B.atoms:
            targets = [i for i, d in enumerate(S.atoms) if L.leq(c, d)]
            if len(targets) != 1:
                raise AssertionError("restriction target not unique")
            out.append(targets[0])
        return tuple(out)

    def restriction(self, big: int, small: int) -> tuple[int, ...]:
        """Map from atom positions of context ``big`` to atom positions of ``small``."""
        return self._restrictions[big, small]

    def restrict_mask(self, big: int, small: int, mask: int) -> int:
        r = self._restrictions[big, small]
        out = 0
        for i, t in enumerate(r):
            if mask >> i & 1:
                out |= 1 << t
        return out

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Pairs ``(small, big)`` with nothing strictly between them."""
        out = []
        for i in range(len(self)):
            strict = self.below[i] - {i}
            for j in strict:
                if not any(j in self.below[m] for m in strict if m != j):
                    out.append((j, i))
        return tuple(sorted(out))

    def maximal(self) -> list[BooleanContext]:
        return [B for B in self.contexts
                if not any(B.id in self.below[C.id] and C.id != B.id for C in self.contexts)]

    def listing(self) -> str:
        return "".join(f"context {B.id}: {B.label()}\n" for B in self.contexts)

    def to_dot(self, name: str = "contexts") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for B in self.contexts:
            lines.append(f'  c{B.id} [label="{B.label()}"];')
        for j, i in self.covers:
            lines.append(f"  c{j} -> c{i};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _atoms_of(L: Oml, carrier: frozenset[int]) -> tuple[int, ...]:
    nonzero = [x for x in carrier if x != L.bottom]
    return tuple(sorted(x for x in nonzero
                        if not any(y != x and L.leq(y, x) for y in nonzero)))


def _closure(L: Oml, seed: set[int]) -> frozenset[int]:
    out = set(seed) | {L.bottom, L.top}
    frontier = list(out)
    while frontier:
        fresh = set()
        for x in frontier:
            fresh.add(L.ortho(x))
            for y in out:
                fresh.add(L.meet(x, y))
                fresh.add(L.join(x, y))
        fresh -= out
        out |= fresh
        frontier = list(fresh)
    return frozenset(out)


def is_boolean_subalgebra(L: Oml, carrier: frozenset[int]) -> bool:
    if L.bottom not in carrier or L.top not in carrier:
        return False
    for x in carrier:
        if L.ortho(x) not in carrier:
            return False
        for y in carrier:
            if L.meet(x, y) not in carrier or L.join(x, y) not in carrier:
                return False
    for x in carrier:
        for y in carrier:
            for z in carrier:
                if L.meet(x, L.join(y, z)) != L.join(L.meet(x, y), L.meet(x, z)):
                    return False
    return True


def enumerate_contexts(L: Oml, cap: int = DEFAULT_CONTEXT_CAP,
                       include_trivial: bool = True) -> ContextPoset:
    """Grow Boolean subalgebras from the trivial one by adjoining commuting elements.

    Every Boolean subalgebra is reached: its elements pairwise commute, so
    adding them one at a time keeps each intermediate closure Boolean.
    """
    start = _closure(L, set())
    seen = {start}
    queue = [start]
    while queue:
        B = queue.pop()
        for x in sorted(L.commutant(B) - B):
            C = _closure(L, set(B) | {x})
            if C in seen:
                continue
            seen.add(C)
            if len(seen) > cap:
                raise SizeLimitExceeded(f"more than {cap} contexts")
            queue.append(C)
    for C in seen:
        if not is_boolean_subalgebra(L, C):
            raise AssertionError(f"closure {sorted(C)} is not Boolean")
    carriers = sorted(seen, key=lambda c: (len(c), sorted(c)))
    if not include_trivial and len(carriers) > 1:
        carriers = [c for c in carriers if c != start]
    return ContextPoset(L, carriers)


def stone_points(B: BooleanContext) -> list[dict[int, int]]:
    """One two-valued homomorphism per atom ``c``: ``b -> 1`` iff ``c <= b``."""
    L = B.lattice
    return [{b: int(L.leq(c, b)) for b in sorted(B.carrier)} for c in B.atoms]


def stone_rep(B: BooleanContext, b: int) -> frozenset[int]:
    """The atoms of ``B`` below ``b``."""
    mask = B.mask_of(b)
    return frozenset(c for i, c in enumerate(B.atoms) if mask >> i & 1)


def all_homomorphisms(B: BooleanContext) -> list[dict[int, int]]:
    """Brute-force enumeration of Boolean homomorphisms ``B -> {0, 1}``."""
    L = B.lattice
    elems = sorted(B.carrier)
    found = []
    for values in _cartesian((0, 1), repeat=len(elems)):
        h = dict(zip(elems, values))
        if h[L.top] != 1 or h[L.bottom] != 0:
            continue
        if all(h[L.ortho(x)] == 1 - h[x] for x in elems) and \
                all(h[L.meet(x, y)] == h[x] & h[y] for x in elems for y in elems):
            found.append(h)
    return found
