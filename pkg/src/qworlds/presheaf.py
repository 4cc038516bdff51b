"""Spectral presheaf of a finite OML and the algebra of its clopen subobjects.

A subobject is stored as one bitmask per context (bit ``k`` set when the
``k``-th atom of that context is in the component).  In the finite case
every subset of a Stone space is clopen, so the only condition is
compatibility with restriction maps.
"""
from __future__ import annotations

import random
from functools import cached_property, reduce
from itertools import product as _cartesian
from typing import Iterable, Iterator

from .contexts import (DEFAULT_CONTEXT_CAP, ContextPoset, SizeLimitExceeded,
                       enumerate_contexts)
from .oml import Oml

DEFAULT_SUBCL_CAP = 1 << 20


class MismatchedPresheaf(ValueError):
    pass


class NotCompatible(ValueError):
    pass


class NotLowerSet(AssertionError):
    pass


class ClopenSubobject:
    __slots__ = ("sigma", "parts", "_hash")

    def __init__(self, sigma: "SpectralPresheaf", parts: tuple[int, ...]):
        self.sigma = sigma
        self.parts = parts
        self._hash = hash(parts)

    def __eq__(self, other):
        if not isinstance(other, ClopenSubobject):
            return NotImplemented
        return self.sigma is other.sigma and self.parts == other.parts

    def __hash__(self):
        return self._hash

    def __and__(self, other):
        return self.sigma.meet(self, other)

    def __or__(self, other):
        return self.sigma.join(self, other)

    def __le__(self, other):
        return self.sigma.leq(self, other)

    def __ge__(self, other):
        return self.sigma.leq(other, self)

    def __lt__(self, other):
        return self != other and self.sigma.leq(self, other)

    @property
    def star(self) -> "ClopenSubobject":
        return self.sigma.star(self)

    def __repr__(self):
        return f"Subobject({self.sigma.describe(self)})"


class SpectralPresheaf:
    """The presheaf of Stone spaces over the context poset, with Subcl operations."""

    def __init__(self, lattice: Oml, poset: ContextPoset | None = None,
                 context_cap: int = DEFAULT_CONTEXT_CAP):
        self.lattice = lattice
        self.poset = poset if poset is not None else enumerate_contexts(lattice, cap=context_cap)
        P = self.poset
        self.k = len(P)
        # immediate subcontexts; compatibility along covers implies it everywhere
        self._lower_covers = tuple(
            tuple(j for j, i2 in P.covers if i2 == i) for i in range(self.k))
        self._elem_of = [
            [B.element_of(m) for m in range(1 << len(B.atoms))] for B in P.contexts]
        self.top = ClopenSubobject(self, tuple(B.full_mask for B in P.contexts))
        self.bottom = ClopenSubobject(self, (0,) * self.k)
        self._delta = tuple(self._build_delta(a) for a in lattice)
        self._eps: dict[tuple[int, ...], int] = {}

    def __repr__(self):
        return f"SpectralPresheaf(contexts={self.k})"

    # -- construction ---------------------------------------------------
    def _build_delta(self, a: int) -> ClopenSubobject:
        parts = tuple(B.mask_of(B.dominate(a)) for B in self.poset.contexts)
        return ClopenSubobject(self, parts)

    def is_compatible(self, parts: tuple[int, ...]) -> bool:
        P = self.poset
        for i in range(self.k):
            for j in self._lower_covers[i]:
                if P.restrict_mask(i, j, parts[i]) & ~parts[j]:
                    return False
        return True

    def make(self, parts: Iterable[int]) -> ClopenSubobject:
        parts = tuple(parts)
        if len(parts) != self.k:
            raise ValueError(f"expected {self.k} components, got {len(parts)}")
        for B, m in zip(self.poset.contexts, parts):
            if m < 0 or m > B.full_mask:
                raise ValueError(f"component {m} out of range for context {B.id}")
        if not self.is_compatible(parts):
            raise NotCompatible("components are not compatible with restriction maps")
        return ClopenSubobject(self, parts)

    def from_atoms(self, comps: dict[int, Iterable[int]]) -> ClopenSubobject:
        """Build from ``{context_id: atoms}``; unlisted contexts are empty."""
        parts = [0] * self.k
        for i, atoms in comps.items():
            B = self.poset[i]
            for c in atoms:
                parts[i] |= 1 << B.atom_pos[c]
        return self.make(parts)

    def _check(self, *items: ClopenSubobject) -> None:
        for s in items:
            if s.sigma is not self:
                raise MismatchedPresheaf("subobject belongs to a different presheaf")

    def describe(self, S: ClopenSubobject) -> str:
        L = self.lattice
        chunks = []
        for B, m in zip(self.poset.contexts, S.parts):
            atoms = [L.name(c) for i, c in enumerate(B.atoms) if m >> i & 1]
            chunks.append(f"{B.id}:{{{','.join(atoms)}}}")
        return " ".join(chunks)

    # -- lattice operations ---------------------------------------------
    def meet(self, S: ClopenSubobject, T: ClopenSubobject) -> ClopenSubobject:
        self._check(S, T)
        return ClopenSubobject(self, tuple(x & y for x, y in zip(S.parts, T.parts)))

    def join(self, S: ClopenSubobject, T: ClopenSubobject) -> ClopenSubobject:
        self._check(S, T)
        return ClopenSubobject(self, tuple(x | y for x, y in zip(S.parts, T.parts)))

    def leq(self, S: ClopenSubobject, T: ClopenSubobject) -> bool:
        self._check(S, T)
        return all(not x & ~y for x, y in zip(S.parts, T.parts))

    def meet_all(self, items: Iterable[ClopenSubobject]) -> ClopenSubobject:
        return reduce(self.meet, items, self.top)

    def join_all(self, items: Iterable[ClopenSubobject]) -> ClopenSubobject:
        return reduce(self.join, items, self.bottom)

    # -- daseinisation and its adjoint ------------------------------------
    def delta(self, a: int) -> ClopenSubobject:
        return self._delta[a]

    def eps(self, S: ClopenSubobject) -> int:
        """Meet over contexts of the element each component names."""
        self._check(S)
        hit = self._eps.get(S.parts)
        if hit is None:
            L = self.lattice
            hit = L.meet_all(self._elem_of[i][m] for i, m in enumerate(S.parts))
            self._eps[S.parts] = hit
        return hit

    def eps_adjoint(self, S: ClopenSubobject) -> int:
        """Join of all ``a`` with ``delta(a) <= S``; independent route to :meth:`eps`."""
        L = self.lattice
        return L.join_all(a for a in L if self.leq(self._delta[a], S))

    def star(self, S: ClopenSubobject) -> ClopenSubobject:
        return self._delta[self.lattice.ortho(self.eps(S))]

    def is_regular(self, S: ClopenSubobject) -> bool:
        return self.star(self.star(S)) == S

    # -- mirrored implications --------------------------------------------
    def implies_s(self, S: ClopenSubobject, T: ClopenSubobject) -> ClopenSubobject:
        s_star = self.star(S)
        return self.join(s_star, self.star(self.join(s_star, self.star(T))))

    def implies_c(self, S: ClopenSubobject, T: ClopenSubobject) -> ClopenSubobject:
        return self.implies_s(self.star(T), self.star(S))

    def implies_r(self, S: ClopenSubobject, T: ClopenSubobject) -> ClopenSubobject:
        both = self.meet(self.implies_s(S, T), self.implies_c(S, T))
        return self.star(self.star(both))

    def implies(self, j: str, S: ClopenSubobject, T: ClopenSubobject) -> ClopenSubobject:
        if j == "S":
            return self.implies_s(S, T)
        if j == "C":
            return self.implies_c(S, T)
        if j == "R":
            return self.implies_r(S, T)
        raise ValueError(f"unknown implication {j!r}; expected one of S, C, R")

    def iff(self, j: str, S: ClopenSubobject, T: ClopenSubobject) -> ClopenSubobject:
        return self.meet(self.implies(j, S, T), self.implies(j, T, S))

    # -- commutativity ------------------------------------------------------
    def sub_commutes(self, S: ClopenSubobject, T: ClopenSubobject) -> bool:
        return self.lattice.commutes(self.eps(S), self.eps(T))

    def cp_identity_holds(self, S: ClopenSubobject, T: ClopenSubobject) -> bool:
        """``S** = (S* v (T* ^ T**))*``, using only lattice operations and star."""
        t_star = self.star(T)
        rhs = self.star(self.join(self.star(S), self.meet(t_star, self.star(t_star))))
        return self.star(self.star(S)) == rhs

    # -- enumeration and sampling ---------------------------------------------
    @cached_property
    def candidate_count(self) -> int:
        return 1 << sum(len(B.atoms) for B in self.poset.contexts)

    def enumerable(self, cap: int = DEFAULT_SUBCL_CAP) -> bool:
        return self.candidate_count <= cap

    def _allowed(self, i: int, chosen: list[int]) -> int:
        P = self.poset
        B = P[i]
        allowed = B.full_mask
        for j in self._lower_covers[i]:
            r = P.restriction(i, j)
            for pos, t in enumerate(r):
                if not chosen[j] >> t & 1:
                    allowed &= ~(1 << pos)
        return allowed

    def subobjects(self, cap: int = DEFAULT_SUBCL_CAP) -> list[ClopenSubobject]:
        """All clopen subobjects, found by backtracking over contexts in size order."""
        if not self.enumerable(cap):
            raise SizeLimitExceeded(
                f"{self.candidate_count} candidate families exceed the cap {cap}")
        out: list[ClopenSubobject] = []
        chosen = [0] * self.k

        def walk(i: int) -> None:
            if i == self.k:
                out.append(ClopenSubobject(self, tuple(chosen)))
                return
            allowed = self._allowed(i, chosen)
            sub = allowed
            while True:
                chosen[i] = sub
                walk(i + 1)
                if sub == 0:
                    break
                sub = (sub - 1) & allowed
            chosen[i] = 0

        walk(0)
        return sorted(out, key=lambda s: s.parts)

    def random_subobject(self, rng: random.Random) -> ClopenSubobject:
        """A random compatible family; density varies per draw."""
        p = rng.random()
        chosen = [0] * self.k
        for i in range(self.k):
            allowed = self._allowed(i, chosen)
            m = 0
            for pos in range(len(self.poset[i].atoms)):
                if allowed >> pos & 1 and rng.random() < p:
                    m |= 1 << pos
            chosen[i] = m
        return ClopenSubobject(self, tuple(chosen))

    def sample_subobjects(self, rng: random.Random, count: int) -> list[ClopenSubobject]:
        """Mix of random families and lattice/star combinations of delta-images."""
        L = self.lattice
        out = []
        for n in range(count):
            kind = n % 3
            if kind == 0:
                out.append(self.random_subobject(rng))
            elif kind == 1:
                a, b = rng.randrange(L.n), rng.randrange(L.n)
                S, T = self._delta[a], self._delta[b]
                op = rng.choice(("meet", "join", "star_join", "meet_star"))
                if op == "meet":
                    out.append(self.meet(S, T))
                elif op == "join":
                    out.append(self.join(S, T))
                elif op == "star_join":
                    out.append(self.join(self.star(S), T))
                else:
                    out.append(self.meet(S, self.star(T)))
            else:
                S = self.random_subobject(rng)
                out.append(self.join(S, self._delta[rng.randrange(L.n)]))
        return out

    def population(self, rng: random.Random, samples: int,
                   cap: int = DEFAULT_SUBCL_CAP) -> tuple[list[ClopenSubobject], str]:
        """All subobjects when enumerable, else ``samples`` sampled ones."""
        if self.enumerable(cap):
            return self.subobjects(cap), "exhaustive"
        return self.sample_subobjects(rng, samples), f"sampled({samples})"

    # -- topos-side truth -----------------------------------------------------
    def global_sections(self) -> list[tuple[int, ...]]:
        """Compatible choices of one atom position per context."""
        P = self.poset
        out = []
        choice = [0] * self.k

        def walk(i: int) -> None:
            if i == self.k:
                out.append(tuple(choice))
                return
            for pos in range(len(P[i].atoms)):
                ok = all(P.restriction(i, j)[pos] == choice[j] for j in self._lower_covers[i])
                if ok:
                    choice[i] = pos
                    walk(i + 1)

        walk(0)
        return out

    def truth_value(self, S: ClopenSubobject, w: ClopenSubobject) -> frozenset[int]:
        """Contexts where ``w_B`` is contained in ``S_B``; checked to be a lower set."""
        self._check(S, w)
        found = frozenset(i for i in range(self.k) if not w.parts[i] & ~S.parts[i])
        for i in found:
            missing = self.poset.below[i] - found
            if missing:
                raise NotLowerSet(f"context {min(missing)} lies below {i} but is not included")
        return found

    def pseudostate(self, p: int) -> ClopenSubobject:
        return self._delta[p]

    def to_dot(self, S: ClopenSubobject, name: str = "subobject") -> str:
        L = self.lattice
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  compound=true;"]
        for B, m in zip(self.poset.contexts, S.parts):
            lines.append(f"  subgraph cluster_{B.id} {{")
            lines.append(f'    label="{B.label()}";')
            for pos, c in enumerate(B.atoms):
                style = ', style=filled, fillcolor="#f4b942"' if m >> pos & 1 else ""
                lines.append(f'    p{B.id}_{pos} [label="{L.name(c)}"{style}];')
            lines.append("  }")
        for j, i in self.poset.covers:
            for pos, t in enumerate(self.poset.restriction(i, j)):
                lines.append(f"  p{i}_{pos} -> p{j}_{t} [color=gray];")
        lines.append("}")
        return "\n".join(lines) + "\n"


class EQuotient:
    """Subcl modulo ``S ~ T iff eps(S) = eps(T)``, classes keyed by ``delta(eps(S))``."""

    def __init__(self, sigma: SpectralPresheaf, cap: int = DEFAULT_SUBCL_CAP):
        self.sigma = sigma
        self.classes: dict[ClopenSubobject, list[ClopenSubobject]] | None = None
        if sigma.enumerable(cap):
            self.classes = {}
            for S in sigma.subobjects(cap):
                self.classes.setdefault(self.canon(S), []).append(S)

    @property
    def materialized(self) -> bool:
        return self.classes is not None

    def canon(self, S: ClopenSubobject) -> ClopenSubobject:
        return self.sigma.delta(self.sigma.eps(S))

    def f(self, a: int) -> ClopenSubobject:
        return self.canon(self.sigma.delta(a))

    def g(self, cls: ClopenSubobject) -> int:
        return self.sigma.eps(cls)

    def keys(self) -> list[ClopenSubobject]:
        if self.classes is not None:
            return list(self.classes)
        return [self.f(a) for a in self.sigma.lattice]

    def leq(self, x: ClopenSubobject, y: ClopenSubobject) -> bool:
        return self.meet(x, y) == self.canon(x)

    def meet(self, x: ClopenSubobject, y: ClopenSubobject) -> ClopenSubobject:
        return self.canon(self.sigma.meet(x, y))

    def join(self, x: ClopenSubobject, y: ClopenSubobject) -> ClopenSubobject:
        """Meet of all classes above both, as the quotient order defines it."""
        result = self.canon(self.sigma.top)
        for z in self.keys():
            if self.leq(x, z) and self.leq(y, z):
                result = self.meet(result, z)
        return result

    def ortho(self, x: ClopenSubobject) -> ClopenSubobject:
        return self.canon(self.sigma.star(x))


def quotient_E(sigma: SpectralPresheaf, cap: int = DEFAULT_SUBCL_CAP) -> EQuotient:
    return EQuotient(sigma, cap)


def brute_force_sections(sigma: SpectralPresheaf) -> list[tuple[int, ...]]:
    """Global sections by filtering the full product of choices."""
    P = sigma.poset
    ranges = [range(len(B.atoms)) for B in P.contexts]
    found = []
    for choice in _cartesian(*ranges):
        if all(P.restriction(i, j)[choice[i]] == choice[j]
               for i in range(len(P)) for j in P.below[i]):
            found.append(choice)
    return found


def iter_pairs(items: list, rng: random.Random, budget: int) -> Iterator[tuple]:
    """All ordered pairs when they fit in ``budget``, else ``budget`` random pairs."""
    if len(items) ** 2 <= budget:
        for x in items:
            for y in items:
                yield x, y
    else:
        for _ in range(budget):
            yield rng.choice(items), rng.choice(items)
