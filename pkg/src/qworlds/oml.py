"""Finite orthomodular lattices.

Elements are dense integers ``0..n-1``; a name table keeps the original
string ids so lattices round-trip through files.  Order is stored as
bitmasks of down-sets and up-sets, which makes meets and joins O(1)
lookups once the tables are built.
"""
from __future__ import annotations

import json
from functools import cached_property, reduce
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence


class LatticeError(ValueError):
    """Base class for invalid lattice descriptions."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class NotALattice(LatticeError):
    pass


class NotOrtho(LatticeError):
    pass


class NotOrthomodular(LatticeError):
    pass


IMPLICATIONS = ("S", "C", "R")


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Oml:
    """A validated finite orthomodular lattice.

    Build instances with :func:`verify_oml` or the fixture generators;
    the constructor assumes its inputs were already checked.
    """

    def __init__(self, names: Sequence[str], down: Sequence[int], ortho: Sequence[int],
                 meet: list[list[int]], join: list[list[int]]):
        self.names = tuple(names)
        self.n = len(self.names)
        self._down = tuple(down)
        self._ortho = tuple(ortho)
        self._meet = meet
        self._join = join
        self._index = {name: i for i, name in enumerate(self.names)}
        up = [0] * self.n
        for b in range(self.n):
            for a in _bits(self._down[b]):
                up[a] |= 1 << b
        self._up = tuple(up)
        self.bottom = next(i for i in range(self.n) if self._up[i] == (1 << self.n) - 1)
        self.top = next(i for i in range(self.n) if self._down[i] == (1 << self.n) - 1)

    # -- element access -------------------------------------------------
    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(range(self.n))

    def __getitem__(self, name: str) -> int:
        return self.index(name)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no element named {name!r}") from None

    def name(self, a: int) -> str:
        return self.names[a]

    def __repr__(self) -> str:
        return f"Oml(n={self.n})"

    # -- order and operations -------------------------------------------
    def leq(self, a: int, b: int) -> bool:
        return bool(self._down[b] >> a & 1)

    def below(self, a: int) -> list[int]:
        return _bits(self._down[a])

    def meet(self, a: int, b: int) -> int:
        return self._meet[a][b]

    def join(self, a: int, b: int) -> int:
        return self._join[a][b]

    def ortho(self, a: int) -> int:
        return self._ortho[a]

    def meet_all(self, items: Iterable[int]) -> int:
        return reduce(self.meet, items, self.top)

    def join_all(self, items: Iterable[int]) -> int:
        return reduce(self.join, items, self.bottom)

    @cached_property
    def atoms(self) -> tuple[int, ...]:
        return tuple(a for a in self if a != self.bottom
                     and self._down[a] == (1 << a) | (1 << self.bottom))

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        out = []
        for b in self:
            strict = self._down[b] & ~(1 << b)
            for a in _bits(strict):
                # a is covered by b when nothing lies strictly between them
                between = strict & self._up[a] & ~(1 << a)
                if not between:
                    out.append((a, b))
        return tuple(out)

    # -- quantum implications -------------------------------------------
    def sasaki(self, a: int, b: int) -> int:
        return self.join(self.ortho(a), self.meet(a, b))

    def contrapositive(self, a: int, b: int) -> int:
        return self.sasaki(self.ortho(b), self.ortho(a))

    def relevance(self, a: int, b: int) -> int:
        return self.meet(self.sasaki(a, b), self.contrapositive(a, b))

    def implies(self, j: str, a: int, b: int) -> int:
        if j == "S":
            return self.sasaki(a, b)
        if j == "C":
            return self.contrapositive(a, b)
        if j == "R":
            return self.relevance(a, b)
        raise ValueError(f"unknown implication {j!r}; expected one of S, C, R")

    # -- commutation ----------------------------------------------------
    def commutes(self, a: int, b: int) -> bool:
        return a == self.join(self.meet(a, b), self.meet(a, self.ortho(b)))

    def commutant(self, subset: Iterable[int]) -> frozenset[int]:
        subset = tuple(subset)
        return frozenset(a for a in self if all(self.commutes(a, b) for b in subset))

    def amalg(self, subset: Iterable[int]) -> int:
        """Join of commutant members ``c`` making all ``b ∧ c`` pairwise commute."""
        subset = tuple(set(subset))
        good = []
        for c in self.commutant(subset):
            cut = [self.meet(b, c) for b in subset]
            if all(self.commutes(x, y) for x in cut for y in cut):
                good.append(c)
        return self.join_all(good)

    @cached_property
    def center(self) -> frozenset[int]:
        return self.commutant(range(self.n))

    def is_irreducible(self) -> bool:
        return self.center == {self.bottom, self.top}

    def is_boolean(self) -> bool:
        return len(self.center) == self.n

    @cached_property
    def blocks(self) -> tuple[frozenset[int], ...]:
        from .contexts import enumerate_contexts
        return tuple(b.carrier for b in enumerate_contexts(self).maximal())

    # -- serialization --------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "elements": list(self.names),
            "covers": [[self.names[a], self.names[b]] for a, b in self.covers],
            "ortho": {self.names[a]: self.names[self.ortho(a)] for a in self},
        }

    def to_dot(self, name: str = "L") -> str:
        """Hasse diagram; orthocomplement pairs drawn as dashed edges."""
        lines = [f"graph {name} {{", "  rankdir=BT;"]
        for a in self:
            lines.append(f'  n{a} [label="{self.names[a]}"];')
        for a, b in self.covers:
            lines.append(f"  n{a} -- n{b};")
        for a in self:
            o = self.ortho(a)
            if a < o:
                lines.append(f"  n{a} -- n{o} [style=dashed, constraint=false, color=gray];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def verify_oml(candidate: Mapping) -> Oml:
    """Validate a raw description and return an :class:`Oml`.

    ``candidate`` holds ``elements``, one of ``covers`` or ``leq`` (pairs
    ``[x, y]`` meaning ``x <= y``) and an ``ortho`` map.  The ortho map may
    list each complementary pair once.
    """
    names = [str(e) for e in candidate.get("elements", ())]
    if not names:
        raise NotALattice("lattice has no elements")
    if len(set(names)) != len(names):
        raise NotALattice("duplicate element ids")
    idx = {name: i for i, name in enumerate(names)}
    n = len(names)

    def lookup(x) -> int:
        try:
            return idx[str(x)]
        except KeyError:
            raise NotALattice(f"unknown element {x!r}") from None

    pairs = candidate.get("leq")
    if pairs is None:
        pairs = candidate.get("covers", ())
    down = [1 << i for i in range(n)]
    for x, y in pairs:
        down[lookup(y)] |= 1 << lookup(x)
    # transitive closure, Warshall style on bitmasks
    for k in range(n):
        bit = 1 << k
        for i in range(n):
            if down[i] & bit:
                down[i] |= down[k]
    for a, b in combinations(range(n), 2):
        if down[b] >> a & 1 and down[a] >> b & 1:
            raise NotALattice(f"order is not antisymmetric at {names[a]}, {names[b]}",
                              (names[a], names[b]))

    up = [0] * n
    for b in range(n):
        for a in _bits(down[b]):
            up[a] |= 1 << b
    by_down = {m: i for i, m in enumerate(down)}
    by_up = {m: i for i, m in enumerate(up)}
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            m = _greatest(down[a] & down[b], down, by_down)
            j = _greatest(up[a] & up[b], up, by_up)
            if m is None or j is None:
                kind = "meet" if m is None else "join"
                raise NotALattice(f"{names[a]} and {names[b]} have no {kind}",
                                  (names[a], names[b]))
            meet[a][b] = meet[b][a] = m
            join[a][b] = join[b][a] = j

    raw = candidate.get("ortho", {})
    ortho: list[int | None] = [None] * n
    for x, y in dict(raw).items():
        a, b = lookup(x), lookup(y)
        for p, q in ((a, b), (b, a)):
            if ortho[p] is not None and ortho[p] != q:
                raise NotOrtho(f"ortho is not an involution at {names[p]}", (names[p],))
            ortho[p] = q
    missing = [names[i] for i, o in enumerate(ortho) if o is None]
    if missing:
        raise NotOrtho(f"ortho undefined for {missing}", tuple(missing))

    L = Oml(names, down, ortho, meet, join)
    _check_ortho(L)
    _check_orthomodular(L)
    return L


def _greatest(mask: int, sets: list[int], lookup: dict[int, int]) -> int | None:
    # the greatest element of a down-set is the one whose own down-set is the whole set
    hit = lookup.get(mask)
    if hit is not None and mask >> hit & 1:
        return hit
    return None


def _check_ortho(L: Oml) -> None:
    nm = L.names
    for a in L:
        o = L.ortho(a)
        if L.ortho(o) != a:
            raise NotOrtho(f"ortho is not an involution at {nm[a]}", (nm[a],))
        if L.join(a, o) != L.top:
            raise NotOrtho(f"{nm[a]} v {nm[a]}' is not top", (nm[a], nm[o]))
        if L.meet(a, o) != L.bottom:
            raise NotOrtho(f"{nm[a]} ^ {nm[a]}' is not bottom", (nm[a], nm[o]))
    for a in L:
        for b in L.below(a):
            if not L.leq(L.ortho(a), L.ortho(b)):
                raise NotOrtho(f"ortho does not reverse {nm[b]} <= {nm[a]}", (nm[b], nm[a]))


def _check_orthomodular(L: Oml) -> None:
    for b in L:
        for a in L.below(b):
            if L.join(a, L.meet(b, L.ortho(a))) != b:
                raise NotOrthomodular(
                    f"orthomodular law fails for {L.names[a]} <= {L.names[b]}",
                    (L.names[a], L.names[b]))


def load_oml(path: str | Path) -> Oml:
    text = Path(path).read_text()
    if not text.strip():
        raise ValueError(f"{path}: empty lattice file")
    return verify_oml(json.loads(text))


def implication_criteria_check(L: Oml, arrow: str | Callable[[int, int], int]) -> dict:
    """Check order reflection, modus ponens and modus tollens for an arrow.

    Returns ``{"ok": bool, "failures": [(criterion, a, b), ...]}`` with
    element names in the witnesses.
    """
    f = (lambda a, b: L.implies(arrow, a, b)) if isinstance(arrow, str) else arrow
    failures = []
    for a in L:
        for b in L:
            v = f(a, b)
            if L.leq(a, b) != (v == L.top):
                failures.append(("order", L.names[a], L.names[b]))
            if not L.leq(L.meet(a, v), b):
                failures.append(("modus_ponens", L.names[a], L.names[b]))
            if not L.leq(L.meet(L.ortho(b), v), L.ortho(a)):
                failures.append(("modus_tollens", L.names[a], L.names[b]))
    return {"ok": not failures, "failures": failures}
