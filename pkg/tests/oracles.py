"""Brute-force reference computations built straight from the definitions.

Nothing here calls the package's context, presheaf or evaluator code; only
the lattice tables (meet, join, ortho, order) of an ``Oml`` are read.
"""
from __future__ import annotations

from itertools import chain, combinations, product


def powerset(items):
    items = list(items)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def is_boolean_subalgebra(L, sub: frozenset) -> bool:
    if L.bottom not in sub or L.top not in sub:
        return False
    for a in sub:
        if L.ortho(a) not in sub:
            return False
        for b in sub:
            if L.meet(a, b) not in sub or L.join(a, b) not in sub:
                return False
    return all(L.meet(a, L.join(b, c)) == L.join(L.meet(a, b), L.meet(a, c))
               for a in sub for b in sub for c in sub)


def boolean_subalgebras(L) -> list[frozenset]:
    """Every Boolean subalgebra by scanning all subsets; keep ``L.n`` small."""
    inner = [x for x in L if x not in (L.bottom, L.top)]
    out = []
    for extra in powerset(inner):
        sub = frozenset((L.bottom, L.top, *extra))
        if is_boolean_subalgebra(L, sub):
            out.append(sub)
    return out


def atoms_of(L, sub: frozenset) -> list[int]:
    nonzero = [x for x in sub if x != L.bottom]
    return sorted(x for x in nonzero if not any(y != x and L.leq(y, x) for y in nonzero))


def dominate(L, sub: frozenset, a: int) -> int:
    best = L.top
    for b in sub:
        if L.leq(a, b):
            best = L.meet(best, b)
    return best


class NaivePresheaf:
    """Subobjects as dicts ``carrier -> frozenset of atoms``."""

    def __init__(self, L, carriers: list[frozenset]):
        self.L = L
        self.carriers = carriers
        self.atoms = {B: atoms_of(L, B) for B in carriers}

    def above(self, c: int, C: frozenset) -> int:
        hits = [d for d in self.atoms[C] if self.L.leq(c, d)]
        assert len(hits) == 1
        return hits[0]

    def compatible(self, S: dict) -> bool:
        for B in self.carriers:
            for C in self.carriers:
                if C < B:
                    for c in S[B]:
                        if self.above(c, C) not in S[C]:
                            return False
        return True

    def all_subobjects(self) -> list[dict]:
        keys = self.carriers
        out = []
        for combo in product(*(list(powerset(self.atoms[B])) for B in keys)):
            S = {B: frozenset(part) for B, part in zip(keys, combo)}
            if self.compatible(S):
                out.append(S)
        return out

    def delta(self, a: int) -> dict:
        L = self.L
        return {B: frozenset(c for c in self.atoms[B] if L.leq(c, dominate(L, B, a)))
                for B in self.carriers}

    def eps(self, S: dict) -> int:
        L = self.L
        return L.meet_all(L.join_all(S[B]) for B in self.carriers)

    def global_sections(self) -> list[dict]:
        keys = sorted(self.carriers, key=len, reverse=True)
        out = []

        def walk(i: int, chosen: dict) -> None:
            if i == len(keys):
                out.append(dict(chosen))
                return
            B = keys[i]
            for c in self.atoms[B]:
                ok = all(self.above(chosen[D], B) == c for D in keys[:i] if B < D)
                ok = ok and all(self.above(c, D) == chosen[D] for D in keys[:i] if D < B)
                if ok:
                    chosen[B] = c
                    walk(i + 1, chosen)
                    del chosen[B]

        walk(0, {})
        return out


def commutes(L, a: int, b: int) -> bool:
    return a == L.join(L.meet(a, b), L.meet(a, L.ortho(b)))


def hf_all(max_rank: int) -> set[frozenset]:
    """Hereditarily finite sets of rank at most ``max_rank`` as nested frozensets."""
    level: set[frozenset] = {frozenset()}
    for _ in range(max_rank):
        level = {frozenset(s) for s in powerset(level)}
    return level


def collapse(u, atom: int, L) -> frozenset:
    """Crisp set seen by the two-valued homomorphism that sends ``b`` to 1 iff ``atom <= b``."""
    return frozenset(collapse(c, atom, L) for c, v in u.entries if L.leq(atom, v))


def classical(phi, env: dict):
    """Truth of a bounded formula over nested frozensets."""
    from qworlds import formulas as F
    if isinstance(phi, F.Eq):
        return env[phi.left] == env[phi.right]
    if isinstance(phi, F.Mem):
        return env[phi.left] in env[phi.right]
    if isinstance(phi, F.Not):
        return not classical(phi.body, env)
    if isinstance(phi, F.And):
        return classical(phi.left, env) and classical(phi.right, env)
    if isinstance(phi, F.Or):
        return classical(phi.left, env) or classical(phi.right, env)
    if isinstance(phi, F.Implies):
        return (not classical(phi.left, env)) or classical(phi.right, env)
    if isinstance(phi, F.Iff):
        return classical(phi.left, env) == classical(phi.right, env)
    if isinstance(phi, F.ForallIn):
        return all(classical(phi.body, {**env, phi.var: x}) for x in env[phi.bound])
    if isinstance(phi, F.ExistsIn):
        return any(classical(phi.body, {**env, phi.var: x}) for x in env[phi.bound])
    raise TypeError(phi)


def boolean_value(phi, bindings: dict, L) -> int:
    """Value in a Boolean algebra: join of the atoms whose collapse satisfies ``phi``."""
    return L.join_all(p for p in L.atoms
                      if classical(phi, {k: collapse(u, p, L) for k, u in bindings.items()}))
