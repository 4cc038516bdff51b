"""Dedekind reals as finite left-continuous step spectral families.

A :class:`StepReal` with breakpoints ``q_1 < ... < q_k`` and plateaus
``v_0, ..., v_k`` takes the value ``v_i`` at every rational ``r`` with
``q_i < r <= q_{i+1}`` (``q_0 = -inf``, ``q_{k+1} = +inf``).  The value at a
breakpoint is the plateau to its left, so left-continuity holds by
construction.  Joins and meets over all rationals reduce to joins and meets
over the finitely many plateaus.
"""
from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

from .oml import Oml
from .qsets import (AlgebraMismatch, LatticeAlgebra, LSet, SubclAlgebra, hat)


class NotRegular(ValueError):
    pass


class RealLiteralError(ValueError):
    pass


@dataclass(frozen=True)
class StepReal:
    algebra: Any = field(compare=False, repr=False)
    breakpoints: tuple[Fraction, ...]
    plateaus: tuple
    complement: bool = False

    def __post_init__(self):
        if len(self.plateaus) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more plateau than breakpoints")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        for v in self.plateaus:
            if not self.algebra.contains(v):
                raise AlgebraMismatch(f"plateau {v!r} is not in {self.algebra!r}")

    @classmethod
    def make(cls, algebra, breakpoints: Iterable, plateaus: Iterable,
             complement: bool = False) -> "StepReal":
        """Build and canonicalize: merge equal neighbours, drop their breakpoint."""
        bps = [Fraction(q) for q in breakpoints]
        vals = list(plateaus)
        if len(vals) != len(bps) + 1:
            raise ValueError("need exactly one more plateau than breakpoints")
        keep_b, keep_v = [], [vals[0]]
        for q, v in zip(bps, vals[1:]):
            if v == keep_v[-1]:
                continue
            keep_b.append(q)
            keep_v.append(v)
        return cls(algebra, tuple(keep_b), tuple(keep_v), complement)

    @classmethod
    def classical(cls, algebra, q) -> "StepReal":
        """The rational ``q``: bottom up to and including ``q``, top beyond."""
        return cls.make(algebra, [q], [algebra.bottom, algebra.top])

    def __eq__(self, other):
        if not isinstance(other, StepReal):
            return NotImplemented
        return (self.algebra is other.algebra and self.breakpoints == other.breakpoints
                and self.plateaus == other.plateaus and self.complement == other.complement)

    def __hash__(self):
        return hash((self.breakpoints, self.plateaus, self.complement))

    @property
    def tag(self) -> str:
        return self.algebra.tag

    def value(self, r) -> Any:
        return self.plateaus[bisect_left(self.breakpoints, Fraction(r))]

    def pieces(self) -> list[tuple[Fraction | None, Fraction | None]]:
        """Half-open intervals ``(lo, hi]`` on which the value is constant."""
        ends = [None, *self.breakpoints, None]
        return list(zip(ends, ends[1:]))

    def sample_points(self) -> list[Fraction]:
        """One rational inside every piece: each breakpoint, plus one beyond the last."""
        if not self.breakpoints:
            return [Fraction(0)]
        return [*self.breakpoints, self.breakpoints[-1] + 1]

    def is_regular(self) -> bool:
        if not isinstance(self.algebra, SubclAlgebra):
            return True
        sigma = self.algebra.sigma
        return all(sigma.is_regular(v) for v in self.plateaus)

    def show(self) -> str:
        A = self.algebra
        parts = [A.show(self.plateaus[0])]
        for q, v in zip(self.breakpoints, self.plateaus[1:]):
            parts.append(f"|{q}| {A.show(v)}")
        return " ".join(parts)

    def literal(self, name: str = "x") -> str:
        """The ``real name = [...]`` form (lattice-valued reals only)."""
        if not isinstance(self.algebra, LatticeAlgebra):
            raise AlgebraMismatch("literals name lattice elements")
        if self.plateaus[0] != self.algebra.bottom:
            raise RealLiteralError("literal form requires a bottom first plateau")
        L = self.algebra.lattice
        jumps = ", ".join(f"({q}, {L.name(v)})" for q, v in zip(self.breakpoints, self.plateaus[1:]))
        return f"real {name} = [{jumps}]"


def _map(u: StepReal, target, f, complement: bool = False) -> StepReal:
    return StepReal.make(target, u.breakpoints, [f(v) for v in u.plateaus], complement)


# -- the R(u) predicate --------------------------------------------------------

def check_R(u: StepReal) -> dict:
    """Dedekind-real conditions reduced to plateau checks.

    Over Subcl: (i) join of values is top, (ii) join of their stars is top,
    (iii) for each plateau ``i``, ``(v_0 v ... v v_i)** = v_i**``.  Over a
    lattice the same three clauses are checked with ortho for star and
    without the double star, which makes them the spectral-family axioms.
    """
    A = u.algebra
    vals = u.plateaus
    failures: list[tuple[str, Any]] = []
    if isinstance(A, SubclAlgebra):
        sigma = A.sigma
        close = lambda S: sigma.star(sigma.star(S))  # noqa: E731
    else:
        close = lambda x: x  # noqa: E731
    total = A.bottom
    for v in vals:
        total = A.join(total, v)
    if total != A.top:
        failures.append(("i", A.show(total)))
    neg = A.bottom
    for v in vals:
        neg = A.join(neg, A.neg(v))
    if neg != A.top:
        failures.append(("ii", A.show(neg)))
    acc = A.bottom
    for i, v in enumerate(vals):
        acc = A.join(acc, v)
        if close(acc) != close(v):
            failures.append(("iii", i))
    return {"ok": not failures and not u.complement, "failures": failures,
            "complement": u.complement}


def is_real(u: StepReal) -> bool:
    return check_R(u)["ok"]


# -- H, F, G -----------------------------------------------------------------

def _subcl_target(u: StepReal, target: SubclAlgebra) -> None:
    if not isinstance(u.algebra, LatticeAlgebra):
        raise AlgebraMismatch("H takes a lattice-valued family")
    if not isinstance(target, SubclAlgebra) or target.lattice is not u.algebra.lattice:
        raise AlgebraMismatch("target must be the subobject algebra of the same lattice")


def H(X: StepReal, target: SubclAlgebra) -> StepReal:
    """Daseinise every plateau."""
    _subcl_target(X, target)
    return _map(X, target, target.sigma.delta)


def F(u: StepReal, r) -> int:
    """``eps`` of the value at ``r``."""
    if not isinstance(u.algebra, SubclAlgebra):
        raise AlgebraMismatch("F takes a subobject-valued real")
    return u.algebra.sigma.eps(u.value(r))


def G(u: StepReal, target: LatticeAlgebra) -> StepReal:
    """Spectral family ``E_lam = join of F(r) over r < lam`` of a regular real."""
    if not isinstance(u.algebra, SubclAlgebra):
        raise AlgebraMismatch("G takes a subobject-valued real")
    if not isinstance(target, LatticeAlgebra) or target.lattice is not u.algebra.lattice:
        raise AlgebraMismatch("target must be the lattice under the presheaf")
    report = check_R(u)
    if not report["ok"]:
        raise NotRegular(f"not a real: {report['failures']}")
    if not u.is_regular():
        raise NotRegular("some plateau S has S** != S")
    sigma = u.algebra.sigma
    L = target.lattice
    out, acc = [], L.bottom
    for v in u.plateaus:
        # the join over r < lam inside plateau i picks up plateaus 0..i
        acc = L.join(acc, sigma.eps(v))
        out.append(acc)
    return StepReal.make(target, u.breakpoints, out)


def regularise(u: StepReal) -> StepReal:
    if not isinstance(u.algebra, SubclAlgebra):
        raise AlgebraMismatch("regularisation lives on subobject-valued reals")
    sigma = u.algebra.sigma
    return _map(u, u.algebra, lambda S: sigma.star(sigma.star(S)), u.complement)


def star_real(u: StepReal) -> StepReal:
    """Pointwise star; decreasing, so flagged as a complement rather than a real."""
    A = u.algebra
    return _map(u, A, A.neg, not u.complement)


def vreal_bridge(v: StepReal, target: SubclAlgebra) -> StepReal:
    """Lattice-valued real to regular subobject-valued real (pointwise delta)."""
    return H(v, target)


def vreal_bridge_inverse(u: StepReal, target: LatticeAlgebra) -> StepReal:
    """Regular subobject-valued real back to a lattice-valued real (pointwise eps)."""
    return G(u, target)


# -- truth values ---------------------------------------------------------------

def member_truth(u: StepReal, r) -> Any:
    """Truth value of ``r in u``: the plateau at ``r``."""
    return u.value(r)


def merged_points(u: StepReal, v: StepReal) -> list[Fraction]:
    """One rational in each piece of the common refinement of ``u`` and ``v``."""
    bps = sorted(set(u.breakpoints) | set(v.breakpoints))
    if not bps:
        return [Fraction(0)]
    return [*bps, bps[-1] + 1]


def real_truth_eq(u: StepReal, v: StepReal, j: str = "S") -> Any:
    """Meet over the merged pieces of ``u(r) <->_j v(r)``."""
    if u.algebra is not v.algebra:
        raise AlgebraMismatch("reals live in different universes")
    A = u.algebra
    out = A.top
    for r in merged_points(u, v):
        out = A.meet(out, A.iff(j, u.value(r), v.value(r)))
    return out


# -- grid relativization -----------------------------------------------------------

def rational_code(i: int) -> frozenset:
    """The von Neumann ordinal ``i``, used as a distinct name for grid point ``i``."""
    out: frozenset = frozenset()
    for _ in range(i):
        out = out | {out}
    return out


def grid_for(*reals: StepReal) -> list[Fraction]:
    """Breakpoints and their neighbours at distance one."""
    pts: set[Fraction] = set()
    for u in reals:
        for q in u.breakpoints:
            pts |= {q - 1, q, q + 1}
    return sorted(pts) if pts else [Fraction(0)]


def as_lset(u: StepReal, grid: list[Fraction]) -> LSet:
    """``u`` restricted to ``grid``: grid point ``g`` named by a hat-set with value ``u(g)``."""
    A = u.algebra
    return LSet(A, [(hat(A, rational_code(i)), u.value(g)) for i, g in enumerate(grid)])


# -- literals -------------------------------------------------------------------------

_HEADER = re.compile(r"\s*real\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*\[(.*)\]\s*$", re.S)


def _split_pairs(body: str) -> list[tuple[str, str]]:
    pairs = []
    i, n = 0, len(body)
    while i < n:
        while i < n and body[i] in " \t\n,":
            i += 1
        if i >= n:
            break
        if body[i] != "(":
            raise RealLiteralError(f"expected '(' at offset {i}")
        depth, start = 0, i
        while i < n:
            if body[i] == "(":
                depth += 1
            elif body[i] == ")":
                depth -= 1
                if depth == 0:
                    break
            i += 1
        if depth != 0:
            raise RealLiteralError("unbalanced parentheses")
        inner = body[start + 1:i]
        i += 1
        q, sep, elem = inner.partition(",")
        if not sep:
            raise RealLiteralError(f"expected '(q, element)', got {inner!r}")
        pairs.append((q.strip(), elem.strip()))
    return pairs


def parse_real(text: str, algebra: LatticeAlgebra) -> tuple[str, StepReal]:
    """Parse ``real name = [(q1, e1), (q2, e2), ...]``.

    The family starts at bottom, jumps at ``q_i`` to ``e_i``, and must end
    at top.
    """
    m = _HEADER.match(text)
    if m is None:
        raise RealLiteralError(f"not a real literal: {text.strip()!r}")
    name, body = m.group(1), m.group(2)
    L: Oml = algebra.lattice
    bps, vals = [], [L.bottom]
    for q, elem in _split_pairs(body):
        try:
            bps.append(Fraction(q))
        except (ValueError, ZeroDivisionError) as exc:
            raise RealLiteralError(f"bad rational {q!r}") from exc
        try:
            vals.append(L.index(elem))
        except KeyError as exc:
            raise RealLiteralError(f"unknown element {elem!r}") from exc
    if vals[-1] != L.top:
        raise RealLiteralError("the last jump must reach top")
    if any(a >= b for a, b in zip(bps, bps[1:])):
        raise RealLiteralError("breakpoints must be strictly increasing")
    return name, StepReal.make(algebra, bps, vals)


def parse_reals(text: str, algebra: LatticeAlgebra) -> dict[str, StepReal]:
    """All ``real`` literals in ``text``; ``#`` starts a comment."""
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, u = parse_real(line, algebra)
        if name in out:
            raise RealLiteralError(f"real {name!r} defined twice")
        out[name] = u
    return out


# -- enumeration helpers ------------------------------------------------------------------

def chains(lattice: Oml, length: int) -> list[tuple[int, ...]]:
    """Strictly increasing chains ``bottom = v_0 < ... < v_length = top``."""
    out = []

    def walk(prefix: list[int]) -> None:
        if len(prefix) == length + 1:
            if prefix[-1] == lattice.top:
                out.append(tuple(prefix))
            return
        last = prefix[-1]
        for x in lattice:
            if x != last and lattice.leq(last, x):
                walk(prefix + [x])

    walk([lattice.bottom])
    return out


def spectral_families(algebra: LatticeAlgebra, max_jumps: int) -> list[StepReal]:
    """Every canonical family with 1..max_jumps breakpoints at 0, 1, 2, ..."""
    L = algebra.lattice
    out = []
    for k in range(1, max_jumps + 1):
        for chain in chains(L, k):
            out.append(StepReal.make(algebra, range(k), chain))
    return out
