"""Lattice-valued set-theoretic universes at finite rank.

An :class:`LSet` is a finite function from LSets to values of an algebra,
either an OML (:class:`LatticeAlgebra`) or the clopen subobjects of its
spectral presheaf (:class:`SubclAlgebra`).  LSets are hash-consed per
algebra, so structurally equal sets are the same object and evaluation
memo tables can key on identity.
"""
from __future__ import annotations

import json
import random
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

from .formulas import (And, Eq, Exists, ExistsIn, Forall, ForallIn, Formula, Iff, Implies,
                       Mem, Not, Or, UnboundVariable, free_vars, is_delta0, is_negation_free,
                       parse)
from .oml import Oml
from .presheaf import ClopenSubobject, SpectralPresheaf

DEFAULT_RANK_CAP = 4
DEFAULT_WIDTH_CAP = 4


class AlgebraMismatch(TypeError):
    pass


class UnboundedQuantifier(ValueError):
    pass


class FormulaNotDelta0(ValueError):
    pass


class FormulaNotNegationFree(ValueError):
    pass


class LiteralParseError(ValueError):
    pass


class RelativizedWarning(UserWarning):
    pass


# -- algebras -----------------------------------------------------------------

class LatticeAlgebra:
    """An OML with its three arrows and orthocomplement as negation."""

    tag = "L"

    def __init__(self, lattice: Oml):
        self.lattice = lattice
        self.top = lattice.top
        self.bottom = lattice.bottom
        self.interned: dict[frozenset, LSet] = {}
        self.serial = 0

    def contains(self, x: Any) -> bool:
        return isinstance(x, int) and 0 <= x < self.lattice.n

    def meet(self, x: int, y: int) -> int:
        return self.lattice.meet(x, y)

    def join(self, x: int, y: int) -> int:
        return self.lattice.join(x, y)

    def leq(self, x: int, y: int) -> bool:
        return self.lattice.leq(x, y)

    def neg(self, x: int) -> int:
        return self.lattice.ortho(x)

    def implies(self, j: str, x: int, y: int) -> int:
        return self.lattice.implies(j, x, y)

    def iff(self, j: str, x: int, y: int) -> int:
        return self.meet(self.implies(j, x, y), self.implies(j, y, x))

    def show(self, x: int) -> str:
        return self.lattice.name(x)

    def __repr__(self):
        return f"LatticeAlgebra({self.lattice!r})"


class SubclAlgebra:
    """Clopen subobjects with the star negation and mirrored arrows."""

    tag = "Subcl"

    def __init__(self, sigma: SpectralPresheaf):
        self.sigma = sigma
        self.lattice = sigma.lattice
        self.top = sigma.top
        self.bottom = sigma.bottom
        self.interned: dict[frozenset, LSet] = {}
        self.serial = 0

    def contains(self, x: Any) -> bool:
        return isinstance(x, ClopenSubobject) and x.sigma is self.sigma

    def meet(self, x, y):
        return self.sigma.meet(x, y)

    def join(self, x, y):
        return self.sigma.join(x, y)

    def leq(self, x, y) -> bool:
        return self.sigma.leq(x, y)

    def neg(self, x):
        return self.sigma.star(x)

    def implies(self, j: str, x, y):
        return self.sigma.implies(j, x, y)

    def iff(self, j: str, x, y):
        return self.sigma.iff(j, x, y)

    def show(self, x) -> str:
        return self.sigma.describe(x)

    def __repr__(self):
        return f"SubclAlgebra({self.sigma!r})"


Algebra = LatticeAlgebra | SubclAlgebra


# -- sets ---------------------------------------------------------------------

class LSet:
    __slots__ = ("algebra", "entries", "rank", "uid", "__weakref__")

    def __new__(cls, algebra: Algebra, entries: Iterable[tuple["LSet", Any]] | Mapping = ()):
        items = dict(entries.items() if isinstance(entries, Mapping) else entries)
        key = frozenset(items.items())
        hit = algebra.interned.get(key)
        if hit is not None:
            return hit
        for child, value in items.items():
            if not isinstance(child, LSet) or child.algebra is not algebra:
                raise AlgebraMismatch("child belongs to a different algebra")
            if not algebra.contains(value):
                raise AlgebraMismatch(f"value {value!r} is not in {algebra!r}")
        self = object.__new__(cls)
        self.algebra = algebra
        self.entries = tuple(sorted(items.items(), key=lambda kv: kv[0].uid))
        self.rank = 1 + max((c.rank for c in items), default=-1)
        self.uid = algebra.serial
        algebra.serial += 1
        algebra.interned[key] = self
        return self

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def domain(self) -> list["LSet"]:
        return [c for c, _ in self.entries]

    def __call__(self, child: "LSet"):
        for c, v in self.entries:
            if c is child:
                return v
        raise KeyError("not in the domain")

    def __repr__(self):
        return f"LSet#{self.uid}(rank={self.rank}, |dom|={len(self.entries)})"

    def show(self) -> str:
        inner = ", ".join(f"<{c.show()}, {self.algebra.show(v)}>" for c, v in self.entries)
        return "{" + inner + "}"


def empty(algebra: Algebra) -> LSet:
    return LSet(algebra, ())


# -- hereditarily finite literals and the hat embedding ----------------------

def parse_hf(text: str) -> frozenset:
    """Parse ``{}``, ``{{}}``, ``{{}, {{}}}`` ... into nested frozensets."""
    s = re.sub(r"\s+", "", text)
    pos = 0

    def item() -> frozenset:
        nonlocal pos
        if pos >= len(s) or s[pos] != "{":
            raise LiteralParseError(f"expected '{{' at {pos} in {text!r}")
        pos += 1
        members = []
        if pos < len(s) and s[pos] == "}":
            pos += 1
            return frozenset()
        while True:
            members.append(item())
            if pos < len(s) and s[pos] == ",":
                pos += 1
                continue
            if pos < len(s) and s[pos] == "}":
                pos += 1
                return frozenset(members)
            raise LiteralParseError(f"expected ',' or '}}' at {pos} in {text!r}")

    if s == "∅":
        return frozenset()
    out = item()
    if pos != len(s):
        raise LiteralParseError(f"trailing input at {pos} in {text!r}")
    return out


def hf_text(x: frozenset) -> str:
    return "{" + ", ".join(sorted(hf_text(y) for y in x)) + "}"


def hat(algebra: Algebra, x: frozenset | str) -> LSet:
    """Embed a hereditarily finite set, every member getting value top."""
    if isinstance(x, str):
        x = parse_hf(x)
    return LSet(algebra, [(hat(algebra, y), algebra.top) for y in x])


def hf_sets(max_rank: int) -> list[frozenset]:
    """All hereditarily finite sets of rank <= ``max_rank``."""
    level = [frozenset()]
    for _ in range(max_rank):
        universe = level
        level = []
        for mask in range(1 << len(universe)):
            level.append(frozenset(universe[i] for i in range(len(universe)) if mask >> i & 1))
    return sorted(level, key=lambda s: (hf_rank(s), hf_text(s)))


def hf_rank(x: frozenset) -> int:
    return 1 + max((hf_rank(y) for y in x), default=-1)


# -- evaluation ---------------------------------------------------------------

@dataclass
class Environment:
    bindings: dict[str, LSet]
    j: str = "S"
    domain: list[LSet] | None = None
    algebra: Algebra | None = field(default=None, repr=False)

    def resolve_algebra(self) -> Algebra:
        algs = {id(u.algebra): u.algebra for u in self.bindings.values()}
        if self.algebra is not None:
            algs.setdefault(id(self.algebra), self.algebra)
        if len(algs) != 1:
            raise AlgebraMismatch("bindings must share exactly one algebra")
        return next(iter(algs.values()))


class Evaluator:
    """Memoized truth values over one algebra with a fixed arrow ``j``.

    ``domain`` switches on the relativized mode, where unbounded
    quantifiers range over the given finite list instead of the whole
    universe.
    """

    def __init__(self, algebra: Algebra, j: str = "S", domain: list[LSet] | None = None):
        if j not in ("S", "C", "R"):
            raise ValueError(f"unknown implication {j!r}")
        self.algebra = algebra
        self.j = j
        self.domain = domain
        self._eq: dict[tuple[int, int], Any] = {}
        self._mem: dict[tuple[int, int], Any] = {}
        self._memo: dict[tuple, Any] = {}

    def eq(self, x: LSet, y: LSet):
        key = (x.uid, y.uid) if x.uid <= y.uid else (y.uid, x.uid)
        hit = self._eq.get(key)
        if hit is None:
            A, j = self.algebra, self.j
            hit = A.top
            for xc, xv in x.entries:
                hit = A.meet(hit, A.implies(j, xv, self.mem(xc, y)))
            for yc, yv in y.entries:
                hit = A.meet(hit, A.implies(j, yv, self.mem(yc, x)))
            self._eq[key] = hit
        return hit

    def mem(self, x: LSet, y: LSet):
        key = (x.uid, y.uid)
        hit = self._mem.get(key)
        if hit is None:
            A = self.algebra
            hit = A.bottom
            for yc, yv in y.entries:
                hit = A.join(hit, A.meet(yv, self.eq(yc, x)))
            self._mem[key] = hit
        return hit

    def value(self, phi: Formula, bindings: Mapping[str, LSet]):
        if self.domain is None and not is_delta0(phi):
            raise UnboundedQuantifier(
                "unbounded quantifiers range over an infinite universe; "
                "pass a finite domain for relativized evaluation")
        if self.domain is not None and not is_delta0(phi):
            warnings.warn("unbounded quantifiers evaluated over a finite domain (relativized)",
                          RelativizedWarning, stacklevel=2)
        unbound = free_vars(phi) - set(bindings)
        if unbound:
            raise UnboundVariable(f"unbound variables: {', '.join(sorted(unbound))}")
        for u in bindings.values():
            if u.algebra is not self.algebra:
                raise AlgebraMismatch("binding belongs to a different algebra")
        return self._value(phi, dict(bindings))

    def _value(self, phi: Formula, env: dict[str, LSet]):
        fv = free_vars(phi)
        key = (phi, tuple(sorted((v, env[v].uid) for v in fv)))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        A, j = self.algebra, self.j
        if isinstance(phi, Eq):
            out = self.eq(env[phi.left], env[phi.right])
        elif isinstance(phi, Mem):
            out = self.mem(env[phi.left], env[phi.right])
        elif isinstance(phi, Not):
            out = A.neg(self._value(phi.body, env))
        elif isinstance(phi, And):
            out = A.meet(self._value(phi.left, env), self._value(phi.right, env))
        elif isinstance(phi, Or):
            out = A.join(self._value(phi.left, env), self._value(phi.right, env))
        elif isinstance(phi, Implies):
            out = A.implies(j, self._value(phi.left, env), self._value(phi.right, env))
        elif isinstance(phi, Iff):
            out = A.iff(j, self._value(phi.left, env), self._value(phi.right, env))
        elif isinstance(phi, ForallIn):
            out = A.top
            for child, v in env[phi.bound].entries:
                out = A.meet(out, A.implies(j, v, self._value(phi.body, {**env, phi.var: child})))
        elif isinstance(phi, ExistsIn):
            out = A.bottom
            for child, v in env[phi.bound].entries:
                out = A.join(out, A.meet(v, self._value(phi.body, {**env, phi.var: child})))
        elif isinstance(phi, Forall):
            out = A.top
            for child in self.domain:
                out = A.meet(out, self._value(phi.body, {**env, phi.var: child}))
        elif isinstance(phi, Exists):
            out = A.bottom
            for child in self.domain:
                out = A.join(out, self._value(phi.body, {**env, phi.var: child}))
        else:
            raise TypeError(f"not a formula: {phi!r}")
        self._memo[key] = out
        return out


def evaluate(phi: Formula | str, env: Environment):
    """Truth value of ``phi`` under ``env`` (a fresh memo table per call)."""
    if isinstance(phi, str):
        phi = parse(phi)
    ev = Evaluator(env.resolve_algebra(), env.j, env.domain)
    return ev.value(phi, env.bindings)


def reference_value(phi: Formula, bindings: Mapping[str, LSet], algebra: Algebra, j: str):
    """Unmemoized evaluation that expands the atomic clauses as bounded formulas."""
    A = algebra

    def atom_eq(x: LSet, y: LSet):
        left = A.top
        for xc, xv in x.entries:
            left = A.meet(left, A.implies(j, xv, atom_mem(xc, y)))
        right = A.top
        for yc, yv in y.entries:
            right = A.meet(right, A.implies(j, yv, atom_mem(yc, x)))
        return A.meet(left, right)

    def atom_mem(x: LSet, y: LSet):
        out = A.bottom
        for yc, yv in y.entries:
            out = A.join(out, A.meet(yv, atom_eq(x, yc)))
        return out

    def go(f: Formula, env: dict):
        if isinstance(f, Eq):
            return atom_eq(env[f.left], env[f.right])
        if isinstance(f, Mem):
            return atom_mem(env[f.left], env[f.right])
        if isinstance(f, Not):
            return A.neg(go(f.body, env))
        if isinstance(f, And):
            return A.meet(go(f.left, env), go(f.right, env))
        if isinstance(f, Or):
            return A.join(go(f.left, env), go(f.right, env))
        if isinstance(f, Implies):
            return A.implies(j, go(f.left, env), go(f.right, env))
        if isinstance(f, Iff):
            a, b = go(f.left, env), go(f.right, env)
            return A.meet(A.implies(j, a, b), A.implies(j, b, a))
        if isinstance(f, ForallIn):
            vals = [A.implies(j, v, go(f.body, {**env, f.var: c})) for c, v in env[f.bound].entries]
            out = A.top
            for x in vals:
                out = A.meet(out, x)
            return out
        if isinstance(f, ExistsIn):
            vals = [A.meet(v, go(f.body, {**env, f.var: c})) for c, v in env[f.bound].entries]
            out = A.bottom
            for x in vals:
                out = A.join(out, x)
            return out
        raise UnboundedQuantifier("reference evaluator handles bounded formulas only")

    return go(phi, dict(bindings))


# -- supports, commutators, translations --------------------------------------

def support(u: LSet) -> frozenset:
    seen: dict[int, frozenset] = {}

    def go(x: LSet) -> frozenset:
        if x.uid not in seen:
            out = set()
            for c, v in x.entries:
                out.add(v)
                out |= go(c)
            seen[x.uid] = frozenset(out)
        return seen[x.uid]

    return go(u)


def commutator(us: Iterable[LSet]) -> int:
    us = list(us)
    algs = {id(u.algebra): u.algebra for u in us}
    if len(algs) > 1:
        raise AlgebraMismatch("sets belong to different algebras")
    if not us:
        raise ValueError("commutator of an empty family")
    A = us[0].algebra
    if not isinstance(A, LatticeAlgebra):
        raise AlgebraMismatch("the commutator is defined for lattice-valued sets")
    values = set()
    for u in us:
        values |= support(u)
    return A.lattice.amalg(values)


def alpha(u: LSet, target: SubclAlgebra, _memo: dict | None = None) -> LSet:
    """Daseinise every value, recursively."""
    if not isinstance(u.algebra, LatticeAlgebra) or not isinstance(target, SubclAlgebra):
        raise AlgebraMismatch("alpha maps lattice-valued sets to subobject-valued sets")
    if target.lattice is not u.algebra.lattice:
        raise AlgebraMismatch("target presheaf is built over a different lattice")
    memo = {} if _memo is None else _memo
    hit = memo.get(u.uid)
    if hit is None:
        sigma = target.sigma
        hit = LSet(target, [(alpha(c, target, memo), sigma.delta(v)) for c, v in u.entries])
        memo[u.uid] = hit
    return hit


def omega(u: LSet, target: LatticeAlgebra, _memo: dict | None = None) -> LSet:
    """Apply ``eps`` to every value, recursively."""
    if not isinstance(u.algebra, SubclAlgebra) or not isinstance(target, LatticeAlgebra):
        raise AlgebraMismatch("omega maps subobject-valued sets to lattice-valued sets")
    if target.lattice is not u.algebra.lattice:
        raise AlgebraMismatch("target lattice differs from the presheaf's lattice")
    memo = {} if _memo is None else _memo
    hit = memo.get(u.uid)
    if hit is None:
        sigma = u.algebra.sigma
        hit = LSet(target, [(omega(c, target, memo), sigma.eps(v)) for c, v in u.entries])
        memo[u.uid] = hit
    return hit


# -- transfer checks ----------------------------------------------------------

@dataclass
class Universes:
    """Both universes over one lattice, sharing intern tables across calls."""

    lattice: Oml
    sigma: SpectralPresheaf
    L: LatticeAlgebra = field(init=False)
    Sub: SubclAlgebra = field(init=False)

    def __post_init__(self):
        self.L = LatticeAlgebra(self.lattice)
        self.Sub = SubclAlgebra(self.sigma)
        self._evaluators: dict[tuple[str, str], Evaluator] = {}
        self._alpha: dict = {}
        self._omega: dict = {}

    def evaluator(self, side: str, j: str) -> Evaluator:
        """Session evaluator for ``side`` in {"L", "Subcl"}; memo tables persist."""
        key = (side, j)
        if key not in self._evaluators:
            self._evaluators[key] = Evaluator(self.L if side == "L" else self.Sub, j)
        return self._evaluators[key]

    def alpha(self, u: LSet) -> LSet:
        return alpha(u, self.Sub, self._alpha)

    def omega(self, u: LSet) -> LSet:
        return omega(u, self.L, self._omega)

    @classmethod
    def over(cls, lattice: Oml, sigma: SpectralPresheaf | None = None) -> "Universes":
        return cls(lattice, sigma if sigma is not None else SpectralPresheaf(lattice))


def _as_formula(phi: Formula | str) -> Formula:
    return parse(phi) if isinstance(phi, str) else phi


def check_transfer_negfree(phi: Formula | str, cases: Iterable[Mapping[str, LSet]],
                           U: Universes, j: str = "S") -> dict:
    """``delta([[phi(u)]]_j) <= [[phi(alpha u)]]_j`` on every case.

    The inequality is guaranteed for the Sasaki arrow; other arrows are
    accepted for counterexample searches.
    """
    phi = _as_formula(phi)
    if not is_delta0(phi):
        raise FormulaNotDelta0("formula has unbounded quantifiers")
    if not is_negation_free(phi):
        raise FormulaNotNegationFree("formula uses not, -> or <->")
    ev_L = U.evaluator("L", j)
    ev_S = U.evaluator("Subcl", j)
    failures = []
    n = 0
    for args in cases:
        n += 1
        lhs = U.sigma.delta(ev_L.value(phi, args))
        rhs = ev_S.value(phi, {k: U.alpha(v) for k, v in args.items()})
        if not U.sigma.leq(lhs, rhs):
            failures.append({"args": {k: v.show() for k, v in args.items()},
                             "lhs": U.sigma.describe(lhs), "rhs": U.sigma.describe(rhs)})
    return {"ok": not failures, "cases": n, "failures": failures}


def check_transfer_zfc(phi: Formula | str, cases: Iterable[Mapping[str, LSet]],
                       U: Universes, j: str = "S") -> dict:
    """``commutator(u) <= [[phi(u)]]_j`` for a ZFC-provable bounded ``phi``."""
    phi = _as_formula(phi)
    if not is_delta0(phi):
        raise FormulaNotDelta0("formula has unbounded quantifiers")
    L = U.lattice
    ev = U.evaluator("L", j)
    failures = []
    n = 0
    for args in cases:
        n += 1
        bound = commutator(args.values())
        val = ev.value(phi, args)
        if not L.leq(bound, val):
            failures.append({"args": {k: v.show() for k, v in args.items()},
                             "commutator": L.name(bound), "value": L.name(val)})
    return {"ok": not failures, "cases": n, "failures": failures}


def check_transfer_zfc_delta(phi: Formula | str, cases: Iterable[Mapping[str, LSet]],
                             U: Universes) -> dict:
    """``delta(commutator(u)) <= [[phi(alpha u)]]_S`` for provable negation-free ``phi``."""
    phi = _as_formula(phi)
    if not is_delta0(phi):
        raise FormulaNotDelta0("formula has unbounded quantifiers")
    if not is_negation_free(phi):
        raise FormulaNotNegationFree("formula uses not, -> or <->")
    ev = U.evaluator("Subcl", "S")
    failures = []
    n = 0
    for args in cases:
        n += 1
        bound = U.sigma.delta(commutator(args.values()))
        val = ev.value(phi, {k: U.alpha(v) for k, v in args.items()})
        if not U.sigma.leq(bound, val):
            failures.append({"args": {k: v.show() for k, v in args.items()},
                             "bound": U.sigma.describe(bound), "value": U.sigma.describe(val)})
    return {"ok": not failures, "cases": n, "failures": failures}


# Bounded formulas provable in ZFC, with the reason each one is provable.
PROVABLE_DELTA0: list[tuple[str, str]] = [
    ("u = u", "equality is reflexive"),
    ("(forall x in u)(x = x)", "reflexivity under a bounded quantifier"),
    ("(forall x in u)(x in u)", "every member of u is a member of u"),
    ("(forall x in u)(exists y in u)(x = y)", "witness y := x"),
    ("(forall x in u)(exists y in u)(y = x)", "witness y := x, equality symmetric"),
    ("u = u or u in v", "left disjunct is reflexivity"),
    ("(forall x in u)(forall y in v)(x = x and y = y)", "reflexivity, twice"),
    ("(exists x in u)(x = x) or u = u", "right disjunct is reflexivity"),
    ("u = v -> v = u", "equality is symmetric"),
    ("(u = v and v = w) -> u = w", "equality is transitive"),
    ("((forall x in u)(x in v) and (forall x in v)(x in u)) -> u = v", "extensionality"),
    ("u in v -> (exists x in v)(x = u)", "a member equals itself"),
    ("u = v or not u = v", "excluded middle"),
    ("not (u in v and not u in v)", "non-contradiction"),
    ("(forall x in u)(x in v) -> (forall x in u)(exists y in v)(x = y)",
     "a member of v is equal to some member of v"),
]


def provable_formulas(negation_free: bool | None = None) -> list[tuple[Formula, str, str]]:
    out = []
    for text, why in PROVABLE_DELTA0:
        phi = parse(text)
        if negation_free is None or is_negation_free(phi) == negation_free:
            out.append((phi, text, why))
    return out


# -- random generation ----------------------------------------------------------

def random_lset(algebra: Algebra, rng: random.Random, rank: int,
                values: list, width: int = DEFAULT_WIDTH_CAP) -> LSet:
    """Random set of exact rank ``rank`` with at most ``width`` members per level."""
    if rank <= 0:
        return empty(algebra)
    k = rng.randint(1, width)
    children = [random_lset(algebra, rng, rank - 1, values, width)]
    for _ in range(k - 1):
        children.append(random_lset(algebra, rng, rng.randrange(rank), values, width))
    return LSet(algebra, [(c, rng.choice(values)) for c in children])


def random_formula(rng: random.Random, scope: list[str], depth: int,
                   negation_free: bool = True, _fresh: list | None = None) -> Formula:
    """Random bounded formula whose free variables come from ``scope``."""
    fresh = _fresh if _fresh is not None else [0]
    if depth <= 0 or rng.random() < 0.25:
        x, y = rng.choice(scope), rng.choice(scope)
        return Eq(x, y) if rng.random() < 0.5 else Mem(x, y)
    kinds = ["and", "or", "forall", "exists"]
    if not negation_free:
        kinds += ["not", "implies", "iff"]
    kind = rng.choice(kinds)
    sub = lambda sc=scope: random_formula(rng, sc, depth - 1, negation_free, fresh)  # noqa: E731
    if kind in ("forall", "exists"):
        fresh[0] += 1
        var = f"z{fresh[0]}"
        bound = rng.choice(scope)
        body = sub(scope + [var])
        return ForallIn(var, bound, body) if kind == "forall" else ExistsIn(var, bound, body)
    if kind == "not":
        return Not(sub())
    cls = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[kind]
    return cls(sub(), sub())


# -- model files ----------------------------------------------------------------

def load_model(source: str | Path | Mapping, algebra: LatticeAlgebra) -> dict[str, LSet]:
    """Named lattice-valued sets from ``{name: {child: element} | "hat:{...}"}``."""
    if isinstance(source, Mapping):
        raw = dict(source)
    else:
        text = Path(source).read_text()
        raw = json.loads(text)
    L = algebra.lattice
    built: dict[str, LSet] = {}
    active: set[str] = set()

    def build(name: str) -> LSet:
        if name in built:
            return built[name]
        if name not in raw:
            raise KeyError(f"model has no set named {name!r}")
        if name in active:
            raise ValueError(f"set {name!r} is defined in terms of itself")
        active.add(name)
        entry = raw[name]
        if isinstance(entry, str):
            if not entry.startswith("hat:"):
                raise LiteralParseError(f"{name}: expected 'hat:{{...}}' or a mapping")
            out = hat(algebra, entry[4:])
        else:
            out = LSet(algebra, [(build(child), L.index(str(el))) for child, el in entry.items()])
        active.discard(name)
        built[name] = out
        return out

    for name in raw:
        build(name)
    return built
