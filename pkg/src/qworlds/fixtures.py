"""Built-in lattice fixtures: Boolean algebras, horizontal sums MO(n), products."""
from __future__ import annotations

from itertools import product as _cartesian

from .oml import Oml, verify_oml


def boolean(n: int) -> Oml:
    """The power set of an ``n``-element set, ``2**n`` elements."""
    if n < 0:
        raise ValueError("n must be non-negative")
    full = (1 << n) - 1

    def label(mask: int) -> str:
        if mask == 0:
            return "0"
        if mask == full:
            return "1"
        return "+".join(f"p{i + 1}" for i in range(n) if mask >> i & 1)

    names = [label(m) for m in range(1 << n)]
    if n == 0:
        return verify_oml({"elements": ["0"], "leq": [], "ortho": {"0": "0"}})
    covers = [[names[m], names[m | 1 << i]]
              for m in range(1 << n) for i in range(n) if not m >> i & 1]
    ortho = {names[m]: names[full ^ m] for m in range(1 << n)}
    return verify_oml({"elements": names, "covers": covers, "ortho": ortho})


def mo(n: int) -> Oml:
    """Horizontal sum of ``n`` four-element Boolean blocks (2n atoms)."""
    if n < 1:
        raise ValueError("mo(n) needs n >= 1")
    letters = [chr(ord("a") + i) if i < 26 else f"x{i}" for i in range(n)]
    names = ["0"]
    covers = []
    ortho = {"0": "1"}
    for x in letters:
        names += [x, x + "'"]
        covers += [["0", x], ["0", x + "'"], [x, "1"], [x + "'", "1"]]
        ortho[x] = x + "'"
    names.append("1")
    return verify_oml({"elements": names, "covers": covers, "ortho": ortho})


def product(left: Oml, right: Oml) -> Oml:
    """Componentwise product; element names are ``(x,y)``."""
    pairs = list(_cartesian(left, right))
    name = {(a, b): f"({left.names[a]},{right.names[b]})" for a, b in pairs}
    leq = [[name[p], name[q]] for p in pairs for q in pairs
           if left.leq(p[0], q[0]) and right.leq(p[1], q[1])]
    ortho = {name[(a, b)]: name[(left.ortho(a), right.ortho(b))] for a, b in pairs}
    return verify_oml({"elements": [name[p] for p in pairs], "leq": leq, "ortho": ortho})


FIXTURES = {
    "boolean1": lambda: boolean(1),
    "boolean2": lambda: boolean(2),
    "boolean3": lambda: boolean(3),
    "mo2": lambda: mo(2),
    "mo3": lambda: mo(3),
    "mo2xbool1": lambda: product(mo(2), boolean(1)),
    "mo2xbool2": lambda: product(mo(2), boolean(2)),
}

_cache: dict[str, Oml] = {}


def fixture(name: str) -> Oml:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    if name not in _cache:
        _cache[name] = FIXTURES[name]()
    return _cache[name]
