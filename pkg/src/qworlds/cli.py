"""Command-line front end.

Exit codes: 0 success, 1 theorem failure or invalid lattice, 2 input
error, 3 a size cap was exceeded.  Default caps can be set through the
environment variables ``QWORLDS_CONTEXT_CAP``, ``QWORLDS_SUBCL_CAP`` and
``QWORLDS_RANK_CAP``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .battery import SUITES, BatteryConfig, failed, run_battery, to_jsonl
from .contexts import DEFAULT_CONTEXT_CAP, SizeLimitExceeded, enumerate_contexts
from .fixtures import FIXTURES, fixture
from .formulas import free_vars, parse, to_text
from .oml import IMPLICATIONS, LatticeError, Oml, load_oml, verify_oml
from .presheaf import DEFAULT_SUBCL_CAP, SpectralPresheaf
from .qreals import G, H, NotRegular, check_R, parse_reals, real_truth_eq
from .qsets import DEFAULT_RANK_CAP, Evaluator, LatticeAlgebra, Universes, load_model

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{name} must be positive")
    return value


@dataclass
class RunConfig:
    lattice: str
    command: str
    j: str = "S"
    seed: int = 0
    context_cap: int = DEFAULT_CONTEXT_CAP
    subcl_cap: int = DEFAULT_SUBCL_CAP
    rank_cap: int = DEFAULT_RANK_CAP
    output_format: str = "text"

    def __post_init__(self):
        if min(self.context_cap, self.subcl_cap, self.rank_cap) <= 0:
            raise ValueError("caps must be positive")
        if self.j not in IMPLICATIONS:
            raise ValueError(f"unknown implication {self.j!r}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            lattice=getattr(args, "lattice", "") or "",
            command=args.command,
            j=getattr(args, "j", "S"),
            seed=getattr(args, "seed", 0),
            context_cap=args.context_cap or _env_int("QWORLDS_CONTEXT_CAP", DEFAULT_CONTEXT_CAP),
            subcl_cap=args.subcl_cap or _env_int("QWORLDS_SUBCL_CAP", DEFAULT_SUBCL_CAP),
            rank_cap=args.rank_cap or _env_int("QWORLDS_RANK_CAP", DEFAULT_RANK_CAP),
            output_format="json" if args.format == "jsonl" else args.format,
        )


def resolve_lattice(name: str) -> Oml:
    """A built-in fixture name or a path to a lattice file."""
    if name in FIXTURES:
        return fixture(name)
    return load_oml(name)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands -------------------------------------------------------------------------

def cmd_verify(args, cfg: RunConfig) -> int:
    if args.lattice in FIXTURES:
        raw = fixture(args.lattice).to_dict()
    else:
        path = Path(args.lattice)
        text = path.read_text()
        if not text.strip():
            raise ValueError(f"{path}: empty lattice file")
        raw = json.loads(text)
    try:
        L = verify_oml(raw)
    except LatticeError as exc:
        kind = type(exc).__name__
        if cfg.output_format == "json":
            print(json.dumps({"valid": False, "error": kind, "message": str(exc),
                              "witness": list(exc.witness)}))
        else:
            print(f"invalid: {kind}: {exc}")
            if exc.witness:
                print(f"witness: {', '.join(map(str, exc.witness))}")
        return EXIT_FAIL
    if cfg.output_format == "json":
        print(json.dumps({"valid": True, "elements": L.n, "atoms": len(L.atoms),
                          "boolean": L.is_boolean(), "irreducible": L.is_irreducible()}))
    else:
        print(f"valid OML: {L.n} elements, {len(L.atoms)} atoms, "
              f"{'Boolean' if L.is_boolean() else 'non-Boolean'}, "
              f"{'irreducible' if L.is_irreducible() else 'reducible'}")
    return EXIT_OK


def cmd_contexts(args, cfg: RunConfig) -> int:
    L = resolve_lattice(args.lattice)
    P = enumerate_contexts(L, cfg.context_cap, include_trivial=not args.no_trivial)
    if args.dot:
        _emit(P.to_dot(), args.output)
    elif args.hasse:
        _emit(L.to_dot(), args.output)
    elif cfg.output_format == "json":
        _emit(json.dumps([{"id": B.id, "elements": [L.name(x) for x in sorted(B.carrier)],
                           "atoms": [L.name(c) for c in B.atoms]} for B in P]) + "\n",
              args.output)
    else:
        _emit(P.listing(), args.output)
    return EXIT_OK


def cmd_daseinise(args, cfg: RunConfig) -> int:
    L = resolve_lattice(args.lattice)
    sigma = SpectralPresheaf(L, context_cap=cfg.context_cap)
    a = L.index(args.element)
    S = sigma.delta(a)
    if args.dot:
        _emit(sigma.to_dot(S), args.output)
        return EXIT_OK
    if cfg.output_format == "json":
        comps = {str(B.id): [L.name(c) for i, c in enumerate(B.atoms) if S.parts[B.id] >> i & 1]
                 for B in sigma.poset}
        print(json.dumps({"element": args.element, "components": comps,
                          "eps": L.name(sigma.eps(S)), "star": sigma.describe(sigma.star(S))}))
    else:
        for B in sigma.poset:
            atoms = [L.name(c) for i, c in enumerate(B.atoms) if S.parts[B.id] >> i & 1]
            print(f"context {B.id} {B.label()}: {{{', '.join(atoms)}}}")
        print(f"eps(delta({args.element})) = {L.name(sigma.eps(S))}")
    return EXIT_OK


def cmd_eval(args, cfg: RunConfig) -> int:
    L = resolve_lattice(args.lattice)
    U = Universes.over(L, SpectralPresheaf(L, context_cap=cfg.context_cap))
    model = load_model(args.model, U.L)
    for name, u in model.items():
        if u.rank > cfg.rank_cap:
            raise SizeLimitExceeded(f"set {name!r} has rank {u.rank} > cap {cfg.rank_cap}")
    phi = parse(args.formula, variables=model.keys())
    bindings = {v: model[v] for v in sorted(set(model) & free_vars(phi))}
    if args.universe == "Subcl":
        ev = Evaluator(U.Sub, cfg.j)
        value = ev.value(phi, {k: U.alpha(v) for k, v in bindings.items()})
        shown = U.sigma.describe(value)
        top = value == U.sigma.top
    else:
        ev = Evaluator(U.L, cfg.j)
        value = ev.value(phi, bindings)
        shown = L.name(value)
        top = value == L.top
    if cfg.output_format == "json":
        print(json.dumps({"formula": to_text(phi), "j": cfg.j, "universe": args.universe,
                          "value": shown, "top": top}))
    else:
        print("⊤" if top else shown)
    return EXIT_OK


def cmd_reals(args, cfg: RunConfig) -> int:
    L = resolve_lattice(args.lattice)
    U = Universes.over(L, SpectralPresheaf(L, context_cap=cfg.context_cap))
    reals = parse_reals(Path(args.file).read_text(), U.L)
    lines: list[dict] = []
    status = EXIT_OK
    if args.action == "roundtrip":
        for name, X in reals.items():
            h = H(X, U.Sub)
            ok = G(h, U.L) == X
            status = status if ok else EXIT_FAIL
            lines.append({"real": name, "H": h.show(), "roundtrip": ok})
    elif args.action == "check":
        for name, X in reals.items():
            lat = check_R(X)
            sub = check_R(H(X, U.Sub))
            ok = lat["ok"] and sub["ok"]
            status = status if ok else EXIT_FAIL
            lines.append({"real": name, "lattice": lat["ok"], "subcl": sub["ok"],
                          "failures": lat["failures"] + sub["failures"]})
    else:
        if len(args.names) != 2:
            raise ValueError("eq needs exactly two real names")
        u, v = (reals[n] for n in args.names)
        value = real_truth_eq(H(u, U.Sub), H(v, U.Sub), cfg.j)
        lines.append({"eq": list(args.names), "j": cfg.j, "value": U.sigma.describe(value),
                      "top": value == U.sigma.top,
                      "lattice_value": L.name(real_truth_eq(u, v, cfg.j))})
    for rec in lines:
        if cfg.output_format == "json":
            print(json.dumps(rec, ensure_ascii=False))
        else:
            print("  ".join(f"{k}={v}" for k, v in rec.items()))
    return status


def cmd_battery(args, cfg: RunConfig) -> int:
    L = resolve_lattice(args.lattice)
    bc = BatteryConfig(fixture=Path(args.lattice).stem if args.lattice not in FIXTURES
                       else args.lattice,
                       seed=cfg.seed, trials=args.trials, samples=args.samples,
                       context_cap=cfg.context_cap, subcl_cap=cfg.subcl_cap,
                       rank=min(3, cfg.rank_cap))
    records = run_battery(L, bc, args.suite)
    if cfg.output_format == "json":
        _emit(to_jsonl(records), args.output)
    else:
        _emit("".join(r.to_text() + "\n" for r in records), args.output)
    return EXIT_FAIL if failed(records) else EXIT_OK


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "jsonl"), default="text",
                        help="human-readable text or line-delimited JSON (json and jsonl agree)")
    common.add_argument("--context-cap", type=int, default=None,
                        help="max number of contexts (env QWORLDS_CONTEXT_CAP)")
    common.add_argument("--subcl-cap", type=int, default=None,
                        help="max candidate families for enumeration (env QWORLDS_SUBCL_CAP)")
    common.add_argument("--rank-cap", type=int, default=None,
                        help="max set rank (env QWORLDS_RANK_CAP)")
    p = argparse.ArgumentParser(prog="qworlds", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="validate a lattice file")
    v.add_argument("lattice", help="lattice file (JSON) or fixture name")

    c = sub.add_parser("contexts", parents=[common], help="list the Boolean subalgebras")
    c.add_argument("lattice", help="fixture name or lattice file")
    c.add_argument("--dot", action="store_true", help="context poset as DOT")
    c.add_argument("--hasse", action="store_true", help="lattice Hasse diagram as DOT")
    c.add_argument("--no-trivial", action="store_true", help="drop the context {0, 1}")
    c.add_argument("--output", "-o")

    d = sub.add_parser("daseinise", parents=[common], help="daseinisation of one element")
    d.add_argument("lattice")
    d.add_argument("element")
    d.add_argument("--dot", action="store_true")
    d.add_argument("--output", "-o")

    e = sub.add_parser("eval", parents=[common],
                       help="truth value of a bounded formula in a model")
    e.add_argument("lattice")
    e.add_argument("model", help="JSON model file of named sets")
    e.add_argument("formula")
    e.add_argument("--j", choices=IMPLICATIONS, default="S")
    e.add_argument("--universe", choices=("L", "Subcl"), default="L",
                   help="evaluate in the lattice universe or after alpha in the Subcl universe")

    r = sub.add_parser("reals", parents=[common],
                       help="step-real round trips, R checks, equality")
    r.add_argument("lattice")
    r.add_argument("action", choices=("roundtrip", "check", "eq"))
    r.add_argument("file", help="file of `real name = [(q, element), ...]` lines")
    r.add_argument("names", nargs="*", help="two real names for eq")
    r.add_argument("--j", choices=IMPLICATIONS, default="S")

    b = sub.add_parser("battery", parents=[common], help="run theorem suites")
    b.add_argument("lattice")
    b.add_argument("--suite", action="append", choices=("all", *SUITES), default=None)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--trials", type=int, default=1000)
    b.add_argument("--samples", type=int, default=500)
    b.add_argument("--output", "-o")
    return p


COMMANDS = {
    "verify": cmd_verify,
    "contexts": cmd_contexts,
    "daseinise": cmd_daseinise,
    "eval": cmd_eval,
    "reals": cmd_reals,
    "battery": cmd_battery,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "battery" and not args.suite:
        args.suite = ["all"]
    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[args.command](args, cfg)
    except SizeLimitExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (LatticeError, NotRegular) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, KeyError, OSError, NameError) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
