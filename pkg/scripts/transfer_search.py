"""Search for failures of the negation-free transfer inequality under other arrows.

The inequality delta([[phi]]) <= [[phi(alpha u)]] is guaranteed for the
Sasaki arrow; this script looks for counterexamples under the contrapositive
and relevance arrows and prints the smallest one found per fixture.
"""
import argparse
import random

from qworlds.fixtures import fixture
from qworlds.formulas import to_text
from qworlds.qsets import Universes, random_formula, random_lset


def size(phi) -> int:
    return len(to_text(phi))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("fixtures", nargs="*", default=["mo2", "mo3", "mo2xbool1", "mo2xbool2"])
    ap.add_argument("--arrows", default="CR")
    ap.add_argument("--trials", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for name in args.fixtures:
        U = Universes.over(fixture(name))
        values = list(U.lattice)
        for j in args.arrows:
            rng = random.Random(f"{args.seed}:{name}:{j}")
            ev_L, ev_S = U.evaluator("L", j), U.evaluator("Subcl", j)
            best, hits = None, 0
            for _ in range(args.trials):
                phi = random_formula(rng, ["u", "v"], 3, negation_free=True)
                u = {k: random_lset(U.L, rng, rng.randint(0, 3), values, 3) for k in "uv"}
                lhs = U.sigma.delta(ev_L.value(phi, u))
                rhs = ev_S.value(phi, {k: U.alpha(x) for k, x in u.items()})
                if not U.sigma.leq(lhs, rhs):
                    hits += 1
                    if best is None or size(phi) < size(best[0]):
                        best = (phi, u)
            print(f"{name:<10} j={j}: {hits}/{args.trials} counterexamples")
            if best:
                phi, u = best
                print(f"    smallest: {to_text(phi)}")
                for k, x in u.items():
                    print(f"    {k} = {x.show()}")


if __name__ == "__main__":
    main()
