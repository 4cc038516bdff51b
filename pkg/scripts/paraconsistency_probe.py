"""Count subobjects S outside {bottom, top} with S ^ S* = bottom, with and without
the trivial context, on every enumerable fixture."""
import argparse

from qworlds.contexts import enumerate_contexts
from qworlds.fixtures import FIXTURES, fixture
from qworlds.presheaf import SpectralPresheaf


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("fixtures", nargs="*", default=[n for n in FIXTURES if n != "mo2xbool2"])
    args = ap.parse_args()
    for name in args.fixtures:
        L = fixture(name)
        for trivial in (True, False):
            sigma = SpectralPresheaf(L, enumerate_contexts(L, include_trivial=trivial))
            subs = sigma.subobjects()
            hits = [S for S in subs if S not in (sigma.bottom, sigma.top)
                    and sigma.meet(S, sigma.star(S)) == sigma.bottom]
            label = "with trivial" if trivial else "no trivial"
            shown = "; ".join(sigma.describe(S) for S in hits[:2])
            print(f"{name:<10} {label:<13} {len(subs):>5} subobjects, {len(hits)} hits  {shown}")


if __name__ == "__main__":
    main()
