"""Contexts, subobject counts, regular subobjects and global sections per fixture."""
import argparse
import time

from qworlds.contexts import enumerate_contexts
from qworlds.fixtures import FIXTURES, fixture
from qworlds.presheaf import SpectralPresheaf


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("fixtures", nargs="*", default=list(FIXTURES))
    args = ap.parse_args()
    print(f"{'fixture':<10} {'|L|':>4} {'ctx':>4} {'ctx-':>4} {'|Subcl|':>9} {'regular':>8} "
          f"{'sections':>8} {'secs':>6}")
    for name in args.fixtures:
        t = time.perf_counter()
        L = fixture(name)
        sigma = SpectralPresheaf(L)
        no_triv = len(enumerate_contexts(L, include_trivial=False))
        if sigma.enumerable():
            subs = sigma.subobjects()
            count, regular = str(len(subs)), str(sum(sigma.is_regular(S) for S in subs))
        else:
            count, regular = f">2^{sigma.candidate_count.bit_length() - 1}", "-"
        sections = len(sigma.global_sections())
        print(f"{name:<10} {L.n:>4} {sigma.k:>4} {no_triv:>4} {count:>9} {regular:>8} "
              f"{sections:>8} {time.perf_counter() - t:>6.2f}")


if __name__ == "__main__":
    main()
