"""The eleven acceptance criteria, one test each, one PASS/FAIL line each.

Criteria 1 to 10 read the records of the theorem battery; each battery run
is timed against the one-minute budget.  Criterion 5 has an honest split:
the irreducible half passes, while the requirement that Boolean fixtures
exhibit a counterexample is unattainable (see the README) and is kept as a
strict expected failure.
"""
import os
import subprocess
import sys
import time
from functools import lru_cache

import pytest

from qworlds.battery import BatteryConfig, run_battery
from qworlds.fixtures import boolean, fixture, mo
from qworlds.presheaf import SpectralPresheaf

import oracles
from acceptance_report import report

FIXTURES = ("boolean2", "boolean3", "mo2", "mo3", "mo2xbool2")
BUDGET = 60.0


@lru_cache(maxsize=None)
def records(name: str, suite: str):
    start = time.perf_counter()
    out = run_battery(fixture(name), BatteryConfig(fixture=name), [suite])
    return out, time.perf_counter() - start


def failures(name: str, suite: str) -> list[str]:
    recs, elapsed = records(name, suite)
    bad = [r.to_text() for r in recs if r.result == "fail"]
    if elapsed > BUDGET:
        bad.append(f"{suite} on {name} took {elapsed:.1f}s")
    return bad


def scope(name: str, suite: str, theorem: str, j: str = "-") -> str:
    recs, _ = records(name, suite)
    hits = [r.scope for r in recs if r.theorem_id == theorem and r.j == j]
    assert hits, f"no record {suite}/{theorem} j={j} on {name}"
    return hits[0]


def result(name: str, suite: str, theorem: str, j: str = "-") -> str:
    recs, _ = records(name, suite)
    return next(r.result for r in recs if r.theorem_id == theorem and r.j == j)


def run_criterion(number: int, label: str, body) -> None:
    try:
        detail = body() or ""
    except AssertionError as exc:
        report(number, label, False, str(exc).splitlines()[0] if str(exc) else "assertion")
        raise
    report(number, label, True, detail)


def suite_clean(suite: str, names=FIXTURES) -> None:
    bad = [f for n in names for f in failures(n, suite)]
    assert not bad, "; ".join(bad)


def test_criterion_01_adjunction():
    def body():
        suite_clean("adjunction")
        for n in FIXTURES:
            assert scope(n, "adjunction", "eps_after_delta_is_identity") == \
                f"exhaustive({fixture(n).n})"
        assert scope("mo2", "adjunction", "delta_after_eps_deflationary") == "exhaustive(17)"
        assert scope("mo2xbool2", "adjunction", "delta_after_eps_deflationary") == "sampled(500)"
        return "eps.delta = id on every element, delta.eps <= id (MO2: 17 subobjects)"
    run_criterion(1, "adjunction", body)


def test_criterion_02_star():
    def body():
        suite_clean("star")
        recs, _ = records("mo2", "star")
        assert len({r.theorem_id for r in recs}) >= 9
        assert scope("mo2xbool2", "star", "join_with_star_is_top") == "sampled(500)"
        return f"{len(recs)} star properties on {len(FIXTURES)} fixtures"
    run_criterion(2, "star", body)


def test_criterion_03_mirror():
    def body():
        suite_clean("mirror")
        for n in FIXTURES:
            for j in "SCR":
                pairs = fixture(n).n ** 2
                assert scope(n, "mirror", "delta_of_arrow", j) == f"exhaustive({pairs})"
                assert result(n, "mirror", "eps_of_arrow", j) == "pass"
        return "both mirror identities and the six arrow properties for j in S, C, R"
    run_criterion(3, "mirror", body)


def test_criterion_04_commutativity():
    def body():
        suite_clean("commutativity")
        assert scope("mo2", "commutativity", "cp_identity_iff_commutes") == "exhaustive(289)"
        assert scope("mo2xbool2", "commutativity", "cp_identity_iff_commutes") == "sampled(500)"
        for n in FIXTURES:
            assert scope(n, "commutativity", "commutes_iff_delta_images_commute").startswith(
                "exhaustive")
        return "commutation mirrored exhaustively; C-P identity on all 17x17 MO2 pairs"
    run_criterion(4, "commutativity", body)


def test_criterion_05_paraconsistency_irreducible():
    def body():
        suite_clean("paraconsistency")
        for n in ("mo2", "mo3"):
            assert result(n, "paraconsistency", "proper_paraconsistency[full]") == "pass"
            assert scope(n, "paraconsistency", "proper_paraconsistency[full]").startswith(
                "exhaustive")
        return "on mo2 and mo3, S ^ S* = bottom only for bottom and top (exhaustive)"
    run_criterion(5, "paraconsistency (irreducible half)", body)


@pytest.mark.xfail(strict=True, reason="no Boolean fixture with the trivial context has a "
                   "subobject S outside {bottom, top} with S ^ S* = bottom; see README")
def test_criterion_05_paraconsistency_boolean_counterexample():
    def body():
        missing = []
        for n in ("boolean2", "boolean3"):
            recs, _ = records(n, "paraconsistency")
            hit = [r for r in recs if r.theorem_id == "reducible_counterexample_search[full]"]
            if hit[0].witness == "none found":
                missing.append(n)
        assert not missing, f"no counterexample on {', '.join(missing)} (searched exhaustively)"
    run_criterion(5, "paraconsistency (Boolean counterexample)", body)


def test_criterion_06_transfer():
    def body():
        suite_clean("transfer")
        for n in FIXTURES:
            assert scope(n, "transfer", "negation_free_delta_transfer", "S") == "random(1000)"
            for j in "SCR":
                assert result(n, "transfer", "commutator_bounds_provable", j) == "pass"
            assert result(n, "transfer", "delta_commutator_bounds_provable", "S") == "pass"
        curated = scope("mo2", "transfer", "delta_commutator_bounds_provable", "S")
        assert int(curated.split("(")[1].split(")")[0]) >= 8
        return "1000 negation-free cases per fixture; curated bounds for all j"
    run_criterion(6, "transfer", body)


def test_criterion_07_hat():
    def body():
        suite_clean("hat")
        for n in FIXTURES:
            for side in ("L", "Subcl"):
                for j in "SCR":
                    # 16 hereditarily finite sets of rank <= 3, all ordered pairs
                    assert scope(n, "hat", f"hat_truth_values_classical[{side}]", j) == \
                        "exhaustive(256)"
        return "all 16 sets of rank <= 3, both universes, all j"
    run_criterion(7, "hat", body)


def test_criterion_08_reals():
    def body():
        suite_clean("reals")
        assert scope("mo2", "reals", "G_after_H_is_identity") == "exhaustive(5)"
        assert scope("mo2", "reals", "H_after_G_is_identity") == "exhaustive(6)"
        assert scope("mo2", "reals", "eps_preserves_regular_joins") == "sampled(200)"
        return "G.H and H.G identities on MO2, plateau identities, regular joins on 200 families"
    run_criterion(8, "reals", body)


def test_criterion_09_truth():
    def body():
        suite_clean("truth")
        assert scope("mo2", "truth", "truth_values_are_lower_sets").startswith("exhaustive")
        cases = int(scope("mo3", "truth", "truth_values_are_lower_sets").split("(")[1][:-1])
        assert cases >= 500
        counts = {}
        for n in (1, 2, 3):
            sigma = SpectralPresheaf(boolean(n))
            naive = oracles.NaivePresheaf(sigma.lattice, [B.carrier for B in sigma.poset])
            counts[f"boolean({n})"] = (len(sigma.global_sections()), len(naive.global_sections()))
            assert counts[f"boolean({n})"] == (n, n)
        sigma = SpectralPresheaf(mo(2))
        naive = oracles.NaivePresheaf(sigma.lattice, [B.carrier for B in sigma.poset])
        assert len(sigma.global_sections()) == len(naive.global_sections()) == 4
        return "lower sets on MO2 and mo3; sections 1, 2, 3 and 4 match the oracle"
    run_criterion(9, "topos truth", body)


def test_criterion_10_oracle():
    def body():
        suite_clean("oracle")
        for n in FIXTURES:
            assert scope(n, "oracle", "memoized_matches_reference", "S,C,R") == "random(500)"
        return "memoized = reference on 500 formulas; reals match grid evaluation"
    run_criterion(10, "oracle", body)


def _battery_bytes(name: str, seed: int, hashseed: str) -> bytes:
    env = {**os.environ, "PYTHONHASHSEED": hashseed}
    res = subprocess.run([sys.executable, "-m", "qworlds", "battery", name, "--suite", "all",
                          "--seed", str(seed), "--format", "jsonl"],
                         capture_output=True, env=env, check=False)
    assert res.returncode == 0, res.stderr.decode()
    return res.stdout


def test_criterion_11_reproducibility():
    def body():
        for name in ("mo2", "mo2xbool2"):
            first = _battery_bytes(name, 7, "1")
            second = _battery_bytes(name, 7, "12345")
            assert first and first == second, f"{name}: reports differ"
        return "byte-identical JSONL across processes with different hash seeds"
    run_criterion(11, "reproducibility", body)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
