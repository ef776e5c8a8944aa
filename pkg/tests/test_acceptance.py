"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` (the lines are also printed
without ``-s``, since they bypass capture).
"""

import contextlib
import time
from itertools import chain

import pytest

from treepoly.analysis import collision_search, completeness_report
from treepoly.enumeration import count_rooted_trees, enumerate_forests, enumerate_rooted_trees
from treepoly.invariants import (
    brute_A,
    brute_M,
    brute_P,
    brute_S,
    check_identities,
    eisenstein_check,
    pgf_separation,
    poly_A,
    poly_M,
    poly_P,
    poly_p,
    poly_S,
)
from treepoly.percolation import compare_histogram, compare_p
from treepoly.poly import parse_poly
from treepoly.trees import path, star

pytestmark = pytest.mark.acceptance


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run(number, title):
        start = time.perf_counter()
        detail = []
        try:
            yield detail
        except BaseException:
            status = "FAIL"
            raise
        else:
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            note = f" ({'; '.join(detail)})" if detail else ""
            with capsys.disabled():
                print(f"\ncriterion {number:>2}: {status} {title} [{elapsed:.1f}s]{note}")
    return run


def trees_up_to(n_max):
    return chain.from_iterable(enumerate_rooted_trees(n) for n in range(1, n_max + 1))


def test_c01_oracle_equivalence(criterion):
    with criterion(1, "recursive P, S, A, M equal brute-force definitions") as detail:
        small = list(trees_up_to(8))
        assert len(small) == 200
        for t in small:
            assert poly_P(t) == brute_P(t), t.key
            assert poly_S(t) == brute_S(t), t.key
            assert poly_A(t) == brute_A(t), t.key
        medium = list(trees_up_to(10))
        assert len(medium) == 1205
        for t in medium:
            assert poly_M(t) == brute_M(t), t.key
        detail.append("200 trees for P/S/A, 1205 trees for M")


def test_c02_identity_suite(criterion):
    with criterion(2, "identities, degrees, leaf count and stem formula hold") as detail:
        count = 0
        for t in trees_up_to(10):
            report = check_identities(t)
            assert report.passed, (t.key, [c.name for c in report.failures()])
            count += 1
        detail.append(f"{count} trees, {len(report.checks)} checks each")


def test_c03_completeness_P_S(criterion):
    with criterion(3, "no P or S collisions among forests up to 12 vertices") as detail:
        for name in ("P", "S"):
            rows = completeness_report(name, 12, forests=True)
            assert [r.n for r in rows] == list(range(13))
            assert all(r.classes == 0 for r in rows), name
            detail.append(f"{name}: {sum(r.scanned for r in rows)} forests")


def test_c04_p_counterexamples(criterion):
    with criterion(4, "first p collisions appear at 9 vertices") as detail:
        for n in range(1, 9):
            assert collision_search("p", n).classes == [], n
        report = collision_search("p", 9)
        shared = {parse_poly(c.polynomial) for c in report.classes}
        expected = {
            parse_poly("2x^3 + x^5 - 3x^6 - x^7 + 3x^8 - x^9"),
            parse_poly("x^3 + x^4 - x^7 - x^8 + x^9"),
        }
        assert expected <= shared
        detail.append(f"{len(report.classes)} classes at n=9")


def test_c05_hierarchy(criterion, counterexamples):
    with criterion(5, "p < A < M on reconstructed trees") as detail:
        t1, t2, t3, t4 = (counterexamples[k] for k in ("a_twin_1", "a_twin_2", "p_twin_1", "p_twin_2"))
        assert poly_p(t3) == poly_p(t4)
        assert poly_A(t3) != poly_A(t4)
        shared_A = parse_poly("y + xy^2 + x^2y^2 + x^2y^3 + 2x^3y^3 + x^4y^3 + x^4y^4 + x^5y^4")
        assert poly_A(t1) == poly_A(t2) == shared_A
        assert poly_M(t1) != poly_M(t2)
        detail.append(f"A twins {t1.key} {t2.key}; p twins {t3.key} {t4.key}")


def test_c06_M_and_pgf_collision_free(criterion):
    with criterion(6, "no M collisions up to 13 vertices, no PGF collisions up to 11") as detail:
        rows = completeness_report("M", 13)
        assert all(r.classes == 0 for r in rows)
        detail.append(f"M: {sum(r.scanned for r in rows)} trees")
        rows = completeness_report("pgf", 11)
        assert all(r.classes == 0 for r in rows)
        detail.append(f"pgf: {sum(r.scanned for r in rows)} trees")


def test_c07_pgf_normalized(criterion):
    with criterion(7, "separation PGF sums to 1") as detail:
        count = 0
        for t in trees_up_to(10):
            assert pgf_separation(t).evaluate(1) == 1, t.key
            count += 1
        detail.append(f"{count} trees")


def test_c08_eisenstein(criterion):
    with criterion(8, "Eisenstein structure holds for trees, fails for split forests") as detail:
        trees = forests = 0
        for t in trees_up_to(10):
            assert eisenstein_check(t), t.key
            trees += 1
        for n in range(11):
            for f in enumerate_forests(n):
                if len(f) >= 2:
                    assert not eisenstein_check(f), f.key
                    forests += 1
        detail.append(f"{trees} trees, {forests} forests")


def test_c09_enumeration_counts(criterion):
    with criterion(9, "stream counts equal recurrence counts up to 16") as detail:
        for n in range(1, 17):
            streamed = sum(1 for _ in enumerate_rooted_trees(n))
            assert streamed == count_rooted_trees(n), n
        assert count_rooted_trees(9) == 286 and count_rooted_trees(13) == 12486
        detail.append(f"a(16) = {count_rooted_trees(16)}")


Q_VALUES = ("0.1", "0.3", "0.5", "0.7", "0.9")


def test_c10_monte_carlo(criterion, counterexamples):
    with criterion(10, "Monte Carlo within 4 stderr of exact values") as detail:
        panel = list(trees_up_to(4)) + [path(6), star(5), counterexamples["a_twin_1"], counterexamples["p_twin_1"]]
        failures = []
        checks = 0
        for i, t in enumerate(panel):
            for j, q in enumerate(Q_VALUES):
                c = compare_p(t, q, 100_000, seed=1000 + 10 * i + j)
                checks += 1
                if not c.passed:
                    failures.append((t.key, c.label, c.estimate.value, float(c.exact)))
            for c in compare_histogram(t, 100_000, seed=2000 + i):
                checks += 1
                if not c.passed:
                    failures.append((t.key, c.label, c.estimate.value, float(c.exact)))
        detail.append(f"{len(panel)} trees, {checks} comparisons, {len(failures)} outside band")
        assert not failures, failures
