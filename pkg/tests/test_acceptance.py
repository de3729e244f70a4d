"""Exit criteria.  A per-criterion PASS/FAIL summary is printed at the end of the run."""

import json
import random
import time
from fractions import Fraction

import pytest
from click.testing import CliRunner
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from prayatul import (
    PrayatulMatrix,
    compare_pair,
    generate_prayatul_matrix,
    load_labels,
    measure_set,
    transpose,
)
from prayatul.cli import cli
from prayatul.core import LabelSequence
from prayatul.engine import aggregate, PairResult
from prayatul.render import format_number

from conftest import FIXTURES, GOLDEN, ROOT
from oracles import exact_measures, labels_for_counts, set_intersection_matrix
from strategies import CLASSES, label_triples, matrices

CASES = 500
KEYS = ("sigma_c", "alpha", "xi_c", "xi_e", "phi_e")


def seqs(*label_lists):
    return [LabelSequence.from_labels(x) for x in label_lists]


def run_property(strategy, check, n=CASES):
    """Run ``check`` on at least ``n`` generated cases and return the count."""
    count = 0

    @settings(max_examples=n, derandomize=True, deadline=None, database=None,
              suppress_health_check=[HealthCheck.too_slow])
    @given(strategy)
    def prop(case):
        nonlocal count
        count += 1
        check(case)

    prop()
    assert count >= n, f"only {count} cases generated"
    return count


# --------------------------------------------------------------------------
# AC1

PUBLISHED_NN_VS_DT = {
    "mm": ((38, 1, 0, 1), {"sigma_c": "1", "alpha": "0.95", "xi_c": "1", "xi_e": "1", "phi_e": "0.98"}),
    "mc": ((30, 7, 2, 1), {"sigma_c": "0.56", "alpha": "0.9", "xi_c": "0.95", "xi_e": "0.9", "phi_e": "0.88"}),
    "ls": ((37, 0, 1, 2), {"sigma_c": "-1", "alpha": "0.875", "xi_c": "0.97", "xi_e": "0.95", "phi_e": "0.9"}),
}


@pytest.mark.acceptance("AC1", "classification table rows from fixture label files (+-0.005, < 1 s)")
@pytest.mark.parametrize("dataset", sorted(PUBLISHED_NN_VS_DT))
def test_ac1_classification_rows(dataset):
    counts, printed = PUBLISHED_NN_VS_DT[dataset]
    start = time.perf_counter()
    d = FIXTURES / dataset
    r = compare_pair(load_labels(d / "truth.csv"), load_labels(d / "nn.csv"), load_labels(d / "dt.csv"),
                     primary_name="NN", alternative_name="DT")
    elapsed = time.perf_counter() - start
    assert r.matrix.counts == counts
    for key, text in printed.items():
        # exact rational comparison: 39/40 vs 0.98 sits on the tolerance boundary
        assert abs(r.measures[key].exact - Fraction(text)) <= Fraction("0.005"), key
    assert elapsed < 1.0


# --------------------------------------------------------------------------
# AC2

EMNIST = (91958, 6353, 7395, 10617)
PUBLISHED_EMNIST_ROW = {"sigma_c": -0.0757, "alpha": 0.7539, "xi_c": 0.9300, "xi_e": 0.8601, "phi_e": 0.7816}


@pytest.mark.acceptance("AC2", "eMNIST/MobileNet row from the published matrix (+-0.0005, < 1 s)")
def test_ac2_emnist_matrix():
    start = time.perf_counter()
    ms = measure_set(PrayatulMatrix(*EMNIST))
    elapsed = time.perf_counter() - start
    for key, v in PUBLISHED_EMNIST_ROW.items():
        assert ms[key].value == pytest.approx(v, abs=5e-4), key
    assert elapsed < 1.0


@pytest.mark.acceptance("AC2", "eMNIST/MobileNet row from the published matrix (+-0.0005, < 1 s)")
def test_ac2_emnist_from_labels():
    g, p, q = seqs(*labels_for_counts(*EMNIST, n_classes=62))
    start = time.perf_counter()
    r = compare_pair(g, p, q)
    elapsed = time.perf_counter() - start
    assert r.matrix.counts == EMNIST
    for key, v in PUBLISHED_EMNIST_ROW.items():
        assert r.measures[key].value == pytest.approx(v, abs=5e-4), key
    assert elapsed < 1.0


# --------------------------------------------------------------------------
# AC3


@pytest.mark.acceptance("AC3", "MM baseline accuracy equals prayatul margins exactly (0.975 / 0.95)")
def test_ac3_accuracy_cross_check():
    d = FIXTURES / "mm"
    r = compare_pair(load_labels(d / "truth.csv"), load_labels(d / "nn.csv"), load_labels(d / "dt.csv"))
    m = r.matrix
    assert r.primary_baseline.accuracy == (m.br + m.rw) / m.n == 0.975
    assert r.alternative_baseline.accuracy == (m.br + m.wr) / m.n == 0.95
    assert format_number(r.primary_baseline.accuracy, 2) == "0.98"
    assert format_number(r.alternative_baseline.accuracy, 2) == "0.95"


# --------------------------------------------------------------------------
# AC4


@pytest.mark.acceptance("AC4", "1000 random cases equal the set-intersection oracle (< 5 s)")
def test_ac4_oracle_equivalence():
    rng = random.Random(20221014)
    start = time.perf_counter()
    for _ in range(1000):
        n = rng.randint(1, 64)
        classes = CLASSES[: rng.randint(1, 4)]
        g, p, q = ([rng.choice(classes) for _ in range(n)] for _ in range(3))
        m = generate_prayatul_matrix(*seqs(g, p, q))
        assert m.counts == set_intersection_matrix(g, p, q), (g, p, q)
    assert time.perf_counter() - start < 5.0


# --------------------------------------------------------------------------
# AC5

AC5 = ("AC5", f"property suites, >= {CASES} cases each")


@pytest.mark.acceptance(*AC5)
def test_ac5_ranges():
    def check(counts):
        ms = measure_set(PrayatulMatrix(*counts))
        for key, v in ms.items():
            if v.defined:
                lo = 0 if key == "xi_c" else -1
                assert lo <= v.exact <= 1, (key, counts)

    run_property(matrices(), check)


@pytest.mark.acceptance(*AC5)
@pytest.mark.parametrize(
    "counts, key, bound",
    [
        ((0, 5, 0, 0), "sigma_c", 1), ((0, 0, 5, 0), "sigma_c", -1),
        ((3, 2, 0, 0), "alpha", 1), ((0, 0, 0, 5), "alpha", -1),
        ((5, 0, 0, 0), "xi_c", 1), ((0, 0, 5, 0), "xi_c", 0),
        ((5, 0, 0, 0), "xi_e", 1), ((0, 0, 5, 0), "xi_e", -1),
        ((5, 0, 0, 0), "phi_e", 1), ((0, 0, 5, 0), "phi_e", -1),
    ],
)
def test_ac5_range_bounds_attained(counts, key, bound):
    assert measure_set(PrayatulMatrix(*counts))[key].exact == bound


@pytest.mark.acceptance(*AC5)
def test_ac5_degree_zero_homogeneity():
    def check(case):
        counts, k = case
        base = measure_set(PrayatulMatrix(*counts))
        scaled = measure_set(PrayatulMatrix(*(k * c for c in counts)))
        for key in KEYS:
            assert base[key].exact == scaled[key].exact
            assert base[key].value == scaled[key].value

    run_property(st.tuples(matrices(), st.integers(1, 1000)), check)


@pytest.mark.acceptance(*AC5)
def test_ac5_permutation_invariance():
    @st.composite
    def case(draw):
        g, p, q = draw(label_triples())
        return (g, p, q), draw(st.permutations(range(len(g))))

    def check(c):
        (g, p, q), order = c
        before = generate_prayatul_matrix(*seqs(g, p, q)).counts
        after = generate_prayatul_matrix(*seqs(*([x[i] for i in order] for x in (g, p, q)))).counts
        assert before == after

    run_property(case(), check)


@pytest.mark.acceptance(*AC5)
def test_ac5_relabeling_invariance():
    def check(c):
        (g, p, q), perm = c
        rename = dict(zip(CLASSES, perm))
        before = generate_prayatul_matrix(*seqs(g, p, q)).counts
        after = generate_prayatul_matrix(*seqs(*([rename[v] for v in x] for x in (g, p, q)))).counts
        assert before == after

    run_property(st.tuples(label_triples(), st.permutations(CLASSES)), check)


def _step(counts, cell):
    c = list(counts)
    c["br rw wr bw".split().index(cell)] += 1
    return tuple(c)


# (cell incremented) -> {measure: direction}; "+"/"-" non-decreasing/non-increasing,
# "=" unchanged, "-if>=0" non-increasing when the value before the step is >= 0
MONOTONE = {
    "rw": {"sigma_c": "+", "alpha": "+", "xi_c": "+", "xi_e": "+", "phi_e": "+"},
    "wr": {"sigma_c": "-", "alpha": "-if>=0", "xi_c": "-", "xi_e": "-", "phi_e": "-"},
    "br": {"sigma_c": "=", "alpha": "+", "xi_c": "+", "xi_e": "+", "phi_e": "+"},
    "bw": {"sigma_c": "=", "alpha": "-", "xi_c": "=", "xi_e": "=", "phi_e": "-if>=0"},
}


@pytest.mark.acceptance(*AC5)
def test_ac5_directional_monotonicity():
    def check(case):
        counts, cell = case
        before = measure_set(PrayatulMatrix(*counts))
        after = measure_set(PrayatulMatrix(*_step(counts, cell)))
        for key, direction in MONOTONE[cell].items():
            b, a = before[key].exact, after[key].exact
            if b is None or a is None:
                continue
            if direction == "+":
                assert a >= b, (counts, cell, key)
            elif direction == "-":
                assert a <= b, (counts, cell, key)
            elif direction == "=":
                assert a == b, (counts, cell, key)
            elif b >= 0:
                assert a <= b, (counts, cell, key)

    run_property(st.tuples(matrices(), st.sampled_from(sorted(MONOTONE))), check)


def _denominators(br, rw, wr, bw):
    n = br + rw + wr + bw
    return {"sigma_c": rw + wr, "alpha": n, "xi_c": br + rw + wr, "xi_e": br + rw + wr, "phi_e": n}


@pytest.mark.acceptance(*AC5)
def test_ac5_continuity_bound():
    @st.composite
    def case(draw):
        g, p, q = draw(label_triples())
        extra = draw(st.tuples(*(st.sampled_from(CLASSES[:2]),) * 3))
        return (g, p, q), extra

    def check(c):
        (g, p, q), (eg, ep, eq) = c
        m0 = generate_prayatul_matrix(*seqs(g, p, q))
        m1 = generate_prayatul_matrix(*seqs(g + [eg], p + [ep], q + [eq]))
        diffs = [b - a for a, b in zip(m0.counts, m1.counts)]
        assert sorted(diffs) == [0, 0, 0, 1]
        before, after = measure_set(m0), measure_set(m1)
        dens = _denominators(*m0.counts)
        for key in KEYS:
            if before[key].defined and after[key].defined:
                assert abs(after[key].exact - before[key].exact) <= Fraction(2, dens[key] + 1)

    run_property(case(), check)


@pytest.mark.acceptance(*AC5)
def test_ac5_antisymmetry():
    def check(triple):
        g, p, q = seqs(*triple)
        m = generate_prayatul_matrix(g, p, q)
        swapped = generate_prayatul_matrix(g, q, p)
        t = transpose(m)
        assert t == swapped
        sm, st_ = measure_set(m).sigma_c, measure_set(t).sigma_c
        if sm.defined:
            assert st_.exact == -sm.exact
        else:
            assert not st_.defined
        assert measure_set(t).values() == measure_set(swapped).values()

    run_property(label_triples(), check)


@pytest.mark.acceptance(*AC5)
def test_ac5_superiority_identity():
    def check(counts):
        br, rw, wr, bw = counts
        ms = measure_set(PrayatulMatrix(*counts))
        if ms.xi_e.defined:
            assert ms.phi_e.exact == ms.xi_e.exact * Fraction(br + rw + wr, br + rw + wr + bw)

    run_property(matrices(), check)


@pytest.mark.acceptance(*AC5)
def test_ac5_partition():
    def check(triple):
        m = generate_prayatul_matrix(*seqs(*triple))
        assert m.br + m.rw + m.wr + m.bw == len(triple[0])

    run_property(label_triples(), check)


@pytest.mark.acceptance(*AC5)
def test_ac5_measures_match_exact_oracle():
    def check(counts):
        ms = measure_set(PrayatulMatrix(*counts))
        assert {k: v.exact for k, v in ms.items()} == exact_measures(*counts)

    run_property(matrices(), check)


# --------------------------------------------------------------------------
# AC6


@pytest.mark.acceptance("AC6", "1,000,000 instances: matrix + five measures in < 1 s, partition holds")
def test_ac6_scale():
    n = 1_000_000
    rng = random.Random(6)
    classes = "0123456789"
    ids = tuple(map(str, range(n)))
    g = [rng.choice(classes) for _ in range(n)]
    p = [x if rng.random() < 0.9 else "x" for x in g]
    q = [x if rng.random() < 0.8 else "y" for x in g]
    G, P, Q = LabelSequence(ids, g), LabelSequence(ids, p), LabelSequence(ids, q)
    start = time.perf_counter()
    m = generate_prayatul_matrix(G, P, Q)
    ms = measure_set(m)
    elapsed = time.perf_counter() - start
    assert m.br + m.rw + m.wr + m.bw == n
    assert ms.alpha.defined
    assert elapsed < 1.0, f"{elapsed:.3f} s"


# --------------------------------------------------------------------------
# AC7

MM_ARGS = ["compare", "--truth", "fixtures/mm/truth.csv", "--primary", "NN=fixtures/mm/nn.csv",
           "--alternative", "DT=fixtures/mm/dt.csv"]


@pytest.fixture
def cli_run(monkeypatch):
    monkeypatch.chdir(ROOT)
    runner = CliRunner()
    return lambda *args: runner.invoke(cli, list(args))


@pytest.mark.acceptance("AC7", "CLI golden files, JSON byte-stability, exit codes 1 and 2")
@pytest.mark.parametrize("fmt, ext", [("text", "txt"), ("markdown", "md"), ("csv", "csv"), ("json", "json")])
def test_ac7_golden(cli_run, fmt, ext):
    result = cli_run(*MM_ARGS, "--format", fmt)
    assert result.exit_code == 0
    assert result.stdout == (GOLDEN / f"mm_compare.{ext}").read_text(encoding="utf-8")


@pytest.mark.acceptance("AC7", "CLI golden files, JSON byte-stability, exit codes 1 and 2")
def test_ac7_tournament_golden(cli_run):
    result = cli_run("tournament", *MM_ARGS[1:], "--alternative", "SELF=fixtures/mm/nn.csv")
    assert result.stdout == (GOLDEN / "mm_tournament.txt").read_text(encoding="utf-8")


@pytest.mark.acceptance("AC7", "CLI golden files, JSON byte-stability, exit codes 1 and 2")
def test_ac7_json_byte_stable(cli_run):
    first = cli_run(*MM_ARGS, "--format", "json", "--cells").stdout_bytes
    second = cli_run(*MM_ARGS, "--format", "json", "--cells").stdout_bytes
    assert first == second
    json.loads(first)


@pytest.mark.acceptance("AC7", "CLI golden files, JSON byte-stability, exit codes 1 and 2")
def test_ac7_exit_codes(cli_run):
    usage = cli_run(*MM_ARGS, "--no-such-flag")
    assert usage.exit_code == 1
    missing = cli_run("compare", "--truth", "fixtures/mm/absent.csv", "--primary", "NN=fixtures/mm/nn.csv",
                      "--alternative", "DT=fixtures/mm/dt.csv")
    assert missing.exit_code == 2
    assert "fixtures/mm/absent.csv" in missing.stderr


# --------------------------------------------------------------------------
# AC8


@pytest.mark.acceptance("AC8", "undefined sigma_c rendered as dash / null; mean over {undefined, 0.4}")
def test_ac8_self_comparison(cli_run):
    args = ["compare", "--truth", "fixtures/mm/truth.csv", "--primary", "NN=fixtures/mm/nn.csv",
            "--alternative", "NN2=fixtures/mm/nn.csv"]
    text = cli_run(*args).stdout
    sigma_line = next(line for line in text.splitlines() if line.strip().startswith("sigma_c"))
    assert sigma_line.split()[-1] == "\N{EM DASH}"
    data = json.loads(cli_run(*args, "--format", "json").stdout)
    assert data["pairs"][0]["folds"][0]["measures"]["sigma_c"] == {"value": None, "defined": False}


@pytest.mark.acceptance("AC8", "undefined sigma_c rendered as dash / null; mean over {undefined, 0.4}")
def test_ac8_mean_excludes_undefined():
    folds = []
    for k, counts in enumerate([(5, 0, 0, 0), (0, 7, 3, 0)], start=1):
        m = PrayatulMatrix(*counts)
        folds.append(PairResult("P", "Q", k, m, measure_set(m)))
    agg = aggregate(folds, "mean")
    assert agg.measures.sigma_c.value == 0.4
    assert agg.measures.sigma_c.excluded == 1


@pytest.mark.acceptance("AC8", "undefined sigma_c rendered as dash / null; mean over {undefined, 0.4}")
def test_ac8_mean_excludes_undefined_via_cli(cli_run, tmp_path):
    from test_cli import write_fold_files

    manifest = write_fold_files(tmp_path, [labels_for_counts(5, 0, 0, 0), labels_for_counts(0, 7, 3, 0)])
    data = json.loads(cli_run("folds", "--manifest", manifest, "--format", "json").stdout)
    sigma = data["pairs"][0]["aggregate"]["measures"]["sigma_c"]
    assert sigma == {"value": 0.4, "defined": True, "excluded": 1}
    text = cli_run("folds", "--manifest", manifest).stdout
    assert "\N{EM DASH}" in text
