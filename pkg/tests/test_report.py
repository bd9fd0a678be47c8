import json

import jsonschema
import numpy as np
import pytest

from kappafit import report as rep
from kappafit.exceptions import DegenerateInputError, InputError
from kappafit.kexp import KappaParams
from kappafit.synthetic import kappa_returns, write_price_csv

NEG = KappaParams(0.5, 1.4, 300.0)
POS = KappaParams(0.4, 1.5, 350.0)


@pytest.fixture(scope="module")
def validator():
    return jsonschema.Draft202012Validator(rep.load_schema())


@pytest.fixture(scope="module")
def batch_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("batch")
    for i in range(3):
        write_price_csv(d / f"S{i}.csv", kappa_returns(200, 0.47, NEG, POS, 100 + i))
    # only positive returns: degenerate negative tail
    write_price_csv(d / "UP.csv", np.abs(kappa_returns(200, 0.5, NEG, POS, 7)))
    (d / "BAD.csv").write_text("date,close\n2024-01-02,abc\n", encoding="utf-8")
    return d


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(rep.load_schema())


def test_parse_list():
    assert rep.parse_list("normal, kappa,normal", rep.FAMILIES, "family") == ("normal", "kappa")
    with pytest.raises(InputError):
        rep.parse_list("gamma", rep.FAMILIES, "family")
    with pytest.raises(InputError):
        rep.parse_list(",", rep.FAMILIES, "family")


def test_analyze_families_and_ks(validator):
    r = kappa_returns(800, 0.47, NEG, POS, 1)
    out = rep.analyze_returns("X", r, families=("kappa", "normal"))
    assert set(out.fits) == {"normal", "kappa_neg", "kappa_pos"}
    assert set(out.ks_comparison) == {"normal", "kappa"}
    assert all(0 <= v <= 1 for v in out.ks_comparison.values())
    assert out.ks_comparison["kappa"] < out.ks_comparison["normal"]
    assert out.ok
    validator.validate(json.loads(rep.dumps(out.as_dict())))


def test_analyze_normal_only():
    out = rep.analyze_returns("X", kappa_returns(100, 0.5, NEG, POS, 2), families=("normal",))
    assert list(out.fits) == ["normal"]


def test_analyze_single_tail():
    out = rep.analyze_returns("X", kappa_returns(300, 0.5, NEG, POS, 2), families=("kappa",), tails=("pos",))
    assert list(out.fits) == ["kappa_pos"]
    assert "kappa" not in out.ks_comparison


def test_analyze_too_short():
    with pytest.raises(DegenerateInputError, match="min 30"):
        rep.analyze_returns("X", np.array([0.01]))


def test_small_tail_skipped():
    r = np.r_[-0.01 * np.arange(1, 6), kappa_returns(100, 0.0, NEG, POS, 3)]
    out = rep.analyze_returns("X", r, families=("kappa", "normal"))
    assert "kappa_neg" in out.skipped and "kappa_pos" in out.fits


def test_gof_seeds_follow_tail_index():
    r = kappa_returns(300, 0.5, NEG, POS, 4)
    out = rep.analyze_returns("X", r, families=("kappa",), gof_tails=("pos",), n_boot=3, seed=9)
    assert list(out.gof) == ["pos"]
    assert out.gof["pos"].seed == rep.child_seed(9, 1)
    assert out.meta["n_boot"] == 3


def test_dumps_is_canonical():
    text = rep.dumps({"b": np.float64(1.5), "a": [np.int64(2), float("inf")], "c": np.bool_(True)})
    assert text == '{\n  "a": [\n    2,\n    null\n  ],\n  "b": 1.5,\n  "c": true\n}\n'


def test_write_atomic(tmp_path):
    path = tmp_path / "sub" / "out.json"
    rep.write_atomic(path, "one")
    rep.write_atomic(path, "two")
    assert path.read_text() == "two"
    assert [p.name for p in path.parent.iterdir()] == ["out.json"]


def test_instrument_seed_independent_of_order():
    assert rep.instrument_seed(1, "AAA") == rep.instrument_seed(1, "AAA")
    assert rep.instrument_seed(1, "AAA") != rep.instrument_seed(1, "AAB")
    assert rep.instrument_seed(1, "AAA") != rep.instrument_seed(2, "AAA")


@pytest.fixture(scope="module")
def result(batch_dir):
    return rep.run_batch(batch_dir, n_boot=4, seed=3)


class TestBatch:
    def test_bookkeeping(self, result, validator):
        summary, reports = result
        assert summary.attempted == ["S0", "S1", "S2"]
        assert list(summary.skipped) == ["UP"]
        assert list(summary.failed) == ["BAD"]
        c = summary.counts
        assert c["both"] <= min(c["negative"], c["positive"])
        assert c["either"] == c["negative"] + c["positive"] - c["both"]
        for k, v in summary.percentages.items():
            assert v == pytest.approx(100 * c[k] / 3)
        validator.validate(json.loads(rep.dumps(summary.as_dict())))
        for r in reports.values():
            validator.validate(json.loads(rep.dumps(r.as_dict())))

    def test_significance_is_non_rejection(self, result):
        summary, reports = result
        for t in summary.attempted:
            assert (t in summary.significant["negative"]) == (not reports[t].gof["neg"].reject)
            assert (t in summary.significant["positive"]) == (not reports[t].gof["pos"].reject)

    def test_parallel_matches_serial(self, result, batch_dir):
        summary, reports = rep.run_batch(batch_dir, n_boot=4, seed=3, n_jobs=2)
        assert rep.dumps(summary.as_dict()) == rep.dumps(result[0].as_dict())
        for t, r in reports.items():
            assert rep.dumps(r.as_dict()) == rep.dumps(result[1][t].as_dict())

    def test_summary_arithmetic_property(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            results = []
            for i in range(int(rng.integers(1, 12))):
                neg_rej, pos_rej = rng.random(2) < 0.5

                class G:
                    def __init__(self, r):
                        self.reject = r

                class R:
                    gof = {"neg": G(neg_rej), "pos": G(pos_rej)}

                results.append((f"T{i}", "ok", None, R()))
            s = rep.summarize(results, 0.1, 10, 0)
            c = s.counts
            assert c["both"] <= min(c["negative"], c["positive"])
            assert c["either"] == c["negative"] + c["positive"] - c["both"]


def test_batch_errors(tmp_path):
    with pytest.raises(InputError):
        rep.run_batch(tmp_path)
    with pytest.raises(InputError):
        rep.run_batch(tmp_path / "missing")
