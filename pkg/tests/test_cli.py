import json

import pytest

from gyrokit.cli import main

from conftest import bundled_table_path

Z4 = f"table:{bundled_table_path('z4')}"
G8 = f"table:{bundled_table_path('g8')}"


@pytest.fixture
def weak_chain(tmp_path):
    p = tmp_path / "weak.json"
    p.write_text(json.dumps(
        {"flavor": "weak", "sets": [[0, 1, 2, 3], [0, 2], [0]]}))
    return str(p)


@pytest.fixture
def adm_chain(tmp_path):
    p = tmp_path / "adm.json"
    p.write_text(json.dumps(
        {"flavor": "admissible", "sets": [[0, 1, 2, 3], [0, 2], [0, 2]]}))
    return str(p)


@pytest.fixture
def radial_chain(tmp_path):
    radii = [0.8, 0.5] + [0.5 / 2 ** k for k in range(1, 10)]
    p = tmp_path / "radial.json"
    p.write_text(json.dumps({"flavor": "weak", "radii": radii}))
    return str(p)


def read_jsonl(path):
    return [json.loads(line) for line in open(path)]


class TestCheck:
    def test_table_passes(self, tmp_path):
        out = tmp_path / "r.jsonl"
        assert main(["check", "--model", Z4, "--out", str(out)]) == 0
        recs = read_jsonl(out)
        assert all(r["verdict"] == "pass" for r in recs if "verdict" in r)

    def test_einstein_seeded(self, tmp_path):
        out = tmp_path / "r.jsonl"
        rc = main(["check", "--model", "einstein", "--samples", "10000",
                   "--seed", "7", "--out", str(out)])
        assert rc == 0
        residuals = [r["residual"] for r in read_jsonl(out) if "residual" in r]
        assert max(residuals) < 1e-9

    def test_broken_table_fails_with_witness(self, tmp_path):
        doc = json.loads(bundled_table_path("z4").read_text())
        doc["table"][1][1] = 3
        bad = tmp_path / "broken.json"
        bad.write_text(json.dumps(doc))
        out = tmp_path / "r.jsonl"
        rc = main(["check", "--model", f"table:{bad}", "--out", str(out)])
        assert rc == 1
        fails = [r for r in read_jsonl(out) if r.get("verdict") == "fail"]
        assert fails and any(r.get("witnesses") for r in fails)

    def test_missing_file_is_input_error(self):
        assert main(["check", "--model", "table:/nope/nothing.json"]) == 2

    def test_unknown_model_is_input_error(self):
        assert main(["check", "--model", "octonion"]) == 2


class TestIdentities:
    def test_mobius(self, tmp_path):
        out = tmp_path / "r.jsonl"
        rc = main(["identities", "--model", "mobius", "--samples", "3000",
                   "--seed", "5", "--out", str(out)])
        assert rc == 0
        names = {r["check"] for r in read_jsonl(out)}
        assert "identity-gyrosum-inversion" in names


class TestCosets:
    def test_partition(self, tmp_path):
        out = tmp_path / "r.jsonl"
        rc = main(["cosets", "--model", Z4, "--subset", "0,2",
                   "--out", str(out)])
        assert rc == 0
        part = next(r for r in read_jsonl(out) if r["check"] == "partition")
        assert part["cosets"] == [[0, 2], [1, 3]]

    def test_non_subgyrogroup_exits_one(self):
        assert main(["cosets", "--model", Z4, "--subset", "0,1"]) == 1

    def test_non_L_subgyrogroup_exits_one(self):
        # {0, 3} is a subgyrogroup of g8 but not an L-subgyrogroup
        assert main(["cosets", "--model", G8, "--subset", "0,3"]) == 1

    def test_continuous_rejected(self):
        assert main(["cosets", "--model", "einstein", "--subset", "axis:x"]) == 2


class TestMetric:
    def test_finite_pairs(self, weak_chain, tmp_path):
        out = tmp_path / "r.jsonl"
        rc = main(["metric", "--model", Z4, "--chain", weak_chain,
                   "--pairs", "0:1,0:2", "--depth", "4", "--out", str(out)])
        assert rc == 0
        recs = {r["check"]: r for r in read_jsonl(out)}
        assert recs["distance[0]"]["value"] == "2"
        assert recs["distance[1]"]["value"] == "1"
        assert recs["prenorm-values"]["value"] == {
            "0": "0", "1": "1", "2": "1/2", "3": "1"}

    def test_quotient_table(self, adm_chain, tmp_path):
        out = tmp_path / "r.jsonl"
        rc = main(["metric", "--model", Z4, "--chain", adm_chain,
                   "--subset", "0,2", "--quotient", "--depth", "4",
                   "--out", str(out)])
        assert rc == 0
        recs = {r["check"]: r for r in read_jsonl(out)}
        assert recs["quotient-distances"]["value"] == [["0", "2"], ["2", "0"]]

    def test_einstein_zero_distance(self, radial_chain, tmp_path):
        out = tmp_path / "r.jsonl"
        rc = main(["metric", "--model", "einstein", "--chain", radial_chain,
                   "--pairs", "0:0", "--samples", "500", "--out", str(out)])
        assert rc == 0
        rec = next(r for r in read_jsonl(out) if r["check"] == "distance[0]")
        assert float(rec["value"]) == 0.0

    def test_invalid_chain_exits_two(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"flavor": "weak", "sets": [[0, 1, 2, 3],
                                                            [0, 1]]}))
        assert main(["metric", "--model", Z4, "--chain", str(p)]) == 2


class TestOtherCommands:
    def test_microassoc_finite(self):
        rc = main(["microassoc", "--model", G8, "--vset", "0,1,4,5",
                   "--wset", "0,1"])
        assert rc == 0

    def test_microassoc_counterexample(self):
        rc = main(["microassoc", "--model", G8, "--vset", "0,1,3"])
        assert rc == 1

    def test_microassoc_einstein(self):
        rc = main(["microassoc", "--model", "einstein", "--vset", "ball:0.5",
                   "--wset", "ball:0.3", "--samples", "40"])
        assert rc == 0

    def test_hull(self, tmp_path):
        out = tmp_path / "r.jsonl"
        rc = main(["hull", "--model", G8, "--subset", "0,1,2,3,4,5,6,7",
                   "--depth", "6", "--out", str(out)])
        assert rc == 0
        recs = {r["check"]: r for r in read_jsonl(out)}
        assert recs["tail-l-subgyrogroup"]["verdict"] == "pass"
        assert recs["hull-chain"]["value"]["flavor"] == "admissible"

    def test_intersect(self, adm_chain, tmp_path):
        out = tmp_path / "r.jsonl"
        rc = main(["intersect", "--model", Z4, "--chain", adm_chain,
                   "--chain", adm_chain, "--out", str(out)])
        assert rc == 0
        recs = {r["check"]: r for r in read_jsonl(out)}
        assert recs["intersection-chain"]["value"]["sets"][1] == [0, 2]


class TestDeterminism:
    def test_byte_identical_reports(self, adm_chain, tmp_path):
        outs = []
        for i in (1, 2):
            out = tmp_path / f"rep{i}.jsonl"
            rc = main(["metric", "--model", Z4, "--chain", adm_chain,
                       "--subset", "0,2", "--quotient", "--depth", "6",
                       "--seed", "42", "--out", str(out)])
            assert rc == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

        outs = []
        for i in (1, 2):
            out = tmp_path / f"chk{i}.jsonl"
            rc = main(["check", "--model", G8, "--seed", "42",
                       "--out", str(out)])
            assert rc == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
