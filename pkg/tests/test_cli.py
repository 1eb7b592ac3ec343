from __future__ import annotations

import csv
import io
import json
import shutil
import subprocess

import pytest

from sepnoether import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--output", "json")
    return code, json.loads(out) if out.strip() else None, err


class TestGroupInfo:
    def test_plain(self, capsys):
        code, data, _ = run_json(capsys, "group-info", "--group", "12,4")
        assert code == 0
        assert (data["rank"], data["exponent"], data["d_star"], data["upper_bound"]) == (2, 12, 14, 18)

    def test_alias(self, capsys):
        code, data, _ = run_json(capsys, "group-info", "--group", "C2xC2")
        assert (data["rank"], data["d_star"], data["upper_bound"]) == (2, 2, 3)

    def test_canonicalized(self, capsys):
        code, out, _ = run(capsys, "group-info", "--group", "4,6")
        assert code == 0
        assert "canonicalized to 12,2" in out
        _, data, _ = run_json(capsys, "group-info", "--group", "4,6")
        assert data["group"] == "12,2" and "notice" in data

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "group-info", "--group", "3,3", "--output", "csv")
        rows = dict(csv.reader(io.StringIO(out)))
        assert rows["rank"] == "2" and rows["order"] == "9"


class TestAtoms:
    def test_davenport(self, capsys):
        code, data, _ = run_json(capsys, "atoms", "--group", "3,3", "--davenport")
        assert code == 0 and data["davenport"] == 5

    def test_cyclic(self, capsys):
        code, data, _ = run_json(capsys, "atoms", "--group", "2", "--elements", "(1)")
        assert [a["vector"] for a in data["atoms"]] == [[2]]

    def test_max_len(self, capsys):
        code, data, _ = run_json(
            capsys, "atoms", "--group", "12,4", "--elements", "(1,0);(1,1);(0,1)", "--max-len", "15"
        )
        vectors = [a["vector"] for a in data["atoms"]]
        assert [11, 1, 3] in vectors
        assert all(a["length"] <= 15 for a in data["atoms"])

    def test_plain_lists(self, capsys):
        code, out, _ = run(capsys, "atoms", "--group", "2,2", "--elements", "(1,0);(1,1);(0,1)")
        assert out.splitlines()[0].startswith("4 atoms")
        assert "[1,1,1]" in out


class TestGroupAtom:
    def test_example(self, capsys):
        argv = ["group-atom", "--group", "12,4", "--elements", "(1,0);(1,1);(0,1)", "--vector", "[11,1,3]"]
        code, out, _ = run(capsys, *argv, "--refute-scaling")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "NOT"
        assert "scaling (l=7): [11,1,3] = 7[5,7,1] - 2[12,0,0] - 4[0,12,0] - [0,0,4]" in lines
        code, data, _ = run_json(capsys, *argv, "--refute-scaling")
        assert data["verdict"] == "NOT" and data["is_atom"] is True
        terms = data["refute_scaling"]["decomposition"]["terms"]
        assert [(t["coeff"], t["vector"]) for t in terms] == [
            (7, [5, 7, 1]), (-2, [12, 0, 0]), (-4, [0, 12, 0]), (-1, [0, 0, 4])
        ]

    def test_trivial(self, capsys):
        code, out, _ = run(capsys, "group-atom", "--group", "2", "--elements", "(1)", "--vector", "[2]")
        assert code == 0 and out.splitlines()[0] == "GROUP-ATOM"

    def test_odd_table(self, capsys):
        code, out, _ = run(
            capsys, "group-atom", "--group", "2,2,2",
            "--elements", "(1,0,0);(1,1,0);(0,1,1);(0,0,1)", "--vector", "[1,1,1,1]",
        )
        assert code == 0 and out.splitlines()[0] == "GROUP-ATOM"

    def test_refute_not_applicable(self, capsys):
        code, data, _ = run_json(
            capsys, "group-atom", "--group", "2", "--elements", "(1)", "--vector", "[2]", "--refute-scaling"
        )
        assert code == 0 and "error" in data["refute_scaling"]

    def test_not_zero_sum(self, capsys):
        code, _, err = run(capsys, "group-atom", "--group", "2", "--elements", "(1)", "--vector", "[1]")
        assert code == 4 and "not zero-sum" in err

    def test_needs_elements(self, capsys):
        code, _, _ = run(capsys, "group-atom", "--group", "2", "--vector", "[2]")
        assert code == 2

    def test_bad_vector(self, capsys):
        code, _, _ = run(capsys, "group-atom", "--group", "2", "--elements", "(1)", "--vector", "2")
        assert code == 2


class TestBetaSep:
    def test_klein(self, capsys):
        code, data, _ = run_json(capsys, "beta-sep", "--group", "2,2")
        assert code == 0 and data["beta_sep"] == 3 and data["schema"] == 1
        assert {"group", "beta_sep", "upper_bound", "witness", "subsets_examined", "elapsed_ms"} <= set(data)

    def test_workers_byte_identical(self, capsys):
        outs = []
        for w in ("1", "2", "3"):
            _, data, _ = run_json(capsys, "beta-sep", "--group", "3,3", "--workers", w)
            data.pop("elapsed_ms")
            outs.append(json.dumps(data, indent=2))
        assert outs[0] == outs[1] == outs[2]

    def test_audit_and_symmetry(self, capsys):
        _, a, _ = run_json(capsys, "beta-sep", "--group", "4,2", "--audit")
        _, s, _ = run_json(capsys, "beta-sep", "--group", "4,2", "--symmetry")
        assert a["beta_sep"] == s["beta_sep"] == 5

    def test_cap(self, capsys):
        code, _, err = run(capsys, "beta-sep", "--group", "6,6,2")
        assert code == 3 and "sweep cap" in err

    def test_cache(self, capsys, tmp_path):
        _, first, _ = run_json(capsys, "beta-sep", "--group", "3,3", "--cache-dir", str(tmp_path))
        files = list(tmp_path.glob("*.json"))
        assert len(files) == 1
        _, second, _ = run_json(capsys, "beta-sep", "--group", "3,3", "--cache-dir", str(tmp_path))
        assert second == first  # served verbatim, elapsed included
        # a tampered witness fails re-verification and is recomputed
        entry = json.loads(files[0].read_text())
        entry["payload"]["witness"]["vector"] = [3, 0, 0]
        entry["payload"]["elapsed_ms"] = -1
        files[0].write_text(json.dumps(entry))
        _, third, _ = run_json(capsys, "beta-sep", "--group", "3,3", "--cache-dir", str(tmp_path))
        assert third["beta_sep"] == 4 and third["elapsed_ms"] >= 0

    def test_batch_csv(self, capsys, tmp_path):
        batch = tmp_path / "groups.txt"
        batch.write_text("# small groups\n2\n2,2\n\nC3xC3\n")
        code, out, _ = run(capsys, "beta-sep", "--group", "2", "--batch", str(batch), "--output", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0
        assert [(r["group"], r["beta_sep"]) for r in rows] == [("2", "2"), ("2,2", "3"), ("3,3", "4")]

    def test_env_workers(self, capsys, monkeypatch):
        monkeypatch.setenv("SEPNOETHER_WORKERS", "2")
        monkeypatch.setenv("SEPNOETHER_OUTPUT", "json")
        code, out, _ = run(capsys, "beta-sep", "--group", "2,2")
        assert code == 0 and json.loads(out)["beta_sep"] == 3

    def test_env_bad(self, capsys, monkeypatch):
        monkeypatch.setenv("SEPNOETHER_WORKERS", "many")
        code, _, err = run(capsys, "beta-sep", "--group", "2,2")
        assert code == 2 and "SEPNOETHER_WORKERS" in err

    def test_bad_workers(self, capsys):
        code, _, _ = run(capsys, "beta-sep", "--group", "2,2", "--workers", "0")
        assert code == 4


class TestVerify:
    def test_c6_c2(self, capsys):
        code, data, _ = run_json(capsys, "verify", "--group", "6,2")
        assert code == 0 and data["status"] == "MATCH" and data["beta_sep"] == 7
        by = {e["theorem"]: e for e in data["theorems"]}
        assert by["6.2"]["status"] == "SKIPPED" and by["remark-6.3"]["closed_form"] == 7

    def test_skipped(self, capsys):
        code, out, _ = run(capsys, "verify", "--group", "6,6,2")
        assert code == 0
        assert "closed form only, sweep skipped" in out
        assert "6.1" in out and "closed=12" in out

    def test_batch(self, capsys, tmp_path):
        batch = tmp_path / "g.txt"
        batch.write_text("2,2\n4,4\n")
        code, data, _ = run_json(capsys, "verify", "--group", "2", "--batch", str(batch))
        assert code == 0 and [r["beta_sep"] for r in data["results"]] == [3, 6]


class TestWitness:
    def test_c4_squared(self, capsys):
        code, data, _ = run_json(capsys, "witness", "--group", "4,4")
        assert code == 0 and data["vector"] == [3, 1, 2] and data["certified"] and data["support_divisibility"]

    def test_prime(self, capsys):
        code, data, _ = run_json(capsys, "witness", "--group", "6,6", "--prime", "3")
        assert code == 0 and data["vector"] == [5, 1, 2] and data["prime"] == 3

    def test_bad_prime(self, capsys):
        code, _, _ = run(capsys, "witness", "--group", "4,4", "--prime", "3")
        assert code == 4


class TestErrors:
    def test_parse(self, capsys):
        code, _, err = run(capsys, "group-info", "--group", "abc")
        assert code == 2 and err.startswith("error:")

    def test_trivial_group(self, capsys):
        code, _, _ = run(capsys, "group-info", "--group", "1")
        assert code == 2

    def test_noncanonical_with_elements(self, capsys):
        code, _, err = run(capsys, "atoms", "--group", "4,6", "--elements", "(1,0)")
        assert code == 2 and "invariant-factor form" in err

    def test_duplicate_elements(self, capsys):
        code, _, _ = run(capsys, "atoms", "--group", "2,2", "--elements", "(1,0);(1,0)")
        assert code == 4

    def test_node_cap(self, capsys):
        code, _, _ = run(capsys, "atoms", "--group", "4,4", "--davenport", "--node-cap", "100")
        assert code == 3

    def test_argparse(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["nope"])
        assert exc.value.code == 2


@pytest.mark.skipif(shutil.which("sepnoether") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["sepnoether", "beta-sep", "--group", "2,2", "--output", "json"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["beta_sep"] == 3
