import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from quasirandom.cli import SCHEMA_PATH, main, parse_vertices
from quasirandom.generators import gen_gnp
from quasirandom.io import load_blocks, load_graph, save_graph

SCHEMA = json.loads(SCHEMA_PATH.read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return doc


@pytest.fixture
def g20(tmp_path):
    path = tmp_path / "g20.el"
    save_graph(gen_gnp(20, 0.5, 2), path)
    return str(path)


def test_parse_vertices():
    assert parse_vertices("0-3,7, 9").to_list() == [0, 1, 2, 3, 7, 9]


class TestGen:
    def test_gnp_deterministic(self, tmp_path, capsys):
        one, two = tmp_path / "a.el", tmp_path / "b.el"
        assert run(capsys, "gen", "gnp", "-n", "100", "-p", "0.5", "--seed", "1", "-o", str(one))[0] == 0
        assert run(capsys, "gen", "gnp", "-n", "100", "-p", "0.5", "--seed", "1", "-o", str(two))[0] == 0
        assert one.read_bytes() == two.read_bytes()
        assert load_graph(one) == gen_gnp(100, 0.5, 1)
        side = json.loads((tmp_path / "a.el.blocks.json").read_text())
        assert side["config"]["seed"] == 1

    def test_counterexample_bad_n(self, tmp_path, capsys):
        code, _, err = run(capsys, "gen", "counterexample", "-n", "63", "-o", str(tmp_path / "x.el"))
        assert code == 2 and "divisible" in err

    def test_template_with_sidecar(self, tmp_path, capsys):
        out = tmp_path / "t.el"
        code, _, _ = run(
            capsys, "gen", "template", "-k", "2", "--weights", "0.3,0.7,0.7,0.3", "--sizes", "50,50",
            "--seed", "2", "-o", str(out),
        )
        assert code == 0
        blocks = load_blocks(tmp_path / "t.el.blocks.json")
        assert [len(b) for b in blocks.blocks] == [50, 50]

    def test_missing_output(self, capsys):
        assert run(capsys, "gen", "gnp", "-n", "5")[0] == 2

    def test_bad_seed(self, capsys):
        assert run(capsys, "gen", "gnp", "-n", "5", "--seed", "-1", "-o", "x")[0] == 2


class TestDefect:
    def test_exact_hereditary(self, g20, capsys):
        doc = report(capsys, "defect", "--family", "Pstar", "--pattern", "K3", "-p", "0.5", "--exact", g20)
        res = doc["result"]
        assert res["mode"] == "exact" and res["witness"] and res["defect"] >= 0
        assert doc["config"]["argv"][0] == "defect"

    def test_sampled_partite_byte_identical(self, g20, capsys):
        argv = ("defect", "--family", "Q", "--pattern", "K3", "-p", "0.5", "--samples", "50", "--seed", "7", g20)
        first = run(capsys, *argv)
        second = run(capsys, *argv)
        assert first == second and first[0] == 0
        assert json.loads(first[1])["result"]["seed"] == 7

    def test_rerun_from_embedded_config(self, g20, capsys):
        doc = report(capsys, "defect", "--family", "R", "--pattern", "P3", "-p", "1/2", "--samples", "20", g20)
        again = report(capsys, *doc["config"]["argv"])
        assert again == doc

    def test_threads_do_not_change_output(self, g20, capsys):
        base = ("defect", "--family", "Pstar", "--pattern", "K2", "-p", "0.5", "--samples", "30", g20)
        one = report(capsys, *base, "--threads", "1")["result"]
        four = report(capsys, *base, "--threads", "4")["result"]
        assert one == four

    def test_exact_too_large(self, tmp_path, capsys):
        path = tmp_path / "big.el"
        save_graph(gen_gnp(30, 0.5, 0), path)
        code, _, err = run(capsys, "defect", "--family", "Pstar", "--pattern", "K2", "-p", "0.5", "--exact", str(path))
        assert code == 2 and "error" in err

    def test_csv(self, g20, capsys):
        code, out, _ = run(capsys, "defect", "--family", "P", "--pattern", "K3", "-p", "0.5", "--format", "csv", g20)
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and rows[0][0] == "kind" and rows[1][0] == "P"

    def test_unknown_pattern(self, g20, capsys):
        assert run(capsys, "defect", "--family", "P", "--pattern", "K99", "-p", "0.5", g20)[0] == 2

    def test_malformed_graph(self, tmp_path, capsys):
        path = tmp_path / "bad.el"
        path.write_text("3 1\n0 0\n")
        code, _, err = run(capsys, "count", str(path), "--pattern", "K2")
        assert code == 2 and "line 2" in err

    def test_missing_file(self, capsys):
        assert run(capsys, "count", "/nonexistent.el", "--pattern", "K2")[0] == 2


class TestOtherCommands:
    def test_count(self, g20, capsys):
        res = report(capsys, "count", g20, "--pattern", "K2")["result"]
        assert res["labeled_copies"] == res["homomorphisms"] == 2 * res["edges"]

    def test_count_partite_from_blocks(self, tmp_path, capsys):
        out = tmp_path / "t.el"
        run(capsys, "gen", "template", "-k", "2", "--weights", "1,1,1,1", "--sizes", "3,4", "-o", str(out))
        res = report(capsys, "count", str(out), "--pattern", "K2", "--blocks", str(tmp_path / "t.el.blocks.json"))
        assert res["result"]["partite_averaged"] == 2 * 3 * 4

    def test_regularity_exact_proof(self, tmp_path, capsys):
        out = tmp_path / "t.el"
        run(capsys, "gen", "template", "-k", "2", "--weights", "0,1,1,0", "--sizes", "5,5", "-o", str(out))
        res = report(
            capsys, "regularity", str(out), "--a", "0-4", "--b", "5-9", "-q", "1", "--eps", "0.01",
            "--strategy", "exact",
        )["result"]
        assert res["witness"] is None and res["proof_of_regularity"]

    def test_regularity_witness(self, tmp_path, capsys):
        out = tmp_path / "e.el"
        out.write_text("6 0\n")
        res = report(capsys, "regularity", str(out), "--a", "0-2", "--b", "3-5", "-q", "1/2", "--eps", "0.4")["result"]
        assert res["witness"]["a_prime"] == [0, 1, 2] and res["witness"]["density"] == "0/1"

    def test_regularity_needs_pair(self, g20, capsys):
        assert run(capsys, "regularity", g20, "-q", "0.5", "--eps", "0.1")[0] == 2

    def test_increment_trace_file(self, tmp_path, capsys):
        out = tmp_path / "t.el"
        run(capsys, "gen", "template", "-k", "2", "--weights", "0.4,0.6,0.6,0.4", "--sizes", "100,100",
            "--seed", "3", "-o", str(out))
        trace = tmp_path / "trace.jsonl"
        doc = report(
            capsys, "increment", str(out), "-p", "1/2", "--blocks", str(tmp_path / "t.el.blocks.json"),
            "--no-enforce", "--trace", str(trace), "--seed", "3",
        )
        lines = [json.loads(x) for x in trace.read_text().splitlines()]
        assert len(lines) == doc["result"]["steps"] + 1
        alphas = [x["alpha"] for x in lines]
        assert alphas == sorted(alphas)

    def test_polynomial(self, capsys):
        res = report(capsys, "polynomial", "--pattern", "C4", "-p", "1/3")["result"]
        assert res["coeffs"] == ["1/81", "0/1", "0/1", "0/1", "1/1"] and res["first_nonzero"] == 4

    def test_polynomial_forest(self, capsys):
        res = report(capsys, "polynomial", "--pattern", "P3", "-p", "1/2")["result"]
        assert res["girth"] is None and res["first_nonzero"] is None


class TestExperiment:
    def test_girth_vanishing(self, capsys):
        doc = report(capsys, "experiment", "girth-vanishing", "--pattern", "C6", "-p", "1/2")
        assert doc["result"]["all_vanish"] and doc["experiment"]["rows"][0][3] == 6

    def test_unknown_name(self, capsys):
        code, _, err = run(capsys, "experiment", "nope")
        assert code == 2 and "girth-vanishing" in err

    def test_output_files(self, tmp_path, capsys):
        base = tmp_path / "inc"
        code, _, _ = run(
            capsys, "experiment", "increment-trace", "-n", "120", "--instances", "2", "--seed", "1", "-o", str(base)
        )
        assert code == 0
        doc = json.loads((tmp_path / "inc.json").read_text())
        jsonschema.validate(doc, SCHEMA)
        rows = list(csv.reader((tmp_path / "inc.csv").open()))
        assert rows[0] == doc["experiment"]["columns"] and len(rows) == 3
        assert (tmp_path / "inc.trace.jsonl").read_text()

    def test_csv_stdout(self, capsys):
        code, out, _ = run(capsys, "experiment", "split-concentration", "-n", "16", "--instances", "3", "--format", "csv")
        assert code == 0 and out.splitlines()[0] == "seed,size,e_x,e_y,gap,gap_untrimmed"
        assert len(out.splitlines()) == 4


def test_module_entry_point(tmp_path):
    out = tmp_path / "g.el"
    proc = subprocess.run(
        [sys.executable, "-m", "quasirandom", "gen", "gnp", "-n", "10", "-o", str(out)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and out.exists()
    proc = subprocess.run([sys.executable, "-m", "quasirandom", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 2
