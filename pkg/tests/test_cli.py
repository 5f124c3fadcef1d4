import io
import json
import subprocess
import sys

import pytest

from wildcount import cli
from wildcount.counts import CountResult
from wildcount.verify import Check


def run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), out=buf)
    return code, buf.getvalue()


def test_count_json():
    code, out = run("count", "--p", "3", "--jump", "2")
    assert code == 0
    res = CountResult.from_json(out)
    assert res.value == 10 and res.branch == "main-sum"
    assert CountResult.from_json(res.to_json()) == res


def test_count_p2_and_zero_and_range():
    code, out = run("count", "--p", "2", "--e", "1", "--jump", "2", "--f-base", "2")
    assert code == 0 and json.loads(out)["value"] == 8
    code, out = run("count", "--p", "3", "--jump", "3")
    assert code == 0 and json.loads(out)["status"] == "zero"
    code, out = run("count", "--p", "3", "--e", "2", "--jump", "3")
    assert code == 3 and json.loads(out)["status"] == "out_of_range"


def test_count_csv():
    code, out = run("count", "--p", "3", "--jump", "2", "--inertia", "2", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == ",".join(cli.CSV_COLUMNS)
    assert lines[1] == "3,2,1,2,2,main-sum,40,,"


def test_usage_errors():
    assert run("count", "--p", "4", "--jump", "2")[0] == 2
    assert run("count", "--jump", "2")[0] == 2
    assert run("sweep", "--p", "3", "--jump", "x")[0] == 2
    assert run()[0] == 2


def test_resource_cap_exit():
    assert run("count", "--p", "3", "--jump", "2", "--inertia", "4", "--cap", "2")[0] == 4
    assert run("oracle", "--p", "3", "--jump", "2", "--inertia", "3", "--cap", "100")[0] == 4


def test_oracle_command():
    code, out = run("oracle", "--p", "3", "--jump", "2")
    rec = json.loads(out)
    assert code == 0 and (rec["formula"], rec["oracle"], rec["delta"]) == (10, 9, 1)
    code, out = run("oracle", "--p", "3", "--jump", "2", "--include-full")
    assert json.loads(out)["delta"] == 0
    code, out = run("oracle", "--p", "2", "--e", "1", "--jump", "2")
    rec = json.loads(out)
    assert code == 0 and rec["oracle"] == rec["formula"] == 4
    assert run("oracle", "--p", "3", "--e", "2", "--jump", "3")[0] == 3


def test_int_list():
    assert cli._int_list("1,3..5,3") == [1, 3, 4, 5]


def sweep_args(cache, *extra):
    return ("sweep", "--p", "2,3", "--jump", "1..3", "--inertia", "1..2",
            "--engine", "both", "--cache", str(cache), *extra)


def test_sweep_cache_is_idempotent(tmp_path):
    cache = tmp_path / "results.jsonl"
    code1, out1 = run(*sweep_args(cache))
    lines1 = cache.read_text().splitlines()
    code2, out2 = run(*sweep_args(cache))
    assert code1 == code2 == 0
    assert out1 == out2
    assert cache.read_text().splitlines() == lines1  # nothing recomputed
    rows = out1.splitlines()[1:]
    assert rows == sorted(rows, key=lambda r: tuple(int(x) for x in r.split(",")[:5]))
    assert all(r.endswith(",1") or r.endswith(",0") for r in rows if r.split(",")[5] == "main-sum")


def test_sweep_survives_torn_cache(tmp_path):
    cache = tmp_path / "results.jsonl"
    _, out1 = run(*sweep_args(cache))
    with open(cache, "a") as fh:
        fh.write('{"params": {"p": 3')
    _, out2 = run(*sweep_args(cache))
    assert out1 == out2


def test_sweep_workers_match_serial(tmp_path):
    _, serial = run("sweep", "--p", "2,3,5", "--jump", "1..4", "--inertia", "1..2")
    _, parallel = run("sweep", "--p", "2,3,5", "--jump", "1..4", "--inertia", "1..2", "--workers", "2")
    assert serial == parallel


def test_sweep_empty_and_json():
    code, out = run("sweep", "--p", "7", "--jump", "5", "--engine", "oracle")
    assert code == 0 and out.splitlines() == [",".join(cli.CSV_COLUMNS)]
    code, out = run("sweep", "--p", "3", "--jump", "2", "--format", "json")
    assert json.loads(out)["formula"] == 10


def test_verify_exit_codes(monkeypatch):
    code, out = run("verify", "--suite", "partition-log")
    assert code == 0 and all(json.loads(l)["passed"] for l in out.splitlines())
    monkeypatch.setattr(cli, "run_suite", lambda name, seed: [Check("broken", False, {}, 0.0)])
    assert run("verify")[0] == 5


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wildcount", "count", "--p", "5", "--jump", "2"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 26
