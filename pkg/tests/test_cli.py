import json

import pytest

from mahonian_lab import cli
from mahonian_lab.perm_stats import JointTable, joint_table_bruteforce


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    monkeypatch.delenv(cli.CACHE_ENV, raising=False)
    monkeypatch.delenv(cli.THREADS_ENV, raising=False)


def test_hn_csv(capsys):
    code, out, _ = run(capsys, "hn", "--n", "3", "--no-cache")
    assert code == 0
    assert out.splitlines()[0] == "inv,maj,count"
    assert JointTable.from_csv(3, out) == joint_table_bruteforce(3)


@pytest.mark.parametrize("method", ["brute", "roselle", "cmu"])
def test_hn_routes_agree(capsys, method):
    code, out, _ = run(capsys, "hn", "--n", "6", "--method", method, "--no-cache")
    assert code == 0
    assert JointTable.from_csv(6, out) == joint_table_bruteforce(6)


def test_hn_json(capsys):
    code, out, _ = run(capsys, "hn", "--n", "2", "--format", "json", "--no-cache")
    assert code == 0
    assert json.loads(out) == [{"inv": 0, "maj": 0, "count": 1}, {"inv": 1, "maj": 1, "count": 1}]


def test_hn_cache_roundtrip(capsys, cache_dir):
    code, first, _ = run(capsys, "hn", "--n", "5", "--cache-dir", str(cache_dir))
    assert code == 0 and (cache_dir / "Hn_5.csv").exists()
    code, second, _ = run(capsys, "hn", "--n", "5", "--cache-dir", str(cache_dir))
    assert code == 0 and first == second


def test_cache_from_environment(capsys, cache_dir, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(cache_dir))
    assert run(capsys, "hn", "--n", "4")[0] == 0
    assert (cache_dir / "Hn_4.csv").exists()


def test_corrupted_cache(capsys, cache_dir):
    run(capsys, "hn", "--n", "6", "--cache-dir", str(cache_dir))
    path = cache_dir / "Hn_6.csv"
    lines = path.read_text().splitlines()
    lines[-1] = lines[-1].rsplit(",", 1)[0] + ",999"
    path.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, "hn", "--n", "6", "--cache-dir", str(cache_dir))
    assert code == 1 and "Hn_6.csv" in err
    # bypassing the cache still works
    assert run(capsys, "hn", "--n", "6", "--cache-dir", str(cache_dir), "--no-cache")[0] == 0
    code, out, _ = run(capsys, "verify", "--n-max", "3", "--cache-dir", str(cache_dir))
    report = json.loads(out)
    assert code == 1 and report["failed"] == ["cache:Hn_6.csv"]


def test_hn_out_file(capsys, tmp_path):
    target = tmp_path / "sub" / "h4.csv"
    code, out, _ = run(capsys, "hn", "--n", "4", "--no-cache", "--out", str(target))
    assert code == 0 and "wrote" in out
    assert JointTable.from_csv(4, target.read_text()) == joint_table_bruteforce(4)


def test_fn_grid(capsys):
    code, out, _ = run(capsys, "fn-grid", "--n", "8")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].startswith("# function=fn n=8")
    rows = [line.split(",") for line in lines[2:]]
    assert len(rows) == 441
    origin = next(r for r in rows if float(r[0]) == 0 and float(r[1]) == 0)
    assert float(origin[4]) < 1e-12


@pytest.mark.parametrize("function", ["char_joint", "char_product", "gaussian"])
def test_charfn(capsys, function):
    code, out, _ = run(capsys, "charfn", "--n", "6", "--function", function,
                       "--steps", "5", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["function"] == function and len(data["rows"]) == 25
    if function != "char_joint":
        assert max(r["abs_dev"] for r in data["rows"]) < 1e-9


def test_charfn_domain_error(capsys):
    # steps=2 puts s = +-s_max on the grid; choose s_max so p = -1
    from mahonian_lab.clt import moments
    import math
    s = repr(math.pi * moments(4).sigma_n)
    code, _, err = run(capsys, "fn-grid", "--n", "4", "--s-max", s, "--steps", "2")
    assert code == 1 and "vanishes" in err


def test_cdf_compare(capsys):
    code, out, _ = run(capsys, "cdf-compare", "--n", "6", "--grid=-1,0,1")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "u,v,empirical,normal,abs_diff" and len(lines) == 10


def test_cmu(capsys):
    code, out, _ = run(capsys, "cmu", "--n", "3")
    assert code == 0 and out == "mu,c\n3,2\n2+1,3\n1+1+1,1\n"
    code, out, _ = run(capsys, "cmu", "--n", "3", "--formula", "printed")
    assert code == 0 and "2+1,-1" in out


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n-max", "6")
    records = json.loads(out)
    assert code == 0 and records
    assert all({"check_id", "n", "d", "k", "lhs", "rhs", "pass"} == set(r) for r in records)


def test_verify_deterministic(capsys):
    code1, out1, _ = run(capsys, "verify", "--n-max", "5")
    code2, out2, _ = run(capsys, "verify", "--n-max", "5")
    assert code1 == code2 == 0 and out1 == out2
    report = json.loads(out1)
    assert report["passed"] and report["failed"] == []
    assert report["bz_distance_n12"] > 0


@pytest.mark.parametrize("argv", [
    ["hn", "--n", "-1"],
    ["hn", "--n", "17"],
    ["hn", "--n", "13", "--method", "brute"],
    ["cmu", "--n", "9"],
    ["fn-grid", "--n", "1"],
    ["fn-grid", "--n", "20"],
    ["fn-grid", "--n", "6", "--steps", "0"],
    ["cdf-compare", "--n", "4", "--grid", "a,b"],
    ["hn", "--n", "3", "--threads", "0"],
    ["nonsense"],
    [],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_allow_large(capsys):
    code, out, _ = run(capsys, "hn", "--n", "17", "--allow-large", "--no-cache")
    assert code == 0 and len(out.splitlines()) > 1
