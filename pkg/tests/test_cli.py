import io

import pytest

from unipotent.cli import BenchConfig, main, run_bench
from unipotent.collect import random_element, reorder, u_invert, u_multiply
from unipotent.presentation import presentation
from unipotent.rings import PrimeField
from unipotent.rootsystem import build_root_system, representation_order, w0_ordering


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue().strip()


def test_collect_example():
    assert run("collect", "--type", "A", "--rank", "2", "--field", "fp:17", "--method", "cfo",
               "x[3](5) x[1](2)") == (0, "(2, 10, 5)")


def test_collect_empty_word():
    assert run("collect", "--type", "B", "--rank", "2", "--method", "cfl", "") == (0, "(0, 0, 0, 0)")


def test_collect_inverse_terms_match_library():
    rs = build_root_system("C", 2)
    F = PrimeField(17)
    code, text = run("collect", "--type", "C", "--rank", "2", "--method", "cfo", "--format", "csv",
                     "x[1](3) x[2](4) x[1](3)^-1 x[3](1)^-1")
    assert code == 0
    pres = presentation(rs, w0_ordering(rs))
    rep = representation_order(rs)
    from unipotent.collect import word_from_terms, collect
    x = reorder(F, random_element(rep, F, __import__("random").Random(0)), rep)
    # library: (x1(3) x2(4)) * (x3(1) x1(3))^-1
    left = collect(pres, word_from_terms(pres, F, [(0, 3), (1, 4)]), "cfo")
    right = collect(pres, word_from_terms(pres, F, [(2, 1), (0, 3)]), "cfo")
    want = reorder(F, u_multiply(pres, F, left, u_invert(pres, F, right, "cfo"), "cfo"), rep)
    assert text == want.csv_row(F)


def test_collect_parse_error_is_usage_error():
    assert run("collect", "--method", "cfo", "x[1](2) x[")[0] == 2


def test_usage_errors():
    assert run("mul", "--method", "bogus", "1,2,3", "1,2,3")[0] == 2
    assert run("mul", "--type", "A", "--rank", "2", "--method", "direct", "1,2", "1,2,3")[0] == 2
    assert run("mul", "--type", "B", "--rank", "2", "--field", "fp:2", "--method", "direct",
               "1,0,0,0", "0,0,0,1")[0] == 2
    assert run("collect", "--type", "E", "--rank", "6", "")[0] == 2
    assert run("nonsense")[0] == 2


@pytest.mark.parametrize("method", ["ctl", "cfl", "cfo", "scfl", "scfo", "sd", "direct", "matrix"])
def test_mul_and_inv_all_methods(method):
    code, text = run("mul", "--type", "A", "--rank", "2", "--method", method, "1,0,0", "0,0,1")
    assert (code, text) == (0, "(1, 0, 1)")
    code, text = run("inv", "--type", "A", "--rank", "2", "--field", "q", "--method", method, "1/2,0,3")
    assert (code, text) == (0, "(-1/2, 3/2, -3)")


def test_bench_zero_trials():
    assert run_bench(BenchConfig("A", 3, "fp:17", ("cfo",), trials=0)) == []


def test_bench_is_deterministic_and_ordered():
    cfg = BenchConfig("A", 6, "fp:17", ("direct", "cfo", "cfl", "ctl"), trials=5, seed=3)
    a, b = run_bench(cfg), run_bench(cfg)
    assert [r[:7] for r in a] == [r[:7] for r in b]
    mult = {r[3]: float(r[6]) for r in a if r[4] == "multiply"}
    assert mult["direct"] < mult["cfo"] < mult["cfl"] < mult["ctl"]


def test_bench_csv_schema():
    code, text = run("bench", "--type", "A", "--rank", "3", "--trials", "2", "--method", "cfo,sd",
                     "--format", "csv")
    lines = text.splitlines()
    assert code == 0
    assert lines[0] == "type,rank,field,method,operation,trials,avg_ring_ops,avg_time_ms"
    assert len(lines) == 5 and all(len(l.split(",")) == 8 for l in lines)


def test_bench_reports_memory_guard_per_cell():
    code, text = run("bench", "--type", "B", "--rank", "5", "--trials", "1", "--method", "scfl,cfo",
                     "--node-cap", "100", "--format", "csv")
    assert code == 0
    assert "B,5,fp:17,scfl,multiply,1,MEM,MEM" in text


def test_halldeg():
    code, text = run("halldeg", "--type", "A", "--rank", "5", "--method", "cfl", "--format", "csv")
    assert code == 0 and text.splitlines()[1] == "A,5,cfl,height,5,7/3"
    code, text = run("halldeg", "--type", "B", "--rank", "4", "--method", "cfo", "--format", "csv")
    assert text.splitlines()[1].split(",")[4] == "4"
    code, text = run("halldeg", "--type", "A", "--rank", "1", "--format", "csv")
    assert text.splitlines() == ["type,rank,strategy,ordering,max_degree,avg_degree"]


def test_halldeg_entries_and_node_cap():
    code, text = run("halldeg", "--type", "A", "--rank", "2", "--method", "cfo", "--entries",
                     "--format", "csv")
    assert code == 0 and text.splitlines()[0] == "type,rank,strategy,r,s,nodes,total_degree"
    assert run("halldeg", "--type", "B", "--rank", "6", "--method", "cfl", "--node-cap", "100")[0] == 3


def test_selftest_quick():
    code, text = run("selftest", "--quick")
    assert code == 0 and "FAIL" not in text


def test_selftest_mutation():
    code, text = run("selftest", "--mutate-table", "--type", "A", "--rank", "3")
    assert code == 1
    assert "FAIL" in text and "associativity" in text
