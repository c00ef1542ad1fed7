"""The twelve acceptance criteria, each at its stated tolerance.

Every test records a one-line verdict; conftest.py prints them after the run.
Run directly (python3 tests/test_acceptance.py) for the same lines without pytest.
"""

import time

from ramlab.checks import run_check, expected_graded
from ramlab.bounds import lower_bound_multiquad

VERDICTS = {}


def record(num, name, ok, detail=""):
    VERDICTS[num] = f"criterion {num:2d} [{name}]: {'PASS' if ok else 'FAIL'}" + \
        (f"  ({detail})" if detail else "")
    print(VERDICTS[num])


def test_01_graded_dims():
    r = run_check("graded-dims")
    got = {c["n"]: tuple(c["graded"]) for c in r["cases"]}
    ok = got == {3: (3, 3, 2), 4: (4, 6, 8, 3)} and r["runtime"] < 30
    ok = ok and expected_graded(4) == (4, 6, 8, 3)
    record(1, "graded-dims", ok, f"{got}, {r['runtime']}s")
    assert ok


def test_02_basis_plus():
    r = run_check("basis-plus")
    want = {(3, 2): [2], (4, 2): [3], (4, 3): [5, 3]}
    ok = all(c["gr"] == want[(c["n"], c["d"])] and c["N_dim"] == c["formula"]
             == (c["n"] - c["d"]) + sum(c["gr"]) for c in r["cases"])
    ok = ok and {(c["n"], c["d"]) for c in r["cases"]} == set(want) and r["pass"]
    record(2, "basis-plus", ok, f"{len(r['cases'])} inertia types")
    assert ok


def test_03_int_pi():
    r = run_check("int-pi")
    orders = {c["n"]: c["order"] for c in r["cases"]}
    ok = orders == {2: 2 ** 3, 3: 2 ** 8, 4: 2 ** 21} and r["pass"]
    record(3, "int-pi", ok, f"orders {orders}")
    assert ok


def test_04_quadratic_loop():
    r = run_check("quadratic-loop", count=100, bound=10 ** 6, seed=0)
    cases = r["cases"]
    ok = len(cases) == 100 and all(abs(c["D"]) <= 10 ** 6 for c in cases)
    ok = ok and {c["D"] > 0 for c in cases} == {True, False}
    ok = ok and all(c["narrow_pred"] == c["t"] - 1 == c["narrow_oracle"] for c in cases)
    ok = ok and all(c["ordinary_pred"] == c["ordinary_oracle"] in (c["t"] - 1, c["t"] - 2)
                    for c in cases)
    ok = ok and r["runtime"] < 120
    record(4, "quadratic-loop", ok, f"{len(r['failures'])} mismatches, {r['runtime']}s")
    assert ok


def test_05_lb_multiquad():
    t0 = time.perf_counter()
    r = run_check("lb-multiquad")
    bad = [(c["d"], c["n"], c["alpha"], c["min"], c["bound"]) for c in r["cases"]
           if c["min"] < lower_bound_multiquad(c["d"], c["n"], c["alpha"])]
    ok = not bad and time.perf_counter() - t0 < 300
    record(5, "lb-multiquad", ok, f"below bound (d, n, alpha, min, bound): {bad}" if bad else "")
    assert ok


def test_06_upper_equality():
    r = run_check("upper-equality")
    ok = r["pass"] and all(c["rank"] == c["kurosh"] for c in r["cases"])
    record(6, "upper-equality", ok, f"{len(r['cases'])} models")
    assert ok


def test_07_lb_cyclic():
    r = run_check("lb-cyclic")
    covered = {(c["gamma"], len(c["inertia_orders"])) for c in r["cases"]}
    need = {("C2", 2), ("C2", 3), ("C4", 2), ("C4", 3), ("C3", 2), ("C9", 2)}
    ok = need <= covered and r["pass"] and all(c["failures"] == 0 for c in r["cases"])
    record(7, "lb-cyclic", ok, f"{len(r['cases'])} inertia lists")
    assert ok


def test_08_kp():
    r = run_check("kp", n=3, perturbations=10 ** 4, seed=0)
    ok = r["pass"] and r["checked"] >= 2 ** 9 + 10 ** 4 and r["planted_violation_detected"]
    record(8, "kp", ok, f"{r['checked']} assignments")
    assert ok


def test_09_lb_cyclic_sharp():
    r = run_check("lb-cyclic-sharp", cap=10 ** 6)
    ok = r["pass"] and {c["n"] for c in r["cases"]} == {2, 3}
    detail = "; ".join(f"n={c['n']}: " + (f"D={c['D']} rank={c['ordinary_rank']}"
                                            if c.get("primes") else "no tuple below cap")
                       for c in r["cases"])
    record(9, "lb-cyclic-sharp", ok, detail)
    assert ok


def test_10_vst():
    r = run_check("vst", pairs=50, seed=0)
    base = {(b["p"], tuple(b["S"])): b["dim"] for b in r["base"]}
    ok = base[(3, ())] == 0 and base[(2, ("inf",))] == 0 and base[(2, ())] == 1
    ok = ok and r["pairs"] == 50 and not r["monotone"] and r["pass"]
    record(10, "vst", ok)
    assert ok


def test_11_ub_cyclic_count():
    r = run_check("ub-cyclic-count")
    groups = {c["gamma"] for c in r["cases"]}
    bad = [(c["gamma"], c["inertia_orders"], c["frattini_dim"], c["expected"])
           for c in r["cases"] if c["frattini_dim"] != c["expected"]]
    ok = groups == {"C2", "C3", "C4", "C9"} and not bad
    record(11, "ub-cyclic-count", ok, f"mismatches (Gamma, orders, got, expected): {bad}"
           if bad else "")
    assert ok


def test_12_example_field():
    r = run_check("example-field")
    ok = r["invariants"] == [3]
    record(12, "example-field", ok)
    assert ok


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                pass
