"""Acceptance criteria, one test each.

All comparisons are exact (integer counts, label sets, booleans): the pinned
tolerance is zero.  A PASS/FAIL line per criterion is printed in the terminal
summary.
"""

import os
import subprocess
import sys
from pathlib import Path

import acceptance_reports as R

TOLERANCE = 0  # exact equality everywhere
MAX_SWEEP_STATES = 10**5


def test_criterion_01_reference_value_regression():
    r = R.c01_reference_values()
    assert {k: r["C(4,3,3,3)"][k] for k in ("A", "p", "n")} == {"A": 21, "p": 7, "n": 7}
    assert {k: r["C(3,2,1,4)"][k] for k in ("A", "p", "n")} == {"A": 14, "p": 7, "n": 5}
    assert r["C(4,3,3,6)"]["p"] == 11
    assert (r["C(4,3,3,6)"]["cyc"], r["C(4,3,3,6)"]["cyc_source"]) == (9, "search")
    assert r["C(4,3,3,6)"]["cyc_bruteforce"] == 9
    assert r["normalize(-2,-2)"] == [1, 1]


def test_criterion_02_regular_marking_4333():
    r = R.c02_regular_marking()
    expected = ["[s_6,a_0]", "[s_0,a_1]", "[s_1,a_2]", "[s'_3,a_0]", "[s'_4,a_0]", "[s'_5,a_0]", "[s'_6,a_0]"]
    assert r["labels"] == sorted(expected)
    assert r["counts"] == [1]


def test_criterion_03_fold_classes():
    r = R.c03_fold_classes()
    assert r["C(3,2,1,4) S0"] == sorted(["[s'_0,a_0]", "[s'_5,a_1]"])
    assert r["C(3,2,1,4) S6"] == sorted(["[s'_6,a_0]", "[s'_4,a_1]"])
    assert r["C(4,3,3,3)"] == [[f"[s'_{i},a_{j}]" for j in range(3)] for i in range(7)]
    assert r["C(2,3,4,6) D={0,2} S5"] == sorted(["[s'_5,a_0]", "[s'_2,a_2]"])


def test_criterion_04_bf_path_3214():
    r = R.c04_bf_path()
    assert r["nodes"][0] == "[s'_6,a_0]"
    assert r["nodes"][-1] == "[t_3,a_0]"
    assert r["shared"] == {"1": "[s_3,a_1]"}
    assert r["arcs_present"]


def test_criterion_05_safety_sweep():
    r = R.c05_safety_sweep()
    rows = r["sweep"]
    assert len(rows) == 95
    bad = {k: v for k, v in rows.items() if not (v["complete"] and v["safe"] and v["live"])}
    assert bad == {}
    assert max(v["states"] for v in rows.values()) < MAX_SWEEP_STATES
    c = r["counterexample"]
    assert c["safe"] is False
    assert c["first_witness"]["tokens"] >= 2
    assert c["class_1_tokens"] == 2 and c["replay_matches"]


def test_criterion_06_bisimulation_sweep():
    rows = R.c06_bisimulation_sweep()
    failing = sorted(k for k, v in rows.items() if not v["holds"])
    boundary = all(rows[k]["n_minus_1_eq_p"] for k in failing)
    assert failing == [], (
        f"{len(failing)} of {len(rows)} folds diverge (all with n-1 == p: {boundary}), "
        f"e.g. {failing[0]} after {rows[failing[0]]['sequence']}"
    )


def test_criterion_07_isomorphism_invariance():
    r = R.c07_isomorphism_invariance()
    assert r["checked"] == 544
    assert r["failures"] == []


def test_criterion_08_process_elimination():
    r = R.c08_process_elimination()
    assert r["sequence"] == ["tstop[2]", "[t_1,a_1]", "[t_0,a_0]"]
    assert r["isomorphic"] and r["problems"] == []


def test_criterion_09_stop_scenario_231():
    r = R.c09_stop_scenario()
    assert r["holds"] and not r["inconclusive"]
    (rnd,) = r["stats"]["rounds"]
    assert rnd["target"] == "C_bf(3,2,2,2)"
    assert rnd["isomorphic"] and rnd["live"] and rnd["safe"]


def test_criterion_10_negative_control_3244():
    r = R.c10_negative_control()
    assert r["sequence"] == ["tstop[0]", "[t_1,a_1]", "[t_2,a_1]", "[t_3,a_1]", "[t_4,a_1]"]
    assert r["t5a1_enabled_forced"] is False
    assert r["t0a1_enabled_stop_resilient"] is True


def test_criterion_11_cycle_structure():
    r = R.c11_cycle_structure()
    assert r["checked"] == 6**4
    assert r["failures"] == []


def test_criterion_12_determinism():
    here = Path(__file__).parent
    first = R.dump_all()
    assert R.dump_all() == first
    outputs = []
    for seed in ("0", "4242"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run(
            [sys.executable, str(here / "acceptance_reports.py")], cwd=here, env=env, capture_output=True, check=True
        )
        outputs.append(proc.stdout)
    assert outputs[0] == outputs[1] == first
