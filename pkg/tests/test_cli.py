import json
from pathlib import Path

import pytest

from goalpost.cli import main

DATA = Path(__file__).parent / "data"
CLUSTER = str(DATA / "cluster.json")
TWO_GROUPS = str(DATA / "two_groups.json")
INTERFERENCE = str(DATA / "interference.json")
UNIFORM = str(DATA / "uniform01.json")
MIXTURE = str(DATA / "mixture.json")


def run(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_solve_golden(capsys):
    code, out = run(capsys, "solve", "--instance", CLUSTER, "--k", "3")
    assert code == 0
    assert out == (
        '{\n'
        '  "command": "solve",\n'
        '  "k": 3,\n'
        '  "targets": [\n'
        '    "1",\n'
        '    "3/2",\n'
        '    "5/2"\n'
        '  ],\n'
        '  "value": "7/2"\n'
        '}\n'
    )


def test_solve_zero_budget(capsys):
    code, payload = run_json(capsys, "solve", "--instance", CLUSTER, "--k", "0")
    assert code == 0
    assert payload["targets"] == []
    assert payload["value"] == "0"


def test_output_is_byte_identical_across_runs(capsys):
    _, first = run(capsys, "pareto", "--instance", TWO_GROUPS, "--k", "2")
    _, second = run(capsys, "pareto", "--instance", TWO_GROUPS, "--k", "2")
    assert first == second


def test_maxmin_golden(capsys):
    code, payload = run_json(capsys, "maxmin", "--instance", TWO_GROUPS, "--k", "1")
    assert code == 0
    assert payload == {
        "command": "maxmin",
        "k": 1,
        "value": "1",
        "welfare": ["2", "1"],
        "targets": ["2"],
    }


def test_solve_lb_feasible_and_infeasible(capsys, tmp_path):
    instance = tmp_path / "lb.json"
    instance.write_text(json.dumps({
        "agents": [
            {"position": 0, "capacity": 1, "group": 0},
            {"position": "1/2", "capacity": 2, "group": 0},
        ],
    }))
    code, payload = run_json(
        capsys, "solve-lb", "--instance", str(instance), "--k", "1", "--n-lb", "2"
    )
    assert code == 0
    assert payload["feasible"] is True
    assert payload["value"] == "3/2"
    assert payload["targets"] == ["1"]

    far = tmp_path / "far.json"
    far.write_text(json.dumps({
        "agents": [
            {"position": 0, "capacity": 1, "group": 0},
            {"position": 10, "capacity": 1, "group": 0},
        ],
    }))
    code, payload = run_json(
        capsys, "solve-lb", "--instance", str(far), "--k", "1", "--n-lb", "2"
    )
    assert code == 0
    assert payload == {
        "command": "solve-lb", "k": 1, "n_lb": 2,
        "feasible": False, "targets": None, "value": None,
    }


def test_sweep_json_and_csv(capsys, tmp_path):
    instance = tmp_path / "pair.json"
    instance.write_text(json.dumps({
        "agents": [
            {"position": 0, "capacity": 2, "group": 0},
            {"position": 1, "capacity": 2, "group": 0},
        ],
        "capacity_model": "common",
    }))
    code, payload = run_json(capsys, "sweep", "--instance", str(instance), "--k", "2")
    assert code == 0
    assert [e["value"] for e in payload["curve"]] == ["0", "3", "3"]
    assert payload["min_k_for_max"] == 1

    code, out = run(
        capsys, "sweep", "--instance", str(instance), "--k", "2", "--format", "csv"
    )
    assert code == 0
    assert out.splitlines()[0] == "k,value,targets"
    assert out.splitlines()[1] == "0,0,"


def test_pareto_csv(capsys):
    code, out = run(
        capsys, "pareto", "--instance", TWO_GROUPS, "--k", "1", "--format", "csv"
    )
    assert code == 0
    assert out == "group_0,group_1,targets\n0,2,3\n2,1,2\n"


def test_fptas_command(capsys):
    code, payload = run_json(
        capsys, "fptas", "--instance", TWO_GROUPS, "--k", "2",
        "--epsilon", "1/100",
    )
    assert code == 0
    assert payload["value"] == "1"


def test_fair_approx_with_trace(capsys):
    code, payload = run_json(
        capsys, "fair-approx", "--instance", INTERFERENCE, "--k", "2"
    )
    assert code == 0
    assert payload["targets"] == ["7", "11"]
    assert payload["report"]["group_totals"] == ["3", "4"]
    assert payload["alpha_k"] == "3/8"
    assert payload["trace"]["step1_isolated"] == [["8"], ["11"]]
    assert payload["trace"]["step4_parts"] == [
        {"window_starts": ["4"], "target": "7"},
        {"window_starts": ["7"], "target": "11"},
    ]


def test_factor_command(capsys):
    code, payload = run_json(
        capsys, "factor", "--instance", INTERFERENCE, "--k", "2"
    )
    assert code == 0
    assert payload["alpha"] == "1/2"


def test_oracle_objectives(capsys):
    code, payload = run_json(
        capsys, "oracle", "--instance", CLUSTER, "--k", "3",
    )
    assert code == 0
    assert payload["value"] == "7/2"
    code, payload = run_json(
        capsys, "oracle", "--instance", TWO_GROUPS, "--k", "1",
        "--objective", "maxmin",
    )
    assert payload["value"] == "1"
    code, payload = run_json(
        capsys, "oracle", "--instance", TWO_GROUPS, "--k", "1",
        "--objective", "pareto",
    )
    assert {tuple(p["welfare"]) for p in payload["frontier"]} == {
        ("0", "2"), ("2", "1"),
    }


def test_learn_bound_single_and_mixture(capsys):
    code, payload = run_json(
        capsys, "learn-bound", "--instance", UNIFORM, "--k", "1",
        "--epsilon", "1/2", "--delta", "1/2",
    )
    assert code == 0
    assert payload["n"] == 3
    code, payload = run_json(
        capsys, "learn-bound", "--instance", MIXTURE, "--k", "1",
        "--epsilon", "1/2", "--delta", "1/2",
    )
    assert payload["n"] == 67


def test_learn_experiment(capsys):
    code, payload = run_json(
        capsys, "learn-experiment", "--instance", UNIFORM, "--k", "1",
        "--epsilon", "1/2", "--delta", "1/2", "--trials", "25", "--seed", "11",
    )
    assert code == 0
    assert payload["n"] == 3
    assert payload["seed"] == 11
    assert payload["trials"] == 25


def test_out_flag_writes_file(capsys, tmp_path):
    out_path = tmp_path / "result.json"
    code, out = run(
        capsys, "solve", "--instance", CLUSTER, "--k", "3",
        "--out", str(out_path),
    )
    assert code == 0
    assert out == ""
    assert json.loads(out_path.read_text())["value"] == "7/2"


def test_round_trip_reevaluation(capsys, tmp_path):
    # emitted targets, parsed back in, reproduce the emitted value exactly
    from goalpost import TargetSet, improvement_report, rational
    from goalpost.io import load_instance

    code, payload = run_json(capsys, "solve", "--instance", CLUSTER, "--k", "3")
    targets = TargetSet(tuple(rational(t) for t in payload["targets"]))
    instance = load_instance(CLUSTER)
    assert improvement_report(instance, targets).total == rational(payload["value"])


# -- error envelopes ----------------------------------------------------------


def error_case(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_domain_errors_exit_one(capsys, tmp_path):
    cases = [
        (
            ["solve", "--k", "1", "--instance", error_case(
                tmp_path, "neg.json",
                {"agents": [{"position": -1, "capacity": 1, "group": 0}]},
            )],
            "NegativePosition",
        ),
        (
            ["solve", "--k", "1", "--instance", error_case(
                tmp_path, "negcap.json",
                {"agents": [{"position": 1, "capacity": -1, "group": 0}]},
            )],
            "NegativeCapacity",
        ),
        (
            ["solve", "--k", "1", "--instance", error_case(
                tmp_path, "grp.json",
                {"agents": [{"position": 0, "capacity": 1, "group": 2}],
                 "num_groups": 2},
            )],
            "GroupIndexOutOfRange",
        ),
        (
            ["solve", "--k", "1", "--instance", error_case(
                tmp_path, "common.json",
                {"agents": [{"position": 0, "capacity": 1, "group": 0},
                            {"position": 0, "capacity": 2, "group": 0}],
                 "capacity_model": "common"},
            )],
            "CommonCapacityViolated",
        ),
        (
            ["pareto", "--k", "1", "--instance", error_case(
                tmp_path, "rat.json",
                {"agents": [{"position": "1/2", "capacity": 1, "group": 0}]},
            )],
            "NonIntegralInstance",
        ),
        (
            ["fptas", "--k", "1", "--epsilon", "1/2", "--instance", error_case(
                tmp_path, "mixedcap.json",
                {"agents": [{"position": 0, "capacity": 1, "group": 0},
                            {"position": 1, "capacity": 2, "group": 0}]},
            )],
            "GroupCapacityNonUniform",
        ),
        (
            ["fptas", "--k", "1", "--epsilon", "2", "--instance", TWO_GROUPS],
            "EpsilonOutOfRange",
        ),
        (
            ["fair-approx", "--k", "2", "--instance", error_case(
                tmp_path, "indiv.json",
                {"agents": [{"position": 0, "capacity": 1, "group": 0},
                            {"position": 0, "capacity": 2, "group": 1}],
                 "num_groups": 2},
            )],
            "IndividualizedCapacityUnsupported",
        ),
        (
            ["fair-approx", "--k", "1", "--instance", TWO_GROUPS],
            "BudgetBelowGroupCount",
        ),
        (
            ["fair-approx", "--k", "2", "--instance", error_case(
                tmp_path, "emptygrp.json",
                {"agents": [{"position": 0, "capacity": 1, "group": 0}],
                 "num_groups": 2, "capacity_model": "common"},
            )],
            "EmptyGroup",
        ),
        (
            ["learn-bound", "--k", "1", "--epsilon", "1/2", "--delta", "2",
             "--instance", UNIFORM],
            "ParameterOutOfRange",
        ),
        (
            ["solve", "--k", "1", "--instance", error_case(
                tmp_path, "junk.json",
                {"agents": [{"position": 1.5, "capacity": 1, "group": 0}]},
            )],
            "InstanceParseError",
        ),
        (
            ["solve", "--k", "1", "--instance", str(tmp_path / "missing.json")],
            "InstanceParseError",
        ),
    ]
    for argv, expected_code in cases:
        code, payload = run_json(capsys, *argv)
        assert code == 1, argv
        assert payload["error"] == expected_code, argv
        assert "detail" in payload


def test_search_space_cap_error(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("GOALPOST_MAX_SUBSETS", "2")
    code, payload = run_json(capsys, "oracle", "--instance", CLUSTER, "--k", "2")
    assert code == 1
    assert payload["error"] == "SearchSpaceTooLarge"


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--instance", CLUSTER])  # missing --k
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--instance", CLUSTER, "--k", "1", "--format", "csv"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_field_precise_parse_errors(capsys, tmp_path):
    path = error_case(
        tmp_path, "badfield.json",
        {"agents": [
            {"position": 0, "capacity": 1, "group": 0},
            {"position": 0, "capacity": True, "group": 0},
        ]},
    )
    code, payload = run_json(capsys, "solve", "--instance", path, "--k", "1")
    assert code == 1
    assert "agents[1].capacity" in payload["detail"]
