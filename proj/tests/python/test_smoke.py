import pytest

import unitclust


def test_opt_count_examples():
    assert unitclust.opt_count(["3", "4"]) == 1
    assert unitclust.opt_count([]) == 0
    assert unitclust.opt_count(["3", "4", "5", "6", "2.5", "4.5", "6.5"]) == 3
    assert unitclust.opt_count(["3", "4"], method="bruteforce") == 1


def test_off_grid_coordinates_are_rejected():
    with pytest.raises(ValueError):
        unitclust.opt_count(["3.14"])


def test_ratio_round_trip():
    r = unitclust.parse_ratio("13/8")
    assert (r.num, r.den) == (13, 8)
    assert str(r) == "13/8"
    assert float(r) == pytest.approx(1.625)
    assert unitclust.parse_ratio("26/16") == r
    assert r < unitclust.parse_ratio("5/3")


def test_run_greedy_baseline():
    result = unitclust.run("greedy", ["3", "4", "5", "6", "2.5", "4.5", "6.5"])
    assert result["on_cost"] == 5
    assert result["opt_cost"] == 3
    assert result["ratio"] == "5/3"


def test_play_baselines():
    greedy = unitclust.play("greedy")
    assert greedy["leaf"] == "L2"
    assert greedy["ratio"] == "5/3"
    grid = unitclust.play("grid")
    assert unitclust.parse_ratio(grid["ratio"]) >= unitclust.parse_ratio("13/8")


def test_verify_builtin():
    result = unitclust.verify(target="13/8")
    assert result["verdict"] == "VERIFIED"
    assert result["min_ratio"] == "13/8"
    assert result["annotations_ok"] is True
    assert len(result["leaves"]) == 10
    failed = unitclust.verify(target="5/3")
    assert failed["verdict"] == "FAILED"


def test_search_single_point():
    result = unitclust.search(max_points=1)
    assert result["value"] == "1/1"
    assert result["exhausted"] is True


def test_unknown_algorithm_raises():
    with pytest.raises(ValueError):
        unitclust.run("quantum", ["1"])
