"""CLI plumbing: argument handling, report shapes, and determinism."""

import json

import pytest

from lucassq.cli import (build_parser, cmd_catalog, cmd_classify,
                         cmd_heights, cmd_search, main)


def test_classify_reports():
    rep = cmd_classify(7, 5, 21)
    assert rep["square"] and rep["root"] == 83
    assert rep["family_witness"]["generator_multiple"] == 4
    rep = cmd_classify(8, 1, -4)
    assert rep["square"] and rep["root"] == 21
    assert rep["descent"] == {"equation": "eq1", "a": 1, "b": 3}
    rep = cmd_classify(8, 4, -17)
    assert rep["descent"] == {"equation": "eq3", "a": 1, "b": 5}


def test_classify_rejects_bad_n():
    with pytest.raises(ValueError):
        cmd_classify(9, 1, 1)
    assert main(["classify", "9", "1", "1"]) == 3


def test_classify_nonsquare():
    rep = cmd_classify(8, 3, 5)
    assert not rep["square"] and "descent" not in rep


def test_search_tiny_box_deterministic():
    one = cmd_search(4, 4, 15, workers=1)
    two = cmd_search(4, 4, 15, workers=2)
    for key in ("indices", "hits_per_n", "n8_pairs"):
        assert one[key] == two[key]
    assert set(one["indices"]) <= set(range(2, 9)) | {12}


def test_search_finds_first_theorem_pair():
    rep = cmd_search(4, 4, 8, workers=1)
    assert rep["n8_pairs"] == [(1, -4)]


def test_search_rejects_bad_bounds():
    with pytest.raises(ValueError):
        cmd_search(0, 5, 5, 1)


def test_heights_report_is_json():
    rep = cmd_heights("E1")
    json.dumps(rep)                # serializable
    assert float(rep["height_diff_bound"]) > 0
    assert main(["heights", "no_such_curve"]) == 3


def test_catalog_shape():
    cat = cmd_catalog()
    ids = {c["id"] for c in cat}
    assert {"E1", "E10", "E12"} <= ids
    json.dumps(cat)


def test_parser_defaults():
    args = build_parser().parse_args(["search"])
    assert args.p_max == 200 and args.q_max == 200 and args.n_max == 50
    args = build_parser().parse_args(["verify-theorem"])
    assert args.precision == 5 and args.out is None
