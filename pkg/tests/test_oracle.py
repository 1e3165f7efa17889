from __future__ import annotations

import pytest

from msic.codec import verify_code
from msic.instance import Instance
from msic.oracle import optimal_linear_code_bruteforce


def test_corpus_optima(ex1, ex2, ex3):
    assert optimal_linear_code_bruteforce(ex1).optimal_length == 2
    assert optimal_linear_code_bruteforce(ex2).optimal_length == 3
    assert optimal_linear_code_bruteforce(ex3).optimal_length == 2


def test_trivial_single_message():
    inst = Instance(
        K=1, N=1, sender_stores=(frozenset({1}),), side_info=(frozenset(),)
    )
    report = optimal_linear_code_bruteforce(inst)
    assert report.optimal_length == 1
    assert report.found


def test_witness_always_verifies(ex1, ex2, ex3):
    for inst in (ex1, ex2, ex3):
        report = optimal_linear_code_bruteforce(inst)
        assert verify_code(report.witness_code, inst, mode="algebraic")
        assert verify_code(report.witness_code, inst, mode="simulate")


def test_not_found_below_optimum(ex1):
    report = optimal_linear_code_bruteforce(ex1, max_length=1)
    assert not report.found
    assert report.optimal_length is None
    assert report.witness_code is None
    assert report.configurations_checked > 0


def test_max_length_bounds_checked(ex1):
    with pytest.raises(ValueError):
        optimal_linear_code_bruteforce(ex1, max_length=4)
    with pytest.raises(ValueError):
        optimal_linear_code_bruteforce(ex1, max_length=-1)


def test_monotone_in_side_information(ex3):
    base = optimal_linear_code_bruteforce(ex3).optimal_length
    richer = Instance(
        K=3,
        N=2,
        sender_stores=ex3.sender_stores,
        side_info=(frozenset({2, 3}), frozenset({1}), frozenset({2})),
    )
    assert optimal_linear_code_bruteforce(richer).optimal_length <= base


def test_disjoint_senders_cannot_share_a_transmission():
    inst = Instance(
        K=2,
        N=2,
        sender_stores=(frozenset({1}), frozenset({2})),
        side_info=(frozenset({2}), frozenset({1})),
    )
    report = optimal_linear_code_bruteforce(inst)
    assert report.optimal_length == 2  # separate senders cannot mix x1 and x2
