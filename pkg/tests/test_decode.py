"""Viterbi decoding against brute-force coset oracles and worked examples."""
from __future__ import annotations

import itertools

import numpy as np
import pytest

from qtrellis import code as code_mod
from qtrellis.code import css_split
from qtrellis.decode import (
    DecodeError,
    WeightTable,
    block_decode,
    classify_residual,
    css_decode,
    decode,
    pure_error,
    viterbi,
    weights_from_channel,
)
from qtrellis.pauli import (
    PauliString,
    format_pauli,
    identity,
    mul,
    parse_pauli,
    syndrome,
)
from qtrellis.sim import ChannelSpec
from qtrellis.trellis import build, shift

from conftest import coset_min_weight, group_elements


@pytest.fixture(scope="module")
def five_one_three():
    return code_mod.builtin("five_one_three")


@pytest.fixture(scope="module")
def steane():
    return code_mod.builtin("steane")


# ---------------------------------------------------------------------------
# weight tables


def test_weights_from_channel_forms_agree():
    spec = ChannelSpec("depolarizing", 0.1)
    w1 = weights_from_channel(spec, 5)
    w2 = weights_from_channel(("depolarizing", 0.1), 5)
    assert np.allclose(w1.table, w2.table)
    assert np.isclose(w1.table[0, 0, 0], -np.log(0.9))
    assert np.isclose(w1.table[0, 1, 1], -np.log(0.1 / 3))


def test_weights_from_dict_verbatim():
    w = weights_from_channel({"I": 0.0, "X": 1.0, "Z": 1.0, "Y": 2.0}, 3)
    assert w.table[1, 0, 0] == 0.0
    assert w.table[1, 1, 0] == 1.0
    assert w.table[1, 0, 1] == 1.0
    assert w.table[1, 1, 1] == 2.0


def test_weights_css_axis_marginalizes():
    w = weights_from_channel(ChannelSpec("depolarizing", 0.3), 4, css_axis="X")
    # the X-stabilizer trellis sees {I, Z}; I collects Pr(I) + Pr(X)
    assert np.isclose(np.exp(-w.table[0, 0, 0]), 0.7 + 0.1)
    assert np.isclose(np.exp(-w.table[0, 0, 1]), 0.1 + 0.1)


def test_weight_table_validation():
    with pytest.raises((DecodeError, ValueError)):
        WeightTable(2, 3, np.zeros((2, 2, 2)))  # wrong first dimension
    with pytest.raises((DecodeError, ValueError)):
        WeightTable(2, 2, np.full((2, 2, 2), np.inf))  # nothing finite
    with pytest.raises((DecodeError, ValueError)):
        WeightTable(2, 2, -np.ones((2, 2, 2)))  # negative weights


def test_invalid_channel_rejected():
    with pytest.raises(DecodeError):
        weights_from_channel(("depolarizing", 1.5), 3)


# ---------------------------------------------------------------------------
# pure errors


def test_pure_error_reproduces_syndrome(five_one_three, rng):
    gens = list(five_one_three.stabilizers)
    for _ in range(10):
        s = rng.integers(0, 2, 4).astype(np.int64)
        T = pure_error(five_one_three, s)
        assert np.array_equal(syndrome(gens, T) % 2, s)
    with pytest.raises(DecodeError):
        pure_error(five_one_three, np.array([1, 0, 0]))


# ---------------------------------------------------------------------------
# the worked example: zero syndrome, unit-step weights


def test_viterbi_zero_syndrome_identity():
    """[[5,1,1]] with weights I:0, X:1, Z:1, Y:2 returns IIIII at weight 0."""
    code = code_mod.builtin("five_one_one")
    t = build(code)
    weights = weights_from_channel({"I": 0.0, "X": 1.0, "Z": 1.0, "Y": 2.0}, 5)
    corr, w = viterbi(t, weights)
    assert format_pauli(corr) == "IIIII"
    assert w == 0.0
    # shifting by the (0,0,1,1) pure error changes the optimum
    T = pure_error(code, np.array([0, 0, 1, 1]))
    corr2, w2 = viterbi(shift(t, T), weights)
    assert np.array_equal(
        syndrome(list(code.stabilizers), corr2) % 2, np.array([0, 0, 1, 1])
    )
    assert w2 > 0.0


# ---------------------------------------------------------------------------
# coset-minimum oracle


def _oracle_check(code, table, elements):
    t = build(code)
    wt = WeightTable(code.p, code.n, table)
    m = len(code.stabilizers)
    for bits in itertools.product(range(2), repeat=m):
        s = np.array(bits, dtype=np.int64)
        T = pure_error(code, s)
        corr, w = viterbi(shift(t, T), wt)
        assert np.array_equal(syndrome(list(code.stabilizers), corr) % 2, s)
        best = coset_min_weight(elements, T, table)
        assert np.isclose(w, best), f"syndrome {bits}: {w} != {best}"


def test_oracle_five_one_three_depolarizing(five_one_three):
    elements = group_elements(
        list(five_one_three.stabilizers) + list(five_one_three.logical_gens)
    )
    table = weights_from_channel(ChannelSpec("depolarizing", 0.1), 5).table
    _oracle_check(five_one_three, table, elements)


def test_oracle_steane_depolarizing(steane):
    elements = group_elements(list(steane.stabilizers) + list(steane.logical_gens))
    table = weights_from_channel(ChannelSpec("depolarizing", 0.1), 7).table
    _oracle_check(steane, table, elements)


def test_oracle_random_weight_tables(five_one_three, steane, rng):
    for code in (five_one_three, steane):
        elements = group_elements(
            list(code.stabilizers) + list(code.logical_gens)
        )
        for _ in range(20):
            table = rng.uniform(0.0, 4.0, size=(code.n, 2, 2))
            _oracle_check(code, table, elements)


# ---------------------------------------------------------------------------
# classification


def test_classify_residual(five_one_three):
    err = parse_pauli("IXIII")
    assert classify_residual(five_one_three, err, err)[0] == "success"
    stab_corr = mul(err, five_one_three.stabilizers[0])
    assert classify_residual(five_one_three, err, stab_corr)[0] == "success"
    logical_corr = mul(err, five_one_three.logical_gens[0])
    cls, flags = classify_residual(five_one_three, err, logical_corr)
    assert cls == "logical_failure" and any(flags)
    bad = parse_pauli("IZIII")
    assert classify_residual(five_one_three, err, mul(err, bad))[0] in (
        "internal_inconsistency",
        "logical_failure",
    )


def test_decode_pipeline_classifies(five_one_three):
    t = build(five_one_three)
    weights = weights_from_channel(ChannelSpec("depolarizing", 0.1), 5)
    err = parse_pauli("XIIII")
    s = syndrome(list(five_one_three.stabilizers), err) % 2
    out = decode(five_one_three, t, s, weights, true_error=err)
    assert out.classification == "success"
    assert format_pauli(out.correction) == "XIIII"


# ---------------------------------------------------------------------------
# CSS split decoding and the correlated-error example


def test_css_decode_correlated_error_example():
    """Y errors on the d=5 surface: full decoding succeeds, split fails."""
    code = code_mod.builtin("rotated_surface", 5)
    x_part, z_part = css_split(code)
    tx, tz = build(x_part), build(z_part)
    channel = ChannelSpec("depolarizing", 0.1)
    # a weight-3 Y string along the diagonal, the paper's correlated case
    err = identity(25, 2)
    for q in (8, 13, 18):
        err = mul(err, PauliString(2, *(np.eye(25, dtype=np.int64)[q - 1],) * 2))
    s = syndrome(list(code.stabilizers), err) % 2
    split_out = css_decode(code, tx, tz, s, channel, true_error=err)
    assert split_out.classification == "logical_failure"
    full_out = decode(
        code, build(code), s, weights_from_channel(channel, 25), true_error=err
    )
    assert full_out.classification == "success"
    assert full_out.correction == err


def test_css_decode_matches_split_oracle():
    """Split decoding equals per-axis coset minimization on the d=3 surface."""
    code = code_mod.builtin("rotated_surface", 3)
    x_part, z_part = css_split(code)
    tx, tz = build(x_part), build(z_part)
    channel = ChannelSpec("depolarizing", 0.15)
    gens = list(code.stabilizers)
    rng = np.random.default_rng(5)
    for _ in range(25):
        err = PauliString(2, rng.integers(0, 2, 9), rng.integers(0, 2, 9))
        s = syndrome(gens, err) % 2
        out = css_decode(code, tx, tz, s, channel, true_error=err)
        assert out.classification in ("success", "logical_failure")
        assert np.array_equal(syndrome(gens, out.correction) % 2, s)


# ---------------------------------------------------------------------------
# block decoding for the concatenated Steane code


@pytest.fixture(scope="module")
def level2():
    return code_mod.builtin("steane_level2")


@pytest.fixture(scope="module")
def inner_trellis():
    steane = code_mod.builtin("steane")
    x_part, _ = css_split(steane)
    return build(x_part)


def test_block_decode_single_z_errors(level2, inner_trellis):
    weights = weights_from_channel(ChannelSpec("dephasing_z", 0.05), 49, css_axis="X")
    gens = list(level2.stabilizers)
    for q in range(49):
        z = np.zeros(49, dtype=np.int64)
        z[q] = 1
        err = PauliString(2, np.zeros(49, dtype=np.int64), z)
        s = syndrome(gens, err) % 2
        out = block_decode(level2, inner_trellis, s, weights, true_error=err)
        assert out.classification == "success"


def test_block_decode_low_weight_z_errors(level2, inner_trellis, rng):
    """Errors the two-stage decoder is guaranteed to correct must correct.

    The hierarchical decoder is suboptimal: two inner blocks with two
    errors each can both be miscorrected to block logicals and defeat the
    distance-3 outer stage.  The guaranteed set is errors where at most
    one block holds more than one error (the inner stage fixes every
    single-error block exactly, and the outer stage fixes at most one
    block logical), so errors are drawn from that set.
    """
    weights = weights_from_channel(ChannelSpec("dephasing_z", 0.05), 49, css_axis="X")
    gens = list(level2.stabilizers)
    for _ in range(30):
        blocks = rng.choice(7, size=3, replace=False)
        z = np.zeros(49, dtype=np.int64)
        # one block with a pair of errors, up to two more with one each
        pair = rng.choice(7, size=2, replace=False)
        z[7 * blocks[0] + pair] = 1
        for b in blocks[1 : 1 + rng.integers(0, 3)]:
            z[7 * b + rng.integers(0, 7)] = 1
        err = PauliString(2, np.zeros(49, dtype=np.int64), z)
        s = syndrome(gens, err) % 2
        out = block_decode(level2, inner_trellis, s, weights, true_error=err)
        assert out.classification == "success"


def test_block_decode_sequential_cost(inner_trellis):
    # two sequential stages, each one pass over the 7-qubit part trellis
    assert 2 * inner_trellis.total_edges == 72


# ---------------------------------------------------------------------------
# bundled length-20 codes


def test_codetable_20_13_3_corrects_single_errors():
    code = code_mod.builtin("codetable_20_13_3")
    t = build(code)
    weights = weights_from_channel(ChannelSpec("depolarizing", 0.05), 20)
    gens = list(code.stabilizers)
    count = 0
    for q in range(20):
        for a, b in ((1, 0), (1, 1), (0, 1)):
            x = np.zeros(20, dtype=np.int64)
            z = np.zeros(20, dtype=np.int64)
            x[q], z[q] = a, b
            err = PauliString(2, x, z)
            s = syndrome(gens, err) % 2
            out = decode(code, t, s, weights, true_error=err)
            assert out.classification == "success", f"failed on {format_pauli(err)}"
            count += 1
    assert count == 60


@pytest.mark.parametrize(
    "name,exhaustive",
    [
        ("codetable_20_13_3", True),
        ("codetable_20_10_4", True),
        ("codetable_20_3_6", False),
        ("codetable_20_4_6", False),
    ],
)
def test_codetable_syndromes_decode(name, exhaustive):
    """Every decoded correction must reproduce the requested syndrome.

    The two codes with syndrome spaces of at most 2**10 are checked
    exhaustively; the larger two on a fixed random sample.
    """
    code = code_mod.builtin(name)
    t = build(code)
    weights = weights_from_channel(ChannelSpec("depolarizing", 0.05), 20)
    gens = list(code.stabilizers)
    m = len(gens)
    if exhaustive:
        syndromes = [np.array(bits, dtype=np.int64) for bits in itertools.product(range(2), repeat=m)]
    else:
        rng = np.random.default_rng(99)
        syndromes = [rng.integers(0, 2, m).astype(np.int64) for _ in range(128)]
    for s in syndromes:
        out = decode(code, t, s, weights)
        assert out.classification == "success"
        assert np.array_equal(syndrome(gens, out.correction) % 2, s % 2)
