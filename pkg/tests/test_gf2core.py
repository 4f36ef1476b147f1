import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codelattice.gf2core import (
    BitMatrix,
    BitVector,
    DimensionTooLargeError,
    dual_code,
    enumerate_codewords,
    krawtchouk,
    macwilliams_transform,
    minimum_weight,
    rref,
    string_to_vector,
    support,
    vector_to_string,
    weight_distribution,
    words_of_weight,
)
from codelattice.models import ValidationError, WeightDistribution


def test_coordinate_i_is_bit_i() -> None:
    assert string_to_vector("1000") == 0b0001
    assert vector_to_string(0b0110, 4) == "0110"
    assert support(0b1010) == (1, 3)


def test_bit_vector_arithmetic() -> None:
    a = BitVector.from_string("1100")
    b = BitVector.from_string("0110")
    assert a.weight == 2
    assert a.dot(b) == 1
    assert str(a ^ b) == "1010"
    with pytest.raises(ValidationError):
        BitVector(3, 0b1000)


def test_rref_rank_and_pivots(hamming8: BitMatrix) -> None:
    reduced, k, pivots = rref(hamming8.with_rows([hamming8.rows[0] ^ hamming8.rows[1]]))
    assert k == 4
    assert len(pivots) == 4
    assert reduced.same_space(hamming8)


def test_hamming8_weight_distribution(hamming8: BitMatrix) -> None:
    assert weight_distribution(hamming8).nonzero() == {0: 1, 4: 14, 8: 1}
    assert minimum_weight(hamming8) == 4
    assert len(words_of_weight(hamming8, 4)) == 14


def test_hamming8_is_its_own_dual(hamming8: BitMatrix) -> None:
    assert hamming8.is_self_orthogonal()
    assert dual_code(hamming8).same_space(hamming8)


def test_enumeration_visits_every_codeword_once(hamming8: BitMatrix) -> None:
    words = [v.bits for v in enumerate_codewords(hamming8)]
    assert len(words) == 16
    assert len(set(words)) == 16


def test_enumeration_cap(hamming8: BitMatrix) -> None:
    with pytest.raises(DimensionTooLargeError):
        weight_distribution(hamming8, max_codewords=8)


def test_krawtchouk_small_values() -> None:
    assert krawtchouk(8, 0, 3) == 1
    assert krawtchouk(8, 1, 3) == 2
    assert krawtchouk(4, 2, 2) == -2


def test_macwilliams_of_self_dual_code_is_fixed(hamming8: BitMatrix) -> None:
    wd = weight_distribution(hamming8)
    assert macwilliams_transform(wd, 8).nonzero() == wd.nonzero()


def test_macwilliams_of_repetition_code() -> None:
    wd = WeightDistribution({0: 1, 4: 1})
    assert macwilliams_transform(wd, 4).nonzero() == {0: 1, 2: 6, 4: 1}


@st.composite
def matrices(draw: st.DrawFn) -> BitMatrix:
    n = draw(st.integers(min_value=1, max_value=12))
    rows = draw(st.lists(st.integers(min_value=0, max_value=(1 << n) - 1), max_size=6))
    return BitMatrix(n, tuple(rows))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_dual_dimensions_add_up(m: BitMatrix) -> None:
    k = rref(m)[1]
    h = dual_code(m)
    assert rref(h)[1] == m.n - k
    for row in h.rows:
        assert all((row & g).bit_count() % 2 == 0 for g in m.rows)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_macwilliams_matches_the_dual(m: BitMatrix) -> None:
    wd = weight_distribution(m)
    assert macwilliams_transform(wd, m.n).nonzero() == weight_distribution(dual_code(m)).nonzero()
