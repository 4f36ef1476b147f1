"""Shared fixtures: small codes, the bundled data and the length-40 pipeline codes."""

import pytest

from codelattice.classify import first_extremal_neighbor
from codelattice.code_io import load_bundled
from codelattice.f4additive import AdditiveF4Code, b_map
from codelattice.gf2core import BitMatrix
from codelattice.selfdual import SelfDualCode, doubly_even_neighbors, verify_self_dual
from codelattice.z4codes import Z4Code


HAMMING8_ROWS = ["11110000", "00111100", "00001111", "10101010"]


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption("--long", action="store_true", default=False, help="run long computations")


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:
    if config.getoption("--long"):
        return
    skip_long = pytest.mark.skip(reason="needs --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip_long)


@pytest.fixture
def hamming8() -> BitMatrix:
    return BitMatrix.from_strings(HAMMING8_ROWS)


@pytest.fixture
def e8_code(hamming8: BitMatrix) -> SelfDualCode:
    return verify_self_dual(hamming8)


@pytest.fixture
def i2_power4() -> SelfDualCode:
    """i_2 + i_2 + i_2 + i_2, the singly even code of length 8 with d = 2."""
    return verify_self_dual(BitMatrix.from_strings(["11000000", "00110000", "00001100", "00000011"]))


@pytest.fixture(scope="session")
def c10() -> AdditiveF4Code:
    value = load_bundled("c10.f4").value
    assert isinstance(value, AdditiveF4Code)
    return value


@pytest.fixture(scope="session")
def hexacode() -> AdditiveF4Code:
    value = load_bundled("hexacode.f4").value
    assert isinstance(value, AdditiveF4Code)
    return value


@pytest.fixture(scope="session")
def octacode() -> Z4Code:
    value = load_bundled("octacode.z4").value
    assert isinstance(value, Z4Code)
    return value


@pytest.fixture(scope="session")
def d1() -> Z4Code:
    value = load_bundled("d1.z4").value
    assert isinstance(value, Z4Code)
    return value


@pytest.fixture(scope="session")
def bmap_c10(c10: AdditiveF4Code) -> SelfDualCode:
    """Doubly even [40, 20, 4] code whose ten weight-4 words are tetrads."""
    return b_map(c10)


@pytest.fixture(scope="session")
def extremal_c40(bmap_c10: SelfDualCode) -> SelfDualCode:
    """An extremal singly even [40, 20, 8] code with beta = 10."""
    code = first_extremal_neighbor(bmap_c10, 10)
    assert code is not None
    return code


@pytest.fixture(scope="session")
def extremal_d40(extremal_c40: SelfDualCode) -> SelfDualCode:
    """The doubly even neighbour of extremal_c40 without weight-4 words."""
    first, second = doubly_even_neighbors(extremal_c40)
    return first if first.distribution[4] == 0 else second
