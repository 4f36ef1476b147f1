import pytest

from codelattice.models import RunManifest, ValidationError, WeightDistribution


def test_weight_distribution_lookup_and_json() -> None:
    wd = WeightDistribution({0: 1, 4: 14, 8: 1, 6: 0})
    assert wd[4] == 14
    assert wd[2] == 0
    assert wd.total == 16
    assert wd.min_nonzero_weight() == 4
    assert wd.nonzero() == {0: 1, 4: 14, 8: 1}
    assert wd.to_json() == {"0": 1, "4": 14, "8": 1}


def test_weight_distribution_of_zero_code_has_no_minimum() -> None:
    assert WeightDistribution({0: 1}).min_nonzero_weight() is None


@pytest.mark.parametrize("counts", [{-1: 1}, {3: -2}])
def test_weight_distribution_rejects_negatives(counts: dict[int, int]) -> None:
    with pytest.raises(ValidationError):
        WeightDistribution(counts)


def test_manifest_dict_is_ordered_and_rounded() -> None:
    manifest = RunManifest(
        command="verify",
        inputs={"b.txt": "22", "a.txt": "11"},
        parameters={"even": True},
        wall_time=1.23456,
    )
    out = manifest.to_dict()
    assert list(out["inputs"]) == ["a.txt", "b.txt"]
    assert out["wall_time"] == 1.235
    assert out["threads"] == 1


@pytest.mark.parametrize(
    "kwargs",
    [{"command": ""}, {"command": "verify", "threads": 0}, {"command": "verify", "wall_time": -1.0}],
)
def test_manifest_validation(kwargs: dict[str, object]) -> None:
    with pytest.raises(ValidationError):
        RunManifest(**kwargs)  # type: ignore[arg-type]
