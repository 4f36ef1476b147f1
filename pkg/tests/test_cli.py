import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest

from codelattice.cli import EXIT_FAILED, EXIT_OK, EXIT_PARSE_ERROR, CodeLatticeCLI, CommandResult
from codelattice.config import AppConfig, LimitsConfig, RuntimeConfig


Document = dict[str, Any]
Runner = Callable[..., tuple[int, Document]]


@pytest.fixture
def cli() -> CodeLatticeCLI:
    return CodeLatticeCLI(AppConfig())


@pytest.fixture
def run(cli: CodeLatticeCLI, capsys: pytest.CaptureFixture[str]) -> Runner:
    def invoke(*argv: str) -> tuple[int, Document]:
        status = cli.run(list(argv))
        return status, json.loads(capsys.readouterr().out)

    return invoke


@pytest.fixture
def e8_file(tmp_path: Path) -> str:
    path = tmp_path / "e8.txt"
    path.write_text("binary 8 4\n11110000\n00111100\n00001111\n10101010\n", encoding="utf-8")
    return str(path)


@pytest.fixture
def i2_file(tmp_path: Path) -> str:
    path = tmp_path / "i2.txt"
    path.write_text("binary 8 4\n11000000\n00110000\n00001100\n00000011\n", encoding="utf-8")
    return str(path)


def test_command_result_messages() -> None:
    result = CommandResult(success=True)
    result.check("a", True)
    assert result.get_user_message() == "All checks passed."
    result.check("b", False)
    assert not result.success
    assert result.get_user_message() == "Failed checks: b"
    assert result.to_json()["checks"] == {"a": True, "b": False}


def test_verify_c10(run: Runner) -> None:
    status, doc = run("verify", "bundled:c10.f4", "--even", "--self-dual", "--min-weight", "4")
    assert status == EXIT_OK
    assert doc["result"]["checks"] == {"even": True, "min_weight": True, "self_dual": True}
    assert len(doc["manifest"]["inputs"]["bundled:c10.f4"]) == 64


def test_verify_d1(run: Runner) -> None:
    status, doc = run("verify", "bundled:d1.z4", "--self-dual", "--type", "I")
    assert status == EXIT_OK
    assert doc["result"]["type"] == "I"
    assert (doc["result"]["k1"], doc["result"]["k2"]) == (10, 20)


def test_verify_binary(run: Runner, e8_file: str) -> None:
    status, doc = run("verify", e8_file, "--doubly-even", "--extremal", "--min-weight", "4")
    assert status == EXIT_OK
    assert doc["result"]["kind"] == "doubly-even"
    status, doc = run("verify", e8_file, "--singly-even")
    assert status == EXIT_FAILED
    assert doc["result"]["checks"] == {"singly_even": False}


def test_inapplicable_flag_fails(run: Runner, e8_file: str) -> None:
    status, doc = run("verify", e8_file, "--type", "II")
    assert status == EXIT_FAILED
    assert doc["result"]["checks"]["type"] is False


def test_parse_errors(run: Runner, tmp_path: Path) -> None:
    junk = tmp_path / "junk.txt"
    junk.write_text("binary 8 1\n0101\n", encoding="utf-8")
    status, doc = run("verify", str(junk), "--self-dual")
    assert status == EXIT_PARSE_ERROR
    assert doc["result"]["error"]["type"] == "FormatError"
    status, _ = run("verify", "bundled:nothing.f4")
    assert status == EXIT_PARSE_ERROR


def test_classify_16(run: Runner, tmp_path: Path) -> None:
    out = tmp_path / "classes"
    status, doc = run(
        "classify", "16", "--min-weight", "4", "--expect-doubly", "2", "--expect-singly", "1", "--out", str(out)
    )
    assert status == EXIT_OK
    assert doc["result"]["counts"] == {"doubly": 2, "singly": 1}
    assert len(doc["manifest"]["outputs"]) == 3
    assert all(Path(p).exists() for p in doc["manifest"]["outputs"])
    assert json.loads((out / "manifest.json").read_text(encoding="utf-8")) == doc


def test_long_classification_is_refused(run: Runner) -> None:
    status, doc = run("classify", "32", "--min-weight", "8")
    assert status == EXIT_FAILED
    assert doc["result"]["error"]["type"] == "BudgetRefusedError"


def test_manifest_does_not_depend_on_threads(run: Runner, e8_file: str) -> None:
    _, one = run("covering-radius", e8_file, "--threads", "1")
    _, four = run("covering-radius", e8_file, "--threads", "4")
    assert one["result"] == four["result"]
    assert one["manifest"]["parameters"] == four["manifest"]["parameters"]
    assert one["manifest"]["inputs"] == four["manifest"]["inputs"]


def test_shadow_and_neighbors(run: Runner, i2_file: str) -> None:
    status, doc = run("shadow", i2_file)
    assert status == EXIT_OK
    assert doc["result"]["shadow_distribution"] == {"4": 16}
    assert doc["result"]["shadow_weight4_cosets"] == [8, 8]
    status, doc = run("neighbors", i2_file)
    assert status == EXIT_OK
    assert [n["kind"] for n in doc["result"]["neighbors"]] == ["doubly-even", "doubly-even"]


def test_doubly_even_neighbors_need_beta(run: Runner, e8_file: str) -> None:
    status, doc = run("neighbors", e8_file)
    assert status == EXIT_FAILED
    assert doc["result"]["error"]["type"] == "ValidationError"


def test_bmap_then_tdec(run: Runner, tmp_path: Path) -> None:
    status, doc = run("bmap", "bundled:hexacode.f4", "--min-weight", "4", "--out", str(tmp_path))
    assert status == EXIT_OK
    assert doc["result"]["code"]["n"] == 24
    status, doc = run("tdec", str(tmp_path / "bmap.txt"), "--beta", "6")
    assert status == EXIT_OK
    assert doc["result"]["partition"] is True


def test_theta_of_code_lattices(run: Runner, e8_file: str) -> None:
    status, doc = run("theta", e8_file, "--la", "--max-norm", "4", "--expect", "2=240", "--expect", "4=2160")
    assert status == EXIT_OK
    assert doc["result"]["theta"] == {"0": 1, "2": 240, "4": 2160}
    status, doc = run("theta", e8_file, "--lodd", "--max-norm", "2", "--fit", "--shadow", "--long")
    assert status == EXIT_OK
    assert doc["result"]["a"] == [1, 0]
    assert doc["result"]["checks"] == {"enumeration_matches": True, "shadow_matches": True}


def test_theta_needs_a_construction(run: Runner, e8_file: str) -> None:
    status, doc = run("theta", e8_file)
    assert status == EXIT_FAILED
    assert doc["result"]["error"]["type"] == "ValidationError"


def test_theta_of_a_lattice_file(run: Runner, tmp_path: Path) -> None:
    path = tmp_path / "z2.txt"
    path.write_text("lattice 2 1\n1 0\n0 1\n", encoding="utf-8")
    status, doc = run("theta", str(path), "--max-norm", "2")
    assert status == EXIT_OK
    assert doc["result"]["theta"] == {"0": 1, "1": 4, "2": 4}
    assert doc["result"]["odd"] is True


def test_coset_tables(run: Runner, e8_file: str) -> None:
    status, doc = run("covering-radius", e8_file, "--expect", "2")
    assert status == EXIT_OK
    status, doc = run("coset-dist", e8_file, "--min-weight", "2")
    assert status == EXIT_OK
    assert doc["result"]["distribution"] == [{"enumerator": {"2": 4, "4": 8, "6": 4}, "cosets": 7}]


def test_aut_order(run: Runner, e8_file: str) -> None:
    status, doc = run("aut-order", e8_file, "--expect", "1344")
    assert status == EXIT_OK
    assert doc["result"]["aut_order"] == 1344


def run_with(config: AppConfig, capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, Document]:
    status = CodeLatticeCLI(config).run(list(argv))
    return status, json.loads(capsys.readouterr().out)


def test_aut_order_of_additive_code(run: Runner) -> None:
    status, doc = run("aut-order", "bundled:c10.f4", "--expect", "16")
    assert status == EXIT_OK
    assert doc["result"]["aut_order"] == 16


def test_codeword_limit_from_config(capsys: pytest.CaptureFixture[str], e8_file: str) -> None:
    config = AppConfig(limits=LimitsConfig(max_codewords=8))
    status, doc = run_with(config, capsys, "verify", e8_file, "--min-weight", "4")
    assert status == EXIT_FAILED
    assert doc["result"]["error"]["type"] == "DimensionTooLargeError"


def test_canonical_length_from_config(capsys: pytest.CaptureFixture[str], e8_file: str) -> None:
    config = AppConfig(limits=LimitsConfig(max_canonical_length=6))
    status, doc = run_with(config, capsys, "aut-order", e8_file)
    assert status == EXIT_FAILED
    assert doc["result"]["error"]["type"] == "LengthCapError"


def test_bare_out_uses_configured_directory(
    capsys: pytest.CaptureFixture[str], tmp_path: Path, i2_file: str
) -> None:
    config = AppConfig(runtime=RuntimeConfig(output_dir=str(tmp_path / "results")))
    status, doc = run_with(config, capsys, "neighbors", i2_file, "--out")
    assert status == EXIT_OK
    assert (tmp_path / "results" / "manifest.json").exists()
    assert all(output.startswith(str(tmp_path / "results")) for output in doc["manifest"]["outputs"])


def test_pipeline(run: Runner, tmp_path: Path) -> None:
    status, doc = run("pipeline-beta10", "--design-check", "--out", str(tmp_path))
    assert status == EXIT_OK
    result = doc["result"]
    assert result["code"]["beta"] == 10
    assert result["design"] == [40, 8, 57]
    assert len(result["tetrads"]) == 10
    assert (tmp_path / "extremal40_beta10.txt").exists()


def test_pipeline_covering_radius_needs_long(run: Runner) -> None:
    status, doc = run("pipeline-beta10", "--covering-radius")
    assert status == EXIT_FAILED
    assert doc["result"]["error"]["type"] == "BudgetRefusedError"
    status, doc = run("pipeline-beta10", "--expect-radius", "8")
    assert status == EXIT_FAILED
    assert doc["result"]["error"]["type"] == "BudgetRefusedError"


@pytest.mark.long
def test_pipeline_covering_radius(run: Runner) -> None:
    status, doc = run("pipeline-beta10", "--covering-radius", "--long", "--threads", "4")
    assert status == EXIT_OK
    radius = doc["result"]["covering_radius"]
    assert radius in (7, 8)
    assert doc["result"]["checks"]["covering_radius_in_family"]
    status, doc = run("pipeline-beta10", "--expect-radius", str(radius), "--long", "--threads", "4")
    assert status == EXIT_OK
    assert doc["result"]["checks"]["covering_radius"]


def test_round_trip_of_written_code(tmp_path: Path, run: Runner, i2_file: str) -> None:
    status, doc = run("neighbors", i2_file, "--out", str(tmp_path / "nb"))
    assert status == EXIT_OK
    status, doc = run("verify", doc["manifest"]["outputs"][0], "--doubly-even")
    assert status == EXIT_OK
