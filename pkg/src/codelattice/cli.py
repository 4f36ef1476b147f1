"""Command-line front end.

Every command prints one JSON document {"manifest": ..., "result": ...} to
stdout.  Exit status is 0 when every check of the invocation passed, 1 when a
check failed or a computation was refused, and 2 when an input did not parse.
"""

import argparse
import json
import logging
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from codelattice.canonical import automorphism_order, canonical_form
from codelattice.classify import classify_via_neighbors, first_extremal_neighbor, generate
from codelattice.code_io import FormatError, InputFormat, ParsedInput, load_bundled, read_input, write_object
from codelattice.config import AppConfig
from codelattice.f4additive import (
    AdditiveF4Code,
    b_map,
    f4_automorphism_order,
    f4_extremal_bound,
    is_even,
    trace_dual_check,
    weight_distribution as f4_weight_distribution,
)
from codelattice.gf2core import BitMatrix, minimum_weight, weight_distribution
from codelattice.lattice import (
    CongruenceLattice,
    construct_A4,
    construct_L_odd,
    construct_LA,
    construct_LB,
    construct_LC,
    lattice_shadow_counts,
    odd_shadow_theta_from_code,
    short_vectors,
    theta_from_code,
)
from codelattice.models import (
    CodeKind,
    ComputationError,
    LatticeConstruction,
    RunManifest,
    ValidationError,
    Z4Type,
)
from codelattice.qseries import (
    EXTREMAL_ODD_LENGTH,
    QUARTER,
    InvalidAlphaError,
    ThetaSeries,
    extremal_odd_theta_family,
    fit_theta,
    shadow_theta,
    theta_matches,
    validate_alpha,
)
from codelattice.selfdual import (
    EXTREMAL_LENGTH,
    ProfileMismatchError,
    SelfDualCode,
    SelfDualError,
    check_extremal_profile,
    coset_weight_distribution,
    covering_radius,
    design_check,
    doubly_even_neighbors,
    extremal_bound,
    find_t_decomposition,
    shadow,
    shadow_weight4_cosets,
    verify_self_dual,
)
from codelattice.z4codes import (
    DEFAULT_MAX_Z4_CODEWORDS,
    Z4Code,
    min_euclidean_weight,
    z4_extremal_bound,
    z4_self_dual_check,
)


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE_ERROR = 2

VALID_COMMANDS = (
    "verify",
    "classify",
    "pipeline-beta10",
    "shadow",
    "neighbors",
    "tdec",
    "bmap",
    "theta",
    "covering-radius",
    "coset-dist",
    "aut-order",
)

LONG_CLASSIFY_LENGTH = 32
LONG_LATTICE_DIMENSION = 24  # enumeration above this needs --long
LONG_SYNDROME_BITS = 16
BUNDLED_PREFIX = "bundled:"
C10_RESOURCE = "c10.f4"
PIPELINE_BETA = 10
PIPELINE_DESIGN = (40, 8, 57)
PIPELINE_RADII = (7, 8)

LATTICE_BUILDERS: dict[LatticeConstruction, Callable[[BitMatrix], CongruenceLattice]] = {
    LatticeConstruction.LA: construct_LA,
    LatticeConstruction.LB: construct_LB,
    LatticeConstruction.LC: construct_LC,
    LatticeConstruction.LODD: construct_L_odd,
}


@dataclass
class CommandResult:
    """Outcome of one command with user-facing error information."""

    success: bool
    payload: dict[str, Any] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)
    error_message: Optional[str] = None
    error_type: Optional[str] = None

    def check(self, name: str, passed: bool) -> None:
        """Record a verification; any failed check fails the command."""
        self.checks[name] = bool(passed)
        if not passed:
            self.success = False

    def get_user_message(self) -> str:
        """Get a one-line summary for stderr.

        Returns:
            A message suitable for display to end users.
        """
        if self.error_message:
            return self.error_message
        if self.success:
            return "All checks passed."
        failed = sorted(name for name, ok in self.checks.items() if not ok)
        return f"Failed checks: {', '.join(failed)}"

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"success": self.success, "checks": dict(sorted(self.checks.items()))}
        out.update(self.payload)
        if self.error_message:
            out["error"] = {"type": self.error_type, "message": self.error_message}
        return out


class BudgetRefusedError(ComputationError):
    """Raised when a long or oversized computation was not explicitly allowed."""


def load_input(path: str) -> ParsedInput:
    """Read a file, or a shipped data file named bundled:<name>.

    Raises:
        FormatError: If the input is missing or malformed.
    """
    if path.startswith(BUNDLED_PREFIX):
        try:
            return load_bundled(path[len(BUNDLED_PREFIX) :])
        except (FileNotFoundError, OSError) as e:
            raise FormatError(f"no bundled file {path!r}") from e
    return read_input(path)


def _require(parsed: ParsedInput, *formats: InputFormat) -> None:
    if parsed.format not in formats:
        names = ", ".join(f.value for f in formats)
        raise FormatError(f"{parsed.source} is a {parsed.format.value} file; this command needs {names}")


def _self_dual(parsed: ParsedInput, max_codewords: int) -> SelfDualCode:
    _require(parsed, InputFormat.BINARY)
    assert isinstance(parsed.value, BitMatrix)
    return verify_self_dual(parsed.value, max_codewords)


def _beta_of(c: SelfDualCode) -> Optional[int]:
    """beta for extremal singly even codes of length 40, else None."""
    if c.n != EXTREMAL_LENGTH or c.is_doubly_even or c.minimum_weight != extremal_bound(c.n):
        return None
    try:
        return check_extremal_profile(c).beta
    except ProfileMismatchError:
        return None


def _code_summary(c: SelfDualCode) -> dict[str, Any]:
    summary: dict[str, Any] = {
        "n": c.n,
        "kind": c.kind.value,
        "minimum_weight": c.minimum_weight,
        "weight_distribution": c.distribution.to_json(),
    }
    beta = _beta_of(c)
    if beta is not None:
        summary["beta"] = beta
    return summary


def _require_long(args: argparse.Namespace, what: str, estimate: str) -> None:
    """Log the budget estimate, or refuse without --long.

    Raises:
        BudgetRefusedError: If neither --long nor --force was given.
    """
    if not (args.long or args.force):
        logger.error(f"{what} refused without --long ({estimate})")
        raise BudgetRefusedError(f"{what} is a long computation ({estimate}); rerun with --long")
    logger.warning(f"Starting {what}: {estimate}")


def _write(out_dir: Optional[str], name: str, value: Any, result: CommandResult) -> None:
    if out_dir is None:
        return
    written = write_object(Path(out_dir) / name, value)
    result.outputs.append(str(written))


class CodeLatticeCLI:
    """Dispatches subcommands to their handlers and wraps each run in a manifest."""

    def __init__(self, config: Optional[AppConfig] = None) -> None:
        """Initialize the command table.

        Args:
            config: Application configuration; defaults apply if None.
        """
        self.config = config or AppConfig()
        self.handlers: dict[str, Callable[[argparse.Namespace], CommandResult]] = {}
        self._inputs: dict[str, str] = {}
        self._register_handlers()

    def _register_handlers(self) -> None:
        """Register all command handlers."""
        self.handlers["verify"] = self._handle_verify
        self.handlers["classify"] = self._handle_classify
        self.handlers["pipeline-beta10"] = self._handle_pipeline_beta10
        self.handlers["shadow"] = self._handle_shadow
        self.handlers["neighbors"] = self._handle_neighbors
        self.handlers["tdec"] = self._handle_tdec
        self.handlers["bmap"] = self._handle_bmap
        self.handlers["theta"] = self._handle_theta
        self.handlers["covering-radius"] = self._handle_covering_radius
        self.handlers["coset-dist"] = self._handle_coset_dist
        self.handlers["aut-order"] = self._handle_aut_order

    def build_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--threads", type=int, default=self.config.runtime.threads)
        common.add_argument("--long", action="store_true", help="allow long-running computations")
        common.add_argument("--force", action="store_true", help="also lift the configured size caps")
        common.add_argument(
            "--out",
            nargs="?",
            const=self.config.runtime.output_dir,
            default=None,
            help="directory for written codes and the manifest (bare --out uses the configured output dir)",
        )

        parser = argparse.ArgumentParser(prog="codelattice", description=__doc__)
        sub = parser.add_subparsers(dest="command", required=True)

        p = sub.add_parser("verify", parents=[common], help="run the verification battery on one file")
        p.add_argument("path")
        p.add_argument("--self-dual", action="store_true")
        p.add_argument("--even", action="store_true")
        p.add_argument("--doubly-even", action="store_true")
        p.add_argument("--singly-even", action="store_true")
        p.add_argument("--type", choices=["I", "II"], default=None)
        p.add_argument("--min-weight", type=int, default=None)
        p.add_argument("--extremal", action="store_true")
        p.add_argument("--beta", type=int, default=None)
        p.add_argument("--unimodular", action="store_true")
        p.add_argument("--min-norm", type=int, default=None)

        p = sub.add_parser("classify", parents=[common], help="isomorph-free generation")
        p.add_argument("n", type=int)
        p.add_argument("--min-weight", type=int, default=2)
        p.add_argument("--expect-doubly", type=int, default=None)
        p.add_argument("--expect-singly", type=int, default=None)

        p = sub.add_parser("pipeline-beta10", parents=[common], help="B-map to extremal beta=10 neighbour")
        p.add_argument("--design-check", action="store_true")
        p.add_argument("--covering-radius", action="store_true")
        p.add_argument("--expect-radius", type=int, default=None, help="certify this exact covering radius")

        p = sub.add_parser("shadow", parents=[common], help="shadow of a singly even code or odd lattice")
        p.add_argument("path")
        p.add_argument("--max-norm", type=Fraction, default=Fraction(2))

        p = sub.add_parser("neighbors", parents=[common], help="doubly or singly even neighbours")
        p.add_argument("path")
        p.add_argument("--beta", type=int, default=None)

        p = sub.add_parser("tdec", parents=[common], help="search for a T-decomposition")
        p.add_argument("path")
        p.add_argument("--beta", type=int, required=True)

        p = sub.add_parser("bmap", parents=[common], help="B-map of an even self-dual additive code")
        p.add_argument("path")
        p.add_argument("--min-weight", type=int, default=None)

        p = sub.add_parser("theta", parents=[common], help="theta series, fit and shadow")
        p.add_argument("path")
        group = p.add_mutually_exclusive_group()
        for kind in LatticeConstruction:
            group.add_argument(f"--{kind.value}", dest="construction", action="store_const", const=kind)
        p.add_argument("--max-norm", type=Fraction, default=Fraction(4))
        p.add_argument("--fit", action="store_true")
        p.add_argument("--shadow", action="store_true")
        p.add_argument("--expect", action="append", default=[], metavar="NORM=COUNT")

        p = sub.add_parser("covering-radius", parents=[common], help="covering radius via syndrome tables")
        p.add_argument("path")
        p.add_argument("--expect", type=int, default=None)

        p = sub.add_parser("coset-dist", parents=[common], help="census of coset weight enumerators")
        p.add_argument("path")
        p.add_argument("--min-weight", type=int, required=True)

        p = sub.add_parser("aut-order", parents=[common], help="order of the automorphism group")
        p.add_argument("path")
        p.add_argument("--expect", type=int, default=None)
        return parser

    def run(self, argv: Sequence[str]) -> int:
        """Parse argv, run one command and print its JSON document.

        Returns:
            The process exit status.
        """
        args = self.build_parser().parse_args(list(argv))
        if args.threads < 1:
            args.threads = 1
        manifest = RunManifest(command=args.command, threads=args.threads)
        manifest.parameters = _parameters(args)
        self._inputs = {}
        handler = self.handlers[args.command]
        started = time.perf_counter()
        try:
            result = handler(args)
            status = EXIT_OK if result.success else EXIT_FAILED
        except FormatError as e:
            logger.error(f"Parse error: {e}")
            result = CommandResult(success=False, error_message=str(e), error_type="FormatError")
            status = EXIT_PARSE_ERROR
        except (ComputationError, ValidationError) as e:
            logger.error(f"{args.command} failed: {e}")
            result = CommandResult(success=False, error_message=str(e), error_type=type(e).__name__)
            status = EXIT_FAILED
        manifest.wall_time = time.perf_counter() - started
        manifest.inputs = dict(self._inputs)
        manifest.outputs = result.outputs
        document = {"manifest": manifest.to_dict(), "result": result.to_json()}
        text = json.dumps(document, indent=2, sort_keys=True)
        if args.out:
            path = Path(args.out) / "manifest.json"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text + "\n", encoding="utf-8")
        print(text)
        logger.info(result.get_user_message())
        return status

    def _load(self, path: str) -> ParsedInput:
        parsed = load_input(path)
        self._inputs[parsed.source] = parsed.digest
        return parsed

    def _code(self, path: str) -> SelfDualCode:
        return _self_dual(self._load(path), self.config.limits.max_codewords)

    # verify

    def _handle_verify(self, args: argparse.Namespace) -> CommandResult:
        parsed = self._load(args.path)
        result = CommandResult(success=True)
        if parsed.format is InputFormat.BINARY:
            assert isinstance(parsed.value, BitMatrix)
            self._verify_binary(parsed.value, args, result)
        elif parsed.format is InputFormat.F4ADDITIVE:
            assert isinstance(parsed.value, AdditiveF4Code)
            self._verify_f4(parsed.value, args, result)
        elif parsed.format is InputFormat.Z4:
            assert isinstance(parsed.value, Z4Code)
            self._verify_z4(parsed.value, args, result)
        else:
            assert isinstance(parsed.value, CongruenceLattice)
            self._verify_lattice(parsed.value, args, result)
        return result

    def _verify_binary(self, m: BitMatrix, args: argparse.Namespace, result: CommandResult) -> None:
        try:
            code: Optional[SelfDualCode] = verify_self_dual(m, self.config.limits.max_codewords)
        except SelfDualError as e:
            logger.info(f"Not self-dual: {e}")
            code = None
        if code is None:
            d = minimum_weight(m, self.config.limits.max_codewords)
            wd = weight_distribution(m, self.config.limits.max_codewords)
            result.payload = {"n": m.n, "self_dual": False, "minimum_weight": d, "weight_distribution": wd.to_json()}
        else:
            d = code.minimum_weight
            wd = code.distribution
            result.payload = {"self_dual": True, "extremal_bound": extremal_bound(code.n), **_code_summary(code)}
        if args.self_dual:
            result.check("self_dual", code is not None)
        if args.even:
            result.check("even", all(w % 2 == 0 for w in wd.nonzero()))
        if args.doubly_even:
            result.check("doubly_even", code is not None and code.kind is CodeKind.DOUBLY_EVEN)
        if args.singly_even:
            result.check("singly_even", code is not None and code.kind is CodeKind.SINGLY_EVEN)
        if args.min_weight is not None:
            result.check("min_weight", d == args.min_weight)
        if args.extremal:
            result.check("extremal", code is not None and d == extremal_bound(code.n))
        if args.beta is not None:
            result.check("beta", code is not None and _beta_of(code) == args.beta)
        for flag in ("type", "unimodular", "min_norm"):
            if getattr(args, flag):
                result.check(flag, False)

    def _verify_f4(self, c: AdditiveF4Code, args: argparse.Namespace, result: CommandResult) -> None:
        self_dual = trace_dual_check(c)
        even = is_even(c)
        wd = f4_weight_distribution(c)
        d = wd.min_nonzero_weight()
        bound = f4_extremal_bound(c.n) if c.n % 2 == 0 else None
        result.payload = {
            "n": c.n,
            "self_dual": self_dual,
            "even": even,
            "minimum_weight": d,
            "extremal_bound": bound,
            "weight_distribution": wd.to_json(),
        }
        if args.self_dual:
            result.check("self_dual", self_dual)
        if args.even:
            result.check("even", even)
        if args.min_weight is not None:
            result.check("min_weight", d == args.min_weight)
        if args.extremal:
            result.check("extremal", bound is not None and d == bound)
        for flag in ("doubly_even", "singly_even", "type", "beta", "unimodular", "min_norm"):
            if getattr(args, flag):
                result.check(flag, False)

    def _verify_z4(self, c: Z4Code, args: argparse.Namespace, result: CommandResult) -> None:
        verdict = z4_self_dual_check(c)
        result.payload = {"n": c.n, "k1": c.k1, "k2": c.k2, "type": verdict.value}
        if args.self_dual:
            result.check("self_dual", verdict is not Z4Type.NOT_SELF_DUAL)
        if args.type:
            result.check("type", verdict.value == args.type)
        if args.min_weight is not None or args.extremal:
            bound, exceptional = z4_extremal_bound(c.n, verdict is not Z4Type.TYPE_II)
            cap = args.min_weight if args.min_weight is not None else bound
            if c.size > DEFAULT_MAX_Z4_CODEWORDS:
                _require_long(args, "Euclidean weight search through A4", f"dimension {c.n} enumeration")
            info = min_euclidean_weight(c, cap, threads=args.threads)
            result.payload.update(
                {"min_euclidean_weight": info.minimum, "count": info.count, "extremal_bound": bound, "exceptional": exceptional}
            )
            if args.min_weight is not None:
                result.check("min_weight", info.minimum == args.min_weight)
            if args.extremal:
                result.check("extremal", info.minimum == bound)
        for flag in ("even", "doubly_even", "singly_even", "beta", "unimodular", "min_norm"):
            if getattr(args, flag):
                result.check(flag, False)

    def _verify_lattice(self, l: CongruenceLattice, args: argparse.Namespace, result: CommandResult) -> None:
        unimodular = l.is_unimodular()
        result.payload = {"n": l.n, "unimodular": unimodular, "even": l.is_even()}
        if args.unimodular or args.self_dual:
            result.check("unimodular", unimodular)
        if args.even:
            result.check("even", l.is_even())
        if args.min_norm is not None:
            if l.n > LONG_LATTICE_DIMENSION:
                _require_long(args, "short-vector enumeration", f"dimension {l.n}")
            theta = short_vectors(l, args.min_norm, args.threads, self.config.limits.max_lattice_nodes)
            low = theta.min_norm()
            result.payload["theta"] = theta.to_json()
            result.check("min_norm", low == args.min_norm)
        for flag in ("doubly_even", "singly_even", "type", "min_weight", "extremal", "beta"):
            if getattr(args, flag):
                result.check(flag, False)

    # classification

    def _handle_classify(self, args: argparse.Namespace) -> CommandResult:
        n = args.n
        max_length = self.config.limits.max_classify_length
        if n > max_length and not args.force:
            logger.error(f"Refusing classification at n={n} (cap {max_length})")
            raise BudgetRefusedError(f"classification at n={n} exceeds the cap {max_length}; rerun with --force")
        if n >= LONG_CLASSIFY_LENGTH:
            levels = len(range(4, n + 1, 2))
            _require_long(args, f"classification at n={n}", f"{levels} extension levels, several hours")
        run = generate(
            n,
            args.min_weight,
            threads=args.threads,
            max_length=max(n, max_length),
            max_nodes=self.config.limits.max_search_nodes,
        )
        doubly, singly = run.counts_by_kind()
        result = CommandResult(success=True)
        classes = []
        for i, record in enumerate(run.classes):
            entry: dict[str, Any] = {
                "certificate_hash": record.form.certificate_hash,
                "n": record.code.n,
                "d": record.minimum_weight,
                "kind": record.code.kind.value,
                "aut_order": record.aut_order,
            }
            beta = _beta_of(record.code)
            if beta is not None:
                entry["beta"] = beta
            classes.append(entry)
            _write(args.out, f"n{n}_{i:04d}_{record.form.certificate_hash[:12]}.txt", record.code.gen, result)
        result.payload = {
            "n": n,
            "min_weight": args.min_weight,
            "counts": {"doubly": doubly, "singly": singly},
            "classes": classes,
            "stats": {
                "parents_processed": run.stats.parents_processed,
                "extensions_tried": run.stats.extensions_tried,
                "parent_test_rejections": run.stats.parent_test_rejections,
            },
        }
        if args.expect_doubly is not None:
            result.check("doubly_count", doubly == args.expect_doubly)
        if args.expect_singly is not None:
            result.check("singly_count", singly == args.expect_singly)
        return result

    def _handle_pipeline_beta10(self, args: argparse.Namespace) -> CommandResult:
        parsed = self._load(BUNDLED_PREFIX + C10_RESOURCE)
        assert isinstance(parsed.value, AdditiveF4Code)
        result = CommandResult(success=True)
        d = b_map(parsed.value)
        logger.info(f"B-map image: n={d.n}, A_4={d.distribution[4]}")
        tdec = find_t_decomposition(d, PIPELINE_BETA)
        result.check("t_decomposition", tdec is not None and tdec.is_partition(d.n))
        if tdec is None:
            return result
        c = first_extremal_neighbor(d, PIPELINE_BETA)
        result.check("extremal_neighbor_found", c is not None)
        if c is None:
            return result
        profile = check_extremal_profile(c)
        sd = shadow(c)
        first, second = doubly_even_neighbors(c)
        neighbor_a4 = sorted((first.distribution[4], second.distribution[4]))
        result.payload = {
            "doubly_even_input": {"n": d.n, "weight4": d.distribution[4]},
            "tetrads": [list(t) for t in tdec.tetrads],
            "code": _code_summary(c),
            "shadow_distribution": sd.shadow_weight_distribution.to_json(),
            "shadow_weight4_cosets": list(shadow_weight4_cosets(sd)),
            "neighbors": [_code_summary(first), _code_summary(second)],
        }
        result.check("beta", profile.beta == PIPELINE_BETA)
        result.check("a8", c.distribution[8] == 285)
        result.check("shadow_b4", profile.shadow_enumerator[4] == PIPELINE_BETA)
        result.check("neighbor_weight4", neighbor_a4 == [0, PIPELINE_BETA])
        if args.design_check:
            design = design_check(c, 8, 1)
            result.payload["design"] = list(design) if design else None
            result.check("design", design == PIPELINE_DESIGN)
        if args.covering_radius or args.expect_radius is not None:
            _require_long(args, "covering radius of a [40, 20] code", "2^20 syndromes")
            radius = covering_radius(c, args.threads, self.config.limits.max_syndrome_bits)
            result.payload["covering_radius"] = radius
            logger.info(f"Certified covering radius {radius}")
            if args.expect_radius is not None:
                result.check("covering_radius", radius == args.expect_radius)
            else:
                result.check("covering_radius_in_family", radius in PIPELINE_RADII)
        _write(args.out, "extremal40_beta10.txt", c.gen, result)
        return result

    # shadows and neighbours

    def _handle_shadow(self, args: argparse.Namespace) -> CommandResult:
        parsed = self._load(args.path)
        result = CommandResult(success=True)
        if parsed.format is InputFormat.LATTICE:
            assert isinstance(parsed.value, CongruenceLattice)
            l = parsed.value
            if l.n > LONG_LATTICE_DIMENSION:
                _require_long(args, "shadow enumeration", f"dimension {l.n}")
            theta = lattice_shadow_counts(l, args.max_norm, args.threads, self.config.limits.max_lattice_nodes)
            result.payload = {"n": l.n, "shadow_theta": theta.to_json()}
            return result
        c = _self_dual(parsed, self.config.limits.max_codewords)
        sd = shadow(c)
        cosets = {}
        for name, coset in (("c0", sd.c0), ("c1", sd.c1), ("c2", sd.c2), ("c3", sd.c3)):
            cosets[name] = {
                "minimum_weight": coset.distribution.min_nonzero_weight() or 0,
                "weight_distribution": coset.distribution.to_json(),
            }
        result.payload = {
            "code": _code_summary(c),
            "cosets": cosets,
            "shadow_distribution": sd.shadow_weight_distribution.to_json(),
            "shadow_weight4_cosets": list(shadow_weight4_cosets(sd)),
        }
        return result

    def _handle_neighbors(self, args: argparse.Namespace) -> CommandResult:
        c = self._code(args.path)
        result = CommandResult(success=True)
        if not c.is_doubly_even:
            pair = doubly_even_neighbors(c)
            result.payload = {"code": _code_summary(c), "neighbors": [_code_summary(x) for x in pair]}
            for i, neighbor in enumerate(pair, start=1):
                _write(args.out, f"neighbor{i}.txt", neighbor.gen, result)
            return result
        if args.beta is None:
            raise ValidationError("a doubly even input needs --beta")
        found = classify_via_neighbors([c], args.beta, max_nodes=self.config.limits.max_search_nodes)
        neighbors = []
        for i, code in enumerate(found):
            form = canonical_form(
                code.gen,
                max_nodes=self.config.limits.max_search_nodes,
                max_length=self.config.limits.max_canonical_length,
            )
            neighbors.append({"certificate_hash": form.certificate_hash, **_code_summary(code)})
            _write(args.out, f"neighbor_{i:04d}_{form.certificate_hash[:12]}.txt", code.gen, result)
        result.payload = {"code": _code_summary(c), "beta": args.beta, "neighbors": neighbors}
        return result

    def _handle_tdec(self, args: argparse.Namespace) -> CommandResult:
        c = self._code(args.path)
        tdec = find_t_decomposition(c, args.beta)
        result = CommandResult(success=True)
        result.payload = {
            "n": c.n,
            "beta": args.beta,
            "tetrads": [list(t) for t in tdec.tetrads] if tdec else None,
            "partition": bool(tdec and tdec.is_partition(c.n)),
        }
        result.check("t_decomposition", tdec is not None)
        return result

    def _handle_bmap(self, args: argparse.Namespace) -> CommandResult:
        parsed = self._load(args.path)
        _require(parsed, InputFormat.F4ADDITIVE)
        assert isinstance(parsed.value, AdditiveF4Code)
        d = b_map(parsed.value)
        result = CommandResult(success=True, payload={"code": _code_summary(d)})
        if args.min_weight is not None:
            result.check("min_weight", d.minimum_weight == args.min_weight)
        _write(args.out, "bmap.txt", d.gen, result)
        return result

    # theta series

    def _handle_theta(self, args: argparse.Namespace) -> CommandResult:
        parsed = self._load(args.path)
        max_norm: Fraction = args.max_norm
        construction: Optional[LatticeConstruction] = args.construction
        lattice: Optional[CongruenceLattice] = None
        code_matrix: Optional[BitMatrix] = None
        theta: Optional[ThetaSeries] = None
        nodes = self.config.limits.max_lattice_nodes

        if parsed.format is InputFormat.BINARY:
            assert isinstance(parsed.value, BitMatrix)
            if construction is None or construction is LatticeConstruction.A4:
                raise ValidationError("binary inputs need one of --la, --lb, --lc, --lodd")
            code_matrix = parsed.value
            n = code_matrix.n
            theta = theta_from_code(construction, code_matrix, max_norm)
            odd = construction is LatticeConstruction.LODD
            if args.long:
                lattice = LATTICE_BUILDERS[construction](code_matrix)
        elif parsed.format is InputFormat.Z4:
            assert isinstance(parsed.value, Z4Code)
            if construction not in (None, LatticeConstruction.A4):
                raise ValidationError("Z4 inputs go through --a4")
            lattice = construct_A4(parsed.value)
            n = lattice.n
            odd = z4_self_dual_check(parsed.value) is Z4Type.TYPE_I
        else:
            _require(parsed, InputFormat.LATTICE)
            assert isinstance(parsed.value, CongruenceLattice)
            lattice = parsed.value
            n = lattice.n
            odd = not lattice.is_even()

        result = CommandResult(success=True)
        if theta is None:
            assert lattice is not None
            if n > LONG_LATTICE_DIMENSION:
                _require_long(args, "short-vector enumeration", f"dimension {n}, norm <= {max_norm}")
            theta = short_vectors(lattice, max_norm, args.threads, nodes)
        elif lattice is not None:
            logger.warning(f"Cross-checking the code series by enumeration in dimension {n}")
            enumerated = short_vectors(lattice, max_norm, args.threads, nodes)
            result.check("enumeration_matches", enumerated.shells() == theta.shells())

        result.payload = {"n": n, "odd": odd, "theta": theta.to_json(), "max_norm": str(max_norm)}
        if args.expect:
            result.check("theta_expected", theta_matches(theta, _expectations(args.expect)))
        if args.fit or args.shadow:
            a = fit_theta(theta, n)
            result.payload["a"] = a
            if odd:
                self._report_alpha(a, n, result)
            if args.shadow:
                self._compare_shadow(a, n, max_norm, code_matrix, lattice, args, result, odd)
        return result

    def _report_alpha(self, a: list[int], n: int, result: CommandResult) -> None:
        if n != EXTREMAL_ODD_LENGTH:
            return
        family = extremal_odd_theta_family(n)
        free = next(j for j, expr in enumerate(family.a) if expr.has(family.alpha))
        forced = [int(expr) for expr in family.a[:free]]
        if a[:free] != forced:
            logger.info("Theta series is not that of an extremal odd lattice")
            return
        alpha = Fraction(a[free]) / Fraction(int(family.a[free].coeff(family.alpha)))
        result.payload["alpha"] = str(alpha)
        try:
            if alpha.denominator != 1:
                raise InvalidAlphaError(f"alpha = {alpha} is not an integer")
            validate_alpha(int(alpha))
            result.check("alpha_admissible", True)
        except InvalidAlphaError as e:
            logger.warning(str(e))
            result.check("alpha_admissible", False)

    def _compare_shadow(
        self,
        a: list[int],
        n: int,
        max_norm: Fraction,
        code_matrix: Optional[BitMatrix],
        lattice: Optional[CongruenceLattice],
        args: argparse.Namespace,
        result: CommandResult,
        odd: bool,
    ) -> None:
        if not odd:
            raise ValidationError("shadows are defined here for odd lattices only")
        order = int(max_norm * QUARTER)
        analytic = shadow_theta(a, n, order)
        result.payload["shadow_analytic"] = analytic.to_json()
        enumerated: Optional[ThetaSeries] = None
        if code_matrix is not None and args.construction is LatticeConstruction.LODD:
            enumerated = odd_shadow_theta_from_code(code_matrix, max_norm)
        elif lattice is not None and (args.long or lattice.n <= LONG_LATTICE_DIMENSION):
            enumerated = lattice_shadow_counts(lattice, max_norm, args.threads, self.config.limits.max_lattice_nodes)
        if enumerated is None:
            logger.warning("Enumerated shadow skipped; rerun with --long to compare")
            return
        result.payload["shadow_enumerated"] = enumerated.to_json()
        matches = all(
            analytic.coeffs[e] == enumerated[Fraction(e, QUARTER)] for e in range(1, order + 1)
        )
        result.check("shadow_matches", matches)

    # coset tables and automorphisms

    def _handle_covering_radius(self, args: argparse.Namespace) -> CommandResult:
        c = self._code(args.path)
        bits = c.n - c.gen.k
        if bits > LONG_SYNDROME_BITS:
            _require_long(args, "covering radius", f"2^{bits} syndromes")
        radius = covering_radius(c, args.threads, self.config.limits.max_syndrome_bits)
        result = CommandResult(success=True, payload={"n": c.n, "covering_radius": radius})
        if args.expect is not None:
            result.check("covering_radius", radius == args.expect)
        return result

    def _handle_coset_dist(self, args: argparse.Namespace) -> CommandResult:
        c = self._code(args.path)
        bits = c.n - c.gen.k
        if bits > LONG_SYNDROME_BITS:
            _require_long(args, "coset weight census", f"2^{bits} syndromes plus one pass per coset")
        census = coset_weight_distribution(c, args.min_weight, args.threads, self.config.limits.max_syndrome_bits)
        rows = [
            {"enumerator": {str(w): k for w, k in key}, "cosets": count} for key, count in census.items()
        ]
        return CommandResult(
            success=True,
            payload={"n": c.n, "min_weight": args.min_weight, "distinct": len(rows), "distribution": rows},
        )

    def _handle_aut_order(self, args: argparse.Namespace) -> CommandResult:
        parsed = self._load(args.path)
        nodes = self.config.limits.max_search_nodes
        if parsed.format is InputFormat.F4ADDITIVE:
            assert isinstance(parsed.value, AdditiveF4Code)
            order = f4_automorphism_order(parsed.value, nodes, self.config.limits.max_canonical_length)
            n = parsed.value.n
        else:
            _require(parsed, InputFormat.BINARY)
            assert isinstance(parsed.value, BitMatrix)
            order = automorphism_order(parsed.value, nodes, self.config.limits.max_canonical_length).order
            n = parsed.value.n
        result = CommandResult(success=True, payload={"n": n, "aut_order": order})
        if args.expect is not None:
            result.check("aut_order", order == args.expect)
        return result


def _expectations(items: Sequence[str]) -> dict[Fraction, int]:
    out = {}
    for item in items:
        norm, sep, count = item.partition("=")
        if not sep:
            raise ValidationError(f"expected NORM=COUNT, got {item!r}")
        try:
            out[Fraction(norm)] = int(count)
        except ValueError as e:
            raise ValidationError(f"expected NORM=COUNT, got {item!r}") from e
    return out


def _parameters(args: argparse.Namespace) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in sorted(vars(args).items()):
        if key in ("command", "threads"):
            continue
        if isinstance(value, (Fraction, LatticeConstruction)):
            value = str(value) if isinstance(value, Fraction) else value.value
        out[key] = value
    return out
