"""Plain-text formats for codes and lattices.

Each file starts with a header line naming the format and its sizes,
followed by one row per line:

    binary <n> <k>          k rows over 01
    f4additive <n> <k>      k rows over 01wW (W is w^2)
    z4 <n> <k1> <k2>        k1 + k2 rows over 0123
    lattice <n> <scale>     n rows of n integers (a basis)

Blank lines and lines starting with '#' are ignored.
"""

import hashlib
import logging
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from codelattice.f4additive import AdditiveF4Code
from codelattice.gf2core import BitMatrix
from codelattice.lattice import CongruenceLattice
from codelattice.models import ValidationError
from codelattice.z4codes import Z4Code


logger = logging.getLogger(__name__)

BUNDLED_PACKAGE = "codelattice"
BUNDLED_DIR = "data"

CodeObject = Union[BitMatrix, AdditiveF4Code, Z4Code, CongruenceLattice]


class FormatError(ValidationError):
    """Raised when a code or lattice file cannot be parsed."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class InputFormat(Enum):
    """File formats understood by the toolkit."""

    BINARY = "binary"
    F4ADDITIVE = "f4additive"
    Z4 = "z4"
    LATTICE = "lattice"


@dataclass(frozen=True)
class ParsedInput:
    """A parsed file: its format and the object it describes."""

    format: InputFormat
    value: CodeObject
    source: str = "<string>"
    digest: str = ""  # sha256 of the text


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append((number, line))
    return out


def _header_ints(fields: list[str], count: int, line: int) -> list[int]:
    if len(fields) != count + 1:
        raise FormatError(f"{fields[0]} header needs {count} integers", line)
    try:
        values = [int(f) for f in fields[1:]]
    except ValueError as e:
        raise FormatError(f"non-integer size in header: {' '.join(fields)}", line) from e
    if any(v < 0 for v in values):
        raise FormatError("negative size in header", line)
    return values


def _rows(lines: list[tuple[int, str]], count: int, n: int, alphabet: str) -> list[str]:
    if len(lines) != count:
        at = lines[count][0] if len(lines) > count else (lines[-1][0] if lines else None)
        raise FormatError(f"expected {count} rows, found {len(lines)}", at)
    rows = []
    for number, line in lines:
        if len(line) != n:
            raise FormatError(f"row has length {len(line)}, expected {n}", number)
        bad = next((ch for ch in line if ch not in alphabet), None)
        if bad is not None:
            raise FormatError(f"invalid symbol {bad!r}", number)
        rows.append(line)
    return rows


def parse_text(text: str, source: str = "<string>") -> ParsedInput:
    """Parse the contents of a code or lattice file.

    Raises:
        FormatError: With the offending line number when the text is malformed.
    """
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty input")
    header_line, header = lines[0]
    fields = header.split()
    body = lines[1:]
    try:
        kind = InputFormat(fields[0])
    except ValueError as e:
        raise FormatError(f"unknown format {fields[0]!r}", header_line) from e

    try:
        if kind is InputFormat.BINARY:
            n, k = _header_ints(fields, 2, header_line)
            return ParsedInput(kind, BitMatrix.from_strings(_rows(body, k, n, "01"), n), source, digest)
        if kind is InputFormat.F4ADDITIVE:
            n, k = _header_ints(fields, 2, header_line)
            rows = _rows(body, k, n, "01wW")
            code = AdditiveF4Code.from_strings(rows) if rows else AdditiveF4Code(n, ())
            return ParsedInput(kind, code, source, digest)
        if kind is InputFormat.Z4:
            n, k1, k2 = _header_ints(fields, 3, header_line)
            z4 = Z4Code.from_strings(_rows(body, k1 + k2, n, "0123")) if k1 + k2 else Z4Code(n, ())
            if (z4.k1, z4.k2) != (k1, k2):
                raise FormatError(f"rows have type 4^{z4.k1} 2^{z4.k2}, header says 4^{k1} 2^{k2}", header_line)
            return ParsedInput(kind, z4, source, digest)
        n, scale = _header_ints(fields, 2, header_line)
        if len(body) != n:
            raise FormatError(f"expected {n} basis rows, found {len(body)}", header_line)
        basis = []
        for number, line in body:
            try:
                row = [int(v) for v in line.split()]
            except ValueError as e:
                raise FormatError("basis entries must be integers", number) from e
            if len(row) != n:
                raise FormatError(f"row has {len(row)} entries, expected {n}", number)
            basis.append(row)
        return ParsedInput(kind, CongruenceLattice.from_basis(scale, basis), source, digest)
    except FormatError:
        raise
    except ValidationError as e:
        raise FormatError(str(e), header_line) from e


def read_input(path: Union[str, Path]) -> ParsedInput:
    """Parse a file from disk.

    Raises:
        FormatError: If the file is unreadable or malformed.
    """
    file_path = Path(path).expanduser()
    try:
        text = file_path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        logger.error(f"Failed to read {file_path}: {e}")
        raise FormatError(f"cannot read {file_path}: {e}") from e
    parsed = parse_text(text, str(file_path))
    logger.debug(f"Parsed {file_path} as {parsed.format.value}")
    return parsed


def load_bundled(name: str) -> ParsedInput:
    """Parse one of the data files shipped with the package (c10.f4, d1.z4, ...)."""
    resource = resources.files(BUNDLED_PACKAGE).joinpath(BUNDLED_DIR, name)
    return parse_text(resource.read_text(encoding="utf-8"), f"bundled:{name}")


def format_binary(m: BitMatrix) -> str:
    return "\n".join([f"binary {m.n} {m.k}", *m.to_strings()]) + "\n"


def format_f4(c: AdditiveF4Code) -> str:
    return "\n".join([f"f4additive {c.n} {c.k}", *c.to_strings()]) + "\n"


def format_z4(c: Z4Code) -> str:
    sf = c.standard_form
    rows = []
    for row in sf.rows:
        out = [0] * c.n
        for pos, value in enumerate(row):
            out[sf.column_order[pos]] = value
        rows.append("".join(str(v) for v in out))
    return "\n".join([f"z4 {c.n} {sf.k1} {sf.k2}", *rows]) + "\n"


def format_lattice(l: CongruenceLattice) -> str:
    rows = [" ".join(str(v) for v in row) for row in l.basis]
    return "\n".join([f"lattice {l.n} {l.scale}", *rows]) + "\n"


def format_object(value: CodeObject) -> str:
    if isinstance(value, BitMatrix):
        return format_binary(value)
    if isinstance(value, AdditiveF4Code):
        return format_f4(value)
    if isinstance(value, Z4Code):
        return format_z4(value)
    return format_lattice(value)


def write_object(path: Union[str, Path], value: CodeObject) -> Path:
    """Write value in its text format, creating parent directories."""
    file_path = Path(path).expanduser()
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(format_object(value), encoding="utf-8")
    logger.debug(f"Wrote {file_path}")
    return file_path
