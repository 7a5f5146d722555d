"""Text formats: ideal files, Rees Betti files, rendered Betti tables, JSON and CSV.

Grammars are documented in ``docs/FORMATS.md``.
"""

from __future__ import annotations

import csv
import io
import json
import os
import re
import tempfile
import warnings
from pathlib import Path
from typing import Any

from .betti import GradedBettiTable
from .errors import ParseError, UnitIdealError, ZeroIdealError
from .ideal import MonomialIdeal, minimalize
from .powerlab import ReesBettiData, StabilizationReport

TABLE_SCHEMA = "bettistab.betti-table/1"
REPORT_SCHEMA = "bettistab.stabilization-report/1"
BOUND_SCHEMA = "bettistab.rees-bound/1"
CONJECTURE_SCHEMA = "bettistab.conjecture/1"

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class RedundantGeneratorsWarning(UserWarning):
    pass


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def _parse_monomial(token: str, names: dict[str, int], lineno: int, col: int) -> list[int]:
    exps = [0] * len(names)
    if token == "1":
        return exps
    pos = 0
    for factor in token.split("*"):
        fcol = col + pos
        pos += len(factor) + 1
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?", factor)
        if not m:
            raise ParseError(f"malformed factor {factor!r}", lineno, fcol)
        name, exp = m.group(1), m.group(2)
        if name not in names:
            raise ParseError(f"undeclared variable {name!r}", lineno, fcol)
        exps[names[name]] += int(exp) if exp is not None else 1
    return exps


def parse_ideal(text: str) -> MonomialIdeal:
    """Parse an ideal document; redundant generators are dropped with a warning."""
    names: dict[str, int] | None = None
    var_list: list[str] = []
    gens: list[list[int]] = []
    gen_count = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        stripped = line.lstrip()
        indent = len(line) - len(stripped)
        if stripped.split()[0] == "ring":
            if names is not None:
                raise ParseError("second ring line", lineno, indent + 1)
            rest = stripped[4:]
            var_list = [v for v in re.split(r"[\s,]+", rest.strip()) if v]
            if not var_list:
                raise ParseError("ring line declares no variables", lineno, indent + 1)
            for v in var_list:
                if not _NAME.fullmatch(v):
                    raise ParseError(f"bad variable name {v!r}", lineno, line.find(v) + 1)
            if len(set(var_list)) != len(var_list):
                raise ParseError("duplicate variable in ring line", lineno, indent + 1)
            names = {v: n for n, v in enumerate(var_list)}
            continue
        if names is None:
            raise ParseError("generator before the ring line", lineno, indent + 1)
        offset = 0
        for token in line.split(","):
            col = offset + len(token) - len(token.lstrip()) + 1
            offset += len(token) + 1
            token = token.strip()
            if not token:
                raise ParseError("empty generator", lineno, col)
            compact = re.sub(r"\s+", "", token)
            if compact != token:
                raise ParseError(f"whitespace inside monomial {token!r}", lineno, col)
            gens.append(_parse_monomial(token, names, lineno, col))
            gen_count += 1
    if names is None:
        raise ParseError("missing ring line")
    try:
        ideal = minimalize(gens, len(var_list), var_list)
    except ZeroIdealError as exc:
        raise ParseError(f"zero ideal: {exc}") from exc
    except UnitIdealError as exc:
        raise ParseError(f"unit ideal: {exc}") from exc
    if ideal.ngens < gen_count:
        warnings.warn(
            f"{gen_count - ideal.ngens} redundant generator(s) removed", RedundantGeneratorsWarning, stacklevel=2
        )
    return ideal


def format_ideal(ideal: MonomialIdeal) -> str:
    lines = ["ring " + " ".join(ideal.var_names)]
    lines += [g.to_string(ideal.var_names) for g in ideal.generators]
    return "\n".join(lines) + "\n"


def load_ideal(path: str | os.PathLike) -> MonomialIdeal:
    return parse_ideal(Path(path).read_text())


def parse_rees(text: str) -> ReesBettiData:
    header = None
    data: dict[tuple[int, int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if header is None:
            m = re.fullmatch(r"k\s*=\s*(\d+)\s+r\s*=\s*(\d+)", line)
            if not m:
                raise ParseError("expected header 'k=<int> r=<int>'", lineno, 1)
            header = (int(m.group(1)), int(m.group(2)))
            continue
        fields = line.split()
        if len(fields) != 4 or not all(f.isdigit() for f in fields):
            raise ParseError("expected four nonnegative integers 'i j m beta'", lineno, 1)
        i, j, m, beta = map(int, fields)
        if beta == 0:
            raise ParseError("beta must be positive", lineno, 1)
        if (i, j, m) in data:
            raise ParseError(f"duplicate key {(i, j, m)}", lineno, 1)
        data[(i, j, m)] = beta
    if header is None:
        raise ParseError("missing header 'k=<int> r=<int>'")
    return ReesBettiData(header[0], header[1], data)


def format_rees(data: ReesBettiData) -> str:
    lines = [f"k={data.k} r={data.r}"]
    lines += [f"{i} {j} {m} {v}" for (i, j, m), v in data.betti.items()]
    return "\n".join(lines) + "\n"


def load_rees(path: str | os.PathLike) -> ReesBettiData:
    return parse_rees(Path(path).read_text())


def _quotient_cells(table: GradedBettiTable) -> dict[tuple[int, int], int]:
    """Cells ``(column, row) -> value`` of the R/I display, unit entry excluded."""
    return {(i + 1, j - i - 1): v for (i, j), v in table.entries.items()}


def render_table(table: GradedBettiTable, unit: bool = True, module_convention: bool = False) -> str:
    """Macaulay2-style text: column ``c`` and row ``l`` hold ``beta_{c, c+l}``.

    By default the table of ``R/I`` is shown (ideal index shifted by one and
    the unit entry in column 0). ``unit=False`` drops column 0 and leading
    empty rows; ``module_convention=True`` shows the ideal's own indices.
    """
    if not table.entries:
        raise ValueError("cannot render an empty table")
    if module_convention:
        cells = {(i, j - i): v for (i, j), v in table.entries.items()}
    else:
        cells = _quotient_cells(table)
        if unit:
            cells[(0, 0)] = 1
    cols = range(min(c for c, _ in cells), max(c for c, _ in cells) + 1)
    rows = range(min(r for _, r in cells), max(r for _, r in cells) + 1)
    totals = {c: sum(v for (cc, _), v in cells.items() if cc == c) for c in cols}
    grid = [["", *(str(c) for c in cols)], ["total:", *(str(totals[c]) for c in cols)]]
    for r in rows:
        grid.append([f"{r}:", *(str(cells.get((c, r), ".")) for c in cols)])
    widths = [max(len(line[k]) for line in grid) for k in range(len(grid[0]))]
    out = []
    for line in grid:
        out.append(" ".join(cell.rjust(w) for cell, w in zip(line, widths)).rstrip())
    return "\n".join(out) + "\n"


def parse_rendered_table(text: str, module_convention: bool = False, ring_dim: int = 0,
                         characteristic: int = 32003) -> GradedBettiTable:
    """Inverse of :func:`render_table` (either layout)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ParseError("rendered table needs a header and a total row")
    try:
        cols = [int(tok) for tok in lines[0].split()]
    except ValueError as exc:
        raise ParseError("header must list column indices", 1) from exc
    if not cols or cols != list(range(cols[0], cols[0] + len(cols))):
        raise ParseError("header columns must be consecutive integers", 1)
    total_tokens = lines[1].split()
    if not total_tokens or total_tokens[0] != "total:" or len(total_tokens) != len(cols) + 1:
        raise ParseError("malformed total row", 2)
    entries: dict[tuple[int, int], int] = {}
    sums = {c: 0 for c in cols}
    for lineno, line in enumerate(lines[2:], start=3):
        tokens = line.split()
        if not tokens[0].endswith(":") or len(tokens) != len(cols) + 1:
            raise ParseError("malformed row", lineno)
        try:
            r = int(tokens[0][:-1])
        except ValueError as exc:
            raise ParseError(f"bad row label {tokens[0]!r}", lineno) from exc
        for c, tok in zip(cols, tokens[1:]):
            if tok == ".":
                continue
            if not tok.isdigit() or int(tok) == 0:
                raise ParseError(f"bad entry {tok!r}", lineno)
            v = int(tok)
            sums[c] += v
            if module_convention:
                entries[(c, c + r)] = v
            elif c == 0:
                if (r, v) != (0, 1):
                    raise ParseError("column 0 may only hold the unit entry 1 in row 0", lineno)
            else:
                entries[(c - 1, c + r)] = v
    for c, tok in zip(cols, total_tokens[1:]):
        if str(sums[c]) != tok:
            raise ParseError(f"column {c} total {tok} does not match its entries", 2)
    return GradedBettiTable(entries, ring_dim, characteristic)


def table_to_json(table: GradedBettiTable, **meta: Any) -> dict:
    doc = {
        "schema": TABLE_SCHEMA,
        "convention": "ideal",
        "ring_dim": table.ring_dim,
        "characteristic": table.characteristic,
    }
    doc.update(meta)
    doc["entries"] = [{"i": i, "j": j, "beta": v} for (i, j), v in table.entries.items()]
    doc["totals"] = {str(i): v for i, v in table.totals().items()}
    if table.entries:
        doc["regularity"] = max(j - i for i, j in table.entries)
    return doc


def table_from_json(doc: dict) -> GradedBettiTable:
    if doc.get("schema") != TABLE_SCHEMA:
        raise ParseError(f"unsupported schema {doc.get('schema')!r}")
    entries = {(e["i"], e["j"]): e["beta"] for e in doc["entries"]}
    return GradedBettiTable(entries, doc.get("ring_dim", 0), doc.get("characteristic", 32003))


def table_to_csv(table: GradedBettiTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["i", "j", "beta"])
    for (i, j), v in table.entries.items():
        writer.writerow([i, j, v])
    return buf.getvalue()


def table_from_csv(text: str, ring_dim: int = 0) -> GradedBettiTable:
    rows = list(csv.DictReader(io.StringIO(text)))
    return GradedBettiTable({(int(r["i"]), int(r["j"])): int(r["beta"]) for r in rows}, ring_dim)


def report_to_json(report: StabilizationReport) -> dict:
    lf = report.linear_form
    return {
        "schema": REPORT_SCHEMA,
        "ideal": report.ideal_id,
        "r": report.r,
        "horizon": report.horizon,
        "completed": report.completed,
        "characteristic": report.characteristic,
        "certainty": report.certainty,
        "partial": report.partial,
        "partial_reason": report.partial_reason,
        "empirical_stab": report.empirical_stab,
        "stab_status": "not stabilized within horizon" if report.empirical_stab is None else "empirical",
        "shape_changes": report.shape_changes,
        "regularity": {str(d): v for d, v in report.regularity.items()},
        "linear_form": None if lf is None else {
            "slope": lf.slope, "intercept": lf.intercept, "onset": lf.onset, "text": str(lf)},
        "shapes": {str(d): [list(p) for p in s] for d, s in report.shapes.items()},
        "unimodality": [
            {
                "position": list(f.position),
                "powers": list(f.powers),
                "interval": None if f.interval is None else list(f.interval),
                "gap": f.gap,
                "violation": f.violation,
                "reaches_horizon": f.reaches_horizon,
            }
            for f in report.unimodality
        ],
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
