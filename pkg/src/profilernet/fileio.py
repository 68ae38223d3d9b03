"""Text file formats: network documents, case tables, evaluation reports.

Network format (``.pnet``)
--------------------------
Line-oriented, sectioned; ``#`` lines are comments. Probabilities are
written with repr(float), which round-trips every double exactly.

    profilernet-network 1

    [metadata]
    name = three-node-demo

    [variables]
    # id | display name | category | role | states
    X1 | X1 | OTHER | input | x1_1, x1_2, x1_3

    [edges]
    X1 -> X2

    [cpt X2]
    parents = X1
    0.2 0.8
    0.9 0.1
    0.5 0.5

CPT rows appear in mixed-radix order over the declared parents with the
last parent varying fastest. Rows whose sum is within 1e-6 of 1 are
renormalized on load (tolerates hand-rounded files); rows further out are
rejected with the offending line. Loaded networks must pass full validation.

Case format (``.csv``)
----------------------
Comma-separated; header row of variable ids, one row per case. Cells hold a
state label, or a 1-based state number, or ``?`` for missing (evidence files
only; training loaders reject missing cells).
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
import numpy as np

from .cases import Dataset, MISSING
from .errors import DataFormatError
from .model import (
    Cpt,
    Network,
    NetworkStructure,
    ROW_SUM_RENORM_TOL,
    ROW_SUM_TOL,
    VariableDef,
    assert_valid,
)
from .profiling import EvaluationReport

NETWORK_HEADER = "profilernet-network 1"
REPORT_HEADER = "profilernet-report 1"


# ---------------------------------------------------------------------------
# Network documents
# ---------------------------------------------------------------------------

def serialize_network(net: Network) -> str:
    out = io.StringIO()
    out.write(NETWORK_HEADER + "\n\n")

    out.write("[metadata]\n")
    for key, value in net.metadata.items():
        out.write(f"{key} = {value}\n")
    out.write("\n")

    out.write("[variables]\n")
    out.write("# id | display name | category | role | states\n")
    for v in net.variables:
        if "|" in v.id or "|" in v.display_name:
            raise ValueError(f"cannot serialize variable '{v.id}': '|' is reserved")
        for s in v.states:
            if "|" in s or "," in s:
                raise ValueError(f"cannot serialize state '{s}' of '{v.id}': '|' and ',' are reserved")
        states = ", ".join(v.states)
        out.write(f"{v.id} | {v.display_name} | {v.category} | {v.role} | {states}\n")
    out.write("\n")

    out.write("[edges]\n")
    for p, c in net.structure.edges:
        out.write(f"{p} -> {c}\n")
    out.write("\n")

    for v in net.variables:
        cpt = net.cpt(v.id)
        out.write(f"[cpt {v.id}]\n")
        out.write(("parents = " + ", ".join(cpt.parent_ids)).rstrip() + "\n")
        for row in cpt.rows:
            out.write(" ".join(repr(float(p)) for p in row) + "\n")
        out.write("\n")
    return out.getvalue()


def save_network(net: Network, path: str | Path) -> None:
    Path(path).write_text(serialize_network(net), encoding="utf-8")


def parse_network(text: str, source: str = "<string>") -> Network:
    lines = text.splitlines()

    def fail(line_no: int, message: str):
        raise DataFormatError(message, source, line_no)

    # (line_no, content) with comments/blanks dropped
    content = [
        (i + 1, line.strip())
        for i, line in enumerate(lines)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not content or content[0][1] != NETWORK_HEADER:
        fail(content[0][0] if content else 1, f"expected header '{NETWORK_HEADER}'")

    metadata: dict[str, str] = {}
    variables: list[VariableDef] = []
    edges: list[tuple[str, str]] = []
    cpt_blocks: dict[str, dict] = {}

    section = None
    cpt_var = None
    for line_no, line in content[1:]:
        if line.startswith("["):
            if not line.endswith("]"):
                fail(line_no, f"malformed section header '{line}'")
            name = line[1:-1].strip()
            if name in ("metadata", "variables", "edges"):
                section = name
            elif name.startswith("cpt "):
                section = "cpt"
                cpt_var = name[4:].strip()
                if cpt_var in cpt_blocks:
                    fail(line_no, f"duplicate CPT block for '{cpt_var}'")
                cpt_blocks[cpt_var] = {"parents": None, "rows": [], "line": line_no}
            else:
                fail(line_no, f"unknown section '{name}'")
            continue

        if section == "metadata":
            if "=" not in line:
                fail(line_no, f"metadata line needs 'key = value': '{line}'")
            key, _, value = line.partition("=")
            metadata[key.strip()] = value.strip()
        elif section == "variables":
            parts = [p.strip() for p in line.split("|")]
            if len(parts) != 5:
                fail(line_no, f"variable line needs 5 '|'-separated fields, got {len(parts)}")
            var_id, display, category, role, states_text = parts
            states = tuple(s.strip() for s in states_text.split(",") if s.strip())
            variables.append(VariableDef(var_id, display, category, role, states))
        elif section == "edges":
            if "->" not in line:
                fail(line_no, f"edge line needs 'parent -> child': '{line}'")
            p, _, c = line.partition("->")
            edges.append((p.strip(), c.strip()))
        elif section == "cpt":
            block = cpt_blocks[cpt_var]
            if line.startswith("parents"):
                _, _, value = line.partition("=")
                block["parents"] = tuple(p.strip() for p in value.split(",") if p.strip())
            else:
                if block["parents"] is None:
                    fail(line_no, f"CPT block for '{cpt_var}' must declare parents first")
                try:
                    row = [float(tok) for tok in line.split()]
                except ValueError:
                    fail(line_no, f"CPT row is not numeric: '{line}'")
                block["rows"].append((line_no, row))
        else:
            fail(line_no, f"content before any section: '{line}'")

    by_id = {v.id: v for v in variables}
    cpts = []
    for v in variables:
        if v.id not in cpt_blocks:
            fail(1, f"no [cpt {v.id}] block for variable '{v.id}'")
        block = cpt_blocks[v.id]
        parent_ids = block["parents"] if block["parents"] is not None else ()
        for pid in parent_ids:
            if pid not in by_id:
                fail(block["line"], f"CPT of '{v.id}' names unknown parent '{pid}'")
        cards = tuple(by_id[p].n_states for p in parent_ids)
        rows = np.array([row for _, row in block["rows"]], dtype=np.float64)
        if rows.size:
            rows = _renormalize_rows(rows, v.id, block["rows"], source)
        cpts.append(Cpt(v.id, parent_ids, cards, rows))

    net = Network(
        variables=tuple(variables),
        structure=NetworkStructure(tuple(v.id for v in variables), tuple(edges)),
        cpts=tuple(cpts),
        metadata=metadata,
    )
    return assert_valid(net)


def _renormalize_rows(rows: np.ndarray, var_id: str, row_lines, source: str) -> np.ndarray:
    sums = rows.sum(axis=1)
    off = np.abs(sums - 1.0)
    for i in np.nonzero(off > ROW_SUM_RENORM_TOL)[0]:
        line_no = row_lines[int(i)][0]
        raise DataFormatError(
            f"CPT row {int(i) + 1} of '{var_id}' sums to {sums[i]:.12g}, expected 1",
            source, line_no,
        )
    needs = (off > ROW_SUM_TOL) & (off <= ROW_SUM_RENORM_TOL)
    if needs.any():
        rows = rows.copy()
        rows[needs] = rows[needs] / sums[needs][:, None]
    return rows


def load_network(path: str | Path) -> Network:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataFormatError(f"cannot read network file: {exc}", str(path)) from exc
    return parse_network(text, source=str(path))


# ---------------------------------------------------------------------------
# Case tables
# ---------------------------------------------------------------------------

def resolve_state(var: VariableDef, token, *, line_anchor=None) -> int:
    """Map a cell (state label, or 1-based state number) to a state index."""
    if isinstance(token, (int, np.integer)) and not isinstance(token, bool):
        number = int(token)
    else:
        text = str(token).strip()
        if text in var.states:
            return var.states.index(text)
        try:
            number = int(text)
        except ValueError:
            raise DataFormatError(
                f"'{token}' is neither a state of '{var.id}' {list(var.states)} nor a state number",
                *(line_anchor or (None, None)),
            ) from None
    if not 1 <= number <= var.n_states:
        raise DataFormatError(
            f"state number {number} out of range 1..{var.n_states} for '{var.id}'",
            *(line_anchor or (None, None)),
        )
    return number - 1


def save_cases(dataset: Dataset, net: Network, path: str | Path, labels: bool = True) -> None:
    """Write a case table; cells are state labels (default) or 1-based numbers."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(dataset.variables)
        states = {v: net.variable(v).states for v in dataset.variables}
        for row in dataset.codes:
            cells = []
            for var_id, code in zip(dataset.variables, row):
                if code == MISSING:
                    cells.append("?")
                elif labels:
                    cells.append(states[var_id][code])
                else:
                    cells.append(str(int(code) + 1))
            writer.writerow(cells)


def load_cases(path: str | Path, net: Network, allow_missing: bool = False) -> Dataset:
    """Read a case table; every header id and cell must resolve against the
    network. ``?`` cells are accepted only when ``allow_missing``."""
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataFormatError(f"cannot read case file: {exc}", str(path)) from exc
    source = str(path)
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError("case file is empty (no header row)", source, 1) from None
        header = [h.strip() for h in header]
        known = set(net.var_ids)
        for col, var_id in enumerate(header):
            if var_id not in known:
                raise DataFormatError(f"header column {col + 1} '{var_id}' is not a network variable",
                                      source, 1)
        if len(set(header)) != len(header):
            raise DataFormatError("header repeats a variable id", source, 1)

        rows = []
        for line_no, cells in enumerate(reader, start=2):
            if not cells:
                continue
            if len(cells) != len(header):
                raise DataFormatError(
                    f"row has {len(cells)} cells, header has {len(header)}", source, line_no)
            codes = []
            for var_id, cell in zip(header, cells):
                cell = cell.strip()
                if cell == "?":
                    if not allow_missing:
                        raise DataFormatError(
                            f"missing value for '{var_id}' not allowed here", source, line_no)
                    codes.append(MISSING)
                else:
                    codes.append(resolve_state(net.variable(var_id), cell,
                                               line_anchor=(source, line_no)))
            rows.append(codes)

    codes = np.array(rows, dtype=np.int16).reshape(len(rows), len(header))
    return Dataset(header, codes)


# ---------------------------------------------------------------------------
# Evaluation reports
# ---------------------------------------------------------------------------

def report_to_text(report: EvaluationReport) -> str:
    out = io.StringIO()
    out.write(REPORT_HEADER + "\n\n")
    out.write("[metadata]\n")
    for key, value in report.metadata.items():
        out.write(f"{key} = {value}\n")
    out.write("\n[overall]\n")
    out.write(f"cases_evaluated = {report.n_cases}\n")
    out.write(f"cases_impossible = {report.n_impossible}\n")
    out.write(f"macro_accuracy = {report.macro_accuracy:.4f}\n")
    for var_id, e in report.per_variable.items():
        out.write(f"\n[variable {var_id}]\n")
        out.write(f"n_cases = {e.n_cases}\n")
        out.write(f"n_correct = {e.n_correct}\n")
        out.write(f"accuracy = {e.accuracy:.4f}\n")
        out.write(f"mean_confidence = {e.mean_confidence:.4f}\n")
        out.write("# confusion: one line per predicted state, columns = observed states\n")
        for s, label in enumerate(e.states):
            counts = " ".join(str(int(c)) for c in e.confusion[s])
            out.write(f"confusion {label} = {counts}\n")
    return out.getvalue()


def report_to_json(report: EvaluationReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=False) + "\n"


def save_report(report: EvaluationReport, text_path: str | Path | None = None,
                json_path: str | Path | None = None) -> None:
    if text_path is not None:
        Path(text_path).write_text(report_to_text(report), encoding="utf-8")
    if json_path is not None:
        Path(json_path).write_text(report_to_json(report), encoding="utf-8")
