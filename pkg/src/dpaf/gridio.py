"""CSV and JSON serialization for grids and run summaries.

Numbers are written with 17 significant digits, enough to round-trip a
double exactly, so rerunning an experiment with the same seed produces
byte-identical files.  Two CSV schemas exist:

* complex realization grids:   header ``k,q,re,im,sq``
* expectation grids:           header ``k,q,value`` or ``k,q,value,stderr``

both in row-major (k outer, q inner) order with '#' comment lines in
front carrying orientation notes and, for expectations, the provenance.
A dense variant writes the squared magnitudes (or values) as an N-by-N
comma matrix for spreadsheet use; the long forms are what the readers
accept.
"""

import json

import numpy as np

from .ambiguity import DpafGrid
from .theory import ExpectationGrid, PROVENANCES

_FMT = "%.17g"


def _header_lines(kind: str, provenance: str | None = None) -> list[str]:
    lines = ["# %s" % kind, "# rows: delay k; cols: Doppler q; 0-based"]
    if provenance is not None:
        lines.insert(1, "# provenance: %s" % provenance)
    return lines


def write_complex_grid_csv(path: str, grid: DpafGrid, dense: bool = False) -> None:
    """Write a realized complex grid, long form or dense squared form."""
    vals = grid.values
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if dense:
            for line in _header_lines("periodic ambiguity grid, squared magnitudes, dense"):
                fh.write(line + "\n")
            for row in np.abs(vals) ** 2:
                fh.write(",".join(_FMT % v for v in row) + "\n")
            return
        for line in _header_lines("periodic ambiguity grid, complex values"):
            fh.write(line + "\n")
        fh.write("k,q,re,im,sq\n")
        # scalar abs() can differ from the array ufunc in the last ulp;
        # use the array path so the column matches grid.sq bitwise
        sqs = np.abs(vals) ** 2
        for k in range(grid.n):
            for q in range(grid.n):
                z = vals[k, q]
                fh.write("%d,%d,%s,%s,%s\n"
                         % (k, q, _FMT % z.real, _FMT % z.imag, _FMT % sqs[k, q]))


def write_expectation_csv(path: str, grid: ExpectationGrid, dense: bool = False) -> None:
    """Write an expectation grid, long form or dense value matrix."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if dense:
            for line in _header_lines("expected squared ambiguity grid, dense", grid.provenance):
                fh.write(line + "\n")
            for row in grid.values:
                fh.write(",".join(_FMT % v for v in row) + "\n")
            return
        for line in _header_lines("expected squared ambiguity grid", grid.provenance):
            fh.write(line + "\n")
        if grid.stderr is None:
            fh.write("k,q,value\n")
            for k in range(grid.n):
                for q in range(grid.n):
                    fh.write("%d,%d,%s\n" % (k, q, _FMT % grid.values[k, q]))
        else:
            fh.write("k,q,value,stderr\n")
            for k in range(grid.n):
                for q in range(grid.n):
                    fh.write("%d,%d,%s,%s\n"
                             % (k, q, _FMT % grid.values[k, q], _FMT % grid.stderr[k, q]))


def read_expectation_csv(path: str) -> ExpectationGrid:
    """Read a long-form grid CSV back into an ExpectationGrid.

    Accepts both schemas; a complex realization file comes back as its
    squared magnitudes.  Files without a recognized provenance comment
    are labeled "monte_carlo" when they carry stderr and
    "closed_form_general" otherwise.  Dense files are presentation
    output and are not parsed.
    """
    provenance = None
    header = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                note = line[1:].strip()
                if note.startswith("provenance:"):
                    provenance = note.split(":", 1)[1].strip()
                continue
            if header is None:
                header = [c.strip() for c in line.split(",")]
                if header not in (["k", "q", "value"], ["k", "q", "value", "stderr"],
                                  ["k", "q", "re", "im", "sq"]):
                    raise ValueError("%s:%d: unrecognized grid header %r" % (path, lineno, line))
                continue
            parts = line.split(",")
            if len(parts) != len(header):
                raise ValueError("%s:%d: expected %d fields, got %d"
                                 % (path, lineno, len(header), len(parts)))
            rows.append([float(p) for p in parts])
    if header is None or not rows:
        raise ValueError("%s: no grid rows found" % path)
    data = np.array(rows)
    n = int(data[:, 0].max()) + 1
    if data.shape[0] != n * n or int(data[:, 1].max()) + 1 != n:
        raise ValueError("%s: grid is not a complete %d-point square" % (path, n))
    values = np.zeros((n, n))
    stderr = np.zeros((n, n)) if header[-1] == "stderr" else None
    kk = data[:, 0].astype(int)
    qq = data[:, 1].astype(int)
    if header[2] == "re":
        values[kk, qq] = data[:, 4]
    else:
        values[kk, qq] = data[:, 2]
        if stderr is not None:
            stderr[kk, qq] = data[:, 3]
    if provenance not in PROVENANCES:
        provenance = "monte_carlo" if stderr is not None else "closed_form_general"
    return ExpectationGrid(n=n, values=values, provenance=provenance, stderr=stderr)


def write_json(path: str, obj) -> None:
    """Serialize a report dict deterministically (sorted keys, repr floats)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
