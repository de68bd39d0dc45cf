"""Matrix JSON and CSV encodings.

Matrix JSON::

    {"n": N, "domain": "gaussian-rational" | "rational" | "gf" | "float",
     "entries": [[scalar, ...], ...]}

Scalars: rationals as ``"p/q"`` (``"p"`` when q == 1), Gaussian rationals as
``{"re": "p/q", "im": "r/s"}``, prime-field values as ``{"val": n, "p": p}``.
Rectangular matrices additionally carry ``"rows"`` and ``"cols"``.
"""
from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

from .errors import ParseError, ShapeError, SymmetryError
from .matrix import HermitianMatrix, KernelBasis, Matrix
from .scalars import (
    DEFAULT_TOLERANCE,
    GAUSSIAN,
    RATIONAL,
    FloatDomain,
    PrimeField,
    domain_from_name,
)


def domain_json_name(dom) -> str:
    if isinstance(dom, PrimeField):
        return "gf"
    return dom.name


def matrix_to_json(A: Matrix) -> dict:
    enc = A.domain.to_json
    out = {}
    if A.is_square:
        out["n"] = A.nrows
    else:
        out["rows"], out["cols"] = A.shape
    out["domain"] = domain_json_name(A.domain)
    if isinstance(A.domain, PrimeField):
        out["p"] = A.domain.p
    out["entries"] = [[enc(v) for v in r] for r in A.rows]
    return out


def _resolve_domain(obj: dict, tolerance: float, domain_override: str | None):
    name = domain_override or obj.get("domain")
    if name is None:
        return None
    if str(name).lower().startswith("gf"):
        p = obj.get("p")
        if p is None:
            for r in obj.get("entries", []):
                for v in r:
                    if isinstance(v, dict) and "p" in v:
                        p = int(v["p"])
                        break
                if p is not None:
                    break
        return domain_from_name(str(name), tolerance, p=p)
    return domain_from_name(str(name), tolerance)


def _guess_domain(entries):
    for r in entries:
        for v in r:
            if isinstance(v, dict) and "p" in v:
                return PrimeField(int(v["p"]))
            if isinstance(v, float):
                return FloatDomain()
            if isinstance(v, dict) or (isinstance(v, str) and ("i" in v or "j" in v)):
                return GAUSSIAN
    return RATIONAL


def matrix_from_json(obj, tolerance: float = DEFAULT_TOLERANCE, domain: str | None = None,
                     hermitian: bool | None = None) -> Matrix:
    """Decode matrix JSON.

    ``hermitian=None`` returns a :class:`HermitianMatrix` when the data is
    square and Hermitian, a plain :class:`Matrix` otherwise.
    """
    if isinstance(obj, list):
        obj = {"entries": obj}
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ParseError("matrix JSON needs an 'entries' field")
    entries = obj["entries"]
    if not isinstance(entries, list) or not entries or not all(isinstance(r, list) for r in entries):
        raise ParseError("'entries' must be a non-empty list of rows")
    dom = _resolve_domain(obj, tolerance, domain) or _guess_domain(entries)
    if isinstance(dom, FloatDomain) and dom.tolerance != tolerance:
        dom = FloatDomain(tolerance)
    try:
        rows = [[dom.from_json(v) for v in r] for r in entries]
        m = Matrix(rows, dom)
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise ParseError(f"bad matrix entries: {exc}") from exc
    if "n" in obj and not (m.is_square and m.nrows == int(obj["n"])):
        raise ParseError(f"declared n={obj['n']} does not match entries of shape {m.shape}")
    if "rows" in obj and int(obj["rows"]) != m.nrows or "cols" in obj and int(obj["cols"]) != m.ncols:
        raise ParseError("declared rows/cols do not match entries")
    if hermitian is False:
        return m
    try:
        return HermitianMatrix(m.rows, dom)
    except (SymmetryError, ShapeError):
        if hermitian:
            raise
        return m


def matrix_from_csv(text: str, domain: str | None = None, tolerance: float = DEFAULT_TOLERANCE,
                    hermitian: bool | None = None) -> Matrix:
    rows = [[c.strip() for c in r] for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    obj = {"entries": rows, "domain": domain or "rational"}
    return matrix_from_json(obj, tolerance=tolerance, hermitian=hermitian)


def load_matrix(source: str, domain: str | None = None, tolerance: float = DEFAULT_TOLERANCE,
                hermitian: bool | None = None) -> Matrix:
    """Read a matrix from a JSON or CSV file, or stdin when ``source == '-'``."""
    if source == "-":
        text = sys.stdin.read()
        is_csv = not text.lstrip().startswith(("{", "["))
    else:
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc}") from exc
        is_csv = path.suffix.lower() == ".csv"
    if is_csv:
        return matrix_from_csv(text, domain=domain, tolerance=tolerance, hermitian=hermitian)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return matrix_from_json(obj, tolerance=tolerance, domain=domain, hermitian=hermitian)


def dump_matrix(A: Matrix) -> str:
    return json.dumps(matrix_to_json(A))


def kernel_to_json(K: KernelBasis) -> dict:
    return K.to_json()


def scalar_to_json(x, dom) -> object:
    return dom.to_json(dom.coerce(x))
