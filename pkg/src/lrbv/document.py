"""JSON input documents: parsing and validation into presentation objects.

Schema (all indices 1-based)::

    {"ring": {"variables": [...], "truncation": null | {"power_ideal": [...]}},
     "module": {"rank": n, "anchor": [[poly]], "bracket": {"(i,j)": [poly]}},
     "poisson": {"variables": [...], "pi": {"(i,j)": poly}},
     "right_connection": [poly], "top_connection": [poly],
     "grading": {"variable_weights": [...], "basis_weights": [...]},
     "options": {"window": N}}

Exactly one of ``module`` and ``poisson`` must be present.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from ._expr import ParseError
from .bvgen import RightConnection
from .homology import Grading
from .lralg import LRPresentation
from .poisson import PoissonError, PoissonStructure, canonical_right_connection, default_grading, lr_from_poisson
from .ring import PolyRing
from .topconn import TopConnection, right_from_top, top_from_right


class InputError(ValueError):
    """Malformed or inconsistent input document."""


_PAIR = re.compile(r"^\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")

_TOP_KEYS = {"ring", "module", "poisson", "right_connection", "top_connection", "grading", "options"}


@dataclass
class Problem:
    ring: PolyRing
    P: LRPresentation
    poisson: PoissonStructure | None
    right: RightConnection
    top: TopConnection | None
    grading: Grading | None
    window: int | None
    right_given: bool
    top_given: bool


def _pair_key(key: str, limit: int, what: str) -> tuple[int, int]:
    m = _PAIR.match(key) if isinstance(key, str) else None
    if not m:
        raise InputError(f"{what} key {key!r} is not of the form \"(i,j)\"")
    i, j = int(m.group(1)), int(m.group(2))
    if not (1 <= i < j <= limit):
        raise InputError(f"{what} key {key!r} must satisfy 1 <= i < j <= {limit}")
    return i - 1, j - 1


def _strings(value, what: str) -> list:
    if not isinstance(value, list):
        raise InputError(f"{what} must be a list")
    for v in value:
        if not isinstance(v, (str, int)) or isinstance(v, bool):
            raise InputError(f"{what} entries must be polynomial strings")
    return value


def _poly(ring: PolyRing, text, what: str):
    try:
        return ring.coerce(str(text))
    except (ParseError, ValueError) as exc:
        raise InputError(f"{what}: {exc}") from exc


def _ints(value, what: str) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise InputError(f"{what} must be a list of integers")
    return value


def _ring(block: dict | None, fallback_vars: list | None) -> PolyRing:
    if block is None:
        if fallback_vars is None:
            raise InputError("missing \"ring\" block")
        return PolyRing(tuple(fallback_vars))
    if not isinstance(block, dict):
        raise InputError("\"ring\" must be an object")
    variables = block.get("variables", [])
    if not isinstance(variables, list) or not all(isinstance(v, str) and v.isidentifier() for v in variables):
        raise InputError("ring variables must be a list of identifiers")
    trunc = block.get("truncation")
    bounds = None
    if trunc is not None:
        if not isinstance(trunc, dict) or "power_ideal" not in trunc:
            raise InputError("truncation must be null or {\"power_ideal\": [...]}")
        bounds = _ints(trunc["power_ideal"], "power_ideal")
    try:
        return PolyRing(tuple(variables), None if bounds is None else tuple(bounds))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _module(ring: PolyRing, block) -> LRPresentation:
    if not isinstance(block, dict):
        raise InputError("\"module\" must be an object")
    n = block.get("rank")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InputError("module rank must be a non-negative integer")
    anchor_rows = block.get("anchor", [[] for _ in range(n)] if ring.nvars == 0 else None)
    if not isinstance(anchor_rows, list) or len(anchor_rows) != n:
        raise InputError(f"anchor must have {n} rows")
    anchor = []
    for i, row in enumerate(anchor_rows):
        row = _strings(row, f"anchor row {i + 1}")
        if len(row) != ring.nvars:
            raise InputError(f"anchor row {i + 1} must have {ring.nvars} entries")
        anchor.append([_poly(ring, v, f"anchor[{i + 1}][{j + 1}]") for j, v in enumerate(row)])
    raw = block.get("bracket", {})
    if not isinstance(raw, dict):
        raise InputError("bracket must be an object keyed by \"(i,j)\"")
    bracket = {}
    for key, vec in raw.items():
        i, j = _pair_key(key, n, "bracket")
        vec = _strings(vec, f"bracket {key}")
        if len(vec) != n:
            raise InputError(f"bracket {key} must have {n} entries")
        bracket[(i, j)] = [_poly(ring, v, f"bracket {key}") for v in vec]
    try:
        return LRPresentation(ring, n, anchor, bracket)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _poisson(ring_block, block) -> PoissonStructure:
    if not isinstance(block, dict):
        raise InputError("\"poisson\" must be an object")
    variables = block.get("variables")
    if not isinstance(variables, list):
        raise InputError("poisson block needs a variables list")
    ring = _ring(ring_block, variables)
    if list(ring.variables) != list(variables):
        raise InputError("poisson variables differ from the ring variables")
    raw = block.get("pi", {})
    if not isinstance(raw, dict):
        raise InputError("pi must be an object keyed by \"(i,j)\"")
    pi = {}
    for key, v in raw.items():
        pi[_pair_key(key, ring.nvars, "pi")] = _poly(ring, v, f"pi {key}")
    return PoissonStructure(ring, pi)


def _vector(ring: PolyRing, value, n: int, what: str):
    value = _strings(value, what)
    if len(value) != n:
        raise InputError(f"{what} needs {n} entries, got {len(value)}")
    return [_poly(ring, v, what) for v in value]


def parse_document(doc) -> Problem:
    """Validate a decoded JSON document; raises :class:`InputError` on any problem.

    A Poisson structure that fails the Jacobi identity is still parsed (so that
    ``check`` can report it) but carries a presentation built without
    validation; every other command rejects it.
    """
    if not isinstance(doc, dict):
        raise InputError("input document must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise InputError(f"unknown top-level keys: {sorted(unknown)}")
    if ("module" in doc) == ("poisson" in doc):
        raise InputError("exactly one of \"module\" and \"poisson\" must be present")

    poisson = None
    if "poisson" in doc:
        poisson = _poisson(doc.get("ring"), doc["poisson"])
        ring = poisson.ring
        try:
            P = lr_from_poisson(poisson)
        except PoissonError:
            m = ring.nvars
            P = LRPresentation(
                ring, m, [[poisson.entry(i, j) for j in range(m)] for i in range(m)],
                {(i, j): tuple(p.diff(k) for k in range(m)) for (i, j), p in poisson.pi},
            )
    else:
        ring = _ring(doc.get("ring"), None)
        P = _module(ring, doc["module"])

    right_given = "right_connection" in doc
    top_given = "top_connection" in doc
    right = top = None
    if right_given:
        right = RightConnection(tuple(_vector(ring, doc["right_connection"], P.rank, "right_connection")))
    if top_given:
        if P.rank < 1:
            raise InputError("top_connection needs rank >= 1")
        top = TopConnection(tuple(_vector(ring, doc["top_connection"], P.rank, "top_connection")))
    if right is None:
        if top is not None:
            right = right_from_top(P, top)
        elif poisson is not None:
            right = canonical_right_connection(poisson)
        else:
            right = RightConnection.zero(P)
    if top is None and P.rank >= 1:
        top = top_from_right(P, right)

    grading = None
    if "grading" in doc:
        g = doc["grading"]
        if not isinstance(g, dict):
            raise InputError("grading must be an object")
        vw = _ints(g.get("variable_weights"), "variable_weights")
        bw = _ints(g.get("basis_weights"), "basis_weights")
        if len(vw) != ring.nvars or len(bw) != P.rank:
            raise InputError(f"grading needs {ring.nvars} variable weights and {P.rank} basis weights")
        grading = Grading(tuple(vw), tuple(bw))
    elif poisson is not None and ring.truncation is None:
        grading = default_grading(poisson)

    window = None
    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise InputError("options must be an object")
    if "window" in options:
        window = options["window"]
        if not isinstance(window, int) or isinstance(window, bool) or window < 0:
            raise InputError("window must be a non-negative integer")
    return Problem(ring, P, poisson, right, top, grading, window, right_given, top_given)


def load_document(path: str | Path) -> Problem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return parse_document(doc)
