"""Built-in example documents with their expected results.

``expected`` maps a CLI command to the outcome it must produce: ``exit`` codes
and, for the homology commands, the per-degree dimensions over the stable
entries of the default window.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    document: dict
    expected: dict = field(default_factory=dict)

    def doc(self) -> dict:
        return copy.deepcopy(self.document)


_PRESETS = [
    Preset(
        "abelian3",
        "Abelian Lie algebra of dimension 3 over Q; zero boundary.",
        {
            "ring": {"variables": [], "truncation": None},
            "module": {"rank": 3, "anchor": [[], [], []], "bracket": {}},
            "right_connection": ["0", "0", "0"],
            "top_connection": ["0", "0", "0"],
        },
        {
            "check": {"exit": 0},
            "flatness": {"exit": 0},
            "roundtrip": {"exit": 0},
            "homology": {"exit": 0, "dims": [1, 3, 3, 1]},
            "cohomology": {"exit": 0, "dims": [1, 3, 3, 1]},
            "duality": {"exit": 0},
        },
    ),
    Preset(
        "sl2",
        "sl(2) over Q with basis h, e, f: [h,e] = 2e, [h,f] = -2f, [e,f] = h.",
        {
            "ring": {"variables": [], "truncation": None},
            "module": {
                "rank": 3,
                "anchor": [[], [], []],
                "bracket": {"(1,2)": ["0", "2", "0"], "(1,3)": ["0", "0", "-2"], "(2,3)": ["1", "0", "0"]},
            },
            "right_connection": ["0", "0", "0"],
            "top_connection": ["0", "0", "0"],
        },
        {
            "check": {"exit": 0},
            "flatness": {"exit": 0},
            "roundtrip": {"exit": 0},
            "homology": {"exit": 0, "dims": [1, 0, 0, 1]},
            "cohomology": {"exit": 0, "dims": [1, 0, 0, 1]},
            "duality": {"exit": 0},
        },
    ),
    Preset(
        "heisenberg",
        "Three-dimensional Heisenberg Lie algebra: [e1,e2] = e3.",
        {
            "ring": {"variables": [], "truncation": None},
            "module": {"rank": 3, "anchor": [[], [], []], "bracket": {"(1,2)": ["0", "0", "1"]}},
            "right_connection": ["0", "0", "0"],
            "top_connection": ["0", "0", "0"],
        },
        {
            "check": {"exit": 0},
            "flatness": {"exit": 0},
            "roundtrip": {"exit": 0},
            "homology": {"exit": 0, "dims": [1, 2, 2, 1]},
            "cohomology": {"exit": 0, "dims": [1, 2, 2, 1]},
            "duality": {"exit": 0},
        },
    ),
    Preset(
        "symplectic_plane",
        "Q[x,y] with {x,y} = 1; Koszul boundary on differential forms, zero top connection.",
        {
            "poisson": {"variables": ["x", "y"], "pi": {"(1,2)": "1"}},
            "top_connection": ["0", "0"],
        },
        {
            "check": {"exit": 0},
            "flatness": {"exit": 0},
            "roundtrip": {"exit": 0},
            "homology": {"exit": 0, "dims": [0, 0, 1]},
            "cohomology": {"exit": 0, "dims": [1, 0, 0]},
            "duality": {"exit": 0},
            "poisson": {"exit": 0, "dims": [0, 0, 1]},
        },
    ),
    Preset(
        "sl2_star_linear",
        "Linear Poisson structure on Q[x,y,z]: {x,y} = z, {y,z} = x, {z,x} = y.",
        {
            "poisson": {"variables": ["x", "y", "z"], "pi": {"(1,2)": "z", "(1,3)": "-y", "(2,3)": "x"}},
            "options": {"window": 4},
        },
        {
            "check": {"exit": 0},
            "flatness": {"exit": 0},
            "roundtrip": {"exit": 0},
            "poisson": {"exit": 0},
            "duality": {"exit": 0},
        },
    ),
    Preset(
        "curved_demo",
        "Q[x,y] with commuting d/dx, d/dy and the non-flat right connection r = (y, 0).",
        {
            "ring": {"variables": ["x", "y"], "truncation": None},
            "module": {"rank": 2, "anchor": [["1", "0"], ["0", "1"]], "bracket": {}},
            "right_connection": ["y", "0"],
        },
        {
            "check": {"exit": 0},
            "flatness": {"exit": 1, "witness": [[1, 2], "-1"]},
            "roundtrip": {"exit": 0},
            "homology": {"exit": 1},
        },
    ),
]

PRESETS: dict[str, Preset] = {p.name: p for p in _PRESETS}


def list_presets() -> list[tuple[str, str]]:
    return [(p.name, p.description) for p in _PRESETS]


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None
