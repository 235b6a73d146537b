"""Verdict and report containers, plus canonical JSON serialization.

Reports are plain dataclasses.  ``to_jsonable`` converts them (and numpy
scalars/arrays) into JSON-safe structures; ``canonical_json`` renders with
sorted keys so that identical runs produce byte-identical files.  Wall-clock
timings are deliberately kept out of the JSON payload (they go to the CSV
table instead) for exactly that reason.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, is_dataclass

import numpy as np

HOLDS = "holds-up-to-sampling"
FAILS = "fails"

DENSE = "dense-at-resolution"
NOT_DENSE = "not-dense"
INCONCLUSIVE = "inconclusive"


@dataclass
class ConditionVerdict:
    """Outcome of a single generator-condition check.

    ``condition`` is one of ``density``, ``interior-inclusion``,
    ``hull-inclusion``, ``convex-image``, ``subset-cover``.  A ``fails``
    status always carries a witness with a quantitative violation margin.
    """

    condition: str
    status: str
    witness: dict | None = None
    parameters: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return self.status == FAILS


@dataclass
class DensityReport:
    """Per-iteration orbit coverage of the hull grid, with a final verdict.

    ``rows`` hold (n, set_size, covering_radius) dicts; ``verdict`` is
    ``dense-at-resolution``, ``not-dense``, or ``inconclusive`` when neither
    threshold fires within the iteration budget.
    """

    rows: list
    verdict: str
    resolution: float
    prune_resolution: float
    converged_at: int | None = None
    parameters: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    # not serialized: raw orbit states for rendering, per-step wall times
    states: list = field(default_factory=list, repr=False)
    timings_ms: list = field(default_factory=list, repr=False)

    _json_exclude = ("states", "timings_ms")

    @property
    def final_radius(self) -> float:
        return self.rows[-1]["covering_radius"]


@dataclass
class RunReport:
    """Everything one scenario run produced, minus wall-clock noise."""

    scenario: dict
    results: list
    consistency: dict | None = None
    flags: list = field(default_factory=list)
    seed: int = 42
    version: str = ""


def to_jsonable(obj):
    """Recursively convert dataclasses / numpy values to JSON-safe types."""
    if is_dataclass(obj) and not isinstance(obj, type):
        exclude = getattr(obj, "_json_exclude", ())
        return {
            f.name: to_jsonable(getattr(obj, f.name))
            for f in fields(obj)
            if f.name not in exclude
        }
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and obj == 0.0:
        return 0.0  # collapse -0.0
    return obj


def canonical_json(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed separators, newline-terminated."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2,
                      separators=(",", ": ")) + "\n"
