"""Scenario-driven experiment runner.

A scenario is a small TOML document naming a generator, a weight vector,
a finite seed set, and a list of checks to run.  ``run_scenario`` executes
the checks in declared order and (optionally) writes a canonical JSON
report, a per-iteration density CSV, and a 2-D SVG plot of the orbit.

The console entry point (``qamlab``) wires this into three subcommands:
``run`` for a scenario file, ``gallery`` for the shipped examples, and
``check`` for config validation without execution.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - Python < 3.11
    import tomli as tomllib

from .conditions import (check_density, check_hull_inclusion,
                         check_interior_inclusion, consistency_report,
                         subset_cover_property)
from .errors import (DomainViolation, NotKDimensional, NumericalFailure,
                     OrbitCapExceeded, PointOutsideImage, ResolutionTooCoarse,
                     ScenarioError, SubsetBudgetExceeded, ToleranceTooTight)
from .generators import check_convex_image, make_generator
from .geometry import as_points, bbox_diagonal, convex_hull
from .means import (DEFAULT_MAX_POINTS, DEFAULT_SEED, DEFAULT_TUPLE_BUDGET,
                    Weights, is_fixed_point)
from .reports import (FAILS, HOLDS, ConditionVerdict, RunReport,
                      canonical_json)

CHECK_TOKENS = ("density", "interior-inclusion", "hull-inclusion",
                "subset-cover", "convex-image", "fixed-point")

SET_KINDS = ("points", "box-corners", "sampled-region")

_SET_SAMPLE_STREAM = 6  # rng stream id for sampled-region draws

# rendering caps: SVG files stay small even for capped 200k-point orbits
_RENDER_POINT_CAP = 4000
_CANVAS_WIDTH = 640.0


@dataclass
class Scenario:
    """A parsed, validated experiment description.

    Length-scale parameters (``prune_resolution``, ``grid_resolution``,
    ``margin``) stay ``None`` until the seed set is built, then default to
    the usual fractions of its bounding-box diagonal.
    """

    name: str
    dimension: int
    generator: dict
    weights: list
    set_spec: dict
    iterations: int = 8
    prune_resolution: float | None = None
    grid_resolution: float | None = None
    margin: float | None = None
    seed: int = DEFAULT_SEED
    max_points: int = DEFAULT_MAX_POINTS
    tuple_budget: int = DEFAULT_TUPLE_BUDGET
    checks: tuple = ("density",)
    non_compact_surrogate: bool = False
    outputs: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _expect(table, key, kinds, where, required=True, default=None):
    if key not in table:
        if required:
            raise ScenarioError(f"{where}.{key} is required")
        return default
    value = table[key]
    if kinds is bool:
        # bool is an int subclass; force an exact check so `seed = true`
        # cannot sneak through an integer slot (and vice versa)
        if not isinstance(value, bool):
            raise ScenarioError(f"{where}.{key} must be a boolean")
        return value
    if isinstance(value, bool) and kinds in (int, float, (int, float)):
        raise ScenarioError(f"{where}.{key} must be a number")
    if not isinstance(value, kinds):
        raise ScenarioError(f"{where}.{key} has the wrong type "
                            f"({type(value).__name__})")
    return value


def _vector(table, key, length, where, required=True):
    raw = _expect(table, key, list, where, required=required)
    if raw is None:
        return None
    if len(raw) != length or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool)
            for v in raw):
        raise ScenarioError(f"{where}.{key} must be a list of {length} numbers")
    return [float(v) for v in raw]


def parse_scenario(text: str) -> Scenario:
    """Parse a TOML scenario document into a validated ``Scenario``."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"invalid TOML: {exc}") from exc

    known = {"name", "dimension", "generator", "weights", "set", "run",
             "outputs"}
    for key in doc:
        if key not in known:
            raise ScenarioError(f"unknown top-level key '{key}'")

    name = _expect(doc, "name", str, "scenario", required=False,
                   default="scenario")
    if not name:
        raise ScenarioError("scenario.name must be a non-empty string")
    dimension = _expect(doc, "dimension", int, "scenario")
    if dimension < 1:
        raise ScenarioError("scenario.dimension must be >= 1")

    gen_table = _expect(doc, "generator", dict, "scenario")
    gen_name = _expect(gen_table, "name", str, "[generator]")
    gen_params = {k: v for k, v in gen_table.items() if k != "name"}

    w_table = _expect(doc, "weights", dict, "scenario")
    weights = _expect(w_table, "values", list, "[weights]")
    if len(weights) < 2 or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool)
            for v in weights):
        raise ScenarioError("[weights].values must list at least two numbers")
    weights = [float(v) for v in weights]

    set_spec = _parse_set_spec(_expect(doc, "set", dict, "scenario"),
                               dimension)

    run = doc.get("run", {})
    if not isinstance(run, dict):
        raise ScenarioError("[run] must be a table")
    iterations = _expect(run, "iterations", int, "[run]", required=False,
                         default=8)
    if iterations < 0:
        raise ScenarioError("[run].iterations must be >= 0")
    seed = _expect(run, "seed", int, "[run]", required=False,
                   default=DEFAULT_SEED)
    max_points = _expect(run, "max_points", int, "[run]", required=False,
                         default=DEFAULT_MAX_POINTS)
    tuple_budget = _expect(run, "tuple_budget", int, "[run]", required=False,
                           default=DEFAULT_TUPLE_BUDGET)
    if max_points < 1 or tuple_budget < 1:
        raise ScenarioError("[run].max_points and [run].tuple_budget "
                            "must be positive")

    lengths = {}
    for key, low in (("prune_resolution", 0.0), ("grid_resolution", None),
                     ("margin", None)):
        val = _expect(run, key, (int, float), "[run]", required=False)
        if val is not None:
            val = float(val)
            if (low is not None and val < low) or (low is None and val <= 0):
                raise ScenarioError(f"[run].{key} is out of range")
        lengths[key] = val

    checks = run.get("checks", ["density"])
    if (not isinstance(checks, list) or not checks
            or len(set(checks)) != len(checks)
            or any(c not in CHECK_TOKENS for c in checks)):
        raise ScenarioError(
            f"[run].checks must be distinct tokens from {CHECK_TOKENS}")

    surrogate = _expect(run, "non_compact_surrogate", bool, "[run]",
                        required=False, default=False)

    outputs = doc.get("outputs", {})
    if not isinstance(outputs, dict) or any(
            k not in ("json", "csv", "svg") or not isinstance(v, str)
            for k, v in outputs.items()):
        raise ScenarioError("[outputs] accepts string keys json/csv/svg only")

    return Scenario(name=name, dimension=dimension,
                    generator={"name": gen_name, **gen_params},
                    weights=weights, set_spec=set_spec,
                    iterations=iterations,
                    prune_resolution=lengths["prune_resolution"],
                    grid_resolution=lengths["grid_resolution"],
                    margin=lengths["margin"], seed=seed,
                    max_points=max_points, tuple_budget=tuple_budget,
                    checks=tuple(checks), non_compact_surrogate=surrogate,
                    outputs=dict(outputs))


def _parse_set_spec(table: dict, dimension: int) -> dict:
    kind = _expect(table, "kind", str, "[set]")
    if kind not in SET_KINDS:
        raise ScenarioError(f"[set].kind must be one of {SET_KINDS}")
    spec = {"kind": kind}

    if kind == "points":
        pts = _expect(table, "points", list, "[set]")
        if not pts:
            raise ScenarioError("[set].points must be non-empty")
        for i, p in enumerate(pts):
            if (not isinstance(p, list) or len(p) != dimension
                    or not all(isinstance(v, (int, float))
                               and not isinstance(v, bool) for v in p)):
                raise ScenarioError(
                    f"[set].points[{i}] must be a list of "
                    f"{dimension} numbers")
        spec["points"] = [[float(v) for v in p] for p in pts]
        return spec

    low = _vector(table, "low", dimension, "[set]")
    high = _vector(table, "high", dimension, "[set]")
    if any(h <= l for l, h in zip(low, high)):
        raise ScenarioError("[set].low must be strictly below [set].high")
    spec["low"], spec["high"] = low, high
    if kind == "box-corners":
        return spec

    pitch = _expect(table, "pitch", (int, float), "[set]", required=False)
    count = _expect(table, "count", int, "[set]", required=False)
    if (pitch is None) == (count is None):
        raise ScenarioError(
            "[set] sampled-region needs exactly one of pitch / count")
    if pitch is not None:
        if pitch <= 0:
            raise ScenarioError("[set].pitch must be positive")
        spec["pitch"] = float(pitch)
    else:
        if count < 1:
            raise ScenarioError("[set].count must be >= 1")
        spec["count"] = count
    spec["seed"] = _expect(table, "seed", int, "[set]", required=False)

    center = _vector(table, "exclude_center", dimension, "[set]",
                     required=False)
    radius = _expect(table, "exclude_radius", (int, float), "[set]",
                     required=False)
    if (center is None) != (radius is None):
        raise ScenarioError("[set] exclusion needs both exclude_center "
                            "and exclude_radius")
    if center is not None:
        if radius < 0:
            raise ScenarioError("[set].exclude_radius must be >= 0")
        spec["exclude_center"] = center
        spec["exclude_radius"] = float(radius)
    return spec


def load_scenario(path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    return parse_scenario(text)


# ---------------------------------------------------------------------------
# seed-set construction
# ---------------------------------------------------------------------------

def build_point_set(spec: dict, dimension: int, run_seed: int) -> np.ndarray:
    """Materialize the [set] table of a scenario as an (n, k) array."""
    kind = spec["kind"]
    if kind == "points":
        return np.asarray(spec["points"], dtype=float)

    low = np.asarray(spec["low"], dtype=float)
    high = np.asarray(spec["high"], dtype=float)
    if kind == "box-corners":
        corners = itertools.product(*((l, h) for l, h in zip(low, high)))
        return np.array(list(corners), dtype=float)

    if "pitch" in spec:
        pitch = spec["pitch"]
        axes = []
        for l, h in zip(low, high):
            steps = int(round((h - l) / pitch))
            axes.append(np.linspace(l, h, max(steps, 1) + 1))
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
    else:
        seed = spec["seed"] if spec.get("seed") is not None else run_seed
        rng = np.random.default_rng([seed, _SET_SAMPLE_STREAM])
        pts = low + rng.random((spec["count"], dimension)) * (high - low)

    if "exclude_center" in spec:
        center = np.asarray(spec["exclude_center"], dtype=float)
        radius = spec["exclude_radius"]
        dist = np.linalg.norm(pts - center, axis=1)
        pts = pts[dist > radius * (1.0 + 1e-9) + 1e-12]
        if len(pts) == 0:
            raise ScenarioError("[set] exclusion removed every sample point")
    return pts


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

def _resolve_lengths(scenario: Scenario, S: np.ndarray) -> dict:
    diag = bbox_diagonal(S)
    delta = scenario.prune_resolution
    if delta is None:
        delta = 1e-3 * diag
    res = scenario.grid_resolution
    if res is None:
        res = 0.02 * diag
    margin = scenario.margin
    if margin is None:
        margin = 1e-6 * max(diag, 1.0)
    return {"prune_resolution": delta, "grid_resolution": res,
            "margin": margin}


def run_scenario(scenario: Scenario, out_dir=None) -> RunReport:
    """Execute the scenario's checks in declared order.

    When ``out_dir`` is given, the requested artifacts (canonical JSON
    report, density CSV, orbit SVG) are written under it; the JSON report
    contains no wall-clock data, so re-running with the same seed
    reproduces it byte for byte.
    """
    gen_params = dict(scenario.generator)
    gen_name = gen_params.pop("name")
    try:
        gen = make_generator(gen_name, scenario.dimension, **gen_params)
        w = Weights(scenario.weights)
    except (ValueError, TypeError) as exc:
        raise ScenarioError(str(exc)) from exc

    S = build_point_set(scenario.set_spec, scenario.dimension, scenario.seed)
    inside = gen.domain.contains(S)
    if not inside.all():
        bad = S[~inside][0]
        raise DomainViolation(
            f"{int((~inside).sum())} seed point(s) outside the domain of "
            f"{gen.name}, e.g. {bad.tolist()}")

    lengths = _resolve_lengths(scenario, S)
    delta = lengths["prune_resolution"]
    res = lengths["grid_resolution"]
    margin = lengths["margin"]
    seed = scenario.seed

    results = []
    density = interior = hull_incl = None
    for token in scenario.checks:
        if token == "density":
            density = check_density(
                gen, w, S, scenario.iterations, res, delta,
                max_points=scenario.max_points,
                tuple_budget=scenario.tuple_budget, seed=seed)
            results.append({"check": token, "report": density})
        elif token == "interior-inclusion":
            interior = check_interior_inclusion(gen, S, margin=margin,
                                                seed=seed)
            results.append({"check": token, "report": interior})
        elif token == "hull-inclusion":
            hull_incl = check_hull_inclusion(gen, S, seed=seed)
            results.append({"check": token, "report": hull_incl})
        elif token == "subset-cover":
            results.append({"check": token, "report": subset_cover_property(
                gen, S, margin=margin, seed=seed)})
        elif token == "convex-image":
            results.append({"check": token, "report": check_convex_image(
                gen, rng_seed=seed)})
        else:  # fixed-point
            fixed = is_fixed_point(gen, w, S, delta,
                                   tuple_budget=scenario.tuple_budget,
                                   seed=seed)
            results.append({"check": token, "report": ConditionVerdict(
                condition="fixed-point",
                status=HOLDS if fixed else FAILS,
                parameters={"delta": delta, "seed": seed})})

    consistency = None
    flags = []
    if density is not None and interior is not None and hull_incl is not None:
        joined = consistency_report(
            gen, w, S, non_compact_surrogate=scenario.non_compact_surrogate,
            density=density, interior=interior, hull_inclusion=hull_incl,
            margin=margin, seed=seed)
        # the join may upgrade the hull verdict with an adopted witness;
        # keep the per-check listing in sync with the joined view
        hull_incl = joined["reports"]["hull-inclusion"]
        for entry in results:
            if entry["check"] == "hull-inclusion":
                entry["report"] = hull_incl
        joined.pop("reports")
        flags = list(joined.get("flags", []))
        consistency = joined
    elif scenario.non_compact_surrogate:
        flags = ["non-compact-surrogate"]

    echo = {
        "name": scenario.name,
        "dimension": scenario.dimension,
        "generator": gen.describe(),
        "weights": list(scenario.weights),
        "set": {**scenario.set_spec, "size": int(len(S))},
        "run": {"iterations": scenario.iterations, "seed": seed,
                "max_points": scenario.max_points,
                "tuple_budget": scenario.tuple_budget,
                "checks": list(scenario.checks),
                "non_compact_surrogate": scenario.non_compact_surrogate,
                **lengths},
    }

    if out_dir is not None and scenario.dimension != 2 and density is not None:
        flags.append("orbit-plot-unsupported-dimension: "
                     "point dump written as CSV instead")

    from . import __version__
    report = RunReport(scenario=echo, results=results,
                       consistency=consistency, flags=flags, seed=seed,
                       version=__version__)

    if out_dir is not None:
        _write_outputs(report, scenario, S, density, Path(out_dir))
    return report


def output_paths(scenario: Scenario, out_dir) -> dict:
    """Artifact paths a run with this scenario would write under out_dir."""
    out = Path(out_dir)
    names = scenario.outputs
    return {
        "json": out / names.get("json", f"{scenario.name}-report.json"),
        "csv": out / names.get("csv", f"{scenario.name}-density.csv"),
        "svg": out / names.get("svg", f"{scenario.name}-orbit.svg"),
    }


def _write_outputs(report, scenario, S, density, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = output_paths(scenario, out_dir)

    if density is not None:
        with open(paths["csv"], "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "set_size", "covering_radius", "wall_ms"])
            for row, ms in zip(density.rows, density.timings_ms):
                writer.writerow([row["n"], row["set_size"],
                                 f"{row['covering_radius']:.16e}",
                                 f"{ms:.3f}"])
        witnesses = _collect_witnesses(report)
        if scenario.dimension == 2:
            render_orbit_svg(density.states, convex_hull(S), paths["svg"],
                             witnesses=witnesses)
        else:
            _write_point_dump(density.states,
                              paths["svg"].with_suffix(".points.csv"))

    paths["json"].write_text(canonical_json(report))


def _collect_witnesses(report) -> list:
    pts = []
    for entry in report.results:
        rep = entry["report"]
        witness = getattr(rep, "witness", None)
        if witness and "point" in witness:
            pts.append(np.asarray(witness["point"], dtype=float))
    return pts


def _write_point_dump(states, path: Path):
    k = states[0].set.points.shape[1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i}" for i in range(k)] + ["generation"])
        for st in states:
            for p in st.set.points:
                writer.writerow([f"{v:.16e}" for v in p] + [st.n])


# ---------------------------------------------------------------------------
# SVG rendering
# ---------------------------------------------------------------------------

def _generation_color(i: int, n: int) -> str:
    # light steel blue fading to deep navy as the orbit fills in
    t = i / max(n, 1)
    r, g, b = (int(round(a + t * (b_ - a)))
               for a, b_ in ((158, 8), (202, 48), (225, 107)))
    return f"#{r:02x}{g:02x}{b:02x}"


def _thin(points: np.ndarray, cap: int) -> np.ndarray:
    if len(points) <= cap:
        return points
    idx = np.linspace(0, len(points) - 1, cap).astype(int)
    return points[idx]


def render_orbit_svg(states, hull, path, witnesses=()):
    """Scatter the orbit generations over the hull outline, oldest first.

    Only 2-D data can be drawn; the viewport is the hull bounding box with
    5% padding, and each generation is capped at a few thousand markers so
    files stay small.
    """
    if hull.dim != 2:
        raise ValueError("SVG rendering needs 2-D data")
    lo, hi = hull.bbox
    span = max(float((hi - lo).max()), 1e-9)
    pad = 0.05 * span
    wx0, wy0 = lo[0] - pad, lo[1] - pad
    ww = (hi[0] - lo[0]) + 2 * pad
    wh = (hi[1] - lo[1]) + 2 * pad
    scale = _CANVAS_WIDTH / ww
    height = wh * scale

    def to_px(p):
        return (p[0] - wx0) * scale, (wy0 + wh - p[1]) * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{_CANVAS_WIDTH:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {_CANVAS_WIDTH:.2f} {height:.2f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]

    ring = " ".join("{:.2f},{:.2f}".format(*to_px(v)) for v in hull.vertices)
    parts.append(f'<polygon points="{ring}" fill="none" stroke="#888888" '
                 'stroke-width="1.5"/>')

    n_max = max(st.n for st in states)
    radius = 2.0
    for st in states:
        color = _generation_color(st.n, n_max)
        group = [f'<g fill="{color}" fill-opacity="0.8">']
        for p in _thin(st.set.points, _RENDER_POINT_CAP):
            x, y = to_px(p)
            group.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius}"/>')
        group.append("</g>")
        parts.append("\n".join(group))

    arm = 6.0
    for wpt in witnesses:
        x, y = to_px(np.asarray(wpt, dtype=float))
        parts.append(
            f'<g stroke="#d62728" stroke-width="2">'
            f'<line x1="{x - arm:.2f}" y1="{y - arm:.2f}" '
            f'x2="{x + arm:.2f}" y2="{y + arm:.2f}"/>'
            f'<line x1="{x - arm:.2f}" y1="{y + arm:.2f}" '
            f'x2="{x + arm:.2f}" y2="{y - arm:.2f}"/></g>')

    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------

def _gallery_root():
    from importlib import resources
    return resources.files("qamlab") / "gallery"


def _gallery_scenarios() -> list:
    files = [p for p in _gallery_root().iterdir() if p.name.endswith(".toml")]
    return sorted(files, key=lambda p: p.name)


def _summarize(report: RunReport) -> str:
    bits = []
    for entry in report.results:
        rep = entry["report"]
        verdict = getattr(rep, "verdict", None) or getattr(rep, "status", "?")
        bits.append(f"{entry['check']}={verdict}")
    line = f"{report.scenario['name']}: " + " ".join(bits)
    if report.consistency is not None:
        state = ("THEOREM-VIOLATION" if report.consistency["theorem_violation"]
                 else "consistent")
        line += f" [{state}]"
    if report.flags:
        line += " flags: " + ", ".join(report.flags)
    return line


def _cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario.seed = args.seed
    if args.iterations is not None:
        scenario.iterations = args.iterations
    report = run_scenario(scenario, out_dir=args.out_dir)
    print(_summarize(report))
    paths = output_paths(scenario, args.out_dir)
    wrote = [str(paths["json"])]
    if any(e["check"] == "density" for e in report.results):
        wrote.append(str(paths["csv"]))
        if scenario.dimension == 2:
            wrote.append(str(paths["svg"]))
    print("wrote " + ", ".join(wrote))
    return 0


def _cmd_gallery(args) -> int:
    files = _gallery_scenarios()
    if not args.run and not args.all:
        for f in files:
            scenario = parse_scenario(f.read_text())
            print(f"{scenario.name:<24} {scenario.generator['name']:<20} "
                  f"checks: {', '.join(scenario.checks)}")
        return 0

    wanted = files
    if args.run:
        wanted = [f for f in files
                  if parse_scenario(f.read_text()).name == args.run]
        if not wanted:
            names = ", ".join(parse_scenario(f.read_text()).name
                              for f in files)
            raise ScenarioError(
                f"no gallery scenario named '{args.run}' (have: {names})")
    for f in wanted:
        scenario = parse_scenario(f.read_text())
        report = run_scenario(scenario, out_dir=args.out_dir)
        print(_summarize(report))
    return 0


def _cmd_check(args) -> int:
    scenario = load_scenario(args.scenario)
    gen_params = dict(scenario.generator)
    gen_name = gen_params.pop("name")
    try:
        gen = make_generator(gen_name, scenario.dimension, **gen_params)
        Weights(scenario.weights)
    except (ValueError, TypeError) as exc:
        raise ScenarioError(str(exc)) from exc
    S = build_point_set(scenario.set_spec, scenario.dimension, scenario.seed)
    as_points(S, scenario.dimension)
    print(f"ok: {scenario.name} (k={scenario.dimension}, |S|={len(S)}, "
          f"generator={gen.name}, checks: {', '.join(scenario.checks)})")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qamlab",
        description="Orbit density and generator-condition experiments "
                    "for iterated quasi-arithmetic means.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario file")
    p_run.add_argument("scenario", help="path to a scenario TOML file")
    p_run.add_argument("--seed", type=int, default=None,
                       help="override [run].seed")
    p_run.add_argument("--iterations", type=int, default=None,
                       help="override [run].iterations")
    p_run.add_argument("--out-dir", default=".",
                       help="directory for report/CSV/SVG outputs")
    p_run.set_defaults(func=_cmd_run)

    p_gal = sub.add_parser("gallery",
                           help="list or run the shipped example scenarios")
    p_gal.add_argument("--run", metavar="NAME", default=None,
                       help="run the named gallery scenario")
    p_gal.add_argument("--all", action="store_true",
                       help="run every gallery scenario")
    p_gal.add_argument("--out-dir", default=".",
                       help="directory for report/CSV/SVG outputs")
    p_gal.set_defaults(func=_cmd_gallery)

    p_chk = sub.add_parser("check",
                           help="validate a scenario file without running it")
    p_chk.add_argument("scenario", help="path to a scenario TOML file")
    p_chk.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NotKDimensional, ResolutionTooCoarse, SubsetBudgetExceeded) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NumericalFailure, ToleranceTooTight, OrbitCapExceeded) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (DomainViolation, PointOutsideImage) as exc:
        print(f"domain violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
