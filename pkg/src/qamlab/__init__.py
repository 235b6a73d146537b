"""Iterated quasi-arithmetic means: orbit density and generator conditions.

Starting from a finite seed set S, repeatedly collecting every weighted
quasi-arithmetic mean of its tuples produces an orbit inside conv(S).
This package measures how densely that orbit fills the hull, tests the
generator conditions that decide the outcome (image convexity, interior
and hull inclusion), and exposes both through a scenario-driven command
line with canonical JSON/CSV/SVG reports.
"""

__version__ = "0.1.0"

from .errors import (QamlabError, DimensionMismatch, DomainViolation,
                     PointOutsideImage, NumericalFailure, NotKDimensional,
                     ResolutionTooCoarse, ToleranceTooTight,
                     SubsetBudgetExceeded, OrbitCapExceeded, ScenarioError)
from .geometry import (PointSet, Hull, snap_points, unique_rows,
                       bounding_box, bbox_diagonal, affine_rank,
                       convex_hull, convex_coefficients, in_hull,
                       in_interior, caratheodory_witness, gustin_witness,
                       grid_sample, covering_radius, dist_to_hull)
from .generators import (Domain, Generator, apply, invert, full_space,
                         positive_orthant, open_box, open_ball, identity,
                         coordinatewise_power, coordinatewise_log,
                         coordinatewise_exp, parabola_shear, parabola_radial,
                         square_to_ball, tabulated, make_generator,
                         generator_names, check_convex_image)
from .means import (Weights, SimplexWeights, OrbitState, qam, mean_step,
                    iterate, is_fixed_point, simplex_grid, weight_orbit)
from .conditions import (check_density, check_interior_inclusion,
                         check_hull_inclusion, subset_cover_property,
                         join_consistency, consistency_report)
from .reports import (ConditionVerdict, DensityReport, RunReport,
                      to_jsonable, canonical_json)
from .cli import (Scenario, parse_scenario, load_scenario, build_point_set,
                  run_scenario, render_orbit_svg, main)

__all__ = [
    "__version__",
    # errors
    "QamlabError", "DimensionMismatch", "DomainViolation",
    "PointOutsideImage", "NumericalFailure", "NotKDimensional",
    "ResolutionTooCoarse", "ToleranceTooTight", "SubsetBudgetExceeded",
    "OrbitCapExceeded", "ScenarioError",
    # geometry
    "PointSet", "Hull", "snap_points", "unique_rows", "bounding_box",
    "bbox_diagonal", "affine_rank", "convex_hull", "convex_coefficients",
    "in_hull", "in_interior", "caratheodory_witness", "gustin_witness",
    "grid_sample", "covering_radius", "dist_to_hull",
    # generators
    "Domain", "Generator", "apply", "invert", "full_space",
    "positive_orthant", "open_box", "open_ball", "identity",
    "coordinatewise_power", "coordinatewise_log", "coordinatewise_exp",
    "parabola_shear", "parabola_radial", "square_to_ball", "tabulated",
    "make_generator", "generator_names", "check_convex_image",
    # means
    "Weights", "SimplexWeights", "OrbitState", "qam", "mean_step",
    "iterate", "is_fixed_point", "simplex_grid", "weight_orbit",
    # conditions
    "check_density", "check_interior_inclusion", "check_hull_inclusion",
    "subset_cover_property", "join_consistency", "consistency_report",
    # reports
    "ConditionVerdict", "DensityReport", "RunReport", "to_jsonable",
    "canonical_json",
    # cli
    "Scenario", "parse_scenario", "load_scenario", "build_point_set",
    "run_scenario", "render_orbit_svg", "main",
]
