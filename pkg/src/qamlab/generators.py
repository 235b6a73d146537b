"""Generator library: injective maps f on open convex domains, with inverses.

A :class:`Generator` bundles the forward map, its inverse, the open convex
domain C, and a ``claims_convex_image`` metadata flag.  All built-ins carry
closed-form inverses and are vectorized over ``(n, k)`` arrays.  Custom
generators are restricted to coordinatewise monotone function tables inverted
by bisection.

``invert`` never trusts the closed form blindly: the candidate preimage must
land inside C and round-trip through the forward map to within
``ROUND_TRIP_TOL``, otherwise the query point is declared outside f[C].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainViolation, NumericalFailure, PointOutsideImage
from .geometry import as_points
from .reports import FAILS, HOLDS, ConditionVerdict

ROUND_TRIP_TOL = 1e-8
CLAMP_SLACK = 1e-12
_CORE_BOX = 10.0          # bounded sampling core for unbounded domains
_CORE_POSITIVE_LO = 1e-3  # lower sampling edge on the positive orthant


# ---------------------------------------------------------------------------
# domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Domain:
    """An open convex domain C: full space, open box, open ball, or the
    positive orthant.  ``contains`` is strict (open) membership."""

    kind: str  # "full" | "box" | "ball" | "positive"
    dim: int
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None
    center: np.ndarray | None = None
    radius: float | None = None

    def contains(self, points):
        pts = as_points(points, self.dim)
        if self.kind == "full":
            return np.ones(len(pts), dtype=bool)
        if self.kind == "positive":
            return (pts > 0.0).all(axis=1)
        if self.kind == "box":
            return ((pts > self.lo) & (pts < self.hi)).all(axis=1)
        if self.kind == "ball":
            d = np.linalg.norm(pts - self.center, axis=1)
            return d < self.radius
        raise ValueError(f"unknown domain kind {self.kind!r}")

    def exterior_distance(self, points):
        """Sup-norm distance from each point to the closed domain (0 inside)."""
        pts = as_points(points, self.dim)
        if self.kind == "full":
            return np.zeros(len(pts))
        if self.kind == "positive":
            return np.maximum(-pts, 0.0).max(axis=1)
        if self.kind == "box":
            below = np.maximum(self.lo - pts, 0.0)
            above = np.maximum(pts - self.hi, 0.0)
            return np.maximum(below, above).max(axis=1)
        if self.kind == "ball":
            d = np.linalg.norm(pts - self.center, axis=1)
            return np.maximum(d - self.radius, 0.0)
        raise ValueError(f"unknown domain kind {self.kind!r}")

    def clamp_inside(self, points, slack: float = CLAMP_SLACK):
        """Nudge points violating openness by at most ``slack`` back to an
        interior point at depth ``CLAMP_SLACK``; larger violations raise."""
        pts = as_points(points, self.dim).copy()
        if self.kind == "full":
            return pts
        ext = self.exterior_distance(pts)
        bad = ext > slack
        if bad.any():
            i = int(np.argmax(bad))
            raise DomainViolation(
                f"point {pts[i].tolist()} lies {ext[i]:.3e} outside the domain "
                f"(allowed slack {slack:.1e})"
            )
        eps = CLAMP_SLACK
        if self.kind == "positive":
            return np.maximum(pts, eps)
        if self.kind == "box":
            lo = np.where(np.isfinite(self.lo), self.lo + eps, -np.inf)
            hi = np.where(np.isfinite(self.hi), self.hi - eps, np.inf)
            return np.clip(pts, lo, hi)
        if self.kind == "ball":
            rel = pts - self.center
            d = np.linalg.norm(rel, axis=1)
            out = d >= self.radius
            if out.any():
                shrink = (self.radius - eps) / d[out]
                pts[out] = self.center + rel[out] * shrink[:, None]
            return pts
        raise ValueError(f"unknown domain kind {self.kind!r}")

    def sampling_core(self):
        """A bounded closed box inside C used for validation sampling:
        [-10, 10]^k intersected with C, or [1e-3, 10] on the positive orthant."""
        if self.kind == "full":
            lo = np.full(self.dim, -_CORE_BOX)
            hi = np.full(self.dim, _CORE_BOX)
        elif self.kind == "positive":
            lo = np.full(self.dim, _CORE_POSITIVE_LO)
            hi = np.full(self.dim, _CORE_BOX)
        elif self.kind == "box":
            width = np.where(np.isfinite(self.hi - self.lo),
                             self.hi - self.lo, 2 * _CORE_BOX)
            lo = np.where(np.isfinite(self.lo), self.lo + 1e-9 * width, -_CORE_BOX)
            hi = np.where(np.isfinite(self.hi), self.hi - 1e-9 * width, _CORE_BOX)
        elif self.kind == "ball":
            # inscribed box of the ball
            half = self.radius / np.sqrt(self.dim) * (1.0 - 1e-9)
            lo = self.center - half
            hi = self.center + half
        else:
            raise ValueError(f"unknown domain kind {self.kind!r}")
        return lo, hi

    def sample(self, count: int, rng) -> np.ndarray:
        lo, hi = self.sampling_core()
        return rng.uniform(lo, hi, size=(count, self.dim))


def full_space(k: int) -> Domain:
    return Domain("full", k)


def positive_orthant(k: int) -> Domain:
    return Domain("positive", k,
                  lo=np.zeros(k), hi=np.full(k, np.inf))


def open_box(lo, hi) -> Domain:
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if lo.shape != hi.shape or lo.ndim != 1:
        raise ValueError("open_box expects matching 1-D lo/hi")
    if not (lo < hi).all():
        raise ValueError("open_box requires lo < hi per coordinate")
    return Domain("box", len(lo), lo=lo, hi=hi)


def open_ball(center, radius: float) -> Domain:
    center = np.asarray(center, dtype=float)
    if radius <= 0:
        raise ValueError("open_ball requires radius > 0")
    return Domain("ball", len(center), center=center, radius=float(radius))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Generator:
    """An injective continuous map f: C -> R^k with inverse.

    ``_forward``/``_inverse`` act on (n, k) arrays; use :func:`apply` and
    :func:`invert` for the validated single/batch entry points.
    ``claims_convex_image`` is metadata only (validated by
    :func:`check_convex_image`, never assumed).
    """

    name: str
    domain: Domain
    _forward: callable = field(repr=False)
    _inverse: callable = field(repr=False)
    claims_convex_image: bool = True
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.domain.dim

    def forward_array(self, pts: np.ndarray) -> np.ndarray:
        return self._forward(pts)

    def inverse_array(self, pts: np.ndarray) -> np.ndarray:
        return self._inverse(pts)

    def describe(self) -> dict:
        return {"name": self.name, "dim": self.dim,
                "domain": self.domain.kind,
                "claims_convex_image": self.claims_convex_image,
                "params": dict(self.params)}


def _as_batch(points, dim):
    arr = np.asarray(points, dtype=float)
    single = arr.ndim == 1
    return as_points(points, dim), single


def apply(g: Generator, points):
    """Evaluate f on a point or an (n, k) batch; input must lie in C."""
    pts, single = _as_batch(points, g.dim)
    inside = g.domain.contains(pts)
    if not inside.all():
        i = int(np.argmin(inside))
        raise DomainViolation(
            f"{g.name}: point {pts[i].tolist()} is outside the domain")
    out = g.forward_array(pts)
    if not np.isfinite(out).all():
        raise NumericalFailure(f"{g.name}: forward map produced non-finite values")
    return out[0] if single else out


def invert(g: Generator, points, *, clamp_slack: float = 0.0):
    """Evaluate f^{-1} on a point or batch.

    The candidate preimage must lie in C (violations up to ``clamp_slack``
    are nudged back inside) and must round-trip through f to within
    ``ROUND_TRIP_TOL`` relative accuracy, otherwise PointOutsideImage.
    """
    pts, single = _as_batch(points, g.dim)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        cand = g.inverse_array(pts)
    finite = np.isfinite(cand).all(axis=1)
    if not finite.all():
        i = int(np.argmin(finite))
        raise PointOutsideImage(
            f"{g.name}: no finite preimage for {pts[i].tolist()}")
    if clamp_slack > 0:
        cand = g.domain.clamp_inside(cand, slack=clamp_slack)
    else:
        inside = g.domain.contains(cand)
        if not inside.all():
            i = int(np.argmin(inside))
            raise PointOutsideImage(
                f"{g.name}: preimage {cand[i].tolist()} of {pts[i].tolist()} "
                f"falls outside the domain")
    back = g.forward_array(cand)
    scale = np.maximum(1.0, np.abs(pts).max())
    err = np.abs(back - pts).max()
    if not np.isfinite(err) or err > ROUND_TRIP_TOL * scale:
        raise PointOutsideImage(
            f"{g.name}: inverse round-trip error {err:.3e} exceeds tolerance")
    return cand[0] if single else cand


# --- built-in generator factories ------------------------------------------

def identity(dim: int) -> Generator:
    return Generator("identity", full_space(dim),
                     lambda x: x.copy(), lambda y: y.copy())


def coordinatewise_power(p: float, dim: int) -> Generator:
    """f_i(x) = x^p on (0, inf)^k, p != 0; inverse is the 1/p power."""
    p = float(p)
    if p == 0.0:
        raise ValueError("power exponent must be nonzero")
    return Generator(
        "coordinatewise_power", positive_orthant(dim),
        lambda x: np.power(x, p), lambda y: np.power(y, 1.0 / p),
        params={"p": p},
    )


def coordinatewise_log(dim: int) -> Generator:
    return Generator("coordinatewise_log", positive_orthant(dim),
                     np.log, np.exp)


def coordinatewise_exp(dim: int) -> Generator:
    return Generator("coordinatewise_exp", full_space(dim),
                     np.exp, np.log)


def _shear_fwd(x):
    return np.stack([x[:, 0], x[:, 0] ** 2 + x[:, 1]], axis=1)


def _shear_inv(y):
    return np.stack([y[:, 0], y[:, 1] - y[:, 0] ** 2], axis=1)


def parabola_shear(dim: int = 2) -> Generator:
    """f(x, y) = (x, x^2 + y) on (0,1)^2.  Injective, but the image is the
    open region between two parabola arcs, which is not convex."""
    if dim != 2:
        raise ValueError("parabola_shear is defined on the plane only")
    return Generator("parabola_shear",
                     open_box([0.0, 0.0], [1.0, 1.0]),
                     _shear_fwd, _shear_inv,
                     claims_convex_image=False)


def _radial_fwd(x):
    return np.stack([x[:, 0], x[:, 0] ** 2 + x[:, 1] ** 2], axis=1)


def _radial_inv(y):
    return np.stack([y[:, 0], np.sqrt(y[:, 1] - y[:, 0] ** 2)], axis=1)


def parabola_radial(dim: int = 2) -> Generator:
    """f(x, y) = (x, x^2 + y^2) on (0, inf)^2; image {(u, v): u > 0, v > u^2}
    is convex, yet f still maps some hulls outside the hull of the images."""
    if dim != 2:
        raise ValueError("parabola_radial is defined on the plane only")
    return Generator("parabola_radial", positive_orthant(2),
                     _radial_fwd, _radial_inv)


def _sq2ball_fwd(x):
    # radius = sup norm, direction preserved; origin maps to origin for free
    m = np.abs(x).max(axis=1)
    theta = np.arctan2(x[:, 1], x[:, 0])
    return np.stack([m * np.cos(theta), m * np.sin(theta)], axis=1)


def _sq2ball_inv(y):
    r = np.linalg.norm(y, axis=1)
    theta = np.arctan2(y[:, 1], y[:, 0])
    c, s = np.cos(theta), np.sin(theta)
    denom = np.maximum(np.abs(c), np.abs(s))  # >= 1/sqrt(2) always
    return np.stack([r * c / denom, r * s / denom], axis=1)


def square_to_ball(dim: int = 2) -> Generator:
    """Maps each sup-norm sphere onto the Euclidean sphere of the same
    radius, keeping the direction: a bijection of the plane that sends
    squares to disks."""
    if dim != 2:
        raise ValueError("square_to_ball is defined on the plane only")
    return Generator("square_to_ball", full_space(2),
                     _sq2ball_fwd, _sq2ball_inv)


def tabulated(xs, ys, dim: int) -> Generator:
    """Coordinatewise generator from a strictly monotone 1-D function table.

    The forward map interpolates the table linearly; the inverse runs a
    bisection on each coordinate until the bracket width drops below 1e-12.
    Domain is the open box (xs[0], xs[-1])^k.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
        raise ValueError("tabulated: xs and ys must be equal-length 1-D, len >= 2")
    if not (np.diff(xs) > 0).all():
        raise ValueError("tabulated: xs must be strictly increasing")
    dy = np.diff(ys)
    if (dy > 0).all():
        sign = 1.0
    elif (dy < 0).all():
        sign = -1.0
    else:
        raise ValueError("tabulated: ys must be strictly monotone")

    def fwd(x):
        return np.interp(x, xs, ys)

    def inv(y):
        flat = y.ravel()
        lo = np.full(flat.shape, xs[0])
        hi = np.full(flat.shape, xs[-1])
        target = sign * flat
        for _ in range(64):  # (xs span)/2^64 << 1e-12
            mid = 0.5 * (lo + hi)
            below = sign * fwd(mid) < target
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if float((hi - lo).max()) < 1e-12:
                break
        out = 0.5 * (lo + hi)
        # flag targets outside the table range as non-invertible
        ymin, ymax = min(ys[0], ys[-1]), max(ys[0], ys[-1])
        out = np.where((flat < ymin) | (flat > ymax), np.nan, out)
        return out.reshape(y.shape)

    return Generator("tabulated", open_box(np.full(dim, xs[0]),
                                           np.full(dim, xs[-1])),
                     fwd, inv, params={"table_size": len(xs)})


_REGISTRY = {
    "identity": lambda dim, **kw: identity(dim),
    "coordinatewise_power": lambda dim, **kw: coordinatewise_power(kw.pop("p"), dim),
    "coordinatewise_log": lambda dim, **kw: coordinatewise_log(dim),
    "coordinatewise_exp": lambda dim, **kw: coordinatewise_exp(dim),
    "parabola_shear": lambda dim, **kw: parabola_shear(dim),
    "parabola_radial": lambda dim, **kw: parabola_radial(dim),
    "square_to_ball": lambda dim, **kw: square_to_ball(dim),
    "tabulated": lambda dim, **kw: tabulated(kw.pop("xs"), kw.pop("ys"), dim),
}


def generator_names():
    return sorted(_REGISTRY)


def make_generator(name: str, dim: int, **params) -> Generator:
    """Build a generator by registry name; unknown names or bad params raise."""
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise ValueError(
            f"unknown generator {name!r}; known: {', '.join(generator_names())}"
        ) from None
    try:
        return factory(dim, **params)
    except KeyError as exc:
        raise ValueError(f"generator {name!r} is missing parameter {exc}") from None


# ---------------------------------------------------------------------------
# convex-image validation
# ---------------------------------------------------------------------------

def _structured_core_points(domain: Domain):
    """Deterministic probe points in the sampling core: a small per-axis
    quantile lattice, so near-boundary pairs are always tried first."""
    lo, hi = domain.sampling_core()
    fracs = [1e-4, 0.1, 0.5, 0.9, 1.0 - 1e-4] if domain.dim <= 2 else [1e-4, 0.5, 1.0 - 1e-4]
    axes = [lo[i] + (hi[i] - lo[i]) * np.asarray(fracs) for i in range(domain.dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    if domain.kind == "ball":
        pts = pts[domain.contains(pts)]
    return pts


def check_convex_image(g: Generator, sample_count: int = 256,
                       rng_seed: int = 42) -> ConditionVerdict:
    """Sampling test of image convexity: midpoints of image pairs must have
    preimages.

    Deterministic near-boundary pairs are probed before seeded random pairs,
    so generators with non-convex images fail reproducibly without seed
    hunting.  A failure reports the pair, the midpoint, and how far the
    candidate preimage exits the domain.
    """
    if sample_count < 2:
        raise ValueError("sample_count must be >= 2")
    params = {"sample_count": int(sample_count), "rng_seed": int(rng_seed),
              "round_trip_tol": ROUND_TRIP_TOL}

    structured = _structured_core_points(g.domain)
    rng = np.random.default_rng(rng_seed)
    random_pts = g.domain.sample(sample_count, rng)
    pool = np.vstack([structured, random_pts])
    images = apply(g, pool)

    n_struct = len(structured)
    pair_stream = []
    for i in range(n_struct):
        for j in range(i + 1, n_struct):
            pair_stream.append((i, j))
    extra = rng.integers(0, len(pool), size=(sample_count, 2))
    pair_stream.extend((int(a), int(b)) for a, b in extra if a != b)

    for (i, j) in pair_stream:
        mid = 0.5 * (images[i] + images[j])
        try:
            invert(g, mid)
        except PointOutsideImage:
            with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
                cand = g.inverse_array(mid.reshape(1, -1))[0]
            if np.isfinite(cand).all():
                margin = float(g.domain.exterior_distance(cand.reshape(1, -1))[0])
                note = "candidate preimage exits the domain"
            else:
                margin = float("inf")
                note = "midpoint has no finite preimage"
            return ConditionVerdict(
                condition="convex-image", status=FAILS,
                witness={
                    "a": pool[i].tolist(), "b": pool[j].tolist(),
                    "image_midpoint": mid.tolist(),
                    "candidate_preimage": cand.tolist(),
                    "margin": margin,
                },
                parameters=params, notes=[note],
            )
        except NumericalFailure as exc:
            return ConditionVerdict(
                condition="convex-image", status=FAILS,
                witness={"a": pool[i].tolist(), "b": pool[j].tolist(),
                         "image_midpoint": mid.tolist(), "margin": float("inf")},
                parameters=params, notes=[f"inversion failed: {exc}"],
            )
    return ConditionVerdict(condition="convex-image", status=HOLDS,
                            parameters=params,
                            notes=[f"{len(pair_stream)} image pairs tested"])
