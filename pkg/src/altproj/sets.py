"""Projectable convex set kinds with exact or certified-iterative projection.

Every set kind knows how to project a point onto itself (except the
membership-only shifted cone), how to measure the distance of a point to
itself, and how to serialize to a JSON-friendly dict.  Projections are
exact closed forms everywhere except ``Polyhedron``, whose projection
runs cyclic Dykstra over its halfspaces and certifies convergence.

The module-level functions ``project``, ``membership``, ``support_value``
and ``slice_sample`` dispatch on the set kind.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import ConeSpec, as_point, cone_contains


class ProjectionUnsupported(ValueError):
    """Projection requested on a membership-only set kind."""


class DykstraNonConvergence(RuntimeError):
    """Cyclic Dykstra failed to settle within its iteration budget.

    Carries the last iterate and the last observed cycle displacement.
    """

    def __init__(self, message, last_iterate, residual):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


class SupportUnavailable(ValueError):
    """No exact support value for this kind/direction; use sampled probes."""


class SamplerFailure(RuntimeError):
    """Rejection sampler exhausted its budget."""


def _unit(a, name="a"):
    a = as_point(a)
    n = float(np.linalg.norm(a))
    if n == 0.0:
        raise ValueError(f"{name} must be nonzero")
    return a / n, n


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Halfspace:
    """{x : <a, x> <= b} with a != 0; stored with unit normal."""

    a: np.ndarray
    b: float

    def __post_init__(self):
        a, n = _unit(self.a)
        object.__setattr__(self, "a", _freeze(a))
        object.__setattr__(self, "b", float(self.b) / n)

    @property
    def dim(self):
        return self.a.size

    def project(self, x):
        x = as_point(x, dim=self.dim)
        excess = float(np.dot(self.a, x)) - self.b
        if excess <= 0.0:
            return x.copy()
        return x - excess * self.a

    def distance(self, x):
        x = as_point(x, dim=self.dim)
        return max(0.0, float(np.dot(self.a, x)) - self.b)

    def translate(self, v):
        v = as_point(v, dim=self.dim)
        return Halfspace(self.a, self.b + float(np.dot(self.a, v)))


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """{x : <a, x> = b} with a != 0; stored with unit normal."""

    a: np.ndarray
    b: float

    def __post_init__(self):
        a, n = _unit(self.a)
        object.__setattr__(self, "a", _freeze(a))
        object.__setattr__(self, "b", float(self.b) / n)

    @property
    def dim(self):
        return self.a.size

    def project(self, x):
        x = as_point(x, dim=self.dim)
        return x - (float(np.dot(self.a, x)) - self.b) * self.a

    def distance(self, x):
        x = as_point(x, dim=self.dim)
        return abs(float(np.dot(self.a, x)) - self.b)

    def translate(self, v):
        v = as_point(v, dim=self.dim)
        return Hyperplane(self.a, self.b + float(np.dot(self.a, v)))


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = as_point(self.center)
        if not self.radius > 0.0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", _freeze(c))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self):
        return self.center.size

    def project(self, x):
        x = as_point(x, dim=self.dim)
        d = x - self.center
        n = float(np.linalg.norm(d))
        if n <= self.radius:
            return x.copy()
        return self.center + (self.radius / n) * d

    def distance(self, x):
        x = as_point(x, dim=self.dim)
        return max(0.0, float(np.linalg.norm(x - self.center)) - self.radius)

    def translate(self, v):
        return Ball(self.center + as_point(v, dim=self.dim), self.radius)


def _convex_hull_ccw(points: np.ndarray) -> np.ndarray:
    """Andrew's monotone chain; returns CCW hull vertices, collinear dropped."""
    pts = np.unique(np.round(points, 15), axis=0)
    if len(pts) < 3:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def cross(o, p, q):
        return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


@dataclass(frozen=True, eq=False)
class Polygon2D:
    """Convex polygon in the plane, vertices stored in CCW order.

    The constructor takes an arbitrary vertex list, deduplicates it and
    keeps the CCW convex hull, so degenerate inputs (repeated or interior
    vertices) are tolerated.  Degenerate hulls (segments, points) are kept
    and projected onto correctly.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 1:
            raise ValueError("vertices must be an (m, 2) array with m >= 1")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertices must be finite")
        object.__setattr__(self, "vertices", _freeze(_convex_hull_ccw(v)))

    @property
    def dim(self):
        return 2

    def contains(self, x, tol=0.0):
        x = as_point(x, dim=2)
        v = self.vertices
        m = len(v)
        if m == 1:
            return float(np.linalg.norm(x - v[0])) <= tol
        if m == 2:
            return self.distance(x) <= tol
        for i in range(m):
            p, q = v[i], v[(i + 1) % m]
            edge = q - p
            # Outward normal is (edge_y, -edge_x) for CCW orientation.
            if (x[0] - p[0]) * edge[1] - (x[1] - p[1]) * edge[0] > tol * np.linalg.norm(edge):
                return False
        return True

    def project(self, x):
        x = as_point(x, dim=2)
        v = self.vertices
        m = len(v)
        if m == 1:
            return v[0].copy()
        if m >= 3 and self.contains(x):
            return x.copy()
        best, best_d = None, np.inf
        seg_count = m if m >= 3 else 1
        for i in range(seg_count):
            p, q = v[i], v[(i + 1) % m]
            e = q - p
            t = float(np.dot(x - p, e) / np.dot(e, e))
            t = min(1.0, max(0.0, t))
            cand = p + t * e
            d = float(np.linalg.norm(x - cand))
            if d < best_d:
                best, best_d = cand, d
        return best

    def distance(self, x):
        return float(np.linalg.norm(as_point(x, dim=2) - self.project(x)))

    def translate(self, v):
        return Polygon2D(self.vertices + as_point(v, dim=2))


def _check_orthonormal(basis: np.ndarray, tol=1e-10):
    gram = basis @ basis.T
    if np.max(np.abs(gram - np.eye(len(basis)))) > tol:
        raise ValueError("basis is not orthonormal within 1e-10")


@dataclass(frozen=True, eq=False)
class OrthoSubspace:
    """Linear subspace spanned by orthonormal basis rows (k x d)."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[0] < 1:
            raise ValueError("basis must be a nonempty (k, d) array")
        if not np.all(np.isfinite(b)):
            raise ValueError("basis must be finite")
        _check_orthonormal(b)
        object.__setattr__(self, "basis", _freeze(b))

    @property
    def dim(self):
        return self.basis.shape[1]

    def project(self, x):
        x = as_point(x, dim=self.dim)
        return self.basis.T @ (self.basis @ x)

    def distance(self, x):
        x = as_point(x, dim=self.dim)
        return float(np.linalg.norm(x - self.project(x)))

    def translate(self, v):
        return AffineSubspace(as_point(v, dim=self.dim), self.basis)


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """anchor + span(basis) with orthonormal basis rows."""

    anchor: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        a = as_point(self.anchor)
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[1] != a.size:
            raise ValueError("basis shape incompatible with anchor")
        _check_orthonormal(b)
        object.__setattr__(self, "anchor", _freeze(a))
        object.__setattr__(self, "basis", _freeze(b))

    @property
    def dim(self):
        return self.anchor.size

    def project(self, x):
        x = as_point(x, dim=self.dim)
        y = x - self.anchor
        return self.anchor + self.basis.T @ (self.basis @ y)

    def distance(self, x):
        x = as_point(x, dim=self.dim)
        return float(np.linalg.norm(x - self.project(x)))

    def translate(self, v):
        return AffineSubspace(self.anchor + as_point(v, dim=self.dim), self.basis)

    def min_norm_anchor(self):
        """The point of the flat closest to the origin."""
        return self.anchor - self.basis.T @ (self.basis @ self.anchor)


@dataclass(frozen=True, eq=False)
class NonnegOrthant:
    d: int

    def __post_init__(self):
        if int(self.d) < 1:
            raise ValueError("dimension must be >= 1")
        object.__setattr__(self, "d", int(self.d))

    @property
    def dim(self):
        return self.d

    def project(self, x):
        return np.maximum(as_point(x, dim=self.d), 0.0)

    def distance(self, x):
        x = as_point(x, dim=self.d)
        return float(np.linalg.norm(np.minimum(x, 0.0)))

    def translate(self, v):
        v = as_point(v, dim=self.d)
        normals = -np.eye(self.d)
        return Polyhedron(normals, -v, witness=np.maximum(v, 0.0) + 1.0)


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """{x : <a_i, x> <= b_i for all i}; the constructor demands a witness.

    Rows of ``normals`` are the a_i (not necessarily unit), paired with
    offsets ``b``.  Nonemptiness is certified by the feasible witness
    point, checked at construction.
    """

    normals: np.ndarray
    b: np.ndarray
    witness: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.normals, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.size or A.shape[0] < 1:
            raise ValueError("normals must be (m, d), b must be (m,)")
        norms = np.linalg.norm(A, axis=1)
        if np.any(norms == 0.0):
            raise ValueError("zero constraint normal")
        A = A / norms[:, None]
        b = b / norms
        w = as_point(self.witness, dim=A.shape[1])
        if np.any(A @ w > b + 1e-9):
            raise ValueError("witness point is not feasible")
        object.__setattr__(self, "normals", _freeze(A))
        object.__setattr__(self, "b", _freeze(b))
        object.__setattr__(self, "witness", _freeze(w))

    @property
    def dim(self):
        return self.normals.shape[1]

    def contains(self, x, tol=0.0):
        x = as_point(x, dim=self.dim)
        return bool(np.all(self.normals @ x <= self.b + tol))

    def project(self, x, tol=1e-10, max_iter=100_000):
        return polyhedron_project_dykstra(self, x, tol=tol, max_iter=max_iter)

    def distance(self, x):
        x = as_point(x, dim=self.dim)
        if self.contains(x):
            return 0.0
        return float(np.linalg.norm(x - self.project(x)))

    def translate(self, v):
        v = as_point(v, dim=self.dim)
        return Polyhedron(self.normals, self.b + self.normals @ v, witness=self.witness + v)


@dataclass(frozen=True, eq=False)
class DiagonalAffineGraph:
    """The set {(x, offset + D x)} in R^{2d} with D = diag(theta).

    Operates on packed product points: the first d coordinates are x, the
    last d are the second factor.  Projection is the per-coordinate closed
    form x_n = (alpha_n + theta_n*(beta_n - offset_n)) / (1 + theta_n^2)
    for input (alpha, beta).
    """

    theta: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        t = as_point(self.theta)
        o = as_point(self.offset, dim=t.size)
        object.__setattr__(self, "theta", _freeze(t))
        object.__setattr__(self, "offset", _freeze(o))

    @property
    def half_dim(self):
        return self.theta.size

    @property
    def dim(self):
        return 2 * self.theta.size

    def project(self, z):
        z = as_point(z, dim=self.dim)
        d = self.half_dim
        alpha, beta = z[:d], z[d:]
        x = (alpha + self.theta * (beta - self.offset)) / (1.0 + self.theta ** 2)
        return np.concatenate([x, self.offset + self.theta * x])

    def distance(self, z):
        z = as_point(z, dim=self.dim)
        return float(np.linalg.norm(z - self.project(z)))

    def translate(self, v):
        v = as_point(v, dim=self.dim)
        d = self.half_dim
        # {(x, off + Dx)} + (u, w) = {(x', off + w - Du + Dx')}
        return DiagonalAffineGraph(self.theta, self.offset + v[d:] - self.theta * v[:d])


@dataclass(frozen=True, eq=False)
class ShiftedConvexCone:
    """Membership-only wrapper around a shifted convex cone C(f, alpha)."""

    cone: ConeSpec

    def __post_init__(self):
        if self.cone.kind != "C":
            raise ValueError("ShiftedConvexCone requires a C-kind cone spec")

    @property
    def dim(self):
        return self.cone.dim

    def contains(self, x, tol=0.0):
        return cone_contains(self.cone, x, tol)


SET_KINDS = (Halfspace, Hyperplane, Ball, Polygon2D, OrthoSubspace,
             AffineSubspace, NonnegOrthant, Polyhedron, DiagonalAffineGraph,
             ShiftedConvexCone)


def project(S, x) -> np.ndarray:
    """Metric projection of x onto S; raises for membership-only kinds."""
    if isinstance(S, ShiftedConvexCone):
        raise ProjectionUnsupported("projection onto shifted cones is not provided")
    return S.project(x)


def membership(S, x, tol: float = 0.0) -> bool:
    """True iff dist(x, S) <= tol (cone residual test for the cone kind)."""
    if isinstance(S, ShiftedConvexCone):
        return S.contains(x, tol)
    if isinstance(S, (Polygon2D, Polyhedron)):
        return S.contains(x, tol) or S.distance(x) <= tol
    return S.distance(x) <= tol


def polyhedron_project_dykstra(S: Polyhedron, x, tol: float = 1e-10,
                               max_iter: int = 100_000) -> np.ndarray:
    """Project onto an intersection of halfspaces by cyclic Dykstra.

    Iterates cycles of halfspace projections with correction terms and
    stops when the displacement across one full cycle drops below tol AND
    the iterate is feasible within 10*tol.  The feasibility condition
    matters: Dykstra admits long plateaus where the iterate freezes while
    the corrections rebalance, so small displacement alone certifies
    nothing.  Raises :class:`DykstraNonConvergence` when the budget runs
    out.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    x = as_point(x, dim=S.dim)
    A, b = S.normals, S.b
    m = A.shape[0]
    if bool(np.all(A @ x <= b)):
        return x.copy()
    y = x.copy()
    corrections = np.zeros((m, S.dim))
    for _ in range(max_iter):
        y_prev = y.copy()
        for i in range(m):
            z = y + corrections[i]
            excess = float(np.dot(A[i], z)) - b[i]
            y = z - max(0.0, excess) * A[i]
            corrections[i] = z - y
        disp = float(np.linalg.norm(y - y_prev))
        if disp < tol and float(np.max(A @ y - b)) <= 10.0 * tol:
            return y
    raise DykstraNonConvergence(
        f"Dykstra did not converge within {max_iter} cycles (last displacement {disp:.3e})",
        last_iterate=y, residual=disp)


def polyhedron_vertices(S: Polyhedron, tol: float = 1e-9) -> np.ndarray:
    """Enumerate vertices of a polyhedron in dimension <= 3."""
    d = S.dim
    if d > 3:
        raise SupportUnavailable("vertex enumeration only supported for d <= 3")
    A, b = S.normals, S.b
    m = A.shape[0]
    verts = []
    from itertools import combinations
    for idx in combinations(range(m), d):
        sub = A[list(idx)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        v = np.linalg.solve(sub, b[list(idx)])
        if np.all(A @ v <= b + tol):
            verts.append(v)
    if not verts:
        return np.empty((0, d))
    return np.unique(np.round(np.array(verts), 12), axis=0)


def _polyhedron_unbounded_in(S: Polyhedron, f: np.ndarray, tol: float = 1e-9) -> bool:
    """Whether sup_S <f, .> = +inf, via an LP over a boxed recession cone."""
    from scipy.optimize import linprog
    d = S.dim
    res = linprog(-f, A_ub=S.normals, b_ub=np.zeros(S.normals.shape[0]),
                  bounds=[(-1.0, 1.0)] * d, method="highs")
    return res.status == 0 and -res.fun > tol


def support_value(S, f) -> float:
    """sup over S of <f, .>; exact per kind, error if unbounded/unsupported."""
    f = as_point(f)
    if float(np.linalg.norm(f)) == 0.0:
        raise ValueError("support direction must be nonzero")
    if isinstance(S, Ball):
        return float(np.dot(f, S.center)) + S.radius * float(np.linalg.norm(f))
    if isinstance(S, Polygon2D):
        return float(np.max(S.vertices @ as_point(f, dim=2)))
    if isinstance(S, Polyhedron):
        if _polyhedron_unbounded_in(S, f):
            raise SupportUnavailable("polyhedron is unbounded in this direction")
        verts = polyhedron_vertices(S)
        if len(verts) == 0:
            raise SupportUnavailable("polyhedron has no vertices; use sampled probes")
        return float(np.max(verts @ f))
    if isinstance(S, Halfspace):
        fa = float(np.dot(f, S.a))
        if np.linalg.norm(f - fa * S.a) <= 1e-12 * np.linalg.norm(f) and fa > 0:
            return fa * S.b
        raise SupportUnavailable("halfspace is unbounded in this direction")
    if isinstance(S, Hyperplane):
        fa = float(np.dot(f, S.a))
        if np.linalg.norm(f - fa * S.a) <= 1e-12 * np.linalg.norm(f):
            return fa * S.b
        raise SupportUnavailable("hyperplane is unbounded in this direction")
    if isinstance(S, OrthoSubspace):
        if float(np.linalg.norm(S.basis @ f)) <= 1e-12 * np.linalg.norm(f):
            return 0.0
        raise SupportUnavailable("subspace is unbounded in this direction")
    if isinstance(S, AffineSubspace):
        if float(np.linalg.norm(S.basis @ f)) <= 1e-12 * np.linalg.norm(f):
            return float(np.dot(f, S.anchor))
        raise SupportUnavailable("affine flat is unbounded in this direction")
    if isinstance(S, NonnegOrthant):
        if np.all(f <= 0.0):
            return 0.0
        raise SupportUnavailable("orthant is unbounded in this direction")
    if isinstance(S, DiagonalAffineGraph):
        d = S.half_dim
        f = as_point(f, dim=2 * d)
        if float(np.linalg.norm(f[:d] + S.theta * f[d:])) <= 1e-12 * np.linalg.norm(f):
            return float(np.dot(f[d:], S.offset))
        raise SupportUnavailable("graph flat is unbounded in this direction")
    raise SupportUnavailable(f"no exact support value for {type(S).__name__}; "
                             "use sampled probes")


def support_point(S, f) -> np.ndarray:
    """A point of S attaining sup <f, .>, for the bounded kinds."""
    f = as_point(f)
    if isinstance(S, Ball):
        return S.center + S.radius * f / float(np.linalg.norm(f))
    if isinstance(S, Polygon2D):
        vals = S.vertices @ as_point(f, dim=2)
        return S.vertices[int(np.argmax(vals))].copy()
    if isinstance(S, Polyhedron):
        support_value(S, f)  # raises if unbounded
        verts = polyhedron_vertices(S)
        return verts[int(np.argmax(verts @ f))]
    raise SupportUnavailable(f"no support point for {type(S).__name__}")


def sample_points(S, n: int, rng, scale: float = 1.0) -> np.ndarray:
    """n points of S, boundary-biased: ambient Gaussians projected onto S.

    Scale controls the Gaussian spread; projections of far-away ambient
    points land on the boundary, which is where excesses and cone shifts
    are attained, so the bias is deliberate.
    """
    if isinstance(S, ShiftedConvexCone):
        raise ProjectionUnsupported("cannot sample a membership-only kind by projection")
    d = S.dim
    out = np.empty((n, d))
    for i in range(n):
        z = rng.standard_normal(d) * scale
        out[i] = S.project(z)
    return out


def slice_sample(S, f, alpha: float, n_samples: int, rng_seed: int) -> np.ndarray:
    """Sample points of S lying within alpha of sup <f, .> over S.

    The supporting face is always represented: the first returned point
    attains the supremum where a support point is available.  Ball and
    polygon slices are sampled directly (cap parametrization, halfplane
    clip); other kinds fall back to rejection over projected Gaussians
    with a finite budget.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(rng_seed)
    f = as_point(f, dim=S.dim)
    sup = support_value(S, f)
    fhat = f / float(np.linalg.norm(f))
    level = sup - alpha  # keep x with <f, x> >= level

    if isinstance(S, Ball):
        pts = [support_point(S, f)]
        # cap of the sphere {c + r u : <f, c + r u> >= level}
        cos_min = max(-1.0, (level - float(np.dot(f, S.center))) /
                      (S.radius * float(np.linalg.norm(f))))
        psi_max = float(np.arccos(np.clip(cos_min, -1.0, 1.0)))
        d = S.dim
        while len(pts) < n_samples:
            psi = rng.uniform(0.0, psi_max)
            w = rng.standard_normal(d)
            w -= float(np.dot(w, fhat)) * fhat
            nw = float(np.linalg.norm(w))
            if nw < 1e-14:
                continue
            w /= nw
            u = np.cos(psi) * fhat + np.sin(psi) * w
            r = S.radius * (1.0 if rng.uniform() < 0.7 else rng.uniform() ** (1.0 / d))
            x = S.center + r * u
            if float(np.dot(f, x)) >= level - 1e-12:
                pts.append(x)
        return np.array(pts[:n_samples])

    if isinstance(S, Polygon2D):
        clipped = _clip_polygon_halfplane(S.vertices, f, level)
        if len(clipped) == 0:
            raise SamplerFailure("slice clipped to empty set")
        pts = list(clipped)
        m = len(clipped)
        while len(pts) < n_samples:
            if m == 1:
                pts.append(clipped[0].copy())
                continue
            if rng.uniform() < 0.5 or m == 2:
                i = rng.integers(m)
                j = (i + 1) % m
                t = rng.uniform()
                pts.append((1 - t) * clipped[i] + t * clipped[j])
            else:
                w = rng.dirichlet(np.ones(m))
                pts.append(w @ clipped)
        return np.array(pts[:n_samples])

    # generic rejection over boundary-biased samples
    pts = []
    budget = 200 * n_samples
    tries = 0
    while len(pts) < n_samples and tries < budget:
        x = S.project(rng.standard_normal(S.dim) * (2.0 + abs(sup)))
        tries += 1
        if float(np.dot(f, x)) >= level - 1e-12:
            pts.append(x)
    if not pts:
        raise SamplerFailure(f"no slice samples found within budget {budget}")
    while len(pts) < n_samples:
        pts.append(pts[len(pts) % max(1, len(pts))])
    return np.array(pts[:n_samples])


def _clip_polygon_halfplane(vertices: np.ndarray, f: np.ndarray, level: float) -> np.ndarray:
    """Sutherland-Hodgman clip of a CCW polygon against {<f, x> >= level}."""
    out = []
    m = len(vertices)
    if m == 1:
        return vertices.copy() if float(np.dot(f, vertices[0])) >= level - 1e-12 else np.empty((0, 2))
    ring = list(vertices) if m >= 3 else [vertices[0], vertices[1]]
    n_ring = len(ring)
    for i in range(n_ring if m >= 3 else 1):
        p = ring[i]
        q = ring[(i + 1) % n_ring]
        fp = float(np.dot(f, p)) - level
        fq = float(np.dot(f, q)) - level
        if fp >= -1e-12:
            out.append(p)
        if (fp > 1e-12 and fq < -1e-12) or (fp < -1e-12 and fq > 1e-12):
            t = fp / (fp - fq)
            out.append(p + t * (q - p))
    if m == 2 and float(np.dot(f, ring[1])) - level >= -1e-12:
        out.append(ring[1])
    if not out:
        return np.empty((0, 2))
    return np.unique(np.round(np.array(out), 12), axis=0)


# ---------------------------------------------------------------------------
# JSON encoding: {"kind": ..., numeric fields as arrays}.  Floats survive a
# round trip exactly (shortest-repr decimals).

def set_to_dict(S) -> dict:
    if isinstance(S, Halfspace):
        return {"kind": "halfspace", "a": S.a.tolist(), "b": S.b}
    if isinstance(S, Hyperplane):
        return {"kind": "hyperplane", "a": S.a.tolist(), "b": S.b}
    if isinstance(S, Ball):
        return {"kind": "ball", "center": S.center.tolist(), "radius": S.radius}
    if isinstance(S, Polygon2D):
        return {"kind": "polygon2d", "vertices": S.vertices.tolist()}
    if isinstance(S, OrthoSubspace):
        return {"kind": "ortho_subspace", "basis": S.basis.tolist()}
    if isinstance(S, AffineSubspace):
        return {"kind": "affine_subspace", "anchor": S.anchor.tolist(),
                "basis": S.basis.tolist()}
    if isinstance(S, NonnegOrthant):
        return {"kind": "nonneg_orthant", "d": S.d}
    if isinstance(S, Polyhedron):
        return {"kind": "polyhedron", "normals": S.normals.tolist(),
                "b": S.b.tolist(), "witness": S.witness.tolist()}
    if isinstance(S, DiagonalAffineGraph):
        return {"kind": "diagonal_affine_graph", "theta": S.theta.tolist(),
                "offset": S.offset.tolist()}
    if isinstance(S, ShiftedConvexCone):
        c = S.cone
        return {"kind": "shifted_convex_cone", "riesz": c.riesz.tolist(),
                "alpha": c.alpha, "shift": c.shift,
                "direction": c.direction.tolist(), "cone_kind": c.kind}
    raise TypeError(f"unknown set kind {type(S).__name__}")


def set_from_dict(d: dict):
    kind = d.get("kind")
    if kind == "halfspace":
        return Halfspace(np.array(d["a"]), d["b"])
    if kind == "hyperplane":
        return Hyperplane(np.array(d["a"]), d["b"])
    if kind == "ball":
        return Ball(np.array(d["center"]), d["radius"])
    if kind == "polygon2d":
        return Polygon2D(np.array(d["vertices"]))
    if kind == "ortho_subspace":
        return OrthoSubspace(np.array(d["basis"]))
    if kind == "affine_subspace":
        return AffineSubspace(np.array(d["anchor"]), np.array(d["basis"]))
    if kind == "nonneg_orthant":
        return NonnegOrthant(d["d"])
    if kind == "polyhedron":
        return Polyhedron(np.array(d["normals"]), np.array(d["b"]),
                          witness=np.array(d["witness"]))
    if kind == "diagonal_affine_graph":
        return DiagonalAffineGraph(np.array(d["theta"]), np.array(d["offset"]))
    if kind == "shifted_convex_cone":
        spec = ConeSpec(np.array(d["riesz"]), d["alpha"], d["shift"],
                        np.array(d["direction"]), d["cone_kind"])
        return ShiftedConvexCone(spec)
    raise ValueError(f"unknown set kind tag {kind!r}")
