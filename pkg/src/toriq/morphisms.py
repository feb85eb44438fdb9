"""Toric morphisms: images, fibers, one-parameter limits, codimension.

A toric morphism is induced by an integer lattice map carrying every source
cone into some target cone.  Points move by pushing coset representatives
through the induced torus homomorphism; orbits move to the orbit of the
minimal target cone containing the image cone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cones import Cone, image_cone
from .fans import Fan, FanSystem, OrbitIndex, system_view
from .intlinalg import (
    Inconsistent,
    IntMatrix,
    NoRationalPoint,
    Sublattice,
    apply_exponent_matrix,
    dot,
    invariant_factors,
    solve_torus_equation,
    vec,
)
from .points import OrbitPoint, ToricPoint, TorusElement


class IncompatibleMorphism(ValueError):
    """A source cone's image is not contained in any target cone."""

    def __init__(self, cone: Cone, message: str | None = None):
        self.cone = cone
        super().__init__(message or f"no target cone contains the image of {cone!r}")


class PartialCover(ValueError):
    """A source orbit maps onto a proper subset of its target orbit."""

    def __init__(self, orbit: OrbitIndex):
        self.orbit = orbit
        super().__init__(
            f"orbit of {orbit.cone!r} covers its target orbit only partially"
        )


def _lift_matrix(lat: Sublattice) -> IntMatrix:
    """n x (n - rank) matrix whose columns lift the quotient unit vectors."""
    n = lat.ambient
    q = n - lat.rank
    cols = [lat.lift_from_quotient(tuple(1 if i == l else 0 for i in range(q)))
            for l in range(q)]
    rows = tuple(tuple(col[i] for col in cols) for i in range(n))
    return IntMatrix(rows, q)


def _minimal_face_containing(chart: Cone, sub: Cone) -> Cone:
    candidates = [f for f in chart.faces() if f.contains_cone(sub)]
    if not candidates:
        raise ValueError("cone is not contained in the chart")
    best = min(candidates, key=lambda c: (c.dim, c.rays))
    return best


class ToricMorphism:
    """A lattice map together with compatible source and target spaces."""

    def __init__(
        self,
        matrix: IntMatrix,
        source: Fan | FanSystem,
        target: Fan | FanSystem,
    ):
        if matrix.ncols != source.rank or matrix.nrows != target.rank:
            raise ValueError(
                f"lattice map is {matrix.nrows}x{matrix.ncols}; expected "
                f"{target.rank}x{source.rank}"
            )
        self.matrix = matrix
        self.source = source
        self.target = target
        src = system_view(source)
        tgt = system_view(target)
        self.chart_assignment: list[int] = []
        for chart in src.charts:
            img = image_cone(matrix, chart)
            pick = next(
                (j for j, tc in enumerate(tgt.charts) if tc.contains_cone(img)), None
            )
            if pick is None:
                raise IncompatibleMorphism(chart)
            self.chart_assignment.append(pick)
        self.orbit_assignment: dict[OrbitIndex, OrbitIndex] = {}
        use_fan_lookup = isinstance(target, Fan)
        for orbit in src.orbits():
            assigned: OrbitIndex | None = None
            for i, face in src.realizations(orbit):
                img = image_cone(matrix, face)
                if use_fan_lookup:
                    gamma = target.minimal_cone_containing(img)
                    if gamma is None:
                        raise IncompatibleMorphism(face)
                    tgt_orbit = tgt.orbit_of_cone(gamma)
                else:
                    j = self.chart_assignment[i]
                    gamma = _minimal_face_containing(tgt.charts[j], img)
                    tgt_orbit = tgt.orbit(j, gamma)
                if assigned is None:
                    assigned = tgt_orbit
                elif assigned != tgt_orbit:
                    raise IncompatibleMorphism(
                        orbit.cone,
                        "chart realizations assign the orbit to different targets",
                    )
            assert assigned is not None
            self.orbit_assignment[orbit] = assigned

    def __repr__(self) -> str:
        return f"ToricMorphism({self.matrix.nrows}x{self.matrix.ncols})"

    # -- action on points ----------------------------------------------------

    def push_torus(self, t: TorusElement) -> TorusElement:
        return TorusElement(apply_exponent_matrix(self.matrix, t.coords))

    def _as_source_point(self, p) -> OrbitPoint:
        if isinstance(p, OrbitPoint):
            if p.space != self.source:
                raise ValueError("point does not live on the morphism's source")
            return p
        if isinstance(p, TorusElement):
            src = system_view(self.source)
            orbit = src.orbit(0, Cone.zero(src.rank))
            return OrbitPoint.make(self.source, orbit, p)
        if isinstance(p, ToricPoint):
            src = system_view(self.source)
            chart_id = next(
                (i for i, c in enumerate(src.charts) if c == p.chart), None
            )
            if chart_id is None:
                raise ValueError("chart of the point is not a chart of the source")
            orbit = src.orbit(chart_id, p.face)
            return OrbitPoint.make(self.source, orbit, p.coset)
        raise TypeError(f"cannot interpret {type(p).__name__} as a source point")

    def apply(self, p) -> OrbitPoint:
        """Image of a point; characters pull back along the lattice map."""
        p = self._as_source_point(p)
        tgt_orbit = self.orbit_assignment[p.orbit]
        return OrbitPoint.make(self.target, tgt_orbit, self.push_torus(p.coset))

    # -- orbit-level structure -------------------------------------------------

    def cone_assignment(self, sigma: Cone | OrbitIndex) -> Cone:
        """The minimal target cone containing the image of a source cone."""
        src = system_view(self.source)
        orbit = sigma if isinstance(sigma, OrbitIndex) else src.orbit_of_cone(sigma)
        return self.orbit_assignment[orbit].cone

    def orbit_image(self, sigma: Cone | OrbitIndex) -> tuple[OrbitIndex, bool]:
        """Target orbit of a source orbit, and whether the orbit map is onto.

        Surjectivity of the induced map of quotient lattices
        N / sat(span sigma) -> N' / sat(span gamma) is decided by its Smith
        normal form.
        """
        src = system_view(self.source)
        orbit = sigma if isinstance(sigma, OrbitIndex) else src.orbit_of_cone(sigma)
        tgt_orbit = self.orbit_assignment[orbit]
        lift = _lift_matrix(orbit.cone.span_lattice)
        tgt_span = tgt_orbit.cone.span_lattice
        if tgt_span.rank == tgt_span.ambient:
            return tgt_orbit, True
        induced = tgt_span.quotient_matrix() @ self.matrix @ lift
        factors = invariant_factors(induced)
        covered = len(factors) == induced.nrows and all(f == 1 for f in factors)
        return tgt_orbit, covered


@dataclass(frozen=True)
class ConstructibleOrbitSet:
    """An orbit-constructible subset of a toric variety: which orbits of the
    ambient fan are present and which are absent."""

    fan: Fan
    present: tuple[Cone, ...]
    absent: tuple[Cone, ...]


def toric_morphism(
    matrix: IntMatrix, source: Fan | FanSystem, target: Fan | FanSystem
) -> ToricMorphism:
    return ToricMorphism(matrix, source, target)


def apply_morphism(m: ToricMorphism, p) -> OrbitPoint:
    return m.apply(p)


def orbit_image(m: ToricMorphism, sigma: Cone | OrbitIndex) -> tuple[OrbitIndex, bool]:
    return m.orbit_image(sigma)


def image_constructible(m: ToricMorphism) -> ConstructibleOrbitSet:
    """The image as a union of target orbits; every source orbit must map
    onto its target orbit."""
    if not isinstance(m.target, Fan):
        raise ValueError("constructible images are computed for fan targets")
    src = system_view(m.source)
    present: set[Cone] = set()
    for orbit in src.orbits():
        tgt_orbit, covered = m.orbit_image(orbit)
        if not covered:
            raise PartialCover(orbit)
        present.add(tgt_orbit.cone)
    absent = [c for c in m.target.all_cones if c not in present]

    def order(c: Cone):
        return (c.dim, c.rays)

    return ConstructibleOrbitSet(
        m.target, tuple(sorted(present, key=order)), tuple(sorted(absent, key=order))
    )


def complement_codim(s: ConstructibleOrbitSet) -> int | None:
    """Codimension of the complement of the orbit set; None when nothing is
    absent (the infinity marker).  The orbit of a cone gamma has dimension
    n - dim(gamma), so its codimension is dim(gamma)."""
    if not s.absent:
        return None
    return min(c.dim for c in s.absent)


# ---------------------------------------------------------------------------
# one-parameter limits


def orbit_limit_targets(
    space: Fan | FanSystem, orbit: OrbitIndex, v: Sequence[int]
) -> tuple[OrbitIndex, ...]:
    """Orbits of the limits of the translated family lambda_v(s) * t * x,
    for x on the given orbit; the coset is carried along unchanged.

    In a chart sigma containing the orbit's cone gamma, the limit exists iff
    v pairs nonnegatively with the dual face sigma^vee meet gamma^perp; the
    limit orbit is cut out by the rays of that dual face orthogonal to v.
    """
    v = vec(v)
    sys = system_view(space)
    if len(v) != sys.rank:
        raise ValueError("vector rank mismatch")
    cache: dict = getattr(sys, "_dual_face_cache", None)
    if cache is None:
        cache = {}
        sys._dual_face_cache = cache
    out: dict[OrbitIndex, None] = {}
    for chart_id, _face in sys.realizations(orbit):
        chart = sys.charts[chart_id]
        cache_key = (chart_id, orbit.cone.key())
        dual_face = cache.get(cache_key)
        if dual_face is None:
            perp = Cone.from_inequalities([], orbit.cone.rays, sys.rank)
            dual_face = chart.dual().intersect(perp)
            cache[cache_key] = dual_face
        if any(dot(l, v) != 0 for l in dual_face.lineality.basis):
            continue
        pairings = [dot(r, v) for r in dual_face.rays]
        if any(x < 0 for x in pairings):
            continue
        tight = [r for r, x in zip(dual_face.rays, pairings) if x == 0]
        rays1 = [
            r for r in chart.rays if all(dot(u, r) == 0 for u in tight)
        ]
        gamma1 = Cone.from_generators(rays1, sys.rank)
        out[sys.orbit(chart_id, gamma1)] = None
    return tuple(sorted(out, key=OrbitIndex.sort_key))


def one_param_limits(
    space: Fan | FanSystem, v: Sequence[int], p: OrbitPoint
) -> tuple[OrbitPoint, ...]:
    """All limit points of s -> lambda_v(s) * p as s -> 0, deduplicated
    across charts.  Empty when no chart admits a limit; for a fan the result
    has at most one element."""
    if p.space != space:
        raise ValueError("point does not live on the given space")
    targets = orbit_limit_targets(space, p.orbit, v)
    return tuple(OrbitPoint.make(space, t, p.coset) for t in targets)


# ---------------------------------------------------------------------------
# fibers


@dataclass(frozen=True)
class ParametricCoset:
    """Defining data of a fiber piece with no rational representative: the
    monomial system cutting it out, plus the kernel lattice."""

    orbit: OrbitIndex
    exponents: IntMatrix
    target: tuple[Fraction, ...]
    kernel: Sublattice

    def contains_coset(self, t: TorusElement) -> bool:
        return apply_exponent_matrix(self.exponents, t.coords) == self.target


@dataclass(frozen=True, eq=False)
class FiberPiece:
    """One irreducible piece of a fiber: the sweep of a representative by the
    subtorus T_K; K always contains the isotropy lattice of the orbit."""

    orbit: OrbitIndex
    subtorus: Sublattice
    representative: OrbitPoint | ParametricCoset

    @property
    def is_single_point(self) -> bool:
        return self.subtorus == self.orbit.cone.span_lattice

    def contains(self, p: OrbitPoint) -> bool:
        if not isinstance(self.representative, OrbitPoint):
            raise ValueError("piece has no rational representative")
        if p.orbit != self.orbit:
            return False
        ratio = p.coset * self.representative.coset.inverse()
        return self.subtorus.in_subtorus(ratio.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiberPiece):
            return NotImplemented
        if self.orbit != other.orbit or self.subtorus != other.subtorus:
            return False
        a, b = self.representative, other.representative
        if isinstance(a, OrbitPoint) and isinstance(b, OrbitPoint):
            ratio = a.coset * b.coset.inverse()
            return self.subtorus.in_subtorus(ratio.coords)
        return a == b

    def __hash__(self) -> int:
        return hash((self.orbit, self.subtorus.basis))


def fiber_pieces(m: ToricMorphism, y: OrbitPoint) -> tuple[FiberPiece, ...]:
    """The fiber of a toric morphism over a rational target point, as a
    disjoint union of subtorus-coset pieces, one per solvable source orbit."""
    if y.space != m.target:
        raise ValueError("target point does not live on the morphism's target")
    gamma_orbit = y.orbit
    char_basis = gamma_orbit.cone.span_perp  # characters vanishing on span(gamma)
    basis_matrix = IntMatrix(char_basis.basis, m.matrix.nrows)
    exponents = basis_matrix @ m.matrix
    targets = tuple(y.coset.chi(u) for u in char_basis.basis)
    # the coset equation is the same for every source orbit over gamma
    sol = solve_torus_equation(exponents, targets)
    pieces: list[FiberPiece] = []
    src = system_view(m.source)
    for orbit in src.orbits():
        if m.orbit_assignment[orbit] != gamma_orbit:
            continue
        if isinstance(sol, Inconsistent):
            continue
        if isinstance(sol, NoRationalPoint):
            pieces.append(
                FiberPiece(
                    orbit,
                    sol.kernel,
                    ParametricCoset(orbit, exponents, targets, sol.kernel),
                )
            )
            continue
        rep_coords = sol.kernel.coset_reduce(sol.representative)
        rep = OrbitPoint.make(m.source, orbit, TorusElement(rep_coords))
        pieces.append(FiberPiece(orbit, sol.kernel, rep))
    return tuple(pieces)
