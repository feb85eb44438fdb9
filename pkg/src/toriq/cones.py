"""Rational polyhedral cones in canonical form.

The single geometric engine is an incremental double description method:
inserting one inequality at a time into a (rays, lines) description, with
the algebraic rank test for ray adjacency.  Canonical form of a cone is its
sorted primitive extreme rays (reduced modulo the lineality space) together
with the saturated HNF basis of the lineality lattice, which makes equality
and hashing structural.

Two description passes are run per cone: generators -> inequalities gives
the facet normals (these are the canonical extreme rays of the dual cone),
and inequalities -> generators gives the canonical rays.  Duality is then a
pure swap of the stored data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .intlinalg import (
    IntMatrix,
    IntVec,
    Sublattice,
    dot,
    is_zero_vec,
    lattice_points_in_box,
    primitive,
    rank_of_rows,
    reduce_mod_span,
    vec,
    vec_neg,
    vec_sub,
)


# ---------------------------------------------------------------------------
# double description


def _double_description(
    rank: int, ineqs: Sequence[IntVec], eqs: Sequence[IntVec]
) -> tuple[list[IntVec], list[IntVec]]:
    """Rays and lines of {x : <a,x> >= 0 for a in ineqs, <b,x> = 0 for b in eqs}.

    Equalities are inserted first (as inequality pairs), then inequalities in
    the given order.  Rays in the result are extreme; lines span the
    lineality space (the returned basis need not be saturated).
    """
    rays: list[IntVec] = []
    lines: list[IntVec] = [
        tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)
    ]
    processed: list[IntVec] = []

    def insert(a: IntVec) -> None:
        nonlocal rays, lines
        if is_zero_vec(a):
            return
        split = next((i for i, l in enumerate(lines) if dot(a, l) != 0), None)
        if split is not None:
            l0 = lines.pop(split)
            if dot(a, l0) < 0:
                l0 = vec_neg(l0)
            al0 = dot(a, l0)
            lines = [
                primitive(tuple(al0 * x - dot(a, l) * y for x, y in zip(l, l0)))
                for l in lines
            ]
            rays = [
                primitive(tuple(al0 * x - dot(a, r) * y for x, y in zip(r, l0)))
                for r in rays
            ]
            rays.append(l0)
        else:
            values = [dot(a, r) for r in rays]
            if any(v < 0 for v in values):
                rank_proc = rank_of_rows(processed)
                pos = [r for r, v in zip(rays, values) if v > 0]
                zero = [r for r, v in zip(rays, values) if v == 0]
                neg = [r for r, v in zip(rays, values) if v < 0]
                tight = {
                    r: [p for p in processed if dot(p, r) == 0] for r in pos + neg
                }
                combos: list[IntVec] = []
                for rp in pos:
                    tp = tight[rp]
                    for rn in neg:
                        common = [p for p in tp if dot(p, rn) == 0]
                        if rank_of_rows(common) == rank_proc - 2:
                            combo = tuple(
                                dot(a, rp) * x - dot(a, rn) * y
                                for x, y in zip(rn, rp)
                            )
                            combos.append(primitive(combo))
                seen = set(pos + zero)
                new_rays = pos + zero
                for c in combos:
                    if c not in seen:
                        seen.add(c)
                        new_rays.append(c)
                rays = new_rays
        processed.append(a)

    for b in eqs:
        if not is_zero_vec(b):
            insert(tuple(b))
            insert(vec_neg(b))
    for a in ineqs:
        insert(tuple(a))
    return rays, lines


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True, eq=False)
class Cone:
    """A rational polyhedral cone in canonical form.

    ``rays`` are the primitive extreme rays reduced modulo the lineality
    space and sorted; ``lineality`` is the saturated lattice of the lineality
    space; ``facet_normals`` are the canonical extreme rays of the dual cone
    (inequalities <u, x> >= 0); ``span_perp`` is the saturated lattice
    orthogonal to the span of the cone.
    """

    ambient: int
    rays: tuple[IntVec, ...]
    lineality: Sublattice
    facet_normals: tuple[IntVec, ...]
    span_perp: Sublattice

    # -- construction -------------------------------------------------------

    @classmethod
    def from_generators(cls, generators: Iterable[Sequence[int]], rank: int) -> "Cone":
        gens: list[IntVec] = []
        for g in generators:
            g = vec(g)
            if len(g) != rank:
                raise ValueError(f"generator of length {len(g)} in rank {rank}")
            if not is_zero_vec(g):
                gens.append(primitive(g))
        gens = sorted(set(gens))
        rays_d, lines_d = _double_description(rank, gens, [])
        dual_lin = Sublattice.from_rows(rank, lines_d).saturate()
        facets = _canonical_rays(rays_d, dual_lin)
        rays_p, lines_p = _double_description(rank, facets, dual_lin.basis)
        lin = Sublattice.from_rows(rank, lines_p).saturate()
        rays = _canonical_rays(rays_p, lin)
        return cls(rank, rays, lin, facets, dual_lin)

    @classmethod
    def from_inequalities(
        cls,
        inequalities: Iterable[Sequence[int]],
        equalities: Iterable[Sequence[int]],
        rank: int,
    ) -> "Cone":
        ineqs = sorted({primitive(vec(a)) for a in inequalities if not is_zero_vec(vec(a))})
        eqs = [vec(b) for b in equalities]
        rays, lines = _double_description(rank, ineqs, eqs)
        gens = list(rays)
        for l in lines:
            gens.append(l)
            gens.append(vec_neg(l))
        return cls.from_generators(gens, rank)

    @classmethod
    def zero(cls, rank: int) -> "Cone":
        return cls.from_generators([], rank)

    @classmethod
    def full(cls, rank: int) -> "Cone":
        basis = IntMatrix.identity(rank).rows
        return cls.from_generators(list(basis) + [vec_neg(b) for b in basis], rank)

    # -- identity -----------------------------------------------------------

    def key(self):
        return (self.ambient, self.rays, self.lineality.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, Cone) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        parts = [f"rays={list(self.rays)}"]
        if self.lineality.rank:
            parts.append(f"lines={list(self.lineality.basis)}")
        return f"Cone({self.ambient}; {', '.join(parts)})"

    # -- basic geometry -----------------------------------------------------

    @property
    def span_lattice(self) -> Sublattice:
        """Saturated lattice spanned by the cone (the isotropy lattice N_sigma)."""
        cached = getattr(self, "_span", None)
        if cached is None:
            cached = self.span_perp.perp()
            object.__setattr__(self, "_span", cached)
        return cached

    @property
    def dim(self) -> int:
        return self.ambient - self.span_perp.rank

    @property
    def is_pointed(self) -> bool:
        return self.lineality.rank == 0

    def dual(self) -> "Cone":
        return Cone(
            self.ambient,
            self.facet_normals,
            self.span_perp,
            self.rays,
            self.lineality,
        )

    def generators(self) -> tuple[IntVec, ...]:
        """Rays plus +/- lineality basis: a generating set of the cone."""
        out = list(self.rays)
        for b in self.lineality.basis:
            out.append(b)
            out.append(vec_neg(b))
        return tuple(out)

    def contains_point(self, v: Sequence[int]) -> bool:
        v = vec(v)
        if len(v) != self.ambient:
            raise ValueError("rank mismatch")
        if any(dot(b, v) != 0 for b in self.span_perp.basis):
            return False
        return all(dot(u, v) >= 0 for u in self.facet_normals)

    def contains_cone(self, other: "Cone") -> bool:
        if other.ambient != self.ambient:
            raise ValueError("rank mismatch")
        return all(self.contains_point(g) for g in other.generators())

    def relint_point(self) -> IntVec:
        """A canonical lattice point in the relative interior (sum of rays)."""
        out = [0] * self.ambient
        for r in self.rays:
            out = [x + y for x, y in zip(out, r)]
        return tuple(out)

    def classify(self, v: Sequence[int]) -> "PointClassification":
        v = vec(v)
        if len(v) != self.ambient:
            raise ValueError("rank mismatch")
        if any(dot(b, v) != 0 for b in self.span_perp.basis):
            return PointClassification.outside()
        values = [dot(u, v) for u in self.facet_normals]
        if any(x < 0 for x in values):
            return PointClassification.outside()
        tight = [u for u, x in zip(self.facet_normals, values) if x == 0]
        if not tight:
            return PointClassification.relint()
        return PointClassification.on_face(self._face_from_tight(tight))

    def _face_from_tight(self, tight_normals: Sequence[IntVec]) -> "Cone":
        rays = [
            r
            for r in self.rays
            if all(dot(u, r) == 0 for u in tight_normals)
        ]
        gens = list(rays)
        for b in self.lineality.basis:
            gens.append(b)
            gens.append(vec_neg(b))
        return Cone.from_generators(gens, self.ambient)

    def faces(self) -> tuple["Cone", ...]:
        """All faces of a pointed cone, ordered by (dim, generators)."""
        if not self.is_pointed:
            raise ValueError("face enumeration requires a pointed cone")
        cached = getattr(self, "_faces", None)
        if cached is not None:
            return cached
        found: dict = {}
        normals = self.facet_normals
        for mask in range(1 << len(normals)):
            chosen = [normals[i] for i in range(len(normals)) if mask >> i & 1]
            rays = [r for r in self.rays if all(dot(u, r) == 0 for u in chosen)]
            face = Cone.from_generators(rays, self.ambient)
            found[face.key()] = face
        out = tuple(sorted(found.values(), key=lambda c: (c.dim, c.rays)))
        object.__setattr__(self, "_faces", out)
        return out

    def is_face_of(self, other: "Cone") -> bool:
        """Is this cone a face of ``other``?"""
        if not other.contains_cone(self):
            return False
        tight = [
            u
            for u in other.facet_normals
            if all(dot(u, g) == 0 for g in self.generators())
        ]
        return other._face_from_tight(tight) == self

    def intersect(self, other: "Cone") -> "Cone":
        if self.ambient != other.ambient:
            raise ValueError("rank mismatch")
        return Cone.from_inequalities(
            list(self.facet_normals) + list(other.facet_normals),
            list(self.span_perp.basis) + list(other.span_perp.basis),
            self.ambient,
        )


@dataclass(frozen=True)
class PointClassification:
    """Location of a point relative to a cone: outside, on a proper face, or
    in the relative interior.  ``face`` carries the minimal containing face."""

    kind: str
    face: Cone | None = None

    @classmethod
    def outside(cls) -> "PointClassification":
        return cls("outside")

    @classmethod
    def relint(cls) -> "PointClassification":
        return cls("relint")

    @classmethod
    def on_face(cls, face: Cone) -> "PointClassification":
        return cls("on_face", face)

    @property
    def is_outside(self) -> bool:
        return self.kind == "outside"

    @property
    def is_relint(self) -> bool:
        return self.kind == "relint"


def _canonical_rays(rays: Iterable[IntVec], lineality: Sublattice) -> tuple[IntVec, ...]:
    out = set()
    for r in rays:
        reduced = reduce_mod_span(r, lineality.basis)
        if not is_zero_vec(reduced):
            out.add(reduced)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# top-level operations


def cone_canonical(generators: Iterable[Sequence[int]], rank: int) -> Cone:
    return Cone.from_generators(generators, rank)


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def faces(c: Cone) -> tuple[Cone, ...]:
    return c.faces()


def classify_point(c: Cone, v: Sequence[int]) -> PointClassification:
    return c.classify(v)


def intersect(a: Cone, b: Cone) -> Cone:
    return a.intersect(b)


def image_cone(p: IntMatrix, c: Cone) -> Cone:
    """The cone generated by the images of the generators under p."""
    if p.ncols != c.ambient:
        raise ValueError("matrix columns must match the cone's rank")
    gens = [p.apply(g) for g in c.generators()]
    return Cone.from_generators(gens, p.nrows)


def semigroup_generators(c: Cone) -> tuple[IntVec, ...]:
    """A finite generating set of the monoid C intersect Z^n.

    For a pointed cone this is the Hilbert basis; with lineality it is a
    Hilbert basis of the pointed quotient (lifted) together with +/- a basis
    of the lineality lattice.
    """
    cached = getattr(c, "_semigroup", None)
    if cached is not None:
        return cached
    lin = c.lineality
    if c.dim == 0:
        out: tuple[IntVec, ...] = ()
    elif lin.rank == 0:
        out = tuple(sorted(_hilbert_basis_pointed(c)))
    else:
        qmat = lin.quotient_matrix()
        cbar = Cone.from_generators([qmat.apply(r) for r in c.rays], qmat.nrows)
        lifted = []
        for h in _hilbert_basis_pointed(cbar):
            x = list(lin.lift_from_quotient(h))
            for row in lin.basis:
                p = next(j for j, e in enumerate(row) if e != 0)
                q = x[p] // row[p]
                if q:
                    x = [a - q * b for a, b in zip(x, row)]
            lifted.append(tuple(x))
        extra = []
        for b in lin.basis:
            extra.append(b)
            extra.append(vec_neg(b))
        out = tuple(sorted(set(lifted + extra)))
    object.__setattr__(c, "_semigroup", out)
    return out


def _hilbert_basis_pointed(c: Cone) -> list[IntVec]:
    """Hilbert basis of a pointed cone by bounded enumeration.

    Every irreducible element lies in {sum lambda_i r_i : lambda_i in [0, 1]},
    so candidates are drawn from the coordinate bounding box of that zonotope
    and sieved for irreducibility.
    """
    if c.dim == 0:
        return []
    n = c.ambient
    lo = [sum(min(0, r[j]) for r in c.rays) for j in range(n)]
    hi = [sum(max(0, r[j]) for r in c.rays) for j in range(n)]
    candidates = [
        x
        for x in lattice_points_in_box(lo, hi)
        if not is_zero_vec(x) and c.contains_point(x)
    ]
    basis = []
    for x in candidates:
        reducible = any(
            y != x and c.contains_point(vec_sub(x, y)) for y in candidates
        )
        if not reducible:
            basis.append(x)
    return basis
