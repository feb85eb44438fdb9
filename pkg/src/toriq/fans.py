"""Fans and fan systems.

A ``Fan`` is a finite collection of pointed cones closed under faces and
intersecting pairwise in common faces; it models a separated toric variety.
A ``FanSystem`` is a list of pointed chart cones together with an explicit
gluing face for every pair of charts; when a gluing face is smaller than the
set-theoretic intersection of the charts the glued space is a non-separated
prevariety.

Orbits are indexed by (chart, face) pairs; two pairs denote the same orbit
exactly when the face is contained in the gluing cone of the chart pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .cones import Cone
from .intlinalg import vec


class FanViolation(ValueError):
    """Two cones of a would-be fan do not intersect in a common face."""

    def __init__(self, i: int, j: int, message: str | None = None):
        self.indices = (i, j)
        super().__init__(
            message
            or f"cones {i} and {j} do not intersect in a common face"
        )


class GluingViolation(ValueError):
    """A gluing cone is not a common face of its two charts, or the gluing
    data is not transitively consistent."""


@dataclass(frozen=True)
class OrbitIndex:
    """Canonical label of a torus orbit: a chart id and a face of that chart."""

    chart: int
    cone: Cone

    def sort_key(self):
        return (self.cone.dim, self.chart, self.cone.key())


class FanSystem:
    """Pointed affine charts glued along explicit common faces."""

    def __init__(
        self,
        charts: Sequence[Cone],
        gluing: Mapping[tuple[int, int], Cone] | None = None,
        rank: int | None = None,
    ):
        charts = tuple(charts)
        if not charts and rank is None:
            raise ValueError("rank required for an empty system")
        self.rank = charts[0].ambient if rank is None else rank
        for c in charts:
            if c.ambient != self.rank:
                raise ValueError("charts live in different ranks")
            if not c.is_pointed:
                raise ValueError("chart cones must be pointed")
        self.charts = charts
        zero = Cone.zero(self.rank)
        table: dict[tuple[int, int], Cone] = {}
        gluing = dict(gluing or {})
        for key in list(gluing):
            i, j = key
            if i > j:
                gluing.setdefault((j, i), gluing[key])
                del gluing[key]
        for i in range(len(charts)):
            for j in range(i + 1, len(charts)):
                g = gluing.pop((i, j), zero)
                if not (g.is_face_of(charts[i]) and g.is_face_of(charts[j])):
                    raise GluingViolation(
                        f"gluing cone for charts {i}, {j} is not a common face"
                    )
                table[(i, j)] = g
        if gluing:
            raise GluingViolation(f"gluing refers to unknown chart pairs: {sorted(gluing)}")
        self.gluing = table
        self._check_transitive()
        self.separated = all(
            g == self.charts[i].intersect(self.charts[j])
            and g.is_face_of(self.charts[i])
            and g.is_face_of(self.charts[j])
            for (i, j), g in table.items()
        )
        self._build_orbits()

    def _check_transitive(self) -> None:
        m = len(self.charts)
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    if len({i, j, k}) < 3:
                        continue
                    gij = self.gluing_cone(i, j)
                    gjk = self.gluing_cone(j, k)
                    gik = self.gluing_cone(i, k)
                    if not gik.contains_cone(gij.intersect(gjk)):
                        raise GluingViolation(
                            f"gluing not transitive across charts {i}, {j}, {k}"
                        )

    def gluing_cone(self, i: int, j: int) -> Cone:
        if i == j:
            return self.charts[i]
        return self.gluing[(min(i, j), max(i, j))]

    def _build_orbits(self) -> None:
        pairs: list[tuple[int, Cone]] = []
        for i, chart in enumerate(self.charts):
            for f in chart.faces():
                pairs.append((i, f))
        parent = {idx: idx for idx in range(len(pairs))}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a: int, b: int) -> None:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        index = {(i, f.key()): idx for idx, (i, f) in enumerate(pairs)}
        for (i, j), g in self.gluing.items():
            for f in self.charts[i].faces():
                if g.contains_cone(f):
                    union(index[(i, f.key())], index[(j, f.key())])
        classes: dict[int, list[int]] = {}
        for idx in range(len(pairs)):
            classes.setdefault(find(idx), []).append(idx)
        self._rep_of_pair: dict[tuple[int, tuple], OrbitIndex] = {}
        self._realizations: dict[OrbitIndex, tuple[tuple[int, Cone], ...]] = {}
        orbit_list = []
        for members in classes.values():
            rep_idx = min(members, key=lambda ix: (pairs[ix][0], pairs[ix][1].key()))
            rep = OrbitIndex(pairs[rep_idx][0], pairs[rep_idx][1])
            orbit_list.append(rep)
            reals = tuple(
                sorted(((pairs[ix][0], pairs[ix][1]) for ix in members),
                       key=lambda t: t[0])
            )
            self._realizations[rep] = reals
            for ix in members:
                self._rep_of_pair[(pairs[ix][0], pairs[ix][1].key())] = rep
        self._orbits = tuple(sorted(orbit_list, key=OrbitIndex.sort_key))

    # -- orbit bookkeeping ---------------------------------------------------

    def orbit(self, chart: int, face: Cone) -> OrbitIndex:
        """Canonical orbit index of a face of the given chart."""
        key = (chart, face.key())
        if key not in self._rep_of_pair:
            raise ValueError(f"cone is not a face of chart {chart}")
        return self._rep_of_pair[key]

    def orbits(self) -> tuple[OrbitIndex, ...]:
        return self._orbits

    def realizations(self, orbit: OrbitIndex) -> tuple[tuple[int, Cone], ...]:
        """All (chart id, face) pairs denoting this orbit."""
        return self._realizations[orbit]

    def orbit_of_cone(self, cone: Cone) -> OrbitIndex:
        """The unique orbit whose cone equals the given one; error if absent
        or ambiguous (distinct unglued copies)."""
        hits = {o for o in self._orbits for (i, f) in self._realizations[o]
                if f == cone}
        if not hits:
            raise ValueError("no orbit with the given cone")
        if len(hits) > 1:
            raise ValueError("several distinct orbits share this cone; "
                             "specify the chart")
        return next(iter(hits))

    # -- identity ------------------------------------------------------------

    def key(self):
        return (
            "system",
            self.rank,
            tuple(c.key() for c in self.charts),
            tuple(sorted((ij, g.key()) for ij, g in self.gluing.items())),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, FanSystem) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        tag = "separated" if self.separated else "non-separated"
        return f"FanSystem(rank={self.rank}, charts={len(self.charts)}, {tag})"

    def as_fan(self) -> "Fan":
        """Convert a separated system to the fan with the same cones."""
        if not self.separated:
            raise ValueError("only separated systems define a fan")
        return Fan(self.charts)

    def is_equivalent(self, other: "FanSystem") -> bool:
        """Equality up to renumbering the charts."""
        import itertools

        if not isinstance(other, FanSystem):
            return False
        if self.rank != other.rank or len(self.charts) != len(other.charts):
            return False
        n = len(self.charts)
        for perm in itertools.permutations(range(n)):
            if any(other.charts[perm[i]] != self.charts[i] for i in range(n)):
                continue
            if all(
                other.gluing_cone(perm[i], perm[j]) == self.gluing_cone(i, j)
                for i in range(n)
                for j in range(i + 1, n)
            ):
                return True
        return False


class Fan:
    """A fan: pointed cones closed under faces, pairwise meeting in faces."""

    def __init__(self, maximal_cones: Iterable[Cone]):
        cones = list(maximal_cones)
        if not cones:
            raise ValueError("a fan needs at least one cone")
        self.rank = cones[0].ambient
        for c in cones:
            if c.ambient != self.rank:
                raise ValueError("cones live in different ranks")
            if not c.is_pointed:
                raise ValueError("fan cones must be pointed")
        for i in range(len(cones)):
            for j in range(i + 1, len(cones)):
                meet = cones[i].intersect(cones[j])
                if not (meet.is_face_of(cones[i]) and meet.is_face_of(cones[j])):
                    raise FanViolation(i, j)
        maximal = [
            c
            for i, c in enumerate(cones)
            if not any(j != i and cones[j].contains_cone(c) and cones[j] != c
                       for j in range(len(cones)))
        ]
        # keep one copy of exact duplicates
        seen: dict = {}
        for c in maximal:
            seen.setdefault(c.key(), c)
        self.maximal_cones = tuple(
            sorted(seen.values(), key=lambda c: (c.dim, c.rays))
        )
        all_faces: dict = {}
        for c in self.maximal_cones:
            for f in c.faces():
                all_faces.setdefault(f.key(), f)
        self.all_cones = tuple(
            sorted(all_faces.values(), key=lambda c: (c.dim, c.rays))
        )
        self._system: FanSystem | None = None

    # -- queries --------------------------------------------------------------

    def contains_cone(self, c: Cone) -> bool:
        return any(c == f for f in self.all_cones)

    def minimal_cone_containing(self, target: Cone | Sequence[int]) -> Cone | None:
        """The unique smallest fan cone containing the target, or None."""
        if isinstance(target, Cone):
            candidates = [c for c in self.all_cones if c.contains_cone(target)]
        else:
            v = vec(target)
            candidates = [c for c in self.all_cones if c.contains_point(v)]
        if not candidates:
            return None
        best = min(candidates, key=lambda c: (c.dim, c.rays))
        for c in candidates:
            if not c.contains_cone(best):
                raise AssertionError("fan validity violated: minimal cone not unique")
        return best

    def support_contains(self, v: Sequence[int]) -> bool:
        v = vec(v)
        return any(c.contains_point(v) for c in self.maximal_cones)

    def as_system(self) -> FanSystem:
        """The fan as a chart system glued along full intersections."""
        if self._system is None:
            charts = self.maximal_cones
            gluing = {
                (i, j): charts[i].intersect(charts[j])
                for i in range(len(charts))
                for j in range(i + 1, len(charts))
            }
            self._system = FanSystem(charts, gluing, rank=self.rank)
        return self._system

    def orbit_of_cone(self, cone: Cone) -> OrbitIndex:
        return self.as_system().orbit_of_cone(cone)

    def orbits(self) -> tuple[OrbitIndex, ...]:
        return self.as_system().orbits()

    # -- identity --------------------------------------------------------------

    def key(self):
        return ("fan", self.rank, tuple(c.key() for c in self.maximal_cones))

    def __eq__(self, other) -> bool:
        return isinstance(other, Fan) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Fan(rank={self.rank}, maximal={len(self.maximal_cones)}, cones={len(self.all_cones)})"


def build_fan(max_cones: Iterable[Cone]) -> Fan:
    return Fan(max_cones)


def build_fan_system(
    charts: Sequence[Cone],
    gluing: Mapping[tuple[int, int], Cone] | None = None,
) -> FanSystem:
    return FanSystem(charts, gluing)


def minimal_cone_containing(fan: Fan, target: Cone | Sequence[int]) -> Cone | None:
    return fan.minimal_cone_containing(target)


def system_view(space: Fan | FanSystem) -> FanSystem:
    """Uniform chart-system view of a fan or a fan system."""
    return space.as_system() if isinstance(space, Fan) else space
