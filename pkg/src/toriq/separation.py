"""Separation-forced identifications on glued toric charts.

Any morphism from a non-separated chart system to a separated space must
take equal values on distinct limit points of a single curve.  Starting from
one class per orbit, two closure rules are applied to a fixpoint:

  R1: for a test vector v, the limits of one translated orbit family may
      land on several distinct orbits (across charts); all those limit
      orbits get identified with the same translation parameter.

  R2: whenever the family of a class has a limit along v, the image of the
      limit family depends on the translation only through the class's
      subtorus, so that subtorus propagates into the limit class.

A merge sets the class subtorus lattice to the saturation of the sum of the
participating lattices and the isotropy lattices of all member orbits.  The
resulting partition is compared against the fibers of a comparison morphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cones import Cone, image_cone
from .fans import Fan, FanSystem, OrbitIndex, system_view
from .intlinalg import (
    IntMatrix,
    IntVec,
    Sublattice,
    is_zero_vec,
    kernel_saturated,
    primitive,
    saturated_preimage,
)
from .morphisms import (
    ToricMorphism,
    complement_codim,
    fiber_pieces,
    image_constructible,
    one_param_limits,
    orbit_limit_targets,
    toric_morphism,
)
from .points import OrbitPoint, TorusElement, act, distinguished_point


# ---------------------------------------------------------------------------
# constructions


def project_prevariety(source: Fan, pmat: IntMatrix) -> tuple[FanSystem, ToricMorphism]:
    """Charts are the images of the maximal cones, glued along the images of
    the pairwise intersections; returns the glued system and the induced
    morphism onto it."""
    charts = []
    for sigma in source.maximal_cones:
        img = image_cone(pmat, sigma)
        if not img.is_pointed:
            raise ValueError(f"image of {sigma!r} is not pointed")
        charts.append(img)
    gluing = {}
    for i in range(len(charts)):
        for j in range(i + 1, len(charts)):
            meet = source.maximal_cones[i].intersect(source.maximal_cones[j])
            gluing[(i, j)] = image_cone(pmat, meet)
    system = FanSystem(charts, gluing)
    return system, toric_morphism(pmat, source, system)


def comparison_morphism(system: FanSystem, target: Fan) -> ToricMorphism:
    """The identity-lattice morphism from a chart system to an ambient fan."""
    if system.rank != target.rank:
        raise ValueError("system and fan live in different ranks")
    return toric_morphism(IntMatrix.identity(system.rank), system, target)


def invariance_check(weight: Sequence[int], pmat: IntMatrix) -> bool:
    """Does the one-parameter action with this weight vector die under pmat?"""
    return is_zero_vec(pmat.apply(tuple(weight)))


# ---------------------------------------------------------------------------
# identification partition


@dataclass(frozen=True)
class FamilyIdentification:
    """Same-parameter identification of two translated orbit families:
    for every torus element t, (a, t) is glued to (b, t)."""

    a: OrbitIndex
    b: OrbitIndex


@dataclass(frozen=True)
class MergeEvent:
    """One effective application of a closure rule."""

    vector: IntVec
    source_orbits: tuple[OrbitIndex, ...]
    limit_orbits: tuple[OrbitIndex, ...]

    def pairs(self) -> tuple[FamilyIdentification, ...]:
        first = self.limit_orbits[0]
        return tuple(FamilyIdentification(first, o) for o in self.limit_orbits[1:])


@dataclass(frozen=True)
class IdentClass:
    """A class of orbits identified along the subtorus T_K: points (a, t) and
    (b, t') coincide iff both orbits are members and t' * t^-1 lies in T_K."""

    orbits: tuple[OrbitIndex, ...]
    subtorus: Sublattice


@dataclass(frozen=True)
class IdentificationPartition:
    system: FanSystem
    classes: tuple[IdentClass, ...]
    events: tuple[MergeEvent, ...]

    def class_of(self, orbit: OrbitIndex) -> IdentClass:
        for cls in self.classes:
            if orbit in cls.orbits:
                return cls
        raise KeyError(f"orbit {orbit!r} is not part of the partition")

    def same_class(self, a: OrbitIndex, b: OrbitIndex) -> bool:
        return self.class_of(a) is self.class_of(b)


def _test_vectors(system: FanSystem) -> tuple[IntVec, ...]:
    """One primitive relative-interior representative per face of every
    chart and of every pairwise chart intersection."""
    cones: list[Cone] = []
    for chart in system.charts:
        cones.extend(chart.faces())
    for i in range(len(system.charts)):
        for j in range(i + 1, len(system.charts)):
            meet = system.charts[i].intersect(system.charts[j])
            cones.append(meet)
            if meet.is_pointed:
                cones.extend(meet.faces())
    out = set()
    for c in cones:
        if c.dim > 0:
            out.add(primitive(c.relint_point()))
    return tuple(sorted(out))


def forced_identifications(system: FanSystem) -> IdentificationPartition:
    """Fixpoint of the closure rules, starting from singleton classes with
    the orbit isotropy lattices.  Deterministic: classes are visited by
    their smallest orbit, vectors in lexicographic order."""
    orbits = system.orbits()
    parent: dict[OrbitIndex, OrbitIndex] = {o: o for o in orbits}

    def find(o: OrbitIndex) -> OrbitIndex:
        while parent[o] != o:
            parent[o] = parent[parent[o]]
            o = parent[o]
        return o

    lattice: dict[OrbitIndex, Sublattice] = {
        o: o.cone.span_lattice for o in orbits
    }
    vectors = _test_vectors(system)
    events: list[MergeEvent] = []
    changed = True
    while changed:
        changed = False
        for root in sorted(set(parent.values()), key=OrbitIndex.sort_key):
            for v in vectors:
                root = find(root)
                members = tuple(
                    sorted((o for o in orbits if find(o) == root), key=OrbitIndex.sort_key)
                )
                k_class = lattice[root]
                limit_orbits = tuple(
                    sorted(
                        {g for o in members for g in orbit_limit_targets(system, o, v)},
                        key=OrbitIndex.sort_key,
                    )
                )
                if not limit_orbits:
                    continue
                target_roots = sorted(
                    {find(g) for g in limit_orbits}, key=OrbitIndex.sort_key
                )
                new_root = target_roots[0]
                merged = k_class
                for r in target_roots:
                    merged = merged + lattice[r]
                for r in target_roots[1:]:
                    parent[r] = new_root
                for o in orbits:
                    if find(o) == new_root:
                        merged = merged + o.cone.span_lattice
                merged = merged.saturate()
                if len(target_roots) > 1 or merged != lattice[new_root]:
                    changed = True
                    events.append(MergeEvent(v, members, limit_orbits))
                lattice[new_root] = merged
    groups: dict[OrbitIndex, list[OrbitIndex]] = {}
    for o in orbits:
        groups.setdefault(find(o), []).append(o)
    classes = tuple(
        sorted(
            (
                IdentClass(tuple(sorted(members, key=OrbitIndex.sort_key)), lattice[root])
                for root, members in groups.items()
            ),
            key=lambda c: c.orbits[0].sort_key(),
        )
    )
    return IdentificationPartition(system, classes, tuple(events))


# ---------------------------------------------------------------------------
# comparison with fibers


def partition_matches_fibers(
    part: IdentificationPartition, kappa: ToricMorphism
) -> tuple[bool, list[tuple[str, bool, str]]]:
    """Do the classes coincide with the fibers of the comparison morphism?

    Checks, per class: a single target orbit, and the class subtorus equal to
    the saturated preimage of the target orbit's isotropy lattice.  Checks,
    per fiber over a distinguished point: the piece list realizes exactly one
    class, with matching subtorus lattices.
    """
    if system_view(kappa.source) != system_view(part.system):
        raise ValueError("partition and morphism have different sources")
    report: list[tuple[str, bool, str]] = []
    ok = True
    class_by_orbits = {cls.orbits: cls for cls in part.classes}
    for cls in part.classes:
        label = "class " + "+".join(_orbit_tag(o) for o in cls.orbits)
        targets = {kappa.orbit_assignment[o] for o in cls.orbits}
        if len(targets) != 1:
            ok = False
            report.append((label, False, "members map to several target orbits"))
            continue
        gamma = next(iter(targets))
        expected = saturated_preimage(kappa.matrix, gamma.cone.span_lattice)
        good = cls.subtorus == expected
        ok = ok and good
        report.append(
            (label, good,
             f"subtorus {'matches' if good else 'differs from'} fiber lattice over {_orbit_tag(gamma)}")
        )
    fibers: dict[OrbitIndex, set[OrbitIndex]] = {}
    for orbit, target in kappa.orbit_assignment.items():
        fibers.setdefault(target, set()).add(orbit)
    for target, sources in sorted(fibers.items(), key=lambda kv: kv[0].sort_key()):
        label = f"fiber over {_orbit_tag(target)}"
        y = OrbitPoint.make(kappa.target, target, TorusElement.identity(kappa.matrix.nrows))
        pieces = fiber_pieces(kappa, y)
        piece_orbits = tuple(sorted((p.orbit for p in pieces), key=OrbitIndex.sort_key))
        cls = class_by_orbits.get(piece_orbits)
        if cls is None or set(piece_orbits) != sources:
            ok = False
            report.append((label, False, "fiber pieces do not form one class"))
            continue
        good = all(p.subtorus == cls.subtorus for p in pieces)
        ok = ok and good
        report.append(
            (label, good,
             "piece subtori match the class" if good else "piece subtori differ from the class")
        )
    return ok, report


def _orbit_tag(o: OrbitIndex) -> str:
    return f"(chart {o.chart}, rays {list(o.cone.rays)})"


# ---------------------------------------------------------------------------
# end-to-end verification of the built-in example


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def verify_example() -> VerificationReport:
    """Run the full pipeline on the built-in quotient example and report the
    seven structural checks."""
    from . import example

    ex = example.build_example()
    checks: list[CheckResult] = []

    # 1. invariance of the quotient map under the given one-parameter action
    inv = invariance_check(ex.weight, ex.lattice_map)
    kernel = kernel_saturated(ex.lattice_map)
    want_kernel = Sublattice.from_rows(ex.lattice_map.ncols, [ex.weight])
    inv_ok = inv and kernel == want_kernel
    checks.append(
        CheckResult(
            "invariance",
            inv_ok,
            "weight is killed by the lattice map and spans its saturated kernel"
            if inv_ok
            else "weight fails invariance or does not span the kernel",
        )
    )

    # the quotient pipeline; chart numbering follows the built-in system
    projected, _pi_tilde = project_prevariety(ex.source_fan, ex.lattice_map)
    system = ex.system
    kappa = comparison_morphism(system, ex.target_fan)
    pipeline_ok = projected.is_equivalent(system)

    # 2. constructible image
    img = image_constructible(ex.pi)
    img_kappa = image_constructible(kappa)
    present = set(img.present)
    absent = set(img.absent)
    img_ok = (
        pipeline_ok
        and present == set(ex.expected_present)
        and absent == set(ex.expected_absent)
        and set(img_kappa.present) == present
        and set(img_kappa.absent) == absent
    )
    checks.append(
        CheckResult(
            "image",
            img_ok,
            f"{len(present)} orbits present, {len(absent)} absent, equal for both morphisms"
            if img_ok
            else "image orbit sets differ from the expected decomposition",
        )
    )

    # 3. the four fiber shapes, at several translations
    fiber_ok = True
    for t in (
        TorusElement.identity(3),
        TorusElement((2, 3, 5)),
        TorusElement(("1/2", 7, -3)),
    ):
        fiber_ok = fiber_ok and _check_fibers(ex, system, kappa, t)
    checks.append(
        CheckResult(
            "fibers",
            fiber_ok,
            "all four fiber shapes reproduced at several translations"
            if fiber_ok
            else "a fiber differs from the expected shape",
        )
    )

    # 4. the two-limit computation
    t = TorusElement((2, 3, 5))
    v = ex.limit_vector
    p0 = act(t, distinguished_point(system, Cone.zero(3)))
    lims = one_param_limits(system, v, p0)
    expected = {
        act(t, distinguished_point(system, ex.cones["tau1"])),
        act(t, distinguished_point(system, ex.cones["rho4"])),
    }
    q0 = act(t, distinguished_point(ex.target_fan, Cone.zero(3)))
    lims_fan = one_param_limits(ex.target_fan, v, q0)
    lim_ok = (
        set(lims) == expected
        and len(lims) == 2
        and len(lims_fan) == 1
        and lims_fan[0] == act(t, distinguished_point(ex.target_fan, ex.cones["tau1"]))
    )
    checks.append(
        CheckResult(
            "limits",
            lim_ok,
            "two limit points in the glued system, one in the separated target"
            if lim_ok
            else "limit sets differ from the expected points",
        )
    )

    # 5. codimension of the complement of the image
    codim = complement_codim(img)
    codim_ok = codim == 2
    checks.append(
        CheckResult(
            "codimension",
            codim_ok,
            f"complement of the image has codimension {codim}",
        )
    )

    # 6. the forced identification partition
    part = forced_identifications(system)
    part_ok = _partition_signature(part) == ex.expected_partition
    checks.append(
        CheckResult(
            "identifications",
            part_ok,
            f"{len(part.classes)} classes with the expected subtorus lattices"
            if part_ok
            else "partition differs from the expected class list",
        )
    )

    # 7. classes versus fibers
    match_ok, _ = partition_matches_fibers(part, kappa)
    checks.append(
        CheckResult(
            "quotient-comparison",
            match_ok,
            "identification classes coincide with the comparison fibers"
            if match_ok
            else "classes and fibers disagree",
        )
    )
    return VerificationReport(tuple(checks))


def _check_fibers(ex, system: FanSystem, kappa: ToricMorphism, t: TorusElement) -> bool:
    target = ex.target_fan
    zero = Cone.zero(3)

    y0 = act(t, distinguished_point(target, zero))
    pieces = fiber_pieces(kappa, y0)
    if len(pieces) != 1:
        return False
    piece = pieces[0]
    if not (
        piece.orbit.cone == zero
        and piece.is_single_point
        and piece.representative == act(t, distinguished_point(system, zero))
    ):
        return False

    for name in ("rho1", "rho2", "rho3"):
        ray = ex.cones[name]
        pieces = fiber_pieces(kappa, act(t, distinguished_point(target, ray)))
        if len(pieces) != 1:
            return False
        piece = pieces[0]
        if not (
            piece.orbit.cone == ray
            and piece.is_single_point
            and piece.subtorus == ray.span_lattice
            and piece.representative == act(t, distinguished_point(system, ray))
        ):
            return False

    tau1 = ex.cones["tau1"]
    pieces = fiber_pieces(kappa, act(t, distinguished_point(target, tau1)))
    want_k = tau1.span_lattice
    if len(pieces) != 2:
        return False
    orbit_cones = {p.orbit.cone for p in pieces}
    if orbit_cones != {tau1, ex.cones["rho4"]}:
        return False
    if not all(p.subtorus == want_k for p in pieces):
        return False
    for p in pieces:
        probe = act(t, distinguished_point(system, p.orbit.cone))
        if not p.contains(probe):
            return False

    delta = ex.cones["delta"]
    pieces = fiber_pieces(kappa, distinguished_point(target, delta))
    if len(pieces) != 1:
        return False
    piece = pieces[0]
    return (
        piece.orbit.cone == ex.cones["tau2"]
        and piece.subtorus == Sublattice.full(3)
        and piece.contains(act(t, distinguished_point(system, ex.cones["tau2"])))
    )


def _partition_signature(part: IdentificationPartition):
    """Hashable summary of a partition: member cones and subtorus bases."""
    return tuple(
        sorted(
            (
                tuple(sorted((o.chart, o.cone.rays) for o in cls.orbits)),
                cls.subtorus.basis,
            )
            for cls in part.classes
        )
    )
