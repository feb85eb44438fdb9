"""Scene files: named lattices, cones, fans, systems, maps, morphisms,
points, and weights, loaded from JSON and fully validated.

Integers are serialized as strings so arbitrary precision survives any JSON
parser; rationals are "p/q" strings.  Plain JSON integers are accepted on
input.  Floats are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .cones import Cone
from .fans import Fan, FanSystem, FanViolation, GluingViolation, OrbitIndex, system_view
from .intlinalg import IntMatrix, IntVec
from .morphisms import IncompatibleMorphism, ToricMorphism, toric_morphism
from .points import OrbitPoint, TorusElement


class SceneParseError(ValueError):
    """The scene document is malformed (bad JSON or bad shapes)."""


class SceneValidationError(ValueError):
    """An entity fails validation; carries the entity name and the reason."""

    def __init__(self, entity: str, reason: str):
        self.entity = entity
        self.reason = reason
        super().__init__(f"{entity}: {reason}")


def parse_integer(value, context: str = "integer") -> int:
    if isinstance(value, bool) or isinstance(value, float):
        raise SceneParseError(f"{context}: expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            raise SceneParseError(f"{context}: not an integer: {value!r}") from None
    raise SceneParseError(f"{context}: expected an integer, got {type(value).__name__}")


def parse_rational(value, context: str = "rational") -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise SceneParseError(f"{context}: expected an exact rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise SceneParseError(f"{context}: not a rational: {value!r}") from None
    raise SceneParseError(f"{context}: expected a rational, got {type(value).__name__}")


def _int_vector(values, context: str) -> IntVec:
    if not isinstance(values, list):
        raise SceneParseError(f"{context}: expected a list")
    return tuple(parse_integer(x, context) for x in values)


@dataclass
class Scene:
    """A validated collection of named entities."""

    lattices: dict[str, int] = field(default_factory=dict)
    cones: dict[str, Cone] = field(default_factory=dict)
    fans: dict[str, Fan] = field(default_factory=dict)
    systems: dict[str, FanSystem] = field(default_factory=dict)
    maps: dict[str, IntMatrix] = field(default_factory=dict)
    morphisms: dict[str, ToricMorphism] = field(default_factory=dict)
    points: dict[str, OrbitPoint] = field(default_factory=dict)
    weights: dict[str, IntVec] = field(default_factory=dict)

    def space(self, name: str) -> Fan | FanSystem:
        if name in self.fans:
            return self.fans[name]
        if name in self.systems:
            return self.systems[name]
        raise SceneValidationError(name, "unknown fan or system")

    def cone(self, name: str) -> Cone:
        if name not in self.cones:
            raise SceneValidationError(name, "unknown cone")
        return self.cones[name]

    def cone_name(self, cone: Cone) -> str | None:
        for name, c in sorted(self.cones.items()):
            if c == cone:
                return name
        return None

    def space_name(self, space) -> str | None:
        for name, s in sorted(self.fans.items()) + sorted(self.systems.items()):
            if s == space:
                return name
        return None


def load_scene(source) -> Scene:
    """Load and validate a scene from a path, JSON text, or a dict."""
    if isinstance(source, dict):
        doc = source
    else:
        if isinstance(source, Path) or (
            isinstance(source, str) and not source.lstrip().startswith("{")
        ):
            try:
                text = Path(source).read_text()
            except OSError as exc:
                raise SceneParseError(f"cannot read scene file: {exc}") from None
        else:
            text = source
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SceneParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SceneParseError("scene document must be a JSON object")
    known = {
        "lattices", "cones", "fans", "systems", "maps",
        "morphisms", "points", "weights",
    }
    unknown = set(doc) - known
    if unknown:
        raise SceneParseError(f"unknown scene sections: {sorted(unknown)}")

    scene = Scene()
    for name, rank in _section(doc, "lattices").items():
        r = parse_integer(rank, f"lattice {name}")
        if r < 0:
            raise SceneValidationError(name, "lattice rank must be nonnegative")
        scene.lattices[name] = r

    for name, spec in _section(doc, "cones").items():
        lat = _require(spec, "lattice", name)
        if lat not in scene.lattices:
            raise SceneValidationError(name, f"unknown lattice {lat!r}")
        rank = scene.lattices[lat]
        gens_raw = spec.get("generators", [])
        gens = [_int_vector(g, f"cone {name}") for g in gens_raw]
        for g in gens:
            if len(g) != rank:
                raise SceneValidationError(
                    name, f"generator of length {len(g)} in rank {rank}"
                )
        scene.cones[name] = Cone.from_generators(gens, rank)

    for name, spec in _section(doc, "fans").items():
        cone_names = _require(spec, "maximal_cones", name)
        cones = [scene.cone(c) for c in cone_names]
        try:
            scene.fans[name] = Fan(cones)
        except FanViolation as exc:
            i, j = exc.indices
            raise SceneValidationError(
                name,
                f"cones {cone_names[i]!r} and {cone_names[j]!r} do not intersect in a common face",
            ) from None
        except ValueError as exc:
            raise SceneValidationError(name, str(exc)) from None

    for name, spec in _section(doc, "systems").items():
        if name in scene.fans:
            raise SceneValidationError(name, "name already used by a fan")
        chart_names = _require(spec, "charts", name)
        charts = [scene.cone(c) for c in chart_names]
        gluing = {}
        for entry in spec.get("gluing", []):
            pair = entry.get("charts")
            if not isinstance(pair, list) or len(pair) != 2:
                raise SceneParseError(f"system {name}: gluing entry needs two charts")
            idx = []
            for ref in pair:
                if isinstance(ref, int):
                    if not 0 <= ref < len(charts):
                        raise SceneValidationError(name, f"chart index {ref} out of range")
                    idx.append(ref)
                else:
                    if ref not in chart_names:
                        raise SceneValidationError(name, f"unknown chart {ref!r} in gluing")
                    if chart_names.count(ref) > 1:
                        raise SceneValidationError(
                            name, f"chart name {ref!r} is ambiguous; use indices"
                        )
                    idx.append(chart_names.index(ref))
            face = scene.cone(_require(entry, "face", name))
            gluing[(idx[0], idx[1])] = face
        try:
            scene.systems[name] = FanSystem(charts, gluing)
        except GluingViolation as exc:
            raise SceneValidationError(name, str(exc)) from None
        except ValueError as exc:
            raise SceneValidationError(name, str(exc)) from None

    for name, spec in _section(doc, "maps").items():
        dom = _require(spec, "domain", name)
        cod = _require(spec, "codomain", name)
        for lat in (dom, cod):
            if lat not in scene.lattices:
                raise SceneValidationError(name, f"unknown lattice {lat!r}")
        rows = [_int_vector(r, f"map {name}") for r in _require(spec, "matrix", name)]
        expected = (scene.lattices[cod], scene.lattices[dom])
        if len(rows) != expected[0] or any(len(r) != expected[1] for r in rows):
            raise SceneValidationError(
                name, f"matrix must be {expected[0]}x{expected[1]} for {cod} <- {dom}"
            )
        scene.maps[name] = IntMatrix(rows, expected[1])

    for name, spec in _section(doc, "morphisms").items():
        map_name = _require(spec, "map", name)
        if map_name not in scene.maps:
            raise SceneValidationError(name, f"unknown map {map_name!r}")
        source = scene.space(_require(spec, "source", name))
        target = scene.space(_require(spec, "target", name))
        try:
            scene.morphisms[name] = toric_morphism(scene.maps[map_name], source, target)
        except IncompatibleMorphism as exc:
            raise SceneValidationError(name, f"incompatible morphism: {exc}") from None
        except ValueError as exc:
            raise SceneValidationError(name, str(exc)) from None

    for name, spec in _section(doc, "points").items():
        space = scene.space(_require(spec, "space", name))
        sys = system_view(space)
        orbit_spec = _require(spec, "orbit", name)
        try:
            orbit = _resolve_orbit(scene, sys, orbit_spec, name)
            coset = [parse_rational(x, f"point {name}") for x in _require(spec, "coset", name)]
            if len(coset) != sys.rank:
                raise SceneValidationError(name, "coset length differs from the rank")
            scene.points[name] = OrbitPoint.make(space, orbit, TorusElement(coset))
        except ValueError as exc:
            if isinstance(exc, (SceneValidationError, SceneParseError)):
                raise
            raise SceneValidationError(name, str(exc)) from None

    for name, values in _section(doc, "weights").items():
        scene.weights[name] = _int_vector(values, f"weight {name}")

    return scene


def _resolve_orbit(scene: Scene, sys: FanSystem, spec, entity: str) -> OrbitIndex:
    if isinstance(spec, str):
        return sys.orbit_of_cone(scene.cone(spec))
    if isinstance(spec, dict):
        chart_ref = _require(spec, "chart", entity)
        face = scene.cone(_require(spec, "face", entity))
        if isinstance(chart_ref, int):
            chart_id = chart_ref
        else:
            chart_cone = scene.cone(chart_ref)
            matches = [i for i, c in enumerate(sys.charts) if c == chart_cone]
            if len(matches) != 1:
                raise SceneValidationError(
                    entity, f"chart {chart_ref!r} not found uniquely in the system"
                )
            chart_id = matches[0]
        return sys.orbit(chart_id, face)
    raise SceneParseError(f"point {entity}: orbit must be a cone name or a chart/face object")


def _section(doc: dict, key: str) -> dict:
    section = doc.get(key, {})
    if not isinstance(section, dict):
        raise SceneParseError(f"section {key!r} must be an object")
    return section


def _require(spec: dict, key: str, entity: str):
    if not isinstance(spec, dict) or key not in spec:
        raise SceneParseError(f"{entity}: missing field {key!r}")
    return spec[key]


def builtin_scene() -> Scene:
    from .example import SCENE

    return load_scene(SCENE)
