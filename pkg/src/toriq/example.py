"""The built-in worked example: a torus quotient with a non-separated
intermediate space.

The source is the fan in Z^4 with maximal cones spanned by {e1, e2} and
{e3, e4}.  The lattice map sends e1, e2, e3 to themselves and e4 to e1 + e2;
it kills the weight vector (1, 1, 0, -1), so the induced morphism is
invariant under the one-parameter action with that weight.  The images of
the two maximal cones, glued along the torus only, form a non-separated
system over Z^3 whose comparison morphism to affine 3-space realizes the
quotient structure that the verification pipeline checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .cones import Cone
from .fans import Fan, FanSystem
from .intlinalg import IntMatrix, IntVec, Sublattice
from .morphisms import ToricMorphism, toric_morphism


def _unit(i: int, n: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(n))


@dataclass(frozen=True)
class ExampleData:
    lattice_map: IntMatrix
    weight: IntVec
    source_fan: Fan
    target_fan: Fan
    system: FanSystem
    pi: ToricMorphism
    pi_tilde: ToricMorphism
    kappa: ToricMorphism
    cones: dict
    expected_present: tuple[Cone, ...]
    expected_absent: tuple[Cone, ...]
    expected_partition: tuple
    limit_vector: IntVec


def build_example() -> ExampleData:
    sigma1 = Cone.from_generators([_unit(0, 4), _unit(1, 4)], 4)
    sigma2 = Cone.from_generators([_unit(2, 4), _unit(3, 4)], 4)
    source = Fan([sigma1, sigma2])

    e1, e2, e3 = _unit(0, 3), _unit(1, 3), _unit(2, 3)
    delta = Cone.from_generators([e1, e2, e3], 3)
    target = Fan([delta])

    tau1 = Cone.from_generators([e1, e2], 3)
    tau2 = Cone.from_generators([e3, (1, 1, 0)], 3)
    rho1 = Cone.from_generators([e1], 3)
    rho2 = Cone.from_generators([e2], 3)
    rho3 = Cone.from_generators([e3], 3)
    rho4 = Cone.from_generators([(1, 1, 0)], 3)
    zero3 = Cone.zero(3)
    system = FanSystem([tau1, tau2], {(0, 1): zero3})

    pmat = IntMatrix([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 0]])
    weight = (1, 1, 0, -1)
    pi = toric_morphism(pmat, source, target)
    pi_tilde = toric_morphism(pmat, source, system)
    kappa = toric_morphism(IntMatrix.identity(3), system, target)

    cones = {
        "sigma1": sigma1,
        "sigma2": sigma2,
        "tau1": tau1,
        "tau2": tau2,
        "rho1": rho1,
        "rho2": rho2,
        "rho3": rho3,
        "rho4": rho4,
        "delta": delta,
        "zero3": zero3,
    }

    expected_present = (zero3, rho1, rho2, rho3, tau1, delta)
    expected_absent = (
        Cone.from_generators([e1, e3], 3),
        Cone.from_generators([e2, e3], 3),
    )

    def sig(members, basis_rows):
        lattice = Sublattice.from_rows(3, basis_rows)
        return (
            tuple(sorted((chart, cone.rays) for chart, cone in members)),
            lattice.basis,
        )

    expected_partition = tuple(
        sorted(
            [
                sig([(0, zero3)], []),
                sig([(0, rho1)], [e1]),
                sig([(0, rho2)], [e2]),
                sig([(1, rho3)], [e3]),
                sig([(0, tau1), (1, rho4)], [e1, e2]),
                sig([(1, tau2)], [e1, e2, e3]),
            ]
        )
    )

    return ExampleData(
        lattice_map=pmat,
        weight=weight,
        source_fan=source,
        target_fan=target,
        system=system,
        pi=pi,
        pi_tilde=pi_tilde,
        kappa=kappa,
        cones=cones,
        expected_present=expected_present,
        expected_absent=expected_absent,
        expected_partition=expected_partition,
        limit_vector=(1, 1, 0),
    )


# The same data as a scene document (the CLI's built-in scene).
SCENE: dict = {
    "lattices": {"N4": 4, "N3": 3},
    "cones": {
        "sigma1": {"lattice": "N4", "generators": [["1", "0", "0", "0"], ["0", "1", "0", "0"]]},
        "sigma2": {"lattice": "N4", "generators": [["0", "0", "1", "0"], ["0", "0", "0", "1"]]},
        "zero4": {"lattice": "N4", "generators": []},
        "tau1": {"lattice": "N3", "generators": [["1", "0", "0"], ["0", "1", "0"]]},
        "tau2": {"lattice": "N3", "generators": [["0", "0", "1"], ["1", "1", "0"]]},
        "rho1": {"lattice": "N3", "generators": [["1", "0", "0"]]},
        "rho2": {"lattice": "N3", "generators": [["0", "1", "0"]]},
        "rho3": {"lattice": "N3", "generators": [["0", "0", "1"]]},
        "rho4": {"lattice": "N3", "generators": [["1", "1", "0"]]},
        "delta": {
            "lattice": "N3",
            "generators": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        },
        "zero3": {"lattice": "N3", "generators": []},
    },
    "fans": {
        "Delta": {"lattice": "N4", "maximal_cones": ["sigma1", "sigma2"]},
        "C3": {"lattice": "N3", "maximal_cones": ["delta"]},
    },
    "systems": {
        "Ytilde": {
            "lattice": "N3",
            "charts": ["tau1", "tau2"],
            "gluing": [{"charts": [0, 1], "face": "zero3"}],
        }
    },
    "maps": {
        "P": {
            "domain": "N4",
            "codomain": "N3",
            "matrix": [
                ["1", "0", "0", "1"],
                ["0", "1", "0", "1"],
                ["0", "0", "1", "0"],
            ],
        },
        "id3": {
            "domain": "N3",
            "codomain": "N3",
            "matrix": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        },
    },
    "morphisms": {
        "pi": {"map": "P", "source": "Delta", "target": "C3"},
        "pitilde": {"map": "P", "source": "Delta", "target": "Ytilde"},
        "kappa": {"map": "id3", "source": "Ytilde", "target": "C3"},
    },
    "points": {
        "t235": {"space": "Ytilde", "orbit": "zero3", "coset": ["2", "3", "5"]}
    },
    "weights": {"action": ["1", "1", "0", "-1"]},
}


def builtin_scene_json() -> str:
    return json.dumps(SCENE, indent=2, sort_keys=True)
