"""Networks shipped with the package.

``three_node_demo`` is the small teaching network used throughout the tests
and the web UI demo: a three-state root driving two binary children.

``profiling_fixture`` is a 15-variable synthetic homicide-profiling network.
Variable names follow the published profiling vocabulary (scene, victim,
autopsy, and offender indicators); every probability in it is invented for
demonstration and testing, and none of it describes real data.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .model import Network, VariableDef, make_network

DEMO_FILENAME = "three_node_demo.pnet"
FIXTURE_FILENAME = "profiling_fixture.pnet"


def three_node_demo() -> Network:
    """Three-state root X1 with binary children X2 and X3.

    X2's first two conditional rows are [0.2, 0.8] and [0.9, 0.1]; the third
    row and all of X3 are filled in with invented values.
    """
    variables = [
        VariableDef("X1", states=("x1_1", "x1_2", "x1_3"), role="input"),
        VariableDef("X2", states=("x2_1", "x2_2"), role="output"),
        VariableDef("X3", states=("x3_1", "x3_2"), role="output"),
    ]
    edges = [("X1", "X2"), ("X1", "X3")]
    cpts = {
        "X1": ((), [[0.2, 0.5, 0.3]]),
        "X2": (("X1",), [[0.2, 0.8], [0.9, 0.1], [0.5, 0.5]]),
        "X3": (("X1",), [[0.7, 0.3], [0.4, 0.6], [0.1, 0.9]]),
    }
    return make_network(variables, edges, cpts, {"name": "three-node-demo", "version": "hypothesis"})


def profiling_fixture() -> Network:
    """Synthetic single-offender homicide profiling network.

    Offender (OFF) variables sit upstream of the observable scene variables;
    all variables are binary absent/present. Parameters are plausible-looking
    inventions, labeled as such in the network metadata.
    """
    A, P = "absent", "present"

    def v(var_id, name, category, role):
        return VariableDef(var_id, name, category, role, (A, P))

    variables = [
        # offender profile (outputs)
        v("prior_offenses", "Offender has prior offenses", "OFF", "output"),
        v("prior_arrests", "Offender has prior arrests", "OFF", "output"),
        v("knew_victim", "Offender knew the victim", "OFF", "output"),
        v("offender_male", "Offender is male", "OFF", "output"),
        # victimology (inputs)
        v("victim_female", "Victim is female", "VA", "input"),
        v("victim_under_30", "Victim under 30", "VA", "input"),
        v("victim_employed", "Victim in employment", "VA", "input"),
        # crime-scene observations (inputs)
        v("sexual_assault", "Sexual assault evident", "CSA", "input"),
        v("victim_bound", "Victim bound or gagged", "CSA", "input"),
        v("body_hidden", "Body concealed", "CSA", "input"),
        v("body_transported", "Body moved from kill site", "CSA", "input"),
        # forensic / autopsy findings (inputs)
        v("multiple_wounding", "Multiple wounding to one area", "FA", "input"),
        v("drugging", "Victim drugged", "FA", "input"),
        v("weapon_firearm", "Firearm used", "FA", "input"),
        v("defensive_wounds", "Defensive wounds present", "FA", "input"),
    ]

    # In-edge order per child matches the CPT parent order below, so row
    # indexing is identical whether a CPT comes from this builder or from a
    # refit on the structure.
    edges = [
        ("prior_offenses", "prior_arrests"),
        ("prior_offenses", "victim_bound"),
        ("prior_offenses", "weapon_firearm"),
        ("prior_arrests", "weapon_firearm"),
        ("offender_male", "sexual_assault"),
        ("knew_victim", "sexual_assault"),
        ("victim_female", "sexual_assault"),
        ("knew_victim", "multiple_wounding"),
        ("knew_victim", "body_hidden"),
        ("prior_arrests", "body_hidden"),
        ("body_hidden", "body_transported"),
        ("knew_victim", "body_transported"),
        ("victim_under_30", "victim_employed"),
        ("sexual_assault", "victim_bound"),
        ("sexual_assault", "drugging"),
        ("drugging", "defensive_wounds"),
        ("victim_bound", "defensive_wounds"),
    ]

    # Rows are mixed-radix over the listed parents, last parent fastest.
    cpts = {
        "prior_offenses": ((), [[0.55, 0.45]]),
        "knew_victim": ((), [[0.45, 0.55]]),
        "offender_male": ((), [[0.30, 0.70]]),
        "victim_female": ((), [[0.55, 0.45]]),
        "victim_under_30": ((), [[0.60, 0.40]]),
        "prior_arrests": (("prior_offenses",), [
            [0.85, 0.15],
            [0.20, 0.80],
        ]),
        "victim_employed": (("victim_under_30",), [
            [0.35, 0.65],
            [0.55, 0.45],
        ]),
        "sexual_assault": (("offender_male", "knew_victim", "victim_female"), [
            [0.97, 0.03],
            [0.93, 0.07],
            [0.97, 0.03],
            [0.92, 0.08],
            [0.80, 0.20],
            [0.55, 0.45],
            [0.85, 0.15],
            [0.70, 0.30],
        ]),
        "multiple_wounding": (("knew_victim",), [
            [0.70, 0.30],
            [0.40, 0.60],
        ]),
        "victim_bound": (("prior_offenses", "sexual_assault"), [
            [0.90, 0.10],
            [0.55, 0.45],
            [0.80, 0.20],
            [0.35, 0.65],
        ]),
        "drugging": (("sexual_assault",), [
            [0.95, 0.05],
            [0.60, 0.40],
        ]),
        "weapon_firearm": (("prior_offenses", "prior_arrests"), [
            [0.92, 0.08],
            [0.75, 0.25],
            [0.80, 0.20],
            [0.45, 0.55],
        ]),
        "defensive_wounds": (("drugging", "victim_bound"), [
            [0.35, 0.65],
            [0.70, 0.30],
            [0.80, 0.20],
            [0.90, 0.10],
        ]),
        "body_hidden": (("knew_victim", "prior_arrests"), [
            [0.75, 0.25],
            [0.60, 0.40],
            [0.55, 0.45],
            [0.35, 0.65],
        ]),
        "body_transported": (("body_hidden", "knew_victim"), [
            [0.90, 0.10],
            [0.80, 0.20],
            [0.65, 0.35],
            [0.45, 0.55],
        ]),
    }

    metadata = {
        "name": "profiling-fixture",
        "version": "hypothesis",
        "provenance": "synthetic demonstration network; all parameters invented",
    }
    return make_network(variables, edges, cpts, metadata)


def demo_network_path() -> Path:
    """Path of the shipped three-node demo network file."""
    return Path(str(resources.files("profilernet").joinpath("data", DEMO_FILENAME)))


def fixture_network_path() -> Path:
    """Path of the shipped profiling fixture network file."""
    return Path(str(resources.files("profilernet").joinpath("data", FIXTURE_FILENAME)))


def export_fixture_files(directory: str | Path) -> list[Path]:
    """Copy the shipped network files into ``directory``; returns the paths."""
    import shutil

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for src in (demo_network_path(), fixture_network_path()):
        dst = directory / src.name
        shutil.copyfile(src, dst)
        out.append(dst)
    return out


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else "."
    for path in export_fixture_files(target):
        print(path)
