"""Pytest fixtures and configuration."""

import pytest

from phaseswitch.config import Config
from phaseswitch.grid import network_from_dict


def chain_network(name, houses_per_bus, buses=3, feeder="F1", r=0.05, x=0.02, r_neutral=0.05, phases="abc"):
    """Network data for one radial chain ``src -> n1 -> ... -> nK``.

    Households are numbered ``h1, h2, ...`` bus by bus and cycle through
    ``phases``.
    """
    data = {
        "name": name,
        "buses": [{"id": "src"}],
        "segments": [],
        "households": [],
    }
    parent = "src"
    n = 0
    for b in range(1, buses + 1):
        bus = "n{0}".format(b)
        data["buses"].append({"id": bus, "feeder": feeder})
        data["segments"].append(
            {"from": parent, "to": bus, "r": r, "x": x, "r_neutral": r_neutral, "x_neutral": 0.0}
        )
        parent = bus
        for _ in range(houses_per_bus):
            n += 1
            data["households"].append(
                {"id": "h{0}".format(n), "bus": bus, "phase": phases[(n - 1) % len(phases)]}
            )
    return data


TWO_BUS = {
    "name": "two-bus",
    "buses": [{"id": "src"}, {"id": "b1", "feeder": "F1"}],
    "segments": [{"from": "src", "to": "b1", "r": 0.1, "x": 0.05}],
    "households": [{"id": "h1", "bus": "b1", "phase": "a"}],
}


@pytest.fixture
def config():
    """Default engine configuration."""
    return Config.default()


@pytest.fixture
def two_bus():
    """Slack plus one bus with a single household on phase a."""
    return network_from_dict(TWO_BUS)


@pytest.fixture
def chain():
    """Three-bus chain with six households spread over the phases."""
    return network_from_dict(chain_network("chain", houses_per_bus=2))


@pytest.fixture
def two_feeders():
    """Busbar with two short feeders of four households each."""
    first = chain_network("x", houses_per_bus=2, buses=2, feeder="F1")
    second = chain_network("y", houses_per_bus=2, buses=2, feeder="F2")
    data = {
        "name": "two-feeders",
        "buses": [{"id": "src"}, {"id": "lv"}],
        "segments": [{"from": "src", "to": "lv", "r": 0.004, "x": 0.015}],
        "households": [],
    }
    for prefix, part in (("a", first), ("b", second)):
        rename = {"src": "lv"}
        for bus in part["buses"][1:]:
            rename[bus["id"]] = prefix + bus["id"]
            data["buses"].append({"id": rename[bus["id"]], "feeder": bus["feeder"]})
        for seg in part["segments"]:
            data["segments"].append(dict(seg, **{"from": rename[seg["from"]], "to": rename[seg["to"]]}))
        for house in part["households"]:
            data["households"].append(
                dict(house, id=prefix + house["id"], bus=rename[house["bus"]])
            )
    return network_from_dict(data)
