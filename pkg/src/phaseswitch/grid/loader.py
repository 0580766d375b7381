"""Load networks and household rosters from JSON files.

Schema (all impedances in ohms)::

    {
      "name": "lv50",
      "nominal_voltage": 230.0,
      "slack": {"voltage": 230.0, "angles_deg": [0, -120, 120]},
      "buses": [{"id": "src"}, {"id": "f1_01", "feeder": "F1"}],
      "segments": [{"from": "src", "to": "f1_01", "r": 0.016, "x": 0.004,
                    "r_neutral": 0.016, "x_neutral": 0.0}],
      "households": [{"id": "h01", "bus": "f1_01", "phase": "a",
                      "has_pv": false, "has_battery": false,
                      "market_participant": false, "switchable": false,
                      "power_factor": 1.0}]
    }

A transformer is described as an ordinary segment leaving the slack bus.
"""

import cmath
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, Union

from phaseswitch.exceptions import NetworkError
from phaseswitch.grid.allocation import as_phase
from phaseswitch.grid.feeder import DEFAULT_ANGLES_DEG, Bus, FeederModel, Segment, build_feeder_model
from phaseswitch.grid.household import Household

_TOP_KEYS = {"name", "nominal_voltage", "slack", "buses", "segments", "households"}
_SLACK_KEYS = {"voltage", "angles_deg"}
_BUS_KEYS = {"id", "feeder"}
_SEGMENT_KEYS = {"from", "to", "r", "x", "r_neutral", "x_neutral"}
_HOUSEHOLD_KEYS = {
    "id",
    "bus",
    "phase",
    "has_pv",
    "has_battery",
    "market_participant",
    "switchable",
    "power_factor",
}


def _check_keys(data: Dict[str, Any], allowed: Iterable[str], where: str, path: str) -> None:
    if not isinstance(data, dict):
        raise NetworkError(f"{where} must be an object", path)
    unknown = sorted(set(data).difference(allowed))
    if unknown:
        raise NetworkError(f"unknown field(s) in {where}: {', '.join(unknown)}", path)


def network_from_dict(data: Dict[str, Any], path: str = "<dict>") -> FeederModel:
    """Build a FeederModel from parsed JSON data."""
    _check_keys(data, _TOP_KEYS, "network", path)
    for key in ("buses", "segments", "households"):
        if key not in data:
            raise NetworkError(f"missing field {key!r}", path)

    nominal = float(data.get("nominal_voltage", 230.0))
    slack = data.get("slack", {})
    _check_keys(slack, _SLACK_KEYS, "slack", path)
    magnitude = float(slack.get("voltage", nominal))
    angles = slack.get("angles_deg", list(DEFAULT_ANGLES_DEG))
    if len(angles) != 3:
        raise NetworkError("slack.angles_deg needs three angles", path)
    slack_voltage = [cmath.rect(magnitude, math.radians(float(a))) for a in angles]

    buses = []
    for entry in data["buses"]:
        _check_keys(entry, _BUS_KEYS, "bus", path)
        if "id" not in entry:
            raise NetworkError("bus without id", path)
        buses.append(Bus(id=str(entry["id"]), feeder_id=entry.get("feeder")))
    feeder_of = {b.id: b.feeder_id for b in buses}

    segments = []
    for entry in data["segments"]:
        _check_keys(entry, _SEGMENT_KEYS, "segment", path)
        try:
            segments.append(
                Segment(
                    from_bus=str(entry["from"]),
                    to_bus=str(entry["to"]),
                    impedance=complex(float(entry["r"]), float(entry.get("x", 0.0))),
                    neutral_impedance=complex(
                        float(entry.get("r_neutral", 0.0)), float(entry.get("x_neutral", 0.0))
                    ),
                )
            )
        except KeyError as e:
            raise NetworkError(f"segment missing field {e}", path)

    households = []
    phases = {}
    for entry in data["households"]:
        _check_keys(entry, _HOUSEHOLD_KEYS, "household", path)
        try:
            hid = str(entry["id"])
            bus = str(entry["bus"])
            phases[hid] = as_phase(entry["phase"])
        except KeyError as e:
            raise NetworkError(f"household missing field {e}", path)
        except ValueError as e:
            raise NetworkError(str(e), path)
        if bus not in feeder_of:
            raise NetworkError(f"household {hid} attached to unknown bus {bus}", path)
        if feeder_of[bus] is None:
            raise NetworkError(f"household {hid} attached to bus {bus} outside any feeder", path)
        has_pv = bool(entry.get("has_pv", False))
        has_battery = bool(entry.get("has_battery", False))
        try:
            households.append(
                Household(
                    id=hid,
                    feeder_id=feeder_of[bus],
                    bus=bus,
                    has_pv=has_pv,
                    has_battery=has_battery,
                    market_participant=bool(
                        entry.get("market_participant", has_pv or has_battery)
                    ),
                    switchable=bool(entry.get("switchable", False)),
                    power_factor=float(entry.get("power_factor", 1.0)),
                )
            )
        except ValueError as e:
            raise NetworkError(str(e), path)

    try:
        return build_feeder_model(
            name=str(data.get("name", Path(path).stem)),
            buses=buses,
            segments=segments,
            households=households,
            initial_phases=phases,
            slack_voltage=slack_voltage,
            nominal_voltage=nominal,
        )
    except NetworkError as e:
        raise NetworkError(str(e), path)


def load_network(path: Union[str, Path]) -> FeederModel:
    """Load a network file.

    Raises:
        NetworkError: Unreadable file, unknown fields or invalid topology.
    """
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise NetworkError(f"cannot read network file: {e.strerror}", str(path))
    except json.JSONDecodeError as e:
        raise NetworkError(f"invalid JSON: {e}", str(path))
    return network_from_dict(data, str(path))
