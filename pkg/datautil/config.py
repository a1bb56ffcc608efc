"""Run configuration: flat `key = value` text files or JSON objects."""

import json
from dataclasses import dataclass, fields, asdict
from pathlib import Path

from physics.errors import ConfigError, WeakSpinError
from physics.experiment import ExperimentParams, with_limit
from physics.parameters import get_parameter


REQUIRED_KEYS = ('theta', 'sigma', 'flight_distance', 'beam_velocity', 'magnet_length')


@dataclass(frozen=True)
class RunConfig:
    """
    Physical settings of one run, in SI units.

    The gradient is either given directly (`dBdz`) or solved from the limit `limit`
    with the homogeneous field neglected. With neither, the calibrated default limit is used.
    """

    theta: float
    sigma: float
    flight_distance: float
    beam_velocity: float
    magnet_length: float
    phi: float = 0.0
    B0: float = 0.0
    dBdz: float = None
    limit: float = None
    detector_pitch: float = None
    grid_points: int = None
    out: str = None

    def to_params(self) -> ExperimentParams:
        params = ExperimentParams.from_magnet(
            magnet_length=self.magnet_length,
            beam_velocity=self.beam_velocity,
            theta=self.theta,
            phi=self.phi,
            B0=self.B0,
            dBdz=0.0 if self.dBdz is None else self.dBdz,
            sigma=self.sigma,
            flight_distance=self.flight_distance,
        )
        if self.dBdz is not None:
            return params
        limit = get_parameter('default_limit') if self.limit is None else self.limit
        return with_limit(params, limit)

    def replace(self, **changes) -> 'RunConfig':
        return from_mapping({**asdict(self), **changes})


FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key: str, value):
    if value is None:
        return None
    kind = FIELD_TYPES[key]
    try:
        if kind is str:
            return str(value)
        if kind is int:
            return int(value)
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"Invalid value for '{key}': {value!r}.")


def from_mapping(mapping: dict) -> RunConfig:
    unknown = sorted(set(mapping) - set(FIELD_TYPES))
    if unknown:
        raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}.")
    missing = [key for key in REQUIRED_KEYS if mapping.get(key) is None]
    if missing:
        raise ConfigError(f"Missing configuration keys: {', '.join(missing)}.")

    config = RunConfig(**{key: _convert(key, value) for key, value in mapping.items()})

    # Surface physical validation errors while loading
    try:
        config.to_params()
    except ConfigError:
        raise
    except WeakSpinError as error:
        raise ConfigError(str(error)) from error

    return config


def parse_key_values(text: str) -> dict:
    mapping = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f"Line {number} is not of the form 'key = value'.")
        key, value = (part.strip() for part in line.split('=', 1))
        if key in mapping:
            raise ConfigError(f"Duplicate configuration key '{key}'.")
        mapping[key] = value
    return mapping


def load_config(path) -> RunConfig:
    """Reads JSON when the suffix is `.json`, key-value text otherwise."""

    path = Path(path)
    text = path.read_text()

    if path.suffix.lower() == '.json':
        try:
            mapping = json.loads(text)
        except json.JSONDecodeError as error:
            raise ConfigError(f"Invalid JSON in {path}: {error.msg}.")
        if not isinstance(mapping, dict):
            raise ConfigError(f"{path} must hold a JSON object.")
    else:
        mapping = parse_key_values(text)

    return from_mapping(mapping)


def save_config(config: RunConfig, path) -> None:
    lines = [f"{key} = {value!r}" if not isinstance(value, str) else f"{key} = {value}"
             for key, value in asdict(config).items() if value is not None]
    Path(path).write_text("\n".join(lines) + "\n")


def default_config() -> RunConfig:
    """Final experiment settings: 1717 m/s beam, L = 0.37, 2.5 m flight, 0.5 um width."""
    return RunConfig(
        theta=2.9,
        sigma=0.5e-6,
        flight_distance=2.5,
        beam_velocity=1717.0,
        magnet_length=10e-3,
        phi=0.0,
        B0=0.0,
        limit=0.37,
    )
