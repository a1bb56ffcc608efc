"""CSV tables with a `#`-prefixed metadata header. Values are in SI units."""

from pathlib import Path

import numpy as np
import pandas as pd


UNITS = {
    'z': 'm',
    'phi': 'rad',
    'theta': 'rad',
    'velocity': 'm/s',
    'flight_time': 's',
    'displacement': 'm',
    'evolved_width': 'm',
    'peak_density': '1/m',
    'mean_exact': 'm',
    'mean_first_order': 'm',
    'mean_shift': 'm',
    'dBdz': 'T/m',
}


def _format(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_table(frame: pd.DataFrame, path, metadata: dict = None) -> None:
    """Writes `# key = value` metadata lines, a `# units` line, then the table."""

    lines = [f"# {key} = {_format(value)}" for key, value in (metadata or {}).items()]
    units = [f"{column}[{UNITS[column]}]" for column in frame.columns if column in UNITS]
    if units:
        lines.append(f"# units: {', '.join(units)}")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        for line in lines:
            f.write(line + "\n")
        frame.to_csv(f, index=False, float_format='%.10g')


def read_table(path) -> tuple[pd.DataFrame, dict]:
    """Reads a table written by `write_table`; metadata values stay strings."""

    metadata = {}
    with open(path) as f:
        for line in f:
            if not line.startswith('#'):
                break
            key, sep, value = line[1:].partition('=')
            if sep:
                metadata[key.strip()] = value.strip()

    return pd.read_csv(path, comment='#'), metadata
