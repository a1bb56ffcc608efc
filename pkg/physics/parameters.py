parameters = {
    # Detector grid: number of points and half-span in evolved widths
    'grid_points': 4096,
    'grid_half_widths': 8.0,
    # Largest probability allowed to fall outside the grid
    'grid_escape_tolerance': 1e-6,
    # Ratio below which "<<" is considered satisfied
    'inequality_threshold': 0.1,
    'orthogonality_epsilon': 1e-12,
    'tan_pole_epsilon': 1e-12,
    # Relative mean deviation at which the first order approximation stops
    # coinciding with the exact evolution (gives L* = 0.37 at theta = 2.9)
    'calibration_tolerance': 0.035,
    'calibration_theta': 2.9,
    'scan_min': 0.01,
    'scan_max': 1.5,
    'scan_step': 0.01,
    'default_limit': 0.37,
    # Not a measured value: a typical MCP pore-limited resolution
    'detector_pitch': 25e-6,
    'n_jobs': 1,
}


def get_parameter(name: str):
    return parameters[name]


def set_parameter(name: str, value):
    if name not in parameters:
        raise ValueError(f"Parameter '{name}' not found.")
    parameters[name] = value
