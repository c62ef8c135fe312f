"""Pseudo-spectral solver for Liouville-type wave equations on the flat torus."""

from ._liouwave import (
    ConfigError,
    CouplingConfig,
    DynamicRangeError,
    Grid,
    SingularCouplingError,
    SnapshotError,
    WaveState,
    bubble_field,
    check_suite,
    concentration_window,
    density,
    detect_concentration,
    energy,
    evolve,
    functional_J,
    functional_report,
    integrate,
    parse_config,
    picard_solve,
    random_smooth_field,
    read_snapshot,
    run,
    write_snapshot,
)

__all__ = [
    "ConfigError",
    "CouplingConfig",
    "DynamicRangeError",
    "Grid",
    "SingularCouplingError",
    "SnapshotError",
    "WaveState",
    "bubble_field",
    "check_suite",
    "concentration_window",
    "density",
    "detect_concentration",
    "energy",
    "evolve",
    "functional_J",
    "functional_report",
    "integrate",
    "parse_config",
    "picard_solve",
    "random_smooth_field",
    "read_snapshot",
    "run",
    "write_snapshot",
]
