"""Maslov index of bundle pairs over surfaces with boundary.

Thin wrapper over the C++ core: winding numbers, reference surfaces and the
scenario runner (curvature-integral, boundary and topological routes).
"""

from maslovcw._core import (
    MaslovError,
    Surface,
    __version__,
    build_surface,
    list_builtins,
    maslov_chern_weil_flat,
    maslov_topological,
    run_scenario_file,
    run_scenario_json,
    scenario_csv,
    unwrap_phases,
    winding_number,
)

__all__ = [
    "MaslovError",
    "Surface",
    "__version__",
    "build_surface",
    "list_builtins",
    "maslov_chern_weil_flat",
    "maslov_topological",
    "run_scenario_file",
    "run_scenario_json",
    "scenario_csv",
    "unwrap_phases",
    "winding_number",
]
