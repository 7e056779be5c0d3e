"""Homogenization of discrete lattice diffusion models."""

from ._lathom import (
    Config,
    ConfigError,
    LathomError,
    Network,
    __version__,
    build_rve,
    effective_tensor,
    import_network,
    load_config,
    parse_config,
    parse_toml,
    randomize_lambda0,
    run_full,
    run_macro,
    run_study,
    set_lambda0,
    solve_rve,
    tile,
    verify,
    voronoi_rve,
    write_results,
)

__all__ = [
    "Config",
    "ConfigError",
    "LathomError",
    "Network",
    "__version__",
    "build_rve",
    "effective_tensor",
    "import_network",
    "load_config",
    "parse_config",
    "parse_toml",
    "randomize_lambda0",
    "run_full",
    "run_macro",
    "run_study",
    "set_lambda0",
    "solve_rve",
    "tile",
    "verify",
    "voronoi_rve",
    "write_results",
]
