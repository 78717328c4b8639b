"""Barrier-target optimal execution: closed-form strategies, a Monte Carlo
engine with barrier stopping, and the experiment presets.

The heavy lifting happens in the compiled ``_core`` extension; this package
re-exports it and adds a couple of conveniences.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__, parse_config, run_experiment


def run_preset(preset, out_dir, **run_overrides):
    """Run a preset with its defaults, overriding fields of ``run`` by name.

    >>> run_preset("fig1", "out/fig1")  # doctest: +SKIP
    """
    config = parse_config("", preset)
    config.output_dir = str(out_dir)
    for key, value in run_overrides.items():
        if not hasattr(config, key):
            raise AttributeError(f"RunConfig has no field '{key}'")
        setattr(config, key, value)
    return run_experiment(config)
