"""Cooperative Q-learning power allocation for dense femtocell networks."""

import json

from ._femtoq import (
    ConfigError,
    OracleCapExceeded,
    __version__,
    action_levels,
    capacity,
    config_hash,
    dbm_to_mw,
    evaluate_capacities,
    gain_from_pathloss,
    jain_index,
    mw_to_dbm,
    normalize_config,
    pathloss_indoor_outdoor,
    pathloss_residential,
    reward,
    ring_index,
)
from . import _femtoq


def _text(config):
    if config is None:
        return ""
    if isinstance(config, str):
        return config
    return json.dumps(config)


def default_config():
    """Every parameter with its default value, as a dict."""
    return json.loads(normalize_config(""))


def run(config=None):
    """Density sweep in memory. Returns (admission_order, summaries)."""
    return _femtoq.run(_text(config))


def run_experiment(config, out_dir):
    """Density sweep with CSV artifacts. Returns (config_hash, summaries)."""
    return _femtoq.run_experiment(_text(config), str(out_dir))


def oracle(config, out_dir):
    """Exhaustive search; includes the optimality gap when out_dir holds a matching run."""
    return _femtoq.oracle(_text(config), str(out_dir))


__all__ = [
    "ConfigError",
    "OracleCapExceeded",
    "__version__",
    "action_levels",
    "capacity",
    "config_hash",
    "dbm_to_mw",
    "default_config",
    "evaluate_capacities",
    "gain_from_pathloss",
    "jain_index",
    "mw_to_dbm",
    "normalize_config",
    "oracle",
    "pathloss_indoor_outdoor",
    "pathloss_residential",
    "reward",
    "ring_index",
    "run",
    "run_experiment",
]
