"""Acute cloud type simulator: run scenarios, brute-force small histories, check witnesses, lint traces."""

import json as _json

from . import _act_sim
from ._act_sim import ConfigError, FormatError, TooLarge

__all__ = ["scenario_names", "run_scenario", "brute_force", "check", "lint", "ConfigError", "FormatError", "TooLarge"]


def scenario_names():
    return list(_act_sim.scenario_names())


def run_scenario(name, seed=None, mode=None, out=None):
    """Run a built-in scenario; returns its report. With `out`, also writes the artifact directory."""
    return _json.loads(_act_sim.run_scenario(name, seed, mode, out))


def brute_force(history_jsonl, target, rdt="seq", no_ev=False, stabilization=0):
    return _json.loads(_act_sim.brute_force(history_jsonl, target, rdt, no_ev, stabilization))


def check(history_jsonl, witness, predicate, level="weak", rdt="seq", stabilization=0):
    if not isinstance(witness, str):
        witness = _json.dumps(witness)
    return _json.loads(_act_sim.check(history_jsonl, witness, predicate, level, rdt, stabilization))


def lint(trace):
    if not isinstance(trace, str):
        trace = _json.dumps(trace)
    return _json.loads(_act_sim.lint(trace))
