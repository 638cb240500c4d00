"""Strong-core allocations for housing markets with partial-order preferences.

Instances, allocations and improvement steps may be given as JSON text or as
already-decoded dicts/lists. Results come back decoded.
"""

import json

from . import _strongcore
from ._strongcore import Error

__all__ = [
    "Error",
    "solve",
    "check",
    "enumerate",
    "quint_wako",
    "ttc",
    "generate",
    "emit_ilp",
    "improve",
    "experiment",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def solve(instance, trace=False, certify=False):
    return json.loads(_strongcore.solve(_text(instance), trace, certify))


def check(instance, allocation, mode="strong-core"):
    return json.loads(_strongcore.check(_text(instance), _text(allocation), mode))


def enumerate(instance, mode="strong-core", max_n=0):
    return json.loads(_strongcore.enumerate(_text(instance), mode, max_n))


def quint_wako(instance):
    return json.loads(_strongcore.quint_wako(_text(instance)))


def ttc(instance):
    return json.loads(_strongcore.ttc(_text(instance)))


def generate(kind, n, density=0.5, levels=3, max_acceptable=0, seed=1):
    """Random instance document from one of the built-in generators."""
    return json.loads(_strongcore.generate(kind, n, density, levels, max_acceptable, seed))


def emit_ilp(instance):
    """CPLEX-LP text of the feasibility program."""
    return _strongcore.emit_ilp(_text(instance))


def improve(instance, steps, check_ri=False, max_n=0):
    return json.loads(_strongcore.improve(_text(instance), _text(steps), check_ri, max_n))


def experiment(name, trials=100, seed=1, max_n=6, max_coalition=2, records=False):
    return json.loads(_strongcore.experiment(name, trials, seed, max_n, max_coalition, records))
