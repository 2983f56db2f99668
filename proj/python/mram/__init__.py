"""Unit-cost multiplication RAM workbench."""

import json

from ._mram import (
    DisagreementError,
    PreconditionError,
    SizingError,
    SpecError,
    corpus_names,
    direct_sort,
    format_asm,
    run,
    sat_oracle,
)
from . import _mram


def _spec_text(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def corpus_machine(name):
    """Returns a corpus machine as a spec dict."""
    return json.loads(_mram.corpus_machine(name))


def oracle_accepts(spec, word, space, time):
    """Brute-force verdict and the number of configurations explored."""
    return _mram.oracle_accepts(_spec_text(spec), list(word), space, time)


def triple_check(spec, word, space, time):
    return json.loads(_mram.triple_check(_spec_text(spec), list(word), space, time))


def cnf_to_ndtm(dimacs):
    """Returns (spec dict, space, time) for a DIMACS formula."""
    spec, space, time = _mram.cnf_to_ndtm(dimacs)
    return json.loads(spec), space, time


def scaling(problem="sat", sizes=(1, 2, 3, 4), seed=7):
    """Runs a scaling sweep; returns (csv text, fit dict)."""
    out = json.loads(_mram.scaling(problem, list(sizes), seed))
    return out["csv"], out["fit"]


__all__ = [
    "DisagreementError",
    "PreconditionError",
    "SizingError",
    "SpecError",
    "cnf_to_ndtm",
    "corpus_machine",
    "corpus_names",
    "direct_sort",
    "format_asm",
    "oracle_accepts",
    "run",
    "sat_oracle",
    "scaling",
    "triple_check",
]
