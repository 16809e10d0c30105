"""Morse indices of matrix Schrodinger operators on [0, 1] through the Maslov index."""

import json
import os

from ._core import (
    MaslovError,
    Problem,
    check,
    count_below,
    evaluate,
    gamma3_count,
    lambda_infty,
    lowest_eigenvalues,
    maslov_box,
    morse_index,
    negative_count,
    principal_maslov_index,
    version,
)
from ._core import report as _report

__version__ = version()

__all__ = [
    "MaslovError",
    "Problem",
    "check",
    "count_below",
    "evaluate",
    "gamma3_count",
    "lambda_infty",
    "load",
    "lowest_eigenvalues",
    "maslov_box",
    "morse_index",
    "negative_count",
    "principal_maslov_index",
    "report",
]


def load(source):
    """A Problem from a config dict, a JSON file path, or "example1".."example4"."""
    if isinstance(source, Problem):
        return source
    if isinstance(source, dict):
        return Problem.from_json(json.dumps(source))
    return Problem.load(os.fspath(source))


def report(source, oracle=True):
    """The theorem report as a dict."""
    return json.loads(_report(load(source), oracle))
