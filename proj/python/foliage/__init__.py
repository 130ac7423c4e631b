"""Python access to the foliage toolkit."""

import json

from ._core import eigen_ratio, resonant_monomials, run, star_condition, subcommands

__all__ = ["eigen_ratio", "resonant_monomials", "run", "run_json", "star_condition", "subcommands"]


def run_json(*args):
    """Run a subcommand and parse its JSON report. Returns (exit_code, report)."""
    code, out, _ = run([str(a) for a in args])
    return code, json.loads(out) if out.strip() else None
