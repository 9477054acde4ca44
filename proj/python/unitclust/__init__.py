"""Online unit clustering: adversary strategy trees, verification, minimax search."""

from ._core import (
    IllegalMoveError,
    ParseError,
    Ratio,
    TreeError,
    opt_count,
    parse_ratio,
    play,
    run,
    search,
    verify,
)

__all__ = [
    "IllegalMoveError",
    "ParseError",
    "Ratio",
    "TreeError",
    "opt_count",
    "parse_ratio",
    "play",
    "run",
    "search",
    "verify",
]
