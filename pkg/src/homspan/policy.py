"""Resource-policy constants shared across the package.

All hard limits live here so they are easy to audit.  Operations that would
exceed a limit raise :class:`PolicyBoundError` instead of grinding away.
"""

from __future__ import annotations

__all__ = [
    "AUT_MAX_N",
    "CANON_MAX_VERTICES",
    "MAX_DIAGRAMS",
    "ORBIT_SPACE_MAX",
    "PolicyBoundError",
]

# Automorphism search is a pruned brute-force walk over vertex images.
AUT_MAX_N = 10

# Default cap for exhaustive canonical labelling of a bilabelled graph.
# Callers that know their diagrams are benign (long induced paths) may lift it.
CANON_MAX_VERTICES = 12

# Default cap on the number of diagrams a single spanning-set build may
# generate.  The count is computed up front, so hitting the cap is cheap.
MAX_DIAGRAMS = 1_000_000

# Cap on n**(k+l) wherever orbits of index tuples are enumerated explicitly.
ORBIT_SPACE_MAX = 1_000_000


class PolicyBoundError(Exception):
    """An operation was refused because it exceeds a resource policy bound."""
