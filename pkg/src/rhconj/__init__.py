"""Conjugacy in groups hyperbolic relative to parabolic subgroups.

Words are tuples of integer letter codes (see :mod:`rhconj.words`).  The
decision procedure lives in :mod:`rhconj.engine`; :mod:`rhconj.oracle` is
an independent brute-force check.
"""

__version__ = "0.1.0"

from .cayley import Ball, CosetTable, Group, build_ball, enumerate_geodesics, gamma_distance  # noqa: E402
from .coned import ConedBall, project, relative_distance, relative_geodesic  # noqa: E402
from .constants import ConstantSet, ManifoldParams, conjugator_bound, manifold_constants  # noqa: E402
from .engine import Context, ConjugacyCertificate, decide_conjugate, partition_Hd  # noqa: E402
from .groups import bundled, load_group_spec  # noqa: E402
from .oracle import brute_force_conjugate, free_group_conjugate  # noqa: E402
from .words import GroupSpec, ParabolicSpec, format_word, parse_word  # noqa: E402

__all__ = [
    "Ball", "ConedBall", "ConjugacyCertificate", "ConstantSet", "Context", "CosetTable", "Group", "GroupSpec",
    "ManifoldParams", "ParabolicSpec", "brute_force_conjugate", "build_ball", "bundled", "conjugator_bound",
    "decide_conjugate", "enumerate_geodesics", "format_word", "free_group_conjugate", "gamma_distance",
    "load_group_spec", "manifold_constants", "parse_word", "partition_Hd", "project", "relative_distance",
    "relative_geodesic",
]
