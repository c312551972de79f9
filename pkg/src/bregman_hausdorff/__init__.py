"""Bregman-Hausdorff divergences between finite point sets.

Decomposable Bregman divergences (squared Euclidean, KL / generalized KL,
Itakura-Saito), an exact Kd-tree for nearest neighbours in either
divergence direction, primal and dual one-sided Bregman-Hausdorff
divergences and the Chernoff-Bregman-Hausdorff distances.
"""

__version__ = "0.1.0"

from .errors import BregmanError, ConvergenceError, DomainError, ParseError, UsageError
from .divergences import (
    GENERALIZED_KL,
    ITAKURA_SAITO,
    KULLBACK_LEIBLER,
    SQUARED_EUCLIDEAN,
    Generator,
    affine_divergence,
    conjugate_divergence,
    conjugate_map,
    conjugate_value,
    coord_divergence,
    cross_entropy,
    divergence,
    generator_gradient,
    generator_value,
    get_generator,
    inverse_conjugate_map,
    shannon_entropy,
)
from .data import PointCloud, Validation, load_points, sample_simplex, save_points, validate
from .kdtree import (
    BregmanKdTree,
    Direction,
    NnAnswer,
    box_min_divergence,
    build,
    nn_query,
    shell_query,
)
from .hausdorff import (
    HausdorffResult,
    HausdorffStats,
    Variant,
    hausdorff,
    hausdorff_both_directions,
    hausdorff_kdtree,
    hausdorff_linear,
    hausdorff_shell,
)
from .chernoff import (
    ChernoffConfig,
    ChernoffSet,
    chernoff_hausdorff,
    chernoff_point,
    chernoff_set,
)
