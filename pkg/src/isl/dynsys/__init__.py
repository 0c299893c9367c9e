"""Fractal invariant sets: attractors, Cantor constructions, dimensions, delay embedding."""
from .cantor import (
    CantorIntervals,
    CantorSpec,
    DepthTooShallow,
    DigitStream,
    OffSetPerturbation,
    cantor_intervals,
    cantor_measure,
    cantor_membership,
    cantor_sample,
    dyadic_integer_map,
    on_set_neighbors,
    perfect_set_neighbor,
    perturb_off_set,
    perturb_on_set,
    ternary,
    ternary_to_binary_map,
)
from .dimension import (
    DimensionFit,
    box_counting_dimension,
    box_counts,
    correlation_dimension,
    correlation_sum,
)
from .embedding import EmbeddingSpec, autocorrelation, first_autocorrelation_minimum, takens_embed
from .ode import (
    DivergenceError,
    LimitCycle,
    Lorenz,
    Trajectory,
    integrate,
    lorenz_attractor_sample,
    polar_to_cartesian,
)
