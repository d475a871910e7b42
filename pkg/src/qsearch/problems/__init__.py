"""Drivers for the structured search problems, one per problem family."""

from .drivers import (
    composite_amplitude,
    composite_program,
    composite_spec,
    exhaustive_spec,
    multi_source_spec,
    multi_target_spec,
    nearby_spec,
    solve_nearby_at_most,
    symmetric_spec,
    inversion_about_average_check,
    nearby_coupling,
    rotation_program,
    solve_composite,
    solve_exhaustive,
    solve_multi_source,
    solve_multi_target,
    solve_nearby,
    solve_symmetric_multi,
    source_couplings,
    walsh_program,
)
from .instances import (
    CompositeV,
    Exhaustive,
    MultiDim,
    MultiSource,
    MultiTarget,
    Nearby,
    Rectangular,
    SymmetricMulti,
    TwoDim,
    TwoDimMultiTarget,
    classical_baseline,
    nearby_search_space,
)
from .twodim import (
    multi_dim_spec,
    multi_dim_stages,
    two_dim_multi_target_spec,
    two_dim_spec,
    solve_multi_dim,
    solve_two_dim,
    solve_two_dim_multi_target,
    solve_two_dim_variants,
    two_register_program,
    two_register_stages,
)


def solve(p):
    """Dispatch an instance to its driver."""
    if isinstance(p, Exhaustive):
        return solve_exhaustive(p)
    if isinstance(p, Nearby):
        return solve_nearby(p)
    if isinstance(p, SymmetricMulti):
        return solve_symmetric_multi(p)
    if isinstance(p, MultiTarget):
        return solve_multi_target(p)
    if isinstance(p, MultiSource):
        return solve_multi_source(p)
    if isinstance(p, CompositeV):
        return solve_composite(p)
    return solve_two_dim_variants(p)


def build_spec(p):
    """``(AmplificationSpec, predicted coupling)`` for any instance, after validation."""
    p.validate()
    if isinstance(p, Exhaustive):
        return exhaustive_spec(p)
    if isinstance(p, Nearby):
        return nearby_spec(p)
    if isinstance(p, SymmetricMulti):
        return symmetric_spec(p)
    if isinstance(p, MultiTarget):
        return multi_target_spec(p)
    if isinstance(p, MultiSource):
        return multi_source_spec(p)
    if isinstance(p, CompositeV):
        return composite_spec(p)
    if isinstance(p, TwoDimMultiTarget):
        return two_dim_multi_target_spec(p)
    if isinstance(p, MultiDim):
        return multi_dim_spec(p)
    if isinstance(p, TwoDim):
        return two_dim_spec(p)
    raise TypeError(f"unknown problem instance {p!r}")
