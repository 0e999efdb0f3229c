"""Python face of the dual-bbgky engine.

Sequences are lists of numpy arrays [g0, g1, ..., gN]: g0 is a 1x1
scalar head and gs acts on the s-particle tensor space (d**s square).
"""

from ._core import (
    AbsentPotentialError,
    CapacityError,
    NormalizationError,
    SystemSpec,
    ValidationError,
    a_plus,
    bbgky_generator,
    bbgky_group_states,
    bell_number,
    distinct_tuples,
    dual_cumulant_apply,
    dual_generator,
    dual_generator_similarity,
    evolve_heisenberg,
    evolve_vonneumann,
    exp_a_plus,
    gamma_norm,
    grand_canonical_mean,
    list_checks,
    marginal_observables,
    marginalize_states,
    mean_value,
    preset_names,
    random_observable_sequence,
    random_state_sequence,
    run_scenario_json,
    set_partitions,
    signed_factorial_sum,
    signed_partition_sum,
    solve_dual_cumulant,
    solve_dual_pair_cumulant,
    solve_dual_similarity,
    stirling2,
    validate_scenario_json,
)

__all__ = [
    "AbsentPotentialError",
    "CapacityError",
    "NormalizationError",
    "SystemSpec",
    "ValidationError",
    "a_plus",
    "bbgky_generator",
    "bbgky_group_states",
    "bell_number",
    "distinct_tuples",
    "dual_cumulant_apply",
    "dual_generator",
    "dual_generator_similarity",
    "evolve_heisenberg",
    "evolve_vonneumann",
    "exp_a_plus",
    "gamma_norm",
    "grand_canonical_mean",
    "list_checks",
    "marginal_observables",
    "marginalize_states",
    "mean_value",
    "preset_names",
    "random_observable_sequence",
    "random_state_sequence",
    "run_scenario_json",
    "set_partitions",
    "signed_factorial_sum",
    "signed_partition_sum",
    "solve_dual_cumulant",
    "solve_dual_pair_cumulant",
    "solve_dual_similarity",
    "stirling2",
    "validate_scenario_json",
]

__version__ = "0.1.0"
