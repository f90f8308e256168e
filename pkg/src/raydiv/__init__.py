"""f-divergences restricted to rays for finite discrete distributions.

The central construction: project the likelihood ratio of a pair of
discrete measures onto nonincreasing sequences (weighted least squares),
then evaluate a convex generator on the projection.  For the total
variation generator this recovers the one-sided Kolmogorov-Smirnov
statistic, which ties the whole divergence family to empirical process
theory; the rest of the package provides the transport constructions,
inequality web, convergence simulations, and level-curve surfaces built
on top.
"""

__version__ = "0.1.0"

from .antitonic import (
    AntitonicFit,
    Block,
    InstanceTooLarge,
    KktReport,
    PrefixCheckReport,
    WeightedSequence,
    check_kkt,
    check_monotone_pair,
    prefix_integral_check,
    project_antitonic,
    qp_oracle,
)
from .distributions import (
    AbsoluteContinuityViolated,
    DiscreteDistribution,
    DistributionParseError,
    EmpiricalDistribution,
    RnDerivative,
    distribution_to_json,
    from_samples,
    load_distribution,
    load_samples,
    make_distribution,
    prefix_masses,
    rn_derivative,
)
from .divergence import (
    DivergenceResult,
    FitDiagnostics,
    InequalityEntry,
    InequalityReport,
    RearrangementPair,
    check_inequalities,
    check_universal_lower_bound,
    divergence,
    divergence_over_rays,
    partition_divergence,
    projected_measure,
    rearrangement_pair,
    symmetrized_over_rays,
    tv_chi2_envelope,
)
from .generators import (
    Generator,
    affine_shift,
    generator_catalogue,
    get_generator,
    linear_combination,
)
from .levelcurves import (
    LevelGrid,
    compute_level_grids,
    grid_csv_lines,
    grid_json_payload,
    render_contours,
)
from .rays import (
    KsIdentityReport,
    RaySupremum,
    certify_ks_identity,
    ks_two_sided,
    ray_supremum,
)
from .simulation import (
    GcCell,
    GcConfig,
    GcTrace,
    TrialValues,
    coverage_time,
    empirical_measure,
    run_sweep,
    run_trial,
    sample_atoms,
    trial_rng,
    write_trace_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
