"""MIMO CDMA optical SATCOM simulation and optimization toolkit."""

from ._core import (  # noqa: F401
    BeamSolution,
    BindingConstraint,
    CellProblem,
    DispersionSpec,
    DMatrix,
    FadingFamily,
    FadingSpec,
    InterferenceBound,
    PulseConfig,
    PulseSolution,
    Rng,
    SolveOptions,
    SpreadingCode,
    UncertaintyBall,
    apply_rain_attenuation,
    average_power,
    build_d_matrix,
    build_d_suzuki,
    capacity,
    despread,
    effective_interference_matrix,
    kkt_stationarity_residual,
    kron_lift_norm,
    lagrangian,
    network_error_probability,
    osnr,
    overlap_probability,
    papr_db,
    realized_interference,
    sample_channel_matrix,
    sample_nakagami_amplitude,
    sample_suzuki_coefficient,
    solve_cell,
    solve_inner,
    solve_network,
    solve_pulse,
    spread,
    total_dispersion,
    walsh_code,
    worst_case_interference,
    worst_case_signal_lower_bound,
)

__version__ = "0.1.0"
