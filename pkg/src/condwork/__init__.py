"""Conditional energy changes and work statistics of general quantum measurements."""

from .energetics import (
    EnergeticsConfig,
    EnergyReport,
    SequenceInstrument,
    conditional_energy_after,
    conditional_energy_before,
    energy_reports,
    quasiprob_distribution,
    requirement_residuals,
    sequence_energy_change,
    sequential_energy_chain,
    tpm_distribution,
    weak_value,
)
from .errors import *  # noqa: F401,F403
from .measurement import (
    KrausInstrument,
    MeasurementModel,
    PointerObservable,
    Povm,
    RepeatableSpec,
    extend_model_commuting,
    induced_povm,
    instrument_apply,
    make_ideal_model,
    make_noisy_model,
    make_repeatable_model,
    outcome_branches,
    trivial_model,
)
from .opcore import DensityState, Operator, partial_trace, spectral_decompose, tensor, validate, von_neumann_entropy
from .scenarios import QubitScenarioConfig, build_qubit_model, figure2_sweep, random_model
from .thermo import ProjectiveComparison, ThermoReport, free_energy, projective_comparison, thermo_report
from .workstats import WorkReport, average_work, conditional_work, total_energy_change, work_reports

__version__ = "0.1.0"
