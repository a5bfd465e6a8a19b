//! Energy ledgers, decay fits, exact-cancellation checks and commutator
//! probes for solver output.

mod dependence;
mod fit;
mod identities;
mod probe;
mod record;

pub use dependence::{continuous_dependence, perturbed, DependenceReport};
pub use fit::{fit_decay_rate, DecayFit, MIN_FIT_SAMPLES};
pub use identities::{tcm_cancellation_residual, vanishing_identity_suite, IdentityReport, IdentityResidual};
pub use probe::{commutator_probe, tcm_commutator_probe, CommutatorProbe};
pub(crate) use record::dissipation_rates;
pub use record::{
    csv_header, energy_identity_residual, f_functional, record, trapezoid, write_csv, DiagnosticsRecord,
    EnergyResidual, FLedger,
};
