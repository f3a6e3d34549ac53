//! Dynamical conditions on orders and the finite systems behind them.
//!
//! Finite-scale verdicts are one-sided: failure can be certified, success
//! only holds at the tested scale.

mod certificate;
mod extraction;
mod finite;
mod hyperbolic;
mod scale;

pub use certificate::{fiber_functional, non_recurrence_certificate, CertificateSearch, NonRecurrenceCertificate, MAX_ORBIT};
pub use extraction::{functional_sign_extraction, Extraction};
pub use finite::{poincare_an_verification, poincare_return_times, AnReport, FiniteDynamicalSystem, ReturnTime};
pub use hyperbolic::{common_eigenline, eigen_data, eigenline_resultant, is_hyperbolic, quadratic_resultant, EigenData};
pub use scale::{
    conradian_at_scale, recurrence_witnesses, recurrent_at_scale, recurrent_implies_conradian_check, ImplicationInstance,
    ImplicationReport, Instance, RecurrenceParams, ScaleReport, ScaleVerdict,
};
pub(crate) use scale::{positive_elements, soft};
