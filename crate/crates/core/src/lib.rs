//! Degree bookkeeping for partial E-infinity structures on ring spectra:
//! degree monoids, the Kochman basis of the homotopy of `MU ∧ MU`-type
//! comodules, tree spaces with the Lie representation, stage bounds and
//! Dyer-Lashof operation availability.

pub mod degrees;
pub mod dyerlashof;
pub mod kochman;
pub mod lietree;
pub mod prime;
pub mod stagescan;

pub use degrees::{Degree, DegreeError, DegreeSet};
pub use prime::{Prime, PrimeError};
