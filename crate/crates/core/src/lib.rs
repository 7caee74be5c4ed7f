//! Null-result measurement sequences on a double Jaynes-Cummings register.
//!
//! Two qubits `a`, `b` start in `α₀|11⟩ + β₀|00⟩` and are each exchange-coupled
//! at rate `g` to a partner (`A`, `B`) initially in `|0⟩`. Repeatedly checking
//! that `AB` holds no excitation and keeping only null results reshapes the
//! `ab` state: it freezes as the checks become frequent, can be driven all the
//! way to a Bell state, and can recover entanglement after it has died.
//!
//! [`analytic`] has the closed forms, [`oracle`] an independent state-vector
//! simulator, [`entanglement`] the concurrence measures and [`experiments`]
//! the sweeps behind the `jc-zeno` binary.

pub mod analytic;
pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod oracle;
pub mod types;
pub mod validate;

pub use analytic::Branch;
pub use error::{Error, Result};
pub use types::{
    basis_index, Bit, PureState16, SystemParams, TwoQubitDensity, TwoQubitPure, ZenoOutcome,
};
