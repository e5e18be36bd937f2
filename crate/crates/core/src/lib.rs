//! Exact simulator for no-input closed ring quantum networks measured with the
//! generalized Elegant Joint Measurement (EJM) family.
//!
//! The library is organized bottom-up:
//!
//! - [`qmath`]: dense complex linear algebra on few-qubit states (tensor
//!   products, qubit permutation, partial trace, von Neumann entropy).
//! - [`ejm`]: the tetrahedron directions, the single-qubit states |±m⟩, and the
//!   four-outcome two-qubit basis |Φ_b^θ⟩ for θ ∈ [0, π/2].
//! - [`sources`]: the two-qubit states a source can distribute (singlet,
//!   product, partially entangled, Werner).
//! - [`network`]: assembly of the global 2N-qubit state of an N-party ring in
//!   party-major qubit order.
//! - [`correlator`]: exact outcome distributions p(a_1..a_N), by dense
//!   evaluation (small N) and by transfer-matrix ring contraction (large N),
//!   plus aggregate statistics and the all-singlet closed form.
//! - [`analysis`]: the tri-local bound 61/256, bound-crossing detection, and
//!   the θ/α/V parameter sweeps and polygon studies.
//! - [`verify`]: the built-in reference-value suite used by the CLI `verify`
//!   command. Several shipped reference targets for product-state scenarios
//!   are provably unattainable; see the README section
//!   "Reference-value discrepancies" and [`verify::run_verification`].
//!
//! Outcomes are labeled 1..=4 at API boundaries (matching the usual outcome
//! naming for this measurement) and 0..=3 internally.

pub mod analysis;
pub mod correlator;
pub mod ejm;
mod error;
pub mod network;
pub mod qmath;
pub mod ratio;
pub mod sources;
pub mod verify;

pub use error::{Error, Result};

/// Centralized numerical tolerances. One knob for the whole crate: `eq` is the
/// general equality tolerance, `psd` the eigenvalue floor accepted before a
/// matrix is rejected as non-positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub eq: f64,
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eq: 1e-12,
            psd: 1e-10,
        }
    }
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        eq: 1e-12,
        psd: 1e-10,
    };
}
