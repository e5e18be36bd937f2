//! The one-parameter entangled joint-measurement basis.
//!
//! Four two-qubit states built from the vertices of a regular tetrahedron:
//!
//! ```text
//! |Φ_b(θ)⟩ = c₊(θ) |m_b, −m_b⟩ + c₋(θ) |−m_b, m_b⟩,   c±(θ) = (√3 ± e^{iθ}) / (2√2)
//! ```
//!
//! where |±m_b⟩ is the qubit state pointing along the (un-normalized)
//! tetrahedron vertex ±m_b. The family interpolates from partially entangled
//! basis states at θ = 0 to maximally entangled ones at θ = π/2, and satisfies
//! the exact exchange identity SWAP|Φ_b(θ)⟩ = |Φ_b(θ+π)⟩.

use num_complex::Complex64;

use crate::qmath::{
    binary_entropy, bloch_of, inner, kron, partial_trace, BlochVector, StateVector, C64,
};
use crate::{Error, Result};

/// Number of outcomes of the joint measurement.
pub const OUTCOMES: usize = 4;

/// The four tetrahedron vertices (±1, ±1, ±1) with an even number of minus
/// signs flipped: mutually at dot product −1, each of norm √3, summing to zero.
pub fn tetrahedron_vectors() -> [BlochVector; 4] {
    [
        BlochVector::new(1.0, 1.0, 1.0),
        BlochVector::new(1.0, -1.0, -1.0),
        BlochVector::new(-1.0, 1.0, -1.0),
        BlochVector::new(-1.0, -1.0, 1.0),
    ]
}

/// Qubit state with Bloch vector m/|m|:
/// √((1+η)/2)·e^{−iφ/2}|0⟩ + √((1−η)/2)·e^{iφ/2}|1⟩ with η = z/|m|,
/// φ = atan2(y, x). The input need not be normalized; zero is rejected.
pub fn qubit_state(m: &BlochVector) -> Result<StateVector> {
    let r = m.norm();
    if r == 0.0 {
        return Err(Error::InvalidArgument("zero Bloch vector".into()));
    }
    let eta = m.z / r;
    let phi = m.y.atan2(m.x);
    let a0 = ((1.0 + eta) / 2.0).max(0.0).sqrt();
    let a1 = ((1.0 - eta) / 2.0).max(0.0).sqrt();
    let half = Complex64::from_polar(1.0, -phi / 2.0);
    Ok(StateVector::from_normalized(vec![
        a0 * half,
        a1 * half.conj(),
    ]))
}

/// The four basis states at a fixed θ, shared across parties in a run.
#[derive(Debug, Clone)]
pub struct EjmBasis {
    theta: f64,
    states: [StateVector; 4],
}

/// Builds the basis at angle θ (radians). Any real θ is accepted; the
/// physically distinct range is [0, π/2].
pub fn ejm_basis(theta: f64) -> EjmBasis {
    let sqrt3 = 3f64.sqrt();
    let phase = Complex64::from_polar(1.0, theta);
    let scale = 1.0 / (2.0 * 2f64.sqrt());
    let c_plus = (sqrt3 + phase) * scale;
    let c_minus = (sqrt3 - phase) * scale;

    let states = tetrahedron_vectors().map(|m| {
        let plus = qubit_state(&m).expect("vertex is nonzero");
        let minus = qubit_state(&m.negated()).expect("vertex is nonzero");
        let fwd = kron(&plus, &minus).expect("2 qubits");
        let rev = kron(&minus, &plus).expect("2 qubits");
        let amps: Vec<C64> = fwd
            .amplitudes()
            .iter()
            .zip(rev.amplitudes())
            .map(|(f, r)| c_plus * f + c_minus * r)
            .collect();
        StateVector::from_normalized(amps)
    });
    EjmBasis { theta, states }
}

impl EjmBasis {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Basis state for zero-based outcome index `b` (0..4). Outcome labels in
    /// reported distributions are one-based; subtract 1 to index here.
    pub fn state(&self, b: usize) -> &StateVector {
        &self.states[b]
    }

    pub fn states(&self) -> &[StateVector; 4] {
        &self.states
    }

    /// Largest deviation of ⟨Φ_a|Φ_b⟩ from δ_ab.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                let g = inner(&self.states[a], &self.states[b]).expect("same dim");
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Largest entry-wise deviation of Σ_b |Φ_b⟩⟨Φ_b| from the identity.
    pub fn completeness_deviation(&self) -> f64 {
        let mut sum = nalgebra::DMatrix::from_element(4, 4, Complex64::new(0.0, 0.0));
        for s in &self.states {
            sum += s.projector().matrix();
        }
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((sum[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Bloch vector of the reduced state of one slot of basis state `b`
    /// (`slot` 0 or 1). Equals ±(cos θ / 2)·m_b: slot 0 carries the + sign.
    pub fn marginal_bloch(&self, b: usize, slot: usize) -> Result<BlochVector> {
        if slot > 1 {
            return Err(Error::InvalidArgument(format!(
                "slot {slot} out of range 0..2"
            )));
        }
        let reduced = partial_trace(&self.states[b].projector(), &[slot])?;
        bloch_of(&reduced)
    }

    /// Entanglement entropy of each basis state, in bits: the von Neumann
    /// entropy of a one-qubit marginal. All four states share the same value,
    /// h((2 + √3·cos θ)/4): ≈0.3546 at θ = 0, exactly 1 at θ = π/2. Evaluated
    /// in closed form (the marginal's eigenvalues are (2 ± √3·cos θ)/4, fixed
    /// by the Bloch length), which keeps the endpoints exact; unit tests
    /// cross-check it against the eigensolver.
    pub fn entanglement_bits(&self) -> f64 {
        binary_entropy((2.0 + 3.0f64.sqrt() * self.theta.cos()) / 4.0)
    }
}

/// Entanglement entropy of the basis at angle θ, in bits.
pub fn basis_entanglement(theta: f64) -> f64 {
    ejm_basis(theta).entanglement_bits()
}
