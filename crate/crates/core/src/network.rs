//! Ring-network assembly: N parties, N two-qubit sources, party-major order.
//!
//! Edge `i` connects party `i` to party `i+1 (mod N)` and contributes two
//! qubits; its first qubit stays with party `i`, its second with party `i+1`.
//! The assembled global state orders qubits by party: party `i` holds slots
//! `(2i, 2i+1)`, the first slot carrying the qubit from the edge shared with
//! the preceding party (edge `i−1 mod N`) and the second the qubit from edge
//! `i`. For a triangle of singlets this produces the expansion with amplitude
//! +1/(2√2) on |101010⟩ and −1/(2√2) on |001011⟩.

use crate::qmath::{
    kron, kron_density, permute_qubits, permute_qubits_density, DensityMatrix, StateVector,
    MAX_DENSITY_QUBITS, MAX_VECTOR_QUBITS,
};
use crate::sources::{realize, SourceSpec};
use crate::{Error, Result};

/// An N-party ring (N ≥ 3) with one source per edge. `sources[i]` feeds the
/// edge from party `i` to party `i+1 (mod N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RingNetwork {
    sources: Vec<SourceSpec>,
}

impl RingNetwork {
    pub fn new(sources: Vec<SourceSpec>) -> Result<Self> {
        if sources.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "a ring needs at least 3 parties, got {}",
                sources.len()
            )));
        }
        for s in &sources {
            s.validate()?;
        }
        Ok(Self { sources })
    }

    /// Three-party ring with edges A–B, B–C, C–A in that order.
    pub fn triangle(ab: SourceSpec, bc: SourceSpec, ca: SourceSpec) -> Result<Self> {
        Self::new(vec![ab, bc, ca])
    }

    /// N-party ring with every edge fed by the same source.
    pub fn uniform(n: usize, spec: SourceSpec) -> Result<Self> {
        Self::new(vec![spec; n])
    }

    pub fn n_parties(&self) -> usize {
        self.sources.len()
    }

    pub fn sources(&self) -> &[SourceSpec] {
        &self.sources
    }

    /// True when every source is pure, so the global state can stay a vector.
    pub fn is_pure(&self) -> bool {
        self.sources.iter().all(SourceSpec::is_pure)
    }
}

/// Global 2N-qubit state in party-major order.
#[derive(Debug, Clone)]
pub enum GlobalState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl GlobalState {
    pub fn n_qubits(&self) -> usize {
        match self {
            GlobalState::Pure(s) => s.n_qubits(),
            GlobalState::Mixed(r) => r.n_qubits(),
        }
    }

    /// Density-matrix form: the projector for pure states (subject to the
    /// density-size limit), or the matrix itself.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        match self {
            GlobalState::Pure(s) => {
                if s.n_qubits() > MAX_DENSITY_QUBITS {
                    return Err(Error::SizeLimit {
                        detail: format!(
                            "projector of a {}-qubit state exceeds the {MAX_DENSITY_QUBITS}-qubit density limit",
                            s.n_qubits()
                        ),
                    });
                }
                Ok(s.projector())
            }
            GlobalState::Mixed(r) => Ok(r.clone()),
        }
    }
}

/// The qubit permutation taking edge-major order (edge 0's pair, edge 1's
/// pair, …) to party-major order. In the `permute_qubits` convention
/// (`perm[target] = source position`) this is `perm[j] = (j − 1) mod 2N`:
/// party i's first slot receives edge (i−1)'s second qubit and its second
/// slot receives edge i's first qubit.
pub fn party_permutation(n_parties: usize) -> Result<Vec<usize>> {
    if n_parties < 3 {
        return Err(Error::InvalidArgument(format!(
            "a ring needs at least 3 parties, got {n_parties}"
        )));
    }
    let m = 2 * n_parties;
    Ok((0..m).map(|j| (j + m - 1) % m).collect())
}

/// Tensors the sources in edge order and permutes into party-major order.
/// Pure networks stay state vectors (2N ≤ 24); any mixed edge forces the
/// density path (2N ≤ 12).
pub fn assemble(net: &RingNetwork) -> Result<GlobalState> {
    let n = net.n_parties();
    let qubits = 2 * n;
    let perm = party_permutation(n)?;
    if net.is_pure() {
        if qubits > MAX_VECTOR_QUBITS {
            return Err(Error::SizeLimit {
                detail: format!(
                    "{qubits} qubits exceeds the {MAX_VECTOR_QUBITS}-qubit pure-state limit; use the ring-contraction path instead"
                ),
            });
        }
        let mut acc: Option<StateVector> = None;
        for spec in net.sources() {
            let s = spec.pure_state()?.expect("pure network");
            acc = Some(match acc {
                None => s,
                Some(prev) => kron(&prev, &s)?,
            });
        }
        Ok(GlobalState::Pure(permute_qubits(
            &acc.expect("N ≥ 3"),
            &perm,
        )?))
    } else {
        if qubits > MAX_DENSITY_QUBITS {
            return Err(Error::SizeLimit {
                detail: format!(
                    "{qubits} qubits exceeds the {MAX_DENSITY_QUBITS}-qubit mixed-state limit; use the ring-contraction path instead"
                ),
            });
        }
        let mut acc: Option<DensityMatrix> = None;
        for spec in net.sources() {
            let r = realize(spec)?;
            acc = Some(match acc {
                None => r,
                Some(prev) => kron_density(&prev, &r)?,
            });
        }
        Ok(GlobalState::Mixed(permute_qubits_density(
            &acc.expect("N ≥ 3"),
            &perm,
        )?))
    }
}
