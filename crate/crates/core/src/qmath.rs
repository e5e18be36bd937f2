//! Dense complex linear algebra on few-qubit systems.
//!
//! Qubit order is big-endian throughout: the first tensor factor owns the most
//! significant bit of a basis index, so a ket string like |101010⟩ is directly
//! the binary index of its amplitude. Vectors are supported up to 24 qubits,
//! density matrices up to 12; anything larger belongs to the ring-contraction
//! path in `correlator`.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::{Error, Result, Tolerances};

pub const MAX_VECTOR_QUBITS: usize = 24;
pub const MAX_DENSITY_QUBITS: usize = 12;

pub type C64 = Complex64;

/// Normalized pure state of `n` qubits, amplitudes indexed big-endian.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    n: usize,
}

impl StateVector {
    /// Builds a state from amplitudes; the length must be a power of two and
    /// the norm must already be 1 within the equality tolerance.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "state dimension {dim} is not a power of two"
            )));
        }
        let n = dim.trailing_zeros() as usize;
        if n > MAX_VECTOR_QUBITS {
            return Err(Error::SizeLimit {
                detail: format!("{n} qubits exceeds the {MAX_VECTOR_QUBITS}-qubit vector limit"),
            });
        }
        let s = Self { amps, n };
        let norm2 = s.norm_sqr();
        if (norm2 - 1.0).abs() > Tolerances::DEFAULT.eq {
            return Err(Error::InvalidArgument(format!(
                "state norm^2 = {norm2} is not 1"
            )));
        }
        Ok(s)
    }

    /// Single computational basis state |index⟩ of `n` qubits.
    pub fn basis(n: usize, index: usize) -> Self {
        assert!(index < (1 << n));
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Self { amps, n }
    }

    /// Internal constructor for amplitudes known to be normalized.
    pub(crate) fn from_normalized(amps: Vec<C64>) -> Self {
        debug_assert!(amps.len().is_power_of_two());
        let n = amps.len().trailing_zeros() as usize;
        Self { amps, n }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rank-1 projector |ψ⟩⟨ψ| as a density matrix.
    pub fn projector(&self) -> DensityMatrix {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj());
        DensityMatrix { m, n: self.n }
    }
}

/// Mixed state of `n` qubits: Hermitian, unit trace, positive semidefinite
/// within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
    n: usize,
}

impl DensityMatrix {
    /// Validating constructor: checks shape, Hermiticity, trace and the
    /// eigenvalue floor.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        let tol = Tolerances::DEFAULT;
        let d = m.nrows();
        if m.ncols() != d {
            return Err(Error::InvalidDensity(format!(
                "matrix is {}x{}, not square",
                m.nrows(),
                m.ncols()
            )));
        }
        if d == 0 || !d.is_power_of_two() {
            return Err(Error::InvalidDensity(format!(
                "dimension {d} is not a power of two"
            )));
        }
        let n = d.trailing_zeros() as usize;
        if n > MAX_DENSITY_QUBITS {
            return Err(Error::SizeLimit {
                detail: format!("{n} qubits exceeds the {MAX_DENSITY_QUBITS}-qubit density limit"),
            });
        }
        let herm_dev = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| (m[(i, j)] - m[(j, i)].conj()).norm())
            .fold(0.0f64, f64::max);
        if herm_dev > tol.eq {
            return Err(Error::InvalidDensity(format!(
                "Hermiticity deviation {herm_dev:e}"
            )));
        }
        let tr = m.diagonal().iter().sum::<C64>();
        if (tr.re - 1.0).abs() > tol.eq || tr.im.abs() > tol.eq {
            return Err(Error::InvalidDensity(format!("trace {} is not 1", tr)));
        }
        let min_ev = hermitian_eigenvalues(&m)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_ev < -tol.psd {
            return Err(Error::InvalidDensity(format!(
                "minimum eigenvalue {min_ev:e} below the positivity floor"
            )));
        }
        Ok(Self { m, n })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn trace(&self) -> C64 {
        self.m.diagonal().iter().sum()
    }

    /// ⟨ψ|ρ|ψ⟩ for a state of matching dimension (always real for Hermitian ρ).
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: psi.dim(),
                right: self.dim(),
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.dim() {
            let mut row = C64::new(0.0, 0.0);
            for j in 0..self.dim() {
                row += self.m[(i, j)] * psi.amps[j];
            }
            acc += psi.amps[i].conj() * row;
        }
        Ok(acc.re)
    }
}

/// Real 3-vector on (or inside) the Bloch sphere, also used for the
/// length-√3 tetrahedron vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, o: &BlochVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn scaled(&self, s: f64) -> BlochVector {
        BlochVector::new(s * self.x, s * self.y, s * self.z)
    }

    pub fn negated(&self) -> BlochVector {
        self.scaled(-1.0)
    }
}

/// Tensor product of pure states; the first operand owns the most significant
/// qubits of the result.
pub fn kron(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let n = a.n + b.n;
    if n > MAX_VECTOR_QUBITS {
        return Err(Error::SizeLimit {
            detail: format!("kron would produce {n} qubits (limit {MAX_VECTOR_QUBITS})"),
        });
    }
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for &x in &a.amps {
        for &y in &b.amps {
            amps.push(x * y);
        }
    }
    Ok(StateVector { amps, n })
}

/// Tensor product of density matrices, same qubit-order convention as the
/// pure-state `kron`.
pub fn kron_density(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let n = a.n + b.n;
    if n > MAX_DENSITY_QUBITS {
        return Err(Error::SizeLimit {
            detail: format!(
                "kron would produce a {n}-qubit density matrix (limit {MAX_DENSITY_QUBITS})"
            ),
        });
    }
    Ok(DensityMatrix {
        m: a.m.kronecker(&b.m),
        n,
    })
}

fn check_perm(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} does not match {n} qubits",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(format!(
                "index {p} repeated or out of range 0..{n}"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Maps a basis index through the qubit permutation. `perm[i]` is the source
/// position of the qubit placed at target position `i`, so the bit at target
/// `i` is read from source bit `perm[i]`. Qubit 0 is the most significant bit.
fn permuted_index(index: usize, perm: &[usize], n: usize) -> usize {
    let mut src = 0usize;
    for (i, &p) in perm.iter().enumerate() {
        let bit = (index >> (n - 1 - i)) & 1;
        src |= bit << (n - 1 - p);
    }
    src
}

/// Reorders qubits of a pure state. `perm[i]` = source position of the qubit
/// placed at target position `i`.
pub fn permute_qubits(s: &StateVector, perm: &[usize]) -> Result<StateVector> {
    check_perm(perm, s.n)?;
    let mut amps = vec![C64::new(0.0, 0.0); s.dim()];
    for (target, amp) in amps.iter_mut().enumerate() {
        *amp = s.amps[permuted_index(target, perm, s.n)];
    }
    Ok(StateVector { amps, n: s.n })
}

/// Reorders qubits of a density matrix (rows and columns together).
pub fn permute_qubits_density(rho: &DensityMatrix, perm: &[usize]) -> Result<DensityMatrix> {
    check_perm(perm, rho.n)?;
    let d = rho.dim();
    let map: Vec<usize> = (0..d).map(|i| permuted_index(i, perm, rho.n)).collect();
    let m = DMatrix::from_fn(d, d, |i, j| rho.m[(map[i], map[j])]);
    Ok(DensityMatrix { m, n: rho.n })
}

/// ⟨a|b⟩, conjugate-linear in the first argument.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<C64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// Traces out every qubit not in `keep`. Kept qubits appear in ascending
/// original order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n;
    if keep.is_empty() {
        return Err(Error::InvalidArgument("empty keep set".into()));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || *keep_sorted.last().unwrap() >= n {
        return Err(Error::InvalidArgument(format!(
            "keep set {keep:?} is not a set of qubit indices below {n}"
        )));
    }
    let others: Vec<usize> = (0..n).filter(|q| !keep_sorted.contains(q)).collect();
    let k = keep_sorted.len();
    let dk = 1usize << k;
    let de = 1usize << others.len();

    // Embed a (kept-pattern, eliminated-pattern) pair back into a full index.
    let embed = |kept_bits: usize, elim_bits: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &q) in keep_sorted.iter().enumerate() {
            let bit = (kept_bits >> (k - 1 - pos)) & 1;
            idx |= bit << (n - 1 - q);
        }
        for (pos, &q) in others.iter().enumerate() {
            let bit = (elim_bits >> (others.len() - 1 - pos)) & 1;
            idx |= bit << (n - 1 - q);
        }
        idx
    };

    let mut m = DMatrix::from_element(dk, dk, C64::new(0.0, 0.0));
    for a in 0..dk {
        for b in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for e in 0..de {
                acc += rho.m[(embed(a, e), embed(b, e))];
            }
            m[(a, b)] = acc;
        }
    }
    Ok(DensityMatrix { m, n: k })
}

/// Eigenvalues of a Hermitian matrix, via nalgebra's symmetric eigensolver.
fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    nalgebra::linalg::SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

/// Von Neumann entropy in bits: −Σ λ log₂ λ with 0·log 0 = 0. Eigenvalues are
/// clipped to [0, 1] after the positivity floor check.
pub fn entropy(rho: &DensityMatrix) -> Result<f64> {
    let tol = Tolerances::DEFAULT;
    let evs = hermitian_eigenvalues(&rho.m);
    let mut h = 0.0;
    for ev in evs {
        if ev < -tol.psd {
            return Err(Error::InvalidDensity(format!(
                "eigenvalue {ev:e} below the positivity floor"
            )));
        }
        let p = ev.clamp(0.0, 1.0);
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    Ok(h)
}

/// Binary entropy h(p) = −p log₂ p − (1−p) log₂(1−p) in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Bloch vector ⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩ of a single-qubit density matrix.
pub fn bloch_of(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.n != 1 {
        return Err(Error::InvalidArgument(format!(
            "bloch_of needs 1 qubit, got {}",
            rho.n
        )));
    }
    let m: Matrix2<C64> = Matrix2::new(rho.m[(0, 0)], rho.m[(0, 1)], rho.m[(1, 0)], rho.m[(1, 1)]);
    let x = (m[(0, 1)] + m[(1, 0)]).re;
    let y = ((m[(0, 1)] - m[(1, 0)]) * C64::i()).re;
    let z = (m[(0, 0)] - m[(1, 1)]).re;
    Ok(BlochVector::new(x, y, z))
}
