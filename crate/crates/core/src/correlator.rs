//! Exact outcome statistics for a ring network measured party-by-party.
//!
//! Two independent evaluation strategies:
//!
//! * **Dense** ([`distribution`]): assemble the global 2N-qubit state and
//!   contract the measurement projectors outcome-by-outcome. Exponential in N
//!   (capped at N = 8) but completely direct — it serves as the oracle for
//!   the fast path.
//! * **Ring contraction** ([`ring_distribution`], [`RingEvaluator`]): each
//!   party becomes four 4×4 bond matrices (one per outcome) built from its
//!   measurement state and the density matrix of the edge it shares with the
//!   next party; any outcome probability is the trace of the product of one
//!   matrix per party around the ring. Full tables cost O(4^N), aggregate
//!   queries (all-equal, prefix-equal, normalization) cost O(N).
//!
//! Both paths accept every source family: the bond construction is linear in
//! the edge density matrix, so mixtures need no special casing.

use nalgebra::{DMatrix, Matrix4};

use crate::ejm::{ejm_basis, EjmBasis, OUTCOMES};
use crate::network::{assemble, GlobalState, RingNetwork};
use crate::qmath::{DensityMatrix, C64};
use crate::sources::realize;
use crate::{Error, Result};

/// Dense evaluation is O(16^N)-ish in memory traffic; past this many parties
/// the caller is redirected to the ring path.
pub const DENSE_MAX_PARTIES: usize = 8;
/// Full 4^N outcome tables stop here; aggregates remain available for any N.
pub const RING_TABLE_MAX_PARTIES: usize = 12;

/// Distributions must sum to 1 within this tolerance.
const SUM_TOL: f64 = 1e-10;
/// Individual probabilities may undershoot 0 / overshoot 1 by this much
/// before being treated as invalid; inside the window they are clipped.
const ENTRY_TOL: f64 = 1e-12;
/// Conditionals with a smaller denominator are refused as numerically void.
const ZERO_DEN_TOL: f64 = 1e-14;

/// Exact joint distribution over outcome tuples (a_1 … a_N), a_i ∈ {1,2,3,4}.
///
/// Stored densely: index = base-4 digits of the zero-based outcomes, party 0
/// most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    n_parties: usize,
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    /// Validates and clips a raw probability table: every entry must lie in
    /// [−1e-12, 1+1e-12] (clipped to [0, 1]) and the total must be 1 within
    /// 1e-10.
    pub fn new(n_parties: usize, mut probs: Vec<f64>) -> Result<Self> {
        let want = OUTCOMES.pow(n_parties as u32);
        if probs.len() != want {
            return Err(Error::InvalidArgument(format!(
                "expected {want} probabilities for {n_parties} parties, got {}",
                probs.len()
            )));
        }
        let mut sum = 0.0;
        for p in &mut probs {
            if !(-ENTRY_TOL..=1.0 + ENTRY_TOL).contains(p) {
                return Err(Error::InvalidArgument(format!(
                    "probability {p} outside [0, 1] beyond tolerance"
                )));
            }
            *p = p.clamp(0.0, 1.0);
            sum += *p;
        }
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(Self { n_parties, probs })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn n_outcomes(&self) -> usize {
        self.probs.len()
    }

    fn index_of(&self, labels: &[usize]) -> Result<usize> {
        if labels.len() != self.n_parties {
            return Err(Error::InvalidArgument(format!(
                "outcome tuple has {} entries, expected {}",
                labels.len(),
                self.n_parties
            )));
        }
        let mut idx = 0usize;
        for &a in labels {
            if !(1..=OUTCOMES).contains(&a) {
                return Err(Error::InvalidArgument(format!(
                    "outcome label {a} outside 1..={OUTCOMES}"
                )));
            }
            idx = idx * OUTCOMES + (a - 1);
        }
        Ok(idx)
    }

    /// Probability of one outcome tuple, labels in 1..=4.
    pub fn prob(&self, labels: &[usize]) -> Result<f64> {
        Ok(self.probs[self.index_of(labels)?])
    }

    /// Iterates `(outcome tuple, probability)` in lexicographic tuple order,
    /// labels in 1..=4.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        let n = self.n_parties;
        self.probs.iter().enumerate().map(move |(idx, &p)| {
            let mut labels = vec![0usize; n];
            let mut rem = idx;
            for slot in (0..n).rev() {
                labels[slot] = rem % OUTCOMES + 1;
                rem /= OUTCOMES;
            }
            (labels, p)
        })
    }

    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Single-party marginal, indexed by zero-based outcome.
    pub fn marginal(&self, party: usize) -> Result<[f64; 4]> {
        if party >= self.n_parties {
            return Err(Error::InvalidArgument(format!(
                "party {party} outside 0..{}",
                self.n_parties
            )));
        }
        let shift = 2 * (self.n_parties - 1 - party);
        let mut m = [0.0f64; 4];
        for (idx, &p) in self.probs.iter().enumerate() {
            m[(idx >> shift) & 3] += p;
        }
        Ok(m)
    }
}

/// Σ_k p(k, k, …, k).
pub fn prob_all_equal(d: &OutcomeDistribution) -> f64 {
    // Index of (k,…,k) is k · (4^N − 1)/3, i.e. k times the all-ones digit
    // string in base 4.
    let ones = (d.probs.len() - 1) / (OUTCOMES - 1);
    (0..OUTCOMES).map(|k| d.probs[k * ones]).sum()
}

/// Probability that parties `i` and `j` report the same outcome.
pub fn prob_pair_equal(d: &OutcomeDistribution, i: usize, j: usize) -> Result<f64> {
    let n = d.n_parties;
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidArgument(format!(
            "party pair ({i}, {j}) invalid for {n} parties"
        )));
    }
    let si = 2 * (n - 1 - i);
    let sj = 2 * (n - 1 - j);
    let mut sum = 0.0;
    for (idx, &p) in d.probs.iter().enumerate() {
        if (idx >> si) & 3 == (idx >> sj) & 3 {
            sum += p;
        }
    }
    Ok(sum)
}

/// p(a_1 = … = a_N) / p(a_1 = … = a_{N−1}); fails distinctly when the
/// conditioning event has (numerically) zero probability.
pub fn prob_conditional_all_given_prefix(d: &OutcomeDistribution) -> Result<f64> {
    let n = d.n_parties;
    let ones = (d.probs.len() - 1) / (OUTCOMES - 1);
    let num: f64 = (0..OUTCOMES).map(|k| d.probs[k * ones]).sum();
    // Prefix (k,…,k) over the first N−1 parties followed by any last outcome:
    // indices k·(4^{N-1}−1)/3·4 + m.
    let prefix_ones = (OUTCOMES.pow(n as u32 - 1) - 1) / (OUTCOMES - 1);
    let mut den = 0.0;
    for k in 0..OUTCOMES {
        let base = k * prefix_ones * OUTCOMES;
        for m in 0..OUTCOMES {
            den += d.probs[base + m];
        }
    }
    if den <= ZERO_DEN_TOL {
        return Err(Error::ZeroDenominator { prob: den });
    }
    Ok(num / den)
}

// ---------------------------------------------------------------------------
// Dense path
// ---------------------------------------------------------------------------

fn basis_amplitude_table(basis: &EjmBasis) -> [[C64; 4]; 4] {
    let mut t = [[C64::new(0.0, 0.0); 4]; 4];
    for (a, row) in t.iter_mut().enumerate() {
        for (x, amp) in row.iter_mut().enumerate() {
            *amp = basis.state(a).amplitudes()[x];
        }
    }
    t
}

fn dense_pure_recurse(
    v: &[C64],
    kets: &[[C64; 4]; 4],
    depth: usize,
    n: usize,
    prefix: usize,
    probs: &mut [f64],
) {
    if depth == n {
        probs[prefix] = v[0].norm_sqr();
        return;
    }
    let rest = v.len() / 4;
    for (a, ket) in kets.iter().enumerate() {
        let mut w = vec![C64::new(0.0, 0.0); rest];
        for (x, amp) in ket.iter().enumerate() {
            let c = amp.conj();
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (wi, vi) in w.iter_mut().zip(&v[x * rest..(x + 1) * rest]) {
                *wi += c * *vi;
            }
        }
        dense_pure_recurse(&w, kets, depth + 1, n, (prefix << 2) | a, probs);
    }
}

fn dense_mixed_recurse(
    m: &DMatrix<C64>,
    kets: &[[C64; 4]; 4],
    depth: usize,
    n: usize,
    prefix: usize,
    probs: &mut [f64],
) {
    if depth == n {
        probs[prefix] = m[(0, 0)].re;
        return;
    }
    let rest = m.nrows() / 4;
    for (a, ket) in kets.iter().enumerate() {
        let mut m2 = DMatrix::from_element(rest, rest, C64::new(0.0, 0.0));
        for (x, ax) in ket.iter().enumerate() {
            let cx = ax.conj();
            if cx.norm_sqr() == 0.0 {
                continue;
            }
            for (y, ay) in ket.iter().enumerate() {
                let w = cx * ay;
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                for r in 0..rest {
                    for c in 0..rest {
                        m2[(r, c)] += w * m[(x * rest + r, y * rest + c)];
                    }
                }
            }
        }
        dense_mixed_recurse(&m2, kets, depth + 1, n, (prefix << 2) | a, probs);
    }
}

/// Dense joint distribution: assembles the global state and contracts the
/// measurement basis on each party's qubit pair in turn. Capped at
/// [`DENSE_MAX_PARTIES`]; larger rings must use [`ring_distribution`].
pub fn distribution_with_basis(net: &RingNetwork, basis: &EjmBasis) -> Result<OutcomeDistribution> {
    let n = net.n_parties();
    if n > DENSE_MAX_PARTIES {
        return Err(Error::SizeLimit {
            detail: format!(
                "dense evaluation stops at {DENSE_MAX_PARTIES} parties (got {n}); use ring_distribution or RingEvaluator instead"
            ),
        });
    }
    let kets = basis_amplitude_table(basis);
    let mut probs = vec![0.0f64; OUTCOMES.pow(n as u32)];
    match assemble(net)? {
        GlobalState::Pure(psi) => dense_pure_recurse(psi.amplitudes(), &kets, 0, n, 0, &mut probs),
        GlobalState::Mixed(rho) => dense_mixed_recurse(rho.matrix(), &kets, 0, n, 0, &mut probs),
    }
    OutcomeDistribution::new(n, probs)
}

/// [`distribution_with_basis`] with the basis built at `theta`.
pub fn distribution(net: &RingNetwork, theta: f64) -> Result<OutcomeDistribution> {
    distribution_with_basis(net, &ejm_basis(theta))
}

// ---------------------------------------------------------------------------
// Ring-contraction path
// ---------------------------------------------------------------------------

/// One party's bond matrices: for each outcome `a` (zero-based), a 4×4 matrix
/// on the doubled bond space (ket bit, bra bit) of the edge to the next party.
///
/// With Φ the measurement state (first slot on the incoming bond, second on
/// the party's own qubit of its outgoing edge) and ρ the outgoing edge's
/// density matrix,
///
/// ```text
/// M_a[(u,v),(w,z)] = Σ_{s,t} conj(Φ_a[u,s]) · Φ_a[v,t] · ρ[(s,w),(t,z)]
/// ```
///
/// and any joint probability is Tr[M_{a_1} M_{a_2} ⋯ M_{a_N}].
#[derive(Debug, Clone)]
pub struct TransferOperator {
    ops: [Matrix4<C64>; 4],
    total: Matrix4<C64>,
}

impl TransferOperator {
    /// Builds a party's bond matrices from its outgoing edge density matrix.
    pub fn from_density(rho: &DensityMatrix, basis: &EjmBasis) -> Result<Self> {
        if rho.n_qubits() != 2 {
            return Err(Error::InvalidArgument(format!(
                "edge density matrix must be 2 qubits, got {}",
                rho.n_qubits()
            )));
        }
        let r = rho.matrix();
        let mut ops = [Matrix4::<C64>::zeros(); 4];
        for (a, op) in ops.iter_mut().enumerate() {
            let phi = basis.state(a).amplitudes();
            for u in 0..2 {
                for v in 0..2 {
                    for w in 0..2 {
                        for z in 0..2 {
                            let mut acc = C64::new(0.0, 0.0);
                            for s in 0..2 {
                                let left = phi[2 * u + s].conj();
                                if left.norm_sqr() == 0.0 {
                                    continue;
                                }
                                for t in 0..2 {
                                    acc += left * phi[2 * v + t] * r[(2 * s + w, 2 * t + z)];
                                }
                            }
                            op[(2 * u + v, 2 * w + z)] = acc;
                        }
                    }
                }
            }
        }
        let total = ops[0] + ops[1] + ops[2] + ops[3];
        Ok(Self { ops, total })
    }

    /// Bond matrix for zero-based outcome `a`.
    pub fn outcome(&self, a: usize) -> &Matrix4<C64> {
        &self.ops[a]
    }

    /// Σ_a M_a — the outcome-summed bond matrix.
    pub fn total(&self) -> &Matrix4<C64> {
        &self.total
    }
}

/// Ring-contraction evaluator: one [`TransferOperator`] per party, queries by
/// trace of bond-matrix products.
#[derive(Debug, Clone)]
pub struct RingEvaluator {
    parties: Vec<TransferOperator>,
}

impl RingEvaluator {
    pub fn new(net: &RingNetwork, basis: &EjmBasis) -> Result<Self> {
        let parties = net
            .sources()
            .iter()
            .map(|spec| TransferOperator::from_density(&realize(spec)?, basis))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { parties })
    }

    pub fn n_parties(&self) -> usize {
        self.parties.len()
    }

    /// Probability of one outcome tuple, labels in 1..=4. O(N).
    pub fn prob(&self, labels: &[usize]) -> Result<f64> {
        if labels.len() != self.parties.len() {
            return Err(Error::InvalidArgument(format!(
                "outcome tuple has {} entries, expected {}",
                labels.len(),
                self.parties.len()
            )));
        }
        let mut acc = Matrix4::<C64>::identity();
        for (party, &a) in self.parties.iter().zip(labels) {
            if !(1..=OUTCOMES).contains(&a) {
                return Err(Error::InvalidArgument(format!(
                    "outcome label {a} outside 1..={OUTCOMES}"
                )));
            }
            acc *= party.ops[a - 1];
        }
        Ok(acc.trace().re.max(0.0))
    }

    /// Tr[Π_i Σ_a M_a] — equals 1 for a valid network and basis.
    pub fn total_probability(&self) -> f64 {
        let mut acc = Matrix4::<C64>::identity();
        for party in &self.parties {
            acc *= party.total;
        }
        acc.trace().re
    }

    /// Σ_k p(k, …, k) in O(N) bond products.
    pub fn prob_all_equal(&self) -> f64 {
        (0..OUTCOMES)
            .map(|k| {
                let mut acc = Matrix4::<C64>::identity();
                for party in &self.parties {
                    acc *= party.ops[k];
                }
                acc.trace().re
            })
            .sum::<f64>()
            .max(0.0)
    }

    /// Probability that the first N−1 parties agree (the last is free).
    pub fn prob_prefix_equal(&self) -> f64 {
        let (last, rest) = self.parties.split_last().expect("N ≥ 3");
        (0..OUTCOMES)
            .map(|k| {
                let mut acc = Matrix4::<C64>::identity();
                for party in rest {
                    acc *= party.ops[k];
                }
                acc *= last.total;
                acc.trace().re
            })
            .sum::<f64>()
            .max(0.0)
    }

    /// p(all N equal | first N−1 equal).
    pub fn prob_conditional_all_given_prefix(&self) -> Result<f64> {
        let den = self.prob_prefix_equal();
        if den <= ZERO_DEN_TOL {
            return Err(Error::ZeroDenominator { prob: den });
        }
        Ok(self.prob_all_equal() / den)
    }

    /// Full 4^N table by depth-first accumulation of bond products. Capped at
    /// [`RING_TABLE_MAX_PARTIES`]; aggregates stay available beyond that.
    pub fn distribution(&self) -> Result<OutcomeDistribution> {
        let n = self.parties.len();
        if n > RING_TABLE_MAX_PARTIES {
            return Err(Error::SizeLimit {
                detail: format!(
                    "full outcome tables stop at {RING_TABLE_MAX_PARTIES} parties (got {n}); aggregate queries have no such limit"
                ),
            });
        }
        let mut probs = vec![0.0f64; OUTCOMES.pow(n as u32)];
        self.dfs(0, Matrix4::identity(), 0, &mut probs);
        OutcomeDistribution::new(n, probs)
    }

    fn dfs(&self, depth: usize, acc: Matrix4<C64>, prefix: usize, probs: &mut [f64]) {
        if depth == self.parties.len() {
            probs[prefix] = acc.trace().re;
            return;
        }
        for a in 0..OUTCOMES {
            self.dfs(
                depth + 1,
                acc * self.parties[depth].ops[a],
                (prefix << 2) | a,
                probs,
            );
        }
    }
}

/// Full joint distribution via ring contraction (builds the basis at `theta`).
pub fn ring_distribution(net: &RingNetwork, theta: f64) -> Result<OutcomeDistribution> {
    RingEvaluator::new(net, &ejm_basis(theta))?.distribution()
}

// ---------------------------------------------------------------------------
// All-equal closed form for the all-singlet ring at θ = 0
// ---------------------------------------------------------------------------

/// p(a_1 = … = a_N) for N singlet edges at θ = 0:
/// ((−√3−1)^N + (√3−1)^N)² / 4^(2N−1).
///
/// Evaluated through the integer recurrence s_N = −2·s_{N−1} + 2·s_{N−2}
/// (s_0 = 2, s_1 = −2), whose value is exactly (−√3−1)^N + (√3−1)^N; the
/// result is s_N² / 4^(2N−1) = (s_N·2^{−(2N−1)})². Exact i128 arithmetic
/// covers N ≤ 87; beyond that a scaled f64 recurrence takes over (the
/// dominant-root recursion is forward-stable).
pub fn polygon_closed_form(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "closed form needs N ≥ 3, got {n}"
        )));
    }
    if n <= 87 {
        let (mut s0, mut s1): (i128, i128) = (2, -2);
        for _ in 2..=n {
            let s2 = -2 * s1 + 2 * s0;
            s0 = s1;
            s1 = s2;
        }
        let scaled = s1 as f64 * 2f64.powi(-(2 * n as i32 - 1));
        Ok(scaled * scaled)
    } else {
        // t_k = s_k / 4^k obeys t_k = −t_{k−1}/2 + t_{k−2}/8; p = 4·t_N².
        let (mut t0, mut t1) = (2.0f64, -0.5f64);
        for _ in 2..=n {
            let t2 = -0.5 * t1 + 0.125 * t0;
            t0 = t1;
            t1 = t2;
        }
        Ok(4.0 * t1 * t1)
    }
}
