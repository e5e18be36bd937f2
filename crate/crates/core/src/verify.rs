//! Built-in verification suite.
//!
//! Recomputes the catalog of reference values this crate ships (triangle
//! tables, aggregates, bound relations, polygon conditionals, closed form)
//! and the structural guarantees (basis orthonormality/completeness, ring
//! contraction vs dense evaluation on seeded random networks), and reports
//! each as a named pass/fail check. The suite is honest: reference targets
//! that the implemented model provably cannot reach are still checked and
//! reported as failures, with the computed value alongside (see the README
//! section on reference-value discrepancies).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::analysis::{
    is_monotone_nonincreasing, linear_grid, sweep_theta, trilocal_bound, trilocal_bound_ratio,
};
use crate::correlator::{
    distribution_with_basis, polygon_closed_form, prob_all_equal,
    prob_conditional_all_given_prefix, prob_pair_equal, RingEvaluator,
};
use crate::ejm::{basis_entanglement, ejm_basis, tetrahedron_vectors};
use crate::network::RingNetwork;
use crate::qmath::{StateVector, C64};
use crate::ratio::Ratio;
use crate::sources::{default_product, SourceSpec};
use crate::Result;

/// One named check with its computed and expected values rendered for
/// reporting.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub computed: String,
    pub expected: String,
    pub passed: bool,
}

impl CheckResult {
    fn numeric(name: impl Into<String>, computed: f64, expected: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            computed: format!("{computed}"),
            expected: format!("{expected} (tol {tol:e})"),
            passed: (computed - expected).abs() <= tol,
        }
    }

    fn flag(
        name: impl Into<String>,
        passed: bool,
        computed: impl Into<String>,
        expected: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            computed: computed.into(),
            expected: expected.into(),
            passed,
        }
    }

    fn info(name: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            computed: text.into(),
            expected: "reported as data".into(),
            passed: true,
        }
    }
}

/// The full suite outcome.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn n_failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    /// One line per check plus a summary line, stable across runs.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{tag}  {}: computed {} | expected {}\n",
                c.name, c.computed, c.expected
            ));
        }
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            self.n_failed()
        ));
        out
    }
}

const TOL: f64 = 1e-12;

fn random_qubit(rng: &mut ChaCha20Rng) -> StateVector {
    let raw: Vec<C64> = (0..2)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_normalized(raw.into_iter().map(|a| a / norm).collect())
}

fn random_network(rng: &mut ChaCha20Rng, n: usize, allow_mixed: bool) -> RingNetwork {
    let kinds = if allow_mixed { 4 } else { 3 };
    let specs = (0..n)
        .map(|_| match rng.gen_range(0..kinds) {
            0 => SourceSpec::Singlet,
            1 => SourceSpec::Product {
                u: random_qubit(rng),
                v: random_qubit(rng),
            },
            2 => SourceSpec::Partial {
                alpha: rng.gen_range(0.0..=1.0),
            },
            _ => SourceSpec::Werner {
                v: rng.gen_range(0.0..=1.0),
            },
        })
        .collect();
    RingNetwork::new(specs).expect("valid random network")
}

/// Runs every check and returns the report. Never fails early: a failing
/// check is recorded, not raised.
pub fn run_verification() -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let basis0 = ejm_basis(0.0);

    // --- Triangle of singlets: the three-value table and its aggregates ----
    let sss = RingNetwork::uniform(3, SourceSpec::Singlet)?;
    let d_sss = distribution_with_basis(&sss, &basis0)?;
    checks.push(CheckResult::numeric(
        "triangle singlets: p(1,1,1)",
        d_sss.prob(&[1, 1, 1])?,
        25.0 / 256.0,
        TOL,
    ));
    checks.push(CheckResult::numeric(
        "triangle singlets: p(1,1,2)",
        d_sss.prob(&[1, 1, 2])?,
        1.0 / 256.0,
        TOL,
    ));
    checks.push(CheckResult::numeric(
        "triangle singlets: p(1,2,3)",
        d_sss.prob(&[1, 2, 3])?,
        5.0 / 256.0,
        TOL,
    ));
    checks.push(CheckResult::numeric(
        "triangle singlets: normalization",
        d_sss.sum(),
        1.0,
        1e-10,
    ));
    checks.push(CheckResult::numeric(
        "triangle singlets: p(a = b)",
        prob_pair_equal(&d_sss, 0, 1)?,
        7.0 / 16.0,
        TOL,
    ));
    checks.push(CheckResult::numeric(
        "triangle singlets: p(all equal | first two equal)",
        prob_conditional_all_given_prefix(&d_sss)?,
        25.0 / 28.0,
        TOL,
    ));
    checks.push(CheckResult::numeric(
        "triangle singlets: p(a = b = c)",
        prob_all_equal(&d_sss),
        25.0 / 64.0,
        TOL,
    ));

    // --- Mixed-edge triangles: shipped reference values -------------------
    // These targets are provably unattainable for any pure product edge (the
    // all-equal maximum over product edges is 17/64 < 41/128); they are kept
    // as stated and fail honestly. See README: reference-value discrepancies.
    let ssp = RingNetwork::triangle(SourceSpec::Singlet, SourceSpec::Singlet, default_product())?;
    let d_ssp = distribution_with_basis(&ssp, &basis0)?;
    for k in 1..=4 {
        checks.push(CheckResult::numeric(
            format!("one product edge: p({k},{k},{k})"),
            d_ssp.prob(&[k, k, k])?,
            41.0 / 512.0,
            TOL,
        ));
    }
    checks.push(CheckResult::numeric(
        "one product edge: p(a = b = c)",
        prob_all_equal(&d_ssp),
        41.0 / 128.0,
        TOL,
    ));
    let spp = RingNetwork::triangle(SourceSpec::Singlet, default_product(), default_product())?;
    let d_spp = distribution_with_basis(&spp, &basis0)?;
    for k in 1..=4 {
        checks.push(CheckResult::numeric(
            format!("two product edges: p({k},{k},{k})"),
            d_spp.prob(&[k, k, k])?,
            17.0 / 512.0,
            TOL,
        ));
    }
    checks.push(CheckResult::numeric(
        "two product edges: p(a = b = c)",
        prob_all_equal(&d_spp),
        68.0 / 512.0,
        TOL,
    ));

    // --- Bound relations, symbolically -------------------------------------
    let bound = trilocal_bound_ratio();
    checks.push(CheckResult::flag(
        "bound constant equals its rational form",
        trilocal_bound() == bound.to_f64(),
        format!("{}", trilocal_bound()),
        format!("{bound}"),
    ));
    checks.push(CheckResult::flag(
        "all-singlet all-equal exceeds the bound (exact rationals)",
        Ratio::new(25, 64) > bound,
        "25/64",
        format!("> {bound}"),
    ));
    checks.push(CheckResult::flag(
        "stated one-product all-equal exceeds the bound (exact rationals)",
        Ratio::new(41, 128) > bound,
        "41/128",
        format!("> {bound}"),
    ));
    checks.push(CheckResult::flag(
        "two-product all-equal stays below the bound (exact rationals)",
        Ratio::new(68, 512) < bound,
        "68/512",
        format!("< {bound}"),
    ));
    checks.push(CheckResult::info(
        "computed one-product all-equal vs bound (exact rationals)",
        format!(
            "13/64 = {} < {bound}: the computed curve sits below the bound, unlike the stated 41/128",
            Ratio::new(13, 64).to_f64()
        ),
    ));

    // --- Four-party conditionals -------------------------------------------
    // Stated targets; computed values are 97/208, 7/16 and 109/192.
    let n4 = |specs: Vec<SourceSpec>| -> Result<f64> {
        let ev = RingEvaluator::new(&RingNetwork::new(specs)?, &basis0)?;
        ev.prob_conditional_all_given_prefix()
    };
    let s = SourceSpec::Singlet;
    let p = default_product();
    checks.push(CheckResult::numeric(
        "square, one product edge: p(all | first three equal)",
        n4(vec![s.clone(), s.clone(), s.clone(), p.clone()])?,
        5.0 / 11.0,
        TOL,
    ));
    checks.push(CheckResult::numeric(
        "square, two product edges: p(all | first three equal)",
        n4(vec![s.clone(), s.clone(), p.clone(), p.clone()])?,
        416.0 / 1024.0,
        TOL,
    ));
    checks.push(CheckResult::numeric(
        "square, three product edges: p(all | first three equal)",
        n4(vec![s.clone(), p.clone(), p.clone(), p.clone()])?,
        224.0 / 512.0,
        TOL,
    ));

    // --- Polygon closed form -------------------------------------------------
    checks.push(CheckResult::flag(
        "closed form at N=3 is exactly 25/64",
        polygon_closed_form(3)? == 25.0 / 64.0,
        format!("{}", polygon_closed_form(3)?),
        "0.390625",
    ));
    let mut worst_cf = 0.0f64;
    for n in 3..=8 {
        let net = RingNetwork::uniform(n, SourceSpec::Singlet)?;
        let ring = RingEvaluator::new(&net, &basis0)?.prob_all_equal();
        worst_cf = worst_cf.max((ring - polygon_closed_form(n)?).abs());
    }
    checks.push(CheckResult::numeric(
        "ring contraction matches the closed form, N = 3..8 (max |Δ|)",
        worst_cf,
        0.0,
        TOL,
    ));

    // --- Ring contraction vs dense evaluation on random networks ------------
    let mut rng = ChaCha20Rng::seed_from_u64(0x1324_5768_9ACB_DEF0);
    let thetas = [
        0.0,
        std::f64::consts::FRAC_PI_8,
        std::f64::consts::FRAC_PI_4,
        3.0 * std::f64::consts::FRAC_PI_8,
        std::f64::consts::FRAC_PI_2,
    ];
    let mut max_delta = 0.0f64;
    for i in 0..20 {
        let n = 3 + i % 3;
        // Five-party mixed networks would need 10-qubit density matrices on
        // the dense side; keep N = 5 pure so the oracle stays cheap.
        let net = random_network(&mut rng, n, n < 5);
        for &theta in &thetas {
            let basis = ejm_basis(theta);
            let dense = distribution_with_basis(&net, &basis)?;
            let ring = RingEvaluator::new(&net, &basis)?.distribution()?;
            for ((_, pd), (_, pr)) in dense.iter().zip(ring.iter()) {
                max_delta = max_delta.max((pd - pr).abs());
            }
        }
    }
    checks.push(CheckResult::numeric(
        "ring contraction vs dense evaluation, 20 seeded networks × 5 angles (max |Δ|)",
        max_delta,
        0.0,
        TOL,
    ));

    // --- Measurement-basis structure ----------------------------------------
    let grid = linear_grid(0.0, std::f64::consts::FRAC_PI_2, 50)?;
    let mut worst_ortho = 0.0f64;
    let mut worst_complete = 0.0f64;
    let mut worst_bloch = 0.0f64;
    for &theta in &grid {
        let basis = ejm_basis(theta);
        worst_ortho = worst_ortho.max(basis.orthonormality_deviation());
        worst_complete = worst_complete.max(basis.completeness_deviation());
        let scale = theta.cos() / 2.0;
        for (b, m) in tetrahedron_vectors().iter().enumerate() {
            for slot in 0..2 {
                let got = basis.marginal_bloch(b, slot)?;
                let sign = if slot == 0 { 1.0 } else { -1.0 };
                let dev = ((got.x - sign * scale * m.x).powi(2)
                    + (got.y - sign * scale * m.y).powi(2)
                    + (got.z - sign * scale * m.z).powi(2))
                .sqrt();
                worst_bloch = worst_bloch.max(dev);
            }
        }
    }
    checks.push(CheckResult::numeric(
        "basis orthonormality over 50 angles (max deviation)",
        worst_ortho,
        0.0,
        TOL,
    ));
    checks.push(CheckResult::numeric(
        "basis completeness over 50 angles (max deviation)",
        worst_complete,
        0.0,
        TOL,
    ));
    checks.push(CheckResult::numeric(
        "basis marginals are ±(cos θ/2)·m_b over 50 angles (max deviation)",
        worst_bloch,
        0.0,
        TOL,
    ));
    checks.push(CheckResult::numeric(
        "basis entanglement at θ = 0 (bits)",
        basis_entanglement(0.0),
        0.354_578_902_665_270_03,
        TOL,
    ));
    checks.push(CheckResult::numeric(
        "basis entanglement at θ = π/2 (bits)",
        basis_entanglement(std::f64::consts::FRAC_PI_2),
        1.0,
        TOL,
    ));

    // --- Monotonicity, reported not asserted --------------------------------
    let grid = linear_grid(0.0, std::f64::consts::FRAC_PI_2, 1000)?;
    let curve = sweep_theta(&sss, &grid)?;
    checks.push(CheckResult::info(
        "all-singlet θ-curve shape on a 1000-point grid",
        format!(
            "monotone nonincreasing: {}",
            is_monotone_nonincreasing(&curve.values)
        ),
    ));

    Ok(VerifyReport { checks })
}
