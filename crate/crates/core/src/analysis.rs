//! Bound comparison and parameter sweeps.
//!
//! The quantity under study is always the all-equal probability
//! p(a_1 = … = a_N) of a ring, compared against the classical reference value
//! 61/256 for the triangle. Three one-parameter families are swept: the
//! measurement angle θ (fixed sources), the interpolation weight α (all edges
//! `partial:α`), and the noise level V (all edges `werner:V`). Crossings of
//! the bound are bracketed on the sweep grid and refined by bisection against
//! the exact evaluator, never by interpolating the curve.

use crate::correlator::{
    distribution_with_basis, polygon_closed_form, prob_all_equal, RingEvaluator,
};
use crate::ejm::ejm_basis;
use crate::network::RingNetwork;
use crate::ratio::Ratio;
use crate::sources::SourceSpec;
use crate::{Error, Result};

/// Default grid sizes used by the CLI figures.
pub const DEFAULT_THETA_POINTS: usize = 500;
pub const DEFAULT_ALPHA_POINTS: usize = 500;
/// The noise sweep runs on the (costlier) dense density-matrix path.
pub const DEFAULT_NOISE_POINTS: usize = 200;

/// Largest ring accepted by [`polygon_study`].
pub const POLYGON_MAX_PARTIES: usize = 24;

/// Bisection stops when the crossing is localized to this width.
pub const CROSSING_RESOLUTION: f64 = 1e-6;

/// Largest probability that three independent classical strategies sharing
/// only pairwise randomness can give the all-equal event in the triangle:
/// exactly 61/256.
pub fn trilocal_bound() -> f64 {
    61.0 / 256.0
}

/// The same bound as an exact rational, for symbolic comparisons.
pub fn trilocal_bound_ratio() -> Ratio {
    Ratio::new(61, 256)
}

/// Which parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Theta,
    Alpha,
    Noise,
    Parties,
}

impl std::fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SweepParameter::Theta => "theta",
            SweepParameter::Alpha => "alpha",
            SweepParameter::Noise => "noise",
            SweepParameter::Parties => "n",
        };
        write!(f, "{name}")
    }
}

/// One sweep: a strictly increasing grid and the all-equal probability at
/// each grid point, plus enough metadata to say what was swept.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve {
    pub parameter: SweepParameter,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Space-joined source spec strings (for θ sweeps the fixed sources; for
    /// α/V sweeps the family being swept).
    pub pattern: String,
    /// The fixed measurement angle for α/V sweeps; `None` for θ sweeps.
    pub theta: Option<f64>,
}

impl SweepCurve {
    pub fn new(
        parameter: SweepParameter,
        grid: Vec<f64>,
        mut values: Vec<f64>,
        pattern: String,
        theta: Option<f64>,
    ) -> Result<Self> {
        if grid.is_empty() || grid.len() != values.len() {
            return Err(Error::InvalidArgument(format!(
                "grid ({}) and values ({}) must be nonempty and equal-length",
                grid.len(),
                values.len()
            )));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "sweep grid must be strictly increasing".into(),
            ));
        }
        for v in &mut values {
            if !(-1e-12..=1.0 + 1e-12).contains(v) {
                return Err(Error::InvalidArgument(format!(
                    "sweep value {v} outside [0, 1]"
                )));
            }
            *v = v.clamp(0.0, 1.0);
        }
        Ok(Self {
            parameter,
            grid,
            values,
            pattern,
            theta,
        })
    }
}

/// A curve held against a constant bound: refined crossing parameters and the
/// closed intervals of the grid span where the curve exceeds the bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundComparison {
    pub bound: f64,
    pub crossings: Vec<f64>,
    pub regions_above: Vec<(f64, f64)>,
}

/// Evenly spaced grid from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidArgument(format!(
            "a grid needs at least 2 points, got {points}"
        )));
    }
    if start >= stop || !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "grid bounds [{start}, {stop}] must be finite and increasing"
        )));
    }
    let step = (stop - start) / (points - 1) as f64;
    let mut g: Vec<f64> = (0..points).map(|i| start + step * i as f64).collect();
    // Pin the endpoint so figures end exactly at the stated stop value.
    g[points - 1] = stop;
    Ok(g)
}

fn pattern_of(net: &RingNetwork) -> String {
    net.sources()
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// All-equal probability of `net` measured at angle `theta` (ring path).
pub fn theta_all_equal(net: &RingNetwork, theta: f64) -> Result<f64> {
    Ok(RingEvaluator::new(net, &ejm_basis(theta))?.prob_all_equal())
}

/// All-equal probability of the triangle with three `partial:α` edges.
pub fn alpha_all_equal(theta: f64, alpha: f64) -> Result<f64> {
    let net = RingNetwork::uniform(3, SourceSpec::Partial { alpha })?;
    theta_all_equal(&net, theta)
}

/// All-equal probability of the triangle with three `werner:V` edges,
/// evaluated on the dense 6-qubit density-matrix path.
pub fn noise_all_equal(theta: f64, v: f64) -> Result<f64> {
    let net = RingNetwork::uniform(3, SourceSpec::Werner { v })?;
    let d = distribution_with_basis(&net, &ejm_basis(theta))?;
    Ok(prob_all_equal(&d))
}

fn check_grid_range(grid: &[f64], lo: f64, hi: f64, what: &str) -> Result<()> {
    const SLACK: f64 = 1e-12;
    if grid.iter().any(|&x| x < lo - SLACK || x > hi + SLACK) {
        return Err(Error::InvalidArgument(format!(
            "{what} grid must lie within [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// Sweeps the measurement angle for a fixed network over `grid` ⊂ [0, π/2].
pub fn sweep_theta(net: &RingNetwork, grid: &[f64]) -> Result<SweepCurve> {
    check_grid_range(grid, 0.0, std::f64::consts::FRAC_PI_2, "theta")?;
    let values = grid
        .iter()
        .map(|&theta| theta_all_equal(net, theta))
        .collect::<Result<Vec<_>>>()?;
    SweepCurve::new(
        SweepParameter::Theta,
        grid.to_vec(),
        values,
        pattern_of(net),
        None,
    )
}

/// Sweeps α over `grid` ⊂ [0, 1] for the all-`partial:α` triangle at fixed θ.
pub fn sweep_alpha(theta: f64, grid: &[f64]) -> Result<SweepCurve> {
    check_grid_range(grid, 0.0, 1.0, "alpha")?;
    let values = grid
        .iter()
        .map(|&alpha| alpha_all_equal(theta, alpha))
        .collect::<Result<Vec<_>>>()?;
    SweepCurve::new(
        SweepParameter::Alpha,
        grid.to_vec(),
        values,
        "partial:α ×3".into(),
        Some(theta),
    )
}

/// Sweeps V over `grid` ⊂ [0, 1] for the all-`werner:V` triangle at fixed θ.
pub fn sweep_noise(theta: f64, grid: &[f64]) -> Result<SweepCurve> {
    check_grid_range(grid, 0.0, 1.0, "noise")?;
    let values = grid
        .iter()
        .map(|&v| noise_all_equal(theta, v))
        .collect::<Result<Vec<_>>>()?;
    SweepCurve::new(
        SweepParameter::Noise,
        grid.to_vec(),
        values,
        "werner:V ×3".into(),
        Some(theta),
    )
}

fn bisect<F>(mut lo: f64, mut hi: f64, below_at_lo: bool, bound: f64, eval: &F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    while hi - lo > CROSSING_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if (eval(mid)? < bound) == below_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Locates every bound crossing of the curve: sign changes of (value − bound)
/// are bracketed on the grid and refined by bisection on `eval`, the exact
/// single-point evaluator the sweep was built from.
pub fn find_crossings<F>(curve: &SweepCurve, bound: f64, eval: F) -> Result<BoundComparison>
where
    F: Fn(f64) -> Result<f64>,
{
    let g = &curve.grid;
    let d: Vec<f64> = curve.values.iter().map(|v| v - bound).collect();
    let mut crossings = Vec::new();
    for i in 0..d.len().saturating_sub(1) {
        if d[i] == 0.0 {
            // A grid point exactly on the bound counts as a crossing only
            // when the curve actually changes side around it.
            if i > 0 && i + 1 < d.len() && d[i - 1] * d[i + 1] < 0.0 {
                crossings.push(g[i]);
            }
            continue;
        }
        if d[i] * d[i + 1] < 0.0 {
            crossings.push(bisect(g[i], g[i + 1], d[i] < 0.0, bound, &eval)?);
        }
    }
    // Regions above: start open if the first point is above, then alternate
    // at each crossing.
    let mut regions = Vec::new();
    let mut open: Option<f64> = (d[0] > 0.0).then_some(g[0]);
    for &c in &crossings {
        match open.take() {
            Some(start) => regions.push((start, c)),
            None => open = Some(c),
        }
    }
    if let Some(start) = open {
        regions.push((start, *g.last().expect("nonempty grid")));
    }
    Ok(BoundComparison {
        bound,
        crossings,
        regions_above: regions,
    })
}

/// Aggregate results for one N-party ring at one angle.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonReport {
    pub n_parties: usize,
    pub theta: f64,
    pub all_equal: f64,
    pub prefix_equal: f64,
    pub conditional: f64,
    /// The all-singlet θ=0 closed form, when it applies to this ring.
    pub closed_form: Option<f64>,
}

/// All-equal and prefix-conditional statistics of an N-party ring (N ≤ 24),
/// via ring contraction; all-singlet rings at θ = 0 also carry the closed
/// form for comparison.
pub fn polygon_study(net: &RingNetwork, theta: f64) -> Result<PolygonReport> {
    let n = net.n_parties();
    if n > POLYGON_MAX_PARTIES {
        return Err(Error::SizeLimit {
            detail: format!("polygon study stops at {POLYGON_MAX_PARTIES} parties (got {n})"),
        });
    }
    let ev = RingEvaluator::new(net, &ejm_basis(theta))?;
    let all_equal = ev.prob_all_equal();
    let prefix_equal = ev.prob_prefix_equal();
    let conditional = ev.prob_conditional_all_given_prefix()?;
    let all_singlet = net
        .sources()
        .iter()
        .all(|s| matches!(s, SourceSpec::Singlet));
    let closed_form = if all_singlet && theta == 0.0 {
        Some(polygon_closed_form(n)?)
    } else {
        None
    };
    Ok(PolygonReport {
        n_parties: n,
        theta,
        all_equal,
        prefix_equal,
        conditional,
        closed_form,
    })
}

/// True when the sequence never increases (used for reporting the shape of
/// the θ curve as data, not asserting it).
pub fn is_monotone_nonincreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sources::default_product;

    const EPS: f64 = 1e-12;
    const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

    #[test]
    fn bound_is_the_exact_rational() {
        assert_eq!(trilocal_bound(), 0.23828125);
        assert_eq!(trilocal_bound_ratio(), Ratio::new(61, 256));
        assert_eq!(trilocal_bound_ratio().to_f64(), trilocal_bound());
    }

    #[test]
    fn theta_sweep_endpoints_for_singlets() {
        let net = RingNetwork::uniform(3, SourceSpec::Singlet).unwrap();
        let grid = linear_grid(0.0, FRAC_PI_2, 9).unwrap();
        let curve = sweep_theta(&net, &grid).unwrap();
        assert!((curve.values[0] - 25.0 / 64.0).abs() < EPS);
        assert!((curve.values[8] - 0.25).abs() < EPS);
        // Sweep points equal dedicated single-point evaluations.
        for (&x, &v) in curve.grid.iter().zip(&curve.values) {
            assert!((theta_all_equal(&net, x).unwrap() - v).abs() < EPS);
        }
    }

    #[test]
    fn theta_grid_outside_range_is_rejected() {
        let net = RingNetwork::uniform(3, SourceSpec::Singlet).unwrap();
        assert!(sweep_theta(&net, &[0.0, 2.0]).is_err());
        assert!(sweep_theta(&net, &[-0.5, 0.5]).is_err());
    }

    #[test]
    fn alpha_sweep_known_points() {
        assert!(
            (alpha_all_equal(0.0, std::f64::consts::FRAC_1_SQRT_2).unwrap() - 25.0 / 64.0).abs()
                < EPS
        );
        assert!((alpha_all_equal(0.0, 0.0).unwrap() - 0.25).abs() < EPS);
        assert!((alpha_all_equal(0.0, 1.0).unwrap() - 0.25).abs() < EPS);
    }

    #[test]
    fn noise_sweep_is_the_cubic() {
        // p(V) = (3V³ + 9V² + 9V + 4)/64 for the all-Werner triangle at θ=0.
        for v in [0.0f64, 0.25, 0.5, 0.75, 1.0] {
            let want = (3.0 * v.powi(3) + 9.0 * v.powi(2) + 9.0 * v + 4.0) / 64.0;
            assert!(
                (noise_all_equal(0.0, v).unwrap() - want).abs() < EPS,
                "V={v}"
            );
        }
        assert!((noise_all_equal(0.0, 1.0).unwrap() - 25.0 / 64.0).abs() < EPS);
        assert!((noise_all_equal(0.0, 0.0).unwrap() - 1.0 / 16.0).abs() < EPS);
    }

    #[test]
    fn noise_crossing_is_the_cubic_root() {
        let grid = linear_grid(0.0, 1.0, 101).unwrap();
        let curve = sweep_noise(0.0, &grid).unwrap();
        let cmp = find_crossings(&curve, trilocal_bound(), |v| noise_all_equal(0.0, v)).unwrap();
        assert_eq!(cmp.crossings.len(), 1);
        // Exact root of (3V³+9V²+9V+4)/64 = 61/256: V* = (19/4)^(1/3) − 1.
        let v_star = (19.0f64 / 4.0).cbrt() - 1.0;
        assert!(
            (cmp.crossings[0] - v_star).abs() < 2e-6,
            "got {}",
            cmp.crossings[0]
        );
        assert_eq!(cmp.regions_above.len(), 1);
        assert!((cmp.regions_above[0].0 - v_star).abs() < 2e-6);
        assert_eq!(cmp.regions_above[0].1, 1.0);
        // Consistency: the evaluator brackets the bound around the crossing.
        let c = cmp.crossings[0];
        assert!(noise_all_equal(0.0, c - 1e-5).unwrap() < trilocal_bound());
        assert!(noise_all_equal(0.0, c + 1e-5).unwrap() > trilocal_bound());
    }

    #[test]
    fn alpha_curve_at_theta_zero_never_dips_below_the_bound() {
        let grid = linear_grid(0.0, 1.0, 201).unwrap();
        let curve = sweep_alpha(0.0, &grid).unwrap();
        let cmp = find_crossings(&curve, trilocal_bound(), |a| alpha_all_equal(0.0, a)).unwrap();
        assert!(cmp.crossings.is_empty(), "crossings: {:?}", cmp.crossings);
        assert_eq!(cmp.regions_above, vec![(0.0, 1.0)]);
    }

    #[test]
    fn one_product_theta_curve_stays_below_the_bound() {
        let net =
            RingNetwork::triangle(SourceSpec::Singlet, SourceSpec::Singlet, default_product())
                .unwrap();
        let grid = linear_grid(0.0, FRAC_PI_2, 201).unwrap();
        let curve = sweep_theta(&net, &grid).unwrap();
        assert!(curve.values.iter().all(|&v| v < trilocal_bound()));
        let cmp = find_crossings(&curve, trilocal_bound(), |t| theta_all_equal(&net, t)).unwrap();
        assert!(cmp.crossings.is_empty());
        assert!(cmp.regions_above.is_empty());
    }

    #[test]
    fn singlet_theta_curve_stays_above_the_bound() {
        let net = RingNetwork::uniform(3, SourceSpec::Singlet).unwrap();
        let grid = linear_grid(0.0, FRAC_PI_2, 101).unwrap();
        let curve = sweep_theta(&net, &grid).unwrap();
        let cmp = find_crossings(&curve, trilocal_bound(), |t| theta_all_equal(&net, t)).unwrap();
        assert!(cmp.crossings.is_empty());
        assert_eq!(cmp.regions_above, vec![(0.0, FRAC_PI_2)]);
    }

    #[test]
    fn singlet_theta_curve_is_smooth_and_monotone_on_a_fine_grid() {
        let net = RingNetwork::uniform(3, SourceSpec::Singlet).unwrap();
        let grid = linear_grid(0.0, FRAC_PI_2, 1000).unwrap();
        let curve = sweep_theta(&net, &grid).unwrap();
        assert!(is_monotone_nonincreasing(&curve.values));
        let max_delta = curve
            .values
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0f64, f64::max);
        assert!(max_delta < 0.01, "max adjacent delta {max_delta}");
    }

    #[test]
    fn polygon_study_reports() {
        // All-singlet square: closed form applies and matches.
        let square = RingNetwork::uniform(4, SourceSpec::Singlet).unwrap();
        let r = polygon_study(&square, 0.0).unwrap();
        assert!((r.all_equal - 49.0 / 256.0).abs() < EPS);
        let cf = r.closed_form.unwrap();
        assert!((r.all_equal - cf).abs() < EPS);
        assert!((r.conditional - 0.9423076923076923).abs() < 1e-12);

        // One product edge: closed form does not apply.
        let mut specs = vec![SourceSpec::Singlet; 4];
        specs[3] = default_product();
        let sssp = RingNetwork::new(specs).unwrap();
        let r = polygon_study(&sssp, 0.0).unwrap();
        assert!(r.closed_form.is_none());
        assert!((r.conditional - 97.0 / 208.0).abs() < EPS);

        // Ten singlets: conditional settles near its limit.
        let deca = RingNetwork::uniform(10, SourceSpec::Singlet).unwrap();
        let r = polygon_study(&deca, 0.0).unwrap();
        assert!((r.conditional - 0.9330162617833851).abs() < 1e-12);

        // θ ≠ 0 drops the closed form even for singlets.
        let r = polygon_study(&square, 0.3).unwrap();
        assert!(r.closed_form.is_none());

        assert!(
            polygon_study(&RingNetwork::uniform(25, SourceSpec::Singlet).unwrap(), 0.0).is_err()
        );
    }

    #[test]
    fn linear_grid_shape() {
        let g = linear_grid(0.0, 1.0, 5).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(linear_grid(0.0, 1.0, 1).is_err());
        assert!(linear_grid(1.0, 0.0, 5).is_err());
    }

    #[test]
    fn sweep_curve_validation() {
        assert!(SweepCurve::new(
            SweepParameter::Theta,
            vec![0.0, 0.0],
            vec![0.1, 0.2],
            String::new(),
            None
        )
        .is_err());
        assert!(SweepCurve::new(
            SweepParameter::Theta,
            vec![0.0, 1.0],
            vec![0.1, 1.5],
            String::new(),
            None
        )
        .is_err());
    }
}
