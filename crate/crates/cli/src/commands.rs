//! The five commands. Each resolves its defaults into the run config (so
//! reports echo the settings actually used), builds a table from the core
//! library, and renders it through the shared output pipeline.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::path::Path;

use ejmnet::analysis::{
    linear_grid, polygon_study, sweep_alpha, sweep_noise, sweep_theta, trilocal_bound,
    DEFAULT_ALPHA_POINTS, DEFAULT_NOISE_POINTS, DEFAULT_THETA_POINTS,
};
use ejmnet::correlator::distribution;
use ejmnet::ejm::ejm_basis;
use ejmnet::network::RingNetwork;
use ejmnet::sources::{default_product, SourceSpec};
use ejmnet::verify::run_verification;

use crate::config::RunConfig;
use crate::error::{AppError, AppResult, EXIT_VERIFY_FAILED};
use crate::table::{clamp_prob, fmt_f64, prob_cells, write_output, Cell, Table};

/// The named data sets `figure` can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureName {
    /// Basis entanglement over θ.
    Fig2,
    /// The three triangle curves over θ against the bound.
    Fig4,
    /// Isotropic-noise curves at six angles against the bound.
    Fig5,
    /// Partial-entanglement curves at five angles against the bound.
    Fig6,
    /// All-singlet ring statistics over the party count.
    Polygon,
}

impl FigureName {
    pub fn name(self) -> &'static str {
        match self {
            FigureName::Fig2 => "fig2",
            FigureName::Fig4 => "fig4",
            FigureName::Fig5 => "fig5",
            FigureName::Fig6 => "fig6",
            FigureName::Polygon => "polygon",
        }
    }
}

// ---------------------------------------------------------------------------
// Input parsing
// ---------------------------------------------------------------------------

/// Parses `--sources`: either one pattern word over the letters `s` (singlet),
/// `p` (the default product state), `a` (partial, takes `--alpha`), `w`
/// (isotropic noise, takes `--noise`), or a whitespace-separated list of
/// explicit spec strings such as `singlet werner:0.8 partial:0.3`.
pub fn parse_sources(
    input: &str,
    alpha: Option<f64>,
    noise: Option<f64>,
) -> AppResult<Vec<SourceSpec>> {
    let tokens: Vec<&str> = input.split_whitespace().collect();
    match tokens.as_slice() {
        [] => Err(AppError::Config("--sources is empty".into())),
        [word] if word.chars().all(|c| matches!(c, 's' | 'p' | 'a' | 'w')) => {
            word.chars().map(|c| letter_spec(c, alpha, noise)).collect()
        }
        list => list
            .iter()
            .map(|t| t.parse::<SourceSpec>().map_err(AppError::from))
            .collect(),
    }
}

fn letter_spec(c: char, alpha: Option<f64>, noise: Option<f64>) -> AppResult<SourceSpec> {
    Ok(match c {
        's' => SourceSpec::Singlet,
        'p' => default_product(),
        'a' => SourceSpec::Partial {
            alpha: alpha
                .ok_or_else(|| AppError::Config("source letter 'a' needs --alpha".into()))?,
        },
        'w' => SourceSpec::Werner {
            v: noise.ok_or_else(|| AppError::Config("source letter 'w' needs --noise".into()))?,
        },
        _ => unreachable!("the caller filtered the pattern alphabet"),
    })
}

/// A single source broadcasts to all edges; otherwise the count must match.
fn expand(mut specs: Vec<SourceSpec>, want: usize) -> AppResult<Vec<SourceSpec>> {
    if specs.len() == 1 && want > 1 {
        let one = specs.pop().expect("length checked");
        return Ok(vec![one; want]);
    }
    if specs.len() != want {
        return Err(AppError::Config(format!(
            "{} sources given, {want} needed",
            specs.len()
        )));
    }
    Ok(specs)
}

/// Parses `--grid START:STOP:POINTS` into an inclusive linear grid.
pub fn parse_grid(text: &str) -> AppResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, points] = parts.as_slice() else {
        return Err(AppError::Config(format!(
            "--grid must be START:STOP:POINTS, got `{text}`"
        )));
    };
    let start: f64 = start
        .parse()
        .map_err(|_| AppError::Config(format!("bad grid start `{start}`")))?;
    let stop: f64 = stop
        .parse()
        .map_err(|_| AppError::Config(format!("bad grid stop `{stop}`")))?;
    let points: usize = points
        .parse()
        .map_err(|_| AppError::Config(format!("bad grid point count `{points}`")))?;
    Ok(linear_grid(start, stop, points)?)
}

/// The figure grid: `--grid` when given, otherwise the figure's default,
/// which is recorded back into the config for the report.
fn grid_or_default(
    cfg: &mut RunConfig,
    start: f64,
    stop: f64,
    points: usize,
) -> AppResult<Vec<f64>> {
    match &cfg.grid {
        Some(text) => parse_grid(text),
        None => {
            cfg.grid = Some(format!("{}:{}:{points}", fmt_f64(start), fmt_f64(stop)));
            Ok(linear_grid(start, stop, points)?)
        }
    }
}

fn emit(table: &Table, cfg: &RunConfig) -> AppResult<()> {
    let text = table.render(cfg);
    write_output(&text, cfg.out.as_deref().map(Path::new))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// `triangle`: the full 4³ outcome table of a three-party ring.
pub fn cmd_triangle(cfg: &mut RunConfig) -> AppResult<()> {
    let t = triangle_table(cfg)?;
    emit(&t, cfg)
}

fn triangle_table(cfg: &mut RunConfig) -> AppResult<Table> {
    let sources = cfg.sources.get_or_insert_with(|| "sss".into()).clone();
    let theta = *cfg.theta.get_or_insert(0.0);

    let specs = expand(parse_sources(&sources, cfg.alpha, cfg.noise)?, 3)?;
    let net = RingNetwork::new(specs)?;
    let d = distribution(&net, theta)?;

    let tol = cfg.rational_tol();
    let mut t = Table::new(&["a", "b", "c", "probability", "rational"]);
    for (labels, p) in d.iter() {
        let (p, r) = prob_cells(p, tol);
        t.push(vec![
            Cell::Int(labels[0] as i64),
            Cell::Int(labels[1] as i64),
            Cell::Int(labels[2] as i64),
            p,
            r,
        ]);
    }
    Ok(t)
}

/// `polygon`: all-equal and prefix-conditional statistics of an N-party
/// ring, one quantity per row; all-singlet rings at θ = 0 also report the
/// closed form.
pub fn cmd_polygon(cfg: &mut RunConfig) -> AppResult<()> {
    let t = polygon_table(cfg)?;
    emit(&t, cfg)
}

fn polygon_table(cfg: &mut RunConfig) -> AppResult<Table> {
    let sources = cfg.sources.get_or_insert_with(|| "s".into()).clone();
    let theta = *cfg.theta.get_or_insert(0.0);

    let specs = parse_sources(&sources, cfg.alpha, cfg.noise)?;
    let n = match cfg.n {
        Some(n) => n,
        None if specs.len() >= 3 => specs.len(),
        None => {
            return Err(AppError::Config(
                "give --n, or --sources with one entry per edge".into(),
            ))
        }
    };
    cfg.n = Some(n);
    let net = RingNetwork::new(expand(specs, n)?)?;
    let study = polygon_study(&net, theta)?;

    let tol = cfg.rational_tol();
    let mut t = Table::new(&["n", "theta", "quantity", "value", "rational"]);
    let mut row = |name: &str, v: f64| {
        let (v, r) = prob_cells(v, tol);
        t.push(vec![
            Cell::Int(n as i64),
            Cell::Num(theta),
            Cell::Text(name.into()),
            v,
            r,
        ]);
    };
    row("p_all_equal", study.all_equal);
    row("p_prefix_equal", study.prefix_equal);
    row("p_conditional", study.conditional);
    if let Some(closed) = study.closed_form {
        row("closed_form", closed);
    }
    Ok(t)
}

/// `figure`: one of the named data sets.
pub fn cmd_figure(cfg: &mut RunConfig, name: FigureName) -> AppResult<()> {
    cfg.figure = Some(name.name().into());
    let t = match name {
        FigureName::Fig2 => figure_entanglement(cfg)?,
        FigureName::Fig4 => figure_theta_curves(cfg)?,
        FigureName::Fig5 => figure_noise_curves(cfg)?,
        FigureName::Fig6 => figure_alpha_curves(cfg)?,
        FigureName::Polygon => figure_polygon(cfg)?,
    };
    emit(&t, cfg)
}

fn figure_entanglement(cfg: &mut RunConfig) -> AppResult<Table> {
    let grid = grid_or_default(cfg, 0.0, FRAC_PI_2, DEFAULT_THETA_POINTS)?;
    let mut t = Table::new(&["theta", "entanglement_bits"]);
    for &theta in &grid {
        t.push(vec![
            Cell::Num(theta),
            Cell::Num(ejm_basis(theta).entanglement_bits()),
        ]);
    }
    Ok(t)
}

fn figure_theta_curves(cfg: &mut RunConfig) -> AppResult<Table> {
    let grid = grid_or_default(cfg, 0.0, FRAC_PI_2, DEFAULT_THETA_POINTS)?;
    let s = SourceSpec::Singlet;
    let nets = [
        RingNetwork::new(vec![s.clone(), s.clone(), s.clone()])?,
        RingNetwork::new(vec![s.clone(), s.clone(), default_product()])?,
        RingNetwork::new(vec![s, default_product(), default_product()])?,
    ];
    let curves = nets
        .iter()
        .map(|net| sweep_theta(net, &grid))
        .collect::<Result<Vec<_>, _>>()?;

    let bound = trilocal_bound();
    let mut t = Table::new(&["theta", "p_sss", "p_ssp", "p_spp", "bound"]);
    for (i, &theta) in grid.iter().enumerate() {
        t.push(vec![
            Cell::Num(theta),
            Cell::Num(clamp_prob(curves[0].values[i])),
            Cell::Num(clamp_prob(curves[1].values[i])),
            Cell::Num(clamp_prob(curves[2].values[i])),
            Cell::Num(bound),
        ]);
    }
    Ok(t)
}

const NOISE_CURVE_ANGLES: [(f64, &str); 6] = [
    (0.0, "p_theta_0"),
    (FRAC_PI_8, "p_theta_pi8"),
    (FRAC_PI_4, "p_theta_pi4"),
    (3.0 * FRAC_PI_8, "p_theta_3pi8"),
    (7.0 * PI / 16.0, "p_theta_7pi16"),
    (FRAC_PI_2, "p_theta_pi2"),
];

const ALPHA_CURVE_ANGLES: [(f64, &str); 5] = [
    (0.0, "p_theta_0"),
    (FRAC_PI_8, "p_theta_pi8"),
    (FRAC_PI_4, "p_theta_pi4"),
    (3.0 * FRAC_PI_8, "p_theta_3pi8"),
    (FRAC_PI_2, "p_theta_pi2"),
];

fn parameter_curves(
    cfg: &mut RunConfig,
    parameter: &'static str,
    points: usize,
    angles: &[(f64, &str)],
    sweep: impl Fn(f64, &[f64]) -> ejmnet::Result<ejmnet::analysis::SweepCurve>,
) -> AppResult<Table> {
    let grid = grid_or_default(cfg, 0.0, 1.0, points)?;
    let curves = angles
        .iter()
        .map(|&(theta, _)| sweep(theta, &grid))
        .collect::<Result<Vec<_>, _>>()?;

    let mut columns = vec![parameter];
    columns.extend(angles.iter().map(|&(_, label)| label));
    columns.push("bound");

    let bound = trilocal_bound();
    let mut t = Table::new(&columns);
    for (i, &x) in grid.iter().enumerate() {
        let mut row = vec![Cell::Num(x)];
        row.extend(curves.iter().map(|c| Cell::Num(clamp_prob(c.values[i]))));
        row.push(Cell::Num(bound));
        t.push(row);
    }
    Ok(t)
}

fn figure_noise_curves(cfg: &mut RunConfig) -> AppResult<Table> {
    parameter_curves(
        cfg,
        "noise",
        DEFAULT_NOISE_POINTS,
        &NOISE_CURVE_ANGLES,
        sweep_noise,
    )
}

fn figure_alpha_curves(cfg: &mut RunConfig) -> AppResult<Table> {
    parameter_curves(
        cfg,
        "alpha",
        DEFAULT_ALPHA_POINTS,
        &ALPHA_CURVE_ANGLES,
        sweep_alpha,
    )
}

fn figure_polygon(cfg: &mut RunConfig) -> AppResult<Table> {
    if cfg.grid.is_some() {
        return Err(AppError::Config(
            "the polygon figure has a fixed party range; --grid does not apply".into(),
        ));
    }
    let mut t = Table::new(&["n", "p_all_equal", "closed_form", "conditional"]);
    for n in 3..=10 {
        let net = RingNetwork::uniform(n, SourceSpec::Singlet)?;
        let study = polygon_study(&net, 0.0)?;
        t.push(vec![
            Cell::Int(n as i64),
            Cell::Num(clamp_prob(study.all_equal)),
            Cell::Num(study.closed_form.expect("all-singlet ring at θ = 0")),
            Cell::Num(clamp_prob(study.conditional)),
        ]);
    }
    Ok(t)
}

/// `basis`: the four measurement-basis states at an angle, one amplitude
/// per row. Amplitudes are reported unclamped.
pub fn cmd_basis(cfg: &mut RunConfig) -> AppResult<()> {
    let t = basis_table(cfg);
    emit(&t, cfg)
}

fn basis_table(cfg: &mut RunConfig) -> Table {
    let theta = *cfg.theta.get_or_insert(0.0);
    let basis = ejm_basis(theta);

    let mut t = Table::new(&["state", "ket", "amp_re", "amp_im"]);
    for b in 0..4 {
        let amps = basis.state(b).amplitudes();
        for (idx, amp) in amps.iter().enumerate() {
            t.push(vec![
                Cell::Int(b as i64 + 1),
                Cell::Text(format!("{idx:02b}")),
                Cell::Num(amp.re),
                Cell::Num(amp.im),
            ]);
        }
    }
    t
}

/// `verify`: run the built-in check suite, print one line per check, and
/// report the exit code (0 only when everything passes).
pub fn cmd_verify() -> AppResult<i32> {
    let report = run_verification()?;
    print!("{}", report.render());
    Ok(if report.all_passed() {
        0
    } else {
        EXIT_VERIFY_FAILED
    })
}
