//! Sweep and single-point drivers behind the `phasefree` binary.
//!
//! The CSV is the canonical output. Its header is fixed:
//!
//! ```text
//! eta,beta,E_exact,E_avg,fraction_lost,residual,window_K,window_L
//! ```
//!
//! with one row per `(eta, beta)` in eta-major order and every real rendered
//! to 12 significant digits.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::encoding::{pair_average_fidelity, DEFAULT_EPSILON_TAIL};
use crate::entanglement::{
    average_entanglement, figure1_sweep, tmss_entanglement, EntanglementReport,
};
use crate::numerics::check_epsilon;
use crate::oracle::{compare_pair, MAX_CUTOFF};
use crate::states::{check_eta, DEFAULT_EPSILON_TRUNC};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "eta,beta,E_exact,E_avg,fraction_lost,residual,window_K,window_L";

const SIGNIFICANT_DIGITS: usize = 12;
const SVG_WIDTH: f64 = 800.0;
const SVG_HEIGHT: f64 = 600.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Renders `x` with 12 significant digits, `%g` style: fixed notation for
/// decimal exponents in `[-5, 12)`, scientific otherwise, trailing zeros
/// dropped.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exponent) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exponent < 0 { '-' } else { '+' },
            exponent.abs()
        )
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn round_sig(x: f64) -> f64 {
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("round trip")
}

/// Parses a grid given as `a,b,c` or as an inclusive `start:stop:step` range.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = |what: &str| Error::Config(format!("invalid grid {text:?}: {what}"));
    let number = |s: &str| -> Result<f64> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| bad(&format!("{s:?} is not a number")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad("values must be finite"))
        }
    };
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Empty("grid"));
    }
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => single.split(',').map(number).collect(),
        [start, stop, step] => {
            let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
            if !(step > 0.0) || stop < start {
                return Err(bad("range needs step > 0 and stop >= start"));
            }
            // Index-based to avoid drift; the slack admits a stop hit up to rounding.
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=count)
                .map(|i| round_sig(start + i as f64 * step))
                .collect())
        }
        _ => Err(bad("expected a comma list or start:stop:step")),
    }
}

/// Everything `run_sweep` needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub etas: Vec<f64>,
    pub betas: Vec<f64>,
    pub epsilon_tail: f64,
    /// Per-state truncation budget. The sweep's closed forms need no
    /// truncated kets, so this is validated and otherwise unused there.
    pub epsilon_trunc: f64,
    pub output_csv_path: PathBuf,
    pub output_svg_path: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl SweepConfig {
    pub fn new(output_csv_path: impl Into<PathBuf>) -> Self {
        Self {
            etas: crate::entanglement::DEFAULT_ETAS.to_vec(),
            betas: crate::entanglement::DEFAULT_BETAS.to_vec(),
            epsilon_tail: DEFAULT_EPSILON_TAIL,
            epsilon_trunc: DEFAULT_EPSILON_TRUNC,
            output_csv_path: output_csv_path.into(),
            output_svg_path: None,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.etas.is_empty() {
            return Err(Error::Empty("eta grid"));
        }
        if self.betas.is_empty() {
            return Err(Error::Empty("beta grid"));
        }
        check_epsilon(self.epsilon_tail, "epsilon_tail")?;
        check_epsilon(self.epsilon_trunc, "epsilon_trunc")?;
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        Ok(())
    }
}

fn with_threads<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} threads: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// The CSV document for a list of reports.
pub fn render_csv(reports: &[EntanglementReport]) -> String {
    let mut out = String::with_capacity(64 * (reports.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            format_sig(r.eta),
            format_sig(r.beta_abs),
            format_sig(r.e_exact),
            format_sig(r.e_avg),
            format_sig(r.fraction_lost),
            format_sig(r.residual),
            r.window_k,
            r.window_l,
        );
    }
    out
}

/// Line chart of `fraction_lost` against `beta`, one polyline per eta.
///
/// `reports` must be in the eta-major order produced by [`figure1_sweep`].
pub fn render_svg(reports: &[EntanglementReport], etas: &[f64], betas: &[f64]) -> String {
    let (left, right, top, bottom) = (80.0, 150.0, 40.0, 70.0);
    let plot_w = SVG_WIDTH - left - right;
    let plot_h = SVG_HEIGHT - top - bottom;
    let x_min = betas.iter().copied().fold(f64::INFINITY, f64::min);
    let mut x_max = betas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if x_max <= x_min {
        x_max = x_min + 1.0;
    }
    let mut y_max = reports.iter().map(|r| r.fraction_lost).fold(0.0, f64::max);
    if !(y_max > 0.0) {
        y_max = 1.0;
    }
    let x_px = |x: f64| left + (x - x_min) / (x_max - x_min) * plot_w;
    let y_px = |y: f64| top + plot_h - y / y_max * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = SVG_WIDTH,
        h = SVG_HEIGHT
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#
    );
    // axes
    let _ = writeln!(
        svg,
        r#"<line x1="{left}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#,
        y0 = top + plot_h,
        x1 = left + plot_w
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{y0}" stroke="black"/>"#,
        y0 = top + plot_h
    );
    for i in 0..=5 {
        let x = x_min + (x_max - x_min) * i as f64 / 5.0;
        let y = y_max * i as f64 / 5.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">{}</text>"#,
            x_px(x),
            top + plot_h + 18.0,
            format_tick(x)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="end">{}</text>"#,
            left - 6.0,
            y_px(y) + 4.0,
            format_tick(y)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="14" text-anchor="middle">beta</text>"#,
        left + plot_w / 2.0,
        SVG_HEIGHT - 20.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.1}" font-size="14" text-anchor="middle" transform="rotate(-90 20 {:.1})">fraction lost (E - E_avg)/E</text>"#,
        top + plot_h / 2.0,
        top + plot_h / 2.0
    );

    for (i, (eta, series)) in etas
        .iter()
        .zip(reports.chunks(betas.len().max(1)))
        .enumerate()
    {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = series
            .iter()
            .map(|r| format!("{:.2},{:.2}", x_px(r.beta_abs), y_px(r.fraction_lost)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
        let ly = top + 10.0 + 20.0 * i as f64;
        let lx = left + plot_w + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 25.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12">eta = {}</text>"#,
            lx + 30.0,
            ly + 4.0,
            format_sig(*eta)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn format_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    trim_zeros(&s)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Runs the sweep and writes the CSV (and SVG, if requested).
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<EntanglementReport>> {
    config.validate()?;
    let reports = with_threads(config.threads, || {
        figure1_sweep(&config.etas, &config.betas, config.epsilon_tail)
    })??;
    write_file(&config.output_csv_path, &render_csv(&reports))?;
    if let Some(svg_path) = &config.output_svg_path {
        write_file(svg_path, &render_svg(&reports, &config.etas, &config.betas))?;
    }
    Ok(reports)
}

/// Settings for a single-point drill-down.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfig {
    pub eta: f64,
    pub beta: f64,
    pub epsilon_tail: f64,
    pub epsilon_trunc: f64,
    /// Compare against the dense oracle for outcomes up to `cutoff`.
    pub oracle: bool,
    pub cutoff: usize,
}

impl PointConfig {
    pub fn new(eta: f64, beta: f64) -> Self {
        Self {
            eta,
            beta,
            epsilon_tail: DEFAULT_EPSILON_TAIL,
            epsilon_trunc: DEFAULT_EPSILON_TRUNC,
            oracle: false,
            cutoff: 10,
        }
    }
}

/// Evaluates one point and prints a human-readable report to `out`.
pub fn run_point(config: &PointConfig, out: &mut impl Write) -> Result<EntanglementReport> {
    check_eta(config.eta)?;
    check_epsilon(config.epsilon_tail, "epsilon_tail")?;
    check_epsilon(config.epsilon_trunc, "epsilon_trunc")?;
    if config.oracle && config.cutoff > MAX_CUTOFF {
        return Err(Error::Config(format!(
            "oracle cutoff must be at most {MAX_CUTOFF}"
        )));
    }
    let beta = Complex64::new(config.beta, 0.0);
    let report = average_entanglement(config.eta, beta, config.epsilon_tail)?;
    let fidelity =
        pair_average_fidelity(config.eta, beta, config.epsilon_tail, config.epsilon_trunc)?;

    let mut text = String::new();
    let _ = writeln!(text, "eta            = {}", format_sig(report.eta));
    let _ = writeln!(text, "beta           = {}", format_sig(report.beta_abs));
    let _ = writeln!(
        text,
        "E_exact        = {} ebits (tmss_entanglement = {})",
        format_sig(report.e_exact),
        format_sig(tmss_entanglement(config.eta)?)
    );
    let _ = writeln!(text, "E_avg          = {} ebits", format_sig(report.e_avg));
    let _ = writeln!(
        text,
        "fraction_lost  = {}",
        format_sig(report.fraction_lost)
    );
    let _ = writeln!(text, "residual       = {}", format_sig(report.residual));
    let _ = writeln!(
        text,
        "residual_bound = {} ebits",
        format_sig(report.residual_bound)
    );
    let _ = writeln!(
        text,
        "window         = {} x {}",
        report.window_k, report.window_l
    );
    let _ = writeln!(text, "approx_fidelity = {}", format_sig(fidelity));
    let _ = writeln!(text, "top contributions (K, L, probability, ebits):");
    for c in report.top_contributions(10) {
        let _ = writeln!(
            text,
            "  {:>4} {:>4} {} {}",
            c.k,
            c.l,
            format_sig(c.probability),
            format_sig(c.ebits)
        );
    }
    if config.oracle {
        let cmp = compare_pair(config.eta, beta, 0.0, config.cutoff, config.cutoff as u64)?;
        let _ = writeln!(
            text,
            "oracle: {} outcomes, max deviation {} (probability {}, schmidt {}, entropy {})",
            cmp.outcomes_compared,
            format_sig(cmp.max_deviation()),
            format_sig(cmp.max_probability_deviation),
            format_sig(cmp.max_state_deviation),
            format_sig(cmp.max_entropy_deviation),
        );
    }
    out.write_all(text.as_bytes()).map_err(|e| Error::Io {
        path: "<output>".into(),
        message: e.to_string(),
    })?;
    Ok(report)
}
