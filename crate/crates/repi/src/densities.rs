//! Construction, normalization, and algebra of 1-D grid densities.
//!
//! Every density in the crate is a [`GridDensity`]: non-negative samples on a
//! uniform grid with unit trapezoid mass. Powers of densities are always taken
//! in the log domain with a floor of [`DENSITY_FLOOR`] on the values; grid
//! points below the floor are excluded from integrals.

use crate::error::{Error, Result};
use crate::order::RenyiOrder;
use rustfft::{num_complex::Complex, FftPlanner};
use statrs::distribution::{Continuous, ContinuousCDF, StudentsT};
use statrs::function::erf::{erfc, erfc_inv};

/// Smallest admissible grid length.
pub const MIN_GRID_LEN: usize = 64;
/// Default grid length for analytic families.
pub const DEFAULT_GRID_LEN: usize = 8192;
/// Default omitted tail mass per side when truncating analytic supports.
pub const DEFAULT_TAIL_MASS: f64 = 1e-10;
/// Values below this floor are treated as zero inside logarithms and powers.
pub const DENSITY_FLOOR: f64 = 1e-300;
/// Maximum renormalization drift tolerated by [`convolve`].
pub const CONVOLVE_DRIFT_LIMIT: f64 = 1e-6;

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const MAX_RESAMPLED_LEN: usize = 1 << 23;

/// A normalized density sampled on a uniform 1-D grid (inclusive endpoints).
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    x_min: f64,
    x_max: f64,
    step: f64,
    values: Vec<f64>,
}

impl GridDensity {
    /// Builds a density from raw samples and normalizes it to unit mass.
    pub fn from_values(x_min: f64, x_max: f64, values: Vec<f64>) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() || x_min >= x_max {
            return Err(Error::Grid(format!(
                "support must satisfy x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if values.len() < MIN_GRID_LEN {
            return Err(Error::Grid(format!(
                "grid too short: {} points (minimum {MIN_GRID_LEN})",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter(
                "density samples must be finite and non-negative".into(),
            ));
        }
        let step = (x_max - x_min) / (values.len() - 1) as f64;
        let mass = trapezoid(step, &values);
        if !mass.is_finite() || mass <= 0.0 {
            return Err(Error::DegenerateDensity(format!(
                "trapezoid mass is {mass}"
            )));
        }
        let values = values.into_iter().map(|v| v / mass).collect();
        Ok(Self { x_min, x_max, step, values })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Grid abscissa of sample `i`.
    pub fn x_at(&self, i: usize) -> f64 {
        self.x_min + self.step * i as f64
    }

    /// Trapezoid mass (1 up to floating error for any constructed density).
    pub fn mass(&self) -> f64 {
        trapezoid(self.step, &self.values)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// Linear interpolation of the density; zero outside the support.
    pub fn value_at(&self, x: f64) -> f64 {
        if x < self.x_min || x > self.x_max {
            return 0.0;
        }
        let t = (x - self.x_min) / self.step;
        let i = (t.floor() as usize).min(self.values.len() - 2);
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// Quantile of the grid law (linear inside cells). `p` is clamped to [0, 1].
    pub fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        let mut cum = 0.0;
        let target = p * self.mass();
        for i in 0..self.values.len() - 1 {
            let cell = 0.5 * self.step * (self.values[i] + self.values[i + 1]);
            if cum + cell >= target {
                let frac = if cell > 0.0 { (target - cum) / cell } else { 0.0 };
                return self.x_at(i) + frac * self.step;
            }
            cum += cell;
        }
        self.x_max
    }

    /// Resamples onto a uniform grid of `len` points spanning `[x_min, x_max]`.
    pub(crate) fn resample(&self, x_min: f64, x_max: f64, len: usize) -> Result<Self> {
        if len > MAX_RESAMPLED_LEN {
            return Err(Error::Grid(format!(
                "resampled grid would need {len} points (cap {MAX_RESAMPLED_LEN})"
            )));
        }
        let step = (x_max - x_min) / (len - 1) as f64;
        let values = (0..len)
            .map(|i| self.value_at(x_min + step * i as f64))
            .collect();
        Self::from_values(x_min, x_max, values)
    }
}

/// Kahan-compensated trapezoid rule.
pub(crate) fn trapezoid(step: f64, values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    let last = values.len() - 1;
    for (i, &v) in values.iter().enumerate() {
        let term = if i == 0 || i == last { 0.5 * v } else { v };
        let y = term - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum * step
}

/// Trapezoid weight of node `i` on a grid of `len` points.
#[inline]
pub(crate) fn trapz_weight(i: usize, len: usize, step: f64) -> f64 {
    if i == 0 || i + 1 == len {
        0.5 * step
    } else {
        step
    }
}

// ---------------------------------------------------------------------------
// Standard-normal helpers shared with the transport module.
// ---------------------------------------------------------------------------

pub(crate) fn std_normal_pdf(u: f64) -> f64 {
    (-0.5 * u * u).exp() / SQRT_2PI
}

pub(crate) fn std_normal_cdf(u: f64) -> f64 {
    0.5 * erfc(-u / std::f64::consts::SQRT_2)
}

pub(crate) fn std_normal_quantile(p: f64) -> f64 {
    if p <= 0.5 {
        -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p)
    } else {
        std::f64::consts::SQRT_2 * erfc_inv(2.0 * (1.0 - p))
    }
}

// ---------------------------------------------------------------------------
// Analytic families
// ---------------------------------------------------------------------------

/// Closed-form density families used to build the test corpus.
///
/// Gaussian and Laplace are centered at zero; the exponential lives on
/// `[0, inf)` (entropies are translation invariant, so its mean offset is
/// irrelevant to every measure computed here).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticFamily {
    Gaussian { sigma: f64 },
    Uniform { a: f64, b: f64 },
    Exponential { rate: f64 },
    Laplace { scale: f64 },
    StudentT { dof: f64 },
}

impl AnalyticFamily {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            AnalyticFamily::Gaussian { sigma } => sigma.is_finite() && sigma > 0.0,
            AnalyticFamily::Uniform { a, b } => a.is_finite() && b.is_finite() && a < b,
            AnalyticFamily::Exponential { rate } => rate.is_finite() && rate > 0.0,
            AnalyticFamily::Laplace { scale } => scale.is_finite() && scale > 0.0,
            AnalyticFamily::StudentT { dof } => dof.is_finite() && dof > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{self}")))
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            AnalyticFamily::Gaussian { sigma } => std_normal_pdf(x / sigma) / sigma,
            AnalyticFamily::Uniform { a, b } => {
                if x >= a && x <= b {
                    1.0 / (b - a)
                } else {
                    0.0
                }
            }
            AnalyticFamily::Exponential { rate } => {
                if x >= 0.0 {
                    rate * (-rate * x).exp()
                } else {
                    0.0
                }
            }
            AnalyticFamily::Laplace { scale } => (-x.abs() / scale).exp() / (2.0 * scale),
            AnalyticFamily::StudentT { dof } => {
                StudentsT::new(0.0, 1.0, dof).expect("validated dof").pdf(x)
            }
        }
    }

    /// Support truncated so the omitted tail mass per side is at most `tail_mass`.
    fn support(&self, tail_mass: f64) -> (f64, f64) {
        match *self {
            AnalyticFamily::Gaussian { sigma } => {
                let z = std_normal_quantile(1.0 - tail_mass);
                (-sigma * z, sigma * z)
            }
            AnalyticFamily::Uniform { a, b } => (a, b),
            AnalyticFamily::Exponential { rate } => (0.0, -tail_mass.ln() / rate),
            AnalyticFamily::Laplace { scale } => {
                let t = -scale * (2.0 * tail_mass).ln();
                (-t, t)
            }
            AnalyticFamily::StudentT { dof } => {
                let t = StudentsT::new(0.0, 1.0, dof).expect("validated dof");
                // Bisection on the tail; the generic inverse CDF is unreliable
                // this far out for small degrees of freedom.
                let p = 1.0 - tail_mass;
                let mut hi = 1.0;
                while t.cdf(hi) < p && hi < 1e300 {
                    hi *= 2.0;
                }
                let mut lo = 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if t.cdf(mid) < p {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let q = 0.5 * (lo + hi);
                (-q, q)
            }
        }
    }

    /// Parses the CLI syntax `name:p1[,p2]`, e.g. `gaussian:1` or `uniform:0,1`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParameter(format!("density spec '{spec}': {msg}"));
        let (name, params) = spec
            .split_once(':')
            .ok_or_else(|| bad("expected name:params"))?;
        let nums: Vec<f64> = params
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("parameters must be numbers"))?;
        let family = match (name.trim(), nums.as_slice()) {
            ("gaussian", [sigma]) => AnalyticFamily::Gaussian { sigma: *sigma },
            ("uniform", [a, b]) => AnalyticFamily::Uniform { a: *a, b: *b },
            ("exponential", [rate]) => AnalyticFamily::Exponential { rate: *rate },
            ("laplace", [scale]) => AnalyticFamily::Laplace { scale: *scale },
            ("student_t", [dof]) => AnalyticFamily::StudentT { dof: *dof },
            _ => return Err(bad("unknown family or wrong parameter count")),
        };
        family.validate()?;
        Ok(family)
    }
}

impl std::fmt::Display for AnalyticFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            AnalyticFamily::Gaussian { sigma } => write!(f, "gaussian:{sigma}"),
            AnalyticFamily::Uniform { a, b } => write!(f, "uniform:{a},{b}"),
            AnalyticFamily::Exponential { rate } => write!(f, "exponential:{rate}"),
            AnalyticFamily::Laplace { scale } => write!(f, "laplace:{scale}"),
            AnalyticFamily::StudentT { dof } => write!(f, "student_t:{dof}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Samples an analytic family on a uniform grid, truncating each tail at
/// `tail_mass`, and normalizes the result.
pub fn make_analytic(
    family: &AnalyticFamily,
    grid_len: usize,
    tail_mass: f64,
) -> Result<GridDensity> {
    family.validate()?;
    if grid_len < MIN_GRID_LEN {
        return Err(Error::InvalidParameter(format!(
            "grid_len {grid_len} below minimum {MIN_GRID_LEN}"
        )));
    }
    if !(tail_mass > 0.0 && tail_mass <= 1e-6) {
        return Err(Error::InvalidParameter(format!(
            "tail_mass must lie in (0, 1e-6], got {tail_mass}"
        )));
    }
    let (lo, hi) = family.support(tail_mass);
    let step = (hi - lo) / (grid_len - 1) as f64;
    let values = (0..grid_len)
        .map(|i| family.pdf(lo + step * i as f64))
        .collect();
    GridDensity::from_values(lo, hi, values)
}

/// Rescales a density to unit mass by scalar division.
pub fn normalize(f: &GridDensity) -> Result<GridDensity> {
    GridDensity::from_values(f.x_min, f.x_max, f.values.clone())
}

fn powered(f: &GridDensity, exponent: f64) -> Result<GridDensity> {
    let logs: Vec<Option<f64>> = f
        .values
        .iter()
        .map(|&v| (v >= DENSITY_FLOOR).then(|| exponent * v.ln()))
        .collect();
    let max = logs
        .iter()
        .flatten()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::Integrability(
            "density power vanishes everywhere on the grid".into(),
        ));
    }
    let values: Vec<f64> = logs
        .into_iter()
        .map(|t| t.map_or(0.0, |t| (t - max).exp()))
        .collect();
    GridDensity::from_values(f.x_min, f.x_max, values)
}

/// Escort density `f_r = f^r / ∫ f^r`, computed in the log domain.
///
/// `escort(f, 1)` returns `f` unchanged.
pub fn escort(f: &GridDensity, r: RenyiOrder) -> Result<GridDensity> {
    if r.is_one() {
        return Ok(f.clone());
    }
    powered(f, r.value())
}

/// Recovers the unique `f` with `escort(f, r) = g`, i.e. `f ∝ g^{1/r}`.
pub fn inverse_escort(g: &GridDensity, r: RenyiOrder) -> Result<GridDensity> {
    if r.is_one() {
        return Ok(g.clone());
    }
    powered(g, 1.0 / r.value())
}

/// Density of `a·X` for `X ~ f`: support scaled by `a`, values by `1/|a|`.
pub fn scale_rv(f: &GridDensity, a: f64) -> Result<GridDensity> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::ZeroScale);
    }
    let (x_min, x_max, values) = if a > 0.0 {
        (f.x_min * a, f.x_max * a, f.values.clone())
    } else {
        let mut v = f.values.clone();
        v.reverse();
        (f.x_max * a, f.x_min * a, v)
    };
    let values = values.into_iter().map(|v| v / a.abs()).collect();
    GridDensity::from_values(x_min, x_max, values)
}

/// Density of `X + Y` for independent `X ~ f`, `Y ~ g`, plus the
/// pre-renormalization mass drift `|mass - 1|`.
///
/// Inputs are resampled onto the finer of the two steps, endpoint samples are
/// halved (trapezoid product rule), and the linear convolution is taken by a
/// zero-padded FFT of length at least `len_f + len_g - 1`, scaled by the step.
pub fn convolve_with_drift(f: &GridDensity, g: &GridDensity) -> Result<(GridDensity, f64)> {
    let h = f.step.min(g.step);
    let fr = resample_to_step(f, h)?;
    let gr = resample_to_step(g, h)?;

    let mut a = fr.values.clone();
    let mut b = gr.values.clone();
    halve_endpoints(&mut a);
    halve_endpoints(&mut b);

    let out_len = a.len() + b.len() - 1;
    let n = out_len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);

    let mut fa: Vec<Complex<f64>> = a
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(n)
        .collect();
    let mut fb: Vec<Complex<f64>> = b
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(n)
        .collect();
    fft.process(&mut fa);
    fft.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y;
    }
    ifft.process(&mut fa);

    let scale = h / n as f64;
    let values: Vec<f64> = fa[..out_len].iter().map(|c| (c.re * scale).max(0.0)).collect();

    let x_min = fr.x_min + gr.x_min;
    let x_max = x_min + h * (out_len - 1) as f64;
    let raw_mass = trapezoid(h, &values);
    let drift = (raw_mass - 1.0).abs();
    if !(drift < CONVOLVE_DRIFT_LIMIT) {
        return Err(Error::Grid(format!(
            "convolution mass drift {drift:.3e} exceeds {CONVOLVE_DRIFT_LIMIT:.0e}"
        )));
    }
    Ok((GridDensity::from_values(x_min, x_max, values)?, drift))
}

/// [`convolve_with_drift`] without the drift report.
pub fn convolve(f: &GridDensity, g: &GridDensity) -> Result<GridDensity> {
    convolve_with_drift(f, g).map(|(d, _)| d)
}

fn halve_endpoints(v: &mut [f64]) {
    let last = v.len() - 1;
    v[0] *= 0.5;
    v[last] *= 0.5;
}

fn resample_to_step(f: &GridDensity, h: f64) -> Result<GridDensity> {
    if (f.step - h).abs() <= 1e-12 * h {
        return Ok(f.clone());
    }
    let range = f.x_max - f.x_min;
    let cells = range / h;
    let n_cells = if (cells - cells.round()).abs() < 1e-9 * cells.max(1.0) {
        cells.round() as usize
    } else {
        cells.ceil() as usize
    };
    let len = n_cells + 1;
    if len > MAX_RESAMPLED_LEN {
        return Err(Error::Grid(format!(
            "resampling onto step {h:.3e} would need {len} points"
        )));
    }
    let x_max = f.x_min + h * n_cells as f64;
    let values = (0..len)
        .map(|i| f.value_at(f.x_min + h * i as f64))
        .collect();
    GridDensity::from_values(f.x_min, x_max, values)
}

/// Resamples both densities onto one grid spanning the union of the supports
/// with the finer of the two steps.
pub(crate) fn common_grid(f: &GridDensity, g: &GridDensity) -> Result<(GridDensity, GridDensity)> {
    if f.x_min == g.x_min && f.x_max == g.x_max && f.len() == g.len() {
        return Ok((f.clone(), g.clone()));
    }
    let x_min = f.x_min.min(g.x_min);
    let x_max = f.x_max.max(g.x_max);
    let h = f.step.min(g.step);
    let len = ((x_max - x_min) / h).ceil() as usize + 1;
    if len > MAX_RESAMPLED_LEN {
        return Err(Error::Grid(format!(
            "common grid would need {len} points (cap {MAX_RESAMPLED_LEN})"
        )));
    }
    Ok((f.resample(x_min, x_max, len)?, g.resample(x_min, x_max, len)?))
}

/// Verdict of the log-concavity test.
#[derive(Debug, Clone, Copy)]
pub struct LogConcavity {
    pub is_log_concave: bool,
    /// Largest normalized second difference of `log f` (positive = violation).
    pub worst_violation: f64,
    /// True when fewer than three consecutive active points exist.
    pub degenerate: bool,
}

/// Tests concavity of `log f` on the support via second differences.
///
/// Points with `f <= 1e-12 * max(f)` are ignored; second differences are
/// normalized by the spread of `log f` over the active points (floored at 1).
pub fn is_log_concave(f: &GridDensity, tol: f64) -> LogConcavity {
    let floor = 1e-12 * f.max_value();
    let logs: Vec<Option<f64>> = f
        .values
        .iter()
        .map(|&v| (v > floor && v >= DENSITY_FLOOR).then(|| v.ln()))
        .collect();
    let active: Vec<f64> = logs.iter().flatten().cloned().collect();
    let scale = if active.is_empty() {
        1.0
    } else {
        let max = active.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = active.iter().cloned().fold(f64::INFINITY, f64::min);
        (max - min).max(1.0)
    };
    let mut worst = f64::NEG_INFINITY;
    for w in logs.windows(3) {
        if let (Some(a), Some(b), Some(c)) = (w[0], w[1], w[2]) {
            worst = worst.max((a - 2.0 * b + c) / scale);
        }
    }
    if worst == f64::NEG_INFINITY {
        return LogConcavity { is_log_concave: true, worst_violation: 0.0, degenerate: true };
    }
    LogConcavity { is_log_concave: worst <= tol, worst_violation: worst, degenerate: false }
}

// ---------------------------------------------------------------------------
// CSV interface: two columns `x,f`, uniformly spaced, optional header.
// ---------------------------------------------------------------------------

/// Reads a density from CSV, validates the grid, and normalizes.
pub fn read_density_csv(path: &std::path::Path) -> Result<GridDensity> {
    let text = std::fs::read_to_string(path)?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.splitn(2, ',');
        let a = parts.next().unwrap_or("").trim();
        let b = parts.next().unwrap_or("").trim();
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(x), Ok(v)) => {
                xs.push(x);
                vs.push(v);
            }
            _ if lineno == 0 => continue, // header line
            _ => {
                return Err(Error::Csv(format!("line {}: expected `x,f`", lineno + 1)));
            }
        }
    }
    if xs.len() < MIN_GRID_LEN {
        return Err(Error::Csv(format!(
            "need at least {MIN_GRID_LEN} rows, got {}",
            xs.len()
        )));
    }
    let n = xs.len();
    let step = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    if !(step > 0.0) {
        return Err(Error::Csv("x column must be strictly increasing".into()));
    }
    for i in 0..n - 1 {
        let dx = xs[i + 1] - xs[i];
        if dx <= 0.0 {
            return Err(Error::Csv(format!(
                "x column not strictly increasing at row {}",
                i + 2
            )));
        }
        if (dx / step - 1.0).abs() >= 1e-9 {
            return Err(Error::Csv(format!(
                "non-uniform spacing at row {}: {dx} vs step {step}",
                i + 2
            )));
        }
    }
    GridDensity::from_values(xs[0], xs[n - 1], vs)
}

/// Writes a density as `x,f` CSV with full round-trip precision.
pub fn write_density_csv(f: &GridDensity, path: &std::path::Path) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "x,f")?;
    for (i, v) in f.values.iter().enumerate() {
        writeln!(out, "{},{}", f.x_at(i), v)?;
    }
    Ok(())
}
