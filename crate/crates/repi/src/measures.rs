//! Rényi information measures: entropies, entropy powers, divergences,
//! relative and conditional entropies, derivative identities, varentropy, and
//! the log-concave concavity profile.
//!
//! All operations are pure transforms of immutable values and safe to run in
//! parallel. Divergences that are genuinely infinite (support mismatch on the
//! wrong branch) return `f64::INFINITY` as a sentinel rather than an error:
//! theorem hypotheses sometimes fail legitimately and reports must record it.

use crate::densities::{
    self, common_grid, escort, trapz_weight, GridDensity, DENSITY_FLOOR,
};
use crate::error::{Error, Result};
use crate::order::RenyiOrder;

/// Absolute ceiling on second differences accepted as "concave".
pub const CONCAVITY_TOL: f64 = 1e-7;

/// `log ∫ f^s` by trapezoid quadrature in the log domain.
fn log_integral_power(f: &GridDensity, s: f64) -> Result<f64> {
    let len = f.len();
    let mut max = f64::NEG_INFINITY;
    for &v in f.values() {
        if v >= DENSITY_FLOOR {
            max = max.max(s * v.ln());
        }
    }
    if !max.is_finite() {
        return Err(Error::Integrability(format!(
            "f^{s} vanishes everywhere on the grid"
        )));
    }
    let mut sum = 0.0;
    for (i, &v) in f.values().iter().enumerate() {
        if v >= DENSITY_FLOOR {
            sum += trapz_weight(i, len, f.step()) * (s * v.ln() - max).exp();
        }
    }
    if sum <= 0.0 || !sum.is_finite() {
        return Err(Error::Integrability(format!(
            "∫ f^{s} is numerically degenerate"
        )));
    }
    Ok(max + sum.ln())
}

/// Rényi entropy `h_r = log(∫ f^r) / (1 - r)` in nats; Shannon at the limit.
pub fn renyi_entropy(f: &GridDensity, r: RenyiOrder) -> Result<f64> {
    if r.is_one() {
        let len = f.len();
        let mut acc = 0.0;
        for (i, &v) in f.values().iter().enumerate() {
            if v >= DENSITY_FLOOR {
                acc += trapz_weight(i, len, f.step()) * v * v.ln();
            }
        }
        return Ok(-acc);
    }
    Ok(log_integral_power(f, r.value())? / (1.0 - r.value()))
}

/// Closed-form Rényi entropy of an `n`-dimensional white Gaussian with
/// per-coordinate variance `sigma2`.
pub fn gaussian_renyi_entropy(n: u32, sigma2: f64, r: RenyiOrder) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma2 = {sigma2}")));
    }
    let n = n as f64;
    let tau = 2.0 * std::f64::consts::PI * sigma2;
    if r.is_one() {
        return Ok(0.5 * n * (tau * std::f64::consts::E).ln());
    }
    let rv = r.value();
    let rp = r.conjugate().expect("not the Shannon limit");
    Ok(0.5 * n * tau.ln() + 0.5 * n * rp * rv.ln() / rv)
}

/// `N_r = exp(2 h_r)` (dimension 1).
pub fn entropy_power(f: &GridDensity, r: RenyiOrder) -> Result<f64> {
    Ok((2.0 * renyi_entropy(f, r)?).exp())
}

/// Fraction of `∫ f^r` carried by the outermost 1% of grid points per side.
///
/// Heavy-tailed densities truncated to a grid can have `∫ f^r` dominated by
/// the cut tails when `r < 1`; a large value here means the reported entropy
/// is truncation-sensitive rather than a property of the analytic density.
pub fn truncation_sensitivity(f: &GridDensity, r: RenyiOrder) -> f64 {
    let len = f.len();
    let edge = (len / 100).max(2);
    let s = r.value();
    let mut max = f64::NEG_INFINITY;
    for &v in f.values() {
        if v >= DENSITY_FLOOR {
            max = max.max(s * v.ln());
        }
    }
    if !max.is_finite() {
        return 0.0;
    }
    let mut total = 0.0;
    let mut outer = 0.0;
    for (i, &v) in f.values().iter().enumerate() {
        if v < DENSITY_FLOOR {
            continue;
        }
        let term = trapz_weight(i, len, f.step()) * (s * v.ln() - max).exp();
        total += term;
        if i < edge || i >= len - edge {
            outer += term;
        }
    }
    if total > 0.0 {
        outer / total
    } else {
        0.0
    }
}

/// Rényi divergence `D_r(f‖g) = log(∫ f^r g^{1-r}) / (r-1)`; Kullback–Leibler
/// on the Shannon path. Support violations on the `r > 1` branch return the
/// `+∞` sentinel.
pub fn renyi_divergence(f: &GridDensity, g: &GridDensity, r: RenyiOrder) -> Result<f64> {
    let (f, g) = common_grid(f, g)?;
    let len = f.len();
    if r.is_one() {
        let mut acc = 0.0;
        for i in 0..len {
            let (fv, gv) = (f.values()[i], g.values()[i]);
            if fv < DENSITY_FLOOR {
                continue;
            }
            if gv < DENSITY_FLOOR {
                return Ok(f64::INFINITY);
            }
            acc += trapz_weight(i, len, f.step()) * fv * (fv / gv).ln();
        }
        return Ok(acc);
    }
    let rv = r.value();
    let mut max = f64::NEG_INFINITY;
    for i in 0..len {
        let (fv, gv) = (f.values()[i], g.values()[i]);
        if fv < DENSITY_FLOOR {
            continue;
        }
        if gv < DENSITY_FLOOR {
            if rv > 1.0 {
                return Ok(f64::INFINITY);
            }
            continue; // g^{1-r} -> 0 for r < 1
        }
        max = max.max(rv * fv.ln() + (1.0 - rv) * gv.ln());
    }
    if !max.is_finite() {
        // No common support at all.
        return Ok(f64::INFINITY);
    }
    let mut sum = 0.0;
    for i in 0..len {
        let (fv, gv) = (f.values()[i], g.values()[i]);
        if fv < DENSITY_FLOOR || gv < DENSITY_FLOOR {
            continue;
        }
        let t = rv * fv.ln() + (1.0 - rv) * gv.ln();
        sum += trapz_weight(i, len, f.step()) * (t - max).exp();
    }
    Ok((max + sum.ln()) / (rv - 1.0))
}

/// Relative Rényi entropy `Δ_r(f‖g) = D_{1/r}(f_r‖g_r)` between escorts.
pub fn relative_renyi(f: &GridDensity, g: &GridDensity, r: RenyiOrder) -> Result<f64> {
    if r.is_one() {
        return Err(Error::UndefinedConjugate);
    }
    let fr = escort(f, r)?;
    let gr = escort(g, r)?;
    renyi_divergence(&fr, &gr, RenyiOrder::new(1.0 / r.value())?)
}

/// The cross form `-r' log E[ g_r^{1/r'}(X) ]` with `X ~ f`.
///
/// Replacing `g` by `f` recovers `h_r(f)`; the difference from `h_r(f)` is
/// the relative Rényi entropy. Returns the `+∞` sentinel when the underlying
/// integral genuinely diverges (mass of `f` escaping the support of `g` on
/// the `r < 1` branch), rather than silently dropping those grid points.
pub fn cross_term(f: &GridDensity, g: &GridDensity, r: RenyiOrder) -> Result<f64> {
    if r.is_one() {
        return Err(Error::UndefinedConjugate);
    }
    let rp = r.conjugate().expect("not the Shannon limit");
    let e = 1.0 / rp; // (r-1)/r, negative for r < 1
    let gr = escort(g, r)?;
    let (f, gr) = common_grid(f, &gr)?;
    let len = f.len();
    let mut acc = 0.0;
    for (i, &fv) in f.values().iter().enumerate() {
        if fv < DENSITY_FLOOR {
            continue;
        }
        let gv = gr.values()[i];
        if gv < DENSITY_FLOOR {
            if e < 0.0 {
                // g_r^{1/r'} blows up where f still has mass.
                return Ok(f64::INFINITY);
            }
            continue;
        }
        acc += trapz_weight(i, len, f.step()) * fv * (e * gv.ln()).exp();
    }
    if acc <= 0.0 || !acc.is_finite() {
        // E = 0 can only happen on the r > 1 branch where -r' < 0.
        return Ok(f64::INFINITY);
    }
    Ok(-rp * acc.ln())
}

// ---------------------------------------------------------------------------
// Joint laws on a 2-D grid
// ---------------------------------------------------------------------------

/// A normalized joint density of `(X, Z)` sampled on a uniform 2-D grid.
#[derive(Debug, Clone)]
pub struct Joint2D {
    x_min: f64,
    z_min: f64,
    step_x: f64,
    step_z: f64,
    nx: usize,
    nz: usize,
    /// Row-major: `values[ix * nz + iz]`.
    values: Vec<f64>,
}

impl Joint2D {
    pub fn from_values(
        x_range: (f64, f64),
        z_range: (f64, f64),
        nx: usize,
        nz: usize,
        values: Vec<f64>,
    ) -> Result<Self> {
        if nx < 2 || nz < 2 || values.len() != nx * nz {
            return Err(Error::Grid(format!(
                "joint grid {nx}x{nz} does not match {} values",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter(
                "joint samples must be finite and non-negative".into(),
            ));
        }
        let step_x = (x_range.1 - x_range.0) / (nx - 1) as f64;
        let step_z = (z_range.1 - z_range.0) / (nz - 1) as f64;
        if !(step_x > 0.0 && step_z > 0.0) {
            return Err(Error::Grid("joint support is degenerate".into()));
        }
        let mut j = Self { x_min: x_range.0, z_min: z_range.0, step_x, step_z, nx, nz, values };
        let mass = j.mass();
        if !mass.is_finite() || mass <= 0.0 {
            return Err(Error::DegenerateDensity(format!("joint mass {mass}")));
        }
        for v in &mut j.values {
            *v /= mass;
        }
        Ok(j)
    }

    /// Independent product `f(x) g(z)`.
    pub fn from_product(fx: &GridDensity, gz: &GridDensity) -> Result<Self> {
        let mut values = Vec::with_capacity(fx.len() * gz.len());
        for &a in fx.values() {
            for &b in gz.values() {
                values.push(a * b);
            }
        }
        Self::from_values(
            (fx.x_min(), fx.x_max()),
            (gz.x_min(), gz.x_max()),
            fx.len(),
            gz.len(),
            values,
        )
    }

    /// Standard bivariate Gaussian with correlation `rho`, truncated at
    /// `half_width` per axis.
    pub fn bivariate_gaussian(rho: f64, len: usize, half_width: f64) -> Result<Self> {
        if !(rho > -1.0 && rho < 1.0) {
            return Err(Error::InvalidParameter(format!("correlation {rho}")));
        }
        let det = 1.0 - rho * rho;
        let norm = 1.0 / (2.0 * std::f64::consts::PI * det.sqrt());
        let step = 2.0 * half_width / (len - 1) as f64;
        let mut values = Vec::with_capacity(len * len);
        for ix in 0..len {
            let x = -half_width + step * ix as f64;
            for iz in 0..len {
                let z = -half_width + step * iz as f64;
                let q = (x * x - 2.0 * rho * x * z + z * z) / det;
                values.push(norm * (-0.5 * q).exp());
            }
        }
        Self::from_values((-half_width, half_width), (-half_width, half_width), len, len, values)
    }

    pub fn mass(&self) -> f64 {
        let mut acc = 0.0;
        for ix in 0..self.nx {
            let wx = trapz_weight(ix, self.nx, self.step_x);
            for iz in 0..self.nz {
                let wz = trapz_weight(iz, self.nz, self.step_z);
                acc += wx * wz * self.values[ix * self.nz + iz];
            }
        }
        acc
    }

    /// Marginal density of `X`.
    pub fn marginal_x(&self) -> Result<GridDensity> {
        let mut values = Vec::with_capacity(self.nx);
        for ix in 0..self.nx {
            let mut acc = 0.0;
            for iz in 0..self.nz {
                acc += trapz_weight(iz, self.nz, self.step_z) * self.values[ix * self.nz + iz];
            }
            values.push(acc);
        }
        GridDensity::from_values(
            self.x_min,
            self.x_min + self.step_x * (self.nx - 1) as f64,
            values,
        )
    }

    fn marginal_z_values(&self) -> Vec<f64> {
        (0..self.nz)
            .map(|iz| {
                let mut acc = 0.0;
                for ix in 0..self.nx {
                    acc += trapz_weight(ix, self.nx, self.step_x) * self.values[ix * self.nz + iz];
                }
                acc
            })
            .collect()
    }

    /// Unused field kept for symmetry with the x accessors.
    pub fn z_min(&self) -> f64 {
        self.z_min
    }
}

/// Arimoto conditional Rényi entropy `h_r(X|Z) = -r' log E ‖f(·|Z)‖_r`.
///
/// Slices where the `Z`-marginal falls below `1e-12` are excluded from the
/// outer integral. The Shannon path returns the classical `h(X|Z)`.
pub fn conditional_renyi(j: &Joint2D, r: RenyiOrder) -> Result<f64> {
    let gz = j.marginal_z_values();
    let z_floor = 1e-12;
    if gz.iter().all(|&v| v < z_floor) {
        return Err(Error::DegenerateDensity("Z-marginal below floor".into()));
    }
    if r.is_one() {
        // h(X|Z) = -∬ j log(j / g_Z)
        let mut acc = 0.0;
        for ix in 0..j.nx {
            let wx = trapz_weight(ix, j.nx, j.step_x);
            for iz in 0..j.nz {
                let m = gz[iz];
                if m < z_floor {
                    continue;
                }
                let v = j.values[ix * j.nz + iz];
                if v < DENSITY_FLOOR {
                    continue;
                }
                let wz = trapz_weight(iz, j.nz, j.step_z);
                acc += wx * wz * v * (v / m).ln();
            }
        }
        return Ok(-acc);
    }
    let rv = r.value();
    let rp = r.conjugate().expect("not the Shannon limit");
    let mut outer = 0.0;
    for iz in 0..j.nz {
        let m = gz[iz];
        if m < z_floor {
            continue;
        }
        // ‖f(·|z)‖_r with f(x|z) = j(x,z)/g_Z(z), integrated in x.
        let mut max = f64::NEG_INFINITY;
        for ix in 0..j.nx {
            let v = j.values[ix * j.nz + iz] / m;
            if v >= DENSITY_FLOOR {
                max = max.max(rv * v.ln());
            }
        }
        if !max.is_finite() {
            continue;
        }
        let mut sum = 0.0;
        for ix in 0..j.nx {
            let v = j.values[ix * j.nz + iz] / m;
            if v >= DENSITY_FLOOR {
                sum += trapz_weight(ix, j.nx, j.step_x) * (rv * v.ln() - max).exp();
            }
        }
        let norm_r = ((max + sum.ln()) / rv).exp();
        outer += trapz_weight(iz, j.nz, j.step_z) * m * norm_r;
    }
    if outer <= 0.0 || !outer.is_finite() {
        return Err(Error::Integrability("conditional norm integral degenerate".into()));
    }
    Ok(-rp * outer.ln())
}

// ---------------------------------------------------------------------------
// Derivative identities in the order r
// ---------------------------------------------------------------------------

/// One finite-difference-vs-analytic comparison at order `r`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DerivativeReport {
    pub r: f64,
    pub lhs_fd: f64,
    pub rhs_analytic: f64,
    pub abs_err: f64,
}

impl DerivativeReport {
    fn new(r: f64, lhs_fd: f64, rhs_analytic: f64) -> Self {
        Self { r, lhs_fd, rhs_analytic, abs_err: (lhs_fd - rhs_analytic).abs() }
    }
}

/// Checks the three derivative identities of the escort calculus at order `r`:
///
/// 1. `d/dr (1-r) h_r = ∫ f_r log f`  (minus the cross-entropy of `f_r` vs `f`)
/// 2. `d/dr h_r = -D(f_r‖f) / (1-r)²`
/// 3. `d²/dr² (1-r) h_r = Var log f(X_r)`
///
/// Left sides are fourth-order central differences over `[r-2h, r+2h]`; right
/// sides come from the escort at `r` on the same grid.
pub fn derivative_identities(
    f: &GridDensity,
    r: RenyiOrder,
    h_step: f64,
) -> Result<[DerivativeReport; 3]> {
    if r.is_one() {
        return Err(Error::UndefinedConjugate);
    }
    let rv = r.value();
    if !(h_step > 0.0 && h_step < 0.1) {
        return Err(Error::InvalidParameter(format!("h_step = {h_step}")));
    }
    if rv - 2.0 * h_step <= 0.0 || (rv - 1.0).abs() <= 2.0 * h_step {
        return Err(Error::Hypothesis(format!(
            "stencil [r-2h, r+2h] around r = {rv} leaves the admissible order range"
        )));
    }
    // Integrability over the whole stencil window; failures propagate.
    let g = |s: f64| log_integral_power(f, s);
    let (gm2, gm1, g0, gp1, gp2) = (
        g(rv - 2.0 * h_step)?,
        g(rv - h_step)?,
        g(rv)?,
        g(rv + h_step)?,
        g(rv + 2.0 * h_step)?,
    );
    let d1_g = (-gp2 + 8.0 * gp1 - 8.0 * gm1 + gm2) / (12.0 * h_step);
    let d2_g = (-gp2 + 16.0 * gp1 - 30.0 * g0 + 16.0 * gm1 - gm2) / (12.0 * h_step * h_step);
    let h_at = |gv: f64, s: f64| gv / (1.0 - s);
    let d1_h = (-h_at(gp2, rv + 2.0 * h_step) + 8.0 * h_at(gp1, rv + h_step)
        - 8.0 * h_at(gm1, rv - h_step)
        + h_at(gm2, rv - 2.0 * h_step))
        / (12.0 * h_step);

    let fr = escort(f, r)?;
    let len = f.len();
    let (mut e_log, mut e_log2, mut kl) = (0.0, 0.0, 0.0);
    for i in 0..len {
        let fv = f.values()[i];
        let ev = fr.values()[i];
        if fv < DENSITY_FLOOR || ev < DENSITY_FLOOR {
            continue;
        }
        let w = trapz_weight(i, len, f.step());
        let lf = fv.ln();
        e_log += w * ev * lf;
        e_log2 += w * ev * lf * lf;
        kl += w * ev * (ev / fv).ln();
    }
    let var = (e_log2 - e_log * e_log).max(0.0);

    Ok([
        DerivativeReport::new(rv, d1_g, e_log),
        DerivativeReport::new(rv, d1_h, -kl / ((1.0 - rv) * (1.0 - rv))),
        DerivativeReport::new(rv, d2_g, var),
    ])
}

/// `Var log f(X_r)` under the escort law `X_r ~ f_r`; non-negative.
pub fn varentropy(f: &GridDensity, r: RenyiOrder) -> Result<f64> {
    let fr = escort(f, r)?;
    let len = f.len();
    let (mut e1, mut e2) = (0.0, 0.0);
    for i in 0..len {
        let fv = f.values()[i];
        let ev = fr.values()[i];
        if fv < DENSITY_FLOOR || ev < DENSITY_FLOOR {
            continue;
        }
        let w = trapz_weight(i, len, f.step());
        let lf = fv.ln();
        e1 += w * ev * lf;
        e2 += w * ev * lf * lf;
    }
    Ok((e2 - e1 * e1).max(0.0))
}

/// The concavity profile `g(r) = (1-r) h_r + log r` over an order grid.
#[derive(Debug, Clone)]
pub struct ConcavityProfile {
    pub points: Vec<(f64, f64)>,
    /// All interior second differences at or below [`CONCAVITY_TOL`].
    pub is_concave: bool,
    /// False when the density is not log-concave (profile still evaluated).
    pub applicable: bool,
    pub worst_second_difference: f64,
}

/// Evaluates `g(r) = log ∫ f^r + log r` on `r_grid` and tests concavity by
/// second differences. Densities failing the log-concavity gate are flagged
/// non-applicable. The grid should be uniform for the second differences to
/// be meaningful.
pub fn concavity_profile(f: &GridDensity, r_grid: &[f64]) -> Result<ConcavityProfile> {
    if r_grid.len() < 3 {
        return Err(Error::InvalidParameter("need at least 3 grid orders".into()));
    }
    let applicable = densities::is_log_concave(f, 1e-6).is_log_concave;
    let mut points = Vec::with_capacity(r_grid.len());
    for &rv in r_grid {
        if !(rv > 0.0 && rv.is_finite()) {
            return Err(Error::InvalidOrder(rv));
        }
        points.push((rv, log_integral_power(f, rv)? + rv.ln()));
    }
    let mut worst = f64::NEG_INFINITY;
    for w in points.windows(3) {
        worst = worst.max(w[0].1 - 2.0 * w[1].1 + w[2].1);
    }
    Ok(ConcavityProfile {
        is_concave: worst <= CONCAVITY_TOL,
        applicable,
        worst_second_difference: worst,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::{convolve, make_analytic, scale_rv, std_normal_pdf, AnalyticFamily};

    const LN_4PI_HALF: f64 = 1.2655121234846454;
    const LN_2PIE_HALF: f64 = 1.4189385332046727;

    fn gaussian(sigma: f64) -> GridDensity {
        make_analytic(&AnalyticFamily::Gaussian { sigma }, 8192, 1e-12).unwrap()
    }

    fn uniform01() -> GridDensity {
        make_analytic(&AnalyticFamily::Uniform { a: 0.0, b: 1.0 }, 8192, 1e-10).unwrap()
    }

    fn order(r: f64) -> RenyiOrder {
        RenyiOrder::new(r).unwrap()
    }

    /// N(0,1) and N(mu,1) sampled on one shared grid wide enough for both, so
    /// divergences on the r > 1 branch stay finite.
    fn gaussian_pair(mu: f64) -> (GridDensity, GridDensity) {
        let len = 8192;
        let lo = (-9.0_f64).min(mu - 9.0);
        let hi = 9.0_f64.max(mu + 9.0);
        let step = (hi - lo) / (len - 1) as f64;
        let f = (0..len).map(|i| std_normal_pdf(lo + step * i as f64)).collect();
        let g = (0..len).map(|i| std_normal_pdf(lo + step * i as f64 - mu)).collect();
        (
            GridDensity::from_values(lo, hi, f).unwrap(),
            GridDensity::from_values(lo, hi, g).unwrap(),
        )
    }

    #[test]
    fn uniform_entropy_is_zero() {
        let f = uniform01();
        for &r in &[0.5, 1.0, 2.0, 5.0] {
            assert!(renyi_entropy(&f, order(r)).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn gaussian_entropy_matches_closed_form() {
        let f = gaussian(1.0);
        let h = renyi_entropy(&f, order(2.0)).unwrap();
        assert!((h - LN_4PI_HALF).abs() < 1e-6, "h = {h}");
        let h1 = renyi_entropy(&f, RenyiOrder::shannon()).unwrap();
        assert!((h1 - LN_2PIE_HALF).abs() < 1e-6, "h1 = {h1}");
    }

    #[test]
    fn exponential_entropy_matches_closed_form() {
        // The hard support edge at 0 leaves an O(step^2) trapezoid boundary
        // term, about 2e-6 at 8192 points.
        let f = make_analytic(&AnalyticFamily::Exponential { rate: 1.0 }, 8192, 1e-12).unwrap();
        let h = renyi_entropy(&f, order(2.0)).unwrap();
        assert!((h - std::f64::consts::LN_2).abs() < 1e-5, "h = {h}");
        let f = make_analytic(&AnalyticFamily::Exponential { rate: 1.0 }, 65536, 1e-12).unwrap();
        let h = renyi_entropy(&f, order(2.0)).unwrap();
        assert!((h - std::f64::consts::LN_2).abs() < 1e-7, "refined h = {h}");
    }

    #[test]
    fn gaussian_closed_form_examples() {
        let r2 = order(2.0);
        assert!((gaussian_renyi_entropy(1, 1.0, r2).unwrap() - LN_4PI_HALF).abs() < 1e-15);
        let sh = gaussian_renyi_entropy(1, 1.0, RenyiOrder::shannon()).unwrap();
        assert!((sh - LN_2PIE_HALF).abs() < 1e-15);
        let n3 = gaussian_renyi_entropy(3, 2.0, r2).unwrap();
        assert!((n3 - 1.5 * (8.0 * std::f64::consts::PI).ln()).abs() < 1e-12);
    }

    #[test]
    fn entropy_power_examples() {
        assert!((entropy_power(&uniform01(), order(2.0)).unwrap() - 1.0).abs() < 1e-9);
        let u = uniform01();
        let tri = convolve(&u, &u).unwrap();
        let n2 = entropy_power(&tri, order(2.0)).unwrap();
        assert!((n2 - 2.25).abs() < 1e-4, "N2(tri) = {n2}");
        let g = entropy_power(&gaussian(1.0), order(2.0)).unwrap();
        assert!((g - 4.0 * std::f64::consts::PI).abs() < 1e-4, "N2(gauss) = {g}");
    }

    #[test]
    fn entropy_power_scaling() {
        let f = gaussian(1.0);
        let r = order(2.0);
        let n = entropy_power(&f, r).unwrap();
        let n2 = entropy_power(&scale_rv(&f, 2.0).unwrap(), r).unwrap();
        assert!(((n2 - 4.0 * n) / n).abs() < 1e-5);
    }

    #[test]
    fn divergence_of_identical_arguments_vanishes() {
        let f = gaussian(1.0);
        for &r in &[0.5, 1.0, 2.0] {
            let d = renyi_divergence(&f, &f, order(r)).unwrap();
            assert!(d.abs() < 1e-12, "D_{r} = {d}");
        }
    }

    #[test]
    fn gaussian_divergence_closed_forms() {
        let (f, g) = gaussian_pair(1.0);
        let d2 = renyi_divergence(&f, &g, order(2.0)).unwrap();
        assert!((d2 - 1.0).abs() < 1e-6, "D_2 = {d2}");
        let (f, ghalf) = gaussian_pair(0.5);
        let kl = renyi_divergence(&f, &ghalf, RenyiOrder::shannon()).unwrap();
        assert!((kl - 0.125).abs() < 1e-6, "KL = {kl}");
    }

    #[test]
    fn divergence_support_sentinel() {
        let f = gaussian(1.0);
        let u = uniform01();
        let d = renyi_divergence(&f, &u, order(2.0)).unwrap();
        assert!(d.is_infinite() && d > 0.0);
    }

    #[test]
    fn relative_renyi_examples() {
        let f = gaussian(1.0);
        assert!(relative_renyi(&f, &f, order(2.0)).unwrap().abs() < 1e-10);

        // Δ_r(f‖g) = cross_term(f,g,r) - h_r(f). The two routes resample the
        // Laplace kink differently, an O(step²) effect, so refine the grids
        // until that sits below the 1e-6 check.
        let lap = make_analytic(&AnalyticFamily::Laplace { scale: 1.0 }, 32769, 1e-12).unwrap();
        let gfine = make_analytic(&AnalyticFamily::Gaussian { sigma: 1.0 }, 32768, 1e-12).unwrap();
        let r = order(2.0);
        let delta = relative_renyi(&lap, &gfine, r).unwrap();
        let via_cross = cross_term(&lap, &gfine, r).unwrap() - renyi_entropy(&lap, r).unwrap();
        assert!((delta - via_cross).abs() < 1e-6, "{delta} vs {via_cross}");

        // Continuity toward Kullback-Leibler near r = 1.
        let (fw, gh) = gaussian_pair(0.5);
        let probe = relative_renyi(&fw, &gh, order(1.01)).unwrap();
        assert!((probe - 0.125).abs() < 0.02, "probe = {probe}");
    }

    #[test]
    fn cross_term_examples() {
        let f = gaussian(1.0);
        let r = order(2.0);
        let self_cross = cross_term(&f, &f, r).unwrap();
        assert!((self_cross - LN_4PI_HALF).abs() < 1e-6);

        let lap = make_analytic(&AnalyticFamily::Laplace { scale: 1.0 }, 8192, 1e-12).unwrap();
        let cross = cross_term(&lap, &f, r).unwrap();
        let h = renyi_entropy(&lap, r).unwrap();
        assert!(cross > h + 1e-3, "Gibbs gap not strict: {cross} vs {h}");

        let u = uniform01();
        assert!(cross_term(&u, &u, order(3.0)).unwrap().abs() < 1e-9);
    }

    #[test]
    fn cross_term_diverges_on_escaping_support() {
        let f = gaussian(1.0);
        let u = uniform01();
        // r < 1: negative power of g blows up where f has mass outside [0,1].
        let c = cross_term(&f, &u, order(0.5)).unwrap();
        assert!(c.is_infinite() && c > 0.0);
    }

    #[test]
    fn conditional_renyi_product_equals_marginal() {
        let f = gaussian(1.0);
        let gz = make_analytic(&AnalyticFamily::Laplace { scale: 1.0 }, 1024, 1e-8).unwrap();
        let fx = f.resample(f.x_min(), f.x_max(), 1024).unwrap();
        let j = Joint2D::from_product(&fx, &gz).unwrap();
        for &r in &[0.5, 2.0] {
            let cond = conditional_renyi(&j, order(r)).unwrap();
            let marg = renyi_entropy(&j.marginal_x().unwrap(), order(r)).unwrap();
            assert!((cond - marg).abs() < 1e-9, "r={r}: {cond} vs {marg}");
        }
    }

    #[test]
    fn conditional_renyi_correlated_gaussian() {
        let j = Joint2D::bivariate_gaussian(0.8, 1025, 6.5).unwrap();
        let cond = conditional_renyi(&j, order(2.0)).unwrap();
        let expected = 0.75468649971865471; // (1/2) log(4π(1-ρ²)), ρ = 0.8
        assert!((cond - expected).abs() < 1e-5, "cond = {cond}");
        let marg = renyi_entropy(&j.marginal_x().unwrap(), order(2.0)).unwrap();
        assert!(cond < marg, "conditioning must reduce entropy");
    }

    #[test]
    fn derivative_identities_gaussian() {
        let f = gaussian(1.0);
        let reports = derivative_identities(&f, order(2.0), 1e-3).unwrap();
        let expected = [
            -1.1689385332046727,   // -(log(2π)/2 + 1/4)
            -0.096573590279972655, // -(log 2 - 1/2)/2
            0.125,                 // 1/(2 r²)
        ];
        for (rep, exp) in reports.iter().zip(expected) {
            assert!(rep.abs_err < 1e-4, "fd mismatch: {rep:?}");
            assert!((rep.rhs_analytic - exp).abs() < 2e-5, "rhs {} vs {exp}", rep.rhs_analytic);
        }
    }

    #[test]
    fn derivative_identities_rejects_stencils_crossing_one() {
        let f = gaussian(1.0);
        assert!(derivative_identities(&f, order(1.001), 1e-3).is_err());
    }

    #[test]
    fn varentropy_examples() {
        let g = gaussian(1.0);
        let v = varentropy(&g, RenyiOrder::shannon()).unwrap();
        assert!((v - 0.5).abs() < 1e-6, "gaussian varentropy {v}");
        let e = make_analytic(&AnalyticFamily::Exponential { rate: 1.0 }, 8192, 1e-12).unwrap();
        let ve = varentropy(&e, RenyiOrder::shannon()).unwrap();
        assert!((ve - 1.0).abs() < 1e-4, "exponential varentropy {ve}");
        let vu = varentropy(&uniform01(), RenyiOrder::shannon()).unwrap();
        assert!(vu < 1e-12);
        let v2 = varentropy(&g, order(2.0)).unwrap();
        assert!((v2 - 0.125).abs() < 1e-6, "gaussian varentropy at 2: {v2}");
    }

    #[test]
    fn concavity_profile_gaussian_and_uniform() {
        let grid: Vec<f64> = (0..50).map(|i| 0.2 + i as f64 * (5.0 - 0.2) / 49.0).collect();
        let pg = concavity_profile(&gaussian(1.0), &grid).unwrap();
        assert!(pg.applicable && pg.is_concave, "worst {}", pg.worst_second_difference);

        let pu = concavity_profile(&uniform01(), &grid).unwrap();
        assert!(pu.applicable && pu.is_concave);
        for &(r, g) in &pu.points {
            assert!((g - r.ln()).abs() < 1e-9, "uniform profile at {r}: {g}");
        }
    }

    #[test]
    fn concavity_profile_gates_student_t() {
        let t = make_analytic(&AnalyticFamily::StudentT { dof: 1.0 }, 8192, 1e-6).unwrap();
        let grid: Vec<f64> = (0..50).map(|i| 0.6 + i as f64 * 0.09).collect();
        let p = concavity_profile(&t, &grid).unwrap();
        assert!(!p.applicable);
    }

    #[test]
    fn truncation_sensitivity_flags_heavy_tails() {
        let t = make_analytic(&AnalyticFamily::StudentT { dof: 1.0 }, 8192, 1e-6).unwrap();
        let heavy = truncation_sensitivity(&t, order(0.6));
        let g = truncation_sensitivity(&gaussian(1.0), order(0.6));
        assert!(heavy > 1e-4, "student_t sensitivity {heavy}");
        assert!(g < 1e-6, "gaussian sensitivity {g}");
    }
}
