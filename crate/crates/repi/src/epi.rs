//! EPI constants, the `A(λ)` functional and its simplex minimization, the
//! linearization lemma in both directions, and end-to-end inequality checks.
//!
//! Conventions: `H(λ)` and all constants are handled in natural log; the
//! base-2 forms of the published exponents are converted internally (the
//! ratio `A/H` is base-independent). Inequality checks pass when
//! `gap = lhs - rhs >= -tol` with `tol = max(1e-4, 1e-3 |rhs|)` unless the
//! caller overrides it.

use crate::densities::{self, convolve, scale_rv, GridDensity};
use crate::error::{Error, Result};
use crate::measures::{entropy_power, renyi_entropy};
use crate::order::RenyiOrder;
use serde::Serialize;

/// Largest number of densities accepted by the convolution pipeline; repeated
/// convolution keeps widening supports beyond this.
pub const MAX_PIPELINE_DENSITIES: usize = 8;

/// Conjugate exponent `r' = r/(r-1)`; `sign(r') = sign(r-1)`.
pub fn conjugate(r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidOrder(r));
    }
    if r == 1.0 {
        return Err(Error::UndefinedConjugate);
    }
    Ok(r / (r - 1.0))
}

/// A point on the open probability simplex with at least two coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaWeights(Vec<f64>);

impl LambdaWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::Simplex("need at least two weights".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0 && *w < 1.0)) {
            return Err(Error::Simplex(format!(
                "weights must lie strictly in (0,1): {weights:?}"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Simplex(format!("weights sum to {sum}")));
        }
        Ok(Self(weights))
    }

    pub fn uniform(m: usize) -> Self {
        Self(vec![1.0 / m as f64; m])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Shannon entropy `H(λ)` in nats.
    pub fn entropy(&self) -> f64 {
        -self.0.iter().map(|w| w * w.ln()).sum::<f64>()
    }
}

/// Weights `λ_i = r'/r'_i` from orders satisfying `Σ 1/r'_i = 1/r'` with all
/// conjugates on the same side of 1.
pub fn lambda_from_orders(r: f64, orders: &[f64]) -> Result<LambdaWeights> {
    let rp = conjugate(r)?;
    if orders.len() < 2 {
        return Err(Error::Hypothesis("need at least two orders".into()));
    }
    let mut inv_sum = 0.0;
    let mut lambda = Vec::with_capacity(orders.len());
    for &ri in orders {
        let rpi = conjugate(ri)?;
        if rpi.signum() != rp.signum() {
            return Err(Error::Hypothesis(format!(
                "conjugates of mixed sign: r = {r}, r_i = {ri}"
            )));
        }
        inv_sum += 1.0 / rpi;
        lambda.push(rp / rpi);
    }
    if (inv_sum - 1.0 / rp).abs() > 1e-9 {
        return Err(Error::Hypothesis(format!(
            "Σ 1/r'_i = {inv_sum} does not match 1/r' = {}",
            1.0 / rp
        )));
    }
    // The constraint is enforced at 1e-9; snap the weights onto the simplex.
    let sum: f64 = lambda.iter().sum();
    LambdaWeights::new(lambda.into_iter().map(|l| l / sum).collect())
}

/// Inverse of [`lambda_from_orders`]: `r'_i = r'/λ_i`, `r_i = r'_i/(r'_i-1)`.
pub fn orders_from_lambda(r: f64, lam: &LambdaWeights) -> Result<Vec<f64>> {
    let rp = conjugate(r)?;
    Ok(lam
        .weights()
        .iter()
        .map(|&l| {
            let rpi = rp / l;
            rpi / (rpi - 1.0)
        })
        .collect())
}

/// The functional `A(λ) = |r'| (log r / r - Σ log r_i / r_i)` with
/// `r_i` determined by `λ_i = r'/r'_i`.
///
/// Evaluates both printed forms (the order form above and the
/// `(1 - λ_i/r')log(1 - λ_i/r')` expansion) and insists they agree to 1e-10.
/// Strictly convex and negative on the simplex interior, vanishing at the
/// vertices.
pub fn a_of_lambda(r: f64, lam: &LambdaWeights) -> Result<f64> {
    let rp = conjugate(r)?;
    let orders = orders_from_lambda(r, lam)?;
    let form_orders =
        rp.abs() * (r.ln() / r - orders.iter().map(|&ri| ri.ln() / ri).sum::<f64>());
    let base = (1.0 - 1.0 / rp) * (1.0 - 1.0 / rp).ln();
    let form_expansion = rp.abs()
        * (lam
            .weights()
            .iter()
            .map(|&l| (1.0 - l / rp) * (1.0 - l / rp).ln())
            .sum::<f64>()
            - base);
    assert!(
        (form_orders - form_expansion).abs() <= 1e-10 * form_orders.abs().max(1.0),
        "A(λ) forms disagree: {form_orders} vs {form_expansion}"
    );
    Ok(form_orders)
}

/// `c = r^{r'/r} (1 - 1/(m r'))^{m r' - 1}` for `r > 1`; equals
/// `exp(min_λ A(λ))` over the m-simplex.
pub fn c_ram_sason(r: f64, m: usize) -> Result<f64> {
    let rp = require_above_one(r)?;
    require_m(m)?;
    let mrp = m as f64 * rp;
    Ok(r.powf(rp / r) * (1.0 - 1.0 / mrp).powf(mrp - 1.0))
}

/// The m-free constant `c = r^{r'/r}/e` for `r > 1` (the infimum over m of
/// [`c_ram_sason`]).
pub fn c_bobkov_chistyakov(r: f64) -> Result<f64> {
    let rp = require_above_one(r)?;
    Ok(r.powf(rp / r) / std::f64::consts::E)
}

/// Power exponent `α = [1 + r' log₂r / r + (2r'-1) log₂(1 - 1/(2r'))]⁻¹`
/// for `r > 1`; always strictly below [`alpha_bm`].
pub fn alpha_li(r: f64) -> Result<f64> {
    let rp = require_above_one(r)?;
    let bracket_nats = rp * r.ln() / r + (2.0 * rp - 1.0) * (1.0 - 1.0 / (2.0 * rp)).ln();
    Ok(1.0 / (1.0 + bracket_nats / std::f64::consts::LN_2))
}

/// The earlier comparison exponent `α = (r+1)/2` for `r > 1`.
pub fn alpha_bm(r: f64) -> Result<f64> {
    require_above_one(r)?;
    Ok((r + 1.0) / 2.0)
}

/// `c = [m r^{r'/r} (1 - 1/(m r'))^{m r' - 1}]^α / m` for `r > 1` and
/// `0 < α < 1`: the combined constant-and-exponent form.
pub fn c_new_repi(r: f64, m: usize, alpha: f64) -> Result<f64> {
    require_above_one(r)?;
    require_m(m)?;
    require_unit_alpha(alpha)?;
    Ok((m as f64 * c_ram_sason(r, m)?).powf(alpha) / m as f64)
}

/// Constants for the log-concave branch `0 < r < 1`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LogConcaveConstants {
    /// Constant for the `α = 1` inequality.
    pub c: f64,
    /// Exponent for the `c = 1` inequality (two summands only).
    pub alpha: f64,
    /// Combined constant for the requested `0 < α < 1`, when given.
    pub c_alpha: Option<f64>,
}

/// Closed forms with `|r'| = -r'`: `c = r^{-r'/r} (1 - 1/(m r'))^{1 - m r'}`,
/// `α = [1 + |r'| log₂r / r + (2|r'|+1) log₂(1 + 1/(2|r'|))]⁻¹`, and
/// `c_α = [m c]^α / m`.
pub fn logconcave_constants(r: f64, m: usize, alpha: Option<f64>) -> Result<LogConcaveConstants> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!(
            "log-concave constants need 0 < r < 1, got {r}"
        )));
    }
    require_m(m)?;
    let rp = conjugate(r)?; // negative
    let ap = rp.abs();
    let mrp = m as f64 * rp;
    let c = r.powf(-rp / r) * (1.0 - 1.0 / mrp).powf(1.0 - mrp);
    let bracket_nats = ap * r.ln() / r + (2.0 * ap + 1.0) * (1.0 + 1.0 / (2.0 * ap)).ln();
    let alpha_lc = 1.0 / (1.0 + bracket_nats / std::f64::consts::LN_2);
    let c_alpha = match alpha {
        Some(a) => {
            require_unit_alpha(a)?;
            Some((m as f64 * c).powf(a) / m as f64)
        }
        None => None,
    };
    Ok(LogConcaveConstants { c, alpha: alpha_lc, c_alpha })
}

fn require_above_one(r: f64) -> Result<f64> {
    if r > 1.0 && r.is_finite() {
        conjugate(r)
    } else {
        Err(Error::Domain(format!("constant requires r > 1, got {r}")))
    }
}

fn require_m(m: usize) -> Result<()> {
    if m >= 2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("need at least two summands, got {m}")))
    }
}

fn require_unit_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("need 0 < alpha < 1, got {alpha}")))
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Which statement a report instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityKind {
    Repic,
    Repialpha,
    Repig,
    Dct,
    Varentropy,
    Concavity,
    Preservation,
}

/// Provenance of the constants entering a check.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsUsed {
    pub c: Option<f64>,
    pub alpha: Option<f64>,
    pub r: f64,
    pub m: usize,
    pub lambda: Option<Vec<f64>>,
    /// Identifier of the statement the constants come from, e.g. "ram_sason".
    pub source: String,
}

/// Structured verdict of one inequality check: `pass ⇔ gap >= -tol`.
#[derive(Debug, Clone, Serialize)]
pub struct EpiReport {
    pub kind: InequalityKind,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub tol: f64,
    pub pass: bool,
    pub constants: ConstantsUsed,
}

impl EpiReport {
    pub fn new(kind: InequalityKind, lhs: f64, rhs: f64, tol: f64, constants: ConstantsUsed) -> Self {
        let gap = lhs - rhs;
        Self { kind, lhs, rhs, gap, tol, pass: gap >= -tol, constants }
    }
}

/// Default inequality tolerance: `max(1e-4, 1e-3 |rhs|)`, sized from the
/// quadrature and convolution noise on the Gaussian equality case.
pub fn default_tolerance(rhs: f64) -> f64 {
    (1e-3 * rhs.abs()).max(1e-4)
}

// ---------------------------------------------------------------------------
// Density-pipeline checks
// ---------------------------------------------------------------------------

fn weighted_sum_density(densities: &[GridDensity], lam: &LambdaWeights) -> Result<GridDensity> {
    let mut scaled = Vec::with_capacity(densities.len());
    for (f, &l) in densities.iter().zip(lam.weights()) {
        scaled.push(scale_rv(f, l.sqrt())?);
    }
    let mut acc = scaled[0].clone();
    for f in &scaled[1..] {
        acc = convolve(&acc, f)?;
    }
    Ok(acc)
}

/// Left side of the linearized inequality:
/// `h_r(Σ √λ_i X_i) - Σ λ_i h_{s_i}(X_i)`, with `s_i = r` by default or the
/// per-density orders when given (which must then satisfy the conjugate
/// constraint producing `λ`).
pub fn linearized_gap(
    densities: &[GridDensity],
    lam: &LambdaWeights,
    r: RenyiOrder,
    per_density_orders: Option<&[f64]>,
) -> Result<f64> {
    if densities.len() != lam.len() {
        return Err(Error::Hypothesis(format!(
            "{} densities vs {} weights",
            densities.len(),
            lam.len()
        )));
    }
    if densities.len() > MAX_PIPELINE_DENSITIES {
        return Err(Error::Hypothesis(format!(
            "convolution pipeline capped at {MAX_PIPELINE_DENSITIES} densities"
        )));
    }
    if let Some(orders) = per_density_orders {
        if orders.len() != densities.len() {
            return Err(Error::Hypothesis("orders do not match densities".into()));
        }
        let derived = lambda_from_orders(r.value(), orders)?;
        for (a, b) in derived.weights().iter().zip(lam.weights()) {
            if (a - b).abs() > 1e-9 {
                return Err(Error::Hypothesis(format!(
                    "weights {:?} do not match the orders' weights {:?}",
                    lam.weights(),
                    derived.weights()
                )));
            }
        }
    }
    let sum = weighted_sum_density(densities, lam)?;
    let h_sum = renyi_entropy(&sum, r)?;
    let mut avg = 0.0;
    for (i, (f, &l)) in densities.iter().zip(lam.weights()).enumerate() {
        let s = match per_density_orders {
            Some(orders) => RenyiOrder::new(orders[i])?,
            None => r,
        };
        avg += l * renyi_entropy(f, s)?;
    }
    Ok(h_sum - avg)
}

/// Checks the sharp linearized inequality with per-density orders against its
/// Gaussian right side `(1/2) r' (log r / r - Σ log r_i / r_i)`.
///
/// Equality holds exactly for i.i.d. Gaussian inputs; `|gap| < 2e-4` is
/// reported as equality within tolerance.
pub fn check_dct(densities: &[GridDensity], r: f64, orders: &[f64]) -> Result<EpiReport> {
    let lam = lambda_from_orders(r, orders)?;
    let order = RenyiOrder::new(r)?;
    let lhs = linearized_gap(densities, &lam, order, Some(orders))?;
    let rp = conjugate(r)?;
    let rhs = 0.5 * rp * (r.ln() / r - orders.iter().map(|&ri| ri.ln() / ri).sum::<f64>());
    let constants = ConstantsUsed {
        c: None,
        alpha: None,
        r,
        m: densities.len(),
        lambda: Some(lam.weights().to_vec()),
        source: "dct".into(),
    };
    Ok(EpiReport::new(InequalityKind::Dct, lhs, rhs, default_tolerance(rhs), constants))
}

fn power_check(
    kind: InequalityKind,
    densities: &[GridDensity],
    r: f64,
    c: f64,
    alpha: f64,
    source: &str,
) -> Result<EpiReport> {
    if !(c > 0.0) || !(alpha > 0.0) {
        return Err(Error::Domain(format!(
            "need c > 0 and alpha > 0, got c={c}, alpha={alpha}"
        )));
    }
    if densities.len() < 2 {
        return Err(Error::Hypothesis("need at least two densities".into()));
    }
    if densities.len() > MAX_PIPELINE_DENSITIES {
        return Err(Error::Hypothesis(format!(
            "convolution pipeline capped at {MAX_PIPELINE_DENSITIES} densities"
        )));
    }
    let order = RenyiOrder::new(r)?;
    if order.is_one() {
        return Err(Error::UndefinedConjugate);
    }
    let mut sum = densities[0].clone();
    for f in &densities[1..] {
        sum = convolve(&sum, f)?;
    }
    let lhs = entropy_power(&sum, order)?.powf(alpha);
    let mut rhs = 0.0;
    for f in densities {
        rhs += entropy_power(f, order)?.powf(alpha);
    }
    rhs *= c;
    let constants = ConstantsUsed {
        c: Some(c),
        alpha: Some(alpha),
        r,
        m: densities.len(),
        lambda: None,
        source: source.into(),
    };
    Ok(EpiReport::new(kind, lhs, rhs, default_tolerance(rhs), constants))
}

/// The general power inequality `N_r^α(Σ X_i) >= c Σ N_r^α(X_i)` with
/// caller-supplied constants.
pub fn check_repig(densities: &[GridDensity], r: f64, c: f64, alpha: f64) -> Result<EpiReport> {
    power_check(InequalityKind::Repig, densities, r, c, alpha, "general_repi")
}

fn require_log_concave(densities: &[GridDensity]) -> Result<()> {
    for (i, f) in densities.iter().enumerate() {
        if !densities::is_log_concave(f, 1e-6).is_log_concave {
            return Err(Error::Hypothesis(format!(
                "the r < 1 branch requires log-concave densities; input {i} is not"
            )));
        }
    }
    Ok(())
}

/// The `α = 1` inequality with the sharp m-dependent constant for the branch
/// of `r` (log-concavity is enforced on the `r < 1` branch).
pub fn check_repic(densities: &[GridDensity], r: f64, c_override: Option<f64>) -> Result<EpiReport> {
    let m = densities.len();
    let (c, source) = if r > 1.0 {
        (c_override.map_or_else(|| c_ram_sason(r, m), Ok)?, "ram_sason")
    } else {
        require_log_concave(densities)?;
        (
            c_override.map_or_else(|| logconcave_constants(r, m, None).map(|k| k.c), Ok)?,
            "log_concave_c",
        )
    };
    power_check(InequalityKind::Repic, densities, r, c, 1.0, source)
}

/// The `c = 1` inequality with the branch exponent. The log-concave exponent
/// is stated for two summands only, so `m > 2` is rejected on that branch.
pub fn check_repialpha(
    densities: &[GridDensity],
    r: f64,
    alpha_override: Option<f64>,
) -> Result<EpiReport> {
    let (alpha, source) = if r > 1.0 {
        (alpha_override.map_or_else(|| alpha_li(r), Ok)?, "li")
    } else {
        require_log_concave(densities)?;
        if densities.len() > 2 {
            return Err(Error::Hypothesis(
                "the log-concave exponent is only stated for two summands".into(),
            ));
        }
        (
            alpha_override
                .map_or_else(|| logconcave_constants(r, 2, None).map(|k| k.alpha), Ok)?,
            "log_concave_alpha",
        )
    };
    power_check(InequalityKind::Repialpha, densities, r, 1.0, alpha, source)
}

/// The combined inequality with `0 < α < 1` and the branch constant.
pub fn check_repig_auto(densities: &[GridDensity], r: f64, alpha: f64) -> Result<EpiReport> {
    let m = densities.len();
    let (c, source) = if r > 1.0 {
        (c_new_repi(r, m, alpha)?, "general_repi")
    } else {
        require_log_concave(densities)?;
        (
            logconcave_constants(r, m, Some(alpha))?.c_alpha.expect("alpha supplied"),
            "log_concave_general",
        )
    };
    power_check(InequalityKind::Repig, densities, r, c, alpha, source)
}

// ---------------------------------------------------------------------------
// Simplex minimization oracle
// ---------------------------------------------------------------------------

/// Objective for [`lambda_minimize`].
#[derive(Debug, Clone, Copy)]
pub enum MinimizeObjective {
    /// `A(λ)` itself.
    A,
    /// `α A(λ) - (1 - α) H(λ)` for a fixed `0 < α < 1`.
    AMinusEntropy { alpha: f64 },
}

/// Exhaustive simplex grid search (step `<= 1e-2`, `m ∈ {2,3}`), with the
/// uniform point included as an explicit candidate.
///
/// Asserts that the minimizer is within one step of the uniform weights and
/// that the minimum matches the closed-form constant of the matching branch
/// to a relative 1e-6, then returns both.
pub fn lambda_minimize(
    r: f64,
    m: usize,
    objective: MinimizeObjective,
    step: f64,
) -> Result<(LambdaWeights, f64)> {
    if !(step > 0.0 && step <= 1e-2) {
        return Err(Error::InvalidParameter(format!("step = {step}")));
    }
    if m != 2 && m != 3 {
        return Err(Error::InvalidParameter(format!(
            "grid search supports m ∈ {{2,3}}, got {m}"
        )));
    }
    let ln_c_branch = if r > 1.0 {
        c_ram_sason(r, m)?.ln()
    } else {
        logconcave_constants(r, m, None)?.c.ln()
    };
    let expected = match objective {
        MinimizeObjective::A => ln_c_branch,
        MinimizeObjective::AMinusEntropy { alpha } => {
            require_unit_alpha(alpha)?;
            alpha * ln_c_branch - (1.0 - alpha) * (m as f64).ln()
        }
    };
    let eval = |lam: &LambdaWeights| -> Result<f64> {
        let a = a_of_lambda(r, lam)?;
        Ok(match objective {
            MinimizeObjective::A => a,
            MinimizeObjective::AMinusEntropy { alpha } => {
                alpha * a - (1.0 - alpha) * lam.entropy()
            }
        })
    };

    let k_max = (1.0 / step).round() as usize;
    let mut best = LambdaWeights::uniform(m);
    let mut best_val = eval(&best)?;
    match m {
        2 => {
            for k in 1..k_max {
                let l1 = k as f64 * step;
                let lam = LambdaWeights::new(vec![l1, 1.0 - l1])?;
                let val = eval(&lam)?;
                if val < best_val {
                    best = lam;
                    best_val = val;
                }
            }
        }
        3 => {
            for k1 in 1..k_max {
                for k2 in 1..k_max - k1 {
                    let l1 = k1 as f64 * step;
                    let l2 = k2 as f64 * step;
                    let lam = LambdaWeights::new(vec![l1, l2, 1.0 - l1 - l2])?;
                    let val = eval(&lam)?;
                    if val < best_val {
                        best = lam;
                        best_val = val;
                    }
                }
            }
        }
        _ => unreachable!(),
    }

    let uniform = 1.0 / m as f64;
    for &w in best.weights() {
        assert!(
            (w - uniform).abs() <= step + 1e-12,
            "grid minimizer {best:?} is not within one step of uniform"
        );
    }
    assert!(
        (best_val - expected).abs() <= 1e-6 * expected.abs().max(1e-12),
        "grid minimum {best_val} does not match the closed form {expected}"
    );
    Ok((best, best_val))
}
