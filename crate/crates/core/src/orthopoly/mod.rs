//! Moments, recurrence coefficients and ladder quantities for the weight
//! `x^λ e^(−x²+sx)` on `(0, ∞)`, and residuals of the identities they obey.

mod pipeline;
mod quadrature;
mod residuals;

use num_traits::One;

use crate::error::{Error, Result};
use crate::scalars::{check_precision, BigReal, Rational};

pub use pipeline::{
    output_digits, precision_for, run_pipeline, run_stages, Attempt, PipelineConfig, PipelineReport, PipelineRow, PipelineTables,
    MAX_DOUBLINGS, RESIDUAL_SUITES,
};
pub use quadrature::{base_moments, quadrature_moments, QuadratureOutcome, MAX_LEVELS};
pub use residuals::{identity_residuals, ladder_tables, system_residuals, xy_sequence, IdentityResiduals, ResidualSeries, SystemMode};

#[derive(Clone, Debug, PartialEq)]
pub struct WeightParams {
    pub lambda: Rational,
    pub s: Rational,
    pub precision: usize,
}

impl WeightParams {
    pub fn new(lambda: Rational, s: Rational, precision: usize) -> Result<Self> {
        if lambda <= -Rational::one() {
            return Err(Error::InvalidArgument(format!("weight needs lambda > -1, got {lambda}")));
        }
        check_precision(precision)?;
        Ok(Self { lambda, s, precision })
    }

    pub fn with_precision(&self, precision: usize) -> Result<Self> {
        Self::new(self.lambda.clone(), self.s.clone(), precision)
    }
}

#[derive(Clone, Debug)]
pub struct MomentTable {
    pub params: WeightParams,
    /// `μ₀ … μ_K`.
    pub mu: Vec<BigReal>,
}

impl MomentTable {
    pub fn k(&self) -> usize {
        self.mu.len() - 1
    }
}

/// `μ_{k+1} = (s·μ_k + (λ+k)·μ_{k−1})/2`, from integrating `(x^(λ+k) e^(−x²+sx))'` over `(0, ∞)`.
pub fn extend_moments(mu0: &BigReal, mu1: &BigReal, params: &WeightParams, k: usize) -> Result<MomentTable> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need at least three moments, K = {k}")));
    }
    let p = params.precision;
    let s = BigReal::from_rational(&params.s, p);
    let mut mu = vec![mu0.with_precision(p), mu1.with_precision(p)];
    for j in 1..k {
        let lk = BigReal::from_rational(&(&params.lambda + Rational::from_integer(j.into())), p);
        let next = (&(&s * &mu[j]) + &(&lk * &mu[j - 1])).div_int(2)?;
        mu.push(next);
    }
    Ok(MomentTable { params: params.clone(), mu })
}

/// Monic three-term recurrence `xPₙ = Pₙ₊₁ + αₙPₙ + βₙPₙ₋₁`, `β₀ := 0`, `hₙ = ∫Pₙ² w`.
#[derive(Clone, Debug)]
pub struct RecurrenceTable {
    pub params: WeightParams,
    pub alpha: Vec<BigReal>,
    pub beta: Vec<BigReal>,
    pub h: Vec<BigReal>,
}

impl RecurrenceTable {
    /// Largest index `N`.
    pub fn n_max(&self) -> usize {
        self.alpha.len() - 1
    }
}

/// Bits lost per index, estimated by rerunning the recurrence at a lower precision.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LossReport {
    pub precision: usize,
    pub shadow_precision: usize,
    pub loss_bits: Vec<f64>,
    pub max_loss_bits: f64,
}

#[derive(Clone, Debug)]
pub struct LadderTable {
    /// `Rₙ = 2αₙ − s`.
    pub big_r: Vec<BigReal>,
    /// `rₙ = 2βₙ − n`, so `r₀ = 0`.
    pub r: Vec<BigReal>,
}

/// Chebyshev's algorithm on ordinary moments; needs `μ₀ … μ_{2N+1}`.
pub fn recurrence_from_moments(m: &MomentTable, n: usize) -> Result<(RecurrenceTable, LossReport)> {
    if m.mu.len() < 2 * n + 2 {
        return Err(Error::InvalidArgument(format!("{} moments given, {} needed for N = {n}", m.mu.len(), 2 * n + 2)));
    }
    let p = m.params.precision;
    let shadow_p = p - (p / 2).min(64);
    let main = chebyshev(&m.mu, n, p)?;
    let shadow = chebyshev(&m.mu, n, shadow_p)?;
    let mut loss_bits = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let rel = |a: &BigReal, b: &BigReal| -> f64 {
            let d = (a - b).abs();
            match (d.exponent(), a.exponent()) {
                (Some(ed), Some(ea)) if !d.is_zero() => (ed - ea) as f64,
                _ => -(shadow_p as f64),
            }
        };
        let mut worst = rel(&main.0[k], &shadow.0[k]);
        if k > 0 {
            worst = worst.max(rel(&main.1[k], &shadow.1[k]));
        }
        // The shadow keeps `shadow_p + worst` bits; the main run loses as many.
        let lost = (shadow_p as f64 + worst).max(0.0);
        loss_bits.push(lost);
        if lost >= p as f64 || !main.2[k].is_positive() {
            return Err(Error::PrecisionExhausted { n: k, loss_bits: lost, precision: p });
        }
    }
    let max_loss_bits = loss_bits.iter().cloned().fold(0.0, f64::max);
    let (alpha, beta, h) = main;
    let loss = LossReport { precision: p, shadow_precision: shadow_p, loss_bits, max_loss_bits };
    Ok((RecurrenceTable { params: m.params.clone(), alpha, beta, h }, loss))
}

type Coefficients = (Vec<BigReal>, Vec<BigReal>, Vec<BigReal>);

fn chebyshev(mu: &[BigReal], n: usize, p: usize) -> Result<Coefficients> {
    let mu: Vec<BigReal> = mu[..2 * n + 2].iter().map(|v| v.with_precision(p)).collect();
    let zero = BigReal::zero(p);
    let mut alpha = vec![mu[1].checked_div(&mu[0])?];
    let mut beta = vec![zero.clone()];
    let mut h = vec![mu[0].clone()];
    // σ_{k−2,·}, σ_{k−1,·}, indexed by l.
    let mut older = vec![zero.clone(); 2 * n + 2];
    let mut old = mu.clone();
    for k in 1..=n {
        let mut cur = vec![zero.clone(); 2 * n + 2];
        for l in k..=(2 * n + 1 - k) {
            cur[l] = &(&old[l + 1] - &(&alpha[k - 1] * &old[l])) - &(&beta[k - 1] * &older[l]);
        }
        if !cur[k].is_positive() {
            return Err(Error::PrecisionExhausted { n: k, loss_bits: p as f64, precision: p });
        }
        let a = &cur[k + 1].checked_div(&cur[k])? - &old[k].checked_div(&old[k - 1])?;
        let b = cur[k].checked_div(&old[k - 1])?;
        alpha.push(a);
        beta.push(b);
        h.push(cur[k].clone());
        older = std::mem::replace(&mut old, cur);
    }
    Ok((alpha, beta, h))
}

/// `Γ(m/2)` for a positive integer `m`, with `√π` supplied by the caller.
pub fn gamma_half_integer(m: u32, sqrt_pi: &BigReal) -> Result<BigReal> {
    if m == 0 {
        return Err(Error::InvalidArgument("gamma pole at 0".into()));
    }
    let p = sqrt_pi.precision();
    let mut acc = if m.is_multiple_of(2) { BigReal::from_i64(1, p) } else { sqrt_pi.clone() };
    // Γ(x+1) = xΓ(x), stepping up from Γ(1) or Γ(1/2).
    let mut twice_x = if m.is_multiple_of(2) { 2 } else { 1 };
    while twice_x < m {
        acc = acc.mul_int(twice_x as i64).div_int(2)?;
        twice_x += 2;
    }
    Ok(acc)
}
