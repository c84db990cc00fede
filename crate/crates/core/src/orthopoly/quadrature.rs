//! Double-exponential quadrature for `∫₀^∞ x^(k+λ) e^(−x²+sx) dx`.
//!
//! `[0, c]` uses tanh-sinh, `[c, ∞)` uses exp-sinh, `c = max(1, s)`. The
//! tanh-sinh abscissae are formed from `e^(2u)` directly so points close to
//! either endpoint keep full relative accuracy, which is what makes the
//! `x^λ` singularity for `λ ∈ (−1, 0)` harmless.

use super::WeightParams;
use crate::error::{Error, Result};
use crate::scalars::{BigReal, RealContext, GUARD_BITS};

/// Maximum number of step halvings.
pub const MAX_LEVELS: usize = 12;
/// Levels always taken before the error estimate is trusted.
const MIN_LEVELS: usize = 3;
/// Drop in the level-to-level change (bits) that marks the asymptotic regime.
const IMPROVEMENT_BITS: f64 = 16.0;

/// Absolute error target `2^(20−P)` plus how many levels it took.
#[derive(Clone, Debug)]
pub struct QuadratureOutcome {
    pub values: Vec<BigReal>,
    pub levels: usize,
    pub nodes: usize,
    /// Last difference between successive levels, as `log₂`.
    pub last_delta_log2: f64,
}

struct Node {
    x_ln: BigReal,
    x: BigReal,
    weight: BigReal,
}

/// `μ_0 … μ_kmax` by direct quadrature, returned at `params.precision`.
pub fn quadrature_moments(params: &WeightParams, kmax: usize) -> Result<QuadratureOutcome> {
    let p = params.precision;
    let work = p + GUARD_BITS;
    let mut ctx = RealContext::new(work)?;
    let lambda = ctx.rational(&params.lambda);
    let s = ctx.rational(&params.s);
    let one = ctx.int(1);
    let c = if s > one { s.clone() } else { one.clone() };
    let ln_c = ctx.ln(&c)?;
    let pi = ctx.pi();
    let half_pi = pi.div_int(2)?;

    // Truncation: beyond these the neglected mass is below 2^(−work−32).
    let budget = (work as f64 + 32.0) * std::f64::consts::LN_2;
    let lam_f = lambda.to_f64();
    let decay = (lam_f + 1.0).min(1.0);
    let t_left_a = ((budget / decay + 2.0) / std::f64::consts::PI).asinh();
    let s_f = s.to_f64();
    let x_max = s_f.abs() + (2.0 * budget + 2.0 * (kmax as f64 + lam_f.abs() + 2.0) * 10.0).sqrt() + 4.0;
    let t_right_b = (2.0 * x_max.ln() / std::f64::consts::PI).asinh() + 0.5;
    let t_left_b = (2.0 * (budget + 8.0) / std::f64::consts::PI).asinh();

    let integrand = |ctx: &mut RealContext, node: &Node| -> Vec<BigReal> {
        // x^λ e^(−x²+sx) · dx/dt, then successive powers of x.
        let expo = &(&(&lambda * &node.x_ln) - &(&node.x * &node.x)) + &(&s * &node.x);
        let base = &ctx.exp(&expo) * &node.weight;
        let mut out = Vec::with_capacity(kmax + 1);
        let mut cur = base;
        for k in 0..=kmax {
            if k > 0 {
                cur = &cur * &node.x;
            }
            out.push(cur.clone());
        }
        out
    };

    // exp(t) gives both sinh t and cosh t.
    let sinh_cosh = |ctx: &mut RealContext, t: &BigReal| -> Result<(BigReal, BigReal)> {
        let et = ctx.exp(t);
        let inv = et.checked_inv()?;
        Ok(((&et - &inv).div_int(2)?, (&et + &inv).div_int(2)?))
    };

    // tanh-sinh nodes at ±t on [0, c]: with E = e^(2u), x = cE/(1+E) and c/(1+E),
    // both with weight cπ·cosh t·E/(1+E)².
    let ts_nodes = |ctx: &mut RealContext, t: &BigReal| -> Result<Vec<Node>> {
        let (sh, ch) = sinh_cosh(ctx, t)?;
        let two_u = &pi * &sh;
        let e = ctx.exp(&two_u);
        let one_plus = &one + &e;
        let l = ctx.ln(&one_plus)?;
        let weight = (&(&(&c * &pi) * &ch) * &e).checked_div(&(&one_plus * &one_plus))?;
        let near_zero = Node { x_ln: &ln_c - &l, x: c.checked_div(&one_plus)?, weight: weight.clone() };
        if t.is_zero() {
            return Ok(vec![near_zero]);
        }
        let near_c = Node { x_ln: &(&ln_c + &two_u) - &l, x: (&c * &e).checked_div(&one_plus)?, weight };
        Ok(vec![near_zero, near_c])
    };

    // exp-sinh node on [c, ∞): x = c + e^u.
    let es_node = |ctx: &mut RealContext, t: &BigReal| -> Result<Node> {
        let (sh, ch) = sinh_cosh(ctx, t)?;
        let e = ctx.exp(&(&half_pi * &sh));
        let x = &c + &e;
        let weight = &(&half_pi * &ch) * &e;
        let x_ln = ctx.ln(&x)?;
        Ok(Node { x_ln, x, weight })
    };

    let target = BigReal::pow2(20 - work as i64, work);
    let mut sums_a = vec![BigReal::zero(work); kmax + 1];
    let mut sums_b = vec![BigReal::zero(work); kmax + 1];
    let mut prev: Option<Vec<BigReal>> = None;
    let mut nodes = 0usize;
    let target_log2 = 20.0 - work as f64;
    let mut last_delta = f64::INFINITY;
    for level in 0..=MAX_LEVELS {
        // Step h = 2^(−level); new abscissae are the odd multiples (all at level 0).
        let h = BigReal::pow2(-(level as i64), work);
        let step = if level == 0 { 1 } else { 2 };
        let scale = 1i64 << level;
        let add = |sums: &mut Vec<BigReal>, vals: Vec<BigReal>| {
            for (acc, v) in sums.iter_mut().zip(vals) {
                *acc = &*acc + &v;
            }
        };
        let start = if level == 0 { 0 } else { 1 };
        let mut j = start;
        while (j as f64) / (scale as f64) <= t_left_a {
            let t = BigReal::from_i64(j, work).checked_div(&BigReal::from_i64(scale, work))?;
            for node in ts_nodes(&mut ctx, &t)? {
                add(&mut sums_a, integrand(&mut ctx, &node));
                nodes += 1;
            }
            j += step;
        }
        let mut j = if level == 0 { 0 } else { 1 };
        while (j as f64) / (scale as f64) <= t_right_b {
            let t = BigReal::from_i64(j, work).checked_div(&BigReal::from_i64(scale, work))?;
            let node = es_node(&mut ctx, &t)?;
            add(&mut sums_b, integrand(&mut ctx, &node));
            nodes += 1;
            j += step;
        }
        let mut j = -1;
        while (-(j as f64)) / (scale as f64) <= t_left_b {
            let t = BigReal::from_i64(j, work).checked_div(&BigReal::from_i64(scale, work))?;
            let node = es_node(&mut ctx, &t)?;
            add(&mut sums_b, integrand(&mut ctx, &node));
            nodes += 1;
            j -= step;
        }
        let values: Vec<BigReal> = sums_a.iter().zip(&sums_b).map(|(a, b)| &(a + b) * &h).collect();
        if let Some(prev) = &prev {
            let delta = values
                .iter()
                .zip(prev)
                .map(|(a, b)| (a - b).abs())
                .fold(BigReal::zero(work), |m, d| if d > m { d } else { m });
            let prev_delta = last_delta;
            last_delta = if delta.is_zero() { f64::NEG_INFINITY } else { delta_log2(&delta) };
            // Double-exponential rules roughly square the error per halving, so once
            // the change has dropped by 2^16 since the last level, the error of this
            // level is about the square of the change.
            let asymptotic = prev_delta.is_finite() && last_delta <= prev_delta - IMPROVEMENT_BITS;
            let squared_ok = asymptotic && 2.0 * last_delta <= target_log2 - IMPROVEMENT_BITS;
            if level >= MIN_LEVELS && (delta <= target || squared_ok) {
                let values = values.iter().map(|v| v.with_precision(p)).collect();
                return Ok(QuadratureOutcome { values, levels: level, nodes, last_delta_log2: last_delta });
            }
        }
        prev = Some(values);
    }
    Err(Error::NonConverged(format!(
        "quadrature after {MAX_LEVELS} levels ({nodes} nodes): last level change 2^{last_delta:.1}, target 2^{}",
        20 - work as i64
    )))
}

fn delta_log2(x: &BigReal) -> f64 {
    x.exponent().map_or(f64::NEG_INFINITY, |e| e as f64)
}

/// `(μ₀, μ₁)` by quadrature.
pub fn base_moments(params: &WeightParams) -> Result<(BigReal, BigReal)> {
    let mut v = quadrature_moments(params, 1)?.values.into_iter();
    let mu0 = v.next().expect("two moments");
    let mu1 = v.next().expect("two moments");
    Ok((mu0, mu1))
}
