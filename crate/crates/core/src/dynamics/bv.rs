use crate::error::{Error, Result};
use crate::orthopoly::{RecurrenceTable, ResidualSeries};
use crate::scalars::BigReal;

/// The asymmetric system in `x̃ₙ = √2/(s−2αₙ)`, `ỹₙ = 2βₙ − n − λ/2`.
#[derive(Clone, Debug)]
pub struct BvResiduals {
    pub xt: Vec<BigReal>,
    pub yt: Vec<BigReal>,
    /// `x̃ₙ₋₁x̃ₙ(ỹₙ² − λ²/4) − (ỹₙ + n + λ/2)`, `n = 1…N`.
    pub r1: ResidualSeries,
    /// `(ỹₙ + ỹₙ₊₁)x̃ₙ² − (s/√2)x̃ₙ + 1`, `n = 0…N−1`.
    pub r2: ResidualSeries,
}

pub fn bv_residuals(table: &RecurrenceTable) -> Result<BvResiduals> {
    let n_max = table.n_max();
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("need at least three recurrence rows, got {}", n_max + 1)));
    }
    let p = table.params.precision;
    let lambda = BigReal::from_rational(&table.params.lambda, p);
    let s = BigReal::from_rational(&table.params.s, p);
    let root2 = BigReal::from_i64(2, p).sqrt();
    let half_l = lambda.div_int(2)?;
    let xt = table.alpha.iter().map(|a| root2.checked_div(&(&s - &a.mul_int(2)))).collect::<Result<Vec<_>>>()?;
    let yt: Vec<BigReal> =
        table.beta.iter().enumerate().map(|(n, b)| &(&b.mul_int(2) - &BigReal::from_i64(n as i64, p)) - &half_l).collect();
    let quarter_l2 = &half_l * &half_l;
    let s_over_root2 = s.checked_div(&root2)?;
    let one = BigReal::from_i64(1, p);
    let mut r1 = ResidualSeries { name: "r1bv", start: 1, values: Vec::new() };
    for n in 1..=n_max {
        let lhs = &(&xt[n - 1] * &xt[n]) * &(&(&yt[n] * &yt[n]) - &quarter_l2);
        let rhs = &(&yt[n] + &BigReal::from_i64(n as i64, p)) + &half_l;
        r1.values.push(Some(&lhs - &rhs));
    }
    let mut r2 = ResidualSeries { name: "r2bv", start: 0, values: Vec::new() };
    for n in 0..n_max {
        let v = &(&(&(&yt[n] + &yt[n + 1]) * &(&xt[n] * &xt[n])) - &(&s_over_root2 * &xt[n])) + &one;
        r2.values.push(Some(v));
    }
    Ok(BvResiduals { xt, yt, r1, r2 })
}
