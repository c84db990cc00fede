use serde::Serialize;

use super::{LadderTable, RecurrenceTable};
use crate::dynamics::{xy_to_qp, XYState};
use crate::error::{Error, Result};
use crate::scalars::{BigReal, Field};

/// Residuals indexed from `start`; `None` where a denominator vanished.
#[derive(Clone, Debug)]
pub struct ResidualSeries {
    pub name: &'static str,
    pub start: usize,
    pub values: Vec<Option<BigReal>>,
}

impl ResidualSeries {
    fn new(name: &'static str, start: usize) -> Self {
        Self { name, start, values: Vec::new() }
    }

    pub fn at(&self, n: usize) -> Option<&BigReal> {
        n.checked_sub(self.start).and_then(|i| self.values.get(i)).and_then(Option::as_ref)
    }

    /// Largest `|value|`; `None` if the series is empty or entirely singular.
    pub fn max_abs(&self) -> Option<BigReal> {
        self.values.iter().flatten().map(BigReal::abs).fold(None, |m, v| match m {
            Some(m) if m >= v => Some(m),
            _ => Some(v),
        })
    }

    /// Indices where the residual could not be evaluated.
    pub fn singular(&self) -> Vec<usize> {
        self.values.iter().enumerate().filter(|(_, v)| v.is_none()).map(|(i, _)| self.start + i).collect()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "UPPERCASE")]
pub enum SystemMode {
    Xyn,
    Dp,
}

pub fn ladder_tables(rt: &RecurrenceTable) -> LadderTable {
    let p = rt.params.precision;
    let s = BigReal::from_rational(&rt.params.s, p);
    let big_r = rt.alpha.iter().map(|a| &a.mul_int(2) - &s).collect();
    let r = rt.beta.iter().enumerate().map(|(n, b)| &b.mul_int(2) - &BigReal::from_i64(n as i64, p)).collect();
    LadderTable { big_r, r }
}

#[derive(Clone, Debug)]
pub struct IdentityResiduals {
    /// `e2(n) = rₙ + rₙ₋₁ − λ + αₙRₙ`, `n = 1…N`.
    pub e2: ResidualSeries,
    /// `e4(n) = rₙ² − λrₙ − βₙRₙ₋₁Rₙ`, `n = 1…N`.
    pub e4: ResidualSeries,
    /// `rₙ₊₁ + rₙ − λ + αₙRₙ`, `n = 0…N−1`: the same relation one index up.
    pub e2_adjacent: ResidualSeries,
}

pub fn identity_residuals(rt: &RecurrenceTable, lt: &LadderTable) -> IdentityResiduals {
    let lambda = BigReal::from_rational(&rt.params.lambda, rt.params.precision);
    let n_max = rt.n_max();
    let (a, b, big_r, r) = (&rt.alpha, &rt.beta, &lt.big_r, &lt.r);
    let mut e2 = ResidualSeries::new("e2", 1);
    let mut e4 = ResidualSeries::new("e4", 1);
    let mut e2_adjacent = ResidualSeries::new("e2_adjacent", 0);
    for n in 1..=n_max {
        e2.values.push(Some(&(&(&r[n] + &r[n - 1]) - &lambda) + &(&a[n] * &big_r[n])));
        e4.values.push(Some(&(&(&r[n] * &r[n]) - &(&lambda * &r[n])) - &(&(&b[n] * &big_r[n - 1]) * &big_r[n])));
    }
    for n in 0..n_max {
        e2_adjacent.values.push(Some(&(&(&r[n + 1] + &r[n]) - &lambda) + &(&a[n] * &big_r[n])));
    }
    IdentityResiduals { e2, e4, e2_adjacent }
}

/// `xₙ = 1/Rₙ₋₁`, `yₙ = −rₙ` for `n = 1…N`.
pub fn xy_sequence(rt: &RecurrenceTable, lt: &LadderTable) -> Result<Vec<XYState<BigReal>>> {
    let p = rt.params.precision;
    let lambda = BigReal::from_rational(&rt.params.lambda, p);
    let s = BigReal::from_rational(&rt.params.s, p);
    (1..=rt.n_max())
        .map(|n| {
            let x = lt.big_r[n - 1].checked_inv().map_err(|_| Error::SingularAt { what: "R vanishes", n: n - 1 })?;
            Ok(XYState::new(lambda.clone(), s.clone(), BigReal::from_i64(n as i64, p), x, -&lt.r[n]))
        })
        .collect()
}

/// Residuals of the `(x, y)` system or, after mapping each state to `(q, p)`, of the standard equation.
///
/// `states[i]` must carry `n = i + 1`.
pub fn system_residuals(states: &[XYState<BigReal>], mode: SystemMode) -> Vec<ResidualSeries> {
    let Some(first) = states.first() else {
        return Vec::new();
    };
    let two = first.x.int_like(2);
    let one = first.x.one_like();
    let idx = |n: usize| n - 1;
    let big_n = states.len();
    match mode {
        SystemMode::Xyn => {
            let mut g1 = ResidualSeries::new("g1", 1);
            for n in 1..big_n {
                let (st, next) = (&states[idx(n)], &states[idx(n + 1)]);
                let (lambda, x, y) = (&st.lambda, &st.x, &st.y);
                let lhs = x.times(&next.x).times(&two.times(&y.square()).plus(&two.times(lambda).times(y)));
                g1.values.push(Some(lhs.minus(&st.n.minus(y))));
            }
            let mut g2 = ResidualSeries::new("g2", 2);
            for n in 2..=big_n {
                let (st, prev) = (&states[idx(n)], &states[idx(n - 1)]);
                let (lambda, s, x, y) = (&st.lambda, &st.s, &st.x, &st.y);
                let x2 = x.square();
                let v = two.times(&x2).times(&y.plus(&prev.y)).plus(&two.times(lambda).times(&x2)).minus(&s.times(x)).minus(&one);
                g2.values.push(Some(v));
            }
            vec![g1, g2]
        }
        SystemMode::Dp => {
            let configs: Vec<_> = states.iter().map(|st| xy_to_qp(st).ok()).collect();
            let mut d1 = ResidualSeries::new("d1", 1);
            for n in 1..big_n {
                let v = match (&configs[idx(n)], &configs[idx(n + 1)]) {
                    (Some(c), Some(next)) => c.a2.checked_div(&c.p).ok().map(|a2_over_p| {
                        next.q.plus(&c.q).minus(&c.p.minus(&c.t).minus(&a2_over_p))
                    }),
                    _ => None,
                };
                d1.values.push(v);
            }
            let mut d2 = ResidualSeries::new("d2", 2);
            for n in 2..=big_n {
                let v = match (&configs[idx(n)], &configs[idx(n - 1)]) {
                    (Some(c), Some(prev)) => c.a1.checked_div(&c.q).ok().map(|a1_over_q| {
                        c.p.plus(&prev.p).minus(&c.q.plus(&c.t).plus(&a1_over_q))
                    }),
                    _ => None,
                };
                d2.values.push(v);
            }
            vec![d1, d2]
        }
    }
}
