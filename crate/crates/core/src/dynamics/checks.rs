use rayon::prelude::*;
use serde::Serialize;

use super::{psi_forward, qp_to_xy, xy_to_qp, XYState};
use crate::error::{Error, Result};
use crate::sampling::{random_quad, random_rational, trial_rng, MAX_RESAMPLES};
use crate::scalars::{Field, QuadExt};
use crate::weyl::{phi_step, PointConfig};

/// Both sides of `ψ = (qp→xy) ∘ φ ∘ (xy→qp)` at one state.
#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Report {
    pub state: XYState<QuadExt>,
    pub psi: XYState<QuadExt>,
    pub via_phi: XYState<QuadExt>,
    pub equal: bool,
    pub round_trip: bool,
    pub xyn_relations: bool,
}

impl Theorem1Report {
    pub fn passed(&self) -> bool {
        self.equal && self.round_trip && self.xyn_relations
    }
}

pub fn theorem1_check(st: &XYState<QuadExt>) -> Result<Theorem1Report> {
    let psi = psi_forward(st)?;
    let c = xy_to_qp(st)?;
    let via_phi = qp_to_xy(&phi_step(&c)?, &st.lambda)?;
    let round_trip = qp_to_xy(&c, &st.lambda)? == *st;
    let xyn_relations = xyn_relations_hold(st, &psi);
    Ok(Theorem1Report { state: st.clone(), equal: psi == via_phi, psi, via_phi, round_trip, xyn_relations })
}

/// `x·x̄·(2y²+2λy) = n−y` and `2x̄²(ȳ+y) + 2λx̄² − sx̄ − 1 = 0`.
pub fn xyn_relations_hold<F: Field>(st: &XYState<F>, next: &XYState<F>) -> bool {
    let XYState { lambda, s, n, x, y } = st;
    let two = x.int_like(2);
    let first = x.times(&next.x).times(&two.times(&y.square()).plus(&two.times(lambda).times(y)));
    let x2 = next.x.square();
    let second = two
        .times(&x2)
        .times(&next.y.plus(y))
        .plus(&two.times(lambda).times(&x2))
        .minus(&s.times(&next.x))
        .minus(&x.one_like());
    first.same_value(&n.minus(y)) && second.same_value(&x.zero_like())
}

/// The relabelled system `f = −q, g = p, b₀ = a₂, b₁ = a₀, b₂ = a₁` across one step.
#[derive(Clone, Debug, Serialize)]
pub struct Sk7Report {
    pub config: PointConfig<QuadExt>,
    /// `f + f̄ = t − g + b₀/g`
    pub first: bool,
    /// `g + ḡ = t − f̄ − (b₂−1)/f̄`
    pub second: bool,
    pub root_sum: bool,
}

impl Sk7Report {
    pub fn passed(&self) -> bool {
        self.first && self.second && self.root_sum
    }
}

pub fn sk7_check(c: &PointConfig<QuadExt>) -> Result<Sk7Report> {
    let next = phi_step(c)?;
    let one = QuadExt::one();
    let (f, g) = (-&c.q, c.p.clone());
    let (f_bar, g_bar) = (-&next.q, next.p.clone());
    let (b0, b1, b2) = (c.a2.clone(), c.a0.clone(), c.a1.clone());
    let t = &c.t;
    let first = &f + &f_bar == &(t - &g) + &b0.checked_div(&g)?;
    let second = &g + &g_bar == &(t - &f_bar) - &(&b2 - &one).checked_div(&f_bar)?;
    let root_sum = &(&b0 + &b1) + &b2 == c.root_sum();
    Ok(Sk7Report { config: c.clone(), first, second, root_sum })
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchReport<W> {
    pub check: String,
    pub trials: usize,
    pub failures: usize,
    /// Samples redrawn because they hit a singular locus.
    pub singular_resamples: usize,
    pub first_failure_witness: Option<W>,
}

impl<W> BatchReport<W> {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn is_singular(e: &Error) -> bool {
    matches!(e, Error::Singular(_) | Error::ExceptionalLocus { .. } | Error::DivisionByZero)
}

enum Outcome<W> {
    Pass(usize),
    Fail(usize, W),
}

fn run_batch<W: Send, T>(
    check: &str,
    trials: usize,
    seed: u64,
    suite: u32,
    sample: impl Fn(&mut rand_chacha::ChaCha8Rng) -> T + Sync,
    run: impl Fn(&T) -> Result<(bool, W)> + Sync,
    describe_error: impl Fn(&T, Error) -> W + Sync,
) -> Result<BatchReport<W>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let n = u32::try_from(trials).map_err(|_| Error::InvalidArgument("too many trials".into()))?;
    let outcomes: Vec<Outcome<W>> = (0..n)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, suite, trial);
            let mut last = None;
            for resamples in 0..=MAX_RESAMPLES {
                let x = sample(&mut rng);
                match run(&x) {
                    Ok((true, _)) => return Outcome::Pass(resamples),
                    Ok((false, w)) => return Outcome::Fail(resamples, w),
                    Err(e) if is_singular(&e) => last = Some(x),
                    Err(e) => return Outcome::Fail(resamples, describe_error(&x, e)),
                }
            }
            let x = last.expect("at least one draw");
            let e = Error::Singular("resampling exhausted");
            Outcome::Fail(MAX_RESAMPLES, describe_error(&x, e))
        })
        .collect();
    let mut report = BatchReport { check: check.into(), trials, failures: 0, singular_resamples: 0, first_failure_witness: None };
    for o in outcomes {
        match o {
            Outcome::Pass(r) => report.singular_resamples += r,
            Outcome::Fail(r, w) => {
                report.singular_resamples += r;
                report.failures += 1;
                report.first_failure_witness.get_or_insert(w);
            }
        }
    }
    Ok(report)
}

fn random_state(rng: &mut rand_chacha::ChaCha8Rng) -> XYState<QuadExt> {
    let lambda = QuadExt::from_rational(random_rational(rng));
    let s = QuadExt::from_rational(random_rational(rng));
    let n = QuadExt::from_rational(random_rational(rng));
    XYState::new(lambda, s, n, random_quad(rng), random_quad(rng))
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum Theorem1Witness {
    Report(Box<Theorem1Report>),
    Error { state: XYState<QuadExt>, error: String },
}

/// `theorem1_check` at `trials` random exact states; singular draws are redrawn.
pub fn theorem1_batch(trials: usize, seed: u64) -> Result<BatchReport<Theorem1Witness>> {
    run_batch(
        "theorem1",
        trials,
        seed,
        100,
        random_state,
        |st| theorem1_check(st).map(|r| (r.passed(), Theorem1Witness::Report(Box::new(r)))),
        |st, e| Theorem1Witness::Error { state: st.clone(), error: e.to_string() },
    )
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum Sk7Witness {
    Report(Box<Sk7Report>),
    Error { config: PointConfig<QuadExt>, error: String },
}

pub fn sk7_batch(trials: usize, seed: u64) -> Result<BatchReport<Sk7Witness>> {
    run_batch(
        "sk7",
        trials,
        seed,
        101,
        |rng| {
            let a1 = random_quad(rng);
            let a2 = random_quad(rng);
            let a0 = &(&QuadExt::one() - &a1) - &a2;
            PointConfig::new(a0, a1, a2, random_quad(rng), random_quad(rng), random_quad(rng))
        },
        |c| sk7_check(c).map(|r| (r.passed(), Sk7Witness::Report(Box::new(r)))),
        |c, e| Sk7Witness::Error { config: c.clone(), error: e.to_string() },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn r(n: i64, d: i64) -> QuadExt {
        QuadExt::from_rational(rat(n, d))
    }

    #[test]
    fn example_state_is_conjugate() {
        let st = XYState::new(r(1, 1), r(0, 1), r(1, 1), r(1, 1), r(2, 1));
        let rep = theorem1_check(&st).unwrap();
        assert!(rep.passed(), "{rep:#?}");
    }

    #[test]
    fn singular_state_is_an_error_not_a_failure() {
        let st = XYState::new(r(1, 1), r(0, 1), r(1, 1), r(1, 1), r(1, 1));
        assert_eq!(theorem1_check(&st).unwrap_err(), Error::Singular("y = n"));
    }

    #[test]
    fn batches_pass() {
        assert!(theorem1_batch(10, 7).unwrap().passed());
        assert!(sk7_batch(10, 7).unwrap().passed());
        assert!(theorem1_batch(0, 7).is_err());
    }

    #[test]
    fn sk7_detects_a_broken_step() {
        let c = PointConfig::new(r(1, 2), r(1, 3), r(1, 6), r(1, 2), r(2, 1), r(3, 1));
        assert!(sk7_check(&c).unwrap().passed());
        // Wrong relabelling of b₂ must break the second relation.
        let next = phi_step(&c).unwrap();
        let f_bar = -&next.q;
        let wrong = &(&c.t - &f_bar) - &(&c.a2 - &QuadExt::one()).checked_div(&f_bar).unwrap();
        assert_ne!(&c.p + &next.p, wrong);
    }
}
