use rayon::prelude::*;
use serde::Serialize;

use super::{apply_word, phi_step, PointConfig};
use crate::error::{Error, Result};
use crate::lattice::{phi_word, psi_word, Generator, Word};
use crate::sampling::{random_quad, trial_rng, MAX_RESAMPLES};
use crate::scalars::QuadExt;

type Side = fn(&PointConfig<QuadExt>) -> Result<PointConfig<QuadExt>>;
type BoxedSide = Box<dyn Fn(&PointConfig<QuadExt>) -> Result<PointConfig<QuadExt>> + Send + Sync>;

struct Relation {
    name: String,
    lhs: BoxedSide,
    rhs: BoxedSide,
    /// Sample only `a₀ + a₁ + a₂ = 1`.
    normalized: bool,
}

fn word(s: &str) -> Word {
    s.parse().expect("built-in word")
}

fn word_side(w: Word) -> BoxedSide {
    Box::new(move |c| apply_word(&w, c))
}

fn identity_side() -> BoxedSide {
    Box::new(|c| Ok(c.clone()))
}

fn relations() -> Vec<Relation> {
    let mut out = Vec::new();
    for g in Generator::ALL {
        out.push(Relation {
            name: format!("{g}^2 = e"),
            lhs: word_side(Word::new([g, g])),
            rhs: identity_side(),
            normalized: false,
        });
    }
    for (i, j) in [("w0", "w1"), ("w0", "w2"), ("w1", "w2")] {
        out.push(Relation {
            name: format!("{i} {j} {i} = {j} {i} {j}"),
            lhs: word_side(word(&format!("{i} {j} {i}"))),
            rhs: word_side(word(&format!("{j} {i} {j}"))),
            normalized: false,
        });
    }
    out.push(Relation {
        name: "(s1 s2)^3 = e".into(),
        lhs: word_side(word("s1 s2").power(3)),
        rhs: identity_side(),
        normalized: false,
    });
    let phi: Side = phi_step;
    out.push(Relation {
        name: "s1 s2 w0 w2 = phi".into(),
        lhs: word_side(phi_word()),
        rhs: Box::new(phi),
        normalized: true,
    });
    out.push(Relation {
        name: "s1 s2 w2 w1 = w1 (s1 s2 w0 w2) w1".into(),
        lhs: word_side(psi_word()),
        rhs: word_side(word("w1").then(&phi_word()).then(&word("w1"))),
        normalized: false,
    });
    let w1 = word("w1");
    out.push(Relation {
        name: "w1 phi w1 = s1 s2 w2 w1".into(),
        lhs: Box::new(move |c| apply_word(&w1, &phi_step(&apply_word(&w1, c)?)?)),
        rhs: word_side(psi_word()),
        normalized: true,
    });
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub point: PointConfig<QuadExt>,
    pub lhs: Option<PointConfig<QuadExt>>,
    pub rhs: Option<PointConfig<QuadExt>>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationOutcome {
    pub relation: String,
    pub trials: usize,
    pub failures: usize,
    pub resamples: usize,
    pub first_failure_witness: Option<Witness>,
}

impl RelationOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationsReport {
    pub seed: u64,
    pub relations: Vec<RelationOutcome>,
}

impl RelationsReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(RelationOutcome::passed)
    }
}

fn random_config<R: rand::Rng>(rng: &mut R, normalized: bool) -> PointConfig<QuadExt> {
    let a1 = random_quad(rng);
    let a2 = random_quad(rng);
    let a0 = if normalized { &(&QuadExt::one() - &a1) - &a2 } else { random_quad(rng) };
    PointConfig::new(a0, a1, a2, random_quad(rng), random_quad(rng), random_quad(rng))
}

fn is_locus(e: &Error) -> bool {
    matches!(e, Error::ExceptionalLocus { .. } | Error::DivisionByZero)
}

enum TrialResult {
    Pass { resamples: usize },
    Fail { resamples: usize, witness: Box<Witness> },
}

fn run_trial(rel: &Relation, seed: u64, suite: u32, trial: u32) -> TrialResult {
    let mut rng = trial_rng(seed, suite, trial);
    let mut last = None;
    for resamples in 0..=MAX_RESAMPLES {
        let c = random_config(&mut rng, rel.normalized);
        let (l, r) = ((rel.lhs)(&c), (rel.rhs)(&c));
        match (l, r) {
            (Ok(l), Ok(r)) => {
                if l == r {
                    return TrialResult::Pass { resamples };
                }
                let note = "sides differ".into();
                return TrialResult::Fail { resamples, witness: Box::new(Witness { point: c, lhs: Some(l), rhs: Some(r), note }) };
            }
            (Err(e), _) | (_, Err(e)) if is_locus(&e) => last = Some((c, e)),
            (l, r) => {
                let note = format!("{:?} / {:?}", l.as_ref().err(), r.as_ref().err());
                return TrialResult::Fail { resamples, witness: Box::new(Witness { point: c, lhs: l.ok(), rhs: r.ok(), note }) };
            }
        }
    }
    let (point, e) = last.expect("at least one attempt");
    let note = format!("gave up after {MAX_RESAMPLES} resamples; last: {e}");
    TrialResult::Fail { resamples: MAX_RESAMPLES, witness: Box::new(Witness { point, lhs: None, rhs: None, note }) }
}

/// Checks every defining relation of the group, plus the two decompositions,
/// by exact evaluation at `trials` random ℚ(√2) configurations.
pub fn relations_report(trials: usize, seed: u64) -> Result<RelationsReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let trials_u32 = u32::try_from(trials).map_err(|_| Error::InvalidArgument("too many trials".into()))?;
    let relations = relations()
        .iter()
        .enumerate()
        .map(|(suite, rel)| {
            let results: Vec<TrialResult> =
                (0..trials_u32).into_par_iter().map(|t| run_trial(rel, seed, suite as u32, t)).collect();
            let mut outcome = RelationOutcome {
                relation: rel.name.clone(),
                trials,
                failures: 0,
                resamples: 0,
                first_failure_witness: None,
            };
            for r in results {
                match r {
                    TrialResult::Pass { resamples } => outcome.resamples += resamples,
                    TrialResult::Fail { resamples, witness } => {
                        outcome.resamples += resamples;
                        outcome.failures += 1;
                        outcome.first_failure_witness.get_or_insert(*witness);
                    }
                }
            }
            outcome
        })
        .collect();
    Ok(RelationsReport { seed, relations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_is_an_error() {
        assert!(relations_report(0, 1).is_err());
    }

    #[test]
    fn small_run_passes() {
        let r = relations_report(5, 3).unwrap();
        assert!(r.passed(), "{:#?}", r.relations.iter().filter(|o| !o.passed()).collect::<Vec<_>>());
        assert_eq!(r.relations.len(), 12);
    }
}
