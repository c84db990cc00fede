//! Moments → recurrence → ladder → every residual suite, with precision doubling.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{
    extend_moments, identity_residuals, ladder_tables, quadrature_moments, recurrence_from_moments, system_residuals,
    xy_sequence, IdentityResiduals, LadderTable, LossReport, MomentTable, RecurrenceTable, ResidualSeries, SystemMode,
    WeightParams,
};
use crate::dynamics::{bv_residuals, BvResiduals, XYState};
use crate::error::{Error, Result};
use crate::scalars::{format_rational, BigReal, Rational};

/// Reruns allowed after the first attempt.
pub const MAX_DOUBLINGS: usize = 3;
/// A rerun only counts as progress if every missed suite improved by this many bits.
const MIN_IMPROVEMENT_BITS: f64 = 16.0;
/// Residuals up to `2^(loss + margin − P)` are treated as rounding noise that doubling can cure.
const ROUNDING_MARGIN_BITS: f64 = 64.0;

pub const RESIDUAL_SUITES: [&str; 8] = ["e2", "e4", "g1", "g2", "r1bv", "r2bv", "d1", "d2"];
const CSV_COLUMNS: [&str; 17] =
    ["n", "alpha", "beta", "R", "r", "x", "y", "xt", "yt", "e2", "e4", "g1", "g2", "r1bv", "r2bv", "d1", "d2"];

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub lambda: Rational,
    pub s: Rational,
    pub n_max: usize,
    /// Requested bits; the policy may raise it.
    pub precision: usize,
    pub tolerance: Rational,
}

/// `max(requested, 64 + 12N)`.
pub fn precision_for(requested: usize, n_max: usize) -> usize {
    requested.max(64 + 12 * n_max)
}

/// Decimal digits written for a run at `p` bits.
pub fn output_digits(p: usize) -> usize {
    ((p as f64 * 0.3).floor() as usize).saturating_sub(10).max(1)
}

#[derive(Clone, Debug)]
pub struct PipelineTables {
    pub moments: MomentTable,
    pub quadrature_levels: usize,
    pub quadrature_nodes: usize,
    pub recurrence: RecurrenceTable,
    pub loss: LossReport,
    pub ladder: LadderTable,
    pub identities: IdentityResiduals,
    pub states: Vec<XYState<BigReal>>,
    pub xyn: Vec<ResidualSeries>,
    pub dp: Vec<ResidualSeries>,
    pub bv: BvResiduals,
}

impl PipelineTables {
    pub fn suites(&self) -> Vec<&ResidualSeries> {
        let mut v = vec![&self.identities.e2, &self.identities.e4];
        v.extend(self.xyn.iter());
        v.push(&self.bv.r1);
        v.push(&self.bv.r2);
        v.extend(self.dp.iter());
        v
    }

    pub fn suite(&self, name: &str) -> Option<&ResidualSeries> {
        self.suites().into_iter().find(|s| s.name == name)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Attempt {
    pub precision: usize,
    pub outcome: String,
    /// `log₂` of each suite's maximum residual (absent when the attempt errored).
    pub max_log2: BTreeMap<&'static str, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineRow {
    pub n: usize,
    pub columns: BTreeMap<&'static str, Option<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub lambda: String,
    pub s: String,
    pub n_max: usize,
    pub requested_precision: usize,
    pub precision: usize,
    pub digits: usize,
    pub tolerance: String,
    pub attempts: Vec<Attempt>,
    pub max_residuals: BTreeMap<&'static str, Option<String>>,
    pub beta_positive: bool,
    pub failures: Vec<String>,
    pub diagnostics: BTreeMap<&'static str, String>,
    pub rows: Vec<PipelineRow>,
    #[serde(skip)]
    pub tables: PipelineTables,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = CSV_COLUMNS.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = CSV_COLUMNS
                .iter()
                .map(|c| if *c == "n" { row.n.to_string() } else { row.columns[c].clone().unwrap_or_default() })
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Every stage at one fixed precision.
pub fn run_stages(params: &WeightParams, n_max: usize) -> Result<PipelineTables> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("n_max must be at least 2, got {n_max}")));
    }
    let quad = quadrature_moments(params, 1)?;
    let moments = extend_moments(&quad.values[0], &quad.values[1], params, 2 * n_max + 1)?;
    let (recurrence, loss) = recurrence_from_moments(&moments, n_max)?;
    let ladder = ladder_tables(&recurrence);
    let identities = identity_residuals(&recurrence, &ladder);
    let states = xy_sequence(&recurrence, &ladder)?;
    let xyn = system_residuals(&states, SystemMode::Xyn);
    let dp = system_residuals(&states, SystemMode::Dp);
    let bv = bv_residuals(&recurrence)?;
    Ok(PipelineTables {
        moments,
        quadrature_levels: quad.levels,
        quadrature_nodes: quad.nodes,
        recurrence,
        loss,
        ladder,
        identities,
        states,
        xyn,
        dp,
        bv,
    })
}

fn log2_of(v: &Option<BigReal>) -> f64 {
    match v {
        Some(x) if !x.is_zero() => x.exponent().map_or(f64::NEG_INFINITY, |e| e as f64),
        Some(_) => f64::NEG_INFINITY,
        None => f64::INFINITY,
    }
}

/// Suites over tolerance (or with singular entries), plus β positivity.
fn misses(t: &PipelineTables, tol: &BigReal) -> Vec<(&'static str, String)> {
    let mut out = Vec::new();
    for s in t.suites() {
        let singular = s.singular();
        if !singular.is_empty() {
            out.push((s.name, format!("{}: singular at n = {singular:?}", s.name)));
            continue;
        }
        match s.max_abs() {
            Some(m) if m < *tol => {}
            Some(m) => out.push((s.name, format!("{}: max |residual| = {} >= tolerance", s.name, m.to_decimal(6)))),
            None => out.push((s.name, format!("{}: empty", s.name))),
        }
    }
    if let Some(n) = t.recurrence.beta.iter().skip(1).position(|b| !b.is_positive()) {
        out.push(("beta", format!("beta_{} is not positive", n + 1)));
    }
    out
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineReport> {
    let mut p = precision_for(cfg.precision, cfg.n_max);
    WeightParams::new(cfg.lambda.clone(), cfg.s.clone(), p)?;
    let mut attempts = Vec::new();
    let mut last: Option<(PipelineTables, Vec<(&'static str, String)>)> = None;
    let mut last_err = None;
    for attempt in 0..=MAX_DOUBLINGS {
        if attempt > 0 {
            p *= 2;
        }
        let params = WeightParams::new(cfg.lambda.clone(), cfg.s.clone(), p)?;
        let tol = BigReal::from_rational(&cfg.tolerance, p);
        match run_stages(&params, cfg.n_max) {
            Err(e @ (Error::PrecisionExhausted { .. } | Error::NonConverged(_))) => {
                attempts.push(Attempt { precision: p, outcome: e.to_string(), max_log2: BTreeMap::new() });
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
            Ok(tables) => {
                let missed = misses(&tables, &tol);
                let max_log2 = tables.suites().iter().map(|s| (s.name, log2_of(&s.max_abs()))).collect::<BTreeMap<_, _>>();
                let outcome =
                    if missed.is_empty() { "pass".to_string() } else { missed.iter().map(|m| m.1.clone()).collect::<Vec<_>>().join("; ") };
                // Stop doubling when the misses do not respond to precision.
                let stalled = attempts.last().is_some_and(|prev: &Attempt| {
                    !prev.max_log2.is_empty()
                        && missed.iter().all(|(name, _)| match (prev.max_log2.get(name), max_log2.get(name)) {
                            (Some(a), Some(b)) => a - b < MIN_IMPROVEMENT_BITS,
                            _ => true,
                        })
                });
                // A residual far above the rounding level cannot be cured by more bits.
                let rounding_log2 = tables.loss.max_loss_bits + ROUNDING_MARGIN_BITS - p as f64;
                let explicable = missed.iter().any(|(name, _)| max_log2.get(name).is_none_or(|&m| m <= rounding_log2));
                let outcome = if missed.is_empty() || explicable { outcome } else { format!("{outcome} (not precision-limited)") };
                attempts.push(Attempt { precision: p, outcome, max_log2 });
                let done = missed.is_empty() || stalled || !explicable;
                last = Some((tables, missed));
                last_err = None;
                if done {
                    break;
                }
            }
        }
    }
    let Some((tables, missed)) = last else {
        return Err(last_err.expect("every attempt failed with an error"));
    };
    if let Some(e) = last_err {
        // The final rerun broke down; a table from an earlier precision is not trustworthy either.
        return Err(e);
    }
    let p = tables.recurrence.params.precision;
    let digits = output_digits(p);
    Ok(build_report(cfg, p, digits, attempts, tables, missed))
}

fn build_report(
    cfg: &PipelineConfig,
    p: usize,
    digits: usize,
    attempts: Vec<Attempt>,
    tables: PipelineTables,
    missed: Vec<(&'static str, String)>,
) -> PipelineReport {
    let fmt = |v: &BigReal| v.to_decimal(digits);
    let max_residuals = tables.suites().iter().map(|s| (s.name, s.max_abs().as_ref().map(fmt))).collect();
    let beta_positive = tables.recurrence.beta.iter().skip(1).all(BigReal::is_positive);
    let mut diagnostics = BTreeMap::new();
    if let Some(m) = tables.identities.e2_adjacent.max_abs() {
        diagnostics.insert("e2_adjacent_max", fmt(&m));
    }
    diagnostics.insert("max_loss_bits", format!("{:.1}", tables.loss.max_loss_bits));
    diagnostics.insert("quadrature_levels", tables.quadrature_levels.to_string());
    diagnostics.insert("quadrature_nodes", tables.quadrature_nodes.to_string());

    let n_max = cfg.n_max;
    let rt = &tables.recurrence;
    let lt = &tables.ladder;
    let rows = (0..=n_max)
        .map(|n| {
            let mut c: BTreeMap<&'static str, Option<String>> = BTreeMap::new();
            c.insert("alpha", Some(fmt(&rt.alpha[n])));
            c.insert("beta", Some(fmt(&rt.beta[n])));
            c.insert("R", Some(fmt(&lt.big_r[n])));
            c.insert("r", Some(fmt(&lt.r[n])));
            let st = n.checked_sub(1).and_then(|i| tables.states.get(i));
            c.insert("x", st.map(|s| fmt(&s.x)));
            c.insert("y", st.map(|s| fmt(&s.y)));
            c.insert("xt", Some(fmt(&tables.bv.xt[n])));
            c.insert("yt", Some(fmt(&tables.bv.yt[n])));
            for s in tables.suites() {
                c.insert(s.name, s.at(n).map(fmt));
            }
            PipelineRow { n, columns: c }
        })
        .collect();
    PipelineReport {
        lambda: format_rational(&cfg.lambda),
        s: format_rational(&cfg.s),
        n_max,
        requested_precision: cfg.precision,
        precision: p,
        digits,
        tolerance: BigReal::from_rational(&cfg.tolerance, 64).to_decimal(6),
        attempts,
        max_residuals,
        beta_positive,
        failures: missed.into_iter().map(|m| m.1).collect(),
        diagnostics,
        rows,
        tables,
    }
}
