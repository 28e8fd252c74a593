//! Several components at once, norm-one tori, and parameter scans.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use super::{Decider, Decision, SurfaceSpec, Verdict};
use crate::arith::{is_square, Rational};
use crate::error::{Error, Result};
use crate::hilbert::{global_hilbert, RamificationSet};

/// Verdict for a compositum: rational iff every component is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiDecision {
    pub a: Rational,
    pub verdict: Verdict,
    pub components: Vec<Decision>,
    /// Index of the first component that is not rational.
    pub first_obstructed: Option<usize>,
}

pub fn decide_multi(a: &Rational, components: &[(Rational, Rational, Rational)]) -> Result<MultiDecision> {
    let decider = Decider::default();
    let mut decisions = Vec::with_capacity(components.len());
    for (b, c, d) in components {
        let spec = SurfaceSpec::new(a.clone(), b.clone(), c.clone(), d.clone())?;
        decisions.push(decider.decide(&spec)?);
    }
    let first_obstructed = decisions.iter().position(|d| d.verdict == Verdict::NotRational);
    Ok(MultiDecision {
        a: a.clone(),
        verdict: if first_obstructed.is_some() {
            Verdict::NotRational
        } else {
            Verdict::Rational
        },
        components: decisions,
        first_obstructed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormToriEntry {
    pub b: Rational,
    pub split: bool,
    pub ramification: RamificationSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormToriDecision {
    pub a: Rational,
    pub verdict: Verdict,
    pub entries: Vec<NormToriEntry>,
}

/// Rational iff every `(a, b_i)` splits over Q.
pub fn decide_norm_tori(a: &Rational, bs: &[Rational]) -> Result<NormToriDecision> {
    if is_square(a).is_some() {
        return Err(Error::InvalidSpec(format!("a = {a} is a square")));
    }
    let mut entries = Vec::with_capacity(bs.len());
    for b in bs {
        if b.is_zero() {
            return Err(Error::InvalidSpec("b = 0".into()));
        }
        let ramification = global_hilbert(a, b)?;
        entries.push(NormToriEntry {
            b: b.clone(),
            split: ramification.is_empty(),
            ramification,
        });
    }
    let verdict = if entries.iter().all(|e| e.split) {
        Verdict::Rational
    } else {
        Verdict::NotRational
    };
    Ok(NormToriDecision {
        a: a.clone(),
        verdict,
        entries,
    })
}

/// How `d` depends on the scanned `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DRule {
    /// `d = c`
    EqualsC,
    /// `d = q`
    Constant(Rational),
    /// `d = q * c`
    TimesC(Rational),
}

impl DRule {
    pub fn apply(&self, c: &Rational) -> Rational {
        match self {
            DRule::EqualsC => c.clone(),
            DRule::Constant(q) => q.clone(),
            DRule::TimesC(q) => q * c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRequest {
    pub a: Rational,
    pub b: Rational,
    pub c_range: RangeInclusive<i64>,
    pub d_rule: DRule,
}

impl ScanRequest {
    /// `(a, b, c, d) = (2, 1, c, c)` for `1 <= c <= 100`.
    pub fn ex22() -> Self {
        ScanRequest {
            a: 2.into(),
            b: 1.into(),
            c_range: 1..=100,
            d_rule: DRule::EqualsC,
        }
    }

    /// `(a, b, c, d) = (2, 2, c, c)` for `-100 <= c <= 100`; `c = 0` is skipped.
    pub fn ex23() -> Self {
        ScanRequest {
            a: 2.into(),
            b: 2.into(),
            c_range: -100..=100,
            d_rule: DRule::EqualsC,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScanOutcome {
    Decided { verdict: Verdict },
    Skipped { reason: String },
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub c: i64,
    #[serde(flatten)]
    pub outcome: ScanOutcome,
}

impl ScanEntry {
    pub fn verdict(&self) -> Option<Verdict> {
        match self.outcome {
            ScanOutcome::Decided { verdict } => Some(verdict),
            _ => None,
        }
    }
}

/// Scans on the global rayon pool with the default budgets.
pub fn scan(req: &ScanRequest) -> Vec<ScanEntry> {
    scan_with(req, &Decider::default())
}

/// Entries are evaluated in parallel and returned in order of `c`.
pub fn scan_with(req: &ScanRequest, decider: &Decider) -> Vec<ScanEntry> {
    let cs: Vec<i64> = req.c_range.clone().collect();
    cs.par_iter()
        .map(|&c| ScanEntry {
            c,
            outcome: scan_one(req, decider, c),
        })
        .collect()
}

fn scan_one(req: &ScanRequest, decider: &Decider, c: i64) -> ScanOutcome {
    if decider.solver.cancel.is_cancelled() {
        return ScanOutcome::Error {
            message: Error::Cancelled.to_string(),
        };
    }
    let cr = Rational::from(c);
    let d = req.d_rule.apply(&cr);
    let spec = match SurfaceSpec::new(req.a.clone(), req.b.clone(), cr, d) {
        Ok(s) => s,
        Err(e) => {
            return ScanOutcome::Skipped {
                reason: e.to_string(),
            }
        }
    };
    match decider.decide(&spec) {
        Ok(dec) => ScanOutcome::Decided {
            verdict: dec.verdict,
        },
        Err(e) => ScanOutcome::Error {
            message: e.to_string(),
        },
    }
}
