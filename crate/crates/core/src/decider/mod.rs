//! Rationality of the fixed fields L0 over Q.
//!
//! For `a` a nonsquare, `b != 0` and `(c, d) != (0, 0)`, L0 is generated by
//! `t1..t4` subject to
//!
//! ```text
//! t1^2 - a t2^2 = b,    t3^2 - a t4^2 = 2c t1 + d.
//! ```
//!
//! The verdict is read off from Hilbert symbols alone, so it never depends on
//! a search budget. Searches are used only to complete certificates.

mod batch;
mod construct;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{is_square, Rational};
use crate::error::{Error, Result};
use crate::hilbert::{global_hilbert, RamificationSet};
use crate::quadfield::{ext_hilbert, squarefree_core, ExtSymbol};
use crate::solver::{ConicSolution, SolverConfig};

pub use batch::{
    decide_multi, decide_norm_tori, scan, scan_with, DRule, MultiDecision, NormToriDecision,
    NormToriEntry, ScanEntry, ScanOutcome, ScanRequest,
};
pub use construct::{build_parametrization, L0Param};

/// The label attached to every verdict: the three notions coincide for L0.
pub const EQUIVALENCE: &str = "rational <=> stably rational <=> unirational";

pub const NOTE_DEGENERATE_DISCRIMINANT: &str = "degenerate_discriminant";
pub const NOTE_POINT_UNAVAILABLE: &str = "point-unavailable-for-chosen-alpha";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl SurfaceSpec {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        if is_square(&a).is_some() {
            return Err(Error::InvalidSpec(format!("a = {a} is a square")));
        }
        if b.is_zero() {
            return Err(Error::InvalidSpec("b = 0".into()));
        }
        if c.is_zero() && d.is_zero() {
            return Err(Error::InvalidSpec("c = d = 0".into()));
        }
        Ok(SurfaceSpec { a, b, c, d })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }
    pub fn b(&self) -> &Rational {
        &self.b
    }
    pub fn c(&self) -> &Rational {
        &self.c
    }
    pub fn d(&self) -> &Rational {
        &self.d
    }

    /// `d^2 - 4 b c^2`, the radicand of the field over which the second
    /// symbol is evaluated.
    pub fn discriminant(&self) -> Rational {
        &self.d.square() - &(&(&Rational::from(4) * &self.b) * &self.c.square())
    }

    /// Whether `(alpha, beta, gamma, delta)` solves both norm equations.
    pub fn is_point(&self, p: &[Rational; 4]) -> bool {
        let first = &p[0].square() - &(&self.a * &p[1].square());
        let second = &p[2].square() - &(&self.a * &p[3].square());
        let rhs = &(&(&self.c + &self.c) * &p[0]) + &self.d;
        first == self.b && second == rhs
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a, b, c, d) = ({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Rational,
    NotRational,
}

impl Verdict {
    pub fn is_rational(self) -> bool {
        self == Verdict::Rational
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Rational => "rational",
            Verdict::NotRational => "not_rational",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Case1Quadric,
    Case2Linear,
    SquareBConic,
    SquareBLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailedCondition {
    NormFormB,
    ExtSymbol,
    SquareBSymbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Obstruction {
    Ramification(RamificationSet),
    Ext(ExtSymbol),
}

/// The symbol a negative verdict cites: `(a, b)` over Q, or over
/// `Q(sqrt field_radicand)` when one is given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CitedSymbol {
    pub a: Rational,
    pub b: Rational,
    pub field_radicand: Option<Rational>,
}

// one certificate per decision, so the variant size gap is not worth a box
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Rational {
        point: Option<[Rational; 4]>,
        parametrization: Option<L0Param>,
        construction_route: Route,
        norm_solution: ConicSolution,
    },
    NotRational {
        failed_condition: FailedCondition,
        obstruction: Obstruction,
        symbol: CitedSymbol,
    },
}

impl Certificate {
    /// Rechecks the certificate from scratch: points and maps against the
    /// defining equations, obstructions by recomputing the cited symbol.
    pub fn reverify(&self, spec: &SurfaceSpec) -> Result<bool> {
        match self {
            Certificate::Rational {
                point,
                parametrization,
                norm_solution,
                ..
            } => Ok(norm_solution.satisfies(&spec.a, &spec.b)
                && point.as_ref().is_none_or(|p| spec.is_point(p))
                && parametrization.as_ref().is_none_or(|m| m.satisfies(spec))),
            Certificate::NotRational {
                obstruction,
                symbol,
                ..
            } => match (obstruction, &symbol.field_radicand) {
                (Obstruction::Ramification(set), None) => {
                    let again = global_hilbert(&symbol.a, &symbol.b)?;
                    Ok(!again.is_empty() && &again == set)
                }
                (Obstruction::Ext(s), Some(m)) => {
                    let again = ext_hilbert(&symbol.a, &symbol.b, &squarefree_core(m)?)?;
                    Ok(!again.is_zero() && &again == s)
                }
                _ => Ok(false),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub spec: SurfaceSpec,
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub notes: Vec<String>,
    pub equivalence: &'static str,
}

impl Decision {
    pub fn reverify(&self) -> Result<bool> {
        let consistent = matches!(
            (&self.certificate, self.verdict),
            (Certificate::Rational { .. }, Verdict::Rational)
                | (Certificate::NotRational { .. }, Verdict::NotRational)
        );
        Ok(consistent && self.certificate.reverify(&self.spec)?)
    }
}

#[allow(clippy::large_enum_variant)]
enum Outcome {
    Rational,
    NotRational(FailedCondition, Obstruction, CitedSymbol),
}

/// Decision settings.
#[derive(Debug, Clone, Default)]
pub struct Decider {
    pub solver: SolverConfig,
    /// Build a parametrization for every rational verdict, not only when no
    /// point is found.
    pub always_parametrize: bool,
}

pub fn decide(spec: &SurfaceSpec) -> Result<Decision> {
    Decider::default().decide(spec)
}

/// As [`decide`], always attaching a verified parametrization when rational.
pub fn certify(spec: &SurfaceSpec) -> Result<Decision> {
    Decider {
        always_parametrize: true,
        ..Decider::default()
    }
    .decide(spec)
}

/// A solution of both norm equations, searched for constructively.
pub fn point_on_x(spec: &SurfaceSpec) -> Result<Option<[Rational; 4]>> {
    Decider::default().point_on_x(spec)
}

pub fn decide_with_norm_solution(spec: &SurfaceSpec, sol: &ConicSolution) -> Result<Decision> {
    Decider::default().decide_with_norm_solution(spec, sol)
}

fn sign_variants(sol: &ConicSolution) -> Vec<ConicSolution> {
    let mut out: Vec<ConicSolution> = Vec::with_capacity(4);
    for (sa, sb) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
        let v = ConicSolution {
            alpha: &sol.alpha * &Rational::from(sa),
            beta: &sol.beta * &Rational::from(sb),
        };
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

impl Decider {
    pub fn decide(&self, spec: &SurfaceSpec) -> Result<Decision> {
        match is_square(&spec.b) {
            Some(beta) => self.decide_square(spec, beta),
            None => {
                let ramified = global_hilbert(&spec.a, &spec.b)?;
                if !ramified.is_empty() {
                    let symbol = CitedSymbol {
                        a: spec.a.clone(),
                        b: spec.b.clone(),
                        field_radicand: None,
                    };
                    return Ok(self.negative(
                        spec,
                        FailedCondition::NormFormB,
                        Obstruction::Ramification(ramified),
                        symbol,
                        Vec::new(),
                    ));
                }
                let sol = self
                    .solver
                    .solve_norm_equation(&spec.a, &spec.b)?
                    .ok_or_else(|| {
                        Error::VerificationFailed(format!("no norm solution for split {spec}"))
                    })?;
                self.decide_with_norm_solution(spec, &sol)
            }
        }
    }

    /// The verdict computed from a caller-chosen solution of
    /// `alpha^2 - a beta^2 = b`, `b` a nonsquare.
    pub fn decide_with_norm_solution(
        &self,
        spec: &SurfaceSpec,
        sol: &ConicSolution,
    ) -> Result<Decision> {
        if is_square(&spec.b).is_some() {
            return Err(Error::Precondition("b is a square".into()));
        }
        if !sol.satisfies(&spec.a, &spec.b) {
            return Err(Error::Precondition(format!(
                "({}, {}) does not solve alpha^2 - a beta^2 = b",
                sol.alpha, sol.beta
            )));
        }
        let mut notes = Vec::new();
        let e = &spec.d - &(&(&spec.c + &spec.c) * &sol.alpha);
        let outcome = if e.is_zero() {
            Outcome::Rational
        } else {
            self.ext_outcome(spec, e, &mut notes)?
        };
        match outcome {
            Outcome::NotRational(fc, obs, sym) => Ok(self.negative(spec, fc, obs, sym, notes)),
            Outcome::Rational => self.positive(spec, sol.clone(), notes),
        }
    }

    fn ext_outcome(&self, spec: &SurfaceSpec, e: Rational, notes: &mut Vec<String>) -> Result<Outcome> {
        let disc = spec.discriminant();
        let field = squarefree_core(&disc)?;
        if field.is_trivial() && !notes.iter().any(|n| n == NOTE_DEGENERATE_DISCRIMINANT) {
            notes.push(NOTE_DEGENERATE_DISCRIMINANT.into());
        }
        let s = ext_hilbert(&spec.a, &e, &field)?;
        Ok(if s.is_zero() {
            Outcome::Rational
        } else {
            Outcome::NotRational(
                FailedCondition::ExtSymbol,
                Obstruction::Ext(s),
                CitedSymbol {
                    a: spec.a.clone(),
                    b: e,
                    field_radicand: Some(disc),
                },
            )
        })
    }

    fn square_outcome(&self, spec: &SurfaceSpec, beta: &Rational, notes: &mut Vec<String>) -> Result<Outcome> {
        let e = &spec.d - &(&(&spec.c + &spec.c) * beta);
        if !e.is_zero() {
            return self.ext_outcome(spec, e, notes);
        }
        let two_d = &spec.d + &spec.d;
        let ramified = global_hilbert(&spec.a, &two_d)?;
        Ok(if ramified.is_empty() {
            Outcome::Rational
        } else {
            Outcome::NotRational(
                FailedCondition::SquareBSymbol,
                Obstruction::Ramification(ramified),
                CitedSymbol {
                    a: spec.a.clone(),
                    b: two_d,
                    field_radicand: None,
                },
            )
        })
    }

    fn decide_square(&self, spec: &SurfaceSpec, beta: Rational) -> Result<Decision> {
        let mut notes = Vec::new();
        let outcome = self.square_outcome(spec, &beta, &mut notes)?;
        let mut scratch = Vec::new();
        let mirrored = self.square_outcome(spec, &-&beta, &mut scratch)?;
        if matches!(outcome, Outcome::Rational) != matches!(mirrored, Outcome::Rational) {
            return Err(Error::VerificationFailed(format!(
                "verdicts for +sqrt(b) and -sqrt(b) differ on {spec}"
            )));
        }
        match outcome {
            Outcome::NotRational(fc, obs, sym) => Ok(self.negative(spec, fc, obs, sym, notes)),
            Outcome::Rational => {
                let sol = ConicSolution {
                    alpha: beta,
                    beta: Rational::zero(),
                };
                self.positive(spec, sol, notes)
            }
        }
    }

    fn negative(
        &self,
        spec: &SurfaceSpec,
        failed_condition: FailedCondition,
        obstruction: Obstruction,
        symbol: CitedSymbol,
        notes: Vec<String>,
    ) -> Decision {
        Decision {
            spec: spec.clone(),
            verdict: Verdict::NotRational,
            certificate: Certificate::NotRational {
                failed_condition,
                obstruction,
                symbol,
            },
            notes,
            equivalence: EQUIVALENCE,
        }
    }

    fn positive(&self, spec: &SurfaceSpec, sol: ConicSolution, mut notes: Vec<String>) -> Result<Decision> {
        let square_b = sol.beta.is_zero();
        let point = self.complete_point(spec, &sol)?;
        let parametrization = if point.is_none() && !square_b {
            notes.push(NOTE_POINT_UNAVAILABLE.into());
            Some(build_parametrization(spec, None, Some(&sol), &self.solver)?)
        } else if self.always_parametrize {
            Some(build_parametrization(spec, point.as_ref(), Some(&sol), &self.solver)?)
        } else {
            None
        };
        let construction_route = match (&parametrization, &point) {
            (Some(p), _) => p.route,
            (None, Some(p)) => construct::route_for(spec, &p[0], &p[1]),
            (None, None) => construct::route_for(spec, &sol.alpha, &sol.beta),
        };
        Ok(Decision {
            spec: spec.clone(),
            verdict: Verdict::Rational,
            certificate: Certificate::Rational {
                point,
                parametrization,
                construction_route,
                norm_solution: sol,
            },
            notes,
            equivalence: EQUIVALENCE,
        })
    }

    /// Extends `(alpha, beta)` by a solution of `gamma^2 - a delta^2 = 2c alpha + d`,
    /// trying the four sign choices of `(alpha, beta)` in a fixed order.
    fn complete_point(&self, spec: &SurfaceSpec, sol: &ConicSolution) -> Result<Option<[Rational; 4]>> {
        for v in sign_variants(sol) {
            let rhs = &(&(&spec.c + &spec.c) * &v.alpha) + &spec.d;
            let gd = if rhs.is_zero() {
                Some((Rational::zero(), Rational::zero()))
            } else {
                self.solver
                    .solve_norm_equation(&spec.a, &rhs)?
                    .map(|s| (s.alpha, s.beta))
            };
            if let Some((g, dl)) = gd {
                let p = [v.alpha, v.beta, g, dl];
                debug_assert!(spec.is_point(&p));
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    pub fn point_on_x(&self, spec: &SurfaceSpec) -> Result<Option<[Rational; 4]>> {
        let mut bases = Vec::new();
        if let Some(beta) = is_square(&spec.b) {
            bases.push(ConicSolution {
                alpha: beta,
                beta: Rational::zero(),
            });
        }
        if let Some(s) = self.solver.solve_norm_equation(&spec.a, &spec.b)? {
            bases.push(s);
        }
        for base in &bases {
            if let Some(p) = self.complete_point(spec, base)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }
}
