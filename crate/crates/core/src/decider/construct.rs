//! Explicit parametrizations of L0 by two rational parameters.
//!
//! With `(alpha, beta)` solving `alpha^2 - a beta^2 = b`, the coordinate
//! `t0 = (t2 - beta) / (t1 + alpha)` determines `t1, t2`, and
//! `t5 = t3 + a t0 t4`, `t6 = t0 t3 + t4` turn the second relation into
//! `t5^2 - a t6^2 = G(t0)` with
//! `G(t0) = a (2c alpha - d) t0^2 + 4 a c beta t0 + (2c alpha + d)`.
//! Each route below parametrizes that surface, and the composite maps are
//! checked against both defining relations before they are returned.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use super::{Route, SurfaceSpec};
use crate::arith::{common_denominator, is_square, MultiPoly, QRatFunc, Rational, Var};

type QPoly = MultiPoly<Rational>;
use crate::error::{Error, Result};
use crate::solver::{
    primitive_vector, stereographic_parametrize_with, ConicSolution, QuadricSpec, SolverConfig,
};

/// `t1..t4` as rational functions of the parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L0Param {
    pub route: Route,
    pub params: Vec<Var>,
    pub maps: [QRatFunc; 4],
    pub norm_solution: ConicSolution,
    pub quadric: Option<QuadricSpec>,
    pub base_point: Option<Vec<BigInt>>,
}

impl L0Param {
    /// Whether both defining relations hold identically.
    pub fn satisfies(&self, spec: &SurfaceSpec) -> bool {
        relations_hold(spec, &self.maps)
    }
}

impl Serialize for L0Param {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let strs = |xs: &[QRatFunc]| xs.iter().map(|f| f.to_string()).collect::<Vec<_>>();
        let mut st = s.serialize_struct("L0Param", 6)?;
        st.serialize_field("route", &self.route)?;
        let params: Vec<String> = self.params.iter().map(|v| v.to_string()).collect();
        st.serialize_field("params", &params)?;
        let maps = strs(&self.maps);
        let named: BTreeMap<String, &String> =
            maps.iter().enumerate().map(|(i, m)| (format!("t{}", i + 1), m)).collect();
        st.serialize_field("maps", &named)?;
        st.serialize_field("norm_solution", &self.norm_solution)?;
        st.serialize_field("quadric", &self.quadric)?;
        let base = self
            .base_point
            .as_ref()
            .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        st.serialize_field("base_point", &base)?;
        st.end()
    }
}

impl fmt::Display for L0Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "route {:?}", self.route)?;
        for (i, m) in self.maps.iter().enumerate() {
            writeln!(f, "  t{} = {}", i + 1, m)?;
        }
        Ok(())
    }
}

fn k(r: &Rational) -> QRatFunc {
    QRatFunc::from_rational(r.clone(), &())
}

/// `f` as a quotient of integer-coefficient polynomials. Products of
/// these avoid rational coefficient arithmetic, which dominates otherwise.
fn integral_parts(f: &QRatFunc) -> (QPoly, QPoly) {
    let l = Rational::from(common_denominator(
        f.numer().terms().chain(f.denom().terms()).map(|(_, c)| c),
    ));
    (f.numer().scale(&l), f.denom().scale(&l))
}

/// Both relations with denominators cleared, so no gcd is taken.
pub(crate) fn relations_hold(spec: &SurfaceSpec, t: &[QRatFunc; 4]) -> bool {
    let parts = t.each_ref().map(integral_parts);
    let [(p1, q1), (p2, q2), (p3, q3), (p4, q4)] = parts.each_ref().map(|(n, d)| (n, d));
    let (q1s, q2s, q3s, q4s) = (q1.pow(2), q2.pow(2), q3.pow(2), q4.pow(2));
    let q12 = &q1s * &q2s;
    let first = &(&(&p1.pow(2) * &q2s) - &(&p2.pow(2) * &q1s).scale(&spec.a)) - &q12.scale(&spec.b);
    let lhs = &(&(&p3.pow(2) * &q4s) - &(&p4.pow(2) * &q3s).scale(&spec.a)) * q1;
    let rhs = &(&p1.scale(&(&spec.c + &spec.c)) + &q1.scale(&spec.d)) * &(&q3s * &q4s);
    first.is_zero() && (&lhs - &rhs).is_zero()
}

/// Route used for the solution `(alpha, beta)`.
pub(crate) fn route_for(spec: &SurfaceSpec, alpha: &Rational, beta: &Rational) -> Route {
    let two_c_alpha = &(&spec.c + &spec.c) * alpha;
    let plus = &two_c_alpha + &spec.d;
    let minus = &two_c_alpha - &spec.d;
    if !plus.is_zero() && !minus.is_zero() {
        Route::Case1Quadric
    } else if beta.is_zero() {
        Route::SquareBConic
    } else {
        Route::Case2Linear
    }
}

/// Recovers `t1..t4` from `(t0, t5, t6)`. Each map is assembled as a single
/// fraction and reduced once.
fn back_substitute(
    a: &Rational,
    sol: &ConicSolution,
    t0: &QRatFunc,
    t5: &QRatFunc,
    t6: &QRatFunc,
) -> Result<[QRatFunc; 4]> {
    let ((n0, d0), (n5, d5), (n6, d6)) = (integral_parts(t0), integral_parts(t5), integral_parts(t6));
    let (n0, d0, n5, d5, n6, d6) = (&n0, &d0, &n5, &d5, &n6, &d6);
    let (d0s, an0s) = (d0.pow(2), n0.pow(2).scale(a));
    // 1 - a t0^2 = e / d0^2
    let e = &d0s - &an0s;
    let plus = &d0s + &an0s;
    let n0d0 = n0 * d0;
    let two = Rational::from(2);
    let t1 = &plus.scale(&sol.alpha) + &n0d0.scale(&(&(&two * a) * &sol.beta));
    let t2 = &plus.scale(&sol.beta) + &n0d0.scale(&(&two * &sol.alpha));
    // t5 and t6 usually share their denominator
    let (t3, t4, den) = if d5 == d6 {
        (
            &(&(n5 * d0) - &(n0 * n6).scale(a)) * d0,
            &(&(n6 * d0) - &(n0 * n5)) * d0,
            d5 * &e,
        )
    } else {
        (
            &(&(&(n5 * d0) * d6) - &(&(n0 * n6) * d5).scale(a)) * d0,
            &(&(&(n6 * d0) * d5) - &(&(n0 * n5) * d6)) * d0,
            &(d5 * d6) * &e,
        )
    };
    Ok([
        QRatFunc::new(t1, e.clone())?,
        QRatFunc::new(t2, e)?,
        QRatFunc::new(t3, den.clone())?,
        QRatFunc::new(t4, den)?,
    ])
}

/// Builds and verifies a parametrization of L0.
///
/// `point` is a solution `(alpha, beta, gamma, delta)` of both norm
/// equations; without it the first relation's solution `norm_solution` is
/// used (for square `b` the default is `(sqrt b, 0)`), and any point needed on
/// an auxiliary quadric is searched for.
pub fn build_parametrization(
    spec: &SurfaceSpec,
    point: Option<&[Rational; 4]>,
    norm_solution: Option<&ConicSolution>,
    solver: &SolverConfig,
) -> Result<L0Param> {
    let (sol, gamma_delta) = match (point, norm_solution) {
        (Some(p), _) => (
            ConicSolution {
                alpha: p[0].clone(),
                beta: p[1].clone(),
            },
            Some((p[2].clone(), p[3].clone())),
        ),
        (None, Some(s)) => (s.clone(), None),
        (None, None) => match is_square(&spec.b) {
            Some(r) => (
                ConicSolution {
                    alpha: r,
                    beta: Rational::zero(),
                },
                None,
            ),
            None => {
                return Err(Error::Precondition(
                    "a solution of alpha^2 - a beta^2 = b is required".into(),
                ))
            }
        },
    };
    if !sol.satisfies(&spec.a, &spec.b) {
        return Err(Error::Precondition(format!(
            "({}, {}) does not solve alpha^2 - a beta^2 = b",
            sol.alpha, sol.beta
        )));
    }
    let (a, c, d) = (&spec.a, &spec.c, &spec.d);
    let (alpha, beta) = (&sol.alpha, &sol.beta);
    let two = Rational::from(2);
    let two_c_alpha = &(&two * c) * alpha;
    let g2 = a * &(&two_c_alpha - d); // t0^2 coefficient of G
    let g1 = &(&(&Rational::from(4) * a) * c) * beta; // t0 coefficient
    let g0 = &two_c_alpha + d; // constant term
    let u = Var::new("u");
    let v = Var::new("v");
    let (ku, kv) = (QRatFunc::var(u, &()), QRatFunc::var(v, &()));
    let route = route_for(spec, alpha, beta);

    let (t0, t5, t6, quadric, base_point) = match route {
        Route::Case2Linear if g0.is_zero() => {
            // t5 = u t0, t6 = v t0 and G(t0) / t0 is linear in t0
            let den = &(&ku.square() - &(&k(a) * &kv.square())) - &k(&g2);
            let t0 = k(&g1).div(&den)?;
            let t5 = &ku * &t0;
            let t6 = &kv * &t0;
            (t0, t5, t6, None, None)
        }
        Route::Case2Linear => {
            // G is linear: solve for t0
            let norm = &ku.square() - &(&k(a) * &kv.square());
            let t0 = (&norm - &k(&g0)).div(&k(&g1))?;
            (t0, ku.clone(), kv.clone(), None, None)
        }
        Route::SquareBConic | Route::SquareBLinear => {
            // beta = 0 and one of the coefficients of G vanishes; the
            // remaining conic is homogeneous in (t5, t6, t0) or constant.
            let (e, scaled) = if g0.is_zero() { (g2, true) } else { (g0, false) };
            let conic = QuadricSpec::new(vec![Rational::one(), -a, -&e])?;
            let p = solver
                .find_quadric_point(&conic)?
                .ok_or_else(|| Error::SearchBudgetExceeded(format!("conic {conic:?}")))?;
            let par = stereographic_parametrize_with(&conic, &p, &[u])?;
            let aff = par.affine(2)?;
            let t0 = kv.clone();
            let (t5, t6) = if scaled {
                (&aff[0] * &t0, &aff[1] * &t0)
            } else {
                (aff[0].clone(), aff[1].clone())
            };
            (t0, t5, t6, Some(conic), Some(p))
        }
        Route::Case1Quadric => {
            // t^ = t0 + shift turns G into (2c alpha - d) (a t^2) - (d^2 - 4bc^2)/(2c alpha - d)
            let e = &two_c_alpha - d;
            let shift = &(&(&two * c) * beta) / &e;
            let disc = &d.square() - &(&(&Rational::from(4) * &spec.b) * &c.square());
            let q = QuadricSpec::new(vec![Rational::one(), -a, -&g2, &disc / &e])?;
            let known = gamma_delta.map(|(g, dl)| primitive_vector(&[g, dl, shift.clone(), Rational::one()]));
            let p = match known {
                Some(p) if q.contains(&p) => p,
                _ => solver
                    .find_quadric_point(&q)?
                    .ok_or_else(|| Error::SearchBudgetExceeded(format!("quadric {q:?}")))?,
            };
            let par = stereographic_parametrize_with(&q, &p, &[u, v])?;
            let aff = par.affine(3)?;
            let t0 = &aff[2] - &k(&shift);
            (t0, aff[0].clone(), aff[1].clone(), Some(q), Some(p))
        }
    };
    let maps = back_substitute(a, &sol, &t0, &t5, &t6)?;
    if !relations_hold(spec, &maps) {
        return Err(Error::VerificationFailed(format!(
            "parametrization of {spec} via {route:?}"
        )));
    }
    Ok(L0Param {
        route,
        params: vec![u, v],
        maps,
        norm_solution: sol,
        quadric,
        base_point,
    })
}
