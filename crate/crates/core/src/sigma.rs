//! Symbolic checks of the involution `sigma` on `L = Q(sqrt a)(x, y)`,
//!
//! ```text
//! sigma: sqrt a -> -sqrt a,  x -> b/x,  y -> (c (x + b/x) + d) / y,
//! ```
//!
//! its invariant generators `t1..t4`, and the changes of variables used to
//! read off rationality of the fixed field. Every check is an exact identity
//! of canonical rational functions; nothing is sampled.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{is_square, QRatFunc, QuadElem, QuadRatFunc, Radicand, Rational, Var};
use crate::decider::SurfaceSpec;
use crate::error::{Error, Result};

/// `sigma` for one spec, as bindings `x -> b/x`, `y -> (c(x + b/x) + d)/y`
/// composed with conjugation of coefficients.
#[derive(Debug, Clone)]
pub struct SigmaAction {
    spec: SurfaceSpec,
    radicand: Radicand,
    bindings: BTreeMap<Var, QuadRatFunc>,
}

impl SigmaAction {
    pub fn new(spec: &SurfaceSpec) -> Self {
        let radicand = Radicand::new(spec.a().clone()).expect("a is a nonsquare for a valid spec");
        let x = Var::new("x");
        let y = Var::new("y");
        let fx = QuadRatFunc::var(x, &radicand);
        let fy = QuadRatFunc::var(y, &radicand);
        let b = QuadRatFunc::from_rational(spec.b().clone(), &radicand);
        let b_over_x = b.div(&fx).expect("x is a variable");
        let num = (&fx + &b_over_x)
            .scale(&QuadElem::rational(spec.c().clone(), &radicand))
            .add_constant(&QuadElem::rational(spec.d().clone(), &radicand));
        // (c, d) != (0, 0) and x is transcendental, so num != 0
        let sigma_y = num.div(&fy).expect("y is a variable");
        let bindings = BTreeMap::from([(x, b_over_x), (y, sigma_y)]);
        SigmaAction {
            spec: spec.clone(),
            radicand,
            bindings,
        }
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn radicand(&self) -> &Radicand {
        &self.radicand
    }

    /// Images of `x` and `y`.
    pub fn bindings(&self) -> &BTreeMap<Var, QuadRatFunc> {
        &self.bindings
    }

    fn k(&self, r: &Rational) -> QuadRatFunc {
        QuadRatFunc::from_rational(r.clone(), &self.radicand)
    }

    fn sqrt_a(&self) -> QuadRatFunc {
        QuadRatFunc::constant(QuadElem::sqrt(&self.radicand))
    }

    fn var(&self, name: &str) -> QuadRatFunc {
        QuadRatFunc::var(Var::new(name), &self.radicand)
    }
}

/// Conjugates coefficients and substitutes the images of `x`, `y`.
///
/// The bindings have rational coefficients, so the order of the two steps
/// does not matter.
pub fn apply_sigma(f: &QuadRatFunc, act: &SigmaAction) -> Result<QuadRatFunc> {
    f.map_coeffs(&act.radicand, QuadElem::conjugate)
        .substitute(&act.bindings)
}

/// `t1 = (x + b/x)/2`, `t2 = (x - b/x)/(2 sqrt a)` and the same with `y`
/// and `c(x + b/x) + d` in place of `x` and `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub t1: QuadRatFunc,
    pub t2: QuadRatFunc,
    pub t3: QuadRatFunc,
    pub t4: QuadRatFunc,
}

impl GeneratorSet {
    pub fn as_array(&self) -> [&QuadRatFunc; 4] {
        [&self.t1, &self.t2, &self.t3, &self.t4]
    }
}

pub fn build_generators(spec: &SurfaceSpec) -> GeneratorSet {
    build_with(&SigmaAction::new(spec))
}

fn build_with(act: &SigmaAction) -> GeneratorSet {
    let half = QuadElem::rational(Rational::new(1, 2).expect("nonzero"), &act.radicand);
    let inv_two_sqrt_a = (&QuadElem::sqrt(&act.radicand) + &QuadElem::sqrt(&act.radicand))
        .inverse()
        .expect("sqrt a != 0");
    let x = act.var("x");
    let y = act.var("y");
    let sx = &act.bindings[&Var::new("x")];
    let sy = &act.bindings[&Var::new("y")];
    GeneratorSet {
        t1: (&x + sx).scale(&half),
        t2: (&x - sx).scale(&inv_two_sqrt_a),
        t3: (&y + sy).scale(&half),
        t4: (&y - sy).scale(&inv_two_sqrt_a),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not a failure: records a degenerate coefficient or similar.
    Flag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub check: String,
    pub status: CheckStatus,
    pub detail: String,
}

/// Ordered list of checks; serializes as a JSON array.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Report(Vec<Check>);

impl Report {
    pub fn checks(&self) -> &[Check] {
        &self.0
    }

    pub fn all_passed(&self) -> bool {
        self.0.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.0.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn extend(&mut self, other: Report) {
        self.0.extend(other.0);
    }

    fn identity<C: crate::arith::Coeff>(
        &mut self,
        name: &str,
        claim: &str,
        lhs: Result<crate::arith::RatFunc<C>>,
        rhs: Result<crate::arith::RatFunc<C>>,
    ) {
        let (status, detail) = match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                let diff = &l - &r;
                if diff.is_zero() {
                    (CheckStatus::Pass, claim.to_string())
                } else {
                    (CheckStatus::Fail, format!("{claim}; lhs - rhs = {diff}"))
                }
            }
            (Err(e), _) | (_, Err(e)) => (CheckStatus::Fail, format!("{claim}; {e}")),
        };
        self.0.push(Check {
            check: name.to_string(),
            status,
            detail,
        });
    }

    fn flag(&mut self, name: &str, detail: String) {
        self.0.push(Check {
            check: name.to_string(),
            status: CheckStatus::Flag,
            detail,
        });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Flag => "FLAG",
            };
            writeln!(f, "{tag} {:<28} {}", c.check, c.detail)?;
        }
        Ok(())
    }
}

/// `sigma^2 = id`, `sigma(t_i) = t_i`, both defining relations, and
/// `x = t1 + sqrt(a) t2`, `y = t3 + sqrt(a) t4` (so the `t_i` generate `L`
/// over `Q(sqrt a)`).
pub fn verify_involution_and_invariance(spec: &SurfaceSpec) -> Report {
    let act = SigmaAction::new(spec);
    let mut r = Report::default();
    let twice = |f: &QuadRatFunc| apply_sigma(f, &act).and_then(|g| apply_sigma(&g, &act));
    let x = act.var("x");
    let y = act.var("y");
    r.identity("sigma-involution-x", "sigma(sigma(x)) = x", twice(&x), Ok(x.clone()));
    r.identity("sigma-involution-y", "sigma(sigma(y)) = y", twice(&y), Ok(y.clone()));
    r.identity(
        "sigma-sqrt-a",
        "sigma(sqrt a) = -sqrt a",
        apply_sigma(&act.sqrt_a(), &act),
        Ok(act.sqrt_a().neg()),
    );

    let g = build_with(&act);
    for (i, t) in g.as_array().into_iter().enumerate() {
        r.identity(
            &format!("sigma-fixes-t{}", i + 1),
            &format!("sigma(t{0}) = t{0}", i + 1),
            apply_sigma(t, &act),
            Ok(t.clone()),
        );
    }
    let a = act.k(spec.a());
    r.identity(
        "relation-t1-t2",
        "t1^2 - a t2^2 = b",
        Ok(&g.t1.square() - &(&a * &g.t2.square())),
        Ok(act.k(spec.b())),
    );
    r.identity(
        "relation-t3-t4",
        "t3^2 - a t4^2 = 2c t1 + d",
        Ok(&g.t3.square() - &(&a * &g.t4.square())),
        Ok((&act.k(&(spec.c() + spec.c())) * &g.t1).add_constant(&QuadElem::rational(
            spec.d().clone(),
            &act.radicand,
        ))),
    );
    let s = act.sqrt_a();
    r.identity("generates-x", "t1 + sqrt(a) t2 = x", Ok(&g.t1 + &(&s * &g.t2)), Ok(x));
    r.identity("generates-y", "t3 + sqrt(a) t4 = y", Ok(&g.t3 + &(&s * &g.t4)), Ok(y));
    r
}

/// Both forms of the two-square composition identity with `a, x1, x2, y1,
/// y2` all indeterminates over Q.
pub fn verify_composition_identity() -> Report {
    let v = |n: &str| QRatFunc::var(Var::new(n), &());
    let (a, x1, x2, y1, y2) = (v("a"), v("x1"), v("x2"), v("y1"), v("y2"));
    let nx = &x1.square() - &(&a * &x2.square());
    let ny = &y1.square() - &(&a * &y2.square());
    let mut r = Report::default();
    let p = &(&x1 * &y1) + &(&(&a * &x2) * &y2);
    let q = &(&x1 * &y2) + &(&x2 * &y1);
    r.identity(
        "composition-product",
        "(x1^2 - a x2^2)(y1^2 - a y2^2) = (x1 y1 + a x2 y2)^2 - a (x1 y2 + x2 y1)^2",
        Ok(&nx * &ny),
        Ok(&p.square() - &(&a * &q.square())),
    );
    let p = (&(&x1 * &y1) - &(&(&a * &x2) * &y2)).div(&ny);
    let q = (&(&x1 * &y2) - &(&x2 * &y1)).div(&ny);
    let rhs = p.and_then(|p| q.map(|q| &p.square() - &(&a * &q.square())));
    r.identity(
        "composition-quotient",
        "(x1^2 - a x2^2)/(y1^2 - a y2^2) = ((x1 y1 - a x2 y2)/N)^2 - a ((x1 y2 - x2 y1)/N)^2",
        nx.div(&ny),
        rhs,
    );
    r
}

/// Checks the change of variables for `b` a nonsquare and a solution
/// `alpha^2 - a beta^2 = b`:
///
/// * `t0 = (t2 - beta)/(t1 + alpha)` recovers `t1, t2` through `1 - a t0^2`;
/// * `(t3^2 - a t4^2)(1 - a t0^2) = G(t0)` and, with `t5 = t3 + a t0 t4`,
///   `t6 = t0 t3 + t4`, the left side is `t5^2 - a t6^2`;
/// * for `s = x/(alpha - sqrt(a) beta)`, `z = sqrt(a)(1 - s)/(1 + s)`,
///   `u = y(1 - z^2/a)` and `w = u/(1 - z/sqrt a)`: `(z, u)` generate `L`,
///   `sigma` fixes `z`, and sends `u -> f(z)/u`, `w -> g(z)/w`.
pub fn verify_proof_chain_nonsquare(
    spec: &SurfaceSpec,
    alpha: &Rational,
    beta: &Rational,
) -> Result<Report> {
    if is_square(spec.b()).is_some() {
        return Err(Error::Precondition(format!("b = {} is a square", spec.b())));
    }
    if &(&alpha.square() - &(spec.a() * &beta.square())) != spec.b() {
        return Err(Error::Precondition(format!(
            "alpha^2 - a beta^2 != b for (alpha, beta) = ({alpha}, {beta})"
        )));
    }
    let act = SigmaAction::new(spec);
    let rad = &act.radicand;
    let g = build_with(&act);
    let k = |r: &Rational| act.k(r);
    let (a, c, d) = (spec.a(), spec.c(), spec.d());
    let (ka, kal, kbe) = (k(a), k(alpha), k(beta));
    let one = QuadRatFunc::one(rad);
    let two = Rational::from(2);
    let mut r = Report::default();

    let t0 = match (&g.t2 - &kbe).div(&(&g.t1 + &kal)) {
        Ok(t) => t,
        Err(e) => {
            r.identity::<QuadElem>("t0-defined", "t1 + alpha != 0", Err(e), Ok(one));
            return Ok(r);
        }
    };
    let at0sq = &ka * &t0.square();
    let den = &one - &at0sq;
    let plus = &one + &at0sq;
    r.identity(
        "t0-recovers-t1",
        "(1 - a t0^2) t1 = alpha (1 + a t0^2) + 2 a beta t0",
        Ok(&den * &g.t1),
        Ok(&(&kal * &plus) + &(&k(&(&(&two * a) * beta)) * &t0)),
    );
    r.identity(
        "t0-recovers-t2",
        "(1 - a t0^2) t2 = beta (1 + a t0^2) + 2 alpha t0",
        Ok(&den * &g.t2),
        Ok(&(&kbe * &plus) + &(&k(&(&two * alpha)) * &t0)),
    );
    let two_c_alpha = &(&two * c) * alpha;
    let g2 = a * &(&two_c_alpha - d);
    let g1 = &(&(&Rational::from(4) * a) * c) * beta;
    let g0 = &two_c_alpha + d;
    let g_t0 = &(&(&k(&g2) * &t0.square()) + &(&k(&g1) * &t0)) + &k(&g0);
    let norm34 = &g.t3.square() - &(&ka * &g.t4.square());
    r.identity(
        "t3-t4-relation-in-t0",
        "(t3^2 - a t4^2)(1 - a t0^2) = a(2c alpha - d) t0^2 + 4ac beta t0 + (2c alpha + d)",
        Ok(&norm34 * &den),
        Ok(g_t0.clone()),
    );
    let t5 = &g.t3 + &(&(&ka * &t0) * &g.t4);
    let t6 = &(&t0 * &g.t3) + &g.t4;
    let norm56 = &t5.square() - &(&ka * &t6.square());
    r.identity(
        "t5-t6-factorization",
        "(t3^2 - a t4^2)(1 - a t0^2) = t5^2 - a t6^2",
        Ok(&norm34 * &den),
        Ok(norm56),
    );

    // second chain, in L = Q(sqrt a)(x, y)
    let sq = act.sqrt_a();
    let x = act.var("x");
    let y = act.var("y");
    let base = &kal - &(&sq * &kbe);
    let s = x.div(&base)?;
    let z = (&sq * &(&one - &s)).div(&(&one + &s))?;
    let z2a = z.square().div(&ka)?;
    let u = &y * &(&one - &z2a);
    let w = u.div(&(&one - &z.div(&sq)?))?;

    // inverse: s = (sqrt a - z)/(sqrt a + z), x = base s, y = u/(1 - z^2/a)
    let (vz, vu) = (act.var("z"), act.var("u"));
    let s_back = (&sq - &vz).div(&(&sq + &vz))?;
    let x_back = &base * &s_back;
    let y_back = vu.div(&(&one - &vz.square().div(&ka)?))?;
    let to_xy = BTreeMap::from([(Var::new("z"), z.clone()), (Var::new("u"), u.clone())]);
    let to_zu = BTreeMap::from([(Var::new("x"), x_back.clone()), (Var::new("y"), y_back.clone())]);
    r.identity("z-u-inverse-x", "x(z(x, y), u(x, y)) = x", x_back.substitute(&to_xy), Ok(x.clone()));
    r.identity("z-u-inverse-y", "y(z(x, y), u(x, y)) = y", y_back.substitute(&to_xy), Ok(y.clone()));
    r.identity("z-u-forward-z", "z(x(z, u), y(z, u)) = z", z.substitute(&to_zu), Ok(vz.clone()));
    r.identity("z-u-forward-u", "u(x(z, u), y(z, u)) = u", u.substitute(&to_zu), Ok(vu));

    r.identity("sigma-fixes-z", "sigma(z) = z", apply_sigma(&z, &act), Ok(z.clone()));
    let kc = k(c);
    let kd = k(d);
    let one_m = &one - &z2a;
    let z4a2 = z2a.square();
    let f = &(&(&k(&two_c_alpha) * &(&one - &z4a2)) + &(&kd * &one_m.square()))
        + &(&(&(&k(&Rational::from(4)) * &kc) * &kbe) * &(&z * &one_m));
    r.identity(
        "sigma-u",
        "sigma(u) = f(z)/u, f = 2c alpha (1 - z^4/a^2) + d (1 - z^2/a)^2 + 4c beta z (1 - z^2/a)",
        apply_sigma(&u, &act),
        f.div(&u),
    );
    let g_grouped = &(&(&k(&two_c_alpha) * &(&one + &z2a)) + &(&kd * &one_m))
        + &(&k(&(&(&Rational::from(4) * c) * beta)) * &z);
    let g_expanded = &(&(&k(&(&(&two_c_alpha - d) / a)) * &z.square())
        + &(&k(&(&(&Rational::from(4) * c) * beta)) * &z))
        + &k(&g0);
    r.identity(
        "g-expanded",
        "2c alpha (1 + z^2/a) + d (1 - z^2/a) + 4c beta z = ((2c alpha - d)/a) z^2 + 4c beta z + (2c alpha + d)",
        Ok(g_grouped),
        Ok(g_expanded.clone()),
    );
    r.identity(
        "sigma-w",
        "sigma(w) = g(z)/w",
        apply_sigma(&w, &act),
        g_expanded.div(&w),
    );
    Ok(r)
}

/// Checks the change of variables for `b = beta^2`:
/// `u = sqrt(a)(beta - x)/(beta + x)`, `v = (sqrt(a) - u) y` generate `L`,
/// `sigma` fixes `u` and sends `v -> ((d - 2c beta) u^2 - (ad + 2ac beta))/v`.
/// A vanishing `d - 2c beta` is flagged.
pub fn verify_proof_chain_square(spec: &SurfaceSpec, beta: &Rational) -> Result<Report> {
    if beta.is_zero() || &beta.square() != spec.b() {
        return Err(Error::Precondition(format!("b != beta^2 for beta = {beta}")));
    }
    let act = SigmaAction::new(spec);
    let k = |r: &Rational| act.k(r);
    let (a, c, d) = (spec.a(), spec.c(), spec.d());
    let sq = act.sqrt_a();
    let kbe = k(beta);
    let x = act.var("x");
    let y = act.var("y");
    let mut r = Report::default();

    let u = (&sq * &(&kbe - &x)).div(&(&kbe + &x))?;
    let v = &(&sq - &u) * &y;
    let (vu, vv) = (act.var("u"), act.var("v"));
    // x = beta (sqrt a - u)/(sqrt a + u), y = v/(sqrt a - u)
    let x_back = (&kbe * &(&sq - &vu)).div(&(&sq + &vu))?;
    let y_back = vv.div(&(&sq - &vu))?;
    let to_xy = BTreeMap::from([(Var::new("u"), u.clone()), (Var::new("v"), v.clone())]);
    let to_uv = BTreeMap::from([(Var::new("x"), x_back.clone()), (Var::new("y"), y_back.clone())]);
    r.identity("u-v-inverse-x", "x(u(x, y), v(x, y)) = x", x_back.substitute(&to_xy), Ok(x.clone()));
    r.identity("u-v-inverse-y", "y(u(x, y), v(x, y)) = y", y_back.substitute(&to_xy), Ok(y));
    r.identity("u-v-forward-u", "u(x(u, v), y(u, v)) = u", u.substitute(&to_uv), Ok(vu));
    r.identity("u-v-forward-v", "v(x(u, v), y(u, v)) = v", v.substitute(&to_uv), Ok(vv));

    r.identity("sigma-fixes-u", "sigma(u) = u", apply_sigma(&u, &act), Ok(u.clone()));
    let two_c_beta = &(&Rational::from(2) * c) * beta;
    let lead = d - &two_c_beta;
    let constant = &(a * d) + &(a * &two_c_beta);
    let num = &(&k(&lead) * &u.square()) - &k(&constant);
    r.identity(
        "sigma-v",
        "sigma(v) = ((d - 2c beta) u^2 - (ad + 2ac beta))/v",
        apply_sigma(&v, &act),
        num.div(&v),
    );
    if lead.is_zero() {
        r.flag(
            "degenerate-coefficient",
            format!("d - 2c beta = 0; sigma(v) = -{constant}/v"),
        );
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: i64, b: i64, c: i64, d: i64) -> SurfaceSpec {
        SurfaceSpec::from_ints(a, b, c, d).unwrap()
    }

    #[test]
    fn t1_closed_form() {
        let g = build_generators(&spec(2, 3, 1, 1));
        assert_eq!(g.t1.to_string(), "(1/2*x^2 + 3/2)/x");
    }

    #[test]
    fn sigma_on_basic_elements() {
        let act = SigmaAction::new(&spec(2, 3, 1, 1));
        let x = act.var("x");
        let inv = &x + &act.k(&Rational::from(3)).div(&x).unwrap();
        assert_eq!(apply_sigma(&inv, &act).unwrap(), inv);
        let y = act.var("y");
        assert_eq!(apply_sigma(&y, &act).unwrap(), act.bindings[&Var::new("y")]);
    }

    #[test]
    fn involution_reports() {
        for s in [spec(2, 3, 1, 1), spec(5, -1, 0, 7), spec(-3, 7, 2, 0)] {
            let r = verify_involution_and_invariance(&s);
            assert!(r.all_passed(), "{s}\n{r}");
            assert_eq!(r.checks().len(), 11);
        }
    }

    #[test]
    fn composition_identity() {
        assert!(verify_composition_identity().all_passed());
    }

    #[test]
    fn nonsquare_chain() {
        let r = verify_proof_chain_nonsquare(&spec(2, 2, 3, 3), &2.into(), &1.into()).unwrap();
        assert!(r.all_passed(), "{r}");
        let r = verify_proof_chain_nonsquare(&spec(3, 6, 1, 0), &3.into(), &1.into()).unwrap();
        assert!(r.all_passed(), "{r}");
        assert!(matches!(
            verify_proof_chain_nonsquare(&spec(2, 2, 3, 3), &1.into(), &1.into()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn square_chain() {
        let r = verify_proof_chain_square(&spec(3, 4, 7, 28), &2.into()).unwrap();
        assert!(r.all_passed(), "{r}");
        assert!(r.checks().iter().any(|c| c.status == CheckStatus::Flag));
        let r = verify_proof_chain_square(&spec(2, 1, 1, 1), &1.into()).unwrap();
        assert!(r.all_passed(), "{r}");
        assert!(r.checks().iter().all(|c| c.status == CheckStatus::Pass));
        assert!(verify_proof_chain_square(&spec(2, 2, 1, 1), &1.into()).is_err());
    }
}
