//! Rational functions in canonical form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gcd::poly_gcd;
use super::poly::{Coeff, Monomial, MultiPoly};
use super::quad::QuadElem;
use super::rational::Rational;
use super::var::Var;
use crate::error::{Error, Result};

/// `numer / denom` with the two parts coprime and `denom` monic under the
/// graded-lex order. Canonical forms are unique, so structural equality is
/// equality of rational functions.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc<C: Coeff> {
    numer: MultiPoly<C>,
    denom: MultiPoly<C>,
}

pub type QRatFunc = RatFunc<Rational>;
pub type QuadRatFunc = RatFunc<QuadElem>;

impl<C: Coeff> RatFunc<C> {
    pub fn new(numer: MultiPoly<C>, denom: MultiPoly<C>) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(numer, denom))
    }

    fn normalized(numer: MultiPoly<C>, denom: MultiPoly<C>) -> Self {
        let ctx = denom.ctx().clone();
        if numer.is_zero() {
            return RatFunc {
                numer,
                denom: MultiPoly::one(&ctx),
            };
        }
        let (numer, denom) = if denom.is_constant() {
            (numer, denom)
        } else {
            let g = poly_gcd(&numer, &denom);
            if g.is_one() {
                (numer, denom)
            } else {
                (
                    numer.div_exact(&g).expect("gcd divides numerator"),
                    denom.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        Self::monic_denominator(numer, denom)
    }

    pub fn from_poly(p: MultiPoly<C>) -> Self {
        let ctx = p.ctx().clone();
        RatFunc {
            numer: p,
            denom: MultiPoly::one(&ctx),
        }
    }

    pub fn zero(ctx: &C::Ctx) -> Self {
        Self::from_poly(MultiPoly::zero(ctx))
    }

    pub fn one(ctx: &C::Ctx) -> Self {
        Self::from_poly(MultiPoly::one(ctx))
    }

    pub fn constant(c: C) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn from_rational(r: Rational, ctx: &C::Ctx) -> Self {
        Self::from_poly(MultiPoly::from_rational(r, ctx))
    }

    pub fn var(v: Var, ctx: &C::Ctx) -> Self {
        Self::from_poly(MultiPoly::var(v, ctx))
    }

    pub fn numer(&self) -> &MultiPoly<C> {
        &self.numer
    }

    pub fn denom(&self) -> &MultiPoly<C> {
        &self.denom
    }

    pub fn ctx(&self) -> &C::Ctx {
        self.denom.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.numer.is_constant() && self.denom.is_constant()
    }

    /// The value of a constant function.
    pub fn as_constant(&self) -> Option<C> {
        if self.is_constant() {
            Some(self.numer.constant_term())
        } else {
            None
        }
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut vs = self.numer.vars();
        vs.extend(self.denom.vars());
        vs
    }

    /// Re-runs normalization; a no-op on values built through this API.
    pub fn normalize(&self) -> Self {
        Self::normalized(self.numer.clone(), self.denom.clone())
    }

    /// Henrici's addition: with reduced inputs only `gcd(b, d)` and a gcd
    /// against it are needed, and neither when a denominator is constant.
    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, c, d) = (&self.numer, &self.denom, &rhs.numer, &rhs.denom);
        if b == d {
            return Self::normalized(a + c, b.clone());
        }
        // denominators are monic, so a constant one is 1
        if d.is_one() {
            return Self::monic_denominator(a + &(c * b), b.clone());
        }
        if b.is_one() {
            return Self::monic_denominator(&(a * d) + c, d.clone());
        }
        let g = poly_gcd(b, d);
        if g.is_one() {
            return Self::monic_denominator(&(a * d) + &(c * b), b * d);
        }
        let b1 = b.div_exact(&g).expect("gcd divides");
        let d1 = d.div_exact(&g).expect("gcd divides");
        let numer = &(a * &d1) + &(c * &b1);
        if numer.is_zero() {
            return Self::zero(self.ctx());
        }
        let h = poly_gcd(&numer, &g);
        if h.is_one() {
            return Self::monic_denominator(numer, &b1 * d);
        }
        let numer = numer.div_exact(&h).expect("gcd divides");
        let g1 = g.div_exact(&h).expect("gcd divides");
        Self::monic_denominator(numer, &(&b1 * &d1) * &g1)
    }

    /// Scales a coprime pair so the denominator is monic.
    fn monic_denominator(numer: MultiPoly<C>, denom: MultiPoly<C>) -> Self {
        let lc = denom.leading_coeff().expect("nonzero denominator").clone();
        if lc.is_one() {
            return RatFunc { numer, denom };
        }
        let inv = lc.inverse().expect("nonzero leading coefficient");
        RatFunc {
            numer: numer.scale(&inv),
            denom: denom.scale(&inv),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            numer: -&self.numer,
            denom: self.denom.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.ctx());
        }
        // Cross-cancel first so the products stay small.
        let g1 = poly_gcd(&self.numer, &rhs.denom);
        let g2 = poly_gcd(&rhs.numer, &self.denom);
        let n1 = self.numer.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.denom.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.numer.div_exact(&g2).expect("gcd divides");
        let d1 = self.denom.div_exact(&g2).expect("gcd divides");
        Self::monic_denominator(&n1 * &n2, &d1 * &d2)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.ctx());
        }
        RatFunc {
            numer: self.numer.scale(c),
            denom: self.denom.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::monic_denominator(self.denom.clone(), self.numer.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, exp: i32) -> Result<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let e = exp.unsigned_abs();
        Ok(RatFunc {
            numer: base.numer.pow(e),
            denom: base.denom.pow(e),
        })
    }

    pub fn square(&self) -> Self {
        RatFunc {
            numer: self.numer.pow(2),
            denom: self.denom.pow(2),
        }
    }

    pub fn add_constant(&self, c: &C) -> Self {
        self.add(&Self::constant(c.clone()))
    }

    /// Applies `f` to every coefficient (e.g. Galois conjugation).
    pub fn map_coeffs<D: Coeff>(&self, ctx: &D::Ctx, f: impl Fn(&C) -> D) -> RatFunc<D> {
        RatFunc::normalized(self.numer.map_coeffs(ctx, &f), self.denom.map_coeffs(ctx, &f))
    }

    /// Composes with `bindings`; variables without a binding stay as they are.
    pub fn substitute(&self, bindings: &BTreeMap<Var, RatFunc<C>>) -> Result<Self> {
        let (nn, nd) = eval_poly(&self.numer, bindings);
        let (dn, dd) = eval_poly(&self.denom, bindings);
        // (nn/nd) / (dn/dd)
        let denom = &dn * &nd;
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(&nn * &dd, denom))
    }

    /// Evaluates at constants for every variable; `None` on a pole or an unbound variable.
    pub fn eval(&self, values: &BTreeMap<Var, C>) -> Option<C> {
        let n = self.numer.eval(values)?;
        let d = self.denom.eval(values)?;
        Some(n.times(&d.inverse()?))
    }
}

/// Substitutes into a polynomial over a common denominator so that only
/// one gcd is needed at the end: returns `(numerator, denominator)`.
fn eval_poly<C: Coeff>(
    p: &MultiPoly<C>,
    bindings: &BTreeMap<Var, RatFunc<C>>,
) -> (MultiPoly<C>, MultiPoly<C>) {
    let ctx = p.ctx();
    let vars: Vec<Var> = p
        .vars()
        .into_iter()
        .filter(|v| bindings.contains_key(v))
        .collect();
    let degrees: Vec<u32> = vars.iter().map(|&v| p.degree_in(v)).collect();
    let powers = |f: &MultiPoly<C>, max: u32| {
        let mut out = Vec::with_capacity(max as usize + 1);
        out.push(MultiPoly::one(ctx));
        for k in 1..=max as usize {
            let next = &out[k - 1] * f;
            out.push(next);
        }
        out
    };
    let num_pows: Vec<Vec<MultiPoly<C>>> = vars
        .iter()
        .zip(&degrees)
        .map(|(v, &e)| powers(bindings[v].numer(), e))
        .collect();
    let den_pows: Vec<Vec<MultiPoly<C>>> = vars
        .iter()
        .zip(&degrees)
        .map(|(v, &e)| powers(bindings[v].denom(), e))
        .collect();

    let mut total = MultiPoly::zero(ctx);
    for (m, c) in p.terms() {
        let mut rest = Vec::new();
        let mut term = MultiPoly::constant(c.clone());
        let mut used = vec![0u32; vars.len()];
        for &(v, e) in m.pairs() {
            match vars.iter().position(|&w| w == v) {
                Some(i) => used[i] = e,
                None => rest.push((v, e)),
            }
        }
        for (i, &e) in used.iter().enumerate() {
            if e > 0 {
                term = &term * &num_pows[i][e as usize];
            }
            let pad = degrees[i] - e;
            if pad > 0 {
                term = &term * &den_pows[i][pad as usize];
            }
        }
        if !rest.is_empty() {
            term = term.mul_monomial(&Monomial::from_pairs(rest));
        }
        total = &total + &term;
    }
    let mut denom = MultiPoly::one(ctx);
    for (i, &e) in degrees.iter().enumerate() {
        if e > 0 {
            denom = &denom * &den_pows[i][e as usize];
        }
    }
    (total, denom)
}

/// Composes `f` with `bindings`.
pub fn ratfunc_substitute<C: Coeff>(
    f: &RatFunc<C>,
    bindings: &BTreeMap<Var, RatFunc<C>>,
) -> Result<RatFunc<C>> {
    f.substitute(bindings)
}

impl<C: Coeff> fmt::Display for RatFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &MultiPoly<C>| {
            let s = p.to_string();
            if p.num_terms() > 1 || s.contains('/') {
                format!("({s})")
            } else {
                s
            }
        };
        if self.denom.is_one() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", wrap(&self.numer), wrap(&self.denom))
        }
    }
}

impl<C: Coeff> Add for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn add(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        RatFunc::add(self, rhs)
    }
}

impl<C: Coeff> Sub for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn sub(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        RatFunc::sub(self, rhs)
    }
}

impl<C: Coeff> Mul for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn mul(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        RatFunc::mul(self, rhs)
    }
}

impl<C: Coeff> Neg for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn neg(self) -> RatFunc<C> {
        RatFunc::neg(self)
    }
}

impl<C: Coeff> fmt::Debug for RatFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
