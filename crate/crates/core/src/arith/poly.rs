//! Sparse multivariate polynomials over Q or Q(sqrt(a)).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::quad::{QuadElem, Radicand};
use super::rational::{common_denominator, Rational};
use super::var::Var;

/// Coefficient field of a polynomial. `Ctx` carries whatever is needed to
/// build constants (nothing for Q, the radicand for Q(sqrt(a))).
pub trait Coeff: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync {
    type Ctx: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_rational(r: Rational, ctx: &Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Multiplicative inverse; `None` only for zero.
    fn inverse(&self) -> Option<Self>;
    /// Whether the term should be printed with a leading minus sign.
    fn prints_negative(&self) -> bool;
    /// A fixed scalar multiple of `p` chosen to keep coefficient arithmetic
    /// cheap; two associates map to the same polynomial.
    fn unit_normal(p: &MultiPoly<Self>) -> MultiPoly<Self> {
        p.monic()
    }
}

impl Coeff for Rational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        Rational::zero()
    }
    fn one(_: &()) -> Self {
        Rational::one()
    }
    fn from_rational(r: Rational, _: &()) -> Self {
        r
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Rational::is_one(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.recip().ok()
    }
    fn prints_negative(&self) -> bool {
        self.is_negative()
    }
    /// Integer coefficients with gcd 1 and a positive leading coefficient.
    fn unit_normal(p: &MultiPoly<Self>) -> MultiPoly<Self> {
        let Some(lc) = p.leading_coeff() else {
            return p.clone();
        };
        let den = common_denominator(p.terms().map(|(_, c)| c));
        let num = p
            .terms()
            .fold(BigInt::zero(), |g, (_, c)| g.gcd(&(c.numer() * (&den / c.denom()))));
        let mut scale = Rational::from(den) / Rational::from(num);
        if lc.is_negative() {
            scale = -scale;
        }
        if scale.is_one() {
            p.clone()
        } else {
            p.scale(&scale)
        }
    }
}

impl Coeff for QuadElem {
    type Ctx = Radicand;

    fn ctx(&self) -> Radicand {
        self.radicand().clone()
    }
    fn zero(ctx: &Radicand) -> Self {
        QuadElem::rational(Rational::zero(), ctx)
    }
    fn one(ctx: &Radicand) -> Self {
        QuadElem::rational(Rational::one(), ctx)
    }
    fn from_rational(r: Rational, ctx: &Radicand) -> Self {
        QuadElem::rational(r, ctx)
    }
    fn is_zero(&self) -> bool {
        QuadElem::is_zero(self)
    }
    fn is_one(&self) -> bool {
        self.coef().is_zero() && self.base().is_one()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        QuadElem::inverse(self).ok()
    }
    fn prints_negative(&self) -> bool {
        if self.coef().is_zero() {
            self.base().is_negative()
        } else {
            self.base().is_zero() && self.coef().is_negative()
        }
    }
}

/// A power product, stored sparsely as `(variable, exponent)` pairs sorted
/// by variable with no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map_or(0, |&(_, e)| e)
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (va, ea) = self.0[i];
            let (vb, eb) = other.0[j];
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push((va, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((vb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when every exponent of `other` is dominated.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for &(v, e) in &self.0 {
            let f = other.exponent(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Removes variable `v`, returning its exponent and the rest.
    pub fn split_off(&self, v: Var) -> (u32, Monomial) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut exp = 0;
        for &(w, e) in &self.0 {
            if w == v {
                exp = e;
            } else {
                rest.push((w, e));
            }
        }
        (exp, Monomial(rest))
    }
}

/// Graded lexicographic order; among equal total degree the monomial with
/// the larger exponent on the earliest registered variable is larger.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exact multivariate polynomial. Zero coefficients are never stored, so
/// two polynomials are equal iff their term maps are identical.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly<C: Coeff> {
    ctx: C::Ctx,
    terms: BTreeMap<Monomial, C>,
}

pub type QPoly = MultiPoly<Rational>;
pub type QuadPoly = MultiPoly<QuadElem>;

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(ctx: &C::Ctx) -> Self {
        MultiPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &C::Ctx) -> Self {
        Self::constant(C::one(ctx))
    }

    pub fn constant(c: C) -> Self {
        let ctx = c.ctx();
        Self::monomial(c, Monomial::one(), &ctx)
    }

    pub fn from_rational(r: Rational, ctx: &C::Ctx) -> Self {
        Self::constant(C::from_rational(r, ctx))
    }

    pub fn var(v: Var, ctx: &C::Ctx) -> Self {
        Self::monomial(C::one(ctx), Monomial::var(v, 1), ctx)
    }

    pub fn monomial(c: C, m: Monomial, ctx: &C::Ctx) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly {
            ctx: ctx.clone(),
            terms,
        }
    }

    /// Builds a polynomial from terms, merging repeated monomials.
    pub fn from_terms(ctx: &C::Ctx, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().is_one(),
            _ => false,
        }
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.values().next().is_some_and(|c| c.is_one())
    }

    /// The constant term (zero if absent).
    pub fn constant_term(&self) -> C {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(|| C::zero(&self.ctx))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.terms.values().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|&(v, _)| v))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().plus(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_ctx(&self, other: &Self) {
        assert!(
            self.ctx == other.ctx,
            "polynomials over different coefficient fields: {:?} vs {:?}",
            self.ctx,
            other.ctx
        );
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.times(c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn unit_normal(&self) -> Self {
        C::unit_normal(self)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inverse().expect("nonzero leading coefficient")),
        }
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        self.check_ctx(divisor);
        let (lm, lc) = divisor.leading_term()?;
        let lc_inv = lc.inverse()?;
        if divisor.terms.len() == 1 {
            let mut out = BTreeMap::new();
            for (m, c) in &self.terms {
                out.insert(m.div(lm)?, c.times(&lc_inv));
            }
            return Some(MultiPoly {
                ctx: self.ctx.clone(),
                terms: out,
            });
        }
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ctx);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(lm)?;
            let qc = rc.times(&lc_inv);
            let step = divisor.mul_monomial(&qm).scale(&qc);
            rem = &rem - &step;
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |acc, m| acc.gcd(m))
    }

    /// Coefficient of `v^k`, as a polynomial free of `v`.
    pub fn coeff_in(&self, v: Var, k: u32) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e == k {
                out.terms.insert(rest, c.clone());
            }
        }
        out
    }

    /// Coefficients of powers of `v`, indexed by exponent.
    pub fn to_univariate(&self, v: Var) -> Vec<Self> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(&self.ctx); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out[e as usize].terms.insert(rest, c.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, ctx: &D::Ctx, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        MultiPoly::from_terms(ctx, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Evaluates at constant values for every variable.
    pub fn eval(&self, values: &BTreeMap<Var, C>) -> Option<C> {
        let mut acc = C::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                let x = values.get(&v)?;
                for _ in 0..e {
                    t = t.times(x);
                }
            }
            acc = acc.plus(&t);
        }
        Some(acc)
    }
}

impl<C: Coeff> Add<&MultiPoly<C>> for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        self.check_ctx(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub<&MultiPoly<C>> for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        self.check_ctx(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.negate());
        }
        out
    }
}

impl<C: Coeff> Mul<&MultiPoly<C>> for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        self.check_ctx(rhs);
        let mut out = MultiPoly::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.times(cb));
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.negate()))
                .collect(),
        }
    }
}

impl<C: Coeff> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.prints_negative();
            let c = if neg { c.negate() } else { c.clone() };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let plain = c.to_string();
            let needs_paren = plain.contains(['+', '-']) && !plain.starts_with('-');
            match (m.is_one(), c.is_one()) {
                (true, _) if needs_paren => write!(f, "({plain})")?,
                (true, _) => f.write_str(&plain)?,
                (false, true) => write!(f, "{m}")?,
                (false, false) if needs_paren => write!(f, "({plain})*{m}")?,
                (false, false) => write!(f, "{plain}*{m}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> QPoly {
        MultiPoly::var(Var::new("x"), &())
    }
    fn y() -> QPoly {
        MultiPoly::var(Var::new("y"), &())
    }
    fn k(n: i64) -> QPoly {
        MultiPoly::from_rational(Rational::from(n), &())
    }

    #[test]
    fn grlex_order() {
        let vx = Var::new("x");
        let vy = Var::new("y");
        let x2 = Monomial::var(vx, 2);
        let xy = Monomial::from_pairs(vec![(vy, 1), (vx, 1)]);
        let y2 = Monomial::var(vy, 2);
        let x = Monomial::var(vx, 1);
        assert!(x2 > xy && xy > y2 && y2 > x && x > Monomial::one());
    }

    #[test]
    fn ring_operations() {
        let p = &(&x() + &y()) * &(&x() - &y());
        let q = &(&x() * &x()) - &(&y() * &y());
        assert_eq!(p, q);
        assert_eq!(p.to_string(), "x^2 - y^2");
        assert!((&p - &q).is_zero());
        assert_eq!((&x() + &k(1)).pow(3).num_terms(), 4);
    }

    #[test]
    fn exact_division() {
        let a = &(&x() + &y()) * &(&x() - &k(2));
        assert_eq!(a.div_exact(&(&x() - &k(2))), Some(&x() + &y()));
        assert_eq!(a.div_exact(&(&x() - &k(3))), None);
        let m = &(&x() * &x()) * &y();
        assert_eq!(m.div_exact(&x()), Some(&x() * &y()));
    }

    #[test]
    fn univariate_view() {
        let p = &(&(&x() * &x()) * &y()) + &(&x() + &k(3));
        let parts = p.to_univariate(Var::new("x"));
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[2], y());
        assert_eq!(parts[1], k(1));
        assert_eq!(parts[0], k(3));
        assert_eq!(p.coeff_in(Var::new("x"), 2), y());
    }
}
