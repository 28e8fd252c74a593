//! Multivariate polynomial gcd over a field by content extraction and
//! primitive polynomial remainder sequences.
//!
//! A polynomial is viewed as univariate in its highest-priority variable
//! with coefficients in the remaining variables; contents are computed
//! recursively, so the coefficient swell of plain pseudo-remainders is
//! removed at every step.

use std::collections::BTreeSet;

use super::poly::{Coeff, Monomial, MultiPoly};
use super::var::Var;

/// Monic gcd of `a` and `b`; `gcd(0, 0) = 0`.
pub fn poly_gcd<C: Coeff>(a: &MultiPoly<C>, b: &MultiPoly<C>) -> MultiPoly<C> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    gcd_nonzero(a, b).monic()
}

fn gcd_nonzero<C: Coeff>(a: &MultiPoly<C>, b: &MultiPoly<C>) -> MultiPoly<C> {
    let ctx = a.ctx();
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(ctx);
    }
    if a == b {
        return a.clone();
    }

    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = ma.gcd(&mb);
    let mut a = strip_monomial(a, &ma);
    let mut b = strip_monomial(b, &mb);
    let mono_poly = MultiPoly::monomial(C::one(ctx), mono, ctx);

    // A cheap exact-division probe catches the common "one divides the other" case.
    if a.div_exact(&b).is_some() {
        return &b * &mono_poly;
    }
    if b.div_exact(&a).is_some() {
        return &a * &mono_poly;
    }

    // Variables private to one side cannot occur in a common factor.
    loop {
        let va = a.vars();
        let vb = b.vars();
        let only_a: Vec<Var> = va.difference(&vb).copied().collect();
        let only_b: Vec<Var> = vb.difference(&va).copied().collect();
        if only_a.is_empty() && only_b.is_empty() {
            break;
        }
        for v in only_a {
            a = content_in(&a, v);
        }
        for v in only_b {
            b = content_in(&b, v);
        }
        if a.is_constant() || b.is_constant() {
            return mono_poly;
        }
    }

    let common: BTreeSet<Var> = a.vars();
    let Some(&v) = common.iter().next() else {
        return mono_poly;
    };

    let ca = content_in(&a, v);
    let cb = content_in(&b, v);
    let c = gcd_nonzero(&ca, &cb);
    let pa = divide_coefficients(&a, &ca);
    let pb = divide_coefficients(&b, &cb);
    let g = primitive_prs(pa, pb, v);
    &(&g * &c) * &mono_poly
}

fn strip_monomial<C: Coeff>(p: &MultiPoly<C>, m: &Monomial) -> MultiPoly<C> {
    if m.is_one() {
        p.clone()
    } else {
        p.div_exact(&MultiPoly::monomial(C::one(p.ctx()), m.clone(), p.ctx()))
            .expect("monomial content divides")
    }
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in<C: Coeff>(p: &MultiPoly<C>, v: Var) -> MultiPoly<C> {
    let mut coeffs: Vec<MultiPoly<C>> = p
        .to_univariate(v)
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    // Fewer terms first keeps the running gcd small.
    coeffs.sort_by_key(|c| c.num_terms());
    let mut it = coeffs.into_iter();
    let Some(mut g) = it.next() else {
        return MultiPoly::zero(p.ctx());
    };
    for c in it {
        if g.is_constant() {
            break;
        }
        g = gcd_nonzero(&g, &c);
    }
    if g.is_constant() {
        MultiPoly::one(p.ctx())
    } else {
        g.unit_normal()
    }
}

fn divide_coefficients<C: Coeff>(p: &MultiPoly<C>, content: &MultiPoly<C>) -> MultiPoly<C> {
    if content.is_one() {
        return p.clone();
    }
    p.div_exact(content).expect("content divides the polynomial")
}

/// Primitive part with respect to `v`, scaled to a unit normal form so
/// that scalar factors do not accumulate along a remainder sequence.
fn primitive_part<C: Coeff>(p: &MultiPoly<C>, v: Var) -> MultiPoly<C> {
    let c = content_in(p, v);
    divide_coefficients(p, &c).unit_normal()
}

/// Pseudo-remainder of `a` by `b` with respect to `v`.
fn pseudo_rem<C: Coeff>(a: &MultiPoly<C>, b: &MultiPoly<C>, v: Var) -> MultiPoly<C> {
    let db = b.degree_in(v);
    let lb = b.coeff_in(v, db);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coeff_in(v, dr);
        let shifted = b.mul_monomial(&Monomial::var(v, dr - db));
        r = &(&r * &lb) - &(&lr * &shifted);
    }
    r
}

/// Gcd of two polynomials that are primitive with respect to `v`.
fn primitive_prs<C: Coeff>(a: MultiPoly<C>, b: MultiPoly<C>, v: Var) -> MultiPoly<C> {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        if b.degree_in(v) == 0 {
            return MultiPoly::one(a.ctx());
        }
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        a = b;
        b = primitive_part(&r, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::quad::{QuadElem, Radicand};
    use crate::arith::rational::Rational;

    type P = MultiPoly<Rational>;

    fn v(name: &str) -> P {
        MultiPoly::var(Var::new(name), &())
    }
    fn k(n: i64) -> P {
        MultiPoly::from_rational(Rational::from(n), &())
    }

    #[test]
    fn univariate_gcd() {
        let x = v("x");
        let a = &(&x - &k(1)) * &(&x + &k(2));
        let b = &(&x - &k(1)) * &(&x - &k(5));
        assert_eq!(poly_gcd(&a, &b), &x - &k(1));
        assert!(poly_gcd(&a, &(&x - &k(7))).is_one());
    }

    #[test]
    fn bivariate_gcd() {
        let (x, y) = (v("x"), v("y"));
        let common = &(&(&x * &y) + &k(3)) * &(&x - &y);
        let a = &common * &(&(&x * &x) + &y);
        let b = &common * &(&(&y * &y) - &x);
        let g = poly_gcd(&a, &b);
        assert_eq!(g, common.monic());
    }

    #[test]
    fn gcd_with_private_variables() {
        let (x, y, z) = (v("x"), v("y"), v("z"));
        let a = &(&x + &k(1)) * &(&y + &z);
        let b = &(&x + &k(1)) * &(&x - &k(3));
        assert_eq!(poly_gcd(&a, &b), &x + &k(1));
    }

    #[test]
    fn monomial_factors() {
        let (x, y) = (v("x"), v("y"));
        let a = &(&x * &x) * &(&y + &k(1));
        let b = &(&x * &y) * &(&y + &k(1));
        assert_eq!(poly_gcd(&a, &b), &x * &(&y + &k(1)));
    }

    #[test]
    fn gcd_over_quadratic_extension() {
        let r = Radicand::new(Rational::from(2)).unwrap();
        let x: MultiPoly<QuadElem> = MultiPoly::var(Var::new("x"), &r);
        let sqrt2 = MultiPoly::constant(QuadElem::sqrt(&r));
        // x^2 - 2 = (x - sqrt2)(x + sqrt2)
        let a = &(&x * &x) - &MultiPoly::from_rational(Rational::from(2), &r);
        let b = &(&x - &sqrt2) * &(&x + &MultiPoly::from_rational(Rational::from(5), &r));
        assert_eq!(poly_gcd(&a, &b), &x - &sqrt2);
    }
}
