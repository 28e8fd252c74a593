//! Norm equations `x^2 - a y^2 = b` over Q by Lagrange descent on the
//! ternary form `X^2 - A Y^2 - B Z^2` with squarefree `A`, `B`.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::SolverConfig;
use crate::arith::{is_square, Rational};
use crate::error::{Error, Result};
use crate::factor::factor;
use crate::hilbert::global_hilbert;

/// A solution `(alpha, beta)` of `alpha^2 - a beta^2 = b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConicSolution {
    pub alpha: Rational,
    pub beta: Rational,
}

impl ConicSolution {
    pub fn satisfies(&self, a: &Rational, b: &Rational) -> bool {
        &(self.alpha.square() - a * &self.beta.square()) == b
    }

    /// Multiplies `alpha + beta sqrt(a)` by the norm-one element
    /// `(1 + a s^2 + 2 s sqrt(a)) / (1 - a s^2)`; `a` must be a nonsquare.
    pub fn twist(&self, a: &Rational, s: &Rational) -> ConicSolution {
        let as2 = a * &s.square();
        let den = &Rational::one() - &as2;
        let n1 = &(&Rational::one() + &as2) / &den;
        let n2 = &(s + s) / &den;
        ConicSolution {
            alpha: &self.alpha * &n1 + a * &(&self.beta * &n2),
            beta: &self.alpha * &n2 + &self.beta * &n1,
        }
    }
}

/// Solves `x^2 - a y^2 = b` with the default budgets.
pub fn solve_norm_equation(a: &Rational, b: &Rational) -> Result<Option<ConicSolution>> {
    SolverConfig::default().solve_norm_equation(a, b)
}

/// A nontrivial integer zero of `X^2 - a Y^2 - b Z^2` for nonzero integers
/// `a`, `b`, with the default budgets.
pub fn solve_ternary(a: &BigInt, b: &BigInt) -> Result<Option<[BigInt; 3]>> {
    SolverConfig::default().solve_ternary(a, b)
}

impl SolverConfig {
    /// `None` exactly when `b` is not a norm from Q(sqrt a). Both signs of
    /// the returned `alpha` and `beta` are nonnegative.
    pub fn solve_norm_equation(&self, a: &Rational, b: &Rational) -> Result<Option<ConicSolution>> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroArgument);
        }
        if is_square(a).is_some() {
            return Err(Error::Precondition(format!("{a} is a square")));
        }
        if !global_hilbert(a, b)?.is_empty() {
            return Ok(None);
        }
        let (big_a, ra) = squarefree_split(a)?;
        let (big_b, rb) = squarefree_split(b)?;
        let xyz = match self.ternary_squarefree(&big_a, &big_b) {
            Ok(Some(v)) => Some(v),
            Ok(None) => None,
            Err(Error::Cancelled) => return Err(Error::Cancelled),
            Err(_) => None,
        };
        let xyz = match xyz {
            Some(v) => v,
            None => self
                .exhaustive_ternary(&big_a, &big_b)?
                .ok_or_else(|| Error::SearchBudgetExceeded(format!("x^2 - ({a}) y^2 = {b}")))?,
        };
        let [x, y, z] = xyz;
        let z = Rational::from(z);
        let alpha = (&rb * &Rational::from(x)).checked_div(&z)?.abs();
        let beta = (&rb * &Rational::from(y)).checked_div(&(&z * &ra))?.abs();
        let sol = ConicSolution { alpha, beta };
        if !sol.satisfies(a, b) {
            return Err(Error::VerificationFailed(format!(
                "norm equation solution for ({a}, {b})"
            )));
        }
        Ok(Some(sol))
    }

    pub fn solve_ternary(&self, a: &BigInt, b: &BigInt) -> Result<Option<[BigInt; 3]>> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let fa = factor(a)?;
        let fb = factor(b)?;
        let (sa, r) = (fa.squarefree_part(), fa.square_divisor_root());
        let (sb, s) = (fb.squarefree_part(), fb.square_divisor_root());
        let Some([x, y, z]) = self.ternary_squarefree(&sa, &sb)? else {
            return Ok(None);
        };
        Ok(Some(primitive3([&x * &r * &s, &y * &s, &z * &r])))
    }

    /// Lagrange descent for `X^2 = a Y^2 + b Z^2`, `a` and `b` squarefree.
    fn ternary_squarefree(&self, a: &BigInt, b: &BigInt) -> Result<Option<[BigInt; 3]>> {
        self.cancel.check()?;
        if a.is_one() {
            return Ok(Some([BigInt::one(), BigInt::one(), BigInt::zero()]));
        }
        if b.is_one() {
            return Ok(Some([BigInt::one(), BigInt::zero(), BigInt::one()]));
        }
        if a.abs() > b.abs() {
            return Ok(self
                .ternary_squarefree(b, a)?
                .map(|[x, y, z]| [x, z, y]));
        }
        let minus_one = -BigInt::one();
        if a == &minus_one && b == &minus_one {
            return Ok(None);
        }
        // |a| <= |b| and |b| >= 2 from here on.
        let Some(t) = self.sqrt_mod_squarefree(a, b)? else {
            return Ok(None);
        };
        let m = (&t * &t - a) / b;
        debug_assert!(!m.is_zero());
        let fm = factor(&m)?;
        let b2 = fm.squarefree_part();
        let s = fm.square_divisor_root();
        let Some([x1, y1, z1]) = self.ternary_squarefree(a, &b2)? else {
            return Ok(None);
        };
        let x = &t * &x1 + a * &y1;
        let y = &x1 + &t * &y1;
        let z = &b2 * &s * &z1;
        Ok(Some(primitive3([x, y, z])))
    }

    /// Some `t` with `t^2 = a (mod |b|)` and `|t| <= |b|/2`, for squarefree `b`.
    fn sqrt_mod_squarefree(&self, a: &BigInt, b: &BigInt) -> Result<Option<BigInt>> {
        let n = b.abs();
        let mut t = BigInt::zero();
        let mut modulus = BigInt::one();
        for (p, _) in factor(&n)?.factors {
            let r = match self.sqrt_mod_prime(&a.mod_floor(&p), &p)? {
                Some(r) => r,
                None => return Ok(None),
            };
            t = crt(&t, &modulus, &r, &p);
            modulus *= &p;
        }
        if &t * 2 > n {
            t -= &n;
        }
        Ok(Some(t))
    }

    /// Smaller square root of `a` modulo the prime `p` (Tonelli-Shanks).
    fn sqrt_mod_prime(&self, a: &BigInt, p: &BigInt) -> Result<Option<BigInt>> {
        if a.is_zero() || p == &BigInt::from(2) {
            return Ok(Some(a.clone()));
        }
        let one = BigInt::one();
        let pm1 = p - &one;
        let half = &pm1 >> 1;
        if a.modpow(&half, p) != one {
            return Ok(None);
        }
        let s = pm1.trailing_zeros().unwrap_or(0);
        let q = &pm1 >> s;
        let mut root = if s == 1 {
            a.modpow(&((p + &one) >> 2), p)
        } else {
            let mut z = BigInt::from(2);
            let mut tried = 0u64;
            while z.modpow(&half, p) == one {
                z += 1;
                tried += 1;
                if tried > self.descent_height {
                    return Err(Error::SearchBudgetExceeded(format!("nonresidue mod {p}")));
                }
            }
            let mut m = s;
            let mut c = z.modpow(&q, p);
            let mut t = a.modpow(&q, p);
            let mut r = a.modpow(&((&q + &one) >> 1), p);
            while t != one {
                let mut i = 0u64;
                let mut t2 = t.clone();
                while t2 != one {
                    t2 = &t2 * &t2 % p;
                    i += 1;
                }
                let bexp = BigInt::one() << (m - i - 1);
                let bb = c.modpow(&bexp, p);
                m = i;
                c = &bb * &bb % p;
                t = &t * &c % p;
                r = &r * &bb % p;
            }
            r
        };
        let other = p - &root;
        if other < root {
            root = other;
        }
        Ok(Some(root))
    }

    /// Height-ordered search for `X^2 = a Y^2 + b Z^2` with `Z > 0`.
    fn exhaustive_ternary(&self, a: &BigInt, b: &BigInt) -> Result<Option<[BigInt; 3]>> {
        let (Some(a), Some(b)) = (a.to_i64(), b.to_i64()) else {
            return Ok(None);
        };
        let (a, b) = (a as i128, b as i128);
        let h = self.fallback_height as i128;
        for height in 1..=h {
            self.cancel.check()?;
            let mut candidates = Vec::new();
            for y in -height..=height {
                for z in 1..=height {
                    if y.abs() != height && z != height {
                        continue;
                    }
                    let v = a * y * y + b * z * z;
                    if v < 0 {
                        continue;
                    }
                    if let Some(x) = isqrt_i128(v) {
                        candidates.push([x, y, z]);
                    }
                }
            }
            if let Some(v) = candidates.into_iter().next() {
                return Ok(Some(v.map(BigInt::from)));
            }
        }
        Ok(None)
    }
}

/// `a = big_a * r^2` with `big_a` a squarefree integer and `r` rational.
fn squarefree_split(a: &Rational) -> Result<(BigInt, Rational)> {
    let f = factor(&a.square_class_integer())?;
    let r = Rational::new(f.square_divisor_root(), a.denom().clone())?;
    Ok((f.squarefree_part(), r))
}

fn crt(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> BigInt {
    // m1, m2 coprime
    let e = m1.extended_gcd(m2);
    let m = m1 * m2;
    let diff = (r2 - r1).mod_floor(m2);
    (r1 + m1 * ((diff * e.x).mod_floor(m2))).mod_floor(&m)
}

fn primitive3([x, y, z]: [BigInt; 3]) -> [BigInt; 3] {
    let g = x.gcd(&y).gcd(&z);
    if g.is_zero() || g.is_one() {
        return [x, y, z];
    }
    [x / &g, y / &g, z / &g]
}

fn isqrt_i128(v: i128) -> Option<i128> {
    const SQ64: u64 = {
        let mut mask = 0u64;
        let mut i = 0;
        while i < 64 {
            mask |= 1 << ((i * i) % 64);
            i += 1;
        }
        mask
    };
    if SQ64 & (1 << (v & 63)) == 0 {
        return None;
    }
    let r = (v as u128).sqrt() as i128;
    (r * r == v).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn examples() {
        let s = solve_norm_equation(&r(2), &r(-1)).unwrap().unwrap();
        assert_eq!((s.alpha, s.beta), (r(1), r(1)));
        let s = solve_norm_equation(&r(3), &r(13)).unwrap().unwrap();
        assert!(s.satisfies(&r(3), &r(13)));
        assert_eq!(solve_norm_equation(&r(3), &r(2)).unwrap(), None);
    }

    #[test]
    fn rational_inputs() {
        let a: Rational = "5/12".parse().unwrap();
        let b: Rational = "-7/18".parse().unwrap();
        match solve_norm_equation(&a, &b).unwrap() {
            Some(s) => assert!(s.satisfies(&a, &b)),
            None => assert!(!global_hilbert(&a, &b).unwrap().is_empty()),
        }
        let b: Rational = "1/4".parse().unwrap();
        assert!(solve_norm_equation(&a, &b).unwrap().unwrap().satisfies(&a, &b));
    }

    #[test]
    fn twisting_preserves_the_norm() {
        let a = r(3);
        let b = r(13);
        let s0 = solve_norm_equation(&a, &b).unwrap().unwrap();
        for k in [1i64, 2, -3] {
            let t = s0.twist(&a, &r(k));
            assert!(t.satisfies(&a, &b));
            assert_ne!(t, s0);
        }
    }

    #[test]
    fn square_a_rejected() {
        assert!(matches!(
            solve_norm_equation(&r(4), &r(3)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ternary_with_square_factors() {
        let a = BigInt::from(-12);
        let b = BigInt::from(28);
        let [x, y, z] = solve_ternary(&a, &b).unwrap().unwrap();
        assert_eq!(&x * &x, &a * &y * &y + &b * &z * &z);
        assert!(!(x.is_zero() && y.is_zero() && z.is_zero()));
    }

    #[test]
    fn tonelli_large_prime() {
        let cfg = SolverConfig::default();
        // p = 1 (mod 2^k) exercises the general branch
        let p = BigInt::from(998_244_353u64);
        let a = BigInt::from(123_456_789u64).pow(2) % &p;
        let root = cfg.sqrt_mod_prime(&a, &p).unwrap().unwrap();
        assert_eq!((&root * &root) % &p, a);
        // 5 is a nonresidue: p = 3 (mod 5)
        assert_eq!(cfg.sqrt_mod_prime(&BigInt::from(5), &p).unwrap(), None);
    }

    #[test]
    fn exhaustive_fallback_agrees() {
        let cfg = SolverConfig {
            fallback_height: 50,
            ..SolverConfig::default()
        };
        let [x, y, z] = cfg
            .exhaustive_ternary(&BigInt::from(3), &BigInt::from(13))
            .unwrap()
            .unwrap();
        assert_eq!(&x * &x, BigInt::from(3) * &y * &y + BigInt::from(13) * &z * &z);
    }
}
