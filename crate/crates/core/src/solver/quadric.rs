//! Isotropic vectors of diagonal forms `q1 X1^2 + ... + qn Xn^2` (n = 3, 4).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::SolverConfig;
use crate::arith::{common_denominator, is_square, isqrt_exact, Rational};
use crate::error::{Error, Result};
use crate::factor::factor;
use crate::hilbert::{global_hilbert, kronecker, local_hilbert, Place};

/// A diagonal ternary or quaternary form with nonzero, mixed-sign coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadricSpec {
    coeffs: Vec<Rational>,
}

impl QuadricSpec {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != 3 && coeffs.len() != 4 {
            return Err(Error::InvalidQuadric(format!(
                "expected 3 or 4 coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(Rational::is_zero) {
            return Err(Error::InvalidQuadric("zero coefficient".into()));
        }
        if coeffs.iter().all(Rational::is_positive) || coeffs.iter().all(Rational::is_negative) {
            return Err(Error::InvalidQuadric("definite form".into()));
        }
        Ok(QuadricSpec { coeffs })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(point)
            .fold(Rational::zero(), |acc, (q, x)| acc + q * &x.square())
    }

    pub fn contains(&self, point: &[BigInt]) -> bool {
        point.len() == self.dim()
            && point.iter().any(|x| !x.is_zero())
            && self
                .eval(&point.iter().cloned().map(Rational::from).collect::<Vec<_>>())
                .is_zero()
    }

    /// Coefficients scaled to coprime integers.
    fn integral(&self) -> Vec<BigInt> {
        let den = common_denominator(self.coeffs.iter());
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|q| q.numer() * (&den / q.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Scales a nonzero rational vector to coprime integers whose first nonzero
/// entry is positive.
pub fn primitive_vector(v: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(v.iter());
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

/// Finds an isotropic vector with the default budgets.
pub fn find_quadric_point(q: &QuadricSpec) -> Result<Option<Vec<BigInt>>> {
    SolverConfig::default().find_quadric_point(q)
}

const SIEVE_MODULI: [u32; 4] = [8, 9, 5, 7];

fn residue_tables() -> [Vec<bool>; 4] {
    SIEVE_MODULI.map(|m| {
        let mut t = vec![false; m as usize];
        for x in 0..m {
            t[((x * x) % m) as usize] = true;
        }
        t
    })
}

/// The `k`-th small integer in the order 0, 1, -1, 2, -2, ...
fn zigzag(k: i64) -> i64 {
    if k % 2 == 1 {
        (k + 1) / 2
    } else {
        -k / 2
    }
}

/// Calls `f` on every tuple of length `n` with entries in `[-h, h]` and max
/// norm exactly `h`, in a fixed order; stops early when `f` returns `Some`.
fn for_shell<T>(n: usize, h: i64, mut f: impl FnMut(&[i64]) -> Option<T>) -> Option<T> {
    let mut idx = vec![0i64; n];
    let mut tuple = vec![0i64; n];
    loop {
        for (t, &k) in tuple.iter_mut().zip(&idx) {
            *t = zigzag(k);
        }
        if tuple.iter().any(|x| x.abs() == h) {
            if let Some(r) = f(&tuple) {
                return Some(r);
            }
        }
        // odometer, last position fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] <= 2 * h {
                break;
            }
            idx[pos] = 0;
        }
    }
}

impl SolverConfig {
    /// A primitive isotropic vector, first nonzero coordinate positive.
    /// `None` means the budgets ran out, which for an isotropic form is a
    /// budget problem rather than a proof of anisotropy.
    pub fn find_quadric_point(&self, q: &QuadricSpec) -> Result<Option<Vec<BigInt>>> {
        let ints = q.integral();
        if let Some(p) = self.sieved_search(&ints)? {
            return Ok(Some(p));
        }
        self.conic_reduction(q)
    }

    /// Height-ordered search over all but the last coordinate; the last is
    /// recovered as a square root after sieving.
    fn sieved_search(&self, q: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let Some(q) = q.iter().map(|x| x.to_i64().map(i128::from)).collect::<Option<Vec<i128>>>()
        else {
            return Ok(None);
        };
        let n = q.len();
        let last = q[n - 1];
        let tables = residue_tables();
        let h_max = self.quadric_height.min(1 << 20) as i64;
        for h in 1..=h_max {
            self.cancel.check()?;
            let found = for_shell(n - 1, h, |t| {
                let mut v: i128 = 0;
                for (qi, &x) in q.iter().zip(t) {
                    v -= qi * (x as i128) * (x as i128);
                }
                if v % last != 0 {
                    return None;
                }
                let w2 = v / last;
                if w2 < 0
                    || !SIEVE_MODULI
                        .iter()
                        .zip(&tables)
                        .all(|(&m, tab)| tab[(w2 % m as i128) as usize])
                {
                    return None;
                }
                let w = isqrt_exact(&BigInt::from(w2))?;
                let mut p: Vec<Rational> = t.iter().map(|&x| Rational::from(x)).collect();
                p.push(Rational::from(w));
                Some(primitive_vector(&p))
            });
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// Complete search. A ternary form is a norm equation. For a quaternary
    /// form `<q1, q2, q3, q4>` a common value `t` of `<q1, q2>` and
    /// `<-q3, -q4>` is built from local square classes at the bad places and
    /// a free factor `r` running through an arithmetic progression; once the
    /// two ternary forms are isotropic at every place, each binary equation
    /// is solved as a norm equation.
    fn conic_reduction(&self, q: &QuadricSpec) -> Result<Option<Vec<BigInt>>> {
        let c: Vec<Rational> = q.integral().into_iter().map(Rational::from).collect();
        let head_tail = if q.dim() == 3 {
            self.represent(&c[0], &c[1], &-&c[2])?
                .map(|(x, y)| vec![x, y, Rational::one()])
        } else {
            match self.common_value(&c)? {
                None => None,
                Some(t) => {
                    let first = self.represent(&c[0], &c[1], &t)?;
                    let second = self.represent(&c[2], &c[3], &-&t)?;
                    match (first, second) {
                        (Some((x, y)), Some((z, w))) => Some(vec![x, y, z, w]),
                        _ => {
                            return Err(Error::VerificationFailed(format!(
                                "common value {t} of a split quadric is not represented"
                            )))
                        }
                    }
                }
            }
        };
        let Some(v) = head_tail else {
            return Ok(None);
        };
        let p = primitive_vector(&v);
        if !q.contains(&p) {
            return Err(Error::VerificationFailed("quadric point".into()));
        }
        Ok(Some(p))
    }

    /// Solves `c0 x^2 + c1 y^2 = n` for `n != 0`.
    fn represent(
        &self,
        c0: &Rational,
        c1: &Rational,
        n: &Rational,
    ) -> Result<Option<(Rational, Rational)>> {
        let a = -(c1 / c0);
        let b = n / c0;
        Ok(match is_square(&a) {
            // (x - r y)(x + r y) = 1 * b
            Some(r) => {
                let two = Rational::from(2);
                Some((
                    &(&Rational::one() + &b) / &two,
                    &(&b - &Rational::one()) / &(&r * &two),
                ))
            }
            None => self.solve_norm_equation(&a, &b)?.map(|s| (s.alpha, s.beta)),
        })
    }

    /// A nonzero integer `t` represented by `<c0, c1>` and by `<-c2, -c3>`
    /// over Q; `None` when some completion of Q has no such value, which
    /// means the form is anisotropic there.
    fn common_value(&self, c: &[Rational]) -> Result<Option<Rational>> {
        let conditions = |t: &Rational, v: &Place| -> Result<bool> {
            Ok(local_hilbert(&-&(&c[0] * &c[1]), &(&c[0] * t), v)? == 1
                && local_hilbert(&-&(&c[2] * &c[3]), &-&(&c[2] * t), v)? == 1)
        };
        let mut bad: Vec<BigInt> = vec![BigInt::from(2)];
        for x in c {
            for p in factor(x.numer())?.primes() {
                if !bad.contains(p) {
                    bad.push(p.clone());
                }
            }
        }
        bad.sort();

        // sign, then (prime, valuation, unit class) at each bad prime
        let mut sign = None;
        for s in [1i64, -1] {
            if conditions(&Rational::from(s), &Place::Infinite)? {
                sign = Some(BigInt::from(s));
                break;
            }
        }
        let Some(sign) = sign else {
            return Ok(None);
        };
        let mut local = Vec::with_capacity(bad.len());
        for p in &bad {
            let v = Place::Finite(p.clone());
            let mut chosen = None;
            for class in square_classes(p) {
                if conditions(&Rational::from(class.clone()), &v)? {
                    chosen = Some(class);
                    break;
                }
            }
            let Some(class) = chosen else {
                return Ok(None);
            };
            let e = u32::from(class.is_multiple_of(p));
            let unit = if e == 1 { &class / p } else { class };
            local.push((p.clone(), e, unit));
        }
        let pp: BigInt = local.iter().map(|(p, e, _)| p.pow(*e)).product();

        // r must put sign * pp * r in the chosen class at each bad prime
        let mut residues = Vec::with_capacity(local.len());
        for (p, e, unit) in &local {
            let rest = &sign * &pp / p.pow(*e);
            if p == &BigInt::from(2) {
                // odd numbers are their own inverses mod 8
                residues.push(((unit * &rest).mod_floor(&BigInt::from(8)), BigInt::from(8)));
            } else {
                let want = kronecker(unit, p) * kronecker(&rest, p);
                let rho = (1u64..)
                    .map(BigInt::from)
                    .find(|r| kronecker(r, p) == want)
                    .expect("both classes occur below p");
                residues.push((rho, p.clone()));
            }
        }
        let split_at = |r: &BigInt| -> Result<Option<Rational>> {
            let t = Rational::from(&sign * &pp * r);
            Ok((global_hilbert(&-&(&c[0] * &c[1]), &(&c[0] * &t))?.is_empty()
                && global_hilbert(&-&(&c[2] * &c[3]), &-&(&c[2] * &t))?.is_empty())
            .then_some(t))
        };
        // Small r first: the CRT modulus grows with the bad primes, and the
        // size of t drives the size of the final point.
        let classes: Vec<(BigInt, BigInt, i8)> = residues
            .iter()
            .map(|(rho, p)| (rho.clone(), p.clone(), kronecker(rho, p)))
            .collect();
        let eight = BigInt::from(8);
        let mut tested = 0u64;
        for r in (1..=self.fallback_height.saturating_mul(16)).map(BigInt::from) {
            let fits = classes.iter().all(|(rho, p, k)| {
                if p == &eight {
                    &(&r % p) == rho
                } else {
                    kronecker(&r, p) == *k
                }
            });
            if !fits {
                continue;
            }
            self.cancel.check()?;
            if let Some(t) = split_at(&r)? {
                return Ok(Some(t));
            }
            tested += 1;
            if tested >= self.fallback_height {
                break;
            }
        }
        let (r0, m) = crt_all(&residues);
        let mut r = if r0.is_zero() { m.clone() } else { r0 };
        for _ in 0..self.fallback_height.max(1) {
            self.cancel.check()?;
            if let Some(t) = split_at(&r)? {
                return Ok(Some(t));
            }
            r += &m;
        }
        Err(Error::SearchBudgetExceeded(format!(
            "no common value found for the quadric {c:?}"
        )))
    }
}

/// Integer representatives of the square classes of Q_p^*.
fn square_classes(p: &BigInt) -> Vec<BigInt> {
    if p == &BigInt::from(2) {
        return [1, 3, 5, 7, 2, 6, 10, 14].map(BigInt::from).to_vec();
    }
    let u = (2u64..)
        .map(BigInt::from)
        .find(|u| kronecker(u, p) == -1)
        .expect("odd primes have nonresidues");
    vec![BigInt::one(), u.clone(), p.clone(), &u * p]
}

/// Chinese remaindering for pairwise coprime moduli: `(r, M)` with
/// `0 <= r < M`.
fn crt_all(residues: &[(BigInt, BigInt)]) -> (BigInt, BigInt) {
    let mut r = BigInt::zero();
    let mut m = BigInt::one();
    for (ri, mi) in residues {
        // r + m k = ri (mod mi)
        let inv = m.extended_gcd(mi).x;
        let k = ((ri - &r) * inv).mod_floor(mi);
        r += &m * k;
        m *= mi;
        r = r.mod_floor(&m);
    }
    (r, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(c: &[i64]) -> QuadricSpec {
        QuadricSpec::new(c.iter().map(|&x| Rational::from(x)).collect()).unwrap()
    }

    #[test]
    fn small_quadrics() {
        let q = spec(&[1, -2, -1, 2]);
        let p = find_quadric_point(&q).unwrap().unwrap();
        assert!(q.contains(&p));
        let q = spec(&[1, -3, -13, 39]);
        let p = find_quadric_point(&q).unwrap().unwrap();
        assert!(q.contains(&p));
    }

    #[test]
    fn definite_rejected() {
        let c = vec![Rational::from(1); 4];
        assert!(matches!(QuadricSpec::new(c), Err(Error::InvalidQuadric(_))));
    }

    #[test]
    fn conic_reduction_only() {
        let cfg = SolverConfig {
            quadric_height: 3,
            ..SolverConfig::default()
        };
        // 1009 = 1 (mod 8) is a norm from Q(sqrt 2) but not of tiny height
        let q = spec(&[1, -2, -1009]);
        let p = cfg.conic_reduction(&q).unwrap().unwrap();
        assert!(q.contains(&p));
    }

    #[test]
    fn common_value_beyond_small_tails() {
        let cfg = SolverConfig {
            quadric_height: 2,
            ..SolverConfig::default()
        };
        let c: Vec<Rational> = ["1", "4", "47/9", "-3841/846"].iter().map(|s| s.parse().unwrap()).collect();
        let q = QuadricSpec::new(c).unwrap();
        let p = cfg.find_quadric_point(&q).unwrap().unwrap();
        assert!(q.contains(&p));
        // 47 must divide the last coordinate for x^2 + 4y^2 to take the value
        assert_eq!(&p[3] % 47, BigInt::zero());
    }

    #[test]
    fn anisotropic_quaternary_gives_none() {
        // x^2 + y^2 - 3z^2 - 3w^2 is anisotropic at 3
        let q = spec(&[1, 1, -3, -3]);
        assert_eq!(find_quadric_point(&q).unwrap(), None);
    }

    #[test]
    fn anisotropic_conic_gives_none() {
        let q = spec(&[1, 1, -3]);
        assert_eq!(find_quadric_point(&q).unwrap(), None);
    }

    #[test]
    fn primitive_normalization() {
        let v: Vec<Rational> = ["-2/3", "4/3", "0"].iter().map(|s| s.parse().unwrap()).collect();
        let p = primitive_vector(&v);
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(-2), BigInt::from(0)]);
    }
}
