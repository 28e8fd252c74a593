//! Integer factorization: trial division by the primes below 10^6, then
//! Miller-Rabin and Pollard-Brent rho with a hard iteration budget.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_TRIAL_BOUND: u32 = 1_000_000;
pub const DEFAULT_RHO_BUDGET: u64 = 2_000_000;

/// `sign * prod(p^e)` with primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn value(&self) -> BigInt {
        let mut n = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            n *= num_traits::pow(p.clone(), *e as usize);
        }
        n
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Signed squarefree part: `sign * prod(p : e odd)`.
    pub fn squarefree_part(&self) -> BigInt {
        let mut n = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            if e % 2 == 1 {
                n *= p;
            }
        }
        n
    }

    /// Largest `s > 0` with `s^2` dividing the value.
    pub fn square_divisor_root(&self) -> BigInt {
        let mut s = BigInt::one();
        for (p, e) in &self.factors {
            s *= num_traits::pow(p.clone(), (*e / 2) as usize);
        }
        s
    }
}

/// Factorization settings. The defaults handle every input whose second
/// largest prime factor is below roughly 10^12.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factorizer {
    pub trial_bound: u32,
    pub rho_budget: u64,
}

impl Default for Factorizer {
    fn default() -> Self {
        Factorizer {
            trial_bound: DEFAULT_TRIAL_BOUND,
            rho_budget: DEFAULT_RHO_BUDGET,
        }
    }
}

/// Factors a nonzero integer with the default settings.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    Factorizer::default().factor(n)
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(DEFAULT_TRIAL_BOUND))
}

fn sieve(limit: u32) -> Vec<u32> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

impl Factorizer {
    pub fn factor(&self, n: &BigInt) -> Result<Factorization> {
        if n.is_zero() {
            return Err(Error::Precondition("cannot factor zero".into()));
        }
        let sign = if n.is_negative() { -1 } else { 1 };
        let mut rest = n.abs();
        let mut factors: Vec<(BigInt, u32)> = Vec::new();

        let bound = self.trial_bound.min(DEFAULT_TRIAL_BOUND);
        for &p in small_primes().iter().take_while(|&&p| p <= bound) {
            if rest.is_one() {
                break;
            }
            if let Some(r) = rest.to_u64() {
                let p64 = p as u64;
                if p64 * p64 > r {
                    break;
                }
                if r % p64 != 0 {
                    continue;
                }
            }
            let pb = BigInt::from(p);
            let mut e = 0u32;
            loop {
                let (q, r) = rest.div_rem(&pb);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                factors.push((pb, e));
            }
        }

        if !rest.is_one() {
            let trial_sq = BigInt::from(bound as u64 + 1).pow(2);
            if rest < trial_sq || is_prime(&rest) {
                factors.push((rest, 1));
            } else {
                let mut stack = vec![rest];
                let mut large = Vec::new();
                while let Some(m) = stack.pop() {
                    if is_prime(&m) {
                        large.push(m);
                        continue;
                    }
                    let d = self.split(&m)?;
                    let other = &m / &d;
                    stack.push(d);
                    stack.push(other);
                }
                large.sort();
                for p in large {
                    match factors.last_mut() {
                        Some((q, e)) if *q == p => *e += 1,
                        _ => factors.push((p, 1)),
                    }
                }
            }
        }
        Ok(Factorization { sign, factors })
    }

    /// Finds a nontrivial divisor of the composite `n`.
    fn split(&self, n: &BigInt) -> Result<BigInt> {
        if let Some(r) = perfect_power_root(n) {
            return Ok(r);
        }
        let mut spent = 0u64;
        for c in 1u32..=64 {
            if spent >= self.rho_budget {
                break;
            }
            if let Some(d) = pollard_brent(n, &BigInt::from(c), self.rho_budget - spent, &mut spent)
            {
                return Ok(d);
            }
        }
        Err(Error::FactorizationLimit(n.to_string()))
    }
}

fn perfect_power_root(n: &BigInt) -> Option<BigInt> {
    let bits = n.bits();
    for k in 2..=bits.max(2) as u32 {
        let r = n.nth_root(k);
        if r <= BigInt::one() {
            break;
        }
        if num_traits::pow(r.clone(), k as usize) == *n {
            return Some(r);
        }
    }
    None
}

/// Brent's cycle-finding variant of Pollard rho with `x -> x^2 + c`.
fn pollard_brent(n: &BigInt, c: &BigInt, budget: u64, spent: &mut u64) -> Option<BigInt> {
    let f = |x: &BigInt| (x * x + c) % n;
    let m = 128u64;
    let mut y = BigInt::from(2);
    let mut r = 1u64;
    let mut q = BigInt::one();
    let mut g = BigInt::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = m.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                q = (q * (&x - &y).abs()) % n;
            }
            *spent += steps;
            if *spent > budget {
                return None;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = (&x - &ys).abs().gcd(n);
            *spent += 1;
            if !g.is_one() || *spent > budget {
                break;
            }
        }
    }
    if g.is_one() || &g == n {
        None
    } else {
        Some(g)
    }
}

const MR_BASES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Miller-Rabin with the first 16 prime bases: exact below 3.3 * 10^24,
/// a strong probable-prime test beyond.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &p in &MR_BASES {
        let p = BigInt::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn small_examples() {
        assert_eq!(
            factor(&b(56)).unwrap(),
            Factorization {
                sign: 1,
                factors: vec![(b(2), 3), (b(7), 1)]
            }
        );
        assert_eq!(
            factor(&b(-3)).unwrap(),
            Factorization {
                sign: -1,
                factors: vec![(b(3), 1)]
            }
        );
        assert_eq!(
            factor(&b(1)).unwrap(),
            Factorization {
                sign: 1,
                factors: vec![]
            }
        );
        assert!(factor(&b(0)).is_err());
    }

    #[test]
    fn large_semiprime_uses_rho() {
        // two primes above the trial bound
        let p: BigInt = "1000003".parse().unwrap();
        let q: BigInt = "1000033".parse().unwrap();
        let r: BigInt = "998244353".parse().unwrap();
        let n = &p * &q * &r * &p;
        let f = factor(&n).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.factors, vec![(r, 1), (p, 2), (q, 1)].into_iter().fold(
            Vec::new(),
            |mut v: Vec<(BigInt, u32)>, x| {
                v.push(x);
                v.sort();
                v
            }
        ));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let p: BigInt = "1000000000039".parse().unwrap();
        let q: BigInt = "1000000000061".parse().unwrap();
        let tiny = Factorizer {
            trial_bound: 1000,
            rho_budget: 10,
        };
        assert!(matches!(
            tiny.factor(&(&p * &q)),
            Err(Error::FactorizationLimit(_))
        ));
    }

    #[test]
    fn primality() {
        assert!(is_prime(&b(2)));
        assert!(is_prime(&b(1_000_003)));
        assert!(!is_prime(&b(1)));
        assert!(!is_prime(&b(561)));
        assert!(!is_prime(&b(3_215_031_751)));
        assert!(is_prime(&"170141183460469231731687303715884105727".parse().unwrap()));
    }

    #[test]
    fn squarefree_helpers() {
        let f = factor(&b(-63)).unwrap();
        assert_eq!(f.squarefree_part(), b(-7));
        assert_eq!(f.square_divisor_root(), b(3));
    }
}
