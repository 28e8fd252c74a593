//! Quadratic residue symbols and Hilbert symbols over Q.
//!
//! Symbols are multiplicative (`+1` / `-1`). A global quaternion algebra
//! `(a, b)` is described by the set of places where its local symbol is
//! `-1`; it splits exactly when that set is empty.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::factor::{factor, is_prime};

/// A place of Q. Finite places order by their prime and precede the real place.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(BigInt),
    Infinite,
}

impl Place {
    pub fn finite(p: impl Into<BigInt>) -> Result<Place> {
        let p = p.into();
        if is_prime(&p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::NotPrime(p.to_string()))
        }
    }

    pub fn prime(&self) -> Option<&BigInt> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinite)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => f.write_str("infinity"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "infinity" | "inf" | "real" => Ok(Place::Infinite),
            t => {
                let p: BigInt = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("not a place: {s}")))?;
                Place::finite(p)
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Places where a quaternion algebra over Q ramifies, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RamificationSet {
    places: Vec<Place>,
}

impl RamificationSet {
    pub fn from_places(mut places: Vec<Place>) -> Self {
        places.sort();
        places.dedup();
        RamificationSet { places }
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn contains(&self, v: &Place) -> bool {
        self.places.binary_search(v).is_ok()
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Place> {
        self.places.iter()
    }
}

impl fmt::Display for RamificationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.places.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// Kronecker symbol `(a | n)` for arbitrary integers.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut a = a.clone();
    let mut n = n.clone();
    let mut result: i8 = 1;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    let tz = n.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        if a.is_even() {
            return 0;
        }
        if tz % 2 == 1 {
            let r = mod8(&a);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        n >>= tz;
    }
    // n is odd and positive: Jacobi symbol.
    a = a.mod_floor(&n);
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            a >>= tz;
            let r = mod8(&n);
            if tz % 2 == 1 && (r == 3 || r == 5) {
                result = -result;
            }
        }
        if mod4(&a) == 3 && mod4(&n) == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn mod8(n: &BigInt) -> u8 {
    n.mod_floor(&BigInt::from(8)).to_u8().expect("residue fits")
}

fn mod4(n: &BigInt) -> u8 {
    n.mod_floor(&BigInt::from(4)).to_u8().expect("residue fits")
}

/// `(v, n / p^v)` for `n != 0`.
fn split_valuation(n: &BigInt, p: &BigInt) -> (u64, BigInt) {
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

/// Local symbol of two nonzero integers at a place.
pub fn local_hilbert_int(a: &BigInt, b: &BigInt, v: &Place) -> i8 {
    debug_assert!(!a.is_zero() && !b.is_zero());
    let p = match v {
        Place::Infinite => {
            return if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(p) => p,
    };
    let (alpha, u) = split_valuation(a, p);
    let (beta, w) = split_valuation(b, p);
    let mut parity = 0u64;
    if p == &BigInt::from(2) {
        let eps = |x: &BigInt| u64::from(mod4(x) == 3);
        let omega = |x: &BigInt| {
            let r = mod8(x);
            u64::from(r == 3 || r == 5)
        };
        parity += eps(&u) * eps(&w);
        parity += alpha * omega(&w);
        parity += beta * omega(&u);
        if parity.is_multiple_of(2) {
            1
        } else {
            -1
        }
    } else {
        let eps_p = u64::from(mod4(p) == 3);
        parity += alpha * beta * eps_p;
        let mut s: i8 = if parity.is_multiple_of(2) { 1 } else { -1 };
        if beta % 2 == 1 {
            s *= kronecker(&u, p);
        }
        if alpha % 2 == 1 {
            s *= kronecker(&w, p);
        }
        s
    }
}

/// Local Hilbert symbol `(a, b)_v`: `+1` iff `X^2 - aY^2 - bZ^2` is isotropic over Q_v.
pub fn local_hilbert(a: &Rational, b: &Rational, v: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    Ok(local_hilbert_int(
        &a.square_class_integer(),
        &b.square_class_integer(),
        v,
    ))
}

/// The real place, 2, and every odd prime dividing a numerator or denominator.
pub fn candidate_places(a: &Rational, b: &Rational) -> Result<Vec<Place>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mut primes: Vec<BigInt> = vec![BigInt::from(2)];
    for n in [a.numer(), a.denom(), b.numer(), b.denom()] {
        primes.extend(factor(n)?.primes().cloned());
    }
    primes.sort();
    primes.dedup();
    let mut places: Vec<Place> = primes.into_iter().map(Place::Finite).collect();
    places.push(Place::Infinite);
    Ok(places)
}

/// Ramification set of the quaternion algebra `(a, b)` over Q.
pub fn global_hilbert(a: &Rational, b: &Rational) -> Result<RamificationSet> {
    let places = candidate_places(a, b)?;
    let ai = a.square_class_integer();
    let bi = b.square_class_integer();
    let ramified = places
        .into_iter()
        .filter(|v| local_hilbert_int(&ai, &bi, v) == -1)
        .collect();
    Ok(RamificationSet::from_places(ramified))
}
