//! Elements `p + q*sqrt(a)` of a quadratic extension Q(sqrt(a)).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Serialize, Serializer};

use super::rational::{is_square, Rational};
use crate::error::{Error, Result};

/// A validated nonsquare rational `a`, the radicand of Q(sqrt(a)).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Radicand(Arc<Rational>);

impl Radicand {
    pub fn new(a: Rational) -> Result<Self> {
        if is_square(&a).is_some() {
            return Err(Error::SquareRadicand(a.to_string()));
        }
        Ok(Radicand(Arc::new(a)))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl fmt::Debug for Radicand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sqrt({})", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    base: Rational,
    coef: Rational,
    radicand: Radicand,
}

impl QuadElem {
    /// Builds `base + coef*sqrt(radicand)`; fails when the radicand is a square.
    pub fn new(base: Rational, coef: Rational, radicand: Rational) -> Result<Self> {
        Ok(QuadElem {
            base,
            coef,
            radicand: Radicand::new(radicand)?,
        })
    }

    pub fn with_radicand(base: Rational, coef: Rational, radicand: &Radicand) -> Self {
        QuadElem {
            base,
            coef,
            radicand: radicand.clone(),
        }
    }

    pub fn rational(base: Rational, radicand: &Radicand) -> Self {
        Self::with_radicand(base, Rational::zero(), radicand)
    }

    /// The element `sqrt(a)` itself.
    pub fn sqrt(radicand: &Radicand) -> Self {
        Self::with_radicand(Rational::zero(), Rational::one(), radicand)
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn coef(&self) -> &Rational {
        &self.coef
    }

    pub fn radicand(&self) -> &Radicand {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.coef.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.coef.is_zero()
    }

    /// `p - q*sqrt(a)`.
    pub fn conjugate(&self) -> Self {
        QuadElem {
            base: self.base.clone(),
            coef: -&self.coef,
            radicand: self.radicand.clone(),
        }
    }

    /// Field norm `p^2 - a*q^2` down to Q.
    pub fn norm(&self) -> Rational {
        self.base.square() - self.radicand.value() * &self.coef.square()
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QuadElem {
            base: &self.base / &n,
            coef: -(&self.coef / &n),
            radicand: self.radicand.clone(),
        })
    }

    fn check_same(&self, other: &Self) {
        assert!(
            self.radicand == other.radicand,
            "{}",
            Error::RadicandMismatch(
                self.radicand.value().to_string(),
                other.radicand.value().to_string()
            )
        );
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadElem {
            base: &self.base * r,
            coef: &self.coef * r,
            radicand: self.radicand.clone(),
        }
    }
}

/// Conjugation `sqrt(a) -> -sqrt(a)`.
pub fn quad_conjugate(e: &QuadElem) -> QuadElem {
    e.conjugate()
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.radicand.value();
        if self.coef.is_zero() {
            return write!(f, "{}", self.base);
        }
        let surd = if self.coef.abs().is_one() {
            format!("sqrt({r})")
        } else {
            format!("{}*sqrt({r})", self.coef.abs())
        };
        match (self.base.is_zero(), self.coef.is_negative()) {
            (true, false) => f.write_str(&surd),
            (true, true) => write!(f, "-{surd}"),
            (false, false) => write!(f, "{}+{surd}", self.base),
            (false, true) => write!(f, "{}-{surd}", self.base),
        }
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for QuadElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Add<&QuadElem> for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        self.check_same(rhs);
        QuadElem {
            base: &self.base + &rhs.base,
            coef: &self.coef + &rhs.coef,
            radicand: self.radicand.clone(),
        }
    }
}

impl Sub<&QuadElem> for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        self.check_same(rhs);
        QuadElem {
            base: &self.base - &rhs.base,
            coef: &self.coef - &rhs.coef,
            radicand: self.radicand.clone(),
        }
    }
}

impl Mul<&QuadElem> for &QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        self.check_same(rhs);
        let a = self.radicand.value();
        QuadElem {
            base: &self.base * &rhs.base + a * &(&self.coef * &rhs.coef),
            coef: &self.base * &rhs.coef + &self.coef * &rhs.base,
            radicand: self.radicand.clone(),
        }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            base: -&self.base,
            coef: -&self.coef,
            radicand: self.radicand.clone(),
        }
    }
}
