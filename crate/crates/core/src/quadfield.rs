//! Quadratic fields Q(sqrt m) and Hilbert symbols after base change to them.
//!
//! A quaternion algebra over Q splits over K = Q(sqrt m) exactly when no
//! place where it ramifies splits in K, so only the Q-level ramification
//! set and the splitting rules below are needed.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::factor::factor;
use crate::hilbert::{global_hilbert, kronecker, Place};

/// `Q(sqrt m)`, identified by the squarefree core of `m`. A core of 1 is Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadField {
    raw: Rational,
    core: BigInt,
}

impl QuadField {
    pub fn raw(&self) -> &Rational {
        &self.raw
    }

    pub fn core(&self) -> &BigInt {
        &self.core
    }

    /// True when `m` is 0 or a rational square, so the field is Q itself.
    pub fn is_trivial(&self) -> bool {
        self.core.is_one()
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            f.write_str("Q")
        } else {
            write!(f, "Q(sqrt({}))", self.core)
        }
    }
}

pub fn squarefree_core(m: &Rational) -> Result<QuadField> {
    let core = if m.is_zero() {
        BigInt::one()
    } else {
        factor(&m.square_class_integer())?.squarefree_part()
    };
    Ok(QuadField {
        raw: m.clone(),
        core,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
    SplitsIntoTwoReal,
    BecomesComplex,
}

impl SplitType {
    /// Whether the place has a degree-one place of K above it.
    pub fn splits(self) -> bool {
        matches!(self, SplitType::Split | SplitType::SplitsIntoTwoReal)
    }
}

pub fn place_splitting(v: &Place, k: &QuadField) -> Result<SplitType> {
    if k.is_trivial() {
        return Err(Error::TrivialField);
    }
    let m = &k.core;
    Ok(match v {
        Place::Infinite => {
            if m.is_positive() {
                SplitType::SplitsIntoTwoReal
            } else {
                SplitType::BecomesComplex
            }
        }
        Place::Finite(p) if p == &BigInt::from(2) => {
            match m.mod_floor(&BigInt::from(8)).try_into().unwrap_or(0u8) {
                1 => SplitType::Split,
                5 => SplitType::Inert,
                _ => SplitType::Ramified,
            }
        }
        Place::Finite(p) => {
            if (m % p).is_zero() {
                SplitType::Ramified
            } else if kronecker(m, p) == 1 {
                SplitType::Split
            } else {
                SplitType::Inert
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtValue {
    Zero,
    Nonzero,
}

/// Value of `(a, b)` over a quadratic field, with the smallest place of Q
/// that obstructs splitting when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtSymbol {
    pub value: ExtValue,
    pub witness_place: Option<Place>,
    #[serde(serialize_with = "ser_display")]
    pub field_core: BigInt,
    pub degenerate_discriminant: bool,
}

impl ExtSymbol {
    pub fn is_zero(&self) -> bool {
        self.value == ExtValue::Zero
    }
}

fn ser_display<S: Serializer, T: fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn ext_hilbert(a: &Rational, b: &Rational, k: &QuadField) -> Result<ExtSymbol> {
    let ramified = global_hilbert(a, b)?;
    let mut witness = None;
    for v in ramified.iter() {
        let survives = k.is_trivial() || place_splitting(v, k)?.splits();
        if survives {
            witness = Some(v.clone());
            break;
        }
    }
    Ok(ExtSymbol {
        value: if witness.is_some() {
            ExtValue::Nonzero
        } else {
            ExtValue::Zero
        },
        witness_place: witness,
        field_core: k.core.clone(),
        degenerate_discriminant: k.is_trivial(),
    })
}
