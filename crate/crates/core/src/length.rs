// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

//! Lengths of concatenated saddle connections.
//!
//! A length is a sum of square roots `√(length_sq)`. Roots that exist in the
//! coordinate field are kept exactly; the rest are accumulated in floating
//! point. A sum containing at least one root outside the field is never a
//! rational number, so comparing it with a rational bound in floating point
//! cannot hit an exact tie.

use std::cmp::Ordering;
use std::fmt;

use crate::exact::{ExactCoord, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct FlatLength {
    exact: ExactCoord,
    inexact: f64,
    irrational_terms: u32,
}

impl FlatLength {
    pub fn zero() -> Self {
        FlatLength {
            exact: ExactCoord::zero(),
            inexact: 0.0,
            irrational_terms: 0,
        }
    }

    pub fn from_length_sq(sq: &ExactCoord) -> Self {
        match sq.sqrt_exact() {
            Some(r) => FlatLength {
                exact: r,
                inexact: 0.0,
                irrational_terms: 0,
            },
            None => FlatLength {
                exact: ExactCoord::zero(),
                inexact: sq.to_f64().sqrt(),
                irrational_terms: 1,
            },
        }
    }

    pub fn add(&self, other: &FlatLength) -> FlatLength {
        FlatLength {
            exact: &self.exact + &other.exact,
            inexact: self.inexact + other.inexact,
            irrational_terms: self.irrational_terms + other.irrational_terms,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.irrational_terms == 0
    }

    /// The exact value when no term left the field.
    pub fn exact_value(&self) -> Option<&ExactCoord> {
        self.is_exact().then_some(&self.exact)
    }

    pub fn to_f64(&self) -> f64 {
        self.exact.to_f64() + self.inexact
    }

    pub fn cmp_rational(&self, bound: &Rational) -> Ordering {
        if self.is_exact() {
            self.exact.cmp(&ExactCoord::rational(*bound))
        } else {
            let b = ExactCoord::rational(*bound).to_f64();
            self.to_f64().partial_cmp(&b).unwrap_or(Ordering::Greater)
        }
    }

    pub fn le(&self, bound: &Rational) -> bool {
        self.cmp_rational(bound) != Ordering::Greater
    }
}

/// The exact value when available, else twelve decimals.
impl fmt::Display for FlatLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact_value() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{:.12}", self.to_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_lengths_compare_exactly() {
        let one = FlatLength::from_length_sq(&ExactCoord::int(1));
        let five = FlatLength::from_length_sq(&ExactCoord::int(25));
        let six = one.add(&five);
        assert!(six.is_exact());
        assert!(six.le(&Rational::from_integer(6)));
        assert!(!six.le(&Rational::new(59, 10)));
    }

    #[test]
    fn root_two_is_inexact() {
        let d = FlatLength::from_length_sq(&ExactCoord::int(2));
        assert!(!d.is_exact());
        assert!(d.le(&Rational::new(142, 100)));
        assert!(!d.le(&Rational::new(141, 100)));
    }

    #[test]
    fn field_roots_stay_exact() {
        // (1 + √2)² = 3 + 2√2
        let l = FlatLength::from_length_sq(&ExactCoord::quad(3, 1, 2, 1, 2));
        assert!(l.is_exact());
        assert_eq!(l.exact_value(), Some(&ExactCoord::quad(1, 1, 1, 1, 2)));
    }
}
