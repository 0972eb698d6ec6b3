//! Extended reals with an explicit bottom element.

use std::cmp::Ordering;
use std::fmt;

/// A value in `[−∞, ∞)`: either the bottom element or a finite real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
}

impl ExtReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::NegInf => None,
        }
    }

    /// `f64` view; the bottom element maps to `-inf`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(x) => x,
            ExtReal::NegInf => f64::NEG_INFINITY,
        }
    }

    /// `(1−τ)·a + τ·b` for `τ ∈ (0,1)`; any bottom operand absorbs.
    pub fn chord(a: ExtReal, b: ExtReal, tau: f64) -> ExtReal {
        match (a, b) {
            (ExtReal::Finite(x), ExtReal::Finite(y)) => ExtReal::Finite((1.0 - tau) * x + tau * y),
            _ => ExtReal::NegInf,
        }
    }

    /// `self − rhs` as an `f64`, with `−∞ − finite = −∞` and `anything − (−∞) = +∞`.
    pub fn slack_over(self, rhs: ExtReal) -> f64 {
        match (self, rhs) {
            (_, ExtReal::NegInf) => f64::INFINITY,
            (ExtReal::NegInf, ExtReal::Finite(_)) => f64::NEG_INFINITY,
            (ExtReal::Finite(x), ExtReal::Finite(y)) => x - y,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        if x == f64::NEG_INFINITY {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(x)
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::NegInf, ExtReal::NegInf) => Some(Ordering::Equal),
            (ExtReal::NegInf, _) => Some(Ordering::Less),
            (_, ExtReal::NegInf) => Some(Ordering::Greater),
            (ExtReal::Finite(x), ExtReal::Finite(y)) => x.partial_cmp(y),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::Finite(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bottom_absorbs_chords() {
        let a = ExtReal::Finite(2.0);
        assert_eq!(ExtReal::chord(a, ExtReal::NegInf, 0.3), ExtReal::NegInf);
        assert_eq!(ExtReal::chord(a, ExtReal::Finite(4.0), 0.5), ExtReal::Finite(3.0));
    }

    #[test]
    fn slack_conventions() {
        assert_eq!(ExtReal::NegInf.slack_over(ExtReal::Finite(1.0)), f64::NEG_INFINITY);
        assert_eq!(ExtReal::Finite(1.0).slack_over(ExtReal::NegInf), f64::INFINITY);
        assert_eq!(ExtReal::NegInf.slack_over(ExtReal::NegInf), f64::INFINITY);
        assert!(ExtReal::NegInf < ExtReal::Finite(-1e300));
    }
}
