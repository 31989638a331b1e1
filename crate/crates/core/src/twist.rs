//! Twist vectors `Y = (y_ℓ)` and the phases `(RY)_n` they induce.

use serde::{Deserialize, Serialize};

use crate::arith::wrap_angle;
use crate::error::{Error, Result};
use crate::exponents::{rational_f64, Row};

/// Angles aligned with a basis prefix, reduced to `[0, 2π·period)`.
///
/// The period is 1 for integral bases; with rational rows of common
/// denominator `Q` only reduction mod `2πQ` leaves the twist unchanged.
/// With `zero_tail` set, coordinates past the stored prefix are zero;
/// otherwise touching them is an error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawTwist", into = "RawTwist")]
pub struct TwistVector {
    angles: Vec<f64>,
    zero_tail: bool,
    period: u64,
}

fn one() -> u64 {
    1
}

#[derive(Serialize, Deserialize)]
struct RawTwist {
    angles: Vec<f64>,
    #[serde(default)]
    zero_tail: bool,
    #[serde(default = "one")]
    period: u64,
}

impl From<RawTwist> for TwistVector {
    fn from(r: RawTwist) -> Self {
        TwistVector::with_period_from(r.angles, r.zero_tail, r.period)
    }
}

impl From<TwistVector> for RawTwist {
    fn from(t: TwistVector) -> Self {
        RawTwist {
            angles: t.angles,
            zero_tail: t.zero_tail,
            period: t.period,
        }
    }
}

impl TwistVector {
    fn build(angles: Vec<f64>, zero_tail: bool) -> Self {
        TwistVector {
            angles: angles.into_iter().map(wrap_angle).collect(),
            zero_tail,
            period: 1,
        }
    }

    /// Angles taken literally and reduced mod `2π·period`.
    pub fn with_period_from(angles: Vec<f64>, zero_tail: bool, period: u64) -> Self {
        let p = std::f64::consts::TAU * period.max(1) as f64;
        TwistVector {
            angles: angles.into_iter().map(|y| reduce(y, p)).collect(),
            zero_tail,
            period: period.max(1),
        }
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// A vector covering exactly `angles.len()` coordinates.
    pub fn new(angles: Vec<f64>) -> Self {
        Self::build(angles, false)
    }

    /// A vector that is zero past the given prefix.
    pub fn with_zero_tail(angles: Vec<f64>) -> Self {
        Self::build(angles, true)
    }

    /// The identity twist, defined on every coordinate.
    pub fn zero() -> Self {
        Self::build(Vec::new(), true)
    }

    /// Zero except at the listed coordinates.
    pub fn sparse(entries: &[(usize, f64)]) -> Self {
        let len = entries.iter().map(|(l, _)| l + 1).max().unwrap_or(0);
        let mut angles = vec![0.0; len];
        for &(l, y) in entries {
            angles[l] = y;
        }
        Self::with_zero_tail(angles)
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn zero_tail(&self) -> bool {
        self.zero_tail
    }

    pub fn angle(&self, l: usize) -> Option<f64> {
        match self.angles.get(l) {
            Some(&y) => Some(y),
            None if self.zero_tail => Some(0.0),
            None => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.zero_tail && self.angles.iter().all(|&y| y == 0.0)
    }

    /// Coordinatewise sum; defined where both are.
    pub fn add(&self, other: &Self) -> Self {
        let len = self.len().max(other.len());
        let zero_tail = self.zero_tail && other.zero_tail;
        let mut angles = Vec::with_capacity(len);
        for l in 0..len {
            match (self.angle(l), other.angle(l)) {
                (Some(a), Some(b)) => angles.push(a + b),
                _ => break,
            }
        }
        let period = num_integer::lcm(self.period, other.period);
        Self::with_period_from(angles, zero_tail, period)
    }

    pub fn neg(&self) -> Self {
        Self::with_period_from(self.angles.iter().map(|y| -y).collect(), self.zero_tail, self.period)
    }

    /// `(RY)_n = Σ_ℓ r_{n,ℓ} y_ℓ`, not reduced.
    pub fn phase(&self, row: &Row, n: u64) -> Result<f64> {
        let mut acc = 0.0;
        for (l, r) in row {
            let y = self.angle(*l).ok_or(Error::TwistTooShort {
                n: n as usize,
                generator: *l,
                len: self.len(),
            })?;
            if y != 0.0 {
                acc += rational_f64(r) * y;
            }
        }
        Ok(acc)
    }
}

fn reduce(y: f64, p: f64) -> f64 {
    if p == std::f64::consts::TAU {
        return wrap_angle(y);
    }
    let r = y.rem_euclid(p);
    if r >= p {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Rational;

    #[test]
    fn reduces_and_pads() {
        let y = TwistVector::new(vec![-1.0, 7.0]);
        assert!(y.angles().iter().all(|a| (0.0..std::f64::consts::TAU).contains(a)));
        assert_eq!(y.angle(2), None);
        assert_eq!(TwistVector::sparse(&[(1, 0.5)]).angle(9), Some(0.0));
    }

    #[test]
    fn short_vector_names_row_and_generator() {
        let y = TwistVector::new(vec![1.0]);
        let row = vec![(0, Rational::from_integer(1)), (3, Rational::from_integer(2))];
        match y.phase(&row, 42) {
            Err(Error::TwistTooShort { n: 42, generator: 3, len: 1 }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_round_trip() {
        let y = TwistVector::sparse(&[(0, 1.0), (2, 3.0)]);
        let s = serde_json::to_string(&y).unwrap();
        assert_eq!(serde_json::from_str::<TwistVector>(&s).unwrap(), y);
        let wide = TwistVector::with_period_from(vec![-210.0 * std::f64::consts::PI], false, 30);
        assert_eq!(wide.period(), 30);
        let back: TwistVector = serde_json::from_str(&serde_json::to_string(&wide).unwrap()).unwrap();
        assert_eq!(back, wide);
    }
}
