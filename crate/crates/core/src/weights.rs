//! Weight vectors over measurement outcomes.
//!
//! Weights derived at rational points are kept as exact rationals; weights
//! obtained from trigonometric amplitudes are plain floats.  The two
//! representations are never mixed inside one vector, so exactness claims
//! ("the gap is 1/4") survive end to end while the float path stays cheap.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

/// Absolute tolerance for float-side normalization checks.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// Formats a rational as `p/q`, denominator always written.
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A quantity that is either an exact rational or a float.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Approx(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Approx(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Approx(x) => *x == 0.0,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }
}

impl std::fmt::Display for Scalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", format_ratio(r)),
            Scalar::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => serializer.serialize_str(&format_ratio(r)),
            Scalar::Approx(x) => serializer.serialize_f64(*x),
        }
    }
}

/// Normalized non-negative weights over an ordered outcome set.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightVector {
    Exact(Vec<BigRational>),
    Approx(Vec<f64>),
}

impl WeightVector {
    /// Exact weights: each non-negative, summing to one exactly.
    pub fn exact(weights: Vec<BigRational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyOutcomes);
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidWeights("negative weight".into()));
        }
        let sum: BigRational = weights.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {}, expected 1",
                format_ratio(&sum)
            )));
        }
        Ok(WeightVector::Exact(weights))
    }

    /// Float weights: each finite and non-negative, summing to one within
    /// [`FLOAT_TOLERANCE`].
    pub fn approx(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyOutcomes);
        }
        for &w in &weights {
            if !w.is_finite() {
                return Err(Error::NotFinite { what: "weight", value: w });
            }
            if w < 0.0 {
                return Err(Error::InvalidWeights(format!("negative weight {w}")));
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > FLOAT_TOLERANCE {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}, expected 1")));
        }
        Ok(WeightVector::Approx(weights))
    }

    /// Uniform exact weights `(1/m, ..., 1/m)`.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyOutcomes);
        }
        let w = BigRational::new(1.into(), (m as i64).into());
        Ok(WeightVector::Exact(vec![w; m]))
    }

    /// The exact two-outcome vector `(p, 1 - p)`.
    pub fn exact_pair(plus: BigRational) -> Result<Self> {
        if plus.is_negative() || plus > BigRational::one() {
            return Err(Error::RatioOutOfRange { ratio: format_ratio(&plus) });
        }
        let minus = BigRational::one() - &plus;
        Ok(WeightVector::Exact(vec![plus, minus]))
    }

    pub fn len(&self) -> usize {
        match self {
            WeightVector::Exact(v) => v.len(),
            WeightVector::Approx(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, WeightVector::Exact(_))
    }

    pub fn get_f64(&self, i: usize) -> f64 {
        match self {
            WeightVector::Exact(v) => v[i].to_f64().unwrap_or(f64::NAN),
            WeightVector::Approx(v) => v[i],
        }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.get_f64(i)).collect()
    }

    pub fn as_exact(&self) -> Option<&[BigRational]> {
        match self {
            WeightVector::Exact(v) => Some(v),
            WeightVector::Approx(_) => None,
        }
    }

    /// The two-outcome vector with its components exchanged.
    pub fn swapped_pair(&self) -> Result<Self> {
        if self.len() != 2 {
            return Err(Error::UnsupportedArity { expected: 2, got: self.len() });
        }
        Ok(match self {
            WeightVector::Exact(v) => WeightVector::Exact(vec![v[1].clone(), v[0].clone()]),
            WeightVector::Approx(v) => WeightVector::Approx(vec![v[1], v[0]]),
        })
    }

    /// Total-variation distance, exact when both vectors are exact.
    pub fn total_variation(&self, other: &Self) -> Result<Scalar> {
        if self.len() != other.len() {
            return Err(Error::ArityMismatch { weights: self.len(), rewards: other.len() });
        }
        match (self, other) {
            (WeightVector::Exact(a), WeightVector::Exact(b)) => {
                let sum: BigRational = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
                Ok(Scalar::Exact(sum / BigRational::from_integer(2.into())))
            }
            _ => {
                let sum: f64 = (0..self.len())
                    .map(|i| (self.get_f64(i) - other.get_f64(i)).abs())
                    .sum();
                Ok(Scalar::Approx(sum / 2.0))
            }
        }
    }
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            WeightVector::Exact(v) => {
                let mut seq = serializer.serialize_seq(Some(v.len()))?;
                for w in v {
                    seq.serialize_element(&format_ratio(w))?;
                }
                seq.end()
            }
            WeightVector::Approx(v) => {
                let mut seq = serializer.serialize_seq(Some(v.len()))?;
                for w in v {
                    seq.serialize_element(w)?;
                }
                seq.end()
            }
        }
    }
}
