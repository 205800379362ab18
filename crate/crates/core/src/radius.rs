use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Type `r` of an annulus or hyperbola: a real number above one, or the
/// cross at `r = ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Finite(f64),
    Infinite,
}

impl Radius {
    pub fn new(r: f64) -> Result<Self> {
        if r == f64::INFINITY {
            Ok(Radius::Infinite)
        } else if r.is_finite() && r > 1.0 {
            Ok(Radius::Finite(r))
        } else {
            Err(Error::InvalidInput("r must exceed 1 or be inf".into()))
        }
    }

    /// `1/r²`, zero on the cross.
    pub fn inv_sq(self) -> f64 {
        match self {
            Radius::Finite(r) => 1.0 / (r * r),
            Radius::Infinite => 0.0,
        }
    }

    /// `(r + 1/r)/r = 1 + 1/r²`, the scale of the dilation unitary.
    pub fn dilation_scale(self) -> f64 {
        1.0 + self.inv_sq()
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Radius::Finite(r) => Some(r),
            Radius::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Radius::Infinite)
    }

    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Finite(r) => write!(f, "{r}"),
            Radius::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Radius {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Radius::Infinite),
            _ => {
                let r: f64 = s.parse().map_err(|_| Error::InvalidInput("r must exceed 1 or be inf".into()))?;
                Radius::new(r)
            }
        }
    }
}

// JSON has no infinity; the cross is written as the string "inf".
impl Serialize for Radius {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Radius::Finite(r) => serializer.serialize_f64(*r),
            Radius::Infinite => serializer.serialize_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_inf_and_reals() {
        assert_eq!("inf".parse::<Radius>().unwrap(), Radius::Infinite);
        assert_eq!("2".parse::<Radius>().unwrap(), Radius::Finite(2.0));
        assert_eq!(Radius::new(f64::INFINITY).unwrap(), Radius::Infinite);
    }

    #[test]
    fn rejects_r_at_most_one() {
        for bad in ["0.5", "1", "-3", "nan", "abc"] {
            let err = bad.parse::<Radius>().unwrap_err();
            assert_eq!(err.to_string(), "invalid input: r must exceed 1 or be inf");
        }
    }

    #[test]
    fn scale_is_one_plus_inverse_square() {
        assert_eq!(Radius::Finite(2.0).dilation_scale(), 1.25);
        assert_eq!(Radius::Infinite.dilation_scale(), 1.0);
        let r = 1.5_f64;
        let c = (r + 1.0 / r) / r;
        assert!((Radius::Finite(r).dilation_scale() - c).abs() < 1e-15);
    }
}
