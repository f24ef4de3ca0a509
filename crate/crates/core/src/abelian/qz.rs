use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of Q/Z stored as `num/den` with `0 <= num < den` and `gcd(num, den) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Qz {
    num: i128,
    den: i128,
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Qz {
    pub const ZERO: Qz = Qz { num: 0, den: 1 };

    pub fn new(num: i128, den: i128) -> Self {
        assert!(den > 0, "denominator must be positive");
        let num = num.rem_euclid(den);
        let g = gcd(num, den).max(1);
        Qz {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Additive order in Q/Z, i.e. the reduced denominator.
    pub fn order(&self) -> i128 {
        self.den
    }

    pub fn scale(&self, k: i128) -> Qz {
        let n = (self.num % self.den) * (k.rem_euclid(self.den));
        Qz::new(n, self.den)
    }
}

impl std::ops::Add for Qz {
    type Output = Qz;
    fn add(self, o: Qz) -> Qz {
        let g = gcd(self.den, o.den);
        let den = self.den / g * o.den;
        Qz::new(self.num * (den / self.den) + o.num * (den / o.den), den)
    }
}

impl std::ops::Neg for Qz {
    type Output = Qz;
    fn neg(self) -> Qz {
        Qz::new(-self.num, self.den)
    }
}

impl std::ops::Sub for Qz {
    type Output = Qz;
    fn sub(self, o: Qz) -> Qz {
        self + (-o)
    }
}

impl std::iter::Sum for Qz {
    fn sum<I: Iterator<Item = Qz>>(iter: I) -> Qz {
        iter.fold(Qz::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Qz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Qz {
    type Err = Error;
    fn from_str(s: &str) -> Result<Qz> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: i128 = n
            .parse()
            .map_err(|_| Error::Invalid(format!("bad numerator in {s:?}")))?;
        let d: i128 = d
            .parse()
            .map_err(|_| Error::Invalid(format!("bad denominator in {s:?}")))?;
        if d <= 0 {
            return Err(Error::Invalid(format!("non-positive denominator in {s:?}")));
        }
        Ok(Qz::new(n, d))
    }
}

impl Serialize for Qz {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Qz {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Qz, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
