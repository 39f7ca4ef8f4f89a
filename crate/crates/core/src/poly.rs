//! Exact Laurent polynomials in one variable `q` with integer coefficients.
//!
//! Stored densely: `coeffs[i]` is the coefficient of `q^(low + i)`. The
//! representation is kept normalized (no zero coefficient at either end), so
//! structural equality is polynomial equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<i64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse polynomial `{0}`")]
pub struct PolyParseError(pub String);

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    /// `c * q^e`.
    pub fn monomial(c: i64, e: i32) -> Self {
        Self::from_coeffs(e, vec![c])
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_coeffs(low: i32, coeffs: Vec<i64>) -> Self {
        let mut p = LaurentPoly { low, coeffs };
        p.normalize();
        p
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        let mut out = LaurentPoly::zero();
        for (e, c) in terms {
            out += &LaurentPoly::monomial(c, e);
        }
        out
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| **c == 0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs == [1]
    }

    pub fn coeff(&self, e: i32) -> i64 {
        let i = e as i64 - self.low as i64;
        if i < 0 || i >= self.coeffs.len() as i64 {
            0
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Lowest exponent with nonzero coefficient, `None` for zero.
    pub fn min_degree(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_degree(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(move |(i, c)| (self.low + i as i32, *c))
    }

    /// The bar involution `q -> q^-1`.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        let high = self.low + self.coeffs.len() as i32 - 1;
        LaurentPoly { low: -high, coeffs }
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::from_coeffs(self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Keeps only the terms with exponent strictly positive (`sign > 0`) or
    /// strictly negative (`sign < 0`).
    pub fn strict_part(&self, sign: i32) -> Self {
        Self::from_terms(self.terms().filter(|(e, _)| e.signum() == sign.signum()))
    }

    /// Substitutes `q -> q^k` (k may be negative).
    pub fn substitute_power(&self, k: i32) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c)))
    }

    fn add_scaled(&mut self, other: &LaurentPoly, sign: i64) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = other.scale(sign);
            return;
        }
        let low = self.low.min(other.low);
        let high = self.max_degree().unwrap().max(other.max_degree().unwrap());
        let mut coeffs = vec![0i64; (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.low - low) as usize + i] += sign * c;
        }
        self.low = low;
        self.coeffs = coeffs;
        self.normalize();
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled(rhs, 1);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled(rhs, -1);
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::from_coeffs(self.low + rhs.low, coeffs)
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    /// Ascending powers: `1+q`, `q^-1-2q^2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if c < 0 {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let a = c.unsigned_abs();
            if e == 0 {
                write!(f, "{a}")?;
                continue;
            }
            if a != 1 {
                write!(f, "{a}")?;
            }
            if e == 1 {
                write!(f, "q")?;
            } else {
                write!(f, "q^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl FromStr for LaurentPoly {
    type Err = PolyParseError;

    /// Inverse of `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PolyParseError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let mut out = LaurentPoly::zero();
        let bytes = t.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i != 0 {
                return Err(err());
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: Option<i64> = if i > start { Some(t[start..i].parse().map_err(|_| err())?) } else { None };
            let mut exp = 0i32;
            if i < bytes.len() && bytes[i] == b'q' {
                i += 1;
                exp = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let es = i;
                    if i < bytes.len() && bytes[i] == b'-' {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    exp = t[es..i].parse().map_err(|_| err())?;
                }
            } else if coeff.is_none() {
                return Err(err());
            }
            out += &LaurentPoly::monomial(sign * coeff.unwrap_or(1), exp);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_documented_format() {
        let p = LaurentPoly::one() + LaurentPoly::q();
        assert_eq!(p.to_string(), "1+q");
        assert_eq!(LaurentPoly::from_terms([(0, 1), (2, 1)]).to_string(), "1+q^2");
        assert_eq!(LaurentPoly::from_terms([(-1, 1), (2, -2)]).to_string(), "q^-1-2q^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::monomial(-1, 1).to_string(), "-q");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "1", "1+q", "q^-1-2q^2", "-q", "-q^-3+3+q^4"] {
            let p: LaurentPoly = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("q^".parse::<LaurentPoly>().is_err());
        assert!("x".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn arithmetic() {
        let a = LaurentPoly::from_terms([(-1, 1), (1, 1)]);
        let b = LaurentPoly::from_terms([(1, 1), (-1, -1)]);
        // (q + q^-1)(q - q^-1) = q^2 - q^-2
        assert_eq!(&a * &b, LaurentPoly::from_terms([(2, 1), (-2, -1)]));
        assert!((&a - &a).is_zero());
        assert_eq!(a.bar(), a);
        assert_eq!(b.bar(), -&b);
        assert_eq!(b.strict_part(1), LaurentPoly::q());
        assert_eq!(a.eval_one(), 2);
        assert_eq!(LaurentPoly::q().substitute_power(-2).to_string(), "q^-2");
    }
}
