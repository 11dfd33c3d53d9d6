//! Quaternion scalars `a0 + a1 i + a2 j + a3 k` over a [`Scalar`] backend.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Debug, Default, Hash, Eq)]
pub struct Quaternion<T> {
    pub re: T,
    pub i: T,
    pub j: T,
    pub k: T,
}

impl<T: Scalar> Quaternion<T> {
    pub fn new(re: T, i: T, j: T, k: T) -> Self {
        Quaternion { re, i, j, k }
    }

    pub fn zero() -> Self {
        Self::from_real(T::zero())
    }

    pub fn one() -> Self {
        Self::from_real(T::one())
    }

    pub fn from_real(re: T) -> Self {
        Quaternion { re, i: T::zero(), j: T::zero(), k: T::zero() }
    }

    pub fn unit_i() -> Self {
        Quaternion::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn unit_j() -> Self {
        Quaternion::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn unit_k() -> Self {
        Quaternion::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    /// Integer components, convenient for literals in tests and examples.
    pub fn from_ints(a0: i64, a1: i64, a2: i64, a3: i64) -> Self {
        Quaternion::new(T::from_i64(a0), T::from_i64(a1), T::from_i64(a2), T::from_i64(a3))
    }

    pub fn components(&self) -> [&T; 4] {
        [&self.re, &self.i, &self.j, &self.k]
    }

    pub fn into_components(self) -> [T; 4] {
        [self.re, self.i, self.j, self.k]
    }

    pub fn from_components([re, i, j, k]: [T; 4]) -> Self {
        Quaternion { re, i, j, k }
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }

    /// True when the vector part vanishes exactly.
    pub fn is_real(&self) -> bool {
        self.i.is_zero() && self.j.is_zero() && self.k.is_zero()
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.re.clone(), -self.i.clone(), -self.j.clone(), -self.k.clone())
    }

    pub fn norm2(&self) -> T {
        self.re.clone() * self.re.clone()
            + self.i.clone() * self.i.clone()
            + self.j.clone() * self.j.clone()
            + self.k.clone() * self.k.clone()
    }

    /// Vector-part squared norm.
    pub fn imag_norm2(&self) -> T {
        self.i.clone() * self.i.clone() + self.j.clone() * self.j.clone() + self.k.clone() * self.k.clone()
    }

    /// Euclidean modulus evaluated in `f64`.
    pub fn abs_f64(&self) -> f64 {
        let [a, b, c, d] = self.components().map(|x| x.to_f64());
        (a * a + b * b + c * c + d * d).sqrt()
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm2();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conj();
        Ok(Quaternion::new(c.re.checked_div(&n)?, c.i.checked_div(&n)?, c.j.checked_div(&n)?, c.k.checked_div(&n)?))
    }

    /// Multiplication by a real scalar (central, so the side is irrelevant).
    pub fn scale(&self, s: &T) -> Self {
        Quaternion::new(
            self.re.clone() * s.clone(),
            self.i.clone() * s.clone(),
            self.j.clone() * s.clone(),
            self.k.clone() * s.clone(),
        )
    }

    pub fn div_real(&self, s: &T) -> Result<Self> {
        Ok(Quaternion::new(
            self.re.checked_div(s)?,
            self.i.checked_div(s)?,
            self.j.checked_div(s)?,
            self.k.checked_div(s)?,
        ))
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    pub fn to_f64(&self) -> Quaternion<f64> {
        Quaternion::from_components(self.components().map(|c| c.to_f64()))
    }

    pub fn from_f64(q: &Quaternion<f64>) -> Result<Self> {
        let conv = |v: f64| T::from_f64(v).ok_or(Error::NotANumber);
        Ok(Quaternion::new(conv(q.re)?, conv(q.i)?, conv(q.j)?, conv(q.k)?))
    }
}

pub fn mul<T: Scalar>(p: &Quaternion<T>, q: &Quaternion<T>) -> Quaternion<T> {
    let (a0, a1, a2, a3) = (&p.re, &p.i, &p.j, &p.k);
    let (b0, b1, b2, b3) = (&q.re, &q.i, &q.j, &q.k);
    let m = |x: &T, y: &T| x.clone() * y.clone();
    Quaternion {
        re: m(a0, b0) - m(a1, b1) - m(a2, b2) - m(a3, b3),
        i: m(a0, b1) + m(a1, b0) + m(a2, b3) - m(a3, b2),
        j: m(a0, b2) - m(a1, b3) + m(a2, b0) + m(a3, b1),
        k: m(a0, b3) + m(a1, b2) - m(a2, b1) + m(a3, b0),
    }
}

impl<T: Scalar> Mul for Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, rhs: Self) -> Self {
        mul(&self, &rhs)
    }
}

impl<'a, T: Scalar> Mul<&'a Quaternion<T>> for &'a Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, rhs: &'a Quaternion<T>) -> Quaternion<T> {
        mul(self, rhs)
    }
}

impl<T: Scalar> Add for Quaternion<T> {
    type Output = Quaternion<T>;
    fn add(self, rhs: Self) -> Self {
        Quaternion::new(self.re + rhs.re, self.i + rhs.i, self.j + rhs.j, self.k + rhs.k)
    }
}

impl<'a, T: Scalar> Add<&'a Quaternion<T>> for &'a Quaternion<T> {
    type Output = Quaternion<T>;
    fn add(self, rhs: &'a Quaternion<T>) -> Quaternion<T> {
        self.clone() + rhs.clone()
    }
}

impl<T: Scalar> AddAssign for Quaternion<T> {
    fn add_assign(&mut self, rhs: Self) {
        let lhs = self.clone();
        *self = lhs + rhs;
    }
}

impl<T: Scalar> Sub for Quaternion<T> {
    type Output = Quaternion<T>;
    fn sub(self, rhs: Self) -> Self {
        Quaternion::new(self.re - rhs.re, self.i - rhs.i, self.j - rhs.j, self.k - rhs.k)
    }
}

impl<'a, T: Scalar> Sub<&'a Quaternion<T>> for &'a Quaternion<T> {
    type Output = Quaternion<T>;
    fn sub(self, rhs: &'a Quaternion<T>) -> Quaternion<T> {
        self.clone() - rhs.clone()
    }
}

impl<T: Scalar> Neg for Quaternion<T> {
    type Output = Quaternion<T>;
    fn neg(self) -> Self {
        Quaternion::new(-self.re, -self.i, -self.j, -self.k)
    }
}

impl<T: Scalar> fmt::Display for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (c, unit) in self.components().into_iter().zip(["", "i", "j", "k"]) {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (wrote, neg) {
                (false, false) => write!(f, "{mag}{unit}")?,
                (false, true) => write!(f, "-{mag}{unit}")?,
                (true, false) => write!(f, " + {mag}{unit}")?,
                (true, true) => write!(f, " - {mag}{unit}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Splits `s` (whitespace already removed) into signed terms. A sign directly
/// after an exponent marker belongs to the number.
fn split_terms(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut terms = Vec::new();
    let mut start = 0;
    for idx in 1..bytes.len() {
        let c = bytes[idx];
        let prev = bytes[idx - 1];
        if (c == b'+' || c == b'-') && prev != b'e' && prev != b'E' && prev != b'/' {
            terms.push(&s[start..idx]);
            start = idx;
        }
    }
    terms.push(&s[start..]);
    terms
}

impl<T: Scalar> FromStr for Quaternion<T> {
    type Err = Error;

    /// Accepts forms such as `-1013/864 + 1/144i - 359/864j + 173/144k`,
    /// `i`, `-4j`, `2.5`, `3*k`. Repeated units are summed.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty quaternion literal".into()));
        }
        let mut parts = [T::zero(), T::zero(), T::zero(), T::zero()];
        for term in split_terms(&compact) {
            let (slot, coeff) = match term.chars().last() {
                Some('i') => (1, &term[..term.len() - 1]),
                Some('j') => (2, &term[..term.len() - 1]),
                Some('k') => (3, &term[..term.len() - 1]),
                _ => (0, term),
            };
            let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
            let value = match coeff {
                "" | "+" => T::one(),
                "-" => -T::one(),
                c => {
                    let c = c.strip_prefix('+').unwrap_or(c);
                    T::parse_text(c).map_err(|_| Error::Parse(format!("invalid quaternion literal '{s}'")))?
                }
            };
            parts[slot] = parts[slot].clone() + value;
        }
        Ok(Quaternion::from_components(parts))
    }
}
