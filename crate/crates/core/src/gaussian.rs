//! Gaussian integers and integer coefficient vectors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// An element of Z + jZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
    pub const J: GaussInt = GaussInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }

    /// Multiplication by j.
    pub fn rotate(self) -> Self {
        Self::new(-self.im, self.re)
    }
}

impl Add for GaussInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Neg for GaussInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl From<i64> for GaussInt {
    fn from(re: i64) -> Self {
        Self::new(re, 0)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (re, im) if im < 0 => write!(f, "{re}{im}j"),
            (re, im) => write!(f, "{re}+{im}j"),
        }
    }
}

/// Integer coefficients of one equation, one entry per transmitter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoefficientVector(Vec<GaussInt>);

impl CoefficientVector {
    pub fn new(entries: Vec<GaussInt>) -> Self {
        Self(entries)
    }

    pub fn from_real(entries: &[i64]) -> Self {
        Self(entries.iter().map(|&x| GaussInt::from(x)).collect())
    }

    /// Unit vector with a one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = vec![GaussInt::ZERO; len];
        v[index] = GaussInt::ONE;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[GaussInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    /// Exact squared norm.
    pub fn norm_sqr(&self) -> i64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Index of the single nonzero entry if the vector is a unit vector.
    pub fn unit_index(&self) -> Option<usize> {
        let mut found = None;
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if *a != GaussInt::ONE || found.is_some() {
                return None;
            }
            found = Some(i);
        }
        found
    }

    pub fn scale(&self, u: GaussInt) -> Self {
        Self(self.0.iter().map(|&a| u * a).collect())
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.0.iter().map(|a| a.to_complex()).collect()
    }

    /// Flattened key (Re a1, Im a1, Re a2, ...) used for ordering.
    fn key(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().flat_map(|a| [a.re, a.im])
    }

    /// Lexicographic comparison on (Re a1, Im a1, Re a2, ...).
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(other.key())
    }

    /// Representative of the rotation class {a, -a, ja, -ja}: the
    /// lexicographically largest member.
    pub fn canonical(&self) -> Self {
        let mut best = self.clone();
        let mut cur = self.clone();
        for _ in 0..3 {
            cur = cur.scale(GaussInt::J);
            if cur.lex_cmp(&best).is_gt() {
                best = cur.clone();
            }
        }
        best
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }
}

impl std::ops::Index<usize> for CoefficientVector {
    type Output = GaussInt;
    fn index(&self, i: usize) -> &GaussInt {
        &self.0[i]
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}
