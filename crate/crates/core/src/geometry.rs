//! Axis-aligned boxes in decision space.

use crate::error::{Error, Result};
use crate::scalar::{norm, Scalar};

/// A closed axis-aligned hyperrectangle `[lo_1, hi_1] x ... x [lo_n, hi_n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchBox<T> {
    lo: Vec<T>,
    hi: Vec<T>,
}

impl<T: Scalar> SearchBox<T> {
    pub fn new(lo: Vec<T>, hi: Vec<T>) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::InvalidBox("zero-dimensional box".into()));
        }
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        for (k, (&a, &b)) in lo.iter().zip(&hi).enumerate() {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidBox(format!("non-finite bound in coordinate {k}")));
            }
            if a > b {
                return Err(Error::InvalidBox(format!("lo > hi in coordinate {k}")));
            }
        }
        Ok(Self { lo, hi })
    }

    /// The cube `[lo, hi]^n`.
    pub fn cube(n: usize, lo: T, hi: T) -> Result<Self> {
        Self::new(vec![lo; n], vec![hi; n])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[T] {
        &self.lo
    }

    pub fn hi(&self) -> &[T] {
        &self.hi
    }

    pub fn midpoint(&self) -> Vec<T> {
        let two = T::lit(2.0);
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&a, &b)| (a + b) / two)
            .collect()
    }

    pub fn width(&self) -> Vec<T> {
        self.lo.iter().zip(&self.hi).map(|(&a, &b)| b - a).collect()
    }

    /// Euclidean norm of the width vector.
    pub fn diameter(&self) -> T {
        norm(&self.width())
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(&v, (&a, &b))| a <= v && v <= b)
    }

    /// Index of the widest coordinate; ties go to the lowest index.
    pub fn widest_axis(&self) -> usize {
        let w = self.width();
        let mut best = 0;
        for k in 1..w.len() {
            if w[k] > w[best] {
                best = k;
            }
        }
        best
    }

    /// Splits the box at the midpoint of its widest coordinate.
    pub fn bisect(&self) -> Result<(Self, Self)> {
        let axis = self.widest_axis();
        if self.hi[axis] <= self.lo[axis] {
            return Err(Error::DegenerateBox);
        }
        let cut = (self.lo[axis] + self.hi[axis]) / T::lit(2.0);
        let mut left_hi = self.hi.clone();
        left_hi[axis] = cut;
        let mut right_lo = self.lo.clone();
        right_lo[axis] = cut;
        Ok((
            Self {
                lo: self.lo.clone(),
                hi: left_hi,
            },
            Self {
                lo: right_lo,
                hi: self.hi.clone(),
            },
        ))
    }

    /// Maps a point of the unit cube affinely into the box.
    pub(crate) fn lerp(&self, unit: &[T]) -> Vec<T> {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(unit)
            .map(|((&a, &b), &t)| (a + (b - a) * t).max(a).min(b))
            .collect()
    }

    pub(crate) fn clamp(&self, x: &mut [T]) {
        for ((v, &a), &b) in x.iter_mut().zip(&self.lo).zip(&self.hi) {
            *v = v.max(a).min(b);
        }
    }

    /// True when `other` lies inside `self`.
    pub fn encloses(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && (0..self.dim()).all(|k| self.lo[k] <= other.lo[k] && other.hi[k] <= self.hi[k])
    }
}
