//! Totally antisymmetric tensor fields on a chart.
//!
//! Components live only on strictly increasing index tuples; any other
//! ordering is read through the permutation sign. Indices are 0-based in
//! memory and 1-based whenever they are shown to a user.

mod ops;

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use itertools::Itertools;
use thiserror::Error;

use crate::exprs::ScalarExpr;

pub use ops::{exterior_derivative, invert_two_form, schouten_half, triple_contraction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("repeated index in {}", one_based(.0))]
    RepeatedIndex(Vec<usize>),
    #[error("index tuple {} has {} entries, expected {expected}", one_based(.tuple), .tuple.len())]
    WrongArity { tuple: Vec<usize>, expected: usize },
    #[error("expected degree {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("two-form is degenerate (determinant is identically zero)")]
    DegenerateForm,
    #[error("two-form on an odd-dimensional chart ({0}) is always degenerate")]
    OddDimension(usize),
    #[error("contraction failed antisymmetry at {}", one_based(.0))]
    NotAntisymmetric(Vec<usize>),
}

/// Formats a 0-based tuple as `(1,2,3)`.
pub fn one_based(t: &[usize]) -> String {
    format!("({})", t.iter().map(|i| i + 1).join(","))
}

/// Marker for upper (vector) indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Up;
/// Marker for lower (form) indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Down;

#[derive(PartialEq, Eq)]
pub struct Alternating<V> {
    degree: usize,
    dim: usize,
    comps: BTreeMap<Vec<usize>, ScalarExpr>,
    _variance: PhantomData<V>,
}

/// Multivector field (k-vector).
pub type KVector = Alternating<Up>;
/// Differential form (k-form).
pub type KForm = Alternating<Down>;

impl<V> Clone for Alternating<V> {
    fn clone(&self) -> Self {
        Alternating {
            degree: self.degree,
            dim: self.dim,
            comps: self.comps.clone(),
            _variance: PhantomData,
        }
    }
}

impl<V> fmt::Debug for Alternating<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.comps.iter().map(|(k, v)| (one_based(k), v)))
            .finish()
    }
}

/// Sorts `idx` in place and returns the permutation sign, or `None` on a repeat.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    // insertion sort; tuples are tiny
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl<V> Alternating<V> {
    pub fn zero(degree: usize, dim: usize) -> Self {
        Alternating {
            degree,
            dim,
            comps: BTreeMap::new(),
            _variance: PhantomData,
        }
    }

    /// Builds a tensor from raw `(tuple, value)` entries with 0-based indices.
    /// Unordered tuples are sorted with the sign absorbed; duplicates add up.
    pub fn from_entries(
        degree: usize,
        dim: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, ScalarExpr)>,
    ) -> Result<Self, FieldError> {
        let mut out = Self::zero(degree, dim);
        for (mut tuple, value) in entries {
            if tuple.len() != degree {
                return Err(FieldError::WrongArity {
                    tuple,
                    expected: degree,
                });
            }
            if let Some(&bad) = tuple.iter().find(|&&i| i >= dim) {
                return Err(FieldError::IndexOutOfRange {
                    index: bad + 1,
                    dim,
                });
            }
            let original = tuple.clone();
            let sign = sort_with_sign(&mut tuple).ok_or(FieldError::RepeatedIndex(original))?;
            let value = if sign < 0 { -value } else { value };
            out.accumulate(tuple, value);
        }
        Ok(out)
    }

    /// Same as [`Alternating::from_entries`] but with 1-based indices.
    pub fn from_one_based(
        degree: usize,
        dim: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, ScalarExpr)>,
    ) -> Result<Self, FieldError> {
        let mut shifted = Vec::new();
        for (t, v) in entries {
            if let Some(&bad) = t.iter().find(|&&i| i == 0 || i > dim) {
                return Err(FieldError::IndexOutOfRange { index: bad, dim });
            }
            shifted.push((t.into_iter().map(|i| i - 1).collect(), v));
        }
        Self::from_entries(degree, dim, shifted)
    }

    fn accumulate(&mut self, tuple: Vec<usize>, value: ScalarExpr) {
        if value.is_zero() {
            return;
        }
        let sum = match self.comps.remove(&tuple) {
            Some(old) => &old + &value,
            None => value,
        };
        if !sum.is_zero() {
            self.comps.insert(tuple, sum);
        }
    }

    /// Stores `value` at an already strictly increasing tuple.
    pub(crate) fn set_sorted(&mut self, tuple: Vec<usize>, value: ScalarExpr) {
        debug_assert!(tuple.windows(2).all(|w| w[0] < w[1]));
        if value.is_zero() {
            self.comps.remove(&tuple);
        } else {
            self.comps.insert(tuple, value);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Component at an arbitrary (0-based) tuple, applying the permutation sign.
    pub fn get(&self, idx: &[usize]) -> ScalarExpr {
        let mut t = idx.to_vec();
        match sort_with_sign(&mut t) {
            None => ScalarExpr::zero(),
            Some(s) => match self.comps.get(&t) {
                None => ScalarExpr::zero(),
                Some(v) if s > 0 => v.clone(),
                Some(v) => -v,
            },
        }
    }

    /// Stored (nonzero) components on increasing tuples.
    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &ScalarExpr)> {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(ScalarExpr::is_zero)
    }

    /// All strictly increasing tuples for this degree and dimension.
    pub fn index_tuples(&self) -> impl Iterator<Item = Vec<usize>> {
        (0..self.dim).combinations(self.degree)
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), FieldError> {
        if self.dim != other.dim {
            return Err(FieldError::DimensionMismatch(self.dim, other.dim));
        }
        if self.degree != other.degree {
            return Err(FieldError::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (t, v) in &other.comps {
            out.accumulate(t.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    pub fn scale(&self, k: &ScalarExpr) -> Self {
        self.map(|v| v * k)
    }

    fn map(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> Self {
        let mut out = Self::zero(self.degree, self.dim);
        for (t, v) in &self.comps {
            out.set_sorted(t.clone(), f(v));
        }
        out
    }

    /// Full `dim x dim` component matrix of a degree-2 tensor.
    pub fn matrix(&self) -> Result<Vec<Vec<ScalarExpr>>, FieldError> {
        if self.degree != 2 {
            return Err(FieldError::DegreeMismatch {
                expected: 2,
                got: self.degree,
            });
        }
        Ok((0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(&[i, j])).collect())
            .collect())
    }
}

impl KForm {
    /// A function viewed as a 0-form.
    pub fn function(dim: usize, f: ScalarExpr) -> Self {
        let mut out = Self::zero(0, dim);
        out.set_sorted(Vec::new(), f);
        out
    }
}
