//! Vectors of non-negative mass on a finite alphabet and the arithmetic
//! conventions the divergences rely on.
//!
//! A [`FiniteMeasure`] is any non-negative vector; a [`Distribution`] is one
//! that sums to one within [`NORMALIZATION_TOLERANCE`]. Exact zeros are kept
//! as they are: the support of a measure decides absolute continuity, so no
//! smoothing happens anywhere in this crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use crate::error::{Error, Result};

/// Accepted deviation of a probability vector's total mass from one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Orders within this distance of one are treated as exactly one.
pub const ORDER_ONE_TOLERANCE: f64 = 1e-12;

/// A divergence order in `(0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 {
            Ok(Order(value))
        } else {
            Err(Error::NonPositiveOrder(value))
        }
    }

    pub const ONE: Order = Order(1.0);
    pub const INFINITY: Order = Order(f64::INFINITY);

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        (self.0 - 1.0).abs() <= ORDER_ONE_TOLERANCE
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `1 ∧ α`
    pub fn min_one(self) -> Order {
        Order(self.0.min(1.0))
    }

    /// `1 ∨ α`
    pub fn max_one(self) -> Order {
        Order(self.0.max(1.0))
    }

    /// Fails with [`Error::UnsupportedOrder`] for `α = ∞`.
    pub fn require_finite(self) -> Result<Self> {
        if self.is_infinite() {
            Err(Error::UnsupportedOrder(self.0))
        } else {
            Ok(self)
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// A real number or `+∞`.
///
/// Divergences take the value `+∞` routinely (absolute continuity failures),
/// so infinity is carried as its own variant instead of a sentinel float.
/// The derived ordering puts every finite value below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);

    /// Maps `f64::INFINITY` to [`ExtendedReal::Infinite`]. NaN and `-∞` are
    /// outside the range of every quantity in this crate.
    pub fn from_f64(value: f64) -> Self {
        debug_assert!(!value.is_nan(), "NaN has no extended-real value");
        if value == f64::INFINITY {
            ExtendedReal::Infinite
        } else {
            ExtendedReal::Finite(value)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinite => None,
        }
    }

    /// Lossy view as `f64`, with `+∞` as `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::Infinite => f64::INFINITY,
        }
    }

    /// Multiplication by a non-negative weight with `0 · ∞ = 0`.
    pub fn scale(self, weight: f64) -> Self {
        debug_assert!(weight >= 0.0);
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(weight * v),
            ExtendedReal::Infinite if weight == 0.0 => ExtendedReal::ZERO,
            ExtendedReal::Infinite => ExtendedReal::Infinite,
        }
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.to_f64().total_cmp(&other.to_f64())
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;
    fn add(self, rhs: ExtendedReal) -> ExtendedReal {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::Infinite,
        }
    }
}

impl Add<f64> for ExtendedReal {
    type Output = ExtendedReal;
    fn add(self, rhs: f64) -> ExtendedReal {
        self + ExtendedReal::Finite(rhs)
    }
}

impl Sub<f64> for ExtendedReal {
    type Output = ExtendedReal;
    fn sub(self, rhs: f64) -> ExtendedReal {
        self + ExtendedReal::Finite(-rhs)
    }
}

impl std::iter::Sum for ExtendedReal {
    fn sum<I: Iterator<Item = ExtendedReal>>(iter: I) -> Self {
        iter.fold(ExtendedReal::ZERO, Add::add)
    }
}

impl From<f64> for ExtendedReal {
    fn from(value: f64) -> Self {
        ExtendedReal::from_f64(value)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => fmt::Display::fmt(v, f),
            ExtendedReal::Infinite => f.write_str("inf"),
        }
    }
}

/// A non-negative, not necessarily normalized, measure on `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasure {
    mass: Vec<f64>,
}

impl FiniteMeasure {
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = mass
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidEntry { index, value });
        }
        Ok(FiniteMeasure { mass })
    }

    pub fn zeros(len: usize) -> Self {
        FiniteMeasure {
            mass: vec![0.0; len],
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.mass
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.mass
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        support_of(&self.mass)
    }

    /// `c · self` for `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        FiniteMeasure::new(self.mass.iter().map(|m| m * c).collect())
    }
}

impl AsRef<[f64]> for FiniteMeasure {
    fn as_ref(&self) -> &[f64] {
        &self.mass
    }
}

impl std::ops::Index<usize> for FiniteMeasure {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.mass[i]
    }
}

/// A probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    measure: FiniteMeasure,
}

impl Distribution {
    /// Validates non-negativity and that the entries sum to one within
    /// [`NORMALIZATION_TOLERANCE`]. Inputs are not renormalized.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::from_measure(FiniteMeasure::new(probs)?)
    }

    pub fn from_measure(measure: FiniteMeasure) -> Result<Self> {
        if measure.is_empty() {
            return Err(Error::Empty);
        }
        let sum = measure.total_mass();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized {
                sum,
                tolerance: NORMALIZATION_TOLERANCE,
            });
        }
        Ok(Distribution { measure })
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Empty);
        }
        Ok(Distribution {
            measure: FiniteMeasure {
                mass: vec![1.0 / len as f64; len],
            },
        })
    }

    /// Point mass on `index`.
    pub fn point(len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: index + 1,
            });
        }
        let mut mass = vec![0.0; len];
        mass[index] = 1.0;
        Ok(Distribution {
            measure: FiniteMeasure { mass },
        })
    }

    pub fn as_slice(&self) -> &[f64] {
        self.measure.as_slice()
    }

    pub fn as_measure(&self) -> &FiniteMeasure {
        &self.measure
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.measure.into_vec()
    }

    pub fn len(&self) -> usize {
        self.measure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measure.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        self.measure.support()
    }
}

impl AsRef<[f64]> for Distribution {
    fn as_ref(&self) -> &[f64] {
        self.measure.as_slice()
    }
}

impl std::ops::Index<usize> for Distribution {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.measure[i]
    }
}

impl From<Distribution> for FiniteMeasure {
    fn from(d: Distribution) -> Self {
        d.measure
    }
}

pub(crate) fn support_of(v: &[f64]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, &m)| m > 0.0)
        .map(|(i, _)| i)
        .collect()
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Total variation norm of `a − b`, i.e. `Σ |a(y) − b(y)|`.
pub fn tv_distance(a: impl AsRef<[f64]>, b: impl AsRef<[f64]>) -> Result<f64> {
    let (a, b) = (a.as_ref(), b.as_ref());
    check_len(a.len(), b.len())?;
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum())
}

/// Splits `q` into the part absolutely continuous with respect to
/// `reference` and the part singular to it.
pub fn lebesgue_decompose(
    q: &FiniteMeasure,
    reference: impl AsRef<[f64]>,
) -> Result<(FiniteMeasure, FiniteMeasure)> {
    let reference = reference.as_ref();
    check_len(q.len(), reference.len())?;
    let (ac, sing) = q
        .as_slice()
        .iter()
        .zip(reference)
        .map(|(&m, &r)| if r > 0.0 { (m, 0.0) } else { (0.0, m) })
        .unzip();
    Ok((FiniteMeasure { mass: ac }, FiniteMeasure { mass: sing }))
}

/// Returns `q / ‖q‖` together with `‖q‖`.
pub fn normalize(q: &FiniteMeasure) -> Result<(Distribution, f64)> {
    let total = q.total_mass();
    if total <= 0.0 {
        return Err(Error::ZeroMeasure);
    }
    let mass = q.as_slice().iter().map(|m| m / total).collect();
    Ok((
        Distribution {
            measure: FiniteMeasure { mass },
        },
        total,
    ))
}
