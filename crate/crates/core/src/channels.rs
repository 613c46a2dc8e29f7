//! Row-stochastic channel matrices and a few standard constructors.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Exp1};

use crate::error::{Error, Result};
use crate::measures::{Distribution, ExtendedReal};

/// Identifier of the pseudo-random generator behind every seeded routine.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng/seed_from_u64";

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A transition matrix `W`: one output distribution per input letter.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    rows: Vec<Distribution>,
    outputs: usize,
}

impl Channel {
    /// Each row must be a probability vector (sum within `1e-9` of one)
    /// and all rows must have the same length.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(row, r)| {
                Distribution::new(r).map_err(|e| Error::InvalidRow {
                    row,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn from_rows(rows: Vec<Distribution>) -> Result<Self> {
        let outputs = rows.first().ok_or(Error::Empty)?.len();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != outputs {
                return Err(Error::InvalidRow {
                    row,
                    source: Box::new(Error::DimensionMismatch {
                        expected: outputs,
                        found: r.len(),
                    }),
                });
            }
        }
        Ok(Channel { rows, outputs })
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn row(&self, x: usize) -> &Distribution {
        &self.rows[x]
    }

    pub fn rows(&self) -> &[Distribution] {
        &self.rows
    }

    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.as_slice().to_vec()).collect()
    }
}

/// Binary symmetric channel with crossover probability `p ∈ [0, 0.5]`.
pub fn bsc(p: f64) -> Result<Channel> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "crossover probability {p} is outside [0, 0.5]"
        )));
    }
    Channel::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
}

/// The noiseless channel on `n` letters.
pub fn identity(n: usize) -> Result<Channel> {
    if n == 0 {
        return Err(Error::Empty);
    }
    Channel::from_rows((0..n).map(|i| Distribution::point(n, i)).collect::<Result<_>>()?)
}

/// Draws from the flat Dirichlet distribution on the `n`-simplex.
pub fn random_distribution<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Distribution> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let draws: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    Distribution::new(draws.into_iter().map(|d| d / total).collect())
}

/// A channel whose rows are independent flat-Dirichlet draws, reproducible by `seed`.
pub fn random_channel(inputs: usize, outputs: usize, seed: u64) -> Result<Channel> {
    if inputs == 0 || outputs == 0 {
        return Err(Error::Empty);
    }
    let mut rng = seeded_rng(seed);
    Channel::from_rows(
        (0..inputs)
            .map(|_| random_distribution(&mut rng, outputs))
            .collect::<Result<_>>()?,
    )
}

/// Finite reconstruction of the partially noiseless channel on `(0, 1) → (0, 2)`
/// whose density given input `x` is
/// `(1{y < x} + (y − x)) / γ` on `(0, 1)` plus an atom of mass `(γ − ½)/γ` at `x + 1`.
///
/// Inputs sit on the midpoint grid `x_i = (i − ½)/n` with uniform weights. The
/// first `m` outputs are equal-width bins of `(0, 1)` whose masses are exact
/// integrals of the (piecewise linear) density; the next `n` outputs are the
/// atoms, one per input, kept as separate symbols.
#[derive(Debug, Clone)]
pub struct Example1 {
    pub channel: Channel,
    pub input: Distribution,
    pub gamma: f64,
    pub bins: usize,
    pub atoms: usize,
}

impl Example1 {
    pub fn new(gamma: f64, n: usize, m: usize) -> Result<Self> {
        if !(gamma > 0.5 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma must exceed 0.5, got {gamma}")));
        }
        if n < 2 || m < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid sizes must be at least 2, got n={n}, m={m}"
            )));
        }
        let atom_mass = (gamma - 0.5) / gamma;
        let rows = (1..=n)
            .map(|i| {
                let x = (i as f64 - 0.5) / n as f64;
                let mut row = vec![0.0; m + n];
                for (j, cell) in row.iter_mut().take(m).enumerate() {
                    let a = j as f64 / m as f64;
                    let b = (j + 1) as f64 / m as f64;
                    *cell = bin_mass(a, b, x) / gamma;
                }
                row[m + i - 1] = atom_mass;
                row
            })
            .collect();
        Ok(Example1 {
            channel: Channel::new(rows)?,
            input: Distribution::uniform(n)?,
            gamma,
            bins: m,
            atoms: n,
        })
    }

    /// Output indices of the `(0, 1)` bins.
    pub fn bin_range(&self) -> std::ops::Range<usize> {
        0..self.bins
    }

    /// Output indices of the atoms at `x_i + 1`.
    pub fn atom_range(&self) -> std::ops::Range<usize> {
        self.bins..self.bins + self.atoms
    }
}

/// `∫_a^b (1{y < x} + y − x) dy`, split at `x` so both pieces are non-negative.
fn bin_mass(a: f64, b: f64, x: f64) -> f64 {
    let left_hi = b.min(x);
    let left = if left_hi > a {
        (left_hi - a) * (1.0 + 0.5 * (a + left_hi) - x)
    } else {
        0.0
    };
    let right_lo = a.max(x);
    let right = if b > right_lo {
        (b - right_lo) * (0.5 * (b + right_lo) - x)
    } else {
        0.0
    };
    left + right
}

/// `(α ln γ + ln(1 + α)) / (1 − α)` for `α < 1`, and `+∞` for `α ≥ 1`.
pub fn example1_closed_form(gamma: f64, alpha: f64) -> Result<ExtendedReal> {
    if !(gamma > 0.5) {
        return Err(Error::InvalidParameter(format!("gamma must exceed 0.5, got {gamma}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::NonPositiveOrder(alpha));
    }
    if alpha >= 1.0 {
        return Ok(ExtendedReal::Infinite);
    }
    Ok(ExtendedReal::Finite(
        (alpha * gamma.ln() + (1.0 + alpha).ln()) / (1.0 - alpha),
    ))
}
