//! Randomized property checks behind `augustin check`.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail};
use augustin::channels::{random_distribution, seeded_rng};
use augustin::{
    descent_minimize, ehb_sandwich, monotonicity_gap, pinsker_slack, renyi_divergence, solve_augustin_mean,
    solve_augustin_mean_from, tv_distance, Channel, DescentOptions, Distribution, Order, SearchDomain,
    SolverOptions, TiltingOrder,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Orders cycled through by the channel-level checks.
pub const CHECK_ORDERS: [f64; 4] = [0.3, 0.7, 1.5, 3.0];

/// Orders used by the divergence-level checks.
pub const DIVERGENCE_ORDERS: [f64; 8] = [0.25, 0.5, 0.9, 1.0, 1.5, 2.0, 4.0, f64::INFINITY];

pub const UNIQUENESS_STARTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Pinsker,
    Monotonicity,
    Sandwich,
    Homogeneity,
    Uniqueness,
    Restriction,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::Pinsker,
        Property::Monotonicity,
        Property::Sandwich,
        Property::Homogeneity,
        Property::Uniqueness,
        Property::Restriction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Pinsker => "pinsker",
            Property::Monotonicity => "monotonicity",
            Property::Sandwich => "sandwich",
            Property::Homogeneity => "homogeneity",
            Property::Uniqueness => "uniqueness",
            Property::Restriction => "restriction",
        }
    }

    /// A trial passes when its worst slack is at least this.
    pub fn threshold(self) -> f64 {
        match self {
            Property::Pinsker => -1e-12,
            Property::Monotonicity => -1e-10,
            Property::Sandwich => -1e-8,
            Property::Homogeneity => -1e-12,
            Property::Uniqueness | Property::Restriction => 0.0,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Property::ALL.iter().map(|p| p.name()).collect();
                anyhow!("unknown property {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    pub trials: usize,
    pub seed: u64,
    pub inputs: usize,
    pub outputs: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub alpha: Option<f64>,
    pub worst_slack: f64,
    pub pass: bool,
}

/// The stream for trial `k` is independent of how many trials run.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = seeded_rng(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn random_channel_with(rng: &mut ChaCha8Rng, inputs: usize, outputs: usize) -> anyhow::Result<Channel> {
    let rows = (0..inputs)
        .map(|_| random_distribution(rng, outputs))
        .collect::<augustin::Result<Vec<_>>>()?;
    Ok(Channel::from_rows(rows)?)
}

pub fn run_check(property: Property, config: &CheckConfig) -> anyhow::Result<Vec<TrialOutcome>> {
    if config.trials == 0 {
        bail!("at least one trial is required");
    }
    if config.inputs == 0 || config.outputs == 0 {
        bail!("alphabet sizes must be positive");
    }
    if property == Property::Restriction && config.outputs < 2 {
        bail!("the restriction check needs at least 2 outputs");
    }
    (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            let (alpha, worst_slack) = run_trial(property, config, trial, &mut rng)?;
            Ok(TrialOutcome {
                trial,
                alpha,
                worst_slack,
                pass: worst_slack >= property.threshold(),
            })
        })
        .collect()
}

fn run_trial(
    property: Property,
    config: &CheckConfig,
    trial: usize,
    rng: &mut ChaCha8Rng,
) -> anyhow::Result<(Option<f64>, f64)> {
    let alpha_value = CHECK_ORDERS[trial % CHECK_ORDERS.len()];
    let alpha = Order::new(alpha_value)?;
    let solver = SolverOptions::default().with_tol(config.tol);
    let (nx, ny) = (config.inputs, config.outputs);
    let slack = match property {
        Property::Pinsker => {
            let w = random_distribution(rng, ny)?;
            let q = random_distribution(rng, ny)?;
            let mut worst = f64::INFINITY;
            for a in DIVERGENCE_ORDERS {
                worst = worst.min(pinsker_slack(Order::new(a)?, &w, &q)?.to_f64());
            }
            return Ok((None, worst));
        }
        Property::Homogeneity => {
            let w = random_distribution(rng, ny)?;
            let q = random_distribution(rng, ny)?;
            let c = 10f64.powf(rng.gen_range(-2.0..2.0));
            let scaled = q.as_measure().scaled(c)?;
            let mut worst = f64::INFINITY;
            for a in DIVERGENCE_ORDERS {
                let a = Order::new(a)?;
                let base = renyi_divergence(a, &w, q.as_measure())?.to_f64();
                let shifted = renyi_divergence(a, &w, &scaled)?.to_f64();
                let err = (shifted - (base - c.ln())).abs();
                worst = worst.min(-err / (1.0 + base.abs()));
            }
            return Ok((None, worst));
        }
        Property::Monotonicity => {
            let channel = random_channel_with(rng, nx, ny)?;
            let input = random_distribution(rng, nx)?;
            let q = random_distribution(rng, ny)?;
            let beta = if alpha_value < 1.0 {
                if trial % 8 < 4 { 0.3 } else { 1.0 }
            } else {
                0.5 * (1.0f64).min(1.0 / (alpha_value - 1.0))
            };
            monotonicity_gap(alpha, TiltingOrder::new(beta)?, &input, &channel, &q)?.worst_slack()
        }
        Property::Sandwich => {
            let channel = random_channel_with(rng, nx, ny)?;
            let input = random_distribution(rng, nx)?;
            let q = random_distribution(rng, ny)?;
            let solved = solve_augustin_mean(alpha, &input, &channel, &solver)?;
            if !solved.converged {
                bail!("trial {trial}: solver did not converge");
            }
            let (upper, lower) = ehb_sandwich(alpha, &input, &channel, &q, &solved)?.slacks();
            upper.min(lower)
        }
        Property::Uniqueness => {
            let channel = random_channel_with(rng, nx, ny)?;
            let input = random_distribution(rng, nx)?;
            let reference = solve_augustin_mean(alpha, &input, &channel, &solver)?;
            let mut means = vec![reference.mean];
            for _ in 0..UNIQUENESS_STARTS {
                let start = random_distribution(rng, ny)?;
                let solved = solve_augustin_mean_from(alpha, &input, &channel, &start, &solver)?;
                if !solved.converged {
                    bail!("trial {trial}: solver did not converge");
                }
                means.push(solved.mean);
            }
            1e-8 - max_pairwise_tv(&means)?
        }
        Property::Restriction => {
            let channel = zero_column_channel(rng, nx, ny)?;
            let input = random_distribution(rng, nx)?;
            let mut options = DescentOptions {
                seed: rng.gen(),
                ..DescentOptions::default()
            };
            let restricted = descent_minimize(alpha, &input, &channel, &options)?;
            options.domain = SearchDomain::FullSimplex;
            let full = descent_minimize(alpha, &input, &channel, &options)?;
            let diff = (full.value.to_f64() - restricted.value.to_f64()).abs();
            1e-6 - diff
        }
    };
    Ok((Some(alpha_value), slack))
}

/// A random channel on `outputs` letters whose last column is identically zero.
pub fn zero_column_channel(rng: &mut ChaCha8Rng, inputs: usize, outputs: usize) -> anyhow::Result<Channel> {
    let rows = (0..inputs)
        .map(|_| {
            let mut row = random_distribution(rng, outputs - 1)?.into_vec();
            row.push(0.0);
            Distribution::new(row)
        })
        .collect::<augustin::Result<Vec<_>>>()?;
    Ok(Channel::from_rows(rows)?)
}

pub fn max_pairwise_tv(points: &[Distribution]) -> anyhow::Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            worst = worst.max(tv_distance(a, b)?);
        }
    }
    Ok(worst)
}
