//! Rényi divergences of every order in `(0, ∞]`.
//!
//! For `α ∉ {1, ∞}` the sum `Σ w(y)^α q(y)^{1−α}` is evaluated as a
//! log-sum-exp of `α ln w(y) + (1 − α) ln q(y)`, so orders in the thousands
//! neither overflow nor underflow. Outcomes with `w(y) = 0` never contribute.

use crate::channels::Channel;
use crate::error::Result;
use crate::measures::{check_len, tv_distance, Distribution, ExtendedReal, FiniteMeasure, Order};

/// Per-outcome log-terms `α ln w(y) + (1 − α) ln q(y)` over `w(y) > 0, q(y) > 0`
/// together with their log-sum-exp.
#[derive(Debug, Clone)]
pub(crate) struct LogMoment {
    pub terms: Vec<(usize, f64)>,
    /// `ln Σ exp(term)`; `-∞` when there are no terms.
    pub log_sum: f64,
}

/// Returns `None` when `α > 1` and some `y` has `w(y) > 0 = q(y)`, in which
/// case the moment is infinite.
pub(crate) fn log_moment(alpha: f64, w: &[f64], q: &[f64]) -> Option<LogMoment> {
    let mut terms = Vec::with_capacity(w.len());
    for (y, (&wy, &qy)) in w.iter().zip(q).enumerate() {
        if wy <= 0.0 {
            continue;
        }
        if qy <= 0.0 {
            if alpha > 1.0 {
                return None;
            }
            continue;
        }
        terms.push((y, alpha * wy.ln() + (1.0 - alpha) * qy.ln()));
    }
    let log_sum = log_sum_exp(terms.iter().map(|t| t.1));
    Some(LogMoment { terms, log_sum })
}

/// Max-shifted `ln Σ exp(x)`; `-∞` for an empty input.
pub(crate) fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.map(|x| (x - max).exp()).sum::<f64>().ln()
}

pub(crate) fn renyi_slices(alpha: Order, w: &[f64], q: &[f64]) -> ExtendedReal {
    if alpha.is_one() {
        let mut acc = 0.0;
        for (&wy, &qy) in w.iter().zip(q) {
            if wy > 0.0 {
                if qy <= 0.0 {
                    return ExtendedReal::Infinite;
                }
                acc += wy * (wy.ln() - qy.ln());
            }
        }
        return ExtendedReal::Finite(acc);
    }
    if alpha.is_infinite() {
        let mut best = f64::NEG_INFINITY;
        for (&wy, &qy) in w.iter().zip(q) {
            if wy > 0.0 {
                if qy <= 0.0 {
                    return ExtendedReal::Infinite;
                }
                best = best.max(wy.ln() - qy.ln());
            }
        }
        return ExtendedReal::Finite(best);
    }
    let a = alpha.value();
    match log_moment(a, w, q) {
        None => ExtendedReal::Infinite,
        // α < 1 with disjoint supports: ln 0 / (α − 1) = +∞
        Some(m) if m.log_sum == f64::NEG_INFINITY => ExtendedReal::Infinite,
        Some(m) => ExtendedReal::Finite(m.log_sum / (a - 1.0)),
    }
}

/// Order-`α` Rényi divergence `D_α(w ‖ q)` of a probability vector from a
/// finite measure.
///
/// `α = 1` (within `1e-12`) is the Kullback–Leibler divergence and `α = ∞`
/// the log of the largest likelihood ratio over `supp(w)`.
pub fn renyi_divergence(alpha: Order, w: &Distribution, q: &FiniteMeasure) -> Result<ExtendedReal> {
    check_len(w.len(), q.len())?;
    Ok(renyi_slices(alpha, w.as_slice(), q.as_slice()))
}

/// `Σ_x P(x) D_α(W(x) ‖ q)`, where inputs with `P(x) = 0` do not contribute
/// and any other infinite row makes the result infinite.
pub fn conditional_renyi_divergence(
    alpha: Order,
    channel: &Channel,
    q: &FiniteMeasure,
    input: &Distribution,
) -> Result<ExtendedReal> {
    check_len(channel.inputs(), input.len())?;
    check_len(channel.outputs(), q.len())?;
    Ok(conditional_slices(alpha, channel, q.as_slice(), input.as_slice()))
}

pub(crate) fn conditional_slices(
    alpha: Order,
    channel: &Channel,
    q: &[f64],
    input: &[f64],
) -> ExtendedReal {
    channel
        .rows()
        .iter()
        .zip(input)
        .filter(|(_, &p)| p > 0.0)
        .map(|(row, &p)| renyi_slices(alpha, row.as_slice(), q).scale(p))
        .sum()
}

/// `D_α(w ‖ q) − (1 ∧ α)/2 · ‖w − q‖²`, which is non-negative for
/// probability vectors. An infinite divergence gives an infinite slack.
pub fn pinsker_slack(alpha: Order, w: &Distribution, q: &Distribution) -> Result<ExtendedReal> {
    let d = renyi_divergence(alpha, w, q.as_measure())?;
    let tv = tv_distance(w, q)?;
    Ok(d - 0.5 * alpha.min_one().value() * tv * tv)
}
