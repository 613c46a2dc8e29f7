//! Augustin information and the Augustin mean.
//!
//! The order-`α` Augustin information of an input distribution `P` is
//! `I_α(P; W) = min_Q D^c_α(W ‖ Q | P)`, and the minimizer `q_{α,P}` is the
//! Augustin mean. The mean is the unique fixed point of the Augustin operator
//!
//! ```text
//! A(Q)(y) = Σ_x P(x) · W_α^Q(y | x),   W_α^Q(x) ∝ W(x)^α Q^{1−α}
//! ```
//!
//! that is equivalent to the output distribution `q_P`. The solver iterates
//! the tilted operator `A^β(Q) ∝ A(Q)^β Q^{1−β}`, which strictly decreases
//! the objective unless `Q` is already a fixed point of `A`.

use crate::channels::Channel;
use crate::divergence::{conditional_slices, log_moment, renyi_slices};
use crate::error::{Error, Result};
use crate::measures::{
    check_len, lebesgue_decompose, tv_distance, Distribution, ExtendedReal, FiniteMeasure, Order,
};

/// Stopping threshold on `‖A(Q) − Q‖` used when none is given.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;

fn check_shapes(input: &Distribution, channel: &Channel) -> Result<()> {
    check_len(channel.inputs(), input.len())
}

fn mix_rows<'a>(outputs: usize, rows: impl Iterator<Item = (f64, &'a [f64])>) -> Vec<f64> {
    let mut acc = vec![0.0; outputs];
    for (p, row) in rows {
        for (a, &w) in acc.iter_mut().zip(row) {
            *a += p * w;
        }
    }
    acc
}

/// `q_P(y) = Σ_x P(x) W(y | x)`.
pub fn output_distribution(input: &Distribution, channel: &Channel) -> Result<Distribution> {
    check_shapes(input, channel)?;
    Distribution::new(output_slice(input.as_slice(), channel))
}

fn output_slice(input: &[f64], channel: &Channel) -> Vec<f64> {
    mix_rows(
        channel.outputs(),
        input
            .iter()
            .zip(channel.rows())
            .filter(|(&p, _)| p > 0.0)
            .map(|(&p, r)| (p, r.as_slice())),
    )
}

/// `q_P̃`: the `P`-average of the `q_P`-absolutely continuous parts of the rows.
///
/// On a finite alphabet every row with `P(x) > 0` is absolutely continuous in
/// `q_P`, so this coincides with `q_P`; rows with `P(x) = 0` never contribute.
pub fn output_distribution_tilde(input: &Distribution, channel: &Channel) -> Result<FiniteMeasure> {
    check_shapes(input, channel)?;
    let qp = output_slice(input.as_slice(), channel);
    let parts = input
        .as_slice()
        .iter()
        .zip(channel.rows())
        .filter(|(&p, _)| p > 0.0)
        .map(|(&p, row)| Ok((p, lebesgue_decompose(row.as_measure(), &qp)?.0)))
        .collect::<Result<Vec<_>>>()?;
    FiniteMeasure::new(mix_rows(
        channel.outputs(),
        parts.iter().map(|(p, ac)| (*p, ac.as_slice())),
    ))
}

/// Row `x` of the tilted channel, or `None` when `D_α(W(x) ‖ q) = ∞`.
fn tilted_row(alpha: Order, w: &[f64], q: &[f64]) -> Option<Vec<f64>> {
    if alpha.is_one() {
        if w.iter().zip(q).any(|(&wy, &qy)| wy > 0.0 && qy <= 0.0) {
            return None;
        }
        return Some(w.to_vec());
    }
    // e^{(1−α) D_α} = 1 / Σ w^α q^{1−α}, so each entry is exp(term − log_sum).
    let moment = log_moment(alpha.value(), w, q)?;
    if moment.log_sum == f64::NEG_INFINITY {
        return None;
    }
    let mut row = vec![0.0; w.len()];
    for (y, t) in moment.terms {
        row[y] = (t - moment.log_sum).exp();
    }
    Some(row)
}

/// The order-`α` tilted channel restricted to its admissible inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedChannel {
    /// One row per admissible input, in increasing input order.
    pub channel: Channel,
    /// Inputs `x` with `D_α(W(x) ‖ q) < ∞`.
    pub admissible: Vec<usize>,
}

impl TiltedChannel {
    /// Tilted row for input `x`, if it is admissible.
    pub fn row_for(&self, x: usize) -> Option<&Distribution> {
        self.admissible
            .binary_search(&x)
            .ok()
            .map(|i| self.channel.row(i))
    }
}

/// Tilts each row of `W` toward `q`:
/// `W_α^q(y | x) = e^{(1−α) D_α(W(x) ‖ q)} W(y | x)^α q(y)^{1−α}`.
pub fn tilted_channel(alpha: Order, channel: &Channel, q: &Distribution) -> Result<TiltedChannel> {
    let alpha = alpha.require_finite()?;
    check_len(channel.outputs(), q.len())?;
    let mut rows = Vec::new();
    let mut admissible = Vec::new();
    for (x, w) in channel.rows().iter().enumerate() {
        if let Some(row) = tilted_row(alpha, w.as_slice(), q.as_slice()) {
            rows.push(Distribution::new(row)?);
            admissible.push(x);
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyAdmissibleSet);
    }
    Ok(TiltedChannel {
        channel: Channel::from_rows(rows)?,
        admissible,
    })
}

fn operator_slice(alpha: Order, input: &[f64], channel: &Channel, q: &[f64]) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; channel.outputs()];
    for (x, (&p, w)) in input.iter().zip(channel.rows()).enumerate() {
        if p <= 0.0 {
            continue;
        }
        let row = tilted_row(alpha, w.as_slice(), q).ok_or(Error::OutsideDomain { input: x })?;
        for (a, r) in acc.iter_mut().zip(row) {
            *a += p * r;
        }
    }
    Ok(acc)
}

/// The Augustin operator `A_{α,P}(q) = Σ_x P(x) W_α^q(x)`.
///
/// Defined only when `D^c_α(W ‖ q | P) < ∞`; otherwise
/// [`Error::OutsideDomain`] names the first offending input.
pub fn augustin_operator(
    alpha: Order,
    input: &Distribution,
    channel: &Channel,
    q: &Distribution,
) -> Result<Distribution> {
    let alpha = alpha.require_finite()?;
    check_shapes(input, channel)?;
    check_len(channel.outputs(), q.len())?;
    Distribution::new(operator_slice(alpha, input.as_slice(), channel, q.as_slice())?)
}

/// Exponent `β ∈ (0, 1]` of the tilted Augustin operator.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TiltingOrder(f64);

impl TiltingOrder {
    pub fn new(beta: f64) -> Result<Self> {
        if beta > 0.0 && beta <= 1.0 {
            Ok(TiltingOrder(beta))
        } else {
            Err(Error::InvalidParameter(format!(
                "tilting order must lie in (0, 1], got {beta}"
            )))
        }
    }

    pub const ONE: TiltingOrder = TiltingOrder(1.0);

    /// `1 ∧ 1/α`.
    pub fn default_for(alpha: Order) -> Self {
        TiltingOrder((1.0 / alpha.value()).min(1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Checks the range in which the tilted operator is guaranteed to
    /// decrease the objective: any `β ∈ (0, 1]` for `α ≤ 1`, and
    /// `β < 1 ∧ 1/(α − 1)` for `α > 1`.
    pub fn check_for(self, alpha: Order) -> Result<Self> {
        let a = alpha.value();
        if alpha.is_one() || a < 1.0 {
            return Ok(self);
        }
        let bound = (1.0 / (a - 1.0)).min(1.0);
        if self.0 < bound {
            Ok(self)
        } else {
            Err(Error::TiltingOutOfRange {
                alpha: a,
                beta: self.0,
                requirement: "beta < min(1, 1/(alpha - 1)) when alpha > 1",
            })
        }
    }
}

/// `A^β(q) = e^{(1−β) D_β(A(q) ‖ q)} A(q)^β q^{1−β}`.
fn geometric_mix(beta: TiltingOrder, a: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    if beta.0 == 1.0 {
        return Ok(a.to_vec());
    }
    let moment = log_moment(beta.0, a, q).expect("β ≤ 1 never blocks");
    if moment.log_sum == f64::NEG_INFINITY {
        return Err(Error::InfiniteDivergence { order: beta.0 });
    }
    let mut out = vec![0.0; a.len()];
    for (y, t) in moment.terms {
        out[y] = (t - moment.log_sum).exp();
    }
    Ok(out)
}

/// The tilted Augustin operator: the normalized geometric mixture
/// `A(q)^β q^{1−β}`. `β = 1` gives back [`augustin_operator`].
pub fn tilted_augustin_operator(
    alpha: Order,
    beta: TiltingOrder,
    input: &Distribution,
    channel: &Channel,
    q: &Distribution,
) -> Result<Distribution> {
    let a = augustin_operator(alpha, input, channel, q)?;
    Distribution::new(geometric_mix(beta, a.as_slice(), q.as_slice())?)
}

/// Solver settings. `beta: None` selects `1 ∧ 1/α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub beta: Option<TiltingOrder>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: DEFAULT_TOLERANCE,
            max_iter: DEFAULT_MAX_ITER,
            beta: None,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_beta(mut self, beta: TiltingOrder) -> Self {
        self.beta = Some(beta);
        self
    }
}

/// Outcome of a fixed-point solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub alpha: Order,
    pub beta: TiltingOrder,
    /// The last iterate; the Augustin mean when `converged`.
    pub mean: Distribution,
    /// `D^c_α(W ‖ mean | P)` in nats.
    pub information: ExtendedReal,
    /// Number of tilted-operator applications.
    pub iterations: usize,
    /// `‖A(mean) − mean‖` at exit.
    pub residual_tv: f64,
    /// Objective at every iterate, starting with the initial point.
    pub objective_trace: Vec<f64>,
    /// `‖A(Q_k) − Q_k‖` at every iterate.
    pub residual_trace: Vec<f64>,
    pub converged: bool,
}

/// Computes the order-`α` Augustin mean and information starting from `q_P`.
pub fn solve_augustin_mean(
    alpha: Order,
    input: &Distribution,
    channel: &Channel,
    options: &SolverOptions,
) -> Result<SolveReport> {
    check_shapes(input, channel)?;
    let start = output_distribution(input, channel)?;
    solve_augustin_mean_from(alpha, input, channel, &start, options)
}

/// Same as [`solve_augustin_mean`] from a caller-chosen starting point,
/// which must have finite objective.
pub fn solve_augustin_mean_from(
    alpha: Order,
    input: &Distribution,
    channel: &Channel,
    initial: &Distribution,
    options: &SolverOptions,
) -> Result<SolveReport> {
    let alpha = alpha.require_finite()?;
    check_shapes(input, channel)?;
    check_len(channel.outputs(), initial.len())?;
    if !(options.tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {}",
            options.tol
        )));
    }
    let beta = options
        .beta
        .unwrap_or_else(|| TiltingOrder::default_for(alpha))
        .check_for(alpha)?;

    let p = input.as_slice();
    let mut q = initial.as_slice().to_vec();
    let mut objective_trace = Vec::new();
    let mut residual_trace = Vec::new();
    let mut iterations = 0;
    loop {
        let objective = conditional_slices(alpha, channel, &q, p);
        let a = operator_slice(alpha, p, channel, &q)?;
        let residual = tv_distance(&a, &q)?;
        objective_trace.push(objective.to_f64());
        residual_trace.push(residual);
        let converged = residual <= options.tol;
        if converged || iterations >= options.max_iter {
            return Ok(SolveReport {
                alpha,
                beta,
                mean: Distribution::new(q)?,
                information: objective,
                iterations,
                residual_tv: residual,
                objective_trace,
                residual_trace,
                converged,
            });
        }
        q = geometric_mix(beta, &a, &q)?;
        iterations += 1;
    }
}

/// The three quantities of the one-step decrease bound for `A^β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityGap {
    /// `D^c_α(W ‖ q | P) − D^c_α(W ‖ A^β(q) | P)`.
    pub lhs: f64,
    /// `β D_{1−β(α−1)⁺}(A(q) ‖ q) + (1 − β) D_β(A(q) ‖ q)`.
    pub middle: f64,
    /// `β (2 − β (α ∨ 1)) / 2 · ‖A(q) − q‖²`.
    pub pinsker_term: f64,
}

impl MonotonicityGap {
    /// `min(lhs − middle, middle − pinsker_term, pinsker_term)`; non-negative
    /// whenever the chain holds.
    pub fn worst_slack(&self) -> f64 {
        (self.lhs - self.middle)
            .min(self.middle - self.pinsker_term)
            .min(self.pinsker_term)
    }
}

/// Evaluates `lhs ≥ middle ≥ pinsker_term ≥ 0` for one application of the
/// tilted operator. Requires `α ∈ (0, 1]` with `β ∈ (0, 1]`, or `α > 1` with
/// `β < 1 ∧ 1/(α − 1)`.
pub fn monotonicity_gap(
    alpha: Order,
    beta: TiltingOrder,
    input: &Distribution,
    channel: &Channel,
    q: &Distribution,
) -> Result<MonotonicityGap> {
    let alpha = alpha.require_finite()?;
    let beta = beta.check_for(alpha)?;
    let a = augustin_operator(alpha, input, channel, q)?;
    let next = Distribution::new(geometric_mix(beta, a.as_slice(), q.as_slice())?)?;

    let finite = |v: ExtendedReal, order: f64| v.finite().ok_or(Error::InfiniteDivergence { order });
    let before = finite(conditional_slices(alpha, channel, q.as_slice(), input.as_slice()), alpha.value())?;
    let after = finite(conditional_slices(alpha, channel, next.as_slice(), input.as_slice()), alpha.value())?;

    let (av, b) = (alpha.value(), beta.value());
    let excess = if alpha.is_one() { 0.0 } else { (av - 1.0).max(0.0) };
    let first_order = Order::new(1.0 - b * excess)?;
    let first = finite(renyi_slices(first_order, a.as_slice(), q.as_slice()), first_order.value())?;
    let second = if b < 1.0 {
        finite(renyi_slices(Order::new(b)?, a.as_slice(), q.as_slice()), b)?
    } else {
        0.0
    };
    let tv = tv_distance(&a, q)?;
    Ok(MonotonicityGap {
        lhs: before - after,
        middle: b * first + (1.0 - b) * second,
        pinsker_term: 0.5 * b * (2.0 - b * av.max(1.0)) * tv * tv,
    })
}

/// Two-sided bound on the excess objective at a probe `q`:
/// `D_{1∨α}(q* ‖ q) ≥ D^c_α(W ‖ q | P) − I_α ≥ D_{1∧α}(q* ‖ q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub upper: ExtendedReal,
    pub gap: ExtendedReal,
    pub lower: ExtendedReal,
}

fn ordered_slack(hi: ExtendedReal, lo: ExtendedReal) -> f64 {
    match (hi, lo) {
        (ExtendedReal::Infinite, _) => f64::INFINITY,
        (ExtendedReal::Finite(_), ExtendedReal::Infinite) => f64::NEG_INFINITY,
        (ExtendedReal::Finite(h), ExtendedReal::Finite(l)) => h - l,
    }
}

impl Sandwich {
    /// `(upper − gap, gap − lower)`, using `±∞` when one side is infinite.
    pub fn slacks(&self) -> (f64, f64) {
        (
            ordered_slack(self.upper, self.gap),
            ordered_slack(self.gap, self.lower),
        )
    }
}

fn require_converged(solved: &SolveReport) -> Result<f64> {
    if !solved.converged {
        return Err(Error::InvalidParameter(
            "the solve did not converge".to_string(),
        ));
    }
    solved.information.finite().ok_or(Error::InfiniteDivergence {
        order: solved.alpha.value(),
    })
}

pub fn ehb_sandwich(
    alpha: Order,
    input: &Distribution,
    channel: &Channel,
    q: &Distribution,
    solved: &SolveReport,
) -> Result<Sandwich> {
    check_shapes(input, channel)?;
    check_len(channel.outputs(), q.len())?;
    check_len(channel.outputs(), solved.mean.len())?;
    let info = require_converged(solved)?;
    let mean = solved.mean.as_slice();
    Ok(Sandwich {
        upper: renyi_slices(alpha.max_one(), mean, q.as_slice()),
        gap: conditional_slices(alpha, channel, q.as_slice(), input.as_slice()) - info,
        lower: renyi_slices(alpha.min_one(), mean, q.as_slice()),
    })
}

/// Largest deviation, over `supp(q_P)`, between `dq*/dq_P` and
/// `(Σ_x P(x) (dW(x)/dq_P)^α e^{(1−α) D_α(W(x) ‖ q*)})^{1/α}`.
///
/// Zero exactly at the Augustin mean. Evaluated from the divergences alone,
/// without going through the operator.
pub fn mean_identity_residual(
    alpha: Order,
    input: &Distribution,
    channel: &Channel,
    solved: &SolveReport,
) -> Result<f64> {
    let alpha = alpha.require_finite()?;
    check_shapes(input, channel)?;
    check_len(channel.outputs(), solved.mean.len())?;
    require_converged(solved)?;
    let a = alpha.value();
    let qp = output_slice(input.as_slice(), channel);
    let mean = solved.mean.as_slice();

    let mut row_terms = Vec::new();
    for (x, (&p, w)) in input.as_slice().iter().zip(channel.rows()).enumerate() {
        if p <= 0.0 {
            continue;
        }
        let d = renyi_slices(alpha, w.as_slice(), mean)
            .finite()
            .ok_or(Error::OutsideDomain { input: x })?;
        row_terms.push((p.ln() + (1.0 - a) * d, w.as_slice()));
    }

    let mut worst: f64 = 0.0;
    for (y, &qpy) in qp.iter().enumerate() {
        if qpy <= 0.0 {
            continue;
        }
        let logs: Vec<f64> = row_terms
            .iter()
            .filter(|(_, w)| w[y] > 0.0)
            .map(|(c, w)| c + a * (w[y].ln() - qpy.ln()))
            .collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_sum = max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln();
        let rhs = (log_sum / a).exp();
        worst = worst.max((mean[y] / qpy - rhs).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{bsc, identity, random_channel, random_distribution, seeded_rng};

    fn d(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    fn ord(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn two_by_two() -> (Channel, Distribution) {
        (
            Channel::new(vec![vec![0.8, 0.2], vec![0.3, 0.7]]).unwrap(),
            d(&[0.5, 0.5]),
        )
    }

    #[test]
    fn output_distribution_examples() {
        let p = d(&[0.2, 0.5, 0.3]);
        assert_eq!(output_distribution(&p, &identity(3).unwrap()).unwrap(), p);
        let q = output_distribution(&d(&[0.5, 0.5]), &bsc(0.1).unwrap()).unwrap();
        assert!(close(q.as_slice(), &[0.5, 0.5], 1e-15));
        let (w, _) = two_by_two();
        assert_eq!(output_distribution(&d(&[1.0, 0.0]), &w).unwrap(), *w.row(0));
        assert!(output_distribution(&d(&[1.0]), &w).is_err());
    }

    #[test]
    fn output_tilde_equals_output_on_finite_alphabets() {
        let w = random_channel(3, 4, 3).unwrap();
        let p = d(&[0.2, 0.3, 0.5]);
        let tilde = output_distribution_tilde(&p, &w).unwrap();
        let qp = output_distribution(&p, &w).unwrap();
        assert!(close(tilde.as_slice(), qp.as_slice(), 1e-15));

        let w = Channel::new(vec![
            vec![0.5, 0.5, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.3, 0.7],
        ])
        .unwrap();
        let p = d(&[1.0, 0.0, 0.0]);
        let tilde = output_distribution_tilde(&p, &w).unwrap();
        assert_eq!(tilde.as_slice(), w.row(0).as_slice());
        let p = d(&[0.6, 0.4, 0.0]);
        let tilde = output_distribution_tilde(&p, &w).unwrap();
        let qp = output_distribution(&p, &w).unwrap();
        assert_eq!(tilde.as_slice(), qp.as_slice());
    }

    #[test]
    fn tilted_channel_examples() {
        let w = random_channel(3, 3, 9).unwrap();
        let q = d(&[0.2, 0.3, 0.5]);
        let t = tilted_channel(Order::ONE, &w, &q).unwrap();
        assert_eq!(t.channel, w);
        assert_eq!(t.admissible, vec![0, 1, 2]);

        let t = tilted_channel(ord(2.5), &w, w.row(1)).unwrap();
        assert!(close(t.row_for(1).unwrap().as_slice(), w.row(1).as_slice(), 1e-15));

        let single = Channel::new(vec![vec![0.8, 0.2]]).unwrap();
        let t = tilted_channel(ord(2.0), &single, &d(&[0.5, 0.5])).unwrap();
        assert!(close(t.channel.row(0).as_slice(), &[1.28 / 1.36, 0.08 / 1.36], 1e-15));
        assert!(close(t.channel.row(0).as_slice(), &[0.941176, 0.058824], 1e-6));
    }

    #[test]
    fn tilted_channel_admissibility() {
        let w = Channel::new(vec![vec![0.5, 0.5, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let q = d(&[0.5, 0.5, 0.0]);
        let t = tilted_channel(ord(2.0), &w, &q).unwrap();
        assert_eq!(t.admissible, vec![0]);
        assert!(t.row_for(1).is_none());
        let t = tilted_channel(ord(0.5), &w, &q).unwrap();
        assert_eq!(t.admissible, vec![0]);
        let w = Channel::new(vec![vec![0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(tilted_channel(ord(0.5), &w, &q), Err(Error::EmptyAdmissibleSet));
        assert!(tilted_channel(Order::INFINITY, &w, &q).is_err());
    }

    #[test]
    fn operator_examples() {
        let w = random_channel(3, 4, 21).unwrap();
        let p = d(&[0.1, 0.6, 0.3]);
        let q = d(&[0.4, 0.1, 0.3, 0.2]);
        let a = augustin_operator(Order::ONE, &p, &w, &q).unwrap();
        let qp = output_distribution(&p, &w).unwrap();
        assert!(close(a.as_slice(), qp.as_slice(), 1e-15));

        let single = Channel::new(vec![vec![0.25, 0.75]]).unwrap();
        let a = augustin_operator(ord(3.0), &d(&[1.0]), &single, single.row(0)).unwrap();
        assert!(close(a.as_slice(), &[0.25, 0.75], 1e-15));

        let (w, p) = two_by_two();
        let a = augustin_operator(ord(2.0), &p, &w, &d(&[0.5, 0.5])).unwrap();
        let expected = [
            0.5 * (1.28 / 1.36 + 0.18 / 1.16),
            0.5 * (0.08 / 1.36 + 0.98 / 1.16),
        ];
        assert!(close(a.as_slice(), &expected, 1e-15));
        assert!(close(a.as_slice(), &[0.548174, 0.451826], 1e-6));
    }

    #[test]
    fn operator_domain_error() {
        let (w, p) = two_by_two();
        assert_eq!(
            augustin_operator(ord(2.0), &p, &w, &d(&[1.0, 0.0])),
            Err(Error::OutsideDomain { input: 0 })
        );
        let w = identity(2).unwrap();
        assert_eq!(
            augustin_operator(ord(0.5), &p, &w, &d(&[1.0, 0.0])),
            Err(Error::OutsideDomain { input: 1 })
        );
    }

    #[test]
    fn operator_keeps_support_of_output_distribution() {
        let w = Channel::new(vec![vec![0.5, 0.0, 0.5], vec![0.2, 0.0, 0.8]]).unwrap();
        let p = d(&[0.3, 0.7]);
        for a in [0.4, 2.0] {
            let out = augustin_operator(ord(a), &p, &w, &d(&[0.2, 0.5, 0.3])).unwrap();
            assert_eq!(out.support(), vec![0, 2]);
        }
    }

    #[test]
    fn tilted_operator_examples() {
        let (w, p) = two_by_two();
        let q = d(&[0.5, 0.5]);
        let plain = augustin_operator(ord(2.0), &p, &w, &q).unwrap();
        let one = tilted_augustin_operator(ord(2.0), TiltingOrder::ONE, &p, &w, &q).unwrap();
        assert_eq!(plain, one);

        let a = plain.as_slice();
        let raw = [(a[0] * 0.5).sqrt(), (a[1] * 0.5).sqrt()];
        let s = raw[0] + raw[1];
        let half = TiltingOrder::new(0.5).unwrap();
        let t = tilted_augustin_operator(ord(2.0), half, &p, &w, &q).unwrap();
        assert!(close(t.as_slice(), &[raw[0] / s, raw[1] / s], 1e-15));

        let fixed = solve_augustin_mean(ord(2.0), &p, &w, &SolverOptions::default()).unwrap();
        for beta in [0.1, 0.5, 1.0] {
            let t = tilted_augustin_operator(ord(2.0), TiltingOrder::new(beta).unwrap(), &p, &w, &fixed.mean)
                .unwrap();
            assert!(close(t.as_slice(), fixed.mean.as_slice(), 1e-9));
        }
    }

    #[test]
    fn tilting_order_ranges() {
        assert!(TiltingOrder::new(0.0).is_err());
        assert!(TiltingOrder::new(1.5).is_err());
        let one = TiltingOrder::ONE;
        assert!(one.check_for(ord(0.5)).is_ok());
        assert!(one.check_for(Order::ONE).is_ok());
        assert!(one.check_for(ord(1.5)).is_err());
        let b = TiltingOrder::new(0.4).unwrap();
        assert!(b.check_for(ord(3.0)).is_ok());
        assert!(b.check_for(ord(3.5)).is_err());
        for a in [0.3, 1.0, 1.5, 2.0, 10.0] {
            let alpha = ord(a);
            assert!(TiltingOrder::default_for(alpha).check_for(alpha).is_ok());
        }
    }

    #[test]
    fn solve_noiseless_is_ln_n() {
        let w = identity(3).unwrap();
        let p = Distribution::uniform(3).unwrap();
        for a in [0.3, 0.5, 1.0, 2.0, 7.0] {
            let r = solve_augustin_mean(ord(a), &p, &w, &SolverOptions::default()).unwrap();
            assert!(r.converged);
            assert!(close(r.mean.as_slice(), &[1.0 / 3.0; 3], 1e-12));
            assert!((r.information.finite().unwrap() - 3f64.ln()).abs() < 1e-12);
            assert!((3f64.ln() - 1.098612).abs() < 1e-6);
        }
    }

    #[test]
    fn solve_order_one_is_mutual_information() {
        let w = bsc(0.1).unwrap();
        let p = d(&[0.5, 0.5]);
        let r = solve_augustin_mean(Order::ONE, &p, &w, &SolverOptions::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.mean, output_distribution(&p, &w).unwrap());
        let h = -(0.1f64 * 0.1f64.ln() + 0.9 * 0.9f64.ln());
        assert!((r.information.finite().unwrap() - (2f64.ln() - h)).abs() < 1e-15);
    }

    #[test]
    fn solve_half_order_bsc() {
        let w = bsc(0.1).unwrap();
        let p = d(&[0.5, 0.5]);
        let r = solve_augustin_mean(ord(0.5), &p, &w, &SolverOptions::default()).unwrap();
        assert!(r.converged);
        assert!(close(r.mean.as_slice(), &[0.5, 0.5], 1e-12));
        let expected = -2.0 * (0.05f64.sqrt() + 0.45f64.sqrt()).ln();
        assert!((r.information.finite().unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.223144).abs() < 1e-6);
    }

    #[test]
    fn solve_rejects_bad_arguments() {
        let (w, p) = two_by_two();
        let opts = SolverOptions::default();
        assert_eq!(
            solve_augustin_mean(Order::INFINITY, &p, &w, &opts),
            Err(Error::UnsupportedOrder(f64::INFINITY))
        );
        assert!(solve_augustin_mean(ord(2.0), &p, &w, &opts.with_tol(0.0)).is_err());
        assert!(solve_augustin_mean(ord(2.0), &p, &w, &opts.with_beta(TiltingOrder::ONE)).is_err());
        assert!(solve_augustin_mean(ord(2.0), &d(&[1.0]), &w, &opts).is_err());
    }

    #[test]
    fn solve_reports_non_convergence() {
        let w = random_channel(4, 4, 2).unwrap();
        let p = Distribution::uniform(4).unwrap();
        let r = solve_augustin_mean(ord(3.0), &p, &w, &SolverOptions::default().with_max_iter(2)).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 2);
        assert_eq!(r.objective_trace.len(), 3);
        assert!(r.residual_tv > DEFAULT_TOLERANCE);
    }

    #[test]
    fn report_invariants_on_random_instances() {
        let mut rng = seeded_rng(77);
        for seed in 0..20 {
            let w = random_channel(3, 4, seed).unwrap();
            let p = random_distribution(&mut rng, 3).unwrap();
            for a in [0.2, 0.7, 1.4, 4.0] {
                let r = solve_augustin_mean(ord(a), &p, &w, &SolverOptions::default()).unwrap();
                assert!(r.converged);
                let a_mean = augustin_operator(ord(a), &p, &w, &r.mean).unwrap();
                assert_eq!(r.residual_tv, tv_distance(&a_mean, &r.mean).unwrap());
                for pair in r.objective_trace.windows(2) {
                    assert!(pair[1] <= pair[0] + 1e-10);
                }
                assert_eq!(*r.objective_trace.last().unwrap(), r.information.to_f64());
            }
        }
    }

    #[test]
    fn monotonicity_examples() {
        let (w, p) = two_by_two();
        let fixed = solve_augustin_mean(ord(2.0), &p, &w, &SolverOptions::default().with_tol(1e-14)).unwrap();
        let b = TiltingOrder::new(0.4).unwrap();
        let g = monotonicity_gap(ord(2.0), b, &p, &w, &fixed.mean).unwrap();
        assert!(g.lhs.abs() < 1e-12 && g.middle.abs() < 1e-12 && g.pinsker_term.abs() < 1e-12);

        // α = 2, β = 0.4 at q = (0.5, 0.5): middle = 0.4 D_{0.6}(A‖q) + 0.6 D_{0.4}(A‖q)
        let q = d(&[0.5, 0.5]);
        let g = monotonicity_gap(ord(2.0), b, &p, &w, &q).unwrap();
        let a: [f64; 2] = [
            0.5 * (1.28 / 1.36 + 0.18 / 1.16),
            0.5 * (0.08 / 1.36 + 0.98 / 1.16),
        ];
        let renyi = |o: f64| -> f64 {
            (a[0].powf(o) * 0.5f64.powf(1.0 - o) + a[1].powf(o) * 0.5f64.powf(1.0 - o)).ln() / (o - 1.0)
        };
        let middle = 0.4 * renyi(0.6) + 0.6 * renyi(0.4);
        assert!((g.middle - middle).abs() < 1e-14);
        let tv = (a[0] - 0.5).abs() + (a[1] - 0.5).abs();
        assert!((g.pinsker_term - 0.4 * (2.0 - 0.8) / 2.0 * tv * tv).abs() < 1e-15);
        assert!(g.lhs >= g.middle && g.middle >= g.pinsker_term && g.pinsker_term > 0.0);
    }

    #[test]
    fn monotonicity_rejects_bad_tilting() {
        let (w, p) = two_by_two();
        let q = d(&[0.5, 0.5]);
        assert!(matches!(
            monotonicity_gap(ord(3.0), TiltingOrder::new(0.5).unwrap(), &p, &w, &q),
            Err(Error::TiltingOutOfRange { .. })
        ));
    }

    #[test]
    fn monotonicity_chain_on_random_instances() {
        let mut rng = seeded_rng(3);
        for seed in 0..30 {
            let w = random_channel(3, 3, 1000 + seed).unwrap();
            let p = random_distribution(&mut rng, 3).unwrap();
            let q = random_distribution(&mut rng, 3).unwrap();
            for (a, b) in [(0.5, 1.0), (0.3, 0.3), (1.0, 0.7), (2.0, 0.5), (4.0, 0.2)] {
                let g = monotonicity_gap(ord(a), TiltingOrder::new(b).unwrap(), &p, &w, &q).unwrap();
                assert!(g.worst_slack() >= -1e-12, "α={a} β={b}: {g:?}");
            }
        }
    }

    #[test]
    fn sandwich_examples() {
        let w = bsc(0.1).unwrap();
        let p = d(&[0.5, 0.5]);
        let solved = solve_augustin_mean(ord(0.5), &p, &w, &SolverOptions::default()).unwrap();
        let at_mean = ehb_sandwich(ord(0.5), &p, &w, &solved.mean, &solved).unwrap();
        for v in [at_mean.upper, at_mean.gap, at_mean.lower] {
            assert!(v.finite().unwrap().abs() < 1e-12);
        }
        let s = ehb_sandwich(ord(0.5), &p, &w, &d(&[0.3, 0.7]), &solved).unwrap();
        assert!(s.upper >= s.gap && s.gap >= s.lower && s.lower > ExtendedReal::ZERO);

        let solved = solve_augustin_mean(Order::ONE, &p, &w, &SolverOptions::default()).unwrap();
        let q = d(&[0.3, 0.7]);
        let s = ehb_sandwich(Order::ONE, &p, &w, &q, &solved).unwrap();
        let kl = renyi_slices(Order::ONE, &[0.5, 0.5], q.as_slice()).finite().unwrap();
        assert!((s.upper.finite().unwrap() - kl).abs() < 1e-15);
        assert!((s.lower.finite().unwrap() - kl).abs() < 1e-15);
        assert!((s.gap.finite().unwrap() - kl).abs() < 1e-12);
    }

    #[test]
    fn sandwich_handles_infinite_probe() {
        let w = bsc(0.1).unwrap();
        let p = d(&[0.5, 0.5]);
        let solved = solve_augustin_mean(ord(2.0), &p, &w, &SolverOptions::default()).unwrap();
        let s = ehb_sandwich(ord(2.0), &p, &w, &d(&[1.0, 0.0]), &solved).unwrap();
        assert_eq!(s.upper, ExtendedReal::Infinite);
        assert_eq!(s.gap, ExtendedReal::Infinite);
        assert_eq!(s.slacks().0, f64::INFINITY);
    }

    #[test]
    fn mean_identity_examples() {
        let w = random_channel(3, 3, 4).unwrap();
        let p = d(&[0.2, 0.3, 0.5]);
        let r = solve_augustin_mean(Order::ONE, &p, &w, &SolverOptions::default()).unwrap();
        assert!(mean_identity_residual(Order::ONE, &p, &w, &r).unwrap() < 1e-12);

        let w = identity(3).unwrap();
        let p = Distribution::uniform(3).unwrap();
        let r = solve_augustin_mean(ord(2.0), &p, &w, &SolverOptions::default()).unwrap();
        assert!(mean_identity_residual(ord(2.0), &p, &w, &r).unwrap() <= 1e-8);

        let w = bsc(0.1).unwrap();
        let p = d(&[0.5, 0.5]);
        let r = solve_augustin_mean(ord(0.5), &p, &w, &SolverOptions::default()).unwrap();
        assert!(mean_identity_residual(ord(0.5), &p, &w, &r).unwrap() <= 10.0 * DEFAULT_TOLERANCE);

        // a non-fixed point has a visible residual
        let mut fake = r.clone();
        fake.mean = d(&[0.4, 0.6]);
        assert!(mean_identity_residual(ord(0.5), &p, &w, &fake).unwrap() > 1e-3);
    }
}
