//! Brute-force and first-order minimizers of `Q ↦ D^c_α(W ‖ Q | P)`.
//!
//! These share no code with the fixed-point solver beyond the conditional
//! divergence itself, and are used to cross-check it.

use crate::augustin::output_distribution;
use crate::channels::{random_distribution, seeded_rng, Channel};
use crate::divergence::conditional_slices;
use crate::error::{Error, Result};
use crate::measures::{check_len, Distribution, ExtendedReal, Order};

/// Largest output alphabet accepted by [`grid_minimize`].
pub const GRID_MAX_OUTPUTS: usize = 4;
pub const GRID_MIN_RESOLUTION: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub q: Distribution,
    pub value: ExtendedReal,
}

fn better(candidate: &OracleResult, incumbent: &OracleResult) -> bool {
    match candidate.value.total_cmp(&incumbent.value) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => candidate
            .q
            .as_slice()
            .iter()
            .zip(incumbent.q.as_slice())
            .find(|(a, b)| a != b)
            .is_some_and(|(a, b)| a < b),
    }
}

fn support_of_output(input: &Distribution, channel: &Channel) -> Result<Vec<usize>> {
    Ok(output_distribution(input, channel)?.support())
}

/// Evaluates the objective at every point of `{k / resolution}` on the
/// simplex over `supp(q_P)` and returns the best one.
pub fn grid_minimize(
    alpha: Order,
    input: &Distribution,
    channel: &Channel,
    resolution: usize,
) -> Result<OracleResult> {
    check_len(channel.inputs(), input.len())?;
    if channel.outputs() > GRID_MAX_OUTPUTS {
        return Err(Error::AlphabetTooLarge {
            size: channel.outputs(),
            max: GRID_MAX_OUTPUTS,
        });
    }
    if resolution < GRID_MIN_RESOLUTION {
        return Err(Error::InvalidParameter(format!(
            "grid resolution must be at least {GRID_MIN_RESOLUTION}, got {resolution}"
        )));
    }
    let support = support_of_output(input, channel)?;
    let mut q = vec![0.0; channel.outputs()];
    let mut best: Option<(f64, Vec<f64>)> = None;
    let step = 1.0 / resolution as f64;
    for_each_composition(resolution, support.len(), &mut |counts| {
        for (&y, &c) in support.iter().zip(counts) {
            q[y] = c as f64 * step;
        }
        let value = conditional_slices(alpha, channel, &q, input.as_slice()).to_f64();
        if best.as_ref().map_or(true, |(b, _)| value < *b) {
            best = Some((value, q.clone()));
        }
    });
    let (value, q) = best.expect("lattice is non-empty");
    Ok(OracleResult {
        q: Distribution::new(q)?,
        value: ExtendedReal::from_f64(value),
    })
}

/// Calls `f` on every vector of `parts` non-negative integers summing to `total`.
fn for_each_composition(total: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(remaining: usize, slot: usize, counts: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if slot + 1 == counts.len() {
            counts[slot] = remaining;
            f(counts);
            return;
        }
        for c in 0..=remaining {
            counts[slot] = c;
            rec(remaining - c, slot + 1, counts, f);
        }
    }
    if parts == 0 {
        return;
    }
    rec(total, 0, &mut vec![0; parts], f);
}

/// Which coordinates the descent may put mass on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchDomain {
    /// Only `supp(q_P)`.
    OutputSupport,
    /// The whole output simplex.
    FullSimplex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentOptions {
    /// Stop once the Frank–Wolfe gap, an upper bound on the suboptimality,
    /// drops below this.
    pub tol: f64,
    pub max_iter: usize,
    pub restarts: usize,
    pub seed: u64,
    pub domain: SearchDomain,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions {
            tol: 1e-10,
            max_iter: 200_000,
            restarts: 4,
            seed: 0,
            domain: SearchDomain::OutputSupport,
        }
    }
}

/// Gradient of the objective in `Q`, restricted to `domain`:
/// `∂/∂Q(y) D_α(w ‖ Q) = −w(y)^α Q(y)^{−α} / Σ_z w(z)^α Q(z)^{1−α}`.
fn gradient(alpha: Order, input: &[f64], channel: &Channel, q: &[f64], domain: &[usize]) -> Vec<f64> {
    let a = alpha.value();
    let mut g = vec![0.0; q.len()];
    for (&p, row) in input.iter().zip(channel.rows()) {
        if p <= 0.0 {
            continue;
        }
        let w = row.as_slice();
        if alpha.is_one() {
            for &y in domain {
                if w[y] > 0.0 {
                    g[y] -= p * w[y] / q[y];
                }
            }
            continue;
        }
        let logs: Vec<f64> = domain
            .iter()
            .filter(|&&y| w[y] > 0.0)
            .map(|&y| a * w[y].ln() + (1.0 - a) * q[y].ln())
            .collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_s = max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln();
        for &y in domain {
            if w[y] > 0.0 {
                g[y] -= p * (a * (w[y].ln() - q[y].ln()) - log_s).exp();
            }
        }
    }
    g
}

fn descend_once(
    alpha: Order,
    input: &[f64],
    channel: &Channel,
    domain: &[usize],
    start: Vec<f64>,
    options: &DescentOptions,
) -> (f64, Vec<f64>) {
    let mut q = start;
    let mut best = (conditional_slices(alpha, channel, &q, input).to_f64(), q.clone());
    for k in 1..=options.max_iter {
        let g = gradient(alpha, input, channel, &q, domain);
        let inner: f64 = domain.iter().map(|&y| q[y] * g[y]).sum();
        let min_g = domain.iter().map(|&y| g[y]).fold(f64::INFINITY, f64::min);
        if inner - min_g <= options.tol {
            break;
        }
        let scale = domain.iter().map(|&y| g[y].abs()).fold(1.0, f64::max);
        let eta = 1.0 / ((k as f64).sqrt() * scale);
        let logs: Vec<f64> = domain.iter().map(|&y| q[y].ln() - eta * g[y]).collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let total: f64 = logs.iter().map(|l| (l - max).exp()).sum();
        for (&y, l) in domain.iter().zip(&logs) {
            q[y] = (l - max).exp() / total;
        }
        let value = conditional_slices(alpha, channel, &q, input).to_f64();
        if value < best.0 {
            best = (value, q.clone());
        }
    }
    best
}

/// Multi-start entropic mirror descent with steps `1/√k` (scaled by the
/// gradient's sup-norm when that exceeds one). The first start is uniform
/// on the domain, the rest are seeded flat-Dirichlet draws.
pub fn descent_minimize(
    alpha: Order,
    input: &Distribution,
    channel: &Channel,
    options: &DescentOptions,
) -> Result<OracleResult> {
    let alpha = alpha.require_finite()?;
    check_len(channel.inputs(), input.len())?;
    if options.restarts == 0 {
        return Err(Error::InvalidParameter("at least one restart is required".into()));
    }
    let domain = match options.domain {
        SearchDomain::OutputSupport => support_of_output(input, channel)?,
        SearchDomain::FullSimplex => (0..channel.outputs()).collect(),
    };
    let mut rng = seeded_rng(options.seed);
    let mut best: Option<OracleResult> = None;
    for restart in 0..options.restarts {
        let mut start = vec![0.0; channel.outputs()];
        if restart == 0 {
            for &y in &domain {
                start[y] = 1.0 / domain.len() as f64;
            }
        } else {
            let draw = random_distribution(&mut rng, domain.len())?;
            for (&y, &v) in domain.iter().zip(draw.as_slice()) {
                // keep the start strictly inside the simplex
                start[y] = v.max(f64::MIN_POSITIVE);
            }
        }
        let (value, q) = descend_once(alpha, input.as_slice(), channel, &domain, start, options);
        let candidate = OracleResult {
            q: Distribution::new(q)?,
            value: ExtendedReal::from_f64(value),
        };
        if best.as_ref().map_or(true, |b| better(&candidate, b)) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("restarts > 0"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augustin::{solve_augustin_mean, SolverOptions};
    use crate::channels::{bsc, identity, random_channel};

    fn ord(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    fn value(r: &OracleResult) -> f64 {
        r.value.finite().unwrap()
    }

    #[test]
    fn compositions_are_enumerated_once() {
        let mut seen = Vec::new();
        for_each_composition(3, 3, &mut |c| seen.push(c.to_vec()));
        assert_eq!(seen.len(), 10);
        assert!(seen.iter().all(|c| c.iter().sum::<usize>() == 3));
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 10);
    }

    #[test]
    fn grid_noiseless_two_inputs() {
        let r = grid_minimize(ord(0.7), &Distribution::uniform(2).unwrap(), &identity(2).unwrap(), 1000)
            .unwrap();
        assert!((value(&r) - 2f64.ln()).abs() < 2e-6);
    }

    #[test]
    fn grid_order_one_lands_near_output_distribution() {
        let w = random_channel(3, 3, 12).unwrap();
        let p = Distribution::new(vec![0.2, 0.5, 0.3]).unwrap();
        let r = grid_minimize(Order::ONE, &p, &w, 200).unwrap();
        let qp = output_distribution(&p, &w).unwrap();
        for (a, b) in r.q.as_slice().iter().zip(qp.as_slice()) {
            assert!((a - b).abs() <= 1.0 / 200.0);
        }
    }

    #[test]
    fn grid_bsc_half_order() {
        let r = grid_minimize(ord(0.5), &Distribution::uniform(2).unwrap(), &bsc(0.1).unwrap(), 10_000).unwrap();
        let expected = -2.0 * (0.05f64.sqrt() + 0.45f64.sqrt()).ln();
        assert!((value(&r) - expected).abs() < 1e-6);
    }

    #[test]
    fn grid_argument_checks() {
        let p = Distribution::uniform(2).unwrap();
        let w = random_channel(2, 5, 0).unwrap();
        assert!(matches!(grid_minimize(ord(2.0), &p, &w, 100), Err(Error::AlphabetTooLarge { .. })));
        assert!(grid_minimize(ord(2.0), &p, &bsc(0.1).unwrap(), 5).is_err());
    }

    #[test]
    fn descent_noiseless_three_inputs() {
        let p = Distribution::uniform(3).unwrap();
        for a in [0.4, 1.0, 3.0] {
            let r = descent_minimize(ord(a), &p, &identity(3).unwrap(), &DescentOptions::default()).unwrap();
            assert!((value(&r) - 3f64.ln()).abs() < 1e-6);
        }
    }

    #[test]
    fn descent_matches_grid_on_small_alphabets() {
        for seed in 0..6 {
            let w = random_channel(3, 3, 40 + seed).unwrap();
            let p = Distribution::uniform(3).unwrap();
            for a in [0.5, 2.0] {
                let g = grid_minimize(ord(a), &p, &w, 300).unwrap();
                let d = descent_minimize(ord(a), &p, &w, &DescentOptions::default()).unwrap();
                assert!(value(&d) <= value(&g) + 1e-12);
                assert!(value(&g) - value(&d) < 1e-4);
            }
        }
    }

    #[test]
    fn descent_agrees_with_solver() {
        for seed in 0..10 {
            let w = random_channel(4, 4, seed).unwrap();
            let p = crate::channels::random_distribution(&mut seeded_rng(seed + 500), 4).unwrap();
            for a in [0.3, 0.7, 1.5, 3.0] {
                let d = descent_minimize(ord(a), &p, &w, &DescentOptions::default()).unwrap();
                let s = solve_augustin_mean(ord(a), &p, &w, &SolverOptions::default()).unwrap();
                let sv = s.information.finite().unwrap();
                assert!(value(&d) >= sv - 1e-9, "α={a}");
                assert!(value(&d) - sv < 1e-6, "α={a}: {} vs {sv}", value(&d));
            }
        }
    }

    #[test]
    fn full_simplex_matches_restricted_search() {
        let w = Channel::new(vec![
            vec![0.6, 0.3, 0.1, 0.0],
            vec![0.2, 0.2, 0.6, 0.0],
            vec![0.1, 0.7, 0.2, 0.0],
        ])
        .unwrap();
        let p = Distribution::new(vec![0.3, 0.3, 0.4]).unwrap();
        for a in [0.4, 1.0, 2.5] {
            let restricted = descent_minimize(ord(a), &p, &w, &DescentOptions::default()).unwrap();
            let full = DescentOptions {
                domain: SearchDomain::FullSimplex,
                ..DescentOptions::default()
            };
            let full = descent_minimize(ord(a), &p, &w, &full).unwrap();
            assert!((value(&restricted) - value(&full)).abs() < 1e-6, "α={a}");
            assert_eq!(restricted.q[3], 0.0);
        }
    }

    #[test]
    fn descent_rejects_infinite_order_and_zero_restarts() {
        let p = Distribution::uniform(2).unwrap();
        let w = bsc(0.2).unwrap();
        assert!(descent_minimize(Order::INFINITY, &p, &w, &DescentOptions::default()).is_err());
        let none = DescentOptions {
            restarts: 0,
            ..DescentOptions::default()
        };
        assert!(descent_minimize(ord(2.0), &p, &w, &none).is_err());
    }
}
