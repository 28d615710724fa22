//! The SL(2, R) compression semigroup of the cone `W = {(a, b) : |b| <= a}`.
//!
//! Three checks: `|g(1, 0)| >= 1/2` on `S_W`, the hyperbolic family
//! `h_t = [[cosh t, sinh t], [sinh t, cosh t]]` whose cocycle at lines near
//! the boundary ray `[(1, -1)]` tends to `e^{-2t}` (so no uniform lower
//! bound exists on `S_W` alone), and `mu >= 1` for upper-triangular members
//! `[[mu, x], [0, 1/mu]]`.

use flagtype::cocycle::rho_log;
use flagtype::matgroup::{Flag, GroupElement};
use flagtype::rootdata::Functional;
use flagtype::seeds::{derive, rng_for};
use flagtype::semigroup::{membership, sample_word, SamplingParams, SemigroupSpec};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::CliError;

pub const LOWER_BOUND: f64 = 0.5;
pub const TOLERANCE: f64 = 1e-12;
const MAX_WORD_LENGTH: usize = 4;

pub fn cone() -> SemigroupSpec {
    SemigroupSpec::cone_compression(&[vec![1.0, 1.0], vec![1.0, -1.0]]).expect("valid cone")
}

fn mu1() -> Functional {
    Functional::new(vec![1.0, 0.0])
}

pub fn h_t(t: f64) -> GroupElement {
    GroupElement::from_rows(&[vec![t.cosh(), t.sinh()], vec![t.sinh(), t.cosh()]]).expect("det 1")
}

/// `((a^2 + b^2) cosh 2t + 2ab sinh 2t) / (a^2 + b^2)`.
pub fn quotient_formula(t: f64, a: f64, b: f64) -> f64 {
    let r = a * a + b * b;
    (r * (2.0 * t).cosh() + 2.0 * a * b * (2.0 * t).sinh()) / r
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBound {
    pub samples: usize,
    pub min_norm: f64,
    pub max_norm: f64,
    pub violations: usize,
}

/// `|g(1, 0)|` over cone-walk words of length `1..=4`.
pub fn lower_bound(samples: usize, seed: u64) -> Result<LowerBound, CliError> {
    let spec = cone();
    let params = SamplingParams::default();
    let norms = (0..samples)
        .into_par_iter()
        .map(|c| {
            let s = derive(seed, &[c as u64]);
            let len = rng_for(s).random_range(1..=MAX_WORD_LENGTH);
            let g = sample_word(&spec, len, &params, derive(s, &[1]))?.product()?;
            let m = g.matrix();
            Ok(m[(0, 0)].hypot(m[(1, 0)]))
        })
        .collect::<Result<Vec<f64>, flagtype::Error>>()?;
    Ok(LowerBound {
        samples,
        min_norm: norms.iter().copied().fold(f64::INFINITY, f64::min),
        max_norm: norms.iter().copied().fold(0.0, f64::max),
        violations: norms
            .iter()
            .filter(|&&v| v < LOWER_BOUND - TOLERANCE)
            .count(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientRow {
    pub t: f64,
    /// Distance of `z = (1, -(1 - delta))` from the boundary ray.
    pub delta: f64,
    pub value: f64,
    pub formula: f64,
    pub limit: f64,
}

/// `exp(2 log rho_mu1(h_t, [z]))` next to the closed form and `e^{-2t}`.
pub fn quotient_table(ts: &[f64], deltas: &[f64]) -> Result<Vec<QuotientRow>, CliError> {
    let mut rows = Vec::new();
    for &t in ts {
        let g = h_t(t);
        for &delta in deltas {
            let (a, b) = (1.0, -(1.0 - delta));
            let z = Flag::from_line(&[a, b])?;
            rows.push(QuotientRow {
                t,
                delta,
                value: (2.0 * rho_log(&mu1(), &g, &z)?).exp(),
                formula: quotient_formula(t, a, b),
                limit: (-2.0 * t).exp(),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct FixerBound {
    pub members: usize,
    pub attempts: usize,
    pub min_mu: f64,
    pub violations: usize,
}

/// Random upper-triangular matrices, kept when they lie in `S_W`.
pub fn fixer_bound(members: usize, seed: u64) -> Result<FixerBound, CliError> {
    let spec = cone();
    let standard = Flag::standard(2);
    let mut rng = rng_for(seed);
    let (mut found, mut attempts, mut violations) = (0, 0, 0);
    let mut min_mu = f64::INFINITY;
    while found < members {
        attempts += 1;
        if attempts > 100 * members.max(1) {
            return Err(CliError::Numeric(format!(
                "only {found} of {members} upper-triangular members found"
            )));
        }
        let mu = rng.random_range(-0.5f64..2.0).exp();
        let x = rng.random_range(-1.0..1.0) * (mu + 1.0 / mu);
        let g = GroupElement::from_rows(&[vec![mu, x], vec![0.0, 1.0 / mu]])?;
        if !membership(&spec, &g)? {
            continue;
        }
        found += 1;
        let log_mu = rho_log(&mu1(), &g, &standard)?;
        min_mu = min_mu.min(log_mu.exp());
        if log_mu < (1.0 - TOLERANCE).ln() {
            violations += 1;
        }
    }
    Ok(FixerBound {
        members: found,
        attempts,
        min_mu,
        violations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Sl2Example {
    pub lower_bound: LowerBound,
    pub quotients: Vec<QuotientRow>,
    pub fixer: FixerBound,
}

impl Sl2Example {
    pub fn run(ts: &[f64], deltas: &[f64], samples: usize, seed: u64) -> Result<Self, CliError> {
        Ok(Self {
            lower_bound: lower_bound(samples, derive(seed, &[1]))?,
            quotients: quotient_table(ts, deltas)?,
            fixer: fixer_bound((samples / 10).max(1), derive(seed, &[2]))?,
        })
    }

    pub fn passed(&self) -> bool {
        self.lower_bound.violations == 0 && self.fixer.violations == 0
    }

    pub fn table(&self) -> String {
        let lb = &self.lower_bound;
        let fx = &self.fixer;
        let mut s = format!(
            "lower bound: min |g(1,0)| = {:.12} over {} members of S_W (max {:.3}), violations of >= 0.5: {}\n",
            lb.min_norm, lb.samples, lb.max_norm, lb.violations
        );
        s += &format!(
            "{:>6} {:>8} {:>22} {:>22} {:>14}\n",
            "t", "delta", "exp(2 log rho_mu1)", "closed form", "exp(-2t)"
        );
        for r in &self.quotients {
            s += &format!(
                "{:>6} {:>8.0e} {:>22.15} {:>22.15} {:>14.9}\n",
                r.t, r.delta, r.value, r.formula, r.limit
            );
        }
        s += &format!(
            "fixer bound: min mu = {:.12} over {} upper-triangular members ({} tried), violations of >= 1: {}\n",
            fx.min_mu, fx.members, fx.attempts, fx.violations
        );
        s
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("t,delta,value,closed_form,limit\n");
        for r in &self.quotients {
            s += &format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.t, r.delta, r.value, r.formula, r.limit
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_zero_rows_are_one() {
        for r in quotient_table(&[0.0], &[0.5, 1e-3]).unwrap() {
            assert!((r.value - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn quotient_approaches_limit() {
        let rows = quotient_table(&[1.0], &[1e-3]).unwrap();
        assert!((rows[0].value - rows[0].formula).abs() < 1e-9);
        assert!((rows[0].value - 0.1353352832366127).abs() < 1e-3);
    }

    #[test]
    fn small_run_passes() {
        let ex = Sl2Example::run(&[0.5], &[1e-3], 2000, 4).unwrap();
        assert!(ex.passed());
        assert!(ex.lower_bound.min_norm >= 0.5);
        assert!(ex.fixer.min_mu >= 1.0 - 1e-12);
        assert!(ex.table().contains("violations of >= 0.5: 0"));
    }
}
