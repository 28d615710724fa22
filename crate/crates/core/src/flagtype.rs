//! Flag-type estimation.
//!
//! At a core point `x0`, a simple root `alpha` belongs to the flag type of
//! `S` iff `inf_{g in S} rho_alpha(g, x0) = 0`; for the other roots the
//! infimum is positive. Sampling can only bound the infimum from above, so
//! for every root we follow the running minimum of `log rho_alpha(w, x0)`
//! over guided words `w` of geometrically growing length. Roots in the flag
//! type show a linear decay in the word length, the others plateau.
//!
//! Words are built greedily (see [`guided_word`]): at each step the candidate
//! letter with the smallest cocycle increment is kept. Uniformly random words
//! almost never find the decaying directions, whose measure shrinks
//! exponentially with the length.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matgroup::{a_cocycle_and_act, Flag};
use crate::rootdata::{Functional, ThetaSet};
use crate::seeds::{derive, stream};
use crate::semigroup::{
    estimate_core_point, guided_word, CorePointEstimate, SamplingParams, SemigroupSpec,
};

/// Running minimum of a cocycle along the length ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootDecayCurve {
    pub root_index: usize,
    pub lengths: Vec<usize>,
    /// `min_log_rho[k]` is the minimum of `log rho` over every prefix of
    /// every word sampled at ladder lengths `<= lengths[k]`.
    pub min_log_rho: Vec<f64>,
    pub samples_per_length: usize,
    /// Median of `|log rho|` increments over all letters of all words.
    pub median_letter_gain: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Decaying,
    BoundedBelow,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// `slope_min = slope_fraction * median_letter_gain`.
    pub slope_fraction: f64,
    /// Bounded roots must end at or above this (nats).
    pub floor_min: f64,
    /// Decaying roots must end at or below this (nats).
    pub floor_max: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            slope_fraction: 0.01,
            floor_min: -8.0,
            floor_max: -8.0,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.slope_fraction > 0.0)
            || !self.floor_min.is_finite()
            || !self.floor_max.is_finite()
        {
            return Err(Error::InvalidParameter(
                "thresholds need slope_fraction > 0 and finite floors".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub decision: Decision,
    /// Least-squares slope of the curve over the upper half of the ladder.
    pub slope: f64,
    pub slope_min: f64,
    pub final_min: f64,
}

/// Running-minimum curve of `cost(a)` along guided words starting at `base`.
///
/// Ladder point `k`, sample `s` uses the seed `derive(seed, [k, s])`.
pub fn functional_curve<F>(
    spec: &SemigroupSpec,
    base: &Flag,
    cost: F,
    params: &SamplingParams,
    seed: u64,
) -> Result<(Vec<usize>, Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    params.validate()?;
    let lengths = params.ladder();
    let jobs: Vec<(usize, usize)> = (0..lengths.len())
        .flat_map(|k| (0..params.samples_per_length).map(move |s| (k, s)))
        .collect();
    let words = jobs
        .par_iter()
        .map(|&(k, s)| {
            let w = guided_word(
                spec,
                base,
                &cost,
                lengths[k],
                params,
                derive(seed, &[k as u64, s as u64]),
            )?;
            let gains: Vec<f64> = w.letter_gains().map(f64::abs).collect();
            Ok((k, w.min_cost(), gains))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut per_length = vec![f64::INFINITY; lengths.len()];
    let mut gains = Vec::new();
    for (k, m, g) in words {
        per_length[k] = per_length[k].min(m);
        gains.extend(g);
    }
    let mut running = f64::INFINITY;
    let min_log_rho = per_length
        .into_iter()
        .map(|m| {
            running = running.min(m);
            running
        })
        .collect();
    Ok((lengths, min_log_rho, median(&mut gains)))
}

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Decay curve of `log rho_{alpha_i}(., x0)`.
pub fn decay_curve(
    spec: &SemigroupSpec,
    x0: &Flag,
    root_index: usize,
    params: &SamplingParams,
    seed: u64,
) -> Result<RootDecayCurve> {
    let n = spec.dim();
    if root_index == 0 || root_index >= n {
        return Err(Error::InvalidRootIndex {
            index: root_index,
            rank: n,
        });
    }
    let i = root_index - 1;
    let (lengths, min_log_rho, median_letter_gain) =
        functional_curve(spec, x0, |h| h[i] - h[i + 1], params, seed)?;
    Ok(RootDecayCurve {
        root_index,
        lengths,
        min_log_rho,
        samples_per_length: params.samples_per_length,
        median_letter_gain,
    })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

pub fn classify(curve: &RootDecayCurve, thresholds: &Thresholds) -> Classification {
    let final_min = curve.min_log_rho.last().copied().unwrap_or(f64::NAN);
    let slope_min = thresholds.slope_fraction * curve.median_letter_gain;
    let points = curve.lengths.len().min(curve.min_log_rho.len());
    if points < 4 || !final_min.is_finite() {
        return Classification {
            decision: Decision::Inconclusive,
            slope: f64::NAN,
            slope_min,
            final_min,
        };
    }
    let start = points / 2;
    let xs: Vec<f64> = curve.lengths[start..points]
        .iter()
        .map(|&l| l as f64)
        .collect();
    let slope = least_squares_slope(&xs, &curve.min_log_rho[start..points]);
    let decision = if slope <= -slope_min && final_min <= thresholds.floor_max {
        Decision::Decaying
    } else if slope.abs() < slope_min && final_min >= thresholds.floor_min {
        Decision::BoundedBelow
    } else {
        Decision::Inconclusive
    };
    Classification {
        decision,
        slope,
        slope_min,
        final_min,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    pub root_index: usize,
    pub decision: Decision,
    pub slope: Option<f64>,
    pub slope_min: Option<f64>,
    pub final_min: Option<f64>,
    pub curve: Option<RootDecayCurve>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub core_point: Option<CorePointEstimate>,
    pub theta_hat: Option<ThetaSet>,
    pub agrees: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagTypeReport {
    pub n: usize,
    pub theta_hat: ThetaSet,
    pub roots: Vec<RootReport>,
    pub core_point: CorePointEstimate,
    pub cross_check: Option<CrossCheck>,
    pub seed: u64,
    pub params: SamplingParams,
    pub thresholds: Thresholds,
}

impl FlagTypeReport {
    pub fn decision(&self, root_index: usize) -> Option<Decision> {
        self.roots
            .iter()
            .find(|r| r.root_index == root_index)
            .map(|r| r.decision)
    }

    pub fn has_inconclusive(&self) -> bool {
        self.roots
            .iter()
            .any(|r| r.decision == Decision::Inconclusive)
    }
}

fn root_reports(
    spec: &SemigroupSpec,
    x0: &Flag,
    params: &SamplingParams,
    thresholds: &Thresholds,
    seed: u64,
) -> Vec<RootReport> {
    (1..spec.dim())
        .into_par_iter()
        .map(|i| {
            match decay_curve(
                spec,
                x0,
                i,
                params,
                derive(seed, &[stream::DECAY, i as u64]),
            ) {
                Ok(curve) => {
                    let c = classify(&curve, thresholds);
                    RootReport {
                        root_index: i,
                        decision: c.decision,
                        slope: Some(c.slope),
                        slope_min: Some(c.slope_min),
                        final_min: Some(c.final_min),
                        curve: Some(curve),
                        error: None,
                    }
                }
                Err(e) => RootReport {
                    root_index: i,
                    decision: Decision::Inconclusive,
                    slope: None,
                    slope_min: None,
                    final_min: None,
                    curve: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

fn theta_of(n: usize, roots: &[RootReport]) -> ThetaSet {
    ThetaSet::new(
        n,
        roots
            .iter()
            .filter(|r| r.decision == Decision::Decaying)
            .map(|r| r.root_index),
    )
    .expect("root indices come from 1..n")
}

/// Core point, one decay curve per simple root, classification, and an
/// optional repeat at a second core point.
pub fn estimate_flag_type(
    spec: &SemigroupSpec,
    params: &SamplingParams,
    thresholds: &Thresholds,
    seed: u64,
) -> Result<FlagTypeReport> {
    params.validate()?;
    thresholds.validate()?;
    let n = spec.dim();
    let core = estimate_core_point(spec, params, derive(seed, &[stream::CORE]))?;
    let roots = root_reports(spec, &core.flag, params, thresholds, seed);
    let theta_hat = theta_of(n, &roots);

    let cross_check = params.cross_check.then(|| {
        let cross_seed = derive(seed, &[stream::CROSS_CHECK]);
        match estimate_core_point(spec, params, derive(cross_seed, &[stream::CORE])) {
            Ok(second) => {
                let r = root_reports(spec, &second.flag, params, thresholds, cross_seed);
                let t = theta_of(n, &r);
                CrossCheck {
                    agrees: t == theta_hat,
                    core_point: Some(second),
                    theta_hat: Some(t),
                    error: None,
                }
            }
            Err(e) => CrossCheck {
                core_point: None,
                theta_hat: None,
                agrees: false,
                error: Some(e.to_string()),
            },
        }
    });

    Ok(FlagTypeReport {
        n,
        theta_hat,
        roots,
        core_point: core,
        cross_check,
        seed,
        params: params.clone(),
        thresholds: thresholds.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosetPoint {
    /// `min log rho_lambda(g h, y)` over sampled `g`.
    pub with_h: f64,
    /// `min log rho_lambda(g, y)` over sampled `g` (no coset shift).
    pub without_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosetReport {
    pub t_power: usize,
    /// `log c`: minimum of `with_h` over the grid.
    pub log_c: f64,
    /// Minimum of `without_h` over the grid.
    pub control_min: f64,
    pub points: Vec<CosetPoint>,
}

/// Empirical uniform lower bound on the coset `S h`, `h = witness^t_power`,
/// over a grid of flags, next to the same minimum without `h`.
///
/// Grid point `j` uses the streams `derive(seed, [COSET_WITH, j])` and
/// `derive(seed, [COSET_CONTROL, j])`; with `t_power = 0` the first one is
/// exactly the [`functional_curve`] minimum at `y_j`.
pub fn coset_uniform_check(
    spec: &SemigroupSpec,
    lambda: &Functional,
    t_power: usize,
    grid: &[Flag],
    core: &CorePointEstimate,
    params: &SamplingParams,
    seed: u64,
) -> Result<CosetReport> {
    let n = spec.dim();
    if lambda.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: lambda.dim(),
        });
    }
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    let cost = |h: &[f64]| lambda.eval(h).unwrap_or(f64::NAN);
    let points = grid
        .iter()
        .enumerate()
        .map(|(j, y)| {
            // log rho_lambda(h, y) and h y, letter by letter.
            let mut shifted = y.clone();
            let mut offset = 0.0;
            for _ in 0..t_power {
                for g in &core.witness.letters {
                    let (h, next) = a_cocycle_and_act(g, &shifted)?;
                    offset += lambda.eval(&h)?;
                    shifted = next;
                }
            }
            let (_, with, _) = functional_curve(
                spec,
                &shifted,
                cost,
                params,
                derive(seed, &[stream::COSET_WITH, j as u64]),
            )?;
            let (_, without, _) = functional_curve(
                spec,
                y,
                cost,
                params,
                derive(seed, &[stream::COSET_CONTROL, j as u64]),
            )?;
            Ok(CosetPoint {
                with_h: offset + with.last().copied().unwrap_or(f64::INFINITY),
                without_h: without.last().copied().unwrap_or(f64::INFINITY),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let log_c = points
        .iter()
        .map(|p| p.with_h)
        .fold(f64::INFINITY, f64::min);
    let control_min = points
        .iter()
        .map(|p| p.without_h)
        .fold(f64::INFINITY, f64::min);
    Ok(CosetReport {
        t_power,
        log_c,
        control_min,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::GroupElement;

    fn curve(lengths: &[usize], values: &[f64], gain: f64) -> RootDecayCurve {
        RootDecayCurve {
            root_index: 1,
            lengths: lengths.to_vec(),
            min_log_rho: values.to_vec(),
            samples_per_length: 1,
            median_letter_gain: gain,
        }
    }

    const LADDER: [usize; 8] = [8, 16, 32, 64, 128, 256, 512, 1024];

    #[test]
    fn linear_decay_is_decaying() {
        let values: Vec<f64> = LADDER.iter().map(|&l| -2.0 * l as f64).collect();
        let c = classify(&curve(&LADDER, &values, 2.0), &Thresholds::default());
        assert_eq!(c.decision, Decision::Decaying);
        assert!((c.slope + 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_curve_is_bounded() {
        let values = vec![0.5f64.ln(); 8];
        let c = classify(&curve(&LADDER, &values, 0.3), &Thresholds::default());
        assert_eq!(c.decision, Decision::BoundedBelow);
        assert_eq!(c.slope, 0.0);
    }

    #[test]
    fn shallow_slope_is_inconclusive() {
        let values: Vec<f64> = LADDER.iter().map(|&l| -0.005 * l as f64).collect();
        let c = classify(&curve(&LADDER, &values, 0.3), &Thresholds::default());
        assert!((c.slope_min - 0.003).abs() < 1e-15);
        assert_eq!(c.decision, Decision::Inconclusive);
    }

    #[test]
    fn deep_plateau_is_inconclusive() {
        let values = vec![-20.0; 8];
        let c = classify(&curve(&LADDER, &values, 0.3), &Thresholds::default());
        assert_eq!(c.decision, Decision::Inconclusive);
    }

    #[test]
    fn short_curves_abstain() {
        let c = classify(
            &curve(&[8, 16, 32], &[-1.0, -2.0, -4.0], 1.0),
            &Thresholds::default(),
        );
        assert_eq!(c.decision, Decision::Inconclusive);
    }

    #[test]
    fn exact_decay_for_expanding_diagonal() {
        // x0 is the repeller of diag(1/e, e): each letter costs alpha = -2.
        let g = GroupElement::from_log_diagonal(&[-1.0, 1.0]).unwrap();
        let spec = SemigroupSpec::finitely_generated(vec![g], 0.0).unwrap();
        let params = SamplingParams {
            samples_per_length: 2,
            max_length: 256,
            candidates_per_step: 2,
            ..SamplingParams::default()
        };
        let c = decay_curve(&spec, &Flag::standard(2), 1, &params, 1).unwrap();
        for (l, v) in c.lengths.iter().zip(&c.min_log_rho) {
            assert!((v + 2.0 * *l as f64).abs() < 1e-9);
        }
        assert!((c.median_letter_gain - 2.0).abs() < 1e-12);
        assert!(decay_curve(&spec, &Flag::standard(2), 2, &params, 1).is_err());
    }

    #[test]
    fn curves_are_monotone_and_reproducible() {
        let spec = SemigroupSpec::cone_compression(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let params = SamplingParams {
            samples_per_length: 3,
            max_length: 64,
            ..SamplingParams::default()
        };
        let a = decay_curve(&spec, &Flag::standard(2), 1, &params, 5).unwrap();
        let b = decay_curve(&spec, &Flag::standard(2), 1, &params, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.min_log_rho.windows(2).all(|w| w[1] <= w[0]));
    }

    fn sl2_cone() -> SemigroupSpec {
        SemigroupSpec::cone_compression(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap()
    }

    fn small() -> SamplingParams {
        SamplingParams {
            samples_per_length: 4,
            max_length: 128,
            cross_check: false,
            ..SamplingParams::default()
        }
    }

    #[test]
    fn sl2_cone_plateau_respects_the_lower_bound() {
        // |g(1,0)| >= 1/2 on S_W, and rho_alpha = rho_mu1^2.
        let c = decay_curve(&sl2_cone(), &Flag::standard(2), 1, &small(), 3).unwrap();
        let bound = 2.0 * 0.5f64.ln() - 1e-12;
        assert!(c.min_log_rho.iter().all(|&v| v >= bound));
        assert_eq!(
            classify(&c, &Thresholds::default()).decision,
            Decision::BoundedBelow
        );
    }

    #[test]
    fn witnesses_satisfy_the_fixer_bound() {
        use crate::cocycle::rho_log;
        use crate::matgroup::{act, flag_distance};
        use crate::rootdata::{in_partial_chamber, RootDatum};
        let octant = SemigroupSpec::cone_compression(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        for (spec, theta) in [
            (sl2_cone(), ThetaSet::empty()),
            (octant, ThetaSet::new(3, [2]).unwrap()),
        ] {
            let n = spec.dim();
            let mu1 = RootDatum::new(n)
                .unwrap()
                .fundamental_weight(1)
                .unwrap()
                .clone();
            assert!(in_partial_chamber(&mu1, &theta).unwrap());
            for seed in 0..5 {
                let core = estimate_core_point(&spec, &small(), seed).unwrap();
                let w = core.witness.product().unwrap();
                assert!(flag_distance(&act(&w, &core.flag).unwrap(), &core.flag).unwrap() <= 1e-6);
                assert!(rho_log(&mu1, &w, &core.flag).unwrap() >= -1e-6);
            }
        }
    }

    #[test]
    fn coset_with_zero_power_is_the_plain_curve() {
        let spec = sl2_cone();
        let core = estimate_core_point(&spec, &small(), 1).unwrap();
        let mu1 = Functional::new(vec![1.0, 0.0]);
        let r = coset_uniform_check(
            &spec,
            &mu1,
            0,
            std::slice::from_ref(&core.flag),
            &core,
            &small(),
            9,
        )
        .unwrap();
        let (_, curve, _) = functional_curve(
            &spec,
            &core.flag,
            |h| h[0],
            &small(),
            derive(9, &[stream::COSET_WITH, 0]),
        )
        .unwrap();
        assert_eq!(r.log_c, *curve.last().unwrap());
    }

    #[test]
    fn coset_bound_is_uniform_near_the_boundary() {
        let spec = sl2_cone();
        let core = estimate_core_point(&spec, &small(), 1).unwrap();
        let mu1 = Functional::new(vec![1.0, 0.0]);
        // Lines approaching [(1, -1)] from inside the cone.
        let grid: Vec<Flag> = [0.5, 0.9, 0.99, 0.999]
            .iter()
            .map(|&b: &f64| Flag::from_line(&[1.0, -b]).unwrap())
            .collect();
        let r = coset_uniform_check(&spec, &mu1, 4, &grid, &core, &small(), 2).unwrap();
        let doubled = SamplingParams {
            samples_per_length: 8,
            ..small()
        };
        let r2 = coset_uniform_check(&spec, &mu1, 4, &grid, &core, &doubled, 2).unwrap();
        assert!(r.log_c > -1.0 && r2.log_c > -1.0);
        assert!((r.log_c - r2.log_c).abs() < 0.5);
        assert!(r.control_min < r.log_c - 2.0);
    }
}
