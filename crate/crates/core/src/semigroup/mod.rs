//! Semigroup specifications and reproducible word sampling.
//!
//! Two kinds of semigroups are supported:
//!
//! * finitely generated, thickened by `epsilon`: each letter is a generator
//!   times `exp(epsilon Z)` with `Z` a random unit trace-zero matrix, so the
//!   sampled semigroup has nonempty interior;
//! * compression semigroups `S_W = {g : g W in W}` of a pointed polyhedral
//!   cone `W`, sampled by constrained random walks that keep every prefix
//!   product inside `S_W`.
//!
//! A core point of the invariant control set is realized as the attractor
//! flag of a regular sampled word (for cones, one mapping `W` strictly inside
//! itself).

mod cone;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matgroup::{
    a_cocycle, a_cocycle_and_act, act, attractor_flag_with, exp_trace_zero, random_trace_zero_unit,
    AttractorOptions, Flag, GroupElement,
};
use crate::seeds::{derive, rng_for, stream};

pub use cone::{nnls, Cone};

#[derive(Debug, Clone, PartialEq)]
pub enum SemigroupSpec {
    FinitelyGenerated {
        generators: Vec<GroupElement>,
        epsilon: f64,
    },
    ConeCompression(Cone),
}

impl SemigroupSpec {
    pub fn finitely_generated(generators: Vec<GroupElement>, epsilon: f64) -> Result<Self> {
        let n = generators
            .first()
            .map(GroupElement::dim)
            .ok_or_else(|| Error::InvalidSpec("no generators".into()))?;
        if let Some(g) = generators.iter().find(|g| g.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.dim(),
            });
        }
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "epsilon must be >= 0, got {epsilon}"
            )));
        }
        Ok(Self::FinitelyGenerated {
            generators,
            epsilon,
        })
    }

    pub fn cone_compression(rays: &[Vec<f64>]) -> Result<Self> {
        Ok(Self::ConeCompression(Cone::new(rays)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::FinitelyGenerated { generators, .. } => generators[0].dim(),
            Self::ConeCompression(cone) => cone.dim(),
        }
    }
}

/// Sampling knobs shared by word sampling, core point search and the
/// flag-type estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingParams {
    /// Fresh words per ladder length.
    pub samples_per_length: usize,
    /// Geometric length ladder `min_length, 2 min_length, ..., max_length`.
    pub min_length: usize,
    pub max_length: usize,
    /// Candidate letters scored at each step of a guided word.
    pub candidates_per_step: usize,
    /// Scale `sigma` of cone-walk proposals `exp(sigma Z)`.
    pub proposal_scale: f64,
    /// Proposals per letter before a cone walk gives up.
    pub rejection_budget: usize,
    /// Core point search: words per length, lengths doubling between the
    /// two bounds.
    pub core_candidates_per_length: usize,
    pub core_min_length: usize,
    pub core_max_length: usize,
    pub attractor_max_iter: usize,
    /// Re-estimate the flag type at a second core point.
    pub cross_check: bool,
}

impl Default for SamplingParams {
    fn default() -> Self {
        Self {
            samples_per_length: 8,
            min_length: 8,
            max_length: 1024,
            candidates_per_step: 16,
            proposal_scale: 0.5,
            rejection_budget: 5000,
            core_candidates_per_length: 8,
            core_min_length: 8,
            core_max_length: 1024,
            attractor_max_iter: 20_000,
            cross_check: true,
        }
    }
}

impl SamplingParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.samples_per_length == 0 {
            return bad("samples_per_length must be positive");
        }
        if self.min_length == 0 || self.max_length < self.min_length {
            return bad("length ladder needs 1 <= min_length <= max_length");
        }
        if self.core_min_length == 0 || self.core_max_length < self.core_min_length {
            return bad("core ladder needs 1 <= core_min_length <= core_max_length");
        }
        if self.candidates_per_step == 0 || self.core_candidates_per_length == 0 {
            return bad("candidate counts must be positive");
        }
        if !(self.proposal_scale > 0.0) || !self.proposal_scale.is_finite() {
            return bad("proposal_scale must be positive");
        }
        if self.rejection_budget == 0 || self.attractor_max_iter == 0 {
            return bad("budgets must be positive");
        }
        Ok(())
    }

    pub fn ladder(&self) -> Vec<usize> {
        doubling(self.min_length, self.max_length)
    }

    pub fn core_ladder(&self) -> Vec<usize> {
        doubling(self.core_min_length, self.core_max_length)
    }

    fn attractor_options(&self) -> AttractorOptions {
        AttractorOptions {
            max_iter: self.attractor_max_iter,
            ..AttractorOptions::default()
        }
    }
}

fn doubling(lo: usize, hi: usize) -> Vec<usize> {
    std::iter::successors(Some(lo), |&l| l.checked_mul(2))
        .take_while(|&l| l <= hi)
        .collect()
}

/// `g W in W`, checked on the extreme rays.
pub fn membership(spec: &SemigroupSpec, g: &GroupElement) -> Result<bool> {
    match spec {
        SemigroupSpec::FinitelyGenerated { .. } => Err(Error::MembershipUndecidable),
        SemigroupSpec::ConeCompression(cone) => {
            check_dim(spec, g.dim())?;
            Ok(cone.contains_columns(&(g.matrix() * cone.rays())))
        }
    }
}

/// Smallest interior margin of `g r` over the extreme rays `r`; positive iff
/// `g` maps `W \ {0}` into the interior of `W`.
pub fn compression_margin(cone: &Cone, g: &GroupElement) -> f64 {
    let images = g.matrix() * cone.rays();
    images
        .column_iter()
        .map(|c| cone.interior_margin(&c.into_owned()))
        .fold(f64::INFINITY, f64::min)
}

fn check_dim(spec: &SemigroupSpec, n: usize) -> Result<()> {
    if spec.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: n,
        });
    }
    Ok(())
}

/// A word `g_L ... g_1` (letters in application order).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledWord {
    pub letters: Vec<GroupElement>,
    /// Generator behind each letter; `None` for cone-walk steps.
    pub generator_indices: Vec<Option<usize>>,
}

impl SampledWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Ordered product `g_L ... g_1`.
    pub fn product(&self) -> Result<GroupElement> {
        let n = self.letters.first().map_or(0, GroupElement::dim);
        let mut p = GroupElement::identity(n);
        for g in &self.letters {
            p = g.mul(&p);
        }
        if !p.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(p)
    }

    /// `g_L ... g_1 x`, one letter at a time.
    pub fn apply(&self, x: &Flag) -> Result<Flag> {
        self.letters.iter().try_fold(x.clone(), |x, g| act(g, &x))
    }
}

/// Tracks the normalized images of the cone's rays under the current prefix
/// product, so long walks never form the (overflowing) product itself.
#[derive(Debug, Clone)]
pub(crate) struct ConeWalk<'a> {
    cone: &'a Cone,
    images: DMatrix<f64>,
}

impl<'a> ConeWalk<'a> {
    pub(crate) fn new(cone: &'a Cone) -> Self {
        Self {
            cone,
            images: cone.rays().clone(),
        }
    }

    /// Images after appending `g`, if the extended prefix stays in `S_W`.
    pub(crate) fn try_extend(&self, g: &GroupElement) -> Option<DMatrix<f64>> {
        let mut next = g.matrix() * &self.images;
        if !self.cone.contains_columns(&next) {
            return None;
        }
        for mut c in next.column_iter_mut() {
            let norm = c.norm();
            c /= norm;
        }
        Some(next)
    }

    pub(crate) fn commit(&mut self, images: DMatrix<f64>) {
        self.images = images;
    }
}

/// Draws one unconstrained letter proposal.
pub(crate) fn propose_letter<R: Rng + ?Sized>(
    spec: &SemigroupSpec,
    params: &SamplingParams,
    rng: &mut R,
) -> Result<(GroupElement, Option<usize>)> {
    match spec {
        SemigroupSpec::FinitelyGenerated {
            generators,
            epsilon,
        } => {
            let idx = rng.random_range(0..generators.len());
            let g = &generators[idx];
            if *epsilon == 0.0 {
                return Ok((g.clone(), Some(idx)));
            }
            let z = random_trace_zero_unit(g.dim(), rng) * *epsilon;
            let perturbed = GroupElement::from_scaled(g.matrix() * exp_trace_zero(&z)?.matrix())?;
            Ok((perturbed, Some(idx)))
        }
        SemigroupSpec::ConeCompression(cone) => {
            let z = random_trace_zero_unit(cone.dim(), rng) * params.proposal_scale;
            Ok((exp_trace_zero(&z)?, None))
        }
    }
}

/// Random word of the given length. Deterministic in `seed`.
pub fn sample_word(
    spec: &SemigroupSpec,
    length: usize,
    params: &SamplingParams,
    seed: u64,
) -> Result<SampledWord> {
    if length == 0 {
        return Err(Error::InvalidParameter(
            "word length must be at least 1".into(),
        ));
    }
    let mut rng = rng_for(seed);
    let mut letters = Vec::with_capacity(length);
    let mut generator_indices = Vec::with_capacity(length);
    match spec {
        SemigroupSpec::FinitelyGenerated { .. } => {
            for _ in 0..length {
                let (g, idx) = propose_letter(spec, params, &mut rng)?;
                letters.push(g);
                generator_indices.push(idx);
            }
        }
        SemigroupSpec::ConeCompression(cone) => {
            let mut walk = ConeWalk::new(cone);
            for step in 0..length {
                let mut accepted = None;
                for _ in 0..params.rejection_budget {
                    let (g, _) = propose_letter(spec, params, &mut rng)?;
                    if let Some(images) = walk.try_extend(&g) {
                        accepted = Some((g, images));
                        break;
                    }
                }
                let (g, images) = accepted.ok_or(Error::RejectionBudgetExhausted {
                    budget: params.rejection_budget,
                    step,
                })?;
                walk.commit(images);
                letters.push(g);
                generator_indices.push(None);
            }
        }
    }
    Ok(SampledWord {
        letters,
        generator_indices,
    })
}

/// A word built by choosing, at each step, the candidate letter with the
/// smallest cocycle increment `cost(a(g, x))` at the current flag `x`.
#[derive(Debug, Clone)]
pub struct GuidedWord {
    pub letters: Vec<GroupElement>,
    /// Accumulated cost after each letter.
    pub partial_costs: Vec<f64>,
    pub end: Flag,
}

impl GuidedWord {
    pub fn min_cost(&self) -> f64 {
        self.partial_costs
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn letter_gains(&self) -> impl Iterator<Item = f64> + '_ {
        let mut prev = 0.0;
        self.partial_costs.iter().map(move |&c| {
            let g = c - prev;
            prev = c;
            g
        })
    }
}

/// Greedy word search for small cocycle values. Every letter is an honest
/// semigroup element (for cones, every prefix stays in `S_W`), so the
/// resulting costs are upper bounds for the infimum over the semigroup.
pub fn guided_word<F>(
    spec: &SemigroupSpec,
    base: &Flag,
    cost: F,
    length: usize,
    params: &SamplingParams,
    seed: u64,
) -> Result<GuidedWord>
where
    F: Fn(&[f64]) -> f64,
{
    if length == 0 {
        return Err(Error::InvalidParameter(
            "word length must be at least 1".into(),
        ));
    }
    check_dim(spec, base.dim())?;
    let mut rng = rng_for(seed);
    let mut walk = match spec {
        SemigroupSpec::ConeCompression(cone) => Some(ConeWalk::new(cone)),
        SemigroupSpec::FinitelyGenerated { .. } => None,
    };
    let mut x = base.clone();
    let mut acc = 0.0;
    let mut letters = Vec::with_capacity(length);
    let mut partial_costs = Vec::with_capacity(length);

    for step in 0..length {
        let mut best: Option<(f64, GroupElement, Flag, Option<DMatrix<f64>>)> = None;
        let mut found = 0;
        let mut proposals = 0;
        while found < params.candidates_per_step && proposals < params.rejection_budget {
            proposals += 1;
            let (g, _) = propose_letter(spec, params, &mut rng)?;
            let images = match &walk {
                Some(w) => match w.try_extend(&g) {
                    Some(images) => Some(images),
                    None => continue,
                },
                None => None,
            };
            found += 1;
            let (h, moved) = a_cocycle_and_act(&g, &x)?;
            let c = cost(&h);
            if best.as_ref().is_none_or(|b| c < b.0) {
                best = Some((c, g, moved, images));
            }
        }
        let (c, g, moved, images) = best.ok_or(Error::RejectionBudgetExhausted {
            budget: params.rejection_budget,
            step,
        })?;
        if let (Some(w), Some(images)) = (walk.as_mut(), images) {
            w.commit(images);
        }
        acc += c;
        partial_costs.push(acc);
        letters.push(g);
        x = moved;
    }
    Ok(GuidedWord {
        letters,
        partial_costs,
        end: x,
    })
}

/// Attractor flag of a regular interior word, with the word as witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorePointEstimate {
    pub flag: Flag,
    pub witness: SampledWord,
    /// `max_i (h_{i+1} - h_i)` of `a(witness, flag)`: log of the slowest
    /// eigenvalue-modulus ratio, negative for a regular witness.
    pub contraction_rate: f64,
}

/// Searches words of doubling length for a regular product and returns its
/// attractor flag.
pub fn estimate_core_point(
    spec: &SemigroupSpec,
    params: &SamplingParams,
    seed: u64,
) -> Result<CorePointEstimate> {
    params.validate()?;
    let ladder = params.core_ladder();
    let per_length = params.core_candidates_per_length;
    for (li, &len) in ladder.iter().enumerate() {
        let found: Vec<Option<CorePointEstimate>> = (0..per_length)
            .into_par_iter()
            .map(|c| {
                core_candidate(
                    spec,
                    len,
                    params,
                    derive(seed, &[stream::CORE, li as u64, c as u64]),
                )
            })
            .collect();
        if let Some(est) = found.into_iter().flatten().next() {
            return Ok(est);
        }
    }
    Err(Error::NoRegularWordFound {
        candidates: ladder.len() * per_length,
    })
}

fn core_candidate(
    spec: &SemigroupSpec,
    len: usize,
    params: &SamplingParams,
    seed: u64,
) -> Option<CorePointEstimate> {
    let word = sample_word(spec, len, params, seed).ok()?;
    let product = word.product().ok()?;
    if let SemigroupSpec::ConeCompression(cone) = spec {
        if !(compression_margin(cone, &product) > 1e-9) {
            return None;
        }
    }
    let mut rng = rng_for(derive(seed, &[stream::CORE]));
    let flag = attractor_flag_with(&product, &mut rng, params.attractor_options()).ok()?;
    let h = a_cocycle(&product, &flag).ok()?;
    let contraction_rate = h
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    Some(CorePointEstimate {
        flag,
        witness: word,
        contraction_rate,
    })
}

/// Orbit sample `word x0` over random words with lengths in
/// `1..=max_length`: an empirical picture of the invariant control set.
pub fn ics_sample(
    spec: &SemigroupSpec,
    x0: &Flag,
    count: usize,
    max_length: usize,
    params: &SamplingParams,
    seed: u64,
) -> Result<Vec<Flag>> {
    if max_length == 0 {
        return Err(Error::InvalidParameter(
            "max_length must be at least 1".into(),
        ));
    }
    check_dim(spec, x0.dim())?;
    (0..count)
        .into_par_iter()
        .map(|c| {
            let s = derive(seed, &[stream::ICS, c as u64]);
            let len = rng_for(s).random_range(1..=max_length);
            let word = sample_word(spec, len, params, derive(s, &[stream::WORD]))?;
            word.apply(x0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::flag_distance;

    fn sl2_cone() -> SemigroupSpec {
        SemigroupSpec::cone_compression(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap()
    }

    fn octant() -> SemigroupSpec {
        SemigroupSpec::cone_compression(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap()
    }

    fn small_params() -> SamplingParams {
        SamplingParams {
            cross_check: false,
            ..SamplingParams::default()
        }
    }

    #[test]
    fn cone_membership_examples() {
        let spec = sl2_cone();
        assert!(membership(&spec, &GroupElement::identity(2)).unwrap());
        let t: f64 = 1.0;
        let ht =
            GroupElement::from_rows(&[vec![t.cosh(), t.sinh()], vec![t.sinh(), t.cosh()]]).unwrap();
        assert!(membership(&spec, &ht).unwrap());
        let rot = GroupElement::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        assert!(!membership(&spec, &rot).unwrap());
    }

    #[test]
    fn membership_undecidable_for_generators() {
        let spec = SemigroupSpec::finitely_generated(vec![GroupElement::identity(2)], 0.0).unwrap();
        assert_eq!(
            membership(&spec, &GroupElement::identity(2)).unwrap_err(),
            Error::MembershipUndecidable
        );
    }

    #[test]
    fn spec_validation() {
        assert!(SemigroupSpec::finitely_generated(vec![], 0.0).is_err());
        assert!(SemigroupSpec::finitely_generated(vec![GroupElement::identity(2)], -1.0).is_err());
        assert!(SemigroupSpec::finitely_generated(
            vec![GroupElement::identity(2), GroupElement::identity(3)],
            0.0
        )
        .is_err());
    }

    #[test]
    fn single_unperturbed_letter() {
        let g = GroupElement::from_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let spec = SemigroupSpec::finitely_generated(vec![g.clone()], 0.0).unwrap();
        let w = sample_word(&spec, 1, &small_params(), 5).unwrap();
        assert_eq!(w.letters, vec![g]);
        assert_eq!(w.generator_indices, vec![Some(0)]);
        assert!(sample_word(&spec, 0, &small_params(), 5).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        for spec in [sl2_cone(), octant()] {
            let a = sample_word(&spec, 20, &small_params(), 99).unwrap();
            let b = sample_word(&spec, 20, &small_params(), 99).unwrap();
            assert_eq!(a, b);
            let c = sample_word(&spec, 20, &small_params(), 100).unwrap();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn cone_words_are_members() {
        let params = small_params();
        for spec in [sl2_cone(), octant()] {
            let mut words = Vec::new();
            for s in 0..10 {
                let w = sample_word(&spec, 12, &params, s).unwrap();
                assert!(membership(&spec, &w.product().unwrap()).unwrap());
                words.push(w.product().unwrap());
            }
            // Closure under products.
            for pair in words.windows(2) {
                assert!(membership(&spec, &pair[0].mul(&pair[1])).unwrap());
            }
        }
    }

    #[test]
    fn perturbed_letters_stay_near_generators() {
        let g = GroupElement::from_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let spec = SemigroupSpec::finitely_generated(vec![g.clone()], 1e-3).unwrap();
        let w = sample_word(&spec, 5, &small_params(), 1).unwrap();
        for l in &w.letters {
            assert!((l.matrix() - g.matrix()).norm() < 1e-2);
            assert!((l.matrix().determinant() - 1.0).abs() < 1e-12);
            assert_ne!(l, &g);
        }
    }

    #[test]
    fn core_point_of_diagonal_generator() {
        let g = GroupElement::from_log_diagonal(&[4f64.ln(), 0.0, -(4f64.ln())]).unwrap();
        let spec = SemigroupSpec::finitely_generated(vec![g], 0.0).unwrap();
        let est = estimate_core_point(&spec, &small_params(), 3).unwrap();
        assert!(flag_distance(&est.flag, &Flag::standard(3)).unwrap() < 1e-12);
        assert!(est.witness.generator_indices.iter().all(|&i| i == Some(0)));
        assert!((est.contraction_rate + 4f64.ln() * est.witness.len() as f64).abs() < 1e-9);
    }

    #[test]
    fn core_point_of_sl2_cone_is_interior() {
        let spec = sl2_cone();
        for seed in 0..5 {
            let est = estimate_core_point(&spec, &small_params(), seed).unwrap();
            let v = est.flag.frame().column(0);
            let (a, b) = if v[0] < 0.0 {
                (-v[0], -v[1])
            } else {
                (v[0], v[1])
            };
            assert!(b.abs() < a, "line ({a}, {b}) not inside the cone");
            let moved = act(&est.witness.product().unwrap(), &est.flag).unwrap();
            assert!(flag_distance(&moved, &est.flag).unwrap() < 1e-8);
            assert!(est.contraction_rate < 0.0);
            let SemigroupSpec::ConeCompression(cone) = &spec else {
                unreachable!()
            };
            assert!(compression_margin(cone, &est.witness.product().unwrap()) > 0.0);
        }
    }

    #[test]
    fn no_regular_word_for_rotations() {
        let (s, c) = 0.3f64.sin_cos();
        let rot = GroupElement::from_rows(&[vec![c, -s], vec![s, c]]).unwrap();
        let spec = SemigroupSpec::finitely_generated(vec![rot], 0.0).unwrap();
        let params = SamplingParams {
            core_candidates_per_length: 2,
            core_max_length: 16,
            attractor_max_iter: 500,
            ..small_params()
        };
        assert!(matches!(
            estimate_core_point(&spec, &params, 1),
            Err(Error::NoRegularWordFound { candidates: 4 })
        ));
    }

    #[test]
    fn ics_samples_stay_in_cones() {
        let spec = sl2_cone();
        let params = small_params();
        let core = estimate_core_point(&spec, &params, 4).unwrap();
        for y in ics_sample(&spec, &core.flag, 200, 40, &params, 8).unwrap() {
            let v = y.frame().column(0);
            assert!(v[1].abs() <= v[0].abs() + 1e-12);
        }

        let spec = octant();
        let core = estimate_core_point(&spec, &params, 4).unwrap();
        for y in ics_sample(&spec, &core.flag, 200, 40, &params, 9).unwrap() {
            let v = y.frame().column(0);
            let s = if v.sum() < 0.0 { -1.0 } else { 1.0 };
            assert!(v.iter().all(|&c| s * c >= -1e-12));
        }
    }

    #[test]
    fn ics_with_witness_returns_core_point() {
        let spec = octant();
        let core = estimate_core_point(&spec, &small_params(), 6).unwrap();
        let y = core.witness.apply(&core.flag).unwrap();
        assert!(flag_distance(&y, &core.flag).unwrap() < 1e-8);
    }

    #[test]
    fn guided_costs_match_word_cocycle() {
        let spec = octant();
        let params = small_params();
        let core = estimate_core_point(&spec, &params, 1).unwrap();
        let alpha2 = crate::rootdata::RootDatum::new(3)
            .unwrap()
            .simple_root(2)
            .unwrap()
            .clone();
        let w = guided_word(&spec, &core.flag, |h| h[1] - h[2], 40, &params, 17).unwrap();
        let trace = crate::cocycle::word_cocycle(&alpha2, &w.letters, &core.flag).unwrap();
        for (a, b) in w.partial_costs.iter().zip(&trace.partial_logs) {
            assert!((a - b).abs() < 1e-9);
        }
        let sw = SampledWord {
            generator_indices: vec![None; w.letters.len()],
            letters: w.letters.clone(),
        };
        assert!(membership(&spec, &sw.product().unwrap()).unwrap());
    }

    #[test]
    fn ladders() {
        let p = SamplingParams::default();
        assert_eq!(p.ladder(), vec![8, 16, 32, 64, 128, 256, 512, 1024]);
        let bad = SamplingParams { min_length: 0, ..p };
        assert!(bad.validate().is_err());
    }
}
