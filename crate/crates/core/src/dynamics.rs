//! Quasi-automorphisms acting on tableaux, fixed points and their
//! stability, braid orbits and orbit degree counts.

use std::collections::{BTreeMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cluster_core::TropPoint;
use crate::error::{Error, Result};
use crate::exact_arith::Convention;
use crate::grassmannian::{trop_q, GrContext, QuasiAuto};
use crate::tableaux::{degree, gvector_to_tableau, tableau_to_gvector, Tableau};

/// `f(T) = T_{Q^+_f(g_T)}`.
pub fn act_on_tableau(f: QuasiAuto, t: &Tableau, ctx: &GrContext) -> Result<Tableau> {
    let g = tableau_to_gvector(t, ctx)?;
    gvector_to_tableau(&trop_q(ctx, f, &g, Convention::Max)?, ctx)
}

/// `eva(τ^{-1}(T))`, the evacuation form of the reflection on tableaux.
pub fn reflect_via_evacuation(t: &Tableau, ctx: &GrContext) -> Result<Tableau> {
    Ok(act_on_tableau(QuasiAuto::TauInv, t, ctx)?.evacuation())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
    Inconclusive,
}

/// How one random trajectory ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TrialOutcome {
    /// The drift points along `g`.
    Converged,
    /// The trajectory revisited a point.
    Cycle { period: usize },
    /// The drift settled on an invariant ray other than that of `g`.
    Elsewhere { direction: TropPoint },
    /// The trajectory reached a fixed point off the ray of `g`.
    FixedOffRay { point: TropPoint },
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialTrace {
    pub start: TropPoint,
    pub outcome: TrialOutcome,
    pub iterations: usize,
    /// Distance between the unit directions of the settled drift and of `g`.
    pub drift_distance: f64,
    /// Distance between the unit directions of the last iterate and of `g`.
    pub iterate_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub verdict: Stability,
    pub trials: Vec<TrialTrace>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityConfig {
    pub trials: usize,
    pub max_iter: usize,
    pub tol: f64,
    /// Start vectors are drawn from `[-range, range]^m`.
    pub range: i64,
    pub rng_seed: u64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        StabilityConfig { trials: 8, max_iter: 60, tol: 1e-9, range: 20, rng_seed: 0 }
    }
}

/// Longest increment period searched for.
const MAX_PERIOD: usize = 8;
/// Periods of increments that must repeat before the drift is tested.
const REPEATS: usize = 3;
const MAGNITUDE_LIMIT: i64 = 1 << 40;
const RESAMPLES: usize = 64;

fn unit_distance(a: &[i64], b: &[i64]) -> f64 {
    let na = a.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt();
    let nb = b.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(&x, &y)| (x as f64 / na - y as f64 / nb).powi(2)).sum::<f64>().sqrt()
}

/// `a = λ b` for some rational `λ > 0`.
fn positively_parallel(a: &[i64], b: &[i64]) -> bool {
    let dot: i128 = a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum();
    dot > 0
        && (0..a.len()).all(|i| (i + 1..a.len()).all(|j| a[i] as i128 * b[j] as i128 == a[j] as i128 * b[i] as i128))
}

/// Smallest `p` such that the last `REPEATS * p` increments are `p`-periodic.
fn increment_period(incs: &[TropPoint]) -> Option<usize> {
    (1..=MAX_PERIOD).find(|&p| {
        let span = REPEATS * p;
        incs.len() >= span.max(4) && (0..span.max(4) - p).all(|i| incs[incs.len() - 1 - i] == incs[incs.len() - 1 - i - p])
    })
}

fn iterate(ctx: &GrContext, f: QuasiAuto, v: &[i64], times: usize) -> Result<TropPoint> {
    let mut cur = v.to_vec();
    for _ in 0..times {
        cur = trop_q(ctx, f, &cur, Convention::Max)?;
    }
    Ok(cur)
}

fn run_trial(ctx: &GrContext, generator: QuasiAuto, g: &[i64], start: TropPoint, cfg: &StabilityConfig) -> Result<TrialTrace> {
    let mut v = start.clone();
    let mut seen: BTreeMap<TropPoint, usize> = BTreeMap::new();
    seen.insert(v.clone(), 0);
    let mut incs: Vec<TropPoint> = Vec::new();
    let mut tested: Option<TropPoint> = None;
    let mut drift_dist = f64::INFINITY;
    let mut outcome = TrialOutcome::Undecided;
    let mut iterations = 0;
    for j in 1..=cfg.max_iter {
        iterations = j;
        let next = trop_q(ctx, generator, &v, Convention::Max)?;
        let delta: TropPoint = next.iter().zip(&v).map(|(a, b)| a - b).collect();
        if delta.iter().all(|&x| x == 0) {
            if positively_parallel(&v, g) {
                outcome = TrialOutcome::Converged;
                drift_dist = 0.0;
            } else {
                outcome = TrialOutcome::FixedOffRay { point: v.clone() };
                drift_dist = unit_distance(&v, g);
            }
            break;
        }
        if let Some(&at) = seen.get(&next) {
            outcome = TrialOutcome::Cycle { period: j - at };
            v = next;
            break;
        }
        seen.insert(next.clone(), j);
        incs.push(delta);
        v = next;
        if let Some(p) = increment_period(&incs) {
            let drift: TropPoint = (0..ctx.m).map(|c| incs[incs.len() - p..].iter().map(|d| d[c]).sum()).collect();
            if tested.as_ref() != Some(&drift) {
                tested = Some(drift.clone());
                // the drift is the limiting direction only if it spans a ray fixed by the p-th power
                let invariant = match iterate(ctx, generator, &drift, p) {
                    Ok(image) => image == drift,
                    Err(Error::SingularPivot(_)) => false,
                    Err(e) => return Err(e),
                };
                if invariant {
                    drift_dist = unit_distance(&drift, g);
                    outcome = if drift_dist < cfg.tol {
                        TrialOutcome::Converged
                    } else {
                        TrialOutcome::Elsewhere { direction: drift }
                    };
                    break;
                }
            }
        }
        if v.iter().any(|x| x.abs() > MAGNITUDE_LIMIT) {
            break;
        }
    }
    Ok(TrialTrace { start, outcome, iterations, drift_distance: drift_dist, iterate_distance: unit_distance(&v, g) })
}

/// Decides whether iterating `generator` from random points converges onto the ray of `g`.
///
/// The limiting direction of a trajectory is read from its integer
/// increments `v_{j+1} - v_j`. Once they repeat with some period `p`, the
/// drift over one period is the limiting direction provided it spans a ray
/// fixed by the `p`-th iterate. The direction of `v_j` itself approaches
/// the ray only at rate `1/j`.
pub fn classify_stability(ctx: &GrContext, generator: QuasiAuto, g: &[i64], cfg: &StabilityConfig) -> Result<StabilityReport> {
    if g.len() != ctx.m {
        return Err(Error::LengthMismatch { expected: ctx.m, got: g.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut trials = Vec::with_capacity(cfg.trials);
    for _ in 0..cfg.trials {
        let mut attempt = 0;
        let trace = loop {
            let start: TropPoint = (0..ctx.m).map(|_| rng.gen_range(-cfg.range..=cfg.range)).collect();
            match run_trial(ctx, generator, g, start, cfg) {
                Err(Error::SingularPivot(_)) if attempt < RESAMPLES => attempt += 1,
                other => break other?,
            }
        };
        trials.push(trace);
    }
    let verdict = if trials.iter().all(|t| t.outcome == TrialOutcome::Converged) {
        Stability::Stable
    } else if trials.iter().any(|t| {
        matches!(
            t.outcome,
            TrialOutcome::Cycle { .. } | TrialOutcome::Elsewhere { .. } | TrialOutcome::FixedOffRay { .. }
        )
    }) {
        Stability::Unstable
    } else {
        Stability::Inconclusive
    };
    Ok(StabilityReport { verdict, trials })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub g: TropPoint,
    pub tableau: Tableau,
    pub rank: usize,
    pub stability: Stability,
    pub witness: StabilityReport,
}

/// Tableaux with `rank` columns and no frozen factors whose g-vector is fixed by `generator`.
pub fn fixed_tableaux(ctx: &GrContext, generator: QuasiAuto, rank: usize) -> Result<Vec<(Tableau, TropPoint)>> {
    let mut out = Vec::new();
    for t in Tableau::enumerate(ctx.k, ctx.n, rank) {
        if t.has_frozen_factor() {
            continue;
        }
        let g = tableau_to_gvector(&t, ctx)?;
        if trop_q(ctx, generator, &g, Convention::Max)? == g {
            out.push((t, g));
        }
    }
    Ok(out)
}

/// Fixed points of `generator` among tableaux with `rank` columns, each classified.
pub fn find_fixed_points(ctx: &GrContext, generator: QuasiAuto, rank: usize, cfg: &StabilityConfig) -> Result<Vec<FixedPointReport>> {
    fixed_tableaux(ctx, generator, rank)?
        .into_iter()
        .map(|(tableau, g)| {
            let witness = classify_stability(ctx, generator, &g, cfg)?;
            Ok(FixedPointReport { g, tableau, rank, stability: witness.verdict, witness })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub g: TropPoint,
    pub degree: usize,
    /// Index of the seed the word starts from.
    pub seed: usize,
    /// Generators in the order they are applied.
    pub word: Vec<QuasiAuto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub degree_cap: usize,
    /// Sorted by degree, then by g-vector.
    pub entries: Vec<OrbitEntry>,
}

pub const DEFAULT_WORD_CAP: usize = 64;

/// Closure of `seeds` under `generators`, keeping only points of degree at most `degree_cap`.
pub fn braid_orbit_with(
    ctx: &GrContext,
    seeds: &[TropPoint],
    generators: &[QuasiAuto],
    degree_cap: usize,
    word_cap: usize,
) -> Result<Orbit> {
    let mut seen: HashSet<TropPoint> = HashSet::new();
    let mut entries = Vec::new();
    let mut queue = VecDeque::new();
    for (i, s) in seeds.iter().enumerate() {
        let d = degree(s, ctx)?;
        if d <= degree_cap && seen.insert(s.clone()) {
            queue.push_back(OrbitEntry { g: s.clone(), degree: d, seed: i, word: Vec::new() });
        }
    }
    while let Some(e) = queue.pop_front() {
        for &f in generators {
            let h = trop_q(ctx, f, &e.g, Convention::Max)?;
            if seen.contains(&h) {
                continue;
            }
            let d = degree(&h, ctx)?;
            if d > degree_cap {
                continue;
            }
            if e.word.len() + 1 > word_cap {
                return Err(Error::WordCapHit(word_cap));
            }
            seen.insert(h.clone());
            let mut word = e.word.clone();
            word.push(f);
            queue.push_back(OrbitEntry { g: h, degree: d, seed: e.seed, word });
        }
        entries.push(e);
    }
    entries.sort_by(|a, b| (a.degree, &a.g).cmp(&(b.degree, &b.g)));
    Ok(Orbit { degree_cap, entries })
}

/// Braid orbit under `σ_i^{±1}` for `i = 1..=d`.
pub fn braid_orbit(ctx: &GrContext, seeds: &[TropPoint], degree_cap: usize) -> Result<Orbit> {
    braid_orbit_with(ctx, seeds, &QuasiAuto::braid_generators(ctx), degree_cap, DEFAULT_WORD_CAP)
}

/// `N_r` for `r = 1..=r_max`: number of orbit points of degree `r`.
pub fn totient_profile(orbit: &Orbit, r_max: usize) -> Result<Vec<usize>> {
    if orbit.degree_cap < r_max {
        return Err(Error::CapTooSmall { cap: orbit.degree_cap, r_max });
    }
    let mut counts = vec![0; r_max];
    for e in &orbit.entries {
        if (1..=r_max).contains(&e.degree) {
            counts[e.degree - 1] += 1;
        }
    }
    Ok(counts)
}

/// Euler's totient.
pub fn euler_phi(m: usize) -> usize {
    let (mut m, mut out, mut p) = (m, m, 2);
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

/// Closed-form orbit counts: `3φ(r/3)` on Gr(3,9) and `2φ(r/2)` on Gr(4,8).
pub fn totient_closed_form(k: usize, n: usize, r: usize) -> Option<usize> {
    let step = match (k, n) {
        (3, 9) => 3,
        (4, 8) => 2,
        _ => return None,
    };
    Some(if r % step == 0 { step * euler_phi(r / step) } else { 0 })
}

/// Distinct seeds drawn from g-vectors, keeping the first occurrence.
pub fn distinct_points(points: impl IntoIterator<Item = TropPoint>) -> Vec<TropPoint> {
    let mut seen = HashSet::new();
    points.into_iter().filter(|p| seen.insert(p.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient() {
        let phi: Vec<usize> = (1..=12).map(euler_phi).collect();
        assert_eq!(phi, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
        assert_eq!(totient_closed_form(3, 9, 15), Some(12));
        assert_eq!(totient_closed_form(4, 8, 7), Some(0));
        assert_eq!(totient_closed_form(3, 6, 3), None);
    }

    #[test]
    fn periods() {
        let a = vec![1, 0];
        let b = vec![0, 1];
        let incs = vec![a.clone(), b.clone(), a.clone(), b.clone(), a.clone(), b.clone()];
        assert_eq!(increment_period(&incs), Some(2));
        assert_eq!(increment_period(&incs[..3]), None);
        assert_eq!(increment_period(&[a.clone(), a.clone(), a.clone(), a]), Some(1));
    }

    #[test]
    fn parallel() {
        assert!(positively_parallel(&[2, 0, -4], &[1, 0, -2]));
        assert!(!positively_parallel(&[-1, 0, 2], &[1, 0, -2]));
        assert!(!positively_parallel(&[1, 1], &[1, 2]));
    }

    #[test]
    fn cap_too_small() {
        let o = Orbit { degree_cap: 5, entries: Vec::new() };
        assert_eq!(totient_profile(&o, 6), Err(Error::CapTooSmall { cap: 5, r_max: 6 }));
    }
}
