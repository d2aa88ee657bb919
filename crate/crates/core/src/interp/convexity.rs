//! L-convexity refutation search and s-convexity sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qbfs::QuasiNormedSpace;
use crate::space::SimpleFn;
use crate::young::YoungFunction;

/// A family `0 ≤ fᵢ ≤ f` with `mean fᵢ ≥ (1−ε) f` and `max ‖fᵢ‖ < ε ‖f‖`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LConvexityWitness {
    pub trial: u64,
    pub f: Vec<f64>,
    pub parts: Vec<Vec<f64>>,
    pub f_norm: f64,
    pub max_part_norm: f64,
}

/// Outcome of a budgeted search. A pass only says no witness was found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LConvexityReport {
    pub space: String,
    pub eps: f64,
    pub trials: u64,
    pub n_max: usize,
    pub seed: u64,
    pub witness: Option<LConvexityWitness>,
}

impl LConvexityReport {
    pub fn pass(&self) -> bool {
        self.witness.is_none()
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_profile(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.2) {
                0.0
            } else {
                rng.gen_range(-3.0f64..3.0).exp()
            }
        })
        .collect();
    if v.iter().all(|x| *x == 0.0) {
        v[rng.gen_range(0..n)] = 1.0;
    }
    v
}

/// Each atom is dropped from `⌊εn⌋` randomly chosen parts.
fn covering_parts(rng: &mut ChaCha8Rng, f: &[f64], n: usize, eps: f64) -> Vec<Vec<f64>> {
    let drop = ((eps * n as f64).floor() as usize).min(n);
    let mut parts = vec![f.to_vec(); n];
    let mut order: Vec<usize> = (0..n).collect();
    for (j, &v) in f.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        for k in 0..drop {
            let pick = rng.gen_range(k..n);
            order.swap(k, pick);
            parts[order[k]][j] = 0.0;
        }
    }
    parts
}

/// Random fractions `rᵢⱼ ∈ [0,1]`, lifted where needed so each atom's mean
/// fraction is at least `1−ε`.
fn continuous_parts(rng: &mut ChaCha8Rng, f: &[f64], n: usize, eps: f64) -> Vec<Vec<f64>> {
    let mut r: Vec<Vec<f64>> = (0..n).map(|_| (0..f.len()).map(|_| rng.gen::<f64>()).collect()).collect();
    for j in 0..f.len() {
        let mean = r.iter().map(|row| row[j]).sum::<f64>() / n as f64;
        if mean < 1.0 - eps {
            let lift = eps / (1.0 - mean);
            for row in r.iter_mut() {
                row[j] = (1.0 - (1.0 - row[j]) * lift).clamp(0.0, 1.0);
            }
        }
    }
    r.into_iter()
        .map(|row| row.iter().zip(f).map(|(a, b)| a * b).collect())
        .collect()
}

fn satisfies_mean(f: &[f64], parts: &[Vec<f64>], eps: f64) -> bool {
    let n = parts.len() as f64;
    f.iter().enumerate().all(|(j, &v)| {
        let mean = parts.iter().map(|p| p[j]).sum::<f64>() / n;
        mean >= (1.0 - eps) * v * (1.0 - 1e-12) && parts.iter().all(|p| p[j] >= 0.0 && p[j] <= v)
    })
}

fn run_trial(x: &QuasiNormedSpace, eps: f64, n_max: usize, seed: u64, trial: u64) -> Result<Option<LConvexityWitness>> {
    let mut rng = trial_rng(seed, trial);
    let atoms = x.carrier().len();
    let f = random_profile(&mut rng, atoms);
    let n = rng.gen_range(1..=n_max);
    let parts = if trial.is_multiple_of(2) {
        covering_parts(&mut rng, &f, n, eps)
    } else {
        continuous_parts(&mut rng, &f, n, eps)
    };
    debug_assert!(satisfies_mean(&f, &parts, eps));
    let space = x.carrier().clone();
    let f_norm = x.qnorm(&SimpleFn::new(space.clone(), f.clone())?)?;
    let mut max_part_norm: f64 = 0.0;
    for p in &parts {
        max_part_norm = max_part_norm.max(x.qnorm(&SimpleFn::new(space.clone(), p.clone())?)?);
        if max_part_norm >= eps * f_norm * (1.0 - 1e-12) {
            return Ok(None);
        }
    }
    Ok(Some(LConvexityWitness {
        trial,
        f,
        parts,
        f_norm,
        max_part_norm,
    }))
}

/// Randomized search for a violation of L-convexity at level `eps`.
/// Trials run in parallel; the reported witness is the one with the smallest
/// trial index, so the result depends only on `(seed, trials, n_max)`.
pub fn l_convexity_search(
    x: &QuasiNormedSpace,
    eps: f64,
    trials: u64,
    n_max: usize,
    seed: u64,
) -> Result<LConvexityReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("eps = {eps} must lie in (0, 1)")));
    }
    if trials == 0 || n_max == 0 {
        return Err(Error::InvalidInput("trials and n_max must be positive".into()));
    }
    let found = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(x, eps, n_max, seed, t))
        .find_first(|r| !matches!(r, Ok(None)));
    let witness = match found {
        Some(r) => r?,
        None => None,
    };
    Ok(LConvexityReport {
        space: x.name(),
        eps,
        trials,
        n_max,
        seed,
        witness,
    })
}

/// `δ = 1 − (1−ε)^{1/s}`, so that `(1−δ)^s = 1−ε`.
pub fn delta_for_doubling(eps: f64, s: f64) -> f64 {
    if s == 1.0 {
        return eps;
    }
    1.0 - (1.0 - eps).powf(1.0 / s)
}

/// The L-convexity level carried from a certified base to `X^Φ`, using the
/// doubling constant `s` with `Φ(2t) ≤ sΦ(t)`.
pub fn l_convexity_transfer(certificate: &LConvexityReport, phi: &YoungFunction) -> Result<f64> {
    if !certificate.pass() {
        return Err(Error::PreconditionViolation(
            "the base space has an L-convexity witness".into(),
        ));
    }
    let est = phi.delta2()?;
    if est.unbounded {
        return Err(Error::PreconditionViolation(
            "the Young function is not flagged Δ2".into(),
        ));
    }
    Ok(delta_for_doubling(certificate.eps, est.constant.max(1.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SConvexityReport {
    pub s: f64,
    pub c: f64,
    pub tuples: usize,
    /// Largest observed `‖(Σ|f_k|^s)^{1/s}‖ / (Σ‖f_k‖^s)^{1/s}`.
    pub best_constant: f64,
    pub violations: usize,
}

impl SConvexityReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Checks `‖(Σ|f_k|^s)^{1/s}‖_X ≤ C (Σ‖f_k‖_X^s)^{1/s}` on each tuple.
pub fn s_convexity_check(
    x: &QuasiNormedSpace,
    s: f64,
    c: f64,
    tuples: &[Vec<SimpleFn>],
) -> Result<SConvexityReport> {
    if !(s > 0.0) || !(c >= 1.0) {
        return Err(Error::InvalidInput(format!("need s > 0 and C ≥ 1, got s = {s}, C = {c}")));
    }
    let mut best: f64 = 0.0;
    let mut violations = 0;
    for tuple in tuples {
        let Some(first) = tuple.first() else { continue };
        let mut acc = SimpleFn::zero(first.space().clone());
        let mut rhs = 0.0;
        for g in tuple {
            acc = acc.add(&g.map(|v| v.abs().powf(s))?)?;
            rhs += x.qnorm(g)?.powf(s);
        }
        let lhs = x.qnorm(&acc.map(|v| v.powf(1.0 / s))?)?;
        let rhs = rhs.powf(1.0 / s);
        if rhs > 0.0 {
            best = best.max(lhs / rhs);
        }
        if lhs > c * rhs * (1.0 + 1e-12) + 1e-300 {
            violations += 1;
        }
    }
    Ok(SConvexityReport {
        s,
        c,
        tuples: tuples.len(),
        best_constant: best,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orlicz::OrliczSpace;
    use crate::qbfs::{l1_mu, linf};
    use crate::space::{AtomicMeasureSpace, SpaceRef};
    use std::sync::Arc;

    fn space() -> SpaceRef {
        Arc::new(AtomicMeasureSpace::with_weights(vec![1.0, 0.5, 2.0, 0.25]).unwrap())
    }

    #[test]
    fn generated_families_are_admissible() {
        for trial in 0..200 {
            let mut rng = trial_rng(7, trial);
            let f = random_profile(&mut rng, 5);
            for n in 1..6 {
                assert!(satisfies_mean(&f, &covering_parts(&mut rng, &f, n, 0.45), 0.45));
                assert!(satisfies_mean(&f, &continuous_parts(&mut rng, &f, n, 0.3), 0.3));
            }
        }
    }

    #[test]
    fn l1_passes_below_one_half() {
        let r = l_convexity_search(&l1_mu(space()), 0.49, 2000, 8, 1).unwrap();
        assert!(r.pass());
        let r = l_convexity_search(&l1_mu(space()), 0.4, 500, 1, 2).unwrap();
        assert!(r.pass());
    }

    #[test]
    fn linf_is_refuted_near_one() {
        // L-convexity asks for some ε; near ε = 1 the mean condition is weak
        // and parts fᵢ = rᵢ f with every rᵢ < ε already refute that level.
        let s: SpaceRef = Arc::new(AtomicMeasureSpace::uniform(6).unwrap());
        let r = l_convexity_search(&linf(s), 0.99, 20_000, 12, 3).unwrap();
        assert!(!r.pass());
        let w = r.witness.unwrap();
        assert!(w.max_part_norm < 0.99 * w.f_norm);
        let again = l_convexity_search(&linf(Arc::new(AtomicMeasureSpace::uniform(6).unwrap())), 0.99, 20_000, 12, 3)
            .unwrap();
        assert_eq!(again.witness.unwrap().trial, w.trial);
    }

    #[test]
    fn doubling_transfer_algebra() {
        assert!((delta_for_doubling(0.75, 2.0) - 0.5).abs() < 1e-15);
        assert_eq!(delta_for_doubling(0.3, 1.0), 0.3);
        let cert = l_convexity_search(&l1_mu(space()), 0.49, 100, 4, 0).unwrap();
        let sq = YoungFunction::power(2.0).unwrap();
        let d = l_convexity_transfer(&cert, &sq).unwrap();
        assert!((d - delta_for_doubling(0.49, 4.0)).abs() < 1e-9);
        let orl = OrliczSpace::new(l1_mu(space()), sq).into_space();
        assert!(l_convexity_search(&orl, d, 500, 6, 5).unwrap().pass());
        let exp = YoungFunction::exp(1.0).unwrap();
        assert!(l_convexity_transfer(&cert, &exp).is_err());
    }

    #[test]
    fn s_convexity_examples() {
        let s = space();
        let x = l1_mu(s.clone());
        let g = SimpleFn::new(s.clone(), vec![1.0, 0.0, 2.0, 3.0]).unwrap();
        let h = SimpleFn::new(s.clone(), vec![0.0, 4.0, -1.0, 0.5]).unwrap();
        let r = s_convexity_check(&x, 1.0, 1.0, &[vec![g.clone(), h]]).unwrap();
        assert!(r.pass());
        let r = s_convexity_check(&x, 0.5, 1.0, &[vec![g]]).unwrap();
        assert!(r.pass());
        assert!((r.best_constant - 1.0).abs() < 1e-12);
    }
}
