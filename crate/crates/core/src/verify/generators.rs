//! Seeded random instances: spaces, measures, functions, Young functions and
//! base spaces.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::qbfs::{self, QuasiNormedSpace};
use crate::space::{AtomSet, AtomicMeasureSpace, SimpleFn, SpaceRef};
use crate::vecmeasure::{NormKind, TargetNorm, VectorMeasure};
use crate::young::YoungFunction;

pub type Rng8 = ChaCha8Rng;

/// Weights `e^U`, `U ~ Uniform(-2, 2)`.
pub fn space(rng: &mut Rng8, atoms: std::ops::RangeInclusive<usize>) -> SpaceRef {
    let n = rng.gen_range(atoms);
    let weights = (0..n).map(|_| rng.gen_range(-2.0f64..2.0).exp()).collect();
    Arc::new(AtomicMeasureSpace::with_weights(weights).expect("positive weights"))
}

pub fn norm_kind(rng: &mut Rng8) -> NormKind {
    *[NormKind::L1, NormKind::L2, NormKind::Linf]
        .choose(rng)
        .expect("non-empty")
}

/// Atom vectors with entries in `[-1, 1]`, a few exact zeros, and each atom
/// vector non-zero unless `allow_null`.
pub fn measure(rng: &mut Rng8, space: &SpaceRef, d_max: usize, allow_null: bool) -> VectorMeasure {
    let d = rng.gen_range(1..=d_max);
    let target = TargetNorm::new(d, norm_kind(rng)).expect("positive dimension");
    let vectors = (0..space.len())
        .map(|_| {
            if allow_null && rng.gen_bool(0.1) {
                return vec![0.0; d];
            }
            let mut v: Vec<f64> = (0..d)
                .map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(-1.0..1.0) })
                .collect();
            if v.iter().all(|x| *x == 0.0) {
                v[rng.gen_range(0..d)] = 1.0;
            }
            v
        })
        .collect();
    VectorMeasure::new(space.clone(), target, vectors).expect("consistent shapes")
}

/// Values `±e^U`, `U ~ Uniform(-3, 3)`, zero with probability `zero_prob`.
pub fn function(rng: &mut Rng8, space: &SpaceRef, zero_prob: f64) -> SimpleFn {
    let values = (0..space.len())
        .map(|_| {
            if rng.gen_bool(zero_prob) {
                0.0
            } else {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                sign * rng.gen_range(-3.0f64..3.0).exp()
            }
        })
        .collect();
    SimpleFn::new(space.clone(), values).expect("finite values")
}

pub fn nonzero_function(rng: &mut Rng8, space: &SpaceRef, zero_prob: f64) -> SimpleFn {
    loop {
        let f = function(rng, space, zero_prob);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn nonempty_set(rng: &mut Rng8, n: usize) -> AtomSet {
    loop {
        let mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        if mask.iter().any(|b| *b) {
            return AtomSet::from_mask(mask);
        }
    }
}

pub fn set(rng: &mut Rng8, n: usize) -> AtomSet {
    AtomSet::from_mask((0..n).map(|_| rng.gen_bool(0.5)).collect())
}

/// `t^p`, `p ∈ [1, 4]`, or `t^p log(1+t)^q`.
pub fn delta2_young(rng: &mut Rng8) -> YoungFunction {
    if rng.gen_bool(0.7) {
        YoungFunction::power(rng.gen_range(1.0..4.0)).expect("p ≥ 1")
    } else {
        YoungFunction::power_log(rng.gen_range(1.0..3.0), rng.gen_range(0.0..2.0)).expect("p ≥ 1, q ≥ 0")
    }
}

/// Any supported family, including the non-Δ2 `e^{t^a} − 1`.
pub fn young(rng: &mut Rng8) -> YoungFunction {
    match rng.gen_range(0..5) {
        0 => YoungFunction::exp(rng.gen_range(1.0..2.0)).expect("a ≥ 1"),
        1 => delta2_young(rng)
            .scale_argument(rng.gen_range(-1.0f64..1.0).exp())
            .expect("positive scale"),
        _ => delta2_young(rng),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseKind {
    L1mu,
    Linf,
    L1w,
    L1semivar,
}

pub const BASE_KINDS: [BaseKind; 4] = [BaseKind::L1mu, BaseKind::Linf, BaseKind::L1w, BaseKind::L1semivar];

/// One of the four base spaces on `space`; vector measures have no null atoms.
pub fn base_of_kind(rng: &mut Rng8, space: &SpaceRef, kind: BaseKind) -> QuasiNormedSpace {
    match kind {
        BaseKind::L1mu => qbfs::l1_mu(space.clone()),
        BaseKind::Linf => qbfs::linf(space.clone()),
        BaseKind::L1w => qbfs::l1w(measure(rng, space, 4, false)),
        BaseKind::L1semivar => qbfs::l1_semivar(measure(rng, space, 4, false)),
    }
}

pub fn base(rng: &mut Rng8, space: &SpaceRef) -> QuasiNormedSpace {
    let kind = *BASE_KINDS.choose(rng).expect("non-empty");
    base_of_kind(rng, space, kind)
}

/// A base space, possibly raised to a power `s ∈ [0.25, 2]`.
pub fn quasi_normed(rng: &mut Rng8, space: &SpaceRef) -> Result<QuasiNormedSpace> {
    let b = base(rng, space);
    if rng.gen_bool(0.3) {
        qbfs::power_space(&b, rng.gen_range(0.25..2.0))
    } else {
        Ok(b)
    }
}

/// Increasing chain `f·χ_{A₁} ≤ f·χ_{A₂} ≤ … ≤ |f|` by revealing atoms in
/// random order, with a random partial scaling in between.
pub fn increasing_chain(rng: &mut Rng8, f: &SimpleFn) -> Vec<SimpleFn> {
    let abs = f.abs();
    let n = abs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut chain = Vec::with_capacity(2 * n);
    let mut mask = vec![false; n];
    for &i in &order {
        let frac = rng.gen_range(0.0..1.0);
        let partial: Vec<f64> = (0..n)
            .map(|j| {
                if mask[j] {
                    abs.values()[j]
                } else if j == i {
                    frac * abs.values()[j]
                } else {
                    0.0
                }
            })
            .collect();
        chain.push(SimpleFn::new(abs.space().clone(), partial).expect("finite"));
        mask[i] = true;
        chain.push(abs.restrict(&AtomSet::from_mask(mask.clone())).expect("same universe"));
    }
    chain
}
