//! Vector measures `m : Σ → ℝ^d` on atomic spaces.
//!
//! The semivariation `‖m‖(A) = sup_{‖y*‖≤1} Σ_{i∈A} |⟨mᵢ, y*⟩|` is computed
//! exactly through the duality swap
//!
//! ```text
//! sup_{‖y*‖≤1} Σ |⟨mᵢ, y*⟩| = max_{s ∈ {±1}^A} ‖Σ sᵢ mᵢ‖
//! ```
//!
//! with a branch-and-bound over the sign tree. The ℓ∞ target has the closed
//! form `max_j Σ |m_ij|`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{same_space, AtomSet, AtomicMeasureSpace, SimpleFn, SpaceRef};

/// Largest set the unpruned sign enumeration accepts.
pub const BRUTE_FORCE_LIMIT: usize = 24;

const RYBAKOV_RANDOM_TRIES: usize = 64;
const RYBAKOV_SEED: u64 = 0x5259_4241_4b4f_5600;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    L1,
    L2,
    Linf,
}

/// `(ℝ^d, ‖·‖)` with an ℓ1, ℓ2 or ℓ∞ norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetNorm {
    pub dim: usize,
    pub norm: NormKind,
}

impl TargetNorm {
    pub fn new(dim: usize, norm: NormKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("target dimension must be ≥ 1".into()));
        }
        Ok(TargetNorm { dim, norm })
    }

    pub fn norm(&self, v: &[f64]) -> f64 {
        norm_of(self.norm, v)
    }

    /// Norm of the dual space (ℓ1 ↔ ℓ∞, ℓ2 ↔ ℓ2).
    pub fn dual_norm(&self, v: &[f64]) -> f64 {
        let dual = match self.norm {
            NormKind::L1 => NormKind::Linf,
            NormKind::L2 => NormKind::L2,
            NormKind::Linf => NormKind::L1,
        };
        norm_of(dual, v)
    }

    /// A unit dual vector `y*` with `⟨v, y*⟩ = ‖v‖`.
    pub fn norming_functional(&self, v: &[f64]) -> Vec<f64> {
        let n = self.norm(v);
        if n == 0.0 {
            let mut e = vec![0.0; self.dim];
            e[0] = 1.0;
            return e;
        }
        match self.norm {
            NormKind::L2 => v.iter().map(|x| x / n).collect(),
            NormKind::L1 => v.iter().map(|&x| if x < 0.0 { -1.0 } else { 1.0 }).collect(),
            NormKind::Linf => {
                let j = argmax_abs(v);
                let mut e = vec![0.0; self.dim];
                e[j] = v[j].signum();
                e
            }
        }
    }
}

fn norm_of(kind: NormKind, v: &[f64]) -> f64 {
    match kind {
        NormKind::L1 => v.iter().map(|x| x.abs()).sum(),
        NormKind::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        NormKind::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
    }
}

fn argmax_abs(v: &[f64]) -> usize {
    let mut best = 0;
    for (j, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = j;
        }
    }
    best
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// JSON description of a vector measure. `atoms` and `weights` describe the
/// carrier space and default to `a1..an` with unit weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub target: TargetNorm,
    pub atom_vectors: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl MeasureSpec {
    /// The carrier space described by this spec.
    pub fn space(&self) -> Result<AtomicMeasureSpace> {
        let n = self.atom_vectors.len();
        let weights = self.weights.clone().unwrap_or_else(|| vec![1.0; n]);
        match &self.atoms {
            Some(atoms) => AtomicMeasureSpace::new(atoms.clone(), weights),
            None => AtomicMeasureSpace::with_weights(weights),
        }
    }
}

/// `m({aᵢ}) ∈ ℝ^d` for every atom; `m(A) = Σ_{i∈A} m({aᵢ})`.
#[derive(Debug, Clone)]
pub struct VectorMeasure {
    space: SpaceRef,
    target: TargetNorm,
    vectors: Vec<Vec<f64>>,
}

impl PartialEq for VectorMeasure {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space)
            && self.target == other.target
            && self.vectors == other.vectors
    }
}

/// A Rybakov functional `y*` and the control measure `|⟨m, y*⟩|` per atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlMeasure {
    pub ystar: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ControlMeasure {
    /// The control measure as a measure space. Fails when some atom is
    /// `m`-null, since atom weights must be positive.
    pub fn to_space(&self, atoms: &[String]) -> Result<AtomicMeasureSpace> {
        AtomicMeasureSpace::new(atoms.to_vec(), self.weights.clone())
    }
}

impl VectorMeasure {
    pub fn new(space: SpaceRef, target: TargetNorm, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if target.dim == 0 {
            return Err(Error::InvalidInput("target dimension must be ≥ 1".into()));
        }
        if vectors.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                got: vectors.len(),
            });
        }
        for v in &vectors {
            if v.len() != target.dim {
                return Err(Error::DimensionMismatch {
                    expected: target.dim,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("atom vectors must be finite".into()));
            }
        }
        Ok(VectorMeasure {
            space,
            target,
            vectors,
        })
    }

    /// Builds the measure on `space` when given, otherwise on the space the
    /// spec describes.
    pub fn from_spec(spec: &MeasureSpec, space: Option<SpaceRef>) -> Result<Self> {
        let space = match space {
            Some(s) => s,
            None => SpaceRef::new(spec.space()?),
        };
        VectorMeasure::new(space, spec.target, spec.atom_vectors.clone())
    }

    pub fn spec(&self) -> MeasureSpec {
        MeasureSpec {
            target: self.target,
            atom_vectors: self.vectors.clone(),
            atoms: Some(self.space.atoms().to_vec()),
            weights: Some(self.space.weights().to_vec()),
        }
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn target(&self) -> TargetNorm {
        self.target
    }

    pub fn atom_vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    fn check_set(&self, set: &AtomSet) -> Result<()> {
        if set.universe_len() == self.space.len() {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    fn check_fn(&self, f: &SimpleFn) -> Result<()> {
        if same_space(f.space(), &self.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// `|⟨m, y*⟩|(A) = Σ_{i∈A} |⟨mᵢ, y*⟩|`.
    pub fn scalar_variation(&self, ystar: &[f64], set: &AtomSet) -> Result<f64> {
        if ystar.len() != self.target.dim {
            return Err(Error::DimensionMismatch {
                expected: self.target.dim,
                got: ystar.len(),
            });
        }
        self.check_set(set)?;
        Ok(set.indices().map(|i| dot(&self.vectors[i], ystar).abs()).sum())
    }

    /// `‖m‖(A)`, exact.
    pub fn semivariation(&self, set: &AtomSet) -> Result<f64> {
        self.check_set(set)?;
        let weights: Vec<f64> = set.mask().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        Ok(self.weighted_semivariation(&weights))
    }

    /// `sup_{‖y*‖≤1} Σᵢ wᵢ |⟨mᵢ, y*⟩|` for non-negative weights; the
    /// semivariation is the case `w = χ_A`.
    pub fn weighted_semivariation(&self, weights: &[f64]) -> f64 {
        self.extremal(weights).0
    }

    /// The weighted semivariation together with a unit dual vector attaining it.
    pub fn extremal_functional(&self, weights: &[f64]) -> (f64, Vec<f64>) {
        let (value, sum) = self.extremal(weights);
        (value, self.target.norming_functional(&sum))
    }

    fn extremal(&self, weights: &[f64]) -> (f64, Vec<f64>) {
        debug_assert_eq!(weights.len(), self.vectors.len());
        let d = self.target.dim;
        if self.target.norm == NormKind::Linf {
            let mut cols = vec![0.0; d];
            for (w, v) in weights.iter().zip(&self.vectors) {
                if *w != 0.0 {
                    for (c, x) in cols.iter_mut().zip(v) {
                        *c += w.abs() * x.abs();
                    }
                }
            }
            let j = argmax_abs(&cols);
            let mut witness = vec![0.0; d];
            witness[j] = cols[j];
            return (cols[j], witness);
        }
        let items: Vec<Vec<f64>> = weights
            .iter()
            .zip(&self.vectors)
            .filter(|(w, v)| **w != 0.0 && v.iter().any(|x| *x != 0.0))
            .map(|(w, v)| v.iter().map(|x| w.abs() * x).collect())
            .collect();
        SignSearch::run(items, self.target)
    }

    /// Unpruned `2^|A|` sign enumeration, for differential testing.
    pub fn semivariation_bruteforce(&self, set: &AtomSet) -> Result<f64> {
        self.check_set(set)?;
        let idx: Vec<usize> = set.indices().collect();
        if idx.len() > BRUTE_FORCE_LIMIT {
            return Err(Error::SizeExceeded {
                size: idx.len(),
                limit: BRUTE_FORCE_LIMIT,
            });
        }
        let mut best = 0.0f64;
        let mut sum = vec![0.0; self.target.dim];
        for signs in 0u32..(1u32 << idx.len()) {
            sum.iter_mut().for_each(|x| *x = 0.0);
            for (bit, &i) in idx.iter().enumerate() {
                let s = if signs >> bit & 1 == 1 { -1.0 } else { 1.0 };
                for (acc, x) in sum.iter_mut().zip(&self.vectors[i]) {
                    *acc += s * x;
                }
            }
            best = best.max(self.target.norm(&sum));
        }
        Ok(best)
    }

    /// `‖m‖(A) = 0`; on atoms, every `mᵢ` with `i ∈ A` vanishes.
    pub fn is_m_null(&self, set: &AtomSet) -> Result<bool> {
        self.check_set(set)?;
        Ok(set.indices().all(|i| self.vectors[i].iter().all(|&x| x == 0.0)))
    }

    /// Finds `y*` in the dual unit ball with `⟨mᵢ, y*⟩ ≠ 0` on every non-null
    /// atom. The first candidate is the normalized `Σ 3^{-i} mᵢ/‖mᵢ‖`; after
    /// that, a fixed-seed stream of random directions.
    pub fn rybakov(&self) -> Result<ControlMeasure> {
        let d = self.target.dim;
        let norms: Vec<f64> = self.vectors.iter().map(|v| self.target.norm(v)).collect();
        let accepts = |y: &[f64]| {
            self.vectors
                .iter()
                .zip(&norms)
                .all(|(v, &n)| n == 0.0 || dot(v, y).abs() > 1e-12 * n)
        };
        let finish = |y: Vec<f64>| {
            let weights = self.vectors.iter().map(|v| dot(v, &y).abs()).collect();
            ControlMeasure { ystar: y, weights }
        };

        if norms.iter().all(|&n| n == 0.0) {
            let mut y = vec![0.0; d];
            y[0] = 1.0;
            return Ok(finish(y));
        }

        let mut first = vec![0.0; d];
        let mut c = 1.0;
        for (v, &n) in self.vectors.iter().zip(&norms) {
            if n > 0.0 {
                for (acc, x) in first.iter_mut().zip(v) {
                    *acc += c * x / n;
                }
            }
            c /= 3.0;
        }
        let mut candidates = vec![first];
        let mut rng = ChaCha8Rng::seed_from_u64(RYBAKOV_SEED);
        for _ in 0..RYBAKOV_RANDOM_TRIES {
            candidates.push((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect());
        }
        let tries = candidates.len();
        for y in candidates {
            let dn = self.target.dual_norm(&y);
            if dn == 0.0 {
                continue;
            }
            let y: Vec<f64> = y.iter().map(|x| x / dn).collect();
            if accepts(&y) {
                return Ok(finish(y));
            }
        }
        Err(Error::NotFound { tries })
    }

    /// `t ↦ ‖m‖([|f| > t])`, exact, with breakpoints at the distinct values of `|f|`.
    pub fn distribution_function(&self, f: &SimpleFn) -> Result<StepFunction> {
        self.check_fn(f)?;
        let mut levels: Vec<f64> = f.values().iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
        levels.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        levels.dedup();
        let mut breakpoints = Vec::with_capacity(levels.len() + 1);
        breakpoints.push(0.0);
        breakpoints.extend(levels);
        let values = breakpoints
            .iter()
            .map(|&t| self.semivariation(&f.level_set(t)))
            .collect::<Result<Vec<_>>>()?;
        Ok(StepFunction {
            breakpoints,
            values,
        })
    }

    /// `‖f‖_{L¹(‖m‖)} = ∫₀^∞ ‖m‖([|f| > t]) dt`.
    pub fn choquet_l1_norm(&self, f: &SimpleFn) -> Result<f64> {
        Ok(self.distribution_function(f)?.integral())
    }
}

/// Right-continuous non-increasing step function on `[0, ∞)`: value
/// `values[j]` on `[breakpoints[j], breakpoints[j+1])`, and `values[k]` (zero)
/// from the last breakpoint on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::InvalidInput(
                "a step function needs matching, non-empty breakpoints and values".into(),
            ));
        }
        if breakpoints[0] != 0.0 || breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "breakpoints must start at 0 and increase strictly".into(),
            ));
        }
        if values.windows(2).any(|w| w[1] > w[0]) || *values.last().unwrap() != 0.0 {
            return Err(Error::InvalidInput(
                "values must be non-increasing and end at 0".into(),
            ));
        }
        Ok(StepFunction {
            breakpoints,
            values,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return self.values[0];
        }
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        self.values[idx - 1]
    }

    /// `Σⱼ (t_{j+1} − tⱼ) vⱼ`.
    pub fn integral(&self) -> f64 {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| (w[1] - w[0]) * v)
            .sum()
    }

    /// Integral of the distribution function of `ψ(|f|)`, where this is the
    /// distribution function of `f` and `ψ` is non-decreasing with `ψ(0) = 0`.
    /// Level sets of `ψ(|f|)` are level sets of `|f|`, so no semivariation is
    /// recomputed.
    pub fn integral_after<P>(&self, psi: P) -> Result<f64>
    where
        P: Fn(f64) -> Result<f64>,
    {
        let mut total = 0.0;
        let mut prev = 0.0;
        for (j, &t) in self.breakpoints.iter().enumerate().skip(1) {
            let cur = psi(t)?;
            total += (cur - prev) * self.values[j - 1];
            prev = cur;
        }
        Ok(total)
    }
}

/// Branch and bound for `max_s ‖Σ sᵢ vᵢ‖`. Items are explored in decreasing
/// norm; a subtree is cut when `‖partial‖ + Σ_{remaining} ‖vᵢ‖` cannot beat the
/// incumbent. The first sign is fixed to `+1` since `‖−x‖ = ‖x‖`.
struct SignSearch {
    items: Vec<Vec<f64>>,
    suffix: Vec<f64>,
    target: TargetNorm,
    stack: Vec<Vec<f64>>,
    best: f64,
    best_sum: Vec<f64>,
}

impl SignSearch {
    fn run(mut items: Vec<Vec<f64>>, target: TargetNorm) -> (f64, Vec<f64>) {
        let d = target.dim;
        if items.is_empty() {
            return (0.0, vec![0.0; d]);
        }
        let mut keyed: Vec<(f64, Vec<f64>)> = items.drain(..).map(|v| (target.norm(&v), v)).collect();
        keyed.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite norms"));
        let n = keyed.len();
        let mut suffix = vec![0.0; n + 1];
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1] + keyed[i].0;
        }
        let items: Vec<Vec<f64>> = keyed.into_iter().map(|(_, v)| v).collect();

        // greedy incumbent
        let mut greedy = vec![0.0; d];
        for v in &items {
            let plus: Vec<f64> = greedy.iter().zip(v).map(|(a, b)| a + b).collect();
            let minus: Vec<f64> = greedy.iter().zip(v).map(|(a, b)| a - b).collect();
            greedy = if target.norm(&plus) >= target.norm(&minus) {
                plus
            } else {
                minus
            };
        }
        let mut search = SignSearch {
            best: target.norm(&greedy),
            best_sum: greedy,
            stack: vec![vec![0.0; d]; n + 1],
            items,
            suffix,
            target,
        };
        search.descend(0);
        (search.best, search.best_sum)
    }

    fn descend(&mut self, depth: usize) {
        let partial_norm = self.target.norm(&self.stack[depth]);
        if depth == self.items.len() {
            if partial_norm > self.best {
                self.best = partial_norm;
                self.best_sum = self.stack[depth].clone();
            }
            return;
        }
        if partial_norm + self.suffix[depth] <= self.best {
            return;
        }
        let signs: &[f64] = if depth == 0 { &[1.0] } else { &[1.0, -1.0] };
        for &s in signs {
            let (head, tail) = self.stack.split_at_mut(depth + 1);
            for ((next, cur), x) in tail[0].iter_mut().zip(&head[depth]).zip(&self.items[depth]) {
                *next = cur + s * x;
            }
            self.descend(depth + 1);
        }
    }
}
