//! Finite atomic measure spaces and the real functions living on them.
//!
//! Every function on a finite atomic σ-algebra is simple, so integrals become
//! finite sums and suprema become finite maxima.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shared handle to a measure space.
pub type SpaceRef = Arc<AtomicMeasureSpace>;

/// Labelled atoms with strictly positive weights `μ({aᵢ})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceJson", into = "SpaceJson")]
pub struct AtomicMeasureSpace {
    atoms: Vec<String>,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SpaceJson {
    atoms: Vec<String>,
    weights: Vec<f64>,
}

impl TryFrom<SpaceJson> for AtomicMeasureSpace {
    type Error = Error;

    fn try_from(raw: SpaceJson) -> Result<Self> {
        AtomicMeasureSpace::new(raw.atoms, raw.weights)
    }
}

impl From<AtomicMeasureSpace> for SpaceJson {
    fn from(s: AtomicMeasureSpace) -> Self {
        SpaceJson {
            atoms: s.atoms,
            weights: s.weights,
        }
    }
}

impl AtomicMeasureSpace {
    pub fn new(atoms: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: atoms.len(),
                got: weights.len(),
            });
        }
        if atoms.is_empty() {
            return Err(Error::InvalidInput("a measure space needs at least one atom".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "atom weights must be finite and positive, got {w}"
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = atoms.iter().find(|a| !seen.insert(a.as_str())) {
            return Err(Error::InvalidInput(format!("duplicate atom id `{dup}`")));
        }
        Ok(AtomicMeasureSpace { atoms, weights })
    }

    /// Atoms `a1..an` with the given weights.
    pub fn with_weights(weights: Vec<f64>) -> Result<Self> {
        let atoms = (1..=weights.len()).map(|i| format!("a{i}")).collect();
        AtomicMeasureSpace::new(atoms, weights)
    }

    /// `n` atoms of unit weight.
    pub fn uniform(n: usize) -> Result<Self> {
        AtomicMeasureSpace::with_weights(vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == id)
    }

    /// `μ(A) = Σ_{i∈A} wᵢ`.
    pub fn mu(&self, set: &AtomSet) -> f64 {
        set.indices().map(|i| self.weights[i]).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// A measurable set, i.e. a mask over the atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomSet {
    mask: Vec<bool>,
}

impl AtomSet {
    pub fn from_mask(mask: Vec<bool>) -> Self {
        AtomSet { mask }
    }

    pub fn empty(n: usize) -> Self {
        AtomSet {
            mask: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        AtomSet { mask: vec![true; n] }
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = vec![false; n];
        for i in indices {
            *mask.get_mut(i).ok_or_else(|| {
                Error::InvalidInput(format!("atom index {i} out of range for {n} atoms"))
            })? = true;
        }
        Ok(AtomSet { mask })
    }

    /// Resolves atom labels against `space`.
    pub fn from_ids<S: AsRef<str>>(space: &AtomicMeasureSpace, ids: &[S]) -> Result<Self> {
        let indices = ids
            .iter()
            .map(|id| {
                space
                    .index_of(id.as_ref())
                    .ok_or_else(|| Error::InvalidInput(format!("unknown atom `{}`", id.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        AtomSet::from_indices(space.len(), indices)
    }

    pub fn ids(&self, space: &AtomicMeasureSpace) -> Vec<String> {
        self.indices().map(|i| space.atoms()[i].clone()).collect()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn universe_len(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask.get(i).copied().unwrap_or(false)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn union(&self, other: &AtomSet) -> Result<AtomSet> {
        self.check_len(other)?;
        Ok(AtomSet {
            mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a || *b).collect(),
        })
    }

    pub fn is_subset(&self, other: &AtomSet) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.mask.iter().zip(&other.mask).all(|(a, b)| !*a || *b))
    }

    pub fn is_disjoint(&self, other: &AtomSet) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.mask.iter().zip(&other.mask).all(|(a, b)| !(*a && *b)))
    }

    fn check_len(&self, other: &AtomSet) -> Result<()> {
        if self.mask.len() == other.mask.len() {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

/// A real function on the atoms of a measure space.
#[derive(Debug, Clone)]
pub struct SimpleFn {
    space: SpaceRef,
    values: Vec<f64>,
}

impl PartialEq for SimpleFn {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.values == other.values
    }
}

pub(crate) fn same_space(a: &SpaceRef, b: &SpaceRef) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl SimpleFn {
    pub fn new(space: SpaceRef, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                got: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("function value {v} is not finite")));
        }
        Ok(SimpleFn { space, values })
    }

    pub fn zero(space: SpaceRef) -> Self {
        let n = space.len();
        SimpleFn {
            space,
            values: vec![0.0; n],
        }
    }

    pub fn constant(space: SpaceRef, c: f64) -> Result<Self> {
        let n = space.len();
        SimpleFn::new(space, vec![c; n])
    }

    /// `χ_A`.
    pub fn indicator(space: SpaceRef, set: &AtomSet) -> Result<Self> {
        if set.universe_len() != space.len() {
            return Err(Error::SpaceMismatch);
        }
        let values = set.mask().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        Ok(SimpleFn { space, values })
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn abs(&self) -> SimpleFn {
        self.map_unchecked(f64::abs)
    }

    pub fn scale(&self, c: f64) -> SimpleFn {
        self.map_unchecked(|v| c * v)
    }

    /// Applies `op` pointwise, rejecting non-finite results.
    pub fn map(&self, op: impl Fn(f64) -> f64) -> Result<SimpleFn> {
        SimpleFn::new(self.space.clone(), self.values.iter().map(|&v| op(v)).collect())
    }

    /// Applies a fallible `op` pointwise.
    pub fn try_map(&self, op: impl Fn(f64) -> Result<f64>) -> Result<SimpleFn> {
        let values = self.values.iter().map(|&v| op(v)).collect::<Result<Vec<_>>>()?;
        SimpleFn::new(self.space.clone(), values)
    }

    fn map_unchecked(&self, op: impl Fn(f64) -> f64) -> SimpleFn {
        SimpleFn {
            space: self.space.clone(),
            values: self.values.iter().map(|&v| op(v)).collect(),
        }
    }

    fn zip_with(&self, other: &SimpleFn, op: impl Fn(f64, f64) -> f64) -> Result<SimpleFn> {
        self.check_space(other)?;
        SimpleFn::new(
            self.space.clone(),
            self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect(),
        )
    }

    pub fn add(&self, other: &SimpleFn) -> Result<SimpleFn> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SimpleFn) -> Result<SimpleFn> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn pointwise_max(&self, other: &SimpleFn) -> Result<SimpleFn> {
        self.zip_with(other, f64::max)
    }

    pub fn pointwise_min(&self, other: &SimpleFn) -> Result<SimpleFn> {
        self.zip_with(other, f64::min)
    }

    pub fn pointwise_mul(&self, other: &SimpleFn) -> Result<SimpleFn> {
        self.zip_with(other, |a, b| a * b)
    }

    /// `f ≤ g` at every atom.
    pub fn pointwise_leq(&self, other: &SimpleFn) -> Result<bool> {
        self.check_space(other)?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    /// `[|f| > t]`, strict inequality.
    pub fn level_set(&self, t: f64) -> AtomSet {
        AtomSet::from_mask(self.values.iter().map(|v| v.abs() > t).collect())
    }

    /// `[f ≠ 0]`.
    pub fn support(&self) -> AtomSet {
        self.level_set(0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Smallest non-zero `|fᵢ|`, if any.
    pub fn min_nonzero_abs(&self) -> Option<f64> {
        self.values
            .iter()
            .map(|v| v.abs())
            .filter(|&v| v > 0.0)
            .fold(None, |m, v| Some(m.map_or(v, |m: f64| m.min(v))))
    }

    /// `f · χ_A`.
    pub fn restrict(&self, set: &AtomSet) -> Result<SimpleFn> {
        if set.universe_len() != self.len() {
            return Err(Error::SpaceMismatch);
        }
        Ok(SimpleFn {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(set.mask())
                .map(|(&v, &b)| if b { v } else { 0.0 })
                .collect(),
        })
    }

    pub fn check_space(&self, other: &SimpleFn) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_atoms() -> SpaceRef {
        Arc::new(AtomicMeasureSpace::uniform(2).unwrap())
    }

    #[test]
    fn mu_examples() {
        let s = AtomicMeasureSpace::uniform(2).unwrap();
        assert_eq!(s.mu(&AtomSet::from_ids(&s, &["a1"]).unwrap()), 1.0);
        assert_eq!(s.mu(&AtomSet::empty(2)), 0.0);
        let s = AtomicMeasureSpace::with_weights(vec![1.0, 2.0]).unwrap();
        assert_eq!(s.mu(&AtomSet::full(2)), 3.0);
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(AtomicMeasureSpace::with_weights(vec![1.0, 0.0]).is_err());
        assert!(AtomicMeasureSpace::with_weights(vec![1.0, f64::NAN]).is_err());
        assert!(AtomicMeasureSpace::new(vec!["a".into(), "a".into()], vec![1.0, 1.0]).is_err());
        assert!(SimpleFn::new(two_atoms(), vec![1.0]).is_err());
        assert!(SimpleFn::new(two_atoms(), vec![1.0, f64::INFINITY]).is_err());
        let bad: std::result::Result<AtomicMeasureSpace, _> =
            serde_json::from_str(r#"{"atoms":["a1","a2"],"weights":[1,-1]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn json_shape() {
        let s: AtomicMeasureSpace =
            serde_json::from_str(r#"{"atoms":["a1","a2"],"weights":[1,1]}"#).unwrap();
        assert_eq!(s, AtomicMeasureSpace::uniform(2).unwrap());
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"atoms":["a1","a2"],"weights":[1.0,1.0]}"#
        );
    }

    #[test]
    fn level_set_examples() {
        let f = SimpleFn::new(two_atoms(), vec![2.0, 1.0]).unwrap();
        assert_eq!(f.level_set(1.0), AtomSet::from_mask(vec![true, false]));
        assert_eq!(f.level_set(0.0), AtomSet::full(2));
        assert_eq!(f.level_set(2.0), AtomSet::empty(2));
    }

    #[test]
    fn lattice_ops() {
        let s = two_atoms();
        let f = SimpleFn::new(s.clone(), vec![-2.0, 1.0]).unwrap();
        let g = SimpleFn::new(s.clone(), vec![1.0, 3.0]).unwrap();
        assert_eq!(f.abs().values(), &[2.0, 1.0]);
        assert_eq!(f.pointwise_max(&g).unwrap().values(), &[1.0, 3.0]);
        assert!(!f.abs().pointwise_leq(&g).unwrap());
        assert!(f.pointwise_leq(&g).unwrap());
        assert_eq!(f.add(&g).unwrap().values(), &[-1.0, 4.0]);
        assert_eq!(f.scale(-2.0).values(), &[4.0, -2.0]);
        let other = Arc::new(AtomicMeasureSpace::with_weights(vec![1.0, 2.0]).unwrap());
        let h = SimpleFn::zero(other);
        assert_eq!(f.add(&h), Err(Error::SpaceMismatch));
        assert_eq!(f.pointwise_leq(&h), Err(Error::SpaceMismatch));
    }

    proptest! {
        #[test]
        fn level_sets_shrink(values in prop::collection::vec(-5.0f64..5.0, 1..10), s in 0.0f64..5.0, ds in 0.0f64..5.0) {
            let space = Arc::new(AtomicMeasureSpace::uniform(values.len()).unwrap());
            let f = SimpleFn::new(space, values).unwrap();
            prop_assert!(f.level_set(s + ds).is_subset(&f.level_set(s)).unwrap());
        }
    }
}
