//! Orlicz spaces `X^Φ` over a quasi-normed function space `X`.
//!
//! The Orlicz class is `{f : ‖Φ(|f|)‖_X < ∞}`; on atoms it contains every
//! function whose modular does not overflow. The Luxemburg quasi-norm is
//! `‖f‖_{X^Φ} = inf{k > 0 : ‖Φ(|f|/k)‖_X ≤ 1}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bisect::infimum_below;
use crate::error::{Error, Result};
use crate::qbfs::{self, QuasiNorm, QuasiNormedSpace, SpaceSpec, SpaceTags};
use crate::space::{AtomSet, SimpleFn, SpaceRef};
use crate::vecmeasure::VectorMeasure;
use crate::young::YoungFunction;

/// Default relative bracket width of the Luxemburg bisection.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative slack for inequalities comparing a Luxemburg value with a modular.
/// The modular amplifies the bisection error by the local growth of `Φ`.
pub const RELATION_SLACK: f64 = 1e-9;

/// Below this fraction of its peak a sequence counts as having reached zero.
pub const ZERO_THRESHOLD: f64 = 1e-8;

/// Number of dual directions sampled by [`vector_orlicz_identities`].
pub const DUAL_GRID: usize = 64;

const DUAL_GRID_SEED: u64 = 0x4455_414c_4752_4944;

#[derive(Debug, Clone)]
pub struct OrliczSpace {
    base: QuasiNormedSpace,
    phi: YoungFunction,
    tol: f64,
}

impl OrliczSpace {
    pub fn new(base: QuasiNormedSpace, phi: YoungFunction) -> Self {
        OrliczSpace {
            base,
            phi,
            tol: DEFAULT_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::InvalidInput(format!("tolerance {tol} must lie in (0, 1)")));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn base(&self) -> &QuasiNormedSpace {
        &self.base
    }

    pub fn phi(&self) -> &YoungFunction {
        &self.phi
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Wraps this space as a [`QuasiNormedSpace`].
    pub fn into_space(self) -> QuasiNormedSpace {
        QuasiNormedSpace::new(self)
    }

    /// `‖Φ(|f|)‖_X`.
    pub fn modular(&self, f: &SimpleFn) -> Result<f64> {
        let g = f.try_map(|v| self.phi.eval(v.abs()))?;
        self.base.qnorm(&g)
    }

    /// `‖f‖_{X^Φ}` by bisection on the non-increasing map `k ↦ ‖Φ(|f|/k)‖_X`.
    pub fn luxemburg(&self, f: &SimpleFn) -> Result<f64> {
        if !qbfs_same(f, self.base.carrier()) {
            return Err(Error::SpaceMismatch);
        }
        if f.is_zero() {
            return Ok(0.0);
        }
        let supp = f.support();
        let supp_norm = self.base.indicator_norm(&supp)?;
        if supp_norm == 0.0 {
            return Ok(0.0);
        }
        // |f| is squeezed between min|f|·χ_supp and ‖f‖∞·χ_supp, and
        // ‖c χ_A‖_{X^Φ} = c / Φ⁻¹(1/‖χ_A‖_X).
        let unit = 1.0 / self.phi.inverse(1.0 / supp_norm)?;
        let lo = f.min_nonzero_abs().expect("non-zero function") * unit;
        let mut hi = f.sup_norm() * unit;
        if let Ok(m) = self.modular(f) {
            hi = hi.min(m.max(1.0));
        }
        let hi = hi.max(lo);

        let profile = self.base.comonotone_profile(f)?;
        let map = |k: f64| -> Result<f64> {
            let value = match &profile {
                Some(p) => p.integral_after(|t| self.phi.eval(t / k)),
                None => {
                    let vals = f
                        .values()
                        .iter()
                        .map(|v| self.phi.eval(v.abs() / k))
                        .collect::<Result<Vec<f64>>>();
                    match vals {
                        Ok(v) if v.iter().any(|x| x.is_infinite()) => Ok(f64::INFINITY),
                        Ok(v) => SimpleFn::new(f.space().clone(), v).and_then(|g| self.base.qnorm(&g)),
                        Err(e) => Err(e),
                    }
                }
            };
            match value {
                Err(Error::DomainOverflow { .. }) => Ok(f64::INFINITY),
                Ok(v) if !v.is_finite() => Ok(f64::INFINITY),
                other => other,
            }
        };
        infimum_below(map, 1.0, lo, hi, true, self.tol)
    }

    /// `‖χ_A‖_{X^Φ} = 1 / Φ⁻¹(1/‖χ_A‖_X)`.
    pub fn char_norm(&self, set: &AtomSet) -> Result<f64> {
        let n = self.base.indicator_norm(set)?;
        if n == 0.0 {
            return Err(Error::NullSet);
        }
        Ok(1.0 / self.phi.inverse(1.0 / n)?)
    }

    /// `(‖f‖_{X^Φ}, ‖f‖_∞ / Φ⁻¹(1/‖χ_Ω‖_X))`; the first never exceeds the second.
    pub fn linf_embedding_bound(&self, f: &SimpleFn) -> Result<(f64, f64)> {
        let lhs = self.luxemburg(f)?;
        let omega = AtomSet::full(self.base.carrier().len());
        let rhs = f.sup_norm() * self.char_norm(&omega)?;
        Ok((lhs, rhs))
    }

    /// `(‖f‖_X, C·‖f‖_{X^Φ})` with `C = K ‖χ_Ω‖_X max_a Φ⁻¹(1/‖χ_{a}‖_X)` over
    /// non-null atoms `a`. The ratio of the pair is an empirical lower estimate
    /// of the inclusion constant of `X^Φ` in `X`.
    pub fn base_embedding_bound(&self, f: &SimpleFn) -> Result<(f64, f64)> {
        let n = self.base.carrier().len();
        let mut reach: f64 = 0.0;
        for i in 0..n {
            let c = self.base.indicator_norm(&AtomSet::from_indices(n, [i])?)?;
            if c > 0.0 {
                reach = reach.max(self.phi.inverse(1.0 / c)?);
            }
        }
        let lhs = self.base.qnorm(f)?;
        if reach == 0.0 {
            return Ok((lhs, 0.0));
        }
        let omega = self.base.indicator_norm(&AtomSet::full(n))?;
        Ok((lhs, self.base.k() * omega * reach * self.luxemburg(f)?))
    }

    fn slack(&self, scale: f64) -> f64 {
        RELATION_SLACK.max(10.0 * self.tol) * scale.max(1.0)
    }

    /// Evaluates the four norm/modular relations at `f`.
    pub fn norm_modular_relations(&self, f: &SimpleFn) -> Result<ModularRelations> {
        let l = self.luxemburg(f)?;
        let m = self.modular(f)?;
        let eps = self.slack(l.max(m));
        let fatou = self.base.tags().sigma_fatou;
        Ok(ModularRelations {
            luxemburg: l,
            modular: m,
            norm_below_max_one_modular: l <= m.max(1.0) + eps,
            modular_below_norm_inside_ball: (l < 1.0).then_some(m <= l + eps),
            modular_above_norm_outside_ball: (l > 1.0).then_some(m >= l - eps),
            modular_below_norm_on_closed_ball: (fatou && l <= 1.0).then_some(m <= l + eps),
        })
    }

    /// Transfers boundedness between the modular and the Luxemburg quasi-norm
    /// over the family `h`. `m` must exceed every `‖h‖_{X^Φ}`; by default it
    /// is twice their supremum.
    pub fn bounded_set_transfer(&self, h: &[SimpleFn], m: Option<f64>) -> Result<BoundedTransfer> {
        if h.is_empty() {
            return Err(Error::PreconditionViolation("the family is empty".into()));
        }
        let mut modular_sup: f64 = 0.0;
        let mut luxemburg_sup: f64 = 0.0;
        for f in h {
            modular_sup = modular_sup.max(self.modular(f)?);
            luxemburg_sup = luxemburg_sup.max(self.luxemburg(f)?);
        }
        let m = match m {
            Some(m) if m > luxemburg_sup => m,
            Some(m) => {
                return Err(Error::PreconditionViolation(format!(
                    "bound {m} does not exceed the Luxemburg supremum {luxemburg_sup}"
                )))
            }
            None if luxemburg_sup == 0.0 => 1.0,
            None => 2.0 * luxemburg_sup,
        };
        let psi = if m == 1.0 {
            self.phi.clone()
        } else {
            self.phi.scale_argument(m)?
        };
        let scaled = OrliczSpace::new(self.base.clone(), psi.clone());
        let mut psi_modular_sup: f64 = 0.0;
        for f in h {
            psi_modular_sup = psi_modular_sup.max(scaled.modular(f)?);
        }
        Ok(BoundedTransfer {
            modular_sup,
            luxemburg_sup,
            modular_bound_transfers: luxemburg_sup <= modular_sup.max(1.0) + self.slack(modular_sup),
            m,
            psi,
            psi_modular_sup,
            psi_certificate_holds: psi_modular_sup <= 1.0 + self.slack(1.0),
        })
    }

    /// Checks the consequences of `Φ ∈ Δ2` along `seq`, and along `chain`
    /// (an increasing sequence with limit `limit`) when given.
    pub fn delta2_consequences(
        &self,
        seq: &[SimpleFn],
        chain: Option<(&[SimpleFn], &SimpleFn)>,
    ) -> Result<Delta2Report> {
        if !self.phi.is_delta2() {
            return Err(Error::PreconditionViolation(
                "the Young function is not flagged Δ2".into(),
            ));
        }
        let luxemburg: Vec<f64> = seq.iter().map(|f| self.luxemburg(f)).collect::<Result<_>>()?;
        let modular: Vec<f64> = seq.iter().map(|f| self.modular(f)).collect::<Result<_>>()?;
        let lux_zero = reaches_zero(&luxemburg);
        let mod_zero = reaches_zero(&modular);
        let (chain_residuals, chain_converges) = match chain {
            Some((fs, limit)) => {
                let mut res = Vec::with_capacity(fs.len());
                for f in fs {
                    if !f.pointwise_leq(limit)? {
                        return Err(Error::PreconditionViolation(
                            "chain element exceeds its limit".into(),
                        ));
                    }
                    res.push(self.luxemburg(&limit.sub(f)?)?);
                }
                let scale = self.luxemburg(limit)?;
                let ok = res.last().is_none_or(|&r| r <= ZERO_THRESHOLD * scale);
                (res, Some(ok))
            }
            None => (Vec::new(), None),
        };
        Ok(Delta2Report {
            class_equals_space: true,
            luxemburg,
            modular,
            luxemburg_to_zero: lux_zero,
            modular_to_zero: mod_zero,
            equivalence_holds: lux_zero == mod_zero,
            chain_residuals,
            chain_converges,
        })
    }
}

fn qbfs_same(f: &SimpleFn, carrier: &SpaceRef) -> bool {
    crate::space::same_space(f.space(), carrier)
}

/// True when the final entry is below [`ZERO_THRESHOLD`] times the peak.
fn reaches_zero(xs: &[f64]) -> bool {
    let peak = xs.iter().cloned().fold(0.0, f64::max);
    match xs.last() {
        None => true,
        Some(&last) => last == 0.0 || last <= ZERO_THRESHOLD * peak,
    }
}

impl QuasiNorm for OrliczSpace {
    fn carrier(&self) -> &SpaceRef {
        self.base.carrier()
    }

    fn eval(&self, f: &SimpleFn) -> Result<f64> {
        self.luxemburg(f)
    }

    fn quasi_triangle_constant(&self) -> f64 {
        self.base.k()
    }

    fn tags(&self) -> SpaceTags {
        let t = self.base.tags();
        SpaceTags {
            is_norm: t.is_norm,
            sigma_order_continuous: t.sigma_order_continuous && self.phi.is_delta2(),
            sigma_fatou: t.sigma_fatou,
        }
    }

    fn name(&self) -> String {
        format!("{}^Phi", self.base.name())
    }

    fn spec(&self) -> SpaceSpec {
        SpaceSpec::Orlicz {
            base: Box::new(self.base.spec()),
            phi: self.phi.spec(),
        }
    }

    fn as_orlicz(&self) -> Option<&OrliczSpace> {
        Some(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModularRelations {
    pub luxemburg: f64,
    pub modular: f64,
    /// `‖f‖ ≤ max(1, ‖Φ(|f|)‖)`.
    pub norm_below_max_one_modular: bool,
    /// `‖f‖ < 1 ⇒ ‖Φ(|f|)‖ ≤ ‖f‖`; `None` when `‖f‖ ≥ 1`.
    pub modular_below_norm_inside_ball: Option<bool>,
    /// `‖f‖ > 1 ⇒ ‖Φ(|f|)‖ ≥ ‖f‖`; `None` when `‖f‖ ≤ 1`.
    pub modular_above_norm_outside_ball: Option<bool>,
    /// `‖f‖ ≤ 1 ⇒ ‖Φ(|f|)‖ ≤ ‖f‖`, requiring σ-Fatou on the base.
    pub modular_below_norm_on_closed_ball: Option<bool>,
}

impl ModularRelations {
    pub fn all_hold(&self) -> bool {
        self.norm_below_max_one_modular
            && self.modular_below_norm_inside_ball != Some(false)
            && self.modular_above_norm_outside_ball != Some(false)
            && self.modular_below_norm_on_closed_ball != Some(false)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundedTransfer {
    pub modular_sup: f64,
    pub luxemburg_sup: f64,
    /// `sup ‖h‖_{X^Φ} ≤ max(1, sup ‖Φ(|h|)‖_X)`.
    pub modular_bound_transfers: bool,
    pub m: f64,
    #[serde(skip)]
    pub psi: YoungFunction,
    /// `sup ‖Ψ(|h|)‖_X` with `Ψ(t) = Φ(t/M)`.
    pub psi_modular_sup: f64,
    pub psi_certificate_holds: bool,
}

impl BoundedTransfer {
    pub fn all_hold(&self) -> bool {
        self.modular_bound_transfers && self.psi_certificate_holds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Delta2Report {
    /// Orlicz class and Orlicz space coincide; on atoms both hold every function.
    pub class_equals_space: bool,
    pub luxemburg: Vec<f64>,
    pub modular: Vec<f64>,
    pub luxemburg_to_zero: bool,
    pub modular_to_zero: bool,
    pub equivalence_holds: bool,
    /// `‖f − fₙ‖_{X^Φ}` along the chain.
    pub chain_residuals: Vec<f64>,
    pub chain_converges: Option<bool>,
}

/// Luxemburg norm over `L¹(ν)` for non-negative weights `ν` (zeros allowed).
fn scalar_luxemburg(phi: &YoungFunction, weights: &[f64], values: &[f64], tol: f64) -> Result<f64> {
    let active: Vec<(f64, f64)> = weights
        .iter()
        .zip(values)
        .map(|(w, v)| (*w, v.abs()))
        .filter(|(w, v)| *w > 0.0 && *v > 0.0)
        .collect();
    if active.is_empty() {
        return Ok(0.0);
    }
    let map = |k: f64| -> Result<f64> {
        let mut s = 0.0;
        for &(w, v) in &active {
            match phi.eval(v / k) {
                Ok(x) => s += w * x,
                Err(Error::DomainOverflow { .. }) => return Ok(f64::INFINITY),
                Err(e) => return Err(e),
            }
        }
        Ok(s)
    };
    let sup = active.iter().map(|a| a.1).fold(0.0, f64::max);
    let total: f64 = active.iter().map(|a| a.0).sum();
    let unit = 1.0 / phi.inverse(1.0 / total)?;
    infimum_below(map, 1.0, sup * unit * 0.5, sup * unit, false, tol)
}

/// Unit vectors for the dual norm used to sample `sup_{y*}`.
fn dual_grid(m: &VectorMeasure) -> Vec<Vec<f64>> {
    let target = m.target();
    let d = target.dim;
    let raw: Vec<Vec<f64>> = match d {
        1 => vec![vec![1.0]],
        2 => (0..DUAL_GRID)
            .map(|k| {
                let a = std::f64::consts::PI * k as f64 / DUAL_GRID as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(DUAL_GRID_SEED);
            (0..DUAL_GRID)
                .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect()
        }
    };
    raw.into_iter()
        .filter_map(|y| {
            let n = target.dual_norm(&y);
            (n > 0.0).then(|| y.into_iter().map(|x| x / n).collect())
        })
        .collect()
}

fn scalar_weights(m: &VectorMeasure, ystar: &[f64]) -> Vec<f64> {
    m.atom_vectors()
        .iter()
        .map(|v| v.iter().zip(ystar).map(|(a, b)| a * b).sum::<f64>().abs())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorSample {
    /// Luxemburg norm over `L¹_w(m)`.
    pub exact: f64,
    /// `max` over the dual grid of the Luxemburg norm over `L¹(|⟨m, y*⟩|)`.
    pub grid_sup: f64,
    /// The same scalar norm at the functional norming `Φ(|f|/exact)`.
    pub at_extremal: f64,
    pub grid_is_lower_bound: bool,
    pub extremal_matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VectorOrliczReport {
    pub samples: Vec<VectorSample>,
    /// Norm/modular relations in `L^Φ(‖m‖)`, one per sample.
    pub semivar_relations: Vec<ModularRelations>,
    pub semivar_transfer: BoundedTransfer,
    /// `(‖f‖, bound)` pairs of the `L^∞` embedding in `L^Φ(‖m‖)`.
    pub semivar_linf: Vec<(f64, f64)>,
    /// Inclusion `L^Φ(m) ⊆ L¹(m)^Φ` is an equality on atoms.
    pub inclusion_vacuous: bool,
}

impl VectorOrliczReport {
    pub fn all_hold(&self) -> bool {
        self.samples
            .iter()
            .all(|s| s.grid_is_lower_bound && s.extremal_matches)
            && self.semivar_relations.iter().all(ModularRelations::all_hold)
            && self.semivar_transfer.all_hold()
            && self
                .semivar_linf
                .iter()
                .all(|(l, r)| *l <= r * (1.0 + RELATION_SLACK) + RELATION_SLACK)
    }
}

/// Compares the weak Orlicz norm `sup_{y*} ‖f‖_{L^Φ(|⟨m,y*⟩|)}` with the
/// Luxemburg norm over `L¹_w(m)`, then runs the norm/modular battery on
/// `L^Φ(‖m‖) = L¹(‖m‖)^Φ`.
pub fn vector_orlicz_identities(
    m: &VectorMeasure,
    phi: &YoungFunction,
    fs: &[SimpleFn],
) -> Result<VectorOrliczReport> {
    if fs.is_empty() {
        return Err(Error::PreconditionViolation("no samples".into()));
    }
    let weak = OrliczSpace::new(qbfs::l1w(m.clone()), phi.clone());
    let grid = dual_grid(m);
    let tol = weak.tol();
    let mut samples = Vec::with_capacity(fs.len());
    for f in fs {
        let exact = weak.luxemburg(f)?;
        let mut grid_sup: f64 = 0.0;
        for y in &grid {
            grid_sup = grid_sup.max(scalar_luxemburg(phi, &scalar_weights(m, y), f.values(), tol)?);
        }
        let at_extremal = if exact == 0.0 {
            0.0
        } else {
            let level: Vec<f64> = f
                .values()
                .iter()
                .map(|v| phi.eval(v.abs() / exact))
                .collect::<Result<_>>()?;
            let (_, ystar) = m.extremal_functional(&level);
            scalar_luxemburg(phi, &scalar_weights(m, &ystar), f.values(), tol)?
        };
        let eps = RELATION_SLACK * exact.max(1e-300);
        samples.push(VectorSample {
            exact,
            grid_sup,
            at_extremal,
            grid_is_lower_bound: grid_sup <= exact + eps,
            extremal_matches: (at_extremal - exact).abs() <= eps,
        });
    }

    let semivar = OrliczSpace::new(qbfs::l1_semivar(m.clone()), phi.clone());
    let semivar_relations = fs
        .iter()
        .map(|f| semivar.norm_modular_relations(f))
        .collect::<Result<_>>()?;
    let semivar_transfer = semivar.bounded_set_transfer(fs, None)?;
    let semivar_linf = fs
        .iter()
        .map(|f| semivar.linf_embedding_bound(f))
        .collect::<Result<_>>()?;
    Ok(VectorOrliczReport {
        samples,
        semivar_relations,
        semivar_transfer,
        semivar_linf,
        inclusion_vacuous: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbfs::{l1_mu, l1_semivar, l1w, linf};
    use crate::space::AtomicMeasureSpace;
    use crate::vecmeasure::{NormKind, TargetNorm};
    use approx::assert_relative_eq;
    use std::sync::Arc;

    fn space(weights: Vec<f64>) -> SpaceRef {
        Arc::new(AtomicMeasureSpace::with_weights(weights).unwrap())
    }

    fn f(s: &SpaceRef, v: Vec<f64>) -> SimpleFn {
        SimpleFn::new(s.clone(), v).unwrap()
    }

    fn e1e2() -> VectorMeasure {
        VectorMeasure::new(
            space(vec![1.0, 1.0]),
            TargetNorm::new(2, NormKind::L2).unwrap(),
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap()
    }

    fn sq() -> YoungFunction {
        YoungFunction::power(2.0).unwrap()
    }

    #[test]
    fn modular_examples() {
        let s = space(vec![1.0, 1.0]);
        let os = OrliczSpace::new(l1_mu(s.clone()), sq());
        assert_eq!(os.modular(&f(&s, vec![3.0, 4.0])).unwrap(), 25.0);
        assert_eq!(os.modular(&SimpleFn::zero(s)).unwrap(), 0.0);
        let m = e1e2();
        let os = OrliczSpace::new(l1_semivar(m.clone()), sq());
        let one = f(m.space(), vec![1.0, 1.0]);
        assert_relative_eq!(os.modular(&one).unwrap(), 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn luxemburg_examples() {
        let s = space(vec![1.0, 1.0]);
        let os = OrliczSpace::new(l1_mu(s.clone()), sq());
        assert_relative_eq!(os.luxemburg(&f(&s, vec![3.0, 4.0])).unwrap(), 5.0, max_relative = 1e-9);
        assert_eq!(os.luxemburg(&SimpleFn::zero(s)).unwrap(), 0.0);
        let m = e1e2();
        let os = OrliczSpace::new(l1_semivar(m.clone()), sq());
        let one = f(m.space(), vec![1.0, 1.0]);
        assert!((os.luxemburg(&one).unwrap() - 2f64.powf(0.25)).abs() < 1e-9);
    }

    #[test]
    fn luxemburg_matches_weighted_p_norm() {
        let s = space(vec![0.5, 2.0, 1.0, 3.0]);
        let g = f(&s, vec![1.5, -0.2, 0.0, 7.0]);
        for p in [1.0, 1.5, 2.0, 3.0] {
            let os = OrliczSpace::new(l1_mu(s.clone()), YoungFunction::power(p).unwrap());
            let closed: f64 = g
                .values()
                .iter()
                .zip(s.weights())
                .map(|(v, w)| v.abs().powf(p) * w)
                .sum::<f64>()
                .powf(1.0 / p);
            assert_relative_eq!(os.luxemburg(&g).unwrap(), closed, max_relative = 1e-9);
        }
    }

    #[test]
    fn char_norm_examples() {
        let s = space(vec![1.0, 1.0]);
        let os = OrliczSpace::new(l1_mu(s.clone()), sq());
        let full = AtomSet::full(2);
        assert_relative_eq!(os.char_norm(&full).unwrap(), 2f64.sqrt(), max_relative = 1e-15);
        let one = AtomSet::from_mask(vec![true, false]);
        let exp = YoungFunction::exp(1.0).unwrap();
        let ose = OrliczSpace::new(l1_mu(s.clone()), exp.clone());
        assert_eq!(ose.char_norm(&one).unwrap(), 1.0 / exp.inverse(1.0).unwrap());
        assert_eq!(os.char_norm(&AtomSet::empty(2)), Err(Error::NullSet));
        let m = e1e2();
        let os = OrliczSpace::new(l1_semivar(m), sq());
        assert!((os.char_norm(&full).unwrap() - 2f64.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn char_norm_matches_luxemburg_of_indicator() {
        let s = space(vec![0.3, 1.0, 2.5]);
        let phi = YoungFunction::power_log(1.5, 1.0).unwrap();
        for base in [l1_mu(s.clone()), linf(s.clone())] {
            let os = OrliczSpace::new(base, phi.clone());
            for mask in [[true, false, false], [false, true, true], [true, true, true]] {
                let a = AtomSet::from_mask(mask.to_vec());
                let chi = SimpleFn::indicator(s.clone(), &a).unwrap();
                assert_relative_eq!(
                    os.char_norm(&a).unwrap(),
                    os.luxemburg(&chi).unwrap(),
                    max_relative = 1e-9
                );
            }
        }
    }

    #[test]
    fn linf_embedding_examples() {
        let s = space(vec![1.0, 1.0]);
        let os = OrliczSpace::new(l1_mu(s.clone()), sq());
        let (l, r) = os.linf_embedding_bound(&f(&s, vec![1.0, 0.5])).unwrap();
        assert_relative_eq!(l, 1.25f64.sqrt(), max_relative = 1e-9);
        assert_relative_eq!(r, 2f64.sqrt(), max_relative = 1e-15);
        let (l, r) = os.linf_embedding_bound(&SimpleFn::constant(s.clone(), 1.0).unwrap()).unwrap();
        assert_relative_eq!(l, r, max_relative = 1e-9);
        assert_eq!(os.linf_embedding_bound(&SimpleFn::zero(s)).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn modular_relations_examples() {
        let s = space(vec![1.0, 1.0]);
        let os = OrliczSpace::new(l1_mu(s.clone()), sq());
        let r = os.norm_modular_relations(&f(&s, vec![3.0, 4.0])).unwrap();
        assert_eq!(r.modular_above_norm_outside_ball, Some(true));
        assert!(r.all_hold());

        let a = AtomSet::from_mask(vec![true, false]);
        let chi = SimpleFn::indicator(s.clone(), &a).unwrap();
        let unit = chi.scale(1.0 / os.char_norm(&a).unwrap());
        let r = os.norm_modular_relations(&unit).unwrap();
        assert!((r.modular - 1.0).abs() < 1e-9);
        assert!(r.all_hold());

        let r = os.norm_modular_relations(&SimpleFn::zero(s)).unwrap();
        assert_eq!((r.luxemburg, r.modular), (0.0, 0.0));
        assert!(r.all_hold());
    }

    #[test]
    fn bounded_set_transfer_examples() {
        let s = space(vec![1.0, 2.0]);
        let os = OrliczSpace::new(l1_mu(s.clone()), sq());
        let zero = os.bounded_set_transfer(&[SimpleFn::zero(s.clone())], None).unwrap();
        assert_eq!(zero.psi, sq());
        assert!(zero.all_hold());

        let base = f(&s, vec![0.7, 1.3]);
        let fam = vec![base.clone(), base.scale(2.0), base.scale(4.0)];
        let bound = 8.0 * os.luxemburg(&base).unwrap();
        let t = os.bounded_set_transfer(&fam, Some(bound)).unwrap();
        assert!(t.all_hold());
        assert!(t.psi_modular_sup <= 0.25 + 1e-9);
        assert!(os.bounded_set_transfer(&fam, Some(0.1)).is_err());
        assert!(os.bounded_set_transfer(&[], None).is_err());

        let sets: Vec<SimpleFn> = (0..4)
            .map(|bits| {
                let a = AtomSet::from_mask(vec![bits & 1 == 1, bits & 2 == 2]);
                SimpleFn::indicator(s.clone(), &a).unwrap()
            })
            .collect();
        let t = os.bounded_set_transfer(&sets, None).unwrap();
        assert_eq!(t.modular_sup, 3.0);
        assert!(t.all_hold());
    }

    #[test]
    fn delta2_consequences_examples() {
        let s = space(vec![1.0, 1.0, 1.0]);
        let os = OrliczSpace::new(l1_mu(s.clone()), sq());
        let g = f(&s, vec![1.0, 2.0, 3.0]);
        let seq: Vec<SimpleFn> = (0..64).map(|n| g.scale(0.5f64.powi(n))).collect();
        let r = os.delta2_consequences(&seq, None).unwrap();
        assert!(r.luxemburg_to_zero && r.modular_to_zero && r.equivalence_holds);

        let ones = vec![SimpleFn::constant(s.clone(), 1.0).unwrap(); 5];
        let r = os.delta2_consequences(&ones, None).unwrap();
        assert!(!r.luxemburg_to_zero && !r.modular_to_zero && r.equivalence_holds);

        let chain: Vec<SimpleFn> = (1..=3)
            .map(|n| g.restrict(&AtomSet::from_indices(3, 0..n).unwrap()).unwrap())
            .collect();
        let r = os.delta2_consequences(&[], Some((&chain, &g))).unwrap();
        assert_eq!(*r.chain_residuals.last().unwrap(), 0.0);
        assert_eq!(r.chain_converges, Some(true));

        let exp = OrliczSpace::new(l1_mu(s), YoungFunction::exp(1.0).unwrap());
        assert!(matches!(
            exp.delta2_consequences(&seq, None),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn vector_identities_on_orthonormal_pair() {
        let m = e1e2();
        let g = f(m.space(), vec![3.0, 4.0]);
        let weak = OrliczSpace::new(l1w(m.clone()), sq());
        assert_relative_eq!(weak.modular(&g).unwrap(), 337f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(weak.luxemburg(&g).unwrap(), 337f64.powf(0.25), max_relative = 1e-9);
        let samples = vec![g, f(m.space(), vec![0.1, -2.0]), SimpleFn::zero(m.space().clone())];
        let r = vector_orlicz_identities(&m, &sq(), &samples).unwrap();
        assert!(r.all_hold(), "{r:?}");
    }

    #[test]
    fn scalar_measure_collapses() {
        let s = space(vec![0.5, 1.5, 2.0]);
        let m = VectorMeasure::new(
            s.clone(),
            TargetNorm::new(1, NormKind::L1).unwrap(),
            vec![vec![0.5], vec![1.5], vec![2.0]],
        )
        .unwrap();
        let phi = YoungFunction::power(3.0).unwrap();
        let g = f(&s, vec![1.0, -0.5, 2.0]);
        let a = OrliczSpace::new(l1w(m.clone()), phi.clone()).luxemburg(&g).unwrap();
        let b = OrliczSpace::new(l1_mu(s.clone()), phi.clone()).luxemburg(&g).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-9);
        let r = vector_orlicz_identities(&m, &phi, &[g]).unwrap();
        assert!(r.all_hold());
    }

    #[test]
    fn overflowing_young_function_still_bisects() {
        let s = space(vec![1.0, 1.0]);
        let os = OrliczSpace::new(l1_mu(s.clone()), YoungFunction::exp(2.0).unwrap());
        let g = f(&s, vec![100.0, 1.0]);
        let l = os.luxemburg(&g).unwrap();
        assert!(l > 0.0 && l.is_finite());
        assert!(os.modular(&g).is_err());
        let h = g.scale(1.0 / l);
        assert!((os.modular(&h).unwrap() - 1.0).abs() < 1e-7);
    }
}
