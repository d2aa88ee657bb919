//! The registered checks. Each draws one random instance from its RNG and
//! returns the compared quantities together with a self-contained case.

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use super::generators::{self as gen, Rng8};
use super::{CheckSpec, Outcome};
use crate::error::Result;
use crate::interp::{
    self, calderon_norm_upper, cp_orlicz_identity, l_convexity_search, l_convexity_transfer,
    power_commutation, s_convexity_check, CalderonInstance, Method,
};
use crate::orlicz::{vector_orlicz_identities, OrliczSpace};
use crate::qbfs::{self, QuasiNormedSpace};
use crate::space::{AtomSet, SimpleFn, SpaceRef};
use crate::vecmeasure::{NormKind, TargetNorm, VectorMeasure};
use crate::young::YoungFunction;

/// Bisection tolerance used by every Orlicz check.
const CHECK_TOL: f64 = 1e-12;

/// L-convexity trials per registry instance.
pub const LCONVEX_TRIALS: u64 = 1000;

macro_rules! check {
    ($id:expr, $group:expr, $suite:expr, $stmt:expr, $tol:expr, $budget:expr, $run:expr) => {
        CheckSpec {
            id: $id,
            group: $group,
            suite: $suite,
            statement: $stmt,
            tolerance: $tol,
            default_budget: $budget,
            run: $run,
        }
    };
}

pub static REGISTRY: &[CheckSpec] = &[
    check!("young-shape", "young", "young", "young-shape", 1e-9, 300, young_shape),
    check!("young-quasi-subadditive", "young", "young", "young-quasi-subadditive", 1e-12, 300, young_quasi_subadditive),
    check!("young-delta2", "young", "young", "young-delta2", 0.0, 60, young_delta2),
    check!("qbfs-axioms", "qbfs", "axioms", "qbfs-axioms", 1e-9, 300, qbfs_axioms),
    check!("qbfs-inclusion", "qbfs", "axioms", "qbfs-inclusion", 1e-9, 300, qbfs_inclusion),
    check!("qbfs-fatou", "qbfs", "axioms", "qbfs-fatou", 1e-12, 200, qbfs_fatou),
    check!("sv-bnb", "semivar", "semivar", "semivariation-duality", 1e-12, 500, sv_bnb),
    check!("sv-weighted", "semivar", "semivar", "semivariation-duality", 1e-12, 300, sv_weighted),
    check!("sv-subadditive", "semivar", "semivar", "semivariation-subadditive", 1e-12, 300, sv_subadditive),
    check!("sv-rybakov", "semivar", "semivar", "rybakov", 0.0, 200, sv_rybakov),
    check!("sv-layer-cake", "semivar", "semivar", "layer-cake", 1e-12, 200, sv_layer_cake),
    check!("orlicz-lp-oracle", "orlicz", "lemmas", "lp-oracle", 1e-9, 200, orlicz_lp_oracle),
    check!("lem-linf-i", "orlicz", "lemmas", "char-norm", 1e-9, 200, lem_linf_i),
    check!("lem-linf-ii", "orlicz", "lemmas", "linf-embedding", 1e-9, 200, lem_linf_ii),
    check!("orlicz-embedding", "orlicz", "lemmas", "base-embedding", 1e-9, 200, orlicz_embedding),
    check!("lem-bound-i", "orlicz", "lemmas", "norm-below-modular", 1e-9, 300, lem_bound_i),
    check!("lem-bound-ii", "orlicz", "lemmas", "modular-bounded-family", 1e-9, 100, lem_bound_ii),
    check!("lem-modular-i", "orlicz", "lemmas", "modular-inside-ball", 1e-9, 300, lem_modular_i),
    check!("lem-modular-ii", "orlicz", "lemmas", "modular-outside-ball", 1e-9, 300, lem_modular_ii),
    check!("lem-modular-iii", "orlicz", "lemmas", "scaled-young-certificate", 1e-9, 100, lem_modular_iii),
    check!("thm-lqn-k", "orlicz", "theorems", "luxemburg-quasi-norm", 1e-9, 300, thm_lqn_k),
    check!("thm-fatou-i", "orlicz", "theorems", "attained-infimum", 1e-9, 200, thm_fatou_i),
    check!("thm-fatou-ii", "orlicz", "theorems", "modular-closed-ball", 1e-9, 300, thm_fatou_ii),
    check!("thm-fatou-iii", "orlicz", "theorems", "fatou-transfer", 1e-9, 200, thm_fatou_iii),
    check!("thm-delta2-ii", "orlicz", "theorems", "delta2-null-sequences", 1e-8, 100, thm_delta2_ii),
    check!("thm-delta2-iii", "orlicz", "theorems", "delta2-order-continuity", 1e-8, 100, thm_delta2_iii),
    check!("thm-lconvex", "orlicz", "theorems", "l-convexity-transfer", 0.0, 20, thm_lconvex),
    check!("prop-vector-i", "vector", "vector", "weak-orlicz-identity", 1e-9, 100, prop_vector_i),
    check!("cor-semivar-battery", "vector", "vector", "semivariation-orlicz-battery", 1e-9, 100, cor_semivar_battery),
    check!("cor-semivar-delta2", "vector", "vector", "semivariation-orlicz-delta2", 1e-8, 60, cor_semivar_delta2),
    check!("cp-orlicz", "interp", "cp", "calderon-orlicz", 1e-6, 30, cp_orlicz),
    check!("cp-orlicz-wide", "interp", "cp", "calderon-orlicz", 1e-6, 100, cp_orlicz_wide),
    check!("cp-collapse", "interp", "cp", "calderon-collapse", 1e-9, 100, cp_collapse),
    check!("cm-exponent", "interp", "powers", "interpolation-exponent", 1e-9, 60, cm_exponent),
    check!("power-commute", "interp", "powers", "powers-commute", 1e-6, 20, power_commute),
    check!("s-convex", "interp", "lconvex", "s-convexity", 1e-12, 100, s_convex),
    check!("lconvex-semivar", "interp", "lconvex", "semivariation-lp-l-convex", 0.0, 10, lconvex_semivar),
];

fn tuned(base: &QuasiNormedSpace, phi: &YoungFunction) -> OrliczSpace {
    OrliczSpace::new(base.clone(), phi.clone())
        .with_tol(CHECK_TOL)
        .expect("valid tolerance")
}

/// Keeps `Φ(|f|)` far from overflow for Young functions with a finite cap.
fn fit(phi: &YoungFunction, f: SimpleFn) -> SimpleFn {
    let limit = phi.domain_cap() / 8.0;
    let sup = f.sup_norm();
    if sup > limit {
        f.scale(limit / sup)
    } else {
        f
    }
}

fn case(space: &SpaceRef, base: &QuasiNormedSpace, phi: Option<&YoungFunction>, fs: &[&SimpleFn]) -> Value {
    json!({
        "space": &**space,
        "base": base.spec(),
        "phi": phi.map(|p| p.spec()),
        "f": fs.iter().map(|f| f.values()).collect::<Vec<_>>(),
    })
}

fn le(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs <= rhs + tol * rhs.abs().max(1.0)
}

fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn young_shape(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let phi = gen::young(rng);
    let hi = phi.domain_cap().min(20.0) / 2.0;
    let s = rng.gen_range(0.0..hi);
    let t = s + rng.gen_range(1e-3..hi);
    let (ps, pt) = (phi.eval(s)?, phi.eval(t)?);
    let mid = phi.eval(0.5 * (s + t))?;
    let back = phi.inverse(pt)?;
    let pass = phi.eval(0.0)? == 0.0
        && ps < pt
        && mid <= 0.5 * (ps + pt) * (1.0 + 1e-12)
        && rel_eq(back, t, tol);
    Ok(Outcome::new(back, t, pass, json!({"phi": phi.spec(), "s": s, "t": t})))
}

fn young_quasi_subadditive(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let phi = gen::delta2_young(rng);
    let alpha = rng.gen_range(1.0..3.0);
    let n = rng.gen_range(1..=5);
    let ts: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let (lhs, rhs) = phi.quasi_subadditive_bound(alpha, &ts)?;
    Ok(Outcome::new(lhs, rhs, lhs <= rhs * (1.0 + tol), json!({"phi": phi.spec(), "alpha": alpha, "ts": ts})))
}

fn young_delta2(rng: &mut Rng8, _tol: f64) -> Result<Outcome> {
    let (phi, expected) = match rng.gen_range(0..3) {
        0 => (YoungFunction::power(rng.gen_range(1.0..5.0))?, true),
        1 => (YoungFunction::power_log(1.0, 1.0)?, true),
        _ => (YoungFunction::exp(rng.gen_range(1.0..2.5))?, false),
    };
    let est = phi.delta2()?;
    let flagged = !est.unbounded;
    Ok(Outcome::new(
        est.constant,
        f64::INFINITY,
        flagged == expected,
        json!({"phi": phi.spec(), "expected_delta2": expected}),
    ))
}

/// A quasi-normed space from the generators, or an Orlicz space over one.
fn any_space(rng: &mut Rng8, space: &SpaceRef) -> Result<(QuasiNormedSpace, Option<YoungFunction>)> {
    let x = gen::quasi_normed(rng, space)?;
    if rng.gen_bool(0.4) {
        let phi = gen::delta2_young(rng);
        Ok((tuned(&x, &phi).into_space(), Some(phi)))
    } else {
        Ok((x, None))
    }
}

fn qbfs_axioms(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=8);
    let (x, phi) = any_space(rng, &space)?;
    let f = gen::nonzero_function(rng, &space, 0.2);
    let g = gen::function(rng, &space, 0.2);
    let c = rng.gen_range(-5.0..5.0);
    let shrink: Vec<f64> = (0..space.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
    let smaller = SimpleFn::new(space.clone(), f.values().iter().zip(&shrink).map(|(a, b)| a * b).collect())?;

    let (nf, ng) = (x.qnorm(&f)?, x.qnorm(&g)?);
    let q1 = x.qnorm(&SimpleFn::zero(space.clone()))? == 0.0 && nf > 0.0;
    let q2 = rel_eq(x.qnorm(&f.scale(c))?, c.abs() * nf, tol) || c == 0.0;
    let lhs = x.qnorm(&f.add(&g)?)?;
    let rhs = x.k() * (nf + ng);
    let q3 = lhs <= rhs * (1.0 + tol);
    let lattice = x.qnorm(&smaller)? <= nf * (1.0 + tol);
    let omega = x.indicator_norm(&AtomSet::full(space.len()))?.is_finite();
    Ok(Outcome::new(
        lhs,
        rhs,
        q1 && q2 && q3 && lattice && omega,
        json!({"case": case(&space, &x, phi.as_ref(), &[&f, &g]), "c": c, "shrink": shrink, "k": x.k()}),
    ))
}

fn qbfs_inclusion(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=8);
    let (x, phi) = any_space(rng, &space)?;
    let f = gen::function(rng, &space, 0.2);
    let lhs = x.qnorm(&f)?;
    let rhs = f.sup_norm() * x.indicator_norm(&AtomSet::full(space.len()))?;
    Ok(Outcome::new(lhs, rhs, lhs <= rhs * (1.0 + tol), case(&space, &x, phi.as_ref(), &[&f])))
}

fn chain_outcome(x: &QuasiNormedSpace, f: &SimpleFn, chain: &[SimpleFn], tol: f64) -> Result<(f64, f64, bool)> {
    let mut sup: f64 = 0.0;
    let mut monotone = true;
    for g in chain {
        let n = x.qnorm(g)?;
        monotone &= n >= sup * (1.0 - tol);
        sup = sup.max(n);
    }
    let full = x.qnorm(f)?;
    Ok((sup, full, monotone && rel_eq(sup, full, tol)))
}

fn qbfs_fatou(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=8);
    let x = gen::quasi_normed(rng, &space)?;
    let f = gen::nonzero_function(rng, &space, 0.2);
    let chain = gen::increasing_chain(rng, &f);
    let (sup, full, pass) = chain_outcome(&x, &f, &chain, tol)?;
    Ok(Outcome::new(sup, full, pass, case(&space, &x, None, &[&f])))
}

fn sv_bnb(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=12);
    let m = gen::measure(rng, &space, 4, true);
    let a = gen::set(rng, space.len());
    let fast = m.semivariation(&a)?;
    let slow = m.semivariation_bruteforce(&a)?;
    Ok(Outcome::new(
        fast,
        slow,
        (fast - slow).abs() <= tol * slow.max(1.0),
        json!({"measure": m.spec(), "set": a.mask()}),
    ))
}

/// `max_s ‖Σ sᵢ wᵢ mᵢ‖` by plain enumeration.
fn weighted_bruteforce(m: &VectorMeasure, w: &[f64]) -> f64 {
    let n = w.len();
    let target = m.target();
    let mut best: f64 = 0.0;
    for mask in 0u32..(1u32 << n) {
        let mut sum = vec![0.0; target.dim];
        for (i, v) in m.atom_vectors().iter().enumerate() {
            let s = if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
            for (acc, x) in sum.iter_mut().zip(v) {
                *acc += s * w[i].abs() * x;
            }
        }
        best = best.max(target.norm(&sum));
    }
    best
}

fn sv_weighted(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=12);
    let m = gen::measure(rng, &space, 4, true);
    let f = gen::function(rng, &space, 0.2);
    let fast = qbfs::l1w(m.clone()).qnorm(&f)?;
    let slow = weighted_bruteforce(&m, f.values());
    Ok(Outcome::new(
        fast,
        slow,
        (fast - slow).abs() <= tol * slow.max(1.0),
        json!({"measure": m.spec(), "f": f.values()}),
    ))
}

fn sv_subadditive(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=12);
    let m = gen::measure(rng, &space, 4, true);
    let a = gen::set(rng, space.len());
    let b = gen::set(rng, space.len());
    let u = a.union(&b)?;
    let (sa, sb, su) = (m.semivariation(&a)?, m.semivariation(&b)?, m.semivariation(&u)?);
    let pass = su <= (sa + sb) * (1.0 + tol) + tol && sa <= su * (1.0 + tol) + tol;
    Ok(Outcome::new(su, sa + sb, pass, json!({"measure": m.spec(), "a": a.mask(), "b": b.mask()})))
}

fn sv_rybakov(rng: &mut Rng8, _tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=10);
    let m = gen::measure(rng, &space, 4, true);
    let ctrl = m.rybakov()?;
    let mut mismatches = 0;
    for i in 0..space.len() {
        let single = AtomSet::from_indices(space.len(), [i])?;
        if (ctrl.weights[i] == 0.0) != m.is_m_null(&single)? {
            mismatches += 1;
        }
    }
    let a = gen::set(rng, space.len());
    let mu_a: f64 = a.indices().map(|i| ctrl.weights[i]).sum();
    if (mu_a == 0.0) != m.is_m_null(&a)? {
        mismatches += 1;
    }
    Ok(Outcome::new(
        mismatches as f64,
        0.0,
        mismatches == 0,
        json!({"measure": m.spec(), "ystar": ctrl.ystar, "set": a.mask()}),
    ))
}

fn sv_layer_cake(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=12);
    let m = VectorMeasure::new(
        space.clone(),
        TargetNorm::new(1, NormKind::L1)?,
        space.weights().iter().map(|w| vec![*w]).collect(),
    )?;
    let f = gen::function(rng, &space, 0.2);
    let choquet = qbfs::l1_semivar(m).qnorm(&f)?;
    let direct = qbfs::l1_mu(space.clone()).qnorm(&f)?;
    Ok(Outcome::new(
        choquet,
        direct,
        (choquet - direct).abs() <= tol * direct.max(1e-300),
        json!({"space": &*space, "f": f.values()}),
    ))
}

fn orlicz_lp_oracle(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=10);
    let p = *[1.0, 1.5, 2.0, 3.0].choose(rng).expect("non-empty");
    let base = qbfs::l1_mu(space.clone());
    let phi = YoungFunction::power(p)?;
    let f = gen::function(rng, &space, 0.2);
    let lux = OrliczSpace::new(base.clone(), phi.clone()).luxemburg(&f)?;
    let closed: f64 = f
        .values()
        .iter()
        .zip(space.weights())
        .map(|(v, w)| v.abs().powf(p) * w)
        .sum::<f64>()
        .powf(1.0 / p);
    Ok(Outcome::new(lux, closed, rel_eq(lux, closed, tol), case(&space, &base, Some(&phi), &[&f])))
}

fn base_and_phi(rng: &mut Rng8, atoms: std::ops::RangeInclusive<usize>) -> (SpaceRef, QuasiNormedSpace, YoungFunction) {
    let space = gen::space(rng, atoms);
    let base = gen::base(rng, &space);
    let phi = gen::young(rng);
    (space, base, phi)
}

fn lem_linf_i(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let (space, base, phi) = base_and_phi(rng, 1..=8);
    let a = gen::nonempty_set(rng, space.len());
    let os = tuned(&base, &phi);
    let formula = os.char_norm(&a)?;
    let lux = os.luxemburg(&SimpleFn::indicator(space.clone(), &a)?)?;
    Ok(Outcome::new(
        formula,
        lux,
        rel_eq(formula, lux, tol),
        json!({"case": case(&space, &base, Some(&phi), &[]), "set": a.mask()}),
    ))
}

fn lem_linf_ii(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let (space, base, phi) = base_and_phi(rng, 1..=8);
    let f = gen::function(rng, &space, 0.2);
    let (lhs, rhs) = tuned(&base, &phi).linf_embedding_bound(&f)?;
    Ok(Outcome::new(lhs, rhs, le(lhs, rhs, tol), case(&space, &base, Some(&phi), &[&f])))
}

fn orlicz_embedding(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let (space, base, phi) = base_and_phi(rng, 1..=8);
    let f = fit(&phi, gen::function(rng, &space, 0.2));
    let (lhs, rhs) = tuned(&base, &phi).base_embedding_bound(&f)?;
    Ok(Outcome::new(lhs, rhs, le(lhs, rhs, tol), case(&space, &base, Some(&phi), &[&f])))
}

fn lem_bound_i(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let (space, base, phi) = base_and_phi(rng, 1..=8);
    let f = fit(&phi, gen::function(rng, &space, 0.2));
    let r = tuned(&base, &phi).norm_modular_relations(&f)?;
    let rhs = r.modular.max(1.0);
    Ok(Outcome::new(r.luxemburg, rhs, le(r.luxemburg, rhs, tol), case(&space, &base, Some(&phi), &[&f])))
}

fn family(rng: &mut Rng8, space: &SpaceRef, phi: &YoungFunction) -> Vec<SimpleFn> {
    let n = rng.gen_range(1..=5);
    (0..n).map(|_| fit(phi, gen::function(rng, space, 0.2))).collect()
}

fn lem_bound_ii(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let (space, base, phi) = base_and_phi(rng, 1..=6);
    let h = family(rng, &space, &phi);
    let t = tuned(&base, &phi).bounded_set_transfer(&h, None)?;
    let rhs = t.modular_sup.max(1.0);
    let refs: Vec<&SimpleFn> = h.iter().collect();
    Ok(Outcome::new(
        t.luxemburg_sup,
        rhs,
        le(t.luxemburg_sup, rhs, tol) && t.modular_bound_transfers,
        case(&space, &base, Some(&phi), &refs),
    ))
}

/// Rescales `f` so that its Luxemburg norm is `target`.
fn with_norm(os: &OrliczSpace, f: &SimpleFn, target: f64) -> Result<SimpleFn> {
    let l = os.luxemburg(f)?;
    Ok(f.scale(target / l))
}

fn outside_ball_target(rng: &mut Rng8, phi: &YoungFunction) -> f64 {
    if phi.domain_cap().is_finite() {
        rng.gen_range(1.001..3.0)
    } else {
        rng.gen_range(1.001..20.0)
    }
}

fn lem_modular_i(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let (space, base, phi) = base_and_phi(rng, 1..=8);
    let os = tuned(&base, &phi);
    let f = with_norm(&os, &gen::nonzero_function(rng, &space, 0.2), rng.gen_range(0.01..0.999))?;
    let r = os.norm_modular_relations(&f)?;
    let pass = r.luxemburg < 1.0 && le(r.modular, r.luxemburg, tol);
    Ok(Outcome::new(r.modular, r.luxemburg, pass, case(&space, &base, Some(&phi), &[&f])))
}

fn lem_modular_ii(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let (space, base, phi) = base_and_phi(rng, 1..=8);
    let os = tuned(&base, &phi);
    let target = outside_ball_target(rng, &phi);
    let f = with_norm(&os, &gen::nonzero_function(rng, &space, 0.2), target)?;
    let r = os.norm_modular_relations(&f)?;
    let pass = r.luxemburg > 1.0 && le(r.luxemburg, r.modular, tol);
    Ok(Outcome::new(r.luxemburg, r.modular, pass, case(&space, &base, Some(&phi), &[&f])))
}

fn lem_modular_iii(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let (space, base, phi) = base_and_phi(rng, 1..=6);
    let h = family(rng, &space, &phi);
    let t = tuned(&base, &phi).bounded_set_transfer(&h, None)?;
    let refs: Vec<&SimpleFn> = h.iter().collect();
    Ok(Outcome::new(
        t.psi_modular_sup,
        1.0,
        le(t.psi_modular_sup, 1.0, tol),
        json!({"case": case(&space, &base, Some(&phi), &refs), "m": t.m}),
    ))
}

fn thm_lqn_k(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=8);
    let base = gen::quasi_normed(rng, &space)?;
    let phi = gen::young(rng);
    let os = tuned(&base, &phi);
    let f = fit(&phi, gen::function(rng, &space, 0.2));
    let g = fit(&phi, gen::function(rng, &space, 0.2));
    let sum = fit(&phi, f.add(&g)?);
    // `fit` may have shrunk the sum; shrink f and g alike so sum = f + g.
    let ratio = if f.add(&g)?.sup_norm() > 0.0 { sum.sup_norm() / f.add(&g)?.sup_norm() } else { 1.0 };
    let (f, g) = (f.scale(ratio), g.scale(ratio));
    let lhs = os.luxemburg(&f.add(&g)?)?;
    let rhs = base.k() * (os.luxemburg(&f)? + os.luxemburg(&g)?);
    let c = rng.gen_range(0.1..3.0);
    let nf = os.luxemburg(&f)?;
    let homogeneous = rel_eq(os.luxemburg(&f.scale(c))?, c * nf, tol) || nf == 0.0;
    Ok(Outcome::new(
        lhs,
        rhs,
        lhs <= rhs * (1.0 + tol) && homogeneous,
        json!({"case": case(&space, &base, Some(&phi), &[&f, &g]), "k": base.k(), "c": c}),
    ))
}

fn thm_fatou_i(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let (space, base, phi) = base_and_phi(rng, 1..=8);
    let os = tuned(&base, &phi);
    let f = fit(&phi, gen::nonzero_function(rng, &space, 0.2));
    let l = os.luxemburg(&f)?;
    let m = os.modular(&f.scale(1.0 / l))?;
    Ok(Outcome::new(m, 1.0, le(m, 1.0, tol), case(&space, &base, Some(&phi), &[&f])))
}

fn thm_fatou_ii(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let (space, base, phi) = base_and_phi(rng, 1..=8);
    let os = tuned(&base, &phi);
    let target = if rng.gen_bool(0.25) { 1.0 } else { rng.gen_range(0.01..1.0) };
    let f = with_norm(&os, &gen::nonzero_function(rng, &space, 0.2), target)?;
    let r = os.norm_modular_relations(&f)?;
    Ok(Outcome::new(
        r.modular,
        r.luxemburg,
        le(r.modular, r.luxemburg, tol) && r.modular_below_norm_on_closed_ball != Some(false),
        case(&space, &base, Some(&phi), &[&f]),
    ))
}

fn thm_fatou_iii(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let (space, base, phi) = base_and_phi(rng, 1..=8);
    let os = tuned(&base, &phi).into_space();
    let f = fit(&phi, gen::nonzero_function(rng, &space, 0.2));
    let chain = gen::increasing_chain(rng, &f);
    let (sup, full, pass) = chain_outcome(&os, &f, &chain, tol)?;
    Ok(Outcome::new(sup, full, pass && os.tags().sigma_fatou, case(&space, &base, Some(&phi), &[&f])))
}

/// `(sequence, expected to reach zero)`: `f ρⁿ` until `ρⁿ < 1e-12`, or
/// `f (1 + ρⁿ)`, or a constant sequence.
fn null_or_not(rng: &mut Rng8, f: &SimpleFn) -> (Vec<SimpleFn>, bool) {
    let rho: f64 = rng.gen_range(0.2..0.8);
    let n = ((1e-12f64).ln() / rho.ln()).ceil() as i32 + 1;
    match rng.gen_range(0..3) {
        0 => ((0..n).map(|k| f.scale(rho.powi(k))).collect(), true),
        1 => ((0..n).map(|k| f.scale(1.0 + rho.powi(k))).collect(), false),
        _ => (vec![f.clone(); 5], false),
    }
}

fn delta2_phi(rng: &mut Rng8) -> Result<YoungFunction> {
    if rng.gen_bool(0.5) {
        YoungFunction::power(rng.gen_range(1.0..4.0))
    } else {
        YoungFunction::power_log(1.0, 1.0)
    }
}

fn thm_delta2_ii(rng: &mut Rng8, _tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=8);
    let base = gen::base(rng, &space);
    let phi = delta2_phi(rng)?;
    let f = gen::nonzero_function(rng, &space, 0.2);
    let (seq, null) = null_or_not(rng, &f);
    let r = tuned(&base, &phi).delta2_consequences(&seq, None)?;
    Ok(Outcome::new(
        *r.luxemburg.last().unwrap_or(&0.0),
        *r.modular.last().unwrap_or(&0.0),
        r.equivalence_holds && r.luxemburg_to_zero == null,
        json!({"case": case(&space, &base, Some(&phi), &[&f]), "null": null, "len": seq.len()}),
    ))
}

fn thm_delta2_iii(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=8);
    let base = gen::base(rng, &space);
    let phi = delta2_phi(rng)?;
    let f = gen::nonzero_function(rng, &space, 0.2).abs();
    let chain = gen::increasing_chain(rng, &f);
    let r = tuned(&base, &phi).delta2_consequences(&[], Some((&chain, &f)))?;
    let decreasing = r
        .chain_residuals
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + tol) + tol);
    Ok(Outcome::new(
        *r.chain_residuals.last().unwrap_or(&0.0),
        0.0,
        decreasing && r.chain_converges == Some(true) && base.tags().sigma_order_continuous,
        case(&space, &base, Some(&phi), &[&f]),
    ))
}

fn thm_lconvex(rng: &mut Rng8, _tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 2..=6);
    let base = qbfs::l1_mu(space.clone());
    let seed = rng.gen();
    let cert = l_convexity_search(&base, 0.49, LCONVEX_TRIALS, 8, seed)?;
    let phi = YoungFunction::power(2.0)?;
    let delta = l_convexity_transfer(&cert, &phi)?;
    let os = OrliczSpace::new(base.clone(), phi.clone()).into_space();
    let r = l_convexity_search(&os, delta, LCONVEX_TRIALS, 8, seed ^ 1)?;
    Ok(Outcome::new(
        r.witness.as_ref().map_or(0.0, |w| w.max_part_norm / w.f_norm),
        delta,
        r.pass(),
        json!({"space": &*space, "delta": delta, "seed": seed, "witness": r.witness}),
    ))
}

fn measure_and_phi(rng: &mut Rng8, atoms: std::ops::RangeInclusive<usize>) -> (SpaceRef, VectorMeasure, YoungFunction) {
    let space = gen::space(rng, atoms);
    let m = gen::measure(rng, &space, 4, false);
    let phi = gen::young(rng);
    (space, m, phi)
}

fn prop_vector_i(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let (space, m, phi) = measure_and_phi(rng, 1..=6);
    let fs: Vec<SimpleFn> = (0..3).map(|_| fit(&phi, gen::function(rng, &space, 0.2))).collect();
    let r = vector_orlicz_identities(&m, &phi, &fs)?;
    let worst = r
        .samples
        .iter()
        .map(|s| if s.exact > 0.0 { (s.at_extremal - s.exact).abs() / s.exact } else { 0.0 })
        .fold(0.0, f64::max);
    let grid = r.samples.iter().map(|s| s.grid_sup).fold(0.0, f64::max);
    let exact = r.samples.iter().map(|s| s.exact).fold(0.0, f64::max);
    let pass = r.samples.iter().all(|s| s.grid_is_lower_bound && s.extremal_matches) && worst <= tol;
    let refs: Vec<&SimpleFn> = fs.iter().collect();
    Ok(Outcome::new(grid, exact, pass, case(&space, &qbfs::l1w(m), Some(&phi), &refs)))
}

fn cor_semivar_battery(rng: &mut Rng8, _tol: f64) -> Result<Outcome> {
    let (space, m, phi) = measure_and_phi(rng, 1..=6);
    let os = tuned(&qbfs::l1_semivar(m.clone()), &phi);
    let mut fs: Vec<SimpleFn> = (0..3).map(|_| fit(&phi, gen::nonzero_function(rng, &space, 0.2))).collect();
    // one sample inside, one on, one outside the unit ball
    let targets = [rng.gen_range(0.05..0.99), 1.0, outside_ball_target(rng, &phi)];
    for (f, t) in fs.iter_mut().zip(targets) {
        *f = with_norm(&os, f, t)?;
    }
    let relations: Vec<_> = fs.iter().map(|f| os.norm_modular_relations(f)).collect::<Result<_>>()?;
    let transfer = os.bounded_set_transfer(&fs, None)?;
    let pass = relations.iter().all(|r| r.all_hold()) && transfer.all_hold();
    let refs: Vec<&SimpleFn> = fs.iter().collect();
    Ok(Outcome::new(
        transfer.psi_modular_sup,
        1.0,
        pass,
        case(&space, &qbfs::l1_semivar(m), Some(&phi), &refs),
    ))
}

fn cor_semivar_delta2(rng: &mut Rng8, _tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=6);
    let m = gen::measure(rng, &space, 4, false);
    let base = qbfs::l1_semivar(m);
    let phi = delta2_phi(rng)?;
    let f = gen::nonzero_function(rng, &space, 0.2);
    let (seq, null) = null_or_not(rng, &f);
    let r = tuned(&base, &phi).delta2_consequences(&seq, None)?;
    Ok(Outcome::new(
        *r.luxemburg.last().unwrap_or(&0.0),
        *r.modular.last().unwrap_or(&0.0),
        r.equivalence_holds && r.modular_to_zero == null,
        json!({"case": case(&space, &base, Some(&phi), &[&f]), "null": null}),
    ))
}

/// A normed base on `space`: `L¹(μ)` or `L¹_w(m)`.
fn normed_base(rng: &mut Rng8, space: &SpaceRef) -> QuasiNormedSpace {
    if rng.gen_bool(0.5) {
        qbfs::l1_mu(space.clone())
    } else {
        qbfs::l1w(gen::measure(rng, space, 3, false))
    }
}

fn power_pair(rng: &mut Rng8) -> Result<(YoungFunction, YoungFunction, f64)> {
    Ok((
        YoungFunction::power(rng.gen_range(1.0..4.0))?,
        YoungFunction::power(rng.gen_range(1.0..4.0))?,
        rng.gen_range(0.1..0.9),
    ))
}

fn cp_outcome(
    space: &SpaceRef,
    base: &QuasiNormedSpace,
    pair: (YoungFunction, YoungFunction, f64),
    f: &SimpleFn,
) -> Result<Outcome> {
    let (phi0, phi1, theta) = pair;
    let r = cp_orlicz_identity(base, &phi0, &phi1, theta, std::slice::from_ref(f))?;
    let row = &r.rows[0];
    Ok(Outcome::new(
        row.lower,
        row.upper,
        r.all_pass(),
        json!({
            "space": &**space, "base": base.spec(), "phi0": phi0.spec(), "phi1": phi1.spec(),
            "theta": theta, "f": f.values(), "oracle": row.oracle, "two_sided": row.two_sided,
        }),
    ))
}

fn cp_orlicz(rng: &mut Rng8, _tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 3..=3);
    let base = normed_base(rng, &space);
    let pair = power_pair(rng)?;
    let f = gen::nonzero_function(rng, &space, 0.0);
    cp_outcome(&space, &base, pair, &f)
}

fn cp_orlicz_wide(rng: &mut Rng8, _tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 10..=10);
    let base = gen::base(rng, &space);
    let pair = power_pair(rng)?;
    let f = gen::nonzero_function(rng, &space, 0.1);
    cp_outcome(&space, &base, pair, &f)
}

fn cp_collapse(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=6);
    let x = match rng.gen_range(0..3) {
        0 => qbfs::linf(space.clone()),
        _ => normed_base(rng, &space),
    };
    let theta = rng.gen_range(0.05..0.95);
    let inst = CalderonInstance::new(x.clone(), x.clone(), theta)?;
    let f = gen::function(rng, &space, 0.2);
    let (lam, fact) = calderon_norm_upper(&inst, &f, Method::Alternating)?;
    let norm = x.qnorm(&f)?;
    let valid = f.is_zero() || fact.check(&inst, &f)?.holds();
    Ok(Outcome::new(
        lam,
        norm,
        valid && (rel_eq(lam, norm, tol) || lam == norm),
        json!({"case": case(&space, &x, None, &[&f]), "theta": theta}),
    ))
}

pub const EXPONENT_TRIPLES: [(f64, f64, f64); 3] = [(1.0, 3.0, 0.5), (2.0, 4.0, 0.25), (1.5, 2.0, 0.75)];

fn cm_exponent(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=6);
    let m = gen::measure(rng, &space, 4, false);
    let base = qbfs::l1_semivar(m);
    let (p0, p1, theta) = *EXPONENT_TRIPLES.choose(rng).expect("non-empty");
    let cert = l_convexity_search(&base, 0.2, 200, 6, rng.gen())?;
    let space_p = interp::complex_interpolation(
        &base,
        &YoungFunction::power(p0)?,
        &YoungFunction::power(p1)?,
        theta,
        &cert,
    )?
    .with_tol(CHECK_TOL)?;
    let p = interp::interpolated_exponent(p0, p1, theta);
    let exponent_ok = space_p
        .phi()
        .power_exponent()
        .is_some_and(|q| (q - p).abs() <= 1e-12 * p);
    let lp = qbfs::power_space(&base, 1.0 / p)?;
    let f = gen::function(rng, &space, 0.2);
    let a = space_p.luxemburg(&f)?;
    let b = lp.qnorm(&f)?;
    Ok(Outcome::new(
        a,
        b,
        exponent_ok && (rel_eq(a, b, tol) || a == b),
        json!({"case": case(&space, &base, None, &[&f]), "p0": p0, "p1": p1, "theta": theta}),
    ))
}

fn power_commute(rng: &mut Rng8, tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 2..=3);
    let l1 = qbfs::l1_mu(space.clone());
    let x0 = qbfs::power_space(&l1, 1.0 / rng.gen_range(1.0..3.0))?;
    let x1 = if rng.gen_bool(0.5) {
        qbfs::power_space(&l1, 1.0 / rng.gen_range(1.0..3.0))?
    } else {
        qbfs::l1w(gen::measure(rng, &space, 3, false))
    };
    let theta = rng.gen_range(0.1..0.9);
    let r = rng.gen_range(0.5..2.0);
    let inst = CalderonInstance::new(x0.clone(), x1.clone(), theta)?;
    let f = gen::nonzero_function(rng, &space, 0.0);
    let (outer, inner) = power_commutation(&inst, r, &f)?;
    Ok(Outcome::new(
        outer,
        inner,
        rel_eq(outer, inner, tol),
        json!({"space": &*space, "x0": x0.spec(), "x1": x1.spec(), "theta": theta, "r": r, "f": f.values()}),
    ))
}

fn s_convex(rng: &mut Rng8, _tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 1..=8);
    let f = gen::function(rng, &space, 0.2);
    let g = gen::function(rng, &space, 0.2);
    let tuple = vec![f.clone(), g.clone()];
    // triangle inequality in L¹(μ) is 1-convexity with constant 1
    let l1 = s_convexity_check(&qbfs::l1_mu(space.clone()), 1.0, 1.0, std::slice::from_ref(&tuple))?;
    let single = s_convexity_check(&qbfs::l1_mu(space.clone()), 0.5, 1.0, &[vec![f.clone()]])?;
    let m = gen::measure(rng, &space, 4, false);
    let x = qbfs::l1_semivar(m);
    let semivar = s_convexity_check(&x, 0.5, 1.0, &[tuple])?;
    let pass = l1.pass() && single.pass() && semivar.best_constant.is_finite();
    Ok(Outcome::new(
        semivar.best_constant,
        f64::INFINITY,
        pass,
        case(&space, &x, None, &[&f, &g]),
    ))
}

fn lconvex_semivar(rng: &mut Rng8, _tol: f64) -> Result<Outcome> {
    let space = gen::space(rng, 2..=6);
    let m = gen::measure(rng, &space, 4, false);
    let p = rng.gen_range(1.0..3.0);
    let x = qbfs::power_space(&qbfs::l1_semivar(m), 1.0 / p)?;
    let seed = rng.gen();
    let r = l_convexity_search(&x, 0.2, LCONVEX_TRIALS, 8, seed)?;
    Ok(Outcome::new(
        r.witness.as_ref().map_or(0.0, |w| w.max_part_norm / w.f_norm),
        0.2,
        r.pass(),
        json!({"space": &*space, "x": x.spec(), "seed": seed, "witness": r.witness}),
    ))
}
