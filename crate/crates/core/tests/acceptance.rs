//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails. Tolerances and instance counts are pinned here.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use orlicz_core::interp::{
    complex_interpolation, cp_orlicz_identity, interpolated_exponent, l_convexity_search,
    l_convexity_transfer,
};
use orlicz_core::qbfs::{self, QuasiNormedSpace};
use orlicz_core::verify::generators::{self as gen, BaseKind, Rng8, BASE_KINDS};
use orlicz_core::{
    AtomSet, AtomicMeasureSpace, NormKind, OrliczSpace, SimpleFn, TargetNorm, VectorMeasure,
    YoungFunction,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const SEED: u64 = 20_240_917;
const LUX_TOL: f64 = 1e-12;

struct Line {
    pass: bool,
    detail: String,
}

fn rng(criterion: u64) -> Rng8 {
    let mut r = Rng8::seed_from_u64(SEED);
    r.set_stream(criterion);
    r
}

fn orlicz(base: &QuasiNormedSpace, phi: &YoungFunction) -> OrliczSpace {
    OrliczSpace::new(base.clone(), phi.clone()).with_tol(LUX_TOL).unwrap()
}

/// Keeps `Φ(|f|)` finite for Young functions with a finite domain cap.
fn fit(phi: &YoungFunction, f: SimpleFn) -> SimpleFn {
    let limit = phi.domain_cap() / 8.0;
    let sup = f.sup_norm();
    if sup > limit {
        f.scale(limit / sup)
    } else {
        f
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn target_norm(kind: NormKind, v: &[f64]) -> f64 {
    match kind {
        NormKind::L1 => v.iter().map(|x| x.abs()).sum(),
        NormKind::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        NormKind::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
    }
}

/// `max over signs s of ‖Σ_{i∈A} sᵢ mᵢ‖` by enumerating all of `{±1}^A`.
fn semivariation_enumerated(m: &VectorMeasure, set: &AtomSet) -> f64 {
    let idx: Vec<usize> = set.indices().collect();
    let t = m.target();
    let mut best: f64 = 0.0;
    for mask in 0u64..(1u64 << idx.len()) {
        let mut sum = vec![0.0; t.dim];
        for (k, &i) in idx.iter().enumerate() {
            let s = if mask >> k & 1 == 1 { -1.0 } else { 1.0 };
            for (acc, x) in sum.iter_mut().zip(&m.atom_vectors()[i]) {
                *acc += s * x;
            }
        }
        best = best.max(target_norm(t.norm, &sum));
    }
    best
}

fn c1_semivariation() -> Line {
    let mut r = rng(1);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let space = gen::space(&mut r, 1..=12);
        let m = gen::measure(&mut r, &space, 4, true);
        let a = gen::set(&mut r, space.len());
        let fast = m.semivariation(&a).unwrap();
        let slow = semivariation_enumerated(&m, &a);
        worst = worst.max((fast - slow).abs() / slow.max(1.0));
    }
    let secs = start.elapsed().as_secs_f64();
    Line {
        pass: worst <= 1e-12 && secs < 10.0,
        detail: format!("500 instances, worst deviation {worst:.1e} (tol 1e-12), {secs:.2} s (limit 10 s)"),
    }
}

fn c2_classical() -> Line {
    let mut r = rng(2);
    let mut worst_cake: f64 = 0.0;
    for _ in 0..200 {
        let space = gen::space(&mut r, 1..=12);
        let c: Vec<f64> = (0..space.len()).map(|_| r.gen_range(0.01..5.0)).collect();
        let m = VectorMeasure::new(
            space.clone(),
            TargetNorm::new(1, NormKind::L1).unwrap(),
            c.iter().map(|x| vec![*x]).collect(),
        )
        .unwrap();
        let f = gen::function(&mut r, &space, 0.2);
        let choquet = qbfs::l1_semivar(m).qnorm(&f).unwrap();
        let direct: f64 = f.values().iter().zip(&c).map(|(v, w)| v.abs() * w).sum();
        worst_cake = worst_cake.max((choquet - direct).abs() / direct.max(1.0));
    }
    let mut worst_lp: f64 = 0.0;
    for p in [1.0, 1.5, 2.0, 3.0] {
        for _ in 0..50 {
            let space = gen::space(&mut r, 1..=10);
            let f = gen::function(&mut r, &space, 0.2);
            let lux = orlicz(&qbfs::l1_mu(space.clone()), &YoungFunction::power(p).unwrap())
                .luxemburg(&f)
                .unwrap();
            let closed = f
                .values()
                .iter()
                .zip(space.weights())
                .map(|(v, w)| v.abs().powf(p) * w)
                .sum::<f64>()
                .powf(1.0 / p);
            worst_lp = worst_lp.max(rel_err(lux, closed));
        }
    }
    Line {
        pass: worst_cake <= 1e-12 && worst_lp <= 1e-9,
        detail: format!("layer cake worst {worst_cake:.1e} (tol 1e-12); t^p Luxemburg worst {worst_lp:.1e} (tol 1e-9)"),
    }
}

fn c3_char_norm() -> Line {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let space = gen::space(&mut r, 1..=8);
        let base = gen::base_of_kind(&mut r, &space, BASE_KINDS[i % 4]);
        let phi = gen::young(&mut r);
        let a = gen::nonempty_set(&mut r, space.len());
        let os = orlicz(&base, &phi);
        let formula = os.char_norm(&a).unwrap();
        let lux = os.luxemburg(&SimpleFn::indicator(space.clone(), &a).unwrap()).unwrap();
        worst = worst.max(rel_err(formula, lux));
    }
    Line {
        pass: worst <= 1e-9,
        detail: format!("100 triples over 4 base kinds, worst {worst:.1e} (tol 1e-9)"),
    }
}

fn c4_norm_modular() -> Line {
    const TOL: f64 = 1e-9;
    let mut r = rng(4);
    let mut failures = 0;
    let (mut inside, mut outside) = (0, 0);
    for _ in 0..1000 {
        let space = gen::space(&mut r, 1..=8);
        let base = gen::quasi_normed(&mut r, &space).unwrap();
        let phi = gen::young(&mut r);
        let os = orlicz(&base, &phi);
        let f = fit(&phi, gen::nonzero_function(&mut r, &space, 0.2));
        // spread norms across (0,1), exactly 1 and beyond 1
        let target = match r.gen_range(0..4) {
            0 => r.gen_range(0.01..1.0),
            1 => 1.0,
            2 if phi.domain_cap().is_finite() => r.gen_range(1.001..3.0),
            2 => r.gen_range(1.001..20.0),
            _ => os.luxemburg(&f).unwrap(),
        };
        let f = f.scale(target / os.luxemburg(&f).unwrap());
        let l = os.luxemburg(&f).unwrap();
        let m = os.modular(&f).unwrap();
        let slack = |x: f64| TOL * x.max(1.0);
        let mut ok = l <= m.max(1.0) + slack(m);
        if l < 1.0 {
            inside += 1;
            ok &= m <= l + slack(l);
        }
        if l > 1.0 {
            outside += 1;
            ok &= m >= l - slack(l);
        }
        if l <= 1.0 {
            ok &= m <= l + slack(l);
        }
        if !ok {
            failures += 1;
        }
    }
    Line {
        pass: failures == 0,
        detail: format!("1000 instances ({inside} with L<1, {outside} with L>1), {failures} failures (tol 1e-9)"),
    }
}

fn c5_fatou() -> Line {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for i in 0..200 {
        let space = gen::space(&mut r, 1..=8);
        let base = gen::base_of_kind(&mut r, &space, BASE_KINDS[i % 4]);
        if !base.tags().sigma_fatou {
            continue;
        }
        count += 1;
        let phi = gen::young(&mut r);
        let os = orlicz(&base, &phi);
        let f = fit(&phi, gen::nonzero_function(&mut r, &space, 0.2));
        let chain = gen::increasing_chain(&mut r, &f);
        let sup = chain.iter().map(|g| os.luxemburg(g).unwrap()).fold(0.0, f64::max);
        worst = worst.max(rel_err(sup, os.luxemburg(&f).unwrap()));
    }
    Line {
        pass: count == 200 && worst <= 1e-9,
        detail: format!("{count} chains over fatou-tagged bases, worst {worst:.1e} (tol 1e-9)"),
    }
}

/// Tail test: the last term is below `1e-8`.
fn tends_to_zero(seq: &[f64]) -> bool {
    seq.last().is_some_and(|x| *x <= 1e-8)
}

fn c6_delta2() -> Line {
    let mut r = rng(6);
    let mut mismatches = 0;
    for _ in 0..100 {
        let space = gen::space(&mut r, 1..=8);
        let base = gen::base(&mut r, &space);
        let phi = if r.gen_bool(0.5) {
            YoungFunction::power(r.gen_range(1.0..4.0)).unwrap()
        } else {
            YoungFunction::power_log(1.0, 1.0).unwrap()
        };
        let os = orlicz(&base, &phi);
        let f = gen::nonzero_function(&mut r, &space, 0.2);
        let rho: f64 = r.gen_range(0.2..0.8);
        let null = r.gen_bool(0.5);
        let seq: Vec<SimpleFn> = (0..200)
            .map(|k| f.scale(if null { rho.powi(k) } else { 1.0 + rho.powi(k) }))
            .collect();
        let lux: Vec<f64> = seq.iter().map(|g| os.luxemburg(g).unwrap()).collect();
        let modular: Vec<f64> = seq.iter().map(|g| os.modular(g).unwrap()).collect();
        if tends_to_zero(&lux) != tends_to_zero(&modular) || tends_to_zero(&lux) != null {
            mismatches += 1;
        }
    }
    let exp_flagged = [1.0, 1.5, 2.0]
        .iter()
        .all(|a| !YoungFunction::exp(*a).unwrap().is_delta2());
    let powers_ok = [1.0, 2.0, 3.5].iter().all(|p| YoungFunction::power(*p).unwrap().is_delta2())
        && YoungFunction::power_log(1.0, 1.0).unwrap().is_delta2();
    Line {
        pass: mismatches == 0 && exp_flagged && powers_ok,
        detail: format!(
            "100 sequences, {mismatches} mismatches (tail 1e-8); exp flagged non-Δ2: {exp_flagged}; powers flagged Δ2: {powers_ok}"
        ),
    }
}

fn power_pair(r: &mut Rng8) -> (YoungFunction, YoungFunction, f64) {
    (
        YoungFunction::power(r.gen_range(1.0..4.0)).unwrap(),
        YoungFunction::power(r.gen_range(1.0..4.0)).unwrap(),
        r.gen_range(0.1..0.9),
    )
}

fn c7_calderon() -> Line {
    const TOL: f64 = 1e-6;
    let mut r = rng(7);
    let mut worst_two: f64 = 0.0;
    let mut invalid = 0;
    for _ in 0..50 {
        let space = gen::space(&mut r, 3..=3);
        // the identity is isometric over normed bases
        let kind = *[BaseKind::L1mu, BaseKind::L1w].choose(&mut r).unwrap();
        let base = gen::base_of_kind(&mut r, &space, kind);
        let (p0, p1, theta) = power_pair(&mut r);
        let f = gen::nonzero_function(&mut r, &space, 0.0);
        let row = &cp_orlicz_identity(&base, &p0, &p1, theta, &[f]).unwrap().rows[0];
        let oracle = row.oracle.expect("three atoms admit the grid oracle");
        worst_two = worst_two.max(rel_err(row.upper, row.lower)).max(rel_err(oracle, row.lower));
        if !row.factorization_valid {
            invalid += 1;
        }
    }
    let mut one_sided_fail = 0;
    for _ in 0..200 {
        let space = gen::space(&mut r, 10..=10);
        let base = gen::base(&mut r, &space);
        let (p0, p1, theta) = power_pair(&mut r);
        let f = gen::nonzero_function(&mut r, &space, 0.1);
        let row = &cp_orlicz_identity(&base, &p0, &p1, theta, &[f]).unwrap().rows[0];
        if !(row.lower <= row.upper * (1.0 + TOL) && row.factorization_valid) {
            one_sided_fail += 1;
        }
    }
    Line {
        pass: worst_two <= TOL && invalid == 0 && one_sided_fail == 0,
        detail: format!(
            "3 atoms: 50 instances, worst spread {worst_two:.1e} (tol 1e-6), {invalid} invalid factorizations; 10 atoms: {one_sided_fail}/200 one-sided failures"
        ),
    }
}

fn c8_interpolation() -> Line {
    let mut r = rng(8);
    let triples = [(1.0, 3.0, 0.5), (2.0, 4.0, 0.25), (1.5, 2.0, 0.75)];
    let mut worst: f64 = 0.0;
    let mut refused = 0;
    for i in 0..200 {
        let (p0, p1, theta) = triples[i % 3];
        let space = gen::space(&mut r, 1..=6);
        let base = qbfs::l1_semivar(gen::measure(&mut r, &space, 4, false));
        let cert = l_convexity_search(&base, 0.2, 200, 6, r.gen()).unwrap();
        let phi0 = YoungFunction::power(p0).unwrap();
        let phi1 = YoungFunction::power(p1).unwrap();
        let Ok(xp) = complex_interpolation(&base, &phi0, &phi1, theta, &cert) else {
            refused += 1;
            continue;
        };
        let xp = xp.with_tol(LUX_TOL).unwrap();
        let p = interpolated_exponent(p0, p1, theta);
        let lp = qbfs::power_space(&base, 1.0 / p).unwrap();
        let f = gen::function(&mut r, &space, 0.2);
        worst = worst.max(rel_err(xp.luxemburg(&f).unwrap(), lp.qnorm(&f).unwrap()));
    }
    Line {
        pass: worst <= 1e-9 && refused == 0,
        detail: format!("200 functions over 3 exponent triples, worst {worst:.1e} (tol 1e-9), {refused} refused"),
    }
}

fn c9_l_convexity() -> Line {
    const EPS: f64 = 0.49;
    const TRIALS: u64 = 100_000;
    let start = Instant::now();
    let space = Arc::new(AtomicMeasureSpace::with_weights(vec![0.5, 1.0, 2.0, 0.25, 1.5]).unwrap());
    let base = qbfs::l1_mu(space);
    let cert = l_convexity_search(&base, EPS, 10_000, 8, SEED).unwrap();
    let phi = YoungFunction::power(2.0).unwrap();
    let expected = 1.0 - (1.0 - EPS).powf(0.25);
    let delta = match l_convexity_transfer(&cert, &phi) {
        Ok(d) => d,
        Err(e) => {
            return Line { pass: false, detail: format!("transfer refused: {e}") };
        }
    };
    let os = orlicz(&base, &phi).into_space();
    let report = l_convexity_search(&os, delta, TRIALS, 8, SEED + 1).unwrap();
    let witnesses = usize::from(report.witness.is_some());
    Line {
        pass: cert.pass() && (delta - expected).abs() <= 1e-12 && report.pass(),
        detail: format!(
            "δ = {delta:.6} (expected {expected:.6}), {TRIALS} trials, {witnesses} witnesses, {:.1} s",
            start.elapsed().as_secs_f64()
        ),
    }
}

fn c10_quasi_triangle() -> Line {
    let mut r = rng(10);
    let mut violations = 0;
    let mut worst_excess = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let space = gen::space(&mut r, 1..=8);
        let base = gen::quasi_normed(&mut r, &space).unwrap();
        let phi = gen::young(&mut r);
        let os = orlicz(&base, &phi);
        let f = fit(&phi, gen::function(&mut r, &space, 0.2)).scale(0.5);
        let g = fit(&phi, gen::function(&mut r, &space, 0.2)).scale(0.5);
        let denom = os.luxemburg(&f).unwrap() + os.luxemburg(&g).unwrap();
        if denom == 0.0 {
            continue;
        }
        let constant = os.luxemburg(&f.add(&g).unwrap()).unwrap() / denom;
        worst_excess = worst_excess.max(constant - base.k());
        if constant > base.k() + 1e-9 {
            violations += 1;
        }
    }
    Line {
        pass: violations == 0,
        detail: format!(
            "1000 pairs, {violations} violations, max(empirical constant − K) = {worst_excess:.3e} (tol 1e-9)"
        ),
    }
}

type Criterion = (&'static str, fn() -> Line);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("semivariation oracle equivalence", c1_semivariation),
        ("classical collapse", c2_classical),
        ("indicator norm formula", c3_char_norm),
        ("norm/modular battery", c4_norm_modular),
        ("Fatou transfer", c5_fatou),
        ("Δ2 convergence equivalence", c6_delta2),
        ("Calderón product of Orlicz spaces", c7_calderon),
        ("interpolation exponent identity", c8_interpolation),
        ("L-convexity transfer", c9_l_convexity),
        ("quasi-triangle constant inheritance", c10_quasi_triangle),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let line = run();
        all &= line.pass;
        println!(
            "{} criterion {:>2} {name}: {}",
            if line.pass { "PASS" } else { "FAIL" },
            i + 1,
            line.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
