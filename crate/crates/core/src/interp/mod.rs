//! Calderón products, the Orlicz factorization, convexity diagnostics and
//! complex interpolation of Orlicz spaces through their Calderón product.

mod calderon;
mod convexity;

pub use calderon::{
    calderon_norm_upper, cp_orlicz_identity, orlicz_factorize, power_commutation,
    CalderonInstance, CpReport, CpRow, Factorization, FactorizationCheck, Method,
    ALTERNATING_MAX_SWEEPS, BALL_TOL, CP_TOL, GRID_MAX_ATOMS, POINTWISE_TOL,
};
pub use convexity::{
    delta_for_doubling, l_convexity_search, l_convexity_transfer, s_convexity_check,
    LConvexityReport, LConvexityWitness, SConvexityReport,
};

use crate::error::{Error, Result};
use crate::orlicz::OrliczSpace;
use crate::qbfs::QuasiNormedSpace;
use crate::young::{calderon_combine, YoungFunction};

/// `[X^{Φ₀}, X^{Φ₁}]_θ`, realized as `X^Φ` with `Φ⁻¹ = (Φ₀⁻¹)^{1−θ}(Φ₁⁻¹)^θ`.
///
/// The complex method agrees with the Calderón product (up to equivalence of
/// quasi-norms) when both Young functions are Δ2 and `X` is L-convex; the
/// certificate must come from a passing [`l_convexity_search`] on `base`.
pub fn complex_interpolation(
    base: &QuasiNormedSpace,
    phi0: &YoungFunction,
    phi1: &YoungFunction,
    theta: f64,
    certificate: &LConvexityReport,
) -> Result<OrliczSpace> {
    for (name, phi) in [("phi0", phi0), ("phi1", phi1)] {
        if !phi.is_delta2() {
            return Err(Error::PreconditionViolation(format!("{name} is not flagged Δ2")));
        }
    }
    if !certificate.pass() || certificate.space != base.name() {
        return Err(Error::PreconditionViolation(
            "no passing L-convexity certificate for this base".into(),
        ));
    }
    Ok(OrliczSpace::new(base.clone(), calderon_combine(phi0, phi1, theta)?))
}

/// `p` with `1/p = (1−θ)/p₀ + θ/p₁`.
pub fn interpolated_exponent(p0: f64, p1: f64, theta: f64) -> f64 {
    1.0 / ((1.0 - theta) / p0 + theta / p1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbfs::{l1_mu, l1_semivar, power_space};
    use crate::space::{AtomicMeasureSpace, SimpleFn};
    use crate::vecmeasure::{NormKind, TargetNorm, VectorMeasure};
    use approx::assert_relative_eq;
    use std::sync::Arc;

    #[test]
    fn semivariation_lp_scale() {
        let s = Arc::new(AtomicMeasureSpace::uniform(3).unwrap());
        let m = VectorMeasure::new(
            s.clone(),
            TargetNorm::new(2, NormKind::L2).unwrap(),
            vec![vec![1.0, 0.0], vec![0.6, 0.8], vec![-0.3, 0.2]],
        )
        .unwrap();
        let base = l1_semivar(m);
        let cert = l_convexity_search(&base, 0.3, 200, 4, 9).unwrap();
        let (p0, p1, theta) = (1.0, 3.0, 0.5);
        let phi0 = YoungFunction::power(p0).unwrap();
        let phi1 = YoungFunction::power(p1).unwrap();
        let space = complex_interpolation(&base, &phi0, &phi1, theta, &cert).unwrap();
        let p = interpolated_exponent(p0, p1, theta);
        assert_relative_eq!(p, 1.5, max_relative = 1e-15);
        assert_relative_eq!(space.phi().power_exponent().unwrap(), p, max_relative = 1e-12);
        let lp = power_space(&base, 1.0 / p).unwrap();
        let g = SimpleFn::new(s, vec![0.4, -2.0, 1.1]).unwrap();
        assert_relative_eq!(space.luxemburg(&g).unwrap(), lp.qnorm(&g).unwrap(), max_relative = 1e-9);
    }

    #[test]
    fn preconditions() {
        let s = Arc::new(AtomicMeasureSpace::uniform(2).unwrap());
        let base = l1_mu(s);
        let cert = l_convexity_search(&base, 0.4, 50, 3, 0).unwrap();
        let sq = YoungFunction::power(2.0).unwrap();
        let exp = YoungFunction::exp(1.0).unwrap();
        assert!(complex_interpolation(&base, &sq, &exp, 0.5, &cert).is_err());
        let same = complex_interpolation(&base, &sq, &sq, 0.7, &cert).unwrap();
        assert_eq!(same.phi(), &sq);
        let mut bad = cert.clone();
        bad.space = "other".into();
        assert!(complex_interpolation(&base, &sq, &sq, 0.5, &bad).is_err());
    }
}
