//! Young functions: validated convex gauges `Φ : [0,∞) → [0,∞)`.
//!
//! A [`YoungFunction`] is built from a [`YoungSpec`] (the JSON-facing
//! description) and is immutable afterwards. Parametric families evaluate and
//! invert in closed form where one exists; the rest fall back to bracketing
//! bisection with a relative bracket width of `1e-12`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::bisect::solve_increasing;
use crate::error::{Error, Result};

/// Relative bracket width for every bisection-based inverse or forward solve.
pub const INVERSION_TOL: f64 = 1e-12;

/// Largest value the exponential families are allowed to reach.
const VALUE_CEILING: f64 = 1e300;

/// JSON description of a Young function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum YoungSpec {
    /// `t^p`, `p ≥ 1`.
    Power { p: f64 },
    /// `t^p · log(1+t)^q`, `p ≥ 1`, `q ≥ 0`.
    PowerLog { p: f64, q: f64 },
    /// `exp(t^a) − 1`, `a ≥ 1`.
    Exp { a: f64 },
    /// Piecewise-linear interpolation of `points`, continued with
    /// `terminal_slope` past the last breakpoint.
    Tabulated {
        points: Vec<[f64; 2]>,
        terminal_slope: f64,
    },
    /// `Ψ(t/M)`.
    Scaled {
        inner: Box<YoungSpec>,
        #[serde(rename = "M")]
        m: f64,
    },
    /// The function whose inverse is `(Φ₀⁻¹)^{1-θ} (Φ₁⁻¹)^θ`.
    Calderon {
        phi0: Box<YoungSpec>,
        phi1: Box<YoungSpec>,
        theta: f64,
    },
}

impl YoungSpec {
    pub fn power(p: f64) -> Self {
        YoungSpec::Power { p }
    }
}

/// A violated Young-function axiom, reported by [`YoungFunction::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Diagnostic {
    OriginNotZero,
    NotStrictlyIncreasing,
    ConvexityViolated,
    NotDivergent,
    BadParameter(String),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::OriginNotZero => write!(f, "Φ(0) = 0 violated"),
            Diagnostic::NotStrictlyIncreasing => write!(f, "strict monotonicity violated"),
            Diagnostic::ConvexityViolated => write!(f, "convexity violated"),
            Diagnostic::NotDivergent => write!(f, "divergence violated"),
            Diagnostic::BadParameter(msg) => write!(f, "bad parameter: {msg}"),
        }
    }
}

/// Grid estimate of the Δ2 constant `sup Φ(2t)/Φ(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Delta2Estimate {
    /// Largest ratio observed on the grid.
    pub constant: f64,
    /// Heuristic Δ2 failure: the ratio keeps growing across the top decade.
    pub unbounded: bool,
    pub t_max: f64,
    pub n_grid: usize,
}

impl Delta2Estimate {
    /// A constant valid for `Φ(ct) ≤ C Φ(t)`, obtained by iterating the
    /// doubling bound `⌈log₂ c⌉` times.
    pub fn constant_for(&self, c: f64) -> Option<f64> {
        if self.unbounded || !(c > 0.0) {
            return None;
        }
        if c <= 1.0 {
            return Some(1.0);
        }
        let steps = c.log2().ceil() as i32;
        Some(self.constant.powi(steps))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Power {
        p: f64,
    },
    PowerLog {
        p: f64,
        q: f64,
    },
    Exp {
        a: f64,
    },
    Tabulated {
        ts: Vec<f64>,
        us: Vec<f64>,
        terminal_slope: f64,
    },
    Scaled {
        inner: Arc<YoungFunction>,
        m: f64,
    },
    Calderon {
        phi0: Arc<YoungFunction>,
        phi1: Arc<YoungFunction>,
        theta: f64,
    },
}

/// A validated Young function. Cheap to clone; safe to share across threads.
#[derive(Debug, Clone)]
pub struct YoungFunction {
    kind: Kind,
    domain_cap: f64,
    delta2: OnceLock<Result<Delta2Estimate>>,
}

impl PartialEq for YoungFunction {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl YoungFunction {
    fn from_kind(kind: Kind) -> Self {
        let mut phi = YoungFunction {
            kind,
            domain_cap: f64::INFINITY,
            delta2: OnceLock::new(),
        };
        phi.domain_cap = phi.compute_cap();
        phi
    }

    /// Checks every axiom and returns either the function or the complete list
    /// of violations.
    pub fn validate(spec: &YoungSpec) -> std::result::Result<YoungFunction, Vec<Diagnostic>> {
        let mut diags = Vec::new();
        let phi = match spec {
            YoungSpec::Power { p } => {
                let p = *p;
                if !p.is_finite() {
                    diags.push(Diagnostic::BadParameter(format!("p = {p} is not finite")));
                } else if p <= 0.0 {
                    diags.push(Diagnostic::NotStrictlyIncreasing);
                    if p < 0.0 {
                        diags.push(Diagnostic::OriginNotZero);
                    } else {
                        diags.push(Diagnostic::OriginNotZero);
                        diags.push(Diagnostic::NotDivergent);
                    }
                } else if p < 1.0 {
                    diags.push(Diagnostic::ConvexityViolated);
                }
                YoungFunction::from_kind(Kind::Power { p })
            }
            YoungSpec::PowerLog { p, q } => {
                let (p, q) = (*p, *q);
                if !(p.is_finite() && q.is_finite()) {
                    diags.push(Diagnostic::BadParameter("p and q must be finite".into()));
                } else {
                    if q < 0.0 {
                        diags.push(Diagnostic::BadParameter(format!("q = {q} must be ≥ 0")));
                    }
                    if p <= 0.0 {
                        diags.push(Diagnostic::NotStrictlyIncreasing);
                    } else if p < 1.0 {
                        diags.push(Diagnostic::ConvexityViolated);
                    }
                }
                YoungFunction::from_kind(Kind::PowerLog { p, q })
            }
            YoungSpec::Exp { a } => {
                let a = *a;
                if !a.is_finite() || a <= 0.0 {
                    diags.push(Diagnostic::BadParameter(format!("a = {a} must be positive")));
                } else if a < 1.0 {
                    diags.push(Diagnostic::ConvexityViolated);
                }
                YoungFunction::from_kind(Kind::Exp { a })
            }
            YoungSpec::Tabulated {
                points,
                terminal_slope,
            } => {
                validate_table(points, *terminal_slope, &mut diags);
                YoungFunction::from_kind(Kind::Tabulated {
                    ts: points.iter().map(|p| p[0]).collect(),
                    us: points.iter().map(|p| p[1]).collect(),
                    terminal_slope: *terminal_slope,
                })
            }
            YoungSpec::Scaled { inner, m } => {
                if !(m.is_finite() && *m > 0.0) {
                    diags.push(Diagnostic::BadParameter(format!("M = {m} must be positive")));
                }
                match YoungFunction::validate(inner) {
                    Ok(inner) => YoungFunction::from_kind(Kind::Scaled {
                        inner: Arc::new(inner),
                        m: *m,
                    }),
                    Err(mut d) => {
                        diags.append(&mut d);
                        return Err(diags);
                    }
                }
            }
            YoungSpec::Calderon { phi0, phi1, theta } => {
                if !(*theta > 0.0 && *theta < 1.0) {
                    diags.push(Diagnostic::BadParameter(format!(
                        "theta = {theta} must lie in (0, 1)"
                    )));
                }
                let p0 = YoungFunction::validate(phi0);
                let p1 = YoungFunction::validate(phi1);
                match (p0, p1) {
                    (Ok(a), Ok(b)) if diags.is_empty() => {
                        return calderon_combine(&a, &b, *theta).map_err(|e| match e {
                            Error::InvalidYoung(d) => d,
                            other => vec![Diagnostic::BadParameter(other.to_string())],
                        });
                    }
                    (a, b) => {
                        diags.extend(a.err().unwrap_or_default());
                        diags.extend(b.err().unwrap_or_default());
                        return Err(diags);
                    }
                }
            }
        };
        if diags.is_empty() {
            phi.sample_shape(&mut diags);
        }
        if diags.is_empty() {
            Ok(phi)
        } else {
            Err(diags)
        }
    }

    /// [`validate`](Self::validate) with the diagnostics folded into an [`Error`].
    pub fn from_spec(spec: &YoungSpec) -> Result<YoungFunction> {
        YoungFunction::validate(spec).map_err(Error::InvalidYoung)
    }

    pub fn power(p: f64) -> Result<YoungFunction> {
        YoungFunction::from_spec(&YoungSpec::Power { p })
    }

    pub fn power_log(p: f64, q: f64) -> Result<YoungFunction> {
        YoungFunction::from_spec(&YoungSpec::PowerLog { p, q })
    }

    pub fn exp(a: f64) -> Result<YoungFunction> {
        YoungFunction::from_spec(&YoungSpec::Exp { a })
    }

    pub fn tabulated(points: Vec<[f64; 2]>, terminal_slope: f64) -> Result<YoungFunction> {
        YoungFunction::from_spec(&YoungSpec::Tabulated {
            points,
            terminal_slope,
        })
    }

    /// The JSON-facing description of this function.
    pub fn spec(&self) -> YoungSpec {
        match &self.kind {
            Kind::Power { p } => YoungSpec::Power { p: *p },
            Kind::PowerLog { p, q } => YoungSpec::PowerLog { p: *p, q: *q },
            Kind::Exp { a } => YoungSpec::Exp { a: *a },
            Kind::Tabulated {
                ts,
                us,
                terminal_slope,
            } => YoungSpec::Tabulated {
                points: ts.iter().zip(us).map(|(&t, &u)| [t, u]).collect(),
                terminal_slope: *terminal_slope,
            },
            Kind::Scaled { inner, m } => YoungSpec::Scaled {
                inner: Box::new(inner.spec()),
                m: *m,
            },
            Kind::Calderon { phi0, phi1, theta } => YoungSpec::Calderon {
                phi0: Box::new(phi0.spec()),
                phi1: Box::new(phi1.spec()),
                theta: *theta,
            },
        }
    }

    /// Largest argument guaranteed not to overflow.
    pub fn domain_cap(&self) -> f64 {
        self.domain_cap
    }

    fn compute_cap(&self) -> f64 {
        match &self.kind {
            Kind::Power { .. } | Kind::PowerLog { .. } | Kind::Tabulated { .. } => f64::INFINITY,
            Kind::Exp { a } => VALUE_CEILING.ln_1p().powf(1.0 / a),
            Kind::Scaled { inner, m } => inner.domain_cap * m,
            Kind::Calderon { phi0, phi1, .. } => {
                if phi0.domain_cap.is_infinite() && phi1.domain_cap.is_infinite() {
                    f64::INFINITY
                } else {
                    self.inverse(VALUE_CEILING).unwrap_or(0.0)
                }
            }
        }
    }

    /// `Φ(t)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "Young functions take non-negative arguments, got {t}"
            )));
        }
        if t > self.domain_cap {
            return Err(Error::DomainOverflow {
                t,
                cap: self.domain_cap,
            });
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let value = match &self.kind {
            Kind::Power { p } => pow(t, *p),
            Kind::PowerLog { p, q } => pow(t, *p) * pow(t.ln_1p(), *q),
            Kind::Exp { a } => pow(t, *a).exp_m1(),
            Kind::Tabulated {
                ts,
                us,
                terminal_slope,
            } => piecewise(ts, us, *terminal_slope, t),
            Kind::Scaled { inner, m } => inner.eval(t / m)?,
            Kind::Calderon { .. } => {
                solve_increasing(|u| self.inverse(u), t, INVERSION_TOL, f64::MAX)?
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::DomainOverflow {
                t,
                cap: self.domain_cap,
            })
        }
    }

    /// `Φ⁻¹(u)`: the unique `t ≥ 0` with `Φ(t) = u`.
    pub fn inverse(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "Young inverses take non-negative arguments, got {u}"
            )));
        }
        if u == 0.0 {
            return Ok(0.0);
        }
        if !u.is_finite() {
            return Err(Error::DomainOverflow {
                t: u,
                cap: self.domain_cap,
            });
        }
        match &self.kind {
            Kind::Power { p } => Ok(pow(u, 1.0 / p)),
            Kind::Exp { a } => Ok(pow(u.ln_1p(), 1.0 / a)),
            Kind::Tabulated {
                ts,
                us,
                terminal_slope,
            } => Ok(piecewise(us, ts, 1.0 / terminal_slope, u)),
            Kind::Scaled { inner, m } => Ok(m * inner.inverse(u)?),
            Kind::Calderon { phi0, phi1, theta } => {
                let a = phi0.inverse(u)?;
                let b = phi1.inverse(u)?;
                Ok(pow(a, 1.0 - theta) * pow(b, *theta))
            }
            Kind::PowerLog { .. } => {
                solve_increasing(|t| self.eval(t), u, INVERSION_TOL, self.domain_cap)
            }
        }
    }

    /// `sup Φ(2t)/Φ(t)` over a geometric grid on `[t_max·1e-8, t_max]`.
    pub fn delta2_constant(&self, t_max: f64, n_grid: usize) -> Result<Delta2Estimate> {
        if n_grid < 16 {
            return Err(Error::InvalidInput(format!(
                "Δ2 grid needs at least 16 points, got {n_grid}"
            )));
        }
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::InvalidInput(format!("t_max = {t_max} must be positive")));
        }
        let t_min = t_max * 1e-8;
        let ratio_step = (t_max / t_min).powf(1.0 / (n_grid - 1) as f64);
        let mut ratios = Vec::with_capacity(n_grid);
        let mut ts = Vec::with_capacity(n_grid);
        for k in 0..n_grid {
            let t = if k + 1 == n_grid {
                t_max
            } else {
                t_min * ratio_step.powi(k as i32)
            };
            let base = self.eval(t)?;
            let doubled = self.eval(2.0 * t)?;
            if base > 0.0 {
                ratios.push(doubled / base);
                ts.push(t);
            }
        }
        let constant = ratios.iter().cloned().fold(f64::NAN, f64::max);
        let top: Vec<f64> = ts
            .iter()
            .zip(&ratios)
            .filter(|(&t, _)| t >= t_max / 10.0)
            .map(|(_, &r)| r)
            .collect();
        let growing = top.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
        let unbounded = match (top.first(), top.last()) {
            (Some(first), Some(last)) => growing && *last > 2.0 * first,
            _ => false,
        };
        Ok(Delta2Estimate {
            constant,
            unbounded,
            t_max,
            n_grid,
        })
    }

    /// Δ2 estimate on the default grid, computed once and cached.
    pub fn delta2(&self) -> Result<Delta2Estimate> {
        self.delta2
            .get_or_init(|| {
                let t_max = if self.domain_cap.is_finite() {
                    (self.domain_cap / 2.0).min(1e4)
                } else {
                    1e4
                };
                self.delta2_constant(t_max, 256)
            })
            .clone()
    }

    /// Replaces the cached Δ2 estimate with one computed on a custom grid.
    pub fn with_delta2(self, t_max: f64, n_grid: usize) -> Result<YoungFunction> {
        let est = self.delta2_constant(t_max, n_grid)?;
        let cell = OnceLock::new();
        let _ = cell.set(Ok(est));
        Ok(YoungFunction {
            delta2: cell,
            ..self
        })
    }

    /// True when the Δ2 estimator did not flag unbounded growth.
    pub fn is_delta2(&self) -> bool {
        self.delta2().map(|d| !d.unbounded).unwrap_or(false)
    }

    /// `Ψ(t) = Φ(t/M)`.
    pub fn scale_argument(&self, m: f64) -> Result<YoungFunction> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidInput(format!("scale M = {m} must be positive")));
        }
        Ok(YoungFunction::from_kind(Kind::Scaled {
            inner: Arc::new(self.clone()),
            m,
        }))
    }

    /// `(lhs, rhs) = (Φ(Σ tₙ), Σ (2α)^{-n} Φ((2α)^n tₙ))`; convexity gives `lhs ≤ rhs`.
    pub fn quasi_subadditive_bound(&self, alpha: f64, ts: &[f64]) -> Result<(f64, f64)> {
        if !(alpha >= 1.0) {
            return Err(Error::InvalidInput(format!("alpha = {alpha} must be ≥ 1")));
        }
        let lhs = self.eval(ts.iter().sum())?;
        let mut rhs = 0.0;
        let mut factor = 1.0;
        for &t in ts {
            factor *= 2.0 * alpha;
            rhs += self.eval(factor * t)? / factor;
        }
        Ok((lhs, rhs))
    }

    /// The exponent `p` when this function is exactly `t^p`, including
    /// Calderón combinations of two powers.
    pub fn power_exponent(&self) -> Option<f64> {
        match &self.kind {
            Kind::Power { p } => Some(*p),
            Kind::Calderon { phi0, phi1, theta } => {
                let p0 = phi0.power_exponent()?;
                let p1 = phi1.power_exponent()?;
                Some(1.0 / ((1.0 - theta) / p0 + theta / p1))
            }
            _ => None,
        }
    }

    fn sample_shape(&self, diags: &mut Vec<Diagnostic>) {
        // Closed-form families are convex by their parameter checks; sampled
        // checks guard the derived kinds.
        if !matches!(self.kind, Kind::PowerLog { .. } | Kind::Calderon { .. }) {
            return;
        }
        let cap = self.domain_cap.min(1e6);
        let grid: Vec<f64> = (0..=96)
            .map(|k| cap * 10f64.powf(-12.0 * (1.0 - k as f64 / 96.0)))
            .collect();
        let mut values = Vec::with_capacity(grid.len() + 1);
        values.push(0.0);
        for &t in &grid {
            match self.eval(t) {
                Ok(v) => values.push(v),
                Err(e) => {
                    diags.push(Diagnostic::BadParameter(e.to_string()));
                    return;
                }
            }
        }
        let xs: Vec<f64> = std::iter::once(0.0).chain(grid).collect();
        if values.windows(2).any(|w| !(w[1] > w[0])) {
            diags.push(Diagnostic::NotStrictlyIncreasing);
        }
        let slopes: Vec<f64> = (1..xs.len())
            .map(|i| (values[i] - values[i - 1]) / (xs[i] - xs[i - 1]))
            .collect();
        if slopes
            .windows(2)
            .any(|w| w[1] < w[0] * (1.0 - 1e-9) - 1e-300)
        {
            diags.push(Diagnostic::ConvexityViolated);
        }
    }
}

/// The Young function `Φ` with `Φ⁻¹ = (Φ₀⁻¹)^{1-θ} (Φ₁⁻¹)^θ`.
///
/// Forward values are obtained by bisection on the stored inverse. Identical
/// factors collapse to the factor itself.
pub fn calderon_combine(
    phi0: &YoungFunction,
    phi1: &YoungFunction,
    theta: f64,
) -> Result<YoungFunction> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidInput(format!(
            "theta = {theta} must lie in (0, 1)"
        )));
    }
    if phi0 == phi1 {
        return Ok(phi0.clone());
    }
    let phi = YoungFunction::from_kind(Kind::Calderon {
        phi0: Arc::new(phi0.clone()),
        phi1: Arc::new(phi1.clone()),
        theta,
    });
    let mut diags = Vec::new();
    phi.sample_shape(&mut diags);
    if diags.is_empty() {
        Ok(phi)
    } else {
        Err(Error::InvalidYoung(diags))
    }
}

fn validate_table(points: &[[f64; 2]], terminal_slope: f64, diags: &mut Vec<Diagnostic>) {
    if points.is_empty() {
        diags.push(Diagnostic::BadParameter("no breakpoints".into()));
        return;
    }
    if points.iter().flatten().any(|x| !x.is_finite()) || !terminal_slope.is_finite() {
        diags.push(Diagnostic::BadParameter("breakpoints must be finite".into()));
        return;
    }
    if points[0] != [0.0, 0.0] {
        diags.push(Diagnostic::OriginNotZero);
    }
    if points.windows(2).any(|w| !(w[1][0] > w[0][0] && w[1][1] > w[0][1])) {
        diags.push(Diagnostic::NotStrictlyIncreasing);
    }
    let mut slopes: Vec<f64> = points
        .windows(2)
        .map(|w| (w[1][1] - w[0][1]) / (w[1][0] - w[0][0]))
        .collect();
    slopes.push(terminal_slope);
    if slopes.windows(2).any(|w| w[1] < w[0] - 1e-12) {
        diags.push(Diagnostic::ConvexityViolated);
    }
    if !(terminal_slope > 0.0) {
        diags.push(Diagnostic::NotDivergent);
    }
}

fn piecewise(xs: &[f64], ys: &[f64], tail_slope: f64, x: f64) -> f64 {
    let idx = xs.partition_point(|&v| v <= x);
    if idx == xs.len() {
        let last = xs.len() - 1;
        return ys[last] + tail_slope * (x - xs[last]);
    }
    let (x0, x1, y0, y1) = (xs[idx - 1], xs[idx], ys[idx - 1], ys[idx]);
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

fn pow(t: f64, p: f64) -> f64 {
    if p == 1.0 {
        t
    } else if p == 2.0 {
        t * t
    } else {
        t.powf(p)
    }
}
