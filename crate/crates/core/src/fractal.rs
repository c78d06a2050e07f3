//! Fractal R-L ladders: geometric decorations, the truncation limit, the
//! Oustaloup scaling identity and power-law exponent fits.

use num_complex::Complex64;

use crate::admittance::{continued_fraction_eval, ladder_admittance_cf, AdmittanceSample, Stage};
use crate::error::{parameter, Error, Result};

/// Tolerance on `|ρσ - 1|` for a spec to count as Oustaloup.
pub const OUSTALOUP_TOL: f64 = 1e-12;

/// Geometric ladder: stage `i` (1-based) has inertance `σ^(i-1)·a1` and
/// resistance `ρ^(i-1)·b1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractalLadderSpec {
    a1: f64,
    b1: f64,
    sigma: f64,
    rho: f64,
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(parameter(
            name,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

impl FractalLadderSpec {
    pub fn new(a1: f64, b1: f64, sigma: f64, rho: f64) -> Result<Self> {
        Ok(Self {
            a1: positive("a1", a1)?,
            b1: positive("b1", b1)?,
            sigma: positive("sigma", sigma)?,
            rho: positive("rho", rho)?,
        })
    }

    /// `ρ = 1/σ`.
    pub fn oustaloup(a1: f64, b1: f64, sigma: f64) -> Result<Self> {
        let sigma = positive("sigma", sigma)?;
        Self::new(a1, b1, sigma, 1.0 / sigma)
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn is_oustaloup(&self) -> bool {
        (self.rho * self.sigma - 1.0).abs() <= OUSTALOUP_TOL
    }

    /// The same ladder with its first stage removed: `(σ·a1, ρ·b1)`.
    pub fn shifted(&self) -> Self {
        Self {
            a1: self.a1 * self.sigma,
            b1: self.b1 * self.rho,
            ..*self
        }
    }

    fn require_oustaloup(&self) -> Result<()> {
        if self.is_oustaloup() {
            Ok(())
        } else {
            Err(parameter(
                "rho",
                format!(
                    "spec is not Oustaloup: rho·sigma = {}",
                    self.rho * self.sigma
                ),
            ))
        }
    }
}

pub fn fractal_decorations(spec: &FractalLadderSpec, n: usize) -> Result<Vec<Stage>> {
    if n == 0 {
        return Err(Error::Arity {
            op: "fractal_decorations",
            min: 1,
            got: 0,
        });
    }
    let ok = |v: f64| v.is_finite() && v > 0.0;
    let exp = i32::try_from(n - 1).map_err(|_| Error::Depth(n))?;
    let (last_a, last_b) = (spec.a1 * spec.sigma.powi(exp), spec.b1 * spec.rho.powi(exp));
    if !ok(last_a) || !ok(last_b) {
        return Err(Error::Depth(n));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n as i32 {
        let s = Stage::new(spec.a1 * spec.sigma.powi(i), spec.b1 * spec.rho.powi(i));
        if !ok(s.inertance) || !ok(s.resistance) {
            return Err(Error::Depth(n));
        }
        out.push(s);
    }
    Ok(out)
}

/// Admittance of the `n`-stage truncation.
pub fn truncated_admittance(spec: &FractalLadderSpec, n: usize, omega: f64) -> Result<Complex64> {
    ladder_admittance_cf(&fractal_decorations(spec, n)?, omega)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticAdmittance {
    pub y: Complex64,
    pub depth_used: usize,
    pub converged: bool,
}

pub const START_DEPTH: usize = 8;

/// Limit of the truncations as depth grows. Depth doubles from 8 until two
/// successive values agree to `rel_tol`; the depth never exceeds `n_max`.
/// Running out of depth is reported through `converged`, not as an error.
pub fn asymptotic_admittance(
    spec: &FractalLadderSpec,
    omega: f64,
    rel_tol: f64,
    n_max: usize,
) -> Result<AsymptoticAdmittance> {
    if !(rel_tol > 0.0) {
        return Err(parameter("rel_tol", "must be positive"));
    }
    if n_max == 0 {
        return Err(parameter("n_max", "must be at least 1"));
    }
    let mut n = START_DEPTH.min(n_max);
    let mut y = truncated_admittance(spec, n, omega)?;
    while n * 2 <= n_max {
        let next = truncated_admittance(spec, n * 2, omega)?;
        let change = (next - y).norm() / y.norm();
        n *= 2;
        y = next;
        if change < rel_tol {
            return Ok(AsymptoticAdmittance {
                y,
                depth_used: n,
                converged: true,
            });
        }
    }
    Ok(AsymptoticAdmittance {
        y,
        depth_used: n,
        converged: false,
    })
}

/// Relative residual of `Y(ω) = [1/b1, j·a1·ω, σ·Y(σ²ω)]` for the limit
/// admittance of an Oustaloup spec. Both sides use the same tolerance and
/// depth cap; the right side is evaluated independently at `σ²ω`.
pub fn functional_relation_residual(
    spec: &FractalLadderSpec,
    omega: f64,
    rel_tol: f64,
    n_max: usize,
) -> Result<f64> {
    spec.require_oustaloup()?;
    let lhs = asymptotic_admittance(spec, omega, rel_tol, n_max)?;
    let inner = asymptotic_admittance(spec, spec.sigma * spec.sigma * omega, rel_tol, n_max)?;
    let rhs = continued_fraction_eval(&[
        Complex64::new(1.0 / spec.b1, 0.0),
        Complex64::new(0.0, spec.a1 * omega),
        inner.y * spec.sigma,
    ])?;
    Ok((lhs.y - rhs).norm() / rhs.norm())
}

/// Relative residual of `Y_n(σa1, b1/σ)(ω) = σ·Y_n(a1, b1)(σ²ω)`.
///
/// The identity holds exactly for every truncation depth, so the result
/// measures rounding only.
pub fn scaling_residual(spec: &FractalLadderSpec, n: usize, omega: f64) -> Result<f64> {
    spec.require_oustaloup()?;
    let lhs = truncated_admittance(&spec.shifted(), n, omega)?;
    let rhs = truncated_admittance(spec, n, spec.sigma * spec.sigma * omega)? * spec.sigma;
    Ok((lhs - rhs).norm() / rhs.norm())
}

/// Least-squares fit of `|Y(ω)| ≈ K·ω^γ` on log-log axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub gamma: f64,
    pub k: f64,
    pub r2: f64,
    pub window: (f64, f64),
    pub points: usize,
}

pub const MIN_FIT_POINTS: usize = 8;

pub const DEFAULT_WINDOW: (f64, f64) = (1e-6, 1e-3);
pub const DEFAULT_POINTS: usize = 40;

/// Ordinary least squares of `ln|y|` against `ln ω` over the samples whose
/// frequency lies in the closed `window`.
pub fn estimate_exponent(samples: &[AdmittanceSample], window: (f64, f64)) -> Result<ExponentFit> {
    let (lo, hi) = window;
    if !(lo > 0.0 && lo < hi) {
        return Err(parameter(
            "window",
            format!("need 0 < min < max, got ({lo}, {hi})"),
        ));
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.omega >= lo && s.omega <= hi)
        .map(|s| (s.omega.ln(), s.y.norm().ln()))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            needed: MIN_FIT_POINTS,
            got: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(parameter(
            "samples",
            "all frequencies in the window coincide",
        ));
    }
    let gamma = sxy / sxx;
    let intercept = my - gamma * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - (intercept + gamma * p.0)).powi(2))
        .sum();
    let r2 = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(ExponentFit {
        gamma,
        k: intercept.exp(),
        r2,
        window,
        points: pts.len(),
    })
}

/// `points` log-spaced values from `min` to `max` inclusive.
pub fn log_space(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max.is_finite() && min <= max) {
        return Err(parameter(
            "omega range",
            format!("need 0 < min <= max, got ({min}, {max})"),
        ));
    }
    match points {
        0 => Err(parameter("points", "must be at least 1")),
        1 => Ok(vec![min]),
        _ => {
            let (lmin, lmax) = (min.log10(), max.log10());
            let step = (lmax - lmin) / (points - 1) as f64;
            Ok((0..points)
                .map(|i| match i {
                    0 => min,
                    _ if i == points - 1 => max,
                    _ => 10f64.powf(lmin + step * i as f64),
                })
                .collect())
        }
    }
}

/// Exponent of the limit admittance of an Oustaloup ladder over `window`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentScan {
    pub fit: ExponentFit,
    pub samples: Vec<AdmittanceSample>,
    /// Frequencies at which the depth cap was reached before convergence.
    pub unconverged: Vec<f64>,
}

pub fn exponent_scan(
    spec: &FractalLadderSpec,
    window: (f64, f64),
    points: usize,
    rel_tol: f64,
    n_max: usize,
) -> Result<ExponentScan> {
    spec.require_oustaloup()?;
    let omegas = log_space(window.0, window.1, points)?;
    let mut samples = Vec::with_capacity(points);
    let mut unconverged = Vec::new();
    for w in omegas {
        let a = asymptotic_admittance(spec, w, rel_tol, n_max)?;
        if !a.converged {
            unconverged.push(w);
        }
        samples.push(AdmittanceSample::new(w, a.y)?);
    }
    let fit = estimate_exponent(&samples, window)?;
    Ok(ExponentScan {
        fit,
        samples,
        unconverged,
    })
}
