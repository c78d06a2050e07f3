//! The R-L ladder as a discretized diffusion line.
//!
//! On a geometric grid `z_k = z1·(1+δ)^(k-1)` the profiles
//! `R(z) = R0/(δz)` and `L(z) = L0·δz` make the ladder relations
//!
//! ```text
//! U[k+1] - U[k] = -j·L[k]·ω·I[k+1]
//! I[k+1] - I[k] = -U[k] / R[k]
//! ```
//!
//! collapse to the constant-coefficient difference equation
//! `Δ₋[R0·Δ₊[I]] = j·L0·ω·I`, whose continuum limit is `I'' = j(L0/R0)ωI`.
//!
//! Node `k` (1-based, one per grid point) carries the shunt `R[k]`; the
//! inertance `L[k]` joins node `k` to node `k+1`. `I[k]` is the current
//! entering node `k`, so `I[1]/U[1]` is the input admittance. The far end
//! sits one step past the last grid point.

use num_complex::Complex64;

use crate::admittance::{ladder_admittance_cf, Stage};
use crate::error::{parameter, Error, Result};
use crate::fractal::{estimate_exponent, FractalLadderSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricGrid {
    z1: f64,
    delta: f64,
    points: Vec<f64>,
}

impl GeometricGrid {
    pub fn z1(&self) -> f64 {
        self.z1
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> f64 {
        *self.points.last().expect("grid has at least three points")
    }

    /// `z1·(1+δ)^(k-1)` for any `k ≥ 1`, including the point past the end.
    pub fn point(&self, k: usize) -> f64 {
        self.z1 * (1.0 + self.delta).powi(k as i32 - 1)
    }
}

pub fn geometric_grid(z1: f64, delta: f64, n: usize) -> Result<GeometricGrid> {
    if !(z1.is_finite() && z1 > 0.0) {
        return Err(parameter("z1", format!("must be positive, got {z1}")));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(parameter("delta", format!("must be positive, got {delta}")));
    }
    if n < 3 {
        return Err(parameter(
            "n",
            format!("need at least 3 grid points, got {n}"),
        ));
    }
    let ratio = 1.0 + delta;
    let points: Vec<f64> = (0..n).map(|k| z1 * ratio.powi(k as i32)).collect();
    if !points.last().is_some_and(|z| z.is_finite()) {
        return Err(parameter("n", "grid extent overflows"));
    }
    Ok(GeometricGrid { z1, delta, points })
}

/// `R(z_k) = r0/(δ z_k)` and `L(z_k) = l0·δ·z_k` at every grid point.
pub fn rl_profiles(grid: &GeometricGrid, r0: f64, l0: f64) -> Vec<Stage> {
    grid.points
        .iter()
        .map(|&z| Stage::new(l0 * grid.delta * z, r0 / (grid.delta * z)))
        .collect()
}

/// Relative residuals of `R(z)(μ₊(z) - z) = R0` and
/// `L(μ₋(z)) / (z - μ₋(z)) = L0`, with `μ±` read off the grid points.
/// Returns one pair per grid step.
pub fn diffusion_condition_residuals(grid: &GeometricGrid, r0: f64, l0: f64) -> Vec<(f64, f64)> {
    let stages = rl_profiles(grid, r0, l0);
    grid.points
        .windows(2)
        .zip(stages.windows(2))
        .map(|(z, s)| {
            let h = z[1] - z[0];
            let resistive = (s[0].resistance * h / r0 - 1.0).abs();
            let inductive = (s[0].inertance / h / l0 - 1.0).abs();
            (resistive, inductive)
        })
        .collect()
}

/// The fractal ladder sampled from the grid: inertances grow by `1+δ` per
/// stage and resistances shrink by the same factor.
#[derive(Debug, Clone, PartialEq)]
pub struct GridLadder {
    pub spec: FractalLadderSpec,
    pub stages: Vec<Stage>,
}

pub fn ladder_from_grid(grid: &GeometricGrid, r0: f64, l0: f64) -> Result<GridLadder> {
    let stages = rl_profiles(grid, r0, l0);
    let ratio = 1.0 + grid.delta;
    let spec = FractalLadderSpec::new(
        stages[0].inertance,
        stages[0].resistance,
        ratio,
        1.0 / ratio,
    )?;
    Ok(GridLadder { spec, stages })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Termination {
    /// The last inertance returns to the rail.
    #[default]
    Short,
    /// No current leaves the last node through its inertance.
    Open,
}

impl std::str::FromStr for Termination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "short" => Ok(Termination::Short),
            "open" => Ok(Termination::Open),
            other => Err(parameter(
                "termination",
                format!("expected short or open, got {other:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionProblem {
    pub grid: GeometricGrid,
    pub r0: f64,
    pub l0: f64,
    pub omega: f64,
    pub termination: Termination,
}

impl DiffusionProblem {
    pub fn new(
        grid: GeometricGrid,
        r0: f64,
        l0: f64,
        omega: f64,
        termination: Termination,
    ) -> Result<Self> {
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(parameter("r0", format!("must be positive, got {r0}")));
        }
        if !(l0.is_finite() && l0 > 0.0) {
            return Err(parameter("l0", format!("must be positive, got {l0}")));
        }
        if omega == 0.0 {
            return Err(Error::ZeroFrequency);
        }
        if !omega.is_finite() {
            return Err(parameter("omega", "must be finite"));
        }
        Ok(Self {
            grid,
            r0,
            l0,
            omega,
            termination,
        })
    }
}

/// Node voltages `u[k]` (one per grid point) and currents `i[k]` entering
/// each node, plus the current `i[n]` into the termination. Scaled so that
/// `u[0] = 1`; far-end values may underflow to zero on long lines.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSolution {
    pub u: Vec<Complex64>,
    pub i: Vec<Complex64>,
    pub y_in: Complex64,
    /// Residual of `Δ₋[R0·Δ₊[I]] = j·L0·ω·I` at interior grid points
    /// `2..n-1`, see [`interior_residual`].
    pub residuals: Vec<f64>,
}

const RESCALE_ABOVE: f64 = 1e100;

/// Componentwise relative residual of the discrete diffusion equation at the
/// grid point `z[1]` with neighbours `z[0]`, `z[2]` and currents `cur`:
///
/// ```text
/// |Δ₋[R0·Δ₊[I]] - j·L0·ω·I| / (|A|·|I|)
/// ```
///
/// where `|A|·|I|` is the same stencil applied to the magnitudes, so the
/// value is a backward error and is insensitive to cancellation in the
/// differences.
pub fn interior_residual(z: [f64; 3], cur: [Complex64; 3], r0: f64, l0: f64, omega: f64) -> f64 {
    let (h_back, h_fwd) = (z[1] - z[0], z[2] - z[1]);
    let flux_fwd = (cur[2] - cur[1]) * (r0 / h_fwd);
    let flux_back = (cur[1] - cur[0]) * (r0 / h_back);
    let lhs = (flux_fwd - flux_back) / h_back;
    let rhs = Complex64::new(0.0, l0 * omega) * cur[1];
    let mag = |k: usize| cur[k].norm();
    let scale =
        (r0 / h_fwd * (mag(2) + mag(1)) + r0 / h_back * (mag(1) + mag(0))) / h_back + rhs.norm();
    if scale == 0.0 {
        return 0.0;
    }
    (lhs - rhs).norm() / scale
}

/// Back-substitutes the ladder relations from the far end toward the input.
///
/// Interior residuals are evaluated during the sweep, while neighbouring
/// values still share a scale, so they are not affected by far-end
/// underflow after normalization.
pub fn solve_discrete_line(p: &DiffusionProblem) -> Result<LineSolution> {
    let stages = rl_profiles(&p.grid, p.r0, p.l0);
    let z = p.grid.points();
    let n = stages.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut u = vec![zero; n];
    let mut i = vec![zero; n + 1];
    let mut residuals = vec![0.0; n - 2];

    let (mut u_next, start) = match p.termination {
        Termination::Short => {
            i[n] = Complex64::new(1.0, 0.0);
            (zero, n)
        }
        Termination::Open => {
            u[n - 1] = Complex64::new(1.0, 0.0);
            i[n - 1] = u[n - 1] / stages[n - 1].resistance;
            (u[n - 1], n - 1)
        }
    };
    for k in (0..start).rev() {
        let s = stages[k];
        u[k] = u_next + Complex64::new(0.0, s.inertance * p.omega) * i[k + 1];
        i[k] = i[k + 1] + u[k] / s.resistance;
        u_next = u[k];
        if k + 2 < n {
            residuals[k] = interior_residual(
                [z[k], z[k + 1], z[k + 2]],
                [i[k], i[k + 1], i[k + 2]],
                p.r0,
                p.l0,
                p.omega,
            );
        }
        let big = u[k].norm().max(i[k].norm());
        if !big.is_finite() {
            return Err(Error::Overflow("line back-substitution"));
        }
        if big > RESCALE_ABOVE {
            let f = 1.0 / big;
            u[k..].iter_mut().for_each(|v| *v *= f);
            i[k..].iter_mut().for_each(|v| *v *= f);
            u_next = u[k];
        }
    }

    let drive = u[0];
    if !(drive.norm() > 0.0) || !drive.re.is_finite() || !drive.im.is_finite() {
        return Err(Error::Overflow("line back-substitution"));
    }
    let scale = 1.0 / drive;
    u.iter_mut().for_each(|v| *v *= scale);
    i.iter_mut().for_each(|v| *v *= scale);
    u[0] = Complex64::new(1.0, 0.0);
    let y_in = i[0];
    if !(y_in.re.is_finite() && y_in.im.is_finite()) {
        return Err(Error::Overflow("input admittance"));
    }
    Ok(LineSolution {
        u,
        i,
        y_in,
        residuals,
    })
}

/// `1/sqrt(jω·L0·R0)`: input admittance of the semi-infinite continuous
/// line, magnitude `(ω L0 R0)^(-1/2)` and phase `-π/4`.
pub fn continuum_admittance(r0: f64, l0: f64, omega: f64) -> Complex64 {
    1.0 / Complex64::new(0.0, omega * l0 * r0).sqrt()
}

/// Decay length `sqrt(R0/(ω L0))` of the continuum solution.
pub fn decay_length(r0: f64, l0: f64, omega: f64) -> f64 {
    (r0 / (omega * l0)).sqrt()
}

/// The grid reaches at least three decay lengths at `omega`.
pub fn grid_adequate(grid: &GeometricGrid, r0: f64, l0: f64, omega: f64) -> bool {
    grid.last() >= 3.0 * decay_length(r0, l0, omega)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub omega: f64,
    pub ladder: Complex64,
    pub line: Complex64,
    pub continuum: Complex64,
}

impl ComparisonRow {
    pub fn discrepancy(&self) -> f64 {
        (self.line - self.ladder).norm() / self.ladder.norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub max_discrepancy: f64,
    pub max_interior_residual: f64,
    /// Fitted exponent of `|y_line|`; `None` with fewer than 8 frequencies.
    pub line_slope: Option<f64>,
}

/// Ladder, discrete line and continuum admittances side by side.
pub fn compare(
    grid: &GeometricGrid,
    r0: f64,
    l0: f64,
    termination: Termination,
    omegas: &[f64],
) -> Result<Comparison> {
    let ladder = ladder_from_grid(grid, r0, l0)?;
    let mut rows = Vec::with_capacity(omegas.len());
    let mut max_discrepancy = 0.0f64;
    let mut max_interior_residual = 0.0f64;
    let mut samples = Vec::with_capacity(omegas.len());
    for &w in omegas {
        let problem = DiffusionProblem::new(grid.clone(), r0, l0, w, termination)?;
        let sol = solve_discrete_line(&problem)?;
        let row = ComparisonRow {
            omega: w,
            ladder: ladder_admittance_cf(&ladder.stages, w)?,
            line: sol.y_in,
            continuum: continuum_admittance(r0, l0, w),
        };
        max_discrepancy = max_discrepancy.max(row.discrepancy());
        max_interior_residual = sol
            .residuals
            .iter()
            .copied()
            .fold(max_interior_residual, f64::max);
        samples.push(crate::admittance::AdmittanceSample::new(w, sol.y_in)?);
        rows.push(row);
    }
    let line_slope = match (omegas.first(), omegas.last()) {
        (Some(&lo), Some(&hi)) if lo < hi => {
            estimate_exponent(&samples, (lo, hi)).ok().map(|f| f.gamma)
        }
        _ => None,
    };
    Ok(Comparison {
        rows,
        max_discrepancy,
        max_interior_residual,
        line_slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_points() {
        let g = geometric_grid(1.0, 0.5, 4).unwrap();
        assert_eq!(g.points(), &[1.0, 1.5, 2.25, 3.375]);
        for w in g.points().windows(2) {
            assert_eq!(w[1] / w[0], 1.5);
        }
        assert_eq!(g.point(5), 3.375 * 1.5);
        assert!(geometric_grid(1.0, 0.0, 4).is_err());
        assert!(geometric_grid(-1.0, 0.5, 4).is_err());
        assert!(geometric_grid(1.0, 0.5, 2).is_err());
    }

    #[test]
    fn profiles_at_points() {
        let g = geometric_grid(1.0, 0.5, 3).unwrap();
        let p = rl_profiles(&g, 1.0, 1.0);
        assert_eq!(p[0].resistance, 2.0);
        assert_eq!(p[0].inertance, 0.5);
        let g2 = geometric_grid(2.0, 0.5, 3).unwrap();
        assert_eq!(rl_profiles(&g2, 1.0, 1.0)[0].inertance, 1.0);
    }

    #[test]
    fn diffusion_conditions_hold() {
        let g = geometric_grid(1.0, 0.5, 60).unwrap();
        for (a, b) in diffusion_condition_residuals(&g, 1.0, 1.0) {
            assert!(a <= 1e-14 && b <= 1e-14, "{a} {b}");
        }
    }

    #[test]
    fn grid_ladder_is_oustaloup() {
        let g = geometric_grid(1.0, 0.1, 10).unwrap();
        let lad = ladder_from_grid(&g, 1.0, 1.0).unwrap();
        assert!((lad.spec.sigma() - 1.1).abs() < 1e-15);
        assert!((lad.spec.rho() - 1.0 / 1.1).abs() < 1e-15);
        assert!((lad.spec.sigma() * lad.spec.rho() - 1.0).abs() <= 1e-15);
        assert!(lad.spec.is_oustaloup());

        let g = geometric_grid(1.0, 0.5, 3).unwrap();
        let lad = ladder_from_grid(&g, 1.0, 1.0).unwrap();
        assert_eq!((lad.spec.a1(), lad.spec.b1()), (0.5, 2.0));
    }

    #[test]
    fn line_matches_ladder() {
        let g = geometric_grid(1.0, 0.1, 60).unwrap();
        let p = DiffusionProblem::new(g.clone(), 1.0, 1.0, 1e-2, Termination::Short).unwrap();
        let sol = solve_discrete_line(&p).unwrap();
        let lad = ladder_from_grid(&g, 1.0, 1.0).unwrap();
        let y = ladder_admittance_cf(&lad.stages, 1e-2).unwrap();
        assert!((sol.y_in - y).norm() <= 1e-12 * y.norm());
        let worst = sol.residuals.iter().copied().fold(0.0, f64::max);
        assert_eq!(sol.residuals.len(), 58);
        assert!(worst <= 1e-12, "{worst}");
        assert_eq!(sol.u.len(), 60);
        assert_eq!(sol.i.len(), 61);
    }

    #[test]
    fn smallest_grid_by_hand() {
        let g = geometric_grid(1.0, 0.5, 3).unwrap();
        let s = rl_profiles(&g, 1.0, 1.0);
        let w = 0.8;
        let j = c(0.0, 1.0);
        let y3 = 1.0 / s[2].resistance + 1.0 / (j * s[2].inertance * w);
        let y2 = 1.0 / s[1].resistance + 1.0 / (j * s[1].inertance * w + 1.0 / y3);
        let y1 = 1.0 / s[0].resistance + 1.0 / (j * s[0].inertance * w + 1.0 / y2);
        let p = DiffusionProblem::new(g, 1.0, 1.0, w, Termination::Short).unwrap();
        let sol = solve_discrete_line(&p).unwrap();
        assert!((sol.y_in - y1).norm() <= 1e-14 * y1.norm());
    }

    #[test]
    fn open_termination_drops_last_inertance() {
        let g = geometric_grid(0.5, 0.3, 5).unwrap();
        let s = rl_profiles(&g, 2.0, 0.7);
        let w = 3.0;
        let mut entries: Vec<Complex64> = s
            .iter()
            .flat_map(|st| [c(1.0 / st.resistance, 0.0), c(0.0, st.inertance * w)])
            .collect();
        entries.pop();
        let expected = crate::admittance::continued_fraction_eval(&entries).unwrap();
        let p = DiffusionProblem::new(g, 2.0, 0.7, w, Termination::Open).unwrap();
        let sol = solve_discrete_line(&p).unwrap();
        assert!((sol.y_in - expected).norm() <= 1e-13 * expected.norm());
        assert_eq!(sol.i[5], c(0.0, 0.0));
    }

    #[test]
    fn long_grid_rescales() {
        let g = geometric_grid(1.0, 0.5, 400).unwrap();
        let p = DiffusionProblem::new(g.clone(), 1.0, 1.0, 10.0, Termination::Short).unwrap();
        let sol = solve_discrete_line(&p).unwrap();
        let lad = ladder_from_grid(&g, 1.0, 1.0).unwrap();
        let y = ladder_admittance_cf(&lad.stages, 10.0).unwrap();
        assert!((sol.y_in - y).norm() <= 1e-12 * y.norm());
    }

    #[test]
    fn zero_frequency_rejected() {
        let g = geometric_grid(1.0, 0.1, 5).unwrap();
        assert_eq!(
            DiffusionProblem::new(g, 1.0, 1.0, 0.0, Termination::Short),
            Err(Error::ZeroFrequency)
        );
    }

    #[test]
    fn continuum_closed_form() {
        let y = continuum_admittance(1.0, 1.0, 1.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((y - c(h, -h)).norm() < 1e-15);
        let a = continuum_admittance(2.0, 3.0, 0.5).norm();
        let b = continuum_admittance(2.0, 3.0, 50.0).norm();
        assert!((a / b - 10.0).abs() < 1e-12);
        for w in [1e-6, 1e-2, 1.0, 1e4] {
            let phase = continuum_admittance(1.0, 1.0, w).arg().to_degrees();
            assert!((phase + 45.0).abs() < 1e-12);
        }
    }

    #[test]
    fn continuum_solves_line_equation() {
        // I(z) = exp(-κz), κ = sqrt(jωL0/R0); U = -R0·I' = R0·κ·I.
        let (r0, l0, w) = (2.0, 0.5, 3.0);
        let kappa = Complex64::new(0.0, w * l0 / r0).sqrt();
        assert!(kappa.re > 0.0);
        let i = |z: f64| (-kappa * z).exp();
        let h = 1e-4;
        let z = 0.3;
        let second = (i(z + h) - 2.0 * i(z) + i(z - h)) / (h * h);
        let rhs = Complex64::new(0.0, l0 / r0 * w) * i(z);
        assert!((second - rhs).norm() < 1e-6 * rhs.norm());
        let y = 1.0 / (r0 * kappa);
        assert!((y - continuum_admittance(r0, l0, w)).norm() < 1e-14);
    }

    #[test]
    fn adequacy_rule() {
        let g = geometric_grid(1.0, 0.1, 10).unwrap();
        assert!(!grid_adequate(&g, 1.0, 1.0, 1e-6));
        let g = geometric_grid(1.0, 0.1, 120).unwrap();
        assert!(grid_adequate(&g, 1.0, 1.0, 1e-5));
    }

    #[test]
    fn termination_parse() {
        assert_eq!("short".parse::<Termination>().unwrap(), Termination::Short);
        assert_eq!("open".parse::<Termination>().unwrap(), Termination::Open);
        assert!("closed".parse::<Termination>().is_err());
    }
}
