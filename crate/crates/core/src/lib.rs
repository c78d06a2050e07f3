//! Frequency-domain analysis of recursive and fractal R-L ladder networks.
//!
//! Circuits are series-parallel forests ([`forest`]) with a text form
//! ([`dsl`]). Their admittance is computed by direct recursion, by continued
//! fractions for ladders, and through exact rational functions of `s = jω`
//! ([`admittance`], [`rational`]). [`fractal`] covers geometric ladders and
//! their half-order behavior; [`diffusion`] rebuilds the same ladders from a
//! discretized diffusion line.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admittance;
pub mod diffusion;
pub mod dsl;
pub mod error;
pub mod forest;
pub mod fractal;
pub mod rational;
pub mod report;

pub use admittance::{
    circuit_to_rational, component_admittance, continued_fraction_eval, eval_admittance,
    ladder_admittance_cf, AdmittanceSample, Stage,
};
pub use diffusion::{
    continuum_admittance, geometric_grid, ladder_from_grid, rl_profiles, solve_discrete_line,
    DiffusionProblem, GeometricGrid, LineSolution, Termination,
};
pub use dsl::{format, parse, SourceError};
pub use error::{Error, Result};
pub use forest::{
    build_ladder_forest, compose, graft, leaf, Circuit, Component, ComponentKind, Composition,
};
pub use fractal::{
    asymptotic_admittance, estimate_exponent, fractal_decorations, scaling_residual,
    truncated_admittance, ExponentFit, FractalLadderSpec,
};
pub use num_complex::Complex64;
pub use rational::{rf_add, rf_eval, rf_reciprocal_sum, Polynomial, RationalFunction};
