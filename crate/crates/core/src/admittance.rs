//! Admittance of circuits by three routes: direct recursion over the forest,
//! continued fractions for ladders, and compilation to a rational function
//! of `s = jω`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forest::{build_ladder_forest, Circuit, Component, ComponentKind};
use crate::rational::{rf_add, rf_reciprocal_sum, Polynomial, RationalFunction};

const TINY: f64 = 1e-300;

/// One admittance value at a strictly positive angular frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmittanceSample {
    pub omega: f64,
    pub y: Complex64,
}

impl AdmittanceSample {
    pub fn new(omega: f64, y: Complex64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(crate::error::parameter(
                "omega",
                "must be positive and finite",
            ));
        }
        if !(y.re.is_finite() && y.im.is_finite()) {
            return Err(Error::Overflow("admittance sample"));
        }
        Ok(Self { omega, y })
    }
}

/// One ladder stage: series inertance (henries) followed by shunt
/// resistance (ohms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stage {
    pub inertance: f64,
    pub resistance: f64,
}

impl Stage {
    pub fn new(inertance: f64, resistance: f64) -> Self {
        Self {
            inertance,
            resistance,
        }
    }

    pub fn components(&self) -> Result<(Component, Component)> {
        Ok((
            Component::inertance(self.inertance)?,
            Component::resistor(self.resistance)?,
        ))
    }
}

/// Forest of the ladder described by `stages`.
pub fn ladder_forest(stages: &[Stage]) -> Result<Circuit> {
    let decorations = stages
        .iter()
        .map(Stage::components)
        .collect::<Result<Vec<_>>>()?;
    build_ladder_forest(&decorations)
}

/// `1/z` without forming `|z|²`, so very large or very small entries do not
/// overflow (Smith's method).
pub(crate) fn recip(z: Complex64) -> Complex64 {
    if z.re.abs() >= z.im.abs() {
        let r = z.im / z.re;
        let d = z.re + z.im * r;
        Complex64::new(1.0 / d, -r / d)
    } else {
        let r = z.re / z.im;
        let d = z.re * r + z.im;
        Complex64::new(r / d, -1.0 / d)
    }
}

fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `1/R` for a resistor, `1/(jLω) = -j/(Lω)` for an inertance.
pub fn component_admittance(c: &Component, omega: f64) -> Result<Complex64> {
    match c.kind() {
        ComponentKind::Resistor => Ok(Complex64::new(1.0 / c.value(), 0.0)),
        ComponentKind::Inertance => {
            if omega == 0.0 {
                return Err(Error::ZeroFrequency);
            }
            let y = Complex64::new(0.0, -1.0 / (c.value() * omega));
            if !is_finite(y) {
                return Err(Error::Overflow("component admittance"));
            }
            Ok(y)
        }
    }
}

/// Parallel adds admittances; series adds impedances.
pub fn eval_admittance(c: &Circuit, omega: f64) -> Result<Complex64> {
    let y = match c {
        Circuit::Leaf(comp) => return component_admittance(comp, omega),
        Circuit::Parallel(parts) => {
            let mut sum = Complex64::new(0.0, 0.0);
            for p in parts {
                sum += eval_admittance(p, omega)?;
            }
            sum
        }
        Circuit::Series(parts) => {
            let mut z = Complex64::new(0.0, 0.0);
            for p in parts {
                let y = eval_admittance(p, omega)?;
                if y.norm() < TINY {
                    return Err(Error::Overflow("series impedance"));
                }
                z += recip(y);
            }
            if z.norm() < TINY {
                return Err(Error::Overflow("series admittance"));
            }
            recip(z)
        }
    };
    if !is_finite(y) {
        return Err(Error::Overflow("circuit admittance"));
    }
    Ok(y)
}

/// `[α1, …, αn] = α1 + 1/(α2 + 1/(… + 1/αn))`, evaluated from the tail.
pub fn continued_fraction_eval(entries: &[Complex64]) -> Result<Complex64> {
    let (&last, head) = entries.split_last().ok_or(Error::Arity {
        op: "continued_fraction_eval",
        min: 1,
        got: 0,
    })?;
    let mut acc = last;
    for (k, &alpha) in head.iter().enumerate().rev() {
        if !(acc.norm() >= TINY) {
            return Err(Error::DegenerateFraction(k + 2));
        }
        acc = alpha + recip(acc);
    }
    if !is_finite(acc) {
        return Err(Error::Overflow("continued fraction"));
    }
    Ok(acc)
}

/// Entries `[1/R1, jL1ω, 1/R2, jL2ω, …, 1/Rn, jLnω]` of the ladder's
/// continued fraction.
pub fn ladder_entries(stages: &[Stage], omega: f64) -> Result<Vec<Complex64>> {
    if omega == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let mut entries = Vec::with_capacity(2 * stages.len());
    for s in stages {
        let shunt = Complex64::new(1.0 / s.resistance, 0.0);
        let series = Complex64::new(0.0, s.inertance * omega);
        if !is_finite(shunt) || !is_finite(series) {
            return Err(Error::Overflow("ladder entries"));
        }
        entries.push(shunt);
        entries.push(series);
    }
    Ok(entries)
}

pub fn ladder_admittance_cf(stages: &[Stage], omega: f64) -> Result<Complex64> {
    if stages.is_empty() {
        return Err(Error::Arity {
            op: "ladder_admittance_cf",
            min: 1,
            got: 0,
        });
    }
    continued_fraction_eval(&ladder_entries(stages, omega)?)
}

/// Compiles the circuit to `Y(s)`: resistors become `1/R`, inertances
/// `1/(L s)`, folded with the parallel/series rules.
pub fn circuit_to_rational(c: &Circuit) -> Result<RationalFunction> {
    match c {
        Circuit::Leaf(comp) => Ok(match comp.kind() {
            ComponentKind::Resistor => {
                RationalFunction::constant(Complex64::new(1.0 / comp.value(), 0.0))
            }
            ComponentKind::Inertance => RationalFunction::new(
                Polynomial::constant(Complex64::new(1.0, 0.0)),
                Polynomial::monomial(Complex64::new(comp.value(), 0.0), 1),
            )?,
        }),
        Circuit::Parallel(parts) => {
            let mut acc = circuit_to_rational(&parts[0])?;
            for p in &parts[1..] {
                acc = rf_add(&acc, &circuit_to_rational(p)?);
            }
            Ok(acc)
        }
        Circuit::Series(parts) => {
            let mut acc = circuit_to_rational(&parts[0])?;
            for p in &parts[1..] {
                acc = rf_reciprocal_sum(&acc, &circuit_to_rational(p)?)?;
            }
            Ok(acc)
        }
    }
}

/// Evaluates `Y(c)(ω)` at each frequency.
pub fn sweep(c: &Circuit, omegas: &[f64]) -> Result<Vec<AdmittanceSample>> {
    omegas
        .iter()
        .map(|&w| AdmittanceSample::new(w, eval_admittance(c, w)?))
        .collect()
}
