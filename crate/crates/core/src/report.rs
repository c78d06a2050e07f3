//! Number formatting and CSV rows shared by the CLI and the bindings.

use num_complex::Complex64;

/// Shortest decimal that reads back to the same `f64` (at most 17
/// significant digits). Plain notation for moderate magnitudes, exponent
/// notation otherwise.
pub fn fmt_real(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        // `-0` prints as "-0"; normalize so CSV output is sign-stable.
        if x == 0.0 {
            return "0".to_string();
        }
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn csv_row(fields: &[f64]) -> String {
    fields
        .iter()
        .map(|&v| fmt_real(v))
        .collect::<Vec<_>>()
        .join(",")
}

pub const ADMITTANCE_HEADER: &str = "omega,re_y,im_y";

pub fn admittance_row(omega: f64, y: Complex64) -> String {
    csv_row(&[omega, y.re, y.im])
}

pub const EXPONENT_HEADER: &str = "sigma,a1,b1,gamma,k,r2,omega_min,omega_max,points";

pub const COMPARE_HEADER: &str =
    "omega,re_y_ladder,im_y_ladder,re_y_line,im_y_line,re_y_continuum,im_y_continuum";
