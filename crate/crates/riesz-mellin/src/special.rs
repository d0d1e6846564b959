//! Complex gamma function via the Lanczos approximation.
//!
//! Serves as the closed-form reference for the flat-corner symbol
//! Γ(1/4-λ)Γ(1/4+λ)/Γ(1/2); it shares no code with the quadrature paths it
//! is used to check.

use num_complex::Complex64;
use std::f64::consts::PI;

// Lanczos coefficients for g = 7, n = 9 (GNU Scientific Library set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z) for complex z, with reflection for Re z < 1/2.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let pi_z = z * PI;
        PI / (pi_z.sin() * gamma(Complex64::new(1.0, 0.0) - z))
    } else {
        let z = z - 1.0;
        let mut acc = Complex64::new(LANCZOS_P[0], 0.0);
        for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
            acc += p / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * acc
    }
}

/// Mellin symbol of the flat half-aperture kernel τ^{1/4}(1+τ)^{-1/2}:
/// the Beta integral gives Γ(1/4-λ)Γ(1/4+λ)/Γ(1/2).
pub fn flat_symbol_reference(lambda: Complex64) -> Complex64 {
    let quarter = Complex64::new(0.25, 0.0);
    gamma(quarter - lambda) * gamma(quarter + lambda) / PI.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_real_values() {
        assert!((gamma(c(1.0, 0.0)).re - 1.0).abs() < 1e-13);
        assert!((gamma(c(5.0, 0.0)).re - 24.0).abs() < 1e-11);
        assert!((gamma(c(0.5, 0.0)).re - PI.sqrt()).abs() < 1e-13);
        // Γ(1/4) = 3.6256099082219083119...
        assert!((gamma(c(0.25, 0.0)).re - 3.625_609_908_221_908_3).abs() < 1e-12);
    }

    #[test]
    fn functional_equation_on_a_grid() {
        for &re in &[-1.3, -0.4, 0.2, 0.75, 2.5] {
            for &im in &[-2.0, -0.3, 0.0, 0.7, 3.1] {
                let z = c(re, im);
                if (z.re - z.re.round()).abs() < 1e-9 && z.im == 0.0 && z.re <= 0.0 {
                    continue;
                }
                let lhs = gamma(z + 1.0);
                let rhs = z * gamma(z);
                assert!(
                    (lhs - rhs).norm() <= 1e-11 * rhs.norm().max(1.0),
                    "Γ(z+1) != zΓ(z) at {z}"
                );
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let z = c(0.3, 1.7);
        let a = gamma(z.conj());
        let b = gamma(z).conj();
        assert!((a - b).norm() < 1e-12 * b.norm());
    }

    #[test]
    fn flat_symbol_value_at_origin() {
        // Γ(1/4)²/√π = 7.41629870920548767...
        let v = flat_symbol_reference(c(0.0, 0.0));
        assert!((v.re - 7.416_298_709_205_488).abs() < 1e-12, "got {v}");
        assert!(v.im.abs() < 1e-12);
    }
}
