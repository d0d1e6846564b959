//! Smooth compactly supported building blocks: the exp(-1/t) smoothstep, the
//! plateau cutoff used for meromorphic continuation, and the standard test
//! bumps drawn in randomized experiments.

/// exp(-1/x) for x > 0, else 0; the C^∞ half-bump seed.
#[inline]
fn half_seed(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

#[inline]
fn half_seed_deriv(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp() / (x * x)
    } else {
        0.0
    }
}

/// C^∞ step: 0 for x <= 0, 1 for x >= 1.
pub fn smoothstep(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = half_seed(x);
        a / (a + half_seed(1.0 - x))
    }
}

/// Derivative of [`smoothstep`].
pub fn smoothstep_deriv(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        let a = half_seed(x);
        let b = half_seed(1.0 - x);
        let da = half_seed_deriv(x);
        let db = -half_seed_deriv(1.0 - x);
        (da * (a + b) - a * (da + db)) / ((a + b) * (a + b))
    }
}

/// Plateau cutoff φ on R₊: φ(τ) = 1 for τ <= inner, 0 for τ >= outer,
/// exp-smoothstep in between. Default (1/4, 1/2) matches the continuation
/// splitting; the same profile is reused for radial partition bumps.
#[derive(Debug, Clone, Copy)]
pub struct PlateauCutoff {
    pub inner: f64,
    pub outer: f64,
}

impl Default for PlateauCutoff {
    fn default() -> Self {
        Self {
            inner: 0.25,
            outer: 0.5,
        }
    }
}

impl PlateauCutoff {
    pub fn new(inner: f64, outer: f64) -> Self {
        assert!(inner > 0.0 && outer > inner);
        Self { inner, outer }
    }

    /// φ(τ).
    pub fn eval(&self, tau: f64) -> f64 {
        smoothstep((self.outer - tau) / (self.outer - self.inner))
    }

    /// φ'(τ); supported in [inner, outer].
    pub fn deriv(&self, tau: f64) -> f64 {
        -smoothstep_deriv((self.outer - tau) / (self.outer - self.inner))
            / (self.outer - self.inner)
    }

    /// Υ(τ) = τ φ'(τ), the logarithmic derivative weight whose Mellin
    /// transform is entire; supported in [inner, outer].
    pub fn log_deriv(&self, tau: f64) -> f64 {
        tau * self.deriv(tau)
    }
}

/// Smooth bump c·exp(-1/(1-((t-a)/w)²)) supported on [a-w, a+w].
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Bump {
    pub center: f64,
    pub halfwidth: f64,
    pub amplitude: f64,
}

impl Bump {
    pub fn new(center: f64, halfwidth: f64, amplitude: f64) -> Self {
        assert!(halfwidth > 0.0);
        Self {
            center,
            halfwidth,
            amplitude,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.halfwidth, self.center + self.halfwidth)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = (t - self.center) / self.halfwidth;
        let q = 1.0 - u * u;
        if q <= 0.0 {
            0.0
        } else {
            self.amplitude * (-1.0 / q).exp()
        }
    }
}

/// Reproducible bump family for randomized sup estimation. Ranges keep the
/// support well inside (0, ∞) so log-grid truncation is harmless.
pub fn random_bump(rng: &mut impl rand::Rng) -> Bump {
    let center = rng.gen_range(0.8..2.5);
    let halfwidth = rng.gen_range(0.25..0.7);
    let amplitude = rng.gen_range(0.5..2.0);
    Bump::new(center, halfwidth, amplitude)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothstep_plateaus_and_monotone() {
        assert_eq!(smoothstep(-0.1), 0.0);
        assert_eq!(smoothstep(1.1), 1.0);
        let mut prev = 0.0;
        for k in 0..=100 {
            let v = smoothstep(k as f64 / 100.0);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        assert!((smoothstep(0.5) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn smoothstep_deriv_matches_finite_differences() {
        for &x in &[0.1, 0.3, 0.5, 0.8, 0.95] {
            let h = 1e-6;
            let fd = (smoothstep(x + h) - smoothstep(x - h)) / (2.0 * h);
            assert!(
                (smoothstep_deriv(x) - fd).abs() < 1e-7,
                "x={x}: {} vs {}",
                smoothstep_deriv(x),
                fd
            );
        }
    }

    #[test]
    fn cutoff_support_conditions() {
        let phi = PlateauCutoff::default();
        assert_eq!(phi.eval(0.2), 1.0);
        assert_eq!(phi.eval(0.6), 0.0);
        assert_eq!(phi.log_deriv(0.24), 0.0);
        assert_eq!(phi.log_deriv(0.51), 0.0);
        assert!(phi.log_deriv(0.35) < 0.0);
    }

    #[test]
    fn bump_support() {
        let b = Bump::new(1.5, 0.5, 1.0);
        assert_eq!(b.eval(0.99), 0.0);
        assert_eq!(b.eval(2.01), 0.0);
        assert!(b.eval(1.5) > 0.3);
    }
}
