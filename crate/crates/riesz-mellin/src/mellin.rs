//! Mellin transform numerics on R₊: û(λ) = ∫₀^∞ u(r) r^{-λ} dr/r.
//!
//! Under the Euler substitution r = e^t this is the Fourier transform of
//! t ↦ u(e^t) e^{-βt} on the line Re λ = β, so everything runs on a uniform
//! grid in t = log r with trapezoid quadrature, which is spectrally accurate
//! for smooth integrands decaying inside the grid span.

use crate::bump::Bump;
use crate::error::{Error, Result};
use crate::quad::{pairwise_sum, pairwise_sum_complex, trapezoid_weights};
use num_complex::Complex64;
use rayon::prelude::*;
use std::io::{BufRead, Write};

/// Uniform grid in t = log r; nodes r_k = exp(t_min + k h).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub n: usize,
}

impl LogGrid {
    pub fn new(t_min: f64, t_max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Grid(format!("need at least 2 nodes, got {n}")));
        }
        if !(t_min < t_max) {
            return Err(Error::Grid(format!("t_min {t_min} must be < t_max {t_max}")));
        }
        Ok(Self { t_min, t_max, n })
    }

    /// Grid spanning [r_min, r_max] in the radial variable.
    pub fn from_r_range(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min) {
            return Err(Error::Grid(format!(
                "need 0 < r_min < r_max, got {r_min}, {r_max}"
            )));
        }
        Self::new(r_min.ln(), r_max.ln(), n)
    }

    pub fn spacing(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n - 1) as f64
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t_min + k as f64 * self.spacing()
    }

    pub fn r(&self, k: usize) -> f64 {
        self.t(k).exp()
    }
}

/// Declared decay of a grid function at the two ends of R₊. Knowing the
/// tails is the caller's job; inference from samples is unreliable near
/// underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailBehavior {
    /// Identically zero outside a compact subset of (0, ∞) inside the grid.
    CompactSupport,
    /// u(r) = O(r^{zero_exponent}) as r -> 0 and O(r^{-infinity_exponent})
    /// as r -> ∞.
    PowerTails {
        zero_exponent: f64,
        infinity_exponent: f64,
    },
}

/// Complex samples of a function on a [`LogGrid`].
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub grid: LogGrid,
    pub values: Vec<Complex64>,
    pub tails: TailBehavior,
}

impl GridFunction {
    pub fn new(grid: LogGrid, values: Vec<Complex64>, tails: TailBehavior) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::Grid(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.n
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Grid("non-finite sample".into()));
        }
        Ok(Self {
            grid,
            values,
            tails,
        })
    }

    pub fn from_real_fn(grid: LogGrid, tails: TailBehavior, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.n)
            .map(|k| Complex64::new(f(grid.r(k)), 0.0))
            .collect();
        Self {
            grid,
            values,
            tails,
        }
    }

    pub fn from_bump(grid: LogGrid, bump: &Bump) -> Self {
        Self::from_real_fn(grid, TailBehavior::CompactSupport, |r| bump.eval(r))
    }

    pub fn zero(grid: LogGrid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n],
            tails: TailBehavior::CompactSupport,
        }
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Open strip of β for which ∫ |u| r^{-β} dr/r converges per the declared
    /// tails, as (lower, upper).
    pub fn integrability_strip(&self) -> (f64, f64) {
        match self.tails {
            TailBehavior::CompactSupport => (f64::NEG_INFINITY, f64::INFINITY),
            TailBehavior::PowerTails {
                zero_exponent,
                infinity_exponent,
            } => (-infinity_exponent, zero_exponent),
        }
    }

    fn check_beta(&self, beta: f64) -> Result<()> {
        let (lo, hi) = self.integrability_strip();
        if beta <= lo || beta >= hi {
            return Err(Error::Strip(format!(
                "beta {beta} outside declared integrability strip ({lo}, {hi})"
            )));
        }
        Ok(())
    }

    /// CSV export: rows `r,re,im`.
    pub fn to_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "r,re,im")?;
        for k in 0..self.grid.n {
            writeln!(
                w,
                "{:.17e},{:.17e},{:.17e}",
                self.grid.r(k),
                self.values[k].re,
                self.values[k].im
            )?;
        }
        Ok(())
    }

    /// CSV import; the rows must form a log-uniform grid.
    pub fn from_csv<R: BufRead>(r: R, tails: TailBehavior) -> Result<Self> {
        let mut rs = Vec::new();
        let mut values = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if i == 0 && line.starts_with('r') {
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(Error::Io(format!("bad csv row: {line}")));
            }
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Io(format!("bad float {s}: {e}")))
            };
            rs.push(parse(cols[0])?);
            values.push(Complex64::new(parse(cols[1])?, parse(cols[2])?));
        }
        if rs.len() < 2 {
            return Err(Error::Io("csv holds fewer than 2 rows".into()));
        }
        let grid = LogGrid::from_r_range(rs[0], *rs.last().unwrap(), rs.len())?;
        let h = grid.spacing();
        for (k, &r) in rs.iter().enumerate() {
            if (r.ln() - grid.t(k)).abs() > 1e-9 * h.max(1.0) {
                return Err(Error::Io("csv rows are not log-uniform".into()));
            }
        }
        GridFunction::new(grid, values, tails)
    }
}

/// Vertical line Re λ = β sampled at m (odd) points ξ ∈ [-xi_max, xi_max].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalLine {
    pub beta: f64,
    pub xi_max: f64,
    pub m: usize,
}

impl VerticalLine {
    pub fn new(beta: f64, xi_max: f64, m: usize) -> Result<Self> {
        if m < 3 || m % 2 == 0 {
            return Err(Error::Grid(format!("line needs odd m >= 3, got {m}")));
        }
        if !(xi_max > 0.0) {
            return Err(Error::Grid(format!(
                "xi_max must be positive, got {xi_max}"
            )));
        }
        Ok(Self { beta, xi_max, m })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.xi_max / (self.m - 1) as f64
    }

    pub fn xi(&self, j: usize) -> f64 {
        -self.xi_max + j as f64 * self.spacing()
    }

    pub fn lambda(&self, j: usize) -> Complex64 {
        Complex64::new(self.beta, self.xi(j))
    }
}

/// Transform samples û(β + iξ_j) on a vertical line.
#[derive(Debug, Clone)]
pub struct MellinSamples {
    pub line: VerticalLine,
    pub values: Vec<Complex64>,
}

impl MellinSamples {
    /// CSV export: rows `xi,re,im`.
    pub fn to_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "xi,re,im")?;
        for (j, v) in self.values.iter().enumerate() {
            writeln!(w, "{:.17e},{:.17e},{:.17e}", self.line.xi(j), v.re, v.im)?;
        }
        Ok(())
    }
}

/// û(λ) at a single complex point by trapezoid quadrature on the log grid.
pub fn mellin_transform_at(u: &GridFunction, lambda: Complex64) -> Result<Complex64> {
    u.check_beta(lambda.re)?;
    Ok(transform_at_unchecked(u, lambda))
}

fn transform_at_unchecked(u: &GridFunction, lambda: Complex64) -> Complex64 {
    let grid = u.grid;
    let h = grid.spacing();
    let w = trapezoid_weights(grid.n);
    let mut terms = Vec::with_capacity(grid.n);
    for k in 0..grid.n {
        let v = u.values[k];
        if v.re == 0.0 && v.im == 0.0 {
            terms.push(Complex64::new(0.0, 0.0));
            continue;
        }
        // r^{-λ} dr/r = e^{-λ t} dt
        terms.push(v * (-lambda * grid.t(k)).exp() * w[k]);
    }
    pairwise_sum_complex(&terms) * h
}

/// Forward transform on a sampled vertical line. Real inputs are mirrored
/// across ξ = 0 by conjugate symmetry to halve the work.
pub fn mellin_forward(u: &GridFunction, line: &VerticalLine) -> Result<MellinSamples> {
    u.check_beta(line.beta)?;
    let m = line.m;
    let mut values = vec![Complex64::new(0.0, 0.0); m];
    let center = (m - 1) / 2;
    if u.is_real() {
        let upper: Vec<Complex64> = (center..m)
            .into_par_iter()
            .map(|j| transform_at_unchecked(u, line.lambda(j)))
            .collect();
        for (off, val) in upper.into_iter().enumerate() {
            values[center + off] = val;
            values[center - off] = val.conj();
        }
    } else {
        values = (0..m)
            .into_par_iter()
            .map(|j| transform_at_unchecked(u, line.lambda(j)))
            .collect();
    }
    Ok(MellinSamples {
        line: *line,
        values,
    })
}

/// Inverse transform u(r) = (1/2π) ∫ û(β+iξ) r^{β+iξ} dξ, trapezoid over the
/// sampled line. Points with |log r| beyond 45% of the aliasing period
/// 2π/Δξ are refused.
pub fn mellin_inverse(samples: &MellinSamples, r_points: &[f64]) -> Result<Vec<Complex64>> {
    let line = samples.line;
    let dxi = line.spacing();
    let period = 2.0 * std::f64::consts::PI / dxi;
    for &r in r_points {
        if !(r > 0.0) {
            return Err(Error::Resolution(format!("r must be positive, got {r}")));
        }
        if r.ln().abs() > 0.45 * period {
            return Err(Error::Resolution(format!(
                "log r = {} beyond resolvable half-period {:.3}",
                r.ln(),
                0.45 * period
            )));
        }
    }
    let w = trapezoid_weights(line.m);
    Ok(r_points
        .par_iter()
        .map(|&r| {
            let log_r = r.ln();
            let mut terms = Vec::with_capacity(line.m);
            for j in 0..line.m {
                let lambda = line.lambda(j);
                terms.push(samples.values[j] * (lambda * log_r).exp() * w[j]);
            }
            pairwise_sum_complex(&terms) * dxi / (2.0 * std::f64::consts::PI)
        })
        .collect())
}

/// Weighted norm ‖u‖ with ‖u‖² = ∫ |u(r)|² r^{-2β} dr/r.
pub fn weighted_norm(u: &GridFunction, beta: f64) -> Result<f64> {
    u.check_beta(beta)?;
    let grid = u.grid;
    let h = grid.spacing();
    let w = trapezoid_weights(grid.n);
    let mut terms = Vec::with_capacity(grid.n);
    for k in 0..grid.n {
        let a = u.values[k].norm_sqr();
        if a == 0.0 {
            terms.push(0.0);
            continue;
        }
        terms.push(a * (-2.0 * beta * grid.t(k)).exp() * w[k]);
    }
    Ok((pairwise_sum(&terms) * h).max(0.0).sqrt())
}

/// Squared L² mass of the transform along a line: (1/2π) ∫ |û(β+iξ)|² dξ.
pub fn line_mass(samples: &MellinSamples) -> f64 {
    let w = trapezoid_weights(samples.line.m);
    let terms: Vec<f64> = samples
        .values
        .iter()
        .zip(&w)
        .map(|(v, &w)| v.norm_sqr() * w)
        .collect();
    pairwise_sum(&terms) * samples.line.spacing() / (2.0 * std::f64::consts::PI)
}

/// Automatic line for Parseval-type integrals: widen xi_max until |û| falls
/// below 1e-12 of its peak, with spacing tied to the grid span so the
/// periodization images stay clear of the support. Beyond 40% of the grid's
/// Nyquist frequency 2π/h the trapezoid samples of û are aliased copies, so
/// xi_max is capped there; resolving a wider line requires a finer grid.
pub fn auto_line(u: &GridFunction, beta: f64) -> Result<VerticalLine> {
    u.check_beta(beta)?;
    let span = u.grid.t_max - u.grid.t_min;
    let dxi = (2.0 * std::f64::consts::PI / (2.5 * span)).min(0.25);
    let nyquist_cap = 0.4 * 2.0 * std::f64::consts::PI / u.grid.spacing();
    let mut xi_max = 32.0f64.min(nyquist_cap);
    let peak = transform_at_unchecked(u, Complex64::new(beta, 0.0)).norm();
    let floor = 1e-12 * peak.max(1e-300);
    for _ in 0..8 {
        let edge = transform_at_unchecked(u, Complex64::new(beta, xi_max)).norm();
        if edge < floor || xi_max >= nyquist_cap {
            break;
        }
        xi_max = (xi_max * 2.0).min(nyquist_cap);
    }
    let mut m = (2.0 * xi_max / dxi).ceil() as usize + 1;
    if m % 2 == 0 {
        m += 1;
    }
    VerticalLine::new(beta, xi_max, m.max(129))
}

/// Parseval check: returns (lhs, rhs, |lhs - rhs|) with
/// lhs = ‖u‖²_{L²_β} and rhs = (1/2π) ∫ |û(β+iξ)|² dξ.
pub fn parseval_residual(u: &GridFunction, beta: f64) -> Result<(f64, f64, f64)> {
    let lhs = weighted_norm(u, beta)?.powi(2);
    if u.values.iter().all(|v| v.re == 0.0 && v.im == 0.0) {
        return Ok((0.0, 0.0, 0.0));
    }
    let line = auto_line(u, beta)?;
    let rhs = line_mass(&mellin_forward(u, &line)?);
    Ok((lhs, rhs, (lhs - rhs).abs()))
}

/// Side selector for the Hardy-space diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardySide {
    /// u supported in (1, ∞); û analytic to the right of β.
    Right,
    /// u supported in (0, 1); û analytic to the left of β.
    Left,
}

/// Line norms ‖û‖ on Re λ = α for each requested α, where
/// ‖û‖² = (1/2π)∫|û(α+iξ)|²dξ. For admissible u these are uniformly bounded
/// on the Hardy side of β.
pub fn hardy_sup_diagnostic(
    u: &GridFunction,
    beta: f64,
    side: HardySide,
    alphas: &[f64],
) -> Result<Vec<f64>> {
    for k in 0..u.grid.n {
        let r = u.grid.r(k);
        let bad = match side {
            HardySide::Right => r < 1.0,
            HardySide::Left => r > 1.0,
        };
        if bad && u.values[k].norm() > 0.0 {
            return Err(Error::Support(format!(
                "sample at r = {r} violates {side:?}-side support"
            )));
        }
    }
    for &alpha in alphas {
        let ok = match side {
            HardySide::Right => alpha >= beta,
            HardySide::Left => alpha <= beta,
        };
        if !ok {
            return Err(Error::Support(format!(
                "alpha {alpha} is not on the {side:?} Hardy side of beta {beta}"
            )));
        }
    }
    if u.values.iter().all(|v| v.norm() == 0.0) {
        return Ok(vec![0.0; alphas.len()]);
    }
    alphas
        .iter()
        .map(|&alpha| {
            let line = auto_line(u, alpha)?;
            Ok(line_mass(&mellin_forward(u, &line)?).sqrt())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive_simpson;
    use crate::special::gamma;

    fn bump_fn(grid: LogGrid, b: &Bump) -> GridFunction {
        GridFunction::from_bump(grid, b)
    }

    #[test]
    fn gamma_pair_on_shifted_line() {
        // û(λ) = Γ(-λ) for u = e^{-r}; truncation at [1e-9, 50] keeps the
        // missing mass below 1e-9 on the β = -1 line.
        let grid = LogGrid::from_r_range(1e-9, 50.0, 4096).unwrap();
        let u = GridFunction::from_real_fn(
            grid,
            TailBehavior::PowerTails {
                zero_exponent: 0.0,
                infinity_exponent: f64::INFINITY,
            },
            |r| (-r).exp(),
        );
        let v = mellin_transform_at(&u, Complex64::new(-1.0, 0.0)).unwrap();
        assert!((v.re - 1.0).abs() < 1e-8, "Γ(1) via transform: {v}");
        assert!(v.im.abs() < 1e-10);
        // Complex point against the independent Lanczos oracle.
        let lam = Complex64::new(-1.0, 0.7);
        let got = mellin_transform_at(&u, lam).unwrap();
        let expect = gamma(-lam);
        assert!(
            (got - expect).norm() < 1e-8 * expect.norm(),
            "{got} vs {expect}"
        );
    }

    #[test]
    fn scaling_identity() {
        // u_a(r) = u(ar) has transform a^λ û(λ).
        let grid = LogGrid::from_r_range(1e-3, 1e2, 2048).unwrap();
        let b = Bump::new(2.0, 0.8, 1.0);
        let u = bump_fn(grid, &b);
        let a = 2.0f64;
        let ua = GridFunction::from_real_fn(grid, TailBehavior::CompactSupport, |r| b.eval(a * r));
        for &lam in &[Complex64::new(-1.0, 1.0), Complex64::new(-1.0, -1.0)] {
            let lhs = mellin_transform_at(&ua, lam).unwrap();
            let rhs = Complex64::new(a, 0.0).powc(lam) * mellin_transform_at(&u, lam).unwrap();
            assert!((lhs - rhs).norm() < 1e-8 * rhs.norm(), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn zero_transforms_to_zero() {
        let grid = LogGrid::from_r_range(0.1, 10.0, 64).unwrap();
        let u = GridFunction::zero(grid);
        let line = VerticalLine::new(0.0, 10.0, 33).unwrap();
        let s = mellin_forward(&u, &line).unwrap();
        assert!(s.values.iter().all(|v| v.norm() == 0.0));
        assert_eq!(parseval_residual(&u, 0.0).unwrap(), (0.0, 0.0, 0.0));
    }

    #[test]
    fn strip_violation_rejected() {
        let grid = LogGrid::from_r_range(1e-6, 1e3, 128).unwrap();
        let u = GridFunction::from_real_fn(
            grid,
            TailBehavior::PowerTails {
                zero_exponent: 0.5,
                infinity_exponent: 2.0,
            },
            |r| r.sqrt() / (1.0 + r * r * r.sqrt()),
        );
        assert!(mellin_transform_at(&u, Complex64::new(0.7, 0.0)).is_err());
        assert!(mellin_transform_at(&u, Complex64::new(-2.0, 0.0)).is_err());
        assert!(mellin_transform_at(&u, Complex64::new(0.3, 5.0)).is_ok());
    }

    #[test]
    fn round_trip_inversion_on_bump() {
        // The bump's transform decays like exp(-c√ξ) with c ≈ 0.5; xi_max =
        // 1000 puts the truncated tail near 1e-7, and n = 4096 keeps the
        // line inside the grid Nyquist range.
        let grid = LogGrid::from_r_range(1e-2, 1e2, 4096).unwrap();
        let b = Bump::new(1.5, 0.5, 1.0);
        let u = bump_fn(grid, &b);
        let line = VerticalLine::new(0.0, 1000.0, 20481).unwrap();
        let s = mellin_forward(&u, &line).unwrap();
        let rs: Vec<f64> = (0..200).map(|k| 1.0 + 1.0 * k as f64 / 199.0).collect();
        let back = mellin_inverse(&s, &rs).unwrap();
        let peak = b.eval(b.center);
        let mut worst = 0.0f64;
        for (r, v) in rs.iter().zip(&back) {
            worst = worst.max((v.re - b.eval(*r)).abs() / peak);
            assert!(v.im.abs() < 1e-9);
        }
        assert!(worst < 1e-6, "round-trip relative error {worst:.3e}");
    }

    #[test]
    fn inverse_of_zero_and_resolution_guard() {
        let line = VerticalLine::new(0.0, 50.0, 501).unwrap();
        let s = MellinSamples {
            line,
            values: vec![Complex64::new(0.0, 0.0); 501],
        };
        let v = mellin_inverse(&s, &[0.5, 1.0, 2.0]).unwrap();
        assert!(v.iter().all(|z| z.norm() == 0.0));
        // Aliasing period is 2π/0.2 ≈ 31.4; r = e^{20} is out of range.
        assert!(matches!(
            mellin_inverse(&s, &[20f64.exp()]),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn gamma_samples_invert_to_exponential() {
        let grid = LogGrid::from_r_range(1e-9, 50.0, 4096).unwrap();
        let u = GridFunction::from_real_fn(
            grid,
            TailBehavior::PowerTails {
                zero_exponent: 0.0,
                infinity_exponent: f64::INFINITY,
            },
            |r| (-r).exp(),
        );
        let line = VerticalLine::new(-1.0, 60.0, 2401).unwrap();
        let s = mellin_forward(&u, &line).unwrap();
        let back = mellin_inverse(&s, &[1.0]).unwrap();
        assert!(
            (back[0].re - (-1.0f64).exp()).abs() < 1e-6,
            "e^{{-1}} via inversion: {}",
            back[0]
        );
    }

    #[test]
    fn weighted_norm_of_log_plateau() {
        // Smooth plateau ≈ 1 on [1, e]: the β = 0 norm is the log-measure of
        // [1, e], which is 1, up to transition mass. The quantitative check is
        // against an adaptive quadrature of the same integrand.
        let grid = LogGrid::from_r_range(1e-2, 1e2, 4096).unwrap();
        let ramp = 0.15;
        let f = |r: f64| {
            let t = r.ln();
            crate::bump::smoothstep((t + ramp) / ramp)
                .min(crate::bump::smoothstep((1.0 + ramp - t) / ramp))
        };
        let u = GridFunction::from_real_fn(grid, TailBehavior::CompactSupport, f);
        let got = weighted_norm(&u, 0.0).unwrap();
        let oracle = adaptive_simpson(|t| f(t.exp()).powi(2), -1.0, 2.0, 1e-12).sqrt();
        assert!((got - oracle).abs() < 1e-8 * oracle, "{got} vs {oracle}");
        assert!((got * got - 1.0).abs() < 0.2);
    }

    #[test]
    fn weighted_norm_scaling() {
        let grid = LogGrid::from_r_range(1e-3, 1e3, 4096).unwrap();
        let b = Bump::new(2.0, 0.7, 1.3);
        let u = bump_fn(grid, &b);
        let a = 3.0f64;
        let beta = 0.25;
        let ua = GridFunction::from_real_fn(grid, TailBehavior::CompactSupport, |r| b.eval(a * r));
        let lhs = weighted_norm(&ua, beta).unwrap();
        let rhs = a.powf(beta) * weighted_norm(&u, beta).unwrap();
        assert!((lhs - rhs).abs() < 1e-10 * rhs, "{lhs} vs {rhs}");
    }

    #[test]
    fn parseval_residual_small_on_bumps() {
        let grid = LogGrid::from_r_range(1e-3, 1e3, 2048).unwrap();
        let b = Bump::new(1.3, 0.6, 1.0);
        let u = bump_fn(grid, &b);
        for &beta in &[0.0, 0.5] {
            let (lhs, rhs, res) = parseval_residual(&u, beta).unwrap();
            assert!(
                res < 1e-8 * lhs,
                "beta={beta}: lhs {lhs}, rhs {rhs}, residual {res:.3e}"
            );
        }
    }

    #[test]
    fn fourier_correspondence_against_adaptive_oracle() {
        // (Mu)(β+iξ) equals the Fourier transform of u(e^t) e^{-βt}; the
        // oracle is adaptive quadrature of the real/imaginary parts. Narrow
        // bump transforms decay like exp(-c√ξ) with small c, so the 1e-10
        // target needs the grid Nyquist frequency pushed out to ~7000.
        let grid = LogGrid::from_r_range(1e-3, 1e3, 16384).unwrap();
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let b = crate::bump::random_bump(&mut rng);
            let u = bump_fn(grid, &b);
            let beta = rng.gen_range(-0.5..0.5);
            let xi = rng.gen_range(0.0..8.0);
            let got = mellin_transform_at(&u, Complex64::new(beta, xi)).unwrap();
            let (lo, hi) = b.support();
            let (ta, tb) = (lo.ln(), hi.ln());
            let re = adaptive_simpson(
                |t| b.eval(t.exp()) * (-beta * t).exp() * (xi * t).cos(),
                ta,
                tb,
                1e-13,
            );
            let im = adaptive_simpson(
                |t| -b.eval(t.exp()) * (-beta * t).exp() * (xi * t).sin(),
                ta,
                tb,
                1e-13,
            );
            let expect = Complex64::new(re, im);
            assert!(
                (got - expect).norm() <= 1e-10 * expect.norm().max(1e-6),
                "bump {b:?}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn transform_is_entire_cauchy_riemann_proxy() {
        let grid = LogGrid::from_r_range(1e-2, 1e2, 2048).unwrap();
        let u = bump_fn(grid, &Bump::new(1.5, 0.5, 1.0));
        let at = |beta: f64, xi: f64| mellin_transform_at(&u, Complex64::new(beta, xi)).unwrap();
        let (beta, xi) = (0.2, 1.3);
        let residual = |d: f64| {
            let d_beta = (at(beta + d, xi) - at(beta - d, xi)) / (2.0 * d);
            let d_xi = (at(beta, xi + d) - at(beta, xi - d)) / (2.0 * d);
            (d_beta - d_xi / Complex64::i()).norm()
        };
        let r1 = residual(1e-2);
        let r2 = residual(5e-3);
        assert!(r1 < 1e-4, "CR residual {r1:.3e}");
        // O(δ²): halving δ should cut the residual about 4x.
        assert!(r2 < 0.4 * r1, "r1 {r1:.3e}, r2 {r2:.3e}");
    }

    #[test]
    fn conjugate_symmetry_for_real_inputs() {
        let grid = LogGrid::from_r_range(1e-2, 1e2, 512).unwrap();
        let u = bump_fn(grid, &Bump::new(1.5, 0.4, 2.0));
        let line = VerticalLine::new(0.3, 20.0, 257).unwrap();
        let s = mellin_forward(&u, &line).unwrap();
        for j in 0..line.m {
            let mirror = line.m - 1 - j;
            assert!((s.values[j] - s.values[mirror].conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn hardy_diagnostic_right_side_decreasing() {
        let grid = LogGrid::from_r_range(1e-2, 1e3, 2048).unwrap();
        let u = bump_fn(grid, &Bump::new(3.0, 1.0, 1.0)); // support [2, 4]
        let norms = hardy_sup_diagnostic(&u, 0.0, HardySide::Right, &[0.0, 0.5, 1.0]).unwrap();
        assert!(
            norms.windows(2).all(|w| w[1] < w[0]),
            "not decreasing: {norms:?}"
        );
        // Cross-check each line norm against the weighted norm via Parseval.
        for (&alpha, &n) in [0.0, 0.5, 1.0].iter().zip(&norms) {
            let direct = weighted_norm(&u, alpha).unwrap();
            assert!(
                (n - direct).abs() < 1e-8 * direct,
                "alpha={alpha}: {n} vs {direct}"
            );
        }
    }

    #[test]
    fn hardy_diagnostic_left_side_and_guards() {
        let grid = LogGrid::from_r_range(1e-3, 1e2, 2048).unwrap();
        let u = bump_fn(grid, &Bump::new(0.375, 0.125, 1.0)); // support [1/4, 1/2]
        let norms = hardy_sup_diagnostic(&u, 0.0, HardySide::Left, &[0.0, -0.5]).unwrap();
        assert!(norms.iter().all(|n| n.is_finite() && *n > 0.0));
        // Support violation: bump crossing r = 1.
        let bad = bump_fn(grid, &Bump::new(1.0, 0.3, 1.0));
        assert!(matches!(
            hardy_sup_diagnostic(&bad, 0.0, HardySide::Left, &[0.0]),
            Err(Error::Support(_))
        ));
        let zero = GridFunction::zero(grid);
        let z = hardy_sup_diagnostic(&zero, 0.0, HardySide::Right, &[0.5, 1.0]).unwrap();
        assert_eq!(z, vec![0.0, 0.0]);
    }

    #[test]
    fn csv_round_trip() {
        let grid = LogGrid::from_r_range(0.5, 2.0, 16).unwrap();
        let u = bump_fn(grid, &Bump::new(1.0, 0.3, 1.0));
        let mut buf = Vec::new();
        u.to_csv(&mut buf).unwrap();
        let back = GridFunction::from_csv(&buf[..], TailBehavior::CompactSupport).unwrap();
        assert_eq!(back.grid.n, 16);
        for k in 0..16 {
            assert!((back.values[k] - u.values[k]).norm() < 1e-15);
        }
    }
}
