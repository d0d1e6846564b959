//! The Mellin symbol K̂_α(λ) = ∫₀^∞ 𝔎_α(τ) τ^{-λ} dτ/τ of the corner kernel.
//!
//! Inside the strip |Re λ| < 1/4 the integral converges and is evaluated by
//! splitting at τ = δ₀: analytically integrated power series on the two
//! outer pieces, panel Gauss-Legendre in t = log τ on the middle piece.
//!
//! Beyond the strip the symbol continues meromorphically through the cutoff
//! splitting 𝔎_α = R_Q + Φ_Q(τ) + Φ_Q(1/τ): R̂_Q is analytic on the window
//! |Re λ| < Q + 1/4 and Φ̂_Q(λ) = Σ_{q<Q} κ_q φ̂(λ-q-1/4) carries the simple
//! poles, with φ̂(z) = Υ̂(z)/z and Υ̂ entire. The pole set is
//! (1/4 + N) ∪ (-1/4 - N); the residue at ±1/4 equals ∓Υ̂(0) = ∓1
//! independently of α.
//!
//! Large |Im λ| line values are computed on the contour Im t = -d (d inside
//! the analyticity strip of t ↦ 𝔎_α(e^t)), which exposes the e^{-d|ξ|} decay
//! as an explicit scale factor so that deep-tail moduli keep relative
//! accuracy instead of drowning in quadrature roundoff.

use crate::error::{Error, Result};
use crate::kernel::{kernel_eval_unchecked, kernel_log_complex, PoleDecomposition};
use crate::quad::{gl_panels_complex, GaussRule};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::io::Write as IoWrite;

/// Points closer than this to a pole of the continued symbol are refused.
pub const POLE_EXCLUSION_RADIUS: f64 = 0.995e-2;
/// Radius of the circular contour used for residue extraction.
pub const CONTOUR_RADIUS: f64 = 1e-2;
/// Trapezoid nodes on the residue contour.
pub const CONTOUR_NODES: usize = 64;
/// Enforced margin to the strip boundary |Re λ| = 1/4 for direct evaluation.
pub const STRIP_MARGIN: f64 = 1e-3;
/// |Im λ| above which line evaluations switch to the shifted contour.
const SHIFT_SWITCH_XI: f64 = 12.0;

/// Default continuation order: window |Re λ| < Q + 1/4 must contain λ.
pub fn default_window_order(re_lambda: f64) -> usize {
    (re_lambda.abs().ceil() as usize + 1).max(3)
}

/// Distance from λ to the pole set (1/4 + N) ∪ (-1/4 - N), with the nearest
/// pole location.
pub fn nearest_pole(lambda: Complex64) -> (f64, f64) {
    let x = lambda.re.abs();
    let mut best = (f64::INFINITY, 0.25);
    let base = ((x - 0.25).round().max(0.0)) as i64;
    for k in [base - 1, base, base + 1] {
        if k < 0 {
            continue;
        }
        let p = k as f64 + 0.25;
        let pole = if lambda.re < 0.0 { -p } else { p };
        let d = (lambda - pole).norm();
        if d < best.0 {
            best = (d, pole);
        }
    }
    best
}

/// Shared evaluator state for one half-aperture α.
#[derive(Debug, Clone)]
pub struct SymbolEvaluator {
    pub alpha: f64,
    decomposition: PoleDecomposition,
    rule: GaussRule,
}

impl SymbolEvaluator {
    pub fn new(alpha: f64, window_order: usize) -> Result<Self> {
        Ok(Self {
            alpha,
            decomposition: PoleDecomposition::new(alpha, window_order.max(2))?,
            rule: GaussRule::new(16),
        })
    }

    pub fn window_order(&self) -> usize {
        self.decomposition.order
    }

    fn series_cut(&self) -> f64 {
        // Outer pieces handled by series; middle [δ₀, 1/δ₀] by quadrature.
        self.decomposition.series().delta0
    }

    /// Head + tail series:
    /// Σ_q κ_q [δ₀^{q+1/4-λ}/(q+1/4-λ) + δ₀^{q+1/4+λ}/(q+1/4+λ)].
    fn outer_series(&self, lambda: Complex64) -> Complex64 {
        let series = self.decomposition.series();
        let log_delta = self.series_cut().ln();
        let mut acc = Complex64::new(0.0, 0.0);
        // Alternating-angle kernels (cos 2α = 0) zero out every other
        // coefficient, so termination needs two consecutive small terms.
        let mut small_run = 0;
        for q in 0..=series.n_terms() {
            let e = Complex64::new(q as f64 + 0.25, 0.0);
            let head = ((e - lambda) * log_delta).exp() / (e - lambda);
            let tail = ((e + lambda) * log_delta).exp() / (e + lambda);
            let term = (head + tail) * series.kappa(q);
            acc += term;
            if q > 4 && term.norm() < 1e-17 * acc.norm().max(1e-30) {
                small_run += 1;
                if small_run >= 2 {
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        acc
    }

    fn middle_panels(&self, span: f64, xi: f64) -> usize {
        ((span * (1.0 + xi.abs()) / 2.0).ceil() as usize).max(24)
    }

    /// Direct evaluation in the strip |Re λ| < 1/4 - margin.
    pub fn direct(&self, lambda: Complex64) -> Result<Complex64> {
        if lambda.re.abs() > 0.25 - STRIP_MARGIN {
            return Err(Error::Strip(format!(
                "Re λ = {} outside direct-evaluation strip |Re λ| <= {}",
                lambda.re,
                0.25 - STRIP_MARGIN
            )));
        }
        let t_cut = -self.series_cut().ln();
        let alpha = self.alpha;
        let panels = self.middle_panels(2.0 * t_cut, lambda.im);
        let middle = gl_panels_complex(&self.rule, -t_cut, t_cut, panels, |t| {
            kernel_eval_unchecked(alpha, t.exp()) * (-lambda * t).exp()
        });
        Ok(middle + self.outer_series(lambda))
    }

    /// Mellin transform of Υ(τ) = τ φ'(τ); entire, compactly supported
    /// integrand.
    fn upsilon_hat(&self, z: Complex64) -> Complex64 {
        let cutoff = self.decomposition.cutoff;
        let (a, b) = (cutoff.inner.ln(), cutoff.outer.ln());
        let panels = ((b - a) * (1.0 + z.im.abs()) / 1.5).ceil().max(16.0) as usize;
        let dec = &self.decomposition;
        gl_panels_complex(&self.rule, a, b, panels, |t| {
            dec.upsilon(t.exp()) * (-z * t).exp()
        })
    }

    /// φ̂(z) = Υ̂(z)/z; simple pole at z = 0 with residue Υ̂(0) = -1.
    fn phi_hat(&self, z: Complex64) -> Complex64 {
        self.upsilon_hat(z) / z
    }

    /// Φ̂_Q(λ) = Σ_{q<Q} κ_q φ̂(λ - q - 1/4).
    fn phi_component_hat(&self, lambda: Complex64) -> Complex64 {
        let series = self.decomposition.series();
        let mut acc = Complex64::new(0.0, 0.0);
        for q in 0..self.decomposition.order {
            let z = lambda - (q as f64 + 0.25);
            acc += series.kappa(q) * self.phi_hat(z);
        }
        acc
    }

    /// R̂_Q(λ): panel quadrature on [δ₀, 1/δ₀] plus the exact series tails.
    /// Analytic on the window |Re λ| < Q + 1/4.
    fn remainder_hat(&self, lambda: Complex64) -> Complex64 {
        let t_cut = -self.series_cut().ln();
        let dec = &self.decomposition;
        // The three continuation parts are O(1) and cancel down to |K̂|, so
        // this piece must be converged to near machine precision.
        let panels = self.middle_panels(2.0 * t_cut, lambda.im).max(48);
        let middle = gl_panels_complex(&self.rule, -t_cut, t_cut, panels, |t| {
            dec.remainder(t.exp()) * (-lambda * t).exp()
        });
        // Tails Σ_{q>=Q} κ_q e^{-(q+1/4∓λ) T} / (q+1/4∓λ).
        let series = dec.series();
        let mut tails = Complex64::new(0.0, 0.0);
        let mut small_run = 0;
        for q in dec.order..=series.n_terms() {
            let e = Complex64::new(q as f64 + 0.25, 0.0);
            let right = (-(e + lambda) * t_cut).exp() / (e + lambda);
            let left = (-(e - lambda) * t_cut).exp() / (e - lambda);
            let term = (right + left) * series.kappa(q);
            tails += term;
            if term.norm() < 1e-17 * (middle.norm() + tails.norm()).max(1e-30) {
                small_run += 1;
                if small_run >= 2 {
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        middle + tails
    }

    /// Meromorphic continuation K̂_α = R̂_Q + Φ̂_Q(λ) + Φ̂_Q(-λ) on the window.
    pub fn extended(&self, lambda: Complex64) -> Result<Complex64> {
        let window = self.decomposition.order as f64 + 0.25;
        if lambda.re.abs() >= window - STRIP_MARGIN {
            return Err(Error::Window(format!(
                "Re λ = {} outside continuation window |Re λ| < {window}; raise Q",
                lambda.re
            )));
        }
        let (dist, pole) = nearest_pole(lambda);
        if dist < POLE_EXCLUSION_RADIUS {
            return Err(Error::PoleProximity {
                pole,
                distance: dist,
            });
        }
        Ok(self.remainder_hat(lambda)
            + self.phi_component_hat(lambda)
            + self.phi_component_hat(-lambda))
    }

    /// Best available evaluation: direct inside the strip, continuation
    /// outside.
    pub fn eval(&self, lambda: Complex64) -> Result<Complex64> {
        if lambda.re.abs() <= 0.25 - STRIP_MARGIN {
            self.direct(lambda)
        } else {
            self.extended(lambda)
        }
    }

    /// Line value as mantissa·e^{log_scale}. For |ξ| beyond the switch the
    /// contour is shifted to Im t = -d with d = 0.9·2·min(α, π-α), which is
    /// strictly inside the analyticity strip of t ↦ 𝔎_α(e^t); the factor
    /// e^{iλd} is peeled off as the explicit scale e^{-ξd}.
    pub fn line_scaled(&self, mu: f64, xi: f64) -> Result<(Complex64, f64)> {
        if mu.abs() > 0.25 - STRIP_MARGIN {
            return Err(Error::Strip(format!(
                "scaled line evaluation requires |mu| < 1/4, got {mu}"
            )));
        }
        if xi < 0.0 {
            let (v, s) = self.line_scaled(mu, -xi)?;
            return Ok((v.conj(), s));
        }
        if xi <= SHIFT_SWITCH_XI {
            return Ok((self.direct(Complex64::new(mu, xi))?, 0.0));
        }
        let alpha_eff = self.alpha.min(PI - self.alpha);
        let d = 0.9 * 2.0 * alpha_eff;
        let lambda = Complex64::new(mu, xi);
        let t_cut = -self.series_cut().ln();
        let c2a = self.decomposition.series().cos_two_alpha;
        // The peak of |𝔎_α(e^{s-id})| near s = 0 has width ~ (2α - d); keep
        // panels at least that fine.
        let peak_width = (2.0 * alpha_eff - d).max(0.02);
        let panels = ((2.0 * t_cut * (1.0 + xi) / 3.0).ceil() as usize)
            .max((2.0 * t_cut / (0.5 * peak_width)).ceil() as usize)
            .max(48);
        let shift = Complex64::new(0.0, -d);
        let middle = gl_panels_complex(&self.rule, -t_cut, t_cut, panels, |s| {
            kernel_log_complex(c2a, Complex64::new(s, 0.0) + shift) * (-lambda * s).exp()
        });
        let series = self.decomposition.series();
        let mut tails = Complex64::new(0.0, 0.0);
        let mut small_run = 0;
        for q in 0..=series.n_terms() {
            let e = Complex64::new(q as f64 + 0.25, 0.0);
            let rot = Complex64::new(0.0, (q as f64 + 0.25) * d).exp();
            let right = rot * (-(e + lambda) * t_cut).exp() / (e + lambda);
            let left = rot.conj() * (-(e - lambda) * t_cut).exp() / (e - lambda);
            let term = (right + left) * series.kappa(q);
            tails += term;
            if q > 4 && term.norm() < 1e-18 * (middle.norm() + tails.norm()).max(1e-30) {
                small_run += 1;
                if small_run >= 2 {
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        // K̂(λ) = e^{iλd}·I = e^{iμd} e^{-ξd} · I.
        let mantissa = (middle + tails) * Complex64::new(0.0, mu * d).exp();
        Ok((mantissa, -xi * d))
    }

    /// |K̂_α(μ+iξ)| through the scaled path; 0.0 when the scale underflows.
    pub fn line_abs(&self, mu: f64, xi: f64) -> Result<f64> {
        let (mantissa, log_scale) = self.line_scaled(mu, xi)?;
        Ok(mantissa.norm() * log_scale.exp())
    }

    /// log |K̂_α(μ+iξ)|; -inf when the mantissa vanishes.
    pub fn line_log_abs(&self, mu: f64, xi: f64) -> Result<f64> {
        let (mantissa, log_scale) = self.line_scaled(mu, xi)?;
        Ok(mantissa.norm().ln() + log_scale)
    }
}

/// K̂_α(λ) by direct strip quadrature.
pub fn symbol_direct(alpha: f64, lambda: Complex64) -> Result<Complex64> {
    SymbolEvaluator::new(alpha, 3)?.direct(lambda)
}

/// K̂_α(λ) by meromorphic continuation of order `window_order`.
pub fn symbol_extended(alpha: f64, lambda: Complex64, window_order: usize) -> Result<Complex64> {
    SymbolEvaluator::new(alpha, window_order)?.extended(lambda)
}

/// Residue of K̂_α at a pole of (1/4 + N) ∪ (-1/4 - N), by trapezoid contour
/// quadrature: the mean of (λ-λ₀)K̂_α(λ) over a circle of radius 1e-2.
pub fn residue_at(alpha: f64, pole: f64, window_order: usize) -> Result<Complex64> {
    let k = pole.abs() - 0.25;
    if (k - k.round()).abs() > 1e-9 || k < -1e-9 {
        return Err(Error::Domain(format!(
            "{pole} is not a pole: the pole set is ±(1/4 + N)"
        )));
    }
    if pole.abs() >= window_order as f64 + 0.25 {
        return Err(Error::Window(format!(
            "pole {pole} outside window order {window_order}"
        )));
    }
    // Poles are spaced 1/2 apart at minimum, so the 1e-2 contour cannot
    // reach a neighbouring pole; guard anyway against parameter changes.
    if CONTOUR_RADIUS > 0.25 {
        return Err(Error::Contour(format!(
            "contour radius {CONTOUR_RADIUS} too large for pole spacing"
        )));
    }
    let eval = SymbolEvaluator::new(alpha, window_order)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..CONTOUR_NODES {
        let theta = 2.0 * PI * j as f64 / CONTOUR_NODES as f64;
        let offset = Complex64::from_polar(CONTOUR_RADIUS, theta);
        let lambda = Complex64::new(pole, 0.0) + offset;
        acc += offset * eval.extended(lambda)?;
    }
    Ok(acc / CONTOUR_NODES as f64)
}

/// One weighted line profile |K̂_α(μ+iξ)|² |ξ|^{2p}.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SymbolLineProfile {
    pub alpha: f64,
    pub mu: f64,
    pub weight_power: usize,
    pub xi: Vec<f64>,
    pub abs_symbol: Vec<f64>,
    pub weighted: Vec<f64>,
    /// First grid point from which the weighted profile is non-increasing.
    pub xi0: Option<f64>,
    pub peak: f64,
}

impl SymbolLineProfile {
    pub fn final_over_peak(&self) -> f64 {
        if self.peak == 0.0 {
            0.0
        } else {
            self.weighted.last().copied().unwrap_or(0.0) / self.peak
        }
    }

    /// CSV export: rows `xi,abs_symbol,weighted`.
    pub fn to_csv<W: IoWrite>(&self, mut w: W) -> Result<()> {
        writeln!(w, "xi,abs_symbol,weighted")?;
        for j in 0..self.xi.len() {
            writeln!(
                w,
                "{:.17e},{:.17e},{:.17e}",
                self.xi[j], self.abs_symbol[j], self.weighted[j]
            )?;
        }
        Ok(())
    }
}

/// Weighted decay profile along Re λ = μ. Inside the strip the scaled
/// contour path keeps relative accuracy far into the tail; outside the
/// strip the continuation path is used and pole-adjacent samples propagate
/// errors.
pub fn decay_profile(
    alpha: f64,
    mu: f64,
    weight_power: usize,
    xi_grid: &[f64],
) -> Result<SymbolLineProfile> {
    if xi_grid.is_empty() {
        return Err(Error::Domain("empty xi grid".into()));
    }
    let in_strip = mu.abs() <= 0.25 - STRIP_MARGIN;
    let order = default_window_order(mu);
    let eval = SymbolEvaluator::new(alpha, order)?;
    let mut abs_symbol = Vec::with_capacity(xi_grid.len());
    for &xi in xi_grid {
        let a = if in_strip {
            eval.line_abs(mu, xi)?
        } else {
            eval.extended(Complex64::new(mu, xi))?.norm()
        };
        abs_symbol.push(a);
    }
    let weighted: Vec<f64> = xi_grid
        .iter()
        .zip(&abs_symbol)
        .map(|(&xi, &a)| {
            if a == 0.0 {
                0.0
            } else if weight_power == 0 {
                a * a
            } else if xi == 0.0 {
                0.0
            } else {
                (2.0 * a.ln() + 2.0 * weight_power as f64 * xi.abs().ln()).exp()
            }
        })
        .collect();
    let peak = weighted.iter().cloned().fold(0.0, f64::max);
    let argmax = weighted
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    // Earliest index >= argmax from which the profile never increases again.
    let mut i = weighted.len() - 1;
    while i > argmax && weighted[i - 1] >= weighted[i] {
        i -= 1;
    }
    let xi0 = if i <= argmax + 1 {
        Some(xi_grid[argmax])
    } else if i < weighted.len() - 1 {
        Some(xi_grid[i])
    } else {
        None
    };
    Ok(SymbolLineProfile {
        alpha,
        mu,
        weight_power,
        xi: xi_grid.to_vec(),
        abs_symbol,
        weighted,
        xi0,
        peak,
    })
}

/// Zero plus a geometric ladder reaching xi_hi; the growing spacing keeps
/// the noise-floor tail monotone sample-to-sample.
pub fn default_profile_grid(xi_hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2);
    let mut grid = vec![0.0];
    let lo: f64 = 0.05;
    for k in 0..points {
        grid.push(lo * (xi_hi / lo).powf(k as f64 / (points - 1) as f64));
    }
    grid
}

/// Sup moduli of the symbol along lines: m0 on the imaginary axis, m1 for
/// the |ξ|²/(1+|ξ|)-weighted square on Re λ = μ, and the sup of
/// |K̂_α - K̂_{π/2}| on the ±1/4 lines (where each term alone has a pole but
/// the α-independent leading cutoff term cancels exactly).
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ContinuityModuli {
    pub alpha: f64,
    pub m0: f64,
    pub m0_arg: f64,
    pub m1: f64,
    pub m1_arg: f64,
    pub m_diff: f64,
    pub m_diff_arg: f64,
}

/// Difference evaluator D(λ) = K̂_α(λ) - K̂_{π/2}(λ) with the q = 0 cutoff
/// terms cancelled analytically, valid across the ±1/4 lines.
pub struct SymbolDifference {
    eval_a: SymbolEvaluator,
    eval_flat: SymbolEvaluator,
}

impl SymbolDifference {
    pub fn new(alpha: f64, window_order: usize) -> Result<Self> {
        Ok(Self {
            eval_a: SymbolEvaluator::new(alpha, window_order)?,
            eval_flat: SymbolEvaluator::new(PI / 2.0, window_order)?,
        })
    }

    pub fn eval(&self, lambda: Complex64) -> Result<Complex64> {
        let window = self.eval_a.decomposition.order as f64 + 0.25;
        if lambda.re.abs() >= window - STRIP_MARGIN {
            return Err(Error::Window(format!(
                "Re λ = {} outside difference window",
                lambda.re
            )));
        }
        // R̂ parts evaluated separately (each analytic on the window).
        let r_diff = self.eval_a.remainder_hat(lambda) - self.eval_flat.remainder_hat(lambda);
        // Φ̂ parts: the q = 0 terms are α-independent and drop; q >= 1 terms
        // keep their poles at ±(q + 1/4), which stay off the ±1/4 lines.
        let sa = self.eval_a.decomposition.series();
        let sf = self.eval_flat.decomposition.series();
        let mut phi_diff = Complex64::new(0.0, 0.0);
        for q in 1..self.eval_a.decomposition.order {
            let dk = sa.kappa(q) - sf.kappa(q);
            if dk == 0.0 {
                continue;
            }
            let zp = lambda - (q as f64 + 0.25);
            let zm = -lambda - (q as f64 + 0.25);
            if zp.norm() < POLE_EXCLUSION_RADIUS || zm.norm() < POLE_EXCLUSION_RADIUS {
                return Err(Error::PoleProximity {
                    pole: if zp.norm() < zm.norm() {
                        q as f64 + 0.25
                    } else {
                        -(q as f64 + 0.25)
                    },
                    distance: zp.norm().min(zm.norm()),
                });
            }
            phi_diff += dk * (self.eval_a.phi_hat(zp) + self.eval_a.phi_hat(zm));
        }
        Ok(r_diff + phi_diff)
    }
}

/// Golden-section refinement of a maximum inside [a, b].
fn golden_max(f: &mut impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-10 * (1.0 + a.abs()) {
            break;
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Coarse grid argmax followed by golden-section refinement.
fn sup_on_grid(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let xs: Vec<f64> = (0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect();
    let mut best = (xs[0], f(xs[0]));
    let mut best_i = 0usize;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    let a = xs[best_i.saturating_sub(1)];
    let b = xs[(best_i + 1).min(points - 1)];
    if a == b {
        return best;
    }
    let refined = golden_max(f, a, b);
    if refined.1 > best.1 {
        refined
    } else {
        best
    }
}

/// Sup moduli; `mu_for_m1` selects the line for m1 and `grid_points` sets
/// the coarse search resolution (the suprema sit at moderate ξ; the tails
/// decay per the line profiles).
pub fn continuity_moduli(
    alpha: f64,
    mu_for_m1: f64,
    grid_points: usize,
) -> Result<ContinuityModuli> {
    let order = default_window_order(mu_for_m1).max(3);
    let eval = SymbolEvaluator::new(alpha, order)?;
    let points = grid_points.max(65);

    let mut f0 = |xi: f64| eval.line_abs(0.0, xi).unwrap_or(0.0);
    let (m0_arg, m0) = sup_on_grid(&mut f0, 0.0, 30.0, points);

    let in_strip = mu_for_m1.abs() <= 0.25 - STRIP_MARGIN;
    let mut f1 = |xi: f64| {
        let a = if in_strip {
            eval.line_abs(mu_for_m1, xi).unwrap_or(0.0)
        } else {
            eval.extended(Complex64::new(mu_for_m1, xi))
                .map(|v| v.norm())
                .unwrap_or(0.0)
        };
        a * a * xi * xi / (1.0 + xi.abs())
    };
    let (m1_arg, m1) = sup_on_grid(&mut f1, 0.0, 40.0, points);

    let diff = SymbolDifference::new(alpha, order)?;
    let mut fd = |xi: f64| {
        diff.eval(Complex64::new(0.25, xi))
            .map(|v| v.norm())
            .unwrap_or(0.0)
    };
    let (m_diff_arg, m_diff) = sup_on_grid(&mut fd, 0.0, 40.0, points);

    Ok(ContinuityModuli {
        alpha,
        m0,
        m0_arg,
        m1,
        m1_arg,
        m_diff,
        m_diff_arg,
    })
}

/// Facade bundling the continued symbol for one α: pole set in the window,
/// cached residues, and the evaluator.
#[derive(Debug)]
pub struct MellinSymbol {
    pub alpha: f64,
    pub window_order: usize,
    pub poles: Vec<f64>,
    residues: Vec<Complex64>,
    evaluator: SymbolEvaluator,
}

impl MellinSymbol {
    pub fn new(alpha: f64, window_order: usize) -> Result<Self> {
        let evaluator = SymbolEvaluator::new(alpha, window_order)?;
        let mut poles = Vec::new();
        for k in 0..window_order {
            poles.push(k as f64 + 0.25);
            poles.push(-(k as f64 + 0.25));
        }
        poles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let residues = poles
            .iter()
            .map(|&p| residue_at(alpha, p, window_order))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alpha,
            window_order,
            poles,
            residues,
            evaluator,
        })
    }

    pub fn residues(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.poles
            .iter()
            .cloned()
            .zip(self.residues.iter().cloned())
    }

    pub fn eval(&self, lambda: Complex64) -> Result<Complex64> {
        self.evaluator.eval(lambda)
    }

    pub fn evaluator(&self) -> &SymbolEvaluator {
        &self.evaluator
    }
}
