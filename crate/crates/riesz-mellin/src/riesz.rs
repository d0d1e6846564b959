//! The boundary operator with kernel |x-y|^{-1/2}: Galerkin assembly on
//! polygon meshes, partition-of-unity localisations, the corner transfer
//! map u(c + t e_±) = (p(t) ± p̃(t))/√2, the half-line corner forms with
//! kernels 𝔎₀(t/s) ± 𝔎_θ(t/s) times (st)^{-1/4}, and the multiplicative
//! convolution difference applied either by direct quadrature or through
//! its Mellin symbol.

use crate::error::{Error, Result};
use crate::geometry::{CornerFrame, PartitionOfUnity, Point2};
use crate::kernel::kernel_eval_unchecked;
use crate::mellin::{
    mellin_inverse, mellin_transform_at, weighted_norm, GridFunction, LogGrid, MellinSamples,
    TailBehavior, VerticalLine,
};
use crate::quad::{pairwise_sum, trapezoid_weights, GaussRule};
use crate::sobolev::{
    hardy_weight_matrix, mass_matrix, slobodeckii_matrix, BoundaryFESpace, CurveMesh, FarField,
};
use crate::symbol::SymbolEvaluator;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use std::f64::consts::{FRAC_PI_2, SQRT_2};

/// A smooth real function with known compact support, the quadrature
/// currency of the corner forms.
pub struct SupportedFn<'a> {
    pub support: (f64, f64),
    pub f: &'a (dyn Fn(f64) -> f64 + Sync),
}

impl<'a> SupportedFn<'a> {
    pub fn new(support: (f64, f64), f: &'a (dyn Fn(f64) -> f64 + Sync)) -> Self {
        Self { support, f }
    }

    fn eval(&self, t: f64) -> f64 {
        if t <= self.support.0 || t >= self.support.1 {
            0.0
        } else {
            (self.f)(t)
        }
    }
}

/// Function on a corner cone as values on the two rays over a shared log
/// grid.
#[derive(Debug, Clone)]
pub struct ConeFunction {
    pub grid: LogGrid,
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
}

/// Transfer map: (p, p̃) ↦ u with u(c + t e_±) = (p(t) ± p̃(t))/√2.
pub fn theta_map(p: &GridFunction, p_tilde: &GridFunction) -> Result<ConeFunction> {
    if p.grid != p_tilde.grid {
        return Err(Error::Grid("theta map requires a common grid".into()));
    }
    if !p.is_real() || !p_tilde.is_real() {
        return Err(Error::Grid("theta map expects real-valued inputs".into()));
    }
    let n = p.grid.n;
    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for k in 0..n {
        plus.push((p.values[k].re + p_tilde.values[k].re) / SQRT_2);
        minus.push((p.values[k].re - p_tilde.values[k].re) / SQRT_2);
    }
    Ok(ConeFunction {
        grid: p.grid,
        plus,
        minus,
    })
}

/// Inverse of [`theta_map`]: the orthogonal 2x2 mixing is its own inverse
/// up to the ray/component swap.
pub fn theta_map_inverse(u: &ConeFunction) -> (GridFunction, GridFunction) {
    let n = u.grid.n;
    let mut p = Vec::with_capacity(n);
    let mut p_tilde = Vec::with_capacity(n);
    for k in 0..n {
        p.push(Complex64::new((u.plus[k] + u.minus[k]) / SQRT_2, 0.0));
        p_tilde.push(Complex64::new((u.plus[k] - u.minus[k]) / SQRT_2, 0.0));
    }
    (
        GridFunction::new(u.grid, p, TailBehavior::CompactSupport).unwrap(),
        GridFunction::new(u.grid, p_tilde, TailBehavior::CompactSupport).unwrap(),
    )
}

/// Sign selecting between the two corner forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormSign {
    Plus,
    Minus,
}

fn check_support(p: &SupportedFn) -> Result<()> {
    if p.support.0 <= 0.0 {
        return Err(Error::Support(format!(
            "corner forms need support strictly inside (0, ∞); got lower end {}",
            p.support.0
        )));
    }
    if p.support.1 <= p.support.0 {
        return Err(Error::Support("empty support".into()));
    }
    Ok(())
}

/// ∫∫ p(s) q(t) |t-s|^{-1/2} ds dt with smooth p, q: outer Gauss panels in
/// t, inner split at s = t with the square-root substitution that removes
/// the kernel singularity.
fn flat_pair_form(p: &SupportedFn, q: &SupportedFn, rule: &GaussRule, panels: usize) -> f64 {
    let (ta, tb) = q.support;
    let (sa, sb) = p.support;
    let dt = (tb - ta) / panels as f64;
    let mut outer_parts = Vec::new();
    for pe in 0..panels {
        let lo = ta + pe as f64 * dt;
        for (t, wt) in rule.mapped(lo, lo + dt) {
            let qt = q.eval(t);
            if qt == 0.0 {
                outer_parts.push(0.0);
                continue;
            }
            let mut inner = 0.0;
            // s < t branch: s = t - σ², ds = -2σ dσ, |t-s|^{-1/2} = 1/σ.
            if sa < t {
                let sig_max = (t - sa.max(0.0)).sqrt();
                inner += 2.0
                    * gl_panels_scalar(rule, 0.0, sig_max, panels, |sig| p.eval(t - sig * sig));
            }
            // s > t branch: s = t + σ².
            if sb > t {
                let sig_max = (sb - t.max(0.0)).sqrt();
                inner += 2.0
                    * gl_panels_scalar(rule, 0.0, sig_max, panels, |sig| p.eval(t + sig * sig));
            }
            outer_parts.push(wt * qt * inner);
        }
    }
    pairwise_sum(&outer_parts)
}

fn gl_panels_scalar(
    rule: &GaussRule,
    a: f64,
    b: f64,
    panels: usize,
    mut f: impl FnMut(f64) -> f64,
) -> f64 {
    let panels = panels.max(1);
    let dx = (b - a) / panels as f64;
    let mut parts = Vec::with_capacity(panels);
    for p in 0..panels {
        let lo = a + p as f64 * dx;
        parts.push(rule.integrate(lo, lo + dx, &mut f));
    }
    pairwise_sum(&parts)
}

/// ∫∫ 𝔎_θ(t/s) p(s) q(t) (st)^{-1/4} ds dt; smooth for θ ∈ (0, π).
fn angled_pair_form(
    theta: f64,
    p: &SupportedFn,
    q: &SupportedFn,
    rule: &GaussRule,
    panels: usize,
) -> f64 {
    let (ta, tb) = q.support;
    let (sa, sb) = p.support;
    let dt = (tb - ta) / panels as f64;
    let mut outer = Vec::new();
    for pe in 0..panels {
        let lo = ta + pe as f64 * dt;
        for (t, wt) in rule.mapped(lo, lo + dt) {
            let qt = q.eval(t);
            if qt == 0.0 {
                outer.push(0.0);
                continue;
            }
            let inner = gl_panels_scalar(rule, sa, sb, panels, |s| {
                p.eval(s) * kernel_eval_unchecked(theta, t / s) * (s * t).powf(-0.25)
            });
            outer.push(wt * qt * inner);
        }
    }
    pairwise_sum(&outer)
}

/// Corner form ⟨(𝔎₀ ± 𝔎_θ)-operator p, q⟩ by direct double quadrature. Along
/// a single ray 𝔎₀(t/s)(st)^{-1/4} = |t-s|^{-1/2} exactly, so the flat part
/// is the weakly singular line form.
pub fn corner_form_direct(
    theta: f64,
    sign: FormSign,
    p: &SupportedFn,
    q: &SupportedFn,
) -> Result<f64> {
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(Error::Domain(format!("theta in (0, pi) required, got {theta}")));
    }
    check_support(p)?;
    check_support(q)?;
    let rule = GaussRule::new(16);
    let panels = 14;
    let flat = flat_pair_form(p, q, &rule, panels);
    let angled = angled_pair_form(theta, p, q, &rule, panels);
    Ok(match sign {
        FormSign::Plus => flat + angled,
        FormSign::Minus => flat - angled,
    })
}

/// Both sides of the cone-to-half-line transfer identity:
/// lhs = ⟨A_Γ(χ·Θ(p,p̃)), χ·Θ(q,q̃)⟩ by four ray-block quadratures with
/// Euclidean distances taken from actual plane coordinates; rhs is the sum
/// of the two half-line corner forms with χ-multiplied arguments. Returns
/// (lhs, rhs, |lhs-rhs|).
pub fn corner_identity_check(
    theta: f64,
    p: &SupportedFn,
    p_tilde: &SupportedFn,
    q: &SupportedFn,
    q_tilde: &SupportedFn,
    cutoff: Option<&(dyn Fn(f64) -> f64 + Sync)>,
) -> Result<(f64, f64, f64)> {
    for f in [p, p_tilde, q, q_tilde] {
        check_support(f)?;
    }
    let frame = CornerFrame::with_aperture(theta);
    let chi = |t: f64| cutoff.map_or(1.0, |c| c(t));
    let lo = p
        .support
        .0
        .min(p_tilde.support.0)
        .min(q.support.0)
        .min(q_tilde.support.0);
    let hi = p
        .support
        .1
        .max(p_tilde.support.1)
        .max(q.support.1)
        .max(q_tilde.support.1);
    let u_plus = |s: f64| chi(s) * (p.eval(s) + p_tilde.eval(s)) / SQRT_2;
    let u_minus = |s: f64| chi(s) * (p.eval(s) - p_tilde.eval(s)) / SQRT_2;
    let v_plus = |t: f64| chi(t) * (q.eval(t) + q_tilde.eval(t)) / SQRT_2;
    let v_minus = |t: f64| chi(t) * (q.eval(t) - q_tilde.eval(t)) / SQRT_2;

    let rule = GaussRule::new(16);
    let panels = 14;
    // Same-ray blocks: |x - y| reduces to |t - s| on the ray.
    let same_ray = |u: &(dyn Fn(f64) -> f64 + Sync), v: &(dyn Fn(f64) -> f64 + Sync)| {
        let su = SupportedFn::new((lo, hi), u);
        let sv = SupportedFn::new((lo, hi), v);
        flat_pair_form(&su, &sv, &rule, panels)
    };
    // Cross-ray blocks with plane geometry.
    let cross_ray = |u: &dyn Fn(f64) -> f64, v: &dyn Fn(f64) -> f64, v_on_plus: bool| {
        let dt = (hi - lo) / panels as f64;
        let mut outer = Vec::new();
        for pe in 0..panels {
            let plo = lo + pe as f64 * dt;
            for (t, wt) in rule.mapped(plo, plo + dt) {
                let vt = v(t);
                if vt == 0.0 {
                    outer.push(0.0);
                    continue;
                }
                let x = if v_on_plus {
                    frame.on_plus_ray(t)
                } else {
                    frame.on_minus_ray(t)
                };
                let inner = gl_panels_scalar(&rule, lo, hi, panels, |s| {
                    let y = if v_on_plus {
                        frame.on_minus_ray(s)
                    } else {
                        frame.on_plus_ray(s)
                    };
                    u(s) / x.dist(y).sqrt()
                });
                outer.push(wt * vt * inner);
            }
        }
        pairwise_sum(&outer)
    };
    let lhs = same_ray(&u_plus, &v_plus)
        + same_ray(&u_minus, &v_minus)
        + cross_ray(&u_minus, &v_plus, true)
        + cross_ray(&u_plus, &v_minus, false);

    let chi_p = |s: f64| chi(s) * p.eval(s);
    let chi_pt = |s: f64| chi(s) * p_tilde.eval(s);
    let chi_q = |s: f64| chi(s) * q.eval(s);
    let chi_qt = |s: f64| chi(s) * q_tilde.eval(s);
    let rhs = corner_form_direct(
        theta,
        FormSign::Plus,
        &SupportedFn::new(p.support, &chi_p),
        &SupportedFn::new(q.support, &chi_q),
    )? + corner_form_direct(
        theta,
        FormSign::Minus,
        &SupportedFn::new(p_tilde.support, &chi_pt),
        &SupportedFn::new(q_tilde.support, &chi_qt),
    )?;
    Ok((lhs, rhs, (lhs - rhs).abs()))
}

/// The multiplicative convolution difference K_{π/2} - K_θ: its kernel
/// (𝔎_{π/2} - 𝔎_θ)(t/s)(st)^{-1/4} is smooth across t = s (the singular
/// flat parts cancel) and decays like (t/s)^{±5/4}.
pub struct CornerDifferenceOperator {
    pub theta: f64,
    evaluator_theta: SymbolEvaluator,
    evaluator_flat: SymbolEvaluator,
}

/// Which application path to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApplicationPath {
    Direct,
    Mellin,
}

impl CornerDifferenceOperator {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < std::f64::consts::PI) {
            return Err(Error::Domain(format!("theta in (0, pi) required, got {theta}")));
        }
        Ok(Self {
            theta,
            evaluator_theta: SymbolEvaluator::new(theta, 3)?,
            evaluator_flat: SymbolEvaluator::new(FRAC_PI_2, 3)?,
        })
    }

    /// (𝔎_{π/2} - 𝔎_θ)(τ).
    pub fn kernel_difference(&self, tau: f64) -> f64 {
        kernel_eval_unchecked(FRAC_PI_2, tau) - kernel_eval_unchecked(self.theta, tau)
    }

    fn check_compact(&self, u: &GridFunction) -> Result<()> {
        if u.values[0].norm() != 0.0 || u.values[u.grid.n - 1].norm() != 0.0 {
            return Err(Error::Support(
                "input must be compactly supported inside the grid".into(),
            ));
        }
        if !u.is_real() {
            return Err(Error::Support("input must be real-valued".into()));
        }
        Ok(())
    }

    fn output_tails() -> TailBehavior {
        // v(r) = O(r) at 0 and O(r^{-3/2}) at ∞ from the τ^{±5/4} kernel
        // decay against (st)^{-1/4}.
        TailBehavior::PowerTails {
            zero_exponent: 1.0,
            infinity_exponent: 1.5,
        }
    }

    /// v(r) = ∫ (𝔎_{π/2} - 𝔎_θ)(r/s)(sr)^{-1/4} u(s) ds by trapezoid over
    /// the input grid in log s (spectrally accurate: u is smooth and
    /// compactly supported).
    pub fn apply_direct(&self, u: &GridFunction) -> Result<GridFunction> {
        self.check_compact(u)?;
        let grid = u.grid;
        let h = grid.spacing();
        let w = trapezoid_weights(grid.n);
        let mut out = Vec::with_capacity(grid.n);
        for j in 0..grid.n {
            let r = grid.r(j);
            let mut terms = Vec::with_capacity(grid.n);
            for k in 0..grid.n {
                let uv = u.values[k].re;
                if uv == 0.0 {
                    terms.push(0.0);
                    continue;
                }
                let s = grid.r(k);
                // ds = s dσ on the log grid.
                terms.push(
                    w[k] * uv * self.kernel_difference(r / s) * (s * r).powf(-0.25) * s,
                );
            }
            out.push(Complex64::new(pairwise_sum(&terms) * h, 0.0));
        }
        GridFunction::new(grid, out, Self::output_tails())
    }

    /// Mellin-diagonal application on the line Re λ = -1/4 (the center of
    /// the factorisation strip -1/2 < Re λ < 0):
    /// v̂(λ) = [K̂_{π/2} - K̂_θ](λ + 1/4) û(λ - 1/2), inverted on the grid.
    pub fn apply_mellin(&self, u: &GridFunction, xi_max: f64, m: usize) -> Result<GridFunction> {
        self.check_compact(u)?;
        let line = VerticalLine::new(-0.25, xi_max, m)?;
        let mut values = Vec::with_capacity(m);
        let center = (m - 1) / 2;
        for j in center..m {
            let lambda = line.lambda(j);
            let symbol_arg = lambda + 0.25; // on the imaginary axis
            let d = self.evaluator_flat.direct(symbol_arg)?
                - self.evaluator_theta.direct(symbol_arg)?;
            let u_hat = mellin_transform_at(u, lambda - 0.5)?;
            values.push(d * u_hat);
        }
        let mut all = vec![Complex64::new(0.0, 0.0); m];
        for (off, v) in values.into_iter().enumerate() {
            all[center + off] = v;
            // v is real: v̂(conj λ) = conj v̂(λ) on the vertical line.
            all[center - off] = v.conj();
        }
        let samples = MellinSamples { line, values: all };
        let r_points: Vec<f64> = (0..u.grid.n).map(|k| u.grid.r(k)).collect();
        let back = mellin_inverse(&samples, &r_points)?;
        let out: Vec<Complex64> = back
            .into_iter()
            .map(|v| Complex64::new(v.re, 0.0))
            .collect();
        GridFunction::new(u.grid, out, Self::output_tails())
    }

    pub fn apply(&self, u: &GridFunction, path: ApplicationPath) -> Result<GridFunction> {
        match path {
            ApplicationPath::Direct => self.apply_direct(u),
            ApplicationPath::Mellin => self.apply_mellin(u, 40.0, 1025),
        }
    }
}

/// Galerkin matrix of the |x-y|^{-1/2} kernel (optionally with a smooth
/// weight w(x, y) multiplying the kernel) on a P1 space.
fn assemble_weighted(
    space: &BoundaryFESpace,
    weight: &dyn Fn(Point2, Point2) -> f64,
) -> DMatrix<f64> {
    let mesh = &space.mesh;
    let nd = space.n_dofs();
    let a = std::cell::RefCell::new(DMatrix::zeros(nd, nd));
    let hat = |node: usize, e: usize, xi: f64| -> f64 {
        let (i, j) = mesh.element(e);
        if node == i {
            1.0 - xi
        } else if node == j {
            xi
        } else {
            0.0
        }
    };
    let mut visit = |e: usize, xi_e: f64, f: usize, xi_f: f64, jac_kernel: f64| {
        let (ei, ej) = mesh.element(e);
        let (fi, fj) = mesh.element(f);
        let x = mesh.nodes[ei] + (mesh.nodes[ej] - mesh.nodes[ei]) * xi_e;
        let y = mesh.nodes[fi] + (mesh.nodes[fj] - mesh.nodes[fi]) * xi_f;
        let wgt = jac_kernel * weight(x, y);
        if wgt == 0.0 {
            return;
        }
        let mut am = a.borrow_mut();
        for &na in &[ei, ej] {
            let fa = hat(na, e, xi_e);
            if fa == 0.0 {
                continue;
            }
            if let Some(da) = space.node_dof(na) {
                for &nb in &[fi, fj] {
                    let fb = hat(nb, f, xi_f);
                    if fb != 0.0 {
                        if let Some(db) = space.node_dof(nb) {
                            am[(da, db)] += wgt * fa * fb;
                        }
                    }
                }
            }
        }
    };
    traverse_pairs(mesh, &mut visit);
    a.into_inner()
}

fn shared_node(mesh: &CurveMesh, e: usize, f: usize) -> Option<(usize, usize, usize)> {
    let (a, b) = mesh.element(e);
    let (c, d) = mesh.element(f);
    for &(s, oe) in &[(a, b), (b, a)] {
        for &(t, of) in &[(c, d), (d, c)] {
            if s == t {
                return Some((s, oe, of));
            }
        }
    }
    None
}

/// Assembled Galerkin operator with A[i][j] = ⟨A φ_j, φ_i⟩.
#[derive(Debug, Clone)]
pub struct RieszBoundaryOperator {
    pub matrix: DMatrix<f64>,
    /// max |A - Aᵀ| before the symmetrising average.
    pub presym_deviation: f64,
}

/// Assemble the boundary operator on a P1 space over a (closed or open)
/// curve mesh; the kernel is symmetric, so the matrix is symmetrised by
/// averaging and the pre-averaging deviation reported.
pub fn assemble_riesz(space: &BoundaryFESpace) -> Result<RieszBoundaryOperator> {
    for e in 0..space.mesh.n_elements() {
        if !(space.mesh.element_length(e) > 0.0) {
            return Err(Error::Assembly(format!("degenerate element {e}")));
        }
    }
    let a = assemble_weighted(space, &|_, _| 1.0);
    let at = a.transpose();
    let presym_deviation = (&a - &at).amax();
    Ok(RieszBoundaryOperator {
        matrix: 0.5 * (a + at),
        presym_deviation,
    })
}

/// All localized forms at once: F[d'][d] = ⟨A(χ_d u), χ_{d'} v⟩, assembled
/// with bump-weighted quadrature. Σ_{d,d'} F = ⟨A u, v⟩ up to roundoff
/// because the bumps sum to one at every quadrature node.
pub fn localized_forms_all(
    space: &BoundaryFESpace,
    pou: &PartitionOfUnity,
    u_coeffs: &[f64],
    v_coeffs: &[f64],
) -> Result<DMatrix<f64>> {
    let nd = space.n_dofs();
    if u_coeffs.len() != nd || v_coeffs.len() != nd {
        return Err(Error::Grid("coefficient length mismatch".into()));
    }
    let n_disks = pou.disks.len();
    let forms = std::cell::RefCell::new(DMatrix::zeros(n_disks, n_disks));
    let mesh = &space.mesh;
    let node_val =
        |coeffs: &[f64], node: usize| -> f64 { space.node_dof(node).map_or(0.0, |d| coeffs[d]) };
    let interp = |coeffs: &[f64], e: usize, xi: f64| -> f64 {
        let (i, j) = mesh.element(e);
        node_val(coeffs, i) * (1.0 - xi) + node_val(coeffs, j) * xi
    };
    // At each kernel quadrature point pair, accumulate
    // v(x) χ_{d'}(x) · k(x,y) · u(y) χ_d(y) into the (d', d) slot. Bumps
    // have small support, so only a handful of disk pairs fire per point.
    let mut visit = |e: usize, xi_e: f64, f: usize, xi_f: f64, jac_kernel: f64| {
        let vx = interp(v_coeffs, e, xi_e);
        if vx == 0.0 {
            return;
        }
        let uy = interp(u_coeffs, f, xi_f);
        if uy == 0.0 {
            return;
        }
        let x = {
            let (i, j) = mesh.element(e);
            mesh.nodes[i] + (mesh.nodes[j] - mesh.nodes[i]) * xi_e
        };
        let y = {
            let (i, j) = mesh.element(f);
            mesh.nodes[i] + (mesh.nodes[j] - mesh.nodes[i]) * xi_f
        };
        let mut fmat = forms.borrow_mut();
        for (di, dx) in pou.disks.iter().enumerate() {
            if dx.center.dist(x) >= 0.5 * dx.radius {
                continue;
            }
            let cx = pou.eval(di, x);
            if cx == 0.0 {
                continue;
            }
            for (dj, dy) in pou.disks.iter().enumerate() {
                if dy.center.dist(y) >= 0.5 * dy.radius {
                    continue;
                }
                let cy = pou.eval(dj, y);
                if cy != 0.0 {
                    fmat[(di, dj)] += jac_kernel * vx * cx * uy * cy;
                }
            }
        }
    };
    traverse_pairs(mesh, &mut visit);

    Ok(forms.into_inner())
}

/// One localized form ⟨A(χ_d u), χ_{d'} v⟩.
pub fn localized_form(
    space: &BoundaryFESpace,
    pou: &PartitionOfUnity,
    disk_test: usize,
    disk_trial: usize,
    u_coeffs: &[f64],
    v_coeffs: &[f64],
) -> Result<f64> {
    let all = localized_forms_all(space, pou, u_coeffs, v_coeffs)?;
    Ok(all[(disk_test, disk_trial)])
}

/// Shared quadrature traversal over all element pairs of a mesh with the
/// |x-y|^{-1/2} kernel: calls back with (e, ξ_e, f, ξ_f, w·k(x,y)) for each
/// quadrature point pair, using the same singular substitutions as the
/// Galerkin assembly.
fn traverse_pairs(mesh: &CurveMesh, visit: &mut impl FnMut(usize, f64, usize, f64, f64)) {
    let rule = GaussRule::new(12);
    let rule6 = GaussRule::new(6);
    let rule10 = GaussRule::new(10);
    let ne = mesh.n_elements();
    let point = |el: usize, xi: f64| -> Point2 {
        let (i, j) = mesh.element(el);
        mesh.nodes[i] + (mesh.nodes[j] - mesh.nodes[i]) * xi
    };
    for e in 0..ne {
        let he = mesh.element_length(e);
        for f in 0..ne {
            let hf = mesh.element_length(f);
            if e == f {
                // |x-y| = |s-t| on a straight element. With t = s + σ² the
                // kernel and Jacobian combine to the constant 2, and for
                // fixed σ the s-integrand is polynomial, so tensor Gauss in
                // (σ, s) is exact up to the rule order.
                for (sig, wsig) in rule.mapped(0.0, he.sqrt()) {
                    let u = sig * sig;
                    for (sv, ws) in rule.mapped(0.0, he - u) {
                        visit(e, sv / he, e, (sv + u) / he, 2.0 * wsig * ws);
                        visit(e, (sv + u) / he, e, sv / he, 2.0 * wsig * ws);
                    }
                }
                continue;
            }
            if let Some((shared, eo, fo)) = shared_node(mesh, e, f) {
                let pe = mesh.nodes[shared];
                let dir_e = (mesh.nodes[eo] - pe).normalized();
                let dir_f = (mesh.nodes[fo] - pe).normalized();
                let xi_of = |el: usize, dist: f64, h: f64| {
                    let (i, _) = mesh.element(el);
                    if i == shared {
                        dist / h
                    } else {
                        1.0 - dist / h
                    }
                };
                for half in 0..2 {
                    for (x01, wx) in rule.mapped(0.0, 1.0) {
                        let w01 = x01 * x01;
                        for (z01, wz) in rule.mapped(0.0, 1.0) {
                            let (du, dv) = if half == 0 {
                                (he * w01, hf * w01 * z01)
                            } else {
                                (he * w01 * z01, hf * w01)
                            };
                            let xp = pe + dir_e * du;
                            let yp = pe + dir_f * dv;
                            let dist = xp.dist(yp);
                            if dist == 0.0 {
                                continue;
                            }
                            let jac = he * hf * w01 * 2.0 * x01 * wx * wz;
                            visit(e, xi_of(e, du, he), f, xi_of(f, dv, hf), jac / dist.sqrt());
                        }
                    }
                }
                continue;
            }
            separated_visit(mesh, e, (0.0, 1.0), f, (0.0, 1.0), &rule6, &rule10, 12, visit, &point);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn separated_visit(
    mesh: &CurveMesh,
    e: usize,
    e_range: (f64, f64),
    f: usize,
    f_range: (f64, f64),
    rule6: &GaussRule,
    rule10: &GaussRule,
    depth: usize,
    visit: &mut impl FnMut(usize, f64, usize, f64, f64),
    point: &impl Fn(usize, f64) -> Point2,
) {
    let he_full = mesh.element_length(e);
    let hf_full = mesh.element_length(f);
    let he = he_full * (e_range.1 - e_range.0);
    let hf = hf_full * (f_range.1 - f_range.0);
    let ec = point(e, 0.5 * (e_range.0 + e_range.1));
    let fc = point(f, 0.5 * (f_range.0 + f_range.1));
    let gap = ec.dist(fc) - 0.5 * (he + hf);
    let h_max = he.max(hf);
    if depth > 0 && gap < h_max {
        if he >= hf {
            let mid = 0.5 * (e_range.0 + e_range.1);
            for sub in [(e_range.0, mid), (mid, e_range.1)] {
                separated_visit(mesh, e, sub, f, f_range, rule6, rule10, depth - 1, visit, point);
            }
        } else {
            let mid = 0.5 * (f_range.0 + f_range.1);
            for sub in [(f_range.0, mid), (mid, f_range.1)] {
                separated_visit(mesh, e, e_range, f, sub, rule6, rule10, depth - 1, visit, point);
            }
        }
        return;
    }
    let rule = if gap < 2.0 * h_max { rule10 } else { rule6 };
    for (xe, we) in rule.mapped(e_range.0, e_range.1) {
        for (xf, wf) in rule.mapped(f_range.0, f_range.1) {
            let x = point(e, xe);
            let y = point(f, xf);
            visit(e, xe, f, xf, he_full * hf_full * we * wf / x.dist(y).sqrt());
        }
    }
}

/// Quadratic-form bundle for the tilde norm on a fixed R₊ mesh, assembled
/// once and reused across many evaluations.
pub struct TildeNormForm {
    space: BoundaryFESpace,
    combined: DMatrix<f64>,
}

impl TildeNormForm {
    /// Mesh nodes at the radial grid points (geometric spacing); the domain
    /// continues on both sides (toward 0 and ∞), with the zero extension.
    pub fn from_log_grid(grid: LogGrid) -> Result<Self> {
        let xs: Vec<f64> = (0..grid.n).map(|k| grid.r(k)).collect();
        let mesh = CurveMesh::from_x_nodes(&xs, FarField::BeyondBothEnds)?;
        let space = BoundaryFESpace::all_nodes(mesh);
        let slob = slobodeckii_matrix(&space);
        let hardy = hardy_weight_matrix(&space)?;
        let mass = mass_matrix(&space);
        Ok(Self {
            combined: slob + 2.0 * hardy + mass,
            space,
        })
    }

    /// Tilde norm of a grid function sampled on the matching grid.
    pub fn norm(&self, v: &GridFunction) -> Result<f64> {
        if v.grid.n != self.space.mesh.n_nodes() {
            return Err(Error::Grid("grid does not match the assembled form".into()));
        }
        let vals = DVector::from_iterator(v.grid.n, v.values.iter().map(|z| z.re));
        Ok((vals.transpose() * &self.combined * &vals)[(0, 0)].max(0.0).sqrt())
    }
}

/// Sup-ratio report for the half-line continuity experiment.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CornerRatioReport {
    pub theta: f64,
    pub trials: usize,
    pub max_ratio: f64,
    pub argmax_trial: usize,
    pub seed: u64,
    pub per_trial: Vec<f64>,
}

/// Measured sup over random bumps u of
/// ‖(K_{π/2} - K_θ)(χu)‖_{tilde H^{1/2}(R₊)} / ‖u‖_{L²(R₊)}.
/// The bump family is seeded and recorded so the maximiser is reproducible.
pub fn corner_continuity_ratio(
    theta: f64,
    cutoff: &(dyn Fn(f64) -> f64 + Sync),
    trials: usize,
    grid: LogGrid,
    seed: u64,
) -> Result<CornerRatioReport> {
    if trials == 0 {
        return Err(Error::Config("at least one trial required".into()));
    }
    let op = CornerDifferenceOperator::new(theta)?;
    let form = TildeNormForm::from_log_grid(grid)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut per_trial = Vec::with_capacity(trials);
    let mut best = (0usize, 0.0f64);
    for trial in 0..trials {
        let bump = crate::bump::random_bump(&mut rng);
        let u = GridFunction::from_real_fn(grid, TailBehavior::CompactSupport, |r| {
            cutoff(r) * bump.eval(r)
        });
        let denom = weighted_norm(&u, -0.5)?;
        if denom == 0.0 {
            per_trial.push(0.0);
            continue;
        }
        let v = op.apply_direct(&u)?;
        let ratio = form.norm(&v)? / denom;
        if ratio > best.1 {
            best = (trial, ratio);
        }
        per_trial.push(ratio);
    }
    Ok(CornerRatioReport {
        theta,
        trials,
        max_ratio: best.1,
        argmax_trial: best.0,
        seed,
        per_trial,
    })
}

/// Two-sided transfer-map norm surrogate:
/// ‖Θ(p,p̃)‖_{H^{1/2}(cone)} / sqrt(‖p‖²_{H^{1/2}(R₊)} + ‖p̃‖²_{tilde}).
pub fn theta_map_norm_ratio(
    theta: f64,
    p: &crate::bump::Bump,
    p_tilde: &crate::bump::Bump,
    truncation: f64,
    elements_per_ray: usize,
) -> Result<f64> {
    let frame = CornerFrame::with_aperture(theta);
    let cone = CurveMesh::cone(&frame, truncation, elements_per_ray)?;
    let space = BoundaryFESpace::all_nodes(cone.clone());
    let slob = slobodeckii_matrix(&space);
    let mass = mass_matrix(&space);
    // Node values of Θ(p, p̃): distance from the corner along each ray.
    let vals: Vec<f64> = (0..cone.n_nodes())
        .map(|i| {
            let t = cone.nodes[i].dist(frame.vertex);
            if i < elements_per_ray {
                (p.eval(t) - p_tilde.eval(t)) / SQRT_2
            } else {
                (p.eval(t) + p_tilde.eval(t)) / SQRT_2
            }
        })
        .collect();
    let v = DVector::from_column_slice(&vals);
    let cone_norm = ((v.transpose() * &slob * &v)[(0, 0)] + (v.transpose() * &mass * &v)[(0, 0)])
        .max(0.0)
        .sqrt();

    let line = CurveMesh::interval(0.0, truncation, 2 * elements_per_ray, FarField::BeyondLastNode)?;
    let p_vals: Vec<f64> = line.nodes.iter().map(|n| p.eval(n.x)).collect();
    let pt_vals: Vec<f64> = line.nodes.iter().map(|n| p_tilde.eval(n.x)).collect();
    let p_space = BoundaryFESpace::all_nodes(line.clone());
    let p_slob = slobodeckii_matrix(&p_space);
    let p_mass = mass_matrix(&p_space);
    let pv = DVector::from_column_slice(&p_vals);
    let p_norm_sq = (pv.transpose() * &p_slob * &pv)[(0, 0)] + (pv.transpose() * &p_mass * &pv)[(0, 0)];
    let pt_norm = crate::sobolev::tilde_half_norm(&pt_vals, &line)?;
    Ok(cone_norm / (p_norm_sq + pt_norm * pt_norm).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bump::Bump;
    use crate::mellin::weighted_norm;
    use rand::Rng;
    use std::f64::consts::PI;

    fn bump_supported(b: &Bump) -> (f64, f64) {
        b.support()
    }

    #[test]
    fn theta_map_pure_components() {
        let grid = LogGrid::from_r_range(0.5, 4.0, 64).unwrap();
        let b = Bump::new(1.5, 0.5, 1.0);
        let p = GridFunction::from_bump(grid, &b);
        let zero = GridFunction::zero(grid);
        // (p, 0): symmetric across rays.
        let u = theta_map(&p, &zero).unwrap();
        for k in 0..grid.n {
            assert!((u.plus[k] - u.minus[k]).abs() < 1e-15);
            assert!((u.plus[k] - p.values[k].re / SQRT_2).abs() < 1e-15);
        }
        // (0, p̃): antisymmetric.
        let u = theta_map(&zero, &p).unwrap();
        for k in 0..grid.n {
            assert!((u.plus[k] + u.minus[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn theta_map_round_trip_exact() {
        let grid = LogGrid::from_r_range(0.5, 4.0, 64).unwrap();
        let p = GridFunction::from_bump(grid, &Bump::new(1.2, 0.4, 1.3));
        let pt = GridFunction::from_bump(grid, &Bump::new(2.0, 0.6, 0.7));
        let u = theta_map(&p, &pt).unwrap();
        let (p2, pt2) = theta_map_inverse(&u);
        for k in 0..grid.n {
            assert!((p.values[k] - p2.values[k]).norm() < 1e-15);
            assert!((pt.values[k] - pt2.values[k]).norm() < 1e-15);
        }
        // Grid mismatch is refused.
        let other = GridFunction::zero(LogGrid::from_r_range(0.5, 4.0, 32).unwrap());
        assert!(matches!(theta_map(&p, &other), Err(Error::Grid(_))));
    }

    #[test]
    fn kernel_factorisation_spot_check() {
        // |x-y|^{-1/2} for x = c + t e₊, y = c + s e₋ equals
        // 𝔎_θ(s/t)(st)^{-1/4}.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let theta = rng.gen_range(0.05..PI - 0.05);
            let s = rng.gen_range(0.1..10.0f64);
            let t = rng.gen_range(0.1..10.0f64);
            let frame = CornerFrame::with_aperture(theta);
            let lhs = 1.0 / frame.on_plus_ray(t).dist(frame.on_minus_ray(s)).sqrt();
            let rhs = kernel_eval_unchecked(theta, s / t) * (s * t).powf(-0.25);
            assert!(
                (lhs - rhs).abs() <= 1e-12 * lhs,
                "theta={theta}, s={s}, t={t}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn corner_form_positivity_and_support_guard() {
        let bp = Bump::new(1.5, 0.5, 1.0);
        let fp = move |t: f64| bp.eval(t);
        let p = SupportedFn::new(bump_supported(&bp), &fp);
        let v = corner_form_direct(PI / 2.0, FormSign::Plus, &p, &p).unwrap();
        assert!(v > 0.0, "positive kernel, positive function: {v}");
        let touching = move |t: f64| (1.0 - t).max(0.0);
        let bad = SupportedFn::new((0.0, 1.0), &touching);
        assert!(matches!(
            corner_form_direct(PI / 2.0, FormSign::Plus, &bad, &p),
            Err(Error::Support(_))
        ));
    }

    #[test]
    fn flat_parts_cancel_in_operator_differences() {
        // The 𝔎₀ parts drop out of differences at fixed sign, leaving
        // ±(𝔎_{π/2} - 𝔎_θ); hence the + difference equals the negated -
        // difference. (Only the sup in the operator-norm argument makes the
        // two interchangeable.)
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..4 {
            let theta = rng.gen_range(0.3..2.8);
            let b1 = Bump::new(rng.gen_range(1.0..2.0), rng.gen_range(0.3..0.6), 1.0);
            let b2 = Bump::new(rng.gen_range(1.0..2.0), rng.gen_range(0.3..0.6), 1.0);
            let f1 = move |t: f64| b1.eval(t);
            let f2 = move |t: f64| b2.eval(t);
            let p = SupportedFn::new(bump_supported(&b1), &f1);
            let q = SupportedFn::new(bump_supported(&b2), &f2);
            let plus_diff = corner_form_direct(PI / 2.0, FormSign::Plus, &p, &q).unwrap()
                - corner_form_direct(theta, FormSign::Plus, &p, &q).unwrap();
            let minus_diff = corner_form_direct(PI / 2.0, FormSign::Minus, &p, &q).unwrap()
                - corner_form_direct(theta, FormSign::Minus, &p, &q).unwrap();
            assert!(
                (plus_diff + minus_diff).abs() < 1e-10 * plus_diff.abs().max(1e-6),
                "theta={theta}: {plus_diff} vs {minus_diff}"
            );
            // Cross-check the + difference against the smooth-kernel
            // quadrature of 𝔎_{π/2} - 𝔎_θ.
            let op = CornerDifferenceOperator::new(theta).unwrap();
            let rule = GaussRule::new(16);
            let smooth = {
                let (ta, tb) = q.support;
                let dt = (tb - ta) / 8.0;
                let mut acc = 0.0;
                for pe in 0..8 {
                    let lo = ta + pe as f64 * dt;
                    acc += rule.integrate(lo, lo + dt, |t| {
                        q.eval(t)
                            * gl_panels_scalar(&rule, p.support.0, p.support.1, 8, |s| {
                                p.eval(s) * op.kernel_difference(t / s) * (s * t).powf(-0.25)
                            })
                    });
                }
                acc
            };
            assert!(
                (plus_diff - smooth).abs() < 1e-9 * smooth.abs().max(1e-6),
                "theta={theta}: {plus_diff} vs smooth {smooth}"
            );
        }
    }

    #[test]
    fn corner_identity_without_cutoff() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for &theta in &[PI / 3.0, 1.9] {
            let bumps: Vec<Bump> = (0..4)
                .map(|_| Bump::new(rng.gen_range(1.0..2.0), rng.gen_range(0.3..0.6), rng.gen_range(0.5..1.5)))
                .collect();
            let f0 = {
                let b = bumps[0];
                move |t: f64| b.eval(t)
            };
            let f1 = {
                let b = bumps[1];
                move |t: f64| b.eval(t)
            };
            let f2 = {
                let b = bumps[2];
                move |t: f64| b.eval(t)
            };
            let f3 = {
                let b = bumps[3];
                move |t: f64| b.eval(t)
            };
            let (lhs, rhs, res) = corner_identity_check(
                theta,
                &SupportedFn::new(bumps[0].support(), &f0),
                &SupportedFn::new(bumps[1].support(), &f1),
                &SupportedFn::new(bumps[2].support(), &f2),
                &SupportedFn::new(bumps[3].support(), &f3),
                None,
            )
            .unwrap();
            assert!(
                res < 1e-8 * lhs.abs().max(1e-3),
                "theta={theta}: lhs {lhs}, rhs {rhs}, residual {res:.3e}"
            );
        }
    }

    #[test]
    fn corner_identity_with_radial_cutoff() {
        let b = Bump::new(1.4, 0.4, 1.0);
        let f = move |t: f64| b.eval(t);
        let sf = SupportedFn::new(b.support(), &f);
        let chi = |t: f64| crate::bump::smoothstep((3.0 - t) / 1.5);
        let (lhs, rhs, res) =
            corner_identity_check(2.0 * PI / 5.0, &sf, &sf, &sf, &sf, Some(&chi)).unwrap();
        assert!(
            res < 1e-8 * lhs.abs().max(1e-3),
            "lhs {lhs}, rhs {rhs}, res {res:.3e}"
        );
    }

    #[test]
    fn corner_identity_zero_inputs() {
        let z = |_: f64| 0.0;
        let sf = SupportedFn::new((1.0, 2.0), &z);
        let (lhs, rhs, res) = corner_identity_check(1.0, &sf, &sf, &sf, &sf, None).unwrap();
        assert_eq!((lhs, rhs, res), (0.0, 0.0, 0.0));
    }

    #[test]
    fn difference_operator_paths_agree() {
        let grid = LogGrid::from_r_range(1e-4, 1e2, 768).unwrap();
        let b = Bump::new(1.5, 0.5, 1.0);
        let u = GridFunction::from_bump(grid, &b);
        let op = CornerDifferenceOperator::new(PI / 4.0).unwrap();
        let vd = op.apply_direct(&u).unwrap();
        let vm = op.apply_mellin(&u, 40.0, 1025).unwrap();
        let mut diff = vd.clone();
        for k in 0..grid.n {
            diff.values[k] -= vm.values[k];
        }
        let rel = weighted_norm(&diff, -0.5).unwrap() / weighted_norm(&vd, -0.5).unwrap();
        assert!(rel < 1e-6, "path disagreement {rel:.3e}");
    }

    #[test]
    fn difference_operator_flat_angle_is_zero() {
        let grid = LogGrid::from_r_range(1e-3, 1e2, 256).unwrap();
        let u = GridFunction::from_bump(grid, &Bump::new(1.5, 0.5, 1.0));
        let op = CornerDifferenceOperator::new(FRAC_PI_2).unwrap();
        let v = op.apply_direct(&u).unwrap();
        assert!(v.values.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn difference_image_has_finite_weighted_norms() {
        let grid = LogGrid::from_r_range(1e-4, 1e2, 512).unwrap();
        let u = GridFunction::from_bump(grid, &Bump::new(1.5, 0.5, 1.0));
        let op = CornerDifferenceOperator::new(PI / 3.0).unwrap();
        let v = op.apply_direct(&u).unwrap();
        for &beta in &[0.1, 0.25, 0.4] {
            let n = weighted_norm(&v, -beta).unwrap();
            assert!(n.is_finite() && n > 0.0, "beta={beta}");
        }
    }

    #[test]
    fn collinear_element_interaction_value() {
        // Constant-by-constant interaction of two unit collinear elements
        // sharing a node: ∫₀¹∫₁² dx dy/√(y-x) = (4/3)(2√2 - 2) = 1.1045…;
        // derived from the double antiderivative of t^{-1/2} and checked by
        // the assembled hat entries (hats on each element sum to one).
        let mesh = CurveMesh::from_x_nodes(&[0.0, 1.0, 2.0], FarField::None).unwrap();
        let space = BoundaryFESpace::all_nodes(mesh);
        let op = assemble_riesz(&space).unwrap();
        let total: f64 = op.matrix.iter().sum();
        // Whole-square value ∫∫_{[0,2]²} = (8/3)·2^{3/2}.
        let whole = 8.0 / 3.0 * 2.0f64.powf(1.5);
        assert!((total - whole).abs() < 1e-8 * whole, "{total} vs {whole}");
        // Identical-element blocks are each ∫∫_{[0,1]²} = 8/3; the cross
        // blocks make up the difference, 2 × (4/3)(2√2-2).
        let cross = (total - 2.0 * (8.0 / 3.0)) / 2.0;
        let expect = 4.0 / 3.0 * (2.0 * 2.0f64.sqrt() - 2.0);
        assert!(
            (cross - expect).abs() < 1e-8 * expect,
            "cross {cross} vs {expect}"
        );
    }

    #[test]
    fn assembled_matrix_symmetric_positive() {
        let boundary = crate::geometry::unit_square();
        let mesh = CurveMesh::polygon(&boundary, 24).unwrap();
        let space = BoundaryFESpace::all_nodes(mesh);
        let op = assemble_riesz(&space).unwrap();
        assert!(op.presym_deviation < 1e-10, "presym {}", op.presym_deviation);
        let sym_dev = (&op.matrix - op.matrix.transpose()).amax();
        assert!(sym_dev < 1e-14);
        assert!(op.matrix.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn localized_forms_telescope_to_full_form() {
        let boundary = crate::geometry::unit_square();
        let pou = crate::geometry::build_cover(&boundary, 0.3).unwrap();
        let mesh = CurveMesh::polygon(&boundary, 32).unwrap();
        let space = BoundaryFESpace::all_nodes(mesh);
        let op = assemble_riesz(&space).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let nd = space.n_dofs();
        let u: Vec<f64> = (0..nd).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..nd).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let forms = localized_forms_all(&space, &pou, &u, &v).unwrap();
        let sum: f64 = forms.iter().sum();
        let uv = DVector::from_column_slice(&u);
        let vv = DVector::from_column_slice(&v);
        let full = (vv.transpose() * &op.matrix * &uv)[(0, 0)];
        assert!(
            (sum - full).abs() < 1e-8 * full.abs().max(1e-6),
            "sum {sum} vs full {full}"
        );
        // Zero input gives zero forms.
        let zeros = vec![0.0; nd];
        let z = localized_forms_all(&space, &pou, &zeros, &v).unwrap();
        assert!(z.iter().all(|&x| x == 0.0));
        // Disjoint disk closures: smooth kernel, finite value.
        let d = 0usize;
        let far = (0..pou.disks.len())
            .find(|&k| {
                pou.disks[k].center.dist(pou.disks[d].center)
                    > pou.disks[k].radius + pou.disks[d].radius + 0.5
            })
            .unwrap();
        let val = localized_form(&space, &pou, d, far, &u, &v).unwrap();
        assert!(val.is_finite());
    }

    #[test]
    fn ratio_zero_at_flat_angle_and_homogeneous() {
        let grid = LogGrid::from_r_range(1e-3, 50.0, 192).unwrap();
        let chi = |r: f64| crate::bump::smoothstep((8.0 - r) / 4.0);
        let report = corner_continuity_ratio(FRAC_PI_2, &chi, 3, grid, 42).unwrap();
        assert!(report.max_ratio < 1e-10, "flat ratio {}", report.max_ratio);
        // Homogeneity: u -> 2u leaves each trial ratio unchanged. Amplitude
        // enters the bump linearly, so compare two runs with the same seed
        // by scaling inputs directly.
        let op = CornerDifferenceOperator::new(PI / 4.0).unwrap();
        let form = TildeNormForm::from_log_grid(grid).unwrap();
        let b = Bump::new(1.5, 0.4, 1.0);
        for &scale in &[1.0, 2.0] {
            let u = GridFunction::from_real_fn(grid, TailBehavior::CompactSupport, |r| {
                scale * chi(r) * b.eval(r)
            });
            let ratio = form.norm(&op.apply_direct(&u).unwrap()).unwrap()
                / weighted_norm(&u, -0.5).unwrap();
            if scale == 1.0 {
                // stash via closure capture not needed; recompute below
            }
            let u1 = GridFunction::from_real_fn(grid, TailBehavior::CompactSupport, |r| {
                chi(r) * b.eval(r)
            });
            let ratio1 = form.norm(&op.apply_direct(&u1).unwrap()).unwrap()
                / weighted_norm(&u1, -0.5).unwrap();
            assert!((ratio - ratio1).abs() < 1e-12 * ratio1);
        }
    }

    #[test]
    fn trial_count_guard() {
        let grid = LogGrid::from_r_range(1e-2, 10.0, 64).unwrap();
        let chi = |_: f64| 1.0;
        assert!(matches!(
            corner_continuity_ratio(1.0, &chi, 0, grid, 1),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn theta_norm_ratio_finite_and_bounded() {
        let p = Bump::new(1.2, 0.4, 1.0);
        let pt = Bump::new(1.8, 0.5, 0.8);
        for &theta in &[PI / 3.0, 2.2] {
            let r = theta_map_norm_ratio(theta, &p, &pt, 20.0, 160).unwrap();
            assert!(r.is_finite() && r > 0.05 && r < 20.0, "theta={theta}: {r}");
        }
    }
}
