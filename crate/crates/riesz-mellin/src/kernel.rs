//! The corner kernel 𝔎_α(τ) = (4sin²α + (√τ - 1/√τ)²)^{-1/4}, its generalized
//! binomial expansion at τ = 0, and the cutoff splitting used to continue its
//! Mellin transform beyond the natural strip.

use crate::bump::PlateauCutoff;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// Kernel evaluation. The difference of square roots is computed as
/// (τ-1)²/τ to avoid cancellation near τ = 1.
pub fn kernel_eval(alpha: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("kernel requires tau > 0, got {tau}")));
    }
    if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
        return Err(Error::Domain(format!(
            "kernel requires alpha in (0, pi), got {alpha}"
        )));
    }
    Ok(kernel_eval_unchecked(alpha, tau))
}

#[inline]
pub(crate) fn kernel_eval_unchecked(alpha: f64, tau: f64) -> f64 {
    let s = alpha.sin();
    let d2 = (tau - 1.0) * (tau - 1.0) / tau;
    (4.0 * s * s + d2).powf(-0.25)
}

/// Kernel as a function of t = log τ: (2cosh t - 2cos 2α)^{-1/4}, valid for
/// complex t in the strip |Im t| < 2 min(α, π-α).
pub(crate) fn kernel_log_complex(
    cos_two_alpha: f64,
    t: num_complex::Complex64,
) -> num_complex::Complex64 {
    let w = 2.0 * t.cosh() - 2.0 * cos_two_alpha;
    w.powf(-0.25)
}

/// Power-series data for 𝔎_α(τ) = τ^{1/4} (1 + Σ_{q≥1} κ_q τ^q) near τ = 0.
///
/// Coefficients come from composing the binomial series
/// (1-x)^{-1/4} = Σ_n b_n x^n, b_n = Γ(n+1/4)/(n! Γ(1/4)), with
/// x = 2cos(2α)τ - τ². The rational scalars b_n C(n,m) 2^{n-m} are carried
/// exactly (BigRational); cos(2α) enters only in the final float evaluation.
#[derive(Debug, Clone)]
pub struct KernelSeries {
    pub alpha: f64,
    pub cos_two_alpha: f64,
    /// κ_q for q = 0..n_terms; κ_0 = 1.
    kappa: Vec<f64>,
    /// Termwise majorants m_q ≥ |κ_q| (the |cos| = 1, all-plus composition,
    /// i.e. the coefficients of (1-2τ-τ²)^{-1/4}).
    majorant: Vec<f64>,
    /// Validated radius: |2cos(2α)τ - τ²| <= 0.9 for τ <= delta0.
    pub delta0: f64,
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl KernelSeries {
    pub fn new(alpha: f64, n_terms: usize) -> Self {
        let c = (2.0 * alpha).cos();
        // b_n = prod_{k<n} (k+1/4) / n!, exactly.
        let mut b = Vec::with_capacity(n_terms + 1);
        b.push(BigRational::one());
        for n in 1..=n_terms {
            let prev = b[n - 1].clone();
            b.push(prev * BigRational::new(BigInt::from(4 * n as i64 - 3), BigInt::from(4 * n as i64)));
        }
        // Binomial table up to n_terms.
        let mut binom: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
        for n in 1..=n_terms {
            let mut row = vec![BigRational::one()];
            for m in 1..n {
                row.push(&binom[n - 1][m - 1] + &binom[n - 1][m]);
            }
            row.push(BigRational::one());
            binom.push(row);
        }
        let mut kappa = vec![0.0; n_terms + 1];
        let mut majorant = vec![0.0; n_terms + 1];
        kappa[0] = 1.0;
        majorant[0] = 1.0;
        for cap_n in 1..=n_terms {
            let mut k_acc = 0.0_f64;
            let mut m_acc = 0.0_f64;
            for m in 0..=cap_n / 2 {
                let n = cap_n - m;
                let scalar = &b[n] * &binom[n][m] * big(2).pow((n - m) as i32);
                let scalar_f = scalar.to_f64().expect("rational fits in f64");
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                k_acc += sign * scalar_f * c.powi((n - m) as i32);
                m_acc += scalar_f;
            }
            kappa[cap_n] = k_acc;
            majorant[cap_n] = m_acc;
        }
        let mut delta0 = 0.2;
        while 2.0 * c.abs() * delta0 + delta0 * delta0 > 0.9 {
            delta0 *= 0.9;
        }
        Self {
            alpha,
            cos_two_alpha: c,
            kappa,
            majorant,
            delta0,
        }
    }

    pub fn n_terms(&self) -> usize {
        self.kappa.len() - 1
    }

    /// κ_q (κ_0 = 1).
    pub fn kappa(&self, q: usize) -> f64 {
        self.kappa[q]
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.kappa
    }

    /// Partial sum τ^{1/4} Σ_{q<order} κ_q τ^q.
    pub fn partial_sum(&self, tau: f64, order: usize) -> f64 {
        let order = order.min(self.kappa.len());
        let mut acc = 0.0;
        for q in (0..order).rev() {
            acc = acc * tau + self.kappa[q];
        }
        acc * tau.powf(0.25)
    }

    /// Rigorous bound on |𝔎_α(τ) - partial_sum(τ, order)| for 0 < τ <= delta0:
    /// τ^{1/4} times the tail of the majorant series, evaluated in closed form
    /// as (1-2τ-τ²)^{-1/4} minus its own partial sum.
    pub fn tail_bound(&self, tau: f64, order: usize) -> f64 {
        assert!(tau > 0.0 && tau <= self.delta0);
        let closed = (1.0 - 2.0 * tau - tau * tau).powf(-0.25);
        let mut partial = 0.0;
        for q in (0..order.min(self.majorant.len())).rev() {
            partial = partial * tau + self.majorant[q];
        }
        (closed - partial).max(0.0) * tau.powf(0.25)
    }

    /// Series tail Σ_{q >= order} κ_q τ^{q+1/4}, summed to floating convergence.
    /// Only valid on τ <= delta0 where the majorant certifies domination.
    pub fn tail_sum(&self, tau: f64, order: usize) -> f64 {
        assert!(tau <= self.delta0);
        let mut acc = 0.0;
        for q in (order..self.kappa.len()).rev() {
            acc = acc * tau + self.kappa[q];
        }
        acc * tau.powf(0.25 + order as f64)
    }
}

/// Coefficients κ_{α,1..Q-1} plus the validated radius, as a plain pair.
pub fn series_coefficients(alpha: f64, q_order: usize) -> Result<(Vec<f64>, f64)> {
    if q_order < 2 {
        return Err(Error::Domain(format!("series order must be >= 2, got {q_order}")));
    }
    let series = KernelSeries::new(alpha, q_order - 1);
    Ok((series.kappa[1..].to_vec(), series.delta0))
}

/// Splitting 𝔎_α = R_Q + Φ_Q(τ) + Φ_Q(1/τ) with
/// Φ_Q(τ) = (Σ_{q<Q} κ_q τ^{q+1/4}) φ(τ); R_Q decays like τ^{±(Q+1/4)} at the
/// endpoints of R₊, which is what pushes the Mellin strip out to |Re λ| < Q+1/4.
#[derive(Debug, Clone)]
pub struct PoleDecomposition {
    pub alpha: f64,
    pub order: usize,
    pub cutoff: PlateauCutoff,
    series: KernelSeries,
}

impl PoleDecomposition {
    pub fn new(alpha: f64, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Domain(format!(
                "decomposition order must be >= 2, got {order}"
            )));
        }
        if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
            return Err(Error::Domain(format!("alpha in (0, pi) required, got {alpha}")));
        }
        // Extra terms beyond `order` feed the small-τ series route for R_Q.
        let series = KernelSeries::new(alpha, order + 72);
        Ok(Self {
            alpha,
            order,
            cutoff: PlateauCutoff::default(),
            series,
        })
    }

    pub fn series(&self) -> &KernelSeries {
        &self.series
    }

    /// Φ_Q(τ).
    pub fn phi_component(&self, tau: f64) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        let phi = self.cutoff.eval(tau);
        if phi == 0.0 {
            return 0.0;
        }
        self.series.partial_sum(tau, self.order) * phi
    }

    /// R_Q(τ). Outside [s, 1/s] with s = min(delta0, cutoff.inner) the value
    /// is a pure series tail of order τ^{±(Q+1/4)} and is evaluated that way;
    /// subtracting the near-equal kernel and partial sum there would lose all
    /// relative accuracy. R_Q(1/τ) = R_Q(τ), so one series serves both ends.
    pub fn remainder(&self, tau: f64) -> f64 {
        let small = self.series.delta0.min(self.cutoff.inner);
        if tau <= small {
            self.remainder_series_small(tau)
        } else if tau >= 1.0 / small {
            self.remainder_series_small(1.0 / tau)
        } else {
            self.remainder_subtraction(tau)
        }
    }

    /// R_Q(τ) by literal subtraction; exact by construction but loses
    /// relative accuracy near the endpoints of R₊.
    pub fn remainder_subtraction(&self, tau: f64) -> f64 {
        kernel_eval_unchecked(self.alpha, tau)
            - self.phi_component(tau)
            - self.phi_component(1.0 / tau)
    }

    /// R_Q(τ) for τ <= cutoff.inner via the series tail (no cancellation):
    /// there φ(τ) = 1 and φ(1/τ) = 0, so R_Q = Σ_{q>=Q} κ_q τ^{q+1/4}.
    pub fn remainder_series_small(&self, tau: f64) -> f64 {
        debug_assert!(tau <= self.cutoff.inner && tau <= self.series.delta0);
        self.series.tail_sum(tau, self.order)
    }

    /// Υ(τ) = τ φ'(τ); supported in [cutoff.inner, cutoff.outer].
    pub fn upsilon(&self, tau: f64) -> f64 {
        self.cutoff.log_deriv(tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn kernel_at_unit_argument() {
        // √τ - 1/√τ = 0 at τ = 1, so 𝔎_{π/2}(1) = 4^{-1/4} = 2^{-1/2}.
        let v = kernel_eval(PI / 2.0, 1.0).unwrap();
        assert!((v - 0.5_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn kernel_flat_closed_form() {
        // 𝔎_{π/2}(τ) = τ^{1/4}(1+τ)^{-1/2}; at τ = 4 this is √2/√5.
        let v = kernel_eval(PI / 2.0, 4.0).unwrap();
        let expect = 4.0_f64.powf(0.25) / 5.0_f64.sqrt();
        assert!((v - expect).abs() < 1e-15, "{v} vs {expect}");
        for &tau in &[1e-3f64, 0.3, 1.7, 42.0] {
            let closed = tau.powf(0.25) / (1.0 + tau).sqrt();
            assert!((kernel_eval(PI / 2.0, tau).unwrap() - closed).abs() < 1e-14 * closed);
        }
    }

    #[test]
    fn kernel_rejects_nonpositive_tau() {
        assert!(matches!(kernel_eval(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(kernel_eval(1.0, -3.0), Err(Error::Domain(_))));
    }

    proptest! {
        #[test]
        fn kernel_reflection_symmetry(alpha in 0.05f64..3.09, log_tau in -6.0f64..6.0) {
            let tau = log_tau.exp();
            let a = kernel_eval(alpha, tau).unwrap();
            let b = kernel_eval(alpha, 1.0 / tau).unwrap();
            prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(1.0));
        }
    }

    #[test]
    fn kernel_leading_asymptotics() {
        for k in 3..=8 {
            let tau = 10f64.powi(-k);
            let ratio = kernel_eval(1.1, tau).unwrap() / tau.powf(0.25);
            assert!((ratio - 1.0).abs() < 5.0 * tau, "k={k}: ratio {ratio}");
        }
    }

    #[test]
    fn flat_minus_general_is_higher_order() {
        // Leading τ^{1/4} terms match, so the difference is O(τ^{5/4}).
        for k in 3..=6 {
            let tau = 10f64.powi(-k);
            let d = kernel_eval(PI / 2.0, tau).unwrap() - kernel_eval(PI / 3.0, tau).unwrap();
            assert!(d.abs() < 2.0 * tau.powf(1.25), "k={k}: {d}");
        }
    }

    #[test]
    fn first_coefficient_is_half_cos_two_alpha() {
        for &alpha in &[PI / 6.0, PI / 3.0, 3.0 * PI / 4.0] {
            let (kappa, _) = series_coefficients(alpha, 4).unwrap();
            let expect = (2.0 * alpha).cos() / 2.0;
            assert!((kappa[0] - expect).abs() < 1e-14, "alpha={alpha}");
            // Independent numeric route: fit (𝔎 - τ^{1/4})/τ^{5/4} as τ -> 0.
            let tau = 1e-6;
            let fit = (kernel_eval(alpha, tau).unwrap() - tau.powf(0.25)) / tau.powf(1.25);
            assert!((fit - expect).abs() < 1e-4, "alpha={alpha}: fit {fit} vs {expect}");
        }
        let (kappa, _) = series_coefficients(PI / 2.0, 3).unwrap();
        assert!((kappa[0] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn partial_sum_remainder_dominated_by_runtime_bound() {
        for &alpha in &[PI / 6.0, PI / 2.0, 2.2] {
            for q_order in [2usize, 4, 7] {
                let series = KernelSeries::new(alpha, 80);
                let tau = series.delta0 / 10.0;
                let remainder =
                    (kernel_eval(alpha, tau).unwrap() - series.partial_sum(tau, q_order)).abs();
                // Geometric-domination constant, computed at runtime.
                let bound_constant = series.tail_bound(tau, q_order) / tau.powf(q_order as f64 + 0.25);
                assert!(
                    remainder <= 2.0 * tau.powf(q_order as f64 + 0.25) * bound_constant,
                    "alpha={alpha} Q={q_order}: rem {remainder:.3e} bound {:.3e}",
                    2.0 * tau.powf(q_order as f64 + 0.25) * bound_constant
                );
            }
        }
    }

    #[test]
    fn decomposition_identity_pointwise() {
        let pd = PoleDecomposition::new(PI / 3.0, 4).unwrap();
        let mut worst = 0.0f64;
        for k in 0..1000 {
            let log_tau = -3.0 + 6.0 * k as f64 / 999.0;
            let tau = 10f64.powf(log_tau);
            let lhs = kernel_eval(PI / 3.0, tau).unwrap();
            let rhs = pd.remainder(tau) + pd.phi_component(tau) + pd.phi_component(1.0 / tau);
            worst = worst.max((lhs - rhs).abs());
        }
        assert!(worst < 1e-12, "max deviation {worst:.3e}");
    }

    #[test]
    fn remainder_is_symmetric_under_inversion() {
        let pd = PoleDecomposition::new(1.3, 3).unwrap();
        for &tau in &[1e-3, 0.4, 2.5, 800.0] {
            let a = pd.remainder(tau);
            let b = pd.remainder(1.0 / tau);
            assert!((a - b).abs() < 1e-13 * a.abs().max(1e-3), "tau={tau}");
        }
    }

    #[test]
    fn remainder_series_route_agrees_with_subtraction() {
        // Two independent evaluations of R_Q on the small-τ side.
        let pd = PoleDecomposition::new(2.0, 3).unwrap();
        for &tau in &[1e-3, 0.01, 0.05, 0.1, 0.2] {
            let a = pd.remainder(tau);
            let b = pd.remainder_series_small(tau);
            assert!(
                (a - b).abs() < 1e-13,
                "tau={tau}: subtraction {a:.15e} vs series {b:.15e}"
            );
        }
    }

    #[test]
    fn remainder_decays_at_prescribed_order() {
        let order = 4;
        let pd = PoleDecomposition::new(PI / 3.0, order).unwrap();
        let mut ratios = Vec::new();
        for k in 2..=6 {
            let tau = 10f64.powi(-k);
            ratios.push(pd.remainder(tau).abs() / tau.powf(order as f64 + 0.25));
        }
        // Bounded as τ -> 0 (tends to |κ_Q| = 0.100097...).
        let kappa_q = pd.series().kappa(order).abs();
        for r in ratios {
            assert!(r < 2.0 * kappa_q + 0.1, "ratio {r} vs kappa_Q {kappa_q}");
        }
    }

    #[test]
    fn upsilon_supported_in_transition_band() {
        let pd = PoleDecomposition::new(1.0, 2).unwrap();
        assert_eq!(pd.upsilon(0.249), 0.0);
        assert_eq!(pd.upsilon(0.501), 0.0);
        assert!(pd.upsilon(0.3).abs() > 0.0);
    }
}
