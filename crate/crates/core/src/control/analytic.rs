//! Closed-form solutions of the control equation for two families of
//! estimators: the zero approximant, and approximants whose growth decays
//! like `e^{−νt}` with differential error decaying like `e^{−2νt}`.

use super::e_nu;

/// Control solution for the zero approximant, `dR/dt = −νR + G R²`,
/// `R(0) = ‖u₀‖_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroApproximantSolution {
    pub nu: f64,
    pub g_n: f64,
    pub norm_u0: f64,
    /// `+∞` when global.
    pub tc: f64,
}

impl ZeroApproximantSolution {
    /// `‖u₀‖ e^{−νt} / (1 − G ‖u₀‖ e_ν(t))` for `t < Tc`.
    pub fn eval(&self, t: f64) -> Option<f64> {
        if t < 0.0 || t >= self.tc {
            return None;
        }
        let denom = 1.0 - self.g_n * self.norm_u0 * e_nu(self.nu, t);
        Some(self.norm_u0 * (-self.nu * t).exp() / denom)
    }
}

pub fn analytic_zero_approximant(nu: f64, g_n: f64, norm_u0_n: f64) -> ZeroApproximantSolution {
    let tc = if norm_u0_n == 0.0 {
        f64::INFINITY
    } else if nu > 0.0 {
        if norm_u0_n <= nu / g_n {
            f64::INFINITY
        } else {
            -(-nu / (g_n * norm_u0_n)).ln_1p() / nu
        }
    } else {
        1.0 / (g_n * norm_u0_n)
    };
    ZeroApproximantSolution {
        nu,
        g_n,
        norm_u0: norm_u0_n,
        tc,
    }
}

/// Why the exponential-decay closed form does not apply.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExpDecayRejection {
    /// `G_n E_n ≥ Δ_n²`.
    ErrorBound { g_e: f64, delta_sq: f64 },
    /// `D_n` or `D_{n+1}` not strictly positive, or a negative input.
    InvalidInput,
}

/// Control solution for `D_n(t) = D_n e^{−νt}`, `D_{n+1}(t) = D_{n+1} e^{−νt}`,
/// `ε_n(t) = E_n e^{−2νt}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpDecaySolution {
    pub nu: f64,
    pub g_n: f64,
    /// `Δ_n = (G_n D_n + K_n D_{n+1}) / 2`.
    pub half_rate: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    pub delta_n: f64,
    /// `+∞` when global.
    pub tc: f64,
}

impl ExpDecaySolution {
    /// `η_n(t) = exp((W⁺ − W⁻) e_ν(t))`.
    pub fn eta(&self, t: f64) -> f64 {
        ((self.w_plus - self.w_minus) * e_nu(self.nu, t)).exp()
    }

    pub fn eval(&self, t: f64) -> Option<f64> {
        if t < 0.0 || t >= self.tc {
            return None;
        }
        let a = self.w_plus + self.g_n * self.delta_n;
        let b = self.w_minus + self.g_n * self.delta_n;
        if b == 0.0 {
            return Some(0.0);
        }
        let eta = self.eta(t);
        let z = (self.w_plus * b * eta - self.w_minus * a) / (self.g_n * (a - b * eta));
        Some(z * (-self.nu * t).exp())
    }
}

pub fn analytic_exp_decay(
    nu: f64,
    k_n: f64,
    g_n: f64,
    d_n: f64,
    d_np1: f64,
    e_n: f64,
    delta_n: f64,
) -> Result<ExpDecaySolution, ExpDecayRejection> {
    if !(d_n > 0.0 && d_np1 > 0.0 && e_n >= 0.0 && delta_n >= 0.0 && nu >= 0.0 && g_n > 0.0 && k_n > 0.0) {
        return Err(ExpDecayRejection::InvalidInput);
    }
    let half_rate = 0.5 * (g_n * d_n + k_n * d_np1);
    let delta_sq = half_rate * half_rate;
    let g_e = g_n * e_n;
    if g_e >= delta_sq {
        return Err(ExpDecayRejection::ErrorBound { g_e, delta_sq });
    }
    let root = (delta_sq - g_e).sqrt();
    let w_plus = half_rate + root;
    // Δ − √(Δ² − GE) rewritten to avoid cancellation.
    let w_minus = g_e / w_plus;
    let a = w_plus + g_n * delta_n;
    let b = w_minus + g_n * delta_n;
    let tc = if b == 0.0 {
        f64::INFINITY
    } else {
        let spread = w_plus - w_minus;
        let reach = (a / b).ln() / spread;
        if nu == 0.0 {
            reach
        } else if nu * reach >= 1.0 {
            f64::INFINITY
        } else {
            -(-nu * reach).ln_1p() / nu
        }
    };
    Ok(ExpDecaySolution {
        nu,
        g_n,
        half_rate,
        w_plus,
        w_minus,
        delta_n,
        tc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_approximant_euler_time() {
        let s = analytic_zero_approximant(0.0, 0.438, 154.3);
        assert!((s.tc - 1.0 / (0.438 * 154.3)).abs() < 1e-15);
        assert!((s.tc - 0.014797).abs() < 1e-6);
    }

    #[test]
    fn zero_approximant_global_cases() {
        assert!(analytic_zero_approximant(68.0, 0.438, 154.3).tc.is_infinite());
        let zero = analytic_zero_approximant(0.0, 0.438, 0.0);
        assert!(zero.tc.is_infinite());
        assert_eq!(zero.eval(10.0), Some(0.0));
    }

    #[test]
    fn zero_approximant_matches_quadrature_formula() {
        let (nu, g, u) = (3.0, 0.5, 10.0);
        let s = analytic_zero_approximant(nu, g, u);
        assert!(s.tc.is_finite());
        // (1/ν) log((G − ν/R)/(G − ν/u)) = t
        for t in [0.01, 0.05, 0.1] {
            let r = s.eval(t).unwrap();
            let lhs = ((g - nu / r) / (g - nu / u)).ln() / nu;
            assert!((lhs - t).abs() < 1e-12);
        }
        assert_eq!(s.eval(s.tc), None);
    }

    #[test]
    fn exp_decay_trivial_solution() {
        let s = analytic_exp_decay(2.0, 0.323, 0.438, 1.0, 2.0, 0.0, 0.0).unwrap();
        assert_eq!(s.w_minus, 0.0);
        assert!(s.tc.is_infinite());
        assert_eq!(s.eval(5.0), Some(0.0));
    }

    #[test]
    fn exp_decay_euler_time() {
        let (k, g, d, d1, e, delta) = (0.323, 0.438, 3.0, 4.0, 0.5, 0.2);
        let s = analytic_exp_decay(0.0, k, g, d, d1, e, delta).unwrap();
        let expected = ((s.w_plus + g * delta) / (s.w_minus + g * delta)).ln() / (s.w_plus - s.w_minus);
        assert!((s.tc - expected).abs() < 1e-15);
        assert!((s.eval(0.0).unwrap() - delta).abs() < 1e-14);
    }

    #[test]
    fn exp_decay_rejects_large_error() {
        let r = analytic_exp_decay(1.0, 0.323, 0.438, 1.0, 1.0, 100.0, 0.0);
        assert!(matches!(r, Err(ExpDecayRejection::ErrorBound { .. })));
        assert_eq!(
            analytic_exp_decay(1.0, 0.323, 0.438, 0.0, 1.0, 0.0, 0.0),
            Err(ExpDecayRejection::InvalidInput)
        );
    }
}
