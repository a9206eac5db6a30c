//! Tail probabilities for the normal, Student t and chi-square distributions.
//!
//! All functions go through the regularized incomplete beta and gamma
//! functions and the complementary error function of `statrs` (continued
//! fractions and series), so upper tails stay accurate far from the centre.

use statrs::function::{beta, erf, gamma};

/// Two-sided normal p-value `P(|Z| >= |z|)`.
pub fn normal_two_sided_p(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    erf::erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

/// Standard normal quantile `Φ⁻¹(p)` for `p` in `(0, 1)`.
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile level out of range: {p}");
    -std::f64::consts::SQRT_2 * erf::erfc_inv(2.0 * p)
}

/// Two-sided Student t p-value `P(|T_df| >= |t|)`, equal to
/// `I_{df/(df+t²)}(df/2, 1/2)`.
pub fn students_t_two_sided_p(t: f64, df: f64) -> f64 {
    assert!(df > 0.0, "degrees of freedom must be positive");
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let x = df / (df + t * t);
    beta::beta_reg(df / 2.0, 0.5, x).clamp(0.0, 1.0)
}

/// Upper tail `P(X >= x)` of a chi-square with `df` degrees of freedom.
pub fn chi_squared_sf(x: f64, df: f64) -> f64 {
    assert!(df > 0.0, "degrees of freedom must be positive");
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    gamma::gamma_ur(df / 2.0, x / 2.0).clamp(0.0, 1.0)
}
