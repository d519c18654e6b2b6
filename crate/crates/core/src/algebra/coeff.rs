//! Coefficient functions of the form `P(p) · (1 + βp²)^k`.

use std::fmt;

use num_complex::Complex64;

use super::poly::{fmt_scalar, Poly};
use crate::error::AlgebraError;

/// `1 + βp²` as a polynomial.
pub fn deformation_factor(beta: f64) -> Poly {
    Poly::from_real(&[1.0, 0.0, beta])
}

pub(crate) fn check_beta(left: f64, right: f64) -> Result<(), AlgebraError> {
    if left == right {
        Ok(())
    } else {
        Err(AlgebraError::BetaMismatch { left, right })
    }
}

/// A polynomial times an integer power of `u = 1 + βp²`.
///
/// Sums are carried at the smaller of the two powers, expanding the surplus
/// `u^(k - k_min)` into the polynomial, so the class is closed under `+`, `·`
/// and `d/dp`. At `β = 0` the power is meaningless and normalized to 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffFn {
    poly: Poly,
    upow: i32,
    beta: f64,
}

impl CoeffFn {
    pub fn new(poly: Poly, upow: i32, beta: f64) -> Self {
        let upow = if beta == 0.0 || poly.is_zero() {
            0
        } else {
            upow
        };
        Self { poly, upow, beta }
    }

    pub fn from_poly(poly: Poly, beta: f64) -> Self {
        Self::new(poly, 0, beta)
    }

    pub fn constant(c: Complex64, beta: f64) -> Self {
        Self::from_poly(Poly::constant(c), beta)
    }

    pub fn zero(beta: f64) -> Self {
        Self::from_poly(Poly::zero(), beta)
    }

    /// `u^k` on its own.
    pub fn u_power(k: i32, beta: f64) -> Self {
        Self::new(Poly::one(), k, beta)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn upow(&self) -> i32 {
        self.upow
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// True when every stored coefficient is at most `eps` in modulus.
    pub fn is_negligible(&self, eps: f64) -> bool {
        self.poly.coeffs().iter().all(|c| c.norm() <= eps)
    }

    pub fn max_abs(&self) -> f64 {
        self.poly.max_abs()
    }

    /// Polynomial numerator when the function is rewritten over `u^target`.
    /// `target` must not exceed the current power.
    pub fn numerator_at(&self, target: i32) -> Poly {
        debug_assert!(target <= self.upow);
        if self.beta == 0.0 {
            return self.poly.clone();
        }
        let surplus = (self.upow - target) as u32;
        &self.poly * &deformation_factor(self.beta).pow(surplus)
    }

    pub fn checked_add(&self, rhs: &CoeffFn) -> Result<CoeffFn, AlgebraError> {
        check_beta(self.beta, rhs.beta)?;
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        let k = self.upow.min(rhs.upow);
        let sum = &self.numerator_at(k) + &rhs.numerator_at(k);
        Ok(CoeffFn::new(sum, k, self.beta))
    }

    pub fn checked_sub(&self, rhs: &CoeffFn) -> Result<CoeffFn, AlgebraError> {
        self.checked_add(&rhs.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn checked_mul(&self, rhs: &CoeffFn) -> Result<CoeffFn, AlgebraError> {
        check_beta(self.beta, rhs.beta)?;
        Ok(CoeffFn::new(
            &self.poly * &rhs.poly,
            self.upow + rhs.upow,
            self.beta,
        ))
    }

    pub fn scale(&self, c: Complex64) -> CoeffFn {
        CoeffFn::new(self.poly.scale(c), self.upow, self.beta)
    }

    pub fn conj(&self) -> CoeffFn {
        CoeffFn::new(self.poly.conj(), self.upow, self.beta)
    }

    /// `d/dp [P u^k] = (P' u + 2kβp P) u^(k-1)`
    pub fn derivative(&self) -> CoeffFn {
        if self.upow == 0 {
            return CoeffFn::new(self.poly.derivative(), 0, self.beta);
        }
        let u = deformation_factor(self.beta);
        let chain = Poly::monomial(Complex64::new(2.0 * self.upow as f64 * self.beta, 0.0), 1);
        let numerator = &(&self.poly.derivative() * &u) + &(&chain * &self.poly);
        CoeffFn::new(numerator, self.upow - 1, self.beta)
    }

    pub fn nth_derivative(&self, order: usize) -> CoeffFn {
        (0..order).fold(self.clone(), |f, _| f.derivative())
    }

    pub fn eval(&self, p: f64) -> Complex64 {
        let value = self.poly.eval(p);
        if self.upow == 0 {
            value
        } else {
            value * (1.0 + self.beta * p * p).powi(self.upow)
        }
    }
}

impl fmt::Display for CoeffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.upow == 0 {
            return write!(f, "{}", self.poly);
        }
        write!(f, "({})·u^{}", self.poly, self.upow)
    }
}

/// Formats one monomial `c·p^k·u^m` (without the derivative factor).
pub(crate) fn fmt_monomial(
    c: Complex64,
    degree: usize,
    upow: i32,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    fmt_scalar(c, f)?;
    match degree {
        0 => {}
        1 => write!(f, "·p")?,
        k => write!(f, "·p^{k}")?,
    }
    if upow != 0 {
        write!(f, "·u^{upow}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn exponents_cancel_in_products() {
        let a = CoeffFn::new(Poly::monomial(re(1.0), 1), 1, 0.1);
        let b = CoeffFn::u_power(-1, 0.1);
        let prod = a.checked_mul(&b).unwrap();
        assert_eq!(prod.upow(), 0);
        assert_eq!(prod.poly(), &Poly::monomial(re(1.0), 1));
    }

    #[test]
    fn derivative_of_inverse_factor() {
        // d/dp (1+βp²)^-1 = -2βp (1+βp²)^-2, compared against a central difference.
        let f = CoeffFn::u_power(-1, 0.1);
        let df = f.derivative();
        assert_eq!(df.upow(), -2);
        let expected = Poly::monomial(re(-0.2), 1);
        assert!((&(df.poly().clone()) - &expected).max_abs() < 1e-15);

        let h = 1e-5;
        for &p in &[-2.0, -0.3, 0.0, 0.7, 3.0] {
            let fd = (f.eval(p + h) - f.eval(p - h)) / (2.0 * h);
            assert!((fd - df.eval(p)).norm() < 1e-8);
        }
    }

    #[test]
    fn addition_at_common_power() {
        let a = CoeffFn::from_poly(Poly::monomial(re(1.0), 2), 0.0);
        let b = CoeffFn::constant(re(1.0), 0.0);
        let s = a.checked_add(&b).unwrap();
        assert_eq!(s.poly(), &Poly::from_real(&[1.0, 0.0, 1.0]));
        assert_eq!(s.upow(), 0);
    }

    #[test]
    fn addition_lowers_to_min_power() {
        // u + u^-1 = (u² + 1) u^-1
        let beta = 0.5;
        let s = CoeffFn::u_power(1, beta)
            .checked_add(&CoeffFn::u_power(-1, beta))
            .unwrap();
        assert_eq!(s.upow(), -1);
        for &p in &[0.0, 1.0, 2.5] {
            let u: f64 = 1.0 + beta * p * p;
            assert!((s.eval(p).re - (u + 1.0 / u)).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_beta_normalizes_power() {
        assert_eq!(CoeffFn::u_power(3, 0.0).upow(), 0);
    }

    #[test]
    fn beta_mismatch_rejected() {
        let a = CoeffFn::constant(re(1.0), 0.1);
        let b = CoeffFn::constant(re(1.0), 0.2);
        assert!(matches!(
            a.checked_add(&b),
            Err(AlgebraError::BetaMismatch { .. })
        ));
        assert!(a.checked_mul(&b).is_err());
    }
}
