//! Normal-ordered differential operators on the momentum line.
//!
//! An operator is a finite sum `Σ_b f_b(p) · D^b` with `D = d/dp` and every
//! coefficient function on the left. Composition re-normal-orders through the
//! Leibniz rule `D^a ∘ g = Σ_j C(a,j) g^(j) D^(a-j)`, which is the only
//! commutation relation in the algebra (`[D, p] = 1`).

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::coeff::{check_beta, fmt_monomial, CoeffFn};
use super::poly::Poly;
use crate::error::AlgebraError;

/// Terms whose coefficients are all at or below this modulus are dropped.
pub const PRUNE_EPS: f64 = 1e-15;

/// Default absolute tolerance for operator identities.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Inner-product measure `(1 + βp²)^κ dp` used by [`DiffOp::adjoint`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// `dp`
    Standard,
    /// `dp / (1 + βp²)`
    Deformed,
}

impl Measure {
    pub fn power(self) -> i32 {
        match self {
            Measure::Standard => 0,
            Measure::Deformed => -1,
        }
    }

    pub fn from_power(kappa: i32) -> Result<Self, AlgebraError> {
        match kappa {
            0 => Ok(Measure::Standard),
            -1 => Ok(Measure::Deformed),
            other => Err(AlgebraError::UnsupportedMeasure(other)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp {
    beta: f64,
    terms: BTreeMap<usize, CoeffFn>,
}

/// Outcome of comparing two operators.
#[derive(Clone, Debug)]
pub struct Comparison {
    /// Largest coefficient modulus of the canonical difference.
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub difference: DiffOp,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl DiffOp {
    pub fn zero(beta: f64) -> Self {
        Self {
            beta,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(c: Complex64, beta: f64) -> Self {
        Self::multiplication(CoeffFn::constant(c, beta))
    }

    pub fn identity(beta: f64) -> Self {
        Self::scalar(Complex64::new(1.0, 0.0), beta)
    }

    /// Multiplication by `p`.
    pub fn momentum(beta: f64) -> Self {
        Self::multiplication(CoeffFn::from_poly(
            Poly::monomial(Complex64::new(1.0, 0.0), 1),
            beta,
        ))
    }

    /// `d/dp`
    pub fn derivative(beta: f64) -> Self {
        Self::term(CoeffFn::constant(Complex64::new(1.0, 0.0), beta), 1)
    }

    pub fn multiplication(f: CoeffFn) -> Self {
        Self::term(f, 0)
    }

    /// `f · D^order`
    pub fn term(f: CoeffFn, order: usize) -> Self {
        let mut op = Self::zero(f.beta());
        op.terms.insert(order, f);
        op.prune();
        op
    }

    pub fn from_terms(
        beta: f64,
        terms: impl IntoIterator<Item = (usize, CoeffFn)>,
    ) -> Result<Self, AlgebraError> {
        let mut op = Self::zero(beta);
        for (order, f) in terms {
            op.accumulate(order, f)?;
        }
        op.prune();
        Ok(op)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Terms keyed by derivative order, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &CoeffFn)> {
        self.terms.iter().map(|(&b, f)| (b, f))
    }

    pub fn coefficient(&self, order: usize) -> Option<&CoeffFn> {
        self.terms.get(&order)
    }

    /// Highest derivative order present (`None` for the zero operator).
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient modulus over all terms.
    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .map(CoeffFn::max_abs)
            .fold(0.0, f64::max)
    }

    /// Coefficient of `p^degree · D^order` when the term is stored at `u^0`
    /// (or `β = 0`). Returns zero for absent terms.
    pub fn poly_coefficient(&self, order: usize, degree: usize) -> Complex64 {
        self.terms
            .get(&order)
            .map(|f| f.numerator_at(f.upow().min(0)).coeff(degree))
            .unwrap_or_default()
    }

    fn accumulate(&mut self, order: usize, f: CoeffFn) -> Result<(), AlgebraError> {
        check_beta(self.beta, f.beta())?;
        if f.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&order) {
            Some(existing) => *existing = existing.checked_add(&f)?,
            None => {
                self.terms.insert(order, f);
            }
        }
        Ok(())
    }

    fn prune(&mut self) {
        self.terms.retain(|_, f| !f.is_negligible(PRUNE_EPS));
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut op = Self {
            beta: self.beta,
            terms: self.terms.iter().map(|(&b, f)| (b, f.scale(c))).collect(),
        };
        op.prune();
        op
    }

    /// `a·X + b·Y`
    pub fn linear(
        a: Complex64,
        x: &DiffOp,
        b: Complex64,
        y: &DiffOp,
    ) -> Result<Self, AlgebraError> {
        check_beta(x.beta, y.beta)?;
        let mut out = Self::zero(x.beta);
        for (&order, f) in &x.terms {
            out.accumulate(order, f.scale(a))?;
        }
        for (&order, f) in &y.terms {
            out.accumulate(order, f.scale(b))?;
        }
        out.prune();
        Ok(out)
    }

    pub fn add(&self, rhs: &DiffOp) -> Result<Self, AlgebraError> {
        Self::linear(
            Complex64::new(1.0, 0.0),
            self,
            Complex64::new(1.0, 0.0),
            rhs,
        )
    }

    pub fn sub(&self, rhs: &DiffOp) -> Result<Self, AlgebraError> {
        Self::linear(
            Complex64::new(1.0, 0.0),
            self,
            Complex64::new(-1.0, 0.0),
            rhs,
        )
    }

    /// Composition `self ∘ rhs`, normal-ordered.
    pub fn compose(&self, rhs: &DiffOp) -> Result<Self, AlgebraError> {
        check_beta(self.beta, rhs.beta)?;
        let mut out = Self::zero(self.beta);
        for (&a, f) in &self.terms {
            for (&b, g) in &rhs.terms {
                // (f D^a)(g D^b) = Σ_j C(a,j) f g^(j) D^(a+b-j)
                let mut g_j = g.clone();
                for j in 0..=a {
                    if j > 0 {
                        g_j = g_j.derivative();
                    }
                    if g_j.is_zero() {
                        break;
                    }
                    let c = binomial(a, j);
                    let coeff = f.checked_mul(&g_j)?.scale(Complex64::new(c, 0.0));
                    out.accumulate(a + b - j, coeff)?;
                }
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn pow(&self, exp: usize) -> Result<Self, AlgebraError> {
        let mut out = Self::identity(self.beta);
        for _ in 0..exp {
            out = out.compose(self)?;
        }
        Ok(out)
    }

    /// `[X, Y] = XY - YX`
    pub fn commutator(&self, rhs: &DiffOp) -> Result<Self, AlgebraError> {
        self.compose(rhs)?.sub(&rhs.compose(self)?)
    }

    /// `{X, Y} = XY + YX`
    pub fn anticommutator(&self, rhs: &DiffOp) -> Result<Self, AlgebraError> {
        self.compose(rhs)?.add(&rhs.compose(self)?)
    }

    /// Formal adjoint under `⟨f, g⟩ = ∫ (1+βp²)^κ f̄ g dp`.
    ///
    /// The standard-measure adjoint is `(f D^b)† = (-1)^b D^b ∘ f̄`; for the
    /// deformed measure it is conjugated as `u^(-κ) ∘ A† ∘ u^κ`.
    pub fn adjoint(&self, measure: Measure) -> Result<Self, AlgebraError> {
        if measure == Measure::Deformed && self.beta == 0.0 {
            return Err(AlgebraError::DeformedMeasureWithoutBeta);
        }
        let mut std_adj = Self::zero(self.beta);
        for (&b, f) in &self.terms {
            let sign = if b % 2 == 0 { 1.0 } else { -1.0 };
            let d_b = Self::term(CoeffFn::constant(Complex64::new(sign, 0.0), self.beta), b);
            let piece = d_b.compose(&Self::multiplication(f.conj()))?;
            std_adj = std_adj.add(&piece)?;
        }
        match measure {
            Measure::Standard => Ok(std_adj),
            Measure::Deformed => {
                let kappa = measure.power();
                let left = Self::multiplication(CoeffFn::u_power(-kappa, self.beta));
                let right = Self::multiplication(CoeffFn::u_power(kappa, self.beta));
                left.compose(&std_adj)?.compose(&right)
            }
        }
    }

    /// Applies the automorphism `p ↦ p, D ↦ shifted_d` term by term.
    fn substitute_derivative(&self, shifted_d: &DiffOp) -> Result<Self, AlgebraError> {
        let max_order = self.order().unwrap_or(0);
        let mut powers = Vec::with_capacity(max_order + 1);
        powers.push(Self::identity(self.beta));
        for k in 1..=max_order {
            let next = powers[k - 1].compose(shifted_d)?;
            powers.push(next);
        }
        let mut out = Self::zero(self.beta);
        for (&b, f) in &self.terms {
            let piece = Self::multiplication(f.clone()).compose(&powers[b])?;
            out = out.add(&piece)?;
        }
        Ok(out)
    }

    /// `η X η⁻¹` with `η = exp(α p²)`; requires `β = 0`.
    pub fn conjugate_gaussian(&self, alpha: f64) -> Result<Self, AlgebraError> {
        if self.beta != 0.0 {
            return Err(AlgebraError::RequiresUndeformed("gaussian conjugation"));
        }
        let shift = Self::momentum(0.0).scale(Complex64::new(-2.0 * alpha, 0.0));
        self.substitute_derivative(&Self::derivative(0.0).add(&shift)?)
    }

    /// `η X η⁻¹` with `η = (1 + βp²)^e`; requires `β > 0`.
    pub fn conjugate_power(&self, exponent: f64) -> Result<Self, AlgebraError> {
        if self.beta <= 0.0 {
            return Err(AlgebraError::RequiresDeformed("power-law conjugation"));
        }
        let beta = self.beta;
        let shift = Self::multiplication(CoeffFn::new(
            Poly::monomial(Complex64::new(-2.0 * exponent * beta, 0.0), 1),
            -1,
            beta,
        ));
        self.substitute_derivative(&Self::derivative(beta).add(&shift)?)
    }

    /// Canonical difference `self - other` and its largest coefficient.
    pub fn compare(&self, other: &DiffOp, tolerance: f64) -> Result<Comparison, AlgebraError> {
        let difference = self.sub(other)?;
        let residual = difference.max_abs();
        Ok(Comparison {
            residual,
            tolerance,
            passed: residual <= tolerance,
            difference,
        })
    }

    pub fn approx_eq(&self, other: &DiffOp, tolerance: f64) -> Result<bool, AlgebraError> {
        Ok(self.compare(other, tolerance)?.passed)
    }

    /// Coefficient functions evaluated at `p`, keyed by derivative order.
    pub fn coefficients_at(&self, p: f64) -> Vec<(usize, Complex64)> {
        self.terms.iter().map(|(&b, f)| (b, f.eval(p))).collect()
    }
}

impl fmt::Display for DiffOp {
    /// Flattened monomials, highest derivative first, e.g.
    /// `(-0.5)·D^2 + (-1)·p·D + 0.5·p^2 + (-0.5)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&b, coeff) in self.terms.iter().rev() {
            for (k, &c) in coeff.poly().coeffs().iter().enumerate().rev() {
                if c.re == 0.0 && c.im == 0.0 {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                fmt_monomial(c, k, coeff.upow(), f)?;
                match b {
                    0 => {}
                    1 => write!(f, "·D")?,
                    _ => write!(f, "·D^{b}")?,
                }
            }
        }
        Ok(())
    }
}
