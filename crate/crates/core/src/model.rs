//! The Swanson Hamiltonian `ωa†a + λa² + δa†² + ω/2` in momentum
//! representation, its rewritings, and its metric operators.
//!
//! Position acts as `x̂ = iħ(1+βp²) d/dp` and momentum as multiplication by
//! `p`; at `β = 0` this is the ordinary representation with `[x̂, p̂] = iħ`.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{CoeffFn, DiffOp, Measure, Poly};
use crate::error::{AlgebraError, ModelError};

/// Smallest admissible `|ω - λ - δ|`.
pub const METRIC_GUARD: f64 = 1e-9;

const REGIME_TOL: f64 = 1e-12;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn im(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// Validated model parameters. `mu = delta - lambda` is derived and cannot
/// be set independently.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    omega: f64,
    lambda: f64,
    delta: f64,
    m: f64,
    hbar: f64,
    beta: f64,
    mu: f64,
}

impl ModelParams {
    pub fn new(
        omega: f64,
        lambda: f64,
        delta: f64,
        m: f64,
        hbar: f64,
        beta: f64,
    ) -> Result<Self, ModelError> {
        for (name, value) in [
            ("omega", omega),
            ("lambda", lambda),
            ("delta", delta),
            ("m", m),
            ("hbar", hbar),
            ("beta", beta),
        ] {
            if !value.is_finite() {
                return Err(ModelError::NotFinite { name, value });
            }
        }
        if omega <= 0.0 {
            return Err(ModelError::NonPositiveOmega(omega));
        }
        if m <= 0.0 {
            return Err(ModelError::NonPositiveMass(m));
        }
        if hbar <= 0.0 {
            return Err(ModelError::NonPositiveHbar(hbar));
        }
        if beta < 0.0 {
            return Err(ModelError::NegativeBeta(beta));
        }
        let gap = omega - lambda - delta;
        if gap.abs() <= METRIC_GUARD {
            return Err(ModelError::DegenerateMetric(gap));
        }
        Ok(Self {
            omega,
            lambda,
            delta,
            m,
            hbar,
            beta,
            mu: delta - lambda,
        })
    }

    /// The reduced regime `m = ħ = 1`, `λ = -δ`.
    pub fn reduced(omega: f64, delta: f64, beta: f64) -> Result<Self, ModelError> {
        Self::new(omega, -delta, delta, 1.0, 1.0, beta)
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self, ModelError> {
        Self::new(self.omega, self.lambda, self.delta, self.m, self.hbar, beta)
    }

    pub fn undeformed(&self) -> Self {
        Self { beta: 0.0, ..*self }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `ω - λ - δ`
    pub fn gap(&self) -> f64 {
        self.omega - self.lambda - self.delta
    }

    pub fn is_reduced_regime(&self) -> bool {
        self.m == 1.0 && self.hbar == 1.0 && (self.lambda + self.delta).abs() <= REGIME_TOL
    }

    /// `λ = δ`: the Hamiltonian is self-adjoint in the plain inner product.
    pub fn is_hermitian_case(&self) -> bool {
        self.lambda == self.delta
    }

    /// `ω² - 4λδ`; the spectrum is real and discrete only when positive.
    pub fn discriminant(&self) -> f64 {
        self.omega * self.omega - 4.0 * self.lambda * self.delta
    }

    fn require_undeformed(&self, what: &'static str) -> Result<(), ModelError> {
        if self.beta == 0.0 {
            Ok(())
        } else {
            Err(AlgebraError::RequiresUndeformed(what).into())
        }
    }

    fn require_deformed(&self, what: &'static str) -> Result<(), ModelError> {
        if self.beta > 0.0 {
            Ok(())
        } else {
            Err(AlgebraError::RequiresDeformed(what).into())
        }
    }
}

/// Coefficients of `H₀ = Q d²/dp² + R p d/dp + S p² + T`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentumRepCoeffs {
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub t: f64,
}

impl MomentumRepCoeffs {
    pub fn from_params(params: &ModelParams) -> Self {
        let ModelParams {
            omega,
            lambda,
            delta,
            m,
            hbar,
            ..
        } = *params;
        Self {
            q: -(m * hbar * omega / 2.0) * (omega - lambda - delta),
            r: lambda - delta,
            s: (omega + lambda + delta) / (2.0 * m * hbar * omega),
            t: (lambda - delta) / 2.0,
        }
    }
}

/// `x̂ = iħ(1+βp²) d/dp`
pub fn position(params: &ModelParams) -> DiffOp {
    DiffOp::term(CoeffFn::u_power(1, params.beta).scale(im(params.hbar)), 1)
}

/// `p̂ = p`
pub fn momentum(params: &ModelParams) -> DiffOp {
    DiffOp::momentum(params.beta)
}

/// Annihilation and creation operators `(p̂ ∓ iωm x̂)/√(2mħω)`.
pub fn ladder_ops(params: &ModelParams) -> Result<(DiffOp, DiffOp), ModelError> {
    params.require_undeformed("ladder operators")?;
    let norm = 1.0 / (2.0 * params.m * params.hbar * params.omega).sqrt();
    let p = momentum(params);
    let x = position(params);
    let mw = params.m * params.omega;
    let a = DiffOp::linear(re(norm), &p, im(-mw * norm), &x)?;
    let adag = DiffOp::linear(re(norm), &p, im(mw * norm), &x)?;
    Ok((a, adag))
}

/// `ωa†a + λa² + δa†² + ω/2`, expanded by composition.
pub fn h_ladder(params: &ModelParams) -> Result<DiffOp, ModelError> {
    let (a, adag) = ladder_ops(params)?;
    let number = adag.compose(&a)?;
    let aa = a.compose(&a)?;
    let adag2 = adag.compose(&adag)?;
    let h = DiffOp::linear(re(params.omega), &number, re(params.lambda), &aa)?;
    let h = DiffOp::linear(re(1.0), &h, re(params.delta), &adag2)?;
    Ok(h.add(&DiffOp::scalar(re(params.omega / 2.0), 0.0))?)
}

/// The quadratic form in `x̂, p̂` with its four coefficients, for whatever
/// position operator the parameters select.
fn quadratic_form(params: &ModelParams) -> Result<DiffOp, ModelError> {
    let ModelParams {
        omega,
        lambda,
        delta,
        m,
        hbar,
        beta,
        ..
    } = *params;
    let k = 1.0 / (2.0 * m * hbar * omega);
    let x = position(params);
    let p = momentum(params);
    let pp = p.compose(&p)?;
    let px = p.compose(&x)?;
    let xp = x.compose(&p)?;
    let xx = x.compose(&x)?;

    let terms = [
        (re(k * (omega + lambda + delta)), pp),
        (im(k * m * omega * (delta - lambda - omega)), px),
        (im(k * m * omega * (delta - lambda + omega)), xp),
        (re(k * m * m * omega * omega * (omega - lambda - delta)), xx),
    ];
    let mut h = DiffOp::scalar(re(omega / 2.0), beta);
    for (c, op) in &terms {
        h = DiffOp::linear(re(1.0), &h, *c, op)?;
    }
    Ok(h)
}

/// The quadratic form with `x̂ = iħ d/dp`.
pub fn h_quadratic(params: &ModelParams) -> Result<DiffOp, ModelError> {
    params.require_undeformed("h_quadratic")?;
    quadratic_form(params)
}

/// The quadratic form with the deformed position `x̂ = iħ(1+βp²) d/dp`.
pub fn h_deformed(params: &ModelParams) -> Result<DiffOp, ModelError> {
    params.require_deformed("h_deformed")?;
    quadratic_form(params)
}

fn require_reduced(params: &ModelParams) -> Result<(), ModelError> {
    if params.is_reduced_regime() {
        Ok(())
    } else {
        Err(ModelError::NotReducedRegime)
    }
}

/// `p̂²/2 + ω²x̂²/2 + i(μ/2){x̂,p̂} + i(ω/2)[x̂,p̂] + ω/2` in the reduced regime.
pub fn h_eq5(params: &ModelParams) -> Result<DiffOp, ModelError> {
    require_reduced(params)?;
    let omega = params.omega;
    let x = position(params);
    let p = momentum(params);
    let pp = p.compose(&p)?;
    let xx = x.compose(&x)?;
    let anti = x.anticommutator(&p)?;
    let comm = x.commutator(&p)?;
    let h = DiffOp::linear(re(0.5), &pp, re(omega * omega / 2.0), &xx)?;
    let h = DiffOp::linear(re(1.0), &h, im(params.mu / 2.0), &anti)?;
    let h = DiffOp::linear(re(1.0), &h, im(omega / 2.0), &comm)?;
    Ok(h.add(&DiffOp::scalar(re(omega / 2.0), params.beta))?)
}

/// `p̂²/2 + ω²x̂²/2 + iμ{x̂,p̂}` in the reduced regime.
pub fn h_bf(params: &ModelParams) -> Result<DiffOp, ModelError> {
    require_reduced(params)?;
    let omega = params.omega;
    let x = position(params);
    let p = momentum(params);
    let pp = p.compose(&p)?;
    let xx = x.compose(&x)?;
    let anti = x.anticommutator(&p)?;
    let h = DiffOp::linear(re(0.5), &pp, re(omega * omega / 2.0), &xx)?;
    Ok(DiffOp::linear(re(1.0), &h, im(params.mu), &anti)?)
}

fn h0_from(coeffs: &MomentumRepCoeffs, sign: f64) -> DiffOp {
    let MomentumRepCoeffs { q, r, s, t } = *coeffs;
    let beta = 0.0;
    DiffOp::from_terms(
        beta,
        [
            (2, CoeffFn::constant(re(q), beta)),
            (
                1,
                CoeffFn::from_poly(Poly::from_real(&[0.0, sign * r]), beta),
            ),
            (
                0,
                CoeffFn::from_poly(Poly::from_real(&[sign * t, 0.0, s]), beta),
            ),
        ],
    )
    .expect("single-beta terms")
}

/// `(Q, R, S, T)` and `Q D² + R p D + S p² + T`.
pub fn h0_momentum(params: &ModelParams) -> Result<(MomentumRepCoeffs, DiffOp), ModelError> {
    params.require_undeformed("h0_momentum")?;
    let coeffs = MomentumRepCoeffs::from_params(params);
    Ok((coeffs, h0_from(&coeffs, 1.0)))
}

/// `Q D² - R p D + S p² - T`, the printed conjugate of `H₀`.
pub fn h0_adjoint_expected(params: &ModelParams) -> Result<DiffOp, ModelError> {
    params.require_undeformed("h0_adjoint_expected")?;
    Ok(h0_from(&MomentumRepCoeffs::from_params(params), -1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricFamily {
    /// `(1 + βp²)^e`
    Power,
    /// `exp(α p²)`
    Gaussian,
    Identity,
}

impl MetricFamily {
    pub fn name(self) -> &'static str {
        match self {
            MetricFamily::Power => "power",
            MetricFamily::Gaussian => "gaussian",
            MetricFamily::Identity => "identity",
        }
    }
}

/// A metric operator that is a positive function of `p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MetricSpec {
    pub family: MetricFamily,
    pub exponent: f64,
    pub beta: f64,
}

impl MetricSpec {
    pub fn identity(beta: f64) -> Self {
        Self {
            family: MetricFamily::Identity,
            exponent: 0.0,
            beta,
        }
    }

    pub fn gaussian(alpha: f64) -> Self {
        Self {
            family: MetricFamily::Gaussian,
            exponent: alpha,
            beta: 0.0,
        }
    }

    pub fn power(exponent: f64, beta: f64) -> Result<Self, ModelError> {
        if beta <= 0.0 {
            return Err(ModelError::MetricFamily {
                family: "power",
                beta,
            });
        }
        Ok(Self {
            family: MetricFamily::Power,
            exponent,
            beta,
        })
    }

    /// Same family with the exponent replaced.
    pub fn with_exponent(&self, exponent: f64) -> Self {
        match self.family {
            MetricFamily::Identity if self.beta > 0.0 => Self {
                family: MetricFamily::Power,
                exponent,
                beta: self.beta,
            },
            MetricFamily::Identity => Self::gaussian(exponent),
            _ => Self { exponent, ..*self },
        }
    }

    /// `η⁻¹`
    pub fn inverse(&self) -> Self {
        Self {
            exponent: -self.exponent,
            ..*self
        }
    }

    /// `log η(p)`
    pub fn log_value(&self, p: f64) -> f64 {
        match self.family {
            MetricFamily::Identity => 0.0,
            MetricFamily::Gaussian => self.exponent * p * p,
            MetricFamily::Power => self.exponent * (self.beta * p * p).ln_1p(),
        }
    }

    pub fn value(&self, p: f64) -> f64 {
        self.log_value(p).exp()
    }

    /// `η X η⁻¹` computed symbolically.
    pub fn conjugate(&self, op: &DiffOp) -> Result<DiffOp, AlgebraError> {
        match self.family {
            MetricFamily::Identity => Ok(op.clone()),
            MetricFamily::Gaussian => op.conjugate_gaussian(self.exponent),
            MetricFamily::Power => op.conjugate_power(self.exponent),
        }
    }

    /// Measure under which the metric intertwines `H` with its adjoint.
    pub fn measure(&self) -> Measure {
        if self.beta > 0.0 {
            Measure::Deformed
        } else {
            Measure::Standard
        }
    }
}

/// `α = (δ-λ) / (mħω(ω-λ-δ))`
fn alpha_of(params: &ModelParams) -> f64 {
    (params.delta - params.lambda) / (params.m * params.hbar * params.omega * params.gap())
}

/// Power-law metric `(1+βp²)^e` with `e = α/β`.
pub fn metric_exponent(params: &ModelParams) -> Result<MetricSpec, ModelError> {
    if params.beta <= 0.0 {
        return Err(ModelError::MetricFamily {
            family: "power",
            beta: params.beta,
        });
    }
    if params.is_hermitian_case() {
        return Ok(MetricSpec::identity(params.beta));
    }
    MetricSpec::power(alpha_of(params) / params.beta, params.beta)
}

/// Gaussian metric `exp(αp²)`, the `β → 0` limit of the power law.
pub fn gaussian_alpha(params: &ModelParams) -> Result<MetricSpec, ModelError> {
    if params.beta != 0.0 {
        return Err(ModelError::MetricFamily {
            family: "gaussian",
            beta: params.beta,
        });
    }
    if params.is_hermitian_case() {
        return Ok(MetricSpec::identity(0.0));
    }
    Ok(MetricSpec::gaussian(alpha_of(params)))
}

/// The metric matching the parameters' deformation.
pub fn metric(params: &ModelParams) -> Result<MetricSpec, ModelError> {
    if params.beta > 0.0 {
        metric_exponent(params)
    } else {
        gaussian_alpha(params)
    }
}

/// Hamiltonian in the representation the parameters select.
pub fn hamiltonian(params: &ModelParams) -> Result<DiffOp, ModelError> {
    quadratic_form(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DEFAULT_TOL;

    fn p1() -> ModelParams {
        ModelParams::new(1.0, -0.5, 0.5, 1.0, 1.0, 0.0).unwrap()
    }

    fn p2() -> ModelParams {
        ModelParams::new(2.0, 0.1, 0.4, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn derived_mu() {
        assert_eq!(p1().mu(), 1.0);
        assert!((p2().mu() - 0.3).abs() < 1e-15);
        assert!(p1().is_reduced_regime());
        assert!(!p2().is_reduced_regime());
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            ModelParams::new(1.0, 0.5, 0.5, 1.0, 1.0, 0.0),
            Err(ModelError::DegenerateMetric(_))
        ));
        assert_eq!(
            ModelParams::new(0.0, 0.1, 0.2, 1.0, 1.0, 0.0),
            Err(ModelError::NonPositiveOmega(0.0))
        );
        assert_eq!(
            ModelParams::new(1.0, 0.1, 0.2, -1.0, 1.0, 0.0),
            Err(ModelError::NonPositiveMass(-1.0))
        );
        assert_eq!(
            ModelParams::new(1.0, 0.1, 0.2, 1.0, 0.0, 0.0),
            Err(ModelError::NonPositiveHbar(0.0))
        );
        assert_eq!(
            ModelParams::new(1.0, 0.1, 0.2, 1.0, 1.0, -0.1),
            Err(ModelError::NegativeBeta(-0.1))
        );
        assert!(matches!(
            ModelParams::new(f64::NAN, 0.1, 0.2, 1.0, 1.0, 0.0),
            Err(ModelError::NotFinite { name: "omega", .. })
        ));
    }

    #[test]
    fn ladder_operators_for_p1() {
        let (a, adag) = ladder_ops(&p1()).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let expected = DiffOp::linear(
            re(s),
            &DiffOp::momentum(0.0),
            re(s),
            &DiffOp::derivative(0.0),
        )
        .unwrap();
        assert!(a.approx_eq(&expected, 1e-15).unwrap());
        assert!(a
            .adjoint(Measure::Standard)
            .unwrap()
            .approx_eq(&adag, 1e-15)
            .unwrap());
        let comm = a.commutator(&adag).unwrap();
        assert!(comm.approx_eq(&DiffOp::identity(0.0), 1e-14).unwrap());
    }

    #[test]
    fn ladder_ops_reject_deformation() {
        assert!(ladder_ops(&p1().with_beta(0.1).unwrap()).is_err());
        assert!(h_quadratic(&p1().with_beta(0.1).unwrap()).is_err());
        assert!(h_deformed(&p1()).is_err());
    }

    #[test]
    fn momentum_coefficients() {
        let c1 = MomentumRepCoeffs::from_params(&p1());
        assert_eq!((c1.q, c1.r, c1.s, c1.t), (-0.5, -1.0, 0.5, -0.5));
        let c2 = MomentumRepCoeffs::from_params(&p2());
        assert!((c2.q + 1.5).abs() < 1e-15);
        assert!((c2.r + 0.3).abs() < 1e-15);
        assert!((c2.s - 0.625).abs() < 1e-15);
        assert!((c2.t + 0.15).abs() < 1e-15);
    }

    #[test]
    fn oscillator_limit() {
        let osc = ModelParams::new(1.0, 0.0, 0.0, 1.0, 1.0, 0.0).unwrap();
        let h = h_quadratic(&osc).unwrap();
        assert_eq!(h.poly_coefficient(2, 0), re(-0.5));
        assert_eq!(h.poly_coefficient(0, 2), re(0.5));
        assert_eq!(h.poly_coefficient(0, 0), re(0.0));
        assert!(h.coefficient(1).is_none());
        assert!(h
            .approx_eq(&h.adjoint(Measure::Standard).unwrap(), DEFAULT_TOL)
            .unwrap());
    }

    #[test]
    fn hermitian_case_is_self_adjoint() {
        let herm = ModelParams::new(1.0, 0.3, 0.3, 1.0, 1.0, 0.0).unwrap();
        let h = h_ladder(&herm).unwrap();
        assert!(h
            .approx_eq(&h.adjoint(Measure::Standard).unwrap(), DEFAULT_TOL)
            .unwrap());
    }

    #[test]
    fn deformed_closed_form_for_p1() {
        // 0.5p² - 1.1 p u D - 0.5 u² D² - u + 0.5, cross-checked pointwise.
        let params = p1().with_beta(0.1).unwrap();
        let h = h_deformed(&params).unwrap();
        for &p in &[-4.0, -1.0, 0.0, 0.3, 2.0, 6.0] {
            let u = 1.0 + 0.1 * p * p;
            let mut c = [Complex64::default(); 3];
            for (b, v) in h.coefficients_at(p) {
                c[b] = v;
            }
            assert!((c[2] - re(-0.5 * u * u)).norm() < 1e-12);
            assert!((c[1] - re(-1.1 * p * u)).norm() < 1e-12);
            assert!((c[0] - re(0.5 * p * p - u + 0.5)).norm() < 1e-12);
        }
    }

    #[test]
    fn metric_values_for_p1() {
        let e = metric_exponent(&p1().with_beta(0.1).unwrap()).unwrap();
        assert_eq!(e.family, MetricFamily::Power);
        assert!((e.exponent - 10.0).abs() < 1e-12);
        let g = gaussian_alpha(&p1()).unwrap();
        assert_eq!(g.family, MetricFamily::Gaussian);
        assert_eq!(g.exponent, 1.0);
        // reduced-regime form μ/ω²
        assert_eq!(g.exponent, p1().mu() / (p1().omega() * p1().omega()));
        assert!(gaussian_alpha(&p1().with_beta(0.1).unwrap()).is_err());
        assert!(metric_exponent(&p1()).is_err());
    }

    #[test]
    fn hermitian_case_has_identity_metric() {
        let herm = ModelParams::new(1.0, 0.3, 0.3, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(
            gaussian_alpha(&herm).unwrap().family,
            MetricFamily::Identity
        );
        let herm_b = herm.with_beta(0.1).unwrap();
        let spec = metric_exponent(&herm_b).unwrap();
        assert_eq!(spec.family, MetricFamily::Identity);
        assert_eq!(spec.exponent, 0.0);
    }

    #[test]
    fn eq5_and_bf_for_p1() {
        let params = p1();
        let h5 = h_eq5(&params).unwrap();
        assert!(h5
            .approx_eq(&h_quadratic(&params).unwrap(), DEFAULT_TOL)
            .unwrap());
        let diff = h5.sub(&h_bf(&params).unwrap()).unwrap();
        assert!((diff.poly_coefficient(1, 1) - re(1.0)).norm() < 1e-15);
        assert!((diff.poly_coefficient(0, 0) - re(0.5)).norm() < 1e-15);
        assert_eq!(diff.terms().count(), 2);
        assert!(h_eq5(&p2()).is_err());
    }

    #[test]
    fn eq5_matches_bf_when_mu_vanishes() {
        let params = ModelParams::reduced(1.3, 0.0, 0.0).unwrap();
        let h5 = h_eq5(&params).unwrap();
        assert!(h5.approx_eq(&h_bf(&params).unwrap(), DEFAULT_TOL).unwrap());
    }
}
