//! Coefficient-field abstraction: one trait, two interchangeable backends.
//!
//! `Exact` is the field of rational functions over Q in declared parameters
//! with at most one algebraic generator; `BigC` is arbitrary-precision
//! complex. All engine code is generic over [`Scalar`].

pub mod big;
pub mod exact;
pub mod mpoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

pub use big::{BigC, BigCtx};
pub use exact::{Exact, ExactCtx, RatFrac};
pub use mpoly::MPoly;

use crate::error::{Error, Result};

/// Field element usable by the series and curve machinery.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + crate::series::Coeff
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    type Ctx: Send + Sync + Debug;

    fn ctx_arc(&self) -> Option<Arc<Self::Ctx>>;
    fn of_i64(ctx: &Arc<Self::Ctx>, n: i64) -> Self;
    fn of_q(ctx: &Arc<Self::Ctx>, q: &BigRational) -> Self;
    fn try_inv(&self) -> Result<Self>;
    fn try_sqrt(&self) -> Result<Self>;
    /// Zero test used for trimming and verdicts: exact zero on the exact
    /// backend, |z| <= zero_tolerance on the bigfloat backend.
    fn is_negligible(&self) -> bool;
    fn render(&self) -> String;
    fn render_exact(&self) -> String;
    fn parse_str(ctx: &Arc<Self::Ctx>, s: &str) -> Result<Self>;
    fn parse_exact(ctx: &Arc<Self::Ctx>, s: &str) -> Result<Self>;
    /// Rough magnitude for defect reports (exact backend: 0 or 1).
    fn magnitude(&self) -> f64;
    fn is_exact_backend() -> bool;

    fn mul_i64(&self, n: i64) -> Self {
        let ctx = self.ctx_arc();
        match ctx {
            Some(c) => self.clone() * Self::of_i64(&c, n),
            None => {
                let mut acc = Self::zero();
                let (mut k, neg) = if n < 0 { (-n, true) } else { (n, false) };
                while k > 0 {
                    acc = acc + self.clone();
                    k -= 1;
                }
                if neg {
                    -acc
                } else {
                    acc
                }
            }
        }
    }

    fn mul_q(&self, q: &BigRational) -> Self {
        match self.ctx_arc() {
            Some(c) => self.clone() * Self::of_q(&c, q),
            None => panic!("mul_q on context-free scalar"),
        }
    }

    fn div_i64(&self, n: i64) -> Self {
        assert!(n != 0);
        let c = self.ctx_arc().expect("div_i64 needs context");
        self.clone() / Self::of_i64(&c, n)
    }
}

impl Scalar for Exact {
    type Ctx = ExactCtx;

    fn ctx_arc(&self) -> Option<Arc<ExactCtx>> {
        self.ctx.clone()
    }
    fn of_i64(ctx: &Arc<ExactCtx>, n: i64) -> Self {
        Exact::from_i64_ctx(ctx, n)
    }
    fn of_q(ctx: &Arc<ExactCtx>, q: &BigRational) -> Self {
        Exact::from_q_ctx(ctx, q.clone())
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn try_sqrt(&self) -> Result<Self> {
        self.sqrt()
    }
    fn is_negligible(&self) -> bool {
        self.is_zero_val()
    }
    fn render(&self) -> String {
        Exact::render(self)
    }
    fn render_exact(&self) -> String {
        Exact::render(self)
    }
    fn parse_str(ctx: &Arc<ExactCtx>, s: &str) -> Result<Self> {
        Exact::parse(ctx, s)
    }
    fn parse_exact(ctx: &Arc<ExactCtx>, s: &str) -> Result<Self> {
        Exact::parse(ctx, s)
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero_val() {
            0.0
        } else {
            1.0
        }
    }
    fn is_exact_backend() -> bool {
        true
    }
}

impl Scalar for BigC {
    type Ctx = BigCtx;

    fn ctx_arc(&self) -> Option<Arc<BigCtx>> {
        self.ctx.clone()
    }
    fn of_i64(ctx: &Arc<BigCtx>, n: i64) -> Self {
        BigC::from_i64_ctx(ctx, n)
    }
    fn of_q(ctx: &Arc<BigCtx>, q: &BigRational) -> Self {
        BigC::from_q_ctx(ctx, q)
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn try_sqrt(&self) -> Result<Self> {
        Ok(self.sqrt())
    }
    fn is_negligible(&self) -> bool {
        match &self.ctx {
            None => self.is_zero_val(),
            Some(c) => {
                let a = self.abs();
                !a.cmp(&c.tol).map(|v| v > 0).unwrap_or(true)
            }
        }
    }
    fn render(&self) -> String {
        format!("{}", self)
    }
    fn render_exact(&self) -> String {
        BigC::render_exact(self)
    }
    fn parse_str(ctx: &Arc<BigCtx>, s: &str) -> Result<Self> {
        BigC::parse_exact(ctx, s)
    }
    fn parse_exact(ctx: &Arc<BigCtx>, s: &str) -> Result<Self> {
        BigC::parse_exact(ctx, s)
    }
    fn magnitude(&self) -> f64 {
        let (re, im) = self.approx_f64();
        re.hypot(im)
    }
    fn is_exact_backend() -> bool {
        false
    }
}

// ---------------------------------------------------------------------------
// FieldSpec: the JSON-facing description of the coefficient field.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Exact,
    Bigfloat,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GeneratorSpec {
    pub name: String,
    /// Monic minimal polynomial, coefficients constant..leading; the leading
    /// coefficient must render to 1.
    pub minpoly: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FieldSpec {
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub algebraic_generator: Option<GeneratorSpec>,
    pub backend: BackendKind,
    #[serde(default)]
    pub precision_bits: Option<usize>,
    /// log10 of the zero tolerance (e.g. -60 for 1e-60).
    #[serde(default)]
    pub zero_tolerance_log10: Option<i64>,
}

impl FieldSpec {
    pub fn exact_q() -> FieldSpec {
        FieldSpec {
            parameters: vec![],
            algebraic_generator: None,
            backend: BackendKind::Exact,
            precision_bits: None,
            zero_tolerance_log10: None,
        }
    }

    pub fn bigfloat(prec: usize, tol_log10: i64) -> FieldSpec {
        FieldSpec {
            parameters: vec![],
            algebraic_generator: None,
            backend: BackendKind::Bigfloat,
            precision_bits: Some(prec),
            zero_tolerance_log10: Some(tol_log10),
        }
    }
}

/// Build the exact field context from a spec.
pub fn make_exact_ctx(spec: &FieldSpec) -> Result<Arc<ExactCtx>> {
    if spec.backend != BackendKind::Exact {
        return Err(Error::BadFieldSpec("not an exact field spec".into()));
    }
    let params = spec.parameters.clone();
    match &spec.algebraic_generator {
        None => Ok(Arc::new(ExactCtx {
            params,
            gen_name: None,
            minpoly: vec![],
        })),
        Some(g) => {
            if g.minpoly.len() < 2 {
                return Err(Error::BadFieldSpec(
                    "minimal polynomial must have degree >= 1".into(),
                ));
            }
            if params.iter().any(|p| *p == g.name) {
                return Err(Error::BadFieldSpec(
                    "generator name collides with a parameter".into(),
                ));
            }
            // parse coefficients over the parameter field only
            let pctx = Arc::new(ExactCtx {
                params: params.clone(),
                gen_name: None,
                minpoly: vec![],
            });
            let mut coeffs: Vec<RatFrac> = vec![];
            for s in &g.minpoly {
                let e = Exact::parse(&pctx, s)?;
                coeffs.push(e.coeffs[0].clone());
            }
            let lead = coeffs.pop().unwrap();
            let one = RatFrac::from_q(params.len(), BigRational::one());
            if lead != one {
                return Err(Error::BadFieldSpec(
                    "minimal polynomial must be monic".into(),
                ));
            }
            Ok(Arc::new(ExactCtx {
                params,
                gen_name: Some(g.name.clone()),
                minpoly: coeffs,
            }))
        }
    }
}

/// Build the bigfloat context from a spec.
pub fn make_big_ctx(spec: &FieldSpec) -> Result<Arc<BigCtx>> {
    if spec.backend != BackendKind::Bigfloat {
        return Err(Error::BadFieldSpec("not a bigfloat field spec".into()));
    }
    let prec = spec.precision_bits.unwrap_or(256);
    if prec < 64 {
        return Err(Error::BadFieldSpec(
            "precision_bits must be at least 64".into(),
        ));
    }
    let tol = spec.zero_tolerance_log10.unwrap_or(-(prec as i64 / 5));
    if tol >= 0 {
        return Err(Error::BadFieldSpec(
            "zero_tolerance must be positive and below 1".into(),
        ));
    }
    Ok(BigCtx::new(prec, tol))
}

/// (2k-1)!! for k >= 0, extended to negative odd arguments by
/// (-2i-1)!! = (-1)^i / (2i-1)!!. The argument is the odd number itself.
pub fn double_factorial_odd(n: i64) -> BigRational {
    assert!(n % 2 != 0 || n == -1 || n >= -1, "odd argument expected");
    if n >= -1 {
        let mut acc = BigRational::one();
        let mut k = n;
        while k >= 1 {
            acc *= BigRational::from_integer(BigInt::from(k));
            k -= 2;
        }
        acc
    } else {
        // n = -2i-1 with i >= 1
        let i = (-n - 1) / 2;
        let denom = double_factorial_odd(2 * i - 1);
        let sign = if i % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        sign / denom
    }
}

/// n! as a rational.
pub fn factorial(n: u64) -> BigRational {
    let mut acc = BigRational::one();
    for k in 2..=n {
        acc *= BigRational::from_integer(BigInt::from(k));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_odd(-1), BigRational::one());
        assert_eq!(
            double_factorial_odd(5),
            BigRational::from_integer(BigInt::from(15))
        );
        // (-3)!! = -1, (-5)!! = 1/3... using (-2i-1)!! = (-1)^i/(2i-1)!!
        assert_eq!(double_factorial_odd(-3), -BigRational::one());
        assert_eq!(
            double_factorial_odd(-5),
            BigRational::new(BigInt::from(1), BigInt::from(3)) * -BigRational::one() * -BigRational::one()
        );
        assert_eq!(
            double_factorial_odd(-5),
            BigRational::new(BigInt::from(1), BigInt::from(3))
        );
        assert_eq!(
            double_factorial_odd(-7),
            BigRational::new(BigInt::from(-1), BigInt::from(15))
        );
    }

    #[test]
    fn field_spec_validation() {
        let mut fs = FieldSpec::bigfloat(32, -10);
        assert!(make_big_ctx(&fs).is_err());
        fs.precision_bits = Some(128);
        assert!(make_big_ctx(&fs).is_ok());

        let bad = FieldSpec {
            parameters: vec!["u".into()],
            algebraic_generator: Some(GeneratorSpec {
                name: "a".into(),
                minpoly: vec!["-u".into(), "0".into(), "2".into()],
            }),
            backend: BackendKind::Exact,
            precision_bits: None,
            zero_tolerance_log10: None,
        };
        assert!(matches!(make_exact_ctx(&bad), Err(Error::BadFieldSpec(_))));
    }
}
