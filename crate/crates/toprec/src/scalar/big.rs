//! Arbitrary-precision complex scalar backed by astro-float.

use astro_float::{BigFloat, Sign, Word, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;
const FALLBACK_PREC: usize = 128;

#[derive(Debug)]
pub struct BigCtx {
    pub prec: usize,
    /// absolute trim tolerance and relative comparison tolerance
    pub tol: BigFloat,
}

impl BigCtx {
    pub fn new(prec: usize, tol_log10: i64) -> Arc<BigCtx> {
        assert!(prec >= 64, "precision_bits must be >= 64");
        let ten = BigFloat::from_i8(10, prec);
        let tol = ten.powi(
            tol_log10.unsigned_abs() as usize,
            prec,
            RM,
        );
        let tol = if tol_log10 < 0 {
            BigFloat::from_i8(1, prec).div(&tol, prec, RM)
        } else {
            tol
        };
        Arc::new(BigCtx { prec, tol })
    }
}

/// Complex number at a declared working precision.
#[derive(Clone, Debug)]
pub struct BigC {
    pub ctx: Option<Arc<BigCtx>>,
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigC {
    fn prec(&self) -> usize {
        self.ctx.as_ref().map(|c| c.prec).unwrap_or(FALLBACK_PREC)
    }

    fn pick_ctx(a: &BigC, b: &BigC) -> Option<Arc<BigCtx>> {
        a.ctx.clone().or_else(|| b.ctx.clone())
    }

    pub fn zero_ctx(ctx: &Arc<BigCtx>) -> BigC {
        BigC {
            ctx: Some(ctx.clone()),
            re: BigFloat::from_i8(0, ctx.prec),
            im: BigFloat::from_i8(0, ctx.prec),
        }
    }

    pub fn from_i64_ctx(ctx: &Arc<BigCtx>, n: i64) -> BigC {
        BigC {
            ctx: Some(ctx.clone()),
            re: BigFloat::from_i64(n, ctx.prec),
            im: BigFloat::from_i8(0, ctx.prec),
        }
    }

    pub fn from_q_ctx(ctx: &Arc<BigCtx>, q: &BigRational) -> BigC {
        BigC {
            ctx: Some(ctx.clone()),
            re: bigfloat_from_q(q, ctx.prec),
            im: BigFloat::from_i8(0, ctx.prec),
        }
    }

    pub fn from_re_im(ctx: &Arc<BigCtx>, re: BigFloat, im: BigFloat) -> BigC {
        BigC {
            ctx: Some(ctx.clone()),
            re,
            im,
        }
    }

    pub fn is_zero_val(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// |z|^2 at working precision.
    fn norm2(&self) -> BigFloat {
        let p = self.prec();
        self.re
            .mul(&self.re, p, RM)
            .add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        let p = self.prec();
        self.norm2().sqrt(p, RM)
    }

    pub fn inv(&self) -> Result<BigC> {
        if self.is_zero_val() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec();
        let n2 = self.norm2();
        Ok(BigC {
            ctx: self.ctx.clone(),
            re: self.re.div(&n2, p, RM),
            im: self.im.clone().neg().div(&n2, p, RM),
        })
    }

    /// Principal complex square root.
    pub fn sqrt(&self) -> BigC {
        let p = self.prec();
        if self.is_zero_val() {
            return self.clone();
        }
        let r = self.abs();
        let two = BigFloat::from_i8(2, p);
        // w = sqrt((r + |re|)/2); sign handling for the principal branch
        let absre = self.re.abs();
        let w = r.add(&absre, p, RM).div(&two, p, RM).sqrt(p, RM);
        if self.re.sign() != Some(Sign::Neg) {
            // re >= 0: sqrt = w + i*im/(2w)
            let im = self.im.div(&w.mul(&two, p, RM), p, RM);
            BigC {
                ctx: self.ctx.clone(),
                re: w,
                im,
            }
        } else {
            let mag = self.im.abs().div(&w.mul(&two, p, RM), p, RM);
            if self.im.sign() == Some(Sign::Neg) {
                BigC {
                    ctx: self.ctx.clone(),
                    re: mag,
                    im: w.neg(),
                }
            } else {
                BigC {
                    ctx: self.ctx.clone(),
                    re: mag,
                    im: w,
                }
            }
        }
    }

    pub fn approx_f64(&self) -> (f64, f64) {
        (
            bigfloat_to_f64(&self.re),
            bigfloat_to_f64(&self.im),
        )
    }

    /// Exact textual form (hex mantissa words) that round-trips bit-for-bit.
    pub fn render_exact(&self) -> String {
        format!("{};{}", raw_str(&self.re), raw_str(&self.im))
    }

    pub fn parse_exact(ctx: &Arc<BigCtx>, s: &str) -> Result<BigC> {
        let mut it = s.split(';');
        let re = raw_parse(it.next().ok_or_else(|| Error::Parse("missing re".into()))?)?;
        let im = raw_parse(it.next().ok_or_else(|| Error::Parse("missing im".into()))?)?;
        Ok(BigC {
            ctx: Some(ctx.clone()),
            re,
            im,
        })
    }
}

pub fn bigfloat_from_q(q: &BigRational, prec: usize) -> BigFloat {
    let n = bigfloat_from_bigint(q.numer(), prec + 64);
    let d = bigfloat_from_bigint(q.denom(), prec + 64);
    n.div(&d, prec, RM)
}

fn bigfloat_from_bigint(n: &BigInt, prec: usize) -> BigFloat {
    if let Some(v) = n.to_i64() {
        return BigFloat::from_i64(v, prec);
    }
    // assemble from 32-bit limbs
    let neg = n.is_negative();
    let mut mag = n.abs().to_biguint().unwrap();
    let base = num_bigint::BigUint::from(1u64 << 32);
    let mut acc = BigFloat::from_i8(0, prec);
    let mut scale = BigFloat::from_i8(1, prec);
    let b32 = BigFloat::from_u64(1u64 << 32, prec);
    while !mag.is_zero() {
        let limb = (&mag % &base).to_u64().unwrap();
        acc = acc.add(&BigFloat::from_u64(limb, prec).mul(&scale, prec, RM), prec, RM);
        scale = scale.mul(&b32, prec, RM);
        mag /= &base;
    }
    if neg {
        acc.neg()
    } else {
        acc
    }
}

pub fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    // via formatted exponent/mantissa; adequate for reporting
    if x.is_zero() {
        return 0.0;
    }
    let e = x.exponent().unwrap_or(0);
    let m = x.mantissa_max_bit_len().unwrap_or(64);
    // take top 64 bits of mantissa
    if let Some((words, _n, s, _e, _)) = x.as_raw_parts() {
        let top = words.last().copied().unwrap_or(0);
        let frac = top as f64 / (u64::MAX as f64 + 1.0);
        let v = frac * 2f64.powi(e);
        let _ = m;
        if s == Sign::Neg {
            -v
        } else {
            v
        }
    } else {
        f64::NAN
    }
}

fn raw_str(x: &BigFloat) -> String {
    match x.as_raw_parts() {
        None => "nan".into(),
        Some((words, n, s, e, _inexact)) => {
            let ws: Vec<String> = words.iter().map(|w| format!("{:016x}", w)).collect();
            format!(
                "{}:{}:{}:{}",
                if s == Sign::Neg { "-" } else { "+" },
                e,
                n,
                ws.join(",")
            )
        }
    }
}

fn raw_parse(s: &str) -> Result<BigFloat> {
    if s == "nan" {
        return Err(Error::Parse("nan in cache".into()));
    }
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 {
        return Err(Error::Parse(format!("bad raw float `{}`", s)));
    }
    let sign = if parts[0] == "-" { Sign::Neg } else { Sign::Pos };
    let e: i32 = parts[1]
        .parse()
        .map_err(|_| Error::Parse("bad exponent".into()))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| Error::Parse("bad mantissa len".into()))?;
    let words: Vec<Word> = if parts[3].is_empty() {
        vec![]
    } else {
        parts[3]
            .split(',')
            .map(|w| Word::from_str_radix(w, 16).map_err(|_| Error::Parse("bad word".into())))
            .collect::<Result<_>>()?
    };
    Ok(BigFloat::from_raw_parts(&words, n, sign, e, false))
}

impl PartialEq for BigC {
    fn eq(&self, other: &Self) -> bool {
        // |a-b| <= tol * max(1, |a|, |b|)
        let p = self.prec();
        let d = self.clone() - other.clone();
        let da = d.abs();
        let tol = match self.ctx.as_ref().or(other.ctx.as_ref()) {
            Some(c) => c.tol.clone(),
            None => {
                let t = BigFloat::from_i8(2, p);
                BigFloat::from_i8(1, p).div(&t.powi(FALLBACK_PREC - 16, p, RM), p, RM)
            }
        };
        let mut m = BigFloat::from_i8(1, p);
        for cand in [self.abs(), other.abs()] {
            if cand.cmp(&m).map(|v| v > 0).unwrap_or(false) {
                m = cand;
            }
        }
        !da.cmp(&tol.mul(&m, p, RM)).map(|v| v > 0).unwrap_or(true)
    }
}

impl fmt::Display for BigC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.approx_f64();
        if self.im.is_zero() {
            write!(f, "{:.16e}", re)
        } else if im >= 0.0 {
            write!(f, "{:.16e}+{:.16e}i", re, im)
        } else {
            write!(f, "{:.16e}{:.16e}i", re, im)
        }
    }
}

impl Add for BigC {
    type Output = BigC;
    fn add(self, o: BigC) -> BigC {
        let ctx = Self::pick_ctx(&self, &o);
        let p = ctx.as_ref().map(|c| c.prec).unwrap_or(FALLBACK_PREC);
        BigC {
            ctx,
            re: self.re.add(&o.re, p, RM),
            im: self.im.add(&o.im, p, RM),
        }
    }
}
impl Sub for BigC {
    type Output = BigC;
    fn sub(self, o: BigC) -> BigC {
        let ctx = Self::pick_ctx(&self, &o);
        let p = ctx.as_ref().map(|c| c.prec).unwrap_or(FALLBACK_PREC);
        BigC {
            ctx,
            re: self.re.sub(&o.re, p, RM),
            im: self.im.sub(&o.im, p, RM),
        }
    }
}
impl Mul for BigC {
    type Output = BigC;
    fn mul(self, o: BigC) -> BigC {
        let ctx = Self::pick_ctx(&self, &o);
        let p = ctx.as_ref().map(|c| c.prec).unwrap_or(FALLBACK_PREC);
        let re = self
            .re
            .mul(&o.re, p, RM)
            .sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self
            .re
            .mul(&o.im, p, RM)
            .add(&self.im.mul(&o.re, p, RM), p, RM);
        BigC { ctx, re, im }
    }
}
impl Div for BigC {
    type Output = BigC;
    fn div(self, o: BigC) -> BigC {
        let inv = o.inv().expect("division by zero");
        self * inv
    }
}
impl Neg for BigC {
    type Output = BigC;
    fn neg(self) -> BigC {
        BigC {
            ctx: self.ctx.clone(),
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
}

impl Zero for BigC {
    fn zero() -> Self {
        BigC {
            ctx: None,
            re: BigFloat::from_i8(0, FALLBACK_PREC),
            im: BigFloat::from_i8(0, FALLBACK_PREC),
        }
    }
    fn is_zero(&self) -> bool {
        self.is_zero_val()
    }
}

impl One for BigC {
    fn one() -> Self {
        BigC {
            ctx: None,
            re: BigFloat::from_i8(1, FALLBACK_PREC),
            im: BigFloat::from_i8(0, FALLBACK_PREC),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_basics() {
        let ctx = BigCtx::new(256, -60);
        let i = BigC::from_re_im(&ctx, BigFloat::from_i8(0, 256), BigFloat::from_i8(1, 256));
        let m1 = BigC::from_i64_ctx(&ctx, -1);
        assert_eq!(i.clone() * i.clone(), m1.clone());
        let s = m1.sqrt();
        assert_eq!(s.clone() * s, m1);
        let z = BigC::from_i64_ctx(&ctx, 5);
        assert_eq!(z.clone() * z.clone().inv().unwrap(), BigC::from_i64_ctx(&ctx, 1));
    }

    #[test]
    fn exact_roundtrip() {
        let ctx = BigCtx::new(192, -50);
        let z = BigC::from_i64_ctx(&ctx, 3)
            .sqrt()
            .sub_helper();
        let s = z.render_exact();
        let back = BigC::parse_exact(&ctx, &s).unwrap();
        assert!(z.re.cmp(&back.re) == Some(0));
    }

    impl BigC {
        fn sub_helper(self) -> BigC {
            // small arithmetic chain to produce an "interesting" value
            let one = BigC::from_i64_ctx(&self.ctx.clone().unwrap(), 1);
            self - one
        }
    }
}
