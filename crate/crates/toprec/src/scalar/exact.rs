//! Exact coefficient field: rational functions over Q in declared formal
//! parameters, extended by at most one algebraic generator.
//!
//! An element is a polynomial of degree < d in the generator, with
//! coefficients that are reduced fractions of parameter polynomials. The
//! denominator is kept generator-free (inversion rationalizes via the
//! extended Euclidean algorithm against the minimal polynomial).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::mpoly::{parse_ratexpr, render_q, sqrt_q, MPoly};
use crate::error::{Error, Result};

/// Reduced fraction of parameter polynomials. Canonical form: gcd(num,den)=1
/// and den is monic with respect to the lex-leading term.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFrac {
    pub num: MPoly,
    pub den: MPoly,
}

impl RatFrac {
    pub fn zero(nvars: usize) -> Self {
        RatFrac {
            num: MPoly::zero(nvars),
            den: MPoly::one(nvars),
        }
    }

    pub fn from_poly(p: MPoly) -> Self {
        let n = p.nvars;
        RatFrac {
            num: p,
            den: MPoly::one(n),
        }
    }

    pub fn from_q(nvars: usize, q: BigRational) -> Self {
        RatFrac {
            num: MPoly::constant(nvars, q),
            den: MPoly::one(nvars),
        }
    }

    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return RatFrac::zero(den.nvars);
        }
        let g = MPoly::gcd(&num, &den);
        let mut n = num.divexact(&g).unwrap();
        let mut d = den.divexact(&g).unwrap();
        // normalize: den monic under lex-leading term
        let lead = d
            .terms
            .iter()
            .next_back()
            .map(|(_, c)| c.clone())
            .unwrap();
        if !lead.is_one() {
            let inv = BigRational::one() / lead;
            n = n.mul_q(&inv);
            d = d.mul_q(&inv);
        }
        RatFrac { num: n, den: d }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFrac) -> RatFrac {
        Self::reduce(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &RatFrac) -> RatFrac {
        Self::reduce(
            self.num.mul(&o.den).sub(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> RatFrac {
        RatFrac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFrac) -> RatFrac {
        Self::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &RatFrac) -> Result<RatFrac> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn as_q(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }
}

/// Context of the exact field: parameter names, optional generator with its
/// monic minimal polynomial.
#[derive(Debug)]
pub struct ExactCtx {
    pub params: Vec<String>,
    pub gen_name: Option<String>,
    /// Coefficients c_0..c_{d-1} of the monic minimal polynomial
    /// g^d + c_{d-1} g^{d-1} + ... + c_0, over the parameter field.
    pub minpoly: Vec<RatFrac>,
}

impl ExactCtx {
    pub fn rationals() -> Arc<ExactCtx> {
        Arc::new(ExactCtx {
            params: vec![],
            gen_name: None,
            minpoly: vec![],
        })
    }

    pub fn with_params(params: &[&str]) -> Arc<ExactCtx> {
        Arc::new(ExactCtx {
            params: params.iter().map(|s| s.to_string()).collect(),
            gen_name: None,
            minpoly: vec![],
        })
    }

    /// Extension degree d (1 when no generator).
    pub fn ext_deg(&self) -> usize {
        if self.gen_name.is_some() {
            self.minpoly.len().max(1)
        } else {
            1
        }
    }

    pub fn nparams(&self) -> usize {
        self.params.len()
    }

    /// Names visible to the expression parser: parameters then generator.
    pub fn symbol_names(&self) -> Vec<String> {
        let mut v = self.params.clone();
        if let Some(g) = &self.gen_name {
            v.push(g.clone());
        }
        v
    }

    fn compatible(&self, other: &ExactCtx) -> bool {
        self.params == other.params
            && self.gen_name == other.gen_name
            && self.minpoly == other.minpoly
    }
}

/// Element of the exact field.
#[derive(Clone, Debug)]
pub struct Exact {
    pub ctx: Option<Arc<ExactCtx>>,
    /// Generator-power coefficients, length = ext_deg (1 for ctx-free constants).
    pub coeffs: Vec<RatFrac>,
}

impl Exact {
    pub fn zero_ctx(ctx: &Arc<ExactCtx>) -> Exact {
        Exact {
            ctx: Some(ctx.clone()),
            coeffs: vec![RatFrac::zero(ctx.nparams()); ctx.ext_deg()],
        }
    }

    pub fn from_q_ctx(ctx: &Arc<ExactCtx>, q: BigRational) -> Exact {
        let mut e = Self::zero_ctx(ctx);
        e.coeffs[0] = RatFrac::from_q(ctx.nparams(), q);
        e
    }

    pub fn from_i64_ctx(ctx: &Arc<ExactCtx>, n: i64) -> Exact {
        Self::from_q_ctx(ctx, BigRational::from_integer(BigInt::from(n)))
    }

    /// The i-th declared parameter as a field element.
    pub fn param(ctx: &Arc<ExactCtx>, i: usize) -> Exact {
        let mut e = Self::zero_ctx(ctx);
        e.coeffs[0] = RatFrac::from_poly(MPoly::var(ctx.nparams(), i));
        e
    }

    /// The algebraic generator as a field element.
    pub fn generator(ctx: &Arc<ExactCtx>) -> Result<Exact> {
        if ctx.gen_name.is_none() {
            return Err(Error::BadFieldSpec("field has no generator".into()));
        }
        let mut e = Self::zero_ctx(ctx);
        if ctx.ext_deg() == 1 {
            // degree-1 generator: g = -c_0
            e.coeffs[0] = ctx.minpoly[0].neg();
        } else {
            e.coeffs[1] = RatFrac::from_q(ctx.nparams(), BigRational::one());
        }
        Ok(e)
    }

    fn ctxless_q(q: BigRational) -> Exact {
        Exact {
            ctx: None,
            coeffs: vec![RatFrac::from_q(0, q)],
        }
    }

    /// Promote a ctx-free constant into `ctx`; no-op if already there.
    fn promote(&self, ctx: &Arc<ExactCtx>) -> Exact {
        match &self.ctx {
            Some(c) => {
                debug_assert!(c.compatible(ctx));
                self.clone()
            }
            None => {
                let q = self.coeffs[0].as_q().expect("ctx-free scalar is rational");
                Exact::from_q_ctx(ctx, q)
            }
        }
    }

    fn unify(a: &Exact, b: &Exact) -> (Exact, Exact) {
        match (&a.ctx, &b.ctx) {
            (Some(ca), Some(cb)) => {
                assert!(
                    ca.compatible(cb),
                    "scalar context mismatch: {:?} vs {:?}",
                    ca.params,
                    cb.params
                );
                (a.clone(), b.clone())
            }
            (Some(ca), None) => (a.clone(), b.promote(ca)),
            (None, Some(cb)) => (a.promote(cb), b.clone()),
            (None, None) => (a.clone(), b.clone()),
        }
    }

    pub fn is_zero_val(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn as_q(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        self.coeffs[0].as_q()
    }

    fn add_raw(a: &Exact, b: &Exact) -> Exact {
        let (a, b) = Self::unify(a, b);
        Exact {
            ctx: a.ctx.clone(),
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x.add(y))
                .collect(),
        }
    }

    fn sub_raw(a: &Exact, b: &Exact) -> Exact {
        let (a, b) = Self::unify(a, b);
        Exact {
            ctx: a.ctx.clone(),
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x.sub(y))
                .collect(),
        }
    }

    fn neg_raw(&self) -> Exact {
        Exact {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    fn mul_raw(a: &Exact, b: &Exact) -> Exact {
        let (a, b) = Self::unify(a, b);
        let d = a.coeffs.len();
        let nv = a.coeffs[0].num.nvars;
        let mut conv = vec![RatFrac::zero(nv); 2 * d - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                conv[i + j] = conv[i + j].add(&x.mul(y));
            }
        }
        // reduce generator powers >= d via the monic minimal polynomial
        if d > 1 {
            let ctx = a.ctx.as_ref().unwrap();
            for k in (d..conv.len()).rev() {
                let c = conv[k].clone();
                if c.is_zero() {
                    continue;
                }
                conv[k] = RatFrac::zero(nv);
                for (j, mj) in ctx.minpoly.iter().enumerate() {
                    let t = c.mul(mj);
                    conv[k - d + j] = conv[k - d + j].sub(&t);
                }
            }
        }
        conv.truncate(d);
        Exact {
            ctx: a.ctx.clone(),
            coeffs: conv,
        }
    }

    /// Multiplicative inverse. Inverting a zero-divisor of a reducible
    /// "minimal" polynomial reports the discovered factor.
    pub fn inv(&self) -> Result<Exact> {
        if self.is_zero_val() {
            return Err(Error::DivisionByZero);
        }
        let d = self.coeffs.len();
        if d == 1 {
            let r = RatFrac::from_q(self.coeffs[0].num.nvars, BigRational::one())
                .div(&self.coeffs[0])?;
            return Ok(Exact {
                ctx: self.ctx.clone(),
                coeffs: vec![r],
            });
        }
        let ctx = self.ctx.as_ref().unwrap();
        let nv = ctx.nparams();
        // extended Euclid in (param field)[g]: gcd(self, minpoly)
        let mut r0: Vec<RatFrac> = {
            let mut m = ctx.minpoly.clone();
            m.push(RatFrac::from_q(nv, BigRational::one()));
            m
        };
        let mut r1: Vec<RatFrac> = self.coeffs.clone();
        trim(&mut r0);
        trim(&mut r1);
        let mut s0: Vec<RatFrac> = vec![];
        let mut s1: Vec<RatFrac> = vec![RatFrac::from_q(nv, BigRational::one())];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1)?;
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r0 = gcd (nonzero), s0 satisfies s0*self ≡ r0 (mod minpoly)
        if r0.len() != 1 {
            let names = ctx.symbol_names();
            let rendered = render_gen_poly(&r0, ctx, &names);
            return Err(Error::ReducibleGenerator(rendered));
        }
        let c = r0[0].clone();
        let mut coeffs = vec![RatFrac::zero(nv); d];
        for (i, s) in s0.iter().enumerate() {
            if i < d {
                coeffs[i] = s.div(&c)?;
            }
        }
        Ok(Exact {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    /// Square root, when expressible in the field. Supports rational
    /// constants and, for quadratic generators g^2 = D with rational or
    /// parameter-free data, elements a + b*g.
    pub fn sqrt(&self) -> Result<Exact> {
        if self.is_zero_val() {
            return Ok(self.clone());
        }
        if let Some(q) = self.as_q() {
            if let Some(r) = sqrt_q(&q) {
                return match &self.ctx {
                    Some(c) => Ok(Exact::from_q_ctx(c, r)),
                    None => Ok(Exact::ctxless_q(r)),
                };
            }
        }
        let ctx = match &self.ctx {
            Some(c) => c.clone(),
            None => return Err(Error::NoSqrt(self.render())),
        };
        if ctx.ext_deg() == 2 && ctx.minpoly[1].is_zero() {
            // g^2 = D with D = -c_0
            let dval = match ctx.minpoly[0].neg().as_q() {
                Some(v) => v,
                None => return Err(Error::NoSqrt(self.render())),
            };
            let a = self.coeffs[0].as_q();
            let b = self.coeffs[1].as_q();
            if let (Some(a), Some(b)) = (a, b) {
                if b.is_zero() {
                    // try (q*g)^2 = q^2 D = a
                    if let Some(qq) = sqrt_q(&(a.clone() / dval.clone())) {
                        let mut e = Exact::zero_ctx(&ctx);
                        e.coeffs[1] = RatFrac::from_q(ctx.nparams(), qq);
                        return Ok(e);
                    }
                } else {
                    // (p + q g)^2 = a + b g: p^2 + q^2 D = a, 2pq = b
                    let disc = a.clone() * a.clone() - dval.clone() * b.clone() * b.clone();
                    if let Some(s) = sqrt_q(&disc) {
                        for sign in [BigRational::one(), -BigRational::one()] {
                            let p2 = (a.clone() + sign.clone() * s.clone())
                                / BigRational::from_integer(BigInt::from(2));
                            if let Some(p) = sqrt_q(&p2) {
                                if !p.is_zero() {
                                    let q = b.clone()
                                        / (BigRational::from_integer(BigInt::from(2)) * p.clone());
                                    let mut e = Exact::zero_ctx(&ctx);
                                    e.coeffs[0] = RatFrac::from_q(ctx.nparams(), p);
                                    e.coeffs[1] = RatFrac::from_q(ctx.nparams(), q);
                                    return Ok(e);
                                }
                            }
                        }
                    }
                }
            }
        }
        Err(Error::NoSqrt(self.render()))
    }

    /// Canonical rendering: a single `num` or `(num)/(den)` expression in
    /// the parameters and generator name.
    pub fn render(&self) -> String {
        let (names, joint_num, joint_den) = self.joint_fraction();
        let n = joint_num.render(&names);
        if joint_den.is_one() {
            n
        } else {
            format!("({})/({})", n, joint_den.render(&names))
        }
    }

    /// Common-denominator form over params+generator variables.
    fn joint_fraction(&self) -> (Vec<String>, MPoly, MPoly) {
        let (names, np) = match &self.ctx {
            Some(c) => (c.symbol_names(), c.nparams()),
            None => (vec![], 0),
        };
        let nv = names.len(); // params + optional generator
        let mut den = MPoly::one(np);
        for c in &self.coeffs {
            if !c.is_zero() {
                let g = MPoly::gcd(&den, &c.den);
                den = den.mul(&c.den.divexact(&g).unwrap());
            }
        }
        let mut num = MPoly::zero(nv);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scale = den.divexact(&c.den).unwrap();
            let p = c.num.mul(&scale);
            // lift p (in params) to params+gen, multiplying by g^j
            for (e, q) in &p.terms {
                let mut e2 = e.clone();
                if nv > np {
                    e2.push(j as u32);
                } else {
                    debug_assert_eq!(j, 0);
                }
                num.terms.insert(e2, q.clone());
            }
        }
        // lift den to the joint variable set
        let mut den_l = MPoly::zero(nv);
        for (e, q) in &den.terms {
            let mut e2 = e.clone();
            if nv > np {
                e2.push(0);
            }
            den_l.terms.insert(e2, q.clone());
        }
        (names, num, den_l)
    }

    /// Parse a canonical (or free-form) rational expression.
    pub fn parse(ctx: &Arc<ExactCtx>, s: &str) -> Result<Exact> {
        let names = ctx.symbol_names();
        let e = parse_ratexpr(s, &names)?;
        let np = ctx.nparams();
        let d = ctx.ext_deg();
        // split numerator and denominator by generator powers
        let split = |p: &MPoly| -> Vec<MPoly> {
            let mut out: Vec<MPoly> = vec![];
            for (expo, c) in &p.terms {
                let (gp, pe) = if names.len() > np {
                    (expo[np] as usize, expo[..np].to_vec())
                } else {
                    (0usize, expo.clone())
                };
                if out.len() <= gp {
                    out.resize(gp + 1, MPoly::zero(np));
                }
                let mut t = MPoly::zero(np);
                t.terms.insert(pe, c.clone());
                out[gp] = out[gp].add(&t);
            }
            if out.is_empty() {
                out.push(MPoly::zero(np));
            }
            out
        };
        let reduce_gen = |mut v: Vec<Exact>| -> Exact {
            // v[j] holds the coefficient (as Exact with only coeffs[0]) of g^j
            let g = Exact::generator(ctx).ok();
            let mut acc = Exact::zero_ctx(ctx);
            while let Some(top) = v.pop() {
                if let Some(gv) = &g {
                    acc = Exact::add_raw(&Exact::mul_raw(&acc, gv), &top);
                } else {
                    acc = Exact::add_raw(&acc, &top);
                }
            }
            acc
        };
        let to_exacts = |polys: Vec<MPoly>| -> Vec<Exact> {
            polys
                .into_iter()
                .map(|p| {
                    let mut x = Exact::zero_ctx(ctx);
                    x.coeffs[0] = RatFrac::from_poly(p);
                    x
                })
                .collect()
        };
        let num = reduce_gen(to_exacts(split(&e.num)));
        let den = reduce_gen(to_exacts(split(&e.den)));
        let _ = d;
        let di = den.inv()?;
        Ok(Exact::mul_raw(&num, &di))
    }
}

fn trim(v: &mut Vec<RatFrac>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn poly_mul(a: &[RatFrac], b: &[RatFrac]) -> Vec<RatFrac> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let nv = a[0].num.nvars;
    let mut out = vec![RatFrac::zero(nv); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    let mut out = out;
    trim(&mut out);
    out
}

fn poly_sub(a: &[RatFrac], b: &[RatFrac]) -> Vec<RatFrac> {
    let nv = a
        .first()
        .or_else(|| b.first())
        .map(|c| c.num.nvars)
        .unwrap_or(0);
    let n = a.len().max(b.len());
    let mut out = vec![RatFrac::zero(nv); n];
    for (i, x) in a.iter().enumerate() {
        out[i] = out[i].add(x);
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = out[i].sub(y);
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[RatFrac], b: &[RatFrac]) -> Result<(Vec<RatFrac>, Vec<RatFrac>)> {
    if b.is_empty() {
        return Err(Error::DivisionByZero);
    }
    let nv = b[0].num.nvars;
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut q = vec![RatFrac::zero(nv); r.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r.last().unwrap().div(lb)?;
        q[dr - db] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            let t = c.mul(bj);
            r[dr - db + j] = r[dr - db + j].sub(&t);
        }
        trim(&mut r);
    }
    trim(&mut q);
    Ok((q, r))
}

fn render_gen_poly(p: &[RatFrac], ctx: &ExactCtx, names: &[String]) -> String {
    let gname = ctx.gen_name.clone().unwrap_or_else(|| "g".into());
    let mut parts = vec![];
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cs = if c.den.is_one() {
            format!("({})", c.num.render(&names[..ctx.nparams()]))
        } else {
            format!(
                "(({})/({}))",
                c.num.render(&names[..ctx.nparams()]),
                c.den.render(&names[..ctx.nparams()])
            )
        };
        match i {
            0 => parts.push(cs),
            1 => parts.push(format!("{}*{}", cs, gname)),
            _ => parts.push(format!("{}*{}^{}", cs, gname, i)),
        }
    }
    parts.join(" + ")
}

impl PartialEq for Exact {
    fn eq(&self, other: &Self) -> bool {
        Exact::sub_raw(self, other).is_zero_val()
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_q() {
            write!(f, "{}", render_q(&q))
        } else {
            write!(f, "{}", self.render())
        }
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, o: Exact) -> Exact {
        Exact::add_raw(&self, &o)
    }
}
impl Sub for Exact {
    type Output = Exact;
    fn sub(self, o: Exact) -> Exact {
        Exact::sub_raw(&self, &o)
    }
}
impl Mul for Exact {
    type Output = Exact;
    fn mul(self, o: Exact) -> Exact {
        Exact::mul_raw(&self, &o)
    }
}
impl Div for Exact {
    type Output = Exact;
    fn div(self, o: Exact) -> Exact {
        Exact::mul_raw(&self, &o.inv().expect("division by zero or zero-divisor"))
    }
}
impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        self.neg_raw()
    }
}

impl Zero for Exact {
    fn zero() -> Self {
        Exact::ctxless_q(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.is_zero_val()
    }
}

impl One for Exact {
    fn one() -> Self {
        Exact::ctxless_q(BigRational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_field_arith() {
        let ctx = ExactCtx::rationals();
        let a = Exact::from_q_ctx(&ctx, q(2, 3));
        let b = Exact::from_q_ctx(&ctx, q(3, 4));
        assert_eq!(a.clone() * b, Exact::from_q_ctx(&ctx, q(1, 2)));
        assert_eq!(a.clone().inv().unwrap(), Exact::from_q_ctx(&ctx, q(3, 2)));
    }

    #[test]
    fn generator_inverse_alpha2_uv() {
        // params {u,v}, generator a with a^2 = u v  => 1/a = a/(uv)
        let ctx = Arc::new(ExactCtx {
            params: vec!["u".into(), "v".into()],
            gen_name: Some("a".into()),
            minpoly: vec![
                RatFrac::from_poly(MPoly::var(2, 0).mul(&MPoly::var(2, 1)).neg()),
                RatFrac::zero(2),
            ],
        });
        let a = Exact::generator(&ctx).unwrap();
        let ainv = a.clone().inv().unwrap();
        let expect = Exact::parse(&ctx, "a/(u*v)").unwrap();
        assert_eq!(ainv, expect);
        assert_eq!(a.clone() * ainv, Exact::one());
        // a^3 = uv * a
        let a3 = a.clone() * a.clone() * a.clone();
        assert_eq!(a3, Exact::parse(&ctx, "u*v*a").unwrap());
    }

    #[test]
    fn gaussian_norm_identity() {
        // generator i with i^2 + 1 = 0: (1+i)(1-i) = 2
        let ctx = Arc::new(ExactCtx {
            params: vec![],
            gen_name: Some("i".into()),
            minpoly: vec![RatFrac::from_q(0, q(1, 1)), RatFrac::zero(0)],
        });
        let i = Exact::generator(&ctx).unwrap();
        let one = Exact::from_i64_ctx(&ctx, 1);
        let p = (one.clone() + i.clone()) * (one - i);
        assert_eq!(p, Exact::from_i64_ctx(&ctx, 2));
        // sqrt(-1) = ±i
        let m1 = Exact::from_i64_ctx(&ctx, -1);
        let s = m1.sqrt().unwrap();
        assert!(s == Exact::generator(&ctx).unwrap() || s == -Exact::generator(&ctx).unwrap());
    }

    #[test]
    fn polynomial_cancellation() {
        let ctx = ExactCtx::with_params(&["u", "v"]);
        let e = Exact::parse(&ctx, "(u^2 - v^2)/(u - v)").unwrap();
        assert_eq!(e, Exact::parse(&ctx, "u + v").unwrap());
        // 0/(1+u) is canonical zero
        let z = Exact::parse(&ctx, "0/(1 + u)").unwrap();
        assert!(z.is_zero_val());
        assert_eq!(z.render(), "0");
    }

    #[test]
    fn reducible_generator_detected() {
        // "minimal" polynomial a^2 - 4 over Q is reducible; inverting a - 2 fails
        let ctx = Arc::new(ExactCtx {
            params: vec![],
            gen_name: Some("a".into()),
            minpoly: vec![RatFrac::from_q(0, q(-4, 1)), RatFrac::zero(0)],
        });
        let a = Exact::generator(&ctx).unwrap();
        let x = a - Exact::from_i64_ctx(&ctx, 2);
        match x.inv() {
            Err(Error::ReducibleGenerator(_)) => {}
            other => panic!("expected ReducibleGenerator, got {:?}", other),
        }
    }

    #[test]
    fn parse_render_roundtrip() {
        let ctx = Arc::new(ExactCtx {
            params: vec!["u".into(), "v".into()],
            gen_name: Some("a".into()),
            minpoly: vec![
                RatFrac::from_poly(MPoly::var(2, 0).mul(&MPoly::var(2, 1)).neg()),
                RatFrac::zero(2),
            ],
        });
        for s in [
            "(3*u + 2*a)/(u^2 - v)",
            "1/2",
            "-7",
            "a",
            "u*v - 1/3",
            "(u + v + a)/(2*v)",
        ] {
            let e = Exact::parse(&ctx, s).unwrap();
            let r = e.render();
            let back = Exact::parse(&ctx, &r).unwrap();
            assert_eq!(e, back, "roundtrip failed for {s} -> {r}");
        }
    }
}
