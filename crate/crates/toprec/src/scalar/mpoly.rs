//! Sparse multivariate polynomials over Q with exact gcd.
//!
//! Variables are identified by index; names live in the field context and are
//! only needed for parsing and rendering. Terms are kept in a `BTreeMap` keyed
//! by exponent vectors, so iteration order (and hence rendering) is canonical.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub type Expo = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    pub nvars: usize,
    /// exponent vector (length nvars) -> nonzero coefficient
    pub terms: BTreeMap<Expo, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, q: BigRational) -> Self {
        let mut p = MPoly::zero(nvars);
        if !q.is_zero() {
            p.terms.insert(vec![0; nvars], q);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(e, BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// Some(c) iff the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    fn insert_add(&mut self, e: Expo, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, o.nvars);
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.insert_add(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, o.nvars);
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.insert_add(e.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        let mut r = self.clone();
        for (_, c) in r.terms.iter_mut() {
            *c = -c.clone();
        }
        r
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, o.nvars);
        let mut r = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Expo = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                r.insert_add(e, ca * cb);
            }
        }
        r
    }

    pub fn mul_q(&self, q: &BigRational) -> MPoly {
        if q.is_zero() {
            return MPoly::zero(self.nvars);
        }
        let mut r = self.clone();
        for (_, c) in r.terms.iter_mut() {
            *c *= q;
        }
        r
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut r = MPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Leading term in lex order (largest exponent vector).
    fn lead(&self) -> Option<(&Expo, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Exact division; None when `d` does not divide `self`.
    pub fn divexact(&self, d: &MPoly) -> Option<MPoly> {
        debug_assert_eq!(self.nvars, d.nvars);
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.mul_q(&(BigRational::one() / c)));
        }
        let (dl_e, dl_c) = d.lead().unwrap();
        let dl_e = dl_e.clone();
        let dl_c = dl_c.clone();
        let mut rem = self.clone();
        let mut quo = MPoly::zero(self.nvars);
        while let Some((re, rc)) = rem.lead() {
            let mut qe = vec![0u32; self.nvars];
            for i in 0..self.nvars {
                if re[i] < dl_e[i] {
                    return None;
                }
                qe[i] = re[i] - dl_e[i];
            }
            let qc = rc / &dl_c;
            let mut t = MPoly::zero(self.nvars);
            t.terms.insert(qe, qc);
            rem = rem.sub(&t.mul(d));
            quo = quo.add(&t);
        }
        Some(quo)
    }

    /// View as a univariate polynomial in `var`: coefficients (with the
    /// `var`-exponent zeroed) indexed by the `var`-degree, low to high.
    fn to_univar(&self, var: usize) -> Vec<MPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            out[k].insert_add(e2, c.clone());
        }
        out
    }

    fn from_univar(nvars: usize, var: usize, coeffs: &[MPoly]) -> MPoly {
        let mut r = MPoly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, q) in &c.terms {
                let mut e2 = e.clone();
                e2[var] += k as u32;
                r.insert_add(e2, q.clone());
            }
        }
        r
    }

    /// Highest variable index occurring with positive degree in `a` or `b`.
    fn main_var(a: &MPoly, b: &MPoly) -> Option<usize> {
        for v in (0..a.nvars).rev() {
            if a.degree_in(v) > 0 || b.degree_in(v) > 0 {
                return Some(v);
            }
        }
        None
    }

    /// gcd of the univariate coefficient list (recursive content).
    fn content_of(coeffs: &[MPoly]) -> MPoly {
        let nvars = coeffs.first().map(|c| c.nvars).unwrap_or(0);
        let mut g = MPoly::zero(nvars);
        for c in coeffs {
            g = MPoly::gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Pseudo-remainder of a by b as univariate lists in one variable.
    fn pseudo_rem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
        let nvars = b.last().unwrap().nvars;
        let db = b.len() - 1;
        let lb = b.last().unwrap().clone();
        let mut r: Vec<MPoly> = a.to_vec();
        while r.len() >= b.len() && !r.is_empty() {
            if r.last().unwrap().is_zero() {
                r.pop();
                continue;
            }
            let dr = r.len() - 1;
            let lr = r.last().unwrap().clone();
            // r <- lb*r - lr * x^(dr-db) * b
            for c in r.iter_mut() {
                *c = c.mul(&lb);
            }
            let shift = dr - db;
            for (j, bc) in b.iter().enumerate() {
                let t = lr.mul(bc);
                r[shift + j] = r[shift + j].sub(&t);
            }
            while r.last().map(|c| c.is_zero()).unwrap_or(false) {
                r.pop();
            }
            let _ = nvars;
        }
        r
    }

    /// Multivariate gcd (primitive PRS, recursing on variables), normalized
    /// so the lex-leading coefficient is 1.
    pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        let var = match Self::main_var(a, b) {
            None => return MPoly::one(a.nvars),
            Some(v) => v,
        };
        let ua = a.to_univar(var);
        let ub = b.to_univar(var);
        let ca = Self::content_of(&ua);
        let cb = Self::content_of(&ub);
        let cg = MPoly::gcd(&ca, &cb);
        let pa: Vec<MPoly> = ua.iter().map(|c| c.divexact(&ca).unwrap()).collect();
        let pb: Vec<MPoly> = ub.iter().map(|c| c.divexact(&cb).unwrap()).collect();

        let (mut f, mut g) = if pa.len() >= pb.len() {
            (pa, pb)
        } else {
            (pb, pa)
        };
        loop {
            if g.iter().all(|c| c.is_zero()) || g.is_empty() {
                let cf = Self::content_of(&f);
                let prim: Vec<MPoly> = f.iter().map(|c| c.divexact(&cf).unwrap()).collect();
                let res = MPoly::from_univar(a.nvars, var, &prim).mul(&cg);
                return res.monic();
            }
            if g.len() == 1 {
                // nonzero constant in the main variable: gcd of primitive parts is content-level
                return cg.monic();
            }
            let r = Self::pseudo_rem(&f, &g);
            let cr = Self::content_of(&r);
            let rp: Vec<MPoly> = if r.is_empty() {
                vec![]
            } else {
                r.iter().map(|c| c.divexact(&cr).unwrap()).collect()
            };
            f = g;
            g = rp;
        }
    }

    /// Scale so the lex-leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> MPoly {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = BigRational::one() / c.clone();
                self.mul_q(&inv)
            }
        }
    }

    /// Substitute `var -> value` where value is a constant rational.
    pub fn eval_var(&self, var: usize, value: &BigRational) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var];
            let mut e2 = e.clone();
            e2[var] = 0;
            let mut q = c.clone();
            for _ in 0..k {
                q *= value;
            }
            r.insert_add(e2, q);
        }
        r
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // lex-descending order for a conventional look
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut parts: Vec<String> = Vec::new();
            let has_vars = e.iter().any(|&x| x > 0);
            if !mag.is_one() || !has_vars {
                parts.push(render_q(&mag));
            }
            for (v, &k) in e.iter().enumerate() {
                if k == 1 {
                    parts.push(names[v].clone());
                } else if k > 1 {
                    parts.push(format!("{}^{}", names[v], k));
                }
            }
            out.push_str(&parts.join("*"));
        }
        out
    }
}

pub fn render_q(q: &BigRational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact square root of a rational, if it exists.
pub fn sqrt_q(q: &BigRational) -> Option<BigRational> {
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Rational-expression parser producing (num, den) pairs of MPoly.
// Grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' ['-'] uint)?
//   base   := uint | ident | '(' expr ')'
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct RatExpr {
    pub num: MPoly,
    pub den: MPoly,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(s: &str, names: &'a [String]) -> Self {
        Parser {
            chars: s.chars().collect(),
            pos: 0,
            names,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.skip_ws();
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn parse_uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!(
                "expected digits at position {}",
                start
            )));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<BigInt>()
            .map_err(|e| Error::Parse(e.to_string()))
    }

    fn parse_ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!(
                "expected identifier at position {}",
                start
            )));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn parse_base(&mut self) -> Result<RatExpr> {
        let nv = self.names.len();
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.parse_expr()?;
                if self.bump() != Some(')') {
                    return Err(Error::Parse("expected `)`".into()));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.parse_uint()?;
                Ok(RatExpr {
                    num: MPoly::constant(nv, BigRational::from_integer(n)),
                    den: MPoly::one(nv),
                })
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let id = self.parse_ident()?;
                match self.names.iter().position(|n| *n == id) {
                    Some(i) => Ok(RatExpr {
                        num: MPoly::var(nv, i),
                        den: MPoly::one(nv),
                    }),
                    None => Err(Error::Parse(format!("unknown symbol `{}`", id))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {:?}", other))),
        }
    }

    fn parse_factor(&mut self) -> Result<RatExpr> {
        let b = self.parse_base()?;
        if self.peek() == Some('^') {
            self.bump();
            let neg = if self.peek() == Some('-') {
                self.bump();
                true
            } else {
                false
            };
            let e = self.parse_uint()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| Error::Parse("exponent too large".into()))?;
            let r = RatExpr {
                num: b.num.pow(e),
                den: b.den.pow(e),
            };
            if neg {
                return Ok(RatExpr {
                    num: r.den,
                    den: r.num,
                });
            }
            return Ok(r);
        }
        Ok(b)
    }

    fn parse_term(&mut self) -> Result<RatExpr> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    let f = self.parse_factor()?;
                    acc = RatExpr {
                        num: acc.num.mul(&f.num),
                        den: acc.den.mul(&f.den),
                    };
                }
                Some('/') => {
                    self.bump();
                    let f = self.parse_factor()?;
                    if f.num.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    acc = RatExpr {
                        num: acc.num.mul(&f.den),
                        den: acc.den.mul(&f.num),
                    };
                }
                // implicit end of term
                _ => return Ok(acc),
            }
        }
    }

    fn parse_expr(&mut self) -> Result<RatExpr> {
        let nv = self.names.len();
        let mut sign = BigRational::one();
        match self.peek() {
            Some('-') => {
                self.bump();
                sign = -sign;
            }
            Some('+') => {
                self.bump();
            }
            _ => {}
        }
        let t = self.parse_term()?;
        let mut acc = RatExpr {
            num: t.num.mul_q(&sign),
            den: t.den,
        };
        loop {
            match self.peek() {
                Some('+') | Some('-') => {
                    let op = self.bump().unwrap();
                    let t = self.parse_term()?;
                    let tn = if op == '-' { t.num.neg() } else { t.num };
                    // acc.num/acc.den + tn/t.den
                    acc = RatExpr {
                        num: acc.num.mul(&t.den).add(&tn.mul(&acc.den)),
                        den: acc.den.mul(&t.den),
                    };
                }
                _ => break,
            }
        }
        let _ = nv;
        Ok(acc)
    }
}

/// Parse a rational expression in the given variable names.
pub fn parse_ratexpr(s: &str, names: &[String]) -> Result<RatExpr> {
    let mut p = Parser::new(s, names);
    let e = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(Error::Parse(format!(
            "trailing input at position {}: `{}`",
            p.pos,
            s.chars().skip(p.pos).collect::<String>()
        )));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names2() -> Vec<String> {
        vec!["u".to_string(), "v".to_string()]
    }

    fn parse(s: &str) -> MPoly {
        let e = parse_ratexpr(s, &names2()).unwrap();
        assert!(e.den.is_one(), "expected polynomial, got fraction");
        e.num
    }

    #[test]
    fn gcd_cancels_difference_of_squares() {
        let a = parse("u^2 - v^2");
        let b = parse("u - v");
        let g = MPoly::gcd(&a, &b);
        assert_eq!(g, parse("u - v").monic());
        assert_eq!(a.divexact(&g).unwrap(), parse("u + v"));
    }

    #[test]
    fn gcd_multivariate() {
        let a = parse("(u + v)^2 * (u - 2)");
        let b = parse("(u + v) * (u + 3*v)");
        let g = MPoly::gcd(&a, &b);
        assert_eq!(g, parse("u + v").monic());
    }

    #[test]
    fn divexact_fails_cleanly() {
        let a = parse("u^2 + 1");
        let b = parse("u + 1");
        assert!(a.divexact(&b).is_none());
    }

    #[test]
    fn render_roundtrip() {
        let a = parse("u^2*v - 1/2*v + 3");
        let s = a.render(&names2());
        let back = parse(&s);
        assert_eq!(a, back);
    }

    #[test]
    fn sqrt_rational() {
        let q = BigRational::new(BigInt::from(9), BigInt::from(4));
        assert_eq!(
            sqrt_q(&q),
            Some(BigRational::new(BigInt::from(3), BigInt::from(2)))
        );
        assert_eq!(sqrt_q(&BigRational::from_integer(BigInt::from(2))), None);
    }
}
