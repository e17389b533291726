//! Truncated formal Laurent series over a coefficient ring.
//!
//! Every operation propagates the provable truncation window pessimistically;
//! reading a coefficient outside the window is an error, never a silent zero.
//! Coefficients are any [`Coeff`] ring, which includes both scalar backends
//! and series themselves (series-valued series are the two-variable
//! expansions used by the Bergman kernel machinery).

use std::fmt::Debug;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ring operations required of series coefficients.
pub trait Coeff: Clone + Debug + Send + Sync {
    fn c_zero(&self) -> Self;
    fn c_is_zero(&self) -> bool;
    fn c_add(&self, o: &Self) -> Self;
    fn c_sub(&self, o: &Self) -> Self;
    fn c_neg(&self) -> Self;
    fn c_mul(&self, o: &Self) -> Self;
    fn c_mul_i64(&self, n: i64) -> Self;
    fn c_div_i64(&self, n: i64) -> Self;
}

macro_rules! scalar_coeff {
    ($t:ty) => {
        impl Coeff for $t {
            fn c_zero(&self) -> Self {
                match self.ctx_arc() {
                    Some(c) => <$t as Scalar>::of_i64(&c, 0),
                    None => num_traits::Zero::zero(),
                }
            }
            fn c_is_zero(&self) -> bool {
                self.is_negligible()
            }
            fn c_add(&self, o: &Self) -> Self {
                self.clone() + o.clone()
            }
            fn c_sub(&self, o: &Self) -> Self {
                self.clone() - o.clone()
            }
            fn c_neg(&self) -> Self {
                -self.clone()
            }
            fn c_mul(&self, o: &Self) -> Self {
                self.clone() * o.clone()
            }
            fn c_mul_i64(&self, n: i64) -> Self {
                Scalar::mul_i64(self, n)
            }
            fn c_div_i64(&self, n: i64) -> Self {
                Scalar::div_i64(self, n)
            }
        }
    };
}
scalar_coeff!(crate::scalar::Exact);
scalar_coeff!(crate::scalar::BigC);

impl<C: Coeff> Coeff for LaurentSeries<C> {
    fn c_zero(&self) -> Self {
        LaurentSeries::zero_to(self.var.clone(), self.trunc_deg, self.proto.clone())
    }
    fn c_is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.c_is_zero())
    }
    fn c_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn c_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn c_neg(&self) -> Self {
        self.neg()
    }
    fn c_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn c_mul_i64(&self, n: i64) -> Self {
        self.map(|c| c.c_mul_i64(n))
    }
    fn c_div_i64(&self, n: i64) -> Self {
        self.map(|c| c.c_div_i64(n))
    }
}

/// Truncated Laurent series: coefficients for degrees `min_deg..=trunc_deg`.
/// The empty window (`min_deg == trunc_deg + 1`) is a series known to vanish
/// through order `trunc_deg`.
#[derive(Clone, Debug)]
pub struct LaurentSeries<C: Coeff> {
    pub var: Arc<str>,
    pub min_deg: i64,
    pub trunc_deg: i64,
    pub coeffs: Vec<C>,
    pub proto: C,
}

pub type SSeries<K> = LaurentSeries<K>;
/// Two-variable expansion: outer variable, coefficients are inner series.
pub type BiSeries<K> = LaurentSeries<LaurentSeries<K>>;

impl<C: Coeff> LaurentSeries<C> {
    pub fn new(var: Arc<str>, min_deg: i64, coeffs: Vec<C>, proto: C) -> Self {
        let trunc_deg = min_deg + coeffs.len() as i64 - 1;
        let mut s = LaurentSeries {
            var,
            min_deg,
            trunc_deg,
            coeffs,
            proto,
        };
        s.normalize();
        s
    }

    /// Series known to be zero through `trunc_deg`.
    pub fn zero_to(var: Arc<str>, trunc_deg: i64, proto: C) -> Self {
        LaurentSeries {
            var,
            min_deg: trunc_deg + 1,
            trunc_deg,
            coeffs: vec![],
            proto,
        }
    }

    pub fn monomial(var: Arc<str>, deg: i64, c: C, trunc_deg: i64) -> Self {
        assert!(trunc_deg >= deg);
        let mut coeffs = vec![c.c_zero(); (trunc_deg - deg + 1) as usize];
        let proto = c.c_zero();
        coeffs[0] = c;
        LaurentSeries::new(var, deg, coeffs, proto)
    }

    pub fn constant(var: Arc<str>, c: C, trunc_deg: i64) -> Self {
        Self::monomial(var, 0, c, trunc_deg)
    }

    fn normalize(&mut self) {
        let mut lead = 0usize;
        while lead < self.coeffs.len() && self.coeffs[lead].c_is_zero() {
            lead += 1;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_deg += lead as i64;
        }
        debug_assert_eq!(
            self.min_deg + self.coeffs.len() as i64 - 1,
            self.trunc_deg
        );
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation (degree of the first nonzero coefficient), None for a
    /// window-zero series.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.min_deg)
        }
    }

    /// Conservative lower bound on the valuation, usable for truncation
    /// bookkeeping even when the series is window-zero.
    pub fn val_bound(&self) -> i64 {
        self.min_deg
    }

    /// Coefficient at degree `d`; errors when `d` exceeds the window.
    pub fn coeff(&self, d: i64) -> Result<C> {
        if d > self.trunc_deg {
            return Err(Error::Precision(
                format!(
                    "coefficient {} of `{}` requested, window ends at {}",
                    d, self.var, self.trunc_deg
                ),
                d,
            ));
        }
        if d < self.min_deg {
            return Ok(self.proto.c_zero());
        }
        Ok(self.coeffs[(d - self.min_deg) as usize].clone())
    }

    fn check_var(&self, o: &Self) {
        assert_eq!(
            self.var, o.var,
            "series variable mismatch: `{}` vs `{}`",
            self.var, o.var
        );
    }

    pub fn map<F: Fn(&C) -> C>(&self, f: F) -> Self {
        let coeffs = self.coeffs.iter().map(|c| f(c)).collect();
        LaurentSeries {
            var: self.var.clone(),
            min_deg: self.min_deg,
            trunc_deg: self.trunc_deg,
            coeffs,
            proto: self.proto.clone(),
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_var(o);
        let trunc = self.trunc_deg.min(o.trunc_deg);
        let min = self.min_deg.min(o.min_deg).min(trunc + 1);
        let mut coeffs = vec![self.proto.c_zero(); (trunc - min + 1).max(0) as usize];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let d = min + i as i64;
            let a = if d >= self.min_deg && d <= self.trunc_deg {
                self.coeffs[(d - self.min_deg) as usize].clone()
            } else {
                self.proto.c_zero()
            };
            let b = if d >= o.min_deg && d <= o.trunc_deg {
                o.coeffs[(d - o.min_deg) as usize].clone()
            } else {
                self.proto.c_zero()
            };
            *c = a.c_add(&b);
        }
        LaurentSeries {
            var: self.var.clone(),
            min_deg: min,
            trunc_deg: trunc,
            coeffs,
            proto: self.proto.clone(),
        }
        .normalized()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.c_neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map(|c| c.c_mul(s))
    }

    /// Product with pessimistic window: trunc = min(a.trunc + b.val, b.trunc + a.val).
    pub fn mul(&self, o: &Self) -> Self {
        self.check_var(o);
        let trunc = (self.trunc_deg + o.val_bound()).min(o.trunc_deg + self.val_bound());
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return LaurentSeries::zero_to(self.var.clone(), trunc, self.proto.clone());
        }
        let min = self.min_deg + o.min_deg;
        let n = ((trunc - min + 1).max(0)) as usize;
        let coeffs = convolve(&self.coeffs, &o.coeffs, n, &self.proto);
        LaurentSeries {
            var: self.var.clone(),
            min_deg: min,
            trunc_deg: trunc,
            coeffs,
            proto: self.proto.clone(),
        }
        .normalized()
    }

    /// Multiply by the monomial t^k (exact window shift).
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            var: self.var.clone(),
            min_deg: self.min_deg + k,
            trunc_deg: self.trunc_deg + k,
            coeffs: self.coeffs.clone(),
            proto: self.proto.clone(),
        }
    }

    /// Restrict the window to `deg` (no-op if already shorter).
    pub fn truncate_to(&self, deg: i64) -> Self {
        if deg >= self.trunc_deg {
            return self.clone();
        }
        let keep = ((deg - self.min_deg + 1).max(0)) as usize;
        LaurentSeries {
            var: self.var.clone(),
            min_deg: self.min_deg.min(deg + 1),
            trunc_deg: deg,
            coeffs: self.coeffs[..keep.min(self.coeffs.len())].to_vec(),
            proto: self.proto.clone(),
        }
        .normalized()
    }

    /// Termwise derivative.
    pub fn derive(&self) -> Self {
        let coeffs: Vec<C> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.c_mul_i64(self.min_deg + i as i64))
            .collect();
        LaurentSeries {
            var: self.var.clone(),
            min_deg: self.min_deg - 1,
            trunc_deg: self.trunc_deg - 1,
            coeffs,
            proto: self.proto.clone(),
        }
        .normalized()
    }

    /// Antiderivative with zero constant term; errors if a t^{-1} term is present.
    pub fn integrate(&self) -> Result<Self> {
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.min_deg + i as i64 == -1 && !c.c_is_zero() {
                return Err(Error::BadSeriesOp(
                    "cannot integrate a series with a t^-1 term".into(),
                ));
            }
        }
        let coeffs: Vec<C> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let d = self.min_deg + i as i64;
                if d == -1 {
                    c.c_zero()
                } else {
                    c.c_div_i64(d + 1)
                }
            })
            .collect();
        Ok(LaurentSeries {
            var: self.var.clone(),
            min_deg: self.min_deg + 1,
            trunc_deg: self.trunc_deg + 1,
            coeffs,
            proto: self.proto.clone(),
        }
        .normalized())
    }

    /// Coefficient of t^{-1}.
    pub fn residue(&self) -> Result<C> {
        self.coeff(-1)
    }

    /// Substitute t -> -t.
    pub fn substitute_neg(&self) -> Self {
        let coeffs: Vec<C> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if (self.min_deg + i as i64).rem_euclid(2) == 1 {
                    c.c_neg()
                } else {
                    c.clone()
                }
            })
            .collect();
        LaurentSeries {
            var: self.var.clone(),
            min_deg: self.min_deg,
            trunc_deg: self.trunc_deg,
            coeffs,
            proto: self.proto.clone(),
        }
        .normalized()
    }

    /// Inversion given a way to invert the leading coefficient.
    pub fn invert_via<F: Fn(&C) -> Result<C>>(&self, inv0: F) -> Result<Self> {
        let v = self.valuation().ok_or_else(|| {
            Error::BadSeriesOp("cannot invert a series that vanishes to its known order".into())
        })?;
        let n = self.coeffs.len();
        let a0inv = inv0(&self.coeffs[0])?;
        let mut b = vec![self.proto.c_zero(); n];
        b[0] = a0inv.clone();
        for k in 1..n {
            let mut acc = self.proto.c_zero();
            for j in 1..=k {
                acc = acc.c_add(&self.coeffs[j].c_mul(&b[k - j]));
            }
            b[k] = acc.c_neg().c_mul(&a0inv);
        }
        // window: (a * b = 1 + O(t^n)) at shifted degrees
        Ok(LaurentSeries {
            var: self.var.clone(),
            min_deg: -v,
            trunc_deg: -v + n as i64 - 1,
            coeffs: b,
            proto: self.proto.clone(),
        }
        .normalized())
    }
}

fn convolve<C: Coeff>(a: &[C], b: &[C], n: usize, proto: &C) -> Vec<C> {
    let mut out = vec![proto.c_zero(); n];
    for (i, x) in a.iter().enumerate() {
        if i >= n {
            break;
        }
        if x.c_is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= n {
                break;
            }
            out[i + j] = out[i + j].c_add(&x.c_mul(y));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Scalar-coefficient operations (inversion, composition, reversion, roots).
// ---------------------------------------------------------------------------

impl<K: Scalar> LaurentSeries<K> {
    pub fn invert(&self) -> Result<Self> {
        self.invert_via(|c| c.try_inv())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.invert()?))
    }

    /// Composition outer(inner). Requires val(inner) >= 1; when the outer
    /// series has negative exponents the inner leading coefficient must be
    /// invertible.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let v = match inner.valuation() {
            Some(v) if v >= 1 => v,
            Some(_) | None => {
                return Err(Error::BadSeriesOp(
                    "composition requires inner valuation >= 1".into(),
                ))
            }
        };
        if self.coeffs.is_empty() {
            // zero through trunc: the bound below still applies
            let trunc = v * (self.trunc_deg + 1) - 1;
            return Ok(LaurentSeries::zero_to(
                inner.var.clone(),
                trunc,
                inner.proto.clone(),
            ));
        }
        let m = self.min_deg;
        let k_out = self.trunc_deg;
        // provable window of the composition
        let trunc = (v * (k_out + 1) - 1).min((m - 1) * v + inner.trunc_deg);
        let pos_part = |lo: i64, hi: i64, base: &Self| -> Result<Self> {
            // sum_{d=lo..hi} c_d * base^d  (d >= 0), Horner from the top
            let mut acc = LaurentSeries::constant(
                inner.var.clone(),
                self.coeff(hi)?,
                trunc,
            );
            let mut d = hi;
            while d > lo {
                d -= 1;
                acc = acc.mul(base).truncate_to(trunc);
                let c = self.coeff(d)?;
                acc = acc.add(&LaurentSeries::constant(inner.var.clone(), c, trunc));
            }
            Ok(acc)
        };
        let mut result = if k_out >= 0 {
            let lo = m.max(0);
            let mut r = pos_part(lo, k_out, inner)?;
            if lo > 0 {
                // multiply by inner^lo
                r = r.mul(&pow_series(inner, lo as u64, trunc)).truncate_to(trunc);
            }
            r
        } else {
            LaurentSeries::zero_to(inner.var.clone(), trunc, inner.proto.clone())
        };
        if m < 0 {
            let inv = inner.invert()?;
            // sum_{e=1..-m} c_{-e} inv^e by Horner from the deepest degree
            let mut acc = LaurentSeries::zero_to(
                inner.var.clone(),
                trunc + (-m + 1) * v.abs().max(1),
                inner.proto.clone(),
            );
            for e in (1..=(-m)).rev() {
                let c = self.coeff(-e)?;
                acc = acc.add(&LaurentSeries::constant(inner.var.clone(), c, acc.trunc_deg));
                acc = acc.mul(&inv).truncate_to(trunc);
            }
            result = result.add(&acc);
        }
        Ok(result.truncate_to(trunc))
    }

    /// Compositional inverse of a valuation-1 series (Newton iteration).
    pub fn revert(&self) -> Result<Self> {
        match self.valuation() {
            Some(1) => {}
            _ => {
                return Err(Error::BadSeriesOp(
                    "reversion requires valuation exactly 1".into(),
                ))
            }
        }
        let trunc = self.trunc_deg;
        let a1 = self.coeffs[0].clone();
        let a1inv = a1.try_inv()?;
        let one = one_like(&a1);
        let t = LaurentSeries::monomial(self.var.clone(), 1, one, trunc);
        let fprime = self.derive();
        let mut g = t.scale(&a1inv);
        let mut steps = 0usize;
        let max_steps = 2 + (64 - (trunc.max(2) as u64).leading_zeros()) as usize;
        loop {
            let fg = self.compose(&g)?.truncate_to(trunc);
            let defect = fg.sub(&t);
            if defect.is_known_zero() && defect.trunc_deg >= trunc {
                return Ok(g);
            }
            let fpg = fprime.compose(&g)?.truncate_to(trunc - 1);
            let corr = defect.mul(&fpg.invert()?).truncate_to(trunc);
            g = g.sub(&corr).truncate_to(trunc);
            steps += 1;
            if steps > max_steps + 4 {
                return Err(Error::BadSeriesOp(
                    "series reversion failed to converge".into(),
                ));
            }
        }
    }

    /// n-th root with declared branch: result^n = self, leading coefficient
    /// equals `branch` times the monomial.
    pub fn nth_root(&self, n: u32, branch: &K) -> Result<Self> {
        let v = self.valuation().ok_or_else(|| {
            Error::BadSeriesOp("cannot take a root of a window-zero series".into())
        })?;
        if v.rem_euclid(n as i64) != 0 {
            return Err(Error::BadSeriesOp(format!(
                "valuation {} not divisible by root order {}",
                v, n
            )));
        }
        let lead = self.coeffs[0].clone();
        let mut bpow = branch.clone();
        for _ in 1..n {
            bpow = bpow * branch.clone();
        }
        if !(bpow.clone() - lead.clone()).is_negligible() {
            return Err(Error::BadSeriesOp(format!(
                "branch^{} = {} does not match leading coefficient {}",
                n,
                bpow.render(),
                lead.render()
            )));
        }
        // self = lead * t^v * (1 + u); root = branch * t^{v/n} * (1+u)^{1/n}
        let unit = self.shift(-v).scale(&lead.try_inv()?);
        let trunc = unit.trunc_deg;
        let u = unit.sub(&LaurentSeries::constant(
            self.var.clone(),
            one_like(&lead),
            trunc,
        ));
        // binomial series (1+u)^{1/n}
        let ctx = lead.ctx_arc().expect("root needs scalar context");
        let mut acc = LaurentSeries::constant(self.var.clone(), one_like(&lead), trunc);
        let mut upow = LaurentSeries::constant(self.var.clone(), one_like(&lead), trunc);
        let mut coef = one_like(&lead); // binom(1/n, 0)
        let nv = K::of_i64(&ctx, n as i64);
        let kmax = if u.is_known_zero() { 0 } else { trunc.max(0) };
        for k in 0..kmax {
            // binom(1/n, k+1) = binom(1/n,k) * (1/n - k)/(k+1)
            let num = nv.clone().try_inv()? - K::of_i64(&ctx, k);
            coef = coef * num;
            coef = coef.div_i64(k + 1);
            upow = upow.mul(&u).truncate_to(trunc);
            if upow.is_known_zero() {
                break;
            }
            acc = acc.add(&upow.scale(&coef));
        }
        Ok(acc.shift(v / n as i64).scale(branch))
    }

    /// Render for diagnostics.
    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return format!("O({}^{})", self.var, self.trunc_deg + 1);
        }
        let mut parts = vec![];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.c_is_zero() {
                continue;
            }
            let d = self.min_deg + i as i64;
            parts.push(format!("({})*{}^{}", c.render(), self.var, d));
        }
        parts.push(format!("O({}^{})", self.var, self.trunc_deg + 1));
        parts.join(" + ")
    }
}

fn one_like<K: Scalar>(w: &K) -> K {
    match w.ctx_arc() {
        Some(c) => K::of_i64(&c, 1),
        None => num_traits::One::one(),
    }
}

/// Nonnegative power with truncation.
pub fn pow_series<K: Scalar>(s: &LaurentSeries<K>, n: u64, trunc: i64) -> LaurentSeries<K> {
    let mut acc: Option<LaurentSeries<K>> = None;
    let mut base = s.clone();
    let mut e = n;
    if e == 0 {
        return LaurentSeries::constant(s.var.clone(), one_like(&s.proto), trunc);
    }
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => a.mul(&base).truncate_to(trunc),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = base.mul(&base).truncate_to(trunc);
    }
    acc.unwrap().truncate_to(trunc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, ExactCtx};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use std::sync::Arc as StdArc;

    fn ctx() -> StdArc<ExactCtx> {
        ExactCtx::rationals()
    }

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_q_ctx(&ctx(), BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn var() -> Arc<str> {
        Arc::from("t")
    }

    fn series(min: i64, vals: &[i64], trunc: i64) -> LaurentSeries<Exact> {
        let mut coeffs: Vec<Exact> = vals.iter().map(|&v| q(v, 1)).collect();
        let want = (trunc - min + 1) as usize;
        while coeffs.len() < want {
            coeffs.push(q(0, 1));
        }
        LaurentSeries::new(var(), min, coeffs, q(0, 1))
    }

    #[test]
    fn arith_examples() {
        // (1+t)(1-t) = 1 - t^2
        let a = series(0, &[1, 1], 8);
        let b = series(0, &[1, -1], 8);
        let p = a.mul(&b);
        assert_eq!(p.coeff(0).unwrap(), q(1, 1));
        assert_eq!(p.coeff(1).unwrap(), q(0, 1));
        assert_eq!(p.coeff(2).unwrap(), q(-1, 1));

        // (t^-1 + 1) + (-t^-1) = 1, min_deg renormalizes
        let a = series(-1, &[1, 1], 4);
        let b = series(-1, &[-1], 4);
        let s = a.add(&b);
        assert_eq!(s.valuation(), Some(0));
        assert_eq!(s.coeff(0).unwrap(), q(1, 1));

        // trunc bookkeeping: trunc-5 times trunc-3 at val 0 gives trunc 3
        let a = series(0, &[1, 2, 3, 4, 5, 6], 5);
        let b = series(0, &[1, 1, 1, 1], 3);
        assert_eq!(a.mul(&b).trunc_deg, 3);
    }

    #[test]
    fn invert_examples() {
        // 1 - t -> geometric
        let a = series(0, &[1, -1], 6);
        let inv = a.invert().unwrap();
        for d in 0..=4 {
            assert_eq!(inv.coeff(d).unwrap(), q(1, 1), "degree {d}");
        }
        // t^2 (1+t) -> t^-2 (1 - t + t^2 - ...)
        let a = series(2, &[1, 1], 8);
        let inv = a.invert().unwrap();
        assert_eq!(inv.valuation(), Some(-2));
        assert_eq!(inv.coeff(-2).unwrap(), q(1, 1));
        assert_eq!(inv.coeff(-1).unwrap(), q(-1, 1));
        assert_eq!(inv.coeff(0).unwrap(), q(1, 1));
        // constant
        let two = series(0, &[2], 3);
        assert_eq!(two.invert().unwrap().coeff(0).unwrap(), q(1, 2));
        // a * invert(a) = 1 within window
        let a = series(1, &[3, -2, 5, 7], 7);
        let p = a.mul(&a.invert().unwrap());
        assert_eq!(p.coeff(0).unwrap(), q(1, 1));
        for d in 1..=p.trunc_deg {
            assert_eq!(p.coeff(d).unwrap(), q(0, 1));
        }
    }

    #[test]
    fn compose_against_long_division_oracle() {
        // compose(1/(1-t), s+s^2) should equal 1/(1-s-s^2)
        // oracle: long division — coefficients satisfy the Fibonacci recurrence
        let outer = series(0, &[1, -1], 9).invert().unwrap(); // 1/(1-t)
        let inner = series(1, &[1, 1], 9); // s + s^2
        let c = outer.compose(&inner).unwrap();
        let mut fib = vec![BigRational::from_integer(BigInt::from(1)); 2]; // f0=f1=1
        for k in 2..=c.trunc_deg as usize {
            let v = &fib[k - 1] + &fib[k - 2];
            fib.push(v);
        }
        for d in 0..=c.trunc_deg {
            assert_eq!(
                c.coeff(d).unwrap(),
                Exact::from_q_ctx(&ctx(), fib[d as usize].clone()),
                "degree {d}"
            );
        }
        // compose(t^2, -t) = t^2
        let sq = series(2, &[1], 6);
        let negt = series(1, &[-1], 6);
        let c = sq.compose(&negt).unwrap();
        assert_eq!(c.coeff(2).unwrap(), q(1, 1));
        // compose(t, f) = f
        let id = series(1, &[1], 6);
        let f = series(0, &[4, 3, 2, 1], 3);
        let c = id.compose(&f).unwrap();
        for d in 0..=c.trunc_deg {
            assert_eq!(c.coeff(d).unwrap(), f.coeff(d).unwrap());
        }
    }

    #[test]
    fn revert_against_lagrange_inversion_oracle() {
        // revert(t + t^2): Lagrange inversion gives
        // [t^n] g = (1/n) [w^{n-1}] (1+w)^{-n} = (1/n) * C(-n, n-1)
        let a = series(1, &[1, 1], 10);
        let g = a.revert().unwrap();
        for n in 1..=g.trunc_deg {
            // binom(-n, n-1) = (-1)^(n-1) binom(2n-2, n-1)
            let mut b = BigRational::from_integer(BigInt::from(1));
            for j in 0..(n - 1) {
                b *= BigRational::new(BigInt::from(2 * n - 2 - j), BigInt::from(j + 1));
            }
            let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
            let expect = BigRational::new(BigInt::from(sign), BigInt::from(n)) * b;
            assert_eq!(
                g.coeff(n).unwrap(),
                Exact::from_q_ctx(&ctx(), expect),
                "degree {n}"
            );
        }
        // defining property on a random-ish degree-6 series
        let f = series(1, &[2, -1, 3, 0, 5, -7], 6);
        let r = f.revert().unwrap();
        let comp = f.compose(&r).unwrap();
        assert_eq!(comp.coeff(1).unwrap(), q(1, 1));
        for d in 2..=comp.trunc_deg {
            assert_eq!(comp.coeff(d).unwrap(), q(0, 1), "degree {d}");
        }
        // revert(t) = t
        let t = series(1, &[1], 5);
        assert_eq!(t.revert().unwrap().coeff(1).unwrap(), q(1, 1));
    }

    #[test]
    fn nth_root_against_newton_oracle() {
        // sqrt(1+t) via Newton iteration on s^2 - (1+t) as the oracle
        let a = series(0, &[1, 1], 8);
        let s = a.nth_root(2, &q(1, 1)).unwrap();
        let mut newton = series(0, &[1], 8);
        for _ in 0..5 {
            // s <- (s + a/s)/2
            let corr = a.mul(&newton.invert().unwrap());
            newton = newton.add(&corr).scale(&q(1, 2)).truncate_to(8);
        }
        for d in 0..=s.trunc_deg.min(newton.trunc_deg) {
            assert_eq!(s.coeff(d).unwrap(), newton.coeff(d).unwrap(), "degree {d}");
        }
        assert_eq!(s.coeff(1).unwrap(), q(1, 2));
        assert_eq!(s.coeff(2).unwrap(), q(-1, 8));
        // sqrt of t^2 with branch -1 -> -t
        let t2 = series(2, &[1], 6);
        let r = t2.nth_root(2, &q(-1, 1)).unwrap();
        assert_eq!(r.valuation(), Some(1));
        assert_eq!(r.coeff(1).unwrap(), q(-1, 1));
        // cube root of 8 t^3 with branch 2 -> 2t
        let c = series(3, &[8], 9);
        let r = c.nth_root(3, &q(2, 1)).unwrap();
        assert_eq!(r.coeff(1).unwrap(), q(2, 1));
        // result^n = self within window
        let f = series(2, &[4, 4, -3, 1], 8);
        let r = f.nth_root(2, &q(2, 1)).unwrap();
        let sq = r.mul(&r);
        for d in 2..=sq.trunc_deg {
            assert_eq!(sq.coeff(d).unwrap(), f.coeff(d).unwrap(), "degree {d}");
        }
        // branch mismatch is an error
        assert!(f.nth_root(2, &q(3, 1)).is_err());
    }

    #[test]
    fn derive_integrate_residue() {
        let a = series(-1, &[1], 4); // t^-1
        let d = a.derive();
        assert_eq!(d.coeff(-2).unwrap(), q(-1, 1));
        assert_eq!(series(0, &[5], 4).derive().valuation(), None);
        let p = series(1, &[1, 0, 3], 5).derive(); // d/dt (t + 3 t^3)... wait vals
        assert_eq!(p.coeff(0).unwrap(), q(1, 1));

        assert_eq!(series(-1, &[1], 3).residue().unwrap(), q(1, 1));
        assert_eq!(series(-2, &[1, 0, 3], 3).residue().unwrap(), q(0, 1));
        // residue after a product: (2t^-1 + t)(1 + t) has residue 2
        let a = series(-1, &[2, 0, 1], 3);
        let b = series(0, &[1, 1], 4);
        assert_eq!(a.mul(&b).residue().unwrap(), q(2, 1));
        // residue(derive(f)) == 0
        let f = series(-3, &[7, 1, -2, 9, 4], 4);
        assert_eq!(f.derive().residue().unwrap(), q(0, 1));
        // residue outside the window errors
        let short = series(0, &[1], 0);
        assert!(short.shift(-5).coeff(3).is_err());
    }

    #[test]
    #[should_panic(expected = "variable mismatch")]
    fn variable_mismatch_panics() {
        let a = series(0, &[1], 3);
        let b = LaurentSeries::new(Arc::from("s"), 0, vec![q(1, 1)], q(0, 1));
        let _ = a.add(&b);
    }

    #[test]
    fn nested_series_arithmetic() {
        // bivariate: (x + y)^2 where outer var y, inner var x
        let inner_one = series(0, &[1], 6);
        let x = series(1, &[1], 6);
        let zero_inner = series(0, &[], 6);
        let bi_x: BiSeries<Exact> = LaurentSeries::constant(Arc::from("y"), x.clone(), 6);
        let bi_y: BiSeries<Exact> =
            LaurentSeries::monomial(Arc::from("y"), 1, inner_one.clone(), 6);
        let s = bi_x.c_add(&bi_y);
        let sq = s.c_mul(&s);
        // coefficient of y^0 is x^2, y^1 is 2x, y^2 is 1
        assert_eq!(sq.coeff(0).unwrap().coeff(2).unwrap(), q(1, 1));
        assert_eq!(sq.coeff(1).unwrap().coeff(1).unwrap(), q(2, 1));
        assert_eq!(sq.coeff(2).unwrap().coeff(0).unwrap(), q(1, 1));
        let _ = zero_inner;
    }
}
