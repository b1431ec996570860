//! Exact multivariate Laurent polynomials over the integers in `x_1..x_N`, `y_1..y_N`.
//!
//! Text form: terms joined by ` + `, each term a signed integer coefficient
//! followed by `*x<i>^<e>` / `*y<i>^<e>` factors, e.g. `2*x3^1*x4^1 + -1*y1^-1`.
//! The zero polynomial prints as `0`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Monomial {
    pub xexp: Vec<i64>,
    pub yexp: Vec<i64>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial {
            xexp: vec![0; n],
            yexp: vec![0; n],
        }
    }

    pub fn nvars(&self) -> usize {
        self.xexp.len()
    }

    pub fn is_one(&self) -> bool {
        self.xexp.iter().chain(self.yexp.iter()).all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            xexp: self
                .xexp
                .iter()
                .zip(&other.xexp)
                .map(|(a, b)| a + b)
                .collect(),
            yexp: self
                .yexp
                .iter()
                .zip(&other.yexp)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial {
            xexp: self
                .xexp
                .iter()
                .zip(&other.xexp)
                .map(|(a, b)| a - b)
                .collect(),
            yexp: self
                .yexp
                .iter()
                .zip(&other.yexp)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn exps(&self) -> impl Iterator<Item = &i64> {
        self.xexp.iter().chain(self.yexp.iter())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.exps().zip(other.exps()).all(|(a, b)| a <= b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LPoly {
    n: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl LPoly {
    pub fn zero(n: usize) -> Self {
        LPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigInt::one())
    }

    pub fn constant(n: usize, c: BigInt) -> Self {
        Self::term(Monomial::one(n), c)
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        let n = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LPoly { n, terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, BigInt::one())
    }

    /// `x_i` with 1-based index.
    pub fn x(n: usize, i: usize) -> Self {
        let mut m = Monomial::one(n);
        m.xexp[i - 1] = 1;
        Self::monomial(m)
    }

    /// `y_i` with 1-based index.
    pub fn y(n: usize, i: usize) -> Self {
        let mut m = Monomial::one(n);
        m.yexp[i - 1] = 1;
        Self::monomial(m)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dims(&self, other: &LPoly) -> Result<(), Error> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &LPoly) -> Result<LPoly, Error> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &LPoly) -> Result<LPoly, Error> {
        self.check_dims(other)?;
        let mut out = LPoly::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LPoly {
        LPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> LPoly {
        if c.is_zero() {
            return LPoly::zero(self.n);
        }
        LPoly {
            n: self.n,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> LPoly {
        let mut out = LPoly::one(self.n);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Exact quotient `a / b`, or `NotDivisible`.
    pub fn div_exact(&self, b: &LPoly) -> Result<LPoly, Error> {
        self.check_dims(b)?;
        if b.is_zero() {
            return Err(Error::NotDivisible("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(LPoly::zero(self.n));
        }
        if let Some((bm, bc)) = b.as_monomial() {
            let mut out = LPoly::zero(self.n);
            for (m, c) in &self.terms {
                let (q, r) = c.div_rem(bc);
                if !r.is_zero() {
                    return Err(Error::NotDivisible(format!("coefficient {c} by {bc}")));
                }
                out.add_term(m.div(bm), q);
            }
            return Ok(out);
        }
        // Strip monomial content so both sides are polynomials with no monomial factor;
        // the quotient is then a polynomial and ordinary division terminates.
        let (a0, ma) = self.shift_to_polynomial();
        let (b0, mb) = b.shift_to_polynomial();
        let (lead_m, lead_c) = b0.terms.iter().next_back().expect("nonzero divisor");
        let mut rem = a0;
        let mut quot = LPoly::zero(self.n);
        while let Some((rm, rc)) = rem.terms.iter().next_back() {
            if !lead_m.divides(rm) {
                return Err(Error::NotDivisible(format!("{self} by {b}")));
            }
            let (qc, r) = rc.div_rem(lead_c);
            if !r.is_zero() {
                return Err(Error::NotDivisible(format!("{self} by {b}")));
            }
            let qm = rm.div(lead_m);
            let step = LPoly::term(qm, qc);
            rem = &rem - &(&step * &b0);
            quot = &quot + &step;
        }
        // self = a0 * ma, b = b0 * mb  =>  self / b = quot * ma / mb
        Ok(quot.mul_monomial(&ma.div(&mb)))
    }

    fn shift_to_polynomial(&self) -> (LPoly, Monomial) {
        let mut low = Monomial::one(self.n);
        let mut first = true;
        for m in self.terms.keys() {
            if first {
                low = m.clone();
                first = false;
            } else {
                for (l, e) in low.xexp.iter_mut().zip(&m.xexp) {
                    *l = (*l).min(*e);
                }
                for (l, e) in low.yexp.iter_mut().zip(&m.yexp) {
                    *l = (*l).min(*e);
                }
            }
        }
        let inv = Monomial::one(self.n).div(&low);
        (self.mul_monomial(&inv), low)
    }

    /// Ring homomorphism sending `x_i` to `sx[i]` and `y_i` to `sy[i]` (1-based keys);
    /// unlisted variables are fixed. Images must be invertible when the exponent is negative,
    /// so negative powers are only allowed for monomial images.
    pub fn substitute(
        &self,
        sx: &BTreeMap<usize, LPoly>,
        sy: &BTreeMap<usize, LPoly>,
    ) -> Result<LPoly, Error> {
        let mut out = LPoly::zero(self.n);
        for (m, c) in &self.terms {
            let mut rest = Monomial::one(self.n);
            let mut acc = LPoly::constant(self.n, c.clone());
            for (i, &e) in m.xexp.iter().enumerate() {
                match sx.get(&(i + 1)) {
                    Some(img) => acc = acc.try_mul(&power(img, e)?)?,
                    None => rest.xexp[i] = e,
                }
            }
            for (i, &e) in m.yexp.iter().enumerate() {
                match sy.get(&(i + 1)) {
                    Some(img) => acc = acc.try_mul(&power(img, e)?)?,
                    None => rest.yexp[i] = e,
                }
            }
            out = out.try_add(&acc.mul_monomial(&rest))?;
        }
        Ok(out)
    }

    pub fn set_y_one(&self) -> LPoly {
        let mut out = LPoly::zero(self.n);
        for (m, c) in &self.terms {
            let mut k = m.clone();
            k.yexp.iter_mut().for_each(|e| *e = 0);
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn has_negative_y(&self) -> bool {
        self.terms.keys().any(|m| m.yexp.iter().any(|&e| e < 0))
    }

    pub fn has_negative_coefficient(&self) -> bool {
        self.terms.values().any(|c| c.is_negative())
    }

    /// Largest total y-degree among terms, per variable (componentwise max).
    pub fn max_y_exponents(&self) -> Vec<i64> {
        let mut out = vec![0; self.n];
        for m in self.terms.keys() {
            for (o, &e) in out.iter_mut().zip(&m.yexp) {
                *o = (*o).max(e);
            }
        }
        out
    }

    pub fn parse(n: usize, s: &str) -> Result<LPoly, Error> {
        let s = s.trim();
        let mut out = LPoly::zero(n);
        if s == "0" {
            return Ok(out);
        }
        for raw in s.split(" + ") {
            let mut parts = raw.trim().split('*');
            let coef: BigInt = parts
                .next()
                .unwrap_or("")
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient in term `{raw}`")))?;
            let mut m = Monomial::one(n);
            for f in parts {
                let f = f.trim();
                let (var, exp) = f
                    .split_once('^')
                    .ok_or_else(|| Error::Parse(format!("bad factor `{f}`")))?;
                let e: i64 = exp
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent `{f}`")))?;
                let (kind, idx) = var.split_at(1);
                let i: usize = idx
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad index `{f}`")))?;
                if i == 0 || i > n {
                    return Err(Error::Parse(format!("variable index out of range `{f}`")));
                }
                match kind {
                    "x" => m.xexp[i - 1] += e,
                    "y" => m.yexp[i - 1] += e,
                    _ => return Err(Error::Parse(format!("unknown variable `{f}`"))),
                }
            }
            out.add_term(m, coef);
        }
        Ok(out)
    }
}

fn power(p: &LPoly, e: i64) -> Result<LPoly, Error> {
    if e >= 0 {
        return Ok(p.pow(e as u32));
    }
    let one = LPoly::one(p.nvars());
    let inv = one.div_exact(p)?;
    Ok(inv.pow((-e) as u32))
}

impl Serialize for LPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &e) in m.xexp.iter().enumerate() {
                if e != 0 {
                    write!(f, "*x{}^{}", i + 1, e)?;
                }
            }
            for (i, &e) in m.yexp.iter().enumerate() {
                if e != 0 {
                    write!(f, "*y{}^{}", i + 1, e)?;
                }
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LPoly> for &'a LPoly {
    type Output = LPoly;
    fn add(self, rhs: &LPoly) -> LPoly {
        self.try_add(rhs).expect("variable count mismatch")
    }
}

impl<'a> Sub<&'a LPoly> for &'a LPoly {
    type Output = LPoly;
    fn sub(self, rhs: &LPoly) -> LPoly {
        self.try_add(&-rhs).expect("variable count mismatch")
    }
}

impl<'a> Mul<&'a LPoly> for &'a LPoly {
    type Output = LPoly;
    fn mul(self, rhs: &LPoly) -> LPoly {
        self.try_mul(rhs).expect("variable count mismatch")
    }
}

impl Neg for &LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        LPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}
