//! Rational functions in the four half-exponent generators `s, a, v, t`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Exponent vector over `(s, a, v, t)`.
pub type Exps = [i32; 4];

/// Laurent polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LPoly {
    terms: BTreeMap<Exps, BigRational>,
}

fn add_exps(x: &Exps, y: &Exps) -> Exps {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]]
}

fn sub_exps(x: &Exps, y: &Exps) -> Exps {
    [x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]]
}

impl LPoly {
    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 4], c);
        }
        LPoly { terms }
    }

    pub fn monomial(e: Exps, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LPoly { terms }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    /// Single-term polynomial, returned as its exponent and coefficient.
    pub fn as_monomial(&self) -> Option<(Exps, BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c.clone()))
        } else {
            None
        }
    }

    fn leading(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.iter().next_back()
    }

    fn min_exps(&self) -> Exps {
        let mut m = [i32::MAX; 4];
        for e in self.terms.keys() {
            for k in 0..4 {
                m[k] = m[k].min(e[k]);
            }
        }
        if self.terms.is_empty() {
            [0; 4]
        } else {
            m
        }
    }

    pub fn shift(&self, by: &Exps) -> LPoly {
        LPoly { terms: self.terms.iter().map(|(e, c)| (add_exps(e, by), c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> LPoly {
        if c.is_zero() {
            return LPoly::default();
        }
        LPoly { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Evaluate at rational values of `(s, a, v, t)`.
    pub fn eval(&self, at: &[BigRational; 4]) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for k in 0..4 {
                term *= at[k].powi(e[k] as i64)?;
            }
            acc += term;
        }
        Some(acc)
    }

    /// Exact quotient `self / d` in the Laurent ring, if it exists.
    pub fn div_exact(&self, d: &LPoly) -> Option<LPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LPoly::default());
        }
        let mp = self.min_exps();
        let md = d.min_exps();
        let p0 = self.shift(&[-mp[0], -mp[1], -mp[2], -mp[3]]);
        let d0 = d.shift(&[-md[0], -md[1], -md[2], -md[3]]);
        let (dl_e, dl_c) = d0.leading().map(|(e, c)| (*e, c.clone()))?;
        let mut rem = p0;
        let mut quot = LPoly::default();
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (*e, c.clone())) {
            let te = sub_exps(&re, &dl_e);
            if te.iter().any(|&x| x < 0) {
                return None;
            }
            let tc = rc / &dl_c;
            let step = d0.shift(&te).scale(&tc);
            rem = rem - step;
            quot.add_term(te, tc);
        }
        Some(quot.shift(&sub_exps(&mp, &md)))
    }
}

impl fmt::Debug for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["s", "a", "v", "t"];
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for k in 0..4 {
                if e[k] != 0 {
                    write!(f, "*{}^{}", names[k], e[k])?;
                }
            }
        }
        Ok(())
    }
}

impl Add for LPoly {
    type Output = LPoly;
    fn add(mut self, rhs: LPoly) -> LPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for LPoly {
    type Output = LPoly;
    fn sub(mut self, rhs: LPoly) -> LPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, -c);
        }
        self
    }
}

impl Neg for LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        LPoly { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Mul for &LPoly {
    type Output = LPoly;
    fn mul(self, rhs: &LPoly) -> LPoly {
        let mut out = LPoly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(add_exps(e1, e2), c1 * c2);
            }
        }
        out
    }
}

/// Quotient of Laurent polynomials, kept with a monic denominator free of
/// monomial factors.
#[derive(Clone)]
pub struct RatFunc {
    num: LPoly,
    den: LPoly,
}

impl RatFunc {
    pub fn var(k: usize) -> Self {
        let mut e = [0; 4];
        e[k] = 1;
        RatFunc::from_poly(LPoly::monomial(e, BigRational::one()))
    }

    pub fn from_poly(p: LPoly) -> Self {
        RatFunc { num: p, den: LPoly::constant(BigRational::one()) }
    }

    pub fn constant(c: BigRational) -> Self {
        RatFunc::from_poly(LPoly::constant(c))
    }

    pub fn numer(&self) -> &LPoly {
        &self.num
    }

    pub fn denom(&self) -> &LPoly {
        &self.den
    }

    fn new(num: LPoly, den: LPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let mut r = RatFunc { num, den };
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = LPoly::constant(BigRational::one());
            return;
        }
        if let Some((e, c)) = self.den.as_monomial() {
            let inv_e = [-e[0], -e[1], -e[2], -e[3]];
            let inv_c = BigRational::one() / c;
            self.num = self.num.shift(&inv_e).scale(&inv_c);
            self.den = LPoly::constant(BigRational::one());
            return;
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = LPoly::constant(BigRational::one());
            return;
        }
        if let Some(q) = self.den.div_exact(&self.num) {
            self.num = LPoly::constant(BigRational::one());
            self.den = q;
            if let Some((e, c)) = self.den.as_monomial() {
                let inv_e = [-e[0], -e[1], -e[2], -e[3]];
                self.num = LPoly::monomial(inv_e, BigRational::one() / c);
                self.den = LPoly::constant(BigRational::one());
                return;
            }
        }
        let m = self.den.min_exps();
        let back = [-m[0], -m[1], -m[2], -m[3]];
        self.num = self.num.shift(&back);
        self.den = self.den.shift(&back);
        let lc = self.den.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::one);
        let inv = BigRational::one() / lc;
        self.num = self.num.scale(&inv);
        self.den = self.den.scale(&inv);
    }

    /// Specialize at rational values of `(s, a, v, t)`.
    pub fn eval(&self, at: &[BigRational; 4]) -> Option<BigRational> {
        let d = self.den.eval(at)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(at)? / d)
    }
}

/// `delta, s1, s2, b` as four independent indeterminates, for identities
/// stated in the algebra parameters alone. Rendered as `s, a, v, t`.
pub fn free_params() -> crate::params::DerivedParams<RatFunc> {
    let b = RatFunc::var(3);
    crate::params::DerivedParams { delta: RatFunc::var(0), s1: RatFunc::var(1), s2: RatFunc::var(2), b_even: b.clone(), b_odd: b }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}] / [{:?}]", self.num, self.den)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(LPoly::default())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::constant(BigRational::one())
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl<'a> Add<&'a RatFunc> for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &'a RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(self.num + rhs.num.clone(), self.den);
        }
        let num = &self.num * &rhs.den + &rhs.num * &self.den;
        RatFunc::new(num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RatFunc> for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &'a RatFunc) -> RatFunc {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a RatFunc> for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &'a RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a RatFunc> for RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &'a RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

macro_rules! owned_rhs {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                $tr::$m(self, &rhs)
            }
        }
    )*};
}
owned_rhs!(Add add, Sub sub, Mul mul, Div div);

impl Scalar for RatFunc {
    fn from_i64(n: i64) -> Self {
        RatFunc::constant(BigRational::from_integer(n.into()))
    }

    fn render(&self) -> String {
        format!("{self:?}")
    }

    /// Rows are cleared of denominators, then fraction-free elimination
    /// runs over Laurent polynomials with exact divisions only.
    fn det(m: &Matrix<Self>) -> Self {
        let n = m.rows();
        let mut scale = LPoly::constant(BigRational::one());
        let mut a: Vec<Vec<LPoly>> = Vec::with_capacity(n);
        for r in 0..n {
            let mut common = LPoly::constant(BigRational::one());
            for x in m.row(r) {
                if common.div_exact(&x.den).is_none() {
                    common = &common * &x.den;
                }
            }
            let row = m.row(r).iter().map(|x| &x.num * &common.div_exact(&x.den).expect("denominator divides the row multiple")).collect();
            scale = &scale * &common;
            a.push(row);
        }
        let mut negate = false;
        let mut prev = LPoly::constant(BigRational::one());
        for k in 0..n {
            let Some(piv) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return RatFunc::zero();
            };
            if piv != k {
                a.swap(piv, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let x = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = x.div_exact(&prev).expect("fraction-free step divides exactly");
                }
            }
            prev = a[k][k].clone();
        }
        let det = if n == 0 { LPoly::constant(BigRational::one()) } else { a[n - 1][n - 1].clone() };
        let det = if negate { -det } else { det };
        RatFunc::new(det, scale)
    }
}
