//! Exponents, parameter points and q-numbers.
//!
//! The four generators are `s = q^{1/2}`, `a = q^{w1/2}`, `v = q^{w2/2}` and
//! `t = q^{theta/2}`, so every exponent in play is a Laurent monomial in them.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Scalar};
use crate::symbolic::RatFunc;

/// Exponent `x = (m + c1 w1 + c2 w2 + c3 theta) / 2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfExponent {
    pub m: i32,
    pub c1: i32,
    pub c2: i32,
    pub c3: i32,
}

impl HalfExponent {
    pub const ZERO: HalfExponent = HalfExponent::new(0, 0, 0, 0);
    pub const OMEGA1: HalfExponent = HalfExponent::new(0, 2, 0, 0);
    pub const OMEGA2: HalfExponent = HalfExponent::new(0, 0, 2, 0);
    pub const THETA: HalfExponent = HalfExponent::new(0, 0, 0, 2);

    pub const fn new(m: i32, c1: i32, c2: i32, c3: i32) -> Self {
        HalfExponent { m, c1, c2, c3 }
    }

    /// The integer exponent `n`.
    pub const fn int(n: i32) -> Self {
        HalfExponent::new(2 * n, 0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    pub fn height(&self) -> i32 {
        self.m.abs().max(self.c1.abs()).max(self.c2.abs()).max(self.c3.abs())
    }

    /// `x / 2`, when every entry is even.
    pub fn halve(&self) -> Option<Self> {
        let all_even = [self.m, self.c1, self.c2, self.c3].iter().all(|x| x % 2 == 0);
        all_even.then(|| HalfExponent::new(self.m / 2, self.c1 / 2, self.c2 / 2, self.c3 / 2))
    }
}

impl fmt::Display for HalfExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}w1 + {}w2 + {}th)/2", self.m, self.c1, self.c2, self.c3)
    }
}

impl Add for HalfExponent {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        HalfExponent::new(self.m + o.m, self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3)
    }
}

impl Sub for HalfExponent {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for HalfExponent {
    type Output = Self;
    fn neg(self) -> Self {
        HalfExponent::new(-self.m, -self.c1, -self.c2, -self.c3)
    }
}

impl Mul<i32> for HalfExponent {
    type Output = Self;
    fn mul(self, k: i32) -> Self {
        HalfExponent::new(self.m * k, self.c1 * k, self.c2 * k, self.c3 * k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Values of the parameters the algebra relations are written in.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedParams<S> {
    pub delta: S,
    pub s1: S,
    pub s2: S,
    pub b_even: S,
    pub b_odd: S,
}

impl<S: Scalar> DerivedParams<S> {
    pub fn b(&self, parity: Parity) -> &S {
        match parity {
            Parity::Even => &self.b_even,
            Parity::Odd => &self.b_odd,
        }
    }
}

/// Evaluation context: the four generators in some scalar field.
#[derive(Clone, Debug)]
pub struct Ctx<S> {
    gens: [S; 4],
    invs: [S; 4],
    qq: S,
}

impl<S: Scalar> Ctx<S> {
    pub fn new(s: S, a: S, v: S, t: S) -> Result<Self> {
        let names = ["s", "a", "v", "t"];
        let gens = [s, a, v, t];
        let mut invs = Vec::with_capacity(4);
        for (g, name) in gens.iter().zip(names) {
            invs.push(g.inv().ok_or(Error::ZeroParameter(name))?);
        }
        let invs: [S; 4] = invs.try_into().expect("four inverses");
        let q = gens[0].clone() * &gens[0];
        let qinv = invs[0].clone() * &invs[0];
        let qq = q - &qinv;
        if qq.is_zero() {
            return Err(Error::DegenerateQ);
        }
        Ok(Ctx { gens, invs, qq })
    }

    /// The context at `q^{-1/2}, q^{-w1/2}, q^{-w2/2}, q^{-theta/2}`.
    pub fn inverted(&self) -> Self {
        Ctx { gens: self.invs.clone(), invs: self.gens.clone(), qq: -self.qq.clone() }
    }

    pub fn gens(&self) -> &[S; 4] {
        &self.gens
    }

    /// `q^x`.
    pub fn mono(&self, x: HalfExponent) -> S {
        let mut acc = S::one();
        for (k, e) in [x.m, x.c1, x.c2, x.c3].into_iter().enumerate() {
            let base = if e < 0 { &self.invs[k] } else { &self.gens[k] };
            for _ in 0..e.unsigned_abs() {
                acc = acc * base;
            }
        }
        acc
    }

    pub fn q(&self) -> S {
        self.mono(HalfExponent::int(1))
    }

    /// `q - q^{-1}`.
    pub fn q_minus_qinv(&self) -> &S {
        &self.qq
    }

    /// `(X - X^{-1}) / (q - q^{-1})` for a nonzero `X`.
    pub fn qnum_of(&self, big_x: &S) -> S {
        let inv = big_x.inv().expect("q-number of a zero monomial");
        (big_x.clone() - &inv) / &self.qq
    }

    /// The q-number `[x]`.
    pub fn qnum(&self, x: HalfExponent) -> S {
        (self.mono(x) - &self.mono(-x)) / &self.qq
    }

    fn nonzero_qnum(&self, x: HalfExponent) -> Result<S> {
        let v = self.qnum(x);
        if v.is_zero() {
            Err(Error::NonGeneric(x))
        } else {
            Ok(v)
        }
    }

    pub fn delta(&self) -> S {
        self.qnum(HalfExponent::int(2))
    }

    pub fn derived(&self) -> Result<DerivedParams<S>> {
        let w1p1 = self.nonzero_qnum(HalfExponent::new(2, 2, 0, 0))?;
        let w2p1 = self.nonzero_qnum(HalfExponent::new(2, 0, 2, 0))?;
        let s1 = self.qnum(HalfExponent::OMEGA1) / &w1p1;
        let s2 = self.qnum(HalfExponent::OMEGA2) / &w2p1;
        let denom = w1p1 * &w2p1;
        let b_even = self.qnum(HalfExponent::new(1, 1, 1, 1)) * &self.qnum(HalfExponent::new(1, 1, 1, -1)) / &denom;
        let b_odd = -(self.qnum(HalfExponent::new(0, 1, -1, 1)) * &self.qnum(HalfExponent::new(0, 1, -1, -1))) / &denom;
        Ok(DerivedParams { delta: self.delta(), s1, s2, b_even, b_odd })
    }
}

impl Ctx<RatFunc> {
    /// Fully symbolic context with `s, a, v, t` as indeterminates.
    pub fn symbolic() -> Self {
        Ctx::new(RatFunc::var(0), RatFunc::var(1), RatFunc::var(2), RatFunc::var(3)).expect("indeterminates are nonzero")
    }
}

/// Exact rational specialization of the four generators.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPoint {
    pub s: BigRational,
    pub a: BigRational,
    pub v: BigRational,
    pub t: BigRational,
    pub bound: u32,
}

/// Default genericity bound for chain length `n`.
pub fn default_bound(n: usize) -> u32 {
    4 * n as u32 + 4
}

impl ParamPoint {
    /// Validating constructor: runs the full genericity scan.
    pub fn new(s: BigRational, a: BigRational, v: BigRational, t: BigRational, bound: u32) -> Result<Self> {
        let p = ParamPoint { s, a, v, t, bound };
        p.check_basic()?;
        if let Some(x) = p.find_relation(true) {
            return Err(Error::NonGeneric(x));
        }
        Ok(p)
    }

    /// Accepts a forced `t`; only exponents free of theta are scanned.
    pub fn with_theta_unchecked(base: &ParamPoint, t: BigRational) -> Result<Self> {
        let p = ParamPoint { t, ..base.clone() };
        p.check_basic()?;
        if let Some(x) = p.find_relation(false) {
            return Err(Error::NonGeneric(x));
        }
        Ok(p)
    }

    fn check_basic(&self) -> Result<()> {
        for (x, name) in [(&self.s, "s"), (&self.a, "a"), (&self.v, "v"), (&self.t, "t")] {
            if x.is_zero() {
                return Err(Error::ZeroParameter(name));
            }
        }
        let s4 = self.s.powi(4).expect("nonzero");
        if s4.is_one() {
            return Err(Error::DegenerateQ);
        }
        if self.bound == 0 {
            return Err(Error::Invalid("genericity bound must be positive".into()));
        }
        Ok(())
    }

    /// The point with every generator inverted, i.e. `q -> q^{-1}`.
    pub fn inverted(&self) -> ParamPoint {
        ParamPoint { s: self.s.recip(), a: self.a.recip(), v: self.v.recip(), t: self.t.recip(), bound: self.bound }
    }

    pub fn ctx(&self) -> Ctx<BigRational> {
        Ctx::new(self.s.clone(), self.a.clone(), self.v.clone(), self.t.clone()).expect("validated point")
    }

    pub fn ctx_f64(&self) -> Ctx<f64> {
        use num_traits::ToPrimitive;
        let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        Ctx::new(f(&self.s), f(&self.a), f(&self.v), f(&self.t)).expect("validated point")
    }

    pub fn values(&self) -> [BigRational; 4] {
        [self.s.clone(), self.a.clone(), self.v.clone(), self.t.clone()]
    }

    /// A nonzero exponent of height at most `bound` with `q^x = +-1`, if any.
    /// With `with_theta = false` only exponents without theta are searched.
    pub fn find_relation(&self, with_theta: bool) -> Option<HalfExponent> {
        let vals = self.values();
        let vecs = multiplicative_vectors(&vals);
        let b = self.bound as i32;
        let combine =
            |x: i32, u: &[i64], y: i32, w: &[i64]| -> Vec<i64> { u.iter().zip(w).map(|(p, r)| x as i64 * p + y as i64 * r).collect() };
        let mut left: HashMap<Vec<i64>, Vec<(i32, i32)>> = HashMap::new();
        for m in -b..=b {
            for c1 in -b..=b {
                left.entry(combine(m, &vecs[0], c1, &vecs[1])).or_default().push((m, c1));
            }
        }
        let c3_range = if with_theta { -b..=b } else { 0..=0 };
        for c2 in -b..=b {
            for c3 in c3_range.clone() {
                let w: Vec<i64> = combine(c2, &vecs[2], c3, &vecs[3]).into_iter().map(|x| -x).collect();
                if let Some(hits) = left.get(&w) {
                    for &(m, c1) in hits {
                        let x = HalfExponent::new(m, c1, c2, c3);
                        if !x.is_zero() {
                            return Some(x);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ParamPointJson::from(self)).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: ParamPointJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let parse = |x: &str| parse_rational(x).ok_or_else(|| Error::Parse(format!("bad rational {x:?}")));
        ParamPoint::new(parse(&raw.s)?, parse(&raw.a)?, parse(&raw.v)?, parse(&raw.t)?, raw.bound)
    }
}

#[derive(Serialize, Deserialize)]
struct ParamPointJson {
    s: String,
    a: String,
    v: String,
    t: String,
    bound: u32,
}

impl From<&ParamPoint> for ParamPointJson {
    fn from(p: &ParamPoint) -> Self {
        ParamPointJson { s: p.s.render(), a: p.a.render(), v: p.v.render(), t: p.t.render(), bound: p.bound }
    }
}

/// Exponent vectors of the values over a pairwise coprime basis, so that a
/// product of integer powers is `+-1` exactly when the vectors cancel.
fn multiplicative_vectors(vals: &[BigRational; 4]) -> Vec<Vec<i64>> {
    let mut pool: Vec<BigUint> = Vec::new();
    for x in vals {
        for part in [x.numer(), x.denom()] {
            let u = part.abs().to_biguint().expect("absolute value");
            if u > BigUint::one() {
                pool.push(u);
            }
        }
    }
    let basis = coprime_basis(pool);
    vals.iter()
        .map(|x| {
            let num = exponents_over(&basis, x.numer());
            let den = exponents_over(&basis, x.denom());
            num.iter().zip(&den).map(|(a, b)| a - b).collect()
        })
        .collect()
}

fn coprime_basis(mut list: Vec<BigUint>) -> Vec<BigUint> {
    loop {
        let mut split = None;
        'search: for i in 0..list.len() {
            for j in i + 1..list.len() {
                let g = list[i].gcd(&list[j]);
                if g > BigUint::one() {
                    split = Some((i, j, g));
                    break 'search;
                }
            }
        }
        let Some((i, j, g)) = split else { break };
        let x = &list[i] / &g;
        let y = &list[j] / &g;
        list.remove(j);
        list.remove(i);
        for z in [x, y, g] {
            if z > BigUint::one() {
                list.push(z);
            }
        }
    }
    list.sort();
    list
}

fn exponents_over(basis: &[BigUint], n: &BigInt) -> Vec<i64> {
    let mut rest = n.abs().to_biguint().expect("absolute value");
    let mut out = vec![0i64; basis.len()];
    for (k, p) in basis.iter().enumerate() {
        while (&rest % p).is_zero() {
            rest /= p;
            out[k] += 1;
        }
    }
    debug_assert!(rest.is_one(), "value does not factor over its coprime basis");
    out
}

/// Number of draws `make_param_point` attempts before giving up.
pub const RETRY_BUDGET: usize = 256;

/// Deterministic pseudo-random generic point with heights at most 97.
pub fn make_param_point(seed: u64, bound: u32) -> Result<ParamPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_BUDGET {
        let vals: Vec<BigRational> = (0..4).map(|_| draw_rational(&mut rng)).collect();
        let [s, a, v, t]: [BigRational; 4] = vals.try_into().expect("four draws");
        if let Ok(p) = ParamPoint::new(s, a, v, t, bound) {
            return Ok(p);
        }
    }
    Err(Error::RetryBudget(RETRY_BUDGET))
}

/// The left-boundary twist `tbar` for a seed, drawn from a separate stream.
pub fn make_twist(seed: u64) -> BigRational {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    draw_rational(&mut rng)
}

/// Random positive rational `p/q` with coprime `1 <= p, q <= 97`, not 1.
pub fn draw_rational<R: Rng>(rng: &mut R) -> BigRational {
    loop {
        let p: i64 = rng.gen_range(1..=97);
        let q: i64 = rng.gen_range(1..=97);
        if p != q && p.gcd(&q) == 1 {
            return BigRational::new(p.into(), q.into());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn point() -> ParamPoint {
        ParamPoint::new(rat(3, 2), rat(5, 7), rat(11, 13), rat(17, 19), 12).unwrap()
    }

    #[test]
    fn small_q_numbers() {
        let c = point().ctx();
        assert!(c.qnum(HalfExponent::ZERO).is_zero());
        assert_eq!(c.qnum(HalfExponent::int(1)), BigRational::one());
        assert_eq!(c.qnum(HalfExponent::int(2)), c.q() + c.q().recip());
    }

    #[test]
    fn scan_rejects_resonant_points() {
        // s * v = 1 makes [w2 + 1] vanish.
        let err = ParamPoint::new(rat(3, 2), rat(5, 7), rat(2, 3), rat(17, 19), 8).unwrap_err();
        assert!(matches!(err, Error::NonGeneric(_)));
        let err = ParamPoint::new(rat(1, 1), rat(5, 7), rat(11, 13), rat(17, 19), 8).unwrap_err();
        assert_eq!(err, Error::DegenerateQ);
        let base = point();
        let t = &base.s * &base.a * &base.v;
        assert!(ParamPoint::new(base.s.clone(), base.a.clone(), base.v.clone(), t.clone(), 4).is_err());
        assert!(ParamPoint::with_theta_unchecked(&base, t).is_ok());
    }

    #[test]
    fn found_relation_really_is_one() {
        let p = ParamPoint { s: rat(4, 9), a: rat(2, 3), v: rat(5, 1), t: rat(7, 5), bound: 6 };
        let x = p.find_relation(true).expect("a^2 = s");
        let m = p.ctx().mono(x);
        assert_eq!(m.abs(), BigRational::one());
    }

    #[test]
    fn json_round_trip() {
        let p = make_param_point(1, 20).unwrap();
        let back = ParamPoint::from_json(&p.to_json()).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn derived_parameters() {
        let c = point().ctx();
        let d = c.derived().unwrap();
        let w1 = c.qnum(HalfExponent::OMEGA1);
        let w1p1 = c.qnum(HalfExponent::new(2, 2, 0, 0));
        assert_eq!(d.s1.clone() * &w1p1, w1);
        let w2p1 = c.qnum(HalfExponent::new(2, 0, 2, 0));
        let lhs = d.b_even.clone() * &w1p1 * &w2p1;
        let rhs = c.qnum(HalfExponent::new(1, 1, 1, 1)) * &c.qnum(HalfExponent::new(1, 1, 1, -1));
        assert_eq!(lhs, rhs);
    }
}
