//! The `2^N`-dimensional spin-chain representation and its identification
//! with `W^(N)(b)` through the path basis.

use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::hecke::{central_value, centre_audit, lift_to_hecke, murphy, MurphyKind};
use crate::linalg::Matrix;
use crate::params::{Ctx, DerivedParams, HalfExponent, Parity};
use crate::pathbasis::{build_b1, fundamental_vector, idempotent_e, Spectral, TileOrder};
use crate::rep::{scale_vec, vec_difference, Op, Rep};
use crate::report::Audit;
use crate::scalar::Scalar;
use crate::wordrep::{relation_audit, ModuleSpec, QuotientCheck, WordRep};

/// Local kernels of the generators; bit `i-1` of an index is 1 when site
/// `i` carries an up spin.
#[derive(Clone, Debug)]
pub struct SpinChain<S> {
    n: usize,
    /// `left[out][in]` on site 1 with index 0 = up, 1 = down.
    left: [[S; 2]; 2],
    right: [[S; 2]; 2],
    q: S,
    qinv: S,
}

/// Below this dimension operators are applied sequentially.
const PARALLEL_DIM: usize = 1 << 10;

fn boundary_denominator<S: Scalar>(ctx: &Ctx<S>, omega: HalfExponent) -> Result<S> {
    let x = omega + HalfExponent::int(1);
    let d = ctx.mono(x) - &ctx.mono(-x);
    if d.is_zero() {
        Err(Error::Singular(format!("boundary denominator q^x - q^-x vanishes at x = {x}")))
    } else {
        Ok(d)
    }
}

impl<S: Scalar> SpinChain<S> {
    pub fn new(ctx: &Ctx<S>, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid("the spin chain needs at least two sites".into()));
        }
        let a = ctx.mono(HalfExponent::OMEGA1);
        let ai = ctx.mono(-HalfExponent::OMEGA1);
        let v = ctx.mono(HalfExponent::OMEGA2);
        let vi = ctx.mono(-HalfExponent::OMEGA2);
        let th = ctx.mono(HalfExponent::THETA);
        let thi = ctx.mono(-HalfExponent::THETA);
        let d0 = boundary_denominator(ctx, HalfExponent::OMEGA1)?;
        let dn = boundary_denominator(ctx, HalfExponent::OMEGA2)?;
        let left = [[-ai / &d0, S::one() / d0.clone()], [-S::one() / d0.clone(), a / &d0]];
        let right = [[v / &dn, -th / &dn], [thi / &dn, -vi / &dn]];
        Ok(SpinChain { n, left, right, q: ctx.q(), qinv: ctx.mono(HalfExponent::int(-1)) })
    }

    fn site_kernel(&self, m: &[[S; 2]; 2], bit: usize, v: &[S], c: usize) -> S {
        let out = if c >> bit & 1 == 1 { 0 } else { 1 };
        let up = c | 1 << bit;
        let down = c & !(1 << bit);
        m[out][0].clone() * &v[up] + &(m[out][1].clone() * &v[down])
    }

    fn bulk_kernel(&self, i: usize, v: &[S], c: usize) -> S {
        let (a, b) = (c >> (i - 1) & 1, c >> i & 1);
        let swapped = c ^ (1 << (i - 1)) ^ (1 << i);
        match (a, b) {
            (1, 0) => self.qinv.clone() * &v[c] - &v[swapped],
            (0, 1) => self.q.clone() * &v[c] - &v[swapped],
            _ => S::zero(),
        }
    }

    fn kernel(&self, i: usize, v: &[S], c: usize) -> S {
        if i == 0 {
            self.site_kernel(&self.left, 0, v, c)
        } else if i == self.n {
            self.site_kernel(&self.right, self.n - 1, v, c)
        } else {
            self.bulk_kernel(i, v, c)
        }
    }
}

impl<S: Scalar> Rep<S> for SpinChain<S> {
    fn chain_len(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        1 << self.n
    }

    fn apply_e(&self, i: usize, v: &[S]) -> Vec<S> {
        let dim = self.dim();
        if dim >= PARALLEL_DIM {
            (0..dim).into_par_iter().map(|c| self.kernel(i, v, c)).collect()
        } else {
            (0..dim).map(|c| self.kernel(i, v, c)).collect()
        }
    }
}

fn kron<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = Matrix::zeros(ra * rb, ca * cb);
    for ((i, j), x) in a.entries() {
        if x.is_zero() {
            continue;
        }
        for ((k, l), y) in b.entries() {
            out[(i * rb + k, j * cb + l)] = x.clone() * y;
        }
    }
    out
}

/// Pauli-type matrices in the bit order (index 0 = down, 1 = up).
fn sigma<S: Scalar>(which: char) -> Matrix<S> {
    let (z, o) = (S::zero(), S::one());
    let rows = match which {
        '+' => vec![vec![z.clone(), z.clone()], vec![o, z]],
        '-' => vec![vec![z.clone(), o], vec![z.clone(), z]],
        'z' => vec![vec![-o.clone(), z.clone()], vec![z, o]],
        _ => vec![vec![o.clone(), z.clone()], vec![z, o]],
    };
    Matrix::from_rows(rows)
}

/// `ops` placed on consecutive sites starting at `site`, identity elsewhere.
fn embed<S: Scalar>(n: usize, site: usize, ops: &[Matrix<S>]) -> Matrix<S> {
    let mut out = Matrix::identity(1);
    for s in (1..=n).rev() {
        let f = if s >= site && s < site + ops.len() { ops[s - site].clone() } else { sigma('1') };
        out = kron(&out, &f);
    }
    out
}

/// Dense generators assembled from the Pauli-matrix expressions, with the
/// bulk generators carrying the overall sign that makes `e_i^2 = [2] e_i`.
pub fn dense_spin_generators<S: Scalar>(ctx: &Ctx<S>, n: usize) -> Result<Vec<Matrix<S>>> {
    let half = S::one() / S::from_i64(2);
    let quarter = S::one() / S::from_i64(4);
    let sum = |x: HalfExponent| ctx.mono(x) + &ctx.mono(-x);
    let diff = |x: HalfExponent| ctx.mono(x) - &ctx.mono(-x);
    let w1 = HalfExponent::OMEGA1;
    let w2 = HalfExponent::OMEGA2;
    let one = HalfExponent::int(1);
    let id = Matrix::identity(1 << n);
    let d0 = boundary_denominator(ctx, w1)?;
    let e0 = embed(n, 1, &[sigma('+')])
        .sub(&embed(n, 1, &[sigma('-')]))
        .sub(&embed(n, 1, &[sigma('z')]).scale(&(sum(w1) * &half)))
        .add(&id.scale(&(diff(w1) * &half)))
        .scale(&(S::one() / d0));
    let mut out = vec![e0];
    for i in 1..n {
        let zz = embed(n, i, &[sigma('z'), sigma('z')]);
        let printed = embed(n, i, &[sigma('+'), sigma('-')])
            .add(&embed(n, i, &[sigma('-'), sigma('+')]))
            .add(&zz.sub(&id).scale(&(sum(one) * &quarter)))
            .add(&embed(n, i, &[sigma('z')]).sub(&embed(n, i + 1, &[sigma('z')])).scale(&(diff(one) * &quarter)));
        out.push(printed.scale(&-S::one()));
    }
    let dn = boundary_denominator(ctx, w2)?;
    let th = ctx.mono(HalfExponent::THETA);
    let thi = ctx.mono(-HalfExponent::THETA);
    let en = embed(n, n, &[sigma('+')])
        .scale(&-th)
        .add(&embed(n, n, &[sigma('-')]).scale(&thi))
        .add(&embed(n, n, &[sigma('z')]).scale(&(sum(w2) * &half)))
        .add(&id.scale(&(diff(w2) * &half)))
        .scale(&(S::one() / dn));
    out.push(en);
    Ok(out)
}

/// The product vector `Ebar_N`: `(q^{-w1} up + down)` on odd sites and
/// `(q^{w1+1} up + down)` on even sites.
pub fn ebar<S: Scalar>(ctx: &Ctx<S>, n: usize) -> Vec<S> {
    let odd = ctx.mono(-HalfExponent::OMEGA1);
    let even = ctx.mono(HalfExponent::OMEGA1 + HalfExponent::int(1));
    (0usize..1 << n)
        .map(|c| (1..=n).filter(|s| c >> (s - 1) & 1 == 1).fold(S::one(), |acc, s| acc * if s % 2 == 1 { &odd } else { &even }))
        .collect()
}

/// Bit string with site 1 first, `1` for up.
pub fn bitstring(n: usize, c: usize) -> String {
    (1..=n).map(|s| if c >> (s - 1) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Sparse JSON form of a spin vector.
pub fn spin_vector_json<S: Scalar>(n: usize, v: &[S]) -> Value {
    let mut m = Map::new();
    for (c, x) in v.iter().enumerate() {
        if !x.is_zero() {
            m.insert(bitstring(n, c), Value::String(x.render()));
        }
    }
    Value::Object(m)
}

/// `U e_i U^{-1} = e_i` for the bulk generators, `U = diag(alpha, 1/alpha)^{tensor N}`.
pub fn u1_audit<S: Scalar>(chain: &SpinChain<S>, alpha: &S) -> Result<Audit> {
    let n = chain.n;
    alpha.inv().ok_or(Error::ZeroParameter("alpha"))?;
    let weight = |c: usize| {
        let up = c.count_ones() as i64;
        alpha.powi(2 * up - n as i64).expect("alpha is nonzero")
    };
    let mut audit = Audit::new();
    for i in 1..n {
        let dev = (0..chain.dim()).find_map(|j| {
            let col = crate::rep::unit(chain.dim(), j);
            let plain = chain.apply_e(i, &col);
            let twisted: Vec<S> = plain.iter().enumerate().map(|(r, x)| x.clone() * &weight(r) / &weight(j)).collect();
            vec_difference(&twisted, &plain).map(|r| format!("entry ({r},{j})"))
        });
        audit.record(format!("spin.u1.e{i}"), "U e_i U^{-1} = e_i", dev);
    }
    Ok(audit)
}

/// Local application against the dense Pauli-matrix assembly.
pub fn dense_agreement_audit<S: Scalar>(ctx: &Ctx<S>, chain: &SpinChain<S>) -> Result<Audit> {
    let dense = dense_spin_generators(ctx, chain.n)?;
    let mut audit = Audit::new();
    for (i, m) in dense.iter().enumerate() {
        let local = Op::e(i).dense(chain);
        audit.record(
            format!("spin.dense.e{i}"),
            "local kernel = dense operator",
            local.first_difference(m).map(|(r, c)| format!("entry ({r},{c})")),
        );
    }
    Ok(audit)
}

/// Relations, the `Ebar_N` identities, equality of structure constants in the
/// two path bases and the value of `Z_N`.
pub fn equivalence_audit<S: Scalar>(ctx: &Ctx<S>, sp: &Spectral<S>, n: usize) -> Result<Audit> {
    let params: DerivedParams<S> = ctx.derived()?;
    let b = params.b(Parity::of(n)).clone();
    let chain = SpinChain::new(ctx, n)?;
    let mut audit = relation_audit(&chain, &params, &QuotientCheck::Scalar(b.clone()));
    for e in &mut audit.entries {
        e.identity_id = format!("spin.{}", e.identity_id);
    }
    let eb = ebar(ctx, n);
    for i in 0..=n {
        let ei = idempotent_e(i, &params);
        audit.record(
            format!("spin.ebar.E{i}"),
            "E_i Ebar_N = Ebar_N",
            vec_difference(&ei.apply(&chain, &eb), &eb).map(|r| format!("coordinate {r}")),
        );
    }
    audit.record(
        "spin.ebar.e0",
        "e_0 Ebar_N = s1 Ebar_N",
        vec_difference(&chain.apply_e(0, &eb), &scale_vec(&eb, &params.s1)).map(|r| format!("coordinate {r}")),
    );
    let w1 = HalfExponent::OMEGA1;
    let one = HalfExponent::int(1);
    let m = n - 1;
    let (a, bb, c) = if n.is_multiple_of(2) { (-w1 - one, w1 - one, w1) } else { (w1, -w1 - one * 2, -w1 - one) };
    let zero = vec![S::zero(); chain.dim()];
    let single = Op::product([Op::e(m), sp.kn_op(n, a)?]).apply(&chain, &eb);
    audit.record(
        "spin.vanishing.boundary.single",
        "e_{N-1} K_N(u) Ebar_N = 0",
        vec_difference(&single, &zero).map(|r| format!("coordinate {r}")),
    );
    let double = Op::product([Op::e(m), sp.kn_op(n, bb)?, sp.r_op(m, c)?]).apply(&chain, &eb);
    audit.record(
        "spin.vanishing.boundary.double",
        "e_{N-1} K_N(u-1) R_{N-1}(u) Ebar_N = 0",
        vec_difference(&double, &zero).map(|r| format!("coordinate {r}")),
    );

    let big = WordRep::new(ModuleSpec::big(n, b), &params)?;
    let start = fundamental_vector(&big, &params, 0)?;
    let b1 = build_b1(&big, sp, &start, TileOrder::Canonical)?;
    let b1bar = build_b1(&chain, sp, &eb, TileOrder::Canonical)?;
    let lu = b1.solver()?;
    let lubar = b1bar.solver()?;
    for i in 0..=n {
        let lhs = b1bar.generator_in_basis(&chain, &lubar, i);
        let rhs = b1.generator_in_basis(&big, &lu, i);
        let dev = lhs.first_difference(&rhs).map(|(r, c)| format!("entry ({}, {})", b1.paths()[r], b1.paths()[c]));
        audit.record(format!("spin.equivalence.e{i}"), "e_i in B1bar coordinates = e_i in B1 coordinates", dev);
    }
    let fam = murphy(MurphyKind::C, &lift_to_hecke(ctx, n));
    let z = central_value(ctx, n, HalfExponent::THETA);
    for mut e in centre_audit(&chain, &fam, Some(&z)).entries {
        e.identity_id = format!("spin.{}", e.identity_id);
        audit.entries.push(e);
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamPoint;
    use crate::scalar::rat;
    use num_rational::BigRational;

    fn ctx() -> Ctx<BigRational> {
        ParamPoint::new(rat(3, 2), rat(5, 7), rat(11, 13), rat(17, 19), 12).unwrap().ctx()
    }

    #[test]
    fn local_action_examples() {
        let c = ctx();
        let chain = SpinChain::new(&c, 2).unwrap();
        let updown = crate::rep::unit(4, 0b01);
        let out = chain.apply_e(1, &updown);
        let qi = c.mono(HalfExponent::int(-1));
        assert_eq!(out, vec![rat(0, 1), qi, rat(-1, 1), rat(0, 1)]);
        assert!(chain.apply_e(1, &crate::rep::unit(4, 0b11)).iter().all(|x| *x == rat(0, 1)));
        assert_eq!(ebar(&c, 1), vec![rat(1, 1), c.mono(-HalfExponent::OMEGA1)]);
        assert_eq!(bitstring(3, 0b001), "100");
    }

    #[test]
    fn dense_and_u1() {
        let c = ctx();
        for n in 2..5 {
            let chain = SpinChain::new(&c, n).unwrap();
            let a = dense_agreement_audit(&c, &chain).unwrap();
            assert!(a.all_pass(), "{:?}", a.first_failure());
            let a = u1_audit(&chain, &rat(2, 3)).unwrap();
            assert!(a.all_pass(), "{:?}", a.first_failure());
        }
    }

    #[test]
    fn equivalence_small() {
        let c = ctx();
        let sp = Spectral::new(c.clone(), rat(23, 29)).unwrap();
        for n in 2..5 {
            let a = equivalence_audit(&c, &sp, n).unwrap();
            assert!(a.all_pass(), "N={n}: {:?}", a.failures().collect::<Vec<_>>());
        }
    }
}
