//! Representations of the algebra and operator expressions evaluated in them.

use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A finite-dimensional representation: the generators `e_0 .. e_N` act on
/// coordinate vectors.
pub trait Rep<S: Scalar>: Sync {
    /// The chain length `N`.
    fn chain_len(&self) -> usize;
    fn dim(&self) -> usize;
    fn apply_e(&self, i: usize, v: &[S]) -> Vec<S>;

    fn e_matrix(&self, i: usize) -> Matrix<S> {
        Op::e(i).dense(self)
    }
}

/// Expression tree over the generators; products are read as matrix products.
#[derive(Clone, Debug, PartialEq)]
pub enum Op<S> {
    Id,
    E(usize),
    Lin(Vec<(S, Op<S>)>),
    Prod(Vec<Op<S>>),
}

impl<S: Scalar> Op<S> {
    pub fn e(i: usize) -> Self {
        Op::E(i)
    }

    pub fn scalar(c: S) -> Self {
        Op::Lin(vec![(c, Op::Id)])
    }

    /// `e_i - c`.
    pub fn shifted(i: usize, c: S) -> Self {
        Op::Lin(vec![(S::one(), Op::E(i)), (-c, Op::Id)])
    }

    /// `op - c`.
    pub fn shifted_op(op: Op<S>, c: S) -> Self {
        Op::Lin(vec![(S::one(), op), (-c, Op::Id)])
    }

    pub fn scale(self, c: S) -> Self {
        Op::Lin(vec![(c, self)])
    }

    /// Product of the factors in order, so `product([a, b])` is `a b`.
    pub fn product(factors: impl IntoIterator<Item = Op<S>>) -> Self {
        let mut out = Vec::new();
        for f in factors {
            match f {
                Op::Id => {}
                Op::Prod(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Op::Id,
            1 => out.pop().expect("one factor"),
            _ => Op::Prod(out),
        }
    }

    /// Word `e_{w_0} e_{w_1} ...`.
    pub fn word(letters: &[usize]) -> Self {
        Self::product(letters.iter().map(|&i| Op::E(i)))
    }

    /// `a b - b a`.
    pub fn commutator(a: &Op<S>, b: &Op<S>) -> Self {
        a.clone() * b.clone() - b.clone() * a.clone()
    }

    pub fn apply<R: Rep<S> + ?Sized>(&self, rep: &R, v: &[S]) -> Vec<S> {
        match self {
            Op::Id => v.to_vec(),
            Op::E(i) => rep.apply_e(*i, v),
            Op::Lin(terms) => {
                let mut acc = vec![S::zero(); v.len()];
                for (c, op) in terms {
                    if c.is_zero() {
                        continue;
                    }
                    let w = op.apply(rep, v);
                    for (a, x) in acc.iter_mut().zip(w) {
                        if !x.is_zero() {
                            *a = a.clone() + &(x * c);
                        }
                    }
                }
                acc
            }
            Op::Prod(factors) => {
                let mut w = v.to_vec();
                for f in factors.iter().rev() {
                    if w.iter().all(S::is_zero) {
                        break;
                    }
                    w = f.apply(rep, &w);
                }
                w
            }
        }
    }

    /// The matrix of the operator, built column by column.
    pub fn dense<R: Rep<S> + ?Sized>(&self, rep: &R) -> Matrix<S> {
        let n = rep.dim();
        let cols: Vec<Vec<S>> = (0..n).into_par_iter().map(|j| self.apply(rep, &unit(n, j))).collect();
        Matrix::from_columns(&cols)
    }
}

impl<S: Scalar> Mul for Op<S> {
    type Output = Op<S>;
    fn mul(self, rhs: Op<S>) -> Op<S> {
        Op::product([self, rhs])
    }
}

impl<S: Scalar> Add for Op<S> {
    type Output = Op<S>;
    fn add(self, rhs: Op<S>) -> Op<S> {
        let mut terms = match self {
            Op::Lin(t) => t,
            other => vec![(S::one(), other)],
        };
        match rhs {
            Op::Lin(t) => terms.extend(t),
            other => terms.push((S::one(), other)),
        }
        Op::Lin(terms)
    }
}

impl<S: Scalar> Neg for Op<S> {
    type Output = Op<S>;
    fn neg(self) -> Op<S> {
        self.scale(-S::one())
    }
}

impl<S: Scalar> Sub for Op<S> {
    type Output = Op<S>;
    fn sub(self, rhs: Op<S>) -> Op<S> {
        self + (-rhs)
    }
}

pub fn unit<S: Scalar>(n: usize, j: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[j] = S::one();
    v
}

pub fn is_zero_vec<S: Scalar>(v: &[S]) -> bool {
    v.iter().all(S::is_zero)
}

/// First coordinate where `a` and `b` disagree.
pub fn vec_difference<S: Scalar>(a: &[S], b: &[S]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| !x.same(y))
}

pub fn scale_vec<S: Scalar>(v: &[S], c: &S) -> Vec<S> {
    v.iter().map(|x| x.clone() * c).collect()
}

pub fn axpy<S: Scalar>(y: &[S], a: &S, x: &[S]) -> Vec<S> {
    y.iter().zip(x).map(|(yi, xi)| yi.clone() + &(xi.clone() * a)).collect()
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).fold(S::zero(), |acc, (x, y)| acc + &(x.clone() * y))
}

/// Compares two operators on every basis vector. Returns the first
/// `(row, column)` where they differ, scanning columns in order.
pub fn op_difference<S: Scalar, R: Rep<S> + ?Sized>(rep: &R, lhs: &Op<S>, rhs: &Op<S>) -> Option<(usize, usize)> {
    let n = rep.dim();
    (0..n).into_par_iter().find_map_first(|j| {
        let e = unit(n, j);
        vec_difference(&lhs.apply(rep, &e), &rhs.apply(rep, &e)).map(|r| (r, j))
    })
}

/// Deviation string for audit records: `None` when the operators agree.
pub fn op_deviation<S: Scalar, R: Rep<S> + ?Sized>(rep: &R, lhs: &Op<S>, rhs: &Op<S>) -> Option<String> {
    op_difference(rep, lhs, rhs).map(|(r, c)| format!("entry ({r},{c})"))
}

/// Representation given by explicit generator matrices.
#[derive(Clone)]
pub struct DenseRep<S> {
    chain: usize,
    mats: Vec<Matrix<S>>,
}

impl<S: Scalar> DenseRep<S> {
    pub fn new(mats: Vec<Matrix<S>>) -> Self {
        assert!(mats.len() >= 2, "need at least e_0 and e_1");
        let dim = mats[0].rows();
        assert!(mats.iter().all(|m| m.is_square() && m.rows() == dim), "generator shapes differ");
        DenseRep { chain: mats.len() - 1, mats }
    }

    pub fn from_rep<R: Rep<S> + ?Sized>(rep: &R) -> Self {
        Self::new((0..=rep.chain_len()).map(|i| rep.e_matrix(i)).collect())
    }

    pub fn matrices(&self) -> &[Matrix<S>] {
        &self.mats
    }
}

impl<S: Scalar> Rep<S> for DenseRep<S> {
    fn chain_len(&self) -> usize {
        self.chain
    }

    fn dim(&self) -> usize {
        self.mats[0].rows()
    }

    fn apply_e(&self, i: usize, v: &[S]) -> Vec<S> {
        self.mats[i].mul_vec(v)
    }

    fn e_matrix(&self, i: usize) -> Matrix<S> {
        self.mats[i].clone()
    }
}
