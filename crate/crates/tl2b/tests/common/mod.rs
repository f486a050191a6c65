//! Oracles written directly from the defining formulas, sharing no code
//! with the library beyond its data types.
#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Zero};
use tl2b::linalg::Matrix;
use tl2b::ParamPoint;

pub type Q = BigRational;
pub type Dense = Vec<Vec<Q>>;

pub fn int(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn pow(x: &Q, e: i64) -> Q {
    let base = if e < 0 { x.recip() } else { x.clone() };
    (0..e.abs()).fold(Q::one(), |acc, _| acc * &base)
}

/// Raw generators `q^{1/2}, q^{w1/2}, q^{w2/2}, q^{theta/2}`.
pub struct Raw {
    pub s: Q,
    pub a: Q,
    pub v: Q,
    pub t: Q,
}

impl Raw {
    pub fn of(p: &ParamPoint) -> Self {
        Raw { s: p.s.clone(), a: p.a.clone(), v: p.v.clone(), t: p.t.clone() }
    }

    /// `q^{(m + c1 w1 + c2 w2 + c3 theta)/2}`.
    pub fn mono(&self, m: i64, c1: i64, c2: i64, c3: i64) -> Q {
        pow(&self.s, m) * pow(&self.a, c1) * pow(&self.v, c2) * pow(&self.t, c3)
    }

    /// `[x]` for `x = (m + c1 w1 + c2 w2 + c3 theta)/2`.
    pub fn qn(&self, m: i64, c1: i64, c2: i64, c3: i64) -> Q {
        let q = pow(&self.s, 2);
        (self.mono(m, c1, c2, c3) - self.mono(-m, -c1, -c2, -c3)) / (q.clone() - q.recip())
    }

    pub fn delta(&self) -> Q {
        self.qn(4, 0, 0, 0)
    }

    pub fn s1(&self) -> Q {
        self.qn(0, 2, 0, 0) / self.qn(2, 2, 0, 0)
    }

    pub fn s2(&self) -> Q {
        self.qn(0, 0, 2, 0) / self.qn(2, 0, 2, 0)
    }

    /// `b` for chains of length `n`.
    pub fn b(&self, n: usize) -> Q {
        let den = self.qn(2, 2, 0, 0) * self.qn(2, 0, 2, 0);
        if n.is_multiple_of(2) {
            self.qn(1, 1, 1, 1) * self.qn(1, 1, 1, -1) / den
        } else {
            -(self.qn(0, 1, -1, 1) * self.qn(0, 1, -1, -1)) / den
        }
    }

    /// `[N][2 theta]/[theta]`.
    pub fn casimir(&self, n: usize) -> Q {
        self.qn(2 * n as i64, 0, 0, 0) * self.qn(0, 0, 0, 4) / self.qn(0, 0, 0, 2)
    }
}

/// Number of `+-1` walks of length `n` from 0 ending strictly above `m`.
pub fn walks_above(n: usize, m: i64) -> u64 {
    (0u64..1 << n).filter(|code| 2 * i64::from(code.count_ones()) - n as i64 > m).count() as u64
}

/// `M_N(m)`.
pub fn m_dim(n: usize, m: i64) -> u64 {
    walks_above(n, m.abs())
}

/// Closed-form Gram determinant of the big module, assembled from the
/// factor list with `M_N` from walk counts.
pub fn closed_form(raw: &Raw, n: usize) -> Q {
    let m = |h: i64| m_dim(n, h) as i64;
    let ni = n as i64;
    let alpha_power: i64 = -2 * (0..ni).map(|k| m(ni - 1 - 2 * k)).sum::<i64>();
    let mut acc = pow(&(raw.qn(0, 2, 0, 0) * raw.qn(2, 0, 2, 0)), alpha_power);
    let octet = |shift: i64| {
        let mut p = Q::one();
        for e1 in [1, -1] {
            for e2 in [1, -1] {
                for e3 in [1, -1] {
                    p *= raw.qn(shift, e1, e2, e3);
                }
            }
        }
        p
    };
    if n.is_multiple_of(2) {
        for k in 0..=(ni - 2) / 2 {
            acc *= pow(&octet(1 + 2 * k), m(2 * k + 1));
        }
    } else {
        let mut quartet = Q::one();
        for e2 in [1, -1] {
            for e3 in [1, -1] {
                quartet *= raw.qn(0, 1, e2, e3);
            }
        }
        acc *= pow(&quartet, 1 << (n - 1));
        for k in 1..=(ni - 1) / 2 {
            acc *= pow(&octet(2 * k), m(2 * k));
        }
    }
    acc
}

pub fn dense(m: &Matrix<Q>) -> Dense {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![Q::zero(); n];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    if !y.is_zero() {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

pub fn scale(a: &Dense, c: &Q) -> Dense {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn product(ms: &[&Dense]) -> Dense {
    let mut it = ms.iter();
    let first = (*it.next().expect("nonempty product")).clone();
    it.fold(first, |acc, m| mul(&acc, m))
}

/// Determinant by Gaussian elimination with row pivoting.
pub fn det(m: &Dense) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut acc = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            acc = -acc;
        }
        let pivot = a[c][c].clone();
        acc *= &pivot;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pivot;
            for k in c..n {
                if a[c][k].is_zero() {
                    continue;
                }
                let d = &f * &a[c][k];
                a[r][k] -= d;
            }
        }
    }
    acc
}

/// Cofactor expansion along the first row.
pub fn det_cofactor(m: &Dense) -> Q {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Q::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Dense = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][j] * det_cofactor(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

pub fn is_scalar_multiple_of_identity(m: &Dense, c: &Q) -> bool {
    m.iter().enumerate().all(|(r, row)| row.iter().enumerate().all(|(k, x)| if r == k { x == c } else { x.is_zero() }))
}
