//! Half-diagram modules, their generator matrices and Gram matrices.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::diagrams::{act_on_half, bilinear_form, Glyph, HalfDiagram, Site};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseMat};
use crate::params::DerivedParams;
use crate::rep::{op_deviation, Op, Rep};
use crate::report::Audit;
use crate::scalar::Scalar;

/// Ballot number `B_{m,n}`.
pub fn ballot(m: i64, n: i64) -> u128 {
    if m < 0 || n.abs() > m || (m - n) % 2 != 0 {
        return 0;
    }
    binomial(m as u64, ((m - n) / 2) as u64)
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// `M_m(n)`, the dimension of the irreducible modules.
pub fn irrep_dim(m: i64, n: i64) -> u128 {
    let n = n.abs();
    if m + 1 < n {
        return 0;
    }
    (1..=(m + 1 - n) / 2).map(|i| ballot(m, n + 2 * i - 1)).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModuleKind<S> {
    /// Half-diagrams with `n + (eps1 + eps2)/2` through lines and boundary parities `(eps1, eps2)`.
    ThroughLines { n: usize, eps1: i8, eps2: i8 },
    /// All `2^N` half-diagrams without through lines, horizontal-line pairs removed with `b`.
    Big(S),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleSpec<S> {
    pub chain: usize,
    pub kind: ModuleKind<S>,
}

impl<S: Scalar> ModuleSpec<S> {
    pub fn big(chain: usize, b: S) -> Self {
        ModuleSpec { chain, kind: ModuleKind::Big(b) }
    }

    pub fn through_lines(chain: usize, n: usize, eps1: i8, eps2: i8) -> Result<Self> {
        let spec = ModuleSpec { chain, kind: ModuleKind::ThroughLines { n, eps1, eps2 } };
        spec.validate()?;
        Ok(spec)
    }

    /// Number of through lines, `None` for the big module.
    pub fn through_count(&self) -> Option<usize> {
        match self.kind {
            ModuleKind::ThroughLines { n, eps1, eps2 } => Some((n as i64 + i64::from(eps1 + eps2) / 2) as usize),
            ModuleKind::Big(_) => None,
        }
    }

    pub fn quotient_b(&self) -> Option<&S> {
        match &self.kind {
            ModuleKind::Big(b) => Some(b),
            ModuleKind::ThroughLines { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.chain == 0 {
            return Err(Error::Invalid("chain length must be positive".into()));
        }
        if let ModuleKind::ThroughLines { n, eps1, eps2 } = self.kind {
            if ![1, -1].contains(&eps1) || ![1, -1].contains(&eps2) {
                return Err(Error::Invalid("boundary parities must be +1 or -1".into()));
            }
            let t = n as i64 + i64::from(eps1 + eps2) / 2;
            let parity = if (self.chain as i64 - t) % 2 == 0 { 1 } else { -1 };
            if t < 1 || t > self.chain as i64 || eps1 * eps2 != parity {
                return Err(Error::Invalid(format!("no half-diagrams with n = {n}, parities ({eps1},{eps2}) on {} sites", self.chain)));
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self.kind {
            ModuleKind::ThroughLines { n, eps1, eps2 } => {
                let sign = |e: i8| if e > 0 { '+' } else { '-' };
                format!("W({},{})[{}{}]", self.chain, n, sign(eps1), sign(eps2))
            }
            ModuleKind::Big(_) => format!("W({})(b)", self.chain),
        }
    }
}

/// Canonical basis of a module, sorted with `)` < `(` < `|`.
pub fn enumerate_basis<S: Scalar>(spec: &ModuleSpec<S>) -> Result<Vec<HalfDiagram>> {
    spec.validate()?;
    let n = spec.chain;
    let mut out = Vec::new();
    match spec.kind {
        ModuleKind::Big(_) => {
            for code in 0u64..(1 << n) {
                let glyphs = (0..n).map(|i| if code >> (n - 1 - i) & 1 == 0 { Glyph::Close } else { Glyph::Open }).collect();
                out.push(HalfDiagram::new(glyphs)?);
            }
        }
        ModuleKind::ThroughLines { eps1, eps2, .. } => {
            let t = spec.through_count().expect("through-line module");
            let mut word = Vec::with_capacity(n);
            collect_through(n, t, &mut word, &mut |g: &[Glyph]| {
                if let Ok(d) = HalfDiagram::new(g.to_vec()) {
                    let odd = |c: usize| if c.is_multiple_of(2) { 1 } else { -1 };
                    if odd(d.left_count()) == eps1 && odd(d.right_count()) == eps2 {
                        out.push(d);
                    }
                }
            });
        }
    }
    out.sort();
    Ok(out)
}

fn collect_through(n: usize, t: usize, word: &mut Vec<Glyph>, emit: &mut impl FnMut(&[Glyph])) {
    let used = word.iter().filter(|g| **g == Glyph::Through).count();
    if word.len() == n {
        if used == t {
            emit(word);
        }
        return;
    }
    if t - used > n - word.len() {
        return;
    }
    for g in [Glyph::Close, Glyph::Open, Glyph::Through] {
        if g == Glyph::Through && used == t {
            continue;
        }
        word.push(g);
        collect_through(n, t, word, emit);
        word.pop();
    }
}

/// A module with sparse generator matrices in its canonical basis.
pub struct WordRep<S> {
    spec: ModuleSpec<S>,
    params: DerivedParams<S>,
    basis: Vec<HalfDiagram>,
    index: HashMap<HalfDiagram, usize>,
    gens: Vec<SparseMat<S>>,
}

impl<S: Scalar> WordRep<S> {
    pub fn new(spec: ModuleSpec<S>, params: &DerivedParams<S>) -> Result<Self> {
        let basis = enumerate_basis(&spec)?;
        let index: HashMap<HalfDiagram, usize> = basis.iter().cloned().enumerate().map(|(k, x)| (x, k)).collect();
        let b = spec.quotient_b();
        let mut gens = Vec::with_capacity(spec.chain + 1);
        for i in 0..=spec.chain {
            let cols = basis.par_iter().map(|x| act_on_half(i, x, params, b)).collect::<Result<Vec<_>>>()?;
            let mut m = SparseMat::new(basis.len());
            for (col, image) in cols.into_iter().enumerate() {
                if let Some((c, y)) = image {
                    let row = *index.get(&y).ok_or_else(|| Error::Invalid(format!("e_{i} maps {} outside the module", basis[col])))?;
                    m.push(row, col, c);
                }
            }
            gens.push(m);
        }
        Ok(WordRep { spec, params: params.clone(), basis, index, gens })
    }

    pub fn spec(&self) -> &ModuleSpec<S> {
        &self.spec
    }

    pub fn params(&self) -> &DerivedParams<S> {
        &self.params
    }

    pub fn basis(&self) -> &[HalfDiagram] {
        &self.basis
    }

    pub fn position(&self, x: &HalfDiagram) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn generator_matrix(&self, i: usize) -> Matrix<S> {
        self.gens[i].to_dense()
    }

    pub fn bilinear(&self, x: &HalfDiagram, y: &HalfDiagram) -> Result<S> {
        bilinear_form(x, y, &self.params, self.spec.quotient_b())
    }

    pub fn gram_matrix(&self) -> Result<Matrix<S>> {
        let rows = self
            .basis
            .par_iter()
            .map(|x| self.basis.iter().map(|y| self.bilinear(x, y)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(rows))
    }

    pub fn gram_det_bruteforce(&self) -> Result<S> {
        Ok(S::det(&self.gram_matrix()?))
    }
}

impl<S: Scalar> Rep<S> for WordRep<S> {
    fn chain_len(&self) -> usize {
        self.spec.chain
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn apply_e(&self, i: usize, v: &[S]) -> Vec<S> {
        self.gens[i].apply(v)
    }

    fn e_matrix(&self, i: usize) -> Matrix<S> {
        self.gens[i].to_dense()
    }
}

/// Words of the two quotient idempotents `I1` (starting at `e_1`) and `I2` (starting at `e_0`).
pub fn idempotent_words(n: usize) -> (Vec<usize>, Vec<usize>) {
    let i1 = (1..=n).step_by(2).collect::<Vec<_>>();
    let i2 = (0..=n).step_by(2).collect::<Vec<_>>();
    (i1, i2)
}

/// What the audit should assert about the idempotents `I1, I2`.
#[derive(Clone, Debug)]
pub enum QuotientCheck<S> {
    Skip,
    /// `I1 I2 I1 = b I1` and `I2 I1 I2 = b I2`.
    Scalar(S),
    /// Both idempotents act as zero.
    Vanishing,
}

/// Every defining relation of the algebra, checked on all basis vectors.
pub fn relation_audit<S: Scalar, R: Rep<S> + ?Sized>(rep: &R, params: &DerivedParams<S>, quotient: &QuotientCheck<S>) -> Audit {
    let n = rep.chain_len();
    let mut audit = Audit::new();
    let e = |i: usize| Op::<S>::e(i);
    for i in 0..=n {
        let (c, name) = if i == 0 {
            (params.s1.clone(), "s1")
        } else if i == n {
            (params.s2.clone(), "s2")
        } else {
            (params.delta.clone(), "delta")
        };
        audit.record(format!("rel.square.e{i}"), &format!("e_{i}^2 = {name} e_{i}"), op_deviation(rep, &(e(i) * e(i)), &e(i).scale(c)));
    }
    for i in 1..n {
        for j in [i.wrapping_sub(1), i + 1] {
            if j > n {
                continue;
            }
            audit.record(
                format!("rel.braid.e{i}e{j}e{i}"),
                &format!("e_{i} e_{j} e_{i} = e_{i}"),
                op_deviation(rep, &Op::word(&[i, j, i]), &e(i)),
            );
        }
    }
    for i in 0..=n {
        for j in i + 2..=n {
            audit.record(
                format!("rel.commute.e{i}e{j}"),
                &format!("e_{i} e_{j} = e_{j} e_{i}"),
                op_deviation(rep, &Op::word(&[i, j]), &Op::word(&[j, i])),
            );
        }
    }
    let (w1, w2) = idempotent_words(n);
    let (i1, i2) = (Op::<S>::word(&w1), Op::<S>::word(&w2));
    match quotient {
        QuotientCheck::Skip => {}
        QuotientCheck::Scalar(b) => {
            audit.record(
                "rel.quotient.I1I2I1",
                "I1 I2 I1 = b I1",
                op_deviation(rep, &Op::product([i1.clone(), i2.clone(), i1.clone()]), &i1.clone().scale(b.clone())),
            );
            audit.record(
                "rel.quotient.I2I1I2",
                "I2 I1 I2 = b I2",
                op_deviation(rep, &Op::product([i2.clone(), i1, i2.clone()]), &i2.scale(b.clone())),
            );
        }
        QuotientCheck::Vanishing => {
            let zero = Op::scalar(S::zero());
            audit.record("rel.quotient.I1", "I1 = 0", op_deviation(rep, &i1, &zero));
            audit.record("rel.quotient.I2", "I2 = 0", op_deviation(rep, &i2, &zero));
        }
    }
    audit
}

/// `G e_i = e_i^T G` for every generator.
pub fn intertwining_audit<S: Scalar>(rep: &WordRep<S>, gram: &Matrix<S>) -> Audit {
    let mut audit = Audit::new();
    for i in 0..=rep.chain_len() {
        let m = rep.e_matrix(i);
        let lhs = gram.mul(&m);
        let rhs = m.transpose().mul(gram);
        audit.record(
            format!("gram.intertwine.e{i}"),
            &format!("G e_{i} = e_{i}^T G"),
            lhs.first_difference(&rhs).map(|(r, c)| format!("entry ({r},{c})")),
        );
    }
    audit
}

/// Number of half-diagrams with `through` through lines and no boundary arcs.
pub fn count_link_patterns(n: usize, through: usize) -> usize {
    let mut word = Vec::new();
    let mut count = 0;
    collect_through(n, through, &mut word, &mut |g: &[Glyph]| {
        if let Ok(d) = HalfDiagram::new(g.to_vec()) {
            if d.sites().iter().all(|s| !matches!(s, Site::LeftEnd | Site::RightEnd)) {
                count += 1;
            }
        }
    });
    count
}
