//! Exceptional points: invariant blocks of the big module, the sub and
//! quotient irreducibles, and trace evidence for their identification with
//! the through-line modules.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hecke::{central_scalar, central_value, lift_to_hecke, murphy, MurphyKind};
use crate::linalg::Matrix;
use crate::params::{draw_rational, Ctx, DerivedParams, ParamPoint, Parity};
use crate::pathbasis::{
    block_leak, build_b1, exceptional_points, fundamental_vector, BasisB1, ExceptionalPoint, Path, Spectral, TileOrder,
};
use crate::rep::{DenseRep, Rep};
use crate::report::Audit;
use crate::scalar::Scalar;
use crate::wordrep::{relation_audit, ModuleSpec, QuotientCheck, WordRep};

/// An exceptional value of `theta` together with the point it forces.
#[derive(Clone, Debug)]
pub struct ExceptionalSpec {
    pub point: ExceptionalPoint,
    pub chain: usize,
    forced: ParamPoint,
}

impl ExceptionalSpec {
    /// Forces `t = tau` on `base`. Rejects points outside the list for this
    /// chain length and values of `tau` shared with another listed point.
    pub fn new(base: &ParamPoint, chain: usize, point: ExceptionalPoint) -> Result<Self> {
        let list = exceptional_points(chain);
        if !list.contains(&point) {
            return Err(Error::Invalid(format!("{} is not exceptional for N = {chain}", point.label())));
        }
        let ctx = base.ctx();
        let tau = ctx.mono(point.half_theta());
        for other in list.iter().filter(|o| **o != point) {
            if ctx.mono(other.half_theta()) == tau {
                return Err(Error::Invalid(format!("{} coincides with {} here", point.label(), other.label())));
            }
        }
        let forced = ParamPoint::with_theta_unchecked(base, tau)?;
        forced.ctx().derived()?;
        Ok(ExceptionalSpec { point, chain, forced })
    }

    pub fn tau(&self) -> &BigRational {
        &self.forced.t
    }

    pub fn param_point(&self) -> &ParamPoint {
        &self.forced
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.chain)
    }

    /// The big module `W^(N)(b)` at the forced point.
    pub fn big_module(&self) -> Result<WordRep<BigRational>> {
        big_module(&self.forced.ctx(), self.chain)
    }

    /// `B1` at the forced point; `tbar` only enters through the left reflection.
    pub fn basis(&self, rep: &WordRep<BigRational>, tbar: BigRational) -> Result<BasisB1<BigRational>> {
        let sp = Spectral::new(self.forced.ctx(), tbar)?;
        let start = fundamental_vector(rep, rep.params(), 0)?;
        build_b1(rep, &sp, &start, TileOrder::Canonical)
    }
}

fn big_module<S: Scalar>(ctx: &Ctx<S>, chain: usize) -> Result<WordRep<S>> {
    let d = ctx.derived()?;
    WordRep::new(ModuleSpec::big(chain, d.b(Parity::of(chain)).clone()), &d)
}

/// Generator families on the invariant block and on the complement classes.
#[derive(Clone)]
pub struct SubQuotientPair<S> {
    pub sub: DenseRep<S>,
    pub quo: DenseRep<S>,
    pub sub_paths: Vec<Path>,
    pub quo_paths: Vec<Path>,
    pub dims: (usize, usize),
    pub audit: Audit,
}

fn prefixed(audit: Audit, prefix: &str) -> Audit {
    let mut out = audit;
    for e in &mut out.entries {
        e.identity_id = format!("{prefix}.{}", e.identity_id);
    }
    out
}

/// Generator matrices of `rep` in `B1` coordinates.
pub fn generators_in_b1<S: Scalar, R: Rep<S> + ?Sized>(rep: &R, basis: &BasisB1<S>) -> Result<Vec<Matrix<S>>> {
    let lu = basis.solver()?;
    Ok((0..=rep.chain_len()).map(|i| basis.generator_in_basis(rep, &lu, i)).collect())
}

/// First generator that moves the block of `point` out of itself, as `(i, row, column)`.
pub fn first_leak<S: Scalar>(mats: &[Matrix<S>], paths: &[Path], point: &ExceptionalPoint) -> Option<(usize, usize, usize)> {
    let mask: Vec<bool> = paths.iter().map(|p| point.in_block(p)).collect();
    mats.iter().enumerate().find_map(|(i, m)| block_leak(m, &mask).map(|(r, c)| (i, r, c)))
}

/// Splits the big module at an exceptional point into the invariant block
/// and its quotient, with a relation audit on both families.
pub fn detect_invariant<S: Scalar, R: Rep<S> + ?Sized>(
    rep: &R,
    basis: &BasisB1<S>,
    point: &ExceptionalPoint,
    params: &DerivedParams<S>,
) -> Result<SubQuotientPair<S>> {
    let n = rep.chain_len();
    let mats = generators_in_b1(rep, basis)?;
    let paths = basis.paths();
    if let Some((i, r, c)) = first_leak(&mats, paths, point) {
        return Err(Error::Invalid(format!(
            "e_{i} sends b_{} to b_{}: the block of {} is not invariant",
            paths[c],
            paths[r],
            point.label()
        )));
    }
    let inside: Vec<usize> = (0..paths.len()).filter(|&k| point.in_block(&paths[k])).collect();
    let outside: Vec<usize> = (0..paths.len()).filter(|&k| !point.in_block(&paths[k])).collect();
    let sub = DenseRep::new(mats.iter().map(|m| m.select(&inside, &inside)).collect());
    let quo = DenseRep::new(mats.iter().map(|m| m.select(&outside, &outside)).collect());
    let check = QuotientCheck::Scalar(params.b(Parity::of(n)).clone());
    let mut audit = prefixed(relation_audit(&sub, params, &check), "sub");
    audit.extend(prefixed(relation_audit(&quo, params, &check), "quo"));
    let expect = point.block_dim(n) as usize;
    let total = paths.len();
    audit.check("dims.sub", "dim V = M_N(n), or 2^{N-1}", inside.len() == expect, || format!("{} paths, expected {expect}", inside.len()));
    audit.check("dims.quo", "dim V~ = 2^N - dim V", outside.len() == total - expect, || {
        format!("{} paths, expected {}", outside.len(), total - expect)
    });
    Ok(SubQuotientPair {
        dims: (inside.len(), outside.len()),
        sub_paths: inside.iter().map(|&k| paths[k].clone()).collect(),
        quo_paths: outside.iter().map(|&k| paths[k].clone()).collect(),
        sub,
        quo,
        audit,
    })
}

/// The scalar of `Z_N` on a family, `None` when it is not scalar.
pub fn central_character<S: Scalar, R: Rep<S> + ?Sized>(rep: &R, ctx: &Ctx<S>) -> Option<S> {
    let h = lift_to_hecke(ctx, rep.chain_len());
    central_scalar(rep, &murphy(MurphyKind::C, &h))
}

/// `[N][2 theta]/[theta]` for the exceptional `theta`; even in `theta`, so
/// both signs give the same value.
pub fn expected_central_character<S: Scalar>(ctx: &Ctx<S>, chain: usize, point: &ExceptionalPoint) -> S {
    central_value(ctx, chain, point.theta())
}

/// Whether the block of `point` is invariant at `tau` (used at generic `tau`
/// as a negative control).
pub fn block_invariant_at(base: &ParamPoint, chain: usize, point: &ExceptionalPoint, tau: BigRational, tbar: BigRational) -> Result<bool> {
    let forced = ParamPoint::with_theta_unchecked(base, tau)?;
    let ctx = forced.ctx();
    let rep = big_module(&ctx, chain)?;
    let sp = Spectral::new(ctx, tbar)?;
    let start = fundamental_vector(&rep, rep.params(), 0)?;
    let basis = build_b1(&rep, &sp, &start, TileOrder::Canonical)?;
    let mats = generators_in_b1(&rep, &basis)?;
    Ok(first_leak(&mats, basis.paths(), point).is_none())
}

/// Brute-force Gram determinant of `W^(N)(b)` with `t` set to `tau`.
pub fn big_gram_det_at(base: &ParamPoint, chain: usize, tau: BigRational) -> Result<BigRational> {
    let forced = ParamPoint::with_theta_unchecked(base, tau)?;
    big_module(&forced.ctx(), chain)?.gram_det_bruteforce()
}

/// Outcome of the trace battery.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "equivalent (checked at desk scale)")]
    Equivalent,
    #[serde(rename = "inequivalent")]
    Inequivalent,
    #[serde(rename = "not decided")]
    NotDecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub case: String,
    pub dims: (usize, usize),
    pub central_match: bool,
    pub murphy_match: bool,
    pub trace_words_checked: usize,
    /// First word whose traces differ, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_mismatch: Option<Vec<usize>>,
    pub verdict: Verdict,
}

/// Words without a repeated letter, without `i j i` for neighbours, and with
/// commuting neighbours in increasing order, of length `1..=max_len`.
pub fn reduced_words(chain: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..=chain).map(|i| vec![i]).collect();
    while let Some(w) = stack.pop() {
        if w.len() < max_len {
            for i in 0..=chain {
                if extends_reduced(&w, i) {
                    let mut x = w.clone();
                    x.push(i);
                    stack.push(x);
                }
            }
        }
        out.push(w);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn extends_reduced(w: &[usize], i: usize) -> bool {
    let k = w.len();
    let last = w[k - 1];
    if last == i || (last.abs_diff(i) >= 2 && last > i) {
        return false;
    }
    !(k >= 2 && w[k - 2] == i && last.abs_diff(i) == 1)
}

/// Seeded random words of length `1..=max_len`.
pub fn random_words(chain: usize, max_len: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len).map(|_| rng.gen_range(0..=chain)).collect()
        })
        .collect()
}

fn word_matrix<S: Scalar>(mats: &[Matrix<S>], word: &[usize]) -> Matrix<S> {
    let mut m = mats[word[0]].clone();
    for &i in &word[1..] {
        m = m.mul(&mats[i]);
    }
    m
}

/// First word on which the two families have different traces.
pub fn trace_mismatch<S: Scalar>(a: &[Matrix<S>], b: &[Matrix<S>], words: &[Vec<usize>]) -> Option<Vec<usize>> {
    use rayon::prelude::*;
    words.par_iter().find_first(|w| !word_matrix(a, w).trace().same(&word_matrix(b, w).trace())).cloned()
}

/// Traces of `J^p`, `p = 1..=dim`, for each type-B Murphy element and for a
/// seeded combination of them; equal lists mean equal joint spectra.
fn murphy_trace_profile<S: Scalar, R: Rep<S> + ?Sized>(rep: &R, ctx: &Ctx<S>, weights: &[S]) -> Vec<S> {
    let fam = murphy(MurphyKind::B, &lift_to_hecke(ctx, rep.chain_len()));
    let js: Vec<Matrix<S>> = fam.indices().map(|k| fam.j(k).dense(rep)).collect();
    let mut mix = Matrix::zeros(rep.dim(), rep.dim());
    for (j, w) in js.iter().zip(weights) {
        mix = mix.add(&j.scale(w));
    }
    let mut out = Vec::new();
    for m in js.iter().chain(std::iter::once(&mix)) {
        let mut p = m.clone();
        for _ in 0..rep.dim() {
            out.push(p.trace());
            p = p.mul(m);
        }
    }
    out
}

/// Compares the through-line module `W^(N,n)` with the invariant block `V`
/// at `theta = -n + eps1 w1 + eps2 w2`. `n = 0` is allowed for `(+,+)` only.
pub fn conjecture_check(
    base: &ParamPoint,
    chain: usize,
    n: u32,
    eps1: i8,
    eps2: i8,
    tbar: BigRational,
    seed: u64,
) -> Result<ConjectureReport> {
    let point = ExceptionalPoint { sign: 1, m: n, eps1, eps2 };
    let spec = ExceptionalSpec::new(base, chain, point)?;
    let ctx = spec.param_point().ctx();
    let big = spec.big_module()?;
    let basis = spec.basis(&big, tbar)?;
    let pair = detect_invariant(&big, &basis, &point, big.params())?;
    let w = WordRep::new(ModuleSpec::through_lines(chain, n as usize, eps1, eps2)?, big.params())?;
    let wd = DenseRep::from_rep(&w);
    let case = format!("N={chain},n={n},eps=({},{})", sign_char(eps1), sign_char(eps2));
    let dims = (w.dim(), pair.sub.dim());
    let mut report = ConjectureReport {
        case,
        dims,
        central_match: false,
        murphy_match: false,
        trace_words_checked: 0,
        trace_mismatch: None,
        verdict: Verdict::NotDecided,
    };
    if dims.0 != dims.1 {
        report.verdict = Verdict::Inequivalent;
        return Ok(report);
    }
    let zw = central_character(&wd, &ctx);
    let zv = central_character(&pair.sub, &ctx);
    report.central_match = matches!((&zw, &zv), (Some(x), Some(y)) if x == y);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<BigRational> = (0..chain).map(|_| draw_rational(&mut rng)).collect();
    report.murphy_match = murphy_trace_profile(&wd, &ctx, &weights) == murphy_trace_profile(&pair.sub, &ctx, &weights);
    let mut words = reduced_words(chain, 2 * chain);
    words.extend(random_words(chain, 4 * chain, 64, rng.gen()));
    report.trace_words_checked = words.len();
    report.trace_mismatch = trace_mismatch(wd.matrices(), pair.sub.matrices(), &words);
    report.verdict = if report.trace_mismatch.is_some() || !report.murphy_match {
        Verdict::Inequivalent
    } else if zw.is_none() || zv.is_none() || !report.central_match {
        Verdict::NotDecided
    } else {
        Verdict::Equivalent
    };
    Ok(report)
}

fn sign_char(e: i8) -> char {
    if e > 0 {
        '+'
    } else {
        '-'
    }
}

/// The cases of the conjecture at chain length `N` for which a through-line
/// module exists.
pub fn conjecture_cases(chain: usize) -> Vec<(u32, i8, i8)> {
    let mut out = Vec::new();
    for p in exceptional_points(chain).into_iter().filter(|p| p.sign > 0) {
        if p.m == 0 && (p.eps1, p.eps2) != (1, 1) {
            continue;
        }
        if ModuleSpec::<BigRational>::through_lines(chain, p.m as usize, p.eps1, p.eps2).is_ok() {
            out.push((p.m, p.eps1, p.eps2));
        }
    }
    out
}

/// Invariant-block, relation and central-character checks at every exceptional point.
pub fn exceptional_audit(base: &ParamPoint, chain: usize, tbar: &BigRational) -> Result<Audit> {
    let mut audit = Audit::new();
    for point in exceptional_points(chain) {
        let tag = format!("irreps.N{chain}.{}", point.label());
        let spec = match ExceptionalSpec::new(base, chain, point) {
            Ok(s) => s,
            Err(e) => {
                audit.record(format!("{tag}.spec"), "exceptional points are distinct", Some(e.to_string()));
                continue;
            }
        };
        let ctx = spec.param_point().ctx();
        let big = spec.big_module()?;
        let det = big.gram_det_bruteforce()?;
        audit
            .check(format!("{tag}.det"), "det G vanishes at exceptional theta", num_traits::Zero::is_zero(&det), || format!("det = {det}"));
        let basis = spec.basis(&big, tbar.clone())?;
        let pair = match detect_invariant(&big, &basis, &point, big.params()) {
            Ok(p) => p,
            Err(e) => {
                audit.record(format!("{tag}.block"), "P -> P(h_N beyond m)", Some(e.to_string()));
                continue;
            }
        };
        audit.record(format!("{tag}.block"), "P -> P(h_N beyond m)", None);
        audit.extend(prefixed(pair.audit.clone(), &tag));
        let expect = expected_central_character(&ctx, chain, &point);
        for (name, fam) in [("sub", &pair.sub), ("quo", &pair.quo)] {
            let z = central_character(fam, &ctx);
            audit.check(format!("{tag}.centre.{name}"), "Z_N = [N][2x]/[x] on V and V~", z.as_ref() == Some(&expect), || match &z {
                Some(z) => format!("Z_N = {}", z.render()),
                None => "Z_N is not scalar".into(),
            });
        }
    }
    Ok(audit.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn point() -> ParamPoint {
        ParamPoint::new(rat(3, 2), rat(5, 7), rat(11, 13), rat(17, 19), 12).unwrap()
    }

    #[test]
    fn two_site_example() {
        let base = point();
        let p = ExceptionalPoint { sign: 1, m: 1, eps1: 1, eps2: -1 };
        let spec = ExceptionalSpec::new(&base, 2, p).unwrap();
        let big = spec.big_module().unwrap();
        let d = big.params().clone();
        assert_eq!(d.b(Parity::Even), &d.s1);
        let basis = spec.basis(&big, rat(23, 29)).unwrap();
        let pair = detect_invariant(&big, &basis, &p, &d).unwrap();
        assert!(pair.audit.all_pass(), "{:?}", pair.audit.first_failure());
        assert_eq!(pair.dims, (1, 3));
        let m = pair.sub.matrices();
        assert!(m[0].is_zero() && m[1].is_zero());
        assert_eq!(m[2][(0, 0)], d.s2);
        let r = conjecture_check(&base, 2, 1, 1, -1, rat(23, 29), 5).unwrap();
        assert_eq!(r.verdict, Verdict::Equivalent, "{r:?}");
    }

    #[test]
    fn blocks_and_controls() {
        let base = point();
        let tbar = rat(23, 29);
        for n in 2..5 {
            let a = exceptional_audit(&base, n, &tbar).unwrap();
            assert!(a.all_pass(), "N={n}: {:?}", a.failures().collect::<Vec<_>>());
            for p in exceptional_points(n) {
                assert!(!block_invariant_at(&base, n, &p, rat(31, 37), tbar.clone()).unwrap(), "N={n} {}", p.label());
            }
        }
    }

    #[test]
    fn coincident_points_are_rejected() {
        // v = s sends +(-1 + w1 - w2) and +(-3 + w1 + w2) to the same tau.
        let base = ParamPoint { s: rat(3, 2), a: rat(5, 7), v: rat(3, 2), t: rat(17, 19), bound: 4 };
        let p = ExceptionalPoint { sign: 1, m: 1, eps1: 1, eps2: -1 };
        let err = ExceptionalSpec::new(&base, 4, p).unwrap_err();
        assert!(err.to_string().contains("coincides"), "{err}");
    }

    #[test]
    fn reduced_word_counts() {
        assert_eq!(reduced_words(2, 4).len(), 15);
        assert_eq!(reduced_words(3, 6).len(), 83);
        assert!(reduced_words(3, 6).iter().all(|w| w.windows(2).all(|p| p[0] != p[1])));
    }

    #[test]
    fn conjecture_small() {
        let base = point();
        for n in 2..4 {
            for (m, e1, e2) in conjecture_cases(n) {
                let r = conjecture_check(&base, n, m, e1, e2, rat(23, 29), 11).unwrap();
                assert_eq!(r.verdict, Verdict::Equivalent, "{r:?}");
            }
        }
    }
}
