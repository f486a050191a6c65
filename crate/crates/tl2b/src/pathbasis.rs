//! The path basis `B1`: idempotents `E_i`, tile operators built from the
//! R and K operators, the generator action in path coordinates, the type B
//! Murphy spectrum and the diagonal Gram form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hecke::{murphy, HeckeGens, MurphyKind};
use crate::linalg::{Lu, Matrix};
use crate::params::{Ctx, DerivedParams, HalfExponent};
use crate::rep::{dot, is_zero_vec, op_deviation, scale_vec, unit, vec_difference, Op, Rep};
use crate::report::Audit;
use crate::scalar::Scalar;
use crate::wordrep::{ballot, idempotent_words, irrep_dim};

/// Heights `(h_0, ..., h_N)` with `h_0 = 0` and unit steps.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Path {
    heights: Vec<i32>,
}

impl Path {
    pub fn new(heights: Vec<i32>) -> Result<Self> {
        if heights.first() != Some(&0) {
            return Err(Error::Invalid("a path starts at height 0".into()));
        }
        if heights.windows(2).any(|w| (w[1] - w[0]).abs() != 1) {
            return Err(Error::Invalid(format!("steps of {heights:?} must be +1 or -1")));
        }
        Ok(Path { heights })
    }

    /// The see-saw path `p0 = (0, -1, 0, -1, ...)`.
    pub fn fundamental(n: usize) -> Self {
        Path { heights: (0..=n).map(|i| if i % 2 == 0 { 0 } else { -1 }).collect() }
    }

    /// All `2^N` paths, sorted.
    pub fn all(n: usize) -> Vec<Path> {
        let mut out: Vec<Path> = (0u64..1 << n)
            .map(|code| {
                let mut h = vec![0];
                for i in 0..n {
                    let step = if code >> (n - 1 - i) & 1 == 1 { 1 } else { -1 };
                    h.push(h[i] + step);
                }
                Path { heights: h }
            })
            .collect();
        out.sort();
        out
    }

    pub fn heights(&self) -> &[i32] {
        &self.heights
    }

    pub fn chain_len(&self) -> usize {
        self.heights.len() - 1
    }

    pub fn end(&self) -> i32 {
        *self.heights.last().expect("nonempty")
    }

    /// Tiles in the canonical order.
    pub fn tiles(&self) -> Vec<TileEvent> {
        self.tiles_in(TileOrder::Canonical)
    }

    /// The tiles that turn `p0` into this path, in the given order.
    pub fn tiles_in(&self, order: TileOrder) -> Vec<TileEvent> {
        self.tiles_from(&Path::fundamental(self.chain_len()), order)
    }

    /// The tiles that turn `from` into this path; layers are counted from `from`.
    pub fn tiles_from(&self, from: &Path, order: TileOrder) -> Vec<TileEvent> {
        let n = self.chain_len();
        let p0 = from.heights.clone();
        let target = &self.heights;
        let mut cur = p0.clone();
        let mut out = Vec::new();
        while cur != *target {
            let mut best: Option<((i32, i64), TileEvent)> = None;
            for i in 1..=n {
                let dir = match cur[i].cmp(&target[i]) {
                    std::cmp::Ordering::Less => 1,
                    std::cmp::Ordering::Greater => -1,
                    std::cmp::Ordering::Equal => continue,
                };
                let side = cur[i] + dir;
                if cur[i - 1] != side || (i < n && cur[i + 1] != side) {
                    continue;
                }
                let layer = (cur[i] + 2 * dir - p0[i]).abs() / 2;
                let key = match order {
                    TileOrder::Canonical => (layer, i as i64),
                    TileOrder::RightFirst => (0, -(i as i64)),
                };
                let event = TileEvent {
                    position: i,
                    direction: if dir > 0 { Direction::Above } else { Direction::Below },
                    boundary: i == n,
                    prior_height: cur[i - 1],
                };
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, event));
                }
            }
            let (_, event) = best.expect("two distinct paths always differ by an addable tile");
            cur[event.position] += if event.direction == Direction::Above { 2 } else { -2 };
            out.push(event);
        }
        out
    }

    /// Sites `(i, y)` of the tiles between `p0` and the path; `y` is the
    /// prior height `h_{i-1}` at which the tile is added.
    pub fn tile_sites(&self) -> Vec<(usize, i32)> {
        let p0 = Path::fundamental(self.chain_len()).heights;
        let mut out = Vec::new();
        for (i, (&a, &b)) in p0.iter().zip(&self.heights).enumerate().skip(1) {
            let (lo, hi) = (a.min(b), a.max(b));
            out.extend((lo + 1..hi).step_by(2).map(|y| (i, y)));
        }
        out
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.heights.iter().map(i32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// The height at the position goes up by two.
    Above,
    Below,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TileOrder {
    /// Lowest layer first, then leftmost position.
    Canonical,
    /// Rightmost addable position first.
    RightFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TileEvent {
    pub position: usize,
    pub direction: Direction,
    pub boundary: bool,
    pub prior_height: i32,
}

impl TileEvent {
    /// Spectral argument `w1 - h` (from above) or `-w1 + h` (from below).
    pub fn argument(&self) -> HalfExponent {
        let h = self.prior_height;
        match self.direction {
            Direction::Above => HalfExponent::new(-2 * h, 2, 0, 0),
            Direction::Below => HalfExponent::new(2 * h, -2, 0, 0),
        }
    }
}

/// The functions `r`, `k`, `kbar` and the operators built from them.
#[derive(Clone, Debug)]
pub struct Spectral<S> {
    ctx: Ctx<S>,
    /// `q^{thetabar/2}`, the twist of the left boundary.
    tbar: S,
}

fn pole_free<S: Scalar>(ctx: &Ctx<S>, x: HalfExponent, what: &str) -> Result<S> {
    let v = ctx.qnum(x);
    if v.is_zero() {
        Err(Error::Singular(format!("{what}: [{x}] = 0")))
    } else {
        Ok(v)
    }
}

/// `-[(u-w+x)/2][(u-w-x)/2] / ([u][w+1])` with `q^{x/2} = twist`.
fn boundary_k<S: Scalar>(ctx: &Ctx<S>, u: HalfExponent, omega: HalfExponent, twist: &S, what: &str) -> Result<S> {
    let base = (u - omega).halve().ok_or_else(|| Error::Invalid(format!("{what}({u}) needs an argument with even entries")))?;
    let x = ctx.mono(base);
    let plus = ctx.qnum_of(&(x.clone() * twist));
    let minus = ctx.qnum_of(&(x / twist));
    let den = pole_free(ctx, u, what)? * &pole_free(ctx, omega + HalfExponent::int(1), what)?;
    Ok(-(plus * &minus) / &den)
}

impl<S: Scalar> Spectral<S> {
    pub fn new(ctx: Ctx<S>, tbar: S) -> Result<Self> {
        if tbar.is_zero() {
            return Err(Error::ZeroParameter("tbar"));
        }
        Ok(Spectral { ctx, tbar })
    }

    pub fn ctx(&self) -> &Ctx<S> {
        &self.ctx
    }

    /// `r(u) = [u+1]/[u]`.
    pub fn r(&self, u: HalfExponent) -> Result<S> {
        let den = pole_free(&self.ctx, u, "r")?;
        Ok(self.ctx.qnum(u + HalfExponent::int(1)) / &den)
    }

    pub fn k(&self, u: HalfExponent) -> Result<S> {
        let t = self.ctx.gens()[3].clone();
        boundary_k(&self.ctx, u, HalfExponent::OMEGA2, &t, "k")
    }

    pub fn kbar(&self, u: HalfExponent) -> Result<S> {
        boundary_k(&self.ctx, u, HalfExponent::OMEGA1, &self.tbar, "kbar")
    }

    /// `R_i(u) = e_i - r(u)`.
    pub fn r_op(&self, i: usize, u: HalfExponent) -> Result<Op<S>> {
        Ok(Op::shifted(i, self.r(u)?))
    }

    /// `K_0(u) = e_0 - kbar(u)`.
    pub fn k0_op(&self, u: HalfExponent) -> Result<Op<S>> {
        Ok(Op::shifted(0, self.kbar(u)?))
    }

    /// `K_N(u) = e_N - k(u)`.
    pub fn kn_op(&self, n: usize, u: HalfExponent) -> Result<Op<S>> {
        Ok(Op::shifted(n, self.k(u)?))
    }

    /// `f(h) = r(w1 - h) r(-w1 + h)`.
    pub fn f(&self, h: i32) -> Result<S> {
        let u = HalfExponent::new(-2 * h, 2, 0, 0);
        Ok(self.r(u)? * &self.r(-u)?)
    }

    /// `g(h) = k(w1 - h) k(-w1 + h)`.
    pub fn g(&self, h: i32) -> Result<S> {
        let u = HalfExponent::new(-2 * h, 2, 0, 0);
        Ok(self.k(u)? * &self.k(-u)?)
    }

    /// The scalar `c` of the tile operator `X = e_i - c`.
    pub fn tile_coeff(&self, tile: &TileEvent) -> Result<S> {
        let u = tile.argument();
        let c = if tile.boundary { self.k(u) } else { self.r(u) };
        c.map_err(|e| match e {
            Error::Singular(msg) => Error::Singular(format!("tile at position {}: {msg}", tile.position)),
            other => other,
        })
    }

    pub fn tile_op(&self, tile: &TileEvent) -> Result<Op<S>> {
        Ok(Op::shifted(tile.position, self.tile_coeff(tile)?))
    }

    /// `w_p`: the product of `f` over bulk tiles and `g` over boundary half-tiles.
    pub fn tile_weight(&self, path: &Path) -> Result<S> {
        let n = path.chain_len();
        let mut w = S::one();
        for (i, y) in path.tile_sites() {
            w = w * &if i < n { self.f(y)? } else { self.g(y)? };
        }
        Ok(w)
    }
}

/// Spectral arguments used by [`ybe_audit`].
pub fn spectral_battery() -> Vec<(HalfExponent, HalfExponent)> {
    let w1 = HalfExponent::OMEGA1;
    let w2 = HalfExponent::OMEGA2;
    let one = HalfExponent::int(1);
    vec![(w1, w1 - one), (w1, one), (w2 + one, w1), (HalfExponent::int(2), w1 + w2), (w1 - w2, HalfExponent::new(1, 0, 1, 1))]
}

/// Yang-Baxter, both reflection equations and the unitarity relations.
pub fn ybe_audit<S: Scalar, R: Rep<S> + ?Sized>(rep: &R, sp: &Spectral<S>, battery: &[(HalfExponent, HalfExponent)]) -> Result<Audit> {
    let n = rep.chain_len();
    let mut audit = Audit::new();
    for (k, &(u, v)) in battery.iter().enumerate() {
        for i in 1..n.saturating_sub(1) {
            let lhs = Op::product([sp.r_op(i, u)?, sp.r_op(i + 1, u + v)?, sp.r_op(i, v)?]);
            let rhs = Op::product([sp.r_op(i + 1, v)?, sp.r_op(i, u + v)?, sp.r_op(i + 1, u)?]);
            audit.record(
                format!("ybe.bulk.R{i}R{}.{k}", i + 1),
                "R_i(u) R_{i+1}(u+v) R_i(v) = R_{i+1}(v) R_i(u+v) R_{i+1}(u)",
                op_deviation(rep, &lhs, &rhs),
            );
        }
        let lhs = Op::product([sp.k0_op(v * 2)?, sp.r_op(1, u + v)?, sp.k0_op(u * 2)?, sp.r_op(1, u - v)?]);
        let rhs = Op::product([sp.r_op(1, u - v)?, sp.k0_op(u * 2)?, sp.r_op(1, u + v)?, sp.k0_op(v * 2)?]);
        audit.record(
            format!("ybe.reflect.left.{k}"),
            "K_0(2v) R_1(u+v) K_0(2u) R_1(u-v) = R_1(u-v) K_0(2u) R_1(u+v) K_0(2v)",
            op_deviation(rep, &lhs, &rhs),
        );
        let m = n - 1;
        let lhs = Op::product([sp.kn_op(n, v * 2)?, sp.r_op(m, u + v)?, sp.kn_op(n, u * 2)?, sp.r_op(m, u - v)?]);
        let rhs = Op::product([sp.r_op(m, u - v)?, sp.kn_op(n, u * 2)?, sp.r_op(m, u + v)?, sp.kn_op(n, v * 2)?]);
        audit.record(
            format!("ybe.reflect.right.{k}"),
            "K_N(2v) R_{N-1}(u+v) K_N(2u) R_{N-1}(u-v) = R_{N-1}(u-v) K_N(2u) R_{N-1}(u+v) K_N(2v)",
            op_deviation(rep, &lhs, &rhs),
        );
        for (tag, x) in [("u", u), ("v", v)] {
            for i in 1..n {
                let lhs = sp.r_op(i, x)? * sp.r_op(i, -x)?;
                let c = sp.r(x)? * &sp.r(-x)?;
                audit.record(format!("ybe.unitary.R{i}.{k}{tag}"), "R_i(u) R_i(-u) = r(u) r(-u)", op_deviation(rep, &lhs, &Op::scalar(c)));
            }
            let x2 = x * 2;
            let lhs = sp.k0_op(x2)? * sp.k0_op(-x2)?;
            let c = sp.kbar(x2)? * &sp.kbar(-x2)?;
            audit.record(format!("ybe.unitary.K0.{k}{tag}"), "K_0(u) K_0(-u) = kbar(u) kbar(-u)", op_deviation(rep, &lhs, &Op::scalar(c)));
            let lhs = sp.kn_op(n, x2)? * sp.kn_op(n, -x2)?;
            let c = sp.k(x2)? * &sp.k(-x2)?;
            audit.record(format!("ybe.unitary.KN.{k}{tag}"), "K_N(u) K_N(-u) = k(u) k(-u)", op_deviation(rep, &lhs, &Op::scalar(c)));
        }
    }
    Ok(audit)
}

/// `E_0 = 1`, `E_i = s1^{(-1)^i} E_{i-1} e_{i-1} E_{i-1}`.
pub fn idempotent_e<S: Scalar>(i: usize, params: &DerivedParams<S>) -> Op<S> {
    let mut e = Op::Id;
    for j in 1..=i {
        let c = if j % 2 == 0 { params.s1.clone() } else { S::one() / params.s1.clone() };
        e = Op::product([e.clone(), Op::e(j - 1), e]).scale(c);
    }
    e
}

/// The image of `E_N`, checked to be one-dimensional and scaled so that
/// coordinate `normalize_at` is 1.
pub fn fundamental_vector<S: Scalar, R: Rep<S> + ?Sized>(rep: &R, params: &DerivedParams<S>, normalize_at: usize) -> Result<Vec<S>> {
    let dim = rep.dim();
    let en = idempotent_e(rep.chain_len(), params);
    let cols: Vec<Vec<S>> = (0..dim).into_par_iter().map(|j| en.apply(rep, &unit(dim, j))).collect();
    let base = cols.iter().find(|c| !is_zero_vec(c)).ok_or_else(|| Error::Invalid("E_N acts as zero".into()))?;
    let piv = base.iter().position(|x| !x.is_zero()).expect("nonzero column");
    for (j, c) in cols.iter().enumerate() {
        let lambda = c[piv].clone() / &base[piv];
        if vec_difference(c, &scale_vec(base, &lambda)).is_some() {
            return Err(Error::Invalid(format!("E_N has rank above one (column {j})")));
        }
    }
    let norm = base[normalize_at].inv().ok_or_else(|| Error::Invalid("image of E_N misses the normalizing coordinate".into()))?;
    Ok(scale_vec(base, &norm))
}

/// Vectors `b_p` for all paths, as coordinate vectors of a module.
#[derive(Clone, Debug)]
pub struct BasisB1<S> {
    n: usize,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    vectors: Vec<Vec<S>>,
}

impl<S: Scalar> BasisB1<S> {
    pub fn chain_len(&self) -> usize {
        self.n
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn position(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn vector(&self, p: &Path) -> Option<&[S]> {
        self.position(p).map(|k| self.vectors[k].as_slice())
    }

    pub fn vectors(&self) -> &[Vec<S>] {
        &self.vectors
    }

    /// Columns are the `b_p` in module coordinates.
    pub fn change_of_basis(&self) -> Matrix<S> {
        Matrix::from_columns(&self.vectors)
    }

    /// Factorization of the change of basis; fails when `B1` is not a basis.
    pub fn solver(&self) -> Result<Lu<S>> {
        Lu::new(&self.change_of_basis()).ok_or_else(|| Error::Singular("the B1 vectors are linearly dependent".into()))
    }

    /// Matrix of `e_i` in `B1` coordinates.
    pub fn generator_in_basis<R: Rep<S> + ?Sized>(&self, rep: &R, lu: &Lu<S>, i: usize) -> Matrix<S> {
        let cols: Vec<Vec<S>> = self.vectors.par_iter().map(|b| lu.solve(&rep.apply_e(i, b))).collect();
        Matrix::from_columns(&cols)
    }
}

/// Columns `e_{i_1} ... e_{i_k} b_{p0}`: the canonical tile words with plain generators.
pub fn word_vectors<S: Scalar, R: Rep<S> + ?Sized>(rep: &R, start: &[S]) -> Vec<Vec<S>> {
    Path::all(rep.chain_len())
        .par_iter()
        .map(|p| {
            let letters: Vec<usize> = p.tiles().iter().rev().map(|t| t.position).collect();
            Op::word(&letters).apply(rep, start)
        })
        .collect()
}

/// Checks that `B1` is lower uni-triangular over the word vectors when
/// both are ordered by the number of tiles.
pub fn unitriangular_deviation<S: Scalar>(basis: &BasisB1<S>, words: &[Vec<S>]) -> Result<Option<String>> {
    let lu = Lu::new(&Matrix::from_columns(words)).ok_or_else(|| Error::Singular("word vectors are dependent".into()))?;
    let len: Vec<usize> = basis.paths.iter().map(|p| p.tile_sites().len()).collect();
    for (k, b) in basis.vectors.iter().enumerate() {
        let t = lu.solve(b);
        for (j, x) in t.iter().enumerate() {
            let ok = if j == k { x.same(&S::one()) } else { x.is_zero() || len[j] < len[k] };
            if !ok {
                return Ok(Some(format!("coefficient of word {} in b_{}", basis.paths[j], basis.paths[k])));
            }
        }
    }
    Ok(None)
}

/// Applies the tile operators of every path to `start`.
pub fn build_b1<S: Scalar, R: Rep<S> + ?Sized>(rep: &R, sp: &Spectral<S>, start: &[S], order: TileOrder) -> Result<BasisB1<S>> {
    let n = rep.chain_len();
    let paths = Path::all(n);
    let vectors = paths
        .par_iter()
        .map(|p| {
            let mut v = start.to_vec();
            for tile in p.tiles_in(order) {
                v = sp.tile_op(&tile)?.apply(rep, &v);
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let index = paths.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
    Ok(BasisB1 { n, paths, index, vectors })
}

/// The generator action on `B1`, checked vector by vector.
pub fn action_audit<S: Scalar, R: Rep<S> + ?Sized>(
    rep: &R,
    basis: &BasisB1<S>,
    sp: &Spectral<S>,
    params: &DerivedParams<S>,
) -> Result<Audit> {
    let n = basis.n;
    let mut audit = Audit::new();
    let first_bad = |i: usize, expect: &dyn Fn(&Path) -> Result<Option<Vec<S>>>| -> Result<Option<String>> {
        for (k, p) in basis.paths.iter().enumerate() {
            let Some(want) = expect(p)? else { continue };
            if let Some(r) = vec_difference(&rep.apply_e(i, &basis.vectors[k]), &want) {
                return Ok(Some(format!("path {p}, coordinate {r}")));
            }
        }
        Ok(None)
    };
    let dim = rep.dim();
    let dev = first_bad(0, &|p| {
        let c = if p.heights[1] == -1 { params.s1.clone() } else { S::zero() };
        Ok(Some(scale_vec(basis.vector(p).expect("own path"), &c)))
    })?;
    audit.record("b1.action.e0", "e_0 b_p = s1 b_p if h_1 = -1, else 0", dev);
    for i in 1..=n {
        let boundary = i == n;
        let slope = |p: &Path| !boundary && p.heights[i - 1] != p.heights[i + 1];
        if !boundary {
            let dev = first_bad(i, &|p| Ok(slope(p).then(|| vec![S::zero(); dim])))?;
            audit.record(format!("b1.action.slope.e{i}"), "e_i vanishes on paths with a slope at i", dev);
        }
        let dev = first_bad(i, &|p| {
            if slope(p) {
                return Ok(None);
            }
            let h = p.heights[i - 1];
            let (inner_h, outer_h, dir) = if h >= 0 { (h - 1, h + 1, Direction::Above) } else { (h + 1, h - 1, Direction::Below) };
            let tile = TileEvent { position: i, direction: dir, boundary, prior_height: h };
            let c = sp.tile_coeff(&tile)?;
            let cbar =
                sp.tile_coeff(&TileEvent { direction: if dir == Direction::Above { Direction::Below } else { Direction::Above }, ..tile })?;
            let with = |hi: i32| {
                let mut hs = p.heights.clone();
                hs[i] = hi;
                basis.vector(&Path { heights: hs }).expect("partner path").to_vec()
            };
            let (inner, outer) = (with(inner_h), with(outer_h));
            let want = if p.heights[i] == inner_h {
                crate::rep::axpy(&scale_vec(&inner, &c), &S::one(), &outer)
            } else {
                crate::rep::axpy(&scale_vec(&inner, &(c.clone() * &cbar)), &cbar, &outer)
            };
            Ok(Some(want))
        })?;
        let id = if boundary { "b1.action.block.eN".to_string() } else { format!("b1.action.block.e{i}") };
        audit.record(id, "2x2 block [[c, c cbar], [1, cbar]] on the pair at an extremum", dev);
    }
    Ok(audit)
}

/// Exponent of the `J_n` eigenvalue on `b_p`.
pub fn murphy_b_exponent(p: &Path, n: usize) -> HalfExponent {
    let (a, b) = (p.heights[n], p.heights[n + 1]);
    HalfExponent::new(-(b * b - a * a) + 1 - 2 * n as i32, 2 * (b - a), 0, 0)
}

/// Exponent of the `C_N = J_0 ... J_{N-1}` eigenvalue on `b_p`.
pub fn casimir_exponent(p: &Path) -> HalfExponent {
    let (h, n) = (p.end(), p.chain_len() as i32);
    HalfExponent::new(-h * h - n * (n - 2), 2 * h, 0, 0)
}

/// Diagonality of the type B Murphy elements, `C_N`, and separation of paths by spectra.
pub fn murphy_audit_b1<S: Scalar, R: Rep<S> + ?Sized>(rep: &R, basis: &BasisB1<S>, h: &HeckeGens<S>) -> Audit {
    let ctx = h.ctx();
    let fam = murphy(MurphyKind::B, h);
    let n = basis.n;
    let mut audit = Audit::new();
    let eigen_dev = |op: &Op<S>, lambda: &(dyn Fn(&Path) -> S + Sync)| {
        basis.paths.par_iter().zip(basis.vectors.par_iter()).find_map_first(|(p, v)| {
            vec_difference(&op.apply(rep, v), &scale_vec(v, &lambda(p))).map(|r| format!("path {p}, coordinate {r}"))
        })
    };
    for k in 0..n {
        let dev = eigen_dev(&fam.j(k), &|p| ctx.mono(murphy_b_exponent(p, k)));
        audit.record(format!("b1.murphy.J{k}"), "J_n b_p = q^{w1(h_{n+1}-h_n) - (h_{n+1}^2-h_n^2)/2 + (1-2n)/2} b_p", dev);
    }
    let c = Op::product((0..n).map(|k| fam.j(k)));
    let dev = eigen_dev(&c, &|p| ctx.mono(casimir_exponent(p)));
    audit.record("b1.murphy.casimir", "C_N b_p = q^{h_N w1 - h_N^2/2 - N(N-2)/2} b_p", dev);
    let mut seen: HashMap<Vec<String>, &Path> = HashMap::new();
    let mut clash = None;
    for p in &basis.paths {
        let key: Vec<String> = (0..n).map(|k| ctx.mono(murphy_b_exponent(p, k)).render()).collect();
        if let Some(other) = seen.insert(key, p) {
            clash.get_or_insert_with(|| format!("paths {other} and {p} share a spectrum"));
        }
    }
    audit.record("b1.murphy.separating", "eigenvalue tuples are pairwise distinct", clash);
    audit
}

/// `B^T G B` for the Gram matrix `gram` of the underlying module.
pub fn transported_gram<S: Scalar>(basis: &BasisB1<S>, gram: &Matrix<S>) -> Matrix<S> {
    let gb: Vec<Vec<S>> = basis.vectors.par_iter().map(|b| gram.mul_vec(b)).collect();
    let cols: Vec<Vec<S>> = gb.par_iter().map(|g| basis.vectors.iter().map(|b| dot(b, g)).collect()).collect();
    Matrix::from_columns(&cols)
}

/// Diagonality of the transported Gram matrix and its agreement with the
/// tile weights. Returns the audit and `<b_{p0}|b_{p0}>`.
pub fn gram_audit<S: Scalar>(basis: &BasisB1<S>, gram: &Matrix<S>, sp: &Spectral<S>) -> Result<(Audit, S)> {
    let d = transported_gram(basis, gram);
    let mut audit = Audit::new();
    let off = d.entries().find(|((r, c), x)| r != c && !x.is_zero()).map(|((r, c), _)| format!("entry ({r},{c})"));
    audit.record("b1.gram.diagonal", "B1 is orthogonal for the bilinear form", off);
    let p0 = Path::fundamental(basis.n);
    let k0 = basis.position(&p0).expect("fundamental path");
    let scale = d[(k0, k0)].clone();
    let mut dev = None;
    for (k, p) in basis.paths.iter().enumerate() {
        if !d[(k, k)].same(&(sp.tile_weight(p)? * &scale)) {
            dev = Some(format!("path {p}"));
            break;
        }
    }
    audit.record("b1.gram.recursion", "<b_p|b_p> = w_p <b_p0|b_p0>", dev);
    Ok((audit, scale))
}

/// One factor `base^power` of the closed-form determinant.
#[derive(Clone, Debug, Serialize)]
pub struct GramFactor<S> {
    pub label: String,
    /// The q-number arguments whose product is the base.
    pub arguments: Vec<HalfExponent>,
    pub power: i64,
    #[serde(skip)]
    pub base: S,
}

fn signs() -> [i32; 2] {
    [1, -1]
}

/// The factors of the closed-form Gram determinant of `W^(N)(b)`.
pub fn gram_closed_form_factors<S: Scalar>(ctx: &Ctx<S>, n: usize) -> Vec<GramFactor<S>> {
    let ni = n as i64;
    let m = |h: i64| irrep_dim(ni, h) as i64;
    let factor = |label: String, arguments: Vec<HalfExponent>, power: i64| {
        let base = arguments.iter().fold(S::one(), |acc, x| acc * &ctx.qnum(*x));
        GramFactor { label, arguments, power, base }
    };
    let alpha_power = -2 * (0..ni).map(|k| m(ni - 1 - 2 * k)).sum::<i64>();
    let mut out = vec![factor("alpha".into(), vec![HalfExponent::OMEGA1, HalfExponent::new(2, 0, 2, 0)], alpha_power)];
    let octet = |shift: i32| {
        let mut args = Vec::new();
        for e1 in signs() {
            for e2 in signs() {
                for e3 in signs() {
                    args.push(HalfExponent::new(shift, e1, e2, e3));
                }
            }
        }
        args
    };
    if n.is_multiple_of(2) {
        for k in 0..=(ni - 2) / 2 {
            out.push(factor(format!("m={}", 2 * k + 1), octet(1 + 2 * k as i32), m(2 * k + 1)));
        }
    } else {
        let mut args = Vec::new();
        for e2 in signs() {
            for e3 in signs() {
                args.push(HalfExponent::new(0, 1, e2, e3));
            }
        }
        out.push(factor("m=0".into(), args, 1 << (n - 1)));
        for k in 1..=(ni - 1) / 2 {
            out.push(factor(format!("m={}", 2 * k), octet(2 * k as i32), m(2 * k)));
        }
    }
    out
}

/// The closed-form Gram determinant.
pub fn gram_closed_form<S: Scalar>(ctx: &Ctx<S>, n: usize) -> Result<S> {
    let mut acc = S::one();
    for f in gram_closed_form_factors(ctx, n) {
        acc = acc * &f.base.powi(f.power).ok_or_else(|| Error::Singular(format!("factor {} vanishes", f.label)))?;
    }
    Ok(acc)
}

/// Determinants entering the closed-form comparison.
#[derive(Clone, Debug)]
pub struct GramDetSummary<S> {
    /// Brute-force determinant in the half-diagram basis.
    pub half_diagram: S,
    /// Determinant of the word vectors in half-diagram coordinates.
    pub words: S,
    /// Brute-force determinant of the bilinear form on the word vectors.
    pub word_gram: S,
    /// `<b_p0|b_p0>`.
    pub norm: S,
    pub closed_form: S,
}

/// Closed form against brute force, once in the word basis and once in
/// the half-diagram basis. Neither route uses the path recursion.
pub fn closed_form_audit<S: Scalar, R: Rep<S> + ?Sized>(
    rep: &R,
    gram: &Matrix<S>,
    ctx: &Ctx<S>,
    params: &DerivedParams<S>,
) -> Result<(Audit, GramDetSummary<S>)> {
    let n = rep.chain_len();
    let start = fundamental_vector(rep, params, 0)?;
    let norm = dot(&start, &gram.mul_vec(&start));
    let w = Matrix::from_columns(&word_vectors(rep, &start));
    let summary = GramDetSummary {
        half_diagram: S::det(gram),
        words: S::det(&w),
        word_gram: S::det(&w.transpose().mul(gram).mul(&w)),
        closed_form: gram_closed_form(ctx, n)?,
        norm,
    };
    let scaled = summary.closed_form.clone() * &summary.norm.powi(1 << n).ok_or_else(|| Error::Singular("<b_p0|b_p0> vanishes".into()))?;
    let mut audit = Audit::new();
    audit.check(
        format!("gram.closed.words.N{n}"),
        "det G = closed form, word basis over <b_p0|b_p0>",
        summary.word_gram.same(&scaled),
        || format!("brute force {} vs {}", summary.word_gram.render(), scaled.render()),
    );
    let lhs = summary.half_diagram.clone() * &summary.words * &summary.words;
    audit.check(format!("gram.closed.half.N{n}"), "det G det(W)^2 = closed form <b_p0|b_p0>^{2^N}", lhs.same(&scaled), || {
        format!("brute force {} vs {}", lhs.render(), scaled.render())
    });
    Ok((audit, summary))
}

/// `theta = sign (-m + eps1 w1 + eps2 w2)`, where `W^(N)(b)` is reducible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExceptionalPoint {
    pub sign: i8,
    pub m: u32,
    pub eps1: i8,
    pub eps2: i8,
}

impl ExceptionalPoint {
    pub fn theta(&self) -> HalfExponent {
        self.half_theta() * 2
    }

    /// `theta / 2`; `q^{theta/2}` is the value forced on `t`.
    pub fn half_theta(&self) -> HalfExponent {
        let s = i32::from(self.sign);
        HalfExponent::new(-s * self.m as i32, s * i32::from(self.eps1), s * i32::from(self.eps2), 0)
    }

    /// Whether the path lies in the invariant block.
    pub fn in_block(&self, p: &Path) -> bool {
        let m = self.m as i32;
        if self.eps1 > 0 {
            p.end() > m
        } else {
            p.end() < -m
        }
    }

    /// Expected size of the invariant block.
    pub fn block_dim(&self, n: usize) -> u128 {
        if self.m == 0 {
            1 << (n - 1)
        } else {
            irrep_dim(n as i64, i64::from(self.m))
        }
    }

    pub fn label(&self) -> String {
        let c = |e: i8| if e > 0 { '+' } else { '-' };
        format!("{},{},{},{}", c(self.sign), self.m, c(self.eps1), c(self.eps2))
    }
}

/// The exceptional values of `theta` for chain length `N`.
pub fn exceptional_points(n: usize) -> Vec<ExceptionalPoint> {
    let ms: Vec<u32> =
        if n.is_multiple_of(2) { (0..=(n as u32 - 2) / 2).map(|k| 2 * k + 1).collect() } else { (0..=(n as u32 - 1) / 2).map(|k| 2 * k).collect() };
    let mut out = Vec::new();
    for m in ms {
        for sign in [1i8, -1] {
            for eps1 in [1i8, -1] {
                if m == 0 && eps1 < 0 {
                    continue;
                }
                for eps2 in [1i8, -1] {
                    out.push(ExceptionalPoint { sign, m, eps1, eps2 });
                }
            }
        }
    }
    out
}

/// Number of paths whose tile set contains the site `(i, h)`, by enumeration.
pub fn count_paths_with_tile(n: usize, i: usize, h: i32) -> usize {
    Path::all(n).iter().filter(|p| p.tile_sites().contains(&(i, h))).count()
}

/// The lowest path with endpoint `h_N`.
pub fn lowest_path(n: usize, hn: i32) -> Path {
    Path { heights: (0..=n as i32).map(|i| (-i).max(hn - (n as i32 - i))).collect() }
}

/// Gram determinant of the fixed-height block `h_N`, normalized to 1 on the
/// lowest path: each tile site `(i, y)` contributes `f(y)` once for every
/// path of the block that needs it.
pub fn fixed_height_gram<S: Scalar>(sp: &Spectral<S>, n: usize, hn: i32) -> Result<S> {
    let low = lowest_path(n, hn);
    let mut counts: BTreeMap<(usize, i32), i64> = BTreeMap::new();
    for p in Path::all(n).into_iter().filter(|p| p.end() == hn) {
        for i in 1..n {
            let (lo, hi) = (low.heights[i], p.heights[i]);
            for y in (lo + 1..hi).step_by(2) {
                *counts.entry((i, y)).or_default() += 1;
            }
        }
    }
    let mut acc = S::one();
    for ((_, y), c) in counts {
        acc = acc * &sp.f(y)?.powi(c).expect("positive power");
    }
    Ok(acc)
}

/// The fixed-height product with the printed exponents `B_{N-i, h_N-h} M_i(h)`.
pub fn fixed_height_printed<S: Scalar>(sp: &Spectral<S>, n: usize, hn: i32) -> Result<S> {
    let ni = n as i64;
    let hp = (ni + i64::from(hn)) / 2;
    let hm = (ni - i64::from(hn)) / 2;
    let mut acc = S::one();
    for i in 1..ni {
        let lo = 0.max(i - hp);
        let hi = (i - 1).min(hm - 1);
        for k in lo..=hi {
            let hs = i - 1 - 2 * k;
            let power = ballot(ni - i, i64::from(hn) - hs) * irrep_dim(i, hs);
            acc = acc * &sp.f(hs as i32)?.powi(power as i64).expect("positive power");
        }
    }
    Ok(acc)
}

/// The vanishing identities behind the generator action, as operator
/// identities on the module.
pub fn vanishing_identities_audit<S: Scalar, R: Rep<S> + ?Sized>(rep: &R, sp: &Spectral<S>, params: &DerivedParams<S>) -> Result<Audit> {
    let n = rep.chain_len();
    let en = idempotent_e(n, params);
    let zero = Op::scalar(S::zero());
    let w1 = HalfExponent::OMEGA1;
    let one = HalfExponent::int(1);
    let mut audit = Audit::new();
    for even in (2..n).step_by(2) {
        for odd in [even - 1, even + 1] {
            if odd == 0 || odd >= n {
                continue;
            }
            let lhs = Op::product([Op::e(even), sp.r_op(odd, w1)?, en.clone()]);
            audit.record(format!("b1.vanishing.e{even}R{odd}"), "e_{2n} R_{2n+-1}(w1) E_N = 0", op_deviation(rep, &lhs, &zero));
            let lhs = Op::product([Op::e(odd), sp.r_op(even, -w1 - one)?, en.clone()]);
            audit.record(format!("b1.vanishing.e{odd}R{even}"), "e_{2n+-1} R_{2n}(-w1-1) E_N = 0", op_deviation(rep, &lhs, &zero));
        }
    }
    let m = n - 1;
    let (a, b, c) = if n % 2 == 0 { (-w1 - one, w1 - one, w1) } else { (w1, -w1 - one * 2, -w1 - one) };
    let lhs = Op::product([Op::e(m), sp.kn_op(n, a)?, en.clone()]);
    audit.record("b1.vanishing.boundary.single", "e_{N-1} K_N(u) E_N = 0", op_deviation(rep, &lhs, &zero));
    let lhs = Op::product([Op::e(m), sp.kn_op(n, b)?, sp.r_op(m, c)?, en.clone()]);
    audit.record("b1.vanishing.boundary.double", "e_{N-1} K_N(u-1) R_{N-1}(u) E_N = 0", op_deviation(rep, &lhs, &zero));
    let (w1w, w2w) = idempotent_words(n);
    let (i1, i2) = (Op::<S>::word(&w1w), Op::<S>::word(&w2w));
    let half = (n / 2) as i64;
    let s1 = |k: i64| params.s1.powi(k).expect("s1 is nonzero");
    let (first, second) = if n % 2 == 0 {
        (
            (Op::product([i2.clone(), i1.clone(), en.clone()]), Op::product([i2.clone(), en.clone()]).scale(s1(-half))),
            (Op::product([i1.clone(), i2.clone(), en.clone()]), Op::product([i1.clone(), Op::e(n), en.clone()]).scale(s1(half))),
        )
    } else {
        (
            (Op::product([i1.clone(), i2.clone(), en.clone()]), Op::product([i1.clone(), en.clone()]).scale(s1(half + 1))),
            (Op::product([i2.clone(), i1.clone(), en.clone()]), Op::product([i2.clone(), Op::e(n), en.clone()]).scale(s1(-half))),
        )
    };
    audit.record("b1.vanishing.chain.first", "I I' E_N = s1^k I E_N", op_deviation(rep, &first.0, &first.1));
    audit.record("b1.vanishing.chain.second", "I' I E_N = s1^k I' e_N E_N", op_deviation(rep, &second.0, &second.1));
    Ok(audit)
}

/// Paths grouped by endpoint, used for block structure and reports.
pub fn paths_by_end(n: usize) -> BTreeMap<i32, Vec<Path>> {
    let mut out: BTreeMap<i32, Vec<Path>> = BTreeMap::new();
    for p in Path::all(n) {
        out.entry(p.end()).or_default().push(p);
    }
    out
}

/// First entry `(row, column)` of `m` mapping the block (`mask` true) outside itself.
pub fn block_leak<S: Scalar>(m: &Matrix<S>, mask: &[bool]) -> Option<(usize, usize)> {
    for c in (0..m.cols()).filter(|&c| mask[c]) {
        for r in (0..m.rows()).filter(|&r| !mask[r]) {
            if !m[(r, c)].is_zero() {
                return Some((r, c));
            }
        }
    }
    None
}
