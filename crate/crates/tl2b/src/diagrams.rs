//! Reduced diagrams, half-diagrams and their composition.
//!
//! A half-diagram is a word over `)` (arc to the left boundary), `(` (arc to
//! the right boundary) and `|` (through line); matched `(`..`)` pairs are
//! arcs between sites.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::params::DerivedParams;
use crate::scalar::Scalar;

/// One symbol of the parenthesis notation, ordered `)` < `(` < `|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Glyph {
    Close,
    Open,
    Through,
}

impl Glyph {
    pub fn to_char(self) -> char {
        match self {
            Glyph::Close => ')',
            Glyph::Open => '(',
            Glyph::Through => '|',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            ')' => Some(Glyph::Close),
            '(' => Some(Glyph::Open),
            '|' => Some(Glyph::Through),
            _ => None,
        }
    }
}

/// Resolved role of a site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Site {
    LeftEnd,
    RightEnd,
    /// Left member of an arc; holds the partner position.
    PairOpen(usize),
    /// Right member of an arc; holds the partner position.
    PairClose(usize),
    Through,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfDiagram {
    glyphs: Vec<Glyph>,
}

fn resolve(glyphs: &[Glyph]) -> Vec<Site> {
    let mut sites = vec![Site::Through; glyphs.len()];
    let mut stack = Vec::new();
    for (i, g) in glyphs.iter().enumerate() {
        match g {
            Glyph::Open => stack.push(i),
            Glyph::Close => match stack.pop() {
                Some(j) => {
                    sites[j] = Site::PairOpen(i);
                    sites[i] = Site::PairClose(j);
                }
                None => sites[i] = Site::LeftEnd,
            },
            Glyph::Through => {}
        }
    }
    for j in stack {
        sites[j] = Site::RightEnd;
    }
    sites
}

impl HalfDiagram {
    /// Validating constructor: rejects arcs crossing through lines and
    /// boundary arcs that would have to cross one.
    pub fn new(glyphs: Vec<Glyph>) -> Result<Self> {
        let d = HalfDiagram { glyphs };
        let sites = d.sites();
        let through: Vec<usize> = (0..sites.len()).filter(|&i| sites[i] == Site::Through).collect();
        if let (Some(&first), Some(&last)) = (through.first(), through.last()) {
            for (i, s) in sites.iter().enumerate() {
                let bad = match *s {
                    Site::LeftEnd => i > first,
                    Site::RightEnd => i < last,
                    Site::PairOpen(j) => through.iter().any(|&t| i < t && t < j),
                    _ => false,
                };
                if bad {
                    return Err(Error::Invalid(format!("half-diagram {} is not planar", d.word())));
                }
            }
        }
        Ok(d)
    }

    /// Parses the text form; a trailing `*` must agree with the derived flag.
    pub fn parse(text: &str) -> Result<Self> {
        let (body, star) = match text.strip_suffix('*') {
            Some(b) => (b, true),
            None => (text, false),
        };
        let glyphs = body
            .chars()
            .map(|c| Glyph::from_char(c).ok_or_else(|| Error::Parse(format!("unexpected character {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let d = Self::new(glyphs)?;
        if star != d.hline() {
            return Err(Error::Parse(format!("horizontal-line marker does not match {body:?}")));
        }
        Ok(d)
    }

    pub fn glyphs(&self) -> &[Glyph] {
        &self.glyphs
    }

    pub fn len(&self) -> usize {
        self.glyphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.glyphs.is_empty()
    }

    pub fn sites(&self) -> Vec<Site> {
        resolve(&self.glyphs)
    }

    fn count(&self, kind: Site) -> usize {
        self.sites().into_iter().filter(|s| *s == kind).count()
    }

    pub fn through_count(&self) -> usize {
        self.glyphs.iter().filter(|g| **g == Glyph::Through).count()
    }

    pub fn left_count(&self) -> usize {
        self.count(Site::LeftEnd)
    }

    pub fn right_count(&self) -> usize {
        self.count(Site::RightEnd)
    }

    /// Set iff there are no through lines and an odd number of right arcs.
    pub fn hline(&self) -> bool {
        self.through_count() == 0 && self.right_count() % 2 == 1
    }

    fn flag(&self) -> u32 {
        u32::from(self.hline())
    }

    /// The word without the display marker.
    pub fn word(&self) -> String {
        self.glyphs.iter().map(|g| g.to_char()).collect()
    }
}

impl fmt::Display for HalfDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word())?;
        if self.hline() {
            write!(f, "*")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HalfDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}>")
    }
}

/// Reduced diagram shape `|bottom><top|` with a count of left-right lines.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FullDiagram {
    pub bottom: HalfDiagram,
    pub top: HalfDiagram,
    pub hlines: u32,
}

impl FullDiagram {
    pub fn new(bottom: HalfDiagram, top: HalfDiagram, hlines: u32) -> Result<Self> {
        if bottom.len() != top.len() {
            return Err(Error::Invalid("halves of different length".into()));
        }
        if bottom.through_count() != top.through_count() {
            return Err(Error::Invalid("through-line counts differ".into()));
        }
        if bottom.through_count() > 0 && hlines > 0 {
            return Err(Error::Invalid("horizontal lines next to through lines".into()));
        }
        Ok(FullDiagram { bottom, top, hlines })
    }

    pub fn identity(n: usize) -> Self {
        let h = HalfDiagram { glyphs: vec![Glyph::Through; n] };
        FullDiagram { bottom: h.clone(), top: h, hlines: 0 }
    }

    pub fn chain_len(&self) -> usize {
        self.bottom.len()
    }

    /// Reflection about the horizontal axis.
    pub fn transpose(&self) -> Self {
        FullDiagram { bottom: self.top.clone(), top: self.bottom.clone(), hlines: self.hlines }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "bottom": self.bottom.to_string(),
            "top": self.top.to_string(),
            "hlines": self.hlines,
        })
    }
}

/// The diagram of `e_i` on `n` sites.
pub fn generator_diagram(i: usize, n: usize) -> Result<FullDiagram> {
    if n == 0 || i > n {
        return Err(Error::Invalid(format!("generator e_{i} out of range for N = {n}")));
    }
    let mut g = vec![Glyph::Through; n];
    if i == 0 {
        g[0] = Glyph::Close;
    } else if i == n {
        g[n - 1] = Glyph::Open;
    } else {
        g[i - 1] = Glyph::Open;
        g[i] = Glyph::Close;
    }
    let h = HalfDiagram { glyphs: g };
    Ok(FullDiagram { bottom: h.clone(), top: h, hlines: 0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Node {
    Bot(usize),
    Top(usize),
    Left(usize),
    Right(usize),
}

/// Endpoint matching of one diagram, including its boundary points.
struct Wiring {
    n: usize,
    left: usize,
    partner: Vec<Node>,
}

impl Wiring {
    fn id(&self, node: Node) -> usize {
        match node {
            Node::Bot(i) => i,
            Node::Top(i) => self.n + i,
            Node::Left(k) => 2 * self.n + k,
            Node::Right(k) => 2 * self.n + self.left + k,
        }
    }

    fn partner(&self, node: Node) -> Node {
        self.partner[self.id(node)]
    }

    fn build(d: &FullDiagram) -> Wiring {
        let n = d.chain_len();
        let sb = d.bottom.sites();
        let st = d.top.sites();
        let of = |s: &[Site], k: Site| -> Vec<usize> { (0..n).filter(|&i| s[i] == k).collect() };
        let (lb, lt) = (of(&sb, Site::LeftEnd), of(&st, Site::LeftEnd));
        let (rb, rt) = (of(&sb, Site::RightEnd), of(&st, Site::RightEnd));
        let h = d.hlines as usize;
        let left = lb.len() + h + lt.len();
        let right = rb.len() + h + rt.len();
        let mut links: Vec<(Node, Node)> = Vec::new();
        let mut l = 0;
        for &i in &lb {
            links.push((Node::Bot(i), Node::Left(l)));
            l += 1;
        }
        let hl: Vec<usize> = (l..l + h).collect();
        l += h;
        for &i in lt.iter().rev() {
            links.push((Node::Top(i), Node::Left(l)));
            l += 1;
        }
        let mut r = 0;
        for &i in rb.iter().rev() {
            links.push((Node::Bot(i), Node::Right(r)));
            r += 1;
        }
        for &k in &hl {
            links.push((Node::Left(k), Node::Right(r)));
            r += 1;
        }
        for &i in &rt {
            links.push((Node::Top(i), Node::Right(r)));
            r += 1;
        }
        let tb = of(&sb, Site::Through);
        let tt = of(&st, Site::Through);
        for (&i, &j) in tb.iter().zip(&tt) {
            links.push((Node::Bot(i), Node::Top(j)));
        }
        for i in 0..n {
            if let Site::PairOpen(j) = sb[i] {
                links.push((Node::Bot(i), Node::Bot(j)));
            }
            if let Site::PairOpen(j) = st[i] {
                links.push((Node::Top(i), Node::Top(j)));
            }
        }
        let mut w = Wiring { n, left, partner: vec![Node::Bot(0); 2 * n + left + right] };
        for (a, b) in links {
            let (ia, ib) = (w.id(a), w.id(b));
            w.partner[ia] = b;
            w.partner[ib] = a;
        }
        w
    }
}

/// Result of stacking two diagrams before scalars are attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composite {
    pub diagram: FullDiagram,
    pub loops: u32,
    /// Left-boundary arcs whose lower end has odd index.
    pub odd_left: u32,
    /// Right-boundary arcs whose lower end has odd index.
    pub odd_right: u32,
}

impl Composite {
    /// The scalar factor, reducing horizontal-line pairs when `quotient_b` is given.
    pub fn coefficient<S: Scalar>(&self, params: &DerivedParams<S>, quotient_b: Option<&S>) -> (S, u32) {
        let mut c = S::one();
        for _ in 0..self.loops {
            c = c * &params.delta;
        }
        for _ in 0..self.odd_left {
            c = c * &params.s1;
        }
        for _ in 0..self.odd_right {
            c = c * &params.s2;
        }
        let mut h = self.diagram.hlines;
        if let Some(b) = quotient_b {
            while h >= 2 {
                h -= 2;
                c = c * b;
            }
        }
        (c, h)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Lower,
    Upper,
}

/// Stacks `lower` below `upper` and removes loops and boundary arcs.
pub fn stack(lower: &FullDiagram, upper: &FullDiagram) -> Result<Composite> {
    let n = lower.chain_len();
    if upper.chain_len() != n {
        return Err(Error::Invalid("composing diagrams of different length".into()));
    }
    let wa = Wiring::build(lower);
    let wb = Wiring::build(upper);
    let (la, ra) = (wa.left, wa.partner.len() - 2 * n - wa.left);
    let (lb, rb) = (wb.left, wb.partner.len() - 2 * n - wb.left);

    #[derive(Clone, Copy, PartialEq, Eq)]
    enum End {
        Bot(usize),
        Top(usize),
        Left(usize),
        Right(usize),
    }
    let global = |side: Side, node: Node| -> End {
        let off = side == Side::Upper;
        match node {
            Node::Bot(i) => End::Bot(i),
            Node::Top(i) => End::Top(i),
            Node::Left(k) => End::Left(k + if off { la } else { 0 }),
            Node::Right(k) => End::Right(k + if off { ra } else { 0 }),
        }
    };

    let mut externals: Vec<(Side, Node)> = Vec::new();
    externals.extend((0..n).map(|i| (Side::Lower, Node::Bot(i))));
    externals.extend((0..n).map(|i| (Side::Upper, Node::Top(i))));
    externals.extend((0..la).map(|k| (Side::Lower, Node::Left(k))));
    externals.extend((0..lb).map(|k| (Side::Upper, Node::Left(k))));
    externals.extend((0..ra).map(|k| (Side::Lower, Node::Right(k))));
    externals.extend((0..rb).map(|k| (Side::Upper, Node::Right(k))));

    let mut seen: Vec<(Side, Node)> = Vec::new();
    let mut middle_seen = vec![false; n];
    let mut bottom_to: Vec<Option<End>> = vec![None; n];
    let mut top_to: Vec<Option<End>> = vec![None; n];
    let (mut odd_left, mut odd_right, mut hlines) = (0u32, 0u32, 0u32);

    for &start in &externals {
        if seen.contains(&start) {
            continue;
        }
        let (mut side, mut node) = start;
        let end = loop {
            let w = if side == Side::Lower { &wa } else { &wb };
            let next = w.partner(node);
            match (side, next) {
                (Side::Lower, Node::Top(j)) => {
                    middle_seen[j] = true;
                    side = Side::Upper;
                    node = Node::Bot(j);
                }
                (Side::Upper, Node::Bot(j)) => {
                    middle_seen[j] = true;
                    side = Side::Lower;
                    node = Node::Top(j);
                }
                _ => break (side, next),
            }
        };
        seen.push(start);
        seen.push(end);
        let g1 = global(start.0, start.1);
        let g2 = global(end.0, end.1);
        match (g1, g2) {
            (End::Left(x), End::Left(y)) => odd_left += u32::from(x.min(y) % 2 == 1),
            (End::Right(x), End::Right(y)) => odd_right += u32::from(x.min(y) % 2 == 1),
            (End::Left(_), End::Right(_)) | (End::Right(_), End::Left(_)) => hlines += 1,
            _ => {
                for (a, b) in [(g1, g2), (g2, g1)] {
                    match a {
                        End::Bot(i) => bottom_to[i] = Some(b),
                        End::Top(i) => top_to[i] = Some(b),
                        _ => {}
                    }
                }
            }
        }
    }

    let mut loops = 0;
    for i in 0..n {
        if middle_seen[i] {
            continue;
        }
        loops += 1;
        let mut k = i;
        loop {
            middle_seen[k] = true;
            let Node::Bot(j) = wb.partner(Node::Bot(k)) else { unreachable!("closed loop leaves the middle row") };
            middle_seen[j] = true;
            let Node::Top(m) = wa.partner(Node::Top(j)) else { unreachable!("closed loop leaves the middle row") };
            if m == i {
                break;
            }
            k = m;
        }
    }

    let half = |to: &[Option<End>], bottom: bool| -> Vec<Glyph> {
        (0..n)
            .map(|i| match to[i].expect("every outer site is connected") {
                End::Bot(j) if bottom => {
                    if j > i {
                        Glyph::Open
                    } else {
                        Glyph::Close
                    }
                }
                End::Top(j) if !bottom => {
                    if j > i {
                        Glyph::Open
                    } else {
                        Glyph::Close
                    }
                }
                End::Left(_) => Glyph::Close,
                End::Right(_) => Glyph::Open,
                _ => Glyph::Through,
            })
            .collect()
    };
    let diagram =
        FullDiagram { bottom: HalfDiagram { glyphs: half(&bottom_to, true) }, top: HalfDiagram { glyphs: half(&top_to, false) }, hlines };
    Ok(Composite { diagram, loops, odd_left, odd_right })
}

/// `lower` below `upper` with the scalar attached.
pub fn compose<S: Scalar>(
    lower: &FullDiagram,
    upper: &FullDiagram,
    params: &DerivedParams<S>,
    quotient_b: Option<&S>,
) -> Result<(S, FullDiagram)> {
    let c = stack(lower, upper)?;
    let (coeff, h) = c.coefficient(params, quotient_b);
    let mut d = c.diagram;
    d.hlines = h;
    Ok((coeff, d))
}

/// Finite linear combination of reduced diagrams.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<S> {
    n: usize,
    terms: BTreeMap<FullDiagram, S>,
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn zero(n: usize) -> Self {
        AlgebraElement { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagram(FullDiagram::identity(n), S::one())
    }

    pub fn from_diagram(d: FullDiagram, c: S) -> Self {
        let mut e = Self::zero(d.chain_len());
        e.add_term(d, c);
        e
    }

    pub fn chain_len(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FullDiagram, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }

    pub fn coefficient(&self, d: &FullDiagram) -> S {
        self.terms.get(d).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, d: FullDiagram, c: S) {
        let v = self.terms.remove(&d).map_or(c.clone(), |old| old + &c);
        if !v.is_zero() {
            self.terms.insert(d, v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n);
        for (d, x) in &self.terms {
            out.add_term(d.clone(), x.clone() * c);
        }
        out
    }

    /// Product `self * other`, with `self` drawn below.
    pub fn mul(&self, other: &Self, params: &DerivedParams<S>, quotient_b: Option<&S>) -> Result<Self> {
        let mut out = Self::zero(self.n);
        for (da, ca) in &self.terms {
            for (db, cb) in &other.terms {
                let (c, d) = compose(da, db, params, quotient_b)?;
                out.add_term(d, c * ca * cb);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (d, c) in &self.terms {
            out.add_term(d.transpose(), c.clone());
        }
        out
    }

    /// Equality with [`Scalar::same`] on coefficients.
    pub fn same(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len() && self.terms.iter().all(|(d, c)| other.terms.get(d).is_some_and(|x| x.same(c)))
    }
}

/// Left-to-right product of generator diagrams.
pub fn word_to_element<S: Scalar>(
    word: &[usize],
    n: usize,
    params: &DerivedParams<S>,
    quotient_b: Option<&S>,
) -> Result<AlgebraElement<S>> {
    let mut d = FullDiagram::identity(n);
    let mut c = S::one();
    for &i in word {
        let (k, next) = compose(&d, &generator_diagram(i, n)?, params, quotient_b)?;
        c = c * &k;
        d = next;
    }
    Ok(AlgebraElement::from_diagram(d, c))
}

/// `|x><x|` carrying the horizontal line of each half.
fn projector(x: &HalfDiagram) -> FullDiagram {
    FullDiagram { bottom: x.clone(), top: x.clone(), hlines: 2 * x.flag() }
}

/// Power `b^k` of the quotient parameter; through-line diagrams never need it.
fn quotient_power<S: Scalar>(excess: u32, b: Option<&S>) -> Option<S> {
    debug_assert!(excess.is_multiple_of(2), "odd number of surplus horizontal lines");
    if excess == 0 {
        return Some(S::one());
    }
    let b = b?;
    let mut c = S::one();
    for _ in 0..excess / 2 {
        c = c * b;
    }
    Some(c)
}

/// `e_i |x>`: the scalar and the new half-diagram, or `None` when the
/// result is zero in the module (including loss of through lines).
pub fn act_on_half<S: Scalar>(
    i: usize,
    x: &HalfDiagram,
    params: &DerivedParams<S>,
    quotient_b: Option<&S>,
) -> Result<Option<(S, HalfDiagram)>> {
    let n = x.len();
    let c = stack(&generator_diagram(i, n)?, &projector(x))?;
    let y = c.diagram.bottom.clone();
    if y.through_count() < x.through_count() {
        return Ok(None);
    }
    let (mut coeff, _) = c.coefficient(params, None);
    let excess = c.diagram.hlines - y.flag() - x.flag();
    let Some(bk) = quotient_power(excess, quotient_b) else {
        return Err(Error::Invalid("horizontal lines need a quotient parameter".into()));
    };
    coeff = coeff * &bk;
    if coeff.is_zero() {
        return Ok(None);
    }
    Ok(Some((coeff, y)))
}

/// The bilinear form `<x|y>`.
pub fn bilinear_form<S: Scalar>(x: &HalfDiagram, y: &HalfDiagram, params: &DerivedParams<S>, quotient_b: Option<&S>) -> Result<S> {
    let c = stack(&projector(x), &projector(y))?;
    if c.diagram.bottom != *x || c.diagram.top != *y {
        return Ok(S::zero());
    }
    let (coeff, _) = c.coefficient(params, None);
    let excess = c.diagram.hlines - x.flag() - y.flag();
    let bk = quotient_power(excess, quotient_b).ok_or_else(|| Error::Invalid("horizontal lines need a quotient parameter".into()))?;
    Ok(coeff * &bk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamPoint;
    use crate::scalar::rat;
    use num_rational::BigRational;

    fn params() -> DerivedParams<BigRational> {
        ParamPoint::new(rat(3, 2), rat(5, 7), rat(11, 13), rat(17, 19), 8).unwrap().ctx().derived().unwrap()
    }

    fn h(s: &str) -> HalfDiagram {
        HalfDiagram::parse(s).unwrap()
    }

    #[test]
    fn parsing_and_flags() {
        assert!(h(")(*").hline());
        assert!(!h("((").hline());
        assert!(HalfDiagram::parse(")(").is_err());
        assert!(HalfDiagram::parse("(|)").is_err());
        assert!(HalfDiagram::parse("|)").is_err());
        assert!(HalfDiagram::parse("(|").is_err());
        assert_eq!(h("())(*").sites(), vec![Site::PairOpen(1), Site::PairClose(0), Site::LeftEnd, Site::RightEnd]);
    }

    #[test]
    fn generator_squares() {
        let p = params();
        for n in 2..5 {
            for i in 0..=n {
                let w = word_to_element(&[i, i], n, &p, None).unwrap();
                let e = word_to_element(&[i], n, &p, None).unwrap();
                let f = if i == 0 {
                    &p.s1
                } else if i == n {
                    &p.s2
                } else {
                    &p.delta
                };
                assert!(w.same(&e.scale(f)), "e_{i}^2 at N={n}");
            }
        }
    }

    #[test]
    fn half_action_examples() {
        let p = params();
        let (c, y) = act_on_half(1, &h("))|"), &p, None).unwrap().unwrap();
        assert_eq!((c, y.word()), (BigRational::from_integer(1.into()), "()|".to_string()));
        let (c, y) = act_on_half(0, &h("))"), &p, Some(&p.b_even)).unwrap().unwrap();
        assert_eq!((c, y.word()), (p.s1.clone(), "))".to_string()));
        assert!(act_on_half(2, &h("|||"), &p, None).unwrap().is_none());
    }

    #[test]
    fn boundary_braid_like_relations() {
        let p = params();
        for n in 2..5 {
            let lhs = word_to_element(&[1, 0, 1], n, &p, None).unwrap();
            assert!(lhs.same(&word_to_element(&[1], n, &p, None).unwrap()));
            let lhs = word_to_element(&[n - 1, n, n - 1], n, &p, None).unwrap();
            assert!(lhs.same(&word_to_element(&[n - 1], n, &p, None).unwrap()));
            assert_ne!(word_to_element(&[0, 1, 0], n, &p, None).unwrap(), word_to_element(&[0], n, &p, None).unwrap());
        }
    }

    #[test]
    fn horizontal_lines_accumulate() {
        let p = params();
        let x = word_to_element(&[1, 0, 2], 2, &p, None).unwrap();
        let x2 = word_to_element(&[1, 0, 2, 1, 0, 2], 2, &p, None).unwrap();
        let (d, _) = x.terms().next().unwrap();
        let (d2, _) = x2.terms().next().unwrap();
        assert_eq!((d.hlines, d2.hlines), (1, 3));
        let b = &p.b_even;
        let q = word_to_element(&[1, 0, 2, 1, 0, 2], 2, &p, Some(b)).unwrap();
        let expect = word_to_element(&[1, 0, 2], 2, &p, Some(b)).unwrap().scale(b);
        assert!(q.same(&expect));
    }

    #[test]
    fn transpose_of_generators() {
        for i in 0..=3 {
            let g = generator_diagram(i, 3).unwrap();
            assert_eq!(g.transpose(), g);
        }
        assert!(generator_diagram(4, 3).is_err());
    }
}
