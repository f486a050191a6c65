//! The six commands. Each returns an audit and a data section.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tl2b::hecke::{
    central_value, centre_audit, equivalent_presentation_audit, hecke_relation_audit, iji_audit, lift_to_hecke, murphy, murphy_audit,
    symmetric_centrality_audit, MurphyKind,
};
use tl2b::irreps::{
    big_gram_det_at, central_character, conjecture_cases, conjecture_check, detect_invariant, exceptional_audit,
    expected_central_character, first_leak, generators_in_b1, ExceptionalSpec,
};
use tl2b::params::draw_rational;
use tl2b::pathbasis::{
    action_audit, vanishing_identities_audit, build_b1, closed_form_audit, exceptional_points, fundamental_vector, gram_audit,
    gram_closed_form_factors, murphy_audit_b1, murphy_b_exponent, spectral_battery, unitriangular_deviation, word_vectors, ybe_audit,
    Spectral, TileOrder,
};
use tl2b::rep::Rep;
use tl2b::report::Audit;
use tl2b::spinchain::{dense_agreement_audit, ebar, equivalence_audit, spin_vector_json, u1_audit, SpinChain};
use tl2b::symbolic::free_params;
use tl2b::wordrep::{enumerate_basis, irrep_dim, relation_audit, ModuleSpec, QuotientCheck, WordRep};
use tl2b::{make_param_point, make_twist, Ctx, Error, HalfExponent, ParamPoint, Parity, Rational, Result, Scalar, Sym};

use crate::config::{Backend, Command, RunConfig, ThetaSpec};

/// What a command produced.
pub struct Outcome {
    pub audit: Audit,
    pub data: Value,
    pub point: Option<ParamPoint>,
    pub tbar: Option<Rational>,
}

/// The evaluation point of a numeric run.
struct Setup {
    base: ParamPoint,
    point: ParamPoint,
    tbar: Rational,
    exceptional: Option<ExceptionalSpec>,
}

fn setup(cfg: &RunConfig) -> Result<Setup> {
    let base = make_param_point(cfg.seed, cfg.bound)?;
    let tbar = make_twist(cfg.seed);
    let (point, exceptional) = match &cfg.theta {
        ThetaSpec::Generic => (base.clone(), None),
        ThetaSpec::Exceptional(p) => {
            let spec = ExceptionalSpec::new(&base, cfg.n, *p)?;
            (spec.param_point().clone(), Some(spec))
        }
        ThetaSpec::Explicit(t) => (ParamPoint::with_theta_unchecked(&base, t.clone())?, None),
    };
    Ok(Setup { base, point, tbar, exceptional })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.backend == Backend::Symbolic {
        return run_symbolic(cfg);
    }
    let s = setup(cfg)?;
    let (audit, data) = match cfg.command {
        Command::Relations => relations(&s.point.ctx(), cfg.n, s.tbar.clone(), cfg.corrupt)?,
        Command::Gram => gram(&s.point.ctx(), cfg.n, &s.base, s.exceptional.is_some())?,
        Command::Basis => basis(&s, cfg.n)?,
        Command::Spinchain => spinchain(&s, cfg)?,
        Command::Irreps => irreps(&s, cfg)?,
        Command::Modules => modules(cfg.n)?,
    };
    Ok(Outcome { audit: audit.sorted(), data, point: Some(s.point), tbar: Some(s.tbar) })
}

/// Largest chain length the symbolic backend accepts.
const SYMBOLIC_MAX_N: usize = 3;

fn run_symbolic(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.theta != ThetaSpec::Generic {
        return Err(Error::Invalid("the symbolic backend works with generic theta only".into()));
    }
    if cfg.n > SYMBOLIC_MAX_N {
        return Err(Error::Invalid(format!("the symbolic backend is limited to N <= {SYMBOLIC_MAX_N}")));
    }
    let (audit, data) = match cfg.command {
        Command::Relations => free_relations(cfg.n, cfg.corrupt)?,
        Command::Gram => free_gram(cfg.n)?,
        Command::Modules => modules(cfg.n)?,
        other => return Err(Error::Invalid(format!("{other} has no symbolic backend"))),
    };
    Ok(Outcome { audit: audit.sorted(), data, point: None, tbar: None })
}

/// Names of the indeterminates in symbolic output.
const FREE_VARIABLES: &str = "s = delta, a = s1, v = s2, t = b";

/// Defining relations with `delta, s1, s2, b` left free.
fn free_relations(n: usize, corrupt: bool) -> Result<(Audit, Value)> {
    let params = free_params();
    let b = params.b(Parity::of(n)).clone();
    let mut checked = params.clone();
    if corrupt {
        checked.s1 = checked.s1.clone() + &Sym::one();
    }
    let rep = WordRep::new(ModuleSpec::big(n, b.clone()), &params)?;
    let mut audit = prefixed(relation_audit(&rep, &checked, &QuotientCheck::Scalar(b)), "big");
    for spec in through_line_specs::<Sym>(n) {
        let label = spec.label();
        let w = WordRep::new(spec, &params)?;
        audit.extend(prefixed(relation_audit(&w, &checked, &QuotientCheck::Vanishing), &label));
    }
    Ok((audit, json!({"variables": FREE_VARIABLES, "big_dim": rep.dim()})))
}

/// Gram determinant of `W^(N)(b)` as a polynomial in `delta, s1, s2, b`.
fn free_gram(n: usize) -> Result<(Audit, Value)> {
    let params = free_params();
    let b = params.b(Parity::of(n)).clone();
    let rep = WordRep::new(ModuleSpec::big(n, b.clone()), &params)?;
    let det = Sym::det(&rep.gram_matrix()?);
    let mut audit = Audit::new();
    if n == 2 {
        let (s1, s2, d) = (params.s1.clone(), params.s2.clone(), params.delta.clone());
        let product = b.clone() * &(b.clone() - &s1) * &(b.clone() - &s2) * &(b - &s1 - &s2 + &(d * &s1 * &s2));
        audit.check("gram.two_sites", "det G = b(b-s1)(b-s2)(b-s1-s2+delta s1 s2)", det.same(&product), || {
            format!("det G = {}", det.render())
        });
    }
    Ok((audit, json!({"variables": FREE_VARIABLES, "det_half_diagram": det.render()})))
}

fn prefixed(mut audit: Audit, prefix: &str) -> Audit {
    for e in &mut audit.entries {
        e.identity_id = format!("{prefix}.{}", e.identity_id);
    }
    audit
}

fn big_module<S: Scalar>(ctx: &Ctx<S>, n: usize) -> Result<WordRep<S>> {
    let d = ctx.derived()?;
    WordRep::new(ModuleSpec::big(n, d.b(Parity::of(n)).clone()), &d)
}

/// Every `(n, eps1, eps2)` with a nonempty through-line module on `chain` sites.
fn through_line_specs<S: Scalar>(chain: usize) -> Vec<ModuleSpec<S>> {
    let mut out = Vec::new();
    for n in 0..=chain + 1 {
        for (e1, e2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            if let Ok(spec) = ModuleSpec::through_lines(chain, n, e1, e2) {
                out.push(spec);
            }
        }
    }
    out
}

fn relations<S: Scalar>(ctx: &Ctx<S>, n: usize, tbar: S, corrupt: bool) -> Result<(Audit, Value)> {
    let params = ctx.derived()?;
    let rep = big_module(ctx, n)?;
    let b = params.b(Parity::of(n)).clone();
    let mut checked = params.clone();
    if corrupt {
        checked.s1 = checked.s1.clone() + &S::one();
    }
    let mut audit = prefixed(relation_audit(&rep, &checked, &QuotientCheck::Scalar(b)), "big");
    let mut modules = Vec::new();
    for spec in through_line_specs::<S>(n) {
        let label = spec.label();
        let w = WordRep::new(spec, &params)?;
        audit.extend(prefixed(relation_audit(&w, &checked, &QuotientCheck::Vanishing), &label));
        modules.push(json!({"module": label, "dim": w.dim()}));
    }
    let h = lift_to_hecke(ctx, n);
    audit.extend(prefixed(hecke_relation_audit(&rep, &h), "big"));
    for kind in [MurphyKind::A, MurphyKind::B, MurphyKind::C] {
        audit.extend(prefixed(murphy_audit(&rep, &h, &murphy(kind, &h)), "big"));
    }
    let fam_b = murphy(MurphyKind::B, &h);
    let fam_c = murphy(MurphyKind::C, &h);
    if n <= 4 {
        audit.extend(prefixed(symmetric_centrality_audit(&rep, &h, &fam_b), "big"));
    }
    audit.extend(prefixed(equivalent_presentation_audit(&rep, &h, &fam_c), "big"));
    let z = central_value(ctx, n, HalfExponent::THETA);
    audit.extend(prefixed(centre_audit(&rep, &fam_c, Some(&z)), "big"));
    audit.extend(iji_audit(ctx, n)?);
    let sp = Spectral::new(ctx.clone(), tbar)?;
    audit.extend(prefixed(ybe_audit(&rep, &sp, &spectral_battery())?, "big"));
    let data = json!({
        "big_dim": rep.dim(),
        "through_line_modules": modules,
        "central_value": z.render(),
        "b": params.b(Parity::of(n)).render(),
    });
    Ok((audit, data))
}

fn gram<S: Scalar>(ctx: &Ctx<S>, n: usize, base: &ParamPoint, exceptional: bool) -> Result<(Audit, Value)> {
    let params = ctx.derived()?;
    let rep = big_module(ctx, n)?;
    let g = rep.gram_matrix()?;
    let (mut audit, summary) = closed_form_audit(&rep, &g, ctx, &params)?;
    if n == 2 {
        let b = params.b(Parity::Even).clone();
        let (s1, s2, d) = (params.s1.clone(), params.s2.clone(), params.delta.clone());
        let product = b.clone() * &(b.clone() - &s1) * &(b.clone() - &s2) * &(b - &s1 - &s2 + &(d * &s1 * &s2));
        audit.check("gram.two_sites", "det G = b(b-s1)(b-s2)(b-s1-s2+delta s1 s2)", summary.half_diagram.same(&product), || {
            format!("det G = {}", summary.half_diagram.render())
        });
    }
    if exceptional {
        audit.check("gram.exceptional.vanishes", "det G = 0 at an exceptional theta", summary.half_diagram.is_zero(), || {
            format!("det G = {}", summary.half_diagram.render())
        });
    }
    let factors: Vec<Value> = gram_closed_form_factors(ctx, n)
        .into_iter()
        .map(|f| {
            json!({
                "label": f.label,
                "arguments": f.arguments.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "power": f.power,
                "value": f.base.render(),
            })
        })
        .collect();
    let base_ctx = base.ctx();
    let exceptional_list: Vec<Value> = exceptional_points(n)
        .iter()
        .map(|p| json!({"point": p.label(), "theta": p.theta().to_string(), "tau": base_ctx.mono(p.half_theta()).render()}))
        .collect();
    let data = json!({
        "det_half_diagram": summary.half_diagram.render(),
        "det_words": summary.words.render(),
        "det_word_gram": summary.word_gram.render(),
        "norm_b_p0": summary.norm.render(),
        "closed_form": summary.closed_form.render(),
        "factors": factors,
        "exceptional_points": exceptional_list,
    });
    Ok((audit, data))
}

fn basis(s: &Setup, n: usize) -> Result<(Audit, Value)> {
    let ctx = s.point.ctx();
    let rep = big_module(&ctx, n)?;
    let sp = Spectral::new(ctx.clone(), s.tbar.clone())?;
    let start = fundamental_vector(&rep, rep.params(), 0)?;
    let b1 = build_b1(&rep, &sp, &start, TileOrder::Canonical)?;
    let mut audit = Audit::new();
    audit.check("b1.independent", "B1 is a basis", b1.solver().is_ok(), || "change of basis is singular".into());
    let alt = build_b1(&rep, &sp, &start, TileOrder::RightFirst)?;
    let moved = b1.paths().iter().find(|p| alt.vector(p) != b1.vector(p));
    audit.check("b1.order_independent", "b_p does not depend on the tile order", moved.is_none(), || {
        format!("path {}", moved.expect("a differing path"))
    });
    let words = word_vectors(&rep, &start);
    audit.record("b1.unitriangular", "B1 is unitriangular over the tile words", unitriangular_deviation(&b1, &words)?);
    audit.extend(action_audit(&rep, &b1, &sp, rep.params())?);
    audit.extend(murphy_audit_b1(&rep, &b1, &lift_to_hecke(&ctx, n)));
    let (g_audit, norm) = gram_audit(&b1, &rep.gram_matrix()?, &sp)?;
    audit.extend(g_audit);
    audit.extend(vanishing_identities_audit(&rep, &sp, rep.params())?);
    let paths: Vec<Value> = b1
        .paths()
        .iter()
        .map(|p| {
            Ok(json!({
                "path": p.to_string(),
                "end": p.end(),
                "weight": sp.tile_weight(p)?.render(),
                "murphy_exponents": (0..n).map(|k| murphy_b_exponent(p, k).to_string()).collect::<Vec<_>>(),
            }))
        })
        .collect::<Result<_>>()?;
    let data = json!({"norm_b_p0": norm.render(), "paths": paths});
    Ok((audit, data))
}

fn spinchain(s: &Setup, cfg: &RunConfig) -> Result<(Audit, Value)> {
    let n = cfg.n;
    let ctx = s.point.ctx();
    let sp = Spectral::new(ctx.clone(), s.tbar.clone())?;
    let chain = SpinChain::new(&ctx, n)?;
    let mut audit = equivalence_audit(&ctx, &sp, n)?;
    audit.extend(dense_agreement_audit(&ctx, &chain)?);
    let alpha = make_twist(cfg.seed.wrapping_add(1));
    audit.extend(u1_audit(&chain, &alpha)?);
    let mut data = json!({"dim": chain.dim(), "u1_alpha": alpha.render()});
    if n <= 4 {
        data["ebar"] = spin_vector_json(n, &ebar(&ctx, n));
    }
    Ok((audit, data))
}

/// Number of generic control values of `tau` in the irreps report.
const CONTROLS: usize = 16;

fn irreps(s: &Setup, cfg: &RunConfig) -> Result<(Audit, Value)> {
    let n = cfg.n;
    match (&cfg.theta, &s.exceptional) {
        (ThetaSpec::Exceptional(_), Some(spec)) => single_exceptional(s, spec, n, cfg.seed),
        (ThetaSpec::Explicit(t), _) => explicit_tau(s, n, t),
        _ => all_exceptional(s, n, cfg.seed),
    }
}

fn single_exceptional(s: &Setup, spec: &ExceptionalSpec, n: usize, seed: u64) -> Result<(Audit, Value)> {
    let point = spec.point;
    let ctx = spec.param_point().ctx();
    let big = spec.big_module()?;
    let mut audit = Audit::new();
    let det = big.gram_det_bruteforce()?;
    audit.check("irreps.det", "det G vanishes at exceptional theta", det.is_zero(), || format!("det = {}", det.render()));
    let b1 = spec.basis(&big, s.tbar.clone())?;
    let pair = detect_invariant(&big, &b1, &point, big.params())?;
    audit.extend(pair.audit.clone());
    let expect = expected_central_character(&ctx, n, &point);
    let mut centre = serde_json::Map::new();
    for (name, fam) in [("sub", &pair.sub), ("quo", &pair.quo)] {
        let z = central_character(fam, &ctx);
        audit.check(format!("centre.{name}"), "Z_N = [N][2x]/[x] on V and V~", z.as_ref() == Some(&expect), || match &z {
            Some(z) => format!("Z_N = {}", z.render()),
            None => "Z_N is not scalar".into(),
        });
        centre.insert(name.into(), json!(z.map(|z| z.render())));
    }
    let mut data = json!({
        "point": point.label(),
        "tau": spec.tau().render(),
        "dims": {"sub": pair.dims.0, "quo": pair.dims.1},
        "sub_paths": pair.sub_paths.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "expected_central_character": expect.render(),
        "central_character": centre,
    });
    if point.sign > 0 && conjecture_cases(n).contains(&(point.m, point.eps1, point.eps2)) {
        let r = conjecture_check(&s.base, n, point.m, point.eps1, point.eps2, s.tbar.clone(), seed)?;
        data["conjecture"] = serde_json::to_value(&r).expect("serializable");
    }
    Ok((audit, data))
}

fn explicit_tau(s: &Setup, n: usize, t: &Rational) -> Result<(Audit, Value)> {
    let det = big_gram_det_at(&s.base, n, t.clone())?;
    let ctx = s.point.ctx();
    let rep = big_module(&ctx, n)?;
    let sp = Spectral::new(ctx.clone(), s.tbar.clone())?;
    let start = fundamental_vector(&rep, rep.params(), 0)?;
    let b1 = build_b1(&rep, &sp, &start, TileOrder::Canonical)?;
    let mats = generators_in_b1(&rep, &b1)?;
    let invariant: Vec<String> =
        exceptional_points(n).into_iter().filter(|p| first_leak(&mats, b1.paths(), p).is_none()).map(|p| p.label()).collect();
    let data = json!({"tau": t.render(), "det": det.render(), "invariant_blocks": invariant});
    Ok((Audit::new(), data))
}

fn all_exceptional(s: &Setup, n: usize, seed: u64) -> Result<(Audit, Value)> {
    let mut audit = exceptional_audit(&s.base, n, &s.tbar)?;
    let base_ctx = s.base.ctx();
    let taus: Vec<Rational> = exceptional_points(n).iter().map(|p| base_ctx.mono(p.half_theta())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    let mut controls = Vec::new();
    while controls.len() < CONTROLS {
        let tau = draw_rational(&mut rng);
        if taus.contains(&tau) || controls.contains(&tau) {
            continue;
        }
        let det = big_gram_det_at(&s.base, n, tau.clone())?;
        let k = controls.len();
        audit.check(format!("irreps.control.{k:02}.det"), "det G is nonzero at generic theta", !det.is_zero(), || {
            format!("det vanishes at tau = {}", tau.render())
        });
        controls.push(tau);
    }
    let ctx = s.point.ctx();
    let rep = big_module(&ctx, n)?;
    let sp = Spectral::new(ctx.clone(), s.tbar.clone())?;
    let b1 = build_b1(&rep, &sp, &fundamental_vector(&rep, rep.params(), 0)?, TileOrder::Canonical)?;
    let mats = generators_in_b1(&rep, &b1)?;
    for p in exceptional_points(n) {
        audit.check(
            format!("irreps.control.block.{}", p.label()),
            "blocks are not invariant at generic theta",
            first_leak(&mats, b1.paths(), &p).is_some(),
            || "block invariant at the generic point".into(),
        );
    }
    let mut verdicts = Vec::new();
    for (m, e1, e2) in conjecture_cases(n) {
        let r = conjecture_check(&s.base, n, m, e1, e2, s.tbar.clone(), seed)?;
        audit.check(
            format!("conjecture.{}", r.case),
            "trace battery: W equivalent to V (evidence)",
            r.verdict == tl2b::irreps::Verdict::Equivalent,
            || format!("{:?}", r.verdict),
        );
        verdicts.push(serde_json::to_value(&r).expect("serializable"));
    }
    let data = json!({
        "exceptional_points": exceptional_points(n).iter().map(|p| p.label()).collect::<Vec<_>>(),
        "control_taus": controls.iter().map(|t| t.render()).collect::<Vec<_>>(),
        "conjecture": verdicts,
        "conjecture_status": "checked at desk scale",
    });
    Ok((audit, data))
}

fn modules(n: usize) -> Result<(Audit, Value)> {
    let mut audit = Audit::new();
    let mut rows = Vec::new();
    for chain in 1..=n {
        for spec in through_line_specs::<Rational>(chain) {
            let tl2b::wordrep::ModuleKind::ThroughLines { n: k, .. } = spec.kind else { unreachable!() };
            let dim = enumerate_basis(&spec)?.len();
            let expect = irrep_dim(chain as i64, k as i64) as usize;
            let label = spec.label();
            audit.check(format!("dims.{label}"), "dim W(N,n) = M_N(n)", dim == expect, || format!("{dim} half-diagrams, M = {expect}"));
            rows.push(json!({"chain": chain, "module": label, "dim": dim, "expected": expect}));
        }
        let big = ModuleSpec::big(chain, Rational::from_integer(1.into()));
        let dim = enumerate_basis(&big)?.len();
        let label = big.label();
        audit.check(format!("dims.{label}"), "dim W(N)(b) = 2^N", dim == 1 << chain, || format!("{dim} half-diagrams"));
        rows.push(json!({"chain": chain, "module": label, "dim": dim, "expected": 1usize << chain}));
    }
    Ok((audit, json!({"modules": rows})))
}
