//! Identities at random seeds, against oracles computed from the raw generators.

mod common;

use num_traits::Zero;
use proptest::prelude::*;
use tl2b::hecke::{central_scalar, lift_to_hecke, murphy, MurphyKind};
use tl2b::irreps::big_gram_det_at;
use tl2b::pathbasis::{build_b1, exceptional_points, fundamental_vector, gram_audit, gram_closed_form, Spectral, TileOrder};
use tl2b::wordrep::{relation_audit, ModuleSpec, QuotientCheck, WordRep};
use tl2b::{make_param_point, make_twist, ParamPoint, Parity};

use common::{closed_form, dense, det, m_dim, Raw, Q};

fn point(seed: u64, n: usize) -> ParamPoint {
    make_param_point(seed, tl2b::params::default_bound(n)).unwrap()
}

fn big(p: &ParamPoint, n: usize) -> WordRep<Q> {
    let d = p.ctx().derived().unwrap();
    WordRep::new(ModuleSpec::big(n, d.b(Parity::of(n)).clone()), &d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn derived_parameters_match_raw_formulas(seed in 0u64..10_000, n in 2usize..6) {
        let p = point(seed, n);
        let d = p.ctx().derived().unwrap();
        let raw = Raw::of(&p);
        prop_assert_eq!(&d.delta, &raw.delta());
        prop_assert_eq!(&d.s1, &raw.s1());
        prop_assert_eq!(&d.s2, &raw.s2());
        prop_assert_eq!(d.b(Parity::of(n)), &raw.b(n));
    }

    #[test]
    fn two_site_determinant(seed in 0u64..10_000) {
        let p = point(seed, 2);
        let raw = Raw::of(&p);
        let (b, s1, s2, d) = (raw.b(2), raw.s1(), raw.s2(), raw.delta());
        let expect = b.clone() * (b.clone() - &s1) * (b.clone() - &s2) * (b - &s1 - &s2 + d * &s1 * &s2);
        prop_assert_eq!(big(&p, 2).gram_det_bruteforce().unwrap(), expect);
    }

    #[test]
    fn closed_form_matches_oracle(seed in 0u64..10_000, n in 2usize..7) {
        let p = point(seed, n);
        prop_assert_eq!(gram_closed_form(&p.ctx(), n).unwrap(), closed_form(&Raw::of(&p), n));
    }

    #[test]
    fn relations_hold(seed in 0u64..10_000, n in 2usize..5) {
        let p = point(seed, n);
        let d = p.ctx().derived().unwrap();
        let audit = relation_audit(&big(&p, n), &d, &QuotientCheck::Scalar(d.b(Parity::of(n)).clone()));
        prop_assert!(audit.all_pass(), "{:?}", audit.first_failure());
    }

    #[test]
    fn casimir_on_big_module(seed in 0u64..10_000, n in 2usize..5) {
        let p = point(seed, n);
        let fam = murphy(MurphyKind::C, &lift_to_hecke(&p.ctx(), n));
        prop_assert_eq!(central_scalar(&big(&p, n), &fam), Some(Raw::of(&p).casimir(n)));
    }

    #[test]
    fn path_basis_is_orthogonal(seed in 0u64..10_000, n in 2usize..5) {
        let p = point(seed, n);
        let rep = big(&p, n);
        let sp = Spectral::new(p.ctx(), make_twist(seed)).unwrap();
        let start = fundamental_vector(&rep, rep.params(), 0).unwrap();
        let b1 = build_b1(&rep, &sp, &start, TileOrder::Canonical).unwrap();
        let (audit, _) = gram_audit(&b1, &rep.gram_matrix().unwrap(), &sp).unwrap();
        prop_assert!(audit.all_pass(), "{:?}", audit.first_failure());
    }
}

#[test]
fn determinant_vanishes_exactly_at_exceptional_points() {
    for n in 2..=4 {
        let base = point(11, n);
        let ctx = base.ctx();
        for ep in exceptional_points(n) {
            let tau = ctx.mono(ep.half_theta());
            assert!(big_gram_det_at(&base, n, tau.clone()).unwrap().is_zero(), "N={n} {}", ep.label());
            let forced = ParamPoint::with_theta_unchecked(&base, tau).unwrap();
            assert!(det(&dense(&big(&forced, n).gram_matrix().unwrap())).is_zero());
        }
        assert!(!big(&base, n).gram_det_bruteforce().unwrap().is_zero());
    }
}

#[test]
fn block_sizes_from_walk_counts() {
    assert_eq!((m_dim(3, 0), m_dim(3, 2), m_dim(4, 1), m_dim(4, 3)), (4, 1, 5, 1));
    assert_eq!(m_dim(5, 1) + m_dim(5, 3), m_dim(6, 2));
    for n in 1..=9 {
        for h in 1..=n as i64 {
            assert_eq!(m_dim(n + 1, h), m_dim(n, h - 1) + m_dim(n, h + 1), "N={n} h={h}");
            if (n as i64 - h) % 2 != 0 {
                assert_eq!(m_dim(n, h) as u128, tl2b::wordrep::irrep_dim(n as i64, h), "N={n} h={h}");
            }
        }
    }
}
