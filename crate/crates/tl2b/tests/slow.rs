//! Large-N determinant checks; run with `cargo test --release -- --ignored`.

mod common;

use tl2b::params::default_bound;
use tl2b::pathbasis::closed_form_audit;
use tl2b::wordrep::{ModuleSpec, WordRep};
use tl2b::{make_param_point, Parity};

use common::{closed_form, Raw};

fn closed_form_at(n: usize, seed: u64) {
    let p = make_param_point(seed, default_bound(n)).unwrap();
    let ctx = p.ctx();
    let params = ctx.derived().unwrap();
    let rep = WordRep::new(ModuleSpec::big(n, params.b(Parity::of(n)).clone()), &params).unwrap();
    let g = rep.gram_matrix().unwrap();
    let (audit, summary) = closed_form_audit(&rep, &g, &ctx, &params).unwrap();
    assert!(audit.all_pass(), "{:?}", audit.first_failure());
    assert_eq!(summary.closed_form, closed_form(&Raw::of(&p), n));
}

#[test]
#[ignore = "128x128 exact determinants"]
fn closed_form_n7() {
    closed_form_at(7, 1);
}

#[test]
#[ignore = "256x256 exact determinants"]
fn closed_form_n8() {
    closed_form_at(8, 1);
}
