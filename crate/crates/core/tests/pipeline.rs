//! Light end-to-end runs of the library across configurations and base pairs.

use bilinear_bsc::eoracle::verify_eigenspace_identities;
use bilinear_bsc::local::bfs::bfs_distance_audit;
use bilinear_bsc::local::{random_pair, verify_partition, CrossMode, LocalContext};
use bilinear_bsc::norton::{
    bbalanced_word_check, verify_generation, verify_norton_identities, verify_omega, NortonOps,
};
use bilinear_bsc::params::{verify_closed_form_identities, ClosedForms, GraphParams};
use bilinear_bsc::report::Report;
use bilinear_bsc::smodel::{cross_validate, verify_s_model, SModel};
use bilinear_bsc::Error;
use proptest::prelude::*;

/// Closed forms, coordinate model and operators; with `local`, also the
/// neighborhood checks against a random base pair.
fn light_suite(q: u32, d: usize, n: usize, k: usize, seed: u64, local: bool) -> Report {
    let p = GraphParams::new(q, d, n).unwrap();
    let cf = ClosedForms::new(&p, k).unwrap();
    let model = SModel::from_closed_forms(&cf).unwrap();
    let ops = NortonOps::new(&model).unwrap();
    let mut r = verify_closed_form_identities(&cf);
    if local {
        let (x, y) = random_pair(&p, k, seed).unwrap();
        let ctx = LocalContext::build(&p, x, y, CrossMode::OnTheFly).unwrap();
        r.extend(verify_partition(&ctx, &cf));
        r.extend(verify_eigenspace_identities(&ctx, &cf));
        r.extend(cross_validate(&model, &ctx, 2, seed));
    }
    r.extend(verify_s_model(&model));
    r.extend(verify_norton_identities(&ops));
    r.extend(verify_omega(&ops));
    r.extend(verify_generation(&ops));
    r.extend(bbalanced_word_check(&ops, 6));
    r
}

fn assert_clean(r: &Report) {
    let bad: Vec<_> = r.failures().map(|c| (&c.name, &c.witness)).collect();
    assert!(bad.is_empty(), "{bad:?}");
    assert!(r.summary().pass > 80);
}

#[test]
fn larger_fields_and_distances() {
    // the neighborhood at q = 5 has 19344 vertices and no bitsliced kernel; keep it out of the default run
    for (q, d, n, k) in [(5, 3, 7, 2), (7, 3, 7, 2), (3, 5, 11, 3), (3, 5, 11, 4)] {
        assert_clean(&light_suite(q, d, n, k, 3, false));
    }
}

#[test]
fn wide_matrices_random_pair() {
    assert_clean(&light_suite(3, 3, 8, 2, 4, true));
}

#[test]
fn bfs_audit_base_configuration() {
    let p = GraphParams::new(3, 3, 6).err();
    assert!(p.is_some(), "N = 2D is inadmissible");
    let p = GraphParams::new(3, 3, 7).unwrap();
    let audit = bfs_distance_audit(&p, 2_000_000).unwrap();
    assert!(audit.passed());
    assert_eq!(audit.sphere_sizes, [1, 1040, 81_120, 449_280]);
    assert!(matches!(
        bfs_distance_audit(&p, 1000),
        Err(Error::TooLarge { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn partition_holds_for_random_pairs(seed in any::<u64>()) {
        let p = GraphParams::new(3, 3, 7).unwrap();
        let cf = ClosedForms::new(&p, 2).unwrap();
        let (x, y) = random_pair(&p, 2, seed).unwrap();
        let ctx = LocalContext::build(&p, x, y, CrossMode::OnTheFly).unwrap();
        let r = verify_partition(&ctx, &cf);
        prop_assert!(r.all_pass(), "{:?}", r.failures().next());
    }
}
