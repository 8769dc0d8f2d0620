mod common;

use common::oracle::*;

#[test]
fn nnlb_pools_match_brute_force() {
    check_nnlb_pools(150, 11).unwrap();
}

#[test]
fn sbb_pools_match_brute_force() {
    check_sbb_pools(150, 12).unwrap();
}

#[test]
fn exceedance_matches_double_loop() {
    check_exceedance(300, 13).unwrap();
}

#[test]
fn altered_difference_matches_loop() {
    check_altered_difference(150, 14).unwrap();
}

#[test]
fn toy_four_chunk_contiguous_count() {
    use synthseries::{contiguous_count, HourlySeries, Threshold};
    let orig = HourlySeries::new(vec![5.0, 5.0, 5.0, 5.0, 5.0, 5.0, 5.0, 5.0]).unwrap();
    let syn = HourlySeries::new(vec![4.0, 4.0, 5.0, 5.0, 0.0, 5.0, 6.0, 6.0]).unwrap();
    let t = Threshold::Proportional(0.05);
    assert_eq!(contiguous_count(&orig, &syn, 2, t).unwrap(), brute_exceedance(orig.values(), syn.values(), 2, t).1);
    assert_eq!(contiguous_count(&orig, &syn, 2, t).unwrap(), 2);
    assert_eq!(contiguous_count(&orig, &syn, 4, t).unwrap(), 2);
    assert!(contiguous_count(&orig, &syn, 8, t).unwrap() <= 1);
}
