use std::ffi::{CStr, CString};
use std::ptr;

use ppm_ffi::*;

fn perm(values: &[usize]) -> *mut PpmPerm {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ppm_perm_new(values.as_ptr(), values.len(), &mut out) }, PpmStatus::Ok);
    out
}

fn values(p: *const PpmPerm) -> Vec<usize> {
    let n = unsafe { ppm_perm_len(p) };
    let mut buf = vec![0; n];
    assert_eq!(unsafe { ppm_perm_values(p, buf.as_mut_ptr(), n) }, PpmStatus::Ok);
    buf
}

fn last_error() -> String {
    let e = ppm_last_error();
    assert!(!e.is_null());
    unsafe { CStr::from_ptr(e) }.to_str().unwrap().to_string()
}

#[test]
fn perm_round_trip() {
    let p = perm(&[2, 4, 1, 6, 3, 5]);
    assert_eq!(values(p), vec![2, 4, 1, 6, 3, 5]);
    assert_eq!(unsafe { ppm_longest_decreasing(p) }, 2);
    let mut small = [0usize; 2];
    assert_eq!(unsafe { ppm_perm_values(p, small.as_mut_ptr(), 2) }, PpmStatus::BufferTooSmall);
    unsafe { ppm_perm_free(p) };

    let text = CString::new("4132").unwrap();
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { ppm_perm_parse(text.as_ptr(), &mut q) }, PpmStatus::Ok);
    assert_eq!(values(q), vec![4, 1, 3, 2]);
    assert!(unsafe { ppm_in_skew_star(q) });
    unsafe { ppm_perm_free(q) };

    let empty = perm(&[]);
    assert_eq!(unsafe { ppm_perm_len(empty) }, 0);
    unsafe { ppm_perm_free(empty) };
}

#[test]
fn errors_set_a_message() {
    let mut out = ptr::null_mut();
    let bad = [1usize, 1];
    assert_eq!(unsafe { ppm_perm_new(bad.as_ptr(), 2, &mut out) }, PpmStatus::InvalidInput);
    assert!(out.is_null());
    assert!(last_error().contains('1'));
    assert_eq!(unsafe { ppm_perm_new(bad.as_ptr(), 2, ptr::null_mut()) }, PpmStatus::InvalidInput);
    assert_eq!(unsafe { ppm_perm_parse(ptr::null(), &mut out) }, PpmStatus::NullPointer);
    assert_eq!(last_error(), "text is null");

    let p = perm(&[1]);
    assert_eq!(unsafe { ppm_perm_values(p, ptr::null_mut(), 5) }, PpmStatus::NullPointer);
    unsafe { ppm_perm_free(p) };
    assert!(ppm_last_error().is_null() || !last_error().is_empty());
    unsafe { ppm_perm_free(ptr::null_mut()) };
}

#[test]
fn contains_reports_witness() {
    let p = perm(&[2, 1, 3]);
    let t = perm(&[2, 5, 1, 4, 3]);
    for algo in [PpmAlgorithm::Brute, PpmAlgorithm::Backtrack, PpmAlgorithm::SeparatorDp] {
        let mut occ = [0usize; 3];
        assert_eq!(unsafe { ppm_contains(p, t, algo, 0, occ.as_mut_ptr()) }, PpmStatus::Ok);
        let pattern = "213".parse().unwrap();
        let text = "25143".parse().unwrap();
        assert!(ppm_core::perm::is_occurrence(&pattern, &text, &ppm_core::Occurrence(occ.to_vec())).unwrap());
    }
    unsafe { ppm_perm_free(p) };

    let dec = perm(&[3, 2, 1]);
    let inc = perm(&[1, 2, 3, 4]);
    assert_eq!(unsafe { ppm_contains(dec, inc, PpmAlgorithm::Backtrack, 0, ptr::null_mut()) }, PpmStatus::No);
    assert_eq!(unsafe { ppm_contains(dec, t, PpmAlgorithm::Backtrack, 1, ptr::null_mut()) }, PpmStatus::Indeterminate);
    assert_eq!(
        unsafe { ppm_contains(ptr::null(), t, PpmAlgorithm::Brute, 0, ptr::null_mut()) },
        PpmStatus::NullPointer
    );
    unsafe {
        ppm_perm_free(dec);
        ppm_perm_free(inc);
        ppm_perm_free(t);
    }
}

#[test]
fn universal_permutations() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ppm_k_track(2, &mut out) }, PpmStatus::Ok);
    assert_eq!(values(out), vec![1, 3, 2, 4]);
    unsafe { ppm_perm_free(out) };
    assert_eq!(unsafe { ppm_k_spiral(2, &mut out) }, PpmStatus::Ok);
    assert_eq!(values(out), vec![4, 1, 3, 2]);
    unsafe { ppm_perm_free(out) };
    assert_eq!(unsafe { ppm_k_track(0, &mut out) }, PpmStatus::InvalidInput);
    assert_eq!(unsafe { ppm_k_track(1 << 40, &mut out) }, PpmStatus::LimitExceeded);
}

#[test]
fn classify() {
    let mut c = PpmComplexity::Polynomial;
    let rho = perm(&[3, 2, 1]);
    assert_eq!(unsafe { ppm_classify(rho, &mut c) }, PpmStatus::Ok);
    assert_eq!(c, PpmComplexity::NpComplete);
    unsafe { ppm_perm_free(rho) };
    let rho = perm(&[2, 3, 1]);
    assert_eq!(unsafe { ppm_classify(rho, &mut c) }, PpmStatus::Ok);
    assert_eq!(c, PpmComplexity::Polynomial);
    unsafe { ppm_perm_free(rho) };
}

#[test]
fn reduction_decides() {
    let src = CString::new("p cnf 3 1\n1 -2 3 0\n").unwrap();
    let mut red = ptr::null_mut();
    assert_eq!(unsafe { ppm_reduction_from_dimacs(src.as_ptr(), false, &mut red) }, PpmStatus::Ok);
    assert_eq!(unsafe { ppm_perm_len(ppm_reduction_pattern(red)) }, 115);
    assert_eq!(unsafe { ppm_perm_len(ppm_reduction_text(red)) }, 157);
    let mut phi = [true; 3];
    assert_eq!(unsafe { ppm_reduction_decide(red, phi.as_mut_ptr(), 3) }, PpmStatus::Ok);
    assert_eq!(phi, [false, false, false]);
    assert_eq!(unsafe { ppm_reduction_decide(red, phi.as_mut_ptr(), 2) }, PpmStatus::BufferTooSmall);
    unsafe { ppm_reduction_free(red) };

    let mut tw = ptr::null_mut();
    assert_eq!(unsafe { ppm_reduction_from_dimacs(src.as_ptr(), true, &mut tw) }, PpmStatus::Ok);
    assert!(unsafe { ppm_in_skew_star(ppm_reduction_pattern(tw)) });
    unsafe { ppm_reduction_free(tw) };

    let mut lines = String::from("p cnf 3 8\n");
    for m in 0..8 {
        for v in 1..=3 {
            lines += &format!("{}{v} ", if m >> (v - 1) & 1 == 1 { "" } else { "-" });
        }
        lines += "0\n";
    }
    let unsat = CString::new(lines).unwrap();
    let mut red = ptr::null_mut();
    assert_eq!(unsafe { ppm_reduction_from_dimacs(unsat.as_ptr(), false, &mut red) }, PpmStatus::Ok);
    assert_eq!(unsafe { ppm_reduction_decide(red, ptr::null_mut(), 0) }, PpmStatus::No);
    unsafe { ppm_reduction_free(red) };

    let bad = CString::new("p cnf 3 1\n1 2 0\n").unwrap();
    assert_eq!(unsafe { ppm_reduction_from_dimacs(bad.as_ptr(), false, &mut red) }, PpmStatus::InvalidInput);
    assert!(last_error().starts_with("DIMACS"));
}
