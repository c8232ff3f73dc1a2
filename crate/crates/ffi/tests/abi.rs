use std::ffi::{CStr, CString};
use std::ptr;

use mforce_ffi::*;

fn parse(text: &str) -> *mut MforceMatrix {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mforce_matrix_parse(c.as_ptr(), &mut out) }, MforceStatus::Ok);
    out
}

fn serialize(m: *const MforceMatrix) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mforce_matrix_serialize(m, &mut s) }, MforceStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { mforce_string_free(s) };
    text
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(mforce_last_error_message()) }.to_str().unwrap().to_owned()
}

#[test]
fn matrix_lifecycle() {
    let m = parse("2 3\n101\n010\n");
    unsafe {
        assert_eq!(mforce_matrix_rows(m), 2);
        assert_eq!(mforce_matrix_cols(m), 3);
        assert_eq!(mforce_matrix_ones_count(m), 3);
        let mut v = false;
        assert_eq!(mforce_matrix_get(m, 0, 2, &mut v), MforceStatus::Ok);
        assert!(v);
        assert_eq!(mforce_matrix_set(m, 0, 2, false), MforceStatus::Ok);
        assert_eq!(mforce_matrix_get(m, 5, 0, &mut v), MforceStatus::OutOfBounds);
        assert!(last_error().contains("outside"));
        assert_eq!(serialize(m), "2 3\n100\n010\n");
        mforce_matrix_free(m);
        mforce_matrix_free(ptr::null_mut());
        mforce_string_free(ptr::null_mut());
    }
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    let bad = CString::new("10\n1").unwrap();
    unsafe {
        assert_eq!(mforce_matrix_parse(bad.as_ptr(), &mut out), MforceStatus::Parse);
        assert!(last_error().contains("line 2"));
        assert_eq!(mforce_matrix_new(0, 3, &mut out), MforceStatus::Dimension);
        assert_eq!(mforce_matrix_parse(ptr::null(), &mut out), MforceStatus::NullPointer);
        assert_eq!(mforce_matrix_identity(2, ptr::null_mut()), MforceStatus::NullPointer);
        assert_eq!(mforce_construct_s(2, &mut out), MforceStatus::Precondition);
        assert_eq!(mforce_extremal_2x2(4, 9, &mut out), MforceStatus::Precondition);
        let mut b = false;
        assert_eq!(mforce_is_forcing(ptr::null(), ptr::null(), &mut b), MforceStatus::NullPointer);
        assert_eq!(mforce_matrix_identity(2, &mut out), MforceStatus::Ok);
        assert_eq!(last_error(), "");
        mforce_matrix_free(out);
    }
}

#[test]
fn forcing_calls() {
    let q = parse("01\n10");
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(mforce_minimal_forcing(4, 4, q, &mut a), MforceStatus::Ok);
        let mut ones = 0u64;
        assert_eq!(mforce_min_ones(4, 4, q, &mut ones), MforceStatus::Ok);
        assert_eq!(ones as usize, mforce_matrix_ones_count(a));
        assert_eq!(ones, 14);
        let mut b = ptr::null_mut();
        assert_eq!(mforce_construct_a_mnq(4, 4, q, &mut b), MforceStatus::Ok);
        assert_eq!(serialize(a), serialize(b));
        let mut ok = false;
        assert_eq!(mforce_is_forcing(a, q, &mut ok), MforceStatus::Ok);
        assert!(ok);
        // No closed form below 2s x 2t; the construction count is used.
        assert_eq!(mforce_min_ones(3, 3, q, &mut ones), MforceStatus::Ok);
        let mut c = ptr::null_mut();
        assert_eq!(mforce_minimal_forcing(3, 3, q, &mut c), MforceStatus::Ok);
        assert_eq!(ones as usize, mforce_matrix_ones_count(c));
        for m in [q, a, b, c] {
            mforce_matrix_free(m);
        }
    }
}

#[test]
fn strong_calls() {
    unsafe {
        let (mut s5, mut i3) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(mforce_construct_s(5, &mut s5), MforceStatus::Ok);
        assert_eq!(mforce_matrix_identity(3, &mut i3), MforceStatus::Ok);
        let mut ok = false;
        assert_eq!(mforce_is_strongly_forcing(s5, i3, &mut ok), MforceStatus::Ok);
        assert!(ok);
        let (mut rows, mut cols, mut found) = ([0usize; 3], [0usize; 3], false);
        assert_eq!(
            mforce_find_witness(s5, i3, 0, 0, rows.as_mut_ptr(), cols.as_mut_ptr(), &mut found),
            MforceStatus::Ok
        );
        assert!(found);
        assert_eq!(rows[0], 0);
        assert_eq!(cols[0], 0);
        assert_eq!(
            mforce_find_witness(s5, i3, 0, 1, rows.as_mut_ptr(), cols.as_mut_ptr(), &mut found),
            MforceStatus::Precondition
        );

        let mut t5 = ptr::null_mut();
        assert_eq!(mforce_construct_t(5, &mut t5), MforceStatus::Ok);
        assert_eq!(mforce_matrix_ones_count(t5), 13);
        let mut snk = ptr::null_mut();
        assert_eq!(mforce_construct_s_nk(6, 4, &mut snk), MforceStatus::Ok);
        assert_eq!(mforce_matrix_ones_count(snk), 14);
        let mut jh = ptr::null_mut();
        assert_eq!(mforce_extremal_2x2(4, MforceVariant::I2 as u32, &mut jh), MforceStatus::Ok);
        assert_eq!(mforce_matrix_ones_count(jh), 12);
        let mut sum = ptr::null_mut();
        assert_eq!(mforce_direct_sum(jh, s5, &mut sum), MforceStatus::Ok);
        assert_eq!(mforce_matrix_rows(sum), 9);
        let mut lz = ptr::null_mut();
        assert_eq!(mforce_linear_zero_construction(10, 10, i3, &mut lz), MforceStatus::Ok);
        assert_eq!(mforce_is_strongly_forcing(lz, i3, &mut ok), MforceStatus::Ok);
        assert!(ok);

        let mut json = ptr::null_mut();
        assert_eq!(mforce_search_max_json(4, i3, 0, false, &mut json), MforceStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        mforce_string_free(json);
        assert_eq!(v["status"], "exact");
        assert_eq!(v["best_ones"], 7);
        for m in [s5, i3, t5, snk, jh, sum, lz] {
            mforce_matrix_free(m);
        }
    }
}
