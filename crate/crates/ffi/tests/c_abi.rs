use std::process::Command;
use std::ptr;

use lrmkit_ffi::*;

const PI: [i64; 9] = [4, 5, 9, 6, 8, 1, 3, 7, 2];

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    let len = unsafe { lrmk_last_error(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..len.min(255)].iter().map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

#[test]
fn permcode_round_trip() {
    unsafe {
        let mut code = ptr::null_mut();
        assert_eq!(lrmk_permcode_encode(PI.as_ptr(), PI.len(), true, &mut code), LrmkStatus::Ok);
        assert_eq!(lrmk_permcode_len(code), 9);
        assert_eq!(lrmk_permcode_runs(code), 4);
        assert!(lrmk_permcode_size_bits(code) > 0);
        let mut out = 0usize;
        for i in 1..=9 {
            assert_eq!(lrmk_permcode_apply(code, i, &mut out), LrmkStatus::Ok);
            assert_eq!(out as i64, PI[i - 1]);
            let mut back = 0usize;
            assert_eq!(lrmk_permcode_inverse(code, out, &mut back), LrmkStatus::Ok);
            assert_eq!(back, i);
            let (mut s, mut p) = (0usize, 0usize);
            assert_eq!(lrmk_permcode_map(code, i, &mut s, &mut p), LrmkStatus::Ok);
            assert_eq!(lrmk_permcode_unmap(code, s, p, &mut back), LrmkStatus::Ok);
            assert_eq!(back, i);
        }
        assert_eq!(lrmk_permcode_psv(code, 9, &mut out), LrmkStatus::Ok);
        assert_eq!(out, 6);
        assert_eq!(lrmk_permcode_rmq(code, 3, 9, &mut out), LrmkStatus::Ok);
        assert_eq!(out, 6);

        let (mut buf, mut len) = (ptr::null_mut(), 0usize);
        assert_eq!(lrmk_permcode_serialize(code, &mut buf, &mut len), LrmkStatus::Ok);
        let mut loaded = ptr::null_mut();
        assert_eq!(lrmk_permcode_load(buf, len, &mut loaded), LrmkStatus::Ok);
        assert_eq!(lrmk_permcode_apply(loaded, 3, &mut out), LrmkStatus::Ok);
        assert_eq!(out, 9);
        lrmk_bytes_free(buf, len);
        lrmk_permcode_free(loaded);
        lrmk_permcode_free(code);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut code = ptr::null_mut();
        let dup = [1i64, 1];
        assert_eq!(lrmk_permcode_encode(dup.as_ptr(), 2, false, &mut code), LrmkStatus::Contract);
        assert!(last_error().contains("position 2"));
        assert!(code.is_null());

        assert_eq!(lrmk_permcode_encode(PI.as_ptr(), 9, false, &mut code), LrmkStatus::Ok);
        let mut out = 0usize;
        assert_eq!(lrmk_permcode_apply(code, 10, &mut out), LrmkStatus::Range);
        assert_eq!(lrmk_permcode_psv(code, 1, &mut out), LrmkStatus::Capability);
        assert_eq!(lrmk_permcode_apply(code, 1, ptr::null_mut()), LrmkStatus::NullPointer);
        assert_eq!(lrmk_permcode_apply(ptr::null(), 1, &mut out), LrmkStatus::NullPointer);
        lrmk_permcode_free(code);

        let junk = *b"LRMK\x09\x08\0\0\0\0\0\0\0\0";
        assert_eq!(lrmk_permcode_load(junk.as_ptr(), junk.len(), &mut code), LrmkStatus::Format);
        assert!(last_error().contains("version"));
        lrmk_permcode_free(ptr::null_mut());
        assert_eq!(lrmk_permcode_len(ptr::null()), 0);
    }
}

#[test]
fn rmq_indices() {
    let scan = |i: usize, j: usize| (i..=j).min_by_key(|&k| (PI[k - 1], k)).unwrap();
    for kind in [LrmkIndexKind::Plain, LrmkIndexKind::StrictRuns, LrmkIndexKind::Runs] {
        unsafe {
            let mut idx = ptr::null_mut();
            assert_eq!(lrmk_rmq_build(kind, PI.as_ptr(), 9, &mut idx), LrmkStatus::Ok);
            assert_eq!(lrmk_rmq_len(idx), 9);
            assert!(lrmk_rmq_size_bits(idx) > 0);
            for i in 1..=9 {
                for j in i..=9 {
                    let (mut pos, mut cmp) = (0usize, 0u64);
                    let st = lrmk_rmq_query(idx, PI.as_ptr(), 9, i, j, &mut pos, &mut cmp);
                    assert_eq!(st, LrmkStatus::Ok);
                    assert_eq!(pos, scan(i, j));
                    assert!(cmp <= u64::from(kind == LrmkIndexKind::Runs));
                }
            }
            let mut pos = 0usize;
            let st = lrmk_rmq_query(idx, ptr::null(), 0, 5, 3, &mut pos, ptr::null_mut());
            let want = if kind == LrmkIndexKind::Runs {
                LrmkStatus::Capability
            } else {
                LrmkStatus::Range
            };
            assert_eq!(st, want);
            lrmk_rmq_free(idx);
        }
    }
    unsafe {
        let mut idx = ptr::null_mut();
        assert_eq!(lrmk_rmq_build(LrmkIndexKind::Plain, ptr::null(), 0, &mut idx), LrmkStatus::Contract);
    }
}

#[test]
fn sort_in_place() {
    let mut v = PI;
    let mut cmp = 0u64;
    assert_eq!(unsafe { lrmk_sort(v.as_mut_ptr(), v.len(), &mut cmp) }, LrmkStatus::Ok);
    assert_eq!(v, [1, 2, 3, 4, 5, 6, 7, 8, 9]);
    assert!(cmp > 0 && cmp <= 42);
    assert_eq!(unsafe { lrmk_sort(ptr::null_mut(), 0, ptr::null_mut()) }, LrmkStatus::Ok);
}

#[test]
fn header_compiles_as_c() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"lrmkit.h\"\nint main(void) { LrmkPermCode *c = 0; size_t out; \
         return lrmk_permcode_apply(c, 1, &out) == LRMK_STATUS_NULL_POINTER ? 0 : 1; }\n",
    )
    .unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", include])
        .arg(&src)
        .status()
    else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    assert!(status.success());
}
