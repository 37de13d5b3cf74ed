mod common;

use common::{matrix, random_vec, rel_sup, ulp_diff, FIXTURES};
use nalgebra::DMatrix;
use toeplitz_inverse::reference::{exact_inverse_dense, exact_inverse_entry, thomas_solve, ExactInverse};
use toeplitz_inverse::Error;

#[test]
fn lu_inverse_agrees_with_closed_form() {
    for &(a, b) in &FIXTURES {
        for n in [1usize, 2, 5, 40, 200] {
            let t = matrix(a, b, n);
            let dense = DMatrix::from_fn(n, n, |i, j| t.entry(i + 1, j + 1).unwrap());
            let lu = dense.lu().try_inverse().expect("nonsingular");
            let exact = exact_inverse_dense(&t).unwrap();
            let scale = exact.entries().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for i in 0..n {
                for j in 0..n {
                    let diff = (lu[(i, j)] - exact.get(i + 1, j + 1)).abs();
                    assert!(diff <= 1e-12 * scale, "a={a} b={b} n={n} ({i}, {j}): {diff:e}");
                }
            }
        }
    }
}

#[test]
fn thomas_agrees_with_dense_inverse() {
    for &(a, b) in &FIXTURES {
        for n in [1usize, 3, 64, 500] {
            let t = matrix(a, b, n);
            let rhs = random_vec(n, 21);
            let x = thomas_solve(&t, &rhs).unwrap();
            let y = exact_inverse_dense(&t).unwrap().matvec(&rhs).unwrap();
            assert!(rel_sup(&x, &y) <= 1e-10, "a={a} b={b} n={n}");
        }
    }
}

#[test]
fn dense_is_bisymmetric() {
    for &(a, b) in &FIXTURES {
        let n = 150;
        let d = exact_inverse_dense(&matrix(a, b, n)).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                let v = d.get(i, j);
                assert!(ulp_diff(v, d.get(j, i)) <= 2);
                assert!(ulp_diff(v, d.get(n + 1 - j, n + 1 - i)) <= 2);
            }
        }
    }
}

#[test]
fn entry_and_dense_agree() {
    let t = matrix(-3.0, 1.0, 77);
    let d = exact_inverse_dense(&t).unwrap();
    let e = ExactInverse::new(&t);
    for i in 1..=77 {
        for j in 1..=77 {
            assert!(ulp_diff(e.entry(i, j).unwrap(), d.get(i, j)) <= 2);
        }
    }
    assert!(matches!(exact_inverse_entry(&t, 0, 1), Err(Error::IndexOutOfRange { .. })));
}

#[test]
fn large_order_entries_stay_finite() {
    let t = matrix(2.5, 1.0, 1_000_000);
    let e = ExactInverse::new(&t);
    let mid = e.entry(500_000, 500_000).unwrap();
    assert!(mid.is_finite() && mid > 0.0);
    // deep interior diagonal equals the infinite-order value 1 / (b (r+ - r-))
    assert!((mid - 1.0 / 1.5).abs() < 1e-15);
    assert!(matches!(exact_inverse_dense(&t), Err(Error::OrderTooLargeForDense { .. })));
}
