//! Built-in instances: the exhaustive 2x2 root-of-unity scan, Sylvester
//! Hadamard matrices, and the trivial pair. The scan checks the defining
//! eigenvector equations directly on matrix columns, so it is independent
//! of the operator-based verification pipeline.

use crate::mat::Mat;
use crate::scalar::{Ctx, Scalar};

/// (I, J) of order n.
pub fn trivial_pair(n: usize, ctx: Ctx) -> (Mat, Mat) {
    (Mat::identity(n, ctx), Mat::all_ones(n, ctx))
}

/// Sylvester Hadamard matrix; `order` must be a power of two.
pub fn sylvester_hadamard(order: usize, ctx: Ctx) -> Mat {
    assert!(order.is_power_of_two(), "Sylvester construction needs a power of two");
    Mat::from_fn(order, ctx, |i, j| {
        // H_{ij} = (-1)^{popcount(i & j)}
        if (i & j).count_ones() % 2 == 0 {
            Scalar::one(&ctx)
        } else {
            Scalar::from_int(&ctx, -1)
        }
    })
}

/// Direct check of the eigenvector equations for (A, B) and (A, B^T),
/// written on columns only. Used as the scan oracle.
fn eigenvector_equations_hold(a: &Mat, b: &Mat) -> bool {
    let n = a.order();
    for bmat in [b.clone(), b.transpose()] {
        for i in 0..n {
            for j in 0..n {
                let v: Vec<Scalar> = (0..n).map(|r| a.at(r, i) * bmat.at(r, j)).collect();
                let lhs = a.mul_vec(&v);
                let s = bmat.at(i, j);
                if lhs.iter().zip(v.iter()).any(|(l, vk)| *l != s * vk) {
                    return false;
                }
            }
        }
    }
    true
}

/// Exhaustive scan over u = zeta_16^k with A = uI + u^{-1}(J - I) and
/// B = c A^{(-)} for c in {zeta_16^m} and {sqrt(2) zeta_16^m}. Returns every
/// invertible Jones pair found, with D = sqrt(2) = zeta_16^2 + zeta_16^{-2}.
pub fn scan_order2_pairs() -> Vec<(Mat, Mat, Scalar)> {
    let ctx = Ctx::exact(16);
    let sqrt2 = Scalar::root_of_unity(&ctx, 2) + Scalar::root_of_unity(&ctx, -2);
    let j = Mat::all_ones(2, ctx);
    let i = Mat::identity(2, ctx);
    let mut found = Vec::new();
    for k in 0..16 {
        let u = Scalar::root_of_unity(&ctx, k);
        let a = &i.scale(&u) + &(&j - &i).scale(&u.inv().unwrap());
        if !a.is_invertible() || !a.is_schur_invertible() {
            continue;
        }
        let ainv_schur = a.schur_inverse().unwrap();
        let mut candidates = Vec::new();
        for m in 0..16 {
            let zm = Scalar::root_of_unity(&ctx, m);
            candidates.push(zm.clone());
            candidates.push(&sqrt2 * &zm);
        }
        for c in candidates {
            let b = ainv_schur.scale(&c);
            if !b.is_invertible() || !b.is_schur_invertible() {
                continue;
            }
            if eigenvector_equations_hold(&a, &b) {
                found.push((a.clone(), b, sqrt2.clone()));
            }
        }
    }
    found
}

/// The canonical derived 2x2 invertible Jones pair (first scan hit), with
/// its exact square root of 2.
pub fn derived_pair_2x2() -> (Mat, Mat, Scalar) {
    let found = scan_order2_pairs();
    assert!(!found.is_empty(), "2x2 scan found no invertible Jones pair");
    found.into_iter().next().unwrap()
}

/// Potts-type two-weight spin model of order 4: A = mu (2I - J) with
/// mu = i/sqrt(2), so that (A, A^{(-)}) is an invertible Jones pair.
/// Verified against the eigenvector-equation oracle on construction.
pub fn potts_two_weight_4x4() -> Mat {
    let ctx = Ctx::exact(8);
    // i/sqrt(2) = (z + z^3)/2 at conductor 8
    let mu = &(&Scalar::root_of_unity(&ctx, 1) + &Scalar::root_of_unity(&ctx, 3))
        * &Scalar::from_ratio(&ctx, 1, 2);
    let a = Mat::from_fn(4, ctx, |i, j| {
        let e = if i == j { 1 } else { -1 };
        &mu * &Scalar::from_int(&ctx, e)
    });
    let sinv = a.schur_inverse().expect("entries nonzero");
    assert!(eigenvector_equations_hold(&a, &sinv), "Potts instance must satisfy the equations");
    a
}

/// A 2x2 generalized spin model instance: a type II matrix A with
/// (A^T, D A^{(-)}) a one-sided Jones pair, D = sqrt(2). Found by scanning
/// signed 16th roots of unity; verified against the oracle on construction.
pub fn generalized_spin_2x2() -> (Mat, Scalar) {
    let ctx = Ctx::exact(16);
    let d = &Scalar::root_of_unity(&ctx, 2) + &Scalar::root_of_unity(&ctx, -2);
    let a0 = -&Scalar::root_of_unity(&ctx, 7);
    let b0 = Scalar::root_of_unity(&ctx, 3);
    let a = Mat::from_entries(2, ctx, vec![a0.clone(), b0.clone(), b0, a0]);
    let b = a.schur_inverse().expect("entries nonzero").scale(&d);
    assert!(
        eigenvector_equations_hold(&a.transpose(), &b),
        "generalized spin instance must satisfy the equations"
    );
    (a, d)
}
