//! Endomorphisms of the n x n matrix space, materialized as n^2 x n^2
//! matrices over the same scalar field. Columns are indexed by the
//! elementary-matrix basis E_{i,j} in row-major order, so operator
//! identities reduce to exact matrix equality.

use std::fmt;

use crate::mat::Mat;
use crate::scalar::Ctx;

#[derive(Debug, Clone, PartialEq)]
pub enum EndoError {
    NotAJonesPair,
}

impl fmt::Display for EndoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndoError::NotAJonesPair => write!(f, "(A, B) does not satisfy the braid relation"),
        }
    }
}

impl std::error::Error for EndoError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftKind {
    /// X_C(M) = C M
    X,
    /// Delta_C(M) = C o M
    Delta,
    /// Y_C(M) = M C^T
    Y,
}

#[derive(Clone, PartialEq)]
pub struct EndoMap {
    n: usize,
    action: Mat, // order n^2
}

impl fmt::Debug for EndoMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EndoMap(n={}) {:?}", self.n, self.action)
    }
}

impl EndoMap {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn action(&self) -> &Mat {
        &self.action
    }

    pub fn identity(n: usize, ctx: Ctx) -> EndoMap {
        EndoMap { n, action: Mat::identity(n * n, ctx) }
    }

    /// Builds the operator from its action on every E_{i,j}.
    pub fn from_action_on_basis(n: usize, ctx: Ctx, f: impl Fn(usize, usize) -> Mat) -> EndoMap {
        let mut action = Mat::zero(n * n, ctx);
        for i in 0..n {
            for j in 0..n {
                let image = f(i, j);
                debug_assert_eq!(image.order(), n);
                let col = i * n + j;
                for r in 0..n {
                    for c in 0..n {
                        action.set(r * n + c, col, image.at(r, c).clone());
                    }
                }
            }
        }
        EndoMap { n, action }
    }

    pub fn apply(&self, m: &Mat) -> Mat {
        let v = self.action.mul_vec(&m.vec());
        Mat::from_vec(self.n, m.ctx(), v)
    }

    /// self after other: (self . other)(M) = self(other(M)).
    pub fn compose(&self, other: &EndoMap) -> EndoMap {
        assert_eq!(self.n, other.n);
        EndoMap { n: self.n, action: &self.action * &other.action }
    }

    /// Adjoint with respect to the bilinear form tr(M^T N). Under the
    /// row-major vectorization this form is the standard dot product, so
    /// the adjoint is the transpose of the action matrix.
    pub fn transpose(&self) -> EndoMap {
        EndoMap { n: self.n, action: self.action.transpose() }
    }

    pub fn inverse(&self) -> Option<EndoMap> {
        self.action.inverse().ok().map(|action| EndoMap { n: self.n, action })
    }
}

pub fn lift(kind: LiftKind, c: &Mat) -> EndoMap {
    let n = c.order();
    let ctx = c.ctx();
    EndoMap::from_action_on_basis(n, ctx, |i, j| {
        let e = Mat::elementary(n, ctx, i, j);
        match kind {
            LiftKind::X => c * &e,
            LiftKind::Delta => c.schur(&e).expect("same order"),
            LiftKind::Y => &e * &c.transpose(),
        }
    })
}

/// X_A Delta_B X_A (= Delta_B X_A Delta_B on one-sided Jones pairs).
fn xdx(a: &Mat, b: &Mat) -> EndoMap {
    let xa = lift(LiftKind::X, a);
    let db = lift(LiftKind::Delta, b);
    xa.compose(&db).compose(&xa)
}

fn dxd(a: &Mat, b: &Mat) -> EndoMap {
    let xa = lift(LiftKind::X, a);
    let db = lift(LiftKind::Delta, b);
    db.compose(&xa).compose(&db)
}

/// X_A Delta_B X_A = Delta_B X_A Delta_B, checked two ways: as operator
/// matrices, and basis-wise as A(B o (A E_{ij})) = B o (A (B o E_{ij})).
pub fn braid_relation_holds(a: &Mat, b: &Mat) -> bool {
    assert_eq!(a.order(), b.order(), "braid relation needs matching orders");
    let op = xdx(a, b) == dxd(a, b);
    let n = a.order();
    let ctx = a.ctx();
    let mut basis_wise = true;
    'outer: for i in 0..n {
        for j in 0..n {
            let e = Mat::elementary(n, ctx, i, j);
            let lhs = a * &b.schur(&(a * &e)).unwrap();
            let rhs = b.schur(&(a * &b.schur(&e).unwrap())).unwrap();
            if lhs != rhs {
                basis_wise = false;
                break 'outer;
            }
        }
    }
    assert_eq!(op, basis_wise, "operator and basis-wise braid checks disagree");
    op
}

/// Y_A Delta_B Y_A = Delta_B Y_A Delta_B as operator matrices.
pub fn y_braid_relation_holds(a: &Mat, b: &Mat) -> bool {
    let ya = lift(LiftKind::Y, a);
    let db = lift(LiftKind::Delta, b);
    ya.compose(&db).compose(&ya) == db.compose(&ya).compose(&db)
}

/// The two triple products of the exchange lemma:
/// X_A Delta_B X_C = Delta_Q X_R Delta_S  and  X_A Delta_C X_B = Delta_R X_Q Delta_{S^T}.
/// The lemma asserts the two verdicts always coincide.
pub fn exchange_check(a: &Mat, b: &Mat, c: &Mat, q: &Mat, r: &Mat, s: &Mat) -> (bool, bool) {
    let triple_x = |p: &Mat, m: &Mat, t: &Mat| {
        lift(LiftKind::X, p)
            .compose(&lift(LiftKind::Delta, m))
            .compose(&lift(LiftKind::X, t))
    };
    let triple_d = |p: &Mat, m: &Mat, t: &Mat| {
        lift(LiftKind::Delta, p)
            .compose(&lift(LiftKind::X, m))
            .compose(&lift(LiftKind::Delta, t))
    };
    let first = triple_x(a, b, c) == triple_d(q, r, s);
    let second = triple_x(a, c, b) == triple_d(r, q, &s.transpose());
    (first, second)
}

/// Lambda = X_A Delta_B X_A for a one-sided Jones pair.
pub fn lambda_operator(a: &Mat, b: &Mat) -> Result<EndoMap, EndoError> {
    if !braid_relation_holds(a, b) {
        return Err(EndoError::NotAJonesPair);
    }
    Ok(xdx(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Ctx, Scalar};

    fn ctx() -> Ctx {
        Ctx::exact(8)
    }

    #[test]
    fn lifts_of_units_are_identity() {
        let c = ctx();
        let i = Mat::identity(3, c);
        let j = Mat::all_ones(3, c);
        assert_eq!(lift(LiftKind::X, &i), EndoMap::identity(3, c));
        assert_eq!(lift(LiftKind::Delta, &j), EndoMap::identity(3, c));
        assert_eq!(lift(LiftKind::Y, &i), EndoMap::identity(3, c));
    }

    #[test]
    fn delta_has_elementary_eigenvectors() {
        let c = ctx();
        let b = Mat::from_fn(3, c, |i, j| Scalar::from_int(&c, (2 * i + j) as i64 + 1));
        let db = lift(LiftKind::Delta, &b);
        for i in 0..3 {
            for j in 0..3 {
                let e = Mat::elementary(3, c, i, j);
                assert_eq!(db.apply(&e), e.scale(b.at(i, j)));
            }
        }
    }

    #[test]
    fn lift_is_faithful() {
        let c = ctx();
        let m1 = Mat::from_fn(2, c, |i, j| Scalar::from_int(&c, (i + 2 * j) as i64));
        let m2 = Mat::from_fn(2, c, |i, j| Scalar::from_int(&c, (i + 2 * j + 1) as i64));
        for kind in [LiftKind::X, LiftKind::Delta, LiftKind::Y] {
            assert_ne!(lift(kind, &m1), lift(kind, &m2));
        }
    }

    #[test]
    fn transpose_laws() {
        let c = ctx();
        let a = Mat::from_fn(3, c, |i, j| {
            Scalar::root_of_unity(&c, (i * j) as i64) + Scalar::from_int(&c, (i + j) as i64)
        });
        assert_eq!(lift(LiftKind::X, &a).transpose(), lift(LiftKind::X, &a.transpose()));
        assert_eq!(lift(LiftKind::Delta, &a).transpose(), lift(LiftKind::Delta, &a));
        assert_eq!(EndoMap::identity(3, c).transpose(), EndoMap::identity(3, c));
        // contravariance of the adjoint
        let b = Mat::from_fn(3, c, |i, j| Scalar::from_int(&c, (3 * i + j) as i64 + 2));
        let t1 = lift(LiftKind::X, &a);
        let t2 = lift(LiftKind::Delta, &b);
        assert_eq!(t1.compose(&t2).transpose(), t2.transpose().compose(&t1.transpose()));
    }

    #[test]
    fn x_and_y_commute() {
        let c = ctx();
        let a = Mat::from_fn(3, c, |i, j| Scalar::from_int(&c, (i * 3 + j) as i64 + 1));
        let m = Mat::from_fn(3, c, |i, j| Scalar::root_of_unity(&c, (i + 2 * j) as i64));
        let xa = lift(LiftKind::X, &a);
        let ya = lift(LiftKind::Y, &a);
        let yc = lift(LiftKind::Y, &m);
        assert_eq!(xa.compose(&ya), ya.compose(&xa));
        assert_eq!(xa.compose(&yc), yc.compose(&xa));
    }

    #[test]
    fn braid_relation_trivial_cases() {
        let c = ctx();
        let i = Mat::identity(3, c);
        let j = Mat::all_ones(3, c);
        assert!(braid_relation_holds(&i, &j));
        assert!(!braid_relation_holds(&i, &j.scale(&Scalar::from_int(&c, 2))));
        // (lambda I, lambda J) holds for any nonzero lambda
        let lam = Scalar::root_of_unity(&c, 3);
        assert!(braid_relation_holds(&i.scale(&lam), &j.scale(&lam)));
    }

    #[test]
    fn y_braid_matches_transposed_pair() {
        let c = ctx();
        let i = Mat::identity(2, c);
        let j = Mat::all_ones(2, c);
        assert_eq!(y_braid_relation_holds(&i, &j), braid_relation_holds(&i, &j.transpose()));
        let j2 = j.scale(&Scalar::from_int(&c, 2));
        assert_eq!(y_braid_relation_holds(&i, &j2), braid_relation_holds(&i, &j2.transpose()));
    }

    #[test]
    fn exchange_identity_case() {
        let c = ctx();
        let i = Mat::identity(2, c);
        let j = Mat::all_ones(2, c);
        assert_eq!(exchange_check(&i, &j, &i, &j, &i, &j), (true, true));
    }

    #[test]
    fn lambda_of_trivial_pair() {
        let c = ctx();
        let i = Mat::identity(2, c);
        let j = Mat::all_ones(2, c);
        let lam = lambda_operator(&i, &j).unwrap();
        assert_eq!(lam, EndoMap::identity(2, c));
        assert_eq!(
            lambda_operator(&i, &j.scale(&Scalar::from_int(&c, 2))).unwrap_err(),
            EndoError::NotAJonesPair
        );
    }
}
