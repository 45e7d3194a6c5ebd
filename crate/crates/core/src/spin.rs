//! Four-weight spin models and their equivalence with invertible Jones
//! pairs, two-weight and generalized spin models, the Markov trace
//! normalization, and the degree/dimension and two-graph analysis of
//! low-dimensional pairs.

use std::fmt;

use crate::mat::{Mat, MatError};
use crate::nomura::{self, NomuraError};
use crate::pair::{self, PairError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum SpinError {
    BadSquareRoot,
    NotInvertibleJonesPair,
    AxiomsFail(AxiomFailure),
    NotTypeII,
    NotOneSided,
    NotDimensionTwo { dimension: usize },
    NotSymmetric,
    EntriesNotPlusMinus { row: usize, col: usize },
    Mat(MatError),
    Pair(PairError),
}

impl fmt::Display for SpinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinError::BadSquareRoot => write!(f, "D^2 does not equal the matrix order"),
            SpinError::NotInvertibleJonesPair => write!(f, "not an invertible Jones pair"),
            SpinError::AxiomsFail(a) => write!(f, "spin model axioms fail: {}", a),
            SpinError::NotTypeII => write!(f, "matrix is not type II"),
            SpinError::NotOneSided => write!(f, "not a one-sided Jones pair"),
            SpinError::NotDimensionTwo { dimension } => {
                write!(f, "algebra has dimension {}, expected 2", dimension)
            }
            SpinError::NotSymmetric => write!(f, "matrix is not symmetric"),
            SpinError::EntriesNotPlusMinus { row, col } => {
                write!(f, "entry ({}, {}) is not +1 or -1 after normalization", row, col)
            }
            SpinError::Mat(e) => write!(f, "{}", e),
            SpinError::Pair(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for SpinError {}

impl From<MatError> for SpinError {
    fn from(e: MatError) -> SpinError {
        SpinError::Mat(e)
    }
}

impl From<PairError> for SpinError {
    fn from(e: PairError) -> SpinError {
        SpinError::Pair(e)
    }
}

#[derive(Debug, Clone)]
pub struct FourWeightSpinModel {
    pub w1: Mat,
    pub w2: Mat,
    pub w3: Mat,
    pub w4: Mat,
    pub d: Scalar,
}

impl FourWeightSpinModel {
    pub fn new(w1: Mat, w2: Mat, w3: Mat, w4: Mat, d: Scalar) -> Result<Self, SpinError> {
        let n = w1.order();
        for w in [&w2, &w3, &w4] {
            if w.order() != n {
                return Err(SpinError::Mat(MatError::OrderMismatch {
                    left: n,
                    right: w.order(),
                }));
            }
        }
        let ctx = w1.ctx();
        if &d * &d != Scalar::from_int(&ctx, n as i64) {
            return Err(SpinError::BadSquareRoot);
        }
        Ok(FourWeightSpinModel { w1, w2, w3, w4, d })
    }

    pub fn order(&self) -> usize {
        self.w1.order()
    }
}

/// Which axiom family failed, with the first violating indices.
#[derive(Debug, Clone, PartialEq)]
pub enum AxiomFailure {
    SchurPairing { which: u8, row: usize, col: usize },
    InversePairing { which: u8, row: usize, col: usize },
    Type3a { k: usize, i: usize, j: usize },
    Type3b { k: usize, i: usize, j: usize },
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomFailure::SchurPairing { which, row, col } => {
                write!(f, "W{} o W{}^T != J at ({}, {})", which, which + 2, row, col)
            }
            AxiomFailure::InversePairing { which, row, col } => {
                write!(f, "W{} W{} != nI at ({}, {})", which, which + 2, row, col)
            }
            AxiomFailure::Type3a { k, i, j } => {
                write!(f, "type (3a) sum fails at (k, i, j) = ({}, {}, {})", k, i, j)
            }
            AxiomFailure::Type3b { k, i, j } => {
                write!(f, "type (3b) sum fails at (k, i, j) = ({}, {}, {})", k, i, j)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpinModelReport {
    pub schur_pairings: bool,
    pub inverse_pairings: bool,
    pub type3a: bool,
    pub type3b: bool,
    pub first_failure: Option<AxiomFailure>,
}

impl SpinModelReport {
    pub fn passes(&self) -> bool {
        self.schur_pairings && self.inverse_pairings && self.type3a && self.type3b
    }
}

/// sum_h (W1)_{k,h} (W1)_{h,i} (W4)_{h,j} = D (W4)_{i,j} (W1)_{k,i} (W4)_{k,j}
fn type3a_holds_at(w1: &Mat, w4: &Mat, d: &Scalar, k: usize, i: usize, j: usize) -> bool {
    let ctx = w1.ctx();
    let n = w1.order();
    let mut sum = Scalar::zero(&ctx);
    for h in 0..n {
        sum = &sum + &(&(w1.at(k, h) * w1.at(h, i)) * w4.at(h, j));
    }
    sum == &(d * w4.at(i, j)) * &(w1.at(k, i) * w4.at(k, j))
}

pub fn check_four_weight(model: &FourWeightSpinModel) -> SpinModelReport {
    let n = model.order();
    let ctx = model.w1.ctx();
    let mut report = SpinModelReport {
        schur_pairings: true,
        inverse_pairings: true,
        type3a: true,
        type3b: true,
        first_failure: None,
    };
    let fail = |report: &mut SpinModelReport, f: AxiomFailure| {
        if report.first_failure.is_none() {
            report.first_failure = Some(f);
        }
    };

    let one = Scalar::one(&ctx);
    for (which, (wa, wb)) in [(1u8, (&model.w1, &model.w3)), (2, (&model.w2, &model.w4))] {
        'pairing: for r in 0..n {
            for c in 0..n {
                if wa.at(r, c) * wb.at(c, r) != one {
                    report.schur_pairings = false;
                    fail(&mut report, AxiomFailure::SchurPairing { which, row: r, col: c });
                    break 'pairing;
                }
            }
        }
    }

    let n_identity = Mat::identity(n, ctx).scale(&Scalar::from_int(&ctx, n as i64));
    for (which, (wa, wb)) in [(1u8, (&model.w1, &model.w3)), (2, (&model.w2, &model.w4))] {
        let prod = wa * wb;
        if prod != n_identity {
            report.inverse_pairings = false;
            let (r, c) = (0..n * n)
                .map(|idx| (idx / n, idx % n))
                .find(|&(r, c)| prod.at(r, c) != n_identity.at(r, c))
                .unwrap();
            fail(&mut report, AxiomFailure::InversePairing { which, row: r, col: c });
        }
    }

    'a: for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if !type3a_holds_at(&model.w1, &model.w4, &model.d, k, i, j) {
                    report.type3a = false;
                    fail(&mut report, AxiomFailure::Type3a { k, i, j });
                    break 'a;
                }
            }
        }
    }

    // (3b) is (3a) with W1, W4 replaced by their transposes
    let w1t = model.w1.transpose();
    let w4t = model.w4.transpose();
    'b: for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if !type3a_holds_at(&w1t, &w4t, &model.d, k, i, j) {
                    report.type3b = false;
                    fail(&mut report, AxiomFailure::Type3b { k, i, j });
                    break 'b;
                }
            }
        }
    }

    report
}

/// (A, B) invertible Jones pair with D^2 = n gives the model
/// (DA, nB^{-1}, DA^{-1}, B; D).
pub fn pair_to_spinmodel(a: &Mat, b: &Mat, d: &Scalar) -> Result<FourWeightSpinModel, SpinError> {
    let n = a.order();
    let ctx = a.ctx();
    if d * d != Scalar::from_int(&ctx, n as i64) {
        return Err(SpinError::BadSquareRoot);
    }
    let report = pair::check_pair(a, b).map_err(|_| SpinError::NotInvertibleJonesPair)?;
    if !report.invertible {
        return Err(SpinError::NotInvertibleJonesPair);
    }
    let n_scalar = Scalar::from_int(&ctx, n as i64);
    let a_inv = a.inverse()?;
    let b_inv = b.inverse()?;
    let model = FourWeightSpinModel::new(
        a.scale(d),
        b_inv.scale(&n_scalar),
        a_inv.scale(d),
        b.clone(),
        d.clone(),
    )?;
    let check = check_four_weight(&model);
    assert!(check.passes(), "model from invertible Jones pair must pass: {:?}", check.first_failure);
    Ok(model)
}

/// Inverse of pair_to_spinmodel: (A, B) = (D^{-1} W1, W4); verifies the
/// axioms, the invertible-Jones-pair conclusion, and the exact roundtrip.
pub fn spinmodel_to_pair(model: &FourWeightSpinModel) -> Result<(Mat, Mat), SpinError> {
    let check = check_four_weight(model);
    if !check.passes() {
        return Err(SpinError::AxiomsFail(check.first_failure.unwrap()));
    }
    let d_inv = model.d.inv().ok_or(SpinError::BadSquareRoot)?;
    let a = model.w1.scale(&d_inv);
    let b = model.w4.clone();
    let report = pair::check_pair(&a, &b).map_err(|_| SpinError::NotInvertibleJonesPair)?;
    if !report.invertible {
        return Err(SpinError::NotInvertibleJonesPair);
    }
    let back = pair_to_spinmodel(&a, &b, &model.d)?;
    assert!(
        back.w1 == model.w1 && back.w2 == model.w2 && back.w3 == model.w3 && back.w4 == model.w4,
        "roundtrip must reproduce all four weight matrices"
    );
    Ok((a, b))
}

/// A is a two-weight spin model (up to the given scalar normalizer) when
/// (mu A, (mu A)^{(-)}) is a Jones pair.
pub fn check_two_weight_normalized(a: &Mat, normalizer: &Scalar) -> bool {
    let scaled = a.scale(normalizer);
    let Ok(a_sinv) = scaled.schur_inverse() else { return false };
    match pair::check_pair(&scaled, &a_sinv) {
        Ok(report) => report.two_sided,
        Err(_) => false,
    }
}

/// A is a two-weight spin model when (A, A^{(-)}) is a Jones pair.
pub fn check_two_weight(a: &Mat) -> bool {
    check_two_weight_normalized(a, &Scalar::one(&a.ctx()))
}

#[derive(Debug, Clone)]
pub struct GeneralizedSpinReport {
    pub one_sided: bool,
    pub two_sided: bool,
}

/// Generalized spin model check: A type II with (A^T, D A^{(-)}) one-sided.
/// One-sidedness forces the pair to be two-sided; a one-sided-but-not-
/// two-sided outcome is a pipeline failure.
pub fn generalized_spin_check(a: &Mat, d: &Scalar) -> Result<GeneralizedSpinReport, SpinError> {
    if !a.is_type_ii() {
        return Err(SpinError::NotTypeII);
    }
    let ctx = a.ctx();
    if d * d != Scalar::from_int(&ctx, a.order() as i64) {
        return Err(SpinError::BadSquareRoot);
    }
    let at = a.transpose();
    let b = a.schur_inverse()?.scale(d);
    let report = pair::check_pair(&at, &b)?;
    if report.one_sided {
        assert!(report.two_sided, "one-sided generalized spin model must be two-sided");
    }
    Ok(GeneralizedSpinReport { one_sided: report.one_sided, two_sided: report.two_sided })
}

#[derive(Debug, Clone)]
pub struct MarkovNormalization {
    pub lambda: Scalar,
    pub diag_a: bool,
    pub diag_a_inv: bool,
    pub row_sums_b: bool,
    pub row_sums_b_sinv: bool,
}

impl MarkovNormalization {
    pub fn all_hold(&self) -> bool {
        self.diag_a && self.diag_a_inv && self.row_sums_b && self.row_sums_b_sinv
    }
}

/// For an invertible Jones pair, lambda = 1/(aD) (a the constant diagonal
/// of A) makes (lambda A, lambda B) satisfy the Markov trace conditions:
/// diagonal entries of lambda A and (lambda A)^{-1} equal 1/D, row sums of
/// lambda B and (lambda B)^{(-)} equal D.
pub fn markov_normalize(a: &Mat, b: &Mat, d: &Scalar) -> Result<MarkovNormalization, SpinError> {
    let n = a.order();
    let ctx = a.ctx();
    if d * d != Scalar::from_int(&ctx, n as i64) {
        return Err(SpinError::BadSquareRoot);
    }
    let report = pair::check_pair(a, b)?;
    if !report.invertible {
        return Err(SpinError::NotInvertibleJonesPair);
    }
    assert!(report.diag_of_a_constant, "invertible Jones pair must have constant diagonal");
    let diag = a.at(0, 0).clone();
    let lambda = (&diag * d).inv().ok_or(SpinError::NotInvertibleJonesPair)?;
    let la = a.scale(&lambda);
    let lb = b.scale(&lambda);
    let d_inv = d.inv().unwrap();
    let la_inv = la.inverse()?;
    let lb_sinv = lb.schur_inverse()?;
    let row_sum = |m: &Mat, i: usize| -> Scalar {
        (0..n).fold(Scalar::zero(&ctx), |acc, j| &acc + m.at(i, j))
    };
    Ok(MarkovNormalization {
        lambda,
        diag_a: (0..n).all(|i| *la.at(i, i) == d_inv),
        diag_a_inv: (0..n).all(|i| *la_inv.at(i, i) == d_inv),
        row_sums_b: (0..n).all(|i| row_sum(&lb, i) == *d),
        row_sums_b_sinv: (0..n).all(|i| row_sum(&lb_sinv, i) == *d),
    })
}

#[derive(Debug, Clone)]
pub struct DegreeDimension {
    pub degree: usize,
    pub dimension: usize,
}

fn distinct_count(values: &[Scalar]) -> usize {
    let mut distinct: Vec<&Scalar> = Vec::new();
    for v in values {
        if !distinct.iter().any(|w| *w == v) {
            distinct.push(v);
        }
    }
    distinct.len()
}

/// Degree = number of distinct entries of B (= distinct eigenvalues of A,
/// cross-checked via the column entries of B); dimension = dim N_{A,B}.
pub fn degree_dimension(a: &Mat, b: &Mat) -> Result<DegreeDimension, SpinError> {
    let report = pair::check_pair(a, b)?;
    if !report.one_sided {
        return Err(SpinError::NotOneSided);
    }
    let n = a.order();
    let degree = distinct_count(&b.vec());
    // each column of B lists all eigenvalues of A, so the per-column
    // distinct counts agree with the global one
    for j in 0..n {
        let col: Vec<Scalar> = (0..n).map(|i| b.at(i, j).clone()).collect();
        assert_eq!(distinct_count(&col), degree, "column {} of B has a different entry count", j);
    }
    let alg = nomura::nomura_algebra(a, b).map_err(spin_from_nomura)?;
    let dimension = alg.dimension;
    assert!(degree <= dimension, "degree must be bounded by the dimension");
    let identity = Mat::identity(n, a.ctx());
    if *a != identity {
        assert!(dimension >= 2, "dimension is at least two unless A = I");
    }
    Ok(DegreeDimension { degree, dimension })
}

fn spin_from_nomura(e: NomuraError) -> SpinError {
    match e {
        NomuraError::Mat(m) => SpinError::Mat(m),
        _ => SpinError::NotOneSided,
    }
}

#[derive(Debug, Clone)]
pub struct TwoGraphReport {
    pub lambda: Scalar,
    pub gamma: Scalar,
    pub c: Mat,
    pub delta: i64,
    pub schur_square_in_ij_span: bool,
    pub passes: bool,
}

/// For an invertible Jones pair with A symmetric and dim N_{A,B} = 2:
/// A = lambda I + gamma C with C symmetric, zero diagonal, entries +-1,
/// and C^2 - delta C - (n-1) I = 0 for an integer delta.
pub fn two_graph_analysis(a: &Mat, b: &Mat) -> Result<TwoGraphReport, SpinError> {
    let report = pair::check_pair(a, b)?;
    if !report.invertible {
        return Err(SpinError::NotInvertibleJonesPair);
    }
    if !a.is_symmetric() {
        return Err(SpinError::NotSymmetric);
    }
    let dd = degree_dimension(a, b)?;
    if dd.dimension != 2 {
        return Err(SpinError::NotDimensionTwo { dimension: dd.dimension });
    }
    let n = a.order();
    let ctx = a.ctx();
    let lambda = a.at(0, 0).clone();

    // off-diagonal entries take a single value up to sign; gamma is that
    // magnitude, signed so the lexicographically first off-diagonal entry
    // of C that the mean rule leaves free comes out +1
    let first_off = a.at(0, 1).clone();
    let mut sum_off = Scalar::zero(&ctx);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum_off = &sum_off + a.at(i, j);
            }
        }
    }
    let gamma = if sum_off.is_zero() { first_off } else {
        // mean of the off-diagonal entries, rescaled to entry magnitude:
        // each entry is +-gamma, so the mean is a rational multiple of gamma
        let count = Scalar::from_int(&ctx, (n * n - n) as i64);
        let mean = &sum_off * &count.inv().unwrap();
        // pick the off-diagonal entry whose sign matches the mean
        let mut pick = first_off.clone();
        'scan: for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let e = a.at(i, j);
                // e has the majority sign iff mean / e is a positive rational
                if let Some(r) = (&mean * &e.inv().unwrap()).as_rational() {
                    if r > num::BigRational::from_integer(0.into()) {
                        pick = e.clone();
                        break 'scan;
                    }
                }
            }
        }
        pick
    };
    let gamma_inv = gamma.inv().ok_or(SpinError::EntriesNotPlusMinus { row: 0, col: 1 })?;

    let one = Scalar::one(&ctx);
    let minus_one = -&one;
    let mut c = Mat::zero(n, ctx);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                if *a.at(i, i) != lambda {
                    return Err(SpinError::NotDimensionTwo { dimension: 2 });
                }
                continue;
            }
            let e = &gamma_inv * a.at(i, j);
            if e != one && e != minus_one {
                return Err(SpinError::EntriesNotPlusMinus { row: i, col: j });
            }
            c.set(i, j, e);
        }
    }
    assert_eq!(*a, &Mat::identity(n, ctx).scale(&lambda) + &c.scale(&gamma));

    // A o A = lambda^2 I + gamma^2 (J - I) lies in span{I, J}
    let aa = a.schur(a)?;
    let basis = vec![Mat::identity(n, ctx), Mat::all_ones(n, ctx)];
    let schur_square_in_ij_span = nomura::span_contains(&basis, &aa);

    // C^2 - delta C - (n-1)I = 0 with integer delta, read off from any
    // nonzero off-diagonal cell of C^2
    let c2 = &c * &c;
    let mut delta: Option<i64> = None;
    'find: for i in 0..n {
        for j in 0..n {
            if i != j {
                let ratio = &(c2.at(i, j).clone()) * &c.at(i, j).inv().unwrap();
                let Some(int) = ratio.as_integer() else { continue };
                delta = int.try_into().ok();
                if delta.is_some() {
                    break 'find;
                }
            }
        }
    }
    let delta = delta.unwrap_or(0);
    let expected = &c.scale(&Scalar::from_int(&ctx, delta))
        + &Mat::identity(n, ctx).scale(&Scalar::from_int(&ctx, (n - 1) as i64));
    let passes = c2 == expected && schur_square_in_ij_span;
    Ok(TwoGraphReport { lambda, gamma, c, delta, schur_square_in_ij_span, passes })
}
