//! Braid-group generator actions on V^{otimes m}: the odd generators apply
//! A to one tensor factor, the even generators scale basis vectors by an
//! entry of B. Provides relation verification, trace evaluation of braid
//! words, and the Markov trace identity.

use std::fmt;

use crate::mat::{Mat, MatError};
use crate::pair;
use crate::scalar::{Ctx, Scalar};
use crate::spin::{self, SpinError};

#[derive(Debug, Clone, PartialEq)]
pub enum BraidError {
    BudgetExceeded { needed: u128, budget: u128 },
    SingularA,
    BNotSchurInvertible,
    BadWord(String),
    GeneratorOutOfRange { index: usize, strands: usize },
    NotNormalized,
    TooFewFactors { m: usize, needed: usize },
    Mat(MatError),
}

impl fmt::Display for BraidError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BraidError::BudgetExceeded { needed, budget } => {
                write!(f, "tensor space size {} exceeds budget {}", needed, budget)
            }
            BraidError::SingularA => write!(f, "A is not invertible"),
            BraidError::BNotSchurInvertible => write!(f, "B is not Schur invertible"),
            BraidError::BadWord(tok) => write!(f, "bad braid word token: {}", tok),
            BraidError::GeneratorOutOfRange { index, strands } => {
                write!(f, "generator {} out of range for {} strands", index, strands)
            }
            BraidError::NotNormalized => write!(f, "pair does not satisfy the trace conditions"),
            BraidError::TooFewFactors { m, needed } => {
                write!(f, "need at least {} tensor factors, got {}", needed, m)
            }
            BraidError::Mat(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for BraidError {}

impl From<MatError> for BraidError {
    fn from(e: MatError) -> BraidError {
        BraidError::Mat(e)
    }
}

pub const DEFAULT_BUDGET: u128 = 4096;

// ---------------------------------------------------------------------------
// words
// ---------------------------------------------------------------------------

/// A word in the braid group B_r: signed generator indices, 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<(usize, bool)>, // (index, inverse?)
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<(usize, bool)>) -> Result<BraidWord, BraidError> {
        for &(i, _) in &letters {
            if i == 0 || i >= strands {
                return Err(BraidError::GeneratorOutOfRange { index: i, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Parses whitespace-separated tokens `s<k>` and `-s<k>`.
    pub fn parse(strands: usize, text: &str) -> Result<BraidWord, BraidError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (inv, body) = match tok.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, tok),
            };
            let idx = body
                .strip_prefix('s')
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| BraidError::BadWord(tok.to_string()))?;
            letters.push((idx, inv));
        }
        BraidWord::new(strands, letters)
    }

    /// True when the word uses only generators 1..=strands-2.
    pub fn avoids_last_generator(&self) -> bool {
        self.letters.iter().all(|&(i, _)| i + 1 < self.strands)
    }

    pub fn rotate_left(&self, k: usize) -> BraidWord {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        BraidWord { strands: self.strands, letters }
    }
}

// ---------------------------------------------------------------------------
// tensor operators
// ---------------------------------------------------------------------------

/// A generator image on V^{otimes m}, applied lazily to vectors indexed by
/// mixed-radix basis labels (r_1, ..., r_m).
#[derive(Debug, Clone)]
pub enum TensorOperator {
    /// Applies the matrix to tensor factor `factor` (0-based).
    Odd { n: usize, m: usize, factor: usize, mat: Mat },
    /// Scales e_{r_1} x ... x e_{r_m} by b[r_factor, r_{factor+1}].
    Even { n: usize, m: usize, factor: usize, b: Mat },
}

/// Vector over V^{otimes m}: coefficient per basis label, label digits
/// read r_1 as the most significant digit.
pub type TensorVec = Vec<Scalar>;

pub fn dimension(n: usize, m: usize) -> u128 {
    (n as u128).pow(m as u32)
}

fn digit(index: usize, pos: usize, n: usize, m: usize) -> usize {
    index / n.pow((m - 1 - pos) as u32) % n
}

impl TensorOperator {
    pub fn order(&self) -> usize {
        match self {
            TensorOperator::Odd { n, .. } | TensorOperator::Even { n, .. } => *n,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            TensorOperator::Odd { m, .. } | TensorOperator::Even { m, .. } => *m,
        }
    }

    pub fn apply(&self, v: &TensorVec) -> TensorVec {
        match self {
            TensorOperator::Odd { n, m, factor, mat } => {
                let stride = n.pow((m - 1 - factor) as u32);
                let ctx = mat.ctx();
                let mut out = vec![Scalar::zero(&ctx); v.len()];
                for (idx, coeff) in v.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let d = digit(idx, *factor, *n, *m);
                    let base = idx - d * stride;
                    for r in 0..*n {
                        let e = mat.at(r, d);
                        if !e.is_zero() {
                            let slot = base + r * stride;
                            out[slot] = &out[slot] + &(e * coeff);
                        }
                    }
                }
                out
            }
            TensorOperator::Even { n, m, factor, b } => {
                v.iter()
                    .enumerate()
                    .map(|(idx, coeff)| {
                        let ri = digit(idx, *factor, *n, *m);
                        let rj = digit(idx, *factor + 1, *n, *m);
                        b.at(ri, rj) * coeff
                    })
                    .collect()
            }
        }
    }

    /// Dense matrix of the operator; debug path, gated by n^m <= 64.
    pub fn materialize(&self) -> Mat {
        let n = self.order();
        let m = self.arity();
        let dim = dimension(n, m);
        assert!(dim <= 64, "dense materialization is gated at dimension 64");
        let dim = dim as usize;
        let ctx = match self {
            TensorOperator::Odd { mat, .. } => mat.ctx(),
            TensorOperator::Even { b, .. } => b.ctx(),
        };
        Mat::from_fn(dim, ctx, |r, c| {
            let mut e = vec![Scalar::zero(&ctx); dim];
            e[c] = Scalar::one(&ctx);
            self.apply(&e)[r].clone()
        })
    }
}

/// Generator images g_1 .. g_{r-1} on V^{otimes m}; inverses come from
/// A^{-1} and B^{(-)}.
pub struct Generators {
    pub n: usize,
    pub m: usize,
    pub strands: usize,
    forward: Vec<TensorOperator>,
    backward: Vec<TensorOperator>,
}

impl Generators {
    pub fn generator(&self, index: usize, inverse: bool) -> &TensorOperator {
        assert!(index >= 1 && index < self.strands);
        if inverse {
            &self.backward[index - 1]
        } else {
            &self.forward[index - 1]
        }
    }

    pub fn apply_word(&self, word: &BraidWord, v: &TensorVec) -> TensorVec {
        // the word acts as a product of operators, rightmost letter first
        let mut v = v.clone();
        for &(i, inv) in word.letters.iter().rev() {
            v = self.generator(i, inv).apply(&v);
        }
        v
    }
}

pub fn build_generators(
    a: &Mat,
    b: &Mat,
    strands: usize,
    m: usize,
    budget: u128,
) -> Result<Generators, BraidError> {
    let n = a.order();
    b.check_same_order(a)?;
    let needed = (strands + 1) / 2;
    if m < needed {
        return Err(BraidError::TooFewFactors { m, needed });
    }
    let dim = dimension(n, m);
    if dim > budget {
        return Err(BraidError::BudgetExceeded { needed: dim, budget });
    }
    let a_inv = a.inverse().map_err(|_| BraidError::SingularA)?;
    let b_sinv = b.schur_inverse().map_err(|_| BraidError::BNotSchurInvertible)?;
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    for g in 1..strands {
        if g % 2 == 1 {
            let factor = (g - 1) / 2;
            forward.push(TensorOperator::Odd { n, m, factor, mat: a.clone() });
            backward.push(TensorOperator::Odd { n, m, factor, mat: a_inv.clone() });
        } else {
            let factor = g / 2 - 1;
            forward.push(TensorOperator::Even { n, m, factor, b: b.clone() });
            backward.push(TensorOperator::Even { n, m, factor, b: b_sinv.clone() });
        }
    }
    Ok(Generators { n, m, strands, forward, backward })
}

// ---------------------------------------------------------------------------
// relation verification
// ---------------------------------------------------------------------------

fn operators_equal(gens: &Generators, lhs: &[(usize, bool)], rhs: &[(usize, bool)]) -> bool {
    let dim = dimension(gens.n, gens.m) as usize;
    let ctx = gens.generator(1, false).ctx();
    let lword = BraidWord { strands: gens.strands, letters: lhs.to_vec() };
    let rword = BraidWord { strands: gens.strands, letters: rhs.to_vec() };
    for idx in 0..dim {
        let mut e = vec![Scalar::zero(&ctx); dim];
        e[idx] = Scalar::one(&ctx);
        if gens.apply_word(&lword, &e) != gens.apply_word(&rword, &e) {
            return false;
        }
    }
    true
}

impl TensorOperator {
    fn ctx_of(&self) -> Ctx {
        match self {
            TensorOperator::Odd { mat, .. } => mat.ctx(),
            TensorOperator::Even { b, .. } => b.ctx(),
        }
    }
}

impl Generators {
    fn ctx(&self) -> Ctx {
        self.forward[0].ctx_of()
    }
}

impl TensorOperator {
    pub fn ctx(&self) -> Ctx {
        self.ctx_of()
    }
}

#[derive(Debug, Clone)]
pub struct RelationReport {
    pub braid_relations: bool,
    pub far_commutation: bool,
    pub jones_pair: bool,
}

impl RelationReport {
    pub fn representation(&self) -> bool {
        self.braid_relations && self.far_commutation
    }
}

/// Exhaustive check of the braid relations and far commutation on every
/// basis vector of V^{otimes m}. At the minimal m the braid relations hold
/// exactly when (A, B) is a Jones pair; the agreement is asserted.
pub fn verify_braid_relations(
    a: &Mat,
    b: &Mat,
    strands: usize,
    m: usize,
    budget: u128,
) -> Result<RelationReport, BraidError> {
    let gens = build_generators(a, b, strands, m, budget)?;
    let mut braid_relations = true;
    for i in 1..strands - 1 {
        let lhs = [(i, false), (i + 1, false), (i, false)];
        let rhs = [(i + 1, false), (i, false), (i + 1, false)];
        if !operators_equal(&gens, &lhs, &rhs) {
            braid_relations = false;
        }
    }
    let mut far_commutation = true;
    for i in 1..strands {
        for j in i + 2..strands {
            let lhs = [(i, false), (j, false)];
            let rhs = [(j, false), (i, false)];
            if !operators_equal(&gens, &lhs, &rhs) {
                far_commutation = false;
            }
        }
    }
    let report = pair::check_pair(a, b).map_err(BraidError::from_pair)?;
    let jones_pair = report.two_sided;
    assert!(far_commutation, "far commutation is structural");
    if m == (strands + 1) / 2 && strands >= 4 {
        assert_eq!(
            braid_relations, jones_pair,
            "representation property must match the Jones pair verdict at minimal m"
        );
    }
    Ok(RelationReport { braid_relations, far_commutation, jones_pair })
}

impl BraidError {
    fn from_pair(e: crate::pair::PairError) -> BraidError {
        match e {
            crate::pair::PairError::Mat(m) => BraidError::Mat(m),
            _ => BraidError::NotNormalized,
        }
    }
}

/// At m = 2, the map e_i x e_j -> E_{ij} identifies g_1, g_2, g_3 with
/// X_A, Delta_B, Y_A. Verified by comparing reshaped columns.
pub fn vec_identification_check(a: &Mat, b: &Mat) -> Result<bool, BraidError> {
    use crate::endo::{self, LiftKind};
    let n = a.order();
    b.check_same_order(a)?;
    let gens = build_generators(a, b, 4, 2, u128::MAX)?;
    let ctx = a.ctx();
    let dim = n * n;
    // phi sends the basis label (i, j) to E_{ij}; under row-major vec the
    // identification is the identity on coordinates, so the materialized
    // generator must equal the lifted operator's action matrix
    let lifted = [
        endo::lift(LiftKind::X, a),
        endo::lift(LiftKind::Delta, b),
        endo::lift(LiftKind::Y, a),
    ];
    for (g, lift) in (1..=3).zip(lifted.iter()) {
        let dense = gens.generator(g, false).materialize();
        for col in 0..dim {
            let mut e = vec![Scalar::zero(&ctx); dim];
            e[col] = Scalar::one(&ctx);
            let via_lift = lift.apply(&Mat::from_vec(n, ctx, e)).vec();
            for row in 0..dim {
                if *dense.at(row, col) != via_lift[row] {
                    return Ok(false);
                }
            }
        }
    }
    // g_3 column identity: phi g_3 (e_i x e_j) = E_{ij} A^T
    for i in 0..n {
        for j in 0..n {
            let mut e = vec![Scalar::zero(&ctx); dim];
            e[i * n + j] = Scalar::one(&ctx);
            let image = Mat::from_vec(n, ctx, gens.generator(3, false).apply(&e));
            if image != &Mat::elementary(n, ctx, i, j) * &a.transpose() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// traces
// ---------------------------------------------------------------------------

/// Trace of the product of lambda-scaled generator images of `word` on
/// V^{otimes m}, m = floor((strands+1)/2).
pub fn braid_trace(
    a: &Mat,
    b: &Mat,
    word: &BraidWord,
    lambda: &Scalar,
    budget: u128,
) -> Result<Scalar, BraidError> {
    let la = a.scale(lambda);
    let lb = b.scale(lambda);
    let m = (word.strands + 1) / 2;
    let gens = build_generators(&la, &lb, word.strands, m, budget)?;
    let ctx = gens.ctx();
    let dim = dimension(gens.n, m) as usize;
    let mut trace = Scalar::zero(&ctx);
    for idx in 0..dim {
        let mut e = vec![Scalar::zero(&ctx); dim];
        e[idx] = Scalar::one(&ctx);
        let image = gens.apply_word(word, &e);
        trace = &trace + &image[idx];
    }
    Ok(trace)
}

#[derive(Debug, Clone)]
pub struct MarkovReport {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub holds: bool,
}

/// Both sides of tr(h g_{r-1}^{+-1}) = (1/n) tr(h) tr(A)^{+-1} for a word
/// h over generators 1..r-2 of a pair already satisfying the trace
/// conditions (constant diagonal 1/D on A and A^{-1}, row sums D on B and
/// B^{(-)}).
pub fn markov_check(
    a: &Mat,
    b: &Mat,
    h_word: &BraidWord,
    positive: bool,
    d: &Scalar,
    budget: u128,
) -> Result<MarkovReport, BraidError> {
    if !h_word.avoids_last_generator() {
        return Err(BraidError::BadWord("h must avoid the last generator".into()));
    }
    let norm = spin::markov_normalize(a, b, d).map_err(|e| match e {
        SpinError::Mat(m) => BraidError::Mat(m),
        _ => BraidError::NotNormalized,
    })?;
    if !(norm.all_hold() && norm.lambda.is_one()) {
        return Err(BraidError::NotNormalized);
    }
    let ctx = a.ctx();
    let n = a.order();
    let one = Scalar::one(&ctx);
    let mut extended = h_word.clone();
    extended.letters.push((h_word.strands - 1, !positive));
    let lhs = braid_trace(a, b, &extended, &one, budget)?;
    let tr_h = braid_trace(a, b, h_word, &one, budget)?;
    let tr_a = if positive { a.trace() } else { a.inverse()?.trace() };
    let rhs = &(&tr_h * &tr_a) * &Scalar::from_int(&ctx, n as i64).inv().unwrap();
    Ok(MarkovReport { holds: lhs == rhs, lhs, rhs })
}
