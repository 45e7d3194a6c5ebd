//! Scalar arithmetic: exact elements of the cyclotomic field Q(zeta_N),
//! or complex doubles with a global tolerance.
//!
//! Exact scalars are stored as polynomials in `z` modulo `x^N - 1`, kept
//! canonically reduced modulo the N-th cyclotomic polynomial so that
//! equality and zero tests are plain coefficient comparisons.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Mutex, OnceLock};

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, Zero};

static FLOAT_EPS_BITS: AtomicU64 = AtomicU64::new(0);

/// Absolute tolerance used for all float-mode comparisons. Defaults to 1e-9.
pub fn float_tolerance() -> f64 {
    let bits = FLOAT_EPS_BITS.load(Ordering::Relaxed);
    if bits == 0 {
        1e-9
    } else {
        f64::from_bits(bits)
    }
}

pub fn set_float_tolerance(eps: f64) {
    FLOAT_EPS_BITS.store(eps.to_bits(), Ordering::Relaxed);
}

/// Scalar construction context: which mode, and which conductor in exact mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ctx {
    Exact { conductor: usize },
    Float,
}

impl Ctx {
    pub fn exact(conductor: usize) -> Ctx {
        assert!(conductor >= 1, "conductor must be positive");
        Ctx::Exact { conductor }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Ctx::Exact { .. })
    }

    pub fn conductor(&self) -> usize {
        match self {
            Ctx::Exact { conductor } => *conductor,
            Ctx::Float => 1,
        }
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / num::integer::gcd(a, b) * b
}

// ---------------------------------------------------------------------------
// polynomial helpers over Q, dense coefficient vectors, lowest degree first
// ---------------------------------------------------------------------------

fn poly_trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

/// Exact division, panics if the remainder is nonzero.
fn poly_div_exact(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let mut rem: Vec<BigRational> = num.to_vec();
    poly_trim(&mut rem);
    let mut den = den.to_vec();
    poly_trim(&mut den);
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    assert!(!lead.is_zero());
    if rem.len() < den.len() {
        assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
        return vec![BigRational::zero()];
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] / &lead;
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                let t = &c * d;
                rem[i + j] = &rem[i + j] - &t;
            }
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

/// Remainder of `p` modulo the monic polynomial `m`, in place.
fn poly_mod(p: &mut Vec<BigRational>, m: &[BigRational]) {
    let dm = m.len() - 1;
    debug_assert!(m[dm].is_one());
    while p.len() > dm {
        let c = p.pop().unwrap();
        if !c.is_zero() {
            let k = p.len() - dm;
            for (j, mj) in m.iter().take(dm).enumerate() {
                let t = &c * mj;
                p[k + j] = &p[k + j] - &t;
            }
        }
    }
    while p.len() < 1 {
        p.push(BigRational::zero());
    }
}

/// The N-th cyclotomic polynomial, memoized.
fn cyclotomic(n: usize) -> Vec<BigRational> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<BigRational>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    let mut num = vec![BigRational::zero(); n + 1];
    num[0] = -BigRational::one();
    num[n] = BigRational::one();
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic(d));
        }
    }
    cache.lock().unwrap().insert(n, num.clone());
    num
}

/// Extended gcd in Q[x]: returns (g, u) with u*a = g (mod b).
fn poly_ext_gcd(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut u0 = vec![BigRational::one()];
    let mut u1 = vec![BigRational::zero()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_div_rem(&r0, &r1);
        let u = poly_sub(&u0, &poly_mul(&q, &u1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = u;
    }
    (r0, u0)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = ai * bj;
            out[i + j] = &out[i + j] + &t;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, ai) in a.iter().enumerate() {
        out[i] = ai.clone();
    }
    for (i, bi) in b.iter().enumerate() {
        out[i] = &out[i] - bi;
    }
    poly_trim(&mut out);
    out
}

fn poly_div_rem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    let mut den = b.to_vec();
    poly_trim(&mut den);
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    if rem.len() <= dd {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] / &lead;
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                let t = &c * d;
                rem[i + j] = &rem[i + j] - &t;
            }
        }
        quot[i] = c;
    }
    poly_trim(&mut rem);
    (quot, rem)
}

// ---------------------------------------------------------------------------
// exact cyclotomic element
// ---------------------------------------------------------------------------

/// An element of Q(zeta_N), stored as coefficients of 1, z, ..., z^{N-1},
/// always reduced modulo Phi_N so equality is coefficient equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyc {
    conductor: usize,
    coeffs: Vec<BigRational>,
}

impl Cyc {
    fn reduce(&mut self) {
        // fold exponents mod N, then reduce mod Phi_N
        let n = self.conductor;
        let mut p = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            let k = k % n;
            p[k] = &p[k] + c;
        }
        poly_mod(&mut p, &cyclotomic(n));
        p.resize(n, BigRational::zero());
        self.coeffs = p;
    }

    pub fn zero(conductor: usize) -> Cyc {
        Cyc { conductor, coeffs: vec![BigRational::zero(); conductor] }
    }

    pub fn from_rational(conductor: usize, q: BigRational) -> Cyc {
        let mut c = Cyc::zero(conductor);
        c.coeffs[0] = q;
        c.reduce();
        c
    }

    pub fn root_of_unity(conductor: usize, k: i64) -> Cyc {
        let n = conductor as i64;
        let k = k.rem_euclid(n) as usize;
        let mut c = Cyc::zero(conductor);
        c.coeffs[k] = BigRational::one();
        c.reduce();
        c
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Returns the rational value if this element has degree zero.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn lift(&self, conductor: usize) -> Cyc {
        assert!(conductor % self.conductor == 0, "conductor lift must divide");
        let step = conductor / self.conductor;
        let mut out = Cyc::zero(conductor);
        for (k, c) in self.coeffs.iter().enumerate() {
            out.coeffs[k * step] = c.clone();
        }
        out.reduce();
        out
    }

    fn binop(a: &Cyc, b: &Cyc) -> (Cyc, Cyc) {
        if a.conductor == b.conductor {
            (a.clone(), b.clone())
        } else {
            let n = lcm(a.conductor, b.conductor);
            (a.lift(n), b.lift(n))
        }
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        let (mut a, b) = Cyc::binop(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x = &*x + y;
        }
        a.reduce();
        a
    }

    pub fn neg(&self) -> Cyc {
        let mut a = self.clone();
        for c in a.coeffs.iter_mut() {
            *c = -c.clone();
        }
        a
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        let (a, b) = Cyc::binop(self, other);
        let n = a.conductor;
        let mut out = Cyc::zero(n);
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let k = (i + j) % n;
                let t = ai * bj;
                out.coeffs[k] = &out.coeffs[k] + &t;
            }
        }
        out.reduce();
        out
    }

    pub fn inv(&self) -> Option<Cyc> {
        if self.is_zero() {
            return None;
        }
        let phi = cyclotomic(self.conductor);
        let mut a = self.coeffs.clone();
        poly_trim(&mut a);
        let (g, u) = poly_ext_gcd(&a, &phi);
        // Phi_N is irreducible over Q, so the gcd is a nonzero constant
        assert!(g.len() == 1 && !g[0].is_zero(), "cyclotomic inverse failed");
        let scale = g[0].recip();
        let mut coeffs: Vec<BigRational> = u.iter().map(|c| c * &scale).collect();
        poly_mod(&mut coeffs, &phi);
        coeffs.resize(self.conductor, BigRational::zero());
        let mut out = Cyc { conductor: self.conductor, coeffs };
        out.reduce();
        Some(out)
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc({})", Scalar::Exact(self.clone()))
    }
}

// ---------------------------------------------------------------------------
// Scalar
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Cyc),
    Float(Complex64),
}

impl Scalar {
    pub fn ctx(&self) -> Ctx {
        match self {
            Scalar::Exact(c) => Ctx::Exact { conductor: c.conductor() },
            Scalar::Float(_) => Ctx::Float,
        }
    }

    pub fn zero(ctx: &Ctx) -> Scalar {
        match ctx {
            Ctx::Exact { conductor } => Scalar::Exact(Cyc::zero(*conductor)),
            Ctx::Float => Scalar::Float(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one(ctx: &Ctx) -> Scalar {
        Scalar::from_int(ctx, 1)
    }

    pub fn from_int(ctx: &Ctx, k: i64) -> Scalar {
        match ctx {
            Ctx::Exact { conductor } => {
                Scalar::Exact(Cyc::from_rational(*conductor, BigRational::from_integer(k.into())))
            }
            Ctx::Float => Scalar::Float(Complex64::new(k as f64, 0.0)),
        }
    }

    pub fn from_ratio(ctx: &Ctx, p: i64, q: i64) -> Scalar {
        assert!(q != 0);
        match ctx {
            Ctx::Exact { conductor } => Scalar::Exact(Cyc::from_rational(
                *conductor,
                BigRational::new(p.into(), q.into()),
            )),
            Ctx::Float => Scalar::Float(Complex64::new(p as f64 / q as f64, 0.0)),
        }
    }

    pub fn from_rational(ctx: &Ctx, q: BigRational) -> Scalar {
        match ctx {
            Ctx::Exact { conductor } => Scalar::Exact(Cyc::from_rational(*conductor, q)),
            Ctx::Float => {
                let v = rational_to_f64(&q);
                Scalar::Float(Complex64::new(v, 0.0))
            }
        }
    }

    /// zeta_N^k; exact mode only (float mode has no conductor).
    pub fn root_of_unity(ctx: &Ctx, k: i64) -> Scalar {
        match ctx {
            Ctx::Exact { conductor } => Scalar::Exact(Cyc::root_of_unity(*conductor, k)),
            Ctx::Float => panic!("root_of_unity requires exact mode"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(c) => c.is_zero(),
            Scalar::Float(z) => z.norm() <= float_tolerance(),
        }
    }

    pub fn is_one(&self) -> bool {
        (self - &Scalar::one(&self.ctx())).is_zero()
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(c) => c.inv().map(Scalar::Exact),
            Scalar::Float(z) => {
                if z.norm() <= float_tolerance() {
                    None
                } else {
                    Some(Scalar::Float(z.inv()))
                }
            }
        }
    }

    pub fn pow(&self, e: i64) -> Scalar {
        if e < 0 {
            return self.inv().expect("inverse of zero in pow").pow(-e);
        }
        let mut acc = Scalar::one(&self.ctx());
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Rational value, if this scalar is (close to) a real rational.
    /// Float mode recovers only small-denominator rationals and is used for
    /// integer extraction.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Exact(c) => c.as_rational(),
            Scalar::Float(z) => {
                if z.im.abs() > float_tolerance() {
                    return None;
                }
                let r = z.re.round();
                if (z.re - r).abs() <= float_tolerance() {
                    Some(BigRational::from_integer(BigInt::from(r as i64)))
                } else {
                    None
                }
            }
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().and_then(|q| if q.is_integer() { Some(q.to_integer()) } else { None })
    }

    /// A square root inside the same field, if one can be exhibited.
    ///
    /// Exact mode looks for a representation q * z^k with rational q; the
    /// root exists in the field when k is even and sqrt(q) is rational
    /// (negative q folds into z^{N/2} when N is even, which the scan covers).
    pub fn sqrt_in_field(&self) -> Option<Scalar> {
        match self {
            Scalar::Float(z) => Some(Scalar::Float(z.sqrt())),
            Scalar::Exact(c) => {
                let n = c.conductor();
                let ctx = self.ctx();
                for k in 0..n {
                    let t = self * &Scalar::root_of_unity(&ctx, -(k as i64));
                    let Some(q) = t.as_rational() else { continue };
                    if k % 2 != 0 || q.is_negative() {
                        continue;
                    }
                    let (num, den) = (q.numer(), q.denom());
                    let (rn, rd) = (num.sqrt(), den.sqrt());
                    if &(&rn * &rn) == num && &(&rd * &rd) == den {
                        let root = Scalar::from_rational(&ctx, BigRational::new(rn, rd))
                            * Scalar::root_of_unity(&ctx, (k / 2) as i64);
                        return Some(root);
                    }
                }
                None
            }
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Float(z) => *z,
            Scalar::Exact(c) => {
                let n = c.conductor() as f64;
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, q) in c.coeffs().iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    let t = 2.0 * std::f64::consts::PI * (k as f64) / n;
                    acc += rational_to_f64(q) * Complex64::from_polar(1.0, t);
                }
                acc
            }
        }
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    let n: f64 = q.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = q.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                if a.conductor() == b.conductor() {
                    a == b
                } else {
                    (self - other).is_zero()
                }
            }
            (Scalar::Float(a), Scalar::Float(b)) => (a - b).norm() <= float_tolerance(),
            _ => panic!("cannot compare scalars of different modes"),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $impl:expr) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $impl;
                f(self, rhs)
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(self, &rhs)
            }
        }
    };
}

scalar_binop!(Add, add, |a, b| match (a, b) {
    (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(x.add(y)),
    (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(x + y),
    _ => panic!("cannot mix scalar modes"),
});

scalar_binop!(Sub, sub, |a, b| a + &(-b));

scalar_binop!(Mul, mul, |a, b| match (a, b) {
    (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(x.mul(y)),
    (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(x * y),
    _ => panic!("cannot mix scalar modes"),
});

scalar_binop!(Div, div, |a, b: &Scalar| a * &b.inv().expect("division by zero scalar"));

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(c) => Scalar::Exact(c.neg()),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Float(z) => {
                if z.im >= 0.0 {
                    write!(f, "{}+{}i", z.re, z.im)
                } else {
                    write!(f, "{}{}i", z.re, z.im)
                }
            }
            Scalar::Exact(c) => {
                let mut terms: Vec<String> = Vec::new();
                for (k, q) in c.coeffs().iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    if k == 0 {
                        terms.push(format!("{}", q));
                    } else {
                        terms.push(format!("{}*z^{}", q, k));
                    }
                }
                if terms.is_empty() {
                    return write!(f, "0");
                }
                write!(f, "{}", terms.join("+"))
            }
        }
    }
}
