//! Exact integer and rational arithmetic for the bound computations.
//!
//! Everything that feeds a decision is computed over arbitrary-precision
//! integers and rationals; no floating point appears on any decision path.
//! The centrepiece is the Lovász lower-bound function `LL_c`: for `x >= 1`,
//! `LL_c(x) = C(q, c-1)` where `q >= c` is the unique real with `C(q, c) = x`
//! (`C` the generalized binomial), and `LL_c(0) = 0`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Arbitrary-precision nonnegative integer.
pub type BigNat = BigUint;
/// Exact rational, always kept normalized by `num-rational`.
pub type BigRat = BigRational;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("generalized binomial undefined: q = {q} < d - 1 = {}", d - 1)]
    GenBinomDomain { d: u64, q: String },
}

/// Binomial coefficient `C(n, i)`, zero when `i < 0` or `i > n`.
pub fn binom(n: u64, i: i64) -> BigNat {
    if i < 0 || i as u64 > n {
        return BigNat::zero();
    }
    let i = (i as u64).min(n - i as u64);
    let mut acc = BigNat::one();
    for t in 0..i {
        acc = acc * BigNat::from(n - t) / BigNat::from(t + 1);
    }
    acc
}

/// Falling factorial `(x)_i = x (x-1) ... (x-i+1)`.
pub fn falling(x: u64, i: u64) -> BigNat {
    let mut acc = BigNat::one();
    for t in 0..i {
        if t > x {
            return BigNat::zero();
        }
        acc *= BigNat::from(x - t);
    }
    acc
}

pub fn rat_from_nat(n: &BigNat) -> BigRat {
    BigRat::from_integer(BigInt::from(n.clone()))
}

pub fn rat_from_u64(n: u64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Floor of a nonnegative rational as a `BigNat`.
pub fn rat_floor_nat(r: &BigRat) -> BigNat {
    assert!(!r.is_negative(), "floor of negative rational not used here");
    r.floor().to_integer().to_biguint().expect("nonnegative")
}

/// Generalized binomial `C(q, d) = q (q-1) ... (q-d+1) / d!` for rational `q`.
///
/// Defined here for `q >= d - 1`, where it is nonnegative and strictly
/// increasing in `q` (for `q > d - 1`).
pub fn gen_binom_at(d: u64, q: &BigRat) -> Result<BigRat, ExactError> {
    if d == 0 {
        return Ok(BigRat::one());
    }
    if *q < rat_from_u64(d - 1) {
        return Err(ExactError::GenBinomDomain {
            d,
            q: q.to_string(),
        });
    }
    let mut num = BigRat::one();
    for t in 0..d {
        num *= q - rat_from_u64(t);
    }
    let fact = rat_from_nat(&falling(d, d));
    Ok(num / fact)
}

/// Dense univariate polynomial with rational coefficients, low degree first.
///
/// Only the handful of operations needed to decide ties in `ll_leq` are
/// provided: evaluation, subtraction of a constant, and a monic gcd.
#[derive(Debug, Clone, PartialEq)]
pub struct RatPoly {
    pub coeffs: Vec<BigRat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRat::zero());
        }
        RatPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, q: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c;
        }
        acc
    }

    /// The polynomial `C(q, d)` in the variable `q`.
    ///
    /// Expanded product `q (q-1) .. (q-d+1) / d!`; evaluating at an integer
    /// `q0 >= d` gives exactly `C(q0, d)`.
    pub fn gen_binom(d: u64) -> Self {
        let mut coeffs = vec![BigRat::one()];
        for t in 0..d {
            // multiply by (q - t)
            let shift = rat_from_u64(t);
            let mut next = vec![BigRat::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * &shift;
            }
            coeffs = next;
        }
        let fact = rat_from_nat(&falling(d, d));
        RatPoly::new(coeffs.into_iter().map(|c| c / &fact).collect())
    }

    pub fn sub_const(&self, k: &BigRat) -> Self {
        let mut c = self.coeffs.clone();
        c[0] -= k;
        RatPoly::new(c)
    }

    fn make_monic(&self) -> Self {
        let lead = self.coeffs.last().unwrap().clone();
        if lead.is_zero() || lead.is_one() {
            return self.clone();
        }
        RatPoly::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    fn rem(&self, div: &RatPoly) -> RatPoly {
        let dd = div.degree();
        if dd == 0 {
            return RatPoly::new(vec![BigRat::zero()]);
        }
        let mut r = self.coeffs.clone();
        let lead = div.coeffs[dd].clone();
        while r.len() > dd && r.len() > 1 {
            let k = r.len() - 1;
            let factor = &r[k] / &lead;
            if !factor.is_zero() {
                for i in 0..=dd {
                    let t = &div.coeffs[i] * &factor;
                    r[k - dd + i] -= t;
                }
            }
            r.pop();
        }
        RatPoly::new(r)
    }

    /// Monic gcd over the rationals.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }
}

/// Certified enclosure of `LL_c(x)`.
///
/// `lo <= LL_c(x) <= hi` always holds; `exact` is populated when the value
/// is known exactly as a rational, in which case `lo == hi == exact`.
#[derive(Debug, Clone, PartialEq)]
pub struct LovaszEnclosure {
    pub c: u64,
    pub x: BigNat,
    pub lo: BigRat,
    pub hi: BigRat,
    pub exact: Option<BigRat>,
}

/// Integer `q0 >= c` with `C(q0, c) = x`, if one exists.
fn integer_lattice_hit(c: u64, x: &BigNat) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    // C(q, c) is strictly increasing in integer q >= c; C(c, c) = 1.
    let (mut lo, mut hi) = (c, c + 1);
    while binom(hi, c as i64) < *x {
        lo = hi;
        hi *= 2;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match binom(mid, c as i64).cmp(x) {
            Ordering::Less => lo = mid + 1,
            _ => hi = mid,
        }
    }
    if binom(lo, c as i64) == *x {
        Some(lo)
    } else {
        None
    }
}

fn half(r: &BigRat) -> BigRat {
    r / rat_from_u64(2)
}

/// Integer bracket `[lo, hi]` with `C(lo, c) <= x <= C(hi, c)`.
///
/// A float estimate seeds the endpoints; both are then verified (and widened
/// if the estimate was off) with exact comparisons, so the bracket is
/// certified no matter what the floating step did.
fn initial_bracket(c: u64, x: &BigNat) -> (u64, u64) {
    use num_traits::ToPrimitive;
    let xf = x.to_f64().unwrap_or(f64::MAX).max(1.0);
    let gb = |q: f64| -> f64 {
        let mut acc = 1.0f64;
        for t in 0..c {
            acc *= q - t as f64;
        }
        for t in 1..=c {
            acc /= t as f64;
        }
        acc
    };
    let (mut lo_f, mut hi_f) = (c as f64, c as f64 + xf + 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo_f + hi_f);
        if gb(mid) < xf {
            lo_f = mid;
        } else {
            hi_f = mid;
        }
    }
    let est = 0.5 * (lo_f + hi_f);
    let mut lo = if est.is_finite() && est > c as f64 + 2.0 {
        (est - 2.0) as u64
    } else {
        c
    };
    let mut step = 2u64;
    while binom(lo, c as i64) > *x {
        lo = lo.saturating_sub(step).max(c);
        step = step.saturating_mul(2);
        if lo == c {
            break;
        }
    }
    let mut hi = lo + 4;
    let mut step = 4u64;
    while binom(hi, c as i64) < *x {
        hi += step;
        step = step.saturating_mul(2);
    }
    debug_assert!(binom(lo, c as i64) <= *x);
    (lo, hi)
}

/// Exact bisection state over dyadic rationals `num / 2^exp`; all
/// comparisons cross-multiply in plain big integers, so no gcd reduction
/// happens per step.
struct DyadicBisect {
    c: u64,
    exp: u32,
    lo: BigInt,
    hi: BigInt,
    /// `x * c!` and `t * (c-1)!`, the cross-multiplied comparison targets.
    x_cfact: BigInt,
    fact_c1: BigInt,
}

impl DyadicBisect {
    fn new(c: u64, x: &BigNat, lo: u64, hi: u64) -> Self {
        DyadicBisect {
            c,
            exp: 0,
            lo: BigInt::from(lo),
            hi: BigInt::from(hi),
            x_cfact: BigInt::from(x.clone()) * BigInt::from(falling(c, c)),
            fact_c1: BigInt::from(falling(c - 1, c - 1)),
        }
    }

    fn falling_at(&self, d: u64, num: &BigInt) -> BigInt {
        let step = BigInt::one() << self.exp;
        let mut term = num.clone();
        let mut acc = BigInt::one();
        for _ in 0..d {
            acc *= &term;
            term -= &step;
        }
        acc
    }

    /// Compares `C(q, c)` with `x` for `q = num / 2^exp`.
    fn cmp_g(&self, num: &BigInt) -> Ordering {
        let lhs = self.falling_at(self.c, num);
        let rhs = &self.x_cfact << (self.exp * self.c as u32);
        lhs.cmp(&rhs)
    }

    /// Compares `C(q, c-1)` with the integer `t`.
    fn cmp_f(&self, num: &BigInt, t: &BigNat) -> Ordering {
        let lhs = self.falling_at(self.c - 1, num);
        let rhs = BigInt::from(t.clone()) * &self.fact_c1 << (self.exp * (self.c as u32 - 1));
        lhs.cmp(&rhs)
    }

    /// Whether `C(hi, c-1) - C(lo, c-1) <= width`.
    fn f_width_within(&self, width: &BigRat) -> bool {
        let diff = self.falling_at(self.c - 1, &self.hi) - self.falling_at(self.c - 1, &self.lo);
        let lhs = diff * width.denom();
        let rhs = width.numer() * &self.fact_c1 << (self.exp * (self.c as u32 - 1));
        lhs <= rhs
    }

    /// One bisection step; returns the midpoint if it hits `x` exactly.
    fn step(&mut self) -> Option<BigInt> {
        let mid = &self.lo + &self.hi;
        self.exp += 1;
        self.lo = &self.lo << 1;
        self.hi = &self.hi << 1;
        match self.cmp_g(&mid) {
            Ordering::Equal => return Some(mid),
            Ordering::Less => self.lo = mid,
            Ordering::Greater => self.hi = mid,
        }
        None
    }

    fn q_rat(&self, num: &BigInt) -> BigRat {
        BigRat::new(num.clone(), BigInt::one() << self.exp)
    }

    /// `C(q, c-1)` as an exact rational.
    fn f_rat(&self, num: &BigInt) -> BigRat {
        gen_binom_at(self.c - 1, &self.q_rat(num)).expect("q stays above c - 1")
    }
}

/// Enclosure of `LL_c(x)` of width at most `width`.
///
/// The unique `q >= c` with `C(q, c) = x` is bracketed by exact rational
/// bisection starting from `[c, c + x]`; the enclosure is the image of the
/// final bracket under `C(., c-1)`. Integer lattice points are detected up
/// front and reported exactly.
pub fn ll_eval(c: u64, x: &BigNat, width: &BigRat) -> LovaszEnclosure {
    assert!(c >= 2, "ll is defined for c >= 2");
    assert!(width > &BigRat::zero());
    if x.is_zero() {
        let z = BigRat::zero();
        return LovaszEnclosure {
            c,
            x: x.clone(),
            lo: z.clone(),
            hi: z.clone(),
            exact: Some(z),
        };
    }
    if let Some(q0) = integer_lattice_hit(c, x) {
        let v = rat_from_nat(&binom(q0, c as i64 - 1));
        return LovaszEnclosure {
            c,
            x: x.clone(),
            lo: v.clone(),
            hi: v.clone(),
            exact: Some(v),
        };
    }
    let (lo0, hi0) = initial_bracket(c, x);
    let mut bisect = DyadicBisect::new(c, x, lo0, hi0);
    loop {
        if bisect.f_width_within(width) {
            return LovaszEnclosure {
                c,
                x: x.clone(),
                lo: bisect.f_rat(&bisect.lo),
                hi: bisect.f_rat(&bisect.hi),
                exact: None,
            };
        }
        if let Some(mid) = bisect.step() {
            let v = bisect.f_rat(&mid);
            return LovaszEnclosure {
                c,
                x: x.clone(),
                lo: v.clone(),
                hi: v.clone(),
                exact: Some(v),
            };
        }
    }
}

/// Exact decision of `LL_c(x) <= t`.
///
/// Bisection over rational `q` produces one of two witnesses: `q1` with
/// `C(q1, c) >= x` and `C(q1, c-1) <= t` proves the inequality, while `q2`
/// with `C(q2, c) <= x` and `C(q2, c-1) > t` refutes it. The boundary case
/// `LL_c(x) = t` admits neither witness and is resolved by a common-root
/// test of `C(q, c) - x` and `C(q, c-1) - t` on the bracket.
pub fn ll_leq(c: u64, x: &BigNat, t: &BigNat) -> bool {
    assert!(c >= 2, "ll is defined for c >= 2");
    if x.is_zero() {
        return true; // LL_c(0) = 0
    }
    if let Some(q0) = integer_lattice_hit(c, x) {
        return binom(q0, c as i64 - 1) <= *t;
    }
    let (lo0, hi0) = initial_bracket(c, x);
    let mut bisect = DyadicBisect::new(c, x, lo0, hi0);
    let mut steps = 0usize;
    let mut tie_checked = false;
    loop {
        if bisect.cmp_f(&bisect.hi, t) != Ordering::Greater {
            return true;
        }
        if bisect.cmp_f(&bisect.lo, t) == Ordering::Greater {
            return false;
        }
        if let Some(mid) = bisect.step() {
            return bisect.cmp_f(&mid, t) != Ordering::Greater;
        }
        steps += 1;
        if steps % 96 == 0 && !tie_checked {
            tie_checked = true;
            let xr = rat_from_nat(x);
            let tr = rat_from_nat(t);
            if ll_tie_at_bracket(c, &xr, &tr, &bisect.q_rat(&bisect.lo), &bisect.q_rat(&bisect.hi))
            {
                // LL_c(x) = t exactly.
                return true;
            }
            // No common root: one of the witnesses above must eventually
            // fire, so bisection is guaranteed to terminate.
        }
        assert!(steps < 100_000, "ll_leq bisection failed to converge");
    }
}

/// True iff `C(q, c) - x` and `C(q, c-1) - t` share a root in `[lo, hi]`.
///
/// `C(q, c) - x` has a single simple root `q*` above `c - 1`, so the gcd of
/// the two polynomials has at most one root in the bracket and a sign-change
/// test is exact.
fn ll_tie_at_bracket(c: u64, x: &BigRat, t: &BigRat, lo: &BigRat, hi: &BigRat) -> bool {
    let g = RatPoly::gen_binom(c).sub_const(x);
    let f = RatPoly::gen_binom(c - 1).sub_const(t);
    let d = g.gcd(&f);
    if d.degree() == 0 {
        return false;
    }
    let vl = d.eval(lo);
    let vh = d.eval(hi);
    vl.is_zero() || vh.is_zero() || (vl.is_negative() != vh.is_negative())
}
