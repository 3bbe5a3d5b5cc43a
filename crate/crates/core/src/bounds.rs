//! Bound formulas for `SP(n, k)` and a best-known aggregator.
//!
//! All values are exact big integers or rationals. The aggregator combines
//! direct constructions with the monotone and product propagation rules and
//! records the provenance of every cell.

use crate::exactmath::{
    binom, gen_binom_at, ll_leq, rat_floor_nat, rat_from_nat, rat_from_u64, BigNat,
    BigRat,
};
use num_traits::{One, Zero};
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("invalid parameters: need n >= k >= 1, got n={n}, k={k}")]
    InvalidParams { n: u64, k: u64 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

/// Validated `(n, k)` with the derived quotient/remainder `n = c k + r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    pub n: u64,
    pub k: u64,
    pub c: u64,
    pub r: u64,
}

impl Params {
    pub fn new(n: u64, k: u64) -> Result<Self, BoundsError> {
        if k < 1 || n < k {
            return Err(BoundsError::InvalidParams { n, k });
        }
        Ok(Params {
            n,
            k,
            c: n / k,
            r: n % k,
        })
    }

    pub fn half(&self) -> u64 {
        self.n / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Lower,
    Upper,
    Exact,
}

/// Provenance tag for a bound value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Nlb,
    MmsFloor,
    ThmUb,
    Main(u64),
    Alt(u64),
    Product(u64, u64),
    Mono,
    TimesK,
    ExactDiv,
    ExactK2,
    Exact2K1,
    ExactTrivial,
    LimeaRange,
    Family3K6,
    Brute,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Nlb => write!(f, "NLB"),
            Source::MmsFloor => write!(f, "MMS-floor"),
            Source::ThmUb => write!(f, "THM-UB"),
            Source::Main(u) => write!(f, "MAIN({u})"),
            Source::Alt(u) => write!(f, "ALT({u})"),
            Source::Product(m, nm) => write!(f, "PRODUCT({m};{nm})"),
            Source::Mono => write!(f, "MONO"),
            Source::TimesK => write!(f, "TIMES-K"),
            Source::ExactDiv => write!(f, "EXACT-DIV"),
            Source::ExactK2 => write!(f, "EXACT-K2"),
            Source::Exact2K1 => write!(f, "EXACT-2K1"),
            Source::ExactTrivial => write!(f, "EXACT-TRIVIAL"),
            Source::LimeaRange => write!(f, "LIMEA-RANGE"),
            Source::Family3K6 => write!(f, "FAMILY-3K6"),
            Source::Brute => write!(f, "BRUTE"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRecord {
    pub params: Params,
    pub value: BigNat,
    pub direction: Direction,
    pub source: Source,
}

/// Naive lower bound `C(n - r, c) / k`.
///
/// `C(ck, c)` is always divisible by `k`, so the floor is exact division.
pub fn nlb(p: Params) -> BigNat {
    rat_floor_nat(&(rat_from_nat(&binom(p.n - p.r, p.c as i64)) / rat_from_u64(p.k)))
}

/// The Meagher–Moura–Stevens upper bound as an exact rational, with floor.
///
/// `MMS(n, k) = C(n, c) / (k - r + r(c+1)/(n-c))`; for `k = 1` the value is 1.
pub fn mms(p: Params) -> (BigRat, BigNat) {
    if p.k == 1 {
        return (BigRat::one(), BigNat::one());
    }
    let num = rat_from_nat(&binom(p.n, p.c as i64));
    let denom = rat_from_u64(p.k - p.r)
        + rat_from_u64(p.r) * rat_from_u64(p.c + 1) / rat_from_u64(p.n - p.c);
    let value = num / denom;
    let fl = rat_floor_nat(&value);
    (value, fl)
}

fn ceil_nat(r: &BigRat) -> BigNat {
    rat_floor_nat(&r.ceil())
}

/// Whether `ceil((1 - r(c+1)/n) p) + LL_c(floor(r(c+1)p/n)) <= C(n-1, c-1)`.
///
/// The left-hand side is nondecreasing in `p`. Both terms are kept exact:
/// the ceiling/floor over rationals and an exact `LL` decision.
pub fn lhs_eq1(p: Params, candidates: &BigNat) -> bool {
    assert!(p.c >= 2, "inequality decision needs c >= 2");
    let pr = rat_from_nat(candidates);
    let frac = rat_from_u64(p.r) * rat_from_u64(p.c + 1) / rat_from_u64(p.n);
    let a = ceil_nat(&((BigRat::one() - &frac) * &pr));
    let rhs = binom(p.n - 1, p.c as i64 - 1);
    if a > rhs {
        return false;
    }
    let arg = rat_floor_nat(&(frac * pr));
    ll_leq(p.c, &arg, &(rhs - a))
}

/// Largest `p'` such that the inequality of [`lhs_eq1`] holds for all
/// `p <= p'`; an upper bound on `SP(n, k)`.
///
/// Found by binary search on `[NLB, floor(MMS)]` after asserting the bracket:
/// the inequality holds at `NLB` and fails at `floor(MMS) + 1`.
pub fn thm_upper(p: Params) -> Result<BigNat, BoundsError> {
    if p.n < 2 * p.k + 2 || p.k < 4 || p.r == 0 {
        return Err(BoundsError::NotApplicable(format!(
            "implicit upper bound needs n >= 2k+2, k >= 4, r >= 1; got n={}, k={}, r={}",
            p.n, p.k, p.r
        )));
    }
    let mut lo = nlb(p);
    let (_, fl) = mms(p);
    let mut hi = &fl + BigNat::one();
    assert!(lhs_eq1(p, &lo), "inequality must hold at NLB");
    assert!(!lhs_eq1(p, &hi), "inequality must fail above floor(MMS)");
    while &hi - &lo > BigNat::one() {
        let mid = (&lo + &hi) / BigNat::from(2u32);
        if lhs_eq1(p, &mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Diagnostic form of the implicit bound: `C(n,c) / ((k-r) + r(c+1)/(q-c+1))`
/// where `C(q, c) = r(c+1)/n * sp_candidate`.
///
/// Returns a rational enclosure `(lo, hi)` obtained from a bracketing of `q`.
pub fn cor_upper(p: Params, sp_candidate: &BigNat) -> Result<(BigRat, BigRat), BoundsError> {
    if p.n < 2 * p.k + 2 || p.k < 4 || p.r == 0 {
        return Err(BoundsError::NotApplicable(
            "corollary bound needs n >= 2k+2, k >= 4, r != 0".into(),
        ));
    }
    if *sp_candidate < nlb(p) {
        return Err(BoundsError::NotApplicable(
            "sp_candidate below the naive lower bound".into(),
        ));
    }
    let x = rat_from_u64(p.r) * rat_from_u64(p.c + 1) / rat_from_u64(p.n)
        * rat_from_nat(sp_candidate);
    assert!(x > BigRat::one(), "argument of the q-equation must exceed 1");
    // Bracket q with C(q, c) = x, then evaluate the (increasing) bound at
    // both ends.
    let mut lo_q = rat_from_u64(p.c);
    let mut hi_q = rat_from_u64(p.c) + x.ceil();
    let width = BigRat::new(1.into(), 1_000_000_000_000i64.into());
    while &hi_q - &lo_q > width {
        let mid = (&lo_q + &hi_q) / rat_from_u64(2);
        if gen_binom_at(p.c, &mid).unwrap() < x {
            lo_q = mid;
        } else {
            hi_q = mid;
        }
    }
    let eval = |q: &BigRat| -> BigRat {
        let denom = rat_from_u64(p.k - p.r)
            + rat_from_u64(p.r) * rat_from_u64(p.c + 1) / (q - rat_from_u64(p.c - 1));
        rat_from_nat(&binom(p.n, p.c as i64)) / denom
    };
    Ok((eval(&lo_q), eval(&hi_q)))
}

/// Exact value of `SP(n, k)` in the solved cases, if any.
pub fn exact_known(p: Params) -> Option<BoundRecord> {
    let rec = |value: BigNat, source: Source| BoundRecord {
        params: p,
        value,
        direction: Direction::Exact,
        source,
    };
    if p.k == 1 || p.n < 2 * p.k {
        return Some(rec(BigNat::one(), Source::ExactTrivial));
    }
    if p.r == 0 {
        return Some(rec(binom(p.n - 1, p.c as i64 - 1), Source::ExactDiv));
    }
    if p.k == 2 {
        return Some(rec(binom(p.n - 1, (p.n / 2) as i64 - 1), Source::ExactK2));
    }
    if p.n == 2 * p.k + 1 && p.k % 2 == 0 {
        return Some(rec(BigNat::from(2 * p.k), Source::Exact2K1));
    }
    if p.k >= 11 && p.k % 6 != 4 && p.n == 3 * p.k - 6 {
        let v = (p.k - 2) * (p.k - 2) / 2;
        return Some(rec(BigNat::from(v), Source::Family3K6));
    }
    None
}

/// Cited small-case ranges: `n = 2k+1`, `n = 2k+2`, and `n = 3k-1` (k >= 3).
pub fn limea_bounds(p: Params) -> Option<(BigNat, Option<BigNat>)> {
    if p.k < 3 {
        return None;
    }
    let mut lower: Option<u64> = None;
    let mut upper: Option<u64> = None;
    if p.n == 2 * p.k + 1 {
        lower = Some(2 * p.k - 1);
        upper = Some(2 * p.k);
    } else if p.n == 2 * p.k + 2 {
        lower = Some(2 * p.k + 1);
        upper = Some(2 * p.k + 3);
    }
    if p.n == 3 * p.k - 1 {
        let v = 3 * p.k - 1;
        lower = Some(lower.map_or(v, |l| l.max(v)));
    }
    lower.map(|l| (BigNat::from(l), upper.map(BigNat::from)))
}

/// `a(u)` and `b(u)` for the halved-ground-set construction.
fn main_ab(p: Params, u: u64) -> (BigNat, BigNat) {
    let m = p.half();
    let mut a = BigNat::zero();
    for i in u..=(p.c - u) {
        a += binom(m, i as i64) * binom(m, (p.c - i) as i64);
    }
    let mut b = BigNat::zero();
    for i in 0..u {
        b += binom(m, i as i64) * binom(m, (p.c + 1 - i) as i64);
    }
    (a, BigNat::from(2u32) * b)
}

/// Partition count from the halved-ground-set construction at split `u`.
///
/// Needs `n >= 2k`, `k >= 3`, `r != 0`, `n` and `ck` even, `1 <= u <= c/2`,
/// and `u = c/2` when `r = k - 1`.
pub fn main_construction_p(p: Params, u: u64) -> Result<BigNat, BoundsError> {
    if p.n < 2 * p.k || p.k < 3 || p.r == 0 || p.n % 2 != 0 || (p.c * p.k) % 2 != 0 {
        return Err(BoundsError::NotApplicable(format!(
            "main construction needs n >= 2k, k >= 3, r != 0, n even, c*k even; got n={}, k={} (c={}, r={})",
            p.n, p.k, p.c, p.r
        )));
    }
    if u < 1 || u > p.c / 2 {
        return Err(BoundsError::NotApplicable(format!(
            "u must lie in [1, c/2] = [1, {}], got {u}",
            p.c / 2
        )));
    }
    if p.r == p.k - 1 && u != p.c / 2 {
        return Err(BoundsError::NotApplicable(format!(
            "r = k - 1 forces u = c/2 = {}, got {u}",
            p.c / 2
        )));
    }
    let (a, b) = main_ab(p, u);
    let pa = a / BigNat::from(p.k - p.r);
    let pb = b / BigNat::from(p.r);
    Ok(pa.min(pb))
}

/// `a(u)` and `b(u)` for the variant construction (odd `ck`).
fn alt_ab(p: Params, u: u64) -> (BigNat, BigNat) {
    let m = p.half();
    let mut a = BigNat::zero();
    for i in (u + 1)..=p.c {
        a += binom(m, i as i64) * binom(m, (p.c - i) as i64);
    }
    let mut b = BigNat::zero();
    for i in (p.c + 1 - u)..=u {
        b += binom(m, i as i64) * binom(m, (p.c + 1 - i) as i64);
    }
    (BigNat::from(2u32) * a, b)
}

/// Partition count from the variant construction at split `u`.
///
/// Needs `n >= 2k`, `k >= 3`, `n` even, `ck` odd, `(c+1)/2 <= u <= c-1`,
/// and `u = (c+1)/2` when `r = 1`.
pub fn alt_construction_p(p: Params, u: u64) -> Result<BigNat, BoundsError> {
    if p.n < 2 * p.k || p.k < 3 || p.n % 2 != 0 || (p.c * p.k) % 2 == 0 {
        return Err(BoundsError::NotApplicable(format!(
            "alt construction needs n >= 2k, k >= 3, n even, c*k odd; got n={}, k={} (c={}, r={})",
            p.n, p.k, p.c, p.r
        )));
    }
    let u_min = (p.c + 1) / 2;
    if u < u_min || u > p.c - 1 {
        return Err(BoundsError::NotApplicable(format!(
            "u must lie in [(c+1)/2, c-1] = [{u_min}, {}], got {u}",
            p.c - 1
        )));
    }
    if p.r == 1 && u != u_min {
        return Err(BoundsError::NotApplicable(format!(
            "r = 1 forces u = (c+1)/2 = {u_min}, got {u}"
        )));
    }
    let (a, b) = alt_ab(p, u);
    let pa = a / BigNat::from(p.k - p.r);
    let pb = b / BigNat::from(p.r);
    Ok(pa.min(pb))
}

/// Admissible `u` values for the halved-ground-set construction, if any.
pub fn main_u_range(p: Params) -> Vec<u64> {
    (1..=p.c / 2)
        .filter(|&u| main_construction_p(p, u).is_ok())
        .collect()
}

/// Admissible `u` values for the variant construction, if any.
pub fn alt_u_range(p: Params) -> Vec<u64> {
    if p.c == 0 {
        return Vec::new();
    }
    ((p.c + 1) / 2..=p.c.saturating_sub(1))
        .filter(|&u| alt_construction_p(p, u).is_ok())
        .collect()
}

/// Best direct (non-propagated) lower bound: exact values, the cited small
/// cases, and the exhaustive-`u` maximum of both constructions.
pub fn best_direct_lower(p: Params) -> BoundRecord {
    if let Some(e) = exact_known(p) {
        return BoundRecord {
            direction: Direction::Lower,
            ..e
        };
    }
    let mut best: Option<(BigNat, Source)> = None;
    let mut offer = |value: BigNat, source: Source| {
        let better = match &best {
            None => true,
            Some((v, _)) => value > *v,
        };
        if better {
            best = Some((value, source));
        }
    };
    for u in main_u_range(p) {
        if let Ok(v) = main_construction_p(p, u) {
            offer(v, Source::Main(u));
        }
    }
    for u in alt_u_range(p) {
        if let Ok(v) = alt_construction_p(p, u) {
            offer(v, Source::Alt(u));
        }
    }
    if let Some((l, _)) = limea_bounds(p) {
        offer(l, Source::LimeaRange);
    }
    // Every system has at least one partition.
    offer(BigNat::one(), Source::ExactTrivial);
    let (value, source) = best.unwrap();
    BoundRecord {
        params: p,
        value,
        direction: Direction::Lower,
        source,
    }
}

/// One row of the aggregated table.
#[derive(Debug, Clone)]
pub struct AggregateRow {
    pub params: Params,
    pub lower: BoundRecord,
    pub upper: BoundRecord,
}

/// Best known bounds for all `n` in `[k, n_max]` at fixed `k`.
///
/// Lower bounds are a dynamic program ascending in `n`: direct constructions,
/// monotonicity in `n`, and the product rule over all splits `m + (n - m)`
/// with both parts at least `k`. Uppers take the best applicable of the
/// implicit bound, `floor(MMS)`, the cited ranges, and exact values.
pub fn aggregate(k: u64, n_max: u64) -> Result<Vec<AggregateRow>, BoundsError> {
    if k < 1 || n_max < k {
        return Err(BoundsError::InvalidParams { n: n_max, k });
    }
    let idx = |n: u64| (n - k) as usize;
    let mut rows: Vec<AggregateRow> = Vec::with_capacity((n_max - k + 1) as usize);
    for n in k..=n_max {
        let p = Params::new(n, k)?;
        let exact = exact_known(p);

        // Candidate lower bounds, later offers only replace on strict
        // improvement, so the ordering fixes tie-breaks: direct
        // constructions and cited values first, then propagation.
        let direct = best_direct_lower(p);
        let mut lower = direct.clone();
        let mut offer = |value: BigNat, source: Source| {
            if value > lower.value {
                lower = BoundRecord {
                    params: p,
                    value,
                    direction: Direction::Lower,
                    source,
                };
            }
        };
        for m in k..=n.saturating_sub(k) {
            let other = n - m;
            if other < k || m > other {
                break;
            }
            let v = BigNat::from(k) * &rows[idx(m)].lower.value * &rows[idx(other)].lower.value;
            offer(v, Source::Product(m, other));
        }
        if n > k {
            offer(rows[idx(n - 1)].lower.value.clone(), Source::Mono);
        }

        let upper = if let Some(e) = &exact {
            BoundRecord {
                direction: Direction::Upper,
                ..e.clone()
            }
        } else {
            let (_, fl) = mms(p);
            let mut up = BoundRecord {
                params: p,
                value: fl,
                direction: Direction::Upper,
                source: Source::MmsFloor,
            };
            if let Some((_, Some(u))) = limea_bounds(p) {
                if u < up.value {
                    up.value = u;
                    up.source = Source::LimeaRange;
                }
            }
            if let Ok(t) = thm_upper(p) {
                if t <= up.value {
                    up.value = t;
                    up.source = Source::ThmUb;
                }
            }
            up
        };

        let lower = if let Some(e) = &exact {
            BoundRecord {
                direction: Direction::Lower,
                ..e.clone()
            }
        } else {
            lower
        };
        assert!(
            lower.value <= upper.value,
            "lower {} exceeds upper {} at n={n}, k={k}",
            lower.value,
            upper.value
        );
        rows.push(AggregateRow {
            params: p,
            lower,
            upper,
        });
    }
    Ok(rows)
}

/// Empirical non-tightness ratios: `NLB/MMS` and `k MMS(n,k) / MMS(n+k,k)`.
pub fn ratio_diagnostics(p: Params) -> Result<(BigRat, BigRat), BoundsError> {
    if p.n <= 2 * p.k || p.k < 3 {
        return Err(BoundsError::NotApplicable(
            "ratio diagnostics need n > 2k and k >= 3".into(),
        ));
    }
    let (mms_here, _) = mms(p);
    let ratio1 = rat_from_nat(&nlb(p)) / &mms_here;
    let (mms_next, _) = mms(Params::new(p.n + p.k, p.k)?);
    let ratio2 = rat_from_u64(p.k) * mms_here / mms_next;
    Ok((ratio1, ratio2))
}
