//! Certified real arithmetic: intervals with exact dyadic endpoints.
//!
//! A [`CertifiedReal`] encloses an exact real number between two dyadic
//! rationals. Every operation rounds the lower endpoint down and the upper
//! endpoint up, so enclosures are preserved unconditionally; precision loss
//! shows up as interval width, never as silent wrong digits.
//!
//! Operations take an explicit `bits` argument giving the mantissa width kept
//! after rounding. Callers that need a target output width run their whole
//! computation under [`refine`], which retries at doubled precision until the
//! result is tight enough or the policy ceiling is hit.

use crate::dyadic::{Dir, Dyadic};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum NumError {
    /// More working precision might fix this (interval too wide to decide).
    #[error("precision exhausted: {0}")]
    Precision(String),
    /// No amount of precision will fix this (bad domain, exact zero divisor).
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type NumResult<T> = Result<T, NumError>;

/// Interval enclosure `[lo, hi]` of a real number, endpoints exact dyadics.
#[derive(Clone, Debug)]
pub struct CertifiedReal {
    lo: Dyadic,
    hi: Dyadic,
}

/// A real number given as a procedure that can enclose it at any requested
/// precision. The standard currency between the number-field layer and the
/// bound/reduction layers.
pub type RefReal = Arc<dyn Fn(u32) -> NumResult<CertifiedReal> + Send + Sync>;

/// Precision escalation schedule for [`refine`].
#[derive(Clone, Copy, Debug)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
    pub factor: u32,
}

static DEFAULT_START_BITS: AtomicU32 = AtomicU32::new(192);

/// Override the starting precision [`PrecisionPolicy::default`] hands out,
/// for callers that know their workload (the command line exposes this).
/// The escalation ceiling stays fixed, so a low value costs retries while a
/// certified result stays certified.
pub fn set_default_start_bits(bits: u32) {
    DEFAULT_START_BITS.store(bits.clamp(32, 4096), AtomicOrdering::Relaxed);
}

pub fn default_start_bits() -> u32 {
    DEFAULT_START_BITS.load(AtomicOrdering::Relaxed)
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        // 192 bits covers every routine computation here in one pass; the
        // reduction tables push convergent denominators past 10^56 and need
        // headroom on top of that, hence the deep ceiling.
        PrecisionPolicy { start_bits: default_start_bits(), max_bits: 4096, factor: 2 }
    }
}

/// Run `f` at increasing precision until it succeeds or the policy is spent.
/// Only [`NumError::Precision`] failures are retried.
pub fn refine<T>(policy: PrecisionPolicy, f: impl Fn(u32) -> NumResult<T>) -> NumResult<T> {
    let mut bits = policy.start_bits;
    loop {
        match f(bits) {
            Ok(v) => return Ok(v),
            Err(NumError::Precision(msg)) => {
                if bits >= policy.max_bits {
                    return Err(NumError::Precision(format!(
                        "{msg} (gave up at {bits} bits)"
                    )));
                }
                bits = (bits.saturating_mul(policy.factor)).min(policy.max_bits);
            }
            Err(e) => return Err(e),
        }
    }
}

impl CertifiedReal {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo.cmp_val(&hi) != Ordering::Greater, "inverted interval");
        CertifiedReal { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        CertifiedReal { lo: x.clone(), hi: x }
    }

    pub fn from_int(n: &BigInt) -> Self {
        CertifiedReal::point(Dyadic::from_bigint(n))
    }

    pub fn from_i64(n: i64) -> Self {
        CertifiedReal::point(Dyadic::from_i64(n))
    }

    /// Enclosure of `num / den` to `bits` precision. `den` must be nonzero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> NumResult<Self> {
        if den.is_zero() {
            return Err(NumError::Domain("rational with zero denominator".into()));
        }
        let n = Dyadic::from_bigint(num);
        let d = Dyadic::from_bigint(den);
        Ok(CertifiedReal::new(n.div(&d, bits, Dir::Down), n.div(&d, bits, Dir::Up)))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Midpoint, for display and heuristics only.
    pub fn mid_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    pub fn is_point_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// True if the whole interval is strictly positive.
    pub fn certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certain order against another enclosure, `None` when they overlap.
    pub fn cmp_certain(&self, rhs: &CertifiedReal) -> Option<Ordering> {
        if self.hi.cmp_val(&rhs.lo) == Ordering::Less {
            Some(Ordering::Less)
        } else if self.lo.cmp_val(&rhs.hi) == Ordering::Greater {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && rhs.lo == rhs.hi && self.lo == rhs.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        CertifiedReal::new(self.hi.neg(), self.lo.neg())
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = if self.lo.neg().cmp_val(&self.hi) == Ordering::Greater {
                self.lo.neg()
            } else {
                self.hi.clone()
            };
            CertifiedReal::new(Dyadic::zero(), m)
        }
    }

    pub fn add(&self, rhs: &CertifiedReal, bits: u32) -> Self {
        CertifiedReal::new(
            self.lo.add(&rhs.lo).round(bits, Dir::Down),
            self.hi.add(&rhs.hi).round(bits, Dir::Up),
        )
    }

    pub fn sub(&self, rhs: &CertifiedReal, bits: u32) -> Self {
        self.add(&rhs.neg(), bits)
    }

    pub fn mul(&self, rhs: &CertifiedReal, bits: u32) -> Self {
        let cands = [
            self.lo.mul(&rhs.lo),
            self.lo.mul(&rhs.hi),
            self.hi.mul(&rhs.lo),
            self.hi.mul(&rhs.hi),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp_val(&lo) == Ordering::Less {
                lo = c.clone();
            }
            if c.cmp_val(&hi) == Ordering::Greater {
                hi = c.clone();
            }
        }
        CertifiedReal::new(lo.round(bits, Dir::Down), hi.round(bits, Dir::Up))
    }

    /// Quotient enclosure. Fails with a retryable error when the divisor
    /// interval straddles zero (a width artifact unless the divisor really is
    /// zero, which shows up as a point interval and is a domain error).
    pub fn div(&self, rhs: &CertifiedReal, bits: u32) -> NumResult<Self> {
        if rhs.is_point_zero() {
            return Err(NumError::Domain("division by exact zero".into()));
        }
        if rhs.contains_zero() {
            return Err(NumError::Precision("divisor interval contains zero".into()));
        }
        let corners = [(&self.lo, &rhs.lo), (&self.lo, &rhs.hi), (&self.hi, &rhs.lo), (&self.hi, &rhs.hi)];
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for (n, d) in corners {
            let down = n.div(d, bits, Dir::Down);
            let up = n.div(d, bits, Dir::Up);
            lo = Some(match lo {
                Some(cur) if cur.cmp_val(&down) != Ordering::Greater => cur,
                _ => down,
            });
            hi = Some(match hi {
                Some(cur) if cur.cmp_val(&up) != Ordering::Less => cur,
                _ => up,
            });
        }
        Ok(CertifiedReal::new(lo.unwrap(), hi.unwrap()))
    }

    /// Exact scaling by `2^k`.
    pub fn shift(&self, k: i64) -> Self {
        CertifiedReal::new(self.lo.shift(k), self.hi.shift(k))
    }

    /// Integer power by repeated squaring.
    pub fn pow_u32(&self, n: u32, bits: u32) -> Self {
        let mut result = CertifiedReal::point(Dyadic::one());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, bits);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, bits);
            }
        }
        result
    }

    /// Square root; input must not be certainly negative. A straddling lower
    /// endpoint is treated as retryable width, not a domain failure.
    pub fn sqrt(&self, bits: u32) -> NumResult<Self> {
        if self.hi.is_negative() {
            return Err(NumError::Domain("sqrt of negative interval".into()));
        }
        if self.lo.is_negative() {
            return Err(NumError::Precision("sqrt over interval straddling zero".into()));
        }
        Ok(CertifiedReal::new(
            sqrt_dyadic(&self.lo, bits, Dir::Down),
            sqrt_dyadic(&self.hi, bits, Dir::Up),
        ))
    }

    /// `k`-th root for `k >= 1`; same domain treatment as [`Self::sqrt`].
    pub fn nth_root(&self, k: u32, bits: u32) -> NumResult<Self> {
        if k == 0 {
            return Err(NumError::Domain("0th root".into()));
        }
        if self.hi.is_negative() {
            return Err(NumError::Domain("root of negative interval".into()));
        }
        if self.lo.is_negative() {
            return Err(NumError::Precision("root over interval straddling zero".into()));
        }
        Ok(CertifiedReal::new(
            nth_root_dyadic(&self.lo, k, bits, Dir::Down),
            nth_root_dyadic(&self.hi, k, bits, Dir::Up),
        ))
    }

    /// Natural logarithm; needs a certainly positive interval.
    pub fn ln(&self, bits: u32) -> NumResult<Self> {
        if !self.hi.is_positive() {
            return Err(NumError::Domain("log of nonpositive interval".into()));
        }
        if !self.lo.is_positive() {
            return Err(NumError::Precision("log over interval touching zero".into()));
        }
        let lo = ln_dyadic(&self.lo, bits)?;
        let hi = ln_dyadic(&self.hi, bits)?;
        Ok(CertifiedReal::new(lo.lo, hi.hi))
    }

    /// Distance interval to the nearest integer. Requires width below 1/4 so
    /// the enclosure stays one-piece; wider inputs are retryable.
    pub fn nearest_int_distance(&self) -> NumResult<Self> {
        let quarter = Dyadic::new(BigInt::one(), -2);
        if self.width().cmp_val(&quarter) != Ordering::Less {
            return Err(NumError::Precision(
                "interval too wide for a certified distance to the nearest integer".into(),
            ));
        }
        let n = self.lo.round_int();
        let y_lo = self.lo.sub(&Dyadic::from_bigint(&n));
        let y_hi = self.hi.sub(&Dyadic::from_bigint(&n));
        // y spans at most [-1/2, 3/4]; distance to the nearest integer is the
        // tent map with minima at integers and maxima 1/2 at half-integers.
        let half = Dyadic::new(BigInt::one(), -1);
        let tent = |t: &Dyadic| -> Dyadic {
            let d = t.sub(&Dyadic::from_bigint(&t.round_int())).abs();
            debug_assert!(d.cmp_val(&half) != Ordering::Greater);
            d
        };
        let f_lo_end = tent(&y_lo);
        let f_hi_end = tent(&y_hi);
        let spans = |kink: &Dyadic| -> bool {
            y_lo.cmp_val(kink) != Ordering::Greater && y_hi.cmp_val(kink) != Ordering::Less
        };
        let mut out_lo = if f_lo_end.cmp_val(&f_hi_end) == Ordering::Less {
            f_lo_end.clone()
        } else {
            f_hi_end.clone()
        };
        let mut out_hi = if f_lo_end.cmp_val(&f_hi_end) == Ordering::Greater {
            f_lo_end
        } else {
            f_hi_end
        };
        if spans(&Dyadic::zero()) {
            out_lo = Dyadic::zero();
        }
        if spans(&half) || spans(&half.neg()) {
            out_hi = half;
        }
        Ok(CertifiedReal::new(out_lo, out_hi))
    }

    /// Nearest integer to the midpoint; pair with [`Self::nearest_int_distance`].
    pub fn nearest_int(&self) -> BigInt {
        self.lo.add(&self.hi).shift(-1).round_int()
    }

    /// The integer the whole interval rounds down to, if it is unique.
    pub fn floor_certain(&self) -> NumResult<BigInt> {
        let a = self.lo.floor_int();
        let b = self.hi.floor_int();
        if a == b {
            Ok(a)
        } else {
            Err(NumError::Precision("floor not determined by enclosure".into()))
        }
    }

    /// The integer the whole interval rounds up to, if it is unique.
    pub fn ceil_certain(&self) -> NumResult<BigInt> {
        let a = self.lo.ceil_int();
        let b = self.hi.ceil_int();
        if a == b {
            Ok(a)
        } else {
            Err(NumError::Precision("ceiling not determined by enclosure".into()))
        }
    }

    /// Decimal truncation to `digits` places, certified: fails unless both
    /// endpoints truncate to the same string. Nonnegative values only, since
    /// truncation of a sign-straddling enclosure is meaningless.
    pub fn trunc_decimal(&self, digits: u32) -> NumResult<String> {
        if self.lo.is_negative() {
            return Err(NumError::Precision(
                "cannot certify a truncated decimal for a possibly negative value".into(),
            ));
        }
        let a = self.lo.scaled_floor_pow10(digits);
        let b = self.hi.scaled_floor_pow10(digits);
        if a != b {
            return Err(NumError::Precision("decimal truncation not pinned down".into()));
        }
        let mag = a.magnitude().to_string();
        let mag = if mag.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - mag.len()), mag)
        } else {
            mag
        };
        if digits == 0 {
            return Ok(mag);
        }
        let split = mag.len() - digits as usize;
        Ok(format!("{}.{}", &mag[..split], &mag[split..]))
    }
}

/// Directed square root of a nonnegative dyadic with `bits` result precision.
fn sqrt_dyadic(x: &Dyadic, bits: u32, dir: Dir) -> Dyadic {
    if x.is_zero() {
        return Dyadic::zero();
    }
    debug_assert!(x.is_positive());
    let m = x.mantissa();
    let e = x.exponent();
    // Scale so the shifted exponent is even and the integer sqrt carries
    // at least `bits` significant bits.
    let want = 2 * bits as u64 + 4;
    let have = x.mant_bits();
    let mut s = want.saturating_sub(have);
    if (e - s as i64) % 2 != 0 {
        s += 1;
    }
    let scaled: BigInt = m << s;
    let r = scaled.sqrt();
    let exact = (&r * &r) == scaled;
    let half_exp = (e - s as i64) / 2;
    match (dir, exact) {
        (_, true) | (Dir::Down, false) => Dyadic::new(r, half_exp),
        (Dir::Up, false) => Dyadic::new(r + 1, half_exp),
    }
}

/// Directed `k`-th root of a nonnegative dyadic.
fn nth_root_dyadic(x: &Dyadic, k: u32, bits: u32, dir: Dir) -> Dyadic {
    if x.is_zero() {
        return Dyadic::zero();
    }
    if k == 1 {
        return x.round(bits + 4, dir);
    }
    let m = x.mantissa();
    let e = x.exponent();
    let want = (k as u64) * (bits as u64 + 2);
    let have = x.mant_bits();
    let mut s = want.saturating_sub(have);
    let rem = (e - s as i64).rem_euclid(k as i64);
    s += rem as u64; // now k divides e - s
    let scaled: BigInt = m << s;
    let r = scaled.nth_root(k);
    let exact = r.pow(k) == scaled;
    let root_exp = (e - s as i64) / k as i64;
    match (dir, exact) {
        (_, true) | (Dir::Down, false) => Dyadic::new(r, root_exp),
        (Dir::Up, false) => Dyadic::new(r + 1, root_exp),
    }
}

thread_local! {
    static LN2_CACHE: RefCell<HashMap<u32, CertifiedReal>> = RefCell::new(HashMap::new());
    static E_CACHE: RefCell<HashMap<u32, CertifiedReal>> = RefCell::new(HashMap::new());
}

/// Enclosure of `atanh(z)` for an interval `z` inside `[0, 1/2]`, via the
/// odd series with an explicit geometric tail bound.
fn atanh_series(z: &CertifiedReal, bits: u32) -> NumResult<CertifiedReal> {
    let wb = bits + 16;
    if z.is_point_zero() {
        return Ok(CertifiedReal::point(Dyadic::zero()));
    }
    debug_assert!(!z.lo().is_negative());
    let z2 = z.mul(z, wb);
    let mut sum = z.clone();
    let mut pow = z.clone(); // z^(2j+1)
    let mut j: u32 = 0;
    let threshold = -(wb as i64) + z.hi().msb_exp().unwrap_or(0);
    loop {
        j += 1;
        pow = pow.mul(&z2, wb);
        let denom = CertifiedReal::from_i64((2 * j + 1) as i64);
        let term = pow.div(&denom, wb)?;
        sum = sum.add(&term, wb);
        match term.hi().msb_exp() {
            Some(me) if me >= threshold => continue,
            _ => break,
        }
    }
    // Remainder after the j-th term: sum_{i>j} z^(2i+1)/(2i+1)
    //   <= z^(2j+3) / ((2j+3) (1 - z^2)).
    let one = CertifiedReal::from_i64(1);
    let tail_num = pow.mul(&z2, wb);
    let tail_den = one.sub(&z2, wb).mul(&CertifiedReal::from_i64((2 * j + 3) as i64), wb);
    let tail = tail_num.div(&tail_den, wb)?;
    Ok(CertifiedReal::new(sum.lo().clone(), sum.hi().add(tail.hi()).round(wb, Dir::Up)))
}

/// Enclosure of `ln 2 = 2 atanh(1/3)`, cached per precision.
pub fn ln2(bits: u32) -> NumResult<CertifiedReal> {
    if let Some(v) = LN2_CACHE.with(|c| c.borrow().get(&bits).cloned()) {
        return Ok(v);
    }
    let third = CertifiedReal::from_ratio(&BigInt::one(), &BigInt::from(3), bits + 16)?;
    let v = atanh_series(&third, bits)?.shift(1);
    LN2_CACHE.with(|c| c.borrow_mut().insert(bits, v.clone()));
    Ok(v)
}

/// Enclosure of `ln x` for an exact positive dyadic.
fn ln_dyadic(x: &Dyadic, bits: u32) -> NumResult<CertifiedReal> {
    debug_assert!(x.is_positive());
    let wb = bits + 16;
    let l = x.msb_exp().unwrap();
    let k = l - 1;
    let u = x.shift(-k); // u in [1, 2), exactly representable
    let num = CertifiedReal::point(u.sub(&Dyadic::one()));
    let den = CertifiedReal::point(u.add(&Dyadic::one()));
    let z = num.div(&den, wb)?; // in [0, 1/3]
    let a = atanh_series(&z, wb)?.shift(1);
    if k == 0 {
        return Ok(a);
    }
    let l2 = ln2(wb)?;
    Ok(a.add(&l2.mul(&CertifiedReal::from_i64(k), wb), wb))
}

/// Enclosure of Euler's number from the factorial series (exact partial sums).
pub fn e_const(bits: u32) -> NumResult<CertifiedReal> {
    if let Some(v) = E_CACHE.with(|c| c.borrow().get(&bits).cloned()) {
        return Ok(v);
    }
    // Find K with (K+1)! > 2^(bits+4); remainder past K is < 2/(K+1)!.
    let limit = BigInt::one() << (bits as u64 + 4);
    let mut fact = BigInt::one();
    let mut k: u64 = 0;
    while fact <= limit {
        k += 1;
        fact *= k;
    }
    // fact = (K+1)! with K = k-1. Partial sum: N/K! with N = sum K!/i!.
    let kfact = &fact / k;
    let mut num = BigInt::zero();
    let mut term = kfact.clone(); // K!/0!
    num += &term;
    for i in 1..=k - 1 {
        term /= i;
        num += &term;
    }
    num += BigInt::one(); // i = K term, K!/K! = 1
    let lo = Dyadic::from_bigint(&num).div(&Dyadic::from_bigint(&kfact), bits + 8, Dir::Down);
    let hi_num = &num * k + 2u32;
    let hi = Dyadic::from_bigint(&hi_num).div(&Dyadic::from_bigint(&fact), bits + 8, Dir::Up);
    let v = CertifiedReal::new(lo, hi);
    E_CACHE.with(|c| c.borrow_mut().insert(bits, v.clone()));
    Ok(v)
}

/// Enclosure of `sqrt(n)` for a nonnegative integer.
pub fn sqrt_int(n: &BigInt, bits: u32) -> NumResult<CertifiedReal> {
    if n.is_negative() {
        return Err(NumError::Domain("sqrt of negative integer".into()));
    }
    CertifiedReal::from_int(n).sqrt(bits)
}
