//! Exact dyadic rationals `mantissa * 2^exponent` with directed rounding.
//!
//! Dyadics are the endpoint type of the certified intervals in [`crate::real`]:
//!
//! - addition, subtraction, and multiplication are exact,
//! - division and mantissa-width reduction round in a caller-chosen direction,
//! - comparisons are exact regardless of exponent spread.
//!
//! Everything here is value-semantic and immutable; no global state.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rounding direction. `Down` rounds toward negative infinity, `Up` toward
/// positive infinity, so rounding a lower endpoint `Down` and an upper
/// endpoint `Up` can only widen an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Down,
    Up,
}

impl Dir {
    /// The direction that rounds the other way.
    pub fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }
}

/// An exact dyadic rational `mant * 2^exp`.
///
/// Canonical form: `mant` is odd or zero, and a zero value has `exp == 0`.
/// Canonicalization keeps mantissas from accumulating trailing zero words
/// across long computations.
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// Arithmetic shift right that rounds toward negative infinity.
///
/// `num_bigint` implements `>>` for `BigInt` with exactly these semantics
/// (mirroring primitive signed integers); a unit test below pins that down
/// since every rounding guarantee in the crate rests on it.
fn shr_floor(x: &BigInt, k: u64) -> BigInt {
    x >> k
}

/// Shift right rounding toward positive infinity.
fn shr_ceil(x: &BigInt, k: u64) -> BigInt {
    -((-x) >> k)
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }.normalized()
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Dyadic::new(n.clone(), 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Number of significant bits of the mantissa (0 for zero).
    pub fn mant_bits(&self) -> u64 {
        self.mant.magnitude().bits()
    }

    /// Exponent of the most significant bit: the value v satisfies
    /// `2^(msb_exp - 1) <= |v| < 2^msb_exp`. Returns `None` for zero.
    pub fn msb_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant_bits() as i64 + self.exp)
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Exact sum. Mantissa alignment is exact; callers bound exponent spread
    /// by rounding operands to working precision first.
    pub fn add(&self, rhs: &Dyadic) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, rhs: &Dyadic) -> Self {
        self.add(&rhs.neg())
    }

    /// Exact product.
    pub fn mul(&self, rhs: &Dyadic) -> Self {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }

    /// Exact left shift by any (possibly negative) power of two.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Reduce the mantissa to at most `bits` significant bits, rounding in
    /// direction `dir`. Identity when already narrow enough.
    pub fn round(&self, bits: u32, dir: Dir) -> Self {
        let nb = self.mant_bits();
        if nb <= bits as u64 {
            return self.clone();
        }
        let k = nb - bits as u64;
        let m = match dir {
            Dir::Down => shr_floor(&self.mant, k),
            Dir::Up => shr_ceil(&self.mant, k),
        };
        Dyadic::new(m, self.exp + k as i64)
    }

    /// Quotient `self / rhs` rounded in direction `dir` with at least `bits`
    /// significant bits. `rhs` must be nonzero.
    pub fn div(&self, rhs: &Dyadic, bits: u32, dir: Dir) -> Self {
        assert!(!rhs.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Scale the numerator so the integer quotient carries enough bits.
        let extra = (bits as u64 + 2 + rhs.mant_bits()).saturating_sub(self.mant_bits()) + 2;
        let num = &self.mant << extra;
        let exp = self.exp - extra as i64 - rhs.exp;
        let (q, r) = num_integer::Integer::div_rem(&num, &rhs.mant);
        // div_rem truncates toward zero; fix up to the requested direction.
        let exact = r.is_zero();
        let q = match (dir, exact) {
            (_, true) => q,
            (Dir::Down, false) => {
                // Truncation equals floor for a positive quotient value.
                if (num.sign() == Sign::Minus) != (rhs.mant.sign() == Sign::Minus) {
                    q - 1
                } else {
                    q
                }
            }
            (Dir::Up, false) => {
                if (num.sign() == Sign::Minus) != (rhs.mant.sign() == Sign::Minus) {
                    q
                } else {
                    q + 1
                }
            }
        };
        Dyadic::new(q, exp)
    }

    /// Exact comparison.
    pub fn cmp_val(&self, rhs: &Dyadic) -> Ordering {
        match (self.mant.sign(), rhs.mant.sign()) {
            (Sign::Minus, Sign::NoSign) | (Sign::Minus, Sign::Plus) | (Sign::NoSign, Sign::Plus) => {
                return Ordering::Less
            }
            (Sign::Plus, Sign::NoSign) | (Sign::Plus, Sign::Minus) | (Sign::NoSign, Sign::Minus) => {
                return Ordering::Greater
            }
            (Sign::NoSign, Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        // Same nonzero sign: compare magnitudes by leading-bit position first
        // so astronomically different exponents never force a huge shift.
        let (la, lb) = (self.msb_exp().unwrap(), rhs.msb_exp().unwrap());
        let positive = self.mant.is_positive();
        if la != lb {
            let mag = la.cmp(&lb);
            return if positive { mag } else { mag.reverse() };
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        a.cmp(&b)
    }

    /// Largest integer `<= self`, exact.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_floor(&self.mant, (-self.exp) as u64)
        }
    }

    /// Smallest integer `>= self`, exact.
    pub fn ceil_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_ceil(&self.mant, (-self.exp) as u64)
        }
    }

    /// Nearest integer, ties toward even being unnecessary here: ties round up.
    pub fn round_int(&self) -> BigInt {
        // floor(x + 1/2)
        self.add(&Dyadic::new(BigInt::one(), -1)).floor_int()
    }

    /// `floor(self * 10^digits)` as an integer, exact.
    pub fn scaled_floor_pow10(&self, digits: u32) -> BigInt {
        let p = BigInt::from(10u32).pow(digits);
        self.mul(&Dyadic::from_bigint(&p)).floor_int()
    }

    /// Approximate f64 value, for diagnostics and display only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let nb = self.mant_bits();
        let (m, e) = if nb > 53 {
            let k = nb - 53;
            (shr_floor(&self.mant, k), self.exp + k as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf: f64 = {
            let (s, digits) = m.to_u64_digits();
            let mut v = 0.0f64;
            for d in digits.iter().rev() {
                v = v * 1.8446744073709552e19 + *d as f64;
            }
            if s == Sign::Minus {
                v = -v;
            }
            v
        };
        mf * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    /// Decimal string with `digits` places after the point, rounded in
    /// direction `dir`, exact.
    pub fn to_decimal(&self, digits: u32, dir: Dir) -> String {
        let p = BigInt::from(10u32).pow(digits);
        let scaled = self.mul(&Dyadic::from_bigint(&p));
        let n = match dir {
            Dir::Down => scaled.floor_int(),
            Dir::Up => scaled.ceil_int(),
        };
        let neg = n.is_negative();
        let mag = n.magnitude().to_string();
        let mag = if mag.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - mag.len()), mag)
        } else {
            mag
        };
        let split = mag.len() - digits as usize;
        let (int_part, frac_part) = mag.split_at(split);
        let s = if digits == 0 {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac_part}")
        };
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({} * 2^{} ~ {})", self.mant, self.exp, self.to_f64())
    }
}
