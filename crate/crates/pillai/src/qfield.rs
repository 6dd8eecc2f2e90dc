//! Exact arithmetic in real quadratic fields Q(sqrt(d)).
//!
//! Elements are `x + y*sqrt(d)` with exact rational coordinates and a
//! squarefree radicand, which makes equality, sign, and conjugation exact.
//! Heights come out as certified intervals so the strict inequalities they
//! feed into stay sound.

use crate::dyadic::Dyadic;
use crate::real::{refine, sqrt_int, CertifiedReal, NumError, NumResult, PrecisionPolicy, RefReal};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Split `n >= 1` as `k^2 * d` with `d` squarefree. Trial division to 10^6
/// then a perfect-square check on the cofactor; radicands in this problem
/// domain are tiny, so nothing heavier is warranted.
pub fn squarefree_kernel(n: &BigInt) -> NumResult<(BigInt, BigInt)> {
    if !n.is_positive() {
        return Err(NumError::Domain("radicand must be positive".into()));
    }
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut kernel = BigInt::one();
    let limit = BigInt::from(1_000_000u32);
    let mut p = BigInt::from(2);
    while &p * &p <= rest && p <= limit {
        if (&rest % &p).is_zero() {
            let mut mult = 0u32;
            while (&rest % &p).is_zero() {
                rest /= &p;
                mult += 1;
            }
            square *= p.pow(mult / 2);
            if mult % 2 == 1 {
                kernel *= &p;
            }
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    let s = rest.sqrt();
    if &s * &s == rest {
        square *= s;
    } else {
        kernel *= rest;
    }
    Ok((square, kernel))
}

/// True iff sqrt(d1) and sqrt(d2) generate the same quadratic field.
pub fn same_field(d1: &BigInt, d2: &BigInt) -> NumResult<bool> {
    let (_, k1) = squarefree_kernel(d1)?;
    let (_, k2) = squarefree_kernel(d2)?;
    Ok(k1 == k2)
}

/// Exact element `x + y*sqrt(d)` of a real quadratic field.
///
/// Canonical form: `d` squarefree and `>= 2`; a rational value has `y = 0`
/// and `d = 2`, making equality componentwise.
#[derive(Clone, PartialEq, Eq)]
pub struct QFieldElement {
    x: BigRational,
    y: BigRational,
    d: BigInt,
}

impl QFieldElement {
    /// Build `x + y*sqrt(d)`, normalizing the radicand to its squarefree
    /// kernel. A perfect-square radicand folds into the rational part.
    pub fn new(x: BigRational, y: BigRational, d: BigInt) -> NumResult<Self> {
        let (k, kernel) = squarefree_kernel(&d)?;
        let (x, y, d) = if kernel.is_one() || y.is_zero() {
            let folded = if kernel.is_one() {
                x + &y * BigRational::from(k)
            } else {
                x
            };
            (folded, BigRational::zero(), BigInt::from(2))
        } else {
            (x, y * BigRational::from(k), kernel)
        };
        Ok(QFieldElement { x, y, d })
    }

    pub fn from_rational(x: BigRational) -> Self {
        QFieldElement { x, y: BigRational::zero(), d: BigInt::from(2) }
    }

    pub fn from_int(n: i64) -> Self {
        QFieldElement::from_rational(BigRational::from(BigInt::from(n)))
    }

    /// `sqrt(n)` for positive integer `n` (rational when `n` is a square).
    pub fn sqrt_of(n: &BigInt) -> NumResult<Self> {
        QFieldElement::new(BigRational::zero(), BigRational::one(), n.clone())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.x
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.y
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Exact sign of the real value: -1, 0, or 1.
    pub fn signum(&self) -> i32 {
        if self.y.is_zero() {
            return rational_signum(&self.x);
        }
        let ysq_d = &self.y * &self.y * BigRational::from(self.d.clone());
        let xsq = &self.x * &self.x;
        if self.y.is_positive() {
            if !self.x.is_negative() {
                1
            } else if ysq_d > xsq {
                1
            } else if ysq_d < xsq {
                -1
            } else {
                0
            }
        } else if !self.x.is_positive() {
            -1
        } else if xsq > ysq_d {
            1
        } else if xsq < ysq_d {
            -1
        } else {
            0
        }
    }

    /// Exact order on real values (requires the same field, or either side
    /// rational).
    pub fn cmp_exact(&self, rhs: &QFieldElement) -> NumResult<Ordering> {
        let diff = self.sub(rhs)?;
        Ok(match diff.signum() {
            s if s > 0 => Ordering::Greater,
            s if s < 0 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }

    /// Galois conjugate `x - y*sqrt(d)`.
    pub fn conj(&self) -> Self {
        QFieldElement { x: self.x.clone(), y: -&self.y, d: self.d.clone() }
    }

    /// Field norm `x^2 - y^2 d`, a rational.
    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - &self.y * &self.y * BigRational::from(self.d.clone())
    }

    /// Field trace `2x`, a rational.
    pub fn trace(&self) -> BigRational {
        &self.x + &self.x
    }

    fn unify_d(&self, rhs: &QFieldElement) -> NumResult<BigInt> {
        if self.y.is_zero() {
            Ok(rhs.d.clone())
        } else if rhs.y.is_zero() || self.d == rhs.d {
            Ok(self.d.clone())
        } else {
            Err(NumError::Domain(format!(
                "mixed radicands {} and {}",
                self.d, rhs.d
            )))
        }
    }

    pub fn add(&self, rhs: &QFieldElement) -> NumResult<Self> {
        let d = self.unify_d(rhs)?;
        QFieldElement::new(&self.x + &rhs.x, &self.y + &rhs.y, d)
    }

    pub fn sub(&self, rhs: &QFieldElement) -> NumResult<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        QFieldElement { x: -&self.x, y: -&self.y, d: self.d.clone() }
    }

    pub fn mul(&self, rhs: &QFieldElement) -> NumResult<Self> {
        let d = self.unify_d(rhs)?;
        let dq = BigRational::from(d.clone());
        let x = &self.x * &rhs.x + &self.y * &rhs.y * dq;
        let y = &self.x * &rhs.y + &self.y * &rhs.x;
        QFieldElement::new(x, y, d)
    }

    pub fn div(&self, rhs: &QFieldElement) -> NumResult<Self> {
        if rhs.is_zero() {
            return Err(NumError::Domain("division by zero field element".into()));
        }
        let n = rhs.norm();
        // 1/rhs = conj(rhs)/norm(rhs)
        let inv = QFieldElement {
            x: &rhs.x / &n,
            y: -&rhs.y / &n,
            d: rhs.d.clone(),
        };
        self.mul(&inv)
    }

    /// Integer power; negative exponents invert (element must be nonzero).
    pub fn pow(&self, e: i64) -> NumResult<Self> {
        if e == 0 {
            return Ok(QFieldElement::from_int(1));
        }
        let base = if e < 0 {
            QFieldElement::from_int(1).div(self)?
        } else {
            self.clone()
        };
        let mut n = e.unsigned_abs();
        let mut acc = QFieldElement::from_int(1);
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b)?;
            }
            n >>= 1;
            if n > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// Certified enclosure of the real value at the given precision.
    pub fn to_real(&self, bits: u32) -> NumResult<CertifiedReal> {
        let xr = CertifiedReal::from_ratio(self.x.numer(), self.x.denom(), bits)?;
        if self.y.is_zero() {
            return Ok(xr);
        }
        let yr = CertifiedReal::from_ratio(self.y.numer(), self.y.denom(), bits)?;
        let sd = sqrt_int(&self.d, bits)?;
        Ok(xr.add(&yr.mul(&sd, bits), bits))
    }

    /// The value as a precision-parametric real for the bound machinery.
    pub fn as_ref_real(&self) -> RefReal {
        let me = self.clone();
        Arc::new(move |bits| me.to_real(bits))
    }

    /// Primitive integer minimal polynomial (degree 1 for rationals, else 2).
    pub fn minpoly(&self) -> IntPolynomial {
        if self.y.is_zero() {
            // q x - p = 0, leading coefficient positive
            let p = self.x.numer().clone();
            let q = self.x.denom().clone();
            return IntPolynomial::new(vec![-p, q]);
        }
        // x satisfies t^2 - (trace) t + (norm) = 0 over Q; clear denominators.
        let tr = self.trace();
        let nm = self.norm();
        let den = tr.denom().lcm(nm.denom());
        let a2 = den.clone();
        let a1 = -(tr * BigRational::from(den.clone())).to_integer();
        let a0 = (nm * BigRational::from(den)).to_integer();
        IntPolynomial::new(vec![a0, a1, a2])
    }

    /// Absolute logarithmic Weil height as a certified interval with width
    /// at most `2^(1-prec)`.
    pub fn height(&self, prec: u32) -> NumResult<CertifiedReal> {
        let policy = PrecisionPolicy {
            start_bits: (prec + 32).max(192),
            ..PrecisionPolicy::default()
        };
        let target = Dyadic::new(BigInt::one(), 1 - prec as i64);
        refine(policy, |bits| {
            let h = self.height_at(bits)?;
            if h.width().cmp_val(&target) == Ordering::Greater {
                return Err(NumError::Precision("height interval too wide".into()));
            }
            Ok(h)
        })
    }

    fn height_at(&self, bits: u32) -> NumResult<CertifiedReal> {
        if self.y.is_zero() {
            // h(p/q) = ln max(|p|, q) for p/q in lowest terms.
            let p = self.x.numer().abs();
            let q = self.x.denom().clone();
            let m = if p > q { p } else { q };
            if m.is_zero() || m.is_one() {
                return Ok(CertifiedReal::from_i64(0));
            }
            return CertifiedReal::from_int(&m).ln(bits);
        }
        let poly = self.minpoly();
        let lead = poly.coefficients().last().unwrap().clone();
        let mut h = if lead.is_one() {
            CertifiedReal::from_i64(0)
        } else {
            CertifiedReal::from_int(&lead).ln(bits)?
        };
        for root in [self.clone(), self.conj()] {
            h = h.add(&ln_plus_abs(&root.to_real(bits)?, bits)?, bits);
        }
        h.div(&CertifiedReal::from_i64(2), bits)
    }
}

/// `max(0, ln |v|)` as a certified interval.
fn ln_plus_abs(v: &CertifiedReal, bits: u32) -> NumResult<CertifiedReal> {
    let a = v.abs();
    let one = Dyadic::one();
    if a.hi().cmp_val(&one) != Ordering::Greater {
        return Ok(CertifiedReal::from_i64(0));
    }
    if a.lo().cmp_val(&one) != Ordering::Less {
        return a.ln(bits);
    }
    // Straddles 1: lower bound 0, upper bound ln(hi).
    let upper = CertifiedReal::point(a.hi().clone()).ln(bits)?;
    Ok(CertifiedReal::new(Dyadic::zero(), upper.hi().clone()))
}

/// Checks the height power identity `h(a^m) = |m| h(a)` up to interval overlap.
pub fn height_power_check(a: &QFieldElement, m: i64, prec: u32) -> NumResult<bool> {
    let lhs = a.pow(m)?.height(prec)?;
    let scaled = a.height(prec)?.mul(&CertifiedReal::from_i64(m.abs()), prec + 8);
    Ok(lhs.cmp_certain(&scaled).map_or(true, |o| o == Ordering::Equal))
}

fn rational_signum(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Primitive integer polynomial of degree at most 2, coefficients low-to-high,
/// positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        let mut content = BigInt::zero();
        for c in &coeffs {
            content = content.gcd(c);
        }
        if !content.is_zero() && !content.is_one() {
            for c in coeffs.iter_mut() {
                *c /= &content;
            }
        }
        if coeffs.last().map_or(false, |c| c.is_negative()) {
            for c in coeffs.iter_mut() {
                *c = -&*c;
            }
        }
        IntPolynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Exact evaluation at a field element.
    pub fn eval(&self, at: &QFieldElement) -> NumResult<QFieldElement> {
        let mut acc = QFieldElement::from_int(0);
        for c in self.coeffs.iter().rev() {
            let cq = QFieldElement::from_rational(BigRational::from(c.clone()));
            acc = acc.mul(at)?.add(&cq)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let term = match i {
                0 => format!("{mag}"),
                1 if mag.is_one() => "x".to_string(),
                1 => format!("{mag}x"),
                _ if mag.is_one() => format!("x^{i}"),
                _ => format!("{mag}x^{i}"),
            };
            if first {
                write!(f, "{sign}{term}")?;
                first = false;
            } else {
                write!(f, " {sign} {term}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{} + {}*sqrt({})", self.x, self.y, self.d)
        }
    }
}
