//! Convergent denominator sequences of quadratic irrationals and their
//! linear-recurrence structure.
//!
//! For an eventually periodic expansion with preperiod length `r` and period
//! length `s`, the denominators satisfy
//!
//! ```text
//! q_{i+2s} - t q_{i+s} + (-1)^s q_i = 0        for all i >= r,
//! ```
//!
//! where `t` is the trace of the period's convergent matrix. Splitting by
//! residue `j` modulo the period and diagonalizing gives exact closed forms
//! `q_{s i + j + r} = c1[j] th1^i - c2[j] th2^i` over the field
//! `Q(sqrt(t^2 - 4 (-1)^s))`. Everything here is exact integer or field
//! arithmetic; no rounding enters until a caller asks for real enclosures.

use crate::cfrac::ContinuedFraction;
use crate::qfield::QFieldElement;
use crate::real::{NumError, NumResult};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// The continued fraction `[0; (1, a)]`, the shape every pair scan uses.
pub fn family_cf(a: i64) -> NumResult<ContinuedFraction> {
    if a < 1 {
        return Err(NumError::Domain("period entry must be positive".into()));
    }
    ContinuedFraction::new(vec![BigInt::zero()], vec![BigInt::one(), BigInt::from(a)])
}

/// Exact denominators `q_0 ... q_{n_max}` of the convergents of `cf`.
#[derive(Clone, Debug)]
pub struct DenominatorTable {
    cf: ContinuedFraction,
    values: Vec<BigInt>,
}

/// Build the denominator table with the standard recurrence
/// `q_i = a_i q_{i-1} + q_{i-2}`, seeds `q_{-1} = 0`, `q_{-2} = 1` (so
/// `q_0 = 1` always).
pub fn q_sequence(cf: &ContinuedFraction, n_max: usize) -> DenominatorTable {
    let mut values = Vec::with_capacity(n_max + 1);
    let (mut prev2, mut prev1) = (BigInt::one(), BigInt::zero());
    for i in 0..=n_max {
        let a = cf.quotient(i);
        let q = &a * &prev1 + &prev2;
        values.push(q.clone());
        prev2 = prev1;
        prev1 = q;
    }
    DenominatorTable { cf: cf.clone(), values }
}

impl DenominatorTable {
    pub fn cf(&self) -> &ContinuedFraction {
        &self.cf
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn value(&self, i: usize) -> NumResult<&BigInt> {
        self.values.get(i).ok_or_else(|| {
            NumError::Domain(format!("denominator index {i} beyond table length {}", self.values.len()))
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First index whose denominator exceeds `bound`, if any is stored.
    pub fn first_index_exceeding(&self, bound: &BigInt) -> Option<usize> {
        self.values.iter().position(|q| q > bound)
    }

    /// Verify the order-2s recurrence at every stored index where it applies.
    pub fn recurrence_holds(&self) -> bool {
        let r = self.cf.preperiod().len();
        let s = self.cf.period().len();
        let t = trace_t(self.cf.period());
        let sign = if s % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let n = self.values.len();
        for i in r..n.saturating_sub(2 * s) {
            let lhs = &self.values[i + 2 * s] - &t * &self.values[i + s] + &sign * &self.values[i];
            if !lhs.is_zero() {
                return false;
            }
        }
        true
    }
}

/// Trace of the ordered product of `(b 1; 1 0)` over the period word.
pub fn trace_t(period: &[BigInt]) -> BigInt {
    let (mut a, mut b, mut c, mut d) =
        (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for w in period {
        let na = &a * w + &b;
        let nc = &c * w + &d;
        b = a;
        d = c;
        a = na;
        c = nc;
    }
    a + d
}

/// Exact diagonalization data for the order-2s recurrence.
#[derive(Clone, Debug)]
pub struct BinetData {
    pub t: BigInt,
    pub s: usize,
    pub r: usize,
    pub theta1: QFieldElement,
    pub theta2: QFieldElement,
    /// Coefficients per residue class j: q_{s i + j + r} = c1[j] th1^i - c2[j] th2^i.
    pub c1: Vec<QFieldElement>,
    pub c2: Vec<QFieldElement>,
}

/// Compute the exact Binet split of the denominator sequence of `cf`.
///
/// The recurrence is guaranteed from the preperiod length onward, but often
/// extends further back (for `[0; (1, a)]` it holds from index 0, and the
/// natural coefficient normalization uses that). The offset `r` is therefore
/// minimized by exact integer checks before the split is computed.
pub fn binet_data(cf: &ContinuedFraction) -> NumResult<BinetData> {
    let s = cf.period().len();
    let t = trace_t(cf.period());
    let sign_term = if s % 2 == 0 { BigInt::from(4) } else { BigInt::from(-4) };
    let disc = &t * &t - sign_term;
    if !disc.is_positive() {
        return Err(NumError::Domain("degenerate recurrence discriminant".into()));
    }
    let sq = disc.sqrt();
    if &sq * &sq == disc {
        return Err(NumError::Domain(
            "perfect-square discriminant would make the roots rational".into(),
        ));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let t_rat = BigRational::from(t.clone());
    let root = QFieldElement::new(BigRational::zero(), half.clone(), disc.clone())?;
    let t_half = QFieldElement::from_rational(&t_rat * &half);
    let theta1 = t_half.add(&root)?;
    let theta2 = t_half.sub(&root)?;
    let denom = theta1.sub(&theta2)?; // sqrt(disc), nonzero
    let r0 = cf.preperiod().len();
    let table = q_sequence(cf, r0 + 2 * s);
    let sign = if s % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let mut r = r0;
    while r > 0 {
        let i = r - 1;
        let lhs = &table.values()[i + 2 * s] - &t * &table.values()[i + s] + &sign * &table.values()[i];
        if lhs.is_zero() {
            r -= 1;
        } else {
            break;
        }
    }
    let mut c1 = Vec::with_capacity(s);
    let mut c2 = Vec::with_capacity(s);
    for j in 0..s {
        let q0 = QFieldElement::from_rational(BigRational::from(table.values()[j + r].clone()));
        let q1 = QFieldElement::from_rational(BigRational::from(table.values()[s + j + r].clone()));
        // Solve q0 = c1 - c2, q1 = c1 th1 - c2 th2.
        let c1j = q1.sub(&theta2.mul(&q0)?)?.div(&denom)?;
        let c2j = q1.sub(&theta1.mul(&q0)?)?.div(&denom)?;
        c1.push(c1j);
        c2.push(c2j);
    }
    Ok(BinetData { t, s, r, theta1, theta2, c1, c2 })
}

impl BinetData {
    /// Exact `q_{s i + j + r}` from the closed form. The surd part must
    /// cancel and the rational part must be an integer; anything else is an
    /// internal inconsistency, not an input problem.
    pub fn reconstruct(&self, j: usize, i: i64) -> NumResult<BigInt> {
        if j >= self.s {
            return Err(NumError::Domain(format!("residue class {j} out of range")));
        }
        if i < 0 {
            return Err(NumError::Domain("negative sequence index".into()));
        }
        let v = self.c1[j]
            .mul(&self.theta1.pow(i)?)?
            .sub(&self.c2[j].mul(&self.theta2.pow(i)?)?)?;
        if !v.is_rational() {
            return Err(NumError::Domain(
                "closed form failed to cancel the surd part".into(),
            ));
        }
        let rat = v.rational_part();
        if !rat.is_integer() {
            return Err(NumError::Domain(
                "closed form produced a non-integer".into(),
            ));
        }
        Ok(rat.to_integer())
    }
}

/// Check the explicit two-sided growth envelopes for `[0; (1, a)]`:
///
/// ```text
/// (1/2) th^l          < q_{2l}   < (11/10) ((a + sqrt(d_a))/(2 sqrt(d_a))) th^l
/// (7/8) (th/sqrt(d_a)) th^l < q_{2l+1} < (9/8) (th/sqrt(d_a)) th^l
/// ```
///
/// for every `l` in `1..=ell_max`, where `d_a = a^2 + 4a` and
/// `th = (a + 2 + sqrt(d_a))/2`. Comparisons are exact field-element sign
/// tests, which is as certified as it gets.
pub fn growth_envelope_check(a: i64, ell_max: usize) -> NumResult<bool> {
    let cf = family_cf(a)?;
    let table = q_sequence(&cf, 2 * ell_max + 1);
    let d_a = BigInt::from(a * a + 4 * a);
    let sqrt_da = QFieldElement::sqrt_of(&d_a)?;
    let theta = QFieldElement::from_rational(BigRational::new(BigInt::from(a + 2), BigInt::from(2)))
        .add(&sqrt_da.div(&QFieldElement::from_int(2))?)?;
    let a_elem = QFieldElement::from_int(a);
    // (a + sqrt(d_a)) / (2 sqrt(d_a))
    let even_coeff = a_elem
        .add(&sqrt_da)?
        .div(&sqrt_da.mul(&QFieldElement::from_int(2))?)?;
    let odd_coeff = theta.div(&sqrt_da)?;
    let frac = |num: i64, den: i64| {
        QFieldElement::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    };
    let mut theta_pow = theta.clone();
    for ell in 1..=ell_max {
        let q_even = QFieldElement::from_rational(BigRational::from(table.values()[2 * ell].clone()));
        let q_odd =
            QFieldElement::from_rational(BigRational::from(table.values()[2 * ell + 1].clone()));
        let lower_even = frac(1, 2).mul(&theta_pow)?;
        let upper_even = frac(11, 10).mul(&even_coeff)?.mul(&theta_pow)?;
        let lower_odd = frac(7, 8).mul(&odd_coeff)?.mul(&theta_pow)?;
        let upper_odd = frac(9, 8).mul(&odd_coeff)?.mul(&theta_pow)?;
        let ok = lower_even.cmp_exact(&q_even)? == Ordering::Less
            && q_even.cmp_exact(&upper_even)? == Ordering::Less
            && lower_odd.cmp_exact(&q_odd)? == Ordering::Less
            && q_odd.cmp_exact(&upper_odd)? == Ordering::Less;
        if !ok {
            return Ok(false);
        }
        theta_pow = theta_pow.mul(&theta)?;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn sequence_examples() {
        let cf = family_cf(2).unwrap();
        let t = q_sequence(&cf, 7);
        assert_eq!(t.values(), ints(&[1, 1, 3, 4, 11, 15, 41, 56]).as_slice());

        let cf = family_cf(3).unwrap();
        let t = q_sequence(&cf, 4);
        assert_eq!(t.values(), ints(&[1, 1, 4, 5, 19]).as_slice());

        let golden = ContinuedFraction::new(vec![BigInt::one()], vec![BigInt::one()]).unwrap();
        let t = q_sequence(&golden, 5);
        assert_eq!(t.values(), ints(&[1, 1, 2, 3, 5, 8]).as_slice());
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace_t(&ints(&[5, 10])), BigInt::from(52));
        assert_eq!(trace_t(&ints(&[1, 2])), BigInt::from(4));
        assert_eq!(trace_t(&ints(&[1, 3])), BigInt::from(5));
    }

    #[test]
    fn recurrence_on_various_expansions() {
        for a in 2..=5 {
            let cf = family_cf(a).unwrap();
            assert!(q_sequence(&cf, 60).recurrence_holds(), "a = {a}");
        }
        let s27 = crate::cfrac::QuadraticSurd::new(BigInt::zero(), BigInt::one(), BigInt::from(27))
            .unwrap()
            .expand()
            .unwrap();
        assert!(q_sequence(&s27, 40).recurrence_holds());
    }

    #[test]
    fn binet_matches_table() {
        for a in [2i64, 3, 4] {
            let cf = family_cf(a).unwrap();
            let bd = binet_data(&cf).unwrap();
            assert_eq!(bd.t, BigInt::from(a + 2));
            assert_eq!(bd.s, 2);
            assert_eq!(bd.r, 0, "recurrence extends to index 0 for this family");
            let table = q_sequence(&cf, 40);
            for j in 0..bd.s {
                for i in 0..=((40 - bd.r - j) / bd.s) as i64 {
                    let idx = bd.s * i as usize + j + bd.r;
                    assert_eq!(
                        &bd.reconstruct(j, i).unwrap(),
                        &table.values()[idx],
                        "a={a} j={j} i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn binet_root_identities() {
        let cf = family_cf(2).unwrap();
        let bd = binet_data(&cf).unwrap();
        // theta1 = 2 + sqrt(3) after kernel normalization of sqrt(12)/2.
        let sum = bd.theta1.add(&bd.theta2).unwrap();
        assert_eq!(sum.rational_part(), &BigRational::from(BigInt::from(4)));
        assert!(sum.is_rational());
        let prod = bd.theta1.mul(&bd.theta2).unwrap();
        assert_eq!(prod, QFieldElement::from_int(1));
        // c1 positive for every residue class.
        for c in &bd.c1 {
            assert_eq!(c.signum(), 1);
        }
        // Bracketing 1 < theta1 < t + 1 and -1 < theta2 < 1, exactly.
        assert_eq!(bd.theta1.cmp_exact(&QFieldElement::from_int(1)).unwrap(), Ordering::Greater);
        assert_eq!(bd.theta1.cmp_exact(&QFieldElement::from_int(5)).unwrap(), Ordering::Less);
        assert_eq!(bd.theta2.cmp_exact(&QFieldElement::from_int(-1)).unwrap(), Ordering::Greater);
        assert_eq!(bd.theta2.cmp_exact(&QFieldElement::from_int(1)).unwrap(), Ordering::Less);
    }

    #[test]
    fn binet_coefficient_values() {
        // For [0;(1,2)]: c1[0] = (1+sqrt(3))/(2 sqrt(3)), c1[1] = (2+sqrt(3))/(2 sqrt(3)).
        let bd = binet_data(&family_cf(2).unwrap()).unwrap();
        let s3 = QFieldElement::sqrt_of(&BigInt::from(3)).unwrap();
        let two_s3 = s3.mul(&QFieldElement::from_int(2)).unwrap();
        let expect0 = QFieldElement::from_int(1).add(&s3).unwrap().div(&two_s3).unwrap();
        let expect1 = QFieldElement::from_int(2).add(&s3).unwrap().div(&two_s3).unwrap();
        assert_eq!(bd.c1[0], expect0);
        assert_eq!(bd.c1[1], expect1);
        // For [0;(1,3)]: c1 over sqrt(21).
        let bd = binet_data(&family_cf(3).unwrap()).unwrap();
        let s21 = QFieldElement::sqrt_of(&BigInt::from(21)).unwrap();
        let two_s21 = s21.mul(&QFieldElement::from_int(2)).unwrap();
        let expect0 = QFieldElement::from_int(3).add(&s21).unwrap().div(&two_s21).unwrap();
        let expect1 = QFieldElement::from_int(5).add(&s21).unwrap().div(&two_s21).unwrap();
        assert_eq!(bd.c1[0], expect0);
        assert_eq!(bd.c1[1], expect1);
        // For [0;(1,4)]: theta1 = 3 + 2 sqrt(2) (kernel of sqrt(32)).
        let bd = binet_data(&family_cf(4).unwrap()).unwrap();
        let s2 = QFieldElement::sqrt_of(&BigInt::from(2)).unwrap();
        let expect = QFieldElement::from_int(3)
            .add(&s2.mul(&QFieldElement::from_int(2)).unwrap())
            .unwrap();
        assert_eq!(bd.theta1, expect);
    }

    #[test]
    fn reconstruct_named_values() {
        // With r = 0 the index decomposition is plain: idx = 2i + j.
        let bd = binet_data(&family_cf(2).unwrap()).unwrap();
        assert_eq!(bd.reconstruct(0, 3).unwrap(), BigInt::from(41)); // q_6
        let bd3 = binet_data(&family_cf(3).unwrap()).unwrap();
        assert_eq!(bd3.reconstruct(1, 1).unwrap(), BigInt::from(5)); // q_3
        // i = 0 reproduces the seeds q_0 = q_1 = 1.
        assert_eq!(bd.reconstruct(0, 0).unwrap(), BigInt::from(1));
        assert_eq!(bd.reconstruct(1, 0).unwrap(), BigInt::from(1));
    }

    #[test]
    fn growth_envelopes() {
        assert!(growth_envelope_check(2, 50).unwrap());
        assert!(growth_envelope_check(3, 50).unwrap());
        assert!(growth_envelope_check(4, 30).unwrap());
        assert!(growth_envelope_check(5, 25).unwrap());
    }

    #[test]
    fn remark_recurrence_for_sqrt27() {
        // q_{i+4} = 52 q_{i+2} - q_i for sqrt(27) = [5; (5, 10)].
        let cf = crate::cfrac::QuadraticSurd::new(BigInt::zero(), BigInt::one(), BigInt::from(27))
            .unwrap()
            .expand()
            .unwrap();
        assert_eq!(trace_t(cf.period()), BigInt::from(52));
        let t = q_sequence(&cf, 12);
        for i in 1..=8 {
            let lhs = &t.values()[i + 4];
            let rhs = BigInt::from(52) * &t.values()[i + 2] - &t.values()[i];
            assert_eq!(lhs, &rhs, "i = {i}");
        }
    }
}
