//! Continued fractions of quadratic surds, exactly, plus certified expansion
//! of real intervals.
//!
//! Surds travel as `(P + sqrt(D))/Q` in the canonical form `Q | D - P^2`, so
//! the expansion loop stays in integer arithmetic the whole way: the floor of
//! each iterate comes from an integer square root, never from a rounded real.
//! Period detection keys on the `(P, Q)` state pair, which pins down the
//! iterate exactly (`D` never changes).

use crate::qfield::QFieldElement;
use crate::real::{CertifiedReal, NumError, NumResult};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;

/// Hard stop for expansion loops. Reduced-state counting bounds any real
/// expansion far below this; hitting it means a logic error, not bad input.
const EXPANSION_ITERATION_CAP: usize = 1_000_000;

/// The value `(P + sqrt(D))/Q` with `D` positive and not a perfect square.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticSurd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
}

impl QuadraticSurd {
    /// Canonicalize `(p + sqrt(d))/q`: scale so that `q` divides `d - p^2`.
    pub fn new(p: BigInt, q: BigInt, d: BigInt) -> NumResult<Self> {
        if q.is_zero() {
            return Err(NumError::Domain("surd with zero denominator".into()));
        }
        if !d.is_positive() {
            return Err(NumError::Domain("surd radicand must be positive".into()));
        }
        let s = d.sqrt();
        if &s * &s == d {
            return Err(NumError::Domain(
                "radicand is a perfect square, value is not irrational".into(),
            ));
        }
        let diff = &d - &p * &p;
        if (&diff % &q).is_zero() {
            return Ok(QuadraticSurd { p, q, d });
        }
        let scale = q.abs();
        Ok(QuadraticSurd {
            p: &p * &scale,
            d: &d * &q * &q,
            q: &q * &scale,
        })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// Exact value as a field element.
    pub fn to_field_element(&self) -> NumResult<QFieldElement> {
        let x = BigRational::new(self.p.clone(), self.q.clone());
        let y = BigRational::new(BigInt::one(), self.q.clone());
        QFieldElement::new(x, y, self.d.clone())
    }

    /// Certified enclosure of the value.
    pub fn to_real(&self, bits: u32) -> NumResult<CertifiedReal> {
        self.to_field_element()?.to_real(bits)
    }

    /// Exact eventually-periodic continued fraction with minimal period.
    pub fn expand(&self) -> NumResult<ContinuedFraction> {
        let sd = self.d.sqrt(); // floor(sqrt(d)), d nonsquare
        let mut p = self.p.clone();
        let mut q = self.q.clone();
        let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
        let mut quotients: Vec<BigInt> = Vec::new();
        for i in 0..EXPANSION_ITERATION_CAP {
            if let Some(&j) = seen.get(&(p.clone(), q.clone())) {
                let preperiod = quotients[..j].to_vec();
                let period = quotients[j..].to_vec();
                return ContinuedFraction::new(preperiod, period);
            }
            seen.insert((p.clone(), q.clone()), i);
            // floor((p + sqrt(d))/q): the numerator lies strictly between
            // p + sd and p + sd + 1, so integer division settles it exactly.
            let a = if q.is_positive() {
                (&p + &sd).div_floor(&q)
            } else {
                -(&p + &sd + BigInt::one()).div_ceil(&-&q)
            };
            let p_next = &a * &q - &p;
            let q_next = (&self.d - &p_next * &p_next) / &q;
            quotients.push(a);
            p = p_next;
            q = q_next;
        }
        Err(NumError::Domain(
            "surd expansion exceeded the iteration budget".into(),
        ))
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() && self.q.is_one() {
            write!(f, "sqrt({})", self.d)
        } else {
            write!(f, "({}+sqrt({}))/{}", self.p, self.d, self.q)
        }
    }
}

/// Eventually periodic continued fraction `[a_0; a_1, ..., (b_0, ..., b_{s-1})]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContinuedFraction {
    preperiod: Vec<BigInt>,
    period: Vec<BigInt>,
}

impl ContinuedFraction {
    /// Validate entries and reduce the period word to its minimal block.
    pub fn new(preperiod: Vec<BigInt>, period: Vec<BigInt>) -> NumResult<Self> {
        if period.is_empty() {
            return Err(NumError::Domain("empty period".into()));
        }
        for b in &period {
            if !b.is_positive() {
                return Err(NumError::Domain("period entries must be positive".into()));
            }
        }
        for a in preperiod.iter().skip(if preperiod.is_empty() { 0 } else { 1 }) {
            if !a.is_positive() {
                return Err(NumError::Domain(
                    "partial quotients after the first must be positive".into(),
                ));
            }
        }
        let period = minimal_word(period);
        Ok(ContinuedFraction { preperiod, period })
    }

    pub fn preperiod(&self) -> &[BigInt] {
        &self.preperiod
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    /// Partial quotient at position `i` (preperiod first, then the period
    /// repeating forever).
    pub fn quotient(&self, i: usize) -> BigInt {
        if i < self.preperiod.len() {
            self.preperiod[i].clone()
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()].clone()
        }
    }

    /// Exact value: solve the purely periodic fixed point, then apply the
    /// preperiod Moebius map.
    pub fn value_as_surd(&self) -> NumResult<QuadraticSurd> {
        // Period matrix (A B; C D) = prod of (b 1; 1 0).
        let (ma, mb, mc, md) = word_matrix(&self.period);
        // Fixed point y = (A y + B)/(C y + D): C y^2 + (D - A) y - B = 0.
        let disc = (&ma - &md) * (&ma - &md) + BigInt::from(4) * &mb * &mc;
        let s = disc.sqrt();
        if &s * &s == disc {
            return Err(NumError::Domain(
                "degenerate period: fixed point is rational".into(),
            ));
        }
        let two_c = BigInt::from(2) * &mc;
        let y = QFieldElement::new(
            BigRational::new(&ma - &md, two_c.clone()),
            BigRational::new(BigInt::one(), two_c),
            disc,
        )?;
        let x = if self.preperiod.is_empty() {
            y
        } else {
            let (na, nb, nc, nd) = word_matrix(&self.preperiod);
            let num = y
                .mul(&QFieldElement::from_rational(BigRational::from(na)))?
                .add(&QFieldElement::from_rational(BigRational::from(nb)))?;
            let den = y
                .mul(&QFieldElement::from_rational(BigRational::from(nc)))?
                .add(&QFieldElement::from_rational(BigRational::from(nd)))?;
            num.div(&den)?
        };
        field_element_to_surd(&x)
    }

    /// Parse "[a0; a1, ..., (b0, b1, ...)]". Whitespace-insensitive; accepts
    /// an ASCII hyphen or a unicode minus on the leading entry.
    pub fn parse(text: &str) -> NumResult<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = s
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| NumError::Parse(format!("expected [...] syntax, got {text:?}")))?;
        let (pre_text, period_text) = match inner.find('(') {
            Some(open) => {
                let close = inner
                    .rfind(')')
                    .ok_or_else(|| NumError::Parse("unclosed period group".into()))?;
                if close + 1 != inner.len() {
                    return Err(NumError::Parse("trailing text after period group".into()));
                }
                (&inner[..open], &inner[open + 1..close])
            }
            None => return Err(NumError::Parse("missing (period) group".into())),
        };
        let pre_text = pre_text.trim_end_matches([',', ';']);
        let mut preperiod = Vec::new();
        if !pre_text.is_empty() {
            // The a0 separator is ';'; later separators are ','.
            for tok in pre_text.replace(';', ",").split(',') {
                if tok.is_empty() {
                    continue;
                }
                preperiod.push(parse_int(tok)?);
            }
        }
        let mut period = Vec::new();
        for tok in period_text.split(',') {
            if tok.is_empty() {
                continue;
            }
            period.push(parse_int(tok)?);
        }
        ContinuedFraction::new(preperiod, period)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        if self.preperiod.is_empty() {
            write!(f, "[({})]", join(&self.period))
        } else if self.preperiod.len() == 1 {
            write!(f, "[{}; ({})]", self.preperiod[0], join(&self.period))
        } else {
            write!(
                f,
                "[{}; {}, ({})]",
                self.preperiod[0],
                join(&self.preperiod[1..]),
                join(&self.period)
            )
        }
    }
}

/// Reduce a period word to its shortest repeating block.
fn minimal_word(word: Vec<BigInt>) -> Vec<BigInt> {
    let n = word.len();
    'outer: for m in 1..=n {
        if n % m != 0 {
            continue;
        }
        for i in m..n {
            if word[i] != word[i % m] {
                continue 'outer;
            }
        }
        return word[..m].to_vec();
    }
    word
}

/// Product of `(a 1; 1 0)` over the word, as `(a, b, c, d)` row-major.
fn word_matrix(word: &[BigInt]) -> (BigInt, BigInt, BigInt, BigInt) {
    let (mut a, mut b, mut c, mut d) =
        (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for w in word {
        // (a b; c d) * (w 1; 1 0) = (a w + b, a; c w + d, c)
        let na = &a * w + &b;
        let nc = &c * w + &d;
        b = a;
        d = c;
        a = na;
        c = nc;
    }
    (a, b, c, d)
}

/// Convert an irrational field element `u + v sqrt(d)` to `(P + sqrt(D))/Q`.
fn field_element_to_surd(x: &QFieldElement) -> NumResult<QuadraticSurd> {
    if x.is_rational() {
        return Err(NumError::Domain("value is rational, not a surd".into()));
    }
    let u = x.rational_part();
    let v = x.surd_part();
    let g = u.denom().lcm(v.denom());
    let a = (u * BigRational::from(g.clone())).to_integer();
    let b = (v * BigRational::from(g.clone())).to_integer();
    // u + v sqrt(d) = (a + b sqrt(d))/g = (a + sgn(b) sqrt(b^2 d))/g
    let d_scaled = &b * &b * x.radicand();
    if b.is_positive() {
        QuadraticSurd::new(a, g, d_scaled)
    } else {
        QuadraticSurd::new(-a, -g, d_scaled)
    }
}

fn parse_int(tok: &str) -> NumResult<BigInt> {
    let cleaned = tok.replace('\u{2212}', "-");
    cleaned
        .parse::<BigInt>()
        .map_err(|_| NumError::Parse(format!("bad integer {tok:?}")))
}

/// Parse the surd syntax "sqrt(27)", "(−1+sqrt(3))/1", "(1+2*sqrt(5))/3".
pub fn parse_surd(text: &str) -> NumResult<QuadraticSurd> {
    let s: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .collect();
    if let Some(rad) = s.strip_prefix("sqrt(").and_then(|t| t.strip_suffix(')')) {
        let d = parse_int(rad)?;
        return QuadraticSurd::new(BigInt::zero(), BigInt::one(), d);
    }
    // (A ± k*sqrt(D))/Q
    let body = s
        .strip_prefix('(')
        .ok_or_else(|| NumError::Parse(format!("unrecognized surd syntax {text:?}")))?;
    let (inner, denom_part) = body
        .split_once(")/")
        .ok_or_else(|| NumError::Parse("expected (...)/Q".into()))?;
    let q = parse_int(denom_part)?;
    let idx = inner
        .find("sqrt(")
        .ok_or_else(|| NumError::Parse("expected sqrt(...) term".into()))?;
    let rad = inner[idx + 5..]
        .strip_suffix(')')
        .ok_or_else(|| NumError::Parse("unclosed sqrt".into()))?;
    let d = parse_int(rad)?;
    let head = &inner[..idx];
    // head is "A+", "A-", "A+k*", "A-k*", "k*", "-", or "".
    let (a_text, coeff_text) = match head.rfind(['+', '-']) {
        Some(0) => ("", head),
        Some(pos) => (&head[..pos], &head[pos..]),
        None => ("", head),
    };
    let a = if a_text.is_empty() { BigInt::zero() } else { parse_int(a_text)? };
    let coeff_core = coeff_text.trim_end_matches('*');
    let k = match coeff_core {
        "" | "+" => BigInt::one(),
        "-" => -BigInt::one(),
        t => parse_int(t)?,
    };
    // (a + k sqrt(d))/q = (a + sgn(k) sqrt(k^2 d))/q
    let d_scaled = &k * &k * d;
    if k.is_positive() {
        QuadraticSurd::new(a, q, d_scaled)
    } else {
        QuadraticSurd::new(-a, -q, d_scaled)
    }
}

/// Either input syntax the command line accepts for a quadratic irrational.
pub enum SurdInput {
    Surd(QuadraticSurd),
    Cf(ContinuedFraction),
}

pub fn parse_surd_or_cf(text: &str) -> NumResult<SurdInput> {
    let t = text.trim();
    if t.starts_with('[') {
        Ok(SurdInput::Cf(ContinuedFraction::parse(t)?))
    } else {
        Ok(SurdInput::Surd(parse_surd(t)?))
    }
}

/// Certified continued fraction prefix of every real in the interval.
/// Quotients are emitted only while both endpoints agree on the floor at each
/// Gauss-map step; the function stops early (possibly empty) rather than
/// guess, so callers raise precision and retry when they need more terms.
pub fn cf_expand_real(x: &CertifiedReal, max_terms: usize) -> Vec<BigInt> {
    let mut lo = dyadic_to_rational(x.lo());
    let mut hi = dyadic_to_rational(x.hi());
    let mut out = Vec::new();
    while out.len() < max_terms {
        let fl = lo.floor().to_integer();
        let fh = hi.floor().to_integer();
        if fl != fh {
            break;
        }
        out.push(fl.clone());
        let a = BigRational::from(fl);
        let u = lo - &a;
        let v = hi - &a;
        // Tail is 1/(x - a); certifiable only when the whole interval stays
        // strictly inside (a, a+1).
        if u.is_zero() || v >= BigRational::one() {
            break;
        }
        lo = v.recip();
        hi = u.recip();
    }
    out
}

fn dyadic_to_rational(x: &crate::dyadic::Dyadic) -> BigRational {
    let e = x.exponent();
    if e >= 0 {
        BigRational::from(x.mantissa() << e as u64)
    } else {
        BigRational::new(x.mantissa().clone(), BigInt::one() << (-e) as u64)
    }
}

/// Standard convergent recurrence with seeds `p_{-1}=1, p_{-2}=0, q_{-1}=0,
/// q_{-2}=1`; returns `(p_k, q_k)` in lowest terms.
pub fn convergents_from_quotients(quotients: &[BigInt], k: usize) -> NumResult<(BigInt, BigInt)> {
    if k >= quotients.len() {
        return Err(NumError::Domain(format!(
            "convergent index {k} out of range for {} quotients",
            quotients.len()
        )));
    }
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    for a in &quotients[..=k] {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    Ok((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surd(p: i64, q: i64, d: i64) -> QuadraticSurd {
        QuadraticSurd::new(BigInt::from(p), BigInt::from(q), BigInt::from(d)).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn canonical_form_scaling() {
        let s = surd(0, 1, 27);
        assert_eq!((s.p(), s.q(), s.d()), (&BigInt::from(0), &BigInt::from(1), &BigInt::from(27)));
        // 2 | (3 - 1): already canonical.
        let s = surd(1, 2, 3);
        assert_eq!((s.p(), s.q(), s.d()), (&BigInt::from(1), &BigInt::from(2), &BigInt::from(3)));
        // 3 does not divide 5 - 1: scale by 3.
        let s = surd(1, 3, 5);
        assert_eq!((s.p(), s.q(), s.d()), (&BigInt::from(3), &BigInt::from(9), &BigInt::from(45)));
        assert!(QuadraticSurd::new(BigInt::one(), BigInt::one(), BigInt::from(49)).is_err());
    }

    #[test]
    fn expansion_examples() {
        let cf = surd(0, 1, 27).expand().unwrap();
        assert_eq!(cf.preperiod(), ints(&[5]).as_slice());
        assert_eq!(cf.period(), ints(&[5, 10]).as_slice());

        let cf = surd(-1, 1, 3).expand().unwrap();
        assert_eq!(cf.preperiod(), ints(&[0]).as_slice());
        assert_eq!(cf.period(), ints(&[1, 2]).as_slice());

        let cf = surd(0, 1, 2).expand().unwrap();
        assert_eq!(cf.preperiod(), ints(&[1]).as_slice());
        assert_eq!(cf.period(), ints(&[2]).as_slice());

        // Golden ratio: purely periodic.
        let cf = surd(1, 2, 5).expand().unwrap();
        assert!(cf.preperiod().is_empty());
        assert_eq!(cf.period(), ints(&[1]).as_slice());
    }

    #[test]
    fn negative_denominator_state() {
        // (1 - sqrt(3))/1 written as (-1 + sqrt(3))/(-1): value is negative.
        let s = QuadraticSurd::new(BigInt::from(-1), BigInt::from(-1), BigInt::from(3)).unwrap();
        let cf = s.expand().unwrap();
        // 1 - sqrt(3) = -0.732... = [-1; (2, 1)] or equivalent; verify by
        // round trip instead of pinning the digits.
        let v = cf.value_as_surd().unwrap().to_field_element().unwrap();
        let w = s.to_field_element().unwrap();
        assert_eq!(v, w);
        assert!(cf.preperiod()[0].is_negative());
    }

    #[test]
    fn value_examples() {
        let cf = ContinuedFraction::new(ints(&[0]), ints(&[1, 2])).unwrap();
        let s = cf.value_as_surd().unwrap();
        let fe = s.to_field_element().unwrap();
        let expected = surd(-1, 1, 3).to_field_element().unwrap();
        assert_eq!(fe, expected);

        let cf = ContinuedFraction::new(ints(&[1]), ints(&[2])).unwrap();
        let fe = cf.value_as_surd().unwrap().to_field_element().unwrap();
        assert_eq!(fe, surd(0, 1, 2).to_field_element().unwrap());

        // [0; (1, 3)]: the fixed point of x = 1/(1 + 1/(3 + x)) solves
        // x^2 + 3x - 3 = 0, so x = (-3 + sqrt(21))/2 ~ 0.7913.
        let cf = ContinuedFraction::new(ints(&[0]), ints(&[1, 3])).unwrap();
        let fe = cf.value_as_surd().unwrap().to_field_element().unwrap();
        assert_eq!(fe, surd(-3, 2, 21).to_field_element().unwrap());
    }

    #[test]
    fn round_trip_through_expansion() {
        for (pre, per) in [
            (vec![5], vec![5, 10]),
            (vec![0], vec![1, 2]),
            (vec![3, 1, 4], vec![1, 5]),
            (vec![], vec![2, 7]),
            (vec![-2, 1], vec![6]),
        ] {
            let cf = ContinuedFraction::new(ints(&pre), ints(&per)).unwrap();
            let s = cf.value_as_surd().unwrap();
            let rt = s.expand().unwrap();
            let s2 = rt.value_as_surd().unwrap();
            assert_eq!(
                s.to_field_element().unwrap(),
                s2.to_field_element().unwrap(),
                "value changed in round trip for {cf}"
            );
            // Expansion is idempotent on its own output.
            assert_eq!(rt, s2.expand().unwrap());
        }
    }

    #[test]
    fn period_minimality() {
        let cf = ContinuedFraction::new(ints(&[0]), ints(&[1, 2, 1, 2])).unwrap();
        assert_eq!(cf.period(), ints(&[1, 2]).as_slice());
        let cf = ContinuedFraction::new(ints(&[0]), ints(&[1, 2, 1, 3])).unwrap();
        assert_eq!(cf.period(), ints(&[1, 2, 1, 3]).as_slice());
    }

    #[test]
    fn convergent_recurrence() {
        let (p, q) = convergents_from_quotients(&ints(&[1, 1, 1, 1, 1, 1]), 5).unwrap();
        assert_eq!((p, q), (BigInt::from(13), BigInt::from(8)));
        let (p, q) = convergents_from_quotients(&ints(&[0, 1, 5, 3]), 3).unwrap();
        assert_eq!((p, q), (BigInt::from(16), BigInt::from(19)));
        let (p, q) = convergents_from_quotients(&ints(&[5, 5, 10]), 2).unwrap();
        assert_eq!((p, q), (BigInt::from(265), BigInt::from(51)));
        assert!(convergents_from_quotients(&ints(&[1]), 1).is_err());
    }

    #[test]
    fn certified_real_expansion() {
        use crate::real::sqrt_int;
        let s2 = sqrt_int(&BigInt::from(2), 128).unwrap();
        let terms = cf_expand_real(&s2, 10);
        assert_eq!(terms, ints(&[1, 2, 2, 2, 2, 2, 2, 2, 2, 2]));

        // Interval strictly containing 1/2: the second quotient is ambiguous.
        let x = CertifiedReal::new(
            crate::dyadic::Dyadic::new(BigInt::from(511), -10),
            crate::dyadic::Dyadic::new(BigInt::from(513), -10),
        );
        assert_eq!(cf_expand_real(&x, 10), ints(&[0]));

        // Golden ratio.
        let s5 = sqrt_int(&BigInt::from(5), 192).unwrap();
        let phi = s5.add(&CertifiedReal::from_i64(1), 192).div(&CertifiedReal::from_i64(2), 192).unwrap();
        let terms = cf_expand_real(&phi, 20);
        assert_eq!(terms, ints(&[1; 20]));
    }

    #[test]
    fn parse_surd_syntax() {
        let s = parse_surd("sqrt(27)").unwrap();
        assert_eq!(s, surd(0, 1, 27));
        let s = parse_surd("(\u{2212}1+sqrt(3))/1").unwrap();
        assert_eq!(s, surd(-1, 1, 3));
        let s = parse_surd("(-1 + sqrt(3)) / 1").unwrap();
        assert_eq!(s, surd(-1, 1, 3));
        let s = parse_surd("(1+2*sqrt(3))/5").unwrap();
        // (1 + sqrt(12))/5 scaled to canonical form
        assert_eq!(
            s.to_field_element().unwrap(),
            QuadraticSurd::new(BigInt::one(), BigInt::from(5), BigInt::from(12))
                .unwrap()
                .to_field_element()
                .unwrap()
        );
        assert!(parse_surd("sqrt(16)").is_err());
        assert!(parse_surd("nonsense").is_err());
    }

    #[test]
    fn parse_bracket_syntax() {
        let cf = ContinuedFraction::parse("[0;(1,2)]").unwrap();
        assert_eq!(cf.preperiod(), ints(&[0]).as_slice());
        assert_eq!(cf.period(), ints(&[1, 2]).as_slice());
        let cf = ContinuedFraction::parse("[5; (5, 10)]").unwrap();
        assert_eq!(cf.preperiod(), ints(&[5]).as_slice());
        let cf = ContinuedFraction::parse("[3; 1, 4, (1, 5)]").unwrap();
        assert_eq!(cf.preperiod(), ints(&[3, 1, 4]).as_slice());
        assert_eq!(cf.period(), ints(&[1, 5]).as_slice());
        let cf = ContinuedFraction::parse("[(1)]").unwrap();
        assert!(cf.preperiod().is_empty());
        assert!(ContinuedFraction::parse("[1; 2]").is_err());
        // Display round trip.
        let cf = ContinuedFraction::parse("[0; (1, 2)]").unwrap();
        assert_eq!(ContinuedFraction::parse(&cf.to_string()).unwrap(), cf);
    }

    #[test]
    fn convergent_quality() {
        // |value - p_k/q_k| < 1/q_k^2 for sqrt(27) convergents.
        let s = surd(0, 1, 27);
        let cf = s.expand().unwrap();
        let quotients: Vec<BigInt> = (0..12).map(|i| cf.quotient(i)).collect();
        let v = s.to_real(256).unwrap();
        for k in 0..12 {
            let (p, q) = convergents_from_quotients(&quotients, k).unwrap();
            assert!(p.gcd(&q).is_one());
            let approx = CertifiedReal::from_ratio(&p, &q, 256).unwrap();
            let err = v.sub(&approx, 256).abs();
            let bound = CertifiedReal::from_ratio(&BigInt::one(), &(&q * &q), 256).unwrap();
            assert_eq!(
                err.cmp_certain(&bound),
                Some(std::cmp::Ordering::Less),
                "quality bound failed at k={k}"
            );
        }
    }
}
