//! Baker-method upper bounds: Matveev's lower bound for linear forms in
//! logarithms, the Petho-de Weger resolution of `x <= p + g (ln x)^c`, and
//! the combined bound for exponents of representations shared between two
//! denominator families.
//!
//! Every numeric constant that appears in the combined bound is recomputed
//! here from its defining expression; decimal literals below are either
//! exact integers (scaled powers of ten) or appear only as the published
//! values the recomputation is checked against in tests.

use num_bigint::BigInt;

use crate::convergents::{binet_data, family_cf, BinetData};
use crate::qfield::{same_field, QFieldElement};
use crate::real::{e_const, refine, CertifiedReal, NumError, NumResult, PrecisionPolicy, RefReal};

/// Working precision for bound evaluation. The tightest runtime margin in
/// the validity chain is the closed form vs the raw Petho-de Weger output
/// (about 1.5e-4 relative); 256-bit enclosures sit many orders below that.
const BOUND_BITS: u32 = 256;

/// Exact integer `n * 10^k`.
fn pow10_int(n: i64, k: u32) -> BigInt {
    BigInt::from(n) * BigInt::from(10u32).pow(k)
}

/// Certified `x <= num/den` (den > 0), decided exactly on endpoints.
fn le_ratio(x: &CertifiedReal, num: i64, den: u64) -> bool {
    let scaled = x.hi().mul(&crate::dyadic::Dyadic::from_i64(den as i64));
    scaled.cmp_val(&crate::dyadic::Dyadic::from_i64(num)) != std::cmp::Ordering::Greater
}

/// Certified `x >= num/den` (den > 0).
fn ge_ratio(x: &CertifiedReal, num: i64, den: u64) -> bool {
    let scaled = x.lo().mul(&crate::dyadic::Dyadic::from_i64(den as i64));
    scaled.cmp_val(&crate::dyadic::Dyadic::from_i64(num)) != std::cmp::Ordering::Less
}

/// The two quadratic-irrational families `[0; (1, a)]` and `[0; (1, b)]`
/// whose denominator sequences are being compared, with their exact
/// recurrence data. The combined bound is only proved for `2 <= a < b`
/// generating distinct real quadratic fields, so construction enforces
/// both.
#[derive(Clone, Debug)]
pub struct PairConfig {
    pub a: i64,
    pub b: i64,
    pub d_a: BigInt,
    pub d_b: BigInt,
    pub alpha: BinetData,
    pub beta: BinetData,
}

impl PairConfig {
    pub fn new(a: i64, b: i64) -> NumResult<Self> {
        if a < 2 || b <= a {
            return Err(NumError::Domain(format!(
                "pair ({a}, {b}) out of range: need 2 <= a < b"
            )));
        }
        let d_a = BigInt::from(a) * BigInt::from(a + 4);
        let d_b = BigInt::from(b) * BigInt::from(b + 4);
        if same_field(&d_a, &d_b)? {
            return Err(NumError::Domain(format!(
                "sqrt({d_a}) and sqrt({d_b}) generate the same field; the \
                 two-family argument needs distinct fields"
            )));
        }
        let alpha = binet_data(&family_cf(a)?)?;
        let beta = binet_data(&family_cf(b)?)?;
        Ok(PairConfig { a, b, d_a, d_b, alpha, beta })
    }

    /// Dominant recurrence root of the `a` family, `(a + 2 + sqrt(d_a))/2`.
    pub fn theta_alpha(&self) -> &QFieldElement {
        &self.alpha.theta1
    }

    pub fn theta_beta(&self) -> &QFieldElement {
        &self.beta.theta1
    }

    pub fn ln_theta_alpha(&self, bits: u32) -> NumResult<CertifiedReal> {
        self.theta_alpha().to_real(bits + 8)?.ln(bits)
    }

    pub fn ln_theta_beta(&self, bits: u32) -> NumResult<CertifiedReal> {
        self.theta_beta().to_real(bits + 8)?.ln(bits)
    }

    pub fn ln_theta_alpha_ref(&self) -> RefReal {
        let theta = self.theta_alpha().clone();
        std::sync::Arc::new(move |bits| theta.to_real(bits + 8)?.ln(bits))
    }

    pub fn ln_theta_beta_ref(&self) -> RefReal {
        let theta = self.theta_beta().clone();
        std::sync::Arc::new(move |bits| theta.to_real(bits + 8)?.ln(bits))
    }
}

/// One application of Matveev's theorem: `T` multiplicatively independent
/// algebraic numbers in a field of degree `D`, with certified per-number
/// quantities `A[j] >= max(D h(delta_j), |ln delta_j|, 0.16)` and exponent
/// scale `B >= max |k_j|`.
#[derive(Clone, Debug)]
pub struct MatveevInstance {
    t: u32,
    d: u32,
    a: Vec<CertifiedReal>,
    b: CertifiedReal,
}

impl MatveevInstance {
    pub fn new(d: u32, a: Vec<CertifiedReal>, b: CertifiedReal) -> NumResult<Self> {
        if a.is_empty() {
            return Err(NumError::Domain("Matveev instance with no logarithms".into()));
        }
        if d == 0 {
            return Err(NumError::Domain("field degree must be positive".into()));
        }
        for (j, aj) in a.iter().enumerate() {
            // 0.16 is part of the theorem's hypothesis on each A_j.
            if !ge_ratio(aj, 16, 100) {
                return Err(NumError::Domain(format!(
                    "A[{j}] not certified >= 0.16 (enclosure [{}, {}])",
                    aj.lo().to_decimal(6, crate::dyadic::Dir::Down),
                    aj.hi().to_decimal(6, crate::dyadic::Dir::Up),
                )));
            }
        }
        if !ge_ratio(&b, 1, 1) {
            return Err(NumError::Domain("B not certified >= 1".into()));
        }
        Ok(MatveevInstance { t: a.len() as u32, d, a, b })
    }

    pub fn t(&self) -> u32 {
        self.t
    }
}

/// `1.4 * 30^(T+3) * T^4.5 * D^2 * ln(e D)`, the leading factor of
/// Matveev's bound. `T^4.5` is evaluated as `sqrt(T^9)` so the only
/// inexact steps are the square root and the logarithm.
pub fn matveev_constant(t: u32, d: u32, bits: u32) -> NumResult<CertifiedReal> {
    if t == 0 || d == 0 {
        return Err(NumError::Domain("Matveev constant needs T >= 1, D >= 1".into()));
    }
    let int_part = BigInt::from(7)
        * BigInt::from(30u32).pow(t + 3)
        * BigInt::from(d) * BigInt::from(d);
    let rational = CertifiedReal::from_ratio(&int_part, &BigInt::from(5), bits)?;
    let t_45 = crate::real::sqrt_int(&BigInt::from(t).pow(9), bits)?;
    let ln_ed = CertifiedReal::from_int(&BigInt::from(d))
        .ln(bits)?
        .add(&CertifiedReal::from_i64(1), bits);
    Ok(rational.mul(&t_45, bits).mul(&ln_ed, bits))
}

/// Lower bound for `ln |delta_1^{k_1} ... delta_T^{k_T} - 1|` when the form
/// is nonzero: returns the certified (negative) right-hand side
/// `-C(T, D) * A_1 ... A_T * ln(e B)`.
pub fn matveev_log_lower_bound(inst: &MatveevInstance, bits: u32) -> NumResult<CertifiedReal> {
    let mut acc = matveev_constant(inst.t, inst.d, bits)?;
    for aj in &inst.a {
        acc = acc.mul(aj, bits);
    }
    let ln_eb = inst.b.ln(bits)?.add(&CertifiedReal::from_i64(1), bits);
    Ok(acc.mul(&ln_eb, bits).neg())
}

/// Petho-de Weger: every solution of `x <= p + g (ln x)^c` (x > 1, p >= 0,
/// c >= 1, and g above the hypothesis threshold `(e^2/c)^c`) satisfies
/// `x < 2^c (p^(1/c) + g^(1/c) ln(c^c g))^c`. Returns that right-hand side.
pub fn petho_deweger_solve(
    p: &CertifiedReal,
    c: u32,
    g: &CertifiedReal,
    bits: u32,
) -> NumResult<CertifiedReal> {
    if c == 0 {
        return Err(NumError::Domain("exponent c must be >= 1".into()));
    }
    if p.lo().is_negative() {
        return Err(NumError::Domain("constant term p must be certified >= 0".into()));
    }
    let e2 = e_const(bits)?.pow_u32(2, bits);
    let threshold = e2.div(&CertifiedReal::from_i64(c as i64), bits)?.pow_u32(c, bits);
    if !g.sub(&threshold, bits).certainly_positive() {
        return Err(NumError::Domain(format!(
            "hypothesis g > (e^2/c)^c not certified: g in [{}, {}], threshold hi {}",
            g.lo().to_decimal(6, crate::dyadic::Dir::Down),
            g.hi().to_decimal(6, crate::dyadic::Dir::Up),
            threshold.hi().to_decimal(6, crate::dyadic::Dir::Up),
        )));
    }
    let cc = BigInt::from(c).pow(c);
    let ln_ccg = CertifiedReal::from_int(&cc).mul(g, bits).ln(bits)?;
    let sum = p.nth_root(c, bits)?.add(&g.nth_root(c, bits)?.mul(&ln_ccg, bits), bits);
    Ok(sum.pow_u32(c, bits).shift(c as i64))
}

/// The three leading coefficients produced by the successive Matveev
/// applications in the combined-bound argument, recomputed from the
/// constant `C(3, 4)`:
///
/// * `first  = C * (2)(2)(20)`            (A' products 2 ln ta, 2 ln tb, 20 ln tb)
/// * `second = C * (2)(2) * 3.5e15`       (third A' replaced by 3.5e15 (ln tb)^3 ln n1)
/// * `third  = C * (2)(2) * 6.2e29`       (third A' replaced by 6.2e29 (ln tb)^5 (ln n1)^2)
///
/// The multipliers 3.5e15 and 6.2e29 are exact integers fixed by the
/// argument itself (4 times the rounded-up doubles of the previous stage);
/// `validity_checks` certifies those round-ups against the unrounded
/// values.
#[derive(Clone, Debug)]
pub struct ChainConstants {
    pub c_matveev: CertifiedReal,
    pub first: CertifiedReal,
    pub second: CertifiedReal,
    pub third: CertifiedReal,
}

pub fn chain_constants(bits: u32) -> NumResult<ChainConstants> {
    let c = matveev_constant(3, 4, bits)?;
    let first = c.mul(&CertifiedReal::from_i64(80), bits);
    let second = c.mul(&CertifiedReal::from_int(&pow10_int(4 * 35, 14)), bits);
    let third = c.mul(&CertifiedReal::from_int(&pow10_int(4 * 62, 28)), bits);
    Ok(ChainConstants { c_matveev: c, first, second, third })
}

/// Certify every rounding step in the coefficient chain against its
/// unrounded source. Errors name the step that failed.
fn chain_validity_checks(k: &ChainConstants, bits: u32) -> NumResult<()> {
    let two = CertifiedReal::from_i64(2);
    let steps: [(&str, CertifiedReal, BigInt); 3] = [
        // min-exponent stage: 2 * first <= 8.75e14, so 4x gives the 3.5e15 multiplier
        ("8.75e14 round-up", k.first.mul(&two, bits), pow10_int(875, 12)),
        // max-exponent stage: 2 * second <= 1.54e29 <= 1.55e29, 4x gives 6.2e29
        ("1.54e29 round-up", k.second.mul(&two, bits), pow10_int(154, 27)),
        // final stage: 2 * third <= 2.72e43
        ("2.72e43 round-up", k.third.mul(&two, bits), pow10_int(272, 41)),
    ];
    for (name, value, cap) in steps {
        let cap_real = CertifiedReal::from_int(&cap);
        if !cap_real.sub(&value, bits).certainly_positive() {
            return Err(NumError::Domain(format!("chain round-up failed: {name}")));
        }
    }
    // Linking n1 to m1 adds 1.60, absorbed by 2.72e43 -> 2.73e43; the slack
    // term 0.01e43 (ln tb)^6 (ln n1)^3 exceeds 1.60 for any ln tb >= 1, n1 >= 3.
    // Cube-root step: 2.73e43 <= (3.02e14)^3 exactly.
    let lhs = pow10_int(273, 41);
    let rhs = BigInt::from(302i64).pow(3) * BigInt::from(10u32).pow(36);
    if lhs > rhs {
        return Err(NumError::Domain("cube-root round-up failed: 3.02e14".into()));
    }
    Ok(())
}

/// Published closed form of the combined bound as a function of
/// `L = ln theta_beta`: `1.1793e46 * L^6 * (ln(9.06e14 * L^2))^3`.
pub fn combined_bound_closed_form(ln_thb: &CertifiedReal, bits: u32) -> NumResult<CertifiedReal> {
    let l2 = ln_thb.pow_u32(2, bits);
    let inner = CertifiedReal::from_int(&pow10_int(906, 12)).mul(&l2, bits).ln(bits)?;
    Ok(CertifiedReal::from_int(&pow10_int(11793, 42))
        .mul(&ln_thb.pow_u32(6, bits), bits)
        .mul(&inner.pow_u32(3, bits), bits))
}

/// Hypotheses of the combined bound that depend on the pair `(a, b)`.
/// Each is an inequality used with a fixed decimal cap in the argument;
/// all are re-certified at the given pair instead of trusting the
/// monotonicity claims that justify them for all `2 <= a < b`.
fn regime_checks(cfg: &PairConfig, bits: u32) -> NumResult<()> {
    let sa = crate::real::sqrt_int(&cfg.d_a, bits)?;
    let sb = crate::real::sqrt_int(&cfg.d_b, bits)?;
    let ta = cfg.theta_alpha().to_real(bits)?;
    let tb = cfg.theta_beta().to_real(bits)?;
    let ln_ta = cfg.ln_theta_alpha(bits)?;
    let ln_tb = cfg.ln_theta_beta(bits)?;
    let a_real = CertifiedReal::from_i64(cfg.a);
    let b_real = CertifiedReal::from_i64(cfg.b);
    let nine_eighths = CertifiedReal::from_ratio(&BigInt::from(9), &BigInt::from(8), bits)?;

    // |c2| sums: 2((sqrt(d_a)-a)/(2 sqrt(d_a)) + (sqrt(d_b)-b)/(2 sqrt(d_b))) <= 0.77
    let ca2 = sa.sub(&a_real, bits).div(&sa, bits)?;
    let cb2 = sb.sub(&b_real, bits).div(&sb, bits)?;
    let coeff_sum = ca2.add(&cb2, bits);
    if !le_ratio(&coeff_sum, 77, 100) {
        return Err(NumError::Domain("regime check failed: coefficient sum <= 0.77".into()));
    }

    // ln(9/8 * theta_beta / sqrt(d_b)) <= 0.17
    let n1_const = nine_eighths.mul(&tb, bits).div(&sb, bits)?.ln(bits)?;
    if !le_ratio(&n1_const, 17, 100) {
        return Err(NumError::Domain("regime check failed: ln(9 tb / (8 sqrt(d_b))) <= 0.17".into()));
    }

    // (0.17 + ln(2 sqrt(d_a))) / ln(theta_alpha) <= 1.60
    let ln_2sa = sa.shift(1).ln(bits)?;
    let n1_slope = CertifiedReal::from_ratio(&BigInt::from(17), &BigInt::from(100), bits)?
        .add(&ln_2sa, bits)
        .div(&ln_ta, bits)?;
    if !le_ratio(&n1_slope, 160, 100) {
        return Err(NumError::Domain("regime check failed: n1 linking constant <= 1.60".into()));
    }

    // (ln(9/8 * theta_alpha / sqrt(d_a)) + ln(2 sqrt(d_b))) / ln(theta_beta) <= 1.55
    let m1_top = nine_eighths.mul(&ta, bits).div(&sa, bits)?.ln(bits)?;
    let m1_slope = m1_top.add(&sb.shift(1).ln(bits)?, bits).div(&ln_tb, bits)?;
    if !le_ratio(&m1_slope, 155, 100) {
        return Err(NumError::Domain("regime check failed: m1 linking constant <= 1.55".into()));
    }

    // 1.54 sqrt(d_b) / (b + sqrt(d_b)) <= 0.94
    let b_plus_sb = b_real.add(&sb, bits);
    let tail1 = CertifiedReal::from_ratio(&BigInt::from(154), &BigInt::from(100), bits)?
        .mul(&sb, bits)
        .div(&b_plus_sb, bits)?;
    if !le_ratio(&tail1, 94, 100) {
        return Err(NumError::Domain("regime check failed: beta tail constant <= 0.94".into()));
    }

    // (b + 2 + sqrt(d_b)) / (b + sqrt(d_b)) <= 1.27
    let tail2 = b_real.add(&CertifiedReal::from_i64(2), bits).add(&sb, bits).div(&b_plus_sb, bits)?;
    if !le_ratio(&tail2, 127, 100) {
        return Err(NumError::Domain("regime check failed: beta ratio constant <= 1.27".into()));
    }

    // 9 theta_beta / (2 (b + sqrt(d_b))) <= 2.85
    let tail3 = CertifiedReal::from_i64(9).mul(&tb, bits).div(&b_plus_sb.shift(1), bits)?;
    if !le_ratio(&tail3, 285, 100) {
        return Err(NumError::Domain("regime check failed: alpha tail constant <= 2.85".into()));
    }

    Ok(())
}

/// Certified height bounds feeding the first Matveev application: each
/// recurrence coefficient of the `a` family has height at most
/// `(ln 4a + ln 4 d_a)/2`, likewise for `b`, and the coefficient-ratio
/// height bound `ln 4b + ln 4 d_b` stays below `5 ln theta_beta`.
pub fn height_bound_check(cfg: &PairConfig) -> NumResult<bool> {
    refine(PrecisionPolicy::default(), |bits| {
        let bound_side = |n: i64, d: &BigInt| -> NumResult<CertifiedReal> {
            let ln_4n = CertifiedReal::from_i64(4 * n).ln(bits)?;
            let ln_4d = CertifiedReal::from_int(&(BigInt::from(4) * d)).ln(bits)?;
            Ok(ln_4n.add(&ln_4d, bits).shift(-1))
        };
        let bound_a = bound_side(cfg.a, &cfg.d_a)?;
        let bound_b = bound_side(cfg.b, &cfg.d_b)?;
        for (coeffs, bound) in [(&cfg.alpha.c1, &bound_a), (&cfg.beta.c1, &bound_b)] {
            for c in coeffs.iter() {
                let h = c.height(bits)?;
                match bound.sub(&h, bits).certainly_positive() {
                    true => {}
                    false if bound.sub(&h, bits).certainly_negative() => return Ok(false),
                    false => {
                        return Err(NumError::Precision("height comparison straddles".into()))
                    }
                }
            }
        }
        // ratio height <= bound_a + bound_b <= 2 * bound_b (a < b keeps
        // bound_a below bound_b), and 2 * bound_b < 5 ln theta_beta.
        if !bound_b.sub(&bound_a, bits).certainly_positive() {
            return Ok(false);
        }
        let five_ln_tb = cfg.ln_theta_beta(bits)?.mul(&CertifiedReal::from_i64(5), bits);
        let ratio_bound = bound_a.add(&bound_b, bits);
        if !five_ln_tb.sub(&bound_b.shift(1), bits).certainly_positive()
            || !five_ln_tb.sub(&ratio_bound, bits).certainly_positive()
        {
            return Ok(false);
        }
        Ok(true)
    })
}

/// Certified check of the exponent linking inequalities
/// `n1 < 1.60 + m1 ln(tb)/ln(ta)` and `m1 < 1.55 + n1 ln(ta)/ln(tb)`.
pub fn linking_inequalities(cfg: &PairConfig, n1: u64, m1: u64) -> NumResult<bool> {
    refine(PrecisionPolicy::default(), |bits| {
        let ln_ta = cfg.ln_theta_alpha(bits)?;
        let ln_tb = cfg.ln_theta_beta(bits)?;
        let check = |lhs: u64, c_num: i64, slope: &CertifiedReal| -> NumResult<bool> {
            let rhs = CertifiedReal::from_ratio(&BigInt::from(c_num), &BigInt::from(100), bits)?
                .add(slope, bits);
            let diff = rhs.sub(&CertifiedReal::from_int(&BigInt::from(lhs)), bits);
            if diff.certainly_positive() {
                Ok(true)
            } else if diff.certainly_negative() || diff.is_point_zero() {
                Ok(false)
            } else {
                Err(NumError::Precision("linking comparison straddles".into()))
            }
        };
        let m_scaled = CertifiedReal::from_int(&BigInt::from(m1)).mul(&ln_tb, bits).div(&ln_ta, bits)?;
        let n_scaled = CertifiedReal::from_int(&BigInt::from(n1)).mul(&ln_ta, bits).div(&ln_tb, bits)?;
        Ok(check(n1, 160, &m_scaled)? && check(m1, 155, &n_scaled)?)
    })
}

/// Combined upper bound for representation exponents of the pair:
/// `(max(N, M) bound, n1 bound)`, the second being half the first. All
/// hypotheses (regime inequalities, height bounds, every round-up in the
/// coefficient chain, and the Petho-de Weger hypothesis) are re-certified;
/// the closed form is additionally certified to dominate the raw
/// Petho-de Weger output it rounds.
pub fn theorem12_bound(cfg: &PairConfig) -> NumResult<(CertifiedReal, CertifiedReal)> {
    let bits = BOUND_BITS;
    regime_checks(cfg, bits)?;
    if !height_bound_check(cfg)? {
        return Err(NumError::Domain("height bound hypothesis failed for this pair".into()));
    }
    let k = chain_constants(bits)?;
    chain_validity_checks(&k, bits)?;

    let ln_tb = cfg.ln_theta_beta(bits)?;
    let g = CertifiedReal::from_int(&pow10_int(273, 41)).mul(&ln_tb.pow_u32(6, bits), bits);
    let raw = petho_deweger_solve(&CertifiedReal::from_i64(0), 3, &g, bits)?;
    let closed = combined_bound_closed_form(&ln_tb, bits)?;
    let half = closed.shift(-1);
    if !half.sub(&raw, bits).certainly_positive() {
        return Err(NumError::Domain(
            "closed form does not dominate the Petho-de Weger output".into(),
        ));
    }
    Ok((closed, half))
}
