//! Baker-Davenport reduction and the Legendre-gap fallback.
//!
//! Given an inhomogeneous linear form `m*gamma - n + kappa` whose size is
//! controlled by `A1 * A2^(-k)`, a convergent denominator `q` of `gamma`
//! with `q > 6M` and a certified positive correction
//! `eps = ||kappa*q|| - M*||gamma*q||` rules out every solution with
//! `m <= M` and `k >= ln(A1*q/eps) / ln(A2)`.  [`dp_reduce`] finds the
//! smallest such `q` and reports the largest exponent it does not exclude;
//! [`dp_reduce_family`] does the same for a whole family of shifts `kappa`
//! at once, taking the worst (smallest) correction over the family.
//!
//! Cells whose shift vanishes identically cannot be reduced this way; they
//! are detected exactly at family construction and routed through
//! [`legendre_fallback`], which turns a certified gap between `gamma` and
//! its last small convergent into an absolute bound on the exponent.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bounds::PairConfig;
use crate::cfrac::cf_expand_real;
use crate::qfield::QFieldElement;
use crate::real::{CertifiedReal, NumError, NumResult, RefReal};

/// Opening precision for reduction passes. The denominators in play carry
/// around 190 bits, and fractional parts must survive multiplication by
/// them, so the ladder starts comfortably above that.
const REDUCE_START_BITS: u32 = 320;

/// Escalation ceiling. A correction or threshold still unresolved here is
/// reported as degenerate rather than retried forever.
const REDUCE_MAX_BITS: u32 = 16384;

/// Candidate convergents tried past the first admissible one before the
/// search is declared failed.
const DP_HORIZON: usize = 24;

/// Quotient budget per continued-fraction expansion pass.
const QUOTIENT_CAP: usize = 4096;

/// Relative half-width demanded of a certified correction before it feeds
/// a logarithm. 2^-40 keeps the exponent threshold orders of magnitude
/// narrower than the 8.7e-5 closest approach any published cell makes to
/// an integer cutoff.
const EPS_REL_BITS: i64 = 40;

fn domain(msg: impl Into<String>) -> NumError {
    NumError::Domain(msg.into())
}

/// True once the enclosure is positive with relative width at most
/// 2^-EPS_REL_BITS.
fn rel_narrow(x: &CertifiedReal) -> bool {
    x.lo().is_positive() && x.width().cmp_val(&x.lo().shift(-EPS_REL_BITS)) != Ordering::Greater
}

fn next_bits(bits: u32) -> u32 {
    bits.saturating_mul(2).min(REDUCE_MAX_BITS)
}

/// `||x * q||` as a certified interval.
fn scaled_distance(x: &CertifiedReal, q: &BigInt, bits: u32) -> NumResult<CertifiedReal> {
    x.mul(&CertifiedReal::from_int(q), bits).nearest_int_distance()
}

/// Numerators and denominators of an expansion's convergents, index-aligned
/// with the quotient sequence (entry `k` is the `k`-th convergent).
#[derive(Debug, Clone)]
pub struct ConvergentLadder {
    pub numerators: Vec<BigInt>,
    pub denominators: Vec<BigInt>,
}

impl ConvergentLadder {
    fn from_quotients(quotients: &[BigInt]) -> Self {
        let mut numerators = Vec::with_capacity(quotients.len());
        let mut denominators = Vec::with_capacity(quotients.len());
        let (mut pm1, mut pm2) = (BigInt::one(), BigInt::zero());
        let (mut qm1, mut qm2) = (BigInt::zero(), BigInt::one());
        for a in quotients {
            let p = a * &pm1 + &pm2;
            let q = a * &qm1 + &qm2;
            pm2 = std::mem::replace(&mut pm1, p.clone());
            qm2 = std::mem::replace(&mut qm1, q.clone());
            numerators.push(p);
            denominators.push(q);
        }
        ConvergentLadder { numerators, denominators }
    }

    pub fn len(&self) -> usize {
        self.denominators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.denominators.is_empty()
    }
}

/// Expand `gamma` at escalating precision until `pick` accepts the ladder.
fn expand_until<T>(
    gamma: &RefReal,
    what: &str,
    pick: impl Fn(&ConvergentLadder) -> Option<T>,
) -> NumResult<(T, ConvergentLadder)> {
    let mut bits = REDUCE_START_BITS;
    loop {
        let x = gamma(bits)?;
        let quotients = cf_expand_real(&x, QUOTIENT_CAP);
        let ladder = ConvergentLadder::from_quotients(&quotients);
        if let Some(t) = pick(&ladder) {
            return Ok((t, ladder));
        }
        if bits >= REDUCE_MAX_BITS {
            return Err(NumError::Precision(format!(
                "continued fraction did not certify enough convergents for {what} at {bits} bits"
            )));
        }
        bits = next_bits(bits);
    }
}

/// Convergents of `gamma` up to `extra` entries past the first denominator
/// exceeding `bound`. Returns that first index with the ladder.
pub fn ladder_past(
    gamma: &RefReal,
    bound: &BigInt,
    extra: usize,
) -> NumResult<(usize, ConvergentLadder)> {
    expand_until(gamma, "the candidate search", |ladder| {
        let first = ladder.denominators.iter().position(|q| q > bound)?;
        (ladder.len() > first + extra).then_some(first)
    })
}

/// Convergents of `gamma` through at least the given index.
pub fn ladder_to_index(gamma: &RefReal, index: usize) -> NumResult<ConvergentLadder> {
    let ((), ladder) =
        expand_until(gamma, "the requested index", |ladder| (ladder.len() > index).then_some(()))?;
    Ok(ladder)
}

fn check_coefficients(a1: &RefReal, a2: &RefReal) -> NumResult<()> {
    let a1v = a1(REDUCE_START_BITS)?;
    if !a1v.certainly_positive() {
        return Err(domain("coefficient A1 must be certifiably positive"));
    }
    let a2v = a2(REDUCE_START_BITS)?;
    if !a2v.sub(&CertifiedReal::from_i64(1), REDUCE_START_BITS).certainly_positive() {
        return Err(domain("base A2 must certifiably exceed 1"));
    }
    Ok(())
}

/// One reduction problem: rule out exponents for `|m*gamma - n + kappa|`
/// bounded by `A1 * A2^(-k)` with `m <= M`.
pub struct ReductionInstance {
    pub gamma: RefReal,
    pub kappa: RefReal,
    pub a1: RefReal,
    pub a2: RefReal,
    pub m: BigInt,
}

impl ReductionInstance {
    pub fn new(
        gamma: RefReal,
        kappa: RefReal,
        a1: RefReal,
        a2: RefReal,
        m: BigInt,
    ) -> NumResult<Self> {
        if m < BigInt::one() {
            return Err(domain("solution bound M must be at least 1"));
        }
        check_coefficients(&a1, &a2)?;
        Ok(ReductionInstance { gamma, kappa, a1, a2, m })
    }
}

/// Result of a successful reduction step.
#[derive(Debug, Clone)]
pub struct ReductionOutcome {
    /// Convergent denominator that certified the step.
    pub q: BigInt,
    /// Its index in the ladder of `gamma`.
    pub q_index: usize,
    /// Certified `||kappa*q|| - M*||gamma*q||`, positive.
    pub epsilon: CertifiedReal,
    /// Largest exponent not excluded: the certified floor of the threshold.
    pub k_bound: i64,
    /// Enclosure of `ln(A1*q/eps) / ln(A2)`.
    pub threshold: CertifiedReal,
}

enum Verdict {
    Certified(CertifiedReal),
    Failed(CertifiedReal),
    Stuck(String),
}

fn certify_epsilon(inst: &ReductionInstance, q: &BigInt) -> NumResult<Verdict> {
    let mut bits = REDUCE_START_BITS;
    loop {
        let attempt = || -> NumResult<CertifiedReal> {
            let dk = scaled_distance(&(inst.kappa)(bits)?, q, bits)?;
            let dg = scaled_distance(&(inst.gamma)(bits)?, q, bits)?;
            Ok(dk.sub(&dg.mul(&CertifiedReal::from_int(&inst.m), bits), bits))
        };
        match attempt() {
            Ok(eps) if eps.certainly_negative() => return Ok(Verdict::Failed(eps)),
            Ok(eps) if rel_narrow(&eps) => return Ok(Verdict::Certified(eps)),
            Ok(_) | Err(NumError::Precision(_)) => {}
            Err(other) => return Err(other),
        }
        if bits >= REDUCE_MAX_BITS {
            return Ok(Verdict::Stuck(format!("correction sign unresolved at {bits} bits")));
        }
        bits = next_bits(bits);
    }
}

/// Certified floor of `ln(A1*q/eps) / ln(A2)` together with the threshold
/// enclosure. The floor equals `ceil(x) - 1` for the non-integer `x` an
/// enclosure can certify, which is exactly the largest exponent the lemma
/// fails to exclude.
fn exponent_threshold(
    a1: &RefReal,
    a2: &RefReal,
    q: &BigInt,
    eps: &CertifiedReal,
) -> NumResult<(i64, CertifiedReal)> {
    let mut bits = REDUCE_START_BITS;
    loop {
        let attempt = || -> NumResult<(i64, CertifiedReal)> {
            let arg = a1(bits)?.mul(&CertifiedReal::from_int(q), bits).div(eps, bits)?;
            let x = arg.ln(bits)?.div(&a2(bits)?.ln(bits)?, bits)?;
            let k = x
                .floor_certain()?
                .to_i64()
                .ok_or_else(|| domain("exponent bound does not fit in 64 bits"))?;
            Ok((k, x))
        };
        match attempt() {
            Ok(found) => return Ok(found),
            Err(NumError::Precision(_)) if bits < REDUCE_MAX_BITS => bits = next_bits(bits),
            Err(NumError::Precision(_)) => {
                return Err(NumError::Precision(
                    "exponent threshold sits on an integer beyond working precision".into(),
                ))
            }
            Err(other) => return Err(other),
        }
    }
}

/// Smallest convergent denominator of `gamma` past `6M` whose correction
/// certifies positive, with the exponent bound it yields. Candidates that
/// fail are skipped with a note; running out of candidates is an error
/// carrying all the notes.
pub fn dp_reduce(inst: &ReductionInstance) -> NumResult<ReductionOutcome> {
    let six_m = &inst.m * 6;
    let (first, ladder) = ladder_past(&inst.gamma, &six_m, DP_HORIZON)?;
    let mut notes = Vec::new();
    for index in first..ladder.len() {
        let q = &ladder.denominators[index];
        match certify_epsilon(inst, q)? {
            Verdict::Certified(epsilon) => {
                let (k_bound, threshold) = exponent_threshold(&inst.a1, &inst.a2, q, &epsilon)?;
                return Ok(ReductionOutcome {
                    q: q.clone(),
                    q_index: index,
                    epsilon,
                    k_bound,
                    threshold,
                });
            }
            Verdict::Failed(eps) => {
                notes.push(format!("q_{index}: correction <= 0 (about {:.3e})", eps.mid_f64()));
            }
            Verdict::Stuck(msg) => notes.push(format!("q_{index}: {msg}")),
        }
    }
    Err(domain(format!(
        "no convergent denominator past 6M certified a positive correction; {}",
        notes.join("; ")
    )))
}

/// A family of shifts `kappa_{t,s} = +-(ln(num_t) - ln(den_s)) / ln(branch)`
/// reduced in one sweep. Members are exact field elements certified
/// positive at construction; pairs whose shift vanishes identically
/// (both sides rational and equal, making the logarithms cancel) are
/// excluded and reported so callers can route them through the fallback.
pub struct KappaFamily {
    nums: Vec<(i64, QFieldElement)>,
    dens: Vec<(i64, QFieldElement)>,
    branch: QFieldElement,
    excluded: Vec<(i64, i64)>,
}

impl KappaFamily {
    pub fn new(
        nums: Vec<(i64, QFieldElement)>,
        dens: Vec<(i64, QFieldElement)>,
        branch: QFieldElement,
    ) -> NumResult<Self> {
        if nums.is_empty() || dens.is_empty() {
            return Err(domain("a shift family needs at least one member on each side"));
        }
        for (label, el) in nums.iter().chain(dens.iter()) {
            if el.signum() != 1 {
                return Err(domain(format!("family member {label} is not positive")));
            }
        }
        let one = QFieldElement::from_int(1);
        if branch.sub(&one)?.signum() != 1 {
            return Err(domain("branch base must exceed 1"));
        }
        let mut excluded = Vec::new();
        for (t, num) in nums.iter().filter(|(_, el)| el.is_rational()) {
            for (s, den) in dens.iter().filter(|(_, el)| el.is_rational()) {
                // a numerator in one field can only equal a denominator in
                // the other when both collapse to the same rational
                if num.rational_part() == den.rational_part() {
                    excluded.push((*t, *s));
                }
            }
        }
        Ok(KappaFamily { nums, dens, branch, excluded })
    }

    /// Pairs `(t, s)` whose shift is identically zero.
    pub fn excluded(&self) -> &[(i64, i64)] {
        &self.excluded
    }

    pub fn member_count(&self) -> usize {
        self.nums.len() * self.dens.len() - self.excluded.len()
    }
}

/// Per-precision logarithm tables for a family, independent of `q`.
struct FamilyTables {
    bits: u32,
    ln_nums: Vec<(i64, CertifiedReal)>,
    ln_dens: Vec<(i64, CertifiedReal)>,
}

fn family_tables(family: &KappaFamily, bits: u32) -> NumResult<FamilyTables> {
    let ln_branch = family.branch.to_real(bits)?.ln(bits)?;
    let side = |els: &[(i64, QFieldElement)]| -> NumResult<Vec<(i64, CertifiedReal)>> {
        els.par_iter()
            .map(|(label, el)| Ok((*label, el.to_real(bits)?.ln(bits)?.div(&ln_branch, bits)?)))
            .collect()
    };
    Ok(FamilyTables { bits, ln_nums: side(&family.nums)?, ln_dens: side(&family.dens)? })
}

enum FamilyPass {
    AllCertified { epsilon: CertifiedReal, binding: (i64, i64) },
    MemberFailed { label: (i64, i64), epsilon: CertifiedReal },
}

/// Evaluate every family member at one `q`. Any member whose correction
/// sign cannot be settled surfaces as a `Precision` error so the caller
/// escalates; a certified nonpositive member short-circuits the pass.
fn family_pass(
    family: &KappaFamily,
    tables: &FamilyTables,
    gamma_v: &CertifiedReal,
    m: &BigInt,
    q: &BigInt,
) -> NumResult<FamilyPass> {
    let bits = tables.bits;
    let qv = CertifiedReal::from_int(q);
    let m_dg = scaled_distance(gamma_v, q, bits)?.mul(&CertifiedReal::from_int(m), bits);
    let nums: Vec<(i64, CertifiedReal)> =
        tables.ln_nums.iter().map(|(t, v)| (*t, v.mul(&qv, bits))).collect();
    let dens: Vec<(i64, CertifiedReal)> =
        tables.ln_dens.iter().map(|(s, v)| (*s, v.mul(&qv, bits))).collect();

    enum RowOut {
        Best { epsilon: CertifiedReal, binding: (i64, i64) },
        Fail { label: (i64, i64), epsilon: CertifiedReal },
    }
    let rows: Vec<RowOut> = nums
        .par_iter()
        .map(|(t, ut)| -> NumResult<Option<RowOut>> {
            let mut best: Option<(CertifiedReal, (i64, i64))> = None;
            for (s, ws) in &dens {
                if family.excluded.contains(&(*t, *s)) {
                    continue;
                }
                let d = ut.sub(ws, bits).nearest_int_distance()?;
                let eps = d.sub(&m_dg, bits);
                if eps.certainly_negative() {
                    return Ok(Some(RowOut::Fail { label: (*t, *s), epsilon: eps }));
                }
                if !eps.certainly_positive() {
                    return Err(NumError::Precision(format!(
                        "correction sign unresolved for member ({t},{s})"
                    )));
                }
                let replace = match &best {
                    None => true,
                    Some((cur, _)) => eps.hi().cmp_val(cur.hi()) == Ordering::Less,
                };
                if replace {
                    // keep the lowest lower end seen so the enclosure stays valid
                    let lo = match &best {
                        Some((cur, _)) if cur.lo().cmp_val(eps.lo()) == Ordering::Less => {
                            cur.lo().clone()
                        }
                        _ => eps.lo().clone(),
                    };
                    best = Some((CertifiedReal::new(lo, eps.hi().clone()), (*t, *s)));
                } else if let Some((cur, label)) = &best {
                    if eps.lo().cmp_val(cur.lo()) == Ordering::Less {
                        best = Some((
                            CertifiedReal::new(eps.lo().clone(), cur.hi().clone()),
                            *label,
                        ));
                    }
                }
            }
            Ok(best.map(|(epsilon, binding)| RowOut::Best { epsilon, binding }))
        })
        .filter_map(|r| r.transpose())
        .collect::<NumResult<Vec<RowOut>>>()?;

    let mut overall: Option<(CertifiedReal, (i64, i64))> = None;
    for row in rows {
        match row {
            RowOut::Fail { label, epsilon } => {
                return Ok(FamilyPass::MemberFailed { label, epsilon })
            }
            RowOut::Best { epsilon, binding } => {
                overall = Some(match overall {
                    None => (epsilon, binding),
                    Some((cur, cur_label)) => {
                        let hi_less = epsilon.hi().cmp_val(cur.hi()) == Ordering::Less;
                        let lo = if epsilon.lo().cmp_val(cur.lo()) == Ordering::Less {
                            epsilon.lo().clone()
                        } else {
                            cur.lo().clone()
                        };
                        if hi_less {
                            (CertifiedReal::new(lo, epsilon.hi().clone()), binding)
                        } else {
                            (CertifiedReal::new(lo, cur.hi().clone()), cur_label)
                        }
                    }
                });
            }
        }
    }
    let (epsilon, binding) =
        overall.ok_or_else(|| domain("every member of the shift family is excluded"))?;
    Ok(FamilyPass::AllCertified { epsilon, binding })
}

/// Reduction outcome for a family sweep: the certified minimum correction
/// over all members and the member that attains it.
#[derive(Debug, Clone)]
pub struct FamilyOutcome {
    pub q: BigInt,
    pub q_index: usize,
    /// Enclosure of the minimum correction over the family, positive.
    pub epsilon: CertifiedReal,
    pub k_bound: i64,
    pub threshold: CertifiedReal,
    /// Member `(t, s)` attaining the minimum correction.
    pub binding: (i64, i64),
}

/// Family version of [`dp_reduce`]: the smallest convergent denominator
/// past `6M` where every member's correction certifies positive, and the
/// exponent bound from the family minimum.
pub fn dp_reduce_family(
    family: &KappaFamily,
    gamma: &RefReal,
    a1: &RefReal,
    a2: &RefReal,
    m: &BigInt,
) -> NumResult<FamilyOutcome> {
    if *m < BigInt::one() {
        return Err(domain("solution bound M must be at least 1"));
    }
    check_coefficients(a1, a2)?;
    let six_m = m * 6;
    let (first, ladder) = ladder_past(gamma, &six_m, DP_HORIZON)?;
    let mut bits = REDUCE_START_BITS;
    let mut tables = family_tables(family, bits)?;
    let mut gamma_v = gamma(bits)?;
    let mut notes = Vec::new();
    'candidates: for index in first..ladder.len() {
        let q = &ladder.denominators[index];
        loop {
            match family_pass(family, &tables, &gamma_v, m, q) {
                Ok(FamilyPass::AllCertified { epsilon, binding }) if rel_narrow(&epsilon) => {
                    let (k_bound, threshold) = exponent_threshold(a1, a2, q, &epsilon)?;
                    return Ok(FamilyOutcome {
                        q: q.clone(),
                        q_index: index,
                        epsilon,
                        k_bound,
                        threshold,
                        binding,
                    });
                }
                Ok(FamilyPass::MemberFailed { label, epsilon }) => {
                    notes.push(format!(
                        "q_{index}: member ({},{}) correction <= 0 (about {:.3e})",
                        label.0,
                        label.1,
                        epsilon.mid_f64()
                    ));
                    continue 'candidates;
                }
                Ok(FamilyPass::AllCertified { .. }) | Err(NumError::Precision(_)) => {
                    if bits >= REDUCE_MAX_BITS {
                        notes.push(format!("q_{index}: unresolved at {bits} bits"));
                        continue 'candidates;
                    }
                    bits = next_bits(bits);
                    tables = family_tables(family, bits)?;
                    gamma_v = gamma(bits)?;
                }
                Err(other) => return Err(other),
            }
        }
    }
    Err(domain(format!(
        "no convergent denominator past 6M certified the whole family; {}",
        notes.join("; ")
    )))
}

/// Certify the family minimum correction at one pinned denominator. Every
/// member must certify positive; a failing member is an error here.
fn certify_family_at(
    family: &KappaFamily,
    gamma: &RefReal,
    m: &BigInt,
    q: &BigInt,
) -> NumResult<(CertifiedReal, (i64, i64))> {
    let mut bits = REDUCE_START_BITS;
    loop {
        let tables = family_tables(family, bits)?;
        let gamma_v = gamma(bits)?;
        match family_pass(family, &tables, &gamma_v, m, q) {
            Ok(FamilyPass::AllCertified { epsilon, binding }) if rel_narrow(&epsilon) => {
                return Ok((epsilon, binding));
            }
            Ok(FamilyPass::MemberFailed { label, epsilon }) => {
                return Err(domain(format!(
                    "member ({},{}) has a nonpositive correction (about {:.3e}) at this q",
                    label.0,
                    label.1,
                    epsilon.mid_f64()
                )));
            }
            Ok(FamilyPass::AllCertified { .. }) | Err(NumError::Precision(_)) => {
                if bits >= REDUCE_MAX_BITS {
                    return Err(NumError::Precision(
                        "family correction unresolved at maximum precision".into(),
                    ));
                }
                bits = next_bits(bits);
            }
            Err(other) => return Err(other),
        }
    }
}

/// Which expansion a row reduces against: the ratio `ln(theta_a)/ln(theta_b)`
/// itself or its reciprocal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Direct,
    Reciprocal,
}

/// The four published reduction layouts, distinguished by which side of the
/// shift carries a geometric tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    /// Single shift per row: `c_a[j1]` against `c_b[p1]`.
    One,
    /// Tail on the first side: `c_a[j1] - c_a[j2]*theta_a^(-t)`.
    TwoOne,
    /// Tail on the second side: `c_b[p1] - c_b[p2]*theta_b^(-s)`.
    TwoTwo,
    /// Tails on both sides.
    Three,
}

/// Tail lengths used by the published computation.
const T21_SHIFT_MAX: i64 = 96;
const T22_SHIFT_MAX: i64 = 81;
const T3_NUM_SHIFT_MAX: i64 = 101;
const T3_DEN_SHIFT_MAX: i64 = 85;

/// One published row: coefficient indices, the sign of the linear form the
/// row covers, and the expansion it reduces against.
#[derive(Debug, Clone)]
pub struct RowSpec {
    pub table: TableId,
    pub c: Vec<usize>,
    pub minus: bool,
    pub ladder: Ladder,
}

/// Ladder the published rows pair with each sign. One family runs crossed:
/// its positive rows reduce against the reciprocal expansion.
pub fn standard_ladder(table: TableId, minus: bool) -> Ladder {
    match (table, minus) {
        (TableId::TwoTwo, false) => Ladder::Reciprocal,
        (TableId::TwoTwo, true) => Ladder::Direct,
        (_, false) => Ladder::Direct,
        (_, true) => Ladder::Reciprocal,
    }
}

/// A row ready to reduce: its shift family, expansion, and coefficients.
pub struct RowInstance {
    pub family: KappaFamily,
    pub gamma: RefReal,
    pub a1: RefReal,
    /// Base choices for the excluded-exponent bound, labeled by the
    /// quantity each one bounds. Most layouts have one; the single-shift
    /// layout bounds both index differences.
    pub a2_choices: Vec<(String, RefReal)>,
}

fn log_ratio(numer: QFieldElement, denom: QFieldElement) -> RefReal {
    Arc::new(move |bits| {
        numer.to_real(bits)?.ln(bits)?.div(&denom.to_real(bits)?.ln(bits)?, bits)
    })
}

fn element_ref(el: QFieldElement) -> RefReal {
    Arc::new(move |bits| el.to_real(bits))
}

/// `(hundredths/100) / ln(branch)` as a reference real, optionally scaled
/// by an extra exact factor.
fn scaled_over_log(hundredths: i64, extra: Option<QFieldElement>, branch: QFieldElement) -> RefReal {
    Arc::new(move |bits| {
        let mut v = CertifiedReal::from_ratio(&BigInt::from(hundredths), &BigInt::from(100), bits)?;
        if let Some(f) = &extra {
            v = v.mul(&f.to_real(bits)?, bits);
        }
        v.div(&branch.to_real(bits)?.ln(bits)?, bits)
    })
}

fn tail_side(
    c_hi: &QFieldElement,
    c_lo: &QFieldElement,
    theta: &QFieldElement,
    max_shift: i64,
) -> NumResult<Vec<(i64, QFieldElement)>> {
    (1..=max_shift)
        .map(|t| Ok((t, c_hi.sub(&c_lo.mul(&theta.pow(-t)?)?)?)))
        .collect()
}

/// Assemble the reduction data for one published row.
pub fn build_row(cfg: &PairConfig, spec: &RowSpec) -> NumResult<RowInstance> {
    let theta_a = cfg.theta_alpha().clone();
    let theta_b = cfg.theta_beta().clone();
    let ca = &cfg.alpha.c1;
    let cb = &cfg.beta.c1;
    let arity = match spec.table {
        TableId::One => 2,
        TableId::TwoOne | TableId::TwoTwo => 3,
        TableId::Three => 4,
    };
    if spec.c.len() != arity {
        return Err(domain(format!(
            "row coefficient tuple has {} entries, layout needs {arity}",
            spec.c.len()
        )));
    }
    if spec.c.iter().any(|&j| j >= ca.len().min(cb.len())) {
        return Err(domain("row coefficient index out of range"));
    }

    let (nums, dens) = match spec.table {
        TableId::One => {
            let (j1, p1) = (spec.c[0], spec.c[1]);
            (vec![(0, ca[j1].clone())], vec![(0, cb[p1].clone())])
        }
        TableId::TwoOne => {
            let (j1, j2, p1) = (spec.c[0], spec.c[1], spec.c[2]);
            (
                tail_side(&ca[j1], &ca[j2], &theta_a, T21_SHIFT_MAX)?,
                vec![(0, cb[p1].clone())],
            )
        }
        TableId::TwoTwo => {
            let (j1, p1, p2) = (spec.c[0], spec.c[1], spec.c[2]);
            (
                vec![(0, ca[j1].clone())],
                tail_side(&cb[p1], &cb[p2], &theta_b, T22_SHIFT_MAX)?,
            )
        }
        TableId::Three => {
            let (j1, j2, p1, p2) = (spec.c[0], spec.c[1], spec.c[2], spec.c[3]);
            (
                tail_side(&ca[j1], &ca[j2], &theta_a, T3_NUM_SHIFT_MAX)?,
                tail_side(&cb[p1], &cb[p2], &theta_b, T3_DEN_SHIFT_MAX)?,
            )
        }
    };

    let (branch, gamma) = match spec.ladder {
        Ladder::Direct => (theta_b.clone(), log_ratio(theta_a.clone(), theta_b.clone())),
        Ladder::Reciprocal => (theta_a.clone(), log_ratio(theta_b.clone(), theta_a.clone())),
    };
    let family = KappaFamily::new(nums, dens, branch.clone())?;

    let a1 = match spec.table {
        TableId::One => scaled_over_log(2024, Some(theta_a.clone()), branch.clone()),
        TableId::TwoOne | TableId::TwoTwo => scaled_over_log(442, None, branch.clone()),
        TableId::Three => scaled_over_log(374, None, branch),
    };
    let a2_choices = match spec.table {
        TableId::One => vec![
            ("n1-n2".to_string(), element_ref(theta_a)),
            ("m1-m2".to_string(), element_ref(theta_b)),
        ],
        TableId::TwoOne => vec![("m1-m2".to_string(), element_ref(theta_b))],
        TableId::TwoTwo => vec![("n1-n2".to_string(), element_ref(theta_a))],
        TableId::Three => vec![("m1".to_string(), element_ref(theta_b))],
    };
    Ok(RowInstance { family, gamma, a1, a2_choices })
}

/// Evaluation of one row at a pinned denominator, one entry per bounded
/// quantity.
#[derive(Debug, Clone)]
pub struct RowEvaluation {
    pub bounded: String,
    pub q: BigInt,
    pub q_index: usize,
    pub epsilon: CertifiedReal,
    pub k_bound: i64,
    pub threshold: CertifiedReal,
    pub binding: (i64, i64),
    pub excluded: Vec<(i64, i64)>,
}

/// Evaluate a published row at a fixed ladder index. The published
/// computation does not always stop at the smallest certifying index, so
/// reproduction pins the reported one; any certified positive correction
/// past `6M` yields a valid bound regardless of the index chosen.
pub fn run_pinned_row(
    cfg: &PairConfig,
    spec: &RowSpec,
    m: &BigInt,
    q_index: usize,
) -> NumResult<Vec<RowEvaluation>> {
    let row = build_row(cfg, spec)?;
    let ladder = ladder_to_index(&row.gamma, q_index)?;
    let q = ladder.denominators[q_index].clone();
    let six_m = m * 6;
    if q <= six_m {
        return Err(domain("pinned denominator does not exceed 6M"));
    }
    let (epsilon, binding) = certify_family_at(&row.family, &row.gamma, m, &q)?;
    let mut evaluations = Vec::with_capacity(row.a2_choices.len());
    for (bounded, a2) in &row.a2_choices {
        let (k_bound, threshold) = exponent_threshold(&row.a1, a2, &q, &epsilon)?;
        evaluations.push(RowEvaluation {
            bounded: bounded.clone(),
            q: q.clone(),
            q_index,
            epsilon: epsilon.clone(),
            k_bound,
            threshold,
            binding,
            excluded: row.family.excluded().to_vec(),
        });
    }
    Ok(evaluations)
}

/// Smallest-certifying reduction of one published row, using the family
/// minimum and the row's first bounded quantity.
pub fn reduce_row(cfg: &PairConfig, spec: &RowSpec, m: &BigInt) -> NumResult<FamilyOutcome> {
    let row = build_row(cfg, spec)?;
    let (_, a2) = row
        .a2_choices
        .first()
        .ok_or_else(|| domain("row has no bounded quantity"))?;
    dp_reduce_family(&row.family, &row.gamma, &row.a1, a2, m)
}

/// Fallback data when a shift vanishes: the last two convergents of
/// `gamma` with denominator at most `m`, their certified gaps to `gamma`,
/// and the exponent bound extracted from the final gap.
#[derive(Debug, Clone)]
pub struct LegendreOutcome {
    pub prev_index: usize,
    pub prev: (BigInt, BigInt),
    pub prev_gap: CertifiedReal,
    pub last_index: usize,
    pub last: (BigInt, BigInt),
    pub last_gap: CertifiedReal,
    pub n1_bound: u64,
}

/// Indices and values of the last two convergents of `gamma` whose
/// denominators stay within `m`.
pub fn legendre_scan(
    gamma: &RefReal,
    m: &BigInt,
) -> NumResult<(usize, (BigInt, BigInt), usize, (BigInt, BigInt))> {
    let (beyond, ladder) = expand_until(gamma, "the small-denominator scan", |lad| {
        lad.denominators.iter().position(|q| q > m)
    })?;
    if beyond < 2 {
        return Err(domain("fewer than two convergents fit under the bound"));
    }
    let last = beyond - 1;
    let prev = beyond - 2;
    Ok((
        prev,
        (ladder.numerators[prev].clone(), ladder.denominators[prev].clone()),
        last,
        (ladder.numerators[last].clone(), ladder.denominators[last].clone()),
    ))
}

/// Certified `|gamma - p/q|`, escalated until positive and narrow.
pub fn convergent_gap(gamma: &RefReal, p: &BigInt, q: &BigInt) -> NumResult<CertifiedReal> {
    let mut bits = REDUCE_START_BITS;
    loop {
        let gap = gamma(bits)?
            .sub(&CertifiedReal::from_ratio(p, q, bits)?, bits)
            .abs();
        if rel_narrow(&gap) {
            return Ok(gap);
        }
        if bits >= REDUCE_MAX_BITS {
            return Err(NumError::Precision(
                "gap to the convergent did not certify positive".into(),
            ));
        }
        bits = next_bits(bits);
    }
}

/// Exponent bound when the reduction shift vanishes identically. A zero
/// shift collapses the linear form to `m*gamma - n`, so a convergent gap
/// bounds it below and `n1` is the largest exponent whose growth term
/// still fits under `1.54 / (gap * ln(theta_b))`.
pub fn legendre_fallback(cfg: &PairConfig, m: &BigInt) -> NumResult<LegendreOutcome> {
    let theta_a = cfg.theta_alpha().clone();
    let theta_b = cfg.theta_beta().clone();
    let gamma = log_ratio(theta_a.clone(), theta_b.clone());
    let (prev_index, prev, last_index, last) = legendre_scan(&gamma, m)?;
    let prev_gap = convergent_gap(&gamma, &prev.0, &prev.1)?;
    let last_gap = convergent_gap(&gamma, &last.0, &last.1)?;

    // ceiling for n * theta_a^n, certified from the gap's lower end
    let mut bits = REDUCE_START_BITS;
    let ceiling = loop {
        let denom = CertifiedReal::new(last_gap.lo().clone(), last_gap.lo().clone())
            .mul(&theta_b.to_real(bits)?.ln(bits)?, bits);
        let c = CertifiedReal::from_ratio(&BigInt::from(154), &BigInt::from(100), bits)?
            .div(&denom, bits)?;
        if rel_narrow(&c) {
            break c;
        }
        if bits >= REDUCE_MAX_BITS {
            return Err(NumError::Precision("fallback ceiling did not certify".into()));
        }
        bits = next_bits(bits);
    };

    // growth jumps by a factor theta_a > 1 per step, so the first certified
    // exceedance is decisive
    let mut n: u64 = 0;
    let n1_bound = loop {
        let next = n + 1;
        let grown = theta_a
            .pow(i64::try_from(next).expect("shift fits i64"))?
            .mul(&QFieldElement::from_int(i64::try_from(next).expect("shift fits i64")))?;
        let over = grown
            .to_real(REDUCE_START_BITS)?
            .sub(&ceiling, REDUCE_START_BITS)
            .certainly_positive();
        if over {
            break n;
        }
        n = next;
        if n > 100_000 {
            return Err(domain("fallback exponent bound exceeds the search cap"));
        }
    };

    Ok(LegendreOutcome {
        prev_index,
        prev,
        prev_gap,
        last_index,
        last,
        last_gap,
        n1_bound,
    })
}
