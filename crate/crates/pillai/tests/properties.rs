//! Randomized invariants over the exact and certified arithmetic layers.
//! Each property states a mathematical fact the implementation must honor
//! regardless of input; oracles are computed independently (coordinate
//! formulas, brute-force search, rational arithmetic, float fixpoints).

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use pillai::bounds::{matveev_log_lower_bound, petho_deweger_solve, MatveevInstance};
use pillai::cfrac::{ContinuedFraction, QuadraticSurd};
use pillai::convergents::{family_cf, growth_envelope_check, q_sequence};
use pillai::dyadic::{Dir, Dyadic};
use pillai::qfield::{height_power_check, QFieldElement};
use pillai::real::{CertifiedReal, NumError};
use pillai::reduction::{dp_reduce, ReductionInstance};
use pillai::report::{parse_decimal, sci_dyadic};
use pillai::search::multi_rep_search;
use proptest::prelude::*;

/// Radicands that are not perfect squares, so the surd part is irrational.
const NONSQUARE: [i64; 8] = [2, 3, 5, 6, 7, 10, 11, 13];

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn element(xn: i64, xd: i64, yn: i64, yd: i64, d: i64) -> QFieldElement {
    QFieldElement::new(rat(xn, xd), rat(yn, yd), BigInt::from(d)).unwrap()
}

/// Exact containment of a rational in a certified interval.
fn contains_rational(x: &CertifiedReal, v: &BigRational) -> bool {
    let q = Dyadic::from_bigint(v.denom());
    let p = Dyadic::from_bigint(v.numer());
    x.lo().mul(&q).cmp_val(&p) != Ordering::Greater
        && x.hi().mul(&q).cmp_val(&p) != Ordering::Less
}

/// Exact comparison of `m * 10^p` (a parsed decimal) against a dyadic.
fn decimal_cmp_dyadic(m: &BigInt, p: i32, d: &Dyadic) -> Ordering {
    if p >= 0 {
        let scaled = m * BigInt::from(10u32).pow(p as u32);
        Dyadic::from_bigint(&scaled).cmp_val(d)
    } else {
        let scale = BigInt::from(10u32).pow((-p) as u32);
        Dyadic::from_bigint(m).cmp_val(&d.mul(&Dyadic::from_bigint(&scale)))
    }
}

fn coord_strategy() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (-40i64..=40, 1i64..=12, -40i64..=40, 1i64..=12)
}

proptest! {
    /// Field operations agree with the coordinate formulas for x + y*sqrt(d),
    /// and multiplication distributes over addition.
    #[test]
    fn field_ops_match_coordinate_oracle(
        (x1n, x1d, y1n, y1d) in coord_strategy(),
        (x2n, x2d, y2n, y2d) in coord_strategy(),
        (x3n, x3d, y3n, y3d) in coord_strategy(),
        di in 0usize..NONSQUARE.len(),
    ) {
        let d = NONSQUARE[di];
        let a = element(x1n, x1d, y1n, y1d, d);
        let b = element(x2n, x2d, y2n, y2d, d);
        let c = element(x3n, x3d, y3n, y3d, d);

        let (x1, y1) = (rat(x1n, x1d), rat(y1n, y1d));
        let (x2, y2) = (rat(x2n, x2d), rat(y2n, y2d));
        let sum = QFieldElement::new(&x1 + &x2, &y1 + &y2, BigInt::from(d)).unwrap();
        prop_assert_eq!(a.add(&b).unwrap().cmp_exact(&sum).unwrap(), Ordering::Equal);

        let prod = QFieldElement::new(
            &x1 * &x2 + &y1 * &y2 * rat(d, 1),
            &x1 * &y2 + &x2 * &y1,
            BigInt::from(d),
        )
        .unwrap();
        prop_assert_eq!(a.mul(&b).unwrap().cmp_exact(&prod).unwrap(), Ordering::Equal);

        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs.cmp_exact(&rhs).unwrap(), Ordering::Equal);
    }

    /// The minimal polynomial annihilates its element, has the right degree,
    /// and is shared with the conjugate; trace and norm are rational.
    #[test]
    fn minpoly_annihilates(
        (xn, xd, yn, yd) in coord_strategy(),
        di in 0usize..NONSQUARE.len(),
    ) {
        let el = element(xn, xd, yn, yd, NONSQUARE[di]);
        let poly = el.minpoly();
        let value = poly.eval(&el).unwrap();
        prop_assert_eq!(
            value.cmp_exact(&QFieldElement::from_int(0)).unwrap(),
            Ordering::Equal,
            "minimal polynomial {} does not vanish", poly
        );
        if yn == 0 {
            prop_assert!(poly.degree() <= 1);
        } else {
            prop_assert_eq!(poly.degree(), 2);
            prop_assert_eq!(el.conj().minpoly(), poly);
            prop_assert!(el.add(&el.conj()).unwrap().is_rational());
            prop_assert!(el.mul(&el.conj()).unwrap().is_rational());
        }
    }

    /// Height scales exactly with integer powers.
    #[test]
    fn height_scales_with_powers(
        (xn, xd, yn, yd) in coord_strategy(),
        di in 0usize..NONSQUARE.len(),
        mi in 0usize..4,
    ) {
        prop_assume!(xn != 0 || yn != 0);
        let el = element(xn, xd, yn, yd, NONSQUARE[di]);
        let m = [2i64, 3, -1, -2][mi];
        prop_assert!(height_power_check(&el, m, 50).unwrap());
    }

    /// Continued fractions survive a display/parse round trip.
    #[test]
    fn cf_display_parse_roundtrip(
        head in 0i64..=12,
        tail in proptest::collection::vec(1i64..=12, 0..4),
        period in proptest::collection::vec(1i64..=12, 1..4),
    ) {
        let mut preperiod = vec![BigInt::from(head)];
        preperiod.extend(tail.iter().map(|&v| BigInt::from(v)));
        let period: Vec<BigInt> = period.iter().map(|&v| BigInt::from(v)).collect();
        let cf = ContinuedFraction::new(preperiod, period).unwrap();
        let reparsed = ContinuedFraction::parse(&cf.to_string()).unwrap();
        prop_assert_eq!(reparsed, cf);
    }

    /// Expanding a surd and folding the expansion back recovers the same
    /// number, and the refolded value expands to the identical word.
    #[test]
    fn surd_expand_value_roundtrip(
        p in -30i64..=30,
        q in 1i64..=15,
        neg in proptest::bool::ANY,
        di in 0usize..NONSQUARE.len(),
    ) {
        let q = if neg { -q } else { q };
        let surd =
            QuadraticSurd::new(BigInt::from(p), BigInt::from(q), BigInt::from(NONSQUARE[di]))
                .unwrap();
        let cf = surd.expand().unwrap();
        let folded = cf.value_as_surd().unwrap();
        let original = surd.to_field_element().unwrap();
        let back = folded.to_field_element().unwrap();
        prop_assert_eq!(back.cmp_exact(&original).unwrap(), Ordering::Equal);
        prop_assert_eq!(folded.expand().unwrap(), cf);
    }

    /// Certified arithmetic always brackets the exact rational result.
    #[test]
    fn certified_ops_contain_exact_rationals(
        p1 in -9999i64..=9999,
        q1 in 1i64..=999,
        p2 in -9999i64..=9999,
        q2 in 1i64..=999,
    ) {
        let v1 = rat(p1, q1);
        let v2 = rat(p2, q2);
        let c1 = CertifiedReal::from_ratio(&BigInt::from(p1), &BigInt::from(q1), 96).unwrap();
        let c2 = CertifiedReal::from_ratio(&BigInt::from(p2), &BigInt::from(q2), 96).unwrap();
        prop_assert!(contains_rational(&c1.add(&c2, 96), &(&v1 + &v2)));
        prop_assert!(contains_rational(&c1.sub(&c2, 96), &(&v1 - &v2)));
        prop_assert!(contains_rational(&c1.mul(&c2, 96), &(&v1 * &v2)));
        if p2 != 0 {
            prop_assert!(contains_rational(&c1.div(&c2, 96).unwrap(), &(&v1 / &v2)));
        }
    }

    /// Distance to the nearest integer is shift invariant, stays in [0, 1/2],
    /// and the enclosure contains the exact rational distance.
    #[test]
    fn nearest_distance_shift_invariant(
        p in -999i64..=999,
        q in 1i64..=99,
        k in -50i64..=50,
    ) {
        let x = CertifiedReal::from_ratio(&BigInt::from(p), &BigInt::from(q), 96).unwrap();
        let shifted =
            CertifiedReal::from_ratio(&BigInt::from(p + k * q), &BigInt::from(q), 96).unwrap();
        let d1 = x.nearest_int_distance().unwrap();
        let d2 = shifted.nearest_int_distance().unwrap();

        let v = rat(p, q);
        let frac = &v - BigRational::from(v.floor().to_integer());
        let exact = if frac <= rat(1, 2) { frac.clone() } else { rat(1, 1) - &frac };
        prop_assert!(contains_rational(&d1, &exact));
        prop_assert!(contains_rational(&d2, &exact));

        let half = Dyadic::new(BigInt::from(1), -1);
        for d in [&d1, &d2] {
            prop_assert!(!d.lo().is_negative());
            prop_assert!(d.hi().cmp_val(&half) != Ordering::Greater);
        }
    }

    /// The iterated-logarithm solver returns a bound above the largest
    /// fixpoint of x = p + g (ln x)^c, found independently by iteration.
    #[test]
    fn petho_bound_covers_fixpoint(
        p in 0i64..=50,
        c in 1u32..=3,
        g in 16i64..=10_000,
    ) {
        let bound = petho_deweger_solve(
            &CertifiedReal::from_i64(p),
            c,
            &CertifiedReal::from_i64(g),
            192,
        )
        .unwrap();
        // Iterating x -> p + g (ln x)^c from far above converges down to the
        // largest fixpoint, which is the largest solution of the inequality.
        let (pf, gf) = (p as f64, g as f64);
        let mut x = 1e300f64;
        for _ in 0..500 {
            let next = (pf + gf * x.ln().powi(c as i32)).max(2.0);
            if (next - x).abs() < 1e-9 * x {
                x = next;
                break;
            }
            x = next;
        }
        let covered = bound.hi().to_f64();
        prop_assert!(
            covered > x * (1.0 - 1e-9),
            "bound {covered} fails to cover fixpoint {x} for p={p}, c={c}, g={g}"
        );
    }

    /// The linear-form lower bound only weakens when a height budget or the
    /// exponent scale grows.
    #[test]
    fn linear_form_bound_weakens_monotonically(
        d in 1u32..=6,
        a_vals in proptest::collection::vec(1i64..=9, 1..=3),
        b0 in 2i64..=1000,
        which in 0usize..2,
        factor in 2i64..=5,
    ) {
        let a: Vec<CertifiedReal> = a_vals.iter().map(|&v| CertifiedReal::from_i64(v)).collect();
        let base = MatveevInstance::new(d, a.clone(), CertifiedReal::from_i64(b0)).unwrap();
        let lb_base = matveev_log_lower_bound(&base, 128).unwrap();

        let bumped = if which == 0 {
            let mut a2 = a;
            a2[0] = CertifiedReal::from_i64(a_vals[0] * factor);
            MatveevInstance::new(d, a2, CertifiedReal::from_i64(b0)).unwrap()
        } else {
            MatveevInstance::new(d, a, CertifiedReal::from_i64(b0 * factor)).unwrap()
        };
        let lb_bumped = matveev_log_lower_bound(&bumped, 128).unwrap();
        prop_assert!(
            lb_base.sub(&lb_bumped, 128).certainly_positive(),
            "growing an input did not certifiably weaken the lower bound"
        );
    }

    /// Scientific rendering with directed rounding brackets the exact value.
    #[test]
    fn directed_rendering_brackets_value(
        m in proptest::num::i64::ANY,
        e in -40i64..=40,
        sig in 1u32..=8,
    ) {
        prop_assume!(m != 0);
        let d = Dyadic::new(BigInt::from(m), e);
        let (lo_m, lo_p) = parse_decimal(&sci_dyadic(&d, sig, Dir::Down)).unwrap();
        let (hi_m, hi_p) = parse_decimal(&sci_dyadic(&d, sig, Dir::Up)).unwrap();
        prop_assert!(decimal_cmp_dyadic(&lo_m, lo_p, &d) != Ordering::Greater);
        prop_assert!(decimal_cmp_dyadic(&hi_m, hi_p, &d) != Ordering::Less);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    /// The window search agrees with a direct quadratic-time enumeration.
    #[test]
    fn search_matches_bruteforce(
        a in 2i64..=5,
        boff in 1i64..=3,
        n_max in 8usize..=40,
        m_max in 8usize..=40,
    ) {
        let b = (a + boff).min(6);
        let cf_a = family_cf(a).unwrap();
        let cf_b = family_cf(b).unwrap();
        let records = multi_rep_search(&cf_a, &cf_b, n_max, m_max);

        let qa = q_sequence(&cf_a, n_max);
        let qb = q_sequence(&cf_b, m_max);
        let mut grouped: HashMap<BigInt, Vec<(usize, usize)>> = HashMap::new();
        for n in 0..=n_max {
            for m in 0..=m_max {
                let c = qa.value(n).unwrap() - qb.value(m).unwrap();
                grouped.entry(c).or_default().push((n, m));
            }
        }
        let mut expected: Vec<(BigInt, Vec<(usize, usize)>)> = grouped
            .into_iter()
            .filter(|(_, reps)| {
                reps.iter().enumerate().any(|(i, r1)| {
                    reps[i + 1..].iter().any(|r2| r1.0 != r2.0 && r1.1 != r2.1)
                })
            })
            .collect();
        expected.sort_by(|x, y| x.0.cmp(&y.0));

        prop_assert_eq!(records.len(), expected.len());
        for (rec, (c, mut reps)) in records.into_iter().zip(expected) {
            reps.sort_unstable();
            prop_assert_eq!(rec.c, c);
            prop_assert_eq!(rec.reps, reps);
        }
    }

    /// Every reduction outcome satisfies its own contract: denominator past
    /// 6M, certified positive correction, and a threshold the reported
    /// exponent bound is the floor of.
    #[test]
    fn reduction_outcome_certifies_contract(
        di in 0usize..NONSQUARE.len(),
        j in 0i64..4,
        m0 in 5i64..=25,
    ) {
        let d = NONSQUARE[di];
        let gamma = element(1, 1, j + 1, j + 2, d);
        let kappa = element(2, j + 3, 1, j + 3, d);
        let m = BigInt::from(m0);
        let inst = ReductionInstance::new(
            gamma.as_ref_real(),
            kappa.as_ref_real(),
            QFieldElement::from_int(2 + j).as_ref_real(),
            QFieldElement::from_int(2 + (j % 2)).as_ref_real(),
            m.clone(),
        )
        .unwrap();
        let out = match dp_reduce(&inst) {
            Ok(out) => out,
            // A family where no candidate certifies is a legitimate outcome
            // of the lemma, not a contract violation.
            Err(NumError::Domain(_)) => return Ok(()),
            Err(other) => return Err(TestCaseError::fail(format!("{other}"))),
        };
        prop_assert!(out.q > &m * 6, "selected denominator is not past 6M");
        prop_assert!(out.epsilon.certainly_positive());
        let k = CertifiedReal::from_i64(out.k_bound);
        let k1 = CertifiedReal::from_i64(out.k_bound + 1);
        prop_assert!(!k.sub(&out.threshold, 64).certainly_positive());
        prop_assert!(k1.sub(&out.threshold, 64).certainly_positive());
    }
}

#[test]
fn family_recurrence_and_growth_hold_widely() {
    for a in 2..=40 {
        let cf = family_cf(a).unwrap();
        assert!(
            q_sequence(&cf, 120).recurrence_holds(),
            "trace recurrence broke for a={a}"
        );
        assert!(
            growth_envelope_check(a, 60).unwrap(),
            "growth envelope failed for a={a}"
        );
    }
}

#[test]
fn petho_solver_rejects_insufficient_growth_constant() {
    let err = petho_deweger_solve(
        &CertifiedReal::from_i64(0),
        3,
        &CertifiedReal::from_i64(10),
        128,
    );
    assert!(matches!(err, Err(NumError::Domain(_))), "g below (e^2/c)^c must be rejected");
}
