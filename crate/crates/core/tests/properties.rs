use childstats::child_set::ChildSet;
use childstats::exact::{render_rational, Surd};
use childstats::gauss::normal_mixed_moment_poly;
use childstats::lagrange::{count_trees, numerator_mixed, NumeratorQuery};
use childstats::moments::{MomentLab, MomentSpec};
use childstats::oracle::{enumerate_trees, oracle_numerator, OracleLimits};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const FAMILY: [&[u32]; 5] = [&[0, 1, 2], &[0, 2], &[0, 1, 3], &[0, 2, 3], &[0, 1, 2, 3]];

fn family_set() -> impl Strategy<Value = Vec<u32>> {
    prop::sample::select(FAMILY.to_vec()).prop_map(|e| e.to_vec())
}

fn rational() -> impl Strategy<Value = BigRational> {
    (any::<i64>(), 1..i64::MAX).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn normalized(q: &BigRational) -> bool {
    q.denom().is_positive() && q.numer().gcd(q.denom()).is_one()
}

proptest! {
    #[test]
    fn rationals_stay_normalized(a in rational(), b in rational()) {
        prop_assert!(normalized(&(&a + &b)));
        prop_assert!(normalized(&(&a - &b)));
        prop_assert!(normalized(&(&a * &b)));
        if !b.is_zero() {
            prop_assert!(normalized(&(&a / &b)));
        }
    }

    #[test]
    fn decimal_renderings_have_declared_digits(a in rational(), digits in 1u32..40) {
        let text = render_rational(&a, digits);
        let frac = text.split('.').nth(1).unwrap_or("");
        prop_assert_eq!(frac.len(), digits as usize);
        let scaled: BigInt = text.replace('.', "").parse().unwrap();
        let value = BigRational::new(scaled, BigInt::from(10u32).pow(digits));
        let half_ulp = BigRational::new(1.into(), BigInt::from(10u32).pow(digits) * 2);
        prop_assert!((value - &a).abs() <= half_ulp);
    }

    #[test]
    fn surd_rendering_matches_floating_point(c in rational(), r in 2u64..10_000) {
        let s = Surd::new(c.clone(), &BigRational::from_integer(r.into()));
        let text = s.render(20);
        let approx = num_traits::ToPrimitive::to_f64(&c).unwrap() * (r as f64).sqrt();
        let got: f64 = text.parse().unwrap();
        prop_assert!((got - approx).abs() <= 1e-9 * (1.0 + approx.abs()), "{} vs {}", text, approx);
    }

    #[test]
    fn numerators_match_direct_summation(
        e in family_set(),
        n in 1u64..=10,
        i in 0usize..4,
        j in 0usize..4,
        p1 in 0u32..=3,
        p2 in 0u32..=3,
    ) {
        let s1 = e[i % e.len()];
        let s2 = e[j % e.len()];
        prop_assume!(s1 != s2);
        let set = ChildSet::new(e.iter().copied()).unwrap();
        let got = numerator_mixed(&NumeratorQuery::mixed(set.clone(), n, (s1, s2), (p1, p2))).unwrap();
        let want = oracle_numerator(&set, n, (s1, Some(s2)), (p1, p2), &OracleLimits::default()).unwrap();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn moment_invariants(e in family_set(), n in 3u64..=60, i in 0usize..4, j in 0usize..4) {
        let (s1, s2) = (e[i % e.len()], e[j % e.len()]);
        prop_assume!(s1 != s2);
        let set = ChildSet::new(e.iter().copied()).unwrap();
        prop_assume!(!count_trees(&set, n).is_zero());
        let lab = MomentLab::new(&MomentSpec::new(set, n, (s1, s2), (2, 2)).unwrap()).unwrap();
        prop_assert!(lab.central(1, 0).unwrap().is_zero());
        prop_assert!(lab.central(0, 1).unwrap().is_zero());
        let mu = lab.raw(1, 0).unwrap();
        prop_assert_eq!(lab.central(2, 0).unwrap(), lab.raw(2, 0).unwrap() - &mu * &mu);
        if !lab.is_degenerate().unwrap() {
            let one = Some(BigRational::one());
            prop_assert_eq!(lab.scaled(2, 0).unwrap().exact, one.clone());
            prop_assert_eq!(lab.scaled(0, 2).unwrap().exact, one);
            prop_assert!(lab.correlation().unwrap().square() <= BigRational::one());
        }
    }

    #[test]
    fn normal_moment_structure(p1 in 0u32..=8, p2 in 0u32..=8) {
        let m = normal_mixed_moment_poly(p1, p2);
        let swapped = normal_mixed_moment_poly(p2, p1);
        prop_assert_eq!(m.coeffs(), swapped.coeffs());
        if (p1 + p2) % 2 == 1 {
            prop_assert!(m.is_zero());
        } else {
            // rho = 1 collapses to the univariate moment (p1+p2-1)!!
            let double_fact: BigInt = (1..p1 + p2).step_by(2).map(BigInt::from).product();
            prop_assert_eq!(m.at_one(), double_fact);
            let indep = normal_mixed_moment_poly(p1, 0).coeff(0) * normal_mixed_moment_poly(0, p2).coeff(0);
            prop_assert_eq!(m.coeff(0), indep);
        }
    }
}

#[test]
fn enumeration_counts_match_lagrange() {
    for e in FAMILY {
        let set = ChildSet::new(e.iter().copied()).unwrap();
        for n in 1..=12 {
            let listed = enumerate_trees(&set, n).unwrap();
            assert_eq!(BigInt::from(listed.len()), count_trees(&set, n), "S={set} n={n}");
            assert!(listed.iter().all(|t| t.is_valid()));
        }
    }
}
