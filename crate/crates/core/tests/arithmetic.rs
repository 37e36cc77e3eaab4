use diffcoh::field::{gcd, FiniteField};
use diffcoh::galois::{
    as_multiplicative, classify_ga_torsors, classify_ga_torsors_by_search, h1_sigma_ga, h1_sigma_mu2,
    AdditiveOperatorSpec, DifferenceField, DEFAULT_ENUMERATION_BOUND,
};
use diffcoh::linalg::Int;
use diffcoh::quadratic::{class_group, difference_picard, QuadraticOrder, DEFAULT_DISCRIMINANT_BOUND};

/// Number of reduced positive definite forms of discriminant `disc`.
fn reduced_form_count(disc: i64) -> usize {
    let mut count = 0;
    let mut a = 1;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    count
}

#[test]
fn imaginary_class_numbers_match_reduced_forms() {
    for d in [-1i64, -2, -3, -5, -6, -10, -13, -14, -15, -17, -21, -23, -26, -29, -30, -31, -41, -47, -71, -79] {
        let o = QuadraticOrder::new(d).unwrap();
        let h = class_group(&o, DEFAULT_DISCRIMINANT_BOUND).unwrap().group.order().unwrap();
        assert_eq!(h, Int::from(reduced_form_count(o.discriminant())), "d = {d}");
    }
}

#[test]
fn picard_order_is_twice_the_fixed_classes_for_imaginary_fields() {
    // units of order 2 or 4 or 6 all have AS(units) = Z/2
    for d in [-1i64, -2, -3, -5, -6, -14, -21, -23, -30] {
        let o = QuadraticOrder::new(d).unwrap();
        let p = difference_picard(&o, DEFAULT_DISCRIMINANT_BOUND).unwrap();
        assert!(p.ses_exact, "d = {d}");
        assert_eq!(p.group.order().unwrap(), Int::from(2) * p.fixed_classes.order().unwrap());
        assert_eq!(p.elements.len(), p.group.order().unwrap().to_string().parse::<usize>().unwrap());
    }
}

#[test]
fn multiplicative_coinvariants_follow_the_gcd_formula() {
    for (p, m) in [(2u64, 1u32), (2, 3), (2, 6), (3, 1), (3, 4), (5, 3), (11, 2), (13, 1)] {
        for r in 0..m {
            let ks = DifferenceField::frobenius(p, m, r).unwrap();
            let q = p.pow(m);
            let expected = gcd(p.pow(r) - 1, q - 1);
            let co = as_multiplicative(&ks).unwrap();
            assert_eq!(co.group.order().unwrap(), Int::from(expected), "F_{q}, r = {r}");
            // oracle: count classes of a ~ a·s(c)/c by union over the orbit
            let k = ks.field();
            let mut seen = vec![false; q as usize];
            let mut classes = 0;
            for a in 1..q {
                if seen[a as usize] {
                    continue;
                }
                classes += 1;
                for c in 1..q {
                    seen[k.mul(a, k.div(ks.s(c), c).unwrap()) as usize] = true;
                }
            }
            assert_eq!(classes as u64, expected);
        }
    }
}

#[test]
fn mu2_has_four_classes_over_odd_fields() {
    for (p, m) in [(3u64, 1u32), (5, 1), (3, 3), (11, 1)] {
        for r in 0..m {
            let ks = DifferenceField::frobenius(p, m, r).unwrap();
            let rep = h1_sigma_mu2(&ks, DEFAULT_ENUMERATION_BOUND).unwrap();
            assert_eq!(rep.class_count(), 4);
            assert_eq!(rep.pairs.len() as u64, 2 * (p.pow(m) - 1));
        }
    }
}

#[test]
fn additive_classes_agree_with_search() {
    let cases: [(u64, u32, u32, Vec<u64>); 5] = [
        (2, 3, 1, vec![1]),
        (3, 2, 1, vec![1, 0]),
        (2, 4, 2, vec![0, 1]),
        (5, 2, 0, vec![4]),
        (7, 1, 0, vec![1, 6]),
    ];
    for (p, m, r, lambdas) in cases {
        let ks = DifferenceField::frobenius(p, m, r).unwrap();
        let q = ks.field().order();
        let spec = AdditiveOperatorSpec::recurrence(ks, lambdas).unwrap();
        let all: Vec<u64> = (0..q).collect();
        let a = classify_ga_torsors(&spec, &all).unwrap();
        let b = classify_ga_torsors_by_search(&spec, &all, DEFAULT_ENUMERATION_BOUND).unwrap();
        assert_eq!(a, b);
        let distinct = a.iter().max().unwrap() + 1;
        assert_eq!(h1_sigma_ga(&spec).unwrap().group.order().unwrap(), Int::from(distinct));
    }
}

#[test]
fn generator_is_primitive() {
    for (p, m) in [(2u64, 8u32), (3, 5), (5, 4), (7, 3), (13, 2)] {
        let k = FiniteField::new(p, m).unwrap();
        let g = k.generator();
        assert_eq!(k.multiplicative_order(g), k.order() - 1);
    }
}
