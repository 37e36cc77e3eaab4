use std::collections::HashSet;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use diffcoh::field::FiniteField;
use diffcoh::galois::{as_multiplicative, DifferenceField};
use diffcoh::linalg::{cokernel, image, kernel, smith_normal_form, FgAbGroup, GroupHom, Int, IntMatrix};
use diffcoh::quadratic::QuadraticOrder;
use diffcoh::suite::{check_random_bicomplexes, check_random_galois};

fn matrix(max_dim: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-range..=range, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

fn det(rows: &[Vec<Int>]) -> Int {
    // cofactor expansion, fine for the sizes used here
    if rows.len() == 1 {
        return rows[0][0].clone();
    }
    let mut acc = Int::zero();
    for j in 0..rows.len() {
        let minor: Vec<Vec<Int>> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &rows[0][j] * det(&minor);
        if j % 2 == 0 { acc += term } else { acc -= term }
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// gcd of all k×k minors, the classical determinantal-divisor oracle.
fn determinantal_divisor(a: &IntMatrix, k: usize) -> Int {
    let rows = a.to_rows();
    let mut g = Int::zero();
    for rs in subsets(a.rows(), k) {
        for cs in subsets(a.cols(), k) {
            let m: Vec<Vec<Int>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect()).collect();
            g = g.gcd(&det(&m));
        }
    }
    g
}

fn finite_group() -> impl Strategy<Value = FgAbGroup> {
    prop::collection::vec(1i64..=6, 1..=3).prop_map(|ms| {
        FgAbGroup::from_moduli(&ms.into_iter().map(Int::from).collect::<Vec<_>>())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_matches_determinantal_divisors(a in matrix(4, 9)) {
        let f = smith_normal_form(&a);
        prop_assert_eq!(f.u.mul(&a).mul(&f.v), f.s.clone());
        prop_assert!(f.u.is_unimodular() && f.v.is_unimodular());
        let d = f.invariant_factors();
        for w in d.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        let mut prod = Int::from(1);
        for k in 1..=a.rows().min(a.cols()) {
            let dk = determinantal_divisor(&a, k);
            if k <= d.len() {
                prod *= &d[k - 1];
                prop_assert_eq!(prod.abs(), dk);
            } else {
                prop_assert!(dk.is_zero());
            }
        }
    }

    #[test]
    fn cokernel_is_invariant_under_unimodular_change(a in matrix(3, 6), b in matrix(3, 3)) {
        let shear = |n: usize, c: &Int| {
            let mut e = IntMatrix::identity(n).to_rows();
            if n > 1 {
                e[0][n - 1] = c.clone();
            }
            IntMatrix::from_entries(n, n, e.concat()).unwrap()
        };
        let c = b.row(0)[0].clone();
        let left = shear(a.rows(), &c);
        let right = shear(a.cols(), &(c + 1)).transpose();
        prop_assert_eq!(cokernel(&a).group, cokernel(&left.mul(&a).mul(&right)).group);
    }

    #[test]
    fn square_cokernel_order_is_determinant(a in matrix(3, 7)) {
        prop_assume!(a.rows() == a.cols());
        let d = a.determinant();
        let g = cokernel(&a).group;
        if d.is_zero() {
            prop_assert!(!g.is_finite());
        } else {
            prop_assert_eq!(g.order().unwrap(), d.abs());
        }
    }

    #[test]
    fn kernel_and_image_orders_multiply(src in finite_group(), tgt in finite_group(), entries in prop::collection::vec(-5i64..=5, 9)) {
        let rows: Vec<Vec<i64>> = (0..tgt.ngens()).map(|i| (0..src.ngens()).map(|j| entries[3 * i + j]).collect()).collect();
        let m = IntMatrix::from_rows(&rows);
        let Ok(h) = GroupHom::new(src.clone(), tgt.clone(), m) else { return Ok(()) };
        let (k, _) = kernel(&h);
        let (im, _) = image(&h);
        prop_assert_eq!(k.order().unwrap() * im.order().unwrap(), src.order().unwrap());
        // brute-force oracle for the image size
        let seen: HashSet<Vec<Int>> = src.enumerate().unwrap().map(|x| h.apply(&x).coords().to_vec()).collect();
        prop_assert_eq!(Int::from(seen.len()), im.order().unwrap());
    }

    #[test]
    fn random_bicomplexes_give_exact_sequences(seed in any::<u64>()) {
        let (_, checked, failures) = check_random_bicomplexes(seed, 3).unwrap();
        prop_assert!(checked > 0);
        prop_assert!(failures.is_empty(), "{:?}", failures);
    }

    #[test]
    fn random_galois_sequences_are_exact(seed in any::<u64>()) {
        let (_, bad) = check_random_galois(seed, 2).unwrap();
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }

    #[test]
    fn ideals_times_inverse_is_the_ring(d in prop::sample::select(vec![-1i64, -2, -5, -6, -14, -23, -47, 2, 3, 10, 15])) {
        let o = QuadraticOrder::new(d).unwrap();
        for i in o.prime_ideals_up_to(30) {
            let prod = o.ideal_mul(&i, &o.ideal_inv(&i));
            prop_assert_eq!(prod, o.unit_ideal());
        }
    }

    #[test]
    fn field_arithmetic_is_consistent(pm in prop::sample::select(vec![(2u64, 3u32), (3, 2), (5, 2), (7, 1), (2, 5)]), a in any::<u64>(), b in any::<u64>()) {
        let k = FiniteField::new(pm.0, pm.1).unwrap();
        let (a, b) = (a % k.order(), b % k.order());
        prop_assert_eq!(k.mul(a, b), k.mul(b, a));
        if a != 0 {
            prop_assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
            prop_assert_eq!(k.exp(k.dlog(a).unwrap()), a);
        }
        prop_assert_eq!(k.pow(a, k.order()), a);
        prop_assert_eq!(k.frobenius(k.add(a, b), 1), k.add(k.frobenius(a, 1), k.frobenius(b, 1)));
    }

    #[test]
    fn multiplicative_coinvariants_classify_consistently(pm in prop::sample::select(vec![(3u64, 2u32), (5, 2), (2, 4), (7, 2)]), r in 0u32..4, a in any::<u64>(), c in any::<u64>()) {
        let ks = DifferenceField::frobenius(pm.0, pm.1, r % pm.1).unwrap();
        let k = ks.field().clone();
        let co = as_multiplicative(&ks).unwrap();
        let a = 1 + a % (k.order() - 1);
        let c = 1 + c % (k.order() - 1);
        // a and a·s(c)/c lie in the same class
        let twisted = k.mul(a, k.div(ks.s(c), c).unwrap());
        prop_assert_eq!(co.class_of(&k, a), co.class_of(&k, twisted));
    }
}
