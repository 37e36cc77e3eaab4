//! Torsors under G_a^n with a recurrence, classified by a cokernel and by search.
//!
//! The last line shows why the operator keeps the top term s^n: dropping it disagrees
//! with the search.
use diffcoh::galois::{
    classify_ga_torsors, classify_ga_torsors_by_search, h1_sigma_ga, AdditiveOperatorSpec, DifferenceField,
    DEFAULT_ENUMERATION_BOUND,
};

fn main() {
    let cases = [(2, 1, 0, vec![1]), (2, 1, 0, vec![0]), (2, 2, 1, vec![1]), (3, 2, 1, vec![2, 1]), (5, 1, 0, vec![1, 1, 3])];
    for (p, m, r, lambdas) in cases {
        let ks = DifferenceField::frobenius(p, m, r).unwrap();
        let q = ks.field().order();
        let spec = AdditiveOperatorSpec::recurrence(ks, lambdas.clone()).unwrap();
        let all: Vec<u64> = (0..q).collect();
        let a = classify_ga_torsors(&spec, &all).unwrap();
        let b = classify_ga_torsors_by_search(&spec, &all, DEFAULT_ENUMERATION_BOUND).unwrap();
        println!(
            "F_{q} r={r} lambda={lambdas:?}: H^1 = {}, labels {a:?}, search agrees: {}",
            h1_sigma_ga(&spec).unwrap().group,
            a == b
        );
    }

    // Without the s^n term, n = 1, lambda = 1 over F_2 would be x -> x, whose cokernel is 0.
    let ks = DifferenceField::frobenius(2, 1, 0).unwrap();
    let literal = AdditiveOperatorSpec::matrix(ks.clone(), vec![vec![1]]).unwrap();
    let spec = AdditiveOperatorSpec::recurrence(ks, vec![1]).unwrap();
    println!(
        "F_2, lambda=1: without s^n {} class(es), with it {}, search finds {}",
        h1_sigma_ga(&literal).unwrap().group.order().unwrap(),
        h1_sigma_ga(&spec).unwrap().group.order().unwrap(),
        classify_ga_torsors_by_search(&spec, &[0, 1], DEFAULT_ENUMERATION_BOUND)
            .unwrap()
            .iter()
            .max()
            .unwrap()
            + 1
    );
}
