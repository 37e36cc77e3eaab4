//! Invertible difference modules over F_q: the gcd formula, the multiplicative
//! Artin-Schreier group and the exhaustive module search side by side.
use diffcoh::field::gcd;
use diffcoh::galois::{as_multiplicative, rank_one_module_classes, DifferenceField, DEFAULT_ENUMERATION_BOUND};

fn main() {
    for (p, m) in [(2, 4), (3, 3), (5, 2), (7, 2), (5, 4)] {
        for r in 0..m {
            let ks = DifferenceField::frobenius(p, m, r).unwrap();
            let k = ks.field();
            let co = as_multiplicative(&ks).unwrap();
            let search = rank_one_module_classes(&ks, DEFAULT_ENUMERATION_BOUND).unwrap();
            let reps: Vec<String> = co.representatives.iter().take(4).map(|&a| k.format(a)).collect();
            println!(
                "F_{:<3} r={r}: Pic = {:6} gcd = {:3} search = {:3} reps {reps:?}",
                k.order(),
                co.group.notation(),
                gcd(p.pow(r) - 1, k.order() - 1),
                search.len()
            );
        }
    }
}
