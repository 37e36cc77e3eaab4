//! Every class of G_m(F_q) modulo (p-1)-th powers dies in a small extension.
use diffcoh::galois::{as_multiplicative, linearly_closed_witness, DifferenceField};

fn main() {
    for (p, m) in [(3, 2), (5, 1), (5, 2), (3, 4)] {
        let ks = DifferenceField::frobenius(p, m, 1).unwrap();
        let k = ks.field();
        let co = as_multiplicative(&ks).unwrap();
        println!("F_{} with Frobenius: coinvariants {}", k.order(), co.group);
        for &rep in &co.representatives {
            let w = linearly_closed_witness(&ks, rep).unwrap();
            println!(
                "  {:>12}: x^{} = rep solved by {} in F_{}",
                k.format(rep),
                p - 1,
                w.extension.format(w.solution),
                w.extension.order()
            );
        }
    }
}
