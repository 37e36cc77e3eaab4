//! Difference mu_2-torsors over small finite fields, counted two ways.
use diffcoh::galois::{h1_sigma_mu2, DifferenceField, DEFAULT_ENUMERATION_BOUND};

fn main() {
    for (p, m) in [(3, 1), (5, 1), (7, 1), (3, 2), (13, 1), (5, 2)] {
        for r in 0..m {
            let ks = DifferenceField::frobenius(p, m, r).unwrap();
            let rep = h1_sigma_mu2(&ks, DEFAULT_ENUMERATION_BOUND).unwrap();
            println!(
                "F_{:<3} r={r}: {} pairs, {} classes, group {}, sequence {} x {}",
                p.pow(m),
                rep.pairs.len(),
                rep.class_count(),
                rep.group,
                rep.ses_left,
                rep.ses_right
            );
        }
    }
}
