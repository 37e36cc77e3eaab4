//! Difference Galois cohomology of cyclic extensions of finite fields, with the exact sequences.
use diffcoh::galois::{difference_galois_cohomology, CyclicGaloisData, DifferenceField};

fn main() {
    let mu2 = CyclicGaloisData::mu2_model();
    for n in 0..3 {
        let h = difference_galois_cohomology(&mu2, n).unwrap();
        println!("mu_2 model, degree {n}: {} (exact={})", h.group, h.ses.exact);
    }
    for (p, m, r, level) in [(2, 1, 0, 3), (3, 1, 0, 2), (2, 2, 1, 2), (5, 1, 0, 2)] {
        let ks = DifferenceField::frobenius(p, m, r).unwrap();
        let data = CyclicGaloisData::multiplicative(&ks, level).unwrap();
        let groups: Vec<String> = (0..3)
            .map(|n| difference_galois_cohomology(&data, n).unwrap().group.notation())
            .collect();
        println!(
            "F_{}^{level}* over F_{}, r={r}: M = {}, H_s = {groups:?}",
            ks.field().order(),
            ks.field().order(),
            data.module()
        );
    }
}
