//! Smith normal form and the cokernel it describes.
use diffcoh::linalg::{cokernel, smith_normal_form, IntMatrix};

fn main() {
    let a = IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let f = smith_normal_form(&a);
    println!("A = {a:?}");
    println!("S = {:?}", f.s);
    println!("invariant factors: {:?}", f.invariant_factors());
    assert_eq!(f.u.mul(&a).mul(&f.v), f.s);
    println!("coker A = {}", cokernel(&a).group);
}
