//! Point difference cohomology of a few modules, and Artin-Schreier orbits of S3.
use diffcoh::linalg::{FgAbGroup, GroupHom, IntMatrix};
use diffcoh::sigma::{FiniteSigmaGroup, SigmaModule};

fn main() {
    let z = FgAbGroup::free(1);
    let modules = [
        ("(Z, id)", SigmaModule::trivial(&z)),
        ("(Z, -1)", SigmaModule::scalar(&z, -1)),
        ("(Z, 3)", SigmaModule::scalar(&z, 3)),
        ("(Z/12, 5)", SigmaModule::scalar(&FgAbGroup::cyclic(12), 5)),
        (
            "(Z^2, swap)",
            SigmaModule::new(
                GroupHom::new(FgAbGroup::free(2), FgAbGroup::free(2), IntMatrix::from_rows(&[vec![0i64, 1], vec![1, 0]]))
                    .unwrap(),
            )
            .unwrap(),
        ),
    ];
    for (name, m) in modules {
        let h = m.point_difference_cohomology();
        println!("{name:12} H^0 = {:8} H^1 = {}", h[0].notation(), h[1].notation());
    }

    let s3 = FiniteSigmaGroup::symmetric(3).unwrap();
    let orbits = s3.as_orbits();
    println!("S3 with the identity: {} twisted conjugacy classes", orbits.len());
    for o in orbits {
        let labels: Vec<_> = o.iter().map(|&i| s3.labels()[i].as_str()).collect();
        println!("  {labels:?}");
    }
}
