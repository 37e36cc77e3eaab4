//! Difference cohomology of the circle with a self-map is the cohomology of its mapping torus.
use diffcoh::linalg::FgAbGroup;
use diffcoh::sigma::SigmaModule;
use diffcoh::simplicial::{circle_degree_map, difference_cohomology, mainss_report, SelfMap, SimplicialComplex};

fn show(groups: &[FgAbGroup]) -> String {
    groups.iter().map(|g| g.notation()).collect::<Vec<_>>().join(", ")
}

fn main() {
    let circle = SimplicialComplex::polygon(3);
    let z = SigmaModule::trivial(&FgAbGroup::free(1));
    for (name, map) in [
        ("identity (torus)", SelfMap::identity(&circle)),
        ("degree -1 (Klein bottle)", circle_degree_map(3, -1)),
        ("degree 2", circle_degree_map(3, 2)),
        ("degree 3", circle_degree_map(3, 3)),
    ] {
        let h = difference_cohomology(&circle, &map, &z).unwrap();
        println!("{name:26} H*_s = ({})", show(&h));
        for s in mainss_report(&circle, &map, &z).unwrap() {
            println!(
                "    degree {}: 0 -> {} -> {} -> {} -> 0 exact={}",
                s.degree, s.left, s.middle, s.right, s.exact
            );
        }
    }

    let torus = SimplicialComplex::torus();
    let shift: Vec<usize> = (0..9).map(|v| 3 * ((v / 3 + 1) % 3) + v % 3).collect();
    let h = difference_cohomology(&torus, &SelfMap::VertexMap(shift), &z).unwrap();
    println!("torus with a translation: ({})", show(&h));
}
