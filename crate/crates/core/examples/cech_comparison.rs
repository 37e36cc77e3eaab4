//! Star covers of a space against its simplicial model in degrees 0 and 1.
use diffcoh::cech::{cech_to_derived_check, CoverNerves};
use diffcoh::linalg::FgAbGroup;
use diffcoh::sigma::SigmaModule;
use diffcoh::simplicial::SimplicialComplex;

fn main() {
    let pentagon = SimplicialComplex::polygon(5);
    let rotation: Vec<usize> = (0..5).map(|i| (i + 1) % 5).collect();
    let reflection: Vec<usize> = (0..5).map(|i| (5 - i) % 5).collect();
    for (name, sigma) in [("rotation", rotation), ("reflection", reflection)] {
        for coeff in [
            SigmaModule::trivial(&FgAbGroup::free(1)),
            SigmaModule::scalar(&FgAbGroup::free(1), -1),
            SigmaModule::scalar(&FgAbGroup::cyclic(4), 3),
        ] {
            let r = cech_to_derived_check(&pentagon, &sigma, &coeff).unwrap();
            println!(
                "{name:10} coeff {:?}: Cech ({}, {}) derived ({}, {}) match={}",
                coeff.carrier().notation(),
                r.cech[0],
                r.cech[1],
                r.derived[0],
                r.derived[1],
                r.matches
            );
        }
    }

    // Folding a square onto an edge leaves a disconnected intersection, so the cover is rejected.
    match CoverNerves::star_cover(&SimplicialComplex::polygon(4), &[0, 1, 0, 1], 1) {
        Ok(_) => println!("unexpectedly good"),
        Err(e) => println!("fold of the square: {e}"),
    }
}
