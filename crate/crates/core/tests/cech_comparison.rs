use diffcoh::cech::{cech_to_derived_check, CoverNerves};
use diffcoh::linalg::FgAbGroup;
use diffcoh::sigma::SigmaModule;
use diffcoh::simplicial::SimplicialComplex;

fn coefficients() -> Vec<SigmaModule> {
    vec![
        SigmaModule::trivial(&FgAbGroup::free(1)),
        SigmaModule::scalar(&FgAbGroup::free(1), -1),
        SigmaModule::scalar(&FgAbGroup::free(1), 3),
        SigmaModule::scalar(&FgAbGroup::cyclic(3), 2),
        SigmaModule::scalar(&FgAbGroup::cyclic(4), 3),
    ]
}

fn spaces() -> Vec<(SimplicialComplex, Vec<Vec<usize>>)> {
    let n = 5;
    let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    let torus_shift: Vec<usize> = (0..9).map(|v| 3 * ((v / 3 + 1) % 3) + v % 3).collect();
    vec![
        (SimplicialComplex::point(), vec![vec![0]]),
        (
            SimplicialComplex::polygon(n),
            vec![(0..n).collect(), rot, refl, vec![0; n]],
        ),
        (
            SimplicialComplex::polygon(4),
            vec![vec![0, 1, 2, 3], vec![2, 3, 0, 1]],
        ),
        (
            SimplicialComplex::simplex(2),
            vec![vec![1, 2, 0], vec![0, 0, 1]],
        ),
        (
            SimplicialComplex::torus(),
            vec![(0..9).collect(), torus_shift],
        ),
    ]
}

#[test]
fn low_degrees_agree_on_star_covers() {
    let mut count = 0;
    for (x, maps) in spaces() {
        for sigma in maps {
            for coeff in coefficients() {
                let r = cech_to_derived_check(&x, &sigma, &coeff).unwrap();
                assert!(
                    r.matches,
                    "{:?} σ={sigma:?} coeff={coeff:?}: {r:?}",
                    x.labels()
                );
                count += 1;
            }
        }
    }
    assert!(count >= 20);
}

#[test]
fn ses_exact_on_cech_bicomplexes() {
    let x = SimplicialComplex::polygon(4);
    let nerves = CoverNerves::star_cover(&x, &[1, 2, 3, 0], 1).unwrap();
    for coeff in coefficients() {
        for s in nerves.presheaf_data(&coeff).unwrap().ses().unwrap() {
            assert!(s.exact);
            if let Some(ok) = s.orders_multiply() {
                assert!(ok);
            }
        }
    }
}

#[test]
fn folding_the_square_is_not_a_good_cover() {
    // st(0) ∩ σ⁻¹(st(0) ∩ st(1)) is the union of two disjoint open edges.
    let r = CoverNerves::star_cover(&SimplicialComplex::polygon(4), &[0, 1, 0, 1], 1);
    assert!(r.is_err());
}
