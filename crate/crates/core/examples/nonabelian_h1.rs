//! Nonabelian difference H^1 of a cover, and its match with the abelian computation.
use diffcoh::cech::{abelian_class_matching, CoverNerves, DEFAULT_RELATION_BOUND};
use diffcoh::linalg::FgAbGroup;
use diffcoh::sigma::{FiniteSigmaGroup, SigmaModule};
use diffcoh::simplicial::SimplicialComplex;

fn main() {
    let triangle = SimplicialComplex::polygon(3);
    let nerves = CoverNerves::star_cover(&triangle, &[1, 2, 0], 1).unwrap();

    let s3 = FiniteSigmaGroup::symmetric(3).unwrap();
    let h = nerves.nonabelian_h1(&s3, DEFAULT_RELATION_BOUND).unwrap();
    println!("S3 coefficients on the rotated triangle: {} classes", h.class_count());

    for coeff in [
        SigmaModule::trivial(&FgAbGroup::cyclic(2)),
        SigmaModule::scalar(&FgAbGroup::cyclic(5), 2),
        SigmaModule::scalar(&FgAbGroup::cyclic(8), 3),
    ] {
        let m = abelian_class_matching(&nerves, &coeff, DEFAULT_RELATION_BOUND).unwrap();
        println!(
            "{} with endo {:?}: {} classes, abelian H^1 = {}, bijective={}",
            coeff.carrier(),
            coeff.endo().matrix(),
            m.class_count,
            m.h1,
            m.bijective
        );
    }
}
