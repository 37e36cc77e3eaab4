//! Class groups, units and difference Picard groups of quadratic rings.
use diffcoh::quadratic::{
    class_group, difference_picard, fundamental_unit, picex_report, QuadraticOrder, DEFAULT_DISCRIMINANT_BOUND,
};

fn main() {
    for d in [-1, -2, -3, -5, -6, -14, -23] {
        let o = QuadraticOrder::new(d).unwrap();
        let p = difference_picard(&o, DEFAULT_DISCRIMINANT_BOUND).unwrap();
        let picex = picex_report(&o).unwrap();
        println!(
            "d={d:>4}: Cl = {:8} AS(units) = {:4} Cl^s = {:8} Pic_s = {:12} exact={} picex match={}",
            p.class_group.notation(),
            p.as_units.notation(),
            p.fixed_classes.notation(),
            p.group.notation(),
            p.ses_exact,
            picex.matches
        );
        for e in &p.elements {
            println!("        ({}, {})", e.ideal.notation(&o), o.format(&e.scalar));
        }
    }
    for d in [2, 3, 10, 82, 94] {
        let o = QuadraticOrder::new(d).unwrap();
        let cl = class_group(&o, DEFAULT_DISCRIMINANT_BOUND).unwrap();
        let picex = picex_report(&o).unwrap();
        println!(
            "d={d:>4}: Cl = {:6} eps = {:20} AS(units) = {} vs units of Z {}",
            cl.group.notation(),
            o.format(&fundamental_unit(&o).unwrap()),
            picex.as_units.notation(),
            picex.base_units.notation()
        );
    }
}
