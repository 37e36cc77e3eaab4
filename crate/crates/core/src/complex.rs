//! Bounded cochain complexes of finitely generated abelian groups, chain maps,
//! two-row bicomplexes and the short exact sequences they produce.
//!
//! Complexes live in degrees `0..len`; every other level is zero.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    coker_subquotient, image_equals_kernel, kernel_subquotient, DirectSum, FgAbGroup, GroupHom,
    Int, IntMatrix, Subquotient,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    levels: Vec<FgAbGroup>,
    diffs: Vec<GroupHom>,
}

impl CochainComplex {
    /// `diffs[n]` maps `levels[n]` to `levels[n + 1]`; the last level maps to zero.
    pub fn new(levels: Vec<FgAbGroup>, diffs: Vec<GroupHom>) -> Result<Self> {
        if diffs.len() + 1 != levels.len() && !(levels.is_empty() && diffs.is_empty()) {
            return Err(Error::invalid(format!(
                "{} levels need {} differentials, got {}",
                levels.len(),
                levels.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (n, d) in diffs.iter().enumerate() {
            if d.source() != &levels[n] || d.target() != &levels[n + 1] {
                return Err(Error::invalid(format!(
                    "differential {n} has the wrong source or target"
                )));
            }
        }
        for (n, w) in diffs.windows(2).enumerate() {
            if !w[1].compose(&w[0]).is_zero() {
                return Err(Error::NotAComplex(format!(
                    "d{} ∘ d{} is nonzero",
                    n + 1,
                    n
                )));
            }
        }
        Ok(CochainComplex { levels, diffs })
    }

    /// Builds the complex from raw matrices, validating each differential.
    pub fn from_matrices(levels: Vec<FgAbGroup>, matrices: Vec<IntMatrix>) -> Result<Self> {
        if matrices.len() + 1 != levels.len() {
            return Err(Error::invalid("need one matrix between consecutive levels"));
        }
        let diffs = matrices
            .into_iter()
            .enumerate()
            .map(|(n, m)| GroupHom::new(levels[n].clone(), levels[n + 1].clone(), m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(levels, diffs)
    }

    /// A single group in degree 0.
    pub fn concentrated(g: &FgAbGroup) -> Self {
        CochainComplex {
            levels: vec![g.clone()],
            diffs: Vec::new(),
        }
    }

    /// Number of (possibly trivial) listed levels.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, n: usize) -> FgAbGroup {
        self.levels
            .get(n)
            .cloned()
            .unwrap_or_else(FgAbGroup::trivial)
    }

    pub fn levels(&self) -> &[FgAbGroup] {
        &self.levels
    }

    /// `dⁿ : Cⁿ → Cⁿ⁺¹`, zero outside the listed range.
    pub fn differential(&self, n: usize) -> GroupHom {
        self.diffs
            .get(n)
            .cloned()
            .unwrap_or_else(|| GroupHom::zero(&self.level(n), &self.level(n + 1)))
    }

    /// Same complex padded with trivial levels up to length `len`.
    pub fn padded(&self, len: usize) -> Self {
        if len <= self.len() {
            return self.clone();
        }
        let levels: Vec<FgAbGroup> = (0..len).map(|n| self.level(n)).collect();
        let diffs = (0..len - 1).map(|n| self.differential(n)).collect();
        CochainComplex { levels, diffs }
    }

    /// Keeps degrees `0..len`.
    pub fn truncated(&self, len: usize) -> Self {
        if len >= self.len() {
            return self.clone();
        }
        CochainComplex {
            levels: self.levels[..len].to_vec(),
            diffs: self.diffs[..len.saturating_sub(1)].to_vec(),
        }
    }

    /// Whether `x` (coordinates in Cⁿ) is a cocycle.
    pub fn is_cocycle(&self, n: usize, x: &[Int]) -> bool {
        self.differential(n)
            .apply_coords(x)
            .iter()
            .all(Zero::is_zero)
    }

    /// `Hⁿ` with representative and classification witnesses.
    pub fn cohomology_at(&self, n: usize) -> Cohomology {
        let ambient = self.level(n);
        let cocycles = self.differential(n).kernel_generators();
        let relations = ambient.relation_columns();
        let boundaries = match n {
            0 => relations,
            _ => self.differential(n - 1).matrix().hstack(&relations),
        };
        let sq = Subquotient::new(&ambient, &cocycles, &boundaries)
            .expect("boundaries are cocycles in a complex");
        Cohomology { degree: n, sq }
    }

    /// `Hⁿ` for every listed degree.
    pub fn cohomology(&self) -> Vec<Cohomology> {
        (0..self.len()).map(|n| self.cohomology_at(n)).collect()
    }

    /// Cohomology groups only.
    pub fn cohomology_groups(&self) -> Vec<FgAbGroup> {
        self.cohomology().into_iter().map(|h| h.sq.group).collect()
    }
}

/// One cohomology group `Hⁿ = Zⁿ / Bⁿ` of a complex.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: usize,
    sq: Subquotient,
}

impl Cohomology {
    pub fn group(&self) -> &FgAbGroup {
        &self.sq.group
    }

    /// A cocycle representing the class with canonical coordinates `c`.
    pub fn represent(&self, c: &[Int]) -> Vec<Int> {
        self.sq.represent(c)
    }

    /// Class of a cochain, or `None` when it is not a cocycle.
    pub fn classify(&self, x: &[Int]) -> Option<Vec<Int>> {
        self.sq.classify(x)
    }

    fn generator_reps(&self) -> Vec<Vec<Int>> {
        (0..self.group().ngens())
            .map(|i| self.represent(&unit(self.group().ngens(), i)))
            .collect()
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Int> {
    let mut e = vec![Int::zero(); n];
    e[i] = Int::one();
    e
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: CochainComplex,
    target: CochainComplex,
    components: Vec<GroupHom>,
}

impl ChainMap {
    /// `components[n] : sourceⁿ → targetⁿ`; missing degrees are zero maps.
    pub fn new(
        source: CochainComplex,
        target: CochainComplex,
        components: Vec<GroupHom>,
    ) -> Result<Self> {
        let len = source.len().max(target.len());
        if components.len() > len {
            return Err(Error::invalid("more chain map components than levels"));
        }
        for (n, f) in components.iter().enumerate() {
            if f.source() != &source.level(n) || f.target() != &target.level(n) {
                return Err(Error::invalid(format!(
                    "component {n} has the wrong source or target"
                )));
            }
        }
        let map = ChainMap {
            source,
            target,
            components,
        };
        for n in 0..len {
            let lhs = map.target.differential(n).compose(&map.component(n));
            let rhs = map.component(n + 1).compose(&map.source.differential(n));
            if lhs != rhs {
                return Err(Error::NotAComplex(format!(
                    "chain map does not commute with d in degree {n}"
                )));
            }
        }
        Ok(map)
    }

    pub fn from_matrices(
        source: CochainComplex,
        target: CochainComplex,
        matrices: Vec<IntMatrix>,
    ) -> Result<Self> {
        let comps = matrices
            .into_iter()
            .enumerate()
            .map(|(n, m)| GroupHom::new(source.level(n), target.level(n), m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, comps)
    }

    pub fn identity(c: &CochainComplex) -> Self {
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            components: c.levels.iter().map(GroupHom::identity).collect(),
        }
    }

    pub fn zero(source: &CochainComplex, target: &CochainComplex) -> Self {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            components: Vec::new(),
        }
    }

    pub fn source(&self) -> &CochainComplex {
        &self.source
    }

    pub fn target(&self) -> &CochainComplex {
        &self.target
    }

    pub fn component(&self, n: usize) -> GroupHom {
        self.components
            .get(n)
            .cloned()
            .unwrap_or_else(|| GroupHom::zero(&self.source.level(n), &self.target.level(n)))
    }

    fn combine(&self, other: &ChainMap, f: impl Fn(&GroupHom, &GroupHom) -> GroupHom) -> ChainMap {
        assert!(self.source == other.source && self.target == other.target);
        let len = self.source.len().max(self.target.len());
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components: (0..len)
                .map(|n| f(&self.component(n), &other.component(n)))
                .collect(),
        }
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        self.combine(other, GroupHom::add)
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.combine(other, GroupHom::sub)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> ChainMap {
        assert_eq!(first.target, self.source);
        let len = first.source.len().max(self.target.len());
        ChainMap {
            source: first.source.clone(),
            target: self.target.clone(),
            components: (0..len)
                .map(|n| self.component(n).compose(&first.component(n)))
                .collect(),
        }
    }

    /// Maps induced on cohomology in degrees `0..len`.
    pub fn induced_on_cohomology(&self) -> Vec<GroupHom> {
        let len = self.source.len().max(self.target.len());
        (0..len)
            .map(|n| {
                induced_between(
                    &self.source.cohomology_at(n),
                    &self.target.cohomology_at(n),
                    &self.component(n),
                )
            })
            .collect()
    }
}

fn induced_between(src: &Cohomology, tgt: &Cohomology, f: &GroupHom) -> GroupHom {
    let cols: Vec<Vec<Int>> = src
        .generator_reps()
        .iter()
        .map(|x| {
            tgt.classify(&f.apply_coords(x))
                .expect("a chain map sends cocycles to cocycles")
        })
        .collect();
    GroupHom::new(
        src.group().clone(),
        tgt.group().clone(),
        IntMatrix::from_columns(tgt.group().ngens(), &cols),
    )
    .expect("maps induced by chain maps are well defined")
}

/// Two rows joined by a vertical chain map `row0 → row1`.
#[derive(Clone, Debug)]
pub struct TwoRowBicomplex {
    vertical: ChainMap,
}

/// Sign attached to the vertical map in the total differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignConvention {
    /// `(−1)ⁿ` on the degree-n vertical component.
    Standard,
    /// `(−1)ⁿ⁺¹`.
    Flipped,
}

impl TwoRowBicomplex {
    pub fn new(vertical: ChainMap) -> Self {
        TwoRowBicomplex { vertical }
    }

    pub fn row0(&self) -> &CochainComplex {
        self.vertical.source()
    }

    pub fn row1(&self) -> &CochainComplex {
        self.vertical.target()
    }

    pub fn vertical(&self) -> &ChainMap {
        &self.vertical
    }

    /// Number of total degrees that can be nonzero.
    pub fn total_len(&self) -> usize {
        self.row0().len().max(self.row1().len() + 1)
    }

    pub fn total_complex(&self) -> TotalComplex {
        self.total_complex_with(SignConvention::Standard)
    }

    /// `Totⁿ = row1ⁿ⁻¹ ⊕ row0ⁿ` with `∂(y, x) = (∂y ± v(x), ∂x)`.
    pub fn total_complex_with(&self, sign: SignConvention) -> TotalComplex {
        let len = self.total_len();
        let row0 = self.row0();
        let row1 = self.row1();
        let sums: Vec<DirectSum> = (0..len)
            .map(|n| {
                let y = if n == 0 {
                    FgAbGroup::trivial()
                } else {
                    row1.level(n - 1)
                };
                FgAbGroup::direct_sum(&[y, row0.level(n)])
            })
            .collect();
        let mut diffs = Vec::with_capacity(len.saturating_sub(1));
        for n in 0..len.saturating_sub(1) {
            let (src, tgt) = (&sums[n], &sums[n + 1]);
            let positive = (n % 2 == 0) == (sign == SignConvention::Standard);
            let v = self.vertical.component(n);
            let v = if positive { v } else { v.neg() };
            let dy = if n == 0 {
                GroupHom::zero(&FgAbGroup::trivial(), &row1.level(0))
            } else {
                row1.differential(n - 1)
            };
            let d = tgt.injections[0]
                .compose(&dy)
                .compose(&src.projections[0])
                .add(&tgt.injections[0].compose(&v).compose(&src.projections[1]))
                .add(
                    &tgt.injections[1]
                        .compose(&row0.differential(n))
                        .compose(&src.projections[1]),
                );
            diffs.push(d);
        }
        let levels = sums.iter().map(|s| s.group.clone()).collect();
        let complex =
            CochainComplex::new(levels, diffs).expect("total differential squares to zero");
        TotalComplex { complex, sums }
    }

    /// Total cohomology in degrees `0..total_len`.
    pub fn total_cohomology(&self) -> Vec<FgAbGroup> {
        self.total_complex().complex.cohomology_groups()
    }

    /// Total cohomology in degrees `0..len` only.
    pub fn total_cohomology_upto(&self, len: usize) -> Vec<FgAbGroup> {
        let total = self.total_complex();
        (0..len.min(total.complex.len()))
            .map(|n| total.complex.cohomology_at(n).group().clone())
            .collect()
    }

    /// The exact sequences `0 → coker Hⁿ⁻¹(v) → Hⁿ_tot → ker Hⁿ(v) → 0` for every degree.
    pub fn extract_ses(&self) -> Result<Vec<SesReport>> {
        let len = self.total_len();
        let total = self.total_complex();
        let induced = self.vertical.padded_induced(len);
        let h1: Vec<Cohomology> = (0..len).map(|n| self.row1().cohomology_at(n)).collect();
        let h0: Vec<Cohomology> = (0..len).map(|n| self.row0().cohomology_at(n)).collect();
        (0..len)
            .map(|n| {
                let middle = total.complex.cohomology_at(n);
                let (left_sq, left_ambient) = if n == 0 {
                    let trivial = GroupHom::zero(&FgAbGroup::trivial(), &FgAbGroup::trivial());
                    (coker_subquotient(&trivial), None)
                } else {
                    (coker_subquotient(&induced[n - 1]), Some(&h1[n - 1]))
                };
                let right_sq = kernel_subquotient(&induced[n]);

                let inject_cols: Vec<Vec<Int>> = (0..left_sq.group.ngens())
                    .map(|i| {
                        let c = left_sq.represent(&unit(left_sq.group.ngens(), i));
                        let h = left_ambient.expect("degree 0 has no left term");
                        let y = h.represent(&c);
                        let zero_x = vec![Int::zero(); self.row0().level(n).ngens()];
                        let z = total.join(n, &y, &zero_x);
                        middle.classify(&z).ok_or_else(|| {
                            Error::NotAComplex(format!(
                                "(y, 0) is not a total cocycle in degree {n}"
                            ))
                        })
                    })
                    .collect::<Result<_>>()?;
                let inject = GroupHom::new(
                    left_sq.group.clone(),
                    middle.group().clone(),
                    IntMatrix::from_columns(middle.group().ngens(), &inject_cols),
                )?;

                let surject_cols: Vec<Vec<Int>> = (0..middle.group().ngens())
                    .map(|i| {
                        let z = middle.represent(&unit(middle.group().ngens(), i));
                        let (_, x) = total.split(n, &z);
                        let c = h0[n].classify(&x).ok_or_else(|| {
                            Error::NotAComplex(format!("row-0 part is not a cocycle in degree {n}"))
                        })?;
                        right_sq.classify(&c).ok_or_else(|| {
                            Error::NotAComplex(format!(
                                "class in degree {n} is not killed by the vertical map"
                            ))
                        })
                    })
                    .collect::<Result<_>>()?;
                let surject = GroupHom::new(
                    middle.group().clone(),
                    right_sq.group.clone(),
                    IntMatrix::from_columns(right_sq.group.ngens(), &surject_cols),
                )?;
                let exact = inject.is_injective()
                    && surject.is_surjective()
                    && image_equals_kernel(&inject, &surject);
                Ok(SesReport {
                    degree: n,
                    left: left_sq.group.clone(),
                    middle: middle.group().clone(),
                    right: right_sq.group.clone(),
                    inject,
                    surject,
                    exact,
                })
            })
            .collect()
    }
}

impl ChainMap {
    fn padded_induced(&self, len: usize) -> Vec<GroupHom> {
        let padded = ChainMap {
            source: self.source.padded(len),
            target: self.target.padded(len),
            components: self.components.clone(),
        };
        padded.induced_on_cohomology()
    }
}

/// Total complex with the splitting of each level into its two rows.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub complex: CochainComplex,
    sums: Vec<DirectSum>,
}

impl TotalComplex {
    /// Canonical coordinates of `(y, x)` with `y ∈ row1ⁿ⁻¹`, `x ∈ row0ⁿ`.
    pub fn join(&self, n: usize, y: &[Int], x: &[Int]) -> Vec<Int> {
        let s = &self.sums[n];
        let a = s.injections[0].apply_coords(y);
        let b = s.injections[1].apply_coords(x);
        s.group
            .reduce(&a.iter().zip(&b).map(|(p, q)| p + q).collect::<Vec<_>>())
    }

    /// Inverse of [`TotalComplex::join`].
    pub fn split(&self, n: usize, z: &[Int]) -> (Vec<Int>, Vec<Int>) {
        let s = &self.sums[n];
        (
            s.projections[0].apply_coords(z),
            s.projections[1].apply_coords(z),
        )
    }
}

/// `0 → left → middle → right → 0` in one degree, with the maps and the exactness verdict.
#[derive(Clone, Debug)]
pub struct SesReport {
    pub degree: usize,
    pub left: FgAbGroup,
    pub middle: FgAbGroup,
    pub right: FgAbGroup,
    pub inject: GroupHom,
    pub surject: GroupHom,
    pub exact: bool,
}

impl SesReport {
    /// `|middle| = |left|·|right|`, or `None` when some term is infinite.
    pub fn orders_multiply(&self) -> Option<bool> {
        let (l, m, r) = (
            self.left.order()?,
            self.middle.order()?,
            self.right.order()?,
        );
        Some(m == l * r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    fn two_term(n: i64) -> CochainComplex {
        CochainComplex::from_matrices(vec![z(), z()], vec![IntMatrix::from_rows(&[vec![n]])])
            .unwrap()
    }

    fn triangle() -> CochainComplex {
        // Vertices 0,1,2; edges [0,1], [0,2], [1,2]; (δf)[a,b] = f(b) − f(a).
        let d0 = IntMatrix::from_rows(&[vec![-1, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]]);
        CochainComplex::from_matrices(vec![FgAbGroup::free(3), FgAbGroup::free(3)], vec![d0])
            .unwrap()
    }

    #[test]
    fn basic_cohomology() {
        assert_eq!(two_term(0).cohomology_groups(), vec![z(), z()]);
        assert_eq!(
            two_term(5).cohomology_groups(),
            vec![FgAbGroup::trivial(), FgAbGroup::cyclic(5)]
        );
        assert_eq!(triangle().cohomology_groups(), vec![z(), z()]);
    }

    #[test]
    fn non_complex_rejected() {
        let one = IntMatrix::from_rows(&[vec![1]]);
        let r = CochainComplex::from_matrices(vec![z(), z(), z()], vec![one.clone(), one]);
        assert!(matches!(r, Err(Error::NotAComplex(_))));
    }

    #[test]
    fn cone_of_scalar() {
        for (d, expect) in [
            (2, vec![FgAbGroup::trivial(), FgAbGroup::trivial()]),
            (1, vec![z(), z()]),
        ] {
            let c = CochainComplex::concentrated(&z());
            let v = ChainMap::new(c.clone(), c, vec![GroupHom::scalar(&z(), 1 - d)]).unwrap();
            assert_eq!(TwoRowBicomplex::new(v).total_cohomology(), expect);
        }
    }

    #[test]
    fn identity_cone_is_acyclic() {
        let b = TwoRowBicomplex::new(ChainMap::identity(&triangle()));
        assert!(b.total_cohomology().iter().all(FgAbGroup::is_trivial));
        for s in b.extract_ses().unwrap() {
            assert!(s.exact && s.left.is_trivial() && s.right.is_trivial());
        }
    }

    #[test]
    fn zero_vertical_splits() {
        let c = triangle();
        let b = TwoRowBicomplex::new(ChainMap::zero(&c, &c));
        let h = b.total_cohomology();
        assert_eq!(h, vec![z(), FgAbGroup::free(2), z()]);
        for s in b.extract_ses().unwrap() {
            assert!(s.exact);
        }
    }

    #[test]
    fn rotation_induces_identity() {
        let c = triangle();
        // Vertex rotation 0→1→2→0 pulled back to cochains.
        let p0 = IntMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        // Edges [0,1]→[1,2], [0,2]→[0,1] reversed ([1,0]), [1,2]→[0,2] reversed ([2,0]).
        let p1 = IntMatrix::from_rows(&[vec![0, 0, 1], vec![-1, 0, 0], vec![0, -1, 0]]);
        let rot = ChainMap::from_matrices(c.clone(), c.clone(), vec![p0, p1]).unwrap();
        for h in rot.induced_on_cohomology() {
            assert_eq!(h, GroupHom::identity(h.source()));
        }
    }

    #[test]
    fn sign_flip_gives_same_groups() {
        let c = triangle();
        let v = ChainMap::from_matrices(
            c.clone(),
            c.clone(),
            vec![
                IntMatrix::identity(3).scale(&Int::from(2)),
                IntMatrix::identity(3).scale(&Int::from(2)),
            ],
        )
        .unwrap();
        let b = TwoRowBicomplex::new(v);
        let a = b
            .total_complex_with(SignConvention::Standard)
            .complex
            .cohomology_groups();
        let f = b
            .total_complex_with(SignConvention::Flipped)
            .complex
            .cohomology_groups();
        assert_eq!(a, f);
    }
}
