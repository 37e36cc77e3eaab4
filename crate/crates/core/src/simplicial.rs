//! Finite simplicial complexes, ordered cochains with constant coefficients
//! and the two-row model of constant-coefficient difference cohomology.
//!
//! Cochain layout: `Cⁿ(X; A) = A^{kₙ}` with canonical coordinate
//! `a·kₙ + s` for generator `a` of `A` and `n`-simplex `s`. Because the
//! generators of `A` are already in divisibility order this layout is the
//! canonical form of `A^{kₙ}`.

use std::collections::{BTreeSet, HashMap};

use crate::complex::{ChainMap, CochainComplex, SesReport, TwoRowBicomplex};
use crate::error::{Error, Result};
use crate::linalg::{FgAbGroup, GroupHom, Int, IntMatrix};
use crate::sigma::SigmaModule;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    /// `simplices[n]` lists the `n`-simplices as sorted vertex indices, in lexicographic order.
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl SimplicialComplex {
    /// Validates that `simplices` is closed under taking faces.
    pub fn new(labels: Vec<String>, simplices: &[Vec<usize>]) -> Result<Self> {
        let set: BTreeSet<Vec<usize>> = simplices
            .iter()
            .map(|s| normalise(s))
            .collect::<Result<_>>()?;
        for s in &set {
            if let Some(&v) = s.iter().find(|&&v| v >= labels.len()) {
                return Err(Error::invalid(format!("vertex index {v} out of range")));
            }
            if s.len() > 1 {
                for i in 0..s.len() {
                    let face = drop_index(s, i);
                    if !set.contains(&face) {
                        return Err(Error::invalid(format!("face {face:?} of {s:?} is missing")));
                    }
                }
            }
        }
        for (v, name) in labels.iter().enumerate() {
            if !set.contains(&vec![v]) {
                return Err(Error::invalid(format!(
                    "vertex {name} is not listed as a simplex"
                )));
            }
        }
        Ok(Self::from_set(labels, set))
    }

    /// Downward closure of the given simplices.
    pub fn from_facets(labels: Vec<String>, facets: &[Vec<usize>]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for f in facets {
            let f = normalise(f)?;
            if let Some(&v) = f.iter().find(|&&v| v >= labels.len()) {
                return Err(Error::invalid(format!("vertex index {v} out of range")));
            }
            for mask in 1u64..(1 << f.len()) {
                set.insert(
                    f.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &v)| v)
                        .collect(),
                );
            }
        }
        for v in 0..labels.len() {
            set.insert(vec![v]);
        }
        Ok(Self::from_set(labels, set))
    }

    fn from_set(labels: Vec<String>, set: BTreeSet<Vec<usize>>) -> Self {
        let top = set.iter().map(Vec::len).max().unwrap_or(0);
        let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top];
        for s in set {
            simplices[s.len() - 1].push(s);
        }
        let index = simplices
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        SimplicialComplex {
            labels,
            simplices,
            index,
        }
    }

    fn numbered(n: usize, facets: &[Vec<usize>]) -> Self {
        Self::from_facets((0..n).map(|i| i.to_string()).collect(), facets)
            .expect("valid built-in complex")
    }

    pub fn point() -> Self {
        Self::numbered(1, &[vec![0]])
    }

    /// Boundary of an `n`-gon, `n ≥ 3`: a circle.
    pub fn polygon(n: usize) -> Self {
        assert!(n >= 3, "a polygon needs at least 3 vertices");
        let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Self::numbered(n, &edges)
    }

    /// The full `k`-simplex.
    pub fn simplex(k: usize) -> Self {
        Self::numbered(k + 1, &[(0..=k).collect()])
    }

    /// Boundary of the `(k+1)`-simplex: a `k`-sphere.
    pub fn sphere(k: usize) -> Self {
        let all: Vec<usize> = (0..k + 2).collect();
        let facets: Vec<Vec<usize>> = (0..k + 2).map(|i| drop_index(&all, i)).collect();
        Self::numbered(k + 2, &facets)
    }

    /// Nine-vertex triangulation of the torus on a 3×3 grid.
    pub fn torus() -> Self {
        let v = |i: usize, j: usize| 3 * (i % 3) + (j % 3);
        let mut facets = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                facets.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
                facets.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
            }
        }
        Self::numbered(9, &facets)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Top dimension plus one (zero for the empty complex).
    pub fn dim_count(&self) -> usize {
        self.simplices.len()
    }

    pub fn simplices(&self, n: usize) -> &[Vec<usize>] {
        self.simplices.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, n: usize) -> usize {
        self.simplices(n).len()
    }

    pub fn index_of(&self, n: usize, s: &[usize]) -> Option<usize> {
        self.index.get(n)?.get(s).copied()
    }

    /// Simplices of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> Self {
        let mut c = self.clone();
        c.simplices.truncate(k + 1);
        c.index.truncate(k + 1);
        c
    }

    /// All simplices in all dimensions.
    pub fn all_simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.simplices.iter().flatten()
    }

    /// Coboundary `ℤ^{kₙ} → ℤ^{kₙ₊₁}`, `(δφ)(v₀…vₙ₊₁) = Σ (−1)ⁱ φ(…v̂ᵢ…)`.
    pub fn coboundary(&self, n: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.count(n + 1), self.count(n));
        for (row, s) in self.simplices(n + 1).iter().enumerate() {
            for i in 0..s.len() {
                let col = self
                    .index_of(n, &drop_index(s, i))
                    .expect("closed under faces");
                d[(row, col)] += if i % 2 == 0 { 1 } else { -1 };
            }
        }
        d
    }

    /// Cochains with coefficients in `A`.
    pub fn cochain_complex(&self, a: &FgAbGroup) -> CochainComplex {
        let g = a.ngens();
        let levels: Vec<FgAbGroup> = (0..self.dim_count())
            .map(|n| power(a, self.count(n)))
            .collect();
        let diffs = (0..self.dim_count().saturating_sub(1))
            .map(|n| {
                let m = IntMatrix::identity(g).kron(&self.coboundary(n));
                GroupHom::new(levels[n].clone(), levels[n + 1].clone(), m)
                    .expect("coboundary is well defined")
            })
            .collect();
        CochainComplex::new(levels, diffs).expect("δ∘δ = 0")
    }

    /// Integer cochain complex.
    pub fn integer_cochains(&self) -> CochainComplex {
        self.cochain_complex(&FgAbGroup::free(1))
    }

    /// Pullback matrices `ℤ^{kₙ} → ℤ^{kₙ}` of a simplicial vertex map, with orientation signs.
    pub fn vertex_map_pullback(&self, map: &[usize]) -> Result<Vec<IntMatrix>> {
        pullback_matrices(self, self, map)
    }
}

/// Pullback of integer cochains along a simplicial vertex map `domain → codomain`:
/// one `k_n(domain) × k_n(codomain)` matrix per dimension of `domain`.
/// Degenerate images pull back to zero; order reversal contributes the permutation sign.
pub fn pullback_matrices(
    domain: &SimplicialComplex,
    codomain: &SimplicialComplex,
    map: &[usize],
) -> Result<Vec<IntMatrix>> {
    if map.len() != domain.vertex_count() || map.iter().any(|&v| v >= codomain.vertex_count()) {
        return Err(Error::invalid(
            "vertex map must send each vertex to a vertex",
        ));
    }
    let mut out = Vec::with_capacity(domain.dim_count());
    for n in 0..domain.dim_count() {
        let mut p = IntMatrix::zeros(domain.count(n), codomain.count(n));
        for (row, s) in domain.simplices(n).iter().enumerate() {
            let image: Vec<usize> = s.iter().map(|&v| map[v]).collect();
            let sorted: Vec<usize> = image
                .iter()
                .copied()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            if codomain.index_of(sorted.len() - 1, &sorted).is_none() {
                return Err(Error::invalid(format!(
                    "image of simplex {s:?} is not a simplex"
                )));
            }
            if sorted.len() < image.len() {
                continue;
            }
            let col = codomain.index_of(n, &sorted).unwrap();
            p[(row, col)] = Int::from(permutation_sign(&image));
        }
        out.push(p);
    }
    Ok(out)
}

fn normalise(s: &[usize]) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(Error::invalid("empty simplex"));
    }
    let mut v = s.to_vec();
    v.sort_unstable();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid(format!("repeated vertex in simplex {s:?}")));
    }
    Ok(v)
}

fn drop_index(s: &[usize], i: usize) -> Vec<usize> {
    s.iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &v)| v)
        .collect()
}

/// Sign of the permutation sorting distinct values.
fn permutation_sign(v: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `A^k` in generator-major layout.
fn power(a: &FgAbGroup, k: usize) -> FgAbGroup {
    let mut torsion = Vec::new();
    for d in a.torsion() {
        torsion.extend(std::iter::repeat_n(d.clone(), k));
    }
    FgAbGroup::new(a.free_rank() * k, torsion).expect("repeated chain is still a chain")
}

/// How the space map acts on cochains.
#[derive(Clone, Debug)]
pub enum SelfMap {
    /// A simplicial map given on vertices.
    VertexMap(Vec<usize>),
    /// Integer cochain matrices `φⁿ : ℤ^{kₙ} → ℤ^{kₙ}` commuting with δ.
    ChainSelfMap(Vec<IntMatrix>),
}

impl SelfMap {
    pub fn identity(x: &SimplicialComplex) -> Self {
        SelfMap::VertexMap((0..x.vertex_count()).collect())
    }

    /// Integer pullback matrices, validated as a chain map.
    pub fn pullback(&self, x: &SimplicialComplex) -> Result<Vec<IntMatrix>> {
        let mats = match self {
            SelfMap::VertexMap(m) => x.vertex_map_pullback(m)?,
            SelfMap::ChainSelfMap(m) => m.clone(),
        };
        let c = x.integer_cochains();
        ChainMap::from_matrices(c.clone(), c, mats.clone())?;
        Ok(mats)
    }
}

/// Chain self-map of the `n`-gon of degree `d` on the circle.
///
/// Identity in degree 0; in degree 1 `ψ ↦ ψ + (d−1)⟨ψ, z⟩·e`, where `z` is the
/// fundamental cycle and `e` the indicator cochain of the edge `[0,1]`.
pub fn circle_degree_map(n: usize, d: i64) -> SelfMap {
    let x = SimplicialComplex::polygon(n);
    let k = x.count(1);
    // The fundamental cycle runs 0→1→…→n−1→0, so [0, n−1] is traversed backwards.
    let z: Vec<Int> = x
        .simplices(1)
        .iter()
        .map(|e| Int::from(if *e == vec![0, n - 1] { -1 } else { 1 }))
        .collect();
    let e = x.index_of(1, &[0, 1]).unwrap();
    let mut phi1 = IntMatrix::identity(k);
    for (j, zj) in z.iter().enumerate() {
        phi1[(e, j)] += zj * Int::from(d - 1);
    }
    SelfMap::ChainSelfMap(vec![IntMatrix::identity(n), phi1])
}

/// The two-row bicomplex `C*(X; A) → C*(X; A)` with vertical `id − f∘σ*`.
pub fn difference_bicomplex(
    x: &SimplicialComplex,
    sigma: &SelfMap,
    coeff: &SigmaModule,
) -> Result<TwoRowBicomplex> {
    let pull = sigma.pullback(x)?;
    let c = x.cochain_complex(coeff.carrier());
    let f = coeff.endo().matrix();
    let comps: Vec<GroupHom> = pull
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let twisted = GroupHom::new(c.level(n), c.level(n), f.kron(p))?;
            Ok(GroupHom::identity(&c.level(n)).sub(&twisted))
        })
        .collect::<Result<_>>()?;
    Ok(TwoRowBicomplex::new(ChainMap::new(c.clone(), c, comps)?))
}

/// Difference cohomology `H*_σ(X; (A, f))` in degrees `0..=dim X + 1`.
pub fn difference_cohomology(
    x: &SimplicialComplex,
    sigma: &SelfMap,
    coeff: &SigmaModule,
) -> Result<Vec<FgAbGroup>> {
    Ok(trim(
        difference_bicomplex(x, sigma, coeff)?.total_cohomology(),
    ))
}

/// The exact sequences `0 → Hⁿ⁻¹ coinvariants → Hⁿ_σ → Hⁿ invariants → 0`.
pub fn mainss_report(
    x: &SimplicialComplex,
    sigma: &SelfMap,
    coeff: &SigmaModule,
) -> Result<Vec<SesReport>> {
    difference_bicomplex(x, sigma, coeff)?.extract_ses()
}

/// Drops trailing trivial groups, keeping at least one entry.
pub fn trim(mut groups: Vec<FgAbGroup>) -> Vec<FgAbGroup> {
    while groups.len() > 1 && groups.last().is_some_and(FgAbGroup::is_trivial) {
        groups.pop();
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    #[test]
    fn ordinary_cohomology() {
        assert_eq!(
            SimplicialComplex::point()
                .integer_cochains()
                .cohomology_groups(),
            vec![z()]
        );
        assert_eq!(
            SimplicialComplex::polygon(3)
                .integer_cochains()
                .cohomology_groups(),
            vec![z(), z()]
        );
        let disk = SimplicialComplex::simplex(2).cochain_complex(&FgAbGroup::cyclic(4));
        assert_eq!(
            disk.cohomology_groups(),
            vec![
                FgAbGroup::cyclic(4),
                FgAbGroup::trivial(),
                FgAbGroup::trivial()
            ]
        );
        assert_eq!(
            SimplicialComplex::torus()
                .integer_cochains()
                .cohomology_groups(),
            vec![z(), FgAbGroup::free(2), z()]
        );
        assert_eq!(
            SimplicialComplex::sphere(2)
                .integer_cochains()
                .cohomology_groups(),
            vec![z(), FgAbGroup::trivial(), z()]
        );
    }

    #[test]
    fn mapping_tori() {
        let circle = SimplicialComplex::polygon(4);
        let zz = SigmaModule::trivial(&z());
        let klein = difference_cohomology(&circle, &circle_degree_map(4, -1), &zz).unwrap();
        assert_eq!(klein, vec![z(), z(), FgAbGroup::cyclic(2)]);
        let torus = difference_cohomology(&circle, &SelfMap::identity(&circle), &zz).unwrap();
        assert_eq!(torus, vec![z(), FgAbGroup::free(2), z()]);
        let deg2 = difference_cohomology(&circle, &circle_degree_map(4, 2), &zz).unwrap();
        assert_eq!(deg2, vec![z(), z()]);
        let point = SimplicialComplex::point();
        let circle_from_point =
            difference_cohomology(&point, &SelfMap::identity(&point), &zz).unwrap();
        assert_eq!(circle_from_point, vec![z(), z()]);
    }

    #[test]
    fn rotation_matches_identity() {
        let x = SimplicialComplex::polygon(5);
        let zz = SigmaModule::trivial(&z());
        let rot = SelfMap::VertexMap((0..5).map(|i| (i + 1) % 5).collect());
        assert_eq!(
            difference_cohomology(&x, &rot, &zz).unwrap(),
            difference_cohomology(&x, &SelfMap::identity(&x), &zz).unwrap()
        );
    }

    #[test]
    fn reflection_reverses_orientation() {
        // Reflection of a square fixing vertex 0 has degree −1, giving the Klein bottle.
        let x = SimplicialComplex::polygon(4);
        let refl = SelfMap::VertexMap(vec![0, 3, 2, 1]);
        let h = difference_cohomology(&x, &refl, &SigmaModule::trivial(&z())).unwrap();
        assert_eq!(h, vec![z(), z(), FgAbGroup::cyclic(2)]);
    }

    #[test]
    fn bad_vertex_map_rejected() {
        // Sends the edge [0,1] onto the non-edge [0,2] of the square.
        let x = SimplicialComplex::polygon(4);
        assert!(SelfMap::VertexMap(vec![0, 2, 2, 3]).pullback(&x).is_err());
    }

    #[test]
    fn ses_reports_are_exact() {
        let x = SimplicialComplex::polygon(3);
        let coeff = SigmaModule::scalar(&FgAbGroup::cyclic(5), 2);
        for s in mainss_report(&x, &SelfMap::identity(&x), &coeff).unwrap() {
            assert!(s.exact);
            assert_eq!(s.orders_multiply(), Some(true));
        }
    }
}
