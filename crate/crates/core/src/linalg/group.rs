//! Finitely generated abelian groups in invariant-factor form, their
//! homomorphisms and subquotients.
//!
//! Canonical coordinates: the torsion generators come first, in divisibility
//! order, followed by the free generators. A group with invariant factors
//! `[2, 4]` and free rank 1 has coordinate moduli `[2, 4, 0]`.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{mod_floor, Int, IntMatrix};
use super::smith::{integer_kernel, smith_normal_form, Lattice};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    free_rank: usize,
    torsion: Vec<Int>,
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        FgAbGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// ℤ/n. `n = 0` gives ℤ and `n = 1` the trivial group.
    pub fn cyclic(n: impl Into<Int>) -> Self {
        let n: Int = n.into();
        let n = n.abs();
        if n.is_zero() {
            Self::free(1)
        } else if n.is_one() {
            Self::trivial()
        } else {
            FgAbGroup {
                free_rank: 0,
                torsion: vec![n],
            }
        }
    }

    /// Validating constructor: factors must be ≥ 2 and form a divisibility chain.
    pub fn new(free_rank: usize, torsion: Vec<Int>) -> Result<Self> {
        if let Some(d) = torsion.iter().find(|d| *d < &Int::from(2)) {
            return Err(Error::invalid(format!(
                "invariant factor {d} must be at least 2"
            )));
        }
        if let Some(w) = torsion.windows(2).find(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::invalid(format!("{} does not divide {}", w[0], w[1])));
        }
        Ok(FgAbGroup { free_rank, torsion })
    }

    /// Canonical form of ℤ/m₁ ⊕ … ⊕ ℤ/mₖ for arbitrary moduli (0 meaning ℤ).
    pub fn from_moduli(moduli: &[Int]) -> Self {
        cokernel(&IntMatrix::diagonal(moduli)).group
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[Int] {
        &self.torsion
    }

    /// Number of canonical generators.
    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    /// Per-coordinate moduli, `0` for free coordinates.
    pub fn moduli(&self) -> Vec<Int> {
        let mut m = self.torsion.clone();
        m.extend(std::iter::repeat_n(Int::zero(), self.free_rank));
        m
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order, or `None` for infinite groups.
    pub fn order(&self) -> Option<Int> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Reduces a coordinate vector into canonical range.
    pub fn reduce(&self, coords: &[Int]) -> Vec<Int> {
        assert_eq!(coords.len(), self.ngens(), "coordinate length mismatch");
        coords
            .iter()
            .zip(self.moduli())
            .map(|(c, m)| {
                if m.is_zero() {
                    c.clone()
                } else {
                    mod_floor(c, &m)
                }
            })
            .collect()
    }

    pub fn zero_element(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            coords: vec![Int::zero(); self.ngens()],
        }
    }

    pub fn element(&self, coords: &[Int]) -> GroupElement {
        GroupElement {
            group: self.clone(),
            coords: self.reduce(coords),
        }
    }

    /// Canonical generator `i` as an element.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut c = vec![Int::zero(); self.ngens()];
        c[i] = Int::one();
        self.element(&c)
    }

    /// All elements in lexicographic coordinate order.
    pub fn enumerate(&self) -> Result<impl Iterator<Item = GroupElement> + '_> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        let total = self.order().unwrap();
        let total = total
            .to_u64()
            .ok_or_else(|| Error::bound("enumeration", &total, u64::MAX))?;
        Ok((0..total).map(move |mut idx| {
            let mut coords = vec![Int::zero(); self.torsion.len()];
            for (c, d) in coords.iter_mut().zip(&self.torsion).rev() {
                let d = d.to_u64().unwrap();
                *c = Int::from(idx % d);
                idx /= d;
            }
            GroupElement {
                group: self.clone(),
                coords,
            }
        }))
    }

    /// Relation matrix `diag(moduli)` restricted to torsion columns.
    pub(crate) fn relation_columns(&self) -> IntMatrix {
        let n = self.ngens();
        let mut m = IntMatrix::zeros(n, self.torsion.len());
        for (j, d) in self.torsion.iter().enumerate() {
            m[(j, j)] = d.clone();
        }
        m
    }

    /// Direct sum with canonical injections and projections.
    pub fn direct_sum(parts: &[FgAbGroup]) -> DirectSum {
        let moduli: Vec<Int> = parts.iter().flat_map(FgAbGroup::moduli).collect();
        let coker = cokernel(&IntMatrix::diagonal(&moduli));
        let group = coker.group.clone();
        let mut injections = Vec::with_capacity(parts.len());
        let mut projections = Vec::with_capacity(parts.len());
        let mut offset = 0;
        for part in parts {
            let n = part.ngens();
            let cols: Vec<usize> = (offset..offset + n).collect();
            let inj = coker.proj.select_columns(&cols);
            let proj = coker.lift.select_rows(&cols);
            injections.push(GroupHom::new_unchecked(part.clone(), group.clone(), inj));
            projections.push(GroupHom::new_unchecked(group.clone(), part.clone(), proj));
            offset += n;
        }
        DirectSum {
            group,
            injections,
            projections,
        }
    }

    /// Notation `Z^r + Z/d1 + Z/d2`, or `0` for the trivial group.
    pub fn notation(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Parses the output of [`FgAbGroup::notation`].
    pub fn parse_notation(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::trivial());
        }
        let mut free = 0usize;
        let mut torsion = Vec::new();
        for part in s.split('+').map(str::trim) {
            if part == "Z" {
                free += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                free += r
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad rank in {part:?}")))?;
            } else if let Some(d) = part.strip_prefix("Z/") {
                torsion.push(
                    d.parse::<Int>()
                        .map_err(|_| Error::invalid(format!("bad modulus in {part:?}")))?,
                );
            } else {
                return Err(Error::invalid(format!("unrecognised summand {part:?}")));
            }
        }
        Self::new(free, torsion)
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.notation())
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.notation())
    }
}

/// Element of a canonical group, with coordinates reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: FgAbGroup,
    coords: Vec<Int>,
}

impl GroupElement {
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn add(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.group, other.group, "elements of different groups");
        let c: Vec<Int> = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        self.group.element(&c)
    }

    pub fn neg(&self) -> GroupElement {
        let c: Vec<Int> = self.coords.iter().map(|a| -a).collect();
        self.group.element(&c)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Equality of two elements of the same group.
pub fn element_equal(a: &GroupElement, b: &GroupElement) -> bool {
    a.group == b.group && a.coords == b.coords
}

/// Cokernel of an integer matrix with projection and lifting witnesses.
///
/// `proj` maps ℤ^rows onto canonical coordinates; `lift` sends canonical
/// generators back to representatives in ℤ^rows.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FgAbGroup,
    pub proj: IntMatrix,
    pub lift: IntMatrix,
}

impl Cokernel {
    pub fn project(&self, x: &[Int]) -> Vec<Int> {
        self.group.reduce(&self.proj.mul_vec(x))
    }
}

/// ℤ^rows / (column span of `m`).
pub fn cokernel(m: &IntMatrix) -> Cokernel {
    let snf = smith_normal_form(m);
    let diag: Vec<Int> = (0..m.rows())
        .map(|i| {
            if i < m.cols() {
                snf.s[(i, i)].clone()
            } else {
                Int::zero()
            }
        })
        .collect();
    let mut torsion_idx = Vec::new();
    let mut torsion = Vec::new();
    let mut free_idx = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if d.is_zero() {
            free_idx.push(i);
        } else if !d.is_one() {
            torsion_idx.push(i);
            torsion.push(d.clone());
        }
    }
    let kept: Vec<usize> = torsion_idx.iter().chain(&free_idx).copied().collect();
    Cokernel {
        group: FgAbGroup {
            free_rank: free_idx.len(),
            torsion,
        },
        proj: snf.u.select_rows(&kept),
        lift: snf.u_inv.select_columns(&kept),
    }
}

/// Homomorphism between canonical groups, acting on coordinate columns.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupHom({} -> {}, {:?})",
            self.source, self.target, self.matrix
        )
    }
}

impl GroupHom {
    /// Checks shape and that every torsion relation of the source maps to zero.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::invalid(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens()
            )));
        }
        let tm = target.moduli();
        for (j, d) in source.torsion.iter().enumerate() {
            for (i, t) in tm.iter().enumerate() {
                let v = &matrix[(i, j)] * d;
                let ok = if t.is_zero() {
                    v.is_zero()
                } else {
                    v.is_multiple_of(t)
                };
                if !ok {
                    return Err(Error::NotWellDefined(format!(
                        "generator {j} of order {d} maps to an element of infinite or non-dividing order (entry ({i},{j}))"
                    )));
                }
            }
        }
        Ok(Self::new_unchecked(source, target, matrix))
    }

    pub(crate) fn new_unchecked(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Self {
        let tm = target.moduli();
        let mut matrix = matrix;
        for (i, t) in tm.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            for j in 0..matrix.cols() {
                matrix[(i, j)] = mod_floor(&matrix[(i, j)], t);
            }
        }
        GroupHom {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Self::new_unchecked(g.clone(), g.clone(), IntMatrix::identity(g.ngens()))
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        Self::new_unchecked(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.ngens(), source.ngens()),
        )
    }

    /// Multiplication by an integer on `g`.
    pub fn scalar(g: &FgAbGroup, c: impl Into<Int>) -> Self {
        let c = c.into();
        Self::new_unchecked(
            g.clone(),
            g.clone(),
            IntMatrix::identity(g.ngens()).scale(&c),
        )
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply_coords(&self, x: &[Int]) -> Vec<Int> {
        self.target.reduce(&self.matrix.mul_vec(x))
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        assert_eq!(x.group, self.source, "element not in the source group");
        self.target.element(&self.matrix.mul_vec(&x.coords))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupHom) -> GroupHom {
        assert_eq!(
            first.target, self.source,
            "composition of incompatible homs"
        );
        Self::new_unchecked(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix),
        )
    }

    pub fn add(&self, other: &GroupHom) -> GroupHom {
        assert_eq!((&self.source, &self.target), (&other.source, &other.target));
        Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.add(&other.matrix),
        )
    }

    pub fn sub(&self, other: &GroupHom) -> GroupHom {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GroupHom {
        self.scale(-1)
    }

    pub fn scale(&self, c: impl Into<Int>) -> GroupHom {
        let c = c.into();
        Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.scale(&c),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Lattice of coordinate vectors in ℤ^target that represent elements of the image.
    fn image_lattice(&self) -> Lattice {
        Lattice::from_generators(&self.matrix.hstack(&self.target.relation_columns()))
    }

    /// Generators, as columns, of the lattice of source vectors mapping to zero (source relations included).
    pub(crate) fn kernel_generators(&self) -> IntMatrix {
        let n = self.source.ngens();
        let full = self.matrix.hstack(&self.target.relation_columns());
        let k = integer_kernel(&full);
        let rows: Vec<usize> = (0..n).collect();
        k.select_rows(&rows)
    }

    pub fn is_injective(&self) -> bool {
        kernel(self).0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        coker_of_hom(self).0.is_trivial()
    }
}

/// L/N for lattices N ⊆ L in ℤⁿ, with coordinate maps in both directions.
///
/// Callers include the ambient relations in N.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: FgAbGroup,
    ambient: FgAbGroup,
    lattice: Lattice,
    coker: Cokernel,
}

impl Subquotient {
    /// `big` and `small` hold generators as columns. Returns an error when `small ⊄ big`.
    pub fn new(ambient: &FgAbGroup, big: &IntMatrix, small: &IntMatrix) -> Result<Self> {
        let lattice = Lattice::from_generators(big);
        let mut rel_cols = Vec::with_capacity(small.cols());
        for j in 0..small.cols() {
            let y = lattice.solve(&small.column(j)).ok_or_else(|| {
                Error::invalid("subquotient: denominator not contained in numerator")
            })?;
            rel_cols.push(y);
        }
        let rel = IntMatrix::from_columns(lattice.rank(), &rel_cols);
        let coker = cokernel(&rel);
        Ok(Subquotient {
            group: coker.group.clone(),
            ambient: ambient.clone(),
            lattice,
            coker,
        })
    }

    /// Representative in ambient coordinates of the class with canonical coordinates `c`.
    pub fn represent(&self, c: &[Int]) -> Vec<Int> {
        let y = self.coker.lift.mul_vec(c);
        self.ambient.reduce(&self.lattice.basis().mul_vec(&y))
    }

    /// Class of an ambient vector, or `None` if it lies outside the numerator.
    pub fn classify(&self, x: &[Int]) -> Option<Vec<Int>> {
        let y = self.lattice.solve(x)?;
        Some(self.coker.project(&y))
    }

    /// The map group → ambient sending each generator to its representative.
    pub fn inclusion(&self) -> GroupHom {
        let cols: Vec<Vec<Int>> = (0..self.group.ngens())
            .map(|i| {
                let mut e = vec![Int::zero(); self.group.ngens()];
                e[i] = Int::one();
                self.represent(&e)
            })
            .collect();
        GroupHom::new_unchecked(
            self.group.clone(),
            self.ambient.clone(),
            IntMatrix::from_columns(self.ambient.ngens(), &cols),
        )
    }
}

/// Kernel of `h` with its inclusion into the source.
pub fn kernel(h: &GroupHom) -> (FgAbGroup, GroupHom) {
    let sq = kernel_subquotient(h);
    (sq.group.clone(), sq.inclusion())
}

pub(crate) fn kernel_subquotient(h: &GroupHom) -> Subquotient {
    let gens = h.kernel_generators();
    Subquotient::new(&h.source, &gens, &h.source.relation_columns())
        .expect("source relations lie in the kernel of a well-defined hom")
}

/// Image of `h` as a subgroup of the target, with its inclusion.
pub fn image(h: &GroupHom) -> (FgAbGroup, GroupHom) {
    let sq = image_subquotient(h);
    (sq.group.clone(), sq.inclusion())
}

fn image_subquotient(h: &GroupHom) -> Subquotient {
    let rel = h.target.relation_columns();
    Subquotient::new(&h.target, &h.matrix.hstack(&rel), &rel)
        .expect("relations lie in the image lattice")
}

/// Cokernel of `h` with the projection from the target.
pub fn coker_of_hom(h: &GroupHom) -> (FgAbGroup, GroupHom) {
    let sq = coker_subquotient(h);
    let n = h.target.ngens();
    let cols: Vec<Vec<Int>> = (0..n)
        .map(|i| {
            let mut e = vec![Int::zero(); n];
            e[i] = Int::one();
            sq.classify(&e)
                .expect("every vector lies in the full lattice")
        })
        .collect();
    let proj = GroupHom::new_unchecked(
        h.target.clone(),
        sq.group.clone(),
        IntMatrix::from_columns(sq.group.ngens(), &cols),
    );
    (sq.group.clone(), proj)
}

pub(crate) fn coker_subquotient(h: &GroupHom) -> Subquotient {
    let n = h.target.ngens();
    let small = h.matrix.hstack(&h.target.relation_columns());
    Subquotient::new(&h.target, &IntMatrix::identity(n), &small).expect("everything lies in ℤⁿ")
}

/// Whether `image(inject) = kernel(surject)` as subgroups of the common middle group.
pub fn image_equals_kernel(inject: &GroupHom, surject: &GroupHom) -> bool {
    assert_eq!(inject.target, surject.source);
    let middle = &inject.target;
    let im = inject.image_lattice();
    let ker_gens = surject
        .kernel_generators()
        .hstack(&middle.relation_columns());
    let ker = Lattice::from_generators(&ker_gens);
    im.contains_lattice(&ker) && ker.contains_lattice(&im)
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FgAbGroup,
    pub injections: Vec<GroupHom>,
    pub projections: Vec<GroupHom>,
}

/// Finite abelian group given by an explicit multiplication on `0..n`.
#[derive(Clone, Debug)]
pub struct TabulatedGroup {
    pub group: FgAbGroup,
    /// Canonical coordinates of each element index.
    pub coords: Vec<Vec<Int>>,
    index: HashMap<Vec<Int>, usize>,
}

impl TabulatedGroup {
    /// Element index with the given canonical coordinates.
    pub fn index_of(&self, coords: &[Int]) -> Option<usize> {
        self.index.get(&self.group.reduce(coords)).copied()
    }
}

/// Generating set of a finite group on `0..n`, chosen greedily in index order.
pub(crate) fn greedy_generators(
    n: usize,
    identity: usize,
    mul: impl Fn(usize, usize) -> usize,
) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut reached = vec![false; n];
    reached[identity] = true;
    let mut members = vec![identity];
    for x in 0..n {
        if reached[x] {
            continue;
        }
        gens.push(x);
        let mut frontier = members.clone();
        while let Some(y) = frontier.pop() {
            for &g in &gens {
                let z = mul(y, g);
                if !reached[z] {
                    reached[z] = true;
                    members.push(z);
                    frontier.push(z);
                }
            }
        }
    }
    gens
}

/// Recovers the invariant-factor form of a finite abelian group from its
/// multiplication, by collecting the relations among a generating set found
/// while walking the Cayley graph.
pub fn tabulate_abelian_group(
    n: usize,
    identity: usize,
    mul: impl Fn(usize, usize) -> usize,
) -> Result<TabulatedGroup> {
    if identity >= n {
        return Err(Error::invalid("identity index out of range"));
    }
    let gens = greedy_generators(n, identity, &mul);

    // Breadth-first walk recording exponent vectors and relations.
    let k = gens.len();
    let mut vec_of: Vec<Option<Vec<Int>>> = vec![None; n];
    vec_of[identity] = Some(vec![Int::zero(); k]);
    let mut queue = std::collections::VecDeque::from([identity]);
    let mut relations: Vec<Vec<Int>> = Vec::new();
    while let Some(x) = queue.pop_front() {
        let vx = vec_of[x].clone().unwrap();
        for (gi, &g) in gens.iter().enumerate() {
            let y = mul(x, g);
            let mut vy = vx.clone();
            vy[gi] += 1;
            match &vec_of[y] {
                None => {
                    vec_of[y] = Some(vy);
                    queue.push_back(y);
                }
                Some(existing) => {
                    let rel: Vec<Int> = vy.iter().zip(existing).map(|(a, b)| a - b).collect();
                    if rel.iter().any(|c| !c.is_zero()) {
                        relations.push(rel);
                    }
                }
            }
        }
    }
    let rel = IntMatrix::from_columns(k, &relations);
    let coker = cokernel(&rel);
    if coker.group.order() != Some(Int::from(n)) {
        return Err(Error::invalid("multiplication is not an abelian group law"));
    }
    let coords: Vec<Vec<Int>> = vec_of
        .iter()
        .map(|v| coker.project(v.as_ref().unwrap()))
        .collect();
    let index: HashMap<Vec<Int>, usize> = coords
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    if index.len() != n {
        return Err(Error::invalid("multiplication is not an abelian group law"));
    }
    Ok(TabulatedGroup {
        group: coker.group,
        coords,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> Int {
        Int::from(n)
    }

    #[test]
    fn cokernel_examples() {
        assert!(cokernel(&IntMatrix::identity(2)).group.is_trivial());
        assert_eq!(
            cokernel(&IntMatrix::from_rows(&[vec![3]])).group,
            FgAbGroup::cyclic(3)
        );
        let g = cokernel(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]])).group;
        assert_eq!(g, FgAbGroup::new(0, vec![z(2), z(4)]).unwrap());
    }

    #[test]
    fn kernel_examples() {
        let z6 = FgAbGroup::cyclic(6);
        assert!(kernel(&GroupHom::identity(&z6)).0.is_trivial());
        assert!(kernel(&GroupHom::scalar(&FgAbGroup::free(1), 2))
            .0
            .is_trivial());
        // ×2 on ℤ/6: by enumeration the kernel is {0, 3}.
        let (k, inc) = kernel(&GroupHom::scalar(&z6, 2));
        assert_eq!(k, FgAbGroup::cyclic(2));
        assert_eq!(inc.apply(&k.generator(0)).coords(), &[z(3)]);
    }

    #[test]
    fn image_and_coker_examples() {
        let z6 = FgAbGroup::cyclic(6);
        assert_eq!(image(&GroupHom::scalar(&z6, 3)).0, FgAbGroup::cyclic(2));
        assert!(coker_of_hom(&GroupHom::identity(&z6)).0.is_trivial());
        assert_eq!(
            coker_of_hom(&GroupHom::scalar(&FgAbGroup::free(1), 3)).0,
            FgAbGroup::cyclic(3)
        );
    }

    #[test]
    fn enumerate_and_equality() {
        let g = FgAbGroup::new(0, vec![z(2), z(2)]).unwrap();
        let all: Vec<_> = g.enumerate().unwrap().collect();
        assert_eq!(all.len(), 4);
        assert_eq!(all[1].coords(), &[z(0), z(1)]);
        assert!(matches!(
            FgAbGroup::free(1).enumerate(),
            Err(Error::InfiniteGroup)
        ));
        let z3 = FgAbGroup::cyclic(3);
        assert!(element_equal(&z3.element(&[z(1)]), &z3.element(&[z(4)])));
    }

    #[test]
    fn ill_defined_hom_rejected() {
        // ℤ/2 → ℤ/3 sending 1 ↦ 1 is not a homomorphism.
        let r = GroupHom::new(
            FgAbGroup::cyclic(2),
            FgAbGroup::cyclic(3),
            IntMatrix::from_rows(&[vec![1]]),
        );
        assert!(matches!(r, Err(Error::NotWellDefined(_))));
        // ℤ/2 → ℤ sending 1 ↦ 1 neither.
        let r = GroupHom::new(
            FgAbGroup::cyclic(2),
            FgAbGroup::free(1),
            IntMatrix::from_rows(&[vec![1]]),
        );
        assert!(r.is_err());
        // ℤ/2 → ℤ/4, 1 ↦ 2 is fine.
        let r = GroupHom::new(
            FgAbGroup::cyclic(2),
            FgAbGroup::cyclic(4),
            IntMatrix::from_rows(&[vec![2]]),
        );
        assert!(r.is_ok());
    }

    #[test]
    fn direct_sum_is_canonical() {
        let s = FgAbGroup::direct_sum(&[FgAbGroup::cyclic(2), FgAbGroup::cyclic(3)]);
        assert_eq!(s.group, FgAbGroup::cyclic(6));
        for (inj, proj) in s.injections.iter().zip(&s.projections) {
            let round = proj.compose(inj);
            assert_eq!(round, GroupHom::identity(inj.source()));
        }
    }

    #[test]
    fn tabulated_cyclic_product() {
        // ℤ/2 × ℤ/4 encoded as a·4 + b.
        let t =
            tabulate_abelian_group(8, 0, |x, y| ((x / 4 + y / 4) % 2) * 4 + (x % 4 + y % 4) % 4)
                .unwrap();
        assert_eq!(t.group, FgAbGroup::new(0, vec![z(2), z(4)]).unwrap());
    }

    #[test]
    fn notation_round_trip() {
        let g = FgAbGroup::new(2, vec![z(2), z(4)]).unwrap();
        assert_eq!(g.notation(), "Z^2 + Z/2 + Z/4");
        assert_eq!(FgAbGroup::parse_notation(&g.notation()).unwrap(), g);
        assert_eq!(FgAbGroup::trivial().notation(), "0");
    }
}
