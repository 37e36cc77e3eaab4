//! Difference abelian groups (ℤ[σ]-modules) and finite difference groups.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::linalg::{coker_of_hom, greedy_generators, kernel, FgAbGroup, GroupElement, GroupHom};

/// An abelian group with an endomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaModule {
    carrier: FgAbGroup,
    endo: GroupHom,
}

impl SigmaModule {
    pub fn new(endo: GroupHom) -> Result<Self> {
        if endo.source() != endo.target() {
            return Err(Error::invalid(
                "module endomorphism must have equal source and target",
            ));
        }
        Ok(SigmaModule {
            carrier: endo.source().clone(),
            endo,
        })
    }

    /// `(A, id)`.
    pub fn trivial(carrier: &FgAbGroup) -> Self {
        SigmaModule {
            carrier: carrier.clone(),
            endo: GroupHom::identity(carrier),
        }
    }

    /// `(A, ×c)`.
    pub fn scalar(carrier: &FgAbGroup, c: i64) -> Self {
        SigmaModule {
            carrier: carrier.clone(),
            endo: GroupHom::scalar(carrier, c),
        }
    }

    pub fn carrier(&self) -> &FgAbGroup {
        &self.carrier
    }

    pub fn endo(&self) -> &GroupHom {
        &self.endo
    }

    /// `endo − id`.
    pub fn twist_difference(&self) -> GroupHom {
        self.endo.sub(&GroupHom::identity(&self.carrier))
    }

    /// `ker(endo − id)` with its inclusion.
    pub fn invariants(&self) -> (FgAbGroup, GroupHom) {
        kernel(&self.twist_difference())
    }

    /// `coker(endo − id)` with its projection; for abelian groups this is the Artin–Schreier group.
    pub fn coinvariants(&self) -> (FgAbGroup, GroupHom) {
        coker_of_hom(&self.twist_difference())
    }

    /// `[H⁰, H¹]`; higher groups vanish.
    pub fn point_difference_cohomology(&self) -> Vec<FgAbGroup> {
        vec![self.invariants().0, self.coinvariants().0]
    }
}

/// Default ceiling on the order of a finite group handled by brute force.
pub const DEFAULT_GROUP_ORDER_CAP: usize = 5040;

/// A finite group on `0..n` with an endomorphism, given by tables.
#[derive(Clone, Debug)]
pub struct FiniteSigmaGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    endo: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteSigmaGroup {
    /// Validates the group law and the endomorphism. Orders above `cap` are rejected.
    pub fn new(
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
        endo: Vec<usize>,
        cap: usize,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::invalid("group must be nonempty"));
        }
        if n > cap {
            return Err(Error::bound("finite group order", n, cap));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) || endo.len() != n {
            return Err(Error::invalid(
                "table and endo must be indexed by the element list",
            ));
        }
        if table.iter().flatten().chain(&endo).any(|&x| x >= n) {
            return Err(Error::invalid("table entry out of range"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::invalid("no identity element"))?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| table[x][y] == identity)
                .ok_or_else(|| Error::invalid(format!("element {} has no inverse", labels[x])))?;
            if table[y][x] != identity {
                return Err(Error::invalid(format!(
                    "element {} has no two-sided inverse",
                    labels[x]
                )));
            }
            inverse[x] = y;
        }
        // Each row of a group table is a permutation.
        for row in &table {
            let mut seen = vec![false; n];
            for &z in row {
                if std::mem::replace(&mut seen[z], true) {
                    return Err(Error::invalid("table is not a Latin square"));
                }
            }
        }
        let generators = greedy_generators(n, identity, |a, b| table[a][b]);
        // Light's test: associativity needs checking only against a generating set.
        for &g in &generators {
            for x in 0..n {
                let xg = table[x][g];
                for y in 0..n {
                    if table[xg][y] != table[x][table[g][y]] {
                        return Err(Error::invalid("multiplication is not associative"));
                    }
                }
            }
        }
        for &g in &generators {
            for x in 0..n {
                if endo[table[x][g]] != table[endo[x]][endo[g]] {
                    return Err(Error::invalid("endo is not a homomorphism"));
                }
            }
        }
        Ok(FiniteSigmaGroup {
            labels,
            table,
            endo,
            identity,
            inverse,
            generators,
        })
    }

    /// Builds a group from a multiplication closure on `0..n`.
    pub fn from_fn(
        labels: Vec<String>,
        mul: impl Fn(usize, usize) -> usize,
        endo: impl Fn(usize) -> usize,
        cap: usize,
    ) -> Result<Self> {
        let n = labels.len();
        if n > cap {
            return Err(Error::bound("finite group order", n, cap));
        }
        let table = (0..n)
            .map(|a| (0..n).map(|b| mul(a, b)).collect())
            .collect();
        let endo = (0..n).map(endo).collect();
        Self::new(labels, table, endo, cap)
    }

    /// ℤ/n with the endomorphism `x ↦ c·x`.
    pub fn cyclic(n: usize, c: i64) -> Result<Self> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let c = c.rem_euclid(n as i64) as usize;
        Self::from_fn(
            labels,
            |a, b| (a + b) % n,
            |a| (a * c) % n,
            DEFAULT_GROUP_ORDER_CAP,
        )
    }

    /// Symmetric group on `k` letters (permutations in lexicographic order) with the identity endomorphism.
    pub fn symmetric(k: usize) -> Result<Self> {
        let perms = permutations(k);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        let labels = perms.iter().map(|p| format!("{p:?}")).collect();
        // (a·b)(i) = a(b(i)).
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index(&b.iter().map(|&i| a[i]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let endo = (0..perms.len()).collect();
        Self::new(labels, table, endo, DEFAULT_GROUP_ORDER_CAP)
    }

    /// Same group with another endomorphism.
    pub fn with_endo(&self, endo: Vec<usize>) -> Result<Self> {
        Self::new(self.labels.clone(), self.table.clone(), endo, usize::MAX)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn endo(&self, a: usize) -> usize {
        self.endo[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn endo_table(&self) -> &[usize] {
        &self.endo
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|&g| (0..self.order()).all(|x| self.table[x][g] == self.table[g][x]))
    }

    /// Orbits of `g·x = s(g)·x·g⁻¹`. The orbit of the identity comes first, the
    /// others follow ordered by least member; members are sorted.
    pub fn as_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut orbit_of = vec![usize::MAX; n];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let starts = std::iter::once(self.identity).chain((0..n).filter(|&x| x != self.identity));
        for start in starts {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            orbit_of[start] = id;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &g in &self.generators {
                    let y = self.mul(self.mul(self.endo(g), x), self.inv(g));
                    if orbit_of[y] == usize::MAX {
                        orbit_of[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            orbits.push(members);
        }
        orbits
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Finite abelian σ-module as a table group, elements in enumeration order.
pub fn tabulate_module(m: &SigmaModule) -> Result<(FiniteSigmaGroup, Vec<GroupElement>)> {
    let elems: Vec<_> = m.carrier().enumerate()?.collect();
    let n = elems.len();
    if n > DEFAULT_GROUP_ORDER_CAP {
        return Err(Error::bound(
            "finite group order",
            n,
            DEFAULT_GROUP_ORDER_CAP,
        ));
    }
    let index: std::collections::HashMap<_, _> = elems
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let labels = elems.iter().map(|e| format!("{:?}", e.coords())).collect();
    let g = FiniteSigmaGroup::from_fn(
        labels,
        |a, b| index[&elems[a].add(&elems[b])],
        |a| index[&m.endo().apply(&elems[a])],
        DEFAULT_GROUP_ORDER_CAP,
    )?;
    Ok((g, elems))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Int, IntMatrix};

    #[test]
    fn invariants_and_coinvariants() {
        let z = FgAbGroup::free(1);
        assert_eq!(SigmaModule::trivial(&z).invariants().0, z);
        assert!(SigmaModule::scalar(&z, 2).invariants().0.is_trivial());
        assert_eq!(
            SigmaModule::scalar(&z, 4).coinvariants().0,
            FgAbGroup::cyclic(3)
        );
        // ×3 on ℤ/8 fixes exactly {0, 4}.
        assert_eq!(
            SigmaModule::scalar(&FgAbGroup::cyclic(8), 3).invariants().0,
            FgAbGroup::cyclic(2)
        );
        assert_eq!(
            SigmaModule::scalar(&FgAbGroup::cyclic(6), -1)
                .coinvariants()
                .0,
            FgAbGroup::cyclic(2)
        );
    }

    #[test]
    fn point_cohomology_examples() {
        let h = SigmaModule::scalar(&FgAbGroup::cyclic(7), 3).point_difference_cohomology();
        assert!(h[0].is_trivial() && h[1].is_trivial());
        let z2 = FgAbGroup::free(2);
        let swap = GroupHom::new(
            z2.clone(),
            z2.clone(),
            IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
        )
        .unwrap();
        let h = SigmaModule::new(swap)
            .unwrap()
            .point_difference_cohomology();
        assert_eq!(h, vec![FgAbGroup::free(1), FgAbGroup::free(1)]);
    }

    #[test]
    fn s3_orbits_are_conjugacy_classes() {
        let s3 = FiniteSigmaGroup::symmetric(3).unwrap();
        let orbits = s3.as_orbits();
        let mut sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
        assert_eq!(orbits[0], vec![s3.identity()]);
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn cyclic_orbits() {
        assert_eq!(FiniteSigmaGroup::cyclic(5, 1).unwrap().as_orbits().len(), 5);
        assert_eq!(FiniteSigmaGroup::cyclic(5, 2).unwrap().as_orbits().len(), 1);
    }

    #[test]
    fn rejects_bad_tables() {
        let labels: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        let bad_endo =
            FiniteSigmaGroup::from_fn(labels.clone(), |a, b| (a + b) % 3, |a| (a + 1) % 3, 10);
        assert!(bad_endo.is_err());
        let not_group = FiniteSigmaGroup::from_fn(labels, |a, b| (a * b) % 3, |a| a, 10);
        assert!(not_group.is_err());
        assert!(FiniteSigmaGroup::symmetric(4)
                .unwrap()
                .with_endo((0..24).collect()).is_ok());
    }

    #[test]
    fn tabulated_module_orbits_match_coinvariants() {
        let g = FgAbGroup::new(0, vec![Int::from(2), Int::from(4)]).unwrap();
        let m = SigmaModule::scalar(&g, 3);
        let (t, _) = tabulate_module(&m).unwrap();
        assert_eq!(
            Int::from(t.as_orbits().len()),
            m.coinvariants().0.order().unwrap()
        );
    }
}
