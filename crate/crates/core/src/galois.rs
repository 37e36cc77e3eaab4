//! Difference Galois cohomology over finite fields `(F_{p^m}, x ↦ x^{p^r})`.
//!
//! Torsor classifications come in two independent flavours here: a closed form
//! (a cokernel or an exact sequence) and a brute-force orbit enumeration. Callers
//! compare them; neither is derived from the other.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::ToPrimitive;

use crate::complex::{ChainMap, CochainComplex, SesReport, TwoRowBicomplex};
use crate::error::{Error, Result};
use crate::field::{gcd, Elem, FiniteField};
use crate::linalg::{
    coker_of_hom, cokernel, tabulate_abelian_group, Cokernel, FgAbGroup, GroupHom, Int, IntMatrix,
};
use crate::sigma::SigmaModule;

/// Default budget for brute-force enumerations.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 100_000_000;

/// A finite field with the endomorphism `s(x) = x^{p^r}`, `0 ≤ r < m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceField {
    field: FiniteField,
    r: u32,
}

impl DifferenceField {
    /// `r` is reduced modulo the extension degree.
    pub fn new(field: FiniteField, r: u32) -> Self {
        let r = r % field.m();
        DifferenceField { field, r }
    }

    /// `(F_{p^m}, Frob^r)` with the default modulus.
    pub fn frobenius(p: u64, m: u32, r: u32) -> Result<Self> {
        Ok(Self::new(FiniteField::new(p, m)?, r))
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `p^r`, the exponent of `s`.
    pub fn exponent(&self) -> u64 {
        self.field.p().pow(self.r)
    }

    pub fn s(&self, x: Elem) -> Elem {
        self.field.frobenius(x, self.r)
    }

    fn unit_group(&self) -> FgAbGroup {
        FgAbGroup::cyclic(self.field.order() - 1)
    }
}

// ---------------------------------------------------------------------------
// Matrices over the field

/// Square matrix over a finite field, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    n: usize,
    entries: Vec<Elem>,
}

impl FieldMatrix {
    pub fn new(k: &FiniteField, n: usize, entries: Vec<Elem>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::invalid(format!(
                "{n}x{n} matrix needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|&&e| e >= k.order()) {
            return Err(Error::invalid(format!(
                "entry {e} is not an element of F_{}",
                k.order()
            )));
        }
        Ok(FieldMatrix { n, entries })
    }

    pub fn scalar(n: usize, a: Elem) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = a;
        }
        FieldMatrix { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.n + j]
    }

    pub fn mul(&self, k: &FiniteField, other: &FieldMatrix) -> FieldMatrix {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for l in 0..n {
                    acc = k.add(acc, k.mul(self.get(i, l), other.get(l, j)));
                }
                entries[i * n + j] = acc;
            }
        }
        FieldMatrix { n, entries }
    }

    /// Entrywise `s`.
    pub fn apply_endo(&self, ks: &DifferenceField) -> FieldMatrix {
        FieldMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&x| ks.s(x)).collect(),
        }
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self, k: &FiniteField) -> Option<FieldMatrix> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r * n + col] != 0)?;
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
                inv.swap(pivot * n + j, col * n + j);
            }
            let scale = k.inv(a[col * n + col]).unwrap();
            for j in 0..n {
                a[col * n + j] = k.mul(a[col * n + j], scale);
                inv[col * n + j] = k.mul(inv[col * n + j], scale);
            }
            for r in 0..n {
                let f = a[r * n + col];
                if r == col || f == 0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = k.sub(a[r * n + j], k.mul(f, a[col * n + j]));
                    inv[r * n + j] = k.sub(inv[r * n + j], k.mul(f, inv[col * n + j]));
                }
            }
        }
        Some(FieldMatrix { n, entries: inv })
    }

    pub fn is_invertible(&self, k: &FiniteField) -> bool {
        self.inverse(k).is_some()
    }

    /// Entries as base-`q` digits, first entry least significant.
    pub fn encode(&self, q: u64) -> u64 {
        self.entries.iter().rev().fold(0, |acc, &e| acc * q + e)
    }

    pub fn decode(n: usize, q: u64, mut code: u64) -> FieldMatrix {
        let entries = (0..n * n)
            .map(|_| {
                let e = code % q;
                code /= q;
                e
            })
            .collect();
        FieldMatrix { n, entries }
    }
}

fn checked_count(q: u64, exponent: usize, what: &str, bound: u64) -> Result<u64> {
    u32::try_from(exponent)
        .ok()
        .and_then(|e| q.checked_pow(e))
        .filter(|&c| c <= bound)
        .ok_or_else(|| Error::bound(what, format!("{q}^{exponent}"), bound))
}

// ---------------------------------------------------------------------------
// Multiplicative group

/// `coker(u ↦ s(u)·u⁻¹)` on `k*`, computed on discrete logarithms.
#[derive(Clone, Debug)]
pub struct MultiplicativeCoinvariants {
    pub group: FgAbGroup,
    /// One field element per class, in the group's enumeration order.
    pub representatives: Vec<Elem>,
    proj: GroupHom,
}

impl MultiplicativeCoinvariants {
    /// Class coordinates of a nonzero element.
    pub fn class_of(&self, k: &FiniteField, a: Elem) -> Option<Vec<Int>> {
        let l = k.dlog(a)?;
        Some(self.proj.apply_coords(&log_coords(self.proj.source(), l)))
    }
}

/// Coordinates of a discrete logarithm in `ℤ/(q−1)`, which has no generator when `q = 2`.
fn log_coords(units: &FgAbGroup, l: u64) -> Vec<Int> {
    if units.ngens() == 0 {
        Vec::new()
    } else {
        vec![Int::from(l)]
    }
}

pub fn as_multiplicative(ks: &DifferenceField) -> Result<MultiplicativeCoinvariants> {
    let k = ks.field();
    let units = ks.unit_group();
    // On logarithms u ↦ s(u)/u is multiplication by p^r − 1.
    let twist = GroupHom::scalar(&units, ks.exponent() as i64 - 1);
    let (group, proj) = coker_of_hom(&twist);
    let order = group.order().and_then(|o| o.to_u64()).unwrap_or(0);
    let mut reps: HashMap<Vec<Int>, Elem> = HashMap::new();
    for i in 0..order {
        let c = proj.apply_coords(&log_coords(&units, i));
        reps.entry(c).or_insert_with(|| k.exp(i));
    }
    let representatives = group
        .enumerate()?
        .map(|e| reps[e.coords()])
        .collect();
    Ok(MultiplicativeCoinvariants {
        group,
        representatives,
        proj,
    })
}

/// `Pic_s(k)`: invertible difference modules are `(k, a·s)`, so this is the
/// multiplicative Artin–Schreier group.
pub fn pic_sigma_field(ks: &DifferenceField) -> Result<FgAbGroup> {
    Ok(as_multiplicative(ks)?.group)
}

/// Some `C ∈ GLₙ(k)` with `B·C = s(C)·A`, the least in encoding order for `n > 1`,
/// or `None` when `(kⁿ, A·s)` and `(kⁿ, B·s)` are not isomorphic.
pub fn difference_module_iso(
    ks: &DifferenceField,
    a: &FieldMatrix,
    b: &FieldMatrix,
    bound: u64,
) -> Result<Option<FieldMatrix>> {
    let k = ks.field();
    if a.n() != b.n() || a.n() == 0 {
        return Err(Error::invalid("matrices must be square of the same positive size"));
    }
    if !a.is_invertible(k) || !b.is_invertible(k) {
        return Err(Error::invalid("difference module matrices must be invertible"));
    }
    let n = a.n();
    if n == 1 {
        // b·c = c^{p^r}·a, i.e. c^{p^r − 1} = b/a; solve on logarithms.
        let q1 = k.order() - 1;
        let target = k.dlog(k.div(b.get(0, 0), a.get(0, 0)).unwrap()).unwrap();
        let e = (ks.exponent() - 1) % q1;
        let d = gcd(e, q1);
        if !target.is_multiple_of(d) {
            return Ok(None);
        }
        let modulus = q1 / d;
        let t = if modulus == 1 {
            0
        } else {
            let inv = mod_inverse(e / d, modulus).expect("coprime after dividing by the gcd");
            ((target / d) as u128 * inv as u128 % modulus as u128) as u64
        };
        let c = FieldMatrix::scalar(1, k.exp(t));
        debug_assert_eq!(b.mul(k, &c), c.apply_endo(ks).mul(k, a));
        return Ok(Some(c));
    }
    let total = checked_count(k.order(), n * n, "matrices to search", bound)?;
    for code in 0..total {
        let c = FieldMatrix::decode(n, k.order(), code);
        if b.mul(k, &c) == c.apply_endo(ks).mul(k, a) && c.is_invertible(k) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// Isomorphism classes of rank-one difference modules `(k, a·s)`, found by
/// applying every `c ∈ k*` to every `a`. Classes are sorted lists of `a`,
/// the class of 1 first.
pub fn rank_one_module_classes(ks: &DifferenceField, bound: u64) -> Result<Vec<Vec<Elem>>> {
    let k = ks.field();
    let q = k.order();
    let work = (q - 1).checked_mul(q - 1).filter(|&w| w <= bound);
    if work.is_none() {
        return Err(Error::bound("rank-one module pairs", format!("({q}-1)^2"), bound));
    }
    let mut label = vec![usize::MAX; q as usize];
    let mut classes: Vec<Vec<Elem>> = Vec::new();
    for a in k.units() {
        if label[a as usize] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        for c in k.units() {
            // (k, a·s) ≅ (k, b·s) via c exactly when b = s(c)·a/c.
            let b = k.div(k.mul(ks.s(c), a), c).unwrap();
            if label[b as usize] == usize::MAX {
                label[b as usize] = id;
                members.push(b);
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    Ok(classes)
}

/// Solution of `x^{p−1} = rep` in an extension of `k`, showing that the class of
/// `rep` in `𝔾ₘ(k)_s` (with `s = Frob_p`) dies in a finite extension.
#[derive(Clone, Debug)]
pub struct LinearlyClosedWitness {
    /// Degree `e` of the extension over `k`.
    pub degree: u32,
    pub extension: FiniteField,
    /// Image of `rep` in the extension.
    pub embedded_rep: Elem,
    pub solution: Elem,
}

pub fn linearly_closed_witness(ks: &DifferenceField, rep: Elem) -> Result<LinearlyClosedWitness> {
    let k = ks.field();
    if ks.r() != 1 % k.m() {
        return Err(Error::invalid("the witness search needs s = Frob_p"));
    }
    if rep == 0 || rep >= k.order() {
        return Err(Error::invalid("class representative must be a nonzero field element"));
    }
    let p = k.p();
    for e in 1..p.max(2) as u32 {
        let big = FiniteField::new(p, k.m() * e)?;
        let root = k
            .embedding_root(&big)
            .expect("a field embeds in each of its extensions");
        let y = k.embed(&big, root, rep);
        let l = big.dlog(y).unwrap();
        // x^{p−1} = y is solvable iff p − 1 divides log y, since p − 1 divides |big*|.
        if l % (p - 1) == 0 {
            let x = big.exp(l / (p - 1));
            if big.pow(x, p - 1) != y {
                return Err(Error::invalid("witness failed verification"));
            }
            return Ok(LinearlyClosedWitness {
                degree: e,
                extension: big,
                embedded_rep: y,
                solution: x,
            });
        }
    }
    Err(Error::Unsupported(format!(
        "no solution in extensions of degree below {p}"
    )))
}

// ---------------------------------------------------------------------------
// Additive group with a recurrence

/// An `F_p`-linear operator whose cokernel is `H¹_σ(k, ·)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdditiveOperator {
    /// `(λ₀, …, λ_{n−1})` defining `σ(a₁, …, aₙ) = (a₂, …, aₙ, λ₀a₁ + … + λ_{n−1}aₙ)`
    /// on `𝔾ₐⁿ`.
    Recurrence(Vec<Elem>),
    /// An explicit `d×d` matrix over `F_p`.
    Matrix(Vec<Vec<u64>>),
}

#[derive(Clone, Debug)]
pub struct AdditiveOperatorSpec {
    pub field: DifferenceField,
    pub operator: AdditiveOperator,
}

impl AdditiveOperatorSpec {
    pub fn recurrence(field: DifferenceField, lambdas: Vec<Elem>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::invalid("a recurrence needs at least one coefficient"));
        }
        if lambdas.iter().any(|&l| l >= field.field().order()) {
            return Err(Error::invalid("recurrence coefficients must be field elements"));
        }
        Ok(AdditiveOperatorSpec {
            field,
            operator: AdditiveOperator::Recurrence(lambdas),
        })
    }

    pub fn matrix(field: DifferenceField, rows: Vec<Vec<u64>>) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::invalid("operator matrix must be square"));
        }
        Ok(AdditiveOperatorSpec {
            field,
            operator: AdditiveOperator::Matrix(rows),
        })
    }

    /// `L(x) = sⁿ(x) − Σ λᵢ sⁱ(x)` on `k`, for the recurrence form.
    ///
    /// A translation by `v` is an isomorphism from the torsor with `λ₁` to the one
    /// with `λ₂` iff `σ(v) − s(v) = (λ₁ − λ₂)eₙ`. The first `n − 1` coordinates force
    /// `v_{i+1} = s(v_i)`, so `vᵢ = s^{i−1}(x)` and the last one reads `−L(x) = λ₁ − λ₂`.
    pub fn apply(&self, x: Elem) -> Option<Elem> {
        let AdditiveOperator::Recurrence(lambdas) = &self.operator else {
            return None;
        };
        let ks = &self.field;
        let k = ks.field();
        let mut powers = Vec::with_capacity(lambdas.len() + 1);
        let mut y = x;
        for _ in 0..=lambdas.len() {
            powers.push(y);
            y = ks.s(y);
        }
        let mut acc = powers[lambdas.len()];
        for (l, &si) in lambdas.iter().zip(&powers) {
            acc = k.sub(acc, k.mul(*l, si));
        }
        Some(acc)
    }

    /// The operator as an `F_p` matrix.
    pub fn fp_matrix(&self) -> Vec<Vec<u64>> {
        match &self.operator {
            AdditiveOperator::Matrix(rows) => rows.clone(),
            AdditiveOperator::Recurrence(_) => self
                .field
                .field()
                .fp_matrix(|x| self.apply(x).unwrap()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AdditiveCohomology {
    pub group: FgAbGroup,
    coker: Cokernel,
    p: u64,
}

impl AdditiveCohomology {
    /// Class of an `F_p` coordinate vector.
    pub fn class_of_coords(&self, v: &[u64]) -> Vec<Int> {
        let v: Vec<Int> = v.iter().map(|&x| Int::from(x)).collect();
        self.coker.project(&v)
    }

    /// Class of a field element via its digits.
    pub fn class_of(&self, k: &FiniteField, x: Elem) -> Vec<Int> {
        debug_assert_eq!(k.p(), self.p);
        self.class_of_coords(&k.digits(x))
    }
}

pub fn h1_sigma_ga(spec: &AdditiveOperatorSpec) -> Result<AdditiveCohomology> {
    let p = spec.field.field().p();
    let rows = spec.fp_matrix();
    let d = rows.len();
    let l = IntMatrix::from_rows(
        &rows
            .iter()
            .map(|r| r.iter().map(|&x| (x % p) as i64).collect())
            .collect::<Vec<Vec<i64>>>(),
    );
    let l = if d == 0 { IntMatrix::zeros(0, 0) } else { l };
    let relations = l.hstack(&IntMatrix::identity(d).scale(&Int::from(p)));
    let coker = cokernel(&relations);
    Ok(AdditiveCohomology {
        group: coker.group.clone(),
        coker,
        p,
    })
}

/// Labels `λ ↦ class index` (classes numbered in order of first appearance)
/// via the cokernel of the operator.
pub fn classify_ga_torsors(spec: &AdditiveOperatorSpec, lambdas: &[Elem]) -> Result<Vec<usize>> {
    let k = spec.field.field();
    if let AdditiveOperator::Matrix(rows) = &spec.operator {
        if rows.len() != k.m() as usize {
            return Err(Error::invalid(
                "torsors are indexed by field elements; operator must be m×m",
            ));
        }
    }
    let h1 = h1_sigma_ga(spec)?;
    Ok(first_appearance_labels(lambdas.iter().map(|&l| h1.class_of(k, l))))
}

/// The same labelling by searching all translations `v ∈ kⁿ` for the shifts
/// `σ(v) − s(v) = d·eₙ`; two torsors are isomorphic iff `λ₁ − λ₂` is such a `d`.
pub fn classify_ga_torsors_by_search(
    spec: &AdditiveOperatorSpec,
    lambdas: &[Elem],
    bound: u64,
) -> Result<Vec<usize>> {
    let AdditiveOperator::Recurrence(coeffs) = &spec.operator else {
        return Err(Error::Unsupported(
            "torsor search needs the recurrence form".into(),
        ));
    };
    let ks = &spec.field;
    let k = ks.field();
    let n = coeffs.len();
    let total = checked_count(k.order(), n, "translations", bound)?;
    let mut shifts: HashSet<Elem> = HashSet::new();
    let mut v = vec![0; n];
    for code in 0..total {
        let mut c = code;
        for x in v.iter_mut() {
            *x = c % k.order();
            c /= k.order();
        }
        // σ(v)ᵢ − s(vᵢ) for i < n must vanish.
        if (0..n - 1).any(|i| v[i + 1] != ks.s(v[i])) {
            continue;
        }
        let mut last = 0;
        for (l, &x) in coeffs.iter().zip(&v) {
            last = k.add(last, k.mul(*l, x));
        }
        shifts.insert(k.sub(last, ks.s(v[n - 1])));
    }
    let mut labels = Vec::with_capacity(lambdas.len());
    let mut reps: Vec<Elem> = Vec::new();
    for &l in lambdas {
        match reps.iter().position(|&r| shifts.contains(&k.sub(r, l))) {
            Some(i) => labels.push(i),
            None => {
                labels.push(reps.len());
                reps.push(l);
            }
        }
    }
    Ok(labels)
}

fn first_appearance_labels<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<usize> {
    let mut seen: HashMap<K, usize> = HashMap::new();
    keys.map(|key| {
        let next = seen.len();
        *seen.entry(key).or_insert(next)
    })
    .collect()
}

// ---------------------------------------------------------------------------
// μ₂ torsors

/// Difference `μ₂`-torsors: pairs `(a, b)` with `s(a) = a·b²`.
///
/// The torsor of `(a, b)` is `x² = a` with `σ(x) = b·x`. Scaling `x ↦ c·x` carries
/// it to `(c²a, s(c)·b/c)`, so `(a₁, b₁) ~ (a₂, b₂)` iff some `c ∈ k*` has
/// `a₂ = c²a₁` and `b₂·c = s(c)·b₁`.
#[derive(Clone, Debug)]
pub struct Mu2Report {
    pub pairs: Vec<(Elem, Elem)>,
    /// Indices into `pairs`; the class of `(1, 1)` first, then by least member.
    pub classes: Vec<Vec<usize>>,
    /// The classes under componentwise multiplication.
    pub group: FgAbGroup,
    /// `μ₂(k)_s`.
    pub ses_left: FgAbGroup,
    /// `(k*/(k*)²)^s`.
    pub ses_right: FgAbGroup,
}

impl Mu2Report {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// `|left|·|right|` from the exact sequence.
    pub fn ses_order(&self) -> Int {
        self.ses_left.order().unwrap() * self.ses_right.order().unwrap()
    }

    pub fn counts_agree(&self) -> bool {
        Int::from(self.classes.len()) == self.ses_order()
            && self.group.order() == Some(self.ses_order())
    }
}

pub fn h1_sigma_mu2(ks: &DifferenceField, bound: u64) -> Result<Mu2Report> {
    let k = ks.field();
    if k.p() == 2 {
        return Err(Error::Unsupported(
            "μ₂ is not étale in characteristic 2".into(),
        ));
    }
    let q = k.order();
    let work = (q - 1).checked_mul(2 * (q - 1)).filter(|&w| w <= bound);
    if work.is_none() {
        return Err(Error::bound("μ₂ pair orbits", format!("2({q}-1)^2"), bound));
    }

    let mut pairs = Vec::new();
    for a in k.units() {
        let ratio = k.div(ks.s(a), a).unwrap();
        for b in k.units() {
            if k.mul(b, b) == ratio {
                pairs.push((a, b));
            }
        }
    }
    let index: HashMap<(Elem, Elem), usize> =
        pairs.iter().enumerate().map(|(i, &pr)| (pr, i)).collect();
    let one = index[&(1, 1)];
    let mut label = vec![usize::MAX; pairs.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in std::iter::once(one).chain(0..pairs.len()) {
        if label[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let (a, b) = pairs[start];
        let mut members = Vec::new();
        for c in k.units() {
            let a2 = k.mul(k.mul(c, c), a);
            let b2 = k.div(k.mul(ks.s(c), b), c).unwrap();
            let j = index[&(a2, b2)];
            if label[j] == usize::MAX {
                label[j] = id;
                members.push(j);
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    let reps: Vec<(Elem, Elem)> = classes.iter().map(|c| pairs[c[0]]).collect();
    let tab = tabulate_abelian_group(classes.len(), 0, |x, y| {
        let (a1, b1) = reps[x];
        let (a2, b2) = reps[y];
        label[index[&(k.mul(a1, a2), k.mul(b1, b2))]]
    })?;

    // μ₂ = {±1} and k*/(k*)² are both ℤ/2 on logarithms; s acts by ×p^r.
    let e = ks.exponent() as i64;
    let mu2 = SigmaModule::scalar(&FgAbGroup::cyclic(2), e);
    let (squares_quotient, _) = coker_of_hom(&GroupHom::scalar(&ks.unit_group(), 2));
    let quotient = SigmaModule::scalar(&squares_quotient, e);
    Ok(Mu2Report {
        pairs,
        classes,
        group: tab.group,
        ses_left: mu2.coinvariants().0,
        ses_right: quotient.invariants().0,
    })
}

// ---------------------------------------------------------------------------
// GLₙ

/// Orbits of `X ↦ s(C)·X·C⁻¹` on `GLₙ(k)`.
#[derive(Clone, Debug)]
pub struct GlnOrbits {
    pub group_order: u64,
    /// Least member (in encoding order) of each orbit; the identity's orbit first.
    pub representatives: Vec<FieldMatrix>,
    pub sizes: Vec<u64>,
}

impl GlnOrbits {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

pub fn as_gln(ks: &DifferenceField, n: usize, bound: u64) -> Result<GlnOrbits> {
    let k = ks.field();
    let q = k.order();
    if n == 0 {
        return Err(Error::invalid("matrix size must be positive"));
    }
    let total = checked_count(q, n * n, "matrices", bound)?;
    let elems: Vec<FieldMatrix> = (0..total)
        .map(|c| FieldMatrix::decode(n, q, c))
        .filter(|m| m.is_invertible(k))
        .collect();
    let index: HashMap<u64, usize> = elems
        .iter()
        .enumerate()
        .map(|(i, m)| (m.encode(q), i))
        .collect();

    // Elementary matrices with entries in an F_p-basis together with diag(g, 1, …, 1)
    // generate GLₙ(k).
    let mut gens = vec![{
        let mut d = FieldMatrix::identity(n);
        d.entries[0] = k.generator();
        d
    }];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for t in 0..k.m() {
                let mut e = FieldMatrix::identity(n);
                e.entries[i * n + j] = k.p().pow(t);
                gens.push(e);
            }
        }
    }
    let moves: Vec<(FieldMatrix, FieldMatrix)> = gens
        .iter()
        .map(|c| (c.apply_endo(ks), c.inverse(k).unwrap()))
        .collect();

    let id = index[&FieldMatrix::identity(n).encode(q)];
    let mut label = vec![usize::MAX; elems.len()];
    let mut representatives = Vec::new();
    let mut sizes = Vec::new();
    for start in std::iter::once(id).chain(0..elems.len()) {
        if label[start] != usize::MAX {
            continue;
        }
        let orbit = representatives.len();
        label[start] = orbit;
        let mut least = start;
        let mut size = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for (sc, c_inv) in &moves {
                let y = sc.mul(k, &elems[x]).mul(k, c_inv);
                let j = index[&y.encode(q)];
                if label[j] == usize::MAX {
                    label[j] = orbit;
                    least = least.min(j);
                    size += 1;
                    queue.push_back(j);
                }
            }
        }
        representatives.push(elems[least].clone());
        sizes.push(size);
    }
    Ok(GlnOrbits {
        group_order: elems.len() as u64,
        representatives,
        sizes,
    })
}

// ---------------------------------------------------------------------------
// Cyclic Galois cohomology at a finite level

/// A finite `ℤ/N`-module `M` (generator acting by `γ`) with a difference map `σ_M`
/// commuting with `γ`.
#[derive(Clone, Debug)]
pub struct CyclicGaloisData {
    level: usize,
    gamma: GroupHom,
    sigma: GroupHom,
}

impl CyclicGaloisData {
    pub fn new(level: usize, gamma: GroupHom, sigma: GroupHom) -> Result<Self> {
        let m = gamma.source().clone();
        if level == 0 {
            return Err(Error::invalid("Galois level must be positive"));
        }
        if gamma.target() != &m || sigma.source() != &m || sigma.target() != &m {
            return Err(Error::invalid("γ and σ_M must be endomorphisms of one module"));
        }
        if !m.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        let mut power = GroupHom::identity(&m);
        for _ in 0..level {
            power = gamma.compose(&power);
        }
        if power != GroupHom::identity(&m) {
            return Err(Error::invalid(format!("γ^{level} is not the identity")));
        }
        if sigma.compose(&gamma) != gamma.compose(&sigma) {
            return Err(Error::invalid("σ_M does not commute with γ"));
        }
        Ok(CyclicGaloisData {
            level,
            gamma,
            sigma,
        })
    }

    /// `M = ℤ/2` with trivial actions at level 2, the model of `μ₂` over a field
    /// of odd characteristic with `s` fixing `−1`.
    pub fn mu2_model() -> Self {
        let m = FgAbGroup::cyclic(2);
        Self::new(2, GroupHom::identity(&m), GroupHom::identity(&m)).expect("valid data")
    }

    /// `F_{q^N}*` on logarithms, with `γ = Frob_q` and `σ_M = Frob^r`, i.e. `×q` and `×p^r`.
    pub fn multiplicative(ks: &DifferenceField, level: usize) -> Result<Self> {
        let q = ks.field().order();
        let big = u32::try_from(level)
            .ok()
            .and_then(|n| q.checked_pow(n))
            .ok_or_else(|| Error::bound("extension order", format!("{q}^{level}"), u64::MAX))?;
        let m = FgAbGroup::cyclic(big - 1);
        Self::new(
            level,
            GroupHom::scalar(&m, Int::from(q)),
            GroupHom::scalar(&m, Int::from(ks.exponent())),
        )
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn module(&self) -> &FgAbGroup {
        self.gamma.source()
    }

    pub fn gamma(&self) -> &GroupHom {
        &self.gamma
    }

    pub fn sigma(&self) -> &GroupHom {
        &self.sigma
    }

    /// `1 + γ + … + γ^{N−1}`.
    pub fn norm(&self) -> GroupHom {
        let m = self.module();
        let mut acc = GroupHom::zero(m, m);
        let mut power = GroupHom::identity(m);
        for _ in 0..self.level {
            acc = acc.add(&power);
            power = self.gamma.compose(&power);
        }
        acc
    }

    /// `M → M → M → …` with differentials alternating `γ − 1` and the norm.
    pub fn periodic_complex(&self, len: usize) -> CochainComplex {
        let m = self.module();
        let gamma_minus_one = self.gamma.sub(&GroupHom::identity(m));
        let norm = self.norm();
        let diffs = (0..len.saturating_sub(1))
            .map(|k| if k % 2 == 0 { gamma_minus_one.clone() } else { norm.clone() })
            .collect();
        CochainComplex::new(vec![m.clone(); len], diffs).expect("(γ − 1)·N = 0")
    }

    fn bicomplex(&self, len: usize) -> TwoRowBicomplex {
        let c = self.periodic_complex(len);
        let v = GroupHom::identity(self.module()).sub(&self.sigma);
        let vertical = ChainMap::new(c.clone(), c, vec![v; len]).expect("σ_M commutes with γ");
        TwoRowBicomplex::new(vertical)
    }
}

/// `Hⁿ(ℤ/N, M)` from the periodic resolution.
pub fn cyclic_galois_cohomology(data: &CyclicGaloisData, n: usize) -> FgAbGroup {
    data.periodic_complex(n + 2).cohomology_at(n).group().clone()
}

#[derive(Clone, Debug)]
pub struct DifferenceGaloisCohomology {
    pub group: FgAbGroup,
    /// `0 → Hⁿ⁻¹(M)_σ → Hⁿ_σ → Hⁿ(M)^σ → 0`.
    pub ses: SesReport,
}

/// `Hⁿ_σ(ℤ/N, M)`: total cohomology of the cone of `id − σ_M` on the periodic complex.
pub fn difference_galois_cohomology(
    data: &CyclicGaloisData,
    n: usize,
) -> Result<DifferenceGaloisCohomology> {
    let bc = data.bicomplex(n + 2);
    let ses = bc
        .extract_ses()?
        .into_iter()
        .nth(n)
        .expect("the truncation keeps degree n");
    Ok(DifferenceGaloisCohomology {
        group: ses.middle.clone(),
        ses,
    })
}

/// Order as a `u64`, when finite and small enough.
pub fn order_of(g: &FgAbGroup) -> Option<u64> {
    g.order().and_then(|o| o.to_u64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn df(p: u64, m: u32, r: u32) -> DifferenceField {
        DifferenceField::frobenius(p, m, r).unwrap()
    }

    #[test]
    fn multiplicative_coinvariants() {
        assert!(as_multiplicative(&df(2, 2, 1)).unwrap().group.is_trivial());
        assert_eq!(as_multiplicative(&df(3, 2, 1)).unwrap().group.notation(), "Z/2");
        assert_eq!(as_multiplicative(&df(7, 1, 0)).unwrap().group.notation(), "Z/6");
        assert!(pic_sigma_field(&df(2, 3, 1)).unwrap().is_trivial());
        let f9 = df(3, 2, 1);
        let mc = as_multiplicative(&f9).unwrap();
        let classes: HashSet<_> = mc
            .representatives
            .iter()
            .map(|&a| mc.class_of(f9.field(), a).unwrap())
            .collect();
        assert_eq!(classes.len(), 2);
    }

    #[test]
    fn rank_one_isomorphism_matches_classes() {
        let ks = df(3, 2, 1);
        let k = ks.field();
        let g = k.generator();
        let one = FieldMatrix::identity(1);
        let ga = FieldMatrix::scalar(1, g);
        assert!(difference_module_iso(&ks, &ga, &one, 10).unwrap().is_none());
        // g·x^{p−1} lies in the class of g.
        let x = k.exp(5);
        let b = FieldMatrix::scalar(1, k.mul(g, k.pow(x, 2)));
        let c = difference_module_iso(&ks, &ga, &b, 10).unwrap().unwrap();
        assert_eq!(b.mul(k, &c), c.apply_endo(&ks).mul(k, &ga));
        assert_eq!(rank_one_module_classes(&ks, 1 << 20).unwrap().len(), 2);
    }

    #[test]
    fn two_by_two_iso_by_search() {
        let ks = df(2, 1, 0);
        let k = ks.field();
        let a = FieldMatrix::new(k, 2, vec![1, 1, 0, 1]).unwrap();
        let b = FieldMatrix::new(k, 2, vec![1, 0, 1, 1]).unwrap();
        let c = difference_module_iso(&ks, &a, &b, 1000).unwrap().unwrap();
        assert_eq!(b.mul(k, &c), c.apply_endo(&ks).mul(k, &a));
        assert!(difference_module_iso(&ks, &a, &a, 1000).unwrap().is_some());
        let swap = FieldMatrix::new(k, 2, vec![0, 1, 1, 0]).unwrap();
        let rot = FieldMatrix::new(k, 2, vec![0, 1, 1, 1]).unwrap();
        assert!(difference_module_iso(&ks, &swap, &rot, 1000).unwrap().is_none());
    }

    #[test]
    fn witnesses() {
        let w = linearly_closed_witness(&df(3, 2, 1), 1).unwrap();
        assert_eq!((w.degree, w.solution), (1, 1));
        let ks = df(3, 2, 1);
        let w = linearly_closed_witness(&ks, ks.field().generator()).unwrap();
        assert_eq!(w.degree, 2);
        assert_eq!(w.extension.order(), 81);
        assert_eq!(w.extension.pow(w.solution, 2), w.embedded_rep);
    }

    #[test]
    fn additive_torsors() {
        let f4 = df(2, 2, 1);
        // L(x) = x² − x has kernel F₂, so the cokernel has order 2.
        let spec = AdditiveOperatorSpec::recurrence(f4.clone(), vec![1]).unwrap();
        assert_eq!(h1_sigma_ga(&spec).unwrap().group.notation(), "Z/2");
        // With s = id the torsors a ↦ a + λ never become isomorphic.
        let f5 = df(5, 1, 0);
        let spec = AdditiveOperatorSpec::recurrence(f5.clone(), vec![1]).unwrap();
        assert_eq!(h1_sigma_ga(&spec).unwrap().group.order(), Some(Int::from(5)));
        let spec = AdditiveOperatorSpec::recurrence(f5, vec![0]).unwrap();
        assert!(h1_sigma_ga(&spec).unwrap().group.is_trivial());

        let ks = df(2, 3, 1);
        let spec = AdditiveOperatorSpec::recurrence(ks, vec![3, 0, 5]).unwrap();
        let all: Vec<Elem> = (0..8).collect();
        assert_eq!(
            classify_ga_torsors(&spec, &all).unwrap(),
            classify_ga_torsors_by_search(&spec, &all, 1 << 20).unwrap()
        );
    }

    #[test]
    fn mu2_counts() {
        for (p, m, r) in [(5, 1, 0), (3, 1, 0), (3, 2, 1), (7, 1, 0)] {
            let rep = h1_sigma_mu2(&df(p, m, r), 1 << 20).unwrap();
            assert_eq!(rep.class_count(), 4, "F_{p}^{m}, r = {r}");
            assert!(rep.counts_agree());
        }
        assert_eq!(h1_sigma_mu2(&df(5, 1, 0), 1000).unwrap().pairs.len(), 8);
        assert!(matches!(
            h1_sigma_mu2(&df(2, 2, 1), 1000),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn gln_orbits() {
        assert_eq!(as_gln(&df(2, 1, 0), 2, 1000).unwrap().count(), 3);
        assert_eq!(as_gln(&df(3, 1, 0), 1, 1000).unwrap().count(), 2);
        let ks = df(3, 2, 1);
        assert_eq!(
            as_gln(&ks, 1, 1000).unwrap().count(),
            as_multiplicative(&ks).unwrap().representatives.len()
        );
        for (ks, n) in [(df(2, 2, 1), 2), (df(3, 1, 0), 2), (df(2, 1, 0), 3)] {
            let orbits = as_gln(&ks, n, 1 << 20).unwrap();
            assert_eq!(orbits.count(), orbits_under_all_of_gln(&ks, n));
            assert_eq!(orbits.sizes.iter().sum::<u64>(), orbits.group_order);
        }
    }

    /// Orbit count applying every `C`, not just generators.
    fn orbits_under_all_of_gln(ks: &DifferenceField, n: usize) -> usize {
        let k = ks.field();
        let q = k.order();
        let elems: Vec<FieldMatrix> = (0..q.pow((n * n) as u32))
            .map(|c| FieldMatrix::decode(n, q, c))
            .filter(|m| m.is_invertible(k))
            .collect();
        let inverses: Vec<FieldMatrix> = elems.iter().map(|c| c.inverse(k).unwrap()).collect();
        let mut seen: HashSet<FieldMatrix> = HashSet::new();
        let mut count = 0;
        for x in &elems {
            if seen.contains(x) {
                continue;
            }
            count += 1;
            for (c, c_inv) in elems.iter().zip(&inverses) {
                seen.insert(c.apply_endo(ks).mul(k, x).mul(k, c_inv));
            }
        }
        count
    }

    #[test]
    fn cyclic_cohomology() {
        let f3 = df(3, 1, 0);
        let h90 = CyclicGaloisData::multiplicative(&f3, 2).unwrap();
        assert!(cyclic_galois_cohomology(&h90, 1).is_trivial());

        let m = FgAbGroup::from_moduli(&[Int::from(4), Int::from(2)]);
        let one = CyclicGaloisData::new(1, GroupHom::identity(&m), GroupHom::scalar(&m, 3)).unwrap();
        assert_eq!(cyclic_galois_cohomology(&one, 0), m);
        assert!(cyclic_galois_cohomology(&one, 1).is_trivial());
        assert!(cyclic_galois_cohomology(&one, 2).is_trivial());
        let point = SigmaModule::new(GroupHom::scalar(&m, 3)).unwrap();
        for n in 0..2 {
            let d = difference_galois_cohomology(&one, n).unwrap();
            assert_eq!(d.group, point.point_difference_cohomology()[n]);
        }

        let mu2 = CyclicGaloisData::mu2_model();
        for n in 0..4 {
            assert_eq!(cyclic_galois_cohomology(&mu2, n).notation(), "Z/2");
        }
        let d = difference_galois_cohomology(&mu2, 1).unwrap();
        assert!(d.ses.exact);
        assert_eq!(d.group.order(), Some(Int::from(4)));
    }

    #[test]
    fn invalid_galois_data() {
        let m = FgAbGroup::cyclic(7);
        assert!(CyclicGaloisData::new(2, GroupHom::scalar(&m, 2), GroupHom::identity(&m)).is_err());
        assert!(CyclicGaloisData::new(3, GroupHom::scalar(&m, 2), GroupHom::identity(&m)).is_ok());
    }
}
