//! Difference Čech cohomology on finite covers.
//!
//! A cover is described by two nerves: `nerve_u` for the cover `U` and
//! `nerve_v` for the intersected cover `V = {U_i ∩ σ⁻¹U_j}`, with vertex maps
//! `res_map : V → U` (the `i` index) and `sigma_map : V → U` (the `j` index).
//! Constant coefficients `(A, f)` give the two Čech rows and the chain maps
//! `res` and `σ̌ = f ∘ (pullback along sigma_map)`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::Zero;

use crate::complex::{ChainMap, CochainComplex, SesReport, TwoRowBicomplex};
use crate::error::{Error, Result};
use crate::linalg::{FgAbGroup, GroupElement, GroupHom, Int, IntMatrix};
use crate::sigma::{tabulate_module, FiniteSigmaGroup, SigmaModule};
use crate::simplicial::{difference_bicomplex, pullback_matrices, SelfMap, SimplicialComplex};

/// Default budget for brute-force relation checks.
pub const DEFAULT_RELATION_BOUND: u64 = 10_000_000;

/// Two Čech rows with the restriction and σ̌ chain maps between them.
#[derive(Clone, Debug)]
pub struct CoverPresheafData {
    res: ChainMap,
    sigma_check: ChainMap,
    bicomplex: TwoRowBicomplex,
}

impl CoverPresheafData {
    pub fn new(res: ChainMap, sigma_check: ChainMap) -> Result<Self> {
        if res.source() != sigma_check.source() || res.target() != sigma_check.target() {
            return Err(Error::invalid(
                "res and sigma_check must share source and target",
            ));
        }
        let bicomplex = TwoRowBicomplex::new(res.sub(&sigma_check));
        Ok(CoverPresheafData {
            res,
            sigma_check,
            bicomplex,
        })
    }

    pub fn nerve_u(&self) -> &CochainComplex {
        self.res.source()
    }

    pub fn nerve_v(&self) -> &CochainComplex {
        self.res.target()
    }

    pub fn res(&self) -> &ChainMap {
        &self.res
    }

    pub fn sigma_check(&self) -> &ChainMap {
        &self.sigma_check
    }

    /// Bicomplex with vertical map `res − σ̌`.
    pub fn bicomplex(&self) -> &TwoRowBicomplex {
        &self.bicomplex
    }

    /// `Ȟⁿ_σ` for every total degree.
    pub fn difference_cech_cohomology(&self) -> Vec<FgAbGroup> {
        self.bicomplex.total_cohomology()
    }

    pub fn ses(&self) -> Result<Vec<SesReport>> {
        self.bicomplex.extract_ses()
    }

    /// Whether `(prev, cur) ∈ Čⁿ⁻¹(V) ⊕ Čⁿ(U)` is a total cocycle: `cur` is a
    /// Čech cocycle and `∂prev + (−1)ⁿ (res − σ̌)(cur) = 0`.
    pub fn cocycle_check(&self, n: usize, prev: &[Int], cur: &[Int]) -> bool {
        if !self.nerve_u().is_cocycle(n, cur) {
            return false;
        }
        let v = self.bicomplex.vertical().component(n).apply_coords(cur);
        let target = self.nerve_v().level(n);
        let dprev = if n == 0 {
            vec![Int::zero(); target.ngens()]
        } else {
            self.nerve_v().differential(n - 1).apply_coords(prev)
        };
        let sum: Vec<Int> = dprev
            .iter()
            .zip(&v)
            .map(|(a, b)| if n.is_multiple_of(2) { a + b } else { a - b })
            .collect();
        target.reduce(&sum).iter().all(Zero::is_zero)
    }
}

/// Combinatorial description of a cover and its σ-intersection.
#[derive(Clone, Debug)]
pub struct CoverNerves {
    pub nerve_u: SimplicialComplex,
    pub nerve_v: SimplicialComplex,
    pub res_map: Vec<usize>,
    pub sigma_map: Vec<usize>,
    res_pull: Vec<IntMatrix>,
    sigma_pull: Vec<IntMatrix>,
}

impl CoverNerves {
    pub fn new(
        nerve_u: SimplicialComplex,
        nerve_v: SimplicialComplex,
        res_map: Vec<usize>,
        sigma_map: Vec<usize>,
    ) -> Result<Self> {
        let res_pull = pullback_matrices(&nerve_v, &nerve_u, &res_map)?;
        let sigma_pull = pullback_matrices(&nerve_v, &nerve_u, &sigma_map)?;
        Ok(CoverNerves {
            nerve_u,
            nerve_v,
            res_map,
            sigma_map,
            res_pull,
            sigma_pull,
        })
    }

    /// The cover `{X}` of a point-like space: one set, `V = U`.
    pub fn single_set() -> Self {
        Self::new(
            SimplicialComplex::point(),
            SimplicialComplex::point(),
            vec![0],
            vec![0],
        )
        .unwrap()
    }

    /// Open-star cover of `x` together with `V_{(i,j)} = st(i) ∩ σ⁻¹ st(j)`
    /// for a simplicial vertex map `σ`. Nerves are kept up to dimension
    /// `top + 1` for `U` and `top` for `V`, enough for Ȟ⁰…Ȟ^top.
    ///
    /// Fails unless the cover is good: every finite intersection of `V` sets
    /// must have the integer cohomology of a point.
    pub fn star_cover(x: &SimplicialComplex, sigma: &[usize], top: usize) -> Result<Self> {
        x.vertex_map_pullback(sigma)?;
        let image = |t: &[usize]| -> BTreeSet<usize> { t.iter().map(|&v| sigma[v]).collect() };
        // V vertices: pairs (i, j) with i ∈ τ and j ∈ σ(τ) for some simplex τ.
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for t in x.all_simplices() {
            for &i in t {
                for j in image(t) {
                    pairs.insert((i, j));
                }
            }
        }
        let pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        let pair_index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
        for t in x.all_simplices() {
            let local: Vec<usize> = t
                .iter()
                .flat_map(|&i| image(t).into_iter().map(move |j| (i, j)))
                .map(|p| pair_index[&p])
                .collect();
            for subset in subsets_up_to(&local, top + 1) {
                simplices.insert(subset);
            }
        }
        for s in &simplices {
            let is: BTreeSet<usize> = s.iter().map(|&k| pairs[k].0).collect();
            let js: BTreeSet<usize> = s.iter().map(|&k| pairs[k].1).collect();
            let witnesses: Vec<&Vec<usize>> = x
                .all_simplices()
                .filter(|t| is.iter().all(|i| t.contains(i)) && js.is_subset(&image(t)))
                .collect();
            if !union_of_open_cells_is_acyclic(&witnesses) {
                return Err(Error::invalid(format!(
                    "cover is not good: intersection indexed by {:?} is not acyclic",
                    s.iter().map(|&k| pairs[k]).collect::<Vec<_>>()
                )));
            }
        }
        let labels = pairs
            .iter()
            .map(|&(i, j)| format!("({},{})", x.labels()[i], x.labels()[j]))
            .collect();
        let simplices: Vec<Vec<usize>> = simplices.into_iter().collect();
        let nerve_v = SimplicialComplex::new(labels, &simplices)?;
        Self::new(
            x.skeleton(top + 1),
            nerve_v,
            pairs.iter().map(|p| p.0).collect(),
            pairs.iter().map(|p| p.1).collect(),
        )
    }

    /// Čech rows and chain maps for constant coefficients `(A, f)`.
    pub fn presheaf_data(&self, coeff: &SigmaModule) -> Result<CoverPresheafData> {
        let a = coeff.carrier();
        let cu = self.nerve_u.cochain_complex(a);
        let cv = self.nerve_v.cochain_complex(a);
        let g = IntMatrix::identity(a.ngens());
        let f = coeff.endo().matrix();
        let build = |coef: &IntMatrix, pulls: &[IntMatrix]| -> Result<ChainMap> {
            let comps = pulls
                .iter()
                .enumerate()
                .take(cu.len().min(cv.len()))
                .map(|(n, p)| GroupHom::new(cu.level(n), cv.level(n), coef.kron(p)))
                .collect::<Result<Vec<_>>>()?;
            ChainMap::new(cu.clone(), cv.clone(), comps)
        };
        CoverPresheafData::new(build(&g, &self.res_pull)?, build(f, &self.sigma_pull)?)
    }

    /// Nonabelian Ȟ¹_σ with constant coefficients in a finite difference group.
    ///
    /// A cocycle is a pair `(c⁰, c¹)`: `c¹` a Čech 1-cocycle on `U`
    /// (`c_ij c_jk = c_ik`) and `c⁰` a family on `V` with
    /// `σ̌(c¹)_{αβ} = c⁰_α · res(c¹)_{αβ} · (c⁰_β)⁻¹`. A family `f` on `U`
    /// acts by `c¹_ij ↦ f_i⁻¹ c¹_ij f_j`, `c⁰_α ↦ s(f_{σ(α)})⁻¹ c⁰_α f_{r(α)}`.
    /// For abelian groups these are exactly the total 1-cocycles and
    /// coboundaries of the Čech bicomplex, and for a single set the classes
    /// are the Artin–Schreier orbits.
    pub fn nonabelian_h1(&self, g: &FiniteSigmaGroup, bound: u64) -> Result<NonabelianH1> {
        let edges = self.nerve_u.simplices(1).to_vec();
        let edge_index: HashMap<(usize, usize), usize> = edges
            .iter()
            .enumerate()
            .map(|(k, e)| ((e[0], e[1]), k))
            .collect();
        let order = g.order() as u64;
        let search = order.checked_pow(edges.len() as u32).unwrap_or(u64::MAX);
        if search > bound {
            return Err(Error::bound("Čech 1-cocycle search", search, bound));
        }
        let cocycles1 = enumerate_cech_cocycles(g, &self.nerve_u, &edge_index);

        let nv = self.nerve_v.vertex_count();
        let v_edges = self.nerve_v.simplices(1).to_vec();
        let components = components(nv, &v_edges);
        let lookup = |c: &[usize], a: usize, b: usize| -> usize {
            use std::cmp::Ordering::*;
            match a.cmp(&b) {
                Equal => g.identity(),
                Less => c[edge_index[&(a, b)]],
                Greater => g.inv(c[edge_index[&(b, a)]]),
            }
        };

        let mut states: Vec<Vec<u32>> = Vec::new();
        let moves = (self.nerve_u.vertex_count() * g.generators().len()).max(1) as u64;
        for c1 in &cocycles1 {
            let res: Vec<usize> = v_edges
                .iter()
                .map(|e| lookup(c1, self.res_map[e[0]], self.res_map[e[1]]))
                .collect();
            let sig: Vec<usize> = v_edges
                .iter()
                .map(|e| g.endo(lookup(c1, self.sigma_map[e[0]], self.sigma_map[e[1]])))
                .collect();
            // Valid c⁰ on each component, determined by the value at its root.
            let per_component: Vec<Vec<Vec<(usize, usize)>>> = components
                .iter()
                .map(|comp| {
                    (0..g.order())
                        .filter_map(|root| propagate(g, comp, root, &v_edges, &res, &sig))
                        .collect()
                })
                .collect();
            let mut c0 = vec![g.identity(); nv];
            let mut choice = vec![0usize; per_component.len()];
            if per_component.iter().any(Vec::is_empty) {
                continue;
            }
            loop {
                for (k, opts) in per_component.iter().enumerate() {
                    for &(v, val) in &opts[choice[k]] {
                        c0[v] = val;
                    }
                }
                let mut state: Vec<u32> = c0.iter().map(|&x| x as u32).collect();
                state.extend(c1.iter().map(|&x| x as u32));
                states.push(state);
                if states.len() as u64 * moves > bound {
                    return Err(Error::bound(
                        "nonabelian Ȟ¹ relation checks",
                        format!("more than {}", states.len() as u64 * moves),
                        bound,
                    ));
                }
                // Odometer over the component choices.
                let mut k = 0;
                loop {
                    if k == choice.len() {
                        break;
                    }
                    choice[k] += 1;
                    if choice[k] < per_component[k].len() {
                        break;
                    }
                    choice[k] = 0;
                    k += 1;
                }
                if k == choice.len() {
                    break;
                }
            }
        }

        let index: HashMap<Vec<u32>, usize> = states
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let act = |state: &[u32], vertex: usize, h: usize| -> Vec<u32> {
            let f = |i: usize| if i == vertex { h } else { g.identity() };
            let mut out = Vec::with_capacity(state.len());
            for (alpha, &c) in state[..nv].iter().enumerate() {
                let x = g.mul(
                    g.mul(g.inv(g.endo(f(self.sigma_map[alpha]))), c as usize),
                    f(self.res_map[alpha]),
                );
                out.push(x as u32);
            }
            for (k, e) in edges.iter().enumerate() {
                let c = state[nv + k] as usize;
                out.push(g.mul(g.mul(g.inv(f(e[0])), c), f(e[1])) as u32);
            }
            out
        };
        let trivial: Vec<u32> = vec![g.identity() as u32; nv + edges.len()];
        let start_order = std::iter::once(index[&trivial])
            .chain((0..states.len()).filter(|&i| states[i] != trivial));
        let mut class_of = vec![usize::MAX; states.len()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for start in start_order {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            class_of[start] = id;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(s) = queue.pop_front() {
                for vertex in 0..self.nerve_u.vertex_count() {
                    for &h in g.generators() {
                        let t = index[&act(&states[s], vertex, h)];
                        if class_of[t] == usize::MAX {
                            class_of[t] = id;
                            members.push(t);
                            queue.push_back(t);
                        }
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        let states = states
            .into_iter()
            .map(|s| NonabelianCocycle {
                c0: s[..nv].iter().map(|&x| x as usize).collect(),
                c1: s[nv..].iter().map(|&x| x as usize).collect(),
            })
            .collect();
        Ok(NonabelianH1 { states, classes })
    }
}

/// An upward-closed family of simplices, read as the union of their open
/// cells, is homotopy equivalent to the order complex of the family. Checks
/// that this complex has the integer cohomology of a point.
fn union_of_open_cells_is_acyclic(cells: &[&Vec<usize>]) -> bool {
    if cells.is_empty() {
        return false;
    }
    let contains =
        |a: &Vec<usize>, b: &Vec<usize>| a.len() > b.len() && b.iter().all(|v| a.contains(v));
    // A unique minimal cell makes the family a closed star: contractible.
    let minimal = cells
        .iter()
        .filter(|t| !cells.iter().any(|u| contains(t, u)))
        .count();
    if minimal == 1 {
        return true;
    }
    let mut chains: Vec<Vec<usize>> = Vec::new();
    fn extend(cells: &[&Vec<usize>], chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(chain.clone());
        let last = cells[*chain.last().unwrap()];
        for (k, c) in cells.iter().enumerate() {
            if c.len() > last.len() && last.iter().all(|v| c.contains(v)) {
                chain.push(k);
                extend(cells, chain, out);
                chain.pop();
            }
        }
    }
    for k in 0..cells.len() {
        extend(cells, &mut vec![k], &mut chains);
    }
    let labels = (0..cells.len()).map(|k| k.to_string()).collect();
    let Ok(order_complex) = SimplicialComplex::new(labels, &chains) else {
        return false;
    };
    let h = order_complex.integer_cochains().cohomology_groups();
    h[0] == FgAbGroup::free(1) && h[1..].iter().all(FgAbGroup::is_trivial)
}

fn subsets_up_to(items: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut items = items.to_vec();
    items.sort_unstable();
    items.dedup();
    let mut out = Vec::new();
    fn rec(
        items: &[usize],
        start: usize,
        max: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for k in start..items.len() {
            cur.push(items[k]);
            rec(items, k + 1, max, cur, out);
            cur.pop();
        }
    }
    rec(&items, 0, max, &mut Vec::new(), &mut out);
    out
}

/// All Čech 1-cocycles by backtracking over edges, checking each triangle
/// as soon as its last edge is assigned.
fn enumerate_cech_cocycles(
    g: &FiniteSigmaGroup,
    nerve: &SimplicialComplex,
    edge_index: &HashMap<(usize, usize), usize>,
) -> Vec<Vec<usize>> {
    let m = edge_index.len();
    let mut checks: Vec<Vec<[usize; 3]>> = vec![Vec::new(); m];
    for t in nerve.simplices(2) {
        let (ij, jk, ik) = (
            edge_index[&(t[0], t[1])],
            edge_index[&(t[1], t[2])],
            edge_index[&(t[0], t[2])],
        );
        checks[ij.max(jk).max(ik)].push([ij, jk, ik]);
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; m];
    fn rec(
        g: &FiniteSigmaGroup,
        k: usize,
        cur: &mut Vec<usize>,
        checks: &[Vec<[usize; 3]>],
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..g.order() {
            cur[k] = x;
            if checks[k]
                .iter()
                .all(|&[ij, jk, ik]| g.mul(cur[ij], cur[jk]) == cur[ik])
            {
                rec(g, k + 1, cur, checks, out);
            }
        }
    }
    rec(g, 0, &mut cur, &checks, &mut out);
    out
}

fn components(n: usize, edges: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Extends `c⁰ = root` at the first vertex of `comp` along edges using
/// `c⁰_β = σ̌_{αβ}⁻¹ c⁰_α res_{αβ}`, then checks every edge of the component.
fn propagate(
    g: &FiniteSigmaGroup,
    comp: &[usize],
    root: usize,
    v_edges: &[Vec<usize>],
    res: &[usize],
    sig: &[usize],
) -> Option<Vec<(usize, usize)>> {
    let members: BTreeSet<usize> = comp.iter().copied().collect();
    let mut value: HashMap<usize, usize> = HashMap::from([(comp[0], root)]);
    let mut queue = VecDeque::from([comp[0]]);
    while let Some(x) = queue.pop_front() {
        let cx = value[&x];
        for (k, e) in v_edges.iter().enumerate() {
            let (next, val) = if e[0] == x {
                (e[1], g.mul(g.mul(g.inv(sig[k]), cx), res[k]))
            } else if e[1] == x {
                (e[0], g.mul(g.mul(sig[k], cx), g.inv(res[k])))
            } else {
                continue;
            };
            if let std::collections::hash_map::Entry::Vacant(slot) = value.entry(next) {
                slot.insert(val);
                queue.push_back(next);
            }
        }
    }
    for (k, e) in v_edges.iter().enumerate() {
        if !members.contains(&e[0]) {
            continue;
        }
        let lhs = sig[k];
        let rhs = g.mul(g.mul(value[&e[0]], res[k]), g.inv(value[&e[1]]));
        if lhs != rhs {
            return None;
        }
    }
    let mut out: Vec<(usize, usize)> = value.into_iter().collect();
    out.sort_unstable();
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NonabelianCocycle {
    /// One group element per vertex of `V`.
    pub c0: Vec<usize>,
    /// One group element per edge of `U`.
    pub c1: Vec<usize>,
}

/// Pointed set of classes; the class of the trivial cocycle comes first.
#[derive(Clone, Debug)]
pub struct NonabelianH1 {
    pub states: Vec<NonabelianCocycle>,
    /// Member indices into `states`, sorted; first member is the representative.
    pub classes: Vec<Vec<usize>>,
}

impl NonabelianH1 {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn representatives(&self) -> Vec<&NonabelianCocycle> {
        self.classes.iter().map(|c| &self.states[c[0]]).collect()
    }
}

/// Outcome of comparing the nonabelian brute force with the abelian bicomplex.
#[derive(Clone, Debug)]
pub struct AbelianMatch {
    pub class_count: usize,
    pub h1: FgAbGroup,
    /// Every class maps to one element of Ȟ¹_σ and distinct classes to distinct elements.
    pub bijective: bool,
}

/// Runs the nonabelian enumeration on the tabulated group of a finite module
/// and maps every cocycle pair into the total cohomology of the Čech bicomplex.
pub fn abelian_class_matching(
    nerves: &CoverNerves,
    coeff: &SigmaModule,
    bound: u64,
) -> Result<AbelianMatch> {
    let (table, elements) = tabulate_module(coeff)?;
    let h = nerves.nonabelian_h1(&table, bound)?;
    let data = nerves.presheaf_data(coeff)?;
    let total = data.bicomplex().total_complex();
    let h1 = total.complex.cohomology_at(1);
    let a = coeff.carrier();
    let layout = |values: &[usize]| -> Vec<Int> {
        let k = values.len();
        let mut out = vec![Int::zero(); a.ngens() * k];
        for (s, &v) in values.iter().enumerate() {
            let e: &GroupElement = &elements[v];
            for (gi, c) in e.coords().iter().enumerate() {
                out[gi * k + s] = c.clone();
            }
        }
        out
    };
    let mut seen: HashMap<Vec<Int>, usize> = HashMap::new();
    let mut bijective = true;
    for (ci, members) in h.classes.iter().enumerate() {
        let mut class_value: Option<Vec<Int>> = None;
        for &m in members {
            let st = &h.states[m];
            let z = total.join(1, &layout(&st.c0), &layout(&st.c1));
            let Some(c) = h1.classify(&z) else {
                bijective = false;
                continue;
            };
            match &class_value {
                None => class_value = Some(c),
                Some(v) if *v != c => bijective = false,
                _ => {}
            }
        }
        if let Some(v) = class_value {
            if seen.insert(v, ci).is_some() {
                bijective = false;
            }
        }
    }
    let order_ok = h1.group().order() == Some(Int::from(h.class_count()));
    Ok(AbelianMatch {
        class_count: h.class_count(),
        h1: h1.group().clone(),
        bijective: bijective && order_ok,
    })
}

/// Ȟ⁰_σ, Ȟ¹_σ of the star cover next to H⁰_σ, H¹_σ of the simplicial model.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub cech: Vec<FgAbGroup>,
    pub derived: Vec<FgAbGroup>,
    pub matches: bool,
}

/// Compares the Čech and derived difference cohomology in degrees 0 and 1.
pub fn compare_low_degrees(cech: &[FgAbGroup], derived: &[FgAbGroup]) -> ComparisonReport {
    let pick = |g: &[FgAbGroup]| -> Vec<FgAbGroup> {
        (0..2)
            .map(|n| g.get(n).cloned().unwrap_or_else(FgAbGroup::trivial))
            .collect()
    };
    let (cech, derived) = (pick(cech), pick(derived));
    ComparisonReport {
        matches: cech == derived,
        cech,
        derived,
    }
}

/// Builds the star cover of `x` for the vertex map `sigma` and compares its
/// difference Čech cohomology with the simplicial model in degrees 0 and 1.
pub fn cech_to_derived_check(
    x: &SimplicialComplex,
    sigma: &[usize],
    coeff: &SigmaModule,
) -> Result<ComparisonReport> {
    let nerves = CoverNerves::star_cover(x, sigma, 1)?;
    let cech = nerves.presheaf_data(coeff)?.bicomplex().total_cohomology_upto(2);
    let derived = difference_bicomplex(x, &SelfMap::VertexMap(sigma.to_vec()), coeff)?
        .total_cohomology_upto(2);
    Ok(compare_low_degrees(&cech, &derived))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    #[test]
    fn single_set_reduces_to_point() {
        let coeff = SigmaModule::scalar(&FgAbGroup::cyclic(6), 5);
        let data = CoverNerves::single_set().presheaf_data(&coeff).unwrap();
        let h = data.difference_cech_cohomology();
        assert_eq!(h, coeff.point_difference_cohomology());
    }

    #[test]
    fn trivial_sigma_check_splits() {
        let x = SimplicialComplex::polygon(3);
        let nerves = CoverNerves::star_cover(&x, &[0, 1, 2], 1).unwrap();
        let data = nerves.presheaf_data(&SigmaModule::trivial(&z())).unwrap();
        let h = data.difference_cech_cohomology();
        assert_eq!(&h[..2], &[z(), FgAbGroup::free(2)]);
    }

    #[test]
    fn circle_comparison() {
        let x = SimplicialComplex::polygon(3);
        for coeff in [
            SigmaModule::trivial(&z()),
            SigmaModule::scalar(&FgAbGroup::cyclic(3), 2),
        ] {
            let r = cech_to_derived_check(&x, &[0, 1, 2], &coeff).unwrap();
            assert!(r.matches, "{r:?}");
        }
        let r = cech_to_derived_check(&x, &[0, 1, 2], &SigmaModule::trivial(&z())).unwrap();
        assert_eq!(r.cech, vec![z(), FgAbGroup::free(2)]);
    }

    #[test]
    fn cocycle_check_agrees_with_total_differential() {
        let x = SimplicialComplex::polygon(3);
        let nerves = CoverNerves::star_cover(&x, &[1, 2, 0], 1).unwrap();
        let data = nerves.presheaf_data(&SigmaModule::trivial(&z())).unwrap();
        let total = data.bicomplex().total_complex();
        let n = 1;
        let kv = data.nerve_v().level(0).ngens();
        let ku = data.nerve_u().level(1).ngens();
        assert!(data.cocycle_check(n, &vec![Int::zero(); kv], &vec![Int::zero(); ku]));
        for seed in 0..40u64 {
            let pick = |k: usize, salt: u64| -> Vec<Int> {
                (0..k)
                    .map(|i| Int::from(((seed * 31 + i as u64 * 7 + salt) % 3) as i64 - 1))
                    .collect()
            };
            let (y, xx) = (pick(kv, 1), pick(ku, 2));
            let z = total.join(n, &y, &xx);
            let direct = total.complex.is_cocycle(n, &z);
            assert_eq!(data.cocycle_check(n, &y, &xx), direct);
        }
    }

    #[test]
    fn nonabelian_single_set_s3() {
        let s3 = FiniteSigmaGroup::symmetric(3).unwrap();
        let h = CoverNerves::single_set()
            .nonabelian_h1(&s3, DEFAULT_RELATION_BOUND)
            .unwrap();
        assert_eq!(h.class_count(), 3);
        assert_eq!(h.representatives()[0].c0, vec![s3.identity()]);
    }

    #[test]
    fn nonabelian_trivial_group() {
        let x = SimplicialComplex::polygon(4);
        let nerves = CoverNerves::star_cover(&x, &[1, 2, 3, 0], 1).unwrap();
        let t = FiniteSigmaGroup::cyclic(1, 0).unwrap();
        assert_eq!(
            nerves
                .nonabelian_h1(&t, DEFAULT_RELATION_BOUND)
                .unwrap()
                .class_count(),
            1
        );
    }

    #[test]
    fn abelian_data_matches_bicomplex() {
        let x = SimplicialComplex::polygon(3);
        let nerves = CoverNerves::star_cover(&x, &[1, 2, 0], 1).unwrap();
        for coeff in [
            SigmaModule::trivial(&FgAbGroup::cyclic(2)),
            SigmaModule::scalar(&FgAbGroup::cyclic(5), 2),
            SigmaModule::scalar(&FgAbGroup::cyclic(4), 3),
        ] {
            let m = abelian_class_matching(&nerves, &coeff, DEFAULT_RELATION_BOUND).unwrap();
            assert!(m.bijective, "{m:?}");
        }
    }

    #[test]
    fn bound_is_enforced() {
        let x = SimplicialComplex::polygon(6);
        let nerves = CoverNerves::star_cover(&x, &(0..6).collect::<Vec<_>>(), 1).unwrap();
        let g = FiniteSigmaGroup::symmetric(4).unwrap();
        assert!(matches!(
            nerves.nonabelian_h1(&g, 1000),
            Err(Error::BoundExceeded { .. })
        ));
    }
}
