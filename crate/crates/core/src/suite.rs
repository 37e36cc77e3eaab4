//! The acceptance batch: ten checks run end to end against independent oracles.
//!
//! Randomized criteria take a seed and report it; the same seed reproduces the same instances.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cech::{abelian_class_matching, cech_to_derived_check, CoverNerves, DEFAULT_RELATION_BOUND};
use crate::complex::{ChainMap, CochainComplex, TwoRowBicomplex};
use crate::error::Result;
use crate::field::{gcd, is_prime};
use crate::galois::{
    as_multiplicative, classify_ga_torsors, classify_ga_torsors_by_search, difference_galois_cohomology,
    h1_sigma_mu2, linearly_closed_witness, order_of, pic_sigma_field, rank_one_module_classes,
    AdditiveOperatorSpec, CyclicGaloisData, DifferenceField, DEFAULT_ENUMERATION_BOUND,
};
use crate::linalg::{FgAbGroup, GroupHom, Int, IntMatrix};
use crate::quadratic::{difference_picard, picex_report, QuadraticOrder, DEFAULT_DISCRIMINANT_BOUND};
use crate::sigma::{FiniteSigmaGroup, SigmaModule};
use crate::simplicial::{circle_degree_map, difference_cohomology, SelfMap, SimplicialComplex};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Identifier and short name of each criterion.
pub const CRITERIA: [(u32, &str); 10] = [
    (1, "mapping torus oracle"),
    (2, "two-row bicomplex exact sequences"),
    (3, "Cech vs derived in degrees 0 and 1"),
    (4, "mu_2 torsor count vs exact sequence"),
    (5, "G_a^n torsors: cokernel vs search"),
    (6, "Pic of finite difference fields"),
    (7, "linearly closed witnesses"),
    (8, "difference Picard of quadratic rings"),
    (9, "nonabelian H^1 vs abelian"),
    (10, "cyclic Galois exact sequences"),
];

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {}: {} ({:.3} s{})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.limit
                .map(|l| format!(", limit {} s", l.as_secs()))
                .unwrap_or_default()
        )
    }
}

pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, seed)).collect()
}

/// Runs one criterion; unknown ids fail.
pub fn run_criterion(id: u32, seed: u64) -> CriterionOutcome {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .unwrap_or("unknown");
    let limit = match id {
        1 => Some(Duration::from_secs(2)),
        2 => Some(Duration::from_secs(60)),
        4 => Some(Duration::from_secs(10)),
        8 => Some(Duration::from_secs(30)),
        _ => None,
    };
    let start = Instant::now();
    let result = match id {
        1 => mapping_torus(),
        2 => bicomplex_suite(seed, 200),
        3 => cech_comparison(),
        4 => mu2_counts(),
        5 => additive_torsors(seed, 50),
        6 => field_picard(),
        7 => linearly_closed(),
        8 => quadratic_picard(),
        9 => nonabelian_layer(),
        10 => galois_suite(seed, 100),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let (ok, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    let in_time = limit.is_none_or(|l| elapsed <= l);
    CriterionOutcome {
        id,
        name,
        passed: ok && in_time,
        detail: if in_time {
            detail
        } else {
            format!("{detail}; over the time limit")
        },
        elapsed,
        limit,
    }
}

type Verdict = Result<(bool, String)>;

fn notations(gs: &[FgAbGroup]) -> String {
    let v: Vec<String> = gs.iter().map(FgAbGroup::notation).collect();
    format!("({})", v.join(", "))
}

// ---------------------------------------------------------------------------
// 1

fn mapping_torus() -> Verdict {
    let z = SigmaModule::trivial(&FgAbGroup::free(1));
    let circle = SimplicialComplex::polygon(3);
    let mut ok = true;
    let mut detail = Vec::new();
    let cases = [
        ("Klein bottle", circle_degree_map(3, -1), vec![FgAbGroup::free(1), FgAbGroup::free(1), FgAbGroup::cyclic(2)]),
        ("torus", SelfMap::identity(&circle), vec![FgAbGroup::free(1), FgAbGroup::free(2), FgAbGroup::free(1)]),
    ];
    for (name, map, expected) in cases {
        let start = Instant::now();
        let h = difference_cohomology(&circle, &map, &z)?;
        let fast = start.elapsed() < Duration::from_secs(1);
        ok &= h == expected && fast;
        detail.push(format!("{name} {}", notations(&h)));
    }
    Ok((ok, detail.join(", ")))
}

// ---------------------------------------------------------------------------
// 2

/// Unimodular `k×k` matrix and its inverse, from a few random elementary operations.
fn random_unimodular(rng: &mut impl Rng, k: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(k);
    let mut inv = IntMatrix::identity(k);
    if k < 2 {
        return (u, inv);
    }
    for _ in 0..rng.gen_range(0..=4) {
        let i = rng.gen_range(0..k);
        let j = (i + rng.gen_range(1..k)) % k;
        let c = Int::from(rng.gen_range(-2i64..=2));
        // Row i += c·row j; the inverse subtracts it back on columns.
        let mut e = IntMatrix::identity(k);
        e[(i, j)] = c.clone();
        let mut f = IntMatrix::identity(k);
        f[(i, j)] = -c;
        u = e.mul(&u);
        inv = inv.mul(&f);
    }
    (u, inv)
}

fn reduce(m: &IntMatrix, n: i64) -> IntMatrix {
    if n == 0 {
        return m.clone();
    }
    let n = Int::from(n);
    let entries = m
        .entries()
        .iter()
        .map(|x| ((x % &n) + &n) % &n)
        .collect();
    IntMatrix::from_entries(m.rows(), m.cols(), entries).unwrap()
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> IntMatrix {
    let entries = (0..rows * cols)
        .map(|_| Int::from(rng.gen_range(lo..=hi)))
        .collect();
    IntMatrix::from_entries(rows, cols, entries).unwrap()
}

fn power_level(n: i64, k: usize) -> FgAbGroup {
    if n == 0 {
        FgAbGroup::free(k)
    } else {
        FgAbGroup::new(0, vec![Int::from(n); k]).unwrap()
    }
}

/// A random complex whose levels are `(ℤ/n)^k` (or `ℤ^k` for `n = 0`), returned with its
/// differential matrices. It is a sum of one-step pieces `ℤ/n →(×c) ℤ/n`, with every level
/// conjugated by a random unimodular change of basis.
fn random_complex(rng: &mut impl Rng, n: i64, len: usize) -> (Vec<usize>, Vec<IntMatrix>) {
    let max_k = if n == 0 {
        3
    } else {
        (1..=6usize).take_while(|&k| n.pow(k as u32) <= 64).last().unwrap_or(0)
    };
    // pieces[i]: one-step pieces from degree i to i + 1.
    let mut pieces = vec![0usize; len];
    let mut isolated = vec![0usize; len];
    let mut dims = vec![0usize; len];
    for i in 0..len {
        let incoming = if i > 0 { pieces[i - 1] } else { 0 };
        let room = max_k.saturating_sub(incoming);
        if i + 1 < len {
            pieces[i] = rng.gen_range(0..=room.min(2));
        }
        let room = room - pieces[i];
        isolated[i] = rng.gen_range(0..=room.min(1));
        dims[i] = incoming + pieces[i] + isolated[i];
    }
    let mut diffs = Vec::with_capacity(len.saturating_sub(1));
    for i in 0..len.saturating_sub(1) {
        let mut d = IntMatrix::zeros(dims[i + 1], dims[i]);
        let incoming = if i > 0 { pieces[i - 1] } else { 0 };
        for j in 0..pieces[i] {
            let c = if n == 0 {
                rng.gen_range(0..=4)
            } else {
                rng.gen_range(0..n)
            };
            d[(j, incoming + j)] = Int::from(c);
        }
        diffs.push(d);
    }
    let bases: Vec<(IntMatrix, IntMatrix)> = dims.iter().map(|&k| random_unimodular(rng, k)).collect();
    let diffs = diffs
        .iter()
        .enumerate()
        .map(|(i, d)| reduce(&bases[i + 1].0.mul(d).mul(&bases[i].1), n))
        .collect();
    (dims, diffs)
}

/// A random two-row bicomplex with levels of order at most 64 (or free of small rank),
/// degrees `0..len` with `len ≤ 5`.
///
/// The vertical map is `c·id + d∘h + h∘d` for a random `h` of degree −1, a chain map for
/// any `h`; half the time the target row is the same complex reduced modulo a divisor of `n`.
pub fn random_bicomplex(rng: &mut impl Rng) -> Result<TwoRowBicomplex> {
    let n: i64 = *[0, 2, 3, 4, 5, 6, 7, 8].choose(rng).unwrap();
    let len = rng.gen_range(1..=5);
    let (dims, diffs) = random_complex(rng, n, len);
    let levels: Vec<FgAbGroup> = dims.iter().map(|&k| power_level(n, k)).collect();
    let row0 = CochainComplex::from_matrices(levels, diffs.clone())?;
    let divisors: Vec<i64> = (2..=n).filter(|d| n % d == 0).collect();
    let target_n = if n != 0 && rng.gen_bool(0.5) {
        *divisors.choose(rng).unwrap()
    } else {
        n
    };
    let row1 = CochainComplex::from_matrices(
        dims.iter().map(|&k| power_level(target_n, k)).collect(),
        diffs.iter().map(|d| reduce(d, target_n)).collect(),
    )?;
    let homotopy: Vec<IntMatrix> = (0..len)
        .map(|i| {
            if i == 0 {
                IntMatrix::zeros(0, dims[0])
            } else {
                random_matrix(rng, dims[i - 1], dims[i], -2, 2)
            }
        })
        .collect();
    let c = Int::from(rng.gen_range(-2i64..=3));
    let mats: Vec<IntMatrix> = (0..len)
        .map(|i| {
            let mut f = IntMatrix::identity(dims[i]).scale(&c);
            if i > 0 {
                f = f.add(&diffs[i - 1].mul(&homotopy[i]));
            }
            if i + 1 < len {
                f = f.add(&homotopy[i + 1].mul(&diffs[i]));
            }
            reduce(&f, target_n)
        })
        .collect();
    Ok(TwoRowBicomplex::new(ChainMap::from_matrices(row0, row1, mats)?))
}

/// Checks every degree of `count` random bicomplexes; returns (instances, sequences checked, failures).
pub fn check_random_bicomplexes(seed: u64, count: usize) -> Result<(usize, usize, Vec<String>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut failures = Vec::new();
    for i in 0..count {
        let bc = random_bicomplex(&mut rng)?;
        for s in bc.extract_ses()? {
            checked += 1;
            if !s.exact || s.orders_multiply() == Some(false) {
                failures.push(format!(
                    "instance {i} degree {}: {} -> {} -> {}",
                    s.degree,
                    s.left.notation(),
                    s.middle.notation(),
                    s.right.notation()
                ));
            }
        }
    }
    Ok((count, checked, failures))
}

fn bicomplex_suite(seed: u64, count: usize) -> Verdict {
    let (n, checked, failures) = check_random_bicomplexes(seed, count)?;
    Ok((
        failures.is_empty(),
        format!(
            "seed {seed}: {n} bicomplexes, {checked} sequences, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(" ({f})")).unwrap_or_default()
        ),
    ))
}

// ---------------------------------------------------------------------------
// 3

/// Spaces with vertex self-maps whose star covers are good.
pub fn cech_spaces() -> Vec<(SimplicialComplex, Vec<Vec<usize>>)> {
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
        (SimplicialComplex::torus(), vec![(0..9).collect(), torus_shift]),
    ]
}

pub fn cech_coefficients() -> Vec<SigmaModule> {
    vec![
        SigmaModule::trivial(&FgAbGroup::free(1)),
        SigmaModule::scalar(&FgAbGroup::free(1), -1),
        SigmaModule::scalar(&FgAbGroup::free(1), 3),
        SigmaModule::scalar(&FgAbGroup::cyclic(3), 2),
        SigmaModule::scalar(&FgAbGroup::cyclic(4), 3),
    ]
}

fn cech_comparison() -> Verdict {
    let mut count = 0;
    let mut bad = Vec::new();
    for (x, maps) in cech_spaces() {
        for sigma in maps {
            for coeff in cech_coefficients() {
                let r = cech_to_derived_check(&x, &sigma, &coeff)?;
                count += 1;
                if !r.matches {
                    bad.push(format!(
                        "{} vertices, sigma {sigma:?}: Cech {} vs {}",
                        x.vertex_count(),
                        notations(&r.cech),
                        notations(&r.derived)
                    ));
                }
            }
        }
    }
    Ok((
        bad.is_empty() && count >= 20,
        format!(
            "{count} instances, {} mismatches{}",
            bad.len(),
            bad.first().map(|b| format!(" ({b})")).unwrap_or_default()
        ),
    ))
}

// ---------------------------------------------------------------------------
// 4

fn mu2_counts() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, m) in [(3, 1), (5, 1), (7, 1), (3, 2), (13, 1)] {
        for r in 0..m {
            let ks = DifferenceField::frobenius(p, m, r)?;
            let rep = h1_sigma_mu2(&ks, DEFAULT_ENUMERATION_BOUND)?;
            let expected = 2 * order_of(&rep.ses_right).unwrap_or(0) as usize;
            ok &= rep.class_count() == expected && rep.counts_agree();
            if (p, m, r) == (5, 1, 0) {
                ok &= rep.class_count() == 4;
            }
            parts.push(format!("F{} r={r}: {}", p.pow(m), rep.class_count()));
        }
    }
    Ok((ok, parts.join(", ")))
}

// ---------------------------------------------------------------------------
// 5

/// Prime powers `p^m ≤ bound` as `(p, m)`.
pub fn prime_powers(bound: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in 2..=bound {
        if !is_prime(p) {
            continue;
        }
        let mut q = p;
        let mut m = 1;
        while q <= bound {
            out.push((p, m));
            q *= p;
            m += 1;
        }
    }
    out
}

fn additive_torsors(seed: u64, count: usize) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = prime_powers(64);
    let mut mismatches = Vec::new();
    for _ in 0..count {
        let &(p, m) = fields.choose(&mut rng).unwrap();
        let r = rng.gen_range(0..m);
        let ks = DifferenceField::frobenius(p, m, r)?;
        let q = ks.field().order();
        let n = rng.gen_range(1..=3);
        let lambdas: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        let spec = AdditiveOperatorSpec::recurrence(ks, lambdas.clone())?;
        let all: Vec<u64> = (0..q).collect();
        let by_coker = classify_ga_torsors(&spec, &all)?;
        let by_search = classify_ga_torsors_by_search(&spec, &all, DEFAULT_ENUMERATION_BOUND)?;
        if by_coker != by_search {
            mismatches.push(format!("F{q} r={r} lambda={lambdas:?}"));
        }
    }
    Ok((
        mismatches.is_empty(),
        format!(
            "seed {seed}: {count} lambda-vectors, every torsor of each compared, {} mismatches{}",
            mismatches.len(),
            mismatches.first().map(|b| format!(" ({b})")).unwrap_or_default()
        ),
    ))
}

// ---------------------------------------------------------------------------
// 6

fn field_picard() -> Verdict {
    let mut instances = 0;
    let mut bad = Vec::new();
    for (p, m) in prime_powers(625) {
        for r in 0..m {
            let ks = DifferenceField::frobenius(p, m, r)?;
            let q = ks.field().order();
            let expected = gcd(p.pow(r) - 1, q - 1);
            let pic = order_of(&pic_sigma_field(&ks)?).unwrap_or(0);
            let classes = rank_one_module_classes(&ks, DEFAULT_ENUMERATION_BOUND)?.len() as u64;
            instances += 1;
            if pic != expected || classes != expected {
                bad.push(format!("F{q} r={r}: gcd {expected}, Pic {pic}, search {classes}"));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!(
            "{instances} (field, r) pairs, {} mismatches{}",
            bad.len(),
            bad.first().map(|b| format!(" ({b})")).unwrap_or_default()
        ),
    ))
}

// ---------------------------------------------------------------------------
// 7

fn linearly_closed() -> Verdict {
    let mut classes = 0;
    let mut bad = Vec::new();
    for p in [2u64, 3, 5] {
        for m in 1..=4u32 {
            let ks = DifferenceField::frobenius(p, m, 1)?;
            let k = ks.field();
            for &rep in &as_multiplicative(&ks)?.representatives {
                classes += 1;
                let w = linearly_closed_witness(&ks, rep)?;
                let big = &w.extension;
                let y = w.embedded_rep;
                // y lies in the copy of k and has the order of rep; x^{p−1} = y holds.
                let verified = u64::from(w.degree) <= (p - 1).max(1)
                    && big.order() == k.order().pow(w.degree)
                    && big.pow(y, k.order()) == y
                    && big.multiplicative_order(y) == k.multiplicative_order(rep)
                    && big.pow(w.solution, p - 1) == y;
                if !verified {
                    bad.push(format!("F{}^{m} rep {}", p, k.format(rep)));
                }
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!("{classes} classes, {} unverified", bad.len()),
    ))
}

// ---------------------------------------------------------------------------
// 8

fn quadratic_picard() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, order) in [(-1, 2), (-3, 2), (-5, 4)] {
        let o = QuadraticOrder::new(d)?;
        let pic = difference_picard(&o, DEFAULT_DISCRIMINANT_BOUND)?;
        let again = difference_picard(&o, DEFAULT_DISCRIMINANT_BOUND)?;
        let agree = Int::from(pic.order()) == pic.ses_order()
            && pic.ses_exact
            && pic.surjects_onto_fixed_classes()
            && pic.group.order() == Some(Int::from(order))
            && again.group == pic.group
            && again.coords == pic.coords;
        ok &= agree;
        parts.push(format!("d={d}: {}", pic.group.notation()));
    }
    for d in [-1, -2, -3] {
        let r = picex_report(&QuadraticOrder::new(d)?)?;
        ok &= r.matches;
        parts.push(format!("picex d={d}: {}", if r.matches { "match" } else { "mismatch" }));
    }
    Ok((ok, parts.join(", ")))
}

// ---------------------------------------------------------------------------
// 9

/// Finite difference modules of order at most 16 used for the nonabelian comparison.
pub fn small_modules() -> Vec<SigmaModule> {
    let hom = |g: &FgAbGroup, rows: &[Vec<i64>]| {
        SigmaModule::new(GroupHom::new(g.clone(), g.clone(), IntMatrix::from_rows(rows)).unwrap())
            .unwrap()
    };
    let c = |n: i64| FgAbGroup::cyclic(n);
    let two_four = FgAbGroup::new(0, vec![Int::from(2), Int::from(4)]).unwrap();
    let four_four = FgAbGroup::new(0, vec![Int::from(4), Int::from(4)]).unwrap();
    let three_three = FgAbGroup::new(0, vec![Int::from(3), Int::from(3)]).unwrap();
    let two_cubed = FgAbGroup::new(0, vec![Int::from(2); 3]).unwrap();
    vec![
        SigmaModule::trivial(&c(2)),
        SigmaModule::scalar(&c(3), 2),
        SigmaModule::scalar(&c(4), 3),
        SigmaModule::scalar(&c(5), 2),
        SigmaModule::scalar(&c(6), 5),
        SigmaModule::scalar(&c(7), 2),
        SigmaModule::scalar(&c(8), 3),
        SigmaModule::scalar(&c(8), 5),
        SigmaModule::scalar(&c(12), 7),
        SigmaModule::scalar(&c(16), 3),
        hom(&FgAbGroup::new(0, vec![Int::from(2); 2]).unwrap(), &[vec![0, 1], vec![1, 0]]),
        hom(&two_four, &[vec![1, 0], vec![2, 1]]),
        hom(&four_four, &[vec![0, 1], vec![1, 0]]),
        hom(&three_three, &[vec![1, 1], vec![0, 1]]),
        hom(&two_cubed, &[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]),
    ]
}

pub fn small_covers() -> Result<Vec<CoverNerves>> {
    Ok(vec![
        CoverNerves::single_set(),
        CoverNerves::star_cover(&SimplicialComplex::polygon(3), &[0, 1, 2], 1)?,
        CoverNerves::star_cover(&SimplicialComplex::polygon(3), &[1, 2, 0], 1)?,
        CoverNerves::star_cover(&SimplicialComplex::polygon(4), &[3, 0, 1, 2], 1)?,
    ])
}

fn nonabelian_layer() -> Verdict {
    let s3 = FiniteSigmaGroup::symmetric(3)?;
    let orbits = s3.as_orbits().len();
    let mut ok = orbits == 3;
    let mut runs = 0;
    let mut bad = Vec::new();
    for nerves in small_covers()? {
        for coeff in small_modules() {
            let m = abelian_class_matching(&nerves, &coeff, DEFAULT_RELATION_BOUND)?;
            runs += 1;
            if !m.bijective {
                bad.push(format!("{} classes vs {}", m.class_count, m.h1.notation()));
            }
        }
    }
    ok &= bad.is_empty();
    Ok((
        ok,
        format!(
            "AS orbits of (S3, id): {orbits}; {runs} cover/module pairs, {} mismatches",
            bad.len()
        ),
    ))
}

// ---------------------------------------------------------------------------
// 10

/// Random finite `ℤ/N`-module with a commuting difference map, `N ≤ 6`, `|M| ≤ 64`.
///
/// Either `(ℤ/n)^k` with `γ` a unit times a permutation of order dividing `N`, conjugated by
/// a random change of basis, and `σ_M` a polynomial in `γ`; or the logarithmic model of
/// `F_{q^N}*` when it is small enough.
pub fn random_galois_data(rng: &mut impl Rng) -> Result<CyclicGaloisData> {
    let level = rng.gen_range(1..=6usize);
    if rng.gen_bool(0.2) {
        let options: Vec<(u64, u32)> = prime_powers(64)
            .into_iter()
            .filter(|&(p, m)| {
                p.pow(m)
                    .checked_pow(level as u32)
                    .is_some_and(|x| x - 1 <= 64)
            })
            .collect();
        if let Some(&(p, m)) = options.choose(rng) {
            let ks = DifferenceField::frobenius(p, m, rng.gen_range(0..m))?;
            return CyclicGaloisData::multiplicative(&ks, level);
        }
    }
    let n: i64 = rng.gen_range(2..=8);
    let max_k = (1..=3).take_while(|&k| n.pow(k) <= 64).last().unwrap() as usize;
    let k = rng.gen_range(1..=max_k);
    // A permutation whose cycle lengths divide the level.
    let mut perm: Vec<usize> = (0..k).collect();
    let mut start = 0;
    while start < k {
        let lens: Vec<usize> = (1..=k - start).filter(|l| level % l == 0).collect();
        let l = *lens.choose(rng).unwrap();
        perm[start..start + l].rotate_left(1);
        start += l;
    }
    let units: Vec<i64> = (1..n)
        .filter(|&u| {
            gcd(u as u64, n as u64) == 1 && (0..level).fold(1, |acc, _| acc * u % n) == 1
        })
        .collect();
    let u = *units.choose(rng).unwrap();
    let mut g0 = IntMatrix::zeros(k, k);
    for (i, &j) in perm.iter().enumerate() {
        g0[(j, i)] = Int::from(u);
    }
    let (b, b_inv) = random_unimodular(rng, k);
    let gamma = reduce(&b.mul(&g0).mul(&b_inv), n);
    let coeffs: Vec<i64> = (0..3).map(|_| rng.gen_range(0..n)).collect();
    let mut sigma = IntMatrix::zeros(k, k);
    let mut power = IntMatrix::identity(k);
    for c in coeffs {
        sigma = sigma.add(&power.scale(&Int::from(c)));
        power = power.mul(&gamma);
    }
    let m = power_level(n, k);
    CyclicGaloisData::new(
        level,
        GroupHom::new(m.clone(), m.clone(), gamma)?,
        GroupHom::new(m.clone(), m, reduce(&sigma, n))?,
    )
}

/// Every `difference_galois_cohomology` call on `count` random instances in degrees 0..=3.
pub fn check_random_galois(seed: u64, count: usize) -> Result<(usize, Vec<String>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut calls = 0;
    let mut bad = Vec::new();
    for i in 0..count {
        let data = random_galois_data(&mut rng)?;
        for n in 0..=3 {
            let h = difference_galois_cohomology(&data, n)?;
            calls += 1;
            if !h.ses.exact || h.ses.orders_multiply() != Some(true) {
                bad.push(format!(
                    "instance {i} (N={}, M={}) degree {n}",
                    data.level(),
                    data.module().notation()
                ));
            }
        }
    }
    Ok((calls, bad))
}

fn galois_suite(seed: u64, count: usize) -> Verdict {
    let (calls, bad) = check_random_galois(seed, count)?;
    let mu2 = difference_galois_cohomology(&CyclicGaloisData::mu2_model(), 1)?;
    let direct = h1_sigma_mu2(&DifferenceField::frobenius(5, 1, 0)?, DEFAULT_ENUMERATION_BOUND)?;
    let model_ok = mu2.ses.exact && order_of(&mu2.group) == Some(direct.class_count() as u64);
    Ok((
        bad.is_empty() && model_ok,
        format!(
            "seed {seed}: {count} instances, {calls} calls, {} inexact; mu_2 model H^1 = {} vs {} torsor classes",
            bad.len(),
            mu2.group.notation(),
            direct.class_count()
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_bicomplexes_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut nontrivial = 0;
        for _ in 0..40 {
            let bc = random_bicomplex(&mut rng).unwrap();
            if bc.total_cohomology().iter().any(|g| !g.is_trivial()) {
                nontrivial += 1;
            }
        }
        assert!(nontrivial > 10);
    }

    #[test]
    fn random_galois_data_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let d = random_galois_data(&mut rng).unwrap();
            assert!(d.level() <= 6);
            assert!(order_of(d.module()).unwrap() <= 64);
        }
    }

    #[test]
    fn prime_power_list() {
        assert_eq!(prime_powers(9), vec![(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)]);
    }

    #[test]
    fn finite_field_sizes_in_random_data() {
        use crate::field::FiniteField;
        let ks = DifferenceField::new(FiniteField::new(2, 1).unwrap(), 0);
        let d = CyclicGaloisData::multiplicative(&ks, 6).unwrap();
        assert_eq!(order_of(d.module()), Some(63));
    }
}
