//! Maximal orders of quadratic fields `ℚ(√d)` with conjugation as the difference
//! operator: ideals, class groups, units and the difference Picard group.
//!
//! Elements are `a + b√d` with rational `a, b`. The order is `ℤ[ω]` with `ω = √d`, or
//! `ω = (1 + √d)/2` when `d ≡ 1 (mod 4)`; `ω² = tω − n`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    coker_of_hom, image_equals_kernel, kernel, tabulate_abelian_group, FgAbGroup, GroupHom, Int,
    IntMatrix,
};
use crate::sigma::SigmaModule;

pub const DEFAULT_DISCRIMINANT_BOUND: u64 = 1_000_000;

pub type Rat = BigRational;

fn rat(x: impl Into<Int>) -> Rat {
    Rat::from_integer(x.into())
}

/// `a + b√d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: Rat,
    pub b: Rat,
}

impl QuadElem {
    pub fn new(a: Rat, b: Rat) -> Self {
        QuadElem { a, b }
    }

    pub fn integer(c: impl Into<Int>) -> Self {
        QuadElem::new(rat(c), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticOrder {
    d: i64,
    t: i64,
    n: i64,
    disc: i64,
}

/// Binary quadratic form `(a, b, c)`, used as a class key.
type Form = (Int, Int, Int);

impl QuadraticOrder {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::invalid("d must differ from 0 and 1"));
        }
        if d.unsigned_abs() > (1 << 40) {
            return Err(Error::bound("|d|", d.unsigned_abs(), 1u64 << 40));
        }
        let m = d.unsigned_abs();
        let mut p = 2u64;
        while p * p <= m {
            if m.is_multiple_of(p * p) {
                return Err(Error::invalid(format!("{d} is not squarefree")));
            }
            p += 1;
        }
        Ok(if d.rem_euclid(4) == 1 {
            QuadraticOrder {
                d,
                t: 1,
                n: (1 - d) / 4,
                disc: d,
            }
        } else {
            QuadraticOrder {
                d,
                t: 0,
                n: -d,
                disc: 4 * d,
            }
        })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    pub fn is_imaginary(&self) -> bool {
        self.d < 0
    }

    fn check_bound(&self, bound: u64) -> Result<()> {
        if self.disc.unsigned_abs() > bound {
            return Err(Error::bound("|discriminant|", self.disc.unsigned_abs(), bound));
        }
        Ok(())
    }

    pub fn omega(&self) -> QuadElem {
        if self.t == 1 {
            QuadElem::new(Rat::new(1.into(), 2.into()), Rat::new(1.into(), 2.into()))
        } else {
            QuadElem::new(Rat::zero(), Rat::one())
        }
    }

    /// `x + yω`.
    pub fn from_omega(&self, x: impl Into<Int>, y: impl Into<Int>) -> QuadElem {
        let (x, y) = (rat(x), rat(y));
        let w = self.omega();
        QuadElem::new(x + &y * &w.a, y * w.b)
    }

    /// Rational `(x, y)` with `e = x + yω`.
    pub fn omega_coords(&self, e: &QuadElem) -> (Rat, Rat) {
        if self.t == 1 {
            let y = &e.b * rat(2);
            (&e.a - &e.b, y)
        } else {
            (e.a.clone(), e.b.clone())
        }
    }

    pub fn is_integral(&self, e: &QuadElem) -> bool {
        let (x, y) = self.omega_coords(e);
        x.is_integer() && y.is_integer()
    }

    pub fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem::new(&x.a + &y.a, &x.b + &y.b)
    }

    pub fn sub(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem::new(&x.a - &y.a, &x.b - &y.b)
    }

    pub fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        let d = rat(self.d);
        QuadElem::new(
            &x.a * &y.a + d * &x.b * &y.b,
            &x.a * &y.b + &x.b * &y.a,
        )
    }

    /// The difference operator `s`.
    pub fn conj(&self, x: &QuadElem) -> QuadElem {
        QuadElem::new(x.a.clone(), -x.b.clone())
    }

    pub fn norm(&self, x: &QuadElem) -> Rat {
        &x.a * &x.a - rat(self.d) * &x.b * &x.b
    }

    pub fn inv(&self, x: &QuadElem) -> Option<QuadElem> {
        let n = self.norm(x);
        if n.is_zero() {
            return None;
        }
        let c = self.conj(x);
        Some(QuadElem::new(c.a / &n, c.b / n))
    }

    pub fn div(&self, x: &QuadElem, y: &QuadElem) -> Option<QuadElem> {
        Some(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &QuadElem, e: i64) -> Option<QuadElem> {
        let mut base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = QuadElem::integer(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Some(acc)
    }

    pub fn is_unit(&self, x: &QuadElem) -> bool {
        self.is_integral(x) && self.norm(x).abs().is_one()
    }

    /// Real value for `d > 0`.
    pub fn approx(&self, x: &QuadElem) -> f64 {
        x.a.to_f64().unwrap_or(f64::NAN) + x.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    pub fn format(&self, x: &QuadElem) -> String {
        let root = format!("√{}", self.d);
        match (x.a.is_zero(), x.b.is_zero()) {
            (_, true) => x.a.to_string(),
            (true, false) if x.b.is_one() => root,
            (true, false) => format!("{}{root}", x.b),
            (false, false) => {
                let sign = if x.b.is_negative() { "-" } else { "+" };
                let b = x.b.abs();
                if b.is_one() {
                    format!("{} {sign} {root}", x.a)
                } else {
                    format!("{} {sign} {b}{root}", x.a)
                }
            }
        }
    }

    // -----------------------------------------------------------------------
    // Ideals

    pub fn unit_ideal(&self) -> FractionalIdeal {
        FractionalIdeal {
            den: Int::one(),
            a: Int::one(),
            b: Int::zero(),
            g: Int::one(),
        }
    }

    /// The ℤ-lattice spanned by `elems`, in Hermite form; `None` below full rank.
    fn lattice(&self, elems: &[QuadElem]) -> Option<FractionalIdeal> {
        let coords: Vec<(Rat, Rat)> = elems.iter().map(|e| self.omega_coords(e)).collect();
        let den = coords
            .iter()
            .fold(Int::one(), |acc, (x, y)| acc.lcm(x.denom()).lcm(y.denom()));
        let vecs: Vec<(Int, Int)> = coords
            .iter()
            .map(|(x, y)| {
                (
                    (x * rat(den.clone())).to_integer(),
                    (y * rat(den.clone())).to_integer(),
                )
            })
            .collect();
        let (a, b, g) = hnf2(&vecs)?;
        let content = den.gcd(&a).gcd(&b).gcd(&g);
        Some(FractionalIdeal {
            den: den / &content,
            a: a / &content,
            b: b / &content,
            g: g / &content,
        })
    }

    /// The ideal generated by `gens` as an `O`-module.
    pub fn ideal(&self, gens: &[QuadElem]) -> Result<FractionalIdeal> {
        let w = self.omega();
        let spanning: Vec<QuadElem> = gens
            .iter()
            .flat_map(|e| [e.clone(), self.mul(e, &w)])
            .collect();
        self.lattice(&spanning)
            .ok_or_else(|| Error::invalid("the zero ideal is not invertible"))
    }

    pub fn principal(&self, e: &QuadElem) -> Result<FractionalIdeal> {
        self.ideal(std::slice::from_ref(e))
    }

    /// `(1/den)·(aℤ + (b + gω)ℤ)`, rejected unless it is an `O`-ideal.
    pub fn ideal_from_hnf(&self, den: Int, a: Int, b: Int, g: Int) -> Result<FractionalIdeal> {
        if !den.is_positive() || !a.is_positive() || !g.is_positive() {
            return Err(Error::invalid("den, a and g must be positive"));
        }
        let basis = [
            self.from_omega(a.clone(), 0),
            self.from_omega(b.clone(), g.clone()),
        ];
        let scale = QuadElem::new(Rat::new(1.into(), den), Rat::zero());
        let gens: Vec<QuadElem> = basis.iter().map(|e| self.mul(e, &scale)).collect();
        let ideal = self.ideal(&gens)?;
        if self.lattice(&gens).as_ref() != Some(&ideal) {
            return Err(Error::invalid("lattice is not closed under multiplication by ω"));
        }
        Ok(ideal)
    }

    pub fn ideal_mul(&self, i: &FractionalIdeal, j: &FractionalIdeal) -> FractionalIdeal {
        let (bi, bj) = (i.basis(self), j.basis(self));
        let gens: Vec<QuadElem> = bi
            .iter()
            .flat_map(|x| bj.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.mul(x, y))
            .collect();
        self.ideal(&gens).expect("product of nonzero ideals")
    }

    pub fn ideal_conj(&self, i: &FractionalIdeal) -> FractionalIdeal {
        let gens: Vec<QuadElem> = i.basis(self).iter().map(|e| self.conj(e)).collect();
        self.ideal(&gens).expect("conjugate of a nonzero ideal")
    }

    pub fn ideal_scale(&self, i: &FractionalIdeal, c: &QuadElem) -> FractionalIdeal {
        let gens: Vec<QuadElem> = i.basis(self).iter().map(|e| self.mul(e, c)).collect();
        self.ideal(&gens).expect("scaling by a nonzero element")
    }

    /// `I⁻¹ = s(I)/N(I)`.
    pub fn ideal_inv(&self, i: &FractionalIdeal) -> FractionalIdeal {
        let n = i.norm();
        let c = QuadElem::new(Rat::one() / n, Rat::zero());
        self.ideal_scale(&self.ideal_conj(i), &c)
    }

    fn form_of(&self, i: &FractionalIdeal) -> Form {
        let (a, b) = i.primitive_part();
        let bf = &b * 2 + self.t;
        let c = (&b * &b + &b * self.t + self.n) / &a;
        (a, bf, c)
    }

    /// Primitive integral ideal `[a, (B − t)/2 + ω]` of a form with `a > 0`.
    fn ideal_of_form(&self, f: &Form) -> FractionalIdeal {
        let (a, bf, _) = f;
        let b: Int = (bf - self.t) / 2;
        let b = b.mod_floor(a);
        FractionalIdeal {
            den: Int::one(),
            a: a.clone(),
            b,
            g: Int::one(),
        }
    }

    /// Canonical class key and a small representative ideal of the class.
    fn class_key(&self, i: &FractionalIdeal) -> (Form, FractionalIdeal) {
        let f = self.form_of(i);
        let disc = Int::from(self.disc);
        if self.d < 0 {
            let r = reduce_definite(f, &disc);
            let rep = self.ideal_of_form(&r);
            (r, rep)
        } else {
            let cyc = reduced_cycle(f.clone(), &disc);
            let rep = self.ideal_of_form(cyc.iter().find(|g| g.0.is_positive()).unwrap());
            // Ideal classes ignore the sign of generators' norms, which swaps f with (−a, b, −c).
            let twisted = reduced_cycle((-f.0, f.1, -f.2), &disc);
            let key = cyc.into_iter().chain(twisted).min().unwrap();
            (key, rep)
        }
    }

    /// Whether two ideals lie in the same class.
    pub fn equivalent(&self, i: &FractionalIdeal, j: &FractionalIdeal) -> bool {
        self.class_key(i).0 == self.class_key(j).0
    }

    /// Some `α` with `(α) = I`, for imaginary fields; `None` when `I` is not principal.
    pub fn principal_generator(&self, i: &FractionalIdeal) -> Result<Option<QuadElem>> {
        if self.d >= 0 {
            return Err(Error::Unsupported(
                "generators of principal ideals are only searched in imaginary fields".into(),
            ));
        }
        let (a, b) = i.primitive_part();
        let (_, bf, c) = self.form_of(i);
        // a·x² + bf·xy + c·y² = 1, with |y| ≤ √(4a/|D|).
        let abs_d = Int::from(self.disc.unsigned_abs());
        let ymax: Int = Roots::sqrt(&(&a * 4 / &abs_d)) + 1;
        let mut y = -ymax.clone();
        while y <= ymax {
            let delta: Int = Int::from(self.disc) * &y * &y + &a * 4;
            if !delta.is_negative() {
                let r = delta.sqrt();
                if &r * &r == delta {
                    for num in [-&bf * &y + &r, -&bf * &y - &r] {
                        let den = &a * 2;
                        if num.is_multiple_of(&den) {
                            let x = num / den;
                            debug_assert!((&a * &x * &x + &bf * &x * &y + &c * &y * &y).is_one());
                            let alpha = self.from_omega(&a * &x + &b * &y, y.clone());
                            let scale = QuadElem::new(Rat::new(i.g.clone(), i.den.clone()), Rat::zero());
                            return Ok(Some(self.mul(&alpha, &scale)));
                        }
                    }
                }
            }
            y += 1;
        }
        Ok(None)
    }

    /// Prime ideals of norm at most `bound`, conjugate pairs adjacent.
    pub fn prime_ideals_up_to(&self, bound: u64) -> Vec<FractionalIdeal> {
        let mut out = Vec::new();
        for p in 2..=bound {
            if !crate::field::is_prime(p) {
                continue;
            }
            let p_i = p as i64;
            for r in 0..p_i {
                // ω ≡ r modulo a prime above p.
                if (r * r - self.t * r + self.n).rem_euclid(p_i) == 0 {
                    out.push(FractionalIdeal {
                        den: Int::one(),
                        a: Int::from(p),
                        b: Int::from((-r).rem_euclid(p_i)),
                        g: Int::one(),
                    });
                }
            }
        }
        out
    }

    pub fn minkowski_bound(&self) -> f64 {
        let root = (self.disc.unsigned_abs() as f64).sqrt();
        if self.d < 0 {
            2.0 / std::f64::consts::PI * root
        } else {
            root / 2.0
        }
    }
}

/// Hermite form `(a, b, g)` of the lattice spanned by integer vectors `(x, y)`:
/// basis `(a, 0), (b, g)` with `0 ≤ b < a`. `None` when the rank is below 2.
fn hnf2(vecs: &[(Int, Int)]) -> Option<(Int, Int, Int)> {
    let mut pivot: Option<(Int, Int)> = None;
    let mut a = Int::zero();
    for (x, y) in vecs {
        if y.is_zero() {
            a = a.gcd(x);
            continue;
        }
        pivot = Some(match pivot {
            None => (x.clone(), y.clone()),
            Some((px, py)) => {
                let e = py.extended_gcd(y);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let other_x = &px * (y / &g) - x * (&py / &g);
                a = a.gcd(&other_x);
                (&s * &px + &t * x, g)
            }
        });
    }
    let (mut bx, mut g) = pivot?;
    if g.is_negative() {
        g = -g;
        bx = -bx;
    }
    if a.is_zero() {
        return None;
    }
    Some((a.clone(), bx.mod_floor(&a), g))
}

fn reduce_definite(f: Form, disc: &Int) -> Form {
    let (mut a, mut b, mut c) = f;
    loop {
        let two_a = &a * 2;
        let mut r = b.mod_floor(&two_a);
        if r > a {
            r -= &two_a;
        }
        if r != b {
            b = r;
            c = (&b * &b - disc) / (&a * 4);
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b.is_negative() {
            b = -b;
        }
        return (a, b, c);
    }
}

fn is_reduced_indefinite(f: &Form, s: &Int) -> bool {
    let (a, b, _) = f;
    let two_a = a.abs() * 2;
    b.is_positive() && b <= s && &two_a + b > *s && &two_a - b <= *s
}

/// One reduction step `(a, b, c) ↦ (c, r, (r² − D)/4c)` with `r ≡ −b (mod 2c)` normalized.
fn rho(f: &Form, disc: &Int, s: &Int) -> Form {
    let (_, b, c) = f;
    let abs_c = c.abs();
    let two_c = &abs_c * 2;
    let r = if &abs_c > s {
        let mut r = (-b).mod_floor(&two_c);
        if r > abs_c {
            r -= &two_c;
        }
        r
    } else {
        // The representative of −b in [s − 2|c| + 1, s].
        let low = s - &two_c + 1;
        let shift: Int = -b - &low;
        &low + shift.mod_floor(&two_c)
    };
    let next_c = (&r * &r - disc) / (c * 4);
    (c.clone(), r, next_c)
}

/// The cycle of reduced indefinite forms properly equivalent to `f`.
fn reduced_cycle(f: Form, disc: &Int) -> Vec<Form> {
    let s = disc.sqrt();
    let mut g = f;
    while !is_reduced_indefinite(&g, &s) {
        g = rho(&g, disc, &s);
    }
    let start = g.clone();
    let mut cycle = vec![start.clone()];
    loop {
        g = rho(&g, disc, &s);
        if g == start {
            return cycle;
        }
        cycle.push(g.clone());
    }
}

/// `(1/den)·(aℤ + (b + gω)ℤ)` in Hermite form: `g | a`, `g | b`, `0 ≤ b < a`,
/// and `gcd(den, a, b, g) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FractionalIdeal {
    den: Int,
    a: Int,
    b: Int,
    g: Int,
}

impl FractionalIdeal {
    pub fn den(&self) -> &Int {
        &self.den
    }

    pub fn a(&self) -> &Int {
        &self.a
    }

    pub fn b(&self) -> &Int {
        &self.b
    }

    pub fn g(&self) -> &Int {
        &self.g
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// `a·g/den²`.
    pub fn norm(&self) -> Rat {
        Rat::new(&self.a * &self.g, &self.den * &self.den)
    }

    pub fn basis(&self, o: &QuadraticOrder) -> [QuadElem; 2] {
        let scale = QuadElem::new(Rat::new(1.into(), self.den.clone()), Rat::zero());
        [
            o.mul(&o.from_omega(self.a.clone(), 0), &scale),
            o.mul(&o.from_omega(self.b.clone(), self.g.clone()), &scale),
        ]
    }

    /// `(a/g, b/g)`: the ideal is `(g/den)·[a/g, b/g + ω]`.
    fn primitive_part(&self) -> (Int, Int) {
        (&self.a / &self.g, &self.b / &self.g)
    }

    pub fn contains(&self, o: &QuadraticOrder, e: &QuadElem) -> bool {
        let (x, y) = o.omega_coords(e);
        let (x, y) = (x * rat(self.den.clone()), y * rat(self.den.clone()));
        if !x.is_integer() || !y.is_integer() {
            return false;
        }
        let (x, y) = (x.to_integer(), y.to_integer());
        if !y.is_multiple_of(&self.g) {
            return false;
        }
        (x - &self.b * (y / &self.g)).is_multiple_of(&self.a)
    }

    pub fn notation(&self, o: &QuadraticOrder) -> String {
        let [e0, e1] = self.basis(o);
        format!("({}, {})", o.format(&e0), o.format(&e1))
    }
}

impl fmt::Display for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "[{}, {} + {}ω]", self.a, self.b, self.g)
        } else {
            write!(f, "(1/{})[{}, {} + {}ω]", self.den, self.a, self.b, self.g)
        }
    }
}

// ---------------------------------------------------------------------------
// Class group

#[derive(Clone, Debug)]
pub struct ClassGroupResult {
    pub group: FgAbGroup,
    /// One integral ideal per class; the principal class first.
    pub representatives: Vec<FractionalIdeal>,
    /// Canonical coordinates of each representative's class.
    pub coords: Vec<Vec<Int>>,
    order: QuadraticOrder,
    keys: HashMap<Form, usize>,
}

impl ClassGroupResult {
    pub fn order(&self) -> usize {
        self.representatives.len()
    }

    /// Index of the representative equivalent to `i`.
    pub fn class_index(&self, i: &FractionalIdeal) -> usize {
        self.keys[&self.order.class_key(i).0]
    }

    pub fn class_of(&self, i: &FractionalIdeal) -> Vec<Int> {
        self.coords[self.class_index(i)].clone()
    }
}

/// Class group of the maximal order. Imaginary fields enumerate reduced forms;
/// real fields close up the classes of primes below the Minkowski bound.
pub fn class_group(o: &QuadraticOrder, bound: u64) -> Result<ClassGroupResult> {
    o.check_bound(bound)?;
    if o.is_imaginary() {
        let disc = Int::from(o.disc);
        let amax = ((o.disc.unsigned_abs() / 3) as f64).sqrt() as i64 + 1;
        let mut reps = vec![o.unit_ideal()];
        let unit_key = o.class_key(&reps[0]).0;
        for a in 1..=amax {
            for b in -a + 1..=a {
                let num = Int::from(b * b) - &disc;
                if !num.is_multiple_of(&Int::from(4 * a)) {
                    continue;
                }
                let c = num / (4 * a);
                let f: Form = (Int::from(a), Int::from(b), c);
                if reduce_definite(f.clone(), &disc) != f || f == unit_key {
                    continue;
                }
                reps.push(o.ideal_of_form(&f));
            }
        }
        class_group_from_representatives(o, reps)
    } else {
        class_group_via_primes(o, bound)
    }
}

/// Class group generated by prime ideals of norm below the Minkowski bound.
pub fn class_group_via_primes(o: &QuadraticOrder, bound: u64) -> Result<ClassGroupResult> {
    o.check_bound(bound)?;
    let gens = o.prime_ideals_up_to(o.minkowski_bound().floor() as u64);
    let mut reps = vec![o.unit_ideal()];
    let mut seen: HashSet<Form> = HashSet::from([o.class_key(&reps[0]).0]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for p in &gens {
            let (key, rep) = o.class_key(&o.ideal_mul(&reps[i], p));
            if seen.insert(key) {
                reps.push(rep);
                queue.push_back(reps.len() - 1);
            }
        }
    }
    class_group_from_representatives(o, reps)
}

/// Class group structure from one ideal per class (the principal class first).
pub fn class_group_from_representatives(
    o: &QuadraticOrder,
    reps: Vec<FractionalIdeal>,
) -> Result<ClassGroupResult> {
    let mut keys = HashMap::new();
    for (i, r) in reps.iter().enumerate() {
        if keys.insert(o.class_key(r).0, i).is_some() {
            return Err(Error::invalid(format!("representative {i} repeats a class")));
        }
    }
    if keys.get(&o.class_key(&o.unit_ideal()).0) != Some(&0) {
        return Err(Error::invalid("the first representative must be principal"));
    }
    let mut missing = false;
    let mut mul = |i: usize, j: usize| match keys.get(&o.class_key(&o.ideal_mul(&reps[i], &reps[j])).0) {
        Some(&k) => k,
        None => {
            missing = true;
            0
        }
    };
    let mut table = vec![vec![0; reps.len()]; reps.len()];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = mul(i, j);
        }
    }
    if missing {
        return Err(Error::invalid("representatives do not cover the class group"));
    }
    let tab = tabulate_abelian_group(reps.len(), 0, |i, j| table[i][j])?;
    Ok(ClassGroupResult {
        group: tab.group,
        representatives: reps,
        coords: tab.coords,
        order: o.clone(),
        keys,
    })
}

// ---------------------------------------------------------------------------
// Units

#[derive(Clone, Debug)]
pub struct UnitGroup {
    /// `ℤ/w` for imaginary fields, `ℤ/2 ⊕ ℤ` for real ones.
    pub group: FgAbGroup,
    /// A root of unity of order `w`, then the fundamental unit `ε > 1` for real fields.
    pub generators: Vec<QuadElem>,
}

impl UnitGroup {
    /// Coordinates of a unit; `None` for non-units.
    pub fn log(&self, o: &QuadraticOrder, u: &QuadElem) -> Option<Vec<Int>> {
        if !o.is_unit(u) {
            return None;
        }
        let zeta = &self.generators[0];
        let w = self.group.torsion()[0].to_u64().unwrap();
        if o.is_imaginary() {
            let mut x = QuadElem::integer(1);
            for k in 0..w {
                if &x == u {
                    return Some(vec![Int::from(k)]);
                }
                x = o.mul(&x, zeta);
            }
            return None;
        }
        let eps = &self.generators[1];
        // The larger of |u|, |u'| is |a| + |b|√d, computed without cancellation.
        let big = u.a.abs().to_f64()? + u.b.abs().to_f64()? * (o.d as f64).sqrt();
        let k = (big.ln() / o.approx(eps).ln()).round() as i64;
        let same_sign = u.a.is_negative() == u.b.is_negative() || u.a.is_zero() || u.b.is_zero();
        let k = if same_sign && big > 1.0 { k } else { -k };
        for k in [k, -k] {
            let e = o.pow(eps, k)?;
            if &e == u {
                return Some(vec![Int::zero(), Int::from(k)]);
            }
            if e == QuadElem::new(-u.a.clone(), -u.b.clone()) {
                return Some(vec![Int::one(), Int::from(k)]);
            }
        }
        None
    }
}

pub fn unit_group(o: &QuadraticOrder) -> Result<UnitGroup> {
    if o.is_imaginary() {
        // Roots of unity have both ω-coordinates in {−1, 0, 1}.
        let mut roots = Vec::new();
        for x in -2..=2 {
            for y in -2..=2 {
                let e = o.from_omega(x, y);
                if o.norm(&e).is_one() {
                    roots.push(e);
                }
            }
        }
        let w = roots.len();
        let zeta = roots
            .into_iter()
            .find(|z| {
                (1..w).all(|k| o.pow(z, k as i64).unwrap() != QuadElem::integer(1))
            })
            .expect("some root of unity generates μ(O)");
        Ok(UnitGroup {
            group: FgAbGroup::cyclic(w as i64),
            generators: vec![zeta],
        })
    } else {
        Ok(UnitGroup {
            group: FgAbGroup::new(1, vec![Int::from(2)])?,
            generators: vec![QuadElem::integer(-1), fundamental_unit(o)?],
        })
    }
}

/// Fundamental unit `ε > 1` from the continued fraction of `ω`: the first
/// convergent `p/q` with `N(p − qω) = ±1` gives `ε = ±(p − qω')`.
pub fn fundamental_unit(o: &QuadraticOrder) -> Result<QuadElem> {
    if o.is_imaginary() {
        return Err(Error::invalid("imaginary fields have no fundamental unit"));
    }
    let nn = Int::from(o.disc);
    let s = nn.sqrt();
    let (mut pp, mut qq) = (Int::from(o.t), Int::from(2));
    let (mut p1, mut p2) = (Int::one(), Int::zero());
    let (mut q1, mut q2) = (Int::zero(), Int::one());
    let limit = 4 * o.disc.unsigned_abs() + 100;
    for _ in 0..limit {
        let a = if qq.is_positive() {
            (&pp + &s).div_floor(&qq)
        } else {
            -(&pp + &s).div_floor(&(-&qq)) - 1
        };
        let p = &a * &p1 + &p2;
        let q = &a * &q1 + &q2;
        let cand = o.from_omega(p.clone(), -q.clone());
        if q.is_positive() && o.norm(&cand).abs().is_one() {
            let eps = o.conj(&cand);
            return Ok(if o.approx(&eps) > 0.0 {
                eps
            } else {
                QuadElem::new(-eps.a, -eps.b)
            });
        }
        (p2, p1) = (p1, p);
        (q2, q1) = (q1, q);
        pp = &a * &qq - &pp;
        qq = (&nn - &pp * &pp) / &qq;
    }
    Err(Error::invalid("continued fraction did not reach a unit"))
}

/// `coker(u ↦ s(u)/u)` on the unit group, with the projection from unit coordinates.
pub fn as_units(o: &QuadraticOrder) -> Result<(FgAbGroup, GroupHom)> {
    let (twist, _) = unit_twist(o)?;
    Ok(coker_of_hom(&twist))
}

fn unit_twist(o: &QuadraticOrder) -> Result<(GroupHom, UnitGroup)> {
    let units = unit_group(o)?;
    let cols: Vec<Vec<Int>> = units
        .generators
        .iter()
        .map(|u| {
            let v = o.div(&o.conj(u), u).unwrap();
            units.log(o, &v).expect("s(u)/u is a unit")
        })
        .collect();
    let m = IntMatrix::from_columns(units.group.ngens(), &cols);
    Ok((GroupHom::new(units.group.clone(), units.group.clone(), m)?, units))
}

// ---------------------------------------------------------------------------
// Difference Picard group

/// An invertible difference module `(I, x ↦ λ·s(x))`, requiring `λ·s(I) = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceIdealPair {
    pub ideal: FractionalIdeal,
    pub scalar: QuadElem,
}

impl DifferenceIdealPair {
    pub fn new(o: &QuadraticOrder, ideal: FractionalIdeal, scalar: QuadElem) -> Result<Self> {
        let twisted = o.ideal_scale(&o.ideal_conj(&ideal), &scalar);
        if twisted != ideal {
            return Err(Error::invalid("λ·s(I) differs from I"));
        }
        Ok(DifferenceIdealPair { ideal, scalar })
    }
}

#[derive(Clone, Debug)]
pub struct DifferencePicard {
    pub group: FgAbGroup,
    /// Canonical pair for each element, indexed like `coords`.
    pub elements: Vec<DifferenceIdealPair>,
    pub coords: Vec<Vec<Int>>,
    pub class_group: FgAbGroup,
    pub as_units: FgAbGroup,
    /// `Cl^s`, computed from the action of `s` on the class group.
    pub fixed_classes: FgAbGroup,
    /// Number of classes admitting a compatible `λ`.
    pub classes_hit: usize,
    /// `1 → AS(units) → Pic_s → Cl^s → 1` checked on the explicit maps.
    pub ses_exact: bool,
}

impl DifferencePicard {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `|AS(units)|·|Cl^s|`.
    pub fn ses_order(&self) -> Int {
        self.as_units.order().unwrap() * self.fixed_classes.order().unwrap()
    }

    /// Whether the image in the class group is all of `Cl^s`.
    pub fn surjects_onto_fixed_classes(&self) -> bool {
        Int::from(self.classes_hit) == self.fixed_classes.order().unwrap()
    }
}

/// `Pic_s(O)` for an imaginary quadratic field with `s` the conjugation, by
/// classifying pairs `(I, λ)` modulo `(I, λ) ~ (cI, λ·c/s(c))`.
pub fn difference_picard(o: &QuadraticOrder, bound: u64) -> Result<DifferencePicard> {
    let cl = class_group(o, bound)?;
    difference_picard_with(o, &cl)
}

/// As [`difference_picard`], with the class representatives supplied by `cl`.
pub fn difference_picard_with(o: &QuadraticOrder, cl: &ClassGroupResult) -> Result<DifferencePicard> {
    if !o.is_imaginary() {
        return Err(Error::Unsupported(
            "difference Picard groups are computed for imaginary fields".into(),
        ));
    }
    let (twist, units) = unit_twist(o)?;
    let (as_group, as_proj) = coker_of_hom(&twist);
    let as_elems: Vec<Vec<Int>> = as_group.enumerate()?.map(|e| e.coords().to_vec()).collect();
    let w = units.group.torsion()[0].to_u64().unwrap();
    let as_rep_unit = |a: &[Int]| -> QuadElem {
        let k = (0..w)
            .find(|&k| as_proj.apply_coords(&[Int::from(k)]) == as_group.reduce(a))
            .unwrap();
        o.pow(&units.generators[0], k as i64).unwrap()
    };

    // J = γ·I_j.
    let locate = |j_ideal: &FractionalIdeal| -> Result<(usize, QuadElem)> {
        let j = cl.class_index(j_ideal);
        let rep = &cl.representatives[j];
        if rep == j_ideal {
            return Ok((j, QuadElem::integer(1)));
        }
        let ratio = o.ideal_mul(j_ideal, &o.ideal_inv(rep));
        let gamma = o
            .principal_generator(&ratio)?
            .ok_or_else(|| Error::invalid("class keys disagree with principality"))?;
        Ok((j, gamma))
    };

    let h = cl.order();
    let mut fixed = Vec::new();
    let mut base_scalar: HashMap<usize, QuadElem> = HashMap::new();
    let mut perm = Vec::with_capacity(h);
    for j in 0..h {
        let (k, alpha) = locate(&o.ideal_conj(&cl.representatives[j]))?;
        perm.push(k);
        if k == j {
            // s(I_j) = α·I_j, so λ = α⁻¹ satisfies λ·s(I_j) = I_j.
            fixed.push(j);
            base_scalar.insert(j, o.inv(&alpha).unwrap());
        }
    }

    let n_as = as_elems.len();
    let mut elements = Vec::new();
    for &j in &fixed {
        for a in &as_elems {
            let lambda = o.mul(&base_scalar[&j], &as_rep_unit(a));
            elements.push(DifferenceIdealPair::new(o, cl.representatives[j].clone(), lambda)?);
        }
    }
    let fixed_pos: HashMap<usize, usize> = fixed.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    let canonical = |ideal: &FractionalIdeal, lambda: &QuadElem| -> Result<usize> {
        let (j, gamma) = locate(ideal)?;
        // (γI_j, λ) ~ (I_j, λ·s(γ)/γ).
        let moved = o.mul(lambda, &o.div(&o.conj(&gamma), &gamma).unwrap());
        let u = o.div(&moved, &base_scalar[&j]).unwrap();
        let log = units
            .log(o, &u)
            .ok_or_else(|| Error::invalid("scalar ratio is not a unit"))?;
        let a = as_proj.apply_coords(&log);
        let ai = as_elems.iter().position(|x| *x == a).unwrap();
        Ok(fixed_pos[&j] * n_as + ai)
    };
    let mut table = vec![vec![0usize; elements.len()]; elements.len()];
    for (x, ex) in elements.iter().enumerate() {
        for (y, ey) in elements.iter().enumerate() {
            table[x][y] = canonical(
                &o.ideal_mul(&ex.ideal, &ey.ideal),
                &o.mul(&ex.scalar, &ey.scalar),
            )?;
        }
    }
    let identity = canonical(&o.unit_ideal(), &QuadElem::integer(1))?;
    let tab = tabulate_abelian_group(elements.len(), identity, |x, y| table[x][y])?;

    // The exact sequence on explicit maps.
    let j0 = cl.class_index(&o.unit_ideal());
    let inject_cols: Vec<Vec<Int>> = (0..as_group.ngens())
        .map(|i| {
            let mut e = vec![Int::zero(); as_group.ngens()];
            e[i] = Int::one();
            let ai = as_elems.iter().position(|x| *x == as_group.reduce(&e)).unwrap();
            tab.coords[fixed_pos[&j0] * n_as + ai].clone()
        })
        .collect();
    let inject = GroupHom::new(
        as_group.clone(),
        tab.group.clone(),
        IntMatrix::from_columns(tab.group.ngens(), &inject_cols),
    )?;
    let surject_cols: Vec<Vec<Int>> = (0..tab.group.ngens())
        .map(|i| {
            let mut e = vec![Int::zero(); tab.group.ngens()];
            e[i] = Int::one();
            let x = tab.index_of(&e).unwrap();
            cl.coords[fixed[x / n_as]].clone()
        })
        .collect();
    let surject = GroupHom::new(
        tab.group.clone(),
        cl.group.clone(),
        IntMatrix::from_columns(cl.group.ngens(), &surject_cols),
    )?;

    // Cl^s from the induced action on class coordinates.
    let endo_cols: Vec<Vec<Int>> = (0..cl.group.ngens())
        .map(|i| {
            let mut e = vec![Int::zero(); cl.group.ngens()];
            e[i] = Int::one();
            let j = cl
                .coords
                .iter()
                .position(|c| *c == cl.group.reduce(&e))
                .unwrap();
            cl.coords[perm[j]].clone()
        })
        .collect();
    let s_on_cl = GroupHom::new(
        cl.group.clone(),
        cl.group.clone(),
        IntMatrix::from_columns(cl.group.ngens(), &endo_cols),
    )?;
    let fixed_classes = SigmaModule::new(s_on_cl)?.invariants().0;

    let ses_exact = inject.is_injective() && image_equals_kernel(&inject, &surject);
    Ok(DifferencePicard {
        group: tab.group,
        elements,
        coords: tab.coords,
        class_group: cl.group.clone(),
        as_units: as_group,
        fixed_classes,
        classes_hit: fixed.len(),
        ses_exact,
    })
}

/// Artin–Schreier group of the units against the units of the fixed ring `ℤ`.
#[derive(Clone, Debug)]
pub struct PicexReport {
    pub as_units: FgAbGroup,
    /// Units fixed by `s`.
    pub fixed_units: FgAbGroup,
    /// `𝔾ₘ(ℤ) = {±1}`.
    pub base_units: FgAbGroup,
    pub matches: bool,
}

pub fn picex_report(o: &QuadraticOrder) -> Result<PicexReport> {
    let (twist, _) = unit_twist(o)?;
    let (as_group, _) = coker_of_hom(&twist);
    let (fixed_units, _) = kernel(&twist);
    let base_units = FgAbGroup::cyclic(2);
    let matches = as_group == base_units;
    Ok(PicexReport {
        as_units: as_group,
        fixed_units,
        base_units,
        matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(d: i64) -> QuadraticOrder {
        QuadraticOrder::new(d).unwrap()
    }

    fn class_notation(d: i64) -> String {
        class_group(&order(d), DEFAULT_DISCRIMINANT_BOUND)
            .unwrap()
            .group
            .notation()
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(QuadraticOrder::new(12).is_err());
        assert!(QuadraticOrder::new(1).is_err());
        assert_eq!(order(-3).discriminant(), -3);
        assert_eq!(order(-5).discriminant(), -20);
    }

    #[test]
    fn units() {
        for (d, w) in [(-1, 4), (-3, 6), (-2, 2), (-5, 2), (-7, 2)] {
            assert_eq!(unit_group(&order(d)).unwrap().group, FgAbGroup::cyclic(w), "d = {d}");
        }
        let o = order(2);
        let eps = fundamental_unit(&o).unwrap();
        assert_eq!(eps, QuadElem::integer(1).clone().add_sqrt(1));
        assert_eq!(fundamental_unit(&order(3)).unwrap(), QuadElem::integer(2).add_sqrt(1));
        assert_eq!(fundamental_unit(&order(5)).unwrap(), order(5).omega());
        assert_eq!(
            fundamental_unit(&order(94)).unwrap(),
            QuadElem::integer(2143295).add_sqrt(221064)
        );
        let u = unit_group(&order(7)).unwrap();
        let x = order(7).pow(&u.generators[1], -3).unwrap();
        let minus_x = QuadElem::new(-x.a.clone(), -x.b.clone());
        assert_eq!(u.log(&order(7), &minus_x), Some(vec![Int::one(), Int::from(-3)]));
    }

    impl QuadElem {
        fn add_sqrt(mut self, b: i64) -> Self {
            self.b += rat(b);
            self
        }
    }

    #[test]
    fn imaginary_class_groups() {
        for (d, cl) in [
            (-1, "0"),
            (-2, "0"),
            (-3, "0"),
            (-5, "Z/2"),
            (-6, "Z/2"),
            (-14, "Z/4"),
            (-21, "Z/2 + Z/2"),
            (-23, "Z/3"),
            (-47, "Z/5"),
            (-30, "Z/2 + Z/2"),
            (-105, "Z/2 + Z/2 + Z/2"),
        ] {
            assert_eq!(class_notation(d), cl, "d = {d}");
            let via_primes = class_group_via_primes(&order(d), DEFAULT_DISCRIMINANT_BOUND).unwrap();
            assert_eq!(via_primes.group.notation(), cl, "d = {d} via primes");
        }
        let o = order(-5);
        let cl = class_group(&o, DEFAULT_DISCRIMINANT_BOUND).unwrap();
        let two = o.ideal(&[QuadElem::integer(2), o.from_omega(1, 1)]).unwrap();
        assert_eq!(cl.representatives[1], two);
    }

    #[test]
    fn real_class_groups() {
        for (d, h) in [(2, 1), (3, 1), (5, 1), (6, 1), (7, 1), (10, 2), (15, 2), (26, 2), (34, 2), (79, 3), (82, 4), (223, 3)] {
            let cl = class_group(&order(d), DEFAULT_DISCRIMINANT_BOUND).unwrap();
            assert_eq!(cl.order(), h, "d = {d}");
        }
    }

    /// Principality by searching all elements with both embeddings below √(N·ε).
    fn principal_by_search(o: &QuadraticOrder, i: &FractionalIdeal) -> bool {
        let eps = o.approx(&fundamental_unit(o).unwrap());
        let n = i.norm().to_f64().unwrap();
        let r = (n * eps).sqrt();
        let [e0, e1] = i.basis(o);
        let (v0, w0) = (o.approx(&e0), o.approx(&o.conj(&e0)));
        let (v1, w1) = (o.approx(&e1), o.approx(&o.conj(&e1)));
        // Solve for the coefficient box containing |x v0 + y v1| ≤ r and |x w0 + y w1| ≤ r.
        let det = v0 * w1 - v1 * w0;
        let xmax = ((w1.abs() + v1.abs()) * r / det.abs()).ceil() as i64 + 1;
        let ymax = ((w0.abs() + v0.abs()) * r / det.abs()).ceil() as i64 + 1;
        for x in -xmax..=xmax {
            for y in -ymax..=ymax {
                let e = o.add(
                    &o.mul(&e0, &QuadElem::integer(x)),
                    &o.mul(&e1, &QuadElem::integer(y)),
                );
                if !e.is_zero() && o.norm(&e).abs() == i.norm() {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn real_principality_matches_search() {
        for d in [10, 15, 26, 34, 79, 82] {
            let o = order(d);
            let unit_key = o.class_key(&o.unit_ideal()).0;
            for p in o.prime_ideals_up_to(40) {
                assert_eq!(
                    o.class_key(&p).0 == unit_key,
                    principal_by_search(&o, &p),
                    "d = {d}, {p}"
                );
            }
        }
    }

    #[test]
    fn ideal_arithmetic() {
        let o = order(-5);
        let p = o.ideal(&[QuadElem::integer(3), o.from_omega(1, 1)]).unwrap();
        assert_eq!(o.ideal_mul(&p, &o.ideal_inv(&p)), o.unit_ideal());
        let sq = o.ideal_mul(&p, &p);
        assert_eq!(sq.norm(), rat(9));
        assert!(sq.contains(&o, &QuadElem::integer(9)));
        assert!(!sq.contains(&o, &QuadElem::integer(3)));
        assert!(o.ideal_from_hnf(Int::one(), Int::from(2), Int::zero(), Int::one()).is_err());
        assert!(o.ideal_from_hnf(Int::one(), Int::from(2), Int::one(), Int::one()).is_ok());
        let gen = o.principal_generator(&o.principal(&o.from_omega(3, 2)).unwrap()).unwrap().unwrap();
        assert_eq!(o.principal(&gen).unwrap(), o.principal(&o.from_omega(3, 2)).unwrap());
    }

    #[test]
    fn artin_schreier_units() {
        for d in [-1, -2, -3, -5] {
            assert_eq!(as_units(&order(d)).unwrap().0.notation(), "Z/2", "d = {d}");
        }
        for d in [-1, -2, -3] {
            assert!(picex_report(&order(d)).unwrap().matches);
        }
        // Real fields: the coinvariants of the units are not the units of ℤ.
        let r = picex_report(&order(2)).unwrap();
        assert_eq!(r.as_units.notation(), "Z/4");
        assert!(!r.matches);
    }

    #[test]
    fn difference_picard_small() {
        for (d, n) in [(-1, 2), (-3, 2), (-2, 2), (-5, 4), (-6, 4), (-14, 4)] {
            let pic = difference_picard(&order(d), DEFAULT_DISCRIMINANT_BOUND).unwrap();
            assert_eq!(pic.order(), n, "d = {d}");
            assert!(pic.ses_exact, "d = {d}");
            assert_eq!(Int::from(pic.order()), pic.ses_order(), "d = {d}");
            assert!(pic.surjects_onto_fixed_classes());
        }
        assert!(matches!(
            difference_picard(&order(2), DEFAULT_DISCRIMINANT_BOUND),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn picard_independent_of_representatives() {
        let o = order(-5);
        let cl = class_group(&o, DEFAULT_DISCRIMINANT_BOUND).unwrap();
        let direct = difference_picard_with(&o, &cl).unwrap();
        // Replace the non-principal representative by another ideal in its class.
        let alt_rep = o.ideal_mul(&cl.representatives[1], &o.principal(&o.from_omega(1, 3)).unwrap());
        assert!(o.equivalent(&alt_rep, &cl.representatives[1]));
        let cl2 = class_group_from_representatives(&o, vec![o.unit_ideal(), alt_rep]).unwrap();
        let again = difference_picard_with(&o, &cl2).unwrap();
        assert_eq!(direct.group, again.group);
    }
}
