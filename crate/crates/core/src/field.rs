//! Finite fields `F_{p^m}` with Frobenius powers as difference structures.
//!
//! Elements are encoded as integers `0..q` whose base-`p` digits are the
//! coefficients (constant term first) of the representing polynomial modulo
//! the field's monic irreducible modulus.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub type Elem = u64;

/// Above this order multiplication tables are not built and logarithms use baby-step giant-step.
pub const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    m: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: Elem,
    /// Prime factors of `q − 1`.
    order_primes: Vec<u64>,
    tables: Option<LogTables>,
    /// Baby steps `gʲ ↦ j`, built on first use when there are no tables.
    baby_steps: OnceLock<HashMap<Elem, u64>>,
}

#[derive(Clone, Debug)]
struct LogTables {
    exp: Vec<Elem>,
    log: Vec<u64>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn checked_power(p: u64, m: u32) -> Option<u64> {
    p.checked_pow(m).filter(|q| *q < (1 << 62))
}

impl FiniteField {
    /// `F_{p^m}` with the least irreducible modulus: monic of degree `m`, with the
    /// coefficient list `[c₀, …, c_{m−1}]` least in lexicographic order.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        Self::check_params(p, m)?;
        let q = checked_power(p, m).unwrap();
        // For m > 1 a zero constant term makes the polynomial divisible by x.
        let first = if m == 1 { 0 } else { q / p };
        for t in first..q {
            // c₀ is the most significant digit of t.
            let mut coeffs: Vec<u64> = (0..m).map(|i| (t / p.pow(m - 1 - i)) % p).collect();
            coeffs.push(1);
            if poly::is_irreducible(&coeffs, p) {
                return Self::build(p, m, coeffs);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// `F_{p^m}` with a caller-supplied monic modulus `[c₀, …, c_{m−1}, 1]` (the leading 1 may be omitted).
    pub fn with_modulus(p: u64, m: u32, modulus: &[u64]) -> Result<Self> {
        Self::check_params(p, m)?;
        let mut coeffs: Vec<u64> = modulus.to_vec();
        if coeffs.len() == m as usize {
            coeffs.push(1);
        }
        if coeffs.len() != m as usize + 1 || coeffs[m as usize] != 1 || coeffs.iter().any(|&c| c >= p) {
            return Err(Error::invalid(format!("modulus must be monic of degree {m} with coefficients below {p}")));
        }
        if !poly::is_irreducible(&coeffs, p) {
            return Err(Error::invalid(format!("modulus {coeffs:?} is reducible over F_{p}")));
        }
        Self::build(p, m, coeffs)
    }

    fn check_params(p: u64, m: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::invalid("extension degree must be positive"));
        }
        if checked_power(p, m).is_none() {
            return Err(Error::bound("field order", format!("{p}^{m}"), "2^62"));
        }
        Ok(())
    }

    fn build(p: u64, m: u32, modulus: Vec<u64>) -> Result<Self> {
        let q = p.pow(m);
        let mut f = FiniteField {
            p,
            m,
            q,
            modulus,
            generator: 1,
            order_primes: prime_factors(q - 1),
            tables: None,
            baby_steps: OnceLock::new(),
        };
        f.generator = (1..q)
            .find(|&g| f.order_primes.iter().all(|&l| f.pow_slow(g, (q - 1) / l) != 1))
            .unwrap_or(1);
        if q <= TABLE_LIMIT {
            let mut exp = Vec::with_capacity((q - 1) as usize);
            let mut log = vec![0u64; q as usize];
            let mut x = 1;
            for i in 0..q - 1 {
                exp.push(x);
                log[x as usize] = i;
                x = f.mul_slow(x, f.generator);
            }
            f.tables = Some(LogTables { exp, log });
        }
        Ok(f)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// A primitive element: the least encoding of multiplicative order `q − 1`.
    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn digits(&self, x: Elem) -> Vec<u64> {
        let mut x = x;
        (0..self.m)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u64]) -> Elem {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let (da, db) = (self.digits(a), self.digits(b));
        self.from_digits(&da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.from_digits(&self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// `c·a` for `c ∈ F_p`.
    pub fn scale(&self, c: u64, a: Elem) -> Elem {
        self.from_digits(&self.digits(a).iter().map(|&x| x * (c % self.p) % self.p).collect::<Vec<_>>())
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[((t.log[a as usize] + t.log[b as usize]) % (self.q - 1)) as usize]
                }
            }
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let prod = poly::mul(&self.digits(a), &self.digits(b), self.p);
        let r = poly::rem(&prod, &self.modulus, self.p);
        self.from_digits(&r)
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        match &self.tables {
            Some(t) if a != 0 => {
                let l = (t.log[a as usize] as u128 * e as u128 % (self.q - 1) as u128) as usize;
                t.exp[l]
            }
            _ => self.pow_slow(a, e),
        }
    }

    fn pow_slow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        Some(self.mul(a, self.inv(b)?))
    }

    /// `x ↦ x^{p^r}`; `r` is reduced modulo `m`.
    pub fn frobenius(&self, a: Elem, r: u32) -> Elem {
        self.pow(a, self.p.pow(r % self.m))
    }

    /// `gⁱ` for the primitive element `g`.
    pub fn exp(&self, i: u64) -> Elem {
        match &self.tables {
            Some(t) => t.exp[(i % (self.q - 1)) as usize],
            None => self.pow_slow(self.generator, i % (self.q - 1)),
        }
    }

    /// Discrete logarithm to the primitive element; `None` for zero.
    pub fn dlog(&self, a: Elem) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            return Some(t.log[a as usize]);
        }
        // Baby-step giant-step.
        let n = self.q - 1;
        let s = (n as f64).sqrt().ceil() as u64 + 1;
        let baby = self.baby_steps.get_or_init(|| {
            let mut baby = HashMap::with_capacity(s as usize);
            let mut x = 1;
            for j in 0..s {
                baby.entry(x).or_insert(j);
                x = self.mul_slow(x, self.generator);
            }
            baby
        });
        let giant = self.inv(self.pow_slow(self.generator, s)).unwrap();
        let mut y = a;
        for i in 0..=s {
            if let Some(&j) = baby.get(&y) {
                return Some((i * s + j) % n);
            }
            y = self.mul_slow(y, giant);
        }
        None
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> u64 {
        let mut n = self.q - 1;
        for &l in &self.order_primes {
            while n.is_multiple_of(l) && self.pow(a, n / l) == 1 {
                n /= l;
            }
        }
        n
    }

    /// Nonzero elements in encoding order.
    pub fn units(&self) -> impl Iterator<Item = Elem> {
        1..self.q
    }

    /// Human-readable polynomial notation in the residue class of `x`, e.g. `2 + x^2`.
    pub fn format(&self, a: Elem) -> String {
        if self.m == 1 {
            return a.to_string();
        }
        let terms: Vec<String> = self
            .digits(a)
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| match (i, d) {
                (0, d) => d.to_string(),
                (1, 1) => "x".to_string(),
                (1, d) => format!("{d}x"),
                (i, 1) => format!("x^{i}"),
                (i, d) => format!("{d}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    /// Matrix over `F_p` of an `F_p`-linear map `k → k`, columns indexed by the basis `1, x, …`.
    pub fn fp_matrix(&self, f: impl Fn(Elem) -> Elem) -> Vec<Vec<u64>> {
        let m = self.m as usize;
        let cols: Vec<Vec<u64>> = (0..m).map(|j| self.digits(f(self.p.pow(j as u32)))).collect();
        (0..m).map(|i| (0..m).map(|j| cols[j][i]).collect()).collect()
    }

    /// Image of `a ∈ self` under an embedding into `big` sending the class of `x` to `root`.
    pub fn embed(&self, big: &FiniteField, root: Elem, a: Elem) -> Elem {
        let mut acc = 0;
        let mut power = 1;
        for d in self.digits(a) {
            acc = big.add(acc, big.scale(d, power));
            power = big.mul(power, root);
        }
        acc
    }

    /// A root in `big` of this field's modulus, giving an embedding; `None` when `m ∤ big.m`.
    pub fn embedding_root(&self, big: &FiniteField) -> Option<Elem> {
        if self.p != big.p || !big.m.is_multiple_of(self.m) {
            return None;
        }
        // Roots lie in the copy of F_q: powers of g^((Q−1)/(q−1)), together with 0.
        let step = (big.q - 1) / (self.q - 1);
        let h = big.exp(step);
        if self.eval_modulus_in(big, 0) == 0 {
            return Some(0);
        }
        let mut x = 1;
        for _ in 0..self.q - 1 {
            if self.eval_modulus_in(big, x) == 0 {
                return Some(x);
            }
            x = big.mul(x, h);
        }
        None
    }

    fn eval_modulus_in(&self, big: &FiniteField, x: Elem) -> Elem {
        self.modulus
            .iter()
            .rev()
            .fold(0, |acc, &c| big.add(big.mul(acc, x), big.scale(c, 1)))
    }
}

/// Dense polynomials over `F_p`, constant term first.
mod poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut acc = 1;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let lead_inv = inv_mod(*m.last().unwrap(), p);
        while r.len() >= m.len() {
            let shift = r.len() - m.len();
            let c = r.last().unwrap() * lead_inv % p;
            for (i, &x) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * x % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
                .collect(),
        )
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `x^{p^k} mod f`.
    fn frobenius_power_of_x(f: &[u64], p: u64, k: u32) -> Vec<u64> {
        let mut x = rem(&[0, 1], f, p);
        for _ in 0..k {
            // Raise to the p-th power by repeated squaring.
            let mut acc = vec![1];
            let mut base = x.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = rem(&mul(&acc, &base, p), f, p);
                }
                base = rem(&mul(&base, &base, p), f, p);
                e >>= 1;
            }
            x = acc;
        }
        x
    }

    /// Rabin's test for a monic `f` of degree `m`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let m = f.len() as u32 - 1;
        if m == 1 {
            return true;
        }
        let x = vec![0, 1];
        if frobenius_power_of_x(f, p, m) != rem(&x, f, p) {
            return false;
        }
        for r in super::prime_factors(m as u64) {
            let h = sub(&frobenius_power_of_x(f, p, m / r as u32), &x, p);
            if gcd(f, &h, p).len() != 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.multiplicative_order(f4.generator()), 3);
        let f9 = FiniteField::new(3, 2).unwrap();
        // x² + 1 is irreducible over F₃ and comes first in the ordering.
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        for a in f9.units() {
            assert_eq!(f9.mul(a, f9.inv(a).unwrap()), 1);
            assert_eq!(f9.exp(f9.dlog(a).unwrap()), a);
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative() {
        let f = FiniteField::new(5, 2).unwrap();
        for a in 0..f.order() {
            for b in [1, 7, 13, 24] {
                assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
                assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
            }
            assert_eq!(f.frobenius(a, 2), a);
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(FiniteField::with_modulus(2, 2, &[1, 0, 1]).is_err());
        assert!(FiniteField::with_modulus(2, 2, &[1, 1, 1]).is_ok());
        assert!(FiniteField::new(4, 1).is_err());
    }

    #[test]
    fn large_field_uses_baby_step_giant_step() {
        let f = FiniteField::new(3, 12).unwrap();
        assert!(f.order() > TABLE_LIMIT);
        let a = f.exp(123_456);
        assert_eq!(f.dlog(a), Some(123_456));
    }

    #[test]
    fn embedding_preserves_operations() {
        let k = FiniteField::new(3, 2).unwrap();
        let big = FiniteField::new(3, 4).unwrap();
        let root = k.embedding_root(&big).unwrap();
        for a in 0..k.order() {
            for b in 0..k.order() {
                let (ea, eb) = (k.embed(&big, root, a), k.embed(&big, root, b));
                assert_eq!(k.embed(&big, root, k.mul(a, b)), big.mul(ea, eb));
                assert_eq!(k.embed(&big, root, k.add(a, b)), big.add(ea, eb));
            }
        }
    }
}
