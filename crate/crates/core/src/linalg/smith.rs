//! Smith normal form over ℤ and the lattice routines built on it.
//!
//! Elimination always pivots on an entry of least absolute value in the
//! remaining submatrix (ties broken by row, then column), which keeps
//! intermediate coefficients small and makes the output deterministic.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{Int, IntMatrix};

/// `U · M · V = S` with `S` diagonal, `d₁ | d₂ | …`, all `dᵢ ≥ 0` and `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `u`, maintained alongside it.
    pub u_inv: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<Int> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].magnitude() <= x.magnitude() => {}
                _ => {
                    best = Some((i, j));
                    if x.magnitude().is_one() {
                        return best;
                    }
                }
            }
        }
    }
    best
}

/// Computes the Smith normal form of `m` with unimodular witnesses.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    smith_core(m, true)
}

/// Smith form; when `track_left` is false, `u` and `u_inv` are left as 0×0 placeholders.
fn smith_core(m: &IntMatrix, track_left: bool) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let left = if track_left { rows } else { 0 };
    let mut a = m.clone();
    let mut u = IntMatrix::identity(left);
    let mut u_inv = IntMatrix::identity(left);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = find_pivot(&a, t) else {
                return SmithForm { s: a, u, v, u_inv };
            };
            a.swap_rows(t, pi);
            if track_left {
                u.swap_rows(t, pi);
            }
            if track_left {
                u_inv.swap_cols(t, pi);
            }
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = &a[(i, t)] / &a[(t, t)];
                let neg_q = -q.clone();
                a.add_row_multiple(i, t, &neg_q);
                if track_left {
                    u.add_row_multiple(i, t, &neg_q);
                }
                if track_left {
                    u_inv.add_col_multiple(t, i, &q);
                }
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }

            // Divisibility: the pivot must divide everything below-right of it.
            let pivot = a[(t, t)].clone();
            let offending = if pivot.magnitude().is_one() {
                None
            } else {
                (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !a[(i, j)].is_zero() && !a[(i, j)].is_multiple_of(&pivot))
                })
            };
            match offending {
                Some(i) => {
                    let one = Int::one();
                    a.add_row_multiple(t, i, &one);
                    if track_left {
                        u.add_row_multiple(t, i, &one);
                    }
                    if track_left {
                        u_inv.add_col_multiple(i, t, &-one);
                    }
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if track_left {
                u.negate_row(t);
            }
            if track_left {
                u_inv.negate_col(t);
            }
        }
    }
    SmithForm { s: a, u, v, u_inv }
}

/// Basis of the integer kernel `{x ∈ ℤ^cols : m·x = 0}`, as columns.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_core(m, false);
    let r = snf.rank();
    let cols: Vec<usize> = (r..m.cols()).collect();
    snf.v.select_columns(&cols)
}

/// A sublattice of ℤⁿ given by generators, with exact membership and coordinates.
///
/// The basis is `{ sᵢ · U⁻¹ eᵢ }` where `U·G·V = S` is the Smith form of the generator matrix `G`.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    u: IntMatrix,
    steps: Vec<Int>,
    basis: IntMatrix,
}

impl Lattice {
    /// Lattice spanned by the columns of `generators` (an `n × k` matrix).
    pub fn from_generators(generators: &IntMatrix) -> Self {
        let snf = smith_normal_form(generators);
        let steps = snf.invariant_factors();
        let n = generators.rows();
        let mut basis = IntMatrix::zeros(n, steps.len());
        for (j, s) in steps.iter().enumerate() {
            for i in 0..n {
                basis[(i, j)] = &snf.u_inv[(i, j)] * s;
            }
        }
        Lattice {
            dim: n,
            u: snf.u,
            steps,
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.steps.len()
    }

    /// `n × rank` basis matrix.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Coordinates of `x` in the basis, or `None` when `x` is not in the lattice.
    pub fn solve(&self, x: &[Int]) -> Option<Vec<Int>> {
        let ux = self.u.mul_vec(x);
        let r = self.steps.len();
        if ux[r..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut y = Vec::with_capacity(r);
        for (c, s) in ux.iter().zip(&self.steps) {
            let (q, rem) = c.div_rem(s);
            if !rem.is_zero() {
                return None;
            }
            y.push(q);
        }
        Some(y)
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.solve(x).is_some()
    }

    /// Whether every basis vector of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        (0..other.rank()).all(|j| self.contains(&other.basis.column(j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(m);
        assert_eq!(f.u.mul(m).mul(&f.v), f.s);
        assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(m.rows()));
        assert!(f.u.is_unimodular() && f.v.is_unimodular());
        let d = f.invariant_factors();
        for w in d.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        f
    }

    #[test]
    fn identity_is_its_own_form() {
        let f = check(&IntMatrix::identity(3));
        assert_eq!(f.s, IntMatrix::identity(3));
        assert_eq!(f.u, IntMatrix::identity(3));
        assert_eq!(f.v, IntMatrix::identity(3));
    }

    #[test]
    fn zero_matrix() {
        let f = check(&IntMatrix::zeros(2, 2));
        assert!(f.s.is_zero());
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the factors are 2 and 4.
        let f = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(f.s, IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]));
    }

    #[test]
    fn divisibility_fix_up() {
        let f = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(f.invariant_factors(), vec![Int::from(1), Int::from(6)]);
    }

    #[test]
    fn kernel_and_lattice() {
        let m = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        let l = Lattice::from_generators(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]));
        assert!(l.contains(&[Int::from(4), Int::from(8)]));
        assert!(!l.contains(&[Int::from(1), Int::from(0)]));
        assert!(!l.contains(&[Int::from(0), Int::from(2)]));
    }
}
