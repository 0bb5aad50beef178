//! Smith normal form over the integers, with unimodular certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Snf {
    /// Diagonal of the normal form, `min(rows, cols)` entries, each dividing
    /// the next, zeros last.
    pub diagonal: Vec<i64>,
    /// Row transform, `rows x rows`.
    pub u: Matrix,
    /// Column transform, `cols x cols`.
    pub v: Matrix,
    pub rows: usize,
    pub cols: usize,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|&&x| x != 0).count()
    }

    /// The full `rows x cols` normal form matrix.
    pub fn normal_form(&self) -> Matrix {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for (i, &x) in self.diagonal.iter().enumerate() {
            d[i][i] = x;
        }
        d
    }
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Ring elements the elimination runs over. `add_mul` is the only step that
/// can fail: fixed-width entries report overflow instead of wrapping.
trait Entry: Clone + Signed + Integer {
    /// `self + f * y`
    fn add_mul(&self, f: &Self, y: &Self) -> Option<Self>;
}

impl Entry for i64 {
    fn add_mul(&self, f: &i64, y: &i64) -> Option<i64> {
        // i64::MIN has no negation, keep it out of the matrix
        self.checked_add(f.checked_mul(*y)?)
            .filter(|&x| x != i64::MIN)
    }
}

impl Entry for BigInt {
    fn add_mul(&self, f: &BigInt, y: &BigInt) -> Option<BigInt> {
        Some(self + f * y)
    }
}

type Grid<T> = Vec<Vec<T>>;

fn add_row<T: Entry>(m: &mut Grid<T>, dst: usize, src: usize, f: &T) -> Option<()> {
    if f.is_zero() {
        return Some(());
    }
    let s = m[src].clone();
    for (x, y) in m[dst].iter_mut().zip(&s) {
        *x = x.add_mul(f, y)?;
    }
    Some(())
}

fn add_col<T: Entry>(m: &mut Grid<T>, dst: usize, src: usize, f: &T) -> Option<()> {
    if f.is_zero() {
        return Some(());
    }
    for row in m.iter_mut() {
        row[dst] = row[dst].add_mul(f, &row[src])?;
    }
    Some(())
}

fn swap_col<T>(m: &mut Grid<T>, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// Quotient rounded to nearest, so the remainder has absolute value at most
/// half the divisor.
fn nearest_quotient<T: Entry>(a: &T, p: &T) -> T {
    let pa = p.abs();
    let (mut q, r) = a.div_mod_floor(&pa);
    if r > pa.clone() - r.clone() {
        q = q + T::one();
    }
    if p.is_negative() {
        -q
    } else {
        q
    }
}

/// Row and column operations, mirrored into the certificates when present.
struct Elim<T> {
    a: Grid<T>,
    u: Option<Grid<T>>,
    v: Option<Grid<T>>,
    rows: usize,
    cols: usize,
}

impl<T: Entry> Elim<T> {
    fn row_op(&mut self, dst: usize, src: usize, f: &T) -> Option<()> {
        add_row(&mut self.a, dst, src, f)?;
        match &mut self.u {
            Some(u) => add_row(u, dst, src, f),
            None => Some(()),
        }
    }

    fn col_op(&mut self, dst: usize, src: usize, f: &T) -> Option<()> {
        add_col(&mut self.a, dst, src, f)?;
        match &mut self.v {
            Some(v) => add_col(v, dst, src, f),
            None => Some(()),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        swap_col(&mut self.a, i, j);
        if let Some(v) = &mut self.v {
            swap_col(v, i, j);
        }
    }

    fn smallest(&self, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
        cells
            .filter(|&(i, j)| !self.a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| self.a[i][j].abs().cmp(&self.a[k][l].abs()))
    }

    /// Clears row and column `t` below and right of the pivot.
    fn clear(&mut self, t: usize) -> Option<()> {
        let (rows, cols) = (self.rows, self.cols);
        loop {
            for i in t + 1..rows {
                let q = -nearest_quotient(&self.a[i][t], &self.a[t][t]);
                self.row_op(i, t, &q)?;
            }
            if let Some((i, _)) = self.smallest((t + 1..rows).map(|i| (i, t))) {
                self.swap_rows(t, i);
                continue;
            }
            for j in t + 1..cols {
                let q = -nearest_quotient(&self.a[t][j], &self.a[t][t]);
                self.col_op(j, t, &q)?;
            }
            if let Some((_, j)) = self.smallest((t + 1..cols).map(|j| (t, j))) {
                self.swap_cols(t, j);
                continue;
            }
            let p = self.a[t][t].clone();
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !self.a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => self.row_op(t, i, &T::one())?,
                None => return Some(()),
            }
        }
    }

    fn run(&mut self) -> Option<()> {
        let (rows, cols) = (self.rows, self.cols);
        for t in 0..rows.min(cols) {
            let cells = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)));
            let Some((pi, pj)) = self.smallest(cells) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            self.clear(t)?;
            if self.a[t][t].is_negative() {
                for x in self.a[t].iter_mut() {
                    *x = -x.clone();
                }
                if let Some(u) = &mut self.u {
                    for x in u[t].iter_mut() {
                        *x = -x.clone();
                    }
                }
            }
        }
        Some(())
    }

    fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self.a[i][i].clone())
            .collect()
    }
}

/// Computes `U * m * V = D` with `D` diagonal in Smith normal form.
/// `cols` is needed for matrices with no rows. Fails with
/// [`Error::Overflow`] when a certificate entry leaves `i64`; the diagonal
/// alone is always available through [`cokernel_factors`].
pub fn smith_normal_form(m: &Matrix, cols: usize) -> Result<Snf> {
    let rows = m.len();
    let mut e = Elim {
        a: m.clone(),
        u: Some(identity(rows)),
        v: Some(identity(cols)),
        rows,
        cols,
    };
    e.run().ok_or(Error::Overflow)?;
    Ok(Snf {
        diagonal: e.diagonal(),
        u: e.u.take().unwrap_or_default(),
        v: e.v.take().unwrap_or_default(),
        rows,
        cols,
    })
}

/// Smith diagonal without certificates. Intermediate entries may outgrow
/// `i64` even when the result does not, so overflow restarts the elimination
/// over big integers.
fn snf_diagonal(m: &Matrix, cols: usize) -> Vec<BigInt> {
    let rows = m.len();
    let mut e = Elim {
        a: m.clone(),
        u: None,
        v: None,
        rows,
        cols,
    };
    if e.run().is_some() {
        return e.diagonal().into_iter().map(BigInt::from).collect();
    }
    let mut e = Elim {
        a: m.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
        u: None,
        v: None,
        rows,
        cols,
    };
    e.run().expect("big integers do not overflow");
    e.diagonal()
}

/// Invariant factors (excluding units) of the abelian group with `ngens`
/// generators and the given relator rows. Zeros denote free summands and
/// come last.
///
/// # Panics
/// If a single invariant factor exceeds `i64`.
pub fn cokernel_factors(rows: &Matrix, ngens: usize) -> Vec<i64> {
    let diagonal = snf_diagonal(rows, ngens);
    let mut out: Vec<i64> = diagonal
        .iter()
        .filter(|x| !x.is_one())
        .map(|x| i64::try_from(x).expect("invariant factor exceeds i64"))
        .collect();
    out.extend(std::iter::repeat_n(0, ngens - diagonal.len()));
    let (mut tors, free): (Vec<i64>, Vec<i64>) = out.into_iter().partition(|&x| x != 0);
    tors.sort_unstable();
    tors.extend(free);
    tors
}

/// Rank over the field with two elements.
pub fn rank_mod2(rows: &Matrix, ngens: usize) -> usize {
    let mut m: Vec<Vec<bool>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(2) == 1).collect())
        .collect();
    let mut rank = 0;
    for col in 0..ngens {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col]) else {
            continue;
        };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][col] {
                let pivot = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn check(m: &Matrix, cols: usize) -> Snf {
        let s = smith_normal_form(m, cols).unwrap();
        let wide = |a: &Matrix| -> Vec<Vec<i128>> {
            a.iter()
                .map(|r| r.iter().map(|&x| x as i128).collect())
                .collect()
        };
        let mul = |a: &[Vec<i128>], b: &[Vec<i128>]| -> Vec<Vec<i128>> {
            a.iter()
                .map(|r| {
                    (0..b[0].len())
                        .map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum())
                        .collect()
                })
                .collect()
        };
        if !m.is_empty() {
            let umv = mul(&mul(&wide(&s.u), &wide(m)), &wide(&s.v));
            assert_eq!(umv, wide(&s.normal_form()));
        }
        for w in s.diagonal.windows(2) {
            if w[1] != 0 {
                assert_eq!(w[1] % w[0], 0, "{:?}", s.diagonal);
            } else {
                assert!(w[0] >= 0);
            }
        }
        assert!(s.diagonal.iter().all(|&x| x >= 0));
        s
    }

    #[test]
    fn diag_two_three() {
        let s = check(&vec![vec![2, 0], vec![0, 3]], 2);
        assert_eq!(s.diagonal, vec![1, 6]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&vec![vec![0; 4]; 3], 4);
        assert_eq!(s.diagonal, vec![0, 0, 0]);
        assert_eq!(cokernel_factors(&vec![vec![0; 4]; 3], 4), vec![0, 0, 0, 0]);
        assert_eq!(cokernel_factors(&vec![], 2), vec![0, 0]);
    }

    #[test]
    fn cokernel_of_presentations() {
        // Z/2 + Z
        assert_eq!(cokernel_factors(&vec![vec![2, 0]], 2), vec![2, 0]);
        assert_eq!(
            cokernel_factors(&vec![vec![4, 6], vec![6, 4]], 2),
            vec![2, 10]
        );
    }

    #[test]
    fn dense_growth_stays_in_range() {
        let e = [
            -6, 2, -6, 9, -5, 3, -5, -7, -9, 3, 5, -5, -7, -1, -3, -2, 4, -3, -9, -7, -2, 2, -1,
            -8, 0,
        ];
        let m: Matrix = e.chunks(5).map(|c| c.to_vec()).collect();
        assert_eq!(check(&m, 5).diagonal, vec![1, 1, 1, 2, 218]);
    }

    #[test]
    fn mod2_rank() {
        assert_eq!(rank_mod2(&vec![vec![2, 0], vec![1, 1], vec![3, 3]], 2), 1);
        assert_eq!(rank_mod2(&vec![], 3), 0);
    }

    proptest! {
        #[test]
        fn certificates_multiply_out(entries in proptest::collection::vec(-9i64..10, 25)) {
            let m: Matrix = entries.chunks(5).map(|c| c.to_vec()).collect();
            let s = check(&m, 5);
            let big: Vec<i64> = snf_diagonal(&m, 5)
                .iter()
                .map(|x| i64::try_from(x).unwrap())
                .collect();
            prop_assert_eq!(s.diagonal, big);
        }

        #[test]
        fn big_diagonal_is_a_normal_form(n in 6usize..14, entries in proptest::collection::vec(-9i64..10, 169)) {
            let m: Matrix = entries.chunks(13).take(n).map(|c| c[..n].to_vec()).collect();
            let d = snf_diagonal(&m, n);
            for w in d.windows(2) {
                prop_assert!(w[1].is_zero() || w[1].is_multiple_of(&w[0]));
            }
            prop_assert!(d.iter().all(|x| !x.is_negative()));
            let (rank, det) = bareiss(&m);
            prop_assert_eq!(d.iter().filter(|x| !x.is_zero()).count(), rank);
            let prod: BigInt = d.iter().product();
            prop_assert_eq!(prod, det.abs());
            if let Ok(s) = smith_normal_form(&m, n) {
                let small: Vec<BigInt> = s.diagonal.iter().map(|&x| BigInt::from(x)).collect();
                prop_assert_eq!(small, d);
            }
        }

        #[test]
        fn rectangular(entries in proptest::collection::vec(-5i64..6, 12), wide in any::<bool>()) {
            let (r, c) = if wide { (3, 4) } else { (4, 3) };
            let m: Matrix = entries.chunks(c).take(r).map(|x| x.to_vec()).collect();
            let s = check(&m, c);
            prop_assert_eq!(s.rank(), rank_over_q(&m, c));
        }
    }

    /// Fraction-free elimination: rank and determinant of a square matrix.
    fn bareiss(m: &Matrix) -> (usize, BigInt) {
        let n = m.len();
        let mut a: Vec<Vec<BigInt>> = m
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let (mut rank, mut sign, mut prev) = (0, BigInt::one(), BigInt::one());
        for c in 0..n {
            let Some(p) = (rank..n).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            if p != rank {
                a.swap(p, rank);
                sign = -sign;
            }
            for i in rank + 1..n {
                for j in c + 1..n {
                    a[i][j] = (&a[i][j] * &a[rank][c] - &a[i][c] * &a[rank][j]) / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[rank][c].clone();
            rank += 1;
        }
        let det = if rank == n {
            sign * prev
        } else {
            BigInt::zero()
        };
        (rank, det)
    }

    fn rank_over_q(m: &Matrix, cols: usize) -> usize {
        let mut a: Vec<Vec<f64>> = m
            .iter()
            .map(|r| r.iter().map(|&x| x as f64).collect())
            .collect();
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..a.len()).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            else {
                break;
            };
            if a[p][c].abs() < 1e-9 {
                continue;
            }
            a.swap(rank, p);
            for i in 0..a.len() {
                if i != rank {
                    let f = a[i][c] / a[rank][c];
                    let pr = a[rank].clone();
                    for (x, y) in a[i].iter_mut().zip(pr) {
                        *x -= f * y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}
