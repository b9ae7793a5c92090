use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::func::RatFunc;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Matrices up to this size get their adjugate from cofactors, which also
/// works when the matrix is singular.
const COFACTOR_ADJUGATE_MAX: usize = 6;

/// Number of random evaluation points tried before exact elimination.
const RANK_PROBES: usize = 3;

/// Dense row-major matrix over the field of rational functions.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![RatFunc::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, RatFunc::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("rows have different lengths".into()));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RatFunc)> {
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for (i, j, v) in self.entries() {
            t.set(j, i, v.clone());
        }
        t
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        let mut m = RatMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = RatFunc::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), rhs.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Result<Vec<RatFunc>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(RatFunc::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    fn zip_with(&self, rhs: &RatMatrix, f: impl Fn(&RatFunc, &RatFunc) -> RatFunc) -> Result<RatMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "shape {}x{} does not match {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// Value at `z = at`, or `None` if some entry has a pole there.
    pub fn eval(&self, at: &BigRational) -> Option<QMatrix> {
        let data = self.data.iter().map(|f| f.eval(at)).collect::<Option<Vec<_>>>()?;
        Some(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Row `i` scaled by the lcm of its denominators; returns the polynomial
    /// matrix together with the per-row multipliers.
    fn clear_denominators(&self) -> (Vec<Vec<Poly>>, Vec<Poly>) {
        let mut polys = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = self.row(i);
            let lcm = row.iter().fold(Poly::one(), |acc, f| {
                if f.den().is_one() {
                    acc
                } else {
                    let g = Poly::gcd(&acc, f.den());
                    (&acc * f.den()).div_rem(&g).0
                }
            });
            polys.push(
                row.iter()
                    .map(|f| (f.num() * &lcm).div_rem(f.den()).0)
                    .collect(),
            );
            scales.push(lcm);
        }
        (polys, scales)
    }

    /// Rank over the rational function field, by fraction-free elimination.
    pub fn rank_exact(&self) -> Result<usize> {
        let (mut a, _) = self.clear_denominators();
        Ok(bareiss(&mut a, self.cols)?.rank)
    }

    /// Rank over the rational function field.
    ///
    /// A few seeded random evaluation points are tried first: the rank at a
    /// point never exceeds the normal rank, so a full-rank point settles it.
    /// Otherwise falls back to [`RatMatrix::rank_exact`].
    pub fn normal_rank(&self) -> Result<usize> {
        let full = self.rows.min(self.cols);
        if full == 0 {
            return Ok(0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x6e6f726d);
        let mut probes = 0;
        while probes < RANK_PROBES {
            let at = BigRational::new(
                BigInt::from(rng.random_range(1..=1_000_000i64)),
                BigInt::from(rng.random_range(1..=1_000_000i64)),
            );
            probes += 1;
            if let Some(m) = self.eval(&at) {
                if m.rank() == full {
                    return Ok(full);
                }
            }
        }
        self.rank_exact()
    }

    pub fn determinant(&self) -> Result<RatFunc> {
        self.require_square()?;
        if self.rows == 0 {
            return Ok(RatFunc::one());
        }
        let (mut a, scales) = self.clear_denominators();
        let elim = bareiss(&mut a, self.cols)?;
        if elim.rank < self.rows {
            return Ok(RatFunc::zero());
        }
        let mut det = a[self.rows - 1][self.cols - 1].clone();
        if elim.swaps % 2 == 1 {
            det = -&det;
        }
        let denom = scales.iter().fold(Poly::one(), |acc, s| &acc * s);
        RatFunc::new(det, denom)
    }

    /// Exact inverse; [`Error::Singular`] when the determinant is zero.
    pub fn inverse(&self) -> Result<RatMatrix> {
        self.require_square()?;
        let n = self.rows;
        let (p, scales) = self.clear_denominators();
        let (adj, det) = gauss_jordan_adjugate(p)?;
        let mut inv = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if adj[i][j].is_zero() {
                    continue;
                }
                inv.set(i, j, RatFunc::new(&adj[i][j] * &scales[j], det.clone())?);
            }
        }
        Ok(inv)
    }

    /// Adjugate, satisfying `adj(M) M = M adj(M) = det(M) I`.
    pub fn adjugate(&self) -> Result<RatMatrix> {
        self.require_square()?;
        let n = self.rows;
        if n > COFACTOR_ADJUGATE_MAX {
            match self.inverse() {
                Ok(inv) => {
                    let det = self.determinant()?;
                    return Ok(RatMatrix {
                        rows: n,
                        cols: n,
                        data: inv.data.iter().map(|f| f * &det).collect(),
                    });
                }
                Err(Error::Singular) => {}
                Err(e) => return Err(e),
            }
        }
        self.adjugate_by_cofactors()
    }

    fn adjugate_by_cofactors(&self) -> Result<RatMatrix> {
        let n = self.rows;
        if n == 1 {
            return Ok(RatMatrix::identity(1));
        }
        let mut adj = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let minor = self.submatrix(&rows, &cols).determinant()?;
                adj.set(i, j, if (i + j) % 2 == 0 { minor } else { -minor });
            }
        }
        Ok(adj)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[RatFunc]> = (0..self.rows).map(|i| self.row(i)).collect();
        f.debug_list().entries(rows).finish()
    }
}

struct Elimination {
    rank: usize,
    swaps: usize,
}

fn exact_quotient(num: &Poly, den: &Poly) -> Result<Poly> {
    if den.is_one() {
        return Ok(num.clone());
    }
    num.exact_div(den)
        .ok_or_else(|| Error::Internal("fraction-free elimination lost exactness".into()))
}

/// In-place fraction-free forward elimination (Bareiss) with column
/// skipping. Entries below each pivot are cleared; for a full-rank square
/// matrix the last pivot is the determinant up to the sign of the row swaps.
fn bareiss(a: &mut [Vec<Poly>], cols: usize) -> Result<Elimination> {
    let rows = a.len();
    let mut prev = Poly::one();
    let mut rank = 0;
    let mut swaps = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].degree())
        else {
            continue;
        };
        if pivot != rank {
            a.swap(pivot, rank);
            swaps += 1;
        }
        let p = a[rank][col].clone();
        for r in rank + 1..rows {
            let factor = a[r][col].clone();
            for c in col..cols {
                let v = &(&p * &a[r][c]) - &(&factor * &a[rank][c]);
                a[r][c] = exact_quotient(&v, &prev)?;
            }
            if !factor.is_zero() {
                a[r][col] = Poly::zero();
            }
        }
        prev = p;
        rank += 1;
    }
    Ok(Elimination { rank, swaps })
}

/// Fraction-free Gauss-Jordan on `[P | I]`. Returns `(R, d)` with
/// `P^{-1} = R / d`.
fn gauss_jordan_adjugate(p: Vec<Vec<Poly>>) -> Result<(Vec<Vec<Poly>>, Poly)> {
    let n = p.len();
    let mut a: Vec<Vec<Poly>> = p
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { Poly::one() } else { Poly::zero() }));
            row
        })
        .collect();
    let mut prev = Poly::one();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&r| !a[r][k].is_zero())
            .min_by_key(|&r| a[r][k].degree())
            .ok_or(Error::Singular)?;
        a.swap(pivot, k);
        let pk = a[k][k].clone();
        for r in 0..n {
            if r == k {
                continue;
            }
            let factor = a[r][k].clone();
            for c in 0..2 * n {
                if c == k {
                    continue;
                }
                let v = &(&pk * &a[r][c]) - &(&factor * &a[k][c]);
                a[r][c] = exact_quotient(&v, &prev)?;
            }
            a[r][k] = Poly::zero();
        }
        prev = pk;
    }
    // every diagonal entry now equals the last pivot
    let det = prev;
    let adj = a.into_iter().map(|row| row[n..].to_vec()).collect();
    Ok((adj, det))
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        let mut m = QMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Rank by integer fraction-free elimination after clearing denominators.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                row.iter()
                    .map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer())
                    .collect()
            })
            .collect();
        let mut prev = BigInt::one();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(pivot, rank);
            let p = a[rank][col].clone();
            for r in rank + 1..self.rows {
                let factor = a[r][col].clone();
                for c in col..self.cols {
                    let v = &p * &a[r][c] - &factor * &a[rank][c];
                    a[r][c] = v / &prev;
                }
            }
            prev = p;
            rank += 1;
        }
        rank
    }

    /// Inverse by Gauss-Jordan elimination over the rationals.
    pub fn inverse(&self) -> Result<QMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for k in 0..n {
            let pivot = (k..n).find(|&r| !a.get(r, k).is_zero()).ok_or(Error::Singular)?;
            if pivot != k {
                for c in 0..n {
                    a.data.swap(pivot * n + c, k * n + c);
                    inv.data.swap(pivot * n + c, k * n + c);
                }
            }
            let p = a.get(k, k).recip();
            for c in 0..n {
                let v = a.get(k, c) * &p;
                a.set(k, c, v);
                let v = inv.get(k, c) * &p;
                inv.set(k, c, v);
            }
            for r in 0..n {
                if r == k || a.get(r, k).is_zero() {
                    continue;
                }
                let f = a.get(r, k).clone();
                for c in 0..n {
                    let v = a.get(r, c) - &f * a.get(k, c);
                    a.set(r, c, v);
                    let v = inv.get(r, c) - &f * inv.get(k, c);
                    inv.set(r, c, v);
                }
            }
        }
        Ok(inv)
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[BigRational]> = (0..self.rows)
            .map(|i| &self.data[i * self.cols..(i + 1) * self.cols])
            .collect();
        f.debug_list().entries(rows).finish()
    }
}
