//! Exact linear algebra over `Q(i)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exactalg::{GaussianInt, GaussianRational};

pub type SparseVec = BTreeMap<usize, GaussianRational>;

/// Dense row-major matrix over `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<GaussianRational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![GaussianRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GaussianRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussianRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> SparseVec {
        (0..self.rows).filter(|&i| !self.get(i, j).is_zero()).map(|i| (i, self.get(i, j).clone())).collect()
    }

    pub fn with_column(&self, v: &[GaussianRational]) -> Matrix {
        assert_eq!(v.len(), self.rows);
        let mut out = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            out.set(i, self.cols, v[i].clone());
        }
        out
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(GaussianRational::zero(), |acc, j| acc + &(self.get(i, j).clone() * &v[j])))
            .collect()
    }
}

/// Rank by fraction-free (Bareiss) elimination over `Z[i]`, after clearing
/// denominators row by row. Pivots are the first nonzero entry in column order.
pub fn exact_rank(m: &Matrix) -> usize {
    let mut a: Vec<Vec<GaussianInt>> = (0..m.rows)
        .map(|i| {
            let row: Vec<&GaussianRational> = (0..m.cols).map(|j| m.get(i, j)).collect();
            let l = row.iter().fold(num_bigint::BigInt::one(), |l, x| num_integer::Integer::lcm(&l, x.denom()));
            let lg = GaussianRational::from_int(l);
            row.iter()
                .map(|x| ((*x).clone() * &lg).to_gaussian_int().expect("denominators cleared"))
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = GaussianInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][c] = GaussianInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Incremental column echelon form: columns are inserted one at a time and
/// kept with distinct leading indices, each remembering how it was combined
/// from the inserted columns.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    basis: BTreeMap<usize, (SparseVec, SparseVec)>,
    ncols: usize,
}

fn axpy(y: &mut SparseVec, a: &GaussianRational, x: &SparseVec) {
    for (k, v) in x {
        let e = y.entry(*k).or_insert_with(GaussianRational::zero);
        *e = e.clone() - &(a.clone() * v);
        if e.is_zero() {
            y.remove(k);
        }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn num_columns(&self) -> usize {
        self.ncols
    }

    /// Reduces `v`; returns the residual and the combination `c` with
    /// `v - residual = Σ c_j col_j`.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut combo = SparseVec::new();
        let mut cursor = 0;
        loop {
            let next = v.range(cursor..).map(|(k, _)| *k).find(|k| self.basis.contains_key(k));
            let Some(k) = next else { break };
            let c = v[&k].clone();
            let (bv, bc) = &self.basis[&k];
            axpy(&mut v, &c, bv);
            axpy(&mut combo, &(-c), bc);
            cursor = k + 1;
        }
        (v, combo)
    }

    /// Inserts the next column. Returns `None` if it raised the rank, otherwise
    /// a kernel vector `κ` (indexed by inserted columns) with `Σ κ_j col_j = 0`.
    pub fn insert(&mut self, v: SparseVec) -> Option<SparseVec> {
        let j = self.ncols;
        self.ncols += 1;
        let (res, combo) = self.reduce(&v);
        // res = v - Σ combo·cols, so the new column's expression is e_j - combo
        let mut expr = SparseVec::new();
        expr.insert(j, GaussianRational::one());
        axpy(&mut expr, &GaussianRational::one(), &combo);
        match res.iter().next() {
            None => Some(expr),
            Some((&k, lead)) => {
                let inv = lead.inv().expect("nonzero lead");
                let scale = |s: SparseVec| s.into_iter().map(|(i, x)| (i, x * &inv)).collect::<SparseVec>();
                self.basis.insert(k, (scale(res), scale(expr)));
                None
            }
        }
    }

    /// One solution of `M Λ = θ` over the inserted columns, if consistent.
    pub fn solve(&self, theta: &SparseVec) -> Option<Vec<GaussianRational>> {
        let (res, combo) = self.reduce(theta);
        if !res.is_empty() {
            return None;
        }
        let mut out = vec![GaussianRational::zero(); self.ncols];
        for (j, c) in combo {
            out[j] = c;
        }
        Some(out)
    }

    pub fn contains(&self, theta: &SparseVec) -> bool {
        self.reduce(theta).0.is_empty()
    }
}

pub fn echelon_of(m: &Matrix) -> Echelon {
    let mut e = Echelon::new();
    for j in 0..m.cols {
        e.insert(m.column(j));
    }
    e
}

/// One solution of `M Λ = θ` with entries outside the pivot columns set to 0.
pub fn solve_if_consistent(m: &Matrix, theta: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
    let th: SparseVec = theta.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
    echelon_of(m).solve(&th)
}
