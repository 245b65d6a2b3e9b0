//! Exact homology of finite chain complexes of free abelian groups.
//!
//! Boundary maps are sparse integer matrices with arbitrary-precision entries.
//! Invariant factors come from a Smith normal form computation: unit pivots are
//! eliminated sparsely first (each contributes an invariant factor 1), and
//! whatever is left is diagonalised densely.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Column-sparse integer matrix: `cols[j]` maps row index to a non-zero entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<BTreeMap<usize, BigInt>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, cols: vec![BTreeMap::new(); ncols] }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m.add_to(i, j, &BigInt::from(v));
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(BTreeMap::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.cols[j].get(&i).cloned().unwrap_or_default()
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &BigInt) {
        assert!(i < self.nrows && j < self.cols.len(), "index out of range");
        let e = self.cols[j].entry(i).or_default();
        *e += v;
        if e.is_zero() {
            self.cols[j].remove(&i);
        }
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, &BigInt)> {
        self.cols[j].iter().map(|(&i, v)| (i, v))
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), rhs.nrows, "dimension mismatch");
        let mut out = SparseMatrix::zeros(self.nrows, rhs.ncols());
        for (j, col) in rhs.cols.iter().enumerate() {
            for (&k, b) in col {
                for (&i, a) in &self.cols[k] {
                    out.add_to(i, j, &(a * b));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BTreeMap::is_empty)
    }

    /// Invariant factors `d_1 | d_2 | ... | d_r` (all positive); `r` is the rank.
    pub fn smith_normal_form(&self) -> Vec<BigInt> {
        let (mut factors, rest) = eliminate_unit_pivots(self);
        factors.extend(dense_smith_diagonal(rest));
        normalise_diagonal(&mut factors);
        factors
    }

    pub fn rank(&self) -> usize {
        self.smith_normal_form().len()
    }
}

/// Sparse elimination of `±1` pivots. Works on columns as vectors; row
/// operations on the transpose do not change invariant factors. Returns one
/// factor per pivot and the remaining dense block.
fn eliminate_unit_pivots(m: &SparseMatrix) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let mut vecs: Vec<BTreeMap<usize, BigInt>> = m.cols.clone();
    let mut alive: BTreeSet<usize> = (0..vecs.len()).filter(|&j| !vecs[j].is_empty()).collect();
    let mut holders: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.nrows];
    for &j in &alive {
        for &i in vecs[j].keys() {
            holders[i].insert(j);
        }
    }
    let mut factors = Vec::new();
    loop {
        // Markowitz choice among unit entries
        let mut best: Option<(usize, usize, usize)> = None;
        'search: for &j in &alive {
            let len = vecs[j].len();
            for (&i, v) in &vecs[j] {
                if v.abs().is_one() {
                    let cost = (len - 1) * (holders[i].len() - 1);
                    if best.map_or(true, |(c, _, _)| cost < c) {
                        best = Some((cost, j, i));
                        if cost == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((_, pj, pi)) = best else { break };
        let pivot = vecs[pj][&pi].clone();
        let pivot_vec = vecs[pj].clone();
        let others: Vec<usize> = holders[pi].iter().copied().filter(|&j| j != pj).collect();
        for j in others {
            let factor = &vecs[j][&pi] * &pivot;
            for (&i, v) in &pivot_vec {
                let e = vecs[j].entry(i).or_default();
                *e -= &factor * v;
                if e.is_zero() {
                    vecs[j].remove(&i);
                    holders[i].remove(&j);
                } else {
                    holders[i].insert(j);
                }
            }
            if vecs[j].is_empty() {
                alive.remove(&j);
            }
        }
        for &i in pivot_vec.keys() {
            holders[i].remove(&pj);
        }
        vecs[pj].clear();
        alive.remove(&pj);
        factors.push(BigInt::one());
    }
    let rows: Vec<usize> = (0..m.nrows).filter(|&i| !holders[i].is_empty()).collect();
    let row_pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let dense = alive
        .iter()
        .map(|&j| {
            let mut v = vec![BigInt::zero(); rows.len()];
            for (i, x) in &vecs[j] {
                v[row_pos[i]] = x.clone();
            }
            v
        })
        .collect();
    (factors, dense)
}

/// Diagonalises a dense matrix by unimodular row and column operations and
/// returns the non-zero diagonal entries (not yet in divisibility order).
fn dense_smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nr = a.len();
    let nc = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..nr.min(nc) {
        let Some((pi, pj)) = min_abs_entry(&a, t) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..nr {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..nc {
                        let delta = &q * &a[t][j];
                        a[i][j] -= delta;
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..nc {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let delta = &q * &row[t];
                        row[j] -= delta;
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
            // a smaller remainder appeared in row or column t: make it the pivot
            let mut best = (t, t);
            for i in t..nr {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..nc {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_abs_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if !v.is_zero() && best.map_or(true, |(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// `diag(a, b) ~ diag(gcd, lcm)`; applied pairwise this yields a divisibility chain.
fn normalise_diagonal(d: &mut [BigInt]) {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
}

/// One homology group `Z^rank ⊕ ⨁ Z/torsion_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub rank: usize,
    #[serde(with = "bigint_strings")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A bounded chain complex `C_top -> ... -> C_0` of finitely generated free
/// abelian groups. `boundaries[k]` is `d_k : C_k -> C_{k-1}` for `k >= 1`;
/// `boundaries[0]` is the zero map out of `C_0`.
#[derive(Debug, Clone)]
pub struct ChainComplexOverZ {
    dims: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplexOverZ {
    /// `boundaries[k - 1]` is `d_k`; the ranks are read off the matrix shapes.
    pub fn new(dim0: usize, boundaries: Vec<SparseMatrix>) -> Self {
        let mut dims = vec![dim0];
        let mut ds = vec![SparseMatrix::zeros(0, dim0)];
        for d in boundaries {
            assert_eq!(d.nrows(), *dims.last().unwrap(), "boundary shape mismatch");
            dims.push(d.ncols());
            ds.push(d);
        }
        ChainComplexOverZ { dims, boundaries: ds }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self, k: usize) -> &SparseMatrix {
        &self.boundaries[k]
    }

    /// `d_{k-1} ∘ d_k = 0` for every `k`.
    pub fn boundary_squares_to_zero(&self) -> bool {
        (2..self.boundaries.len()).all(|k| self.boundaries[k - 1].mul(&self.boundaries[k]).is_zero())
    }

    pub fn homology(&self) -> Vec<HomologyGroup> {
        let snf: Vec<Vec<BigInt>> = self.boundaries.iter().map(SparseMatrix::smith_normal_form).collect();
        (0..self.dims.len())
            .map(|k| {
                let rank_out = snf[k].len();
                let (rank_in, torsion) = match snf.get(k + 1) {
                    Some(f) => (f.len(), f.iter().filter(|x| !x.is_one()).cloned().collect()),
                    None => (0, Vec::new()),
                };
                HomologyGroup { degree: k, rank: self.dims[k] - rank_out - rank_in, torsion }
            })
            .collect()
    }
}
