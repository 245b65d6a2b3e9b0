//! Tree spaces, the Lie representation and integral homology.

pub mod homology;
pub mod lie;
pub mod tree;

use num_bigint::BigInt;
use thiserror::Error;

pub use homology::{ChainComplexOverZ, HomologyGroup, SparseMatrix};
pub use lie::{
    lie_basis, sigma_action_signed, straighten, straighten_combination, straighten_with, LieCombination,
    LieMonomial, Permutation, MAX_LIE_ARITY,
};
pub use tree::{enumerate_tree_shapes, graft, InternalVertex, TreeShape, MAX_ENUMERATION_N};

/// Largest `n` for which the relative homology is computed.
pub const MAX_HOMOLOGY_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieTreeError {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("n = {n} is outside the supported range (at most {max})")]
    SizeLimit { n: usize, max: usize },
    #[error("leaf {leaf} cannot be grafted onto (tree has inputs 1..={n})")]
    BadLeaf { leaf: usize, n: usize },
    #[error("cannot parse bracket expression {0:?}")]
    Parse(String),
    #[error("{0:?} is not a permutation")]
    InvalidPermutation(Vec<u8>),
}

/// Cellular chains of `(T_n, ∂T_n)`.
///
/// A shape with `k` internal edges indexes a `k`-cube of edge lengths. Faces
/// where an edge reaches full length lie in the boundary and die in the
/// quotient, so only the length-zero faces survive: `d(S) = Σ_j (-1)^j S/e_j`
/// with edges in sorted split order. Contracting an edge keeps the remaining
/// splits sorted, so the induced orientation needs no extra sign.
pub fn tree_pair_complex(n: usize) -> Result<(ChainComplexOverZ, Vec<Vec<TreeShape>>), LieTreeError> {
    if !(2..=MAX_HOMOLOGY_N).contains(&n) {
        return Err(LieTreeError::SizeLimit { n, max: MAX_HOMOLOGY_N });
    }
    let by_edges = enumerate_tree_shapes(n)?;
    let top = n - 2;
    let bases: Vec<Vec<TreeShape>> = (0..=top).map(|k| by_edges.get(&k).cloned().unwrap_or_default()).collect();
    let mut boundaries = Vec::with_capacity(top);
    for k in 1..=top {
        let rows = &bases[k - 1];
        let index = |s: &TreeShape| rows.binary_search(s).expect("contraction is a shape");
        let mut d = SparseMatrix::zeros(rows.len(), bases[k].len());
        for (col, shape) in bases[k].iter().enumerate() {
            for j in 0..k {
                let sign = if j % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
                d.add_to(index(&shape.contract(j)), col, &sign);
            }
        }
        boundaries.push(d);
    }
    Ok((ChainComplexOverZ::new(bases[0].len(), boundaries), bases))
}

/// `H_k(T_n, ∂T_n; Z)` for `k = 0..=n-2`.
pub fn relative_homology_tree_pair(n: usize) -> Result<Vec<HomologyGroup>, LieTreeError> {
    Ok(tree_pair_complex(n)?.0.homology())
}
