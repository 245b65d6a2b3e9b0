//! Labelled trees with leaves `0..=n` and no bivalent vertices, the cells of
//! the tree space `T_n`.
//!
//! A tree is stored through its internal edges. Cutting an internal edge splits
//! the leaves into two blocks of size at least two; we record the block that
//! does not contain leaf 0 as a bitmask. A set of pairwise compatible splits
//! determines the labelled tree uniquely, so the sorted split list is a
//! canonical form and labelled isomorphism is plain equality.

use std::collections::BTreeMap;
use std::fmt;

use super::LieTreeError;

/// Shapes are enumerated for `n <= MAX_ENUMERATION_N`.
pub const MAX_ENUMERATION_N: usize = 7;
/// Bitmask width bounds the number of leaves (`n + 1 <= 64`).
pub const MAX_LEAF_LABEL: usize = 63;

type Split = u64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeShape {
    n: usize,
    splits: Vec<Split>,
}

/// An internal vertex: its leaf neighbours and the indices of adjacent internal
/// vertices in [`TreeShape::internal_vertices`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalVertex {
    pub leaves: Vec<usize>,
    pub neighbours: Vec<usize>,
}

impl InternalVertex {
    pub fn valence(&self) -> usize {
        self.leaves.len() + self.neighbours.len()
    }
}

fn compatible(a: Split, b: Split) -> bool {
    a & b == 0 || a & b == a || a & b == b
}

fn leaves_of(mask: Split) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&i| mask >> i & 1 == 1)
}

impl TreeShape {
    /// The corolla on leaves `0..=n`.
    pub fn corolla(n: usize) -> Result<Self, LieTreeError> {
        if n == 0 || n > MAX_LEAF_LABEL {
            return Err(LieTreeError::InvalidTree(format!("no trees on {} leaves", n + 1)));
        }
        Ok(TreeShape { n, splits: Vec::new() })
    }

    /// Builds a tree from the leaf blocks (not containing leaf 0) cut off by its
    /// internal edges.
    pub fn from_splits(n: usize, splits: impl IntoIterator<Item = Split>) -> Result<Self, LieTreeError> {
        let mut t = Self::corolla(n)?;
        let all: Split = ((1u64 << n) - 1) << 1;
        let mut splits: Vec<Split> = splits.into_iter().collect();
        splits.sort_unstable();
        for w in splits.windows(2) {
            if w[0] == w[1] {
                return Err(LieTreeError::InvalidTree(format!("repeated edge {:#b}", w[0])));
            }
        }
        for &s in &splits {
            let size = s.count_ones() as usize;
            if s & !all != 0 || size < 2 || size > n - 1 {
                return Err(LieTreeError::InvalidTree(format!("{:#b} is not a split of 0..={n}", s)));
            }
        }
        for (i, &a) in splits.iter().enumerate() {
            for &b in &splits[i + 1..] {
                if !compatible(a, b) {
                    return Err(LieTreeError::InvalidTree(format!(
                        "edges {a:#b} and {b:#b} are incompatible"
                    )));
                }
            }
        }
        t.splits = splits;
        Ok(t)
    }

    /// Leaves are labelled `0..=n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn leaf_count(&self) -> usize {
        self.n + 1
    }

    /// Internal edges in canonical order, each given by the leaves on the side
    /// away from leaf 0.
    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn internal_edge_count(&self) -> usize {
        self.splits.len()
    }

    pub fn is_corolla(&self) -> bool {
        self.splits.is_empty()
    }

    /// All internal vertices trivalent.
    pub fn is_trivalent(&self) -> bool {
        self.n >= 2 && self.splits.len() == self.n - 2
    }

    /// The leaves cut off by edge `k`.
    pub fn edge_leaves(&self, k: usize) -> Vec<usize> {
        leaves_of(self.splits[k]).collect()
    }

    /// Shrinks internal edge `k` to length zero.
    pub fn contract(&self, k: usize) -> TreeShape {
        let mut splits = self.splits.clone();
        splits.remove(k);
        TreeShape { n: self.n, splits }
    }

    /// Internal vertices. Vertex 0 is the one adjacent to leaf 0; vertex `k + 1`
    /// sits at the far end (away from leaf 0) of internal edge `k`.
    pub fn internal_vertices(&self) -> Vec<InternalVertex> {
        let all: Split = ((1u64 << self.n) - 1) << 1;
        let parent_of = |s: Split| -> usize {
            self.splits
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c != s && c & s == s)
                .min_by_key(|&(_, &c)| c.count_ones())
                .map_or(0, |(k, _)| k + 1)
        };
        let mut vertices: Vec<InternalVertex> = Vec::with_capacity(self.splits.len() + 1);
        let blocks: Vec<Split> = std::iter::once(all).chain(self.splits.iter().copied()).collect();
        for (v, &block) in blocks.iter().enumerate() {
            let children: Vec<usize> = self
                .splits
                .iter()
                .enumerate()
                .filter(|&(_, &s)| s != block && s & block == s && parent_of(s) == v)
                .map(|(k, _)| k + 1)
                .collect();
            let covered = children.iter().fold(0, |acc, &c| acc | blocks[c]);
            let mut leaves: Vec<usize> = leaves_of(block & !covered).collect();
            let mut neighbours = children;
            if v == 0 {
                leaves.insert(0, 0);
            } else {
                neighbours.insert(0, parent_of(block));
            }
            vertices.push(InternalVertex { leaves, neighbours });
        }
        vertices
    }

    fn render_block(&self, block: Split, out: &mut String) {
        let children: Vec<Split> = self
            .splits
            .iter()
            .copied()
            .filter(|&s| s != block && s & block == s)
            .filter(|&s| {
                !self
                    .splits
                    .iter()
                    .any(|&c| c != s && c != block && c & block == c && c & s == s)
            })
            .collect();
        let covered = children.iter().fold(0, |acc, &c| acc | c);
        let mut items: Vec<(usize, Option<Split>)> = leaves_of(block & !covered).map(|l| (l, None)).collect();
        items.extend(children.iter().map(|&c| (c.trailing_zeros() as usize, Some(c))));
        items.sort();
        for (k, (leaf, child)) in items.into_iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            match child {
                None => out.push_str(&leaf.to_string()),
                Some(c) => {
                    out.push('(');
                    self.render_block(c, out);
                    out.push(')');
                }
            }
        }
    }
}

/// Nested-parenthesis form rooted at leaf 0: `(0,1,(2,3))`.
impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all: Split = ((1u64 << self.n) - 1) << 1;
        let mut s = String::from("(0,");
        self.render_block(all, &mut s);
        s.push(')');
        f.write_str(&s)
    }
}

fn all_splits(n: usize) -> Vec<Split> {
    let all: Split = ((1u64 << n) - 1) << 1;
    (0..=all)
        .filter(|&s| s & !all == 0 && s & 1 == 0)
        .filter(|s| (2..n).contains(&(s.count_ones() as usize)))
        .collect()
}

/// Every tree shape on leaves `0..=n`, grouped by number of internal edges.
pub fn enumerate_tree_shapes(n: usize) -> Result<BTreeMap<usize, Vec<TreeShape>>, LieTreeError> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(LieTreeError::SizeLimit { n, max: MAX_ENUMERATION_N });
    }
    let candidates = all_splits(n);
    let mut out: BTreeMap<usize, Vec<TreeShape>> = BTreeMap::new();
    let mut chosen = Vec::new();
    grow(&candidates, 0, &mut chosen, &mut |splits| {
        out.entry(splits.len())
            .or_default()
            .push(TreeShape { n, splits: splits.to_vec() });
    });
    for shapes in out.values_mut() {
        shapes.sort();
    }
    Ok(out)
}

fn grow(candidates: &[Split], from: usize, chosen: &mut Vec<Split>, visit: &mut dyn FnMut(&[Split])) {
    visit(chosen);
    for i in from..candidates.len() {
        let s = candidates[i];
        if chosen.iter().all(|&c| compatible(c, s)) {
            chosen.push(s);
            grow(candidates, i + 1, chosen, visit);
            chosen.pop();
        }
    }
}

/// Operadic composition `outer ∘_j inner`: the root (leaf 0) of `inner` is glued
/// onto leaf `j` of `outer`. Leaves are relabelled in the usual way: outer
/// leaves before `j` keep their labels, inner leaves `1..=b` become
/// `j..j+b-1`, and outer leaves after `j` shift up by `b - 1`. The glued edge
/// is a new internal edge of length one. Grafting with the one-edge tree on two
/// leaves (the operad unit) only relabels.
pub fn graft(outer: &TreeShape, inner: &TreeShape, at_leaf: usize) -> Result<TreeShape, LieTreeError> {
    let a = outer.n;
    let b = inner.n;
    if at_leaf == 0 || at_leaf > a {
        return Err(LieTreeError::BadLeaf { leaf: at_leaf, n: a });
    }
    let n = a + b - 1;
    if n > MAX_LEAF_LABEL {
        return Err(LieTreeError::InvalidTree(format!("graft would have {} leaves", n + 1)));
    }
    let j = at_leaf;
    let block: Split = ((1u64 << b) - 1) << j;
    let map_outer = |s: Split| -> Split {
        leaves_of(s)
            .map(|l| match l.cmp(&j) {
                std::cmp::Ordering::Less => 1u64 << l,
                std::cmp::Ordering::Equal => block,
                std::cmp::Ordering::Greater => 1u64 << (l + b - 1),
            })
            .fold(0, |acc, m| acc | m)
    };
    let map_inner = |s: Split| -> Split { leaves_of(s).fold(0, |acc, k| acc | 1u64 << (j + k - 1)) };
    let mut splits: Vec<Split> = outer.splits.iter().map(|&s| map_outer(s)).collect();
    splits.extend(inner.splits.iter().map(|&s| map_inner(s)));
    if a >= 2 && b >= 2 {
        splits.push(block);
    }
    TreeShape::from_splits(n, splits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_for_small_n() {
        let t1 = enumerate_tree_shapes(1).unwrap();
        assert_eq!(t1.len(), 1);
        assert_eq!(t1[&0][0].to_string(), "(0,1)");

        let t2 = enumerate_tree_shapes(2).unwrap();
        assert_eq!(t2.keys().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(t2[&0][0].to_string(), "(0,1,2)");

        let t3 = enumerate_tree_shapes(3).unwrap();
        assert_eq!(t3[&0].len(), 1);
        assert_eq!(t3[&1].len(), 3);

        let t4 = enumerate_tree_shapes(4).unwrap();
        let counts: Vec<usize> = t4.values().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 10, 15]);
    }

    #[test]
    fn size_limit() {
        assert_eq!(enumerate_tree_shapes(8), Err(LieTreeError::SizeLimit { n: 8, max: 7 }));
        assert!(enumerate_tree_shapes(0).is_err());
    }

    #[test]
    fn three_trees_render() {
        let t3 = enumerate_tree_shapes(3).unwrap();
        let names: Vec<String> = t3[&1].iter().map(ToString::to_string).collect();
        assert_eq!(names, vec!["(0,(1,2),3)", "(0,(1,3),2)", "(0,1,(2,3))"]);
    }

    #[test]
    fn rejects_bad_splits() {
        assert!(TreeShape::from_splits(3, [0b0010]).is_err()); // single leaf
        assert!(TreeShape::from_splits(3, [0b1110]).is_err()); // complement is {0}
        assert!(TreeShape::from_splits(4, [0b00110, 0b01100]).is_err()); // crossing
        assert!(TreeShape::from_splits(4, [0b00110, 0b00110]).is_err());
        assert!(TreeShape::from_splits(4, [0b00110, 0b01110]).is_ok());
    }

    #[test]
    fn vertices_have_valence_at_least_three() {
        for n in 2..=6 {
            for shapes in enumerate_tree_shapes(n).unwrap().values() {
                for t in shapes {
                    let vs = t.internal_vertices();
                    assert_eq!(vs.len(), t.internal_edge_count() + 1);
                    assert!(vs.iter().all(|v| v.valence() >= 3), "{t}");
                    let leaf_total: usize = vs.iter().map(|v| v.leaves.len()).sum();
                    assert_eq!(leaf_total, n + 1);
                    let adj: usize = vs.iter().map(|v| v.neighbours.len()).sum();
                    assert_eq!(adj, 2 * t.internal_edge_count());
                }
            }
        }
    }

    #[test]
    fn graft_corollas() {
        let c2 = TreeShape::corolla(2).unwrap();
        let g1 = graft(&c2, &c2, 1).unwrap();
        assert_eq!(g1.n(), 3);
        assert_eq!(g1.splits(), &[0b0110]);
        assert_eq!(g1.to_string(), "(0,(1,2),3)");
        // At leaf 2 we get the tree with 0,1 on one vertex and 2,3 on the other.
        let g2 = graft(&c2, &c2, 2).unwrap();
        assert_eq!(g2.to_string(), "(0,1,(2,3))");
        assert_eq!(graft(&c2, &c2, 0), Err(LieTreeError::BadLeaf { leaf: 0, n: 2 }));
        assert_eq!(graft(&c2, &c2, 3), Err(LieTreeError::BadLeaf { leaf: 3, n: 2 }));
    }

    #[test]
    fn graft_with_unit_relabels_only() {
        let unit = TreeShape::corolla(1).unwrap();
        let t = TreeShape::from_splits(4, [0b00110]).unwrap();
        assert_eq!(graft(&t, &unit, 3).unwrap(), t);
        assert_eq!(graft(&unit, &t, 1).unwrap(), t);
    }
}
