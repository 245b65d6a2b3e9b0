//! The arity-`n` part of the Lie operad: multilinear bracket monomials in
//! `x_1, ..., x_n` modulo antisymmetry and the Jacobi identity.
//!
//! Basis: left-normed brackets `[[...[x_1, x_s2], ...], x_sn]` with `x_1`
//! leftmost, one per permutation of `2..=n`. Reduction to this basis is a
//! rewriting system with two rules, applicable at any bracket `[U, V]`:
//!
//! * orient: if `min(V) < min(U)`, replace `[U, V]` by `-[V, U]`;
//! * unnest: if `min(U) < min(V)` and `V = [B, C]`, replace `[U, [B, C]]` by
//!   `[[U, B], C] - [[U, C], B]`.
//!
//! Orienting removes a misoriented bracket and unnesting creates none while
//! shrinking right-hand subtrees, so every rewrite sequence terminates. Terms
//! with no redex are exactly the basis monomials, which gives confluence.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::LieTreeError;

pub const MAX_LIE_ARITY: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieMonomial {
    Var(u8),
    Bracket(Box<LieMonomial>, Box<LieMonomial>),
}

impl LieMonomial {
    pub fn var(i: u8) -> Self {
        LieMonomial::Var(i)
    }

    pub fn bracket(a: LieMonomial, b: LieMonomial) -> Self {
        LieMonomial::Bracket(Box::new(a), Box::new(b))
    }

    /// Left-normed bracket of the given variables.
    pub fn left_normed(vars: &[u8]) -> Self {
        let mut it = vars.iter();
        let first = LieMonomial::Var(*it.next().expect("at least one variable"));
        it.fold(first, |acc, &v| LieMonomial::bracket(acc, LieMonomial::Var(v)))
    }

    pub fn variables(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<u8>) {
        match self {
            LieMonomial::Var(i) => out.push(*i),
            LieMonomial::Bracket(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn min_var(&self) -> u8 {
        match self {
            LieMonomial::Var(i) => *i,
            LieMonomial::Bracket(a, b) => a.min_var().min(b.min_var()),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            LieMonomial::Var(_) => 1,
            LieMonomial::Bracket(a, b) => a.arity() + b.arity(),
        }
    }

    /// Each of `x_1..x_n` appears exactly once.
    pub fn is_multilinear(&self, n: usize) -> bool {
        let mut vars = self.variables();
        vars.sort_unstable();
        vars.iter().copied().eq(1..=n as u8)
    }

    /// Substitutes `x_i -> x_{perm(i)}`.
    pub fn relabel(&self, perm: &Permutation) -> LieMonomial {
        match self {
            LieMonomial::Var(i) => LieMonomial::Var(perm.apply(*i)),
            LieMonomial::Bracket(a, b) => LieMonomial::bracket(a.relabel(perm), b.relabel(perm)),
        }
    }

    /// No rewrite rule applies: a left-normed bracket with the least variable leftmost.
    pub fn is_normal(&self) -> bool {
        self.redexes().is_empty()
    }

    /// Positions (paths of left/right turns, `true` = right) where a rule applies.
    pub fn redexes(&self) -> Vec<Vec<bool>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_redexes(&mut path, &mut out);
        out
    }

    fn collect_redexes(&self, path: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if let LieMonomial::Bracket(a, b) = self {
            if b.min_var() < a.min_var() || matches!(**b, LieMonomial::Bracket(..)) {
                out.push(path.clone());
            }
            path.push(false);
            a.collect_redexes(path, out);
            path.pop();
            path.push(true);
            b.collect_redexes(path, out);
            path.pop();
        }
    }

    fn subterm(&self, path: &[bool]) -> &LieMonomial {
        path.iter().fold(self, |m, &right| match m {
            LieMonomial::Bracket(a, b) => if right { b } else { a },
            LieMonomial::Var(_) => panic!("path leaves the tree"),
        })
    }

    fn replace(&self, path: &[bool], with: LieMonomial) -> LieMonomial {
        match (path.split_first(), self) {
            (None, _) => with,
            (Some((&right, rest)), LieMonomial::Bracket(a, b)) => {
                if right {
                    LieMonomial::bracket((**a).clone(), b.replace(rest, with))
                } else {
                    LieMonomial::bracket(a.replace(rest, with), (**b).clone())
                }
            }
            (Some(_), LieMonomial::Var(_)) => panic!("path leaves the tree"),
        }
    }

    /// Applies the rule at `path`; the result is a signed list of monomials.
    pub fn rewrite_at(&self, path: &[bool]) -> Vec<(LieMonomial, i64)> {
        let LieMonomial::Bracket(u, v) = self.subterm(path) else {
            panic!("no redex at a variable");
        };
        if v.min_var() < u.min_var() {
            let flipped = LieMonomial::bracket((**v).clone(), (**u).clone());
            return vec![(self.replace(path, flipped), -1)];
        }
        let LieMonomial::Bracket(b, c) = &**v else {
            panic!("no redex at this position");
        };
        let first = LieMonomial::bracket(LieMonomial::bracket((**u).clone(), (**b).clone()), (**c).clone());
        let second = LieMonomial::bracket(LieMonomial::bracket((**u).clone(), (**c).clone()), (**b).clone());
        vec![(self.replace(path, first), 1), (self.replace(path, second), -1)]
    }
}

/// Bracket notation `[[x1,x2],x3]`.
impl fmt::Display for LieMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieMonomial::Var(i) => write!(f, "x{i}"),
            LieMonomial::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

impl FromStr for LieMonomial {
    type Err = LieTreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (m, rest) = parse_monomial(&compact).ok_or_else(|| LieTreeError::Parse(s.to_string()))?;
        if rest.is_empty() {
            Ok(m)
        } else {
            Err(LieTreeError::Parse(s.to_string()))
        }
    }
}

fn parse_monomial(s: &str) -> Option<(LieMonomial, &str)> {
    if let Some(rest) = s.strip_prefix('[') {
        let (a, rest) = parse_monomial(rest)?;
        let rest = rest.strip_prefix(',')?;
        let (b, rest) = parse_monomial(rest)?;
        let rest = rest.strip_prefix(']')?;
        Some((LieMonomial::bracket(a, b), rest))
    } else {
        let rest = s.strip_prefix('x')?;
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let i: u8 = rest[..end].parse().ok()?;
        Some((LieMonomial::Var(i), &rest[end..]))
    }
}

/// A finite integer combination of monomials; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieCombination {
    terms: BTreeMap<LieMonomial, i64>,
}

impl LieCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, m: LieMonomial, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn coefficient(&self, m: &LieMonomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LieMonomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn pop_first(&mut self) -> Option<(LieMonomial, i64)> {
        self.terms.pop_first()
    }

    fn remove_nth(&mut self, k: usize) -> Option<(LieMonomial, i64)> {
        let key = self.terms.keys().nth(k)?.clone();
        let c = self.terms.remove(&key)?;
        Some((key, c))
    }
}

impl From<LieMonomial> for LieCombination {
    fn from(m: LieMonomial) -> Self {
        let mut c = LieCombination::zero();
        c.add_term(m, 1);
        c
    }
}

impl FromIterator<(LieMonomial, i64)> for LieCombination {
    fn from_iter<I: IntoIterator<Item = (LieMonomial, i64)>>(iter: I) -> Self {
        let mut c = LieCombination::zero();
        for (m, k) in iter {
            c.add_term(m, k);
        }
        c
    }
}

impl fmt::Display for LieCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, &c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else if k > 0 { "+" } else { "" };
            let sep = if k > 0 { " " } else { "" };
            let space = if k > 0 { " " } else { "" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sep}{sign}{space}{m}")?;
            } else {
                write!(f, "{sep}{sign}{space}{mag}{m}")?;
            }
        }
        Ok(())
    }
}

/// Reduces a combination to the left-normed basis, always rewriting the first
/// redex of the first non-normal term.
pub fn straighten_combination(v: &LieCombination) -> LieCombination {
    straighten_with(v, |_| (0, 0))
}

pub fn straighten(m: &LieMonomial) -> LieCombination {
    straighten_combination(&LieCombination::from(m.clone()))
}

/// Reduces `v`, letting `choose` pick which term and which redex to rewrite
/// next. It receives the number of pending non-normal terms and returns
/// `(term index, redex index)`, both taken modulo the available count.
pub fn straighten_with(
    v: &LieCombination,
    mut choose: impl FnMut(usize) -> (usize, usize),
) -> LieCombination {
    let mut done = LieCombination::zero();
    let mut pending = LieCombination::zero();
    for (m, c) in v.terms() {
        if m.is_normal() {
            done.add_term(m.clone(), c);
        } else {
            pending.add_term(m.clone(), c);
        }
    }
    while !pending.is_empty() {
        let (k, r) = choose(pending.len());
        let (m, c) = if k % pending.len() == 0 {
            pending.pop_first().expect("non-empty")
        } else {
            pending.remove_nth(k % pending.len()).expect("in range")
        };
        let redexes = m.redexes();
        let path = &redexes[r % redexes.len()];
        for (out, s) in m.rewrite_at(path) {
            if out.is_normal() {
                done.add_term(out, c * s);
            } else {
                pending.add_term(out, c * s);
            }
        }
    }
    done
}

/// `(n-1)!` left-normed monomials `[[x1, x_s2], ..., x_sn]`, with the tail
/// permutations in lexicographic order.
pub fn lie_basis(n: usize) -> Result<Vec<LieMonomial>, LieTreeError> {
    if n == 0 || n > MAX_LIE_ARITY {
        return Err(LieTreeError::SizeLimit { n, max: MAX_LIE_ARITY });
    }
    let tail: Vec<u8> = (2..=n as u8).collect();
    let mut out = Vec::new();
    for perm in permutations(&tail) {
        let mut vars = vec![1u8];
        vars.extend(perm);
        out.push(LieMonomial::left_normed(&vars));
    }
    Ok(out)
}

fn permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (k, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// A permutation of `{1, ..., n}`; `images[i - 1] = σ(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<u8>) -> Result<Self, LieTreeError> {
        let mut sorted = images.clone();
        sorted.sort_unstable();
        if !sorted.iter().copied().eq(1..=images.len() as u8) {
            return Err(LieTreeError::InvalidPermutation(images));
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n as u8).collect() }
    }

    /// Swaps `a` and `b`.
    pub fn transposition(n: usize, a: u8, b: u8) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a as usize - 1, b as usize - 1);
        p
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: u8) -> u8 {
        self.images.get(i as usize - 1).copied().unwrap_or(i)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let n = self.len().max(other.len());
        Permutation { images: (1..=n as u8).map(|i| self.apply(other.apply(i))).collect() }
    }

    pub fn sign(&self) -> i64 {
        let mut seen = vec![false; self.images.len()];
        let mut sign = 1;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize - 1;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }
}

/// Sign-twisted action: relabel `x_i -> x_{σ(i)}`, multiply by `sign(σ)`, straighten.
pub fn sigma_action_signed(perm: &Permutation, v: &LieCombination) -> LieCombination {
    let s = perm.sign();
    let relabelled: LieCombination = v.terms().map(|(m, c)| (m.relabel(perm), c * s)).collect();
    straighten_combination(&relabelled)
}
