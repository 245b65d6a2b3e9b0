//! Kochman's additive basis of the `p`-torsion of `HZ_* HZ`.
//!
//! Basis elements are `P(n_1, ..., n_t) * zbar_1^{e_1} * ... * zbar_s^{e_s}` with
//! `t != 1`, `0 < n_1 < ... < n_t`, `e_i = 0` for `i < n_1` and `t + sum e_i > 0`.
//! Each one spans a single `Z/p` summand. Degrees:
//!
//! * `|P(n_1, ..., n_t)| = 2(p^{n_1} + ... + p^{n_t}) - t - 1`, and `|P()| = 0`;
//! * `|zbar_i| = 2p^i - 2`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::degrees::Degree;
use crate::prime::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KochmanError {
    #[error("not an admissible basis element: {0}")]
    InvalidGenerator(String),
    #[error("degree overflows 64 bits")]
    Overflow,
    #[error("cannot parse `{0}` as a basis element")]
    Parse(String),
}

/// One basis element. Exponents are stored sparsely (index -> positive exponent).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct KochmanGenerator {
    n_list: Vec<u32>,
    exponents: BTreeMap<u32, u32>,
}

impl KochmanGenerator {
    /// Builds a generator from raw data without checking admissibility; zero
    /// exponents are dropped.
    pub fn from_parts(n_list: Vec<u32>, exponents: impl IntoIterator<Item = (u32, u32)>) -> Self {
        KochmanGenerator {
            n_list,
            exponents: exponents.into_iter().filter(|&(_, e)| e > 0).collect(),
        }
    }

    /// Like [`from_parts`](Self::from_parts), but rejects inadmissible data.
    pub fn new(
        n_list: Vec<u32>,
        exponents: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, KochmanError> {
        let g = Self::from_parts(n_list, exponents);
        if g.is_admissible() {
            Ok(g)
        } else {
            Err(KochmanError::InvalidGenerator(g.to_string()))
        }
    }

    /// `zbar_i` on its own.
    pub fn zeta(i: u32) -> Self {
        Self::from_parts(Vec::new(), [(i, 1)])
    }

    /// The unit `P()`: degree 0, not a torsion generator.
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn t(&self) -> usize {
        self.n_list.len()
    }

    pub fn n_list(&self) -> &[u32] {
        &self.n_list
    }

    pub fn exponent(&self, i: u32) -> u32 {
        self.exponents.get(&i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.exponents.iter().map(|(&i, &e)| (i, e))
    }

    pub fn is_unit(&self) -> bool {
        self.n_list.is_empty() && self.exponents.is_empty()
    }

    pub fn is_admissible(&self) -> bool {
        let t = self.t();
        if t == 1 {
            return false;
        }
        if self.n_list.first().is_some_and(|&n| n == 0) {
            return false;
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        if self.exponents.keys().any(|&i| i == 0) {
            return false;
        }
        if let Some(&n1) = self.n_list.first() {
            if self.exponents.keys().any(|&i| i < n1) {
                return false;
            }
        }
        t + self.exponents.values().map(|&e| e as usize).sum::<usize>() > 0
    }

    /// Total degree. The unit is accepted and has degree 0.
    pub fn degree(&self, p: Prime) -> Result<Degree, KochmanError> {
        if !self.is_unit() && !self.is_admissible() {
            return Err(KochmanError::InvalidGenerator(self.to_string()));
        }
        let mut total: Degree = 0;
        if !self.n_list.is_empty() {
            for &n in &self.n_list {
                let pn = p.pow(n).ok_or(KochmanError::Overflow)?;
                total = pn
                    .checked_mul(2)
                    .and_then(|x| total.checked_add(x))
                    .ok_or(KochmanError::Overflow)?;
            }
            total -= self.t() as Degree + 1;
        }
        for (&i, &e) in &self.exponents {
            let z = p.even_generator(i).ok_or(KochmanError::Overflow)?;
            total = z
                .checked_mul(e as Degree)
                .and_then(|x| total.checked_add(x))
                .ok_or(KochmanError::Overflow)?;
        }
        Ok(total)
    }

    fn dense_exponents(&self) -> Vec<u32> {
        let len = self.exponents.keys().next_back().map_or(0, |&i| i as usize + 1);
        let mut v = vec![0; len];
        for (&i, &e) in &self.exponents {
            v[i as usize] = e;
        }
        v
    }
}

/// Lexicographic on `(t, n_list, e_1, e_2, ...)`.
impl Ord for KochmanGenerator {
    fn cmp(&self, other: &Self) -> Ordering {
        self.t()
            .cmp(&other.t())
            .then_with(|| self.n_list.cmp(&other.n_list))
            .then_with(|| self.dense_exponents().cmp(&other.dense_exponents()))
    }
}

impl PartialOrd for KochmanGenerator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical form: `P(1,2)*z1^1`, `z1^2*z3^1`, `P(2,3)`, `P()`.
impl fmt::Display for KochmanGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.n_list.is_empty() || self.exponents.is_empty() {
            let ns: Vec<String> = self.n_list.iter().map(u32::to_string).collect();
            parts.push(format!("P({})", ns.join(",")));
        }
        for (i, e) in &self.exponents {
            parts.push(format!("z{i}^{e}"));
        }
        f.write_str(&parts.join("*"))
    }
}

impl FromStr for KochmanGenerator {
    type Err = KochmanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || KochmanError::Parse(s.to_string());
        let mut n_list = Vec::new();
        let mut exps: BTreeMap<u32, u32> = BTreeMap::new();
        for (k, part) in s.trim().split('*').enumerate() {
            let part = part.trim();
            if let Some(inner) = part.strip_prefix("P(").and_then(|r| r.strip_suffix(')')) {
                if k != 0 {
                    return Err(bad());
                }
                if !inner.trim().is_empty() {
                    for n in inner.split(',') {
                        n_list.push(n.trim().parse().map_err(|_| bad())?);
                    }
                }
            } else if let Some(rest) = part.strip_prefix('z') {
                let (i, e) = match rest.split_once('^') {
                    Some((i, e)) => (i, e),
                    None => (rest, "1"),
                };
                let i: u32 = i.parse().map_err(|_| bad())?;
                let e: u32 = e.parse().map_err(|_| bad())?;
                if exps.insert(i, e).is_some() {
                    return Err(bad());
                }
            } else {
                return Err(bad());
            }
        }
        Ok(KochmanGenerator::from_parts(n_list, exps))
    }
}

impl Serialize for KochmanGenerator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KochmanGenerator {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All admissible generators of degree `<= d_max`, keyed by degree, each list
/// in lexicographic `(t, n_list, e)` order. The unit is excluded.
pub fn enumerate_by_degree(p: Prime, d_max: Degree) -> BTreeMap<Degree, Vec<KochmanGenerator>> {
    let mut out: BTreeMap<Degree, Vec<KochmanGenerator>> = BTreeMap::new();
    if d_max <= 0 {
        return out;
    }
    // zbar_i degrees that fit, index 1..
    let zetas: Vec<Degree> = (1..)
        .map_while(|i| p.even_generator(i).filter(|&z| z <= d_max))
        .collect();
    // p^n with 2p^n - 3 <= d_max (the smallest P-part using n is P(n, n+1) > that).
    let powers: Vec<Degree> = (1..)
        .map_while(|n| p.pow(n).filter(|&pn| 2 * pn <= d_max + 3))
        .collect();

    let mut push = |n_list: &[u32], exps: &[u32], degree: Degree| {
        let g = KochmanGenerator::from_parts(
            n_list.to_vec(),
            exps.iter().enumerate().map(|(k, &e)| (k as u32 + 1, e)),
        );
        out.entry(degree).or_default().push(g);
    };

    // t = 0
    let mut exps = vec![0u32; zetas.len()];
    exponent_choices(&zetas, 1, 0, d_max, &mut exps, &mut |exps, deg| {
        if deg > 0 {
            push(&[], exps, deg);
        }
    });

    // t >= 2: choose the n's, then exponents from index n_1 on.
    let mut n_list = Vec::new();
    choose_n_lists(&powers, 1, 0, d_max, &mut n_list, &mut |n_list, psum| {
        let t = n_list.len() as Degree;
        if t < 2 {
            return;
        }
        let base = 2 * psum - t - 1;
        if base > d_max {
            return;
        }
        let mut exps = vec![0u32; zetas.len()];
        exponent_choices(&zetas, n_list[0], base, d_max, &mut exps, &mut |exps, deg| {
            push(n_list, exps, deg);
        });
    });

    for list in out.values_mut() {
        list.sort();
    }
    out
}

fn exponent_choices(
    zetas: &[Degree],
    from_index: u32,
    degree: Degree,
    d_max: Degree,
    exps: &mut Vec<u32>,
    visit: &mut dyn FnMut(&[u32], Degree),
) {
    let k = from_index as usize - 1;
    if k >= zetas.len() {
        visit(exps, degree);
        return;
    }
    let z = zetas[k];
    let mut e = 0;
    let mut deg = degree;
    while deg <= d_max {
        exps[k] = e;
        exponent_choices(zetas, from_index + 1, deg, d_max, exps, visit);
        e += 1;
        deg += z;
    }
    exps[k] = 0;
}

fn choose_n_lists(
    powers: &[Degree],
    next: u32,
    psum: Degree,
    d_max: Degree,
    n_list: &mut Vec<u32>,
    visit: &mut dyn FnMut(&[u32], Degree),
) {
    visit(n_list, psum);
    for n in next..=powers.len() as u32 {
        let s = psum + powers[n as usize - 1];
        // adding more n's only increases 2*psum - t - 1
        if 2 * s - (n_list.len() as Degree + 1) - 1 > d_max {
            break;
        }
        n_list.push(n);
        choose_n_lists(powers, n + 1, s, d_max, n_list, visit);
        n_list.pop();
    }
}

/// All admissible generators of exactly degree `d`, in canonical order.
pub fn generators_of_degree(p: Prime, d: Degree) -> Vec<KochmanGenerator> {
    enumerate_by_degree(p, d).remove(&d).unwrap_or_default()
}

/// The least odd degree carried by an admissible generator: `|P(1,2)| = 2p^2 + 2p - 3`.
///
/// Odd degrees need `t` even and `>= 2`; any such generator has degree at least
/// that of `P(1,2)`, so the search below terminates at that value.
pub fn min_odd_degree(p: Prime) -> Degree {
    let upper = KochmanGenerator::from_parts(vec![1, 2], [])
        .degree(p)
        .expect("P(1,2) is admissible");
    enumerate_by_degree(p, upper)
        .into_keys()
        .find(|d| d % 2 != 0)
        .expect("P(1,2) itself has odd degree")
}
