//! Integer degree sets: the additive monoids (sometimes groups) in which the
//! coefficients and cooperations of the spectra we study are concentrated.
//!
//! A [`DegreeSet`] is generated by single degrees, possibly invertible, and by
//! infinite families `2p^i - 2` / `2p^i - 1`. Families are never materialised in
//! full; a query for `d` only looks at members `<= d`, so truncating a family
//! can never change an answer.
//!
//! Membership is decided exactly:
//!
//! * without invertible generators, `d` is a member iff it is reachable in the
//!   numerical monoid spanned by the positive generators. Reachability is
//!   tabulated lazily; once a run of `a` consecutive multiples of the gcd is
//!   found (`a` the smallest generator) every larger multiple is a member, and
//!   the table stops growing.
//! * with invertible generators spanning `hZ`, the set is `M + hZ`. The image of
//!   `M` in `Z/h` is a submonoid of a finite group, hence the subgroup generated
//!   by the positive generators, so `d` is a member iff `gcd(g, h) | d` where `g`
//!   is the gcd of the positive generators.

use std::fmt;
use std::sync::RwLock;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::prime::Prime;

/// Degrees are signed 64-bit integers; every generator computation is checked.
pub type Degree = i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("degree set has no generators, so it has no positive element")]
    NoPositiveElement,
    #[error("generator degree must be non-zero")]
    ZeroGenerator,
    #[error("non-invertible generator {0} must be positive")]
    NegativeGenerator(Degree),
    #[error("generator overflows a 64-bit degree")]
    Overflow,
    #[error("family index range {min}..={max} is empty")]
    EmptyFamily { min: u32, max: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeGenerator {
    pub value: Degree,
    /// Coefficient may be any integer instead of only non-negative ones.
    pub invertible: bool,
}

impl DegreeGenerator {
    pub fn new(value: Degree, invertible: bool) -> Result<Self, DegreeError> {
        if value == 0 {
            return Err(DegreeError::ZeroGenerator);
        }
        if !invertible && value < 0 {
            return Err(DegreeError::NegativeGenerator(value));
        }
        Ok(DegreeGenerator { value, invertible })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    /// `2p^i - 2`
    #[serde(rename = "2p^i-2")]
    EvenTwoPowMinusTwo,
    /// `2p^i - 1`
    #[serde(rename = "2p^i-1")]
    OddTwoPowMinusOne,
}

impl FamilyKind {
    fn member(self, p: Prime, i: u32) -> Option<Degree> {
        match self {
            FamilyKind::EvenTwoPowMinusTwo => p.even_generator(i),
            FamilyKind::OddTwoPowMinusOne => p.odd_generator(i),
        }
    }
}

/// Non-invertible generators `kind(p, i)` for `min_index <= i <= max_index`
/// (unbounded when `max_index` is `None`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorFamily {
    pub kind: FamilyKind,
    pub prime: Prime,
    pub min_index: u32,
    pub max_index: Option<u32>,
}

impl GeneratorFamily {
    pub fn new(
        kind: FamilyKind,
        prime: Prime,
        min_index: u32,
        max_index: Option<u32>,
    ) -> Result<Self, DegreeError> {
        if let Some(max) = max_index {
            if max < min_index {
                return Err(DegreeError::EmptyFamily { min: min_index, max });
            }
        }
        let first = kind.member(prime, min_index).ok_or(DegreeError::Overflow)?;
        if first <= 0 {
            // 2p^0 - 2 = 0
            return Err(DegreeError::ZeroGenerator);
        }
        Ok(GeneratorFamily { kind, prime, min_index, max_index })
    }

    /// Members in increasing order, stopping at the first one above `bound`
    /// (or at the first one that overflows).
    pub fn members_up_to(&self, bound: Degree) -> impl Iterator<Item = Degree> + '_ {
        let end = self.max_index.unwrap_or(u32::MAX);
        (self.min_index..=end)
            .map_while(move |i| self.kind.member(self.prime, i))
            .take_while(move |&v| v <= bound)
    }

    fn first(&self) -> Degree {
        self.kind
            .member(self.prime, self.min_index)
            .expect("checked in constructor")
    }

    /// gcd of all members. For both families the gcd of two consecutive members
    /// already divides every member: `gcd(2p^a-2, 2p^(a+1)-2) = 2(p-1)`, and
    /// `gcd(2p^a-1, 2p^(a+1)-1)` divides `p-1` while every member is `1 mod (p-1)`.
    fn gcd(&self) -> Degree {
        let first = self.first();
        let has_second = self.max_index.map_or(true, |m| m > self.min_index);
        match self.kind.member(self.prime, self.min_index + 1) {
            Some(second) if has_second => first.gcd(&second),
            _ => first,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorSource {
    Single(DegreeGenerator),
    Family(GeneratorFamily),
}

#[derive(Debug, Default)]
struct MembershipTable {
    reach: Vec<bool>,
    /// Every multiple of the gcd at or above this value is a member.
    conductor: Option<Degree>,
}

/// A finitely described additive monoid of integer degrees.
pub struct DegreeSet {
    sources: Vec<GeneratorSource>,
    positive_gcd: Degree,
    invertible_gcd: Degree,
    smallest_positive: Option<Degree>,
    table: RwLock<MembershipTable>,
}

impl Clone for DegreeSet {
    fn clone(&self) -> Self {
        DegreeSet::from_sources(self.sources.clone())
    }
}

impl fmt::Debug for DegreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DegreeSet").field("sources", &self.sources).finish()
    }
}

impl PartialEq for DegreeSet {
    fn eq(&self, other: &Self) -> bool {
        self.sources == other.sources
    }
}

impl DegreeSet {
    pub fn from_sources(sources: Vec<GeneratorSource>) -> Self {
        let mut positive_gcd = 0;
        let mut invertible_gcd = 0;
        let mut smallest_positive: Option<Degree> = None;
        for s in &sources {
            match s {
                GeneratorSource::Single(g) if g.invertible => {
                    invertible_gcd = invertible_gcd.gcd(&g.value);
                }
                GeneratorSource::Single(g) => {
                    positive_gcd = positive_gcd.gcd(&g.value);
                    smallest_positive = Some(smallest_positive.map_or(g.value, |m| m.min(g.value)));
                }
                GeneratorSource::Family(fam) => {
                    positive_gcd = positive_gcd.gcd(&fam.gcd());
                    let first = fam.first();
                    smallest_positive = Some(smallest_positive.map_or(first, |m| m.min(first)));
                }
            }
        }
        DegreeSet {
            sources,
            positive_gcd,
            invertible_gcd,
            smallest_positive,
            table: RwLock::new(MembershipTable::default()),
        }
    }

    pub fn from_generators(generators: &[DegreeGenerator]) -> Self {
        Self::from_sources(generators.iter().copied().map(GeneratorSource::Single).collect())
    }

    pub fn sources(&self) -> &[GeneratorSource] {
        &self.sources
    }

    pub fn has_invertible(&self) -> bool {
        self.invertible_gcd != 0
    }

    /// All generators with `|value| <= bound`, families expanded.
    pub fn generators_up_to(&self, bound: Degree) -> Vec<DegreeGenerator> {
        let mut out = Vec::new();
        for s in &self.sources {
            match s {
                GeneratorSource::Single(g) if g.value.abs() <= bound => out.push(*g),
                GeneratorSource::Single(_) => {}
                GeneratorSource::Family(fam) => out.extend(
                    fam.members_up_to(bound)
                        .map(|value| DegreeGenerator { value, invertible: false }),
                ),
            }
        }
        out
    }

    /// gcd of the positive (non-invertible) generators; 0 if there are none.
    pub fn positive_gcd(&self) -> Degree {
        self.positive_gcd
    }

    pub fn contains(&self, d: Degree) -> bool {
        if self.invertible_gcd != 0 {
            let c = self.positive_gcd.gcd(&self.invertible_gcd);
            return d % c == 0;
        }
        if d == 0 {
            return true;
        }
        if d < 0 || self.positive_gcd == 0 || d % self.positive_gcd != 0 {
            return false;
        }
        {
            let table = self.table.read().expect("membership table poisoned");
            if let Some(c) = table.conductor {
                if d >= c {
                    return true;
                }
            }
            if (d as usize) < table.reach.len() {
                return table.reach[d as usize];
            }
        }
        let mut table = self.table.write().expect("membership table poisoned");
        self.extend_table(&mut table, d);
        match table.conductor {
            Some(c) if d >= c => true,
            _ => table.reach[d as usize],
        }
    }

    /// Grows the table geometrically until it covers `d` or the conductor is known.
    fn extend_table(&self, table: &mut MembershipTable, d: Degree) {
        let d = d as usize;
        while d >= table.reach.len() && table.conductor.is_none() {
            let start = table.reach.len();
            let target = (2 * start).max(64).min(d + 1).max(start + 1);
            self.extend_once(table, start, target);
        }
    }

    fn extend_once(&self, table: &mut MembershipTable, start: usize, target: usize) {
        let gens: Vec<usize> = self
            .generators_up_to(target as Degree)
            .into_iter()
            .map(|g| g.value as usize)
            .collect();
        let step = self.positive_gcd as usize;
        let run_needed = self.smallest_positive.expect("positive gcd implies a generator") as usize / step;
        table.reach.resize(target, false);
        table.reach[0] = true;
        let mut run = 0usize;
        let mut run_start = 0usize;
        for x in (0..target).step_by(step) {
            if x >= start && x > 0 {
                table.reach[x] = gens.iter().any(|&g| g <= x && table.reach[x - g]);
            }
            if table.reach[x] {
                if run == 0 {
                    run_start = x;
                }
                run += 1;
                if run >= run_needed {
                    table.conductor = Some(run_start as Degree);
                    break;
                }
            } else {
                run = 0;
            }
        }
    }

    /// Least positive member.
    pub fn min_positive(&self) -> Result<Degree, DegreeError> {
        if self.invertible_gcd != 0 {
            return Ok(self.positive_gcd.gcd(&self.invertible_gcd));
        }
        self.smallest_positive.ok_or(DegreeError::NoPositiveElement)
    }

    /// Members `d` with `0 <= d <= bound`, increasing.
    pub fn enumerate_up_to(&self, bound: Degree) -> Vec<Degree> {
        (0..=bound.max(0)).filter(|&d| self.contains(d)).collect()
    }

    fn even_family(p: Prime, min_index: u32) -> GeneratorSource {
        GeneratorSource::Family(
            GeneratorFamily::new(FamilyKind::EvenTwoPowMinusTwo, p, min_index, None)
                .expect("2p^i-2 with i >= 1 is positive"),
        )
    }

    fn odd_family(p: Prime, min_index: u32, max_index: Option<u32>) -> GeneratorSource {
        GeneratorSource::Family(
            GeneratorFamily::new(FamilyKind::OddTwoPowMinusOne, p, min_index, max_index)
                .expect("2p^i-1 is positive"),
        )
    }

    fn invertible(value: Degree) -> GeneratorSource {
        GeneratorSource::Single(DegreeGenerator { value, invertible: true })
    }

    /// `BP_*BP`: polynomial on `t_i`, `|t_i| = 2p^i - 2`.
    pub fn bp(p: Prime) -> Self {
        Self::from_sources(vec![Self::even_family(p, 1)])
    }

    /// Cooperations of the Johnson-Wilson spectrum `E(i)`: the `t_j` together
    /// with the unit `v_i^{±1}`.
    pub fn e(i: u32, p: Prime) -> Result<Self, DegreeError> {
        let vi = p.even_generator(i).ok_or(DegreeError::Overflow)?;
        if i == 0 {
            return Err(DegreeError::ZeroGenerator);
        }
        Ok(Self::from_sources(vec![Self::even_family(p, 1), Self::invertible(vi)]))
    }

    /// The localized Johnson-Wilson spectrum has the same degree support as `E(i)`.
    pub fn e_localized(i: u32, p: Prime) -> Result<Self, DegreeError> {
        Self::e(i, p)
    }

    /// Morava K-theory `K(n)`: `t_j`, the unit `v_n^{±1}`, and the exterior
    /// classes `tau_0, ..., tau_{n-1}` of degree `2p^i - 1`.
    pub fn k(n: u32, p: Prime) -> Result<Self, DegreeError> {
        if n == 0 {
            return Err(DegreeError::ZeroGenerator);
        }
        let vn = p.even_generator(n).ok_or(DegreeError::Overflow)?;
        Ok(Self::from_sources(vec![
            Self::even_family(p, 1),
            Self::invertible(vn),
            Self::odd_family(p, 0, Some(n - 1)),
        ]))
    }

    /// `P(n)`: `t_j` and `v_j` (all `2p^j - 2`) with exterior `a_0, ..., a_{n-1}`.
    pub fn p_n(n: u32, p: Prime) -> Result<Self, DegreeError> {
        if n == 0 {
            return Err(DegreeError::ZeroGenerator);
        }
        Ok(Self::from_sources(vec![
            Self::even_family(p, 1),
            Self::odd_family(p, 0, Some(n - 1)),
        ]))
    }

    /// `THH(BP)_* = BP_* ⊗ Λ(lambda_1, lambda_2, ...)` over the `BP` cooperations.
    pub fn thh_bp(p: Prime) -> Self {
        Self::from_sources(vec![Self::even_family(p, 1), Self::odd_family(p, 1, None)])
    }
}
