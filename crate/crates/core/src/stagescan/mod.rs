//! Obstruction windows and stage bounds.
//!
//! Existence obstructions for extending an `(n-1)`-stage to an `n`-stage live in
//! `HΓ^{n,2-n}`, uniqueness obstructions in `HΓ^{n,1-n}`. The obstruction
//! module in arity `m` is `Σ^{n-1} Lie(m)* ⊗ E_*[Σ_m]^{⊗(n-m+1)} ⊗ (E_*E)^{⊗m}`,
//! and the first two factors sit in internal degree zero, so the internal
//! degrees that can occur are exactly those of the cooperations. A window at
//! `n` therefore needs a cooperation degree matching the degree shift:
//!
//! | class | existence | uniqueness |
//! |-------|-----------|------------|
//! | free | `n-2` | `n-1` |
//! | flat colimit of free (Ext^0 and Ext^1) | `n-2` or `n-1` | `n-1` or `n` |
//! | polynomial, Kochman torsion | `n-2`, and `n-1` odd Kochman | `n-1`, a `t = 0` Kochman degree |
//!
//! All scans are linear in `n` and stop at [`SCAN_CEILING`].

mod presets;
mod schema;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::degrees::{Degree, DegreeError, DegreeSet, FamilyKind, GeneratorSource};
use crate::kochman::{self, KochmanGenerator};
use crate::prime::{Prime, PrimeError};

pub use presets::PRESET_NAMES;
pub use schema::{load_spectrum_json, GeneratorSpec, SpectrumFile};

pub const SCAN_CEILING: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StageScanError {
    #[error("{name} at p = {prime} is not homotopy commutative, so it has no 3-stage structure")]
    NoThreeStage { name: String, prime: Prime },
    #[error("this bound needs cooperation class {expected}, but {name} has class {found}")]
    WrongClass { name: String, expected: CoopClass, found: CoopClass },
    #[error("no window found below n = {ceiling}")]
    CeilingReached { ceiling: usize },
    #[error("stage must be at least 2, got {0}")]
    StageTooSmall(usize),
    #[error("{name} supports stage descriptions only; pass a stage to describe")]
    StageOnly { name: String },
    #[error("malformed JSON: {0}")]
    Parse(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Prime(#[from] PrimeError),
}

/// Module-theoretic type of the cooperations over the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoopClass {
    Free,
    FlatColimitOfFree,
    PolynomialWithKochmanTorsion,
}

impl fmt::Display for CoopClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoopClass::Free => "Free",
            CoopClass::FlatColimitOfFree => "FlatColimitOfFree",
            CoopClass::PolynomialWithKochmanTorsion => "PolynomialWithKochmanTorsion",
        })
    }
}

/// What `report` may compute for a presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportScope {
    Full,
    /// Only stage descriptions (and Dyer-Lashof queries downstream).
    StageOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPresentation {
    pub name: String,
    pub prime: Prime,
    pub coeff_degrees: DegreeSet,
    pub coop_degrees: DegreeSet,
    pub coop_class: CoopClass,
    pub odd_commutativity_ok: bool,
    pub scope: ReportScope,
    pub notes: Vec<String>,
}

/// Range used to check `coop ⊇ coeff` for infinite families.
const CONTAINMENT_CHECK_BOUND: Degree = 1 << 20;

impl SpectrumPresentation {
    pub fn validate(&self) -> Result<(), StageScanError> {
        for g in self.coeff_degrees.generators_up_to(CONTAINMENT_CHECK_BOUND) {
            let ok = self.coop_degrees.contains(g.value) && (!g.invertible || self.coop_degrees.contains(-g.value));
            if !ok {
                return Err(StageScanError::Invariant(format!(
                    "coefficient generator {} is not a cooperation degree",
                    g.value
                )));
            }
        }
        if self.coop_class == CoopClass::PolynomialWithKochmanTorsion {
            for s in self.coop_degrees.sources() {
                let fine = match s {
                    GeneratorSource::Family(f) => f.kind == FamilyKind::EvenTwoPowMinusTwo,
                    GeneratorSource::Single(g) => is_even_generator(self.prime, g.value),
                };
                if !fine {
                    return Err(StageScanError::Invariant(format!(
                        "class PolynomialWithKochmanTorsion needs cooperation generators of degree 2p^i-2, found {s:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn require_three_stage(&self) -> Result<(), StageScanError> {
        if self.odd_commutativity_ok {
            Ok(())
        } else {
            Err(StageScanError::NoThreeStage { name: self.name.clone(), prime: self.prime })
        }
    }

    fn require_class(&self, expected: CoopClass) -> Result<(), StageScanError> {
        if self.coop_class == expected {
            Ok(())
        } else {
            Err(StageScanError::WrongClass { name: self.name.clone(), expected, found: self.coop_class })
        }
    }
}

fn is_even_generator(p: Prime, d: Degree) -> bool {
    (1..).map_while(|i| p.even_generator(i)).take_while(|&g| g <= d).any(|g| g == d)
}

fn scan(from: usize, mut hit: impl FnMut(usize) -> bool) -> Result<usize, StageScanError> {
    (from..=SCAN_CEILING)
        .find(|&n| hit(n))
        .ok_or(StageScanError::CeilingReached { ceiling: SCAN_CEILING })
}

fn has(set: &DegreeSet, d: usize) -> bool {
    set.contains(d as Degree)
}

/// The arity-`m` part of the obstruction module at stage `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArityEntry {
    pub m: usize,
    pub skeleton_dim: usize,
    pub suspension: usize,
    pub group_ring_copies: usize,
    pub cooperation_copies: usize,
    pub module: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageDescriptor {
    pub n: usize,
    pub entries: Vec<ArityEntry>,
}

/// For each arity `2 <= m <= n`: the skeleton `EΣ_m^{(n-m)}` in use and the
/// shape of the obstruction module.
pub fn describe_stage(n: usize) -> Result<StageDescriptor, StageScanError> {
    if n < 2 {
        return Err(StageScanError::StageTooSmall(n));
    }
    let entries = (2..=n)
        .map(|m| ArityEntry {
            m,
            skeleton_dim: n - m,
            suspension: n - 1,
            group_ring_copies: n - m + 1,
            cooperation_copies: m,
            module: format!("Σ^{} Lie({m})* ⊗ E_*[Σ_{m}]^⊗{} ⊗ (E_*E)^⊗{m}", n - 1, n - m + 1),
        })
        .collect();
    Ok(StageDescriptor { n, entries })
}

/// The degree data exhibiting a first possible obstruction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: usize,
    /// Cooperation degree hit by the window.
    pub coop_degree: Degree,
    /// `0` for a hom (Ext^0) window, `1` for an Ext^1 window.
    pub ext_line: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kochman_generator: Option<KochmanGenerator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kochman_degree: Option<Degree>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub n: usize,
    pub witness: Witness,
}

/// Least `n >= 3` with `n - 2` a cooperation degree; the presentation has at
/// least an `n`-stage structure.
pub fn degree_count_bound(spec: &SpectrumPresentation) -> Result<Bound, StageScanError> {
    spec.require_three_stage()?;
    let n = scan(3, |n| has(&spec.coop_degrees, n - 2))?;
    Ok(Bound { n, witness: Witness::plain(n, (n - 2) as Degree, 0) })
}

/// Flat cooperations contribute an Ext^1 line, testing `n - 1` as well.
pub fn ext1_bound_flat(spec: &SpectrumPresentation) -> Result<Bound, StageScanError> {
    spec.require_class(CoopClass::FlatColimitOfFree)?;
    spec.require_three_stage()?;
    let coop = &spec.coop_degrees;
    let n = scan(3, |n| has(coop, n - 2) || has(coop, n - 1))?;
    let witness = if has(coop, n - 2) {
        Witness::plain(n, (n - 2) as Degree, 0)
    } else {
        Witness::plain(n, (n - 1) as Degree, 1)
    };
    Ok(Bound { n, witness })
}

/// Least `n >= 3` with `n - 2` a cooperation degree and `n - 1` the degree of an
/// odd Kochman generator. Hom into the coefficients vanishes on the torsion, so
/// only the Ext^1 term with homological degree `n - 1` remains; its parity
/// excludes every `t = 0` generator.
pub fn refined_bound_kochman(spec: &SpectrumPresentation) -> Result<Bound, StageScanError> {
    spec.require_class(CoopClass::PolynomialWithKochmanTorsion)?;
    spec.require_three_stage()?;
    let p = spec.prime;
    let mut bound = kochman::min_odd_degree(p) + 1;
    let mut from = 3usize;
    loop {
        let table = kochman::enumerate_by_degree(p, bound);
        let hit = (from..=(bound as usize + 1).min(SCAN_CEILING)).find(|&n| {
            has(&spec.coop_degrees, n - 2)
                && table.get(&((n - 1) as Degree)).is_some_and(|g| (n - 1) % 2 == 1 && !g.is_empty())
        });
        if let Some(n) = hit {
            let kappa = table[&((n - 1) as Degree)][0].clone();
            let witness = Witness {
                n,
                coop_degree: (n - 2) as Degree,
                ext_line: 1,
                kochman_generator: Some(kappa),
                kochman_degree: Some((n - 1) as Degree),
            };
            return Ok(Bound { n, witness });
        }
        if bound as usize + 1 >= SCAN_CEILING {
            return Err(StageScanError::CeilingReached { ceiling: SCAN_CEILING });
        }
        from = bound as usize + 2;
        bound = (2 * bound).min(SCAN_CEILING as Degree);
    }
}

/// Least `n` at which a uniqueness obstruction can be nonzero; any 3-stage
/// structure is unique up to the returned stage.
pub fn uniqueness_bound(spec: &SpectrumPresentation) -> Result<usize, StageScanError> {
    spec.require_three_stage()?;
    let coop = &spec.coop_degrees;
    match spec.coop_class {
        CoopClass::Free => scan(2, |n| has(coop, n - 1)),
        CoopClass::FlatColimitOfFree => scan(2, |n| has(coop, n - 1) || has(coop, n)),
        CoopClass::PolynomialWithKochmanTorsion => {
            // t = 0 Kochman degrees are the sums of |zbar_i| = 2p^i - 2
            let t0 = DegreeSet::bp(spec.prime);
            scan(2, |n| has(coop, n - 1) && has(&t0, n - 1))
        }
    }
}

/// A stage below the refined bound where a class of homological degree
/// `n - 1 + Σ μ_k(2p^k - 2)` could match an odd Kochman degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploratoryWindow {
    pub n: usize,
    pub kochman_degree: Degree,
    pub mu_weight: Degree,
}

/// Candidate windows with `μ ≠ 0`, searched for Kochman degrees up to twice the
/// refined window. These are not claimed to carry obstructions.
pub fn exploratory_windows(spec: &SpectrumPresentation) -> Result<Vec<ExploratoryWindow>, StageScanError> {
    let refined = refined_bound_kochman(spec)?.n;
    let limit = 2 * (refined as Degree - 1);
    let odd: Vec<Degree> = kochman::enumerate_by_degree(spec.prime, limit)
        .into_keys()
        .filter(|d| d % 2 != 0)
        .collect();
    let t0 = DegreeSet::bp(spec.prime);
    let mut out = Vec::new();
    for n in 3..refined {
        if !has(&spec.coop_degrees, n - 2) {
            continue;
        }
        let h = (n - 1) as Degree;
        if let Some(&d) = odd.iter().find(|&&d| d >= h && t0.contains(d - h)) {
            out.push(ExploratoryWindow { n, kochman_degree: d, mu_weight: d - h });
        }
    }
    Ok(out)
}

impl Witness {
    fn plain(n: usize, coop_degree: Degree, ext_line: u8) -> Self {
        Witness { n, coop_degree, ext_line, kochman_generator: None, kochman_degree: None }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    pub exploratory: bool,
    pub stage: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub spectrum: String,
    pub prime: Prime,
    pub coop_class: CoopClass,
    pub degree_count_bound: usize,
    pub refined_bound: Option<usize>,
    pub uniqueness_bound: usize,
    pub witness: Witness,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exploratory_windows: Option<Vec<ExploratoryWindow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<StageDescriptor>,
}

pub fn report(spec: &SpectrumPresentation) -> Result<CoherenceReport, StageScanError> {
    report_with(spec, &ReportOptions::default())
}

pub fn report_with(spec: &SpectrumPresentation, opts: &ReportOptions) -> Result<CoherenceReport, StageScanError> {
    if spec.scope == ReportScope::StageOnly && opts.stage.is_none() {
        return Err(StageScanError::StageOnly { name: spec.name.clone() });
    }
    let count = degree_count_bound(spec)?;
    let uniqueness = uniqueness_bound(spec)?;
    let mut notes = vec![
        "internal degrees of the obstruction module are the cooperation degrees".to_string(),
    ];
    let (refined, witness) = match (spec.scope, spec.coop_class) {
        (ReportScope::StageOnly, _) | (_, CoopClass::Free) => (None, count.witness.clone()),
        (_, CoopClass::FlatColimitOfFree) => {
            notes.push("flat cooperations: Ext^0 and Ext^1 lines test n-2 and n-1".to_string());
            let b = ext1_bound_flat(spec)?;
            (Some(b.n), b.witness)
        }
        (_, CoopClass::PolynomialWithKochmanTorsion) => {
            notes.push("refined window uses homological degree n-1 only (μ = 0)".to_string());
            let b = refined_bound_kochman(spec)?;
            (Some(b.n), b.witness)
        }
    };
    let exploratory = if opts.exploratory && spec.scope == ReportScope::Full {
        match spec.coop_class {
            CoopClass::PolynomialWithKochmanTorsion => {
                notes.push("exploratory windows allow μ ≠ 0 and are candidates only".to_string());
                Some(exploratory_windows(spec)?)
            }
            _ => Some(Vec::new()),
        }
    } else {
        None
    };
    notes.extend(spec.notes.iter().cloned());
    let stage = opts.stage.map(describe_stage).transpose()?;
    Ok(CoherenceReport {
        spectrum: spec.name.clone(),
        prime: spec.prime,
        coop_class: spec.coop_class,
        degree_count_bound: count.n,
        refined_bound: refined,
        uniqueness_bound: uniqueness,
        witness,
        notes,
        exploratory_windows: exploratory,
        stage,
    })
}

/// `"a 10-stage"` / `"an 8-stage"`.
pub fn stage_phrase(n: usize) -> String {
    let digits = n.to_string();
    let eleven_or_eighteen = (digits.starts_with("11") || digits.starts_with("18")) && digits.len() % 3 == 2;
    let article = if digits.starts_with('8') || eleven_or_eighteen { "an" } else { "a" };
    format!("{article} {n}-stage")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn bp_bounds() {
        let bp = SpectrumPresentation::bp(p(3));
        assert_eq!(degree_count_bound(&bp).unwrap().n, 6);
        let r = refined_bound_kochman(&bp).unwrap();
        assert_eq!(r.n, 22);
        assert_eq!(r.witness.kochman_generator.unwrap().to_string(), "P(1,2)");
        assert_eq!(uniqueness_bound(&bp).unwrap(), 5);
    }

    #[test]
    fn wrong_class() {
        let e = SpectrumPresentation::e(2, p(3)).unwrap();
        assert!(matches!(refined_bound_kochman(&e), Err(StageScanError::WrongClass { .. })));
        assert!(matches!(ext1_bound_flat(&SpectrumPresentation::bp(p(3))), Err(StageScanError::WrongClass { .. })));
    }

    #[test]
    fn describe() {
        let d = describe_stage(5).unwrap();
        assert_eq!(d.entries.iter().map(|e| e.skeleton_dim).collect::<Vec<_>>(), vec![3, 2, 1, 0]);
        assert_eq!(describe_stage(2).unwrap().entries.len(), 1);
        assert!(describe_stage(1).is_err());
    }

    #[test]
    fn articles() {
        assert_eq!(stage_phrase(8), "an 8-stage");
        assert_eq!(stage_phrase(11), "an 11-stage");
        assert_eq!(stage_phrase(18), "an 18-stage");
        assert_eq!(stage_phrase(10), "a 10-stage");
        assert_eq!(stage_phrase(110), "a 110-stage");
        assert_eq!(stage_phrase(82), "an 82-stage");
    }

    #[test]
    fn thh_needs_stage() {
        let t = SpectrumPresentation::thh_bp(p(3));
        assert!(matches!(report(&t), Err(StageScanError::StageOnly { .. })));
        let r = report_with(&t, &ReportOptions { exploratory: false, stage: Some(6) }).unwrap();
        assert_eq!(r.degree_count_bound, 6);
        assert_eq!(r.refined_bound, None);
    }
}
