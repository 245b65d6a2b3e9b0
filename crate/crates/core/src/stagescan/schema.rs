//! JSON form of a [`SpectrumPresentation`].
//!
//! ```json
//! {
//!   "name": "BP",
//!   "prime": 2,
//!   "generators": [{ "family": "2p^i-2", "min_index": 1 }],
//!   "coeff_generators": [{ "family": "2p^i-2" }],
//!   "coop_class": "PolynomialWithKochmanTorsion",
//!   "odd_commutativity_ok": true
//! }
//! ```
//!
//! `generators` describe the cooperations. Each entry is either
//! `{"degree": d}` or `{"family": "2p^i-2" | "2p^i-1"}` with optional
//! `min_index` (default 1 for `2p^i-2`, 0 for `2p^i-1`) and `max_index`
//! (unbounded when absent); `invertible` defaults to false. An invertible
//! family must be bounded. `coeff_generators` defaults to `generators`.

use serde::{Deserialize, Serialize};

use super::{CoopClass, ReportScope, SpectrumPresentation, StageScanError};
use crate::degrees::{Degree, DegreeGenerator, DegreeSet, FamilyKind, GeneratorFamily, GeneratorSource};
use crate::prime::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<Degree>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_index: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_index: Option<u32>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub invertible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumFile {
    pub name: String,
    pub prime: u64,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff_generators: Option<Vec<GeneratorSpec>>,
    pub coop_class: CoopClass,
    pub odd_commutativity_ok: bool,
}

impl GeneratorSpec {
    fn to_sources(&self, p: Prime) -> Result<Vec<GeneratorSource>, StageScanError> {
        let schema = |m: String| StageScanError::Schema(m);
        match (self.degree, self.family) {
            (Some(d), None) => {
                if self.min_index.is_some() || self.max_index.is_some() {
                    return Err(schema("min_index/max_index only apply to families".into()));
                }
                let g = DegreeGenerator::new(d, self.invertible).map_err(|e| schema(e.to_string()))?;
                Ok(vec![GeneratorSource::Single(g)])
            }
            (None, Some(kind)) => {
                let min = self.min_index.unwrap_or(match kind {
                    FamilyKind::EvenTwoPowMinusTwo => 1,
                    FamilyKind::OddTwoPowMinusOne => 0,
                });
                let fam = GeneratorFamily::new(kind, p, min, self.max_index).map_err(|e| schema(e.to_string()))?;
                if !self.invertible {
                    return Ok(vec![GeneratorSource::Family(fam)]);
                }
                if self.max_index.is_none() {
                    return Err(schema("an invertible family needs max_index".into()));
                }
                fam.members_up_to(Degree::MAX)
                    .map(|v| {
                        DegreeGenerator::new(v, true)
                            .map(GeneratorSource::Single)
                            .map_err(|e| schema(e.to_string()))
                    })
                    .collect()
            }
            _ => Err(schema("each generator needs exactly one of \"degree\" or \"family\"".into())),
        }
    }

    fn from_source(s: &GeneratorSource) -> Self {
        match s {
            GeneratorSource::Single(g) => GeneratorSpec {
                degree: Some(g.value),
                family: None,
                min_index: None,
                max_index: None,
                invertible: g.invertible,
            },
            GeneratorSource::Family(f) => GeneratorSpec {
                degree: None,
                family: Some(f.kind),
                min_index: Some(f.min_index),
                max_index: f.max_index,
                invertible: false,
            },
        }
    }
}

fn degree_set(specs: &[GeneratorSpec], p: Prime) -> Result<DegreeSet, StageScanError> {
    let mut sources = Vec::new();
    for s in specs {
        sources.extend(s.to_sources(p)?);
    }
    Ok(DegreeSet::from_sources(sources))
}

impl SpectrumFile {
    pub fn into_presentation(self) -> Result<SpectrumPresentation, StageScanError> {
        let prime = Prime::new(self.prime).map_err(|e| StageScanError::Schema(e.to_string()))?;
        if self.generators.is_empty() {
            return Err(StageScanError::Schema("\"generators\" is empty".into()));
        }
        let coop_degrees = degree_set(&self.generators, prime)?;
        let coeff_degrees = match &self.coeff_generators {
            Some(specs) => degree_set(specs, prime)?,
            None => coop_degrees.clone(),
        };
        let spec = SpectrumPresentation {
            name: self.name,
            prime,
            coeff_degrees,
            coop_degrees,
            coop_class: self.coop_class,
            odd_commutativity_ok: self.odd_commutativity_ok,
            scope: ReportScope::Full,
            notes: Vec::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_presentation(spec: &SpectrumPresentation) -> Self {
        let specs = |s: &DegreeSet| s.sources().iter().map(GeneratorSpec::from_source).collect::<Vec<_>>();
        let generators = specs(&spec.coop_degrees);
        let coeff = specs(&spec.coeff_degrees);
        SpectrumFile {
            name: spec.name.clone(),
            prime: spec.prime.get(),
            coeff_generators: (coeff != generators).then_some(coeff),
            generators,
            coop_class: spec.coop_class,
            odd_commutativity_ok: spec.odd_commutativity_ok,
        }
    }
}

/// Parses and validates a presentation. Syntax errors are `Parse`, shape or
/// value errors `Schema`, violated invariants `Invariant`.
pub fn load_spectrum_json(text: &str) -> Result<SpectrumPresentation, StageScanError> {
    let file: SpectrumFile = serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => StageScanError::Schema(e.to_string()),
        _ => StageScanError::Parse(e.to_string()),
    })?;
    file.into_presentation()
}
