//! Built-in presentations.

use super::{CoopClass, ReportScope, SpectrumPresentation, StageScanError};
use crate::degrees::{DegreeGenerator, DegreeSet, FamilyKind, GeneratorFamily, GeneratorSource};
use crate::prime::Prime;

fn even(p: Prime, min: u32, max: Option<u32>) -> Result<GeneratorSource, StageScanError> {
    Ok(GeneratorSource::Family(GeneratorFamily::new(FamilyKind::EvenTwoPowMinusTwo, p, min, max)?))
}

fn unit(p: Prime, i: u32) -> Result<GeneratorSource, StageScanError> {
    let value = p.even_generator(i).ok_or(crate::degrees::DegreeError::Overflow)?;
    Ok(GeneratorSource::Single(DegreeGenerator::new(value, true)?))
}

fn positive_index(what: &str, i: u32) -> Result<(), StageScanError> {
    if i == 0 {
        return Err(StageScanError::Schema(format!("{what} needs an index >= 1")));
    }
    Ok(())
}

impl SpectrumPresentation {
    /// Brown-Peterson spectrum.
    pub fn bp(p: Prime) -> Self {
        SpectrumPresentation {
            name: "BP".into(),
            prime: p,
            coeff_degrees: DegreeSet::bp(p),
            coop_degrees: DegreeSet::bp(p),
            coop_class: CoopClass::PolynomialWithKochmanTorsion,
            odd_commutativity_ok: true,
            scope: ReportScope::Full,
            notes: Vec::new(),
        }
    }

    /// Johnson-Wilson `E(i)`: `v_1, ..., v_{i-1}` and `v_i^{±1}`. The
    /// cooperations are a countable colimit of free modules.
    pub fn e(i: u32, p: Prime) -> Result<Self, StageScanError> {
        positive_index("E(i)", i)?;
        let mut coeff = vec![unit(p, i)?];
        if i > 1 {
            coeff.push(even(p, 1, Some(i - 1))?);
        }
        let mut notes = Vec::new();
        if i == 1 {
            notes.push(
                "for i = 1 this estimate is much too weak: E(1) has a unique E-infinity structure".to_string(),
            );
        }
        Ok(SpectrumPresentation {
            name: format!("E({i})"),
            prime: p,
            coeff_degrees: DegreeSet::from_sources(coeff),
            coop_degrees: DegreeSet::e(i, p)?,
            coop_class: CoopClass::FlatColimitOfFree,
            odd_commutativity_ok: true,
            scope: ReportScope::Full,
            notes,
        })
    }

    /// The localized Johnson-Wilson spectrum, whose cooperations are free.
    pub fn e_localized(i: u32, p: Prime) -> Result<Self, StageScanError> {
        let base = Self::e(i, p)?;
        Ok(SpectrumPresentation {
            name: format!("E({i}) localized"),
            coop_degrees: DegreeSet::e_localized(i, p)?,
            coop_class: CoopClass::Free,
            notes: Vec::new(),
            ..base
        })
    }

    /// Morava K-theory. Not homotopy commutative at 2.
    pub fn kn(n: u32, p: Prime) -> Result<Self, StageScanError> {
        positive_index("K(n)", n)?;
        let mut notes = vec!["tau_0 has degree 1".to_string()];
        if !p.is_odd() {
            notes.push("K(n) is not homotopy commutative at p = 2".to_string());
        }
        Ok(SpectrumPresentation {
            name: format!("K({n})"),
            prime: p,
            coeff_degrees: DegreeSet::from_sources(vec![unit(p, n)?]),
            coop_degrees: DegreeSet::k(n, p)?,
            coop_class: CoopClass::Free,
            odd_commutativity_ok: p.is_odd(),
            scope: ReportScope::Full,
            notes,
        })
    }

    /// `P(n)`, with coefficients `v_n, v_{n+1}, ...` and exterior classes
    /// `a_0, ..., a_{n-1}` (`|a_i| = 2p^i - 1`) in the cooperations.
    pub fn pn(n: u32, p: Prime) -> Result<Self, StageScanError> {
        positive_index("P(n)", n)?;
        let mut notes = vec!["a_0 of degree 1 opens the window at n = 3 (obstruction to a 4-stage)".to_string()];
        if !p.is_odd() {
            notes.push("P(n) is not homotopy commutative at p = 2".to_string());
        }
        Ok(SpectrumPresentation {
            name: format!("P({n})"),
            prime: p,
            coeff_degrees: DegreeSet::from_sources(vec![even(p, n, None)?]),
            coop_degrees: DegreeSet::p_n(n, p)?,
            coop_class: CoopClass::Free,
            odd_commutativity_ok: p.is_odd(),
            scope: ReportScope::Full,
            notes,
        })
    }

    /// `THH(BP)`: stage descriptions and Dyer-Lashof bookkeeping only.
    pub fn thh_bp(p: Prime) -> Self {
        SpectrumPresentation {
            name: "THH(BP)".into(),
            prime: p,
            coeff_degrees: DegreeSet::thh_bp(p),
            coop_degrees: DegreeSet::thh_bp(p),
            coop_class: CoopClass::Free,
            odd_commutativity_ok: true,
            scope: ReportScope::StageOnly,
            notes: vec!["no refined bound is computed for THH(BP)".to_string()],
        }
    }

    /// Looks a preset up by its command-line name.
    pub fn preset(name: &str, p: Prime, index: Option<u32>) -> Result<Self, StageScanError> {
        let idx = || index.ok_or_else(|| StageScanError::Schema(format!("preset {name} needs --index")));
        match name {
            "bp" => Ok(Self::bp(p)),
            "e" => Self::e(idx()?, p),
            "e-localized" => Self::e_localized(idx()?, p),
            "kn" => Self::kn(idx()?, p),
            "pn" => Self::pn(idx()?, p),
            "thh-bp" => Ok(Self::thh_bp(p)),
            other => Err(StageScanError::Schema(format!("unknown preset {other:?}"))),
        }
    }
}

pub const PRESET_NAMES: [&str; 6] = ["bp", "e", "e-localized", "kn", "pn", "thh-bp"];
