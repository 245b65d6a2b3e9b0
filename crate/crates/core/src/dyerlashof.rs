//! Dyer-Lashof operations supplied by an `n`-stage structure.
//!
//! The `i`-skeleton of `EΣ_p` gives a lower-indexed operation `Q_i` on mod `p`
//! homology, and an `n`-stage contains that skeleton for `i <= n - p`. In upper
//! notation, `Q^i(x)` is (up to sign) `Q_{(2i-|x|)(p-1)}(x)` for odd `p` and
//! `Q_{i-|x|}(x)` for `p = 2`, and vanishes when the lower index would be negative.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::degrees::Degree;
use crate::prime::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DyerLashofError {
    #[error("an {n}-stage structure gives no operations at p = {p} (need n > p)")]
    StageTooLow { p: Prime, n: i64 },
    #[error("Q^{i} vanishes on classes of degree {class_degree} by instability")]
    InstabilityZero { i: i64, class_degree: Degree },
    #[error("class degree must be non-negative, got {0}")]
    NegativeClassDegree(Degree),
    #[error("degree arithmetic overflowed")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationQuery {
    pub p: Prime,
    pub n_stage: i64,
    pub class_degree: Degree,
    pub upper_index: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Available { lower_index: i64 },
    ZeroByInstability,
    NotProvidedByStage { lower_index: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Availability {
    pub status: Status,
    pub target_degree: Option<Degree>,
}

fn check_degree(class_degree: Degree) -> Result<(), DyerLashofError> {
    if class_degree < 0 {
        Err(DyerLashofError::NegativeClassDegree(class_degree))
    } else {
        Ok(())
    }
}

/// Largest lower index `n - p` available from an `n`-stage.
pub fn max_lower_index(p: Prime, n_stage: i64) -> Result<i64, DyerLashofError> {
    let p_ = p.as_degree();
    if n_stage <= p_ {
        return Err(DyerLashofError::StageTooLow { p, n: n_stage });
    }
    Ok(n_stage - p_)
}

/// Lower index of `Q^i` on a class of degree `|x|`; `None` when it vanishes by instability.
pub fn regrade(p: Prime, i: i64, class_degree: Degree) -> Result<Option<i64>, DyerLashofError> {
    check_degree(class_degree)?;
    if p.is_odd() {
        let twice = i.checked_mul(2).ok_or(DyerLashofError::Overflow)?;
        if twice < class_degree {
            return Ok(None);
        }
        (twice - class_degree)
            .checked_mul(p.as_degree() - 1)
            .map(Some)
            .ok_or(DyerLashofError::Overflow)
    } else if i < class_degree {
        Ok(None)
    } else {
        Ok(Some(i - class_degree))
    }
}

/// Degree of `Q^i(x)`: `|x| + 2i(p-1)` for odd `p`, `|x| + i` for `p = 2`.
pub fn target_degree(p: Prime, i: i64, class_degree: Degree) -> Result<Degree, DyerLashofError> {
    if regrade(p, i, class_degree)?.is_none() {
        return Err(DyerLashofError::InstabilityZero { i, class_degree });
    }
    let shift = if p.is_odd() {
        i.checked_mul(2).and_then(|v| v.checked_mul(p.as_degree() - 1))
    } else {
        Some(i)
    };
    shift.and_then(|s| s.checked_add(class_degree)).ok_or(DyerLashofError::Overflow)
}

pub fn query(q: &OperationQuery) -> Result<Availability, DyerLashofError> {
    let max = max_lower_index(q.p, q.n_stage)?;
    let status = match regrade(q.p, q.upper_index, q.class_degree)? {
        None => Status::ZeroByInstability,
        Some(l) if l <= max => Status::Available { lower_index: l },
        Some(l) => Status::NotProvidedByStage { lower_index: l },
    };
    let target_degree = match status {
        Status::Available { .. } => Some(target_degree(q.p, q.upper_index, q.class_degree)?),
        _ => None,
    };
    Ok(Availability { status, target_degree })
}

/// Upper operations on a class of degree `|x|` supplied by an `n`-stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperOps {
    /// Least `i` not killed by instability.
    pub min_i: i64,
    /// Largest available `i`, if any.
    pub max_i: Option<i64>,
    /// Bound on the lower index in closed form, e.g. `2i-|x| <= 1`.
    pub constraint: String,
}

pub fn available_upper_ops(p: Prime, n_stage: i64, class_degree: Degree) -> Result<UpperOps, DyerLashofError> {
    check_degree(class_degree)?;
    let max_lower = max_lower_index(p, n_stage)?;
    if p.is_odd() {
        let k = max_lower / (p.as_degree() - 1);
        let min_i = (class_degree + 1) / 2;
        let top = (class_degree + k) / 2;
        Ok(UpperOps {
            min_i,
            max_i: (top >= min_i).then_some(top),
            constraint: format!("2i-|x| <= {k}"),
        })
    } else {
        Ok(UpperOps {
            min_i: class_degree,
            max_i: Some(class_degree + max_lower),
            constraint: format!("i-|x| <= {max_lower}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn lower_index_bound() {
        assert_eq!(max_lower_index(p(2), 10), Ok(8));
        assert_eq!(max_lower_index(p(3), 6), Ok(3));
        assert!(matches!(max_lower_index(p(5), 5), Err(DyerLashofError::StageTooLow { .. })));
    }

    #[test]
    fn regrading() {
        assert_eq!(regrade(p(2), 1, 2), Ok(None));
        assert_eq!(regrade(p(3), 6, 4), Ok(Some(16)));
        assert_eq!(regrade(p(3), 2, 4), Ok(Some(0)));
    }

    #[test]
    fn targets() {
        assert_eq!(target_degree(p(2), 4, 2), Ok(6));
        assert_eq!(target_degree(p(3), 2, 4), Ok(12));
        assert!(target_degree(p(3), 1, 4).is_err());
    }

    #[test]
    fn odd_class_without_room() {
        // |x| = 3 needs 2i >= 3, so the lower index is at least p - 1
        let ops = available_upper_ops(p(5), 6, 3).unwrap();
        assert_eq!(ops.max_i, None);
        assert_eq!(ops.constraint, "2i-|x| <= 0");
    }

    #[test]
    fn query_statuses() {
        let q = |i| query(&OperationQuery { p: p(3), n_stage: 6, class_degree: 4, upper_index: i }).unwrap().status;
        assert_eq!(q(1), Status::ZeroByInstability);
        assert_eq!(q(2), Status::Available { lower_index: 0 });
        assert_eq!(q(3), Status::NotProvidedByStage { lower_index: 4 });
    }
}
