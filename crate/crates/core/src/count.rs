//! Full counts: search, exact matching, audits, multiplicities and resampling.

use crate::combinatorics::{enumerate_marked_types, validate_degree, CombinatoricsError, Degree, TropicalType};
use crate::constraints::{
    genericity_audit, match_type, random_generic_translation, validate_constraints, AffineConstraint,
    ConstraintError, CurveSolution, GenericityReport, MatchResult,
};
use crate::multiplicity::{multiplicity_record, MultiplicityError, MultiplicityRecord};
use crate::search::candidate_types;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

pub const DEFAULT_MAX_RETRIES: u32 = 8;
pub const DEFAULT_BOX: u64 = 1000;

#[derive(Debug, thiserror::Error)]
pub enum CountError {
    #[error("invalid degree: {0}")]
    Degree(#[from] CombinatoricsError),
    #[error("invalid constraints: {0}")]
    Constraints(#[from] ConstraintError),
    #[error("constraints are not general after {attempts} attempt(s): {reason}")]
    NonGenericConstraints { attempts: u32, reason: String },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone)]
pub struct CountOptions {
    pub seed: u64,
    /// Numerator bound for random translations.
    pub box_bound: u64,
    pub allow_resample: bool,
    pub max_retries: u32,
    /// 0 means the rayon default.
    pub threads: usize,
    /// Translate the constraints by the seed before the first attempt.
    pub perturb: bool,
    /// Report audit findings and positive-dimensional types as warnings
    /// instead of failing the attempt; the latter are left out of the count.
    pub relaxed_audit: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            seed: 0,
            box_bound: DEFAULT_BOX,
            allow_resample: true,
            max_retries: DEFAULT_MAX_RETRIES,
            threads: 0,
            perturb: false,
            relaxed_audit: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CurveRecord {
    pub code: String,
    pub ty: TropicalType,
    pub solution: CurveSolution,
    pub record: MultiplicityRecord,
    pub report: GenericityReport,
}

#[derive(Debug, Clone)]
pub struct CountResult {
    pub total: BigInt,
    /// Sorted by canonical code.
    pub curves: Vec<CurveRecord>,
    pub constraints_used: Vec<AffineConstraint>,
    pub attempts: u32,
    pub warnings: Vec<String>,
}

enum Attempt {
    Done(CountResult),
    Retry(String),
}

pub fn count_tropical(d: &Degree, a: &[AffineConstraint], opts: &CountOptions) -> Result<CountResult, CountError> {
    validate_degree(d)?;
    validate_constraints(d, a)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| CountError::ThreadPool(e.to_string()))?;
    pool.install(|| {
        let mut last = String::new();
        let tries = if opts.allow_resample { opts.max_retries + 1 } else { 1 };
        for attempt in 0..tries {
            let used = if attempt == 0 && !opts.perturb {
                a.to_vec()
            } else {
                random_generic_translation(a, opts.seed.wrapping_add(attempt as u64), opts.box_bound)
            };
            match attempt_count(d, &used, opts)? {
                Attempt::Done(mut res) => {
                    res.attempts = attempt + 1;
                    return Ok(res);
                }
                Attempt::Retry(reason) => last = reason,
            }
        }
        Err(CountError::NonGenericConstraints {
            attempts: tries,
            reason: last,
        })
    })
}

fn attempt_count(d: &Degree, a: &[AffineConstraint], opts: &CountOptions) -> Result<Attempt, CountError> {
    let candidates = candidate_types(d, a).candidates;
    let solved: Vec<(TropicalType, MatchResult)> = candidates
        .into_par_iter()
        .map(|t| {
            let m = match_type(&t, a);
            (t, m)
        })
        .collect();
    let mut curves = Vec::new();
    let mut warnings = Vec::new();
    for (t, m) in solved {
        let sol = match m {
            MatchResult::Matched(s) => s,
            MatchResult::Degenerate => {
                let msg = format!("type {} has a positive-dimensional solution set", t.canonical_code());
                if opts.relaxed_audit {
                    warnings.push(msg);
                    continue;
                }
                return Ok(Attempt::Retry(msg));
            }
            MatchResult::NoSolution(_) => continue,
        };
        let report = genericity_audit(&sol, a);
        let code = t.canonical_code();
        if !report.is_clean() {
            let msg = format!("curve {code}: {}", report.kinds().join(", "));
            if opts.relaxed_audit {
                warnings.push(msg);
            } else {
                return Ok(Attempt::Retry(msg));
            }
        }
        let record = match multiplicity_record(&t, a) {
            Ok(r) => r,
            Err(MultiplicityError::InfiniteIndex) => {
                return Ok(Attempt::Retry(format!("curve {code}: lattice map has infinite cokernel")))
            }
            Err(e) => return Ok(Attempt::Retry(format!("curve {code}: {e}"))),
        };
        curves.push(CurveRecord {
            code,
            ty: t,
            solution: sol,
            record,
            report,
        });
    }
    curves.sort_by(|x, y| x.code.cmp(&y.code));
    let total = curves.iter().fold(BigInt::zero(), |acc, c| acc + &c.record.contribution);
    Ok(Attempt::Done(CountResult {
        total,
        curves,
        constraints_used: a.to_vec(),
        attempts: 0,
        warnings,
    }))
}

/// Canonical codes of all marked types with a matching curve, found by
/// trying every marked type. Only practical for small degrees.
pub fn matched_types_exhaustive(d: &Degree, a: &[AffineConstraint]) -> Result<Vec<String>, CountError> {
    validate_constraints(d, a)?;
    let codims: Vec<usize> = a.iter().map(AffineConstraint::codim).collect();
    let mut codes: Vec<String> = enumerate_marked_types(d, &codims)?
        .into_par_iter()
        .filter(|t| matches!(match_type(t, a), MatchResult::Matched(_)))
        .map(|t| t.canonical_code())
        .collect();
    codes.sort();
    codes.dedup();
    Ok(codes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::random_points;

    #[test]
    fn plane_counts_low_degree() {
        let opts = CountOptions::default();
        let r = count_tropical(&Degree::plane(1), &random_points(2, 2, 1, 100, 1009), &opts).unwrap();
        assert_eq!(r.total, BigInt::from(1));
        let r = count_tropical(&Degree::plane(2), &random_points(2, 5, 2, 100, 1009), &opts).unwrap();
        assert_eq!(r.total, BigInt::from(1));
    }

    #[test]
    fn wrong_codimension_is_rejected() {
        let err = count_tropical(&Degree::plane(1), &random_points(2, 3, 1, 100, 1009), &CountOptions::default());
        assert!(matches!(err, Err(CountError::Constraints(ConstraintError::CodimensionSum { .. }))));
    }
}
