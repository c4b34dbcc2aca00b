//! Exponent-sequence descriptors and the accumulation-point classifier.
//!
//! A sequence is a finite prefix of complex numbers followed by a symbolic
//! tail that says how the real parts behave from then on. Only the real
//! parts and pairwise distinctness matter for the classification.
//!
//! Accumulation points are taken in the extended reals, so `z_n = n`
//! accumulates at `+∞`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Behaviour of the real parts after the prefix.
///
/// Tail members are pairwise distinct, distinct from the prefix, never equal
/// to the declared limit(s), and lie between the band endpoints implied by
/// the prefix and the limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// The sequence is finite.
    None,
    /// Real parts increase strictly towards `limit`.
    MonotoneToSup { limit: f64 },
    /// Real parts decrease strictly towards `limit`.
    MonotoneToInf { limit: f64 },
    /// Real parts accumulate exactly at `upper` and at `lower`.
    TwoSided { upper: f64, lower: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecRecord", into = "SpecRecord")]
pub struct ExponentSequenceSpec {
    pub prefix: Vec<Complex64>,
    pub tail: Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Clause {
    SupClause,
    InfClause,
    TwoPointClause,
    None,
}

/// Why a sequence fails the condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Duplicate {
        first: usize,
        second: usize,
        re: f64,
        im: f64,
    },
    FiniteSequence,
    AccumulationPoint {
        #[serde(with = "crate::json::ext_real")]
        point: f64,
        detail: String,
    },
    LimitAttained {
        index: usize,
        #[serde(with = "crate::json::ext_real")]
        value: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Duplicate { first, second, .. } => {
                write!(f, "z[{first}] = z[{second}]: exponents must be pairwise distinct")
            }
            Violation::FiniteSequence => {
                f.write_str("finite sequence: no accumulation point (any finite set of distinct exponents is still solvable)")
            }
            Violation::AccumulationPoint { detail, .. } => f.write_str(detail),
            Violation::LimitAttained { index, value } => {
                write!(f, "Re z[{index}] = {value} equals a band endpoint")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionSVerdict {
    pub satisfies: bool,
    pub matched_clause: Clause,
    pub violation_witness: Option<Violation>,
    #[serde(with = "crate::json::ext_real")]
    pub alpha: f64,
    #[serde(with = "crate::json::ext_real")]
    pub beta: f64,
    /// True when an accumulation point at ±∞ was involved.
    pub extended_real_reading: bool,
}

impl ExponentSequenceSpec {
    pub fn new(prefix: Vec<Complex64>, tail: Tail) -> Result<Self> {
        let spec = ExponentSequenceSpec { prefix, tail };
        spec.validate()?;
        Ok(spec)
    }

    /// Structural validation; duplicates are a verdict, not an error.
    pub fn validate(&self) -> Result<()> {
        if self.prefix.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidSpec("prefix entries must be finite".into()));
        }
        let nan = |v: f64| v.is_nan();
        match self.tail {
            Tail::None if self.prefix.is_empty() => {
                Err(Error::InvalidSpec("empty sequence: prefix is empty and tail is NONE".into()))
            }
            Tail::MonotoneToSup { limit } => {
                if nan(limit) || limit == f64::NEG_INFINITY {
                    return Err(Error::InvalidSpec(format!(
                        "an increasing tail cannot tend to {limit}"
                    )));
                }
                if self.prefix.is_empty() {
                    return Err(Error::InvalidSpec(
                        "MONOTONE_TO_SUP needs a non-empty prefix (its first term bounds the tail from below)".into(),
                    ));
                }
                Ok(())
            }
            Tail::MonotoneToInf { limit } => {
                if nan(limit) || limit == f64::INFINITY {
                    return Err(Error::InvalidSpec(format!(
                        "a decreasing tail cannot tend to {limit}"
                    )));
                }
                if self.prefix.is_empty() {
                    return Err(Error::InvalidSpec(
                        "MONOTONE_TO_INF needs a non-empty prefix (its first term bounds the tail from above)".into(),
                    ));
                }
                Ok(())
            }
            Tail::TwoSided { upper, lower } => {
                if nan(upper) || nan(lower) || !(lower < upper) {
                    return Err(Error::InvalidSpec(format!(
                        "TWO_SIDED needs limit_lower < limit_upper, got ({lower}, {upper})"
                    )));
                }
                Ok(())
            }
            Tail::None => Ok(()),
        }
    }

    /// Accumulation points of the real parts (extended reals).
    fn accumulation_points(&self) -> Vec<f64> {
        match self.tail {
            Tail::None => vec![],
            Tail::MonotoneToSup { limit } | Tail::MonotoneToInf { limit } => vec![limit],
            Tail::TwoSided { upper, lower } => vec![upper, lower],
        }
    }

    /// The reflected sequence `z ↦ −z̄` (real parts negated).
    pub fn reflected(&self) -> ExponentSequenceSpec {
        let tail = match self.tail {
            Tail::None => Tail::None,
            Tail::MonotoneToSup { limit } => Tail::MonotoneToInf { limit: -limit },
            Tail::MonotoneToInf { limit } => Tail::MonotoneToSup { limit: -limit },
            Tail::TwoSided { upper, lower } => Tail::TwoSided {
                upper: -lower,
                lower: -upper,
            },
        };
        ExponentSequenceSpec {
            prefix: self.prefix.iter().map(|z| -z.conj()).collect(),
            tail,
        }
    }
}

/// `(α, β) = (sup Re z_n, inf Re z_n)` over prefix and declared limits.
///
/// A monotone tail whose limit lies beyond every prefix entry on the "wrong"
/// side (e.g. an increasing tail tending to a value at or below the prefix
/// minimum) starts at an undeclared point; the limit is then reported as the
/// endpoint even though the true infimum lies strictly beyond it. The
/// classifier does not depend on that endpoint.
pub fn compute_band(spec: &ExponentSequenceSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    let mut alpha = f64::NEG_INFINITY;
    let mut beta = f64::INFINITY;
    for z in &spec.prefix {
        alpha = alpha.max(z.re);
        beta = beta.min(z.re);
    }
    for p in spec.accumulation_points() {
        alpha = alpha.max(p);
        beta = beta.min(p);
    }
    Ok((alpha, beta))
}

fn find_duplicate(prefix: &[Complex64]) -> Option<(usize, usize)> {
    for i in 0..prefix.len() {
        for j in i + 1..prefix.len() {
            if prefix[i] == prefix[j] {
                return Some((i, j));
            }
        }
    }
    None
}

/// Classifies the sequence against the three accumulation clauses.
pub fn check_condition_s(spec: &ExponentSequenceSpec) -> Result<ConditionSVerdict> {
    let (alpha, beta) = compute_band(spec)?;
    let points = spec.accumulation_points();
    let extended = points.iter().any(|p| p.is_infinite());
    let fail = |witness: Violation| ConditionSVerdict {
        satisfies: false,
        matched_clause: Clause::None,
        violation_witness: Some(witness),
        alpha,
        beta,
        extended_real_reading: extended,
    };

    if let Some((i, j)) = find_duplicate(&spec.prefix) {
        let z = spec.prefix[i];
        return Ok(fail(Violation::Duplicate {
            first: i,
            second: j,
            re: z.re,
            im: z.im,
        }));
    }
    if points.is_empty() {
        return Ok(fail(Violation::FiniteSequence));
    }
    let attained = |endpoint: f64| spec.prefix.iter().position(|z| z.re == endpoint);

    // An increasing tail stays strictly below its limit, so it can only ever
    // realise the sup clause; symmetrically for the other kinds.
    let (clause, required): (Clause, Vec<(f64, f64, &str)>) = match spec.tail {
        Tail::MonotoneToSup { limit } => (Clause::SupClause, vec![(limit, alpha, "alpha")]),
        Tail::MonotoneToInf { limit } => (Clause::InfClause, vec![(limit, beta, "beta")]),
        Tail::TwoSided { upper, lower } => (
            Clause::TwoPointClause,
            vec![(upper, alpha, "alpha"), (lower, beta, "beta")],
        ),
        Tail::None => unreachable!("handled above"),
    };
    for (point, endpoint, name) in required {
        if point != endpoint {
            let detail = if points.len() == 1 {
                format!("unique accumulation point {point} differs from {name} = {endpoint}")
            } else {
                format!("accumulation point {point} differs from {name} = {endpoint}")
            };
            return Ok(fail(Violation::AccumulationPoint { point, detail }));
        }
    }
    let endpoints: &[f64] = match clause {
        Clause::SupClause => &[alpha],
        Clause::InfClause => &[beta],
        _ => &[alpha, beta],
    };
    for &e in endpoints {
        if let Some(index) = attained(e) {
            return Ok(fail(Violation::LimitAttained { index, value: e }));
        }
    }
    Ok(ConditionSVerdict {
        satisfies: true,
        matched_clause: clause,
        violation_witness: None,
        alpha,
        beta,
        extended_real_reading: extended,
    })
}

#[derive(Serialize, Deserialize)]
struct SpecRecord {
    prefix: Vec<crate::json::ComplexRecord>,
    tail: TailRecord,
}

#[derive(Serialize, Deserialize)]
struct TailRecord {
    kind: String,
    #[serde(
        with = "crate::json::ext_real::option",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    limit_upper: Option<f64>,
    #[serde(
        with = "crate::json::ext_real::option",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    limit_lower: Option<f64>,
}

impl TryFrom<SpecRecord> for ExponentSequenceSpec {
    type Error = Error;

    fn try_from(r: SpecRecord) -> Result<Self> {
        let need = |v: Option<f64>, field: &str| {
            v.ok_or_else(|| Error::InvalidSpec(format!("tail kind {} requires {field}", r.tail.kind)))
        };
        let tail = match r.tail.kind.as_str() {
            "NONE" => Tail::None,
            "MONOTONE_TO_SUP" => Tail::MonotoneToSup {
                limit: need(r.tail.limit_upper, "limit_upper")?,
            },
            "MONOTONE_TO_INF" => Tail::MonotoneToInf {
                limit: need(r.tail.limit_lower, "limit_lower")?,
            },
            "TWO_SIDED" => Tail::TwoSided {
                upper: need(r.tail.limit_upper, "limit_upper")?,
                lower: need(r.tail.limit_lower, "limit_lower")?,
            },
            other => return Err(Error::InvalidSpec(format!("unknown tail kind '{other}'"))),
        };
        ExponentSequenceSpec::new(r.prefix.into_iter().map(Complex64::from).collect(), tail)
    }
}

impl From<ExponentSequenceSpec> for SpecRecord {
    fn from(s: ExponentSequenceSpec) -> Self {
        let (kind, limit_upper, limit_lower) = match s.tail {
            Tail::None => ("NONE", None, None),
            Tail::MonotoneToSup { limit } => ("MONOTONE_TO_SUP", Some(limit), None),
            Tail::MonotoneToInf { limit } => ("MONOTONE_TO_INF", None, Some(limit)),
            Tail::TwoSided { upper, lower } => ("TWO_SIDED", Some(upper), Some(lower)),
        };
        SpecRecord {
            prefix: s.prefix.into_iter().map(Into::into).collect(),
            tail: TailRecord {
                kind: kind.to_string(),
                limit_upper,
                limit_lower,
            },
        }
    }
}
