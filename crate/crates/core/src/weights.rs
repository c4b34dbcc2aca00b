//! Weight families `ω_j(λ)` and the interpolation condition
//!
//! ```text
//! ∃ j  ∀ k ≥ j  ∃ l ≥ k, C > 0  ∀ λ :  ω_j(λ) ω_l(λ) ≤ C ω_k(λ)²
//! ```
//!
//! Log-linear families `ω_j = e^{−a_j u(λ)}` with `u` unbounded are decided
//! exactly by rate arithmetic: the inequality holds for all λ with some `C`
//! iff `a_j + a_l ≥ 2 a_k`. Sampled families can only provide evidence on the
//! truncation they cover, and every result says which kind it is.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{CheckItem, CheckReport, Evidence};
use crate::SCHEMA_VERSION;

/// Relative tolerance when deciding whether a supremum over the sample is
/// already reached on the leading half of the parameter set.
pub const STABILITY_TOL: f64 = 1e-9;

/// Positive weights stored as `log_values[j][i] = log ω_j(λ_i)`, so that
/// families spanning hundreds of orders of magnitude stay representable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SampledRecord")]
pub struct SampledFamily {
    lambdas: Vec<f64>,
    log_values: Vec<Vec<f64>>,
}

/// Input accepts either plain `values` or `log_values`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SampledRecord {
    lambdas: Vec<f64>,
    #[serde(default)]
    values: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    log_values: Option<Vec<Vec<f64>>>,
}

impl TryFrom<SampledRecord> for SampledFamily {
    type Error = Error;
    fn try_from(r: SampledRecord) -> Result<Self> {
        match (r.values, r.log_values) {
            (Some(v), None) => SampledFamily::new(r.lambdas, v),
            (None, Some(l)) => SampledFamily::from_logs(r.lambdas, l),
            _ => Err(Error::InvalidFamily(
                "give exactly one of `values` and `log_values`".into(),
            )),
        }
    }
}

/// `ω_j(λ) = exp(−a_j u(λ))`, with `u(λ) = λ` whenever the family is
/// evaluated on concrete parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LogLinearRecord", into = "LogLinearRecord")]
pub struct LogLinearFamily {
    rates: Vec<f64>,
    limit: f64,
}

#[derive(Serialize, Deserialize)]
struct LogLinearRecord {
    rates: Vec<f64>,
    #[serde(with = "crate::json::ext_real")]
    limit: f64,
}

impl TryFrom<LogLinearRecord> for LogLinearFamily {
    type Error = Error;
    fn try_from(r: LogLinearRecord) -> Result<Self> {
        LogLinearFamily::new(r.rates, r.limit)
    }
}

impl From<LogLinearFamily> for LogLinearRecord {
    fn from(f: LogLinearFamily) -> Self {
        LogLinearRecord {
            rates: f.rates,
            limit: f.limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WeightFamily {
    Sampled(SampledFamily),
    LogLinear(LogLinearFamily),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub k: usize,
    pub l: usize,
    #[serde(rename = "C", with = "crate::json::ext_real")]
    pub c: f64,
}

/// `j` together with one `(l_k, C_k)` per checked `k ≥ j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub j: usize,
    pub entries: Vec<WitnessEntry>,
}

/// Per-`j` failure: the first `k` for which no admissible `l` exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FailingIndex {
    pub j: usize,
    /// `None` when the failing `k` lies beyond the listed rates.
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refutation {
    pub reason: String,
    pub failures: Vec<FailingIndex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Witness { witness: Witness },
    Refutation { refutation: Refutation },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightReport {
    pub schema: String,
    pub family: String,
    pub evidence: Evidence,
    pub holds: bool,
    #[serde(flatten)]
    pub outcome: SearchOutcome,
    pub notes: Vec<String>,
}

impl SampledFamily {
    pub fn new(lambdas: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        for (j, row) in values.iter().enumerate() {
            if let Some(i) = row.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
                return Err(Error::InvalidFamily(format!(
                    "ω_{j}(λ_{i}) = {} is not a positive finite number",
                    row[i]
                )));
            }
        }
        let logs = values
            .iter()
            .map(|row| row.iter().map(|w| w.ln()).collect())
            .collect();
        SampledFamily::from_logs(lambdas, logs)
    }

    pub fn from_logs(lambdas: Vec<f64>, log_values: Vec<Vec<f64>>) -> Result<Self> {
        if lambdas.is_empty() || log_values.is_empty() {
            return Err(Error::InvalidFamily("need at least one λ and one row".into()));
        }
        if lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidFamily("λ values must be finite".into()));
        }
        for (j, row) in log_values.iter().enumerate() {
            if row.len() != lambdas.len() {
                return Err(Error::InvalidFamily(format!(
                    "row {j} has {} entries, expected {}",
                    row.len(),
                    lambdas.len()
                )));
            }
            if let Some(i) = row.iter().position(|w| !w.is_finite()) {
                return Err(Error::InvalidFamily(format!(
                    "log ω_{j}(λ_{i}) = {} is not finite",
                    row[i]
                )));
            }
            if j > 0 {
                if let Some(i) = (0..lambdas.len()).find(|&i| row[i] > log_values[j - 1][i]) {
                    return Err(Error::InvalidFamily(format!(
                        "ω_{j}(λ_{i}) > ω_{}(λ_{i}): weights must be nonincreasing in j",
                        j - 1
                    )));
                }
            }
        }
        Ok(SampledFamily { lambdas, log_values })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn log_rows(&self) -> &[Vec<f64>] {
        &self.log_values
    }

    /// Largest row index `J`.
    pub fn max_index(&self) -> usize {
        self.log_values.len() - 1
    }

    pub fn log_weight(&self, j: usize, column: usize) -> f64 {
        self.log_values[j][column]
    }

    /// `ω_j(λ_column)`; may underflow to zero for steep families.
    pub fn weight(&self, j: usize, column: usize) -> f64 {
        self.log_values[j][column].exp()
    }

    /// `log(ω_j ω_l / ω_k²)` at every sampled λ.
    fn log_ratios(&self, j: usize, k: usize, l: usize) -> Vec<f64> {
        (0..self.lambdas.len())
            .map(|i| {
                self.log_values[j][i] + self.log_values[l][i] - 2.0 * self.log_values[k][i]
            })
            .collect()
    }

    /// Multiplies every row by the same positive function of λ.
    pub fn rescaled(&self, factor: &[f64]) -> Result<SampledFamily> {
        let logs = self
            .log_values
            .iter()
            .map(|row| row.iter().zip(factor).map(|(w, g)| w + g.ln()).collect())
            .collect();
        SampledFamily::from_logs(self.lambdas.clone(), logs)
    }
}

impl LogLinearFamily {
    pub fn new(rates: Vec<f64>, limit: f64) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::InvalidFamily("rate list is empty".into()));
        }
        if rates.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::InvalidFamily("rates must be finite and nonnegative".into()));
        }
        if let Some(j) = (1..rates.len()).find(|&j| rates[j] < rates[j - 1]) {
            return Err(Error::InvalidFamily(format!(
                "rates must be nondecreasing (a_{j} < a_{})",
                j - 1
            )));
        }
        let last = *rates.last().unwrap();
        if limit.is_nan() || limit < last {
            return Err(Error::InvalidFamily(format!(
                "limit {limit} is below the last listed rate {last}"
            )));
        }
        Ok(LogLinearFamily { rates, limit })
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn limit(&self) -> f64 {
        self.limit
    }

    /// First listed index whose rate equals the limit.
    fn stabilizes_at(&self) -> Option<usize> {
        self.rates.iter().position(|&a| approx_ge(a, self.limit))
    }

    /// The exact verdict of the interpolation condition.
    pub fn satisfies(&self) -> bool {
        self.limit == f64::INFINITY || self.stabilizes_at().is_some()
    }

    /// Smallest listed `l ≥ k` with `a_j + a_l ≥ 2 a_k`.
    fn smallest_l(&self, j: usize, k: usize) -> Option<usize> {
        let need = 2.0 * self.rates[k] - self.rates[j];
        (k..self.rates.len()).find(|&l| approx_ge(self.rates[l], need))
    }

    /// Sampled family on the given parameters with `u(λ) = λ`.
    pub fn sample(&self, lambdas: &[f64]) -> Result<SampledFamily> {
        if lambdas.iter().any(|l| *l < 0.0) {
            return Err(Error::InvalidFamily("log-linear families need λ >= 0".into()));
        }
        let logs = self
            .rates
            .iter()
            .map(|a| lambdas.iter().map(|l| -a * l).collect())
            .collect();
        SampledFamily::from_logs(lambdas.to_vec(), logs)
    }
}

impl WeightFamily {
    pub fn kind(&self) -> &'static str {
        match self {
            WeightFamily::Sampled(_) => "SAMPLED",
            WeightFamily::LogLinear(_) => "LOG_LINEAR",
        }
    }

    pub fn max_index(&self) -> usize {
        match self {
            WeightFamily::Sampled(s) => s.max_index(),
            WeightFamily::LogLinear(f) => f.rates.len() - 1,
        }
    }

    /// The family evaluated on `lambdas` (columns matched exactly for sampled
    /// families).
    pub fn restrict(&self, lambdas: &[f64]) -> Result<SampledFamily> {
        match self {
            WeightFamily::LogLinear(f) => f.sample(lambdas),
            WeightFamily::Sampled(s) => {
                let columns = lambdas
                    .iter()
                    .map(|l| {
                        s.lambdas.iter().position(|x| x == l).ok_or_else(|| {
                            Error::InvalidFamily(format!("λ = {l} is not a sampled column"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let logs = s
                    .log_values
                    .iter()
                    .map(|row| columns.iter().map(|&c| row[c]).collect())
                    .collect();
                SampledFamily::from_logs(lambdas.to_vec(), logs)
            }
        }
    }
}

fn approx_ge(x: f64, y: f64) -> bool {
    if y == f64::INFINITY {
        return x == f64::INFINITY;
    }
    x >= y - 8.0 * f64::EPSILON * x.abs().max(y.abs()).max(1.0)
}

/// Supremum of a sampled profile and whether it is already reached on the
/// leading half of the samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupProfile {
    #[serde(with = "crate::json::ext_real")]
    pub sup: f64,
    #[serde(with = "crate::json::ext_real")]
    pub leading_sup: f64,
    /// `log sup`, kept because `sup` itself may overflow.
    #[serde(with = "crate::json::ext_real")]
    pub log_sup: f64,
    pub argmax: usize,
    pub bounded: bool,
}

/// A supremum that keeps growing into the trailing half of the ordered
/// parameter set is treated as evidence of unboundedness.
pub fn sup_profile(values: &[f64]) -> SupProfile {
    let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    log_sup_profile(&logs)
}

/// [`sup_profile`] for values given by their logarithms.
pub fn log_sup_profile(logs: &[f64]) -> SupProfile {
    let lead = logs.len().div_ceil(2);
    let mut best = f64::NEG_INFINITY;
    let mut argmax = 0;
    for (i, &v) in logs.iter().enumerate() {
        if v > best {
            best = v;
            argmax = i;
        }
    }
    let leading = logs[..lead].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    SupProfile {
        sup: best.exp(),
        leading_sup: leading.exp(),
        log_sup: best,
        argmax,
        bounded: best == f64::NEG_INFINITY || best <= leading + STABILITY_TOL.ln_1p(),
    }
}

fn check_index(index: usize, max: usize) -> Result<()> {
    if index > max {
        Err(Error::IndexOutOfRange { index, max })
    } else {
        Ok(())
    }
}

/// Checks a witness certificate entry by entry.
pub fn verify_witness(family: &WeightFamily, witness: &Witness) -> Result<CheckReport> {
    let max = family.max_index();
    check_index(witness.j, max)?;
    for e in &witness.entries {
        check_index(e.k, max)?;
        check_index(e.l, max)?;
    }
    let j = witness.j;
    let mut items = Vec::with_capacity(witness.entries.len());
    let mut notes = Vec::new();
    for e in &witness.entries {
        let ordered = e.k >= j && e.l >= e.k && e.c > 0.0;
        let label = format!("k={} l={} C={}", e.k, e.l, e.c);
        let item = match family {
            WeightFamily::Sampled(s) => {
                // ω_j ω_l / (C ω_k²) compared in log form
                let log_c = e.c.ln();
                let mut worst = f64::NEG_INFINITY;
                let mut first_bad = None;
                for (i, r) in s.log_ratios(j, e.k, e.l).into_iter().enumerate() {
                    let excess = r - log_c;
                    if excess > 1e-12 && first_bad.is_none() {
                        first_bad = Some(i);
                    }
                    worst = worst.max(excess);
                }
                let worst = worst.exp();
                if let Some(i) = first_bad {
                    notes.push(format!(
                        "first violation at k={} λ={}",
                        e.k, s.lambdas[i]
                    ));
                }
                CheckItem::at_most(label, worst, 1.0, 1e-12)
            }
            WeightFamily::LogLinear(f) => {
                let need = 2.0 * f.rates[e.k] - f.rates[j];
                let have = f.rates[e.l];
                let mut item = CheckItem::at_most(label, need, have, 0.0);
                item.passed = approx_ge(have, need);
                if !item.passed {
                    notes.push(format!(
                        "a_j + a_l = {} < 2 a_k = {} at k={}",
                        f.rates[j] + have,
                        2.0 * f.rates[e.k],
                        e.k
                    ));
                }
                item
            }
        };
        let mut item = item;
        if !ordered {
            item.passed = false;
            notes.push(format!("entry k={} l={} violates j <= k <= l or C > 0", e.k, e.l));
        }
        items.push(item);
    }
    let evidence = match family {
        WeightFamily::Sampled(_) => Evidence::TruncationOnly,
        WeightFamily::LogLinear(_) => Evidence::Exact,
    };
    let mut report = CheckReport::from_items("weight-witness", evidence, items);
    report.notes = notes;
    Ok(report)
}

/// Searches for a witness (or a refutation) up to `horizon`.
///
/// Log-linear families are decided exactly. Sampled families try every
/// `j ≤ (horizon − 1)/2` against all `k ∈ [j, horizon]` and `l ∈ [k, J]`,
/// accepting `(l, C)` when `C = max_λ ω_j ω_l / ω_k²` is already attained on
/// the leading half of the parameter sample.
pub fn search_witness(family: &WeightFamily, horizon: usize) -> Result<WeightReport> {
    match family {
        WeightFamily::LogLinear(f) => search_log_linear(f, horizon),
        WeightFamily::Sampled(s) => search_sampled(s, horizon),
    }
}

fn search_log_linear(f: &LogLinearFamily, horizon: usize) -> Result<WeightReport> {
    let last = f.rates.len() - 1;
    let mut notes = Vec::new();
    if f.satisfies() {
        let j = f.stabilizes_at().unwrap_or(0);
        if j > horizon {
            return Err(Error::HorizonTooSmall { horizon });
        }
        let k_max = horizon.min(last);
        let mut entries = Vec::new();
        for k in j..=k_max {
            match f.smallest_l(j, k) {
                Some(l) => entries.push(WitnessEntry { k, l, c: 1.0 }),
                None => {
                    notes.push(format!(
                        "table stops at k={}: the admissible l lies beyond the {} listed rates (it exists because the limit is +inf)",
                        k - 1,
                        f.rates.len()
                    ));
                    break;
                }
            }
        }
        if entries.is_empty() {
            return Err(Error::HorizonTooSmall { horizon });
        }
        Ok(WeightReport {
            schema: SCHEMA_VERSION.to_string(),
            family: "LOG_LINEAR".into(),
            evidence: Evidence::Exact,
            holds: true,
            outcome: SearchOutcome::Witness {
                witness: Witness { j, entries },
            },
            notes,
        })
    } else {
        let failures = (0..=horizon.min(last))
            .map(|j| FailingIndex {
                j,
                k: (j..=last).find(|&k| approx_ge(2.0 * f.rates[k] - f.rates[j], f.limit)),
            })
            .collect();
        Ok(WeightReport {
            schema: SCHEMA_VERSION.to_string(),
            family: "LOG_LINEAR".into(),
            evidence: Evidence::Exact,
            holds: false,
            outcome: SearchOutcome::Refutation {
                refutation: Refutation {
                    reason: format!(
                        "rates increase to the finite limit {} without attaining it: for every j, 2a_k - a_j eventually reaches the limit, which no a_l attains",
                        f.limit
                    ),
                    failures,
                },
            },
            notes,
        })
    }
}

fn search_sampled(s: &SampledFamily, horizon: usize) -> Result<WeightReport> {
    let max = s.max_index();
    check_index(horizon, max)?;
    if horizon == 0 {
        return Err(Error::HorizonTooSmall { horizon });
    }
    let j_max = (horizon - 1) / 2;
    let mut failures = Vec::new();
    for j in 0..=j_max {
        let mut entries = Vec::new();
        let mut failed_at = None;
        for k in j..=horizon {
            let found = (k..=max).find_map(|l| {
                let p = log_sup_profile(&s.log_ratios(j, k, l));
                p.bounded.then_some(WitnessEntry { k, l, c: p.sup })
            });
            match found {
                Some(e) => entries.push(e),
                None => {
                    failed_at = Some(k);
                    break;
                }
            }
        }
        match failed_at {
            None => {
                let growth = entries.iter().map(|e| e.c).fold(0.0, f64::max);
                return Ok(WeightReport {
                    schema: SCHEMA_VERSION.to_string(),
                    family: "SAMPLED".into(),
                    evidence: Evidence::TruncationOnly,
                    holds: true,
                    outcome: SearchOutcome::Witness {
                        witness: Witness { j, entries },
                    },
                    notes: vec![
                        "truncation-only evidence: valid on the sampled λ and indices <= J".into(),
                        format!("largest C in the table: {growth}"),
                    ],
                });
            }
            Some(k) => failures.push(FailingIndex { j, k: Some(k) }),
        }
    }
    Ok(WeightReport {
        schema: SCHEMA_VERSION.to_string(),
        family: "SAMPLED".into(),
        evidence: Evidence::TruncationOnly,
        holds: false,
        outcome: SearchOutcome::Refutation {
            refutation: Refutation {
                reason: format!(
                    "no j <= {j_max} has, for every k <= {horizon}, an l <= {max} whose constant stays bounded across the λ sample"
                ),
                failures,
            },
        },
        notes: vec!["truncation-only evidence: the sample may be too short to show boundedness".into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rates(f: impl Fn(usize) -> f64, n: usize) -> Vec<f64> {
        (0..n).map(f).collect()
    }

    #[test]
    fn constant_family_witness() {
        let s = SampledFamily::new(vec![0.0, 1.0, 2.0], vec![vec![1.0; 3]; 5]).unwrap();
        let fam = WeightFamily::Sampled(s);
        let w = Witness {
            j: 0,
            entries: (0..5).map(|k| WitnessEntry { k, l: k, c: 1.0 }).collect(),
        };
        assert!(verify_witness(&fam, &w).unwrap().passed);
        let r = search_witness(&fam, 4).unwrap();
        let SearchOutcome::Witness { witness } = r.outcome else { panic!() };
        assert_eq!(witness.j, 0);
        assert!(witness.entries.iter().all(|e| e.l == e.k && e.c == 1.0));
    }

    #[test]
    fn linear_rates_have_doubling_witness() {
        let f = LogLinearFamily::new(rates(|j| j as f64, 41), f64::INFINITY).unwrap();
        let fam = WeightFamily::LogLinear(f);
        let w = Witness {
            j: 0,
            entries: (0..=20).map(|k| WitnessEntry { k, l: 2 * k, c: 1.0 }).collect(),
        };
        assert!(verify_witness(&fam, &w).unwrap().passed);
        let r = search_witness(&fam, 20).unwrap();
        assert!(r.holds);
        let SearchOutcome::Witness { witness } = r.outcome else { panic!() };
        assert_eq!(witness.j, 0);
        for e in witness.entries {
            assert_eq!(e.l, 2 * e.k);
        }
    }

    #[test]
    fn finite_type_rates_are_refuted() {
        let f = LogLinearFamily::new(rates(|j| 1.0 - 1.0 / (j as f64 + 1.0), 41), 1.0).unwrap();
        let fam = WeightFamily::LogLinear(f);
        let r = search_witness(&fam, 10).unwrap();
        assert!(!r.holds);
        let SearchOutcome::Refutation { refutation } = r.outcome else { panic!() };
        for fail in refutation.failures {
            assert_eq!(fail.k, Some(2 * fail.j + 1));
        }
        // a witness claimed for j = 0 breaks at k = 1
        let w = Witness {
            j: 0,
            entries: vec![WitnessEntry { k: 1, l: 40, c: 1.0 }],
        };
        assert!(!verify_witness(&fam, &w).unwrap().passed);
    }

    #[test]
    fn stabilized_rates_hold_from_the_stabilization_index() {
        let f = LogLinearFamily::new(rates(|j| (j as f64).min(5.0), 12), 5.0).unwrap();
        let r = search_witness(&WeightFamily::LogLinear(f.clone()), 8).unwrap();
        let SearchOutcome::Witness { witness } = r.outcome else { panic!() };
        assert_eq!(witness.j, 5);
        assert!(matches!(
            search_witness(&WeightFamily::LogLinear(f), 4),
            Err(Error::HorizonTooSmall { horizon: 4 })
        ));
    }

    #[test]
    fn invalid_families() {
        assert!(LogLinearFamily::new(vec![1.0, 0.5], 2.0).is_err());
        assert!(LogLinearFamily::new(vec![0.0, 3.0], 2.0).is_err());
        assert!(SampledFamily::new(vec![0.0], vec![vec![1.0], vec![2.0]]).is_err());
        assert!(SampledFamily::new(vec![0.0], vec![vec![0.0]]).is_err());
        let fam = WeightFamily::Sampled(SampledFamily::new(vec![0.0], vec![vec![1.0]]).unwrap());
        let w = Witness {
            j: 3,
            entries: vec![],
        };
        assert!(matches!(
            verify_witness(&fam, &w),
            Err(Error::IndexOutOfRange { index: 3, max: 0 })
        ));
    }

    #[test]
    fn json_round_trip() {
        let f: LogLinearFamily = serde_json::from_str(r#"{"rates":[0,1,2],"limit":"+inf"}"#).unwrap();
        assert_eq!(f.limit(), f64::INFINITY);
        assert!(serde_json::from_str::<LogLinearFamily>(r#"{"rates":[0,2,1],"limit":3}"#).is_err());
        let fam: WeightFamily =
            serde_json::from_str(r#"{"kind":"LOG_LINEAR","rates":[0,1],"limit":"+inf"}"#).unwrap();
        assert_eq!(fam.kind(), "LOG_LINEAR");
        let back: WeightFamily = serde_json::from_str(&serde_json::to_string(&fam).unwrap()).unwrap();
        assert_eq!(back, fam);
        let bad = r#"{"kind":"SAMPLED","lambdas":[0,1],"values":[[1,1],[2,1]]}"#;
        assert!(serde_json::from_str::<WeightFamily>(bad).is_err());
    }

    #[test]
    fn profile_stability() {
        assert!(sup_profile(&[3.0, 1.0, 2.0, 0.5]).bounded);
        assert!(!sup_profile(&[1.0, 1.0, 2.0, 4.0]).bounded);
        assert!(sup_profile(&[7.0]).bounded);
    }
}
