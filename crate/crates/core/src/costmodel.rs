//! Operation-count model of the recursive evaluator.
//!
//! With `t_+` and `t_*` the cost of one addition and one multiplication
//! (exponentiation counted as one multiplication):
//!
//! ```text
//! C(m, 0) = 0
//! C(1, k) = k t_+ + 2k t_*
//! C(m, k) = k t_+ + k t_* + sum_{k'=0}^{k} C(m-1, k')
//! ```
//!
//! All counts are exact integers; `C(m, k)` grows like `3 k^m / m!`.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::combinatorics::log2_biguint;
use crate::rmpoly::OpCounts;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error("operation costs must be positive, got t_add = {t_add}, t_mul = {t_mul}")]
    NonPositiveCost { t_add: f64, t_mul: f64 },
    #[error("no benchmark data to compare against")]
    MissingBenchData,
}

/// Per-operation costs, e.g. seconds per addition and multiplication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpCosts {
    t_add: f64,
    t_mul: f64,
}

impl OpCosts {
    pub fn new(t_add: f64, t_mul: f64) -> Result<Self, CostError> {
        if !(t_add > 0.0 && t_mul > 0.0) {
            return Err(CostError::NonPositiveCost { t_add, t_mul });
        }
        Ok(Self { t_add, t_mul })
    }

    /// Both operations cost `t`.
    pub fn uniform(t: f64) -> Result<Self, CostError> {
        Self::new(t, t)
    }

    pub fn unit() -> Self {
        Self {
            t_add: 1.0,
            t_mul: 1.0,
        }
    }

    pub fn t_add(&self) -> f64 {
        self.t_add
    }

    pub fn t_mul(&self) -> f64 {
        self.t_mul
    }
}

/// Memoized additions and multiplications for every `m <= m_max`,
/// `k <= k_max`.
#[derive(Debug, Clone)]
pub struct CostTable {
    k_max: u32,
    m_max: u32,
    adds: Vec<BigUint>,
    muls: Vec<BigUint>,
}

impl CostTable {
    pub fn new(m_max: u32, k_max: u32) -> Self {
        assert!(m_max >= 1, "cost table needs m_max >= 1");
        let stride = k_max as usize + 1;
        let mut adds = Vec::with_capacity(stride * m_max as usize);
        let mut muls = Vec::with_capacity(stride * m_max as usize);
        for k in 0..=k_max as u64 {
            adds.push(BigUint::from(k));
            muls.push(BigUint::from(2 * k));
        }
        for m in 1..m_max as usize {
            let prev = (m - 1) * stride;
            let (mut sum_adds, mut sum_muls) = (BigUint::zero(), BigUint::zero());
            for k in 0..stride {
                sum_adds += &adds[prev + k];
                sum_muls += &muls[prev + k];
                adds.push(&sum_adds + k);
                muls.push(&sum_muls + k);
            }
        }
        Self {
            k_max,
            m_max,
            adds,
            muls,
        }
    }

    fn slot(&self, m: u32, k: u32) -> usize {
        assert!(
            (1..=self.m_max).contains(&m) && k <= self.k_max,
            "C({m}, {k}) outside the table (m <= {}, k <= {})",
            self.m_max,
            self.k_max
        );
        (m as usize - 1) * (self.k_max as usize + 1) + k as usize
    }

    /// Additions counted by the model.
    pub fn adds(&self, m: u32, k: u32) -> &BigUint {
        &self.adds[self.slot(m, k)]
    }

    /// Multiplications counted by the model.
    pub fn muls(&self, m: u32, k: u32) -> &BigUint {
        &self.muls[self.slot(m, k)]
    }

    /// `C(m, k)` with `t_+ = t_* = 1`.
    pub fn unit_cost(&self, m: u32, k: u32) -> BigUint {
        self.adds(m, k) + self.muls(m, k)
    }

    /// `C(q, m, k) = adds * t_+ + muls * t_*`.
    pub fn cost(&self, costs: OpCosts, m: u32, k: u32) -> f64 {
        let adds = self.adds(m, k).to_f64().unwrap_or(f64::INFINITY);
        let muls = self.muls(m, k).to_f64().unwrap_or(f64::INFINITY);
        adds * costs.t_add + muls * costs.t_mul
    }
}

/// `C(m, k)` in unit cost.
pub fn unit_cost(m: u32, k: u32) -> BigUint {
    CostTable::new(m, k).unit_cost(m, k)
}

/// Time estimate `C(q, m, k)` for the given operation costs.
pub fn cost(costs: OpCosts, m: u32, k: u32) -> f64 {
    CostTable::new(m, k).cost(costs, m, k)
}

/// `3 k^m / m!`, exact.
pub fn leading_term(m: u32, k: u32) -> Ratio<BigUint> {
    let numer = BigUint::from(3u32) * BigUint::from(k).pow(m);
    let denom: BigUint = (1..=m as u64).map(BigUint::from).product();
    Ratio::new(numer, denom)
}

/// Nearest `f64`, through logarithms when the parts overflow.
pub fn ratio_to_f64(r: &Ratio<BigUint>) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    (log2_biguint(r.numer()) - log2_biguint(r.denom())).exp2()
}

/// `C(m, k) / (3 k^m / m!)`.
pub fn leading_term_ratio(m: u32, k: u32) -> f64 {
    let exact = Ratio::from_integer(unit_cost(m, k));
    ratio_to_f64(&(exact / leading_term(m, k)))
}

/// What the recursive evaluator does beyond the model, itemized.
///
/// The model charges an inner node of degree `k` for `k` multiplications;
/// the evaluator spends `k` on powers of the first variable and `k` on
/// scaling the inner values, so it performs `power_step_muls` more
/// multiplications in total. `calls` counts recursion nodes, a cost the model
/// leaves out entirely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvaluatorOverhead {
    pub power_step_muls: u64,
    pub calls: u64,
}

/// Overhead of evaluating one `m`-variable polynomial of degree `k`.
pub fn evaluator_overhead(m: u32, k: u32) -> EvaluatorOverhead {
    assert!(m >= 1);
    // per level: P(1, d) = 0, N(1, d) = 1 for every degree d
    let mut power = vec![0u64; k as usize + 1];
    let mut calls = vec![1u64; k as usize + 1];
    for _ in 1..m {
        let (mut sum_p, mut sum_n) = (0u64, 0u64);
        for d in 0..=k as usize {
            sum_p += power[d];
            sum_n += calls[d];
            power[d] = d as u64 + sum_p;
            calls[d] = 1 + sum_n;
        }
    }
    EvaluatorOverhead {
        power_step_muls: power[k as usize],
        calls: calls[k as usize],
    }
}

/// Model counts next to the evaluator's measured counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpCountComparison {
    pub m: u32,
    pub k: u32,
    pub model_adds: u64,
    pub model_muls: u64,
    pub measured: OpCounts,
    pub overhead: EvaluatorOverhead,
}

impl OpCountComparison {
    pub fn new(table: &CostTable, m: u32, k: u32, measured: OpCounts) -> Self {
        Self {
            m,
            k,
            model_adds: table.adds(m, k).to_u64().expect("count fits u64"),
            model_muls: table.muls(m, k).to_u64().expect("count fits u64"),
            measured,
            overhead: evaluator_overhead(m, k),
        }
    }

    pub fn adds_match(&self) -> bool {
        self.measured.adds == self.model_adds
    }

    /// Measured multiplications minus the model's.
    pub fn mul_residual(&self) -> i64 {
        self.measured.muls as i64 - self.model_muls as i64
    }

    /// True when every difference from the model is accounted for by the
    /// itemized overhead.
    pub fn is_explained(&self) -> bool {
        self.adds_match()
            && self.mul_residual() == self.overhead.power_step_muls as i64
            && self.measured.calls == self.overhead.calls
    }
}

pub const COST_CSV_HEADER: &str = "m,k,C_exact,leading_term,ratio";

/// One CSV row per `(m, k)` pair in the given ranges.
pub fn cost_csv(
    ms: impl IntoIterator<Item = u32>,
    ks: impl IntoIterator<Item = u32> + Clone,
) -> String {
    let ms: Vec<u32> = ms.into_iter().collect();
    let ks: Vec<u32> = ks.into_iter().collect();
    let table = CostTable::new(
        ms.iter().copied().max().unwrap_or(1).max(1),
        ks.iter().copied().max().unwrap_or(0),
    );
    let mut out = String::from(COST_CSV_HEADER);
    out.push('\n');
    for &m in &ms {
        for &k in &ks {
            let exact = table.unit_cost(m, k);
            let lead = leading_term(m, k);
            let ratio = if k == 0 {
                f64::NAN
            } else {
                ratio_to_f64(&(Ratio::from_integer(exact.clone()) / lead.clone()))
            };
            let _ = writeln!(out, "{m},{k},{exact},{},{ratio}", ratio_to_f64(&lead));
        }
    }
    out
}

/// A measured evaluation time for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuredPoint {
    pub q: u32,
    pub k: u32,
    pub m: u32,
    /// Median time of one tag computation, nanoseconds.
    pub measured_ns: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionRow {
    pub q: u32,
    pub k: u32,
    pub m: u32,
    pub predicted_ns: f64,
    pub measured_ns: f64,
}

/// Model prediction `C(q, m, k)` next to each measurement. Diagnostic only.
pub fn predicted_vs_measured(
    costs: OpCosts,
    measured: &[MeasuredPoint],
) -> Result<Vec<PredictionRow>, CostError> {
    if measured.is_empty() {
        return Err(CostError::MissingBenchData);
    }
    let m_max = measured.iter().map(|p| p.m).max().unwrap_or(1);
    let k_max = measured.iter().map(|p| p.k).max().unwrap_or(0);
    let table = CostTable::new(m_max, k_max);
    Ok(measured
        .iter()
        .map(|p| PredictionRow {
            q: p.q,
            k: p.k,
            m: p.m,
            predicted_ns: table.cost(costs, p.m, p.k),
            measured_ns: p.measured_ns,
        })
        .collect())
}

pub const PREDICTION_CSV_HEADER: &str = "q,k,m,predicted,measured";

pub fn prediction_csv(rows: &[PredictionRow]) -> String {
    let mut out = String::from(PREDICTION_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.1},{:.1}",
            r.q, r.k, r.m, r.predicted_ns, r.measured_ns
        );
    }
    out
}
