//! Liu–Layland utilization test for periodic task sets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::domain::Duration;
use crate::error::{Error, Result};

/// One periodic task: worst-case execution time and period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodicTask {
    pub execution: Duration,
    pub period: Duration,
}

impl PeriodicTask {
    pub fn new(execution: Duration, period: Duration) -> Self {
        PeriodicTask { execution, period }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchedulabilityReport {
    pub n: usize,
    /// Exact Σ C/P.
    #[serde(serialize_with = "ratio_as_string")]
    pub utilization: BigRational,
    pub bound: f64,
    /// `utilization <= bound`; a sufficient condition only.
    pub feasible: bool,
}

impl SchedulabilityReport {
    pub fn utilization_f64(&self) -> f64 {
        self.utilization.to_f64().unwrap_or(f64::NAN)
    }
}

fn ratio_as_string<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{}/{}", r.numer(), r.denom()))
}

/// `n (2^(1/n) - 1)`. Exactly 1 for `n <= 1`, decreasing towards ln 2.
pub fn rm_bound(n: usize) -> f64 {
    if n <= 1 {
        return 1.0;
    }
    let n = n as f64;
    // expm1 keeps precision when 2^(1/n) is close to 1
    n * (std::f64::consts::LN_2 / n).exp_m1()
}

pub fn check_schedulability(tasks: &[PeriodicTask]) -> Result<SchedulabilityReport> {
    let mut utilization = BigRational::zero();
    for (i, t) in tasks.iter().enumerate() {
        if t.period.is_zero() {
            return Err(Error::Domain(format!("task {i} has a zero period")));
        }
        utilization += BigRational::new(BigInt::from(t.execution.minutes()), BigInt::from(t.period.minutes()));
    }
    let bound = rm_bound(tasks.len());
    let exact_bound = BigRational::from_float(bound).expect("finite bound");
    Ok(SchedulabilityReport {
        n: tasks.len(),
        feasible: utilization <= exact_bound,
        utilization,
        bound,
    })
}
