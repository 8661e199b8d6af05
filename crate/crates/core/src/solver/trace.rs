use std::fmt::Write;

use serde::Serialize;

use crate::io::fmt17;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRecord {
    pub step: usize,
    pub t: f64,
    pub tv: f64,
    pub maxnorm: f64,
    pub newton_iters: usize,
    pub residual: f64,
}

/// Per-step monitor values; record 0 is the initial state.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MonitorTrace {
    pub records: Vec<TraceRecord>,
}

impl MonitorTrace {
    pub fn push(&mut self, record: TraceRecord) {
        debug_assert!(self.records.last().is_none_or(|r| r.t < record.t));
        self.records.push(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Largest stepwise increase of the total variation (negative when it
    /// strictly decreases at every step).
    pub fn max_tv_increase(&self) -> f64 {
        self.records
            .windows(2)
            .map(|w| w[1].tv - w[0].tv)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn tv_nonincreasing(&self, tol: f64) -> bool {
        self.records.windows(2).all(|w| w[1].tv <= w[0].tv + tol)
    }

    pub fn peak_maxnorm(&self) -> f64 {
        self.records.iter().map(|r| r.maxnorm).fold(0.0, f64::max)
    }

    pub fn total_newton_iterations(&self) -> usize {
        self.records.iter().map(|r| r.newton_iters).sum()
    }

    /// CSV with header `step,t,tv,maxnorm,newton_iters,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,t,tv,maxnorm,newton_iters,residual\n");
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.step,
                fmt17(r.t),
                fmt17(r.tv),
                fmt17(r.maxnorm),
                r.newton_iters,
                fmt17(r.residual)
            )
            .unwrap();
        }
        out
    }
}
