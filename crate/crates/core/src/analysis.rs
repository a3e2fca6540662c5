//! Binned breakdowns of evaluation outcomes by co-occurrence frequency.
//!
//! Facts are grouped into geometric bins over a value in [0, 1]: bin `1/1`
//! holds exactly 1.0, bin `1/2^k` holds [1/2^k, 1/2^(k-1)) for k = 1..=6,
//! and bin `0` holds [0, 1/64). Per bin the report carries accuracy, the
//! biased-failure ratio, and moments of the predicted and gold conditional
//! probabilities; facts with `unknown` statistics are excluded up front and
//! only their count is reported.

use std::io::Write;

use crate::error::{Error, Result};
use crate::eval::JoinedFact;

pub const BIN_COUNT: usize = 8;
pub const BIN_LABELS: [&str; BIN_COUNT] =
    ["1/1", "1/2", "1/4", "1/8", "1/16", "1/32", "1/64", "0"];

/// Name of the binning scheme, recorded in run manifests so downstream
/// consumers can tell which partition produced a report.
pub const BIN_SCHEME: &str = "geometric8-v1";

/// Which joined statistic the bins partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinDimension {
    /// Gold conditional probability P(object | subject).
    GoldCondProb,
    /// Reciprocal rank of the gold pair count among the candidates.
    CoocRr,
}

impl BinDimension {
    pub fn as_str(self) -> &'static str {
        match self {
            BinDimension::GoldCondProb => "gold_condprob",
            BinDimension::CoocRr => "cooc_rr",
        }
    }
}

/// Maps a value in [0, 1] to its bin index. Total on that interval; values
/// outside it are a caller bug.
pub fn assign_bin(value: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::internal(format!("bin value {value} outside [0, 1]")));
    }
    if value >= 1.0 {
        return Ok(0);
    }
    for k in 1..=6 {
        if value >= 1.0 / f64::from(1u32 << k) {
            return Ok(k);
        }
    }
    Ok(7)
}

/// Accumulated statistics for one bin (or the total row).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BinRow {
    pub n: u64,
    pub n_hits: u64,
    pub n_fail: u64,
    /// Failures where the prediction's pair count strictly exceeds the
    /// gold object's pair count: the corpus pointed the model elsewhere.
    pub n_biased: u64,
    pred_cond_probs: Vec<f64>,
    gold_cond_probs: Vec<f64>,
}

impl BinRow {
    fn add(&mut self, fact: &JoinedFact) {
        self.n += 1;
        if fact.hits1 {
            self.n_hits += 1;
        } else {
            self.n_fail += 1;
            let pred = fact.pred_pair_count.unwrap_or(0);
            let gold = fact.gold_pair_count.unwrap_or(0);
            if pred > gold {
                self.n_biased += 1;
            }
        }
        if let Some(p) = fact.pred_cond_prob {
            self.pred_cond_probs.push(p);
        }
        if let Some(p) = fact.gold_cond_prob {
            self.gold_cond_probs.push(p);
        }
    }

    pub fn hits1_mean(&self) -> Option<f64> {
        (self.n > 0).then(|| self.n_hits as f64 / self.n as f64)
    }

    /// Share of failures that are biased cases. Undefined without failures.
    pub fn biased_ratio(&self) -> Option<f64> {
        (self.n_fail > 0).then(|| self.n_biased as f64 / self.n_fail as f64)
    }

    /// Mean and population standard deviation of predicted P(top | subject).
    pub fn pred_cond_prob_stats(&self) -> Option<(f64, f64)> {
        moments(&self.pred_cond_probs)
    }

    /// Mean and population standard deviation of gold P(object | subject).
    pub fn gold_cond_prob_stats(&self) -> Option<(f64, f64)> {
        moments(&self.gold_cond_probs)
    }
}

fn moments(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Some((mean, var.sqrt()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinnedReport {
    pub dimension: BinDimension,
    pub bins: Vec<BinRow>,
    pub total: BinRow,
    /// Facts excluded for missing statistics, not part of any row.
    pub n_unknown: u64,
    pub n_included: u64,
}

impl BinnedReport {
    pub fn unknown_fraction(&self) -> f64 {
        let all = self.n_unknown + self.n_included;
        if all == 0 {
            0.0
        } else {
            self.n_unknown as f64 / all as f64
        }
    }
}

/// Builds the binned report over `dimension`, excluding unknown facts.
pub fn bin_report(joined: &[JoinedFact], dimension: BinDimension) -> Result<BinnedReport> {
    let mut bins = vec![BinRow::default(); BIN_COUNT];
    let mut total = BinRow::default();
    let mut n_unknown = 0u64;
    for fact in joined {
        if fact.unknown {
            n_unknown += 1;
            continue;
        }
        let value = match dimension {
            BinDimension::GoldCondProb => fact.gold_cond_prob,
            BinDimension::CoocRr => fact.cooc_rr,
        }
        .ok_or_else(|| {
            Error::internal(format!("fact {} is known but lacks {}", fact.uid, dimension.as_str()))
        })?;
        bins[assign_bin(value)?].add(fact);
        total.add(fact);
    }
    let n_included = total.n;
    Ok(BinnedReport { dimension, bins, total, n_unknown, n_included })
}

/// CSV rendering: one row per bin plus a `total` row. Undefined cells are
/// left empty.
pub fn write_binned_csv<W: Write>(report: &BinnedReport, mut w: W) -> Result<()> {
    let io = |e| Error::data("writing binned csv").with_source(e);
    writeln!(
        w,
        "bin_label,n,hits1_mean,n_fail,n_biased,biased_ratio,\
         pred_condprob_mean,pred_condprob_std,gold_condprob_mean,gold_condprob_std"
    )
    .map_err(io)?;
    let fmt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
    let rows = report.bins.iter().zip(BIN_LABELS).chain([(&report.total, "total")]);
    for (row, label) in rows {
        let pred = row.pred_cond_prob_stats();
        let gold = row.gold_cond_prob_stats();
        writeln!(
            w,
            "{label},{},{},{},{},{},{},{},{},{}",
            row.n,
            fmt(row.hits1_mean()),
            row.n_fail,
            row.n_biased,
            fmt(row.biased_ratio()),
            fmt(pred.map(|(m, _)| m)),
            fmt(pred.map(|(_, s)| s)),
            fmt(gold.map(|(m, _)| m)),
            fmt(gold.map(|(_, s)| s)),
        )
        .map_err(io)?;
    }
    Ok(())
}
