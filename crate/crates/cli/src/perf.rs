//! Runtime statistics, reported on stderr only so command outputs stay
//! byte-deterministic.

use std::time::Instant;

pub struct Phase {
    label: &'static str,
    start: Instant,
}

pub fn start(label: &'static str) -> Phase {
    Phase { label, start: Instant::now() }
}

impl Phase {
    /// Prints `perf <label> bytes=... seconds=... mbps=... workers=...
    /// peak-rss-kb=...` to stderr.
    pub fn report(self, bytes: u64, workers: usize) {
        let seconds = self.start.elapsed().as_secs_f64();
        let mbps = if seconds > 0.0 {
            bytes as f64 / (1024.0 * 1024.0) / seconds
        } else {
            0.0
        };
        let rss = peak_rss_kb().map(|kb| kb.to_string()).unwrap_or_else(|| "unknown".into());
        eprintln!(
            "perf {} bytes={bytes} seconds={seconds:.3} mbps={mbps:.1} workers={workers} peak-rss-kb={rss}",
            self.label
        );
    }
}

/// Peak resident set size of this process, from /proc/self/status (VmHWM).
pub fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    for line in status.lines() {
        if let Some(rest) = line.strip_prefix("VmHWM:") {
            return rest.trim().trim_end_matches("kB").trim().parse().ok();
        }
    }
    None
}
