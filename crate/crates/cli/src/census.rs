//! Timed, multi-threaded point counts and their CSV tables.

use std::io::Write;
use std::ops::Range;
use std::time::{Duration, Instant};

use commvar_core::census::{count_full_with_first, full_enumeration_cost, CountMethod, NilpotentCensus};
use commvar_core::{Error, Result};
use serde::Serialize;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "COMMVAR_THREADS";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub n: usize,
    pub r: usize,
    pub q: u64,
    pub count: u128,
    pub elapsed: Duration,
    pub method: CountMethod,
}

#[derive(Serialize)]
struct CountRow<'a> {
    n: usize,
    r: usize,
    q: u64,
    count: String,
    method: &'a str,
    elapsed_ms: u128,
}

/// Threads to use: `COMMVAR_THREADS` if set and positive, else the
/// available parallelism.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
}

/// Splits `0..len` into at most `parts` contiguous ranges.
fn chunks(len: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = (parts as u64).clamp(1, len.max(1));
    let step = len.div_ceil(parts);
    (0..parts)
        .map(|k| (k * step).min(len)..((k + 1) * step).min(len))
        .filter(|r| !r.is_empty())
        .collect()
}

/// Sums `work` over a partition of `0..len` on up to `threads` threads.
fn parallel_sum<W>(len: u64, threads: usize, work: W) -> Result<u128>
where
    W: Fn(Range<u64>) -> Result<u128> + Sync,
{
    let parts = chunks(len, threads);
    if parts.len() <= 1 {
        return parts.into_iter().map(&work).sum();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = parts
            .into_iter()
            .map(|r| {
                let work = &work;
                scope.spawn(move || work(r))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("census worker panicked"))
            .sum()
    })
}

/// Exact `|C_r(N_n)(F_q)|`, partitioned on the first matrix of the tuple.
pub fn count(n: usize, r: usize, q: u64, method: CountMethod, budget: u128, threads: usize) -> Result<CountResult> {
    let start = Instant::now();
    let count = match method {
        CountMethod::FullEnumeration => {
            // Parameter and budget checks run before any thread starts.
            count_full_with_first(n, r, q, 0..0, budget)?;
            let per = u64::try_from((q as u128).pow((n * n) as u32)).map_err(|_| Error::BudgetExceeded {
                needed: full_enumeration_cost(n, r, q),
                budget,
            })?;
            parallel_sum(per, threads, |range| count_full_with_first(n, r, q, range, budget))?
        }
        CountMethod::CentralizerPruned => {
            let census = NilpotentCensus::build(n, q, budget)?;
            parallel_sum(census.len() as u64, threads, |range| {
                Ok(census.count_with_first(r, range.start as usize..range.end as usize))
            })?
        }
    };
    Ok(CountResult {
        n,
        r,
        q,
        count,
        elapsed: start.elapsed(),
        method,
    })
}

/// Writes `n,r,q,count,method,elapsed_ms` with a header row.
pub fn write_csv<W: Write>(out: W, rows: &[CountResult]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for c in rows {
        w.serialize(CountRow {
            n: c.n,
            r: c.r,
            q: c.q,
            count: c.count.to_string(),
            method: c.method.name(),
            elapsed_ms: c.elapsed.as_millis(),
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub q: u64,
    pub count: String,
    pub log_q_count: f64,
    /// `n^2 - n + (r-1)(n-1)`.
    pub dim: usize,
}

/// Counts for each `q` with `log_q` of the count beside the dimension of
/// the regular component. Advisory only.
pub fn growth_probe(n: usize, r: usize, qs: &[u64], budget: u128, threads: usize) -> Result<Vec<GrowthRow>> {
    let dim = commvar_core::certify::formula_dims(n, r).dim_n_component;
    qs.iter()
        .map(|&q| {
            let c = count(n, r, q, CountMethod::CentralizerPruned, budget, threads)?;
            Ok(GrowthRow {
                q,
                count: c.count.to_string(),
                log_q_count: (c.count as f64).ln() / (q as f64).ln(),
                dim,
            })
        })
        .collect()
}

pub fn write_growth_csv<W: Write>(out: W, rows: &[GrowthRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use commvar_core::census::DEFAULT_BUDGET;

    #[test]
    fn chunking_covers_range() {
        for (len, parts) in [(0, 3), (1, 4), (10, 3), (64, 8), (7, 100)] {
            let cs = chunks(len, parts);
            let total: u64 = cs.iter().map(|r| r.end - r.start).sum();
            assert_eq!(total, len);
            assert!(cs.windows(2).all(|w| w[0].end == w[1].start));
        }
    }

    #[test]
    fn threads_do_not_change_counts() {
        for method in [CountMethod::FullEnumeration, CountMethod::CentralizerPruned] {
            let one = count(2, 3, 3, method, 1 << 20, 1).unwrap().count;
            let many = count(2, 3, 3, method, 1 << 20, 5).unwrap().count;
            assert_eq!(one, many);
        }
    }

    #[test]
    fn growth_examples() {
        let rows = growth_probe(2, 2, &[2, 3], DEFAULT_BUDGET, 2).unwrap();
        assert_eq!(rows[0].count, "10");
        assert!((rows[0].log_q_count - 10f64.log2()).abs() < 1e-12);
        assert_eq!(rows[1].count, "33");
        assert!((rows[1].log_q_count - 33f64.ln() / 3f64.ln()).abs() < 1e-12);
        assert_eq!(rows[0].dim, 3);
        let trivial = growth_probe(1, 3, &[2, 5], DEFAULT_BUDGET, 1).unwrap();
        assert!(trivial.iter().all(|r| r.count == "1" && r.log_q_count == 0.0));
    }

    #[test]
    fn csv_header() {
        let c = count(2, 2, 2, CountMethod::CentralizerPruned, DEFAULT_BUDGET, 1).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &[c]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,r,q,count,method,elapsed_ms\n2,2,2,10,centralizer-pruned,"));
    }
}
