//! Dirichlet-multinomial document likelihood with symmetric pseudo-counts.

use std::collections::HashMap;

use libm::lgamma;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bag of words of one document, sorted by token id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentCounts {
    counts: Vec<(u32, u32)>,
    total: u32,
}

impl DocumentCounts {
    /// Counts the tokens of a document. Empty documents are rejected.
    pub fn from_tokens(tokens: &[u32]) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::input("document has no tokens"));
        }
        let mut sorted = tokens.to_vec();
        sorted.sort_unstable();
        let mut counts: Vec<(u32, u32)> = Vec::new();
        for v in sorted {
            match counts.last_mut() {
                Some((last, n)) if *last == v => *n += 1,
                _ => counts.push((v, 1)),
            }
        }
        Ok(Self {
            counts,
            total: tokens.len() as u32,
        })
    }

    pub fn counts(&self) -> &[(u32, u32)] {
        &self.counts
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn max_token(&self) -> u32 {
        self.counts.last().map(|&(v, _)| v).unwrap_or(0)
    }
}

/// Word counts accumulated by one cluster.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClusterWordCounts {
    counts: HashMap<u32, u64>,
    total: u64,
}

impl ClusterWordCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, token: u32) -> u64 {
        self.counts.get(&token).copied().unwrap_or(0)
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn add_document(&mut self, doc: &DocumentCounts) {
        for &(v, n) in doc.counts() {
            *self.counts.entry(v).or_insert(0) += n as u64;
        }
        self.total += doc.total() as u64;
    }

    /// Inverse of [`add_document`](Self::add_document). Fails without
    /// modifying anything if some count would go negative.
    pub fn remove_document(&mut self, doc: &DocumentCounts) -> Result<()> {
        for &(v, n) in doc.counts() {
            let have = self.count(v);
            if have < n as u64 {
                return Err(Error::StateCorruption(format!(
                    "removing {n} occurrences of token {v} from a cluster holding {have}"
                )));
            }
        }
        for &(v, n) in doc.counts() {
            let slot = self.counts.get_mut(&v).expect("checked above");
            *slot -= n as u64;
            if *slot == 0 {
                self.counts.remove(&v);
            }
        }
        self.total -= doc.total() as u64;
        Ok(())
    }

    /// The `n` most frequent tokens, ties broken by smaller id.
    pub fn top_tokens(&self, n: usize) -> Vec<(u32, u64)> {
        let mut all: Vec<(u32, u64)> = self.counts.iter().map(|(&v, &c)| (v, c)).collect();
        all.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        all.truncate(n);
        all
    }
}

/// Log predictive probability of `doc` given the cluster's counts, under a
/// symmetric Dirichlet prior with per-word pseudo-count `theta0_v` over a
/// vocabulary of `vocab_size` words.
pub fn doc_log_likelihood(
    cluster: &ClusterWordCounts,
    doc: &DocumentCounts,
    theta0_v: f64,
    vocab_size: usize,
) -> f64 {
    let theta0 = theta0_v * vocab_size as f64;
    let n_c = cluster.total() as f64;
    let mut ll = lgamma(n_c + theta0) - lgamma(n_c + doc.total() as f64 + theta0);
    for &(v, n) in doc.counts() {
        let n_cv = cluster.count(v) as f64;
        ll += rising_log(n_cv + theta0_v, n);
    }
    ll
}

/// `ln Γ(x + n) − ln Γ(x)`.
fn rising_log(x: f64, n: u32) -> f64 {
    if n <= 8 {
        let mut p = 1.0;
        for j in 0..n {
            p *= x + j as f64;
        }
        p.ln()
    } else {
        lgamma(x + n as f64) - lgamma(x)
    }
}
