use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Normalised mutual information `2 I(U;V) / (H(U) + H(V))`, natural logs.
///
/// Two single-cluster partitions score 1; if exactly one partition is a
/// single cluster the score is 0.
pub fn nmi<A, B>(truth: &[A], pred: &[B]) -> Result<f64>
where
    A: Eq + Hash + Copy,
    B: Eq + Hash + Copy,
{
    if truth.len() != pred.len() {
        return Err(Error::input(format!(
            "partitions differ in length: {} vs {}",
            truth.len(),
            pred.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::input("partitions are empty"));
    }
    let n = truth.len() as f64;
    let mut joint: HashMap<(A, B), u64> = HashMap::new();
    let mut left: HashMap<A, u64> = HashMap::new();
    let mut right: HashMap<B, u64> = HashMap::new();
    for (&a, &b) in truth.iter().zip(pred) {
        *joint.entry((a, b)).or_default() += 1;
        *left.entry(a).or_default() += 1;
        *right.entry(b).or_default() += 1;
    }
    let entropy = |counts: &mut dyn Iterator<Item = u64>| -> f64 {
        let mut v: Vec<u64> = counts.collect();
        v.sort_unstable();
        -v.iter()
            .map(|&c| {
                let p = c as f64 / n;
                p * p.ln()
            })
            .sum::<f64>()
    };
    let hu = entropy(&mut left.values().copied());
    let hv = entropy(&mut right.values().copied());
    if left.len() == 1 && right.len() == 1 {
        return Ok(1.0);
    }
    if left.len() == 1 || right.len() == 1 {
        return Ok(0.0);
    }
    let mut terms: Vec<f64> = joint
        .iter()
        .map(|((a, b), &c)| {
            let pij = c as f64 / n;
            let pi = left[a] as f64 / n;
            let pj = right[b] as f64 / n;
            pij * (pij / (pi * pj)).ln()
        })
        .collect();
    // summation order must not depend on hash iteration order
    terms.sort_unstable_by(f64::total_cmp);
    let mi: f64 = terms.iter().sum();
    Ok((2.0 * mi / (hu + hv)).clamp(0.0, 1.0))
}

/// Overlap of non-negative functions sampled on a shared uniform grid of
/// spacing `dx`: `Σ_i ∫ min(f_i, max_{j≠i} f_j) / Σ_i ∫ f_i`, both
/// integrals by the trapezoid rule.
pub fn overlap(functions: &[Vec<f64>], dx: f64) -> Result<f64> {
    overlap_with(functions, |v| trapezoid(v, dx))
}

/// [`overlap`] for histograms: integrals become plain sums.
pub fn histogram_overlap(histograms: &[Vec<f64>]) -> Result<f64> {
    overlap_with(histograms, |v| v.iter().sum())
}

fn overlap_with(functions: &[Vec<f64>], integrate: impl Fn(&[f64]) -> f64) -> Result<f64> {
    let Some(first) = functions.first() else {
        return Err(Error::input("no functions given"));
    };
    let m = first.len();
    if functions.iter().any(|f| f.len() != m) {
        return Err(Error::input("functions must share one grid"));
    }
    if functions.iter().flatten().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(Error::input("functions must be finite and non-negative"));
    }
    let total: f64 = functions.iter().map(|f| integrate(f)).sum();
    if !(total > 0.0) {
        return Err(Error::input("functions have zero total area"));
    }
    // per grid point: largest and second-largest value and the argmax
    let mut top = vec![0.0f64; m];
    let mut second = vec![0.0f64; m];
    let mut arg = vec![usize::MAX; m];
    for (i, f) in functions.iter().enumerate() {
        for x in 0..m {
            let v = f[x];
            if v > top[x] {
                second[x] = top[x];
                top[x] = v;
                arg[x] = i;
            } else if v > second[x] {
                second[x] = v;
            }
        }
    }
    let mut inter = 0.0;
    let mut buf = vec![0.0; m];
    for (i, f) in functions.iter().enumerate() {
        for x in 0..m {
            let others = if arg[x] == i { second[x] } else { top[x] };
            buf[x] = f[x].min(others);
        }
        inter += integrate(&buf);
    }
    Ok((inter / total).clamp(0.0, 1.0))
}

fn trapezoid(v: &[f64], dx: f64) -> f64 {
    match v.len() {
        0 | 1 => 0.0,
        n => dx * (v.iter().sum::<f64>() - 0.5 * (v[0] + v[n - 1])),
    }
}

/// Mean and standard error of the mean (zero for fewer than two values).
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
