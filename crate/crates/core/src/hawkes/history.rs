use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::tensor::ClusterId;
use crate::error::{Error, Result};
use crate::kernel::KernelBasis;

/// Offset applied to successive simultaneous timestamps, in hours.
pub const TIE_SHIFT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    pub cluster: ClusterId,
}

/// Strictly time-ordered list of labelled events.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventHistory {
    events: Vec<Event>,
}

impl EventHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_events(events: impl IntoIterator<Item = Event>) -> Result<Self> {
        let mut h = Self::new();
        for e in events {
            h.push(e.time, e.cluster)?;
        }
        Ok(h)
    }

    /// Appends an event; its time must exceed every earlier one.
    pub fn push(&mut self, time: f64, cluster: ClusterId) -> Result<()> {
        if !time.is_finite() {
            return Err(Error::input("event time must be finite"));
        }
        if let Some(last) = self.events.last() {
            if time <= last.time {
                return Err(Error::input(format!(
                    "event at {time} does not follow previous event at {}",
                    last.time
                )));
            }
        }
        self.events.push(Event { time, cluster });
        Ok(())
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn last_time(&self) -> Option<f64> {
        self.events.last().map(|e| e.time)
    }

    /// Events with `now - t <= horizon` and `t <= now`, oldest first.
    pub fn window(&self, now: f64, horizon: f64) -> &[Event] {
        let start = self.events.partition_point(|e| now - e.time > horizon);
        let end = self.events.partition_point(|e| e.time <= now);
        &self.events[start..end.max(start)]
    }

    /// Drops events older than `horizon` relative to `now`.
    pub fn prune(&mut self, now: f64, horizon: f64) {
        let start = self.events.partition_point(|e| now - e.time > horizon);
        self.events.drain(..start);
    }

    /// Events of one cluster.
    pub fn of_cluster(&self, cluster: ClusterId) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(move |e| e.cluster == cluster)
    }
}

/// Shifts each run of equal timestamps by [`TIE_SHIFT`] increments in
/// arrival order so that the sequence becomes strictly increasing.
/// Fails on decreasing input.
pub fn separate_ties(times: &mut [f64]) -> Result<()> {
    let Some(&first) = times.first() else {
        return Ok(());
    };
    let mut prev_raw = first;
    for i in 1..times.len() {
        let raw = times[i];
        if raw < prev_raw {
            return Err(Error::input(format!(
                "timestamp {raw} at position {i} precedes {prev_raw}"
            )));
        }
        if raw <= times[i - 1] {
            times[i] = times[i - 1] + TIE_SHIFT;
        }
        prev_raw = raw;
    }
    Ok(())
}

/// In-horizon event times of one source cluster, plus the number of its
/// events that already aged out (whose kernel mass has saturated).
#[derive(Debug, Clone, Default)]
pub struct SourceWindow {
    times: VecDeque<f64>,
    expired: u64,
}

impl SourceWindow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: f64) {
        self.times.push_back(t);
    }

    pub fn last(&self) -> Option<f64> {
        self.times.back().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn expired(&self) -> u64 {
        self.expired
    }

    /// Moves events with `now - t > horizon` out of the window.
    pub fn expire(&mut self, now: f64, horizon: f64) {
        while let Some(&t) = self.times.front() {
            if now - t > horizon {
                self.times.pop_front();
                self.expired += 1;
            } else {
                break;
            }
        }
    }

    /// Adds `Σ_j κ(t - t_j)` over window events strictly before `t`.
    pub fn add_kernel_sum(&self, basis: &KernelBasis, t: f64, acc: &mut [f64]) {
        for &tj in &self.times {
            if tj >= t {
                break;
            }
            basis.accumulate_values(t - tj, acc);
        }
    }

    /// Adds the kernel mass accrued by window events over `[from, to]`.
    /// Every window event must satisfy `t_j <= from`.
    pub fn add_increment(&self, basis: &KernelBasis, from: f64, to: f64, acc: &mut [f64]) {
        for &tj in &self.times {
            debug_assert!(tj <= from);
            basis.accumulate_integral(from - tj, to - tj, acc);
        }
    }

    /// Adds the kernel mass accrued by every event of the source (expired
    /// ones included) over `[t_j, t]`. `saturated` is the per-component
    /// mass of an aged-out event.
    pub fn add_cumulative(&self, basis: &KernelBasis, t: f64, saturated: &[f64], acc: &mut [f64]) {
        let n = self.expired as f64;
        for (a, s) in acc.iter_mut().zip(saturated) {
            *a += n * s;
        }
        for &tj in &self.times {
            if tj >= t {
                break;
            }
            basis.accumulate_integral(0.0, t - tj, acc);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_requires_strict_order() {
        let mut h = EventHistory::new();
        h.push(1.0, ClusterId(0)).unwrap();
        assert!(h.push(1.0, ClusterId(0)).is_err());
        assert!(h.push(0.5, ClusterId(0)).is_err());
        h.push(1.5, ClusterId(1)).unwrap();
        assert_eq!(h.len(), 2);
    }

    #[test]
    fn window_selects_in_horizon() {
        let h = EventHistory::from_events(
            [0.0, 1.0, 5.0, 9.0]
                .iter()
                .map(|&time| Event { time, cluster: ClusterId(0) }),
        )
        .unwrap();
        let w = h.window(10.0, 5.0);
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].time, 5.0);
        assert_eq!(h.window(4.0, 100.0).len(), 2);
    }

    #[test]
    fn ties_are_separated() {
        let mut t = vec![0.0, 1.0, 1.0, 1.0, 2.0];
        separate_ties(&mut t).unwrap();
        assert_eq!(t[1], 1.0);
        assert!((t[2] - (1.0 + TIE_SHIFT)).abs() < 1e-15);
        assert!((t[3] - (1.0 + 2.0 * TIE_SHIFT)).abs() < 1e-15);
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        let mut bad = vec![1.0, 0.5];
        assert!(separate_ties(&mut bad).is_err());
    }

    #[test]
    fn window_expiry_counts() {
        let mut w = SourceWindow::new();
        for t in [0.0, 1.0, 2.0] {
            w.push(t);
        }
        w.expire(13.6, 12.5);
        assert_eq!(w.expired(), 2);
        assert_eq!(w.len(), 1);
    }
}
