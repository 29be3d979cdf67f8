use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::control::JoystickInput;
use crate::sim::Pose2D;

/// One tick under operator control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistorySample {
    pub tick: u64,
    /// Pose after the tick's motion was applied.
    pub pose: Pose2D,
    pub stick: JoystickInput,
}

/// Bounded memory of the last `k` operator-controlled ticks, oldest first.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryWindow {
    k: usize,
    entries: VecDeque<HistorySample>,
}

impl HistoryWindow {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "history length must be at least 1");
        Self {
            k,
            entries: VecDeque::with_capacity(k),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, sample: HistorySample) {
        if self.entries.len() == self.k {
            self.entries.pop_front();
        }
        self.entries.push_back(sample);
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &HistorySample> + ExactSizeIterator {
        self.entries.iter()
    }
}
