use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Path cost `straight + diagonal·√2`, kept as integer step counts so that
/// comparisons are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct StepCost {
    pub straight: u32,
    pub diagonal: u32,
}

impl StepCost {
    pub const ZERO: StepCost = StepCost {
        straight: 0,
        diagonal: 0,
    };
    pub const STRAIGHT: StepCost = StepCost {
        straight: 1,
        diagonal: 0,
    };
    pub const DIAGONAL: StepCost = StepCost {
        straight: 0,
        diagonal: 1,
    };

    pub fn value(self) -> f64 {
        self.straight as f64 + self.diagonal as f64 * std::f64::consts::SQRT_2
    }
}

impl std::ops::Add for StepCost {
    type Output = StepCost;

    fn add(self, rhs: StepCost) -> StepCost {
        StepCost {
            straight: self.straight + rhs.straight,
            diagonal: self.diagonal + rhs.diagonal,
        }
    }
}

impl Ord for StepCost {
    fn cmp(&self, other: &Self) -> Ordering {
        // a1 + b1√2  vs  a2 + b2√2   <=>   da  vs  db·√2
        let da = self.straight as i64 - other.straight as i64;
        let db = other.diagonal as i64 - self.diagonal as i64;
        match (da.signum(), db.signum()) {
            (0, 0) => Ordering::Equal,
            (a, b) if a <= 0 && b >= 0 => Ordering::Less,
            (a, b) if a >= 0 && b <= 0 => Ordering::Greater,
            // same strict sign: compare squares, flipping when both negative
            (1, 1) => (da * da).cmp(&(2 * db * db)),
            _ => (2 * db * db).cmp(&(da * da)),
        }
    }
}

impl PartialOrd for StepCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
