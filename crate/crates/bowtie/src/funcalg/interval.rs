use serde::{Deserialize, Serialize};

/// A closed real interval; endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    /// The non-positive half-line.
    pub const NEG: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: 0.0,
    };
    /// The non-negative half-line.
    pub const POS: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
    };
    /// The open positive half-line X used by the Abel machinery. We carry
    /// it as [0, inf) and rely on the evaluation sites being positive.
    pub const X: Interval = Interval::POS;

    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// The reflection −I.
    pub fn reflected(&self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        }
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
