use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::HierarchyError;

/// Largest supported power.
pub const MAX_POWER: u32 = 8;

/// Clustering objective: `k`-center (minimise the largest distance to a
/// center) or `(k, z)` (minimise the sum of `z`-th powers of distances).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    Center,
    Power(u32),
}

impl Objective {
    pub const MEDIAN: Objective = Objective::Power(1);
    pub const MEANS: Objective = Objective::Power(2);

    pub fn power(z: u32) -> Result<Self, HierarchyError> {
        let o = Objective::Power(z);
        o.check()?;
        Ok(o)
    }

    pub fn check(self) -> Result<(), HierarchyError> {
        match self {
            Objective::Power(z) if !(1..=MAX_POWER).contains(&z) => Err(HierarchyError::UnsupportedPower(z)),
            _ => Ok(()),
        }
    }

    /// Per-point cost of a distance: `x^z` by repeated multiplication, or `x`
    /// itself for `k`-center.
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Objective::Center => x,
            Objective::Power(z) => {
                let mut acc = x;
                for _ in 1..z {
                    acc *= x;
                }
                acc
            }
        }
    }

    /// Cost of `count` points that are each at distance `x`.
    #[inline]
    pub fn many(self, count: usize, x: f64) -> f64 {
        match self {
            Objective::Center => x,
            Objective::Power(_) => count as f64 * self.apply(x),
        }
    }

    /// Combines the costs of two disjoint groups of points.
    #[inline]
    pub fn combine(self, a: f64, b: f64) -> f64 {
        match self {
            Objective::Center => a.max(b),
            Objective::Power(_) => a + b,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Center => f.write_str("center"),
            Objective::Power(z) => write!(f, "z={z}"),
        }
    }
}

impl FromStr for Objective {
    type Err = String;

    /// Accepts `center`, `median`, `means`, `z=N` or a bare `N`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        let z = match t.as_str() {
            "center" | "k-center" | "kcenter" => return Ok(Objective::Center),
            "median" | "k-median" => 1,
            "means" | "k-means" => 2,
            other => other
                .strip_prefix("z=")
                .unwrap_or(other)
                .parse::<u32>()
                .map_err(|_| format!("unknown objective {s:?}"))?,
        };
        Objective::power(z).map_err(|e| e.to_string())
    }
}

/// Cost-decrease of an annotation. The root is [`Decrease::Infinite`] and
/// sorts above every finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decrease {
    Finite(f64),
    Infinite,
}

impl Decrease {
    pub fn finite(self) -> Option<f64> {
        match self {
            Decrease::Finite(x) => Some(x),
            Decrease::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Decrease::Infinite)
    }
}

impl Eq for Decrease {}

impl PartialOrd for Decrease {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Decrease {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Decrease::Infinite, Decrease::Infinite) => Ordering::Equal,
            (Decrease::Infinite, _) => Ordering::Greater,
            (_, Decrease::Infinite) => Ordering::Less,
            (Decrease::Finite(a), Decrease::Finite(b)) => a.total_cmp(b),
        }
    }
}

impl fmt::Display for Decrease {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decrease::Finite(x) => write!(f, "{x}"),
            Decrease::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_are_exact_products() {
        assert_eq!(Objective::Power(3).apply(1.5), 1.5 * 1.5 * 1.5);
        assert_eq!(Objective::Power(1).apply(7.0), 7.0);
        assert_eq!(Objective::Center.apply(7.0), 7.0);
        assert_eq!(Objective::Power(2).many(3, 2.0), 12.0);
        assert_eq!(Objective::Center.many(3, 2.0), 2.0);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("median".parse::<Objective>().unwrap(), Objective::MEDIAN);
        assert_eq!("means".parse::<Objective>().unwrap(), Objective::MEANS);
        assert_eq!("z=5".parse::<Objective>().unwrap(), Objective::Power(5));
        assert_eq!("center".parse::<Objective>().unwrap(), Objective::Center);
        assert!("z=0".parse::<Objective>().is_err());
        assert!("z=9".parse::<Objective>().is_err());
        assert!("huh".parse::<Objective>().is_err());
        for o in [Objective::Center, Objective::Power(4)] {
            assert_eq!(o.to_string().parse::<Objective>().unwrap(), o);
        }
    }

    #[test]
    fn infinite_sorts_last() {
        let mut v = [Decrease::Infinite, Decrease::Finite(3.0), Decrease::Finite(-0.0), Decrease::Finite(1e300)];
        v.sort();
        assert_eq!(v[0], Decrease::Finite(-0.0));
        assert_eq!(v[3], Decrease::Infinite);
    }
}
