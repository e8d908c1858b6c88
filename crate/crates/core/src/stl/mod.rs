//! Spatio-temporal invariant language.
//!
//! Invariants are propositional formulas over three kinds of atoms: a closed
//! time window, the identity of an owner, and rectangular occupancy. They are
//! evaluated against one [`Observation`] at a time, i.e. what a single owner
//! occupies at a single tick.

mod collision;
mod coverage;
mod geometry;
mod text;

pub use collision::{detect_collisions, CollisionWitness, OccupancyFact};
pub use coverage::{covered_by_union, RASTER_AREA_CAP};
pub use geometry::{box_intersection, window_intersection, Rect, TimeWindow};
pub use text::{parse_invariant, parse_invariants, ParseError};

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Invariant {
    True,
    False,
    And(Vec<Invariant>),
    Or(Vec<Invariant>),
    Not(Box<Invariant>),
    Implies(Box<Invariant>, Box<Invariant>),
    TimeInterval(TimeWindow),
    Owner(String),
    OccupyBox(Rect),
    OccupyPoint(i64, i64),
}

impl Invariant {
    pub fn and(parts: impl IntoIterator<Item = Invariant>) -> Self {
        Invariant::And(parts.into_iter().collect())
    }

    pub fn or(parts: impl IntoIterator<Item = Invariant>) -> Self {
        Invariant::Or(parts.into_iter().collect())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Invariant) -> Self {
        Invariant::Not(Box::new(inner))
    }

    pub fn implies(lhs: Invariant, rhs: Invariant) -> Self {
        Invariant::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn time_interval(start: i64, end: i64) -> Self {
        Invariant::TimeInterval(TimeWindow::new(start, end))
    }

    pub fn owner(name: impl Into<String>) -> Self {
        Invariant::Owner(name.into())
    }

    pub fn occupy_box(x1: i64, y1: i64, x2: i64, y2: i64) -> Self {
        Invariant::OccupyBox(Rect::new(x1, y1, x2, y2))
    }

    /// Orders every corner pair and flattens directly nested `And`/`Or`.
    /// An empty conjunction becomes `True` and an empty disjunction `False`.
    pub fn normalize(&self) -> Invariant {
        match self {
            Invariant::True => Invariant::True,
            Invariant::False => Invariant::False,
            Invariant::And(parts) => {
                let flat = flatten(parts, |i| match i {
                    Invariant::And(inner) => Some(inner),
                    _ => None,
                });
                if flat.is_empty() {
                    Invariant::True
                } else {
                    Invariant::And(flat)
                }
            }
            Invariant::Or(parts) => {
                let flat = flatten(parts, |i| match i {
                    Invariant::Or(inner) => Some(inner),
                    _ => None,
                });
                if flat.is_empty() {
                    Invariant::False
                } else {
                    Invariant::Or(flat)
                }
            }
            Invariant::Not(inner) => Invariant::not(inner.normalize()),
            Invariant::Implies(lhs, rhs) => Invariant::implies(lhs.normalize(), rhs.normalize()),
            Invariant::TimeInterval(w) => Invariant::TimeInterval(w.normalized()),
            Invariant::Owner(name) => Invariant::Owner(name.clone()),
            Invariant::OccupyBox(b) => Invariant::OccupyBox(b.normalized()),
            Invariant::OccupyPoint(x, y) => Invariant::OccupyPoint(*x, *y),
        }
    }

    pub fn is_normalized(&self) -> bool {
        match self {
            Invariant::True | Invariant::False | Invariant::Owner(_) | Invariant::OccupyPoint(..) => true,
            Invariant::And(parts) => {
                !parts.is_empty()
                    && parts.iter().all(|p| !matches!(p, Invariant::And(_)) && p.is_normalized())
            }
            Invariant::Or(parts) => {
                !parts.is_empty()
                    && parts.iter().all(|p| !matches!(p, Invariant::Or(_)) && p.is_normalized())
            }
            Invariant::Not(inner) => inner.is_normalized(),
            Invariant::Implies(lhs, rhs) => lhs.is_normalized() && rhs.is_normalized(),
            Invariant::TimeInterval(w) => w.is_normalized(),
            Invariant::OccupyBox(b) => b.is_normalized(),
        }
    }

    /// Truth value under one observation. Boxes and windows are read in
    /// normalized form, so unnormalized terms evaluate like their normal form.
    pub fn eval(&self, obs: &Observation) -> bool {
        match self {
            Invariant::True => true,
            Invariant::False => false,
            Invariant::And(parts) => parts.iter().all(|p| p.eval(obs)),
            Invariant::Or(parts) => parts.iter().any(|p| p.eval(obs)),
            Invariant::Not(inner) => !inner.eval(obs),
            Invariant::Implies(lhs, rhs) => !lhs.eval(obs) || rhs.eval(obs),
            Invariant::TimeInterval(w) => w.normalized().contains(obs.time),
            Invariant::Owner(name) => *name == obs.owner,
            Invariant::OccupyBox(b) => covered_by_union(&b.normalized(), &obs.occupied),
            Invariant::OccupyPoint(x, y) => obs.occupied.iter().any(|b| b.contains_point(*x, *y)),
        }
    }
}

fn flatten(parts: &[Invariant], same: impl Fn(&Invariant) -> Option<&Vec<Invariant>> + Copy) -> Vec<Invariant> {
    let mut out = Vec::with_capacity(parts.len());
    for part in parts {
        let part = part.normalize();
        match same(&part) {
            Some(inner) => out.extend(inner.iter().cloned()),
            None => out.push(part),
        }
    }
    out
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_invariant(self, f)
    }
}

impl Serialize for Invariant {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Invariant {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        parse_invariant(&raw).map_err(serde::de::Error::custom)
    }
}

/// What one owner occupies at one tick.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub time: i64,
    pub owner: String,
    pub occupied: Vec<Rect>,
}

impl Observation {
    pub fn new(time: i64, owner: impl Into<String>, occupied: impl IntoIterator<Item = Rect>) -> Self {
        Observation {
            time,
            owner: owner.into(),
            occupied: occupied.into_iter().map(Rect::normalized).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceVerdict {
    pub holds: bool,
    pub first_violation: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("trace time decreases at index {index}: {previous} then {current}")]
    NonMonotonicTrace { index: usize, previous: i64, current: i64 },
}

/// Evaluates `inv` at every observation of a time-ordered trace.
pub fn check_trace(inv: &Invariant, trace: &[Observation]) -> Result<TraceVerdict, TraceError> {
    for (index, pair) in trace.windows(2).enumerate() {
        if pair[1].time < pair[0].time {
            return Err(TraceError::NonMonotonicTrace {
                index: index + 1,
                previous: pair[0].time,
                current: pair[1].time,
            });
        }
    }
    let inv = inv.normalize();
    let first_violation = trace.iter().position(|obs| !inv.eval(obs));
    Ok(TraceVerdict { holds: first_violation.is_none(), first_violation })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn area_rule() -> Invariant {
        Invariant::implies(
            Invariant::and([Invariant::time_interval(300, 605), Invariant::owner("AreaOfInterest")]),
            Invariant::occupy_box(1051, 3056, 1505, 3603),
        )
    }

    fn area_of_interest(time: i64, occupied: bool) -> Observation {
        let boxes = if occupied { vec![Rect::new(1051, 3056, 1505, 3603)] } else { vec![] };
        Observation::new(time, "AreaOfInterest", boxes)
    }

    #[test]
    fn normalize_reorders_corners() {
        let raw = Invariant::OccupyBox(Rect { x1: 1505, y1: 3603, x2: 1051, y2: 3056 });
        assert_eq!(raw.normalize(), Invariant::occupy_box(1051, 3056, 1505, 3603));
    }

    #[test]
    fn normalize_flattens_same_connective() {
        let a = Invariant::owner("a");
        let b = Invariant::owner("b");
        let c = Invariant::owner("c");
        let nested = Invariant::and([Invariant::and([a.clone(), b.clone()]), c.clone()]);
        assert_eq!(nested.normalize(), Invariant::and([a.clone(), b.clone(), c.clone()]));
        // Or inside And is left alone.
        let mixed = Invariant::and([Invariant::or([a.clone(), b.clone()]), c.clone()]);
        assert_eq!(mixed.normalize(), mixed);
    }

    #[test]
    fn area_rule_is_a_fixpoint() {
        let f = area_rule();
        assert!(f.is_normalized());
        assert_eq!(f.normalize(), f);
    }

    #[test]
    fn eval_area_rule() {
        let f = area_rule();
        assert!(f.eval(&area_of_interest(400, true)));
        assert!(f.eval(&area_of_interest(700, false)));
        assert!(!f.eval(&area_of_interest(400, false)));
        // Window endpoints are inclusive.
        assert!(!f.eval(&area_of_interest(300, false)));
        assert!(!f.eval(&area_of_interest(605, false)));
        assert!(f.eval(&area_of_interest(606, false)));
    }

    #[test]
    fn occupy_box_means_coverage_not_equality() {
        let f = Invariant::occupy_box(0, 0, 9, 9);
        let tiles = Observation::new(0, "a", [Rect::new(0, 0, 4, 9), Rect::new(5, 0, 9, 9)]);
        assert!(f.eval(&tiles));
        let bigger = Observation::new(0, "a", [Rect::new(-5, -5, 20, 20)]);
        assert!(f.eval(&bigger));
        let partial = Observation::new(0, "a", [Rect::new(0, 0, 4, 9)]);
        assert!(!f.eval(&partial));
    }

    #[test]
    fn occupy_point_includes_borders() {
        let obs = Observation::new(0, "a", [Rect::new(0, 0, 5, 5)]);
        assert!(Invariant::OccupyPoint(5, 5).eval(&obs));
        assert!(!Invariant::OccupyPoint(6, 5).eval(&obs));
    }

    #[test]
    fn trace_checks() {
        let f = area_rule();
        assert_eq!(check_trace(&f, &[]).unwrap(), TraceVerdict { holds: true, first_violation: None });
        let trace = [area_of_interest(400, true), area_of_interest(500, false)];
        assert_eq!(
            check_trace(&f, &trace).unwrap(),
            TraceVerdict { holds: false, first_violation: Some(1) }
        );
        assert!(check_trace(&Invariant::True, &trace).unwrap().holds);
    }

    #[test]
    fn decreasing_trace_is_rejected() {
        let trace = [area_of_interest(500, true), area_of_interest(400, true)];
        assert_eq!(
            check_trace(&Invariant::True, &trace),
            Err(TraceError::NonMonotonicTrace { index: 1, previous: 500, current: 400 })
        );
    }
}
