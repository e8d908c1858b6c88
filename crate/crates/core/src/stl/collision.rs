use super::geometry::{Rect, TimeWindow};
use serde::{Deserialize, Serialize};

/// A component claims a rectangle for a window of time.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OccupancyFact {
    pub owner: String,
    pub window: TimeWindow,
    #[serde(rename = "box")]
    pub area: Rect,
}

impl OccupancyFact {
    pub fn new(owner: impl Into<String>, window: TimeWindow, area: Rect) -> Self {
        OccupancyFact {
            owner: owner.into(),
            window: window.normalized(),
            area: area.normalized(),
        }
    }
}

/// Two distinct owners claim overlapping space at overlapping times.
/// `owner_a` sorts before `owner_b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CollisionWitness {
    pub owner_a: String,
    pub owner_b: String,
    pub overlap_window: TimeWindow,
    pub overlap_box: Rect,
}

/// One witness per unordered pair of facts with different owners whose
/// windows and boxes both intersect. Sorted by owner pair, then window, then
/// box, so the result does not depend on input order.
pub fn detect_collisions(facts: &[OccupancyFact]) -> Vec<CollisionWitness> {
    let facts: Vec<OccupancyFact> = facts
        .iter()
        .map(|f| OccupancyFact::new(f.owner.clone(), f.window, f.area))
        .collect();
    let mut out = Vec::new();
    for (i, a) in facts.iter().enumerate() {
        for b in &facts[i + 1..] {
            if a.owner == b.owner {
                continue;
            }
            let (Some(overlap_window), Some(overlap_box)) =
                (a.window.intersection(&b.window), a.area.intersection(&b.area))
            else {
                continue;
            };
            let (owner_a, owner_b) = if a.owner < b.owner {
                (a.owner.clone(), b.owner.clone())
            } else {
                (b.owner.clone(), a.owner.clone())
            };
            out.push(CollisionWitness { owner_a, owner_b, overlap_window, overlap_box });
        }
    }
    out.sort();
    out
}
