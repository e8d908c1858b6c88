//! Integer rectangles and closed time windows.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Axis-aligned rectangle on the integer grid. Borders are included, so a
/// rectangle with `x1 == x2` is a vertical segment and one with equal corners
/// is a single point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x1: i64,
    pub y1: i64,
    pub x2: i64,
    pub y2: i64,
}

impl Rect {
    /// Builds a rectangle from any two opposite corners.
    pub fn new(x1: i64, y1: i64, x2: i64, y2: i64) -> Self {
        Rect { x1, y1, x2, y2 }.normalized()
    }

    pub fn point(x: i64, y: i64) -> Self {
        Rect { x1: x, y1: y, x2: x, y2: y }
    }

    pub fn normalized(self) -> Self {
        Rect {
            x1: self.x1.min(self.x2),
            y1: self.y1.min(self.y2),
            x2: self.x1.max(self.x2),
            y2: self.y1.max(self.y2),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.x1 <= self.x2 && self.y1 <= self.y2
    }

    /// Number of lattice points covered.
    pub fn lattice_area(&self) -> u128 {
        let w = (self.x2 as i128 - self.x1 as i128 + 1) as u128;
        let h = (self.y2 as i128 - self.y1 as i128 + 1) as u128;
        w * h
    }

    pub fn contains_point(&self, x: i64, y: i64) -> bool {
        self.x1 <= x && x <= self.x2 && self.y1 <= y && y <= self.y2
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.x1 <= other.x1 && other.x2 <= self.x2 && self.y1 <= other.y1 && other.y2 <= self.y2
    }

    /// Closed-interval overlap. Touching rectangles overlap in a degenerate
    /// rectangle.
    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        let x1 = self.x1.max(other.x1);
        let y1 = self.y1.max(other.y1);
        let x2 = self.x2.min(other.x2);
        let y2 = self.y2.min(other.y2);
        (x1 <= x2 && y1 <= y2).then_some(Rect { x1, y1, x2, y2 })
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OccupyBox({},{},{},{})", self.x1, self.y1, self.x2, self.y2)
    }
}

/// Closed interval of discrete time ticks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: i64,
    pub end: i64,
}

impl TimeWindow {
    pub fn new(start: i64, end: i64) -> Self {
        TimeWindow { start, end }.normalized()
    }

    pub fn instant(t: i64) -> Self {
        TimeWindow { start: t, end: t }
    }

    pub fn normalized(self) -> Self {
        TimeWindow {
            start: self.start.min(self.end),
            end: self.start.max(self.end),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.start <= self.end
    }

    pub fn contains(&self, t: i64) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn intersection(&self, other: &TimeWindow) -> Option<TimeWindow> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (start <= end).then_some(TimeWindow { start, end })
    }
}

impl fmt::Display for TimeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TimeInterval({},{})", self.start, self.end)
    }
}

/// Overlap of two rectangles, `None` when disjoint.
pub fn box_intersection(a: &Rect, b: &Rect) -> Option<Rect> {
    a.intersection(b)
}

/// Overlap of two time windows, `None` when disjoint.
pub fn window_intersection(a: &TimeWindow, b: &TimeWindow) -> Option<TimeWindow> {
    a.intersection(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn box_overlap_examples() {
        assert_eq!(
            box_intersection(&Rect::new(0, 0, 10, 10), &Rect::new(5, 5, 20, 20)),
            Some(Rect::new(5, 5, 10, 10))
        );
        assert_eq!(box_intersection(&Rect::new(0, 0, 1, 1), &Rect::new(2, 2, 3, 3)), None);
        assert_eq!(
            box_intersection(&Rect::new(0, 0, 5, 5), &Rect::new(5, 5, 9, 9)),
            Some(Rect::point(5, 5))
        );
    }

    #[test]
    fn window_overlap_examples() {
        assert_eq!(
            window_intersection(&TimeWindow::new(300, 605), &TimeWindow::new(600, 700)),
            Some(TimeWindow::new(600, 605))
        );
        assert_eq!(window_intersection(&TimeWindow::new(0, 1), &TimeWindow::new(5, 6)), None);
        assert_eq!(
            window_intersection(&TimeWindow::instant(3), &TimeWindow::instant(3)),
            Some(TimeWindow::instant(3))
        );
    }

    #[test]
    fn corners_are_reordered() {
        assert_eq!(Rect::new(1505, 3603, 1051, 3056), Rect { x1: 1051, y1: 3056, x2: 1505, y2: 3603 });
        assert_eq!(TimeWindow::new(605, 300), TimeWindow { start: 300, end: 605 });
    }

    fn rect() -> impl Strategy<Value = Rect> {
        (-20i64..20, -20i64..20, -20i64..20, -20i64..20).prop_map(|(a, b, c, d)| Rect::new(a, b, c, d))
    }

    fn window() -> impl Strategy<Value = TimeWindow> {
        (-20i64..20, -20i64..20).prop_map(|(a, b)| TimeWindow::new(a, b))
    }

    proptest! {
        #[test]
        fn box_intersection_commutes_and_is_subset(a in rect(), b in rect()) {
            let ab = box_intersection(&a, &b);
            prop_assert_eq!(ab, box_intersection(&b, &a));
            if let Some(r) = ab {
                prop_assert!(r.is_normalized());
                prop_assert!(a.contains_rect(&r) && b.contains_rect(&r));
            }
        }

        #[test]
        fn window_intersection_commutes_and_is_subset(a in window(), b in window()) {
            let ab = window_intersection(&a, &b);
            prop_assert_eq!(ab, window_intersection(&b, &a));
            if let Some(w) = ab {
                prop_assert!(a.start <= w.start && w.end <= a.end);
                prop_assert!(b.start <= w.start && w.end <= b.end);
            }
        }
    }
}
