//! Deciding whether a union of rectangles covers a target rectangle.
//!
//! Rectangles are sets of lattice points. Small targets are rasterized point
//! by point; larger ones go through exact rectangle subtraction on half-open
//! unit cells, which describes the same point set.

use super::geometry::Rect;

/// Targets with at most this many lattice points are rasterized.
pub const RASTER_AREA_CAP: u128 = 4096;

/// True iff every lattice point of `target` lies in some rectangle of `cover`.
pub fn covered_by_union(target: &Rect, cover: &[Rect]) -> bool {
    if target.lattice_area() <= RASTER_AREA_CAP {
        covered_by_raster(target, cover)
    } else {
        covered_by_subtraction(target, cover)
    }
}

pub(crate) fn covered_by_raster(target: &Rect, cover: &[Rect]) -> bool {
    let relevant: Vec<Rect> = cover.iter().filter_map(|c| c.intersection(target)).collect();
    (target.x1..=target.x2)
        .all(|x| (target.y1..=target.y2).all(|y| relevant.iter().any(|c| c.contains_point(x, y))))
}

/// Half-open cell rectangle `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy)]
struct Cells {
    x0: i128,
    y0: i128,
    x1: i128,
    y1: i128,
}

impl Cells {
    fn of(r: &Rect) -> Self {
        Cells {
            x0: r.x1 as i128,
            y0: r.y1 as i128,
            x1: r.x2 as i128 + 1,
            y1: r.y2 as i128 + 1,
        }
    }

    fn is_empty(&self) -> bool {
        self.x0 >= self.x1 || self.y0 >= self.y1
    }

    /// `self \ hole` as at most four disjoint pieces.
    fn subtract(&self, hole: &Cells, out: &mut Vec<Cells>) {
        let ix0 = self.x0.max(hole.x0);
        let iy0 = self.y0.max(hole.y0);
        let ix1 = self.x1.min(hole.x1);
        let iy1 = self.y1.min(hole.y1);
        if ix0 >= ix1 || iy0 >= iy1 {
            out.push(*self);
            return;
        }
        let pieces = [
            Cells { x0: self.x0, y0: self.y0, x1: ix0, y1: self.y1 },
            Cells { x0: ix1, y0: self.y0, x1: self.x1, y1: self.y1 },
            Cells { x0: ix0, y0: self.y0, x1: ix1, y1: iy0 },
            Cells { x0: ix0, y0: iy1, x1: ix1, y1: self.y1 },
        ];
        out.extend(pieces.into_iter().filter(|p| !p.is_empty()));
    }
}

pub(crate) fn covered_by_subtraction(target: &Rect, cover: &[Rect]) -> bool {
    let mut remaining = vec![Cells::of(target)];
    for hole in cover.iter().map(Cells::of) {
        let mut next = Vec::with_capacity(remaining.len() + 3);
        for piece in &remaining {
            piece.subtract(&hole, &mut next);
        }
        remaining = next;
        if remaining.is_empty() {
            return true;
        }
    }
    remaining.is_empty()
}
