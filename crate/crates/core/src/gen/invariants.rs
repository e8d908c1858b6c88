use super::generator::{gen_int_in_range, one_of, Generator};
use super::GenError;
use crate::stl::{Invariant, Rect, TimeWindow};

/// `IMPLIES(AND(TimeInterval(t1,t2),Owner(o)),OccupyBox(x1,y1,x2,y2))` with the
/// six integers drawn from the given ranges and the owner from `owners`.
/// Unordered draws are normalized rather than rejected.
pub fn gen_invariant(coords: (i64, i64), times: (i64, i64), owners: Vec<String>) -> Result<Generator<Invariant>, GenError> {
    let coord = gen_int_in_range(coords.0, coords.1)?;
    let time = gen_int_in_range(times.0, times.1)?;
    let owner = one_of(owners).map_err(|_| GenError::EmptyOwnerPool)?;
    Ok(Generator::new(move |rng| {
        let (t1, rng) = time.generate(rng);
        let (t2, rng) = time.generate(rng);
        let (x1, rng) = coord.generate(rng);
        let (y1, rng) = coord.generate(rng);
        let (x2, rng) = coord.generate(rng);
        let (y2, rng) = coord.generate(rng);
        let (name, rng) = owner.generate(rng);
        let inv = Invariant::implies(
            Invariant::and([Invariant::TimeInterval(TimeWindow::new(t1, t2)), Invariant::Owner(name)]),
            Invariant::OccupyBox(Rect::new(x1, y1, x2, y2)),
        );
        (inv, rng)
    }))
}

#[cfg(test)]
mod tests {
    use super::super::rng::{Rng, Seed};
    use super::*;
    use crate::stl::Observation;

    #[test]
    fn shape_is_fixed() {
        let g = gen_invariant((-50, 50), (0, 100), vec!["a".into(), "b".into()]).unwrap();
        let (invs, _) = g.take(Rng::from_seed(Seed(3)), 200);
        for inv in invs {
            let Invariant::Implies(lhs, rhs) = &inv else { panic!("{inv}") };
            let Invariant::And(parts) = lhs.as_ref() else { panic!("{inv}") };
            assert!(matches!(parts.as_slice(), [Invariant::TimeInterval(_), Invariant::Owner(_)]));
            assert!(matches!(rhs.as_ref(), Invariant::OccupyBox(_)));
            assert!(inv.is_normalized());
        }
    }

    #[test]
    fn singleton_ranges() {
        let g = gen_invariant((0, 0), (0, 0), vec!["p".into()]).unwrap();
        assert_eq!(
            g.sample(Seed(0)),
            Invariant::implies(
                Invariant::and([Invariant::time_interval(0, 0), Invariant::owner("p")]),
                Invariant::occupy_box(0, 0, 0, 0)
            )
        );
    }

    #[test]
    fn thousand_draws_are_normal_and_total() {
        let g = gen_invariant((-30, 30), (0, 50), vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let (invs, _) = g.take(Rng::from_seed(Seed(1000)), 1000);
        let obs = Observation::new(25, "b", [Rect::new(-10, -10, 10, 10)]);
        for inv in invs {
            assert_eq!(inv.normalize(), inv);
            assert_eq!(inv.normalize().normalize(), inv.normalize());
            let _ = inv.eval(&obs);
        }
    }

    #[test]
    fn empty_owner_pool_is_rejected() {
        assert_eq!(gen_invariant((0, 1), (0, 1), vec![]).err(), Some(GenError::EmptyOwnerPool));
    }
}
