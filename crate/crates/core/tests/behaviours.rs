use std::collections::BTreeSet;
use stpt_core::gen::{Rng, Seed};
use stpt_core::model::{
    correct_behaviours, read_behaviours, reachable_states, spec_consistency, write_behaviours, ActionSpec, Behaviour,
    ModelError, SpecWarning, State, StateModel, StepOutcome,
};
use stpt_core::suts::therac_model;
use stpt_oracles::{count_paths, enumerate_paths, random_model};

fn as_pairs(behaviours: &[Behaviour]) -> BTreeSet<(Vec<String>, Vec<State>)> {
    behaviours.iter().map(|b| (b.actions.clone(), b.states.clone())).collect()
}

fn flip(name: &str, var: &'static str) -> ActionSpec {
    ActionSpec::new(name, |_| true, move |s: &State| {
        let v = matches!(s.get(var), Some(stpt_core::model::Value::Bool(true)));
        s.clone().with(var, !v)
    })
}

#[test]
fn two_inits_two_actions_depth_three() {
    let init = [State::new().with("a", false).with("b", false), State::new().with("a", true).with("b", false)];
    let model = StateModel::new(["a", "b"], init, vec![flip("fa", "a"), flip("fb", "b")]).unwrap();
    let behaviours = correct_behaviours(&model, 3, 100).unwrap();
    // Two starts times 1 + 2 + 4 + 8 paths each.
    assert_eq!(behaviours.len(), 30);
    assert_eq!(behaviours.len(), count_paths(&model, 3));
    assert_eq!(as_pairs(&behaviours), enumerate_paths(&model, 3));
}

#[test]
fn therac_behaviours_match_oracle() {
    let (model, _) = therac_model();
    for depth in 0..=4 {
        let behaviours = correct_behaviours(&model, depth, 100).unwrap();
        assert_eq!(as_pairs(&behaviours), enumerate_paths(&model, depth), "depth {depth}");
        assert_eq!(behaviours.len(), behaviours.iter().collect::<BTreeSet<_>>().len());
    }
    assert_eq!(count_paths(&model, 4), 341);
    assert_eq!(correct_behaviours(&model, 0, 100).unwrap().len(), 1);
}

#[test]
fn random_models_match_oracle() {
    let (rngs, _) = Rng::from_seed(Seed(2024)).split_n(40);
    for (i, mut rng) in rngs.into_iter().enumerate() {
        let model = random_model(&mut rng, 12);
        for depth in 0..=4 {
            let behaviours = correct_behaviours(&model, depth, 1_000).unwrap();
            assert_eq!(as_pairs(&behaviours), enumerate_paths(&model, depth), "model {i} depth {depth}");
        }
    }
}

#[test]
fn behaviours_are_sorted_and_prefix_closed() {
    let (rngs, _) = Rng::from_seed(Seed(99)).split_n(20);
    for mut rng in rngs {
        let model = random_model(&mut rng, 9);
        let behaviours = correct_behaviours(&model, 3, 1_000).unwrap();
        assert!(behaviours.windows(2).all(|w| w[0] < w[1]));
        let set: BTreeSet<_> = behaviours.iter().cloned().collect();
        for b in &behaviours {
            assert_eq!(b.states.len(), b.actions.len() + 1);
            assert!(model.is_init(b.init()));
            if !b.actions.is_empty() {
                let prefix = Behaviour {
                    actions: b.actions[..b.actions.len() - 1].to_vec(),
                    states: b.states[..b.states.len() - 1].to_vec(),
                };
                assert!(set.contains(&prefix));
            }
        }
    }
}

#[test]
fn every_behaviour_replays_through_step() {
    let (rngs, _) = Rng::from_seed(Seed(5)).split_n(20);
    for mut rng in rngs {
        let model = random_model(&mut rng, 9);
        for b in correct_behaviours(&model, 3, 1_000).unwrap() {
            for (i, action) in b.actions.iter().enumerate() {
                match model.step(&b.states[i], action) {
                    StepOutcome::NextStates(next) => assert!(next.contains(&b.states[i + 1])),
                    other => panic!("{action} replays as {other:?}"),
                }
            }
        }
    }
}

#[test]
fn enabled_actions_agree_with_step() {
    let (rngs, _) = Rng::from_seed(Seed(17)).split_n(20);
    for mut rng in rngs {
        let model = random_model(&mut rng, 9);
        for s in reachable_states(&model, 1_000).unwrap() {
            let enabled = model.enabled_actions(&s);
            for name in model.action_names() {
                let steps = matches!(model.step(&s, &name), StepOutcome::NextStates(_));
                assert_eq!(enabled.contains(&name), steps);
            }
            assert_eq!(model.step(&s, "undeclared"), StepOutcome::UnknownOperation);
        }
    }
}

#[test]
fn reachable_states_equal_states_on_paths() {
    let (rngs, _) = Rng::from_seed(Seed(3)).split_n(20);
    for mut rng in rngs {
        let model = random_model(&mut rng, 5);
        // Five states are all reached within four steps if at all.
        let on_paths: BTreeSet<State> =
            enumerate_paths(&model, 4).into_iter().flat_map(|(_, states)| states).collect();
        let reachable: BTreeSet<State> = reachable_states(&model, 1_000).unwrap().into_iter().collect();
        assert_eq!(reachable, on_paths);
    }
}

#[test]
fn state_cap_is_enforced() {
    let counter = ActionSpec::new("inc", |_| true, |s: &State| {
        let stpt_core::model::Value::Int(n) = s.get("n").unwrap() else { unreachable!() };
        s.clone().with("n", n + 1)
    });
    let model = StateModel::new(["n"], [State::new().with("n", 0)], vec![counter]).unwrap();
    assert!(matches!(reachable_states(&model, 50), Err(ModelError::StateCapExceeded { cap: 50, .. })));
    assert!(matches!(correct_behaviours(&model, 60, 50), Err(ModelError::StateCapExceeded { .. })));
    assert_eq!(correct_behaviours(&model, 10, 50).unwrap().len(), 11);
}

#[test]
fn effect_changing_variables_is_rejected() {
    let bad = ActionSpec::new("grow", |_| true, |s: &State| s.clone().with("extra", 1));
    let model = StateModel::new(["n"], [State::new().with("n", 0)], vec![bad]).unwrap();
    assert!(matches!(correct_behaviours(&model, 1, 10), Err(ModelError::EffectShape { .. })));
    assert!(StateModel::new(["n"], [State::new().with("m", 0)], vec![]).is_err());
}

#[test]
fn consistency_warnings() {
    let (model, _) = therac_model();
    assert_eq!(spec_consistency(&model, 100).unwrap(), vec![]);

    let robot_q = StateModel::new(
        ["position"],
        [State::new().with("position", "Q")],
        vec![ActionSpec::new(
            "moveToQ",
            |s: &State| s.get("position") != Some(&"Q".into()),
            |s: &State| s.clone().with("position", "Q"),
        )],
    )
    .unwrap();
    assert_eq!(spec_consistency(&robot_q, 100).unwrap(), vec![SpecWarning::NeverEnabled("moveToQ".into())]);

    let empty = StateModel::new(["x"], Vec::<State>::new(), vec![flip("f", "x")]).unwrap();
    assert_eq!(spec_consistency(&empty, 100).unwrap(), vec![SpecWarning::EmptyInit]);

    let idle = StateModel::new(["x"], [State::new().with("x", 1)], vec![ActionSpec::new("idle", |_| true, |s| s.clone())])
        .unwrap();
    assert_eq!(spec_consistency(&idle, 100).unwrap(), vec![SpecWarning::NoOpEffect("idle".into())]);
}

#[test]
fn export_round_trips_and_is_stable() {
    let (model, _) = therac_model();
    let behaviours = correct_behaviours(&model, 2, 100).unwrap();
    let mut first = Vec::new();
    write_behaviours(&mut first, &behaviours).unwrap();
    let mut second = Vec::new();
    write_behaviours(&mut second, &correct_behaviours(&model, 2, 100).unwrap()).unwrap();
    assert_eq!(first, second);
    assert_eq!(read_behaviours(first.as_slice()).unwrap(), behaviours);
    assert_eq!(String::from_utf8(first).unwrap().lines().count(), 21);
}
