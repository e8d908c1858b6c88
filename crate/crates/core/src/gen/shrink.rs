//! Greedy counterexample shrinking for command sequences.
//!
//! Two moves: drop one command, or halve one delay (floor, never below 1).
//! Deletions run to a fixpoint, then halvings, and the two alternate until
//! neither applies. The result is 1-minimal with respect to both moves.

use super::commands::CommandSequence;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShrinkError {
    #[error("the sequence to shrink does not fail")]
    NotFailing,
}

pub fn shrink_sequence(
    seq: &CommandSequence,
    mut fails: impl FnMut(&CommandSequence) -> bool,
) -> Result<CommandSequence, ShrinkError> {
    if !fails(seq) {
        return Err(ShrinkError::NotFailing);
    }
    let mut current = seq.clone();
    loop {
        let deleted = delete_pass(&mut current, &mut fails);
        let halved = halve_pass(&mut current, &mut fails);
        if !deleted && !halved {
            return Ok(current);
        }
    }
}

fn delete_pass(current: &mut CommandSequence, fails: &mut impl FnMut(&CommandSequence) -> bool) -> bool {
    let mut any = false;
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < current.commands.len() && current.commands.len() > 1 {
            let mut candidate = current.clone();
            candidate.commands.remove(i);
            if fails(&candidate) {
                *current = candidate;
                changed = true;
            } else {
                i += 1;
            }
        }
        any |= changed;
        if !changed {
            return any;
        }
    }
}

fn halve_pass(current: &mut CommandSequence, fails: &mut impl FnMut(&CommandSequence) -> bool) -> bool {
    let mut any = false;
    loop {
        let mut changed = false;
        for i in 0..current.commands.len() {
            while current.commands[i].delay > 1 {
                let mut candidate = current.clone();
                candidate.commands[i].delay /= 2;
                if !fails(&candidate) {
                    break;
                }
                *current = candidate;
                changed = true;
            }
        }
        any |= changed;
        if !changed {
            return any;
        }
    }
}

/// Every sequence one shrink move away from `seq`.
pub fn single_moves(seq: &CommandSequence) -> Vec<CommandSequence> {
    let mut out = Vec::new();
    if seq.len() > 1 {
        for i in 0..seq.len() {
            let mut c = seq.clone();
            c.commands.remove(i);
            out.push(c);
        }
    }
    for i in 0..seq.len() {
        if seq.commands[i].delay > 1 {
            let mut c = seq.clone();
            c.commands[i].delay /= 2;
            out.push(c);
        }
    }
    out
}
