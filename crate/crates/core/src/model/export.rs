//! Behaviour sets as JSON Lines: one `{"init", "actions", "states"}` record
//! per behaviour, in enumeration order.

use super::{Behaviour, State};
use serde::{Deserialize, Serialize};
use std::io::{self, BufRead, Write};

#[derive(Serialize, Deserialize)]
struct Record {
    init: State,
    actions: Vec<String>,
    states: Vec<State>,
}

pub fn write_behaviours<W: Write>(mut out: W, behaviours: &[Behaviour]) -> io::Result<()> {
    for b in behaviours {
        let record = Record { init: b.init().clone(), actions: b.actions.clone(), states: b.states.clone() };
        serde_json::to_writer(&mut out, &record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_behaviours<R: BufRead>(input: R) -> io::Result<Vec<Behaviour>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line)?;
        if record.states.first() != Some(&record.init) || record.states.len() != record.actions.len() + 1 {
            return Err(io::Error::new(io::ErrorKind::InvalidData, "inconsistent behaviour record"));
        }
        out.push(Behaviour { actions: record.actions, states: record.states });
    }
    Ok(out)
}
