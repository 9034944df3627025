//! Families of walks with a prescribed number of slots.
//!
//! Slot cubes are stacked along `e_2` with one lattice row between them. The
//! walk climbs the column just outside the cubes, dips into each cube at its
//! entry point and leaves it from the exit point.

use std::collections::BTreeSet;

use crate::error::{Result, SawError};
use crate::lattice::Step;
use crate::walk::Walk;

use super::{shell_of, PatternPair, PatternType, Shell};

fn steps(text: &str, dim: usize) -> Result<Vec<Step>> {
    Ok(Walk::parse(text, dim)?.steps().to_vec())
}

/// All shells built from `slots` stacked cubes, two lead-ins, two
/// connector shapes between cubes and a handful of tails.
pub fn stacked_shells(pp: &PatternPair, slots: usize) -> Result<Vec<Shell>> {
    let dim = pp.dim();
    let k = pp.cube_side as usize;
    let down = Step::new(1, -1)?;
    let leads = [vec![down], steps("+2,-1,-1", dim)?];
    let out = Step::new(1, 1)?;
    let rise = vec![Step::new(2, 1)?; k];
    let narrow = [vec![out], rise.clone(), vec![down]].concat();
    let wide = [vec![out, out], rise, vec![down, down]].concat();
    let connectors = [narrow, wide];
    let tails = ["", "+1", "+1,+1", "+1,+2", "+1,+2,+2", "+1,+1,+2"]
        .iter()
        .map(|t| steps(t, dim))
        .collect::<Result<Vec<_>>>()?;

    let mut shells = BTreeSet::new();
    for lead in &leads {
        for pick in 0..(1usize << slots.saturating_sub(1)) {
            for tail in &tails {
                let mut s = lead.clone();
                for slot in 0..slots {
                    if slot > 0 {
                        s.extend(&connectors[(pick >> (slot - 1)) & 1]);
                    }
                    s.extend(pp.chi_i.steps());
                }
                s.extend(tail);
                let w = Walk::from_steps(dim, s)?;
                if !w.is_self_avoiding() {
                    return Err(SawError::InvalidPatternPair(
                        "stacked embedding is not self-avoiding".into(),
                    ));
                }
                let shell = shell_of(&w, pp)?;
                if shell.slot_count() != slots {
                    return Err(SawError::InvalidPatternPair(format!(
                        "stacked embedding has {} slots, expected {slots}",
                        shell.slot_count()
                    )));
                }
                shells.insert(shell);
            }
        }
    }
    Ok(shells.into_iter().collect())
}

/// Every member of every shell in `shells`.
pub fn shell_members(pp: &PatternPair, shells: &[Shell]) -> Result<Vec<Walk>> {
    let mut out = Vec::new();
    for shell in shells {
        let s = shell.slot_count();
        for mask in 0..(1usize << s) {
            let types: Vec<PatternType> = (0..s)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        PatternType::II
                    } else {
                        PatternType::I
                    }
                })
                .collect();
            out.push(shell.realize(pp, &types)?);
        }
    }
    Ok(out)
}
