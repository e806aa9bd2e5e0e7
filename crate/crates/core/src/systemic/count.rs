use std::collections::BTreeSet;

use crate::hierarchy::{DimId, Hierarchy, TypeId};

/// Number of complete classifications the hierarchy admits.
///
/// A classification is a consistent, upward-closed set of types in which
/// every required dimension has a chosen member. A dimension of a chosen
/// type is required, except that a dimension whose member list also appears
/// under other parents (a conjunctive entry) is required only when all of
/// those parents are chosen.
pub fn count_possibilities(h: &Hierarchy) -> u64 {
    let needs: Vec<Vec<TypeId>> = h
        .dims()
        .iter()
        .map(|d| {
            let members: BTreeSet<TypeId> = d.members.iter().copied().collect();
            h.dims()
                .iter()
                .filter(|e| e.members.iter().copied().collect::<BTreeSet<_>>() == members)
                .map(|e| e.parent)
                .collect()
        })
        .collect();
    let mut state = State { chosen: vec![false; h.type_count()], filled: vec![None; h.dims().len()] };
    state.add(h, h.root());
    search(h, &needs, &mut state)
}

#[derive(Clone)]
struct State {
    chosen: Vec<bool>,
    filled: Vec<Option<TypeId>>,
}

impl State {
    fn add(&mut self, h: &Hierarchy, t: TypeId) -> bool {
        for &x in h.closure_ids(t) {
            if self.chosen[x.0] {
                continue;
            }
            self.chosen[x.0] = true;
            for &(d, _) in h.parents_of(x) {
                match self.filled[d.0] {
                    Some(y) if y != x => return false,
                    _ => self.filled[d.0] = Some(x),
                }
            }
        }
        true
    }
}

fn search(h: &Hierarchy, needs: &[Vec<TypeId>], state: &mut State) -> u64 {
    let open = (0..h.dims().len())
        .find(|&d| state.filled[d].is_none() && needs[d].iter().all(|p| state.chosen[p.0]))
        .map(DimId);
    let Some(d) = open else { return 1 };
    let mut total = 0;
    for &m in &h.dimension(d).members {
        let mut next = state.clone();
        if next.add(h, m) {
            total += search(h, needs, &mut next);
        }
    }
    total
}
