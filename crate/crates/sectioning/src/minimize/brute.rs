//! Exhaustive sectioning oracle: depth-first enumeration over every
//! (student, course) choice with capacity and family pruning. Gated by a
//! limit on the raw choice product so it stays a test-scale tool.

use crate::conflict_graph::Sectioning;
use crate::error::Error;
use crate::instance::indexed::Indexed;
use crate::instance::Instance;
use crate::minimize::{ObjectiveSpec, SearchState};
use crate::Result;

/// Finds the global optimum of the objective by enumeration. Errors when the
/// product of per-(student, course) choice counts exceeds `limit`, reporting
/// the product.
pub fn brute_force_optimum(
    inst: &Instance,
    obj: &ObjectiveSpec,
    limit: u64,
) -> Result<(Sectioning, f64)> {
    let idx = Indexed::new(inst)?;

    let mut product: u128 = 1;
    for g in 0..idx.n_students() {
        for &c in &idx.stu_courses[g] {
            product = product.saturating_mul(idx.course_sections[c].len().max(1) as u128);
        }
    }
    if product > u128::from(limit) {
        return Err(Error::LimitExceeded { product, limit });
    }

    // per student, child courses come first so a child choice binds its
    // parent before the parent course is reached
    let orders: Vec<Vec<usize>> = (0..idx.n_students())
        .map(|g| {
            let mut slots: Vec<usize> = (0..idx.stu_courses[g].len()).collect();
            slots.sort_by_key(|&k| {
                let c = idx.stu_courses[g][k];
                (!idx.course_is_child[c], c)
            });
            slots
        })
        .collect();

    let mut walker = Walker {
        idx: &idx,
        state: SearchState::new_blank(&idx, obj)?,
        orders,
        best: None,
    };
    walker.walk(0, 0);

    match walker.best {
        Some((dense, value)) => Ok((idx.to_sectioning(&dense), value)),
        None => Err(Error::Unsupported(
            "no feasible sectioning exists within the capacities".into(),
        )),
    }
}

struct Walker<'a> {
    idx: &'a Indexed<'a>,
    state: SearchState<'a>,
    orders: Vec<Vec<usize>>,
    best: Option<(Vec<Vec<usize>>, f64)>,
}

impl<'a> Walker<'a> {
    fn walk(&mut self, g: usize, pos: usize) {
        if let Some((_, best)) = &self.best {
            // weights are nonnegative, so the partial value only grows
            if self.state.value >= *best - 1e-12 {
                return;
            }
        }
        if g == self.idx.n_students() {
            self.best = Some((self.state.dense.clone(), self.state.value));
            return;
        }
        if pos == self.orders[g].len() {
            self.walk(g + 1, 0);
            return;
        }
        let slot = self.orders[g][pos];
        let course = self.idx.stu_courses[g][slot];

        // a child chosen earlier may have bound this parent course already
        let candidates: Vec<usize> = match self.bound_parent(g, course) {
            Some(p) => vec![p],
            None => self.idx.course_sections[course].clone(),
        };
        for s in candidates {
            if self.state.load[s] >= self.idx.sec_cap[s] {
                continue;
            }
            // a child candidate must leave its parent reachable
            if let Some(p) = self.idx.sec_parent[s] {
                let parent_course = self.idx.sec_course[p];
                if self.idx.course_slot(g, parent_course).is_some() {
                    match self.assigned(g, parent_course) {
                        Some(held) if held != p => continue,
                        None if self.state.load[p] >= self.idx.sec_cap[p] => continue,
                        _ => {}
                    }
                }
            }
            let delta = self.state.enroll(g, slot, s);
            self.walk(g, pos + 1);
            self.state.unenroll(g, slot, s, delta);
        }
    }

    fn bound_parent(&self, g: usize, course: usize) -> Option<usize> {
        for &s in &self.state.dense[g] {
            if s == usize::MAX {
                continue;
            }
            if let Some(p) = self.idx.sec_parent[s] {
                if self.idx.sec_course[p] == course {
                    return Some(p);
                }
            }
        }
        None
    }

    fn assigned(&self, g: usize, course: usize) -> Option<usize> {
        let slot = self.idx.course_slot(g, course)?;
        match self.state.dense[g][slot] {
            usize::MAX => None,
            s => Some(s),
        }
    }
}
