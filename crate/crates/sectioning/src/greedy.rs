//! Greedy warm-start sectioning: students enroll one after another along a
//! chain of nearest requirement neighbors, copying every open section of
//! their predecessor before choosing fresh sections that add the fewest new
//! conflict-graph edges.

use std::collections::HashSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conflict_graph::{base_scg_indexed, Sectioning};
use crate::error::Error;
use crate::instance::indexed::Indexed;
use crate::instance::Instance;
use crate::Result;

/// Diagnostics of one greedy run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyTrace {
    /// Student ids in enrollment order (a permutation of all students).
    pub visit_order: Vec<String>,
    /// Per visited student: sections copied from the predecessor vs chosen
    /// fresh (parents pulled in by a fresh child count as fresh).
    pub per_student: Vec<(u32, u32)>,
    /// Edge count of the conflict graph after each student enrolled.
    pub running_edges: Vec<usize>,
}

/// Requirement distance |C_g1 Δ C_g2| between two students: the size of the
/// symmetric difference of their required course sets.
pub fn student_distance(inst: &Instance, g1: &str, g2: &str) -> Result<u32> {
    let idx = Indexed::new(inst)?;
    let a = idx.student_index(g1)?;
    let b = idx.student_index(g2)?;
    Ok(distance(&idx.stu_courses[a], &idx.stu_courses[b]))
}

fn distance(a: &[usize], b: &[usize]) -> u32 {
    // both sorted ascending
    let (mut i, mut j, mut diff) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                diff += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                diff += 1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    (diff + (a.len() - i) + (b.len() - j)) as u32
}

struct GreedyState<'a> {
    idx: &'a Indexed<'a>,
    dense: Vec<Vec<usize>>,
    load: Vec<u32>,
    edges: HashSet<u64>,
    edge_count: usize,
}

impl<'a> GreedyState<'a> {
    fn key(&self, a: usize, b: usize) -> u64 {
        let n = self.idx.n_sections() as u64;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        lo as u64 * n + hi as u64
    }

    fn held(&self, g: usize) -> impl Iterator<Item = usize> + '_ {
        self.dense[g].iter().copied().filter(|&s| s != usize::MAX)
    }

    fn open(&self, s: usize) -> bool {
        self.load[s] < self.idx.sec_cap[s]
    }

    /// New edges if `g` enrolled in all of `unit`, against the sections `g`
    /// already holds and the other members of the unit.
    fn unit_cost(&self, g: usize, unit: &[(usize, usize)]) -> u32 {
        let mut cost = 0;
        for (i, &(_, s)) in unit.iter().enumerate() {
            for u in self.held(g) {
                if !self.edges.contains(&self.key(s, u)) {
                    cost += 1;
                }
            }
            for &(_, t) in &unit[..i] {
                if !self.edges.contains(&self.key(s, t)) {
                    cost += 1;
                }
            }
        }
        cost
    }

    fn enroll_unit(&mut self, g: usize, unit: &[(usize, usize)]) {
        for &(slot, s) in unit {
            for u in self.held(g).collect::<Vec<_>>() {
                if self.edges.insert(self.key(s, u)) {
                    self.edge_count += 1;
                }
            }
            self.dense[g][slot] = s;
            self.load[s] += 1;
        }
    }

    /// Family-aware enrollment unit landing (g, slot) on `target`, on the
    /// partial schedule: a child drags an unheld-but-open parent, a parent
    /// already bound by an enrolled child admits only that parent.
    fn unit_for(&self, g: usize, slot: usize, target: usize) -> Option<Vec<(usize, usize)>> {
        let idx = self.idx;
        if !self.open(target) {
            return None;
        }
        let mut unit = vec![(slot, target)];
        if let Some(p) = idx.sec_parent[target] {
            let parent_course = idx.sec_course[p];
            if let Some(parent_slot) = idx.course_slot(g, parent_course) {
                match self.dense[g][parent_slot] {
                    held if held == p => {}
                    usize::MAX => {
                        if !self.open(p) {
                            return None;
                        }
                        unit.push((parent_slot, p));
                    }
                    _ => return None,
                }
            }
        }
        // target is a parent some enrolled child already pinned?
        for &s in &self.dense[g] {
            if s == usize::MAX {
                continue;
            }
            if let Some(p) = idx.sec_parent[s] {
                if idx.sec_course[p] == idx.sec_course[target] && p != target {
                    return None;
                }
            }
        }
        Some(unit)
    }
}

/// Runs the greedy chain. Deterministic per (instance, seed); the first
/// student and every tie are resolved by the seeded generator. The result
/// always passes sectioning validation; a course with no open family-legal
/// section left aborts with that course.
pub fn greedy_section(inst: &Instance, seed: u64) -> Result<(Sectioning, GreedyTrace)> {
    let idx = Indexed::new(inst)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let base = base_scg_indexed(&idx);
    let n = idx.n_sections() as u64;
    let mut state = GreedyState {
        idx: &idx,
        dense: idx
            .stu_courses
            .iter()
            .map(|cs| vec![usize::MAX; cs.len()])
            .collect(),
        load: vec![0; idx.n_sections()],
        edges: base
            .edges()
            .map(|((a, b), _)| u64::from(a) * n + u64::from(b))
            .collect(),
        edge_count: base.edge_count(),
    };

    let mut trace = GreedyTrace {
        visit_order: Vec::with_capacity(idx.n_students()),
        per_student: Vec::with_capacity(idx.n_students()),
        running_edges: Vec::with_capacity(idx.n_students()),
    };

    // fresh slots in child-first course order so children pin their parents
    let fresh_order: Vec<Vec<usize>> = (0..idx.n_students())
        .map(|g| {
            let mut slots: Vec<usize> = (0..idx.stu_courses[g].len()).collect();
            slots.sort_by_key(|&k| {
                let c = idx.stu_courses[g][k];
                (!idx.course_is_child[c], c)
            });
            slots
        })
        .collect();

    let mut unenrolled: Vec<usize> = (0..idx.n_students()).collect();
    let mut prev: Option<usize> = None;

    while !unenrolled.is_empty() {
        let h = match prev {
            None => {
                let pick = rng.random_range(0..unenrolled.len());
                unenrolled.swap_remove(pick)
            }
            Some(g) => {
                let best = unenrolled
                    .iter()
                    .map(|&h| distance(&idx.stu_courses[g], &idx.stu_courses[h]))
                    .min()
                    .expect("nonempty");
                let ties: Vec<usize> = (0..unenrolled.len())
                    .filter(|&k| {
                        distance(&idx.stu_courses[g], &idx.stu_courses[unenrolled[k]]) == best
                    })
                    .collect();
                let pick = *ties.choose(&mut rng).expect("ties nonempty");
                unenrolled.swap_remove(pick)
            }
        };

        let mut copied = 0u32;
        let mut fresh = 0u32;

        // copy every open shared section of the predecessor, parents first
        if let Some(g) = prev {
            let mut shared: Vec<usize> = state.held(g).collect();
            shared.sort_by_key(|&s| (idx.sec_parent[s].is_some(), s));
            for s in shared {
                let course = idx.sec_course[s];
                let slot = match idx.course_slot(h, course) {
                    Some(k) if state.dense[h][k] == usize::MAX => k,
                    _ => continue,
                };
                if !state.open(s) {
                    continue;
                }
                if let Some(p) = idx.sec_parent[s] {
                    // parent was sorted earlier; if it could not be copied
                    // the child is not open for h
                    let parent_slot = idx.course_slot(h, idx.sec_course[p]);
                    if parent_slot.map(|k| state.dense[h][k]) != Some(p) {
                        continue;
                    }
                }
                state.enroll_unit(h, &[(slot, s)]);
                copied += 1;
            }
        }

        // fresh choices: minimal new edges, then lowest load, then the seed
        for &slot in &fresh_order[h] {
            if state.dense[h][slot] != usize::MAX {
                continue;
            }
            let course = idx.stu_courses[h][slot];
            let mut all_units: Vec<Vec<(usize, usize)>> = Vec::new();
            let mut best: Option<(u32, u32)> = None; // (cost, load)
            let mut ties: Vec<Vec<(usize, usize)>> = Vec::new();
            for &target in &idx.course_sections[course] {
                let unit = match state.unit_for(h, slot, target) {
                    Some(u) => u,
                    None => continue,
                };
                let cost = state.unit_cost(h, &unit);
                let rank = (cost, state.load[target]);
                match best {
                    None => {
                        best = Some(rank);
                        ties = vec![unit.clone()];
                    }
                    Some(b) if rank < b => {
                        best = Some(rank);
                        ties = vec![unit.clone()];
                    }
                    Some(b) if rank == b => ties.push(unit.clone()),
                    _ => {}
                }
                all_units.push(unit);
            }
            if ties.is_empty() {
                return Err(Error::CourseFull(idx.course_id[course].to_string()));
            }
            // the chain seed enrolls uniformly at random, everyone after it
            // takes a minimal-cost section
            let pool = if prev.is_none() { &all_units } else { &ties };
            let unit = pool.choose(&mut rng).expect("nonempty").clone();
            fresh += unit.len() as u32;
            state.enroll_unit(h, &unit);
        }

        trace.visit_order.push(idx.students[h].id.clone());
        trace.per_student.push((copied, fresh));
        trace.running_edges.push(state.edge_count);
        prev = Some(h);
    }

    let f = idx.to_sectioning(&state.dense);
    debug_assert!(crate::conflict_graph::validate_sectioning_indexed(&idx, &f)?.is_empty());
    Ok((f, trace))
}
