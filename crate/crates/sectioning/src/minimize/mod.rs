//! Edge minimization over sectionings: the boolean constraint model with its
//! three objectives (edge count, extended-weighted edges, weighted edges plus
//! tabu penalties), a seeded local-search improver with swap / re-enroll
//! moves, an exhaustive oracle for small instances, and a neutral model
//! export for external exact solvers.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conflict_graph::{
    validate_sectioning_indexed, EdgeWeights, Sectioning,
};
use crate::error::Error;
use crate::instance::indexed::Indexed;
use crate::instance::Instance;
use crate::portfolio::run_portfolio;
use crate::Result;

mod brute;
mod export;
mod model;

pub use brute::brute_force_optimum;
pub use export::{export_model, import_solution, ExportFormat, ModelExport};
pub use model::{build_model, ModelSizes, ModelViolation, SectioningModel};

const EPS: f64 = 1e-9;

/// Which objective the minimizer optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveVariant {
    /// Plain number of SCG edges.
    Edges,
    /// Edges weighted by extended endpoints (a / b / c).
    Weighted,
    /// Weighted edges plus `d` per matched tabu assignment.
    WeightedTabu,
}

impl ObjectiveVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            ObjectiveVariant::Edges => "edges",
            ObjectiveVariant::Weighted => "weighted",
            ObjectiveVariant::WeightedTabu => "weighted-tabu",
        }
    }
}

/// (student, section) pairs a failed timetable asked the minimizer to avoid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TabuList {
    pairs: BTreeSet<(String, String)>,
}

impl TabuList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, String)>) -> Self {
        TabuList {
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, student: impl Into<String>, section: impl Into<String>) {
        self.pairs.insert((student.into(), section.into()));
    }

    pub fn contains(&self, student: &str, section: &str) -> bool {
        self.pairs
            .contains(&(student.to_string(), section.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(String, String)> {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Objective specification: variant, edge weights, and the tabu list
/// (required exactly for the weighted-tabu variant).
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    pub variant: ObjectiveVariant,
    pub weights: EdgeWeights,
    pub tabu: Option<TabuList>,
}

impl ObjectiveSpec {
    pub fn edges() -> Self {
        ObjectiveSpec {
            variant: ObjectiveVariant::Edges,
            weights: EdgeWeights::default(),
            tabu: None,
        }
    }

    pub fn weighted(weights: EdgeWeights) -> Self {
        ObjectiveSpec {
            variant: ObjectiveVariant::Weighted,
            weights,
            tabu: None,
        }
    }

    pub fn weighted_tabu(weights: EdgeWeights, tabu: TabuList) -> Self {
        ObjectiveSpec {
            variant: ObjectiveVariant::WeightedTabu,
            weights,
            tabu: Some(tabu),
        }
    }

    fn check(&self) -> Result<()> {
        if self.variant == ObjectiveVariant::WeightedTabu && self.tabu.is_none() {
            return Err(Error::Unsupported(
                "weighted-tabu objective needs a tabu list".into(),
            ));
        }
        if [self.weights.a, self.weights.b, self.weights.c, self.weights.d]
            .iter()
            .any(|w| *w < 0.0)
        {
            return Err(Error::Unsupported("edge weights must be nonnegative".into()));
        }
        Ok(())
    }

    /// Effective per-pair weights: the edges variant counts every edge as 1.
    pub(crate) fn effective_weights(&self) -> EdgeWeights {
        match self.variant {
            ObjectiveVariant::Edges => EdgeWeights {
                a: 1.0,
                b: 1.0,
                c: 1.0,
                d: 0.0,
            },
            _ => self.weights,
        }
    }
}

/// Evaluates the objective of a valid sectioning with the edge indicators
/// induced by its conflict graph.
pub fn objective_value(inst: &Instance, f: &Sectioning, obj: &ObjectiveSpec) -> Result<f64> {
    obj.check()?;
    let idx = Indexed::new(inst)?;
    let violations = validate_sectioning_indexed(&idx, f)?;
    if !violations.is_empty() {
        return Err(Error::InvalidSectioning(violations));
    }
    let dense = idx.to_dense(f)?;
    let state = SearchState::new(&idx, obj, dense)?;
    Ok(state.value)
}

/// Result of a local-search run.
#[derive(Debug, Clone)]
pub struct ImproveOutcome {
    pub sectioning: Sectioning,
    pub value: f64,
    /// (applied-move counter, objective) at each improvement of the best.
    pub log: Vec<(u64, f64)>,
}

/// Improves a sectioning by seeded local search over two move families —
/// same-course section swaps between two students and best re-enrollment of
/// one student in one course — both family-aware (children move with their
/// parents). Anytime: the best sectioning found within the budget is
/// returned, never worse or less valid than the start. Deterministic per
/// seed with one worker; with more workers the best over all workers wins.
pub fn improve(
    inst: &Instance,
    start: &Sectioning,
    obj: &ObjectiveSpec,
    budget: Duration,
    seed: u64,
    workers: usize,
) -> Result<ImproveOutcome> {
    obj.check()?;
    let idx = Indexed::new(inst)?;
    let violations = validate_sectioning_indexed(&idx, start)?;
    if !violations.is_empty() {
        return Err(Error::InvalidSectioning(violations));
    }
    let dense0 = idx.to_dense(start)?;

    let deadline = Instant::now() + budget;
    type WorkerOut = (f64, Vec<Vec<usize>>, Vec<(u64, f64)>);
    let run = |worker_seed: u64,
               shared: &crate::portfolio::SharedBest<Vec<Vec<usize>>>|
     -> Result<WorkerOut> {
        let mut search = SearchState::new(&idx, obj, dense0.clone())?;
        let mut rng = ChaCha8Rng::seed_from_u64(worker_seed);
        let mut best_value = search.value;
        let mut best = search.dense.clone();
        let mut log = vec![(0u64, best_value)];
        let mut stagnant = 0u32;
        const MAX_STAGNANT: u32 = 48;

        loop {
            // descend to a local optimum, walking plateaus between descents
            loop {
                let mut improved = search.sweep(&mut rng, deadline);
                if !improved && Instant::now() < deadline {
                    search.plateau_walk(&mut rng);
                    improved = search.sweep(&mut rng, deadline);
                }
                if search.value < best_value - EPS {
                    best_value = search.value;
                    best = search.dense.clone();
                    log.push((search.moves, best_value));
                    stagnant = 0;
                    shared.publish(best_value, &best);
                }
                if !improved || Instant::now() >= deadline {
                    break;
                }
            }
            stagnant += 1;
            if stagnant > MAX_STAGNANT || Instant::now() >= deadline {
                break;
            }
            // adopt a better portfolio solution if one appeared
            if let Some((v, d)) = shared.snapshot() {
                if v < best_value - EPS {
                    best_value = v;
                    best = d.clone();
                    log.push((search.moves, best_value));
                    stagnant = 0;
                }
            }
            // restart from the best, shaking harder the longer nothing moves
            search.reset_to(best.clone());
            search.kick(&mut rng, 2 + stagnant as usize);
        }
        Ok((best_value, best, log))
    };

    let (value, dense, log) = run_portfolio(workers, seed, run)?;
    debug_assert!({
        let check = SearchState::new(&idx, obj, dense.clone())?;
        (check.value - value).abs() < 1e-6
    });
    Ok(ImproveOutcome {
        sectioning: idx.to_sectioning(&dense),
        value,
        log,
    })
}

/// Incremental objective bookkeeping shared by the improver, the oracle and
/// `objective_value`. An edge is present when it is a base edge or at least
/// one student holds both endpoints; base edges contribute a constant.
pub(crate) struct SearchState<'a> {
    pub idx: &'a Indexed<'a>,
    pub dense: Vec<Vec<usize>>,
    pub load: Vec<u32>,
    /// shared-student count per section pair (key = lo * n + hi)
    cnt: HashMap<u64, u32>,
    base: HashSet<u64>,
    pub value: f64,
    weights: EdgeWeights,
    tabu: HashSet<(u32, u32)>,
    pub moves: u64,
    /// course -> every course in its family closure (parents and children),
    /// including itself; singleton for courses without family ties
    closure: Vec<Vec<usize>>,
}

impl<'a> SearchState<'a> {
    pub fn new(idx: &'a Indexed<'a>, obj: &ObjectiveSpec, dense: Vec<Vec<usize>>) -> Result<Self> {
        let weights = obj.effective_weights();
        let mut tabu = HashSet::new();
        if obj.variant == ObjectiveVariant::WeightedTabu {
            let list = obj.tabu.as_ref().expect("checked");
            for (g, s) in list.iter() {
                tabu.insert((
                    idx.student_index(g)? as u32,
                    idx.section_index(s)? as u32,
                ));
            }
        }

        let n = idx.n_sections() as u64;
        let mut base = HashSet::new();
        let base_graph = crate::conflict_graph::base_scg_indexed(idx);
        for ((a, b), _) in base_graph.edges() {
            base.insert(u64::from(a) * n + u64::from(b));
        }

        let mut closure: Vec<Vec<usize>> = (0..idx.course_id.len()).map(|c| vec![c]).collect();
        for (s, parent) in idx.sec_parent.iter().enumerate() {
            if let Some(p) = parent {
                let child_course = idx.sec_course[s];
                let parent_course = idx.sec_course[*p];
                if !closure[child_course].contains(&parent_course) {
                    closure[child_course].push(parent_course);
                }
                if !closure[parent_course].contains(&child_course) {
                    closure[parent_course].push(child_course);
                }
            }
        }
        for c in &mut closure {
            c.sort_unstable();
        }

        let mut state = SearchState {
            idx,
            dense,
            load: vec![0; idx.n_sections()],
            cnt: HashMap::new(),
            base,
            value: 0.0,
            weights,
            tabu,
            moves: 0,
            closure,
        };
        state.recompute();
        Ok(state)
    }

    /// State sized for the instance but with nothing enrolled; used by the
    /// enumeration oracle which fills it slot by slot.
    pub(crate) fn new_blank(idx: &'a Indexed<'a>, obj: &ObjectiveSpec) -> Result<Self> {
        let seed: Vec<Vec<usize>> = idx
            .stu_courses
            .iter()
            .map(|cs| cs.iter().map(|&c| idx.course_sections[c][0]).collect())
            .collect();
        let mut state = SearchState::new(idx, obj, seed)?;
        state.dense = idx
            .stu_courses
            .iter()
            .map(|cs| vec![usize::MAX; cs.len()])
            .collect();
        state.load = vec![0; idx.n_sections()];
        state.cnt.clear();
        let n = idx.n_sections() as u64;
        let mut value = 0.0;
        let base: BTreeSet<u64> = state.base.iter().copied().collect();
        for key in base {
            let (a, b) = ((key / n) as usize, (key % n) as usize);
            value += state.pair_weight(a, b);
        }
        state.value = value;
        Ok(state)
    }

    fn key(&self, a: usize, b: usize) -> u64 {
        let n = self.idx.n_sections() as u64;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        lo as u64 * n + hi as u64
    }

    /// Registers one more shared student on the pair, returning the weight
    /// gained when a new non-base edge appears.
    fn count_up(&mut self, a: usize, b: usize) -> f64 {
        let key = self.key(a, b);
        let c = self.cnt.entry(key).or_insert(0);
        *c += 1;
        if *c == 1 && !self.base.contains(&key) {
            self.pair_weight(a, b)
        } else {
            0.0
        }
    }

    /// Inverse of `count_up`.
    fn count_down(&mut self, a: usize, b: usize) -> f64 {
        let key = self.key(a, b);
        let c = self.cnt.get_mut(&key).expect("pair counted");
        *c -= 1;
        if *c == 0 {
            self.cnt.remove(&key);
            if !self.base.contains(&key) {
                return -self.pair_weight(a, b);
            }
        }
        0.0
    }

    /// Places a fresh enrollment (enumeration use) and returns the delta.
    pub(crate) fn enroll(&mut self, g: usize, slot: usize, s: usize) -> f64 {
        debug_assert_eq!(self.dense[g][slot], usize::MAX);
        let row = self.dense[g].clone();
        let mut delta = 0.0;
        for (i, &u) in row.iter().enumerate() {
            if i == slot || u == usize::MAX {
                continue;
            }
            delta += self.count_up(s, u);
        }
        self.load[s] += 1;
        if self.tabu.contains(&(g as u32, s as u32)) {
            delta += self.weights.d;
        }
        self.dense[g][slot] = s;
        self.value += delta;
        delta
    }

    /// Exact inverse of `enroll`: counts roll back and the value offset is
    /// removed with the remembered delta, so no float drift accumulates.
    pub(crate) fn unenroll(&mut self, g: usize, slot: usize, s: usize, delta: f64) {
        debug_assert_eq!(self.dense[g][slot], s);
        self.dense[g][slot] = usize::MAX;
        let row = self.dense[g].clone();
        for (i, &u) in row.iter().enumerate() {
            if i == slot || u == usize::MAX {
                continue;
            }
            self.count_down(s, u);
        }
        self.load[s] -= 1;
        self.value -= delta;
    }

    fn pair_weight(&self, a: usize, b: usize) -> f64 {
        self.idx.pair_weight(a, b, &self.weights)
    }

    /// Full deterministic recomputation of loads, pair counts and value.
    pub fn recompute(&mut self) {
        self.load = vec![0; self.idx.n_sections()];
        self.cnt.clear();
        for row in &self.dense {
            for (i, &a) in row.iter().enumerate() {
                for &b in &row[i + 1..] {
                    *self.cnt.entry(self.key(a, b)).or_insert(0) += 1;
                }
            }
            for &a in row {
                self.load[a] += 1;
            }
        }
        let n = self.idx.n_sections() as u64;
        let mut present: BTreeSet<u64> = self.base.iter().copied().collect();
        present.extend(self.cnt.keys().copied());
        let mut value = 0.0;
        for key in present {
            let (a, b) = ((key / n) as usize, (key % n) as usize);
            value += self.pair_weight(a, b);
        }
        value += self.weights.d * self.tabu_hits() as f64;
        self.value = value;
    }

    fn tabu_hits(&self) -> u64 {
        let mut hits = 0;
        for (g, row) in self.dense.iter().enumerate() {
            for &s in row {
                if self.tabu.contains(&(g as u32, s as u32)) {
                    hits += 1;
                }
            }
        }
        hits
    }

    /// Moves student `g`'s course slot to `new_s`, returning the objective
    /// delta. Capacity is the caller's concern.
    pub fn apply(&mut self, g: usize, slot: usize, new_s: usize) -> f64 {
        let old = self.dense[g][slot];
        if old == new_s {
            return 0.0;
        }
        let mut delta = 0.0;
        let row = self.dense[g].clone();
        for (i, &u) in row.iter().enumerate() {
            if i == slot {
                continue;
            }
            delta += self.count_down(old, u);
            delta += self.count_up(new_s, u);
        }
        self.load[old] -= 1;
        self.load[new_s] += 1;
        if self.tabu.contains(&(g as u32, old as u32)) {
            delta -= self.weights.d;
        }
        if self.tabu.contains(&(g as u32, new_s as u32)) {
            delta += self.weights.d;
        }
        self.dense[g][slot] = new_s;
        self.value += delta;
        self.moves += 1;
        delta
    }

    pub fn reset_to(&mut self, dense: Vec<Vec<usize>>) {
        self.dense = dense;
        self.recompute();
    }

    /// Family-aware unit of moves that re-enrolls (g, slot) into `target`:
    /// a child drags its parent, a parent drags each enrolled child to the
    /// matching sibling. Returns None when the unit is blocked (capacity, or
    /// no sibling exists).
    fn unit_for(&self, g: usize, slot: usize, target: usize) -> Option<Vec<(usize, usize)>> {
        let idx = self.idx;
        let old = self.dense[g][slot];
        if old == target || self.load[target] >= idx.sec_cap[target] {
            return None;
        }
        let mut unit = vec![(slot, target)];
        // child course: parent must follow
        if let Some(p) = idx.sec_parent[target] {
            let parent_course = idx.sec_course[p];
            let parent_slot = idx.course_slot(g, parent_course)?;
            if self.dense[g][parent_slot] != p {
                if self.load[p] >= idx.sec_cap[p] {
                    return None;
                }
                unit.push((parent_slot, p));
            }
        }
        // parent course: children enrolled under the old parent move to the
        // sibling under the new parent
        for cc in &self.closure[idx.sec_course[target]] {
            if *cc == idx.sec_course[target] {
                continue;
            }
            let child_slot = match idx.course_slot(g, *cc) {
                Some(k) => k,
                None => continue,
            };
            let child = self.dense[g][child_slot];
            if idx.sec_parent[child] != Some(old) {
                continue;
            }
            let sibling = idx.course_sections[*cc]
                .iter()
                .copied()
                .find(|&s| idx.sec_parent[s] == Some(target))?;
            if self.load[sibling] >= idx.sec_cap[sibling] {
                return None;
            }
            unit.push((child_slot, sibling));
        }
        Some(unit)
    }

    fn try_unit(&mut self, g: usize, unit: &[(usize, usize)]) -> f64 {
        let saved = self.value;
        let undo: Vec<(usize, usize)> = unit
            .iter()
            .map(|&(slot, _)| (slot, self.dense[g][slot]))
            .collect();
        for &(slot, s) in unit {
            self.apply(g, slot, s);
        }
        let delta = self.value - saved;
        for &(slot, s) in undo.iter().rev() {
            self.apply(g, slot, s);
        }
        self.value = saved;
        delta
    }

    fn commit_unit(&mut self, g: usize, unit: &[(usize, usize)]) {
        for &(slot, s) in unit {
            self.apply(g, slot, s);
        }
    }

    /// One pass of re-enroll moves plus same-course swaps. Returns whether
    /// any improving move was applied.
    pub fn sweep(&mut self, rng: &mut ChaCha8Rng, deadline: Instant) -> bool {
        let idx = self.idx;
        let mut improved = false;

        let mut students: Vec<usize> = (0..idx.n_students()).collect();
        students.shuffle(rng);
        for g in students {
            if Instant::now() >= deadline {
                return improved;
            }
            for slot in 0..self.dense[g].len() {
                let course = idx.stu_courses[g][slot];
                let mut best: Option<(f64, Vec<(usize, usize)>)> = None;
                for &target in &idx.course_sections[course] {
                    let unit = match self.unit_for(g, slot, target) {
                        Some(u) => u,
                        None => continue,
                    };
                    let delta = self.try_unit(g, &unit);
                    if delta < -EPS && best.as_ref().is_none_or(|(b, _)| delta < *b - EPS) {
                        best = Some((delta, unit));
                    }
                }
                if let Some((_, unit)) = best {
                    self.commit_unit(g, &unit);
                    improved = true;
                }
            }
        }

        // same-course swaps
        let mut courses: Vec<usize> = (0..idx.course_id.len()).collect();
        courses.shuffle(rng);
        for course in courses {
            if Instant::now() >= deadline {
                return improved;
            }
            let mut enrolled: Vec<(usize, usize)> = Vec::new(); // (student, slot)
            for g in 0..idx.n_students() {
                if let Some(slot) = idx.course_slot(g, course) {
                    enrolled.push((g, slot));
                }
            }
            let pairs: Vec<(usize, usize)> = if enrolled.len() <= 40 {
                (0..enrolled.len())
                    .flat_map(|i| ((i + 1)..enrolled.len()).map(move |j| (i, j)))
                    .collect()
            } else {
                (0..enrolled.len() * 6)
                    .map(|_| {
                        let i = rng.random_range(0..enrolled.len());
                        let j = rng.random_range(0..enrolled.len());
                        (i.min(j), i.max(j))
                    })
                    .filter(|(i, j)| i != j)
                    .collect()
            };
            for (i, j) in pairs {
                let (g, _) = enrolled[i];
                let (h, _) = enrolled[j];
                if let Some((ug, uh)) = self.swap_units(g, h, course) {
                    let saved = self.value;
                    let undo_g: Vec<(usize, usize)> =
                        ug.iter().map(|&(k, _)| (k, self.dense[g][k])).collect();
                    let undo_h: Vec<(usize, usize)> =
                        uh.iter().map(|&(k, _)| (k, self.dense[h][k])).collect();
                    for &(k, s) in &ug {
                        self.apply(g, k, s);
                    }
                    for &(k, s) in &uh {
                        self.apply(h, k, s);
                    }
                    if self.value < saved - EPS {
                        improved = true;
                    } else {
                        for &(k, s) in undo_h.iter().rev() {
                            self.apply(h, k, s);
                        }
                        for &(k, s) in undo_g.iter().rev() {
                            self.apply(g, k, s);
                        }
                        self.value = saved;
                    }
                }
            }
        }
        improved
    }

    /// Swap of the family closure of `course` between two students; valid
    /// only when both require exactly the closure courses, which keeps loads
    /// unchanged.
    #[allow(clippy::type_complexity)]
    fn swap_units(
        &self,
        g: usize,
        h: usize,
        course: usize,
    ) -> Option<(Vec<(usize, usize)>, Vec<(usize, usize)>)> {
        let idx = self.idx;
        let closure = &self.closure[course];
        let mut ug = Vec::with_capacity(closure.len());
        let mut uh = Vec::with_capacity(closure.len());
        let mut differs = false;
        for &c in closure {
            let kg = idx.course_slot(g, c)?;
            let kh = idx.course_slot(h, c)?;
            let (sg, sh) = (self.dense[g][kg], self.dense[h][kh]);
            if sg != sh {
                differs = true;
            }
            ug.push((kg, sh));
            uh.push((kh, sg));
        }
        if !differs {
            return None;
        }
        Some((ug, uh))
    }

    /// Sideways pass: random zero-delta re-enrollments that change the
    /// sectioning without changing the objective, opening new descents.
    pub fn plateau_walk(&mut self, rng: &mut ChaCha8Rng) {
        let idx = self.idx;
        if idx.n_students() == 0 {
            return;
        }
        let tries = (idx.n_students() * 2).max(16);
        for _ in 0..tries {
            let g = rng.random_range(0..idx.n_students());
            if self.dense[g].is_empty() {
                continue;
            }
            let slot = rng.random_range(0..self.dense[g].len());
            let course = idx.stu_courses[g][slot];
            let mut sideways: Vec<Vec<(usize, usize)>> = Vec::new();
            for &target in &idx.course_sections[course] {
                if let Some(unit) = self.unit_for(g, slot, target) {
                    let delta = self.try_unit(g, &unit);
                    if delta.abs() <= EPS {
                        sideways.push(unit);
                    }
                }
            }
            if let Some(unit) = sideways.choose(rng) {
                let unit = unit.clone();
                self.commit_unit(g, &unit);
            }
        }
    }

    /// Random perturbation: a few students get re-enrolled into random open
    /// alternatives regardless of the objective.
    pub fn kick(&mut self, rng: &mut ChaCha8Rng, strength: usize) {
        let idx = self.idx;
        if idx.n_students() == 0 {
            return;
        }
        let kicks = strength + rng.random_range(0..3);
        for _ in 0..kicks {
            let g = rng.random_range(0..idx.n_students());
            if self.dense[g].is_empty() {
                continue;
            }
            let slot = rng.random_range(0..self.dense[g].len());
            let course = idx.stu_courses[g][slot];
            let mut options: Vec<Vec<(usize, usize)>> = Vec::new();
            for &target in &idx.course_sections[course] {
                if let Some(unit) = self.unit_for(g, slot, target) {
                    options.push(unit);
                }
            }
            if let Some(unit) = options.choose(rng) {
                let unit = unit.clone();
                self.commit_unit(g, &unit);
            }
        }
    }
}
