//! Seeded min-conflicts search over slot assignments. Extended sections move
//! as whole blocks between legal starts; non-extended sections move one
//! meeting at a time. Structural rules are kept hard by construction, the
//! soft terms drive the objective.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conflict_graph::ConflictGraph;
use crate::error::Error;
use crate::instance::indexed::Indexed;
use crate::instance::Instance;
use crate::portfolio::run_portfolio;
use crate::timetable::{check_structure, score_indexed, ConflictReport, SoftWeights, Timetable};
use crate::Result;

const EPS: f64 = 1e-9;

/// Per-phase time budgets of [`phased_solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseBudgets {
    pub phase_a: Duration,
    pub phase_b: Duration,
}

impl PhaseBudgets {
    /// Splits one budget evenly over both phases.
    pub fn even(total: Duration) -> Self {
        PhaseBudgets {
            phase_a: total / 2,
            phase_b: total / 2,
        }
    }
}

/// Solves the timetable for `restrict` (all sections when absent). Sections
/// placed by `warm` are fixed hard, slot for slot. Anytime and deterministic
/// per seed with one worker; the reported objective is the score of the
/// returned timetable.
#[allow(clippy::too_many_arguments)]
pub fn solve(
    inst: &Instance,
    g: &ConflictGraph,
    w: &SoftWeights,
    restrict: Option<&[String]>,
    warm: Option<&Timetable>,
    budget: Duration,
    seed: u64,
    workers: usize,
) -> Result<(Timetable, ConflictReport)> {
    let idx = Indexed::new(inst)?;

    let scope: Vec<usize> = match restrict {
        Some(ids) => {
            let mut v = ids
                .iter()
                .map(|id| idx.section_index(id))
                .collect::<Result<Vec<_>>>()?;
            v.sort_unstable();
            v.dedup();
            v
        }
        None => (0..idx.n_sections()).collect(),
    };

    let mut fixed: HashMap<usize, Vec<(u32, u32)>> = HashMap::new();
    if let Some(warm) = warm {
        check_structure(&idx, warm)?;
        for (sec_id, slots) in warm.iter_slots() {
            let s = idx.section_index(sec_id)?;
            if scope.binary_search(&s).is_ok() {
                fixed.insert(s, slots.to_vec());
            }
        }
    }

    for &s in &scope {
        if idx.sec_ext[s] && idx.inst.grid.block_starts(idx.sec_meet[s]).is_empty() {
            return Err(Error::NoLegalStart(idx.sec_id[s].to_string()));
        }
    }

    let deadline = Instant::now() + budget;
    type WorkerOut = (f64, Vec<Vec<(u32, u32)>>, ());
    let run = |worker_seed: u64,
               shared: &crate::portfolio::SharedBest<Vec<Vec<(u32, u32)>>>|
     -> Result<WorkerOut> {
        let mut rng = ChaCha8Rng::seed_from_u64(worker_seed);
        let mut state = TtState::init(&idx, g, w, &scope, &fixed, &mut rng);
        let mut best_value = state.value;
        let mut best = state.placements();
        shared.publish(best_value, &best);
        let mut stagnant_restarts = 0u32;
        const MAX_STAGNANT_RESTARTS: u32 = 5;

        'outer: while best_value > EPS
            && stagnant_restarts <= MAX_STAGNANT_RESTARTS
            && Instant::now() < deadline
        {
            let mut since_improvement = 0u64;
            let stall_limit = 400 + 40 * state.movable.len() as u64;
            loop {
                if state.value <= EPS {
                    best_value = state.value;
                    best = state.placements();
                    break 'outer;
                }
                if since_improvement >= stall_limit || Instant::now() >= deadline {
                    break;
                }
                state.step(&mut rng);
                if state.value < best_value - EPS {
                    best_value = state.value;
                    best = state.placements();
                    stagnant_restarts = 0;
                    since_improvement = 0;
                    shared.publish(best_value, &best);
                } else {
                    since_improvement += 1;
                }
            }
            stagnant_restarts += 1;
            if let Some((v, p)) = shared.snapshot() {
                if v < best_value - EPS {
                    best_value = v;
                    best = p;
                    stagnant_restarts = 0;
                }
            }
            state.restore(&best);
            state.kick(&mut rng);
        }
        Ok((best_value, best, ()))
    };

    let (internal, placements, ()) = run_portfolio(workers, seed, run)?;

    let mut tt = Timetable::new();
    for (k, &s) in scope.iter().enumerate() {
        tt.set_slots(idx.sec_id[s].to_string(), placements[k].clone());
    }
    let report = score_indexed(&idx, g, &tt, w)?;
    debug_assert!(
        (report.total - internal).abs() < 1e-5,
        "incremental objective {} drifted from the score {}",
        internal,
        report.total
    );
    Ok((tt, report))
}

/// Two-phase strategy: phase A timetables the extended sections plus the
/// common section, phase B timetables everything with the phase-A placements
/// fixed hard, and phase C assigns concrete rooms. The report comes from the
/// final timetable.
pub fn phased_solve(
    inst: &Instance,
    g: &ConflictGraph,
    w: &SoftWeights,
    budgets: PhaseBudgets,
    seed: u64,
    workers: usize,
) -> Result<(Timetable, ConflictReport)> {
    let mut anchor_ids: Vec<String> = inst
        .sections
        .iter()
        .filter(|s| s.is_extended)
        .map(|s| s.id.clone())
        .collect();
    if let Some(common) = &inst.common_section_id {
        if !anchor_ids.contains(common) {
            anchor_ids.push(common.clone());
        }
    }
    anchor_ids.sort();

    let warm = if anchor_ids.is_empty() {
        None
    } else {
        let (tt_a, _) = solve(
            inst,
            g,
            w,
            Some(&anchor_ids),
            None,
            budgets.phase_a,
            seed,
            workers,
        )?;
        Some(tt_a)
    };

    let (tt_b, _) = solve(
        inst,
        g,
        w,
        None,
        warm.as_ref(),
        budgets.phase_b,
        seed.wrapping_add(1),
        workers,
    )?;

    let (tt_final, _overflow) = super::assign_rooms(inst, &tt_b)?;
    let report = crate::timetable::score(inst, g, &tt_final, w)?;
    Ok((tt_final, report))
}

struct TtState<'a> {
    idx: &'a Indexed<'a>,
    weights: SoftWeights,
    scope: Vec<usize>,
    /// scope positions that may move
    movable: Vec<usize>,
    /// per scope position: current slots (sorted)
    slots: Vec<Vec<(u32, u32)>>,
    /// per scope position: (other scope position, clash weight)
    adj: Vec<Vec<(usize, f64)>>,
    /// demand per (day, period, room type)
    demand: Vec<u32>,
    n_rt: usize,
    /// meetings per (professor, day)
    prof_day: Vec<u32>,
    value: f64,
    teaching: Vec<(u32, u32)>,
    conflicted: Vec<usize>,
    steps_since_scan: u32,
    steps: u64,
}

impl<'a> TtState<'a> {
    fn init(
        idx: &'a Indexed<'a>,
        g: &ConflictGraph,
        w: &SoftWeights,
        scope: &[usize],
        fixed: &HashMap<usize, Vec<(u32, u32)>>,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let pos: HashMap<usize, usize> = scope.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); scope.len()];
        for ((a, b), _) in g.edges() {
            let (a, b) = (a as usize, b as usize);
            if let (Some(&ka), Some(&kb)) = (pos.get(&a), pos.get(&b)) {
                let mult = if idx.common == Some(a) || idx.common == Some(b) {
                    w.common_multiplier
                } else {
                    1.0
                };
                adj[ka].push((kb, w.clash * mult));
                adj[kb].push((ka, w.clash * mult));
            }
        }

        let teaching = idx.inst.grid.teaching_slots();
        let mut state = TtState {
            idx,
            weights: *w,
            scope: scope.to_vec(),
            movable: (0..scope.len())
                .filter(|k| !fixed.contains_key(&scope[*k]))
                .collect(),
            slots: vec![Vec::new(); scope.len()],
            adj,
            demand: vec![
                0;
                (idx.inst.grid.days * idx.inst.grid.periods_per_day) as usize
                    * idx.rt_id.len()
            ],
            n_rt: idx.rt_id.len(),
            prof_day: vec![0; idx.prof_id.len() * idx.inst.grid.days as usize],
            value: 0.0,
            teaching,
            conflicted: Vec::new(),
            steps_since_scan: 0,
            steps: 0,
        };

        for (k, &s) in scope.iter().enumerate() {
            let slots = match fixed.get(&s) {
                Some(sl) => sl.clone(),
                None => state.random_placement(s, rng),
            };
            state.insert(k, slots);
        }
        state.value = state.full_value();
        state.rescan();
        state
    }

    fn random_placement(&self, s: usize, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
        let grid = &self.idx.inst.grid;
        if self.idx.sec_ext[s] {
            let starts = grid.block_starts(self.idx.sec_meet[s]);
            let d = rng.random_range(0..grid.days);
            let t = *starts.choose(rng).expect("legal start checked");
            (t..t + self.idx.sec_meet[s]).map(|p| (d, p)).collect()
        } else {
            let mut pool = self.teaching.clone();
            pool.shuffle(rng);
            let mut picked: Vec<(u32, u32)> =
                pool.into_iter().take(self.idx.sec_meet[s] as usize).collect();
            picked.sort_unstable();
            picked
        }
    }

    fn demand_key(&self, d: u32, t: u32, rt: usize) -> usize {
        ((d * self.idx.inst.grid.periods_per_day + t) as usize) * self.n_rt + rt
    }

    fn supply(&self, rt: usize) -> u32 {
        self.idx.rt_room_ids[rt].len() as u32
    }

    /// Inserts placement bookkeeping for scope position k (no value update).
    fn insert_raw(&mut self, k: usize, slots: &[(u32, u32)]) {
        let s = self.scope[k];
        let rt = self.idx.sec_rt[s];
        let p = self.idx.sec_prof[s];
        let days = self.idx.inst.grid.days as usize;
        for &(d, t) in slots {
            let key = self.demand_key(d, t, rt);
            self.demand[key] += 1;
            self.prof_day[p * days + d as usize] += 1;
        }
        self.slots[k] = slots.to_vec();
    }

    fn remove_raw(&mut self, k: usize) -> Vec<(u32, u32)> {
        let s = self.scope[k];
        let rt = self.idx.sec_rt[s];
        let p = self.idx.sec_prof[s];
        let days = self.idx.inst.grid.days as usize;
        let old = std::mem::take(&mut self.slots[k]);
        for &(d, t) in &old {
            let key = self.demand_key(d, t, rt);
            self.demand[key] -= 1;
            self.prof_day[p * days + d as usize] -= 1;
        }
        old
    }

    fn insert(&mut self, k: usize, mut slots: Vec<(u32, u32)>) {
        slots.sort_unstable();
        self.insert_raw(k, &slots);
    }

    /// Marginal cost of placing scope position k at `slots`, with k
    /// currently removed from the bookkeeping.
    fn add_cost(&self, k: usize, slots: &[(u32, u32)]) -> f64 {
        let s = self.scope[k];
        let mut cost = 0.0;
        for &(nbr, w) in &self.adj[k] {
            for &(d, t) in slots {
                if self.slots[nbr].contains(&(d, t)) {
                    cost += w;
                }
            }
        }
        let rt = self.idx.sec_rt[s];
        let supply = self.supply(rt);
        for &(d, t) in slots {
            if self.demand[self.demand_key(d, t, rt)] == supply {
                cost += self.weights.room_overflow;
            }
        }
        if !self.idx.sec_ext[s] {
            let mut per_day: std::collections::BTreeMap<u32, u32> = std::collections::BTreeMap::new();
            for &(d, _) in slots {
                *per_day.entry(d).or_insert(0) += 1;
            }
            for (_, n) in per_day {
                if n > 1 {
                    cost += self.weights.double_meeting * f64::from(n - 1);
                }
            }
        }
        let p = self.idx.sec_prof[s];
        let before = self.prof_penalized(p, &[]);
        let after = self.prof_penalized(p, slots);
        cost += (f64::from(u8::from(after)) - f64::from(u8::from(before)))
            * self.weights.prof_day_off;
        cost
    }

    /// Day-off indicator for professor p with `extra` meetings added on top
    /// of the current counts.
    fn prof_penalized(&self, p: usize, extra: &[(u32, u32)]) -> bool {
        let days = self.idx.inst.grid.days;
        if days <= 1 {
            return false;
        }
        let teaches = |d: u32| {
            self.prof_day[p * days as usize + d as usize] > 0
                || extra.iter().any(|&(ed, _)| ed == d)
        };
        let any_teaching = (0..days).any(teaches);
        if !any_teaching {
            return false;
        }
        match self.idx.prof_day_off[p] {
            Some(requested) => teaches(requested),
            None => (0..days).all(teaches),
        }
    }

    fn full_value(&self) -> f64 {
        let mut total = 0.0;
        for (k, slots) in self.slots.iter().enumerate() {
            for &(nbr, w) in &self.adj[k] {
                if nbr < k {
                    continue; // each edge once
                }
                for &(d, t) in slots {
                    if self.slots[nbr].contains(&(d, t)) {
                        total += w;
                    }
                }
            }
        }
        for d in 0..self.idx.inst.grid.days {
            for t in 0..self.idx.inst.grid.periods_per_day {
                for rt in 0..self.n_rt {
                    if self.demand[self.demand_key(d, t, rt)] > self.supply(rt) {
                        total += self.weights.room_overflow;
                    }
                }
            }
        }
        for (k, slots) in self.slots.iter().enumerate() {
            let s = self.scope[k];
            if self.idx.sec_ext[s] {
                continue;
            }
            let mut per_day: std::collections::BTreeMap<u32, u32> = std::collections::BTreeMap::new();
            for &(d, _) in slots {
                *per_day.entry(d).or_insert(0) += 1;
            }
            for (_, n) in per_day {
                if n > 1 {
                    total += self.weights.double_meeting * f64::from(n - 1);
                }
            }
        }
        for p in 0..self.idx.prof_id.len() {
            if self.prof_penalized(p, &[]) {
                total += self.weights.prof_day_off;
            }
        }
        total
    }

    fn placements(&self) -> Vec<Vec<(u32, u32)>> {
        self.slots.clone()
    }

    fn restore(&mut self, placements: &[Vec<(u32, u32)>]) {
        for k in 0..self.scope.len() {
            self.remove_raw(k);
        }
        for (k, slots) in placements.iter().enumerate() {
            self.insert_raw(k, slots);
        }
        self.value = self.full_value();
        self.rescan();
    }

    /// Candidate placements of scope position k (current placement removed).
    fn candidates(&self, k: usize, rng: &mut ChaCha8Rng, current: &[(u32, u32)]) -> Vec<Vec<(u32, u32)>> {
        let s = self.scope[k];
        let grid = &self.idx.inst.grid;
        let mut out = Vec::new();
        if self.idx.sec_ext[s] {
            let len = self.idx.sec_meet[s];
            for d in 0..grid.days {
                for t in grid.block_starts(len) {
                    let block: Vec<(u32, u32)> = (t..t + len).map(|p| (d, p)).collect();
                    if block != current {
                        out.push(block);
                    }
                }
            }
        } else {
            // move one meeting somewhere else
            for i in 0..current.len() {
                for &(d, t) in &self.teaching {
                    if current.contains(&(d, t)) {
                        continue;
                    }
                    let mut next = current.to_vec();
                    next[i] = (d, t);
                    next.sort_unstable();
                    out.push(next);
                }
            }
        }
        // a bounded, seeded sample keeps steps cheap on wide grids
        if out.len() > 48 {
            out.shuffle(rng);
            out.truncate(48);
        }
        out
    }

    fn rescan(&mut self) {
        self.conflicted.clear();
        let mut is_movable = vec![false; self.scope.len()];
        for &k in &self.movable {
            is_movable[k] = true;
        }
        let mut seen = vec![false; self.scope.len()];
        for (k, slots) in self.slots.iter().enumerate() {
            if !is_movable[k] {
                continue;
            }
            let s = self.scope[k];
            let mut bad = false;
            for &(nbr, _) in &self.adj[k] {
                if bad {
                    break;
                }
                for &(d, t) in slots {
                    if self.slots[nbr].contains(&(d, t)) {
                        bad = true;
                        break;
                    }
                }
            }
            let rt = self.idx.sec_rt[s];
            if !bad {
                bad = slots
                    .iter()
                    .any(|&(d, t)| self.demand[self.demand_key(d, t, rt)] > self.supply(rt));
            }
            if !bad && !self.idx.sec_ext[s] {
                let mut per_day: std::collections::BTreeMap<u32, u32> = std::collections::BTreeMap::new();
                for &(d, _) in slots {
                    *per_day.entry(d).or_insert(0) += 1;
                }
                bad = per_day.values().any(|&n| n > 1);
            }
            if !bad {
                bad = self.prof_penalized(self.idx.sec_prof[s], &[]);
            }
            if bad && !seen[k] {
                seen[k] = true;
                self.conflicted.push(k);
            }
        }
        self.steps_since_scan = 0;
    }

    fn step(&mut self, rng: &mut ChaCha8Rng) {
        self.steps += 1;
        self.steps_since_scan += 1;
        if self.steps.is_multiple_of(1024) {
            // resync the incremental value so float drift never accumulates
            self.value = self.full_value();
        }
        if self.steps_since_scan >= 24 || self.conflicted.is_empty() {
            self.rescan();
        }
        if self.movable.is_empty() {
            return;
        }
        let k = if !self.conflicted.is_empty() && rng.random_bool(0.85) {
            *self.conflicted.choose(rng).expect("nonempty")
        } else {
            *self.movable.choose(rng).expect("nonempty")
        };

        let current = self.remove_raw(k);
        let removed_cost = self.add_cost(k, &current);
        let candidates = self.candidates(k, rng, &current);
        if candidates.is_empty() {
            self.insert_raw(k, &current);
            return;
        }

        let mut best_cost = f64::INFINITY;
        let mut best: Vec<usize> = Vec::new();
        for (i, cand) in candidates.iter().enumerate() {
            let cost = self.add_cost(k, cand);
            if cost < best_cost - EPS {
                best_cost = cost;
                best = vec![i];
            } else if (cost - best_cost).abs() <= EPS {
                best.push(i);
            }
        }
        let pick = *best.choose(rng).expect("candidates nonempty");

        // strictly better, a noise move, or a coin-flipped sideways move
        let accept = best_cost < removed_cost - EPS
            || rng.random_bool(0.10)
            || ((best_cost - removed_cost).abs() <= EPS && rng.random_bool(0.5));

        if accept {
            let chosen = candidates[pick].clone();
            self.insert_raw(k, &chosen);
            self.value += best_cost - removed_cost;
        } else {
            self.insert_raw(k, &current);
        }
    }

    fn kick(&mut self, rng: &mut ChaCha8Rng) {
        if self.movable.is_empty() {
            return;
        }
        let kicks = 1 + self.movable.len() / 5;
        for _ in 0..kicks {
            let k = *self.movable.choose(rng).expect("nonempty");
            let s = self.scope[k];
            self.remove_raw(k);
            let slots = self.random_placement(s, rng);
            self.insert_raw(k, &slots);
        }
        self.value = self.full_value();
        self.rescan();
    }
}
