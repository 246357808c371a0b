//! Period-grid timetabling on top of the conflict graph: soft-constraint
//! scoring, a seeded min-conflicts solver with a two-phase strategy
//! (extended + common sections first), room assignment, and extraction of
//! tabu (student, section) pairs from clashes.
//!
//! Structural rules — exact meeting counts, no lunch usage, extended blocks
//! contiguous on one day — are hard: they are never penalized, a timetable
//! breaking them is rejected outright.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::conflict_graph::{ConflictGraph, Sectioning};
use crate::error::Error;
use crate::instance::indexed::Indexed;
use crate::instance::Instance;
use crate::minimize::TabuList;
use crate::Result;

mod rooms;
mod solve;

pub use rooms::{assign_rooms, overflow_lower_bound};
pub use solve::{phased_solve, solve, PhaseBudgets};

/// Weights of the soft constraints in the timetable objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SoftWeights {
    /// Per conflicting pair per shared slot.
    pub clash: f64,
    /// Factor applied to clashes involving the common section.
    pub common_multiplier: f64,
    /// Per (day, period, room type) whose demand exceeds its room supply.
    pub room_overflow: f64,
    /// Per extra same-day meeting of a non-extended section.
    pub double_meeting: f64,
    /// Per professor without a teaching-free day.
    pub prof_day_off: f64,
}

impl Default for SoftWeights {
    fn default() -> Self {
        SoftWeights {
            clash: 1000.0,
            common_multiplier: 10.0,
            room_overflow: 100.0,
            double_meeting: 10.0,
            prof_day_off: 1.0,
        }
    }
}

/// Slot assignment for a set of sections, with optional per-meeting rooms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Timetable {
    slots: BTreeMap<String, Vec<(u32, u32)>>,
    rooms: BTreeMap<(String, u32, u32), String>,
}

impl Timetable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Replaces the meeting slots of a section (kept sorted).
    pub fn set_slots(&mut self, section: impl Into<String>, mut slots: Vec<(u32, u32)>) {
        slots.sort_unstable();
        self.slots.insert(section.into(), slots);
    }

    pub fn slots(&self, section: &str) -> Option<&[(u32, u32)]> {
        self.slots.get(section).map(|v| v.as_slice())
    }

    pub fn sections(&self) -> impl Iterator<Item = &str> {
        self.slots.keys().map(|s| s.as_str())
    }

    pub fn iter_slots(&self) -> impl Iterator<Item = (&str, &[(u32, u32)])> {
        self.slots.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn set_room(
        &mut self,
        section: impl Into<String>,
        day: u32,
        period: u32,
        room: impl Into<String>,
    ) {
        self.rooms
            .insert((section.into(), day, period), room.into());
    }

    pub fn room(&self, section: &str, day: u32, period: u32) -> Option<&str> {
        self.rooms
            .get(&(section.to_string(), day, period))
            .map(|r| r.as_str())
    }

    pub fn iter_rooms(&self) -> impl Iterator<Item = (&(String, u32, u32), &String)> {
        self.rooms.iter()
    }

    pub fn has_rooms(&self) -> bool {
        !self.rooms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }
}

/// One clash: a conflicting pair meeting in the same slot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClashWitness {
    pub s1: String,
    pub s2: String,
    pub day: u32,
    pub period: u32,
}

/// Soft-constraint account of a timetable; recomputable from
/// (instance, graph, timetable) alone.
#[derive(Debug, Clone, PartialEq)]
pub struct ConflictReport {
    pub clash_total: f64,
    pub room_total: f64,
    pub double_meeting_total: f64,
    pub day_off_total: f64,
    pub total: f64,
    pub witnesses: Vec<ClashWitness>,
}

impl ConflictReport {
    pub fn clash_count(&self) -> usize {
        self.witnesses.len()
    }

    pub fn zero() -> Self {
        ConflictReport {
            clash_total: 0.0,
            room_total: 0.0,
            double_meeting_total: 0.0,
            day_off_total: 0.0,
            total: 0.0,
            witnesses: Vec::new(),
        }
    }
}

/// All (day, period) starts from which the whole block of an extended
/// section fits: the block stays inside the day, never touches lunch, and
/// four-period blocks sit before lunch when a lunch period exists.
pub fn legal_starts(inst: &Instance, section_id: &str) -> Result<BTreeSet<(u32, u32)>> {
    let s = inst.section(section_id).ok_or_else(|| Error::Reference {
        what: "section",
        id: section_id.to_string(),
    })?;
    if !s.is_extended {
        return Err(Error::NotExtended(section_id.to_string()));
    }
    let starts = inst.grid.block_starts(s.meetings_per_week);
    Ok((0..inst.grid.days)
        .flat_map(|d| starts.iter().map(move |&t| (d, t)))
        .collect())
}

pub(crate) fn check_structure(idx: &Indexed, tt: &Timetable) -> Result<()> {
    let grid = &idx.inst.grid;
    for (sec_id, slots) in tt.iter_slots() {
        let s = idx.section_index(sec_id)?;
        if slots.len() != idx.sec_meet[s] as usize {
            return Err(Error::Structural {
                rule: "meeting-count",
                section: sec_id.to_string(),
            });
        }
        for win in slots.windows(2) {
            if win[0] == win[1] {
                return Err(Error::Structural {
                    rule: "duplicate-slot",
                    section: sec_id.to_string(),
                });
            }
        }
        for &(d, t) in slots {
            if d >= grid.days || t >= grid.periods_per_day {
                return Err(Error::Structural {
                    rule: "slot-range",
                    section: sec_id.to_string(),
                });
            }
            if Some(t) == grid.lunch_period {
                return Err(Error::Structural {
                    rule: "lunch",
                    section: sec_id.to_string(),
                });
            }
        }
        if idx.sec_ext[s] {
            let day = slots[0].0;
            let contiguous = slots.iter().all(|&(d, _)| d == day)
                && slots.windows(2).all(|w| w[1].1 == w[0].1 + 1);
            if !contiguous {
                return Err(Error::Structural {
                    rule: "contiguity",
                    section: sec_id.to_string(),
                });
            }
        }
    }
    for ((sec_id, d, t), room) in tt.iter_rooms() {
        let s = idx.section_index(sec_id)?;
        let rt = idx.sec_rt[s];
        if !idx.rt_room_ids[rt].iter().any(|r| r == room) {
            return Err(Error::Structural {
                rule: "room-type",
                section: sec_id.to_string(),
            });
        }
        match tt.slots(sec_id) {
            Some(slots) if slots.contains(&(*d, *t)) => {}
            _ => {
                return Err(Error::Structural {
                    rule: "room-slot",
                    section: sec_id.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Scores a structurally valid timetable: clashes per conflicting pair per
/// shared slot (10× with the common section), one room-overflow indicator
/// per oversubscribed (day, period, room type), extra same-day meetings of
/// non-extended sections, and professors without a teaching-free day (the
/// requested day when one is set).
pub fn score(
    inst: &Instance,
    g: &ConflictGraph,
    tt: &Timetable,
    w: &SoftWeights,
) -> Result<ConflictReport> {
    let idx = Indexed::new(inst)?;
    score_indexed(&idx, g, tt, w)
}

pub(crate) fn score_indexed(
    idx: &Indexed,
    g: &ConflictGraph,
    tt: &Timetable,
    w: &SoftWeights,
) -> Result<ConflictReport> {
    check_structure(idx, tt)?;
    let placed: BTreeMap<usize, &[(u32, u32)]> = tt
        .iter_slots()
        .map(|(id, slots)| Ok((idx.section_index(id)?, slots)))
        .collect::<Result<_>>()?;

    let mut report = ConflictReport::zero();

    for ((a, b), _) in g.edges() {
        let (a, b) = (a as usize, b as usize);
        let (sa, sb) = match (placed.get(&a), placed.get(&b)) {
            (Some(sa), Some(sb)) => (sa, sb),
            _ => continue,
        };
        let mult = if idx.common == Some(a) || idx.common == Some(b) {
            w.common_multiplier
        } else {
            1.0
        };
        for &(d, t) in sa.iter() {
            if sb.contains(&(d, t)) {
                report.clash_total += w.clash * mult;
                report.witnesses.push(ClashWitness {
                    s1: idx.sec_id[a].to_string(),
                    s2: idx.sec_id[b].to_string(),
                    day: d,
                    period: t,
                });
            }
        }
    }

    let mut demand: BTreeMap<(u32, u32, usize), u32> = BTreeMap::new();
    for (&s, slots) in placed.iter() {
        for &(d, t) in slots.iter() {
            *demand.entry((d, t, idx.sec_rt[s])).or_insert(0) += 1;
        }
    }
    for (&(_, _, rt), &n) in demand.iter() {
        if n > idx.rt_room_ids[rt].len() as u32 {
            report.room_total += w.room_overflow;
        }
    }

    for (&s, slots) in placed.iter() {
        if idx.sec_ext[s] {
            continue;
        }
        let mut per_day: BTreeMap<u32, u32> = BTreeMap::new();
        for &(d, _) in slots.iter() {
            *per_day.entry(d).or_insert(0) += 1;
        }
        for (_, n) in per_day {
            if n > 1 {
                report.double_meeting_total += w.double_meeting * f64::from(n - 1);
            }
        }
    }

    // a single-day grid has no day off to protect
    if idx.inst.grid.days > 1 {
        let mut prof_days: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); idx.prof_id.len()];
        for (&s, slots) in placed.iter() {
            for &(d, _) in slots.iter() {
                prof_days[idx.sec_prof[s]].insert(d);
            }
        }
        for (p, days) in prof_days.iter().enumerate() {
            if days.is_empty() {
                continue;
            }
            let penalized = match idx.prof_day_off[p] {
                Some(requested) => days.contains(&requested),
                None => days.len() as u32 >= idx.inst.grid.days,
            };
            if penalized {
                report.day_off_total += w.prof_day_off;
            }
        }
    }

    report.witnesses.sort();
    report.total = report.clash_total
        + report.room_total
        + report.double_meeting_total
        + report.day_off_total;
    Ok(report)
}

/// Collects tabu pairs from clash witnesses: for every clash, every student
/// enrolled in both sections contributes (student, s1) and (student, s2).
/// Clashes on professor or single-room edges have no student witness and
/// contribute nothing.
pub fn extract_tabu(inst: &Instance, f: &Sectioning, report: &ConflictReport) -> Result<TabuList> {
    let idx = Indexed::new(inst)?;
    let mut pairs: BTreeSet<(String, String)> = BTreeSet::new();
    let mut seen_pairs: BTreeSet<(String, String)> = BTreeSet::new();
    for witness in &report.witnesses {
        if !seen_pairs.insert((witness.s1.clone(), witness.s2.clone())) {
            continue;
        }
        let s1 = idx.section_index(&witness.s1)?;
        let s2 = idx.section_index(&witness.s2)?;
        let c1 = idx.course_id[idx.sec_course[s1]];
        let c2 = idx.course_id[idx.sec_course[s2]];
        for student in &idx.students {
            if f.get(&student.id, c1) == Some(witness.s1.as_str())
                && f.get(&student.id, c2) == Some(witness.s2.as_str())
            {
                pairs.insert((student.id.clone(), witness.s1.clone()));
                pairs.insert((student.id.clone(), witness.s2.clone()));
            }
        }
    }
    Ok(TabuList::from_pairs(pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conflict_graph::{base_scg, scg_of};
    use crate::instance::parse_instance;

    fn pair_instance() -> Instance {
        parse_instance(
            r#"
common_section_id = "CC.1"

[grid]
days = 1
periods_per_day = 2

[[rooms]]
id = "R1"
room_type = "room"
[[rooms]]
id = "R2"
room_type = "room"
[[rooms]]
id = "R3"
room_type = "room"

[[professors]]
id = "P1"
[[professors]]
id = "P2"
[[professors]]
id = "P3"

[[courses]]
id = "CC"
[[courses]]
id = "C1"
[[courses]]
id = "C2"

[[sections]]
id = "CC.1"
course_id = "CC"
capacity = 2
professor_id = "P3"
room_type = "room"
meetings_per_week = 1

[[sections]]
id = "C1.1"
course_id = "C1"
capacity = 2
professor_id = "P1"
room_type = "room"
meetings_per_week = 1

[[sections]]
id = "C2.1"
course_id = "C2"
capacity = 2
professor_id = "P2"
room_type = "room"
meetings_per_week = 1

[[major_groups]]
id = "G1"
size = 1
required_course_ids = ["C1", "C2"]
"#,
        )
        .unwrap()
    }

    fn enrolled() -> Sectioning {
        let mut f = Sectioning::new();
        f.insert("G1#0", "C1", "C1.1");
        f.insert("G1#0", "C2", "C2.1");
        f
    }

    #[test]
    fn conflict_free_timetable_scores_zero() {
        let inst = pair_instance();
        let g = scg_of(&inst, &enrolled()).unwrap();
        let mut tt = Timetable::new();
        tt.set_slots("C1.1", vec![(0, 0)]);
        tt.set_slots("C2.1", vec![(0, 1)]);
        tt.set_slots("CC.1", vec![(0, 0)]);
        let r = score(&inst, &g, &tt, &SoftWeights::default()).unwrap();
        assert_eq!(r.total, 0.0);
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn one_overlap_costs_the_clash_weight() {
        let inst = pair_instance();
        let g = scg_of(&inst, &enrolled()).unwrap();
        let mut tt = Timetable::new();
        tt.set_slots("C1.1", vec![(0, 0)]);
        tt.set_slots("C2.1", vec![(0, 0)]);
        let r = score(&inst, &g, &tt, &SoftWeights::default()).unwrap();
        assert_eq!(r.clash_total, 1000.0);
        assert_eq!(r.total, 1000.0);
        assert_eq!(r.clash_count(), 1);
    }

    #[test]
    fn common_section_overlap_is_ten_times_heavier() {
        let inst = pair_instance();
        let mut f = enrolled();
        f.insert("G1#0", "CC", "CC.1");
        let mut inst2 = inst.clone();
        inst2.major_groups[0].required_course_ids.insert(0, "CC".into());
        let g = scg_of(&inst2, &f).unwrap();
        let mut tt = Timetable::new();
        tt.set_slots("CC.1", vec![(0, 0)]);
        tt.set_slots("C1.1", vec![(0, 0)]);
        tt.set_slots("C2.1", vec![(0, 1)]);
        let r = score(&inst2, &g, &tt, &SoftWeights::default()).unwrap();
        assert_eq!(r.clash_total, 10000.0);
    }

    #[test]
    fn structural_rules_are_errors_not_penalties() {
        let inst = pair_instance();
        let g = base_scg(&inst).unwrap();
        let mut tt = Timetable::new();
        tt.set_slots("C1.1", vec![(0, 0), (0, 1)]);
        match score(&inst, &g, &tt, &SoftWeights::default()) {
            Err(Error::Structural { rule, .. }) => assert_eq!(rule, "meeting-count"),
            other => panic!("expected structural error, got {other:?}"),
        }
    }

    #[test]
    fn lunch_usage_is_rejected() {
        let mut inst = pair_instance();
        inst.grid.periods_per_day = 3;
        inst.grid.lunch_period = Some(1);
        let g = base_scg(&inst).unwrap();
        let mut tt = Timetable::new();
        tt.set_slots("C1.1", vec![(0, 1)]);
        match score(&inst, &g, &tt, &SoftWeights::default()) {
            Err(Error::Structural { rule, .. }) => assert_eq!(rule, "lunch"),
            other => panic!("expected structural error, got {other:?}"),
        }
    }

    #[test]
    fn legal_starts_rejects_non_extended() {
        let inst = pair_instance();
        assert!(matches!(
            legal_starts(&inst, "C1.1"),
            Err(Error::NotExtended(_))
        ));
    }

    #[test]
    fn tabu_from_professor_edge_is_empty() {
        let mut inst = pair_instance();
        inst.sections[2].professor_id = "P1".into(); // C1.1 and C2.1 share P1
        let f = enrolled();
        let g = scg_of(&inst, &f).unwrap();
        let mut tt = Timetable::new();
        tt.set_slots("C1.1", vec![(0, 0)]);
        tt.set_slots("C2.1", vec![(0, 0)]);
        let r = score(&inst, &g, &tt, &SoftWeights::default()).unwrap();
        assert_eq!(r.clash_count(), 1);
        // the student is in both sections, so the clash still carries a witness;
        // drop the student edge by re-sectioning nobody there
        let mut empty_inst = inst.clone();
        empty_inst.major_groups[0].required_course_ids = vec!["C1".into()];
        let mut f2 = Sectioning::new();
        f2.insert("G1#0", "C1", "C1.1");
        let g2 = scg_of(&empty_inst, &f2).unwrap();
        let r2 = score(&empty_inst, &g2, &tt, &SoftWeights::default()).unwrap();
        let tabu = extract_tabu(&empty_inst, &f2, &r2).unwrap();
        assert!(tabu.is_empty());
    }

    #[test]
    fn tabu_collects_both_pairs_of_a_witnessed_clash() {
        let inst = pair_instance();
        let f = enrolled();
        let g = scg_of(&inst, &f).unwrap();
        let mut tt = Timetable::new();
        tt.set_slots("C1.1", vec![(0, 0)]);
        tt.set_slots("C2.1", vec![(0, 0)]);
        let r = score(&inst, &g, &tt, &SoftWeights::default()).unwrap();
        let tabu = extract_tabu(&inst, &f, &r).unwrap();
        let pairs: Vec<_> = tabu.iter().collect();
        assert_eq!(
            pairs,
            vec![
                &("G1#0".to_string(), "C1.1".to_string()),
                &("G1#0".to_string(), "C2.1".to_string()),
            ]
        );
    }

    #[test]
    fn requested_day_off_is_the_checked_day() {
        let mut inst = pair_instance();
        inst.grid.days = 2;
        inst.professors[0].requested_day_off = Some(1);
        let g = base_scg(&inst).unwrap();
        let w = SoftWeights::default();
        // P1 teaches C1.1 on day 0: requested day 1 stays free -> no penalty
        let mut tt = Timetable::new();
        tt.set_slots("C1.1", vec![(0, 0)]);
        let r = score(&inst, &g, &tt, &w).unwrap();
        assert_eq!(r.day_off_total, 0.0);
        // teaching on the requested day is penalized even though day 0 is free
        let mut tt = Timetable::new();
        tt.set_slots("C1.1", vec![(1, 0)]);
        let r = score(&inst, &g, &tt, &w).unwrap();
        assert_eq!(r.day_off_total, 1.0);
    }
}
