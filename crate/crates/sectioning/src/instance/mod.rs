//! Problem instances: the period grid, rooms, professors, courses, sections
//! (with parent/child families), major-groups, and the weight tables used by
//! the minimizer and the timetabler.
//!
//! An instance is immutable once constructed and safe to share across
//! parallel workers. The on-disk form is a single TOML document with the
//! blocks `grid`, `rooms`, `professors`, `courses`, `sections`,
//! `major_groups` and `weights`, in that canonical order.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::conflict_graph::EdgeWeights;
use crate::error::Error;
use crate::timetable::SoftWeights;
use crate::Result;

pub mod generate;
pub(crate) mod indexed;

pub use generate::{generate_instance, generate_with_plant, PlantedSolution, Preset};

/// Days × periods lattice with an optional excluded lunch period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodGrid {
    pub days: u32,
    pub periods_per_day: u32,
    /// Zero-based period index excluded from teaching, absent when the grid
    /// has no lunch break.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lunch_period: Option<u32>,
}

impl PeriodGrid {
    /// Periods of one day that may host meetings (lunch removed).
    pub fn teaching_periods(&self) -> Vec<u32> {
        (0..self.periods_per_day)
            .filter(|t| Some(*t) != self.lunch_period)
            .collect()
    }

    /// All (day, period) teaching slots of the week.
    pub fn teaching_slots(&self) -> Vec<(u32, u32)> {
        let periods = self.teaching_periods();
        (0..self.days)
            .flat_map(|d| periods.iter().map(move |&t| (d, t)))
            .collect()
    }

    /// Day starts from which a contiguous block of `len` periods fits without
    /// touching lunch or the day boundary. Four-period blocks must sit
    /// entirely before lunch when a lunch period exists.
    pub fn block_starts(&self, len: u32) -> Vec<u32> {
        let max_t = self.periods_per_day.saturating_sub(1);
        let fits_day = |t: u32| t + len - 1 <= max_t;
        match self.lunch_period {
            Some(lunch) => (0..self.periods_per_day)
                .filter(|&t| {
                    if len == 4 {
                        t + 3 < lunch
                    } else {
                        (t + len - 1 < lunch) || (t > lunch && fits_day(t))
                    }
                })
                .collect(),
            None => (0..self.periods_per_day).filter(|&t| fits_day(t)).collect(),
        }
    }
}

/// A physical room; only its type matters to the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Room {
    pub id: String,
    pub room_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Professor {
    pub id: String,
    /// Day index the professor asked to keep free of teaching.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub requested_day_off: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Course {
    pub id: String,
}

/// One section of a course. `parent_id` ties lab-style sections to their
/// lecture parent: enrolling in the child forces the parent, families never
/// nest, and all members of a family share one capacity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub id: String,
    pub course_id: String,
    pub capacity: u32,
    pub professor_id: String,
    pub room_type: String,
    pub meetings_per_week: u32,
    /// Extended sections hold all weekly meetings as one contiguous same-day
    /// block that may not straddle lunch.
    #[serde(default)]
    pub is_extended: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<String>,
}

/// Students with identical required-course lists; expanded to synthetic
/// student records (`<group>#<ordinal>`) before solving.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MajorGroup {
    pub id: String,
    pub size: u32,
    pub required_course_ids: Vec<String>,
}

/// The `weights` block of the instance document: edge weights for the
/// minimizer objective and soft-constraint weights for the timetabler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Weights {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub clash: f64,
    pub common_multiplier: f64,
    pub room_overflow: f64,
    pub double_meeting: f64,
    pub prof_day_off: f64,
}

impl Default for Weights {
    fn default() -> Self {
        let e = EdgeWeights::default();
        let s = SoftWeights::default();
        Weights {
            a: e.a,
            b: e.b,
            c: e.c,
            d: e.d,
            clash: s.clash,
            common_multiplier: s.common_multiplier,
            room_overflow: s.room_overflow,
            double_meeting: s.double_meeting,
            prof_day_off: s.prof_day_off,
        }
    }
}

/// A whole sectioning/timetabling problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    /// Section every student attends (penalized 10× on clashes).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub common_section_id: Option<String>,
    pub grid: PeriodGrid,
    pub rooms: Vec<Room>,
    pub professors: Vec<Professor>,
    pub courses: Vec<Course>,
    pub sections: Vec<Section>,
    pub major_groups: Vec<MajorGroup>,
    #[serde(default)]
    pub weights: Weights,
}

impl Instance {
    pub fn edge_weights(&self) -> EdgeWeights {
        EdgeWeights {
            a: self.weights.a,
            b: self.weights.b,
            c: self.weights.c,
            d: self.weights.d,
        }
    }

    pub fn soft_weights(&self) -> SoftWeights {
        SoftWeights {
            clash: self.weights.clash,
            common_multiplier: self.weights.common_multiplier,
            room_overflow: self.weights.room_overflow,
            double_meeting: self.weights.double_meeting,
            prof_day_off: self.weights.prof_day_off,
        }
    }

    pub fn section(&self, id: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.id == id)
    }

    /// Total student count over all major-groups.
    pub fn student_count(&self) -> u32 {
        self.major_groups.iter().map(|m| m.size).sum()
    }
}

/// One expanded student record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Student {
    pub id: String,
    pub major_group_id: String,
    pub required_course_ids: Vec<String>,
}

/// A broken instance rule: the rule name plus the offending ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub ids: Vec<String>,
    pub detail: String,
}

impl Violation {
    fn new(rule: &'static str, ids: &[&str], detail: impl Into<String>) -> Self {
        Violation {
            rule,
            ids: ids.iter().map(|s| s.to_string()).collect(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.rule, self.ids.join(", "), self.detail)
    }
}

/// Parses an instance document, verifying every cross reference and
/// invariant. Positions of syntax errors come from the TOML parser.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let inst: Instance = toml::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    let violations = validate(&inst);
    if let Some(v) = violations.iter().find(|v| v.rule.starts_with("unknown-")) {
        let what: &'static str = match v.rule {
            "unknown-course" | "unknown-required-course" => "course",
            "unknown-professor" => "professor",
            "unknown-room-type" => "room type",
            "unknown-parent" => "parent section",
            "unknown-common-section" => "common section",
            _ => "id",
        };
        return Err(Error::Reference {
            what,
            id: v.ids.last().cloned().unwrap_or_default(),
        });
    }
    if !violations.is_empty() {
        return Err(Error::InvalidInstance(violations));
    }
    Ok(inst)
}

/// Serializes to the canonical document form; `parse_instance` of the output
/// reproduces the instance exactly.
pub fn serialize_instance(inst: &Instance) -> String {
    toml::to_string(inst).expect("instance serializes")
}

fn dup_check<'a>(
    out: &mut Vec<Violation>,
    rule: &'static str,
    ids: impl Iterator<Item = &'a str>,
) {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            out.push(Violation::new(rule, &[id], "id is not unique"));
        }
    }
}

/// Checks every invariant of the instance model and returns the violations
/// found; an empty list means the instance is well formed. Violations are
/// data, not errors.
pub fn validate(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();

    // grid
    if inst.grid.days == 0 {
        out.push(Violation::new("grid-days", &[], "days must be at least 1"));
    }
    if inst.grid.periods_per_day == 0 {
        out.push(Violation::new(
            "grid-periods",
            &[],
            "periods_per_day must be at least 1",
        ));
    }
    if let Some(lunch) = inst.grid.lunch_period {
        if lunch >= inst.grid.periods_per_day {
            out.push(Violation::new(
                "grid-lunch",
                &[],
                format!(
                    "lunch_period {} out of range 0..{}",
                    lunch, inst.grid.periods_per_day
                ),
            ));
        }
    }

    dup_check(&mut out, "duplicate-room-id", inst.rooms.iter().map(|r| r.id.as_str()));
    dup_check(
        &mut out,
        "duplicate-professor-id",
        inst.professors.iter().map(|p| p.id.as_str()),
    );
    dup_check(
        &mut out,
        "duplicate-course-id",
        inst.courses.iter().map(|c| c.id.as_str()),
    );
    dup_check(
        &mut out,
        "duplicate-section-id",
        inst.sections.iter().map(|s| s.id.as_str()),
    );
    dup_check(
        &mut out,
        "duplicate-major-group-id",
        inst.major_groups.iter().map(|m| m.id.as_str()),
    );

    let courses: HashSet<&str> = inst.courses.iter().map(|c| c.id.as_str()).collect();
    let professors: HashSet<&str> = inst.professors.iter().map(|p| p.id.as_str()).collect();
    let sections: HashMap<&str, &Section> =
        inst.sections.iter().map(|s| (s.id.as_str(), s)).collect();
    let mut rooms_per_type: HashMap<&str, u32> = HashMap::new();
    for r in &inst.rooms {
        *rooms_per_type.entry(r.room_type.as_str()).or_insert(0) += 1;
    }

    for p in &inst.professors {
        if let Some(d) = p.requested_day_off {
            if d >= inst.grid.days {
                out.push(Violation::new(
                    "day-off-range",
                    &[&p.id],
                    format!("requested_day_off {} out of range 0..{}", d, inst.grid.days),
                ));
            }
        }
    }

    for s in &inst.sections {
        if !courses.contains(s.course_id.as_str()) {
            out.push(Violation::new(
                "unknown-course",
                &[&s.id, &s.course_id],
                "section references a course that does not exist",
            ));
        }
        if !professors.contains(s.professor_id.as_str()) {
            out.push(Violation::new(
                "unknown-professor",
                &[&s.id, &s.professor_id],
                "section references a professor that does not exist",
            ));
        }
        if !rooms_per_type.contains_key(s.room_type.as_str()) {
            out.push(Violation::new(
                "unknown-room-type",
                &[&s.id, &s.room_type],
                "no room has this room type",
            ));
        }
        if s.capacity == 0 {
            out.push(Violation::new(
                "section-capacity",
                &[&s.id],
                "capacity must be at least 1",
            ));
        }
        if s.meetings_per_week == 0 {
            out.push(Violation::new(
                "section-meetings",
                &[&s.id],
                "meetings_per_week must be at least 1",
            ));
        }
        if s.is_extended && !(2..=4).contains(&s.meetings_per_week) {
            out.push(Violation::new(
                "extended-meetings",
                &[&s.id],
                "extended sections use 2 to 4 contiguous periods",
            ));
        }
        if s.is_extended
            && (2..=4).contains(&s.meetings_per_week)
            && inst.grid.block_starts(s.meetings_per_week).is_empty()
        {
            out.push(Violation::new(
                "extended-window",
                &[&s.id],
                "no lunch-legal window of the grid fits this block",
            ));
        }
        if let Some(parent_id) = &s.parent_id {
            match sections.get(parent_id.as_str()) {
                None => out.push(Violation::new(
                    "unknown-parent",
                    &[&s.id, parent_id],
                    "parent section does not exist",
                )),
                Some(parent) => {
                    if parent.parent_id.is_some() {
                        out.push(Violation::new(
                            "grandchild",
                            &[&s.id, parent_id],
                            "families may not nest: the parent has a parent itself",
                        ));
                    }
                    if parent.capacity != s.capacity {
                        out.push(Violation::new(
                            "family-capacity",
                            &[&s.id, parent_id],
                            format!(
                                "family capacity mismatch ({} vs {})",
                                s.capacity, parent.capacity
                            ),
                        ));
                    }
                    if parent.course_id == s.course_id {
                        out.push(Violation::new(
                            "family-course",
                            &[&s.id, parent_id],
                            "parent and child must belong to different courses",
                        ));
                    }
                }
            }
        }
    }

    // course of every child section must drag the parent's course into the
    // requirement list, otherwise no sectioning can satisfy the family rule
    let mut parent_course_of: HashMap<&str, std::collections::BTreeSet<&str>> = HashMap::new();
    for s in &inst.sections {
        if let Some(parent_id) = &s.parent_id {
            if let Some(parent) = sections.get(parent_id.as_str()) {
                parent_course_of
                    .entry(s.course_id.as_str())
                    .or_default()
                    .insert(parent.course_id.as_str());
            }
        }
    }

    for m in &inst.major_groups {
        if m.size == 0 {
            out.push(Violation::new(
                "group-size",
                &[&m.id],
                "size must be at least 1",
            ));
        }
        let required: HashSet<&str> = m.required_course_ids.iter().map(|c| c.as_str()).collect();
        for c in &m.required_course_ids {
            if !courses.contains(c.as_str()) {
                out.push(Violation::new(
                    "unknown-required-course",
                    &[&m.id, c],
                    "required course does not exist",
                ));
            }
            if let Some(parents) = parent_course_of.get(c.as_str()) {
                for pc in parents {
                    if !required.contains(pc) {
                        out.push(Violation::new(
                            "family-parent-course",
                            &[&m.id, c, pc],
                            "requiring a child course also requires the parent's course",
                        ));
                    }
                }
            }
        }
    }

    // capacity: every required course must be able to absorb its demand
    let mut demand: HashMap<&str, u32> = HashMap::new();
    for m in &inst.major_groups {
        for c in &m.required_course_ids {
            *demand.entry(c.as_str()).or_insert(0) += m.size;
        }
    }
    for c in &inst.courses {
        if let Some(&need) = demand.get(c.id.as_str()) {
            let supply: u32 = inst
                .sections
                .iter()
                .filter(|s| s.course_id == c.id)
                .map(|s| s.capacity)
                .sum();
            if supply < need {
                out.push(Violation::new(
                    "insufficient-capacity",
                    &[&c.id],
                    format!("sections hold {} students but {} require the course", supply, need),
                ));
            }
        }
    }

    if let Some(common) = &inst.common_section_id {
        match sections.get(common.as_str()) {
            None => out.push(Violation::new(
                "unknown-common-section",
                &[common],
                "common section does not exist",
            )),
            Some(s) => {
                if s.capacity < inst.student_count() {
                    out.push(Violation::new(
                        "common-capacity",
                        &[common],
                        format!(
                            "common section holds {} but every one of {} students attends it",
                            s.capacity,
                            inst.student_count()
                        ),
                    ));
                }
            }
        }
    }

    out
}

/// Expands major-groups into one student record per seat. Ids are
/// `<group>#<ordinal>` so runs are reproducible; order follows the group
/// list, then ordinals.
pub fn expand_students(inst: &Instance) -> Vec<Student> {
    let mut out = Vec::with_capacity(inst.student_count() as usize);
    for m in &inst.major_groups {
        for k in 0..m.size {
            out.push(Student {
                id: format!("{}#{}", m.id, k),
                major_group_id: m.id.clone(),
                required_course_ids: m.required_course_ids.clone(),
            });
        }
    }
    out
}
