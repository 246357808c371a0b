//! The student conflict graph (SCG): vertices are sections, edges join
//! sections that can never share a time slot — same professor, a room type
//! with exactly one room, or at least one shared student under a given
//! sectioning. A pair may carry several kinds but counts once.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::instance::indexed::Indexed;
use crate::instance::{Instance, Violation};
use crate::Result;

/// Weights on SCG edges by how many endpoints are extended sections
/// (`a` none, `b` one, `c` both) plus the tabu coefficient `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeWeights {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Default for EdgeWeights {
    fn default() -> Self {
        EdgeWeights {
            a: 1.0,
            b: 4.0,
            c: 7.0,
            d: 5.0,
        }
    }
}

/// Total assignment of each (student, required course) pair to one section.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sectioning {
    entries: BTreeMap<(String, String), String>,
}

impl Sectioning {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        student: impl Into<String>,
        course: impl Into<String>,
        section: impl Into<String>,
    ) {
        self.entries
            .insert((student.into(), course.into()), section.into());
    }

    pub fn get(&self, student: &str, course: &str) -> Option<&str> {
        self.entries
            .get(&(student.to_string(), course.to_string()))
            .map(|s| s.as_str())
    }

    /// Iterates in canonical (student, course) order.
    pub fn iter(&self) -> impl Iterator<Item = (&(String, String), &String)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Why two sections conflict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeKinds {
    pub professor: bool,
    pub single_room: bool,
    pub student: bool,
}

impl fmt::Display for EdgeKinds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.professor {
            parts.push("professor");
        }
        if self.single_room {
            parts.push("single_room");
        }
        if self.student {
            parts.push("student");
        }
        write!(f, "{}", parts.join(","))
    }
}

/// Conflict graph over the sections of one instance. Vertex order equals the
/// instance's section order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    sections: Vec<String>,
    edges: BTreeMap<(u32, u32), EdgeKinds>,
}

impl ConflictGraph {
    pub fn section_ids(&self) -> &[String] {
        &self.sections
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.contains_key(&ordered(a, b))
    }

    pub fn kinds(&self, a: u32, b: u32) -> Option<EdgeKinds> {
        self.edges.get(&ordered(a, b)).copied()
    }

    /// Edges in ascending (low, high) vertex order.
    pub fn edges(&self) -> impl Iterator<Item = ((u32, u32), EdgeKinds)> + '_ {
        self.edges.iter().map(|(&k, &v)| (k, v))
    }

    fn mark(&mut self, a: u32, b: u32, f: impl FnOnce(&mut EdgeKinds)) {
        if a == b {
            return;
        }
        f(self.edges.entry(ordered(a, b)).or_default())
    }

    /// Edge list with kind labels, one `s1\ts2\tkinds` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for ((a, b), kinds) in self.edges() {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                self.sections[a as usize], self.sections[b as usize], kinds
            ));
        }
        out
    }
}

fn ordered(a: u32, b: u32) -> (u32, u32) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Base conflict graph of an instance: all professor edges plus all edges
/// between sections of a room type that has exactly one room. No student
/// edges.
pub fn base_scg(inst: &Instance) -> Result<ConflictGraph> {
    let idx = Indexed::new(inst)?;
    Ok(base_scg_indexed(&idx))
}

pub(crate) fn base_scg_indexed(idx: &Indexed) -> ConflictGraph {
    let mut g = ConflictGraph {
        sections: idx.sec_id.iter().map(|s| s.to_string()).collect(),
        edges: BTreeMap::new(),
    };
    let mut by_prof: Vec<Vec<u32>> = vec![Vec::new(); idx.prof_id.len()];
    for (s, &p) in idx.sec_prof.iter().enumerate() {
        by_prof[p].push(s as u32);
    }
    for members in &by_prof {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                g.mark(a, b, |k| k.professor = true);
            }
        }
    }
    let mut by_rt: Vec<Vec<u32>> = vec![Vec::new(); idx.rt_id.len()];
    for (s, &rt) in idx.sec_rt.iter().enumerate() {
        by_rt[rt].push(s as u32);
    }
    for (rt, members) in by_rt.iter().enumerate() {
        if idx.rt_room_ids[rt].len() != 1 {
            continue;
        }
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                g.mark(a, b, |k| k.single_room = true);
            }
        }
    }
    g
}

/// Conflict graph induced by a sectioning: the base graph plus one student
/// edge per section pair sharing at least one student.
pub fn scg_of(inst: &Instance, f: &Sectioning) -> Result<ConflictGraph> {
    let idx = Indexed::new(inst)?;
    let violations = validate_sectioning_indexed(&idx, f)?;
    if !violations.is_empty() {
        return Err(Error::InvalidSectioning(violations));
    }
    let dense = idx.to_dense(f)?;
    Ok(scg_of_dense(&idx, &dense))
}

pub(crate) fn scg_of_dense(idx: &Indexed, dense: &[Vec<usize>]) -> ConflictGraph {
    let mut g = base_scg_indexed(idx);
    for row in dense {
        for (i, &a) in row.iter().enumerate() {
            for &b in &row[i + 1..] {
                g.mark(a as u32, b as u32, |k| k.student = true);
            }
        }
    }
    g
}

/// Number of edges, kinds collapsed.
pub fn edge_count(g: &ConflictGraph) -> usize {
    g.edge_count()
}

/// Weighted edge count: each edge contributes `a`, `b` or `c` depending on
/// how many of its endpoints are extended sections.
pub fn weighted_edge_count(g: &ConflictGraph, inst: &Instance, w: &EdgeWeights) -> Result<f64> {
    let idx = Indexed::new(inst)?;
    let mut total = 0.0;
    for ((a, b), _) in g.edges() {
        total += idx.pair_weight(a as usize, b as usize, w);
    }
    Ok(total)
}

/// Checks a sectioning against the three defining rules — assigned section
/// belongs to the course, per-section load stays within capacity, child
/// enrollment implies parent enrollment — plus totality over every
/// (student, required course) pair.
pub fn validate_sectioning(inst: &Instance, f: &Sectioning) -> Result<Vec<Violation>> {
    let idx = Indexed::new(inst)?;
    validate_sectioning_indexed(&idx, f)
}

pub(crate) fn validate_sectioning_indexed(
    idx: &Indexed,
    f: &Sectioning,
) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let mut load = vec![0u32; idx.n_sections()];
    // (student, section) membership for the family rule
    let mut holds: HashMap<(usize, usize), bool> = HashMap::new();
    let mut assigned: Vec<Vec<bool>> = idx
        .stu_courses
        .iter()
        .map(|cs| vec![false; cs.len()])
        .collect();

    for ((student, course), section) in f.iter() {
        let g = match idx.student_index(student) {
            Ok(g) => g,
            Err(_) => {
                out.push(Violation {
                    rule: "unknown-student",
                    ids: vec![student.clone()],
                    detail: "no such student after expansion".into(),
                });
                continue;
            }
        };
        let c = match idx.course_index(course) {
            Ok(c) => c,
            Err(_) => {
                out.push(Violation {
                    rule: "unknown-course",
                    ids: vec![course.clone()],
                    detail: "no such course".into(),
                });
                continue;
            }
        };
        let s = match idx.section_index(section) {
            Ok(s) => s,
            Err(_) => {
                out.push(Violation {
                    rule: "unknown-section",
                    ids: vec![section.clone()],
                    detail: "no such section".into(),
                });
                continue;
            }
        };
        let slot = match idx.course_slot(g, c) {
            Some(slot) => slot,
            None => {
                out.push(Violation {
                    rule: "not-required",
                    ids: vec![student.clone(), course.clone()],
                    detail: "student does not require this course".into(),
                });
                continue;
            }
        };
        if idx.sec_course[s] != c {
            out.push(Violation {
                rule: "wrong-course",
                ids: vec![student.clone(), course.clone(), section.clone()],
                detail: "assigned section belongs to a different course".into(),
            });
            continue;
        }
        assigned[g][slot] = true;
        load[s] += 1;
        holds.insert((g, s), true);
    }

    for (g, row) in assigned.iter().enumerate() {
        for (slot, &done) in row.iter().enumerate() {
            if !done {
                out.push(Violation {
                    rule: "incomplete",
                    ids: vec![
                        idx.students[g].id.clone(),
                        idx.course_id[idx.stu_courses[g][slot]].to_string(),
                    ],
                    detail: "no section assigned for a required course".into(),
                });
            }
        }
    }

    for (s, &n) in load.iter().enumerate() {
        if n > idx.sec_cap[s] {
            out.push(Violation {
                rule: "capacity",
                ids: vec![idx.sec_id[s].to_string()],
                detail: format!("{} students assigned, capacity {}", n, idx.sec_cap[s]),
            });
        }
    }

    for &(g, s) in holds.keys() {
        if let Some(parent) = idx.sec_parent[s] {
            if !holds.contains_key(&(g, parent)) {
                out.push(Violation {
                    rule: "family",
                    ids: vec![idx.students[g].id.clone(), idx.sec_id[s].to_string()],
                    detail: format!(
                        "child section held without its parent {}",
                        idx.sec_id[parent]
                    ),
                });
            }
        }
    }

    out.sort_by(|x, y| (x.rule, &x.ids).cmp(&(y.rule, &y.ids)));
    Ok(out)
}

/// A maximal set of students with identical section schedules. Always a
/// subset of one major-group; ids are `<group>.<k>` with `k` following the
/// first member's position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Division {
    pub id: String,
    pub major_group_id: String,
    pub student_ids: Vec<String>,
    pub section_ids: Vec<String>,
}

/// Partitions students into divisions under a valid sectioning.
pub fn divisions(inst: &Instance, f: &Sectioning) -> Result<Vec<Division>> {
    let idx = Indexed::new(inst)?;
    let violations = validate_sectioning_indexed(&idx, f)?;
    if !violations.is_empty() {
        return Err(Error::InvalidSectioning(violations));
    }
    let dense = idx.to_dense(f)?;

    let mut out: Vec<Division> = Vec::new();
    // per group: schedule -> division index in `out`
    let mut block_of: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    let mut counter: Vec<u32> = vec![0; inst.major_groups.len()];
    for (g, row) in dense.iter().enumerate() {
        let group = idx.stu_group[g];
        let mut schedule = row.clone();
        schedule.sort_unstable();
        let key = (group, schedule);
        match block_of.get(&key) {
            Some(&b) => out[b].student_ids.push(idx.students[g].id.clone()),
            None => {
                counter[group] += 1;
                let division = Division {
                    id: format!("{}.{}", inst.major_groups[group].id, counter[group]),
                    major_group_id: inst.major_groups[group].id.clone(),
                    student_ids: vec![idx.students[g].id.clone()],
                    section_ids: key.1.iter().map(|&s| idx.sec_id[s].to_string()).collect(),
                };
                block_of.insert(key, out.len());
                out.push(division);
            }
        }
    }
    Ok(out)
}
