//! The boolean sectioning model: index sets W, GC, SS, GSS, PS, PSS, FSS,
//! FGSS, RSS, variables x[g,s] / y[s,t], the five constraint families, and
//! one of three objectives. Satisfying assignments correspond exactly to
//! valid sectionings with consistent edge indicators.

use std::collections::HashMap;
use std::fmt;

use crate::conflict_graph::{scg_of_dense, Sectioning};
use crate::error::Error;
use crate::instance::indexed::Indexed;
use crate::instance::{Instance, Violation};
use crate::minimize::{ObjectiveSpec, ObjectiveVariant};
use crate::Result;

/// Sizes of the nine index sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelSizes {
    pub w: usize,
    pub gc: usize,
    pub ss: usize,
    pub gss: usize,
    pub ps: usize,
    pub pss: usize,
    pub fss: usize,
    pub fgss: usize,
    pub rss: usize,
}

impl fmt::Display for ModelSizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|W|={} |GC|={} |SS|={} |GSS|={} |PS|={} |PSS|={} |FSS|={} |FGSS|={} |RSS|={}",
            self.w, self.gc, self.ss, self.gss, self.ps, self.pss, self.fss, self.fgss, self.rss
        )
    }
}

/// A violated model constraint, tagged with its family (1–5).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelViolation {
    pub family: u8,
    pub detail: String,
}

/// Index-set form of one instance plus an objective. x variables follow the
/// order of `w`, y variables the order of `ss`.
#[derive(Debug, Clone)]
pub struct SectioningModel {
    pub student_ids: Vec<String>,
    pub course_ids: Vec<String>,
    pub section_ids: Vec<String>,
    pub professor_ids: Vec<String>,

    pub w: Vec<(u32, u32)>,
    pub gc: Vec<(u32, u32)>,
    pub ss: Vec<(u32, u32)>,
    pub gss: Vec<(u32, u32, u32)>,
    pub ps: Vec<(u32, u32)>,
    pub pss: Vec<(u32, u32, u32)>,
    pub fss: Vec<(u32, u32)>,
    pub fgss: Vec<(u32, u32, u32)>,
    /// (room, s1, s2) for room types with exactly one room
    pub rss: Vec<(u32, u32, u32)>,
    pub room_ids: Vec<String>,

    pub objective: ObjectiveSpec,

    pub(crate) w_index: HashMap<(u32, u32), u32>,
    pub(crate) ss_index: HashMap<(u32, u32), u32>,
    pub(crate) sec_cap: Vec<u32>,
    pub(crate) sec_ext: Vec<bool>,
    pub(crate) course_sections: Vec<Vec<u32>>,
    /// tabu pairs as (g, s) indices (weighted-tabu objective only)
    pub(crate) tabu_idx: Vec<(u32, u32)>,
}

/// Builds the model. The y variables of pairs in RSS ∪ PSS are forced to one
/// (constraint 1); exactly-one rows per (student, course) (2); capacity rows
/// per section (3); x[g,child] ≤ x[g,parent] per family membership (4); and
/// the clause ¬x[g,s1] ∨ ¬x[g,s2] ∨ y[s1,s2] per (g, s1, s2) (5).
pub fn build_model(inst: &Instance, obj: &ObjectiveSpec) -> Result<SectioningModel> {
    if obj.variant == ObjectiveVariant::WeightedTabu && obj.tabu.is_none() {
        return Err(Error::Unsupported(
            "weighted-tabu objective needs a tabu list".into(),
        ));
    }
    let idx = Indexed::new(inst)?;
    let n_students = idx.n_students();

    let mut w = Vec::new();
    let mut w_index = HashMap::new();
    let mut gc = Vec::new();
    for g in 0..n_students {
        for &c in &idx.stu_courses[g] {
            gc.push((g as u32, c as u32));
            for &s in &idx.course_sections[c] {
                w_index.insert((g as u32, s as u32), w.len() as u32);
                w.push((g as u32, s as u32));
            }
        }
    }

    let n = idx.n_sections();
    let mut ss = Vec::with_capacity(n * (n - 1) / 2);
    let mut ss_index = HashMap::new();
    for s1 in 0..n {
        for s2 in (s1 + 1)..n {
            ss_index.insert((s1 as u32, s2 as u32), ss.len() as u32);
            ss.push((s1 as u32, s2 as u32));
        }
    }

    let mut gss = Vec::new();
    for g in 0..n_students {
        let mut eligible: Vec<u32> = idx.stu_courses[g]
            .iter()
            .flat_map(|&c| idx.course_sections[c].iter().map(|&s| s as u32))
            .collect();
        eligible.sort_unstable();
        for i in 0..eligible.len() {
            for j in (i + 1)..eligible.len() {
                gss.push((g as u32, eligible[i], eligible[j]));
            }
        }
    }

    let mut ps = Vec::new();
    let mut by_prof: Vec<Vec<u32>> = vec![Vec::new(); idx.prof_id.len()];
    for (s, &p) in idx.sec_prof.iter().enumerate() {
        ps.push((p as u32, s as u32));
        by_prof[p].push(s as u32);
    }
    ps.sort_unstable();
    let mut pss = Vec::new();
    for (p, members) in by_prof.iter().enumerate() {
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                pss.push((p as u32, members[i], members[j]));
            }
        }
    }

    let mut fss = Vec::new();
    for (s, parent) in idx.sec_parent.iter().enumerate() {
        if let Some(p) = parent {
            fss.push((*p as u32, s as u32));
        }
    }
    fss.sort_unstable();
    let mut fgss = Vec::new();
    for g in 0..n_students {
        for &(s1, s2) in &fss {
            if w_index.contains_key(&(g as u32, s1)) {
                fgss.push((g as u32, s1, s2));
            }
        }
    }

    let mut rss = Vec::new();
    let mut room_ids = Vec::new();
    {
        let mut room_index: HashMap<&str, u32> = HashMap::new();
        for (rt, rooms) in idx.rt_room_ids.iter().enumerate() {
            if rooms.len() != 1 {
                continue;
            }
            let r = *room_index.entry(rooms[0]).or_insert_with(|| {
                room_ids.push(rooms[0].to_string());
                (room_ids.len() - 1) as u32
            });
            let members: Vec<u32> = (0..n)
                .filter(|&s| idx.sec_rt[s] == rt)
                .map(|s| s as u32)
                .collect();
            for i in 0..members.len() {
                for j in (i + 1)..members.len() {
                    rss.push((r, members[i], members[j]));
                }
            }
        }
    }

    let tabu_idx = match (&obj.variant, &obj.tabu) {
        (ObjectiveVariant::WeightedTabu, Some(list)) => {
            let mut v = Vec::new();
            for (g, s) in list.iter() {
                v.push((
                    idx.student_index(g)? as u32,
                    idx.section_index(s)? as u32,
                ));
            }
            v.sort_unstable();
            v
        }
        _ => Vec::new(),
    };

    Ok(SectioningModel {
        student_ids: idx.students.iter().map(|s| s.id.clone()).collect(),
        course_ids: idx.course_id.iter().map(|s| s.to_string()).collect(),
        section_ids: idx.sec_id.iter().map(|s| s.to_string()).collect(),
        professor_ids: idx.prof_id.iter().map(|s| s.to_string()).collect(),
        w,
        gc,
        ss,
        gss,
        ps,
        pss,
        fss,
        fgss,
        rss,
        room_ids,
        objective: obj.clone(),
        w_index,
        ss_index,
        sec_cap: idx.sec_cap.clone(),
        sec_ext: idx.sec_ext.clone(),
        course_sections: idx
            .course_sections
            .iter()
            .map(|v| v.iter().map(|&s| s as u32).collect())
            .collect(),
        tabu_idx,
    })
}

impl SectioningModel {
    pub fn sizes(&self) -> ModelSizes {
        ModelSizes {
            w: self.w.len(),
            gc: self.gc.len(),
            ss: self.ss.len(),
            gss: self.gss.len(),
            ps: self.ps.len(),
            pss: self.pss.len(),
            fss: self.fss.len(),
            fgss: self.fgss.len(),
            rss: self.rss.len(),
        }
    }

    pub fn x_count(&self) -> usize {
        self.w.len()
    }

    pub fn y_count(&self) -> usize {
        self.ss.len()
    }

    pub fn x_name(&self, k: usize) -> String {
        let (g, s) = self.w[k];
        format!(
            "x({},{})",
            self.student_ids[g as usize], self.section_ids[s as usize]
        )
    }

    pub fn y_name(&self, k: usize) -> String {
        let (s1, s2) = self.ss[k];
        format!(
            "y({},{})",
            self.section_ids[s1 as usize], self.section_ids[s2 as usize]
        )
    }

    /// Pair weight under the model's objective (1 for the edges variant).
    pub fn pair_weight(&self, s1: u32, s2: u32) -> f64 {
        let w = self.objective.effective_weights();
        match (self.sec_ext[s1 as usize], self.sec_ext[s2 as usize]) {
            (false, false) => w.a,
            (true, true) => w.c,
            _ => w.b,
        }
    }

    /// Objective of a full assignment.
    pub fn objective_of(&self, x: &[bool], y: &[bool]) -> f64 {
        let mut total = 0.0;
        for (k, &(s1, s2)) in self.ss.iter().enumerate() {
            if y[k] {
                total += self.pair_weight(s1, s2);
            }
        }
        let d = self.objective.effective_weights().d;
        for &(g, s) in &self.tabu_idx {
            if x[self.w_index[&(g, s)] as usize] {
                total += d;
            }
        }
        total
    }

    /// Checks all five constraint families; empty means satisfied.
    pub fn check(&self, x: &[bool], y: &[bool]) -> Vec<ModelViolation> {
        let mut out = Vec::new();
        assert_eq!(x.len(), self.w.len(), "x length");
        assert_eq!(y.len(), self.ss.len(), "y length");

        // 1: forced edge indicators
        for &(_, s1, s2) in self.rss.iter().chain(self.pss.iter()) {
            let k = self.ss_index[&(s1, s2)];
            if !y[k as usize] {
                out.push(ModelViolation {
                    family: 1,
                    detail: format!(
                        "y({},{}) must be 1",
                        self.section_ids[s1 as usize], self.section_ids[s2 as usize]
                    ),
                });
            }
        }

        // 2: one section per (student, course)
        for &(g, c) in &self.gc {
            let chosen = self.course_sections[c as usize]
                .iter()
                .filter(|&&s| x[self.w_index[&(g, s)] as usize])
                .count();
            if chosen != 1 {
                out.push(ModelViolation {
                    family: 2,
                    detail: format!(
                        "student {} picks {} sections of {}",
                        self.student_ids[g as usize], chosen, self.course_ids[c as usize]
                    ),
                });
            }
        }

        // 3: capacity
        for s in 0..self.section_ids.len() as u32 {
            let load = self
                .w
                .iter()
                .enumerate()
                .filter(|(k, &(_, ws))| ws == s && x[*k])
                .count() as u32;
            if load > self.sec_cap[s as usize] {
                out.push(ModelViolation {
                    family: 3,
                    detail: format!(
                        "section {} holds {} over capacity {}",
                        self.section_ids[s as usize], load, self.sec_cap[s as usize]
                    ),
                });
            }
        }

        // 4: child enrollment implies parent enrollment
        for &(g, s1, s2) in &self.fgss {
            let child = match self.w_index.get(&(g, s2)) {
                Some(&k) => x[k as usize],
                None => continue,
            };
            let parent = x[self.w_index[&(g, s1)] as usize];
            if child && !parent {
                out.push(ModelViolation {
                    family: 4,
                    detail: format!(
                        "student {} in {} without parent {}",
                        self.student_ids[g as usize],
                        self.section_ids[s2 as usize],
                        self.section_ids[s1 as usize]
                    ),
                });
            }
        }

        // 5: shared enrollment forces the edge indicator
        for &(g, s1, s2) in &self.gss {
            let a = x[self.w_index[&(g, s1)] as usize];
            let b = x[self.w_index[&(g, s2)] as usize];
            if a && b && !y[self.ss_index[&(s1, s2)] as usize] {
                out.push(ModelViolation {
                    family: 5,
                    detail: format!(
                        "student {} joins {} and {} but y is 0",
                        self.student_ids[g as usize],
                        self.section_ids[s1 as usize],
                        self.section_ids[s2 as usize]
                    ),
                });
            }
        }

        out
    }

    /// Translates a sectioning to (x, y) with y = edge indicators of its
    /// conflict graph.
    pub fn assignment_from(&self, inst: &Instance, f: &Sectioning) -> Result<(Vec<bool>, Vec<bool>)> {
        let idx = Indexed::new(inst)?;
        let dense = idx.to_dense(f)?;
        let mut x = vec![false; self.w.len()];
        for (g, row) in dense.iter().enumerate() {
            for &s in row {
                let k = self
                    .w_index
                    .get(&(g as u32, s as u32))
                    .ok_or_else(|| Error::Reference {
                        what: "model variable",
                        id: format!("x({},{})", idx.students[g].id, idx.sec_id[s]),
                    })?;
                x[*k as usize] = true;
            }
        }
        let graph = scg_of_dense(&idx, &dense);
        let mut y = vec![false; self.ss.len()];
        for ((a, b), _) in graph.edges() {
            y[self.ss_index[&(a, b)] as usize] = true;
        }
        Ok((x, y))
    }

    /// Reads a sectioning back from the x variables; exactly-one violations
    /// are reported, deeper validity is the caller's to check.
    pub fn sectioning_from_x(&self, x: &[bool]) -> Result<Sectioning> {
        let mut violations = Vec::new();
        let mut f = Sectioning::new();
        for &(g, c) in &self.gc {
            let chosen: Vec<u32> = self.course_sections[c as usize]
                .iter()
                .copied()
                .filter(|&s| x[self.w_index[&(g, s)] as usize])
                .collect();
            match chosen.as_slice() {
                [s] => f.insert(
                    self.student_ids[g as usize].clone(),
                    self.course_ids[c as usize].clone(),
                    self.section_ids[*s as usize].clone(),
                ),
                _ => violations.push(Violation {
                    rule: "exactly-one",
                    ids: vec![
                        self.student_ids[g as usize].clone(),
                        self.course_ids[c as usize].clone(),
                    ],
                    detail: format!("{} sections chosen", chosen.len()),
                }),
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidSectioning(violations));
        }
        Ok(f)
    }
}
