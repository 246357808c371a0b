//! Integer-indexed view of a validated instance. All solver loops run over
//! these dense tables; string ids only appear at the API boundary.

use std::collections::HashMap;

use crate::conflict_graph::Sectioning;
use crate::error::Error;
use crate::instance::{expand_students, Instance, Student};
use crate::Result;

pub(crate) struct Indexed<'a> {
    pub inst: &'a Instance,
    // sections
    pub sec_id: Vec<&'a str>,
    pub sec_course: Vec<usize>,
    pub sec_cap: Vec<u32>,
    pub sec_prof: Vec<usize>,
    pub sec_rt: Vec<usize>,
    pub sec_meet: Vec<u32>,
    pub sec_ext: Vec<bool>,
    pub sec_parent: Vec<Option<usize>>,
    // courses
    pub course_id: Vec<&'a str>,
    pub course_sections: Vec<Vec<usize>>,
    /// true when any section of the course has a parent
    pub course_is_child: Vec<bool>,
    // professors / rooms
    pub prof_id: Vec<&'a str>,
    pub prof_day_off: Vec<Option<u32>>,
    pub rt_id: Vec<&'a str>,
    pub rt_room_ids: Vec<Vec<&'a str>>,
    pub common: Option<usize>,
    // students (expanded)
    pub students: Vec<Student>,
    pub stu_group: Vec<usize>,
    /// per student: required course indices, sorted ascending
    pub stu_courses: Vec<Vec<usize>>,
    // lookups
    sec_by_id: HashMap<&'a str, usize>,
    course_by_id: HashMap<&'a str, usize>,
    stu_by_id: HashMap<String, usize>,
}

impl<'a> Indexed<'a> {
    /// Builds the view. The instance must have passed reference validation;
    /// dangling ids surface as reference errors here as a backstop.
    pub fn new(inst: &'a Instance) -> Result<Self> {
        let course_by_id: HashMap<&str, usize> = inst
            .courses
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.as_str(), i))
            .collect();
        let prof_by_id: HashMap<&str, usize> = inst
            .professors
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.as_str(), i))
            .collect();
        let sec_by_id: HashMap<&str, usize> = inst
            .sections
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.as_str(), i))
            .collect();

        let mut rt_id: Vec<&str> = Vec::new();
        let mut rt_by_id: HashMap<&str, usize> = HashMap::new();
        let mut rt_room_ids: Vec<Vec<&str>> = Vec::new();
        for r in &inst.rooms {
            let idx = *rt_by_id.entry(r.room_type.as_str()).or_insert_with(|| {
                rt_id.push(r.room_type.as_str());
                rt_room_ids.push(Vec::new());
                rt_id.len() - 1
            });
            rt_room_ids[idx].push(r.id.as_str());
        }

        let lookup = |map: &HashMap<&str, usize>, what: &'static str, id: &str| -> Result<usize> {
            map.get(id).copied().ok_or_else(|| Error::Reference {
                what,
                id: id.to_string(),
            })
        };

        let n = inst.sections.len();
        let mut sec_id = Vec::with_capacity(n);
        let mut sec_course = Vec::with_capacity(n);
        let mut sec_cap = Vec::with_capacity(n);
        let mut sec_prof = Vec::with_capacity(n);
        let mut sec_rt = Vec::with_capacity(n);
        let mut sec_meet = Vec::with_capacity(n);
        let mut sec_ext = Vec::with_capacity(n);
        let mut sec_parent = Vec::with_capacity(n);
        for s in &inst.sections {
            sec_id.push(s.id.as_str());
            sec_course.push(lookup(&course_by_id, "course", &s.course_id)?);
            sec_cap.push(s.capacity);
            sec_prof.push(lookup(&prof_by_id, "professor", &s.professor_id)?);
            sec_rt.push(lookup(&rt_by_id, "room type", &s.room_type)?);
            sec_meet.push(s.meetings_per_week);
            sec_ext.push(s.is_extended);
            sec_parent.push(match &s.parent_id {
                Some(p) => Some(lookup(&sec_by_id, "parent section", p)?),
                None => None,
            });
        }

        let mut course_sections = vec![Vec::new(); inst.courses.len()];
        let mut course_is_child = vec![false; inst.courses.len()];
        for (i, &c) in sec_course.iter().enumerate() {
            course_sections[c].push(i);
            if sec_parent[i].is_some() {
                course_is_child[c] = true;
            }
        }

        let common = match &inst.common_section_id {
            Some(id) => Some(lookup(&sec_by_id, "common section", id)?),
            None => None,
        };

        let students = expand_students(inst);
        let group_by_id: HashMap<&str, usize> = inst
            .major_groups
            .iter()
            .enumerate()
            .map(|(i, m)| (m.id.as_str(), i))
            .collect();
        let mut stu_group = Vec::with_capacity(students.len());
        let mut stu_courses = Vec::with_capacity(students.len());
        let mut stu_by_id = HashMap::with_capacity(students.len());
        for (i, g) in students.iter().enumerate() {
            stu_group.push(group_by_id[g.major_group_id.as_str()]);
            let mut cs: Vec<usize> = g
                .required_course_ids
                .iter()
                .map(|c| lookup(&course_by_id, "course", c))
                .collect::<Result<_>>()?;
            cs.sort_unstable();
            cs.dedup();
            stu_courses.push(cs);
            stu_by_id.insert(g.id.clone(), i);
        }

        Ok(Indexed {
            inst,
            sec_id,
            sec_course,
            sec_cap,
            sec_prof,
            sec_rt,
            sec_meet,
            sec_ext,
            sec_parent,
            course_id: inst.courses.iter().map(|c| c.id.as_str()).collect(),
            course_sections,
            course_is_child,
            prof_id: inst.professors.iter().map(|p| p.id.as_str()).collect(),
            prof_day_off: inst.professors.iter().map(|p| p.requested_day_off).collect(),
            rt_id,
            rt_room_ids,
            common,
            students,
            stu_group,
            stu_courses,
            sec_by_id,
            course_by_id,
            stu_by_id,
        })
    }

    pub fn n_sections(&self) -> usize {
        self.sec_id.len()
    }

    pub fn n_students(&self) -> usize {
        self.students.len()
    }

    pub fn section_index(&self, id: &str) -> Result<usize> {
        self.sec_by_id.get(id).copied().ok_or_else(|| Error::Reference {
            what: "section",
            id: id.to_string(),
        })
    }

    pub fn course_index(&self, id: &str) -> Result<usize> {
        self.course_by_id
            .get(id)
            .copied()
            .ok_or_else(|| Error::Reference {
                what: "course",
                id: id.to_string(),
            })
    }

    pub fn student_index(&self, id: &str) -> Result<usize> {
        self.stu_by_id.get(id).copied().ok_or_else(|| Error::Reference {
            what: "student",
            id: id.to_string(),
        })
    }

    /// Position of `course` inside the student's sorted requirement list.
    pub fn course_slot(&self, student: usize, course: usize) -> Option<usize> {
        self.stu_courses[student].binary_search(&course).ok()
    }

    /// Weight of a section pair under the extended-endpoint rule.
    pub fn pair_weight(&self, a: usize, b: usize, w: &crate::conflict_graph::EdgeWeights) -> f64 {
        match (self.sec_ext[a], self.sec_ext[b]) {
            (false, false) => w.a,
            (true, true) => w.c,
            _ => w.b,
        }
    }

    /// Internal dense form of a sectioning: per student, the chosen section
    /// for each required course (aligned with `stu_courses`).
    pub fn to_dense(&self, f: &Sectioning) -> Result<Vec<Vec<usize>>> {
        let mut dense: Vec<Vec<usize>> = self
            .stu_courses
            .iter()
            .map(|cs| vec![usize::MAX; cs.len()])
            .collect();
        for ((student, course), section) in f.iter() {
            let g = self.student_index(student)?;
            let c = self.course_index(course)?;
            let s = self.section_index(section)?;
            let slot = self.course_slot(g, c).ok_or_else(|| {
                Error::InvalidSectioning(vec![crate::instance::Violation {
                    rule: "not-required",
                    ids: vec![student.clone(), course.clone()],
                    detail: "assignment for a course the student does not require".into(),
                }])
            })?;
            dense[g][slot] = s;
        }
        for (g, row) in dense.iter().enumerate() {
            if let Some(slot) = row.iter().position(|&s| s == usize::MAX) {
                return Err(Error::InvalidSectioning(vec![crate::instance::Violation {
                    rule: "incomplete",
                    ids: vec![
                        self.students[g].id.clone(),
                        self.course_id[self.stu_courses[g][slot]].to_string(),
                    ],
                    detail: "no section assigned for a required course".into(),
                }]));
            }
        }
        Ok(dense)
    }

    /// Converts the internal dense form back to the public map form.
    pub fn to_sectioning(&self, dense: &[Vec<usize>]) -> Sectioning {
        let mut f = Sectioning::new();
        for (g, row) in dense.iter().enumerate() {
            for (slot, &s) in row.iter().enumerate() {
                f.insert(
                    self.students[g].id.clone(),
                    self.course_id[self.stu_courses[g][slot]].to_string(),
                    self.sec_id[s].to_string(),
                );
            }
        }
        f
    }
}
