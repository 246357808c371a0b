//! Shared fixtures and independent oracles for the integration suites. The
//! oracles re-derive expectations from first principles (enumeration, text
//! parsing, pairwise recounts) and never call the code paths they check.

use std::collections::HashMap;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sectioning::conflict_graph::{ConflictGraph, Sectioning};
use sectioning::instance::{
    expand_students, parse_instance, Instance,
};
use sectioning::minimize::SectioningModel;
use sectioning::timetable::{score, SoftWeights, Timetable};

/// Uniformly random valid sectioning: students in expansion order, courses
/// child-first, each pick uniform over the capacity-open, family-legal
/// sections.
pub fn random_valid_sectioning(inst: &Instance, seed: u64) -> Sectioning {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let students = expand_students(inst);
    let parent_of: HashMap<&str, &str> = inst
        .sections
        .iter()
        .filter_map(|s| s.parent_id.as_deref().map(|p| (s.id.as_str(), p)))
        .collect();
    let course_of: HashMap<&str, &str> = inst
        .sections
        .iter()
        .map(|s| (s.id.as_str(), s.course_id.as_str()))
        .collect();
    let child_course: HashMap<&str, bool> = inst
        .courses
        .iter()
        .map(|c| {
            let is_child = inst
                .sections
                .iter()
                .any(|s| s.course_id == c.id && s.parent_id.is_some());
            (c.id.as_str(), is_child)
        })
        .collect();

    let mut load: HashMap<&str, u32> = HashMap::new();
    let mut f = Sectioning::new();
    for student in &students {
        let mut courses: Vec<&str> = student
            .required_course_ids
            .iter()
            .map(|c| c.as_str())
            .collect();
        courses.sort_by_key(|c| (!child_course.get(c).copied().unwrap_or(false), c.to_string()));
        let mut chosen: HashMap<&str, &str> = HashMap::new();
        for course in courses {
            if chosen.contains_key(course) {
                continue;
            }
            let open = |id: &str| {
                let cap = inst.section(id).unwrap().capacity;
                load.get(id).copied().unwrap_or(0) < cap
            };
            let candidates: Vec<&sectioning::instance::Section> = inst
                .sections
                .iter()
                .filter(|s| {
                    if s.course_id != course || !open(&s.id) {
                        return false;
                    }
                    match parent_of.get(s.id.as_str()) {
                        Some(p) => {
                            let pc = course_of[p];
                            match chosen.get(pc) {
                                Some(held) => held == p,
                                None => open(p),
                            }
                        }
                        None => true,
                    }
                })
                .collect();
            let pick = candidates.choose(&mut rng).expect("tiny capacities are roomy");
            chosen.insert(course, &pick.id);
            *load.entry(&pick.id).or_insert(0) += 1;
            if let Some(p) = parent_of.get(pick.id.as_str()) {
                let pc = course_of[p];
                if !chosen.contains_key(pc) {
                    chosen.insert(pc, p);
                    *load.entry(p).or_insert(0) += 1;
                }
            }
        }
        for (course, section) in chosen {
            f.insert(student.id.clone(), course, section);
        }
    }
    f
}

/// Seeded 1-day toy instance (2–4 periods, 2–4 sections) with its forced
/// sectioning; small enough for exhaustive timetable enumeration.
pub fn tiny_line_instance(seed: u64) -> (Instance, Sectioning) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11ed);
    let periods = rng.random_range(2..=4u32);
    let n_sections = rng.random_range(2..=4usize);

    let mut doc = format!(
        "[grid]\ndays = 1\nperiods_per_day = {periods}\n\n\
         [[rooms]]\nid = \"R1\"\nroom_type = \"room\"\n\n\
         [[rooms]]\nid = \"R2\"\nroom_type = \"room\"\n\n\
         [[rooms]]\nid = \"N1\"\nroom_type = \"narrow\"\n\n"
    );
    for k in 0..n_sections.div_ceil(2) {
        doc.push_str(&format!("[[professors]]\nid = \"P{k}\"\n\n"));
    }
    for k in 0..n_sections {
        doc.push_str(&format!("[[courses]]\nid = \"C{k}\"\n\n"));
    }
    for k in 0..n_sections {
        // professors shared pairwise; one narrow room type for extra pressure
        let prof = k / 2;
        let room = if k == 0 && rng.random_bool(0.5) {
            "narrow"
        } else {
            "room"
        };
        let extended = periods >= 3 && k == 1 && rng.random_bool(0.4);
        let meetings = if extended {
            2
        } else {
            rng.random_range(1..=2u32.min(periods))
        };
        doc.push_str(&format!(
            "[[sections]]\nid = \"S{k}\"\ncourse_id = \"C{k}\"\ncapacity = 4\n\
             professor_id = \"P{prof}\"\nroom_type = \"{room}\"\n\
             meetings_per_week = {meetings}\nis_extended = {extended}\n\n"
        ));
    }
    // students tie random course pairs together
    let n_students = rng.random_range(1..=3usize);
    for g in 0..n_students {
        let a = rng.random_range(0..n_sections);
        let b = (a + 1 + rng.random_range(0..n_sections - 1)) % n_sections;
        doc.push_str(&format!(
            "[[major_groups]]\nid = \"G{g}\"\nsize = 1\nrequired_course_ids = [\"C{a}\", \"C{b}\"]\n\n"
        ));
    }

    let inst = parse_instance(&doc).unwrap();
    let mut f = Sectioning::new();
    for student in expand_students(&inst) {
        for c in &student.required_course_ids {
            f.insert(student.id.clone(), c.clone(), format!("S{}", &c[1..]));
        }
    }
    (inst, f)
}

/// Exhaustive minimum of the timetable score over every structurally valid
/// placement of all sections.
pub fn enumerate_best_score(inst: &Instance, g: &ConflictGraph, w: &SoftWeights) -> f64 {
    let slots = inst.grid.teaching_slots();
    let placements: Vec<Vec<Vec<(u32, u32)>>> = inst
        .sections
        .iter()
        .map(|s| {
            if s.is_extended {
                let mut out = Vec::new();
                for d in 0..inst.grid.days {
                    for t in inst.grid.block_starts(s.meetings_per_week) {
                        out.push((t..t + s.meetings_per_week).map(|p| (d, p)).collect());
                    }
                }
                out
            } else {
                combinations(&slots, s.meetings_per_week as usize)
            }
        })
        .collect();

    let mut best = f64::INFINITY;
    let mut pick = vec![0usize; placements.len()];
    loop {
        let mut tt = Timetable::new();
        for (k, s) in inst.sections.iter().enumerate() {
            tt.set_slots(s.id.clone(), placements[k][pick[k]].clone());
        }
        let total = score(inst, g, &tt, w).unwrap().total;
        if total < best {
            best = total;
        }
        // odometer
        let mut k = 0;
        loop {
            if k == pick.len() {
                return best;
            }
            pick[k] += 1;
            if pick[k] < placements[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

fn combinations(slots: &[(u32, u32)], m: usize) -> Vec<Vec<(u32, u32)>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(
        slots: &[(u32, u32)],
        m: usize,
        from: usize,
        cur: &mut Vec<(u32, u32)>,
        out: &mut Vec<Vec<(u32, u32)>>,
    ) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for k in from..slots.len() {
            cur.push(slots[k]);
            rec(slots, m, k + 1, cur, out);
            cur.pop();
        }
    }
    rec(slots, m, 0, &mut cur, &mut out);
    out
}

/// Instance whose aligned `.1` sectioning forms a 4-clique over a 3-slot
/// grid (one clash forced), while every student has a `.2` escape, so one
/// tabu round can always repair it.
pub fn tabu_probe_instance() -> (Instance, Sectioning) {
    let mut doc = String::from(
        "[grid]\ndays = 3\nperiods_per_day = 1\n\n\
         [[rooms]]\nid = \"R1\"\nroom_type = \"room\"\n\n\
         [[rooms]]\nid = \"R2\"\nroom_type = \"room\"\n\n\
         [[rooms]]\nid = \"R3\"\nroom_type = \"room\"\n\n\
         [[rooms]]\nid = \"R4\"\nroom_type = \"room\"\n\n",
    );
    for k in 1..=8 {
        doc.push_str(&format!("[[professors]]\nid = \"P{k}\"\n\n"));
    }
    let mut p = 0;
    for course in ["A", "B", "C", "P"] {
        doc.push_str(&format!("[[courses]]\nid = \"{course}\"\n\n"));
        for k in 1..=2 {
            p += 1;
            doc.push_str(&format!(
                "[[sections]]\nid = \"{course}.{k}\"\ncourse_id = \"{course}\"\ncapacity = 4\n\
                 professor_id = \"P{p}\"\nroom_type = \"room\"\nmeetings_per_week = 1\n\n"
            ));
        }
    }
    for (group, required) in [
        ("H1", "[\"A\", \"B\", \"C\"]"),
        ("H2", "[\"B\", \"P\"]"),
        ("H3", "[\"C\", \"P\"]"),
        ("GG", "[\"A\", \"P\"]"),
    ] {
        doc.push_str(&format!(
            "[[major_groups]]\nid = \"{group}\"\nsize = 1\nrequired_course_ids = {required}\n\n"
        ));
    }
    let inst = parse_instance(&doc).unwrap();

    // everyone aligned on the .1 sections: a 4-clique {A.1, B.1, C.1, P.1}
    let mut f = Sectioning::new();
    f.insert("H1#0", "A", "A.1");
    f.insert("H1#0", "B", "B.1");
    f.insert("H1#0", "C", "C.1");
    f.insert("H2#0", "B", "B.1");
    f.insert("H2#0", "P", "P.1");
    f.insert("H3#0", "C", "C.1");
    f.insert("H3#0", "P", "P.1");
    f.insert("GG#0", "A", "A.1");
    f.insert("GG#0", "P", "P.1");
    (inst, f)
}

/// Parses the rendered grid back into cells and checks each selected
/// section shows up exactly at its timetable slots.
pub fn assert_render_matches_slots(
    text: &str,
    inst: &Instance,
    section_ids: &[String],
    tt: &Timetable,
) {
    let lines: Vec<&str> = text.lines().collect();
    let header = lines[1];
    let mut starts: Vec<usize> = Vec::new();
    for d in 0..inst.grid.days {
        let token = format!("D{d}");
        let from = starts.last().map(|&s| s + 1).unwrap_or(0);
        let at = header[from..]
            .find(&token)
            .map(|k| k + from)
            .unwrap_or_else(|| panic!("day column {token} missing in {header:?}"));
        starts.push(at);
    }

    for t in 0..inst.grid.periods_per_day {
        let row = lines
            .get(2 + t as usize)
            .unwrap_or_else(|| panic!("period row {t} missing"));
        for d in 0..inst.grid.days as usize {
            let from = starts[d].min(row.len());
            let to = starts
                .get(d + 1)
                .map(|&s| s.min(row.len()))
                .unwrap_or(row.len());
            let cell = row[from..to].trim();
            let mut got: Vec<&str> = if cell == "." || cell.is_empty() || cell == "~lunch~" {
                Vec::new()
            } else {
                cell.split('/').map(|s| s.trim_start_matches('|')).collect()
            };
            got.sort_unstable();
            let mut expected: Vec<&str> = section_ids
                .iter()
                .filter(|id| {
                    tt.slots(id)
                        .map(|slots| slots.contains(&(d as u32, t)))
                        .unwrap_or(false)
                })
                .map(|s| s.as_str())
                .collect();
            expected.sort_unstable();
            assert_eq!(
                got, expected,
                "cell (day {d}, period {t}) mismatch in:\n{text}"
            );
        }
    }
}

/// Independent OPB evaluator: re-parses the exported text (objective and
/// constraint rows), maps variables through the map file, evaluates the
/// given assignment, and checks every constraint holds.
pub fn evaluate_opb(
    model_text: &str,
    var_map: &str,
    model: &SectioningModel,
    x: &[bool],
    y: &[bool],
) -> f64 {
    // name -> 1-based solver index
    let mut index_of: HashMap<&str, usize> = HashMap::new();
    for line in var_map.lines() {
        let mut parts = line.split_whitespace();
        let name = parts.next().unwrap();
        let idx: usize = parts.next().unwrap().parse().unwrap();
        index_of.insert(name, idx);
    }
    // assignment by solver index
    let mut value = vec![false; index_of.len() + 1];
    for k in 0..x.len() {
        value[index_of[model.x_name(k).as_str()]] = x[k];
    }
    for k in 0..y.len() {
        value[index_of[model.y_name(k).as_str()]] = y[k];
    }

    let term =
        |tok: &str| -> i64 { tok.parse::<i64>().unwrap_or_else(|_| panic!("coef {tok:?}")) };
    let var = |tok: &str| -> usize { tok.trim_start_matches('x').parse().unwrap() };

    let mut objective = 0.0;
    for line in model_text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('*') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("min:") {
            let toks: Vec<&str> = rest.trim_end_matches(';').split_whitespace().collect();
            for pair in toks.chunks(2) {
                if let [c, v] = pair {
                    if value[var(v)] {
                        objective += term(c) as f64;
                    }
                }
            }
            continue;
        }
        // constraint row: terms… op rhs ;
        let toks: Vec<&str> = line.trim_end_matches(';').split_whitespace().collect();
        let op_at = toks
            .iter()
            .position(|t| *t == ">=" || *t == "=")
            .expect("operator");
        let mut lhs = 0i64;
        for pair in toks[..op_at].chunks(2) {
            if let [c, v] = pair {
                if value[var(v)] {
                    lhs += term(c);
                }
            }
        }
        let rhs: i64 = toks[op_at + 1].parse().unwrap();
        let ok = match toks[op_at] {
            ">=" => lhs >= rhs,
            "=" => lhs == rhs,
            other => panic!("operator {other:?}"),
        };
        assert!(ok, "constraint violated by the assignment: {line}");
    }
    objective
}
