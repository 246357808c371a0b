//! Deterministic instance generation. The four named presets target the
//! benchmark scales (256 / 339 / 352 / 372 distinct sections); `tiny` builds
//! an oracle-scale instance around a planted conflict-free timetable so the
//! whole pipeline has a known feasible answer.

use std::collections::{HashMap, HashSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conflict_graph::Sectioning;
use crate::error::Error;
use crate::instance::{
    Course, Instance, MajorGroup, PeriodGrid, Professor, Room, Section, Weights,
};
use crate::timetable::Timetable;
use crate::Result;

/// Preset name plus an optional section-count override (`name:sections`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preset {
    pub name: String,
    pub sections_override: Option<usize>,
}

impl Preset {
    pub fn parse(text: &str) -> Result<Self> {
        let (name, over) = match text.split_once(':') {
            Some((n, o)) => {
                let sections = o
                    .parse::<usize>()
                    .map_err(|_| Error::UnknownPreset(text.to_string()))?;
                (n, Some(sections))
            }
            None => (text, None),
        };
        match name {
            "tiny" | "easy" | "medium" | "medium2" | "hard" => Ok(Preset {
                name: name.to_string(),
                sections_override: over,
            }),
            _ => Err(Error::UnknownPreset(text.to_string())),
        }
    }
}

/// A sectioning and a timetable the generator guarantees to be conflict-free
/// for its instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSolution {
    pub sectioning: Sectioning,
    pub timetable: Timetable,
}

/// Generates the preset deterministically for the seed.
pub fn generate_instance(preset: &str, seed: u64) -> Result<Instance> {
    generate_with_plant(preset, seed).map(|(inst, _)| inst)
}

/// Same as [`generate_instance`] but also returns the planted solution for
/// presets that construct one (currently `tiny`).
pub fn generate_with_plant(preset: &str, seed: u64) -> Result<(Instance, Option<PlantedSolution>)> {
    let preset = Preset::parse(preset)?;
    match preset.name.as_str() {
        "tiny" => {
            let (inst, plant) = tiny(seed)?;
            Ok((inst, Some(plant)))
        }
        name => {
            let params = ScaleParams::for_preset(name, preset.sections_override);
            Ok((scaled(&params, seed)?, None))
        }
    }
}

fn grid() -> PeriodGrid {
    // five days of seven periods, lunch after the fourth
    PeriodGrid {
        days: 5,
        periods_per_day: 7,
        lunch_period: Some(4),
    }
}

// ---------------------------------------------------------------------------
// tiny preset with a planted solution

fn tiny(seed: u64) -> Result<(Instance, PlantedSolution)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7469_6e79);
    let grid = grid();

    let size1 = rng.random_range(2..=3u32);
    let size2 = rng.random_range(2..=3u32);
    let total = size1 + size2;
    let share_meet = rng.random_range(2..=3u32);
    let spec_meet = rng.random_range(2..=3u32);

    let courses = ["COMMON", "SHARE", "LECT", "LAB", "SPEC"]
        .iter()
        .map(|id| Course { id: id.to_string() })
        .collect::<Vec<_>>();

    // LECT.1 and LECT.2 share a professor; everyone else teaches one section
    let professors: Vec<Professor> = (1..=7)
        .map(|k| Professor {
            id: format!("P{k}"),
            requested_day_off: None,
        })
        .collect();

    let rooms = vec![
        Room { id: "AUD".into(), room_type: "aud".into() },
        Room { id: "C1".into(), room_type: "cls".into() },
        Room { id: "C2".into(), room_type: "cls".into() },
        Room { id: "C3".into(), room_type: "cls".into() },
        Room { id: "L1".into(), room_type: "lab".into() },
        Room { id: "L2".into(), room_type: "lab".into() },
    ];

    let fam_cap = size1 + 1;
    let mk = |id: &str, course: &str, cap: u32, prof: &str, rt: &str, meet: u32, ext: bool, parent: Option<&str>| Section {
        id: id.into(),
        course_id: course.into(),
        capacity: cap,
        professor_id: prof.into(),
        room_type: rt.into(),
        meetings_per_week: meet,
        is_extended: ext,
        parent_id: parent.map(|p| p.into()),
    };
    let sections = vec![
        mk("COMMON.1", "COMMON", total, "P1", "aud", 1, false, None),
        mk("SHARE.1", "SHARE", total, "P2", "cls", share_meet, false, None),
        mk("SHARE.2", "SHARE", total, "P3", "cls", share_meet, false, None),
        mk("LECT.1", "LECT", fam_cap, "P4", "cls", 2, false, None),
        mk("LECT.2", "LECT", fam_cap, "P4", "cls", 2, false, None),
        mk("LAB.1", "LAB", fam_cap, "P5", "lab", 2, true, Some("LECT.1")),
        mk("LAB.2", "LAB", fam_cap, "P6", "lab", 2, true, Some("LECT.2")),
        mk("SPEC.1", "SPEC", size2, "P7", "aud", spec_meet, false, None),
    ];

    let major_groups = vec![
        MajorGroup {
            id: "1MC".into(),
            size: size1,
            required_course_ids: vec!["COMMON".into(), "SHARE".into(), "LECT".into(), "LAB".into()],
        },
        MajorGroup {
            id: "2SC".into(),
            size: size2,
            required_course_ids: vec!["COMMON".into(), "SHARE".into(), "SPEC".into()],
        },
    ];

    let mut inst = Instance {
        common_section_id: Some("COMMON.1".into()),
        grid,
        rooms,
        professors,
        courses,
        sections,
        major_groups,
        weights: Weights::default(),
    };

    // planted sectioning: group 1 on the .1 family, group 2 on SHARE.2/SPEC.1
    let mut sectioning = Sectioning::new();
    for k in 0..size1 {
        let g = format!("1MC#{k}");
        sectioning.insert(g.clone(), "COMMON", "COMMON.1");
        sectioning.insert(g.clone(), "SHARE", "SHARE.1");
        sectioning.insert(g.clone(), "LECT", "LECT.1");
        sectioning.insert(g, "LAB", "LAB.1");
    }
    for k in 0..size2 {
        let g = format!("2SC#{k}");
        sectioning.insert(g.clone(), "COMMON", "COMMON.1");
        sectioning.insert(g.clone(), "SHARE", "SHARE.2");
        sectioning.insert(g, "SPEC", "SPEC.1");
    }

    // separation requirements the plant must honor: the two division cliques
    // plus the base edges (shared LECT professor, the one-room aud type)
    let division1 = ["COMMON.1", "SHARE.1", "LECT.1", "LAB.1"];
    let division2 = ["COMMON.1", "SHARE.2", "SPEC.1"];
    let mut apart: Vec<(String, String)> = Vec::new();
    for set in [&division1[..], &division2[..]] {
        for i in 0..set.len() {
            for j in (i + 1)..set.len() {
                apart.push((set[i].to_string(), set[j].to_string()));
            }
        }
    }
    apart.push(("LECT.1".into(), "LECT.2".into()));
    apart.push(("COMMON.1".into(), "SPEC.1".into()));

    let timetable = plant_timetable(&inst, &apart, &mut rng)?;

    // professors request a day they are actually free on, half the time
    let mut teaching_days: HashMap<&str, HashSet<u32>> = HashMap::new();
    for s in &inst.sections {
        let days = teaching_days.entry(s.professor_id.as_str()).or_default();
        for &(d, _) in timetable.slots(&s.id).unwrap_or(&[]) {
            days.insert(d);
        }
    }
    let requested: Vec<Option<u32>> = inst
        .professors
        .iter()
        .map(|p| {
            let taught = teaching_days.get(p.id.as_str()).cloned().unwrap_or_default();
            let free: Vec<u32> = (0..inst.grid.days).filter(|d| !taught.contains(d)).collect();
            if !free.is_empty() && rng.random_bool(0.5) {
                Some(*free.choose(&mut rng).expect("nonempty"))
            } else {
                None
            }
        })
        .collect();
    for (p, r) in inst.professors.iter_mut().zip(requested) {
        p.requested_day_off = r;
    }

    debug_assert!(crate::instance::validate(&inst).is_empty());
    Ok((
        inst,
        PlantedSolution {
            sectioning,
            timetable,
        },
    ))
}

/// Places every section of the instance so that all `apart` pairs are
/// slot-disjoint, non-extended meetings land on distinct days, room-type
/// demand never exceeds supply, and every professor keeps a free day.
fn plant_timetable(
    inst: &Instance,
    apart: &[(String, String)],
    rng: &mut ChaCha8Rng,
) -> Result<Timetable> {
    let mut forbidden: HashMap<&str, HashSet<(u32, u32)>> = HashMap::new();
    let mut neighbors: HashMap<&str, Vec<&str>> = HashMap::new();
    for (a, b) in apart {
        neighbors.entry(a.as_str()).or_default().push(b.as_str());
        neighbors.entry(b.as_str()).or_default().push(a.as_str());
    }
    let mut rooms_per_type: HashMap<&str, u32> = HashMap::new();
    for r in &inst.rooms {
        *rooms_per_type.entry(r.room_type.as_str()).or_insert(0) += 1;
    }
    let mut rt_usage: HashMap<(u32, u32, &str), u32> = HashMap::new();
    let mut prof_days: HashMap<&str, HashSet<u32>> = HashMap::new();

    // big blocks first, then by id for determinism
    let mut order: Vec<&Section> = inst.sections.iter().collect();
    order.sort_by_key(|s| (std::cmp::Reverse(s.meetings_per_week), s.id.clone()));

    let mut tt = Timetable::new();
    for s in order {
        let blocked = forbidden.remove(s.id.as_str()).unwrap_or_default();
        let supply = rooms_per_type[s.room_type.as_str()];
        let days_of = prof_days.entry(s.professor_id.as_str()).or_default();
        let max_days = inst.grid.days - 1;

        let slots: Vec<(u32, u32)> = if s.is_extended {
            let mut candidates: Vec<(u32, u32)> = (0..inst.grid.days)
                .flat_map(|d| {
                    inst.grid
                        .block_starts(s.meetings_per_week)
                        .into_iter()
                        .map(move |t| (d, t))
                })
                .collect();
            candidates.shuffle(rng);
            let found = candidates.into_iter().find(|&(d, t)| {
                let block: Vec<(u32, u32)> =
                    (t..t + s.meetings_per_week).map(|p| (d, p)).collect();
                let day_ok = days_of.contains(&d) || (days_of.len() as u32) < max_days;
                day_ok
                    && block.iter().all(|slot| {
                        !blocked.contains(slot)
                            && rt_usage
                                .get(&(slot.0, slot.1, s.room_type.as_str()))
                                .copied()
                                .unwrap_or(0)
                                < supply
                    })
            });
            match found {
                Some((d, t)) => (t..t + s.meetings_per_week).map(|p| (d, p)).collect(),
                None => {
                    return Err(Error::Unsupported(format!(
                        "planting failed for extended section {}",
                        s.id
                    )))
                }
            }
        } else {
            let mut candidates = inst.grid.teaching_slots();
            candidates.shuffle(rng);
            let mut picked: Vec<(u32, u32)> = Vec::new();
            let mut used_days: HashSet<u32> = HashSet::new();
            for (d, t) in candidates {
                if picked.len() == s.meetings_per_week as usize {
                    break;
                }
                if used_days.contains(&d) || blocked.contains(&(d, t)) {
                    continue;
                }
                // meetings land on distinct days; never eat the professor's
                // last free day
                let fresh_days = used_days.iter().filter(|x| !days_of.contains(x)).count() as u32;
                if !days_of.contains(&d) && days_of.len() as u32 + fresh_days + 1 > max_days {
                    continue;
                }
                if rt_usage
                    .get(&(d, t, s.room_type.as_str()))
                    .copied()
                    .unwrap_or(0)
                    >= supply
                {
                    continue;
                }
                picked.push((d, t));
                used_days.insert(d);
            }
            if picked.len() != s.meetings_per_week as usize {
                return Err(Error::Unsupported(format!(
                    "planting failed for section {}",
                    s.id
                )));
            }
            picked
        };

        for &(d, t) in &slots {
            *rt_usage.entry((d, t, s.room_type.as_str())).or_insert(0) += 1;
            days_of.insert(d);
        }
        for n in neighbors.get(s.id.as_str()).into_iter().flatten() {
            forbidden.entry(n).or_default().extend(slots.iter().copied());
        }
        tt.set_slots(s.id.clone(), slots);
    }
    Ok(tt)
}

// ---------------------------------------------------------------------------
// scaled presets

struct ScaleParams {
    target_sections: usize,
    n_groups: usize,
    group_size: (u32, u32),
    n_core: usize,
    core_per_group: usize,
    plain_majors_per_group: usize,
    family_share: f64,
    extended_share: f64,
    cap_target: u32,
    slack: f64,
    single_room_courses: usize,
}

impl ScaleParams {
    fn for_preset(name: &str, over: Option<usize>) -> ScaleParams {
        let mut p = match name {
            "easy" => ScaleParams {
                target_sections: 256,
                n_groups: 40,
                group_size: (8, 12),
                n_core: 10,
                core_per_group: 3,
                plain_majors_per_group: 3,
                family_share: 0.40,
                extended_share: 0.30,
                cap_target: 18,
                slack: 1.25,
                single_room_courses: 1,
            },
            "medium" => ScaleParams {
                target_sections: 339,
                n_groups: 48,
                group_size: (8, 13),
                n_core: 12,
                core_per_group: 4,
                plain_majors_per_group: 3,
                family_share: 0.45,
                extended_share: 0.33,
                cap_target: 18,
                slack: 1.22,
                single_room_courses: 1,
            },
            "medium2" => ScaleParams {
                target_sections: 352,
                n_groups: 50,
                group_size: (8, 13),
                n_core: 12,
                core_per_group: 4,
                plain_majors_per_group: 3,
                family_share: 0.45,
                extended_share: 0.35,
                cap_target: 18,
                slack: 1.22,
                single_room_courses: 1,
            },
            "hard" => ScaleParams {
                target_sections: 372,
                n_groups: 52,
                group_size: (9, 14),
                n_core: 14,
                core_per_group: 5,
                plain_majors_per_group: 3,
                family_share: 0.50,
                extended_share: 0.38,
                cap_target: 18,
                slack: 1.20,
                single_room_courses: 2,
            },
            _ => unreachable!("preset checked by Preset::parse"),
        };
        if let Some(t) = over {
            p.target_sections = t;
        }
        p
    }
}

struct CoursePlan {
    id: String,
    demand: u32,
    sections: usize,
    meetings: u32,
    extended: bool,
    room_type: String,
    /// id of the lecture course this lab belongs to
    parent_course: Option<String>,
}

fn scaled(p: &ScaleParams, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5343_414c);
    let grid = grid();

    // groups and their requirement lists
    let mut groups: Vec<MajorGroup> = Vec::with_capacity(p.n_groups);
    let mut plans: Vec<CoursePlan> = Vec::new();
    let mut requirements: Vec<Vec<String>> = Vec::new();

    let core_ids: Vec<String> = (1..=p.n_core).map(|k| format!("CORE{k:02}")).collect();
    for (i, id) in core_ids.iter().enumerate() {
        let _ = i;
        plans.push(CoursePlan {
            id: id.clone(),
            demand: 0,
            sections: 1,
            meetings: 3,
            extended: false,
            room_type: "cls".into(),
            parent_course: None,
        });
    }

    for gi in 1..=p.n_groups {
        let gid = format!("G{gi:02}");
        let size = rng.random_range(p.group_size.0..=p.group_size.1);
        let mut required: Vec<String> = vec!["COMMON".into()];

        let mut cores = core_ids.clone();
        cores.shuffle(&mut rng);
        required.extend(cores.into_iter().take(p.core_per_group));

        for mj in 1..=p.plain_majors_per_group {
            let cid = format!("{gid}.M{mj}");
            let extended = rng.random_bool(p.extended_share);
            let meetings = if extended {
                *[2u32, 2, 3, 3, 4].choose(&mut rng).unwrap()
            } else {
                *[2u32, 3, 3, 3, 4].choose(&mut rng).unwrap()
            };
            plans.push(CoursePlan {
                id: cid.clone(),
                demand: 0,
                sections: 1,
                meetings,
                extended,
                room_type: "cls".into(),
                parent_course: None,
            });
            required.push(cid);
        }

        if rng.random_bool(p.family_share) {
            let lect = format!("{gid}.LECT");
            let lab = format!("{gid}.LAB");
            plans.push(CoursePlan {
                id: lect.clone(),
                demand: 0,
                sections: 1,
                meetings: 3,
                extended: false,
                room_type: "cls".into(),
                parent_course: None,
            });
            plans.push(CoursePlan {
                id: lab.clone(),
                demand: 0,
                sections: 1,
                meetings: *[2u32, 2, 3].choose(&mut rng).unwrap(),
                extended: true,
                room_type: "lab".into(),
                parent_course: Some(lect.clone()),
            });
            required.push(lect);
            required.push(lab);
        }

        requirements.push(required.clone());
        groups.push(MajorGroup {
            id: gid,
            size,
            required_course_ids: required,
        });
    }

    let total_students: u32 = groups.iter().map(|m| m.size).sum();

    // demands
    let mut demand: HashMap<&str, u32> = HashMap::new();
    for (g, req) in groups.iter().zip(&requirements) {
        for c in req {
            *demand.entry(c.as_str()).or_insert(0) += g.size;
        }
    }
    for plan in &mut plans {
        plan.demand = demand.get(plan.id.as_str()).copied().unwrap_or(0);
    }
    plans.retain(|plan| plan.demand > 0);

    // a couple of small courses live in the one-room auditorium type
    let mut single_room_left = p.single_room_courses;
    for plan in &mut plans {
        if single_room_left == 0 {
            break;
        }
        if plan.parent_course.is_none() && !plan.extended && plan.demand <= p.group_size.1 {
            plan.room_type = "aud".into();
            single_room_left -= 1;
        }
    }

    // initial section counts from demand, then adjust onto the exact target
    for plan in &mut plans {
        plan.sections = ((plan.demand as f64 / p.cap_target as f64).ceil() as usize).max(1);
    }
    // labs mirror their lectures
    sync_families(&mut plans);
    let mut total: usize = 1 + plans.iter().map(|c| c.sections).sum::<usize>();

    let target = p.target_sections;
    let child_of = |plans: &[CoursePlan], k: usize| -> Option<usize> {
        plans
            .iter()
            .position(|c| c.parent_course.as_deref() == Some(plans[k].id.as_str()))
    };
    let mut guard = 0;
    while total != target && guard < 10_000 {
        guard += 1;
        if total < target {
            // widest course (most students per section) gains a section; a
            // lecture drags its lab so families stay aligned
            let k = widest(&plans, total + 1 == target);
            plans[k].sections += 1;
            total += 1;
            if let Some(ck) = child_of(&plans, k) {
                plans[ck].sections += 1;
                total += 1;
            }
        } else {
            match narrowest(&plans, total - 1 == target) {
                Some(k) => {
                    plans[k].sections -= 1;
                    total -= 1;
                    if let Some(ck) = child_of(&plans, k) {
                        plans[ck].sections -= 1;
                        total -= 1;
                    }
                }
                None => break,
            }
        }
    }

    // professors: two to three sections each
    let n_prof = (total as f64 / 2.2).ceil() as usize;
    let professors: Vec<Professor> = (1..=n_prof)
        .map(|k| Professor {
            id: format!("P{k:03}"),
            requested_day_off: if rng.random_bool(0.5) {
                Some(rng.random_range(0..grid.days))
            } else {
                None
            },
        })
        .collect();
    let mut prof_slots: Vec<usize> = (0..n_prof).flat_map(|k| [k, k, k]).collect();
    prof_slots.shuffle(&mut rng);

    // sections
    let mut sections: Vec<Section> = vec![Section {
        id: "COMMON.1".into(),
        course_id: "COMMON".into(),
        capacity: total_students,
        professor_id: professors[0].id.clone(),
        room_type: "aud".into(),
        meetings_per_week: 1,
        is_extended: false,
        parent_id: None,
    }];
    let mut prof_cursor = 0;
    let next_prof = |cursor: &mut usize| -> String {
        let k = prof_slots[*cursor % prof_slots.len()];
        *cursor += 1;
        professors[k].id.clone()
    };
    // lectures first so labs can reference their parents
    let mut ordered: Vec<&CoursePlan> = plans.iter().filter(|c| c.parent_course.is_none()).collect();
    ordered.extend(plans.iter().filter(|c| c.parent_course.is_some()));
    for plan in ordered {
        let cap = ((plan.demand as f64 * p.slack / plan.sections as f64).ceil() as u32).max(1);
        for k in 1..=plan.sections {
            sections.push(Section {
                id: format!("{}.{k:02}", plan.id),
                course_id: plan.id.clone(),
                capacity: cap,
                professor_id: next_prof(&mut prof_cursor),
                room_type: plan.room_type.clone(),
                meetings_per_week: plan.meetings,
                is_extended: plan.extended,
                parent_id: plan
                    .parent_course
                    .as_ref()
                    .map(|parent| format!("{parent}.{k:02}")),
            });
        }
    }
    // family capacities must match: labs copy the lecture capacity
    let caps: HashMap<String, u32> = sections.iter().map(|s| (s.id.clone(), s.capacity)).collect();
    for s in &mut sections {
        if let Some(parent) = &s.parent_id {
            s.capacity = caps[parent];
        }
    }

    // rooms sized to type load
    let mut type_meetings: HashMap<&str, u32> = HashMap::new();
    for s in &sections {
        *type_meetings.entry(s.room_type.as_str()).or_insert(0) += s.meetings_per_week;
    }
    let slots = (grid.days * (grid.periods_per_day - 1)) as f64;
    let mut rooms: Vec<Room> = vec![Room {
        id: "AUD1".into(),
        room_type: "aud".into(),
    }];
    for (rt, prefix) in [("cls", "C"), ("lab", "L")] {
        let load = type_meetings.get(rt).copied().unwrap_or(0) as f64;
        let count = ((load / slots) * 1.30).ceil().max(2.0) as usize;
        for k in 1..=count {
            rooms.push(Room {
                id: format!("{prefix}{k:02}"),
                room_type: rt.into(),
            });
        }
    }

    let mut courses: Vec<Course> = vec![Course { id: "COMMON".into() }];
    courses.extend(plans.iter().map(|c| Course { id: c.id.clone() }));

    let inst = Instance {
        common_section_id: Some("COMMON.1".into()),
        grid,
        rooms,
        professors,
        courses,
        sections,
        major_groups: groups,
        weights: Weights::default(),
    };
    debug_assert_eq!(crate::instance::validate(&inst), vec![]);
    Ok(inst)
}

fn sync_families(plans: &mut [CoursePlan]) {
    let counts: HashMap<String, usize> = plans
        .iter()
        .map(|c| (c.id.clone(), c.sections))
        .collect();
    for plan in plans.iter_mut() {
        if let Some(parent) = &plan.parent_course {
            plan.sections = counts[parent];
        }
    }
}

/// Course with the most students per section; `singles_only` restricts the
/// pick to courses outside families (a family adjustment moves two counts).
fn widest(plans: &[CoursePlan], singles_only: bool) -> usize {
    let mut best = usize::MAX;
    let mut best_ratio = -1.0;
    for (k, plan) in plans.iter().enumerate() {
        if plan.parent_course.is_some() {
            continue; // labs follow their lectures
        }
        let in_family = plans.iter().any(|c| c.parent_course.as_deref() == Some(&plan.id));
        if singles_only && in_family {
            continue;
        }
        let ratio = plan.demand as f64 / plan.sections as f64;
        if ratio > best_ratio {
            best_ratio = ratio;
            best = k;
        }
    }
    best
}

fn narrowest(plans: &[CoursePlan], singles_only: bool) -> Option<usize> {
    let mut best = None;
    let mut best_ratio = f64::INFINITY;
    for (k, plan) in plans.iter().enumerate() {
        if plan.parent_course.is_some() || plan.sections <= 1 {
            continue;
        }
        let in_family = plans.iter().any(|c| c.parent_course.as_deref() == Some(&plan.id));
        if singles_only && in_family {
            continue;
        }
        let ratio = plan.demand as f64 / plan.sections as f64;
        if ratio < best_ratio {
            best_ratio = ratio;
            best = Some(k);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{serialize_instance, validate};

    #[test]
    fn tiny_is_small_and_valid() {
        for seed in [1, 7, 23] {
            let (inst, plant) = generate_with_plant("tiny", seed).unwrap();
            assert!(validate(&inst).is_empty(), "seed {seed}");
            assert!(inst.sections.len() <= 12);
            assert!(inst.student_count() <= 8);
            assert!(inst.courses.len() <= 5);
            let plant = plant.expect("tiny plants a solution");
            // the planted sectioning is valid
            let vs =
                crate::conflict_graph::validate_sectioning(&inst, &plant.sectioning).unwrap();
            assert!(vs.is_empty(), "seed {seed}: {vs:?}");
        }
    }

    #[test]
    fn tiny_plant_scores_zero() {
        for seed in [1, 2, 3, 4, 5] {
            let (inst, plant) = generate_with_plant("tiny", seed).unwrap();
            let plant = plant.unwrap();
            let g = crate::conflict_graph::scg_of(&inst, &plant.sectioning).unwrap();
            let report = crate::timetable::score(
                &inst,
                &g,
                &plant.timetable,
                &inst.soft_weights(),
            )
            .unwrap();
            assert_eq!(report.total, 0.0, "seed {seed}: {report:?}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_instance("easy", 1).unwrap();
        let b = generate_instance("easy", 1).unwrap();
        assert_eq!(serialize_instance(&a), serialize_instance(&b));
    }

    #[test]
    fn presets_hit_their_section_scales() {
        for (name, target) in [("easy", 256), ("medium", 339), ("medium2", 352), ("hard", 372)] {
            let inst = generate_instance(name, 1).unwrap();
            let n = inst.sections.len() as f64;
            let t = target as f64;
            assert!(
                (n - t).abs() <= t * 0.10,
                "{name}: {n} sections vs target {t}"
            );
            assert!(validate(&inst).is_empty(), "{name}");
        }
    }

    #[test]
    fn unknown_preset_is_an_error() {
        assert!(matches!(
            generate_instance("nope", 1),
            Err(Error::UnknownPreset(_))
        ));
    }

    #[test]
    fn generated_instances_validate_over_many_seeds() {
        for preset in ["tiny", "easy"] {
            for seed in 0..25 {
                let inst = generate_instance(preset, seed).unwrap();
                assert!(validate(&inst).is_empty(), "{preset} seed {seed}");
            }
        }
    }
}
