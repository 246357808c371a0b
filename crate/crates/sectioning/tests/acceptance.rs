//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers (run with `--nocapture` to see them all).

use std::collections::HashSet;
use std::time::{Duration, Instant};

use sectioning::conflict_graph::{
    edge_count, scg_of, validate_sectioning, weighted_edge_count, Sectioning,
};
use sectioning::documents;
use sectioning::greedy::greedy_section;
use sectioning::instance::{
    expand_students, generate_instance, generate_with_plant, parse_instance, serialize_instance,
    Instance,
};
use sectioning::minimize::{
    brute_force_optimum, build_model, export_model, improve, objective_value, ExportFormat,
    ObjectiveSpec,
};
use sectioning::render::{render_schedule, RenderSelector};
use sectioning::timetable::{
    extract_tabu, legal_starts, phased_solve, score, solve, PhaseBudgets, SoftWeights, Timetable,
};

mod helpers;
use helpers::{random_valid_sectioning, tabu_probe_instance, tiny_line_instance};

const BRUTE_LIMIT: u64 = 1_000_000;

/// Criterion 1 — oracle optimality: exhaustive optimum on 20 seeded tiny
/// instances in < 30 s each; local search from the greedy start matches the
/// optimum on at least 80% and never undercuts it.
#[test]
fn acceptance_01_oracle_optimality() {
    let spec = |inst: &Instance| ObjectiveSpec::weighted(inst.edge_weights());
    let mut matches = 0;
    for seed in 1..=20u64 {
        let inst = generate_instance("tiny", seed).unwrap();
        assert!(inst.student_count() <= 6, "tiny stays oracle-scale");
        assert!(inst.courses.len() <= 5);

        let started = Instant::now();
        let (_, optimum) = brute_force_optimum(&inst, &spec(&inst), BRUTE_LIMIT).unwrap();
        let brute_secs = started.elapsed().as_secs_f64();
        assert!(
            brute_secs < 30.0,
            "seed {seed}: enumeration took {brute_secs:.1}s"
        );

        let (start, _) = greedy_section(&inst, seed).unwrap();
        let out = improve(&inst, &start, &spec(&inst), Duration::from_secs(10), seed, 1).unwrap();
        assert!(
            out.value >= optimum - 1e-9,
            "seed {seed}: {} undercuts the optimum {}",
            out.value,
            optimum
        );
        if (out.value - optimum).abs() < 1e-9 {
            matches += 1;
        }
    }
    assert!(matches >= 16, "only {matches}/20 runs reached the optimum");
    println!("ACCEPTANCE 1 PASS: optimum matched on {matches}/20 tiny instances, never undercut");
}

/// Criterion 2 — model soundness: 1000 random valid sectionings satisfy the
/// constraint model, and their assignments translate back to valid
/// sectionings, with zero failures.
#[test]
fn acceptance_02_model_soundness() {
    let mut checked = 0;
    let mut failures = 0;
    'outer: for inst_seed in 1..=10u64 {
        let inst = generate_instance("tiny", inst_seed).unwrap();
        let model = build_model(&inst, &ObjectiveSpec::weighted(inst.edge_weights())).unwrap();
        for draw in 0..100u64 {
            let f = random_valid_sectioning(&inst, inst_seed * 1000 + draw);
            let (x, y) = model.assignment_from(&inst, &f).unwrap();
            if !model.check(&x, &y).is_empty() {
                failures += 1;
            }
            let back = model.sectioning_from_x(&x).unwrap();
            if back != f || !validate_sectioning(&inst, &back).unwrap().is_empty() {
                failures += 1;
            }
            checked += 1;
            if checked == 1000 {
                break 'outer;
            }
        }
    }
    assert_eq!(checked, 1000);
    assert_eq!(failures, 0);
    println!("ACCEPTANCE 2 PASS: 1000 sectionings round-tripped through the model, 0 failures");
}

/// Criterion 3 — greedy validity and scale: all four presets stay within
/// ±10% of the 256 / 339 / 352 / 372 section scales and the greedy
/// sectioning is violation-free in under 60 s per preset.
#[test]
fn acceptance_03_greedy_validity_and_scale() {
    for (preset, target) in [("easy", 256.0), ("medium", 339.0), ("medium2", 352.0), ("hard", 372.0)] {
        let started = Instant::now();
        let inst = generate_instance(preset, 1).unwrap();
        let sections = inst.sections.len() as f64;
        assert!(
            (sections - target).abs() <= target * 0.10,
            "{preset}: {sections} sections vs {target}"
        );
        let (f, _) = greedy_section(&inst, 1).unwrap();
        let elapsed = started.elapsed().as_secs_f64();
        assert!(elapsed < 60.0, "{preset}: greedy took {elapsed:.1}s");
        let violations = validate_sectioning(&inst, &f).unwrap();
        assert!(violations.is_empty(), "{preset}: {violations:?}");
        println!(
            "ACCEPTANCE 3 PASS ({preset}): {} sections, 0 violations in {elapsed:.2}s",
            inst.sections.len()
        );
    }
}

/// Criterion 4 — edge reduction: on the medium preset a 100 s improve run
/// cuts the weighted edge count by at least 1% on at least 2 of 3 seeds.
#[test]
fn acceptance_04_edge_reduction_on_medium() {
    let mut reductions = Vec::new();
    for seed in 1..=3u64 {
        let inst = generate_instance("medium", seed).unwrap();
        let spec = ObjectiveSpec::weighted(inst.edge_weights());
        let (start, _) = greedy_section(&inst, seed).unwrap();
        let before = objective_value(&inst, &start, &spec).unwrap();
        let out = improve(&inst, &start, &spec, Duration::from_secs(100), seed, 1).unwrap();
        let reduction = 100.0 * (before - out.value) / before;
        reductions.push(reduction);
    }
    let hits = reductions.iter().filter(|r| **r >= 1.0).count();
    assert!(
        hits >= 2,
        "only {hits}/3 seeds reached 1% (got {reductions:?})"
    );
    println!(
        "ACCEPTANCE 4 PASS: weighted-edge reductions {:.2?}% on medium, {hits}/3 over 1%",
        reductions
    );
}

/// Criterion 5 — planted feasibility: the tiny preset's planted solution is
/// reachable (score 0 via phased_solve within 60 s on 5 seeds) and the
/// rendering of the planted timetable reproduces the planted grid slot for
/// slot.
#[test]
fn acceptance_05_planted_feasibility_and_render() {
    for seed in 1..=5u64 {
        let (inst, plant) = generate_with_plant("tiny", seed).unwrap();
        let plant = plant.expect("tiny plants");
        let g = scg_of(&inst, &plant.sectioning).unwrap();

        let started = Instant::now();
        let (_, report) = phased_solve(
            &inst,
            &g,
            &inst.soft_weights(),
            PhaseBudgets::even(Duration::from_secs(58)),
            seed,
            1,
        )
        .unwrap();
        let elapsed = started.elapsed().as_secs_f64();
        assert!(elapsed < 60.0, "seed {seed}: {elapsed:.1}s");
        assert_eq!(report.total, 0.0, "seed {seed}: {report:?}");

        // render fidelity against the planted grid
        for division in sectioning::conflict_graph::divisions(&inst, &plant.sectioning).unwrap() {
            let text = render_schedule(
                &inst,
                &plant.sectioning,
                &plant.timetable,
                &RenderSelector::Division(division.id.clone()),
            )
            .unwrap();
            helpers::assert_render_matches_slots(
                &text,
                &inst,
                &division.section_ids,
                &plant.timetable,
            );
        }
    }
    println!("ACCEPTANCE 5 PASS: planted tiny solved to 0 on 5/5 seeds, render matches the plant");
}

/// Criterion 6 — structural properties of 100 solver-emitted timetables:
/// no lunch usage, contiguous extended blocks, exact meeting counts, and
/// the reported objective equals an independent score recomputation.
#[test]
fn acceptance_06_structural_properties() {
    let mut emitted = 0;
    'outer: for inst_seed in 1..=10u64 {
        let inst = generate_instance("tiny", inst_seed).unwrap();
        for run in 0..10u64 {
            let f = random_valid_sectioning(&inst, 777 + inst_seed * 97 + run);
            let g = scg_of(&inst, &f).unwrap();
            let (tt, report) = solve(
                &inst,
                &g,
                &inst.soft_weights(),
                None,
                None,
                Duration::from_secs(3),
                run,
                1,
            )
            .unwrap();

            for (sec_id, slots) in tt.iter_slots() {
                let section = inst.section(sec_id).unwrap();
                assert_eq!(
                    slots.len(),
                    section.meetings_per_week as usize,
                    "{sec_id}: meeting count"
                );
                for &(_, t) in slots {
                    assert_ne!(Some(t), inst.grid.lunch_period, "{sec_id}: lunch used");
                }
                if section.is_extended {
                    let day = slots[0].0;
                    assert!(
                        slots.iter().all(|&(d, _)| d == day)
                            && slots.windows(2).all(|w| w[1].1 == w[0].1 + 1),
                        "{sec_id}: extended block not contiguous: {slots:?}"
                    );
                    assert!(
                        legal_starts(&inst, sec_id).unwrap().contains(&slots[0]),
                        "{sec_id}: illegal start {:?}",
                        slots[0]
                    );
                }
            }
            let recomputed = score(&inst, &g, &tt, &inst.soft_weights()).unwrap();
            assert_eq!(recomputed.total, report.total, "objective mismatch");
            emitted += 1;
            if emitted == 100 {
                break 'outer;
            }
        }
    }
    assert_eq!(emitted, 100);
    println!("ACCEPTANCE 6 PASS: 100 timetables structurally clean, objectives exact");
}

/// Criterion 7 — timetable oracle: on 1-day toy instances the solver's
/// objective equals exhaustive enumeration over every timetable, 20/20.
#[test]
fn acceptance_07_timetable_oracle() {
    for seed in 1..=20u64 {
        let (inst, f) = tiny_line_instance(seed);
        let g = scg_of(&inst, &f).unwrap();
        let w = inst.soft_weights();

        let best = helpers::enumerate_best_score(&inst, &g, &w);
        let (_, report) = solve(
            &inst,
            &g,
            &w,
            None,
            None,
            Duration::from_secs(5),
            seed,
            1,
        )
        .unwrap();
        assert_eq!(
            report.total, best,
            "seed {seed}: solver {} vs enumeration {}",
            report.total, best
        );
    }
    println!("ACCEPTANCE 7 PASS: solver matched enumeration on 20/20 one-day instances");
}

/// Criterion 8 — tabu loop efficacy: a sectioning whose aligned assignments
/// force a clash gets repaired in one tabu round; the tabu'd assignments
/// disappear and the re-timetabled score strictly decreases.
#[test]
fn acceptance_08_tabu_loop() {
    let (inst, f_bad) = tabu_probe_instance();
    assert!(validate_sectioning(&inst, &f_bad).unwrap().is_empty());
    let weights = inst.edge_weights();
    let soft = inst.soft_weights();

    let g1 = scg_of(&inst, &f_bad).unwrap();
    let (_, report1) = phased_solve(
        &inst,
        &g1,
        &soft,
        PhaseBudgets::even(Duration::from_secs(20)),
        3,
        1,
    )
    .unwrap();
    assert!(
        report1.clash_count() >= 1,
        "the aligned sectioning must clash: {report1:?}"
    );

    let tabu = extract_tabu(&inst, &f_bad, &report1).unwrap();
    assert!(!tabu.is_empty(), "every clash pair here has a student witness");

    let retry = improve(
        &inst,
        &f_bad,
        &ObjectiveSpec::weighted_tabu(weights, tabu.clone()),
        Duration::from_secs(10),
        3,
        1,
    )
    .unwrap();
    for (student, section) in tabu.iter() {
        let course = &inst.section(section).unwrap().course_id;
        assert_ne!(
            retry.sectioning.get(student, course),
            Some(section.as_str()),
            "tabu pair ({student}, {section}) survived the round"
        );
    }

    let g2 = scg_of(&inst, &retry.sectioning).unwrap();
    let (_, report2) = phased_solve(
        &inst,
        &g2,
        &soft,
        PhaseBudgets::even(Duration::from_secs(20)),
        3,
        1,
    )
    .unwrap();
    assert!(
        report2.total < report1.total,
        "score did not strictly decrease: {} -> {}",
        report1.total,
        report2.total
    );
    println!(
        "ACCEPTANCE 8 PASS: one tabu round cleared the tabu pairs, score {} -> {}",
        report1.total, report2.total
    );
}

/// Criterion 9 — determinism: every stage with one worker and a fixed seed
/// reproduces byte-identical output documents across 3 runs.
#[test]
fn acceptance_09_determinism() {
    let mut outputs: Vec<Vec<String>> = Vec::new();
    for _ in 0..3 {
        let mut docs = Vec::new();
        let inst = generate_instance("tiny", 11).unwrap();
        docs.push(serialize_instance(&inst));

        let (f_greedy, _) = greedy_section(&inst, 11).unwrap();
        docs.push(documents::write_sectioning(&f_greedy));

        let spec = ObjectiveSpec::weighted(inst.edge_weights());
        let improved = improve(&inst, &f_greedy, &spec, Duration::from_secs(8), 11, 1).unwrap();
        docs.push(documents::write_sectioning(&improved.sectioning));

        let g = scg_of(&inst, &improved.sectioning).unwrap();
        let (tt, report) = phased_solve(
            &inst,
            &g,
            &inst.soft_weights(),
            PhaseBudgets::even(Duration::from_secs(20)),
            11,
            1,
        )
        .unwrap();
        docs.push(documents::write_timetable(&tt));
        docs.push(documents::write_report(&report));

        let division = sectioning::conflict_graph::divisions(&inst, &improved.sectioning)
            .unwrap()
            .remove(0);
        docs.push(
            render_schedule(
                &inst,
                &improved.sectioning,
                &tt,
                &RenderSelector::Division(division.id),
            )
            .unwrap(),
        );

        let model = build_model(&inst, &spec).unwrap();
        let export = export_model(&model, ExportFormat::PseudoBoolean).unwrap();
        docs.push(export.model);
        docs.push(export.var_map);

        outputs.push(docs);
    }
    for run in 1..3 {
        for (k, (a, b)) in outputs[0].iter().zip(&outputs[run]).enumerate() {
            assert_eq!(a, b, "document {k} differs between run 0 and run {run}");
        }
    }
    println!(
        "ACCEPTANCE 9 PASS: {} stage documents byte-identical across 3 runs",
        outputs[0].len()
    );
}

/// Criterion 10 — export round trip: an independent evaluator over the
/// exported pseudo-boolean text reports exactly the internal optimum's
/// objective.
#[test]
fn acceptance_10_export_round_trip() {
    for seed in 1..=3u64 {
        let inst = generate_instance("tiny", seed).unwrap();
        let spec = ObjectiveSpec::weighted(inst.edge_weights());
        let model = build_model(&inst, &spec).unwrap();
        let export = export_model(&model, ExportFormat::PseudoBoolean).unwrap();

        let (f_opt, optimum) = brute_force_optimum(&inst, &spec, BRUTE_LIMIT).unwrap();
        let (x, y) = model.assignment_from(&inst, &f_opt).unwrap();

        let evaluated = helpers::evaluate_opb(&export.model, &export.var_map, &model, &x, &y);
        assert_eq!(
            evaluated, optimum,
            "seed {seed}: OPB evaluator disagrees with the oracle"
        );
    }
    println!("ACCEPTANCE 10 PASS: OPB evaluation equals the internal optimum exactly");
}

/// Extra coverage used by several criteria: the objective variants agree
/// with the plain edge count when all weights are one.
#[test]
fn unit_weights_collapse_to_edge_count() {
    let inst = generate_instance("tiny", 4).unwrap();
    let f = random_valid_sectioning(&inst, 99);
    let mut w = inst.edge_weights();
    w.a = 1.0;
    w.b = 1.0;
    w.c = 1.0;
    let g = scg_of(&inst, &f).unwrap();
    assert_eq!(
        weighted_edge_count(&g, &inst, &w).unwrap(),
        edge_count(&g) as f64
    );
    assert_eq!(
        objective_value(&inst, &f, &ObjectiveSpec::edges()).unwrap(),
        edge_count(&g) as f64
    );
}

/// Base graph containment and student-edge recount, on top of the tiny
/// generator (used by criteria 1 and 2 as a sanity base).
#[test]
fn scg_contains_base_and_matches_recount() {
    for seed in 1..=5u64 {
        let inst = generate_instance("tiny", seed).unwrap();
        let f = random_valid_sectioning(&inst, seed);
        let base = sectioning::conflict_graph::base_scg(&inst).unwrap();
        let g = scg_of(&inst, &f).unwrap();
        for ((a, b), _) in base.edges() {
            assert!(g.has_edge(a, b), "base edge ({a},{b}) missing");
        }
        // independent recount over every (student, section pair)
        let students = expand_students(&inst);
        let ids = g.section_ids();
        let mut recount = HashSet::new();
        for ((a, b), kinds) in base.edges() {
            let _ = kinds;
            recount.insert((a, b));
        }
        for s in &students {
            let mine: Vec<u32> = (0..ids.len() as u32)
                .filter(|&k| {
                    let sec = inst.section(&ids[k as usize]).unwrap();
                    f.get(&s.id, &sec.course_id) == Some(ids[k as usize].as_str())
                })
                .collect();
            for i in 0..mine.len() {
                for j in (i + 1)..mine.len() {
                    recount.insert((mine[i].min(mine[j]), mine[i].max(mine[j])));
                }
            }
        }
        assert_eq!(recount.len(), edge_count(&g), "seed {seed}");
    }
}

/// Generator invariant: 100 random seeds per preset give violation-free
/// instances.
#[test]
fn generated_instances_validate_over_100_seeds_per_preset() {
    for preset in ["tiny", "easy", "medium", "medium2", "hard"] {
        for seed in 0..100u64 {
            let inst = generate_instance(preset, seed).unwrap();
            let violations = sectioning::instance::validate(&inst);
            assert!(violations.is_empty(), "{preset} seed {seed}: {violations:?}");
        }
    }
}

/// Greedy runs on 20 tiny seeds stay valid and never beat the enumerated
/// optimum (the sane direction of the bound); the mean gap gets printed.
#[test]
fn greedy_stays_above_the_oracle_on_tiny() {
    let mut gaps = Vec::new();
    for seed in 1..=20u64 {
        let inst = generate_instance("tiny", seed).unwrap();
        let spec = ObjectiveSpec::weighted(inst.edge_weights());
        let (f, _) = greedy_section(&inst, seed).unwrap();
        assert!(validate_sectioning(&inst, &f).unwrap().is_empty());
        let value = objective_value(&inst, &f, &spec).unwrap();
        let (_, optimum) = brute_force_optimum(&inst, &spec, BRUTE_LIMIT).unwrap();
        assert!(value >= optimum - 1e-9, "seed {seed}: {value} < {optimum}");
        gaps.push(value - optimum);
    }
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    println!("greedy mean gap over the optimum on tiny: {mean:.2}");
}

/// Divisions stay inside major-groups and split exactly by schedule.
#[test]
fn divisions_verified_by_pairwise_comparison() {
    let inst = generate_instance("tiny", 6).unwrap();
    let f = random_valid_sectioning(&inst, 42);
    let divisions = sectioning::conflict_graph::divisions(&inst, &f).unwrap();
    let students = expand_students(&inst);
    let schedule = |id: &str| -> Vec<&str> {
        let student = students.iter().find(|s| s.id == id).unwrap();
        let mut v: Vec<&str> = student
            .required_course_ids
            .iter()
            .map(|c| f.get(id, c).unwrap())
            .collect();
        v.sort();
        v
    };
    let mut seen = 0;
    for d in &divisions {
        for pair in d.student_ids.windows(2) {
            assert_eq!(schedule(&pair[0]), schedule(&pair[1]));
        }
        let group = &d.major_group_id;
        assert!(d.student_ids.iter().all(|s| s.starts_with(group.as_str())));
        seen += d.student_ids.len();
    }
    assert_eq!(seen, students.len());
    // across divisions of one group, schedules differ
    for a in &divisions {
        for b in &divisions {
            if a.id != b.id && a.major_group_id == b.major_group_id {
                assert_ne!(schedule(&a.student_ids[0]), schedule(&b.student_ids[0]));
            }
        }
    }
}

/// Room assignment overflow equals the per-slot matching deficit on random
/// tiny timetables.
#[test]
fn room_overflow_matches_matching_deficit() {
    use sectioning::timetable::{assign_rooms, overflow_lower_bound};
    for seed in 1..=15u64 {
        let inst = generate_instance("tiny", seed).unwrap();
        let f = random_valid_sectioning(&inst, seed * 3 + 1);
        let g = scg_of(&inst, &f).unwrap();
        let (tt, _) = solve(
            &inst,
            &g,
            &inst.soft_weights(),
            None,
            None,
            Duration::from_millis(600),
            seed,
            1,
        )
        .unwrap();
        let (roomed, overflow) = assign_rooms(&inst, &tt).unwrap();
        let deficit = overflow_lower_bound(&inst, &tt).unwrap();
        assert_eq!(overflow, deficit, "seed {seed}");
        // every meeting with spare supply got a room of the right type
        for (sec_id, slots) in tt.iter_slots() {
            let section = inst.section(sec_id).unwrap();
            for &(d, t) in slots {
                if let Some(room) = roomed.room(sec_id, d, t) {
                    let rt = &inst.rooms.iter().find(|r| r.id == room).unwrap().room_type;
                    assert_eq!(rt, &section.room_type);
                }
            }
        }
    }
}

/// Phase-B solutions extend phase-A placements slot for slot.
#[test]
fn phase_b_extends_phase_a() {
    let (inst, plant) = generate_with_plant("tiny", 8).unwrap();
    let plant = plant.unwrap();
    let g = scg_of(&inst, &plant.sectioning).unwrap();
    let w = inst.soft_weights();
    let mut anchors: Vec<String> = inst
        .sections
        .iter()
        .filter(|s| s.is_extended)
        .map(|s| s.id.clone())
        .collect();
    anchors.push(inst.common_section_id.clone().unwrap());
    anchors.sort();
    anchors.dedup();
    let (tt_a, _) = solve(
        &inst,
        &g,
        &w,
        Some(&anchors),
        None,
        Duration::from_secs(5),
        21,
        1,
    )
    .unwrap();
    let (tt_b, _) = solve(
        &inst,
        &g,
        &w,
        None,
        Some(&tt_a),
        Duration::from_secs(5),
        22,
        1,
    )
    .unwrap();
    for id in &anchors {
        assert_eq!(tt_a.slots(id), tt_b.slots(id), "{id} moved in phase B");
    }
}

/// The export/import round trip preserves the objective exactly.
#[test]
fn import_round_trip_preserves_objective() {
    let inst = generate_instance("tiny", 9).unwrap();
    let spec = ObjectiveSpec::weighted(inst.edge_weights());
    let model = build_model(&inst, &spec).unwrap();
    let (f, value) = brute_force_optimum(&inst, &spec, BRUTE_LIMIT).unwrap();
    let (x, _) = model.assignment_from(&inst, &f).unwrap();
    let mut listing = String::new();
    for (k, &v) in x.iter().enumerate() {
        listing.push_str(&format!("{} {}\n", model.x_name(k), u8::from(v)));
    }
    let back = sectioning::minimize::import_solution(&model, &listing).unwrap();
    assert_eq!(back, f);
    assert_eq!(objective_value(&inst, &back, &spec).unwrap(), value);
}

/// Invariance: permuting students inside a division leaves the student edge
/// set untouched.
#[test]
fn student_edges_invariant_under_division_permutation() {
    let (inst, plant) = generate_with_plant("tiny", 12).unwrap();
    let f = plant.unwrap().sectioning;
    let divisions = sectioning::conflict_graph::divisions(&inst, &f).unwrap();
    let division = divisions
        .iter()
        .find(|d| d.student_ids.len() >= 2)
        .expect("some division has two students");
    // swap the schedules of the first two students of the division (they are
    // identical, so this is a permutation)
    let mut swapped = Sectioning::new();
    let (a, b) = (&division.student_ids[0], &division.student_ids[1]);
    for ((student, course), section) in f.iter() {
        let student = if student == a {
            b.clone()
        } else if student == b {
            a.clone()
        } else {
            student.clone()
        };
        swapped.insert(student, course.clone(), section.clone());
    }
    let g1 = scg_of(&inst, &f).unwrap();
    let g2 = scg_of(&inst, &swapped).unwrap();
    assert_eq!(
        g1.edges().collect::<Vec<_>>(),
        g2.edges().collect::<Vec<_>>()
    );
}

/// Timetable type check used across the suite: warm fixtures survive the
/// document round trip byte for byte.
#[test]
fn timetable_documents_round_trip_planted_solutions() {
    let (_, plant) = generate_with_plant("tiny", 13).unwrap();
    let plant = plant.unwrap();
    let text = documents::write_timetable(&plant.timetable);
    let back = documents::read_timetable(&text).unwrap();
    let tt: &Timetable = &plant.timetable;
    assert_eq!(&back, tt);
    assert_eq!(documents::write_timetable(&back), text);
}

#[test]
fn soft_weight_defaults_match_the_model() {
    let w = SoftWeights::default();
    assert_eq!(w.clash, 1000.0);
    assert_eq!(w.common_multiplier, 10.0);
    assert_eq!(w.room_overflow, 100.0);
    assert_eq!(w.double_meeting, 10.0);
    assert_eq!(w.prof_day_off, 1.0);
    let inst = generate_instance("tiny", 1).unwrap();
    let e = inst.edge_weights();
    assert_eq!((e.a, e.b, e.c, e.d), (1.0, 4.0, 7.0, 5.0));
    // instance documents carry the weights through parsing
    let back = parse_instance(&serialize_instance(&inst)).unwrap();
    assert_eq!(back, inst);
}
