//! Neutral model boundary for external exact solvers: linear pseudo-boolean
//! (OPB) and weighted CNF (WCNF) writers plus an assignment importer. Both
//! writers are byte-deterministic for a given model and ship a variable map
//! with one `name index` line per variable.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::conflict_graph::Sectioning;
use crate::error::Error;
use crate::minimize::{ObjectiveVariant, SectioningModel};
use crate::Result;

/// Supported export encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// Linear pseudo-boolean constraints (OPB text).
    PseudoBoolean,
    /// Weighted CNF with a top weight for hard clauses.
    WeightedClauses,
}

/// An exported model plus its variable name map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelExport {
    pub model: String,
    pub var_map: String,
}

fn integral(w: f64, what: &str) -> Result<i64> {
    if w.fract() != 0.0 || w < 0.0 || w > i64::MAX as f64 {
        return Err(Error::Unsupported(format!(
            "{what} weight {w} is not a nonnegative integer; model export needs integral weights"
        )));
    }
    Ok(w as i64)
}

/// Writes the model in the chosen format. Constraint 5 becomes the clause
/// `¬x ∨ ¬x ∨ y`; exactly-one and capacity rows are linear in OPB and
/// counter-encoded in WCNF; the objective turns into a linear objective line
/// or soft clause weights.
pub fn export_model(m: &SectioningModel, format: ExportFormat) -> Result<ModelExport> {
    let weights = m.objective.effective_weights();
    integral(weights.a, "edge")?;
    integral(weights.b, "edge")?;
    integral(weights.c, "edge")?;
    if m.objective.variant == ObjectiveVariant::WeightedTabu {
        integral(weights.d, "tabu")?;
    }
    // x: 1..=|W| ; y: |W|+1..=|W|+|SS| ; auxiliaries afterwards
    let x_var = |k: usize| k + 1;
    let y_var = |k: usize| m.w.len() + k + 1;

    let mut var_map = String::new();
    for k in 0..m.w.len() {
        writeln!(var_map, "{} {}", m.x_name(k), x_var(k)).unwrap();
    }
    for k in 0..m.ss.len() {
        writeln!(var_map, "{} {}", m.y_name(k), y_var(k)).unwrap();
    }

    // forced pairs (constraint 1), deduplicated and sorted
    let mut forced: Vec<u32> = m
        .rss
        .iter()
        .chain(m.pss.iter())
        .map(|&(_, s1, s2)| m.ss_index[&(s1, s2)])
        .collect();
    forced.sort_unstable();
    forced.dedup();

    // x variables per section, for capacity rows
    let mut section_vars: Vec<Vec<usize>> = vec![Vec::new(); m.section_ids.len()];
    for (k, &(_, s)) in m.w.iter().enumerate() {
        section_vars[s as usize].push(x_var(k));
    }

    // objective terms in variable order
    let mut objective_terms: Vec<(i64, usize)> = Vec::new();
    for (k, &(s1, s2)) in m.ss.iter().enumerate() {
        let w = integral(m.pair_weight(s1, s2), "edge")?;
        if w > 0 {
            objective_terms.push((w, y_var(k)));
        }
    }
    if m.objective.variant == ObjectiveVariant::WeightedTabu {
        let d = integral(weights.d, "tabu")?;
        if d > 0 {
            for &(g, s) in &m.tabu_idx {
                objective_terms.push((d, x_var(m.w_index[&(g, s)] as usize)));
            }
        }
    }

    let model = match format {
        ExportFormat::PseudoBoolean => {
            let mut rows: Vec<String> = Vec::new();
            for &k in &forced {
                rows.push(format!("+1 x{} = 1 ;", y_var(k as usize)));
            }
            for &(g, c) in &m.gc {
                let terms: Vec<String> = m.course_sections[c as usize]
                    .iter()
                    .map(|&s| format!("+1 x{}", x_var(m.w_index[&(g, s)] as usize)))
                    .collect();
                rows.push(format!("{} = 1 ;", terms.join(" ")));
            }
            for (s, vars) in section_vars.iter().enumerate() {
                if vars.is_empty() {
                    continue;
                }
                let terms: Vec<String> = vars.iter().map(|v| format!("-1 x{v}")).collect();
                rows.push(format!("{} >= -{} ;", terms.join(" "), m.sec_cap[s]));
            }
            for &(g, s1, s2) in &m.fgss {
                let child = match m.w_index.get(&(g, s2)) {
                    Some(&k) => x_var(k as usize),
                    None => continue,
                };
                let parent = x_var(m.w_index[&(g, s1)] as usize);
                rows.push(format!("+1 x{parent} -1 x{child} >= 0 ;"));
            }
            for &(g, s1, s2) in &m.gss {
                let a = x_var(m.w_index[&(g, s1)] as usize);
                let b = x_var(m.w_index[&(g, s2)] as usize);
                let y = y_var(m.ss_index[&(s1, s2)] as usize);
                rows.push(format!("-1 x{a} -1 x{b} +1 x{y} >= -1 ;"));
            }

            let mut out = String::new();
            writeln!(
                out,
                "* #variable= {} #constraint= {}",
                m.w.len() + m.ss.len(),
                rows.len()
            )
            .unwrap();
            let obj: Vec<String> = objective_terms
                .iter()
                .map(|(w, v)| format!("+{w} x{v}"))
                .collect();
            writeln!(out, "min: {} ;", obj.join(" ")).unwrap();
            for row in rows {
                out.push_str(&row);
                out.push('\n');
            }
            out
        }
        ExportFormat::WeightedClauses => {
            let mut next_var = m.w.len() + m.ss.len();
            let mut hard: Vec<Vec<i64>> = Vec::new();

            for &k in &forced {
                hard.push(vec![y_var(k as usize) as i64]);
            }
            for &(g, c) in &m.gc {
                let vars: Vec<i64> = m.course_sections[c as usize]
                    .iter()
                    .map(|&s| x_var(m.w_index[&(g, s)] as usize) as i64)
                    .collect();
                hard.push(vars.clone());
                for i in 0..vars.len() {
                    for j in (i + 1)..vars.len() {
                        hard.push(vec![-vars[i], -vars[j]]);
                    }
                }
            }
            for (s, vars) in section_vars.iter().enumerate() {
                let k = m.sec_cap[s] as usize;
                if vars.len() > k {
                    sequential_at_most_k(
                        vars,
                        k,
                        &mut next_var,
                        &mut hard,
                        &mut var_map,
                        &m.section_ids[s],
                    );
                }
            }
            for &(g, s1, s2) in &m.fgss {
                let child = match m.w_index.get(&(g, s2)) {
                    Some(&k) => x_var(k as usize) as i64,
                    None => continue,
                };
                let parent = x_var(m.w_index[&(g, s1)] as usize) as i64;
                hard.push(vec![parent, -child]);
            }
            for &(g, s1, s2) in &m.gss {
                let a = x_var(m.w_index[&(g, s1)] as usize) as i64;
                let b = x_var(m.w_index[&(g, s2)] as usize) as i64;
                let y = y_var(m.ss_index[&(s1, s2)] as usize) as i64;
                hard.push(vec![-a, -b, y]);
            }

            let soft: Vec<(i64, i64)> = objective_terms
                .iter()
                .map(|&(w, v)| (w, -(v as i64)))
                .collect();
            let top: i64 = soft.iter().map(|(w, _)| w).sum::<i64>() + 1;

            let mut out = String::new();
            writeln!(
                out,
                "p wcnf {} {} {}",
                next_var,
                hard.len() + soft.len(),
                top
            )
            .unwrap();
            for clause in &hard {
                let lits: Vec<String> = clause.iter().map(|l| l.to_string()).collect();
                writeln!(out, "{} {} 0", top, lits.join(" ")).unwrap();
            }
            for (w, lit) in &soft {
                writeln!(out, "{w} {lit} 0").unwrap();
            }
            out
        }
    };

    Ok(ModelExport { model, var_map })
}

/// Sinz sequential counter for `at most k of vars`, appending register
/// variables and clauses. Registers r(i,j) read "at least j of the first
/// i+1 inputs are set".
#[allow(clippy::needless_range_loop)] // register recurrences read (i-1, j-1)
fn sequential_at_most_k(
    vars: &[usize],
    k: usize,
    next_var: &mut usize,
    hard: &mut Vec<Vec<i64>>,
    var_map: &mut String,
    tag: &str,
) {
    let n = vars.len();
    debug_assert!(n > k && k >= 1);
    // registers for inputs 0..n-1
    let mut reg = vec![vec![0i64; k]; n - 1];
    for (i, row) in reg.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *next_var += 1;
            *slot = *next_var as i64;
            writeln!(var_map, "r({tag},{i},{j}) {}", *next_var).unwrap();
        }
    }
    let x = |i: usize| vars[i] as i64;
    hard.push(vec![-x(0), reg[0][0]]);
    for j in 1..k {
        hard.push(vec![-reg[0][j]]);
    }
    for i in 1..n - 1 {
        hard.push(vec![-x(i), reg[i][0]]);
        hard.push(vec![-reg[i - 1][0], reg[i][0]]);
        for j in 1..k {
            hard.push(vec![-x(i), -reg[i - 1][j - 1], reg[i][j]]);
            hard.push(vec![-reg[i - 1][j], reg[i][j]]);
        }
        hard.push(vec![-x(i), -reg[i - 1][k - 1]]);
    }
    hard.push(vec![-x(n - 1), -reg[n - 2][k - 1]]);
}

/// Reads an assignment listing (`<variable name> <0|1>` per line, `#` starts
/// a comment) back into a sectioning. Every x variable must be covered; the
/// result is checked and an itemized violation report is returned on
/// failure.
pub fn import_solution(m: &SectioningModel, text: &str) -> Result<Sectioning> {
    let mut names: HashMap<String, usize> = HashMap::new();
    for k in 0..m.w.len() {
        names.insert(m.x_name(k), k);
    }
    let mut known: HashMap<String, ()> = HashMap::new();
    for k in 0..m.ss.len() {
        known.insert(m.y_name(k), ());
    }

    let mut x = vec![None; m.w.len()];
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let name = parts
            .next()
            .ok_or_else(|| Error::Document(format!("line {}: missing name", line_no + 1)))?;
        let value = parts
            .next()
            .ok_or_else(|| Error::Document(format!("line {}: missing value", line_no + 1)))?;
        let value = match value {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::Document(format!(
                    "line {}: value must be 0 or 1, got `{}`",
                    line_no + 1,
                    other
                )))
            }
        };
        if let Some(&k) = names.get(name) {
            x[k] = Some(value);
        } else if known.contains_key(name) || name.starts_with("r(") {
            // y and register values are implied by x; accepted and ignored
        } else {
            return Err(Error::UnknownVariable(name.to_string()));
        }
    }

    let x: Vec<bool> = x
        .into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or_else(|| Error::MissingVariable(m.x_name(k))))
        .collect::<Result<_>>()?;

    // with y forced true, only the x-side constraint families (exactly-one,
    // capacity, family coupling) can trip, giving the itemized report
    let all_y = vec![true; m.y_count()];
    let broken = m.check(&x, &all_y);
    if !broken.is_empty() {
        let violations = broken
            .into_iter()
            .map(|v| crate::instance::Violation {
                rule: match v.family {
                    2 => "exactly-one",
                    3 => "capacity",
                    4 => "family",
                    _ => "model",
                },
                ids: Vec::new(),
                detail: v.detail,
            })
            .collect();
        return Err(Error::InvalidSectioning(violations));
    }

    m.sectioning_from_x(&x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;
    use crate::minimize::{build_model, ObjectiveSpec};

    fn one_student_instance() -> crate::instance::Instance {
        parse_instance(
            r#"
[grid]
days = 1
periods_per_day = 2

[[rooms]]
id = "R1"
room_type = "room"

[[professors]]
id = "P1"

[[courses]]
id = "C1"

[[sections]]
id = "C1.a"
course_id = "C1"
capacity = 1
professor_id = "P1"
room_type = "room"
meetings_per_week = 1

[[major_groups]]
id = "G"
size = 1
required_course_ids = ["C1"]
"#,
        )
        .unwrap()
    }

    #[test]
    fn one_student_one_course_exports_one_row_and_no_y() {
        let inst = one_student_instance();
        let m = build_model(&inst, &ObjectiveSpec::edges()).unwrap();
        let export = export_model(&m, ExportFormat::PseudoBoolean).unwrap();
        assert_eq!(m.y_count(), 0);
        assert!(export.model.contains("+1 x1 = 1 ;"));
        // objective line stays even when empty of terms
        assert!(export.model.contains("min:"));
        assert!(export.var_map.contains("x(G#0,C1.a) 1"));
    }

    #[test]
    fn import_round_trips_and_rejects_unknowns() {
        let inst = one_student_instance();
        let m = build_model(&inst, &ObjectiveSpec::edges()).unwrap();
        let f = import_solution(&m, "x(G#0,C1.a) 1\n").unwrap();
        assert_eq!(f.get("G#0", "C1"), Some("C1.a"));

        assert!(matches!(
            import_solution(&m, "x(NOPE,C1.a) 1\n"),
            Err(Error::UnknownVariable(_))
        ));
        assert!(matches!(
            import_solution(&m, "# empty\n"),
            Err(Error::MissingVariable(_))
        ));
    }

    #[test]
    fn import_reports_capacity_violations_instead_of_a_sectioning() {
        let inst = parse_instance(
            r#"
[grid]
days = 1
periods_per_day = 2

[[rooms]]
id = "R1"
room_type = "room"

[[professors]]
id = "P1"

[[courses]]
id = "C1"

[[sections]]
id = "C1.a"
course_id = "C1"
capacity = 1
professor_id = "P1"
room_type = "room"
meetings_per_week = 1

[[sections]]
id = "C1.b"
course_id = "C1"
capacity = 1
professor_id = "P1"
room_type = "room"
meetings_per_week = 1

[[major_groups]]
id = "G"
size = 2
required_course_ids = ["C1"]
"#,
        )
        .unwrap();
        let m = build_model(&inst, &ObjectiveSpec::edges()).unwrap();
        // both students crammed into the capacity-1 section
        let listing = "x(G#0,C1.a) 1\nx(G#0,C1.b) 0\nx(G#1,C1.a) 1\nx(G#1,C1.b) 0\n";
        match import_solution(&m, listing) {
            Err(Error::InvalidSectioning(vs)) => {
                assert!(vs.iter().any(|v| v.rule == "capacity"), "{vs:?}");
            }
            other => panic!("expected violation report, got {other:?}"),
        }
    }

    #[test]
    fn non_integral_weights_are_unsupported() {
        let inst = one_student_instance();
        let mut w = inst.edge_weights();
        w.a = 1.5;
        let m = build_model(&inst, &ObjectiveSpec::weighted(w)).unwrap();
        assert!(matches!(
            export_model(&m, ExportFormat::PseudoBoolean),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn wcnf_header_counts_match_body() {
        let inst = one_student_instance();
        let m = build_model(&inst, &ObjectiveSpec::edges()).unwrap();
        let export = export_model(&m, ExportFormat::WeightedClauses).unwrap();
        let mut lines = export.model.lines();
        let header = lines.next().unwrap();
        let parts: Vec<&str> = header.split_whitespace().collect();
        assert_eq!(parts[0], "p");
        assert_eq!(parts[1], "wcnf");
        let n_clauses: usize = parts[3].parse().unwrap();
        assert_eq!(lines.count(), n_clauses);
    }
}
