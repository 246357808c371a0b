//! Static week-grid rendering of a timetable for one division or one
//! professor. Rows are periods, columns are days; extended sections show as
//! a vertical run with `|`-prefixed continuation cells; the lunch row is
//! marked.

use crate::conflict_graph::{divisions, Sectioning};
use crate::error::Error;
use crate::instance::Instance;
use crate::timetable::Timetable;
use crate::Result;

/// What to render: one division (`<group>.<k>`) or one professor's week.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RenderSelector {
    Division(String),
    Professor(String),
}

impl RenderSelector {
    pub fn parse(division: Option<&str>, professor: Option<&str>) -> Result<Self> {
        match (division, professor) {
            (Some(d), None) => Ok(RenderSelector::Division(d.to_string())),
            (None, Some(p)) => Ok(RenderSelector::Professor(p.to_string())),
            _ => Err(Error::UnknownSelector(
                "pass exactly one of --division / --professor".into(),
            )),
        }
    }
}

/// Renders the week grid of the selected division or professor.
pub fn render_schedule(
    inst: &Instance,
    f: &Sectioning,
    tt: &Timetable,
    selector: &RenderSelector,
) -> Result<String> {
    let (title, section_ids): (String, Vec<String>) = match selector {
        RenderSelector::Division(id) => {
            let all = divisions(inst, f)?;
            let d = all
                .iter()
                .find(|d| &d.id == id)
                .ok_or_else(|| Error::UnknownSelector(id.clone()))?;
            (
                format!("Division {} ({} students)", d.id, d.student_ids.len()),
                d.section_ids.clone(),
            )
        }
        RenderSelector::Professor(id) => {
            if !inst.professors.iter().any(|p| &p.id == id) {
                return Err(Error::UnknownSelector(id.clone()));
            }
            let sections = inst
                .sections
                .iter()
                .filter(|s| &s.professor_id == id)
                .map(|s| s.id.clone())
                .collect();
            (format!("Professor {id}"), sections)
        }
    };

    // cell content per (day, period)
    let days = inst.grid.days as usize;
    let periods = inst.grid.periods_per_day as usize;
    let mut cells: Vec<Vec<Vec<String>>> = vec![vec![Vec::new(); days]; periods];
    for id in &section_ids {
        let slots = match tt.slots(id) {
            Some(s) => s,
            None => continue,
        };
        let extended = inst.section(id).map(|s| s.is_extended).unwrap_or(false);
        let first = slots.first().copied();
        for &(d, t) in slots {
            let continuation = extended && Some((d, t)) != first;
            let label = if continuation {
                format!("|{id}")
            } else {
                id.clone()
            };
            cells[t as usize][d as usize].push(label);
        }
    }
    for row in &mut cells {
        for cell in row.iter_mut() {
            cell.sort();
        }
    }

    let body: Vec<Vec<String>> = (0..periods)
        .map(|t| {
            (0..days)
                .map(|d| {
                    if Some(t as u32) == inst.grid.lunch_period {
                        "~lunch~".to_string()
                    } else if cells[t][d].is_empty() {
                        ".".to_string()
                    } else {
                        cells[t][d].join("/")
                    }
                })
                .collect()
        })
        .collect();

    let mut widths: Vec<usize> = (0..days).map(|d| format!("D{d}").len()).collect();
    for row in &body {
        for (d, cell) in row.iter().enumerate() {
            widths[d] = widths[d].max(cell.len());
        }
    }

    let mut out = String::new();
    out.push_str(&title);
    out.push('\n');
    out.push_str("     ");
    for (d, width) in widths.iter().enumerate() {
        out.push_str(&format!(" {:<width$}", format!("D{d}")));
    }
    out.push('\n');
    for (t, row) in body.iter().enumerate() {
        out.push_str(&format!("p{t:<4}"));
        for (d, cell) in row.iter().enumerate() {
            out.push_str(&format!(" {:<width$}", cell, width = widths[d]));
        }
        // trim trailing padding for byte-stable output
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate_with_plant;

    #[test]
    fn division_grid_shows_sections_at_their_slots() {
        let (inst, plant) = generate_with_plant("tiny", 1).unwrap();
        let plant = plant.unwrap();
        let out = render_schedule(
            &inst,
            &plant.sectioning,
            &plant.timetable,
            &RenderSelector::Division("1MC.1".into()),
        )
        .unwrap();
        assert!(out.starts_with("Division 1MC.1"));
        // every planted slot of SHARE.1 appears in the grid
        for &(d, t) in plant.timetable.slots("SHARE.1").unwrap() {
            let line = out.lines().nth(2 + t as usize).unwrap();
            assert!(
                line.contains("SHARE.1"),
                "period {t} day {d} missing: {out}"
            );
        }
        assert!(out.contains("~lunch~"));
    }

    #[test]
    fn extended_blocks_render_with_continuation_marks() {
        let (inst, plant) = generate_with_plant("tiny", 2).unwrap();
        let plant = plant.unwrap();
        let out = render_schedule(
            &inst,
            &plant.sectioning,
            &plant.timetable,
            &RenderSelector::Division("1MC.1".into()),
        )
        .unwrap();
        assert!(out.contains("LAB.1"));
        assert!(out.contains("|LAB.1"));
    }

    #[test]
    fn professor_view_and_unknown_selectors() {
        let (inst, plant) = generate_with_plant("tiny", 3).unwrap();
        let plant = plant.unwrap();
        let out = render_schedule(
            &inst,
            &plant.sectioning,
            &plant.timetable,
            &RenderSelector::Professor("P4".into()),
        )
        .unwrap();
        assert!(out.starts_with("Professor P4"));
        assert!(out.contains("LECT.1") && out.contains("LECT.2"));

        assert!(matches!(
            render_schedule(
                &inst,
                &plant.sectioning,
                &plant.timetable,
                &RenderSelector::Division("NOPE.9".into()),
            ),
            Err(Error::UnknownSelector(_))
        ));
    }
}
