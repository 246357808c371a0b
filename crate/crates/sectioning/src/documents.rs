//! Plain-text document forms of the solver artifacts. All writers emit
//! canonical, byte-deterministic output: tab-separated records in sorted
//! order, no timestamps.

use crate::conflict_graph::Sectioning;
use crate::error::Error;
use crate::minimize::TabuList;
use crate::timetable::{ConflictReport, Timetable};
use crate::Result;

/// `student \t course \t section` per assignment, sorted by (student, course).
pub fn write_sectioning(f: &Sectioning) -> String {
    let mut out = String::new();
    for ((student, course), section) in f.iter() {
        out.push_str(&format!("{student}\t{course}\t{section}\n"));
    }
    out
}

pub fn read_sectioning(text: &str) -> Result<Sectioning> {
    let mut f = Sectioning::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split('\t');
        match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(g), Some(c), Some(s), None) => f.insert(g, c, s),
            _ => {
                return Err(Error::Document(format!(
                    "line {}: expected `student<TAB>course<TAB>section`",
                    no + 1
                )))
            }
        }
    }
    Ok(f)
}

/// `section \t day \t period \t room` per meeting (`-` when no room is
/// assigned), sorted by (section, day, period).
pub fn write_timetable(tt: &Timetable) -> String {
    let mut out = String::new();
    for (section, slots) in tt.iter_slots() {
        for &(d, t) in slots {
            let room = tt.room(section, d, t).unwrap_or("-");
            out.push_str(&format!("{section}\t{d}\t{t}\t{room}\n"));
        }
    }
    out
}

pub fn read_timetable(text: &str) -> Result<Timetable> {
    let mut slots: std::collections::BTreeMap<String, Vec<(u32, u32)>> =
        std::collections::BTreeMap::new();
    let mut rooms: Vec<(String, u32, u32, String)> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::Document(format!(
                "line {}: expected `section<TAB>day<TAB>period<TAB>room`",
                no + 1
            )));
        }
        let bad = |what: &str| Error::Document(format!("line {}: bad {what}", no + 1));
        let d: u32 = fields[1].parse().map_err(|_| bad("day"))?;
        let t: u32 = fields[2].parse().map_err(|_| bad("period"))?;
        slots.entry(fields[0].to_string()).or_default().push((d, t));
        if fields[3] != "-" {
            rooms.push((fields[0].to_string(), d, t, fields[3].to_string()));
        }
    }
    let mut tt = Timetable::new();
    for (section, s) in slots {
        tt.set_slots(section, s);
    }
    for (section, d, t, room) in rooms {
        tt.set_room(section, d, t, room);
    }
    Ok(tt)
}

/// Category totals followed by one witness line per clash.
pub fn write_report(report: &ConflictReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("clash_total\t{}\n", report.clash_total));
    out.push_str(&format!("room_total\t{}\n", report.room_total));
    out.push_str(&format!(
        "double_meeting_total\t{}\n",
        report.double_meeting_total
    ));
    out.push_str(&format!("day_off_total\t{}\n", report.day_off_total));
    out.push_str(&format!("total\t{}\n", report.total));
    for w in &report.witnesses {
        out.push_str(&format!(
            "clash\t{}\t{}\t{}\t{}\n",
            w.s1, w.s2, w.day, w.period
        ));
    }
    out
}

/// `student \t section` per pair, sorted.
pub fn write_tabu(tabu: &TabuList) -> String {
    let mut out = String::new();
    for (student, section) in tabu.iter() {
        out.push_str(&format!("{student}\t{section}\n"));
    }
    out
}

pub fn read_tabu(text: &str) -> Result<TabuList> {
    let mut tabu = TabuList::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split('\t');
        match (parts.next(), parts.next(), parts.next()) {
            (Some(g), Some(s), None) => tabu.insert(g, s),
            _ => {
                return Err(Error::Document(format!(
                    "line {}: expected `student<TAB>section`",
                    no + 1
                )))
            }
        }
    }
    Ok(tabu)
}
