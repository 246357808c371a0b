//! Concrete room assignment on top of fixed slots. Per day and room type
//! the meetings form intervals (extended blocks keep one room for the whole
//! block); a left-edge pass plus a single-meeting rebalancing step keeps
//! per-room double-bookings at the bipartite deficit.

use std::collections::HashMap;

use crate::instance::indexed::Indexed;
use crate::instance::Instance;
use crate::timetable::{check_structure, Timetable};
use crate::Result;

/// One meeting run of a section within a day: `[start, start+len)`.
#[derive(Debug, Clone, Copy)]
struct Interval {
    section: usize,
    start: u32,
    len: u32,
    /// extended blocks must not change rooms mid-block
    block: bool,
}

/// Assigns every meeting a room of the section's required type and returns
/// the roomed timetable plus the residual overflow: the number of
/// slot-level double-bookings left where a type's demand exceeds its rooms.
pub fn assign_rooms(inst: &Instance, tt: &Timetable) -> Result<(Timetable, u32)> {
    let idx = Indexed::new(inst)?;
    check_structure(&idx, tt)?;

    let mut out = tt.clone();
    let mut overflow = 0u32;
    let periods = inst.grid.periods_per_day as usize;

    for day in 0..inst.grid.days {
        for rt in 0..idx.rt_id.len() {
            let rooms = &idx.rt_room_ids[rt];
            let mut intervals: Vec<Interval> = Vec::new();
            for (sec_id, slots) in tt.iter_slots() {
                let s = idx.section_index(sec_id)?;
                if idx.sec_rt[s] != rt {
                    continue;
                }
                let today: Vec<u32> = slots
                    .iter()
                    .filter(|&&(d, _)| d == day)
                    .map(|&(_, t)| t)
                    .collect();
                if today.is_empty() {
                    continue;
                }
                if idx.sec_ext[s] {
                    intervals.push(Interval {
                        section: s,
                        start: today[0],
                        len: today.len() as u32,
                        block: true,
                    });
                } else {
                    for t in today {
                        intervals.push(Interval {
                            section: s,
                            start: t,
                            len: 1,
                            block: false,
                        });
                    }
                }
            }
            if intervals.is_empty() {
                continue;
            }
            intervals.sort_by_key(|iv| (iv.start, std::cmp::Reverse(iv.len), iv.section));

            // occupancy[room][period] -> assigned intervals (by index)
            let mut occupancy: Vec<Vec<Vec<usize>>> =
                vec![vec![Vec::new(); periods]; rooms.len()];
            let mut assigned: Vec<usize> = vec![usize::MAX; intervals.len()];

            for (i, iv) in intervals.iter().enumerate() {
                let span = iv.start..iv.start + iv.len;
                let mut best_room = 0;
                let mut best_busy = usize::MAX;
                for (r, occ) in occupancy.iter().enumerate() {
                    let busy = span
                        .clone()
                        .filter(|&t| !occ[t as usize].is_empty())
                        .count();
                    if busy < best_busy {
                        best_busy = busy;
                        best_room = r;
                    }
                }
                assigned[i] = best_room;
                for t in span {
                    occupancy[best_room][t as usize].push(i);
                }
            }

            // rebalance: a single meeting in a crowded room moves to a free
            // room at the same period
            let mut changed = true;
            while changed {
                changed = false;
                for t in 0..periods {
                    let free = occupancy.iter().position(|occ| occ[t].is_empty());
                    let crowded = occupancy.iter().position(|occ| {
                        occ[t].len() > 1
                            && occ[t].iter().any(|&i| !intervals[i].block)
                    });
                    if let (Some(fr), Some(cr)) = (free, crowded) {
                        let &i = occupancy[cr][t]
                            .iter()
                            .find(|&&i| !intervals[i].block)
                            .expect("single present");
                        occupancy[cr][t].retain(|&x| x != i);
                        occupancy[fr][t].push(i);
                        assigned[i] = fr;
                        changed = true;
                    }
                }
            }

            for (r, occ) in occupancy.iter().enumerate() {
                let _ = r;
                for by_period in occ {
                    overflow += (by_period.len() as u32).saturating_sub(1);
                }
            }
            for (i, iv) in intervals.iter().enumerate() {
                let room = rooms[assigned[i]];
                for t in iv.start..iv.start + iv.len {
                    out.set_room(idx.sec_id[iv.section].to_string(), day, t, room.to_string());
                }
            }
        }
    }

    Ok((out, overflow))
}

/// Per (day, period, room type) shortfall of rooms against demand, summed;
/// the matching bound any assignment with block-constant rooms can at best
/// reach.
pub fn overflow_lower_bound(inst: &Instance, tt: &Timetable) -> Result<u32> {
    let idx = Indexed::new(inst)?;
    let mut demand: HashMap<(u32, u32, usize), u32> = HashMap::new();
    for (sec_id, slots) in tt.iter_slots() {
        let s = idx.section_index(sec_id)?;
        for &(d, t) in slots {
            *demand.entry((d, t, idx.sec_rt[s])).or_insert(0) += 1;
        }
    }
    let mut total = 0;
    for ((_, _, rt), n) in demand {
        total += n.saturating_sub(idx.rt_room_ids[rt].len() as u32);
    }
    Ok(total)
}
