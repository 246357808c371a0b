//! End-to-end orchestration: greedy seeding, edge minimization, phased
//! timetabling, and the conflict-feedback loop that tabu-penalizes the
//! student assignments behind timetable clashes and re-runs the minimizer
//! from the previous sectioning. Also the benchmark table driver.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use crate::conflict_graph::{edge_count, scg_of, Sectioning};
use crate::documents;
use crate::error::Error;
use crate::greedy::greedy_section;
use crate::instance::{generate_instance, parse_instance, serialize_instance};
use crate::minimize::{improve, ObjectiveSpec, ObjectiveVariant};
use crate::timetable::{phased_solve, ConflictReport, PhaseBudgets};
use crate::Result;

/// Where the pipeline instance comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceSource {
    Path(PathBuf),
    Preset { name: String, seed: u64 },
}

/// Full pipeline configuration.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub source: InstanceSource,
    pub minimize_budget: Duration,
    pub timetable_budget: Duration,
    pub max_tabu_rounds: u32,
    pub objective: ObjectiveVariant,
    pub workers: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl PipelineConfig {
    fn check(&self) -> Result<()> {
        if self.minimize_budget.is_zero() || self.timetable_budget.is_zero() {
            return Err(Error::Unsupported("stage budgets must be positive".into()));
        }
        Ok(())
    }
}

/// One row of the benchmark table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub budget_secs: u64,
    pub instance: String,
    pub edges_greedy: usize,
    pub edges_minimized: usize,
    /// 100 × (greedy − minimized) / greedy, reported to two decimals
    pub percent_reduction: f64,
    pub timetable_objective: f64,
    /// whole seconds until the timetable objective hit zero; None otherwise
    pub time_to_zero_secs: Option<u64>,
}

impl BenchRow {
    pub fn tsv_header() -> &'static str {
        "budget_secs\tinstance\tedges_greedy\tedges_minimized\tpercent_reduction\ttimetable_objective\ttime_to_zero_secs"
    }

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{:.2}\t{}\t{}",
            self.budget_secs,
            self.instance,
            self.edges_greedy,
            self.edges_minimized,
            self.percent_reduction,
            self.timetable_objective,
            self.time_to_zero_secs
                .map(|t| t.to_string())
                .unwrap_or_default(),
        )
    }
}

/// Everything a pipeline run leaves behind (also written under `out_dir`).
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub clash_free: bool,
    pub rounds_used: u32,
    pub final_sectioning: Sectioning,
    pub final_report: ConflictReport,
    pub bench_row: BenchRow,
}

fn stage<T>(name: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.at_stage(name))
}

/// Runs greedy → minimize → phased timetable, then up to `max_tabu_rounds`
/// of tabu feedback: clashes turn into (student, section) tabu pairs, the
/// minimizer restarts from the previous sectioning under the weighted-tabu
/// objective, and the timetable is rebuilt. Artifacts land under `out_dir`
/// with fixed names; the outcome is clash-free iff the final report has no
/// clash witnesses.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineOutcome> {
    cfg.check()?;
    fs::create_dir_all(&cfg.out_dir)?;

    let (inst, name) = match &cfg.source {
        InstanceSource::Path(p) => {
            let text = fs::read_to_string(p).map_err(Error::Io)?;
            let inst = stage("parse", parse_instance(&text))?;
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "instance".into());
            (inst, name)
        }
        InstanceSource::Preset { name, seed } => {
            let inst = stage("generate", generate_instance(name, *seed))?;
            fs::write(cfg.out_dir.join("instance.toml"), serialize_instance(&inst))?;
            (inst, name.clone())
        }
    };

    let weights = inst.edge_weights();
    let objective = match cfg.objective {
        ObjectiveVariant::Edges => ObjectiveSpec::edges(),
        _ => ObjectiveSpec::weighted(weights),
    };

    // greedy
    let (f_greedy, _trace) = stage("greedy", greedy_section(&inst, cfg.seed))?;
    fs::write(
        cfg.out_dir.join("greedy.tsv"),
        documents::write_sectioning(&f_greedy),
    )?;
    let edges_greedy = edge_count(&stage("greedy", scg_of(&inst, &f_greedy))?);

    // minimize
    let improved = stage(
        "minimize",
        improve(
            &inst,
            &f_greedy,
            &objective,
            cfg.minimize_budget,
            cfg.seed,
            cfg.workers,
        ),
    )?;
    fs::write(
        cfg.out_dir.join("minimized.tsv"),
        documents::write_sectioning(&improved.sectioning),
    )?;
    let edges_minimized = edge_count(&stage("minimize", scg_of(&inst, &improved.sectioning))?);

    // timetable + tabu feedback
    let soft = inst.soft_weights();
    let mut current = improved.sectioning;
    let mut rounds_used = 0;
    let mut time_to_zero = None;
    let (mut tt, mut report);
    loop {
        let graph = stage("timetable", scg_of(&inst, &current))?;
        let started = Instant::now();
        let solved = stage(
            "timetable",
            phased_solve(
                &inst,
                &graph,
                &soft,
                PhaseBudgets::even(cfg.timetable_budget),
                cfg.seed.wrapping_add(u64::from(rounds_used) << 8),
                cfg.workers,
            ),
        )?;
        tt = solved.0;
        report = solved.1;
        if report.total == 0.0 {
            time_to_zero = Some(started.elapsed().as_secs());
        }
        if report.clash_count() == 0 || rounds_used >= cfg.max_tabu_rounds {
            break;
        }
        // feed the clashes back as tabu pairs and re-minimize from here
        let tabu = stage(
            "tabu",
            crate::timetable::extract_tabu(&inst, &current, &report),
        )?;
        fs::write(cfg.out_dir.join("tabu.tsv"), documents::write_tabu(&tabu))?;
        let retry = stage(
            "minimize-tabu",
            improve(
                &inst,
                &current,
                &ObjectiveSpec::weighted_tabu(weights, tabu),
                cfg.minimize_budget,
                cfg.seed.wrapping_add(1000 + u64::from(rounds_used)),
                cfg.workers,
            ),
        )?;
        current = retry.sectioning;
        rounds_used += 1;
    }

    fs::write(
        cfg.out_dir.join("final.tsv"),
        documents::write_sectioning(&current),
    )?;
    fs::write(
        cfg.out_dir.join("timetable.tsv"),
        documents::write_timetable(&tt),
    )?;
    fs::write(
        cfg.out_dir.join("report.txt"),
        documents::write_report(&report),
    )?;

    let bench_row = BenchRow {
        budget_secs: cfg.minimize_budget.as_secs(),
        instance: name,
        edges_greedy,
        edges_minimized,
        percent_reduction: if edges_greedy > 0 {
            100.0 * (edges_greedy as f64 - edges_minimized as f64) / edges_greedy as f64
        } else {
            0.0
        },
        timetable_objective: report.total,
        time_to_zero_secs: time_to_zero,
    };
    fs::write(
        cfg.out_dir.join("bench_row.tsv"),
        format!("{}\n{}\n", BenchRow::tsv_header(), bench_row.to_tsv()),
    )?;

    Ok(PipelineOutcome {
        clash_free: report.clash_count() == 0,
        rounds_used,
        final_sectioning: current,
        final_report: report,
        bench_row,
    })
}

/// Benchmark sweep: one pipeline run (no tabu rounds) per
/// (budget, preset, repeat), rows grouped by budget then preset. Returns the
/// rows, a formatted table and a machine-readable TSV.
pub fn bench_table(
    presets: &[String],
    budgets: &[Duration],
    repeats: u32,
    timetable_budget: Duration,
    seed: u64,
    workers: usize,
    out_dir: &std::path::Path,
) -> Result<(Vec<BenchRow>, String, String)> {
    let mut rows = Vec::new();
    for (bi, &budget) in budgets.iter().enumerate() {
        for (pi, preset) in presets.iter().enumerate() {
            for rep in 0..repeats {
                let run_seed = crate::portfolio::derive_seed(
                    seed,
                    ((bi as u64) << 32) | ((pi as u64) << 16) | u64::from(rep),
                );
                let cfg = PipelineConfig {
                    source: InstanceSource::Preset {
                        name: preset.clone(),
                        seed: run_seed,
                    },
                    minimize_budget: budget,
                    timetable_budget,
                    max_tabu_rounds: 0,
                    objective: ObjectiveVariant::Weighted,
                    workers,
                    seed: run_seed,
                    out_dir: out_dir.join(format!("run-{}-{}-{}", budget.as_secs(), preset, rep)),
                };
                let outcome = run_pipeline(&cfg)?;
                rows.push(outcome.bench_row);
            }
        }
    }

    let mut table = String::new();
    writeln!(
        table,
        "{:<8} {:<10} {:>14} {:>14} {:>10} {:>10} {:>13}",
        "budget", "instance", "edges greedy", "edges min", "reduct %", "objective", "time-to-zero"
    )
    .unwrap();
    for r in &rows {
        writeln!(
            table,
            "{:<8} {:<10} {:>14} {:>14} {:>10.2} {:>10} {:>13}",
            r.budget_secs,
            r.instance,
            r.edges_greedy,
            r.edges_minimized,
            r.percent_reduction,
            r.timetable_objective,
            r.time_to_zero_secs
                .map(|t| t.to_string())
                .unwrap_or_default(),
        )
        .unwrap();
    }

    let mut tsv = String::new();
    writeln!(tsv, "{}", BenchRow::tsv_header()).unwrap();
    for r in &rows {
        writeln!(tsv, "{}", r.to_tsv()).unwrap();
    }
    Ok((rows, table, tsv))
}
