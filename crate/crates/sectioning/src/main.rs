//! Command-line front end. Outputs land under `--out` with fixed filenames;
//! the pipeline verb exits 0 exactly when the final timetable is clash-free.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sectioning::conflict_graph::{edge_count, scg_of, weighted_edge_count};
use sectioning::documents;
use sectioning::greedy::greedy_section;
use sectioning::instance::{generate_instance, parse_instance, serialize_instance, validate};
use sectioning::minimize::{
    build_model, export_model, import_solution, improve, objective_value, ExportFormat,
    ObjectiveSpec, ObjectiveVariant, TabuList,
};
use sectioning::pipeline::{bench_table, run_pipeline, InstanceSource, PipelineConfig};
use sectioning::render::{render_schedule, RenderSelector};
use sectioning::timetable::{phased_solve, PhaseBudgets};

#[derive(Parser)]
#[command(name = "sectioning", version, about = "Student sectioning and timetabling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Edges,
    Weighted,
    WeightedTabu,
}

impl From<ObjectiveArg> for ObjectiveVariant {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Edges => ObjectiveVariant::Edges,
            ObjectiveArg::Weighted => ObjectiveVariant::Weighted,
            ObjectiveArg::WeightedTabu => ObjectiveVariant::WeightedTabu,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Opb,
    Wcnf,
}

#[derive(Args)]
struct OutDir {
    /// Output directory for the produced artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a preset instance and write instance.toml.
    Generate {
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutDir,
    },
    /// Check an instance document and list violations.
    Validate { instance: PathBuf },
    /// Greedy sectioning; writes sectioning.tsv (and trace.txt with --trace).
    Section {
        instance: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        out: OutDir,
    },
    /// Local-search edge minimization from a starting sectioning.
    Minimize {
        instance: PathBuf,
        #[arg(long)]
        sectioning: PathBuf,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Weighted)]
        objective: ObjectiveArg,
        /// Tabu list document (weighted-tabu objective).
        #[arg(long)]
        tabu: Option<PathBuf>,
        #[arg(long, default_value_t = 10.0)]
        budget_minimize: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        out: OutDir,
    },
    /// Phased timetable construction for a sectioning.
    Timetable {
        instance: PathBuf,
        #[arg(long)]
        sectioning: PathBuf,
        #[arg(long, default_value_t = 60.0)]
        budget_timetable: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        out: OutDir,
    },
    /// Full pipeline: greedy → minimize → timetable with tabu feedback.
    Pipeline {
        /// Instance document; mutually exclusive with --preset.
        instance: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10.0)]
        budget_minimize: f64,
        #[arg(long, default_value_t = 60.0)]
        budget_timetable: f64,
        #[arg(long, default_value_t = 3)]
        tabu_rounds: u32,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Weighted)]
        objective: ObjectiveArg,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        out: OutDir,
    },
    /// Benchmark sweep over presets × budgets × repeats.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "easy,medium,medium2,hard")]
        presets: Vec<String>,
        /// Minimize budgets in seconds.
        #[arg(long, value_delimiter = ',', default_value = "100,600,1800")]
        budgets: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        repeats: u32,
        #[arg(long, default_value_t = 600.0)]
        budget_timetable: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        out: OutDir,
    },
    /// Render one division or professor week grid as text.
    Render {
        instance: PathBuf,
        #[arg(long)]
        sectioning: PathBuf,
        #[arg(long)]
        timetable: PathBuf,
        #[arg(long)]
        division: Option<String>,
        #[arg(long)]
        professor: Option<String>,
        #[command(flatten)]
        out: OutDir,
    },
    /// Export the boolean model for external solvers.
    ExportModel {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Opb)]
        format: FormatArg,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Weighted)]
        objective: ObjectiveArg,
        #[arg(long)]
        tabu: Option<PathBuf>,
        #[command(flatten)]
        out: OutDir,
    },
    /// Read an external solver assignment back into a sectioning.
    ImportSolution {
        instance: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
        #[command(flatten)]
        out: OutDir,
    },
}

fn objective_spec(
    variant: ObjectiveArg,
    weights: sectioning::conflict_graph::EdgeWeights,
    tabu: Option<&PathBuf>,
) -> sectioning::Result<ObjectiveSpec> {
    Ok(match variant {
        ObjectiveArg::Edges => ObjectiveSpec::edges(),
        ObjectiveArg::Weighted => ObjectiveSpec::weighted(weights),
        ObjectiveArg::WeightedTabu => {
            let tabu = match tabu {
                Some(path) => documents::read_tabu(&fs::read_to_string(path)?)?,
                None => TabuList::new(),
            };
            ObjectiveSpec::weighted_tabu(weights, tabu)
        }
    })
}

fn run() -> sectioning::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Generate { preset, seed, out } => {
            let inst = generate_instance(&preset, seed)?;
            fs::create_dir_all(&out.out)?;
            let path = out.out.join("instance.toml");
            fs::write(&path, serialize_instance(&inst))?;
            println!(
                "wrote {} ({} sections, {} students)",
                path.display(),
                inst.sections.len(),
                inst.student_count()
            );
        }
        Command::Validate { instance } => {
            let inst = parse_instance(&fs::read_to_string(instance)?)?;
            let violations = validate(&inst);
            if violations.is_empty() {
                println!("ok: {} sections, {} students", inst.sections.len(), inst.student_count());
            } else {
                for v in &violations {
                    println!("violation: {v}");
                }
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Section {
            instance,
            seed,
            trace,
            out,
        } => {
            let inst = parse_instance(&fs::read_to_string(instance)?)?;
            let (f, tr) = greedy_section(&inst, seed)?;
            fs::create_dir_all(&out.out)?;
            fs::write(out.out.join("sectioning.tsv"), documents::write_sectioning(&f))?;
            if trace {
                let mut text = String::new();
                for ((id, (copied, fresh)), edges) in tr
                    .visit_order
                    .iter()
                    .zip(&tr.per_student)
                    .zip(&tr.running_edges)
                {
                    text.push_str(&format!("{id}\tcopied={copied}\tfresh={fresh}\tedges={edges}\n"));
                }
                fs::write(out.out.join("trace.txt"), text)?;
            }
            let g = scg_of(&inst, &f)?;
            println!(
                "sectioned: {} edges ({} weighted)",
                edge_count(&g),
                weighted_edge_count(&g, &inst, &inst.edge_weights())?
            );
        }
        Command::Minimize {
            instance,
            sectioning,
            objective,
            tabu,
            budget_minimize,
            seed,
            workers,
            out,
        } => {
            let inst = parse_instance(&fs::read_to_string(instance)?)?;
            let start = documents::read_sectioning(&fs::read_to_string(sectioning)?)?;
            let spec = objective_spec(objective, inst.edge_weights(), tabu.as_ref())?;
            let before = objective_value(&inst, &start, &spec)?;
            let outcome = improve(
                &inst,
                &start,
                &spec,
                Duration::from_secs_f64(budget_minimize),
                seed,
                workers,
            )?;
            fs::create_dir_all(&out.out)?;
            fs::write(
                out.out.join("sectioning.tsv"),
                documents::write_sectioning(&outcome.sectioning),
            )?;
            println!("objective {before} -> {}", outcome.value);
        }
        Command::Timetable {
            instance,
            sectioning,
            budget_timetable,
            seed,
            workers,
            out,
        } => {
            let inst = parse_instance(&fs::read_to_string(instance)?)?;
            let f = documents::read_sectioning(&fs::read_to_string(sectioning)?)?;
            let g = scg_of(&inst, &f)?;
            let (tt, report) = phased_solve(
                &inst,
                &g,
                &inst.soft_weights(),
                PhaseBudgets::even(Duration::from_secs_f64(budget_timetable)),
                seed,
                workers,
            )?;
            fs::create_dir_all(&out.out)?;
            fs::write(out.out.join("timetable.tsv"), documents::write_timetable(&tt))?;
            fs::write(out.out.join("report.txt"), documents::write_report(&report))?;
            println!(
                "timetabled: objective {} ({} clashes)",
                report.total,
                report.clash_count()
            );
        }
        Command::Pipeline {
            instance,
            preset,
            seed,
            budget_minimize,
            budget_timetable,
            tabu_rounds,
            objective,
            workers,
            out,
        } => {
            let source = match (instance, preset) {
                (Some(path), None) => InstanceSource::Path(path),
                (None, Some(name)) => InstanceSource::Preset { name, seed },
                _ => {
                    eprintln!("pass either an instance path or --preset");
                    return Ok(ExitCode::from(2));
                }
            };
            let outcome = run_pipeline(&PipelineConfig {
                source,
                minimize_budget: Duration::from_secs_f64(budget_minimize),
                timetable_budget: Duration::from_secs_f64(budget_timetable),
                max_tabu_rounds: tabu_rounds,
                objective: objective.into(),
                workers,
                seed,
                out_dir: out.out,
            })?;
            println!(
                "pipeline: objective {} after {} tabu rounds ({} -> {} edges, {:.2}%)",
                outcome.final_report.total,
                outcome.rounds_used,
                outcome.bench_row.edges_greedy,
                outcome.bench_row.edges_minimized,
                outcome.bench_row.percent_reduction,
            );
            if !outcome.clash_free {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Bench {
            presets,
            budgets,
            repeats,
            budget_timetable,
            seed,
            workers,
            out,
        } => {
            let budgets: Vec<Duration> =
                budgets.into_iter().map(Duration::from_secs_f64).collect();
            fs::create_dir_all(&out.out)?;
            let (_, table, tsv) = bench_table(
                &presets,
                &budgets,
                repeats,
                Duration::from_secs_f64(budget_timetable),
                seed,
                workers,
                &out.out,
            )?;
            fs::write(out.out.join("bench.txt"), &table)?;
            fs::write(out.out.join("bench.tsv"), &tsv)?;
            print!("{table}");
        }
        Command::Render {
            instance,
            sectioning,
            timetable,
            division,
            professor,
            out,
        } => {
            let inst = parse_instance(&fs::read_to_string(instance)?)?;
            let f = documents::read_sectioning(&fs::read_to_string(sectioning)?)?;
            let tt = documents::read_timetable(&fs::read_to_string(timetable)?)?;
            let selector = RenderSelector::parse(division.as_deref(), professor.as_deref())?;
            let grid = render_schedule(&inst, &f, &tt, &selector)?;
            fs::create_dir_all(&out.out)?;
            fs::write(out.out.join("schedule.txt"), &grid)?;
            print!("{grid}");
        }
        Command::ExportModel {
            instance,
            format,
            objective,
            tabu,
            out,
        } => {
            let inst = parse_instance(&fs::read_to_string(instance)?)?;
            let spec = objective_spec(objective, inst.edge_weights(), tabu.as_ref())?;
            let model = build_model(&inst, &spec)?;
            let (fmt, name) = match format {
                FormatArg::Opb => (ExportFormat::PseudoBoolean, "model.opb"),
                FormatArg::Wcnf => (ExportFormat::WeightedClauses, "model.wcnf"),
            };
            let export = export_model(&model, fmt)?;
            fs::create_dir_all(&out.out)?;
            fs::write(out.out.join(name), &export.model)?;
            fs::write(out.out.join("model.map"), &export.var_map)?;
            println!("exported {name} ({})", model.sizes());
        }
        Command::ImportSolution {
            instance,
            assignment,
            out,
        } => {
            let inst = parse_instance(&fs::read_to_string(instance)?)?;
            let model = build_model(&inst, &ObjectiveSpec::weighted(inst.edge_weights()))?;
            let f = import_solution(&model, &fs::read_to_string(assignment)?)?;
            let violations = sectioning::conflict_graph::validate_sectioning(&inst, &f)?;
            if !violations.is_empty() {
                for v in &violations {
                    eprintln!("violation: {v}");
                }
                return Ok(ExitCode::FAILURE);
            }
            fs::create_dir_all(&out.out)?;
            fs::write(out.out.join("sectioning.tsv"), documents::write_sectioning(&f))?;
            println!(
                "imported: objective {}",
                objective_value(&inst, &f, &ObjectiveSpec::weighted(inst.edge_weights()))?
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
