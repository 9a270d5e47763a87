//! Subcommand implementations. Each command writes its report to `out`,
//! diagnostics to `err`, and maps failures to a [`CliError`] carrying the
//! process exit code.

use super::format::{
    emit_config, emit_instance, parse_config, parse_instance, ConfigFile, Instance,
};
use super::svg::{render_svg, StackDrawing};
use crate::airplane::{self, first_dropout_violation, fleet_range, AirplaneFleet, DropoutOrder};
use crate::appointment::{ras_to_ar, schedule_for_order, solve_ras, RasReduction};
use crate::rational::{format_decimal, format_rational, Rational};
use crate::reductions::{
    ar_to_bsp, bsp_to_ar, build_gadget, decide_partition, decide_partition_via_bsp,
    is_bullet_star_protruding, PartitionVerdict,
};
use crate::solvers::{
    exact_solve, first_pairwise_violation, oracle_solve, ratio_heuristic_order, two_approx_solve,
    SolveResult,
};
use crate::stack::{
    find_balance_violation, overhang_right_aligned, realize, BlockSet, StackConfiguration,
};
use crate::Error;
use clap::{Subcommand, ValueEnum};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// A command failure and the exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    SizeCap(String),
    #[error("no perfect partition possible (odd sum)")]
    OddSum,
    #[error("{0}")]
    Io(String),
    /// A verification check failed; the report has already been written.
    #[error("verification failed")]
    CheckFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::CheckFailed => 1,
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::SizeCap(_) => 3,
            CliError::OddSum => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeCap { .. } => CliError::SizeCap(e.to_string()),
            Error::OddSum => CliError::OddSum,
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult = std::result::Result<(), CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMethod {
    /// Exhaustive enumeration, capped at 8 items.
    Oracle,
    /// Branch-and-bound.
    Exact,
    /// Best right-aligned stack (block stacking only).
    Approx2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    PartitionToBsp,
    BspToAr,
    ArToBsp,
    RasToAr,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Solve an instance and print the optimum.
    Solve {
        file: PathBuf,
        /// Forbid counterweights (block stacking only).
        #[arg(long)]
        no_counterbalancing: bool,
        #[arg(long, value_enum, default_value_t = SolveMethod::Exact)]
        method: SolveMethod,
        /// Also print the ratio-heuristic order that seeds the search.
        #[arg(long)]
        seed_order: bool,
        /// Write the solution as a configuration file.
        #[arg(long, value_name = "PATH")]
        emit_config: Option<PathBuf>,
    },
    /// Transform an instance into an equivalent one of another kind.
    Reduce {
        #[arg(value_enum)]
        direction: Direction,
        file: PathBuf,
        /// Output path; standard output when omitted.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Check a configuration against an instance.
    Verify { file: PathBuf, config: PathBuf },
    /// Draw a block stack as SVG.
    Render {
        file: PathBuf,
        config: PathBuf,
        /// Output path; standard output when omitted.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> std::result::Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> std::result::Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load_config(path: &Path) -> std::result::Result<ConfigFile, CliError> {
    parse_config(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write_output(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn one_based(order: &[usize]) -> String {
    order
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn value_lines(out: &mut dyn Write, label: &str, value: &Rational) -> CliResult {
    writeln!(out, "{label} {}", format_rational(value))?;
    writeln!(out, "decimal {}", format_decimal(value, 6))?;
    Ok(())
}

pub fn run(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Solve {
            file,
            no_counterbalancing,
            method,
            seed_order,
            emit_config,
        } => solve(
            &file,
            !no_counterbalancing,
            method,
            seed_order,
            emit_config.as_deref(),
            out,
        ),
        Command::Reduce {
            direction,
            file,
            out: path,
        } => reduce(direction, &file, path.as_deref(), out, err),
        Command::Verify { file, config } => verify(&file, &config, out),
        Command::Render {
            file,
            config,
            out: path,
        } => render(&file, &config, path.as_deref(), out, err),
    }
}

fn ar_method(method: SolveMethod, kind: &str) -> std::result::Result<airplane::Method, CliError> {
    match method {
        SolveMethod::Oracle => Ok(airplane::Method::Oracle),
        SolveMethod::Exact => Ok(airplane::Method::Exact),
        SolveMethod::Approx2 => Err(CliError::Usage(format!(
            "method approx2 applies to bsp instances, not {kind}"
        ))),
    }
}

fn solve_stack(blocks: &BlockSet, cb: bool, method: SolveMethod) -> crate::Result<SolveResult> {
    match method {
        SolveMethod::Oracle => oracle_solve(blocks, cb),
        SolveMethod::Exact => Ok(exact_solve(blocks, cb)),
        SolveMethod::Approx2 => Ok(two_approx_solve(blocks)),
    }
}

fn solve(
    file: &Path,
    cb: bool,
    method: SolveMethod,
    seed_order: bool,
    emit: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult {
    let inst = load_instance(file)?;
    if emit.is_some() && matches!(inst, Instance::Partition(_)) {
        return Err(CliError::Usage(
            "--emit-config is not available for partition instances".into(),
        ));
    }
    let config = match &inst {
        Instance::Bsp(blocks) => {
            let res = solve_stack(blocks, cb, method)?;
            value_lines(out, "overhang", &res.overhang)?;
            writeln!(out, "order {}", one_based(res.config.order()))?;
            writeln!(
                out,
                "protruding block {} at position {}",
                res.config.protruding_block() + 1,
                res.config.protruding() + 1
            )?;
            if !res.config.counterweights().is_empty() {
                writeln!(
                    out,
                    "counterweights {}",
                    one_based(res.config.counterweights())
                )?;
            }
            if !res.optimal {
                writeln!(out, "approximate true")?;
            }
            writeln!(out, "nodes {}", res.nodes_explored)?;
            if seed_order {
                let seed = ratio_heuristic_order(blocks);
                let value = overhang_right_aligned(blocks, &seed)?;
                writeln!(out, "seed-order {}", one_based(&seed))?;
                writeln!(out, "seed-value {}", format_rational(&value))?;
            }
            ConfigFile::Stack {
                order: res.config.order().iter().map(|i| i + 1).collect(),
                protruding: Some(res.config.protruding() + 1),
                positions: None,
            }
        }
        Instance::Ar { fleet, .. } => {
            let sol = airplane::solve_ar(fleet, ar_method(method, "ar")?)?;
            value_lines(out, "range", &sol.range)?;
            writeln!(out, "order {}", one_based(sol.order.sequence()))?;
            writeln!(out, "nodes {}", sol.nodes_explored)?;
            if seed_order {
                let seed = ratio_heuristic_order(&ar_to_bsp(fleet));
                let seq: Vec<usize> = seed.into_iter().rev().collect();
                let range = fleet_range(fleet, &DropoutOrder::new(seq.clone(), fleet.len())?)?;
                writeln!(out, "seed-order {}", one_based(&seq))?;
                writeln!(out, "seed-value {}", format_rational(&range))?;
            }
            ConfigFile::Dropout {
                order: sol.order.sequence().iter().map(|i| i + 1).collect(),
            }
        }
        Instance::Ras(ras) => {
            let sched = solve_ras(ras, ar_method(method, "ras")?)?;
            value_lines(out, "cost", &sched.worst_case_cost)?;
            writeln!(out, "order {}", one_based(&sched.order))?;
            for (i, t) in sched.allocations.iter().enumerate() {
                writeln!(out, "t{} {}", i + 1, format_rational(t))?;
            }
            ConfigFile::Schedule {
                order: sched.order.iter().map(|i| i + 1).collect(),
            }
        }
        Instance::Partition(p) => {
            let verdict = match method {
                SolveMethod::Exact => decide_partition(p)?,
                SolveMethod::Oracle => decide_partition_via_bsp(p, |b| oracle_solve(b, true))?,
                SolveMethod::Approx2 => return Err(ar_method(method, "partition").unwrap_err()),
            };
            match verdict {
                PartitionVerdict::OddSum => {
                    writeln!(out, "verdict NO")?;
                    writeln!(out, "reason no perfect partition possible (odd sum)")?;
                }
                PartitionVerdict::NoPerfectPartition { counterweight } => {
                    writeln!(out, "verdict NO")?;
                    writeln!(out, "target {}", p.target().expect("even sum"))?;
                    writeln!(
                        out,
                        "optimal counterweight {}",
                        format_rational(&counterweight)
                    )?;
                }
                PartitionVerdict::Perfect {
                    counterweights,
                    right_aligned,
                } => {
                    writeln!(out, "verdict YES")?;
                    writeln!(out, "target {}", p.target().expect("even sum"))?;
                    writeln!(out, "subset {}", one_based(&sorted(counterweights)))?;
                    writeln!(out, "complement {}", one_based(&sorted(right_aligned)))?;
                }
            }
            return Ok(());
        }
    };
    if let Some(path) = emit {
        write_output(out, Some(path), &emit_config(&config))?;
    }
    Ok(())
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn reduce(
    direction: Direction,
    file: &Path,
    path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let inst = load_instance(file)?;
    let wrong =
        |want: &str| CliError::Usage(format!("expected a {want} instance, found {}", inst.kind()));
    let result = match (direction, &inst) {
        (Direction::PartitionToBsp, Instance::Partition(p)) => {
            let g = build_gadget(p)?;
            writeln!(err, "T {}", g.target())?;
            writeln!(err, "w_bullet {}", format_rational(g.bullet_width()))?;
            writeln!(err, "w_star {}", format_rational(g.star_width()))?;
            Instance::Bsp(g.blocks().clone())
        }
        (Direction::BspToAr, Instance::Bsp(blocks)) => Instance::Ar {
            fleet: bsp_to_ar(blocks),
            auxiliary: None,
        },
        (Direction::ArToBsp, Instance::Ar { fleet, .. }) => Instance::Bsp(ar_to_bsp(fleet)),
        (Direction::RasToAr, Instance::Ras(ras)) => match ras_to_ar(ras)? {
            RasReduction::Trivial => {
                writeln!(
                    out,
                    "trivial instance: every job has p_low = p_high, so every order costs 0"
                )?;
                return Ok(());
            }
            RasReduction::Fleet { fleet, auxiliary } => Instance::Ar {
                fleet,
                auxiliary: Some(auxiliary),
            },
        },
        (Direction::PartitionToBsp, _) => return Err(wrong("partition")),
        (Direction::BspToAr, _) => return Err(wrong("bsp")),
        (Direction::ArToBsp, _) => return Err(wrong("ar")),
        (Direction::RasToAr, _) => return Err(wrong("ras")),
    };
    write_output(out, path, &emit_instance(&result))
}

fn mismatch(inst: &Instance, cfg: &ConfigFile) -> CliError {
    CliError::Usage(format!(
        "a {} configuration does not apply to a {} instance",
        cfg.kind(),
        inst.kind()
    ))
}

/// Blocks and a stack configuration, resolved from the instance and config
/// files. Partition instances stand for their gadget.
struct ResolvedStack {
    blocks: BlockSet,
    order: Vec<usize>,
    config: Option<StackConfiguration>,
    positions: Vec<Rational>,
}

fn resolve_stack(
    inst: &Instance,
    cfg: &ConfigFile,
) -> std::result::Result<ResolvedStack, CliError> {
    let blocks = match inst {
        Instance::Bsp(b) => b.clone(),
        Instance::Partition(p) => build_gadget(p)?.blocks().clone(),
        _ => return Err(mismatch(inst, cfg)),
    };
    let ConfigFile::Stack {
        protruding,
        positions,
        ..
    } = cfg
    else {
        return Err(mismatch(inst, cfg));
    };
    let order = cfg.zero_based_order().map_err(|e| CliError::Parse(e.0))?;
    let config = match (protruding, positions) {
        (Some(p), _) => {
            let p = p
                .checked_sub(1)
                .ok_or_else(|| CliError::Parse("protruding positions start at 1".into()))?;
            Some(StackConfiguration::new(order.clone(), p)?)
        }
        (None, None) => Some(StackConfiguration::right_aligned(order.clone())?),
        (None, Some(_)) => None,
    };
    if let Some(c) = &config {
        c.check_for(&blocks)?;
    }
    let positions = match (positions, &config) {
        (Some(x), _) => x.clone(),
        (None, Some(c)) => realize(&blocks, c)?.positions,
        (None, None) => unreachable!("positions or a configuration is always present"),
    };
    find_balance_violation(&blocks, &order, &positions)?;
    Ok(ResolvedStack {
        blocks,
        order,
        config,
        positions,
    })
}

fn max_reach(blocks: &BlockSet, order: &[usize], positions: &[Rational]) -> Rational {
    order
        .iter()
        .zip(positions)
        .map(|(&i, x)| x + blocks[i].half_width())
        .max()
        .expect("non-empty stack")
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn verify(file: &Path, config: &Path, out: &mut dyn Write) -> CliResult {
    let inst = load_instance(file)?;
    let cfg = load_config(config)?;
    let mut all_ok = true;
    match (&inst, &cfg) {
        (Instance::Bsp(_) | Instance::Partition(_), ConfigFile::Stack { .. }) => {
            let s = resolve_stack(&inst, &cfg)?;
            match find_balance_violation(&s.blocks, &s.order, &s.positions)? {
                None => writeln!(out, "balance PASS")?,
                Some(v) => {
                    all_ok = false;
                    writeln!(out, "balance FAIL: {v}")?;
                }
            }
            writeln!(
                out,
                "overhang {}",
                format_rational(&max_reach(&s.blocks, &s.order, &s.positions))
            )?;
            if let Some(c) = &s.config {
                match first_pairwise_violation(&s.blocks, c) {
                    None => writeln!(out, "pairwise PASS")?,
                    Some((a, b)) => {
                        all_ok = false;
                        writeln!(
                            out,
                            "pairwise FAIL: w/(M+m) of block {} at position {} is below that of block {} at position {}",
                            s.order[a] + 1,
                            a + 1,
                            s.order[b] + 1,
                            b + 1
                        )?;
                    }
                }
                if let Instance::Partition(p) = &inst {
                    let ok = is_bullet_star_protruding(&build_gadget(p)?, c);
                    all_ok &= ok;
                    writeln!(out, "bullet-star {}", verdict(ok))?;
                }
            }
        }
        (Instance::Ar { fleet, .. }, ConfigFile::Dropout { .. }) => {
            let order = DropoutOrder::new(
                cfg.zero_based_order().map_err(|e| CliError::Parse(e.0))?,
                fleet.len(),
            )?;
            writeln!(
                out,
                "range {}",
                format_rational(&fleet_range(fleet, &order)?)
            )?;
            all_ok &= dropout_report(fleet, &order, out)?;
        }
        (Instance::Ras(ras), ConfigFile::Schedule { .. }) => {
            let order = cfg.zero_based_order().map_err(|e| CliError::Parse(e.0))?;
            let sched = schedule_for_order(ras, order)?;
            writeln!(out, "cost {}", format_rational(&sched.worst_case_cost))?;
            for (i, t) in sched.allocations.iter().enumerate() {
                writeln!(out, "t{} {}", i + 1, format_rational(t))?;
            }
            // The processing order, reversed and followed by the auxiliary
            // plane, is a dropout order of the reduced fleet.
            if let RasReduction::Fleet { fleet, auxiliary } = ras_to_ar(ras)? {
                let mut seq: Vec<usize> = sched.order.iter().rev().copied().collect();
                seq.push(auxiliary);
                all_ok &= dropout_report(&fleet, &DropoutOrder::new(seq, fleet.len())?, out)?;
            }
        }
        _ => return Err(mismatch(&inst, &cfg)),
    }
    if all_ok {
        Ok(())
    } else {
        Err(CliError::CheckFailed)
    }
}

/// Prints the dropout-condition line and returns whether it passed.
fn dropout_report(
    fleet: &AirplaneFleet,
    order: &DropoutOrder,
    out: &mut dyn Write,
) -> std::result::Result<bool, CliError> {
    let Some(k) = first_dropout_violation(fleet, order)? else {
        writeln!(out, "dropout-condition PASS")?;
        return Ok(true);
    };
    let seq = order.sequence();
    let after: Rational = seq[k + 1..]
        .iter()
        .map(|&i| fleet[i].consumption_rate())
        .sum();
    let f = |i: usize| {
        let c = fleet[i].consumption_rate();
        fleet[i].tank_volume() / (c * (&after + c))
    };
    writeln!(
        out,
        "dropout-condition FAIL: positions {} and {}: plane {} has v/(c(C+c)) = {} below {} of plane {} at C = {}",
        k,
        k + 1,
        seq[k] + 1,
        format_rational(&f(seq[k])),
        format_rational(&f(seq[k - 1])),
        seq[k - 1] + 1,
        format_rational(&after)
    )?;
    Ok(false)
}

fn render(
    file: &Path,
    config: &Path,
    path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let inst = load_instance(file)?;
    let cfg = load_config(config)?;
    let s = resolve_stack(&inst, &cfg)?;
    let warning = find_balance_violation(&s.blocks, &s.order, &s.positions)?.map(|v| v.to_string());
    if let Some(w) = &warning {
        writeln!(err, "warning: unbalanced configuration: {w}")?;
    }
    let svg = render_svg(&StackDrawing {
        blocks: &s.blocks,
        order: &s.order,
        positions: &s.positions,
        protruding: s.config.as_ref().map(|c| c.protruding()),
        overhang: max_reach(&s.blocks, &s.order, &s.positions),
        warning,
    });
    write_output(out, path, &svg)
}
