//! Command-line driver: validation, cohomology sweeps, and connection
//! analysis for quasi-homogeneous surface singularities.
//!
//! Exit codes: 0 success, 1 validation failure, 2 computation instability
//! (presentation-bound sensitivity), 3 input parse error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lrcohom::conn::{self, RankOneModule};
use lrcohom::equiv::{self, CyclicActionType};
use lrcohom::lrc::{self, Complex};
use lrcohom::wpoly::WeightedAlgebra;

use lrcohom_cli::input::{self, LoadError, ProblemSpec};
use lrcohom_cli::report::*;

#[derive(Parser)]
#[command(
    name = "lrcohom",
    about = "Exact Lie-Rinehart cohomology of quasi-homogeneous surface singularities, \
             with cyclic group actions and integrable-connection analysis",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a problem file: homogeneity, action compatibility,
    /// pseudo-reflections, hypothesis flags.
    Check {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Sweep cohomology dimensions over a degree window.
    Cohomology {
        spec: PathBuf,
        /// Highest cohomology level to compute.
        #[arg(long, default_value_t = 2)]
        max_n: usize,
        /// Degree window LO:HI (inclusive); overrides the problem file.
        #[arg(long, value_parser = parse_window)]
        window: Option<(i64, i64)>,
        /// Also report invariant (weight-0) dimensions; requires an action
        /// and the asserted Galois hypothesis.
        #[arg(long)]
        invariants: bool,
        /// Skip the presentation-bound stability re-check.
        #[arg(long)]
        no_stability_check: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Verify a connection on a rank-one module and analyze integrability
    /// and moduli.
    Connection {
        spec: PathBuf,
        /// Module file (ideal generators).
        #[arg(long)]
        module: PathBuf,
        /// Connection file (gamma matrices).
        #[arg(long)]
        connection: PathBuf,
        /// Optional second connection to compare against.
        #[arg(long)]
        second: Option<PathBuf>,
        /// Run the equivariant analysis (average, invariant classes).
        #[arg(long)]
        equivariant: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| "window must be LO:HI".to_string())?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad HI: {e}"))?;
    if lo > hi {
        return Err(format!("window [{lo}, {hi}] is empty"));
    }
    Ok((lo, hi))
}

const EXIT_OK: u8 = 0;
const EXIT_VALIDATION: u8 = 1;
const EXIT_INSTABILITY: u8 = 2;
const EXIT_PARSE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e.downcast_ref::<LoadError>() {
                Some(LoadError::Parse(_)) => EXIT_PARSE,
                Some(LoadError::Validation(_)) => EXIT_VALIDATION,
                None => {
                    // unexpressible brackets and relation-set escapes both
                    // mean the presentation bound was too small
                    if e.downcast_ref::<lrc::InstabilityError>().is_some()
                        || e.downcast_ref::<lrc::BuildError>().is_some()
                    {
                        EXIT_INSTABILITY
                    } else {
                        EXIT_VALIDATION
                    }
                }
            }
        }
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Check { spec, format } => {
            let spec = input::load_problem(&spec)?;
            let (report, ok) = build_check_report(&spec)?;
            emit(format, &report, render_check(&report))?;
            Ok(if ok { EXIT_OK } else { EXIT_VALIDATION })
        }
        Command::Cohomology {
            spec,
            max_n,
            window,
            invariants,
            no_stability_check,
            format,
        } => {
            let spec = input::load_problem(&spec)?;
            let (check, ok) = build_check_report(&spec)?;
            if !ok {
                emit(format, &check, render_check(&check))?;
                return Ok(EXIT_VALIDATION);
            }
            let window = window.unwrap_or(spec.window);
            let (report, stable) =
                cohomology_report(&spec, max_n, window, invariants, !no_stability_check)?;
            emit(format, &report, render_cohomology(&report))?;
            Ok(if stable { EXIT_OK } else { EXIT_INSTABILITY })
        }
        Command::Connection {
            spec,
            module,
            connection,
            second,
            equivariant,
            format,
        } => {
            let spec = input::load_problem(&spec)?;
            let (check, ok) = build_check_report(&spec)?;
            if !ok {
                emit(format, &check, render_check(&check))?;
                return Ok(EXIT_VALIDATION);
            }
            let (report, ok) =
                connection_report(&spec, &module, &connection, second.as_deref(), equivariant)?;
            emit(format, &report, render_connection(&report))?;
            Ok(if ok { EXIT_OK } else { EXIT_VALIDATION })
        }
    }
}

fn emit<T: serde::Serialize>(format: Format, value: &T, text: String) -> anyhow::Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Text => print!("{text}"),
    }
    Ok(())
}

fn algebra_info(spec: &ProblemSpec) -> AlgebraInfo {
    let w = spec.algebra.weights();
    AlgebraInfo {
        f: spec.f_text.clone(),
        variable_weights: w.vars,
        total_weight: w.total,
        degree_shift: w.degree_shift(),
    }
}

fn action_info(alg: &WeightedAlgebra, act: &CyclicActionType) -> anyhow::Result<ActionInfo> {
    let rep = equiv::check_action(alg, act)?;
    Ok(ActionInfo {
        order: act.order,
        exponents: act.exponents,
        compatible: rep.compatible,
        strict_equality: rep.strict_equality,
        residue_sum_raw: rep.residue_sum_raw,
        residue_sum: rep.residue_sum,
    })
}

fn build_check_report(spec: &ProblemSpec) -> anyhow::Result<(CheckReport, bool)> {
    let mut warnings = Vec::new();
    let mut ok = true;
    let (action, pseudo_reflections) = match &spec.action {
        None => (None, None),
        Some(act) => match equiv::check_action(&spec.algebra, act) {
            Ok(rep) => {
                if !rep.strict_equality {
                    warnings.push(
                        "action is compatible by congruence mod m only (some support \
                         monomial has weight sum != m)"
                            .to_string(),
                    );
                }
                let prs = equiv::pseudo_reflection_report(act.order, &act.exponents);
                if prs.has_pseudo_reflections() {
                    warnings.push(
                        "the linearized action contains pseudo-reflections; the \
                         polynomial-ring sufficient condition for the Galois hypothesis \
                         fails"
                            .to_string(),
                    );
                }
                (
                    Some(ActionInfo {
                        order: act.order,
                        exponents: act.exponents,
                        compatible: true,
                        strict_equality: rep.strict_equality,
                        residue_sum_raw: rep.residue_sum_raw,
                        residue_sum: rep.residue_sum,
                    }),
                    Some(
                        prs.reflections
                            .iter()
                            .map(|p| PseudoReflectionInfo {
                                power: p.power,
                                fixed_dim: p.fixed_dim,
                            })
                            .collect(),
                    ),
                )
            }
            Err(e) => {
                ok = false;
                warnings.push(e.to_string());
                (
                    Some(ActionInfo {
                        order: act.order,
                        exponents: act.exponents,
                        compatible: false,
                        strict_equality: false,
                        residue_sum_raw: act.exponents.iter().map(|&e| e as i64).sum::<i64>()
                            - act.order as i64,
                        residue_sum: 0,
                    }),
                    None,
                )
            }
        },
    };
    Ok((
        CheckReport {
            algebra: algebra_info(spec),
            action,
            pseudo_reflections,
            galois_asserted: spec.galois_asserted,
            presentation_bound: spec.bound,
            warnings,
        },
        ok,
    ))
}

fn cohomology_report(
    spec: &ProblemSpec,
    max_n: usize,
    window: (i64, i64),
    invariants: bool,
    stability_check: bool,
) -> anyhow::Result<(CohomologyReport, bool)> {
    if invariants && spec.action.is_none() {
        anyhow::bail!(LoadError::Validation(
            "--invariants requires an action block in the problem file".into()
        ));
    }
    let cx = Complex::build(spec.algebra.clone(), spec.action.clone(), spec.bound)?;
    if invariants && !spec.galois_asserted {
        // surface the refusal from the library so the message stays in one place
        equiv::invariant_cohomology(&cx, 0, 0, false)
            .map_err(|e| anyhow::anyhow!(LoadError::Validation(e.to_string())))?;
    }
    let mut rows = Vec::new();
    for e in window.0..=window.1 {
        let mut cells = Vec::new();
        for n in 0..=max_n {
            let coh = cx.cohomology(n, e)?;
            let blocks = coh
                .blocks
                .as_ref()
                .map(|b| {
                    b.iter()
                        .map(|(&xi_weight, &dim)| BlockDim { xi_weight, dim })
                        .collect()
                })
                .unwrap_or_default();
            let invariant = if invariants {
                Some(equiv::invariant_cohomology(&cx, n, e, spec.galois_asserted)?.dim)
            } else {
                None
            };
            cells.push(DimCell {
                n,
                dim: coh.dim,
                blocks,
                invariant,
            });
        }
        rows.push(DimRow { degree: e, cells });
    }

    let mut warnings = Vec::new();
    let mut stable = true;
    if stability_check {
        let mismatches = lrc::compare_presentation_bounds(
            &spec.algebra,
            spec.action.as_ref(),
            spec.bound,
            max_n,
            window,
        )?;
        for m in &mismatches {
            warnings.push(format!(
                "instability: dim H^{} at degree {} changes from {} to {} when the \
                 presentation bound is raised by 2",
                m.n, m.degree, m.dim_low, m.dim_high
            ));
        }
        stable = mismatches.is_empty();
    }
    if let Some(act) = &spec.action {
        let rep = equiv::check_action(&spec.algebra, act)?;
        if !rep.strict_equality {
            warnings.push("action is compatible by congruence mod m only".to_string());
        }
    }

    let action = spec
        .action
        .as_ref()
        .map(|a| action_info(&spec.algebra, a))
        .transpose()?;
    let bridge_note = (invariants || spec.action.is_some()).then(|| BRIDGE_NOTE.to_string());
    Ok((
        CohomologyReport {
            algebra: algebra_info(spec),
            action,
            galois_asserted: spec.galois_asserted,
            window: [window.0, window.1],
            max_n,
            presentation_bound: spec.bound,
            rows,
            warnings,
            bridge_note,
        },
        stable,
    ))
}

fn class_info(c: &conn::ClassComponent) -> ClassInfo {
    ClassInfo {
        degree: c.degree,
        h_dim: c.class.h_dim,
        coordinates: c.class.coordinates.iter().map(|q| q.to_string()).collect(),
        coboundary: c.class.coboundary,
    }
}

fn connection_report(
    spec: &ProblemSpec,
    module_path: &std::path::Path,
    conn_path: &std::path::Path,
    second_path: Option<&std::path::Path>,
    equivariant: bool,
) -> anyhow::Result<(ConnectionReport, bool)> {
    if equivariant && spec.action.is_none() {
        anyhow::bail!(LoadError::Validation(
            "--equivariant requires an action block in the problem file".into()
        ));
    }
    let cx = Complex::build(spec.algebra.clone(), spec.action.clone(), spec.bound)?;
    let (gen_polys, syzygy_bound) = input::load_module_polys(module_path)?;
    let module = RankOneModule::new(
        &spec.algebra,
        gen_polys,
        spec.action.as_ref(),
        syzygy_bound.unwrap_or(spec.bound),
    )
    .map_err(|e| anyhow::anyhow!(LoadError::Validation(e.to_string())))?;
    let g = cx.presentation().num_gens();
    let r = module.num_gens();
    let connection = input::load_connection(conn_path, g, r)?;

    let mut report = ConnectionReport {
        algebra: algebra_info(spec),
        module_generators: module.gens.iter().map(|p| p.to_string()).collect(),
        module_relations: module.relations.len(),
        verified: false,
        violations: Vec::new(),
        curvature_zero: None,
        integrability: Vec::new(),
        integrability_zero: None,
        equivariant: None,
        comparison: None,
        warnings: Vec::new(),
        bridge_note: equivariant.then(|| BRIDGE_NOTE.to_string()),
    };

    let check = conn::verify_connection(&cx, &module, &connection)?;
    report.verified = check.is_ok();
    if !check.is_ok() {
        report.violations = check.violations.iter().map(|v| v.to_string()).collect();
        return Ok((report, false));
    }

    let curv = conn::curvature(&cx, &module, &connection)?;
    report.curvature_zero = Some(curv.is_zero());
    let ic = conn::integrability_class(&cx, &module, &connection, None)?;
    report.integrability = ic.components.iter().map(class_info).collect();
    report.integrability_zero = Some(ic.zero);

    if equivariant {
        if !spec.galois_asserted {
            anyhow::bail!(LoadError::Validation(
                "equivariant connection analysis requires galois_asserted = true; without \
                 it the invariant classes are not interpretable over the quotient"
                    .into()
            ));
        }
        let avg = conn::average_connection(&cx, &module, &connection)
            .map_err(|e| anyhow::anyhow!(LoadError::Validation(e.to_string())))?;
        let invariant = conn::is_invariant_connection(&cx, &module, &avg)?;
        let ic_inv = conn::integrability_class(&cx, &module, &avg, Some(0))?;
        let mut inv_h1_total = 0usize;
        for e in spec.window.0..=spec.window.1 {
            inv_h1_total += equiv::invariant_cohomology(&cx, 1, e, spec.galois_asserted)
                .map_err(|e| anyhow::anyhow!(LoadError::Validation(e.to_string())))?
                .dim;
        }
        let conclusion = if ic_inv.zero {
            if inv_h1_total == 0 {
                "an integrable connection exists on the quotient module, unique up to \
                 equivalence"
                    .to_string()
            } else {
                format!(
                    "an integrable connection exists on the quotient module; the moduli \
                     space of integrable connections has dimension {inv_h1_total}"
                )
            }
        } else {
            "the invariant integrability class is nonzero: no integrable connection \
             exists on the quotient module"
                .to_string()
        };
        report.equivariant = Some(EquivariantConnectionInfo {
            averaged: true,
            average_invariant: invariant,
            invariant_class: ic_inv.components.iter().map(class_info).collect(),
            invariant_class_zero: ic_inv.zero,
            invariant_h1_total: inv_h1_total,
            conclusion,
        });
    }

    if let Some(second) = second_path {
        let other = input::load_connection(second, g, r)?;
        let check2 = conn::verify_connection(&cx, &module, &other)?;
        if !check2.is_ok() {
            report.violations = check2
                .violations
                .iter()
                .map(|v| format!("second connection: {v}"))
                .collect();
            return Ok((report, false));
        }
        let block = if equivariant { Some(0) } else { None };
        let moduli = conn::moduli_class(&cx, &module, &connection, &other, block)
            .map_err(|e| anyhow::anyhow!(LoadError::Validation(e.to_string())))?;
        report.comparison = Some(ModuliInfo {
            equivalent: moduli.equivalent,
            components: moduli.components.iter().map(class_info).collect(),
        });
    }

    Ok((report, true))
}
