//! `lwr`: validate extension data, build extension algebras, compute
//! embedding tables, and run the certificate suite, all over exact fields.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use lwr_core::embedding::{build_tables, Certificate, EmbeddingTables, Relation};
use lwr_core::extension::{build_extension, ExtensionData};
use lwr_core::presentation::PresentationFile;
use lwr_core::report::{
    residual_map, violation_instance_names, ReportFailure, RunReport, ValidationReport,
};
use lwr_core::{fixtures, ExtensionAlgebra};

#[derive(Parser)]
#[command(name = "lwr", version, about = "Wreath products, extensions, and certified embeddings of Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Lie, derivation, and factor-set validators on a presentation
    Validate {
        file: PathBuf,
        /// Print the report as JSON instead of human-readable text
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to a file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the extension algebra N and emit its structure constants
    Build {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the embedding tables and emit them as JSON
    Embed {
        file: PathBuf,
        /// Truncation degree for the tables
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full certificate suite: R1, R2, R3, HOM, INJ
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Seed for the randomized injectivity trials
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of injectivity trials
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a named fixture presentation file
    Catalog {
        /// One of: heisenberg, nonabelian2, direct-sum, n4, oscillator,
        /// sl2-module-trivial-g, bad-cocycle, bad-cocycle-c
        name: String,
        /// Output path (defaults to <name>.json)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

struct Input {
    data: ExtensionData,
    digest: String,
    path: String,
}

fn load(path: &Path) -> Result<Input> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let digest = format!("sha256:{:x}", Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).context("presentation file is not UTF-8")?;
    let file = PresentationFile::from_json_str(&text)?;
    let data = file.into_extension_data()?;
    Ok(Input { data, digest, path: path.display().to_string() })
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Validate { file, json, out } => {
            let started = Instant::now();
            let input = load(&file)?;
            let mut report = RunReport::new("validate", &input.path, input.data.m.field().to_string());
            report.input_digest = Some(input.digest.clone());

            let sections = validation_sections(&input.data);
            let mut lines = Vec::new();
            for (label, validation, major, minor) in &sections {
                lines.push(format!(
                    "{label}: {} checks, {} failures",
                    validation.checked,
                    validation.violations.len()
                ));
                report.record(validation.checked, validation_failures(validation, major, minor, major));
            }
            report.set_timing(started.elapsed());
            emit_report(&report, &lines, json, out.as_ref())?;
            Ok(report.all_passed())
        }
        Command::Build { file, json, out } => {
            let input = load(&file)?;
            match build_extension(&input.data) {
                Ok(ext) => {
                    let text = serde_json::to_string_pretty(&extension_json(&ext))?;
                    if !json && out.is_some() {
                        println!(
                            "built N: dim {} with ideal block of dim {}",
                            ext.n.dim(),
                            ext.m_dim
                        );
                    }
                    write_or_print(out.as_ref(), &text)?;
                    Ok(true)
                }
                Err(err) => {
                    eprintln!("invalid extension data: {err}");
                    Ok(false)
                }
            }
        }
        Command::Embed { file, degree, json, out } => {
            if degree < 1 {
                bail!("--degree must be at least 1");
            }
            let input = load(&file)?;
            match build_tables(&input.data, degree) {
                Ok(tables) => {
                    let text = serde_json::to_string_pretty(&tables.to_json())?;
                    if !json && out.is_some() {
                        println!("embedding tables built to degree {degree}");
                    }
                    write_or_print(out.as_ref(), &text)?;
                    Ok(true)
                }
                Err(err) => {
                    eprintln!("invalid extension data: {err}");
                    Ok(false)
                }
            }
        }
        Command::Verify { file, degree, seed, trials, json, out } => {
            if degree < 2 {
                bail!("--degree must be at least 2 for bracket-preservation certificates");
            }
            let started = Instant::now();
            let input = load(&file)?;
            let mut report = RunReport::new("verify", &input.path, input.data.m.field().to_string());
            report.input_digest = Some(input.digest.clone());
            report.degree = Some(degree);

            let mut lines = Vec::new();
            let sections = validation_sections(&input.data);
            for (label, validation, major, minor) in &sections {
                lines.push(format!(
                    "{label}: {} checks, {} failures",
                    validation.checked,
                    validation.violations.len()
                ));
                report.record(validation.checked, validation_failures(validation, major, minor, major));
            }

            if report.all_passed() {
                let tables = build_tables(&input.data, degree)
                    .expect("validators passed, tables must build");
                let invariants = tables.validate();
                lines.push(format!(
                    "table invariants: {} checks, {} failures",
                    invariants.checked,
                    invariants.violations.len()
                ));
                let m_names = input.data.m.basis_names().to_vec();
                let l_names = input.data.l.basis_names().to_vec();
                report.record(
                    invariants.checked,
                    validation_failures(&invariants, &m_names, &l_names, &m_names),
                );

                let mut certs = tables.verify_relations();
                certs.extend(tables.verify_homomorphism());
                certs.push(tables.verify_injectivity(trials, seed));
                for relation in [Relation::R1, Relation::R2, Relation::R3, Relation::Hom, Relation::Inj]
                {
                    let of_kind: Vec<&Certificate> =
                        certs.iter().filter(|c| c.relation == relation).collect();
                    let failed = of_kind.iter().filter(|c| !c.passed()).count();
                    lines.push(format!(
                        "{relation}: {} certificates, {failed} failures",
                        of_kind.len()
                    ));
                    report.record(
                        of_kind.len(),
                        of_kind
                            .iter()
                            .filter(|c| !c.passed())
                            .map(|c| certificate_failure(&tables, c))
                            .collect(),
                    );
                }
            } else {
                lines.push("skipping certificates: input failed validation".to_string());
            }
            report.set_timing(started.elapsed());
            emit_report(&report, &lines, json, out.as_ref())?;
            Ok(report.all_passed())
        }
        Command::Catalog { name, out } => {
            let data = fixtures::fixture(&name, lwr_core::FieldSpec::Rationals)?;
            let path = out.unwrap_or_else(|| PathBuf::from(format!("{name}.json")));
            let file = PresentationFile::from_data(&data);
            std::fs::write(&path, file.to_json_string())
                .with_context(|| format!("cannot write {}", path.display()))?;
            println!("wrote {}", path.display());
            Ok(true)
        }
    }
}

/// Label, validation outcome, and the name tables used for rendering:
/// instance-major names, instance-minor names, residual names.
type Section = (&'static str, ValidationReport, Vec<String>, Vec<String>);

fn validation_sections(data: &ExtensionData) -> Vec<Section> {
    let m_names = data.m.basis_names().to_vec();
    let l_names = data.l.basis_names().to_vec();
    vec![
        ("jacobi(M)", data.m.validate(), m_names.clone(), l_names.clone()),
        ("jacobi(L)", data.l.validate(), l_names.clone(), l_names.clone()),
        ("factor set", data.validate(), m_names, l_names),
    ]
}

fn validation_failures(
    report: &ValidationReport,
    m_names: &[String],
    l_names: &[String],
    residual_names: &[String],
) -> Vec<ReportFailure> {
    report
        .violations
        .iter()
        .map(|v| ReportFailure {
            kind: v.condition.to_string(),
            instance: violation_instance_names(v, m_names, l_names),
            monomial: None,
            residual: residual_map(&v.residual, residual_names),
        })
        .collect()
}

fn certificate_failure(tables: &EmbeddingTables, cert: &Certificate) -> ReportFailure {
    ReportFailure {
        kind: cert.relation.to_string(),
        instance: tables.render_instance(cert),
        monomial: cert
            .monomial
            .as_ref()
            .map(|m| m.format_with(tables.data().l.basis_names())),
        residual: tables.render_residual(cert),
    }
}

fn emit_report(
    report: &RunReport,
    lines: &[String],
    json: bool,
    out: Option<&PathBuf>,
) -> Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    if json {
        println!("{text}");
    } else {
        println!("input: {} ({})", report.input, report.field);
        if let Some(d) = report.degree {
            println!("degree: {d}");
        }
        for line in lines {
            println!("{line}");
        }
        for failure in &report.failures {
            println!(
                "FAIL {} at ({}){}: residual {:?}",
                failure.kind,
                failure.instance.join(","),
                failure
                    .monomial
                    .as_ref()
                    .map(|m| format!(" monomial {m}"))
                    .unwrap_or_default(),
                failure.residual
            );
        }
        let s = &report.summary;
        if s.failed == 0 {
            println!("all {} checks passed ({} ms)", s.total, report.timing_ms);
        } else {
            println!(
                "{} of {} checks FAILED ({} ms)",
                s.failed, s.total, report.timing_ms
            );
        }
    }
    if let Some(path) = out {
        std::fs::write(path, &text)
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn extension_json(ext: &ExtensionAlgebra) -> serde_json::Value {
    let names = ext.n.basis_names();
    let brackets: Vec<serde_json::Value> = ext
        .n
        .structure_constants()
        .map(|((i, j), v)| {
            let coeffs: BTreeMap<String, String> =
                v.iter().map(|(k, c)| (names[k].clone(), c.to_string())).collect();
            serde_json::json!({ "i": i, "j": j, "coeffs": coeffs })
        })
        .collect();
    serde_json::json!({
        "dim": ext.n.dim(),
        "m_dim": ext.m_dim,
        "basis": names,
        "brackets": brackets,
    })
}
