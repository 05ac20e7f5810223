use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use primad_bco::aspects::{aspect_checklist, render_text as render_aspects};
use primad_bco::bco::{parse_bco, to_json_pretty, validate_structure, verify_etag, BcoDocument, EtagResult};
use primad_bco::diagnostics::{run_lints, LintOptions, DEFAULT_FILENAME_THRESHOLD};
use primad_bco::mapping::{coverage_profile, data_inventory, documentation_supported_labels, export_tsv};
use primad_bco::primad::{classify, nasem_crosswalk, parse_changed, NasemTerm};
use primad_bco::reconfigure::{
    add_dissemination, add_reproduction_record, annotate_resource_permission, to_conceptual, Notice, Transformed,
};
use primad_bco::report::{analyze, exit, render_json, render_text};
use primad_bco::Severity;

#[derive(Parser)]
#[command(name = "primad-bco", version, about = "Reproducibility analysis of BioCompute Objects through the PRIMAD model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check and print one report.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lint: LintArgs,
    },
    /// Structural validation and etag verification.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Field-to-dimension mapping: the embedded table or a document's coverage.
    Map {
        /// Document to profile; not needed with --table.
        file: Option<PathBuf>,
        /// Print the embedded mapping table as TSV.
        #[arg(long)]
        table: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Classify a planned reproduction by the dimensions it changes.
    Classify {
        /// Comma-separated changed dimensions, e.g. `method,platform`. Empty for none.
        #[arg(long, required_unless_present = "nasem")]
        changed: Option<String>,
        /// Look up a NASEM term instead (reproducibility, replicability, generalizability).
        #[arg(long, conflicts_with = "changed")]
        nasem: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the lint rules.
    Lint {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lint: LintArgs,
    },
    /// Aspect checklist and the aspect/dimension crosswalk.
    Aspects {
        #[command(flatten)]
        input: Input,
    },
    /// Counts of inputs, outputs, parameters and error entries.
    Inventory {
        #[command(flatten)]
        input: Input,
    },
    /// Add reproducibility records or emit the conceptual preview.
    Reconfigure {
        /// Document to transform, or `-` for standard input.
        file: PathBuf,
        /// Write the conceptual preview to this file.
        #[arg(long, value_name = "OUT")]
        emit_conceptual: Option<PathBuf>,
        /// Name given to the merged domain in the preview.
        #[arg(long, default_value = primad_bco::reconfigure::DEFAULT_CONCEPTUAL_NAME)]
        domain_name: String,
        /// Reproduction record (JSON file) to append.
        #[arg(long, value_name = "REC")]
        add_repro: Vec<PathBuf>,
        /// Dissemination record (JSON file) to append.
        #[arg(long, value_name = "REC")]
        add_dissemination: Vec<PathBuf>,
        /// Resource permission (JSON file) to record.
        #[arg(long, value_name = "PERM")]
        annotate_permission: Vec<PathBuf>,
        /// Where to write the transformed document (default: standard output).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Input {
    /// Document to read, or `-` for standard input.
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct LintArgs {
    /// Probe referenced URIs over the network.
    #[arg(long, conflicts_with = "offline")]
    online: bool,
    /// Never touch the network (the default).
    #[arg(long)]
    offline: bool,
    #[arg(long, env = "PRIMAD_BCO_TIMEOUT_MS", default_value_t = primad_bco::diagnostics::DEFAULT_TIMEOUT_MS)]
    timeout_ms: u64,
    /// Comma-separated rule codes to skip.
    #[arg(long, value_delimiter = ',')]
    disable: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_FILENAME_THRESHOLD)]
    filename_threshold: usize,
}

impl LintArgs {
    fn options(&self) -> LintOptions {
        LintOptions {
            offline: !self.online,
            timeout_ms: self.timeout_ms,
            filename_threshold: self.filename_threshold,
            disabled: self.disable.iter().map(|c| c.trim().to_string()).collect(),
        }
    }
}

/// Failure with its exit code.
struct Failure {
    code: i32,
    error: anyhow::Error,
}

fn fail(code: i32) -> impl FnOnce(anyhow::Error) -> Failure {
    move |error| Failure { code, error }
}

fn read_text(file: &Path) -> Result<String> {
    if file == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))
    }
}

fn load(file: &Path) -> Result<BcoDocument, Failure> {
    let text = read_text(file).map_err(fail(exit::UNPARSEABLE))?;
    parse_bco(&text)
        .with_context(|| format!("parsing {}", file.display()))
        .map_err(fail(exit::UNPARSEABLE))
}

fn load_record<T: DeserializeOwned>(file: &Path) -> Result<T, Failure> {
    let text = read_text(file).map_err(fail(exit::UNPARSEABLE))?;
    serde_json::from_str(&text)
        .with_context(|| format!("parsing record {}", file.display()))
        .map_err(fail(exit::UNPARSEABLE))
}

fn emit(out: &str) -> Result<(), Failure> {
    let mut stdout = io::stdout().lock();
    stdout
        .write_all(out.as_bytes())
        .and_then(|_| stdout.flush())
        .context("writing output")
        .map_err(fail(exit::UNPARSEABLE))
}

fn status_of(has_error: bool) -> i32 {
    if has_error {
        exit::ERRORS
    } else {
        exit::OK
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Analyze { input, lint } => {
            let text = read_text(&input.file).map_err(fail(exit::UNPARSEABLE))?;
            let report = analyze(&text, &lint.options());
            match input.format {
                Format::Json => emit(&render_json(&report))?,
                Format::Text => emit(&render_text(&report))?,
            }
            Ok(report.exit_code())
        }
        Command::Validate { input } => {
            let doc = load(&input.file)?;
            let findings = validate_structure(&doc);
            let etag = verify_etag(&doc);
            match input.format {
                Format::Json => emit(&render_json(&serde_json::json!({
                    "structure_findings": findings,
                    "etag": etag,
                })))?,
                Format::Text => {
                    let mut out: String = findings
                        .iter()
                        .map(|f| format!("{} {} {}: {}\n", f.code, f.severity, f.path, f.message))
                        .collect();
                    let status = match &etag {
                        EtagResult::Match => "match".to_string(),
                        EtagResult::Absent => "absent".to_string(),
                        EtagResult::Mismatch { computed, .. } => format!("mismatch (computed {computed})"),
                    };
                    out.push_str(&format!("etag: {status}\n"));
                    emit(&out)?;
                }
            }
            Ok(status_of(findings.iter().any(|f| f.severity == Severity::Error)))
        }
        Command::Map { file, table, format } => {
            if table {
                emit(&export_tsv())?;
                return Ok(exit::OK);
            }
            let Some(file) = file else {
                return Err(Failure {
                    code: exit::USAGE,
                    error: anyhow::anyhow!("a document is required unless --table is given"),
                });
            };
            let doc = load(&file)?;
            let profile = coverage_profile(&doc);
            let support = documentation_supported_labels(&profile);
            match format {
                Format::Json => emit(&render_json(&serde_json::json!({
                    "coverage_profile": profile,
                    "label_support": support,
                })))?,
                Format::Text => {
                    let mut out = String::new();
                    for d in &profile.direct {
                        out.push_str(&format!(
                            "{:<18} {:>3}/{:<3}\n",
                            d.dimension.as_str(),
                            d.populated_field_count,
                            d.mapped_field_count
                        ));
                    }
                    for m in &profile.non_direct {
                        out.push_str(&format!("{:<18} {:.3}\n", m.dimension.as_str(), m.value));
                    }
                    for s in &support {
                        let state = if s.supported { "supported" } else { "unsupported" };
                        out.push_str(&format!("{:<15} {state}\n", s.label.to_string()));
                    }
                    emit(&out)?;
                }
            }
            Ok(exit::OK)
        }
        Command::Classify { changed, nasem, format } => {
            if let Some(term) = nasem {
                let term: NasemTerm = term.parse().map_err(|e: String| fail(exit::USAGE)(anyhow::anyhow!(e)))?;
                let c = nasem_crosswalk(term);
                match format {
                    Format::Json => emit(&render_json(&c))?,
                    Format::Text => emit(&format!("{:?} -> {} ({})\n", c.term, c.label, c.gain))?,
                }
                return Ok(exit::OK);
            }
            let vector = parse_changed(changed.as_deref().unwrap_or_default())
                .map_err(|e| fail(exit::USAGE)(e.into()))?;
            let result = classify(&vector);
            match format {
                Format::Json => emit(&render_json(&result))?,
                Format::Text => {
                    let label = result.core_label.map_or("NoMatch".to_string(), |l| l.to_string());
                    let mut out = format!("label: {label}\n");
                    let join = |items: Vec<String>| if items.is_empty() { "-".to_string() } else { items.join(", ") };
                    out.push_str(&format!("aliases: {}\n", join(result.aliases.iter().map(|s| s.to_string()).collect())));
                    out.push_str(&format!("gains: {}\n", join(result.gains.iter().map(|s| s.to_string()).collect())));
                    out.push_str(&format!(
                        "orthogonal: {}\n",
                        join(result.orthogonal_labels.iter().map(|l| l.to_string()).collect())
                    ));
                    for s in &result.unmatched_explanation {
                        let edits: Vec<String> = s
                            .edits
                            .iter()
                            .map(|e| format!("{} -> {:?}", e.dimension.snake_name(), e.to))
                            .collect();
                        out.push_str(&format!("  {}: {}\n", s.label, edits.join(", ")));
                    }
                    emit(&out)?;
                }
            }
            Ok(exit::OK)
        }
        Command::Lint { input, lint } => {
            let doc = load(&input.file)?;
            let diags = run_lints(&doc, &lint.options());
            match input.format {
                Format::Json => emit(&render_json(&diags))?,
                Format::Text => emit(&diags.iter().map(|d| d.to_line() + "\n").collect::<String>())?,
            }
            Ok(status_of(diags.iter().any(|d| d.severity == Severity::Error)))
        }
        Command::Aspects { input } => {
            let doc = load(&input.file)?;
            let matrix = aspect_checklist(&doc);
            match input.format {
                Format::Json => emit(&render_json(&matrix))?,
                Format::Text => emit(&render_aspects(&matrix))?,
            }
            Ok(exit::OK)
        }
        Command::Inventory { input } => {
            let doc = load(&input.file)?;
            let inv = data_inventory(&doc);
            match input.format {
                Format::Json => emit(&render_json(&inv))?,
                Format::Text => emit(&format!(
                    "io_inputs {}\nio_outputs {}\ndescription_inputs_per_step {:?}\ndescription_outputs_per_step {:?}\nparameters_per_step {:?}\nerror_entries {}\n",
                    inv.io_inputs,
                    inv.io_outputs,
                    inv.description_inputs_per_step,
                    inv.description_outputs_per_step,
                    inv.parameters_per_step,
                    inv.error_entries
                ))?,
            }
            Ok(exit::OK)
        }
        Command::Reconfigure {
            file,
            emit_conceptual,
            domain_name,
            add_repro,
            add_dissemination: disseminations,
            annotate_permission,
            output,
        } => {
            let mut doc = load(&file)?;
            let mut notices: Vec<Notice> = Vec::new();
            let transform_err = |e: primad_bco::reconfigure::TransformError| fail(exit::ERRORS)(e.into());
            let mut absorb = |t: Transformed, doc: &mut BcoDocument| {
                *doc = t.document;
                notices.extend(t.notices);
            };
            for f in &add_repro {
                let rec = load_record(f)?;
                absorb(add_reproduction_record(&doc, &rec).map_err(transform_err)?, &mut doc);
            }
            for f in &disseminations {
                let rec = load_record(f)?;
                absorb(add_dissemination(&doc, &rec).map_err(transform_err)?, &mut doc);
            }
            for f in &annotate_permission {
                let perm = load_record(f)?;
                absorb(annotate_resource_permission(&doc, &perm).map_err(transform_err)?, &mut doc);
            }
            if let Some(out) = &emit_conceptual {
                let preview = to_conceptual(&doc, Some(&domain_name)).map_err(transform_err)?;
                notices.extend(preview.warnings.iter().cloned());
                fs::write(out, render_json(&preview))
                    .with_context(|| format!("writing {}", out.display()))
                    .map_err(fail(exit::UNPARSEABLE))?;
            }
            for n in &notices {
                eprintln!("{}: {}", n.severity, n.message);
            }
            let transformed = add_repro.len() + disseminations.len() + annotate_permission.len() > 0;
            if transformed || emit_conceptual.is_none() {
                let text = to_json_pretty(&doc) + "\n";
                match &output {
                    Some(path) => fs::write(path, text)
                        .with_context(|| format!("writing {}", path.display()))
                        .map_err(fail(exit::UNPARSEABLE))?,
                    None => emit(&text)?,
                }
            }
            let errors = validate_structure(&doc).iter().any(|f| f.severity == Severity::Error);
            Ok(status_of(errors))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(exit::USAGE as u8),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code as u8)
        }
    }
}
