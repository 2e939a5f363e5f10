//! The `ecoreq` command-line frontend.
//!
//! Exit codes: 0 no findings, 1 warnings or info only, 2 errors (or a failed
//! operation such as an import conflict or an unsatisfiable root), 3 usage,
//! input or configuration failure. No command modifies an input file unless
//! `--write` is given; written files go through a temporary file and an
//! atomic rename.

mod config;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::compare::{
    copy_elements, diff, import_package, render_changelog, search_replace, ChangelogFormat,
    ReplaceField, ReplaceOptions, ReplaceScope,
};
use crate::diagnostic::{DiagnosticReport, Severity};
use crate::instances::{
    parse_instance, serialize_instance, synthesize_minimal_instance, validate_instance,
};
use crate::layout::parse_layout;
use crate::metamodel::{filter_selection, BuiltinRegistry, ElementKind, FilterQuery};
use crate::rules::{catalog_json, parse_dictionary, run_rules, RuleInputs, RULES};
use crate::serialization::{
    element_ages, export_docs, export_json, export_svg, provenance_log_append, serialize_xmi,
};
use crate::{load_model_with, EcoreModel, LoadedModel};

pub use config::{CliConfig, OutputFormat, CONFIG_ENV};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_WARNINGS: i32 = 1;
pub const EXIT_ERRORS: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ecoreq", version, about = "Quality checks and tooling for Ecore metamodels")]
struct Cli {
    /// Configuration file; defaults to the file named by ECOREQ_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the quality rules on a model.
    Lint {
        model: PathBuf,
        /// Layout sidecar enabling the diagram rules.
        #[arg(long)]
        layout: Option<PathBuf>,
        /// Word list enabling the spelling rule.
        #[arg(long)]
        dict: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Print the changes from one model to another.
    Diff {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: ChangelogArg,
        /// Append provenance records for the changes to this log.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Record time in unix seconds; defaults to now.
        #[arg(long)]
        time: Option<i64>,
    },
    /// Replace text in element names and other fields.
    Replace {
        model: PathBuf,
        pattern: String,
        replacement: String,
        #[arg(long)]
        regex: bool,
        #[arg(long)]
        ignore_case: bool,
        /// Restrict to element kinds, e.g. EClass.
        #[arg(long = "kind")]
        kinds: Vec<String>,
        /// Fields to touch: name, instance-type, default, annotation.
        #[arg(long = "field")]
        fields: Vec<String>,
        /// List the changes only.
        #[arg(long)]
        dry_run: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Merge the packages of SOURCE into TARGET.
    Import {
        target: PathBuf,
        source: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Copy selected elements of SOURCE into TARGET.
    Copy {
        source: PathBuf,
        target: PathBuf,
        /// Element path in SOURCE, e.g. /lib/Book.
        #[arg(long = "select", required = true)]
        select: Vec<String>,
        /// Destination package or class path in TARGET; defaults to its root.
        #[arg(long)]
        into: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Validate or create dynamic instances.
    Instance {
        #[command(subcommand)]
        command: InstanceCommand,
    },
    /// Export a model as JSON, SVG, markdown documentation or canonical XMI.
    Export {
        #[arg(value_enum)]
        kind: ExportKind,
        model: PathBuf,
        /// Layout sidecar (required for svg).
        #[arg(long)]
        layout: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the paths selected by a query such as supertypes-of:/p/A.
    Filter {
        model: PathBuf,
        query: String,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Print element ages from a provenance log.
    Age {
        model: PathBuf,
        #[arg(long)]
        log: Option<PathBuf>,
        /// Reference time in unix seconds; defaults to now.
        #[arg(long)]
        now: Option<i64>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Print the rule catalog.
    Rules {
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
}

#[derive(Subcommand, Debug)]
enum InstanceCommand {
    /// Check an instance document against its metamodel.
    Validate {
        model: PathBuf,
        instance: PathBuf,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Print a minimal valid instance of a class.
    New {
        model: PathBuf,
        /// Class name or element path.
        #[arg(long)]
        root: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Overwrite the input model.
    #[arg(long, conflicts_with = "output")]
    write: bool,
    /// Write the result here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChangelogArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExportKind {
    Json,
    Svg,
    Docs,
    Xmi,
}

/// A failure that ends the command with an exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_ERRORS,
        message: message.into(),
    }
}

type Outcome = Result<i32, Failure>;

struct Ctx<'a> {
    config: CliConfig,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn print(&mut self, text: &str) -> Result<(), Failure> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("cannot write output: {e}")))
    }

    fn note(&mut self, text: &str) {
        let _ = writeln!(self.err, "{text}");
    }

    fn builtins(&self) -> Result<BuiltinRegistry, Failure> {
        let mut b = BuiltinRegistry::standard();
        if let Some(p) = &self.config.instance_types {
            let text = read(p)?;
            b.extend_instance_types(
                text.lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with('#')),
            );
        }
        Ok(b)
    }

    fn load(&self, path: &Path) -> Result<LoadedModel, Failure> {
        let text = read(path)?;
        load_model_with(&text, &path.display().to_string(), self.builtins()?)
            .map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    fn format(&self, flag: Option<OutputFormat>) -> OutputFormat {
        flag.or(self.config.format).unwrap_or_default()
    }

    /// Sends a result model to `--output`, back to `input` with `--write`, or
    /// to standard output.
    fn emit_model(&mut self, model: &EcoreModel, input: &Path, output: &OutputArgs) -> Result<(), Failure> {
        let text = serialize_xmi(model);
        if output.write {
            write_atomic(input, &text)
        } else if let Some(p) = &output.output {
            write_atomic(p, &text)
        } else {
            self.print(&text)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the destination directory, then renames
/// it over `path`.
fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| failed(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(text.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

fn now() -> i64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs() as i64)
}

fn exit_code(report: &DiagnosticReport) -> i32 {
    if report.has_errors() {
        EXIT_ERRORS
    } else if report.is_empty() {
        EXIT_CLEAN
    } else {
        EXIT_WARNINGS
    }
}

/// `file:line:col RULE message` per finding (`file RULE message` without a
/// location), then a tally line.
pub fn render_human(report: &DiagnosticReport, file: &str) -> String {
    let mut s = String::new();
    for d in &report.diagnostics {
        match d.location {
            Some((l, c)) => s.push_str(&format!("{file}:{l}:{c} {} {}\n", d.rule_id, d.message)),
            None => s.push_str(&format!("{file} {} {}\n", d.rule_id, d.message)),
        }
    }
    s.push_str(&format!(
        "{} finding(s): {} error(s), {} warning(s), {} info\n",
        report.summary.total,
        report.count(Severity::Error),
        report.count(Severity::Warning),
        report.count(Severity::Info)
    ));
    s
}

fn report(ctx: &mut Ctx<'_>, report: &DiagnosticReport, file: &str, format: OutputFormat) -> Outcome {
    let text = match format {
        OutputFormat::Human => render_human(report, file),
        OutputFormat::Json => report.to_json(),
    };
    ctx.print(&text)?;
    Ok(exit_code(report))
}

fn lint(ctx: &mut Ctx<'_>, model: &Path, layout: Option<&Path>, dict: Option<PathBuf>, format: OutputFormat) -> Outcome {
    let loaded = ctx.load(model)?;
    let layout = match layout {
        Some(p) => Some(parse_layout(&read(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let dictionary = match dict.or_else(|| ctx.config.dictionary.clone()) {
        Some(p) => Some(parse_dictionary(&read(&p)?)),
        None => None,
    };
    let mut inputs = RuleInputs::new(&loaded.builtins).with_source_map(&loaded.source_map);
    if let Some(l) = &layout {
        inputs = inputs.with_layout(l);
    }
    if let Some(d) = &dictionary {
        inputs = inputs.with_dictionary(d);
    }
    let found = run_rules(&loaded.model, &inputs, &ctx.config.rules).map_err(|e| usage(e.to_string()))?;
    report(ctx, &found, &model.display().to_string(), format)
}

fn find_class(model: &EcoreModel, root: &str) -> Option<crate::ElementPath> {
    if root.starts_with('/') {
        return model.path_from_str(root).filter(|p| model.class(p).is_some());
    }
    model.classes().find(|(p, _)| p.name() == root).map(|(p, _)| p.clone())
}

fn dispatch(ctx: &mut Ctx<'_>, command: Command) -> Outcome {
    match command {
        Command::Lint { model, layout, dict, format } => {
            let format = ctx.format(format);
            lint(ctx, &model, layout.as_deref(), dict, format)
        }
        Command::Diff { a, b, format, log, time } => {
            let (ma, mb) = (ctx.load(&a)?, ctx.load(&b)?);
            let delta = diff(&ma.model, &mb.model);
            let format = match format {
                ChangelogArg::Text => ChangelogFormat::Text,
                ChangelogArg::Json => ChangelogFormat::Json,
            };
            ctx.print(&render_changelog(&delta, format))?;
            if let Some(log) = log.or_else(|| ctx.config.provenance_log.clone()) {
                let n = provenance_log_append(&log, &delta, time.unwrap_or_else(now))
                    .map_err(|e| failed(format!("{}: {e}", log.display())))?;
                ctx.note(&format!("appended {n} record(s) to {}", log.display()));
            }
            Ok(EXIT_CLEAN)
        }
        Command::Replace {
            model,
            pattern,
            replacement,
            regex,
            ignore_case,
            kinds,
            fields,
            dry_run,
            output,
        } => {
            let loaded = ctx.load(&model)?;
            let mut scope = ReplaceScope::default();
            for k in &kinds {
                scope.kinds.insert(
                    ElementKind::from_metaclass(k).ok_or_else(|| usage(format!("unknown element kind `{k}`")))?,
                );
            }
            if !fields.is_empty() {
                scope.fields = fields
                    .iter()
                    .map(|f| f.parse::<ReplaceField>())
                    .collect::<Result<_, _>>()
                    .map_err(usage)?;
            }
            let options = ReplaceOptions {
                case_sensitive: !ignore_case,
                regex,
                dry_run,
            };
            let (result, changes) = search_replace(&loaded.model, &pattern, &replacement, &scope, &options)
                .map_err(|e| usage(e.to_string()))?;
            let mut listing = String::new();
            for r in &changes.renames {
                listing.push_str(&format!("{} {}: {:?} -> {:?}\n", r.path, r.field, r.old, r.new));
            }
            listing.push_str(&format!("{} change(s)\n", changes.renames.len()));
            if dry_run {
                ctx.print(&listing)?;
                return Ok(EXIT_CLEAN);
            }
            if output.write || output.output.is_some() {
                ctx.print(&listing)?;
            } else {
                let _ = ctx.err.write_all(listing.as_bytes());
            }
            ctx.emit_model(&result, &model, &output)?;
            Ok(EXIT_CLEAN)
        }
        Command::Import { target, source, output } => {
            let (t, s) = (ctx.load(&target)?, ctx.load(&source)?);
            let merged = import_package(&t.model, &s.model).map_err(|e| failed(e.to_string()))?;
            ctx.emit_model(&merged, &target, &output)?;
            Ok(EXIT_CLEAN)
        }
        Command::Copy { source, target, select, into, output } => {
            let (s, t) = (ctx.load(&source)?, ctx.load(&target)?);
            let mut selection = BTreeSet::new();
            for text in &select {
                selection.insert(
                    s.model
                        .path_from_str(text)
                        .ok_or_else(|| usage(format!("no element `{text}` in {}", source.display())))?,
                );
            }
            let into = match into {
                Some(text) => Some(
                    t.model
                        .path_from_str(&text)
                        .ok_or_else(|| usage(format!("no element `{text}` in {}", target.display())))?,
                ),
                None => None,
            };
            let result = copy_elements(&s.model, &selection, &t.model, into.as_ref())
                .map_err(|e| failed(e.to_string()))?;
            ctx.emit_model(&result, &target, &output)?;
            Ok(EXIT_CLEAN)
        }
        Command::Instance { command } => match command {
            InstanceCommand::Validate { model, instance, format } => {
                let loaded = ctx.load(&model)?;
                let text = read(&instance)?;
                let obj = parse_instance(&text, &loaded.model)
                    .map_err(|e| usage(format!("{}: {e}", instance.display())))?;
                let found = DiagnosticReport::from_diagnostics(validate_instance(&obj, &loaded.model));
                let format = ctx.format(format);
                report(ctx, &found, &instance.display().to_string(), format)
            }
            InstanceCommand::New { model, root, output } => {
                let loaded = ctx.load(&model)?;
                let class = find_class(&loaded.model, &root)
                    .ok_or_else(|| usage(format!("no class `{root}` in {}", model.display())))?;
                let obj = synthesize_minimal_instance(&loaded.model, &class)
                    .map_err(|e| failed(format!("unsatisfiable: {e}")))?;
                let text = serialize_instance(&obj, &loaded.model);
                match output {
                    Some(p) => write_atomic(&p, &text)?,
                    None => ctx.print(&text)?,
                }
                Ok(EXIT_CLEAN)
            }
        },
        Command::Export { kind, model, layout, output } => {
            let loaded = ctx.load(&model)?;
            let text = match kind {
                ExportKind::Json => export_json(&loaded.model),
                ExportKind::Docs => export_docs(&loaded.model),
                ExportKind::Xmi => serialize_xmi(&loaded.model),
                ExportKind::Svg => {
                    let p = layout.ok_or_else(|| usage("export svg needs --layout"))?;
                    let l = parse_layout(&read(&p)?).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                    export_svg(&loaded.model, &l)
                }
            };
            match output {
                Some(p) => write_atomic(&p, &text)?,
                None => ctx.print(&text)?,
            }
            Ok(EXIT_CLEAN)
        }
        Command::Filter { model, query, format } => {
            let loaded = ctx.load(&model)?;
            let query: FilterQuery = query.parse().map_err(|e: crate::metamodel::FilterError| usage(e.to_string()))?;
            let selected = filter_selection(&loaded.model, &query).map_err(|e| usage(e.to_string()))?;
            // document order rather than path order
            let ordered: Vec<String> = loaded
                .model
                .paths()
                .filter(|p| selected.contains(p))
                .map(|p| p.to_string())
                .collect();
            let text = match ctx.format(format) {
                OutputFormat::Human => ordered.iter().map(|p| format!("{p}\n")).collect(),
                OutputFormat::Json => serde_json::to_string_pretty(&ordered).expect("strings serialize") + "\n",
            };
            ctx.print(&text)?;
            Ok(EXIT_CLEAN)
        }
        Command::Age { model, log, now: at, format } => {
            let loaded = ctx.load(&model)?;
            let log = log
                .or_else(|| ctx.config.provenance_log.clone())
                .ok_or_else(|| usage("age needs --log or provenance_log in the configuration"))?;
            let ages = element_ages(&log, &loaded.model, at.unwrap_or_else(now))
                .map_err(|e| usage(format!("{}: {e}", log.display())))?;
            for w in &ages.warnings {
                ctx.note(&format!("{}: {w}", log.display()));
            }
            let text = match ctx.format(format) {
                OutputFormat::Human => loaded
                    .model
                    .paths()
                    .map(|p| {
                        let a = ages.ages.get(p).copied().unwrap_or_default();
                        let age = a.age.map_or("unknown".to_string(), |v| format!("{v}s"));
                        match a.last_modified {
                            Some(m) => format!("{p} age={age} last_modified={m}\n"),
                            None => format!("{p} age={age}\n"),
                        }
                    })
                    .collect(),
                OutputFormat::Json => {
                    let map: serde_json::Map<String, serde_json::Value> = loaded
                        .model
                        .paths()
                        .map(|p| {
                            let a = ages.ages.get(p).copied().unwrap_or_default();
                            (p.to_string(), serde_json::to_value(a).expect("age serializes"))
                        })
                        .collect();
                    serde_json::to_string_pretty(&map).expect("ages serialize") + "\n"
                }
            };
            ctx.print(&text)?;
            Ok(EXIT_CLEAN)
        }
        Command::Rules { format } => {
            let text = match ctx.format(format) {
                OutputFormat::Json => catalog_json() + "\n",
                OutputFormat::Human => RULES
                    .iter()
                    .map(|r| {
                        format!(
                            "{} {:<9} {:<7} {}{}\n",
                            r.id,
                            r.level.as_str(),
                            r.severity.as_str(),
                            r.description,
                            if r.default_enabled { "" } else { " (off by default)" }
                        )
                    })
                    .collect(),
            };
            ctx.print(&text)?;
            Ok(EXIT_CLEAN)
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_CLEAN
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let config = match CliConfig::resolve(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "ecoreq: configuration: {e}");
            return EXIT_USAGE;
        }
    };
    let mut ctx = Ctx { config, out, err };
    match dispatch(&mut ctx, cli.command) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(ctx.err, "ecoreq: {}", f.message);
            f.code
        }
    }
}
