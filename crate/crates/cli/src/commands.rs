//! Command-line arguments and dispatch.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mfkit::bilinear::{check_commutation, structure_search, StructureKind};
use mfkit::deform::{tangent_dims, tangent_dims_structured, DeformationReport};
use mfkit::homotopy::{ext, ext_adjoint_split, ExtOptions};
use mfkit::knorrer::{theta, theta_squared, theta_with_structure, versal_family, KnorrerOutput, VersalMode};
use mfkit::{Budget, MatrixFactorization, VerificationReport};

use crate::document::Document;
use crate::error::CliError;
use crate::examples::EXAMPLES;

#[derive(Parser, Debug)]
#[command(name = "mfkit", version, about = "Exact computations with matrix factorizations")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Largest truncation degree for Ext computations.
    #[arg(long, global = true, default_value_t = 12)]
    pub max_degree: u32,
    /// Number of consecutive degrees with equal dimensions needed to stop.
    #[arg(long, global = true, default_value_t = 2)]
    pub window: u32,
    /// Step cap for Gröbner and linear solves (default: MFKIT_BUDGET, else unlimited).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DualKind {
    /// `(−ᵗψ, −ᵗφ)`
    Star,
    /// `(ᵗψ, ᵗφ)`
    Transpose,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Untwisted,
    Twisted,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the factorization axioms.
    Verify {
        file: PathBuf,
        /// Factorization to check (all of them when omitted).
        #[arg(long)]
        name: Option<String>,
    },
    /// Emit the shift `(−ψ, −φ)`.
    Shift {
        file: PathBuf,
        #[arg(long)]
        name: String,
    },
    /// Emit a dual factorization.
    Dual {
        file: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long, value_enum, default_value = "star")]
        kind: DualKind,
    },
    /// Emit the tensor product of two factorizations.
    Tensor {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Emit the direct sum of two factorizations of one potential.
    DirectSum {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Check a bilinear structure.
    StructureVerify {
        file: PathBuf,
        #[arg(long)]
        name: String,
    },
    /// Solve for structures with entries up to a given degree.
    StructureSearch {
        file: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Largest entry degree of the unknown blocks.
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Check how the differential commutes with the adjoint.
    CommutationCheck {
        file: PathBuf,
        #[arg(long)]
        structure: String,
        #[arg(long)]
        morphism: String,
        /// Structure on the target (defaults to `--structure`).
        #[arg(long)]
        target_structure: Option<String>,
    },
    /// Dimensions of Ext⁰ and Ext¹.
    Ext {
        file: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Selfadjoint and anti-selfadjoint parts of Ext.
    ExtSplit {
        file: PathBuf,
        #[arg(long)]
        structure: String,
    },
    /// Emit the Knörrer image with two fresh variables.
    Knorrer {
        file: PathBuf,
        #[arg(long, required_unless_present = "structure")]
        name: Option<String>,
        #[arg(long, num_args = 2, default_values = ["x", "y"])]
        new_vars: Vec<String>,
        /// Transport this structure as well.
        #[arg(long)]
        structure: Option<String>,
    },
    /// Emit the Knörrer image applied twice, as a factorization of xy + uv − π.
    KnorrerSquared {
        file: PathBuf,
        #[arg(long, required_unless_present = "structure")]
        name: Option<String>,
        #[arg(long, num_args = 4, default_values = ["x", "y", "u", "v"])]
        new_vars: Vec<String>,
        #[arg(long)]
        structure: Option<String>,
    },
    /// The versal family of the node at rank 2r, with its certificate.
    Versal {
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value = "plain")]
        mode: String,
    },
    /// Tangent and obstruction dimensions of deformations.
    Deform {
        file: PathBuf,
        #[arg(long)]
        name: String,
    },
    /// Deformation dimensions for deformations preserving a structure.
    DeformStructured {
        file: PathBuf,
        #[arg(long)]
        structure: String,
    },
    /// List the bundled example documents, or print one.
    Examples {
        #[arg(long)]
        name: Option<String>,
    },
}

/// Everything a run produces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

struct Emitter {
    format: Format,
    out: String,
    code: i32,
}

impl Emitter {
    fn emit<R: Serialize>(&mut self, text: &str, record: &R) {
        match self.format {
            Format::Text => {
                self.out.push_str(text);
                if !text.ends_with('\n') {
                    self.out.push('\n');
                }
            }
            Format::Records => {
                self.out.push_str(&serde_json::to_string(record).expect("records serialize"));
                self.out.push('\n');
            }
        }
    }

    fn fail(&mut self, code: i32) {
        self.code = self.code.max(code);
    }
}

#[derive(Serialize)]
struct ViolationRecord {
    check: String,
    row: usize,
    col: usize,
    value: String,
}

fn violations(r: &VerificationReport) -> Vec<ViolationRecord> {
    r.violations
        .iter()
        .map(|v| ViolationRecord {
            check: v.check.clone(),
            row: v.row,
            col: v.col,
            value: v.value.clone(),
        })
        .collect()
}

fn violation_text(r: &VerificationReport) -> String {
    r.violations.iter().map(|v| format!("  {v}\n")).collect()
}

#[derive(Serialize)]
struct VerifyRecord<'a> {
    command: &'a str,
    name: &'a str,
    valid: bool,
    violations: Vec<ViolationRecord>,
}

#[derive(Serialize)]
struct StructureVerifyRecord<'a> {
    command: &'a str,
    name: &'a str,
    host: &'a str,
    kind: String,
    sign: String,
    valid: bool,
    violations: Vec<ViolationRecord>,
}

#[derive(Serialize)]
struct DocumentRecord<'a> {
    command: &'a str,
    inputs: Vec<&'a str>,
    name: &'a str,
    valid: bool,
    provenance: Option<String>,
    document: String,
}

#[derive(Serialize)]
struct SolutionRecord {
    sign: String,
    dim: usize,
    constant_dim: usize,
    invertible: bool,
    witness_b0: Option<String>,
    witness_b1: Option<String>,
}

#[derive(Serialize)]
struct SearchRecord<'a> {
    command: &'a str,
    name: &'a str,
    kind: String,
    degree: u32,
    adjoint_dim: usize,
    solutions: Vec<SolutionRecord>,
}

#[derive(Serialize)]
struct CommutationRecord<'a> {
    command: &'a str,
    structure: &'a str,
    morphism: &'a str,
    parity: String,
    sign: i64,
    holds: bool,
}

#[derive(Serialize)]
struct StepRecord {
    degree: u32,
    dims: [usize; 2],
}

#[derive(Serialize)]
struct ExtRecord<'a> {
    command: &'a str,
    source: &'a str,
    target: &'a str,
    dims: [usize; 2],
    stabilized: bool,
    truncation_degree: u32,
    history: Vec<StepRecord>,
}

#[derive(Serialize)]
struct SplitRecord<'a> {
    command: &'a str,
    structure: &'a str,
    dims: [usize; 2],
    ext0_plus_minus: [usize; 2],
    ext1_plus_minus: [usize; 2],
    stabilized: bool,
    truncation_degree: u32,
}

#[derive(Serialize)]
struct EntryRecord {
    product: &'static str,
    row: usize,
    col: usize,
    reduced: String,
}

#[derive(Serialize)]
struct VersalRecord {
    command: &'static str,
    rank: usize,
    mode: String,
    base_vars: Vec<String>,
    relations: Vec<String>,
    base_tangent_dim: usize,
    certified: bool,
    entries: Vec<EntryRecord>,
}

#[derive(Serialize)]
struct StructuredRecord {
    kind: String,
    ext0_plus_minus: [usize; 2],
    ext1_plus_minus: [usize; 2],
    ext1_signed_dim: usize,
    ext0_signed_dim: usize,
    tangent_dim: usize,
    obstruction_dim: usize,
}

#[derive(Serialize)]
struct DeformRecord<'a> {
    command: &'a str,
    name: &'a str,
    ext0_dim: usize,
    ext1_dim: usize,
    ideal_dim: usize,
    tangent_dim: usize,
    obstruction_dim: usize,
    tjurina_dim: usize,
    stabilized: bool,
    truncation_degree: u32,
    structured: Option<StructuredRecord>,
}

#[derive(Serialize)]
struct ExampleRecord<'a> {
    command: &'a str,
    name: &'a str,
    description: &'a str,
    document: Option<&'a str>,
}

fn load(path: &PathBuf) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| match e {
        CliError::Parse { .. } | CliError::UndefinedAt { .. } | CliError::Duplicate { .. } => {
            CliError::Usage(format!("{}: {e}", path.display()))
        }
        other => other,
    })
}

fn budget_from(flag: Option<u64>, env: Option<&str>) -> Result<Budget, CliError> {
    match (flag, env) {
        (Some(n), _) => Ok(Budget::new(n)),
        (None, Some(s)) if !s.trim().is_empty() => s
            .trim()
            .parse()
            .map(Budget::new)
            .map_err(|_| CliError::Usage(format!("MFKIT_BUDGET must be a non-negative integer, got `{s}`"))),
        _ => Ok(Budget::unlimited()),
    }
}

/// Parses arguments and runs one command. `env_budget` is the value of
/// `MFKIT_BUDGET`, used when `--budget` is absent.
pub fn run<I, T>(args: I, env_budget: Option<&str>) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output {
                    stdout: text,
                    ..Output::default()
                }
            } else {
                Output {
                    stderr: text,
                    code,
                    ..Output::default()
                }
            };
        }
    };
    let mut em = Emitter {
        format: cli.format,
        out: String::new(),
        code: 0,
    };
    match execute(&cli, env_budget, &mut em) {
        Ok(()) => Output {
            stdout: em.out,
            stderr: String::new(),
            code: em.code,
        },
        Err(e) => Output {
            stdout: em.out,
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

fn options(cli: &Cli) -> ExtOptions {
    ExtOptions {
        max_degree: cli.max_degree,
        window: cli.window,
        ..ExtOptions::default()
    }
}

fn emit_document(
    em: &mut Emitter,
    command: &str,
    inputs: Vec<&str>,
    name: &str,
    doc: &Document,
    provenance: Option<String>,
) {
    let valid = doc.mfs.iter().all(|m| m.mf.is_valid()) && doc.structures.iter().all(|s| s.structure.is_valid());
    if !valid {
        em.fail(1);
    }
    let text = doc.to_string();
    let mut shown = String::new();
    if let Some(p) = &provenance {
        shown.push_str(&format!("# {p}\n"));
    }
    shown.push_str(&text);
    em.emit(
        &shown,
        &DocumentRecord {
            command,
            inputs,
            name,
            valid,
            provenance,
            document: text,
        },
    );
}

fn single(doc: &Document, name: &str, m: MatrixFactorization) -> Document {
    let mut out = Document::new(m.vars().clone());
    out.potentials = doc.potentials.iter().filter(|p| &p.poly == m.potential()).cloned().collect();
    out.potentials.truncate(1);
    out.push_mf(name, "w", m);
    out
}

fn knorrer_document(doc: &Document, name: &str, out: &KnorrerOutput, structure_name: Option<&str>) -> Document {
    let mut d = single(doc, name, out.result.clone());
    if let (Some(s), Some(sn)) = (&out.structure, structure_name) {
        let host = Arc::new(out.result.clone());
        let s = s.rehost(host).expect("same host");
        d.push_structure(sn, name, s);
    }
    d
}

fn deform_record<'a>(command: &'a str, name: &'a str, r: &DeformationReport) -> (String, DeformRecord<'a>) {
    let mut text = format!(
        "{name}: Ext0 {} Ext1 {} ideal {} tangent {} obstruction {} (Tjurina {}, degree {}, stabilized {})\n",
        r.ext0_dim, r.ext1_dim, r.ideal_dim, r.tangent_dim, r.obstruction_dim, r.tjurina_dim, r.truncation_degree, r.stabilized
    );
    let structured = r.structured.as_ref().map(|s| {
        text.push_str(&format!(
            "structured ({}): Ext0 +{} -{} Ext1 +{} -{}; tangent {} obstruction {}\n",
            s.kind, s.ext0_split.0, s.ext0_split.1, s.ext1_split.0, s.ext1_split.1, s.tangent_dim, s.obstruction_dim
        ));
        StructuredRecord {
            kind: s.kind.to_string(),
            ext0_plus_minus: [s.ext0_split.0, s.ext0_split.1],
            ext1_plus_minus: [s.ext1_split.0, s.ext1_split.1],
            ext1_signed_dim: s.ext1_signed_dim,
            ext0_signed_dim: s.ext0_signed_dim,
            tangent_dim: s.tangent_dim,
            obstruction_dim: s.obstruction_dim,
        }
    });
    (
        text,
        DeformRecord {
            command,
            name,
            ext0_dim: r.ext0_dim,
            ext1_dim: r.ext1_dim,
            ideal_dim: r.ideal_dim,
            tangent_dim: r.tangent_dim,
            obstruction_dim: r.obstruction_dim,
            tjurina_dim: r.tjurina_dim,
            stabilized: r.stabilized,
            truncation_degree: r.truncation_degree,
            structured,
        },
    )
}

fn execute(cli: &Cli, env_budget: Option<&str>, em: &mut Emitter) -> Result<(), CliError> {
    let budget = budget_from(cli.budget, env_budget)?;
    match &cli.command {
        Command::Verify { file, name } => {
            let doc = load(file)?;
            let targets: Vec<_> = match name {
                Some(n) => vec![doc.mf(n)?],
                None => doc.mfs.iter().collect(),
            };
            if targets.is_empty() {
                return Err(CliError::Usage("document has no factorizations".into()));
            }
            for m in targets {
                let r = m.mf.verify();
                if !r.is_valid() {
                    em.fail(1);
                }
                let text = if r.is_valid() {
                    format!("{}: valid\n", m.name)
                } else {
                    format!("{}: invalid\n{}", m.name, violation_text(&r))
                };
                em.emit(
                    &text,
                    &VerifyRecord {
                        command: "verify",
                        name: &m.name,
                        valid: r.is_valid(),
                        violations: violations(&r),
                    },
                );
            }
        }
        Command::Shift { file, name } => {
            let doc = load(file)?;
            let m = doc.mf(name)?;
            let out_name = format!("{name}[1]");
            let d = single(&doc, &out_name, m.mf.shift());
            emit_document(em, "shift", vec![name], &out_name, &d, None);
        }
        Command::Dual { file, name, kind } => {
            let doc = load(file)?;
            let m = doc.mf(name)?;
            let (out_name, mf) = match kind {
                DualKind::Star => (format!("{name}*"), m.mf.dual()),
                DualKind::Transpose => (format!("{name}^T"), m.mf.transpose_dual()),
            };
            let d = single(&doc, &out_name, mf);
            emit_document(em, "dual", vec![name], &out_name, &d, None);
        }
        Command::Tensor { file, left, right } => {
            let doc = load(file)?;
            let mf = doc.mf(left)?.mf.tensor(&doc.mf(right)?.mf)?;
            let out_name = format!("{left}*{right}");
            let d = single(&doc, &out_name, mf);
            emit_document(em, "tensor", vec![left, right], &out_name, &d, None);
        }
        Command::DirectSum { file, left, right } => {
            let doc = load(file)?;
            let mf = doc.mf(left)?.mf.direct_sum(&doc.mf(right)?.mf)?;
            let out_name = format!("{left}+{right}");
            let d = single(&doc, &out_name, mf);
            emit_document(em, "direct-sum", vec![left, right], &out_name, &d, None);
        }
        Command::StructureVerify { file, name } => {
            let doc = load(file)?;
            let s = doc.structure(name)?;
            let r = s.structure.verify();
            if !r.is_valid() {
                em.fail(1);
            }
            let b = &s.structure;
            let text = if r.is_valid() {
                format!("{name} on {}: valid ({}, {})\n", s.host, b.kind(), b.sign())
            } else {
                format!("{name} on {}: invalid\n{}", s.host, violation_text(&r))
            };
            em.emit(
                &text,
                &StructureVerifyRecord {
                    command: "structure-verify",
                    name,
                    host: &s.host,
                    kind: b.kind().to_string(),
                    sign: b.sign().to_string(),
                    valid: r.is_valid(),
                    violations: violations(&r),
                },
            );
        }
        Command::StructureSearch {
            file,
            name,
            kind,
            degree,
        } => {
            let doc = load(file)?;
            let m = doc.mf(name)?;
            let kind = match kind {
                KindArg::Untwisted => StructureKind::Untwisted,
                KindArg::Twisted => StructureKind::Twisted,
            };
            let s = structure_search(&m.mf, kind, *degree)?;
            let mut text = format!("{name}: {kind} structures up to degree {degree}, adjoint space {}\n", s.adjoint_dim);
            let mut solutions = Vec::new();
            for sol in [&s.plus, &s.minus] {
                text.push_str(&format!(
                    "  sign {}: dim {}, constant parts {}, invertible {}\n",
                    sol.sign,
                    sol.basis.len(),
                    sol.constant_dim,
                    sol.invertible
                ));
                if let Some(w) = &sol.witness {
                    text.push_str(&format!("    b0 = {}\n    b1 = {}\n", w.b0(), w.b1()));
                }
                solutions.push(SolutionRecord {
                    sign: sol.sign.to_string(),
                    dim: sol.basis.len(),
                    constant_dim: sol.constant_dim,
                    invertible: sol.invertible,
                    witness_b0: sol.witness.as_ref().map(|w| w.b0().to_string()),
                    witness_b1: sol.witness.as_ref().map(|w| w.b1().to_string()),
                });
            }
            em.emit(
                &text,
                &SearchRecord {
                    command: "structure-search",
                    name,
                    kind: kind.to_string(),
                    degree: *degree,
                    adjoint_dim: s.adjoint_dim,
                    solutions,
                },
            );
        }
        Command::CommutationCheck {
            file,
            structure,
            morphism,
            target_structure,
        } => {
            let doc = load(file)?;
            let b = &doc.structure(structure)?.structure;
            let b2 = match target_structure {
                Some(t) => &doc.structure(t)?.structure,
                None => b,
            };
            let f = &doc.morphism(morphism)?.morphism;
            let r = check_commutation(f, b, b2)?;
            if !r.holds {
                em.fail(1);
            }
            em.emit(
                &format!(
                    "D({morphism})^adj = {} * D({morphism}^adj): {}\n",
                    r.sign,
                    if r.holds { "holds" } else { "fails" }
                ),
                &CommutationRecord {
                    command: "commutation-check",
                    structure,
                    morphism,
                    parity: f.parity().to_string(),
                    sign: r.sign,
                    holds: r.holds,
                },
            );
        }
        Command::Ext { file, source, target } => {
            let doc = load(file)?;
            let e = ext(&doc.mf(source)?.mf, &doc.mf(target)?.mf, &options(cli), &budget)?;
            if !e.stabilized {
                em.fail(3);
            }
            em.emit(
                &format!(
                    "Ext({source}, {target}) = ({}, {}) at degree {}, stabilized {}\nhistory: {}\n",
                    e.dims.0,
                    e.dims.1,
                    e.truncation_degree,
                    e.stabilized,
                    e.history_string()
                ),
                &ExtRecord {
                    command: "ext",
                    source,
                    target,
                    dims: [e.dims.0, e.dims.1],
                    stabilized: e.stabilized,
                    truncation_degree: e.truncation_degree,
                    history: e
                        .history
                        .iter()
                        .map(|s| StepRecord {
                            degree: s.degree,
                            dims: [s.dims.0, s.dims.1],
                        })
                        .collect(),
                },
            );
        }
        Command::ExtSplit { file, structure } => {
            let doc = load(file)?;
            let b = &doc.structure(structure)?.structure;
            let (e, s) = ext_adjoint_split(b, &options(cli), &budget)?;
            if !e.stabilized {
                em.fail(3);
            }
            em.emit(
                &format!(
                    "Ext = ({}, {}); Ext0 +{} -{}; Ext1 +{} -{} (degree {}, stabilized {})\n",
                    e.dims.0, e.dims.1, s.even.0, s.even.1, s.odd.0, s.odd.1, e.truncation_degree, e.stabilized
                ),
                &SplitRecord {
                    command: "ext-split",
                    structure,
                    dims: [e.dims.0, e.dims.1],
                    ext0_plus_minus: [s.even.0, s.even.1],
                    ext1_plus_minus: [s.odd.0, s.odd.1],
                    stabilized: e.stabilized,
                    truncation_degree: e.truncation_degree,
                },
            );
        }
        Command::Knorrer {
            file,
            name,
            new_vars,
            structure,
        } => {
            let doc = load(file)?;
            let (x, y) = (&new_vars[0], &new_vars[1]);
            let (input, out, sname) = match structure {
                Some(sn) => {
                    let s = doc.structure(sn)?;
                    (s.host.clone(), theta_with_structure(&s.structure, x, y)?, Some(format!("theta({sn})")))
                }
                None => {
                    let n = name.as_ref().expect("clap requires a name");
                    (n.clone(), theta(&doc.mf(n)?.mf, x, y)?, None)
                }
            };
            let out_name = format!("theta({input})");
            let d = knorrer_document(&doc, &out_name, &out, sname.as_deref());
            emit_document(em, "knorrer", vec![&input], &out_name, &d, Some(out.provenance.clone()));
        }
        Command::KnorrerSquared {
            file,
            name,
            new_vars,
            structure,
        } => {
            let doc = load(file)?;
            let names = [
                new_vars[0].as_str(),
                new_vars[1].as_str(),
                new_vars[2].as_str(),
                new_vars[3].as_str(),
            ];
            let (input, out, sname) = match structure {
                Some(sn) => {
                    let s = doc.structure(sn)?;
                    let out = theta_squared(s.structure.host(), Some(&s.structure), names)?;
                    (s.host.clone(), out, Some(format!("theta2({sn})")))
                }
                None => {
                    let n = name.as_ref().expect("clap requires a name");
                    (n.clone(), theta_squared(&doc.mf(n)?.mf, None, names)?, None)
                }
            };
            let out_name = format!("theta2({input})");
            let d = knorrer_document(&doc, &out_name, &out, sname.as_deref());
            emit_document(em, "knorrer-squared", vec![&input], &out_name, &d, Some(out.provenance.clone()));
        }
        Command::Versal { rank, mode } => {
            let mode: VersalMode = mode.parse().map_err(|e: mfkit::Error| CliError::Usage(e.to_string()))?;
            let fam = versal_family(*rank, mode, &budget)?;
            if !fam.certified() {
                em.fail(1);
            }
            let mut text = format!(
                "versal family rank {} ({}), base variables {}\nphi = {}\npsi = {}\nrelations: {}\nbase tangent dimension {}\ncertificate: {}\n",
                2 * fam.rank,
                fam.mode,
                fam.base_vars.join(" "),
                fam.phi,
                fam.psi,
                fam.relations.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", "),
                fam.base_tangent_dim,
                if fam.certified() { "all entries reduce to 0" } else { "FAILED" }
            );
            for c in fam.certificate.iter().filter(|c| !c.reduced.is_zero()) {
                text.push_str(&format!("  {} ({}, {}): {}\n", c.product, c.row, c.col, c.reduced));
            }
            em.emit(
                &text,
                &VersalRecord {
                    command: "versal",
                    rank: fam.rank,
                    mode: fam.mode.to_string(),
                    base_vars: fam.base_vars.clone(),
                    relations: fam.relations.iter().map(|r| r.to_string()).collect(),
                    base_tangent_dim: fam.base_tangent_dim,
                    certified: fam.certified(),
                    entries: fam
                        .certificate
                        .iter()
                        .map(|c| EntryRecord {
                            product: c.product,
                            row: c.row,
                            col: c.col,
                            reduced: c.reduced.to_string(),
                        })
                        .collect(),
                },
            );
        }
        Command::Deform { file, name } => {
            let doc = load(file)?;
            let r = tangent_dims(&doc.mf(name)?.mf, &options(cli), &budget)?;
            let (text, record) = deform_record("deform", name, &r);
            em.emit(&text, &record);
        }
        Command::DeformStructured { file, structure } => {
            let doc = load(file)?;
            let r = tangent_dims_structured(&doc.structure(structure)?.structure, &options(cli), &budget)?;
            let (text, record) = deform_record("deform-structured", structure, &r);
            em.emit(&text, &record);
        }
        Command::Examples { name } => match name {
            None => {
                for (n, desc, _) in EXAMPLES {
                    em.emit(
                        &format!("{n}: {desc}"),
                        &ExampleRecord {
                            command: "examples",
                            name: n,
                            description: desc,
                            document: None,
                        },
                    );
                }
            }
            Some(n) => {
                let (n, desc, text) = EXAMPLES
                    .iter()
                    .find(|(e, _, _)| e == n)
                    .ok_or_else(|| CliError::Usage(format!("no bundled example named `{n}`")))?;
                em.emit(
                    text,
                    &ExampleRecord {
                        command: "examples",
                        name: n,
                        description: desc,
                        document: Some(text),
                    },
                );
            }
        },
    }
    Ok(())
}
