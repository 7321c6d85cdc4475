//! The `stabind` command line.
//!
//! Every subcommand builds a [`Report`], which is printed either as text or,
//! with `--json`, as a single JSON document.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::closure::{classify_stability_unverified, combined_representation};
use crate::error::{Error, Result};
use crate::graph::{
    classify_external, extract_models_with, terminal_saturated, Dag, SeparationVerdict, SideSet,
};
use crate::io::{parse_dag, parse_relation};
use crate::limits::{guard, Limits};
use crate::pmap::{
    assess_with, find_pmap_with, verdict_from_conditions, ConditionEntry, ConditionId, Outcome,
    Status, Witness,
};
use crate::relation::Relation;
use crate::triplet::Triplet;
use crate::universe::Universe;
use crate::varset::VarSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    CheckFailed,
    Error,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::CheckFailed => 1,
            ExitStatus::Error => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "stabind",
    version,
    about = "Semi-graphoid closure, stable independence and d-separation"
)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Raise or lower the universe-size limit of every exhaustive algorithm.
    #[arg(long, global = true, value_name = "N")]
    max_vars: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the semi-graphoid closure of a relation.
    Closure { file: PathBuf },
    /// Print the dominant statements of the combined representation.
    Dominants { file: PathBuf },
    /// Print the closure with its stable statements marked.
    Stability { file: PathBuf },
    /// Check necessary conditions for a directed perfect map.
    Pmap {
        file: PathBuf,
        /// Also search every labeled DAG for a perfect map.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Classify a separation statement in a DAG as strong, weak or connected.
    Dsep {
        dag: PathBuf,
        #[command(flatten)]
        sides: Sides,
    },
    /// Print the graphical independence model of a DAG.
    Model {
        dag: PathBuf,
        /// Only the strongly separated statements.
        #[arg(long)]
        strong: bool,
    },
    /// For a strong separation, which side each remaining variable can join.
    Classify {
        dag: PathBuf,
        #[command(flatten)]
        sides: Sides,
    },
    /// Print the saturated statement of the first sink of a DAG.
    Extract { dag: PathBuf },
}

#[derive(Debug, Args)]
struct Sides {
    /// Comma-separated names.
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    /// Conditioning set, empty by default.
    #[arg(long, default_value = "")]
    z: String,
}

/// An independence statement with its sides spelled out by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statement {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
}

impl Statement {
    fn new(u: &Universe, x: VarSet, y: VarSet, z: VarSet) -> Self {
        Statement {
            x: u.set_names(x),
            y: u.set_names(y),
            z: u.set_names(z),
        }
    }

    fn of(u: &Universe, t: &Triplet) -> Self {
        Statement::new(u, t.x(), t.y(), t.z())
    }
}

impl std::fmt::Display for Statement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ; {} |", self.x.join(","), self.y.join(","))?;
        if !self.z.is_empty() {
            write!(f, " {}", self.z.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedStatement {
    #[serde(flatten)]
    pub statement: Statement,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessReport {
    Symmetry {
        x: Vec<String>,
        y: Vec<String>,
        z: Vec<String>,
    },
    Sets {
        x: Vec<String>,
        y: Vec<String>,
        w: Vec<String>,
        z: Vec<String>,
    },
    Transitivity {
        x: Vec<String>,
        y: Vec<String>,
        z: Vec<String>,
        gamma: String,
    },
    Chordality {
        alpha: String,
        beta: String,
        gamma: String,
        delta: String,
    },
    Unsaturated {
        statements: Vec<Statement>,
    },
}

impl WitnessReport {
    pub fn new(u: &Universe, w: &Witness) -> Self {
        let names = |s: &VarSet| u.set_names(*s);
        let name = |i: &usize| u.name(*i).to_string();
        match w {
            Witness::Symmetry { x, y, z } => WitnessReport::Symmetry {
                x: names(x),
                y: names(y),
                z: names(z),
            },
            Witness::Sets { x, y, w, z } => WitnessReport::Sets {
                x: names(x),
                y: names(y),
                w: names(w),
                z: names(z),
            },
            Witness::Transitivity { x, y, z, gamma } => WitnessReport::Transitivity {
                x: names(x),
                y: names(y),
                z: names(z),
                gamma: name(gamma),
            },
            Witness::Chordality {
                alpha,
                beta,
                gamma,
                delta,
            } => WitnessReport::Chordality {
                alpha: name(alpha),
                beta: name(beta),
                gamma: name(gamma),
                delta: name(delta),
            },
            Witness::Unsaturated(ts) => WitnessReport::Unsaturated {
                statements: ts.iter().map(|t| Statement::of(u, t)).collect(),
            },
        }
    }

    pub fn text(&self) -> String {
        let sets = |pairs: &[(&str, &Vec<String>)]| {
            pairs
                .iter()
                .map(|(k, v)| format!("{k}={{{}}}", v.join(",")))
                .collect::<Vec<_>>()
                .join(" ")
        };
        match self {
            WitnessReport::Symmetry { x, y, z } => sets(&[("x", x), ("y", y), ("z", z)]),
            WitnessReport::Sets { x, y, w, z } => sets(&[("x", x), ("y", y), ("w", w), ("z", z)]),
            WitnessReport::Transitivity { x, y, z, gamma } => {
                format!("{} gamma={gamma}", sets(&[("x", x), ("y", y), ("z", z)]))
            }
            WitnessReport::Chordality {
                alpha,
                beta,
                gamma,
                delta,
            } => {
                format!("alpha={alpha} beta={beta} gamma={gamma} delta={delta}")
            }
            WitnessReport::Unsaturated { statements } => statements
                .iter()
                .map(|s| format!("[{s}]"))
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionLine {
    pub id: ConditionId,
    pub status: Status,
    pub witness: Option<WitnessReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PMapOutcome {
    NotIsomorphic,
    Inconclusive,
    Isomorphic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub examined: usize,
    /// Arcs of the perfect map found, as (tail, head).
    pub witness: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalSide {
    pub variable: String,
    pub sides: SideSet,
}

/// Everything a subcommand prints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Closure {
        vars: Vec<String>,
        statements: Vec<Statement>,
    },
    Dominants {
        vars: Vec<String>,
        d_u: Vec<Statement>,
        d_s: Vec<Statement>,
    },
    Stability {
        vars: Vec<String>,
        statements: Vec<MarkedStatement>,
    },
    Pmap {
        vars: Vec<String>,
        conditions: Vec<ConditionLine>,
        search: Option<SearchReport>,
        outcome: PMapOutcome,
    },
    Dsep {
        statement: Statement,
        verdict: SeparationVerdict,
    },
    Model {
        vars: Vec<String>,
        strong: bool,
        statements: Vec<Statement>,
    },
    Classify {
        statement: Statement,
        strongly_separated: bool,
        external: Vec<ExternalSide>,
    },
    Extract {
        vars: Vec<String>,
        statement: Option<Statement>,
    },
}

impl Report {
    pub fn exit_status(&self) -> ExitStatus {
        match self {
            Report::Pmap {
                outcome: PMapOutcome::NotIsomorphic,
                ..
            } => ExitStatus::CheckFailed,
            Report::Classify {
                strongly_separated: false,
                ..
            } => ExitStatus::CheckFailed,
            _ => ExitStatus::Success,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{s}");
        };
        match self {
            Report::Closure { statements, .. } | Report::Model { statements, .. } => {
                statements.iter().for_each(|s| line(s));
            }
            Report::Dominants { d_u, d_s, .. } => {
                d_s.iter().for_each(|s| line(&format!("stable: {s}")));
                d_u.iter().for_each(|s| line(s));
            }
            Report::Stability { statements, .. } => {
                for s in statements {
                    if s.stable {
                        line(&format!("stable: {}", s.statement));
                    } else {
                        line(&s.statement);
                    }
                }
            }
            Report::Pmap {
                conditions,
                search,
                outcome,
                ..
            } => {
                for c in conditions {
                    match &c.witness {
                        Some(w) => line(&format!("{} {} {}", c.id, c.status.as_str(), w.text())),
                        None => line(&format!("{} {}", c.id, c.status.as_str())),
                    }
                }
                if let Some(search) = search {
                    line(&format!("search examined {} DAGs", search.examined));
                    if let Some(arcs) = &search.witness {
                        let arcs: Vec<String> =
                            arcs.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
                        line(&format!("perfect map: {}", arcs.join(", ")));
                    }
                }
                let outcome = match outcome {
                    PMapOutcome::NotIsomorphic => "not isomorphic",
                    PMapOutcome::Inconclusive => "inconclusive",
                    PMapOutcome::Isomorphic => "isomorphic",
                };
                line(&format!("verdict: {outcome}"));
            }
            Report::Dsep { verdict, .. } => line(verdict),
            Report::Classify {
                statement,
                strongly_separated,
                external,
            } => {
                if !strongly_separated {
                    line(&format!("not strongly separated: {statement}"));
                }
                for e in external {
                    line(&format!("{}: {}", e.variable, e.sides));
                }
            }
            Report::Extract { statement, .. } => {
                if let Some(s) = statement {
                    line(s);
                }
            }
        }
        out
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_relation(path: &Path) -> Result<Relation> {
    parse_relation(&read(path)?).map_err(|e| with_path(path, e))
}

fn load_dag(path: &Path) -> Result<Dag> {
    parse_dag(&read(path)?).map_err(|e| with_path(path, e))
}

fn with_path(path: &Path, e: Error) -> Error {
    Error::InFile {
        path: path.display().to_string(),
        source: Box::new(e),
    }
}

fn names_of(u: &Universe, list: &str) -> Result<VarSet> {
    let list = list.trim();
    if list.is_empty() {
        return Ok(VarSet::EMPTY);
    }
    list.split(',')
        .map(|name| u.index_of(name.trim()))
        .collect()
}

fn statements(r: &Relation) -> Vec<Statement> {
    r.triplets()
        .iter()
        .map(|t| Statement::of(r.universe(), t))
        .collect()
}

/// The closure of a relation's declared statements, stable ones marked.
fn closure_of(r: &Relation, limits: &Limits) -> Result<Relation> {
    guard("closure listing", r.universe().len(), limits.expansion)?;
    Ok(combined_representation(r).expand())
}

fn report(command: &Command, limits: &Limits) -> Result<Report> {
    Ok(match command {
        Command::Closure { file } => {
            let r = load_relation(file)?;
            Report::Closure {
                vars: r.universe().names().to_vec(),
                statements: statements(&closure_of(&r, limits)?),
            }
        }
        Command::Dominants { file } => {
            let r = load_relation(file)?;
            let u = r.universe();
            let rep = combined_representation(&r);
            Report::Dominants {
                vars: u.names().to_vec(),
                d_u: rep.d_u().iter().map(|t| Statement::of(u, t)).collect(),
                d_s: rep.d_s().iter().map(|t| Statement::of(u, t)).collect(),
            }
        }
        Command::Stability { file } => {
            let r = load_relation(file)?;
            let closed = closure_of(&r, limits)?;
            guard(
                "stability classification",
                r.universe().len(),
                limits.conditions,
            )?;
            let part = classify_stability_unverified(&closed);
            let rel = part.relation();
            Report::Stability {
                vars: r.universe().names().to_vec(),
                statements: rel
                    .triplets()
                    .iter()
                    .map(|t| MarkedStatement {
                        statement: Statement::of(rel.universe(), t),
                        stable: rel.is_stable(t) == Some(true),
                    })
                    .collect(),
            }
        }
        Command::Pmap { file, exhaustive } => {
            let r = load_relation(file)?;
            let u = r.universe().clone();
            let closed = closure_of(&r, limits)?;
            let verdict = if *exhaustive {
                find_pmap_with(&closed, limits)?
            } else {
                verdict_from_conditions(assess_with(&closed, limits)?)
            };
            let line = |e: &ConditionEntry| ConditionLine {
                id: e.id,
                status: e.status,
                witness: e.witness.as_ref().map(|w| WitnessReport::new(&u, w)),
            };
            let (outcome, witness) = match &verdict.outcome {
                Outcome::NotIsomorphic => (PMapOutcome::NotIsomorphic, None),
                Outcome::Inconclusive => (PMapOutcome::Inconclusive, None),
                Outcome::IsomorphicWithWitness(g) => (
                    PMapOutcome::Isomorphic,
                    Some(
                        g.arcs()
                            .iter()
                            .map(|&(a, b)| (u.name(a).to_string(), u.name(b).to_string()))
                            .collect(),
                    ),
                ),
            };
            Report::Pmap {
                vars: u.names().to_vec(),
                conditions: verdict.report.entries().iter().map(line).collect(),
                search: exhaustive.then_some(SearchReport {
                    examined: verdict.examined,
                    witness,
                }),
                outcome,
            }
        }
        Command::Dsep { dag, sides } => {
            let g = load_dag(dag)?;
            let u = g.universe();
            let (x, y, z) = (
                names_of(u, &sides.x)?,
                names_of(u, &sides.y)?,
                names_of(u, &sides.z)?,
            );
            Report::Dsep {
                verdict: g.separation(x, y, z)?,
                statement: Statement::new(u, x, y, z),
            }
        }
        Command::Model { dag, strong } => {
            let g = load_dag(dag)?;
            let (model, strong_model) = extract_models_with(&g, limits)?;
            Report::Model {
                vars: g.universe().names().to_vec(),
                strong: *strong,
                statements: statements(if *strong { &strong_model } else { &model }),
            }
        }
        Command::Classify { dag, sides } => {
            let g = load_dag(dag)?;
            let u = g.universe();
            let (x, y, z) = (
                names_of(u, &sides.x)?,
                names_of(u, &sides.y)?,
                names_of(u, &sides.z)?,
            );
            let t = Triplet::new_in(u, x, y, z)?;
            let statement = Statement::new(u, x, y, z);
            match classify_external(&g, &t) {
                Ok(sides) => {
                    // the library reports sides of the canonical orientation
                    let swapped = t.x() != x;
                    Report::Classify {
                        statement,
                        strongly_separated: true,
                        external: sides
                            .into_iter()
                            .map(|(gamma, s)| ExternalSide {
                                variable: u.name(gamma).to_string(),
                                sides: if swapped {
                                    SideSet {
                                        x_side: s.y_side,
                                        y_side: s.x_side,
                                    }
                                } else {
                                    s
                                },
                            })
                            .collect(),
                    }
                }
                Err(Error::NotStronglySeparated(_)) => Report::Classify {
                    statement,
                    strongly_separated: false,
                    external: Vec::new(),
                },
                Err(e) => return Err(e),
            }
        }
        Command::Extract { dag } => {
            let g = load_dag(dag)?;
            Report::Extract {
                vars: g.universe().names().to_vec(),
                statement: terminal_saturated(&g).map(|t| Statement::of(g.universe(), &t)),
            }
        }
    })
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = !e.use_stderr();
            let target: &mut dyn Write = if informational { out } else { err };
            let _ = write!(target, "{}", e.render());
            return if informational {
                ExitStatus::Success
            } else {
                ExitStatus::Error
            };
        }
    };
    let limits = cli.max_vars.map(Limits::uniform).unwrap_or_default();
    match report(&cli.command, &limits) {
        Ok(report) => {
            let text = if cli.json {
                report.to_json()
            } else {
                report.to_text()
            };
            if out.write_all(text.as_bytes()).is_err() {
                return ExitStatus::Error;
            }
            report.exit_status()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            ExitStatus::Error
        }
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock()).code()
}
