use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use discussive::harness::{crosscheck, noncontainment_check, GeneratorConfig, Pair};
use discussive::hilbert::{
    check_derivation, deduction_transform, list_system, Derivation, DerivationVerdict, SystemId,
};
use discussive::kripke::{default_bound, entails_discussive, routley_entails, StarMode};
use discussive::{entails_matrix, eval, lookup_matrix, parse, Formula, Language, MatrixId, Valuation};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "discussive", version, about = "Discussive and many-valued logic toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
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
    /// Parse a formula and print its canonical form.
    Parse {
        #[arg(long, default_value = "L")]
        lang: Language,
        formula: String,
    },
    /// Evaluate a formula in a matrix under an assignment.
    Eval {
        #[arg(long)]
        matrix: MatrixId,
        /// Comma-separated `var=value` pairs, e.g. `p=i,q=1`.
        #[arg(long, default_value = "")]
        assign: String,
        formula: String,
    },
    /// Decide a consequence claim and print the verdict.
    Entails(EntailsArgs),
    /// Like `entails`, but also print the countermodel when the claim fails.
    Countermodel(EntailsArgs),
    /// Verify a derivation file.
    Check { file: PathBuf },
    /// Discharge a premise of a valid derivation file.
    Deduce {
        file: PathBuf,
        #[arg(long)]
        discharge: String,
    },
    /// List the schemata of an axiom system.
    Axioms { system: SystemId },
    /// Compare two deciders on generated problems.
    Crosscheck {
        #[arg(long)]
        pair: Pair,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        vars: usize,
    },
    /// Confirm that D2P-3 and discussive consequence over Lr differ both ways.
    Noncontainment,
}

#[derive(clap::Args)]
struct EntailsArgs {
    /// `<matrix-id>`, `kripke[:k]` or `routley:<forall|base|exists>[:k]`.
    #[arg(long)]
    semantics: Semantics,
    /// Defaults to the matrix language, `L-FDE` for Routley semantics.
    #[arg(long)]
    lang: Option<Language>,
    #[arg(long = "premise")]
    premises: Vec<String>,
    conclusion: String,
}

#[derive(Clone, Copy, Debug)]
enum Semantics {
    Matrix(MatrixId),
    Kripke(Option<usize>),
    Routley(StarMode, usize),
}

impl std::str::FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bound = |k: &str| k.parse::<usize>().map_err(|_| format!("bad world bound `{k}`"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["kripke"] => Ok(Semantics::Kripke(None)),
            ["kripke", k] => Ok(Semantics::Kripke(Some(bound(k)?))),
            ["routley", mode] => Ok(Semantics::Routley(mode.parse().map_err(|e| format!("{e}"))?, 2)),
            ["routley", mode, k] => Ok(Semantics::Routley(mode.parse().map_err(|e| format!("{e}"))?, bound(k)?)),
            [id] => id.parse().map(Semantics::Matrix).map_err(|e| format!("{e}")),
            _ => Err(format!("unrecognised semantics `{s}`")),
        }
    }
}

impl Semantics {
    fn default_language(self) -> Language {
        match self {
            Semantics::Matrix(id) => lookup_matrix(id).language(),
            Semantics::Kripke(_) => Language::RightMinus,
            Semantics::Routley(..) => Language::Fde,
        }
    }
}

/// What a subcommand produced: text, the JSON form, and the exit code.
struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

fn exit(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            match cli.format {
                Format::Text => println!("{}", out.text),
                Format::Json => println!("{}", out.json),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error: {e:#}"),
                Format::Json => println!("{}", json!({ "error": format!("{e:#}") })),
            }
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Parse { lang, formula } => {
            let f = parse(&formula, lang)?;
            Ok(Outcome {
                text: f.to_string(),
                json: json!({
                    "language": lang,
                    "formula": f.to_string(),
                    "depth": f.depth(),
                    "vars": f.vars(),
                }),
                code: 0,
            })
        }
        Command::Eval {
            matrix,
            assign,
            formula,
        } => {
            let m = lookup_matrix(matrix);
            let f = parse(&formula, m.language())?;
            let v = Valuation::parse_assignments(&assign)?;
            let value = eval(&m, &v, &f)?;
            Ok(Outcome {
                text: value.to_string(),
                json: json!({
                    "matrix": matrix.name(),
                    "formula": f.to_string(),
                    "valuation": v,
                    "value": value,
                    "designated": m.is_designated(value),
                }),
                code: 0,
            })
        }
        Command::Entails(args) => decide(args, false),
        Command::Countermodel(args) => decide(args, true),
        Command::Check { file } => {
            let d = read_derivation(&file)?;
            let verdict = check_derivation(&d)?;
            let json = match &verdict {
                DerivationVerdict::Valid { conclusion } => json!({
                    "system": d.system.name(),
                    "verdict": "valid",
                    "conclusion": conclusion.to_string(),
                }),
                DerivationVerdict::Invalid { line, reason } => json!({
                    "system": d.system.name(),
                    "verdict": "invalid",
                    "line": line,
                    "reason": reason.to_string(),
                }),
            };
            Ok(Outcome {
                text: verdict.to_string(),
                json,
                code: exit(verdict.is_valid()),
            })
        }
        Command::Deduce { file, discharge } => {
            let d = read_derivation(&file)?;
            let a = parse(&discharge, d.system.language())?;
            let out = deduction_transform(&d, &a)?;
            let text = out.to_string();
            Ok(Outcome {
                json: json!({
                    "system": out.system.name(),
                    "conclusion": out.lines.last().map(|l| l.formula.to_string()),
                    "derivation": text,
                }),
                text,
                code: 0,
            })
        }
        Command::Axioms { system } => {
            let s = list_system(system);
            let text = s
                .schemata
                .iter()
                .map(|sc| format!("{}: {}", sc.name, sc.formula))
                .collect::<Vec<_>>()
                .join("\n");
            let schemata: Vec<Value> = s
                .schemata
                .iter()
                .map(|sc| json!({ "name": sc.name, "formula": sc.formula.to_string() }))
                .collect();
            Ok(Outcome {
                text,
                json: json!({ "system": system.name(), "language": s.language, "schemata": schemata }),
                code: 0,
            })
        }
        Command::Crosscheck {
            pair,
            samples,
            seed,
            depth,
            vars,
        } => {
            if vars == 0 {
                bail!("--vars must be at least 1");
            }
            let cfg = GeneratorConfig {
                language: pair.language(),
                max_depth: depth,
                variable_count: vars,
                seed,
            };
            let report = crosscheck(pair, &cfg, samples)?;
            Ok(Outcome {
                text: report.to_string(),
                json: serde_json::to_value(&report)?,
                code: exit(report.is_clean()),
            })
        }
        Command::Noncontainment => {
            let report = noncontainment_check();
            Ok(Outcome {
                text: report.to_string(),
                json: serde_json::to_value(&report)?,
                code: exit(report.all_confirmed()),
            })
        }
    }
}

fn read_derivation(file: &PathBuf) -> Result<Derivation> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    Ok(Derivation::parse(&text)?)
}

fn decide(args: EntailsArgs, with_witness: bool) -> Result<Outcome> {
    let lang = args.lang.unwrap_or_else(|| args.semantics.default_language());
    let premises = args
        .premises
        .iter()
        .map(|p| parse(p, lang))
        .collect::<Result<Vec<Formula>, _>>()?;
    let conclusion = parse(&args.conclusion, lang)?;

    let (label, holds, witness, model) = match args.semantics {
        Semantics::Matrix(id) => {
            let m = lookup_matrix(id);
            if m.language() != lang {
                bail!("matrix {} interprets {}, not {}", id, m.language(), lang);
            }
            let v = entails_matrix(&m, &premises, &conclusion)?;
            let label = if v.holds() { "HOLDS" } else { "FAILS" }.to_string();
            let model = v.countermodel().map(serde_json::to_value).transpose()?;
            (label, v.holds(), v.countermodel().map(ToString::to_string), model)
        }
        Semantics::Kripke(k) => {
            let k = k.unwrap_or_else(|| default_bound(lang, &premises, &conclusion));
            let v = entails_discussive(&premises, &conclusion, lang, k)?;
            let model = v.countermodel().map(serde_json::to_value).transpose()?;
            (v.label(), v.holds(), v.countermodel().map(ToString::to_string), model)
        }
        Semantics::Routley(mode, k) => {
            if lang != Language::Fde {
                bail!("Routley semantics interprets L-FDE, not {lang}");
            }
            let [premise] = premises.as_slice() else {
                bail!("Routley semantics takes exactly one premise, got {}", premises.len());
            };
            let v = routley_entails(premise, &conclusion, mode, k)?;
            let model = v.countermodel().map(serde_json::to_value).transpose()?;
            (v.label(), v.holds(), v.countermodel().map(ToString::to_string), model)
        }
    };

    let mut text = label.clone();
    if with_witness {
        if let Some(w) = &witness {
            text.push('\n');
            text.push_str(w);
        }
    }
    let mut json = json!({
        "language": lang,
        "premises": premises.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "conclusion": conclusion.to_string(),
        "verdict": label,
        "holds": holds,
    });
    if with_witness {
        json["witness"] = json!(witness);
        json["countermodel"] = model.unwrap_or(Value::Null);
    }
    Ok(Outcome {
        text,
        json,
        code: exit(holds),
    })
}
