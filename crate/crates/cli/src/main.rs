use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lyndon_bar::barlift::{enumerate_trees, render_word, LiftContext, Method, Variant};
use lyndon_bar::colie::{Basis, CoLieElement, Coefficients, DualCoalgebra, Tag};
use lyndon_bar::dgcore::{model, CdgaPresentation, Space};
use lyndon_bar::freelie::StructureTable;
use lyndon_bar::suites::{all_passed, run_suite, Suite, SuiteConfig};
use lyndon_bar::words::{lyndon_words, LyndonWord};
use lyndon_bar::{Error, Q};

const WEIGHT_CAP: usize = 8;
const MAX_LEAVES: usize = 12;

#[derive(Parser)]
#[command(name = "lyndon-bar", version, about = "Lyndon brackets, Lie coalgebras and bar constructions in exact arithmetic")]
struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Allow weights above the built-in cap of 8.
    #[arg(long, global = true)]
    no_weight_cap: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List Lyndon words over {0,1} in lexicographic order.
    Lyndon {
        #[arg(long)]
        max_length: usize,
        #[arg(long, value_enum, default_value_t = ListFormat::Json)]
        format: ListFormat,
    },
    /// Dump a table of structure constants (nonzero entries only).
    Coeffs {
        #[arg(long, value_enum)]
        family: TableFamily,
        #[arg(long)]
        max_weight: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
    },
    /// Cobracket of one tag, e.g. `T0:011` or `T@1:01`.
    Cobracket {
        tag: String,
        #[arg(long, default_value = "x1")]
        basis: String,
        #[arg(long, value_enum, default_value_t = JsonOnly::Json)]
        format: JsonOnly,
    },
    /// Generators and differential of a model.
    Model {
        #[arg(long)]
        space: String,
        #[arg(long)]
        max_weight: usize,
        #[arg(long, value_enum, default_value_t = JsonOnly::Json)]
        format: JsonOnly,
    },
    /// Planar binary trees with the given number of leaves.
    Trees {
        #[arg(long)]
        leaves: usize,
        #[arg(long, value_enum, default_value_t = ListFormat::Json)]
        format: ListFormat,
    },
    /// A closed indecomposable bar element lifting one generator.
    Lift {
        word: String,
        #[arg(long, default_value = "plain")]
        variant: String,
        #[arg(long, default_value = "oracle")]
        method: String,
        /// Fail with exit status 1 unless every lift property holds.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t = JsonOnly::Json)]
        format: JsonOnly,
    },
    /// Run verification suites and print one row per check.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 5)]
        max_weight: usize,
        #[arg(long, env = "LYNDON_BAR_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Json,
    Lines,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum JsonOnly {
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFamily {
    Alpha,
    Beta,
    Gamma,
    A,
    B,
    Ap,
    Bp,
}

enum Failure {
    Usage(String),
    /// A computation ran but an identity failed; carries the JSON witness.
    Violation(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(msg) => Failure::Usage(msg),
            other => Failure::Violation(json!({ "error": other.to_string() })),
        }
    }
}

struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn json(v: &Value) -> Self {
        Output { text: format!("{}\n", serde_json::to_string_pretty(v).expect("JSON values serialize")), ok: true }
    }

    fn lines<I: IntoIterator<Item = String>>(lines: I) -> Self {
        Output { text: lines.into_iter().map(|l| l + "\n").collect(), ok: true }
    }
}

fn rational(x: &Q) -> String {
    x.to_string()
}

fn check_weight(n: usize, cli: &Cli) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::Usage("weights must be positive".into()));
    }
    if n > WEIGHT_CAP && !cli.no_weight_cap {
        return Err(Failure::Usage(format!("weight {n} exceeds the cap of {WEIGHT_CAP}; pass --no-weight-cap to override")));
    }
    Ok(())
}

fn table_rows(t: &StructureTable) -> Vec<(String, String, String, String)> {
    t.iter()
        .map(|(w, u, v, c)| (w.to_string(), u.to_string(), v.to_string(), rational(c)))
        .collect()
}

fn presentation_json(p: &CdgaPresentation) -> Value {
    let generators: Vec<Value> = p
        .generators()
        .iter()
        .map(|g| json!({ "name": g.name, "degree": g.degree, "weight": g.weight }))
        .collect();
    let mut differential = serde_json::Map::new();
    for (i, g) in p.generators().iter().enumerate() {
        let terms: Vec<Value> = p
            .generator_differential(i)
            .terms()
            .iter()
            .map(|(m, c)| {
                let names: Vec<&str> = m.iter().map(|&j| p.generators()[j].name.as_str()).collect();
                json!({ "monomial": names, "coeff": rational(c) })
            })
            .collect();
        differential.insert(g.name.clone(), Value::Array(terms));
    }
    json!({ "generators": generators, "differential": differential })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Lyndon { max_length, format } => {
            check_weight(*max_length, cli)?;
            let words: Vec<String> = lyndon_words(*max_length).iter().map(ToString::to_string).collect();
            Ok(match format {
                ListFormat::Json => Output::json(&json!(words)),
                ListFormat::Lines => Output::lines(words),
            })
        }
        Command::Coeffs { family, max_weight, format } => {
            check_weight(*max_weight, cli)?;
            let c = Coefficients::new(*max_weight)?;
            let table = match family {
                TableFamily::Alpha => &c.alpha,
                TableFamily::Beta => &c.beta,
                TableFamily::Gamma => &c.gamma,
                TableFamily::A => &c.ab.a,
                TableFamily::B => &c.ab.b,
                TableFamily::Ap => &c.ab.a_prime,
                TableFamily::Bp => &c.ab.b_prime,
            };
            let rows = table_rows(table);
            Ok(match format {
                TableFormat::Json => {
                    let v: Vec<Value> = rows.iter().map(|(w, u, v, c)| json!({ "W": w, "U": u, "V": v, "value": c })).collect();
                    Output::json(&Value::Array(v))
                }
                TableFormat::Csv => {
                    Output::lines(std::iter::once("W,U,V,value".to_string()).chain(rows.into_iter().map(|(w, u, v, c)| format!("{w},{u},{v},{c}"))))
                }
            })
        }
        Command::Cobracket { tag, basis, format: JsonOnly::Json } => {
            let tag: Tag = tag.parse()?;
            let basis: Basis = basis.parse()?;
            check_weight(tag.weight(), cli)?;
            let dual = DualCoalgebra::new(tag.weight())?;
            let d = dual.d_cy_in(&CoLieElement::tag(tag.clone()), basis)?;
            let terms: Vec<Value> =
                d.terms().iter().map(|((u, v), c)| json!({ "left": u.to_string(), "right": v.to_string(), "coeff": rational(c) })).collect();
            Ok(Output::json(&json!({ "tag": tag.to_string(), "basis": format!("{basis:?}").to_lowercase(), "wedge": terms })))
        }
        Command::Model { space, max_weight, format: JsonOnly::Json } => {
            check_weight(*max_weight, cli)?;
            let space: Space = space.parse()?;
            Ok(Output::json(&presentation_json(&model(space, *max_weight)?)))
        }
        Command::Trees { leaves, format } => {
            if *leaves > MAX_LEAVES {
                return Err(Failure::Usage(format!("at most {MAX_LEAVES} leaves")));
            }
            let trees: Vec<String> = enumerate_trees(*leaves)?.iter().map(ToString::to_string).collect();
            Ok(match format {
                ListFormat::Json => Output::json(&json!(trees)),
                ListFormat::Lines => Output::lines(trees),
            })
        }
        Command::Lift { word, variant, method, check, format: JsonOnly::Json } => {
            let w: LyndonWord = word.parse()?;
            let variant: Variant = variant.parse()?;
            let method: Method = method.parse()?;
            check_weight(w.weight(), cli)?;
            let ctx = LiftContext::new(w.weight())?;
            let (element, report) = ctx.lift_lb(&w, variant, method)?;
            let p = ctx.model(variant);
            let terms: Vec<Value> =
                element.terms().iter().map(|(bw, c)| json!({ "word": render_word(bw, p), "coeff": rational(c) })).collect();
            let v = json!({ "report": report, "element": terms });
            if *check && !report.checks.all() {
                return Err(Failure::Violation(v));
            }
            Ok(Output::json(&v))
        }
        Command::Verify { suite, max_weight, seed, samples } => {
            check_weight(*max_weight, cli)?;
            let suite: Suite = suite.parse()?;
            let cfg = SuiteConfig { max_weight: *max_weight, seed: *seed, samples: *samples };
            let rows = run_suite(suite, &cfg)?;
            let passed = all_passed(&rows);
            let v = json!({
                "suite": suite.name(),
                "max_weight": max_weight,
                "seed": seed,
                "samples": samples,
                "passed": passed,
                "rows": rows,
            });
            let mut out = Output::json(&v);
            out.ok = passed;
            Ok(out)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match run(&cli) {
        Ok(out) => (out.text, if out.ok { 0 } else { 1 }),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Violation(v)) => (Output::json(&v).text, 1),
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
