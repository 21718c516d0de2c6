use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kucomm::expr::{eval_hopf_flagged, eval_ku, parse};
use kucomm::json;
use kucomm::verify::{run_checks, Config, Report};
use kucomm_core::charcls::{splitting_pullback, verify_u2_table};
use kucomm_core::hopf::hurewicz;
use kucomm_core::ku::{phi_k, KuElem};
use kucomm_core::multisym::find_relations;
use kucomm_core::s4::verify_kcoms4;

const GRAMMAR_HELP: &str = "\
Expression grammar (whitespace-insensitive):
  atoms      integers, u, y1, y2, ..., zeta(a,b), [n]
  operators  + - * ^ and the circle operator 'o'
  precedence ^  >  *  >  o  >  + -
'mul' and 'phi' evaluate in the K-homology ring (u, y<n>); 'circ' evaluates
in the Hopf ring (zeta(a,b), [n]), where '*' is the star product and 'o'
the circle product.

Exit codes: 0 ok, 1 verification failure, 2 usage or parse error.";

#[derive(Parser)]
#[command(name = "kucomm", version, about = "Exact computations in the K-homology ring of BU(1), its rational Hopf ring, and the attached characteristic-class formulas", after_help = GRAMMAR_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Weight bound for the verification suite (default 10; env KUCOMM_MAX_WEIGHT)
    #[arg(long, global = true)]
    max_weight: Option<u32>,

    /// Seed for the randomized property trials
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Number of randomized trials per property check
    #[arg(long, global = true, default_value_t = 200)]
    trials: u32,

    /// Run only the named checks (comma separated)
    #[arg(long, global = true, value_delimiter = ',')]
    only: Option<Vec<String>>,

    /// Corrupt one table value to exercise the harness (self-test)
    #[arg(long, global = true, hide = true)]
    inject_fault: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a product in the K-homology ring (symbols u, y1, y2, ...)
    Mul { expr: String },
    /// Evaluate a Hopf ring expression ('*' star product, 'o' circle product)
    Circ { expr: String },
    /// Hurewicz image of y_n
    Hurewicz { n: u32 },
    /// Splitting pullback of the power sum z_n through the k-th factor
    Split { k: u32, n: u32 },
    /// Verify the rank-2 integral comparison table
    U2table,
    /// The 4-sphere homotopy computation
    S4,
    /// Relation kernel of the rank-n generators in one weight
    Relations { n: usize, degree: u32 },
    /// Apply the power operation phi^k to a K-homology expression
    #[command(allow_negative_numbers = true)]
    Phi { k: i64, expr: String },
    /// Run the verification suite
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let max_weight = match resolve_max_weight(cli.max_weight) {
        Ok(w) => w,
        Err(msg) => return usage_error(&msg),
    };
    if cli.trials < 1 {
        return usage_error("--trials must be at least 1");
    }

    let cfg = Config {
        max_weight,
        seed: cli.seed,
        trials: cli.trials,
        only: cli.only.clone(),
        inject_fault: cli.inject_fault,
    };

    match run(&cli.command, &cfg, cli.format) {
        Ok(CommandResult { stdout, ok }) => {
            println!("{stdout}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => usage_error(&msg),
    }
}

fn resolve_max_weight(flag: Option<u32>) -> Result<u32, String> {
    let value = match flag {
        Some(w) => w,
        None => match std::env::var("KUCOMM_MAX_WEIGHT") {
            Ok(s) => s
                .trim()
                .parse::<u32>()
                .map_err(|_| format!("KUCOMM_MAX_WEIGHT is not a number: {s}"))?,
            Err(_) => 10,
        },
    };
    if value < 1 {
        Err("max weight must be at least 1".to_string())
    } else {
        Ok(value)
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

struct CommandResult {
    stdout: String,
    ok: bool,
}

enum CliError {
    Usage(String),
}

fn ok(stdout: String) -> Result<CommandResult, CliError> {
    Ok(CommandResult { stdout, ok: true })
}

fn run(cmd: &Command, cfg: &Config, format: Format) -> Result<CommandResult, CliError> {
    match cmd {
        Command::Mul { expr } => {
            let value = eval_ku_expr(expr)?;
            match format {
                Format::Text => ok(value.to_string()),
                Format::Json => ok(to_json(&json::ku_terms(&value))),
            }
        }
        Command::Phi { k, expr } => {
            let value = phi_k(*k, &eval_ku_expr(expr)?);
            match format {
                Format::Text => ok(value.to_string()),
                Format::Json => ok(to_json(&json::ku_terms(&value))),
            }
        }
        Command::Circ { expr } => {
            let ast = parse(expr).map_err(|e| CliError::Usage(format!("parse error {e}")))?;
            let (value, flagged) =
                eval_hopf_flagged(&ast).map_err(|e| CliError::Usage(format!("parse error {e}")))?;
            match format {
                Format::Text => {
                    let mut out = value.to_string();
                    if flagged {
                        out.push_str(
                            "\nnote: a circle product combined terms on nonzero components below \
                             the stable range; the value extrapolates the mixed component rule",
                        );
                    }
                    ok(out)
                }
                Format::Json => ok(to_json(&json::hopf_terms(&value))),
            }
        }
        Command::Hurewicz { n } => {
            if *n < 1 {
                return Err(CliError::Usage("the index must be at least 1".to_string()));
            }
            let value = hurewicz(&KuElem::y(*n));
            match format {
                Format::Text => ok(value.to_string()),
                Format::Json => ok(to_json(&json::hopf_terms(&value))),
            }
        }
        Command::Split { k, n } => {
            if *k < 1 || *n < 1 {
                return Err(CliError::Usage("both indices must be at least 1".to_string()));
            }
            let value = splitting_pullback(*k, *n);
            match format {
                Format::Text => ok(value.to_string()),
                Format::Json => ok(to_json(&json::msym_terms(&value))),
            }
        }
        Command::Relations { n, degree } => {
            if *n < 1 || *degree < 1 {
                return Err(CliError::Usage("rank and degree must be at least 1".to_string()));
            }
            if *degree > cfg.max_weight.max(8) {
                return Err(CliError::Usage(format!(
                    "degree {degree} exceeds the configured bound {}",
                    cfg.max_weight.max(8)
                )));
            }
            let relations = find_relations(*n, *degree);
            let report = json::RelationReport {
                rank: *n,
                degree: *degree,
                kernel_dimension: relations.len(),
                relations: relations.iter().map(|r| r.to_string()).collect(),
            };
            match format {
                Format::Text => {
                    let mut out = format!(
                        "rank {} weight {}: kernel dimension {}",
                        report.rank, report.degree, report.kernel_dimension
                    );
                    for r in &report.relations {
                        out.push_str("\n  ");
                        out.push_str(r);
                    }
                    ok(out)
                }
                Format::Json => ok(to_json(&report)),
            }
        }
        Command::U2table => {
            let report = verify_u2_table();
            let all_ok = report.all_ok();
            let stdout = match format {
                Format::Text => {
                    let mut lines = vec![format!(
                        "{:10} {:34} {:9} {:22} {}",
                        "class", "rank-2 entry", "entry", "SU(2) entry", "su"
                    )];
                    for row in &report.rows {
                        lines.push(format!(
                            "{:10} {:34} {:9} {:22} {}",
                            row.name,
                            row.claimed.to_string(),
                            if row.ok { "ok" } else { "MISMATCH" },
                            row.su_derived.to_string(),
                            if row.su_ok { "ok" } else { "MISMATCH" }
                        ));
                        if !row.ok {
                            lines.push(format!(
                                "  stable side:  {}\n  claimed side: {}",
                                row.stable_side, row.claimed_side
                            ));
                        }
                    }
                    lines.push(format!(
                        "relations -> 0: {}; injective through weight {}: {}; 2*d2 = 0: {}; c2^b*d2 != 0: {}",
                        report.relations_vanish,
                        report.injective_through_weight,
                        report.injectivity_ok,
                        report.torsion_ok,
                        report.torsion_classes_nonzero
                    ));
                    lines.join("\n")
                }
                Format::Json => to_json(&json::u2_table_json(&report)),
            };
            Ok(CommandResult { stdout, ok: all_ok })
        }
        Command::S4 => {
            let report = verify_kcoms4();
            let all_ok = report.all_ok();
            let stdout = match format {
                Format::Text => format!(
                    "v         -> {}\nw         -> {}\n(v+w)/2   -> {}\nbasis determinant: {}\ndoubled class (either orientation): {} / {}",
                    report.image_v,
                    report.image_w,
                    report.image_mid,
                    report.determinant,
                    report.h_tilde_images.0,
                    report.h_tilde_images.1
                ),
                Format::Json => to_json(&json::s4_json(&report)),
            };
            Ok(CommandResult { stdout, ok: all_ok })
        }
        Command::Verify => {
            let report = run_checks(cfg).map_err(CliError::Usage)?;
            let all_ok = report.all_ok();
            let stdout = match format {
                Format::Text => render_report_text(&report),
                Format::Json => to_json(&report),
            };
            Ok(CommandResult { stdout, ok: all_ok })
        }
    }
}

fn eval_ku_expr(expr: &str) -> Result<KuElem, CliError> {
    let ast = parse(expr).map_err(|e| CliError::Usage(format!("parse error {e}")))?;
    eval_ku(&ast).map_err(|e| CliError::Usage(format!("parse error {e}")))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization cannot fail")
}

fn render_report_text(report: &Report) -> String {
    let mut lines = Vec::new();
    lines.push(format!(
        "verification suite: max weight {}, seed {}, {} trials",
        report.max_weight, report.seed, report.trials
    ));
    for check in &report.checks {
        lines.push(format!(
            "{:8} {:26} {:>6} ms  {}",
            check.status, check.name, check.wall_ms, check.detail
        ));
    }
    let failed = report.checks.iter().filter(|c| c.status == "fail").count();
    let flagged = report.checks.iter().filter(|c| c.status == "flagged").count();
    lines.push(format!(
        "overall: {} ({} checks, {} failed, {} flagged)",
        report.status,
        report.checks.len(),
        failed,
        flagged
    ));
    if let Some(name) = report.first_failure() {
        lines.push(format!("first failing check: {name}"));
    }
    lines.join("\n")
}
