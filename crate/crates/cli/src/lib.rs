//! Command-line front end for the module engine: parse presentation
//! files, run the predicates, functors, classifiers, searches, and
//! verification suites, and emit deterministic text or JSON reports.
//!
//! Exit codes: 0 when the requested property holds (or the command simply
//! succeeds), 1 when a checked property fails (the report carries a
//! witness), 2 on usage or parse errors.

pub mod modfile;
pub mod report;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use report::{Format, Report};
use umod_core::classify::{
    catalog, classify_f2_plus_sigma, classify_sigma_n, enumerate_sigma_n, gysin_model, search_j2,
    solve_j2, SigmaError,
};
use umod_core::functors::{fix_z2, quotient_e, smith_sequence, tor1_koszul_dims, tor1_rank_one,
    FixError, SmithError};
use umod_core::hv::Character;
use umod_core::steenrod::{adem_normalize, parse_sq_expression};
use umod_core::umod::{
    ensure_free_type, is_hfree, is_isomorphic_bounded, is_nilclosed, is_nilpotent, is_reduced,
    realize, validate, IsoOutcome, Presentation, RePresentError, Witness,
};

const BUDGET: u64 = 1 << 22;

/// The result of one invocation: what to print and how to exit.
pub struct RunOutcome {
    pub exit_code: i32,
    pub output: String,
}

#[derive(Parser)]
#[command(name = "umod", version, about = "Exact computations with unstable modules over F2[t1..tr] and the mod-2 Steenrod algebra", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Truncation degree for all graded computations.
    #[arg(long, global = true, default_value_t = 16)]
    max_degree: u32,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Seed for the randomized verification suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Verb {
    /// Normalize a product of Steenrod squares into the admissible basis.
    Adem { expr: String },
    /// Operations on a presentation file.
    Module {
        #[command(subcommand)]
        op: ModuleOp,
    },
    /// Fixed points of the order-2 group action encoded by a rank-1 module.
    Fix { file: PathBuf },
    /// The embedding into H ⊗ Fix with cokernel analysis and the
    /// four-term exactness certificate.
    Smith { file: PathBuf },
    /// Classify a module against the reference families.
    Classify {
        #[command(subcommand)]
        op: ClassifyOp,
    },
    /// Enumerate the reference families.
    Enumerate {
        #[command(subcommand)]
        op: EnumerateOp,
    },
    /// Exhaustive searches over small module tables.
    Search {
        #[command(subcommand)]
        op: SearchOp,
    },
    /// Print a named module from the built-in catalog.
    Catalog {
        name: String,
        args: Vec<u32>,
    },
    /// Build the equivariant model of a sum of characters, e.g. "t",
    /// "t,0", or "t1,t2" (0 denotes the trivial character).
    Gysin { characters: String },
    /// Run a verification suite: a criterion id (1-11), a criterion name,
    /// or "all".
    Verify { suite: String },
}

#[derive(Subcommand)]
enum ModuleOp {
    /// Check a predicate, reporting a witness on failure.
    Check {
        file: PathBuf,
        #[arg(long)]
        predicate: Predicate,
    },
    /// The generator quotient E/(t1..tr)E with its induced action.
    Quotient { file: PathBuf },
    /// The first derived functor of the generator quotient.
    Tor1 { file: PathBuf },
    /// Bounded isomorphism test between two presentations.
    Iso { file_a: PathBuf, file_b: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Predicate {
    Nilpotent,
    Reduced,
    Nilclosed,
    Hfree,
}

#[derive(Subcommand)]
enum ClassifyOp {
    /// Identify a module with a suspended form-product ideal (or a free
    /// summand plus one).
    Sigma { file: PathBuf },
    /// Decide which of the two reference solutions with quotient J(2) a
    /// module is.
    J2 { file: PathBuf },
}

#[derive(Subcommand)]
enum EnumerateOp {
    /// All classes with one-dimensional generator quotient in a degree.
    Sigma {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        rank: u32,
    },
}

#[derive(Subcommand)]
enum SearchOp {
    /// Exhaust all two-generator tables with quotient J(2).
    J2,
}

/// Run the command line given as plain arguments (without the binary
/// name).  All output is returned, never printed here.
pub fn run(args: &[String]) -> RunOutcome {
    let mut argv: Vec<String> = vec![String::from("umod")];
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return RunOutcome { exit_code: code, output: rendered };
        }
    };
    let command = args.join(" ");
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let n = cli.max_degree;
    let result = match &cli.verb {
        Verb::Adem { expr } => adem_verb(command, n, expr),
        Verb::Module { op } => match op {
            ModuleOp::Check { file, predicate } => check_verb(command, n, file, *predicate),
            ModuleOp::Quotient { file } => quotient_verb(command, n, file),
            ModuleOp::Tor1 { file } => tor1_verb(command, n, file),
            ModuleOp::Iso { file_a, file_b } => iso_verb(command, n, file_a, file_b),
        },
        Verb::Fix { file } => fix_verb(command, n, file),
        Verb::Smith { file } => smith_verb(command, n, file),
        Verb::Classify { op } => match op {
            ClassifyOp::Sigma { file } => classify_sigma_verb(command, n, file),
            ClassifyOp::J2 { file } => classify_j2_verb(command, n, file),
        },
        Verb::Enumerate { op } => match op {
            EnumerateOp::Sigma { n: deg, rank } => enumerate_verb(command, n, *deg, *rank),
        },
        Verb::Search { op } => match op {
            SearchOp::J2 => search_verb(command, n),
        },
        Verb::Catalog { name, args: cat_args } => catalog_verb(command, n, name, cat_args),
        Verb::Gysin { characters } => gysin_verb(command, n, characters),
        Verb::Verify { suite } => verify_verb(command, n, suite, cli.seed),
    };
    match result {
        Ok((report, code)) => RunOutcome { exit_code: code, output: report.render(format) },
        Err(message) => RunOutcome { exit_code: 2, output: format!("error: {message}\n") },
    }
}

type VerbResult = Result<(Report, i32), String>;

fn load(path: &Path) -> Result<Presentation, String> {
    modfile::load_presentation(path).map_err(|e| e.to_string())
}

fn validated(path: &Path, trunc: u32) -> Result<Presentation, String> {
    let pres = load(path)?;
    validate(&pres, trunc)
        .map_err(|e| format!("{}: inconsistent presentation: {e}", path.display()))?;
    Ok(pres)
}

fn adem_verb(command: String, n: u32, expr: &str) -> VerbResult {
    let words = parse_sq_expression(expr).map_err(|e| e.to_string())?;
    let normal = adem_normalize(&words);
    let mut report = Report::new(command, n);
    report.line(format!("input: {expr}"));
    report.line(format!("normal-form: {normal}"));
    if let Some(d) = normal.degree() {
        report.line(format!("degree: {d}"));
    }
    Ok((report, 0))
}

fn check_verb(command: String, n: u32, file: &Path, predicate: Predicate) -> VerbResult {
    let pres = validated(file, n)?;
    let e = realize(&pres, n);
    let verdict = match predicate {
        Predicate::Nilpotent => is_nilpotent(&e),
        Predicate::Reduced => is_reduced(&e),
        Predicate::Nilclosed => is_nilclosed(&e),
        Predicate::Hfree => is_hfree(&e),
    };
    let name = match predicate {
        Predicate::Nilpotent => "nilpotent",
        Predicate::Reduced => "reduced",
        Predicate::Nilclosed => "nilclosed",
        Predicate::Hfree => "hfree",
    };
    let mut report = Report::new(command, n);
    report.line(format!("predicate: {name}"));
    report.table("module", e.dims().to_vec());
    report.verdict(verdict);
    let code = report.exit_code();
    Ok((report, code))
}

fn quotient_verb(command: String, n: u32, file: &Path) -> VerbResult {
    let pres = validated(file, n)?;
    let bar = quotient_e(&realize(&pres, n));
    let mut report = Report::new(command, n);
    report.table("quotient", bar.dims().to_vec());
    for (&(i, deg), mat) in bar.nonzero_sq() {
        report.line(format!("sq {i} on degree {deg}: rank {}", mat.rank()));
    }
    report.line(format!("total dimension: {}", bar.total_dim()));
    Ok((report, 0))
}

fn tor1_verb(command: String, n: u32, file: &Path) -> VerbResult {
    let pres = validated(file, n)?;
    let e = realize(&pres, n);
    let mut report = Report::new(command, n);
    if pres.rank() == 1 {
        let tor = tor1_rank_one(&e);
        report.table("tor1", tor.dims().to_vec());
        match tor.nilpotent_witness() {
            None => {
                report.line("tor1 is nilpotent through the certified range".to_string());
                report.holds();
            }
            Some(d) => {
                report.fails(Witness {
                    degree: d,
                    element: String::from("a tor1 class survives its doubling orbit"),
                });
            }
        }
    } else {
        report.table("tor1", tor1_koszul_dims(&e));
        report.line("dimensions only (module structure is computed at rank 1)".to_string());
    }
    let code = report.exit_code();
    Ok((report, code))
}

fn iso_verb(command: String, n: u32, file_a: &Path, file_b: &Path) -> VerbResult {
    let pres_a = validated(file_a, n)?;
    let pres_b = validated(file_b, n)?;
    let a = realize(&pres_a, n);
    let b = realize(&pres_b, n);
    let mut report = Report::new(command, n);
    report.table("left", a.dims().to_vec());
    report.table("right", b.dims().to_vec());
    match is_isomorphic_bounded(&a, &b, BUDGET) {
        IsoOutcome::Isomorphic(_) => {
            report.line("isomorphic through the certified degree".to_string());
            report.holds();
        }
        IsoOutcome::NotIsomorphic => {
            report.fails(Witness {
                degree: 0,
                element: format!("no isomorphism exists through degree {n}"),
            });
        }
        IsoOutcome::BudgetExceeded => {
            report.budget_exhausted = true;
            report.fails(Witness {
                degree: 0,
                element: String::from("the isomorphism search exhausted its budget"),
            });
        }
    }
    let code = report.exit_code();
    Ok((report, code))
}

fn free_form(pres: &Presentation, trunc: u32, report: &mut Report) -> Result<Presentation, i32> {
    match ensure_free_type(pres, trunc) {
        Ok(free) => Ok(free),
        Err(RePresentError::NotHFree(w)) => {
            report.fails(w);
            Err(1)
        }
        Err(RePresentError::TruncationTooSmall { needed }) => {
            report.fails(Witness {
                degree: needed,
                element: format!("re-presentation needs --max-degree at least {needed}"),
            });
            Err(1)
        }
    }
}

fn fix_verb(command: String, n: u32, file: &Path) -> VerbResult {
    let pres = validated(file, n)?;
    let mut report = Report::new(command, n / 2);
    let free = match free_form(&pres, n, &mut report) {
        Ok(free) => free,
        Err(code) => return Ok((report, code)),
    };
    match fix_z2(&free, n / 2) {
        Ok(fix) => {
            report.table("fix", fix.dims().to_vec());
            for (&(i, deg), mat) in fix.nonzero_sq() {
                report.line(format!("sq {i} on degree {deg}: rank {}", mat.rank()));
            }
            report.line(format!("total dimension: {}", fix.total_dim()));
            Ok((report, 0))
        }
        Err(FixError::NotRankOne) => {
            report.fails(Witness {
                degree: 0,
                element: String::from("fixed points are computed only at rank 1"),
            });
            Ok((report, 1))
        }
        Err(FixError::NotFreeType) => unreachable!("re-presented input is free-type"),
    }
}

fn smith_verb(command: String, n: u32, file: &Path) -> VerbResult {
    let pres = validated(file, n)?;
    let mut report = Report::new(command, n);
    match smith_sequence(&pres, n, BUDGET) {
        Ok(smith) => {
            report.line(format!("exactness certified through degree {}", smith.report_degree));
            report.table("fix", smith.fix.dims().to_vec());
            report.table("cokernel", smith.coker_dims.clone());
            report.table("trivial-part", smith.tau_dims.clone());
            report.table("tor1-of-cokernel", smith.tor1_dims.clone());
            for image in &smith.eta_images {
                report.line(format!("eta: {image}"));
            }
            report.line(format!(
                "tor1 of the cokernel matches the suspended trivial part: {}",
                smith.tor1_matches_tau
            ));
            if smith.sequence_exact {
                report.holds();
            } else {
                report.fails(Witness {
                    degree: smith.report_degree,
                    element: String::from("the four-term sequence is not exact degreewise"),
                });
            }
            let code = report.exit_code();
            Ok((report, code))
        }
        Err(SmithError::BudgetExceeded) => {
            report.budget_exhausted = true;
            report.fails(Witness {
                degree: 0,
                element: String::from("the embedding search exhausted its budget"),
            });
            Ok((report, 1))
        }
        Err(e) => {
            report.fails(Witness { degree: 0, element: e.to_string() });
            Ok((report, 1))
        }
    }
}

fn classify_sigma_verb(command: String, n: u32, file: &Path) -> VerbResult {
    let pres = validated(file, n)?;
    let mut report = Report::new(command, n);
    match classify_sigma_n(&pres, n, BUDGET) {
        Ok(class) => {
            report.line(format!("class: {class}"));
            report.line(format!("degree: {}", class.degree()));
            report.holds();
            Ok((report, 0))
        }
        Err(SigmaError::WrongQuotient { dims })
            if dims.first() == Some(&1) && dims.iter().sum::<usize>() == 2 =>
        {
            match classify_f2_plus_sigma(&pres, n, BUDGET) {
                Ok(split) => {
                    report.line(format!("class: F2 ⊕ ({})", split.class));
                    report.line(format!("corrector: {}", split.corrector));
                    report.holds();
                    Ok((report, 0))
                }
                Err(e) => {
                    report.fails(Witness { degree: 0, element: e.to_string() });
                    Ok((report, 1))
                }
            }
        }
        Err(SigmaError::NotHFree(w)) => {
            report.fails(w);
            Ok((report, 1))
        }
        Err(e) => {
            report.fails(Witness { degree: 0, element: e.to_string() });
            Ok((report, 1))
        }
    }
}

fn classify_j2_verb(command: String, n: u32, file: &Path) -> VerbResult {
    let pres = validated(file, n)?;
    let mut report = Report::new(command, n);
    match solve_j2(&pres, n, BUDGET) {
        Ok(class) => {
            report.line(format!("class: {class}"));
            report.holds();
            Ok((report, 0))
        }
        Err(umod_core::classify::J2Error::NotHFree(w)) => {
            report.fails(w);
            Ok((report, 1))
        }
        Err(umod_core::classify::J2Error::Budget) => {
            report.budget_exhausted = true;
            report.fails(Witness {
                degree: 0,
                element: String::from("the isomorphism search exhausted its budget"),
            });
            Ok((report, 1))
        }
        Err(e) => {
            report.fails(Witness { degree: 0, element: e.to_string() });
            Ok((report, 1))
        }
    }
}

fn enumerate_verb(command: String, n: u32, degree: u32, rank: u32) -> VerbResult {
    if rank == 0 || rank > 3 || degree > 8 {
        return Err(String::from(
            "enumeration is certified for 1 ≤ rank ≤ 3 and degree ≤ 8",
        ));
    }
    let classes = enumerate_sigma_n(degree, rank);
    let mut report = Report::new(command, n);
    for (class, _) in &classes {
        report.line(format!("class: {class}"));
    }
    report.line(format!("classes: {}", classes.len()));
    Ok((report, 0))
}

fn search_verb(command: String, n: u32) -> VerbResult {
    let mut report = Report::new(command, n);
    match search_j2(n, BUDGET) {
        Ok(census) => {
            report.line(format!("tables: {}", census.total_tables));
            report.line(format!("consistent: {}", census.valid_tables));
            report.line(format!("with quotient J(2): {}", census.candidates.len()));
            for (rep, size) in &census.classes {
                let label = match solve_j2(rep, n, BUDGET) {
                    Ok(class) => class.to_string(),
                    Err(_) => String::from("unresolved"),
                };
                report.line(format!("class {label}: {size} tables"));
            }
            report.line(format!("classes: {}", census.classes.len()));
            Ok((report, 0))
        }
        Err(_) => {
            report.budget_exhausted = true;
            report.fails(Witness {
                degree: 0,
                element: String::from("the bucketing search exhausted its budget"),
            });
            Ok((report, 1))
        }
    }
}

fn catalog_verb(command: String, n: u32, name: &str, args: &[u32]) -> VerbResult {
    let entry = catalog(name, args, n).map_err(|e| e.to_string())?;
    let mut report = Report::new(command, n);
    report.line(format!("name: {}", entry.name));
    report.line(format!("note: {}", entry.note));
    let verdict = validate(&entry.presentation, n)
        .map(|()| umod_core::umod::Verdict::Holds)
        .unwrap_or_else(|e| {
            umod_core::umod::Verdict::Fails(Witness { degree: 0, element: e.to_string() })
        });
    report.table("module", realize(&entry.presentation, n).dims().to_vec());
    report.verdict(verdict);
    let code = report.exit_code();
    Ok((report, code))
}

fn parse_characters(input: &str) -> Result<Vec<Character>, String> {
    let items: Vec<&str> = input.split(',').map(str::trim).collect();
    if items.iter().any(|i| i.is_empty()) {
        return Err(String::from("empty character in the list"));
    }
    let mut rank = 1u32;
    let mut masks: Vec<Option<u32>> = Vec::new();
    for item in &items {
        if *item == "0" || item.eq_ignore_ascii_case("trivial") {
            masks.push(None);
            continue;
        }
        let mut mask = 0u32;
        for factor in item.split('+') {
            let f = factor.trim();
            let rest = f
                .strip_prefix('t')
                .ok_or_else(|| format!("`{f}` is not a degree-1 class (expect t, t2, ...)"))?;
            let idx: u32 = if rest.is_empty() {
                1
            } else {
                rest.parse().map_err(|_| format!("`{f}` is not a degree-1 class"))?
            };
            if idx == 0 || idx > 30 {
                return Err(format!("variable index {idx} out of range"));
            }
            rank = rank.max(idx);
            mask |= 1 << (idx - 1);
        }
        masks.push(Some(mask));
    }
    Ok(masks
        .into_iter()
        .map(|m| match m {
            Some(mask) => Character::new(rank, mask),
            None => Character::trivial(rank),
        })
        .collect())
}

fn gysin_verb(command: String, n: u32, characters: &str) -> VerbResult {
    let chars = parse_characters(characters)?;
    let entry = gysin_model(&chars);
    let mut report = Report::new(command, n);
    report.line(format!("model: {}", entry.name));
    report.line(format!("note: {}", entry.note));
    report.table("module", realize(&entry.presentation, n).dims().to_vec());
    let nontrivial = chars.iter().filter(|c| !c.is_trivial()).count();
    if nontrivial == chars.len() {
        match classify_sigma_n(&entry.presentation, n, BUDGET) {
            Ok(class) => {
                report.line(format!("class: {class}"));
            }
            Err(e) => {
                report.line(format!("classification: {e}"));
            }
        }
    } else {
        match classify_f2_plus_sigma(&entry.presentation, n, BUDGET) {
            Ok(split) => {
                report.line(format!("class: F2 ⊕ ({})", split.class));
            }
            Err(e) => {
                report.line(format!("classification: {e}"));
            }
        }
    }
    Ok((report, 0))
}

fn verify_verb(command: String, n: u32, suite: &str, seed: u64) -> VerbResult {
    let names = verify::criterion_names();
    let selected: Vec<u32> = if suite == "all" {
        (1..=names.len() as u32).collect()
    } else if let Ok(id) = suite.parse::<u32>() {
        if id == 0 || id as usize > names.len() {
            return Err(format!("criterion ids run from 1 to {}", names.len()));
        }
        vec![id]
    } else if let Some(pos) = names.iter().position(|&name| name == suite) {
        vec![pos as u32 + 1]
    } else {
        return Err(format!(
            "unknown suite `{suite}`; use \"all\", an id, or one of: {}",
            names.join(", ")
        ));
    };
    let mut report = Report::new(command, n);
    let mut all_pass = true;
    for id in selected {
        let name = names[(id - 1) as usize];
        let outcome = verify::run_criterion(id, seed);
        report.line(format!(
            "criterion {id} ({name}): {}",
            if outcome.pass { "PASS" } else { "FAIL" }
        ));
        for detail in &outcome.details {
            report.line(format!("  {detail}"));
        }
        all_pass &= outcome.pass;
    }
    if all_pass {
        report.holds();
        Ok((report, 0))
    } else {
        report.fails(Witness {
            degree: 0,
            element: String::from("at least one verification suite failed"),
        });
        Ok((report, 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> RunOutcome {
        let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        run(&owned)
    }

    #[test]
    fn adem_normalizes_the_classic_example() {
        let out = run_args(&["adem", "Sq2 Sq2"]);
        assert_eq!(out.exit_code, 0);
        assert!(out.output.contains("normal-form: Sq3 Sq1"), "{}", out.output);
    }

    #[test]
    fn adem_rejects_malformed_expressions_with_usage_exit() {
        let out = run_args(&["adem", "Sq two"]);
        assert_eq!(out.exit_code, 2);
    }

    #[test]
    fn unknown_verbs_exit_with_usage() {
        let out = run_args(&["frobnicate"]);
        assert_eq!(out.exit_code, 2);
    }

    #[test]
    fn character_lists_parse_with_inferred_rank() {
        let chars = parse_characters("t1,t2").unwrap();
        assert_eq!(chars.len(), 2);
        assert_eq!(chars[0].rank(), 2);
        let chars = parse_characters("t,0").unwrap();
        assert!(chars[1].is_trivial());
        assert!(parse_characters("x").is_err());
    }
}
