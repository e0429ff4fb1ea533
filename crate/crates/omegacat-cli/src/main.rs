mod inputs;
mod report;

use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{error::ErrorKind, Parser, Subcommand};
use thiserror::Error;

use omegacat::complicial::{complicial_report, lp_reflect, is_precomplicial, well_tempered_violations, ComplicialReport};
use omegacat::gray_tensor::{t_extension_witness_chain, tensor_table, ChainOutcome, TensorError};
use omegacat::omega_nerve::{bridge_check, nerve, oriental, FiniteOmegaCat, OmegaError, DEFAULT_FUNCTOR_BUDGET};
use omegacat::parity::{collapse, enumerate_cells, simplex_parity_thin, verify_axioms, ParityError, Quotient, DEFAULT_BUDGET};
use omegacat::simplex_ops::{enumerate_shuffles, simplicial_identities_check};
use omegacat::stratified::{write_spc, Standard, StratifiedComplex};

use inputs::{load_parity, load_stratified, InputError};
use report::{yes_no, Format, Report};

#[derive(Debug, Parser)]
#[command(name = "omegacat", version, about = "Complicial sets, Gray tensors, parity complexes and their ω-categories")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Search budget for cell and functor enumeration.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Print timing to stderr.
    #[arg(long, global = true)]
    verbose: bool,
    /// Allow sizes that may take a long time.
    #[arg(long, global = true)]
    big: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the simplicial identities on ordinals up to [max].
    Identities {
        #[arg(long, default_value_t = 6)]
        max: usize,
    },
    /// List the (n,m)-shuffles.
    Shuffles { n: usize, m: usize },
    /// Per-dimension counts of Δ[n]⊗Δ[m].
    TensorTable {
        n: usize,
        m: usize,
        /// Use the pre-tensor stratification instead.
        #[arg(long)]
        pretensor: bool,
    },
    /// Write the precomplicial reflection of a stratified set (`-` for stdout).
    LpReflect { input: String, output: String },
    /// Check whether a stratified set is complicial.
    CheckComplicial {
        input: String,
        /// Highest horn dimension to check.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Check the parity complex axioms.
    VerifyParity { input: String },
    /// Count elements and cells of the free ω-category on Δ̃[n].
    Oriental {
        n: usize,
        /// Include cell counts.
        #[arg(long)]
        cells: bool,
        /// Include classes of the quotient by the thin top element.
        #[arg(long)]
        collapse: bool,
    },
    /// Nerve of the ω-category of a stratified parity complex.
    Nerve {
        input: String,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long)]
        check_complicial: bool,
        /// Also write the nerve as SPC.
        #[arg(long)]
        out: Option<String>,
    },
    /// Compare cylinders of Δ[n]⊗Δ[m] with elements of Δ̃[n]×Δ̃[m].
    Bridge {
        n: usize,
        m: usize,
        /// Use Δ[n]_t on the left.
        #[arg(long)]
        thin_left: bool,
        /// Use Δ[m]_t on the right.
        #[arg(long)]
        thin_right: bool,
    },
    /// Search a chain of witnessed thinnings from X to Y.
    WitnessChain { x: String, y: String },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Budget(_) | CliError::Failed(_) => 1,
        }
    }
}

impl From<ParityError> for CliError {
    fn from(e: ParityError) -> Self {
        match e {
            ParityError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<OmegaError> for CliError {
    fn from(e: OmegaError) -> Self {
        match e {
            OmegaError::BudgetExceeded(_) | OmegaError::Parity(ParityError::BudgetExceeded(_)) => CliError::Budget(e.to_string()),
            OmegaError::Unsupported(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<TensorError> for CliError {
    fn from(e: TensorError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// A rendered report and whether every check in it passed.
struct Outcome {
    report: Report,
    passed: bool,
    /// Replaces the report on stdout when set.
    raw: Option<String>,
}

impl Outcome {
    fn new(report: Report, passed: bool) -> Self {
        Outcome { report, passed, raw: None }
    }
}

fn require_big(cli: &Cli, what: &str, ok: bool) -> Result<(), CliError> {
    if ok || cli.big {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what} is large; pass --big to run it anyway")))
    }
}

fn complicial_rows(report: &mut Report, x: &StratifiedComplex, r: &ComplicialReport) {
    report.metric("bound", r.bound);
    report.metric("precomplicial_violations", r.precomplicial_violations.len());
    report.metric("horns_checked", r.horns_checked);
    report.metric("horns_skipped", r.horns_skipped);
    report.metric("thin_filler_failures", r.thin_filler_failures.len());
    report.metric("admissible_filler_failures", r.admissible_filler_failures.len());
    report.metric("nondegenerate_thin_edges", r.nondegenerate_thin_edges.len());
    report.metric("well_tempered_violations", well_tempered_violations(x).len());
    report.metric("complicial", yes_no(r.is_complicial()));
}

fn identities(max: usize) -> Outcome {
    let r = simplicial_identities_check(max);
    let mut report = Report::new(&["metric", "value"]);
    report.metric("max", max);
    report.metric("checked", r.checked);
    report.metric("violations", r.violations.len());
    report.trailer.extend(r.violations.iter().cloned());
    Outcome::new(report, r.passed())
}

fn shuffles(n: usize, m: usize) -> Outcome {
    let all = enumerate_shuffles(n, m);
    let mut report = Report::new(&["index", "alpha", "beta", "gamma"]);
    for (i, s) in all.iter().enumerate() {
        let gamma = if n == 0 { "-".to_string() } else { s.gamma().to_string() };
        report.row(vec![i.to_string(), s.alpha.to_string(), s.beta.to_string(), gamma]);
    }
    let expected = (1..=n).fold(1u128, |acc, i| acc * (m + i) as u128 / i as u128);
    let passed = all.len() as u128 == expected && all.iter().all(|s| s.is_valid());
    report.trailer.push(format!("count: {} (expected {expected})", all.len()));
    Outcome::new(report, passed)
}

fn tensor_rows(n: usize, m: usize, pre: bool) -> Outcome {
    let mut report = Report::new(&["dim", "thin", "non_thin", "mediator", "crushed_cylinder"]);
    for row in tensor_table(n, m, pre) {
        report.row(
            [row.dim, row.thin, row.non_thin, row.mediator, row.crushed_cylinder].iter().map(ToString::to_string).collect(),
        );
    }
    Outcome::new(report, true)
}

fn lp(input: &str, output: &str) -> Result<Outcome, CliError> {
    let x = load_stratified(input)?;
    let r = lp_reflect(&x);
    let text = write_spc(&r);
    let mut report = Report::new(&["metric", "value"]);
    report.metric("simplices", r.len());
    report.metric("thin_before", x.thin_ids().len());
    report.metric("thin_after", r.thin_ids().len());
    report.metric("precomplicial", yes_no(is_precomplicial(&r)));
    let passed = is_precomplicial(&r);
    if output == "-" {
        return Ok(Outcome { report, passed, raw: Some(text) });
    }
    fs::write(output, text).map_err(|e| CliError::Usage(format!("cannot write {output}: {e}")))?;
    Ok(Outcome::new(report, passed))
}

fn check_complicial(input: &str, bound: Option<usize>) -> Result<Outcome, CliError> {
    let x = load_stratified(input)?;
    let r = complicial_report(&x, bound);
    let mut report = Report::new(&["metric", "value"]);
    complicial_rows(&mut report, &x, &r);
    Ok(Outcome::new(report, r.is_complicial()))
}

fn verify_parity(input: &str) -> Result<Outcome, CliError> {
    let c = load_parity(input)?;
    let r = verify_axioms(&c.base);
    let mut report = Report::new(&["check", "violations"]);
    report.metric("elements", c.base.len());
    report.metric("axiom1", r.axiom1.len());
    report.metric("axiom2", r.axiom2.len());
    report.metric("axiom3a", r.axiom3a.len());
    report.metric("axiom3b", r.axiom3b.len());
    report.metric("face_order_cycles", r.face_order_cycles.len());
    report.metric("irrelevant", r.irrelevant.len());
    report.trailer.push(format!("parity complex: {}", yes_no(r.passed())));
    Ok(Outcome::new(report, r.passed()))
}

fn oriental_counts(n: usize, cells: bool, collapsed: bool, budget: usize) -> Result<Outcome, CliError> {
    let o = oriental(n, budget)?;
    let mut headers = vec!["dim", "elements"];
    if cells {
        headers.push("cells");
    }
    let mut passed = true;
    let quotient = if collapsed {
        headers.push("classes");
        let q = if n == 0 { Quotient::discrete(o.table.len()) } else { collapse(&simplex_parity_thin(n), &o.table) };
        let cat = FiniteOmegaCat::from_cell_table(&o.table, Some(&q))?;
        Some((q.class_count(), cat))
    } else {
        None
    };
    let mut report = Report::new(&headers);
    let cell_counts = o.table.count_by_dim();
    let class_counts = quotient.as_ref().map(|(_, cat)| cat.count_by_dim());
    for d in 0..=n {
        let mut row = vec![d.to_string(), o.simplex.complex.elements_of_dim(d).count().to_string()];
        if cells {
            row.push(cell_counts.get(d).copied().unwrap_or(0).to_string());
        }
        if let Some(counts) = &class_counts {
            row.push(counts.get(d).copied().unwrap_or(0).to_string());
        }
        report.row(row);
    }
    report.trailer.push(format!("cells: {}", o.table.len()));
    if cells {
        let top = o.table.cells_of_dim(n).len();
        passed &= top == 1;
        report.trailer.push(format!("top cells: {top}"));
    }
    if let Some((classes, cat)) = &quotient {
        let k = n.saturating_sub(1);
        let ok = cat.is_n_category(k) && cat.validate().passed();
        passed &= ok;
        report.trailer.push(format!("classes: {classes}"));
        report.trailer.push(format!("{k}-category: {}", yes_no(ok)));
    }
    Ok(Outcome::new(report, passed))
}

fn nerve_report(input: &str, dim: usize, check: bool, out: Option<&str>, budget: Option<usize>) -> Result<Outcome, CliError> {
    let c = load_parity(input)?;
    let table = enumerate_cells(&c.base, budget.unwrap_or(DEFAULT_BUDGET))?;
    let q = collapse(&c, &table);
    let cat = FiniteOmegaCat::from_cell_table(&table, Some(&q))?;
    let n = nerve(&cat, dim, budget.unwrap_or(DEFAULT_FUNCTOR_BUDGET))?;
    let x = &n.complex;
    let mut report = Report::new(&["metric", "value"]);
    report.metric("category_cells", cat.len());
    for d in 0..=dim {
        let ids = x.ids_of_dim(d);
        report.metric(&format!("simplices_{d}"), ids.len());
        report.metric(&format!("thin_{d}"), ids.iter().filter(|&&i| x.simplex(i).thin).count());
    }
    let mut passed = true;
    if check {
        let r = complicial_report(x, None);
        passed = r.is_complicial();
        complicial_rows(&mut report, x, &r);
    }
    if let Some(path) = out {
        fs::write(path, write_spc(x)).map_err(|e| CliError::Usage(format!("cannot write {path}: {e}")))?;
    }
    Ok(Outcome::new(report, passed))
}

fn bridge(n: usize, m: usize, thin_left: bool, thin_right: bool) -> Result<Outcome, CliError> {
    let side = |k: usize, thin: bool| if thin { Standard::DeltaT(k) } else { Standard::Delta(k) };
    let r = bridge_check(side(n, thin_left), side(m, thin_right))?;
    let mut report = Report::new(&["r", "cylinders", "elements", "bijective", "atoms_agree", "relevant"]);
    for row in &r.rows {
        report.row(vec![
            row.r.to_string(),
            row.cylinders.to_string(),
            row.elements.to_string(),
            yes_no(row.bijective),
            yes_no(row.atoms_agree),
            yes_no(row.relevant),
        ]);
    }
    report.trailer.push(format!("thinness: checked={} mismatches={}", r.thinness.checked, r.thinness.mismatches.len()));
    report.trailer.extend(r.thinness.mismatches.iter().cloned());
    Ok(Outcome::new(report, r.passed()))
}

fn witness_chain(xs: &str, ys: &str) -> Result<Outcome, CliError> {
    let x = load_stratified(xs)?;
    let y = load_stratified(ys)?;
    let outcome = t_extension_witness_chain(&x, &y)?;
    let (steps, remaining) = match &outcome {
        ChainOutcome::Success(steps) => (steps, &[][..]),
        ChainOutcome::Undecided { found, remaining } => (found, remaining.as_slice()),
    };
    let vertices = |id: usize| {
        let vs: Vec<String> = x.vertex_list(&x.nondegenerate(id)).iter().map(ToString::to_string).collect();
        vs.join("")
    };
    let mut report = Report::new(&["step", "simplex", "vertices", "witness", "k"]);
    for (i, s) in steps.iter().enumerate() {
        report.row(vec![i.to_string(), s.simplex.to_string(), vertices(s.simplex), s.witness.to_string(), s.k.to_string()]);
    }
    if outcome.is_success() {
        report.trailer.push("outcome: success".into());
    } else {
        let rest: Vec<String> = remaining.iter().map(|&i| vertices(i)).collect();
        report.trailer.push(format!("outcome: undecided, no witness for {}", rest.join(" ")));
    }
    Ok(Outcome::new(report, outcome.is_success()))
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Identities { max } => {
            require_big(cli, "identities --max above 8", *max <= 8)?;
            Ok(identities(*max))
        }
        Command::Shuffles { n, m } => {
            require_big(cli, "shuffles with n+m above 12", n + m <= 12)?;
            Ok(shuffles(*n, *m))
        }
        Command::TensorTable { n, m, pretensor } => {
            require_big(cli, "tensor-table with n+m above 6", n + m <= 6)?;
            Ok(tensor_rows(*n, *m, *pretensor))
        }
        Command::LpReflect { input, output } => lp(input, output),
        Command::CheckComplicial { input, bound } => check_complicial(input, *bound),
        Command::VerifyParity { input } => verify_parity(input),
        Command::Oriental { n, cells, collapse } => {
            require_big(cli, "oriental above dimension 3", *n <= 3)?;
            oriental_counts(*n, *cells, *collapse, cli.budget.unwrap_or(DEFAULT_BUDGET))
        }
        Command::Nerve { input, dim, check_complicial, out } => {
            require_big(cli, "nerve above dimension 3", *dim <= 3)?;
            nerve_report(input, *dim, *check_complicial, out.as_deref(), cli.budget)
        }
        Command::Bridge { n, m, thin_left, thin_right } => {
            require_big(cli, "bridge with n+m above 3", n + m <= 3)?;
            bridge(*n, *m, *thin_left, *thin_right)
        }
        Command::WitnessChain { x, y } => witness_chain(x, y),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    let start = Instant::now();
    let result = run(&cli);
    if cli.verbose {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let written = match (&outcome.raw, cli.format) {
                (Some(raw), _) => {
                    eprint!("{}", outcome.report.render(Format::Text));
                    stdout.write_all(raw.as_bytes())
                }
                (None, Format::Text) => stdout.write_all(outcome.report.render(Format::Text).as_bytes()),
                (None, Format::Tsv) => {
                    for line in &outcome.report.trailer {
                        eprintln!("{line}");
                    }
                    stdout.write_all(outcome.report.render(Format::Tsv).as_bytes())
                }
            };
            if written.is_err() {
                return ExitCode::from(1);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
