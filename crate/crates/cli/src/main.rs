//! `so42` — command-line front end for the so(4,2) engine.
//!
//! Each subcommand runs one verification suite and emits a report in JSON,
//! CSV, or plain text.  Reports are deterministic: the same configuration
//! (including the seed) produces byte-identical output.  Exit status is 0
//! when every check passes, 1 on a check failure, and 2 on a usage error.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use so42::branching::{
    so32_parity_split, so4_to_so3, tower_so3_table, tower_so4_table, So4Label,
};
use so42::chart::{assign_elements, commuting_set_census, madelung_sequence, racah_count};
use so42::constraint::fiber_descent;
use so42::ks::check_suite;
use so42::so42::{casimirs, label_states, verify_commutators, GeneratorSet};
use so42::spectrum::{hydrogen_degeneracy, oscillator_hydrogen_bridge, spectrum_row, System};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("tolerance must be a positive finite number".into())
    }
}

#[derive(Parser)]
#[command(name = "so42", version, about = "Verification suites for the so(4,2) engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Fock-space cutoff: columns keep total occupation <= n_max.
    #[arg(long, global = true, default_value_t = 14, value_parser = clap::value_parser!(u32).range(2..))]
    n_max: u32,

    /// Numerical tolerance for residual checks.
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = parse_tolerance)]
    tol: f64,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 2026)]
    seed: u64,

    /// Run independent checks on the rayon thread pool.
    #[arg(long, global = true)]
    parallel: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check all 105 generator commutators against the metric table.
    VerifyAlgebra,
    /// Evaluate the three invariant operators on the labeled tower.
    Casimirs,
    /// Run the exact centralizer/quotient chain from the oscillator algebra.
    Descent,
    /// Tabulate energies and level sizes; cross-check the 4-mode bridge.
    Spectrum,
    /// Compare branching tables with operator-level labeling.
    Branch,
    /// Test the quadratic map's identities on seeded random points.
    KsCheck {
        /// Number of random points.
        #[arg(long, default_value_t = 1000)]
        samples: u32,
    },
    /// Emit the chart rows built by the (n+l, n) filling order.
    Chart {
        /// Number of chart rows to fill completely.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        rows: u32,
    },
    /// Count the complete set of commuting operators.
    Census,
    /// Run every suite and conjoin their statuses.
    All,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyAlgebra => "verify-algebra",
            Command::Casimirs => "casimirs",
            Command::Descent => "descent",
            Command::Spectrum => "spectrum",
            Command::Branch => "branch",
            Command::KsCheck { .. } => "ks-check",
            Command::Chart { .. } => "chart",
            Command::Census => "census",
            Command::All => "all",
        }
    }
}

/// Everything one suite produces, ready for any output format.
struct Suite {
    pass: bool,
    /// JSON objects for the report's `results` array.
    results: Vec<Value>,
    /// Human-readable lines (one per check plus data summaries).
    text: Vec<String>,
    csv_header: String,
    csv_lines: Vec<String>,
}

fn check_line(name: &str, pass: bool, detail: &str) -> String {
    format!("[{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" })
}

fn pair_name(p: (u8, u8)) -> String {
    format!("J{}{}", p.0, p.1)
}

fn conventions() -> Value {
    json!({
        "metric": "diag(-1,-1,-1,-1,+1,+1)",
        "bracket": "[J_ab, J_cd] = i (g_bc J_ad - g_ac J_bd + g_ad J_bc - g_bd J_ac)",
        "generators": "J_ab realized as normal-ordered bilinears in four boson modes",
        "invariants": "C1 = -J_ab J^ab, C2 = eps_abcdef J^ab J^cd J^ef, C3 = J_ab J^bc J_cd J^da - J_ab J^ab",
        "fiber_orientation": "(z1, z2) -> (exp(i theta) z1, exp(-i theta) z2)",
        "spin_order": "m_s = -1/2 fills before +1/2",
    })
}

fn suite_verify_algebra(cli: &Cli) -> Result<Suite, String> {
    let gen = GeneratorSet::build(cli.n_max).map_err(|e| e.to_string())?;
    let report = verify_commutators(&gen, cli.parallel).map_err(|e| e.to_string())?;
    let worst = report.worst().clone();
    let pass = report.max_residual() < cli.tol;
    let detail = format!(
        "{} pairs on basis size {}, max residual {:e} at [{}, {}] (tol {:e})",
        report.checks.len(),
        gen.basis().size(),
        worst.residual,
        pair_name(worst.left),
        pair_name(worst.right),
        cli.tol
    );
    Ok(Suite {
        pass,
        results: vec![json!({
            "check": "commutator_table",
            "pairs": report.checks.len(),
            "basis_size": gen.basis().size(),
            "safe_total": report.safe_total,
            "max_residual": report.max_residual(),
            "worst_pair": [pair_name(worst.left), pair_name(worst.right)],
            "tolerance": cli.tol,
            "pass": pass,
        })],
        text: vec![check_line("commutator_table", pass, &detail)],
        csv_header: "left,right,residual".into(),
        csv_lines: report
            .checks
            .iter()
            .map(|c| format!("{},{},{:e}", pair_name(c.left), pair_name(c.right), c.residual))
            .collect(),
    })
}

fn suite_casimirs(cli: &Cli) -> Result<Suite, String> {
    let gen = GeneratorSet::build(cli.n_max).map_err(|e| e.to_string())?;
    let inv = casimirs(&gen, cli.parallel).map_err(|e| e.to_string())?;
    let window = inv.exact_level_window();
    if window == 0 {
        return Ok(Suite {
            pass: false,
            results: vec![json!({
                "check": "invariant_eigenvalues",
                "pass": false,
                "detail": format!("cutoff {} leaves no level exact under degree-4 polynomials; need n_max >= 6", cli.n_max),
            })],
            text: vec![check_line(
                "invariant_eigenvalues",
                false,
                &format!("cutoff {} too small; need n_max >= 6", cli.n_max),
            )],
            csv_header: "n,l,m,quadratic,cubic,quartic,residual".into(),
            csv_lines: vec![],
        });
    }
    let n_top = window.min(4);
    let states = label_states(&gen, n_top, 1e-8).map_err(|e| e.to_string())?;
    let evals = inv.evaluate_on(&states).map_err(|e| e.to_string())?;
    let worst = evals.iter().fold(0.0f64, |w, e| {
        w.max((e.quadratic - 6.0).abs())
            .max(e.cubic.abs())
            .max((e.quartic + 12.0).abs())
            .max(e.residual)
    });
    let pass = worst < cli.tol;
    let detail = format!(
        "{} states through level {n_top} carry (6, 0, -12); worst deviation {worst:e} (tol {:e})",
        evals.len(),
        cli.tol
    );
    Ok(Suite {
        pass,
        results: vec![json!({
            "check": "invariant_eigenvalues",
            "states": evals.len(),
            "levels_checked": n_top,
            "expected": [6.0, 0.0, -12.0],
            "worst_deviation": worst,
            "tolerance": cli.tol,
            "pass": pass,
            "evaluations": evals,
        })],
        text: vec![check_line("invariant_eigenvalues", pass, &detail)],
        csv_header: "n,l,m,quadratic,cubic,quartic,residual".into(),
        csv_lines: evals
            .iter()
            .map(|e| {
                format!(
                    "{},{},{},{:e},{:e},{:e},{:e}",
                    e.n, e.l, e.m, e.quadratic, e.cubic, e.quartic, e.residual
                )
            })
            .collect(),
    })
}

fn suite_descent(_cli: &Cli) -> Result<Suite, String> {
    let descent = fiber_descent().map_err(|e| e.to_string())?;
    let report = descent.report();
    let pass = report.parent_dim == 36
        && report.centralizer_dim == 16
        && report.quotient_dim == 15
        && report.killing_signature == (8, 7, 0)
        && report.rank == 3
        && descent.quotient_center_dim == 0
        && report.matches_reference;
    let detail = format!(
        "{} -> {} -> {}, Killing signature {:?}, rank {}, center dim {}, defining-rep match: {}",
        report.parent_dim,
        report.centralizer_dim,
        report.quotient_dim,
        report.killing_signature,
        report.rank,
        descent.quotient_center_dim,
        report.matches_reference
    );
    let report_json = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    let sig = report.killing_signature;
    Ok(Suite {
        pass,
        results: vec![json!({
            "check": "fiber_descent",
            "pass": pass,
            "report": report_json,
            "quotient_center_dim": descent.quotient_center_dim,
        })],
        text: vec![check_line("fiber_descent", pass, &detail)],
        csv_header: "key,value".into(),
        csv_lines: vec![
            format!("parent_dim,{}", report.parent_dim),
            format!("centralizer_dim,{}", report.centralizer_dim),
            format!("quotient_dim,{}", report.quotient_dim),
            format!("killing_signature,({} {} {})", sig.0, sig.1, sig.2),
            format!("rank,{}", report.rank),
            format!("quotient_center_dim,{}", descent.quotient_center_dim),
            format!("match,{}", report.matches_reference),
        ],
    })
}

fn suite_spectrum(_cli: &Cli) -> Result<Suite, String> {
    let mut rows = Vec::new();
    for n in 1..=10u32 {
        rows.push(spectrum_row(System::Hydrogen, 3, n).map_err(|e| e.to_string())?);
    }
    for n in 0..=10u32 {
        rows.push(spectrum_row(System::Oscillator, 4, n).map_err(|e| e.to_string())?);
    }

    let mut squares_ok = true;
    for n in 1..=10u64 {
        let d = hydrogen_degeneracy(3, n as u32).map_err(|e| e.to_string())?;
        squares_ok &= u64::try_from(d).map(|v| v == n * n).unwrap_or(false);
    }

    let mut bridge_ok = true;
    let mut bridge_json = Vec::new();
    for n in 1..=5u32 {
        let record = oscillator_hydrogen_bridge(n).map_err(|e| e.to_string())?;
        bridge_ok &= record.consistent
            && record.constrained_count == u64::from(n) * u64::from(n);
        bridge_json.push(serde_json::to_value(&record).map_err(|e| e.to_string())?);
    }

    let pass = squares_ok && bridge_ok;
    Ok(Suite {
        pass,
        results: vec![
            json!({
                "check": "level_sizes_dim3",
                "detail": "bound-level sizes equal n^2 through n = 10",
                "pass": squares_ok,
            }),
            json!({
                "check": "oscillator_bridge",
                "detail": "constrained 4-mode counts equal n^2; full counts equal the oscillator level sizes",
                "records": bridge_json,
                "pass": bridge_ok,
            }),
            json!({ "rows": rows }),
        ],
        text: vec![
            check_line("level_sizes_dim3", squares_ok, "n^2 through n = 10"),
            check_line("oscillator_bridge", bridge_ok, "levels 1..5 counted by enumeration"),
            format!("{} spectrum rows (hydrogen N=3, oscillator N=4)", rows.len()),
        ],
        csv_header: so42::spectrum::CSV_HEADER.into(),
        csv_lines: rows.iter().map(|r| r.csv_line()).collect(),
    })
}

fn suite_branch(cli: &Cli) -> Result<Suite, String> {
    let gen = GeneratorSet::build(cli.n_max).map_err(|e| e.to_string())?;
    let label_cap = cli.n_max / 2 + 1;
    let table_top = label_cap.min(4);
    let states = label_states(&gen, table_top, 1e-8).map_err(|e| e.to_string())?;

    let mut tables_ok = true;
    for n in 1..=table_top {
        let level: Vec<_> = states.iter().filter(|s| s.n == n).collect();
        tables_ok &= level.len() as u64 == u64::from(n) * u64::from(n);
        let mut ls: Vec<u32> = level.iter().filter(|s| s.m == 0).map(|s| s.l).collect();
        ls.sort_unstable();
        let expected = so4_to_so3(So4Label::balanced(n - 1)).map_err(|e| e.to_string())?;
        tables_ok &= ls == expected;
    }
    let so4_table = tower_so4_table(table_top);
    let so3_table = tower_so3_table(table_top);
    let expected_total: u64 = (1..=u64::from(table_top)).map(|n| n * n).sum();
    tables_ok &= so4_table.total_dimension() == expected_total
        && so3_table.total_dimension() == expected_total;

    let parity_top = label_cap.min(5);
    let tall = if parity_top == table_top {
        states
    } else {
        label_states(&gen, parity_top, 1e-8).map_err(|e| e.to_string())?
    };
    let split = so32_parity_split(&gen, &tall, cli.tol).map_err(|e| e.to_string())?;
    let parity_ok = split.closure_max_residual < cli.tol
        && split.parity_leak < cli.tol
        && split.control_leak > 0.99;

    let pass = tables_ok && parity_ok;
    let mut csv_lines = Vec::new();
    for (table_name, table) in [("tower_so4", &so4_table), ("tower_so3", &so3_table)] {
        for c in &table.constituents {
            csv_lines.push(format!(
                "{table_name},{},{},{},{}",
                table.parent, c.label, c.multiplicity, c.dim
            ));
        }
    }
    Ok(Suite {
        pass,
        results: vec![
            json!({
                "check": "branching_tables",
                "levels_checked": table_top,
                "total_dimension": expected_total,
                "pass": tables_ok,
               "tables": [so4_table, so3_table],
            }),
            json!({
                "check": "parity_split",
                "levels_checked": parity_top,
                "closure_max_residual": split.closure_max_residual,
                "parity_leak": split.parity_leak,
                "control_leak": split.control_leak,
                "tolerance": cli.tol,
                "pass": parity_ok,
            }),
        ],
        text: vec![
            check_line(
                "branching_tables",
                tables_ok,
                &format!("operator labels match tables through level {table_top}; dimension sum {expected_total}"),
            ),
            check_line(
                "parity_split",
                parity_ok,
                &format!(
                    "closure {:e}, parity leak {:e}, control {:.3}",
                    split.closure_max_residual, split.parity_leak, split.control_leak
                ),
            ),
        ],
        csv_header: "table,parent,constituent,multiplicity,dim".into(),
        csv_lines,
    })
}

fn suite_ks(cli: &Cli, samples: u32) -> Result<Suite, String> {
    let checks = check_suite(samples, cli.seed, cli.tol);
    let pass = checks.iter().all(|c| c.pass);
    let text = checks
        .iter()
        .map(|c| {
            check_line(
                &c.property,
                c.pass,
                &format!("{} samples, max error {:e} (tol {:e})", c.samples, c.max_error, c.tolerance),
            )
        })
        .collect();
    Ok(Suite {
        pass,
        results: checks
            .iter()
            .map(|c| serde_json::to_value(c).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?,
        text,
        csv_header: "property,samples,max_error,tolerance,pass".into(),
        csv_lines: checks
            .iter()
            .map(|c| {
                format!("{},{},{:e},{:e},{}", c.property, c.samples, c.max_error, c.tolerance, c.pass)
            })
            .collect(),
    })
}

fn suite_chart(_cli: &Cli, rows: u32) -> Result<Suite, String> {
    // Fill until the last subshell of row `rows` — (n, l) = (rows, rows-1) —
    // completes; every row-<=rows subshell precedes it in the filling order.
    let mut z_needed = 0u32;
    for count in 1.. {
        let shells = madelung_sequence(count);
        let last = shells[count - 1];
        z_needed += last.capacity();
        if last.n == rows && last.l == rows - 1 {
            break;
        }
    }
    let entries: Vec<_> = assign_elements(z_needed)
        .into_iter()
        .filter(|e| e.chart_row <= rows)
        .collect();

    let mut sizes_ok = true;
    let mut row_json = Vec::new();
    for n in 1..=rows {
        let members: Vec<_> = entries.iter().filter(|e| e.chart_row == n).collect();
        let expected = 2 * u64::from(n) * u64::from(n);
        sizes_ok &= members.len() as u64 == expected;
        row_json.push(json!({
            "row": n,
            "size": members.len(),
            "entries": members,
        }));
    }
    let mut slots: Vec<_> = entries.iter().map(|e| (e.n, e.l, e.m, e.two_m_s)).collect();
    slots.sort_unstable();
    slots.dedup();
    let unique_ok = slots.len() == entries.len();

    let pass = sizes_ok && unique_ok;
    Ok(Suite {
        pass,
        results: vec![
            json!({
                "check": "row_sizes",
                "rows": rows,
                "entries": entries.len(),
                "pass": sizes_ok,
            }),
            json!({
                "check": "unique_slots",
                "pass": unique_ok,
            }),
            json!({ "rows": row_json }),
        ],
        text: vec![
            check_line(
                "row_sizes",
                sizes_ok,
                &format!("rows 1..={rows} filled to 2n^2 each, {} entries", entries.len()),
            ),
            check_line("unique_slots", unique_ok, "every (n, l, m, m_s) used once"),
        ],
        csv_header: so42::chart::CSV_HEADER.into(),
        csv_lines: entries.iter().map(|e| e.csv_line()).collect(),
    })
}

fn suite_census(_cli: &Cli) -> Result<Suite, String> {
    let census = commuting_set_census();
    let racah_ok = racah_count(15, 3).map_err(|e| e.to_string())? == 3;
    let pass = census.total == 11
        && census.components[0].subtotal == 9
        && census.components[1].subtotal == 2
        && racah_ok;
    let detail = format!(
        "{} = {} labels",
        census
            .components
            .iter()
            .map(|c| format!("{} ({})", c.subtotal, c.algebra))
            .collect::<Vec<_>>()
            .join(" + "),
        census.total
    );
    Ok(Suite {
        pass,
        results: vec![json!({
            "check": "commuting_set_census",
            "census": census,
            "expected_total": 11,
            "pass": pass,
        })],
        text: vec![check_line("commuting_set_census", pass, &detail)],
        csv_header: "algebra,order,rank,cartan,casimir,racah,subtotal".into(),
        csv_lines: census
            .components
            .iter()
            .map(|c| {
                format!(
                    "{},{},{},{},{},{},{}",
                    c.algebra, c.order, c.rank, c.cartan, c.casimir, c.racah, c.subtotal
                )
            })
            .collect(),
    })
}

fn run_single(cli: &Cli, command: &Command) -> Result<Suite, String> {
    match command {
        Command::VerifyAlgebra => suite_verify_algebra(cli),
        Command::Casimirs => suite_casimirs(cli),
        Command::Descent => suite_descent(cli),
        Command::Spectrum => suite_spectrum(cli),
        Command::Branch => suite_branch(cli),
        Command::KsCheck { samples } => suite_ks(cli, *samples),
        Command::Chart { rows } => suite_chart(cli, *rows),
        Command::Census => suite_census(cli),
        Command::All => unreachable!("`all` is expanded by the caller"),
    }
}

fn run(cli: &Cli) -> Result<Suite, String> {
    if !matches!(cli.command, Command::All) {
        return run_single(cli, &cli.command);
    }
    let subcommands = [
        Command::VerifyAlgebra,
        Command::Casimirs,
        Command::Descent,
        Command::Spectrum,
        Command::Branch,
        Command::KsCheck { samples: 1000 },
        Command::Chart { rows: 4 },
        Command::Census,
    ];
    let mut pass = true;
    let mut results = Vec::new();
    let mut text = Vec::new();
    let mut csv_lines = Vec::new();
    for sub in &subcommands {
        let suite = run_single(cli, sub)?;
        pass &= suite.pass;
        results.push(json!({
            "command": sub.name(),
            "pass": suite.pass,
            "results": suite.results,
        }));
        text.push(format!("== {} ==", sub.name()));
        text.extend(suite.text);
        for line in &suite.csv_lines {
            csv_lines.push(format!("{},{}", sub.name(), line));
        }
    }
    text.push(format!("overall: {}", if pass { "PASS" } else { "FAIL" }));
    Ok(Suite {
        pass,
        results,
        text,
        csv_header: "command,fields...".into(),
        csv_lines,
    })
}

fn render(cli: &Cli, suite: &Suite) -> String {
    match cli.format {
        Format::Json => {
            let envelope = json!({
                "schema": 1,
                "command": cli.command.name(),
                "config": {
                    "n_max": cli.n_max,
                    "tol": cli.tol,
                    "format": cli.format.name(),
                    "seed": cli.seed,
                    "parallel": cli.parallel,
                },
                "results": suite.results,
                "conventions": conventions(),
                "pass": suite.pass,
            });
            let mut s = serde_json::to_string_pretty(&envelope).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::new();
            s.push_str(&suite.csv_header);
            s.push('\n');
            for line in &suite.csv_lines {
                s.push_str(line);
                s.push('\n');
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "so42 {} (n_max {}, tol {:e}, seed {})\n",
                cli.command.name(),
                cli.n_max,
                cli.tol,
                cli.seed
            );
            for line in &suite.text {
                s.push_str(line);
                s.push('\n');
            }
            if !matches!(cli.command, Command::All) {
                s.push_str(&format!("overall: {}\n", if suite.pass { "PASS" } else { "FAIL" }));
            }
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let suite = match run(&cli) {
        Ok(suite) => suite,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(1);
        }
    };
    let rendered = render(&cli, &suite);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(rendered.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::from(if suite.pass { 0 } else { 1 })
}
