//! Command-line interface.
//!
//! Exit codes: 0 — all checks pass / output written; 1 — a verification
//! failure (witness on stderr); 2 — usage or input error. Diagnostics go to
//! stderr, data to stdout or `--out-file`. Output bytes are independent of
//! `--jobs`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::chartab::{character_table, CharacterTable};
use crate::error::{Error, Result};
use crate::group::{build_family, build_from_pcp, FamilySpec, Group};
use crate::io::{
    append_records, parse_pcp, profile_record, read_records, record_to_csv, record_to_jsonl,
    table_to_csv, table_to_json, ResultRecord, RECORD_CSV_HEADER,
};
use crate::zeros::{
    self, mz, mz_scan, vanishing_bound, zero_profiles, MzEntry, VerificationReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "pgzero",
    version,
    about = "Exact character tables and vanishing-element statistics for finite groups"
)]
pub struct Cli {
    /// Worker threads; results are byte-identical for any value.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Serialization format for data output.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,

    /// Write data to this file instead of stdout.
    #[arg(long, global = true)]
    pub out_file: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the exact character table of one group.
    Table {
        /// Group spec: dihedral:16 | semidihedral:32 | quaternion:16 |
        /// extraspecial:5:exp5 | cyclic:9 | elemab:3:4 | sl23 |
        /// product:cyclic:2,dihedral:8 | pcp:<path>
        #[arg(long)]
        group: String,
    },
    /// Per-character vanishing and root-of-unity statistics.
    Zeros {
        #[arg(long)]
        group: String,
    },
    /// Minimum vanishing count over non-linear characters.
    Mz {
        #[arg(long)]
        group: Option<String>,
        /// Directory of presentation files of one fixed order to scan.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Check a statement: thmA | thmB | lemC2 | rel | corMS | con3max |
    /// conMZ | thmC | miller.
    Verify {
        statement: String,
        /// Group spec(s); repeatable.
        #[arg(long)]
        group: Vec<String>,
        /// Directory of presentation files to include.
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Largest n for the built-in 2-group catalog (thmA).
        #[arg(long, default_value_t = 9)]
        max_n: u32,
        /// The prime for corMS.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Analyze every presentation file in a directory and emit records.
    Scan { dir: PathBuf },
    /// Summarize persisted scan records per order p^n.
    Report {
        /// JSON-lines record file produced by `scan`.
        #[arg(long)]
        records: Option<PathBuf>,
        /// Restrict to one order, written as p^n (for example 7^5).
        #[arg(long)]
        order: Option<String>,
    },
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(j) = cli.jobs {
            builder = builder.num_threads(j.max(1));
        }
        match builder.build() {
            Ok(p) => p,
            Err(e) => {
                eprintln!("error: failed to build thread pool: {e}");
                return 2;
            }
        }
    };
    let code = pool.install(|| dispatch(&cli));
    match code {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Table { group } => {
            let (_, t) = analyze_spec(group)?;
            let data = match cli.out {
                OutFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&table_to_json(&t))
                        .expect("table serializes");
                    s.push('\n');
                    s
                }
                OutFormat::Csv => table_to_csv(&t),
            };
            write_output(cli, &data)?;
            Ok(0)
        }
        Command::Zeros { group } => {
            let (_, t) = analyze_spec(group)?;
            let records: Vec<ResultRecord> = zero_profiles(&t)?
                .iter()
                .map(|p| profile_record(&t, p))
                .collect();
            write_output(cli, &render_records(&records, cli.out))?;
            Ok(0)
        }
        Command::Mz { group, catalog } => match (group, catalog) {
            (Some(spec), None) => {
                let (_, t) = analyze_spec(spec)?;
                write_output(cli, &format!("{}\n", mz(&t)?))?;
                Ok(0)
            }
            (None, Some(dir)) => {
                let tables = load_catalog(dir)?;
                let entries: Vec<MzEntry> = tables
                    .iter()
                    .filter(|(g, _)| !g.is_abelian())
                    .map(|(_, t)| {
                        Ok(MzEntry {
                            label: t.label.clone(),
                            order: t.order,
                            mz: mz(t)?,
                        })
                    })
                    .collect::<Result<_>>()?;
                let (min, labels) = mz_scan(&entries)?;
                write_output(cli, &format!("{min}\nattained-by: {}\n", labels.join(" ")))?;
                Ok(0)
            }
            _ => Err(Error::Domain(
                "provide exactly one of --group or --catalog".into(),
            )),
        },
        Command::Verify {
            statement,
            group,
            catalog,
            max_n,
            p,
        } => {
            let reports = run_verify(statement, group, catalog.as_deref(), *max_n, *p)?;
            let mut failed = false;
            for r in &reports {
                if r.outcome.is_failure() {
                    failed = true;
                    eprintln!(
                        "FAIL {} {}: {}",
                        r.statement.as_str(),
                        r.group,
                        r.witness.join(" | ")
                    );
                }
            }
            write_output(cli, &render_reports(&reports, cli.out))?;
            Ok(if failed { 1 } else { 0 })
        }
        Command::Scan { dir } => run_scan(cli, dir),
        Command::Report { records, order } => run_report(cli, records.as_deref(), order.as_deref()),
    }
}

/// Build a group from a CLI spec: a family constructor or `pcp:<path>`.
pub fn build_group_spec(spec: &str) -> Result<Group> {
    if let Some(path) = spec.strip_prefix("pcp:") {
        let pres = parse_pcp(Path::new(path))?;
        build_from_pcp(&pres)
    } else {
        let family: FamilySpec = spec.parse()?;
        build_family(&family)
    }
}

fn analyze_spec(spec: &str) -> Result<(Group, CharacterTable)> {
    let g = build_group_spec(spec)?;
    let t = character_table(&g)?;
    Ok((g, t))
}

fn write_output(cli: &Cli, data: &str) -> Result<()> {
    match &cli.out_file {
        Some(path) => fs::write(path, data)?,
        None => print!("{data}"),
    }
    Ok(())
}

fn render_records(records: &[ResultRecord], out: OutFormat) -> String {
    let mut s = String::new();
    match out {
        OutFormat::Json => {
            for r in records {
                s.push_str(&record_to_jsonl(r));
                s.push('\n');
            }
        }
        OutFormat::Csv => {
            s.push_str(RECORD_CSV_HEADER);
            s.push('\n');
            for r in records {
                s.push_str(&record_to_csv(r));
                s.push('\n');
            }
        }
    }
    s
}

fn render_reports(reports: &[VerificationReport], out: OutFormat) -> String {
    let mut s = String::new();
    match out {
        OutFormat::Json => {
            for r in reports {
                s.push_str(&serde_json::to_string(r).expect("report serializes"));
                s.push('\n');
            }
        }
        OutFormat::Csv => {
            s.push_str("outcome,statement,group,witness\n");
            for r in reports {
                let witness = r.witness.join(" | ");
                let quoted = if witness.contains([',', '"', '\n']) {
                    format!("\"{}\"", witness.replace('"', "\"\""))
                } else {
                    witness
                };
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    r.outcome.as_str(),
                    r.statement.as_str(),
                    r.group,
                    quoted
                ));
            }
        }
    }
    s
}

/// Load and analyze every `*.json` presentation in a directory, in sorted
/// filename order.
fn load_catalog(dir: &Path) -> Result<Vec<(Group, CharacterTable)>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
        .collect();
    files.sort();
    if files.is_empty() {
        return Ok(Vec::new());
    }
    files
        .iter()
        .map(|path| {
            let pres = parse_pcp(path)?;
            let g = build_from_pcp(&pres)?;
            let t = character_table(&g)?;
            Ok((g, t))
        })
        .collect()
}

fn two_group_catalog(max_n: u32) -> Result<Vec<(Group, CharacterTable)>> {
    let mut specs = Vec::new();
    for n in 3..=max_n.max(3) {
        specs.push(FamilySpec::Dihedral(1 << n));
        if n >= 4 {
            specs.push(FamilySpec::Semidihedral(1 << n));
        }
        specs.push(FamilySpec::GeneralizedQuaternion(1 << n));
    }
    use rayon::prelude::*;
    specs
        .par_iter()
        .map(|spec| {
            let g = build_family(spec)?;
            let t = character_table(&g)?;
            Ok((g, t))
        })
        .collect()
}

fn run_verify(
    statement: &str,
    groups: &[String],
    catalog: Option<&Path>,
    max_n: u32,
    p: Option<u64>,
) -> Result<Vec<VerificationReport>> {
    let load_groups = |groups: &[String]| -> Result<Vec<(Group, CharacterTable)>> {
        let mut out = Vec::new();
        for spec in groups {
            out.push(analyze_spec(spec)?);
        }
        if let Some(dir) = catalog {
            out.extend(load_catalog(dir)?);
        }
        Ok(out)
    };
    let required = |items: &Vec<(Group, CharacterTable)>| -> Result<()> {
        if items.is_empty() {
            Err(Error::Domain(
                "this statement needs --group and/or --catalog".into(),
            ))
        } else {
            Ok(())
        }
    };
    match statement {
        "thmA" => {
            let mut items = two_group_catalog(max_n)?;
            items.extend(load_groups(groups)?);
            zeros::verify_thm_a(&items)
        }
        "thmB" => {
            let items = load_groups(groups)?;
            required(&items)?;
            let mut out = Vec::new();
            for (g, t) in &items {
                out.extend(zeros::verify_thm_b(g, t)?);
            }
            Ok(out)
        }
        "lemC2" => {
            let items = load_groups(groups)?;
            required(&items)?;
            items
                .iter()
                .map(|(g, t)| zeros::verify_lem_c2(g, t))
                .collect()
        }
        "rel" => {
            let items = load_groups(groups)?;
            required(&items)?;
            items.iter().map(|(_, t)| zeros::verify_rel(t)).collect()
        }
        "corMS" => {
            let p = p.ok_or_else(|| Error::Domain("corMS needs --p <prime>".into()))?;
            let items = load_groups(groups)?;
            zeros::verify_cor_ms(p, &items)
        }
        "con3max" => {
            let items = load_groups(groups)?;
            zeros::verify_con_3max(&items)
        }
        "conMZ" => {
            let items = load_groups(groups)?;
            zeros::verify_con_mz(&items)
        }
        "thmC" => {
            let items = load_groups(groups)?;
            required(&items)?;
            items
                .iter()
                .map(|(g, t)| zeros::verify_thm_c(g, t))
                .collect()
        }
        "miller" => {
            let items = load_groups(groups)?;
            required(&items)?;
            items
                .iter()
                .map(|(g, t)| zeros::verify_miller(g, t))
                .collect()
        }
        other => Err(Error::Domain(format!(
            "unknown statement '{other}' (expected thmA|thmB|lemC2|rel|corMS|con3max|conMZ|thmC|miller)"
        ))),
    }
}

fn run_scan(cli: &Cli, dir: &Path) -> Result<i32> {
    if cli.out == OutFormat::Csv && cli.out_file.is_some() {
        return Err(Error::Domain(
            "scan persistence is JSON lines; use --out csv only without --out-file".into(),
        ));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
        .collect();
    files.sort();
    if files.is_empty() {
        eprintln!("scan: no presentation files in {}", dir.display());
        return Ok(0);
    }
    use rayon::prelude::*;
    let results: Vec<std::result::Result<Vec<ResultRecord>, String>> = files
        .par_iter()
        .map(|path| {
            let work = || -> Result<Vec<ResultRecord>> {
                let pres = parse_pcp(path)?;
                let g = build_from_pcp(&pres)?;
                let t = character_table(&g)?;
                Ok(zero_profiles(&t)?
                    .iter()
                    .map(|p| profile_record(&t, p))
                    .collect())
            };
            work().map_err(|e| format!("{}: {e}", path.display()))
        })
        .collect();

    let mut records = Vec::new();
    let mut had_error = false;
    for res in results {
        match res {
            Ok(mut recs) => records.append(&mut recs),
            Err(msg) => {
                had_error = true;
                eprintln!("scan: {msg}");
            }
        }
    }
    match &cli.out_file {
        Some(path) => {
            let (appended, skipped) = append_records(path, &records)?;
            eprintln!(
                "scan: {} files, {appended} records appended, {skipped} already present",
                files.len()
            );
        }
        None => {
            print!("{}", render_records(&records, cli.out));
        }
    }
    Ok(if had_error { 2 } else { 0 })
}

fn parse_order_arg(s: &str) -> Result<(u64, u32)> {
    let parts: Vec<&str> = s.split('^').collect();
    if let [p, n] = parts.as_slice() {
        if let (Ok(p), Ok(n)) = (p.parse::<u64>(), n.parse::<u32>()) {
            return Ok((p, n));
        }
    }
    Err(Error::Domain(format!(
        "order must be written as p^n, got '{s}'"
    )))
}

fn run_report(cli: &Cli, records: Option<&Path>, order: Option<&str>) -> Result<i32> {
    let recs = match records {
        Some(path) => read_records(path)?,
        None => Vec::new(),
    };
    let order_filter = order.map(parse_order_arg).transpose()?;

    // group records by (p, n), then by group label
    use std::collections::BTreeMap;
    let mut by_order: BTreeMap<(u64, u32), BTreeMap<String, Vec<&ResultRecord>>> = BTreeMap::new();
    for r in &recs {
        if let (Some(p), Some(n)) = (r.prime, r.n) {
            if let Some((fp, fn_)) = order_filter {
                if (p, n) != (fp, fn_) {
                    continue;
                }
            }
            by_order
                .entry((p, n))
                .or_default()
                .entry(r.group.clone())
                .or_default()
                .push(r);
        }
    }
    if let Some((p, n)) = order_filter {
        by_order.entry((p, n)).or_default();
    }

    let mut summaries = Vec::new();
    for (&(p, n), groups) in &by_order {
        let bound = vanishing_bound(p, n);
        let mut entries: Vec<MzEntry> = Vec::new();
        for (label, rows) in groups {
            let min_nonlinear = rows
                .iter()
                .filter(|r| !r.flags.iter().any(|f| f == "linear"))
                .map(|r| r.zero_elements)
                .min();
            if let Some(mz) = min_nonlinear {
                entries.push(MzEntry {
                    label: label.clone(),
                    order: p.pow(n),
                    mz,
                });
            }
        }
        let scan = if entries.is_empty() {
            None
        } else {
            Some(mz_scan(&entries)?)
        };
        let mut notes: Vec<String> = Vec::new();
        match &scan {
            Some((min, labels)) => {
                let relation = if *min == bound { "equals" } else { "exceeds" };
                notes.push(format!(
                    "minimum vanishing count over {} non-abelian groups = {min} ({relation} the bound {bound}); attained by [{}]",
                    entries.len(),
                    labels.join(", ")
                ));
            }
            None => notes.push(format!(
                "no non-abelian records ingested for order {p}^{n}; bound value is {bound} (scope-limited report)"
            )),
        }
        if (p, n) == (7, 5) {
            notes.push(format!(
                "order 7^5 minimum vanishing count: formula value {} vs literature-reported value 1448 — DISCREPANCY FLAG: the two disagree; both are reported verbatim and neither is corrected here",
                vanishing_bound(7, 5)
            ));
        }
        summaries.push((p, n, bound, scan, notes));
    }

    for (p, n, _, _, notes) in &summaries {
        for note in notes {
            eprintln!("report: order {p}^{n}: {note}");
        }
    }

    let data = match cli.out {
        OutFormat::Json => {
            let items: Vec<serde_json::Value> = summaries
                .iter()
                .map(|(p, n, bound, scan, notes)| {
                    serde_json::json!({
                        "prime": p,
                        "n": n,
                        "bound": bound,
                        "min_vanishing": scan.as_ref().map(|(m, _)| *m),
                        "attained_by": scan.as_ref().map(|(_, l)| l.clone()),
                        "notes": notes,
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&items).expect("summary serializes");
            s.push('\n');
            s
        }
        OutFormat::Csv => {
            let mut s = String::from("prime,n,bound,min_vanishing,attained_by,notes\n");
            for (p, n, bound, scan, notes) in &summaries {
                let (min, labels) = match scan {
                    Some((m, l)) => (m.to_string(), l.join(";")),
                    None => (String::new(), String::new()),
                };
                s.push_str(&format!(
                    "{p},{n},{bound},{min},{labels},\"{}\"\n",
                    notes.join(" | ").replace('"', "\"\"")
                ));
            }
            s
        }
    };
    write_output(cli, &data)?;
    Ok(0)
}
