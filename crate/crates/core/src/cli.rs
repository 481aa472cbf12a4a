//! Command-line front end. `execute` maps an argument vector to an exit code
//! and a finished report; nothing here touches stdout except `main_entry`.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::fp::{abelianization, semidirect_presentation, AutomorphismData, Presentation};
use crate::frobenius::bs_identity_check;
use crate::group::{build_group, FiniteGroup, GroupSpec};
use crate::growth::{congruence_check, growth, Method, Source};
use crate::hom::{count_constrained, count_homs, verify_torsor, ClassConstraint, EnumConfig, DEFAULT_BUDGET};
use crate::symchar::character_table;
use crate::verify::{run_criterion, CRITERIA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub const MIN_BUDGET: u64 = 10_000;
pub const BUDGET_ENV: &str = "HOMCOUNT_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "homcount", version, about = "Count homomorphisms into finite groups")]
struct Cli {
    /// Budget in relator-letter evaluations (e.g. 100000000 or 1e8)
    #[arg(long, global = true, value_parser = parse_budget)]
    budget: Option<u64>,
    /// Worker threads for enumeration
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group inspection
    #[command(subcommand)]
    Group(GroupCommand),
    /// Homomorphism counts by enumeration
    #[command(subcommand)]
    Hom(HomCommand),
    /// Restriction from a mapping torus
    #[command(subcommand)]
    Torsor(TorsorCommand),
    /// u_n and v_n for surface groups of genus 1..max-genus
    SurfaceTable {
        #[arg(long, default_value_t = 5)]
        max_genus: usize,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
    },
    /// Subgroup growth of a presentation or a surface group
    Growth(GrowthArgs),
    /// Symmetric group character tables
    #[command(subcommand)]
    Char(CharCommand),
    /// Baumslag-Solitar word sums against Adams operations
    #[command(subcommand)]
    Bs(BsCommand),
    /// Built-in end-to-end checks
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    Info {
        #[arg(long)]
        group: String,
    },
}

#[derive(Args, Debug)]
struct HomArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    pres: String,
}

#[derive(Subcommand, Debug)]
enum HomCommand {
    Count(HomArgs),
    Constrained {
        #[command(flatten)]
        target: HomArgs,
        /// `<word>@<element label>` or `<word>@#<class id>`
        #[arg(long = "constrain", required = true)]
        constraints: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum TorsorCommand {
    Verify {
        #[command(flatten)]
        target: HomArgs,
        /// `<gen> -> <word>; ...`, unlisted generators are fixed
        #[arg(long, default_value = "")]
        sigma: String,
        #[arg(long = "constrain")]
        constraints: Vec<String>,
    },
}

#[derive(Args, Debug)]
struct GrowthArgs {
    #[arg(long, conflicts_with = "genus", required_unless_present = "genus")]
    pres: Option<String>,
    #[arg(long)]
    genus: Option<usize>,
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Brute,
    Character,
}

#[derive(Subcommand, Debug)]
enum CharCommand {
    Table {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum BsCommand {
    Check {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    Paper {
        /// Run only these criteria
        #[arg(long = "criterion")]
        criteria: Vec<u8>,
    },
}

fn parse_budget(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    if let Some((mantissa, exp)) = s.split_once(['e', 'E']) {
        let m: u64 = mantissa.parse().map_err(|_| format!("bad budget {s}"))?;
        let e: u32 = exp.parse().map_err(|_| format!("bad budget {s}"))?;
        return 10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(|| format!("budget {s} overflows"));
    }
    Err(format!("bad budget {s}"))
}

/// Run-wide settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub budget: u64,
    pub workers: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    fn enum_config(&self) -> EnumConfig {
        EnumConfig { budget: self.budget, workers: self.workers }
    }
}

/// A failure with its exit status and a stable machine-readable reason.
struct Failure {
    code: i32,
    reason: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, reason) = match &e {
            Error::BudgetExceeded { .. } => (EXIT_BUDGET, "budget_exceeded"),
            Error::SigmaInconsistent(_) => (EXIT_VERIFICATION_FAILED, "sigma_inconsistent"),
            Error::OracleMismatch(_) => (EXIT_VERIFICATION_FAILED, "oracle_mismatch"),
            Error::NonIntegerResult(_) => (EXIT_VERIFICATION_FAILED, "non_integer_result"),
            Error::InvalidSpec(_) => (EXIT_USAGE, "invalid_spec"),
            Error::CayleyValidationFailed(_) => (EXIT_USAGE, "cayley_validation_failed"),
            Error::Parse(_) => (EXIT_USAGE, "parse_error"),
            Error::SizeMismatch(_) => (EXIT_USAGE, "size_mismatch"),
            Error::InvalidConstraint(_) => (EXIT_USAGE, "invalid_constraint"),
            Error::BoundExceeded(_) => (EXIT_USAGE, "bound_exceeded"),
            Error::BadConstantTerm { .. } => (EXIT_USAGE, "bad_constant_term"),
            Error::IndexOutOfRange(_) => (EXIT_USAGE, "index_out_of_range"),
            Error::InvalidTable(_) => (EXIT_USAGE, "invalid_table"),
            Error::Io(_) => (EXIT_USAGE, "io_error"),
        };
        Failure { code, reason, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, reason: "usage", message: message.into() }
}

/// A finished report in all the shapes the command supports.
struct Report {
    json: Value,
    text: String,
    csv: Option<String>,
    pass: bool,
}

impl Report {
    fn new(json: Value, text: String) -> Self {
        Report { json, text, csv: None, pass: true }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json");
                s.push('\n');
                s
            }
            Format::Text => self.text.clone(),
            Format::Csv => self.csv.clone().unwrap_or_else(|| flat_csv(&self.json)),
        }
    }
}

/// `key,value` rows for the scalar fields of a report.
fn flat_csv(v: &Value) -> String {
    let mut out = String::from("key,value\n");
    if let Value::Object(map) = v {
        for (k, x) in map {
            match x {
                Value::String(s) => {
                    let _ = writeln!(out, "{k},{}", csv_field(s));
                }
                Value::Bool(b) => {
                    let _ = writeln!(out, "{k},{b}");
                }
                Value::Null => {
                    let _ = writeln!(out, "{k},");
                }
                _ => {}
            }
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn num(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn nums<T: ToString>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(|x| num(x.to_string())).collect())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn load_group(spec: &str) -> Result<(GroupSpec, FiniteGroup), Failure> {
    let spec: GroupSpec = spec.parse()?;
    let g = build_group(&spec)?;
    Ok((spec, g))
}

/// Parses `<word>@<element label>` or `<word>@#<class id>`.
fn parse_constraint(text: &str, p: &Presentation, g: &FiniteGroup) -> Result<ClassConstraint, Failure> {
    let (word, class) = text
        .rsplit_once('@')
        .ok_or_else(|| Error::InvalidConstraint(format!("expected <word>@<class>, got {text:?}")))?;
    let word = crate::fp::parse_word(word, &p.generator_names)?;
    let class = class.trim();
    let id = if let Some(id) = class.strip_prefix('#') {
        let id: usize = id.trim().parse().map_err(|_| Error::InvalidConstraint(format!("bad class id {id:?}")))?;
        if id >= g.class_count() {
            return Err(Error::InvalidConstraint(format!("{} has {} classes", g.name(), g.class_count())).into());
        }
        id
    } else {
        let x = g
            .parse_element(class)
            .ok_or_else(|| Error::InvalidConstraint(format!("no element {class:?} in {}", g.name())))?;
        g.class_of(x)
    };
    Ok(ClassConstraint::new(vec![word], id))
}

fn constraint_json(c: &ClassConstraint, p: &Presentation, g: &FiniteGroup) -> Value {
    let class = &g.conjugacy_classes()[c.class_id];
    json!({
        "word": c.words[0].display(&p.generator_names).to_string(),
        "class": num(c.class_id),
        "class_representative": g.label(class.representative),
        "class_size": num(class.size),
    })
}

fn abelianization_json(p: &Presentation) -> (Value, String, bool) {
    let ab = abelianization(p);
    let mut parts: Vec<String> = ab.torsion_divisors.iter().map(|d| format!("Z/{d}")).collect();
    if ab.free_rank > 0 {
        parts.insert(0, if ab.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", ab.free_rank) });
    }
    let text = if parts.is_empty() { "1".to_string() } else { parts.join(" x ") };
    let v = json!({ "free_rank": num(ab.free_rank), "torsion": nums(&ab.torsion_divisors), "structure": text });
    (v, text, ab.is_infinite())
}

fn group_info(spec: &str) -> Result<Report, Failure> {
    let (spec, g) = load_group(spec)?;
    let mut classes = Vec::new();
    let mut text = format!("group {spec}: order {}, {} classes\n", g.order(), g.class_count());
    let _ = writeln!(text, "{:>4} {:>8} {:>10} {:>6}  representative", "id", "size", "centralizer", "order");
    let mut csv = String::from("id,size,centralizer_order,element_order,representative\n");
    for c in g.conjugacy_classes() {
        let label = g.label(c.representative);
        let order = g.element_order(c.representative);
        let mut entry = Map::new();
        entry.insert("id".into(), num(c.id));
        entry.insert("size".into(), num(c.size));
        entry.insert("centralizer_order".into(), num(c.centralizer_order));
        entry.insert("element_order".into(), num(order));
        entry.insert("representative".into(), Value::String(label.clone()));
        if let Some(ct) = g.cycle_type(c.representative) {
            entry.insert("cycle_type".into(), nums(&ct));
        }
        classes.push(Value::Object(entry));
        let _ = writeln!(text, "{:>4} {:>8} {:>10} {:>6}  {label}", c.id, c.size, c.centralizer_order, order);
        let _ = writeln!(csv, "{},{},{},{},{}", c.id, c.size, c.centralizer_order, order, csv_field(&label));
    }
    let json = json!({
        "group": spec.to_string(),
        "order": num(g.order()),
        "class_count": num(g.class_count()),
        "classes": classes,
    });
    let mut r = Report::new(json, text);
    r.csv = Some(csv);
    Ok(r)
}

fn hom_count(args: &HomArgs, constraints: &[String], cfg: &EnumConfig) -> Result<Report, Failure> {
    let (spec, g) = load_group(&args.group)?;
    let p = Presentation::parse(&args.pres)?;
    let cs = constraints.iter().map(|c| parse_constraint(c, &p, &g)).collect::<Result<Vec<_>, _>>()?;
    let count = if cs.is_empty() { count_homs(&p, &g, cfg)? } else { count_constrained(&p, &g, &cs, cfg)? };
    let quotient = BigRational::new(BigInt::from(count), BigInt::from(g.order()));
    let divisible = quotient.is_integer();
    let (ab_json, ab_text, infinite) = abelianization_json(&p);
    let mut json = json!({
        "group": spec.to_string(),
        "group_order": num(g.order()),
        "presentation": p.display(),
        "count": num(count),
        "quotient": num(&quotient),
        "divisible": divisible,
        "abelianization": ab_json,
        "infinite_abelianization": infinite,
    });
    let mut text = format!(
        "presentation: {}\ngroup: {spec} (order {})\nabelianization: {ab_text}\n",
        p.display(),
        g.order()
    );
    if !cs.is_empty() {
        json["constraints"] = Value::Array(cs.iter().map(|c| constraint_json(c, &p, &g)).collect());
        for c in &cs {
            let class = &g.conjugacy_classes()[c.class_id];
            let _ = writeln!(
                text,
                "constraint: {} in class {} ({}, size {})",
                c.words[0].display(&p.generator_names),
                c.class_id,
                g.label(class.representative),
                class.size
            );
        }
    }
    let _ = writeln!(text, "count: {count}\nquotient: {quotient}\ndivisible: {divisible}");
    Ok(Report::new(json, text))
}

fn torsor(args: &HomArgs, sigma: &str, constraints: &[String], cfg: &EnumConfig) -> Result<Report, Failure> {
    let (spec, g) = load_group(&args.group)?;
    let p = Presentation::parse(&args.pres)?;
    let sigma = AutomorphismData::parse(sigma, &p.generator_names)?;
    let cs = constraints.iter().map(|c| parse_constraint(c, &p, &g)).collect::<Result<Vec<_>, _>>()?;
    let tilde = semidirect_presentation(&p, &sigma)?;
    let r = verify_torsor(&p, &sigma, &g, if cs.is_empty() { None } else { Some(&cs) }, cfg)?;
    let sigma_text = sigma
        .images
        .iter()
        .enumerate()
        .map(|(i, w)| format!("{} -> {}", p.generator_names[i], w.display(&p.generator_names)))
        .collect::<Vec<_>>()
        .join("; ");
    let bad_fibers = r.fibers.iter().filter(|f| f.fiber_size != 0 && f.fiber_size != f.stabilizer_order).count();
    let nonempty = r.fibers.iter().filter(|f| f.fiber_size > 0).count();
    let mut json = json!({
        "group": spec.to_string(),
        "group_order": num(r.group_order),
        "presentation": p.display(),
        "sigma": sigma_text,
        "mapping_torus": tilde.display(),
        "upstairs_count": num(r.upstairs_count),
        "downstairs_count": num(r.downstairs_count),
        "twisted_count": num(r.twisted_count),
        "nonempty_fibers": num(nonempty),
        "mismatched_fibers": num(bad_fibers),
        "stray_restrictions": num(r.stray_restrictions),
        "orbit_count": num(r.orbit_count),
        "quotient": num(&r.quotient),
        "fiber_condition": r.fiber_condition,
        "support_matches_twisted_set": r.support_matches_twisted_set,
        "mass_identity": r.mass_identity,
        "pass": r.pass,
    });
    if !cs.is_empty() {
        json["constraints"] = Value::Array(cs.iter().map(|c| constraint_json(c, &p, &g)).collect());
    }
    let mut text = String::new();
    let _ = writeln!(text, "presentation: {}", p.display());
    let _ = writeln!(text, "sigma: {sigma_text}");
    let _ = writeln!(text, "mapping torus: {}", tilde.display());
    let _ = writeln!(text, "group: {spec} (order {})", r.group_order);
    let _ = writeln!(text, "upstairs homs: {}", r.upstairs_count);
    let _ = writeln!(text, "downstairs homs: {} ({} twisted-fixed)", r.downstairs_count, r.twisted_count);
    let _ = writeln!(text, "fibers: {nonempty} nonempty, {bad_fibers} of wrong size");
    let _ = writeln!(text, "upstairs / |G| = {}, twisted orbits = {}", r.quotient, r.orbit_count);
    let _ = writeln!(text, "{}", if r.pass { "PASS" } else { "FAIL" });
    let mut report = Report::new(json, text);
    report.pass = r.pass;
    Ok(report)
}

fn table_csv(name: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    for (g, row) in rows.iter().enumerate() {
        let _ = writeln!(out, "{name},{},{}", g + 1, row.join(","));
    }
    out
}

fn surface(max_genus: usize, max_n: usize) -> Result<Report, Failure> {
    if max_genus == 0 || max_n == 0 {
        return Err(usage("--max-genus and --max-n must be at least 1"));
    }
    let rows = crate::growth::surface_table(max_genus, max_n)?;
    let u: Vec<Vec<String>> = rows.iter().map(|r| r.u.iter().map(|x| x.to_string()).collect()).collect();
    let v: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.v.as_ref().expect("surface groups have integral v").iter().map(|x| x.to_string()).collect())
        .collect();
    let header: Vec<String> = (1..=max_n).map(|n| n.to_string()).collect();
    let mut csv = format!("table,g,{}\n", header.join(","));
    csv.push_str(&table_csv("u", &u));
    csv.push_str(&table_csv("v", &v));

    let mut text = String::new();
    for (name, t) in [("u_n", &u), ("v_n", &v)] {
        let widths: Vec<usize> = (0..max_n)
            .map(|j| t.iter().map(|r| r[j].len()).max().unwrap_or(1).max(header[j].len()))
            .collect();
        let _ = write!(text, "{name}\n{:>3}", "g\\n");
        for (j, w) in widths.iter().enumerate() {
            let _ = write!(text, "  {:>w$}", header[j]);
        }
        text.push('\n');
        for (g, row) in t.iter().enumerate() {
            let _ = write!(text, "{:>3}", g + 1);
            for (j, w) in widths.iter().enumerate() {
                let _ = write!(text, "  {:>w$}", row[j]);
            }
            text.push('\n');
        }
        text.push('\n');
    }
    let json = json!({
        "max_genus": num(max_genus),
        "max_n": num(max_n),
        "u": u,
        "v": v,
        "hom_counts": rows.iter().map(|r| nums(&r.hom_counts)).collect::<Vec<_>>(),
    });
    let mut r = Report::new(json, text);
    r.csv = Some(csv);
    Ok(r)
}

fn growth_report(args: &GrowthArgs, cfg: &EnumConfig) -> Result<Report, Failure> {
    let source = match (&args.pres, args.genus) {
        (Some(p), None) => Source::Presentation(Presentation::parse(p)?),
        (None, Some(g)) => Source::Genus(g),
        _ => return Err(usage("give exactly one of --pres and --genus")),
    };
    let method = match (args.method, &source) {
        (Some(MethodArg::Brute), _) | (None, Source::Presentation(_)) => Method::Brute,
        (Some(MethodArg::Character), _) | (None, Source::Genus(_)) => Method::Character,
    };
    let res = growth(&source, args.max_n, method, cfg)?;
    let mut congruences = Vec::new();
    for p in [2u64, 3, 5, 7] {
        let mut k = 0;
        while p.pow(k + 1) as usize <= res.u.len() {
            congruences.push((p, k, congruence_check(&res.u, p, k)?));
            k += 1;
        }
    }
    let presentation = source.presentation().display();
    let json = json!({
        "presentation": presentation,
        "method": if method == Method::Brute { "brute" } else { "character" },
        "max_n": num(args.max_n),
        "hom_counts": nums(&res.hom_counts),
        "u": nums(&res.u),
        "v": res.v.as_ref().map(|v| nums(v)).unwrap_or(Value::Null),
        "infinite_abelianization": res.infinite_abelianization,
        "congruences": congruences
            .iter()
            .map(|&(p, k, ok)| json!({ "p": num(p), "k": num(k), "holds": ok }))
            .collect::<Vec<_>>(),
    });
    let mut text = format!("presentation: {presentation}\n");
    let _ = writeln!(text, "h: {}", join(&res.hom_counts));
    let _ = writeln!(text, "u: {}", join(&res.u));
    match &res.v {
        Some(v) => {
            let _ = writeln!(text, "v: {}", join(v));
        }
        None => text.push_str("v: not integral\n"),
    }
    for (p, k, ok) in &congruences {
        let _ = writeln!(text, "u({p}^{}) = u({p}^{k}) mod {p}^{}: {ok}", k + 1, k + 1);
    }
    let mut csv = String::from("n,h,u,v\n");
    for n in 1..=args.max_n {
        let v = res.v.as_ref().map(|v| v[n - 1].to_string()).unwrap_or_default();
        let _ = writeln!(csv, "{n},{},{},{v}", res.hom_counts[n], res.u[n - 1]);
    }
    let mut r = Report::new(json, text);
    r.csv = Some(csv);
    Ok(r)
}

fn char_table(n: usize) -> Result<Report, Failure> {
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let t = character_table(n)?;
    let classes: Vec<String> = t.partitions.iter().map(|p| p.to_string()).collect();
    let chars: Vec<String> = classes.clone();
    let mut csv = format!("chi,{}\n", classes.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
    let mut text = format!("S{n}: order {}\n", t.order());
    let width = classes.iter().map(|c| c.len()).max().unwrap_or(1).max(3);
    let _ = write!(text, "{:>width$}", "");
    for c in &classes {
        let _ = write!(text, " {c:>width$}");
    }
    text.push('\n');
    let _ = write!(text, "{:>width$}", "|C|");
    for s in t.class_sizes() {
        let _ = write!(text, " {s:>width$}");
    }
    text.push('\n');
    for (l, row) in t.values.iter().enumerate() {
        let _ = write!(text, "{:>width$}", chars[l]);
        for x in row {
            let _ = write!(text, " {x:>width$}");
        }
        text.push('\n');
        let _ = writeln!(csv, "{},{}", csv_field(&chars[l]), join(row).replace(", ", ","));
    }
    let json = json!({
        "n": num(n),
        "order": num(t.order()),
        "classes": classes,
        "class_sizes": nums(t.class_sizes()),
        "characters": chars,
        "values": t.values.iter().map(|r| nums(r)).collect::<Vec<_>>(),
    });
    let mut r = Report::new(json, text);
    r.csv = Some(csv);
    Ok(r)
}

fn bs_check(degree: usize, m: i64, n: i64, cfg: &EnumConfig) -> Result<Report, Failure> {
    let r = bs_identity_check(degree, m, n, cfg)?;
    let mut text = format!("S{degree}, x^-{m} y x^{n} y^-1\n");
    let mut csv = String::from("chi,degree,weighted_s,adams_inner\n");
    for row in &r.rows {
        let _ = writeln!(
            text,
            "{:>12}  chi(1) s = {:>6}  <Psi^m chi, Psi^n chi> = {:>6}",
            row.partition.to_string(),
            row.weighted_s.to_string(),
            row.adams_inner.to_string()
        );
        let _ = writeln!(csv, "{},{},{},{}", csv_field(&row.partition.to_string()), row.degree, row.weighted_s, row.adams_inner);
    }
    let _ = writeln!(text, "#Hom = {} (|G| = {})", r.hom_count, r.group_order);
    if let Some(s) = r.m_stable_classes {
        let _ = writeln!(text, "classes with C^{m} = C: {s}");
    }
    let _ = writeln!(text, "{}", if r.pass { "PASS" } else { "FAIL" });
    let json = json!({
        "degree": num(degree),
        "m": num(m),
        "n": num(n),
        "rows": r.rows.iter().map(|row| json!({
            "partition": row.partition.to_string(),
            "degree": num(&row.degree),
            "weighted_s": num(&row.weighted_s),
            "adams_inner": num(&row.adams_inner),
        })).collect::<Vec<_>>(),
        "hom_count": num(r.hom_count),
        "group_order": num(r.group_order),
        "m_stable_classes": r.m_stable_classes.map(num).unwrap_or(Value::Null),
        "pass": r.pass,
    });
    let mut report = Report::new(json, text);
    report.csv = Some(csv);
    report.pass = r.pass;
    Ok(report)
}

fn verify_suite(criteria: &[u8], cfg: &EnumConfig) -> Result<Report, Failure> {
    let ids: Vec<u8> = if criteria.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { criteria.to_vec() };
    if let Some(bad) = ids.iter().find(|id| !CRITERIA.iter().any(|c| c.0 == **id)) {
        return Err(usage(format!("no criterion {bad}; valid ids are 1..={}", CRITERIA.len())));
    }
    let outcomes: Vec<_> = ids.iter().map(|&id| run_criterion(id, cfg)).collect();
    let pass = outcomes.iter().all(|o| o.pass);
    let mut text = String::new();
    let mut csv = String::from("id,name,pass,detail\n");
    for o in &outcomes {
        let _ = writeln!(text, "{o}");
        let _ = writeln!(csv, "{},{},{},{}", o.id, csv_field(o.name), o.pass, csv_field(&o.detail));
    }
    let _ = writeln!(text, "{} of {} criteria pass", outcomes.iter().filter(|o| o.pass).count(), outcomes.len());
    let json = json!({
        "criteria": outcomes.iter().map(|o| json!({
            "id": num(o.id),
            "name": o.name,
            "pass": o.pass,
            "detail": o.detail,
        })).collect::<Vec<_>>(),
        "pass": pass,
    });
    let mut r = Report::new(json, text);
    r.csv = Some(csv);
    r.pass = pass;
    Ok(r)
}

fn failure_report(f: &Failure, format: Format) -> String {
    match format {
        Format::Json => {
            let v = json!({
                "status": "error",
                "exit_code": num(f.code),
                "reason": f.reason,
                "message": f.message,
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        Format::Csv => format!("status,reason,message\nerror,{},{}\n", f.reason, csv_field(&f.message)),
        Format::Text => format!("error ({}): {}\n", f.reason, f.message),
    }
}

/// The budget from the flag, else the environment, else the default.
fn resolve_budget(flag: Option<u64>, env: Option<String>) -> Result<u64, Failure> {
    let budget = match (flag, env) {
        (Some(b), _) => b,
        (None, Some(s)) => parse_budget(&s).map_err(|e| usage(format!("{BUDGET_ENV}: {e}")))?,
        (None, None) => DEFAULT_BUDGET,
    };
    if budget < MIN_BUDGET {
        return Err(usage(format!("budget must be at least {MIN_BUDGET}")));
    }
    Ok(budget)
}

fn dispatch(cli: &Cli, cfg: &EnumConfig) -> Result<Report, Failure> {
    match &cli.command {
        Command::Group(GroupCommand::Info { group }) => group_info(group),
        Command::Hom(HomCommand::Count(args)) => hom_count(args, &[], cfg),
        Command::Hom(HomCommand::Constrained { target, constraints }) => hom_count(target, constraints, cfg),
        Command::Torsor(TorsorCommand::Verify { target, sigma, constraints }) => {
            torsor(target, sigma, constraints, cfg)
        }
        Command::SurfaceTable { max_genus, max_n } => surface(*max_genus, *max_n),
        Command::Growth(args) => growth_report(args, cfg),
        Command::Char(CharCommand::Table { n }) => char_table(*n),
        Command::Bs(BsCommand::Check { degree, m, n }) => bs_check(*degree, *m, *n, cfg),
        Command::Verify(VerifyCommand::Paper { criteria }) => verify_suite(criteria, cfg),
    }
}

/// Runs one invocation. `argv[0]` is the program name. Returns the exit
/// status and the report; with `--output` the report is also written there.
pub fn execute<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let (code, report, _) = run(argv);
    (code, report)
}

fn run<I, T>(argv: I) -> (i32, String, bool)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string(), false);
        }
    };
    let run = match resolve_budget(cli.budget, std::env::var(BUDGET_ENV).ok()) {
        Ok(budget) => RunConfig {
            budget,
            workers: cli.workers.unwrap_or_else(|| EnumConfig::default().workers),
            format: cli.format,
            output: cli.output.clone(),
        },
        Err(f) => return (f.code, failure_report(&f, cli.format), false),
    };
    if run.workers == 0 {
        let f = usage("--workers must be at least 1");
        return (f.code, failure_report(&f, run.format), false);
    }
    let (code, text) = match dispatch(&cli, &run.enum_config()) {
        Ok(r) => (if r.pass { EXIT_OK } else { EXIT_VERIFICATION_FAILED }, r.render(run.format)),
        Err(f) => (f.code, failure_report(&f, run.format)),
    };
    if let Some(path) = &run.output {
        if let Err(e) = std::fs::write(path, &text) {
            let f: Failure = Error::Io(e).into();
            return (f.code, failure_report(&f, run.format), false);
        }
        return (code, text, true);
    }
    (code, text, false)
}

pub fn main_entry() -> i32 {
    let (code, report, written) = run(std::env::args_os());
    if written {
        return code;
    }
    if code == EXIT_OK || code == EXIT_VERIFICATION_FAILED {
        print!("{report}");
    } else {
        eprint!("{report}");
    }
    code
}
