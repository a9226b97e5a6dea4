//! Command-line front end for `systole-core`: descriptor parsing, subcommand
//! dispatch and exact, machine-readable output.

pub mod output;
pub mod parser;

use std::ffi::OsString;
use std::io::{BufRead, Write};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use systole_core::catalog::Space;
use systole_core::cone::{self, ConeProblem, PhiSup, SupValue};
use systole_core::index::{self, BoundKind, IndexError, ScaledClass};
use systole_core::lattice::{self, Norm, NormValue, NormedLattice};
use systole_core::pi_scaled::PiScaled;
use systole_core::pushforward;

use output::{render, Format, Record, Value};
use parser::{build, parse_space};

#[derive(Debug, Parser)]
#[command(name = "systole", version, about = "Exact systolic and scalar-curvature bounds")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
    /// Append decimal approximations with this many digits.
    #[arg(long, value_name = "DIGITS", global = true)]
    approx: Option<usize>,
    /// Read one space descriptor per line from standard input.
    #[arg(long, global = true)]
    batch: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    #[value(alias = "thm1.1")]
    Kahler,
    #[value(alias = "thm1.2")]
    KahlerNotCp,
    #[value(alias = "thm1.3")]
    Product,
    #[value(alias = "thm4.5")]
    KahlerNotCpOrQuadric,
    #[value(alias = "thm5.6")]
    FanoIndex,
    #[value(alias = "prop5.1")]
    Length,
}

impl TheoremArg {
    fn kind(self) -> BoundKind {
        match self {
            TheoremArg::Kahler => BoundKind::Kahler,
            TheoremArg::KahlerNotCp => BoundKind::KahlerNotProjective,
            TheoremArg::Product => BoundKind::ProductStable,
            TheoremArg::KahlerNotCpOrQuadric => BoundKind::KahlerNotProjectiveOrQuadric,
            TheoremArg::FanoIndex => BoundKind::FanoIndex,
            TheoremArg::Length => BoundKind::Length,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Right-hand side of a systolic inequality.
    Bound {
        #[arg(long)]
        space: Option<String>,
        /// Second factor N of a product X x N.
        #[arg(long)]
        factor: Option<String>,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
    },
    /// Spin^c index polynomial P(a).
    IndexPoly {
        #[arg(long)]
        space: Option<String>,
    },
    /// Length invariant with its witness.
    Length {
        #[arg(long)]
        space: Option<String>,
        /// Also check the product with this factor.
        #[arg(long)]
        factor: Option<String>,
    },
    /// Todd genus.
    Todd {
        #[arg(long)]
        space: Option<String>,
    },
    /// Phi and curvature data of a class given in nef-basis coordinates.
    Phi {
        #[arg(long)]
        space: Option<String>,
        /// Comma-separated rational coordinates, e.g. `2,-1`.
        #[arg(long, allow_hyphen_values = true)]
        coords: String,
        /// Symbolic factor pi^k multiplying the class.
        #[arg(long, default_value_t = 0)]
        pi_exponent: i32,
    },
    /// Supremum of Phi over the nef cone.
    PhiSup {
        #[arg(long)]
        space: Option<String>,
    },
    /// Coordinate projections of a multiprojective complete intersection.
    Contractions {
        /// A `CI(...)` descriptor.
        #[arg(long)]
        space: Option<String>,
    },
    /// Systole profile of projectivized split bundles over curves.
    BundleProfile {
        /// Fibre dimension plus one (rank of the bundle).
        #[arg(long)]
        n: Option<u32>,
        /// A `PB(...)` descriptor to evaluate at `--a`, `--b`.
        #[arg(long)]
        space: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Successive minima, dual lattice and reduced dual basis.
    Lattice {
        /// Rows separated by `;`, entries by `,`.
        #[arg(long, allow_hyphen_values = true)]
        gram: Option<String>,
        /// Basis vectors separated by `;` (default: standard basis).
        #[arg(long, allow_hyphen_values = true)]
        basis: Option<String>,
        /// Centrally symmetric polytope vertices separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        polytope: Option<String>,
    },
    /// Localization pushforward P^{k,r}_j and its primitive coefficient.
    Pushforward {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        j: u32,
    },
    /// Summary of the built-in catalog.
    Catalog {
        #[arg(long, default_value_t = 4)]
        max_n: u32,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn load_space(text: &str) -> Result<(String, Space), CliError> {
    let d = parse_space(text).map_err(|e| CliError::Usage(format!("{text}: {e}")))?;
    let s = build(&d).map_err(|e| CliError::Domain(format!("{d}: {e}")))?;
    Ok((d.to_string(), s))
}

fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    s.trim().parse::<BigRational>().map_err(|_| CliError::Usage(format!("not a rational number: `{s}`")))
}

fn parse_vector(s: &str) -> Result<Vec<BigRational>, CliError> {
    s.split(',').map(parse_rational).collect()
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<BigRational>>, CliError> {
    s.split(';').filter(|r| !r.trim().is_empty()).map(parse_vector).collect()
}

fn q_value(q: BigRational) -> Value {
    Value::rational(q)
}

fn bound_error(e: IndexError) -> CliError {
    match e {
        IndexError::LichnerowiczObstruction => CliError::Domain(String::from(
            "length is 0: the A-hat obstruction is nonzero, so no metric of positive scalar curvature exists",
        )),
        other => domain(other),
    }
}

fn cmd_bound(space: &str, factor: Option<&str>, theorem: TheoremArg) -> Result<Record, CliError> {
    let (name, x) = load_space(space)?;
    let n = factor.map(load_space).transpose()?;
    let v = index::systolic_bound(&x, n.as_ref().map(|p| &p.1), theorem.kind()).map_err(bound_error)?;
    let mut r = Record::new().with("space", Value::Text(name));
    if let Some((fname, _)) = &n {
        r.push("factor", Value::Text(fname.clone()));
    }
    let label = theorem.to_possible_value().expect("not skipped").get_name().to_string();
    Ok(r.with("theorem", Value::Text(label)).with("bound", Value::Exact(v)))
}

fn cmd_index_poly(space: &str) -> Result<Record, CliError> {
    let (name, x) = load_space(space)?;
    let p = index::index_polynomial(&x).map_err(domain)?;
    let coeffs: Vec<Value> = p.poly.coeffs().iter().cloned().map(q_value).collect();
    Ok(Record::new()
        .with("space", Value::Text(name))
        .with("q0", Value::Int(p.q0))
        .with("polynomial", Value::Text(p.poly.to_string_in("a")))
        .with("coefficients", Value::List(coeffs)))
}

fn cmd_length(space: &str, factor: Option<&str>) -> Result<Record, CliError> {
    let (name, x) = load_space(space)?;
    let p = index::index_polynomial(&x).map_err(domain)?;
    let l = index::length(&x).map_err(domain)?;
    let mut r = Record::new()
        .with("space", Value::Text(name))
        .with("length", Value::Int(l.value as i64))
        .with("witness_a", Value::Int(l.witness))
        .with("q0", Value::Int(p.q0));
    if l.value == 0 {
        r.push("note", Value::Text(String::from("A-hat obstruction: no metric of positive scalar curvature")));
    }
    if let Some(f) = factor {
        let (fname, n) = load_space(f)?;
        let lp = index::product_length_bound(&x, &n).map_err(domain)?;
        r.push("factor", Value::Text(fname));
        r.push("product_length", Value::Int(lp.value as i64));
    }
    Ok(r)
}

fn cmd_todd(space: &str) -> Result<Record, CliError> {
    let (name, x) = load_space(space)?;
    let t = index::todd_genus(&x).map_err(domain)?;
    Ok(Record::new().with("space", Value::Text(name)).with("todd", q_value(t)))
}

fn cmd_phi(space: &str, coords: &str, pi_exponent: i32) -> Result<Record, CliError> {
    let (name, x) = load_space(space)?;
    let problem = ConeProblem::new(&x).map_err(domain)?;
    let c = parse_vector(coords)?;
    if c.len() != problem.rank() {
        return Err(CliError::Usage(format!("expected {} coordinates in the nef basis", problem.rank())));
    }
    let alpha = problem.class_of(&c);
    let phi = cone::phi(&x, &alpha).map_err(domain)?;
    let scaled = ScaledClass::new(PiScaled::new(BigRational::one(), pi_exponent), alpha.clone());
    let mut r = Record::new()
        .with("space", Value::Text(name))
        .with("class", Value::Text(alpha.to_string()))
        .with("phi", q_value(phi));
    r.push("avg_scalar_curvature", Value::Exact(index::avg_scalar_curvature(&x, &scaled).map_err(domain)?));
    r.push("volume", Value::Exact(index::volume(&x, &scaled).map_err(domain)?));
    match cone::nef_threshold(&problem, &alpha) {
        Ok(t) => {
            r.push("nef_threshold", q_value(t));
            r.push("s", q_value(cone::s_alpha(&problem, &alpha).map_err(domain)?));
        }
        Err(e) => r.push("nef_threshold", Value::Text(e.to_string())),
    }
    Ok(r)
}

fn cmd_phi_sup(space: &str) -> Result<Record, CliError> {
    let (name, x) = load_space(space)?;
    let problem = ConeProblem::new(&x).map_err(domain)?;
    let res = cone::phi_sup(&problem).map_err(domain)?;
    let r = Record::new().with("space", Value::Text(name));
    Ok(match res {
        PhiSup::Unbounded { witness, witness_name } => r
            .with("sup", Value::Text(String::from("UNBOUNDED")))
            .with("witness", Value::Text(witness_name))
            .with("witness_coords", Value::List(witness.into_iter().map(q_value).collect())),
        PhiSup::Bounded { value, argmax, attained } => {
            let v = match value {
                SupValue::Exact(v) => q_value(v),
                SupValue::Enclosure { lo, hi } => Value::Enclosure { lo, hi },
            };
            r.with("sup", v)
                .with("argmax", Value::List(argmax.into_iter().map(q_value).collect()))
                .with("attained", Value::Bool(attained))
        }
    })
}

fn cmd_contractions(space: &str) -> Result<Vec<Record>, CliError> {
    let d = parse_space(space).map_err(|e| CliError::Usage(format!("{space}: {e}")))?;
    let (degrees, ambient) = match &d {
        parser::Descriptor::CompleteIntersection { degrees, ambient } => (degrees.clone(), ambient.clone()),
        _ => return Err(CliError::Usage(String::from("contractions expects a CI(...) descriptor"))),
    };
    let to_u32 = |v: &[i64]| -> Result<Vec<u32>, CliError> {
        v.iter().map(|&x| u32::try_from(x).map_err(|_| CliError::Domain(format!("negative entry {x}")))).collect()
    };
    let amb = to_u32(&ambient)?;
    let degs: Vec<Vec<u32>> = degrees.iter().map(|r| to_u32(r)).collect::<Result<_, _>>()?;
    let rep = cone::multiproj_contractions(&amb, &degs).map_err(domain)?;
    let mut out: Vec<Record> = rep
        .projections
        .iter()
        .map(|p| {
            Record::new()
                .with("factor", Value::Int(p.factor as i64 + 1))
                .with("ambient_dim", Value::Int(p.ambient_dim as i64))
                .with("degree_sum", Value::Int(p.degree_sum as i64))
                .with("anticanonical_coeff", Value::Int(p.anticanonical_coeff))
                .with("k_negative", Value::Bool(p.k_negative))
                .with("fiber_dim", Value::Int(p.fiber_dim))
        })
        .collect();
    out.push(
        Record::new()
            .with("space", Value::Text(d.to_string()))
            .with("fano", Value::Bool(rep.fano))
            .with("max_order", Value::Int(rep.max_order)),
    );
    Ok(out)
}

fn cmd_bundle_profile(n: Option<u32>, space: Option<&str>, a: Option<&str>, b: Option<&str>) -> Result<Vec<Record>, CliError> {
    let mut out = Vec::new();
    if let Some(n) = n {
        let s = cone::bundle_profile_sup(n).map_err(domain)?;
        out.push(
            Record::new()
                .with("n", Value::Int(n as i64))
                .with("sup", q_value(s.value))
                .with("argmax_x", q_value(s.argmax.0))
                .with("argmax_e", Value::Int(s.argmax.1))
                .with("grid_points", Value::Int(s.grid_points as i64)),
        );
    }
    if let Some(text) = space {
        let d = parse_space(text).map_err(|e| CliError::Usage(format!("{text}: {e}")))?;
        let (degrees, genus) = match &d {
            parser::Descriptor::ProjectiveBundle { degrees, genus } => (degrees.clone(), *genus),
            _ => return Err(CliError::Usage(String::from("bundle-profile expects a PB(...) descriptor"))),
        };
        let genus = u32::try_from(genus).map_err(|_| CliError::Domain(String::from("genus must be non-negative")))?;
        let a = parse_rational(a.ok_or_else(|| CliError::Usage(String::from("--a is required with --space")))?)?;
        let b = parse_rational(b.ok_or_else(|| CliError::Usage(String::from("--b is required with --space")))?)?;
        let (sys, prod) = cone::bundle_systole_profile(&degrees, genus, &a, &b).map_err(domain)?;
        out.push(
            Record::new()
                .with("space", Value::Text(d.to_string()))
                .with("systole", q_value(sys))
                .with("product", q_value(prod)),
        );
    }
    if out.is_empty() {
        return Err(CliError::Usage(String::from("give --n or --space with --a and --b")));
    }
    Ok(out)
}

fn norm_value(v: &NormValue) -> Value {
    match v {
        NormValue::Exact(x) => q_value(x.clone()),
        NormValue::Squared(x) => Value::Text(format!("sqrt({x})")),
    }
}

fn vector_value(v: &[BigRational]) -> Value {
    Value::List(v.iter().cloned().map(q_value).collect())
}

fn cmd_lattice(gram: Option<&str>, basis: Option<&str>, polytope: Option<&str>) -> Result<Record, CliError> {
    let norm = match (gram, polytope) {
        (Some(g), None) => Norm::Euclidean(parse_matrix(g)?),
        (None, Some(p)) => Norm::Polytope(parse_matrix(p)?),
        _ => return Err(CliError::Usage(String::from("give exactly one of --gram and --polytope"))),
    };
    let r = match &norm {
        Norm::Euclidean(g) => g.len(),
        Norm::Polytope(v) => v.first().map_or(0, |x| x.len()),
    };
    let basis = match basis {
        Some(b) => lattice::transpose(&parse_matrix(b)?),
        None => lattice::identity(r),
    };
    let l = NormedLattice::new(basis, norm).map_err(domain)?;
    let minima: Vec<Value> = l.minima().iter().map(|(v, _)| norm_value(v)).collect();
    let dual = lattice::dual_lattice(&l).map_err(domain)?;
    let dual_minima: Vec<Value> = dual.minima().iter().map(|(v, _)| norm_value(v)).collect();
    let red = lattice::reduced_dual_basis(&l).map_err(domain)?;
    let mut rec = Record::new()
        .with("rank", Value::Int(r as i64))
        .with("minima", Value::List(minima))
        .with("dual_minima", Value::List(dual_minima))
        .with("reduced_dual_basis", Value::List(red.vectors.iter().map(|v| vector_value(v)).collect()))
        .with("dual_norms", Value::List(red.dual_norms.iter().map(norm_value).collect()))
        .with("max_constant_squared", q_value(red.achieved_sq.clone()))
        .with("bound_squared", q_value(BigRational::from_integer(BigInt::from((r * r * r * r) as i64))));
    if let Some(d) = &red.distortion_sq {
        rec.push("sandwich_distortion_squared", q_value(d.clone()));
    }
    if let Norm::Euclidean(dg) = &dual.norm {
        rec.push("dual_gram", Value::List(dg.iter().map(|row| vector_value(row)).collect()));
        let t = lattice::transference_check(&l).map_err(domain)?;
        rec.push("transference_product_squared", q_value(t.product_sq));
        rec.push("transference_holds", Value::Bool(t.holds));
    }
    Ok(rec)
}

fn cmd_pushforward(k: usize, r: usize, j: u32) -> Result<Record, CliError> {
    let p = pushforward::localization_pushforward(k, r, j).map_err(domain)?;
    let mut rec = Record::new()
        .with("k", Value::Int(k as i64))
        .with("r", Value::Int(r as i64))
        .with("j", Value::Int(j as i64))
        .with("polynomial", Value::Text(p.to_string()));
    if j >= 1 && j as usize <= r {
        let rep = pushforward::primitive_report(k, r, j).map_err(domain)?;
        rec.push("primitive_coefficient", q_value(rep.coefficient));
        rec.push("bracket", q_value(rep.bracket));
        rec.push(
            "constant",
            rep.constant.map_or(Value::Text(String::from("undetermined (bracket vanishes)")), q_value),
        );
    }
    Ok(rec)
}

fn catalog_samples(max_n: u32) -> Vec<String> {
    let mut v = Vec::new();
    for n in 1..=max_n {
        v.push(format!("CP({n})"));
    }
    for n in 2..=max_n {
        v.push(format!("Q({n})"));
    }
    for n in 3..=max_n.max(3) {
        v.push(format!("CI(degrees=[[3]]; ambient=[{}])", n + 1));
        v.push(format!("BlP({n})"));
    }
    v.push(String::from("CI(degrees=[[2],[3]]; ambient=[5])"));
    v.push(String::from("CI(degrees=[[1,1]]; ambient=[2,2])"));
    v.push(String::from("BlX(d=3; n=3)"));
    v.push(String::from("PB(degrees=[0,1]; genus=0)"));
    v.push(String::from("S1"));
    v.push(String::from("S(2)"));
    v.push(String::from("S(4)"));
    v.push(String::from("CP(2) * S1"));
    v.push(String::from("X6P123(4)"));
    v.push(String::from("X4P12(4)"));
    v.push(String::from("X6P13(4)"));
    v.push(String::from("GS(3)"));
    v
}

fn cmd_catalog(max_n: u32) -> Result<Vec<Record>, CliError> {
    let mut out = Vec::new();
    for text in catalog_samples(max_n) {
        let (name, x) = load_space(&text)?;
        let opt = |v: Option<u32>| v.map_or(Value::Text(String::from("-")), |x| Value::Int(x as i64));
        let todd = match index::todd_genus(&x) {
            Ok(t) => q_value(t),
            Err(_) => Value::Text(String::from("-")),
        };
        let len = match index::length(&x) {
            Ok(l) => Value::Int(l.value as i64),
            Err(_) => Value::Text(String::from("-")),
        };
        out.push(
            Record::new()
                .with("space", Value::Text(name))
                .with("real_dim", Value::Int(x.real_dim as i64))
                .with("b2", opt(x.b2))
                .with("fano_index", opt(x.fano_index))
                .with("todd", todd)
                .with("length", len)
                .with("metadata_only", Value::Bool(x.ring.is_none())),
        );
    }
    Ok(out)
}

fn space_arg(space: &Option<String>, line: Option<&str>) -> Result<String, CliError> {
    match (line, space) {
        (Some(l), _) => Ok(l.to_string()),
        (None, Some(s)) => Ok(s.clone()),
        (None, None) => Err(CliError::Usage(String::from("--space is required (or use --batch)"))),
    }
}

fn dispatch(cmd: &Command, line: Option<&str>) -> Result<Vec<Record>, CliError> {
    let one = |r: Result<Record, CliError>| r.map(|x| vec![x]);
    match cmd {
        Command::Bound { space, factor, theorem } => one(cmd_bound(&space_arg(space, line)?, factor.as_deref(), *theorem)),
        Command::IndexPoly { space } => one(cmd_index_poly(&space_arg(space, line)?)),
        Command::Length { space, factor } => one(cmd_length(&space_arg(space, line)?, factor.as_deref())),
        Command::Todd { space } => one(cmd_todd(&space_arg(space, line)?)),
        Command::Phi { space, coords, pi_exponent } => one(cmd_phi(&space_arg(space, line)?, coords, *pi_exponent)),
        Command::PhiSup { space } => one(cmd_phi_sup(&space_arg(space, line)?)),
        Command::Contractions { space } => cmd_contractions(&space_arg(space, line)?),
        Command::BundleProfile { n, space, a, b } => {
            let s = match line {
                Some(l) => Some(l.to_string()),
                None => space.clone(),
            };
            cmd_bundle_profile(*n, s.as_deref(), a.as_deref(), b.as_deref())
        }
        Command::Lattice { gram, basis, polytope } => one(cmd_lattice(gram.as_deref(), basis.as_deref(), polytope.as_deref())),
        Command::Pushforward { k, r, j } => one(cmd_pushforward(*k, *r, *j)),
        Command::Catalog { max_n } => cmd_catalog(*max_n),
    }
}

/// Runs the tool on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut records = Vec::new();
    let mut code = 0;
    if cli.batch {
        for line in stdin.lines() {
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    let _ = writeln!(err, "error: reading standard input: {e}");
                    return 2;
                }
            };
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            match dispatch(&cli.command, Some(t)) {
                Ok(mut r) => records.append(&mut r),
                Err(e) => {
                    let _ = writeln!(err, "error: {}", e.message());
                    code = code.max(e.code());
                }
            }
        }
    } else {
        match dispatch(&cli.command, None) {
            Ok(r) => records = r,
            Err(e) => {
                let _ = writeln!(err, "error: {}", e.message());
                return e.code();
            }
        }
    }
    let _ = out.write_all(render(&records, cli.format, cli.approx).as_bytes());
    code
}

/// Convenience wrapper for tests: runs with the given stdin text, returns `(code, stdout, stderr)`.
pub fn run_capture(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut input = std::io::Cursor::new(stdin.as_bytes().to_vec());
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["systole"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut input, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}
