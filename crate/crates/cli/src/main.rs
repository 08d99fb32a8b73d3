use std::fmt::{Debug, Display};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use toric_cycles::complements::{ComplementKind, Complements};
use toric_cycles::cycle::Cycle;
use toric_cycles::divisor::{degree, QCartierDivisor};
use toric_cycles::fan::{ConeId, Fan};
use toric_cycles::format::{self, FormatError};
use toric_cycles::intersection::{
    evaluate_polynomial, flag_closed_form, flag_simplex_coefficient, intersect, power, symbolic_flag_coefficient,
};
use toric_cycles::linalg::{parse_rational, Integer, Rational};
use toric_cycles::morphism::{
    projection_formula_check, pushforward, simplicialize, star_subdivision, Properness, ToricMorphism,
};
use toric_cycles::poly::Polynomial;
use toric_cycles::ring::{chern_cycle, lefschetz_injectivity, product, todd_cycle, LefschetzReport, Presentation};
use toric_cycles::sampling::sampled_lefschetz;

/// Exact intersection computations on toric varieties.
///
/// Inputs are JSON documents; the result document goes to standard output
/// (or `--out`). Exit status: 0 on success, 1 when a mathematical
/// precondition fails, 2 on malformed input.
#[derive(Parser, Debug)]
#[command(name = "toric-cycles", version)]
struct Cli {
    command: Command,
    #[arg(long)]
    fan: Option<PathBuf>,
    /// Divisor documents, in order; `d1, d2, ...` in `--poly` refer to them.
    #[arg(long)]
    divisor: Vec<PathBuf>,
    #[arg(long)]
    complements: Option<PathBuf>,
    /// Complements on the source fan of `--morphism` (defaults to the
    /// target's inner product when the ranks agree).
    #[arg(long)]
    source_complements: Option<PathBuf>,
    /// Cycle documents; `ring-product` takes two, other commands at most one
    /// and default to the fundamental cycle.
    #[arg(long)]
    cycle: Vec<PathBuf>,
    #[arg(long)]
    morphism: Option<PathBuf>,
    /// Polynomial in d1..ds (`y1..yr` for `reduce`, one variable per ray).
    #[arg(long)]
    poly: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Power for `power`.
    #[arg(long)]
    exponent: Option<u32>,
    /// Codimension for `chern`, cycle dimension for `lefschetz`.
    #[arg(long)]
    index: Option<usize>,
    /// Comma-separated ray indices of a cone.
    #[arg(long)]
    cone: Option<String>,
    /// Comma-separated coordinates of the ray added by `subdivide`.
    #[arg(long, allow_hyphen_values = true)]
    ray: Option<String>,
    /// Comma-separated ray coefficients of the class used by `lefschetz`.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Command {
    Validate,
    Intersect,
    Power,
    Poly,
    RingProduct,
    Todd,
    Chern,
    Degree,
    FlagCoeff,
    SymbolicCoeff,
    Reduce,
    Pushforward,
    ProjectionCheck,
    Subdivide,
    Lefschetz,
}

enum Failure {
    Input(String),
    Math(String),
}

impl Failure {
    fn math(e: impl Display + Debug) -> Self {
        Self::Math(format!("{e} [{}]", error_code(&format!("{e:?}"))))
    }
}

/// The innermost variant name of a nested error's debug form, e.g.
/// `AgreementViolation` for `Divisor(AgreementViolation { .. })`.
fn error_code(debug: &str) -> &str {
    let mut rest = debug;
    loop {
        let end = rest.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(rest.len());
        let (name, tail) = rest.split_at(end);
        match tail.strip_prefix('(') {
            Some(inner) if inner.starts_with(|c: char| c.is_ascii_uppercase()) => rest = inner,
            _ => return name,
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn located<T>(path: &Path, r: Result<T, FormatError>) -> Outcome<T> {
    r.map_err(|e| {
        if e.is_mathematical() {
            Failure::Math(format!("{}: {e} [{}]", path.display(), error_code(&format!("{e:?}"))))
        } else {
            Failure::Input(format!("{}: {e}", path.display()))
        }
    })
}

fn required<'a, T>(value: &'a Option<T>, flag: &str) -> Outcome<&'a T> {
    value.as_ref().ok_or_else(|| Failure::Input(format!("missing required flag --{flag}")))
}

fn comma_list<T>(text: &str, flag: &str, parse: impl Fn(&str) -> Option<T>) -> Outcome<Vec<T>> {
    text.split(',')
        .map(|t| parse(t.trim()).ok_or_else(|| Failure::Input(format!("--{flag}: cannot parse `{}`", t.trim()))))
        .collect()
}

struct Session {
    cli: Cli,
    morphism: Option<ToricMorphism>,
    fan: Option<Arc<Fan>>,
}

impl Session {
    fn new(cli: Cli) -> Outcome<Self> {
        let morphism = match &cli.morphism {
            Some(p) => Some(located(p, format::parse_morphism(&read(p)?))?),
            None => None,
        };
        let fan = match &cli.fan {
            Some(p) => Some(Arc::new(located(p, format::parse_fan(&read(p)?))?)),
            None => None,
        };
        Ok(Self { cli, morphism, fan })
    }

    fn fan(&self) -> Outcome<&Arc<Fan>> {
        self.fan.as_ref().ok_or_else(|| Failure::Input("missing required flag --fan".into()))
    }

    fn morphism(&self) -> Outcome<&ToricMorphism> {
        required(&self.morphism, "morphism")
    }

    fn divisors_on(&self, fan: &Arc<Fan>) -> Outcome<Vec<QCartierDivisor>> {
        self.cli.divisor.iter().map(|p| located(p, format::parse_divisor(&read(p)?, fan))).collect()
    }

    fn divisors(&self) -> Outcome<Vec<QCartierDivisor>> {
        self.divisors_on(self.fan()?)
    }

    fn single_divisor(&self) -> Outcome<QCartierDivisor> {
        let mut ds = self.divisors()?;
        if ds.len() != 1 {
            return Err(Failure::Input(format!("expected exactly one --divisor, found {}", ds.len())));
        }
        Ok(ds.remove(0))
    }

    fn cycles_on(&self, fan: &Arc<Fan>) -> Outcome<Vec<Cycle>> {
        self.cli.cycle.iter().map(|p| located(p, format::parse_cycle(&read(p)?, fan))).collect()
    }

    /// The single `--cycle`, or the fundamental cycle when none is given.
    fn cycle_on(&self, fan: &Arc<Fan>) -> Outcome<Cycle> {
        let mut zs = self.cycles_on(fan)?;
        match zs.len() {
            0 => Ok(Cycle::fundamental(fan.clone())),
            1 => Ok(zs.remove(0)),
            k => Err(Failure::Input(format!("expected at most one --cycle, found {k}"))),
        }
    }

    fn complements_from(&self, path: &Option<PathBuf>, flag: &str, fan: &Arc<Fan>) -> Outcome<Complements> {
        let p = required(path, flag)?;
        located(p, format::parse_complements(&read(p)?, fan))
    }

    fn complements(&self) -> Outcome<Complements> {
        self.complements_from(&self.cli.complements, "complements", self.fan()?)
    }

    fn poly(&self, prefix: &str, nvars: usize) -> Outcome<Polynomial> {
        let text = required(&self.cli.poly, "poly")?;
        Polynomial::parse(text, prefix, nvars).map_err(|e| Failure::Input(format!("--poly: {e}")))
    }

    fn cone(&self, fan: &Fan) -> Outcome<ConeId> {
        let text = required(&self.cli.cone, "cone")?;
        let mut rays = comma_list(text, "cone", |t| t.parse::<usize>().ok())?;
        rays.sort_unstable();
        fan.cone_by_rays(&rays).ok_or_else(|| Failure::Input(format!("--cone: {rays:?} is not a cone of the fan")))
    }

    fn rng(&self) -> Outcome<ChaCha8Rng> {
        Ok(ChaCha8Rng::seed_from_u64(*required(&self.cli.seed, "seed")?))
    }
}

fn cycle_doc(z: &Cycle) -> Value {
    format::cycle_to_json(z)
}

fn lefschetz_entry(r: &LefschetzReport) -> Value {
    serde_json::json!({
        "cols": r.cols,
        "exponent": r.exponent,
        "i": r.i,
        "injective": r.injective,
        "rank": r.rank,
        "rows": r.rows,
    })
}

fn run(s: &Session) -> Outcome<Value> {
    let cli = &s.cli;
    match cli.command {
        Command::Validate => {
            let fan = match (&s.fan, &s.morphism) {
                (Some(f), _) => f.clone(),
                (None, Some(m)) => m.target().clone(),
                (None, None) => return Err(Failure::Input("missing required flag --fan".into())),
            };
            let divisors = s.divisors_on(&fan)?;
            let cycles = s.cycles_on(&fan)?;
            if cli.complements.is_some() {
                s.complements_from(&cli.complements, "complements", &fan)?;
            }
            let mut details = vec![
                ("rays", Value::from(fan.num_rays())),
                ("cones", Value::from(fan.num_cones())),
                ("maximal_cones", Value::from(fan.maximal_cones().len())),
                ("simplicial", Value::from(fan.is_simplicial())),
                ("smooth", Value::from(fan.is_smooth())),
                ("complete", Value::from(fan.is_complete())),
                ("divisors", Value::from(divisors.len())),
                ("cycles", Value::from(cycles.len())),
            ];
            if let Some(m) = &s.morphism {
                let proper = match m.is_proper_restricted() {
                    Properness::Proper(_) => Value::from("proper"),
                    Properness::NotProper { .. } => Value::from("not_proper"),
                    Properness::Undecided => Value::from("undecided"),
                };
                details.push(("morphism_properness", proper));
            }
            Ok(format::report_doc("validate", true, details))
        }
        Command::Intersect => {
            let fan = s.fan()?;
            let divisors = s.divisors()?;
            if divisors.is_empty() {
                return Err(Failure::Input("expected at least one --divisor".into()));
            }
            let psi = s.complements()?;
            let mut z = s.cycle_on(fan)?;
            for d in divisors.iter().rev() {
                z = intersect(d, &z, &psi).map_err(Failure::math)?;
            }
            Ok(cycle_doc(&z))
        }
        Command::Power => {
            let fan = s.fan()?;
            let d = s.single_divisor()?;
            let k = *required(&cli.exponent, "exponent")?;
            let z = power(&d, k, &s.cycle_on(fan)?, &s.complements()?).map_err(Failure::math)?;
            Ok(cycle_doc(&z))
        }
        Command::Poly => {
            let fan = s.fan()?;
            let divisors = s.divisors()?;
            let p = s.poly("d", divisors.len())?;
            let z = evaluate_polynomial(&p, &divisors, &s.cycle_on(fan)?, &s.complements()?).map_err(Failure::math)?;
            Ok(cycle_doc(&z))
        }
        Command::RingProduct => {
            let fan = s.fan()?;
            let zs = s.cycles_on(fan)?;
            if zs.len() != 2 {
                return Err(Failure::Input(format!("ring-product expects two --cycle flags, found {}", zs.len())));
            }
            Ok(cycle_doc(&product(&zs[0], &zs[1], &s.complements()?).map_err(Failure::math)?))
        }
        Command::Todd => Ok(cycle_doc(&todd_cycle(&s.complements()?).map_err(Failure::math)?.cycle)),
        Command::Chern => {
            let j = *required(&cli.index, "index")?;
            Ok(cycle_doc(&chern_cycle(&s.complements()?, j).map_err(Failure::math)?))
        }
        Command::Degree => {
            let fan = s.fan()?;
            let z = s.cycle_on(fan)?;
            Ok(format::rational_doc(&degree(&z).map_err(Failure::math)?))
        }
        Command::FlagCoeff => {
            let fan = s.fan()?;
            let divisors = s.divisors()?;
            let sigma = s.cone(fan)?;
            let psi = s.complements()?;
            let k = fan.dim(sigma) as u32;
            let q = match &cli.poly {
                Some(_) => s.poly("d", divisors.len())?,
                None if divisors.len() == 1 => Polynomial::var(1, 0).pow(k),
                None => return Err(Failure::Input("--poly is required with several divisors".into())),
            };
            let closed = flag_closed_form(&q, &divisors, sigma, &psi).map_err(Failure::math)?;
            let recursive = evaluate_polynomial(&q, &divisors, &Cycle::fundamental(fan.clone()), &psi)
                .map_err(Failure::math)?
                .coefficient(sigma);
            let mut details = vec![
                ("closed_form", format::rational_value(&closed)),
                ("recursive", format::rational_value(&recursive)),
            ];
            let mut agree = closed == recursive;
            if divisors.len() == 1 && k as usize == fan.rank() && q == Polynomial::var(1, 0).pow(k) {
                let simplex = flag_simplex_coefficient(&divisors[0], sigma, &psi).map_err(Failure::math)?;
                agree &= simplex.value == closed;
                details.push(("simplex_value", format::rational_value(&simplex.value)));
                details.push(("simplex_sign", Value::from(simplex.sign)));
                details.push(("simplex_volume", format::rational_value(&simplex.volume)));
                details.push(("simplex_vertices", Value::Array(simplex.vertices.iter().map(|v| format::qvec_value(v)).collect())));
            }
            details.push(("cone", format::cone_value(fan.cone_rays(sigma))));
            Ok(format::report_doc("flag-coeff", agree, details))
        }
        Command::SymbolicCoeff => {
            let fan = s.fan()?;
            let divisors = s.divisors()?;
            let sigma = s.cone(fan)?;
            let q = match &cli.poly {
                Some(_) => s.poly("d", divisors.len())?,
                None if divisors.len() == 1 => Polynomial::var(1, 0).pow(fan.dim(sigma) as u32),
                None => return Err(Failure::Input("--poly is required with several divisors".into())),
            };
            let f = symbolic_flag_coefficient(&q, &divisors, sigma).map_err(Failure::math)?;
            Ok(format::rational_function_doc(&f, "w"))
        }
        Command::Reduce => {
            let fan = s.fan()?;
            let psi = s.complements()?;
            let ComplementKind::InnerProduct { gram } = psi.kind() else {
                return Err(Failure::Math("reduce needs complements of type inner_product".into()));
            };
            let presentation = Presentation::new(fan.clone(), gram).map_err(Failure::math)?;
            let p = s.poly("y", fan.num_rays())?;
            Ok(format::polynomial_doc(&presentation.reduce(&p), "y"))
        }
        Command::Pushforward => {
            let f = s.morphism()?;
            let z = s.cycle_on(f.source())?;
            Ok(cycle_doc(&pushforward(f, &z).map_err(Failure::math)?))
        }
        Command::ProjectionCheck => {
            let f = s.morphism()?;
            let target = f.target();
            let mut ds = s.divisors_on(target)?;
            if ds.len() != 1 {
                return Err(Failure::Input(format!("expected exactly one --divisor, found {}", ds.len())));
            }
            let d = ds.remove(0);
            let z = s.cycle_on(f.source())?;
            let psi = s.complements_from(&cli.complements, "complements", target)?;
            let psi_source = match (&cli.source_complements, psi.kind()) {
                (Some(_), _) => s.complements_from(&cli.source_complements, "source-complements", f.source())?,
                (None, ComplementKind::InnerProduct { gram }) if f.source().rank() == target.rank() => {
                    Complements::inner_product(f.source().clone(), gram.clone()).map_err(Failure::math)?
                }
                (None, _) => return Err(Failure::Input("missing required flag --source-complements".into())),
            };
            let report = projection_formula_check(f, &d, &z, &psi, &psi_source).map_err(Failure::math)?;
            Ok(format::report_doc(
                "projection-check",
                report.holds(),
                vec![("left", cycle_doc(&report.left)), ("right", cycle_doc(&report.right))],
            ))
        }
        Command::Subdivide => {
            let fan = s.fan()?;
            let (_, f) = match &cli.ray {
                Some(text) => {
                    let v = comma_list(text, "ray", |t| t.parse::<Integer>().ok())?;
                    if v.len() != fan.rank() {
                        return Err(Failure::Input(format!("--ray: expected {} coordinates", fan.rank())));
                    }
                    star_subdivision(fan, &v)
                }
                None => simplicialize(fan),
            }
            .map_err(Failure::math)?;
            Ok(format::morphism_to_json(&f))
        }
        Command::Lefschetz => {
            let fan = s.fan()?;
            let coefficients: Vec<Rational> = match &cli.coeffs {
                Some(text) => comma_list(text, "coeffs", |t| parse_rational(t).ok())?,
                None => vec![Rational::from_integer(1.into()); fan.num_rays()],
            };
            let indices: Vec<usize> = match cli.index {
                Some(i) => vec![i],
                None => (0..=fan.rank() / 2).collect(),
            };
            let mut entries = Vec::new();
            let mut passed = true;
            if cli.complements.is_some() {
                let psi = s.complements()?;
                for &i in &indices {
                    let r = lefschetz_injectivity(&psi, &coefficients, i).map_err(Failure::math)?;
                    passed &= r.injective;
                    entries.push(lefschetz_entry(&r));
                }
            } else {
                let mut rng = s.rng()?;
                for &i in &indices {
                    let r = sampled_lefschetz(&mut rng, fan, &coefficients, i, 3).map_err(Failure::math)?;
                    passed &= r.report.injective;
                    let mut entry = lefschetz_entry(&r.report);
                    entry["samples"] = Value::from(r.samples);
                    entry["gram"] = Value::Array(r.gram.iter().map(|row| format::qvec_value(row)).collect());
                    entries.push(entry);
                }
            }
            Ok(format::report_doc("lefschetz", passed, vec![("checks", Value::Array(entries))]))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = Session::new(cli).and_then(|s| run(&s));
    match result {
        Ok(doc) => {
            let text = format::to_text(&doc);
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Math(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
