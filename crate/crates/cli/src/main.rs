//! `mtroot` command-line tool.

use clap::{Args, Parser, Subcommand};
use mtroot::exactpoly::{validate_weil, IntPolynomial, WeilPolynomial};
use mtroot::galois::galois_group_of;
use mtroot::hodge::HodgeCalculator;
use mtroot::pipeline::io::{parse_curve, parse_fixture, read_cache, CacheEntry};
use mtroot::pipeline::{analyze_curve, analyze_lattice, predict_invariants, prime_data, AnalysisConfig, PipelineError};
use mtroot::pointcount::{count_points, frobenius_polynomial_of_curve, HyperellipticCurve, DEFAULT_MAX_ENUMERATION};
use mtroot::rootdatum::{assemble_root_datum, hodge_datum};
use mtroot::rootfinder::find_roots;
use num_bigint::BigInt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "mtroot", version, about = "Mumford-Tate root data from Frobenius polynomials")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Smallest auxiliary prime for the splitting field search.
    #[arg(long, global = true, default_value_t = 3)]
    aux_prime_min: u64,
    /// Largest auxiliary prime for the splitting field search.
    #[arg(long, global = true, default_value_t = 5000)]
    aux_prime_max: u64,
    /// Largest field size enumerated when counting points.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ENUMERATION)]
    max_enum: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug)]
struct PrimeRange(u64, u64);

impl FromStr for PrimeRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or("expected A..B")?;
        let a = a.trim().parse().map_err(|_| "bad lower bound")?;
        let b = b.trim().parse().map_err(|_| "bad upper bound")?;
        if a > b {
            return Err("empty range".into());
        }
        Ok(PrimeRange(a, b))
    }
}

#[derive(Args)]
struct PolyInput {
    /// Coefficients, constant term first, comma separated.
    #[arg(long, requires = "q", conflicts_with = "cache")]
    poly: Option<String>,
    #[arg(long)]
    q: Option<String>,
    /// Frobenius cache file (JSON lines); pick the entry with --prime.
    #[arg(long, requires = "prime")]
    cache: Option<PathBuf>,
    #[arg(long)]
    prime: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count points on a curve over F_{p^k}.
    Count {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        prime: u64,
        /// Extension degree; all of 1..=g when omitted.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Frobenius polynomials as cache lines.
    Frobpoly {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, conflicts_with = "primes")]
        prime: Option<u64>,
        #[arg(long)]
        primes: Option<PrimeRange>,
    },
    /// Structure of the eigenvalue group.
    Phi(PolyInput),
    /// Galois group of a Weil polynomial on its root labels.
    Galois(PolyInput),
    /// Full analysis from a curve, a cache file, or a lattice fixture.
    Analyze {
        #[arg(long, group = "source")]
        curve: Option<PathBuf>,
        #[arg(long, group = "source")]
        cache: Option<PathBuf>,
        #[arg(long, group = "source")]
        fixture: Option<PathBuf>,
        #[arg(long, default_value = "3..100")]
        primes: PrimeRange,
        #[arg(long, default_value_t = 2)]
        max_n: u32,
    },
    /// Table of invariant dimensions for a lattice fixture.
    Hodge {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_n: u32,
    },
}

fn read(path: &PathBuf) -> Result<String, PipelineError> {
    std::fs::read_to_string(path).map_err(|e| PipelineError::Format(format!("{}: {e}", path.display())))
}

fn load_curve(path: &PathBuf) -> Result<HyperellipticCurve, PipelineError> {
    parse_curve(&read(path)?)
}

fn load_poly(input: &PolyInput) -> Result<(u64, WeilPolynomial), PipelineError> {
    if let Some(path) = &input.cache {
        let p = input.prime.expect("clap enforces --prime");
        let e = read_cache(&read(path)?)?
            .into_iter()
            .find(|e| e.p == p)
            .ok_or_else(|| PipelineError::Format(format!("no cache entry for p = {p}")))?;
        return Ok((p, e.to_poly()?));
    }
    let text = input.poly.as_deref().ok_or_else(|| PipelineError::Format("give --poly or --cache".into()))?;
    let coeffs = text
        .split(',')
        .map(|s| BigInt::from_str(s.trim()).map_err(|_| PipelineError::Format(format!("bad coefficient {s}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let q = BigInt::from_str(input.q.as_deref().unwrap_or("")).map_err(|_| PipelineError::Format("bad --q".into()))?;
    let w = validate_weil(IntPolynomial::new(coeffs), &q)?;
    let p = mtroot::exactpoly::prime_power_decompose(&q).and_then(|(p, _)| u64::try_from(p).ok()).unwrap_or(0);
    Ok((p, w))
}

fn config(c: &Common, primes: PrimeRange, max_n: u32) -> AnalysisConfig {
    let mut cfg = AnalysisConfig { primes: (primes.0, primes.1), max_enumeration: c.max_enum, max_n, report_path: c.out.clone(), ..Default::default() };
    cfg.galois.aux.min = c.aux_prime_min;
    cfg.galois.aux.max = c.aux_prime_max;
    cfg
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes")
}

fn run(cli: &Cli) -> Result<String, PipelineError> {
    let c = &cli.common;
    let cfg0 = config(c, PrimeRange(3, 100), 2);
    cfg0.validate()?;
    match &cli.cmd {
        Cmd::Count { curve, prime, k } => {
            let curve = load_curve(curve)?;
            let ks: Vec<u32> = match k {
                Some(k) => vec![*k],
                None => (1..=curve.genus() as u32).collect(),
            };
            let counts = ks
                .iter()
                .map(|&k| Ok((k, count_points(&curve, *prime, k, c.max_enum)?.to_string())))
                .collect::<Result<Vec<_>, PipelineError>>()?;
            Ok(if c.json {
                json(&serde_json::json!({ "p": prime, "counts": counts }))
            } else {
                counts.iter().map(|(k, n)| format!("#C(F_{prime}^{k}) = {n}")).collect::<Vec<_>>().join("\n")
            })
        }
        Cmd::Frobpoly { curve, prime, primes } => {
            let curve = load_curve(curve)?;
            let list: Vec<(u64, WeilPolynomial)> = match (prime, primes) {
                (Some(p), _) => vec![(*p, frobenius_polynomial_of_curve(&curve, *p, c.max_enum)?)],
                (None, Some(r)) => mtroot::pipeline::scan_curve(&curve, &config(c, *r, 2))?,
                (None, None) => return Err(PipelineError::Format("give --prime or --primes".into())),
            };
            Ok(list.iter().map(|(p, w)| CacheEntry::from_poly(*p, w).to_line()).collect::<Vec<_>>().join("\n"))
        }
        Cmd::Phi(input) => {
            let (p, w) = load_poly(input)?;
            let d = prime_data(p, &w, &cfg0.galois)?;
            let s = d.summary();
            Ok(if c.json {
                json(&s)
            } else {
                format!(
                    "distinct roots {}\nordinary {}\nGalois order {}\nrank {}\ntorsion [{}]\nq class [{}]",
                    s.distinct_roots,
                    s.ordinary,
                    s.gamma_order,
                    s.rank,
                    s.torsion.join(", "),
                    s.q_class.join(", ")
                )
            })
        }
        Cmd::Galois(input) => {
            let (_, w) = load_poly(input)?;
            let (roots, g) = galois_group_of(&w, &cfg0.galois)?;
            let gens: Vec<Vec<usize>> = g.generators().iter().map(|p| p.images()).collect();
            Ok(if c.json {
                json(&serde_json::json!({
                    "order": g.order().to_string(),
                    "degree": g.degree(),
                    "generators": gens,
                    "aux_prime": roots.ell(),
                    "residue_degree": roots.residue_degree(),
                }))
            } else {
                let mut s = format!("order {} on {} labels (aux prime {}, degree {})", g.order(), g.degree(), roots.ell(), roots.residue_degree());
                for p in g.generators() {
                    s.push_str(&format!("\n  {p:?}"));
                }
                s
            })
        }
        Cmd::Analyze { curve, cache, fixture, primes, max_n } => {
            let cfg = config(c, *primes, *max_n);
            if let Some(path) = fixture {
                let x = parse_fixture(&read(path)?)?.lattice()?;
                let rep = analyze_lattice(&x, *max_n)?;
                return Ok(if c.json { json(&rep) } else { lattice_text(&rep) });
            }
            let rep = if let Some(path) = curve {
                analyze_curve(&load_curve(path)?, &cfg)?
            } else if let Some(path) = cache {
                let mut polys: Vec<(u64, WeilPolynomial)> = read_cache(&read(path)?)?
                    .iter()
                    .filter(|e| e.p >= primes.0 && e.p <= primes.1)
                    .map(|e| Ok((e.p, e.to_poly()?)))
                    .collect::<Result<_, PipelineError>>()?;
                polys.sort_by_key(|(p, _)| *p);
                let pred = predict_invariants(&polys, &cfg)?;
                let get = |p: u64| polys.iter().find(|(r, _)| *r == p).map(|(_, w)| w).expect("scanned");
                let mut rep = mtroot::pipeline::analyze(get(pred.q_prime), get(pred.p_prime), &cfg)?;
                rep.prediction = Some(pred.dto());
                rep
            } else {
                return Err(PipelineError::Format("give --curve, --cache or --fixture".into()));
            };
            Ok(if c.json {
                rep.to_json()
            } else {
                let mut s = format!("primes q = {}, p = {} (ordinary: {})\n", rep.q, rep.p, rep.ordinary);
                if let Some(pr) = &rep.prediction {
                    s.push_str(&format!("predicted rank {}, Weyl order {}\n", pr.rank, pr.weyl_order));
                }
                s.push_str(&lattice_text(&rep.result));
                s
            })
        }
        Cmd::Hodge { fixture, max_n } => {
            let x = parse_fixture(&read(fixture)?)?.lattice()?;
            let comps = find_roots(&x)?;
            let datum = assemble_root_datum(&x, &comps)?;
            let hd = hodge_datum(&datum, &x)?;
            let table = HodgeCalculator::new(&hd)?.table(*max_n)?;
            let t: Vec<Vec<String>> = table.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
            Ok(if c.json {
                json(&serde_json::json!({ "rank": hd.rank, "table": t }))
            } else {
                t.iter().enumerate().map(|(k, r)| format!("k={k}: {}", r.join(" "))).collect::<Vec<_>>().join("\n")
            })
        }
    }
}

fn lattice_text(rep: &mtroot::pipeline::report::LatticeReport) -> String {
    let types: Vec<&str> = rep.root_datum.components.iter().map(|c| c.lie_type.as_str()).collect();
    let mut s = format!(
        "rank {}\nroot system {}\n|Gamma| = {}, |W| = {}, outer quotient order {}\n",
        rep.lattice.rank,
        if types.is_empty() { "torus".to_string() } else { types.join(" x ") },
        rep.gamma_order,
        rep.weyl_order,
        rep.outer_action.order
    );
    s.push_str(&format!("Hodge classes by codimension: {}\n", rep.hodge.hodge_classes.join(" ")));
    s.push_str(&format!("endomorphism rank {}, Neron-Severi rank {}\n", rep.hodge.endo_rank, rep.hodge.ns_rank));
    for (i, f) in rep.endo.iter().enumerate() {
        s.push_str(&format!("factor {}: center degree {}, m = {}\n", i + 1, f.center_degree, f.m));
    }
    s.trim_end().to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            if let Some(path) = &cli.common.out {
                if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                use std::io::Write;
                // a closed pipe downstream is not an error
                let _ = writeln!(std::io::stdout().lock(), "{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
