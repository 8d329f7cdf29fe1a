use std::process::ExitCode;

use clap::{Parser, Subcommand};

use etale::cup::{CupContext, H1Class};
use etale::field::DEFAULT_DEGREE_CAP;
use etale::galois::{Convention, LegendreMap, PicHom};
use etale::genus2::{scan, verify_counterexample};
use etale::pairing::weil_rational;
use etale::{make_context, Curve, Error, Point};

#[derive(Parser, Debug)]
#[command(name = "etale", version, about = "Cup products and Legendre derivatives on elliptic curves over F_p")]
struct Cli {
    /// Largest extension degree searched for torsion fields.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_CAP)]
    cap: usize,
    /// Write the record to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Weil pairing of two rational ell-torsion points.
    Weil {
        #[arg(long)]
        curve: String,
        #[arg(long = "P", allow_hyphen_values = true)]
        p: String,
        #[arg(long = "Q", allow_hyphen_values = true)]
        q: String,
    },
    /// Cup product of two classes "P=x,y;c=k".
    Cup {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Triple product t(a cup b) for t = "t0=k;phi=k1,k2".
    Triple {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Legendre derivative of a rational ell-torsion point.
    Dlegendre {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Working precision ell^N (default: one more than the exponent of E(F_q)[ell^inf]).
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Dimension of the span of cups of normalized classes.
    Span {
        #[arg(long)]
        curve: String,
    },
    /// The genus-two family.
    Genus2 {
        #[command(subcommand)]
        cmd: Genus2Cmd,
    },
}

#[derive(Subcommand, Debug)]
enum Genus2Cmd {
    /// Torsion and divisibility checks at one admissible prime.
    Verify { q: u64 },
    /// All primes up to q_max.
    Scan {
        q_max: u64,
        #[arg(long)]
        csv: bool,
    },
}

struct CurveSpec {
    p: u64,
    ell: u64,
    a: i64,
    b: i64,
}

fn parse_curve(s: &str) -> Result<CurveSpec, String> {
    let (mut p, mut ell, mut a, mut b) = (None, None, None, None);
    for part in s.split(',') {
        let (k, v) = part.split_once(':').ok_or_else(|| format!("bad curve field '{part}'"))?;
        let v = v.trim();
        match k.trim() {
            "p" => p = Some(v.parse::<u64>().map_err(|e| format!("p: {e}"))?),
            "l" => ell = Some(v.parse::<u64>().map_err(|e| format!("l: {e}"))?),
            "a" => a = Some(v.parse::<i64>().map_err(|e| format!("a: {e}"))?),
            "b" => b = Some(v.parse::<i64>().map_err(|e| format!("b: {e}"))?),
            other => return Err(format!("unknown curve field '{other}'")),
        }
    }
    Ok(CurveSpec {
        p: p.ok_or("curve spec needs p")?,
        ell: ell.ok_or("curve spec needs l")?,
        a: a.ok_or("curve spec needs a")?,
        b: b.ok_or("curve spec needs b")?,
    })
}

fn parse_point(s: &str) -> Result<Option<(i64, i64)>, String> {
    let s = s.trim();
    if s == "inf" {
        return Ok(None);
    }
    let (x, y) = s.split_once(',').ok_or_else(|| format!("bad point '{s}'"))?;
    let x = x.trim().parse::<i64>().map_err(|e| format!("point x: {e}"))?;
    let y = y.trim().parse::<i64>().map_err(|e| format!("point y: {e}"))?;
    Ok(Some((x, y)))
}

fn fields(s: &str) -> Result<Vec<(&str, &str)>, String> {
    s.split(';')
        .filter(|x| !x.trim().is_empty())
        .map(|kv| kv.split_once('=').map(|(k, v)| (k.trim(), v.trim())).ok_or_else(|| format!("bad field '{kv}'")))
        .collect()
}

fn parse_h1(s: &str) -> Result<(Option<(i64, i64)>, i64), String> {
    let (mut p, mut c) = (None, 0);
    for (k, v) in fields(s)? {
        match k {
            "P" => p = Some(parse_point(v)?),
            "c" => c = v.parse::<i64>().map_err(|e| format!("c: {e}"))?,
            other => return Err(format!("unknown class field '{other}'")),
        }
    }
    Ok((p.ok_or("class needs P=")?, c))
}

fn parse_hom(s: &str) -> Result<(i64, Vec<i64>), String> {
    let (mut t0, mut phi) = (0, Vec::new());
    for (k, v) in fields(s)? {
        match k {
            "t0" => t0 = v.parse::<i64>().map_err(|e| format!("t0: {e}"))?,
            "phi" => {
                phi = v
                    .split(',')
                    .filter(|x| !x.trim().is_empty())
                    .map(|x| x.trim().parse::<i64>().map_err(|e| format!("phi: {e}")))
                    .collect::<Result<_, _>>()?
            }
            other => return Err(format!("unknown functional field '{other}'")),
        }
    }
    Ok((t0, phi))
}

enum Fail {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Compute(e)
    }
}

impl From<String> for Fail {
    fn from(e: String) -> Self {
        Fail::Usage(e)
    }
}

impl From<&str> for Fail {
    fn from(e: &str) -> Self {
        Fail::Usage(e.to_string())
    }
}

fn build_curve(spec: &CurveSpec, cap: usize) -> Result<Curve, Error> {
    let ctx = make_context(spec.p, spec.ell, 1)?;
    let p = spec.p as i64;
    Curve::with_cap(ctx, spec.a.rem_euclid(p) as u64, spec.b.rem_euclid(p) as u64, cap)
}

fn point(curve: &Curve, xy: Option<(i64, i64)>) -> Result<Point, Error> {
    match xy {
        None => Ok(Point::Inf),
        Some((x, y)) => curve.point(x, y),
    }
}

fn list(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn run(cli: Cli) -> Result<String, Fail> {
    let cap = cli.cap;
    match cli.cmd {
        Cmd::Weil { curve, p, q } => {
            let spec = parse_curve(&curve)?;
            let (pp, qq) = (parse_point(&p)?, parse_point(&q)?);
            let c = build_curve(&spec, cap)?;
            let (pp, qq) = (point(&c, pp)?, point(&c, qq)?);
            let w = weil_rational(&c, &pp, &qq)?;
            let f = c.field();
            let value = f.pow_u64(&f.canonical_mu_generator(), w.e);
            Ok(format!("e={};value={};zeta0={}", w.e, value, f.zeta0()))
        }
        Cmd::Cup { curve, a, b } => {
            let spec = parse_curve(&curve)?;
            let (ha, hb) = (parse_h1(&a)?, parse_h1(&b)?);
            let c = build_curve(&spec, cap)?;
            let cx = CupContext::new(&c)?;
            let ha = cx.h1_new(point(&c, ha.0)?, ha.1)?;
            let hb = cx.h1_new(point(&c, hb.0)?, hb.1)?;
            let h = cx.cup_product(&ha, &hb)?;
            Ok(format!("deg={};pic0={};zeta0={}", h.deg_coeff, list(&h.pic0), c.field().zeta0()))
        }
        Cmd::Triple { curve, t, a, b } => {
            let spec = parse_curve(&curve)?;
            let (t0, phi) = parse_hom(&t)?;
            let (ha, hb) = (parse_h1(&a)?, parse_h1(&b)?);
            let c = build_curve(&spec, cap)?;
            let cx = CupContext::new(&c)?;
            let l = c.ell() as i64;
            let t = PicHom {
                t0: t0.rem_euclid(l) as u64,
                phi: phi.iter().map(|x| x.rem_euclid(l) as u64).collect(),
            };
            if t.phi.len() != cx.rank() {
                return Err(Fail::Compute(Error::Precondition(format!(
                    "phi has {} entries but Pic^0/ell has dimension {}",
                    t.phi.len(),
                    cx.rank()
                ))));
            }
            let ha: H1Class = cx.h1_new(point(&c, ha.0)?, ha.1)?;
            let hb: H1Class = cx.h1_new(point(&c, hb.0)?, hb.1)?;
            let r = cx.triple_product(&t, &ha, &hb)?;
            Ok(format!("e={};zeta0={}", r.e, c.field().zeta0()))
        }
        Cmd::Dlegendre { curve, point: pt, precision } => {
            let spec = parse_curve(&curve)?;
            let xy = parse_point(&pt)?;
            if precision == Some(0) {
                return Err(Fail::Usage("precision must be at least 1".into()));
            }
            let c = build_curve(&spec, cap)?;
            let pt = point(&c, xy)?;
            let dl = match precision {
                None => LegendreMap::new(&c)?,
                Some(n) => LegendreMap::with(&c, n, Convention::Arithmetic)?,
            };
            let v = dl.apply(&pt)?;
            Ok(format!("dl={};precision={}", list(&v), dl.prec))
        }
        Cmd::Span { curve } => {
            let spec = parse_curve(&curve)?;
            let c = build_curve(&spec, cap)?;
            let (dim, cond) = CupContext::new(&c)?.normalized_cup_span()?;
            Ok(format!("dim={dim};condition_ii={cond}"))
        }
        Cmd::Genus2 { cmd: Genus2Cmd::Verify { q } } => {
            let r = verify_counterexample(q)?;
            Ok(format!(
                "q={};torsionE={};torsionEprime={};p1_divisible={};conclusion={}",
                r.q, r.torsion_e, r.torsion_eprime, r.p1_divisible, r.conclusion
            ))
        }
        Cmd::Genus2 { cmd: Genus2Cmd::Scan { q_max, csv } } => {
            if q_max < 2 {
                return Err(Fail::Usage("q_max must be at least 2".into()));
            }
            let r = scan(q_max)?;
            if csv {
                return Ok(r.csv().trim_end().to_string());
            }
            Ok(format!(
                "q_max={q_max};primes={};admissible={};density={:.6};density_times_27={:.4};heuristic_band=0.5..1.5",
                r.primes,
                r.admissible,
                r.density(),
                27.0 * r.density()
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let out = cli.out.clone();
    match run(cli) {
        Ok(record) => {
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, format!("{record}\n")) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{record}"),
            }
            ExitCode::SUCCESS
        }
        Err(Fail::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
