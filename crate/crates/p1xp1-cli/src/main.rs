//! Command-line surface for the exact Seshadri / packing toolkit.
//!
//! All numeric JSON output is exact (decimal-string integers); the only
//! floating-point output is in explicitly float-flagged diagnostics.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use p1xp1::dynamics::{curve_c, xi, DynamicsError, SequenceTriple};
use p1xp1::exact::{parse_rational, rat_i, rational_to_string, ExactError};
use p1xp1::lattice::{AmpleBundle, FullClass, LatticeError, SymClass};
use p1xp1::nefgen::{
    default_certificates, nef_preserving_pullback, reflect, xi_e_r, CertifiedNefClass,
    NefgenError, ReflectionSetup,
};
use p1xp1::oracle::{
    check_alpha_float, check_n_finder_vs_phi, check_nu_golden, nef_duality_epsilon_auto,
    slope_table_regen, CheckReport, OracleError,
};
use p1xp1::packing::{nu, unusual_r, PackingError};
use p1xp1::seshadri::{alpha_surd, epsilon, SeshadriError};

#[derive(Parser)]
#[command(name = "p1xp1", version, about = "Exact Seshadri and packing constants on blowups of P1 x P1")]
struct Cli {
    /// Working precision (bits) for floating-point diagnostics.
    #[arg(long, global = true, default_value_t = 256)]
    precision: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct BundleArgs {
    /// First polarization degree (integer or "p/q").
    #[arg(long)]
    e1: String,
    /// Second polarization degree (integer or "p/q").
    #[arg(long)]
    e2: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// The r-point Seshadri constant of the bundle (e1, e2).
    Seshadri {
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        bundle: BundleArgs,
        /// JSON output (the default).
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// One CSV row instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// The r-ball packing constant of the bundle (e1, e2).
    Packing {
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        bundle: BundleArgs,
    },
    /// Full-packing classification for every r in a range.
    Fullpack {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long)]
        rmin: u32,
        #[arg(long)]
        rmax: u32,
    },
    /// The unique (r, n) whose generator slope matches the bundle, if any.
    UnusualR {
        #[command(flatten)]
        bundle: BundleArgs,
    },
    /// The integer sequences p, m, q and generator slopes for even r.
    Sequences {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        nmax: i64,
    },
    /// Square-zero cone slice: generator list, optionally an SVG diagram.
    Cone {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 5)]
        window: i64,
        /// Write the slice diagram to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Certified square-zero nef classes with provenance.
    Nefgen {
        #[arg(long)]
        r: u32,
        /// Emit the full default certificate pool.
        #[arg(long)]
        all: bool,
        /// Emit the single family member with this e-parameter.
        #[arg(long, conflicts_with = "all")]
        e: Option<i64>,
        /// Reflect the standard classes in the bidegree-(G1,G2) class.
        #[arg(long, num_args = 2, value_names = ["G1", "G2"], conflicts_with_all = ["all", "e"])]
        reflect: Option<Vec<u32>>,
        /// Pull the certificate pool back along the (A,B) cover.
        #[arg(long, num_args = 2, value_names = ["A", "B"], conflicts_with_all = ["all", "e", "reflect"])]
        pullback: Option<Vec<u32>>,
    },
    /// Oracle self-checks as JSON lines; exit 0 iff everything passes.
    Verify {
        /// Skip the slower duality sweep.
        #[arg(long)]
        fast: bool,
    },
}

/// A domain error: module error name on stderr, exit code 1.
struct DomainError {
    name: &'static str,
    msg: String,
}

macro_rules! from_error {
    ($ty:ty, $name:literal) => {
        impl From<$ty> for DomainError {
            fn from(e: $ty) -> DomainError {
                DomainError { name: $name, msg: e.to_string() }
            }
        }
    };
}

from_error!(ExactError, "ExactError");
from_error!(LatticeError, "LatticeError");
from_error!(DynamicsError, "DynamicsError");
from_error!(SeshadriError, "SeshadriError");
from_error!(PackingError, "PackingError");
from_error!(NefgenError, "NefgenError");
from_error!(OracleError, "OracleError");

impl From<std::io::Error> for DomainError {
    fn from(e: std::io::Error) -> DomainError {
        DomainError { name: "IoError", msg: e.to_string() }
    }
}

fn domain(msg: impl Into<String>) -> DomainError {
    DomainError { name: "UsageDomainError", msg: msg.into() }
}

fn parse_bundle(args: &BundleArgs) -> Result<AmpleBundle, DomainError> {
    let e1 = parse_rational(&args.e1)?;
    let e2 = parse_rational(&args.e2)?;
    Ok(AmpleBundle::new(e1, e2)?)
}

fn jfull(c: &FullClass) -> serde_json::Value {
    serde_json::json!({
        "r": c.r,
        "d1": rational_to_string(&c.d1),
        "d2": rational_to_string(&c.d2),
        "mults": c.mults.iter().map(rational_to_string).collect::<Vec<_>>(),
    })
}

fn emit_certs(certs: &[CertifiedNefClass]) -> Result<(), DomainError> {
    let body = serde_json::to_string_pretty(certs).expect("serializable");
    println!("{body}");
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, DomainError> {
    match cli.cmd {
        Cmd::Seshadri { r, bundle, csv, .. } => {
            let l = parse_bundle(&bundle)?;
            let v = epsilon(r, &l)?;
            if csv {
                let witness = v
                    .witness
                    .as_ref()
                    .map(|w| format!("({}:{}:{})", w.d1, w.d2, w.e))
                    .unwrap_or_default();
                println!("r,kind,lower,upper,witness,note");
                println!(
                    "{},{},{},{},{},{}",
                    v.r,
                    if v.exact_value().is_some() { "exact" } else { "bounded" },
                    v.lower(),
                    v.upper(),
                    witness,
                    v.note
                );
            } else {
                println!("{}", serde_json::to_string(&v).expect("serializable"));
            }
        }
        Cmd::Packing { r, bundle } => {
            let l = parse_bundle(&bundle)?;
            let v = nu(r, &l)?;
            // Literal layout so the field order is stable.
            println!(
                "{{\"value\":{{\"num\":\"{}\",\"den\":\"{}\"}},\"full\":{}}}",
                v.value.numer(),
                v.value.denom(),
                v.full
            );
        }
        Cmd::Fullpack { bundle, rmin, rmax } => {
            let l = parse_bundle(&bundle)?;
            if rmin > rmax {
                return Err(domain("need rmin <= rmax"));
            }
            println!("r,value,full");
            for r in rmin..=rmax {
                let v = nu(r, &l)?;
                println!("{},{},{}", r, rational_to_string(&v.value), v.full);
            }
        }
        Cmd::UnusualR { bundle } => {
            let l = parse_bundle(&bundle)?;
            match unusual_r(&l)? {
                Some(hit) => println!("{}", serde_json::json!({ "r": hit.r, "n": hit.n })),
                None => println!("null"),
            }
        }
        Cmd::Sequences { r, nmax } => {
            let seqs = SequenceTriple::new(r)?;
            println!("n,p,m,q,slope");
            for n in -nmax..=nmax {
                let slope = seqs
                    .xi_slope(n)
                    .map(|s| rational_to_string(&s))
                    .unwrap_or_default();
                println!("{},{},{},{},{}", n, seqs.p(n), seqs.m(n), seqs.q(n), slope);
            }
        }
        Cmd::Cone { r, window, svg } => {
            let seqs = SequenceTriple::new(r)?;
            let mut rows = Vec::new();
            for n in -window..=window {
                rows.push(serde_json::json!({
                    "kind": "xi", "n": n,
                    "class": xi(&seqs, n),
                }));
                rows.push(serde_json::json!({
                    "kind": "curve", "n": n,
                    "class": curve_c(&seqs, n),
                }));
            }
            println!("{}", serde_json::Value::Array(rows));
            if let Some(path) = svg {
                std::fs::write(&path, cone_svg(r, window, &seqs))?;
            }
        }
        Cmd::Nefgen { r, e, reflect: refl, pullback: pb, .. } => {
            if let Some(e) = e {
                emit_certs(&[xi_e_r(e, r)?])?;
            } else if let Some(g) = refl {
                let setup = ReflectionSetup::new(r, g[0], g[1])?;
                let zeros = vec![0i64; r as usize];
                let named: [(&str, FullClass); 4] = [
                    ("F1", FullClass::from_ints(r, 1, 0, &zeros)),
                    ("F2", FullClass::from_ints(r, 0, 1, &zeros)),
                    ("-K", FullClass::uniform(r, rat_i(2), rat_i(2), rat_i(1))),
                    ("G0", setup.g0()),
                ];
                let mut rows = Vec::new();
                for (label, c) in &named {
                    rows.push(serde_json::json!({
                        "provenance": format!(
                            "reflection of {label} in the bidegree-({},{}) class",
                            g[0], g[1]
                        ),
                        "class": jfull(&reflect(&setup, c)?),
                    }));
                }
                println!("{}", serde_json::Value::Array(rows));
            } else if let Some(ab) = pb {
                let mut out = Vec::new();
                for cert in default_certificates(r) {
                    if let Ok(up) = nef_preserving_pullback(ab[0], ab[1], &cert) {
                        out.push(up);
                    }
                }
                emit_certs(&out)?;
            } else {
                // --all, also the default view.
                emit_certs(&default_certificates(r))?;
            }
        }
        Cmd::Verify { fast } => {
            let mut all_pass = true;
            let mut emit = |rep: CheckReport| {
                all_pass &= rep.passed;
                println!("{}", serde_json::to_string(&rep).expect("serializable"));
            };
            emit(check_alpha_float(12, cli.precision));
            emit(check_nu_golden());
            for (r, e1, e2) in [(10u32, 2i64, 7i64), (10, 7, 2), (12, 1, 9), (16, 3, 50)] {
                let l = AmpleBundle::from_ints(e1, e2);
                emit(check_n_finder_vs_phi(r, &l, cli.precision)?);
            }
            for r in 1..=8u32 {
                let rep = slope_table_regen(r)?;
                emit(CheckReport {
                    id: format!("table-regen-r{r}"),
                    passed: rep.matches,
                    details: format!("flags: {:?}", rep.flags),
                });
            }
            if !fast {
                for r in [8u32, 10, 12, 14, 20] {
                    let mut passed = true;
                    let mut checked = 0;
                    for (e1, e2) in
                        [(1i64, 1i64), (1, 2), (2, 7), (3, 5), (5, 3), (1, 17), (9, 2)]
                    {
                        let l = AmpleBundle::from_ints(e1, e2);
                        let oracle = nef_duality_epsilon_auto(r, &l)?;
                        let direct = epsilon(r, &l)?;
                        let ok = match direct.exact_value() {
                            Some(v) => &oracle == v,
                            None => &oracle == direct.upper(),
                        };
                        passed &= ok;
                        checked += 1;
                    }
                    emit(CheckReport {
                        id: format!("duality-sweep-r{r}"),
                        passed,
                        details: format!("{checked} bundles vs the curve-orbit minimum"),
                    });
                }
            }
            return Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Deterministic SVG of the square-zero cone slice: classes (d1, d2, e) with
/// d1 + d2 > 0 map to x = d2/(d1+d2) and y = -e/(d1+d2); the square-zero
/// locus 2 d1 d2 = r e^2 becomes the arc y = sqrt(2 x (1-x) / r).
fn cone_svg(r: u32, window: i64, seqs: &SequenceTriple) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const ML: f64 = 40.0; // left margin
    const MB: f64 = 40.0; // bottom margin
    let rf = r as f64;

    let project = |c: &SymClass| -> Option<(f64, f64)> {
        let d1 = c.d1.approx_f64();
        let d2 = c.d2.approx_f64();
        let e = c.e.approx_f64();
        let s = d1 + d2;
        if s <= 0.0 {
            return None;
        }
        Some((d2 / s, -e / s))
    };

    // Marker sets first, so the vertical scale can cover everything.
    let mut xis = Vec::new();
    let mut curves = Vec::new();
    for n in -window..=window {
        if let Some(p) = project(&xi(seqs, n)) {
            xis.push(p);
        }
        if let Some(p) = project(&curve_c(seqs, n)) {
            curves.push(p);
        }
    }
    let arc_max = (0.5 / rf).sqrt();
    let mut ymax = arc_max.max(2.0 / rf);
    for (_, y) in xis.iter().chain(&curves) {
        ymax = ymax.max(*y);
    }
    ymax *= 1.1;

    let px = |x: f64| ML + x * (W - 2.0 * ML);
    let py = |y: f64| (H - MB) - (y / ymax) * (H - 2.0 * MB);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(
        s,
        "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>"
    );
    // Axis (the d1 d2-ray segment from F1 at x=0 to F2 at x=1).
    let _ = writeln!(
        s,
        "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"black\" stroke-width=\"1\"/>",
        px(0.0), py(0.0), px(1.0), py(0.0)
    );
    // Square-zero arc.
    let mut pts = String::new();
    for i in 0..=200 {
        let x = i as f64 / 200.0;
        let y = (2.0 * x * (1.0 - x) / rf).sqrt();
        let _ = write!(pts, "{:.3},{:.3} ", px(x), py(y));
    }
    let _ = writeln!(
        s,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
        pts.trim_end()
    );
    // Canonical-orthogonal line y = 2/r.
    let _ = writeln!(
        s,
        "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>",
        px(0.0), py(2.0 / rf), px(1.0), py(2.0 / rf)
    );
    // Eigenrays (gray): slope alpha and its reciprocal, on the arc.
    if r >= 8 {
        let alpha = alpha_surd(r).approx_f64();
        for t in [alpha, 1.0 / alpha] {
            let x = t / (1.0 + t);
            let y = (2.0 * x * (1.0 - x) / rf).sqrt();
            let _ = writeln!(
                s,
                "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"5\" fill=\"gray\"/>",
                px(x), py(y)
            );
        }
    }
    // xi markers (hollow) and curve markers (solid).
    for (x, y) in &xis {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"4\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
            px(*x), py(*y)
        );
    }
    for (x, y) in &curves {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"black\"/>",
            px(*x), py(*y)
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}: {}", e.name, e.msg);
            ExitCode::FAILURE
        }
    }
}
