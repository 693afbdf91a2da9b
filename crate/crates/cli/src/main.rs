mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use periodzero::ambient::{a_vars, Convention};
use periodzero::coinvariant::{annihilates, apply_normal_form, beta_self_check, relation_predicate, SpecialPoint};
use periodzero::firstorder::{
    first_order_membership, hesse_search, search_plane, zero_locus_equations, SearchOptions, ZeroWitness,
};
use periodzero::invariants::{
    admissible, aronhold, congruence_checks, convert_convention, degree_sanity_check, gcd_lemma_checks,
    generator_degrees, h_irreducibility,
};
use periodzero::membership::{
    evaluate_md, matrix_json, membership, stratum_entry, symbolic_matrix, verify_witness, MembershipOptions,
};
use periodzero::{Error, Result};

#[derive(Parser)]
#[command(name = "periodzero", version, about = "Exact zero loci of derivatives of CY periods")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// S, T and the discriminant of a plane cubic.
    Invariants {
        #[arg(long)]
        cubic: String,
    },
    /// Rank test for a constant-coefficient operator at a section.
    Membership {
        #[arg(long, default_value = "p2")]
        space: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        delta: String,
        /// Witness degree bound (default: order of the operator).
        #[arg(long)]
        degree: Option<usize>,
        /// Skip the smoothness test; required for m >= 3.
        #[arg(long)]
        assume_smooth: bool,
        #[arg(long, default_value_t = 20000)]
        max_rows: usize,
        #[arg(long)]
        export_matrix: Option<String>,
        /// Export the matrix with affine entries instead of evaluated ones.
        #[arg(long)]
        symbolic: bool,
    },
    /// Rank of M_d at each of a list of points.
    Stratify {
        #[arg(long, default_value = "p2")]
        space: String,
        #[arg(long)]
        points: String,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long)]
        assume_smooth: bool,
        #[arg(long, default_value_t = 20000)]
        max_rows: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// The two equations cutting out the zero locus of a first-order operator.
    Zerolocus {
        #[arg(long)]
        lambda: String,
        /// Test this point (exit 1 when it is not on the locus).
        #[arg(long)]
        point: Option<String>,
    },
    /// Looks for a point of the zero locus on random planes.
    Search {
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        budget: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1e-8)]
        disc_floor: f64,
        #[arg(long, default_value_t = 128)]
        bits: u32,
        /// Base point for every plane.
        #[arg(long)]
        anchor: Option<String>,
        /// Search the Hesse pencil instead of random planes.
        #[arg(long)]
        hesse: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Normal-form test at one of the four special points.
    Annihilate {
        #[arg(long)]
        point: String,
        #[arg(long)]
        delta: String,
    },
    /// The gcd and residue condition on a first-order operator.
    Admissible {
        #[arg(long)]
        lambda: String,
    },
    /// Built-in identities on the invariant tables.
    Selfcheck,
}

/// Process status: 0 yes / found / pass, 1 no / not found / fail.
type Outcome = (bool, Value);

fn opts(assume_smooth: bool, max_rows: usize, degree: Option<usize>) -> MembershipOptions {
    MembershipOptions { assume_smooth, max_rows, degree }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Parse(format!("thread pool: {e}")))
}

fn write_file(path: &str, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    std::fs::write(path, text + "\n").map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn witness_json(w: &ZeroWitness) -> Result<Value> {
    Ok(json!({
        "point": w.point.to_json(),
        "point_monomial": w.point.to_monomial()?.to_json(),
        "exact": w.exact,
        "plane": w.plane,
        "approximate": {
            "residual_S": w.residual_s,
            "residual_T": w.residual_t,
            "scale_S": w.scale_s,
            "scale_T": w.scale_t,
            "abs_Delta": w.abs_delta,
            "scale_Delta": w.scale_delta,
        },
    }))
}

fn run(cmd: Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::Invariants { cubic } => {
            let b = input::section(&cubic, Some(2))?;
            let v = aronhold(&convert_convention(&b, Convention::Salmon)?)?;
            eprintln!("S = {}, T = {}, Delta = {}", v.s, v.t, v.delta);
            Ok((true, serde_json::to_value(v)?))
        }
        Cmd::Membership { space, point, delta, degree, assume_smooth, max_rows, export_matrix, symbolic } => {
            let m = input::space(&space)?;
            let b = input::section(&point, Some(m))?;
            let d = input::diffop(&delta, Some(m))?;
            let o = opts(assume_smooth, max_rows, degree);
            let cert = membership(&b, &d, &o)?;
            if let Some(path) = export_matrix {
                let sm = symbolic_matrix(m, cert.d);
                let v = if symbolic { sm.to_json() } else { matrix_json(&evaluate_md(&sm, &b.to_monomial()?)?, &sm) };
                write_file(&path, &v)?;
            }
            let verified = match &cert.witness {
                Some(w) => Some(verify_witness(&b, &d, w)?),
                None => None,
            };
            eprintln!(
                "{}: rank M = {}, rank [M|theta] = {} ({} x {})",
                if cert.member { "member" } else { "non-member" },
                cert.rank_m,
                cert.rank_aug,
                cert.rows,
                cert.cols
            );
            let mut v = serde_json::to_value(&cert)?;
            v["witness_verified"] = json!(verified);
            Ok((cert.member, v))
        }
        Cmd::Stratify { space, points, degree, assume_smooth, max_rows, jobs } => {
            let m = input::space(&space)?;
            let pts = input::sections(&points, Some(m))?;
            let o = opts(assume_smooth, max_rows, None);
            let entries: Vec<_> = pool(jobs)?
                .install(|| pts.par_iter().enumerate().map(|(i, b)| stratum_entry(i, b, degree, &o)).collect());
            eprintln!("{} points at d = {degree}", entries.len());
            Ok((true, json!({"m": m, "d": degree, "entries": entries})))
        }
        Cmd::Zerolocus { lambda, point } => {
            let lam = input::first_order(&lambda)?;
            let (ds, dt) = zero_locus_equations(&lam);
            let mut v = json!({
                "vars": a_vars(2).to_vec(),
                "convention": "salmon",
                "delta_S": ds.to_json_terms(),
                "delta_T": dt.to_json_terms(),
            });
            let mut yes = true;
            if let Some(p) = point {
                let b = input::section(&p, Some(2))?;
                yes = first_order_membership(&lam, &b)?;
                v["on_locus"] = json!(yes);
            }
            eprintln!("deltaS: {} terms, deltaT: {} terms", ds.num_terms(), dt.num_terms());
            Ok((yes, v))
        }
        Cmd::Search { lambda, seed, budget, tol, disc_floor, bits, anchor, hesse, jobs } => {
            let lam = input::first_order(&lambda)?;
            if hesse {
                let r = hesse_search(&lam)?;
                eprintln!("{} common roots on the Hesse pencil", r.roots.len());
                let found = !r.roots.is_empty();
                return Ok((found, json!({"found": found, "hesse": r})));
            }
            let anchor = anchor.map(|a| input::section(&a, Some(2))).transpose()?;
            let so = SearchOptions {
                seed,
                budget,
                residual_tol: tol,
                disc_floor,
                precision_bits: bits,
                anchor,
                ..Default::default()
            };
            let trials: Vec<_> = if jobs <= 1 {
                let mut out = Vec::new();
                for k in 0..budget {
                    let r = search_plane(&lam, &so, k)?;
                    let hit = r.1.is_some();
                    out.push(r);
                    if hit {
                        break;
                    }
                }
                out
            } else {
                pool(jobs)?.install(|| (0..budget).into_par_iter().map(|k| search_plane(&lam, &so, k)).collect::<Result<Vec<_>>>())?
            };
            let mut planes = Vec::new();
            let mut witness = None;
            for (outcome, w) in trials {
                planes.push(outcome);
                if w.is_some() {
                    witness = w;
                    break;
                }
            }
            let found = witness.is_some();
            eprintln!("{} after {} planes", if found { "found" } else { "not found" }, planes.len());
            let w = witness.as_ref().map(witness_json).transpose()?;
            Ok((found, json!({"found": found, "seed": seed, "budget": budget, "planes": planes, "witness": w})))
        }
        Cmd::Annihilate { point, delta } => {
            let pt: SpecialPoint = point.parse()?;
            let d = input::diffop(&delta, Some(pt.m()))?;
            let nf = apply_normal_form(pt, &d)?;
            let ann = annihilates(pt, &d)?;
            let rel = relation_predicate(pt, &d)?;
            let rank = if pt.is_smooth() { Some(membership(&pt.section(), &d, &MembershipOptions::default())?.member) } else { None };
            let agree = rel == ann && rank.is_none_or(|r| r == ann);
            eprintln!("{pt}: {}", if ann { "annihilates" } else { "does not annihilate" });
            Ok((
                ann,
                json!({
                    "point": pt.to_string(),
                    "normal_form": nf.0.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "annihilates": ann,
                    "relation": rel,
                    "rank": rank,
                    "agree": agree,
                }),
            ))
        }
        Cmd::Admissible { lambda } => {
            let lam = input::first_order(&lambda)?;
            let a = admissible(&lam)?;
            let report = gcd_lemma_checks(&lam)?;
            eprintln!("{}", if a { "admissible" } else { "not admissible" });
            Ok((a, json!({"admissible": a, "gcd": report})))
        }
        Cmd::Selfcheck => {
            let rep = congruence_checks();
            let mut checks = serde_json::to_value(&rep.checks)?;
            let h = h_irreducibility();
            let degs = generator_degrees();
            let deg_ok = degree_sanity_check();
            let beta_ok = beta_self_check();
            let extra = json!([
                {"name": "h_irreducible_f2", "pass": h},
                {"name": "generator_degree_1_mod_3", "pass": deg_ok, "detail": format!("{degs:?}")},
                {"name": "exponent_maps", "pass": beta_ok},
            ]);
            if let (Value::Array(a), Value::Array(b)) = (&mut checks, extra) {
                a.extend(b);
            }
            let pass = rep.all_pass() && h && deg_ok && beta_ok;
            eprintln!("selfcheck: {}", if pass { "all pass" } else { "FAILED" });
            Ok((pass, json!({"pass": pass, "checks": checks})))
        }
    }
}

fn error_json(kind: &str, message: &str) -> String {
    json!({"error": {"kind": kind, "message": message}}).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            println!("{}", error_json("usage", e.to_string().trim()));
            return ExitCode::from(2);
        }
    };
    match run(cli.cmd) {
        Ok((yes, v)) => {
            println!("{v}");
            ExitCode::from(if yes { 0 } else { 1 })
        }
        Err(e) => {
            println!("{}", error_json(e.kind(), &e.to_string()));
            ExitCode::from(2)
        }
    }
}
