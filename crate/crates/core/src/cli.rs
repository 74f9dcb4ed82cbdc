//! Command-line front end.

use crate::chain_builder::{build_chain, diagonalize, ChainKind, DEFAULT_BIN_TOL};
use crate::dynamical_spectrum::{degeneracy, energy, magnetic_levels, z_truncated, DynParams, MultiIndex};
use crate::error::{Error, Result};
use crate::nn_chain::{algebraic_vectors, conjecture_check, dims, residual};
use crate::partition_functions::{z_chain, z_chain_magnetic};
use crate::site_solver::{
    monic_site_polynomial, nn_gaussian_mse_with, nn_site_diagnostics, solve_sites, ChainFamily, StepConvention,
};
use crate::spectral_stats::{gaussian_compare, moments_closed, moments_from_table, sigmas_closed, Moments};
use crate::spectrum::big_to_f64;
use crate::spin_algebra::{trace_product, Generator, Sign, SpinSpace, SpinVector, DEFAULT_DIM_CAP};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;

#[derive(Parser, Debug)]
#[command(name = "hschain", about = "Spectra and partition functions of Haldane-Shastry type spin chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Worker threads (default: all cores, or HSCHAIN_THREADS)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Nn,
    Pf,
    Hs,
    Bcn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Heisenberg,
    Hs,
    Pf,
    Bcn,
    BcnMagnetic,
    Nn,
}

fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    s.parse::<Sign>().map_err(|e| e.to_string())
}

#[derive(clap::Args, Debug, Clone)]
pub struct SpinArgs {
    #[arg(long = "N")]
    pub n: usize,
    /// Twice the spin, 2M
    #[arg(long = "two-m", default_value_t = 1)]
    pub two_m: u32,
}

#[derive(clap::Args, Debug, Clone)]
pub struct SignArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign, default_value = "-1")]
    pub eps: Sign,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign, default_value = "-1")]
    pub epsp: Sign,
}

#[derive(clap::Args, Debug, Clone)]
pub struct CouplingArgs {
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub betap: Option<f64>,
    /// β̄, for symbolic outputs when β, β′ are not given
    #[arg(long = "beta-bar")]
    pub beta_bar: Option<f64>,
}

impl CouplingArgs {
    fn pair(&self) -> Result<(f64, f64)> {
        match (self.beta, self.betap) {
            (Some(b), Some(bp)) => Ok((b, bp)),
            _ => Err(Error::InvalidArgument("--beta and --betap are required".into())),
        }
    }

    fn bar(&self) -> Option<f64> {
        self.beta_bar.or(match (self.beta, self.betap) {
            (Some(b), Some(bp)) => Some(0.5 * (b + bp)),
            _ => None,
        })
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Equilibrium sites of a chain family
    Sites {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long = "N")]
        n: usize,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Exact diagonalization of a chain
    ChainSpectrum {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        spin: SpinArgs,
        #[command(flatten)]
        signs: SignArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
        /// Magnetic field B
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        field: f64,
    },
    /// Closed-form spectrum of the BC_N chain
    Partition {
        #[command(flatten)]
        spin: SpinArgs,
        #[command(flatten)]
        signs: SignArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long = "T")]
        t: Option<f64>,
    },
    /// Closed-form spectrum of the spin 1/2 BC_N chain in a magnetic field
    MagneticPartition {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign, default_value = "-1")]
        epsp: Sign,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long = "T")]
        t: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        field: f64,
    },
    /// Levels of the dynamical model below a cutoff
    DynSpectrum {
        #[command(flatten)]
        spin: SpinArgs,
        #[command(flatten)]
        signs: SignArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 4)]
        cutoff: u32,
        #[arg(long, allow_hyphen_values = true)]
        field: Option<f64>,
    },
    /// Spin over scalar partition functions against the chain partition function
    FreezeCheck {
        #[command(flatten)]
        spin: SpinArgs,
        #[command(flatten)]
        signs: SignArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long)]
        a: f64,
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = 40)]
        cutoff: u32,
    },
    /// Mean, variance and Gaussian comparison of BC_N spectra
    Stats {
        #[command(flatten)]
        spin: SpinArgs,
        #[command(flatten)]
        signs: SignArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
        /// Sweep N = 2..=N over all four sign choices
        #[arg(long)]
        sweep: bool,
    },
    /// Algebraic eigenvectors of the NN chain
    NnAlgebraic {
        #[command(flatten)]
        spin: SpinArgs,
    },
    /// Integer levels of the NN chain
    NnScan {
        #[command(flatten)]
        spin: SpinArgs,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Trace of a product of spin operators, e.g. --gens "S(1,2) T(1,2) S(3)"
    Traces {
        #[command(flatten)]
        spin: SpinArgs,
        #[arg(long, num_args = 1.., required = true)]
        gens: Vec<String>,
    },
}

/// Parses `argv`, runs the command, and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let threads = cli.threads.or_else(|| std::env::var("HSCHAIN_THREADS").ok().and_then(|v| v.parse().ok()));
    let result = match threads {
        Some(t) if t > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(&cli))),
        _ => dispatch(&cli),
    };
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "+1",
        Sign::Minus => "-1",
    }
}

fn csv(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

fn dispatch(cli: &Cli) -> Result<String> {
    let fmt = cli.format;
    let emit = |v: Value, header: &[&str], rows: Vec<Vec<String>>| -> String {
        match fmt {
            Format::Json => json_text(&v),
            Format::Csv => csv(header, rows),
        }
    };
    match &cli.command {
        Command::Sites { family, n, coupling, tol } => {
            let fam = match family {
                Family::Nn => ChainFamily::Nn,
                Family::Pf => ChainFamily::Pf,
                Family::Hs => ChainFamily::Hs,
                Family::Bcn => {
                    let (beta, betap) = coupling.pair()?;
                    ChainFamily::Bcn { beta, betap }
                }
            };
            let cfg = solve_sites(fam, *n, *tol)?;
            let mut v = serde_json::to_value(&cfg).map_err(|e| Error::Invariant(e.to_string()))?;
            if *family == Family::Nn {
                let d = nn_site_diagnostics(&cfg)?;
                v["polynomial"] = json!(monic_site_polynomial(&cfg));
                v["sum_xi"] = json!(d.sum_xi);
                v["norm_sq"] = json!(d.norm_sq);
                v["symmetry_defect"] = json!(d.symmetry_defect);
                v["gaussian_mse_mid"] = json!(nn_gaussian_mse_with(&cfg, StepConvention::Mid));
                v["gaussian_mse_right"] = json!(nn_gaussian_mse_with(&cfg, StepConvention::Right));
            }
            let rows = cfg.xi.iter().enumerate().map(|(k, x)| vec![(k + 1).to_string(), format!("{x:?}")]).collect();
            Ok(emit(v, &["k", "xi"], rows))
        }
        Command::ChainSpectrum { kind, spin, signs, coupling, field } => {
            let ck = match kind {
                Kind::Heisenberg => ChainKind::Heisenberg,
                Kind::Hs => ChainKind::Hs,
                Kind::Pf => ChainKind::Pf,
                Kind::Nn => ChainKind::Nn,
                Kind::Bcn => {
                    let (beta, betap) = coupling.pair()?;
                    ChainKind::Bcn { eps: signs.eps, epsp: signs.epsp, beta, betap }
                }
                Kind::BcnMagnetic => {
                    let (beta, betap) = coupling.pair()?;
                    ChainKind::BcnMagnetic { epsp: signs.epsp, beta, betap, field: *field }
                }
            };
            let op = build_chain(ck, spin.n, spin.two_m)?;
            let table = diagonalize(&op, DEFAULT_BIN_TOL)?;
            let mut v = table.to_json();
            v["params"] = json!({
                "kind": format!("{kind:?}").to_lowercase(),
                "N": spin.n, "two_m": spin.two_m,
                "beta": coupling.beta, "betap": coupling.betap, "B": field,
            });
            let rows = table.entries.iter().map(|(e, d)| vec![format!("{e:?}"), d.to_string()]).collect();
            Ok(emit(v, &["energy", "degeneracy"], rows))
        }
        Command::Partition { spin, signs, coupling, t } => {
            let z = z_chain(spin.n, spin.two_m, signs.eps, signs.epsp)?;
            let table = z.spectrum_table()?;
            let mut v = table.to_json();
            v["params"] = json!({
                "N": spin.n, "two_m": spin.two_m, "eps": sign_str(signs.eps), "epsp": sign_str(signs.epsp),
            });
            if let (Some(bb), Some(t)) = (coupling.bar(), t) {
                v["value"] = json!(z.evaluate((-1.0 / t).exp(), bb, 0.0));
            }
            let rows = table
                .levels()
                .iter()
                .map(|(e, d)| vec![e.m.to_string(), e.n.to_string(), e.p.to_string(), d.to_string()])
                .collect();
            Ok(emit(v, &["m", "n", "p", "deg"], rows))
        }
        Command::MagneticPartition { n, epsp, coupling, t, field } => {
            let z = z_chain_magnetic(*n, *epsp)?;
            let table = z.spectrum_table()?;
            let mut v = table.to_json();
            v["params"] = json!({"N": n, "two_m": 1, "eps": "-1", "epsp": sign_str(*epsp)});
            if let (Some(bb), Some(t)) = (coupling.bar(), t) {
                v["value"] = json!(z.evaluate((-1.0 / t).exp(), bb, *field));
            }
            let rows = table
                .levels()
                .iter()
                .map(|(e, d)| vec![e.m.to_string(), e.n.to_string(), e.p.to_string(), d.to_string()])
                .collect();
            Ok(emit(v, &["m", "n", "p", "deg"], rows))
        }
        Command::DynSpectrum { spin, signs, coupling, a, cutoff, field } => {
            let (beta, betap) = coupling.pair()?;
            let p = DynParams { n: spin.n, two_m: spin.two_m, eps: signs.eps, epsp: signs.epsp, a: *a, beta, betap };
            p.validate()?;
            let mut rows = Vec::new();
            let mut items = Vec::new();
            for idx in MultiIndex::enumerate(spin.n, *cutoff) {
                match field {
                    Some(b) => {
                        for l in magnetic_levels(&idx, &p, *b)? {
                            rows.push(vec![
                                idx.to_csv_field(),
                                format!("{:?}", l.energy),
                                format!("{:?}", l.normalized),
                                l.multiplicity.to_string(),
                            ]);
                        }
                    }
                    None => {
                        let d = degeneracy(&idx, spin.two_m, signs.eps, signs.epsp)?;
                        if d.sign() == num_bigint::Sign::NoSign {
                            continue;
                        }
                        let e = energy(&idx, &p);
                        rows.push(vec![
                            idx.to_csv_field(),
                            format!("{:?}", e.energy),
                            format!("{:?}", e.normalized),
                            d.to_string(),
                        ]);
                    }
                }
            }
            for r in &rows {
                items.push(json!({"n": r[0], "energy": r[1].parse::<f64>().unwrap_or(f64::NAN),
                    "normalized_energy": r[2].parse::<f64>().unwrap_or(f64::NAN), "degeneracy": r[3]}));
            }
            let v = json!({"levels": items, "params": p});
            Ok(emit(v, &["n", "energy", "normalized_energy", "degeneracy"], rows))
        }
        Command::FreezeCheck { spin, signs, coupling, a, t, cutoff } => {
            let (beta, betap) = coupling.pair()?;
            let p = DynParams { n: spin.n, two_m: spin.two_m, eps: signs.eps, epsp: signs.epsp, a: *a, beta, betap };
            let sums = z_truncated(&p, *t, *cutoff)?;
            let chain = z_chain(spin.n, spin.two_m, signs.eps, signs.epsp)?.evaluate((-1.0 / t).exp(), p.beta_bar(), 0.0);
            let ratio = sums.ratio();
            let rel = (ratio - chain).abs() / chain.abs();
            let v = json!({"ratio": ratio, "chain": chain, "relative_error": rel, "sums": sums, "params": p, "T": t, "cutoff": cutoff});
            let rows = vec![vec![format!("{ratio:?}"), format!("{chain:?}"), format!("{rel:?}")]];
            Ok(emit(v, &["ratio", "chain", "relative_error"], rows))
        }
        Command::Stats { spin, signs, coupling, sweep } => {
            let cases: Vec<(usize, Sign, Sign)> = if *sweep {
                (2..=spin.n)
                    .flat_map(|n| {
                        [Sign::Minus, Sign::Plus]
                            .into_iter()
                            .flat_map(move |e| [Sign::Minus, Sign::Plus].into_iter().map(move |ep| (n, e, ep)))
                    })
                    .collect()
            } else {
                vec![(spin.n, signs.eps, signs.epsp)]
            };
            let mut rows = Vec::new();
            let mut items = Vec::new();
            for (n, eps, epsp) in cases {
                let closed = moments_closed(n, spin.two_m, eps, epsp)?;
                let table = z_chain(n, spin.two_m, eps, epsp)?.spectrum_table()?;
                let empirical = moments_from_table(&table, n, spin.two_m)?;
                let ok = closed == empirical;
                let m = closed.mean.to_f64s();
                let var = closed.variance.to_f64s();
                rows.push(vec![
                    n.to_string(),
                    format!("{}/2", spin.two_m),
                    sign_str(eps).into(),
                    sign_str(epsp).into(),
                    format!("{:?}", m[0]),
                    format!("{:?}", m[1]),
                    format!("{:?}", var[0]),
                    format!("{:?}", var[1]),
                    format!("{:?}", var[2]),
                    ok.to_string(),
                ]);
                let mut item = json!({
                    "N": n, "two_m": spin.two_m, "eps": sign_str(eps), "epsp": sign_str(epsp),
                    "mean": moments_json(&closed)["mean"], "variance": moments_json(&closed)["variance"],
                    "checks_passed": ok,
                });
                if let Some(bb) = coupling.bar() {
                    let levels: Vec<(f64, f64)> =
                        table.evaluate(bb, 0.0).into_iter().map(|(e, d)| (e, big_to_f64(&d))).collect();
                    item["gaussian"] = match gaussian_compare(&levels) {
                        Ok(g) => json!(g),
                        Err(e) => json!({"error": e.to_string()}),
                    };
                    let sig = sigmas_closed(n);
                    item["sigma_closed"] =
                        json!({"s1": sig.s1.evaluate(bb), "s2": sig.s2.evaluate(bb), "s3": sig.s3.evaluate(bb)});
                }
                items.push(item);
            }
            let v = json!({ "rows": items });
            let header = ["N", "M", "eps", "epsp", "mean_c0", "mean_c1", "var_c0", "var_c1", "var_c2", "checks_passed"];
            Ok(emit(v, &header, rows))
        }
        Command::NnAlgebraic { spin } => {
            let op = build_chain::<f64>(ChainKind::Nn, spin.n, spin.two_m)?;
            let sites = op.sites.clone().ok_or_else(|| Error::Invariant("NN chain without sites".into()))?;
            let av = algebraic_vectors(spin.n, spin.two_m, &sites)?;
            let bounds = dims(spin.n, spin.two_m);
            let space = SpinSpace::new(spin.two_m, spin.n)?;
            let mut items = Vec::new();
            let mut rows = Vec::new();
            for (e, vecs) in av.by_energy.iter().enumerate() {
                let mut worst = 0.0f64;
                for v in vecs {
                    worst = worst.max(residual(&op, v, e as f64)?);
                }
                let json_vecs: Vec<Value> = vecs
                    .iter()
                    .map(|v| SpinVector::from_terms(space, v.iter().copied().enumerate()).to_json())
                    .collect();
                items.push(json!({"energy": e, "vectors": json_vecs, "rank": vecs.len(),
                    "dim_bound": bounds[e].to_string().parse::<u64>().unwrap_or(u64::MAX), "residual_max": worst}));
                rows.push(vec![e.to_string(), vecs.len().to_string(), bounds[e].to_string(), format!("{worst:?}")]);
            }
            Ok(emit(json!(items), &["energy", "rank", "dim_bound", "residual_max"], rows))
        }
        Command::NnScan { spin, tol } => {
            let op = build_chain::<f64>(ChainKind::Nn, spin.n, spin.two_m)?;
            let table = diagonalize(&op, DEFAULT_BIN_TOL)?;
            let check = conjecture_check(spin.n, spin.two_m, &table, *tol);
            let rows = check.scan.positions.iter().map(|(e, p)| vec![e.to_string(), p.to_string()]).collect();
            Ok(emit(json!(check), &["integer", "position"], rows))
        }
        Command::Traces { spin, gens } => {
            let parsed: Vec<Generator> = gens.iter().flat_map(|g| g.split_whitespace()).map(|g| g.parse()).collect::<Result<_>>()?;
            let space = SpinSpace::new(spin.two_m, spin.n)?;
            let tr = trace_product(&parsed, space, DEFAULT_DIM_CAP)?;
            let names: Vec<String> = parsed.iter().map(|g| g.to_string()).collect();
            let v = json!({"N": spin.n, "two_m": spin.two_m, "gens": names, "trace": tr.to_string()});
            Ok(emit(v, &["gens", "trace"], vec![vec![names.join(" "), tr.to_string()]]))
        }
    }
}

fn moments_json(m: &Moments) -> Value {
    let poly = |p: &crate::spectral_stats::BetaPoly| -> Value {
        json!(p.c.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    };
    json!({"mean": poly(&m.mean), "variance": poly(&m.variance)})
}
