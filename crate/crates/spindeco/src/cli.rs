//! Command-line interface: every computation as a subcommand writing
//! reproducible CSV/JSON data files.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use crate::coupling::{self, CouplingSpec};
use crate::error::{Error, Result};
use crate::evolution;
use crate::external::{self, BathSpec};
use crate::kernel;
use crate::montecarlo;
use crate::output::{ensure_dir, write_csv, write_field, RunManifest};
use crate::sphere::{Grid, RadialMap};
use crate::states;
use crate::wigner::{FieldKind, FieldNormalization};

const USAGE: &str = "spindeco <command> [flags]

commands:
  zl                --spec FILE [--out DIR]
                      per-channel ratios Z(l) and their scaling limit Y(l/2j)
  timescales        --spec FILE [--out DIR]
                      characteristic times and derived couplings (JSON)
  kernel            --z V --tmax V [--dt V] [--out DIR] | --surface [--tmax V] [--out DIR]
                      decoherence kernel M(t, z)
  psi               [--tpmax V] [--dt V] [--out DIR]
                      slow-channel scaling function
  phi               [--tmax V] [--dt V] [--out DIR]
                      near-unit-z first correction
  evolve            --state coherent|cat2|cat3|random --spec FILE --times LIST
                    [--grid N] [--rmax V] [--map tan|arctan] [--kind wigner|husimi]
                    [--theta V] [--phi V] [--seed N] [--out DIR]
                      phase-space movie frames (CSV per time + manifest)
  diffusion-profile [--rmax V] [--n N] [--out DIR]
                      self-similar diffusion profile vs matched Gaussian
  magnetization     --spec FILE [--tmax V] [--dt V] [--theta V] [--out DIR]
                      large-spin relaxation of S_z
  external          --E V --zav V --zl V --tmax V [--dt V] [--out DIR]
                      kernel for an environment started in an energy eigenstate
  diffusion         --spec FILE --E V [--out DIR]
                      fast-bath diffusion coefficient (JSON)
  mc-validate       --spec FILE --N V --samples V [--seed N] [--times LIST] [--out DIR]
                      finite-size Monte Carlo vs the analytic kernel (JSON)
  figures           --id appendix-A [--out DIR]
                      regenerate the channel-ratio plot family datasets

environment:
  SPINDECO_THREADS  cap on worker threads";

struct Args {
    flags: BTreeMap<String, String>,
    switches: BTreeSet<String>,
}

impl Args {
    fn parse(argv: &[String], allowed: &[&str], allowed_switches: &[&str]) -> Result<Args> {
        let mut flags = BTreeMap::new();
        let mut switches = BTreeSet::new();
        let mut i = 0;
        while i < argv.len() {
            let a = &argv[i];
            let Some(name) = a.strip_prefix("--") else {
                return Err(Error::InvalidSpec {
                    field: a.clone(),
                    reason: "expected a --flag".into(),
                });
            };
            if allowed_switches.contains(&name) {
                switches.insert(name.to_string());
                i += 1;
                continue;
            }
            if !allowed.contains(&name) {
                return Err(Error::InvalidSpec {
                    field: format!("--{name}"),
                    reason: "unknown flag".into(),
                });
            }
            let Some(value) = argv.get(i + 1) else {
                return Err(Error::InvalidSpec {
                    field: format!("--{name}"),
                    reason: "missing value".into(),
                });
            };
            flags.insert(name.to_string(), value.clone());
            i += 2;
        }
        Ok(Args { flags, switches })
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.flags.get(name).map(|s| s.as_str())
    }

    fn require(&self, name: &str) -> Result<&str> {
        self.get(name).ok_or_else(|| Error::InvalidSpec {
            field: format!("--{name}"),
            reason: "required flag missing".into(),
        })
    }

    fn f64_or(&self, name: &str, default: f64) -> Result<f64> {
        match self.get(name) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::InvalidSpec {
                field: format!("--{name}"),
                reason: format!("not a number: {v}"),
            }),
        }
    }

    fn u64_or(&self, name: &str, default: u64) -> Result<u64> {
        match self.get(name) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::InvalidSpec {
                field: format!("--{name}"),
                reason: format!("not an integer: {v}"),
            }),
        }
    }

    fn has(&self, name: &str) -> bool {
        self.switches.contains(name)
    }
}

fn load_spec(path: &str) -> Result<CouplingSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidSpec {
        field: "--spec".into(),
        reason: format!("cannot read {path}: {e}"),
    })?;
    CouplingSpec::parse_json(&text)
}

fn parse_times(list: &str) -> Result<Vec<f64>> {
    list.split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| Error::InvalidSpec {
                field: "--times".into(),
                reason: format!("not a number: {s}"),
            })
        })
        .collect()
}

fn init_threads() {
    if let Ok(v) = std::env::var("SPINDECO_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

/// Entry point; returns the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    init_threads();
    let Some((command, rest)) = argv.split_first() else {
        eprintln!("{USAGE}");
        return 2;
    };
    let result = dispatch(command, rest);
    match result {
        Ok(manifest) => {
            println!("{}", manifest.to_json());
            0
        }
        Err(e @ Error::InvalidSpec { .. }) => {
            // distinguish usage errors (unknown flag / missing value) from
            // invalid content
            let msg = e.to_string();
            if msg.contains("unknown flag")
                || msg.contains("missing value")
                || msg.contains("expected a --flag")
                || msg.contains("required flag missing")
            {
                eprintln!("error: {msg}");
                eprintln!("{USAGE}");
                2
            } else {
                eprintln!("error: {msg}");
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(command: &str, rest: &[String]) -> Result<RunManifest> {
    match command {
        "zl" => cmd_zl(rest),
        "timescales" => cmd_timescales(rest),
        "kernel" => cmd_kernel(rest),
        "psi" => cmd_psi(rest),
        "phi" => cmd_phi(rest),
        "evolve" => cmd_evolve(rest),
        "diffusion-profile" => cmd_diffusion_profile(rest),
        "magnetization" => cmd_magnetization(rest),
        "external" => cmd_external(rest),
        "diffusion" => cmd_diffusion(rest),
        "mc-validate" => cmd_mc_validate(rest),
        "figures" => cmd_figures(rest),
        other => Err(Error::InvalidSpec {
            field: other.to_string(),
            reason: "unknown flag".into(),
        }),
    }
}

fn cmd_zl(rest: &[String]) -> Result<RunManifest> {
    let args = Args::parse(rest, &["spec", "out"], &[])?;
    let spec = load_spec(args.require("spec")?)?;
    let out = ensure_dir(args.get("out").unwrap_or("out"))?;
    let d = coupling::derive(&spec)?;
    let rows: Vec<Vec<f64>> = (0..=spec.two_j)
        .map(|l| {
            let x = if spec.two_j > 0 {
                l as f64 / spec.two_j as f64
            } else {
                0.0
            };
            vec![l as f64, d.z_at(l), coupling::y_scaling(&spec, x)]
        })
        .collect();
    let path = out.join("zl.csv");
    let hash = write_csv(&path, "l,z,y", &rows)?;
    let mut m = RunManifest::new("zl");
    m.input("spec", args.require("spec")?);
    m.output(&path, hash);
    Ok(m)
}

fn cmd_timescales(rest: &[String]) -> Result<RunManifest> {
    let args = Args::parse(rest, &["spec", "out"], &[])?;
    let spec = load_spec(args.require("spec")?)?;
    let out = ensure_dir(args.get("out").unwrap_or("out"))?;
    let d = coupling::derive(&spec)?;
    let report = serde_json::json!({
        "two_j": spec.two_j,
        "hat_delta0": d.hat_delta0,
        "hat_delta_av": d.hat_delta_av,
        "z_av": d.z_av,
        "d0": d.d0,
        "tau0": d.tau0,
        "tau1": d.tau1,
        "tau2": d.tau2,
        "tau3": d.tau3,
        "tau1_over_tau0": d.tau1 / d.tau0,
        "tau2_over_tau0": d.tau2 / d.tau0,
        "tau3_over_tau0": d.tau3 / d.tau0,
    });
    let path = out.join("timescales.json");
    let body = serde_json::to_string_pretty(&report)?;
    std::fs::write(&path, &body)?;
    let mut m = RunManifest::new("timescales");
    m.input("spec", args.require("spec")?);
    m.output(&path, crate::output::fnv1a64(body.as_bytes()));
    Ok(m)
}

fn cmd_kernel(rest: &[String]) -> Result<RunManifest> {
    let args = Args::parse(rest, &["z", "tmax", "dt", "out"], &["surface"])?;
    let out = ensure_dir(args.get("out").unwrap_or("out"))?;
    let tmax = args.f64_or("tmax", 10.0)?;
    let dt = args.f64_or("dt", 0.05)?;
    let mut m = RunManifest::new("kernel");
    m.input("tmax", tmax);
    m.input("dt", dt);
    if args.has("surface") {
        let mut rows = Vec::new();
        let mut z = -0.95;
        while z <= 0.9501 {
            let mut t = 0.0;
            while t <= tmax + 1e-12 {
                rows.push(vec![t, z, kernel::m_kernel(t, z)]);
                t += dt.max(0.1);
            }
            z += 0.05;
        }
        let path = out.join("kernel_surface.csv");
        let hash = write_csv(&path, "t,z,m", &rows)?;
        m.input("surface", "true");
        m.output(&path, hash);
        return Ok(m);
    }
    let z = args.f64_or("z", 0.0)?;
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::InvalidSpec {
            field: "--z".into(),
            reason: format!("must lie in [-1, 1], got {z}"),
        });
    }
    let mut rows = Vec::new();
    let mut t = 0.0;
    while t <= tmax + 1e-12 {
        rows.push(vec![t, kernel::m_kernel(t, z)]);
        t += dt;
    }
    let path = out.join("kernel.csv");
    let hash = write_csv(&path, "t,m", &rows)?;
    m.input("z", z);
    m.output(&path, hash);
    Ok(m)
}

fn cmd_psi(rest: &[String]) -> Result<RunManifest> {
    let args = Args::parse(rest, &["tpmax", "dt", "out"], &[])?;
    let out = ensure_dir(args.get("out").unwrap_or("out"))?;
    let tpmax = args.f64_or("tpmax", 10.0)?;
    let dt = args.f64_or("dt", 0.05)?;
    let mut rows = Vec::new();
    let mut tp = 0.0;
    while tp <= tpmax + 1e-12 {
        rows.push(vec![tp, kernel::psi(tp)]);
        tp += dt;
    }
    let path = out.join("psi.csv");
    let hash = write_csv(&path, "tp,psi", &rows)?;
    let mut m = RunManifest::new("psi");
    m.input("tpmax", tpmax);
    m.input("dt", dt);
    m.output(&path, hash);
    Ok(m)
}

fn cmd_phi(rest: &[String]) -> Result<RunManifest> {
    let args = Args::parse(rest, &["tmax", "dt", "out"], &[])?;
    let out = ensure_dir(args.get("out").unwrap_or("out"))?;
    let tmax = args.f64_or("tmax", 20.0)?;
    let dt = args.f64_or("dt", 0.1)?;
    let mut rows = Vec::new();
    let mut t = 0.0;
    while t <= tmax + 1e-12 {
        rows.push(vec![t, kernel::phi(t)]);
        t += dt;
    }
    let path = out.join("phi.csv");
    let hash = write_csv(&path, "t,phi", &rows)?;
    let mut m = RunManifest::new("phi");
    m.input("tmax", tmax);
    m.input("dt", dt);
    m.output(&path, hash);
    Ok(m)
}

fn cmd_evolve(rest: &[String]) -> Result<RunManifest> {
    let args = Args::parse(
        rest,
        &[
            "state", "spec", "times", "grid", "rmax", "map", "kind", "theta", "phi", "seed", "out",
        ],
        &[],
    )?;
    let spec = load_spec(args.require("spec")?)?;
    let out = ensure_dir(args.get("out").unwrap_or("out"))?;
    let times = parse_times(args.require("times")?)?;
    let n_grid = args.u64_or("grid", 81)? as usize;
    let r_max = args.f64_or("rmax", 4.0)?;
    let seed = args.u64_or("seed", 1)?;
    let theta = args.f64_or("theta", 0.0)?;
    let phi = args.f64_or("phi", 0.0)?;
    let map = match args.get("map").unwrap_or("tan") {
        "tan" => RadialMap::TanHalf,
        "arctan" => RadialMap::ArctanHalf,
        other => {
            return Err(Error::InvalidSpec {
                field: "--map".into(),
                reason: format!("expected tan or arctan, got {other}"),
            })
        }
    };
    let kind = match args.get("kind").unwrap_or("wigner") {
        "wigner" => FieldKind::Wigner,
        "husimi" => FieldKind::Husimi,
        other => {
            return Err(Error::InvalidSpec {
                field: "--kind".into(),
                reason: format!("expected wigner or husimi, got {other}"),
            })
        }
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let pi = std::f64::consts::PI;
    let state = match args.require("state")? {
        "coherent" => states::coherent(spec.two_j, theta, phi),
        "cat2" => states::cat2(
            spec.two_j,
            (half_pi, 0.0),
            (half_pi, pi),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ),
        "cat3" => states::cat3(
            spec.two_j,
            [(half_pi, 0.0), (half_pi, 0.75 * pi), (half_pi, 1.25 * pi)],
            [
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        ),
        "random" => states::random_state(spec.two_j, seed),
        other => {
            return Err(Error::InvalidSpec {
                field: "--state".into(),
                reason: format!("unknown state kind {other}"),
            })
        }
    };
    let derived = coupling::derive(&spec)?;
    let grid = Grid::stereographic(n_grid, r_max, map);
    let fields = evolution::frames(
        &state,
        &derived,
        &times,
        &grid,
        kind,
        FieldNormalization::Orthonormal,
    )?;
    let mut m = RunManifest::new("evolve");
    m.input("state", args.require("state")?);
    m.input("spec", args.require("spec")?);
    m.input("times", args.require("times")?);
    m.input("grid", n_grid);
    m.input("rmax", r_max);
    m.seed = Some(seed);
    let mut frame_files = Vec::new();
    for (i, f) in fields.iter().enumerate() {
        let path = out.join(format!("frame_{i:04}.csv"));
        let hash = write_field(f, &path)?;
        m.output(&path, hash);
        frame_files.push(serde_json::json!({
            "file": path.file_name().unwrap().to_string_lossy(),
            "time": f.time,
        }));
    }
    let movie_manifest = serde_json::json!({
        "two_j": spec.two_j,
        "state": args.require("state")?,
        "seed": seed,
        "kind": format!("{kind:?}").to_lowercase(),
        "grid": {"n": n_grid, "r_max": r_max, "map": format!("{map:?}")},
        "times": times,
        "frames": frame_files,
    });
    let man_path = out.join("manifest.json");
    let body = serde_json::to_string_pretty(&movie_manifest)?;
    std::fs::write(&man_path, &body)?;
    m.output(&man_path, crate::output::fnv1a64(body.as_bytes()));
    Ok(m)
}

fn cmd_diffusion_profile(rest: &[String]) -> Result<RunManifest> {
    let args = Args::parse(rest, &["rmax", "n", "out"], &[])?;
    let out = ensure_dir(args.get("out").unwrap_or("out"))?;
    let rmax = args.f64_or("rmax", 4.0)?;
    let n = args.u64_or("n", 200)? as usize;
    let var = evolution::diffusion_profile_moment(2);
    let rows: Vec<Vec<f64>> = (0..=n)
        .map(|i| {
            let r = rmax * i as f64 / n as f64;
            vec![
                r,
                evolution::diffusion_profile_quantum(r),
                evolution::gaussian_profile(r, var),
            ]
        })
        .collect();
    let path = out.join("diffusion_profile.csv");
    let hash = write_csv(&path, "r,w_quantum,gaussian_matched", &rows)?;
    let mut m = RunManifest::new("diffusion-profile");
    m.input("rmax", rmax);
    m.input("n", n);
    m.output(&path, hash);
    Ok(m)
}

fn cmd_magnetization(rest: &[String]) -> Result<RunManifest> {
    let args = Args::parse(rest, &["spec", "tmax", "dt", "theta", "out"], &[])?;
    let spec = load_spec(args.require("spec")?)?;
    let out = ensure_dir(args.get("out").unwrap_or("out"))?;
    let d = coupling::derive(&spec)?;
    let theta = args.f64_or("theta", 0.0)?;
    let tau3 = d.tau3 / d.tau0;
    let tmax = args.f64_or("tmax", 4.0 * tau3)?;
    let dt = args.f64_or("dt", tmax / 400.0)?;
    let state = states::coherent(spec.two_j, theta, 0.0);
    let sz0 = crate::matrix::spin_expectation(&state.amps, spec.two_j)[2];
    let mut rows = Vec::new();
    let mut t = 0.0;
    while t <= tmax + 1e-12 {
        let ratio = evolution::magnetization_ratio(&d, t);
        rows.push(vec![t, ratio, sz0 * ratio]);
        t += dt;
    }
    let path = out.join("magnetization.csv");
    let hash = write_csv(&path, "t,ratio,sz", &rows)?;
    let mut m = RunManifest::new("magnetization");
    m.input("spec", args.require("spec")?);
    m.input("theta", theta);
    m.input("tmax", tmax);
    m.output(&path, hash);
    Ok(m)
}

fn cmd_external(rest: &[String]) -> Result<RunManifest> {
    let args = Args::parse(rest, &["E", "zav", "zl", "tmax", "dt", "out"], &[])?;
    let out = ensure_dir(args.get("out").unwrap_or("out"))?;
    let e = args.f64_or("E", 0.0)?;
    let zav = args.f64_or("zav", 0.0)?;
    let zl = args.f64_or("zl", 0.0)?;
    let tmax = args.f64_or("tmax", 10.0)?;
    let dt = args.f64_or("dt", 0.1)?;
    let mut rows = Vec::new();
    let mut t = 0.0;
    while t <= tmax + 1e-12 {
        let full = external::m_external(t, e, zl, zav)?;
        let scaling = external::m_scaling(t * (1.0 - zl), e, zav);
        rows.push(vec![t, full, scaling]);
        t += dt;
    }
    let path = out.join("external.csv");
    let hash = write_csv(&path, "t,m,m_scaling", &rows)?;
    let mut m = RunManifest::new("external");
    m.input("E", e);
    m.input("zav", zav);
    m.input("zl", zl);
    m.input("tmax", tmax);
    m.output(&path, hash);
    Ok(m)
}

fn cmd_diffusion(rest: &[String]) -> Result<RunManifest> {
    let args = Args::parse(rest, &["spec", "E", "out"], &[])?;
    let spec = load_spec(args.require("spec")?)?;
    let out = ensure_dir(args.get("out").unwrap_or("out"))?;
    let e = args.f64_or("E", 0.0)?;
    let db0 = spec.delta_bar_at(0);
    if db0 <= 0.0 {
        return Err(Error::InvalidSpec {
            field: "delta_bar.0".into(),
            reason: "the fast-bath regime needs a positive l = 0 variance (the bath)".into(),
        });
    }
    let e0 = 2.0 * db0.sqrt();
    let channels: Vec<(i64, f64)> = spec
        .delta_bar
        .iter()
        .filter(|(&l, &v)| l >= 1 && v > 0.0)
        .map(|(&l, &v)| (l, v))
        .collect();
    let bath = BathSpec::semicircle(spec.two_j, e0, channels)?.derive()?;
    let d = external::diffusion_coefficient(&bath, e);
    let report = serde_json::json!({
        "D": d,
        "E": e,
        "E0": e0,
        "tau0": bath.combined.tau0,
        "tau1": bath.combined.tau1,
        "tau2": bath.combined.tau2,
    });
    let path = out.join("diffusion.json");
    let body = serde_json::to_string_pretty(&report)?;
    std::fs::write(&path, &body)?;
    let mut m = RunManifest::new("diffusion");
    m.input("spec", args.require("spec")?);
    m.input("E", e);
    m.output(&path, crate::output::fnv1a64(body.as_bytes()));
    Ok(m)
}

fn cmd_mc_validate(rest: &[String]) -> Result<RunManifest> {
    let args = Args::parse(rest, &["spec", "N", "samples", "seed", "times", "out"], &[])?;
    let spec = load_spec(args.require("spec")?)?;
    let out = ensure_dir(args.get("out").unwrap_or("out"))?;
    let n_env = match args.get("N") {
        Some(v) => v.parse::<usize>().map_err(|_| Error::InvalidSpec {
            field: "--N".into(),
            reason: format!("not an integer: {v}"),
        })?,
        None => spec.n_env.ok_or_else(|| Error::InvalidSpec {
            field: "N".into(),
            reason: "environment size required (flag --N or spec field)".into(),
        })? as usize,
    };
    let samples = args.u64_or("samples", 200)? as usize;
    let seed = args.u64_or("seed", 1)?;
    let times_tau0 = match args.get("times") {
        Some(list) => parse_times(list)?,
        None => (0..=10).map(|i| i as f64 * 0.5).collect(),
    };
    let d = coupling::derive(&spec)?;
    let times_abs: Vec<f64> = times_tau0.iter().map(|&t| t * d.tau0).collect();
    let rho0 = states::coherent(spec.two_j, 1.0, 0.5).density_matrix();
    let estimates =
        montecarlo::empirical_kernel(&rho0, &spec, n_env, samples, seed, &times_abs)?;
    let mut records = Vec::new();
    let mut all_pass = true;
    for est in &estimates {
        let t_tau0 = est.t / d.tau0;
        let planar = kernel::m_hat(&d, est.l, t_tau0, kernel::TimeUnit::Tau0);
        let tol = (3.0 * est.sigma).max(0.02);
        let pass = (est.ratio - planar).abs() <= tol;
        all_pass &= pass;
        records.push(serde_json::json!({
            "l": est.l,
            "m": est.m,
            "t": t_tau0,
            "empirical": est.ratio,
            "planar": planar,
            "sigma": est.sigma,
            "pass": pass,
        }));
    }
    let report = serde_json::json!({
        "two_j": spec.two_j,
        "N": n_env,
        "samples": samples,
        "seed": seed,
        "tau0": d.tau0,
        "all_pass": all_pass,
        "channels": records,
    });
    let path = out.join("mc_validate.json");
    let body = serde_json::to_string_pretty(&report)?;
    std::fs::write(&path, &body)?;
    let mut m = RunManifest::new("mc-validate");
    m.input("spec", args.require("spec")?);
    m.input("N", n_env);
    m.input("samples", samples);
    m.seed = Some(seed);
    m.output(&path, crate::output::fnv1a64(body.as_bytes()));
    Ok(m)
}

fn cmd_figures(rest: &[String]) -> Result<RunManifest> {
    let args = Args::parse(rest, &["id", "out"], &[])?;
    let id = args.require("id")?;
    if id != "appendix-A" {
        return Err(Error::InvalidSpec {
            field: "--id".into(),
            reason: format!("unknown figure set {id}; available: appendix-A"),
        });
    }
    let out = ensure_dir(args.get("out").unwrap_or("out"))?;
    let mut m = RunManifest::new("figures");
    m.input("id", id);

    let mut emit = |name: String, spec: &CouplingSpec| -> Result<()> {
        let d = coupling::derive(spec)?;
        let rows: Vec<Vec<f64>> = (0..=spec.two_j)
            .map(|l| {
                let x = l as f64 / spec.two_j as f64;
                vec![l as f64, d.z_at(l), coupling::y_scaling(spec, x)]
            })
            .collect();
        let path = out.join(name);
        let hash = write_csv(&path, "l,z,y", &rows)?;
        m.output(&path, hash);
        Ok(())
    };

    for (l0, two_j) in [(2i64, 20i64), (5, 20), (5, 80), (10, 200)] {
        let spec = CouplingSpec::equal_up_to(two_j, l0, 1.0)?;
        emit(format!("appendix_a_equal_l0-{l0}_2j-{two_j}.csv"), &spec)?;
    }
    for (l0, two_j) in [(2i64, 20i64), (5, 80)] {
        let spec = CouplingSpec::new(two_j, (1..=l0).map(|l| (l, 1.0)))?;
        emit(format!("appendix_a_zero0_l0-{l0}_2j-{two_j}.csv"), &spec)?;
    }
    for (l, two_j) in [(3i64, 40i64), (7, 120)] {
        let spec = CouplingSpec::single_channel(two_j, l, 1.0)?;
        emit(format!("appendix_a_oneodd_l-{l}_2j-{two_j}.csv"), &spec)?;
    }
    for (l0, two_j) in [(5i64, 40i64), (9, 120)] {
        let spec = CouplingSpec::new(two_j, (1..=l0).filter(|l| l % 2 == 1).map(|l| (l, 1.0)))?;
        emit(format!("appendix_a_allodd_l0-{l0}_2j-{two_j}.csv"), &spec)?;
    }
    for (l0, two_j) in [(6i64, 40i64), (10, 120)] {
        let spec = CouplingSpec::new(two_j, (0..=l0).filter(|l| l % 2 == 0).map(|l| (l, 1.0)))?;
        emit(format!("appendix_a_alleven_l0-{l0}_2j-{two_j}.csv"), &spec)?;
    }
    for big0 in [10.0, 100.0] {
        let mut chans: Vec<(i64, f64)> = (1..=4).map(|l| (l, 1.0)).collect();
        chans.push((0, big0));
        let spec = CouplingSpec::new(80, chans)?;
        emit(format!("appendix_a_large0_d0-{big0}_2j-80.csv"), &spec)?;
    }
    for seed in [1u64, 2] {
        // deterministic pseudo-random channel weights
        let mut x = seed.wrapping_mul(0x9E3779B97F4A7C15) | 1;
        let mut next = move || {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            (x >> 11) as f64 / (1u64 << 53) as f64
        };
        let chans: Vec<(i64, f64)> = (0..=6).map(|l| (l, 0.05 + next())).collect();
        let spec = CouplingSpec::new(60, chans)?;
        emit(format!("appendix_a_random_seed-{seed}_2j-60.csv"), &spec)?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_flags_are_usage_errors() {
        assert_eq!(run(vec!["kernel".into(), "--bogus".into(), "1".into()]), 2);
        assert_eq!(run(vec!["not-a-command".into()]), 2);
        assert_eq!(run(vec![]), 2);
    }

    #[test]
    fn missing_spec_file_is_a_content_error() {
        assert_eq!(
            run(vec![
                "zl".into(),
                "--spec".into(),
                "/nonexistent/spec.json".into(),
                "--out".into(),
                std::env::temp_dir()
                    .join("spindeco-cli-test")
                    .to_string_lossy()
                    .into_owned(),
            ]),
            1
        );
    }
}
