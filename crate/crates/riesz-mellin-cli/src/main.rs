//! Command-line driver: symbol reports, the boundary-operator continuity
//! sweep, half-line corner continuity ratios, and a self-test battery.
//! All angles are radians; outputs are summary.json, CSV tables, and a
//! manifest.json in the chosen output directory.

mod config;
mod report;

use clap::{Parser, Subcommand};
use config::{CornerConfig, SymbolConfig, Theorem1Config};
use num_complex::Complex64;
use report::ReportWriter;
use riesz_mellin::bump::smoothstep;
use riesz_mellin::geometry::{l_shaped_hexagon, unit_square, PolygonBoundary, PolygonSpec};
use riesz_mellin::mellin::LogGrid;
use riesz_mellin::riesz::{assemble_riesz, corner_continuity_ratio, CornerRatioReport};
use riesz_mellin::sobolev::{
    continuity_modulus_estimate, gram_matrices, mass_matrix, stiffness_matrix, BoundaryFESpace,
    CurveMesh, GramFlavor,
};
use riesz_mellin::special::flat_symbol_reference;
use riesz_mellin::symbol::{
    continuity_moduli, decay_profile, default_profile_grid, nearest_pole, MellinSymbol,
    SymbolEvaluator,
};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "riesz-mellin",
    about = "Desk-scale verification pipeline for the |x-y|^{-1/2} boundary potential on polygons",
    version
)]
struct Cli {
    /// TOML configuration file (CLI flags override its values).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for summary.json, CSV tables and manifest.json.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Random seed for every randomized experiment.
    #[arg(long, global = true, default_value_t = 7u64)]
    seed: u64,
    /// Worker threads (0 = library default).
    #[arg(long, global = true, default_value_t = 0usize)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mellin-symbol report: residues, sup moduli, decay profiles, and the
    /// closed-form cross-check at the flat half-aperture.
    Symbol {
        /// Half-aperture α in radians (repeatable).
        #[arg(long = "alpha")]
        alphas: Vec<f64>,
        /// Continuation order Q.
        #[arg(long = "Q")]
        window_order: Option<usize>,
        /// Coarse points per sup-search line.
        #[arg(long)]
        lines: Option<usize>,
    },
    /// Discrete continuity-modulus refinement sweep on a polygon.
    Theorem1 {
        /// "square", "lshape", or a polygon JSON path.
        #[arg(long)]
        polygon: Option<String>,
        /// Dof ladder (repeatable, strictly increasing, >= 3 levels).
        #[arg(long = "ladder")]
        ladder: Vec<usize>,
    },
    /// Half-line corner continuity ratios over random bump families.
    Corner {
        /// Half-aperture θ in radians (repeatable).
        #[arg(long = "theta")]
        thetas: Vec<f64>,
        #[arg(long)]
        trials: Option<usize>,
        /// Radial grid sizes (repeatable).
        #[arg(long = "resolution")]
        resolutions: Vec<usize>,
    },
    /// Run the invariant battery; exit nonzero naming the first failure.
    Selftest {
        /// Run only checks whose name contains this substring.
        #[arg(long)]
        filter: Option<String>,
        /// Deliberately corrupt one named check (for wiring tests).
        #[arg(long = "inject-fault")]
        inject_fault: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    let mut cfg = config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Symbol {
            alphas,
            window_order,
            lines,
        } => {
            if !alphas.is_empty() {
                cfg.symbol.alphas = alphas;
            }
            if let Some(q) = window_order {
                cfg.symbol.window_order = q;
            }
            if let Some(l) = lines {
                cfg.symbol.line_points = l;
            }
            let writer = ReportWriter::new(&cli.out)?;
            writer.write_manifest("symbol", &cfg.symbol, cli.seed)?;
            run_symbol(&cfg.symbol, &writer)
        }
        Command::Theorem1 { polygon, ladder } => {
            if let Some(p) = polygon {
                cfg.theorem1.polygon = p;
            }
            if !ladder.is_empty() {
                cfg.theorem1.ladder = ladder;
            }
            let writer = ReportWriter::new(&cli.out)?;
            writer.write_manifest("theorem1", &cfg.theorem1, cli.seed)?;
            run_theorem1(&cfg.theorem1, &writer)
        }
        Command::Corner {
            thetas,
            trials,
            resolutions,
        } => {
            if !thetas.is_empty() {
                cfg.corner.thetas = thetas;
            }
            if let Some(t) = trials {
                cfg.corner.trials = t;
            }
            if !resolutions.is_empty() {
                cfg.corner.resolutions = resolutions;
            }
            let writer = ReportWriter::new(&cli.out)?;
            writer.write_manifest("corner", &cfg.corner, cli.seed)?;
            run_corner(&cfg.corner, &writer, cli.seed)
        }
        Command::Selftest {
            filter,
            inject_fault,
        } => run_selftest(filter.as_deref(), inject_fault.as_deref()),
    }
}

// ---------------------------------------------------------------------
// symbol
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct ResidueEntry {
    pole: f64,
    residue_re: f64,
    residue_im: f64,
}

#[derive(Serialize)]
struct ProfileSummary {
    weight_power: usize,
    xi0: Option<f64>,
    peak: f64,
    final_over_peak: f64,
    csv: String,
}

#[derive(Serialize)]
struct SymbolAlphaReport {
    alpha: f64,
    window_order: usize,
    residues: Vec<ResidueEntry>,
    residue_at_quarter: f64,
    m0: f64,
    m1: f64,
    m_diff: f64,
    profiles: Vec<ProfileSummary>,
}

#[derive(Serialize)]
struct OracleReport {
    sample_count: usize,
    max_rel_error_extended: f64,
    max_rel_error_direct: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct SymbolSummary {
    per_alpha: Vec<SymbolAlphaReport>,
    oracle: Option<OracleReport>,
}

/// Sample grid for the closed-form comparison: 100 points with
/// |Re λ| <= 1, imaginary parts moderate (the continuation parts cancel
/// down to |K̂|, which decays like e^{-π|ξ|} at the flat angle, so larger
/// |ξ| would drown the comparison in that cancellation), all clear of pole
/// neighborhoods.
fn oracle_sample_points() -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(100);
    for i in 0..10 {
        let re = -0.98 + 1.96 * i as f64 / 9.0;
        for j in 0..10 {
            let im = -2.5 + 5.0 * j as f64 / 9.0;
            let lam = Complex64::new(re, im);
            debug_assert!(nearest_pole(lam).0 > 0.05);
            pts.push(lam);
        }
    }
    pts
}

fn run_symbol(cfg: &SymbolConfig, writer: &ReportWriter) -> Result<i32, String> {
    if cfg.alphas.is_empty() {
        return Err("config error: empty alpha list".into());
    }
    let mut per_alpha = Vec::new();
    let mut oracle = None;
    for (ai, &alpha) in cfg.alphas.iter().enumerate() {
        let sym = MellinSymbol::new(alpha, cfg.window_order).map_err(|e| e.to_string())?;
        let residues: Vec<ResidueEntry> = sym
            .residues()
            .map(|(p, r)| ResidueEntry {
                pole: p,
                residue_re: r.re,
                residue_im: r.im,
            })
            .collect();
        let residue_at_quarter = residues
            .iter()
            .find(|e| (e.pole - 0.25).abs() < 1e-12)
            .map(|e| e.residue_re)
            .unwrap_or(f64::NAN);
        let moduli = continuity_moduli(alpha, cfg.mu_for_m1, cfg.line_points)
            .map_err(|e| e.to_string())?;
        let grid = default_profile_grid(cfg.profile_xi_max, cfg.profile_points);
        let mut profiles = Vec::new();
        for &p in &cfg.profile_powers {
            let prof = decay_profile(alpha, 0.0, p, &grid).map_err(|e| e.to_string())?;
            let csv_name = format!("profile_alpha{ai}_p{p}.csv");
            let mut buf = Vec::new();
            prof.to_csv(&mut buf).map_err(|e| e.to_string())?;
            writer.write_text(&csv_name, &String::from_utf8_lossy(&buf))?;
            profiles.push(ProfileSummary {
                weight_power: p,
                xi0: prof.xi0,
                peak: prof.peak,
                final_over_peak: prof.final_over_peak(),
                csv: csv_name,
            });
        }
        if (alpha - FRAC_PI_2).abs() < 1e-12 {
            let eval = SymbolEvaluator::new(alpha, cfg.window_order).map_err(|e| e.to_string())?;
            let mut max_ext = 0.0f64;
            let mut max_dir = 0.0f64;
            let pts = oracle_sample_points();
            for &lam in &pts {
                let reference = flat_symbol_reference(lam);
                let ext = eval.extended(lam).map_err(|e| e.to_string())?;
                max_ext = max_ext.max((ext - reference).norm() / reference.norm());
                if lam.re.abs() < 0.249 {
                    let dir = eval.direct(lam).map_err(|e| e.to_string())?;
                    max_dir = max_dir.max((dir - reference).norm() / reference.norm());
                }
            }
            oracle = Some(OracleReport {
                sample_count: pts.len(),
                max_rel_error_extended: max_ext,
                max_rel_error_direct: max_dir,
                tolerance: cfg.oracle_rel_tol,
                pass: max_ext < cfg.oracle_rel_tol && max_dir < cfg.oracle_rel_tol,
            });
        }
        per_alpha.push(SymbolAlphaReport {
            alpha,
            window_order: cfg.window_order,
            residues,
            residue_at_quarter,
            m0: moduli.m0,
            m1: moduli.m1,
            m_diff: moduli.m_diff,
            profiles,
        });
    }
    let summary = SymbolSummary { per_alpha, oracle };
    writer.write_json("summary.json", &summary)?;
    for rep in &summary.per_alpha {
        println!(
            "alpha {:.6}: residue(1/4) {:+.8}, m0 {:.6}, m1 {:.6}, m_diff {:.6}",
            rep.alpha, rep.residue_at_quarter, rep.m0, rep.m1, rep.m_diff
        );
    }
    if let Some(o) = &summary.oracle {
        println!(
            "flat-angle oracle: extended {:.3e}, direct {:.3e} (tol {:.1e}) -> {}",
            o.max_rel_error_extended,
            o.max_rel_error_direct,
            o.tolerance,
            if o.pass { "pass" } else { "FAIL" }
        );
        if !o.pass {
            return Ok(1);
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------
// theorem1
// ---------------------------------------------------------------------

#[derive(Serialize, Clone)]
struct LadderLevel {
    dofs: usize,
    sigma_half: f64,
    sigma_h1: f64,
}

#[derive(Serialize)]
struct Theorem1Summary {
    polygon: String,
    levels: Vec<LadderLevel>,
    increasing: bool,
    final_relative_step: f64,
    saturated: bool,
    contrast_final_relative_step: f64,
    contrast_saturated: bool,
    plateau_threshold: f64,
}

fn resolve_polygon(name: &str) -> Result<PolygonBoundary, String> {
    match name {
        "square" => Ok(unit_square()),
        "lshape" => Ok(l_shaped_hexagon()),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read polygon {path}: {e}"))?;
            let spec = PolygonSpec::from_json(&text).map_err(|e| e.to_string())?;
            let (boundary, _) = spec.build().map_err(|e| e.to_string())?;
            Ok(boundary)
        }
    }
}

fn run_theorem1(cfg: &Theorem1Config, writer: &ReportWriter) -> Result<i32, String> {
    if cfg.ladder.len() < 3 {
        return Err(format!(
            "config error: refinement ladder needs at least 3 levels, got {}",
            cfg.ladder.len()
        ));
    }
    if !cfg.ladder.windows(2).all(|w| w[0] < w[1]) {
        return Err("config error: ladder must be strictly increasing".into());
    }
    let boundary = resolve_polygon(&cfg.polygon)?;
    let mut levels: Vec<LadderLevel> = Vec::new();
    let mut csv = String::from("dofs,sigma_half,sigma_h1\n");
    for &dofs in &cfg.ladder {
        if dofs > cfg.max_dofs {
            // Persist completed levels before refusing the level.
            writer.write_text("levels.csv", &csv)?;
            writer.write_json("levels_partial.json", &levels)?;
            return Err(format!(
                "ladder error: level {dofs} exceeds the {}-dof guard; partial results persisted",
                cfg.max_dofs
            ));
        }
        let mesh = CurveMesh::polygon(&boundary, dofs).map_err(|e| e.to_string())?;
        let space = BoundaryFESpace::all_nodes(mesh);
        let op = assemble_riesz(&space).map_err(|e| e.to_string())?;
        let grams = gram_matrices(&space, GramFlavor::Standard).map_err(|e| e.to_string())?;
        let sigma_half = continuity_modulus_estimate(&op.matrix, &grams.mass, &grams.sobolev_half)
            .map_err(|e| e.to_string())?;
        let h1 = &mass_matrix(&space) + stiffness_matrix(&space);
        let sigma_h1 =
            continuity_modulus_estimate(&op.matrix, &grams.mass, &h1).map_err(|e| e.to_string())?;
        println!(
            "level {:>5} dofs: sigma_half {:.8}, sigma_H1 {:.6}",
            space.n_dofs(),
            sigma_half,
            sigma_h1
        );
        csv.push_str(&format!(
            "{},{sigma_half:.12e},{sigma_h1:.12e}\n",
            space.n_dofs()
        ));
        writer.write_text("levels.csv", &csv)?;
        levels.push(LadderLevel {
            dofs: space.n_dofs(),
            sigma_half,
            sigma_h1,
        });
        writer.write_json("levels_partial.json", &levels)?;
    }
    // The discrete dual norm grows under refinement too, so σ_h may dip by
    // a measurement-noise margin; monotonicity is asserted up to 0.1%.
    let increasing = levels
        .windows(2)
        .all(|w| w[1].sigma_half >= w[0].sigma_half * (1.0 - 1e-3));
    let last = &levels[levels.len() - 1];
    let prev = &levels[levels.len() - 2];
    let final_relative_step = (last.sigma_half - prev.sigma_half).abs() / prev.sigma_half;
    let contrast_final_relative_step = (last.sigma_h1 - prev.sigma_h1).abs() / prev.sigma_h1;
    let summary = Theorem1Summary {
        polygon: cfg.polygon.clone(),
        levels,
        increasing,
        final_relative_step,
        saturated: final_relative_step < cfg.plateau_threshold,
        contrast_final_relative_step,
        contrast_saturated: contrast_final_relative_step < cfg.plateau_threshold,
        plateau_threshold: cfg.plateau_threshold,
    };
    writer.write_json("summary.json", &summary)?;
    println!(
        "sigma_half final step {:.3e} ({}), H1 contrast step {:.3e} ({})",
        summary.final_relative_step,
        if summary.saturated {
            "saturated"
        } else {
            "NOT saturated"
        },
        summary.contrast_final_relative_step,
        if summary.contrast_saturated {
            "saturated"
        } else {
            "not saturated"
        },
    );
    Ok(
        if summary.increasing && summary.saturated && !summary.contrast_saturated {
            0
        } else {
            1
        },
    )
}

// ---------------------------------------------------------------------
// corner
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct CornerThetaReport {
    theta: f64,
    per_resolution: Vec<CornerRatioReport>,
    drift: f64,
    drift_pass: bool,
}

#[derive(Serialize)]
struct CornerSummary {
    reports: Vec<CornerThetaReport>,
    drift_threshold: f64,
    all_pass: bool,
}

fn run_corner(cfg: &CornerConfig, writer: &ReportWriter, seed: u64) -> Result<i32, String> {
    if cfg.thetas.is_empty() {
        return Err("config error: empty theta list".into());
    }
    if cfg.trials == 0 {
        return Err("config error: trials must be positive".into());
    }
    if cfg.resolutions.len() < 2 {
        return Err("config error: need at least two resolutions for the drift check".into());
    }
    let plateau = cfg.cutoff_plateau;
    let support = cfg.cutoff_support;
    let chi = move |r: f64| smoothstep((support - r) / (support - plateau));
    let mut reports = Vec::new();
    let mut csv = String::from("theta,resolution,max_ratio,argmax_trial\n");
    for &theta in &cfg.thetas {
        if !(theta > 0.0 && theta < PI) {
            return Err(format!("config error: theta {theta} outside (0, pi)"));
        }
        let mut per_resolution = Vec::new();
        for &n in &cfg.resolutions {
            let grid = LogGrid::from_r_range(cfg.grid_r_min, cfg.grid_r_max, n)
                .map_err(|e| e.to_string())?;
            let rep = corner_continuity_ratio(theta, &chi, cfg.trials, grid, seed)
                .map_err(|e| e.to_string())?;
            csv.push_str(&format!(
                "{theta:.12},{n},{:.12e},{}\n",
                rep.max_ratio, rep.argmax_trial
            ));
            per_resolution.push(rep);
        }
        let coarse = per_resolution[0].max_ratio;
        let fine = per_resolution[per_resolution.len() - 1].max_ratio;
        // A flat corner gives ratios at quadrature-noise level; the drift
        // quotient is meaningless there.
        let drift = if fine.max(coarse) < 1e-10 {
            0.0
        } else {
            (fine - coarse).abs() / coarse
        };
        let drift_pass = drift < cfg.drift_threshold;
        println!(
            "theta {theta:.6}: ratios {:?}, drift {drift:.3e} ({})",
            per_resolution
                .iter()
                .map(|r| r.max_ratio)
                .collect::<Vec<_>>(),
            if drift_pass { "stable" } else { "DRIFTING" }
        );
        reports.push(CornerThetaReport {
            theta,
            per_resolution,
            drift,
            drift_pass,
        });
    }
    writer.write_text("ratios.csv", &csv)?;
    let all_pass = reports.iter().all(|r| r.drift_pass);
    let summary = CornerSummary {
        reports,
        drift_threshold: cfg.drift_threshold,
        all_pass,
    };
    writer.write_json("summary.json", &summary)?;
    Ok(if all_pass { 0 } else { 1 })
}

// ---------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------

type Check = (&'static str, Box<dyn Fn(bool) -> Result<(), String>>);

fn selftest_checks() -> Vec<Check> {
    use riesz_mellin::bump::Bump;
    use riesz_mellin::kernel::kernel_eval;
    use riesz_mellin::mellin::{
        mellin_forward, mellin_inverse, mellin_transform_at, parseval_residual, GridFunction,
        TailBehavior, VerticalLine,
    };
    use riesz_mellin::riesz::{corner_identity_check, SupportedFn};
    use riesz_mellin::symbol::residue_at;

    let mut checks: Vec<Check> = Vec::new();

    checks.push((
        "mellin-parseval",
        Box::new(|faulty| {
            let grid = LogGrid::from_r_range(1e-3, 1e3, 2048).unwrap();
            let u = GridFunction::from_bump(grid, &Bump::new(1.3, 0.6, 1.0));
            let (lhs, mut rhs, _) = parseval_residual(&u, 0.0).map_err(|e| e.to_string())?;
            if faulty {
                // Simulated quadrature-table corruption.
                rhs *= 1.0 + 1e-3;
            }
            let res = (lhs - rhs).abs();
            if res < 1e-8 * lhs {
                Ok(())
            } else {
                Err(format!("parseval residual {res:.3e} vs lhs {lhs:.3e}"))
            }
        }),
    ));

    checks.push((
        "mellin-gamma-pair",
        Box::new(|_| {
            let grid = LogGrid::from_r_range(1e-9, 50.0, 4096).unwrap();
            let u = GridFunction::from_real_fn(
                grid,
                TailBehavior::PowerTails {
                    zero_exponent: 0.0,
                    infinity_exponent: f64::INFINITY,
                },
                |r| (-r).exp(),
            );
            let v =
                mellin_transform_at(&u, Complex64::new(-1.0, 0.0)).map_err(|e| e.to_string())?;
            if (v.re - 1.0).abs() < 1e-8 && v.im.abs() < 1e-10 {
                Ok(())
            } else {
                Err(format!("transform of e^-r at -1 gave {v}"))
            }
        }),
    ));

    checks.push((
        "mellin-roundtrip",
        Box::new(|_| {
            let grid = LogGrid::from_r_range(1e-2, 1e2, 4096).unwrap();
            let b = Bump::new(1.5, 0.5, 1.0);
            let u = GridFunction::from_bump(grid, &b);
            let line = VerticalLine::new(0.0, 1000.0, 20481).unwrap();
            let s = mellin_forward(&u, &line).map_err(|e| e.to_string())?;
            let rs: Vec<f64> = (0..100).map(|k| 1.0 + k as f64 / 99.0).collect();
            let back = mellin_inverse(&s, &rs).map_err(|e| e.to_string())?;
            let peak = b.eval(b.center);
            let worst = rs
                .iter()
                .zip(&back)
                .map(|(r, v)| (v.re - b.eval(*r)).abs() / peak)
                .fold(0.0f64, f64::max);
            if worst < 1e-6 {
                Ok(())
            } else {
                Err(format!("roundtrip error {worst:.3e}"))
            }
        }),
    ));

    checks.push((
        "kernel-symmetry",
        Box::new(|_| {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
            for _ in 0..1000 {
                let alpha = rng.gen_range(0.05..PI - 0.05);
                let tau: f64 = rng.gen_range(-5.0f64..5.0).exp();
                let a = kernel_eval(alpha, tau).map_err(|e| e.to_string())?;
                let b = kernel_eval(alpha, 1.0 / tau).map_err(|e| e.to_string())?;
                if (a - b).abs() > 1e-14 * a.max(1.0) {
                    return Err(format!("asymmetry at alpha={alpha}, tau={tau}"));
                }
            }
            Ok(())
        }),
    ));

    checks.push((
        "symbol-gamma-oracle",
        Box::new(|_| {
            let eval = SymbolEvaluator::new(FRAC_PI_2, 3).map_err(|e| e.to_string())?;
            for &lam in &[
                Complex64::new(0.0, 0.0),
                Complex64::new(0.1, 0.7),
                Complex64::new(0.75, 0.3),
            ] {
                let reference = flat_symbol_reference(lam);
                let got = eval.eval(lam).map_err(|e| e.to_string())?;
                if (got - reference).norm() > 1e-8 * reference.norm() {
                    return Err(format!("mismatch at {lam}: {got} vs {reference}"));
                }
            }
            Ok(())
        }),
    ));

    checks.push((
        "symbol-residue",
        Box::new(|_| {
            let r = residue_at(PI / 3.0, 0.25, 3).map_err(|e| e.to_string())?;
            if (r.re + 1.0).abs() < 1e-6 && r.im.abs() < 1e-8 {
                Ok(())
            } else {
                Err(format!("residue at 1/4 gave {r}"))
            }
        }),
    ));

    checks.push((
        "corner-transfer-identity",
        Box::new(|_| {
            let b = Bump::new(1.4, 0.4, 1.0);
            let f = move |t: f64| b.eval(t);
            let sf = SupportedFn::new(b.support(), &f);
            let (lhs, _, res) = corner_identity_check(PI / 3.0, &sf, &sf, &sf, &sf, None)
                .map_err(|e| e.to_string())?;
            if res < 1e-8 * lhs.abs() {
                Ok(())
            } else {
                Err(format!("identity residual {res:.3e} vs lhs {lhs:.3e}"))
            }
        }),
    ));

    checks.push((
        "estimator-hand-cases",
        Box::new(|_| {
            use nalgebra::{DMatrix, DVector};
            let m = DMatrix::identity(2, 2);
            let s = DMatrix::from_diagonal(&DVector::from_column_slice(&[1.0, 4.0]));
            let sigma = continuity_modulus_estimate(&m, &m, &s).map_err(|e| e.to_string())?;
            if (sigma - 2.0).abs() > 1e-12 {
                return Err(format!("2x2 case gave {sigma}, want 2"));
            }
            let sigma = continuity_modulus_estimate(&m, &m, &m).map_err(|e| e.to_string())?;
            if (sigma - 1.0).abs() > 1e-12 {
                return Err(format!("identity case gave {sigma}, want 1"));
            }
            Ok(())
        }),
    ));

    checks.push((
        "geometry-partition-of-unity",
        Box::new(|_| {
            let b = unit_square();
            let pou = riesz_mellin::geometry::build_cover(&b, 0.3).map_err(|e| e.to_string())?;
            pou.validate(&b, 250).map_err(|e| e.to_string())?;
            for k in 0..1000 {
                let x = b.point_at(4.0 * k as f64 / 1000.0);
                if (pou.sum_at(x) - 1.0).abs() > 1e-10 {
                    return Err(format!("partition sum off at {x:?}"));
                }
            }
            Ok(())
        }),
    ));

    checks
}

fn run_selftest(filter: Option<&str>, inject_fault: Option<&str>) -> Result<i32, String> {
    let checks = selftest_checks();
    let mut failures = Vec::new();
    let mut ran = 0;
    for (name, check) in &checks {
        if let Some(f) = filter {
            if !name.contains(f) {
                continue;
            }
        }
        ran += 1;
        let faulty = inject_fault.is_some_and(|f| name.contains(f));
        let started = std::time::Instant::now();
        match check(faulty) {
            Ok(()) => println!("[ ok ] {name} ({:.2}s)", started.elapsed().as_secs_f64()),
            Err(msg) => {
                println!("[FAIL] {name}: {msg}");
                failures.push(*name);
            }
        }
    }
    if ran == 0 {
        return Err(format!("no self-test matches filter {filter:?}"));
    }
    if failures.is_empty() {
        println!("all {ran} checks passed");
        Ok(0)
    } else {
        eprintln!("failing checks: {}", failures.join(", "));
        Ok(1)
    }
}
