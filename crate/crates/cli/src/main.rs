//! Command-line front end for the half-line scattering library: forward
//! problem, the three inversion routes, fixed-energy analysis, confining-
//! potential recovery, boundary-response reduction, and composed pipelines
//! (round trips, cross-method comparison).
//!
//! Every command writes JSON/CSV artifacts plus a `report.json` of its
//! invariant checks; the exit code is nonzero when any check fails.

mod config;
mod io;
mod report;
mod wave;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use scatter_core::forward::{self, MarchConfig};
use scatter_core::gelfand_levitan::{self as gl, GlConfig};
use scatter_core::grid::PotentialGrid;
use scatter_core::krein;
use scatter_core::marchenko::{self, MarchenkoConfig};
use scatter_core::quarkonium::{self, QuarkoniumData};
use scatter_core::riemann::{self, FactorizationConfig};
use scatter_core::types::{JostData, ScatteringData, SpectralFunction};
use scatter_core::validate::validate_scattering_data;

use config::PipelineConfig;
use report::RunReport;

#[derive(Parser)]
#[command(
    name = "scatter",
    about = "Direct and inverse scattering on the half-line",
    version
)]
struct Cli {
    /// JSON config file with per-module sections (defaults apply otherwise)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output directory for artifacts and the run report
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertFrom {
    S,
    Rho,
    I,
    Absf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertTo {
    F,
    S,
    Rho,
}

#[derive(Subcommand)]
enum Command {
    /// Scattering data, spectral function and impedance from a potential
    Forward {
        /// PotentialGrid JSON
        #[arg(long)]
        potential: PathBuf,
    },
    /// Convert between data representations through the factorization layer
    Convert {
        #[arg(long, value_enum)]
        from: ConvertFrom,
        #[arg(long, value_enum)]
        to: ConvertTo,
        /// input JSON (type matching --from)
        #[arg(long)]
        input: PathBuf,
        /// auxiliary kappa for odd-index factorization
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
    },
    /// Potential from scattering data through the kernel equation
    InvertMarchenko {
        /// ScatteringData JSON
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        xmax: Option<f64>,
        #[arg(long)]
        dx: Option<f64>,
        #[arg(long)]
        kmax: Option<f64>,
    },
    /// Potential from a spectral function
    InvertGl {
        /// SpectralFunction JSON
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        xmax: Option<f64>,
        #[arg(long)]
        dx: Option<f64>,
    },
    /// Potential from index-zero Jost data via the accelerant chain
    InvertKrein {
        /// JostData JSON
        #[arg(long)]
        input: PathBuf,
        /// also run the contraction-iterated kernel rows beyond x0 and
        /// report the seam agreement
        #[arg(long)]
        hybrid: bool,
        #[arg(long)]
        x0: Option<f64>,
    },
    /// Fixed-energy phase shifts of a compactly supported potential
    PhaseShifts {
        #[arg(long)]
        potential: PathBuf,
        #[arg(long)]
        lmax: Option<usize>,
    },
    /// Support radius from the phase-shift decay
    Radius {
        #[arg(long)]
        potential: PathBuf,
        #[arg(long)]
        lmax: Option<usize>,
    },
    /// Confining potential from bound-state data
    Quarkonium {
        /// QuarkoniumData JSON {energies, slopes}
        #[arg(long)]
        input: PathBuf,
        /// number of reference levels to subtract
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Jost data from a sampled boundary response
    WaveReduce {
        /// BoundaryResponse JSON
        #[arg(long)]
        input: PathBuf,
    },
    /// forward -> invert -> forward closure on a potential
    Roundtrip {
        #[arg(long)]
        potential: PathBuf,
    },
    /// three-method potential table from scattering data
    Compare {
        /// ScatteringData JSON (index 0 for the accelerant column)
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match PipelineConfig::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cli, &cfg) {
        Ok(report) => {
            report.print_summary();
            if let Err(e) = report.write(&cli.out_dir) {
                eprintln!("error writing report: {e}");
                return ExitCode::from(2);
            }
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                eprintln!("one or more invariant checks failed");
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, cfg: &PipelineConfig) -> Result<RunReport, String> {
    let dir = &cli.out_dir;
    match &cli.command {
        Command::Forward { potential } => {
            let q: PotentialGrid = io::read_json(potential)?;
            let mut report = RunReport::new("forward");
            let sd = run_forward(&q, cfg, dir, &mut report)?;
            report.note_artifact(&io::write_json(dir, "scattering.json", &sd)?);
            Ok(report)
        }
        Command::Convert {
            from,
            to,
            input,
            kappa,
        } => run_convert(*from, *to, input, *kappa, cfg, dir),
        Command::InvertMarchenko {
            input,
            xmax,
            dx,
            kmax,
        } => {
            let sd: ScatteringData = io::read_json(input)?;
            let mut report = RunReport::new("invert-marchenko");
            let m_cfg = MarchenkoConfig {
                dx: dx.unwrap_or(cfg.marchenko.dx),
                x_out: xmax.unwrap_or(cfg.marchenko.x_max),
                f_extent: cfg.marchenko.f_extent,
                ..Default::default()
            };
            if let Some(km) = kmax {
                if *km > sd.ks[sd.ks.len() - 1] + 1e-12 {
                    return Err(format!(
                        "requested kmax {km} exceeds the data grid end {}",
                        sd.ks[sd.ks.len() - 1]
                    ));
                }
            }
            let vr = validate_scattering_data(&sd, 1e-8).map_err(|e| e.to_string())?;
            for c in &vr.checks {
                report
                    .check(&format!("data_{}", c.name), if c.passed { 0.0 } else { 1.0 }, 0.5);
            }
            let q = marchenko::invert(&sd, &m_cfg).map_err(|e| e.to_string())?;
            report.note_artifact(&io::write_json(dir, "potential.json", &q)?);
            report.note_artifact(&io::csv_potential(dir, "potential.csv", &q)?);
            Ok(report)
        }
        Command::InvertGl { input, xmax, dx } => {
            let sf: SpectralFunction = io::read_json(input)?;
            let mut report = RunReport::new("invert-gl");
            let g_cfg = GlConfig {
                dx: dx.unwrap_or(cfg.gelfand_levitan.dx),
                x_out: xmax.unwrap_or(cfg.gelfand_levitan.x_max),
                ..Default::default()
            };
            let profile = gl::build_l(&sf, 2.0 * g_cfg.x_out + 0.2, g_cfg.dx)
                .map_err(|e| e.to_string())?;
            let kernel = gl::solve_gl(&profile, &g_cfg).map_err(|e| e.to_string())?;
            // boundary column of the kernel must vanish
            let boundary = kernel
                .values
                .iter()
                .map(|row| row[0].abs())
                .fold(0.0_f64, f64::max);
            report.check("kernel_boundary_column", boundary, 1e-8);
            let q = gl::q_from_k(&kernel).map_err(|e| e.to_string())?;
            report.note_artifact(&io::write_json(dir, "potential.json", &q)?);
            report.note_artifact(&io::csv_potential(dir, "potential.csv", &q)?);
            Ok(report)
        }
        Command::InvertKrein { input, hybrid, x0 } => {
            let jd: JostData = io::read_json(input)?;
            let mut report = RunReport::new("invert-krein");
            let hk = krein::h_from_jost(&jd, cfg.grid.t_max, cfg.krein.dt)
                .map_err(|e| e.to_string())?;
            report.check("accelerant_positivity", -hk.htilde_min, 0.0);
            let fam = krein::solve_krein_family(&hk, 2.0 * cfg.krein.x_max)
                .map_err(|e| e.to_string())?;
            let max_reflection = fam.reflections.iter().cloned().fold(0.0_f64, f64::max);
            report.check("reflection_coefficients_below_one", max_reflection, 1.0);
            let pots = krein::q_from_gamma(&fam, &hk).map_err(|e| e.to_string())?;
            report.check(
                "two_recipes_agree",
                pots.max_discrepancy,
                1e-2 * (1.0 + pots.primary.max_abs()),
            );
            report.note_artifact(&io::write_json(dir, "potential.json", &pots.primary)?);
            report.note_artifact(&io::csv_potential(dir, "potential.csv", &pots.primary)?);
            if *hybrid {
                let x_seam = x0.unwrap_or(cfg.krein.x0);
                let s: Vec<Complex64> = jd.f.iter().map(|f| f.conj() / f).collect();
                let sd = ScatteringData {
                    ks: jd.ks.clone(),
                    s,
                    bound_ks: vec![],
                    norming: vec![],
                    index: 0,
                };
                let m_cfg = MarchenkoConfig::default();
                let n_f = (m_cfg.f_extent / m_cfg.dx).round() as usize;
                let xs: Vec<f64> = (0..=n_f).map(|m| m_cfg.dx * m as f64).collect();
                let fs = marchenko::build_f(&sd, &xs).map_err(|e| e.to_string())?;
                let (mx, diag) = marchenko::diag_by_iteration(
                    &fs,
                    m_cfg.dx,
                    (x_seam - 0.05).max(0.0),
                    cfg.krein.x_max,
                    &m_cfg,
                )
                .map_err(|e| e.to_string())?;
                let q_tail: Vec<f64> = marchenko::derivative_uniform(&diag, m_cfg.dx)
                    .iter()
                    .map(|d| -2.0 * d)
                    .collect();
                let mut seam = 0.0_f64;
                for (x, qv) in mx.iter().zip(&q_tail) {
                    if (*x - x_seam).abs() <= 0.05 {
                        seam = seam.max((qv - pots.primary.value(*x)).abs());
                    }
                }
                report.check("hybrid_seam_agreement", seam, 2e-3 * (1.0 + pots.primary.max_abs()));
            }
            Ok(report)
        }
        Command::PhaseShifts { potential, lmax } => {
            let q: PotentialGrid = io::read_json(potential)?;
            let mut report = RunReport::new("phase-shifts");
            let ps = scatter_core::fixed_energy::partial_wave_forward(
                &q,
                lmax.unwrap_or(cfg.fixed_energy.l_max),
                &Default::default(),
            )
            .map_err(|e| e.to_string())?;
            // a_l consistent with delta_l through the defining relation
            let mut consistency = 0.0_f64;
            for (d, a) in ps.deltas.iter().zip(&ps.a_ells) {
                let want = Complex64::new(0.0, *d).exp() * d.sin();
                consistency = consistency.max((a - want).norm());
            }
            report.check("amplitude_phase_consistency", consistency, 1e-8);
            report.note_artifact(&io::csv_phase_shifts(
                dir,
                "phase_shifts.csv",
                &ps.ells,
                &ps.deltas,
            )?);
            Ok(report)
        }
        Command::Radius { potential, lmax } => {
            let q: PotentialGrid = io::read_json(potential)?;
            let mut report = RunReport::new("radius");
            let ps = scatter_core::fixed_energy::partial_wave_forward(
                &q,
                lmax.unwrap_or(cfg.fixed_energy.l_max),
                &Default::default(),
            )
            .map_err(|e| e.to_string())?;
            let est =
                scatter_core::fixed_energy::radius_estimate(&ps).map_err(|e| e.to_string())?;
            report.check("tail_spread", est.tail_spread, 0.25 * est.a_hat.abs());
            println!("estimated support radius: {:.6}", est.a_hat);
            let tail: Vec<(usize, f64)> = est.raw_tail.clone();
            report.note_artifact(&io::write_json(
                dir,
                "radius.json",
                &serde_json::json!({"a_hat": est.a_hat, "raw_tail": tail}),
            )?);
            Ok(report)
        }
        Command::Quarkonium { input, levels } => {
            let data: QuarkoniumData = io::read_json(input)?;
            let mut report = RunReport::new("quarkonium");
            let n_ref = levels.unwrap_or(data.energies.len());
            let refs = quarkonium::airy_reference(n_ref);
            let rec = quarkonium::recover_potential(
                &data,
                &refs,
                cfg.quarkonium.x_max,
                cfg.quarkonium.dx,
            )
            .map_err(|e| e.to_string())?;
            // forward consistency: shooting reproduces the input energies
            let eigen = quarkonium::shooting_eigenvalues(
                &rec.potential,
                data.energies.len(),
                2.0 * cfg.quarkonium.x_max,
            );
            let mut dev = 0.0_f64;
            for (e, want) in eigen.iter().zip(&data.energies) {
                dev = dev.max((e - want).abs());
            }
            report.check("eigenvalue_consistency", dev, 1e-3);
            report.note_artifact(&io::write_json(dir, "potential.json", &rec.potential)?);
            report.note_artifact(&io::csv_potential(dir, "potential.csv", &rec.potential)?);
            Ok(report)
        }
        Command::WaveReduce { input } => {
            let resp: wave::BoundaryResponse = io::read_json(input)?;
            let mut report = RunReport::new("wave-reduce");
            let jd = wave::wave_reduction(&resp, &cfg.k_grid()).map_err(|e| e.to_string())?;
            // Schwarz symmetry makes f(infinity) = 1 the operative check
            let end_dev = (jd.f[jd.f.len() - 1] - 1.0).norm();
            let quarter = (jd.f[jd.f.len() / 4] - 1.0).norm();
            report.check("jost_tends_to_one", end_dev, (0.5 * quarter).max(1e-8));
            if jd.resonance {
                println!("zero-energy resonance flagged");
            }
            report.note_artifact(&io::write_json(dir, "jost.json", &jd)?);
            report.note_artifact(&io::csv_jost(dir, "jost.csv", &jd)?);
            Ok(report)
        }
        Command::Roundtrip { potential } => {
            let q_in: PotentialGrid = io::read_json(potential)?;
            let mut report = RunReport::new("roundtrip");
            let sd = run_forward(&q_in, cfg, dir, &mut report)?;
            let m_cfg = MarchenkoConfig {
                dx: cfg.marchenko.dx,
                x_out: q_in.x_max().min(cfg.marchenko.x_max.max(q_in.x_max() - 2.0)),
                f_extent: cfg.marchenko.f_extent,
                ..Default::default()
            };
            let q_out = marchenko::invert(&sd, &m_cfg).map_err(|e| e.to_string())?;
            let scale = q_in.max_abs().max(1e-12);
            let mut dev = 0.0_f64;
            for (x, qv) in q_out.xs.iter().zip(&q_out.qs) {
                dev = dev.max((qv - q_in.value(*x)).abs());
            }
            report.check("potential_round_trip", dev / scale, 1e-3);
            report.note_artifact(&io::write_json(dir, "potential_out.json", &q_out)?);
            report.note_artifact(&io::csv_potential(dir, "potential_out.csv", &q_out)?);
            Ok(report)
        }
        Command::Compare { input } => {
            let sd: ScatteringData = io::read_json(input)?;
            let mut report = RunReport::new("compare");
            let m_cfg = MarchenkoConfig {
                dx: cfg.marchenko.dx,
                x_out: cfg.marchenko.x_max,
                f_extent: cfg.marchenko.f_extent,
                ..Default::default()
            };
            let q_m = marchenko::invert(&sd, &m_cfg).map_err(|e| e.to_string())?;

            // spectral route through the factorization layer:
            // c_j = 4 k_j^2 / (|df/dk(ik_j)|^2 s_j)
            let jd = riemann::jost_from_s(&sd, &FactorizationConfig::default())
                .map_err(|e| e.to_string())?;
            let bound: Vec<(f64, f64)> = sd
                .bound_ks
                .iter()
                .zip(&jd.fdot_at_bound)
                .zip(&sd.norming)
                .map(|((kj, fdot), sj)| {
                    let gp = fdot.im.abs();
                    (*kj, 4.0 * kj * kj / (gp * gp * sj))
                })
                .collect();
            let sf = forward::spectral_function(&jd, &bound);
            let g_cfg = GlConfig {
                dx: cfg.gelfand_levitan.dx,
                x_out: cfg.gelfand_levitan.x_max,
                ..Default::default()
            };
            let profile = gl::build_l(&sf, 2.0 * g_cfg.x_out + 0.2, g_cfg.dx)
                .map_err(|e| e.to_string())?;
            let kernel = gl::solve_gl(&profile, &g_cfg).map_err(|e| e.to_string())?;
            let q_g = gl::q_from_k(&kernel).map_err(|e| e.to_string())?;

            // accelerant route needs index zero
            let q_k = if sd.index == 0 {
                let hk = krein::h_from_jost(&jd, cfg.grid.t_max, cfg.krein.dt)
                    .map_err(|e| e.to_string())?;
                let fam = krein::solve_krein_family(&hk, 2.0 * cfg.krein.x_max)
                    .map_err(|e| e.to_string())?;
                Some(
                    krein::q_from_gamma(&fam, &hk)
                        .map_err(|e| e.to_string())?
                        .primary,
                )
            } else {
                None
            };

            let scale = q_m.max_abs().max(1e-12);
            let mut gl_dev = 0.0_f64;
            for (x, qv) in q_g.xs.iter().zip(&q_g.qs) {
                if *x > cfg.gelfand_levitan.x_max.min(cfg.marchenko.x_max) {
                    break;
                }
                gl_dev = gl_dev.max((qv - q_m.value(*x)).abs());
            }
            report.check("gl_vs_marchenko", gl_dev / scale, 5e-3);
            if let Some(qk) = &q_k {
                let mut k_dev = 0.0_f64;
                for (x, qv) in qk.xs.iter().zip(&qk.qs) {
                    if *x > cfg.krein.x_max.min(cfg.marchenko.x_max) {
                        break;
                    }
                    k_dev = k_dev.max((qv - q_m.value(*x)).abs());
                }
                report.check("krein_vs_marchenko", k_dev / scale, 5e-3);
            }

            // three-column table
            let mut rows = String::from("x,q_marchenko,q_gl,q_krein\n");
            for (x, qv) in q_m.xs.iter().zip(&q_m.qs) {
                let qg = q_g.value(*x);
                let qk = q_k.as_ref().map(|q| q.value(*x));
                rows.push_str(&format!(
                    "{x:.12e},{qv:.12e},{qg:.12e},{}\n",
                    qk.map_or(String::from("nan"), |v| format!("{v:.12e}"))
                ));
            }
            std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
            let table = dir.join("compare.csv");
            std::fs::write(&table, rows).map_err(|e| e.to_string())?;
            report.note_artifact(&table);
            Ok(report)
        }
    }
}

/// Shared forward stage: scattering data + derived artifacts with the
/// always-on invariant checks.
fn run_forward(
    q: &PotentialGrid,
    cfg: &PipelineConfig,
    dir: &std::path::Path,
    report: &mut RunReport,
) -> Result<ScatteringData, String> {
    let mcfg = if cfg.forward.step > 0.0 {
        MarchConfig::with_step(cfg.forward.step)
    } else {
        MarchConfig::for_potential(q)
    };
    let ks = cfg.k_grid();
    let sd = forward::scattering_data(q, &ks, &mcfg).map_err(|e| e.to_string())?;
    let unit_dev = sd
        .s
        .iter()
        .map(|s| (s.norm() - 1.0).abs())
        .fold(0.0_f64, f64::max);
    report.check("s_unitarity", unit_dev, 1e-8);

    // Wronskian identity on a subsampled grid
    let k_sub: Vec<f64> = ks.iter().step_by(200).cloned().collect();
    let jd = forward::jost_boundary(q, &k_sub, &mcfg).map_err(|e| e.to_string())?;
    let wronskian = forward::wronskian_residual(&jd)
        .iter()
        .zip(&k_sub)
        .map(|(r, k)| r / (1.0 + k))
        .fold(0.0_f64, f64::max);
    report.check("wronskian_identity", wronskian, 1e-6);

    let delta = forward::phase_shift(&sd).map_err(|e| e.to_string())?;
    let bound = forward::bound_states(q, &mcfg).map_err(|e| e.to_string())?;
    let weights: Vec<(f64, f64)> = bound.states.iter().map(|b| (b.k, b.weight)).collect();
    let sf = forward::spectral_function(&jd, &weights);

    report.note_artifact(&io::csv_scattering(dir, "scattering.csv", &sd)?);
    report.note_artifact(&io::csv_phase(dir, "phase.csv", &sd.ks, &delta)?);
    report.note_artifact(&io::write_json(dir, "spectral.json", &sf)?);
    report.note_artifact(&io::csv_density(dir, "density.csv", &sf)?);
    Ok(sd)
}

fn run_convert(
    from: ConvertFrom,
    to: ConvertTo,
    input: &std::path::Path,
    kappa: f64,
    cfg: &PipelineConfig,
    dir: &std::path::Path,
) -> Result<RunReport, String> {
    let mut report = RunReport::new("convert");
    let fcfg = FactorizationConfig { kappa };
    let _ = cfg;
    // normalize the source to (JostData, optionally full scattering data);
    // norming constants survive only where the source determines them
    let (jd, sd_known): (JostData, Option<ScatteringData>) = match from {
        ConvertFrom::S => {
            let sd: ScatteringData = io::read_json(input)?;
            let jd = riemann::jost_from_s(&sd, &fcfg).map_err(|e| e.to_string())?;
            (jd, Some(sd))
        }
        ConvertFrom::Rho => {
            let sf: SpectralFunction = io::read_json(input)?;
            let sd = riemann::s_from_spectral(&sf).map_err(|e| e.to_string())?;
            let jd = riemann::jost_from_s(&sd, &fcfg).map_err(|e| e.to_string())?;
            (jd, Some(sd))
        }
        ConvertFrom::I => {
            let ifn: scatter_core::types::IFunction = io::read_json(input)?;
            let sd = riemann::scattering_from_ifunction(&ifn).map_err(|e| e.to_string())?;
            let jd = riemann::jost_from_s(&sd, &fcfg).map_err(|e| e.to_string())?;
            (jd, Some(sd))
        }
        ConvertFrom::Absf => {
            #[derive(serde::Deserialize)]
            struct AbsF {
                ks: Vec<f64>,
                absf: Vec<f64>,
                #[serde(default)]
                bound_ks: Vec<f64>,
            }
            let a: AbsF = io::read_json(input)?;
            let jd = riemann::jost_from_modulus(&a.ks, &a.absf, &a.bound_ks)
                .map_err(|e| e.to_string())?;
            (jd, None)
        }
    };
    let max_f = jd.f.iter().map(|f| f.norm()).fold(0.0_f64, f64::max);
    report.check(
        "jost_magnitude_finite",
        if max_f.is_finite() { 0.0 } else { 1.0 },
        0.5,
    );
    match to {
        ConvertTo::F => {
            report.note_artifact(&io::write_json(dir, "jost.json", &jd)?);
            report.note_artifact(&io::csv_jost(dir, "jost.csv", &jd)?);
        }
        ConvertTo::S => {
            let sd = sd_known.ok_or_else(|| {
                String::from(
                    "norming constants are not determined by modulus data; use --to f",
                )
            })?;
            report.note_artifact(&io::write_json(dir, "scattering.json", &sd)?);
            report.note_artifact(&io::csv_scattering(dir, "scattering.csv", &sd)?);
        }
        ConvertTo::Rho => {
            // discrete weights from the factorized zero derivatives
            let weights: Vec<(f64, f64)> = match &sd_known {
                Some(sd) => sd
                    .bound_ks
                    .iter()
                    .zip(&jd.fdot_at_bound)
                    .zip(&sd.norming)
                    .map(|((kj, fdot), sj)| {
                        let gp = fdot.im.abs();
                        (*kj, 4.0 * kj * kj / (gp * gp * sj))
                    })
                    .collect(),
                None => vec![],
            };
            let sf = forward::spectral_function(&jd, &weights);
            report.note_artifact(&io::write_json(dir, "spectral.json", &sf)?);
            report.note_artifact(&io::csv_density(dir, "density.csv", &sf)?);
        }
    }
    Ok(report)
}
