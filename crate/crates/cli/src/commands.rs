use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use hgpprep::analysis::{
    confinement_check, confinement_profile, css_distance_exhaustive, distance_exhaustive, homology_dims,
    single_shot_distance, soundness_check, MonotoneFn,
};
use hgpprep::codes::{thicken, CssCode, Thickening, ThickeningKind};
use hgpprep::decoders::{BpConfig, BpOsdDecoder, OsdConfig, SingleShotDecoder, SweepSet, SyndromeDecoder};
use hgpprep::gf2::io::{read_alist, read_coordinates};
use hgpprep::gf2::{BinaryMatrix, BinaryVector};
use hgpprep::protocol::{
    composition_suite, full_protocol_simulate, repeated_measurement_baseline, stage1_bound_suite, stage2_bound_suite,
    with_workers, Basis, BoundReport, Experiment, NoiseModel, ProtocolOptions, ProtocolSetup, RunSpec, Stage2BoundSpec,
    SyndromeErrorSet,
};

use crate::bundle::Bundle;
use crate::config::{CodeSource, Manifest, RunConfig, MANIFEST_SCHEMA};
use crate::results::{plot_rows, read_results, write_plot, Grouping, ResultRow, ResultWriter};

pub const WORKERS_ENV: &str = "HGPPREP_WORKERS";

const SEED_DERIVATION: &str = "ChaCha8 seeded by SplitMix64 over (master_seed, point, trial, stream); \
point = (kind * 1000 + thickening index) * 1000 + p index; streams 1..5 = stage1, intrinsic, stage2, final, baseline";

pub fn construct(classical: &str, seed: u64, distance: bool, out: &Path) -> Result<()> {
    let b = Bundle::generate(classical, seed, distance)?;
    b.write(out)?;
    println!(
        "{}: [[{}, {}]] from [{}, {}{}] written to {}",
        b.info.code_id,
        b.info.n,
        b.info.k,
        b.info.classical_n,
        b.info.classical_k,
        b.info.classical_d.map(|d| format!(", {d}")).unwrap_or_default(),
        out.display()
    );
    Ok(())
}

fn load_code(cfg: &RunConfig) -> Result<(String, CssCode)> {
    let b = match &cfg.code {
        CodeSource::Bundle { bundle } => Bundle::read(bundle)?,
        CodeSource::Generated { classical, seed, .. } => Bundle::generate(classical, *seed, false)?,
    };
    let code = match cfg.basis_value()? {
        Basis::Plus => b.code,
        Basis::Zero => b.code.dual(),
    };
    Ok((b.info.code_id, code))
}

/// Flag, then config, then the environment, then all cores.
pub fn resolve_workers(flag: Option<usize>, cfg: Option<usize>) -> Result<usize> {
    if let Some(w) = flag.or(cfg) {
        if w == 0 {
            bail!("worker count must be at least 1");
        }
        return Ok(w);
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(w),
            _ => bail!("{WORKERS_ENV}={v:?} is not a positive integer"),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

pub fn simulate(cfg: &RunConfig, out: &Path, workers: Option<usize>) -> Result<()> {
    let workers = resolve_workers(workers, cfg.workers)?;
    let (code_id, base) = load_code(cfg)?;
    let thickenings = cfg.thickening_values()?;
    let experiment = Experiment::parse(&cfg.experiment)?;
    let mut opts = ProtocolOptions::new(experiment);
    opts.stage1_data_noise = cfg.stage1_data_noise;
    opts.whole_bulk = cfg.whole_bulk;
    let dec_cfg = cfg.decoder.build()?;
    let run_id = cfg.run_id();

    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA.into(),
        run_id: run_id.clone(),
        code_id: code_id.clone(),
        library_version: crate::VERSION.into(),
        seed_derivation: SEED_DERIVATION.into(),
        config: cfg.clone(),
    };
    fs::write(out.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    let mut log = File::create(out.join("run.log"))?;
    writeln!(
        log,
        "run {run_id} code {code_id} [[{}, {}]] workers {workers}",
        base.n(),
        base.k()
    )?;

    struct Point {
        kind: &'static str,
        thickening: usize,
        p: usize,
        point: u64,
    }
    let mut points = Vec::new();
    for (ti, th) in thickenings.iter().enumerate() {
        for pi in 0..cfg.noise_grid.len() {
            points.push(Point {
                kind: "protocol",
                thickening: ti,
                p: pi,
                point: (ti * 1000 + pi) as u64,
            });
            if cfg.baseline && matches!(th.kind, ThickeningKind::Repetition { .. }) {
                points.push(Point {
                    kind: "baseline",
                    thickening: ti,
                    p: pi,
                    point: ((1000 + ti) * 1000 + pi) as u64,
                });
            }
        }
    }
    let descriptor = |ti: usize| thickenings[ti].kind.descriptor();
    points.sort_by(|a, b| {
        (a.kind, descriptor(a.thickening), cfg.noise_grid[a.p].to_bits()).cmp(&(
            b.kind,
            descriptor(b.thickening),
            cfg.noise_grid[b.p].to_bits(),
        ))
    });

    let mut writer = ResultWriter::new(File::create(out.join("results.csv"))?)?;
    let mut setups: Vec<Option<ProtocolSetup>> = vec![None; thickenings.len()];
    for pt in &points {
        let th = &thickenings[pt.thickening];
        let p = cfg.noise_grid[pt.p];
        let noise = NoiseModel::uniform(p);
        let spec = RunSpec {
            trials: cfg.trials,
            master_seed: cfg.master_seed,
            point: pt.point,
        };
        let start = Instant::now();
        let result = if pt.kind == "baseline" {
            let ThickeningKind::Repetition { ell } = th.kind else { unreachable!() };
            with_workers(workers, || {
                repeated_measurement_baseline(&base, ell, &noise, cfg.baseline_data_noise, &dec_cfg, &spec)
            })??
        } else {
            if setups[pt.thickening].is_none() {
                setups[pt.thickening] = Some(ProtocolSetup::new(&base, th)?);
            }
            let setup = setups[pt.thickening].as_ref().unwrap();
            with_workers(workers, || full_protocol_simulate(setup, &noise, &opts, &dec_cfg, &spec))??
        };
        let headline = match experiment {
            Experiment::XSector => result.x,
            Experiment::ZSector => result.z,
            Experiment::Full => result.any,
        };
        let wall_ms = start.elapsed().as_millis() as u64;
        let row = ResultRow {
            run_id: run_id.clone(),
            code_id: code_id.clone(),
            kind: pt.kind.into(),
            thickening: th.kind.descriptor(),
            experiment: experiment.name().into(),
            p,
            trials: headline.trials,
            failures_x: result.x.failures,
            failures_z: result.z.failures,
            failures: headline.failures,
            rate: headline.rate(),
            stderr: headline.stderr(),
            wall_ms,
        };
        writer.push(&row)?;
        writeln!(
            log,
            "{} {} p={} failures={}/{} fallbacks={} {}ms",
            row.kind, row.thickening, p, row.failures, row.trials, result.fallbacks, wall_ms
        )?;
    }
    println!("{} points written to {}", points.len(), out.join("results.csv").display());
    Ok(())
}

/// Which exhaustive analysis `check` runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CheckKind {
    Confinement,
    Soundness,
    Distance,
    SingleShot,
}

fn parse_function(s: &str, max_arg: usize) -> Result<Option<MonotoneFn>> {
    Ok(match s {
        "profile" => None,
        "cubic" => Some(MonotoneFn::cubic_quarter(max_arg)),
        _ => match s.strip_prefix("linear:") {
            Some(a) => Some(MonotoneFn::linear(a.parse().with_context(|| format!("slope in {s:?}"))?, max_arg)),
            None => bail!("unknown function {s:?} (expected profile, cubic or linear:ALPHA)"),
        },
    })
}

pub struct CheckArgs {
    pub bundle: PathBuf,
    pub what: CheckKind,
    pub t: usize,
    pub f: String,
    pub thickening: String,
    pub cap: usize,
    pub budget: u128,
}

pub fn check(a: &CheckArgs) -> Result<bool> {
    let b = Bundle::read(&a.bundle)?;
    let (hx, hz) = (b.code.hx(), b.code.hz());
    let hint = "raise --budget or lower --t";
    match a.what {
        CheckKind::Confinement => {
            let profile = confinement_profile(hx, hz, a.t, a.budget).context(hint)?;
            let table: Vec<String> = (0..=profile.max_arg().min(4 * a.t))
                .map(|x| format!("{}", profile.eval(x).unwrap()))
                .collect();
            println!("tightest profile f(0..): [{}]", table.join(", "));
            let f = parse_function(&a.f, hx.rows())?.unwrap_or(profile);
            let r = confinement_check(hx, hz, a.t, &f, a.budget).context(hint)?;
            println!(
                "{} confinement t={} f={}: {} errors, worst ratio {:.4}{}",
                if r.passed { "PASS" } else { "FAIL" },
                r.t,
                f.name,
                r.errors_checked,
                r.worst_ratio,
                r.violation.map(|v| format!(", violation {:?}", v.support())).unwrap_or_default()
            );
            Ok(r.passed)
        }
        CheckKind::Soundness => {
            let f = match parse_function(&a.f, hx.rows())? {
                Some(f) => f,
                None => MonotoneFn::cubic_quarter(hx.rows()),
            };
            let r = soundness_check(hx, hz, a.t, &f, a.budget).context(hint)?;
            println!(
                "{} soundness t={} f={}: {} syndromes, worst ratio {:.4}",
                if r.passed { "PASS" } else { "FAIL" },
                r.t,
                f.name,
                r.syndromes_checked,
                r.worst_ratio
            );
            Ok(r.passed)
        }
        CheckKind::Distance => {
            let dc = distance_exhaustive(&b.classical, Some(a.cap))?;
            let (dx, dz) = css_distance_exhaustive(&b.code, Some(a.cap)).context("raise --cap or --budget")?;
            println!("classical d = {dc}; quantum d_X = {dx}, d_Z = {dz}");
            Ok(true)
        }
        CheckKind::SingleShot => {
            let th = Thickening::new(ThickeningKind::parse(&a.thickening)?)?;
            let t = thicken(&b.code, &th)?;
            let dims = homology_dims(&[t.mz().transpose(), t.code.hz().transpose()])?;
            let dss = single_shot_distance(t.code.hz(), t.mz(), Some(a.cap))?;
            println!(
                "{} over {}: [[{}, {}]], cohomology dims {:?}, single-shot distance {dss}",
                b.info.code_id,
                a.thickening,
                t.code.n(),
                t.code.k(),
                dims
            );
            Ok(true)
        }
    }
}

pub struct DecodeArgs {
    pub matrix: PathBuf,
    pub syndrome: PathBuf,
    pub bp_iters: usize,
    pub osd_depth: usize,
    pub sweep: String,
    pub prior: f64,
    pub single_shot: bool,
}

fn read_matrix(path: &Path) -> Result<BinaryMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let alist = path.extension().is_some_and(|e| e == "alist");
    let m = if alist { read_alist(&text) } else { read_coordinates(&text) };
    m.with_context(|| format!("parsing {}", path.display()))
}

pub fn decode(a: &DecodeArgs) -> Result<()> {
    let h = read_matrix(&a.matrix)?;
    let text = fs::read_to_string(&a.syndrome).with_context(|| format!("reading {}", a.syndrome.display()))?;
    let bits: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = BinaryVector::from_bitstring(&bits).context("syndrome must be a string of 0 and 1")?;
    if s.len() != h.rows() {
        bail!("syndrome has {} bits but the matrix has {} rows", s.len(), h.rows());
    }
    let bp = BpConfig {
        max_iters: a.bp_iters,
        channel_prior: a.prior,
        ..BpConfig::default()
    };
    bp.validate()?;
    let osd = OsdConfig {
        search_depth: a.osd_depth,
        sweep: SweepSet::parse(&a.sweep)?,
    };
    if a.single_shot {
        let r = SingleShotDecoder::new(&h, bp, osd, a.prior, a.prior)?.decode(&s)?;
        println!("{}", r.data_correction.to_bitstring());
        println!("{}", r.syndrome_error.to_bitstring());
        eprintln!(
            "data weight {}, syndrome repair weight {}, converged {}, osd {}",
            r.data_correction.weight(),
            r.syndrome_error.weight(),
            r.detail.converged,
            r.detail.osd_used
        );
    } else {
        let r = BpOsdDecoder::new(&h, bp, osd)?.decode(&s)?;
        println!("{}", r.correction.to_bitstring());
        eprintln!(
            "weight {}, converged {} after {} iterations, osd {}",
            r.correction.weight(),
            r.converged,
            r.iterations,
            r.osd_used
        );
    }
    Ok(())
}

pub struct VerifyArgs {
    pub bundle: PathBuf,
    pub thickening: String,
    pub t: Option<usize>,
    pub d: Option<usize>,
    pub samples: u64,
    pub seed: u64,
    pub budget: u128,
}

pub fn verify_bounds(a: &VerifyArgs) -> Result<bool> {
    let b = Bundle::read(&a.bundle)?;
    let th = Thickening::new(ThickeningKind::parse(&a.thickening)?)?;
    let setup = ProtocolSetup::new(&b.code, &th)?;
    let d = match a.d {
        Some(d) => d,
        None => {
            let (dx, dz) = css_distance_exhaustive(&b.code, Some(12))?;
            dx.exact()
                .zip(dz.exact())
                .map(|(x, z)| x.min(z))
                .ok_or_else(|| anyhow!("distance above 12; pass --d"))?
        }
    };
    let t = a.t.unwrap_or(d.saturating_sub(1)).max(1);
    println!(
        "{} over {}: [[{}, {}, {d}]], t = {t}",
        b.info.code_id,
        a.thickening,
        b.code.n(),
        b.code.k()
    );
    let set = SyndromeErrorSet {
        exhaustive_max: 1,
        sampled: (a.samples > 0).then_some((2, a.samples, a.seed)),
    };
    let stage2 = Stage2BoundSpec {
        t,
        f: None,
        intrinsic_samples: 2,
        seed: a.seed,
        bound: None,
        budget: a.budget,
    };
    let hint = "raise --budget or choose a smaller instance";
    let mut reports: Vec<BoundReport> = vec![
        stage1_bound_suite(&setup.thick, &set, a.budget).context(hint)?,
        stage2_bound_suite(&setup, &stage2).context(hint)?,
    ];
    let (x, z) = composition_suite(&setup, d, &stage2, a.budget).context(hint)?;
    reports.push(x);
    reports.push(z);
    for r in &reports {
        println!("{}", r.summary());
    }
    Ok(reports.iter().all(|r| r.passed))
}

pub fn plot_data(inputs: &[PathBuf], grouping: Grouping, out: Option<&Path>) -> Result<()> {
    let mut rows = Vec::new();
    for p in inputs {
        let f = File::open(p).with_context(|| format!("opening {}", p.display()))?;
        rows.extend(read_results(f).with_context(|| format!("reading {}", p.display()))?);
    }
    if rows.is_empty() {
        eprintln!("warning: no result rows; writing an empty table");
    }
    let plot = plot_rows(&rows, grouping);
    match out {
        Some(path) => write_plot(&plot, File::create(path)?)?,
        None => write_plot(&plot, std::io::stdout().lock())?,
    }
    Ok(())
}
