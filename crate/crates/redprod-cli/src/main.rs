//! Command-line front end: parse declarative problem specs, run the exact
//! engine, and emit machine-readable results.
//!
//! Exit codes: 0 success, 1 parse/validation error, 2 non-generic input,
//! 3 internal inconsistency, 4 degree mismatch, 5 calibration missing or a
//! check failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use redprod::check::{run_checks, CheckOptions, Fault};
use redprod::pairing::liouville_volume_with_config;
use redprod::problem::ProblemSpec;
use redprod::{
    calibrate_default, check_generic, dim_reduced, intersection_number, Calibration, ClassSpec,
    Error, GaussianRational, OrbitData, Rat, RestrictionMode,
};

#[derive(Parser)]
#[command(
    name = "redprod",
    about = "Exact intersection pairings and symplectic volumes of reduced products of adjoint orbits",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CalibrationArg {
    /// Path to the calibration sidecar file.
    #[arg(long, default_value = "calibration.json")]
    calibration: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Liouville volume of the reduced product described by a spec file.
    Volume {
        spec: PathBuf,
        #[command(flatten)]
        cal: CalibrationArg,
    },
    /// Intersection pairing of the class described by a spec file.
    Pair {
        spec: PathBuf,
        #[command(flatten)]
        cal: CalibrationArg,
        /// Evaluate even when degree(zeta) != dim_reduced.
        #[arg(long)]
        allow_any_degree: bool,
        /// Report literal and weyl-twisted restrictions side by side.
        #[arg(long)]
        both_modes: bool,
    },
    /// Sweep one rank-1 orbit parameter and emit CSV with chamber ids.
    Sweep {
        spec: PathBuf,
        /// 1-based orbit index to sweep.
        #[arg(long)]
        param: usize,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        cal: CalibrationArg,
    },
    /// Run the oracle and property suites; exit 0 iff everything passes.
    Check {
        #[command(flatten)]
        cal: CalibrationArg,
        /// Inject a deliberate fault (accepted value: rank1) to exercise the
        /// failure path.
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Compute the calibration constants from their anchors and write the
    /// sidecar file.
    Calibrate {
        #[arg(long, default_value = "calibration.json")]
        out: PathBuf,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NonGeneric(_) => 2,
        Error::ImaginaryResidue(_) | Error::ResidueIncomplete => 3,
        Error::DegreeMismatch { .. } => 4,
        Error::CalibrationMissing { .. } => 5,
        _ => 1,
    }
}

#[derive(Serialize)]
struct ErrorOut<'a> {
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    violations: Option<serde_json::Value>,
}

fn emit_error(err: &Error) -> ExitCode {
    let (tag, violations) = match err {
        Error::Parse { .. } => ("parse", None),
        Error::NonGeneric(report) => (
            "non_generic",
            Some(serde_json::to_value(&report.violations).unwrap()),
        ),
        Error::ImaginaryResidue(_) | Error::ResidueIncomplete => ("internal_inconsistency", None),
        Error::DegreeMismatch { .. } => ("degree_mismatch", None),
        Error::CalibrationMissing { .. } => ("calibration_missing", None),
        _ => ("invalid_input", None),
    };
    let out = ErrorOut {
        error: tag,
        message: err.to_string(),
        violations,
    };
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    eprintln!("error: {}", err);
    ExitCode::from(exit_code_for(err))
}

#[derive(Serialize)]
struct ComplexOut {
    re: String,
    im: String,
}

impl From<&GaussianRational> for ComplexOut {
    fn from(z: &GaussianRational) -> Self {
        Self {
            re: z.re.to_string(),
            im: z.im.to_string(),
        }
    }
}

#[derive(Serialize)]
struct VolumeOut {
    dim_reduced: usize,
    raw: ComplexOut,
    value: ComplexOut,
    volume: String,
    float: f64,
    contributing_tuples: usize,
}

fn load_spec(path: &Path) -> Result<ProblemSpec, Error> {
    let text = std::fs::read_to_string(path)?;
    ProblemSpec::from_json_str(&text)
}

fn cmd_volume(spec_path: &Path, cal_path: &Path) -> Result<(), Error> {
    let spec = load_spec(spec_path)?;
    let (od, _zeta, cfg) = spec.build()?;
    let cal = Calibration::load(cal_path)?;
    let result = redprod::pairing::pairing_with_config(&od, &ClassSpec::one(), &cal, &cfg)?;
    let volume = liouville_volume_with_config(&od, &cal, &cfg)?;
    let out = VolumeOut {
        dim_reduced: result.dim_reduced,
        raw: (&result.raw).into(),
        value: (&result.value).into(),
        volume: volume.to_string(),
        float: volume.to_f64().unwrap_or(f64::NAN),
        contributing_tuples: result.contributing_tuples,
    };
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

#[derive(Serialize)]
struct PairOut {
    intersection_number: String,
    degree: usize,
    dim_reduced: usize,
    mode: &'static str,
}

#[derive(Serialize)]
struct ModeValue {
    mode: &'static str,
    value: ComplexOut,
}

#[derive(Serialize)]
struct BothModesOut {
    degree: usize,
    dim_reduced: usize,
    modes: Vec<ModeValue>,
}

fn mode_name(mode: RestrictionMode) -> &'static str {
    match mode {
        RestrictionMode::WeylTwisted => "weyl-twisted",
        RestrictionMode::Literal => "literal",
    }
}

fn cmd_pair(
    spec_path: &Path,
    cal_path: &Path,
    allow_any_degree: bool,
    both_modes: bool,
) -> Result<(), Error> {
    let spec = load_spec(spec_path)?;
    let (od, zeta, cfg) = spec.build()?;
    let cal = Calibration::load(cal_path)?;
    let d = dim_reduced(&od.rs, od.n_orbits());

    if both_modes {
        let mut modes = Vec::new();
        for mode in [RestrictionMode::Literal, RestrictionMode::WeylTwisted] {
            let mut z = zeta.clone();
            z.restriction_mode = mode;
            let res = redprod::pairing::pairing_with_config(&od, &z, &cal, &cfg)?;
            modes.push(ModeValue {
                mode: mode_name(mode),
                value: (&res.value).into(),
            });
        }
        let out = BothModesOut {
            degree: zeta.degree(),
            dim_reduced: d,
            modes,
        };
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
        return Ok(());
    }

    let value = if allow_any_degree {
        let res = redprod::pairing::pairing_with_config(&od, &zeta, &cal, &cfg)?;
        if !res.value.is_real() {
            return Err(Error::ImaginaryResidue(res.value.to_string()));
        }
        res.value.re
    } else {
        if zeta.degree() != d {
            return Err(Error::DegreeMismatch {
                degree: zeta.degree(),
                dim_reduced: d,
            });
        }
        intersection_number(&od, &zeta, &cal)?
    };
    let out = PairOut {
        intersection_number: value.to_string(),
        degree: zeta.degree(),
        dim_reduced: d,
        mode: mode_name(zeta.restriction_mode),
    };
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

/// Exact chamber signature of a rank-1 configuration: the sign pattern of
/// every signed sum. It changes exactly at wall crossings.
fn chamber_signature(xi: &[Rat]) -> Vec<i8> {
    let n = xi.len();
    let mut signs = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let mut acc = Rat::from_integer(0.into());
        for (j, x) in xi.iter().enumerate() {
            if mask & (1 << j) == 0 {
                acc += x;
            } else {
                acc -= x;
            }
        }
        signs.push(if acc.is_positive() {
            1
        } else if acc.is_negative() {
            -1
        } else {
            0
        });
    }
    signs
}

fn cmd_sweep(
    spec_path: &Path,
    cal_path: &Path,
    param: usize,
    from: &str,
    to: &str,
    steps: usize,
) -> Result<(), Error> {
    let spec = load_spec(spec_path)?;
    let (od, _zeta, cfg) = spec.build()?;
    let cal = Calibration::load(cal_path)?;
    if od.rs.rank != 1 {
        return Err(Error::Validation(
            "sweep is defined for rank-1 specs (the swept value is a scalar)".into(),
        ));
    }
    if param == 0 || param > od.n_orbits() {
        return Err(Error::IndexOutOfRange {
            index: param,
            n: od.n_orbits(),
        });
    }
    if steps < 2 {
        return Err(Error::Validation("need at least 2 steps".into()));
    }
    let a = redprod::parse_rat(from)?;
    let b = redprod::parse_rat(to)?;
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Validation(
            "sweep must stay within positive xi".into(),
        ));
    }

    println!("xi,volume,chamber");
    let mut chamber_id = 0usize;
    let mut last_signature: Option<Vec<i8>> = None;
    let span = &b - &a;
    for s in 0..steps {
        let t = &a + &(&span * &Rat::new((s as i64).into(), ((steps - 1) as i64).into()));
        let mut xi = od.xi.clone();
        xi[param - 1] = vec![t.clone()];
        let od_t = OrbitData::new(od.rs.clone(), xi)?;
        let flat: Vec<Rat> = od_t.xi.iter().map(|v| v[0].clone()).collect();
        let signature = chamber_signature(&flat);
        if signature.contains(&0) || !check_generic(&od_t).is_ok() {
            println!("{},,non-generic", t.to_f64().unwrap_or(f64::NAN));
            continue;
        }
        match &last_signature {
            Some(prev) if *prev == signature => {}
            _ => {
                if last_signature.is_some() {
                    chamber_id += 1;
                }
                last_signature = Some(signature);
            }
        }
        let vol = liouville_volume_with_config(&od_t, &cal, &cfg)?;
        println!(
            "{},{},{}",
            t.to_f64().unwrap_or(f64::NAN),
            vol.to_f64().unwrap_or(f64::NAN),
            chamber_id
        );
    }
    Ok(())
}

fn cmd_check(cal_path: &Path, inject_fault: Option<&str>) -> Result<bool, Error> {
    let fault = match inject_fault {
        None => None,
        Some("rank1") => Some(Fault::PerturbRank1Rule),
        Some(other) => {
            return Err(Error::Validation(format!("unknown fault {:?}", other)));
        }
    };
    let calibration = match Calibration::load(cal_path) {
        Ok(c) => Some(c),
        Err(Error::Io(_)) => None,
        Err(e) => return Err(e),
    };
    let report = run_checks(&CheckOptions { calibration, fault });
    for item in &report.items {
        println!(
            "{} criterion {}: {}",
            if item.passed { "PASS" } else { "FAIL" },
            item.name,
            item.detail
        );
    }
    Ok(report.all_passed())
}

fn cmd_calibrate(out: &Path) -> Result<(), Error> {
    let cal = calibrate_default()?;
    cal.save(out)?;
    println!("{}", serde_json::to_string_pretty(&cal).unwrap());
    eprintln!("calibration written to {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("REDPROD_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }

    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Volume { spec, cal } => cmd_volume(spec, &cal.calibration).map(|_| true),
        Command::Pair {
            spec,
            cal,
            allow_any_degree,
            both_modes,
        } => cmd_pair(spec, &cal.calibration, *allow_any_degree, *both_modes).map(|_| true),
        Command::Sweep {
            spec,
            param,
            from,
            to,
            steps,
            cal,
        } => cmd_sweep(spec, &cal.calibration, *param, from, to, *steps).map(|_| true),
        Command::Check { cal, inject_fault } => {
            cmd_check(&cal.calibration, inject_fault.as_deref())
        }
        Command::Calibrate { out } => cmd_calibrate(out).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(5),
        Err(e) => emit_error(&e),
    }
}
