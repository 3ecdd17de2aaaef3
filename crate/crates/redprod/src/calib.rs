//! The calibration constant C(G, N) = c₀(G)·c₁(G)^N.
//!
//! The residue normalization leaves one global constant per group and orbit
//! count undetermined. It is fixed empirically, once, from two rank-1
//! anchors — the N = 3 point count and the N = 4 match against the
//! convolution-density oracle — then frozen in a versioned sidecar file.
//! Computations fail loudly when the file is absent.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::Rat;
use crate::error::{Error, Result};
use crate::lie::{build_root_system, RootSystem};

pub const CALIBRATION_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupCalibration {
    /// Both stored as exact fraction strings.
    pub c0: String,
    pub c1: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Calibration {
    pub version: u32,
    /// Keyed by series+rank, e.g. "A1".
    pub groups: BTreeMap<String, GroupCalibration>,
}

impl Calibration {
    pub fn empty() -> Self {
        Self {
            version: CALIBRATION_VERSION,
            groups: BTreeMap::new(),
        }
    }

    pub fn group_key(rs: &RootSystem) -> String {
        format!("{}{}", rs.series, rs.rank)
    }

    pub fn insert(&mut self, key: String, c0: &Rat, c1: &Rat) {
        self.groups.insert(
            key,
            GroupCalibration {
                c0: c0.to_string(),
                c1: c1.to_string(),
            },
        );
    }

    /// C(rs, N) = c₀·c₁^N.
    pub fn constant(&self, rs: &RootSystem, n_orbits: usize) -> Result<Rat> {
        let key = Self::group_key(rs);
        let entry = self
            .groups
            .get(&key)
            .ok_or_else(|| Error::CalibrationMissing {
                group: key.clone(),
                n: n_orbits,
            })?;
        let c0 = parse_rat(&entry.c0)?;
        let c1 = parse_rat(&entry.c1)?;
        let mut c = c0;
        for _ in 0..n_orbits {
            c *= &c1;
        }
        Ok(c)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(s);
        let cal: Calibration = serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
            path: e.path().to_string(),
            message: e.to_string(),
        })?;
        if cal.version != CALIBRATION_VERSION {
            return Err(Error::Validation(format!(
                "calibration version {} not supported (expected {})",
                cal.version, CALIBRATION_VERSION
            )));
        }
        for (key, g) in &cal.groups {
            parse_rat(&g.c0).map_err(|_| Error::Parse {
                path: format!("groups.{}.c0", key),
                message: "not a rational".into(),
            })?;
            parse_rat(&g.c1).map_err(|_| Error::Parse {
                path: format!("groups.{}.c1", key),
                message: "not a rational".into(),
            })?;
        }
        Ok(cal)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("calibration serializes");
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}

/// Exact fraction-string parser used for all rational I/O. Accepts "p" and
/// "p/q" with optional sign; rejects zero denominators instead of panicking.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = |msg: &str| Error::Validation(format!("bad rational {:?}: {}", s, msg));
    let trimmed = s.trim();
    if trimmed.len() > 4096 {
        return Err(bad("too long"));
    }
    let mut parts = trimmed.splitn(2, '/');
    let numer: num_bigint::BigInt = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|_| bad("numerator is not an integer"))?;
    let denom: num_bigint::BigInt = match parts.next() {
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| bad("denominator is not an integer"))?,
        None => 1.into(),
    };
    if denom.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(numer, denom))
}

/// Nearest rational with small denominator via continued-fraction
/// convergents; used to snap the numeric N = 4 anchor onto its exact value.
pub fn rational_approx(x: f64, tol: f64) -> Rat {
    let negative = x < 0.0;
    let target = x.abs();
    let mut v = target;
    let mut a = v.floor();
    let (mut p0, mut q0): (i128, i128) = (1, 0);
    let (mut p1, mut q1): (i128, i128) = (a as i128, 1);
    loop {
        let approx = p1 as f64 / q1 as f64;
        if (approx - target).abs() <= tol {
            break;
        }
        let frac = v - a;
        if frac.abs() < 1e-12 || q1 > 1_000_000_000 {
            break;
        }
        v = 1.0 / frac;
        a = v.floor();
        let p2 = a as i128 * p1 + p0;
        let q2 = a as i128 * q1 + q0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    let r = Rat::new(p1.into(), q1.into());
    if negative {
        -r
    } else {
        r
    }
}

/// Compute the default calibration from the two rank-1 anchors, then the
/// rank-2 sign anchor.
pub fn calibrate_default() -> Result<Calibration> {
    use crate::pairing::{raw_pairing, ClassSpec, OrbitData};
    use crate::residue::ResidueConfig;

    let mut cal = Calibration::empty();
    let a1 = build_root_system('A', 1)?;

    // Anchor 1: (A1, N=3), ξ = (1,1,3/2): the reduced space is a single
    // point, so the calibrated pairing must be 1.
    let od3 = OrbitData::new(
        a1.clone(),
        vec![
            vec![Rat::from_integer(1.into())],
            vec![Rat::from_integer(1.into())],
            vec![Rat::new(3.into(), 2.into())],
        ],
    )?;
    let (raw3, _) = raw_pairing(&od3, &ClassSpec::one(), &ResidueConfig::descending(1))?;
    if !raw3.is_real() || raw3.is_zero() {
        return Err(Error::Validation(format!(
            "N=3 anchor residue should be a nonzero real rational, got {}",
            raw3
        )));
    }
    let c3 = Rat::one() / raw3.re;

    // Anchor 2: (A1, N=4), ξ = (1,1,1,3/2): match the engine volume to the
    // convolution-density oracle, then snap onto the exact rational.
    let od4 = OrbitData::new(
        a1.clone(),
        vec![
            vec![Rat::from_integer(1.into())],
            vec![Rat::from_integer(1.into())],
            vec![Rat::from_integer(1.into())],
            vec![Rat::new(3.into(), 2.into())],
        ],
    )?;
    let (raw4, _) = raw_pairing(&od4, &ClassSpec::one(), &ResidueConfig::descending(1))?;
    // engine volume = C₄·raw₄·1!/i, so C₄ = oracle·i/raw₄ with raw₄ = b·i
    if !raw4.re.is_zero() || raw4.im.is_zero() {
        return Err(Error::Validation(format!(
            "N=4 anchor residue should be purely imaginary, got {}",
            raw4
        )));
    }
    let oracle =
        crate::oracle::convolution_density(&[1.0, 1.0, 1.0, 1.5], 1.0 / 400.0)?.volume_reading();
    let b = num_traits::ToPrimitive::to_f64(&raw4.im).unwrap();
    let c4 = rational_approx(oracle / b, 1e-3);

    let c1 = &c4 / &c3;
    let c0 = &c3 / &(&c1 * &c1 * &c1);
    cal.insert("A1".into(), &c0, &c1);

    // Rank-2 sign anchor: no independent rank-2 oracle is in scope, so fix
    // c₀(A2) = ±1 by requiring a positive volume at a canonical strongly
    // generic sample, with c₁(A2) = 1.
    let a2 = build_root_system('A', 2)?;
    let od = OrbitData::new(
        a2,
        vec![
            vec![Rat::new(23.into(), 4.into()), Rat::new(27.into(), 4.into())],
            vec![
                Rat::new(75.into(), 16.into()),
                Rat::new(19.into(), 4.into()),
            ],
            vec![Rat::new(61.into(), 8.into()), Rat::new(69.into(), 8.into())],
        ],
    )?;
    if !crate::pairing::is_strongly_generic(&od) {
        return Err(Error::Validation(
            "A2 anchor sample is not strongly generic".into(),
        ));
    }
    let (raw_a2, _) = raw_pairing(&od, &ClassSpec::one(), &ResidueConfig::descending(2))?;
    // volume direction = raw/i; require the calibrated volume positive
    if !raw_a2.re.is_zero() || raw_a2.im.is_zero() {
        return Err(Error::Validation(format!(
            "A2 anchor residue should be purely imaginary, got {}",
            raw_a2
        )));
    }
    let sign = if raw_a2.im.is_positive() {
        Rat::one()
    } else {
        -Rat::one()
    };
    cal.insert("A2".into(), &sign, &Rat::one());

    Ok(cal)
}
