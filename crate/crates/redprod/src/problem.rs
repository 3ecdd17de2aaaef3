//! Declarative problem specifications: one JSON document describing the
//! group, the orbit representatives, and the class to pair.
//!
//! All exact numbers travel as fraction strings ("3/2", "-1/64") so a spec
//! file round-trips bit-exactly through the engine's rational arithmetic.

use serde::{Deserialize, Serialize};

use crate::calib::parse_rat;
use crate::error::{Error, Result};
use crate::lie::build_root_system;
use crate::pairing::{ClassFactor, ClassSpec, OrbitData, RestrictionMode};
use crate::residue::ResidueConfig;
use crate::LinearForm;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSpec {
    pub series: char,
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZetaFactorSpec {
    /// 1-based orbit index.
    pub orbit: usize,
    /// Weight coefficients as fraction strings, length = rank.
    pub weight: Vec<String>,
    pub power: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub group: GroupSpec,
    /// N coordinate vectors, each of length rank, as fraction strings.
    pub xi: Vec<Vec<String>>,
    #[serde(default)]
    pub zeta: Vec<ZetaFactorSpec>,
    #[serde(default)]
    pub restriction_mode: Option<RestrictionMode>,
    #[serde(default)]
    pub variable_order: Option<Vec<usize>>,
}

impl ProblemSpec {
    /// Parse with field-path error reporting.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(s);
        serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    /// Resolve into engine inputs.
    pub fn build(&self) -> Result<(OrbitData, ClassSpec, ResidueConfig)> {
        if self.group.rank > 6 {
            return Err(Error::Validation(
                "rank larger than 6 is not supported".into(),
            ));
        }
        if self.xi.len() > 12 {
            return Err(Error::Validation(
                "more than 12 orbits is not supported".into(),
            ));
        }
        let rs = build_root_system(self.group.series, self.group.rank)?;

        let mut xi = Vec::with_capacity(self.xi.len());
        for (j, row) in self.xi.iter().enumerate() {
            if row.len() != rs.rank {
                return Err(Error::Parse {
                    path: format!("xi[{}]", j),
                    message: format!("expected {} coordinates, got {}", rs.rank, row.len()),
                });
            }
            let mut v = Vec::with_capacity(row.len());
            for (i, s) in row.iter().enumerate() {
                v.push(parse_rat(s).map_err(|e| Error::Parse {
                    path: format!("xi[{}][{}]", j, i),
                    message: e.to_string(),
                })?);
            }
            xi.push(v);
        }
        let od = OrbitData::new(rs, xi)?;

        let mut factors = Vec::with_capacity(self.zeta.len());
        for (k, f) in self.zeta.iter().enumerate() {
            if f.weight.len() != od.rs.rank {
                return Err(Error::Parse {
                    path: format!("zeta[{}].weight", k),
                    message: format!(
                        "expected {} coordinates, got {}",
                        od.rs.rank,
                        f.weight.len()
                    ),
                });
            }
            let mut coeffs = Vec::with_capacity(f.weight.len());
            for (i, s) in f.weight.iter().enumerate() {
                coeffs.push(parse_rat(s).map_err(|e| Error::Parse {
                    path: format!("zeta[{}].weight[{}]", k, i),
                    message: e.to_string(),
                })?);
            }
            factors.push(ClassFactor {
                orbit: f.orbit,
                weight: LinearForm::new(coeffs),
                power: f.power,
            });
        }
        let mode = self.restriction_mode.unwrap_or_default();
        let zeta = ClassSpec::new(factors, mode)?;
        zeta.validate_for(od.n_orbits())?;

        let cfg = match &self.variable_order {
            None => ResidueConfig::descending(od.rs.rank),
            Some(order) => {
                if order.len() != od.rs.rank {
                    return Err(Error::Parse {
                        path: "variable_order".into(),
                        message: format!("expected {} entries", od.rs.rank),
                    });
                }
                ResidueConfig::with_order(order.clone())?
            }
        };
        Ok((od, zeta, cfg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A1_N3: &str = r#"{
        "group": {"series": "A", "rank": 1},
        "xi": [["1"], ["1"], ["3/2"]]
    }"#;

    #[test]
    fn parses_minimal_spec() {
        let spec = ProblemSpec::from_json_str(A1_N3).unwrap();
        let (od, zeta, cfg) = spec.build().unwrap();
        assert_eq!(od.n_orbits(), 3);
        assert_eq!(zeta.degree(), 0);
        assert_eq!(cfg.variable_order, vec![0]);
    }

    #[test]
    fn bad_rank_reports_field_path() {
        let bad = r#"{"group": {"series": "A", "rank": "two"}, "xi": []}"#;
        match ProblemSpec::from_json_str(bad) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "group.rank"),
            other => panic!("expected parse error, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn bad_rational_reports_coordinate() {
        let bad = r#"{"group": {"series": "A", "rank": 1}, "xi": [["1"], ["x"], ["3/2"]]}"#;
        let spec = ProblemSpec::from_json_str(bad).unwrap();
        match spec.build() {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "xi[1][0]"),
            other => panic!("expected parse error, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn zeta_and_order_resolve() {
        let text = r#"{
            "group": {"series": "A", "rank": 2},
            "xi": [["1","1"], ["1","5/4"], ["3/2","1"]],
            "zeta": [{"orbit": 1, "weight": ["1","0"], "power": 1}],
            "restriction_mode": "literal",
            "variable_order": [0, 1]
        }"#;
        let spec = ProblemSpec::from_json_str(text).unwrap();
        let (od, zeta, cfg) = spec.build().unwrap();
        assert_eq!(od.rs.rank, 2);
        assert_eq!(zeta.degree(), 2);
        assert_eq!(zeta.restriction_mode, RestrictionMode::Literal);
        assert_eq!(cfg.variable_order, vec![0, 1]);
    }

    #[test]
    fn roundtrip_preserves_fractions() {
        let spec = ProblemSpec::from_json_str(A1_N3).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let again = ProblemSpec::from_json_str(&text).unwrap();
        let (od1, _, _) = spec.build().unwrap();
        let (od2, _, _) = again.build().unwrap();
        assert_eq!(od1.xi, od2.xi);
    }
}
