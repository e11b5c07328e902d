//! Complete simplicial fans given by rays and maximal cones.
//!
//! Rays are indexed from 0 in the Rust API and from 1 in every external
//! format (JSON documents, CLI flags, diagnostics).

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::{determinant, gcd_i64, IntMatrix};

/// A fan of a toric variety, stored through its maximal cones only.
///
/// Lower-dimensional cones are the subsets of maximal cones. Instances are
/// immutable once built; [`Fan::new`] enforces the structural invariants
/// (cone cardinality, index range, distinct nonzero rays, every ray used).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    pair_table: Vec<bool>,
}

impl Fan {
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        if dim == 0 {
            return Err(Error::MalformedFan("dimension must be positive".into()));
        }
        let m = rays.len();
        let mut seen = HashSet::new();
        for (i, ray) in rays.iter().enumerate() {
            if ray.len() != dim {
                return Err(Error::MalformedFan(format!(
                    "ray {} has {} coordinates, expected {dim}",
                    i + 1,
                    ray.len()
                )));
            }
            if ray.iter().all(|&x| x == 0) {
                return Err(Error::MalformedFan(format!("ray {} is the zero vector", i + 1)));
            }
            if !seen.insert(ray.as_slice()) {
                let first = rays.iter().position(|r| r == ray).unwrap_or(0);
                return Err(Error::MalformedFan(format!(
                    "ray {} duplicates ray {}",
                    i + 1,
                    first + 1
                )));
            }
        }

        let mut cones = Vec::with_capacity(max_cones.len());
        let mut used = vec![false; m];
        for (c, cone) in max_cones.into_iter().enumerate() {
            let mut cone = cone;
            cone.sort_unstable();
            cone.dedup();
            if cone.len() != dim {
                return Err(Error::MalformedFan(format!(
                    "max cone {} has {} distinct rays, expected {dim}",
                    c + 1,
                    cone.len()
                )));
            }
            if let Some(&bad) = cone.iter().find(|&&i| i >= m) {
                return Err(Error::MalformedFan(format!(
                    "max cone {} references ray {}, but there are only {m} rays",
                    c + 1,
                    bad + 1
                )));
            }
            for &i in &cone {
                used[i] = true;
            }
            cones.push(cone);
        }
        cones.sort();
        if let Some(w) = cones.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedFan(format!(
                "max cone {:?} listed twice",
                w[0].iter().map(|i| i + 1).collect::<Vec<_>>()
            )));
        }
        if let Some(unused) = used.iter().position(|u| !u) {
            return Err(Error::MalformedFan(format!(
                "ray {} lies in no max cone",
                unused + 1
            )));
        }

        let mut pair_table = vec![false; m * m];
        for cone in &cones {
            for &a in cone {
                for &b in cone {
                    pair_table[a * m + b] = true;
                }
            }
        }
        Ok(Fan { dim, rays, max_cones: cones, labels: None, pair_table })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Fan> {
        if labels.len() != self.rays.len() {
            return Err(Error::MalformedFan(format!(
                "{} labels for {} rays",
                labels.len(),
                self.rays.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Dimension `n` of the ambient lattice.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number `m` of rays.
    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    /// Maximal cones, each sorted ascending, listed in lexicographic order.
    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The `n × m` matrix whose columns are the rays.
    pub fn characteristic_matrix(&self) -> IntMatrix {
        let mut lambda = IntMatrix::zeros(self.dim, self.rays.len());
        for (i, ray) in self.rays.iter().enumerate() {
            for (j, &x) in ray.iter().enumerate() {
                lambda.set(j, i, BigInt::from(x));
            }
        }
        lambda
    }

    /// The characteristic matrix as plain rows (row `j` holds coordinate `j`
    /// of every ray).
    pub fn characteristic_rows(&self) -> Vec<Vec<i64>> {
        (0..self.dim).map(|j| self.rays.iter().map(|r| r[j]).collect()).collect()
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.rays.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i + 1, len: self.rays.len() })
        }
    }

    /// Whether rays `i` and `j` span a cone, i.e. lie in a common max cone.
    /// A single ray always spans a cone, so `i == j` is `true`.
    pub fn is_cone_pair(&self, i: usize, j: usize) -> Result<bool> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.pair_table[i * self.rays.len() + j])
    }

    /// Whether the given ray set is a face of some max cone.
    pub fn is_cone(&self, rays: &[usize]) -> bool {
        self.max_cones.iter().any(|c| rays.iter().all(|r| c.binary_search(r).is_ok()))
    }

    pub fn to_document(&self) -> FanDocument {
        FanDocument {
            n: self.dim,
            rays: self.rays.clone(),
            max_cones: self
                .max_cones
                .iter()
                .map(|c| c.iter().map(|i| i + 1).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    /// Canonical JSON: keys `n`, `rays`, `max_cones`, `labels` in that order,
    /// 1-based cone indices, cones sorted.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("fan serialization cannot fail")
    }

    /// Hex SHA-256 of [`Fan::to_json`].
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}

/// The on-disk fan format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub n: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FanDocument {
    pub fn into_fan(self) -> Result<Fan> {
        let FanDocument { n, rays, max_cones, labels } = self;
        if n == 0 {
            return Err(parse_error("n", "dimension must be positive"));
        }
        for (i, ray) in rays.iter().enumerate() {
            if ray.len() != n {
                return Err(parse_error(
                    &format!("rays[{}]", i + 1),
                    &format!("expected {n} coordinates, found {}", ray.len()),
                ));
            }
            if let Some(j) = rays[..i].iter().position(|r| r == ray) {
                return Err(parse_error(
                    &format!("rays[{}]", i + 1),
                    &format!("duplicate ray: ray {} repeats ray {}", i + 1, j + 1),
                ));
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (c, cone) in max_cones.into_iter().enumerate() {
            let mut zero_based = Vec::with_capacity(cone.len());
            for idx in cone {
                if idx == 0 || idx > rays.len() {
                    return Err(parse_error(
                        &format!("max_cones[{}]", c + 1),
                        &format!("ray index {idx} outside 1..={}", rays.len()),
                    ));
                }
                zero_based.push(idx - 1);
            }
            cones.push(zero_based);
        }
        let fan = Fan::new(n, rays, cones).map_err(|e| match e {
            Error::MalformedFan(msg) => parse_error("fan", &msg),
            other => other,
        })?;
        match labels {
            Some(l) => fan.with_labels(l).map_err(|e| parse_error("labels", &e.to_string())),
            None => Ok(fan),
        }
    }
}

fn parse_error(location: &str, message: &str) -> Error {
    Error::Parse { location: location.to_string(), message: message.to_string() }
}

pub(crate) fn json_error(err: serde_json::Error) -> Error {
    Error::Parse {
        location: format!("line {} column {}", err.line(), err.column()),
        message: err.to_string(),
    }
}

/// Reads a fan from its JSON document.
pub fn parse_fan(text: &str) -> Result<Fan> {
    let doc: FanDocument = serde_json::from_str(text).map_err(json_error)?;
    doc.into_fan()
}

pub fn serialize_fan(fan: &Fan) -> String {
    fan.to_json()
}

/// One reason a fan failed a validation flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    /// A max cone whose ray matrix is not unimodular. `cone` is 1-based.
    NonUnimodularCone { cone: usize, rays: Vec<usize>, determinant: String },
    /// An `(n-1)`-face lying in a number of max cones other than two.
    UnbalancedFacet { facet: Vec<usize>, cones: usize },
    NonPrimitiveRay { ray: usize, gcd: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub smooth: bool,
    pub facet_balanced: bool,
    pub ray_primitivity: bool,
    pub failures: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.smooth && self.facet_balanced && self.ray_primitivity
    }
}

/// Counts how many max cones each `(n-1)`-face belongs to.
pub fn facet_incidences(fan: &Fan) -> BTreeMap<Vec<usize>, usize> {
    let mut counts = BTreeMap::new();
    for cone in fan.max_cones() {
        for skip in 0..cone.len() {
            let facet: Vec<usize> =
                cone.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect();
            *counts.entry(facet).or_insert(0) += 1;
        }
    }
    counts
}

/// Checks unimodularity of every max cone, the two-cones-per-facet
/// condition and primitivity of every ray.
///
/// Passing the facet check is necessary but not sufficient for completeness;
/// fans built by [`crate::bott`] and [`crate::wedge`] are complete by
/// construction.
pub fn validate_fan(fan: &Fan) -> ValidationReport {
    let mut failures = Vec::new();

    let mut ray_primitivity = true;
    for (i, ray) in fan.rays().iter().enumerate() {
        let g = gcd_i64(ray);
        if g != 1 {
            ray_primitivity = false;
            failures.push(Diagnostic::NonPrimitiveRay { ray: i + 1, gcd: g });
        }
    }

    let mut smooth = true;
    for (c, cone) in fan.max_cones().iter().enumerate() {
        let cols: Vec<Vec<i64>> = cone.iter().map(|&i| fan.ray(i).to_vec()).collect();
        let det = determinant(&IntMatrix::from_rows(&cols, fan.dim()));
        if !det.abs().is_one() {
            smooth = false;
            failures.push(Diagnostic::NonUnimodularCone {
                cone: c + 1,
                rays: cone.iter().map(|i| i + 1).collect(),
                determinant: det.to_string(),
            });
        }
    }

    let mut facet_balanced = true;
    for (facet, count) in facet_incidences(fan) {
        if count != 2 {
            facet_balanced = false;
            failures.push(Diagnostic::UnbalancedFacet {
                facet: facet.iter().map(|i| i + 1).collect(),
                cones: count,
            });
        }
    }

    ValidationReport { smooth, facet_balanced, ray_primitivity, failures }
}

/// Returns `InvalidFan` unless every validation flag holds.
pub fn require_valid(fan: &Fan) -> Result<()> {
    let report = validate_fan(fan);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidFan(format!(
            "smooth={}, facet_balanced={}, ray_primitivity={}",
            report.smooth, report.facet_balanced, report.ray_primitivity
        )))
    }
}
