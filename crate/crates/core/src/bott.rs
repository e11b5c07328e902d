//! Fans of Bott manifolds, built level by level from the twisting
//! constants `c(i, j)`.
//!
//! Levels and constant indices are 1-based (`1 <= i < j <= k`), like the
//! JSON format. Ray indices in the returned [`Fan`] are 0-based as usual:
//! rays `0..k` are `e_1..e_k` and ray `k + i - 1` is the opposite ray of
//! level `i`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{json_error, Fan};

/// Height of a Bott tower plus its integer constants. Missing constants are 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottSpec {
    height: usize,
    constants: BTreeMap<(usize, usize), i64>,
}

impl BottSpec {
    pub fn new(height: usize) -> Result<BottSpec> {
        if height < 1 {
            return Err(Error::Spec("tower height must be at least 1".into()));
        }
        Ok(BottSpec { height, constants: BTreeMap::new() })
    }

    /// Sets `c(i, j)`; requires `1 <= i < j <= height`.
    pub fn set(&mut self, i: usize, j: usize, value: i64) -> Result<()> {
        if !(1 <= i && i < j && j <= self.height) {
            return Err(Error::Spec(format!(
                "constant c({i},{j}) needs 1 <= i < j <= {}",
                self.height
            )));
        }
        if value == 0 {
            self.constants.remove(&(i, j));
        } else {
            self.constants.insert((i, j), value);
        }
        Ok(())
    }

    pub fn with(mut self, i: usize, j: usize, value: i64) -> Result<BottSpec> {
        self.set(i, j, value)?;
        Ok(self)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.constants.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero constants as `((i, j), value)`, ordered by `(i, j)`.
    pub fn constants(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.constants.iter().map(|(&k, &v)| (k, v))
    }

    pub fn to_document(&self) -> BottSpecDocument {
        BottSpecDocument {
            k: self.height,
            c: self
                .constants()
                .map(|((i, j), value)| BottConstant { i, j, value })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("spec serialization cannot fail")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BottConstant {
    pub i: usize,
    pub j: usize,
    pub value: i64,
}

/// `{ "k": int, "c": [ {"i": int, "j": int, "value": int}, ... ] }`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BottSpecDocument {
    pub k: usize,
    #[serde(default)]
    pub c: Vec<BottConstant>,
}

impl BottSpecDocument {
    pub fn into_spec(self) -> Result<BottSpec> {
        let mut spec = BottSpec::new(self.k)?;
        let mut seen = std::collections::HashSet::new();
        for entry in self.c {
            if !seen.insert((entry.i, entry.j)) {
                return Err(Error::Spec(format!("constant c({},{}) given twice", entry.i, entry.j)));
            }
            spec.set(entry.i, entry.j, entry.value)?;
        }
        Ok(spec)
    }
}

pub fn parse_bott_spec(text: &str) -> Result<BottSpec> {
    let doc: BottSpecDocument = serde_json::from_str(text).map_err(json_error)?;
    doc.into_spec()
}

/// Builds the fan of the Bott manifold `M_k`.
///
/// Starts from the fan of the projective line and, for each new level `l`,
/// lifts every ray and every max cone of `M_{l-1}` into one more dimension
/// and closes each lifted cone with either `e_l` or `-e_l`.
pub fn build_bott(spec: &BottSpec) -> Result<Fan> {
    let k = spec.height();
    if k < 1 {
        return Err(Error::Spec("tower height must be at least 1".into()));
    }
    let mut rays: Vec<Vec<i64>> = vec![vec![1], vec![-1]];
    let mut cones: Vec<Vec<usize>> = vec![vec![0], vec![1]];

    for level in 2..=k {
        let prev = level - 1;
        let mut next = Vec::with_capacity(2 * level);
        for ray in &rays[..prev] {
            let mut r = ray.clone();
            r.push(0);
            next.push(r);
        }
        let mut up = vec![0; level];
        up[level - 1] = 1;
        next.push(up);
        for (i, ray) in rays[prev..].iter().enumerate() {
            let mut r = ray.clone();
            r.push(spec.c(i + 1, level));
            next.push(r);
        }
        let mut down = vec![0; level];
        down[level - 1] = -1;
        next.push(down);

        // old index p moves to p if it sits below the new level, else p + 1
        let lift = |p: usize| if p < prev { p } else { p + 1 };
        let mut next_cones = Vec::with_capacity(2 * cones.len());
        for cone in &cones {
            let lifted: Vec<usize> = cone.iter().map(|&p| lift(p)).collect();
            for closing in [level - 1, 2 * level - 1] {
                let mut c = lifted.clone();
                c.push(closing);
                next_cones.push(c);
            }
        }
        rays = next;
        cones = next_cones;
    }
    Fan::new(k, rays, cones)
}

/// `w_target = Σ coefficient · w_index`, indices 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRelation {
    pub target: usize,
    pub terms: Vec<(usize, i64)>,
}

impl LinearRelation {
    /// The relation as a vector `r` with `Σ r_i w_i = 0`, normalised so that
    /// the target carries `-1` (which makes it a row of the characteristic
    /// matrix).
    pub fn as_row(&self, m: usize) -> Vec<i64> {
        let mut row = vec![0; m];
        row[self.target] -= 1;
        for &(i, c) in &self.terms {
            row[i] += c;
        }
        row
    }
}

impl fmt::Display for LinearRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{} =", self.target + 1)?;
        for (n, &(i, c)) in self.terms.iter().enumerate() {
            let sep = if n == 0 { " " } else if c < 0 { " - " } else { " + " };
            let c = if n == 0 { c } else { c.abs() };
            match c {
                1 => write!(f, "{sep}w{}", i + 1)?,
                -1 => write!(f, "{sep}-w{}", i + 1)?,
                _ => write!(f, "{sep}{c}*w{}", i + 1)?,
            }
        }
        Ok(())
    }
}

/// One relation per level: `w_{k+j} = w_j + Σ_{i<j} c(i,j) w_{k+i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRelations {
    pub height: usize,
    pub relations: Vec<LinearRelation>,
}

pub fn bott_linear_relations(spec: &BottSpec) -> LinearRelations {
    let k = spec.height();
    let relations = (1..=k)
        .map(|j| {
            let mut terms = vec![(j - 1, 1)];
            for i in 1..j {
                let c = spec.c(i, j);
                if c != 0 {
                    terms.push((k + i - 1, c));
                }
            }
            LinearRelation { target: k + j - 1, terms }
        })
        .collect();
    LinearRelations { height: k, relations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::validate_fan;

    #[test]
    fn height_one_is_projective_line() {
        let fan = build_bott(&BottSpec::new(1).unwrap()).unwrap();
        assert_eq!(fan.rays(), &[vec![1], vec![-1]]);
        assert_eq!(fan.max_cones(), &[vec![0], vec![1]]);
    }

    #[test]
    fn hirzebruch_matrix_and_cones() {
        let spec = BottSpec::new(2).unwrap().with(1, 2, 5).unwrap();
        let fan = build_bott(&spec).unwrap();
        assert_eq!(fan.characteristic_rows(), vec![vec![1, 0, -1, 0], vec![0, 1, 5, -1]]);
        // {1,2},{1,4},{3,2},{3,4} in 1-based terms
        assert_eq!(fan.max_cones(), &[vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]);
    }

    #[test]
    fn zero_constants_give_product_of_lines() {
        let fan = build_bott(&BottSpec::new(2).unwrap()).unwrap();
        assert_eq!(fan.rays(), &[vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]]);
    }

    #[test]
    fn block_form_of_characteristic_matrix() {
        let spec = BottSpec::new(4)
            .unwrap()
            .with(1, 2, 2)
            .unwrap()
            .with(1, 4, -3)
            .unwrap()
            .with(2, 3, 7)
            .unwrap()
            .with(3, 4, 1)
            .unwrap();
        let fan = build_bott(&spec).unwrap();
        let k = 4;
        for i in 1..=k {
            for row in 1..=k {
                // column i is e_i
                assert_eq!(fan.ray(i - 1)[row - 1], i64::from(i == row));
                // column k+i is -e_i + Σ_{j>i} c(i,j) e_j
                let want = match row.cmp(&i) {
                    std::cmp::Ordering::Less => 0,
                    std::cmp::Ordering::Equal => -1,
                    std::cmp::Ordering::Greater => spec.c(i, row),
                };
                assert_eq!(fan.ray(k + i - 1)[row - 1], want);
            }
        }
        assert_eq!(fan.max_cones().len(), 16);
        assert!(validate_fan(&fan).is_valid());
    }

    #[test]
    fn relations_read_as_substitutions() {
        let spec = BottSpec::new(2).unwrap().with(1, 2, 4).unwrap();
        let rel = bott_linear_relations(&spec);
        assert_eq!(rel.relations[0].to_string(), "w3 = w1");
        assert_eq!(rel.relations[1].to_string(), "w4 = w2 + 4*w3");
        let trivial = bott_linear_relations(&BottSpec::new(3).unwrap());
        let shown: Vec<String> = trivial.relations.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["w4 = w1", "w5 = w2", "w6 = w3"]);
    }

    #[test]
    fn relation_rows_are_characteristic_rows() {
        let spec = BottSpec::new(3).unwrap().with(1, 2, -2).unwrap().with(1, 3, 3).unwrap().with(2, 3, 1).unwrap();
        let fan = build_bott(&spec).unwrap();
        let rows: Vec<Vec<i64>> =
            bott_linear_relations(&spec).relations.iter().map(|r| r.as_row(6)).collect();
        assert_eq!(rows, fan.characteristic_rows());
    }

    #[test]
    fn spec_errors() {
        assert!(matches!(BottSpec::new(0), Err(Error::Spec(_))));
        assert!(BottSpec::new(2).unwrap().with(2, 1, 1).is_err());
        assert!(BottSpec::new(2).unwrap().with(1, 3, 1).is_err());
        assert!(parse_bott_spec(r#"{"k":2,"c":[{"i":1,"j":2,"value":1},{"i":1,"j":2,"value":2}]}"#).is_err());
        let spec = parse_bott_spec(r#"{"k":3,"c":[{"i":2,"j":3,"value":-4}]}"#).unwrap();
        assert_eq!(spec.c(2, 3), -4);
        assert_eq!(spec.c(1, 3), 0);
    }
}
