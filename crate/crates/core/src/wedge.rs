//! The J-construction: atomic simplicial wedges along a ray, and general
//! J-vectors as sequences of atomic wedges.
//!
//! Conventions: the wedged ray keeps its index and gains a `-1` in the new
//! coordinate, every other ray gains a `0`, and the new ray `e_{n+1}` is
//! appended at the end. Old generators therefore keep their indices, and the
//! [`WedgeTrace`] records which base ray each appended ray copies.

use std::collections::BTreeSet;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{require_valid, Fan};
use crate::lattice::{column_basis, determinant, solve_rational_right, IntMatrix};

/// Multiplicities `(j_1, ..., j_m)`, all at least 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JVector(Vec<usize>);

impl JVector {
    pub fn new(entries: Vec<usize>) -> Result<JVector> {
        if let Some(pos) = entries.iter().position(|&j| j < 1) {
            return Err(Error::JShape(format!("entry {} is 0; entries must be >= 1", pos + 1)));
        }
        Ok(JVector(entries))
    }

    /// Parses `"3,2,1,1"`.
    pub fn parse(text: &str) -> Result<JVector> {
        let entries = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::JShape(format!("cannot read J entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        JVector::new(entries)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of atomic wedges, `Σ (j_i - 1)`.
    pub fn extra(&self) -> usize {
        self.0.iter().map(|j| j - 1).sum()
    }

    /// Dimension of the result over an `n`-dimensional base.
    pub fn output_dim(&self, n: usize) -> usize {
        n + self.extra()
    }

    /// Atomic steps in the default order: ascending ray, then repetition.
    pub fn default_steps(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &j)| std::iter::repeat_n(i, j - 1))
            .collect()
    }
}

/// One atomic wedge. Indices are 0-based; `step` counts from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WedgeStep {
    pub step: usize,
    pub wedged_index: usize,
    pub new_index: usize,
}

/// Which base ray an output ray descends from, and which copy it is
/// (`copy == 0` for the base ray itself).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RayOrigin {
    pub base: usize,
    pub copy: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeTrace {
    base_hash: String,
    output_hash: String,
    base_rays: usize,
    steps: Vec<WedgeStep>,
    origins: Vec<RayOrigin>,
}

impl WedgeTrace {
    fn empty(base: &Fan) -> WedgeTrace {
        let hash = base.content_hash();
        WedgeTrace {
            base_hash: hash.clone(),
            output_hash: hash,
            base_rays: base.num_rays(),
            steps: Vec::new(),
            origins: (0..base.num_rays()).map(|base| RayOrigin { base, copy: 0 }).collect(),
        }
    }

    pub fn base_hash(&self) -> &str {
        &self.base_hash
    }

    pub fn output_hash(&self) -> &str {
        &self.output_hash
    }

    pub fn steps(&self) -> &[WedgeStep] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn base_rays(&self) -> usize {
        self.base_rays
    }

    /// Index in the output fan of base generator `old`.
    pub fn image(&self, old: usize) -> Result<usize> {
        if old < self.base_rays {
            Ok(old)
        } else {
            Err(Error::IndexOutOfRange { index: old + 1, len: self.base_rays })
        }
    }

    /// Origin of every output ray, indexed by output ray.
    pub fn origins(&self) -> &[RayOrigin] {
        &self.origins
    }

    /// Re-applies the recorded steps to `base`.
    pub fn replay(&self, base: &Fan) -> Result<Fan> {
        if base.content_hash() != self.base_hash {
            return Err(Error::TraceMismatch {
                trace: self.base_hash.clone(),
                witness: base.content_hash(),
            });
        }
        let mut fan = base.clone();
        for step in &self.steps {
            fan = wedge_unchecked(&fan, step.wedged_index);
        }
        Ok(fan)
    }

    /// JSON array of `{"step", "wedged_index", "new_index"}`, 1-based.
    pub fn to_json(&self) -> String {
        let external: Vec<WedgeStep> = self
            .steps
            .iter()
            .map(|s| WedgeStep {
                step: s.step,
                wedged_index: s.wedged_index + 1,
                new_index: s.new_index + 1,
            })
            .collect();
        serde_json::to_string(&external).expect("trace serialization cannot fail")
    }
}

fn wedge_unchecked(fan: &Fan, i: usize) -> Fan {
    let m = fan.num_rays();
    let mut rays: Vec<Vec<i64>> = fan
        .rays()
        .iter()
        .enumerate()
        .map(|(j, ray)| {
            let mut r = ray.clone();
            r.push(if j == i { -1 } else { 0 });
            r
        })
        .collect();
    let mut top = vec![0; fan.dim() + 1];
    top[fan.dim()] = 1;
    rays.push(top);

    let mut cones = Vec::new();
    for cone in fan.max_cones() {
        if cone.binary_search(&i).is_err() {
            let mut with_wedged = cone.clone();
            with_wedged.push(i);
            cones.push(with_wedged);
        }
        let mut with_new = cone.clone();
        with_new.push(m);
        cones.push(with_new);
    }
    Fan::new(fan.dim() + 1, rays, cones).expect("wedge of a well-formed fan is well-formed")
}

/// Simplicial wedge of `fan` along ray `i`.
pub fn wedge_atomic(fan: &Fan, i: usize) -> Result<(Fan, WedgeTrace)> {
    wedge_sequence(fan, &[i])
}

/// Applies atomic wedges along the given rays, in order. Each index refers
/// to the fan current at that step, so rays created by earlier steps may be
/// wedged again.
pub fn wedge_sequence(fan: &Fan, along: &[usize]) -> Result<(Fan, WedgeTrace)> {
    require_valid(fan)?;
    let mut trace = WedgeTrace::empty(fan);
    let mut current = fan.clone();
    let mut copies = vec![0usize; fan.num_rays()];
    for (s, &i) in along.iter().enumerate() {
        current.check_index(i)?;
        let new_index = current.num_rays();
        current = wedge_unchecked(&current, i);
        let base = trace.origins[i].base;
        copies[base] += 1;
        trace.origins.push(RayOrigin { base, copy: copies[base] });
        trace.steps.push(WedgeStep { step: s + 1, wedged_index: i, new_index });
    }
    trace.output_hash = current.content_hash();
    Ok((current, trace))
}

/// The J-construction: `j_i - 1` wedges along ray `i`, ascending in `i`.
///
/// Repeated wedges along the same ray reuse the original index, so the
/// characteristic matrix is the base matrix stacked over one row
/// `-e_i + e_new` per step.
pub fn wedge_j(fan: &Fan, j: &JVector) -> Result<(Fan, WedgeTrace)> {
    if j.len() != fan.num_rays() {
        return Err(Error::JShape(format!(
            "J has {} entries but the fan has {} rays",
            j.len(),
            fan.num_rays()
        )));
    }
    wedge_sequence(fan, &j.default_steps())
}

/// A relabelling of rays plus a unimodular change of lattice basis carrying
/// one fan onto another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeEquivalence {
    /// Ray `r` of the first fan corresponds to ray `permutation[r]` of the
    /// second.
    pub permutation: Vec<usize>,
    /// `basis_change * Λ_first = Λ_second * P`.
    pub basis_change: IntMatrix,
}

/// Tests whether `permutation` identifies `first` with `second`: solves
/// `U Λ_first = Λ_second P` on a column basis, then checks that `U` is
/// integral and unimodular, that the identity holds on every column, and
/// that max cones correspond.
pub fn check_equivalence(first: &Fan, second: &Fan, permutation: &[usize]) -> Option<LatticeEquivalence> {
    if first.dim() != second.dim() || first.num_rays() != second.num_rays() {
        return None;
    }
    let m = first.num_rays();
    if permutation.len() != m || permutation.iter().collect::<BTreeSet<_>>().len() != m {
        return None;
    }
    let lambda1 = first.characteristic_matrix();
    let lambda2 = second.characteristic_matrix().select_columns(permutation);
    let basis = column_basis(&lambda1);
    if basis.len() != first.dim() {
        return None;
    }
    let u = solve_rational_right(&lambda1.select_columns(&basis), &lambda2.select_columns(&basis))?;
    if !determinant(&u).abs().eq(&1.into()) || u.mul(&lambda1) != lambda2 {
        return None;
    }
    let mapped: BTreeSet<Vec<usize>> = first
        .max_cones()
        .iter()
        .map(|c| {
            let mut v: Vec<usize> = c.iter().map(|&r| permutation[r]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let target: BTreeSet<Vec<usize>> = second.max_cones().iter().cloned().collect();
    (mapped == target).then(|| LatticeEquivalence {
        permutation: permutation.to_vec(),
        basis_change: u,
    })
}

/// Matches rays of two wedge results through their recorded origins and
/// checks the resulting relabelling with [`check_equivalence`].
pub fn equivalence_by_traces(
    first: &Fan,
    first_trace: &WedgeTrace,
    second: &Fan,
    second_trace: &WedgeTrace,
) -> Option<LatticeEquivalence> {
    if first_trace.base_hash() != second_trace.base_hash() {
        return None;
    }
    let permutation: Option<Vec<usize>> = first_trace
        .origins()
        .iter()
        .map(|o| second_trace.origins().iter().position(|p| p == o))
        .collect();
    check_equivalence(first, second, &permutation?)
}
