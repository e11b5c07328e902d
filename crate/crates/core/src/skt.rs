//! Square-zero degree-2 classes and SKT certificates for torus bundles.
//!
//! A principal `T^{2k}`-bundle over a projective toric base whose Chern
//! classes `w_1..w_{2k}` satisfy `Σ w_j² = 0` in H⁴ carries an SKT metric.
//! This module finds such tuples and records them as certificates that can
//! be re-checked from the serialized fan alone. Only the cohomological
//! condition is certified; projectivity of the base is recorded as an
//! assumption.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{Cohomology, CohomologyClass, H4Element};
use crate::error::{Error, Result};
use crate::fan::{json_error, Fan};
use crate::lattice::{minimize_in_coset, solve_integer, IntMatrix};
use crate::wedge::WedgeTrace;

/// Largest number of box points a search will visit.
pub const MAX_SEARCH_POINTS: u128 = 50_000_000;

/// Default coefficient bound for searches.
pub const DEFAULT_BOUND: i64 = 10;

/// `w_p = Σ_{k∈I} a_k w_k` in H², with no `λ_k` forming a cone with `λ_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationWitness {
    pub fan_hash: String,
    /// 0-based generator index.
    pub p: usize,
    /// `(k, a_k)` pairs with `a_k != 0`, ascending in `k`.
    pub terms: Vec<(usize, i64)>,
}

impl IsolationWitness {
    pub fn support(&self) -> Vec<usize> {
        self.terms.iter().map(|&(k, _)| k).collect()
    }

    /// The class `Σ a_k w_k` over `m` generators.
    pub fn decomposition(&self, m: usize) -> CohomologyClass {
        let mut v = vec![0; m];
        for &(k, a) in &self.terms {
            v[k] = a;
        }
        CohomologyClass::new(v)
    }
}

/// Decides whether `w_p` has the isolation property and returns a canonical
/// witness if it does.
///
/// The unknowns are the coefficients on `A(p) = {k != p : λ_p, λ_k span no
/// cone}`, and the condition `w_p = Σ a_k w_k` is solved exactly over the
/// integers in H² coordinates. Among all solutions the one of smallest
/// max-norm reachable by single kernel-vector moves is returned.
pub fn isolation_decompose(coh: &Cohomology, p: usize) -> Result<Option<IsolationWitness>> {
    let fan = coh.fan();
    fan.check_index(p)?;
    let m = fan.num_rays();
    let mut allowed = Vec::new();
    for k in 0..m {
        if k != p && !fan.is_cone_pair(p, k)? {
            allowed.push(k);
        }
    }
    let rank = coh.h2().rank;
    let mut matrix = IntMatrix::zeros(rank, allowed.len());
    for (col, &k) in allowed.iter().enumerate() {
        for (row, x) in coh.h2().coordinate_map[k].iter().enumerate() {
            matrix.set(row, col, x.clone());
        }
    }
    let target = coh.h2().coordinate_map[p].clone();
    let Some(solution) = solve_integer(&matrix, &target) else {
        return Ok(None);
    };
    let coeffs = minimize_in_coset(&solution.particular, &solution.kernel);
    let mut terms = Vec::new();
    for (&k, a) in allowed.iter().zip(&coeffs) {
        if !a.is_zero() {
            terms.push((k, a.to_i64().ok_or(Error::Overflow("isolation coefficient"))?));
        }
    }
    Ok(Some(IsolationWitness { fan_hash: coh.fan_hash().to_string(), p, terms }))
}

/// Re-checks the witness invariants against `coh`.
pub fn validate_witness(coh: &Cohomology, witness: &IsolationWitness) -> Result<()> {
    let fan = coh.fan();
    if witness.fan_hash != coh.fan_hash() {
        return Err(Error::InvalidWitness("witness was made for a different fan".into()));
    }
    let m = fan.num_rays();
    if witness.p >= m {
        return Err(Error::InvalidWitness(format!("generator {} out of range", witness.p + 1)));
    }
    let mut seen = BTreeSet::new();
    for &(k, _) in &witness.terms {
        if k >= m || k == witness.p || !seen.insert(k) {
            return Err(Error::InvalidWitness(format!("bad support index {}", k + 1)));
        }
        if fan.is_cone_pair(witness.p, k)? {
            return Err(Error::InvalidWitness(format!(
                "rays {} and {} span a cone",
                witness.p + 1,
                k + 1
            )));
        }
    }
    let lhs = coh.generator(witness.p);
    let rhs = witness.decomposition(m);
    if !coh.equal_in_h2(&lhs, &rhs)? {
        return Err(Error::InvalidWitness(format!(
            "w{} != {} in H^2",
            witness.p + 1,
            rhs
        )));
    }
    Ok(())
}

/// Validates the witness, then evaluates `w_p²` directly.
///
/// For a valid witness the answer is always `true`; it is computed rather
/// than assumed.
pub fn check_isolation_implies_square_zero(coh: &Cohomology, witness: &IsolationWitness) -> Result<bool> {
    validate_witness(coh, witness)?;
    Ok(coh.square(&coh.generator(witness.p))?.is_zero())
}

/// Carries a witness on the base of a wedge trace to the wedged fan. Old
/// generators keep their coefficients; new generators get zero.
pub fn transport_witness(witness: &IsolationWitness, trace: &WedgeTrace) -> Result<IsolationWitness> {
    if trace.base_hash() != witness.fan_hash {
        return Err(Error::TraceMismatch {
            trace: trace.base_hash().to_string(),
            witness: witness.fan_hash.clone(),
        });
    }
    let p = trace.image(witness.p)?;
    let terms = witness
        .terms
        .iter()
        .map(|&(k, a)| Ok((trace.image(k)?, a)))
        .collect::<Result<Vec<_>>>()?;
    Ok(IsolationWitness { fan_hash: trace.output_hash().to_string(), p, terms })
}

/// A nonzero primitive class with vanishing square, first nonzero
/// coefficient positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SquareZeroClass(CohomologyClass);

impl SquareZeroClass {
    pub fn class(&self) -> &CohomologyClass {
        &self.0
    }

    pub fn into_class(self) -> CohomologyClass {
        self.0
    }
}

/// The quadratic map `a ↦ (Σ a_s g_s)²` on a coefficient box, with the
/// products `g_s g_t` precomputed in H⁴ coordinates.
struct QuadraticForm {
    vars: usize,
    rank: usize,
    gram: Vec<i128>,
}

impl QuadraticForm {
    fn new(coh: &Cohomology, gens: &[Vec<BigInt>]) -> Result<QuadraticForm> {
        let vars = gens.len();
        let rank = coh.h4().rank;
        let mut gram = vec![0i128; vars * vars * rank];
        for s in 0..vars {
            for t in s..vars {
                let prod = coh.product_big(&gens[s], &gens[t]);
                for (rho, x) in prod.coords().iter().enumerate() {
                    let x = x.to_i128().ok_or(Error::Overflow("H^4 Gram entry"))?;
                    let x = if s == t { x } else { x.checked_mul(2).ok_or(Error::Overflow("H^4 Gram entry"))? };
                    gram[(s * vars + t) * rank + rho] = x;
                }
            }
        }
        Ok(QuadraticForm { vars, rank, gram })
    }

    fn coordinate(&self, a: &[i64], rho: usize) -> Option<i128> {
        let mut acc: i128 = 0;
        for s in 0..self.vars {
            if a[s] == 0 {
                continue;
            }
            let mut inner: i128 = 0;
            for t in s..self.vars {
                if a[t] == 0 {
                    continue;
                }
                let g = self.gram[(s * self.vars + t) * self.rank + rho];
                inner = inner.checked_add(g.checked_mul(a[t] as i128)?)?;
            }
            acc = acc.checked_add(inner.checked_mul(a[s] as i128)?)?;
        }
        Some(acc)
    }

    fn is_zero_at(&self, a: &[i64]) -> Result<bool> {
        for rho in 0..self.rank {
            if self.coordinate(a, rho).ok_or(Error::Overflow("quadratic form"))? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn value(&self, a: &[i64]) -> Result<Vec<i128>> {
        (0..self.rank)
            .map(|rho| self.coordinate(a, rho).ok_or(Error::Overflow("quadratic form")))
            .collect()
    }
}

fn box_points(vars: usize, bound: i64) -> Result<u128> {
    if bound < 1 {
        return Err(Error::Bound(bound));
    }
    let side = 2 * bound as u128 + 1;
    let mut total: u128 = 1;
    for _ in 0..vars {
        total = total.saturating_mul(side);
    }
    if total > MAX_SEARCH_POINTS {
        return Err(Error::SearchTooLarge { points: total, limit: MAX_SEARCH_POINTS });
    }
    Ok(total)
}

type Hits<T> = Vec<(Vec<i64>, T)>;

/// Visits every primitive coefficient vector in `[-bound, bound]^vars`
/// whose first nonzero entry is positive, in parallel, and returns the hits
/// sorted by coefficient vector.
fn scan_box<T, F>(vars: usize, bound: i64, visit: F) -> Result<Hits<T>>
where
    T: Send,
    F: Fn(&[i64]) -> Result<Option<T>> + Sync,
{
    box_points(vars, bound)?;
    if vars == 0 {
        return Ok(Vec::new());
    }
    let chunks: Vec<Result<Hits<T>>> = (0..=bound)
        .into_par_iter()
        .map(|first| {
            let mut hits = Vec::new();
            let mut a = vec![-bound; vars];
            a[0] = first;
            loop {
                let lead = a.iter().find(|&&x| x != 0).copied();
                let gcd = a.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
                if lead.is_some_and(|l| l > 0) && gcd == 1 {
                    if let Some(t) = visit(&a)? {
                        hits.push((a.clone(), t));
                    }
                }
                // odometer over coordinates 1..vars
                let mut pos = vars;
                loop {
                    if pos == 1 {
                        return Ok(hits);
                    }
                    pos -= 1;
                    if a[pos] < bound {
                        a[pos] += 1;
                        break;
                    }
                    a[pos] = -bound;
                }
            }
        })
        .collect();
    let mut all = Vec::new();
    for chunk in chunks {
        all.extend(chunk?);
    }
    all.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(all)
}

fn search_generators(coh: &Cohomology, restrict: Option<&[usize]>) -> Result<Vec<Vec<BigInt>>> {
    let m = coh.num_rays();
    match restrict {
        Some(idx) => {
            let mut seen = BTreeSet::new();
            idx.iter()
                .filter(|&&i| seen.insert(i))
                .map(|&i| {
                    coh.fan().check_index(i)?;
                    let mut v = vec![BigInt::zero(); m];
                    v[i] = 1.into();
                    Ok(v)
                })
                .collect()
        }
        None => Ok(coh.h2().basis.clone()),
    }
}

fn combine(gens: &[Vec<BigInt>], a: &[i64], m: usize) -> Result<CohomologyClass> {
    let mut v = vec![BigInt::zero(); m];
    for (g, &c) in gens.iter().zip(a) {
        if c != 0 {
            for (x, y) in v.iter_mut().zip(g) {
                *x += y * c;
            }
        }
    }
    v.iter()
        .map(|x| x.to_i64().ok_or(Error::Overflow("class coefficient")))
        .collect::<Result<Vec<_>>>()
        .map(CohomologyClass::new)
}

/// Collects normalised classes, dropping repeats of the same H² class up to
/// sign, and sorts them.
fn dedupe_classes(coh: &Cohomology, classes: Vec<CohomologyClass>) -> Result<Vec<CohomologyClass>> {
    let mut by_h2: BTreeMap<Vec<BigInt>, CohomologyClass> = BTreeMap::new();
    for class in classes {
        let class = class.normalized();
        let mut key = coh.h2_coordinates(&class)?;
        if key.iter().find(|x| !x.is_zero()).is_some_and(|x| x < &BigInt::zero()) {
            key = key.into_iter().map(|x| -x).collect();
        }
        by_h2
            .entry(key)
            .and_modify(|c| {
                if class < *c {
                    *c = class.clone();
                }
            })
            .or_insert(class);
    }
    let mut out: Vec<CohomologyClass> = by_h2.into_values().collect();
    out.sort();
    Ok(out)
}

/// Every primitive class with coefficients in `[-bound, bound]` over an H²
/// basis (or over the generators listed in `restrict`, 0-based) whose
/// square vanishes. Exhaustive inside the box; results are normalised,
/// unique up to sign and sorted.
pub fn square_zero_search(
    coh: &Cohomology,
    bound: i64,
    restrict: Option<&[usize]>,
) -> Result<Vec<SquareZeroClass>> {
    let gens = search_generators(coh, restrict)?;
    let form = QuadraticForm::new(coh, &gens)?;
    let hits = scan_box(gens.len(), bound, |a| Ok(form.is_zero_at(a)?.then_some(())))?;
    let m = coh.num_rays();
    let classes = hits
        .iter()
        .map(|(a, _)| combine(&gens, a, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(dedupe_classes(coh, classes)?
        .into_iter()
        .filter(|c| !c.is_zero())
        .map(SquareZeroClass)
        .collect())
}

/// How the classes of a certificate were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// Supplied by the caller.
    Supplied,
    /// A multiset of individually square-zero classes.
    SquareZeroMultiset,
    /// Pairs of classes with opposite nonzero squares.
    Cancellation,
}

pub const BASE_ASSUMPTIONS: &[&str] = &["projective"];

/// A tuple of degree-2 classes and the evidence that their squares sum to
/// zero in H⁴.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SktCertificate {
    pub fan_hash: String,
    pub classes: Vec<CohomologyClass>,
    pub squares: Vec<H4Element>,
    pub sum: H4Element,
    pub verified: bool,
    pub base_assumptions: Vec<String>,
    pub construction: Construction,
    pub h4_basis: Vec<String>,
}

/// Certificate file format. Keys are written in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub base_assumptions: Vec<String>,
    pub classes: Vec<Vec<i64>>,
    #[serde(default = "default_construction")]
    pub construction: Construction,
    pub fan_hash: String,
    #[serde(default)]
    pub h4_basis: Vec<String>,
    pub squares: Vec<Vec<i64>>,
    pub sum: Vec<i64>,
    pub verified: bool,
}

fn default_construction() -> Construction {
    Construction::Supplied
}

impl SktCertificate {
    pub fn to_document(&self) -> Result<CertificateDocument> {
        Ok(CertificateDocument {
            base_assumptions: self.base_assumptions.clone(),
            classes: self.classes.iter().map(|c| c.coeffs().to_vec()).collect(),
            construction: self.construction,
            fan_hash: self.fan_hash.clone(),
            h4_basis: self.h4_basis.clone(),
            squares: self.squares.iter().map(H4Element::to_i64).collect::<Result<_>>()?,
            sum: self.sum.to_i64()?,
            verified: self.verified,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_document()?).expect("certificate serialization cannot fail"))
    }
}

pub fn parse_certificate(text: &str) -> Result<CertificateDocument> {
    serde_json::from_str(text).map_err(json_error)
}

/// Builds a certificate for the given classes; `verified` is whether their
/// squares sum to zero.
pub fn certify_skt(coh: &Cohomology, classes: &[CohomologyClass]) -> Result<SktCertificate> {
    certify_with(coh, classes, Construction::Supplied)
}

fn certify_with(coh: &Cohomology, classes: &[CohomologyClass], construction: Construction) -> Result<SktCertificate> {
    if classes.is_empty() || !classes.len().is_multiple_of(2) {
        return Err(Error::OddRank(classes.len()));
    }
    let squares = classes.iter().map(|c| coh.square(c)).collect::<Result<Vec<_>>>()?;
    let sum = squares.iter().fold(H4Element::zero(coh.h4().rank), |acc, s| acc.add(s));
    Ok(SktCertificate {
        fan_hash: coh.fan_hash().to_string(),
        classes: classes.to_vec(),
        verified: sum.is_zero(),
        squares,
        sum,
        base_assumptions: BASE_ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
        construction,
        h4_basis: coh.h4().basis_labels(),
    })
}

/// Outcome of re-checking a certificate document against a fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub verified: bool,
    pub problems: Vec<String>,
}

/// Recomputes everything in `doc` from `fan` alone.
pub fn verify_certificate(fan: &Fan, doc: &CertificateDocument) -> Result<CertificateCheck> {
    let mut problems = Vec::new();
    let coh = Cohomology::new(fan)?;
    if doc.fan_hash != coh.fan_hash() {
        problems.push(format!("fan hash {} does not match {}", doc.fan_hash, coh.fan_hash()));
    }
    let classes: Vec<CohomologyClass> = doc.classes.iter().cloned().map(CohomologyClass::new).collect();
    let recomputed = match certify_with(&coh, &classes, doc.construction) {
        Ok(c) => c,
        Err(e @ (Error::OddRank(_) | Error::DimensionMismatch { .. })) => {
            problems.push(e.to_string());
            return Ok(CertificateCheck { verified: false, problems });
        }
        Err(e) => return Err(e),
    };
    let fresh = recomputed.to_document()?;
    if fresh.squares != doc.squares {
        problems.push("recorded squares differ from recomputed squares".into());
    }
    if fresh.sum != doc.sum {
        problems.push("recorded sum differs from recomputed sum".into());
    }
    if !doc.h4_basis.is_empty() && fresh.h4_basis != doc.h4_basis {
        problems.push("recorded H^4 basis differs".into());
    }
    if !recomputed.verified {
        problems.push("sum of squares is nonzero".into());
    }
    if doc.verified != recomputed.verified {
        problems.push(format!("certificate claims verified={}", doc.verified));
    }
    Ok(CertificateCheck { verified: problems.is_empty(), problems })
}

/// Limits for [`find_skt_bundle_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BundleSearch {
    pub max_certificates: usize,
    pub cancellation: bool,
}

impl Default for BundleSearch {
    fn default() -> Self {
        BundleSearch { max_certificates: 64, cancellation: true }
    }
}

/// Verified certificates for bundles of the given even rank with the default
/// [`BundleSearch`] limits.
pub fn find_skt_bundle(coh: &Cohomology, rank: usize, bound: i64) -> Result<Vec<SktCertificate>> {
    find_skt_bundle_with(coh, rank, bound, BundleSearch::default())
}

/// Multisets of square-zero classes first (lexicographic in the sorted
/// search results), then cancelling pairs `u² = -v² != 0` repeated to the
/// requested rank.
pub fn find_skt_bundle_with(
    coh: &Cohomology,
    rank: usize,
    bound: i64,
    limits: BundleSearch,
) -> Result<Vec<SktCertificate>> {
    if rank == 0 || !rank.is_multiple_of(2) {
        return Err(Error::OddRank(rank));
    }
    let zero_classes: Vec<CohomologyClass> =
        square_zero_search(coh, bound, None)?.into_iter().map(SquareZeroClass::into_class).collect();
    let mut out = Vec::new();

    if !zero_classes.is_empty() {
        let mut idx = vec![0usize; rank];
        'multisets: loop {
            if out.len() >= limits.max_certificates {
                break;
            }
            let tuple: Vec<CohomologyClass> = idx.iter().map(|&i| zero_classes[i].clone()).collect();
            let cert = certify_with(coh, &tuple, Construction::SquareZeroMultiset)?;
            debug_assert!(cert.verified);
            out.push(cert);
            // next non-decreasing index tuple
            let mut pos = rank;
            loop {
                if pos == 0 {
                    break 'multisets;
                }
                pos -= 1;
                if idx[pos] + 1 < zero_classes.len() {
                    let v = idx[pos] + 1;
                    for slot in idx[pos..].iter_mut() {
                        *slot = v;
                    }
                    break;
                }
            }
        }
    }

    if limits.cancellation && out.len() < limits.max_certificates {
        for (u, v) in cancelling_pairs(coh, bound)? {
            if out.len() >= limits.max_certificates {
                break;
            }
            let tuple: Vec<CohomologyClass> =
                (0..rank / 2).flat_map(|_| [u.clone(), v.clone()]).collect();
            let cert = certify_with(coh, &tuple, Construction::Cancellation)?;
            if cert.verified {
                out.push(cert);
            }
        }
    }
    Ok(out)
}

/// Pairs of box classes whose nonzero squares are negatives of each other,
/// sorted.
fn cancelling_pairs(coh: &Cohomology, bound: i64) -> Result<Vec<(CohomologyClass, CohomologyClass)>> {
    let gens = search_generators(coh, None)?;
    let form = QuadraticForm::new(coh, &gens)?;
    let hits = scan_box(gens.len(), bound, |a| {
        let value = form.value(a)?;
        Ok(value.iter().any(|&x| x != 0).then_some(value))
    })?;
    let m = coh.num_rays();
    let mut by_square: HashMap<Vec<i128>, Vec<CohomologyClass>> = HashMap::new();
    for (a, value) in &hits {
        by_square.entry(value.clone()).or_default().push(combine(&gens, a, m)?);
    }
    let mut pairs = Vec::new();
    for (value, us) in &by_square {
        let neg: Vec<i128> = value.iter().map(|x| -x).collect();
        // each unordered pair once: take the side whose square sorts first
        if *value > neg {
            continue;
        }
        if let Some(vs) = by_square.get(&neg) {
            for u in us {
                for v in vs {
                    pairs.push((u.clone(), v.clone()));
                }
            }
        }
    }
    pairs.sort();
    Ok(pairs)
}
