//! Degree-2 and degree-4 parts of the integral cohomology ring of a smooth
//! complete toric variety, `Z[w_1..w_m] / I`, where `I` is generated by the
//! products of generators whose rays span no cone and by the linear forms
//! read off the rows of the characteristic matrix.
//!
//! Both degrees are computed as quotients of a free lattice by an explicit
//! relation lattice. The quotient basis is taken to be a set of generators
//! (resp. monomials) whenever the echelon form of the relations has unit
//! pivots; otherwise the Smith normal form supplies the basis. Torsion is
//! reported as an error, never dropped.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{require_valid, Fan};
use crate::lattice::{echelon, smith_normal_form, IntMatrix};

/// An integer combination `Σ a_i w_i` of the divisor classes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CohomologyClass(Vec<i64>);

impl CohomologyClass {
    pub fn new(coeffs: Vec<i64>) -> CohomologyClass {
        CohomologyClass(coeffs)
    }

    pub fn zero(m: usize) -> CohomologyClass {
        CohomologyClass(vec![0; m])
    }

    /// The generator `w_{i+1}` (0-based `i`).
    pub fn generator(m: usize, i: usize) -> CohomologyClass {
        let mut v = vec![0; m];
        v[i] = 1;
        CohomologyClass(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Divides out the content and makes the first nonzero entry positive.
    pub fn normalized(&self) -> CohomologyClass {
        let g = self.0.iter().fold(0i64, |g, &c| g.gcd(&c));
        if g == 0 {
            return self.clone();
        }
        let lead = self.0.iter().find(|&&c| c != 0).copied().unwrap_or(1);
        let g = if lead < 0 { -g } else { g };
        CohomologyClass(self.0.iter().map(|c| c / g).collect())
    }

    pub fn is_primitive(&self) -> bool {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c)) == 1
    }

    /// Parses `"1,0,-1,0"`.
    pub fn parse(text: &str) -> Result<CohomologyClass> {
        text.split(',')
            .map(|t| {
                t.trim().parse::<i64>().map_err(|_| Error::Parse {
                    location: "class".into(),
                    message: format!("cannot read coefficient {t:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(CohomologyClass)
    }
}

impl From<Vec<i64>> for CohomologyClass {
    fn from(v: Vec<i64>) -> Self {
        CohomologyClass(v)
    }
}

impl fmt::Display for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match c.abs() {
                1 => write!(f, "w{}", i + 1)?,
                a => write!(f, "{a}*w{}", i + 1)?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A product `w_i w_j` with `i <= j` (0-based).
pub type Monomial = (usize, usize);

fn monomial_index(m: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // monomials with a smaller first factor come first
    i * m - i * i.saturating_sub(1) / 2 + (j - i)
}

fn all_monomials(m: usize) -> Vec<Monomial> {
    (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect()
}

/// Free quotient `Z^dim / span(relations)` with coordinates.
struct Quotient {
    basis: Vec<Vec<BigInt>>,
    basis_columns: Option<Vec<usize>>,
    coordinate_map: Vec<Vec<BigInt>>,
}

/// `preference` lists the columns, most wanted as basis elements first;
/// elimination proceeds from the end of the list.
fn free_quotient(
    relations: Vec<Vec<BigInt>>,
    dim: usize,
    preference: &[usize],
    degree: &'static str,
) -> Result<Quotient> {
    let order: Vec<usize> = preference.iter().rev().copied().collect();
    let ech = echelon(relations.clone(), &order);
    if ech.has_unit_pivots() {
        let mut is_pivot = vec![None; dim];
        for (r, &c) in ech.pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let basis_columns: Vec<usize> =
            preference.iter().copied().filter(|&c| is_pivot[c].is_none()).collect();
        let mut position = vec![usize::MAX; dim];
        for (s, &c) in basis_columns.iter().enumerate() {
            position[c] = s;
        }
        let rank = basis_columns.len();
        let coordinate_map = (0..dim)
            .map(|c| {
                let mut coords = vec![BigInt::zero(); rank];
                match is_pivot[c] {
                    None => coords[position[c]] = BigInt::one(),
                    Some(r) => {
                        // e_c + Σ α_j e_j is a relation, so e_c ≡ -Σ α_j e_j
                        for (j, a) in ech.rows[r].iter().enumerate() {
                            if j != c && !a.is_zero() {
                                debug_assert!(is_pivot[j].is_none());
                                coords[position[j]] = -a;
                            }
                        }
                    }
                }
                coords
            })
            .collect();
        let basis = basis_columns
            .iter()
            .map(|&c| {
                let mut v = vec![BigInt::zero(); dim];
                v[c] = BigInt::one();
                v
            })
            .collect();
        return Ok(Quotient { basis, basis_columns: Some(basis_columns), coordinate_map });
    }

    let matrix = IntMatrix::from_rows(&relations, dim);
    let snf = smith_normal_form(&matrix);
    let torsion = snf.torsion();
    if !torsion.is_empty() {
        return Err(Error::Torsion {
            degree,
            factors: torsion.iter().map(ToString::to_string).collect(),
        });
    }
    let s = snf.rank();
    let coordinate_map =
        (0..dim).map(|c| (s..dim).map(|j| snf.right.get(c, j).clone()).collect()).collect();
    let basis = (s..dim).map(|j| snf.right_inv.row(j).to_vec()).collect();
    Ok(Quotient { basis, basis_columns: None, coordinate_map })
}

/// `H² = Z^m / rowspace(Λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H2Presentation {
    pub rank: usize,
    /// Basis elements as vectors over `w_1..w_m`.
    pub basis: Vec<Vec<BigInt>>,
    /// Set when the basis consists of generators (0-based indices).
    pub basis_generators: Option<Vec<usize>>,
    /// `coordinate_map[i]` holds the coordinates of `w_i`.
    pub coordinate_map: Vec<Vec<BigInt>>,
    /// The linear relations `Σ_i λ_{ji} w_i`, one per lattice coordinate.
    pub relation_rows: Vec<Vec<i64>>,
}

impl H2Presentation {
    pub fn coordinates(&self, coeffs: &[i64]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.rank];
        for (i, &a) in coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = BigInt::from(a);
            for (o, x) in out.iter_mut().zip(&self.coordinate_map[i]) {
                *o += &a * x;
            }
        }
        out
    }
}

pub fn h2_presentation(fan: &Fan) -> Result<H2Presentation> {
    let m = fan.num_rays();
    let relation_rows = fan.characteristic_rows();
    let relations: Vec<Vec<BigInt>> = relation_rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let preference: Vec<usize> = (0..m).collect();
    let q = free_quotient(relations, m, &preference, "H^2")?;
    Ok(H2Presentation {
        rank: q.basis.len(),
        basis: q.basis,
        basis_generators: q.basis_columns,
        coordinate_map: q.coordinate_map,
        relation_rows,
    })
}

/// Degree-4 part: quadratic monomials modulo the non-cone products and the
/// multiples `w_i · (Σ_t λ_{jt} w_t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H4Presentation {
    pub monomials: Vec<Monomial>,
    pub relation_matrix: Vec<Vec<i64>>,
    pub rank: usize,
    /// Basis elements as combinations of monomials.
    pub basis: Vec<Vec<(Monomial, BigInt)>>,
    /// `coordinate_map[k]` holds the coordinates of `monomials[k]`.
    pub coordinate_map: Vec<Vec<BigInt>>,
    num_rays: usize,
}

impl H4Presentation {
    pub fn monomial_position(&self, i: usize, j: usize) -> usize {
        monomial_index(self.num_rays, i, j)
    }

    pub fn monomial_coordinates(&self, i: usize, j: usize) -> &[BigInt] {
        &self.coordinate_map[self.monomial_position(i, j)]
    }

    /// Human-readable basis, e.g. `["w1*w2", "w1*w3"]`.
    pub fn basis_labels(&self) -> Vec<String> {
        self.basis.iter().map(|terms| format_monomial_sum(terms)).collect()
    }
}

fn format_monomial_sum(terms: &[(Monomial, BigInt)]) -> String {
    let mut s = String::new();
    for (n, ((i, j), c)) in terms.iter().enumerate() {
        let mono = format!("w{}*w{}", i + 1, j + 1);
        let neg = c.is_negative();
        if n > 0 {
            s.push_str(if neg { " - " } else { " + " });
        } else if neg {
            s.push('-');
        }
        if c.abs().is_one() {
            s.push_str(&mono);
        } else {
            s.push_str(&format!("{}*{mono}", c.abs()));
        }
    }
    s
}

pub fn h4_presentation(fan: &Fan, h2: &H2Presentation) -> Result<H4Presentation> {
    let m = fan.num_rays();
    let monomials = all_monomials(m);
    let dim = monomials.len();
    let mut relation_matrix = Vec::new();

    for i in 0..m {
        for j in i + 1..m {
            if !fan.is_cone_pair(i, j)? {
                let mut row = vec![0i64; dim];
                row[monomial_index(m, i, j)] = 1;
                relation_matrix.push(row);
            }
        }
    }
    for i in 0..m {
        for lin in &h2.relation_rows {
            let mut row = vec![0i64; dim];
            for (t, &l) in lin.iter().enumerate() {
                row[monomial_index(m, i, t)] += l;
            }
            if row.iter().any(|&x| x != 0) {
                relation_matrix.push(row);
            }
        }
    }

    // squarefree products of H² basis generators are the preferred basis,
    // then their squares, then everything else
    let in_basis = |i: usize| h2.basis_generators.as_ref().is_some_and(|b| b.contains(&i));
    let tier = |&(i, j): &Monomial| match (in_basis(i) && in_basis(j), i == j) {
        (true, false) => 0,
        (true, true) => 1,
        _ => 2,
    };
    let mut preference: Vec<usize> = (0..dim).collect();
    preference.sort_by_key(|&k| (tier(&monomials[k]), monomials[k]));

    let relations: Vec<Vec<BigInt>> = relation_matrix
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let q = free_quotient(relations, dim, &preference, "H^4")?;
    let basis = q
        .basis
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (monomials[k], c.clone()))
                .collect()
        })
        .collect();
    Ok(H4Presentation {
        rank: q.basis.len(),
        monomials,
        relation_matrix,
        basis,
        coordinate_map: q.coordinate_map,
        num_rays: m,
    })
}

/// A degree-4 class in the coordinates of an [`H4Presentation`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct H4Element(pub Vec<BigInt>);

impl H4Element {
    pub fn zero(rank: usize) -> H4Element {
        H4Element(vec![BigInt::zero(); rank])
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &H4Element) -> H4Element {
        H4Element(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn to_i64(&self) -> Result<Vec<i64>> {
        self.0.iter().map(|x| x.to_i64().ok_or(Error::Overflow("H^4 coordinate"))).collect()
    }
}

pub fn is_zero(elem: &H4Element) -> bool {
    elem.is_zero()
}

/// Both presentations of one fan, computed once and then shared.
#[derive(Clone, Debug)]
pub struct Cohomology {
    fan: Fan,
    fan_hash: String,
    h2: H2Presentation,
    h4: H4Presentation,
}

impl Cohomology {
    /// Requires a fan passing [`crate::fan::validate_fan`].
    pub fn new(fan: &Fan) -> Result<Cohomology> {
        require_valid(fan)?;
        let h2 = h2_presentation(fan)?;
        let h4 = h4_presentation(fan, &h2)?;
        Ok(Cohomology { fan: fan.clone(), fan_hash: fan.content_hash(), h2, h4 })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Content hash of the fan's canonical serialization.
    pub fn fan_hash(&self) -> &str {
        &self.fan_hash
    }

    pub fn h2(&self) -> &H2Presentation {
        &self.h2
    }

    pub fn h4(&self) -> &H4Presentation {
        &self.h4
    }

    pub fn num_rays(&self) -> usize {
        self.fan.num_rays()
    }

    pub fn generator(&self, i: usize) -> CohomologyClass {
        CohomologyClass::generator(self.num_rays(), i)
    }

    fn check_len(&self, u: &CohomologyClass) -> Result<()> {
        if u.len() == self.num_rays() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.num_rays(), got: u.len() })
        }
    }

    pub fn h2_coordinates(&self, u: &CohomologyClass) -> Result<Vec<BigInt>> {
        self.check_len(u)?;
        Ok(self.h2.coordinates(u.coeffs()))
    }

    /// Whether `u` and `v` agree in H², i.e. differ by a linear relation.
    pub fn equal_in_h2(&self, u: &CohomologyClass, v: &CohomologyClass) -> Result<bool> {
        Ok(self.h2_coordinates(u)? == self.h2_coordinates(v)?)
    }

    /// Product of two vectors over the generators, without length checks.
    pub(crate) fn product_big(&self, u: &[BigInt], v: &[BigInt]) -> H4Element {
        let mut out = vec![BigInt::zero(); self.h4.rank];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (o, x) in out.iter_mut().zip(self.h4.monomial_coordinates(i, j)) {
                    if !x.is_zero() {
                        *o += &ab * x;
                    }
                }
            }
        }
        H4Element(out)
    }

    pub fn product(&self, u: &CohomologyClass, v: &CohomologyClass) -> Result<H4Element> {
        self.check_len(u)?;
        self.check_len(v)?;
        let big = |c: &CohomologyClass| c.coeffs().iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        Ok(self.product_big(&big(u), &big(v)))
    }

    pub fn square(&self, u: &CohomologyClass) -> Result<H4Element> {
        self.product(u, u)
    }

    /// Renders an element as a combination of the basis expressions.
    pub fn describe(&self, elem: &H4Element) -> String {
        let labels = self.h4.basis_labels();
        let parts: Vec<String> = elem
            .0
            .iter()
            .zip(&labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| format!("{c}*[{l}]"))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// JSON summary used by the `cohomology` subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologySummary {
    pub h2_rank: usize,
    pub h2_basis: Vec<String>,
    pub h4_rank: usize,
    pub h4_basis: Vec<String>,
}

impl Cohomology {
    pub fn summary(&self) -> CohomologySummary {
        let m = self.num_rays();
        let h2_basis = self
            .h2
            .basis
            .iter()
            .map(|v| {
                let coeffs: Option<Vec<i64>> = v.iter().map(ToPrimitive::to_i64).collect();
                coeffs.map_or_else(|| format!("{v:?}"), |c| CohomologyClass(c).to_string())
            })
            .collect();
        debug_assert!(self.h2.basis.iter().all(|v| v.len() == m));
        CohomologySummary {
            h2_rank: self.h2.rank,
            h2_basis,
            h4_rank: self.h4.rank,
            h4_basis: self.h4.basis_labels(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bott::{build_bott, BottSpec};
    use crate::wedge::wedge_atomic;

    fn hirzebruch(a: i64) -> Fan {
        build_bott(&BottSpec::new(2).unwrap().with(1, 2, a).unwrap()).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn monomial_indexing_is_lexicographic() {
        for m in 1..7 {
            for (k, &(i, j)) in all_monomials(m).iter().enumerate() {
                assert_eq!(monomial_index(m, i, j), k);
                assert_eq!(monomial_index(m, j, i), k);
            }
        }
    }

    #[test]
    fn h2_of_projective_line() {
        let fan = build_bott(&BottSpec::new(1).unwrap()).unwrap();
        let h2 = h2_presentation(&fan).unwrap();
        assert_eq!(h2.rank, 1);
        assert_eq!(h2.coordinate_map[0], h2.coordinate_map[1]);
        let h4 = h4_presentation(&fan, &h2).unwrap();
        assert_eq!(h4.rank, 0);
    }

    #[test]
    fn h2_of_hirzebruch() {
        let a = 3;
        let h2 = h2_presentation(&hirzebruch(a)).unwrap();
        assert_eq!(h2.rank, 2);
        assert_eq!(h2.basis_generators, Some(vec![0, 1]));
        assert_eq!(h2.coordinate_map[2], big(&[1, 0]));
        assert_eq!(h2.coordinate_map[3], big(&[a, 1]));
    }

    #[test]
    fn h4_of_hirzebruch() {
        for a in -3..=3 {
            let coh = Cohomology::new(&hirzebruch(a)).unwrap();
            assert_eq!(coh.h4().rank, 1);
            assert_eq!(coh.h4().basis_labels(), vec!["w1*w2".to_string()]);
            let w = |i| coh.generator(i);
            assert!(coh.product(&w(0), &w(2)).unwrap().is_zero());
            assert_eq!(coh.square(&w(1)).unwrap(), H4Element(big(&[-a])));
            assert_eq!(coh.product(&w(0), &w(1)).unwrap(), H4Element(big(&[1])));
            assert!(coh.square(&w(0)).unwrap().is_zero());
            assert!(coh.product(&w(3), &CohomologyClass::zero(4)).unwrap().is_zero());
        }
    }

    #[test]
    fn projective_plane_has_positive_square() {
        let p1 = build_bott(&BottSpec::new(1).unwrap()).unwrap();
        let (p2, _) = wedge_atomic(&p1, 0).unwrap();
        let coh = Cohomology::new(&p2).unwrap();
        assert_eq!(coh.h2().rank, 1);
        assert_eq!(coh.h4().rank, 1);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(coh.product(&coh.generator(i), &coh.generator(j)).unwrap(), H4Element(big(&[1])));
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let coh = Cohomology::new(&hirzebruch(1)).unwrap();
        assert_eq!(
            coh.square(&CohomologyClass::new(vec![1, 0])),
            Err(Error::DimensionMismatch { expected: 4, got: 2 })
        );
    }

    #[test]
    fn torsion_is_reported() {
        // cone of determinant 2: Z^2 / <(1,1),(0,2)> has Z/2 torsion
        let fan = Fan::new(2, vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1]]).unwrap();
        assert!(matches!(h2_presentation(&fan), Err(Error::Torsion { degree: "H^2", .. })));
    }

    #[test]
    fn class_display_and_normalisation() {
        let c = CohomologyClass::new(vec![-2, 0, 4, -6]);
        assert_eq!(c.to_string(), "-2*w1 + 4*w3 - 6*w4");
        assert_eq!(c.normalized(), CohomologyClass::new(vec![1, 0, -2, 3]));
        assert_eq!(CohomologyClass::parse("1, 0,-1").unwrap(), CohomologyClass::new(vec![1, 0, -1]));
    }
}
