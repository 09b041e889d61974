//! The polynomial algebra `A = Q[e_1, e_2, ...]` with `e_i` in internal degree `2i`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Rational, SparseMatrix, VectorQ};

pub const DEFAULT_DEGREE_BOUND: usize = 24;

/// Subscript `i ≥ 1` of a generator `e_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorIndex(u32);

impl GeneratorIndex {
    pub fn new(i: u32) -> Result<Self> {
        if i == 0 {
            return Err(Error::InvalidGenerator(0));
        }
        Ok(GeneratorIndex(i))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        2 * self.0 as usize
    }
}

/// A monomial `e_1^{a_1} e_2^{a_2} ...`, stored as its exponent vector with
/// trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn generator(i: u32) -> Self {
        assert!(i >= 1, "generator indices start at 1");
        let mut exps = vec![0; i as usize];
        exps[i as usize - 1] = 1;
        Monomial { exps }
    }

    /// `exponents[k]` is the exponent of `e_{k+1}`.
    pub fn from_exponents(exponents: &[u32]) -> Self {
        let mut exps = exponents.to_vec();
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, i: u32) -> u32 {
        self.exps.get(i as usize - 1).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Internal degree `Σ 2 i a_i`.
    pub fn degree(&self) -> usize {
        self.exps
            .iter()
            .enumerate()
            .map(|(k, &a)| 2 * (k + 1) * a as usize)
            .sum()
    }

    /// Number of generator factors counted with multiplicity.
    pub fn factor_count(&self) -> usize {
        self.exps.iter().map(|&a| a as usize).sum()
    }

    /// `(i, a_i)` for every generator present.
    pub fn support(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(k, &a)| (k as u32 + 1, a))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let exps = (0..n)
            .map(|k| self.exps.get(k).unwrap_or(&0) + other.exps.get(k).unwrap_or(&0))
            .collect();
        Monomial { exps }
    }

    pub fn mul_generator(&self, i: u32) -> Monomial {
        let mut exps = self.exps.clone();
        if exps.len() < i as usize {
            exps.resize(i as usize, 0);
        }
        exps[i as usize - 1] += 1;
        Monomial { exps }
    }

    /// `∂/∂e_i`: the exponent `a_i` and the monomial with it lowered by one.
    pub fn derivative(&self, i: u32) -> Option<(u32, Monomial)> {
        let a = self.exponent(i);
        if a == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[i as usize - 1] -= 1;
        Some((a, Monomial::from_exponents(&exps)))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, a) in self.support() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if a == 1 {
                write!(f, "e_{i}")?;
            } else {
                write!(f, "e_{i}^{a}")?;
            }
        }
        Ok(())
    }
}

/// All monomials of internal degree `d`, in descending lexicographic order of
/// the exponent vector read from `e_1` upward (so `e_1^{d/2}` comes first).
pub fn monomials_of_degree(d: usize) -> Vec<Monomial> {
    if d % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    enumerate_partitions(1, d / 2, &mut prefix, &mut out);
    out
}

fn enumerate_partitions(i: usize, weight: usize, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if weight == 0 {
        out.push(Monomial::from_exponents(prefix));
        return;
    }
    if i > weight {
        return;
    }
    for a in (0..=weight / i).rev() {
        prefix.push(a as u32);
        enumerate_partitions(i + 1, weight - a * i, prefix, out);
        prefix.pop();
    }
}

/// Even internal degree bound under which every computation is carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBound(usize);

impl DegreeBound {
    pub fn new(max_internal_degree: usize) -> Result<Self> {
        if max_internal_degree % 2 == 1 {
            return Err(Error::OddDegreeBound(max_internal_degree));
        }
        Ok(DegreeBound(max_internal_degree))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Largest `i` with `2i` within the bound.
    pub fn max_generator(self) -> u32 {
        (self.0 / 2) as u32
    }

    pub fn check(self, degree: usize) -> Result<()> {
        if degree > self.0 {
            Err(Error::DegreeOutOfBound {
                degree,
                bound: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for DegreeBound {
    fn default() -> Self {
        DegreeBound(DEFAULT_DEGREE_BOUND)
    }
}

/// Finite rational combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<Monomial, Rational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one(), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        AlgebraElement { terms }
    }

    pub fn generator(i: u32) -> Self {
        Self::monomial(Monomial::generator(i), Rational::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut out = AlgebraElement::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scaled(&self, c: &Rational) -> AlgebraElement {
        AlgebraElement::from_terms(self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn neg(&self) -> AlgebraElement {
        self.scaled(&-Rational::one())
    }

    /// Internal degree if the element is homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Product with no degree check. Use [`GradedAlgebra::multiply`] for bounded work.
    pub fn mul_unbounded(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})·{m}")?;
            }
        }
        Ok(())
    }
}

/// Per-degree monomial bases of `A` up to a [`DegreeBound`], with index lookup.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    bound: DegreeBound,
    bases: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
}

impl GradedAlgebra {
    pub fn new(bound: DegreeBound) -> Self {
        let bases: Vec<Vec<Monomial>> = (0..=bound.get()).map(monomials_of_degree).collect();
        let index = bases
            .iter()
            .map(|b| b.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect())
            .collect();
        GradedAlgebra {
            bound,
            bases,
            index,
        }
    }

    pub fn bound(&self) -> DegreeBound {
        self.bound
    }

    /// Generators `e_i` with `2i ≤ bound`.
    pub fn generators(&self) -> impl Iterator<Item = u32> {
        1..=self.bound.max_generator()
    }

    pub fn monomial_basis(&self, d: usize) -> Result<&[Monomial]> {
        self.bound.check(d)?;
        Ok(&self.bases[d])
    }

    pub fn hilbert_function(&self, d: usize) -> Result<usize> {
        Ok(self.monomial_basis(d)?.len())
    }

    /// Dimension of `A_d`, zero outside `0..=bound`.
    pub fn dim(&self, d: usize) -> usize {
        self.bases.get(d).map_or(0, Vec::len)
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m.degree())?.get(m).copied()
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        if !a.is_zero() && !b.is_zero() {
            self.bound.check(a.max_degree() + b.max_degree())?;
        }
        Ok(a.mul_unbounded(b))
    }

    /// Coordinates of a homogeneous element in the canonical basis of `A_d`.
    pub fn as_vector(&self, a: &AlgebraElement, d: usize) -> Result<VectorQ> {
        let basis_len = self.hilbert_function(d)?;
        if a.terms.keys().any(|m| m.degree() != d) {
            return Err(Error::NotHomogeneous(d));
        }
        Ok(VectorQ::from_pairs(
            basis_len,
            a.terms.iter().map(|(m, c)| (self.index[d][m], c.clone())),
        ))
    }

    pub fn from_vector(&self, v: &VectorQ, d: usize) -> Result<AlgebraElement> {
        let basis = self.monomial_basis(d)?;
        if v.dim() != basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector of dim {} for A_{d} of dim {}",
                v.dim(),
                basis.len()
            )));
        }
        Ok(AlgebraElement::from_terms(
            v.entries()
                .iter()
                .map(|(k, c)| (basis[*k].clone(), c.clone())),
        ))
    }

    /// Matrix of multiplication by `e_i` from `A_d` to `A_{d+2i}`.
    pub fn multiplication_matrix(&self, i: u32, d: usize) -> Result<SparseMatrix> {
        let target = d + 2 * i as usize;
        self.bound.check(target)?;
        let src = self.monomial_basis(d)?;
        Ok(SparseMatrix::from_triplets(
            self.dim(target),
            src.len(),
            src.iter()
                .enumerate()
                .map(|(k, m)| (self.index[target][&m.mul_generator(i)], k, Rational::one())),
        ))
    }
}
