//! Kähler differential forms `Ω^n = A ⊗ Λ^n E` over the polynomial algebra,
//! with the exterior derivative `d`, contraction `p_D` with the Euler field
//! `D = Σ e_i ∂/∂e_i`, and the Lie derivative `L_D = d p_D + p_D d`.
//!
//! A basis form is `m · de_{j_1} ∧ ... ∧ de_{j_n}` with `j_1 < ... < j_n`.
//! Wedge factors are odd: both `d` and `p_D` pick up the Koszul sign
//! `(-1)^{k}` when they act on or pass the `k`-th factor (counted from zero).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{AlgebraElement, DegreeBound, GradedAlgebra, Monomial};
use crate::error::{Error, Result};
use crate::linalg::{self, rat, Rational, SparseMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormBasisElement {
    monomial: Monomial,
    wedge: Vec<u32>,
}

impl FormBasisElement {
    /// `wedge` must be strictly increasing.
    pub fn new(monomial: Monomial, wedge: Vec<u32>) -> Result<Self> {
        if wedge.first() == Some(&0) || wedge.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "wedge indices {wedge:?} are not strictly increasing positive integers"
            )));
        }
        Ok(FormBasisElement { monomial, wedge })
    }

    pub fn monomial(&self) -> &Monomial {
        &self.monomial
    }

    pub fn wedge(&self) -> &[u32] {
        &self.wedge
    }

    pub fn form_degree(&self) -> usize {
        self.wedge.len()
    }

    pub fn internal_degree(&self) -> usize {
        self.monomial.degree() + wedge_weight(&self.wedge)
    }

    /// Internal degree minus form degree; `de_i` sits in `2i - 1`.
    pub fn cohomological_degree(&self) -> usize {
        self.internal_degree() - self.form_degree()
    }
}

impl fmt::Display for FormBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.wedge.is_empty() {
            return write!(f, "{}", self.monomial);
        }
        if !self.monomial.is_one() {
            write!(f, "{} ", self.monomial)?;
        }
        for (k, j) in self.wedge.iter().enumerate() {
            if k > 0 {
                write!(f, "∧")?;
            }
            write!(f, "de_{j}")?;
        }
        Ok(())
    }
}

fn wedge_weight(wedge: &[u32]) -> usize {
    wedge.iter().map(|&j| 2 * j as usize).sum()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormElement {
    terms: BTreeMap<FormBasisElement, Rational>,
}

impl FormElement {
    pub fn from_terms(terms: impl IntoIterator<Item = (FormBasisElement, Rational)>) -> Self {
        let mut acc: BTreeMap<FormBasisElement, Rational> = BTreeMap::new();
        for (b, c) in terms {
            *acc.entry(b).or_insert_with(Rational::zero) += c;
        }
        acc.retain(|_, c| !c.is_zero());
        FormElement { terms: acc }
    }

    pub fn basis(b: FormBasisElement) -> Self {
        Self::from_terms([(b, Rational::one())])
    }

    pub fn terms(&self) -> &BTreeMap<FormBasisElement, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The Euler derivation `D = Σ e_i ∂/∂e_i`, i.e. `D(e_i) = e_i`.
#[derive(Clone, Copy, Debug, Default)]
pub struct EulerField;

impl EulerField {
    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_terms(
            a.terms()
                .iter()
                .map(|(m, c)| (m.clone(), c * rat(m.factor_count() as i64))),
        )
    }
}

/// Per-spot data for the contraction sequence `... → Ω^1 → Ω^0 → Q → 0` in one internal degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessSpot {
    pub form_degree: usize,
    pub dim: usize,
    /// Rank of the incoming `p_D: Ω^{n+1} → Ω^n`.
    pub rank_in: usize,
    /// Rank of the outgoing map (`p_D`, or the augmentation at `n = 0`).
    pub rank_out: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub internal_degree: usize,
    pub spots: Vec<ExactnessSpot>,
    pub exact: bool,
}

/// Cached form bases for every bidegree within a degree bound.
#[derive(Clone, Debug)]
pub struct FormsComplex {
    algebra: GradedAlgebra,
    bases: HashMap<(usize, usize), Vec<FormBasisElement>>,
    index: HashMap<(usize, usize), HashMap<FormBasisElement, usize>>,
    max_form_degree: usize,
}

impl FormsComplex {
    pub fn new(bound: DegreeBound) -> Self {
        let algebra = GradedAlgebra::new(bound);
        let max_form_degree = max_form_degree(bound.get());
        let mut bases = HashMap::new();
        let mut index = HashMap::new();
        for n in 0..=max_form_degree + 1 {
            for d in 0..=bound.get() {
                let basis = enumerate_forms(&algebra, n, d);
                index.insert(
                    (n, d),
                    basis
                        .iter()
                        .cloned()
                        .enumerate()
                        .map(|(k, b)| (b, k))
                        .collect(),
                );
                bases.insert((n, d), basis);
            }
        }
        FormsComplex {
            algebra,
            bases,
            index,
            max_form_degree,
        }
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn bound(&self) -> DegreeBound {
        self.algebra.bound()
    }

    /// Largest `n` with `n(n+1) ≤ bound`; higher form degrees are empty.
    pub fn max_form_degree(&self) -> usize {
        self.max_form_degree
    }

    /// Basis of `Ω^n` in internal degree `d`: wedge lists in increasing
    /// lexicographic order, then coefficient monomials in the algebra's order.
    pub fn form_basis(&self, n: usize, d: usize) -> Result<&[FormBasisElement]> {
        self.bound().check(d)?;
        Ok(self.bases.get(&(n, d)).map_or(&[], Vec::as_slice))
    }

    pub fn dim(&self, n: usize, d: usize) -> usize {
        self.bases.get(&(n, d)).map_or(0, Vec::len)
    }

    fn position(&self, n: usize, d: usize, b: &FormBasisElement) -> usize {
        self.index[&(n, d)][b]
    }

    /// Matrix of `d: Ω^n_d → Ω^{n+1}_d`.
    pub fn exterior_derivative(&self, n: usize, d: usize) -> Result<SparseMatrix> {
        let source = self.form_basis(n, d)?;
        let rows = self.dim(n + 1, d);
        let mut triplets = Vec::new();
        for (col, b) in source.iter().enumerate() {
            for (i, _) in b.monomial.support() {
                let Some((a, reduced)) = b.monomial.derivative(i) else {
                    continue;
                };
                let Some((sign, wedge)) = insert_wedge(&b.wedge, i) else {
                    continue;
                };
                let target = FormBasisElement {
                    monomial: reduced,
                    wedge,
                };
                triplets.push((self.position(n + 1, d, &target), col, rat(sign * a as i64)));
            }
        }
        Ok(SparseMatrix::from_triplets(rows, source.len(), triplets))
    }

    /// Matrix of `p_D: Ω^n_d → Ω^{n-1}_d`, the `A`-linear odd derivation with
    /// `p_D(de_i) = e_i`. At `n = 0` the target is the zero space.
    pub fn interior_product(&self, n: usize, d: usize) -> Result<SparseMatrix> {
        let source = self.form_basis(n, d)?;
        if n == 0 {
            return Ok(SparseMatrix::zeros(0, source.len()));
        }
        let rows = self.dim(n - 1, d);
        let mut triplets = Vec::new();
        for (col, b) in source.iter().enumerate() {
            for (k, &j) in b.wedge.iter().enumerate() {
                let mut wedge = b.wedge.clone();
                wedge.remove(k);
                let target = FormBasisElement {
                    monomial: b.monomial.mul_generator(j),
                    wedge,
                };
                let sign = if k % 2 == 0 { 1 } else { -1 };
                triplets.push((self.position(n - 1, d, &target), col, rat(sign)));
            }
        }
        Ok(SparseMatrix::from_triplets(rows, source.len(), triplets))
    }

    /// `d ∘ p_D + p_D ∘ d` on `Ω^n_d`, computed from the two matrices.
    pub fn lie_derivative(&self, n: usize, d: usize) -> Result<SparseMatrix> {
        let dim = self.dim(n, d);
        let deriv_then_contract = self
            .interior_product(n + 1, d)?
            .mul(&self.exterior_derivative(n, d)?)?;
        if n == 0 {
            return Ok(deriv_then_contract);
        }
        let contract_then_deriv = self
            .exterior_derivative(n - 1, d)?
            .mul(&self.interior_product(n, d)?)?;
        let sum = contract_then_deriv.add(&deriv_then_contract)?;
        debug_assert_eq!(sum.rows(), dim);
        Ok(sum)
    }

    /// Diagonal matrix with entry `m + n` on a basis form whose coefficient
    /// monomial has `m` factors.
    pub fn lie_derivative_eigenvalues(&self, n: usize, d: usize) -> Result<SparseMatrix> {
        let values: Vec<Rational> = self
            .form_basis(n, d)?
            .iter()
            .map(|b| rat((b.monomial.factor_count() + n) as i64))
            .collect();
        Ok(SparseMatrix::diagonal(&values))
    }

    pub fn verify_cartan(&self, n: usize, d: usize) -> Result<bool> {
        Ok(self.lie_derivative(n, d)? == self.lie_derivative_eigenvalues(n, d)?)
    }

    pub fn verify_d_squared(&self, n: usize, d: usize) -> Result<bool> {
        let dd = self
            .exterior_derivative(n + 1, d)?
            .mul(&self.exterior_derivative(n, d)?)?;
        Ok(dd.is_zero())
    }

    pub fn verify_p_squared(&self, n: usize, d: usize) -> Result<bool> {
        if n < 2 {
            return Ok(true);
        }
        let pp = self
            .interior_product(n - 1, d)?
            .mul(&self.interior_product(n, d)?)?;
        Ok(pp.is_zero())
    }

    /// Rank bookkeeping of `... → Ω^n → Ω^{n-1} → ... → Ω^0 → Q → 0` in
    /// internal degree `d > 0`. A spot is exact when incoming and outgoing
    /// ranks add up to its dimension.
    pub fn verify_exactness(&self, d: usize) -> Result<ExactnessReport> {
        if d == 0 {
            return Err(Error::InvalidArgument(
                "the contraction sequence is exact only in positive internal degree".into(),
            ));
        }
        self.bound().check(d)?;
        let top = max_form_degree(d);
        let ranks: Vec<usize> = (0..=top + 1)
            .map(|n| self.interior_product(n, d).map(|m| linalg::rank(&m)))
            .collect::<Result<_>>()?;
        let spots: Vec<ExactnessSpot> = (0..=top)
            .map(|n| {
                let dim = self.dim(n, d);
                let rank_in = ranks[n + 1];
                // the augmentation A → Q is zero in positive degree
                let rank_out = if n == 0 { 0 } else { ranks[n] };
                ExactnessSpot {
                    form_degree: n,
                    dim,
                    rank_in,
                    rank_out,
                    exact: rank_in + rank_out == dim,
                }
            })
            .collect();
        let exact = spots.iter().all(|s| s.exact);
        Ok(ExactnessReport {
            internal_degree: d,
            spots,
            exact,
        })
    }

    /// `dim ker(p_D: Ω^n_d → Ω^{n-1}_d)` via an explicit kernel basis.
    pub fn interior_kernel_dim(&self, n: usize, d: usize) -> Result<usize> {
        Ok(linalg::kernel_basis(&self.interior_product(n, d)?).len())
    }

    /// Coordinates of a form homogeneous in bidegree `(n, d)`.
    pub fn as_vector(&self, f: &FormElement, n: usize, d: usize) -> Result<linalg::VectorQ> {
        let dim = self.form_basis(n, d)?.len();
        let index = &self.index[&(n, d)];
        let mut pairs = Vec::with_capacity(f.terms.len());
        for (b, c) in &f.terms {
            let pos = index.get(b).ok_or(Error::NotHomogeneous(d))?;
            pairs.push((*pos, c.clone()));
        }
        Ok(linalg::VectorQ::from_pairs(dim, pairs))
    }

    pub fn from_vector(&self, v: &linalg::VectorQ, n: usize, d: usize) -> Result<FormElement> {
        let basis = self.form_basis(n, d)?;
        if v.dim() != basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector of dim {} for Ω^{n}_{d} of dim {}",
                v.dim(),
                basis.len()
            )));
        }
        Ok(FormElement::from_terms(
            v.entries()
                .iter()
                .map(|(k, c)| (basis[*k].clone(), c.clone())),
        ))
    }
}

/// Largest `n` with `n(n+1) ≤ d`, the minimal internal weight of an `n`-fold wedge.
pub fn max_form_degree(d: usize) -> usize {
    let mut n = 0;
    while (n + 1) * (n + 2) <= d {
        n += 1;
    }
    n
}

/// Inserts `i` into a sorted wedge, returning the sign of moving `de_i` past
/// the smaller factors, or `None` if `i` is already present.
fn insert_wedge(wedge: &[u32], i: u32) -> Option<(i64, Vec<u32>)> {
    match wedge.binary_search(&i) {
        Ok(_) => None,
        Err(pos) => {
            let mut out = wedge.to_vec();
            out.insert(pos, i);
            Some((if pos % 2 == 0 { 1 } else { -1 }, out))
        }
    }
}

fn enumerate_forms(algebra: &GradedAlgebra, n: usize, d: usize) -> Vec<FormBasisElement> {
    let mut wedges = Vec::new();
    let mut current = Vec::new();
    wedge_lists(1, n, d, &mut current, &mut wedges);
    let mut out = Vec::new();
    for wedge in wedges {
        let rest = d - wedge_weight(&wedge);
        for m in algebra.monomial_basis(rest).unwrap_or(&[]) {
            out.push(FormBasisElement {
                monomial: m.clone(),
                wedge: wedge.clone(),
            });
        }
    }
    out
}

/// Strictly increasing index lists of length `remaining` starting at `start`
/// with total weight at most `budget`, in lexicographic order.
fn wedge_lists(
    start: u32,
    remaining: usize,
    budget: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    let mut j = start;
    loop {
        // cheapest completion uses j, j+1, ..., j+remaining-1
        let r = remaining as u32;
        let min_weight = (r * (2 * j + r - 1)) as usize;
        if min_weight > budget {
            break;
        }
        current.push(j);
        wedge_lists(j + 1, remaining - 1, budget - 2 * j as usize, current, out);
        current.pop();
        j += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Monomial;

    fn forms() -> FormsComplex {
        FormsComplex::new(DegreeBound::default())
    }

    fn basis_strings(f: &FormsComplex, n: usize, d: usize) -> Vec<String> {
        f.form_basis(n, d)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    fn form(monomial: &[u32], wedge: &[u32]) -> FormElement {
        FormElement::basis(
            FormBasisElement::new(Monomial::from_exponents(monomial), wedge.to_vec()).unwrap(),
        )
    }

    fn apply(
        f: &FormsComplex,
        m: &SparseMatrix,
        x: &FormElement,
        n: usize,
        target_n: usize,
        d: usize,
    ) -> FormElement {
        let v = f.as_vector(x, n, d).unwrap();
        f.from_vector(&m.mul_vec(&v).unwrap(), target_n, d).unwrap()
    }

    #[test]
    fn form_basis_examples() {
        let f = forms();
        assert_eq!(basis_strings(&f, 0, 4), ["e_1^2", "e_2"]);
        assert_eq!(
            basis_strings(&f, 1, 6),
            ["e_1^2 de_1", "e_2 de_1", "e_1 de_2", "de_3"]
        );
        assert_eq!(basis_strings(&f, 2, 6), ["de_1∧de_2"]);
        assert!(f.form_basis(2, 4).unwrap().is_empty());
        assert_eq!(f.max_form_degree(), 4);
    }

    #[test]
    fn degrees_of_basis_forms() {
        let b = FormBasisElement::new(Monomial::generator(1), vec![2]).unwrap();
        assert_eq!(b.internal_degree(), 6);
        assert_eq!(b.cohomological_degree(), 5);
        assert!(FormBasisElement::new(Monomial::one(), vec![2, 1]).is_err());
    }

    #[test]
    fn exterior_derivative_examples() {
        let f = forms();
        let d0 = f.exterior_derivative(0, 2).unwrap();
        assert_eq!(apply(&f, &d0, &form(&[1], &[]), 0, 1, 2), form(&[], &[1]));

        let d2 = f.exterior_derivative(2, 6).unwrap();
        assert!(d2.is_zero());

        // d(e_1^2 de_2) = 2 e_1 de_1∧de_2
        let d1 = f.exterior_derivative(1, 8).unwrap();
        let got = apply(&f, &d1, &form(&[2], &[2]), 1, 2, 8);
        let want = FormElement::from_terms([(
            FormBasisElement::new(Monomial::generator(1), vec![1, 2]).unwrap(),
            rat(2),
        )]);
        assert_eq!(got, want);
    }

    #[test]
    fn interior_product_examples() {
        let f = forms();
        let p1 = f.interior_product(1, 2).unwrap();
        assert_eq!(apply(&f, &p1, &form(&[], &[1]), 1, 0, 2), form(&[1], &[]));

        let p1 = f.interior_product(1, 10).unwrap();
        assert_eq!(
            apply(&f, &p1, &form(&[0, 1], &[3]), 1, 0, 10),
            form(&[0, 1, 1], &[])
        );

        // p_D(de_1∧de_2) = e_1 de_2 - e_2 de_1
        let p2 = f.interior_product(2, 6).unwrap();
        let got = apply(&f, &p2, &form(&[], &[1, 2]), 2, 1, 6);
        let want = FormElement::from_terms([
            (
                FormBasisElement::new(Monomial::generator(1), vec![2]).unwrap(),
                rat(1),
            ),
            (
                FormBasisElement::new(Monomial::generator(2), vec![1]).unwrap(),
                rat(-1),
            ),
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn lie_derivative_examples() {
        let f = forms();
        let l = f.lie_derivative(1, 2).unwrap();
        assert_eq!(l.to_dense(), vec![vec![rat(1)]]);

        let l = f.lie_derivative(1, 8).unwrap();
        let x = form(&[2], &[2]);
        let v = f.as_vector(&x, 1, 8).unwrap();
        assert_eq!(l.mul_vec(&v).unwrap(), v.scaled(&rat(3)));

        let l = f.lie_derivative(0, 0).unwrap();
        assert!(l.is_zero());
        assert_eq!(l.rows(), 1);
    }

    #[test]
    fn cartan_examples() {
        let f = forms();
        assert!(f.verify_cartan(1, 2).unwrap());
        assert!(f.verify_cartan(0, 0).unwrap());
        assert!(f.verify_cartan(2, 10).unwrap());
    }

    #[test]
    fn exactness_examples() {
        let f = forms();
        let r = f.verify_exactness(2).unwrap();
        assert!(r.exact);
        assert_eq!(r.spots[0].dim, 1);
        assert_eq!(r.spots[0].rank_in, 1);

        assert_eq!(f.interior_kernel_dim(1, 6).unwrap(), 1);
        assert!(f.verify_exactness(6).unwrap().exact);
        assert_eq!(f.interior_kernel_dim(1, 8).unwrap(), 2);
        assert!(f.verify_exactness(8).unwrap().exact);

        assert!(matches!(
            f.verify_exactness(0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            f.verify_exactness(26),
            Err(Error::DegreeOutOfBound { .. })
        ));
    }

    #[test]
    fn euler_field_scales_by_factor_count() {
        let x = AlgebraElement::from_terms([
            (Monomial::from_exponents(&[2, 1]), rat(1)),
            (Monomial::generator(3), rat(5)),
        ]);
        let y = EulerField.apply(&x);
        assert_eq!(y.coefficient(&Monomial::from_exponents(&[2, 1])), rat(3));
        assert_eq!(y.coefficient(&Monomial::generator(3)), rat(5));
    }

    #[test]
    fn max_form_degree_values() {
        assert_eq!(max_form_degree(0), 0);
        assert_eq!(max_form_degree(2), 1);
        assert_eq!(max_form_degree(6), 2);
        assert_eq!(max_form_degree(24), 4);
        assert_eq!(max_form_degree(30), 5);
    }
}
