//! Stable cohomology of mapping class groups with the coefficient systems
//! `Q`, `H`, `H̃` (unit tangent bundle homology) and `H̃^∨`, assembled as
//! explicit graded modules over `A = Q[e_1, e_2, ...]`.
//!
//! * `A` carries the MMM classes `e_i` (cohomological degree `2i`).
//! * `F = H^*_st(H)` is free on the twisted classes `m_{l,1}` (cohomological
//!   degree `2l − 1`). `m_{l,1}` is stored in internal degree `2l`, so
//!   cohomological degree on `F` is internal degree minus one.
//! * The contraction pairing is `μ(m_{l,1}, m_{l',1}) = −e_{l+l'−1}`, extended
//!   `A`-bilinearly.
//! * The connecting map for `H̃^∨` is cup product with `m_{1,1}` (`A → F`),
//!   the one for `H̃` is `μ(m_{1,1}, −)` (`F → A`).
//!
//! Every structural claim is checked degree by degree inside the bound.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{AlgebraElement, DegreeBound, GradedAlgebra, Monomial};
use crate::error::{Error, Result};
use crate::forms::FormsComplex;
use crate::linalg::{self, rat, Echelon, Rational, SparseMatrix, VectorQ};
use crate::modules::{
    self, free_module, kernel_module, minimal_generators, FreeLayout, GradedModule,
    GradedModuleMap, Parity, TorResult,
};

/// Named classes appearing in the computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TwistedClassSymbol {
    /// MMM class `e_i`
    E { i: u32 },
    /// twisted MMM class `m_{l,1}`
    M { l: u32 },
    /// `M_{i,j} = e_i m_{j,1} − e_j m_{i,1}`
    BigM { i: u32, j: u32 },
    /// fibre class in degree zero
    Theta,
}

impl TwistedClassSymbol {
    pub fn cohomological_degree(self) -> usize {
        match self {
            TwistedClassSymbol::E { i } => 2 * i as usize,
            TwistedClassSymbol::M { l } => 2 * l as usize - 1,
            TwistedClassSymbol::BigM { i, j } => 2 * (i + j) as usize - 1,
            TwistedClassSymbol::Theta => 0,
        }
    }

    /// The class as an element of `F`, for the symbols that live there.
    pub fn to_twisted(self) -> Option<TwistedElement> {
        match self {
            TwistedClassSymbol::M { l } => Some(TwistedElement::m(l)),
            TwistedClassSymbol::BigM { i, j } => Some(TwistedElement::big_m(i, j)),
            _ => None,
        }
    }
}

impl fmt::Display for TwistedClassSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistedClassSymbol::E { i } => write!(f, "e_{i}"),
            TwistedClassSymbol::M { l } => write!(f, "m_{{{l},1}}"),
            TwistedClassSymbol::BigM { i, j } => write!(f, "M_{{{i},{j}}}"),
            TwistedClassSymbol::Theta => write!(f, "θ"),
        }
    }
}

/// An element `Σ c · f · m_{l,1}` of the free module `F`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwistedElement {
    terms: BTreeMap<(u32, Monomial), Rational>,
}

impl TwistedElement {
    pub fn zero() -> Self {
        TwistedElement::default()
    }

    /// `m_{l,1}`
    pub fn m(l: u32) -> Self {
        assert!(l >= 1);
        Self::from_terms([((l, Monomial::one()), Rational::one())])
    }

    /// `M_{i,j} = e_i m_{j,1} − e_j m_{i,1}`; zero when `i = j`.
    pub fn big_m(i: u32, j: u32) -> Self {
        Self::from_terms([
            ((j, Monomial::generator(i)), Rational::one()),
            ((i, Monomial::generator(j)), -Rational::one()),
        ])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, Monomial), Rational)>) -> Self {
        let mut acc: BTreeMap<(u32, Monomial), Rational> = BTreeMap::new();
        for (k, c) in terms {
            *acc.entry(k).or_insert_with(Rational::zero) += c;
        }
        acc.retain(|_, c| !c.is_zero());
        TwistedElement { terms: acc }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, Monomial), Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TwistedElement) -> Self {
        Self::from_terms(self.terms.clone().into_iter().chain(other.terms.clone()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    /// Module action of an algebra element.
    pub fn act(&self, a: &AlgebraElement) -> Self {
        Self::from_terms(
            self.terms.iter().flat_map(|((l, f), c)| {
                a.terms().iter().map(move |(g, b)| ((*l, f.mul(g)), c * b))
            }),
        )
    }

    pub fn times_generator(&self, i: u32) -> Self {
        self.act(&AlgebraElement::generator(i))
    }

    /// Internal degree when homogeneous and nonzero.
    pub fn internal_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|(l, f)| 2 * *l as usize + f.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn max_internal_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|(l, f)| 2 * *l as usize + f.degree())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for TwistedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, ((l, m), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if !c.is_one() {
                write!(f, "({c})·")?;
            }
            if !m.is_one() {
                write!(f, "{m} ")?;
            }
            write!(f, "m_{{{l},1}}")?;
        }
        Ok(())
    }
}

/// `A`-bilinear contraction `μ(f m_{l,1}, g m_{l',1}) = −f g e_{l+l'−1}`.
pub fn contraction_pairing(
    bound: DegreeBound,
    x: &TwistedElement,
    y: &TwistedElement,
) -> Result<AlgebraElement> {
    if !x.is_zero() && !y.is_zero() {
        bound.check(x.max_internal_degree() + y.max_internal_degree() - 2)?;
    }
    let mut out = AlgebraElement::zero();
    for ((l, f), a) in &x.terms {
        for ((l2, g), b) in &y.terms {
            let e = Monomial::generator(l + l2 - 1);
            out.add_term(f.mul(g).mul(&e), -(a * b));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoefficientLabel {
    #[serde(rename = "Q")]
    Q,
    #[serde(rename = "H")]
    H,
    #[serde(rename = "Htilde")]
    HTilde,
    #[serde(rename = "HtildeDual")]
    HTildeDual,
}

impl CoefficientLabel {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "Q" => Some(CoefficientLabel::Q),
            "H" => Some(CoefficientLabel::H),
            "Htilde" => Some(CoefficientLabel::HTilde),
            "HtildeDual" => Some(CoefficientLabel::HTildeDual),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CoefficientLabel::Q => "Q",
            CoefficientLabel::H => "H",
            CoefficientLabel::HTilde => "Htilde",
            CoefficientLabel::HTildeDual => "HtildeDual",
        }
    }

    /// Largest cohomological degree whose dimension is determined inside an internal bound.
    pub fn max_cohomological_degree(self, bound: DegreeBound) -> usize {
        let b = bound.get();
        match self {
            CoefficientLabel::Q | CoefficientLabel::HTilde => b,
            CoefficientLabel::H | CoefficientLabel::HTildeDual => b.saturating_sub(1),
        }
    }
}

/// Dimension table by cohomological degree, with optional minimal-generator counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableCohomologyTable {
    pub coefficients: CoefficientLabel,
    pub dims: BTreeMap<usize, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator_report: Option<BTreeMap<usize, usize>>,
}

impl StableCohomologyTable {
    pub fn dim(&self, cohomological_degree: usize) -> usize {
        self.dims.get(&cohomological_degree).copied().unwrap_or(0)
    }
}

/// `dim (Λ^j E)_d`: strictly increasing `i_1 < ... < i_j` with `Σ 2 i_k = d`.
pub fn exterior_power_dim(j: usize, d: usize) -> usize {
    modules::wedge_lists(j, d)
        .iter()
        .filter(|w| w.iter().map(|&i| 2 * i as usize).sum::<usize>() == d)
        .count()
}

/// All objects of the computation, built once for a degree bound.
#[derive(Debug)]
pub struct StableCohomology {
    forms: FormsComplex,
    twisted_layout: FreeLayout,
    constant: Arc<GradedModule>,
    twisted: Arc<GradedModule>,
    contravariant: GradedModuleMap,
    covariant: GradedModuleMap,
    kernel: GradedModule,
    kernel_inclusion: GradedModuleMap,
}

impl StableCohomology {
    pub fn new(bound: DegreeBound) -> Result<Self> {
        let forms = FormsComplex::new(bound);
        let algebra = forms.algebra();
        let b = bound.get();
        let twisted_degrees: Vec<usize> = (1..=b / 2).map(|l| 2 * l).collect();
        let twisted_layout = FreeLayout::new(algebra, &twisted_degrees)?;
        let constant = Arc::new(free_module(algebra, &[0], Some(Parity::Even))?);
        let twisted = Arc::new(free_module(algebra, &twisted_degrees, Some(Parity::Odd))?);

        // 1 ↦ m_{1,1}: basis monomial f of A_d goes to f·m_{1,1} in F_{d+2}
        let contravariant_mats = (0..(b + 1).saturating_sub(2))
            .map(|d| {
                let triplets = algebra
                    .monomial_basis(d)?
                    .iter()
                    .enumerate()
                    .map(|(col, f)| (twisted_layout.position(algebra, 0, f), col, rat(1)))
                    .collect::<Vec<_>>();
                Ok(SparseMatrix::from_triplets(
                    twisted_layout.dim(d + 2),
                    algebra.dim(d),
                    triplets,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let contravariant =
            GradedModuleMap::new(constant.clone(), twisted.clone(), 2, contravariant_mats)?;

        // f·m_{α,1} ↦ −f·e_α
        let covariant_mats = (0..=b)
            .map(|d| {
                let triplets = twisted_layout
                    .basis(algebra, d)
                    .into_iter()
                    .enumerate()
                    .map(|(col, (g, f))| {
                        let alpha = g as u32 + 1;
                        let image = f.mul_generator(alpha);
                        (algebra.index_of(&image).expect("in bound"), col, rat(-1))
                    })
                    .collect::<Vec<_>>();
                SparseMatrix::from_triplets(algebra.dim(d), twisted_layout.dim(d), triplets)
            })
            .collect();
        let covariant = GradedModuleMap::new(twisted.clone(), constant.clone(), 0, covariant_mats)?;
        let (kernel, kernel_inclusion) = kernel_module(&covariant)?;

        Ok(StableCohomology {
            forms,
            twisted_layout,
            constant,
            twisted,
            contravariant,
            covariant,
            kernel,
            kernel_inclusion,
        })
    }

    pub fn bound(&self) -> DegreeBound {
        self.forms.bound()
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        self.forms.algebra()
    }

    pub fn forms(&self) -> &FormsComplex {
        &self.forms
    }

    /// `A = H^*_st(Q)`
    pub fn constant_module(&self) -> &Arc<GradedModule> {
        &self.constant
    }

    /// `F = H^*_st(H)`
    pub fn twisted_module(&self) -> &Arc<GradedModule> {
        &self.twisted
    }

    /// Cup product with `m_{1,1}`, `A → F` (internal shift 2, cohomological shift 1).
    pub fn delta_contravariant(&self) -> &GradedModuleMap {
        &self.contravariant
    }

    /// `μ(m_{1,1}, −)`, `F → A` (internal shift 0, cohomological shift 1).
    pub fn delta_covariant(&self) -> &GradedModuleMap {
        &self.covariant
    }

    /// `ker μ(m_{1,1}, −)`, the odd part of `H^*_st(H̃)`.
    pub fn kernel(&self) -> &GradedModule {
        &self.kernel
    }

    pub fn kernel_inclusion(&self) -> &GradedModuleMap {
        &self.kernel_inclusion
    }

    /// `H^*_st(H̃) = Qθ ⊕ ker μ(m_{1,1}, −)` as one module.
    pub fn tilde_module(&self) -> Result<GradedModule> {
        let theta = GradedModule::trivial(0, self.kernel.top(), Some(Parity::Even))?;
        theta.direct_sum(&self.kernel)
    }

    pub fn contraction_pairing(
        &self,
        x: &TwistedElement,
        y: &TwistedElement,
    ) -> Result<AlgebraElement> {
        contraction_pairing(self.bound(), x, y)
    }

    /// Coordinates of a homogeneous element of `F` in internal degree `d`.
    pub fn twisted_vector(&self, x: &TwistedElement, d: usize) -> Result<VectorQ> {
        self.bound().check(d)?;
        let algebra = self.algebra();
        let mut pairs = Vec::with_capacity(x.terms.len());
        for ((l, f), c) in &x.terms {
            if 2 * *l as usize + f.degree() != d {
                return Err(Error::NotHomogeneous(d));
            }
            pairs.push((
                self.twisted_layout.position(algebra, *l as usize - 1, f),
                c.clone(),
            ));
        }
        Ok(VectorQ::from_pairs(self.twisted_layout.dim(d), pairs))
    }

    pub fn twisted_from_vector(&self, v: &VectorQ, d: usize) -> TwistedElement {
        let basis = self.twisted_layout.basis(self.algebra(), d);
        TwistedElement::from_terms(v.entries().iter().map(|(k, c)| {
            let (g, f) = &basis[*k];
            ((*g as u32 + 1, f.clone()), c.clone())
        }))
    }

    /// `H^*_st(Q) = A`: partition counts in even degrees.
    pub fn stable_cohomology_constant(&self) -> StableCohomologyTable {
        let max = CoefficientLabel::Q.max_cohomological_degree(self.bound());
        StableCohomologyTable {
            coefficients: CoefficientLabel::Q,
            dims: (0..=max).map(|c| (c, self.constant.dim(c))).collect(),
            generator_report: None,
        }
    }

    /// `H^*_st(H) = F`, free on `m_{l,1}`.
    pub fn stable_cohomology_h(&self) -> StableCohomologyTable {
        let max = CoefficientLabel::H.max_cohomological_degree(self.bound());
        StableCohomologyTable {
            coefficients: CoefficientLabel::H,
            dims: (0..=max)
                .map(|c| {
                    (
                        c,
                        if c % 2 == 1 {
                            self.twisted.dim(c + 1)
                        } else {
                            0
                        },
                    )
                })
                .collect(),
            generator_report: None,
        }
    }

    /// `H^*_st(H̃^∨)`: checks that cup product with `m_{1,1}` is injective and
    /// that its cokernel has the Hilbert function of the free module on
    /// `{m_{a,1} : a ≥ 2}`.
    pub fn stable_cohomology_tilde_dual(&self) -> Result<StableCohomologyTable> {
        let bound = self.bound();
        let max = CoefficientLabel::HTildeDual.max_cohomological_degree(bound);
        let algebra = self.algebra();
        let reduced: Vec<usize> = (2..=bound.get() / 2).map(|a| 2 * a).collect();
        let expected = FreeLayout::new(algebra, &reduced)?;
        let ranks: Vec<usize> = self
            .contravariant
            .matrices()
            .par_iter()
            .map(linalg::rank)
            .collect();

        let mut dims = BTreeMap::new();
        for c in 0..=max {
            let dim = if c % 2 == 0 {
                // A_c → F_{c+2} falls outside the bound
                let Some(rank) = ranks.get(c) else { continue };
                let kernel = algebra.dim(c) - rank;
                if kernel != 0 {
                    return Err(Error::Falsified {
                        check: "injectivity of cup product with m_{1,1}",
                        degree: c,
                        detail: format!("kernel of dimension {kernel}"),
                    });
                }
                0
            } else {
                let d = c + 1;
                let image = if d >= 2 { ranks[d - 2] } else { 0 };
                let coker = self.twisted.dim(d) - image;
                if coker != expected.dim(d) {
                    return Err(Error::Falsified {
                        check: "cokernel of cup product with m_{1,1} is free on m_{a,1}, a ≥ 2",
                        degree: d,
                        detail: format!("cokernel {coker}, free module {}", expected.dim(d)),
                    });
                }
                coker
            };
            dims.insert(c, dim);
        }
        let generator_report = (0..=max)
            .filter(|c| c % 2 == 1 && *c >= 3)
            .map(|c| (c, 1))
            .collect();
        Ok(StableCohomologyTable {
            coefficients: CoefficientLabel::HTildeDual,
            dims,
            generator_report: Some(generator_report),
        })
    }

    /// `H^*_st(H̃)`: checks surjectivity of `μ(m_{1,1}, −)` onto positive
    /// degrees, takes `Qθ` in degree zero and the kernel in odd degrees, and
    /// cross-checks the kernel against `ker(p_D: Ω^1 → Ω^0)`.
    pub fn stable_cohomology_tilde(&self) -> Result<StableCohomologyTable> {
        let bound = self.bound();
        let max = CoefficientLabel::HTilde.max_cohomological_degree(bound);
        let ranks: Vec<usize> = self
            .covariant
            .matrices()
            .par_iter()
            .map(linalg::rank)
            .collect();
        let mut dims = BTreeMap::new();
        for c in 0..=max {
            let dim = if c % 2 == 0 {
                let coker = self.algebra().dim(c) - ranks.get(c).copied().unwrap_or(0);
                let expected = usize::from(c == 0);
                if coker != expected {
                    return Err(Error::Falsified {
                        check: "surjectivity of contraction with m_{1,1}",
                        degree: c,
                        detail: format!("cokernel of dimension {coker}, expected {expected}"),
                    });
                }
                coker
            } else {
                self.kernel.dim(c + 1)
            };
            dims.insert(c, dim);
        }
        let mismatch = self.kernel_matches_interior_product()?;
        if let Some((d, ours, forms)) = mismatch.first_mismatch {
            return Err(Error::Falsified {
                check: "kernel of contraction agrees with ker p_D on 1-forms",
                degree: d,
                detail: format!("kernel dim {ours}, ker p_D dim {forms}"),
            });
        }
        if !mismatch.intertwined {
            return Err(Error::Falsified {
                check: "contraction with m_{1,1} equals −p_D under m_{i,1} ↔ de_i",
                degree: mismatch.first_matrix_mismatch.unwrap_or(0),
                detail: "matrices differ".into(),
            });
        }
        let gens = minimal_generators(&self.kernel, self.kernel.top())?;
        let mut generator_report: BTreeMap<usize, usize> =
            gens.counts.iter().map(|(d, n)| (d - 1, *n)).collect();
        generator_report.insert(0, 1);
        Ok(StableCohomologyTable {
            coefficients: CoefficientLabel::HTilde,
            dims,
            generator_report: Some(generator_report),
        })
    }

    pub fn table(&self, label: CoefficientLabel) -> Result<StableCohomologyTable> {
        match label {
            CoefficientLabel::Q => Ok(self.stable_cohomology_constant()),
            CoefficientLabel::H => Ok(self.stable_cohomology_h()),
            CoefficientLabel::HTilde => self.stable_cohomology_tilde(),
            CoefficientLabel::HTildeDual => self.stable_cohomology_tilde_dual(),
        }
    }

    /// Compares `ker μ(m_{1,1}, −)` in internal degree `d` with
    /// `ker(p_D: Ω^1_d → Ω^0_d)` computed independently from the forms
    /// complex, and checks the matrices satisfy `μ(m_{1,1}, −) = −p_D`.
    pub fn kernel_matches_interior_product(&self) -> Result<KernelCrossCheck> {
        let b = self.bound().get();
        let rows = (0..=b)
            .into_par_iter()
            .map(|d| {
                let p = self.forms.interior_product(1, d)?;
                let forms_kernel = linalg::kernel_basis(&p).len();
                let same = *self.covariant.matrix(d).expect("defined") == p.scaled(&rat(-1));
                Ok((d, self.kernel.dim(d), forms_kernel, same))
            })
            .collect::<Result<Vec<_>>>()?;
        let first_mismatch = rows
            .iter()
            .find(|(_, a, b, _)| a != b)
            .map(|(d, a, b, _)| (*d, *a, *b));
        let first_matrix_mismatch = rows.iter().find(|r| !r.3).map(|r| r.0);
        Ok(KernelCrossCheck {
            degrees: rows
                .iter()
                .filter(|(d, ..)| d % 2 == 0 && *d > 0)
                .map(|(d, a, b, _)| KernelCrossRow {
                    cohomological_degree: d - 1,
                    internal_degree: *d,
                    kernel_dim: *a,
                    interior_kernel_dim: *b,
                })
                .collect(),
            first_mismatch,
            intertwined: first_matrix_mismatch.is_none(),
            first_matrix_mismatch,
        })
    }

    /// Generators `M_{i,j}` and the syzygies `e_i M_{j,k} + e_j M_{k,i} + e_k M_{i,j}`.
    pub fn verify_generators_mij(&self) -> Result<GeneratorsReport> {
        let b = self.bound().get();
        let max_index = (b / 2) as u32;
        let pairs: Vec<(u32, u32)> = (1..=max_index)
            .flat_map(|i| (i + 1..=max_index).map(move |j| (i, j)))
            .filter(|(i, j)| 2 * (i + j) as usize <= b)
            .collect();

        let mut counterexample = None;

        // (a) every M_{i,j} is killed by μ(m_{1,1}, −)
        for &(i, j) in &pairs {
            let d = 2 * (i + j) as usize;
            let v = self.twisted_vector(&TwistedElement::big_m(i, j), d)?;
            let image = self.covariant.matrix(d).expect("defined").mul_vec(&v)?;
            if !image.is_zero() && counterexample.is_none() {
                counterexample = Some(format!("M_{{{i},{j}}} not in kernel"));
            }
        }

        // (c) syzygies, evaluated symbolically and as coordinate vectors
        let mut syzygies_checked = 0;
        for i in 1..=max_index {
            for j in i + 1..=max_index {
                for k in j + 1..=max_index {
                    let d = 2 * (i + j + k) as usize;
                    if d > b {
                        continue;
                    }
                    let s = TwistedElement::big_m(j, k)
                        .times_generator(i)
                        .add(&TwistedElement::big_m(k, i).times_generator(j))
                        .add(&TwistedElement::big_m(i, j).times_generator(k));
                    syzygies_checked += 1;
                    if !s.is_zero() && counterexample.is_none() {
                        counterexample = Some(format!("syzygy ({i},{j},{k}) evaluates to {s}"));
                    }
                }
            }
        }

        // (b) A-span of M_{i,j} fills the kernel, (d) minimal generators match Λ^2 E
        let gens = minimal_generators(&self.kernel, self.kernel.top())?;
        let algebra = self.algebra();
        let per_degree = (0..=b)
            .step_by(2)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|d| {
                let dim = self.twisted_layout.dim(d);
                let mut span = Echelon::new(dim);
                let mut all_in_kernel = true;
                let covariant = self.covariant.matrix(d).expect("defined");
                for &(i, j) in &pairs {
                    let w = 2 * (i + j) as usize;
                    if w > d {
                        continue;
                    }
                    for f in algebra.monomial_basis(d - w)? {
                        let x = TwistedElement::big_m(i, j)
                            .act(&AlgebraElement::monomial(f.clone(), Rational::one()));
                        let v = self.twisted_vector(&x, d)?;
                        all_in_kernel &= covariant.mul_vec(&v)?.is_zero();
                        span.insert(v);
                    }
                }
                Ok(GeneratorsDegree {
                    internal_degree: d,
                    cohomological_degree: d.saturating_sub(1),
                    kernel_dim: self.kernel.dim(d),
                    span_rank: span.rank(),
                    all_in_kernel,
                    minimal_generators: gens.count(d),
                    wedge2_dim: exterior_power_dim(2, d),
                })
            })
            .collect::<Result<Vec<_>>>()?;

        for row in &per_degree {
            if counterexample.is_some() {
                break;
            }
            if !row.all_in_kernel {
                counterexample = Some(format!(
                    "an A-multiple of some M_{{i,j}} leaves the kernel in internal degree {}",
                    row.internal_degree
                ));
            } else if row.span_rank != row.kernel_dim {
                counterexample = Some(format!(
                    "span of M_{{i,j}} has rank {} but kernel has dim {} in internal degree {}",
                    row.span_rank, row.kernel_dim, row.internal_degree
                ));
            } else if row.minimal_generators != row.wedge2_dim {
                counterexample = Some(format!(
                    "{} minimal generators vs dim Λ²E = {} in internal degree {}",
                    row.minimal_generators, row.wedge2_dim, row.internal_degree
                ));
            }
        }
        Ok(GeneratorsReport {
            holds: counterexample.is_none(),
            generators_checked: pairs.len(),
            syzygies_checked,
            per_degree,
            counterexample,
        })
    }

    /// `Tor_j^A(Q, H^*_st(H̃))` against `Λ^j E ⊕ Λ^{j+2} E` (`Λ^2 E ⊕ Qθ` at `j = 0`).
    pub fn verify_tor_theorem(&self, j_max: usize) -> Result<TorTheoremReport> {
        let module = self.tilde_module()?;
        let top = module.top();
        let jobs: Vec<(usize, usize)> = (0..=j_max)
            .flat_map(|j| (0..=top).map(move |d| (j, d)))
            .collect();
        let values = jobs
            .par_iter()
            .map(|&(j, d)| modules::tor(&module, j, d).map(|t| ((j, d), t)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let mut results = Vec::new();
        let mut mismatches = Vec::new();
        for j in 0..=j_max {
            let mut dims = BTreeMap::new();
            for d in 0..=top {
                let got = values[&(j, d)];
                let expected = if j == 0 {
                    exterior_power_dim(2, d) + usize::from(d == 0)
                } else {
                    exterior_power_dim(j, d) + exterior_power_dim(j + 2, d)
                };
                if got != expected {
                    mismatches.push(TorMismatch {
                        j,
                        internal_degree: d,
                        computed: got,
                        expected,
                    });
                }
                dims.insert(d, got);
            }
            results.push(TorResult { j, dims });
        }
        let non_free_certificate = if j_max >= 1 && top >= 2 {
            Some(values[&(1, 2)])
        } else {
            None
        };
        Ok(TorTheoremReport {
            holds: mismatches.is_empty(),
            results,
            mismatches,
            non_free_certificate,
        })
    }

    /// Alternating sum `dim ker − dim F + dim A − dim Q` of the four-term
    /// sequence `0 → ker → F → A → Q → 0` in every even internal degree.
    pub fn exact_sequence_audit(&self) -> SequenceAudit {
        let b = self.bound().get();
        let blocks: Vec<SequenceBlock> = (0..=b)
            .step_by(2)
            .map(|d| {
                let kernel = self.kernel.dim(d) as i64;
                let free = self.twisted.dim(d) as i64;
                let constant = self.constant.dim(d) as i64;
                let augmentation = i64::from(d == 0);
                SequenceBlock {
                    internal_degree: d,
                    odd_cohomological_degree: d.checked_sub(1),
                    even_cohomological_degree: d,
                    kernel_dim: kernel as usize,
                    free_dim: free as usize,
                    constant_dim: constant as usize,
                    augmentation_dim: augmentation as usize,
                    alternating_sum: kernel - free + constant - augmentation,
                }
            })
            .collect();
        SequenceAudit {
            holds: blocks.iter().all(|b| b.alternating_sum == 0),
            blocks,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelCrossRow {
    pub cohomological_degree: usize,
    pub internal_degree: usize,
    pub kernel_dim: usize,
    pub interior_kernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelCrossCheck {
    pub degrees: Vec<KernelCrossRow>,
    /// `(internal degree, kernel dim, ker p_D dim)` at the first disagreement.
    pub first_mismatch: Option<(usize, usize, usize)>,
    pub intertwined: bool,
    pub first_matrix_mismatch: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorsDegree {
    pub internal_degree: usize,
    pub cohomological_degree: usize,
    pub kernel_dim: usize,
    pub span_rank: usize,
    pub all_in_kernel: bool,
    pub minimal_generators: usize,
    pub wedge2_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorsReport {
    pub holds: bool,
    pub generators_checked: usize,
    pub syzygies_checked: usize,
    pub per_degree: Vec<GeneratorsDegree>,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorMismatch {
    pub j: usize,
    pub internal_degree: usize,
    pub computed: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorTheoremReport {
    pub holds: bool,
    pub results: Vec<TorResult>,
    pub mismatches: Vec<TorMismatch>,
    /// `dim Tor_1` in internal degree 2; nonzero certifies non-freeness.
    pub non_free_certificate: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceBlock {
    pub internal_degree: usize,
    pub odd_cohomological_degree: Option<usize>,
    pub even_cohomological_degree: usize,
    pub kernel_dim: usize,
    pub free_dim: usize,
    pub constant_dim: usize,
    pub augmentation_dim: usize,
    pub alternating_sum: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceAudit {
    pub holds: bool,
    pub blocks: Vec<SequenceBlock>,
}
