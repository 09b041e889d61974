//! Finitely generated graded modules over `A`, presented degree by degree by a
//! basis dimension and the matrices of each `e_i` action.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{GradedAlgebra, Monomial};
use crate::error::{Error, Result};
use crate::linalg::{self, rat, Echelon, Rational, SparseMatrix, VectorQ};

/// Relation between internal and cohomological degree for a single-parity module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// cohomological degree = internal degree
    Even,
    /// cohomological degree = internal degree − 1
    Odd,
}

impl Parity {
    pub fn cohomological_degree(self, internal: usize) -> Option<usize> {
        match self {
            Parity::Even => Some(internal),
            Parity::Odd => internal.checked_sub(1),
        }
    }

    pub fn internal_degree(self, cohomological: usize) -> usize {
        match self {
            Parity::Even => cohomological,
            Parity::Odd => cohomological + 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GradedModule {
    top: usize,
    dims: Vec<usize>,
    actions: BTreeMap<(u32, usize), SparseMatrix>,
    parity: Option<Parity>,
}

impl GradedModule {
    /// Builds a module known through internal degree `top`. Missing action
    /// matrices are taken to be zero; shapes and pairwise commutation of the
    /// actions are validated.
    pub fn new(
        top: usize,
        dims: Vec<usize>,
        mut actions: BTreeMap<(u32, usize), SparseMatrix>,
        parity: Option<Parity>,
    ) -> Result<Self> {
        if dims.len() != top + 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected {} degree dimensions, got {}",
                top + 1,
                dims.len()
            )));
        }
        if let Some(&(i, d)) = actions
            .keys()
            .find(|(i, d)| *i == 0 || d + 2 * *i as usize > top)
        {
            return Err(Error::InvalidArgument(format!(
                "action of e_{i} from degree {d} leaves the module range 0..={top}"
            )));
        }
        for i in 1..=(top / 2) as u32 {
            for d in 0..=top - 2 * i as usize {
                let (rows, cols) = (dims[d + 2 * i as usize], dims[d]);
                let m = actions
                    .entry((i, d))
                    .or_insert_with(|| SparseMatrix::zeros(rows, cols));
                if m.rows() != rows || m.cols() != cols {
                    return Err(Error::DimensionMismatch(format!(
                        "e_{i} action at degree {d} is {}x{}, expected {rows}x{cols}",
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
        let module = GradedModule {
            top,
            dims,
            actions,
            parity,
        };
        module.check_commutativity()?;
        Ok(module)
    }

    pub fn zero(top: usize) -> Self {
        GradedModule::new(top, vec![0; top + 1], BTreeMap::new(), None).expect("zero module")
    }

    /// One-dimensional module in `degree` on which every `e_i` acts by zero.
    pub fn trivial(degree: usize, top: usize, parity: Option<Parity>) -> Result<Self> {
        if degree > top {
            return Err(Error::DegreeOutOfBound { degree, bound: top });
        }
        let mut dims = vec![0; top + 1];
        dims[degree] = 1;
        GradedModule::new(top, dims, BTreeMap::new(), parity)
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn parity(&self) -> Option<Parity> {
        self.parity
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims.get(d).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Matrix of `e_i: M_d → M_{d+2i}`.
    pub fn action(&self, i: u32, d: usize) -> Result<&SparseMatrix> {
        self.actions.get(&(i, d)).ok_or(Error::DegreeOutOfBound {
            degree: d + 2 * i as usize,
            bound: self.top,
        })
    }

    pub fn generators(&self) -> impl Iterator<Item = u32> {
        1..=(self.top / 2) as u32
    }

    /// `e_i e_j = e_j e_i` as matrices wherever both composites are defined.
    pub fn check_commutativity(&self) -> Result<()> {
        let gens: Vec<u32> = self.generators().collect();
        let pairs: Vec<(u32, u32)> = gens
            .iter()
            .flat_map(|&i| gens.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
            .filter(|(i, j)| 2 * (i + j) as usize <= self.top)
            .collect();
        pairs.par_iter().try_for_each(|&(i, j)| {
            for d in 0..=self.top - 2 * (i + j) as usize {
                let ij = self.actions[&(i, d + 2 * j as usize)].mul(&self.actions[&(j, d)])?;
                let ji = self.actions[&(j, d + 2 * i as usize)].mul(&self.actions[&(i, d)])?;
                if ij != ji {
                    return Err(Error::NonCommutingActions { i, j, degree: d });
                }
            }
            Ok(())
        })
    }

    /// Block sum, truncated to the smaller of the two ranges.
    pub fn direct_sum(&self, other: &GradedModule) -> Result<GradedModule> {
        let top = self.top.min(other.top);
        let dims = (0..=top).map(|d| self.dim(d) + other.dim(d)).collect();
        let mut actions = BTreeMap::new();
        for ((i, d), a) in &self.actions {
            if d + 2 * *i as usize > top {
                continue;
            }
            let b = &other.actions[&(*i, *d)];
            let rows = a.rows() + b.rows();
            let cols = a.cols() + b.cols();
            let triplets = a.entries().map(|(r, c, v)| (r, c, v.clone())).chain(
                b.entries()
                    .map(|(r, c, v)| (r + a.rows(), c + a.cols(), v.clone())),
            );
            actions.insert((*i, *d), SparseMatrix::from_triplets(rows, cols, triplets));
        }
        let parity = if self.parity == other.parity {
            self.parity
        } else {
            None
        };
        GradedModule::new(top, dims, actions, parity)
    }
}

/// Basis bookkeeping for a free module: in degree `d` the basis is the list of
/// pairs `(generator g, monomial of degree d − deg g)`, generator-major.
#[derive(Clone, Debug)]
pub struct FreeLayout {
    generator_degrees: Vec<usize>,
    top: usize,
    offsets: Vec<Vec<usize>>,
}

impl FreeLayout {
    pub fn new(algebra: &GradedAlgebra, generator_degrees: &[usize]) -> Result<Self> {
        let top = algebra.bound().get();
        for &g in generator_degrees {
            algebra.bound().check(g)?;
        }
        let offsets = (0..=top)
            .map(|d| {
                let mut acc = 0;
                let mut offs = Vec::with_capacity(generator_degrees.len() + 1);
                for &g in generator_degrees {
                    offs.push(acc);
                    acc += d.checked_sub(g).map_or(0, |r| algebra.dim(r));
                }
                offs.push(acc);
                offs
            })
            .collect();
        Ok(FreeLayout {
            generator_degrees: generator_degrees.to_vec(),
            top,
            offsets,
        })
    }

    pub fn generator_degrees(&self) -> &[usize] {
        &self.generator_degrees
    }

    pub fn dim(&self, d: usize) -> usize {
        self.offsets.get(d).map_or(0, |o| *o.last().unwrap())
    }

    pub fn position(&self, algebra: &GradedAlgebra, generator: usize, m: &Monomial) -> usize {
        let d = self.generator_degrees[generator] + m.degree();
        self.offsets[d][generator] + algebra.index_of(m).expect("monomial within bound")
    }

    /// `(generator, monomial)` pairs spanning degree `d`, in basis order.
    pub fn basis(&self, algebra: &GradedAlgebra, d: usize) -> Vec<(usize, Monomial)> {
        self.generator_degrees
            .iter()
            .enumerate()
            .filter(|(_, &g)| g <= d)
            .flat_map(|(k, &g)| {
                algebra
                    .monomial_basis(d - g)
                    .unwrap_or(&[])
                    .iter()
                    .map(move |m| (k, m.clone()))
            })
            .collect()
    }

    pub fn top(&self) -> usize {
        self.top
    }
}

/// Free `A`-module on generators in the given internal degrees.
pub fn free_module(
    algebra: &GradedAlgebra,
    generator_degrees: &[usize],
    parity: Option<Parity>,
) -> Result<GradedModule> {
    let layout = FreeLayout::new(algebra, generator_degrees)?;
    let top = layout.top();
    let dims = (0..=top).map(|d| layout.dim(d)).collect();
    let mut actions = BTreeMap::new();
    for i in algebra.generators() {
        for d in 0..=top - 2 * i as usize {
            let target = d + 2 * i as usize;
            let triplets = layout
                .basis(algebra, d)
                .into_iter()
                .enumerate()
                .map(|(col, (g, m))| {
                    (
                        layout.position(algebra, g, &m.mul_generator(i)),
                        col,
                        rat(1),
                    )
                })
                .collect::<Vec<_>>();
            actions.insert(
                (i, d),
                SparseMatrix::from_triplets(layout.dim(target), layout.dim(d), triplets),
            );
        }
    }
    GradedModule::new(top, dims, actions, parity)
}

/// Degree-preserving-up-to-shift `A`-linear map given by one matrix per source degree.
#[derive(Clone, Debug)]
pub struct GradedModuleMap {
    source: Arc<GradedModule>,
    target: Arc<GradedModule>,
    shift: isize,
    matrices: Vec<SparseMatrix>,
}

impl GradedModuleMap {
    /// `matrices[d]` maps `source_d → target_{d+shift}` for every source
    /// degree whose image degree is within the target's range. Equivariance
    /// with every `e_i` action is verified.
    pub fn new(
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
        shift: isize,
        matrices: Vec<SparseMatrix>,
    ) -> Result<Self> {
        let top = map_top(&source, &target, shift);
        if matrices.len() != top.map_or(0, |t| t + 1) {
            return Err(Error::DimensionMismatch(format!(
                "expected a matrix for each source degree up to {top:?}, got {}",
                matrices.len()
            )));
        }
        for (d, m) in matrices.iter().enumerate() {
            let rows = shifted(d, shift).map_or(0, |t| target.dim(t));
            if m.rows() != rows || m.cols() != source.dim(d) {
                return Err(Error::DimensionMismatch(format!(
                    "map matrix at degree {d} is {}x{}, expected {rows}x{}",
                    m.rows(),
                    m.cols(),
                    source.dim(d)
                )));
            }
        }
        let map = GradedModuleMap {
            source,
            target,
            shift,
            matrices,
        };
        map.check_equivariance()?;
        Ok(map)
    }

    pub fn source(&self) -> &Arc<GradedModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedModule> {
        &self.target
    }

    pub fn shift(&self) -> isize {
        self.shift
    }

    /// Last source degree on which the map is defined.
    pub fn top(&self) -> Option<usize> {
        self.matrices.len().checked_sub(1)
    }

    /// Shift in cohomological degree, when both ends carry a parity.
    pub fn cohomological_shift(&self) -> Option<isize> {
        let src = self.source.parity()?;
        let tgt = self.target.parity()?;
        let offset = |p: Parity| match p {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        Some(self.shift - offset(tgt) + offset(src))
    }

    pub fn matrix(&self, d: usize) -> Option<&SparseMatrix> {
        self.matrices.get(d)
    }

    pub fn matrices(&self) -> &[SparseMatrix] {
        &self.matrices
    }

    fn check_equivariance(&self) -> Result<()> {
        let Some(top) = self.top() else {
            return Ok(());
        };
        for i in self.source.generators() {
            for d in 0..=top {
                let up = d + 2 * i as usize;
                if up > top {
                    break;
                }
                let lhs = match shifted(d, self.shift) {
                    Some(t) => self.target.action(i, t)?.mul(&self.matrices[d])?,
                    None => SparseMatrix::zeros(self.matrices[up].rows(), self.source.dim(d)),
                };
                let rhs = self.matrices[up].mul(self.source.action(i, d)?)?;
                if lhs != rhs {
                    return Err(Error::NotEquivariant {
                        generator: i,
                        degree: d,
                    });
                }
            }
        }
        Ok(())
    }
}

fn shifted(d: usize, shift: isize) -> Option<usize> {
    d.checked_add_signed(shift)
}

fn map_top(source: &GradedModule, target: &GradedModule, shift: isize) -> Option<usize> {
    let limit = target.top() as isize - shift;
    if limit < 0 {
        return None;
    }
    Some(source.top().min(limit as usize))
}

/// Kernel of `f` with its induced `e_i` actions, plus the inclusion into the source.
pub fn kernel_module(f: &GradedModuleMap) -> Result<(GradedModule, GradedModuleMap)> {
    let Some(top) = f.top() else {
        return Err(Error::InvalidArgument("map is defined in no degree".into()));
    };
    let source = f.source();
    let inclusions: Vec<SparseMatrix> = f.matrices[..=top]
        .par_iter()
        .enumerate()
        .map(|(d, m)| SparseMatrix::from_columns(source.dim(d), &linalg::kernel_basis(m)))
        .collect();
    let dims: Vec<usize> = inclusions.iter().map(SparseMatrix::cols).collect();

    let jobs: Vec<(u32, usize)> = (1..=(top / 2) as u32)
        .flat_map(|i| (0..=top - 2 * i as usize).map(move |d| (i, d)))
        .collect();
    let actions = jobs
        .par_iter()
        .map(|&(i, d)| {
            let up = d + 2 * i as usize;
            let pushed = source.action(i, d)?.mul(&inclusions[d])?;
            let columns: Vec<VectorQ> = (0..pushed.cols()).map(|c| pushed.column(c)).collect();
            let solved = linalg::solve_many(&inclusions[up], &columns)?
                .ok_or(Error::KernelActionUnsolvable { degree: d })?;
            Ok(((i, d), SparseMatrix::from_columns(dims[up], &solved)))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;

    let kernel = Arc::new(GradedModule::new(top, dims, actions, source.parity())?);
    let inclusion = GradedModuleMap::new(kernel.clone(), source.clone(), 0, inclusions)?;
    Ok((Arc::unwrap_or_clone(kernel), inclusion))
}

/// Minimal generator counts `dim M_d / Σ_i e_i M_{d−2i}` with lifted representatives.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinimalGenerators {
    /// Nonzero counts only.
    pub counts: BTreeMap<usize, usize>,
    pub representatives: BTreeMap<usize, Vec<VectorQ>>,
}

impl MinimalGenerators {
    pub fn count(&self, d: usize) -> usize {
        self.counts.get(&d).copied().unwrap_or(0)
    }
}

pub fn minimal_generators(m: &GradedModule, up_to: usize) -> Result<MinimalGenerators> {
    if up_to > m.top() {
        return Err(Error::DegreeOutOfBound {
            degree: up_to,
            bound: m.top(),
        });
    }
    let per_degree = (0..=up_to)
        .into_par_iter()
        .map(|d| indecomposables(m, d).map(|reps| (d, reps)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = MinimalGenerators::default();
    for (d, reps) in per_degree {
        if !reps.is_empty() {
            out.counts.insert(d, reps.len());
            out.representatives.insert(d, reps);
        }
    }
    Ok(out)
}

/// Unit vectors of `M_d` completing a basis of the decomposable part.
fn indecomposables(m: &GradedModule, d: usize) -> Result<Vec<VectorQ>> {
    let dim = m.dim(d);
    let mut span = Echelon::new(dim);
    for i in 1..=(d / 2) as u32 {
        let a = m.action(i, d - 2 * i as usize)?;
        for c in 0..a.cols() {
            span.insert(a.column(c));
        }
    }
    let mut reps = Vec::new();
    for k in 0..dim {
        if span.rank() == dim {
            break;
        }
        let e = VectorQ::unit(dim, k);
        if span.insert(e.clone()).is_some() {
            reps.push(e);
        }
    }
    Ok(reps)
}

/// Strictly increasing generator lists of length `j` with weight `Σ 2i ≤ d`.
pub fn wedge_lists(j: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(
        start: u32,
        remaining: usize,
        budget: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        let mut i = start;
        let r = remaining as u32;
        while (r * (2 * i + r - 1)) as usize <= budget {
            cur.push(i);
            rec(i + 1, remaining - 1, budget - 2 * i as usize, cur, out);
            cur.pop();
            i += 1;
        }
    }
    let mut out = Vec::new();
    rec(1, j, d, &mut Vec::new(), &mut out);
    out
}

/// `Λ^j E ⊗ M` in internal degree `d`: blocks `(J, offset)` in basis order.
struct KoszulTerm {
    blocks: Vec<(Vec<u32>, usize)>,
    dim: usize,
}

impl KoszulTerm {
    fn new(m: &GradedModule, j: usize, d: usize) -> Self {
        let mut dim = 0;
        let mut blocks = Vec::new();
        for wedge in wedge_lists(j, d) {
            let rest = d - wedge.iter().map(|&i| 2 * i as usize).sum::<usize>();
            blocks.push((wedge, dim));
            dim += m.dim(rest);
        }
        KoszulTerm { blocks, dim }
    }

    fn offset(&self, wedge: &[u32]) -> usize {
        self.blocks
            .iter()
            .find(|(w, _)| w == wedge)
            .map(|(_, o)| *o)
            .expect("wedge present in Koszul term")
    }
}

/// `dim (Λ^j E ⊗ M)_d`.
pub fn koszul_chain_dim(m: &GradedModule, j: usize, d: usize) -> usize {
    KoszulTerm::new(m, j, d).dim
}

/// Matrix of `∂(e_{i_1}∧...∧e_{i_j} ⊗ x) = Σ_k (−1)^{k+1} (... omit k ...) ⊗ e_{i_k} x`
/// from `(Λ^j E ⊗ M)_d` to `(Λ^{j−1} E ⊗ M)_d`.
pub fn koszul_differential(m: &GradedModule, j: usize, d: usize) -> Result<SparseMatrix> {
    if d > m.top() {
        return Err(Error::DegreeOutOfBound {
            degree: d,
            bound: m.top(),
        });
    }
    let source = KoszulTerm::new(m, j, d);
    if j == 0 {
        return Ok(SparseMatrix::zeros(0, source.dim));
    }
    let target = KoszulTerm::new(m, j - 1, d);
    let mut triplets: Vec<(usize, usize, Rational)> = Vec::new();
    for (wedge, col_offset) in &source.blocks {
        let rest = d - wedge.iter().map(|&i| 2 * i as usize).sum::<usize>();
        for (k, &i) in wedge.iter().enumerate() {
            let mut face = wedge.clone();
            face.remove(k);
            let row_offset = target.offset(&face);
            let sign = rat(if k % 2 == 0 { 1 } else { -1 });
            for (r, c, v) in m.action(i, rest)?.entries() {
                triplets.push((row_offset + r, col_offset + c, &sign * v));
            }
        }
    }
    Ok(SparseMatrix::from_triplets(
        target.dim, source.dim, triplets,
    ))
}

/// `dim Tor_j^A(Q, M)_d` as homology of the Koszul complex `Λ^• E ⊗ M`.
pub fn tor(m: &GradedModule, j: usize, d: usize) -> Result<usize> {
    let dim = koszul_chain_dim(m, j, d);
    let rank_out = linalg::rank(&koszul_differential(m, j, d)?);
    let rank_in = linalg::rank(&koszul_differential(m, j + 1, d)?);
    Ok(dim - rank_out - rank_in)
}

/// `Tor_j` dimensions in every internal degree up to `up_to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorResult {
    pub j: usize,
    pub dims: BTreeMap<usize, usize>,
}

pub fn tor_result(m: &GradedModule, j: usize, up_to: usize) -> Result<TorResult> {
    let dims = (0..=up_to)
        .into_par_iter()
        .map(|d| tor(m, j, d).map(|t| (d, t)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(TorResult { j, dims })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DegreeBound;

    fn algebra(bound: usize) -> GradedAlgebra {
        GradedAlgebra::new(DegreeBound::new(bound).unwrap())
    }

    fn identity_map(m: &Arc<GradedModule>) -> GradedModuleMap {
        let mats = (0..=m.top())
            .map(|d| SparseMatrix::identity(m.dim(d)))
            .collect();
        GradedModuleMap::new(m.clone(), m.clone(), 0, mats).unwrap()
    }

    fn zero_map(source: &Arc<GradedModule>, target: &Arc<GradedModule>) -> GradedModuleMap {
        let mats = (0..=source.top())
            .map(|d| SparseMatrix::zeros(target.dim(d), source.dim(d)))
            .collect();
        GradedModuleMap::new(source.clone(), target.clone(), 0, mats).unwrap()
    }

    #[test]
    fn free_module_examples() {
        let a = algebra(12);
        let m = free_module(&a, &[0], Some(Parity::Even)).unwrap();
        for d in 0..=12 {
            assert_eq!(m.dim(d), a.dim(d));
        }
        let z = free_module(&a, &[], None).unwrap();
        assert!(z.dims().iter().all(|&x| x == 0));
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let a = algebra(10);
        let m = Arc::new(free_module(&a, &[0, 4], None).unwrap());
        let (k, _) = kernel_module(&identity_map(&m)).unwrap();
        assert!(k.dims().iter().all(|&x| x == 0));

        let (k, incl) = kernel_module(&zero_map(&m, &m)).unwrap();
        assert_eq!(k.dims(), m.dims());
        assert_eq!(incl.shift(), 0);
        // induced actions agree with the source's
        for d in 0..=6 {
            let lhs = incl
                .matrix(d + 4)
                .unwrap()
                .mul(k.action(2, d).unwrap())
                .unwrap();
            let rhs = m
                .action(2, d)
                .unwrap()
                .mul(incl.matrix(d).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn non_equivariant_map_rejected() {
        let a = algebra(6);
        let m = Arc::new(free_module(&a, &[0], None).unwrap());
        // identity in degree 0 only: e_1 · 1 ↦ 0 but e_1 · f(1) = e_1
        let mats = (0..=6)
            .map(|d| {
                if d == 0 {
                    SparseMatrix::identity(1)
                } else {
                    SparseMatrix::zeros(m.dim(d), m.dim(d))
                }
            })
            .collect();
        let err = GradedModuleMap::new(m.clone(), m, 0, mats).unwrap_err();
        assert!(matches!(
            err,
            Error::NotEquivariant {
                generator: 1,
                degree: 0
            }
        ));
    }

    #[test]
    fn non_commuting_actions_rejected() {
        let mut actions = BTreeMap::new();
        // dims 1 in degrees 0, 2, 4, 6; e_1 acts as identity, e_2 as zero except 2 → 6
        for d in [0, 2, 4] {
            actions.insert((1, d), SparseMatrix::identity(1));
        }
        actions.insert((2, 2), SparseMatrix::identity(1));
        let dims = vec![1, 0, 1, 0, 1, 0, 1];
        let err = GradedModule::new(6, dims, actions, None).unwrap_err();
        assert!(matches!(err, Error::NonCommutingActions { .. }));
    }

    #[test]
    fn minimal_generators_examples() {
        let a = algebra(12);
        let m = free_module(&a, &[0], None).unwrap();
        let g = minimal_generators(&m, 12).unwrap();
        assert_eq!(g.counts, BTreeMap::from([(0, 1)]));

        let z = GradedModule::zero(8);
        assert!(minimal_generators(&z, 8).unwrap().counts.is_empty());

        let f = free_module(&a, &[2, 4, 4], None).unwrap();
        let g = minimal_generators(&f, 12).unwrap();
        assert_eq!(g.counts, BTreeMap::from([(2, 1), (4, 2)]));
    }

    #[test]
    fn tor_of_free_module_vanishes() {
        let a = algebra(12);
        let m = free_module(&a, &[0, 2], None).unwrap();
        for d in 0..=12 {
            for j in 1..=3 {
                assert_eq!(tor(&m, j, d).unwrap(), 0, "j={j} d={d}");
            }
        }
        assert_eq!(tor(&m, 0, 0).unwrap(), 1);
        assert_eq!(tor(&m, 0, 2).unwrap(), 1);
    }

    #[test]
    fn tor_of_trivial_module_counts_wedges() {
        let q = GradedModule::trivial(0, 12, Some(Parity::Even)).unwrap();
        assert_eq!(tor(&q, 2, 6).unwrap(), 1);
        assert_eq!(tor(&q, 0, 0).unwrap(), 1);
        // Λ^1 E in degree 12 is {e_6}; Λ^3 in degree 12 is {e_1∧e_2∧e_3}
        assert_eq!(tor(&q, 1, 12).unwrap(), 1);
        assert_eq!(tor(&q, 3, 12).unwrap(), 1);
    }

    #[test]
    fn koszul_differential_squares_to_zero() {
        let a = algebra(12);
        let m = free_module(&a, &[0, 2], None).unwrap();
        for d in 0..=12 {
            for j in 1..=3 {
                let dd = koszul_differential(&m, j, d)
                    .unwrap()
                    .mul(&koszul_differential(&m, j + 1, d).unwrap())
                    .unwrap();
                assert!(dd.is_zero());
            }
        }
    }

    #[test]
    fn wedge_list_counts() {
        assert_eq!(wedge_lists(0, 0), vec![Vec::<u32>::new()]);
        assert_eq!(wedge_lists(2, 6), vec![vec![1, 2]]);
        assert_eq!(wedge_lists(2, 10).len(), 4); // {1,2},{1,3},{1,4},{2,3}
        assert!(wedge_lists(3, 10).is_empty());
    }

    #[test]
    fn direct_sum_dims() {
        let a = algebra(8);
        let f = free_module(&a, &[2], Some(Parity::Odd)).unwrap();
        let q = GradedModule::trivial(0, 8, Some(Parity::Even)).unwrap();
        let s = q.direct_sum(&f).unwrap();
        assert_eq!(s.parity(), None);
        assert_eq!(s.dim(0), 1);
        assert_eq!(s.dim(2), 1);
        assert_eq!(s.dim(8), f.dim(8));
    }
}
