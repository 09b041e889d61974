//! First cohomology of a finitely presented group with coefficients in a
//! rational matrix representation, computed as `dim Z^1 − dim B^1`.
//!
//! Conventions: left action, cocycles satisfy `f(uv) = f(u) + u·f(v)`.
//! Words are lists of nonzero integers, `k` for the `k`-th generator
//! (1-based) and `-k` for its inverse.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, rat, Rational, SparseMatrix, VectorQ};

pub type Word = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    num_generators: usize,
    relators: Vec<Word>,
}

impl GroupPresentation {
    /// Validates letters and freely reduces every relator.
    pub fn new(num_generators: usize, relators: Vec<Word>) -> Result<Self> {
        let mut reduced = Vec::with_capacity(relators.len());
        for (k, word) in relators.into_iter().enumerate() {
            validate_word(num_generators, &word)
                .map_err(|e| Error::InvalidPresentation(format!("relator {k}: {e}")))?;
            reduced.push(free_reduce(&word));
        }
        Ok(GroupPresentation {
            num_generators,
            relators: reduced,
        })
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }
}

fn validate_word(n: usize, word: &[i32]) -> std::result::Result<(), String> {
    match word
        .iter()
        .find(|&&l| l == 0 || l.unsigned_abs() as usize > n)
    {
        Some(l) => Err(format!("letter {l} does not name one of {n} generators")),
        None => Ok(()),
    }
}

pub fn free_reduce(word: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// A representation by invertible rational matrices, one per generator.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    dimension: usize,
    images: Vec<SparseMatrix>,
    inverses: Vec<SparseMatrix>,
}

impl MatrixRep {
    /// Checks shapes, invertibility, and that every relator maps to the identity.
    pub fn new(
        pres: &GroupPresentation,
        dimension: usize,
        images: Vec<SparseMatrix>,
    ) -> Result<Self> {
        if images.len() != pres.num_generators {
            return Err(Error::InvalidPresentation(format!(
                "{} generator images for {} generators",
                images.len(),
                pres.num_generators
            )));
        }
        let mut inverses = Vec::with_capacity(images.len());
        for (k, m) in images.iter().enumerate() {
            if m.rows() != dimension || m.cols() != dimension {
                return Err(Error::DimensionMismatch(format!(
                    "image of generator {} is {}x{}, expected {dimension}x{dimension}",
                    k + 1,
                    m.rows(),
                    m.cols()
                )));
            }
            inverses.push(inverse(m).ok_or(Error::SingularImage(k + 1))?);
        }
        let rep = MatrixRep {
            dimension,
            images,
            inverses,
        };
        for (k, r) in pres.relators.iter().enumerate() {
            if rep.evaluate_word(r)? != SparseMatrix::identity(dimension) {
                return Err(Error::RelatorNotIdentity(k));
            }
        }
        Ok(rep)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_generators(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, k: usize) -> &SparseMatrix {
        &self.images[k]
    }

    fn letter(&self, l: i32) -> Result<&SparseMatrix> {
        let k = l.unsigned_abs() as usize;
        if l == 0 || k > self.images.len() {
            return Err(Error::InvalidGenerator(l as i64));
        }
        Ok(if l > 0 {
            &self.images[k - 1]
        } else {
            &self.inverses[k - 1]
        })
    }

    /// Product of the letter images in word order.
    pub fn evaluate_word(&self, w: &[i32]) -> Result<SparseMatrix> {
        let mut acc = SparseMatrix::identity(self.dimension);
        for &l in w {
            acc = acc.mul(self.letter(l)?)?;
        }
        Ok(acc)
    }

    /// `g ρ g^{-1}` for an invertible change of basis `g`.
    pub fn conjugate(&self, pres: &GroupPresentation, g: &SparseMatrix) -> Result<MatrixRep> {
        let g_inv = inverse(g).ok_or(Error::SingularImage(0))?;
        let images = self
            .images
            .iter()
            .map(|m| g.mul(m)?.mul(&g_inv))
            .collect::<Result<Vec<_>>>()?;
        MatrixRep::new(pres, self.dimension, images)
    }
}

fn inverse(m: &SparseMatrix) -> Option<SparseMatrix> {
    let n = m.rows();
    let units: Vec<VectorQ> = (0..n).map(|i| VectorQ::unit(n, i)).collect();
    let columns = linalg::solve_many(m, &units).ok()??;
    Some(SparseMatrix::from_columns(n, &columns))
}

/// Linear conditions on `(f(x_1), ..., f(x_n))` stating that every relator's
/// cocycle value vanishes. Expanding `w = y_1 ... y_k` left to right gives
/// `f(w) = Σ_j ρ(y_1 ... y_{j−1}) c_j` with `c_j = f(x_i)` for `y_j = x_i` and
/// `c_j = −ρ(x_i)^{-1} f(x_i)` for `y_j = x_i^{-1}`.
pub fn relator_conditions(pres: &GroupPresentation, rep: &MatrixRep) -> Result<SparseMatrix> {
    let k = rep.dimension;
    let n = pres.num_generators;
    let mut triplets = Vec::new();
    for (r, word) in pres.relators.iter().enumerate() {
        let mut prefix = SparseMatrix::identity(k);
        for &l in word {
            let i = l.unsigned_abs() as usize - 1;
            let block = if l > 0 {
                prefix.clone()
            } else {
                prefix.mul(&rep.inverses[i])?.scaled(&rat(-1))
            };
            triplets.extend(
                block
                    .entries()
                    .map(|(a, b, v)| (r * k + a, i * k + b, v.clone())),
            );
            prefix = prefix.mul(rep.letter(l)?)?;
        }
    }
    Ok(SparseMatrix::from_triplets(
        pres.relators.len() * k,
        n * k,
        triplets,
    ))
}

/// Basis of `Z^1`, each vector the concatenation `(f(x_1), ..., f(x_n))`.
pub fn cocycle_space(pres: &GroupPresentation, rep: &MatrixRep) -> Result<Vec<VectorQ>> {
    check_compatible(pres, rep)?;
    Ok(linalg::kernel_basis(&relator_conditions(pres, rep)?))
}

/// The coboundary map `v ↦ ((ρ(x_i) − 1) v)_i` as an `(n·k) × k` matrix.
pub fn coboundary_matrix(rep: &MatrixRep) -> SparseMatrix {
    let k = rep.dimension;
    let minus_one = rat(-1);
    let triplets = rep.images.iter().enumerate().flat_map(|(i, m)| {
        let diff = m
            .add(&SparseMatrix::identity(k).scaled(&minus_one))
            .expect("square image");
        diff.entries()
            .map(|(a, b, v)| (i * k + a, b, v.clone()))
            .collect::<Vec<(usize, usize, Rational)>>()
    });
    SparseMatrix::from_triplets(rep.images.len() * k, k, triplets)
}

/// Basis of `B^1`.
pub fn coboundary_space(rep: &MatrixRep) -> Vec<VectorQ> {
    linalg::column_space_basis(&coboundary_matrix(rep))
}

pub fn h1_dimension(pres: &GroupPresentation, rep: &MatrixRep) -> Result<usize> {
    Ok(h1_certificate(pres, rep)?.dimension)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Certificate {
    pub dimension: usize,
    pub cocycles: Vec<VectorQ>,
    pub coboundaries: Vec<VectorQ>,
}

pub fn h1_certificate(pres: &GroupPresentation, rep: &MatrixRep) -> Result<H1Certificate> {
    let cocycles = cocycle_space(pres, rep)?;
    let coboundaries = coboundary_space(rep);
    Ok(H1Certificate {
        dimension: cocycles.len() - coboundaries.len(),
        cocycles,
        coboundaries,
    })
}

fn check_compatible(pres: &GroupPresentation, rep: &MatrixRep) -> Result<()> {
    if pres.num_generators != rep.num_generators() {
        return Err(Error::InvalidPresentation(format!(
            "presentation has {} generators, representation {}",
            pres.num_generators,
            rep.num_generators()
        )));
    }
    Ok(())
}

/// JSON input: generator count, relators as signed 1-based index arrays, one
/// integer matrix per generator. `dimension` may be omitted when there is at
/// least one matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub generators: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default)]
    pub relators: Vec<Word>,
    pub matrices: Vec<Vec<Vec<i64>>>,
}

impl PresentationFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidPresentation(e.to_string()))
    }

    pub fn build(&self) -> Result<(GroupPresentation, MatrixRep)> {
        let pres = GroupPresentation::new(self.generators, self.relators.clone())?;
        let dimension = match (self.dimension, self.matrices.first()) {
            (Some(k), _) => k,
            (None, Some(m)) => m.len(),
            (None, None) => 0,
        };
        let images = self
            .matrices
            .iter()
            .enumerate()
            .map(|(g, rows)| {
                if rows.len() != dimension || rows.iter().any(|r| r.len() != dimension) {
                    return Err(Error::DimensionMismatch(format!(
                        "matrix for generator {} is not {dimension}x{dimension}",
                        g + 1
                    )));
                }
                let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
                Ok(if dimension == 0 {
                    SparseMatrix::zeros(0, 0)
                } else {
                    SparseMatrix::from_ints(&refs)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let rep = MatrixRep::new(&pres, dimension, images)?;
        Ok((pres, rep))
    }
}

/// The braid group on three strands acting on `Z^2` through
/// `σ_1 ↦ (1 1; 0 1)`, `σ_2 ↦ (1 0; −1 1)`.
pub fn braid_group_b3() -> (GroupPresentation, MatrixRep) {
    let pres = GroupPresentation::new(2, vec![vec![1, 2, 1, -2, -1, -2]]).expect("valid");
    let images = vec![
        SparseMatrix::from_ints(&[&[1, 1], &[0, 1]]),
        SparseMatrix::from_ints(&[&[1, 0], &[-1, 1]]),
    ];
    let rep = MatrixRep::new(&pres, 2, images).expect("braid relation holds");
    (pres, rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial_rep(pres: &GroupPresentation, k: usize) -> MatrixRep {
        MatrixRep::new(
            pres,
            k,
            vec![SparseMatrix::identity(k); pres.num_generators()],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_word_examples() {
        let (_, rep) = braid_group_b3();
        assert_eq!(rep.evaluate_word(&[]).unwrap(), SparseMatrix::identity(2));
        assert_eq!(
            rep.evaluate_word(&[1]).unwrap(),
            SparseMatrix::from_ints(&[&[1, 1], &[0, 1]])
        );
        assert_eq!(
            rep.evaluate_word(&[1, 2, 1, -2, -1, -2]).unwrap(),
            SparseMatrix::identity(2)
        );
    }

    #[test]
    fn cocycle_examples() {
        let free2 = GroupPresentation::new(2, vec![]).unwrap();
        assert_eq!(
            cocycle_space(&free2, &trivial_rep(&free2, 2))
                .unwrap()
                .len(),
            4
        );

        let (pres, rep) = braid_group_b3();
        let z1 = cocycle_space(&pres, &rep).unwrap();
        assert_eq!(z1.len(), 2);
        // a_2 = b_1 = 0 on every cocycle
        for v in &z1 {
            assert_eq!(v.get(1), rat(0));
            assert_eq!(v.get(2), rat(0));
        }
    }

    #[test]
    fn coboundary_examples() {
        let free2 = GroupPresentation::new(2, vec![]).unwrap();
        assert!(coboundary_space(&trivial_rep(&free2, 2)).is_empty());
        let (_, rep) = braid_group_b3();
        assert_eq!(coboundary_space(&rep).len(), 2);
        assert!(coboundary_space(&trivial_rep(&free2, 0)).is_empty());
    }

    #[test]
    fn h1_examples() {
        let (pres, rep) = braid_group_b3();
        assert_eq!(h1_dimension(&pres, &rep).unwrap(), 0);

        let trivial_group = GroupPresentation::new(0, vec![]).unwrap();
        let rep0 = MatrixRep::new(&trivial_group, 0, vec![]).unwrap();
        assert_eq!(h1_dimension(&trivial_group, &rep0).unwrap(), 0);

        let z = GroupPresentation::new(1, vec![]).unwrap();
        assert_eq!(h1_dimension(&z, &trivial_rep(&z, 1)).unwrap(), 1);
    }

    #[test]
    fn bad_relator_rejected() {
        let pres = GroupPresentation::new(2, vec![vec![1, 2, -1, -2]]).unwrap();
        let (_, b3) = braid_group_b3();
        let images = vec![b3.image(0).clone(), b3.image(1).clone()];
        let err = MatrixRep::new(&pres, 2, images).unwrap_err();
        assert_eq!(err, Error::RelatorNotIdentity(0));
        assert_eq!(err.to_string(), "relator 0 does not evaluate to identity");
    }

    #[test]
    fn singular_and_invalid_inputs() {
        let pres = GroupPresentation::new(1, vec![]).unwrap();
        let err = MatrixRep::new(&pres, 1, vec![SparseMatrix::zeros(1, 1)]).unwrap_err();
        assert_eq!(err, Error::SingularImage(1));
        assert!(GroupPresentation::new(1, vec![vec![2]]).is_err());
        assert!(GroupPresentation::new(1, vec![vec![0]]).is_err());
    }

    #[test]
    fn free_reduction() {
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
        let p = GroupPresentation::new(2, vec![vec![1, -1, 2]]).unwrap();
        assert_eq!(p.relators(), &[vec![2]]);
    }

    #[test]
    fn json_round_trip_b3() {
        let text = r#"{"generators": 2, "relators": [[1, 2, 1, -2, -1, -2]],
                       "matrices": [[[1, 1], [0, 1]], [[1, 0], [-1, 1]]]}"#;
        let (pres, rep) = PresentationFile::from_json(text).unwrap().build().unwrap();
        assert_eq!(h1_dimension(&pres, &rep).unwrap(), 0);
        assert!(PresentationFile::from_json("{\"generators\": 1}").is_err());
    }
}
