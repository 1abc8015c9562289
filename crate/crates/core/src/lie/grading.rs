use num_traits::{Signed, ToPrimitive, Zero};

use super::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{span_rank, Matrix, Vector};
use crate::rational::{frac, Rat};

/// Eigenspace decomposition `g = ⊕ g_j` of `ad x`. Degrees are stored doubled
/// so that half-integers stay integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDecomposition {
    /// Doubled eigenvalues `2j`, ascending, only those with `g_j != 0`.
    pub degrees2: Vec<i64>,
    pub bases: Vec<Vec<Vector>>,
}

impl GradedDecomposition {
    pub fn eigenvalues(&self) -> Vec<Rat> {
        self.degrees2.iter().map(|&d| frac(d, 2)).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// Basis of `g_{deg2/2}`; empty if that eigenvalue does not occur.
    pub fn space(&self, deg2: i64) -> &[Vector] {
        match self.degrees2.binary_search(&deg2) {
            Ok(i) => &self.bases[i],
            Err(_) => &[],
        }
    }

    /// Doubled degree of a homogeneous nonzero vector.
    pub fn degree_of(&self, v: &[Rat]) -> Option<i64> {
        if v.iter().all(Zero::is_zero) {
            return None;
        }
        let n = v.len();
        self.degrees2.iter().zip(&self.bases).find_map(|(&d, basis)| {
            let mut cols = basis.clone();
            cols.push(v.to_vec());
            (span_rank(n, &cols) == basis.len()).then_some(d)
        })
    }

    pub fn max_degree2(&self) -> i64 {
        self.degrees2.last().copied().unwrap_or(0)
    }
}

/// Decomposes `g` under `ad x`, trying the half-integer candidates allowed by
/// a row-sum bound on `ad x`.
pub fn ad_grading(alg: &LieAlgebra, x: &[Rat]) -> Result<GradedDecomposition> {
    let n = alg.dim();
    let ad = alg.ad(x);
    let mut bound = Rat::zero();
    for i in 0..n {
        let row = crate::rational::sum(ad.row(i).iter().map(Signed::abs));
        if row > bound {
            bound = row;
        }
    }
    let k_max = (bound * Rat::from(2))
        .floor()
        .to_i64()
        .ok_or_else(|| Error::NotAGoodGrading("spectral bound overflow".into()))?;
    let mut degrees2 = Vec::new();
    let mut bases = Vec::new();
    let mut total = 0;
    for k in -k_max..=k_max {
        let shifted = ad.sub(&scalar(n, &frac(k, 2)));
        let basis = shifted.nullspace();
        if !basis.is_empty() {
            total += basis.len();
            degrees2.push(k);
            bases.push(basis);
        }
    }
    if total != n {
        return Err(Error::NotAGoodGrading(format!(
            "half-integer eigenspaces of ad x span {total} of {n} dimensions"
        )));
    }
    Ok(GradedDecomposition { degrees2, bases })
}

/// Basis of the centralizer `ker ad a`.
pub fn centralizer(alg: &LieAlgebra, a: &[Rat]) -> Vec<Vector> {
    alg.ad(a).nullspace()
}

pub(crate) fn scalar(n: usize, c: &Rat) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = c.clone();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_sl_n, triple_from_partition};
    use crate::rational::rat;

    fn grading_of(n: usize, parts: &[usize]) -> GradedDecomposition {
        let g = build_sl_n(n).unwrap();
        let t = triple_from_partition(&g, parts).unwrap();
        ad_grading(&g, &t.x).unwrap()
    }

    #[test]
    fn sl2_principal() {
        let gr = grading_of(2, &[2]);
        assert_eq!(gr.degrees2, vec![-2, 0, 2]);
        assert_eq!(gr.dims(), vec![1, 1, 1]);
    }

    #[test]
    fn sl3_principal_and_minimal() {
        let gr = grading_of(3, &[3]);
        assert_eq!(gr.eigenvalues(), vec![rat(-2), rat(-1), rat(0), rat(1), rat(2)]);
        assert_eq!(gr.dims(), vec![1, 2, 2, 2, 1]);
        let gr = grading_of(3, &[2, 1]);
        assert_eq!(gr.degrees2, vec![-2, -1, 0, 1, 2]);
        assert_eq!(gr.dims(), vec![1, 2, 2, 2, 1]);
    }

    #[test]
    fn eigenvectors_are_exact() {
        let g = build_sl_n(4).unwrap();
        let t = triple_from_partition(&g, &[3, 1]).unwrap();
        let gr = ad_grading(&g, &t.x).unwrap();
        for (d, basis) in gr.degrees2.iter().zip(&gr.bases) {
            for v in basis {
                let lhs = g.bracket(&t.x, v);
                let rhs: Vector = v.iter().map(|c| c * frac(*d, 2)).collect();
                assert_eq!(lhs, rhs);
                assert_eq!(gr.degree_of(v), Some(*d));
            }
        }
    }

    #[test]
    fn non_half_integer_spectrum_is_rejected() {
        let g = build_sl_n(2).unwrap();
        // x = h/3 has eigenvalues +-2/3
        let x = vec![rat(0), frac(1, 3), rat(0)];
        assert!(matches!(ad_grading(&g, &x), Err(Error::NotAGoodGrading(_))));
    }

    #[test]
    fn centralizers() {
        let g = build_sl_n(2).unwrap();
        assert_eq!(centralizer(&g, &g.basis_vector(2)).len(), 1);
        assert_eq!(centralizer(&g, &g.zero()).len(), 3);
        let g3 = build_sl_n(3).unwrap();
        let t = triple_from_partition(&g3, &[3]).unwrap();
        let gf = centralizer(&g3, &t.f);
        assert_eq!(gf.len(), 2);
        let gr = ad_grading(&g3, &t.x).unwrap();
        let mut degs: Vec<i64> = gf.iter().map(|v| gr.degree_of(v).unwrap()).collect();
        degs.sort();
        assert_eq!(degs, vec![-4, -2]);
    }
}
