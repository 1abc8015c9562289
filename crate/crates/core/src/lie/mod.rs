//! Finite-dimensional Lie algebras given by exact structure constants, with
//! sl2-triples, ad x gradings and the Slodowy-slice bases built on top.

mod frame;
mod grading;
mod triple;

pub use frame::{build_polarization, LagrangianChoice, Polarization, SlodowyFrame};
pub use grading::{ad_grading, centralizer, GradedDecomposition};
pub use triple::{nilpotency_index, triple_from_partition, Sl2Triple};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::rational::{fmt_rat, parse_rat, Rat};

/// A Lie algebra with basis `a_0..a_{dim-1}`, brackets
/// `[a_i, a_j] = sum_k c[i][j][k] a_k` and an invariant form `(a_i|a_j) = gram[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    labels: Vec<String>,
    structure: Vec<Rat>,
    gram: Matrix,
    /// Matrices of the basis in a faithful representation, when one is known
    /// (the defining representation for sl_n).
    rep: Option<Vec<Matrix>>,
}

impl LieAlgebra {
    /// Builds and validates an algebra from dense structure constants.
    pub fn new(labels: Vec<String>, structure: Vec<Rat>, gram: Matrix) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidDimension("empty basis".into()));
        }
        if structure.len() != dim * dim * dim {
            return Err(Error::InvalidAlgebra(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                structure.len()
            )));
        }
        if gram.rows() != dim || gram.cols() != dim {
            return Err(Error::InvalidAlgebra("gram matrix has the wrong shape".into()));
        }
        let alg = LieAlgebra {
            dim,
            labels,
            structure,
            gram,
            rep: None,
        };
        alg.validate()?;
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Rank n if this algebra carries the defining representation of sl_n.
    pub fn matrix_size(&self) -> Option<usize> {
        self.rep.as_ref().and_then(|r| r.first()).map(Matrix::rows)
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    /// Coordinates of `[a_i, a_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Rat] {
        let start = (i * self.dim + j) * self.dim;
        &self.structure[start..start + self.dim]
    }

    pub fn zero(&self) -> Vector {
        vec![Rat::zero(); self.dim]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        crate::linalg::unit_vec(self.dim, i)
    }

    pub fn bracket(&self, a: &[Rat], b: &[Rat]) -> Vector {
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let coef = ai * bj;
                for (k, c) in self.basis_bracket(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &coef * c;
                    }
                }
            }
        }
        out
    }

    pub fn form(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let g = &self.gram[(i, j)];
                if !bj.is_zero() && !g.is_zero() {
                    acc += ai * bj * g;
                }
            }
        }
        acc
    }

    /// Matrix of `ad a`; column `j` holds `[a, a_j]`.
    pub fn ad(&self, a: &[Rat]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.bracket(a, &self.basis_vector(j))).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    /// Checks antisymmetry, Jacobi, symmetry/invariance and nondegeneracy of the form.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.c(i, j, k) != &-self.c(j, i, k) {
                        return Err(Error::InvalidAlgebra(format!("antisymmetry fails at ({i},{j},{k})")));
                    }
                }
                if self.gram[(i, j)] != self.gram[(j, i)] {
                    return Err(Error::InvalidAlgebra(format!("gram not symmetric at ({i},{j})")));
                }
            }
        }
        for i in 0..n {
            let ei = self.basis_vector(i);
            for j in 0..n {
                let ej = self.basis_vector(j);
                for k in 0..n {
                    let ek = self.basis_vector(k);
                    // [a_i,[a_j,a_k]] + [a_j,[a_k,a_i]] + [a_k,[a_i,a_j]] = 0
                    let t1 = self.bracket(&ei, self.basis_bracket(j, k));
                    let t2 = self.bracket(&ej, self.basis_bracket(k, i));
                    let t3 = self.bracket(&ek, self.basis_bracket(i, j));
                    if t1.iter().zip(&t2).zip(&t3).any(|((a, b), c)| !(a + b + c).is_zero()) {
                        return Err(Error::InvalidAlgebra(format!("Jacobi identity fails at ({i},{j},{k})")));
                    }
                    let lhs = self.form(self.basis_bracket(i, j), &ek);
                    let rhs = self.form(&ei, self.basis_bracket(j, k));
                    if lhs != rhs {
                        return Err(Error::InvalidAlgebra(format!("form not invariant at ({i},{j},{k})")));
                    }
                }
            }
        }
        if self.gram.determinant().is_zero() {
            return Err(Error::InvalidAlgebra("invariant form is degenerate".into()));
        }
        Ok(())
    }

    /// The same algebra expressed in a new basis (columns are old coordinates).
    pub fn change_basis(&self, basis: &[Vector], labels: Vec<String>) -> Result<LieAlgebra> {
        let n = self.dim;
        if basis.len() != n || labels.len() != n {
            return Err(Error::Shape(format!("need {n} basis vectors")));
        }
        let b = Matrix::from_columns(n, basis);
        let binv = b
            .inverse()
            .ok_or_else(|| Error::Shape("new basis is not linearly independent".into()))?;
        let mut structure = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let br = self.bracket(&basis[i], &basis[j]);
                structure.extend(binv.apply(&br));
            }
        }
        let gram = b.transpose().mul(&self.gram).mul(&b);
        let rep = self
            .rep
            .as_ref()
            .map(|mats| basis.iter().map(|v| combine_matrices(mats, v)).collect::<Vec<_>>());
        Ok(LieAlgebra {
            dim: n,
            labels,
            structure,
            gram,
            rep,
        })
    }

    /// Image of `a` in the stored faithful representation.
    pub fn to_matrix(&self, a: &[Rat]) -> Option<Matrix> {
        self.rep.as_ref().map(|mats| combine_matrices(mats, a))
    }

    /// Inverse of [`to_matrix`](Self::to_matrix).
    pub fn from_matrix(&self, m: &Matrix) -> Option<Vector> {
        let mats = self.rep.as_ref()?;
        let size = m.rows() * m.cols();
        let cols: Vec<Vector> = mats
            .iter()
            .map(|b| (0..b.rows()).flat_map(|i| b.row(i).to_vec()).collect())
            .collect();
        let target: Vector = (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect();
        Matrix::from_columns(size, &cols).solve(&target)
    }

    /// Matrix used for semisimplicity tests: the stored representation, or ad.
    pub fn semisimplicity_matrix(&self, a: &[Rat]) -> Matrix {
        self.to_matrix(a).unwrap_or_else(|| self.ad(a))
    }

    pub fn to_file(&self) -> AlgebraFile {
        let n = self.dim;
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        brackets.push((i, j, k, RatRepr::Text(fmt_rat(c))));
                    }
                }
            }
        }
        AlgebraFile {
            dim: n,
            labels: self.labels.clone(),
            brackets,
            gram: (0..n)
                .map(|i| (0..n).map(|j| RatRepr::Text(fmt_rat(&self.gram[(i, j)]))).collect())
                .collect(),
        }
    }

    pub fn from_file(file: &AlgebraFile) -> Result<Self> {
        let n = file.dim;
        if n == 0 {
            return Err(Error::InvalidDimension("dim must be positive".into()));
        }
        let labels = if file.labels.is_empty() {
            (0..n).map(|i| format!("a{i}")).collect()
        } else if file.labels.len() == n {
            file.labels.clone()
        } else {
            return Err(Error::Shape(format!("expected {n} labels")));
        };
        let mut structure = vec![Rat::zero(); n * n * n];
        let mut given = vec![false; n * n * n];
        for (i, j, k, v) in &file.brackets {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::Shape(format!("bracket index out of range: [{i},{j},{k}]")));
            }
            let idx = (i * n + j) * n + k;
            structure[idx] = v.to_rat()?;
            given[idx] = true;
        }
        // Entries listed only once are completed by antisymmetry.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let idx = (i * n + j) * n + k;
                    let mirror = (j * n + i) * n + k;
                    if given[idx] && !given[mirror] {
                        structure[mirror] = -structure[idx].clone();
                    }
                }
            }
        }
        if file.gram.len() != n || file.gram.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("gram must be dim x dim".into()));
        }
        let rows = file
            .gram
            .iter()
            .map(|r| r.iter().map(RatRepr::to_rat).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        LieAlgebra::new(labels, structure, Matrix::from_rows(&rows))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: AlgebraFile = serde_json::from_str(&text)?;
        Self::from_file(&file)
    }

    /// Human-readable name of a vector: a basis label when it is one,
    /// otherwise a short linear combination.
    pub fn describe(&self, v: &[Rat]) -> String {
        let nz: Vec<usize> = (0..self.dim).filter(|&i| !v[i].is_zero()).collect();
        if nz.is_empty() {
            return "0".into();
        }
        if nz.len() == 1 && v[nz[0]].is_one() {
            return self.labels[nz[0]].clone();
        }
        let mut out = String::new();
        for (t, &i) in nz.iter().enumerate() {
            let c = &v[i];
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if t == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&fmt_rat(&mag));
                out.push('*');
            }
            out.push_str(&self.labels[i]);
        }
        out
    }
}

fn combine_matrices(mats: &[Matrix], coeffs: &[Rat]) -> Matrix {
    let (r, c) = (mats[0].rows(), mats[0].cols());
    let mut out = Matrix::zeros(r, c);
    for (m, a) in mats.iter().zip(coeffs) {
        if a.is_zero() {
            continue;
        }
        for i in 0..r {
            for j in 0..c {
                if !m[(i, j)].is_zero() {
                    out[(i, j)] += a * &m[(i, j)];
                }
            }
        }
    }
    out
}

/// A rational as it may appear in JSON: integer literal or `"num/den"` text.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum RatRepr {
    Int(i64),
    Text(String),
}

impl RatRepr {
    pub fn to_rat(&self) -> Result<Rat> {
        match self {
            RatRepr::Int(i) => Ok(crate::rational::rat(*i)),
            RatRepr::Text(s) => parse_rat(s),
        }
    }
}

/// On-disk structure-constants format (indices are 0-based).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    pub brackets: Vec<(usize, usize, usize, RatRepr)>,
    pub gram: Vec<Vec<RatRepr>>,
}

/// sl_n with basis `E_ij (i<j)`, `H_k = E_kk - E_{k+1,k+1}`, `E_ji (i<j)` and
/// the trace form `(a|b) = tr(ab)`. For n = 2 the basis is labelled `e, h, f`.
pub fn build_sl_n(n: usize) -> Result<LieAlgebra> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!("sl_n needs n >= 2, got {n}")));
    }
    let elem = |i: usize, j: usize| {
        let mut m = Matrix::zeros(n, n);
        m[(i, j)] = Rat::one();
        m
    };
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            mats.push(elem(i, j));
            labels.push(format!("E{}{}", i + 1, j + 1));
        }
    }
    for k in 0..n - 1 {
        let mut m = Matrix::zeros(n, n);
        m[(k, k)] = Rat::one();
        m[(k + 1, k + 1)] = -Rat::one();
        mats.push(m);
        labels.push(format!("H{}", k + 1));
    }
    for i in 0..n {
        for j in i + 1..n {
            mats.push(elem(j, i));
            labels.push(format!("E{}{}", j + 1, i + 1));
        }
    }
    if n == 2 {
        labels = vec!["e".into(), "h".into(), "f".into()];
    }
    let dim = mats.len();
    let coords = |m: &Matrix| -> Vector { sl_coordinates(n, m) };
    let mut structure = Vec::with_capacity(dim * dim * dim);
    for a in &mats {
        for b in &mats {
            let comm = a.mul(b).sub(&b.mul(a));
            structure.extend(coords(&comm));
        }
    }
    let mut gram = Matrix::zeros(dim, dim);
    for (i, a) in mats.iter().enumerate() {
        for (j, b) in mats.iter().enumerate() {
            let p = a.mul(b);
            let mut tr = Rat::zero();
            for k in 0..n {
                tr += &p[(k, k)];
            }
            gram[(i, j)] = tr;
        }
    }
    let mut alg = LieAlgebra::new(labels, structure, gram)?;
    alg.rep = Some(mats);
    Ok(alg)
}

/// Coordinates of a traceless n x n matrix in the [`build_sl_n`] basis.
fn sl_coordinates(n: usize, m: &Matrix) -> Vector {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            v.push(m[(i, j)].clone());
        }
    }
    let mut running = Rat::zero();
    for k in 0..n - 1 {
        running += &m[(k, k)];
        v.push(running.clone());
    }
    for i in 0..n {
        for j in i + 1..n {
            v.push(m[(j, i)].clone());
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn sl2_relations() {
        let g = build_sl_n(2).unwrap();
        assert_eq!(g.dim(), 3);
        let (e, h, f) = (g.basis_vector(0), g.basis_vector(1), g.basis_vector(2));
        assert_eq!(g.bracket(&e, &f), h);
        assert_eq!(g.bracket(&h, &e), vec![rat(2), rat(0), rat(0)]);
        assert_eq!(g.form(&e, &f), rat(1));
        assert_eq!(g.form(&h, &h), rat(2));
        // ([e,f]|h) = (e|[f,h]) = 2
        assert_eq!(g.form(&g.bracket(&e, &f), &h), rat(2));
        assert_eq!(g.form(&e, &g.bracket(&f, &h)), rat(2));
    }

    #[test]
    fn sl3_is_nondegenerate() {
        let g = build_sl_n(3).unwrap();
        assert_eq!(g.dim(), 8);
        assert!(!g.gram().determinant().is_zero());
    }

    #[test]
    fn sl_n_rejects_small_n() {
        assert!(matches!(build_sl_n(1), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn matrix_roundtrip() {
        let g = build_sl_n(3).unwrap();
        let v: Vector = (0..8).map(|i| rat(i as i64 - 3)).collect();
        let m = g.to_matrix(&v).unwrap();
        assert_eq!(g.from_matrix(&m).unwrap(), v);
    }

    #[test]
    fn file_roundtrip_and_antisymmetric_completion() {
        let g = build_sl_n(2).unwrap();
        let back = LieAlgebra::from_file(&g.to_file()).unwrap();
        assert_eq!(back.structure, g.structure);
        // only one orientation of each bracket listed
        let text = r#"{"dim":3,"labels":["e","h","f"],
            "brackets":[[0,2,1,"1"],[1,0,0,2],[1,2,2,"-2"]],
            "gram":[[0,0,1],[0,2,0],[1,0,0]]}"#;
        let file: AlgebraFile = serde_json::from_str(text).unwrap();
        let parsed = LieAlgebra::from_file(&file).unwrap();
        assert_eq!(parsed.structure, g.structure);
    }

    #[test]
    fn invalid_files_are_rejected() {
        let bad_jacobi = r#"{"dim":3,"brackets":[[0,1,1,"1"],[1,2,0,"1"]],
            "gram":[[1,0,0],[0,1,0],[0,0,1]]}"#;
        let file: AlgebraFile = serde_json::from_str(bad_jacobi).unwrap();
        assert!(LieAlgebra::from_file(&file).is_err());
        let degenerate = r#"{"dim":1,"brackets":[],"gram":[[0]]}"#;
        let file: AlgebraFile = serde_json::from_str(degenerate).unwrap();
        assert!(matches!(LieAlgebra::from_file(&file), Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn change_basis_preserves_structure() {
        let g = build_sl_n(2).unwrap();
        let basis = vec![
            vec![rat(0), rat(0), rat(1)],
            vec![rat(0), crate::rational::frac(1, 2), rat(0)],
            vec![rat(1), rat(0), rat(0)],
        ];
        let h = g
            .change_basis(&basis, vec!["f".into(), "x".into(), "e".into()])
            .unwrap();
        h.validate().unwrap();
        // [x, f] = -f
        assert_eq!(h.basis_bracket(1, 0), &[rat(-1), rat(0), rat(0)]);
        assert_eq!(h.gram()[(1, 1)], crate::rational::frac(1, 2));
    }
}
