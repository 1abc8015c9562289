use num_traits::Zero;

use super::grading::{ad_grading, scalar, GradedDecomposition};
use super::{LieAlgebra, Sl2Triple};
use crate::error::{Error, Result};
use crate::linalg::{add_vec, is_zero_vec, scale_vec, span_rank, Matrix, Vector};
use crate::rational::{frac, Rat};

/// Graded dual bases attached to an sl2-triple.
///
/// `qf[i]` spans `g^f` with `ad x`-eigenvalue `-delta(i)`, `qe[i]` spans `g^e`
/// with `(qf[i] | qe[j]) = δ_ij`, `extended[i][n] = (ad f)^n qe[i]` for
/// `n = 0..=2δ(i)` and `extended_dual[i][n]` is the dual basis of `g` under
/// the form.
#[derive(Clone, Debug)]
pub struct SlodowyFrame {
    pub alg: LieAlgebra,
    pub triple: Sl2Triple,
    pub grading: GradedDecomposition,
    pub qf: Vec<Vector>,
    pub qe: Vec<Vector>,
    /// `2δ(i)`, nondecreasing in `i`.
    pub delta2: Vec<i64>,
    pub extended: Vec<Vec<Vector>>,
    pub extended_dual: Vec<Vec<Vector>>,
    pub sharp_matrix: Matrix,
}

impl SlodowyFrame {
    pub fn build(alg: &LieAlgebra, triple: &Sl2Triple) -> Result<Self> {
        triple.check(alg)?;
        let n = alg.dim();
        let grading = ad_grading(alg, &triple.x)?;
        let ad_x = alg.ad(&triple.x);
        let eigen_kernel = |a: &[Rat], deg2: i64| -> Vec<Vector> {
            let ad_a = alg.ad(a);
            let shifted = ad_x.sub(&scalar(n, &frac(deg2, 2)));
            let mut rows: Vec<Vector> = (0..n).map(|i| ad_a.row(i).to_vec()).collect();
            rows.extend((0..n).map(|i| shifted.row(i).to_vec()));
            Matrix::from_rows(&rows).nullspace()
        };

        let mut qf = Vec::new();
        for &d in grading.degrees2.iter().rev() {
            if d <= 0 {
                qf.extend(eigen_kernel(&triple.f, d));
            }
        }
        let mut ge = Vec::new();
        for &d in &grading.degrees2 {
            if d >= 0 {
                ge.extend(eigen_kernel(&triple.e, d));
            }
        }
        if qf.len() != ge.len() || qf.len() + span_rank(n, &image_of(alg, &triple.e)) != n {
            return Err(Error::Internal("g^f and g^e have mismatched dimensions".into()));
        }
        let k = qf.len();
        let mut pairing = Matrix::zeros(k, k);
        for (a, qa) in qf.iter().enumerate() {
            for (b, eb) in ge.iter().enumerate() {
                pairing[(a, b)] = alg.form(qa, eb);
            }
        }
        let pinv = pairing
            .inverse()
            .ok_or_else(|| Error::Internal("g^f and g^e pair degenerately".into()))?;
        let qe: Vec<Vector> = (0..k)
            .map(|i| {
                let mut v = alg.zero();
                for (b, eb) in ge.iter().enumerate() {
                    if !pinv[(b, i)].is_zero() {
                        v = add_vec(&v, &scale_vec(&pinv[(b, i)], eb));
                    }
                }
                v
            })
            .collect();
        let mut delta2 = Vec::with_capacity(k);
        for v in &qe {
            let d = grading
                .degree_of(v)
                .ok_or_else(|| Error::Internal("dual basis vector is not homogeneous".into()))?;
            delta2.push(d);
        }

        let extended: Vec<Vec<Vector>> = qe
            .iter()
            .zip(&delta2)
            .map(|(q, &d)| {
                let mut chain = vec![q.clone()];
                for _ in 0..d {
                    let next = alg.bracket(&triple.f, chain.last().unwrap());
                    chain.push(next);
                }
                chain
            })
            .collect();
        let flat: Vec<Vector> = extended.iter().flatten().cloned().collect();
        if flat.len() != n {
            return Err(Error::Internal(format!(
                "extended basis has {} elements, expected {n}",
                flat.len()
            )));
        }
        let e_mat = Matrix::from_columns(n, &flat);
        let dual = e_mat
            .transpose()
            .mul(alg.gram())
            .inverse()
            .ok_or_else(|| Error::Internal("extended basis does not span g".into()))?;
        let mut extended_dual = Vec::with_capacity(k);
        let mut col = 0;
        for chain in &extended {
            let mut duals = Vec::with_capacity(chain.len());
            for _ in chain {
                duals.push(dual.column(col));
                col += 1;
            }
            extended_dual.push(duals);
        }

        // a^♯ = Σ_i (a | q^i) q_i
        let mut sharp_matrix = Matrix::zeros(n, n);
        for (q_low, q_up) in qf.iter().zip(&qe) {
            let functional = alg.gram().apply(q_up);
            for r in 0..n {
                if q_low[r].is_zero() {
                    continue;
                }
                for c in 0..n {
                    if !functional[c].is_zero() {
                        sharp_matrix[(r, c)] += &q_low[r] * &functional[c];
                    }
                }
            }
        }

        let frame = SlodowyFrame {
            alg: alg.clone(),
            triple: triple.clone(),
            grading,
            qf,
            qe,
            delta2,
            extended,
            extended_dual,
            sharp_matrix,
        };
        frame.check_invariants()?;
        Ok(frame)
    }

    pub fn rank(&self) -> usize {
        self.qf.len()
    }

    pub fn sharp(&self, a: &[Rat]) -> Vector {
        self.sharp_matrix.apply(a)
    }

    /// Coordinates of `a^♯` in the basis `qf`.
    pub fn sharp_coords(&self, a: &[Rat]) -> Vector {
        self.qe.iter().map(|q| self.alg.form(a, q)).collect()
    }

    /// `q^i_n`, zero outside `0..=2δ(i)`.
    pub fn up(&self, i: usize, n: usize) -> Option<&Vector> {
        self.extended[i].get(n)
    }

    /// `q_i^n`, zero outside `0..=2δ(i)`.
    pub fn down(&self, i: usize, n: usize) -> Option<&Vector> {
        self.extended_dual[i].get(n)
    }

    pub fn in_gf(&self, a: &[Rat]) -> bool {
        is_zero_vec(&self.alg.bracket(&self.triple.f, a))
    }

    pub fn check_invariants(&self) -> Result<()> {
        let alg = &self.alg;
        let fail = |m: &str| Err(Error::Internal(m.to_string()));
        for (i, qi) in self.qf.iter().enumerate() {
            for (j, qj) in self.qe.iter().enumerate() {
                let want = if i == j { Rat::from(1) } else { Rat::zero() };
                if alg.form(qi, qj) != want {
                    return fail("(q_i | q^j) is not the identity");
                }
            }
            if !self.in_gf(qi) {
                return fail("q_i is not in g^f");
            }
            if self.grading.degree_of(qi) != Some(-self.delta2[i]) {
                return fail("q_i has the wrong degree");
            }
        }
        for (i, chain) in self.extended.iter().enumerate() {
            for (m, up) in chain.iter().enumerate() {
                for (j, duals) in self.extended_dual.iter().enumerate() {
                    for (n, down) in duals.iter().enumerate() {
                        let want = if (i, m) == (j, n) { Rat::from(1) } else { Rat::zero() };
                        if alg.form(up, down) != want {
                            return fail("extended bases are not dual");
                        }
                    }
                }
            }
            if self.extended_dual[i][0] != self.qf[i] {
                return fail("q_i^0 differs from q_i");
            }
        }
        let sq = self.sharp_matrix.mul(&self.sharp_matrix);
        if sq != self.sharp_matrix {
            return fail("sharp is not idempotent");
        }
        for v in image_of(alg, &self.triple.e) {
            if !is_zero_vec(&self.sharp(&v)) {
                return fail("sharp does not kill [e,g]");
            }
        }
        for q in &self.qf {
            if &self.sharp(q) != q {
                return fail("sharp does not fix g^f");
            }
        }
        Ok(())
    }
}

fn image_of(alg: &LieAlgebra, a: &[Rat]) -> Vec<Vector> {
    let ad = alg.ad(a);
    let cols: Vec<Vector> = (0..alg.dim()).map(|j| ad.column(j)).collect();
    let m = Matrix::from_columns(alg.dim(), &cols);
    m.independent_columns().into_iter().map(|j| cols[j].clone()).collect()
}

/// Which maximal isotropic subspace of `g_{1/2}` to take.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LagrangianChoice {
    /// Scan the `g_{1/2}` basis from the front.
    #[default]
    Greedy,
    /// Scan it from the back.
    GreedyReversed,
}

/// `g_{1/2} = ℓ ⊕ ℓ'`, `n = ℓ ⊕ g_{≥1}` and `p = ℓ' ⊕ g_{≤0}`, together with
/// `g` rewritten in the basis `p ++ n`.
#[derive(Clone, Debug)]
pub struct Polarization {
    pub choice: LagrangianChoice,
    pub half: Vec<Vector>,
    /// `ω(u,v) = (f | [u,v])` on `half`.
    pub omega: Matrix,
    pub ell: Vec<Vector>,
    pub ell_prime: Vec<Vector>,
    pub n_basis: Vec<Vector>,
    pub p_basis: Vec<Vector>,
    /// `g` in the basis `p_basis ++ n_basis`.
    pub adapted: LieAlgebra,
    /// Doubled degree of every adapted basis vector.
    pub adapted_deg2: Vec<i64>,
}

impl Polarization {
    pub fn n_dim(&self) -> usize {
        self.n_basis.len()
    }

    pub fn p_dim(&self) -> usize {
        self.p_basis.len()
    }

    pub fn adapted_basis(&self) -> Vec<Vector> {
        self.p_basis.iter().chain(&self.n_basis).cloned().collect()
    }

    pub fn omega_rank(&self) -> usize {
        self.omega.rank()
    }
}

pub fn build_polarization(frame: &SlodowyFrame, choice: LagrangianChoice) -> Result<Polarization> {
    let alg = &frame.alg;
    let f = &frame.triple.f;
    let omega_of = |u: &[Rat], v: &[Rat]| alg.form(f, &alg.bracket(u, v));
    let half: Vec<Vector> = frame.grading.space(1).to_vec();
    let h = half.len();
    let mut omega = Matrix::zeros(h, h);
    for i in 0..h {
        for j in 0..h {
            omega[(i, j)] = omega_of(&half[i], &half[j]);
        }
    }
    if h % 2 == 1 || (h > 0 && omega.determinant().is_zero()) {
        return Err(Error::InvalidTriple("ω is degenerate on g_{1/2}".into()));
    }

    // work in coordinates on g_{1/2}
    let unit = |i: usize| crate::linalg::unit_vec(h, i);
    let om = |u: &[Rat], v: &[Rat]| -> Rat {
        let w = omega.apply(v);
        crate::rational::sum(u.iter().zip(&w).map(|(a, b)| a * b))
    };
    let order: Vec<usize> = match choice {
        LagrangianChoice::Greedy => (0..h).collect(),
        LagrangianChoice::GreedyReversed => (0..h).rev().collect(),
    };
    let mut ell: Vec<Vector> = Vec::new();
    for &i in &order {
        let v = unit(i);
        if ell.iter().all(|l| om(l, &v).is_zero()) {
            ell.push(v);
        }
    }
    while ell.len() < h / 2 {
        let rows: Vec<Vector> = ell.iter().map(|l| omega.transpose().apply(l)).collect();
        let perp = Matrix::from_rows(&rows).nullspace();
        let extra = perp
            .into_iter()
            .find(|v| {
                let mut cols = ell.clone();
                cols.push(v.clone());
                span_rank(h, &cols) > ell.len()
            })
            .ok_or_else(|| Error::Internal("isotropic completion failed".into()))?;
        ell.push(extra);
    }

    // ℓ' with ω(l_i, m_j) = δ_ij, then made isotropic
    let lrows: Vec<Vector> = ell.iter().map(|l| omega.transpose().apply(l)).collect();
    let lmat = Matrix::from_rows(&lrows);
    let mut mprime = Vec::new();
    for j in 0..ell.len() {
        let rhs = crate::linalg::unit_vec(ell.len(), j);
        mprime.push(
            lmat.solve(&rhs)
                .ok_or_else(|| Error::Internal("no dual isotropic partner".into()))?,
        );
    }
    let half_rat = frac(1, 2);
    let ell_prime_coords: Vec<Vector> = (0..mprime.len())
        .map(|j| {
            let mut m = mprime[j].clone();
            for (kk, l) in ell.iter().enumerate() {
                let a = -(om(&mprime[j], &mprime[kk]) * &half_rat);
                if !a.is_zero() {
                    m = add_vec(&m, &scale_vec(&a, l));
                }
            }
            m
        })
        .collect();
    let embed = |c: &Vector| -> Vector {
        let mut v = alg.zero();
        for (ci, b) in c.iter().zip(&half) {
            if !ci.is_zero() {
                v = add_vec(&v, &scale_vec(ci, b));
            }
        }
        v
    };
    let ell: Vec<Vector> = ell.iter().map(embed).collect();
    let ell_prime: Vec<Vector> = ell_prime_coords.iter().map(embed).collect();

    let gr = &frame.grading;
    let mut n_basis = ell.clone();
    let mut n_deg = vec![1; ell.len()];
    for (&d, basis) in gr.degrees2.iter().zip(&gr.bases) {
        if d >= 2 {
            n_basis.extend(basis.iter().cloned());
            n_deg.extend(std::iter::repeat_n(d, basis.len()));
        }
    }
    let mut p_basis = ell_prime.clone();
    let mut p_deg = vec![1; ell_prime.len()];
    for (&d, basis) in gr.degrees2.iter().zip(&gr.bases).rev() {
        if d <= 0 {
            p_basis.extend(basis.iter().cloned());
            p_deg.extend(std::iter::repeat_n(d, basis.len()));
        }
    }
    let all: Vec<Vector> = p_basis.iter().chain(&n_basis).cloned().collect();
    let labels: Vec<String> = all.iter().map(|v| alg.describe(v)).collect();
    let adapted = alg.change_basis(&all, labels)?;
    let pol = Polarization {
        choice,
        half,
        omega,
        ell,
        ell_prime,
        n_basis,
        p_basis,
        adapted,
        adapted_deg2: p_deg.into_iter().chain(n_deg).collect(),
    };
    check_polarization(frame, &pol)?;
    Ok(pol)
}

fn check_polarization(frame: &SlodowyFrame, pol: &Polarization) -> Result<()> {
    let alg = &frame.alg;
    let f = &frame.triple.f;
    let fail = |m: &str| Err(Error::Internal(m.to_string()));
    for a in &pol.n_basis {
        for b in &pol.n_basis {
            let c = alg.bracket(a, b);
            if !alg.form(f, &c).is_zero() {
                return fail("(f | [n,n]) != 0");
            }
            let mut cols = pol.n_basis.clone();
            cols.push(c);
            if span_rank(alg.dim(), &cols) != pol.n_basis.len() {
                return fail("n is not a subalgebra");
            }
        }
    }
    for l in &pol.ell_prime {
        for m in &pol.ell_prime {
            if !alg.form(f, &alg.bracket(l, m)).is_zero() {
                return fail("ℓ' is not isotropic");
            }
        }
    }
    Ok(())
}
