use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::zgraded::{apply_matrix, StructureTable, ZGradedElement, ZGrading};
use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::rational::Rat;

/// One graded piece: `h_t ⊕ h^⊥_t` with `h_t = ker ad Λ` and `h^⊥_t = ad Λ(V_{t+1})`.
#[derive(Clone, Debug)]
pub struct DegreePiece {
    pub keys: Vec<(i64, usize)>,
    pub kernel: Vec<Vector>,
    pub image: Vec<Vector>,
    /// Coordinates in `kernel ++ image`.
    split: Matrix,
    /// For each `image[j]`, its preimage under `ad Λ` inside `h^⊥_{t+1}`.
    preimages: Vec<Vector>,
}

impl DegreePiece {
    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    fn coordinates(&self, v: &[DiffPoly]) -> Vec<DiffPoly> {
        apply_matrix(&self.split, v)
    }
}

/// `ad Λ` on `g((z⁻¹))` with `Λ = f + zs` (or any semisimple homogeneous element
/// of degree `-1`), split degreewise into kernel and image.
#[derive(Clone, Debug)]
pub struct HkDecomposition {
    pub grading: ZGrading,
    pub lambda: ZGradedElement,
    pub pieces: BTreeMap<i64, DegreePiece>,
    table: StructureTable,
    keys_of: BTreeMap<i64, Vec<(i64, usize)>>,
}

impl HkDecomposition {
    /// Pieces for doubled degrees `lo2..=hi2`. `shuffle` permutes the basis of every
    /// graded piece before the bases of `h` and `h^⊥` are chosen.
    pub fn new(
        grading: ZGrading,
        table: StructureTable,
        lambda: ZGradedElement,
        lo2: i64,
        hi2: i64,
        shuffle: Option<u64>,
    ) -> Result<Self> {
        let mut rng = shuffle.map(ChaCha8Rng::seed_from_u64);
        let mut keys_of: BTreeMap<i64, Vec<(i64, usize)>> = BTreeMap::new();
        for t in lo2 - 2..=hi2 + 4 {
            let mut keys = grading.keys(t);
            if let Some(r) = rng.as_mut() {
                keys.shuffle(r);
            }
            keys_of.insert(t, keys);
        }
        let ad_matrix = |t: i64| -> Matrix {
            // V_t → V_{t-2}
            let src = &keys_of[&t];
            let dst = &keys_of[&(t - 2)];
            let mut m = Matrix::zeros(dst.len(), src.len());
            for (j, &key) in src.iter().enumerate() {
                let mut v = ZGradedElement::zero();
                v.add_term(key, DiffPoly::one());
                let img = lambda.bracket(&v, &table, &grading, None);
                for (i, dk) in dst.iter().enumerate() {
                    if let Some(p) = img.terms.get(dk) {
                        m[(i, j)] = p.constant_term();
                    }
                }
            }
            m
        };

        // kernel, image and split for t in lo2..=hi2+2
        let mut raw: BTreeMap<i64, (Vec<Vector>, Vec<usize>, Matrix, Matrix)> = BTreeMap::new();
        for t in lo2..=hi2 + 2 {
            let dim = keys_of[&t].len();
            let kernel = ad_matrix(t).nullspace();
            let up = ad_matrix(t + 2);
            let cols = up.independent_columns();
            if kernel.len() + cols.len() != dim {
                return Err(Error::Internal(format!(
                    "ad(f+zs) is not semisimple in degree {t}/2: dim h = {}, dim h^⊥ = {}, total {dim}",
                    kernel.len(),
                    cols.len()
                )));
            }
            let mut basis: Vec<Vector> = kernel.clone();
            basis.extend(cols.iter().map(|&c| up.column(c)));
            let split = if dim == 0 {
                Matrix::zeros(0, 0)
            } else {
                Matrix::from_columns(dim, &basis)
                    .inverse()
                    .ok_or_else(|| Error::Internal(format!("h ∩ h^⊥ ≠ 0 in degree {t}/2")))?
            };
            raw.insert(t, (kernel, cols, split, up));
        }

        let mut pieces = BTreeMap::new();
        for t in lo2..=hi2 {
            let (kernel, cols, split, up) = &raw[&t];
            let (above_kernel, _, above_split, _) = &raw[&(t + 2)];
            let above_dim = keys_of[&(t + 2)].len();
            // π_⊥ on V_{t+2}: drop kernel coordinates
            let preimages = cols
                .iter()
                .map(|&c| {
                    let mut e = vec![Rat::from(0); above_dim];
                    e[c] = Rat::from(1);
                    let coords = above_split.apply(&e);
                    let mut v = e.clone();
                    for (k, kv) in above_kernel.iter().enumerate() {
                        for (i, x) in kv.iter().enumerate() {
                            v[i] -= &coords[k] * x;
                        }
                    }
                    v
                })
                .collect();
            pieces.insert(
                t,
                DegreePiece {
                    keys: keys_of[&t].clone(),
                    kernel: kernel.clone(),
                    image: cols.iter().map(|&c| up.column(c)).collect(),
                    split: split.clone(),
                    preimages,
                },
            );
        }
        Ok(HkDecomposition {
            grading,
            lambda,
            pieces,
            table,
            keys_of,
        })
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn piece(&self, t: i64) -> Result<&DegreePiece> {
        self.pieces
            .get(&t)
            .ok_or_else(|| Error::Truncation(format!("degree {t}/2 lies outside the decomposition window")))
    }

    /// `(π_h r, π_⊥ r)` for a homogeneous element of degree `t`.
    pub fn split(&self, r: &ZGradedElement, t: i64) -> Result<(ZGradedElement, ZGradedElement)> {
        let piece = self.piece(t)?;
        let coords = piece.coordinates(&r.coords(&piece.keys));
        let nk = piece.kernel.len();
        let combine = |vecs: &[Vector], cs: &[DiffPoly]| {
            let mut out = vec![DiffPoly::zero(); piece.dim()];
            for (v, c) in vecs.iter().zip(cs) {
                if c.is_zero() {
                    continue;
                }
                for (i, x) in v.iter().enumerate() {
                    if !num_traits::Zero::is_zero(x) {
                        out[i].add_scaled(x, c);
                    }
                }
            }
            ZGradedElement::from_coords(&piece.keys, &out)
        };
        Ok((
            combine(&piece.kernel, &coords[..nk]),
            combine(&piece.image, &coords[nk..]),
        ))
    }

    /// The unique `U ∈ h^⊥_{t+1}` with `[Λ, U] = r`, for `r ∈ h^⊥_t`.
    pub fn invert(&self, r: &ZGradedElement, t: i64) -> Result<ZGradedElement> {
        let piece = self.piece(t)?;
        let coords = piece.coordinates(&r.coords(&piece.keys));
        let nk = piece.kernel.len();
        let above_keys = &self.keys_of[&(t + 2)];
        let mut out = vec![DiffPoly::zero(); above_keys.len()];
        for (pre, c) in piece.preimages.iter().zip(&coords[nk..]) {
            if c.is_zero() {
                continue;
            }
            for (i, x) in pre.iter().enumerate() {
                if !num_traits::Zero::is_zero(x) {
                    out[i].add_scaled(x, c);
                }
            }
        }
        Ok(ZGradedElement::from_coords(above_keys, &out))
    }

    /// Whether `a` commutes with every kernel basis vector in the window.
    pub fn centralizes_h(&self, a: &ZGradedElement) -> bool {
        self.pieces.iter().all(|(_, piece)| {
            piece.kernel.iter().all(|kv| {
                let coeffs: Vec<DiffPoly> = kv.iter().map(|c| DiffPoly::constant(c.clone())).collect();
                let h = ZGradedElement::from_coords(&piece.keys, &coeffs);
                a.bracket(&h, &self.table, &self.grading, None).is_zero()
            })
        })
    }

    pub fn kernel_dims(&self) -> BTreeMap<i64, usize> {
        self.pieces.iter().map(|(t, p)| (*t, p.kernel.len())).collect()
    }
}
