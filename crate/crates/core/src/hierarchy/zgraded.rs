use std::collections::{BTreeMap, BTreeSet};

use crate::diffpoly::DiffPoly;
use crate::lie::LieAlgebra;
use crate::linalg::Matrix;
use crate::rational::Rat;

/// `deg(y z^k) = deg(y) + k·deg(z)`, all doubled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZGrading {
    pub basis_deg2: Vec<i64>,
    /// `2 deg(z) = -(2d + 2)` for `s ∈ g_d`.
    pub z_deg2: i64,
}

impl ZGrading {
    pub fn new(basis_deg2: Vec<i64>, s_deg2: i64) -> Self {
        ZGrading {
            basis_deg2,
            z_deg2: -(s_deg2 + 2),
        }
    }

    pub fn degree(&self, (k, a): (i64, usize)) -> i64 {
        self.basis_deg2[a] + k * self.z_deg2
    }

    /// All `(k, a)` with the given total doubled degree.
    pub fn keys(&self, deg2: i64) -> Vec<(i64, usize)> {
        let step = -self.z_deg2;
        let mut out = Vec::new();
        for (a, &d) in self.basis_deg2.iter().enumerate() {
            // d - k·step = deg2
            let diff = d - deg2;
            if diff % step == 0 {
                out.push((diff / step, a));
            }
        }
        out
    }
}

/// Sparse structure constants: `[b_a, b_b] = Σ c · b_c`.
#[derive(Clone, Debug)]
pub struct StructureTable {
    dim: usize,
    entries: Vec<Vec<(usize, Rat)>>,
}

impl StructureTable {
    pub fn new(alg: &LieAlgebra) -> Self {
        let dim = alg.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                entries.push(
                    alg.basis_bracket(a, b)
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(c, v)| (c, v.clone()))
                        .collect(),
                );
            }
        }
        StructureTable { dim, entries }
    }

    pub fn get(&self, a: usize, b: usize) -> &[(usize, Rat)] {
        &self.entries[a * self.dim + b]
    }
}

/// Element of `g((z⁻¹)) ⊗ V`: a finite sum of `b_a z^k ⊗ P`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZGradedElement {
    pub terms: BTreeMap<(i64, usize), DiffPoly>,
}

impl ZGradedElement {
    pub fn zero() -> Self {
        ZGradedElement::default()
    }

    /// `v z^k ⊗ coeff` for a coordinate vector `v`.
    pub fn from_vector(v: &[Rat], k: i64, coeff: &DiffPoly) -> Self {
        let mut out = ZGradedElement::zero();
        for (a, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.add_term((k, a), coeff.scale(c));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: (i64, usize), p: DiffPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_default();
        *slot += &p;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign(&mut self, other: &ZGradedElement) {
        for (k, p) in &other.terms {
            self.add_term(*k, p.clone());
        }
    }

    pub fn add_scaled(&mut self, c: &Rat, other: &ZGradedElement) {
        for (k, p) in &other.terms {
            self.add_term(*k, p.scale(c));
        }
    }

    pub fn scale(&self, c: &Rat) -> ZGradedElement {
        let mut out = ZGradedElement::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn sub(&self, other: &ZGradedElement) -> ZGradedElement {
        let mut out = self.clone();
        out.add_scaled(&Rat::from(-1), other);
        out
    }

    /// `∂` on the coefficients.
    pub fn derivative(&self) -> ZGradedElement {
        let mut out = ZGradedElement::zero();
        for (k, p) in &self.terms {
            out.add_term(*k, p.derivative());
        }
        out
    }

    pub fn degrees(&self, gr: &ZGrading) -> BTreeSet<i64> {
        self.terms.keys().map(|&k| gr.degree(k)).collect()
    }

    pub fn component(&self, gr: &ZGrading, deg2: i64) -> ZGradedElement {
        self.filter(|k| gr.degree(k) == deg2)
    }

    pub fn truncate(&self, gr: &ZGrading, hi2: i64) -> ZGradedElement {
        self.filter(|k| gr.degree(k) <= hi2)
    }

    fn filter(&self, mut keep: impl FnMut((i64, usize)) -> bool) -> ZGradedElement {
        ZGradedElement {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(**k))
                .map(|(k, p)| (*k, p.clone()))
                .collect(),
        }
    }

    /// `[self, other]`, dropping terms of degree above `hi2`.
    pub fn bracket(
        &self,
        other: &ZGradedElement,
        table: &StructureTable,
        gr: &ZGrading,
        hi2: Option<i64>,
    ) -> ZGradedElement {
        let mut out = ZGradedElement::zero();
        for (&(k1, a), p1) in &self.terms {
            let d1 = gr.degree((k1, a));
            for (&(k2, b), p2) in &other.terms {
                if hi2.is_some_and(|hi| d1 + gr.degree((k2, b)) > hi) {
                    continue;
                }
                let entries = table.get(a, b);
                if entries.is_empty() {
                    continue;
                }
                let prod = p1 * p2;
                for (c, v) in entries {
                    out.terms.entry((k1 + k2, *c)).or_default().add_scaled(v, &prod);
                }
            }
        }
        out.terms.retain(|_, p| !p.is_zero());
        out
    }

    /// `(self | other)` as a Laurent polynomial in `z`.
    pub fn pair(&self, other: &ZGradedElement, gram: &Matrix) -> BTreeMap<i64, DiffPoly> {
        let mut out: BTreeMap<i64, DiffPoly> = BTreeMap::new();
        for (&(k1, a), p1) in &self.terms {
            for (&(k2, b), p2) in &other.terms {
                let g = &gram[(a, b)];
                if g.is_zero() {
                    continue;
                }
                *out.entry(k1 + k2).or_default() += &(p1 * p2).scale(g);
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Coefficients on `keys`, in order. Other terms are ignored.
    pub fn coords(&self, keys: &[(i64, usize)]) -> Vec<DiffPoly> {
        keys.iter()
            .map(|k| self.terms.get(k).cloned().unwrap_or_default())
            .collect()
    }

    pub fn from_coords(keys: &[(i64, usize)], coords: &[DiffPoly]) -> ZGradedElement {
        let mut out = ZGradedElement::zero();
        for (k, p) in keys.iter().zip(coords) {
            out.add_term(*k, p.clone());
        }
        out
    }

    /// Whether every coefficient is a constant.
    pub fn is_constant(&self) -> bool {
        self.terms.values().all(DiffPoly::is_constant)
    }

    pub fn to_json(&self, gr: &ZGrading) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(&(k, a), p)| {
                serde_json::json!({"z": k, "basis": a, "degree2": gr.degree((k, a)), "coeff": p.to_json()})
            })
            .collect();
        serde_json::Value::Array(terms)
    }
}

/// `Σ_j M_ij v_j` for a rational matrix acting on polynomial coefficients.
pub fn apply_matrix(m: &Matrix, v: &[DiffPoly]) -> Vec<DiffPoly> {
    (0..m.rows())
        .map(|i| {
            let mut acc = DiffPoly::zero();
            for (j, p) in v.iter().enumerate() {
                let c = &m[(i, j)];
                if !c.is_zero() && !p.is_zero() {
                    acc.add_scaled(c, p);
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_sl_n;
    use crate::rational::rat;

    #[test]
    fn keys_have_the_requested_degree() {
        let gr = ZGrading::new(vec![2, 0, -2], 2);
        for t in -6..6 {
            for k in gr.keys(t) {
                assert_eq!(gr.degree(k), t);
            }
        }
        // deg z = -2: f and e z sit in degree -1
        assert_eq!(gr.keys(-2), vec![(1, 0), (0, 2)]);
        assert!(gr.keys(-1).is_empty());
    }

    #[test]
    fn bracket_matches_lie_bracket_with_z_powers() {
        let g = build_sl_n(2).unwrap();
        let table = StructureTable::new(&g);
        let gr = ZGrading::new(vec![2, 0, -2], 2);
        let e = ZGradedElement::from_vector(&g.basis_vector(0), 1, &DiffPoly::gen(0));
        let f = ZGradedElement::from_vector(&g.basis_vector(2), -2, &DiffPoly::gen(1));
        let br = e.bracket(&f, &table, &gr, None);
        let expect = ZGradedElement::from_vector(&g.basis_vector(1), -1, &(&DiffPoly::gen(0) * &DiffPoly::gen(1)));
        assert_eq!(br, expect);
        assert!(e.bracket(&f, &table, &gr, Some(gr.degree((-1, 1)) - 1)).is_zero());
        assert_eq!(e.sub(&e), ZGradedElement::zero());
        assert_eq!(e.scale(&rat(2)).terms[&(1, 0)], DiffPoly::gen(0).scale(&rat(2)));
    }
}
