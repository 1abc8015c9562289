use std::collections::HashMap;

use serde_json::{json, Value};

use crate::diffpoly::{DiffPoly, Monomial, Var};
use crate::error::{Error, Result};
use crate::lie::SlodowyFrame;
use crate::linalg::{coordinates, is_zero_vec, Vector};
use crate::rational::Rat;

/// `{q_i, q_j}` on `S(g^f)` for every pair of frame generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteBracketTable {
    pub labels: Vec<String>,
    /// `{q_i, q_j}` at index `i * k + j`, as a polynomial in the `q`'s.
    pub table: Vec<DiffPoly>,
}

impl FiniteBracketTable {
    pub fn build(frame: &SlodowyFrame) -> Self {
        let k = frame.rank();
        let mut table = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                table.push(chain_bracket(frame, &frame.qf[i], &frame.qf[j]));
            }
        }
        FiniteBracketTable {
            labels: generator_labels(frame),
            table,
        }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &DiffPoly {
        &self.table[i * self.rank() + j]
    }

    /// Leibniz extension `{P,Q} = Σ ∂P/∂q_a ∂Q/∂q_b {q_a,q_b}`.
    pub fn bracket(&self, p: &DiffPoly, q: &DiffPoly) -> Result<DiffPoly> {
        for poly in [p, q] {
            if poly.max_order() > 0 || poly.gen_bound() > self.rank() {
                return Err(Error::Domain("argument is not in S(g^f)".into()));
            }
        }
        let mut out = DiffPoly::zero();
        for a in p.vars() {
            let pa = p.partial(a);
            for b in q.vars() {
                let entry = self.entry(a.gen, b.gen);
                if entry.is_zero() {
                    continue;
                }
                out += &(&(&pa * &q.partial(b)) * entry);
            }
        }
        Ok(out)
    }

    pub fn is_skew(&self) -> bool {
        let k = self.rank();
        (0..k).all(|i| (0..k).all(|j| (self.entry(i, j) + self.entry(j, i)).is_zero()))
    }

    /// Jacobi identity on all generator triples.
    pub fn satisfies_jacobi(&self) -> Result<bool> {
        let k = self.rank();
        let g = |i| DiffPoly::gen(i);
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let t1 = self.bracket(&g(a), self.entry(b, c))?;
                    let t2 = self.bracket(&g(b), self.entry(c, a))?;
                    let t3 = self.bracket(&g(c), self.entry(a, b))?;
                    if !(&(&t1 + &t2) + &t3).is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        let k = self.rank();
        let entries: Vec<Value> = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| json!({"i": i, "j": j, "value": self.entry(i, j).to_json()}))
            .collect();
        json!({"generators": self.labels, "brackets": entries})
    }

    pub fn to_latex(&self) -> String {
        let k = self.rank();
        let labels = Some(self.labels.as_slice());
        let mut lines = Vec::new();
        for i in 0..k {
            for j in 0..k {
                lines.push(format!(
                    "\\{{{}, {}\\}}_{{\\mathcal S}} = {}",
                    self.labels[i],
                    self.labels[j],
                    self.entry(i, j).to_latex(labels)
                ));
            }
        }
        format!("\\begin{{aligned}}\n{}\n\\end{{aligned}}", lines.join(" \\\\\n"))
    }
}

/// Generator names: the basis label when `q_i` is a basis vector, else `q{i+1}`.
pub fn generator_labels(frame: &SlodowyFrame) -> Vec<String> {
    frame
        .qf
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let d = frame.alg.describe(q);
            if frame.alg.labels().contains(&d) {
                d
            } else {
                format!("q{}", i + 1)
            }
        })
        .collect()
}

/// `{p, q}` for `p, q ∈ g^f`, as a polynomial in the frame generators.
pub fn finite_bracket(frame: &SlodowyFrame, p: &[Rat], q: &[Rat]) -> Result<DiffPoly> {
    if !frame.in_gf(p) || !frame.in_gf(q) {
        return Err(Error::Domain("finite bracket arguments must lie in g^f".into()));
    }
    Ok(chain_bracket(frame, p, q))
}

/// Sum over chains `[p,q^{i1}_{m1}]^♯ [q_{i1}^{m1+1},q^{i2}_{m2}]^♯ ... [q_{is}^{ms+1},q]^♯`,
/// accumulated backwards from `q`. A factor `[q_i^{m+1}, q^{i'}_{m'}]^♯` can only be
/// nonzero when `δ(i') - m' < δ(i) - m`, so the recursion is finite.
fn chain_bracket(frame: &SlodowyFrame, p: &[Rat], q: &[Rat]) -> DiffPoly {
    let alg = &frame.alg;
    let sharp_poly = |v: &Vector| DiffPoly::linear(&frame.sharp_coords(v));
    let mut states: Vec<(usize, usize)> = Vec::new();
    for (i, chain) in frame.extended_dual.iter().enumerate() {
        for m in 0..chain.len().saturating_sub(1) {
            states.push((i, m));
        }
    }
    // D = δ(i) - m, doubled
    let d2 = |(i, m): (usize, usize)| frame.delta2[i] - 2 * m as i64;
    states.sort_by_key(|&s| d2(s));
    let mut t: HashMap<(usize, usize), DiffPoly> = HashMap::new();
    for &(i, m) in &states {
        let down = &frame.extended_dual[i][m + 1];
        let mut acc = sharp_poly(&alg.bracket(down, q));
        for &(i2, m2) in &states {
            if d2((i2, m2)) >= d2((i, m)) {
                break;
            }
            let prev = &t[&(i2, m2)];
            if prev.is_zero() {
                continue;
            }
            let factor = sharp_poly(&alg.bracket(down, &frame.extended[i2][m2]));
            if !factor.is_zero() {
                acc += &(&factor * prev);
            }
        }
        t.insert((i, m), acc);
    }
    let mut out = sharp_poly(&alg.bracket(p, q));
    for (&(i, m), tv) in &t {
        if tv.is_zero() {
            continue;
        }
        let factor = sharp_poly(&alg.bracket(p, &frame.extended[i][m]));
        out += &(&factor * tv);
    }
    out
}

/// Coordinates of an element of `g^f` in the frame basis, as a linear polynomial.
pub fn gf_element(frame: &SlodowyFrame, v: &[Rat]) -> Result<DiffPoly> {
    if is_zero_vec(v) {
        return Ok(DiffPoly::zero());
    }
    let c = coordinates(&frame.qf, v).ok_or_else(|| Error::Domain("element is not in g^f".into()))?;
    Ok(DiffPoly::linear(&c))
}

/// Monomials of degree `1..=max_degree` in `k` commuting variables.
pub fn monomials_up_to(k: usize, max_degree: u32) -> Vec<DiffPoly> {
    fn go(k: usize, start: usize, left: u32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for g in start..k {
            cur.push(g);
            go(k, g, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    go(k, 0, max_degree, &mut Vec::new(), &mut raw);
    raw.sort_by_key(Vec::len);
    raw.into_iter()
        .map(|gens| {
            DiffPoly::term(
                Rat::from(1),
                Monomial::from_factors(gens.into_iter().map(|g| (Var::new(g, 0), 1))),
            )
        })
        .collect()
}
