//! λ-brackets on differential polynomial algebras.
//!
//! A structure is fixed by the brackets of its generators; everything else
//! follows from sesquilinearity and the two Leibniz rules (the master formula).
//! Brackets are affine in a parameter `z` and are stored as a pair of
//! z⁰ / z¹ parts.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::diffpoly::{DiffPoly, LocalFunctional, Var};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::rational::{binomial, rat, Rat};

/// Polynomial in λ with differential-polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaPoly {
    coeffs: Vec<DiffPoly>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly::default()
    }

    pub fn from_coeffs(coeffs: Vec<DiffPoly>) -> Self {
        let mut p = LambdaPoly { coeffs };
        p.trim();
        p
    }

    pub fn constant(p: DiffPoly) -> Self {
        LambdaPoly::from_coeffs(vec![p])
    }

    /// `c λ^k`.
    pub fn monomial(c: DiffPoly, k: usize) -> Self {
        let mut coeffs = vec![DiffPoly::zero(); k];
        coeffs.push(c);
        LambdaPoly::from_coeffs(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(DiffPoly::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[DiffPoly] {
        &self.coeffs
    }

    /// Coefficient of `λ^k`.
    pub fn coeff(&self, k: usize) -> DiffPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in λ; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn at_zero(&self) -> DiffPoly {
        self.coeff(0)
    }

    pub fn add_assign(&mut self, other: &LambdaPoly) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), DiffPoly::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        self.trim();
    }

    pub fn add(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &LambdaPoly) -> LambdaPoly {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rat) -> LambdaPoly {
        LambdaPoly::from_coeffs(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    /// Multiplies every coefficient by `p` (on the left; the algebra is commutative).
    pub fn mul_poly(&self, p: &DiffPoly) -> LambdaPoly {
        LambdaPoly::from_coeffs(self.coeffs.iter().map(|c| c * p).collect())
    }

    pub fn mul(&self, other: &LambdaPoly) -> LambdaPoly {
        if self.is_zero() || other.is_zero() {
            return LambdaPoly::zero();
        }
        let mut coeffs = vec![DiffPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        LambdaPoly::from_coeffs(coeffs)
    }

    /// Coefficientwise total derivative.
    pub fn derivative(&self) -> LambdaPoly {
        LambdaPoly::from_coeffs(self.coeffs.iter().map(DiffPoly::derivative).collect())
    }

    /// `(λ + ∂) R` with `∂` acting on the coefficients of `R`.
    pub fn lambda_plus_d(&self) -> LambdaPoly {
        let mut out = self.derivative();
        let mut shifted = vec![DiffPoly::zero()];
        shifted.extend(self.coeffs.iter().cloned());
        out.add_assign(&LambdaPoly::from_coeffs(shifted));
        out
    }

    pub fn lambda_plus_d_pow(&self, n: usize) -> LambdaPoly {
        ShiftCache::new(self).compute(n)
    }

    /// `Σ_k (-λ-∂)^k c_k` with `∂` acting on `c_k`, the substitution used by
    /// skewsymmetry.
    pub fn reflect(&self) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let term = LambdaPoly::constant(c.clone()).lambda_plus_d_pow(k);
            let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
            out.add_assign(&term.scale(&sign));
        }
        out
    }

    pub fn render(&self, labels: Option<&[String]>) -> String {
        render_lambda(self, labels, "λ", false)
    }

    pub fn to_latex(&self, labels: Option<&[String]>) -> String {
        render_lambda(self, labels, "\\lambda", true)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(DiffPoly::to_json).collect())
    }
}

type Two = BTreeMap<(usize, usize), DiffPoly>;

/// Cached left operand of the master formula; see [`PvaStructure::left`].
#[derive(Clone, Debug)]
pub struct LeftOperand {
    xs: Vec<(usize, ShiftCache)>,
    ys: Vec<Vec<Option<ShiftCache>>>,
}

/// Derivative chains of the coefficients of a fixed `R`, grown on demand,
/// so that `(λ+∂)^n R = Σ_k C(n,k) λ^k ∂^{n-k} R` costs no repeated work.
#[derive(Clone, Debug)]
struct ShiftCache {
    chains: Vec<Vec<DiffPoly>>,
    powers: Vec<Option<LambdaPoly>>,
}

impl ShiftCache {
    fn new(r: &LambdaPoly) -> Self {
        ShiftCache {
            chains: r.coeffs.iter().map(|c| vec![c.clone()]).collect(),
            powers: Vec::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.chains.is_empty()
    }

    fn pow(&mut self, n: usize) -> &LambdaPoly {
        if self.powers.len() <= n {
            self.powers.resize(n + 1, None);
        }
        if self.powers[n].is_none() {
            self.powers[n] = Some(self.compute(n));
        }
        self.powers[n].as_ref().expect("just filled")
    }

    fn compute(&mut self, n: usize) -> LambdaPoly {
        if self.chains.is_empty() {
            return LambdaPoly::zero();
        }
        for ch in &mut self.chains {
            while ch.len() <= n {
                let d = ch.last().expect("nonempty chain").derivative();
                ch.push(d);
            }
        }
        let mut coeffs = vec![DiffPoly::zero(); self.chains.len() + n];
        for (i, ch) in self.chains.iter().enumerate() {
            for k in 0..=n {
                let d = &ch[n - k];
                if d.is_zero() {
                    continue;
                }
                if k == 0 || k == n {
                    coeffs[i + k] += d;
                } else {
                    coeffs[i + k].add_scaled(&binomial(n, k), d);
                }
            }
        }
        LambdaPoly::from_coeffs(coeffs)
    }
}

fn render_lambda(p: &LambdaPoly, labels: Option<&[String]>, sym: &str, latex: bool) -> String {
    let parts: Vec<String> = p
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let body = if latex { c.to_latex(labels) } else { c.render(labels) };
            let power = match k {
                0 => String::new(),
                1 => sym.to_string(),
                _ if latex => format!("{sym}^{{{k}}}"),
                _ => format!("{sym}^{k}"),
            };
            if k == 0 {
                body
            } else if body == "1" {
                power
            } else if body == "-1" {
                format!("-{power}")
            } else if c.len() == 1 {
                format!("{body} {power}")
            } else {
                format!("({body}) {power}")
            }
        })
        .collect();
    let mut out = String::new();
    for (i, part) in parts.iter().enumerate() {
        match (i, part.strip_prefix('-')) {
            (0, _) => out.push_str(part),
            (_, Some(rest)) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            (_, None) => {
                out.push_str(" + ");
                out.push_str(part);
            }
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// A value affine in `z`: `z0 + z z1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZAffine<T> {
    pub z0: T,
    pub z1: T,
}

pub type Pencil = ZAffine<LambdaPoly>;

impl ZAffine<LambdaPoly> {
    pub fn new(z0: LambdaPoly, z1: LambdaPoly) -> Self {
        ZAffine { z0, z1 }
    }

    pub fn at(&self, z: &Rat) -> LambdaPoly {
        self.z0.add(&self.z1.scale(z))
    }

    pub fn part(&self, k: usize) -> &LambdaPoly {
        if k == 0 {
            &self.z0
        } else {
            &self.z1
        }
    }

    pub fn is_zero(&self) -> bool {
        self.z0.is_zero() && self.z1.is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({"lambda_powers": self.z0.to_json(), "z_part": self.z1.to_json()})
    }
}

impl ZAffine<DiffPoly> {
    pub fn at(&self, z: &Rat) -> DiffPoly {
        let mut out = self.z0.clone();
        out.add_scaled(z, &self.z1);
        out
    }
}

/// λ-bracket structure on the differential polynomials in `n_gens` generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PvaStructure {
    pub n_gens: usize,
    pub labels: Vec<String>,
    /// `{u_i λ u_j}` at index `i * n_gens + j`.
    pub table: Vec<Pencil>,
}

impl PvaStructure {
    pub fn new(labels: Vec<String>, table: Vec<Pencil>) -> Result<Self> {
        let n = labels.len();
        if table.len() != n * n {
            return Err(Error::Shape(format!("bracket table needs {} entries", n * n)));
        }
        for entry in &table {
            for part in [&entry.z0, &entry.z1] {
                if part.coeffs().iter().any(|c| c.gen_bound() > n) {
                    return Err(Error::Domain("bracket table mentions an unknown generator".into()));
                }
            }
        }
        Ok(PvaStructure {
            n_gens: n,
            labels,
            table,
        })
    }

    /// A z-independent structure from a plain table.
    pub fn single(labels: Vec<String>, table: Vec<LambdaPoly>) -> Result<Self> {
        let table = table.into_iter().map(|t| Pencil::new(t, LambdaPoly::zero())).collect();
        PvaStructure::new(labels, table)
    }

    /// Affine structure on `V(g)`: `{a_λ b} = [a,b] + (a|b)λ + z(s|[a,b])`.
    pub fn affine(alg: &LieAlgebra, s: &[Rat]) -> Self {
        let n = alg.dim();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let br = alg.basis_bracket(i, j);
                let z0 = LambdaPoly::from_coeffs(vec![
                    DiffPoly::linear(br),
                    DiffPoly::constant(alg.gram()[(i, j)].clone()),
                ]);
                let z1 = LambdaPoly::constant(DiffPoly::constant(alg.form(s, br)));
                table.push(Pencil::new(z0, z1));
            }
        }
        PvaStructure {
            n_gens: n,
            labels: alg.labels().to_vec(),
            table,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &Pencil {
        &self.table[i * self.n_gens + j]
    }

    /// The structure `{·_λ·}` at a fixed value of `z`.
    pub fn specialize(&self, z: &Rat) -> PvaStructure {
        PvaStructure {
            n_gens: self.n_gens,
            labels: self.labels.clone(),
            table: self
                .table
                .iter()
                .map(|p| Pencil::new(p.at(z), LambdaPoly::zero()))
                .collect(),
        }
    }

    /// The z^k coefficient as a z-independent structure.
    pub fn z_part(&self, k: usize) -> PvaStructure {
        PvaStructure {
            n_gens: self.n_gens,
            labels: self.labels.clone(),
            table: self
                .table
                .iter()
                .map(|p| Pencil::new(p.part(k).clone(), LambdaPoly::zero()))
                .collect(),
        }
    }

    pub fn is_z_independent(&self) -> bool {
        self.table.iter().all(|p| p.z1.is_zero())
    }

    fn check_domain(&self, p: &DiffPoly) -> Result<()> {
        if p.gen_bound() > self.n_gens {
            return Err(Error::Domain(format!(
                "polynomial uses generator u{} but the structure has {}",
                p.gen_bound() - 1,
                self.n_gens
            )));
        }
        Ok(())
    }

    /// `{P_λ Q}_z` by the master formula
    /// `Σ ∂Q/∂u_j^{(n)} (λ+∂)^n {u_i λ+∂ u_j}→ (-λ-∂)^m ∂P/∂u_i^{(m)}`.
    pub fn bracket(&self, p: &DiffPoly, q: &DiffPoly) -> Result<Pencil> {
        self.bracket_with(&mut self.left(p)?, q)
    }

    /// Everything in the master formula that depends on `P` alone, filled in
    /// lazily and reusable across right operands.
    pub fn left(&self, p: &DiffPoly) -> Result<LeftOperand> {
        self.check_domain(p)?;
        let mut xs: BTreeMap<usize, LambdaPoly> = BTreeMap::new();
        for v in p.vars() {
            let d = LambdaPoly::constant(p.partial(v)).lambda_plus_d_pow(v.order);
            let d = if v.order % 2 == 1 { d.scale(&rat(-1)) } else { d };
            xs.entry(v.gen).or_default().add_assign(&d);
        }
        let parts = if self.is_z_independent() { 1 } else { 2 };
        Ok(LeftOperand {
            xs: xs.iter().map(|(&i, x)| (i, ShiftCache::new(x))).collect(),
            ys: vec![vec![None; self.n_gens]; parts],
        })
    }

    pub fn bracket_with(&self, left: &mut LeftOperand, q: &DiffPoly) -> Result<Pencil> {
        self.check_domain(q)?;
        let q_vars: Vec<Var> = q.vars().into_iter().collect();
        let mut out = Pencil::default();
        for part in 0..left.ys.len() {
            let mut total = LambdaPoly::zero();
            for v in &q_vars {
                let y = self.y_chain(left, part, v.gen);
                if y.is_zero() {
                    continue;
                }
                total.add_assign(&y.pow(v.order).mul_poly(&q.partial(*v)));
            }
            if part == 0 {
                out.z0 = total;
            } else {
                out.z1 = total;
            }
        }
        Ok(out)
    }

    /// `Σ_i {u_i λ+∂ u_j}→ X_i` for one z-part, cached in `left`.
    fn y_chain<'a>(&self, left: &'a mut LeftOperand, part: usize, j: usize) -> &'a mut ShiftCache {
        let LeftOperand { xs, ys } = left;
        ys[part][j].get_or_insert_with(|| {
            let mut y = LambdaPoly::zero();
            for (i, x) in xs.iter_mut() {
                let c = self.entry(*i, j).part(part);
                for (k, ck) in c.coeffs().iter().enumerate() {
                    if !ck.is_zero() {
                        y.add_assign(&x.pow(k).mul_poly(ck));
                    }
                }
            }
            ShiftCache::new(&y)
        })
    }

    /// `{∫f, ∫g} = ∫{f_λ g}|_{λ=0}`, split into z-parts.
    pub fn functional_bracket(&self, f: &LocalFunctional, g: &LocalFunctional) -> Result<ZAffine<LocalFunctional>> {
        let b = self.bracket(f.representative(), g.representative())?;
        Ok(ZAffine {
            z0: LocalFunctional::new(b.z0.at_zero()),
            z1: LocalFunctional::new(b.z1.at_zero()),
        })
    }

    /// `du/dt = {h_λ u}|_{λ=0}` for each target generator.
    pub fn hamiltonian_flow(&self, h: &DiffPoly, targets: &[usize]) -> Result<Vec<ZAffine<DiffPoly>>> {
        targets
            .iter()
            .map(|&t| {
                if t >= self.n_gens {
                    return Err(Error::Domain(format!("unknown generator {t}")));
                }
                let b = self.bracket(h, &DiffPoly::gen(t))?;
                Ok(ZAffine {
                    z0: b.z0.at_zero(),
                    z1: b.z1.at_zero(),
                })
            })
            .collect()
    }

    /// Checks sesquilinearity, skewsymmetry, both Leibniz rules and Jacobi on
    /// consecutive pairs and triples of `samples`. Linear axioms are checked on
    /// each z-part; Jacobi, quadratic in `z`, at `z = 0, 1, -1`.
    pub fn verify_axioms(&self, samples: &[DiffPoly]) -> Result<AxiomReport> {
        let mut report = AxiomReport::default();
        let parts = [self.z_part(0), self.z_part(1)];
        let pencil = !self.is_z_independent();
        let count = samples.len();
        for k in 0..count {
            let a = &samples[k];
            let b = &samples[(k + 1) % count];
            let c = &samples[(k + 2) % count];
            for (zi, st) in parts.iter().enumerate() {
                if zi == 1 && self.is_z_independent() {
                    continue;
                }
                report.record("sesquilinearity", k, st.check_sesquilinearity(a, b)?);
                report.record("skewsymmetry", k, st.check_skewsymmetry(a, b)?);
                report.record("left Leibniz", k, st.check_left_leibniz(a, b, c)?);
                report.record("right Leibniz", k, st.check_right_leibniz(a, b, c)?);
            }
            // The Jacobi defect is quadratic in z; each coefficient vanishes.
            report.record("Jacobi", k, parts[0].check_jacobi(a, b, c)?);
            if pencil {
                report.record("Jacobi", k, parts[1].check_jacobi(a, b, c)?);
                report.record("Jacobi", k, parts[0].check_jacobi_mixed(&parts[1], a, b, c)?);
            }
        }
        Ok(report)
    }

    fn z0(&self, p: &DiffPoly, q: &DiffPoly) -> Result<LambdaPoly> {
        Ok(self.bracket(p, q)?.z0)
    }

    /// `{∂a_λ b} = -λ{a_λ b}` and `{a_λ ∂b} = (λ+∂){a_λ b}`.
    pub fn check_sesquilinearity(&self, a: &DiffPoly, b: &DiffPoly) -> Result<bool> {
        let ab = self.z0(a, b)?;
        let left = self.z0(&a.derivative(), b)?;
        let mut minus_lambda = vec![DiffPoly::zero()];
        minus_lambda.extend(ab.coeffs().iter().map(|c| c.scale(&rat(-1))));
        let right = self.z0(a, &b.derivative())?;
        Ok(left == LambdaPoly::from_coeffs(minus_lambda) && right == ab.lambda_plus_d())
    }

    /// `{b_λ a} = -{a_{-λ-∂} b}`.
    pub fn check_skewsymmetry(&self, a: &DiffPoly, b: &DiffPoly) -> Result<bool> {
        let ab = self.z0(a, b)?;
        let ba = self.z0(b, a)?;
        Ok(ba.add(&ab.reflect()).is_zero())
    }

    /// `{a_λ bc} = {a_λ b}c + {a_λ c}b`.
    pub fn check_left_leibniz(&self, a: &DiffPoly, b: &DiffPoly, c: &DiffPoly) -> Result<bool> {
        let lhs = self.z0(a, &(b * c))?;
        let rhs = self.z0(a, b)?.mul_poly(c).add(&self.z0(a, c)?.mul_poly(b));
        Ok(lhs == rhs)
    }

    /// `{ab_λ c} = {a_{λ+∂} c}→ b + {b_{λ+∂} c}→ a`.
    pub fn check_right_leibniz(&self, a: &DiffPoly, b: &DiffPoly, c: &DiffPoly) -> Result<bool> {
        let lhs = self.z0(&(a * b), c)?;
        let arrow = |br: &LambdaPoly, x: &DiffPoly| {
            let mut out = LambdaPoly::zero();
            let mut power = LambdaPoly::constant(x.clone());
            for (k, ck) in br.coeffs().iter().enumerate() {
                if k > 0 {
                    power = power.lambda_plus_d();
                }
                out.add_assign(&power.mul_poly(ck));
            }
            out
        };
        let rhs = arrow(&self.z0(a, c)?, b).add(&arrow(&self.z0(b, c)?, a));
        Ok(lhs == rhs)
    }

    /// `{a_λ{b_µ c}} - {b_µ{a_λ c}} = {{a_λ b}_{λ+µ} c}` as polynomials in λ, µ.
    pub fn check_jacobi(&self, a: &DiffPoly, b: &DiffPoly, c: &DiffPoly) -> Result<bool> {
        let (mut lhs, mut rhs) = self.jacobi_sides(self, a, b, c)?;
        lhs.retain(|_, p| !p.is_zero());
        rhs.retain(|_, p| !p.is_zero());
        Ok(lhs == rhs)
    }

    /// The z-linear part of Jacobi for the pencil `self + z·other`: the sum of
    /// both mixed compositions vanishes.
    pub fn check_jacobi_mixed(&self, other: &PvaStructure, a: &DiffPoly, b: &DiffPoly, c: &DiffPoly) -> Result<bool> {
        let (mut lhs, mut rhs) = self.jacobi_sides(other, a, b, c)?;
        let (l2, r2) = other.jacobi_sides(self, a, b, c)?;
        for (k, p) in &l2 {
            *lhs.entry(*k).or_default() += p;
        }
        for (k, p) in &r2 {
            *rhs.entry(*k).or_default() += p;
        }
        lhs.retain(|_, p| !p.is_zero());
        rhs.retain(|_, p| !p.is_zero());
        Ok(lhs == rhs)
    }

    /// Both sides of Jacobi with `self` as the outer and `inner` as the inner
    /// bracket, keyed by the powers of (λ, µ).
    fn jacobi_sides(&self, inner: &PvaStructure, a: &DiffPoly, b: &DiffPoly, c: &DiffPoly) -> Result<(Two, Two)> {
        // {a_λ {b_µ c}}
        let mut lhs: Two = BTreeMap::new();
        let mut la = self.left(a)?;
        for (m, bk) in inner.z0(b, c)?.coeffs().iter().enumerate() {
            for (l, d) in self.bracket_with(&mut la, bk)?.z0.coeffs.into_iter().enumerate() {
                if !d.is_zero() {
                    lhs.insert((l, m), d);
                }
            }
        }
        // {b_µ {a_λ c}} + {{a_λ b}_{λ+µ} c}
        let mut rhs: Two = BTreeMap::new();
        let mut lb = self.left(b)?;
        for (l, ak) in inner.z0(a, c)?.coeffs().iter().enumerate() {
            for (m, d) in self.bracket_with(&mut lb, ak)?.z0.coeffs().iter().enumerate() {
                *rhs.entry((l, m)).or_default() += d;
            }
        }
        for (l, ck) in inner.z0(a, b)?.coeffs().iter().enumerate() {
            for (j, d) in self.z0(ck, c)?.coeffs().iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                for r in 0..=j {
                    let e = rhs.entry((l + r, j - r)).or_default();
                    if r == 0 || r == j {
                        *e += d;
                    } else {
                        e.add_scaled(&binomial(j, r), d);
                    }
                }
            }
        }
        Ok((lhs, rhs))
    }

    /// Table as JSON: one entry per generator pair.
    pub fn to_json(&self) -> Value {
        let mut entries = Vec::new();
        for i in 0..self.n_gens {
            for j in 0..self.n_gens {
                let e = self.entry(i, j);
                entries.push(json!({
                    "i": i,
                    "j": j,
                    "lambda_powers": e.z0.to_json(),
                    "z_part": e.z1.to_json(),
                }));
            }
        }
        json!({"generators": self.labels, "brackets": entries})
    }

    /// Display-math lines `\{a_\lambda b\}_z = ...`.
    pub fn to_latex(&self) -> String {
        let labels = Some(self.labels.as_slice());
        let mut lines = Vec::new();
        for i in 0..self.n_gens {
            for j in 0..self.n_gens {
                let e = self.entry(i, j);
                let z1 = format!("z\\left({}\\right)", e.z1.to_latex(labels));
                let rhs = match (e.z0.is_zero(), e.z1.is_zero()) {
                    (true, false) => z1,
                    (false, false) => format!("{} + {z1}", e.z0.to_latex(labels)),
                    _ => e.z0.to_latex(labels),
                };
                lines.push(format!(
                    "\\{{{} {{}}_\\lambda {}\\}}_z = {rhs}",
                    self.labels[i], self.labels[j]
                ));
            }
        }
        format!("\\begin{{aligned}}\n{}\n\\end{{aligned}}", lines.join(" \\\\\n"))
    }
}

/// Outcome of [`PvaStructure::verify_axioms`].
#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    fn record(&mut self, axiom: &str, sample: usize, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures.push(format!("{axiom} fails at sample {sample}"));
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.failures.first().map(String::as_str)
    }
}

/// `{u_λ u} = λ`.
pub fn kdv_bracket0() -> PvaStructure {
    let t = LambdaPoly::monomial(DiffPoly::one(), 1);
    PvaStructure::single(vec!["u".into()], vec![t]).expect("valid table")
}

/// `{u_λ u} = u' + 2uλ + cλ³`.
pub fn kdv_bracket1(c: &Rat) -> PvaStructure {
    let t = LambdaPoly::from_coeffs(vec![
        DiffPoly::var(Var::new(0, 1)),
        DiffPoly::gen(0).scale(&rat(2)),
        DiffPoly::zero(),
        DiffPoly::constant(c.clone()),
    ]);
    PvaStructure::single(vec!["u".into()], vec![t]).expect("valid table")
}
