use serde_json::{json, Value};

use crate::diffpoly::{DiffPoly, LocalFunctional, Monomial, Var};
use crate::error::Result;
use crate::pva::PvaStructure;
use crate::rational::{fmt_rat, Rat};

/// Rescaling of a one-generator pencil `{w_λ w}_z` onto the KdV pair
/// `{u_λ u}_0 = λ`, `{u_λ u}_1 = u' + 2uλ + cλ³` with `u = w`:
/// `{·}_0 = β0 · (z¹ part)` and `{·}_1 = β1 · (z⁰ part)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KdvNormalization {
    pub beta0: Rat,
    pub beta1: Rat,
    pub c: Rat,
}

impl KdvNormalization {
    /// Recognizes `z⁰: a w' + 2a wλ + bλ³`, `z¹: eλ` with `a, e ≠ 0`.
    pub fn detect(w: &PvaStructure) -> Option<Self> {
        if w.n_gens != 1 {
            return None;
        }
        let p = w.entry(0, 0);
        let (z0, z1) = (&p.z0, &p.z1);
        if z0.degree()? > 3 || z1.degree()? != 1 {
            return None;
        }
        let du = Monomial::var(Var::new(0, 1));
        let a = z0.coeff(0).coeff(&du);
        let e = z1.coeff(1).constant_term();
        if a.is_zero() || e.is_zero() {
            return None;
        }
        let two_a = &a + &a;
        let shape = z0.coeff(0) == DiffPoly::var(Var::new(0, 1)).scale(&a)
            && z0.coeff(1) == DiffPoly::gen(0).scale(&two_a)
            && z0.coeff(2).is_zero()
            && z0.coeff(3).is_constant()
            && z1.coeff(0).is_zero()
            && z1.coeff(1).is_constant();
        if !shape {
            return None;
        }
        let b = z0.coeff(3).constant_term();
        let one = Rat::from(1);
        Some(KdvNormalization {
            beta0: &one / &e,
            beta1: &one / &a,
            c: &b / &a,
        })
    }

    /// `({·}_0, {·}_1)` on the single generator `u`.
    pub fn brackets(&self, w: &PvaStructure) -> Result<(PvaStructure, PvaStructure)> {
        let scaled = |part: usize, k: &Rat| {
            let t = w.z_part(part).table.iter().map(|p| p.z0.scale(k)).collect();
            PvaStructure::single(vec!["u".into()], t)
        };
        Ok((scaled(1, &self.beta0)?, scaled(0, &self.beta1)?))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "u": "w",
            "beta0": fmt_rat(&self.beta0),
            "beta1": fmt_rat(&self.beta1),
            "c": fmt_rat(&self.c),
        })
    }
}

/// One recursion step `{ĝ_{n+1} λ u}_0 = {ĝ_n λ u}_1` at `λ = 0`.
#[derive(Clone, Debug)]
pub struct LmStep {
    pub n: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, Default)]
pub struct LenardMagriReport {
    /// `{g_0 λ u}_0 = 0`.
    pub casimir: bool,
    pub steps: Vec<LmStep>,
    /// `(m, n, involutive under {·}_0, under {·}_1)`.
    pub involution: Vec<(usize, usize, bool, bool)>,
    /// Factor applied to each input density.
    pub scalars: Vec<Rat>,
    pub normalized: Vec<DiffPoly>,
}

impl LenardMagriReport {
    pub fn passed(&self) -> bool {
        self.casimir && self.steps.iter().all(|s| s.holds) && self.involution.iter().all(|&(_, _, a, b)| a && b)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.casimir {
            out.push("g_0 is not a Casimir of the first bracket".into());
        }
        for s in self.steps.iter().filter(|s| !s.holds) {
            out.push(format!("recursion fails between g_{} and g_{}", s.n, s.n + 1));
        }
        for &(m, n, a, b) in &self.involution {
            if !(a && b) {
                out.push(format!("g_{m} and g_{n} are not in involution"));
            }
        }
        out
    }
}

fn flow(b: &PvaStructure, g: &DiffPoly) -> Result<Vec<DiffPoly>> {
    let targets: Vec<usize> = (0..b.n_gens).collect();
    Ok(b.hamiltonian_flow(g, &targets)?.into_iter().map(|z| z.z0).collect())
}

fn leading_coefficient(p: &DiffPoly) -> Option<Rat> {
    p.terms().find(|(m, _)| !m.is_one()).map(|(_, c)| c.clone())
}

/// Solves `κ x = y` termwise; `None` if `x = 0` or no such `κ` exists.
fn proportionality(x: &[DiffPoly], y: &[DiffPoly]) -> Option<Rat> {
    let (i, (m, c)) = x
        .iter()
        .enumerate()
        .find_map(|(i, p)| p.terms().next().map(|(m, c)| (i, (m.clone(), c.clone()))))?;
    let k = y[i].coeff(&m) / c;
    x.iter().zip(y).all(|(a, b)| &a.scale(&k) == b).then_some(k)
}

/// Checks the recursion and pairwise involution for `densities`, solving for one
/// scalar per density. The first density is normalized to leading coefficient 1.
pub fn lenard_magri_verify(b0: &PvaStructure, b1: &PvaStructure, densities: &[DiffPoly]) -> Result<LenardMagriReport> {
    let mut report = LenardMagriReport::default();
    let Some(first) = densities.first() else {
        report.casimir = true;
        return Ok(report);
    };
    report.casimir = flow(b0, first)?.iter().all(DiffPoly::is_zero);
    let one = Rat::from(1);
    let s0 = leading_coefficient(first).map_or(one.clone(), |c| &one / &c);
    report.normalized.push(first.scale(&s0));
    report.scalars.push(s0);
    for n in 0..densities.len() - 1 {
        let x = flow(b0, &densities[n + 1])?;
        let y = flow(b1, &report.normalized[n])?;
        let k = proportionality(&x, &y);
        report.steps.push(LmStep { n, holds: k.is_some() });
        let k = k.unwrap_or(one.clone());
        report.normalized.push(densities[n + 1].scale(&k));
        report.scalars.push(k);
    }
    let fs: Vec<LocalFunctional> = report.normalized.iter().cloned().map(LocalFunctional::new).collect();
    for m in 0..fs.len() {
        for n in m + 1..fs.len() {
            let a = b0.functional_bracket(&fs[m], &fs[n])?.z0.is_zero();
            let b = b1.functional_bracket(&fs[m], &fs[n])?.z0.is_zero();
            report.involution.push((m, n, a, b));
        }
    }
    Ok(report)
}

/// `du/dt_n = {ĝ_n λ u}_1|_{λ=0}` for every generator.
#[derive(Clone, Debug)]
pub struct HierarchyFlow {
    pub n: usize,
    pub density: LocalFunctional,
    pub equations: Vec<DiffPoly>,
    /// `{ĝ_{n+1} λ u}_0|_{λ=0}` agrees with `equations`, when `ĝ_{n+1}` is known.
    pub second_form: Option<bool>,
}

pub fn flow_equations(b0: &PvaStructure, b1: &PvaStructure, normalized: &[DiffPoly]) -> Result<Vec<HierarchyFlow>> {
    normalized
        .iter()
        .enumerate()
        .map(|(n, g)| {
            let equations = flow(b1, g)?;
            let second_form = match normalized.get(n + 1) {
                Some(next) => Some(flow(b0, next)? == equations),
                None => None,
            };
            Ok(HierarchyFlow {
                n,
                density: LocalFunctional::new(g.clone()),
                equations,
                second_form,
            })
        })
        .collect()
}
