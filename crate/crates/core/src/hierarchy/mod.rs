//! Generalized Drinfeld-Sokolov hierarchies.

mod dressing;
mod hk;
mod lenard_magri;
mod zgraded;

pub use dressing::{check_dressing, dressing_solve, exp_ad, DressingCheck, DressingResult, DsContext};
pub use hk::{DegreePiece, HkDecomposition};
pub use lenard_magri::{
    flow_equations, lenard_magri_verify, HierarchyFlow, KdvNormalization, LenardMagriReport, LmStep,
};
pub use zgraded::{StructureTable, ZGradedElement, ZGrading};

use num_traits::Zero;
use serde_json::{json, Value};

use crate::diffpoly::{DiffPoly, LocalFunctional};
use crate::error::{Error, Result};
use crate::lie::{build_polarization, LagrangianChoice, LieAlgebra, SlodowyFrame};
use crate::linalg::{Matrix, Vector};
use crate::pva::PvaStructure;
use crate::rational::Rat;
use crate::walgebra::ReductionRealization;

/// Whether `s` commutes with `n` and `f + s` is semisimple.
pub fn check_cyclic_element(frame: &SlodowyFrame, s: &[Rat]) -> Result<bool> {
    let alg = &frame.alg;
    if !s.iter().all(Zero::is_zero) && frame.grading.degree_of(s).is_none() {
        return Err(Error::Grading(alg.describe(s)));
    }
    let pol = build_polarization(frame, LagrangianChoice::default())?;
    if pol.n_basis.iter().any(|n| !alg.bracket(s, n).iter().all(Zero::is_zero)) {
        return Ok(false);
    }
    let fs: Vector = frame.triple.f.iter().zip(s).map(|(a, b)| a + b).collect();
    Ok(is_semisimple_matrix(&alg.semisimplicity_matrix(&fs)))
}

/// Squarefree minimal polynomial over `Q`.
pub fn is_semisimple_matrix(m: &Matrix) -> bool {
    let p = minimal_polynomial(m);
    poly_degree(&poly_gcd(&p, &poly_derivative(&p))) == 0
}

/// Monic minimal polynomial, coefficients by ascending power.
pub fn minimal_polynomial(m: &Matrix) -> Vec<Rat> {
    let n = m.rows();
    let flatten = |a: &Matrix| -> Vector { (0..n).flat_map(|i| a.row(i).to_vec()).collect() };
    let mut powers = vec![Matrix::identity(n)];
    loop {
        let next = powers.last().expect("nonempty").mul(m);
        let cols: Vec<Vector> = powers.iter().map(&flatten).collect();
        let basis = Matrix::from_columns(n * n, &cols);
        if let Some(c) = basis.solve(&flatten(&next)) {
            // m^k = Σ c_i m^i
            let mut p: Vec<Rat> = c.into_iter().map(|x| -x).collect();
            p.push(Rat::from(1));
            return p;
        }
        powers.push(next);
    }
}

fn poly_degree(p: &[Rat]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

fn poly_trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_derivative(p: &[Rat]) -> Vec<Rat> {
    let d: Vec<Rat> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rat::from(i as i64))
        .collect();
    if d.is_empty() {
        vec![Rat::zero()]
    } else {
        poly_trim(d)
    }
}

fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = poly_trim(a.to_vec());
    let db = poly_degree(b);
    let lead = b[db].clone();
    while poly_degree(&r) >= db && !r.iter().all(Zero::is_zero) {
        let dr = poly_degree(&r);
        let q = &r[dr] / &lead;
        for i in 0..=db {
            r[dr - db + i] -= &q * &b[i];
        }
        r = poly_trim(r);
        if dr == 0 {
            break;
        }
    }
    r
}

fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let (mut a, mut b) = (poly_trim(a.to_vec()), poly_trim(b.to_vec()));
    while !b.iter().all(Zero::is_zero) {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// `E_{1n}` for `sl_n`, the highest root vector.
pub fn principal_default_s(alg: &LieAlgebra) -> Option<Vector> {
    let n = alg.matrix_size()?;
    let mut m = Matrix::zeros(n, n);
    m[(0, n - 1)] = Rat::from(1);
    alg.from_matrix(&m)
}

/// One conserved density `g_n` from `(a(z) | h(z))`.
#[derive(Clone, Debug)]
pub struct ConservedDensity {
    pub n: usize,
    /// The `z^{-n}` coefficient, a polynomial in the `p`-variables.
    pub raw: DiffPoly,
    /// Its image in the `g^f`-generators.
    pub w_coords: DiffPoly,
    /// The W-element with the same image.
    pub w_representative: DiffPoly,
    /// `F` with `raw - w_representative = ∂F`, when it exists.
    pub antiderivative: Option<DiffPoly>,
    /// `w_representative` passes the W-membership test.
    pub is_w_element: bool,
}

impl ConservedDensity {
    pub fn holds(&self) -> bool {
        self.is_w_element && self.antiderivative.is_some()
    }

    pub fn functional(&self) -> LocalFunctional {
        LocalFunctional::new(self.w_coords.clone())
    }
}

/// Coefficients `g_0 .. g_{count-1}` of `(a(z)|h(z))`, each matched with a W-element
/// modulo total derivatives. The default center is `Λ = f + zs`.
pub fn conserved_densities(
    real: &ReductionRealization,
    ctx: &DsContext,
    hk: &HkDecomposition,
    result: &DressingResult,
    center: Option<&ZGradedElement>,
    count: usize,
) -> Result<Vec<ConservedDensity>> {
    let gr = &ctx.grading;
    let a = center.unwrap_or(&ctx.lambda);
    if count == 0 {
        return Ok(Vec::new());
    }
    let degrees = a.degrees(gr);
    let a_deg2 = match (a.is_constant(), degrees.len()) {
        (true, 1) => *degrees.iter().next().expect("one degree"),
        _ => {
            return Err(Error::InvalidCenter(
                "a(z) must be a nonzero homogeneous constant element".into(),
            ))
        }
    };
    if !hk.centralizes_h(a) {
        return Err(Error::InvalidCenter(
            "a(z) does not commute with h in the window".into(),
        ));
    }
    let needed = ctx.density_degree(a_deg2, count - 1);
    if needed > result.hi2 {
        return Err(Error::Truncation(format!(
            "g_{} needs h in degree {needed}/2, window ends at {}/2",
            count - 1,
            result.hi2
        )));
    }
    let g = a.pair(&result.h, &ctx.gram);
    (0..count)
        .map(|n| {
            let raw = g.get(&-(n as i64)).cloned().unwrap_or_default();
            let w_coords = real.res(&raw)?;
            let w_representative = real.lift(&w_coords)?;
            let is_w_element = real.is_w_element(&w_representative)?;
            let diff = &raw - &w_representative;
            let antiderivative = if diff.is_zero() {
                Some(DiffPoly::zero())
            } else {
                diff.integrate().filter(|f| f.derivative() == diff)
            };
            Ok(ConservedDensity {
                n,
                raw,
                w_coords,
                w_representative,
                antiderivative,
                is_w_element,
            })
        })
        .collect()
}

/// Everything produced for one hierarchy run.
#[derive(Clone, Debug)]
pub struct HierarchyReport {
    pub depth: usize,
    pub dressing: DressingCheck,
    pub densities: Vec<ConservedDensity>,
    pub normalization: Option<KdvNormalization>,
    pub lenard_magri: LenardMagriReport,
    pub flows: Vec<HierarchyFlow>,
    pub labels: Vec<String>,
}

impl HierarchyReport {
    pub fn passed(&self) -> bool {
        self.dressing.passed() && self.densities.iter().all(ConservedDensity::holds) && self.lenard_magri.passed()
    }

    pub fn to_json(&self) -> Value {
        let labels = &self.labels;
        let flows: Vec<Value> = self
            .flows
            .iter()
            .map(|fl| {
                let eqs: serde_json::Map<String, Value> = fl
                    .equations
                    .iter()
                    .enumerate()
                    .map(|(j, p)| (labels[j].clone(), p.to_json()))
                    .collect();
                let text: serde_json::Map<String, Value> = fl
                    .equations
                    .iter()
                    .enumerate()
                    .map(|(j, p)| (labels[j].clone(), Value::String(p.render(Some(labels)))))
                    .collect();
                let density = fl.density.representative();
                json!({
                    "n": fl.n,
                    "density": density.to_json(),
                    "density_text": density.render(Some(labels)),
                    "flows": eqs,
                    "flows_text": text,
                })
            })
            .collect();
        json!({
            "generators": labels,
            "depth": self.depth,
            "normalization": self.normalization.as_ref().map(KdvNormalization::to_json),
            "scalars": self.lenard_magri.scalars.iter().map(crate::rational::fmt_rat).collect::<Vec<_>>(),
            "checks": {
                "dressing_residual": self.dressing.residual_zero,
                "h_in_kernel": self.dressing.h_in_kernel,
                "u_in_image": self.dressing.u_in_image,
                "round_trip": self.dressing.round_trip,
                "densities_in_w": self.densities.iter().all(ConservedDensity::holds),
                "lenard_magri": self.lenard_magri.passed(),
            },
            "hierarchy": flows,
        })
    }

    pub fn to_latex(&self) -> String {
        let labels = Some(self.labels.as_slice());
        let mut lines = Vec::new();
        for fl in &self.flows {
            lines.push(format!(
                "g_{{{}}} &= \\textstyle\\int {}",
                fl.n,
                fl.density.representative().to_latex(labels)
            ));
            for (j, eq) in fl.equations.iter().enumerate() {
                lines.push(format!(
                    "\\frac{{d{}}}{{dt_{{{}}}}} &= {}",
                    self.labels[j],
                    fl.n,
                    eq.to_latex(labels)
                ));
            }
        }
        format!("\\begin{{aligned}}\n{}\n\\end{{aligned}}", lines.join(" \\\\\n"))
    }
}

/// Dressing, densities, Lenard-Magri check and flows for `count` densities.
pub fn run_hierarchy(
    real: &ReductionRealization,
    w: &PvaStructure,
    count: usize,
    center: Option<&ZGradedElement>,
) -> Result<HierarchyReport> {
    let ctx = DsContext::new(real)?;
    let one = Rat::from(1);
    let (result, hk) = dressing_solve(&ctx, count, &one, None)?;
    let dressing = check_dressing(&ctx, &hk, &result, &one, false)?;
    let densities = conserved_densities(real, &ctx, &hk, &result, center, count)?;
    let normalization = KdvNormalization::detect(w);
    let (b0, b1) = match &normalization {
        Some(nm) => nm.brackets(w)?,
        None => (w.z_part(1), w.z_part(0)),
    };
    let functionals: Vec<DiffPoly> = densities.iter().map(|d| d.w_coords.clone()).collect();
    let lenard_magri = lenard_magri_verify(&b0, &b1, &functionals)?;
    let flows = flow_equations(&b0, &b1, &lenard_magri.normalized)?;
    let labels = if normalization.is_some() {
        b0.labels.clone()
    } else {
        w.labels.clone()
    };
    Ok(HierarchyReport {
        depth: count,
        dressing,
        densities,
        normalization,
        lenard_magri,
        flows,
        labels,
    })
}

#[cfg(test)]
mod tests;
