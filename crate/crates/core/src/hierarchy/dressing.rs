use std::collections::BTreeMap;

use super::hk::HkDecomposition;
use super::zgraded::{StructureTable, ZGradedElement, ZGrading};
use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};
use crate::linalg::{coordinates, Matrix};
use crate::rational::{factorial, Rat};
use crate::walgebra::ReductionRealization;

/// Everything the dressing needs, expressed on the adapted basis `p ++ n`.
#[derive(Clone, Debug)]
pub struct DsContext {
    pub grading: ZGrading,
    pub table: StructureTable,
    pub gram: Matrix,
    /// Doubled degree of `s`.
    pub s_deg2: i64,
    /// `Λ = f + zs`.
    pub lambda: ZGradedElement,
    /// `Σ q^i ⊗ q_i` over the `p`-basis, `q^i ∈ n^⊥` dual to `q_i`.
    pub q: ZGradedElement,
    pub p_dim: usize,
}

impl DsContext {
    pub fn new(real: &ReductionRealization) -> Result<Self> {
        let pol = &real.polarization;
        let alg = &pol.adapted;
        let deg2 = pol.adapted_deg2.clone();
        let mut s_degrees: Vec<i64> = real
            .s
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, _)| deg2[a])
            .collect();
        s_degrees.dedup();
        let s_deg2 = match s_degrees.as_slice() {
            [] => return Err(Error::Domain("s = 0 gives no Drinfeld-Sokolov hierarchy".into())),
            [d] => *d,
            _ => return Err(Error::Grading("s mixes several ad x-degrees".into())),
        };
        let grading = ZGrading::new(deg2, s_deg2);
        let f = coordinates(&pol.adapted_basis(), &real.frame.triple.f)
            .ok_or_else(|| Error::Internal("adapted basis does not span g".into()))?;
        let one = DiffPoly::one();
        let mut lambda = ZGradedElement::from_vector(&f, 0, &one);
        lambda.add_assign(&ZGradedElement::from_vector(&real.s, 1, &one));
        let gram = alg.gram().clone();
        let dual = gram
            .inverse()
            .ok_or_else(|| Error::Internal("degenerate invariant form".into()))?;
        let p_dim = pol.p_dim();
        let mut q = ZGradedElement::zero();
        for i in 0..p_dim {
            q.add_assign(&ZGradedElement::from_vector(&dual.column(i), 0, &DiffPoly::gen(i)));
        }
        Ok(DsContext {
            grading,
            table: StructureTable::new(alg),
            gram,
            s_deg2,
            lambda,
            q,
            p_dim,
        })
    }

    /// `Λ + q` with the `q_i`-coefficients multiplied by `t` (used for the zero test).
    pub fn operator(&self, scale_q: &Rat) -> ZGradedElement {
        let mut x = self.lambda.clone();
        x.add_scaled(scale_q, &self.q);
        x
    }

    /// Doubled window `[-1, N(d+1)+1]` for `N` densities.
    pub fn window(&self, depth: usize) -> (i64, i64) {
        (-2, depth as i64 * (self.s_deg2 + 2) + 2)
    }

    /// Doubled degree of the `h`-component feeding `g_n` for a center of degree `a_deg2`.
    pub fn density_degree(&self, a_deg2: i64, n: usize) -> i64 {
        -a_deg2 + n as i64 * (self.s_deg2 + 2)
    }

    pub fn decomposition(&self, hi2: i64, shuffle: Option<u64>) -> Result<HkDecomposition> {
        HkDecomposition::new(
            self.grading.clone(),
            self.table.clone(),
            self.lambda.clone(),
            -2,
            hi2,
            shuffle,
        )
    }
}

/// `U(z) ∈ h^⊥_{>0}` and `h(z) ∈ h_{>-1}` through a truncation window.
#[derive(Clone, Debug)]
pub struct DressingResult {
    pub u: ZGradedElement,
    pub h: ZGradedElement,
    /// Highest doubled degree of `h` that is exact.
    pub hi2: i64,
    pub depth: usize,
}

/// Degree-by-degree solve of `e^{ad U}(∂ + Λ + q) = ∂ + Λ + h`.
///
/// With `A_1 = [U, X] - ∂U` and `A_n = [U, A_{n-1}]`, the degree-`t` part of the
/// left side is `X_t + Σ A_n[t]/n!`. Only `[U_{t+1}, Λ]` in `A_1[t]` involves the
/// unknown, so the residual without it splits into `h_t` and `[Λ, U_{t+1}]`.
pub fn dressing_solve(
    ctx: &DsContext,
    depth: usize,
    q_scale: &Rat,
    shuffle: Option<u64>,
) -> Result<(DressingResult, HkDecomposition)> {
    let (lo2, hi2) = ctx.window(depth);
    let hk = ctx.decomposition(hi2, shuffle)?;
    let gr = &ctx.grading;
    let table = &ctx.table;
    let x = ctx.operator(q_scale);
    let x_by: BTreeMap<i64, ZGradedElement> = x.degrees(gr).into_iter().map(|t| (t, x.component(gr, t))).collect();
    if ctx.q.degrees(gr).iter().next().is_some_and(|&t| t <= lo2) {
        return Err(Error::Internal("operator has components below degree -1".into()));
    }
    let mut u_by: BTreeMap<i64, ZGradedElement> = BTreeMap::new();
    let mut h = ZGradedElement::zero();
    // a[n-1][t] = A_n[t]
    let mut a: Vec<BTreeMap<i64, ZGradedElement>> = Vec::new();
    for t in (lo2 + 1)..=hi2 {
        let mut a1 = ZGradedElement::zero();
        for (&du, uc) in &u_by {
            if let Some(xc) = x_by.get(&(t - du)) {
                a1.add_assign(&uc.bracket(xc, table, gr, None));
            }
        }
        if let Some(uc) = u_by.get(&t) {
            a1.add_scaled(&Rat::from(-1), &uc.derivative());
        }
        let mut residual = x_by.get(&t).cloned().unwrap_or_default();
        residual.add_assign(&a1);
        let mut layers = vec![a1];
        // A_n[t] only needs A_{n-1} in degrees below t, all of which are stored
        for n in 2..=a.len() + 1 {
            let prev = &a[n - 2];
            let mut an = ZGradedElement::zero();
            for (&du, uc) in &u_by {
                if let Some(pc) = prev.get(&(t - du)) {
                    an.add_assign(&uc.bracket(pc, table, gr, None));
                }
            }
            residual.add_scaled(&(Rat::from(1) / factorial(n)), &an);
            layers.push(an);
        }
        let (h_t, perp) = hk.split(&residual, t)?;
        let u_next = hk.invert(&perp, t)?;
        // A_1[t] gains [U_{t+1}, Λ] = -[Λ, U_{t+1}] = -perp
        layers[0].add_scaled(&Rat::from(-1), &perp);
        h.add_assign(&h_t);
        if !u_next.is_zero() {
            u_by.insert(t + 2, u_next);
        }
        for (k, layer) in layers.into_iter().enumerate() {
            if a.len() <= k {
                a.push(BTreeMap::new());
            }
            if !layer.is_zero() {
                a[k].insert(t, layer);
            }
        }
    }
    let mut u = ZGradedElement::zero();
    for c in u_by.values() {
        u.add_assign(c);
    }
    Ok((DressingResult { u, h, hi2, depth }, hk))
}

/// `e^{±ad U}(∂ + X) - ∂`, summing the series until it vanishes below `hi2`.
pub fn exp_ad(ctx: &DsContext, u: &ZGradedElement, x: &ZGradedElement, sign: i64, hi2: i64) -> ZGradedElement {
    let gr = &ctx.grading;
    let s = Rat::from(sign);
    let mut total = x.truncate(gr, hi2);
    let mut term = u.bracket(x, &ctx.table, gr, Some(hi2));
    term.add_scaled(&Rat::from(-1), &u.derivative().truncate(gr, hi2));
    term = term.scale(&s);
    let mut n = 1;
    while !term.is_zero() {
        total.add_assign(&term.scale(&(Rat::from(1) / factorial(n))));
        n += 1;
        term = u.bracket(&term, &ctx.table, gr, Some(hi2)).scale(&s);
    }
    total
}

/// Independent checks of a dressing result.
#[derive(Clone, Debug, Default)]
pub struct DressingCheck {
    /// `e^{ad U}(∂+Λ+q) - (∂+Λ+h)` vanishes through the window.
    pub residual_zero: bool,
    /// Every `h_t` lies in `ker ad Λ`.
    pub h_in_kernel: bool,
    /// Every `U_t` lies in `im ad Λ`.
    pub u_in_image: bool,
    /// `e^{-ad U} e^{ad U}` is the identity through the window; `None` if not run.
    pub round_trip: Option<bool>,
}

impl DressingCheck {
    pub fn passed(&self) -> bool {
        self.residual_zero && self.h_in_kernel && self.u_in_image && self.round_trip != Some(false)
    }
}

pub fn check_dressing(
    ctx: &DsContext,
    hk: &HkDecomposition,
    result: &DressingResult,
    q_scale: &Rat,
    round_trip: bool,
) -> Result<DressingCheck> {
    let gr = &ctx.grading;
    let hi2 = result.hi2;
    let x = ctx.operator(q_scale);
    let dressed = exp_ad(ctx, &result.u, &x, 1, hi2);
    let mut expect = ctx.lambda.clone();
    expect.add_assign(&result.h);
    let residual_zero = dressed.sub(&expect.truncate(gr, hi2)).is_zero();
    let h_in_kernel = result.h.degrees(gr).into_iter().all(|t| {
        ctx.lambda
            .bracket(&result.h.component(gr, t), &ctx.table, gr, None)
            .is_zero()
    });
    let mut u_in_image = true;
    for t in result.u.degrees(gr) {
        if t > hi2 {
            continue;
        }
        let (kpart, _) = hk.split(&result.u.component(gr, t), t)?;
        u_in_image &= kpart.is_zero();
    }
    let round_trip = round_trip.then(|| exp_ad(ctx, &result.u, &dressed, -1, hi2) == x.truncate(gr, hi2));
    Ok(DressingCheck {
        residual_zero,
        h_in_kernel,
        u_in_image,
        round_trip,
    })
}
