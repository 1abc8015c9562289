use std::collections::BTreeMap;

use num_traits::Zero;

use crate::diffpoly::{DiffPoly, Monomial, Var};
use crate::error::{Error, Result};
use crate::lie::{build_polarization, LagrangianChoice, Polarization, SlodowyFrame};
use crate::linalg::{coordinates, is_zero_vec, Matrix, Vector};
use crate::pva::{LambdaPoly, Pencil, PvaStructure};
use crate::rational::Rat;

use super::finite::generator_labels;

/// The W-algebra realized inside `S(F[∂]p)`.
///
/// Variables are indexed by the adapted basis `p ++ n` of the polarization:
/// indices below `p_dim` are `p`-variables, the rest are `n`-variables.
#[derive(Clone, Debug)]
pub struct ReductionRealization {
    pub frame: SlodowyFrame,
    pub polarization: Polarization,
    /// `s` in adapted coordinates.
    pub s: Vector,
    /// `V_z(g)` on the adapted basis.
    pub structure: PvaStructure,
    /// `(f | n_c)` for each `n`-basis vector.
    pub f_pairing: Vec<Rat>,
    /// `b^♯` in frame coordinates, for each `p`-basis vector.
    pub p_sharp: Vec<Vector>,
    lifts: Vec<DiffPoly>,
}

impl ReductionRealization {
    pub fn new(frame: &SlodowyFrame, s: &[Rat], choice: LagrangianChoice) -> Result<Self> {
        let pol = build_polarization(frame, choice)?;
        if pol.n_basis.iter().any(|n| !is_zero_vec(&frame.alg.bracket(s, n))) {
            return Err(Error::Domain(format!(
                "s = {} does not commute with n for this choice of isotropic subspace",
                frame.alg.describe(s)
            )));
        }
        let basis = pol.adapted_basis();
        let s_adapted =
            coordinates(&basis, s).ok_or_else(|| Error::Internal("adapted basis does not span g".into()))?;
        let structure = PvaStructure::affine(&pol.adapted, &s_adapted);
        let f = &frame.triple.f;
        let f_pairing = pol.n_basis.iter().map(|n| frame.alg.form(f, n)).collect();
        let p_sharp = pol.p_basis.iter().map(|b| frame.sharp_coords(b)).collect();
        let mut real = ReductionRealization {
            frame: frame.clone(),
            polarization: pol,
            s: s_adapted,
            structure,
            f_pairing,
            p_sharp,
            lifts: Vec::new(),
        };
        real.lifts = (0..frame.rank())
            .map(|i| real.find_generator_lift(i, None))
            .collect::<Result<_>>()?;
        Ok(real)
    }

    pub fn p_dim(&self) -> usize {
        self.polarization.p_dim()
    }

    pub fn n_dim(&self) -> usize {
        self.polarization.n_dim()
    }

    pub fn labels(&self) -> &[String] {
        self.polarization.adapted.labels()
    }

    /// Doubled conformal weight `2(1 - j)` of a `p`-variable of degree `j`.
    fn weight2(&self, v: Var) -> i64 {
        2 - self.polarization.adapted_deg2[v.gen] + 2 * v.order as i64
    }

    /// Rewrites a polynomial in the original basis variables into adapted variables.
    pub fn to_adapted(&self, p: &DiffPoly) -> Result<DiffPoly> {
        let basis = self.polarization.adapted_basis();
        let images = (0..self.frame.alg.dim())
            .map(|i| {
                coordinates(&basis, &self.frame.alg.basis_vector(i))
                    .map(|c| DiffPoly::linear(&c))
                    .ok_or_else(|| Error::Internal("adapted basis does not span g".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        if p.gen_bound() > images.len() {
            return Err(Error::Domain("polynomial uses an unknown generator".into()));
        }
        Ok(p.substitute(&images))
    }

    /// `ρ(a) = π_p(a) + (f|a)`, extended as a differential homomorphism.
    pub fn rho(&self, p: &DiffPoly) -> DiffPoly {
        let pd = self.p_dim();
        p.substitute_with(|v| {
            if v.gen < pd {
                DiffPoly::var(v)
            } else if v.order == 0 {
                DiffPoly::constant(self.f_pairing[v.gen - pd].clone())
            } else {
                DiffPoly::zero()
            }
        })
    }

    fn rho_lambda(&self, l: &LambdaPoly) -> LambdaPoly {
        LambdaPoly::from_coeffs(l.coeffs().iter().map(|c| self.rho(c)).collect())
    }

    pub fn rho_pencil(&self, p: &Pencil) -> Pencil {
        Pencil::new(self.rho_lambda(&p.z0), self.rho_lambda(&p.z1))
    }

    fn in_p(&self, p: &DiffPoly) -> bool {
        p.gen_bound() <= self.p_dim()
    }

    /// `ρ{a_λ P}_z` for every `n`-basis element `a`.
    fn constraints(&self, p: &DiffPoly) -> Result<Vec<Pencil>> {
        (self.p_dim()..self.p_dim() + self.n_dim())
            .map(|a| Ok(self.rho_pencil(&self.structure.bracket(&DiffPoly::gen(a), p)?)))
            .collect()
    }

    /// Whether `ρ{a_λ P}_z = 0` for all `a ∈ n`.
    pub fn is_w_element(&self, p: &DiffPoly) -> Result<bool> {
        if !self.in_p(p) {
            return Err(Error::Domain("W-elements live in S(F[∂]p)".into()));
        }
        Ok(self.constraints(p)?.iter().all(Pencil::is_zero))
    }

    /// `ρ{P_λ Q}_z` for W-elements `P`, `Q`.
    pub fn reduced_bracket(&self, p: &DiffPoly, q: &DiffPoly) -> Result<Pencil> {
        for x in [p, q] {
            if !self.is_w_element(x)? {
                return Err(Error::Domain(format!(
                    "{} is not a W-element",
                    x.render(Some(self.labels()))
                )));
            }
        }
        Ok(self.rho_pencil(&self.structure.bracket(p, q)?))
    }

    /// The isomorphism onto `S(F[∂]g^f)`: `b ↦ b^♯` on `p`-variables.
    pub fn res(&self, p: &DiffPoly) -> Result<DiffPoly> {
        if !self.in_p(p) {
            return Err(Error::Domain("restriction is defined on S(F[∂]p)".into()));
        }
        let images: Vec<DiffPoly> = self.p_sharp.iter().map(|c| DiffPoly::linear(c)).collect();
        Ok(p.substitute(&images))
    }

    fn res_pencil(&self, p: &Pencil) -> Result<Pencil> {
        let f = |l: &LambdaPoly| -> Result<LambdaPoly> {
            Ok(LambdaPoly::from_coeffs(
                l.coeffs().iter().map(|c| self.res(c)).collect::<Result<_>>()?,
            ))
        };
        Ok(Pencil::new(f(&p.z0)?, f(&p.z1)?))
    }

    pub fn lifts(&self) -> &[DiffPoly] {
        &self.lifts
    }

    /// The W-element with image `P` under [`res`](Self::res).
    pub fn lift(&self, p: &DiffPoly) -> Result<DiffPoly> {
        if p.gen_bound() > self.lifts.len() {
            return Err(Error::Domain("polynomial uses an unknown g^f generator".into()));
        }
        Ok(p.substitute(&self.lifts))
    }

    /// The unique W-element `P` with `res(P) = q_i`, found by a linear solve over
    /// all monomials of doubled weight at most `weight_bound2` (default: that of `q_i`).
    pub fn find_generator_lift(&self, i: usize, weight_bound2: Option<i64>) -> Result<DiffPoly> {
        let k = self.frame.rank();
        if i >= k {
            return Err(Error::Domain(format!("no generator q{i}")));
        }
        let target = 2 + self.frame.delta2[i];
        let bound = weight_bound2.unwrap_or(target);
        let monomials = self.weighted_monomials(bound);
        let mut rows: BTreeMap<(usize, usize, usize, Monomial), usize> = BTreeMap::new();
        let mut entries: Vec<(usize, usize, Rat)> = Vec::new();
        let mut row_of = |key: (usize, usize, usize, Monomial)| {
            let next = rows.len();
            *rows.entry(key).or_insert(next)
        };
        for (col, m) in monomials.iter().enumerate() {
            let p = DiffPoly::term(Rat::from(1), m.clone());
            for (a, pencil) in self.constraints(&p)?.iter().enumerate() {
                for (part, l) in [&pencil.z0, &pencil.z1].into_iter().enumerate() {
                    for (pow, c) in l.coeffs().iter().enumerate() {
                        for (mono, v) in c.terms() {
                            entries.push((row_of((a + 1, part, pow, mono.clone())), col, v.clone()));
                        }
                    }
                }
            }
            for (mono, v) in self.res(&p)?.terms() {
                entries.push((row_of((0, 0, 0, mono.clone())), col, v.clone()));
            }
        }
        let target_key = (0, 0, 0, Monomial::var(Var::new(i, 0)));
        let target_row = row_of(target_key);
        let mut a = Matrix::zeros(rows.len(), monomials.len());
        for (r, c, v) in entries {
            a[(r, c)] += v;
        }
        let mut rhs = vec![Rat::zero(); rows.len()];
        rhs[target_row] = Rat::from(1);
        let x = a.solve(&rhs).ok_or_else(|| {
            Error::BoundTooSmall(format!("no W-element of doubled weight <= {bound} restricts to q{i}"))
        })?;
        if a.rank() < monomials.len() {
            return Err(Error::Internal(format!("lift of q{i} is not unique")));
        }
        let mut out = DiffPoly::zero();
        for (m, c) in monomials.into_iter().zip(x) {
            out.add_term(m, c);
        }
        Ok(out)
    }

    /// Monomials in the `p`-variables of positive doubled weight at most `bound`.
    fn weighted_monomials(&self, bound: i64) -> Vec<Monomial> {
        let mut vars = Vec::new();
        for b in 0..self.p_dim() {
            let mut n = 0;
            while self.weight2(Var::new(b, n)) <= bound {
                vars.push(Var::new(b, n));
                n += 1;
            }
        }
        let mut out = Vec::new();
        fn go(vars: &[Var], weights: &[i64], start: usize, left: i64, cur: &mut Vec<Var>, out: &mut Vec<Monomial>) {
            if !cur.is_empty() {
                out.push(Monomial::from_factors(cur.iter().map(|v| (*v, 1))));
            }
            for idx in start..vars.len() {
                if weights[idx] <= left {
                    cur.push(vars[idx]);
                    go(vars, weights, idx, left - weights[idx], cur, out);
                    cur.pop();
                }
            }
        }
        let weights: Vec<i64> = vars.iter().map(|v| self.weight2(*v)).collect();
        go(&vars, &weights, 0, bound, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// Generator brackets `res ρ{P_a λ P_b}_z` of the lifts.
    pub fn w_structure(&self) -> Result<PvaStructure> {
        let k = self.frame.rank();
        let mut table = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                let br = self.reduced_bracket(&self.lifts[a], &self.lifts[b])?;
                table.push(self.res_pencil(&br)?);
            }
        }
        PvaStructure::new(generator_labels(&self.frame), table)
    }
}

/// The finite analogue: `S(p)` with the Lie-Poisson bracket of `g` and `ρ`
/// restricted to polynomials without derivatives.
#[derive(Clone, Debug)]
pub struct FiniteReduction {
    real: ReductionRealizationCore,
    lifts: Vec<DiffPoly>,
}

#[derive(Clone, Debug)]
struct ReductionRealizationCore {
    frame: SlodowyFrame,
    pol: Polarization,
    f_pairing: Vec<Rat>,
    p_sharp: Vec<Vector>,
}

impl FiniteReduction {
    pub fn new(frame: &SlodowyFrame, choice: LagrangianChoice) -> Result<Self> {
        let pol = build_polarization(frame, choice)?;
        let f = &frame.triple.f;
        let core = ReductionRealizationCore {
            frame: frame.clone(),
            f_pairing: pol.n_basis.iter().map(|n| frame.alg.form(f, n)).collect(),
            p_sharp: pol.p_basis.iter().map(|b| frame.sharp_coords(b)).collect(),
            pol,
        };
        let mut fr = FiniteReduction {
            real: core,
            lifts: Vec::new(),
        };
        fr.lifts = (0..frame.rank()).map(|i| fr.lift_generator(i)).collect::<Result<_>>()?;
        Ok(fr)
    }

    pub fn lifts(&self) -> &[DiffPoly] {
        &self.lifts
    }

    /// `{P, Q} = Σ ∂P/∂a ∂Q/∂b [a, b]` on `S(g)` in adapted variables.
    pub fn lie_poisson(&self, p: &DiffPoly, q: &DiffPoly) -> DiffPoly {
        let alg = &self.real.pol.adapted;
        let mut out = DiffPoly::zero();
        for a in p.vars() {
            let pa = p.partial(a);
            for b in q.vars() {
                let br = DiffPoly::linear(alg.basis_bracket(a.gen, b.gen));
                if br.is_zero() {
                    continue;
                }
                out += &(&(&pa * &q.partial(b)) * &br);
            }
        }
        out
    }

    pub fn rho(&self, p: &DiffPoly) -> DiffPoly {
        let pd = self.real.pol.p_dim();
        p.substitute_with(|v| {
            if v.gen < pd {
                DiffPoly::var(v)
            } else {
                DiffPoly::constant(self.real.f_pairing[v.gen - pd].clone())
            }
        })
    }

    pub fn res(&self, p: &DiffPoly) -> DiffPoly {
        let images: Vec<DiffPoly> = self.real.p_sharp.iter().map(|c| DiffPoly::linear(c)).collect();
        p.substitute(&images)
    }

    pub fn is_w_element(&self, p: &DiffPoly) -> bool {
        let pd = self.real.pol.p_dim();
        (pd..pd + self.real.pol.n_dim()).all(|a| self.rho(&self.lie_poisson(&DiffPoly::gen(a), p)).is_zero())
    }

    pub fn lift(&self, p: &DiffPoly) -> DiffPoly {
        p.substitute(&self.lifts)
    }

    /// `res ρ{lift P, lift Q}` for `P, Q ∈ S(g^f)`.
    pub fn bracket(&self, p: &DiffPoly, q: &DiffPoly) -> DiffPoly {
        self.res(&self.rho(&self.lie_poisson(&self.lift(p), &self.lift(q))))
    }

    fn lift_generator(&self, i: usize) -> Result<DiffPoly> {
        let frame = &self.real.frame;
        let pol = &self.real.pol;
        let target = 2 + frame.delta2[i];
        let weights: Vec<i64> = (0..pol.p_dim()).map(|b| 2 - pol.adapted_deg2[b]).collect();
        let mut monomials = Vec::new();
        fn go(w: &[i64], start: usize, left: i64, cur: &mut Vec<usize>, out: &mut Vec<Monomial>) {
            if left == 0 {
                out.push(Monomial::from_factors(cur.iter().map(|&b| (Var::new(b, 0), 1))));
                return;
            }
            for b in start..w.len() {
                if w[b] <= left {
                    cur.push(b);
                    go(w, b, left - w[b], cur, out);
                    cur.pop();
                }
            }
        }
        go(&weights, 0, target, &mut Vec::new(), &mut monomials);
        let pd = pol.p_dim();
        let mut rows: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
        let mut entries = Vec::new();
        let mut row_of = |key: (usize, Monomial)| {
            let next = rows.len();
            *rows.entry(key).or_insert(next)
        };
        for (col, m) in monomials.iter().enumerate() {
            let p = DiffPoly::term(Rat::from(1), m.clone());
            for a in 0..pol.n_dim() {
                let c = self.rho(&self.lie_poisson(&DiffPoly::gen(pd + a), &p));
                for (mono, v) in c.terms() {
                    entries.push((row_of((a + 1, mono.clone())), col, v.clone()));
                }
            }
            for (mono, v) in self.res(&p).terms() {
                entries.push((row_of((0, mono.clone())), col, v.clone()));
            }
        }
        let target_row = row_of((0, Monomial::var(Var::new(i, 0))));
        let mut a = Matrix::zeros(rows.len(), monomials.len());
        for (r, c, v) in entries {
            a[(r, c)] += v;
        }
        let mut rhs = vec![Rat::zero(); rows.len()];
        rhs[target_row] = Rat::from(1);
        let x = a
            .solve(&rhs)
            .ok_or_else(|| Error::BoundTooSmall(format!("no finite lift of q{i}")))?;
        if a.rank() < monomials.len() {
            return Err(Error::Internal(format!("finite lift of q{i} is not unique")));
        }
        let mut out = DiffPoly::zero();
        for (m, c) in monomials.into_iter().zip(x) {
            out.add_term(m, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_sl_n, triple_from_partition};
    use crate::rational::{frac, rat};
    use crate::walgebra::{affine_w_structure, FiniteBracketTable};

    fn frame(n: usize, parts: &[usize]) -> SlodowyFrame {
        let g = build_sl_n(n).unwrap();
        let t = triple_from_partition(&g, parts).unwrap();
        SlodowyFrame::build(&g, &t).unwrap()
    }

    fn sl2() -> ReductionRealization {
        let fr = frame(2, &[2]);
        let e = fr.alg.basis_vector(0);
        ReductionRealization::new(&fr, &e, LagrangianChoice::Greedy).unwrap()
    }

    #[test]
    fn rho_on_sl2() {
        let r = sl2();
        // adapted basis is (h, f | e)
        assert_eq!(r.labels(), &["h", "f", "e"]);
        let e = DiffPoly::gen(2);
        let f = DiffPoly::gen(1);
        assert_eq!(r.rho(&e), DiffPoly::one());
        assert_eq!(r.rho(&f), f);
        assert_eq!(r.rho(&(&e * &f)), f);
        assert!(r.rho(&e.derivative()).is_zero());
        let orig_e = r.to_adapted(&DiffPoly::gen(0)).unwrap();
        assert_eq!(orig_e, e);
    }

    #[test]
    fn sl2_virasoro_lift() {
        let r = sl2();
        let (h, f) = (DiffPoly::gen(0), DiffPoly::gen(1));
        // f + x^2 + x' with x = h/2
        let expect = &(&f + &h.pow(2).scale(&frac(1, 4))) + &h.derivative().scale(&frac(1, 2));
        assert_eq!(r.lifts()[0], expect);
        assert!(r.is_w_element(&expect).unwrap());
        assert!(!r.is_w_element(&h).unwrap());
        assert!(r.is_w_element(&DiffPoly::constant(rat(5))).unwrap());
        assert!(matches!(r.reduced_bracket(&h, &h), Err(Error::Domain(_))));
    }

    #[test]
    fn sl2_reduction_matches_nested_formula() {
        let r = sl2();
        let fr = &r.frame;
        let e = fr.alg.basis_vector(0);
        assert_eq!(r.w_structure().unwrap().table, affine_w_structure(fr, &e).table);
    }

    #[test]
    fn zero_nilpotent_lifts_are_trivial() {
        let fr = frame(2, &[1, 1]);
        let r = ReductionRealization::new(&fr, &fr.alg.zero(), LagrangianChoice::Greedy).unwrap();
        assert_eq!(r.n_dim(), 0);
        for (i, l) in r.lifts().iter().enumerate() {
            assert_eq!(r.res(l).unwrap(), DiffPoly::gen(i));
        }
    }

    #[test]
    fn sl3_principal_lift_weights() {
        let fr = frame(3, &[3]);
        let mut m = Matrix::zeros(3, 3);
        m[(0, 2)] = rat(1);
        let s = fr.alg.from_matrix(&m).unwrap();
        let r = ReductionRealization::new(&fr, &s, LagrangianChoice::Greedy).unwrap();
        assert_eq!(r.lifts().len(), 2);
        // weights 2 and 3: the second lift has a cubic term
        assert_eq!(r.lifts()[0].degree(), 2);
        assert_eq!(r.lifts()[1].degree(), 3);
    }

    #[test]
    fn finite_reduction_matches_chain_formula_on_sl3_minimal() {
        let fr = frame(3, &[2, 1]);
        let red = FiniteReduction::new(&fr, LagrangianChoice::Greedy).unwrap();
        let table = FiniteBracketTable::build(&fr);
        for l in red.lifts() {
            assert!(red.is_w_element(l));
        }
        for i in 0..fr.rank() {
            for j in 0..fr.rank() {
                let (a, b) = (DiffPoly::gen(i), DiffPoly::gen(j));
                assert_eq!(red.bracket(&a, &b), table.bracket(&a, &b).unwrap(), "{i} {j}");
            }
        }
    }
}
