use std::collections::HashMap;

use crate::diffpoly::DiffPoly;
use crate::lie::SlodowyFrame;
use crate::linalg::Vector;
use crate::pva::{LambdaPoly, Pencil, PvaStructure};
use crate::rational::Rat;

use super::finite::generator_labels;

/// `R ↦ A·R + c (λ+∂) R`.
fn apply(a: &DiffPoly, c: &Rat, r: &LambdaPoly) -> LambdaPoly {
    let mut out = r.mul_poly(a);
    if !num_traits::Zero::is_zero(c) {
        out.add_assign(&r.lambda_plus_d().scale(c));
    }
    out
}

/// A chain position: `(i, m)` with `m = -1` standing for `q_i` itself.
type State = (usize, i64);

/// `{q_{i0} λ q_{j0}}_z` from the explicit nested-♯ formula.
///
/// The right-hand chain (indices `i`) is applied to `1` first, then the central
/// factor `[a,b]^♯ + (f|[a,b]) + (a|b)(λ+∂) + z(s|[a,b])`, then the left-hand chain
/// (indices `j`). Each chain factor strictly lowers `δ(i) - m` on the right
/// and raises it on the left, so both chains are finite.
pub fn affine_generator_bracket(frame: &SlodowyFrame, s: &[Rat], i0: usize, j0: usize) -> Pencil {
    let alg = &frame.alg;
    let sharp_poly = |v: &Vector| DiffPoly::linear(&frame.sharp_coords(v));
    let zero = Rat::from(0);
    let one = Rat::from(1);
    let down = |(i, m): State| -> Option<&Vector> { frame.extended_dual[i].get((m + 1) as usize) };
    let d2 = |(i, m): State| frame.delta2[i] - 2 * m;
    let mut chain_states: Vec<State> = Vec::new();
    for (i, chain) in frame.extended.iter().enumerate() {
        for m in 0..chain.len() as i64 {
            chain_states.push((i, m));
        }
    }

    // right-hand chain, in decreasing D
    let mut right: Vec<(State, LambdaPoly)> = vec![((i0, -1), LambdaPoly::constant(DiffPoly::one()))];
    let mut by_desc = chain_states.clone();
    by_desc.sort_by_key(|&st| std::cmp::Reverse(d2(st)));
    for &(i, m) in &by_desc {
        let up = &frame.extended[i][m as usize];
        let mut acc = LambdaPoly::zero();
        for (prev, val) in &right {
            if d2(*prev) <= d2((i, m)) {
                continue;
            }
            let Some(a_down) = down(*prev) else { continue };
            let a = sharp_poly(&alg.bracket(a_down, up));
            let c = if prev.0 == i && prev.1 + 1 == m { &one } else { &zero };
            if a.is_zero() && num_traits::Zero::is_zero(c) {
                continue;
            }
            acc.add_assign(&apply(&a, c, val));
        }
        if !acc.is_zero() {
            right.push(((i, m), acc));
        }
    }

    // central factor, separately for the z⁰ and z¹ parts
    let mut left_states: Vec<State> = vec![(j0, -1)];
    left_states.extend(chain_states.iter().copied());
    let mut center0: HashMap<State, LambdaPoly> = HashMap::new();
    let mut center1: HashMap<State, LambdaPoly> = HashMap::new();
    for &jn in &left_states {
        let Some(b) = down(jn) else { continue };
        let mut acc0 = LambdaPoly::zero();
        let mut acc1 = LambdaPoly::zero();
        for (st, val) in &right {
            let Some(a) = down(*st) else { continue };
            let ab = alg.bracket(a, b);
            // ρ sends the n-part of [a,b] to (f|[a,b]), which ♯ does not see
            let lin = &sharp_poly(&ab) + &DiffPoly::constant(alg.form(&frame.triple.f, &ab));
            acc0.add_assign(&apply(&lin, &alg.form(a, b), val));
            let zc = alg.form(s, &ab);
            if !num_traits::Zero::is_zero(&zc) {
                acc1.add_assign(&val.scale(&zc));
            }
        }
        center0.insert(jn, acc0);
        center1.insert(jn, acc1);
    }

    // left-hand chain, in increasing D
    let run_left = |center: &HashMap<State, LambdaPoly>| -> LambdaPoly {
        let mut by_asc = chain_states.clone();
        by_asc.sort_by_key(|&st| d2(st));
        by_asc.push((j0, -1));
        let mut done: Vec<(State, LambdaPoly)> = Vec::new();
        for &(j, n) in &by_asc {
            let mut acc = center.get(&(j, n)).cloned().unwrap_or_default();
            if let Some(b_down) = down((j, n)) {
                for (prev, val) in &done {
                    if d2(*prev) >= d2((j, n)) || prev.1 < 0 {
                        continue;
                    }
                    let up = &frame.extended[prev.0][prev.1 as usize];
                    let a = sharp_poly(&alg.bracket(b_down, up));
                    let c = if prev.0 == j && prev.1 == n + 1 {
                        -one.clone()
                    } else {
                        zero.clone()
                    };
                    if a.is_zero() && num_traits::Zero::is_zero(&c) {
                        continue;
                    }
                    acc.add_assign(&apply(&a, &c, val));
                }
            }
            if (j, n) == (j0, -1) {
                return acc;
            }
            if !acc.is_zero() {
                done.push(((j, n), acc));
            }
        }
        unreachable!("final state is always processed")
    };
    Pencil::new(run_left(&center0), run_left(&center1))
}

/// The affine W-algebra on `S(F[∂]g^f)` with generator brackets from
/// [`affine_generator_bracket`].
pub fn affine_w_structure(frame: &SlodowyFrame, s: &[Rat]) -> PvaStructure {
    let k = frame.rank();
    let mut table = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            table.push(affine_generator_bracket(frame, s, i, j));
        }
    }
    PvaStructure::new(generator_labels(frame), table).expect("table over frame generators")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_sl_n, triple_from_partition};
    use crate::rational::rat;

    fn frame(n: usize, parts: &[usize]) -> SlodowyFrame {
        let g = build_sl_n(n).unwrap();
        let t = triple_from_partition(&g, parts).unwrap();
        SlodowyFrame::build(&g, &t).unwrap()
    }

    #[test]
    fn zero_nilpotent_collapses_to_current_bracket() {
        let fr = frame(2, &[1, 1]);
        let s = fr.alg.basis_vector(0);
        let w = affine_w_structure(&fr, &s);
        let v = PvaStructure::affine(&fr.alg, &s);
        // frame basis of g^f = g is the standard basis here
        assert_eq!(fr.qf, (0..3).map(|i| fr.alg.basis_vector(i)).collect::<Vec<_>>());
        assert_eq!(w.table, v.table);
    }

    #[test]
    fn sl2_principal_is_a_pencil_of_virasoro_type() {
        let fr = frame(2, &[2]);
        let s = fr.alg.basis_vector(0);
        let b = affine_generator_bracket(&fr, &s, 0, 0);
        // shape: z⁰ part has λ⁰, λ¹, λ³ terms, z¹ part is a multiple of λ
        assert_eq!(b.z0.degree(), Some(3));
        assert!(b.z0.coeff(2).is_zero());
        assert_eq!(b.z1.degree(), Some(1));
        assert!(b.z1.coeff(0).is_zero());
        assert!(b.z1.coeff(1).is_constant());
    }

    #[test]
    fn sl2_and_sl3_tables_pass_axioms() {
        for (n, parts) in [(2, vec![2]), (3, vec![3]), (3, vec![2, 1])] {
            let fr = frame(n, &parts);
            let s = {
                let mut m = crate::linalg::Matrix::zeros(n, n);
                m[(0, n - 1)] = rat(1);
                fr.alg.from_matrix(&m).unwrap()
            };
            let w = affine_w_structure(&fr, &s);
            let gens: Vec<DiffPoly> = (0..fr.rank()).map(DiffPoly::gen).collect();
            let report = w.verify_axioms(&gens).unwrap();
            assert!(report.passed(), "{n}: {:?}", report.failures);
        }
    }
}
