use super::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, scale_vec, Matrix, Vector};
use crate::rational::{frac, rat, Rat};

/// An sl2-triple `{e, h = 2x, f}` stored through `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Triple {
    pub e: Vector,
    pub x: Vector,
    pub f: Vector,
}

impl Sl2Triple {
    /// Validates `[x,e] = e`, `[x,f] = -f`, `[e,f] = 2x`.
    pub fn new(alg: &LieAlgebra, e: Vector, x: Vector, f: Vector) -> Result<Self> {
        let t = Sl2Triple { e, x, f };
        t.check(alg)?;
        Ok(t)
    }

    pub fn h(&self) -> Vector {
        scale_vec(&rat(2), &self.x)
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.f)
    }

    pub fn check(&self, alg: &LieAlgebra) -> Result<()> {
        let n = alg.dim();
        if self.e.len() != n || self.x.len() != n || self.f.len() != n {
            return Err(Error::Shape("triple vectors have the wrong length".into()));
        }
        if alg.bracket(&self.x, &self.e) != self.e {
            return Err(Error::InvalidTriple("[x,e] != e".into()));
        }
        if alg.bracket(&self.x, &self.f) != scale_vec(&rat(-1), &self.f) {
            return Err(Error::InvalidTriple("[x,f] != -f".into()));
        }
        if alg.bracket(&self.e, &self.f) != self.h() {
            return Err(Error::InvalidTriple("[e,f] != 2x".into()));
        }
        Ok(())
    }
}

/// Standard triple of the nilpotent orbit of sl_n labelled by `partition`:
/// `f` is the lower-triangular Jordan matrix with blocks of the given sizes,
/// `x` is diagonal.
pub fn triple_from_partition(alg: &LieAlgebra, partition: &[usize]) -> Result<Sl2Triple> {
    let n = alg
        .matrix_size()
        .ok_or_else(|| Error::Domain("partitions are only defined for built-in sl_n".into()))?;
    if partition.contains(&0) {
        return Err(Error::Shape("partition parts must be positive".into()));
    }
    let total: usize = partition.iter().sum();
    if total != n {
        return Err(Error::Shape(format!("partition {partition:?} does not sum to {n}")));
    }
    let mut e = Matrix::zeros(n, n);
    let mut f = Matrix::zeros(n, n);
    let mut x = Matrix::zeros(n, n);
    let mut offset = 0;
    for &m in partition {
        for k in 0..m {
            // x = diag((m-1)/2, (m-3)/2, ..., -(m-1)/2) on the block
            x[(offset + k, offset + k)] = frac(m as i64 - 1 - 2 * k as i64, 2);
        }
        for k in 0..m.saturating_sub(1) {
            f[(offset + k + 1, offset + k)] = rat(1);
            e[(offset + k, offset + k + 1)] = rat(((k + 1) * (m - 1 - k)) as i64);
        }
        offset += m;
    }
    let conv = |m: &Matrix| -> Result<Vector> {
        alg.from_matrix(m)
            .ok_or_else(|| Error::Internal("matrix is not in the algebra".into()))
    };
    let t = Sl2Triple {
        e: conv(&e)?,
        x: conv(&x)?,
        f: conv(&f)?,
    };
    t.check(alg)?;
    Ok(t)
}

/// Smallest `N` with `(ad f)^N = 0`, if it is at most `bound`.
pub fn nilpotency_index(alg: &LieAlgebra, f: &[Rat], bound: usize) -> Option<usize> {
    let ad = alg.ad(f);
    let mut power = Matrix::identity(alg.dim());
    for k in 0..=bound {
        if power.is_zero() {
            return Some(k);
        }
        power = power.mul(&ad);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_sl_n;

    #[test]
    fn principal_sl2() {
        let g = build_sl_n(2).unwrap();
        let t = triple_from_partition(&g, &[2]).unwrap();
        assert_eq!(t.e, g.basis_vector(0));
        assert_eq!(t.f, g.basis_vector(2));
        // x = diag(1/2,-1/2) = h/2
        assert_eq!(t.x, vec![rat(0), frac(1, 2), rat(0)]);
    }

    #[test]
    fn zero_orbit() {
        let g = build_sl_n(2).unwrap();
        let t = triple_from_partition(&g, &[1, 1]).unwrap();
        assert!(t.is_zero());
        assert!(is_zero_vec(&t.e) && is_zero_vec(&t.x));
    }

    #[test]
    fn principal_sl3() {
        let g = build_sl_n(3).unwrap();
        let t = triple_from_partition(&g, &[3]).unwrap();
        let f = g.to_matrix(&t.f).unwrap();
        let x = g.to_matrix(&t.x).unwrap();
        assert_eq!(f[(1, 0)], rat(1));
        assert_eq!(f[(2, 1)], rat(1));
        assert_eq!(
            (x[(0, 0)].clone(), x[(1, 1)].clone(), x[(2, 2)].clone()),
            (rat(1), rat(0), rat(-1))
        );
    }

    #[test]
    fn bad_partitions() {
        let g = build_sl_n(3).unwrap();
        assert!(matches!(triple_from_partition(&g, &[2, 2]), Err(Error::Shape(_))));
        assert!(matches!(triple_from_partition(&g, &[3, 0]), Err(Error::Shape(_))));
    }

    #[test]
    fn f_is_nilpotent_for_all_partitions() {
        for (n, parts) in [
            (2, vec![2]),
            (3, vec![3]),
            (3, vec![2, 1]),
            (4, vec![2, 2]),
            (4, vec![3, 1]),
        ] {
            let g = build_sl_n(n).unwrap();
            let t = triple_from_partition(&g, &parts).unwrap();
            let bound = 2 * parts.iter().max().unwrap();
            assert!(nilpotency_index(&g, &t.f, bound).is_some(), "{n} {parts:?}");
        }
    }
}
