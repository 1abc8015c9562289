//! Exact rational scalars and their textual form (`"num/den"`).

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The scalar field of every computation in this crate.
pub type Rat = RBig;

pub fn rat(n: i64) -> Rat {
    Rat::from(n)
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::from_parts_signed(IBig::from(n), IBig::from(d))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parses `"3"`, `"-3/4"` or a bare JSON integer rendered as text.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let int = |t: &str| -> Result<IBig> { t.trim().parse().map_err(|_| bad()) };
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d) = (int(n)?, int(d)?);
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::from_parts_signed(n, d))
        }
        None => Ok(Rat::from(int(s)?)),
    }
}

/// Canonical text: integers without a denominator, otherwise `num/den`.
pub fn fmt_rat(q: &Rat) -> String {
    if q.is_int() {
        q.numerator().to_string()
    } else {
        format!("{}/{}", q.numerator(), q.denominator())
    }
}

pub fn fmt_rat_latex(q: &Rat) -> String {
    if q.is_int() {
        q.numerator().to_string()
    } else {
        let sign = if q.numerator() < &IBig::ZERO { "-" } else { "" };
        format!(
            "{sign}\\frac{{{}}}{{{}}}",
            num_traits::Signed::abs(q).numerator(),
            q.denominator()
        )
    }
}

/// Sum of an iterator of rationals.
pub fn sum(it: impl IntoIterator<Item = Rat>) -> Rat {
    it.into_iter().fold(Rat::zero(), |acc, x| acc + x)
}

pub fn binomial(n: usize, k: usize) -> Rat {
    if k > n {
        return zero();
    }
    let mut acc = UBig::ONE;
    for i in 0..k {
        acc = acc * UBig::from(n - i) / UBig::from(i + 1);
    }
    Rat::from(acc)
}

pub fn factorial(n: usize) -> Rat {
    let mut acc = UBig::ONE;
    for i in 2..=n {
        acc *= UBig::from(i);
    }
    Rat::from(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rat(" 7 ").unwrap(), rat(7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(fmt_rat(&frac(-3, 2)), "-3/2");
        assert_eq!(fmt_rat(&rat(4)), "4");
        assert_eq!(fmt_rat_latex(&frac(-1, 2)), "-\\frac{1}{2}");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), rat(10));
        assert_eq!(binomial(3, 4), rat(0));
        assert_eq!(factorial(5), rat(120));
    }
}
