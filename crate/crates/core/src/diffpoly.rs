//! Differential polynomials in generators `u_i` and their derivatives
//! `u_i^{(n)}`, with exact rational coefficients.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{fmt_rat, fmt_rat_latex, parse_rat, rat, Rat};

/// The variable `u_gen^{(order)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub gen: usize,
    pub order: usize,
}

impl Var {
    pub fn new(gen: usize, order: usize) -> Self {
        Var { gen, order }
    }

    pub fn prime(self) -> Self {
        Var {
            gen: self.gen,
            order: self.order + 1,
        }
    }
}

/// One packed factor `v^e`: generator, order and exponent in descending
/// bit significance, so integer order is `(gen, order, e)` order.
type Packed = u64;

const EXP_BITS: u32 = 20;
const ORDER_BITS: u32 = 20;
const EXP_MASK: u64 = (1 << EXP_BITS) - 1;
const ORDER_MASK: u64 = (1 << ORDER_BITS) - 1;

fn pack(v: Var, e: u32) -> Packed {
    debug_assert!(v.gen < 1 << 24 && (v.order as u64) <= ORDER_MASK && (e as u64) <= EXP_MASK);
    ((v.gen as u64) << (EXP_BITS + ORDER_BITS)) | ((v.order as u64) << EXP_BITS) | e as u64
}

fn unpack(f: Packed) -> (Var, u32) {
    (
        Var::new(
            (f >> (EXP_BITS + ORDER_BITS)) as usize,
            ((f >> EXP_BITS) & ORDER_MASK) as usize,
        ),
        (f & EXP_MASK) as u32,
    )
}

/// Packed factor with the exponent cleared.
fn var_key(f: Packed) -> Packed {
    f & !EXP_MASK
}

fn exp_of(f: Packed) -> u32 {
    (f & EXP_MASK) as u32
}

/// Product of variable powers, sorted by variable, exponents positive.
/// The second field caches the total degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[Packed; 4]>, u32);

impl Monomial {
    fn from_sorted(factors: SmallVec<[Packed; 4]>) -> Self {
        let deg = factors.iter().map(|&f| exp_of(f)).sum();
        Monomial(factors, deg)
    }

    pub fn one() -> Self {
        Monomial(SmallVec::new(), 0)
    }

    pub fn var(v: Var) -> Self {
        let mut f = SmallVec::new();
        f.push(pack(v, 1));
        Monomial(f, 1)
    }

    /// Builds a monomial from arbitrary factors, merging repeats.
    pub fn from_factors(factors: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *map.entry(v).or_default() += e;
            }
        }
        Monomial::from_sorted(map.into_iter().map(|(v, e)| pack(v, e)).collect())
    }

    pub fn factors(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().map(|&f| unpack(f))
    }

    pub fn degree(&self) -> u32 {
        self.1
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of derivative orders, counted with multiplicity.
    pub fn total_order(&self) -> usize {
        self.factors().map(|(v, e)| v.order * e as usize).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        let key = pack(v, 0);
        self.0
            .binary_search_by(|&f| var_key(f).cmp(&key))
            .map_or(0, |i| exp_of(self.0[i]))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match var_key(a[i]).cmp(&var_key(b[j])) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i] + exp_of(b[j]) as u64);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out, self.1 + other.1)
    }

    /// `self / v`, assuming `v` divides `self`.
    fn remove_one(&self, v: Var) -> Monomial {
        let mut out = self.0.clone();
        let key = pack(v, 0);
        let i = out
            .iter()
            .position(|&f| var_key(f) == key)
            .expect("variable divides monomial");
        if exp_of(out[i]) == 1 {
            out.remove(i);
        } else {
            out[i] -= 1;
        }
        Monomial(out, self.1 - 1)
    }

    /// `∂_x` applied to the factor at `idx` alone: `e v^{e-1} v'` without the `e`.
    fn derive_at(&self, idx: usize) -> Monomial {
        let f = &self.0;
        let (v, e) = unpack(f[idx]);
        let p = pack(v.prime(), 0);
        let mut out = SmallVec::with_capacity(f.len() + 1);
        out.extend_from_slice(&f[..idx]);
        if e > 1 {
            out.push(f[idx] - 1);
        }
        match f.get(idx + 1) {
            Some(&g) if var_key(g) == p => {
                out.push(g + 1);
                out.extend_from_slice(&f[idx + 2..]);
            }
            _ => {
                out.push(p + 1);
                out.extend_from_slice(&f[idx + 1..]);
            }
        }
        Monomial(out, self.1)
    }

    /// Generators with multiplicity, sorted.
    fn generator_multiset(&self) -> Vec<usize> {
        let mut g = Vec::new();
        for (v, e) in self.factors() {
            g.extend(std::iter::repeat_n(v.gen, e as usize));
        }
        g.sort_unstable();
        g
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.1.cmp(&other.1).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse differential polynomial. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        DiffPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        DiffPoly::term(c, Monomial::one())
    }

    pub fn term(c: Rat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        DiffPoly::term(Rat::one(), Monomial::var(v))
    }

    /// The generator `u_i` itself.
    pub fn gen(i: usize) -> Self {
        DiffPoly::var(Var::new(i, 0))
    }

    /// Linear form `Σ c_i u_i`.
    pub fn linear(coeffs: &[Rat]) -> Self {
        let mut p = DiffPoly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(Var::new(i, 0)), c.clone());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Sums arbitrary terms in one pass: sort, merge, bulk-build.
    fn collect_terms(mut raw: Vec<(Monomial, Rat)>) -> DiffPoly {
        raw.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Monomial, Rat)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match merged.last_mut() {
                Some((last, acc)) if *last == m => *acc += c,
                _ => {
                    if merged.last().is_some_and(|(_, acc)| acc.is_zero()) {
                        merged.pop();
                    }
                    merged.push((m, c));
                }
            }
        }
        if merged.last().is_some_and(|(_, acc)| acc.is_zero()) {
            merged.pop();
        }
        DiffPoly {
            terms: merged.into_iter().collect(),
        }
    }

    pub fn add_scaled(&mut self, c: &Rat, other: &DiffPoly) {
        if c.is_zero() {
            return;
        }
        if self.terms.is_empty() {
            *self = other.scale(c);
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), c * a);
        }
    }

    pub fn scale(&self, c: &Rat) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rat, m: &Monomial) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        let mut acc = DiffPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Largest polynomial degree of a term, 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.factors().map(|(v, _)| v)).collect()
    }

    pub fn max_order(&self) -> usize {
        self.vars().iter().map(|v| v.order).max().unwrap_or(0)
    }

    /// Number of generators needed to hold every variable.
    pub fn gen_bound(&self) -> usize {
        self.vars().iter().map(|v| v.gen + 1).max().unwrap_or(0)
    }

    /// Total derivative `∂`.
    pub fn derivative(&self) -> DiffPoly {
        let mut raw = Vec::new();
        for (m, c) in &self.terms {
            for (idx, e) in m.0.iter().map(|&f| exp_of(f)).enumerate() {
                let c = if e == 1 { c.clone() } else { c * rat(e as i64) };
                raw.push((m.derive_at(idx), c));
            }
        }
        DiffPoly::collect_terms(raw)
    }

    pub fn derivative_n(&self, n: usize) -> DiffPoly {
        let mut p = self.clone();
        for _ in 0..n {
            if p.is_zero() {
                break;
            }
            p = p.derivative();
        }
        p
    }

    /// Partial derivative with respect to the single variable `v`.
    pub fn partial(&self, v: Var) -> DiffPoly {
        let mut raw = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                raw.push((m.remove_one(v), c * rat(e as i64)));
            }
        }
        DiffPoly::collect_terms(raw)
    }

    /// `δP/δu_i = Σ_n (-∂)^n ∂P/∂u_i^{(n)}`.
    pub fn variational(&self, gen: usize) -> DiffPoly {
        let mut out = DiffPoly::zero();
        let orders: BTreeSet<usize> = self
            .vars()
            .into_iter()
            .filter(|v| v.gen == gen)
            .map(|v| v.order)
            .collect();
        for n in orders {
            let d = self.partial(Var::new(gen, n)).derivative_n(n);
            let sign = if n % 2 == 0 { rat(1) } else { rat(-1) };
            out.add_scaled(&sign, &d);
        }
        out
    }

    /// Whether `P ∈ ∂V`: zero constant term and all variational derivatives vanish.
    pub fn is_total_derivative(&self) -> bool {
        self.constant_term().is_zero() && (0..self.gen_bound()).all(|g| self.variational(g).is_zero())
    }

    /// Some `Q` with `∂Q = self`, or `None` if `self ∉ ∂V`.
    pub fn integrate(&self) -> Option<DiffPoly> {
        if !self.constant_term().is_zero() {
            return None;
        }
        // ∂ preserves the multiset of generators and raises the total order by one
        let mut blocks: BTreeMap<(Vec<usize>, usize), DiffPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            blocks
                .entry((m.generator_multiset(), m.total_order()))
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        let mut result = DiffPoly::zero();
        for ((gens, order), block) in blocks {
            if order == 0 {
                return None;
            }
            let candidates = monomials_with_orders(&gens, order - 1);
            let images: Vec<DiffPoly> = candidates
                .iter()
                .map(|m| DiffPoly::term(Rat::one(), m.clone()).derivative())
                .collect();
            let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
            for p in images.iter().chain(std::iter::once(&block)) {
                for m in p.terms.keys() {
                    let next = rows.len();
                    rows.entry(m.clone()).or_insert(next);
                }
            }
            let mut a = Matrix::zeros(rows.len(), candidates.len());
            for (j, p) in images.iter().enumerate() {
                for (m, c) in &p.terms {
                    a[(rows[m], j)] = c.clone();
                }
            }
            let mut b = vec![Rat::zero(); rows.len()];
            for (m, c) in &block.terms {
                b[rows[m]] = c.clone();
            }
            let x = a.solve(&b)?;
            for (m, c) in candidates.into_iter().zip(x) {
                result.add_term(m, c);
            }
        }
        Some(result)
    }

    /// Differential homomorphism `u_i ↦ images[i]`, `u_i^{(n)} ↦ ∂^n images[i]`.
    pub fn substitute(&self, images: &[DiffPoly]) -> DiffPoly {
        let mut cache: HashMap<Var, DiffPoly> = HashMap::new();
        self.substitute_with(|v| {
            if let Some(p) = cache.get(&v) {
                return p.clone();
            }
            let mut order = v.order;
            while order > 0 && !cache.contains_key(&Var::new(v.gen, order - 1)) {
                order -= 1;
            }
            let mut p = if order == 0 {
                images[v.gen].clone()
            } else {
                cache[&Var::new(v.gen, order - 1)].derivative()
            };
            cache.insert(Var::new(v.gen, order), p.clone());
            while order < v.order {
                order += 1;
                p = p.derivative();
                cache.insert(Var::new(v.gen, order), p.clone());
            }
            p
        })
    }

    /// Algebra homomorphism determined by an image for each variable.
    pub fn substitute_with(&self, mut image: impl FnMut(Var) -> DiffPoly) -> DiffPoly {
        let mut powers: HashMap<(Var, u32), DiffPoly> = HashMap::new();
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::constant(c.clone());
            for (v, e) in m.factors() {
                powers.entry((v, e)).or_insert_with(|| {
                    let base = image(v);
                    base.pow(e)
                });
                acc = &acc * &powers[&(v, e)];
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc;
        }
        out
    }

    /// Sets every `u_i^{(n)}` with `n > 0` to zero.
    pub fn drop_derivatives(&self) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.factors().all(|(v, _)| v.order == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps the terms whose monomial satisfies `pred`.
    pub fn filter_terms(&self, mut pred: impl FnMut(&Monomial) -> bool) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Random polynomial with `terms` terms of degree `≤ max_degree`,
    /// derivative order `≤ max_order` and small integer coefficients.
    pub fn random(rng: &mut impl Rng, n_gens: usize, max_degree: u32, max_order: usize, terms: usize) -> DiffPoly {
        let mut p = DiffPoly::zero();
        for _ in 0..terms {
            let deg = rng.gen_range(0..=max_degree);
            let m = Monomial::from_factors(
                (0..deg).map(|_| (Var::new(rng.gen_range(0..n_gens), rng.gen_range(0..=max_order)), 1)),
            );
            let mut c = rng.gen_range(-3i64..=3);
            if c == 0 {
                c = 1;
            }
            p.add_term(m, rat(c));
        }
        p
    }

    /// Text such as `3/2*u0^2*u1'' - u0'`, with optional generator labels.
    pub fn render(&self, labels: Option<&[String]>) -> String {
        render_with(self, |v| var_text(v, labels), fmt_rat, "*")
    }

    pub fn to_latex(&self, labels: Option<&[String]>) -> String {
        render_with(self, |v| var_latex(v, labels), fmt_rat_latex, " ")
    }

    /// `[[coeff, [[i, n, power], ...]], ...]` with coefficients as `"num/den"` text.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let factors: Vec<Value> = m.factors().map(|(v, e)| json!([v.gen, v.order, e])).collect();
                    json!([fmt_rat(c), factors])
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<DiffPoly> {
        let bad = || Error::Parse(format!("malformed differential polynomial: {v}"));
        let mut p = DiffPoly::zero();
        for term in v.as_array().ok_or_else(bad)? {
            let pair = term.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
            let c = match &pair[0] {
                Value::String(s) => parse_rat(s)?,
                Value::Number(n) => rat(n.as_i64().ok_or_else(bad)?),
                _ => return Err(bad()),
            };
            let mut factors = Vec::new();
            for f in pair[1].as_array().ok_or_else(bad)? {
                let f = f.as_array().filter(|a| a.len() == 3).ok_or_else(bad)?;
                let num = |x: &Value| x.as_u64().ok_or_else(bad);
                factors.push((Var::new(num(&f[0])? as usize, num(&f[1])? as usize), num(&f[2])? as u32));
            }
            p.add_term(Monomial::from_factors(factors), c);
        }
        Ok(p)
    }
}

/// All monomials in the generators `gens` (with multiplicity) whose derivative
/// orders add up to `order`.
fn monomials_with_orders(gens: &[usize], order: usize) -> Vec<Monomial> {
    fn go(gens: &[usize], left: usize, prefix: &mut Vec<(Var, u32)>, out: &mut BTreeSet<Monomial>) {
        match gens.split_first() {
            None => {
                if left == 0 {
                    out.insert(Monomial::from_factors(prefix.iter().copied()));
                }
            }
            Some((&g, rest)) => {
                for n in 0..=left {
                    prefix.push((Var::new(g, n), 1));
                    go(rest, left - n, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(gens, order, &mut Vec::new(), &mut out);
    out.into_iter().collect()
}

fn primes(order: usize) -> String {
    if order <= 3 {
        "'".repeat(order)
    } else {
        format!("^({order})")
    }
}

fn var_text(v: Var, labels: Option<&[String]>) -> String {
    let base = match labels.and_then(|l| l.get(v.gen)) {
        Some(l) => l.clone(),
        None => format!("u{}", v.gen),
    };
    format!("{base}{}", primes(v.order))
}

fn var_latex(v: Var, labels: Option<&[String]>) -> String {
    let base = match labels.and_then(|l| l.get(v.gen)) {
        Some(l) => l.clone(),
        None => format!("u_{{{}}}", v.gen),
    };
    match v.order {
        0 => base,
        1..=3 => format!("{base}{}", "'".repeat(v.order)),
        n => format!("{base}^{{({n})}}"),
    }
}

fn render_with(p: &DiffPoly, var: impl Fn(Var) -> String, num: impl Fn(&Rat) -> String, sep: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms.iter().enumerate() {
        let neg = c < &Rat::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let factors: Vec<String> = m
            .factors()
            .map(|(v, e)| if e == 1 { var(v) } else { format!("{}^{e}", var(v)) })
            .collect();
        if factors.is_empty() {
            out.push_str(&num(&mag));
        } else {
            if !mag.is_one() {
                out.push_str(&num(&mag));
                out.push_str(sep);
            }
            out.push_str(&factors.join(sep));
        }
    }
    out
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

impl AddAssign<&DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: &DiffPoly) {
        if self.terms.is_empty() {
            self.terms = rhs.terms.clone();
            return;
        }
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, rhs: &DiffPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(mut self, rhs: DiffPoly) -> DiffPoly {
        self += &rhs;
        self
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(mut self, rhs: DiffPoly) -> DiffPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&rat(-1))
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().expect("one term");
            return rhs.mul_monomial(c, m);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = rhs.terms.iter().next().expect("one term");
            return self.mul_monomial(c, m);
        }
        let mut raw = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                raw.push((ma.mul(mb), ca * cb));
            }
        }
        DiffPoly::collect_terms(raw)
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: DiffPoly) -> DiffPoly {
        &self * &rhs
    }
}

/// Element of `V/∂V`, stored through a representative with its constant
/// term dropped.
#[derive(Clone, Debug)]
pub struct LocalFunctional {
    rep: DiffPoly,
}

impl LocalFunctional {
    pub fn new(p: DiffPoly) -> Self {
        let rep = p.filter_terms(|m| !m.is_one());
        LocalFunctional { rep }
    }

    pub fn representative(&self) -> &DiffPoly {
        &self.rep
    }

    pub fn variational(&self, gen: usize) -> DiffPoly {
        self.rep.variational(gen)
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_total_derivative()
    }
}

impl PartialEq for LocalFunctional {
    fn eq(&self, other: &Self) -> bool {
        (&self.rep - &other.rep).is_total_derivative()
    }
}

impl Add for &LocalFunctional {
    type Output = LocalFunctional;
    fn add(self, rhs: &LocalFunctional) -> LocalFunctional {
        LocalFunctional::new(&self.rep + &rhs.rep)
    }
}
