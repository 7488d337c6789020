//! Mode calculus for lowest-weight modules of the W(2,3) algebra at c = 6/5.
//!
//! A vector is a finite combination of canonical monomials
//! `L(−m₁)…L(−m_p) J(−n₁)…J(−n_q) w` (each block weakly decreasing) applied
//! to a top vector `w` with `L(0)w = h·w`, `J(0)w = k·w` and all positive
//! modes killing `w`. [`ModuleCalc::apply_mode`] rewrites `mode · monomial`
//! back into canonical form with the commutation relations
//!
//! ```text
//! [L(m), L(n)] = (m−n) L(m+n) + (m³−m)/10 δ_{m+n,0}
//! [L(m), J(n)] = (2m−n) J(m+n)
//! [J(m), J(n)] = (m−n)(22(s+2)(s+3) + 35(m+2)(n+2)) L(s)
//!                − 120(m−n)( Σ_{k≤−2} L(k)L(s−k) + Σ_{k≥−1} L(s−k)L(k) )
//!                − (7/10) m(m²−1)(m²−4) δ_{s,0},          s = m+n
//! ```
//!
//! The infinite sums are cut off per operand: a summand contributes only if
//! its rightmost (annihilating) factor does not exceed the operand's degree.
//!
//! Coefficients are generic over [`Ring`] so the same rewriting runs with
//! numeric parameters or with `h`, `k` kept symbolic as polynomials.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::scalars::{rat, QuadScalar, Rational, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModeError {
    #[error("vector is not homogeneous (degrees {0} and {1} both occur)")]
    NotHomogeneous(usize, usize),
    #[error("the zero vector cannot be used here")]
    ZeroVector,
    #[error("eliminating vector has no J(-1)^{0} term")]
    NoEliminationTerm(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    L,
    J,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mode {
    pub gen: Gen,
    pub index: i64,
}

impl Mode {
    pub const fn l(index: i64) -> Mode {
        Mode { gen: Gen::L, index }
    }

    pub const fn j(index: i64) -> Mode {
        Mode { gen: Gen::J, index }
    }

    /// Conformal weight of the generating field (2 for L, 3 for J).
    pub fn field_weight(&self) -> u32 {
        match self.gen {
            Gen::L => 2,
            Gen::J => 3,
        }
    }

    // Canonical order: all L creation modes left of all J creation modes,
    // each block with the most negative index first.
    fn rank(&self) -> (u8, i64) {
        (if self.gen == Gen::L { 0 } else { 1 }, self.index)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = if self.gen == Gen::L { "L" } else { "J" };
        write!(f, "{g}({})", self.index)
    }
}

/// Canonical monomial `L(−l₀)L(−l₁)…J(−j₀)J(−j₁)… w` with both part lists
/// weakly decreasing.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PbwMonomial {
    l: Vec<u32>,
    j: Vec<u32>,
}

impl PbwMonomial {
    /// The top vector `w` itself.
    pub fn top() -> Self {
        PbwMonomial::default()
    }

    /// Builds a monomial from part multisets in any order.
    pub fn new(mut l: Vec<u32>, mut j: Vec<u32>) -> Self {
        assert!(l.iter().chain(&j).all(|&p| p >= 1), "monomial parts must be positive");
        l.sort_unstable_by(|a, b| b.cmp(a));
        j.sort_unstable_by(|a, b| b.cmp(a));
        PbwMonomial { l, j }
    }

    pub fn l_parts(&self) -> &[u32] {
        &self.l
    }

    pub fn j_parts(&self) -> &[u32] {
        &self.j
    }

    pub fn degree(&self) -> usize {
        self.l.iter().chain(&self.j).map(|&p| p as usize).sum()
    }

    pub fn is_top(&self) -> bool {
        self.l.is_empty() && self.j.is_empty()
    }

    /// Number of J factors.
    pub fn j_count(&self) -> usize {
        self.j.len()
    }

    /// The creation modes from left to right.
    pub fn modes(&self) -> Vec<Mode> {
        self.l
            .iter()
            .map(|&m| Mode::l(-(m as i64)))
            .chain(self.j.iter().map(|&n| Mode::j(-(n as i64))))
            .collect()
    }

    /// The leftmost mode, `None` for the top vector.
    pub fn first(&self) -> Option<Mode> {
        if let Some(&m) = self.l.first() {
            Some(Mode::l(-(m as i64)))
        } else {
            self.j.first().map(|&n| Mode::j(-(n as i64)))
        }
    }

    /// The monomial with its leftmost mode removed.
    pub fn rest(&self) -> PbwMonomial {
        if !self.l.is_empty() {
            PbwMonomial { l: self.l[1..].to_vec(), j: self.j.clone() }
        } else {
            PbwMonomial { l: Vec::new(), j: self.j[1..].to_vec() }
        }
    }

    /// Whether `mode · self` is already canonical.
    fn accepts(&self, mode: Mode) -> bool {
        mode.index < 0 && self.first().is_none_or(|f| mode.rank() <= f.rank())
    }

    fn prepend(&self, mode: Mode) -> PbwMonomial {
        let mut out = self.clone();
        let part = (-mode.index) as u32;
        match mode.gen {
            Gen::L => out.l.insert(0, part),
            Gen::J => out.j.insert(0, part),
        }
        out
    }

    /// Whether the monomial is `J(−1)^p w`.
    pub fn is_j_minus_one_power(&self, p: usize) -> bool {
        self.l.is_empty() && self.j.len() == p && self.j.iter().all(|&n| n == 1)
    }
}

impl Ord for PbwMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.l.cmp(&other.l)).then_with(|| self.j.cmp(&other.j))
    }
}

impl PartialOrd for PbwMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_top() {
            return f.write_str("w");
        }
        let mut groups: Vec<(Mode, usize)> = Vec::new();
        for m in self.modes() {
            match groups.last_mut() {
                Some((g, c)) if *g == m => *c += 1,
                _ => groups.push((m, 1)),
            }
        }
        for (i, (m, c)) in groups.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *c == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{m}^{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All canonical monomials of the given degree, ordered by (L parts, J parts).
pub fn graded_basis(degree: usize) -> Vec<PbwMonomial> {
    let mut out = Vec::new();
    for ld in 0..=degree {
        for l in partitions(ld) {
            for j in partitions(degree - ld) {
                out.push(PbwMonomial { l: l.clone(), j });
            }
        }
    }
    out.sort();
    out
}

/// Partitions of `n` as weakly decreasing part lists.
pub fn partitions(n: usize) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n as u32, n as u32, &mut Vec::new(), &mut out);
    out
}

/// Finite linear combination of canonical monomials; zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct PbwVector<R: Ring = QuadScalar> {
    terms: BTreeMap<PbwMonomial, R>,
}

impl<R: Ring> Default for PbwVector<R> {
    fn default() -> Self {
        PbwVector { terms: BTreeMap::new() }
    }
}

impl<R: Ring> PbwVector<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: PbwMonomial, c: R) -> Self {
        let mut v = Self::default();
        v.add_term(m, &c);
        v
    }

    pub fn top() -> Self {
        Self::monomial(PbwMonomial::top(), R::one())
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

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &R)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &PbwMonomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: &R) {
        if c.is_zero() {
            return;
        }
        if let Some(x) = self.terms.get_mut(&m) {
            x.add_assign(c);
            if x.is_zero() {
                self.terms.remove(&m);
            }
        } else {
            self.terms.insert(m, c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &PbwVector<R>, s: &R) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), &c.mul(s));
        }
    }

    pub fn add(&self, other: &PbwVector<R>) -> PbwVector<R> {
        let mut out = self.clone();
        out.add_scaled(other, &R::one());
        out
    }

    pub fn sub(&self, other: &PbwVector<R>) -> PbwVector<R> {
        let mut out = self.clone();
        out.add_scaled(other, &R::one().neg());
        out
    }

    pub fn scaled(&self, s: &R) -> PbwVector<R> {
        let mut out = Self::default();
        out.add_scaled(self, s);
        out
    }

    /// The common degree of all terms; `Ok(None)` for the zero vector.
    pub fn degree(&self) -> Result<Option<usize>, ModeError> {
        let mut d = None;
        for m in self.terms.keys() {
            match d {
                None => d = Some(m.degree()),
                Some(e) if e != m.degree() => return Err(ModeError::NotHomogeneous(e, m.degree())),
                _ => {}
            }
        }
        Ok(d)
    }

    /// Apply the automorphism `J(n) ↦ −J(n)`: each monomial picks up the sign
    /// `(−1)^{#J}`.
    pub fn flip_j(&self) -> PbwVector<R> {
        let mut out = Self::default();
        for (m, c) in &self.terms {
            let c = if m.j_count() % 2 == 1 { c.neg() } else { c.clone() };
            out.add_term(m.clone(), &c);
        }
        out
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> PbwVector<S> {
        let mut out = PbwVector::<S>::default();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    /// Coefficients in the order of `basis`; monomials outside the basis are
    /// reported as an error by returning `None`.
    pub fn coordinates(&self, basis: &[PbwMonomial]) -> Option<Vec<R>> {
        let index: HashMap<&PbwMonomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut out = vec![R::zero(); basis.len()];
        for (m, c) in &self.terms {
            out[*index.get(m)?] = c.clone();
        }
        Some(out)
    }
}

impl PbwVector<QuadScalar> {
    pub fn from_coordinates(basis: &[PbwMonomial], coords: &[QuadScalar]) -> Self {
        let mut out = Self::default();
        for (m, c) in basis.iter().zip(coords) {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl fmt::Display for PbwVector<QuadScalar> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest degree first, matching the written vectors
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.is_top() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for PbwVector<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(m, c)| (m.to_string(), c))).finish()
    }
}

/// Lowest-weight parameters of a module; the central charge is fixed at 6/5.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleParams {
    pub h: QuadScalar,
    pub k: QuadScalar,
}

impl ModuleParams {
    pub fn new(h: QuadScalar, k: QuadScalar) -> Self {
        ModuleParams { h, k }
    }

    pub fn vacuum() -> Self {
        ModuleParams { h: QuadScalar::zero(), k: QuadScalar::zero() }
    }

    /// Parameters of the image under `J ↦ −J`.
    pub fn flipped(&self) -> Self {
        ModuleParams { h: self.h.clone(), k: -&self.k }
    }
}

pub fn central_charge() -> Rational {
    rat(6, 5)
}

/// One term of a commutator: a rational coefficient times a mode word
/// (leftmost acts last); the empty word is the identity.
pub type BracketTerm = (Rational, Vec<Mode>);

/// `[a, b]` written as a combination of mode words, truncated for an operand
/// of the given degree.
pub fn bracket(a: Mode, b: Mode, operand_degree: i64) -> Vec<BracketTerm> {
    let (m, n) = (a.index, b.index);
    let s = m + n;
    let mut out: Vec<BracketTerm> = Vec::new();
    let mut push = |c: Rational, w: Vec<Mode>| {
        if c != Rational::from_integer(0.into()) {
            out.push((c, w));
        }
    };
    match (a.gen, b.gen) {
        (Gen::L, Gen::L) => {
            push(rat(m - n, 1), vec![Mode::l(s)]);
            if s == 0 {
                push(rat(m * m * m - m, 10), vec![]);
            }
        }
        (Gen::L, Gen::J) => push(rat(2 * m - n, 1), vec![Mode::j(s)]),
        (Gen::J, Gen::L) => push(rat(-(2 * n - m), 1), vec![Mode::j(s)]),
        (Gen::J, Gen::J) => {
            let lin = (m - n) * (22 * (s + 2) * (s + 3) + 35 * (m + 2) * (n + 2));
            push(rat(lin, 1), vec![Mode::l(s)]);
            let quad = rat(-120 * (m - n), 1);
            let dd = operand_degree;
            for k in (s - dd)..=-2 {
                push(quad.clone(), vec![Mode::l(k), Mode::l(s - k)]);
            }
            for k in -1..=dd {
                push(quad.clone(), vec![Mode::l(s - k), Mode::l(k)]);
            }
            if s == 0 {
                push(rat(-7 * m * (m * m - 1) * (m * m - 4), 10), vec![]);
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Eliminator<R: Ring> {
    power: usize,
    replacement: PbwVector<R>,
}

/// Rewriting engine for one module; caches `mode · monomial` products.
///
/// Optionally works in the quotient by a singular vector whose `J(−1)^p w`
/// coefficient is nonzero: whenever `J(−1)^p w` would be formed it is
/// replaced by the remaining terms of that vector, so every monomial the
/// engine produces has fewer than `p` trailing `J(−1)` factors.
#[derive(Clone, Debug)]
pub struct ModuleCalc<R: Ring = QuadScalar> {
    h: R,
    k: R,
    elim: Option<Eliminator<R>>,
    memo: HashMap<(Mode, PbwMonomial), PbwVector<R>>,
}

impl ModuleCalc<QuadScalar> {
    pub fn numeric(params: &ModuleParams) -> Self {
        ModuleCalc::new(params.h.clone(), params.k.clone())
    }

    /// Switch to the quotient by `singular`, eliminating `J(−1)^p w` where `p`
    /// is the degree of `singular`. The memo is cleared.
    pub fn with_eliminator(mut self, singular: &PbwVector<QuadScalar>) -> Result<Self, ModeError> {
        let p = singular.degree()?.ok_or(ModeError::ZeroVector)?;
        let key = PbwMonomial::new(vec![], vec![1; p]);
        let c = singular.coefficient(&key);
        if c.is_zero() {
            return Err(ModeError::NoEliminationTerm(p));
        }
        let mut rest = singular.clone();
        rest.add_term(key, &-&c);
        let factor = -&c.inv().expect("nonzero");
        self.elim = Some(Eliminator { power: p, replacement: rest.scaled(&factor) });
        self.memo.clear();
        Ok(self)
    }

    /// The power `p` of the eliminated `J(−1)^p w`, if any.
    pub fn eliminated_power(&self) -> Option<usize> {
        self.elim.as_ref().map(|e| e.power)
    }
}

impl<R: Ring> ModuleCalc<R> {
    pub fn new(h: R, k: R) -> Self {
        ModuleCalc { h, k, elim: None, memo: HashMap::new() }
    }

    pub fn h(&self) -> &R {
        &self.h
    }

    pub fn k(&self) -> &R {
        &self.k
    }

    pub fn apply_mode(&mut self, mode: Mode, v: &PbwVector<R>) -> PbwVector<R> {
        let mut out = PbwVector::default();
        for (m, c) in v.terms() {
            let r = self.act(mode, m);
            out.add_scaled(&r, c);
        }
        out
    }

    /// Apply a word of modes, rightmost mode first.
    pub fn apply_word(&mut self, word: &[Mode], v: &PbwVector<R>) -> PbwVector<R> {
        let mut cur = v.clone();
        for &m in word.iter().rev() {
            if cur.is_zero() {
                break;
            }
            cur = self.apply_mode(m, &cur);
        }
        cur
    }

    /// Canonical form of `Σ cᵢ · wordᵢ · w`.
    pub fn canonicalize(&mut self, terms: &[(QuadScalar, Vec<Mode>)]) -> PbwVector<R> {
        let top = PbwVector::<R>::top();
        let mut out = PbwVector::default();
        for (c, word) in terms {
            let v = self.apply_word(word, &top);
            out.add_scaled(&v, &R::from_scalar(c));
        }
        out
    }

    fn act_word_on(&mut self, word: &[Mode], m: &PbwMonomial) -> PbwVector<R> {
        let v = PbwVector::monomial(m.clone(), R::one());
        self.apply_word(word, &v)
    }

    /// `mode · m` in canonical form.
    pub fn act(&mut self, mode: Mode, m: &PbwMonomial) -> PbwVector<R> {
        let deg = m.degree() as i64;
        if mode.index > deg {
            return PbwVector::default();
        }
        if mode == Mode::l(0) {
            let w = self.h.add(&R::from_scalar(&QuadScalar::from_int(deg)));
            return PbwVector::monomial(m.clone(), w);
        }
        if m.is_top() && mode.index == 0 {
            return PbwVector::monomial(m.clone(), self.k.clone());
        }
        if m.accepts(mode) {
            if let Some(e) = &self.elim {
                if mode == Mode::j(-1) && m.is_j_minus_one_power(e.power - 1) {
                    return e.replacement.clone();
                }
            }
            return PbwVector::monomial(m.prepend(mode), R::one());
        }
        let key = (mode, m.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        // mode · first · rest = first · (mode · rest) + [mode, first] · rest
        let first = m.first().expect("non-top monomial");
        let rest = m.rest();
        let inner = self.act(mode, &rest);
        let mut out = self.apply_mode(first, &inner);
        for (c, word) in bracket(mode, first, rest.degree() as i64) {
            let v = self.act_word_on(&word, &rest);
            out.add_scaled(&v, &R::from_scalar(&QuadScalar::from_rational(c)));
        }
        self.memo.insert(key, out.clone());
        out
    }
}
