//! Reduction in the Zhu bimodule `A(N)` and the resulting fusion-rule upper
//! bounds.
//!
//! For `n ≤ −1` and `u ∈ N` the class of `L(n)u` and `J(n)u` in `A(N)` is
//!
//! ```text
//! [L(n)u] = (−1)^{n−1}[ω]*[u] + (−1)^{n−1} n [u]*[ω] + (−1)^n wt(u) [u]
//! [J(n)u] = (−1)^n ( n[J(−1)u] + (n+1)[J(0)u] − (n+1)[J]*[u] − n(n+1)/2 [u]*[J] )
//! ```
//!
//! The bound `dim L³(0)* ⊗ A(N) ⊗ L²(0)` only needs these classes after
//! pairing with one-dimensional top levels, so left multiplication by `[ω]`,
//! `[J]` is replaced by `(h₃, k₃)` and right multiplication by `(h₂, k₂)` as
//! soon as it appears. What remains is a combination of the generators
//! `[J(−1)ⁱ w]`.
//!
//! Reductions run over any [`Ring`]: with [`Poly`] coefficients in the
//! variables `h₂, k₂, h₃, k₃` the relation matrix of a module is computed
//! once and then specialised to each pair of target modules.

use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::expr::{parse_corpus, TermList};
use crate::linalg::Matrix;
use crate::modes::{Gen, Mode, ModeError, ModuleCalc, ModuleParams, PbwMonomial, PbwVector};
use crate::poly::Poly;
use crate::scalars::{QuadScalar, Ring};

/// Variable indices of the symbolic evaluation context.
pub const VAR_H2: usize = 0;
pub const VAR_K2: usize = 1;
pub const VAR_H3: usize = 2;
pub const VAR_K3: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZhuError {
    #[error("generator [J(-1)^{index} w] needed but the truncation is d = {d}")]
    TruncationExceeded { index: usize, d: usize },
    #[error("generator truncation must be at least 1")]
    ZeroTruncation,
    #[error(transparent)]
    Mode(#[from] ModeError),
}

/// Eigenvalues substituted for the left and right actions of `[ω]`, `[J]`,
/// together with the lowest weight `h1` of the module being reduced.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalContext<R: Ring = QuadScalar> {
    pub left_h: R,
    pub left_k: R,
    pub right_h: R,
    pub right_k: R,
    pub h1: QuadScalar,
}

impl EvalContext<QuadScalar> {
    /// Left eigenvalues from `left` (the `L³` side), right ones from `right`.
    pub fn numeric(h1: &QuadScalar, left: &ModuleParams, right: &ModuleParams) -> Self {
        EvalContext {
            left_h: left.h.clone(),
            left_k: left.k.clone(),
            right_h: right.h.clone(),
            right_k: right.k.clone(),
            h1: h1.clone(),
        }
    }
}

impl EvalContext<Poly> {
    /// All four eigenvalues left as the variables `h₂, k₂, h₃, k₃`.
    pub fn symbolic(h1: &QuadScalar) -> Self {
        EvalContext {
            left_h: Poly::var(VAR_H3),
            left_k: Poly::var(VAR_K3),
            right_h: Poly::var(VAR_H2),
            right_k: Poly::var(VAR_K2),
            h1: h1.clone(),
        }
    }
}

/// A class in `A(N)` written on the generators `[J(−1)ⁱ w]`, `i < d`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluatedClass<R: Ring = QuadScalar> {
    coefficients: Vec<R>,
}

impl<R: Ring> EvaluatedClass<R> {
    pub fn zero(d: usize) -> Self {
        EvaluatedClass { coefficients: vec![R::zero(); d] }
    }

    pub fn generator(i: usize, d: usize) -> Self {
        let mut c = Self::zero(d);
        c.coefficients[i] = R::one();
        c
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len()
    }

    /// Coefficient of `[J(−1)ⁱ w]`.
    pub fn coefficient(&self, i: usize) -> &R {
        &self.coefficients[i]
    }

    pub fn coefficients(&self) -> &[R] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(R::is_zero)
    }

    fn add_scaled(&mut self, other: &Self, s: &R) {
        for (a, b) in self.coefficients.iter_mut().zip(&other.coefficients) {
            if !b.is_zero() {
                a.add_assign(&b.mul(s));
            }
        }
    }

    pub fn scaled(&self, s: &R) -> Self {
        EvaluatedClass { coefficients: self.coefficients.iter().map(|c| c.mul(s)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &R::one());
        out
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> EvaluatedClass<S> {
        EvaluatedClass { coefficients: self.coefficients.iter().map(f).collect() }
    }
}

/// Memoised reducer for one module and one evaluation context.
pub struct Reducer<R: Ring = QuadScalar> {
    calc: ModuleCalc,
    ctx: EvalContext<R>,
    d: usize,
    memo: HashMap<PbwMonomial, EvaluatedClass<R>>,
}

fn sign(n: i64) -> QuadScalar {
    QuadScalar::from_int(if n.rem_euclid(2) == 0 { 1 } else { -1 })
}

impl<R: Ring> Reducer<R> {
    /// `calc` is the numeric calculator of the module (possibly working in a
    /// quotient); `d` is the number of generators kept.
    pub fn new(calc: ModuleCalc, ctx: EvalContext<R>, d: usize) -> Result<Self, ZhuError> {
        if d == 0 {
            return Err(ZhuError::ZeroTruncation);
        }
        Ok(Reducer { calc, ctx, d, memo: HashMap::new() })
    }

    pub fn calc_mut(&mut self) -> &mut ModuleCalc {
        &mut self.calc
    }

    /// Reduce a canonical vector of the module.
    pub fn reduce(&mut self, v: &PbwVector) -> Result<EvaluatedClass<R>, ZhuError> {
        let mut out = EvaluatedClass::zero(self.d);
        for (m, c) in v.terms() {
            let r = self.reduce_monomial(m)?;
            out.add_scaled(&r, &R::from_scalar(c));
        }
        Ok(out)
    }

    fn reduce_monomial(&mut self, m: &PbwMonomial) -> Result<EvaluatedClass<R>, ZhuError> {
        if let Some(r) = self.memo.get(m) {
            return Ok(r.clone());
        }
        let r = self.reduce_uncached(m)?;
        self.memo.insert(m.clone(), r.clone());
        Ok(r)
    }

    fn reduce_uncached(&mut self, m: &PbwMonomial) -> Result<EvaluatedClass<R>, ZhuError> {
        let Some(first) = m.first() else {
            return Ok(EvaluatedClass::generator(0, self.d));
        };
        if m.is_j_minus_one_power(m.j_count()) {
            let i = m.j_count();
            if i >= self.d {
                return Err(ZhuError::TruncationExceeded { index: i, d: self.d });
            }
            return Ok(EvaluatedClass::generator(i, self.d));
        }
        let u = m.rest();
        let n = first.index;
        let nq = QuadScalar::from_int(n);
        let phi_u = self.reduce_monomial(&u)?;
        match first.gen {
            Gen::L => {
                // (−1)^{n−1}(h₃ + n h₂) + (−1)^n wt(u)
                let wt = &self.ctx.h1 + &QuadScalar::from_int(u.degree() as i64);
                let s = sign(n - 1);
                let c = self
                    .ctx
                    .left_h
                    .add(&self.ctx.right_h.scale(&nq))
                    .scale(&s)
                    .sub(&R::from_scalar(&(&s * &wt)));
                Ok(phi_u.scaled(&c))
            }
            Gen::J => {
                let unit = PbwVector::monomial(u.clone(), QuadScalar::one());
                let ju = self.calc.apply_mode(Mode::j(-1), &unit);
                let j0u = self.calc.apply_mode(Mode::j(0), &unit);
                let phi_ju = self.reduce(&ju)?;
                let phi_j0u = self.reduce(&j0u)?;
                let n1 = QuadScalar::from_int(n + 1);
                let tri = QuadScalar::from_int(n * (n + 1) / 2);
                let mut out = phi_ju.scaled(&R::from_scalar(&nq));
                out.add_scaled(&phi_j0u, &R::from_scalar(&n1));
                let c = self.ctx.left_k.scale(&n1).add(&self.ctx.right_k.scale(&tri)).neg();
                out.add_scaled(&phi_u, &c);
                Ok(out.scaled(&R::from_scalar(&sign(n))))
            }
        }
    }
}

/// Reduce a single canonical vector with a fresh reducer.
pub fn reduce<R: Ring>(
    calc: ModuleCalc,
    v: &PbwVector,
    ctx: EvalContext<R>,
    d: usize,
) -> Result<EvaluatedClass<R>, ZhuError> {
    Reducer::new(calc, ctx, d)?.reduce(v)
}

/// One source of relations: a vanishing vector `S` and the depth `j` up to
/// which `J(−1)ʲ S` also enters the relation matrix.
#[derive(Clone, Debug)]
pub struct RelationSource {
    pub name: String,
    pub vector: TermList,
    pub depth: usize,
}

/// Everything the upper bound needs about a module `N = L¹`.
#[derive(Clone, Debug)]
pub struct ZhuModule {
    pub name: String,
    pub params: ModuleParams,
    /// Singular vector used to eliminate `[J(−1)^d w]`, if any.
    pub eliminator: Option<TermList>,
    pub d: usize,
    pub relations: Vec<RelationSource>,
    symbolic: OnceLock<Result<RelationMatrix<Poly>, ZhuError>>,
}

impl ZhuModule {
    pub fn new(
        name: impl Into<String>,
        params: ModuleParams,
        eliminator: Option<TermList>,
        d: usize,
        relations: Vec<RelationSource>,
    ) -> Self {
        ZhuModule { name: name.into(), params, eliminator, d, relations, symbolic: OnceLock::new() }
    }

    /// Numeric calculator of the module, in the quotient by the eliminator.
    pub fn calc(&self) -> Result<ModuleCalc, ZhuError> {
        let mut calc = ModuleCalc::numeric(&self.params);
        if let Some(t) = &self.eliminator {
            let v = calc.canonicalize(t);
            calc = calc.with_eliminator(&v)?;
        }
        Ok(calc)
    }

    /// Relation matrix with entries polynomial in `h₂, k₂, h₃, k₃`,
    /// computed on first use.
    pub fn symbolic_relations(&self) -> Result<&RelationMatrix<Poly>, ZhuError> {
        self.symbolic
            .get_or_init(|| self.relations_in(EvalContext::symbolic(&self.params.h)))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Relation matrix reduced directly in a given context.
    pub fn relations_in<R: Ring>(&self, ctx: EvalContext<R>) -> Result<RelationMatrix<R>, ZhuError> {
        let mut red = Reducer::new(self.calc()?, ctx, self.d)?;
        let mut labels = Vec::new();
        let mut rows = Vec::new();
        for src in &self.relations {
            let mut v = red.calc_mut().canonicalize(&src.vector);
            for j in 0..=src.depth {
                if j > 0 {
                    v = red.calc_mut().apply_mode(Mode::j(-1), &v);
                }
                labels.push(match j {
                    0 => src.name.clone(),
                    1 => format!("J(-1){}", src.name),
                    _ => format!("J(-1)^{j}{}", src.name),
                });
                rows.push(red.reduce(&v)?);
            }
        }
        Ok(RelationMatrix { labels, rows, d: self.d })
    }
}

/// Rows are reduced relations, columns the generators `[J(−1)ⁱ w]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationMatrix<R: Ring = QuadScalar> {
    pub labels: Vec<String>,
    pub rows: Vec<EvaluatedClass<R>>,
    pub d: usize,
}

impl RelationMatrix<Poly> {
    /// Specialise at `right = (h₂, k₂)`, `left = (h₃, k₃)`.
    pub fn evaluate(&self, left: &ModuleParams, right: &ModuleParams) -> RelationMatrix {
        let pt = [right.h.clone(), right.k.clone(), left.h.clone(), left.k.clone()];
        RelationMatrix {
            labels: self.labels.clone(),
            rows: self.rows.iter().map(|r| r.map(|p| p.eval(&pt))).collect(),
            d: self.d,
        }
    }
}

impl RelationMatrix<QuadScalar> {
    pub fn matrix(&self) -> Matrix {
        Matrix::from_rows(self.rows.iter().map(|r| r.coefficients().to_vec()).collect(), self.d)
    }

    pub fn rank(&self) -> usize {
        self.matrix().rank()
    }
}

#[derive(Clone, Debug)]
pub struct UpperBound {
    pub bound: usize,
    pub rank: usize,
    pub relations: RelationMatrix,
}

/// `d − rank A` for `N = module`, `L³ = left`, `L² = right`.
pub fn fusion_upper_bound(
    module: &ZhuModule,
    left: &ModuleParams,
    right: &ModuleParams,
) -> Result<UpperBound, ZhuError> {
    let relations = module.symbolic_relations()?.evaluate(left, right);
    let rank = relations.rank();
    Ok(UpperBound { bound: module.d - rank, rank, relations })
}

const W0_1_CORPUS: &str = include_str!("../data/appendix/w0_1.txt");

/// The degree-two relation of `W^{0(1)}` as a polynomial in `h₂, k₂, h₃, k₃`,
/// scaled so that the coefficient of `k₃` is 5.
pub fn psi_polynomial() -> &'static Poly {
    static PSI: OnceLock<Poly> = OnceLock::new();
    PSI.get_or_init(|| {
        let recs = parse_corpus(W0_1_CORPUS).expect("shipped corpus parses");
        let get = |n: &str| recs.iter().find(|r| r.name == n).expect("shipped vector").terms.clone();
        let params = ModuleParams::new(QuadScalar::from_frac(3, 5), QuadScalar::from_parts(0, 1, -2, 1));
        let module = ZhuModule::new("W0(1)", params, Some(get("w11")), 1, Vec::new());
        let mut red = Reducer::new(module.calc().expect("w11 eliminates J(-1)w"), EvalContext::symbolic(&module.params.h), 1)
            .expect("d = 1");
        let v = red.calc_mut().canonicalize(&get("w21"));
        let p = red.reduce(&v).expect("degree-2 relation reduces").coefficient(0).clone();
        let c = p.coefficient(&[0, 0, 0, 1]);
        p.scale(&(QuadScalar::from_int(5) * c.inv().expect("k3 occurs")))
    })
}

/// `ψ(h₂, k₂, h₃, k₃)`; zero is necessary for `W^{0(1)} × L² ∋ L³`.
pub fn psi(h2: &QuadScalar, k2: &QuadScalar, h3: &QuadScalar, k3: &QuadScalar) -> QuadScalar {
    psi_polynomial().eval(&[h2.clone(), k2.clone(), h3.clone(), k3.clone()])
}
