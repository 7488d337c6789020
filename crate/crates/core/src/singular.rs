//! Singular vectors: checks, graded searches and recovery of `(h, k)`.
//!
//! A homogeneous vector `v` of positive degree is singular exactly when
//! `L(1)v = L(2)v = J(1)v = 0`; the other positive modes are generated by
//! these three through the commutation relations.

use rayon::prelude::*;
use thiserror::Error;

use crate::expr::TermList;
use crate::linalg::Matrix;
use crate::modes::{graded_basis, Mode, ModeError, ModuleCalc, ModuleParams, PbwMonomial, PbwVector};
use crate::poly::{cmp_scalar, resultant, Poly, UniPoly};
use crate::scalars::QuadScalar;

/// The annihilators checked for singularity.
pub const ANNIHILATORS: [Mode; 3] = [Mode::l(1), Mode::l(2), Mode::j(1)];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingularError {
    #[error(transparent)]
    Mode(#[from] ModeError),
    #[error("singularity needs a vector of positive degree")]
    DegreeZero,
    #[error("no parameters (h, k) make the vector singular")]
    NoSolution,
    #[error("the parameters (h, k) making the vector singular are not isolated")]
    NonIsolated,
}

#[derive(Clone, Debug)]
pub struct SingularReport {
    pub vector: PbwVector,
    pub degree: usize,
    pub residuals: Vec<(Mode, PbwVector)>,
    pub is_singular: bool,
}

/// Apply `L(1)`, `L(2)`, `J(1)` to a homogeneous vector of positive degree.
pub fn is_singular(v: &PbwVector, params: &ModuleParams) -> Result<SingularReport, SingularError> {
    let mut calc = ModuleCalc::numeric(params);
    check_with(&mut calc, v)
}

/// Like [`is_singular`] but reusing a calculator (and its cache).
pub fn check_with(calc: &mut ModuleCalc, v: &PbwVector) -> Result<SingularReport, SingularError> {
    let degree = v.degree()?.ok_or(ModeError::ZeroVector)?;
    if degree == 0 {
        return Err(SingularError::DegreeZero);
    }
    let residuals: Vec<(Mode, PbwVector)> = ANNIHILATORS.iter().map(|&m| (m, calc.apply_mode(m, v))).collect();
    let is_singular = residuals.iter().all(|(_, r)| r.is_zero());
    Ok(SingularReport { vector: v.clone(), degree, residuals, is_singular })
}

/// Matrix of `v ↦ (L(1)v, L(2)v, J(1)v)` on the degree-`d` graded piece,
/// one column per basis monomial.
pub fn annihilator_matrix(degree: usize, params: &ModuleParams) -> (Vec<PbwMonomial>, Matrix) {
    let basis = graded_basis(degree);
    let mut calc = ModuleCalc::numeric(params);
    let targets: Vec<(Mode, Vec<PbwMonomial>)> = ANNIHILATORS
        .iter()
        .filter(|m| m.index as usize <= degree)
        .map(|&m| (m, graded_basis(degree - m.index as usize)))
        .collect();
    let nrows: usize = targets.iter().map(|(_, b)| b.len()).sum();
    let mut mat = Matrix::zeros(nrows, basis.len());
    for (col, mono) in basis.iter().enumerate() {
        let v = PbwVector::monomial(mono.clone(), QuadScalar::one());
        let mut offset = 0;
        for (mode, tb) in &targets {
            let r = calc.apply_mode(*mode, &v);
            let coords = r.coordinates(tb).expect("image lies in the graded piece");
            for (i, c) in coords.into_iter().enumerate() {
                mat[(offset + i, col)] = c;
            }
            offset += tb.len();
        }
    }
    (basis, mat)
}

/// Basis of the singular vectors of degree `d`, in reduced echelon form
/// with respect to the graded basis order.
pub fn singular_space(degree: usize, params: &ModuleParams) -> Result<Vec<PbwVector>, SingularError> {
    if degree == 0 {
        return Err(SingularError::DegreeZero);
    }
    let (basis, mat) = annihilator_matrix(degree, params);
    let ns = mat.null_space();
    let rank = mat.rank();
    assert_eq!(rank + ns.nrows(), basis.len(), "rank-nullity mismatch between elimination routes");
    Ok((0..ns.nrows()).map(|r| PbwVector::from_coordinates(&basis, ns.row(r))).collect())
}

/// Whether `v` lies in the span of `space` (all of one degree).
pub fn in_span(space: &[PbwVector], v: &PbwVector) -> Result<bool, SingularError> {
    let Some(d) = v.degree()? else { return Ok(true) };
    let basis = graded_basis(d);
    let rows: Vec<Vec<QuadScalar>> = space.iter().filter_map(|s| s.coordinates(&basis)).collect();
    if rows.len() != space.len() {
        return Ok(false);
    }
    let m = Matrix::from_rows(rows, basis.len());
    Ok(m.row_space_contains(&v.coordinates(&basis).expect("degree checked")))
}

/// All `(h, k)` in ℚ(√−3)² making the written vector singular.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSolutions {
    pub points: Vec<ModuleParams>,
    /// Set when some eliminant does not split over ℚ(√−3), so further
    /// solutions may exist in an extension field.
    pub warning: Option<String>,
}

const VAR_H: usize = 0;
const VAR_K: usize = 1;

/// The polynomial conditions on `(h, k)`: every coefficient of `L(1)v`,
/// `L(2)v`, `J(1)v` with `h = x0`, `k = x1` symbolic.
pub fn singularity_conditions(terms: &TermList) -> Result<Vec<Poly>, SingularError> {
    let mut calc = ModuleCalc::new(Poly::var(VAR_H), Poly::var(VAR_K));
    let v = calc.canonicalize(terms);
    let degree = v.degree()?.ok_or(ModeError::ZeroVector)?;
    if degree == 0 {
        return Err(SingularError::DegreeZero);
    }
    let mut out = Vec::new();
    for m in ANNIHILATORS {
        let r = calc.apply_mode(m, &v);
        out.extend(r.terms().map(|(_, c)| c.clone()));
    }
    Ok(out)
}

/// Solve the singularity conditions of a written vector for `(h, k)`.
///
/// `k` is eliminated by pairwise resultants, the gcd of the eliminants is
/// solved for `h` in ℚ(√−3), and each `h` is substituted back to solve for
/// `k`. Every reported point is verified exactly against all conditions.
pub fn solve_params(terms: &TermList) -> Result<ParamSolutions, SingularError> {
    let polys = singularity_conditions(terms)?;
    solve_system(&polys)
}

pub fn solve_system(polys: &[Poly]) -> Result<ParamSolutions, SingularError> {
    let polys: Vec<Poly> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if polys.is_empty() {
        return Err(SingularError::NonIsolated);
    }
    let mut warning = None;
    let mut g = UniPoly::default();
    let mut with_k: Vec<&Poly> = Vec::new();
    for p in &polys {
        if p.uses_var(VAR_K) {
            with_k.push(p);
        } else {
            g = g.gcd(&p.to_uni(VAR_H).expect("only h occurs"));
        }
    }
    with_k.sort_by_key(|p| (p.degree_in(VAR_K), p.total_degree()));
    with_k.dedup();
    let pairs: Vec<(usize, usize)> = (0..with_k.len().min(8))
        .flat_map(|i| (i + 1..with_k.len().min(8)).map(move |j| (i, j)))
        .collect();
    let eliminants: Vec<UniPoly> =
        pairs.par_iter().map(|&(i, j)| resultant(with_k[i], with_k[j], VAR_K, VAR_H)).collect();
    for r in &eliminants {
        g = g.gcd(r);
    }
    if g.is_zero() {
        return Err(SingularError::NonIsolated);
    }
    if g.degree() == Some(0) {
        return Err(SingularError::NoSolution);
    }
    let (hs, rest) = g.roots_in_field();
    if rest.degree().unwrap_or(0) > 0 {
        warning = Some(format!("eliminant in h has a factor of degree {} without roots in Q(s3); solutions may lie outside the field", rest.degree().unwrap()));
    }
    let mut points = Vec::new();
    for h0 in hs {
        let mut gk = UniPoly::default();
        for p in &polys {
            let u = p.substitute(VAR_H, &h0).to_uni(VAR_K).expect("only k remains");
            gk = gk.gcd(&u);
        }
        if gk.is_zero() {
            return Err(SingularError::NonIsolated);
        }
        let (ks, rest) = gk.roots_in_field();
        if rest.degree().unwrap_or(0) > 0 && warning.is_none() {
            warning = Some(format!("at h = {h0} the condition on k has roots outside Q(s3)"));
        }
        for k0 in ks {
            let pt = [h0.clone(), k0.clone(), QuadScalar::zero(), QuadScalar::zero()];
            if polys.iter().all(|p| p.eval(&pt).is_zero()) {
                points.push(ModuleParams::new(h0.clone(), k0));
            }
        }
    }
    if points.is_empty() {
        return Err(SingularError::NoSolution);
    }
    points.sort_by(|a, b| cmp_scalar(&a.h, &b.h).then(cmp_scalar(&a.k, &b.k)));
    Ok(ParamSolutions { points, warning })
}

/// Parameters shared by all vectors of one module: solve on the first
/// vector, keep the candidates at which every other vector is singular.
pub fn common_params(vectors: &[TermList]) -> Result<ParamSolutions, SingularError> {
    let first = vectors.first().ok_or(ModeError::ZeroVector)?;
    let sols = solve_params(first)?;
    let mut points = Vec::new();
    for p in sols.points {
        let mut calc = ModuleCalc::numeric(&p);
        let mut ok = true;
        for t in &vectors[1..] {
            let v = calc.canonicalize(t);
            if !check_with(&mut calc, &v)?.is_singular {
                ok = false;
                break;
            }
        }
        if ok {
            points.push(p);
        }
    }
    Ok(ParamSolutions { points, warning: sols.warning })
}

/// Canonical form of written terms in a module with numeric parameters.
pub fn canonical_vector(terms: &TermList, params: &ModuleParams) -> PbwVector {
    ModuleCalc::numeric(params).canonicalize(terms)
}

/// Per-annihilator exact zero flags of a report.
pub fn residual_flags(report: &SingularReport) -> Vec<(String, bool)> {
    report.residuals.iter().map(|(m, r)| (m.to_string(), r.is_zero())).collect()
}
