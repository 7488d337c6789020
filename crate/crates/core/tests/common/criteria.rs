//! One check per acceptance criterion. Each returns a one-line detail on
//! success and a description of the first failure otherwise.

use std::collections::BTreeMap;

use rand::Rng;

use orbifold_fusion::config::Registry;
use orbifold_fusion::group::GroupSetAlgebra;
use orbifold_fusion::poly::Poly;
use orbifold_fusion::singular::{canonical_vector, in_span, is_singular, singular_space, solve_params};
use orbifold_fusion::table::{build_table, check_symmetries, Verdict};
use orbifold_fusion::zhu::{psi_polynomial, EvalContext, Reducer, ZhuModule, VAR_H2, VAR_H3, VAR_K2, VAR_K3};
use orbifold_fusion::{graded_basis, ModuleCalc, ModuleParams, PbwVector, QuadScalar};

use super::*;

pub type Outcome = Result<String, String>;

pub const MODULES: [&str; 8] = ["M0(0)", "M0(1)", "M0(2)", "W0(0)", "W0(1)", "W0(2)", "Ma", "Wa"];

/// `(h, k)` of every module, written out independently of the registry.
pub fn expected_params(name: &str) -> ModuleParams {
    let (h, k) = match name {
        "M0(0)" => ("0", "0"),
        "M0(1)" => ("2", "12*s3"),
        "M0(2)" => ("2", "-12*s3"),
        "W0(0)" => ("8/5", "0"),
        "W0(1)" => ("3/5", "-2*s3"),
        "W0(2)" => ("3/5", "2*s3"),
        "Ma" => ("1/2", "0"),
        "Wa" => ("1/10", "0"),
        _ => panic!("unknown module {name}"),
    };
    ModuleParams::new(q(h), q(k))
}

/// Every corpus vector is exactly singular at parameters recovered from the
/// vectors themselves.
pub fn corpus_verification(reg: &Registry) -> Outcome {
    let mut checked = 0;
    for name in MODULES {
        let m = reg.get(name).map_err(|e| e.to_string())?;
        if m.params != expected_params(name) {
            return Err(format!("{name}: recovered ({}, {})", m.params.h, m.params.k));
        }
        for (vname, terms) in &m.vectors {
            let sols = solve_params(terms).map_err(|e| format!("{name}/{vname}: {e}"))?;
            if !sols.points.contains(&m.params) {
                return Err(format!("{name}/{vname}: the module parameters are not among its solutions"));
            }
            let v = canonical_vector(terms, &m.params);
            let rep = is_singular(&v, &m.params).map_err(|e| format!("{name}/{vname}: {e}"))?;
            if !rep.is_singular || rep.residuals.iter().any(|(_, r)| !r.is_zero()) {
                return Err(format!("{name}/{vname}: nonzero residual"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} vectors singular with exactly zero residuals, (h, k) recovered for 8 modules"))
}

pub const SPACE_DIMENSIONS: [(&str, usize, usize); 7] = [
    ("M0(1)", 1, 1),
    ("W0(1)", 1, 1),
    ("W0(0)", 2, 2),
    ("Ma", 2, 2),
    ("Wa", 2, 1),
    ("Wa", 4, 2),
    ("Ma", 6, 3),
];

/// Dimensions of the singular spaces, and every corpus vector of a searched
/// degree lies in the space found.
pub fn singular_dimensions(reg: &Registry) -> Outcome {
    let mut spans = 0;
    for (name, degree, expected) in SPACE_DIMENSIONS {
        let m = reg.get(name).map_err(|e| e.to_string())?;
        let space = singular_space(degree, &m.params).map_err(|e| e.to_string())?;
        if space.len() != expected {
            return Err(format!("{name} degree {degree}: dimension {} instead of {expected}", space.len()));
        }
        for (vname, terms) in &m.vectors {
            let v = canonical_vector(terms, &m.params);
            if v.degree().ok().flatten() == Some(degree) {
                if !in_span(&space, &v).map_err(|e| e.to_string())? {
                    return Err(format!("{name}/{vname} is outside the degree-{degree} singular space"));
                }
                spans += 1;
            }
        }
    }
    Ok(format!("7 dimension counts match, {spans} corpus vectors lie in the spaces found"))
}

/// The reference ψ relation as a polynomial in `h₂, k₂, h₃, k₃`.
pub fn reference_psi() -> Poly {
    let s3 = QuadScalar::sqrt_m3();
    let mono = |vars: &[usize], c: QuadScalar| {
        let mut e = [0u8; 4];
        for &v in vars {
            e[v] += 1;
        }
        Poly::monomial(e, c)
    };
    [
        mono(&[VAR_H2, VAR_H2], &s3 * &q("50")),
        mono(&[VAR_H3, VAR_H3], &s3 * &q("50")),
        mono(&[VAR_H2], &s3 * &q("-20")),
        mono(&[VAR_H3], &s3 * &q("-20")),
        mono(&[], &s3 * &q("4")),
        mono(&[VAR_H2, VAR_H3], &s3 * &q("-100")),
        mono(&[VAR_K2], q("-5")),
        mono(&[VAR_K3], q("5")),
    ]
    .iter()
    .fold(Poly::zero(), |acc, p| acc.add(p))
}

/// Symbolic reduction of the degree-two vector of `W0(1)`.
pub fn psi_reproduction(reg: &Registry) -> Outcome {
    let m = reg.get("W0(1)").map_err(|e| e.to_string())?;
    let (_, w21) = m.vectors.iter().find(|(n, _)| n == "w21").ok_or("w21 missing")?;
    let module = ZhuModule::new("W0(1)", m.params.clone(), m.zhu.eliminator.clone(), 1, Vec::new());
    let calc = module.calc().map_err(|e| e.to_string())?;
    let mut red = Reducer::new(calc, EvalContext::symbolic(&m.params.h), 1).map_err(|e| e.to_string())?;
    let v = red.calc_mut().canonicalize(w21);
    let reduced = red.reduce(&v).map_err(|e| e.to_string())?.coefficient(0).clone();
    let reference = reference_psi();
    let ratio = reduced.coefficient(&[0, 0, 0, 1]).checked_div(&q("5")).map_err(|e| e.to_string())?;
    if ratio.is_zero() || reduced != reference.scale(&ratio) {
        return Err(format!("reduced relation {} is not proportional to the reference relation", reduced.render(&["h2", "k2", "h3", "k3"])));
    }
    if psi_polynomial() != &reference {
        return Err("the normalised psi differs from the reference coefficients".into());
    }
    Ok(format!("reduction equals {ratio} x (50s3, -20s3, 4s3, -100s3, -5, 5); normalised psi matches exactly"))
}

/// The lower-bound families: `(expected, L³, L¹, L²)` for all `i, j`.
pub fn lower_bound_families() -> Vec<(usize, String, String, String)> {
    let m = |i: usize| format!("M0({})", i % 3);
    let w = |i: usize| format!("W0({})", i % 3);
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            out.push((1, m(i + j), m(i), m(j)));
            out.push((1, w(i + j), w(i), w(j)));
            out.push((1, w(i + j), m(i), w(j)));
        }
        out.push((1, "Ma".into(), m(i), "Ma".into()));
        out.push((1, "Wa".into(), m(i), "Wa".into()));
        out.push((1, "Ma".into(), w(i), "Wa".into()));
        out.push((1, "Wa".into(), w(i), "Wa".into()));
    }
    out.push((2, "Ma".into(), "Ma".into(), "Ma".into()));
    out.push((2, "Wa".into(), "Ma".into(), "Wa".into()));
    out.push((2, "Wa".into(), "Wa".into(), "Wa".into()));
    out
}

pub fn lower_bounds() -> Outcome {
    let cfg = group_config();
    let families = lower_bound_families();
    for (expected, l3, l1, l2) in &families {
        let n = cfg.lower_bound(l1, l2, l3).map_err(|e| e.to_string())?;
        if n != *expected {
            return Err(format!("N({l3}; {l1}, {l2}) >= {n}, expected exactly {expected}"));
        }
    }
    Ok(format!("{} instances of the 7 + 3 families give exactly 1 and 2", families.len()))
}

pub fn fusion_table(reg: &Registry) -> Outcome {
    let table = build_table(reg, &group_config(), &[]);
    if let Some(e) = table.errors.first() {
        return Err(format!("N({}; {}, {}): {}", e.l3, e.l1, e.l2, e.message));
    }
    for r in &table.reports {
        let expected = expected_multiplicity(&r.l1, &r.l2, &r.l3);
        if r.verdict != Verdict::Determined || r.lower != expected {
            return Err(format!("N({}; {}, {}): bounds {}..{}, expected {expected}", r.l3, r.l1, r.l2, r.lower, r.upper));
        }
    }
    let wa_wa: usize = MODULES.iter().filter_map(|l3| table.multiplicity("Wa", "Wa", l3)).sum();
    if wa_wa != 10 {
        return Err(format!("Wa x Wa has total multiplicity {wa_wa}"));
    }
    let sym = check_symmetries(&table, reg).map_err(|e| e.to_string())?;
    if let Some(v) = sym.violations.first() {
        return Err(v.clone());
    }
    Ok(format!(
        "{} entries determined and equal to the expected rules, Wa x Wa total 10, {} symmetry identities hold",
        table.reports.len(),
        sym.checked
    ))
}

pub fn bracket_consistency() -> Result<usize, String> {
    let mut calc = ModuleCalc::<Poly>::new(Poly::var(0), Poly::var(1));
    let modes = modes_up_to(3);
    let vectors: Vec<PbwVector<Poly>> =
        (0..=4).flat_map(graded_basis).map(|m| PbwVector::monomial(m, Poly::one())).collect();
    let mut count = 0;
    for &a in &modes {
        for &b in &modes {
            for v in &vectors {
                if !bracket_defect(&mut calc, a, b, v).is_zero() {
                    return Err(format!("[{a}, {b}] disagrees on {v:?}"));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

pub fn field_axioms(samples: usize) -> Result<usize, String> {
    let mut rng = rng(0x5eed);
    for _ in 0..samples {
        let (a, b, c) = (random_scalar(&mut rng), random_scalar(&mut rng), random_scalar(&mut rng));
        field_axioms_hold(&a, &b, &c)?;
    }
    Ok(samples)
}

fn basis_map(i: usize) -> BTreeMap<usize, QuadScalar> {
    BTreeMap::from([(i, QuadScalar::one())])
}

/// `(xy)z = x(yz)` on all basis triples.
pub fn algebra_associative(alg: &GroupSetAlgebra) -> Result<usize, String> {
    let n = alg.dim();
    for x in 0..n {
        for y in 0..n {
            let xy = alg.mul(&basis_map(x), &basis_map(y));
            for z in 0..n {
                let yz = alg.mul(&basis_map(y), &basis_map(z));
                if alg.mul(&xy, &basis_map(z)) != alg.mul(&basis_map(x), &yz) {
                    return Err(format!("{}: basis triple ({x}, {y}, {z})", alg.set().name()));
                }
            }
        }
    }
    Ok(n * n * n)
}

pub fn shipped_algebras_associative() -> Result<usize, String> {
    let cfg = group_config();
    let mut total = 0;
    for i in 0..cfg.sets.len() {
        total += algebra_associative(cfg.algebra(i).map_err(|e| e.to_string())?)?;
    }
    Ok(total)
}

pub fn random_vector<R: Rng>(rng: &mut R, max_degree: usize) -> PbwVector {
    let mut v = PbwVector::zero();
    for m in (0..=max_degree).flat_map(graded_basis) {
        if rng.gen_bool(0.5) {
            v.add_term(m, &random_scalar(rng));
        }
    }
    v
}

/// `reduce(a x + b y) = a reduce(x) + b reduce(y)` on random vectors of
/// degree at most 3, in every registry module with `d ≥ 2` and a random
/// pair of neighbouring modules.
pub fn reduce_linearity(reg: &Registry, samples: usize) -> Result<usize, String> {
    let mut rng = rng(0x11ea);
    let mut count = 0;
    for m in &reg.modules {
        let left = &reg.modules[rng.gen_range(0..reg.modules.len())].params;
        let right = &reg.modules[rng.gen_range(0..reg.modules.len())].params;
        // Without the eliminator, d = 4 keeps every J(-1)^i w with i ≤ 3.
        let calc = ModuleCalc::numeric(&m.params);
        let mut red = Reducer::new(calc, EvalContext::numeric(&m.params.h, left, right), 4).map_err(|e| e.to_string())?;
        for _ in 0..samples {
            let (x, y) = (random_vector(&mut rng, 3), random_vector(&mut rng, 3));
            let (a, b) = (random_scalar(&mut rng), random_scalar(&mut rng));
            let mut comb = x.scaled(&a);
            comb.add_scaled(&y, &b);
            let lhs = red.reduce(&comb).map_err(|e| e.to_string())?;
            let rx = red.reduce(&x).map_err(|e| e.to_string())?;
            let ry = red.reduce(&y).map_err(|e| e.to_string())?;
            let rhs = rx.scaled(&a).add(&ry.scaled(&b));
            if lhs.coefficients() != rhs.coefficients() {
                return Err(format!("{}: reduction is not linear", m.name));
            }
            count += 1;
        }
    }
    Ok(count)
}

pub fn property_suites(reg: &Registry) -> Outcome {
    let brackets = bracket_consistency()?;
    let fields = field_axioms(10_000)?;
    let assoc = shipped_algebras_associative()?;
    let linear = reduce_linearity(reg, 25)?;
    Ok(format!(
        "{brackets} bracket checks, {fields} field-axiom triples, {assoc} associativity triples, {linear} linearity checks"
    ))
}
