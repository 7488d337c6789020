//! Zhu-bimodule reduction and the upper bounds derived from it.

mod common;

use orbifold_fusion::expr::parse_vector;
use orbifold_fusion::zhu::{fusion_upper_bound, psi, EvalContext, Reducer, ZhuError, ZhuModule};
use orbifold_fusion::{ModuleCalc, ModuleParams};

use common::criteria::{self, MODULES};

#[test]
fn psi_reproduces_the_reference_relation() {
    let reg = common::registry();
    criteria::psi_reproduction(&reg).unwrap();
}

#[test]
fn w0_1_bound_vanishes_exactly_off_the_zero_set_of_psi() {
    let reg = common::registry();
    let n = &reg.get("W0(1)").unwrap().zhu;
    for l2 in MODULES {
        for l3 in MODULES {
            let (p2, p3) = (&reg.get(l2).unwrap().params, &reg.get(l3).unwrap().params);
            let ub = fusion_upper_bound(n, p3, p2).unwrap();
            let zero = psi(&p2.h, &p2.k, &p3.h, &p3.k).is_zero();
            assert_eq!(ub.bound, usize::from(zero), "N({l3}; W0(1), {l2})");
        }
    }
}

#[test]
fn vacuum_module_acts_as_the_identity() {
    let reg = common::registry();
    let n = &reg.get("M0(0)").unwrap().zhu;
    for l2 in MODULES {
        for l3 in MODULES {
            let ub = fusion_upper_bound(n, &reg.get(l3).unwrap().params, &reg.get(l2).unwrap().params).unwrap();
            assert_eq!(ub.bound, usize::from(l2 == l3), "N({l3}; M0(0), {l2})");
        }
    }
}

#[test]
fn symbolic_matrices_specialise_to_the_numeric_ones() {
    let reg = common::registry();
    for name in MODULES {
        let m = &reg.get(name).unwrap().zhu;
        for (l2, l3) in [("Ma", "Wa"), ("W0(1)", "W0(2)"), ("M0(2)", "Ma")] {
            let (p2, p3) = (&reg.get(l2).unwrap().params, &reg.get(l3).unwrap().params);
            let symbolic = m.symbolic_relations().unwrap().evaluate(p3, p2);
            let numeric = m.relations_in(EvalContext::numeric(&m.params.h, p3, p2)).unwrap();
            assert_eq!(symbolic, numeric, "{name} with ({l2}, {l3})");
        }
    }
}

#[test]
fn reduction_is_linear() {
    let reg = common::registry();
    assert_eq!(criteria::reduce_linearity(&reg, 10), Ok(10 * MODULES.len()));
}

#[test]
fn truncation_is_enforced() {
    let params = ModuleParams::new(common::q("1/2"), common::q("0"));
    let ctx = EvalContext::numeric(&params.h, &params, &params);
    let mut red = Reducer::new(ModuleCalc::numeric(&params), ctx.clone(), 1).unwrap();
    let v = red.calc_mut().canonicalize(&parse_vector("J(-1)^2").unwrap());
    assert_eq!(red.reduce(&v), Err(ZhuError::TruncationExceeded { index: 2, d: 1 }));
    assert!(matches!(Reducer::new(ModuleCalc::numeric(&params), ctx, 0), Err(ZhuError::ZeroTruncation)));
}

#[test]
fn without_relations_the_bound_is_the_truncation() {
    let reg = common::registry();
    let module = ZhuModule::new("bare", reg.get("Wa").unwrap().params.clone(), None, 3, Vec::new());
    let p = &reg.get("Ma").unwrap().params;
    let ub = fusion_upper_bound(&module, p, p).unwrap();
    assert_eq!((ub.bound, ub.rank), (3, 0));
}
