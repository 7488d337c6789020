//! Shared oracles and generators for the integration tests.

#![allow(dead_code)]

pub mod criteria;

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbifold_fusion::config::{GroupConfig, Registry};
use orbifold_fusion::{Mode, ModuleCalc, PbwVector, QuadScalar, Rational, Ring};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn registry() -> Registry {
    Registry::load(&data_dir().join("registry.toml")).expect("shipped registry loads")
}

pub fn group_config() -> GroupConfig {
    GroupConfig::load(&data_dir().join("group.toml")).expect("shipped group data loads")
}

pub fn q(s: &str) -> QuadScalar {
    s.parse().unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let num: i64 = rng.gen_range(-40..=40);
    let den: i64 = rng.gen_range(1..=12);
    Rational::new(num.into(), den.into())
}

pub fn random_scalar<R: Rng>(rng: &mut R) -> QuadScalar {
    QuadScalar::new(random_rational(rng), random_rational(rng))
}

/// `[a, b]` straight from the commutation relations at `c = 6/5`, as mode
/// words with rational coefficients. The normally ordered `L L` tail of
/// `[J(m), J(n)]` is summed over `|k| ≤ window`; summands beyond the operand
/// degree vanish on their own when applied.
pub fn bracket_oracle(a: Mode, b: Mode, window: i64) -> Vec<(QuadScalar, Vec<Mode>)> {
    use orbifold_fusion::Gen::{J, L};
    let (m, n) = (a.index, b.index);
    let int = QuadScalar::from_int;
    let c = QuadScalar::from_frac(6, 5);
    let mut out = Vec::new();
    match (a.gen, b.gen) {
        (L, L) => {
            out.push((int(m - n), vec![Mode::l(m + n)]));
            if m + n == 0 {
                out.push((&QuadScalar::from_frac(m * m * m - m, 12) * &c, vec![]));
            }
        }
        (L, J) => out.push((int(2 * m - n), vec![Mode::j(m + n)])),
        (J, L) => out.push((int(-(2 * n - m)), vec![Mode::j(m + n)])),
        (J, J) => {
            let s = m + n;
            out.push((int((m - n) * (22 * (s + 2) * (s + 3) + 35 * (m + 2) * (n + 2))), vec![Mode::l(s)]));
            for k in -window..=window {
                let word = if k <= -2 { vec![Mode::l(k), Mode::l(s - k)] } else { vec![Mode::l(s - k), Mode::l(k)] };
                out.push((int(-120 * (m - n)), word));
            }
            if s == 0 {
                out.push((QuadScalar::from_frac(-7 * m * (m * m - 1) * (m * m - 4), 10), vec![]));
            }
        }
    }
    out
}

/// `[a, b] v − (a b − b a) v` through the engine; zero when consistent.
pub fn bracket_defect<R: Ring>(calc: &mut ModuleCalc<R>, a: Mode, b: Mode, v: &PbwVector<R>) -> PbwVector<R> {
    let bv = calc.apply_mode(b, v);
    let ab = calc.apply_mode(a, &bv);
    let av = calc.apply_mode(a, v);
    let ba = calc.apply_mode(b, &av);
    let mut rhs = PbwVector::default();
    for (c, word) in bracket_oracle(a, b, 12) {
        let w = calc.apply_word(&word, v);
        rhs.add_scaled(&w, &R::from_scalar(&c));
    }
    ab.sub(&ba).sub(&rhs)
}

/// All modes with `|index| ≤ bound`.
pub fn modes_up_to(bound: i64) -> Vec<Mode> {
    (-bound..=bound).flat_map(|i| [Mode::l(i), Mode::j(i)]).collect()
}

/// Expected fusion rule `N(l3; l1, l2)` over the eight untwisted modules.
pub fn expected_multiplicity(l1: &str, l2: &str, l3: &str) -> usize {
    #[derive(Clone, Copy, PartialEq)]
    enum K {
        M(u8),
        W(u8),
        Ma,
        Wa,
    }
    fn kind(name: &str) -> K {
        match name {
            "Ma" => K::Ma,
            "Wa" => K::Wa,
            _ => {
                let i = name.as_bytes()[3] - b'0';
                if name.starts_with('M') {
                    K::M(i)
                } else {
                    K::W(i)
                }
            }
        }
    }
    let mut product: BTreeMap<u8, usize> = BTreeMap::new();
    let code = |k: K| match k {
        K::M(i) => i,
        K::W(i) => 3 + i,
        K::Ma => 6,
        K::Wa => 7,
    };
    let mut add = |k: K, n: usize| *product.entry(code(k)).or_default() += n;
    let (a, b) = (kind(l1), kind(l2));
    let all_m = [K::M(0), K::M(1), K::M(2)];
    let all_w = [K::W(0), K::W(1), K::W(2)];
    match (a, b) {
        (K::M(i), K::M(j)) => add(K::M((i + j) % 3), 1),
        (K::M(i), K::W(j)) | (K::W(j), K::M(i)) => add(K::W((i + j) % 3), 1),
        (K::W(i), K::W(j)) => {
            add(K::M((i + j) % 3), 1);
            add(K::W((i + j) % 3), 1);
        }
        (K::M(_), K::Ma) | (K::Ma, K::M(_)) => add(K::Ma, 1),
        (K::M(_), K::Wa) | (K::Wa, K::M(_)) => add(K::Wa, 1),
        (K::W(_), K::Ma) | (K::Ma, K::W(_)) => add(K::Wa, 1),
        (K::W(_), K::Wa) | (K::Wa, K::W(_)) => {
            add(K::Ma, 1);
            add(K::Wa, 1);
        }
        (K::Ma, K::Ma) => {
            all_m.iter().for_each(|&k| add(k, 1));
            add(K::Ma, 2);
        }
        (K::Ma, K::Wa) | (K::Wa, K::Ma) => {
            all_w.iter().for_each(|&k| add(k, 1));
            add(K::Wa, 2);
        }
        (K::Wa, K::Wa) => {
            all_m.iter().chain(&all_w).for_each(|&k| add(k, 1));
            add(K::Ma, 2);
            add(K::Wa, 2);
        }
    }
    product.get(&code(kind(l3))).copied().unwrap_or(0)
}

/// Field axioms for one triple of scalars.
pub fn field_axioms_hold(a: &QuadScalar, b: &QuadScalar, c: &QuadScalar) -> Result<(), String> {
    let zero = QuadScalar::zero();
    let one = QuadScalar::one();
    let checks: Vec<(&str, bool)> = vec![
        ("add commutative", a + b == b + a),
        ("mul commutative", a * b == b * a),
        ("add associative", &(a + b) + c == a + &(b + c)),
        ("mul associative", &(a * b) * c == a * &(b * c)),
        ("distributive", a * &(b + c) == &(a * b) + &(a * c)),
        ("additive identity", a + &zero == *a),
        ("multiplicative identity", a * &one == *a),
        ("additive inverse", (a + &-a).is_zero()),
        ("subtraction", &(a - b) + b == *a),
        ("conjugation multiplicative", (a * b).conj() == &a.conj() * &b.conj()),
        ("norm", a * &a.conj() == QuadScalar::from_rational(a.norm())),
        ("multiplicative inverse", a.is_zero() || (a * &a.inv().unwrap()).is_one()),
        ("division", b.is_zero() || &a.checked_div(b).unwrap() * b == *a),
    ];
    match checks.into_iter().find(|(_, ok)| !ok) {
        Some((name, _)) => Err(format!("{name} fails at a = {a}, b = {b}, c = {c}")),
        None => Ok(()),
    }
}
