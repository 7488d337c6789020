//! Finite-group side of the orbifold: stable sets of modules, the algebra
//! `𝒜_α(G, 𝒮)`, its simple modules, the `𝒜`-module structure on spaces of
//! intertwining operators, and the multiplicity lower bounds they give.
//!
//! Conventions. A stable set carries a right action `L ↦ L·a`. The algebra
//! has basis `a ⊗ e(L)` with
//!
//! ```text
//! (a ⊗ e(L)) (b ⊗ e(M)) = α_M(a, b) ab ⊗ e(M)   if L·b = M, else 0.
//! ```
//!
//! On the module induced from a character `λ` of the stabilizer of `L₀`,
//! with basis `u_M` over the orbit and chosen `r_M` satisfying `M·r_M = L₀`,
//! the element `a ⊗ e(M)` sends `u_M` to `λ(r_{M'}⁻¹ a r_M) u_{M'}` where
//! `M' = M·a⁻¹`, and kills every other `u_N`.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalars::{QuadScalar, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group table: {0}")]
    InvalidGroup(String),
    #[error("stable set {set}: {message}")]
    InvalidAction { set: String, message: String },
    #[error("stable set {set}: cocycle identity fails at L = {label}, (a, b, c) = ({a}, {b}, {c})")]
    CocycleIdentity { set: String, label: String, a: String, b: String, c: String },
    #[error("algebra of {set} is not associative at basis triple ({x}, {y}, {z})")]
    NotAssociative { set: String, x: usize, y: usize, z: usize },
    #[error("stable set {set}: {message}")]
    UnsupportedCocycle { set: String, message: String },
    #[error("stabilizer of {label} in {set} is not abelian of exponent dividing 6")]
    UnsupportedStabilizer { set: String, label: String },
    #[error("no scalar given for {element} acting on the intertwiners of type {triple}")]
    MissingIsoScalar { element: String, triple: String },
    #[error("scalars for the intertwiners of type {triple} are not multiplicative")]
    IsoScalarNotCharacter { triple: String },
    #[error("fusion dimensions are not invariant under the group at {triple}")]
    FusionNotInvariant { triple: String },
    #[error("fusion dimension {dim} at {triple}: only 0 and 1 are supported")]
    UnsupportedMultiplicity { triple: String, dim: usize },
    #[error("character is not a homomorphism on the stabilizer of {label}")]
    NotACharacter { label: String },
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("inner product {0} is not a nonnegative integer")]
    NotAMultiplicity(String),
    #[error("simple module and intertwiner space live over different stable sets")]
    SetMismatch,
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupError::InvalidGroup("empty group".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::InvalidGroup("table must be n x n with entries < n".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::InvalidGroup(format!(
                            "not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| GroupError::InvalidGroup("no identity".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| GroupError::InvalidGroup(format!("{} has no inverse", names[a])))?;
            inverse.push(inv);
        }
        Ok(FiniteGroup { names, table, identity, inverse })
    }

    /// `ℤ/n` with elements named `e, g, g^2, …`.
    pub fn cyclic(n: usize, generator: &str) -> Self {
        let names = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => generator.to_string(),
                _ => format!("{generator}^{i}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(names, table).expect("cyclic group table is valid")
    }

    /// The symmetric group on `n ≤ 5` letters; permutations are composed
    /// as functions, `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Self {
        assert!((1..=5).contains(&n), "symmetric group supported for n <= 5");
        let mut perms: Vec<Vec<usize>> = vec![vec![0]];
        for k in 1..n {
            let mut next = Vec::new();
            for p in &perms {
                for pos in 0..=k {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    next.push(q);
                }
            }
            perms = next;
        }
        perms.sort();
        let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|s| perms.iter().map(|t| index[&t.iter().map(|&i| s[i]).collect::<Vec<_>>()]).collect())
            .collect();
        let names = perms.iter().map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<String>()).collect();
        FiniteGroup::from_table(names, table).expect("permutation table is valid")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_abelian_on(&self, elems: &[usize]) -> bool {
        elems.iter().all(|&a| elems.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// Cocycle values `α_L(a, b)` indexed `[label][a][b]`.
pub type Cocycle = Vec<Vec<Vec<QuadScalar>>>;

/// A finite set of module labels with a right action of the group.
#[derive(Clone, Debug, PartialEq)]
pub struct StableSet {
    name: String,
    labels: Vec<String>,
    action: Vec<Vec<usize>>,
    cocycle: Option<Cocycle>,
    coboundary: Option<Vec<Vec<QuadScalar>>>,
}

impl StableSet {
    /// `action[L][a]` is the index of `L·a`. The cocycle is trivial.
    pub fn new(
        group: &FiniteGroup,
        name: impl Into<String>,
        labels: Vec<String>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        let set = StableSet { name: name.into(), labels, action, cocycle: None, coboundary: None };
        set.validate_action(group)?;
        Ok(set)
    }

    /// Attach a cocycle, optionally with `μ` such that
    /// `α_M(a, b) = μ_{M·b⁻¹}(a) μ_M(b) / μ_M(ab)`.
    pub fn with_cocycle(
        mut self,
        group: &FiniteGroup,
        cocycle: Cocycle,
        coboundary: Option<Vec<Vec<QuadScalar>>>,
    ) -> Result<Self, GroupError> {
        let n = group.order();
        let shape_ok = |t: &Vec<Vec<QuadScalar>>| t.len() == n && t.iter().all(|r| r.len() == n);
        if cocycle.len() != self.labels.len() || !cocycle.iter().all(shape_ok) {
            return Err(self.invalid("cocycle table has the wrong shape"));
        }
        if cocycle.iter().flatten().flatten().any(QuadScalar::is_zero) {
            return Err(self.invalid("cocycle values must be nonzero"));
        }
        if let Some(mu) = &coboundary {
            if mu.len() != self.labels.len() || mu.iter().any(|r| r.len() != n || r.iter().any(QuadScalar::is_zero)) {
                return Err(self.invalid("coboundary table has the wrong shape or a zero entry"));
            }
        }
        self.cocycle = Some(cocycle);
        self.coboundary = coboundary;
        self.check_cocycle_identity(group)?;
        if self.coboundary.is_some() && !self.coboundary_matches(group) {
            return Err(GroupError::UnsupportedCocycle {
                set: self.name.clone(),
                message: "the supplied coboundary does not reproduce the cocycle".into(),
            });
        }
        Ok(self)
    }

    fn invalid(&self, message: &str) -> GroupError {
        GroupError::InvalidAction { set: self.name.clone(), message: message.into() }
    }

    fn validate_action(&self, group: &FiniteGroup) -> Result<(), GroupError> {
        let n = group.order();
        let m = self.labels.len();
        if self.action.len() != m || self.action.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= m)) {
            return Err(self.invalid("action table must be labels x group with entries naming labels"));
        }
        for l in 0..m {
            if self.action[l][group.identity()] != l {
                return Err(self.invalid(&format!("identity moves {}", self.labels[l])));
            }
            for a in 0..n {
                for b in 0..n {
                    if self.action[self.action[l][a]][b] != self.action[l][group.mul(a, b)] {
                        return Err(self.invalid(&format!(
                            "not a right action at ({}, {}, {})",
                            self.labels[l],
                            group.name(a),
                            group.name(b)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_cocycle_identity(&self, group: &FiniteGroup) -> Result<(), GroupError> {
        let n = group.order();
        for l in 0..self.labels.len() {
            for a in 0..n {
                let m = self.act(l, group.inv(a));
                for b in 0..n {
                    for c in 0..n {
                        let lhs = &self.alpha(l, c, group.mul(b, a)) * &self.alpha(l, b, a);
                        let rhs = &self.alpha(m, c, b) * &self.alpha(l, group.mul(c, b), a);
                        if lhs != rhs {
                            return Err(GroupError::CocycleIdentity {
                                set: self.name.clone(),
                                label: self.labels[l].clone(),
                                a: group.name(a).into(),
                                b: group.name(b).into(),
                                c: group.name(c).into(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn coboundary_matches(&self, group: &FiniteGroup) -> bool {
        let n = group.order();
        (0..self.labels.len()).all(|m| {
            (0..n).all(|a| {
                (0..n).all(|b| {
                    let l = self.act(m, group.inv(b));
                    let num = &self.mu(l, a) * &self.mu(m, b);
                    num.checked_div(&self.mu(m, group.mul(a, b))).ok() == Some(self.alpha(m, a, b))
                })
            })
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label_index(&self, label: &str) -> Result<usize, GroupError> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| GroupError::UnknownLabel(label.into()))
    }

    /// `L·a`.
    pub fn act(&self, label: usize, a: usize) -> usize {
        self.action[label][a]
    }

    /// `α_L(a, b)`, one when no cocycle is attached.
    pub fn alpha(&self, label: usize, a: usize, b: usize) -> QuadScalar {
        self.cocycle.as_ref().map_or_else(QuadScalar::one, |c| c[label][a][b].clone())
    }

    fn mu(&self, label: usize, a: usize) -> QuadScalar {
        self.coboundary.as_ref().map_or_else(QuadScalar::one, |m| m[label][a].clone())
    }

    pub fn has_trivial_cocycle(&self) -> bool {
        self.cocycle.as_ref().is_none_or(|c| c.iter().flatten().flatten().all(QuadScalar::is_one))
    }

    /// Orbits in order of their smallest label.
    pub fn orbits(&self, group: &FiniteGroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for l in 0..self.len() {
            if seen[l] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..group.order()).map(|a| self.act(l, a)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &m in &orbit {
                seen[m] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, group: &FiniteGroup, label: usize) -> Vec<usize> {
        (0..group.order()).filter(|&a| self.act(label, a) == label).collect()
    }

    /// Some `r` with `from·r = to`.
    fn transporter(&self, group: &FiniteGroup, from: usize, to: usize) -> Option<usize> {
        (0..group.order()).find(|&a| self.act(from, a) == to)
    }
}

/// `𝒜_α(G, 𝒮)` with its structure constants.
#[derive(Clone, Debug)]
pub struct GroupSetAlgebra {
    group: FiniteGroup,
    set: StableSet,
}

/// Basis sizes up to which associativity is checked on every triple.
pub const EXHAUSTIVE_CHECK_LIMIT: usize = 64;

impl GroupSetAlgebra {
    /// Build the algebra and check the unit and, for small bases,
    /// associativity on every triple of basis elements.
    pub fn build(group: &FiniteGroup, set: &StableSet) -> Result<Self, GroupError> {
        let alg = GroupSetAlgebra { group: group.clone(), set: set.clone() };
        if alg.dim() <= EXHAUSTIVE_CHECK_LIMIT {
            alg.check_associative()?;
            assert!(alg.check_identity(), "Σ 1 ⊗ e(L) is a two-sided unit by construction");
        }
        Ok(alg)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn set(&self) -> &StableSet {
        &self.set
    }

    pub fn dim(&self) -> usize {
        self.group.order() * self.set.len()
    }

    /// Index of `a ⊗ e(L)`.
    pub fn basis_index(&self, a: usize, label: usize) -> usize {
        a * self.set.len() + label
    }

    pub fn basis_element(&self, i: usize) -> (usize, usize) {
        (i / self.set.len(), i % self.set.len())
    }

    /// Product of two basis elements.
    pub fn mul_basis(&self, x: usize, y: usize) -> Option<(QuadScalar, usize)> {
        let (a, l) = self.basis_element(x);
        let (b, m) = self.basis_element(y);
        if self.set.act(l, b) != m {
            return None;
        }
        Some((self.set.alpha(m, a, b), self.basis_index(self.group.mul(a, b), m)))
    }

    /// Product of two elements given by coordinates.
    pub fn mul(&self, x: &BTreeMap<usize, QuadScalar>, y: &BTreeMap<usize, QuadScalar>) -> BTreeMap<usize, QuadScalar> {
        let mut out: BTreeMap<usize, QuadScalar> = BTreeMap::new();
        for (&i, ci) in x {
            for (&j, cj) in y {
                if let Some((c, k)) = self.mul_basis(i, j) {
                    let v = &(ci * cj) * &c;
                    *out.entry(k).or_insert_with(QuadScalar::zero) += &v;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.dim();
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul_basis(x, y);
                for z in 0..n {
                    let left = xy.as_ref().and_then(|(c, k)| self.mul_basis(*k, z).map(|(d, m)| (c * &d, m)));
                    let right = self.mul_basis(y, z).and_then(|(c, k)| self.mul_basis(x, k).map(|(d, m)| (&c * &d, m)));
                    if left != right {
                        return Err(GroupError::NotAssociative { set: self.set.name.clone(), x, y, z });
                    }
                }
            }
        }
        Ok(())
    }

    /// `Σ_{M ∈ labels} 1 ⊗ e(M)`.
    pub fn idempotent(&self, labels: &[usize]) -> BTreeMap<usize, QuadScalar> {
        labels.iter().map(|&m| (self.basis_index(self.group.identity(), m), QuadScalar::one())).collect()
    }

    fn check_identity(&self) -> bool {
        let one = self.idempotent(&(0..self.set.len()).collect::<Vec<_>>());
        (0..self.dim()).all(|x| {
            let bx: BTreeMap<usize, QuadScalar> = [(x, QuadScalar::one())].into();
            self.mul(&one, &bx) == bx && self.mul(&bx, &one) == bx
        })
    }

    /// Each orbit idempotent is central and idempotent, and they sum to one.
    pub fn orbit_ideals_split(&self) -> bool {
        let orbits = self.set.orbits(&self.group);
        orbits.iter().all(|o| {
            let e = self.idempotent(o);
            self.mul(&e, &e) == e
                && (0..self.dim()).all(|x| {
                    let bx: BTreeMap<usize, QuadScalar> = [(x, QuadScalar::one())].into();
                    self.mul(&e, &bx) == self.mul(&bx, &e)
                })
        })
    }

    /// Dimension of the two-sided ideal cut out by an orbit.
    pub fn orbit_ideal_dim(&self, orbit: &[usize]) -> usize {
        self.group.order() * orbit.len()
    }
}

/// A simple module: induced from a character of an orbit stabilizer.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleModuleDescriptor {
    pub set: String,
    /// Orbit representative `L₀`.
    pub representative: usize,
    pub orbit: Vec<usize>,
    /// `r_M` with `M·r_M = L₀`, aligned with `orbit`.
    pub transversal: Vec<usize>,
    pub stabilizer: Vec<usize>,
    /// Character values indexed by group element; `None` off the stabilizer.
    pub character: Vec<Option<QuadScalar>>,
}

impl SimpleModuleDescriptor {
    pub fn dim(&self) -> usize {
        self.orbit.len()
    }

    pub fn lambda(&self, g: usize) -> &QuadScalar {
        self.character[g].as_ref().expect("element of the stabilizer")
    }

    fn position(&self, label: usize) -> Option<usize> {
        self.orbit.iter().position(|&m| m == label)
    }

    /// Matrix of `a ⊗ e(M)` on the basis `u_N`, `N` in orbit order.
    pub fn matrix(&self, alg: &GroupSetAlgebra, a: usize, m: usize) -> Matrix {
        let g = alg.group();
        let mut out = Matrix::zeros(self.dim(), self.dim());
        if let Some(col) = self.position(m) {
            let target = alg.set().act(m, g.inv(a));
            let row = self.position(target).expect("orbits are stable");
            let s = g.mul(g.mul(g.inv(self.transversal[row]), a), self.transversal[col]);
            let twist = alg.set().mu(m, a);
            out[(row, col)] = self.lambda(s) * &twist;
        }
        out
    }

    /// Character `a ⊗ e(M) ↦ tr`.
    pub fn trace(&self, alg: &GroupSetAlgebra, a: usize, m: usize) -> QuadScalar {
        self.matrix(alg, a, m).trace()
    }
}

/// The sixth roots of unity in ℚ(√−3).
fn roots_of_unity() -> Vec<QuadScalar> {
    let xi = QuadScalar::xi();
    let mut out = Vec::new();
    for s in [QuadScalar::one(), -QuadScalar::one()] {
        for k in 0..3 {
            out.push(&s * &xi.pow(k));
        }
    }
    out
}

/// All characters of an abelian subgroup with values in `μ₆`, by search over
/// assignments on a generating set.
fn subgroup_characters(group: &FiniteGroup, elems: &[usize]) -> Vec<Vec<Option<QuadScalar>>> {
    let mut gens: Vec<usize> = Vec::new();
    let mut span = vec![group.identity()];
    for &a in elems {
        if !span.contains(&a) {
            gens.push(a);
            span = close(group, &[span, vec![a]].concat());
        }
    }
    let roots = roots_of_unity();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        if let Some(chi) = extend_character(group, elems, &gens, &choice.iter().map(|&i| roots[i].clone()).collect::<Vec<_>>()) {
            if !out.contains(&chi) {
                out.push(chi);
            }
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < roots.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn close(group: &FiniteGroup, elems: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = elems.to_vec();
    let mut i = 0;
    while i < out.len() {
        for j in 0..out.len() {
            for p in [group.mul(out[i], out[j]), group.mul(out[j], out[i])] {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

fn extend_character(
    group: &FiniteGroup,
    elems: &[usize],
    gens: &[usize],
    values: &[QuadScalar],
) -> Option<Vec<Option<QuadScalar>>> {
    let mut chi: Vec<Option<QuadScalar>> = vec![None; group.order()];
    chi[group.identity()] = Some(QuadScalar::one());
    let mut frontier = vec![group.identity()];
    while let Some(x) = frontier.pop() {
        for (g, v) in gens.iter().zip(values) {
            let y = group.mul(x, *g);
            let val = chi[x].as_ref().expect("assigned") * v;
            match &chi[y] {
                Some(existing) if *existing != val => return None,
                Some(_) => {}
                None => {
                    chi[y] = Some(val);
                    frontier.push(y);
                }
            }
        }
    }
    let ok = elems.iter().all(|&a| {
        elems.iter().all(|&b| {
            chi[group.mul(a, b)].as_ref().zip(chi[a].as_ref().zip(chi[b].as_ref())).is_some_and(|(ab, (x, y))| *ab == x * y)
        })
    });
    ok.then_some(chi)
}

/// Complete list of simple modules, orbit by orbit.
pub fn simple_modules(alg: &GroupSetAlgebra) -> Result<Vec<SimpleModuleDescriptor>, GroupError> {
    let g = alg.group();
    let set = alg.set();
    if !set.has_trivial_cocycle() && set.coboundary.is_none() {
        return Err(GroupError::UnsupportedCocycle {
            set: set.name.clone(),
            message: "a nontrivial cocycle needs a supplied coboundary".into(),
        });
    }
    let mut out = Vec::new();
    for orbit in set.orbits(g) {
        let rep = orbit[0];
        let stab = set.stabilizer(g, rep);
        let unsupported = || GroupError::UnsupportedStabilizer { set: set.name.clone(), label: set.labels[rep].clone() };
        if !g.is_abelian_on(&stab) || stab.iter().any(|&a| 6 % g.element_order(a) != 0) {
            return Err(unsupported());
        }
        let chars = subgroup_characters(g, &stab);
        if chars.len() != stab.len() {
            return Err(unsupported());
        }
        let transversal: Vec<usize> = orbit.iter().map(|&m| set.transporter(g, m, rep).expect("same orbit")).collect();
        let count = chars.len();
        for chi in chars {
            out.push(SimpleModuleDescriptor {
                set: set.name.clone(),
                representative: rep,
                orbit: orbit.clone(),
                transversal: transversal.clone(),
                stabilizer: stab.clone(),
                character: chi,
            });
        }
        // Wedderburn count for this orbit ideal: |G_L| simples of dimension |𝒪|
        debug_assert_eq!(count * orbit.len() * orbit.len(), alg.orbit_ideal_dim(&orbit));
    }
    Ok(out)
}

/// The simple module over `alg` through `label` with the given character
/// values on the stabilizer of `label` (in group order of the stabilizer).
pub fn simple_module_for(
    alg: &GroupSetAlgebra,
    label: usize,
    values: &[QuadScalar],
) -> Result<SimpleModuleDescriptor, GroupError> {
    let g = alg.group();
    let set = alg.set();
    let orbit = set.orbits(g).into_iter().find(|o| o.contains(&label)).expect("label lies in an orbit");
    let stab = set.stabilizer(g, label);
    let bad = || GroupError::NotACharacter { label: set.labels[label].clone() };
    if values.len() != stab.len() {
        return Err(bad());
    }
    let mut chi = vec![None; g.order()];
    for (&a, v) in stab.iter().zip(values) {
        chi[a] = Some(v.clone());
    }
    for &a in &stab {
        for &b in &stab {
            let ab = chi[g.mul(a, b)].clone().expect("stabilizer is a subgroup");
            if ab != chi[a].as_ref().expect("set") * chi[b].as_ref().expect("set") {
                return Err(bad());
            }
        }
    }
    let mut orbit = orbit;
    orbit.retain(|&m| m != label);
    orbit.insert(0, label);
    let transversal = orbit.iter().map(|&m| set.transporter(g, m, label).expect("same orbit")).collect();
    Ok(SimpleModuleDescriptor {
        set: set.name.clone(),
        representative: label,
        orbit,
        transversal,
        stabilizer: stab,
        character: chi,
    })
}

/// Scalars by which stabilizing elements act on one-dimensional spaces of
/// intertwining operators, keyed by `(label₁, label₂, label₃)` and element.
pub type IsoScalars = HashMap<(String, String, String), HashMap<usize, QuadScalar>>;

/// Dimensions `N(L³; L¹, L²)` at the level of the larger algebra, keyed by
/// `(L¹, L², L³)` labels; missing keys are zero.
pub type FusionDims = HashMap<(String, String, String), usize>;

/// `ℐ_{W¹,W²}` as a module over `𝒜₃ = 𝒜(G, 𝒮₃)`.
#[derive(Clone, Debug)]
pub struct IntertwinerModule {
    set3: String,
    /// Basis triples as label indices into `𝒮₁, 𝒮₂, 𝒮₃`.
    pub triples: Vec<(usize, usize, usize)>,
    /// Matrix of `a ⊗ e(M)`, indexed `[a][M]`.
    matrices: Vec<Vec<Matrix>>,
}

impl IntertwinerModule {
    pub fn dim(&self) -> usize {
        self.triples.len()
    }

    pub fn matrix(&self, a: usize, m: usize) -> &Matrix {
        &self.matrices[a][m]
    }
}

fn triple_key(s1: &StableSet, s2: &StableSet, s3: &StableSet, t: (usize, usize, usize)) -> (String, String, String) {
    (s1.labels[t.0].clone(), s2.labels[t.1].clone(), s3.labels[t.2].clone())
}

fn triple_name(k: &(String, String, String)) -> String {
    format!("({}; {}, {})", k.2, k.0, k.1)
}

/// Build `ℐ_{W¹,W²}`: basis triples `(L¹, L², L³)` with `L¹` in the orbit of
/// `W¹`, `L²` in the orbit of `W²` and nonzero fusion dimension.
pub fn intertwiner_module(
    alg1: &GroupSetAlgebra,
    alg2: &GroupSetAlgebra,
    alg3: &GroupSetAlgebra,
    fusion: &FusionDims,
    iso: &IsoScalars,
    w1: &SimpleModuleDescriptor,
    w2: &SimpleModuleDescriptor,
) -> Result<IntertwinerModule, GroupError> {
    let g = alg3.group();
    let (s1, s2, s3) = (alg1.set(), alg2.set(), alg3.set());
    for s in [s1, s2, s3] {
        if !s.has_trivial_cocycle() {
            return Err(GroupError::UnsupportedCocycle {
                set: s.name.clone(),
                message: "intertwiner modules are built for trivial cocycles only".into(),
            });
        }
    }
    if w1.set != s1.name || w2.set != s2.name {
        return Err(GroupError::SetMismatch);
    }
    let dim_of = |t: (usize, usize, usize)| fusion.get(&triple_key(s1, s2, s3, t)).copied().unwrap_or(0);
    let mut triples = Vec::new();
    for &l1 in &w1.orbit {
        for &l2 in &w2.orbit {
            for l3 in 0..s3.len() {
                let t = (l1, l2, l3);
                match dim_of(t) {
                    0 => {}
                    1 => triples.push(t),
                    dim => {
                        return Err(GroupError::UnsupportedMultiplicity {
                            triple: triple_name(&triple_key(s1, s2, s3, t)),
                            dim,
                        })
                    }
                }
            }
        }
    }
    let act = |t: (usize, usize, usize), a: usize| (s1.act(t.0, a), s2.act(t.1, a), s3.act(t.2, a));
    for &t in &triples {
        for a in 0..g.order() {
            if dim_of(act(t, a)) != 1 {
                return Err(GroupError::FusionNotInvariant { triple: triple_name(&triple_key(s1, s2, s3, t)) });
            }
        }
    }
    let index: HashMap<(usize, usize, usize), usize> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    // orbit representative t₀ and g_t with t·g_t = t₀ for every basis triple
    let mut rep = vec![usize::MAX; triples.len()];
    let mut to_rep = vec![g.identity(); triples.len()];
    for i in 0..triples.len() {
        if rep[i] != usize::MAX {
            continue;
        }
        for a in 0..g.order() {
            let j = index[&act(triples[i], a)];
            if rep[j] == usize::MAX {
                rep[j] = i;
                to_rep[j] = g.inv(a);
            }
        }
    }
    let iso_value = |t0: usize, s: usize| -> Result<QuadScalar, GroupError> {
        if s == g.identity() {
            return Ok(QuadScalar::one());
        }
        let key = triple_key(s1, s2, s3, triples[t0]);
        iso.get(&key).and_then(|m| m.get(&s)).cloned().ok_or_else(|| GroupError::MissingIsoScalar {
            element: g.name(s).into(),
            triple: triple_name(&key),
        })
    };
    for (i, &r) in rep.iter().enumerate() {
        if r != i {
            continue;
        }
        let stab: Vec<usize> = (0..g.order()).filter(|&a| act(triples[i], a) == triples[i]).collect();
        for &a in &stab {
            for &b in &stab {
                let ab = iso_value(i, g.mul(a, b))?;
                if ab != &iso_value(i, a)? * &iso_value(i, b)? {
                    return Err(GroupError::IsoScalarNotCharacter {
                        triple: triple_name(&triple_key(s1, s2, s3, triples[i])),
                    });
                }
            }
        }
    }
    let factor = |w: &SimpleModuleDescriptor, set: &StableSet, l: usize, a: usize| -> QuadScalar {
        let target = set.act(l, g.inv(a));
        let col = w.position(l).expect("label in orbit");
        let row = w.position(target).expect("orbit is stable");
        w.lambda(g.mul(g.mul(g.inv(w.transversal[row]), a), w.transversal[col])).clone()
    };
    let n = triples.len();
    let mut matrices = Vec::with_capacity(g.order());
    for a in 0..g.order() {
        let mut per_label = vec![Matrix::zeros(n, n); s3.len()];
        for (col, &t) in triples.iter().enumerate() {
            let target = act(t, g.inv(a));
            let row = index[&target];
            let s = g.mul(g.mul(g.inv(to_rep[row]), a), to_rep[col]);
            let scalar = &(&iso_value(rep[col], s)? * &factor(w1, s1, t.0, a)) * &factor(w2, s2, t.1, a);
            per_label[t.2][(row, col)] = scalar;
        }
        matrices.push(per_label);
    }
    Ok(IntertwinerModule { set3: s3.name.clone(), triples, matrices })
}

fn as_multiplicity(x: &QuadScalar) -> Result<usize, GroupError> {
    let bad = || GroupError::NotAMultiplicity(x.to_string());
    if !x.is_rational() || !x.rational_part().is_integer() {
        return Err(bad());
    }
    usize::try_from(x.rational_part().to_integer()).map_err(|_| bad())
}

/// `dim Hom_{𝒜₃}(W³, ℐ)` from the trace of `h ⊗ e(L₀)` over the stabilizer
/// of the representative of `W³`.
pub fn lower_bound(module: &IntertwinerModule, target: &SimpleModuleDescriptor) -> Result<usize, GroupError> {
    if module.set3 != target.set {
        return Err(GroupError::SetMismatch);
    }
    let mut sum = QuadScalar::zero();
    for &h in &target.stabilizer {
        let tr = module.matrix(h, target.representative).trace();
        sum += &(&target.lambda(h).conj() * &tr);
    }
    let order = QuadScalar::from_int(target.stabilizer.len() as i64);
    as_multiplicity(&sum.checked_div(&order).expect("nonempty stabilizer"))
}

/// `⟨χ₃, χ₁χ₂⟩` for class functions given element by element.
pub fn group_tensor_bound(
    group: &FiniteGroup,
    chi1: &[QuadScalar],
    chi2: &[QuadScalar],
    chi3: &[QuadScalar],
) -> Result<usize, GroupError> {
    let mut sum = QuadScalar::zero();
    for g in 0..group.order() {
        sum += &(&(&chi3[g].conj() * &chi1[g]) * &chi2[g]);
    }
    let order = QuadScalar::from_rational(Rational::from_integer((group.order() as i64).into()));
    as_multiplicity(&sum.checked_div(&order).expect("nonempty group"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3() -> FiniteGroup {
        FiniteGroup::cyclic(3, "tau")
    }

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn free_orbit(g: &FiniteGroup) -> StableSet {
        // a·τ = c, b·τ = a, c·τ = b
        StableSet::new(g, "Ma", labels(&["a", "b", "c"]), vec![vec![0, 2, 1], vec![1, 0, 2], vec![2, 1, 0]]).unwrap()
    }

    fn singleton(g: &FiniteGroup) -> StableSet {
        StableSet::new(g, "W0", labels(&["W0"]), vec![vec![0, 0, 0]]).unwrap()
    }

    #[test]
    fn group_validation() {
        let bad = FiniteGroup::from_table(labels(&["e", "x"]), vec![vec![0, 1], vec![1, 1]]);
        assert!(bad.is_err());
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian_on(&(0..6).collect::<Vec<_>>()));
    }

    #[test]
    fn action_must_be_right_action() {
        let g = z3();
        let r = StableSet::new(&g, "bad", labels(&["a", "b", "c"]), vec![vec![0, 1, 1], vec![1, 2, 0], vec![2, 0, 2]]);
        assert!(matches!(r, Err(GroupError::InvalidAction { .. })));
    }

    #[test]
    fn simple_module_counts() {
        let g = z3();
        let a = GroupSetAlgebra::build(&g, &singleton(&g)).unwrap();
        let simples = simple_modules(&a).unwrap();
        assert_eq!(simples.len(), 3);
        assert!(simples.iter().all(|s| s.dim() == 1));

        let a = GroupSetAlgebra::build(&g, &free_orbit(&g)).unwrap();
        assert_eq!(a.dim(), 9);
        let simples = simple_modules(&a).unwrap();
        assert_eq!(simples.len(), 1);
        assert_eq!(simples[0].dim(), 3);

        let trivial = FiniteGroup::cyclic(1, "e");
        let s = StableSet::new(&trivial, "S", labels(&["x", "y"]), vec![vec![0], vec![1]]).unwrap();
        let a = GroupSetAlgebra::build(&trivial, &s).unwrap();
        assert_eq!(simple_modules(&a).unwrap().len(), 2);
    }

    #[test]
    fn induced_matrices_represent_the_algebra() {
        let g = z3();
        let a = GroupSetAlgebra::build(&g, &free_orbit(&g)).unwrap();
        assert!(a.orbit_ideals_split());
        let w = &simple_modules(&a).unwrap()[0];
        for x in 0..a.dim() {
            for y in 0..a.dim() {
                let (p, l) = a.basis_element(x);
                let (q, m) = a.basis_element(y);
                let prod = w.matrix(&a, p, l).mul(&w.matrix(&a, q, m));
                let expect = match a.mul_basis(x, y) {
                    Some((c, k)) => {
                        let (r, n) = a.basis_element(k);
                        w.matrix(&a, r, n).scaled(&c)
                    }
                    None => Matrix::zeros(3, 3),
                };
                assert_eq!(prod, expect);
            }
        }
    }

    #[test]
    fn tensor_bounds() {
        let s3 = FiniteGroup::symmetric(3);
        // permutations sorted: 123, 132, 213, 231, 312, 321
        let q = |v: &[i64]| v.iter().map(|&x| QuadScalar::from_int(x)).collect::<Vec<_>>();
        let triv = q(&[1, 1, 1, 1, 1, 1]);
        let sign = q(&[1, -1, -1, 1, 1, -1]);
        let std = q(&[2, 0, 0, -1, -1, 0]);
        assert_eq!(group_tensor_bound(&s3, &std, &std, &triv).unwrap(), 1);
        assert_eq!(group_tensor_bound(&s3, &std, &std, &sign).unwrap(), 1);
        assert_eq!(group_tensor_bound(&s3, &std, &std, &std).unwrap(), 1);
        assert_eq!(group_tensor_bound(&s3, &sign, &triv, &std).unwrap(), 0);
        let g = z3();
        let xi = QuadScalar::xi();
        let ch = |k: u32| (0..3).map(|i| xi.pow(k * i)).collect::<Vec<_>>();
        for (i, j, k) in [(1, 1, 2), (1, 2, 0), (2, 2, 1)] {
            assert_eq!(group_tensor_bound(&g, &ch(i), &ch(j), &ch(k)).unwrap(), 1);
            assert_eq!(group_tensor_bound(&g, &ch(i), &ch(j), &ch((k + 1) % 3)).unwrap(), 0);
        }
    }

    #[test]
    fn cocycle_with_coboundary() {
        let g = z3();
        let s = singleton(&g);
        // α(a, b) = μ(a)μ(b)/μ(ab) with μ(τ) = 2, μ(τ²) = 3
        let mu = [QuadScalar::one(), QuadScalar::from_int(2), QuadScalar::from_int(3)];
        let alpha: Cocycle = vec![(0..3)
            .map(|a| (0..3).map(|b| (&mu[a] * &mu[b]).checked_div(&mu[(a + b) % 3]).unwrap()).collect())
            .collect()];
        let s = s.with_cocycle(&g, alpha.clone(), Some(vec![mu.to_vec()])).unwrap();
        let alg = GroupSetAlgebra::build(&g, &s).unwrap();
        let simples = simple_modules(&alg).unwrap();
        assert_eq!(simples.len(), 3);
        for w in &simples {
            let t = w.matrix(&alg, 1, 0);
            let t2 = w.matrix(&alg, 2, 0);
            // ρ(τ)ρ(τ) = α(τ, τ) ρ(τ²)
            assert_eq!(t.mul(&t), t2.scaled(&alpha[0][1][1]));
        }
        let mut broken = alpha;
        broken[0][1][2] = QuadScalar::from_int(7);
        assert!(singleton(&g).with_cocycle(&g, broken, None).is_err());
    }
}
