//! Polynomials over ℚ(√−3).
//!
//! [`Poly`] is a sparse multivariate polynomial in at most four variables; it
//! carries symbolic module parameters (`h`, `k` of a module, or the
//! `h₂, k₂, h₃, k₃` of a Zhu evaluation) through the mode calculus.
//! [`UniPoly`] is a dense univariate polynomial used when solving for
//! parameters: gcds, square-free parts, resultants by evaluation and
//! interpolation, and root extraction in ℚ(√−3).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::linalg::Matrix;
use crate::scalars::{QuadScalar, Rational, Ring};

pub const MAX_VARS: usize = 4;

type Exps = [u8; MAX_VARS];

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exps, QuadScalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: QuadScalar) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert([0; MAX_VARS], c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS, "variable index out of range");
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Poly::monomial(e, QuadScalar::one())
    }

    pub fn monomial(exps: [u8; MAX_VARS], c: QuadScalar) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8; MAX_VARS], &QuadScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u8; MAX_VARS]) -> QuadScalar {
        self.terms.get(exps).cloned().unwrap_or_else(QuadScalar::zero)
    }

    /// The constant value if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<QuadScalar> {
        match self.terms.len() {
            0 => Some(QuadScalar::zero()),
            1 => self.terms.get(&[0; MAX_VARS]).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> usize {
        self.terms.keys().map(|e| e[var] as usize).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    pub fn eval(&self, point: &[QuadScalar]) -> QuadScalar {
        let mut acc = QuadScalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    t = &t * &point[i].pow(p as u32);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Substitute a value for one variable.
    pub fn substitute(&self, var: usize, value: &QuadScalar) -> Poly {
        let mut out = Poly::default();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            let p = e2[var];
            e2[var] = 0;
            let t = c * &value.pow(p as u32);
            out.add_term(e2, &t);
        }
        out
    }

    /// Coefficients with respect to `var`, lowest power first.
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly> {
        let mut out = vec![Poly::default(); self.degree_in(var) + 1];
        for (e, c) in &self.terms {
            let mut e2 = *e;
            let p = e2[var] as usize;
            e2[var] = 0;
            out[p].add_term(e2, c);
        }
        out
    }

    /// Reinterpret as a univariate polynomial in `var`; `None` if any other
    /// variable occurs.
    pub fn to_uni(&self, var: usize) -> Option<UniPoly> {
        let mut coeffs = vec![QuadScalar::zero(); self.degree_in(var) + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &p)| i != var && p > 0) {
                return None;
            }
            coeffs[e[var] as usize] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    fn add_term(&mut self, e: Exps, c: &QuadScalar) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&e) {
            Some(x) => {
                *x += c;
                x.is_zero()
            }
            None => {
                self.terms.insert(e, c.clone());
                false
            }
        };
        if remove {
            self.terms.remove(&e);
        }
    }

    /// Render with the given variable names.
    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        // highest degree first reads more naturally
        let mut keys: Vec<&Exps> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().map(|&x| x as u32).sum();
            let db: u32 = b.iter().map(|&x| x as u32).sum();
            db.cmp(&da).then(b.cmp(a))
        });
        for e in keys {
            let c = &self.terms[e];
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { names[i].to_string() } else { format!("{}^{}", names[i], p) })
                .collect();
            let cs = format!("({c})");
            parts.push(if mono.is_empty() { cs } else { format!("{cs}*{}", mono.join("*")) });
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&["x0", "x1", "x2", "x3"]))
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn one() -> Self {
        Poly::constant(QuadScalar::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
    fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, &-c);
        }
        out
    }
    fn mul(&self, rhs: &Self) -> Self {
        let mut out = Poly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let mut e = *e1;
                for i in 0..MAX_VARS {
                    e[i] = e[i].checked_add(e2[i]).expect("polynomial exponent overflow");
                }
                out.add_term(e, &(c1 * c2));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
    fn from_scalar(q: &QuadScalar) -> Self {
        Poly::constant(q.clone())
    }
    fn scale(&self, q: &QuadScalar) -> Self {
        if q.is_zero() {
            return Poly::default();
        }
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, c * q)).collect() }
    }
    fn add_assign(&mut self, rhs: &Self) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c);
        }
    }
}

/// Dense univariate polynomial, coefficients lowest degree first, with no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<QuadScalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<QuadScalar>) -> Self {
        while coeffs.last().is_some_and(QuadScalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: QuadScalar) -> Self {
        UniPoly::new(vec![c])
    }

    /// The monic linear factor `x − r`.
    pub fn linear(root: &QuadScalar) -> Self {
        UniPoly::new(vec![-root, QuadScalar::one()])
    }

    pub fn coeffs(&self) -> &[QuadScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&QuadScalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &QuadScalar) -> QuadScalar {
        let mut acc = QuadScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = QuadScalar::zero();
        UniPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        self.add(&rhs.scaled(&QuadScalar::from_int(-1)))
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::default();
        }
        let mut out = vec![QuadScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out)
    }

    pub fn scaled(&self, s: &QuadScalar) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::default(),
            Some(l) => self.scaled(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &QuadScalar::from_int(i as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.leading().unwrap().inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::default(), self.clone());
        }
        let mut q = vec![QuadScalar::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    r[i + j] -= &t;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Roots lying in ℚ(√−3), each listed once, and the monic cofactor of
    /// the square-free part that has no roots in the field.
    ///
    /// Candidates come from complex floating-point root approximations that
    /// are rounded to nearby small-height field elements; every candidate is
    /// then verified exactly and divided out, so floating point only steers
    /// the search and never decides membership.
    pub fn roots_in_field(&self) -> (Vec<QuadScalar>, UniPoly) {
        let mut rest = self.squarefree_part();
        let mut roots = Vec::new();
        if rest.is_zero() {
            return (roots, rest);
        }
        while let Some(deg) = rest.degree() {
            if deg == 0 {
                break;
            }
            if deg == 1 {
                let r = -&(&rest.coeffs[0] * &rest.coeffs[1].inv().unwrap());
                roots.push(r);
                rest = UniPoly::constant(QuadScalar::one());
                break;
            }
            let mut found = None;
            for z in complex_roots(&rest) {
                if let Some(r) = recognize(&rest, z) {
                    found = Some(r);
                    break;
                }
            }
            match found {
                Some(r) => {
                    rest = rest.div_rem(&UniPoly::linear(&r)).0;
                    roots.push(r);
                }
                None => break,
            }
        }
        roots.sort_by(cmp_scalar);
        (roots, rest.monic())
    }

    /// Newton interpolation through `(xs[i], ys[i])`; the nodes must be distinct.
    pub fn interpolate(xs: &[QuadScalar], ys: &[QuadScalar]) -> UniPoly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd: Vec<QuadScalar> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = &dd[i] - &dd[i - 1];
                let den = &xs[i] - &xs[i - j];
                dd[i] = num.checked_div(&den).expect("distinct interpolation nodes");
            }
        }
        let mut p = UniPoly::constant(dd[n - 1].clone());
        for i in (0..n - 1).rev() {
            p = p.mul(&UniPoly::linear(&xs[i])).add(&UniPoly::constant(dd[i].clone()));
        }
        p
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Deterministic total order on scalars, used only to sort outputs.
pub fn cmp_scalar(x: &QuadScalar, y: &QuadScalar) -> std::cmp::Ordering {
    x.rational_part().cmp(y.rational_part()).then(x.sqrt_m3_part().cmp(y.sqrt_m3_part()))
}

/// Resultant with respect to `var` of two polynomials in `var` and `other`,
/// returned as a univariate polynomial in `other`.
///
/// The Sylvester determinant is evaluated at enough integer points of
/// `other` to pin down its degree, using the formal degrees in `var` so the
/// specializations stay consistent, and then interpolated.
pub fn resultant(p: &Poly, q: &Poly, var: usize, other: usize) -> UniPoly {
    let m = p.degree_in(var);
    let n = q.degree_in(var);
    let bound = n * p.degree_in(other) + m * q.degree_in(other);
    let pc = p.coefficients_in(var);
    let qc = q.coefficients_in(var);
    let mut xs = Vec::with_capacity(bound + 1);
    let mut ys = Vec::with_capacity(bound + 1);
    for t in 0..=bound as i64 {
        let x = QuadScalar::from_int(t);
        let pv: Vec<QuadScalar> = pc.iter().map(|c| c.substitute(other, &x).as_constant().unwrap()).collect();
        let qv: Vec<QuadScalar> = qc.iter().map(|c| c.substitute(other, &x).as_constant().unwrap()).collect();
        ys.push(sylvester_det(&pv, &qv));
        xs.push(x);
    }
    UniPoly::interpolate(&xs, &ys)
}

/// Determinant of the Sylvester matrix of two coefficient lists (lowest
/// degree first, formal degrees given by the list lengths).
fn sylvester_det(p: &[QuadScalar], q: &[QuadScalar]) -> QuadScalar {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    if size == 0 {
        return QuadScalar::one();
    }
    let mut mat = Matrix::zeros(size, size);
    for r in 0..n {
        for (i, c) in p.iter().rev().enumerate() {
            mat[(r, r + i)] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in q.iter().rev().enumerate() {
            mat[(n + r, r + i)] = c.clone();
        }
    }
    mat.determinant()
}

/// Aberth–Ehrlich iteration for all complex roots of a square-free polynomial.
fn complex_roots(p: &UniPoly) -> Vec<Complex64> {
    let lead = p.leading().unwrap().to_complex();
    let c: Vec<Complex64> = p.coeffs.iter().map(|x| x.to_complex() / lead).collect();
    let n = c.len() - 1;
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            d = d * z + v;
            v = v * z + a;
        }
        (v, d)
    };
    let radius = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut zs: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(radius * 0.5, 0.4 + 2.0 * std::f64::consts::PI * i as f64 / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = eval(zs[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (zs[i] - zs[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                zs[i] -= step;
                moved = moved.max(step.norm() / (1.0 + zs[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    zs
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
fn convergents(x: f64, max_den: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    if !x.is_finite() || x.abs() > 1e15 {
        return out;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 || h2.abs() > i64::MAX as i128 / 2 {
            break;
        }
        out.push((h2 as i64, k2 as i64));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    out
}

/// Try to identify an approximate complex root as an exact root in ℚ(√−3).
fn recognize(p: &UniPoly, z: Complex64) -> Option<QuadScalar> {
    let re = convergents(z.re, 10_000_000);
    let im = convergents(z.im / 3f64.sqrt(), 10_000_000);
    let tol = 1e-6 * (1.0 + z.norm());
    let close_re: Vec<_> = re.iter().filter(|(n, d)| (*n as f64 / *d as f64 - z.re).abs() < tol).take(4).collect();
    let close_im: Vec<_> = im
        .iter()
        .filter(|(n, d)| (*n as f64 / *d as f64 - z.im / 3f64.sqrt()).abs() < tol)
        .take(4)
        .collect();
    for &&(an, ad) in &close_re {
        for &&(bn, bd) in &close_im {
            let cand = QuadScalar::new(
                Rational::new(BigInt::from(an), BigInt::from(ad)),
                Rational::new(BigInt::from(bn), BigInt::from(bd)),
            );
            if p.eval(&cand).is_zero() {
                return Some(cand);
            }
        }
    }
    // tiny imaginary parts may be pure noise
    if z.im.abs() < tol {
        for &&(an, ad) in &close_re {
            let cand = QuadScalar::from_rational(Rational::new(BigInt::from(an), BigInt::from(ad)));
            if p.eval(&cand).is_zero() {
                return Some(cand);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadScalar {
        s.parse().unwrap()
    }

    fn uni(cs: &[&str]) -> UniPoly {
        UniPoly::new(cs.iter().map(|s| q(s)).collect())
    }

    #[test]
    fn poly_ring_ops() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let s = Ring::add(&x, &y);
        let sq = Ring::mul(&s, &s);
        assert_eq!(sq.total_degree(), 2);
        assert_eq!(sq.coefficient(&[1, 1, 0, 0]), q("2"));
        let zero = Ring::sub(&sq, &sq);
        assert!(zero.is_zero());
        assert_eq!(sq.eval(&[q("1"), q("s3"), q("0"), q("0")]), q("-2 + 2*s3"));
        assert_eq!(sq.substitute(1, &q("1")).to_uni(0).unwrap(), uni(&["1", "2", "1"]));
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2) and (x-1)(x+3)
        let a = uni(&["2", "-3", "1"]);
        let b = uni(&["-3", "2", "1"]);
        assert_eq!(a.gcd(&b), uni(&["-1", "1"]));
        let (qt, r) = a.mul(&b).div_rem(&a);
        assert_eq!(qt, b);
        assert!(r.is_zero());
        // (x-1)^2 (x-2)
        let c = uni(&["-1", "1"]).mul(&uni(&["-1", "1"])).mul(&uni(&["-2", "1"]));
        assert_eq!(c.squarefree_part(), a);
    }

    #[test]
    fn field_roots_found_exactly() {
        // x (x - 3/5) (x - s3) (x^2 + 2)
        let p = uni(&["0", "1"])
            .mul(&uni(&["-3/5", "1"]))
            .mul(&uni(&["-1*s3", "1"]))
            .mul(&uni(&["2", "0", "1"]));
        let (roots, rest) = p.roots_in_field();
        assert_eq!(roots, vec![q("0"), q("s3"), q("3/5")]);
        assert_eq!(rest, uni(&["2", "0", "1"]));
    }

    #[test]
    fn interpolation_and_resultant() {
        let xs: Vec<_> = (0..4).map(QuadScalar::from_int).collect();
        let p = uni(&["1", "-2", "0", "5"]);
        let ys: Vec<_> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(&xs, &ys), p);
        // Res_y(y - x^2, y - 1) = 1 - x^2 up to sign
        let x = Poly::var(0);
        let y = Poly::var(1);
        let f = Ring::sub(&y, &Ring::mul(&x, &x));
        let g = Ring::sub(&y, &Poly::constant(q("1")));
        let r = resultant(&f, &g, 1, 0);
        assert_eq!(r.monic(), uni(&["-1", "0", "1"]));
    }
}
