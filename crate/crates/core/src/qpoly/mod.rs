//! Symbolic *-algebra Pol(SU_q(2)).
//!
//! Elements are stored as finite linear combinations of PBW monomials
//! `α^l γ^n γ*^m` and `α*^l γ^n γ*^m`. Every constructor returns the
//! canonical form, so the representation of an element is unique up to
//! floating-point coefficients.
//!
//! Products are normalized by the rewriting system
//!
//! ```text
//! γ α  → q⁻¹ α γ        γ* α  → q⁻¹ α γ*
//! γ α* → q α* γ         γ* α* → q α* γ*
//! α* α → 1 − γ γ*       α α*  → 1 − q² γ γ*
//! γ* γ → γ γ*
//! ```
//!
//! which moves α-letters to the left, resolves mixed α/α* pairs through the
//! unit relations and sorts γ before γ*. Normalization appends one letter at
//! a time to an already normal polynomial, so each step applies the rules
//! along a single monomial in closed form.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

pub use parse::parse;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Deformation parameter `q ∈ (−1, 1) \ {0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct QParam(f64);

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() || q == 0.0 || q.abs() >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "q = {q} must satisfy 0 < |q| < 1"
            )));
        }
        Ok(Self(q))
    }

    #[inline]
    pub fn q(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.0.abs()
    }

    /// `sgn(q)` as ±1.
    #[inline]
    pub fn sign(self) -> f64 {
        self.0.signum()
    }

    #[inline]
    pub fn ln_abs(self) -> f64 {
        self.0.abs().ln()
    }

    /// `|q|^z = exp(z ln|q|)` for complex `z`.
    pub fn abs_pow(self, z: C64) -> C64 {
        (z * self.ln_abs()).exp()
    }
}

impl TryFrom<f64> for QParam {
    type Error = Error;
    fn try_from(q: f64) -> Result<Self> {
        Self::new(q)
    }
}

impl From<QParam> for f64 {
    fn from(p: QParam) -> f64 {
        p.0
    }
}

/// One of the four letters `α, α*, γ, γ*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Alpha,
    AlphaStar,
    Gamma,
    GammaStar,
}

impl Letter {
    pub fn star(self) -> Self {
        match self {
            Letter::Alpha => Letter::AlphaStar,
            Letter::AlphaStar => Letter::Alpha,
            Letter::Gamma => Letter::GammaStar,
            Letter::GammaStar => Letter::Gamma,
        }
    }
}

impl FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "alpha" => Ok(Letter::Alpha),
            "a*" | "alpha*" => Ok(Letter::AlphaStar),
            "g" | "gamma" => Ok(Letter::Gamma),
            "g*" | "gamma*" => Ok(Letter::GammaStar),
            other => Err(Error::UnknownGenerator(other.to_string())),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::Alpha => "a",
            Letter::AlphaStar => "a*",
            Letter::Gamma => "g",
            Letter::GammaStar => "g*",
        })
    }
}

/// PBW monomial: `α^a_exp γ^n γ*^m` for `a_exp ≥ 0`,
/// `α*^(−a_exp) γ^n γ*^m` for `a_exp < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub a_exp: i32,
    pub n: u32,
    pub m: u32,
}

impl Monomial {
    pub const UNIT: Monomial = Monomial { a_exp: 0, n: 0, m: 0 };

    pub fn new(a_exp: i32, n: u32, m: u32) -> Self {
        Self { a_exp, n, m }
    }

    pub fn degree(&self) -> u32 {
        self.a_exp.unsigned_abs() + self.n + self.m
    }

    /// Power of `λ` picked up under `ψ^{2,λ}`: `n − m`.
    pub fn winding(&self) -> i64 {
        self.n as i64 - self.m as i64
    }

    /// Letters in PBW order.
    pub fn letters(&self) -> Vec<Letter> {
        let alpha = if self.a_exp >= 0 {
            Letter::Alpha
        } else {
            Letter::AlphaStar
        };
        let mut w = Vec::with_capacity(self.degree() as usize);
        w.extend(std::iter::repeat_n(alpha, self.a_exp.unsigned_abs() as usize));
        w.extend(std::iter::repeat_n(Letter::Gamma, self.n as usize));
        w.extend(std::iter::repeat_n(Letter::GammaStar, self.m as usize));
        w
    }

    /// Every PBW monomial of total degree `≤ max_degree`.
    pub fn all_up_to(max_degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for l in 0..=max_degree {
            for n in 0..=(max_degree - l) {
                for m in 0..=(max_degree - l - n) {
                    out.push(Monomial::new(l as i32, n, m));
                    if l > 0 {
                        out.push(Monomial::new(-(l as i32), n, m));
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Monomial::UNIT {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        let mut push = |name: &str, e: u32| match e {
            0 => {}
            1 => parts.push(name.to_string()),
            e => parts.push(format!("{name}^{e}")),
        };
        if self.a_exp >= 0 {
            push("a", self.a_exp as u32);
        } else {
            push("a*", self.a_exp.unsigned_abs());
        }
        push("g", self.n);
        push("g*", self.m);
        f.write_str(&parts.join(" * "))
    }
}

/// Element of Pol(SU_q(2)) in PBW normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct QPoly {
    param: QParam,
    terms: BTreeMap<Monomial, C64>,
}

impl QPoly {
    pub fn zero(param: QParam) -> Self {
        Self {
            param,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(param: QParam) -> Self {
        Self::monomial(param, Monomial::UNIT, ONE)
    }

    pub fn scalar(param: QParam, c: C64) -> Self {
        Self::monomial(param, Monomial::UNIT, c)
    }

    pub fn monomial(param: QParam, mono: Monomial, c: C64) -> Self {
        let mut p = Self::zero(param);
        p.add_term(mono, c);
        p
    }

    pub fn generator(param: QParam, letter: Letter) -> Self {
        Self::from_word(param, &[letter])
    }

    /// Normal form of a free word in the generators.
    pub fn from_word(param: QParam, word: &[Letter]) -> Self {
        let mut p = Self::one(param);
        for &letter in word {
            p = p.times_letter(letter);
        }
        p
    }

    pub fn param(&self) -> QParam {
        self.param
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> C64 {
        self.terms.get(mono).copied().unwrap_or(ZERO)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest `|n − m|` among the stored monomials.
    pub fn max_winding(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.winding().abs())
            .max()
            .unwrap_or(0)
    }

    /// Largest coefficient modulus; zero for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn add_term(&mut self, mono: Monomial, c: C64) {
        if c == ZERO {
            return;
        }
        let entry = self.terms.entry(mono).or_insert(ZERO);
        *entry += c;
        if *entry == ZERO {
            self.terms.remove(&mono);
        }
    }

    fn check_param(&self, other: &QPoly) -> Result<()> {
        if self.param != other.param {
            return Err(Error::ParamMismatch(self.param.q(), other.param.q()));
        }
        Ok(())
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = Self::zero(self.param);
        for (&mono, &v) in &self.terms {
            out.add_term(mono, v * c);
        }
        out
    }

    pub fn try_add(&self, other: &QPoly) -> Result<Self> {
        self.check_param(other)?;
        let mut out = self.clone();
        for (&mono, &v) in &other.terms {
            out.add_term(mono, v);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &QPoly) -> Result<Self> {
        self.try_add(&other.scale(-ONE))
    }

    /// Right multiplication by one generator.
    fn times_letter(&self, letter: Letter) -> Self {
        let q = self.param.q();
        let mut out = Self::zero(self.param);
        for (&mono, &c) in &self.terms {
            let Monomial { a_exp, n, m } = mono;
            // q^(n+m) as the factor for moving a letter past γ^n γ*^m
            let pass = q.powi((n + m) as i32);
            match letter {
                Letter::Gamma => out.add_term(Monomial::new(a_exp, n + 1, m), c),
                Letter::GammaStar => out.add_term(Monomial::new(a_exp, n, m + 1), c),
                Letter::Alpha => {
                    let c = c / pass;
                    if a_exp >= 0 {
                        out.add_term(Monomial::new(a_exp + 1, n, m), c);
                    } else {
                        // α*^l α = α*^(l−1) (1 − γγ*)
                        out.add_term(Monomial::new(a_exp + 1, n, m), c);
                        out.add_term(Monomial::new(a_exp + 1, n + 1, m + 1), -c);
                    }
                }
                Letter::AlphaStar => {
                    let c = c * pass;
                    if a_exp <= 0 {
                        out.add_term(Monomial::new(a_exp - 1, n, m), c);
                    } else {
                        // α^l α* = α^(l−1) (1 − q²γγ*)
                        out.add_term(Monomial::new(a_exp - 1, n, m), c);
                        out.add_term(Monomial::new(a_exp - 1, n + 1, m + 1), -c * q * q);
                    }
                }
            }
        }
        out
    }

    /// Re-derives the canonical form term by term from the letters of each
    /// monomial. Idempotent: stored polynomials are already normal.
    pub fn normal_form(&self) -> Self {
        let mut out = Self::zero(self.param);
        for (mono, &c) in &self.terms {
            let p = Self::from_word(self.param, &mono.letters());
            for (&mm, &v) in &p.terms {
                out.add_term(mm, v * c);
            }
        }
        out
    }

    pub fn try_mul(&self, other: &QPoly) -> Result<Self> {
        self.check_param(other)?;
        let mut out = Self::zero(self.param);
        for (mono, &c) in &other.terms {
            let mut partial = self.scale(c);
            for letter in mono.letters() {
                partial = partial.times_letter(letter);
            }
            for (&mm, &v) in &partial.terms {
                out.add_term(mm, v);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.param);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// The involution: antilinear and antimultiplicative.
    pub fn star(&self) -> Self {
        self.map_reversed(|l| (l.star(), ONE), true)
    }

    /// Unitary antipode `R`: linear, antimultiplicative, `α ↔ α*`,
    /// `γ ↦ −sgn(q)γ`, `γ* ↦ −sgn(q)γ*`.
    pub fn antipode_r(&self) -> Self {
        let s = C64::new(-self.param.sign(), 0.0);
        self.map_reversed(
            |l| match l {
                Letter::Alpha => (Letter::AlphaStar, ONE),
                Letter::AlphaStar => (Letter::Alpha, ONE),
                Letter::Gamma => (Letter::Gamma, s),
                Letter::GammaStar => (Letter::GammaStar, s),
            },
            false,
        )
    }

    /// `a ↦ R(a*)`, the symbolic form of the modular conjugation `J_φ`
    /// acting on `Λ_h(a)`. Antilinear.
    pub fn jphi(&self) -> Self {
        self.star().antipode_r()
    }

    fn map_reversed(&self, f: impl Fn(Letter) -> (Letter, C64), conjugate: bool) -> Self {
        let mut out = Self::zero(self.param);
        for (mono, &c) in &self.terms {
            let mut coeff = if conjugate { c.conj() } else { c };
            let mut word = Vec::with_capacity(mono.degree() as usize);
            for l in mono.letters().into_iter().rev() {
                let (img, factor) = f(l);
                coeff *= factor;
                word.push(img);
            }
            let p = Self::from_word(self.param, &word);
            for (&mm, &v) in &p.terms {
                out.add_term(mm, v * coeff);
            }
        }
        out
    }

    /// Haar state, extended linearly from
    /// `h(α^{±l} γ^n γ*^m) = δ_{l,0} δ_{n,m} (1 − q²)/(1 − q^{2(n+1)})`.
    pub fn haar(&self) -> C64 {
        self.terms
            .iter()
            .map(|(mono, &c)| c * haar_monomial(self.param, mono))
            .sum()
    }

    /// `h(self · other)` without expanding the product. Each pair of
    /// monomials is integrated in factored form over the spectrum of `γγ*`,
    /// which avoids the cancellation between the large alternating
    /// coefficients of `α*^l α^l` in the PBW basis.
    pub fn haar_product(&self, other: &QPoly) -> Result<C64> {
        self.check_param(other)?;
        let mut total = ZERO;
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                total += c1 * c2 * haar_monomial_product(self.param, m1, m2);
            }
        }
        Ok(total)
    }

    /// `⟨Λ_h(self) | Λ_h(other)⟩ = h(self* · other)`.
    pub fn gns_inner(&self, other: &QPoly) -> Result<C64> {
        self.star().haar_product(other)
    }

    /// Modular automorphism `σ^h_z` through its eigenvalues:
    /// `α^l`-monomials scale by `|q|^{−2izl}`, `α*^l`-monomials by `|q|^{2izl}`.
    pub fn sigma_h(&self, z: C64) -> Self {
        let i = C64::i();
        self.map_diagonal(|mono| self.param.abs_pow(-2.0 * i * z * mono.a_exp as f64))
    }

    /// Scaling group `τ_t`: α fixed, `γ ↦ |q|^{2it}γ`, `γ* ↦ |q|^{−2it}γ*`.
    pub fn tau(&self, t: f64) -> Self {
        let i = C64::i();
        self.map_diagonal(|mono| self.param.abs_pow(2.0 * i * t * mono.winding() as f64))
    }

    fn map_diagonal(&self, factor: impl Fn(&Monomial) -> C64) -> Self {
        let mut out = Self::zero(self.param);
        for (mono, &c) in &self.terms {
            out.add_term(*mono, c * factor(mono));
        }
        out
    }

    /// Largest coefficient distance to `other` (same parameter assumed).
    pub fn distance(&self, other: &QPoly) -> f64 {
        let mut d: f64 = 0.0;
        for mono in self.terms.keys().chain(other.terms.keys()) {
            d = d.max((self.coeff(mono) - other.coeff(mono)).norm());
        }
        d
    }
}

/// `h(x y)` for monomials `x = α^{±l} γ^{n₁}γ*^{m₁}`, `y = α^{∓l} γ^{n₂}γ*^{m₂}`:
/// moving the γ-block of `x` past the α-power of `y` leaves
/// `q^{±l(n₁+m₁)} α^{±l}α^{∓l} (γγ*)^s`, and
/// `α^lα*^l = Π_{j=1}^{l}(1 − q^{2j}γγ*)`, `α*^lα^l = Π_{j=0}^{l−1}(1 − q^{−2j}γγ*)`
/// are summed against the spectral weights `(1−q²)q^{2k}` at `γγ* = q^{2k}`.
fn haar_monomial_product(param: QParam, x: &Monomial, y: &Monomial) -> C64 {
    if x.a_exp + y.a_exp != 0 || x.n + y.n != x.m + y.m {
        return ZERO;
    }
    if x.a_exp == 0 {
        return haar_monomial(param, &Monomial::new(0, x.n + y.n, x.m + y.m));
    }
    let q = param.q();
    let q2 = q * q;
    let l = x.a_exp.unsigned_abs() as i32;
    let s = (x.n + y.n) as i32;
    let block = (x.n + x.m) as i32;
    let (prefactor, start) = if x.a_exp > 0 {
        (q.powi(l * block), 0)
    } else {
        (q.powi(-l * block), l)
    };
    let factor = |k: i32| -> f64 {
        if x.a_exp > 0 {
            (1..=l).map(|j| 1.0 - q2.powi(j + k)).product()
        } else {
            (0..l).map(|j| 1.0 - q2.powi(k - j)).product()
        }
    };
    let mut sum = 0.0;
    let mut k = start;
    loop {
        let weight = q2.powi(k) * q2.powi(k * s);
        let term = weight * factor(k);
        sum += term;
        if weight <= f64::EPSILON * 1e-3 * sum.abs() || k > 1_000_000 {
            break;
        }
        k += 1;
    }
    C64::new(prefactor * (1.0 - q2) * sum, 0.0)
}

pub(crate) fn haar_monomial(param: QParam, mono: &Monomial) -> C64 {
    if mono.a_exp != 0 || mono.n != mono.m {
        return ZERO;
    }
    let q2 = param.q() * param.q();
    C64::new((1.0 - q2) / (1.0 - q2.powi(mono.n as i32 + 1)), 0.0)
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        self.try_add(rhs).expect("q parameters differ")
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self.try_sub(rhs).expect("q parameters differ")
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        self.try_mul(rhs).expect("q parameters differ")
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        self.scale(-ONE)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (mono, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            if *mono != Monomial::UNIT {
                write!(f, " * {mono}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    a_exp: i32,
    n: u32,
    m: u32,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct QPolyRepr {
    q: f64,
    terms: Vec<TermRepr>,
}

impl Serialize for QPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QPolyRepr {
            q: self.param.q(),
            terms: self
                .terms
                .iter()
                .map(|(mono, c)| TermRepr {
                    a_exp: mono.a_exp,
                    n: mono.n,
                    m: mono.m,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = QPolyRepr::deserialize(d)?;
        let param = QParam::new(repr.q).map_err(serde::de::Error::custom)?;
        let mut p = QPoly::zero(param);
        for t in repr.terms {
            p.add_term(Monomial::new(t.a_exp, t.n, t.m), C64::new(t.re, t.im));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> QParam {
        QParam::new(0.5).unwrap()
    }

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    fn word(p: QParam, w: &[Letter]) -> QPoly {
        QPoly::from_word(p, w)
    }

    use Letter::*;

    #[test]
    fn qparam_domain() {
        assert!(QParam::new(0.0).is_err());
        assert!(QParam::new(1.0).is_err());
        assert!(QParam::new(-1.2).is_err());
        assert!(QParam::new(f64::NAN).is_err());
        let p = QParam::new(-0.3).unwrap();
        assert_eq!(p.sign(), -1.0);
    }

    #[test]
    fn commutation_inversion() {
        let p = half();
        let ga = word(p, &[Gamma, Alpha]);
        let expected = QPoly::monomial(p, Monomial::new(1, 1, 0), C64::new(2.0, 0.0));
        assert!(ga.distance(&expected) < 1e-15);
    }

    #[test]
    fn unit_relations() {
        let p = half();
        let sa = word(p, &[AlphaStar, Alpha]);
        let rhs = &QPoly::one(p) - &word(p, &[GammaStar, Gamma]);
        assert!(sa.distance(&rhs) < 1e-15);

        let aa = word(p, &[Alpha, AlphaStar]);
        let rhs = &QPoly::one(p) - &QPoly::monomial(p, Monomial::new(0, 1, 1), C64::new(0.25, 0.0));
        assert!(aa.distance(&rhs) < 1e-15);
    }

    #[test]
    fn gamma_star_alpha_star() {
        let p = half();
        let w = word(p, &[GammaStar, AlphaStar]);
        let expected = QPoly::monomial(p, Monomial::new(-1, 0, 1), C64::new(0.5, 0.0));
        assert!(w.distance(&expected) < 1e-15);
    }

    #[test]
    fn pbw_products_are_untouched() {
        let p = half();
        let ag = word(p, &[Alpha, Gamma]);
        let prod = &ag * &QPoly::generator(p, GammaStar);
        assert_eq!(prod, QPoly::monomial(p, Monomial::new(1, 1, 1), ONE));
    }

    #[test]
    fn star_examples() {
        let p = half();
        let ag = word(p, &[Alpha, Gamma]);
        let expected = QPoly::monomial(p, Monomial::new(-1, 0, 1), C64::new(0.5, 0.0));
        assert!(ag.star().distance(&expected) < 1e-15);
        assert_eq!(QPoly::one(p).star(), QPoly::one(p));
        let ig = QPoly::generator(p, Gamma).scale(C64::i());
        assert_eq!(
            ig.star(),
            QPoly::monomial(p, Monomial::new(0, 0, 1), -C64::i())
        );
    }

    #[test]
    fn haar_examples() {
        let p = half();
        assert!(close(QPoly::one(p).haar(), ONE));
        let gg = QPoly::monomial(p, Monomial::new(0, 1, 1), ONE);
        assert!(close(gg.haar(), C64::new(0.8, 0.0)));
        let agg = QPoly::monomial(p, Monomial::new(1, 1, 1), ONE);
        assert_eq!(agg.haar(), ZERO);
    }

    #[test]
    fn gns_examples() {
        let p = half();
        let g = QPoly::generator(p, Gamma);
        let a = QPoly::generator(p, Alpha);
        assert!(close(g.gns_inner(&g).unwrap(), C64::new(0.8, 0.0)));
        assert_eq!(QPoly::one(p).gns_inner(&a).unwrap(), ZERO);
        // h(α*α) = 1 − h(γ*γ) = q²/(1 + q²)
        assert!(close(a.gns_inner(&a).unwrap(), C64::new(0.25 / 1.25, 0.0)));
    }

    #[test]
    fn haar_product_matches_expanded_product() {
        for q in [0.5, -0.7, 0.3] {
            let p = QParam::new(q).unwrap();
            let monos = Monomial::all_up_to(3);
            for x in &monos {
                for y in &monos {
                    let x = QPoly::monomial(p, *x, C64::new(1.0, 0.0));
                    let y = QPoly::monomial(p, *y, C64::new(0.0, 1.0));
                    let expanded = x.try_mul(&y).unwrap().haar();
                    let factored = x.haar_product(&y).unwrap();
                    assert!((expanded - factored).norm() < 1e-12, "{x} · {y}");
                }
            }
        }
    }

    #[test]
    fn haar_product_is_stable_for_high_alpha_powers() {
        // h(α*^6 α^6) = q^{12} h(α^6 α*^6) by the KMS condition
        let p = half();
        let a6 = QPoly::generator(p, Alpha).pow(6);
        let a6s = QPoly::generator(p, AlphaStar).pow(6);
        let lhs = a6.haar_product(&a6s).unwrap();
        let rhs = a6s.haar_product(&a6).unwrap() * 4096.0;
        assert!((lhs - rhs).norm() < 1e-14);
        assert!((lhs.re - 0.750_045_779_161_325_8).abs() < 1e-14);
    }

    #[test]
    fn param_mismatch_is_reported() {
        let a = QPoly::one(half());
        let b = QPoly::one(QParam::new(0.3).unwrap());
        assert!(matches!(a.try_mul(&b), Err(Error::ParamMismatch(..))));
        assert!(matches!(a.gns_inner(&b), Err(Error::ParamMismatch(..))));
    }

    #[test]
    fn sigma_examples() {
        let p = half();
        let g = QPoly::generator(p, Gamma);
        assert_eq!(g.sigma_h(C64::new(0.7, 0.0)), g);
        let a = QPoly::generator(p, Alpha);
        let s = a.sigma_h(C64::new(0.0, -1.0));
        assert!(close(s.coeff(&Monomial::new(1, 0, 0)), C64::new(4.0, 0.0)));
        let one = QPoly::one(p);
        assert_eq!(one.sigma_h(C64::new(0.3, 1.1)), one);
    }

    #[test]
    fn tau_examples() {
        let p = half();
        let a = QPoly::generator(p, Alpha);
        assert_eq!(a.tau(1.3), a);
        let gg = QPoly::monomial(p, Monomial::new(0, 1, 1), ONE);
        assert_eq!(gg.tau(2.1), gg);
        let g = QPoly::generator(p, Gamma);
        assert_eq!(g.tau(0.0), g);
        let t = 0.4;
        let phase = C64::new(0.0, 2.0 * t * p.ln_abs()).exp();
        assert!(close(g.tau(t).coeff(&Monomial::new(0, 1, 0)), phase));
    }

    #[test]
    fn antipode_examples() {
        for q in [0.5, -0.5] {
            let p = QParam::new(q).unwrap();
            let s = p.sign();
            let g = QPoly::generator(p, Gamma);
            assert_eq!(g.antipode_r(), g.scale(C64::new(-s, 0.0)));
            let ag = word(p, &[Alpha, Gamma]);
            let expected = QPoly::monomial(p, Monomial::new(-1, 1, 0), C64::new(-s * q, 0.0));
            assert!(ag.antipode_r().distance(&expected) < 1e-15);
            assert_eq!(QPoly::one(p).antipode_r(), QPoly::one(p));
        }
    }

    #[test]
    fn jphi_examples() {
        for q in [0.5, -0.5] {
            let p = QParam::new(q).unwrap();
            let g = QPoly::generator(p, Gamma);
            let expected = QPoly::generator(p, GammaStar).scale(C64::new(-p.sign(), 0.0));
            assert_eq!(g.jphi(), expected);
            assert_eq!(QPoly::one(p).jphi(), QPoly::one(p));
            assert_eq!(
                QPoly::scalar(p, C64::i()).jphi(),
                QPoly::scalar(p, -C64::i())
            );
        }
    }

    #[test]
    fn normal_form_is_idempotent_on_words() {
        let p = QParam::new(-0.7).unwrap();
        let w = word(p, &[Gamma, AlphaStar, Alpha, GammaStar, Alpha, Gamma]);
        assert_eq!(w.normal_form(), w);
    }

    #[test]
    fn monomial_enumeration_counts() {
        // (l, n, m) with l+n+m ≤ 4: 35 α-family, 20 α*-family with l ≥ 1
        assert_eq!(Monomial::all_up_to(4).len(), 55);
        assert_eq!(Monomial::all_up_to(6).len(), 140);
    }

    #[test]
    fn json_shape() {
        let p = half();
        let ag = word(p, &[Gamma, Alpha]);
        let v: serde_json::Value = serde_json::to_value(&ag).unwrap();
        assert_eq!(v["q"], 0.5);
        assert_eq!(v["terms"][0]["a_exp"], 1);
        assert_eq!(v["terms"][0]["n"], 1);
        assert_eq!(v["terms"][0]["re"], 2.0);
        let back: QPoly = serde_json::from_value(v).unwrap();
        assert_eq!(back, ag);
    }
}
