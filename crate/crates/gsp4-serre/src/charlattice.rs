//! Tame inertia characters.
//!
//! A character of tame inertia is a power of a fundamental character ω_f of
//! level f ∈ {1, 2, 4}, stored as a canonical exponent mod p^f − 1. The mod-p
//! cyclotomic character is ε = ω_1 = ω_f^{(p^f−1)/(p−1)}. Unramified twists
//! carry no inertial data and are kept as symbolic words in named characters.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest prime accepted. Keeps p^4 comfortably inside i64.
pub const MAX_PRIME: i64 = 1 << 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("p = {0} must be an odd prime")]
    NotOddPrime(i64),
    #[error("p = {0} exceeds the supported bound {MAX_PRIME}")]
    PrimeTooLarge(i64),
    #[error("level {0} is not one of 1, 2, 4")]
    InvalidLevel(u32),
    #[error("digit {digit} out of range [0, {p})")]
    DigitOutOfRange { digit: i64, p: i64 },
    #[error("cannot parse unramified twist {0:?}")]
    BadTwist(String),
}

/// An odd rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Prime(i64);

impl Prime {
    pub fn new(p: i64) -> Result<Self, CharError> {
        if p > MAX_PRIME {
            return Err(CharError::PrimeTooLarge(p));
        }
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(CharError::NotOddPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    /// p^f − 1, the order of ω_f.
    pub fn order(self, f: u32) -> i64 {
        self.0.pow(f) - 1
    }
}

impl TryFrom<i64> for Prime {
    type Error = CharError;
    fn try_from(p: i64) -> Result<Self, CharError> {
        Prime::new(p)
    }
}

impl From<Prime> for i64 {
    fn from(p: Prime) -> i64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_level(f: u32) -> Result<(), CharError> {
    match f {
        1 | 2 | 4 => Ok(()),
        _ => Err(CharError::InvalidLevel(f)),
    }
}

/// An unramified character, kept as a word in named generic characters.
///
/// Distinct names are treated as independent, so the word is trivial exactly
/// when every exponent cancels.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Unramified(BTreeMap<String, i64>);

impl Unramified {
    pub fn trivial() -> Self {
        Unramified(BTreeMap::new())
    }

    pub fn named(name: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.to_string(), 1);
        Unramified(m)
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Unramified) -> Unramified {
        let mut m = self.0.clone();
        for (k, v) in &other.0 {
            *m.entry(k.clone()).or_insert(0) += v;
        }
        m.retain(|_, v| *v != 0);
        Unramified(m)
    }

    pub fn pow(&self, n: i64) -> Unramified {
        let mut m: BTreeMap<String, i64> = self.0.iter().map(|(k, v)| (k.clone(), v * n)).collect();
        m.retain(|_, v| *v != 0);
        Unramified(m)
    }

    pub fn inv(&self) -> Unramified {
        self.pow(-1)
    }

    pub fn parse(s: &str) -> Result<Self, CharError> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Unramified::trivial());
        }
        let mut acc = Unramified::trivial();
        for factor in s.split('*') {
            let factor = factor.trim();
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .trim()
                        .parse()
                        .map_err(|_| CharError::BadTwist(s.into()))?;
                    (n.trim(), e)
                }
                None => (factor, 1),
            };
            let ok = !name.is_empty()
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
            if !ok {
                return Err(CharError::BadTwist(s.into()));
            }
            acc = acc.mul(&Unramified::named(name).pow(exp));
        }
        Ok(acc)
    }
}

impl fmt::Display for Unramified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, v)| {
                if *v == 1 {
                    k.clone()
                } else {
                    format!("{k}^{v}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl TryFrom<String> for Unramified {
    type Error = CharError;
    fn try_from(s: String) -> Result<Self, CharError> {
        Unramified::parse(&s)
    }
}

impl From<Unramified> for String {
    fn from(u: Unramified) -> String {
        u.to_string()
    }
}

/// A character of tame inertia: ω_f^exponent times an unramified twist.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InertiaCharacter {
    p: Prime,
    level: u32,
    exponent: i64,
    twist: Unramified,
}

impl InertiaCharacter {
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Canonical exponent in [0, p^f − 1).
    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn twist(&self) -> &Unramified {
        &self.twist
    }

    pub fn modulus(&self) -> i64 {
        self.p.order(self.level)
    }

    /// Trivial on inertia (the unramified twist is ignored).
    pub fn is_inertially_trivial(&self) -> bool {
        self.exponent == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0 && self.twist.is_trivial()
    }

    /// Equal to ε^k on the nose, twist included.
    pub fn is_cyclotomic_power(&self, k: i64) -> bool {
        self.twist.is_trivial() && self.exponent == cyclotomic_exponent(self.p, self.level, k)
    }

    pub fn with_twist(&self, twist: Unramified) -> Self {
        InertiaCharacter {
            twist,
            ..self.clone()
        }
    }

    /// Product of two characters, computed at the larger level.
    pub fn mul(&self, other: &InertiaCharacter) -> InertiaCharacter {
        let level = self.level.max(other.level);
        let a = self.at_level(level);
        let b = other.at_level(level);
        let n = self.p.order(level);
        InertiaCharacter {
            p: self.p,
            level,
            exponent: (a.exponent + b.exponent).rem_euclid(n),
            twist: a.twist.mul(&b.twist),
        }
    }

    pub fn pow(&self, k: i64) -> InertiaCharacter {
        let n = self.modulus();
        InertiaCharacter {
            p: self.p,
            level: self.level,
            exponent: mul_mod(self.exponent, k, n),
            twist: self.twist.pow(k),
        }
    }

    pub fn inv(&self) -> InertiaCharacter {
        self.pow(-1)
    }

    /// The Frobenius conjugate χ^p.
    pub fn frobenius(&self) -> InertiaCharacter {
        self.pow(self.p.get()).with_twist(self.twist.clone())
    }

    /// The same character viewed at a higher level `g` (f must divide g).
    pub fn at_level(&self, g: u32) -> InertiaCharacter {
        assert!(
            g.is_multiple_of(self.level),
            "level {} does not divide {}",
            self.level,
            g
        );
        let scale = self.p.order(g) / self.p.order(self.level);
        InertiaCharacter {
            p: self.p,
            level: g,
            exponent: mul_mod(self.exponent, scale, self.p.order(g)),
            twist: self.twist.clone(),
        }
    }
}

impl fmt::Display for InertiaCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 1 {
            write!(f, "eps^{}", self.exponent)?;
        } else {
            write!(f, "w{}^{}", self.level, self.exponent)?;
        }
        if !self.twist.is_trivial() {
            write!(f, "*[{}]", self.twist)?;
        }
        Ok(())
    }
}

pub(crate) fn mul_mod(a: i64, b: i64, n: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(n as i128)) as i64
}

fn cyclotomic_exponent(p: Prime, f: u32, k: i64) -> i64 {
    let n = p.order(f);
    mul_mod(n / (p.get() - 1), k, n)
}

/// ω_f^e ⊗ u with the exponent reduced mod p^f − 1.
pub fn make_char(p: Prime, f: u32, e: i64, u: Unramified) -> Result<InertiaCharacter, CharError> {
    check_level(f)?;
    Ok(InertiaCharacter {
        p,
        level: f,
        exponent: e.rem_euclid(p.order(f)),
        twist: u,
    })
}

/// ε^k written at level f.
pub fn cyclotomic_as_level(p: Prime, f: u32, k: i64) -> Result<InertiaCharacter, CharError> {
    check_level(f)?;
    Ok(InertiaCharacter {
        p,
        level: f,
        exponent: cyclotomic_exponent(p, f, k),
        twist: Unramified::trivial(),
    })
}

/// The distinct conjugates χ, χ^p, χ^{p²}, … in that order.
pub fn frobenius_orbit(chi: &InertiaCharacter) -> Vec<InertiaCharacter> {
    let mut out = vec![chi.clone()];
    let mut cur = chi.frobenius();
    while cur.exponent != chi.exponent {
        out.push(cur.clone());
        cur = cur.frobenius();
    }
    out
}

/// Base-p digits of an exponent, least significant first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitVector {
    pub base: i64,
    pub digits: Vec<i64>,
}

impl DigitVector {
    pub fn level(&self) -> u32 {
        self.digits.len() as u32
    }

    pub fn value(&self) -> i64 {
        self.digits
            .iter()
            .rev()
            .fold(0, |acc, d| acc * self.base + d)
    }
}

pub fn digits(chi: &InertiaCharacter) -> DigitVector {
    let p = chi.p.get();
    let mut e = chi.exponent;
    let mut ds = Vec::with_capacity(chi.level as usize);
    for _ in 0..chi.level {
        ds.push(e % p);
        e /= p;
    }
    DigitVector {
        base: p,
        digits: ds,
    }
}

/// Inverse of [`digits`]: the character ω_f^{Σ a_i p^i}.
pub fn from_digits(p: Prime, ds: &[i64], u: Unramified) -> Result<InertiaCharacter, CharError> {
    for &d in ds {
        if !(0..p.get()).contains(&d) {
            return Err(CharError::DigitOutOfRange {
                digit: d,
                p: p.get(),
            });
        }
    }
    let dv = DigitVector {
        base: p.get(),
        digits: ds.to_vec(),
    };
    make_char(p, ds.len() as u32, dv.value(), u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: i64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn primes_are_validated() {
        assert!(Prime::new(2).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1).is_err());
        assert_eq!(Prime::new(7).unwrap().get(), 7);
    }

    #[test]
    fn make_char_reduces_exponent() {
        assert_eq!(
            make_char(pr(5), 2, 24, Unramified::trivial())
                .unwrap()
                .exponent(),
            0
        );
        assert_eq!(
            make_char(pr(5), 1, 7, Unramified::trivial())
                .unwrap()
                .exponent(),
            3
        );
        assert_eq!(
            make_char(pr(7), 4, 2400, Unramified::trivial())
                .unwrap()
                .exponent(),
            0
        );
        assert_eq!(
            make_char(pr(5), 1, -1, Unramified::trivial())
                .unwrap()
                .exponent(),
            3
        );
        assert_eq!(
            make_char(pr(5), 3, 1, Unramified::trivial()),
            Err(CharError::InvalidLevel(3))
        );
    }

    #[test]
    fn cyclotomic_at_each_level() {
        assert_eq!(cyclotomic_as_level(pr(5), 2, 1).unwrap().exponent(), 6);
        assert_eq!(cyclotomic_as_level(pr(5), 1, 3).unwrap().exponent(), 3);
        let c = cyclotomic_as_level(pr(3), 4, 2).unwrap();
        assert!(c.is_trivial());
    }

    #[test]
    fn orbit_sizes() {
        let chi = make_char(pr(5), 2, 16, Unramified::trivial()).unwrap();
        let orbit: Vec<i64> = frobenius_orbit(&chi).iter().map(|c| c.exponent()).collect();
        assert_eq!(orbit, vec![16, 8]);
        let eps = make_char(pr(5), 2, 6, Unramified::trivial()).unwrap();
        assert_eq!(frobenius_orbit(&eps).len(), 1);
        let deg = make_char(pr(3), 4, 10, Unramified::trivial()).unwrap();
        assert!(frobenius_orbit(&deg).len() <= 2);
    }

    #[test]
    fn digit_expansion() {
        let chi = make_char(pr(5), 4, 84, Unramified::trivial()).unwrap();
        assert_eq!(digits(&chi).digits, vec![4, 1, 3, 0]);
        let z = make_char(pr(7), 2, 0, Unramified::trivial()).unwrap();
        assert_eq!(digits(&z).digits, vec![0, 0]);
        let one = make_char(pr(5), 1, 3, Unramified::trivial()).unwrap();
        assert_eq!(digits(&one).digits, vec![3]);
    }

    #[test]
    fn digits_round_trip_exhaustively() {
        for p in [3, 5, 7] {
            for f in [1u32, 2, 4] {
                let n = pr(p).order(f);
                for e in 0..n {
                    let chi = make_char(pr(p), f, e, Unramified::trivial()).unwrap();
                    let back = from_digits(pr(p), &digits(&chi).digits, Unramified::trivial());
                    assert_eq!(back.unwrap(), chi);
                }
            }
        }
    }

    #[test]
    fn level_change_preserves_cyclotomic() {
        let eps = cyclotomic_as_level(pr(7), 1, 1).unwrap();
        assert_eq!(eps.at_level(4), cyclotomic_as_level(pr(7), 4, 1).unwrap());
        assert!(cyclotomic_as_level(pr(7), 2, 6).unwrap().is_trivial());
    }

    #[test]
    fn twists_form_a_group() {
        let u = Unramified::parse("u^2*v").unwrap();
        assert_eq!(u.to_string(), "u^2*v");
        assert!(u.mul(&u.inv()).is_trivial());
        assert_eq!(Unramified::parse("1").unwrap(), Unramified::trivial());
        assert!(Unramified::parse("2u").is_err());
    }
}
