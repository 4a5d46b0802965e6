//! The weight lattice X(T) of GSp4 and its alcove geometry.
//!
//! Weights are triples (a, b; c) with a + b ≡ c mod 2. Alcoves are described
//! in the coordinates (x, y) of λ + ρ̃ where ρ̃ = (2, 1; 3).

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charlattice::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("parity violated: {a} + {b} is not congruent to {c} mod 2")]
    InvalidParity { a: i64, b: i64, c: i64 },
    #[error("weight ({a},{b};{c}) is not p-restricted for p = {p}")]
    NotRestricted { a: i64, b: i64, c: i64, p: i64 },
    #[error("ordering violated: need m1 > m2 > 0, got ({m1}, {m2})")]
    Ordering { m1: i64, m2: i64 },
    #[error("weight ({a},{b};{c}) has shifted alcove {alcove:?}; only C0 and C1 are supported")]
    Unsupported {
        a: i64,
        b: i64,
        c: i64,
        alcove: Alcove,
    },
}

/// A weight (a, b; c) of the torus of GSp4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWeight", into = "RawWeight")]
pub struct HighestWeight {
    a: i64,
    b: i64,
    c: i64,
}

#[derive(Serialize, Deserialize)]
struct RawWeight {
    a: i64,
    b: i64,
    c: i64,
}

impl TryFrom<RawWeight> for HighestWeight {
    type Error = WeightError;
    fn try_from(r: RawWeight) -> Result<Self, WeightError> {
        HighestWeight::new(r.a, r.b, r.c)
    }
}

impl From<HighestWeight> for RawWeight {
    fn from(w: HighestWeight) -> RawWeight {
        RawWeight {
            a: w.a,
            b: w.b,
            c: w.c,
        }
    }
}

impl HighestWeight {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, WeightError> {
        if (a + b - c).rem_euclid(2) != 0 {
            return Err(WeightError::InvalidParity { a, b, c });
        }
        Ok(HighestWeight { a, b, c })
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.c
    }

    /// The Harish-Chandra pair (m1, m2) = (a + 2, b + 1).
    pub fn hc_pair(&self) -> (i64, i64) {
        (self.a + 2, self.b + 1)
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{})", self.a, self.b, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Alcove {
    C0,
    C1,
    C2,
    C3,
    Boundary,
    Outside,
}

/// p-restricted: 0 ≤ a − b < p and 0 ≤ b < p.
pub fn in_x1(p: Prime, w: &HighestWeight) -> bool {
    let p = p.get();
    (0..p).contains(&(w.a - w.b)) && (0..p).contains(&w.b)
}

/// The stricter bound 0 ≤ a − b < p − 1 and 0 ≤ b < p − 1.
pub fn is_p_regular(p: Prime, w: &HighestWeight) -> bool {
    let p = p.get() - 1;
    (0..p).contains(&(w.a - w.b)) && (0..p).contains(&w.b)
}

/// Strict and closed versions of the inequalities cutting out each alcove.
fn alcove_tests(p: Ratio<i64>, x: Ratio<i64>, y: Ratio<i64>) -> [(bool, bool); 4] {
    let zero = Ratio::from_integer(0);
    let two_p = p * 2;
    [
        (
            x > y && y > zero && x + y < p,
            x >= y && y >= zero && x + y <= p,
        ),
        (x + y > p && y < x && x < p, x + y >= p && y <= x && x <= p),
        (
            x - y < p && p < x && x + y < two_p,
            x - y <= p && p <= x && x + y <= two_p,
        ),
        (
            y < p && x + y > two_p && x - y < p,
            y <= p && x + y >= two_p && x - y <= p,
        ),
    ]
}

/// Classifies a point of X(T) ⊗ R by its (x, y) coordinates.
///
/// Interior points get their alcove; points on a wall of some alcove closure
/// get `Boundary`; anything else is `Outside`.
pub fn alcove_of(p: Prime, x: Ratio<i64>, y: Ratio<i64>) -> Alcove {
    let tests = alcove_tests(Ratio::from_integer(p.get()), x, y);
    let tags = [Alcove::C0, Alcove::C1, Alcove::C2, Alcove::C3];
    for (i, (open, _)) in tests.iter().enumerate() {
        if *open {
            return tags[i];
        }
    }
    if tests.iter().any(|(_, closed)| *closed) {
        Alcove::Boundary
    } else {
        Alcove::Outside
    }
}

pub fn alcove_of_int(p: Prime, x: i64, y: i64) -> Alcove {
    alcove_of(p, Ratio::from_integer(x), Ratio::from_integer(y))
}

/// Alcove of λ + ρ̃.
pub fn shifted_alcove(p: Prime, w: &HighestWeight) -> Alcove {
    let (x, y) = w.hc_pair();
    alcove_of_int(p, x, y)
}

/// A Serre weight: a p-restricted weight with c taken mod 2(p − 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SerreWeightLabel {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl SerreWeightLabel {
    pub fn new(p: Prime, w: &HighestWeight) -> Result<Self, WeightError> {
        if !in_x1(p, w) {
            return Err(WeightError::NotRestricted {
                a: w.a,
                b: w.b,
                c: w.c,
                p: p.get(),
            });
        }
        Ok(SerreWeightLabel {
            a: w.a,
            b: w.b,
            c: w.c.rem_euclid(2 * (p.get() - 1)),
        })
    }

    pub fn weight(&self) -> HighestWeight {
        HighestWeight {
            a: self.a,
            b: self.b,
            c: self.c,
        }
    }
}

impl fmt::Display for SerreWeightLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({},{};{})", self.a, self.b, self.c)
    }
}

/// Two restricted weights give the same Serre weight iff they differ by
/// (p − 1)X⁰(T), i.e. only in c and by a multiple of 2(p − 1).
pub fn serre_weight_equiv(
    p: Prime,
    l: &HighestWeight,
    m: &HighestWeight,
) -> Result<bool, WeightError> {
    for w in [l, m] {
        if !in_x1(p, w) {
            return Err(WeightError::NotRestricted {
                a: w.a,
                b: w.b,
                c: w.c,
                p: p.get(),
            });
        }
    }
    Ok(l.a == m.a && l.b == m.b && (l.c - m.c).rem_euclid(2 * (p.get() - 1)) == 0)
}

/// The C1 partner (p − b − 3, p − a − 3; c). Parity is preserved.
pub fn companion(p: Prime, w: &HighestWeight) -> HighestWeight {
    let p = p.get();
    HighestWeight {
        a: p - w.b - 3,
        b: p - w.a - 3,
        c: w.c,
    }
}

/// Constituents of the mod-p reduction of the Weyl module W(λ), socle first.
pub fn weyl_constituents(
    p: Prime,
    w: &HighestWeight,
) -> Result<Vec<SerreWeightLabel>, WeightError> {
    let top = SerreWeightLabel::new(p, w)?;
    match shifted_alcove(p, w) {
        Alcove::C0 => Ok(vec![top]),
        Alcove::C1 => Ok(vec![top, SerreWeightLabel::new(p, &companion(p, w))?]),
        alcove => Err(WeightError::Unsupported {
            a: w.a,
            b: w.b,
            c: w.c,
            alcove,
        }),
    }
}

/// Dimension (m1 − m2)(m1 + m2) m1 m2 / 6 of the archimedean representation.
pub fn weyl_dim(m1: i64, m2: i64) -> Result<i64, WeightError> {
    if !(m1 > m2 && m2 > 0) {
        return Err(WeightError::Ordering { m1, m2 });
    }
    Ok((m1 - m2) * (m1 + m2) * m1 * m2 / 6)
}

fn check_parity(m1: i64, m2: i64, w: i64) -> Result<(), WeightError> {
    if (m1 + m2 - w - 1).rem_euclid(2) != 0 {
        return Err(WeightError::InvalidParity {
            a: m1 - 2,
            b: m2 - 1,
            c: w,
        });
    }
    Ok(())
}

/// Hodge–Tate weights {δ, δ+m2, δ+m1, δ+m1+m2}, δ = (w + 3 − m1 − m2)/2,
/// in increasing order.
pub fn ht_from_parameter(w: i64, m1: i64, m2: i64) -> Result<[i64; 4], WeightError> {
    check_parity(m1, m2, w)?;
    if !(m1 > m2 && m2 > 0) {
        return Err(WeightError::Ordering { m1, m2 });
    }
    let d = (w + 3 - m1 - m2) / 2;
    Ok([d, d + m2, d + m1, d + m1 + m2])
}

/// (m1, m2; w) ↦ (m1 − 2, m2 − 1; w).
pub fn hc_to_weight(m1: i64, m2: i64, w: i64) -> Result<HighestWeight, WeightError> {
    check_parity(m1, m2, w)?;
    HighestWeight::new(m1 - 2, m2 - 1, w)
}
