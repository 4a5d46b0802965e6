//! Dimension and torsion formulas for local Galois cohomology over Q_p, and
//! the twist ledger that records how an extension class forces a lift to be
//! raised.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charlattice::{InertiaCharacter, Prime};
use crate::localrep::ExtensionFlag;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("{0}")]
    IllegalFlag(String),
    #[error(
        "weight residue {b} with trivial twist is an exceptional case; use the peu/tres branches"
    )]
    ExceptionalCase { b: i64 },
    #[error("trivial twist has infinite conductor exponent")]
    InfiniteTorsion,
}

/// An extension class over `ratio`, described only by its flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterClassData {
    ratio: InertiaCharacter,
    flag: ExtensionFlag,
}

impl CharacterClassData {
    pub fn new(ratio: InertiaCharacter, flag: ExtensionFlag) -> Result<Self, CohomologyError> {
        if ratio.level() != 1 {
            return Err(CohomologyError::IllegalFlag(format!(
                "ratio {ratio} is not a level-1 character"
            )));
        }
        flag.check_ratio(&ratio)
            .map_err(CohomologyError::IllegalFlag)?;
        Ok(CharacterClassData { ratio, flag })
    }

    pub fn ratio(&self) -> &InertiaCharacter {
        &self.ratio
    }

    pub fn flag(&self) -> ExtensionFlag {
        self.flag
    }
}

/// Whether the unramified twist ψ attached to a class is trivial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiTag {
    Trivial,
    Nontrivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistLedgerEntry {
    pub psi: PsiTag,
    pub r: i64,
}

/// dim H¹(Q_p, r̄) for r̄ upper triangular with diagonal (c1, c2).
///
/// For a non-split extension H⁰ sees only c1 = 1 and H² only c2 = ε. A split
/// extension is the sum of the two character groups.
pub fn h1_dim_2dim(
    _p: Prime,
    c1: &InertiaCharacter,
    c2: &InertiaCharacter,
    nontrivial_ext: bool,
) -> i64 {
    let one = |c: &InertiaCharacter| i64::from(c.is_trivial());
    let eps = |c: &InertiaCharacter| i64::from(c.is_cyclotomic_power(1));
    if nontrivial_ext {
        2 + one(c1) + eps(c2)
    } else {
        2 + one(c1) + one(c2) + eps(c1) + eps(c2)
    }
}

/// dim H¹(Q_p, χ) for a single character.
pub fn h1_dim_char(chi: &InertiaCharacter) -> i64 {
    1 + i64::from(chi.is_trivial()) + i64::from(chi.is_cyclotomic_power(1))
}

/// dim H¹_f(Q_p, V) for V = ε̃^a ψ crystalline of Hodge–Tate weight a.
pub fn h1f_dim_char(p: Prime, a: i64, unramified_nontrivial: bool) -> Result<i64, CohomologyError> {
    let b = a.rem_euclid(p.get() - 1);
    if !unramified_nontrivial && (b == 0 || b == 1) {
        return Err(CohomologyError::ExceptionalCase { b });
    }
    Ok(if a > 0 { 1 } else { 0 })
}

/// Length of H¹(K, O(ψ))_tor given the conductor exponent c(ψ).
pub fn torsion_order(c_psi: Option<u32>) -> Result<u32, CohomologyError> {
    c_psi.ok_or(CohomologyError::InfiniteTorsion)
}

/// The pair (ψ, r) attached to a class: raising flags need a nontrivial
/// unramified twist and r = p − 1.
pub fn lift_twist(p: Prime, d: &CharacterClassData) -> Result<TwistLedgerEntry, CohomologyError> {
    d.flag
        .check_ratio(&d.ratio)
        .map_err(CohomologyError::IllegalFlag)?;
    Ok(if d.flag.raises() {
        TwistLedgerEntry {
            psi: PsiTag::Nontrivial,
            r: p.get() - 1,
        }
    } else {
        TwistLedgerEntry {
            psi: PsiTag::Trivial,
            r: 0,
        }
    })
}
