//! Symbolic mod-p local representations into GSp4(F̄_p).
//!
//! A representation is stored by its inertial parameters (one normal form per
//! type), a few named unramified twists, and extension flags on the slots that
//! can carry a non-split extension. Blocks, inertia patterns and associated
//! weights are all derived from that data.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charlattice::{make_char, CharError, InertiaCharacter, Prime, Unramified};
use crate::weights::{hc_to_weight, in_x1, shifted_alcove, Alcove, HighestWeight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error(transparent)]
    Char(#[from] CharError),
    #[error("{0}")]
    Invalid(String),
    #[error("flag {flag} on slot {slot} is illegal: {reason}")]
    IllegalFlag {
        slot: FlagSlot,
        flag: ExtensionFlag,
        reason: String,
    },
    #[error("slot {slot} does not exist for {rep_type} representations")]
    UnknownSlot { slot: FlagSlot, rep_type: RepType },
    #[error("malformed block list: {0}")]
    Malformed(String),
    #[error("no associated p-restricted weight for this representation")]
    NoAssociatedWeight,
    #[error("weight {weight} is not the weight associated to this representation")]
    WeightMismatch { weight: HighestWeight },
    #[error("weight {weight} has shifted alcove {alcove:?}; the check needs a generic C1 weight")]
    OutOfDomain {
        weight: HighestWeight,
        alcove: Alcove,
    },
    #[error("weight {weight} lies in C1 but is not generic")]
    NotGeneric { weight: HighestWeight },
}

/// Type of a class in H¹ of a character, as far as crystalline lifting cares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExtensionFlag {
    #[serde(rename = "unramified")]
    Unramified,
    #[serde(rename = "peu")]
    PeuRamifiee,
    #[serde(rename = "tres")]
    TresRamifiee,
    #[serde(rename = "ramified")]
    Ramified,
}

impl ExtensionFlag {
    /// Whether the flag raises the weight of a lift by p − 1.
    pub fn raises(self) -> bool {
        matches!(self, ExtensionFlag::TresRamifiee | ExtensionFlag::Ramified)
    }

    /// Checks the flag against the character the extension class lives over.
    pub fn check_ratio(self, ratio: &InertiaCharacter) -> Result<(), String> {
        match self {
            ExtensionFlag::PeuRamifiee => Ok(()),
            ExtensionFlag::TresRamifiee if ratio.is_cyclotomic_power(1) => Ok(()),
            ExtensionFlag::TresRamifiee => {
                Err(format!("tres flag requires ratio eps, got {ratio}"))
            }
            ExtensionFlag::Ramified | ExtensionFlag::Unramified if ratio.is_trivial() => Ok(()),
            _ => Err(format!(
                "{self} flag requires the trivial ratio, got {ratio}"
            )),
        }
    }
}

impl fmt::Display for ExtensionFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtensionFlag::Unramified => "unramified",
            ExtensionFlag::PeuRamifiee => "peu",
            ExtensionFlag::TresRamifiee => "tres",
            ExtensionFlag::Ramified => "ramified",
        })
    }
}

/// Extension slots that can carry a flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlagSlot {
    /// Borel: between χ3 and χ4 (and dually χ1 and χ2), ratio ψ1ψ2⁻¹ε^y.
    Tau0,
    /// Borel: ratio ψ2ε^x.
    BX,
    /// Borel: ratio ψ2²ψ1⁻¹ε^{x−y}.
    BXMinusY,
    /// Borel: ratio ψ1ε^{x+y}.
    BXPlusY,
    /// Siegel: between the outer character and the induced block. Its dual
    /// slot is determined by this one.
    Tau1,
    /// Siegel: outer characters, ratio ψ2ε^{x+y}.
    Tau3,
}

impl FlagSlot {
    pub const ALL: [FlagSlot; 6] = [
        FlagSlot::Tau0,
        FlagSlot::BX,
        FlagSlot::BXMinusY,
        FlagSlot::BXPlusY,
        FlagSlot::Tau1,
        FlagSlot::Tau3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FlagSlot::Tau0 => "tau0",
            FlagSlot::BX => "b_x",
            FlagSlot::BXMinusY => "b_x_minus_y",
            FlagSlot::BXPlusY => "b_x_plus_y",
            FlagSlot::Tau1 => "tau1",
            FlagSlot::Tau3 => "tau3",
        }
    }

    pub fn parse(s: &str) -> Option<FlagSlot> {
        FlagSlot::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for FlagSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RepType {
    BorelOrdinary,
    SiegelOrdinary,
    KlingenOrdinary,
    Endoscopic,
    Irreducible,
}

impl RepType {
    pub const ALL: [RepType; 5] = [
        RepType::BorelOrdinary,
        RepType::SiegelOrdinary,
        RepType::KlingenOrdinary,
        RepType::Endoscopic,
        RepType::Irreducible,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RepType::BorelOrdinary => "borel",
            RepType::SiegelOrdinary => "siegel",
            RepType::KlingenOrdinary => "klingen",
            RepType::Endoscopic => "endoscopic",
            RepType::Irreducible => "irreducible",
        }
    }

    pub fn parse(s: &str) -> Option<RepType> {
        RepType::ALL.into_iter().find(|t| t.name() == s)
    }

    pub fn slots(self) -> &'static [FlagSlot] {
        match self {
            RepType::BorelOrdinary => &FlagSlot::ALL[..4],
            RepType::SiegelOrdinary => &FlagSlot::ALL[4..],
            _ => &[],
        }
    }
}

impl fmt::Display for RepType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inertial parameters of the normal form for each type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RepParams {
    /// Characters ε^{x+y+δ}, ε^{x+δ}, ε^{y+δ}, ε^δ (before twists), 0 ≤ x, y ≤ p−1.
    Borel { x: i64, y: i64, delta: i64 },
    /// ε^{x+y+δ} ⊕ Ind ω2^{x+yp} ⊗ ε^δ ⊕ ε^δ, 0 ≤ y < x ≤ p−1.
    Siegel { x: i64, y: i64, delta: i64 },
    /// Ind ω2^{x+yp} ⊕ its dual twisted by ε^{w+3}, 0 ≤ y < x ≤ p−1, 0 ≤ w ≤ p−2.
    Klingen { x: i64, y: i64, w: i64 },
    /// (Ind ω2^{b+ap} ⊕ Ind ω2^{d+cp}) ⊗ ε^e with equal determinants.
    Endoscopic {
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        e: i64,
    },
    /// Ind ω4^exponent.
    Irreducible { exponent: i64 },
}

impl RepParams {
    pub fn rep_type(&self) -> RepType {
        match self {
            RepParams::Borel { .. } => RepType::BorelOrdinary,
            RepParams::Siegel { .. } => RepType::SiegelOrdinary,
            RepParams::Klingen { .. } => RepType::KlingenOrdinary,
            RepParams::Endoscopic { .. } => RepType::Endoscopic,
            RepParams::Irreducible { .. } => RepType::Irreducible,
        }
    }
}

/// Named unramified twists ψ0, ψ1, ψ2. Only Borel uses all three; Siegel
/// needs ψ2 = ψ1²; the semisimple types use ψ0 alone.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Twists {
    #[serde(default)]
    pub psi0: Unramified,
    #[serde(default)]
    pub psi1: Unramified,
    #[serde(default)]
    pub psi2: Unramified,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    /// ε^exponent.
    Char(i64),
    /// Ind ω2^exponent, stored as the orbit element with increasing digits.
    Induced2(i64),
    /// Ind ω4^exponent, stored as the smallest orbit element.
    Induced4(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Block {
    pub kind: BlockKind,
    pub twist: Unramified,
}

impl Block {
    pub fn char(p: Prime, e: i64, twist: Unramified) -> Block {
        Block {
            kind: BlockKind::Char(e.rem_euclid(p.get() - 1)),
            twist,
        }
    }

    pub fn induced2(p: Prime, e: i64, twist: Unramified) -> Block {
        Block {
            kind: BlockKind::Induced2(canonical_induced2(p, e)),
            twist,
        }
    }

    pub fn induced4(p: Prime, e: i64, twist: Unramified) -> Block {
        let n = p.order(4);
        let mut cur = e.rem_euclid(n);
        let mut best = cur;
        for _ in 0..3 {
            cur = crate::charlattice::mul_mod(cur, p.get(), n);
            best = best.min(cur);
        }
        Block {
            kind: BlockKind::Induced4(best),
            twist,
        }
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            BlockKind::Char(_) => 1,
            BlockKind::Induced2(_) => 2,
            BlockKind::Induced4(_) => 4,
        }
    }

    /// Inertial exponents of the block at level `f` (2 or 4).
    fn exponents_at(&self, p: Prime, f: u32) -> Vec<i64> {
        let n = p.order(f);
        let pp = p.get();
        match self.kind {
            BlockKind::Char(e) => vec![(e * (n / (pp - 1))).rem_euclid(n)],
            BlockKind::Induced2(e) => {
                let s = n / p.order(2);
                vec![(e * s) % n, crate::charlattice::mul_mod(e * s, pp, n)]
            }
            BlockKind::Induced4(e) => {
                assert_eq!(f, 4);
                let mut v = vec![e];
                for _ in 0..3 {
                    let last = *v.last().unwrap();
                    v.push(crate::charlattice::mul_mod(last, pp, n));
                }
                v
            }
        }
    }
}

fn canonical_induced2(p: Prime, e: i64) -> i64 {
    let pp = p.get();
    let e = e.rem_euclid(p.order(2));
    let (e0, e1) = (e % pp, e / pp);
    if e0 < e1 {
        e
    } else {
        e1 + e0 * pp
    }
}

/// Digits (b, a) with b ≤ a of an induced block Ind ω2^{b+ap}.
pub fn induced2_digits(p: Prime, e: i64) -> (i64, i64) {
    let e = canonical_induced2(p, e);
    (e % p.get(), e / p.get())
}

/// Exponents of inertial characters of the semisimplification at a common
/// level, sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InertiaPattern {
    pub level: u32,
    pub exponents: Vec<i64>,
}

impl InertiaPattern {
    pub fn from_blocks(p: Prime, blocks: &[Block]) -> InertiaPattern {
        let level = if blocks
            .iter()
            .any(|b| matches!(b.kind, BlockKind::Induced4(_)))
        {
            4
        } else {
            2
        };
        let mut exponents: Vec<i64> = blocks
            .iter()
            .flat_map(|b| b.exponents_at(p, level))
            .collect();
        exponents.sort_unstable();
        InertiaPattern { level, exponents }
    }

    /// The pattern written with ε-exponents mod p − 1, when every slot is a
    /// power of ε.
    pub fn cyclotomic_exponents(&self, p: Prime) -> Option<Vec<i64>> {
        let s = p.order(self.level) / (p.get() - 1);
        let mut out = Vec::new();
        for e in &self.exponents {
            if e % s != 0 {
                return None;
            }
            out.push(e / s);
        }
        out.sort_unstable();
        Some(out)
    }
}

impl fmt::Display for InertiaPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|e| e.to_string()).collect();
        write!(f, "w{}^{{{}}}", self.level, parts.join(","))
    }
}

/// r̄|G_{Q_p} in one of the five normal forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRep", into = "RawRep")]
pub struct LocalRepresentation {
    p: Prime,
    params: RepParams,
    twists: Twists,
    flags: BTreeMap<FlagSlot, ExtensionFlag>,
}

#[derive(Serialize, Deserialize)]
struct RawRep {
    prime: Prime,
    params: RepParams,
    #[serde(default)]
    twists: Twists,
    #[serde(default)]
    flags: BTreeMap<FlagSlot, ExtensionFlag>,
}

impl TryFrom<RawRep> for LocalRepresentation {
    type Error = RepError;
    fn try_from(r: RawRep) -> Result<Self, RepError> {
        LocalRepresentation::new(r.prime, r.params, r.twists, r.flags)
    }
}

impl From<LocalRepresentation> for RawRep {
    fn from(r: LocalRepresentation) -> RawRep {
        RawRep {
            prime: r.p,
            params: r.params,
            twists: r.twists,
            flags: r.flags,
        }
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, RepError> {
    Err(RepError::Invalid(msg.into()))
}

fn twist_isomorphic(p: Prime, u: i64, v: i64) -> bool {
    let q = p.get() + 1;
    (v - u).rem_euclid(q) == 0 || (v + u).rem_euclid(q) == 0
}

impl LocalRepresentation {
    pub fn new(
        p: Prime,
        params: RepParams,
        twists: Twists,
        flags: BTreeMap<FlagSlot, ExtensionFlag>,
    ) -> Result<Self, RepError> {
        let pp = p.get();
        let digit = |v: i64| (0..pp).contains(&v);
        let mut params = params;
        match &mut params {
            RepParams::Borel { x, y, .. } => {
                if !digit(*x) || !digit(*y) {
                    return invalid(format!(
                        "borel exponents need 0 <= x, y <= p-1, got ({x}, {y})"
                    ));
                }
            }
            RepParams::Siegel { x, y, .. } => {
                if !(0 <= *y && y < x && digit(*x)) {
                    return invalid(format!(
                        "siegel exponents need 0 <= y < x <= p-1, got ({x}, {y})"
                    ));
                }
                if twists.psi2 != twists.psi1.pow(2) {
                    return invalid("siegel similitude requires psi2 = psi1^2");
                }
            }
            RepParams::Klingen { x, y, w } => {
                if !(0 <= *y && y < x && digit(*x)) {
                    return invalid(format!(
                        "klingen exponents need 0 <= y < x <= p-1, got ({x}, {y})"
                    ));
                }
                if !(0..=pp - 2).contains(w) {
                    return invalid(format!("klingen weight needs 0 <= w <= p-2, got {w}"));
                }
                if (*x + *y - *w - 1).rem_euclid(2) != 0 {
                    return invalid("klingen parity requires x + y = w + 1 mod 2");
                }
            }
            RepParams::Endoscopic { a, b, c, d, .. } => {
                if !(0 <= *b && b < a && digit(*a)) || !(0 <= *d && d < c && digit(*c)) {
                    return invalid(
                        "endoscopic digits need 0 <= b < a <= p-1 and 0 <= d < c <= p-1",
                    );
                }
                if (*a + *b - *c - *d).rem_euclid(pp - 1) != 0 {
                    return invalid(
                        "endoscopic blocks need equal determinants: a + b = c + d mod p-1",
                    );
                }
                if twist_isomorphic(p, *b + *a * pp, *d + *c * pp) {
                    return invalid("endoscopic blocks must not be twists of each other");
                }
                if *a + *b < *c + *d {
                    std::mem::swap(a, c);
                    std::mem::swap(b, d);
                }
            }
            RepParams::Irreducible { exponent } => {
                let n = p.order(4);
                *exponent = exponent.rem_euclid(n);
                if *exponent % (pp + 1) != 0 {
                    return invalid("irreducible exponent must be divisible by p+1");
                }
                if *exponent % (pp * pp + 1) == 0 {
                    return invalid("irreducible exponent must not be divisible by p^2+1");
                }
            }
        }
        let t = params.rep_type();
        if !matches!(t, RepType::BorelOrdinary | RepType::SiegelOrdinary)
            && !(twists.psi1.is_trivial() && twists.psi2.is_trivial())
        {
            return invalid(format!("{t} representations only take the psi0 twist"));
        }
        let r = LocalRepresentation {
            p,
            params,
            twists,
            flags,
        };
        for (&slot, &flag) in &r.flags {
            if !t.slots().contains(&slot) {
                return Err(RepError::UnknownSlot { slot, rep_type: t });
            }
            if slot == FlagSlot::Tau1 {
                if flag != ExtensionFlag::PeuRamifiee {
                    return Err(RepError::IllegalFlag {
                        slot,
                        flag,
                        reason: "the induced-block extension only takes peu".into(),
                    });
                }
                continue;
            }
            let ratio = r.slot_ratio(slot).expect("slot checked above");
            flag.check_ratio(&ratio)
                .map_err(|reason| RepError::IllegalFlag { slot, flag, reason })?;
        }
        Ok(r)
    }

    pub fn borel(p: Prime, x: i64, y: i64, delta: i64) -> Result<Self, RepError> {
        Self::new(
            p,
            RepParams::Borel { x, y, delta },
            Twists::default(),
            BTreeMap::new(),
        )
    }

    pub fn siegel(p: Prime, x: i64, y: i64, delta: i64) -> Result<Self, RepError> {
        Self::new(
            p,
            RepParams::Siegel { x, y, delta },
            Twists::default(),
            BTreeMap::new(),
        )
    }

    pub fn klingen(p: Prime, x: i64, y: i64, w: i64) -> Result<Self, RepError> {
        Self::new(
            p,
            RepParams::Klingen { x, y, w },
            Twists::default(),
            BTreeMap::new(),
        )
    }

    pub fn endoscopic(p: Prime, a: i64, b: i64, c: i64, d: i64, e: i64) -> Result<Self, RepError> {
        let params = RepParams::Endoscopic { a, b, c, d, e };
        Self::new(p, params, Twists::default(), BTreeMap::new())
    }

    pub fn irreducible(p: Prime, exponent: i64) -> Result<Self, RepError> {
        Self::new(
            p,
            RepParams::Irreducible { exponent },
            Twists::default(),
            BTreeMap::new(),
        )
    }

    /// Same representation with one more flag, revalidated.
    pub fn with_flag(&self, slot: FlagSlot, flag: ExtensionFlag) -> Result<Self, RepError> {
        let mut flags = self.flags.clone();
        flags.insert(slot, flag);
        Self::new(self.p, self.params, self.twists.clone(), flags)
    }

    pub fn with_twists(&self, twists: Twists) -> Result<Self, RepError> {
        Self::new(self.p, self.params, twists, self.flags.clone())
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn params(&self) -> &RepParams {
        &self.params
    }

    pub fn twists(&self) -> &Twists {
        &self.twists
    }

    pub fn flags(&self) -> &BTreeMap<FlagSlot, ExtensionFlag> {
        &self.flags
    }

    /// `None` means the slot is split.
    pub fn flag(&self, slot: FlagSlot) -> Option<ExtensionFlag> {
        self.flags.get(&slot).copied()
    }

    pub fn rep_type(&self) -> RepType {
        self.params.rep_type()
    }

    fn eps(&self, k: i64, u: Unramified) -> InertiaCharacter {
        make_char(self.p, 1, k, u).expect("level 1 is valid")
    }

    /// The character an extension slot lives over, or `None` if the slot is
    /// not a character extension for this type.
    pub fn slot_ratio(&self, slot: FlagSlot) -> Option<InertiaCharacter> {
        let Twists { psi1, psi2, .. } = &self.twists;
        match (self.params, slot) {
            (RepParams::Borel { y, .. }, FlagSlot::Tau0) => {
                Some(self.eps(y, psi1.mul(&psi2.inv())))
            }
            (RepParams::Borel { x, .. }, FlagSlot::BX) => Some(self.eps(x, psi2.clone())),
            (RepParams::Borel { x, y, .. }, FlagSlot::BXMinusY) => {
                Some(self.eps(x - y, psi2.pow(2).mul(&psi1.inv())))
            }
            (RepParams::Borel { x, y, .. }, FlagSlot::BXPlusY) => {
                Some(self.eps(x + y, psi1.clone()))
            }
            (RepParams::Siegel { x, y, .. }, FlagSlot::Tau3) => Some(self.eps(x + y, psi2.clone())),
            _ => None,
        }
    }

    /// Semisimple blocks in normal-form order.
    pub fn blocks(&self) -> Vec<Block> {
        let p = self.p;
        let pp = p.get();
        let Twists { psi0, psi1, psi2 } = &self.twists;
        match self.params {
            RepParams::Borel { x, y, delta } => vec![
                Block::char(p, x + y + delta, psi0.mul(psi1)),
                Block::char(p, x + delta, psi0.mul(psi2)),
                Block::char(p, y + delta, psi0.mul(psi1).mul(&psi2.inv())),
                Block::char(p, delta, psi0.clone()),
            ],
            RepParams::Siegel { x, y, delta } => vec![
                Block::char(p, x + y + delta, psi0.mul(psi2)),
                Block::induced2(p, x + y * pp + delta * (pp + 1), psi0.mul(psi1)),
                Block::char(p, delta, psi0.clone()),
            ],
            RepParams::Klingen { x, y, w } => {
                let u = x + y * pp;
                vec![
                    Block::induced2(p, u, psi0.clone()),
                    Block::induced2(p, -u + (w + 3) * (pp + 1), psi0.clone()),
                ]
            }
            RepParams::Endoscopic { a, b, c, d, e } => vec![
                Block::induced2(p, b + a * pp + e * (pp + 1), psi0.clone()),
                Block::induced2(p, d + c * pp + e * (pp + 1), psi0.clone()),
            ],
            RepParams::Irreducible { exponent } => vec![Block::induced4(p, exponent, psi0.clone())],
        }
    }

    /// Similitude character as (ε-exponent mod p − 1, unramified part).
    pub fn similitude(&self) -> (i64, Unramified) {
        let pp = self.p.get();
        let Twists { psi0, psi1, psi2 } = &self.twists;
        let (k, u) = match self.params {
            RepParams::Borel { x, y, delta } => (x + y + 2 * delta, psi0.pow(2).mul(psi1)),
            RepParams::Siegel { x, y, delta } => (x + y + 2 * delta, psi0.pow(2).mul(psi2)),
            RepParams::Klingen { w, .. } => (w + 3, psi0.pow(2)),
            RepParams::Endoscopic { a, b, e, .. } => (a + b + 2 * e, psi0.pow(2)),
            RepParams::Irreducible { exponent } => (exponent / (pp + 1), psi0.pow(2)),
        };
        (k.rem_euclid(pp - 1), u)
    }
}

/// Decides the type from the semisimple blocks alone.
pub fn classify_blocks(p: Prime, blocks: &[Block]) -> Result<RepType, RepError> {
    let dim: usize = blocks.iter().map(Block::dim).sum();
    if dim != 4 {
        return Err(RepError::Malformed(format!(
            "total dimension {dim}, expected 4"
        )));
    }
    let pp = p.get();
    let chars: Vec<(i64, &Unramified)> = blocks
        .iter()
        .filter_map(|b| match b.kind {
            BlockKind::Char(e) => Some((e, &b.twist)),
            _ => None,
        })
        .collect();
    let ind2: Vec<(i64, &Unramified)> = blocks
        .iter()
        .filter_map(|b| match b.kind {
            BlockKind::Induced2(e) => Some((e, &b.twist)),
            _ => None,
        })
        .collect();
    for (e, _) in &ind2 {
        if crate::charlattice::mul_mod(*e, pp, p.order(2)) == *e {
            return Err(RepError::Malformed(format!("Ind w2^{e} is reducible")));
        }
    }
    let prod = |a: &(i64, &Unramified), b: &(i64, &Unramified)| {
        ((a.0 + b.0).rem_euclid(pp - 1), a.1.mul(b.1))
    };
    let det2 = |x: &(i64, &Unramified)| (x.0.rem_euclid(pp - 1), x.1.pow(2));
    match (chars.len(), ind2.len(), blocks.len()) {
        (4, 0, 4) => {
            let pairings = [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)];
            if pairings
                .iter()
                .any(|&(i, j, k, l)| prod(&chars[i], &chars[j]) == prod(&chars[k], &chars[l]))
            {
                Ok(RepType::BorelOrdinary)
            } else {
                Err(RepError::Malformed(
                    "no symplectic pairing of the four characters".into(),
                ))
            }
        }
        (2, 1, 3) => {
            if prod(&chars[0], &chars[1]) == det2(&ind2[0]) {
                Ok(RepType::SiegelOrdinary)
            } else {
                Err(RepError::Malformed(
                    "outer characters do not pair to det of the induced block".into(),
                ))
            }
        }
        (0, 2, 2) => {
            if twist_isomorphic(p, ind2[0].0, ind2[1].0) {
                Ok(RepType::KlingenOrdinary)
            } else if det2(&ind2[0]) == det2(&ind2[1]) {
                Ok(RepType::Endoscopic)
            } else {
                Err(RepError::Malformed(
                    "induced blocks neither dual nor of equal determinant".into(),
                ))
            }
        }
        (0, 0, 1) => match blocks[0].kind {
            BlockKind::Induced4(e) if e % (pp * pp + 1) != 0 => Ok(RepType::Irreducible),
            _ => Err(RepError::Malformed("level-4 block is reducible".into())),
        },
        _ => Err(RepError::Malformed("unrecognized block shape".into())),
    }
}

pub fn classify(r: &LocalRepresentation) -> Result<RepType, RepError> {
    classify_blocks(r.p, &r.blocks())
}

pub fn inertia_pattern(r: &LocalRepresentation) -> InertiaPattern {
    InertiaPattern::from_blocks(r.p, &r.blocks())
}

/// Representative in [1, p − 1] of an exponent mod p − 1.
fn hat(p: i64, x: i64) -> i64 {
    let r = x.rem_euclid(p - 1);
    if r == 0 {
        p - 1
    } else {
        r
    }
}

/// The Harish-Chandra data (m1, m2, w) of the weight attached to r, before
/// any restrictedness check.
fn hc_data(r: &LocalRepresentation) -> Option<(i64, i64, i64)> {
    let pp = r.p.get();
    match r.params {
        RepParams::Borel { x, y, delta } => {
            let (xh, yh) = (hat(pp, x), hat(pp, y));
            if xh == pp - 1 && yh == pp - 1 {
                return None;
            }
            let m1 = if xh > yh { xh } else { xh + pp - 1 };
            Some((m1, yh, 2 * delta + m1 + yh - 3))
        }
        RepParams::Siegel { x, y, delta } => Some((x, y, 2 * delta + x + y - 3)),
        RepParams::Klingen { x, y, w } => {
            let (mut x, mut y) = (x, y);
            if 2 * y < w + 3 {
                let (x2, y2) = (w + 3 - y, w + 3 - x);
                if !(0 <= y2 && y2 < x2 && x2 < pp) {
                    return None;
                }
                x = x2;
                y = y2;
            }
            Some((x + y - (w + 3), x - y, w))
        }
        RepParams::Endoscopic { a, b, c, d, e } => {
            let w = a + b - 3 + 2 * e;
            let (m1, m2) = if a + b == c + d {
                match b.cmp(&d) {
                    std::cmp::Ordering::Less => (c - b, d - b),
                    std::cmp::Ordering::Greater => (a - d, b - d),
                    std::cmp::Ordering::Equal => return None,
                }
            } else {
                // second block rewritten with digits (c − 1, d + p)
                let (c1, d1) = (c - 1, d + pp);
                match b.cmp(&c1) {
                    std::cmp::Ordering::Less => (d1 - b, c1 - b),
                    std::cmp::Ordering::Greater => (a - c1, b - c1),
                    std::cmp::Ordering::Equal => return None,
                }
            };
            Some((m1, m2, w))
        }
        RepParams::Irreducible { .. } => None,
    }
}

/// The weight λ attached to r, or `None` when no p-restricted one exists.
pub fn associated_weight(r: &LocalRepresentation) -> Option<HighestWeight> {
    let (m1, m2, w) = hc_data(r)?;
    if m2 <= 0 || m1 <= m2 {
        return None;
    }
    let lambda = hc_to_weight(m1, m2, w).ok()?;
    in_x1(r.p, &lambda).then_some(lambda)
}

/// Genericity of a weight for a representation of type `t`.
pub fn is_generic_weight(t: RepType, p: Prime, lambda: &HighestWeight) -> bool {
    let (m1, m2) = lambda.hc_pair();
    match shifted_alcove(p, lambda) {
        Alcove::C0 => true,
        Alcove::C1 => m1 + m2 > p.get() + 1 && (t != RepType::KlingenOrdinary || m1 < p.get() - 1),
        _ => false,
    }
}

/// Genericity of r at λ; λ must be the weight associated to r.
pub fn is_generic(r: &LocalRepresentation, lambda: &HighestWeight) -> Result<bool, RepError> {
    match associated_weight(r) {
        Some(l) if l == *lambda => Ok(is_generic_weight(r.rep_type(), r.p, lambda)),
        Some(_) => Err(RepError::WeightMismatch { weight: *lambda }),
        None => Err(RepError::NoAssociatedWeight),
    }
}

fn check_generic_c1(t: RepType, p: Prime, lambda: &HighestWeight) -> Result<(), RepError> {
    match shifted_alcove(p, lambda) {
        Alcove::C1 if is_generic_weight(t, p, lambda) => Ok(()),
        Alcove::C1 => Err(RepError::NotGeneric { weight: *lambda }),
        alcove => Err(RepError::OutOfDomain {
            weight: *lambda,
            alcove,
        }),
    }
}

/// Inertia patterns a Fontaine–Laffaille lift with Harish-Chandra parameter
/// (p − m2, p − m1; w + 3) can reduce to, one per admissible shape.
pub fn fl_reduction_pattern(
    t: RepType,
    lambda: &HighestWeight,
    p: Prime,
) -> Result<Vec<InertiaPattern>, RepError> {
    check_generic_c1(t, p, lambda)?;
    let pp = p.get();
    let (m1, m2) = lambda.hc_pair();
    let w = lambda.c();
    let dp = (w + 3 + m1 + m2 - 2 * pp) / 2;
    let u = Unramified::trivial;
    let ind = pp - m1 + (pp - m2) * pp + dp * (pp + 1);
    let pats: Vec<Vec<Block>> = match t {
        RepType::BorelOrdinary => vec![vec![
            Block::char(p, 2 * pp - m1 - m2 + dp, u()),
            Block::char(p, pp - m2 + dp, u()),
            Block::char(p, pp - m1 + dp, u()),
            Block::char(p, dp, u()),
        ]],
        RepType::SiegelOrdinary => vec![
            vec![
                Block::char(p, 2 * pp - m1 - m2 + dp, u()),
                Block::induced2(p, ind, u()),
                Block::char(p, dp, u()),
            ],
            vec![
                Block::char(p, pp - m2 + dp, u()),
                Block::induced2(p, ind, u()),
                Block::char(p, pp - m2 + dp, u()),
            ],
        ],
        RepType::KlingenOrdinary | RepType::Endoscopic => vec![vec![
            Block::induced2(p, ind, u()),
            Block::induced2(p, 2 * pp - m1 - m2 + dp * (pp + 1), u()),
        ]],
        RepType::Irreducible => {
            return Err(RepError::Invalid(
                "no reduction pattern for irreducible type".into(),
            ))
        }
    };
    Ok(pats
        .iter()
        .map(|bs| InertiaPattern::from_blocks(p, bs))
        .collect())
}

/// True when the inertia of r matches none of the FL patterns for its weight.
pub fn fl_obstruction_check(r: &LocalRepresentation) -> Result<bool, RepError> {
    let lambda = associated_weight(r).ok_or(RepError::NoAssociatedWeight)?;
    let pats = fl_reduction_pattern(r.rep_type(), &lambda, r.p)?;
    let mine = inertia_pattern(r);
    Ok(pats.iter().all(|q| *q != mine))
}

/// Every validated input of type `t` with trivial twists and no flags, one
/// per isomorphism class of the inertial data: exponents are taken in their
/// fundamental ranges and central twists mod p − 1.
pub fn enumerate_inputs(p: Prime, t: RepType) -> Vec<LocalRepresentation> {
    let pp = p.get();
    let mut out = Vec::new();
    let mut seen_reps = std::collections::HashSet::new();
    let mut push = |r: Result<LocalRepresentation, RepError>| {
        if let Ok(r) = r {
            if seen_reps.insert(r.clone()) {
                out.push(r);
            }
        }
    };
    match t {
        RepType::BorelOrdinary => {
            for x in 0..pp - 1 {
                for y in 0..pp - 1 {
                    for delta in 0..pp - 1 {
                        push(LocalRepresentation::borel(p, x, y, delta));
                    }
                }
            }
        }
        RepType::SiegelOrdinary => {
            for x in 1..pp {
                for y in 0..x {
                    for delta in 0..pp - 1 {
                        push(LocalRepresentation::siegel(p, x, y, delta));
                    }
                }
            }
        }
        RepType::KlingenOrdinary => {
            for x in 1..pp {
                for y in 0..x {
                    for w in 0..pp - 1 {
                        push(LocalRepresentation::klingen(p, x, y, w));
                    }
                }
            }
        }
        RepType::Endoscopic => {
            for a in 1..pp {
                for b in 0..a {
                    for c in 1..pp {
                        for d in 0..c {
                            if (a + b, b) < (c + d, d) {
                                continue;
                            }
                            for e in 0..pp - 1 {
                                push(LocalRepresentation::endoscopic(p, a, b, c, d, e));
                            }
                        }
                    }
                }
            }
        }
        RepType::Irreducible => {
            let mut seen = std::collections::BTreeSet::new();
            for a in (0..p.order(4)).step_by((pp + 1) as usize) {
                if let Ok(r) = LocalRepresentation::irreducible(p, a) {
                    if seen.insert(r.blocks()) {
                        out.push(r);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: i64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn classify_normal_forms() {
        let p = pr(5);
        let b = LocalRepresentation::borel(p, 3, 1, 0).unwrap();
        assert_eq!(classify(&b), Ok(RepType::BorelOrdinary));
        let s = LocalRepresentation::siegel(p, 3, 1, 2).unwrap();
        assert_eq!(classify(&s), Ok(RepType::SiegelOrdinary));
        let k = LocalRepresentation::klingen(pr(7), 6, 5, 2).unwrap();
        assert_eq!(classify(&k), Ok(RepType::KlingenOrdinary));
        let e = LocalRepresentation::endoscopic(pr(7), 5, 1, 4, 2, 0).unwrap();
        assert_eq!(classify(&e), Ok(RepType::Endoscopic));
        let i = LocalRepresentation::irreducible(p, 84).unwrap();
        assert_eq!(classify(&i), Ok(RepType::Irreducible));
    }

    #[test]
    fn malformed_blocks() {
        let p = pr(5);
        let u = Unramified::trivial;
        let three = vec![
            Block::char(p, 0, u()),
            Block::char(p, 1, u()),
            Block::char(p, 2, u()),
        ];
        assert!(classify_blocks(p, &three).is_err());
        let unpaired = vec![
            Block::char(p, 0, u()),
            Block::char(p, 0, u()),
            Block::char(p, 0, u()),
            Block::char(p, 1, u()),
        ];
        assert!(classify_blocks(p, &unpaired).is_err());
    }

    #[test]
    fn borel_pattern_folds_exponents() {
        let r = LocalRepresentation::borel(pr(5), 4, 3, -2).unwrap();
        let pat = inertia_pattern(&r);
        assert_eq!(pat.cyclotomic_exponents(pr(5)), Some(vec![1, 1, 2, 2]));
        let shifted = LocalRepresentation::borel(pr(5), 4, 3, 2).unwrap();
        assert_eq!(inertia_pattern(&shifted), pat);
    }

    #[test]
    fn klingen_pattern_is_dual_pair() {
        let p = pr(7);
        let (x, y, w) = (6, 5, 2);
        let r = LocalRepresentation::klingen(p, x, y, w).unwrap();
        let n = p.order(2);
        let u = x + y * 7;
        let mut want = vec![u, (u * 7) % n, (-u + (w + 3) * 8).rem_euclid(n)];
        want.push((want[2] * 7) % n);
        want.sort();
        assert_eq!(inertia_pattern(&r).exponents, want);
    }

    #[test]
    fn trivial_pattern() {
        let r = LocalRepresentation::borel(pr(5), 0, 0, 0).unwrap();
        assert_eq!(inertia_pattern(&r).exponents, vec![0; 4]);
    }

    #[test]
    fn associated_weights() {
        let b = LocalRepresentation::borel(pr(5), 4, 3, 0).unwrap();
        assert_eq!(associated_weight(&b), HighestWeight::new(2, 2, 4).ok());
        let k = LocalRepresentation::klingen(pr(7), 6, 5, 2).unwrap();
        assert_eq!(associated_weight(&k), HighestWeight::new(4, 0, 2).ok());
        // a > c > d > b with a + b = c + d
        let e = LocalRepresentation::endoscopic(pr(7), 5, 1, 4, 2, 0).unwrap();
        assert_eq!(associated_weight(&e), HighestWeight::new(1, 0, 3).ok());
        let z = LocalRepresentation::borel(pr(5), 0, 4, 1).unwrap();
        assert_eq!(associated_weight(&z), None);
    }

    #[test]
    fn genericity() {
        let b = LocalRepresentation::borel(pr(5), 4, 3, 0).unwrap();
        let l = associated_weight(&b).unwrap();
        assert_eq!(shifted_alcove(pr(5), &l), Alcove::C1);
        assert_eq!(is_generic(&b, &l), Ok(true));
        let b = LocalRepresentation::borel(pr(7), 5, 3, 0).unwrap();
        let l = associated_weight(&b).unwrap();
        assert_eq!(is_generic(&b, &l), Ok(false));
        let b = LocalRepresentation::borel(pr(7), 3, 1, 0).unwrap();
        let l = associated_weight(&b).unwrap();
        assert_eq!(shifted_alcove(pr(7), &l), Alcove::C0);
        assert_eq!(is_generic(&b, &l), Ok(true));
        let other = HighestWeight::new(0, 0, 0).unwrap();
        assert!(is_generic(&b, &other).is_err());
    }

    #[test]
    fn obstruction_examples() {
        for delta in 0..4 {
            let b = LocalRepresentation::borel(pr(5), 4, 3, delta).unwrap();
            assert_eq!(fl_obstruction_check(&b), Ok(true));
        }
        let e = LocalRepresentation::endoscopic(pr(7), 5, 1, 4, 2, 0).unwrap();
        assert!(matches!(
            fl_obstruction_check(&e),
            Err(RepError::OutOfDomain { .. })
        ));
        // (m1, m2) = (6, 1) sits on the wall x + y = p
        let k = LocalRepresentation::klingen(pr(7), 6, 5, 2).unwrap();
        assert!(fl_obstruction_check(&k).is_err());
    }

    #[test]
    fn flag_legality() {
        let p = pr(5);
        let b = LocalRepresentation::borel(p, 3, 1, 0).unwrap();
        assert!(b
            .with_flag(FlagSlot::Tau0, ExtensionFlag::TresRamifiee)
            .is_ok());
        assert!(b
            .with_flag(FlagSlot::BX, ExtensionFlag::TresRamifiee)
            .is_err());
        assert!(b
            .with_flag(FlagSlot::BX, ExtensionFlag::PeuRamifiee)
            .is_ok());
        assert!(b
            .with_flag(FlagSlot::Tau1, ExtensionFlag::PeuRamifiee)
            .is_err());
        let z = LocalRepresentation::borel(p, 0, 0, 0).unwrap();
        assert!(z.with_flag(FlagSlot::Tau0, ExtensionFlag::Ramified).is_ok());
        let twisted = b
            .with_twists(Twists {
                psi1: Unramified::named("u"),
                ..Twists::default()
            })
            .unwrap();
        assert!(twisted
            .with_flag(FlagSlot::Tau0, ExtensionFlag::TresRamifiee)
            .is_err());
    }

    #[test]
    fn validation_messages() {
        let p = pr(7);
        assert!(LocalRepresentation::klingen(p, 6, 4, 2).is_err());
        assert!(LocalRepresentation::endoscopic(p, 5, 1, 5, 1, 0).is_err());
        assert!(LocalRepresentation::irreducible(p, 1).is_err());
        let s = LocalRepresentation::new(
            p,
            RepParams::Siegel {
                x: 3,
                y: 1,
                delta: 0,
            },
            Twists {
                psi1: Unramified::named("u"),
                ..Twists::default()
            },
            BTreeMap::new(),
        );
        assert!(s.is_err());
    }

    #[test]
    fn endoscopic_normalizes_order() {
        let e = LocalRepresentation::endoscopic(pr(7), 2, 0, 6, 2, 0).unwrap();
        assert_eq!(
            *e.params(),
            RepParams::Endoscopic {
                a: 6,
                b: 2,
                c: 2,
                d: 0,
                e: 0
            }
        );
    }
}
