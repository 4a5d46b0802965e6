//! Hodge–Tate weight planning for crystalline lifts.
//!
//! Nothing here constructs a lift. A [`LiftPlan`] records the Hodge–Tate
//! weights of a lift built from the standard recipes (ordinary chains of
//! characters, inductions of short range, and sums of those), the blocks it is
//! assembled from, and the raising choices made along the way. Every plan can
//! be folded back to an inertia pattern and compared with the input.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charlattice::{mul_mod, Prime, Unramified};
use crate::galcoh::{lift_twist, CharacterClassData, CohomologyError, PsiTag};
use crate::localrep::{
    induced2_digits, Block, ExtensionFlag, FlagSlot, InertiaPattern, LocalRepresentation, RepParams,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("a {flag} class needs k >= 1")]
    RaiseRequired { flag: ExtensionFlag },
    #[error("need 0 <= b < a < p, got a = {a}, b = {b}")]
    Ordering { a: i64, b: i64 },
    #[error("{0}")]
    BadFlag(String),
    #[error("digits {digits:?} are not normalized: need a0 + a2 >= a1 + a3")]
    NotNormalized { digits: [i64; 4] },
    #[error("digits {digits:?}: a0 + a2 - a1 - a3 = {diff} is neither 0 nor p + 1")]
    NotSymplectic { digits: [i64; 4], diff: i64 },
    #[error("digit {0} out of range")]
    DigitRange(i64),
    #[error("no lift plan found with h1 <= {0}")]
    NoPlan(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    Ordinary,
    InducedShortRange,
    Composite,
}

/// One block of a planned lift.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlannedBlock {
    Char {
        weight: i64,
    },
    /// Induction of a level-2 crystalline character with weights hi > lo.
    Induced2 {
        hi: i64,
        lo: i64,
    },
    /// Induction of a level-4 crystalline character; `weights[i]` sits on p^i.
    Induced4 {
        weights: [i64; 4],
    },
}

impl PlannedBlock {
    fn weights(&self) -> Vec<i64> {
        match self {
            PlannedBlock::Char { weight } => vec![*weight],
            PlannedBlock::Induced2 { hi, lo } => vec![*hi, *lo],
            PlannedBlock::Induced4 { weights } => weights.to_vec(),
        }
    }

    /// The mod-p block this lift reduces to.
    pub fn reduction(&self, p: Prime) -> Block {
        let pp = p.get();
        let u = Unramified::trivial();
        match self {
            PlannedBlock::Char { weight } => Block::char(p, *weight, u),
            PlannedBlock::Induced2 { hi, lo } => Block::induced2(p, hi + lo * pp, u),
            PlannedBlock::Induced4 { weights } => {
                let n = p.order(4);
                let e = weights
                    .iter()
                    .rev()
                    .fold(0i64, |acc, &h| (mul_mod(acc, pp, n) + h).rem_euclid(n));
                Block::induced4(p, e, u)
            }
        }
    }
}

/// A raising choice: `value = residue + raise·(p − 1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub slot: String,
    pub residue: i64,
    pub raise: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub flag: Option<ExtensionFlag>,
    pub r: i64,
    pub psi: PsiTag,
}

impl LedgerEntry {
    fn plain(p: Prime, slot: &str, value: i64) -> LedgerEntry {
        let pm = p.get() - 1;
        LedgerEntry {
            slot: slot.to_string(),
            residue: value.rem_euclid(pm),
            raise: value.div_euclid(pm),
            flag: None,
            r: 0,
            psi: PsiTag::Trivial,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LiftPlan {
    /// Hodge–Tate weights h1 ≥ h2 ≥ h3 ≥ h4.
    pub ht: [i64; 4],
    pub certificate: Certificate,
    pub regular: bool,
    pub ledger: Vec<LedgerEntry>,
    pub blocks: Vec<PlannedBlock>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl LiftPlan {
    fn build(
        certificate: Certificate,
        blocks: Vec<PlannedBlock>,
        ledger: Vec<LedgerEntry>,
        notes: Vec<String>,
    ) -> LiftPlan {
        let mut hs: Vec<i64> = blocks.iter().flat_map(PlannedBlock::weights).collect();
        hs.sort_unstable_by(|a, b| b.cmp(a));
        let ht = [hs[0], hs[1], hs[2], hs[3]];
        let regular = ht.windows(2).all(|w| w[0] > w[1]);
        LiftPlan {
            ht,
            certificate,
            regular,
            ledger,
            blocks,
            notes,
        }
    }

    pub fn is_symplectic(&self) -> bool {
        self.ht[0] + self.ht[3] == self.ht[1] + self.ht[2]
    }

    pub fn reduction_pattern(&self, p: Prime) -> InertiaPattern {
        let bs: Vec<Block> = self.blocks.iter().map(|b| b.reduction(p)).collect();
        InertiaPattern::from_blocks(p, &bs)
    }

    /// (a, b, c) with HT = {a+b+c, a+c, b+c, c}.
    pub fn abc(&self) -> (i64, i64, i64) {
        let c = self.ht[3];
        (self.ht[1] - c, self.ht[2] - c, c)
    }

    pub fn twist_total(&self) -> i64 {
        self.ledger.iter().map(|e| e.raise.abs()).sum()
    }
}

/// The weight b + a(p − 1) + r of a raised character.
pub fn raised_weight(p: Prime, b: i64, a: i64, r: i64) -> i64 {
    b + a * (p.get() - 1) + r
}

/// Lift of a character ε^b carrying the class `d`: weight b + k(p − 1).
pub fn lift_char(
    p: Prime,
    b: i64,
    d: &CharacterClassData,
    k: i64,
) -> Result<(i64, crate::galcoh::TwistLedgerEntry), LiftError> {
    let entry = lift_twist(p, d)?;
    if d.flag().raises() && k < 1 {
        return Err(LiftError::RaiseRequired { flag: d.flag() });
    }
    Ok((raised_weight(p, b, k, 0), entry))
}

/// Lift of Ind ω2^{b+ap} twisted by ε̃^twist.
pub fn lift_2dim_irred(
    p: Prime,
    a: i64,
    b: i64,
    twist: i64,
) -> Result<((i64, i64), Certificate), LiftError> {
    if !(0 <= b && b < a && a < p.get()) {
        return Err(LiftError::Ordering { a, b });
    }
    Ok(((a + twist, b + twist), Certificate::InducedShortRange))
}

/// Lift of an extension of ε^b by ε^a carrying `flag`.
pub fn lift_2dim_red(
    p: Prime,
    a: i64,
    b: i64,
    flag: Option<ExtensionFlag>,
) -> Result<(i64, i64), LiftError> {
    let pm = p.get() - 1;
    let diff = (a - b).rem_euclid(pm);
    match flag {
        Some(ExtensionFlag::TresRamifiee) => {
            if diff != 1 {
                return Err(LiftError::BadFlag("tres flag requires ratio eps".into()));
            }
            Ok((b + p.get(), b))
        }
        Some(ExtensionFlag::Ramified | ExtensionFlag::Unramified) if diff != 0 => Err(
            LiftError::BadFlag("ramified/unramified flags require the trivial ratio".into()),
        ),
        _ if a > b => Ok((a, b)),
        _ => Ok((a + pm, b)),
    }
}

fn gap_ok(p: Prime, gap: i64, flag: Option<ExtensionFlag>) -> bool {
    let pm = p.get() - 1;
    gap > 0 && (!flag.is_some_and(ExtensionFlag::raises) || gap >= pm + gap.rem_euclid(pm))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThreeDimCase {
    /// Three characters ε^a, ε^b, ε^c in an extension chain.
    Red1 {
        a: i64,
        b: i64,
        c: i64,
        upper: Option<ExtensionFlag>,
        lower: Option<ExtensionFlag>,
    },
    /// Ind ω2^{b+ap} over ε^c, the extension carrying `alpha`.
    Red2 {
        a: i64,
        b: i64,
        c: i64,
        alpha: Option<ExtensionFlag>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeDimLift {
    /// Decreasing weights.
    pub weights: [i64; 3],
    pub raises: Vec<i64>,
}

/// Minimal raising of a three-dimensional chain.
pub fn lift_3dim(p: Prime, case: ThreeDimCase) -> Result<ThreeDimLift, LiftError> {
    let pm = p.get() - 1;
    let lift_above = |res: i64, floor: i64, flag: Option<ExtensionFlag>| {
        let mut k = 0;
        while !gap_ok(p, res + k * pm - floor, flag) {
            k += 1;
        }
        k
    };
    match case {
        ThreeDimCase::Red1 {
            a,
            b,
            c,
            upper,
            lower,
        } => {
            let (a, b, c) = (a.rem_euclid(pm), b.rem_euclid(pm), c.rem_euclid(pm));
            let k3 = lift_above(c, 0, None);
            let h3 = c + k3 * pm;
            let k2 = lift_above(b, h3, lower);
            let h2 = b + k2 * pm;
            let k1 = lift_above(a, h2, upper);
            Ok(ThreeDimLift {
                weights: [a + k1 * pm, h2, h3],
                raises: vec![k1, k2, k3],
            })
        }
        ThreeDimCase::Red2 { a, b, c, alpha } => {
            if !(0 <= b && b < a && a < p.get()) {
                return Err(LiftError::Ordering { a, b });
            }
            let r = if alpha.is_some_and(ExtensionFlag::raises) {
                pm
            } else {
                0
            };
            let c = c.rem_euclid(pm);
            let mut a2 = 0;
            while raised_weight(p, c, a2, r) <= 0 {
                a2 += 1;
            }
            let h3 = raised_weight(p, c, a2, r);
            let mut a1 = 0;
            while raised_weight(p, b, a1, 0) <= h3 {
                a1 += 1;
            }
            Ok(ThreeDimLift {
                weights: [raised_weight(p, a, a1, 0), raised_weight(p, b, a1, 0), h3],
                raises: vec![a1, a2],
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitSymmetrization {
    pub input: [i64; 4],
    pub output: [i64; 4],
    pub case: u8,
}

/// Rewrites the base-p digits of an ω4 exponent so that b0 + b2 = b1 + b3
/// without changing Σ b_i p^i.
pub fn symmetrize_digits(p: Prime, digits: [i64; 4]) -> Result<DigitSymmetrization, LiftError> {
    let pp = p.get();
    if let Some(&d) = digits.iter().find(|d| !(0..pp).contains(*d)) {
        return Err(LiftError::DigitRange(d));
    }
    let [a0, a1, a2, a3] = digits;
    let diff = a0 + a2 - a1 - a3;
    if diff < 0 {
        return Err(LiftError::NotNormalized { digits });
    }
    if diff == 0 {
        Ok(DigitSymmetrization {
            input: digits,
            output: digits,
            case: 0,
        })
    } else if diff == pp + 1 {
        let output = [a1 + a3 - a2 + 1, a1 + 1, a2, a3];
        Ok(DigitSymmetrization {
            input: digits,
            output,
            case: 1,
        })
    } else {
        Err(LiftError::NotSymplectic { digits, diff })
    }
}

fn digits4(p: Prime, a: i64) -> [i64; 4] {
    let pp = p.get();
    [
        a % pp,
        (a / pp) % pp,
        (a / (pp * pp)) % pp,
        a / (pp * pp * pp),
    ]
}

/// The Frobenius conjugates of ω4^a whose digits satisfy a0 + a2 ≥ a1 + a3,
/// as (exponent, digits), in orbit order starting from a.
pub fn normalize_frobenius(p: Prime, a: i64) -> Vec<(i64, [i64; 4])> {
    let n = p.order(4);
    let mut cur = a.rem_euclid(n);
    let mut out = Vec::new();
    for _ in 0..4 {
        let d = digits4(p, cur);
        if d[0] + d[2] >= d[1] + d[3] && !out.iter().any(|(e, _)| *e == cur) {
            out.push((cur, d));
        }
        cur = mul_mod(cur, p.get(), n);
    }
    out
}

fn first_at_least(floor: i64, residue: i64, m: i64) -> i64 {
    floor + (residue - floor).rem_euclid(m)
}

fn flag_entry(r: &LocalRepresentation, slot: FlagSlot, gap: i64) -> LedgerEntry {
    let p = r.prime();
    let pm = p.get() - 1;
    let flag = r.flag(slot);
    let (rr, psi) = match (flag, r.slot_ratio(slot)) {
        (Some(f), Some(ratio)) => CharacterClassData::new(ratio, f)
            .and_then(|d| lift_twist(p, &d))
            .map(|t| (t.r, t.psi))
            .unwrap_or((0, PsiTag::Trivial)),
        _ => (0, PsiTag::Trivial),
    };
    LedgerEntry {
        slot: slot.name().to_string(),
        residue: gap.rem_euclid(pm),
        raise: gap.div_euclid(pm),
        flag,
        r: rr,
        psi,
    }
}

/// Admissible weight pairs (hi, lo) for lifting an induced block, with
/// lo ≥ `lo_min` and hi ≤ `hi_max`. The second field says whether the pair
/// belongs to the family with hi − lo equal to the digit gap.
fn induced2_lifts(p: Prime, block: &Block, lo_min: i64, hi_max: i64) -> Vec<(i64, i64, bool)> {
    let pp = p.get();
    let e = match block.kind {
        crate::localrep::BlockKind::Induced2(e) => e,
        _ => return Vec::new(),
    };
    let (b, a) = induced2_digits(p, e);
    let mut out = Vec::new();
    for diff in 1..pp {
        for lo in lo_min..=hi_max - diff {
            let cand = Block::induced2(p, lo + diff + lo * pp, Unramified::trivial());
            if cand.kind == block.kind {
                out.push((lo + diff, lo, diff == a - b));
            }
        }
    }
    out
}

/// Every plan with h4 ≥ `h4_min` and h1 ≤ `h1_max`.
pub fn plans_in(r: &LocalRepresentation, h4_min: i64, h1_max: i64) -> Vec<LiftPlan> {
    let p = r.prime();
    let pp = p.get();
    let pm = pp - 1;
    let hat = |v: i64| {
        let v = v.rem_euclid(pm);
        if v == 0 {
            pm
        } else {
            v
        }
    };
    let mut plans = Vec::new();
    match *r.params() {
        RepParams::Borel { x, y, delta } => {
            let (xh, yh) = (hat(x), hat(y));
            let mut c = first_at_least(h4_min, delta, pm);
            while c + 3 <= h1_max {
                let mut b = yh;
                while c + 2 * b < h1_max {
                    let mut a = xh;
                    while a + b + c <= h1_max {
                        let gaps = [
                            (FlagSlot::Tau0, b),
                            (FlagSlot::BX, a),
                            (FlagSlot::BXMinusY, a - b),
                            (FlagSlot::BXPlusY, a + b),
                        ];
                        if a > b && gaps.iter().all(|&(s, g)| gap_ok(p, g, r.flag(s))) {
                            let mut ledger = vec![
                                LedgerEntry::plain(p, "x", a),
                                LedgerEntry::plain(p, "y", b),
                                LedgerEntry::plain(p, "center", c),
                            ];
                            for (s, g) in gaps {
                                if r.flag(s).is_some() {
                                    ledger.push(flag_entry(r, s, g));
                                }
                            }
                            let blocks = vec![
                                PlannedBlock::Char { weight: a + b + c },
                                PlannedBlock::Char { weight: a + c },
                                PlannedBlock::Char { weight: b + c },
                                PlannedBlock::Char { weight: c },
                            ];
                            plans.push(LiftPlan::build(
                                Certificate::Ordinary,
                                blocks,
                                ledger,
                                vec![],
                            ));
                        }
                        a += pm;
                    }
                    b += pm;
                }
                c += pm;
            }
        }
        RepParams::Siegel { x, y, delta } => {
            let mut c = first_at_least(h4_min, delta, pm);
            while c + 3 <= h1_max {
                let mut k = 0;
                while x + y + 2 * k * pm + c <= h1_max {
                    let (a, b) = (x + k * pm, y + k * pm);
                    if b > 0 && gap_ok(p, a + b, r.flag(FlagSlot::Tau3)) {
                        let mut ledger = vec![
                            LedgerEntry::plain(p, "induced", a),
                            LedgerEntry::plain(p, "center", c),
                        ];
                        for s in [FlagSlot::Tau1, FlagSlot::Tau3] {
                            if r.flag(s).is_some() {
                                ledger.push(flag_entry(r, s, a + b));
                            }
                        }
                        let blocks = vec![
                            PlannedBlock::Char { weight: a + b + c },
                            PlannedBlock::Induced2 {
                                hi: a + c,
                                lo: b + c,
                            },
                            PlannedBlock::Char { weight: c },
                        ];
                        plans.push(LiftPlan::build(
                            Certificate::Ordinary,
                            blocks,
                            ledger,
                            vec![],
                        ));
                    }
                    k += 1;
                }
                c += pm;
            }
        }
        RepParams::Klingen { x, y, w } => {
            let d = x - y;
            let span = h1_max - h4_min;
            let t0 = (w + 3 - x - y).rem_euclid(pm);
            let note = if (2 * d) % (pp + 1) == 0 {
                "adjoint splits: p+1 divides 2(x-y)"
            } else {
                "adjoint does not split"
            };
            let mut t = first_at_least(-span, t0, pm);
            while t <= span {
                if t != 0 && t != d && t != -d {
                    let mut yy = first_at_least(h4_min - t.min(0), y, pm);
                    while yy + t.max(0) + d <= h1_max {
                        let ledger = vec![
                            LedgerEntry::plain(p, "first_block", yy),
                            LedgerEntry {
                                slot: "dual_shift".into(),
                                residue: t0,
                                raise: (t - t0) / pm,
                                flag: None,
                                r: 0,
                                psi: PsiTag::Trivial,
                            },
                        ];
                        let blocks = vec![
                            PlannedBlock::Induced2 { hi: yy + d, lo: yy },
                            PlannedBlock::Induced2 {
                                hi: yy + t + d,
                                lo: yy + t,
                            },
                        ];
                        plans.push(LiftPlan::build(
                            Certificate::Composite,
                            blocks,
                            ledger,
                            vec![note.to_string()],
                        ));
                        yy += pm;
                    }
                }
                t += pm;
            }
        }
        RepParams::Endoscopic { .. } => {
            let bs = r.blocks();
            let first = induced2_lifts(p, &bs[0], h4_min, h1_max);
            let mut by_sum: BTreeMap<i64, Vec<(i64, i64, bool)>> = BTreeMap::new();
            for l in induced2_lifts(p, &bs[1], h4_min, h1_max) {
                by_sum.entry(l.0 + l.1).or_default().push(l);
            }
            let family = |s: bool| if s { "standard" } else { "conjugate" };
            for (h1, l1, s1) in first {
                for &(h2, l2, s2) in by_sum.get(&(h1 + l1)).into_iter().flatten() {
                    if h1 == h2 {
                        continue;
                    }
                    let ledger = vec![
                        LedgerEntry::plain(p, &format!("block1_{}", family(s1)), l1),
                        LedgerEntry::plain(p, &format!("block2_{}", family(s2)), l2),
                    ];
                    let blocks = vec![
                        PlannedBlock::Induced2 { hi: h1, lo: l1 },
                        PlannedBlock::Induced2 { hi: h2, lo: l2 },
                    ];
                    plans.push(LiftPlan::build(
                        Certificate::InducedShortRange,
                        blocks,
                        ledger,
                        vec![],
                    ));
                }
            }
        }
        RepParams::Irreducible { exponent } => {
            let mut seen = BTreeSet::new();
            for (_, ds) in normalize_frobenius(p, exponent) {
                let Ok(sym) = symmetrize_digits(p, ds) else {
                    continue;
                };
                let bs = sym.output;
                let (lo, hi) = (*bs.iter().min().unwrap(), *bs.iter().max().unwrap());
                let mut c = first_at_least(h4_min - lo, 0, pm);
                while c + hi <= h1_max {
                    let weights = bs.map(|b| b + c);
                    if seen.insert(weights) {
                        let mut notes = vec![format!("symmetrization case {}", sym.case)];
                        if bs[0] < 0 {
                            notes.push("negative digit b0 kept".into());
                        }
                        let ledger = vec![LedgerEntry::plain(p, "center", c)];
                        let blocks = vec![PlannedBlock::Induced4 { weights }];
                        plans.push(LiftPlan::build(
                            Certificate::InducedShortRange,
                            blocks,
                            ledger,
                            notes,
                        ));
                    }
                    c += pm;
                }
            }
        }
    }
    plans
}

/// The minimal plan with nonnegative weights.
pub fn lift_gsp4(r: &LocalRepresentation) -> Result<LiftPlan, LiftError> {
    let pp = r.prime().get();
    let mut bound = 4 * pp;
    let cap = 64 * pp;
    let mut fallback = None;
    while bound <= cap {
        let plans = plans_in(r, 0, bound);
        let best = plans
            .iter()
            .filter(|pl| pl.regular)
            .min_by_key(|pl| (pl.ht, pl.twist_total(), pl.blocks.clone()));
        if let Some(b) = best {
            return Ok(b.clone());
        }
        if fallback.is_none() {
            fallback = plans
                .into_iter()
                .min_by_key(|pl| (pl.ht, pl.twist_total(), pl.blocks.clone()));
        }
        bound *= 2;
    }
    fallback.ok_or(LiftError::NoPlan(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charlattice::make_char;
    use crate::localrep::inertia_pattern;

    fn pr(p: i64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn class(p: Prime, k: i64, flag: ExtensionFlag) -> CharacterClassData {
        CharacterClassData::new(make_char(p, 1, k, Unramified::trivial()).unwrap(), flag).unwrap()
    }

    #[test]
    fn character_lifts() {
        let p = pr(5);
        assert_eq!(
            lift_char(p, 1, &class(p, 1, ExtensionFlag::PeuRamifiee), 0)
                .unwrap()
                .0,
            1
        );
        assert_eq!(
            lift_char(p, 1, &class(p, 1, ExtensionFlag::TresRamifiee), 1)
                .unwrap()
                .0,
            5
        );
        assert!(lift_char(p, 1, &class(p, 1, ExtensionFlag::TresRamifiee), 0).is_err());
        let p = pr(7);
        let (w, t) = lift_char(p, 0, &class(p, 0, ExtensionFlag::Ramified), 1).unwrap();
        assert_eq!(w, 6);
        assert_eq!(t.psi, PsiTag::Nontrivial);
    }

    #[test]
    fn two_dim_lifts() {
        let p = pr(5);
        assert_eq!(
            lift_2dim_irred(p, 3, 1, 0),
            Ok(((3, 1), Certificate::InducedShortRange))
        );
        assert_eq!(lift_2dim_irred(p, 3, 1, 4).unwrap().0, (7, 5));
        assert!(lift_2dim_irred(p, 1, 3, 0).is_err());
        assert_eq!(
            lift_2dim_red(p, 2, 1, Some(ExtensionFlag::TresRamifiee)),
            Ok((6, 1))
        );
        assert_eq!(
            lift_2dim_red(p, 3, 1, Some(ExtensionFlag::PeuRamifiee)),
            Ok((3, 1))
        );
        assert_eq!(
            lift_2dim_red(p, 1, 3, Some(ExtensionFlag::PeuRamifiee)),
            Ok((5, 3))
        );
    }

    #[test]
    fn three_dim_lifts() {
        let p = pr(5);
        let red2 = ThreeDimCase::Red2 {
            a: 3,
            b: 1,
            c: 0,
            alpha: Some(ExtensionFlag::Unramified),
        };
        let got = lift_3dim(p, red2).unwrap();
        assert_eq!(got.weights, [7, 5, 4]);
        assert_eq!(got.raises, vec![1, 1]);
        let red1 = ThreeDimCase::Red1 {
            a: 3,
            b: 2,
            c: 1,
            upper: None,
            lower: None,
        };
        assert_eq!(lift_3dim(p, red1).unwrap().raises, vec![0, 0, 0]);
        let ram = ThreeDimCase::Red2 {
            a: 3,
            b: 1,
            c: 0,
            alpha: Some(ExtensionFlag::Ramified),
        };
        let got = lift_3dim(p, ram).unwrap();
        assert_eq!(got.weights, [7, 5, 4]);
        assert_eq!(got.raises, vec![1, 0]);
    }

    #[test]
    fn digit_symmetrization() {
        let p = pr(5);
        let s = symmetrize_digits(p, [4, 1, 3, 0]).unwrap();
        assert_eq!(s.output, [-1, 2, 3, 0]);
        assert_eq!(s.case, 1);
        let s = symmetrize_digits(p, [3, 1, 0, 2]).unwrap();
        assert_eq!(s.output, [3, 1, 0, 2]);
        assert!(matches!(
            symmetrize_digits(p, [4, 0, 4, 0]),
            Err(LiftError::NotSymplectic { diff: 8, .. })
        ));
        assert!(matches!(
            symmetrize_digits(p, [0, 1, 0, 2]),
            Err(LiftError::NotNormalized { .. })
        ));
    }

    #[test]
    fn borel_plans() {
        let p = pr(7);
        let r = LocalRepresentation::borel(p, 4, 2, 0).unwrap();
        assert_eq!(lift_gsp4(&r).unwrap().ht, [6, 4, 2, 0]);
        let t = LocalRepresentation::borel(p, 3, 1, 0)
            .unwrap()
            .with_flag(FlagSlot::Tau0, ExtensionFlag::TresRamifiee)
            .unwrap();
        let plan = lift_gsp4(&t).unwrap();
        assert_eq!(plan.ht, [16, 9, 7, 0]);
        assert_eq!(plan.certificate, Certificate::Ordinary);
    }

    #[test]
    fn irreducible_plan() {
        let p = pr(5);
        let r = LocalRepresentation::irreducible(p, 84).unwrap();
        let plan = lift_gsp4(&r).unwrap();
        assert_eq!(plan.ht, [7, 6, 4, 3]);
        assert!(plan.regular);
        assert_eq!(plan.reduction_pattern(p), inertia_pattern(&r));
    }

    #[test]
    fn plans_reduce_to_input() {
        let p = pr(7);
        let reps = [
            LocalRepresentation::siegel(p, 3, 0, 1).unwrap(),
            LocalRepresentation::klingen(p, 6, 5, 2).unwrap(),
            LocalRepresentation::endoscopic(p, 5, 1, 4, 2, 3).unwrap(),
            LocalRepresentation::endoscopic(p, 6, 2, 2, 0, 0).unwrap(),
        ];
        for r in &reps {
            let plan = lift_gsp4(r).unwrap();
            assert!(plan.is_symplectic(), "{plan:?}");
            assert!(plan.regular);
            assert_eq!(plan.reduction_pattern(p), inertia_pattern(r), "{r:?}");
        }
    }
}
