//! Serre weight sets computed from lift plans.
//!
//! Membership in SW(r̄) asks for some potentially diagonalizable crystalline
//! lift, which cannot be decided here. Everything below is the constructive
//! subset: weights witnessed by a plan from [`crate::lifts::plans_in`] inside a
//! finite search window.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charlattice::Prime;
use crate::lifts::{plans_in, LiftPlan};
use crate::localrep::{inertia_pattern, LocalRepresentation};
use crate::weights::{
    companion, hc_to_weight, shifted_alcove, Alcove, HighestWeight, SerreWeightLabel,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerreError {
    #[error("search window is empty: {0}")]
    EmptyWindow(String),
    #[error("no weight found inside the search window {0}")]
    WindowTooSmall(Window),
}

/// Inclusive search ranges for a, b, c of SW entries and w of archimedean
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub a: (i64, i64),
    pub b: (i64, i64),
    pub c: (i64, i64),
    pub w: (i64, i64),
}

impl Window {
    /// a, b ∈ [1, 3p]; c, w ∈ [0, 2p − 3].
    pub fn default_for(p: Prime) -> Window {
        let p = p.get();
        Window {
            a: (1, 3 * p),
            b: (1, 3 * p),
            c: (0, 2 * p - 3),
            w: (0, 2 * p - 3),
        }
    }

    fn check(&self) -> Result<(), SerreError> {
        for (name, (lo, hi)) in [("a", self.a), ("b", self.b), ("c", self.c), ("w", self.w)] {
            if lo > hi {
                return Err(SerreError::EmptyWindow(format!("{name}={lo}..{hi}")));
            }
        }
        Ok(())
    }

    fn contains(&self, a: i64, b: i64, c: i64) -> bool {
        let inr = |v: i64, (lo, hi): (i64, i64)| lo <= v && v <= hi;
        inr(a, self.a) && inr(b, self.b) && inr(c, self.c)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={}..{},b={}..{},c={}..{},w={}..{}",
            self.a.0, self.a.1, self.b.0, self.b.1, self.c.0, self.c.1, self.w.0, self.w.1
        )
    }
}

/// (a, b, c) with a > b > 0, c ≥ 0, witnessed by a lift with weights
/// {a+b+c, a+c, b+c, c}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwEntry {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub witness: LiftPlan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassicalWeight {
    pub k1: i64,
    pub k2: i64,
    pub w: i64,
}

impl fmt::Display for ClassicalWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.k1, self.k2, self.w)
    }
}

/// The witnessed part of SW(r̄) inside the window, sorted by (a, b, c).
pub fn sw_set(r: &LocalRepresentation, window: &Window) -> Result<Vec<SwEntry>, SerreError> {
    window.check()?;
    let h1_max = window.a.1 + window.b.1 + window.c.1;
    let c_min = window.c.0.max(0);
    let target = inertia_pattern(r);
    let mut best: BTreeMap<(i64, i64, i64), LiftPlan> = BTreeMap::new();
    for plan in plans_in(r, c_min, h1_max) {
        let (a, b, c) = plan.abc();
        if !(a > b && b > 0 && c >= 0 && plan.is_symplectic() && window.contains(a, b, c)) {
            continue;
        }
        if plan.reduction_pattern(r.prime()) != target {
            continue;
        }
        let slot = best.entry((a, b, c)).or_insert_with(|| plan.clone());
        if (plan.twist_total(), &plan.blocks) < (slot.twist_total(), &slot.blocks) {
            *slot = plan;
        }
    }
    Ok(best
        .into_iter()
        .map(|((a, b, c), witness)| SwEntry { a, b, c, witness })
        .collect())
}

/// Lexicographic minimum of SW(r̄) + (1, 2, 0) on (k1, k2, w), with its witness.
pub fn classical_weight_in(
    r: &LocalRepresentation,
    window: &Window,
) -> Result<(ClassicalWeight, SwEntry), SerreError> {
    let set = sw_set(r, window)?;
    let first = set
        .into_iter()
        .next()
        .ok_or(SerreError::WindowTooSmall(*window))?;
    let cw = ClassicalWeight {
        k1: first.a + 1,
        k2: first.b + 2,
        w: first.c,
    };
    Ok((cw, first))
}

pub fn classical_weight(r: &LocalRepresentation) -> Result<ClassicalWeight, SerreError> {
    classical_weight_in(r, &Window::default_for(r.prime())).map(|x| x.0)
}

/// A weight in the FL-range set together with what certifies it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdcrisWeight {
    pub label: SerreWeightLabel,
    pub lambda: HighestWeight,
    pub alcove: Alcove,
    /// Archimedean parameter (m1, m2, w).
    pub parameter: (i64, i64, i64),
    pub witness: LiftPlan,
    /// For C1 weights, the other constituent of the Weyl module and whether
    /// it is witnessed on its own.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub companion: Option<(SerreWeightLabel, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSetReport {
    pub weights: Vec<PdcrisWeight>,
    /// C1 companions that no lift witnesses.
    pub rejected_companions: Vec<SerreWeightLabel>,
    pub window: Window,
    pub scope: String,
}

impl WeightSetReport {
    pub fn labels(&self) -> BTreeSet<SerreWeightLabel> {
        self.weights.iter().map(|w| w.label).collect()
    }
}

/// Serre weights F(λ) with λ + ρ̃ inside C0 ∪ C1 for which a plan with the
/// matching Hodge–Tate weights reduces to the inertia of r.
pub fn enumerate_pdcris_weights(
    r: &LocalRepresentation,
    window: &Window,
) -> Result<WeightSetReport, SerreError> {
    window.check()?;
    let p = r.prime();
    let pp = p.get();
    let target = inertia_pattern(r);
    let h4_min = (window.w.0 + 3 - (2 * pp - 3)).div_euclid(2);
    let h1_max = (window.w.1 + 3 + 2 * pp - 3).div_euclid(2) + 1;
    let mut by_ht: BTreeMap<[i64; 4], LiftPlan> = BTreeMap::new();
    for plan in plans_in(r, h4_min, h1_max) {
        if plan.reduction_pattern(p) != target || !plan.is_symplectic() {
            continue;
        }
        let slot = by_ht.entry(plan.ht).or_insert_with(|| plan.clone());
        if (plan.twist_total(), &plan.blocks) < (slot.twist_total(), &slot.blocks) {
            *slot = plan;
        }
    }

    let inr = |v: i64, (lo, hi): (i64, i64)| lo <= v && v <= hi;
    let mut found: BTreeMap<SerreWeightLabel, PdcrisWeight> = BTreeMap::new();
    for m1 in 2..pp {
        for m2 in 1..m1 {
            if !inr(m1, window.a) || !inr(m2, window.b) {
                continue;
            }
            for w in window.w.0..=window.w.1 {
                let Ok(lambda) = hc_to_weight(m1, m2, w) else {
                    continue;
                };
                let alcove = shifted_alcove(p, &lambda);
                if !matches!(alcove, Alcove::C0 | Alcove::C1) {
                    continue;
                }
                let d = (w + 3 - m1 - m2) / 2;
                let Some(plan) = by_ht.get(&[d + m1 + m2, d + m1, d + m2, d]) else {
                    continue;
                };
                let label =
                    SerreWeightLabel::new(p, &lambda).expect("C0/C1 weights are restricted");
                found.entry(label).or_insert(PdcrisWeight {
                    label,
                    lambda,
                    alcove,
                    parameter: (m1, m2, w),
                    witness: plan.clone(),
                    companion: None,
                });
            }
        }
    }

    let present: BTreeSet<SerreWeightLabel> = found.keys().copied().collect();
    let mut rejected = BTreeSet::new();
    for entry in found.values_mut() {
        if entry.alcove != Alcove::C1 {
            continue;
        }
        let mu = companion(p, &entry.lambda);
        let Ok(ml) = SerreWeightLabel::new(p, &mu) else {
            continue;
        };
        let ok = present.contains(&ml);
        if !ok {
            rejected.insert(ml);
        }
        entry.companion = Some((ml, ok));
    }

    Ok(WeightSetReport {
        weights: found.into_values().collect(),
        rejected_companions: rejected.into_iter().collect(),
        window: *window,
        scope: "constructive: weights witnessed by lift plans inside the window".into(),
    })
}
