//! Identity campaigns: plans of `(identity, size, trials)` checked at random
//! admissible configurations, with mutation controls.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::qarith::expr::Expr;
use crate::qarith::pit::{pit_equal_with, PitMode, Verdict};
use crate::verify::Status;

use super::corpus::{instance, IdentityId};
use super::IdentityError;

/// A deliberate corruption of one identity, used as a control.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Shift the argument of the `site`-th bracket of the left side.
    Bracket { site: usize, delta: i64 },
    /// Add one to the right side.
    RhsPlusOne,
}

impl std::fmt::Display for Mutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mutation::Bracket { site, delta } => write!(f, "bracket {site} {delta:+}"),
            Mutation::RhsPlusOne => f.write_str("rhs +1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanItem {
    pub id: IdentityId,
    pub size: usize,
    pub trials: usize,
    /// `None` picks the identity's default mode.
    pub mode: Option<PitMode>,
    pub mutation: Option<Mutation>,
    /// A control passes when its mutation is caught; a plain corrupted item
    /// is judged like the real identity.
    pub control: bool,
}

impl PlanItem {
    pub fn new(id: IdentityId, size: usize, trials: usize) -> Self {
        PlanItem {
            id,
            size,
            trials,
            mode: None,
            mutation: None,
            control: false,
        }
    }

    /// Mutation control: passes iff the corruption is detected.
    pub fn mutated(mut self, m: Mutation) -> Self {
        self.mutation = Some(m);
        self.control = true;
        self
    }

    /// Corrupt the identity without expecting it to be caught (debugging).
    pub fn corrupted(mut self, m: Mutation) -> Self {
        self.mutation = Some(m);
        self.control = false;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignEntry {
    pub identity: String,
    pub size: usize,
    pub trials: usize,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation: Option<String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    /// Confidence statement on a pass, the error on an error.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub millis: u64,
}

fn mode_name(m: PitMode) -> String {
    match m {
        PitMode::Symbolic => "symbolic".into(),
        PitMode::ExactRational => "exact-rational".into(),
        PitMode::PrimeField(p) => format!("prime-field:{p}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub entries: Vec<CampaignEntry>,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let tag = match e.status {
                Status::Pass => "PASS ",
                Status::Fail => "FAIL ",
                Status::Error => "ERROR",
                Status::Info => "INFO ",
            };
            out.push_str(&format!("{tag} {} size={} trials={} mode={}", e.identity, e.size, e.trials, e.mode));
            if let Some(m) = &e.mutation {
                out.push_str(&format!(" mutation=({m})"));
            }
            if let Some(c) = &e.counterexample {
                out.push_str(&format!(" :: {c}"));
            } else if e.status == Status::Error {
                out.push_str(&format!(" :: {}", e.detail.as_deref().unwrap_or("")));
            }
            out.push('\n');
        }
        let pass = self.entries.iter().filter(|e| e.status == Status::Pass).count();
        out.push_str(&format!("{pass}/{} passed\n", self.entries.len()));
        out
    }
}

/// Independent seed per plan position.
fn item_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Run one plan item. A control passes when its corruption is caught.
pub fn run_item(item: &PlanItem, seed: u64, timings: bool) -> CampaignEntry {
    let start = Instant::now();
    let mode = item.mode.unwrap_or_else(|| item.id.default_mode(item.size));
    let mut entry = CampaignEntry {
        identity: item.id.name().to_string(),
        size: item.size,
        trials: item.trials,
        mode: mode_name(mode),
        mutation: item.mutation.map(|m| m.to_string()),
        status: Status::Error,
        counterexample: None,
        detail: None,
        millis: 0,
    };
    let outcome = check_item(item, mode, seed);
    match outcome {
        Ok(Verdict::Equal { confidence, .. }) => {
            entry.status = if item.control { Status::Fail } else { Status::Pass };
            entry.detail = Some(confidence);
        }
        Ok(Verdict::Counterexample { point, lhs, rhs }) => {
            entry.status = if item.control { Status::Pass } else { Status::Fail };
            entry.counterexample = Some(format!("{point}: lhs = {lhs}, rhs = {rhs}"));
        }
        Err(e) => entry.detail = Some(e.to_string()),
    }
    if timings {
        entry.millis = start.elapsed().as_millis() as u64;
    }
    entry
}

fn check_item(item: &PlanItem, mode: PitMode, seed: u64) -> Result<Verdict, IdentityError> {
    let inst = instance(item.id, item.size)?;
    let (lhs, rhs) = match item.mutation {
        None => (inst.lhs.clone(), inst.rhs.clone()),
        Some(Mutation::Bracket { site, delta }) => {
            if site >= inst.lhs.bracket_sites() {
                return Err(IdentityError::Malformed(format!("no bracket site {site}")));
            }
            (inst.lhs.mutate_bracket(site, delta), inst.rhs.clone())
        }
        Some(Mutation::RhsPlusOne) => (inst.lhs.clone(), inst.rhs.clone() + Expr::int(1)),
    };
    let mut sampling_error = None;
    let verdict = pit_equal_with(&lhs, &rhs, item.trials, seed, mode, |_, rng| {
        match inst.sample_config(mode, rng) {
            Ok(pt) => pt,
            Err(e) => {
                sampling_error.get_or_insert(e);
                Default::default()
            }
        }
    });
    if let Some(e) = sampling_error {
        return Err(e);
    }
    Ok(verdict?)
}

/// Run a plan; entries keep plan order.
pub fn run_campaign(plan: &[PlanItem], seed: u64, timings: bool) -> CampaignReport {
    CampaignReport {
        seed,
        entries: plan
            .iter()
            .enumerate()
            .map(|(i, item)| run_item(item, item_seed(seed, i), timings))
            .collect(),
    }
}

/// Instance sizes exercised for each identity.
pub fn default_sizes(id: IdentityId) -> Vec<usize> {
    match id {
        IdentityId::CommutatorLower | IdentityId::CommutatorUpper => vec![1, 2],
        IdentityId::ResidueExpanded | IdentityId::ResidueRegrouped | IdentityId::PartialFractions => vec![2, 3, 4],
        IdentityId::RowSumVanishing => vec![2, 3],
        _ => vec![1],
    }
}

/// The full campaign: 50 configurations per commutator instance, 100 for
/// every other identity.
pub fn default_plan() -> Vec<PlanItem> {
    let mut plan = Vec::new();
    for id in IdentityId::ALL {
        let trials = match id {
            IdentityId::CommutatorLower | IdentityId::CommutatorUpper => 50,
            _ => 100,
        };
        for size in default_sizes(id) {
            plan.push(PlanItem::new(id, size, trials));
        }
    }
    plan
}

/// Every single `+-1` shift of a live bracket of every bracket identity (20
/// samples each), and a `+1` on the right side of each rational identity.
///
/// Bracket controls run in the prime field: a corrupted sum no longer
/// cancels, which makes symbolic evaluation slow, and a mismatch modulo `p`
/// already proves the two sides differ.
pub fn mutation_plan() -> Vec<PlanItem> {
    let mut plan = Vec::new();
    for id in IdentityId::ALL {
        for size in default_sizes(id) {
            let mut base = PlanItem::new(id, size, 20);
            if id.is_bracket_identity() {
                base.mode = Some(PitMode::PrimeField(crate::qarith::modp::prime_pool()[0]));
                let live = instance(id, size)
                    .ok()
                    .and_then(|i| i.lhs.live_bracket_sites().ok())
                    .unwrap_or_default();
                for site in (0..live.len()).filter(|&s| live[s]) {
                    for delta in [-1, 1] {
                        plan.push(base.clone().mutated(Mutation::Bracket { site, delta }));
                    }
                }
            } else {
                plan.push(base.mutated(Mutation::RhsPlusOne));
            }
        }
    }
    plan
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_plan_passes() {
        let r = run_campaign(&[], 1, false);
        assert!(r.entries.is_empty() && r.passed());
    }

    #[test]
    fn small_plan_passes_and_is_deterministic() {
        let plan: Vec<_> = IdentityId::ALL
            .into_iter()
            .map(|id| PlanItem::new(id, id.min_size().max(2).min(if id.is_bracket_identity() && id != IdentityId::RowSumVanishing { 1 } else { 2 }), 5))
            .collect();
        let a = run_campaign(&plan, 3, false);
        assert!(a.passed(), "{}", a.to_text());
        let b = run_campaign(&plan, 3, false);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(CampaignReport::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn rhs_corruption_is_recorded() {
        let item = PlanItem::new(IdentityId::ThreeTerm, 1, 5).mutated(Mutation::RhsPlusOne);
        let e = run_item(&item, 0, false);
        assert_eq!(e.status, Status::Pass);
        assert!(e.counterexample.is_some());
        let item = PlanItem::new(IdentityId::ResidueExpanded, 3, 5).mutated(Mutation::RhsPlusOne);
        assert!(run_item(&item, 0, false).counterexample.is_some());
    }

    #[test]
    fn corrupted_item_fails() {
        let item = PlanItem::new(IdentityId::SerreFraction, 1, 5).corrupted(Mutation::Bracket { site: 0, delta: 1 });
        let e = run_item(&item, 0, false);
        assert_eq!(e.status, Status::Fail);
        assert!(e.counterexample.is_some());
    }

    #[test]
    fn zero_trials_is_an_error() {
        let e = run_item(&PlanItem::new(IdentityId::ThreeTerm, 1, 0), 0, false);
        assert_eq!(e.status, Status::Error);
    }

    #[test]
    fn every_bracket_shift_of_lower_commutator_is_caught() {
        let plan: Vec<_> = mutation_plan()
            .into_iter()
            .filter(|p| p.id == IdentityId::CommutatorLower && p.size == 1)
            .collect();
        assert!(!plan.is_empty());
        let r = run_campaign(&plan, 11, false);
        assert!(r.passed(), "{}", r.to_text());
    }
}
