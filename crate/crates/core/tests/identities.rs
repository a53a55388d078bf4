use ainf_core::identities::{default_plan, mutation_plan, run_campaign, IdentityId};
use ainf_core::verify::Status;

#[test]
fn default_campaign_passes() {
    let r = run_campaign(&default_plan(), 1, false);
    assert!(r.passed(), "{}", r.to_text());
    for e in &r.entries {
        let id: IdentityId = e.identity.parse().unwrap();
        let want = if matches!(id, IdentityId::CommutatorLower | IdentityId::CommutatorUpper) { 50 } else { 100 };
        assert!(e.trials >= want);
    }
}

#[test]
fn every_mutation_is_caught() {
    let r = run_campaign(&mutation_plan(), 2, false);
    let missed: Vec<_> = r.entries.iter().filter(|e| e.status != Status::Pass).collect();
    assert!(missed.is_empty(), "{missed:?}");
}
