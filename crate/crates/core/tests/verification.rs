//! Full verification sweep: every suite at its default instance budget.

use capdim_core::{all_suite_ids, verify, VerifyConfig};

fn report(id: &str) -> capdim_core::VerificationReport {
    let rep = verify(id, &VerifyConfig::default()).unwrap();
    println!(
        "{}: instances {}, failures {}, skipped {}, worst slack {:?}",
        rep.lemma_id, rep.instances, rep.failures, rep.skipped, rep.worst_slack
    );
    for note in &rep.notes {
        println!("    {note}");
    }
    rep
}

#[test]
fn sound_suites_pass_at_default_budget() {
    for id in all_suite_ids() {
        if *id == "corollary1" {
            continue;
        }
        let rep = report(id);
        assert_eq!(rep.failures, 0, "{id} reported failures");
        assert!(rep.passed(), "{id} skipped too many instances");
    }
}

#[test]
fn comparison_term_failures_vanish_under_sqrt2_correction() {
    let rep = report("corollary1");
    assert_eq!(rep.skipped, 0);
    assert!(
        !rep.notes.iter().any(|n| n.contains("also exceeded")),
        "an instance exceeded even the corrected comparison term: {:?}",
        rep.notes
    );
    assert!(
        rep.failures <= rep.instances / 10,
        "comparison term failed more often than the constant defect explains"
    );
}
