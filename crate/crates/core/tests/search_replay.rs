use mdm_core::scene::ParamBox;
use mdm_core::search::{
    read_certificate, replay_certificate, run_search, write_certificate, Reason, SearchConfig,
};

fn small_run() -> (SearchConfig, mdm_core::search::SearchSummary) {
    let l0 = mdm_core::search::reference_l0().unwrap();
    let cfg = SearchConfig::new(l0, 3, ParamBox::parameter_space());
    let s = run_search(&cfg).unwrap();
    (cfg, s)
}

#[test]
fn partition_and_replay() {
    let (cfg, s) = small_run();
    let leaves: u64 = Reason::ALL.iter().filter(|r| r.is_leaf()).map(|r| s.count(*r)).sum();
    assert_eq!(leaves + s.count(Reason::Subdivided), s.records.len() as u64);
    assert_eq!(s.count(Reason::Subdivided) * 64 + 1, s.records.len() as u64);
    let rep = replay_certificate(&s.records, cfg.l0).unwrap();
    assert!((rep.leaf_volume - rep.root_volume).abs() <= 1e-9 * rep.root_volume);

    let mut buf = Vec::new();
    write_certificate(&s.records, &mut buf).unwrap();
    let back = read_certificate(buf.as_slice()).unwrap();
    assert_eq!(back, s.records);
}

#[test]
fn threads_do_not_change_the_certificate() {
    let (mut cfg, s) = small_run();
    cfg.workers = 4;
    let t = run_search(&cfg).unwrap();
    assert_eq!(s.digest(), t.digest());
}

#[test]
fn injected_faults_are_caught() {
    let (cfg, s) = small_run();
    let l0 = cfg.l0;

    let mut dropped = s.records.clone();
    let k = dropped.iter().position(|r| r.depth == 2).unwrap();
    dropped.remove(k);
    assert!(replay_certificate(&dropped, l0).is_err());

    let mut dup = s.records.clone();
    dup.push(dup[k].clone());
    assert!(replay_certificate(&dup, l0).is_err());

    if let Some(k) = s.records.iter().position(|r| r.reason == Reason::BoundProved) {
        let mut inflated = s.records.clone();
        inflated[k].l_center = Some(inflated[k].l_center.unwrap() + 1.0);
        assert!(replay_certificate(&inflated, l0).is_err());
        let mut shrunk = s.records.clone();
        shrunk[k].err = Some(0.0);
        assert!(replay_certificate(&shrunk, l0).is_err());
    }

    let mut relabeled = s.records.clone();
    let k = relabeled.iter().position(|r| r.reason == Reason::Subdivided && r.depth > 0).unwrap();
    relabeled[k].reason = Reason::InTargetBox;
    assert!(replay_certificate(&relabeled, l0).is_err());
}

#[test]
fn malformed_lines_are_reported() {
    let bad = "{\"box\":{\"center\":[1,2,3,4,5,6]},\"reason\":\"SUBDIVIDED\",\"depth\":0}\n";
    let e = read_certificate(bad.as_bytes()).unwrap_err();
    assert!(e.to_string().contains("line 1"), "{e}");
}
