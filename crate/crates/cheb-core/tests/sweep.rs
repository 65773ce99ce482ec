//! Medium-size randomized sweeps: inequality soundness, record
//! integrity, serialization round-trips, and determinism, at a size
//! that keeps this target fast. The full reference sweep runs in the
//! acceptance target.

use cheb_core::verify::{
    count_violations, generate_corpus, read_jsonl, sweep, tightness_report, write_csv,
    write_jsonl, Family, RunConfig, ALL_FAMILIES, CSV_HEADER,
};

fn medium() -> RunConfig {
    RunConfig {
        entries: 36,
        cfgs_per_entry: 6,
        ..RunConfig::default()
    }
}

#[test]
fn medium_sweep_is_sound() {
    let out = sweep(&medium()).unwrap();
    assert_eq!(out.violations, 0, "certified violations in medium sweep");
    assert_eq!(out.violations, count_violations(&out.records));
    assert!(!out.records.is_empty());

    for r in &out.records {
        assert!(r.rhs.is_finite() && r.rhs >= 0.0, "{}: rhs {}", r.theorem, r.rhs);
        assert!(r.lhs.is_finite() && r.lhs >= 0.0);
        assert!(r.a <= r.u && r.u < r.v && r.v <= r.b, "bad geometry in {}", r.entry);
        assert_eq!(r.seed, 42);
        assert_eq!(r.mode, "overlap");
        if r.hypothesis_ok {
            assert!(r.pass, "{} on {} failed while certified", r.theorem, r.entry);
        }
        // a certified pass can never report tightness beyond 1 by more
        // than the additive margin allows
        if let Some(t) = r.tightness.value() {
            if r.hypothesis_ok && r.rhs > 1e-9 {
                assert!(t <= 1.0 + 1e-6, "{} tightness {t}", r.theorem);
            }
        }
    }
}

#[test]
fn sharp_witnesses_lead_the_corpus() {
    let out = sweep(&medium()).unwrap();
    // f = g = x drives the (b−a)²/12 bound to its anchor
    let lin = out
        .records
        .iter()
        .find(|r| r.entry == "w000-linear" && r.theorem == "thm1" && r.case == "chebyshev")
        .expect("linear witness record");
    assert!(lin.tightness.value().unwrap() >= 0.999999);

    // f = g = sign(x − mid) drives the quarter-range bound to its anchor
    let step = out
        .records
        .iter()
        .find(|r| r.entry == "w001-step" && r.theorem == "thm1" && r.case == "gruss")
        .expect("step witness record");
    assert!(step.tightness.value().unwrap() >= 0.999999);
}

#[test]
fn jsonl_round_trip_preserves_records() {
    let out = sweep(&RunConfig {
        entries: 8,
        cfgs_per_entry: 3,
        ..RunConfig::default()
    })
    .unwrap();
    let mut buf = Vec::new();
    write_jsonl(&mut buf, &out.records).unwrap();
    let back = read_jsonl(buf.as_slice()).unwrap();
    assert_eq!(back.len(), out.records.len());

    let mut buf2 = Vec::new();
    write_jsonl(&mut buf2, &back).unwrap();
    assert_eq!(buf, buf2, "JSONL round-trip changed bytes");

    let mut csv = Vec::new();
    write_csv(&mut csv, &out.records).unwrap();
    let text = String::from_utf8(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), out.records.len());
}

#[test]
fn sweeps_are_deterministic() {
    let a = sweep(&medium()).unwrap();
    let b = sweep(&medium()).unwrap();
    let mut ba = Vec::new();
    let mut bb = Vec::new();
    write_jsonl(&mut ba, &a.records).unwrap();
    write_jsonl(&mut bb, &b.records).unwrap();
    assert_eq!(ba, bb, "same-seed sweeps must serialize identically");

    let c = sweep(&RunConfig {
        seed: 43,
        ..medium()
    })
    .unwrap();
    let mut bc = Vec::new();
    write_jsonl(&mut bc, &c.records).unwrap();
    assert_ne!(ba, bc, "different seeds should explore different configs");
}

#[test]
fn family_and_theorem_filters_apply() {
    let rc = RunConfig {
        entries: 10,
        cfgs_per_entry: 3,
        families: vec![Family::Polynomial],
        theorems: Some(vec!["thm4.5.7".into()]),
        ..RunConfig::default()
    };
    let out = sweep(&rc).unwrap();
    assert!(!out.records.is_empty());
    for r in &out.records {
        assert_eq!(r.theorem, "thm4.5.7", "theorem filter leaked {}", r.theorem);
        assert!(
            r.family.split('/').all(|k| k == "poly" || k == "mono-poly"),
            "family filter leaked {}",
            r.family
        );
    }
}

#[test]
fn scaled_rhs_flushes_out_violations() {
    // shrinking every RHS by 100x must break sharp configurations;
    // this guards the violation-counting path end to end
    let out = sweep(&RunConfig {
        entries: 12,
        cfgs_per_entry: 4,
        scale_rhs: 0.01,
        ..RunConfig::default()
    })
    .unwrap();
    assert!(out.violations > 0);
    let stats = tightness_report(&out.records);
    assert!(stats.iter().any(|s| s.violations > 0));
}

#[test]
fn corpus_generation_is_stable_and_filtered() {
    let entries = generate_corpus(42, 25, &ALL_FAMILIES).unwrap();
    assert_eq!(entries.len(), 25);
    // witnesses first, then generated entries with 1 ≤ width < 3
    assert_eq!(entries[0].name, "w000-linear");
    assert_eq!(entries[1].name, "w001-step");
    for e in &entries {
        let w = e.b - e.a;
        assert!((1.0..3.0).contains(&w) || e.name.starts_with('w'), "{}: width {w}", e.name);
    }

    let poly_only = generate_corpus(42, 10, &[Family::Polynomial]).unwrap();
    for e in &poly_only {
        assert!(e.family.contains("poly"), "{}", e.family);
    }
}
