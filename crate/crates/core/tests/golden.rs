//! Regression against stored reports. Set `FANOKIT_BLESS=1` to rewrite them
//! after an intended change.

use std::path::PathBuf;

use serde::Serialize;

use fanokit::harness::{matches_golden, write_report};
use fanokit::lct::{IdealSequenceOnXxA1, SubschemeSpec};
use fanokit::stability::{beta, ding_invariant, verify_volume_bound};
use fanokit::toricmodel::by_name;

fn check<T: Serialize>(name: &str, value: &T) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"));
    if std::env::var_os("FANOKIT_BLESS").is_some() {
        write_report(&path, value).unwrap();
    }
    assert!(
        matches_golden(&path, value).unwrap(),
        "{name} differs from {}",
        path.display()
    );
}

#[test]
fn beta_reports() {
    for (model, sub) in [
        ("P2", "point:0"),
        ("P1xP1", "thick:0:2"),
        ("dP6", "divisor:1"),
        ("P(1,1,2)", "point:0"),
    ] {
        let m = by_name(model).unwrap();
        let z = SubschemeSpec::parse_short(sub).unwrap().build(&m).unwrap();
        let tag =
            format!("beta_{}_{}", m.name(), sub.replace(':', "_")).replace(['(', ')', ','], "");
        check(&tag, &beta(&m, &z).unwrap());
    }
}

#[test]
fn volume_bound_reports() {
    for model in ["P2", "P1xP2"] {
        let m = by_name(model).unwrap();
        check(&format!("bound_{model}"), &verify_volume_bound(&m).unwrap());
    }
}

#[test]
fn ding_report() {
    let m = by_name("P1").unwrap();
    let p = SubschemeSpec::parse_short("point:0")
        .unwrap()
        .build(&m)
        .unwrap();
    let seq = IdealSequenceOnXxA1::new(&m, vec![p.ideal().clone(), p.ideal().power(2)]).unwrap();
    check(
        "ding_P1_normal_cone",
        &ding_invariant(&m, &seq, 1, 10).unwrap(),
    );
}
