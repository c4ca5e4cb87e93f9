use serde_json::Value;
use wpl_core::k0::K0;
use wpltilt::cli::{dispatch, Outcome};
use wpltilt::wire::{DescriptorWire, TiltingDatumWire};

fn run(args: &[&str]) -> Outcome {
    dispatch(std::iter::once("wpltilt").chain(args.iter().copied()))
}

#[test]
fn describe_prints_the_headline() {
    let out = run(&["describe", "2,3,7"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.lines().next(), Some("(2,3,7): n=11, pbar=42, delta(omega)=1, wild"));
    let json: Value = serde_json::from_str(&run(&["describe", "2,3,7", "--format", "json"]).stdout).unwrap();
    assert_eq!(json["cartan"].as_array().unwrap().len(), 11);
}

#[test]
fn reflect_at_the_sink_of_five_points() {
    let out = run(&["reflect", "--type", "2,2,2,2,2", "--seq", "7"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("2/1 -> 3/4"), "{}", out.stdout);
    assert!(out.stdout.contains("1->7x3"));
}

#[test]
fn suites_exit_zero_when_they_pass() {
    let out = run(&["check", "--suite", "gorenstein-table"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.ends_with("suite gorenstein-table: pass\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["reflect", "--bogus"]).code, 2);
    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
    let out = run(&["reflect", "--type", "2,3", "--seq", "99"]);
    assert_eq!(out.code, 1);
    let err: Value = serde_json::from_str(out.stderr.trim()).unwrap();
    assert!(err["message"].as_str().unwrap().contains("99"));
    let out = run(&["check", "--suite", "nope"]);
    assert_eq!(out.code, 1);
    let err: Value = serde_json::from_str(out.stderr.trim()).unwrap();
    assert_eq!(err["error"], "unknown-suite");
    let out = run(&["describe", "1,3"]);
    assert_eq!(out.code, 1);
}

#[test]
fn exported_datum_round_trips() {
    let out = run(&["export", "--type", "2,3", "--seq", "5", "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let d: DescriptorWire = serde_json::from_value(v["descriptor"].clone()).unwrap();
    let d = d.to_descriptor().unwrap();
    let k0 = K0::new(&d);
    let wire: TiltingDatumWire = serde_json::from_value(v["datum"].clone()).unwrap();
    let datum = wire.to_datum(&k0).unwrap();
    datum.check_unimodular(&k0).unwrap();
    assert_eq!(serde_json::to_value(TiltingDatumWire::from_datum(&datum)).unwrap(), v["datum"]);
}

#[test]
fn check_input_accepts_inline_types_and_files() {
    let inline = run(&["check", "--suite", "width", "--input", "2,3,7"]);
    assert_eq!(inline.code, 0, "{}{}", inline.stdout, inline.stderr);
    let path = std::env::temp_dir().join(format!("wpltilt-input-{}.txt", std::process::id()));
    std::fs::write(&path, "2,3,7\n").unwrap();
    let file = run(&["check", "--suite", "width", "--input", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(file.code, 0);
    assert_eq!(inline.stdout, file.stdout);
}
