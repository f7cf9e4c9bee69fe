//! Integration tests for the scenario front-end: fixture files parse, the
//! runner produces the expected records, and the error paths surface with
//! usable diagnostics.

use hecke_ext_cli::{parse_scenario, records_text, run_scenario, runner::all_checks_pass};

fn fixture(name: &str) -> String {
    let dir = format!("{}/scenarios", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(format!("{dir}/{name}")).unwrap()
}

fn record_line<'a>(text: &'a str, task: &str) -> &'a str {
    text.lines()
        .find(|l| l.starts_with(&format!("task={task} ")))
        .unwrap_or_else(|| panic!("no record for task {task}"))
}

#[test]
fn all_battery_fixtures_parse() {
    for name in
        ["battery_a1.scn", "battery_a2.scn", "battery_b2.scn", "battery_b2_unequal.scn", "battery_g2.scn"]
    {
        let scenario = parse_scenario(&fixture(name)).unwrap();
        assert!(!scenario.modules.is_empty());
        assert!(!scenario.tasks.is_empty());
    }
}

#[test]
fn a1_battery_records() {
    let scenario = parse_scenario(&fixture("battery_a1.scn")).unwrap();
    let records = run_scenario(&scenario).unwrap();
    assert!(all_checks_pass(&records));
    let text = records_text(&records);

    assert!(record_line(&text, "ext_st_st").contains("ext=[1,0]"));
    assert!(record_line(&text, "ext_triv_st").contains("ext=[0,1]"));
    assert!(record_line(&text, "ext_m3_m3").contains("ext=[1,1]"));
    assert!(record_line(&text, "ep_st_st").contains("ep=1/1 elliptic=1/1 pass=true"));
    assert!(record_line(&text, "ep_triv_st").contains("ep=-1/1"));
    assert!(record_line(&text, "classify_st")
        .contains("tempered=true discrete_series=true"));
    assert!(record_line(&text, "classify_triv").contains("tempered=false"));
    assert!(record_line(&text, "elliptic").contains("count=1"));
}

#[test]
fn b2_elliptic_count_is_two() {
    let scenario = parse_scenario(&fixture("battery_b2.scn")).unwrap();
    let records = run_scenario(&scenario).unwrap();
    let text = records_text(&records);
    assert!(record_line(&text, "elliptic").contains("count=2"));
}

#[test]
fn g2_battery_full_checks() {
    let scenario = parse_scenario(&fixture("battery_g2.scn")).unwrap();
    let records = run_scenario(&scenario).unwrap();
    assert!(all_checks_pass(&records));
    let text = records_text(&records);
    assert!(record_line(&text, "ext_st_st").contains("ext=[1,0,0]"));
    assert!(record_line(&text, "ext_m3_m3").contains("ext=[1,2,1]"));
    assert!(record_line(&text, "elliptic").contains("count=3"));
}

#[test]
fn classify_on_a2_steinberg() {
    let text = "\
[datum]
type = A2
k = 1,1

[module.St]
kind = one_dim
signs = -

[task.c]
kind = classify
module = St
";
    let scenario = parse_scenario(text).unwrap();
    let records = run_scenario(&scenario).unwrap();
    let line = records_text(&records);
    assert!(line.contains("tempered=true discrete_series=true"));
    assert!(line.contains("central_character="));
}

#[test]
fn runner_rejects_bad_datum() {
    let text = "\
[datum]
type = H3
k = 1

[module.St]
kind = one_dim
signs = -

[task.c]
kind = classify
module = St
";
    let scenario = parse_scenario(text).unwrap();
    let err = run_scenario(&scenario).unwrap_err();
    assert!(err.to_string().contains("H3"));
}

#[test]
fn unresolved_label_fails_at_parse_time() {
    let text = "\
[datum]
type = A1
k = 1

[task.e]
kind = ext_dims
x = X9
y = X9
";
    let err = parse_scenario(text).unwrap_err();
    assert!(err.to_string().contains("X9"));
}

#[test]
fn scalar_fields_round_trip_through_the_record_format() {
    let scenario = parse_scenario(&fixture("battery_b2_unequal.scn")).unwrap();
    let records = run_scenario(&scenario).unwrap();
    let text = records_text(&records);
    for line in text.lines() {
        for field in line.split_whitespace() {
            let (_, value) = field.split_once('=').unwrap();
            // any p/q token must re-parse to the same canonical rendering
            if value.contains('/') && !value.contains('[') {
                let parsed = hecke_ext::scalar::parse(value).unwrap();
                assert_eq!(hecke_ext::scalar::render(&parsed), value);
            }
        }
    }
}
