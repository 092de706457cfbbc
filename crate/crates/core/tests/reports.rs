use partop::verify::{run, Bounds, Suite, SCHEMA};

#[test]
fn reports_are_byte_identical() {
    let suites = [Suite::Algebra, Suite::Quotient, Suite::Convergence];
    let a = run(&suites, &Bounds::default()).unwrap().to_json();
    let b = run(&suites, &Bounds::default()).unwrap().to_json();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["suites"].as_array().unwrap().len(), 3);
    assert!(v.get("wall_time").is_none());
}

#[test]
fn identities_report_carries_the_slack_table() {
    let r = run(
        &[Suite::Identities],
        &Bounds {
            n: Some(4),
            ..Bounds::default()
        },
    )
    .unwrap();
    let slack = r.suites[0]
        .checks
        .iter()
        .find(|c| c.name == "slack-qualified equalities")
        .unwrap();
    let rows = slack.table.as_ref().unwrap().as_array().unwrap();
    let at_four: Vec<_> = rows.iter().filter(|row| row["n"] == 4).collect();
    assert_eq!(at_four.len(), 11);
    assert!(r.passed);
}

#[test]
fn metric_triangles_at_three() {
    let r = run(
        &[Suite::Metrics],
        &Bounds {
            n: Some(3),
            ..Bounds::default()
        },
    )
    .unwrap();
    for c in r.suites[0]
        .checks
        .iter()
        .filter(|c| c.name.ends_with("triangle inequality"))
    {
        assert_eq!((c.checked, c.failures), (34u64.pow(3), 0));
    }
}

#[test]
fn bounds_are_enforced() {
    assert!(run(
        &[Suite::Algebra],
        &Bounds {
            n: Some(6),
            ..Bounds::default()
        }
    )
    .is_err());
    assert!(run(
        &[Suite::Quotient],
        &Bounds {
            x_size: Some(4),
            y_size: Some(3),
            ..Bounds::default()
        }
    )
    .is_err());
}

#[test]
fn quotient_sizes_can_be_overridden() {
    let r = run(
        &[Suite::Quotient],
        &Bounds {
            x_size: Some(2),
            y_size: Some(4),
            ..Bounds::default()
        },
    )
    .unwrap();
    assert!(r.passed, "{}", r.summary());
    let surj = r.suites[0]
        .checks
        .iter()
        .find(|c| c.name == "surjectivity criterion")
        .unwrap();
    assert_eq!(surj.instances, "|X| = 2, |Y| = 4");
}
