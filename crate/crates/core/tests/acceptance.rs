use leaky_hurwitz::acceptance::run_all;

#[test]
fn acceptance_criteria() {
    let reports = run_all();
    for report in &reports {
        println!("{report}");
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.number).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
