mod common;

use common::linalg_oracle::{exact_negative_inertia, exact_rank, run};

#[test]
fn exact_helpers() {
    assert_eq!(exact_rank(&[vec![1, 2], vec![2, 4]]), 1);
    assert_eq!(exact_rank(&[vec![0, 1], vec![1, 0]]), 2);
    assert_eq!(exact_negative_inertia(&[vec![0, 1], vec![1, 0]]), Some(1));
    assert_eq!(exact_negative_inertia(&[vec![-1, 0], vec![0, -2]]), Some(2));
    assert_eq!(exact_negative_inertia(&[vec![1, 1], vec![1, 1]]), None);
}

#[test]
fn frames_agree_with_exact_arithmetic() {
    let s = run(500, 0x5eed);
    assert_eq!(s.instances, 500);
    assert!(
        s.with_radical >= 50,
        "only {} degenerate instances",
        s.with_radical
    );
    assert!(s.failures.is_empty(), "{:#?}", s.failures);
}
