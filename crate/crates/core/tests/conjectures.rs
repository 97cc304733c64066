use std::time::Duration;

use intcx::all_targets::{compute_table, Engine};
use intcx::conjectures::*;
use intcx::Limits;

#[test]
fn square_collapse_matches_table() {
    let l = Limits::default();
    let table = compute_table(9_000_000, &l, Engine::Capped).unwrap();
    let mut collapsed = 0;
    for p in (2..3000u128).filter(|&p| intcx::factorization::is_prime(p)) {
        let r = check_collapse(p, 2, &l, None).unwrap();
        let (fp, fp2) = (table.get(p as usize), table.get((p * p) as usize));
        assert_eq!(r.f_base, fp);
        assert_eq!(r.rows[1].f_power, fp2, "p = {p}");
        if fp2 < 2 * fp {
            collapsed += 1;
            assert_eq!(
                r.status,
                CollapseStatus::Collapsed { exponent: 2, f_power: fp2, bound: 2 * fp as u32 }
            );
        } else {
            assert_eq!(r.status, CollapseStatus::NoCollapseUpTo(2));
        }
    }
    // exercise both outcomes
    assert!(collapsed > 0);
}

#[test]
fn collapse_report_csv() {
    let r = check_collapse(2, 4, &Limits::default(), None).unwrap();
    assert_eq!(
        r.to_csv(),
        "member,value_f,expected,status\n2,2,2,ok\n4,4,4,ok\n8,6,6,ok\n16,8,8,ok\n"
    );
    let r = check_collapse(379, 6, &Limits::default(), Some(Duration::ZERO)).unwrap();
    assert!(r.truncated.is_some());
}

#[test]
fn family_rows_and_csv() {
    let l = Limits::default();
    let rows = evaluate_family(Family::Pow235, 1000, &l).unwrap();
    assert_eq!(rows.len(), family_members(Family::Pow235, 1000).len());
    assert!(rows.windows(2).all(|w| w[0].member < w[1].member));
    assert!(rows.iter().all(|r| r.holds()));
    let csv = family_csv(&rows[..2]);
    assert_eq!(csv, "member,value_f,expected,status\n2,2,2,ok\n3,3,3,ok\n");
    let bad = FamilyRow { member: 9, value_f: 6, expected: 7 };
    assert!(family_csv(&[bad]).ends_with("9,6,7,violation\n"));
    assert!("pow3".parse::<Family>().is_err());
    assert_eq!("pow2plus1".parse::<Family>().unwrap(), Family::Pow2Plus1);
}

#[test]
fn families_hold_to_moderate_limits() {
    let l = Limits::default();
    assert!(check_family(Family::Pow2, 1 << 32, &l).unwrap().is_empty());
    assert!(check_family(Family::Pow235, 200_000, &l).unwrap().is_empty());
    assert!(check_family(Family::Pow2Plus1, (1 << 24) + 1, &l).unwrap().is_empty());
}
