//! Exhaustive transport check over small tuples.

use superchar::dynkin::{check_size, transport_highest_weight, Target};
use superchar::partition::Partition;
use superchar::weight::DominantTuple;

#[test]
fn all_targets_agree_with_reflection_fold() {
    let parts: Vec<Partition> = (0..=6).flat_map(Partition::all_of_size).collect();
    let mut checked = 0;
    for n in 1..=4u32 {
        for lm in &parts {
            for lp in &parts {
                for k in 0..=2usize {
                    let t = DominantTuple::new(1, (0..k as i64).map(|j| 2 - j).collect(), lm.clone(), lp.clone());
                    for target in Target::ALL {
                        if check_size(&t, n, target).is_err() {
                            continue;
                        }
                        transport_highest_weight(&t, n, target).unwrap();
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 1000, "{checked}");
}
