use ews_core::generate::{generate_cohort_labeled, CohortGenConfig};
use ews_core::schedule::default_schedule;

fn main() {
    for seed in [40u64, 50] {
        let cfg = CohortGenConfig::with_seed(seed);
        let (_, labels) = generate_cohort_labeled(&cfg, &default_schedule()).unwrap();
        let mut counts = [0usize; 3];
        for &l in &labels { counts[l] += 1; }
        println!("seed {seed}: planted sizes {counts:?}");
    }
}
