use ews_core::mixture::{self, ClusterInput, CovarianceFamily};
use ews_core::rng::{self, rng_from};
use ews_core::generate::{generate_cohort_labeled, CohortGenConfig};
use ews_core::schedule::default_schedule;
use ews_core::staging::Stage;

fn main() {
    let schedule = default_schedule();
    let mut k3 = 0;
    let mut ari_ok = 0;
    for seed in 40..60u64 {
        let cfg = CohortGenConfig::with_seed(seed);
        let (cohort, labels) = generate_cohort_labeled(&cfg, &schedule).unwrap();
        match mixture::memberships_at_stage(&cohort, &schedule, Stage::week(5), seed) {
            Ok((assign, model)) => {
                let ari = mixture::adjusted_rand_index(&assign.hard, &labels);
                let mut sizes = vec![0usize; model.k];
                for &h in &assign.hard { sizes[h] += 1; }
                println!("seed {seed}: K={} {:?} ari={ari:.3} sizes={sizes:?} bic={:.0}", model.k, model.family, model.bic);
                if model.k != 3 {
                    // compare against the K=3 diagonal-varying fit
                    let input = mixture::cluster_input_at_stage(&cohort, &schedule, Stage::week(5)).unwrap();
                    let sseed = rng::derive_seed(seed, &[rng::tag("cluster-stage"), 5]);
                    if let Ok(m3) = mixture::fit_em(&input, 3, CovarianceFamily::DiagonalVarying, sseed) {
                        println!("   K=3 dv bic={:.0} (gap {:.0})", m3.bic, model.bic - m3.bic);
                    }
                }
                if model.k == 3 { k3 += 1; }
                if ari >= 0.9 { ari_ok += 1; }
            }
            Err(e) => println!("seed {seed}: ERR {e}"),
        }
    }
    println!("K=3: {k3}/20, ARI>=0.9: {ari_ok}/20");
    // keep single-gaussian check quick
    let mut hits = 0;
    for seed in 0..20u64 {
        let mut r = rng_from(900 + seed, &[]);
        let cols: Vec<Vec<f64>> = (0..3).map(|_| (0..400).map(|_| rng::normal(&mut r)).collect()).collect();
        let names = (0..3).map(|i| format!("c{i}")).collect();
        let input = ClusterInput::from_columns(names, cols).unwrap();
        let m = mixture::select_model(&input, 1..=4, &CovarianceFamily::ALL, seed).unwrap();
        if m.k == 1 { hits += 1; }
    }
    println!("single gaussian K=1 hits: {hits}/20");
}
