//! Deterministic synthetic cohort generator.
//!
//! Real LMS extracts are access-restricted, so benchmarks run on generated
//! cohorts with planted structure: three engagement archetypes (high overall;
//! average weekday with quiet Sundays; near-silent), Sunday and exam-week
//! activity spikes, and a final grade tied to continuous assessment and
//! engagement through an explicit signal specification. Everything is a pure
//! function of the config, so a seed pins the cohort byte for byte.

use alloc::collections::BTreeMap;
use alloc::format;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::metrics::clamp_grade;
use crate::record::{
    ActivityGrid, CourseType, DayClass, Gender, Nationality, Programme, RegistrationStatus,
    StudentRecord, YearOfStudy,
};
use crate::rng::{self, rng_from, SimRng};
use crate::schedule::{CourseSchedule, FolderKind, REVISION_WEEK};

/// Links the written-exam score to observed CA and latent engagement:
/// `exam = intercept + ca_coef * ca_percent + engagement_coef * engagement_index + noise`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignalSpec {
    pub exam_intercept: f64,
    pub exam_ca_coef: f64,
    pub exam_engagement_coef: f64,
}

impl Default for SignalSpec {
    fn default() -> Self {
        Self { exam_intercept: 0.0, exam_ca_coef: 1.0, exam_engagement_coef: 3.0 }
    }
}

/// Generator configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct CohortGenConfig {
    pub n_students: usize,
    /// Mixing proportions over engagement archetypes; must sum to 1.
    pub archetype_proportions: Vec<f64>,
    /// Standard deviation of the written-exam noise, in grade points.
    pub noise_sd: f64,
    pub seed: u64,
    pub signal: SignalSpec,
}

impl CohortGenConfig {
    /// Default cohort: 136 students, archetype mix 0.45/0.51/0.04, exam
    /// noise calibrated so its irreducible MAE contribution is 5 grade
    /// points (0.6 * sd * sqrt(2/pi) = 5).
    pub fn with_seed(seed: u64) -> Self {
        Self {
            n_students: 136,
            archetype_proportions: vec![0.45, 0.51, 0.04],
            noise_sd: default_noise_sd(),
            seed,
            signal: SignalSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let sum: f64 = self.archetype_proportions.iter().sum();
        if self.archetype_proportions.is_empty()
            || self.archetype_proportions.iter().any(|p| *p < 0.0)
            || (sum - 1.0).abs() > 1e-9
        {
            return Err(GenError::BadProportions(sum));
        }
        if self.n_students < 20 {
            return Err(GenError::TooFewStudents(self.n_students));
        }
        if !(self.noise_sd.is_finite() && self.noise_sd >= 0.0) {
            return Err(GenError::BadNoiseSd(self.noise_sd));
        }
        Ok(())
    }
}

/// Exam-noise sd whose MAE contribution to the final grade is 5 points.
pub fn default_noise_sd() -> f64 {
    5.0 / (0.6 * (2.0 / core::f64::consts::PI).sqrt())
}

/// Irreducible MAE of the final grade given everything but the exam noise.
pub fn bayes_optimal_mae(noise_sd: f64) -> f64 {
    0.6 * noise_sd * (2.0 / core::f64::consts::PI).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub enum GenError {
    BadProportions(f64),
    TooFewStudents(usize),
    BadNoiseSd(f64),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::BadProportions(s) => {
                write!(f, "archetype proportions must sum to 1, got {s}")
            }
            GenError::TooFewStudents(n) => write!(f, "need at least 20 students, got {n}"),
            GenError::BadNoiseSd(s) => write!(f, "noise_sd must be finite and >= 0, got {s}"),
        }
    }
}

impl core::error::Error for GenError {}

struct Archetype {
    weekday_rate: f64,
    sunday_rate: f64,
    ability_mean: f64,
    engagement_base: f64,
}

fn archetype(index: usize) -> Archetype {
    // 0: above-average overall; 1: average weekday, below-average Sunday;
    // 2: near-zero activity
    const TABLE: [(f64, f64, f64, f64); 3] = [
        (22.0, 30.0, 62.0, 1.0),
        (16.0, 12.0, 58.0, 0.0),
        (1.20, 0.80, 45.0, -2.2),
    ];
    let (wd, su, ab, eng) = TABLE[index % 3];
    let stretch = 1.0 + (index / 3) as f64 * 0.5;
    Archetype {
        weekday_rate: wd * stretch,
        sunday_rate: su * stretch,
        ability_mean: ab,
        engagement_base: eng,
    }
}

const ABILITY_SD: f64 = 15.0;
// kept small so within-archetype activity noise stays near-independent
// across cells and the planted archetypes remain the only joint structure
const ENGAGEMENT_MULT_SD: f64 = 0.05;
const COUNT_GAMMA_SHAPE: f64 = 40.0;

/// Per-category score noise around latent ability, in grade points.
fn ca_item_noise(name: &str) -> (f64, f64) {
    // (bias, sd)
    match name {
        "lecture_questions" => (0.0, 14.0),
        "videos" => (20.0, 4.0),
        "minitab_labs" => (0.0, 12.0),
        "r_labs" => (0.0, 6.0),
        "minitab_exam" => (0.0, 2.5),
        "r_exam" => (0.0, 2.5),
        _ => (0.0, 8.0),
    }
}

fn folder_week_profile(kind: FolderKind, week: u8) -> f64 {
    match kind {
        FolderKind::WeekMaterial(m) => {
            if week == REVISION_WEEK {
                return 0.45;
            }
            let w = week as i32 - m as i32;
            match w {
                -2 => 0.35,
                -1 => 0.50,
                0 => 1.0,
                1 => 0.60,
                2 => 0.45,
                d if d > 2 => 0.35,
                _ => 0.0,
            }
        }
        FolderKind::LectureSolutions => {
            if week == REVISION_WEEK {
                0.7
            } else {
                0.5
            }
        }
        FolderKind::CourseInfo => match week {
            1 => 1.2,
            2 => 0.8,
            REVISION_WEEK => 0.45,
            _ => 0.40,
        },
        FolderKind::PastExams => match week {
            REVISION_WEEK => 2.0,
            12 => 1.2,
            11 => 0.8,
            10 => 0.6,
            _ => 0.35,
        },
    }
}

fn exam_week_mult(week: u8) -> f64 {
    match week {
        6 | 12 => 1.8,
        REVISION_WEEK => 1.3,
        _ => 1.0,
    }
}

fn weighted_choice(rng: &mut SimRng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut draw = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        draw -= w;
        if draw < 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

fn sample_background(rng: &mut SimRng) -> (Gender, CourseType, RegistrationStatus, YearOfStudy, Programme, Nationality)
{
    let gender = Gender::ALL[weighted_choice(rng, &[0.52, 0.48])];
    let course_type = CourseType::ALL[weighted_choice(rng, &[0.30, 0.20, 0.50])];
    let registration = RegistrationStatus::ALL[weighted_choice(rng, &[0.88, 0.07, 0.03, 0.02])];
    let year = YearOfStudy::ALL[weighted_choice(rng, &[0.70, 0.15, 0.08, 0.05, 0.02])];
    let programme = Programme::ALL[weighted_choice(
        rng,
        &[0.30, 0.15, 0.12, 0.12, 0.08, 0.10, 0.05, 0.08],
    )];
    let nationality = Nationality::ALL[weighted_choice(rng, &[0.85, 0.15])];
    (gender, course_type, registration, year, programme, nationality)
}

/// Archetype labels by largest-remainder allocation of the proportions,
/// shuffled deterministically. Keeps planted cluster sizes at their expected
/// values instead of leaving them to multinomial noise.
fn allocate_archetypes(cfg: &CohortGenConfig) -> Vec<usize> {
    let n = cfg.n_students;
    let mut counts: Vec<usize> =
        cfg.archetype_proportions.iter().map(|p| (p * n as f64) as usize).collect();
    let mut remainders: Vec<(f64, usize)> = cfg
        .archetype_proportions
        .iter()
        .enumerate()
        .map(|(i, p)| (p * n as f64 - counts[i] as f64, i))
        .collect();
    remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut short = n - counts.iter().sum::<usize>();
    for &(_, i) in remainders.iter().cycle().take(remainders.len().max(short)) {
        if short == 0 {
            break;
        }
        counts[i] += 1;
        short -= 1;
    }
    let mut labels = Vec::with_capacity(n);
    for (arch, &count) in counts.iter().enumerate() {
        labels.extend(core::iter::repeat(arch).take(count));
    }
    let mut rng = rng_from(cfg.seed, &[rng::tag("archetypes")]);
    for i in (1..labels.len()).rev() {
        let j = rng.gen_range(0..=i);
        labels.swap(i, j);
    }
    labels
}

/// Generate a cohort along with the planted archetype label per student.
pub fn generate_cohort_labeled(
    cfg: &CohortGenConfig,
    schedule: &CourseSchedule,
) -> Result<(Vec<StudentRecord>, Vec<usize>), GenError> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.n_students);
    let labels = allocate_archetypes(cfg);
    for (i, &arch_index) in labels.iter().enumerate() {
        let mut rng = rng_from(cfg.seed, &[rng::tag("student"), i as u64]);
        let arch = archetype(arch_index);

        let (gender, course_type, registration, year, programme, nationality) =
            sample_background(&mut rng);

        let ability = (arch.ability_mean + ABILITY_SD * rng::normal(&mut rng)).clamp(2.0, 98.0);
        let engagement_draw = rng::normal(&mut rng);
        let mult = (ENGAGEMENT_MULT_SD * engagement_draw).exp();
        let engagement_index = arch.engagement_base + 0.5 * engagement_draw;

        let mut ca_results = BTreeMap::new();
        for item in &schedule.ca_items {
            let (bias, sd) = ca_item_noise(&item.name);
            let score = clamp_grade(ability + bias + sd * rng::normal(&mut rng));
            ca_results.insert(item.name.clone(), score);
        }

        let mut activity = ActivityGrid::zeros();
        for (folder, fd) in schedule.folders.iter().enumerate() {
            for week in 1..=crate::schedule::ACTIVITY_WEEKS {
                let profile = folder_week_profile(fd.kind, week);
                if profile <= 0.0 {
                    continue;
                }
                let shared = profile * exam_week_mult(week) * mult;
                let gain_wd = rng::gamma(&mut rng, COUNT_GAMMA_SHAPE, 1.0 / COUNT_GAMMA_SHAPE);
                let gain_su = rng::gamma(&mut rng, COUNT_GAMMA_SHAPE, 1.0 / COUNT_GAMMA_SHAPE);
                let wd = rng::poisson(&mut rng, arch.weekday_rate * shared * gain_wd);
                let su = rng::poisson(&mut rng, arch.sunday_rate * shared * gain_su);
                activity.set(folder, week, DayClass::Weekday, wd);
                activity.set(folder, week, DayClass::Sunday, su);
            }
        }

        let record_stub = StudentRecord {
            student_code: format!("s{:04}", i + 1),
            gender: Some(gender),
            course_type: Some(course_type),
            registration_status: Some(registration),
            year_of_study: Some(year),
            programme: Some(programme),
            nationality_flag: Some(nationality),
            ca_results,
            activity,
            final_grade: 0.0,
        };
        let ca_percent = record_stub.ca_percent(schedule);
        let exam = clamp_grade(
            cfg.signal.exam_intercept
                + cfg.signal.exam_ca_coef * ca_percent
                + cfg.signal.exam_engagement_coef * engagement_index
                + cfg.noise_sd * rng::normal(&mut rng),
        );
        let final_grade = clamp_grade(planted_final_grade(ca_percent, exam));

        let mut record = record_stub;
        record.final_grade = final_grade;
        records.push(record);
    }
    Ok((records, labels))
}

/// Final grade formula: 40% weighted CA, 60% written exam.
pub fn planted_final_grade(ca_percent: f64, exam_score: f64) -> f64 {
    0.4 * ca_percent + 0.6 * exam_score
}

/// Generate a cohort (labels discarded).
pub fn generate_cohort(
    cfg: &CohortGenConfig,
    schedule: &CourseSchedule,
) -> Result<Vec<StudentRecord>, GenError> {
    generate_cohort_labeled(cfg, schedule).map(|(records, _)| records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::validate_record;
    use crate::schedule::default_schedule;

    #[test]
    fn default_cohort_has_136_valid_records() {
        let schedule = default_schedule();
        let cfg = CohortGenConfig::with_seed(1);
        let cohort = generate_cohort(&cfg, &schedule).unwrap();
        assert_eq!(cohort.len(), 136);
        for r in &cohort {
            assert!(validate_record(r, &schedule).is_empty());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let schedule = default_schedule();
        let cfg = CohortGenConfig::with_seed(1);
        let a = generate_cohort(&cfg, &schedule).unwrap();
        let b = generate_cohort(&cfg, &schedule).unwrap();
        assert_eq!(
            crate::fingerprint::cohort_fingerprint(&a),
            crate::fingerprint::cohort_fingerprint(&b)
        );
        let cfg2 = CohortGenConfig::with_seed(2);
        let c = generate_cohort(&cfg2, &schedule).unwrap();
        assert_ne!(
            crate::fingerprint::cohort_fingerprint(&a),
            crate::fingerprint::cohort_fingerprint(&c)
        );
    }

    #[test]
    fn zero_noise_grades_follow_planted_formula() {
        let schedule = default_schedule();
        let mut cfg = CohortGenConfig::with_seed(9);
        cfg.noise_sd = 0.0;
        cfg.signal.exam_engagement_coef = 0.0;
        let cohort = generate_cohort(&cfg, &schedule).unwrap();
        for r in &cohort {
            let ca = r.ca_percent(&schedule);
            let exam = clamp_grade(cfg.signal.exam_intercept + cfg.signal.exam_ca_coef * ca);
            let expected = clamp_grade(planted_final_grade(ca, exam));
            assert!(
                (expected - r.final_grade).abs() < 1e-9,
                "expected {expected}, stored {}",
                r.final_grade
            );
        }
    }

    #[test]
    fn bad_proportions_rejected() {
        let schedule = default_schedule();
        let mut cfg = CohortGenConfig::with_seed(1);
        cfg.archetype_proportions = alloc::vec![0.5, 0.4];
        assert!(matches!(
            generate_cohort(&cfg, &schedule),
            Err(GenError::BadProportions(_))
        ));
        cfg.archetype_proportions = alloc::vec![0.45, 0.51, 0.04];
        cfg.n_students = 10;
        assert!(matches!(
            generate_cohort(&cfg, &schedule),
            Err(GenError::TooFewStudents(10))
        ));
    }

    #[test]
    fn sundays_and_exam_weeks_spike() {
        let schedule = default_schedule();
        let cfg = CohortGenConfig::with_seed(3);
        let (cohort, labels) = generate_cohort_labeled(&cfg, &schedule).unwrap();
        // archetype 0 students view more on Sundays than an average weekday
        let mut sunday_total = 0u64;
        let mut weekday_total = 0u64;
        for (r, &a) in cohort.iter().zip(&labels) {
            if a != 0 {
                continue;
            }
            for f in 0..15 {
                for w in 1..=13 {
                    weekday_total += r.activity.get(f, w, DayClass::Weekday) as u64;
                    sunday_total += r.activity.get(f, w, DayClass::Sunday) as u64;
                }
            }
        }
        // weekday bucket covers six days; compare per-day volumes
        assert!(sunday_total as f64 > weekday_total as f64 / 6.0);

        // exam week 6 sees more traffic than week 7 across the cohort
        let week_total = |week: u8| -> u64 {
            cohort
                .iter()
                .flat_map(|r| {
                    (0..15).map(move |f| {
                        r.activity.get(f, week, DayClass::Weekday) as u64
                            + r.activity.get(f, week, DayClass::Sunday) as u64
                    })
                })
                .sum()
        };
        assert!(week_total(6) > week_total(7));
        assert!(week_total(12) > week_total(10));
    }

    #[test]
    fn bayes_mae_calibration() {
        let sd = default_noise_sd();
        assert!((bayes_optimal_mae(sd) - 5.0).abs() < 1e-12);
    }
}
