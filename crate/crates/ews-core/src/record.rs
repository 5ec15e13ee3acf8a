//! Per-student records: background categories, continuous-assessment scores,
//! fine-grained folder activity, and the final grade.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::schedule::{CourseSchedule, ACTIVITY_WEEKS, FOLDER_COUNT};

/// Saturday counts fold into the weekday bucket; Sunday is tracked alone
/// because submission deadlines fall on Sunday nights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DayClass {
    Weekday,
    Sunday,
}

impl DayClass {
    pub const ALL: [DayClass; 2] = [DayClass::Weekday, DayClass::Sunday];

    pub fn code(&self) -> &'static str {
        match self {
            DayClass::Weekday => "WD",
            DayClass::Sunday => "SU",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "WD" => Some(DayClass::Weekday),
            "SU" => Some(DayClass::Sunday),
            _ => None,
        }
    }

    fn slot(&self) -> usize {
        match self {
            DayClass::Weekday => 0,
            DayClass::Sunday => 1,
        }
    }
}

macro_rules! category {
    ($name:ident { $($variant:ident => $label:literal),+ $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant,)+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant,)+];

            pub fn label(&self) -> &'static str {
                match self {
                    $($name::$variant => $label,)+
                }
            }

            pub fn parse(s: &str) -> Option<Self> {
                match s {
                    $($label => Some($name::$variant),)+
                    _ => None,
                }
            }

            pub fn index(&self) -> usize {
                Self::ALL.iter().position(|v| v == self).unwrap()
            }
        }
    };
}

category!(Gender { Female => "female", Male => "male" });
category!(CourseType { Elective => "elective", Option => "option", Core => "core" });
category!(RegistrationStatus {
    Standard => "standard",
    Repeat => "repeat",
    Resit => "resit",
    Exchange => "exchange",
});
category!(YearOfStudy {
    Year1 => "year1",
    Year2 => "year2",
    Year3 => "year3",
    Year4 => "year4",
    Year5 => "year5",
});
category!(Programme {
    Science => "science",
    Arts => "arts",
    Engineering => "engineering",
    Business => "business",
    Agriculture => "agriculture",
    Health => "health",
    Law => "law",
    Computing => "computing",
});
category!(Nationality { Irish => "irish", NonIrish => "non_irish" });

/// The six background fields, in canonical column order.
pub const BACKGROUND_FIELDS: [&str; 6] = [
    "gender",
    "course_type",
    "registration_status",
    "year_of_study",
    "programme",
    "nationality_flag",
];

/// Level vocabulary for one background field, in canonical order.
pub fn background_levels(field: &str) -> &'static [&'static str] {
    match field {
        "gender" => &["female", "male"],
        "course_type" => &["elective", "option", "core"],
        "registration_status" => &["standard", "repeat", "resit", "exchange"],
        "year_of_study" => &["year1", "year2", "year3", "year4", "year5"],
        "programme" => &[
            "science",
            "arts",
            "engineering",
            "business",
            "agriculture",
            "health",
            "law",
            "computing",
        ],
        "nationality_flag" => &["irish", "non_irish"],
        _ => &[],
    }
}

/// Dense (folder, week, day-class) view-count grid. Weeks run 1..=13
/// (teaching weeks plus revision week); absent cells are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActivityGrid {
    counts: Vec<u32>,
}

impl ActivityGrid {
    pub fn zeros() -> Self {
        Self { counts: vec![0; FOLDER_COUNT * ACTIVITY_WEEKS as usize * 2] }
    }

    fn idx(folder: usize, week: u8, day: DayClass) -> usize {
        debug_assert!(folder < FOLDER_COUNT);
        debug_assert!((1..=ACTIVITY_WEEKS).contains(&week));
        (folder * ACTIVITY_WEEKS as usize + (week as usize - 1)) * 2 + day.slot()
    }

    pub fn get(&self, folder: usize, week: u8, day: DayClass) -> u32 {
        self.counts[Self::idx(folder, week, day)]
    }

    pub fn set(&mut self, folder: usize, week: u8, day: DayClass, count: u32) {
        self.counts[Self::idx(folder, week, day)] = count;
    }

    pub fn raw(&self) -> &[u32] {
        &self.counts
    }

    /// Total views for a folder/day-class over weeks 1..=week_cap.
    pub fn cumulative(&self, folder: usize, day: DayClass, week_cap: u8) -> u32 {
        (1..=week_cap.min(ACTIVITY_WEEKS)).map(|w| self.get(folder, w, day)).sum()
    }
}

/// One student's data: the six background fields, CA category scores keyed
/// by schedule item name (absent means no result recorded), the activity
/// grid, and the final percentage grade.
#[derive(Clone, Debug)]
pub struct StudentRecord {
    pub student_code: String,
    pub gender: Option<Gender>,
    pub course_type: Option<CourseType>,
    pub registration_status: Option<RegistrationStatus>,
    pub year_of_study: Option<YearOfStudy>,
    pub programme: Option<Programme>,
    pub nationality_flag: Option<Nationality>,
    pub ca_results: BTreeMap<String, f64>,
    pub activity: ActivityGrid,
    pub final_grade: f64,
}

impl StudentRecord {
    /// Background labels in canonical field order; None marks a missing field.
    pub fn background_labels(&self) -> [Option<&'static str>; 6] {
        [
            self.gender.map(|v| v.label()),
            self.course_type.map(|v| v.label()),
            self.registration_status.map(|v| v.label()),
            self.year_of_study.map(|v| v.label()),
            self.programme.map(|v| v.label()),
            self.nationality_flag.map(|v| v.label()),
        ]
    }

    /// Weighted CA percentage on the 0..100 scale (missing items count 0).
    pub fn ca_percent(&self, schedule: &CourseSchedule) -> f64 {
        let total: f64 = schedule.ca_items.iter().map(|i| i.weight_percent).sum();
        let earned: f64 = schedule
            .ca_items
            .iter()
            .map(|i| i.weight_percent * self.ca_results.get(&i.name).copied().unwrap_or(0.0))
            .sum();
        earned / total
    }
}

/// One record-validation problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Check every record invariant and that CA entries reference schedule
/// items. Returns the list of violations; never fails.
pub fn validate_record(r: &StudentRecord, schedule: &CourseSchedule) -> Vec<Violation> {
    let mut out = Vec::new();
    if r.student_code.is_empty() {
        out.push(Violation {
            field: "student_code".into(),
            message: "must not be empty".into(),
        });
    }
    let labels = r.background_labels();
    for (field, value) in BACKGROUND_FIELDS.iter().zip(labels.iter()) {
        if value.is_none() {
            out.push(Violation { field: (*field).into(), message: "missing".into() });
        }
    }
    for (name, score) in &r.ca_results {
        if schedule.ca_item(name).is_none() {
            out.push(Violation {
                field: format!("ca:{name}"),
                message: "references unknown schedule item".into(),
            });
        }
        if !(0.0..=100.0).contains(score) || !score.is_finite() {
            out.push(Violation {
                field: format!("ca:{name}"),
                message: format!("score {score} outside [0, 100]"),
            });
        }
    }
    if !(0.0..=100.0).contains(&r.final_grade) || !r.final_grade.is_finite() {
        out.push(Violation {
            field: "final_grade".into(),
            message: format!("{} outside [0, 100]", r.final_grade),
        });
    }
    out
}

#[cfg(test)]
pub(crate) fn sample_record(code: &str, schedule: &CourseSchedule) -> StudentRecord {
    let mut ca = BTreeMap::new();
    for item in &schedule.ca_items {
        ca.insert(item.name.clone(), 70.0);
    }
    StudentRecord {
        student_code: code.into(),
        gender: Some(Gender::Female),
        course_type: Some(CourseType::Core),
        registration_status: Some(RegistrationStatus::Standard),
        year_of_study: Some(YearOfStudy::Year1),
        programme: Some(Programme::Science),
        nationality_flag: Some(Nationality::Irish),
        ca_results: ca,
        activity: ActivityGrid::zeros(),
        final_grade: 68.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::default_schedule;

    #[test]
    fn well_formed_record_validates() {
        let s = default_schedule();
        let r = sample_record("8979", &s);
        assert!(validate_record(&r, &s).is_empty());
    }

    #[test]
    fn missing_gender_is_one_violation() {
        let s = default_schedule();
        let mut r = sample_record("8979", &s);
        r.gender = None;
        let v = validate_record(&r, &s);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "gender");
    }

    #[test]
    fn unknown_ca_item_is_one_violation() {
        let s = default_schedule();
        let mut r = sample_record("8979", &s);
        r.ca_results.insert("pop_quiz".into(), 50.0);
        let v = validate_record(&r, &s);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "ca:pop_quiz");
    }

    #[test]
    fn grade_out_of_range_flagged() {
        let s = default_schedule();
        let mut r = sample_record("8979", &s);
        r.final_grade = 101.0;
        let v = validate_record(&r, &s);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "final_grade");
    }

    #[test]
    fn activity_grid_cumulative() {
        let mut g = ActivityGrid::zeros();
        g.set(3, 1, DayClass::Weekday, 4);
        g.set(3, 2, DayClass::Weekday, 5);
        g.set(3, 2, DayClass::Sunday, 7);
        assert_eq!(g.cumulative(3, DayClass::Weekday, 2), 9);
        assert_eq!(g.cumulative(3, DayClass::Weekday, 1), 4);
        assert_eq!(g.cumulative(3, DayClass::Sunday, 13), 7);
        assert_eq!(g.get(3, 1, DayClass::Sunday), 0);
    }

    #[test]
    fn background_vocabulary_sizes() {
        // one-hot with reference dropping must yield 18 indicator columns
        let total: usize =
            BACKGROUND_FIELDS.iter().map(|f| background_levels(f).len() - 1).sum();
        assert_eq!(total, 18);
    }
}
