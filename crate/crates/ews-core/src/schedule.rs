//! Course structure: resource folders, the continuous-assessment timetable,
//! and the week from which each assessment category enters the models.

use alloc::string::String;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

/// Teaching weeks in the semester.
pub const TEACHING_WEEKS: u8 = 12;
/// Activity is logged for the twelve teaching weeks plus revision week.
pub const ACTIVITY_WEEKS: u8 = 13;
/// Revision week's activity-week index.
pub const REVISION_WEEK: u8 = 13;
/// Online resources are grouped into exactly this many folders.
pub const FOLDER_COUNT: usize = 15;
/// Continuous assessment carries this share of the final mark.
pub const CA_TOTAL_WEIGHT: f64 = 40.0;

/// What a resource folder holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FolderKind {
    /// Course material for one teaching week (1..=12).
    WeekMaterial(u8),
    LectureSolutions,
    CourseInfo,
    PastExams,
}

impl FolderKind {
    /// Week from which the folder can see any activity. Weekly material is
    /// posted two weeks ahead; the persistent folders are live from week 1.
    pub fn first_active_week(&self) -> u8 {
        match self {
            FolderKind::WeekMaterial(m) => m.saturating_sub(2).max(1),
            _ => 1,
        }
    }
}

/// One resource folder.
#[derive(Clone, Debug)]
pub struct FolderDescriptor {
    pub name: String,
    pub kind: FolderKind,
}

/// One continuous-assessment category.
#[derive(Clone, Debug)]
pub struct CaItem {
    pub name: String,
    pub weight_percent: f64,
    pub active_weeks: Vec<u8>,
    /// Stage week from which this category's results enter the feature matrix.
    pub model_inclusion_week: u8,
}

/// The full course layout.
#[derive(Clone, Debug)]
pub struct CourseSchedule {
    pub teaching_weeks: u8,
    pub folders: Vec<FolderDescriptor>,
    pub ca_items: Vec<CaItem>,
}

/// Schedule invariant violations.
#[derive(Clone, Debug, PartialEq)]
pub enum ScheduleError {
    FolderCount(usize),
    WeightSum(f64),
    TeachingWeeks(u8),
    BadItem(String),
}

impl fmt::Display for ScheduleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleError::FolderCount(n) => write!(f, "expected {FOLDER_COUNT} folders, got {n}"),
            ScheduleError::WeightSum(s) => {
                write!(f, "CA weights must sum to {CA_TOTAL_WEIGHT}, got {s}")
            }
            ScheduleError::TeachingWeeks(w) => {
                write!(f, "expected {TEACHING_WEEKS} teaching weeks, got {w}")
            }
            ScheduleError::BadItem(m) => write!(f, "bad CA item: {m}"),
        }
    }
}

impl core::error::Error for ScheduleError {}

impl CourseSchedule {
    pub fn validate(&self) -> Result<(), ScheduleError> {
        if self.folders.len() != FOLDER_COUNT {
            return Err(ScheduleError::FolderCount(self.folders.len()));
        }
        if self.teaching_weeks != TEACHING_WEEKS {
            return Err(ScheduleError::TeachingWeeks(self.teaching_weeks));
        }
        let sum: f64 = self.ca_items.iter().map(|i| i.weight_percent).sum();
        if (sum - CA_TOTAL_WEIGHT).abs() > 1e-9 {
            return Err(ScheduleError::WeightSum(sum));
        }
        for item in &self.ca_items {
            if item.weight_percent <= 0.0 {
                return Err(ScheduleError::BadItem(item.name.clone()));
            }
            if item.model_inclusion_week == 0 || item.model_inclusion_week > TEACHING_WEEKS {
                return Err(ScheduleError::BadItem(item.name.clone()));
            }
        }
        Ok(())
    }

    pub fn ca_item(&self, name: &str) -> Option<&CaItem> {
        self.ca_items.iter().find(|i| i.name == name)
    }

    /// Folders that can have seen activity by the given activity-week cap.
    pub fn folders_active_by(&self, week_cap: u8) -> Vec<usize> {
        self.folders
            .iter()
            .enumerate()
            .filter(|(_, fd)| week_cap >= fd.kind.first_active_week())
            .map(|(i, _)| i)
            .collect()
    }
}

/// The Practical Statistics schedule: 15 folders, six CA categories worth
/// 40% in total, with the inclusion weeks at which each category's results
/// become available to the models.
pub fn default_schedule() -> CourseSchedule {
    let mut folders = Vec::with_capacity(FOLDER_COUNT);
    for w in 1..=TEACHING_WEEKS {
        folders.push(FolderDescriptor {
            name: {
                use alloc::format;
                format!("week-{w}-material")
            },
            kind: FolderKind::WeekMaterial(w),
        });
    }
    folders.push(FolderDescriptor {
        name: "lecture-question-solutions".to_string(),
        kind: FolderKind::LectureSolutions,
    });
    folders.push(FolderDescriptor {
        name: "course-information".to_string(),
        kind: FolderKind::CourseInfo,
    });
    folders.push(FolderDescriptor {
        name: "past-exam-solutions".to_string(),
        kind: FolderKind::PastExams,
    });

    let ca_items = vec![
        CaItem {
            name: "lecture_questions".to_string(),
            weight_percent: 6.0, // 0.5% per week, weeks 1-12
            active_weeks: (1..=12).collect(),
            model_inclusion_week: 3,
        },
        CaItem {
            name: "videos".to_string(),
            weight_percent: 2.0,
            active_weeks: (1..=12).collect(),
            model_inclusion_week: 12,
        },
        CaItem {
            name: "minitab_labs".to_string(),
            weight_percent: 3.0, // 1% per week, weeks 3-5
            active_weeks: vec![3, 4, 5],
            model_inclusion_week: 5,
        },
        CaItem {
            name: "r_labs".to_string(),
            weight_percent: 4.0, // 1% per week, weeks 7-11 excluding week 8
            active_weeks: vec![7, 9, 10, 11],
            model_inclusion_week: 11,
        },
        CaItem {
            name: "minitab_exam".to_string(),
            weight_percent: 10.0,
            active_weeks: vec![6],
            model_inclusion_week: 6,
        },
        CaItem {
            name: "r_exam".to_string(),
            weight_percent: 15.0,
            active_weeks: vec![12],
            model_inclusion_week: 12,
        },
    ];

    CourseSchedule { teaching_weeks: TEACHING_WEEKS, folders, ca_items }
}
