//! Stage and feature-set materialization: turns a cohort into the design
//! matrix for any of the fifteen semester stages under any of the four
//! feature sets, with strict temporal cutoffs (nothing revealed after a
//! stage may appear in its matrix).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::record::{background_levels, DayClass, StudentRecord, BACKGROUND_FIELDS};
use crate::schedule::{CourseSchedule, ACTIVITY_WEEKS, REVISION_WEEK, TEACHING_WEEKS};

/// One of the fifteen cumulative time points at which a model is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stage(u8);

impl Stage {
    pub const COUNT: usize = 15;

    pub fn initial() -> Self {
        Stage(0)
    }

    /// Teaching week 1..=12.
    pub fn week(w: u8) -> Self {
        assert!((1..=TEACHING_WEEKS).contains(&w), "teaching week out of range: {w}");
        Stage(w)
    }

    pub fn revision() -> Self {
        Stage(13)
    }

    pub fn end_of_semester() -> Self {
        Stage(14)
    }

    pub fn from_index(i: usize) -> Option<Self> {
        (i < Self::COUNT).then_some(Stage(i as u8))
    }

    pub fn index(&self) -> usize {
        self.0 as usize
    }

    /// Teaching week this stage closes, if it is a weekly stage.
    pub fn teaching_week(&self) -> Option<u8> {
        (1..=TEACHING_WEEKS).contains(&self.0).then_some(self.0)
    }

    /// Latest activity week visible at this stage (0 = none yet).
    pub fn activity_week_cap(&self) -> u8 {
        match self.0 {
            0 => 0,
            w @ 1..=TEACHING_WEEKS => w,
            _ => REVISION_WEEK,
        }
    }

    /// Latest CA inclusion week admitted at this stage (0 = none yet).
    pub fn ca_week_cap(&self) -> u8 {
        match self.0 {
            0 => 0,
            w @ 1..=TEACHING_WEEKS => w,
            _ => TEACHING_WEEKS,
        }
    }

    pub fn label(&self) -> String {
        match self.0 {
            0 => "initial".to_string(),
            w @ 1..=TEACHING_WEEKS => format!("week{w}"),
            13 => "revision".to_string(),
            _ => "final".to_string(),
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "initial" => Some(Stage(0)),
            "revision" => Some(Stage(13)),
            "final" => Some(Stage(14)),
            _ => {
                let w: u8 = s.strip_prefix("week")?.parse().ok()?;
                (1..=TEACHING_WEEKS).contains(&w).then_some(Stage(w))
            }
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// The fifteen fixed stages in order.
pub fn stage_schedule() -> Vec<Stage> {
    (0..Stage::COUNT).map(|i| Stage(i as u8)).collect()
}

/// Column composition applied at a stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FeatureSet {
    /// Background + included CA + per-(folder, week, day-class) activity.
    Initial,
    /// Background + included CA only.
    NoLms,
    /// Background + included CA + per-folder cumulative weekday/Sunday counts.
    Cumulative,
    /// Cumulative columns + cluster membership (hard label + soft probabilities).
    Cluster,
}

impl FeatureSet {
    pub const ALL: [FeatureSet; 4] =
        [FeatureSet::Initial, FeatureSet::NoLms, FeatureSet::Cumulative, FeatureSet::Cluster];

    pub fn label(&self) -> &'static str {
        match self {
            FeatureSet::Initial => "initial",
            FeatureSet::NoLms => "no_lms",
            FeatureSet::Cumulative => "cumulative",
            FeatureSet::Cluster => "cluster",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|f| f.label() == s)
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Where a column's values came from; drives the export manifest.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    Background { field: &'static str },
    CaItem { item: String },
    Activity { folder: usize, week: u8, day: DayClass },
    CumulativeActivity { folder: usize, day: DayClass },
    ClusterLabel,
    ClusterProbability { component: usize },
}

impl Provenance {
    /// Manifest rendering: `source,folder,week,day_class` fields.
    pub fn describe(&self) -> String {
        match self {
            Provenance::Background { field } => format!("background:{field},,,"),
            Provenance::CaItem { item } => format!("ca:{item},,,"),
            Provenance::Activity { folder, week, day } => {
                format!("activity,{},{},{}", folder + 1, week, day.code())
            }
            Provenance::CumulativeActivity { folder, day } => {
                format!("cumulative_activity,{},,{}", folder + 1, day.code())
            }
            Provenance::ClusterLabel => "cluster_label,,,".to_string(),
            Provenance::ClusterProbability { component } => {
                format!("cluster_probability,{component},,")
            }
        }
    }
}

/// Categorical column: codes index into a fixed level vocabulary.
#[derive(Clone, Debug, PartialEq)]
pub struct CatColumn {
    pub levels: Vec<String>,
    pub codes: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ColumnValues {
    Numeric(Vec<f64>),
    Categorical(CatColumn),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub provenance: Provenance,
    pub values: ColumnValues,
}

impl Column {
    pub fn is_numeric(&self) -> bool {
        matches!(self.values, ColumnValues::Numeric(_))
    }
}

/// Design matrix for one (stage, feature set) pair.
#[derive(Clone, Debug, PartialEq)]
pub struct StageFeatureMatrix {
    pub stage: Stage,
    pub feature_set: FeatureSet,
    pub columns: Vec<Column>,
    pub response: Vec<f64>,
}

impl StageFeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.response.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    /// Explanatory-variable count under the canonical convention: every
    /// column counts once except soft-membership probabilities, which are
    /// views of the single cluster-membership variable.
    pub fn canonical_variable_count(&self) -> usize {
        self.columns
            .iter()
            .filter(|c| !matches!(c.provenance, Provenance::ClusterProbability { .. }))
            .count()
    }

    /// Row-subset copy preserving column order and metadata.
    pub fn subset_rows(&self, rows: &[usize]) -> StageFeatureMatrix {
        let columns = self
            .columns
            .iter()
            .map(|c| Column {
                name: c.name.clone(),
                provenance: c.provenance.clone(),
                values: match &c.values {
                    ColumnValues::Numeric(v) => {
                        ColumnValues::Numeric(rows.iter().map(|&r| v[r]).collect())
                    }
                    ColumnValues::Categorical(cat) => ColumnValues::Categorical(CatColumn {
                        levels: cat.levels.clone(),
                        codes: rows.iter().map(|&r| cat.codes[r]).collect(),
                    }),
                },
            })
            .collect();
        StageFeatureMatrix {
            stage: self.stage,
            feature_set: self.feature_set,
            columns,
            response: rows.iter().map(|&r| self.response[r]).collect(),
        }
    }
}

/// Per-stage cluster memberships attached to the Cluster feature set.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterAssignment {
    /// Hard label (argmax component) per student.
    pub hard: Vec<usize>,
    /// Row-stochastic soft memberships, one row per student.
    pub soft: Vec<Vec<f64>>,
}

impl ClusterAssignment {
    pub fn n_components(&self) -> usize {
        self.soft.first().map(|r| r.len()).unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StagingError {
    ClusterMembershipsRequired,
    MembershipLength { expected: usize, got: usize },
    IncompleteRecord { row: usize, field: &'static str },
}

impl fmt::Display for StagingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StagingError::ClusterMembershipsRequired => {
                write!(f, "the cluster feature set requires memberships for this stage")
            }
            StagingError::MembershipLength { expected, got } => {
                write!(f, "membership vector length {got} does not match cohort size {expected}")
            }
            StagingError::IncompleteRecord { row, field } => {
                write!(f, "record {row} is missing background field {field}")
            }
        }
    }
}

impl core::error::Error for StagingError {}

fn background_columns(cohort: &[StudentRecord]) -> Result<Vec<Column>, StagingError> {
    let mut out = Vec::with_capacity(BACKGROUND_FIELDS.len());
    for (fi, field) in BACKGROUND_FIELDS.iter().enumerate() {
        let levels: Vec<String> =
            background_levels(field).iter().map(|s| s.to_string()).collect();
        let mut codes = Vec::with_capacity(cohort.len());
        for (row, r) in cohort.iter().enumerate() {
            let label = r.background_labels()[fi]
                .ok_or(StagingError::IncompleteRecord { row, field })?;
            let code = levels.iter().position(|l| l == label).unwrap() as u32;
            codes.push(code);
        }
        out.push(Column {
            name: (*field).to_string(),
            provenance: Provenance::Background { field },
            values: ColumnValues::Categorical(CatColumn { levels, codes }),
        });
    }
    Ok(out)
}

fn ca_columns(cohort: &[StudentRecord], schedule: &CourseSchedule, stage: Stage) -> Vec<Column> {
    let cap = stage.ca_week_cap();
    schedule
        .ca_items
        .iter()
        .filter(|item| item.model_inclusion_week <= cap)
        .map(|item| Column {
            name: format!("ca_{}", item.name),
            provenance: Provenance::CaItem { item: item.name.clone() },
            values: ColumnValues::Numeric(
                cohort
                    .iter()
                    // a missed submission is auto-graded zero
                    .map(|r| r.ca_results.get(&item.name).copied().unwrap_or(0.0))
                    .collect(),
            ),
        })
        .collect()
}

fn weekly_activity_columns(
    cohort: &[StudentRecord],
    schedule: &CourseSchedule,
    stage: Stage,
) -> Vec<Column> {
    let cap = stage.activity_week_cap();
    let mut out = Vec::new();
    for folder in schedule.folders_active_by(cap) {
        let first = schedule.folders[folder].kind.first_active_week();
        for week in first..=cap.min(ACTIVITY_WEEKS) {
            for day in DayClass::ALL {
                out.push(Column {
                    name: format!("F{}_W{}_{}", folder + 1, week, day.code()),
                    provenance: Provenance::Activity { folder, week, day },
                    values: ColumnValues::Numeric(
                        cohort.iter().map(|r| r.activity.get(folder, week, day) as f64).collect(),
                    ),
                });
            }
        }
    }
    out
}

fn cumulative_activity_columns(
    cohort: &[StudentRecord],
    schedule: &CourseSchedule,
    stage: Stage,
) -> Vec<Column> {
    let cap = stage.activity_week_cap();
    let mut out = Vec::new();
    for folder in schedule.folders_active_by(cap) {
        for day in DayClass::ALL {
            out.push(Column {
                name: format!(
                    "F{}_CUM{}",
                    folder + 1,
                    day.code()
                ),
                provenance: Provenance::CumulativeActivity { folder, day },
                values: ColumnValues::Numeric(
                    cohort.iter().map(|r| r.activity.cumulative(folder, day, cap) as f64).collect(),
                ),
            });
        }
    }
    out
}

fn cluster_columns(
    n: usize,
    clusters: Option<&ClusterAssignment>,
) -> Result<Vec<Column>, StagingError> {
    let assignment = clusters.ok_or(StagingError::ClusterMembershipsRequired)?;
    if assignment.hard.len() != n || assignment.soft.len() != n {
        return Err(StagingError::MembershipLength {
            expected: n,
            got: assignment.hard.len().min(assignment.soft.len()),
        });
    }
    let k = assignment.n_components();
    let levels: Vec<String> = (0..k).map(|c| format!("{c}")).collect();
    let mut out = Vec::with_capacity(1 + k);
    out.push(Column {
        name: "CLUSTER".to_string(),
        provenance: Provenance::ClusterLabel,
        values: ColumnValues::Categorical(CatColumn {
            levels,
            codes: assignment.hard.iter().map(|&h| h as u32).collect(),
        }),
    });
    for c in 0..k {
        out.push(Column {
            name: format!("CLUSTER_P{c}"),
            provenance: Provenance::ClusterProbability { component: c },
            values: ColumnValues::Numeric(assignment.soft.iter().map(|row| row[c]).collect()),
        });
    }
    Ok(out)
}

/// Build the design matrix for a (stage, feature set) pair. Cluster
/// memberships must be supplied for the Cluster feature set; they are
/// stage-specific and never derived from the response.
pub fn build_matrix(
    cohort: &[StudentRecord],
    schedule: &CourseSchedule,
    stage: Stage,
    feature_set: FeatureSet,
    clusters: Option<&ClusterAssignment>,
) -> Result<StageFeatureMatrix, StagingError> {
    let mut columns = background_columns(cohort)?;
    columns.extend(ca_columns(cohort, schedule, stage));
    match feature_set {
        FeatureSet::Initial => columns.extend(weekly_activity_columns(cohort, schedule, stage)),
        FeatureSet::NoLms => {}
        FeatureSet::Cumulative => {
            columns.extend(cumulative_activity_columns(cohort, schedule, stage))
        }
        FeatureSet::Cluster => {
            columns.extend(cumulative_activity_columns(cohort, schedule, stage));
            columns.extend(cluster_columns(cohort.len(), clusters)?);
        }
    }
    Ok(StageFeatureMatrix {
        stage,
        feature_set,
        columns,
        response: cohort.iter().map(|r| r.final_grade).collect(),
    })
}

/// Numeric matrix produced by one-hot encoding, column-major.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericMatrix {
    pub names: Vec<String>,
    pub cols: Vec<Vec<f64>>,
}

impl NumericMatrix {
    pub fn n_rows(&self) -> usize {
        self.cols.first().map(|c| c.len()).unwrap_or(0)
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    /// Copy one row into a buffer (resized to fit).
    pub fn copy_row(&self, row: usize, buf: &mut Vec<f64>) {
        buf.clear();
        buf.extend(self.cols.iter().map(|c| c[row]));
    }
}

/// How an encoded column maps back to its source.
#[derive(Clone, Debug, PartialEq)]
pub enum EncodedSource {
    Numeric { source: String },
    Indicator { source: String, level: String },
}

/// Encoding record: one entry per output column plus the dropped reference
/// level of every categorical source.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnMap {
    pub entries: Vec<EncodedSource>,
    pub reference_levels: Vec<(String, String)>,
}

impl ColumnMap {
    /// Recover the categorical level encoded in one row: the level whose
    /// indicator is set, or the reference level when none is.
    pub fn decode_categorical(
        &self,
        source: &str,
        matrix: &NumericMatrix,
        row: usize,
    ) -> Option<String> {
        let reference = self
            .reference_levels
            .iter()
            .find(|(s, _)| s == source)
            .map(|(_, l)| l.clone())?;
        for (i, entry) in self.entries.iter().enumerate() {
            if let EncodedSource::Indicator { source: s, level } = entry {
                if s == source && matrix.cols[i][row] > 0.5 {
                    return Some(level.clone());
                }
            }
        }
        Some(reference)
    }
}

/// Recode every k-level categorical as k-1 indicator columns (the first
/// declared level is the dropped reference); numeric columns pass through.
pub fn one_hot(m: &StageFeatureMatrix) -> (NumericMatrix, ColumnMap) {
    let mut names = Vec::new();
    let mut cols = Vec::new();
    let mut entries = Vec::new();
    let mut reference_levels = Vec::new();
    for column in &m.columns {
        match &column.values {
            ColumnValues::Numeric(values) => {
                names.push(column.name.clone());
                cols.push(values.clone());
                entries.push(EncodedSource::Numeric { source: column.name.clone() });
            }
            ColumnValues::Categorical(cat) => {
                reference_levels.push((column.name.clone(), cat.levels[0].clone()));
                for (code, level) in cat.levels.iter().enumerate().skip(1) {
                    names.push(format!("{}={}", column.name, level));
                    cols.push(
                        cat.codes.iter().map(|&c| if c as usize == code { 1.0 } else { 0.0 }).collect(),
                    );
                    entries.push(EncodedSource::Indicator {
                        source: column.name.clone(),
                        level: level.clone(),
                    });
                }
            }
        }
    }
    (NumericMatrix { names, cols }, ColumnMap { entries, reference_levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_cohort, CohortGenConfig};
    use crate::schedule::default_schedule;

    fn cohort() -> Vec<StudentRecord> {
        let mut cfg = CohortGenConfig::with_seed(5);
        cfg.n_students = 40;
        generate_cohort(&cfg, &default_schedule()).unwrap()
    }

    fn fake_clusters(n: usize, k: usize) -> ClusterAssignment {
        ClusterAssignment {
            hard: (0..n).map(|i| i % k).collect(),
            soft: (0..n)
                .map(|i| (0..k).map(|c| if c == i % k { 1.0 } else { 0.0 }).collect())
                .collect(),
        }
    }

    #[test]
    fn fifteen_ordered_stages() {
        let stages = stage_schedule();
        assert_eq!(stages.len(), 15);
        assert_eq!(stages[0].label(), "initial");
        assert_eq!(stages[1].label(), "week1");
        assert_eq!(stages[12].label(), "week12");
        assert_eq!(stages[13].label(), "revision");
        assert_eq!(stages[14].label(), "final");
        for s in &stages {
            assert_eq!(Stage::from_label(&s.label()), Some(*s));
        }
    }

    #[test]
    fn initial_stage_initial_set_is_background_only() {
        let cohort = cohort();
        let m = build_matrix(
            &cohort,
            &default_schedule(),
            Stage::initial(),
            FeatureSet::Initial,
            None,
        )
        .unwrap();
        assert_eq!(m.n_cols(), 6);
        assert_eq!(
            m.column_names(),
            alloc::vec![
                "gender",
                "course_type",
                "registration_status",
                "year_of_study",
                "programme",
                "nationality_flag"
            ]
        );
    }

    #[test]
    fn week2_no_lms_has_no_ca_yet() {
        let cohort = cohort();
        let m =
            build_matrix(&cohort, &default_schedule(), Stage::week(2), FeatureSet::NoLms, None)
                .unwrap();
        assert_eq!(m.n_cols(), 6);
        let m3 =
            build_matrix(&cohort, &default_schedule(), Stage::week(3), FeatureSet::NoLms, None)
                .unwrap();
        assert_eq!(m3.n_cols(), 7);
        assert!(m3.column("ca_lecture_questions").is_some());
    }

    #[test]
    fn week5_cluster_set_has_29_canonical_variables() {
        let cohort = cohort();
        let clusters = fake_clusters(cohort.len(), 3);
        let m = build_matrix(
            &cohort,
            &default_schedule(),
            Stage::week(5),
            FeatureSet::Cluster,
            Some(&clusters),
        )
        .unwrap();
        // 6 background + 2 CA + 2x10 cumulative + 1 hard label
        assert_eq!(m.canonical_variable_count(), 29);
        assert_eq!(m.n_cols(), 32);
    }

    #[test]
    fn cluster_set_without_memberships_errors() {
        let cohort = cohort();
        let err = build_matrix(
            &cohort,
            &default_schedule(),
            Stage::week(5),
            FeatureSet::Cluster,
            None,
        )
        .unwrap_err();
        assert_eq!(err, StagingError::ClusterMembershipsRequired);
    }

    #[test]
    fn sentinel_injection_cannot_leak() {
        let schedule = default_schedule();
        let cohort = cohort();
        for s in 1..=12u8 {
            let stage = Stage::week(s);
            let before =
                build_matrix(&cohort, &schedule, stage, FeatureSet::Initial, None).unwrap();
            let before_cum =
                build_matrix(&cohort, &schedule, stage, FeatureSet::Cumulative, None).unwrap();
            let mut tampered = cohort.clone();
            for folder in 0..15 {
                tampered[0].activity.set(folder, s + 1, DayClass::Weekday, 9999);
                tampered[0].activity.set(folder, s + 1, DayClass::Sunday, 9999);
            }
            let after =
                build_matrix(&tampered, &schedule, stage, FeatureSet::Initial, None).unwrap();
            let after_cum =
                build_matrix(&tampered, &schedule, stage, FeatureSet::Cumulative, None).unwrap();
            assert_eq!(before, after, "week {s}: sentinel leaked into Initial set");
            assert_eq!(before_cum, after_cum, "week {s}: sentinel leaked into Cumulative set");
        }
    }

    #[test]
    fn ca_items_respect_inclusion_week() {
        let cohort = cohort();
        let schedule = default_schedule();
        for stage in stage_schedule() {
            let m = build_matrix(&cohort, &schedule, stage, FeatureSet::NoLms, None).unwrap();
            for item in &schedule.ca_items {
                let present = m.column(&format!("ca_{}", item.name)).is_some();
                assert_eq!(present, item.model_inclusion_week <= stage.ca_week_cap());
            }
        }
    }

    #[test]
    fn cumulative_equals_sum_of_weekly_columns() {
        let cohort = cohort();
        let schedule = default_schedule();
        for stage in [Stage::week(3), Stage::week(7), Stage::revision()] {
            let weekly =
                build_matrix(&cohort, &schedule, stage, FeatureSet::Initial, None).unwrap();
            let cumulative =
                build_matrix(&cohort, &schedule, stage, FeatureSet::Cumulative, None).unwrap();
            for folder in schedule.folders_active_by(stage.activity_week_cap()) {
                for day in DayClass::ALL {
                    let cum = match &cumulative
                        .column(&format!("F{}_CUM{}", folder + 1, day.code()))
                        .unwrap()
                        .values
                    {
                        ColumnValues::Numeric(v) => v.clone(),
                        _ => unreachable!(),
                    };
                    let mut sum = alloc::vec![0.0; cohort.len()];
                    for col in &weekly.columns {
                        if let Provenance::Activity { folder: f, day: d, .. } = col.provenance {
                            if f == folder && d == day {
                                if let ColumnValues::Numeric(v) = &col.values {
                                    for (acc, x) in sum.iter_mut().zip(v) {
                                        *acc += x;
                                    }
                                }
                            }
                        }
                    }
                    assert_eq!(cum, sum);
                }
            }
        }
    }

    #[test]
    fn column_sets_grow_monotonically() {
        let cohort = cohort();
        let schedule = default_schedule();
        for fs in [FeatureSet::Initial, FeatureSet::NoLms, FeatureSet::Cumulative] {
            let mut prev: Vec<String> = Vec::new();
            for stage in stage_schedule() {
                let m = build_matrix(&cohort, &schedule, stage, fs, None).unwrap();
                let names: Vec<String> =
                    m.columns.iter().map(|c| c.name.clone()).collect();
                for p in &prev {
                    assert!(names.contains(p), "{fs}: column {p} lost at {stage}");
                }
                prev = names;
            }
        }
    }

    #[test]
    fn one_hot_initial_background_yields_18_columns() {
        let cohort = cohort();
        let m = build_matrix(
            &cohort,
            &default_schedule(),
            Stage::initial(),
            FeatureSet::Initial,
            None,
        )
        .unwrap();
        let (encoded, map) = one_hot(&m);
        assert_eq!(encoded.n_cols(), 18);
        assert_eq!(map.reference_levels.len(), 6);
    }

    #[test]
    fn one_hot_binary_and_numeric_cases() {
        let m = StageFeatureMatrix {
            stage: Stage::initial(),
            feature_set: FeatureSet::NoLms,
            columns: alloc::vec![
                Column {
                    name: "flag".into(),
                    provenance: Provenance::Background { field: "gender" },
                    values: ColumnValues::Categorical(CatColumn {
                        levels: alloc::vec!["a".into(), "b".into()],
                        codes: alloc::vec![0, 1, 0],
                    }),
                },
                Column {
                    name: "x".into(),
                    provenance: Provenance::CaItem { item: "x".into() },
                    values: ColumnValues::Numeric(alloc::vec![1.0, 2.0, 3.0]),
                },
            ],
            response: alloc::vec![0.0; 3],
        };
        let (encoded, _) = one_hot(&m);
        assert_eq!(encoded.names, alloc::vec!["flag=b".to_string(), "x".to_string()]);
        assert_eq!(encoded.cols[0], alloc::vec![0.0, 1.0, 0.0]);
        assert_eq!(encoded.cols[1], alloc::vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn one_hot_is_invertible_via_column_map() {
        let cohort = cohort();
        let m = build_matrix(
            &cohort,
            &default_schedule(),
            Stage::initial(),
            FeatureSet::Initial,
            None,
        )
        .unwrap();
        let (encoded, map) = one_hot(&m);
        for (row, r) in cohort.iter().enumerate() {
            let decoded = map.decode_categorical("programme", &encoded, row).unwrap();
            assert_eq!(decoded, r.programme.unwrap().label());
            let decoded = map.decode_categorical("gender", &encoded, row).unwrap();
            assert_eq!(decoded, r.gender.unwrap().label());
        }
    }
}
