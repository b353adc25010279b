//! Synthetic campus with the aggregate shape of a large public university:
//! about 8.4 students per class, one instructor per class, students spread
//! over departments and year levels, and heavy-tailed class sizes.

use crate::net::{
    generate_campus, weekly_schedule, BipartiteNetwork, CampusGenParams, ClassSection, Modality, NetError, Person,
};
use crate::rng::{Phase, StreamKey};
use rand::Rng;
use rand_distr::{Distribution, LogNormal};
use serde::{Deserialize, Serialize};

pub const FULL_SCALE_STUDENTS: u32 = 46_782;
pub const FULL_SCALE_CLASSES: u32 = 5_570;

const ASSIGNMENT_ATTEMPTS: u64 = 10;

/// Scale giving roughly 2,000 students and 238 classes.
pub const DESK_SCALE: f64 = 0.043;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SyntheticCampusParams {
    pub scale: f64,
    pub departments: u16,
    pub levels: u8,
    /// Log-scale spread of class capacities.
    pub size_sigma: f64,
    /// Total seats as a multiple of expected enrollment demand.
    pub capacity_slack: f64,
    pub min_capacity: u32,
    pub meetings_per_week: u32,
    pub duration_hours: f64,
    pub selection: CampusGenParams,
}

impl Default for SyntheticCampusParams {
    fn default() -> Self {
        SyntheticCampusParams {
            scale: DESK_SCALE,
            departments: 20,
            levels: 4,
            size_sigma: 1.0,
            capacity_slack: 1.2,
            min_capacity: 5,
            meetings_per_week: 2,
            duration_hours: 1.0,
            selection: CampusGenParams::default(),
        }
    }
}

impl SyntheticCampusParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.scale > 0.0 && self.scale <= 1.0) {
            return Err("network.synthetic.scale must lie in (0, 1]".into());
        }
        if self.departments == 0 || self.levels == 0 {
            return Err("network.synthetic needs at least one department and level".into());
        }
        if !(self.size_sigma >= 0.0 && self.size_sigma.is_finite()) {
            return Err("network.synthetic.size_sigma must be non-negative".into());
        }
        if self.capacity_slack.is_nan() || self.capacity_slack < 1.0 {
            return Err("network.synthetic.capacity_slack must be at least 1".into());
        }
        if self.meetings_per_week == 0 || self.duration_hours.is_nan() || self.duration_hours <= 0.0 {
            return Err("network.synthetic meetings need a positive count and duration".into());
        }
        self.selection.validate().map_err(|e| e.to_string())
    }

    pub fn student_count(&self) -> usize {
        (f64::from(FULL_SCALE_STUDENTS) * self.scale).round().max(1.0) as usize
    }

    pub fn class_count(&self) -> usize {
        (f64::from(FULL_SCALE_CLASSES) * self.scale).round().max(1.0) as usize
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCampus {
    pub network: BipartiteNetwork,
    pub departments: Vec<String>,
}

/// Builds a synthetic campus. The same `(params, seed)` always yields the
/// same campus.
pub fn generate_synthetic_campus(params: &SyntheticCampusParams, seed: u64) -> Result<SyntheticCampus, NetError> {
    params.validate().map_err(NetError::InvalidParams)?;
    let key = StreamKey::root(seed).phase(Phase::Network);
    let mut rng = key.child(1).rng();
    let n_students = params.student_count();
    let n_classes = params.class_count();
    let depts = params.departments;
    let levels = params.levels;
    let width = |n: usize| n.to_string().len().max(4);

    let sw = width(n_students);
    let students: Vec<Person> = (0..n_students)
        .map(|i| {
            let dept = rng.random_range(0..depts);
            let level = rng.random_range(1..=levels);
            Person::student(format!("s{:0sw$}", i + 1), dept, level)
        })
        .collect();

    // Class sizes: log-normal weights scaled so seats cover expected demand
    // with some slack.
    let mean_degree = f64::from(params.selection.min_degree + params.selection.max_degree) / 2.0;
    let seats = n_students as f64 * mean_degree * params.capacity_slack;
    let size = LogNormal::new(0.0, params.size_sigma).expect("validated sigma");
    let weights: Vec<f64> = (0..n_classes).map(|_| size.sample(&mut rng)).collect();
    let total_weight: f64 = weights.iter().sum();
    let cw = width(n_classes);
    let classes: Vec<ClassSection> = weights
        .iter()
        .enumerate()
        .map(|(j, w)| {
            let key = format!("c{:0cw$}", j + 1);
            let capacity = ((seats * w / total_weight).round() as u32).max(params.min_capacity);
            ClassSection {
                meetings: weekly_schedule(&key, params.meetings_per_week, params.duration_hours),
                key,
                department: (j % depts as usize) as u16,
                difficulty: 1 + ((j / depts as usize) % levels as usize) as u8,
                capacity,
                modality: Modality::InPerson,
            }
        })
        .collect();
    let instructors: Vec<Person> =
        classes.iter().enumerate().map(|(j, c)| Person::instructor(format!("i{:0cw$}", j + 1), c.department)).collect();

    // A greedy assignment can strand the last students on a few full
    // classes; small campuses retry on a fresh stream.
    let mut attempt = 0;
    let network = loop {
        let mut rng = key.child(2).child(attempt).rng();
        match generate_campus(students.clone(), instructors.clone(), classes.clone(), &params.selection, &mut rng) {
            Err(NetError::CapacityExhausted(_)) if attempt + 1 < ASSIGNMENT_ATTEMPTS => attempt += 1,
            other => break other?,
        }
    };
    let departments = (0..depts).map(|d| format!("d{d:02}")).collect();
    Ok(SyntheticCampus { network, departments })
}

/// Fraction of enrolled student seats in classes with more than `cap`
/// students.
pub fn seat_share_above(net: &BipartiteNetwork, cap: u32) -> f64 {
    let sizes: Vec<usize> =
        (0..net.classes().len()).map(|j| net.enrolled_students(crate::net::ClassId(j as u32))).collect();
    let total: usize = sizes.iter().sum();
    let above: usize = sizes.iter().filter(|&&s| s > cap as usize).sum();
    above as f64 / total.max(1) as f64
}
