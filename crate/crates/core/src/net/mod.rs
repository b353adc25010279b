//! Person–class bipartite network and the per-day event sequences sampled
//! from it.

mod campus;
mod configuration;
mod enrollment;
mod events;

pub use campus::{generate_campus, CampusGenParams, PickCategory};
pub use configuration::{balance_degree_sequences, configuration_edges, generate_configuration};
pub use enrollment::{
    load_enrollment, read_enrollment, weekly_schedule, write_enrollment, EnrollmentSummary, LoadedEnrollment,
};
pub use events::{sample_event_sequence, DayVisits, EventSequence, Visit};

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PersonId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassId(pub u32);

impl PersonId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ClassId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Student,
    Instructor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modality {
    InPerson,
    Online,
}

/// A student or instructor. `key` is the external identifier used in
/// enrollment files and edge-list exports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Person {
    pub key: String,
    pub role: Role,
    pub department: u16,
    /// Academic level; `None` for instructors.
    pub level: Option<u8>,
}

impl Person {
    pub fn student(key: impl Into<String>, department: u16, level: u8) -> Self {
        Person { key: key.into(), role: Role::Student, department, level: Some(level) }
    }

    pub fn instructor(key: impl Into<String>, department: u16) -> Self {
        Person { key: key.into(), role: Role::Instructor, department, level: None }
    }

    pub fn is_student(&self) -> bool {
        self.role == Role::Student
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Meeting {
    /// 0 = Monday … 6 = Sunday.
    pub day_of_week: u8,
    pub duration_hours: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassSection {
    pub key: String,
    pub department: u16,
    pub difficulty: u8,
    pub capacity: u32,
    pub meetings: Vec<Meeting>,
    pub modality: Modality,
}

impl ClassSection {
    pub fn meeting_on(&self, day_of_week: u8) -> Option<&Meeting> {
        self.meetings.iter().find(|m| m.day_of_week == day_of_week)
    }
}

/// Degree sequence for one side of the bipartite graph.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DegreeSequence(pub Vec<u32>);

impl DegreeSequence {
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&d| u64::from(d)).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<u32>> for DegreeSequence {
    fn from(v: Vec<u32>) -> Self {
        DegreeSequence(v)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum NetError {
    #[error("infeasible degree sequences: {0}")]
    Infeasible(String),
    #[error("degree sequences are not balanced ({people} people-side stubs vs {locations} location-side stubs)")]
    Unbalanced { people: u64, locations: u64 },
    #[error("could not produce a simple graph after {restarts} restarts")]
    NonSimplifiable { restarts: u32 },
    #[error("class capacity exhausted: {0}")]
    CapacityExhausted(String),
    #[error("invalid campus parameters: {0}")]
    InvalidParams(String),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: duplicate enrollment of student `{student}` in class `{class}`")]
    DuplicateEnrollment { line: u64, student: String, class: String },
    #[error("i/o error: {0}")]
    Io(String),
}

/// Structural warnings found in an otherwise usable network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetWarning {
    StudentDegree { person: String, degree: usize },
    InstructorDegree { person: String, degree: usize },
    OverCapacity { class: String, enrolled: usize, capacity: u32 },
    InstructorCount { class: String, instructors: usize },
}

impl fmt::Display for NetWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetWarning::StudentDegree { person, degree } => {
                write!(f, "student `{person}` takes {degree} classes (expected 2-5)")
            }
            NetWarning::InstructorDegree { person, degree } => {
                write!(f, "instructor `{person}` teaches {degree} classes (expected 1)")
            }
            NetWarning::OverCapacity { class, enrolled, capacity } => {
                write!(f, "class `{class}` has {enrolled} students over capacity {capacity}")
            }
            NetWarning::InstructorCount { class, instructors } => {
                write!(f, "class `{class}` has {instructors} instructors (expected 1)")
            }
        }
    }
}

/// People, classes and the enrollment edges between them.
///
/// Edges are kept sorted by `(person, class)` and are unique. Adjacency in
/// both directions is derived once at construction; the network is
/// immutable afterwards apart from [`BipartiteNetwork::apply_modality_cap`],
/// which returns a new value.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteNetwork {
    people: Vec<Person>,
    classes: Vec<ClassSection>,
    edges: Vec<(PersonId, ClassId)>,
    person_classes: Vec<Vec<ClassId>>,
    class_members: Vec<Vec<PersonId>>,
}

impl BipartiteNetwork {
    /// Builds a network, rejecting out-of-range ids and duplicate edges.
    pub fn new(
        people: Vec<Person>,
        classes: Vec<ClassSection>,
        mut edges: Vec<(PersonId, ClassId)>,
    ) -> Result<Self, NetError> {
        edges.sort_unstable();
        if let Some(&(p, c)) = edges.iter().find(|(p, c)| p.index() >= people.len() || c.index() >= classes.len()) {
            return Err(NetError::Infeasible(format!("edge ({}, {}) out of range", p.0, c.0)));
        }
        for pair in edges.windows(2) {
            if pair[0] == pair[1] {
                return Err(NetError::Infeasible(format!(
                    "duplicate edge ({}, {})",
                    people[pair[0].0.index()].key,
                    classes[pair[0].1.index()].key
                )));
            }
        }
        let mut person_classes = vec![Vec::new(); people.len()];
        let mut class_members = vec![Vec::new(); classes.len()];
        for &(p, c) in &edges {
            person_classes[p.index()].push(c);
            class_members[c.index()].push(p);
        }
        Ok(BipartiteNetwork { people, classes, edges, person_classes, class_members })
    }

    pub fn people(&self) -> &[Person] {
        &self.people
    }

    pub fn classes(&self) -> &[ClassSection] {
        &self.classes
    }

    pub fn edges(&self) -> &[(PersonId, ClassId)] {
        &self.edges
    }

    pub fn person(&self, id: PersonId) -> &Person {
        &self.people[id.index()]
    }

    pub fn class(&self, id: ClassId) -> &ClassSection {
        &self.classes[id.index()]
    }

    pub fn classes_of(&self, id: PersonId) -> &[ClassId] {
        &self.person_classes[id.index()]
    }

    /// Everyone enrolled in or teaching `id`, sorted by person id.
    pub fn members_of(&self, id: ClassId) -> &[PersonId] {
        &self.class_members[id.index()]
    }

    pub fn degree(&self, id: PersonId) -> usize {
        self.person_classes[id.index()].len()
    }

    pub fn student_count(&self) -> usize {
        self.people.iter().filter(|p| p.is_student()).count()
    }

    pub fn instructor_count(&self) -> usize {
        self.people.len() - self.student_count()
    }

    pub fn enrolled_students(&self, id: ClassId) -> usize {
        self.class_members[id.index()].iter().filter(|p| self.people[p.index()].is_student()).count()
    }

    pub fn contains_edge(&self, person: PersonId, class: ClassId) -> bool {
        self.edges.binary_search(&(person, class)).is_ok()
    }

    /// Checks the campus invariants and reports every violation.
    pub fn warnings(&self) -> Vec<NetWarning> {
        let mut out = Vec::new();
        for (i, p) in self.people.iter().enumerate() {
            let degree = self.person_classes[i].len();
            match p.role {
                Role::Student if !(2..=5).contains(&degree) => {
                    out.push(NetWarning::StudentDegree { person: p.key.clone(), degree })
                }
                Role::Instructor if degree != 1 => {
                    out.push(NetWarning::InstructorDegree { person: p.key.clone(), degree })
                }
                _ => {}
            }
        }
        for (j, c) in self.classes.iter().enumerate() {
            let enrolled = self.enrolled_students(ClassId(j as u32));
            if enrolled > c.capacity as usize {
                out.push(NetWarning::OverCapacity { class: c.key.clone(), enrolled, capacity: c.capacity });
            }
            let instructors = self.class_members[j].iter().filter(|p| !self.people[p.index()].is_student()).count();
            if instructors != 1 {
                out.push(NetWarning::InstructorCount { class: c.key.clone(), instructors });
            }
        }
        out
    }

    /// Moves every class with more than `cap` enrolled students online.
    /// `None` means no cap. Topology is unchanged.
    pub fn apply_modality_cap(&self, cap: Option<u32>) -> BipartiteNetwork {
        let mut out = self.clone();
        if let Some(cap) = cap {
            for j in 0..out.classes.len() {
                if out.enrolled_students(ClassId(j as u32)) > cap as usize {
                    out.classes[j].modality = Modality::Online;
                }
            }
        }
        out
    }

    /// Canonical edge list: one `person<TAB>class` line per edge, sorted by
    /// person key then class key.
    pub fn canonical_edge_list(&self) -> String {
        let mut rows: Vec<(&str, &str)> = self
            .edges
            .iter()
            .map(|&(p, c)| (self.people[p.index()].key.as_str(), self.classes[c.index()].key.as_str()))
            .collect();
        rows.sort_unstable();
        let mut out = String::with_capacity(rows.len() * 16);
        for (p, c) in rows {
            out.push_str(p);
            out.push('\t');
            out.push_str(c);
            out.push('\n');
        }
        out
    }
}
