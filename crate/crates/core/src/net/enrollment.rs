//! Enrollment file format.
//!
//! A UTF-8 comma-separated file with one record per row. Lines starting
//! with `#` are comments. The header row is mandatory:
//!
//! ```text
//! kind,id,ref,dept,level,capacity,meetings_per_week,duration_hours
//! student,s00001,,d03,2,,,
//! class,c0001,,d03,1,40,2,1
//! instructor,i0001,c0001,,,,,
//! enrollment,s00001,c0001,,,,,
//! ```
//!
//! `level` is the academic level for students and the difficulty for
//! classes. `ref` is the class taught (instructor rows) or the class
//! enrolled in (enrollment rows). Unused columns are left empty.
//!
//! Meeting weekdays are not part of the format; they are derived
//! deterministically from the class id (see [`weekly_schedule`]).

use super::{BipartiteNetwork, ClassId, ClassSection, Meeting, Modality, NetError, NetWarning, Person, PersonId, Role};
use crate::rng::{label_hash, Phase, StreamKey};
use rand::seq::index::sample;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::{Read, Write};

pub const HEADER: [&str; 8] = ["kind", "id", "ref", "dept", "level", "capacity", "meetings_per_week", "duration_hours"];

/// Weekdays are Monday–Friday unless more than five meetings are requested.
pub fn weekly_schedule(class_key: &str, meetings_per_week: u32, duration_hours: f64) -> Vec<Meeting> {
    let days = if meetings_per_week > 5 { 7 } else { 5 };
    let count = meetings_per_week.min(days) as usize;
    let mut rng = StreamKey::root(label_hash(class_key.as_bytes())).phase(Phase::Schedule).rng();
    let mut picked: Vec<u8> = sample(&mut rng, days as usize, count).into_iter().map(|d| d as u8).collect();
    picked.sort_unstable();
    picked.into_iter().map(|day_of_week| Meeting { day_of_week, duration_hours }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnrollmentSummary {
    pub students: usize,
    pub classes: usize,
    pub instructors: usize,
    pub enrollments: usize,
}

impl EnrollmentSummary {
    pub fn students_per_class(&self) -> f64 {
        self.students as f64 / self.classes.max(1) as f64
    }
}

#[derive(Debug, Clone)]
pub struct LoadedEnrollment {
    pub network: BipartiteNetwork,
    /// Department labels; `Person::department` indexes into this list.
    pub departments: Vec<String>,
    pub warnings: Vec<NetWarning>,
    pub summary: EnrollmentSummary,
}

struct Row {
    line: u64,
    fields: Vec<String>,
}

impl Row {
    fn get(&self, i: usize) -> &str {
        self.fields.get(i).map(String::as_str).unwrap_or("")
    }

    fn required(&self, i: usize) -> Result<&str, NetError> {
        let v = self.get(i);
        if v.is_empty() {
            Err(NetError::Parse { line: self.line, message: format!("missing `{}`", HEADER[i]) })
        } else {
            Ok(v)
        }
    }

    fn number<T: std::str::FromStr>(&self, i: usize) -> Result<T, NetError> {
        let raw = self.required(i)?;
        raw.parse().map_err(|_| NetError::Parse {
            line: self.line,
            message: format!("`{}` is not a valid {}", raw, HEADER[i]),
        })
    }
}

/// Reads an enrollment file into a deterministic network. Structural
/// deviations are returned as warnings; malformed records are errors.
pub fn load_enrollment<R: Read>(source: R) -> Result<LoadedEnrollment, NetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let mut rows = Vec::new();
    let mut header_seen = false;
    for rec in reader.records() {
        let rec = rec.map_err(|e| NetError::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if !header_seen {
            let got: Vec<&str> = rec.iter().collect();
            if got != HEADER {
                return Err(NetError::Parse { line, message: format!("expected header `{}`", HEADER.join(",")) });
            }
            header_seen = true;
            continue;
        }
        if rec.iter().all(str::is_empty) {
            continue;
        }
        rows.push(Row { line, fields: rec.iter().map(str::to_owned).collect() });
    }
    if !header_seen {
        return Err(NetError::Parse { line: 1, message: "missing header row".into() });
    }

    let mut dept_labels = BTreeSet::new();
    for row in &rows {
        if matches!(row.get(0), "student" | "class") {
            dept_labels.insert(row.required(3)?.to_owned());
        }
    }
    let departments: Vec<String> = dept_labels.into_iter().collect();
    let dept_index: HashMap<&str, u16> = departments.iter().enumerate().map(|(i, d)| (d.as_str(), i as u16)).collect();

    let mut students = Vec::new();
    let mut student_ids: HashMap<String, u32> = HashMap::new();
    let mut classes = Vec::new();
    let mut class_ids: HashMap<String, u32> = HashMap::new();
    for row in &rows {
        match row.get(0) {
            "student" => {
                let key = row.required(1)?;
                let level: u8 = row.number(4)?;
                if student_ids.insert(key.to_owned(), students.len() as u32).is_some() {
                    return Err(NetError::Parse { line: row.line, message: format!("duplicate student `{key}`") });
                }
                students.push(Person::student(key, dept_index[row.get(3)], level));
            }
            "class" => {
                let key = row.required(1)?;
                let difficulty: u8 = row.number(4)?;
                let capacity: u32 = row.number(5)?;
                let meetings: u32 = row.number(6)?;
                let duration: f64 = row.number(7)?;
                if capacity == 0 {
                    return Err(NetError::Parse { line: row.line, message: "capacity must be at least 1".into() });
                }
                if !(duration > 0.0 && duration.is_finite()) {
                    return Err(NetError::Parse { line: row.line, message: "duration_hours must be positive".into() });
                }
                if class_ids.insert(key.to_owned(), classes.len() as u32).is_some() {
                    return Err(NetError::Parse { line: row.line, message: format!("duplicate class `{key}`") });
                }
                classes.push(ClassSection {
                    key: key.to_owned(),
                    department: dept_index[row.get(3)],
                    difficulty,
                    capacity,
                    meetings: weekly_schedule(key, meetings, duration),
                    modality: Modality::InPerson,
                });
            }
            "instructor" | "enrollment" => {}
            other => {
                return Err(NetError::Parse { line: row.line, message: format!("unknown record kind `{other}`") });
            }
        }
    }

    let mut instructors: Vec<Person> = Vec::new();
    let mut instructor_ids: HashMap<String, u32> = HashMap::new();
    let mut teach = Vec::new();
    let mut enroll = Vec::new();
    let mut seen_enrollments = HashSet::new();
    for row in &rows {
        let kind = row.get(0);
        if kind != "instructor" && kind != "enrollment" {
            continue;
        }
        let key = row.required(1)?;
        let class_key = row.required(2)?;
        let &class = class_ids
            .get(class_key)
            .ok_or_else(|| NetError::Parse { line: row.line, message: format!("unknown class `{class_key}`") })?;
        if kind == "instructor" {
            let idx = *instructor_ids.entry(key.to_owned()).or_insert_with(|| {
                instructors.push(Person::instructor(key, classes[class as usize].department));
                instructors.len() as u32 - 1
            });
            teach.push((idx, class, row.line));
        } else {
            let &student = student_ids
                .get(key)
                .ok_or_else(|| NetError::Parse { line: row.line, message: format!("unknown student `{key}`") })?;
            if !seen_enrollments.insert((student, class)) {
                return Err(NetError::DuplicateEnrollment {
                    line: row.line,
                    student: key.to_owned(),
                    class: class_key.to_owned(),
                });
            }
            enroll.push((PersonId(student), ClassId(class)));
        }
    }

    let n_students = students.len() as u32;
    let mut teaching_pairs = HashSet::new();
    for (idx, class, line) in teach {
        if !teaching_pairs.insert((idx, class)) {
            return Err(NetError::Parse { line, message: "duplicate instructor row".into() });
        }
        enroll.push((PersonId(n_students + idx), ClassId(class)));
    }

    let summary = EnrollmentSummary {
        students: students.len(),
        classes: classes.len(),
        instructors: instructors.len(),
        enrollments: seen_enrollments.len(),
    };
    let mut people = students;
    people.extend(instructors);
    let network = BipartiteNetwork::new(people, classes, enroll)?;
    let warnings = network.warnings();
    Ok(LoadedEnrollment { network, departments, warnings, summary })
}

/// Reads an enrollment file from disk.
pub fn read_enrollment(path: &std::path::Path) -> Result<LoadedEnrollment, NetError> {
    let file = std::fs::File::open(path).map_err(|e| NetError::Io(format!("{}: {e}", path.display())))?;
    load_enrollment(std::io::BufReader::new(file))
}

/// Writes `network` in enrollment format. Department `k` is written as
/// `departments[k]` when given, else as `dKK`.
pub fn write_enrollment<W: Write>(
    network: &BipartiteNetwork,
    departments: Option<&[String]>,
    out: W,
) -> Result<(), NetError> {
    let dept = |k: u16| match departments {
        Some(labels) => labels[k as usize].clone(),
        None => format!("d{k:02}"),
    };
    let io = |e: csv::Error| NetError::Io(e.to_string());
    let mut w = csv::WriterBuilder::new().flexible(false).from_writer(out);
    w.write_record(HEADER).map_err(io)?;
    for p in network.people().iter().filter(|p| p.role == Role::Student) {
        let level = p.level.unwrap_or(0).to_string();
        w.write_record(["student", &p.key, "", &dept(p.department), &level, "", "", ""]).map_err(io)?;
    }
    for c in network.classes() {
        let duration = c.meetings.first().map(|m| m.duration_hours).unwrap_or(1.0);
        w.write_record([
            "class",
            &c.key,
            "",
            &dept(c.department),
            &c.difficulty.to_string(),
            &c.capacity.to_string(),
            &c.meetings.len().to_string(),
            &duration.to_string(),
        ])
        .map_err(io)?;
    }
    let mut teaching = Vec::new();
    let mut enrolled = Vec::new();
    for &(p, c) in network.edges() {
        let person = network.person(p);
        let row = (person.key.as_str(), network.class(c).key.as_str());
        if person.is_student() {
            enrolled.push(row);
        } else {
            teaching.push(row);
        }
    }
    teaching.sort_unstable();
    enrolled.sort_unstable();
    for (p, c) in teaching {
        w.write_record(["instructor", p, c, "", "", "", "", ""]).map_err(io)?;
    }
    for (p, c) in enrolled {
        w.write_record(["enrollment", p, c, "", "", "", "", ""]).map_err(io)?;
    }
    w.flush().map_err(|e| NetError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "\
# two students, two classes
kind,id,ref,dept,level,capacity,meetings_per_week,duration_hours
student,s1,,math,1,,,
student,s2,,bio,2,,,
class,c1,,math,1,30,2,1.5
class,c2,,bio,2,30,3,1
instructor,i1,c1,,,,,
instructor,i2,c2,,,,,
enrollment,s1,c1,,,,,
enrollment,s1,c2,,,,,
enrollment,s2,c1,,,,,
enrollment,s2,c2,,,,,
";

    #[test]
    fn fixture_loads_exact_edge_set() {
        let loaded = load_enrollment(FIXTURE.as_bytes()).unwrap();
        assert_eq!(loaded.network.canonical_edge_list(), "i1\tc1\ni2\tc2\ns1\tc1\ns1\tc2\ns2\tc1\ns2\tc2\n");
        assert!(loaded.warnings.is_empty(), "{:?}", loaded.warnings);
        assert_eq!(loaded.departments, vec!["bio".to_string(), "math".to_string()]);
        assert_eq!(loaded.network.class(ClassId(1)).meetings.len(), 3);
        assert_eq!(loaded.network.class(ClassId(0)).meetings[0].duration_hours, 1.5);
        assert_eq!(loaded.summary, EnrollmentSummary { students: 2, classes: 2, instructors: 2, enrollments: 4 });
    }

    #[test]
    fn duplicate_row_is_named() {
        let text = format!("{FIXTURE}enrollment,s2,c2,,,,,\n");
        match load_enrollment(text.as_bytes()) {
            Err(NetError::DuplicateEnrollment { line, student, class }) => {
                assert_eq!((line, student.as_str(), class.as_str()), (13, "s2", "c2"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = FIXTURE.replace("class,c2,,bio,2,30,3,1", "class,c2,,bio,2,lots,3,1");
        assert!(matches!(load_enrollment(text.as_bytes()), Err(NetError::Parse { line: 6, .. })));
        let text = FIXTURE.replace("enrollment,s2,c1", "enrollment,s9,c1");
        assert!(matches!(load_enrollment(text.as_bytes()), Err(NetError::Parse { line: 11, .. })));
        assert!(matches!(load_enrollment("student,s1,,d,1,,,\n".as_bytes()), Err(NetError::Parse { line: 1, .. })));
    }

    #[test]
    fn deviations_are_warnings() {
        let text = FIXTURE.replace("enrollment,s1,c2,,,,,\n", "");
        let loaded = load_enrollment(text.as_bytes()).unwrap();
        assert_eq!(loaded.warnings, vec![NetWarning::StudentDegree { person: "s1".into(), degree: 1 }]);
    }

    #[test]
    fn write_then_load_is_identity() {
        let loaded = load_enrollment(FIXTURE.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_enrollment(&loaded.network, Some(&loaded.departments), &mut buf).unwrap();
        let again = load_enrollment(buf.as_slice()).unwrap();
        assert_eq!(again.network.canonical_edge_list(), loaded.network.canonical_edge_list());
        assert_eq!(again.network.classes(), loaded.network.classes());
    }

    #[test]
    fn schedule_is_deterministic_and_distinct() {
        let a = weekly_schedule("c42", 3, 1.0);
        assert_eq!(a, weekly_schedule("c42", 3, 1.0));
        let days: BTreeSet<u8> = a.iter().map(|m| m.day_of_week).collect();
        assert_eq!(days.len(), 3);
        assert!(days.iter().all(|&d| d < 5));
    }
}
