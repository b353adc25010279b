use super::{BipartiteNetwork, ClassId, ClassSection, NetError, Person, PersonId, Role};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Class-choice rules for the campus generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CampusGenParams {
    /// Own department, difficulty matching the student's level.
    pub p1: f64,
    /// Own department, other difficulty.
    pub p2: f64,
    /// Another department.
    pub p3: f64,
    pub min_degree: u32,
    pub max_degree: u32,
}

impl Default for CampusGenParams {
    fn default() -> Self {
        CampusGenParams { p1: 0.7, p2: 0.2, p3: 0.1, min_degree: 2, max_degree: 5 }
    }
}

impl CampusGenParams {
    pub fn validate(&self) -> Result<(), NetError> {
        let ps = [self.p1, self.p2, self.p3];
        if ps.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(NetError::InvalidParams("p1, p2, p3 must lie in [0, 1]".into()));
        }
        if ((self.p1 + self.p2 + self.p3) - 1.0).abs() > 1e-9 {
            return Err(NetError::InvalidParams(format!(
                "p1 + p2 + p3 must equal 1 (got {})",
                self.p1 + self.p2 + self.p3
            )));
        }
        if self.min_degree == 0 || self.min_degree > self.max_degree {
            return Err(NetError::InvalidParams(format!(
                "degree range [{}, {}] is empty or includes 0",
                self.min_degree, self.max_degree
            )));
        }
        Ok(())
    }
}

/// Which rule a student's class pick satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PickCategory {
    MatchingLevel,
    OwnDepartment,
    OtherDepartment,
}

impl PickCategory {
    pub fn classify(student: &Person, class: &ClassSection) -> PickCategory {
        if student.department != class.department {
            PickCategory::OtherDepartment
        } else if student.level == Some(class.difficulty) {
            PickCategory::MatchingLevel
        } else {
            PickCategory::OwnDepartment
        }
    }
}

/// Fenwick tree over remaining seats, supporting weighted sampling.
struct SeatTree {
    tree: Vec<u64>,
    seats: Vec<u64>,
}

impl SeatTree {
    fn new(seats: Vec<u64>) -> Self {
        let mut tree = vec![0; seats.len() + 1];
        for (i, &s) in seats.iter().enumerate() {
            let mut k = i + 1;
            while k < tree.len() {
                tree[k] += s;
                k += k & k.wrapping_neg();
            }
        }
        SeatTree { tree, seats }
    }

    fn prefix(&self, end: usize) -> u64 {
        let mut k = end;
        let mut s = 0;
        while k > 0 {
            s += self.tree[k];
            k &= k - 1;
        }
        s
    }

    fn take_one(&mut self, i: usize) {
        self.seats[i] -= 1;
        let mut k = i + 1;
        while k < self.tree.len() {
            self.tree[k] -= 1;
            k += k & k.wrapping_neg();
        }
    }

    /// Smallest index whose inclusive prefix sum exceeds `target`.
    fn find(&self, mut target: u64) -> usize {
        let mut pos = 0;
        let mut step = self.tree.len().next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }
}

/// Assigns students to classes under the three-category choice rule.
///
/// Instructor `i` teaches class `i`. Each student's degree is uniform over
/// `[min_degree, max_degree]`; each pick first selects a category with
/// probabilities `(p1, p2, p3)` and then a class inside it with probability
/// proportional to its remaining seats, which is half-edge matching
/// restricted to the category. When the chosen category has no usable
/// seat left the pick falls back to the remaining categories.
pub fn generate_campus<R: Rng + ?Sized>(
    students: Vec<Person>,
    instructors: Vec<Person>,
    classes: Vec<ClassSection>,
    params: &CampusGenParams,
    rng: &mut R,
) -> Result<BipartiteNetwork, NetError> {
    params.validate()?;
    if instructors.len() != classes.len() {
        return Err(NetError::InvalidParams(format!(
            "{} instructors for {} classes",
            instructors.len(),
            classes.len()
        )));
    }
    if students.iter().any(|s| s.role != Role::Student) || instructors.iter().any(|i| i.role != Role::Instructor) {
        return Err(NetError::InvalidParams("role mismatch in student or instructor list".into()));
    }

    let degrees: Vec<u32> = students.iter().map(|_| rng.random_range(params.min_degree..=params.max_degree)).collect();
    let demand: u64 = degrees.iter().map(|&d| u64::from(d)).sum();
    let supply: u64 = classes.iter().map(|c| u64::from(c.capacity)).sum();
    if supply < demand {
        return Err(NetError::CapacityExhausted(format!(
            "total capacity {supply} is below total student demand {demand}"
        )));
    }

    // Classes sorted by (department, difficulty) so every category is a
    // union of at most two contiguous ranges.
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&j| (classes[j].department, classes[j].difficulty, j));
    let keyed: Vec<(u16, u8)> = order.iter().map(|&j| (classes[j].department, classes[j].difficulty)).collect();
    let mut tree = SeatTree::new(order.iter().map(|&j| u64::from(classes[j].capacity)).collect());

    let probs = [params.p1, params.p2, params.p3];
    let mut visit: Vec<usize> = (0..students.len()).collect();
    visit.shuffle(rng);
    // Students needing the most distinct classes pick first, while seats
    // are still spread over many classes.
    visit.sort_by_key(|&s| std::cmp::Reverse(degrees[s]));

    let mut edges = Vec::with_capacity(demand as usize + classes.len());
    let mut chosen: Vec<usize> = Vec::with_capacity(params.max_degree as usize);
    for &s in &visit {
        let student = &students[s];
        let level = student.level.unwrap_or(0);
        let dept_lo = keyed.partition_point(|&(d, _)| d < student.department);
        let dept_hi = keyed.partition_point(|&(d, _)| d <= student.department);
        let cell_lo = dept_lo + keyed[dept_lo..dept_hi].partition_point(|&(_, l)| l < level);
        let cell_hi = dept_lo + keyed[dept_lo..dept_hi].partition_point(|&(_, l)| l <= level);
        let ranges: [[(usize, usize); 2]; 3] = [
            [(cell_lo, cell_hi), (0, 0)],
            [(dept_lo, cell_lo), (cell_hi, dept_hi)],
            [(0, dept_lo), (dept_hi, keyed.len())],
        ];

        chosen.clear();
        for _ in 0..degrees[s] {
            let first = {
                let u: f64 = rng.random();
                if u < probs[0] {
                    0
                } else if u < probs[0] + probs[1] {
                    1
                } else {
                    2
                }
            };
            let mut picked = pick_in(&tree, &ranges[first], &chosen, rng);
            if picked.is_none() {
                // Fallback: remaining categories weighted by their probability,
                // or by seats when those probabilities are all zero.
                let mut rest: Vec<usize> = (0..3).filter(|&c| c != first).collect();
                while picked.is_none() && !rest.is_empty() {
                    let weights: Vec<f64> = rest.iter().map(|&c| probs[c]).collect();
                    let total: f64 = weights.iter().sum();
                    let k = if total > 0.0 {
                        let mut u = rng.random::<f64>() * total;
                        let mut k = rest.len() - 1;
                        for (i, w) in weights.iter().enumerate() {
                            if u < *w {
                                k = i;
                                break;
                            }
                            u -= w;
                        }
                        k
                    } else {
                        0
                    };
                    let cat = rest.remove(k);
                    picked = pick_in(&tree, &ranges[cat], &chosen, rng);
                }
            }
            let Some(pos) = picked else {
                return Err(NetError::CapacityExhausted(format!(
                    "no class with free seats left for student `{}`",
                    student.key
                )));
            };
            tree.take_one(pos);
            chosen.push(pos);
            edges.push((PersonId(s as u32), ClassId(order[pos] as u32)));
        }
    }

    let n_students = students.len() as u32;
    for j in 0..classes.len() {
        edges.push((PersonId(n_students + j as u32), ClassId(j as u32)));
    }
    let mut people = students;
    people.extend(instructors);
    BipartiteNetwork::new(people, classes, edges)
}

fn pick_in<R: Rng + ?Sized>(
    tree: &SeatTree,
    ranges: &[(usize, usize); 2],
    chosen: &[usize],
    rng: &mut R,
) -> Option<usize> {
    let weights = ranges.map(|(lo, hi)| tree.prefix(hi) - tree.prefix(lo));
    let total = weights[0] + weights[1];
    if total == 0 {
        return None;
    }
    for _ in 0..32 {
        let u = rng.random_range(0..total);
        let target =
            if u < weights[0] { tree.prefix(ranges[0].0) + u } else { tree.prefix(ranges[1].0) + (u - weights[0]) };
        let pos = tree.find(target);
        if !chosen.contains(&pos) {
            return Some(pos);
        }
    }
    // Every draw hit a class this student already takes; scan for the rest.
    let free: Vec<usize> =
        ranges.iter().flat_map(|&(lo, hi)| lo..hi).filter(|p| tree.seats[*p] > 0 && !chosen.contains(p)).collect();
    if free.is_empty() {
        None
    } else {
        Some(free[rng.random_range(0..free.len())])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{Meeting, Modality};
    use crate::rng::StreamKey;

    fn class(j: usize, dept: u16, difficulty: u8, capacity: u32) -> ClassSection {
        ClassSection {
            key: format!("c{j:03}"),
            department: dept,
            difficulty,
            capacity,
            meetings: vec![Meeting { day_of_week: 0, duration_hours: 1.0 }],
            modality: Modality::InPerson,
        }
    }

    fn campus(
        n_students: usize,
        depts: u16,
        levels: u8,
        classes_per_cell: usize,
        capacity: u32,
    ) -> (Vec<Person>, Vec<Person>, Vec<ClassSection>) {
        let students = (0..n_students)
            .map(|i| {
                Person::student(
                    format!("s{i:05}"),
                    (i % depts as usize) as u16,
                    1 + (i / depts as usize % levels as usize) as u8,
                )
            })
            .collect();
        let mut classes = Vec::new();
        for d in 0..depts {
            for l in 1..=levels {
                for _ in 0..classes_per_cell {
                    let j = classes.len();
                    classes.push(class(j, d, l, capacity));
                }
            }
        }
        let instructors =
            classes.iter().map(|c| Person::instructor(format!("i{}", &c.key[1..]), c.department)).collect();
        (students, instructors, classes)
    }

    #[test]
    fn seat_tree_sampling_respects_weights() {
        let tree = SeatTree::new(vec![0, 3, 0, 2]);
        let hits: Vec<usize> = (0..5).map(|t| tree.find(t)).collect();
        assert_eq!(hits, vec![1, 1, 1, 3, 3]);
        assert_eq!(tree.prefix(4), 5);
    }

    #[test]
    fn degenerate_probabilities_stay_in_matching_cell() {
        let (s, i, c) = campus(60, 1, 2, 6, 40);
        let params = CampusGenParams { p1: 1.0, p2: 0.0, p3: 0.0, ..Default::default() };
        let net = generate_campus(s, i, c, &params, &mut StreamKey::root(5).rng()).unwrap();
        for &(p, cl) in net.edges() {
            let person = net.person(p);
            if person.is_student() {
                assert_eq!(PickCategory::classify(person, net.class(cl)), PickCategory::MatchingLevel);
            }
        }
        assert!(net.warnings().is_empty(), "{:?}", net.warnings());
    }

    #[test]
    fn capacity_exhaustion_is_reported() {
        // 10 students of degree exactly 2 against 19 seats.
        let (s, i, mut c) = campus(10, 1, 1, 1, 19);
        c[0].capacity = 19;
        let params = CampusGenParams { min_degree: 2, max_degree: 2, ..Default::default() };
        let err = generate_campus(s, i, c, &params, &mut StreamKey::root(1).rng()).unwrap_err();
        assert!(matches!(err, NetError::CapacityExhausted(_)));
    }

    #[test]
    fn invariants_hold_on_generated_campus() {
        let (s, i, c) = campus(800, 4, 4, 3, 80);
        let net = generate_campus(s, i, c, &CampusGenParams::default(), &mut StreamKey::root(9).rng()).unwrap();
        assert!(net.warnings().is_empty(), "{:?}", net.warnings());
        for j in 0..net.classes().len() {
            let instructors =
                net.members_of(ClassId(j as u32)).iter().filter(|p| !net.person(**p).is_student()).count();
            assert_eq!(instructors, 1);
        }
    }

    #[test]
    fn rejects_bad_probabilities() {
        let (s, i, c) = campus(10, 1, 1, 1, 40);
        let params = CampusGenParams { p1: 0.5, p2: 0.2, p3: 0.1, ..Default::default() };
        assert!(matches!(
            generate_campus(s, i, c, &params, &mut StreamKey::root(1).rng()),
            Err(NetError::InvalidParams(_))
        ));
    }
}
