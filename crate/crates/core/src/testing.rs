//! Daily test allocation, contact tracing, and quarantine of positives.
//!
//! Each day, people who developed symptoms on an earlier day and have not
//! been tested since are tested first, oldest onset first. Whatever budget
//! is left goes to students enrolled in contact-traced (CT) classes: classes
//! in which a recently positive person sat during the trace window.

use crate::net::{BipartiteNetwork, ClassId, PersonId, Visit};
use crate::progression::{AgentHealth, HealthState};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

/// Weight given to a CT candidate, as a function of infectability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CtWeighting {
    #[default]
    LogInfectability,
    Uniform,
}

impl CtWeighting {
    pub fn weight(self, infectability: u32) -> f64 {
        match self {
            CtWeighting::LogInfectability => (1.0 + f64::from(infectability)).ln(),
            CtWeighting::Uniform => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TestingConfig {
    pub enabled: bool,
    pub daily_capacity: u32,
    pub sensitivity: f64,
    pub specificity: f64,
    pub gap_days: u32,
    /// Defaults to `gap_days` when absent.
    pub trace_window_days: Option<u32>,
    pub false_positive_isolation_days: u32,
    /// When false, only symptomatic people are tested.
    pub contact_tracing: bool,
    pub ct_weighting: CtWeighting,
}

impl Default for TestingConfig {
    fn default() -> Self {
        TestingConfig {
            enabled: false,
            daily_capacity: 0,
            sensitivity: 0.967,
            specificity: 1.0,
            gap_days: 3,
            trace_window_days: None,
            false_positive_isolation_days: 14,
            contact_tracing: true,
            ct_weighting: CtWeighting::LogInfectability,
        }
    }
}

impl TestingConfig {
    pub fn trace_window(&self) -> u32 {
        self.trace_window_days.unwrap_or(self.gap_days)
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [("sensitivity", self.sensitivity), ("specificity", self.specificity)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("testing.{name} must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestResult {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestTrigger {
    Symptomatic,
    ContactTrace(ClassId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestRecord {
    pub day: i32,
    pub person: PersonId,
    pub result: TestResult,
    /// Whether the person was infectious when tested.
    pub infectious: bool,
    pub trigger: TestTrigger,
}

/// Classes attended by a recently positive person during the trace window.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContactTraceSet {
    pub classes: BTreeSet<ClassId>,
}

impl ContactTraceSet {
    pub fn contains(&self, class: ClassId) -> bool {
        self.classes.contains(&class)
    }
}

/// Sessions that actually took place (attendees already filtered for
/// quarantine), retained for the trace window.
#[derive(Debug, Clone, Default)]
pub struct AttendanceHistory {
    keep_days: usize,
    days: VecDeque<(i32, Vec<Visit>)>,
}

impl AttendanceHistory {
    pub fn new(keep_days: u32) -> Self {
        AttendanceHistory { keep_days: keep_days.max(1) as usize, days: VecDeque::new() }
    }

    pub fn push(&mut self, day: i32, visits: Vec<Visit>) {
        self.days.push_back((day, visits));
        while self.days.len() > self.keep_days {
            self.days.pop_front();
        }
    }

    /// Sessions held on days in `(to - window, to]`.
    pub fn sessions_in(&self, to: i32, window: u32) -> impl Iterator<Item = (i32, &Visit)> {
        let from = to - window as i32;
        self.days
            .iter()
            .filter(move |(d, _)| *d > from && *d <= to)
            .flat_map(|(d, visits)| visits.iter().map(move |v| (*d, v)))
    }
}

/// Sessions, within the window ending at `day`, that were attended by a
/// person who tested positive within `window` days after attending.
fn positive_sessions<'a>(
    positives: &[(i32, PersonId)],
    history: &'a AttendanceHistory,
    day: i32,
    window: u32,
) -> Vec<&'a Visit> {
    if positives.is_empty() || window == 0 {
        return Vec::new();
    }
    let mut tested_on: HashMap<PersonId, Vec<i32>> = HashMap::new();
    for &(d, p) in positives {
        tested_on.entry(p).or_default().push(d);
    }
    let w = window as i32;
    history
        .sessions_in(day, window)
        .filter(|(d, visit)| {
            visit
                .attendees
                .iter()
                .any(|p| tested_on.get(p).is_some_and(|days| days.iter().any(|&t| *d <= t && *d > t - w)))
        })
        .map(|(_, v)| v)
        .collect()
}

/// CT classes for the positives `(test day, person)` over the trace window
/// ending at `day`.
pub fn contact_trace(
    positives: &[(i32, PersonId)],
    history: &AttendanceHistory,
    day: i32,
    window: u32,
) -> ContactTraceSet {
    ContactTraceSet { classes: positive_sessions(positives, history, day, window).iter().map(|v| v.class).collect() }
}

/// `1 +` the number of sessions each person shared with a positive person
/// during the window. People absent from the map have infectability 1.
pub fn infectability(
    positives: &[(i32, PersonId)],
    history: &AttendanceHistory,
    day: i32,
    window: u32,
) -> HashMap<PersonId, u32> {
    let mut out = HashMap::new();
    for visit in positive_sessions(positives, history, day, window) {
        for &p in &visit.attendees {
            *out.entry(p).or_insert(1) += 1;
        }
    }
    out
}

/// Draws `k` items without replacement, each successive draw proportional
/// to weight among the items remaining. Items with non-positive weight are
/// never drawn.
pub fn weighted_sample_without_replacement<R: Rng + ?Sized>(weights: &[f64], k: usize, rng: &mut R) -> Vec<usize> {
    // Exponential-key method: the k smallest Exp(1)/w keys.
    let mut keyed: Vec<(f64, usize)> = weights
        .iter()
        .enumerate()
        .filter(|(_, w)| **w > 0.0)
        .map(|(i, &w)| {
            let u: f64 = rng.random();
            (-(1.0 - u).ln() / w, i)
        })
        .collect();
    let k = k.min(keyed.len());
    if k == 0 {
        return Vec::new();
    }
    keyed.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    keyed.truncate(k);
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, i)| i).collect()
}

/// Testing bookkeeping carried from day to day within one replication.
#[derive(Debug, Clone)]
pub struct TestingState {
    last_test: Vec<Option<i32>>,
    ever_positive: Vec<bool>,
    recent_positives: Vec<(i32, PersonId)>,
}

impl TestingState {
    pub fn new(population: usize) -> Self {
        TestingState {
            last_test: vec![None; population],
            ever_positive: vec![false; population],
            recent_positives: Vec::new(),
        }
    }

    pub fn last_test(&self, p: PersonId) -> Option<i32> {
        self.last_test[p.index()]
    }

    pub fn gap_allows(&self, p: PersonId, day: i32, gap_days: u32) -> bool {
        self.last_test[p.index()].is_none_or(|last| day - last >= gap_days as i32)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DayTesting {
    pub records: Vec<TestRecord>,
    /// Everyone isolated today, with the state they had before.
    pub quarantined: Vec<(PersonId, HealthState)>,
}

/// Runs one day of testing and quarantines every positive.
///
/// `severe_prob` decides, for each true positive, whether the case ends
/// removed rather than recovered.
#[allow(clippy::too_many_arguments)]
pub fn run_daily_testing<R: Rng + ?Sized>(
    agents: &mut [AgentHealth],
    net: &BipartiteNetwork,
    history: &AttendanceHistory,
    state: &mut TestingState,
    config: &TestingConfig,
    severe_prob: f64,
    day: i32,
    rng: &mut R,
) -> DayTesting {
    let mut out = DayTesting::default();
    if !config.enabled || config.daily_capacity == 0 {
        return out;
    }
    let capacity = config.daily_capacity as usize;
    let window = config.trace_window();

    let mut queue: Vec<(i32, PersonId)> = agents
        .iter()
        .enumerate()
        .filter_map(|(i, a)| {
            let p = PersonId(i as u32);
            let onset = a.symptom_onset_day()?;
            let untested_since_onset = state.last_test[i].is_none_or(|t| t < onset);
            (a.state == HealthState::Symptomatic
                && onset < day
                && untested_since_onset
                && state.gap_allows(p, day, config.gap_days))
            .then_some((onset, p))
        })
        .collect();
    queue.sort_unstable();
    queue.truncate(capacity);
    for (_, p) in queue {
        administer(agents, state, config, severe_prob, day, p, TestTrigger::Symptomatic, rng, &mut out);
    }

    let window_start = day - window as i32;
    state.recent_positives.retain(|(d, _)| *d > window_start);
    let remaining = capacity - out.records.len();
    if !config.contact_tracing || remaining == 0 || state.recent_positives.is_empty() {
        return out;
    }

    let ct = contact_trace(&state.recent_positives, history, day, window);
    let exposure = infectability(&state.recent_positives, history, day, window);
    let tested_today: HashSet<PersonId> = out.records.iter().map(|r| r.person).collect();
    let mut candidates: Vec<(PersonId, ClassId)> = Vec::new();
    let mut seen = HashSet::new();
    for &class in &ct.classes {
        for &p in net.members_of(class) {
            let a = &agents[p.index()];
            if !net.person(p).is_student()
                || matches!(a.state, HealthState::Quarantined | HealthState::RemovedSevere)
                || state.ever_positive[p.index()]
                || tested_today.contains(&p)
                || !state.gap_allows(p, day, config.gap_days)
                || !seen.insert(p)
            {
                continue;
            }
            candidates.push((p, class));
        }
    }
    candidates.sort_unstable();
    let weights: Vec<f64> =
        candidates.iter().map(|(p, _)| config.ct_weighting.weight(exposure.get(p).copied().unwrap_or(1))).collect();
    for i in weighted_sample_without_replacement(&weights, remaining, rng) {
        let (p, class) = candidates[i];
        administer(agents, state, config, severe_prob, day, p, TestTrigger::ContactTrace(class), rng, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn administer<R: Rng + ?Sized>(
    agents: &mut [AgentHealth],
    state: &mut TestingState,
    config: &TestingConfig,
    severe_prob: f64,
    day: i32,
    p: PersonId,
    trigger: TestTrigger,
    rng: &mut R,
    out: &mut DayTesting,
) {
    let agent = &mut agents[p.index()];
    let infectious = agent.is_infectious();
    let positive_prob = if infectious { config.sensitivity } else { 1.0 - config.specificity };
    let positive = rng.random::<f64>() < positive_prob;
    state.last_test[p.index()] = Some(day);
    let result = if positive { TestResult::Positive } else { TestResult::Negative };
    out.records.push(TestRecord { day, person: p, result, infectious, trigger });
    if positive {
        state.ever_positive[p.index()] = true;
        state.recent_positives.push((day, p));
        let severe = infectious && rng.random::<f64>() < severe_prob;
        let prior = agent.state;
        if agent.quarantine(day, severe, config.false_positive_isolation_days) {
            out.quarantined.push((p, prior));
        }
    }
}

/// Writes the per-day testing log as delimited rows.
pub fn write_test_log<W: std::io::Write>(records: &[TestRecord], net: &BipartiteNetwork, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["day", "person_id", "result", "was_symptomatic_trigger", "class_id_if_ct"])?;
    for r in records {
        let (sym, class) = match r.trigger {
            TestTrigger::Symptomatic => ("true", String::new()),
            TestTrigger::ContactTrace(c) => ("false", net.class(c).key.clone()),
        };
        let result = match r.result {
            TestResult::Positive => "positive",
            TestResult::Negative => "negative",
        };
        out.write_record([r.day.to_string().as_str(), &net.person(r.person).key, result, sym, &class])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{ClassSection, Meeting, Modality, Person};
    use crate::progression::{Infection, InfectionSource};
    use crate::rng::StreamKey;

    fn symptomatic(onset: i32) -> AgentHealth {
        // Incubation ends exactly at `onset`; contagious well beyond.
        AgentHealth {
            state: HealthState::Symptomatic,
            infection: Some(Infection {
                day: onset - 5,
                incubation_days: 5.0,
                infectious_lead_days: 2,
                contagious_days: 30.0,
                will_be_symptomatic: true,
                source: InfectionSource::Campus,
            }),
            quarantine: None,
        }
    }

    /// `n` students and one instructor, all in one class.
    fn one_class(n: usize) -> BipartiteNetwork {
        let mut people: Vec<Person> = (0..n).map(|i| Person::student(format!("s{i}"), 0, 1)).collect();
        people.push(Person::instructor("i0", 0));
        let classes = vec![ClassSection {
            key: "c0".into(),
            department: 0,
            difficulty: 1,
            capacity: n as u32,
            meetings: vec![Meeting { day_of_week: 0, duration_hours: 1.0 }],
            modality: Modality::InPerson,
        }];
        let edges = (0..=n).map(|i| (PersonId(i as u32), ClassId(0))).collect();
        BipartiteNetwork::new(people, classes, edges).unwrap()
    }

    fn cfg(capacity: u32) -> TestingConfig {
        TestingConfig { enabled: true, daily_capacity: capacity, ..Default::default() }
    }

    #[test]
    fn zero_capacity_does_nothing() {
        let net = one_class(5);
        let mut agents = vec![symptomatic(0); 6];
        let mut state = TestingState::new(6);
        let out = run_daily_testing(
            &mut agents,
            &net,
            &AttendanceHistory::new(3),
            &mut state,
            &cfg(0),
            0.0,
            3,
            &mut StreamKey::root(1).rng(),
        );
        assert!(out.records.is_empty() && out.quarantined.is_empty());
        assert!(agents.iter().all(|a| a.state == HealthState::Symptomatic));
    }

    #[test]
    fn symptomatic_are_tested_next_day_oldest_first() {
        let net = one_class(5);
        let mut agents = vec![AgentHealth::default(); 6];
        agents[0] = symptomatic(2);
        agents[1] = symptomatic(1);
        agents[2] = symptomatic(3);
        let mut state = TestingState::new(6);
        let config = TestingConfig { sensitivity: 1.0, contact_tracing: false, ..cfg(1) };
        let hist = AttendanceHistory::new(3);
        let out =
            run_daily_testing(&mut agents, &net, &hist, &mut state, &config, 0.0, 3, &mut StreamKey::root(1).rng());
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].person, PersonId(1));
        // Onset on day 3 waits until day 4; person 0 rolls over.
        let out =
            run_daily_testing(&mut agents, &net, &hist, &mut state, &cfg(5), 0.0, 4, &mut StreamKey::root(2).rng());
        let tested: Vec<PersonId> = out.records.iter().map(|r| r.person).collect();
        assert_eq!(&tested[..2], &[PersonId(0), PersonId(2)]);
    }

    #[test]
    fn gap_days_are_respected() {
        let mut state = TestingState::new(1);
        state.last_test[0] = Some(5);
        let p = PersonId(0);
        assert!(!state.gap_allows(p, 6, 3));
        assert!(!state.gap_allows(p, 7, 3));
        assert!(state.gap_allows(p, 8, 3));
    }

    #[test]
    fn false_negative_fraction() {
        let net = one_class(10);
        let config = TestingConfig { contact_tracing: false, ..cfg(100) };
        let reps = 100_000;
        let mut negatives = 0usize;
        let mut total = 0usize;
        for r in 0..reps / 10 {
            let mut agents = vec![symptomatic(0); 11];
            let mut state = TestingState::new(11);
            let out = run_daily_testing(
                &mut agents,
                &net,
                &AttendanceHistory::new(3),
                &mut state,
                &config,
                0.0,
                1,
                &mut StreamKey::root(r).rng(),
            );
            total += out.records.len();
            negatives += out.records.iter().filter(|r| r.result == TestResult::Negative).count();
        }
        assert_eq!(total, reps as usize + reps as usize / 10);
        let frac = negatives as f64 / total as f64;
        assert!((frac - 0.033).abs() < 0.002, "{frac}");
    }

    #[test]
    fn contact_trace_definition() {
        let mut hist = AttendanceHistory::new(3);
        let visit = |c: u32, who: &[u32]| Visit {
            class: ClassId(c),
            duration_hours: 1.0,
            attendees: who.iter().map(|&p| PersonId(p)).collect(),
        };
        hist.push(4, vec![visit(0, &[1, 2]), visit(1, &[3])]);
        hist.push(5, vec![visit(2, &[1, 3]), visit(3, &[4])]);
        assert!(contact_trace(&[], &hist, 5, 3).classes.is_empty());
        let ct = contact_trace(&[(5, PersonId(1))], &hist, 5, 3);
        assert_eq!(ct.classes.into_iter().collect::<Vec<_>>(), vec![ClassId(0), ClassId(2)]);
        assert!(contact_trace(&[(5, PersonId(9))], &hist, 5, 3).classes.is_empty());
        let inf = infectability(&[(5, PersonId(1))], &hist, 5, 3);
        assert_eq!(inf[&PersonId(3)], 2);
        assert_eq!(inf[&PersonId(1)], 3);
        assert!(!inf.contains_key(&PersonId(4)));
        // Outside the window nothing is traced.
        assert!(contact_trace(&[(5, PersonId(1))], &hist, 9, 3).classes.is_empty());
    }

    #[test]
    fn ct_sampling_fills_remaining_budget_with_students_only() {
        let net = one_class(20);
        let mut agents = vec![AgentHealth::default(); 21];
        agents[0] = symptomatic(2);
        let mut hist = AttendanceHistory::new(3);
        hist.push(
            3,
            vec![Visit { class: ClassId(0), duration_hours: 1.0, attendees: (0..=20).map(PersonId).collect() }],
        );
        let mut state = TestingState::new(21);
        let config = TestingConfig { sensitivity: 1.0, ..cfg(6) };
        let out =
            run_daily_testing(&mut agents, &net, &hist, &mut state, &config, 0.0, 3, &mut StreamKey::root(3).rng());
        assert_eq!(out.records.len(), 6);
        assert_eq!(out.records[0].trigger, TestTrigger::Symptomatic);
        assert_eq!(out.quarantined, vec![(PersonId(0), HealthState::Symptomatic)]);
        for r in &out.records[1..] {
            assert_eq!(r.trigger, TestTrigger::ContactTrace(ClassId(0)));
            assert!(net.person(r.person).is_student());
            assert_ne!(r.person, PersonId(0));
        }
    }

    #[test]
    fn false_positive_quarantine_restores_state() {
        let net = one_class(3);
        let mut agents = vec![AgentHealth::default(); 4];
        let before = agents.clone();
        let mut hist = AttendanceHistory::new(3);
        agents[0] = symptomatic(0);
        hist.push(1, vec![Visit { class: ClassId(0), duration_hours: 1.0, attendees: (0..4).map(PersonId).collect() }]);
        let mut state = TestingState::new(4);
        let config = TestingConfig { sensitivity: 1.0, specificity: 0.0, ..cfg(10) };
        let out =
            run_daily_testing(&mut agents, &net, &hist, &mut state, &config, 0.0, 1, &mut StreamKey::root(3).rng());
        assert_eq!(out.quarantined.len(), 3);
        assert_eq!(agents[3], before[3], "instructors are not contact traced");
        for p in 1..3 {
            let q = agents[p].quarantine.unwrap();
            assert!(!q.true_positive);
            assert_eq!(q.until, 15);
            agents[p].advance_day(15, |_, _| {});
            assert_eq!(agents[p], before[p]);
        }
    }

    #[test]
    fn specificity_one_never_false_positive() {
        let net = one_class(30);
        let mut agents = vec![AgentHealth::default(); 31];
        agents[0] = symptomatic(0);
        let mut hist = AttendanceHistory::new(3);
        hist.push(
            1,
            vec![Visit { class: ClassId(0), duration_hours: 1.0, attendees: (0..31).map(PersonId).collect() }],
        );
        let mut state = TestingState::new(31);
        let out =
            run_daily_testing(&mut agents, &net, &hist, &mut state, &cfg(100), 0.0, 1, &mut StreamKey::root(3).rng());
        assert!(out.records.iter().all(|r| r.result == TestResult::Negative || r.infectious));
    }

    /// Exact probability that successive weighted draws without
    /// replacement produce exactly the set `target` (in any order).
    fn brute_force_set_probability(weights: &[f64], target: &[usize]) -> f64 {
        fn go(weights: &[f64], remaining: &mut Vec<usize>, taken: &mut Vec<usize>, target: &[usize]) -> f64 {
            if taken.len() == target.len() {
                let mut t = taken.clone();
                t.sort_unstable();
                return if t == target { 1.0 } else { 0.0 };
            }
            let total: f64 = remaining.iter().map(|&i| weights[i]).sum();
            let mut acc = 0.0;
            for pos in 0..remaining.len() {
                let i = remaining.remove(pos);
                taken.push(i);
                acc += weights[i] / total * go(weights, remaining, taken, target);
                taken.pop();
                remaining.insert(pos, i);
            }
            acc
        }
        go(weights, &mut (0..weights.len()).collect(), &mut Vec::new(), target)
    }

    #[test]
    fn weighted_sampling_matches_brute_force() {
        let weights: Vec<f64> = [1u32, 2, 3, 5, 9].iter().map(|&i| CtWeighting::LogInfectability.weight(i)).collect();
        let k = 2;
        let n = 200_000;
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut rng = StreamKey::root(77).rng();
        for _ in 0..n {
            let mut s = weighted_sample_without_replacement(&weights, k, &mut rng);
            s.sort_unstable();
            *counts.entry(s).or_default() += 1;
        }
        let mut total_p = 0.0;
        for a in 0..weights.len() {
            for b in a + 1..weights.len() {
                let p = brute_force_set_probability(&weights, &[a, b]);
                total_p += p;
                let freq = counts.get(&vec![a, b]).copied().unwrap_or(0) as f64 / n as f64;
                let se = (p * (1.0 - p) / n as f64).sqrt();
                assert!((freq - p).abs() < 5.0 * se, "{a},{b}: {freq} vs {p}");
            }
        }
        assert!((total_p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_sampling_edge_cases() {
        let mut rng = StreamKey::root(1).rng();
        assert!(weighted_sample_without_replacement(&[], 3, &mut rng).is_empty());
        assert_eq!(weighted_sample_without_replacement(&[1.0, 0.0, 2.0], 5, &mut rng).len(), 2);
        assert!(!weighted_sample_without_replacement(&[1.0, 0.0, 2.0], 5, &mut rng).contains(&1));
    }

    #[test]
    fn test_log_rows() {
        let net = one_class(2);
        let records = vec![
            TestRecord {
                day: 3,
                person: PersonId(0),
                result: TestResult::Positive,
                infectious: true,
                trigger: TestTrigger::Symptomatic,
            },
            TestRecord {
                day: 3,
                person: PersonId(1),
                result: TestResult::Negative,
                infectious: false,
                trigger: TestTrigger::ContactTrace(ClassId(0)),
            },
        ];
        let mut buf = Vec::new();
        write_test_log(&records, &net, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "day,person_id,result,was_symptomatic_trigger,class_id_if_ct\n3,s0,positive,true,\n3,s1,negative,false,c0\n"
        );
    }
}
