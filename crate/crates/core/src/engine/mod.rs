//! The daily simulation loop for one replication.
//!
//! Each day runs four phases in a fixed order:
//!
//! 1. outside infections,
//! 2. class sessions (infections committed after every session is evaluated),
//! 3. testing and quarantine,
//! 4. disease progression to the next day.

mod ensemble;

pub use ensemble::{
    compare_scenarios, preset_seed, replication_seed, report_days, run_ensemble, Comparison, ComparisonRow, Ensemble,
    EnsembleResult, RunFinal, Series, WEEK_END_DAYS,
};

use crate::net::{sample_event_sequence, BipartiteNetwork, ClassId, EventSequence, Modality, PersonId, Visit};
use crate::policy::{resolve_mask_wearing, PolicyConfig, REFERENCE_STUDENTS};
use crate::progression::{
    apply_outside_infection, seed_initial_infections, AgentHealth, HealthState, InfectionSource, ProgressionParams,
};
use crate::rng::{Phase, StreamKey};
use crate::testing::{run_daily_testing, AttendanceHistory, DayTesting, TestingState};
use crate::transmission::{
    class_session_infections, SessionAttendee, SessionContext, SessionStatus, TransmissionParams,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineParams {
    pub horizon_days: u32,
    /// Probability that a student attends a given scheduled meeting.
    pub attendance_rate: f64,
    /// Count infected instructors in the headline series too.
    pub count_instructors: bool,
    /// Share random streams across compared scenarios.
    pub common_random_numbers: bool,
    /// Treat the outside infection rate and the testing budget as figures
    /// for the reference campus and scale them by relative student count.
    pub per_capita_scaling: bool,
}

impl Default for EngineParams {
    fn default() -> Self {
        EngineParams {
            horizon_days: 84,
            attendance_rate: 1.0,
            count_instructors: false,
            common_random_numbers: true,
            per_capita_scaling: true,
        }
    }
}

impl EngineParams {
    pub fn validate(&self) -> Result<(), String> {
        if self.horizon_days == 0 {
            return Err("engine.horizon_days must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.attendance_rate) {
            return Err("engine.attendance_rate must lie in [0, 1]".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModelParams {
    pub transmission: TransmissionParams,
    pub progression: ProgressionParams,
    pub engine: EngineParams,
}

/// Outcome of one replication. Every series has one entry per day; entry
/// `d` reflects the end of day `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub seed: u64,
    /// Infections acquired in class sessions.
    pub cumulative_campus: Vec<u32>,
    /// Campus, outside and initial infections together.
    pub cumulative_all: Vec<u32>,
    /// Campus infections acquired on each day.
    pub new_campus: Vec<u32>,
    pub final_counts: BTreeMap<HealthState, u32>,
    pub tests: u32,
    pub positives: u32,
}

impl SimulationResult {
    pub fn final_campus(&self) -> u32 {
        self.cumulative_campus.last().copied().unwrap_or(0)
    }

    pub fn final_all(&self) -> u32 {
        self.cumulative_all.last().copied().unwrap_or(0)
    }
}

/// Hooks for inspecting a replication as it runs.
pub trait Observer {
    fn transition(&mut self, _day: i32, _person: PersonId, _from: HealthState, _to: HealthState) {}
    fn session(&mut self, _day: i32, _class: ClassId, _attendees: &[SessionAttendee], _infected: &[PersonId]) {}
    fn testing(&mut self, _day: i32, _out: &DayTesting) {}
    fn day_end(&mut self, _day: i32, _agents: &[AgentHealth]) {}
}

impl Observer for () {}

/// Which classes meet in person under `policy`.
pub fn in_person_classes(net: &BipartiteNetwork, policy: &PolicyConfig) -> Vec<bool> {
    (0..net.classes().len())
        .map(|j| {
            let class = ClassId(j as u32);
            net.class(class).modality == Modality::InPerson
                && policy.modality_cap.is_none_or(|cap| net.enrolled_students(class) <= cap as usize)
        })
        .collect()
}

pub fn run_single(
    net: &BipartiteNetwork,
    events: &EventSequence,
    policy: &PolicyConfig,
    params: &ModelParams,
    seed: u64,
) -> SimulationResult {
    run_observed(net, events, policy, params, seed, &mut ())
}

/// Runs one replication, reporting to `observer`. The result depends only
/// on the arguments.
pub fn run_observed(
    net: &BipartiteNetwork,
    events: &EventSequence,
    policy: &PolicyConfig,
    params: &ModelParams,
    seed: u64,
    observer: &mut impl Observer,
) -> SimulationResult {
    let root = StreamKey::root(seed);
    let disease_key = root.phase(Phase::Disease);
    let prog = &params.progression;
    let horizon = (params.engine.horizon_days as usize).min(events.horizon());
    let counted = |p: PersonId| params.engine.count_instructors || net.person(p).is_student();

    let masks = resolve_mask_wearing(net, policy, &mut root.phase(Phase::Masks).rng());
    let in_person = in_person_classes(net, policy);
    let students: Vec<PersonId> =
        (0..net.people().len() as u32).map(PersonId).filter(|&p| net.person(p).is_student()).collect();
    let mut agents = vec![AgentHealth::default(); net.people().len()];
    let testing = &policy.testing;
    let mut test_state = TestingState::new(agents.len());
    let mut history = AttendanceHistory::new(testing.trace_window().max(1));

    let mut all_count = 0u32;
    let mut campus_count = 0u32;
    let mut result = SimulationResult {
        seed,
        cumulative_campus: Vec::with_capacity(horizon),
        cumulative_all: Vec::with_capacity(horizon),
        new_campus: Vec::with_capacity(horizon),
        final_counts: BTreeMap::new(),
        tests: 0,
        positives: 0,
    };

    let seeded =
        seed_initial_infections(&mut agents, &students, prog, &mut root.phase(Phase::Seeding).rng(), disease_key);
    for &p in &seeded {
        observer.transition(0, p, HealthState::Susceptible, HealthState::Incubating);
        if agents[p.index()].state != HealthState::Incubating {
            // Backdated seeds may already be further along.
            let mut replay = AgentHealth { state: HealthState::Incubating, ..agents[p.index()] };
            replay.advance_day(0, |from, to| observer.transition(0, p, from, to));
        }
    }
    all_count += seeded.iter().filter(|&&p| counted(p)).count() as u32;

    let mut attendees: Vec<SessionAttendee> = Vec::new();
    let mut newly: Vec<PersonId> = Vec::new();
    for d in 0..horizon {
        let day = d as i32;
        let outside = apply_outside_infection(
            &mut agents,
            &students,
            day,
            prog,
            &mut root.phase(Phase::Outside).day(d as i64).rng(),
            disease_key,
        );
        for &p in &outside {
            observer.transition(day, p, HealthState::Susceptible, HealthState::Incubating);
        }
        all_count += outside.iter().filter(|&&p| counted(p)).count() as u32;

        newly.clear();
        let mut held: Vec<Visit> = Vec::new();
        if d as u32 >= policy.online_until_day {
            let session_key = root.phase(Phase::Session).day(d as i64);
            for visit in &events.day(d).visits {
                if !in_person[visit.class.index()] {
                    continue;
                }
                attendees.clear();
                let mut infectors = 0usize;
                for &p in &visit.attendees {
                    let a = &agents[p.index()];
                    let status = match a.state {
                        HealthState::Quarantined | HealthState::RemovedSevere => continue,
                        HealthState::Susceptible => SessionStatus::Susceptible,
                        s if s.is_infectious() => {
                            infectors += 1;
                            SessionStatus::Infectious
                        }
                        _ => SessionStatus::Other,
                    };
                    attendees.push(SessionAttendee { person: p, status, mask: masks[p.index()] });
                }
                if attendees.is_empty() {
                    continue;
                }
                let infected = if infectors > 0 {
                    let ctx = SessionContext::new(
                        std::mem::take(&mut attendees),
                        visit.duration_hours,
                        policy.distancing_feet,
                        &params.transmission,
                    );
                    let mut rng = session_key.child(u64::from(visit.class.0)).rng();
                    let infected = class_session_infections(&ctx, &params.transmission, &mut rng);
                    attendees = ctx.attendees;
                    infected
                } else {
                    Vec::new()
                };
                observer.session(day, visit.class, &attendees, &infected);
                newly.extend_from_slice(&infected);
                if testing.enabled {
                    held.push(Visit {
                        class: visit.class,
                        duration_hours: visit.duration_hours,
                        attendees: attendees.iter().map(|a| a.person).collect(),
                    });
                }
            }
        }
        // Someone infected in two sessions the same day counts once.
        let mut new_today = 0u32;
        for &p in &newly {
            let agent = &mut agents[p.index()];
            if agent.state != HealthState::Susceptible {
                continue;
            }
            agent
                .infect(day, InfectionSource::Campus, prog, &mut disease_key.child(u64::from(p.0)).rng())
                .expect("checked susceptible");
            observer.transition(day, p, HealthState::Susceptible, HealthState::Incubating);
            if counted(p) {
                new_today += 1;
            }
        }
        campus_count += new_today;
        all_count += new_today;

        if testing.enabled {
            history.push(day, held);
            let out = run_daily_testing(
                &mut agents,
                net,
                &history,
                &mut test_state,
                testing,
                prog.severe_prob,
                day,
                &mut root.phase(Phase::Testing).day(d as i64).rng(),
            );
            for &(p, prior) in &out.quarantined {
                observer.transition(day, p, prior, HealthState::Quarantined);
            }
            result.tests += out.records.len() as u32;
            result.positives += out.quarantined.len() as u32;
            observer.testing(day, &out);
        }

        let next = day + 1;
        for (i, a) in agents.iter_mut().enumerate() {
            a.advance_day(next, |from, to| observer.transition(next, PersonId(i as u32), from, to));
        }
        observer.day_end(day, &agents);

        result.cumulative_campus.push(campus_count);
        result.cumulative_all.push(all_count);
        result.new_campus.push(new_today);
    }

    for a in &agents {
        *result.final_counts.entry(a.state).or_insert(0) += 1;
    }
    result
}

/// A campus, policy and parameter set ready to be replicated.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub net: Arc<BipartiteNetwork>,
    pub policy: PolicyConfig,
    pub params: ModelParams,
    fixed_events: Option<Arc<EventSequence>>,
}

impl Simulation {
    pub fn new(net: Arc<BipartiteNetwork>, policy: PolicyConfig, params: ModelParams) -> Self {
        // With full attendance every replication sees the same sessions.
        let fixed_events = (params.engine.attendance_rate >= 1.0).then(|| {
            Arc::new(sample_event_sequence(&net, 1.0, params.engine.horizon_days as usize, StreamKey::root(0)))
        });
        Simulation { net, policy, params, fixed_events }
    }

    pub fn with_policy(&self, policy: PolicyConfig) -> Self {
        Simulation { policy, ..self.clone() }
    }

    pub fn events(&self, seed: u64) -> Arc<EventSequence> {
        match &self.fixed_events {
            Some(ev) => Arc::clone(ev),
            None => Arc::new(sample_event_sequence(
                &self.net,
                self.params.engine.attendance_rate,
                self.params.engine.horizon_days as usize,
                StreamKey::root(seed),
            )),
        }
    }

    /// Policy and parameters as applied to this campus, after per-capita
    /// scaling if enabled.
    pub fn effective(&self) -> (PolicyConfig, ModelParams) {
        let mut policy = self.policy;
        let mut params = self.params;
        if params.engine.per_capita_scaling {
            let students = self.net.student_count();
            policy = policy.scaled_to(students);
            params.progression.outside_infections_per_day *= students as f64 / f64::from(REFERENCE_STUDENTS);
        }
        (policy, params)
    }

    pub fn run(&self, seed: u64) -> SimulationResult {
        self.run_observed(seed, &mut ())
    }

    pub fn run_observed(&self, seed: u64, observer: &mut impl Observer) -> SimulationResult {
        let (policy, params) = self.effective();
        run_observed(&self.net, &self.events(seed), &policy, &params, seed, observer)
    }
}
