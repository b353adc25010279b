//! Per-agent disease state machine.
//!
//! ```text
//! susceptible → incubating → transmitting (pre-symptomatic)
//!             → asymptomatic | symptomatic → recovered
//! ```
//!
//! A positive test diverts an agent into quarantine. True positives leave
//! quarantine recovered (or removed, for severe cases); false positives are
//! returned to the state they had when they entered.
//!
//! Durations are continuous and compared against integer day indices
//! without rounding: a transition with threshold `τ` fires on the first
//! day `d ≥ τ`.

use crate::net::PersonId;
use crate::rng::StreamKey;
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Weibull};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HealthState {
    Susceptible,
    Incubating,
    TransmittingPresymptomatic,
    Asymptomatic,
    Symptomatic,
    Quarantined,
    RemovedSevere,
    Recovered,
}

impl HealthState {
    pub const ALL: [HealthState; 8] = [
        HealthState::Susceptible,
        HealthState::Incubating,
        HealthState::TransmittingPresymptomatic,
        HealthState::Asymptomatic,
        HealthState::Symptomatic,
        HealthState::Quarantined,
        HealthState::RemovedSevere,
        HealthState::Recovered,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_infectious(self) -> bool {
        matches!(self, HealthState::TransmittingPresymptomatic | HealthState::Asymptomatic | HealthState::Symptomatic)
    }

    /// Whether `self → to` is an edge of the state machine, counting the
    /// quarantine detour of a positive test.
    pub fn can_transition_to(self, to: HealthState) -> bool {
        use HealthState::*;
        match (self, to) {
            (Susceptible, Incubating) => true,
            (Incubating, TransmittingPresymptomatic) => true,
            (TransmittingPresymptomatic, Asymptomatic | Symptomatic) => true,
            (Asymptomatic | Symptomatic, Recovered) => true,
            (Quarantined, Recovered | RemovedSevere) => true,
            // False-positive release restores the pre-quarantine state.
            (Quarantined, Susceptible | Incubating) => true,
            (Quarantined, _) | (RemovedSevere, _) => false,
            (_, Quarantined) => self != RemovedSevere,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfectionSource {
    Campus,
    Outside,
    Seed,
}

/// Clocks sampled once at infection time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Infection {
    pub day: i32,
    pub incubation_days: f64,
    pub infectious_lead_days: u8,
    pub contagious_days: f64,
    pub will_be_symptomatic: bool,
    pub source: InfectionSource,
}

impl Infection {
    pub fn transmitting_from(&self) -> f64 {
        f64::from(self.day) + self.incubation_days - f64::from(self.infectious_lead_days)
    }

    pub fn symptoms_resolve_at(&self) -> f64 {
        f64::from(self.day) + self.incubation_days
    }

    pub fn contagious_until(&self) -> f64 {
        self.transmitting_from() + self.contagious_days
    }

    /// First whole day on which the agent is no longer contagious.
    pub fn first_clear_day(&self) -> i32 {
        self.contagious_until().ceil() as i32
    }

    pub fn symptom_onset_day(&self) -> Option<i32> {
        self.will_be_symptomatic.then(|| self.symptoms_resolve_at().ceil() as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quarantine {
    pub entered: i32,
    /// Released on the first day `>= until`.
    pub until: i32,
    pub release_to: HealthState,
    pub true_positive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentHealth {
    pub state: HealthState,
    pub infection: Option<Infection>,
    pub quarantine: Option<Quarantine>,
}

impl Default for AgentHealth {
    fn default() -> Self {
        AgentHealth { state: HealthState::Susceptible, infection: None, quarantine: None }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ProgressionError {
    #[error("cannot infect an agent in state {0:?}")]
    NotSusceptible(HealthState),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProgressionParams {
    pub incubation_shape: f64,
    /// Days.
    pub incubation_scale: f64,
    pub symptomatic_prob: f64,
    pub contagious_shape: f64,
    /// Days.
    pub contagious_scale: f64,
    pub severe_prob: f64,
    /// Whole part is infected every day; the fractional part adds one more
    /// infection with that probability.
    pub outside_infections_per_day: f64,
    pub initial_infected_fraction: f64,
    pub initial_infection_age_max_days: u32,
}

impl Default for ProgressionParams {
    fn default() -> Self {
        ProgressionParams {
            incubation_shape: 1.97,
            incubation_scale: 9.35,
            symptomatic_prob: 0.65,
            contagious_shape: 3.0,
            contagious_scale: 2.6,
            severe_prob: 0.0,
            outside_infections_per_day: 5.0,
            initial_infected_fraction: 0.01,
            initial_infection_age_max_days: 5,
        }
    }
}

impl ProgressionParams {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("incubation_shape", self.incubation_shape),
            ("incubation_scale", self.incubation_scale),
            ("contagious_shape", self.contagious_shape),
            ("contagious_scale", self.contagious_scale),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("progression.{name} must be positive"));
            }
        }
        if !(self.outside_infections_per_day >= 0.0 && self.outside_infections_per_day.is_finite()) {
            return Err("progression.outside_infections_per_day must be non-negative".into());
        }
        for (name, v) in [
            ("symptomatic_prob", self.symptomatic_prob),
            ("severe_prob", self.severe_prob),
            ("initial_infected_fraction", self.initial_infected_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("progression.{name} must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

/// Incubation period in days (Weibull, shape/scale parameterization).
pub fn sample_incubation<R: Rng + ?Sized>(params: &ProgressionParams, rng: &mut R) -> f64 {
    let dist = Weibull::new(params.incubation_scale, params.incubation_shape).expect("validated weibull parameters");
    loop {
        let x = dist.sample(rng);
        if x > 0.0 {
            return x;
        }
    }
}

/// Contagious period in days (Gamma, shape/scale parameterization).
pub fn sample_contagious_duration<R: Rng + ?Sized>(params: &ProgressionParams, rng: &mut R) -> f64 {
    let dist = Gamma::new(params.contagious_shape, params.contagious_scale).expect("validated gamma parameters");
    loop {
        let x = dist.sample(rng);
        if x > 0.0 {
            return x;
        }
    }
}

impl AgentHealth {
    pub fn is_infectious(&self) -> bool {
        self.state.is_infectious()
    }

    /// Starts an infection on `day`. Recovered or already-infected agents
    /// cannot be infected.
    pub fn infect<R: Rng + ?Sized>(
        &mut self,
        day: i32,
        source: InfectionSource,
        params: &ProgressionParams,
        rng: &mut R,
    ) -> Result<(), ProgressionError> {
        if self.state != HealthState::Susceptible {
            return Err(ProgressionError::NotSusceptible(self.state));
        }
        // The lead must be shorter than the incubation period; redraw the
        // lead among admissible values, and the incubation itself when it
        // leaves no admissible lead.
        let (incubation_days, lead) = loop {
            let inc = sample_incubation(params, rng);
            let admissible = (1u8..=3).filter(|&l| f64::from(l) < inc).count() as u8;
            if admissible > 0 {
                break (inc, rng.random_range(1..=admissible));
            }
        };
        let contagious_days = sample_contagious_duration(params, rng);
        let will_be_symptomatic = rng.random::<f64>() < params.symptomatic_prob;
        self.state = HealthState::Incubating;
        self.infection = Some(Infection {
            day,
            incubation_days,
            infectious_lead_days: lead,
            contagious_days,
            will_be_symptomatic,
            source,
        });
        Ok(())
    }

    /// Brings the state up to date for `day`, reporting each transition.
    pub fn advance_day(&mut self, day: i32, mut on_transition: impl FnMut(HealthState, HealthState)) {
        let t = f64::from(day);
        loop {
            let next = match (self.state, self.infection, self.quarantine) {
                (HealthState::Incubating, Some(inf), _) if t >= inf.transmitting_from() => {
                    HealthState::TransmittingPresymptomatic
                }
                (HealthState::TransmittingPresymptomatic, Some(inf), _) if t >= inf.symptoms_resolve_at() => {
                    if inf.will_be_symptomatic {
                        HealthState::Symptomatic
                    } else {
                        HealthState::Asymptomatic
                    }
                }
                (HealthState::Asymptomatic | HealthState::Symptomatic, Some(inf), _) if t >= inf.contagious_until() => {
                    HealthState::Recovered
                }
                (HealthState::Quarantined, _, Some(q)) if day >= q.until => {
                    self.quarantine = None;
                    q.release_to
                }
                _ => break,
            };
            on_transition(self.state, next);
            self.state = next;
        }
    }

    /// Isolates the agent after a positive test on `day`. No-op when the
    /// agent is already quarantined.
    ///
    /// True positives stay isolated until their contagious period ends
    /// (at least one day), then recover or, if `severe`, are removed.
    /// Anyone else is isolated for `false_positive_days` and then returned
    /// to their prior state.
    pub fn quarantine(&mut self, day: i32, severe: bool, false_positive_days: u32) -> bool {
        if matches!(self.state, HealthState::Quarantined | HealthState::RemovedSevere) {
            return false;
        }
        let q = match (self.is_infectious(), self.infection) {
            (true, Some(inf)) => Quarantine {
                entered: day,
                until: (day + 1).max(inf.first_clear_day()),
                release_to: if severe { HealthState::RemovedSevere } else { HealthState::Recovered },
                true_positive: true,
            },
            _ => Quarantine {
                entered: day,
                until: day + false_positive_days as i32,
                release_to: self.state,
                true_positive: false,
            },
        };
        self.state = HealthState::Quarantined;
        self.quarantine = Some(q);
        true
    }

    pub fn symptom_onset_day(&self) -> Option<i32> {
        self.infection.and_then(|i| i.symptom_onset_day())
    }
}

/// Stream each agent's disease clocks are drawn from, independent of
/// when or how the agent was infected.
pub fn disease_stream(disease_key: StreamKey, person: PersonId) -> crate::rng::SimRng {
    disease_key.child(u64::from(person.0)).rng()
}

/// Infects `⌊fraction × |students|⌋` students chosen uniformly, backdating
/// each infection by an age drawn uniformly from `0..=max_age` days and
/// advancing its clocks to day 0.
pub fn seed_initial_infections<R: Rng + ?Sized>(
    agents: &mut [AgentHealth],
    students: &[PersonId],
    params: &ProgressionParams,
    rng: &mut R,
    disease_key: StreamKey,
) -> Vec<PersonId> {
    let count = (params.initial_infected_fraction * students.len() as f64).floor() as usize;
    let mut picked: Vec<PersonId> =
        sample(rng, students.len(), count.min(students.len())).into_iter().map(|i| students[i]).collect();
    picked.sort_unstable();
    for &p in &picked {
        let age = rng.random_range(0..=params.initial_infection_age_max_days) as i32;
        let agent = &mut agents[p.index()];
        agent
            .infect(-age, InfectionSource::Seed, params, &mut disease_stream(disease_key, p))
            .expect("fresh population is susceptible");
        agent.advance_day(0, |_, _| {});
    }
    picked
}

/// Infects up to `outside_infections_per_day` susceptible, non-quarantined
/// students chosen uniformly without replacement. A fractional rate is
/// rounded up or down at random, preserving the mean.
pub fn apply_outside_infection<R: Rng + ?Sized>(
    agents: &mut [AgentHealth],
    students: &[PersonId],
    day: i32,
    params: &ProgressionParams,
    rng: &mut R,
    disease_key: StreamKey,
) -> Vec<PersonId> {
    let eligible: Vec<PersonId> =
        students.iter().copied().filter(|p| agents[p.index()].state == HealthState::Susceptible).collect();
    let rate = params.outside_infections_per_day;
    let whole = rate.floor();
    let extra = usize::from(rate > whole && rng.random::<f64>() < rate - whole);
    let k = (whole as usize + extra).min(eligible.len());
    let mut picked: Vec<PersonId> = sample(rng, eligible.len(), k).into_iter().map(|i| eligible[i]).collect();
    picked.sort_unstable();
    for &p in &picked {
        agents[p.index()]
            .infect(day, InfectionSource::Outside, params, &mut disease_stream(disease_key, p))
            .expect("eligible agents are susceptible");
    }
    picked
}
