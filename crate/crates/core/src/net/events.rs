use super::{BipartiteNetwork, ClassId, Modality, PersonId};
use crate::rng::{Phase, StreamKey};
use rand::Rng;

/// One class meeting on one day and who showed up.
#[derive(Debug, Clone, PartialEq)]
pub struct Visit {
    pub class: ClassId,
    pub duration_hours: f64,
    /// Sorted by person id.
    pub attendees: Vec<PersonId>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DayVisits {
    /// Sorted by class id.
    pub visits: Vec<Visit>,
}

/// Realized attendance for days `0..horizon`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EventSequence {
    days: Vec<DayVisits>,
}

impl EventSequence {
    pub fn from_days(days: Vec<DayVisits>) -> Self {
        EventSequence { days }
    }

    pub fn horizon(&self) -> usize {
        self.days.len()
    }

    pub fn day(&self, day: usize) -> &DayVisits {
        &self.days[day]
    }

    pub fn days(&self) -> &[DayVisits] {
        &self.days
    }

    pub fn visit_count(&self) -> usize {
        self.days.iter().map(|d| d.visits.len()).sum()
    }

    pub fn attendance_count(&self) -> usize {
        self.days.iter().flat_map(|d| &d.visits).map(|v| v.attendees.len()).sum()
    }
}

/// Samples class attendance for each day of the horizon.
///
/// Day `t` falls on weekday `t % 7` (day 0 is a Monday). Every scheduled
/// student meeting is kept independently with probability `attendance`;
/// instructors always attend. Online classes produce no visits. Each
/// `(day, class)` pair draws from its own stream under `key`, so changing
/// the modality of one class leaves every other class's attendance intact.
pub fn sample_event_sequence(net: &BipartiteNetwork, attendance: f64, horizon: usize, key: StreamKey) -> EventSequence {
    let attendance = attendance.clamp(0.0, 1.0);
    let key = key.phase(Phase::Attendance);
    let mut by_weekday: [Vec<(ClassId, f64)>; 7] = Default::default();
    for (j, class) in net.classes().iter().enumerate() {
        if class.modality == Modality::Online {
            continue;
        }
        for m in &class.meetings {
            by_weekday[m.day_of_week as usize % 7].push((ClassId(j as u32), m.duration_hours));
        }
    }
    let days = (0..horizon)
        .map(|t| {
            let day_key = key.day(t as i64);
            let visits = by_weekday[t % 7]
                .iter()
                .map(|&(class, duration_hours)| {
                    let members = net.members_of(class);
                    let attendees = if attendance >= 1.0 {
                        members.to_vec()
                    } else {
                        let mut rng = day_key.child(u64::from(class.0)).rng();
                        members
                            .iter()
                            .copied()
                            .filter(|&p| !net.person(p).is_student() || rng.random::<f64>() < attendance)
                            .collect()
                    };
                    Visit { class, duration_hours, attendees }
                })
                .collect();
            DayVisits { visits }
        })
        .collect();
    EventSequence { days }
}
