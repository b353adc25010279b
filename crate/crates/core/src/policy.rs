//! Operating policies: one choice per decision dimension, plus named presets.

use crate::net::BipartiteNetwork;
use crate::testing::TestingConfig;
use crate::transmission::MaskType;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Student headcount of the reference campus that preset testing
/// capacities are expressed against.
pub const REFERENCE_STUDENTS: u32 = 46_782;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolicyConfig {
    pub student_mask: MaskType,
    pub instructor_mask: MaskType,
    pub student_mask_compliance: f64,
    pub instructor_mask_compliance: f64,
    pub distancing_feet: f64,
    /// Classes with more students than this are held online. `None` keeps
    /// every class in person.
    pub modality_cap: Option<u32>,
    /// Every class is online on days `< online_until_day`.
    pub online_until_day: u32,
    #[serde(skip)]
    pub testing: TestingConfig,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        PolicyConfig {
            student_mask: MaskType::Cloth,
            instructor_mask: MaskType::Cloth,
            student_mask_compliance: 0.0,
            instructor_mask_compliance: 0.0,
            distancing_feet: 2.0,
            modality_cap: None,
            online_until_day: 0,
            testing: TestingConfig::default(),
        }
    }
}

impl PolicyConfig {
    pub fn validate(&self, horizon: u32) -> Result<(), String> {
        for (name, v) in [
            ("student_mask_compliance", self.student_mask_compliance),
            ("instructor_mask_compliance", self.instructor_mask_compliance),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("policy.{name} must lie in [0, 1]"));
            }
        }
        if !(2.0..=6.0).contains(&self.distancing_feet) {
            return Err("policy.distancing_feet must lie in [2, 6]".into());
        }
        if self.modality_cap == Some(0) {
            return Err("policy.modality_cap must be positive".into());
        }
        if self.online_until_day > horizon {
            return Err(format!("policy.online_until_day must not exceed the horizon ({horizon})"));
        }
        self.testing.validate()
    }

    /// Rescales the testing budget from the reference campus to one with
    /// `students` students.
    pub fn scaled_to(mut self, students: usize) -> Self {
        let factor = students as f64 / f64::from(REFERENCE_STUDENTS);
        self.testing.daily_capacity = (f64::from(self.testing.daily_capacity) * factor).round() as u32;
        self
    }

    /// Number of dimensions that deviate from the unrestricted default.
    pub fn restriction_count(&self) -> usize {
        [
            self.student_mask_compliance > 0.0 || self.instructor_mask_compliance > 0.0,
            self.distancing_feet > 2.0,
            self.modality_cap.is_some(),
            self.testing.enabled,
            self.online_until_day > 0,
        ]
        .iter()
        .filter(|b| **b)
        .count()
    }
}

/// Draws who wears a mask for one replication. Each person draws one
/// uniform regardless of the compliance level, so raising compliance under
/// the same stream only adds wearers.
pub fn resolve_mask_wearing<R: Rng + ?Sized>(
    net: &BipartiteNetwork,
    policy: &PolicyConfig,
    rng: &mut R,
) -> Vec<MaskType> {
    net.people()
        .iter()
        .map(|p| {
            let (mask, compliance) = if p.is_student() {
                (policy.student_mask, policy.student_mask_compliance)
            } else {
                (policy.instructor_mask, policy.instructor_mask_compliance)
            };
            let u: f64 = rng.random();
            if u < compliance {
                mask
            } else {
                MaskType::None
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioPreset {
    pub name: String,
    pub label: String,
    pub policy: PolicyConfig,
}

fn preset(name: &str, label: &str, policy: PolicyConfig) -> ScenarioPreset {
    ScenarioPreset { name: name.into(), label: label.into(), policy }
}

/// Testing budget of the staged presets, per day on the reference campus.
pub const SUNRISE_TESTS_PER_DAY: u32 = 5_000;

/// The staged plan, each preset adding one dimension to the previous one.
/// Testing capacities are for the reference campus; see
/// [`PolicyConfig::scaled_to`].
pub fn sunrise_presets(horizon: u32) -> Vec<ScenarioPreset> {
    let none = PolicyConfig::default();
    let m = PolicyConfig { student_mask_compliance: 1.0, instructor_mask_compliance: 1.0, ..none };
    let pd_m = PolicyConfig { distancing_feet: 6.0, ..m };
    let cm_pd_m = PolicyConfig { modality_cap: Some(30), ..pd_m };
    let t_cm_pd_m = PolicyConfig {
        testing: TestingConfig { enabled: true, daily_capacity: SUNRISE_TESTS_PER_DAY, ..TestingConfig::default() },
        ..cm_pd_m
    };
    let rcm = PolicyConfig { online_until_day: 14.min(horizon), ..t_cm_pd_m };
    vec![
        preset("no-policy", "No Policy", none),
        preset("m", "M", m),
        preset("pd-m", "PD + M", pd_m),
        preset("cm-pd-m", "CM + PD + M", cm_pd_m),
        preset("t-cm-pd-m", "T + CM + PD + M", t_cm_pd_m),
        preset("rcm-t-pd-m", "RCM + T + PD + M", rcm),
    ]
}

fn testing_at(capacity: u32) -> PolicyConfig {
    PolicyConfig {
        testing: TestingConfig { enabled: true, daily_capacity: capacity, ..TestingConfig::default() },
        ..PolicyConfig::default()
    }
}

/// Single-dimension sweeps, each varying one dimension from the
/// unrestricted default.
pub fn experiment_presets() -> Vec<ScenarioPreset> {
    let base = PolicyConfig::default();
    let mut out = Vec::new();
    for pct in [0u32, 25, 50, 75, 100] {
        let c = f64::from(pct) / 100.0;
        out.push(preset(
            &format!("mask-compliance-{pct}"),
            &format!("Cloth masks, {pct}% compliance"),
            PolicyConfig { student_mask_compliance: c, instructor_mask_compliance: c, ..base },
        ));
    }
    for (name, mask) in [("cloth", MaskType::Cloth), ("medical", MaskType::Medical), ("n95", MaskType::N95)] {
        out.push(preset(
            &format!("mask-type-{name}"),
            &format!("{name} masks, full compliance"),
            PolicyConfig {
                student_mask: mask,
                instructor_mask: mask,
                student_mask_compliance: 1.0,
                instructor_mask_compliance: 1.0,
                ..base
            },
        ));
    }
    for ft in 2..=6u32 {
        out.push(preset(
            &format!("distancing-{ft}ft"),
            &format!("{ft} ft distancing"),
            PolicyConfig { distancing_feet: f64::from(ft), ..base },
        ));
    }
    out.push(preset("modality-unlimited", "All classes in person", base));
    for cap in [60u32, 30] {
        out.push(preset(
            &format!("modality-cap-{cap}"),
            &format!("Classes over {cap} online"),
            PolicyConfig { modality_cap: Some(cap), ..base },
        ));
    }
    for cap in [2_000u32, 5_000, 10_000] {
        out.push(preset(&format!("testing-{cap}"), &format!("{cap} tests/day"), testing_at(cap)));
    }
    out
}

/// Looks a preset up by name among the staged and experiment presets.
pub fn find_preset(name: &str, horizon: u32) -> Option<ScenarioPreset> {
    sunrise_presets(horizon).into_iter().chain(experiment_presets()).find(|p| p.name == name)
}
