//! Airborne infection risk for a single class session (Wells–Riley).
//!
//! With `I` infectors emitting `q` quanta/h, a susceptible breathing `p`
//! m³/h for `t` hours in a room ventilated at `Q` m³/h receives an
//! exponent `x = I·p·q·t / Q`. The exact risk is `1 − e^(−x)`; the engine
//! uses the first-order form `min(x, 1)`. Masks scale `p` for the wearer
//! and each infector's `q` individually, so `I·q` becomes a sum over
//! infectors.

use crate::net::PersonId;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const FEET_TO_METERS: f64 = 0.3048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskType {
    #[default]
    None,
    Cloth,
    Medical,
    N95,
}

impl MaskType {
    pub fn is_worn(self) -> bool {
        self != MaskType::None
    }
}

/// Filter efficiency per mask type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaskEfficiencies {
    pub cloth: f64,
    pub medical: f64,
    pub n95: f64,
}

impl Default for MaskEfficiencies {
    fn default() -> Self {
        MaskEfficiencies { cloth: 0.38, medical: 0.55, n95: 0.95 }
    }
}

impl MaskEfficiencies {
    pub fn of(&self, mask: MaskType) -> f64 {
        match mask {
            MaskType::None => 0.0,
            MaskType::Cloth => self.cloth,
            MaskType::Medical => self.medical,
            MaskType::N95 => self.n95,
        }
    }

    /// Fraction of air (or emitted quanta) passing the mask.
    pub fn pass_through(&self, mask: MaskType) -> f64 {
        1.0 - self.of(mask)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbabilityModel {
    #[default]
    Linear,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransmissionParams {
    /// Pulmonary ventilation rate of a susceptible, m³/h.
    pub pulmonary_rate: f64,
    /// Quantum generation rate of an infector, quanta/h.
    pub quantum_rate: f64,
    /// Room air changes per hour.
    pub air_changes: f64,
    /// Metres.
    pub ceiling_height: f64,
    pub model: ProbabilityModel,
    pub masks: MaskEfficiencies,
}

impl Default for TransmissionParams {
    fn default() -> Self {
        TransmissionParams {
            pulmonary_rate: 0.48,
            quantum_rate: 20.0,
            air_changes: 4.0,
            ceiling_height: 3.0,
            model: ProbabilityModel::Linear,
            masks: MaskEfficiencies::default(),
        }
    }
}

impl TransmissionParams {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("pulmonary_rate", self.pulmonary_rate),
            ("quantum_rate", self.quantum_rate),
            ("air_changes", self.air_changes),
            ("ceiling_height", self.ceiling_height),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("transmission.{name} must be positive"));
            }
        }
        for (name, v) in [("cloth", self.masks.cloth), ("medical", self.masks.medical), ("n95", self.masks.n95)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("transmission.masks.{name} must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

/// Room volume in m³ when each of `attendees` occupies a circle of
/// `radius_feet` under a ceiling of `ceiling_height` metres.
pub fn room_volume(attendees: usize, radius_feet: f64, ceiling_height: f64) -> f64 {
    let r = radius_feet * FEET_TO_METERS;
    attendees as f64 * std::f64::consts::PI * r * r * ceiling_height
}

/// `1 − e^(−I·p·q·t/Q)`.
pub fn infection_probability_exact(infectors: u32, p: f64, q: f64, t: f64, ventilation: f64) -> f64 {
    exact_from_exponent(f64::from(infectors) * p * q * t / ventilation)
}

/// `min(I·p·q·t/Q, 1)`.
pub fn infection_probability_linear(infectors: u32, p: f64, q: f64, t: f64, ventilation: f64) -> f64 {
    linear_from_exponent(f64::from(infectors) * p * q * t / ventilation)
}

#[inline]
pub fn exact_from_exponent(x: f64) -> f64 {
    -(-x).exp_m1()
}

#[inline]
pub fn linear_from_exponent(x: f64) -> f64 {
    x.min(1.0)
}

/// Breathing rate of the susceptible and summed emission of the
/// infectors, each reduced by the mask they wear.
pub fn effective_rates(
    infector_masks: &[MaskType],
    susceptible_mask: MaskType,
    p: f64,
    q: f64,
    masks: &MaskEfficiencies,
) -> (f64, f64) {
    let p_eff = p * masks.pass_through(susceptible_mask);
    let q_sum = infector_masks.iter().map(|&m| q * masks.pass_through(m)).sum();
    (p_eff, q_sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SessionStatus {
    Susceptible,
    Infectious,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SessionAttendee {
    pub person: PersonId,
    pub status: SessionStatus,
    pub mask: MaskType,
}

/// Everyone present at one class session.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionContext {
    pub attendees: Vec<SessionAttendee>,
    pub duration_hours: f64,
    pub room_volume: f64,
    /// Room ventilation rate `Q` in m³/h.
    pub ventilation: f64,
}

impl SessionContext {
    /// Sizes the room from the number of people actually present.
    pub fn new(
        attendees: Vec<SessionAttendee>,
        duration_hours: f64,
        distancing_feet: f64,
        params: &TransmissionParams,
    ) -> Self {
        let room_volume = room_volume(attendees.len().max(1), distancing_feet, params.ceiling_height);
        SessionContext { attendees, duration_hours, room_volume, ventilation: params.air_changes * room_volume }
    }

    /// Emission summed over infectious attendees, after masks.
    pub fn quanta_sum(&self, params: &TransmissionParams) -> f64 {
        self.attendees
            .iter()
            .filter(|a| a.status == SessionStatus::Infectious)
            .map(|a| params.quantum_rate * params.masks.pass_through(a.mask))
            .sum()
    }

    /// Infection probability for a susceptible wearing `mask`.
    pub fn risk_for(&self, mask: MaskType, quanta_sum: f64, params: &TransmissionParams) -> f64 {
        let p_eff = params.pulmonary_rate * params.masks.pass_through(mask);
        let x = p_eff * quanta_sum * self.duration_hours / self.ventilation;
        match params.model {
            ProbabilityModel::Linear => linear_from_exponent(x),
            ProbabilityModel::Exact => exact_from_exponent(x),
        }
    }
}

/// Samples which susceptible attendees get infected in this session.
///
/// Infectors are fixed at session start. Draws are consumed only when at
/// least one infector is present, one per susceptible in attendee order.
pub fn class_session_infections<R: Rng + ?Sized>(
    ctx: &SessionContext,
    params: &TransmissionParams,
    rng: &mut R,
) -> Vec<PersonId> {
    let q_sum = ctx.quanta_sum(params);
    if q_sum <= 0.0 {
        return Vec::new();
    }
    ctx.attendees
        .iter()
        .filter(|a| a.status == SessionStatus::Susceptible)
        .filter(|a| rng.random::<f64>() < ctx.risk_for(a.mask, q_sum, params))
        .map(|a| a.person)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamKey;
    use proptest::prelude::*;

    fn attendee(i: u32, status: SessionStatus, mask: MaskType) -> SessionAttendee {
        SessionAttendee { person: PersonId(i), status, mask }
    }

    #[test]
    fn room_volume_geometry() {
        // pi * 0.6096^2 * 3 evaluated independently.
        let one = std::f64::consts::PI * 0.6096_f64.powi(2) * 3.0;
        assert!((room_volume(1, 2.0, 3.0) - one).abs() < 1e-12);
        assert!((room_volume(1, 2.0, 3.0) - 3.5024).abs() < 1e-4);
        assert!((room_volume(30, 2.0, 3.0) - 105.07).abs() < 1e-2);
        assert!((room_volume(30, 4.0, 3.0) / room_volume(30, 2.0, 3.0) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn worked_probabilities() {
        assert_eq!(infection_probability_exact(0, 0.48, 20.0, 1.0, 500.0), 0.0);
        assert_eq!(infection_probability_linear(0, 0.48, 20.0, 1.0, 500.0), 0.0);
        let exact = infection_probability_exact(1, 0.48, 20.0, 1.0, 500.0);
        assert!((exact - 0.019017).abs() < 5e-7, "{exact}");
        let linear = infection_probability_linear(1, 0.48, 20.0, 1.0, 500.0);
        assert!((linear - 0.0192).abs() < 1e-12);
        let q = 4.0 * room_volume(30, 2.0, 3.0);
        assert!((q - 420.3).abs() < 0.05);
        let oracle = 1.0 - (-(0.48 * 20.0) / q).exp();
        let got = infection_probability_exact(1, 0.48, 20.0, 1.0, q);
        assert!((got - oracle).abs() < 1e-12);
        assert!((got - 0.022581).abs() < 5e-6, "{got}");
        assert_eq!(infection_probability_linear(5, 0.48, 20.0, 10.0, 400.0), 1.0);
    }

    #[test]
    fn mask_rates() {
        let m = MaskEfficiencies::default();
        assert_eq!(effective_rates(&[MaskType::None, MaskType::None], MaskType::None, 0.48, 20.0, &m), (0.48, 40.0));
        let (p, q) = effective_rates(&[MaskType::Cloth], MaskType::Cloth, 0.48, 20.0, &m);
        assert!((p - 0.2976).abs() < 1e-12 && (q - 12.4).abs() < 1e-12);
        let (p, q) = effective_rates(&[MaskType::N95], MaskType::N95, 0.48, 20.0, &m);
        assert!((p * q / (0.48 * 20.0) - 0.0025).abs() < 1e-12);
    }

    fn classroom(mask: MaskType) -> SessionContext {
        let mut people = vec![attendee(0, SessionStatus::Infectious, mask)];
        people.extend((1..30).map(|i| attendee(i, SessionStatus::Susceptible, mask)));
        SessionContext::new(people, 1.0, 2.0, &TransmissionParams::default())
    }

    #[test]
    fn session_risk_matches_closed_form() {
        let params = TransmissionParams::default();
        let ctx = classroom(MaskType::None);
        let q_sum = ctx.quanta_sum(&params);
        let risk = ctx.risk_for(MaskType::None, q_sum, &params);
        assert!((risk - 0.02284).abs() < 1e-5, "{risk}");
        let masked = classroom(MaskType::N95);
        let r95 = masked.risk_for(MaskType::N95, masked.quanta_sum(&params), &params);
        assert!((r95 - 5.71e-5).abs() < 1e-7, "{r95}");
    }

    #[test]
    fn no_infectors_no_infections() {
        let people = (0..30).map(|i| attendee(i, SessionStatus::Susceptible, MaskType::None)).collect();
        let ctx = SessionContext::new(people, 1.0, 2.0, &TransmissionParams::default());
        let mut rng = StreamKey::root(1).rng();
        assert!(class_session_infections(&ctx, &TransmissionParams::default(), &mut rng).is_empty());
    }

    #[test]
    fn monte_carlo_mean_matches_expected_infections() {
        let params = TransmissionParams::default();
        let ctx = classroom(MaskType::None);
        let per = 9.6 / (4.0 * room_volume(30, 2.0, 3.0));
        let expected = 29.0 * per;
        let n = 100_000;
        let root = StreamKey::root(77);
        let total: usize =
            (0..n).map(|i| class_session_infections(&ctx, &params, &mut root.child(i).rng()).len()).sum();
        let mean = total as f64 / n as f64;
        assert!((mean / expected - 1.0).abs() < 0.01, "mean {mean} expected {expected}");
        assert!((expected - 0.662).abs() < 1e-3);
    }

    #[test]
    fn larger_radius_strictly_lowers_risk() {
        let params = TransmissionParams::default();
        let mut last = f64::INFINITY;
        for r in [2.0, 3.0, 4.0, 5.0, 6.0] {
            let mut people = vec![attendee(0, SessionStatus::Infectious, MaskType::None)];
            people.extend((1..20).map(|i| attendee(i, SessionStatus::Susceptible, MaskType::None)));
            let ctx = SessionContext::new(people, 1.0, r, &params);
            let risk = ctx.risk_for(MaskType::None, ctx.quanta_sum(&params), &params);
            assert!(risk < last);
            last = risk;
        }
    }

    #[test]
    fn session_order_does_not_change_draws() {
        // Each session owns its stream, so evaluating B before A changes nothing.
        let params = TransmissionParams::default();
        let a = classroom(MaskType::None);
        let b = classroom(MaskType::Cloth);
        let key = StreamKey::root(5);
        let ra = class_session_infections(&a, &params, &mut key.child(1).rng());
        let rb = class_session_infections(&b, &params, &mut key.child(2).rng());
        let rb2 = class_session_infections(&b, &params, &mut key.child(2).rng());
        let ra2 = class_session_infections(&a, &params, &mut key.child(1).rng());
        assert_eq!((ra, rb), (ra2, rb2));
    }

    proptest! {
        #[test]
        fn probabilities_bounded_and_linear_dominates(
            i in 0u32..50, p in 0.0f64..2.0, q in 0.0f64..200.0, t in 0.0f64..10.0, vent in 0.1f64..5000.0,
        ) {
            let e = infection_probability_exact(i, p, q, t, vent);
            let l = infection_probability_linear(i, p, q, t, vent);
            prop_assert!((0.0..=1.0).contains(&e));
            prop_assert!((0.0..=1.0).contains(&l));
            prop_assert!(l >= e);
        }

        #[test]
        fn monotone_in_inputs(i in 1u32..20, p in 0.1f64..1.0, q in 1.0f64..50.0, t in 0.1f64..3.0, vent in 50.0f64..2000.0) {
            let base = infection_probability_linear(i, p, q, t, vent);
            prop_assert!(infection_probability_linear(i + 1, p, q, t, vent) >= base);
            prop_assert!(infection_probability_linear(i, p * 1.1, q, t, vent) >= base);
            prop_assert!(infection_probability_linear(i, p, q * 1.1, t, vent) >= base);
            prop_assert!(infection_probability_linear(i, p, q, t * 1.1, vent) >= base);
            prop_assert!(infection_probability_linear(i, p, q, t, vent * 1.1) <= base);
            let eb = infection_probability_exact(i, p, q, t, vent);
            prop_assert!(infection_probability_exact(i, p, q, t, vent * 1.1) <= eb);
            prop_assert!(infection_probability_exact(i + 1, p, q, t, vent) >= eb);
        }

        #[test]
        fn mask_efficiency_never_raises_risk(e1 in 0.0f64..1.0, e2 in 0.0f64..1.0) {
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            let weak = MaskEfficiencies { cloth: lo, medical: lo, n95: lo };
            let strong = MaskEfficiencies { cloth: hi, medical: hi, n95: hi };
            let (pw, qw) = effective_rates(&[MaskType::Cloth], MaskType::Cloth, 0.48, 20.0, &weak);
            let (ps, qs) = effective_rates(&[MaskType::Cloth], MaskType::Cloth, 0.48, 20.0, &strong);
            prop_assert!(ps * qs <= pw * qw + 1e-15);
        }
    }
}
