use super::{BipartiteNetwork, ClassId, ClassSection, DegreeSequence, NetError, Person, PersonId};
use crate::rng::SimRng;
use rand::{Rng, SeedableRng};
use std::collections::HashSet;

/// Consecutive duplicate draws tolerated before the matching restarts.
pub const MAX_CONSECUTIVE_REJECTIONS: u32 = 100;
/// Restarts tolerated before the instance is declared non-simplifiable.
pub const MAX_RESTARTS: u32 = 10;

/// Makes the two degree sequences sum to the same total.
///
/// The people side is never altered. Surplus location-side stubs (class
/// capacity beyond demand) are removed one at a time from uniformly chosen
/// positive entries, which is a minimal L1 edit. A location side smaller
/// than the people-side demand cannot be fixed without exceeding capacity
/// and is reported as infeasible.
pub fn balance_degree_sequences<R: Rng + ?Sized>(
    people: &DegreeSequence,
    locations: &DegreeSequence,
    rng: &mut R,
) -> Result<(DegreeSequence, DegreeSequence), NetError> {
    let demand = people.total();
    let supply = locations.total();
    if demand == 0 {
        return Err(NetError::Infeasible("people side has no positive degree".into()));
    }
    if supply == 0 {
        return Err(NetError::Infeasible("location side has no positive degree".into()));
    }
    if supply < demand {
        return Err(NetError::Infeasible(format!("location capacity {supply} is below people-side demand {demand}")));
    }
    let mut w = locations.0.clone();
    let mut positive: Vec<usize> = (0..w.len()).filter(|&j| w[j] > 0).collect();
    let mut surplus = supply - demand;
    while surplus > 0 {
        let k = rng.random_range(0..positive.len());
        let j = positive[k];
        w[j] -= 1;
        if w[j] == 0 {
            positive.swap_remove(k);
        }
        surplus -= 1;
    }
    Ok((people.clone(), DegreeSequence(w)))
}

/// Pairs half-edges uniformly at random, rejecting pairings that would
/// duplicate an existing edge.
///
/// Returns `(person index, location index)` pairs in the order they were
/// formed. Realized degrees equal the prescribed ones exactly.
pub fn configuration_edges<R: Rng + ?Sized>(
    people: &DegreeSequence,
    locations: &DegreeSequence,
    rng: &mut R,
) -> Result<Vec<(u32, u32)>, NetError> {
    let (np, nl) = (people.total(), locations.total());
    if np != nl {
        return Err(NetError::Unbalanced { people: np, locations: nl });
    }
    for _ in 0..MAX_RESTARTS {
        let mut attempt = SimRng::seed_from_u64(rng.random());
        if let Some(edges) = try_match(people, locations, &mut attempt) {
            return Ok(edges);
        }
    }
    Err(NetError::NonSimplifiable { restarts: MAX_RESTARTS })
}

fn stubs(seq: &DegreeSequence) -> Vec<u32> {
    seq.0.iter().enumerate().flat_map(|(i, &d)| std::iter::repeat_n(i as u32, d as usize)).collect()
}

fn try_match(people: &DegreeSequence, locations: &DegreeSequence, rng: &mut SimRng) -> Option<Vec<(u32, u32)>> {
    let mut left = stubs(people);
    let mut right = stubs(locations);
    let mut seen: HashSet<u64> = HashSet::with_capacity(left.len());
    let mut edges = Vec::with_capacity(left.len());
    let mut rejections = 0;
    while !left.is_empty() {
        let i = rng.random_range(0..left.len());
        let j = rng.random_range(0..right.len());
        let (p, l) = (left[i], right[j]);
        if !seen.insert((u64::from(p) << 32) | u64::from(l)) {
            rejections += 1;
            if rejections >= MAX_CONSECUTIVE_REJECTIONS {
                return None;
            }
            continue;
        }
        rejections = 0;
        edges.push((p, l));
        left.swap_remove(i);
        right.swap_remove(j);
    }
    Some(edges)
}

/// Configuration-model network over the given people and classes.
pub fn generate_configuration<R: Rng + ?Sized>(
    people: Vec<Person>,
    classes: Vec<ClassSection>,
    d: &DegreeSequence,
    w: &DegreeSequence,
    rng: &mut R,
) -> Result<BipartiteNetwork, NetError> {
    if d.len() != people.len() || w.len() != classes.len() {
        return Err(NetError::InvalidParams(format!(
            "degree sequence lengths ({}, {}) do not match node counts ({}, {})",
            d.len(),
            w.len(),
            people.len(),
            classes.len()
        )));
    }
    let edges = configuration_edges(d, w, rng)?.into_iter().map(|(p, l)| (PersonId(p), ClassId(l))).collect();
    BipartiteNetwork::new(people, classes, edges)
}
