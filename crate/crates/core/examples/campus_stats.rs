//! Prints size and enrollment statistics of a synthetic campus.

use campus_core::net::{ClassId, PickCategory};
use campus_core::synthetic::{generate_synthetic_campus, seat_share_above, SyntheticCampusParams};
use std::time::Instant;

fn main() {
    let scale: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.043);
    let start = Instant::now();
    let params = SyntheticCampusParams { scale, ..Default::default() };
    let net = generate_synthetic_campus(&params, 2020).expect("campus").network;
    println!("generated in {:.2?}", start.elapsed());
    let mut counts = [0usize; 3];
    for &(p, c) in net.edges() {
        let person = net.person(p);
        if person.is_student() {
            counts[PickCategory::classify(person, net.class(c)) as usize] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    println!("students {} classes {} edges {}", net.student_count(), net.classes().len(), total);
    println!("categories {:?}", counts.map(|c| c as f64 / total as f64));
    let sizes: Vec<usize> = (0..net.classes().len()).map(|j| net.enrolled_students(ClassId(j as u32))).collect();
    println!("max class {} classes>100 {}", sizes.iter().max().unwrap(), sizes.iter().filter(|&&s| s > 100).count());
    for cap in [30, 60] {
        println!("seat share above {cap}: {:.3}", seat_share_above(&net, cap));
    }
}
