//! Seeded topology generation: same (scenario, seed) in, same network
//! out, byte for byte.
//!
//! Run with: cargo run --example generate_topology

use cyberdef_sim::{canon, generate_topology, load_scenario};

fn main() {
    let scenario_path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/three-subnet.json");
    let scenario = load_scenario(scenario_path).expect("scenario loads");

    let topology = generate_topology(&scenario, scenario.seed).expect("valid config");
    println!(
        "{} subnets, {} hosts, critical host {}",
        topology.subnet_count(),
        topology.host_count(),
        topology.critical_host
    );
    for subnet in &topology.subnets {
        let hosts: Vec<String> = subnet
            .hosts
            .iter()
            .map(|h| {
                format!(
                    "{}({}{})",
                    h.id,
                    h.tier,
                    if h.confidential_data { ", confidential" } else { "" }
                )
            })
            .collect();
        println!("  {}: {}", subnet.id, hosts.join(", "));
    }
    let edges: Vec<String> = topology
        .reachability
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect();
    println!("reachability: {}", edges.join(", "));

    // Determinism check: regenerate and compare canonical bytes.
    let again = generate_topology(&scenario, scenario.seed).expect("valid config");
    let a = canon::to_canonical_string(&topology).unwrap();
    let b = canon::to_canonical_string(&again).unwrap();
    assert_eq!(a, b);
    println!("regenerated with the same seed: identical bytes ({} chars)", a.len());
}
