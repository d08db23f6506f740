//! Graph corpus shared by the integration tests.
#![allow(dead_code)]

use expander_minors::graph::{families, Graph};
use expander_minors::harness::{generate, GeneratorSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Named {
    pub name: String,
    pub graph: Graph,
}

fn named(name: impl Into<String>, graph: Graph) -> Named {
    Named {
        name: name.into(),
        graph,
    }
}

/// Named families and seeded random graphs on at most 12 vertices.
pub fn small_corpus() -> Vec<Named> {
    let mut out = Vec::new();
    for n in 1..=8 {
        out.push(named(format!("K{n}"), families::complete(n)));
    }
    for n in 3..=12 {
        out.push(named(format!("C{n}"), families::cycle(n)));
    }
    for n in 2..=12 {
        out.push(named(format!("P{n}"), families::path(n)));
    }
    for leaves in [3, 6, 11] {
        out.push(named(format!("star{leaves}"), families::star(leaves)));
    }
    out.push(named("petersen", families::petersen()));
    out.push(named("grid3x3", families::grid(3, 3)));
    out.push(named("grid3x4", families::grid(3, 4)));
    out.push(named("torus3x3", families::grid_torus(3)));
    out.push(named(
        "K4+K4",
        families::disjoint_union(&families::complete(4), &families::complete(4)),
    ));
    let k5k5 = families::disjoint_union(&families::complete(5), &families::complete(5));
    out.push(named(
        "K5-K5 bridged",
        families::with_edges(&k5k5, 10, &[(0, 5)]),
    ));
    let k6k4 = families::disjoint_union(&families::complete(6), &families::complete(4));
    out.push(named("K6+K4", k6k4));
    for seed in 0..40u64 {
        let n = 5 + (seed as usize % 8);
        let avg = (2.0 + (seed % 5) as f64).min(n as f64 - 2.0);
        out.push(named(
            format!("gnp({n},{avg},{seed})"),
            generate(&GeneratorSpec::gnp(n, avg, seed)).unwrap(),
        ));
    }
    for (n, d) in [
        (6, 3),
        (8, 3),
        (10, 3),
        (12, 3),
        (7, 4),
        (9, 4),
        (11, 4),
        (12, 5),
    ] {
        out.push(named(
            format!("regular({n},{d})"),
            generate(&GeneratorSpec::regular(n, d, 1)).unwrap(),
        ));
    }
    out
}

/// Mid-size generated graphs the constructions actually run on.
pub fn large_corpus() -> Vec<Named> {
    let specs = [
        GeneratorSpec::gnp(300, 12.0, 1),
        GeneratorSpec::gnp(1000, 30.0, 2),
        GeneratorSpec::gnp(2000, 60.0, 3),
        GeneratorSpec::gnp(600, 100.0, 2),
        GeneratorSpec::regular(1000, 8, 4),
        GeneratorSpec::regular(2000, 12, 4),
        GeneratorSpec::blobs(400, 2, 0.8, 5),
        GeneratorSpec::blobs(900, 3, 0.3, 6),
        GeneratorSpec::torus(20),
    ];
    specs
        .iter()
        .map(|s| {
            named(
                format!("{}({},{},{})", s.family, s.n, s.param, s.seed),
                generate(s).unwrap(),
            )
        })
        .collect()
}

/// `count` seeded random graphs from mixed families with at most `max_n`
/// vertices, orders spread log-uniformly from 20.
pub fn mixed_random(count: usize, max_n: usize, seed: u64) -> Vec<Named> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = (20f64 * ((max_n as f64 / 20.0).powf(rng.gen::<f64>()))).round() as usize;
            let s = rng.gen::<u64>();
            let spec = match i % 4 {
                0 => GeneratorSpec::gnp(n, rng.gen_range(3.0..30.0f64).min(n as f64 - 1.0), s),
                1 => {
                    let d = rng.gen_range(3..12usize).min(n - 1);
                    GeneratorSpec::regular(n + (n * d) % 2, d, s)
                }
                2 => {
                    let blobs = rng.gen_range(2..6usize);
                    GeneratorSpec::blobs(n.max(blobs * 4), blobs, rng.gen_range(0.2..0.9), s)
                }
                _ => {
                    let side = (n as f64).sqrt().round().max(3.0) as usize;
                    GeneratorSpec::torus(side)
                }
            };
            named(
                format!("{}({},{},{})", spec.family, spec.n, spec.param, spec.seed),
                generate(&spec).unwrap(),
            )
        })
        .collect()
}
