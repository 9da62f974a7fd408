#![allow(dead_code)]

use conserve::combinators::RestartSpec;
use conserve::reductions::{arbitrary_to_uniform, biased_to_uniform, uniform_to_rational, uniform_to_uniform};
use conserve::Dist;

pub struct Case {
    pub name: String,
    pub spec: RestartSpec,
}

fn case(name: String, spec: conserve::Result<RestartSpec>) -> Case {
    Case {
        spec: spec.unwrap_or_else(|e| panic!("{name}: {e}")),
        name,
    }
}

pub fn dist(pairs: &[(u64, u64)]) -> Dist {
    Dist::from_ratios(pairs).unwrap()
}

type Pairs = &'static [(u64, u64)];

/// Finite constructor instances with alphabet sizes in {2, 3, 4, 10} and
/// block lengths up to 4.
pub fn suite() -> Vec<Case> {
    let mut cases = Vec::new();
    for (d, c, ks) in [
        (2, 3, 2..=4),
        (3, 2, 1..=4),
        (4, 10, 2..=3),
        (10, 2, 1..=3),
        (10, 4, 1..=2),
        (2, 10, 4..=4),
    ] {
        for k in ks {
            cases.push(case(format!("uniform d={d} c={c} k={k}"), uniform_to_uniform(d, c, k)));
        }
    }
    let rational: [(usize, &[u64], usize); 7] = [
        (2, &[1, 1], 4),
        (4, &[1, 3], 4),
        (4, &[1, 1, 2], 3),
        (10, &[3, 7], 3),
        (10, &[1, 9], 2),
        (10, &[1, 2, 3, 4], 2),
        (4, &[2, 2], 2),
    ];
    for (d, a, kmax) in rational {
        for k in 1..=kmax {
            cases.push(case(
                format!("rational d={d} a={a:?} k={k}"),
                uniform_to_rational(d, a, k),
            ));
        }
    }
    // each range starts where some type class has at least c words
    let sources: [(Pairs, usize, usize); 5] = [
        (&[(1, 3), (2, 3)], 2, 2),
        (&[(1, 4), (3, 4)], 2, 2),
        (&[(1, 2), (1, 4), (1, 4)], 3, 3),
        (&[(1, 6), (1, 3), (1, 2)], 4, 3),
        (&[(1, 10), (9, 10)], 4, 4),
    ];
    for (source, c, kmin) in sources {
        for k in kmin..=4 {
            cases.push(case(
                format!("arbitrary {source:?} c={c} k={k}"),
                arbitrary_to_uniform(&dist(source), c, k),
            ));
        }
    }
    for (r, kmin) in [(3u64, 2usize), (4, 3), (5, 4)] {
        for k in kmin..=4 {
            cases.push(case(format!("biased r={r} k={k}"), biased_to_uniform(r, k)));
        }
    }
    cases
}
