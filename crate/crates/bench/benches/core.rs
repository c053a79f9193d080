use btds_core::fintop::enumerate_topologies;
use btds_core::homotopy::standard_interval;
use btds_core::homotopy::{search_homotopy, SearchMode, SearchProblem, DEFAULT_SEARCH_BUDGET};
use btds_core::selection::{context_library, decide_h_property};
use btds_core::{BitopSpace, FiniteTopology, HProperty, PointMap, SelectionOptions};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn topologies(c: &mut Criterion) {
    c.bench_function("enumerate topologies n=4", |b| {
        b.iter(|| enumerate_topologies(black_box(4), 16).unwrap().count())
    });
}

fn selection(c: &mut Criterion) {
    let y = BitopSpace::new(FiniteTopology::discrete(3), FiniteTopology::indiscrete(3)).unwrap();
    let lib = context_library(&y).unwrap();
    let opts = SelectionOptions::default();
    c.bench_function("decide H properties, 3 points", |b| {
        b.iter(|| {
            for ctx in &lib {
                for p in HProperty::ALL {
                    black_box(decide_h_property(&ctx.h, p, &opts).unwrap());
                }
            }
        })
    });
}

fn homotopy(c: &mut Criterion) {
    let x = BitopSpace::new(FiniteTopology::discrete(2), FiniteTopology::indiscrete(2)).unwrap();
    let y = x.clone();
    let problem = SearchProblem {
        x,
        y,
        interval: standard_interval(1).unwrap(),
        f: PointMap::new(2, vec![0, 0]).unwrap(),
        g: PointMap::new(2, vec![0, 0]).unwrap(),
        bridge: PointMap::new(2, vec![0, 1]).unwrap(),
        mode: SearchMode::Btds,
        node_budget: DEFAULT_SEARCH_BUDGET,
    };
    c.bench_function("homotopy search, level 1", |b| {
        b.iter(|| search_homotopy(black_box(&problem)).unwrap())
    });
}

criterion_group!(benches, topologies, selection, homotopy);
criterion_main!(benches);
