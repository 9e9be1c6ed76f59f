//! Measure per-leaf redundancy: exactly where universes are enumerable,
//! by sampling where they are not, and watch it shrink as trees grow.

use std::io;

use treegram::{
    redundancy_exact, redundancy_monte_carlo, write_bench_csv, BenchModel, DepthCentricModel,
    LeafCentricModel,
};

fn main() {
    // Small universes allow the exact sum over every tree.
    let quarter = LeafCentricModel::uniform_split(1, 4).unwrap();
    for n in [2u64, 4, 6, 8] {
        let exact = redundancy_exact(&quarter, n).unwrap();
        println!("exact redundancy of uniform-split(1/4) at n={n}: {exact:.6} bits/leaf");
    }
    println!();

    // The sampled estimate agrees with the exact value where both exist.
    let model = BenchModel::Leaf(quarter);
    let records = redundancy_monte_carlo(&model, &[8], 2000, 17).unwrap();
    println!(
        "sampled at n=8: {:.6} bits/leaf over {} trees",
        records[0].redundancy, records[0].samples
    );
    println!();

    // Larger sizes: redundancy and the representation ratio both fall
    // between the endpoints. Not between every adjacent pair: bisection
    // per-leaf statistics oscillate with log2(n), and n=10^4 sits higher
    // than n=10^3. Reruns with the same seed are byte-identical.
    let bisection = BenchModel::Leaf(LeafCentricModel::Bisection);
    let mut records = redundancy_monte_carlo(&bisection, &[100, 1000, 10000], 100, 7).unwrap();
    assert!(records[2].redundancy < records[0].redundancy);
    assert!(records[2].mean_repr_ratio < records[0].mean_repr_ratio);

    let gap = BenchModel::Depth(DepthCentricModel::gap(1).unwrap());
    let depth_records = redundancy_monte_carlo(&gap, &[5, 10, 20], 100, 7).unwrap();
    for pair in depth_records.windows(2) {
        assert!(pair[1].mean_repr_ratio < pair[0].mean_repr_ratio);
    }
    records.extend(depth_records);

    write_bench_csv(&mut io::stdout().lock(), &records).unwrap();
}
