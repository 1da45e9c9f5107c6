//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance is pinned in the assertions below; a failure panics with
//! the offending values.

use std::time::Instant;

use corrkit::classical::{self, BoundsMode, ScenarioKind};
use corrkit::decomp;
use corrkit::measures;
use corrkit::partitions::{self, PartitionSpec};
use corrkit::randgen;
use corrkit::state::{DensityMatrix, ModeStructure};
use corrkit::{bloch, io};

fn structure(dims: &[usize]) -> ModeStructure {
    ModeStructure::new(dims).unwrap()
}

fn pass(number: u32, label: &str) {
    println!("acceptance criterion {number:02} ({label}): PASS");
}

/// The published normalization-factor table: (dims, numerator, denominator).
const NORM_TABLE: &[(&[usize], u64, u64)] = &[
    (&[2, 2], 3, 4),
    (&[2, 3], 3, 4),
    (&[2, 4], 3, 4),
    (&[2, 2, 2], 7, 8),
    (&[3, 3], 8, 9),
    (&[2, 5], 3, 4),
    (&[2, 6], 3, 4),
    (&[3, 4], 8, 9),
    (&[2, 2, 3], 29, 32),
    (&[2, 7], 3, 4),
    (&[3, 5], 8, 9),
    (&[2, 8], 3, 4),
    (&[4, 4], 15, 16),
    (&[2, 2, 4], 15, 16),
    (&[2, 2, 2, 2], 15, 16),
    (&[2, 9], 3, 4),
    (&[3, 6], 8, 9),
    (&[2, 3, 3], 17, 18),
    (&[2, 10], 3, 4),
    (&[4, 5], 15, 16),
    (&[2, 2, 5], 15, 16),
    (&[3, 7], 8, 9),
    (&[2, 11], 3, 4),
    (&[2, 12], 3, 4),
    (&[3, 8], 8, 9),
    (&[4, 6], 15, 16),
    (&[2, 2, 6], 15, 16),
    (&[2, 3, 4], 103, 108),
    (&[2, 2, 2, 3], 23, 24),
    (&[5, 5], 24, 25),
    (&[2, 13], 3, 4),
    (&[3, 9], 8, 9),
    (&[3, 3, 3], 26, 27),
    (&[2, 14], 3, 4),
    (&[4, 7], 15, 16),
    (&[2, 2, 7], 15, 16),
];

#[test]
fn criterion_01_normalization_table() {
    let start = Instant::now();
    for &(dims, num, den) in NORM_TABLE {
        let s = structure(dims);
        let got = measures::correlance_norm(&s).unwrap();
        let want = num as f64 / den as f64;
        assert!(
            (got - want).abs() <= 1e-12,
            "{s}: got {got}, want {num}/{den}"
        );
        let (fn_num, fn_den) = measures::correlance_norm_fraction(&s).unwrap();
        assert_eq!(
            (fn_num, fn_den),
            (num as u128, den as u128),
            "{s}: exact fraction mismatch"
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "table took {elapsed:?}, budget 1 s"
    );
    pass(1, "normalization table");
}

#[test]
fn criterion_02_normalization_route_agreement() {
    let mut checked = 0;
    for s in randgen::structures_up_to(36) {
        let (_, _, eq13) = measures::correlance_norm_from_purities(&s).unwrap();
        let k57 = measures::correlance_norm_largest_mode(&s).unwrap();
        assert!(
            (eq13 - k57).abs() <= 1e-12,
            "{s}: closed form {eq13} vs largest-mode shortcut {k57}"
        );
        if s.largest_mode_count() >= 2 {
            let multimax = measures::correlance_norm_multimax(&s).unwrap();
            assert!(
                (eq13 - multimax).abs() <= 1e-12,
                "{s}: closed form {eq13} vs multi-largest value {multimax}"
            );
        } else {
            assert!(measures::correlance_norm_multimax(&s).is_err());
        }
        checked += 1;
    }
    assert!(checked >= 30, "only {checked} structures enumerated");
    pass(2, "normalization route agreement to n = 36");
}

#[test]
fn criterion_03_diagonal_normalization() {
    // closed form against the independent route: the raw correlance of the
    // two-level extremal diagonal state in an N-qubit structure
    for n_modes in 2..=6usize {
        let want = 0.5 - 0.5f64.powi(n_modes as i32);
        assert!((measures::diag_correlance_norm(n_modes) - want).abs() <= 1e-15);
        let dims = vec![2usize; n_modes];
        let s = structure(&dims);
        let n = s.total_dim();
        let mut probs = vec![0.0; n];
        probs[0] = 0.5;
        probs[n - 1] = 0.5;
        let dmax = DensityMatrix::diagonal(s, &probs).unwrap();
        let raw = measures::raw_correlance(&dmax).unwrap();
        assert!(
            (raw - want).abs() <= 1e-12,
            "N={n_modes}: raw correlance of the extremal diagonal state"
        );
    }
    // the extremal diagonal state normalizes to exactly 1 in mixed structures
    for dims in [
        vec![2usize, 2],
        vec![2, 3],
        vec![3, 3],
        vec![2, 2, 2],
        vec![2, 2, 3],
        vec![2, 3, 4],
    ] {
        let s = structure(&dims);
        let n = s.total_dim();
        let mut probs = vec![0.0; n];
        probs[0] = 0.5;
        probs[n - 1] = 0.5;
        let dmax = DensityMatrix::diagonal(s.clone(), &probs).unwrap();
        let cd = measures::diag_correlance(&dmax).unwrap();
        assert!((cd - 1.0).abs() <= 1e-12, "{s}: diag correlance {cd}");
    }
    pass(3, "diagonal normalization");
}

#[test]
fn criterion_04_maximal_states() {
    let cases: Vec<(&str, DensityMatrix)> = vec![
        ("bell 2x2", randgen::bell_phi_plus()),
        ("ghz 2x2x2", randgen::ghz(3).unwrap()),
        ("ghz 2x2x2x2", randgen::ghz(4).unwrap()),
    ];
    for (name, rho) in cases {
        let c = measures::correlance(&rho).unwrap();
        let d = measures::discordance(&rho).unwrap();
        let theta = measures::strong_discordance(&rho).unwrap();
        for (label, v) in [("correlance", c), ("discordance", d), ("strong", theta)] {
            assert!((v - 1.0).abs() <= 1e-10, "{name}: {label} = {v}");
        }
    }
    pass(4, "maximal states");
}

#[test]
fn criterion_05_werner_sweep() {
    for k in 0..=10 {
        let a = k as f64 / 10.0;
        let w = randgen::werner(a).unwrap();
        let c = measures::correlance(&w).unwrap();
        assert!((c - a * a).abs() <= 1e-10, "a={a}: correlance {c}");
        let theta = measures::strong_discordance(&w).unwrap();
        let want = if a <= 1.0 / 3.0f64.sqrt() {
            0.0
        } else {
            1.5 * (a * a - 1.0 / 3.0)
        };
        assert!(
            (theta - want).abs() <= 1e-10,
            "a={a}: strong discordance {theta}, want {want}"
        );
    }
    pass(5, "werner sweep crossover");
}

#[test]
fn criterion_06_decomposition_identity() {
    let structures = randgen::structures_up_to(12);
    let per_structure = 10_000usize.div_ceil(structures.len());
    let mut count = 0;
    for (si, s) in structures.iter().enumerate() {
        for i in 0..per_structure {
            let seed = randgen::trial_seed(600 + si as u64, i as u64);
            let rho = if i % 2 == 0 {
                randgen::hs_mixed(s, seed)
            } else {
                randgen::random_diagonal(s, seed)
            };
            let c = measures::correlance(&rho).unwrap();
            let d = measures::discordance(&rho).unwrap();
            let dd = measures::diagonal_discordance(&rho).unwrap();
            let residual = (c - (d + dd)).abs();
            assert!(
                residual <= 1e-14,
                "{s} sample {i}: identity residual {residual:.3e}"
            );
            count += 1;
        }
    }
    assert!(count >= 10_000);
    pass(6, "measure decomposition identity");
}

#[test]
fn criterion_07_ensemble_normalization_bound() {
    let start = Instant::now();
    let bound = 1.0 + 1e-9;
    for (si, s) in randgen::structures_up_to(12).iter().enumerate() {
        for i in 0..1000u64 {
            let seed = randgen::trial_seed(700 + si as u64, i);
            let mixed = randgen::hs_mixed(s, seed);
            let c = measures::correlance(&mixed).unwrap();
            assert!(c <= bound, "{s} mixed sample {i}: correlance {c}");
            let diag = randgen::random_diagonal(s, seed);
            let cd = measures::diag_correlance(&diag).unwrap();
            assert!(cd <= bound, "{s} diagonal sample {i}: diag correlance {cd}");
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 300.0,
        "ensemble bound took {elapsed:?}, budget 5 min"
    );
    pass(7, "ensemble normalization bound");
}

#[test]
fn criterion_08_family_sweeps() {
    let s = structure(&[2, 2]);
    let samples = 10_000u64;
    let sweep = |family: u8| -> (f64, f64, f64) {
        let mut max_c = f64::NEG_INFINITY;
        let mut max_d = f64::NEG_INFINITY;
        let mut max_theta = f64::NEG_INFINITY;
        for i in 0..samples {
            let rho =
                randgen::family_state(family, &s, randgen::trial_seed(800 + family as u64, i))
                    .unwrap();
            max_c = max_c.max(measures::correlance(&rho).unwrap());
            max_d = max_d.max(measures::discordance(&rho).unwrap());
            max_theta = max_theta.max(measures::strong_discordance(&rho).unwrap());
        }
        (max_c, max_d, max_theta)
    };
    let results: Vec<(f64, f64, f64)> = (1..=6).map(sweep).collect();
    // product-form family has no correlation at all
    assert!(
        results[5].0 <= 1e-9,
        "family 6 max correlance {}",
        results[5].0
    );
    // separable families never exceed the diagonal threshold
    for f in 3..=6usize {
        assert!(
            results[f - 1].2 <= 1e-9,
            "family {f} max strong discordance {}",
            results[f - 1].2
        );
    }
    // separable-but-correlated families show discordance
    for f in 3..=5usize {
        assert!(
            results[f - 1].1 > 0.05,
            "family {f} max discordance {}",
            results[f - 1].1
        );
    }
    // entangled families span toward the maximum
    for f in 1..=2usize {
        assert!(
            results[f - 1].1 > 0.8,
            "family {f} max discordance {}",
            results[f - 1].1
        );
    }
    pass(8, "family sweeps");
}

#[test]
fn criterion_09_statance_fixtures() {
    let s = structure(&[2, 2]);
    // three computational members |1,1>, |1,2>, |2,1> under every 3-level
    // permutation and both admissible shapes: statance is always 4/3
    let members = [1usize, 2, 3];
    let perms: Vec<Vec<usize>> = vec![
        vec![0, 1, 2],
        vec![0, 2, 1],
        vec![1, 0, 2],
        vec![1, 2, 0],
        vec![2, 0, 1],
        vec![2, 1, 0],
    ];
    for shape in [vec![1usize, 3], vec![3, 1]] {
        for perm in &perms {
            let states: Vec<DensityMatrix> = perm
                .iter()
                .map(|&p| DensityMatrix::basis_projector(s.clone(), members[p]).unwrap())
                .collect();
            let d =
                decomp::Decomposition::new(s.clone(), shape.clone(), vec![1.0 / 3.0; 3], states)
                    .unwrap();
            let statance = decomp::unoptimized_statance(&d);
            assert!(
                (statance - 4.0 / 3.0).abs() <= 1e-12,
                "shape {shape:?} perm {perm:?}: statance {statance}"
            );
        }
    }

    // mode-independent members: statance 0
    let s2 = structure(&[2]);
    let a: Vec<DensityMatrix> = (0..2).map(|i| randgen::haar_pure(&s2, 900 + i)).collect();
    let b: Vec<DensityMatrix> = (0..2).map(|i| randgen::haar_pure(&s2, 910 + i)).collect();
    let mi = decomp::Decomposition::new(
        s.clone(),
        vec![2, 2],
        vec![0.37, 0.23, 0.25, 0.15],
        vec![
            a[0].kron(&b[0]),
            a[0].kron(&b[1]),
            a[1].kron(&b[0]),
            a[1].kron(&b[1]),
        ],
    )
    .unwrap();
    assert!(decomp::unoptimized_statance(&mi) <= 1e-12);

    // mode-independent probabilities: probablance 0
    let t = decomp::Decomposition::new(
        s.clone(),
        vec![2, 2],
        vec![0.2 * 0.3, 0.2 * 0.7, 0.8 * 0.3, 0.8 * 0.7],
        (1..=4)
            .map(|i| DensityMatrix::basis_projector(s.clone(), i).unwrap())
            .collect(),
    )
    .unwrap();
    assert!(decomp::unoptimized_probablance(&t) <= 1e-12);

    // Fourier unitaries flatten the probabilities on every random state
    for seed in 0..20u64 {
        let rho = randgen::hs_mixed(&s, 920 + seed);
        let rank = decomp::spectral_decomposition(&rho).unwrap().len();
        let shape = if rank == 4 { vec![2, 2] } else { vec![1, rank] };
        let d =
            decomp::unitary_decomposition(&rho, &decomp::fourier_unitary(rank), &shape).unwrap();
        assert!(decomp::unoptimized_probablance(&d) <= 1e-12);
    }
    pass(9, "statance and probablance fixtures");
}

#[test]
fn criterion_10_strictly_classical_rules() {
    let s = structure(&[2, 2]);
    // exhaustive probablance vanishes for every rank-2 and rank-3 two-qubit
    // diagonal state
    for seed in 0..100u64 {
        let full = randgen::random_diagonal(&s, 1000 + seed);
        let probs = full.diagonal_probs();
        let rank = 2 + (seed % 2) as usize;
        // deterministic support choice varying with the seed
        let mut order: Vec<usize> = (0..4).collect();
        order.rotate_left((seed % 4) as usize);
        let support: Vec<usize> = order.into_iter().take(rank).collect();
        let mut trunc = vec![0.0; 4];
        let total: f64 = support.iter().map(|&i| probs[i]).sum();
        for &i in &support {
            trunc[i] = probs[i] / total;
        }
        let rho = DensityMatrix::diagonal(s.clone(), &trunc).unwrap();
        let p = decomp::classical_probablance(&rho).unwrap();
        assert!(
            p <= 1e-20,
            "seed {seed} support {support:?}: probablance {p}"
        );
    }

    // rank-2 statance dichotomy
    let common = DensityMatrix::diagonal(s.clone(), &[0.7, 0.3, 0.0, 0.0]).unwrap();
    let anti = DensityMatrix::diagonal(s, &[0.7, 0.0, 0.0, 0.3]).unwrap();
    let common_statance = decomp::classical_statance(&common).unwrap().value;
    let anti_statance = decomp::classical_statance(&anti).unwrap().value;
    assert!(common_statance <= 1e-12, "common factor: {common_statance}");
    assert!(anti_statance > 1e-3, "anti-diagonal: {anti_statance}");
    pass(10, "strictly classical statance and probablance rules");
}

#[test]
fn criterion_11_partition_combinatorics() {
    for n in 2..=7usize {
        let modes: Vec<usize> = (1..=n).collect();
        for k in 1..=n {
            let parts = partitions::enumerate_partitions(&modes, k).unwrap();
            assert_eq!(
                parts.len() as u64,
                partitions::stirling2(n, k).unwrap(),
                "count mismatch at N={n}, k={k}"
            );
        }
    }

    let array = partitions::multicorrelance_array(&randgen::ghz(4).unwrap()).unwrap();
    assert_eq!(array.scalar_count(), 36);

    // the published tripartite bipartition list, in canonical order
    let spec = |blocks: &[&[usize]]| {
        PartitionSpec::new(&blocks.iter().map(|b| b.to_vec()).collect::<Vec<_>>()).unwrap()
    };
    let got = partitions::enumerate_partitions(&[1, 2, 3], 2).unwrap();
    let mut want = vec![
        spec(&[&[1], &[2, 3]]),
        spec(&[&[2], &[1, 3]]),
        spec(&[&[3], &[1, 2]]),
    ];
    want.sort();
    assert_eq!(got, want);

    // the published 4-mode lists for k = 2 and k = 3
    let got = partitions::enumerate_partitions(&[1, 2, 3, 4], 2).unwrap();
    let mut want = vec![
        spec(&[&[1], &[2, 3, 4]]),
        spec(&[&[2], &[1, 3, 4]]),
        spec(&[&[3], &[1, 2, 4]]),
        spec(&[&[4], &[1, 2, 3]]),
        spec(&[&[1, 2], &[3, 4]]),
        spec(&[&[1, 3], &[2, 4]]),
        spec(&[&[1, 4], &[2, 3]]),
    ];
    want.sort();
    assert_eq!(got, want);

    let got = partitions::enumerate_partitions(&[1, 2, 3, 4], 3).unwrap();
    let mut want = vec![
        spec(&[&[1], &[2], &[3, 4]]),
        spec(&[&[1], &[3], &[2, 4]]),
        spec(&[&[1], &[4], &[2, 3]]),
        spec(&[&[2], &[3], &[1, 4]]),
        spec(&[&[2], &[4], &[1, 3]]),
        spec(&[&[3], &[4], &[1, 2]]),
    ];
    want.sort();
    assert_eq!(got, want);
    pass(11, "partition combinatorics");
}

#[test]
fn criterion_12_ghz_versus_bell_product() {
    let g = randgen::ghz(4).unwrap();
    let bp = randgen::bell_product();
    let modes: Vec<usize> = vec![1, 2, 3, 4];
    let parts = partitions::enumerate_partitions(&modes, 3).unwrap();
    let mut plain_g = 0.0;
    let mut plain_bp = 0.0;
    let mut sqrt_g = 0.0;
    let mut sqrt_bp = 0.0;
    for p in &parts {
        let cg = partitions::partitional_correlance(&g, &modes, p).unwrap();
        let cb = partitions::partitional_correlance(&bp, &modes, p).unwrap();
        plain_g += cg;
        plain_bp += cb;
        sqrt_g += cg.sqrt();
        sqrt_bp += cb.sqrt();
    }
    assert!(
        (plain_g - plain_bp).abs() <= 1e-9,
        "plain sums {plain_g} vs {plain_bp}"
    );
    assert!(
        (sqrt_g - sqrt_bp).abs() >= 1e-3,
        "root sums {sqrt_g} vs {sqrt_bp} too close"
    );
    pass(12, "ghz vs bell-product distinction");
}

#[test]
fn criterion_13_bloch_identities() {
    let structures: Vec<ModeStructure> = [
        vec![2usize, 2],
        vec![2, 3],
        vec![3, 3],
        vec![2, 2, 2],
        vec![2, 3, 4],
    ]
    .iter()
    .map(|d| structure(d))
    .collect();
    for (si, s) in structures.iter().enumerate() {
        let n = s.total_dim() as f64;
        for i in 0..200u64 {
            let rho = randgen::hs_mixed(s, randgen::trial_seed(1300 + si as u64, i));
            let gamma = bloch::bloch_of(&rho).unwrap();
            // Bloch purity vs matrix purity
            let want = (n * rho.purity() - 1.0) / (n - 1.0);
            assert!(
                (gamma.norm_sq() - want).abs() <= 1e-9,
                "{s} sample {i}: Bloch purity"
            );
            // overlap identity against a second state
            let other = randgen::hs_mixed(s, randgen::trial_seed(1400 + si as u64, i));
            let gother = bloch::bloch_of(&other).unwrap();
            let overlap: f64 = rho
                .matrix()
                .iter()
                .zip(other.matrix().iter())
                .map(|(a, b)| (a.conj() * b).re)
                .sum();
            let predicted = (1.0 + (n - 1.0) * gamma.dot(&gother)) / n;
            assert!(
                (overlap - predicted).abs() <= 1e-9,
                "{s} sample {i}: overlap identity"
            );
            // purity decomposition into liaison and single-mode parts
            let lambda = bloch::liaison_vector(&gamma);
            let singles: f64 = (1..=s.mode_count())
                .map(|m| bloch::correlation_vector(&gamma, &[m]).unwrap().norm_sq())
                .sum();
            assert!(
                (gamma.norm_sq() - (lambda.norm_sq() + singles)).abs() <= 1e-9,
                "{s} sample {i}: purity decomposition"
            );
            // round trip
            let back = bloch::state_of(&gamma).unwrap();
            let err: f64 = (rho.matrix() - back.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(err <= 1e-9, "{s} sample {i}: round-trip error {err:.3e}");
        }
    }
    // liaison vector of maximally entangled reduction products vanishes
    for rho in [randgen::bell_phi_plus(), randgen::ghz(3).unwrap()] {
        let sigma = rho.reduction_product();
        let gamma = bloch::bloch_of(&sigma).unwrap();
        assert!(bloch::liaison_vector(&gamma).norm_sq() <= 1e-18);
    }
    pass(13, "bloch identities");
}

#[test]
fn criterion_14_classical_data_pipeline() {
    let seed = 1u64;
    let run = |kind: ScenarioKind| -> (f64, f64) {
        let data = classical::scenario(kind, 200, 0.05, seed).unwrap();
        let plan = classical::make_plan(&data, &[4, 4], BoundsMode::DataExtremes).unwrap();
        let rho = classical::build_density(&data, &plan).unwrap();
        let cd = measures::diag_correlance(&rho).unwrap();
        let r = classical::pearson(&data, 1, 2).unwrap().abs();
        (r, cd)
    };
    let (r, cd) = run(ScenarioKind::A);
    assert!(r <= 0.1 && cd <= 0.1, "scenario a: |r_P|={r}, C_D={cd}");
    let (r, cd) = run(ScenarioKind::B);
    assert!(r <= 0.1 && cd >= 0.15, "scenario b: |r_P|={r}, C_D={cd}");
    let (r, cd) = run(ScenarioKind::C);
    assert!(
        r >= 0.95 && (0.45..=0.70).contains(&cd),
        "scenario c: |r_P|={r}, C_D={cd}"
    );
    let (r, cd) = run(ScenarioKind::D);
    assert!(r >= 0.97 && cd >= 0.9, "scenario d: |r_P|={r}, C_D={cd}");

    // the same pipeline through the state-file layer is lossless
    let data = classical::scenario(ScenarioKind::D, 200, 0.05, seed).unwrap();
    let plan = classical::make_plan(&data, &[4, 4], BoundsMode::DataExtremes).unwrap();
    let rho = classical::build_density(&data, &plan).unwrap();
    let back = io::state_from_json(&io::state_to_json(&rho)).unwrap();
    assert_eq!(back.diagonal_probs(), rho.diagonal_probs());
    pass(14, "classical data pipeline");
}
