//! Seeded generators for benchmark and ensemble states.
//!
//! Every generator is a pure function of its explicit seed: the same seed
//! gives a bit-identical state on every platform. Independent trials should
//! use [`trial_seed`] to derive per-trial seeds from a base seed.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{CorrkitError, Result};
use crate::state::{mixed_radix_iter, CMatrix, DensityMatrix, ModeStructure};

/// Stream identifiers keep the different generator kinds statistically
/// independent even at the same seed.
mod stream {
    pub const HAAR: u64 = 1;
    pub const HS: u64 = 2;
    pub const DIAGONAL: u64 = 3;
    pub const FAMILY: u64 = 10;
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 step; mixes a base seed with a trial index into an independent
/// per-trial seed.
pub fn trial_seed(base: u64, trial: u64) -> u64 {
    let mut z = base ^ trial.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator parameters: a seed, a mode structure, and optional decomposition
/// sizes for the family generators. Identical configs produce bit-identical
/// states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub structure: ModeStructure,
    /// Flat decomposition size for the index-locked families; `None` draws it
    /// uniformly from `1..=n^2` per sample.
    pub decomposition_size: Option<usize>,
    /// Per-mode sizes for the mode-independent families; `None` draws each
    /// uniformly from `1..=n_m^2` per sample.
    pub mode_sizes: Option<Vec<usize>>,
}

impl GeneratorConfig {
    pub fn new(structure: ModeStructure, seed: u64) -> Self {
        Self {
            seed,
            structure,
            decomposition_size: None,
            mode_sizes: None,
        }
    }
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) / 2.0f64.sqrt()
}

fn haar_ket(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| gaussian_complex(rng)).collect();
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq > 1e-12 {
            return v;
        }
    }
}

fn projector(structure: &ModeStructure, ket: &[Complex64]) -> DensityMatrix {
    DensityMatrix::pure(structure.clone(), ket).expect("haar ket is nonzero")
}

fn haar_pure_from(structure: &ModeStructure, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let ket = haar_ket(structure.total_dim(), rng);
    projector(structure, &ket)
}

/// Haar-random pure state: the projector of a normalized complex-Gaussian
/// ket.
pub fn haar_pure(structure: &ModeStructure, seed: u64) -> DensityMatrix {
    haar_pure_from(structure, &mut rng_for(seed, stream::HAAR))
}

fn hs_mixed_from(structure: &ModeStructure, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let n = structure.total_dim();
    let g = DMatrix::from_fn(n, n, |_, _| gaussian_complex(rng));
    let gg = &g * g.adjoint();
    let mut tr = 0.0;
    for i in 0..n {
        tr += gg[(i, i)].re;
    }
    DensityMatrix::from_parts_unchecked(structure.clone(), gg / Complex64::new(tr, 0.0))
}

/// Hilbert-Schmidt random mixed state, `G G^dagger / tr(G G^dagger)` with
/// complex-Gaussian `G`.
pub fn hs_mixed(structure: &ModeStructure, seed: u64) -> DensityMatrix {
    hs_mixed_from(structure, &mut rng_for(seed, stream::HS))
}

fn dirichlet_flat(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    // exponential samples normalized: flat Dirichlet on the simplex
    let mut v: Vec<f64> = (0..k)
        .map(|_| {
            let u: f64 = rng.random();
            -(1.0 - u).ln()
        })
        .collect();
    let s: f64 = v.iter().sum();
    for x in &mut v {
        *x /= s;
    }
    v
}

fn random_diagonal_from(structure: &ModeStructure, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let probs = dirichlet_flat(structure.total_dim(), rng);
    DensityMatrix::diagonal(structure.clone(), &probs).expect("simplex point is a valid state")
}

/// Flat-Dirichlet random diagonal state.
pub fn random_diagonal(structure: &ModeStructure, seed: u64) -> DensityMatrix {
    random_diagonal_from(structure, &mut rng_for(seed, stream::DIAGONAL))
}

fn mix(states: &[DensityMatrix], probs: &[f64]) -> DensityMatrix {
    let n = states[0].total_dim();
    let mut m = CMatrix::zeros(n, n);
    for (p, s) in probs.iter().zip(states) {
        m += s.matrix() * Complex64::new(*p, 0.0);
    }
    DensityMatrix::from_parts_unchecked(states[0].structure().clone(), m)
}

/// Mode-independent probabilities over a shape: products of per-mode
/// simplex draws, indexed in register order.
fn mi_probs(shape: &[usize], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let per_mode: Vec<Vec<f64>> = shape.iter().map(|&d| dirichlet_flat(d, rng)).collect();
    let mut out = Vec::with_capacity(shape.iter().product());
    for idx in mixed_radix_iter(shape) {
        out.push(idx.iter().zip(&per_mode).map(|(&j, p)| p[j]).product());
    }
    out
}

fn draw_flat_size(
    structure: &ModeStructure,
    config: &GeneratorConfig,
    rng: &mut ChaCha8Rng,
) -> usize {
    match config.decomposition_size {
        Some(d) => d.max(1),
        None => {
            let n = structure.total_dim();
            rng.random_range(1..=n * n)
        }
    }
}

fn draw_mode_sizes(
    structure: &ModeStructure,
    config: &GeneratorConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    match &config.mode_sizes {
        Some(s) => s.clone(),
        None => structure
            .dims()
            .iter()
            .map(|&d| rng.random_range(1..=d * d))
            .collect(),
    }
}

/// Draws one state from the requested nonlocal-correlation family:
///
/// 1. general probabilities, general pure states;
/// 2. mode-independent probabilities, general pure states;
/// 3. general probabilities, pure product states (index-locked);
/// 4. mode-independent probabilities, pure product states (index-locked);
/// 5. general probabilities, mode-independent pure product states;
/// 6. mode-independent probabilities and states (exact product form).
pub fn family_state(family: u8, structure: &ModeStructure, seed: u64) -> Result<DensityMatrix> {
    family_state_with(family, &GeneratorConfig::new(structure.clone(), seed))
}

pub fn family_state_with(family: u8, config: &GeneratorConfig) -> Result<DensityMatrix> {
    let structure = &config.structure;
    if structure.mode_count() < 1 {
        return Err(CorrkitError::UnsupportedStructure {
            reason: "family states need at least one mode".into(),
        });
    }
    let mut rng = rng_for(config.seed, stream::FAMILY + family as u64);
    let single_modes: Vec<ModeStructure> = structure
        .dims()
        .iter()
        .map(|&d| ModeStructure::new(&[d]).expect("positive dim"))
        .collect();
    let product_pure = |rng: &mut ChaCha8Rng| -> DensityMatrix {
        let mut out: Option<DensityMatrix> = None;
        for sm in &single_modes {
            let s = haar_pure_from(sm, rng);
            out = Some(match out {
                None => s,
                Some(acc) => acc.kron(&s),
            });
        }
        out.expect("at least one mode")
    };
    match family {
        1 => {
            let d = draw_flat_size(structure, config, &mut rng);
            let probs = dirichlet_flat(d, &mut rng);
            let states: Vec<DensityMatrix> = (0..d)
                .map(|_| haar_pure_from(structure, &mut rng))
                .collect();
            Ok(mix(&states, &probs))
        }
        2 => {
            let shape = draw_mode_sizes(structure, config, &mut rng);
            let probs = mi_probs(&shape, &mut rng);
            let states: Vec<DensityMatrix> = (0..probs.len())
                .map(|_| haar_pure_from(structure, &mut rng))
                .collect();
            Ok(mix(&states, &probs))
        }
        3 => {
            let d = draw_flat_size(structure, config, &mut rng);
            let probs = dirichlet_flat(d, &mut rng);
            let states: Vec<DensityMatrix> = (0..d).map(|_| product_pure(&mut rng)).collect();
            Ok(mix(&states, &probs))
        }
        4 => {
            let shape = draw_mode_sizes(structure, config, &mut rng);
            let probs = mi_probs(&shape, &mut rng);
            let states: Vec<DensityMatrix> =
                (0..probs.len()).map(|_| product_pure(&mut rng)).collect();
            Ok(mix(&states, &probs))
        }
        5 => {
            let shape = draw_mode_sizes(structure, config, &mut rng);
            // per-mode pure-state lists; member (j_1,...,j_N) takes state j_m
            // in mode m
            let mode_states: Vec<Vec<DensityMatrix>> = single_modes
                .iter()
                .zip(&shape)
                .map(|(sm, &dm)| (0..dm).map(|_| haar_pure_from(sm, &mut rng)).collect())
                .collect();
            let d: usize = shape.iter().product();
            let probs = dirichlet_flat(d, &mut rng);
            let states: Vec<DensityMatrix> = mixed_radix_iter(&shape)
                .map(|idx| {
                    let mut out: Option<DensityMatrix> = None;
                    for (m, &jm) in idx.iter().enumerate() {
                        let s = mode_states[m][jm].clone();
                        out = Some(match out {
                            None => s,
                            Some(acc) => acc.kron(&s),
                        });
                    }
                    out.expect("at least one mode")
                })
                .collect();
            Ok(mix(&states, &probs))
        }
        6 => {
            // built as a tensor product of per-mode mixtures, so the result
            // is in product form exactly
            let shape = draw_mode_sizes(structure, config, &mut rng);
            let mut out: Option<DensityMatrix> = None;
            for (sm, &dm) in single_modes.iter().zip(&shape) {
                let probs = dirichlet_flat(dm, &mut rng);
                let states: Vec<DensityMatrix> =
                    (0..dm).map(|_| haar_pure_from(sm, &mut rng)).collect();
                let mode_state = mix(&states, &probs);
                out = Some(match out {
                    None => mode_state,
                    Some(acc) => acc.kron(&mode_state),
                });
            }
            Ok(out.expect("at least one mode"))
        }
        other => Err(CorrkitError::InvalidParameter {
            reason: format!("family must be 1..=6, got {other}"),
        }),
    }
}

fn two_qubit() -> ModeStructure {
    ModeStructure::new(&[2, 2]).expect("static structure")
}

/// |Phi+> = (|1,1> + |2,2>)/sqrt(2).
pub fn bell_phi_plus() -> DensityMatrix {
    let amp = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
    DensityMatrix::pure(two_qubit(), &[amp, Complex64::ZERO, Complex64::ZERO, amp])
        .expect("normalized ket")
}

/// |Psi-> = (|1,2> - |2,1>)/sqrt(2), the singlet.
pub fn singlet() -> DensityMatrix {
    let amp = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
    DensityMatrix::pure(two_qubit(), &[Complex64::ZERO, amp, -amp, Complex64::ZERO])
        .expect("normalized ket")
}

/// |Psi+> = (|1,2> + |2,1>)/sqrt(2).
pub fn psi_plus() -> DensityMatrix {
    let amp = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
    DensityMatrix::pure(two_qubit(), &[Complex64::ZERO, amp, amp, Complex64::ZERO])
        .expect("normalized ket")
}

/// Two-qubit Werner state `a |Psi-><Psi-| + (1-a) I/4`.
pub fn werner(a: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&a) {
        return Err(CorrkitError::InvalidParameter {
            reason: format!("werner parameter must lie in [0,1], got {a}"),
        });
    }
    let s = singlet();
    let mm = DensityMatrix::maximally_mixed(two_qubit());
    Ok(mix(&[s, mm], &[a, 1.0 - a]))
}

/// The benchmark mixture
/// `(1/3) [ (1-a) |1,1><1,1| + 2 |Psi+><Psi+| + a |2,2><2,2| ]`.
pub fn mixture40(a: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&a) {
        return Err(CorrkitError::InvalidParameter {
            reason: format!("mixture parameter must lie in [0,1], got {a}"),
        });
    }
    let p11 = DensityMatrix::basis_projector(two_qubit(), 1).expect("index in range");
    let p22 = DensityMatrix::basis_projector(two_qubit(), 4).expect("index in range");
    Ok(mix(
        &[p11, psi_plus(), p22],
        &[(1.0 - a) / 3.0, 2.0 / 3.0, a / 3.0],
    ))
}

/// N-qubit GHZ state `(|1...1> + |2...2>)/sqrt(2)`.
pub fn ghz(n_modes: usize) -> Result<DensityMatrix> {
    if n_modes < 2 {
        return Err(CorrkitError::UnsupportedStructure {
            reason: "GHZ needs at least two modes".into(),
        });
    }
    let dims = vec![2usize; n_modes];
    let structure = ModeStructure::new(&dims)?;
    let n = structure.total_dim();
    let amp = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
    let mut ket = vec![Complex64::ZERO; n];
    ket[0] = amp;
    ket[n - 1] = amp;
    DensityMatrix::pure(structure, &ket)
}

/// Bell pair on modes (1,2) tensored with a Bell pair on modes (3,4).
pub fn bell_product() -> DensityMatrix {
    bell_phi_plus().kron(&bell_phi_plus())
}

/// All mode structures with every dim >= 2, at least two modes, and total
/// dimension at most `max_n`, in deterministic order (ascending dims,
/// lexicographic).
pub fn structures_up_to(max_n: usize) -> Vec<ModeStructure> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn recurse(max_n: usize, min_dim: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let used: usize = current.iter().product();
        for d in min_dim..=max_n {
            if used * d > max_n {
                break;
            }
            current.push(d);
            if current.len() >= 2 {
                out.push(current.clone());
            }
            recurse(max_n, d, current, out);
            current.pop();
        }
    }
    let mut dims_list = Vec::new();
    recurse(max_n, 2, &mut current, &mut dims_list);
    dims_list.sort();
    dims_list.sort_by_key(|d| d.iter().product::<usize>());
    for dims in dims_list {
        out.push(ModeStructure::new(&dims).expect("dims >= 2"));
    }
    out
}
