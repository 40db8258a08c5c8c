//! Applications beyond the game itself: the apples communication-complexity
//! task (shared-frame and frame-free variants, with its exact classical
//! bound) and three-party secret sharing over the logical observables.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::games::AdversaryMode;
use crate::protocols::{measure_logical, measure_logical_z, LogicalObservable};
use crate::sim::{haar_random_unitary, RngStream, SingleQubitUnitary};
use crate::states::{state, BasisId, StateName};

/// Apple counts for the three players, stored in half-apple units
/// (each player holds 0, 1/2, 1 or 3/2 apples; the total is an integer).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AppleAllotment {
    halves: [u8; 3],
}

impl AppleAllotment {
    pub fn new(halves: [u8; 3]) -> Result<Self> {
        if halves.iter().any(|&h| h > 3) {
            return Err(Error::IllegalAllotment(format!(
                "per-player count must be 0, 1/2, 1 or 3/2, got {halves:?} halves"
            )));
        }
        let total: u8 = halves.iter().sum();
        if !total.is_multiple_of(2) {
            return Err(Error::IllegalAllotment(format!(
                "total must be an integer number of apples, got {total} halves"
            )));
        }
        Ok(AppleAllotment { halves })
    }

    /// All 32 legal allotments in lexicographic order.
    pub fn enumerate() -> Vec<AppleAllotment> {
        let mut out = Vec::with_capacity(32);
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    if (a + b + c) % 2 == 0 {
                        out.push(AppleAllotment { halves: [a, b, c] });
                    }
                }
            }
        }
        out
    }

    pub fn halves(&self) -> [u8; 3] {
        self.halves
    }

    /// Whether the total number of apples is even.
    pub fn total_is_even(&self) -> bool {
        let apples = self.halves.iter().map(|&h| h as u32).sum::<u32>() / 2;
        apples % 2 == 0
    }

    pub fn label(&self) -> String {
        let fmt = |h: u8| match h {
            0 => "0".to_string(),
            2 => "1".to_string(),
            h => format!("{}/2", h),
        };
        format!(
            "{},{},{}",
            fmt(self.halves[0]),
            fmt(self.halves[1]),
            fmt(self.halves[2])
        )
    }
}

/// The phase rotation a player applies for n apples (n in half-units):
/// identity on |y0⟩ and the phase e^{inπ} = i^{2n} on |y1⟩.
#[derive(Debug, Clone)]
pub struct PhaseRotation {
    pub halves: u8,
    matrix: SingleQubitUnitary,
}

impl PhaseRotation {
    pub fn new(halves: u8) -> Self {
        let y = BasisId::Y.pair();
        let phase = Complex64::i().powu(halves as u32);
        let mut m = [[Complex64::ZERO; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = y.ket(0).amplitude(i) * y.ket(0).amplitude(j).conj()
                    + phase * y.ket(1).amplitude(i) * y.ket(1).amplitude(j).conj();
            }
        }
        PhaseRotation {
            halves,
            matrix: SingleQubitUnitary::new(m).expect("phase rotation is unitary"),
        }
    }

    pub fn unitary(&self) -> &SingleQubitUnitary {
        &self.matrix
    }
}

/// The block version of the phase rotation, acting on the logical pair
/// {η0, η1} and as the identity on the orthogonal complement:
/// R = I + (i^{2n} − 1)|η1⟩⟨η1|, a 16×16 row-major matrix.
pub fn logical_phase_rotation(halves: u8) -> Vec<Complex64> {
    let eta1 = state(StateName::Eta1);
    let phase = Complex64::i().powu(halves as u32) - Complex64::ONE;
    let dim = eta1.dim();
    let mut m = vec![Complex64::ZERO; dim * dim];
    for i in 0..dim {
        m[i * dim + i] = Complex64::ONE;
        for j in 0..dim {
            m[i * dim + j] += phase * eta1.amplitude(i) * eta1.amplitude(j).conj();
        }
    }
    m
}

/// One round of the apples task.
#[derive(Debug, Clone, Serialize)]
pub struct AppleTrial {
    pub allotment: AppleAllotment,
    pub outcomes: [u8; 3],
    pub guessed_even: bool,
    pub correct: bool,
    pub seed: u64,
}

fn classify_parity(outcomes: &[u8; 3]) -> bool {
    // The even-total state has support on outcome strings with an even
    // number of 1s, the odd-total state on the complementary strings.
    outcomes.iter().filter(|&&b| b == 1).count() % 2 == 0
}

/// Shared-frame apples protocol: rotate each GHZ qubit by the player's
/// count, measure along z, and classify the parity of the outcome string.
pub fn apples_quantum(allotment: AppleAllotment, rng: &mut RngStream) -> AppleTrial {
    let seed = rng.seed();
    let mut shared = state(StateName::Ghz);
    for (player, &halves) in allotment.halves.iter().enumerate() {
        shared = shared
            .apply_local(PhaseRotation::new(halves).unitary(), player)
            .expect("in range");
    }
    let mut outcomes = [0u8; 3];
    for (player, out) in outcomes.iter_mut().enumerate() {
        let (bit, post) = shared
            .measure(&BasisId::Z.pair().observable(player), rng)
            .expect("complete basis");
        *out = bit as u8;
        shared = post;
    }
    let guessed_even = classify_parity(&outcomes);
    AppleTrial {
        allotment,
        outcomes,
        guessed_even,
        correct: guessed_even == allotment.total_is_even(),
        seed,
    }
}

/// Frame-free apples protocol: each player holds a four-qubit block of the
/// twelve-qubit state, applies the logical rotation for his count, survives
/// adversary scrambling, and measures the logical Z observable with
/// single-qubit measurements.
pub fn apples_frame_free(
    allotment: AppleAllotment,
    rng: &mut RngStream,
    adversary: AdversaryMode,
) -> Result<AppleTrial> {
    let seed = rng.seed();
    let mut adversary_rng = rng.substream(1);
    let mut measure_rng = rng.substream(2);

    let mut shared = state(StateName::Psi12);
    for (player, &halves) in allotment.halves.iter().enumerate() {
        let block = [player * 4, player * 4 + 1, player * 4 + 2, player * 4 + 3];
        shared = shared.apply_on_block(&logical_phase_rotation(halves), &block)?;
    }
    let scrambled: Vec<usize> = match adversary {
        AdversaryMode::None => Vec::new(),
        AdversaryMode::ScrambleOne => vec![adversary_rng.pick(3)],
        AdversaryMode::ScrambleAll => vec![0, 1, 2],
    };
    for player in scrambled {
        let u = haar_random_unitary(&mut adversary_rng);
        for offset in 0..4 {
            shared = shared.apply_local(&u, player * 4 + offset)?;
        }
    }

    let mut outcomes = [0u8; 3];
    for (player, out) in outcomes.iter_mut().enumerate() {
        let block = [player * 4, player * 4 + 1, player * 4 + 2, player * 4 + 3];
        let (outcome, post) = measure_logical_z(&shared, &block, &mut measure_rng)?;
        *out = outcome.answer;
        shared = post;
    }
    let guessed_even = classify_parity(&outcomes);
    Ok(AppleTrial {
        allotment,
        outcomes,
        guessed_even,
        correct: guessed_even == allotment.total_is_even(),
        seed,
    })
}

/// Exact classical bound for the apples task.
#[derive(Debug, Clone, Serialize)]
pub struct AppleBoundReport {
    pub max_correct: u32,
    pub total_allotments: u32,
    pub optimal_message_pairs: usize,
}

impl AppleBoundReport {
    pub fn probability(&self) -> f64 {
        self.max_correct as f64 / self.total_allotments as f64
    }
}

/// Brute force over both 1-bit messages, with the receiver's reply optimized
/// exactly per cell: for fixed message functions, the best guess for each
/// (own count, received bits) cell is the majority parity over the uniform
/// allotments landing in that cell, so enumerating the receiver's function
/// space is unnecessary.
pub fn apples_classical_bound() -> AppleBoundReport {
    let (max_correct, total, optimal) = apples_bound_on_domain(&[0, 1, 2, 3]);
    AppleBoundReport {
        max_correct,
        total_allotments: total,
        optimal_message_pairs: optimal,
    }
}

/// The same exact search restricted to a sub-domain of per-player values,
/// used to cross-validate the cell-majority pruning against an unpruned
/// search.
pub fn apples_bound_on_domain(values: &[u8]) -> (u32, u32, usize) {
    let legal: Vec<[u8; 3]> = values
        .iter()
        .flat_map(|&a| {
            values.iter().flat_map(move |&b| {
                values
                    .iter()
                    .filter(move |&&c| (a + b + c) % 2 == 0)
                    .map(move |&c| [a, b, c])
            })
        })
        .collect();
    let v = values.len();
    let n_funcs = 1usize << v;
    let mut best = 0u32;
    let mut optimal = 0usize;
    for bf in 0..n_funcs {
        for cf in 0..n_funcs {
            let message = |f: usize, count: u8| {
                let idx = values.iter().position(|&x| x == count).unwrap();
                ((f >> idx) & 1) as u8
            };
            // cells indexed by (alice count, bob bit, charlie bit)
            let mut cells = vec![[0u32; 2]; v * 4];
            for &[a, b, c] in &legal {
                let ai = values.iter().position(|&x| x == a).unwrap();
                let cell = ai * 4 + (message(bf, b) * 2 + message(cf, c)) as usize;
                let parity = (((a + b + c) / 2) % 2) as usize;
                cells[cell][parity] += 1;
            }
            let correct: u32 = cells.iter().map(|c| c[0].max(c[1])).sum();
            match correct.cmp(&best) {
                std::cmp::Ordering::Greater => {
                    best = correct;
                    optimal = 1;
                }
                std::cmp::Ordering::Equal => optimal += 1,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    (best, legal.len() as u32, optimal)
}

/// Eavesdropper model for secret sharing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Eavesdropper {
    Off,
    /// Eve measures the dealer's block in a random logical basis with the
    /// single-qubit protocols and forwards the collapsed state.
    InterceptResend,
}

impl Eavesdropper {
    pub fn label(self) -> &'static str {
        match self {
            Eavesdropper::Off => "off",
            Eavesdropper::InterceptResend => "intercept-resend",
        }
    }
}

/// One secret-sharing round.
#[derive(Debug, Clone, Serialize)]
pub struct SecretShareRound {
    pub round: usize,
    pub bases: [LogicalObservable; 3],
    pub answers: [u8; 3],
    pub kept: bool,
    pub disclosed: bool,
}

/// Secret-sharing run outcome: sifted keys, error estimate, per-round log.
#[derive(Debug, Clone, Serialize)]
pub struct SecretShareReport {
    pub n_rounds: usize,
    pub kept: usize,
    pub sift_rate: f64,
    pub disclosed: usize,
    pub disclosed_errors: usize,
    pub qber: f64,
    /// Reconstruction failures over every kept round (simulation ground
    /// truth, not just the disclosed sample).
    pub reconstruction_errors: usize,
    pub eavesdropper: Eavesdropper,
    pub adversary: AdversaryMode,
    pub alice_key: Vec<u8>,
    pub bob_charlie_key: Vec<u8>,
    pub seed: u64,
    pub rng_algorithm: &'static str,
    #[serde(skip)]
    pub rounds: Vec<SecretShareRound>,
}

fn bits_to_hex(bits: &[u8]) -> String {
    bits.chunks(4)
        .map(|chunk| {
            let mut nibble = 0u8;
            for (i, &b) in chunk.iter().enumerate() {
                nibble |= b << (3 - i);
            }
            char::from_digit(nibble as u32, 16).unwrap()
        })
        .collect()
}

impl SecretShareReport {
    pub fn alice_key_hex(&self) -> String {
        bits_to_hex(&self.alice_key)
    }

    pub fn bob_charlie_key_hex(&self) -> String {
        bits_to_hex(&self.bob_charlie_key)
    }
}

/// Keep a round when the three logical basis choices form a legal question
/// combination; on kept rounds the parity rules let Bob and Charlie jointly
/// reconstruct Alice's answer.
fn basis_combo_kept(bases: &[LogicalObservable; 3]) -> Option<bool> {
    use LogicalObservable::{X, Z};
    match bases {
        [Z, Z, Z] => Some(true),            // all-z parity rule
        [Z, X, X] | [X, Z, X] | [X, X, Z] => Some(false), // mixed parity rule
        _ => None,
    }
}

/// Run the secret-sharing protocol: Alice deals her key to Bob and Charlie,
/// who can read a bit only by combining their answers. A quarter of the kept
/// rounds is disclosed to estimate the error rate.
pub fn secret_share(
    n_rounds: usize,
    rng: &mut RngStream,
    adversary: AdversaryMode,
    eavesdropper: Eavesdropper,
) -> Result<SecretShareReport> {
    let seed = rng.seed();
    let mut rounds = Vec::with_capacity(n_rounds);
    let mut alice_key = Vec::new();
    let mut bob_charlie_key = Vec::new();
    let mut kept = 0usize;
    let mut disclosed = 0usize;
    let mut disclosed_errors = 0usize;
    let mut reconstruction_errors = 0usize;

    for round in 0..n_rounds {
        let round_rng = rng.substream(round as u64);
        let mut adversary_rng = round_rng.substream(1);
        let mut protocol_rng = round_rng.substream(2);

        let mut shared = state(StateName::Psi12);
        let scrambled: Vec<usize> = match adversary {
            AdversaryMode::None => Vec::new(),
            AdversaryMode::ScrambleOne => vec![adversary_rng.pick(3)],
            AdversaryMode::ScrambleAll => vec![0, 1, 2],
        };
        for player in scrambled {
            let u = haar_random_unitary(&mut adversary_rng);
            for offset in 0..4 {
                shared = shared.apply_local(&u, player * 4 + offset)?;
            }
        }

        if eavesdropper == Eavesdropper::InterceptResend {
            let basis = if protocol_rng.bit() == 0 {
                LogicalObservable::Z
            } else {
                LogicalObservable::X
            };
            let (_, post) = measure_logical(&shared, &[0, 1, 2, 3], basis, &mut protocol_rng)?;
            shared = post;
        }

        let bases: [LogicalObservable; 3] = std::array::from_fn(|_| {
            if protocol_rng.bit() == 0 {
                LogicalObservable::Z
            } else {
                LogicalObservable::X
            }
        });
        let mut answers = [0u8; 3];
        for player in 0..3 {
            let block = [player * 4, player * 4 + 1, player * 4 + 2, player * 4 + 3];
            let (outcome, post) =
                measure_logical(&shared, &block, bases[player], &mut protocol_rng)?;
            answers[player] = outcome.answer;
            shared = post;
        }

        let combo = basis_combo_kept(&bases);
        let is_kept = combo.is_some();
        let mut is_disclosed = false;
        if let Some(all_z) = combo {
            let reconstructed = if all_z {
                answers[1] ^ answers[2]
            } else {
                1 ^ answers[1] ^ answers[2]
            };
            if reconstructed != answers[0] {
                reconstruction_errors += 1;
            }
            // every fourth kept round is disclosed for error estimation
            if kept.is_multiple_of(4) {
                disclosed += 1;
                if reconstructed != answers[0] {
                    disclosed_errors += 1;
                }
                is_disclosed = true;
            } else {
                alice_key.push(answers[0]);
                bob_charlie_key.push(reconstructed);
            }
            kept += 1;
        }
        rounds.push(SecretShareRound {
            round,
            bases,
            answers,
            kept: is_kept,
            disclosed: is_disclosed,
        });
    }

    Ok(SecretShareReport {
        n_rounds,
        kept,
        sift_rate: kept as f64 / n_rounds as f64,
        disclosed,
        disclosed_errors,
        qber: if disclosed > 0 {
            disclosed_errors as f64 / disclosed as f64
        } else {
            0.0
        },
        reconstruction_errors,
        eavesdropper,
        adversary,
        alice_key,
        bob_charlie_key,
        seed,
        rng_algorithm: RngStream::ALGORITHM,
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::ALGEBRAIC_TOL;

    #[test]
    fn exactly_32_legal_allotments() {
        let all = AppleAllotment::enumerate();
        assert_eq!(all.len(), 32);
        assert!(AppleAllotment::new([1, 0, 0]).is_err()); // half an apple total
        assert!(AppleAllotment::new([4, 0, 0]).is_err()); // two apples for one player
        assert!(AppleAllotment::new([1, 1, 0]).is_ok());
    }

    #[test]
    fn phase_rotation_basics() {
        let identity = PhaseRotation::new(0);
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
                assert!((identity.unitary().entry(i, j) - expected).norm() < ALGEBRAIC_TOL);
            }
        }
        // R(n)·R(m) = R(n+m), here exactly (the phases multiply)
        for (n, m) in [(1u8, 2u8), (2, 3), (3, 3)] {
            let lhs = PhaseRotation::new(n)
                .unitary()
                .compose(PhaseRotation::new(m).unitary());
            let rhs = PhaseRotation::new(n + m);
            for i in 0..2 {
                for j in 0..2 {
                    assert!(
                        (lhs.entry(i, j) - rhs.unitary().entry(i, j)).norm() < ALGEBRAIC_TOL,
                        "R({n})R({m}) vs R({})",
                        n + m
                    );
                }
            }
        }
    }

    #[test]
    fn rotations_map_ghz_onto_the_parity_partner() {
        let ghz = state(StateName::Ghz);
        let ghz_perp = state(StateName::GhzPerp);
        for allotment in AppleAllotment::enumerate() {
            let mut rotated = ghz.clone();
            for (player, &halves) in allotment.halves().iter().enumerate() {
                rotated = rotated
                    .apply_local(PhaseRotation::new(halves).unitary(), player)
                    .unwrap();
            }
            let target = if allotment.total_is_even() { &ghz } else { &ghz_perp };
            let f = rotated.fidelity(target).unwrap();
            assert!(f > 1.0 - 1e-12, "{}: fidelity {f}", allotment.label());
        }
    }

    #[test]
    fn outcome_strings_partition_by_parity() {
        let ghz = state(StateName::Ghz);
        let ghz_perp = state(StateName::GhzPerp);
        let mut even_support = Vec::new();
        let mut odd_support = Vec::new();
        for bits in 0..8usize {
            if ghz.amplitude(bits).norm() > 1e-12 {
                even_support.push(bits);
            }
            if ghz_perp.amplitude(bits).norm() > 1e-12 {
                odd_support.push(bits);
            }
        }
        assert_eq!(even_support.len(), 4);
        assert_eq!(odd_support.len(), 4);
        for bits in even_support {
            assert_eq!(bits.count_ones() % 2, 0);
        }
        for bits in odd_support {
            assert_eq!(bits.count_ones() % 2, 1);
        }
    }

    #[test]
    fn quantum_apples_protocol_is_always_correct() {
        let root = RngStream::new(606);
        for (i, allotment) in AppleAllotment::enumerate().into_iter().enumerate() {
            for trial in 0..50u64 {
                let mut rng = root.substream(i as u64 * 1000 + trial);
                let result = apples_quantum(allotment, &mut rng);
                assert!(result.correct, "{} trial {trial}", allotment.label());
            }
        }
    }

    #[test]
    fn classical_apples_bound_is_three_quarters() {
        let report = apples_classical_bound();
        assert_eq!(report.max_correct, 24);
        assert_eq!(report.total_allotments, 32);
        assert!(report.optimal_message_pairs > 0);
    }

    #[test]
    fn two_bit_messages_would_trivialize_the_task() {
        // With full-information messages (both counts sent outright) the
        // guess is always right; the 24/32 bound exists only because each
        // sender is limited to one bit.
        let correct = AppleAllotment::enumerate()
            .iter()
            .filter(|a| {
                let [na, nb, nc] = a.halves();
                let guess_even = (((na + nb + nc) / 2) % 2) == 0;
                guess_even == a.total_is_even()
            })
            .count();
        assert_eq!(correct, 32);
        assert!(apples_classical_bound().max_correct < 32);
    }

    #[test]
    fn cell_majority_matches_unpruned_search_on_small_domains() {
        // Unpruned oracle: enumerate the receiver's full function table.
        fn unpruned(values: &[u8]) -> (u32, u32) {
            let legal: Vec<[u8; 3]> = values
                .iter()
                .flat_map(|&a| {
                    values.iter().flat_map(move |&b| {
                        values
                            .iter()
                            .filter(move |&&c| (a + b + c) % 2 == 0)
                            .map(move |&c| [a, b, c])
                    })
                })
                .collect();
            let v = values.len();
            let n_funcs = 1usize << v;
            let n_guess = 1usize << (v * 4);
            let mut best = 0u32;
            for bf in 0..n_funcs {
                for cf in 0..n_funcs {
                    for gf in 0..n_guess {
                        let mut correct = 0u32;
                        for &[a, b, c] in &legal {
                            let ai = values.iter().position(|&x| x == a).unwrap();
                            let bi = values.iter().position(|&x| x == b).unwrap();
                            let ci = values.iter().position(|&x| x == c).unwrap();
                            let bbit = (bf >> bi) & 1;
                            let cbit = (cf >> ci) & 1;
                            let cell = ai * 4 + bbit * 2 + cbit;
                            let guess = ((gf >> cell) & 1) as u8;
                            if guess == ((a + b + c) / 2) % 2 {
                                correct += 1;
                            }
                        }
                        best = best.max(correct);
                    }
                }
            }
            (best, legal.len() as u32)
        }

        for domain in [vec![0u8, 1], vec![0u8, 1, 2]] {
            let (pruned, total, _) = apples_bound_on_domain(&domain);
            let (exact, total2) = unpruned(&domain);
            assert_eq!(total, total2);
            assert_eq!(pruned, exact, "domain {domain:?}");
        }
    }

    #[test]
    fn logical_rotation_is_unitary_and_identity_at_zero() {
        let m = logical_phase_rotation(0);
        for i in 0..16 {
            for j in 0..16 {
                let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
                assert!((m[i * 16 + j] - expected).norm() < ALGEBRAIC_TOL);
            }
        }
        // unitarity of a nontrivial rotation: columns stay orthonormal when
        // applied to basis states embedded in a 4-qubit state
        let m1 = logical_phase_rotation(1);
        for col in 0..16 {
            let norm: f64 = (0..16).map(|row| m1[row * 16 + col].norm_sqr()).sum();
            assert!((norm - 1.0).abs() < ALGEBRAIC_TOL);
        }
    }

    #[test]
    fn logical_rotation_commutes_with_block_rotations_on_the_span() {
        let mut rng = RngStream::new(808);
        let u = haar_random_unitary(&mut rng);
        let rot = logical_phase_rotation(1);
        for name in [StateName::Eta0, StateName::Eta1] {
            let v = state(name);
            let mut u4_first = v.clone();
            for qubit in 0..4 {
                u4_first = u4_first.apply_local(&u, qubit).unwrap();
            }
            u4_first = u4_first.apply_on_block(&rot, &[0, 1, 2, 3]).unwrap();
            let mut rot_first = v.apply_on_block(&rot, &[0, 1, 2, 3]).unwrap();
            for qubit in 0..4 {
                rot_first = rot_first.apply_local(&u, qubit).unwrap();
            }
            let diff: f64 = u4_first
                .amplitudes()
                .iter()
                .zip(rot_first.amplitudes())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff < 1e-10, "{name:?}: commutator norm {diff}");
        }
    }

    #[test]
    fn frame_free_apples_zero_rotation_leaves_the_state_invariant() {
        let psi12 = state(StateName::Psi12);
        let mut rotated = psi12.clone();
        for player in 0..3 {
            let block = [player * 4, player * 4 + 1, player * 4 + 2, player * 4 + 3];
            rotated = rotated
                .apply_on_block(&logical_phase_rotation(0), &block)
                .unwrap();
        }
        assert!(rotated.fidelity(&psi12).unwrap() > 1.0 - ALGEBRAIC_TOL);
    }

    #[test]
    fn frame_free_apples_is_always_correct_under_full_scrambling() {
        let root = RngStream::new(909);
        for (i, allotment) in AppleAllotment::enumerate().into_iter().enumerate() {
            for trial in 0..10u64 {
                let mut rng = root.substream(i as u64 * 100 + trial);
                let result =
                    apples_frame_free(allotment, &mut rng, AdversaryMode::ScrambleAll).unwrap();
                assert!(result.correct, "{} trial {trial}", allotment.label());
            }
        }
    }

    #[test]
    fn frame_free_apples_outcome_is_adversary_invariant_per_seed() {
        let allotments = AppleAllotment::enumerate();
        for i in 0..50u64 {
            let allotment = allotments[(i % 32) as usize];
            let mut outcomes = Vec::new();
            for adversary in [AdversaryMode::None, AdversaryMode::ScrambleAll] {
                let mut rng = RngStream::new(70_000 + i);
                outcomes.push(apples_frame_free(allotment, &mut rng, adversary).unwrap().outcomes);
            }
            assert_eq!(outcomes[0], outcomes[1], "trial {i}");
        }
    }

    #[test]
    fn secret_sharing_without_eve_is_error_free() {
        let mut rng = RngStream::new(13_000);
        let report =
            secret_share(4_000, &mut rng, AdversaryMode::None, Eavesdropper::Off).unwrap();
        assert_eq!(report.reconstruction_errors, 0);
        assert_eq!(report.disclosed_errors, 0);
        assert_eq!(report.qber, 0.0);
        assert_eq!(report.alice_key, report.bob_charlie_key);
        let sigma = (0.25 / report.n_rounds as f64).sqrt();
        assert!(
            (report.sift_rate - 0.5).abs() < 3.0 * sigma,
            "sift rate {}",
            report.sift_rate
        );
        // disclosed sample is a quarter of the kept rounds
        assert!((report.disclosed as f64 / report.kept as f64 - 0.25).abs() < 0.01);
        assert_eq!(report.rounds.len(), report.n_rounds);
    }

    #[test]
    fn secret_sharing_survives_full_scrambling() {
        let mut rng = RngStream::new(13_500);
        let report =
            secret_share(2_000, &mut rng, AdversaryMode::ScrambleAll, Eavesdropper::Off).unwrap();
        assert_eq!(report.reconstruction_errors, 0);
        assert_eq!(report.qber, 0.0);
    }

    #[test]
    fn intercept_resend_attack_is_detectable() {
        let mut rng = RngStream::new(14_000);
        let report = secret_share(
            10_000,
            &mut rng,
            AdversaryMode::None,
            Eavesdropper::InterceptResend,
        )
        .unwrap();
        assert!(report.qber > 0.05, "QBER {}", report.qber);
        // the attack introduces errors at roughly a quarter of kept rounds
        assert!(report.qber < 0.45, "QBER {}", report.qber);
    }

    #[test]
    fn key_hex_export_is_consistent() {
        let report = SecretShareReport {
            n_rounds: 0,
            kept: 0,
            sift_rate: 0.0,
            disclosed: 0,
            disclosed_errors: 0,
            qber: 0.0,
            reconstruction_errors: 0,
            eavesdropper: Eavesdropper::Off,
            adversary: AdversaryMode::None,
            alice_key: vec![1, 0, 1, 1, 0, 0, 0, 1],
            bob_charlie_key: vec![1, 0, 1, 1],
            seed: 0,
            rng_algorithm: RngStream::ALGORITHM,
            rounds: Vec::new(),
        };
        assert_eq!(report.alice_key_hex(), "b1");
        assert_eq!(report.bob_charlie_key_hex(), "b");
    }
}
