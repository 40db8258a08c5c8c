//! Exact dense state-vector engine: tensor products, local unitaries,
//! projective measurement with Born-rule sampling, and Haar-random
//! single-qubit unitaries.
//!
//! Basis ordering convention: qubit 0 is the leftmost tensor factor and the
//! most significant bit of the basis index, so |z0,z1⟩ sits at index 0b01.
//! All operations return fresh values; a `StateVector` is never mutated after
//! construction.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance for algebraic identities evaluated in double precision.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for quantities accumulated across many 12-qubit operations.
pub const ACCUMULATED_TOL: f64 = 1e-9;

/// Normalized complex amplitude vector over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state |index⟩ of `n_qubits` qubits.
    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        assert!(index < 1 << n_qubits, "basis index out of range");
        let mut amps = vec![Complex64::ZERO; 1 << n_qubits];
        amps[index] = Complex64::ONE;
        StateVector { n_qubits, amps }
    }

    /// Single-qubit state a0|z0⟩ + a1|z1⟩. The amplitudes must already be
    /// normalized.
    pub fn single_qubit(a0: Complex64, a1: Complex64) -> Result<Self> {
        Self::from_amplitudes(vec![a0, a1])
    }

    /// Build a state from raw amplitudes. The length must be a power of two
    /// and the vector normalized within [`ALGEBRAIC_TOL`].
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::BadAmplitudeCount { len });
        }
        let n_qubits = len.trailing_zeros() as usize;
        let state = StateVector { n_qubits, amps };
        state.check_norm()?;
        Ok(state)
    }

    fn check_norm(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Kronecker product with `self`'s qubits most significant.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        }
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Normalized sum Σ cᵢ|ψᵢ⟩. The coefficients must produce a normalized
    /// result; this keeps the norm invariant airtight for state construction
    /// from orthonormal expansions.
    pub fn linear_combination(terms: &[(Complex64, &StateVector)]) -> Result<StateVector> {
        let (_, first) = terms.first().expect("at least one term");
        let n_qubits = first.n_qubits;
        let mut amps = vec![Complex64::ZERO; first.dim()];
        for (coeff, state) in terms {
            if state.n_qubits != n_qubits {
                return Err(Error::DimensionMismatch {
                    left: n_qubits,
                    right: state.n_qubits,
                });
            }
            for (acc, a) in amps.iter_mut().zip(&state.amps) {
                *acc += coeff * a;
            }
        }
        StateVector::from_amplitudes(amps)
    }

    fn bit_shift(&self, qubit: usize) -> usize {
        self.n_qubits - 1 - qubit
    }

    /// Apply a single-qubit unitary to the designated qubit (identity on the
    /// rest).
    pub fn apply_local(&self, u: &SingleQubitUnitary, qubit: usize) -> Result<StateVector> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        let mask = 1usize << self.bit_shift(qubit);
        let mut amps = self.amps.clone();
        for g in 0..self.dim() {
            if g & mask == 0 {
                let h = g | mask;
                let (a0, a1) = (self.amps[g], self.amps[h]);
                amps[g] = u.m[0][0] * a0 + u.m[0][1] * a1;
                amps[h] = u.m[1][0] * a0 + u.m[1][1] * a1;
            }
        }
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amps,
        })
    }

    /// Apply a 2^k × 2^k unitary (row-major) to the ordered qubit subset
    /// `qubits`, identity elsewhere.
    pub fn apply_on_block(&self, matrix: &[Complex64], qubits: &[usize]) -> Result<StateVector> {
        let maps = SubsystemMaps::new(self, qubits)?;
        let dim_sub = maps.sub.len();
        assert_eq!(
            matrix.len(),
            dim_sub * dim_sub,
            "matrix size does not match block"
        );
        let mut amps = vec![Complex64::ZERO; self.dim()];
        let mut column = vec![Complex64::ZERO; dim_sub];
        for &base in &maps.rest {
            for (a, slot) in column.iter_mut().enumerate() {
                *slot = self.amps[base | maps.sub[a]];
            }
            for a in 0..dim_sub {
                let row = &matrix[a * dim_sub..(a + 1) * dim_sub];
                amps[base | maps.sub[a]] = row
                    .iter()
                    .zip(&column)
                    .map(|(m, c)| m * c)
                    .sum();
            }
        }
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amps,
        })
    }

    /// Projective measurement with Born-rule sampling. Returns the sampled
    /// outcome index and the renormalized post-measurement state.
    ///
    /// Fails with [`Error::IncompleteMeasurement`] when the projectors do not
    /// capture the state: total outcome probability off 1 by more than
    /// [`ACCUMULATED_TOL`].
    pub fn measure(
        &self,
        obs: &ProjectiveObservable,
        rng: &mut RngStream,
    ) -> Result<(usize, StateVector)> {
        // Basis measurements of one qubit dominate the protocol inner loops.
        if obs.qubits.len() == 1
            && obs.outcomes.len() == 2
            && obs.outcomes.iter().all(|o| o.vectors.len() == 1)
        {
            return self.measure_single_qubit(obs, rng);
        }
        let maps = SubsystemMaps::new(self, &obs.qubits)?;
        let dim_rest = maps.rest.len();

        // Overlap coefficients c[v][r] = Σ_a conj(v[a])·amp[a,r] per outcome.
        let mut coeffs: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(obs.outcomes.len());
        let mut probs = Vec::with_capacity(obs.outcomes.len());
        for outcome in &obs.outcomes {
            let mut per_vector = Vec::with_capacity(outcome.vectors.len());
            let mut p = 0.0;
            for v in &outcome.vectors {
                let mut c = vec![Complex64::ZERO; dim_rest];
                for (r, &base) in maps.rest.iter().enumerate() {
                    let mut acc = Complex64::ZERO;
                    for (a, &sub) in maps.sub.iter().enumerate() {
                        acc += v[a].conj() * self.amps[base | sub];
                    }
                    p += acc.norm_sqr();
                    c[r] = acc;
                }
                per_vector.push(c);
            }
            coeffs.push(per_vector);
            probs.push(p);
        }

        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > ACCUMULATED_TOL {
            return Err(Error::IncompleteMeasurement { total });
        }

        // Sample an outcome.
        let draw = rng.uniform() * total;
        let mut cumulative = 0.0;
        let mut picked = probs.len() - 1;
        for (i, p) in probs.iter().enumerate() {
            cumulative += p;
            if draw < cumulative {
                picked = i;
                break;
            }
        }

        // Collapse: post = P|s⟩ / √p.
        let scale = Complex64::from(1.0 / probs[picked].sqrt());
        let mut amps = vec![Complex64::ZERO; self.dim()];
        for (v, c) in obs.outcomes[picked].vectors.iter().zip(&coeffs[picked]) {
            for (r, &base) in maps.rest.iter().enumerate() {
                for (a, &sub) in maps.sub.iter().enumerate() {
                    amps[base | sub] += v[a] * c[r] * scale;
                }
            }
        }
        Ok((
            picked,
            StateVector {
                n_qubits: self.n_qubits,
                amps,
            },
        ))
    }

    fn measure_single_qubit(
        &self,
        obs: &ProjectiveObservable,
        rng: &mut RngStream,
    ) -> Result<(usize, StateVector)> {
        let qubit = obs.qubits[0];
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        let mask = 1usize << self.bit_shift(qubit);
        let kets: Vec<[Complex64; 2]> = obs
            .outcomes
            .iter()
            .map(|o| [o.vectors[0][0], o.vectors[0][1]])
            .collect();
        let mut probs = [0.0f64; 2];
        for g in 0..self.dim() {
            if g & mask == 0 {
                let (a0, a1) = (self.amps[g], self.amps[g | mask]);
                for (p, k) in probs.iter_mut().zip(&kets) {
                    *p += (k[0].conj() * a0 + k[1].conj() * a1).norm_sqr();
                }
            }
        }
        let total = probs[0] + probs[1];
        if (total - 1.0).abs() > ACCUMULATED_TOL {
            return Err(Error::IncompleteMeasurement { total });
        }
        let picked = usize::from(rng.uniform() * total >= probs[0]);
        let k = &kets[picked];
        let scale = Complex64::from(1.0 / probs[picked].sqrt());
        let mut amps = vec![Complex64::ZERO; self.dim()];
        for g in 0..self.dim() {
            if g & mask == 0 {
                let c = (k[0].conj() * self.amps[g] + k[1].conj() * self.amps[g | mask]) * scale;
                amps[g] = k[0] * c;
                amps[g | mask] = k[1] * c;
            }
        }
        Ok((
            picked,
            StateVector {
                n_qubits: self.n_qubits,
                amps,
            },
        ))
    }
}

/// Precomputed index scatter tables for a qubit subset: `sub[a]` carries the
/// subsystem bit pattern `a` in the global index, `rest[r]` the pattern of
/// the remaining qubits.
struct SubsystemMaps {
    sub: Vec<usize>,
    rest: Vec<usize>,
}

impl SubsystemMaps {
    fn new(state: &StateVector, qubits: &[usize]) -> Result<Self> {
        let n = state.n_qubits;
        let mut seen = vec![false; n];
        for &q in qubits {
            if q >= n {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: n,
                });
            }
            assert!(!seen[q], "duplicate qubit index {q}");
            seen[q] = true;
        }
        let shifts: Vec<usize> = qubits.iter().map(|&q| n - 1 - q).collect();
        let rest_shifts: Vec<usize> = (0..n)
            .filter(|&q| !seen[q])
            .map(|q| n - 1 - q)
            .collect();

        let scatter = |bits: usize, shifts: &[usize]| -> usize {
            shifts
                .iter()
                .enumerate()
                .map(|(j, &sh)| ((bits >> (shifts.len() - 1 - j)) & 1) << sh)
                .sum()
        };
        let sub = (0..1usize << shifts.len())
            .map(|a| scatter(a, &shifts))
            .collect();
        let rest = (0..1usize << rest_shifts.len())
            .map(|r| scatter(r, &rest_shifts))
            .collect();
        Ok(SubsystemMaps { sub, rest })
    }
}

/// A 2×2 unitary, verified on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleQubitUnitary {
    m: [[Complex64; 2]; 2],
}

impl SingleQubitUnitary {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        // U·U† = I within ALGEBRAIC_TOL.
        let mut deviation: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let entry: Complex64 = (0..2).map(|k| m[i][k] * m[j][k].conj()).sum();
                let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
                deviation = deviation.max((entry - expected).norm());
            }
        }
        if deviation > ALGEBRAIC_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(SingleQubitUnitary { m })
    }

    pub fn identity() -> Self {
        SingleQubitUnitary {
            m: [[Complex64::ONE, Complex64::ZERO], [Complex64::ZERO, Complex64::ONE]],
        }
    }

    pub fn pauli_x() -> Self {
        SingleQubitUnitary {
            m: [[Complex64::ZERO, Complex64::ONE], [Complex64::ONE, Complex64::ZERO]],
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    /// U·|ket⟩ for a single-qubit state.
    pub fn apply(&self, ket: &StateVector) -> StateVector {
        ket.apply_local(self, 0).expect("single-qubit state")
    }

    /// Matrix product self·other.
    pub fn compose(&self, other: &SingleQubitUnitary) -> SingleQubitUnitary {
        let mut m = [[Complex64::ZERO; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..2).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        SingleQubitUnitary { m }
    }
}

/// One outcome of a projective observable: a label plus orthonormal vectors
/// spanning the projected subspace (over the acting qubits).
#[derive(Debug, Clone)]
pub struct ProjectorOutcome {
    pub label: String,
    vectors: Vec<Vec<Complex64>>,
}

impl ProjectorOutcome {
    pub fn new(label: impl Into<String>, vectors: Vec<Vec<Complex64>>) -> Self {
        ProjectorOutcome {
            label: label.into(),
            vectors,
        }
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }
}

/// Projective observable over an ordered subset of qubits. Projectors are
/// represented by orthonormal spanning vectors, which makes them Hermitian
/// and idempotent by construction; mutual orthogonality across outcomes is
/// verified on construction.
#[derive(Debug, Clone)]
pub struct ProjectiveObservable {
    qubits: Vec<usize>,
    outcomes: Vec<ProjectorOutcome>,
}

impl ProjectiveObservable {
    pub fn new(qubits: Vec<usize>, outcomes: Vec<ProjectorOutcome>) -> Result<Self> {
        let dim = 1usize << qubits.len();
        let all: Vec<&Vec<Complex64>> = outcomes.iter().flat_map(|o| &o.vectors).collect();
        let mut deviation: f64 = 0.0;
        for (i, v) in all.iter().enumerate() {
            assert_eq!(v.len(), dim, "projector vector has wrong dimension");
            for (j, w) in all.iter().enumerate() {
                let dot: Complex64 = v.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum();
                let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
                deviation = deviation.max((dot - expected).norm());
            }
        }
        if deviation > ALGEBRAIC_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(ProjectiveObservable { qubits, outcomes })
    }

    /// Two-outcome observable from an orthonormal single-qubit ket pair.
    pub fn single_qubit(
        qubit: usize,
        ket0: &StateVector,
        ket1: &StateVector,
        label0: impl Into<String>,
        label1: impl Into<String>,
    ) -> Result<Self> {
        ProjectiveObservable::new(
            vec![qubit],
            vec![
                ProjectorOutcome::new(label0, vec![ket0.amplitudes().to_vec()]),
                ProjectorOutcome::new(label1, vec![ket1.amplitudes().to_vec()]),
            ],
        )
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn outcome_label(&self, index: usize) -> &str {
        &self.outcomes[index].label
    }

    pub fn n_outcomes(&self) -> usize {
        self.outcomes.len()
    }
}

/// Deterministic seeded random stream. Identical seeds reproduce identical
/// outcome sequences bit-exactly; the algorithm name is part of the public
/// contract and appears in serialized trial records.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha12Rng,
}

impl RngStream {
    pub const ALGORITHM: &'static str = "chacha12";

    pub fn new(seed: u64) -> Self {
        RngStream {
            seed,
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream; the derivation is a fixed function of
    /// (seed, index) so parallel trials stay reproducible.
    pub fn substream(&self, index: u64) -> RngStream {
        RngStream::new(derive_seed(self.seed, index))
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    /// Uniform in 0..n.
    pub fn pick(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn bit(&mut self) -> u8 {
        self.rng.random_range(0..2u8)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Per-trial seed schedule: seedᵢ = mix(seed, i).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

/// Haar-distributed 2×2 unitary: Gram-Schmidt orthonormalization of a complex
/// Ginibre matrix. The positive-real diagonal of the implicit R factor makes
/// the result exactly Haar.
pub fn haar_random_unitary(rng: &mut RngStream) -> SingleQubitUnitary {
    loop {
        let g = |rng: &mut RngStream| {
            Complex64::new(rng.standard_normal(), rng.standard_normal())
                / Complex64::from(std::f64::consts::SQRT_2)
        };
        let a = [g(rng), g(rng)];
        let b = [g(rng), g(rng)];
        let norm_a = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
        if norm_a < 1e-6 {
            continue;
        }
        let q1 = [a[0] / norm_a, a[1] / norm_a];
        let overlap = q1[0].conj() * b[0] + q1[1].conj() * b[1];
        let w = [b[0] - overlap * q1[0], b[1] - overlap * q1[1]];
        let norm_w = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
        if norm_w < 1e-6 {
            continue;
        }
        let q2 = [w[0] / norm_w, w[1] / norm_w];
        return SingleQubitUnitary::new([[q1[0], q2[0]], [q1[1], q2[1]]])
            .expect("Gram-Schmidt output is unitary");
    }
}

/// |⟨a|b⟩|².
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    a.fidelity(b)
}
