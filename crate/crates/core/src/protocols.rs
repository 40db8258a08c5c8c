//! Measurement procedures on a four-qubit logical block: the fixed-basis
//! protocol for the logical Z observable, the adaptive sequential protocol
//! for the logical X observable, and the direct two-projector collective
//! measurement used as the reference oracle.
//!
//! The classification table of the fixed-basis protocol and the
//! branch/leaf/verdict tables of the adaptive protocol are generated
//! numerically from the states' alternative expansions, not hand-transcribed:
//! each product-basis transcript carries nonzero amplitude for exactly one of
//! the two logical states, and the generator asserts that exclusivity.

use std::sync::OnceLock;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::sim::{ProjectiveObservable, ProjectorOutcome, RngStream, SingleQubitUnitary, StateVector};
use crate::states::{state, BasisId, BasisPair, StateName};

/// The two logical observables a player can measure on his block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogicalObservable {
    Z,
    X,
}

impl LogicalObservable {
    pub fn label(self) -> &'static str {
        match self {
            LogicalObservable::Z => "Z",
            LogicalObservable::X => "X",
        }
    }
}

/// One single-qubit measurement in a transcript.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub basis: BasisId,
    pub outcome: u8,
}

/// Result of a logical measurement: the binary answer plus the ordered
/// single-qubit transcript (empty for the collective oracle).
#[derive(Debug, Clone, Serialize)]
pub struct LogicalOutcome {
    pub answer: u8,
    pub transcript: Vec<MeasurementRecord>,
}

/// Transcript classification for the fixed (z, z, x, x) protocol: the
/// answer for each of the 16 transcripts, generated from the product-basis
/// expansions of the logical pair.
#[derive(Debug)]
pub struct ZClassification {
    answers: [u8; 16],
}

impl ZClassification {
    pub fn answer(&self, transcript_bits: usize) -> u8 {
        self.answers[transcript_bits]
    }

    /// Transcripts heralding each answer.
    pub fn support(&self, answer: u8) -> Vec<usize> {
        (0..16).filter(|&t| self.answers[t] == answer).collect()
    }
}

fn product_in_bases(ids: [BasisId; 4], bits: [u8; 4]) -> StateVector {
    let mut out = ids[0].pair().ket(bits[0]).clone();
    for i in 1..4 {
        out = out.tensor(ids[i].pair().ket(bits[i]));
    }
    out
}

pub fn z_classification() -> &'static ZClassification {
    static TABLE: OnceLock<ZClassification> = OnceLock::new();
    TABLE.get_or_init(|| {
        let phi0 = state(StateName::Phi0);
        let phi1 = state(StateName::Phi1);
        let mut answers = [u8::MAX; 16];
        let mut count0 = 0;
        for (t, answer) in answers.iter_mut().enumerate() {
            let bits = [
                ((t >> 3) & 1) as u8,
                ((t >> 2) & 1) as u8,
                ((t >> 1) & 1) as u8,
                (t & 1) as u8,
            ];
            let product = product_in_bases([BasisId::Z, BasisId::Z, BasisId::X, BasisId::X], bits);
            let a0 = product.inner(&phi0).unwrap().norm();
            let a1 = product.inner(&phi1).unwrap().norm();
            assert!(
                (a0 > 1e-9) != (a1 > 1e-9),
                "transcript {t:04b} must herald exactly one logical state"
            );
            if a0 > 1e-9 {
                *answer = 0;
                count0 += 1;
            } else {
                *answer = 1;
            }
        }
        assert_eq!(count0, 4, "four transcripts herald answer 0");
        ZClassification { answers }
    })
}

/// Adaptive protocol tables: first measure qubit 1 in z and qubit 2 in x;
/// the branch table picks the qubit-3 basis, the leaf table the qubit-4
/// basis, and the verdict table maps the full transcript to an answer.
#[derive(Debug)]
pub struct DecisionTree {
    branch: [[BasisId; 2]; 2],
    leaf: [[[BasisId; 2]; 2]; 2],
    verdict: [[[[u8; 2]; 2]; 2]; 2],
}

impl DecisionTree {
    pub fn qubit3_basis(&self, z: u8, x: u8) -> BasisId {
        self.branch[z as usize][x as usize]
    }

    pub fn qubit4_basis(&self, z: u8, x: u8, q3: u8) -> BasisId {
        self.leaf[z as usize][x as usize][q3 as usize]
    }

    pub fn answer(&self, z: u8, x: u8, q3: u8, q4: u8) -> u8 {
        self.verdict[z as usize][x as usize][q3 as usize][q4 as usize]
    }

    /// Readable table export for documentation and audit.
    pub fn to_json(&self) -> serde_json::Value {
        let mut branch = serde_json::Map::new();
        let mut leaf = serde_json::Map::new();
        let mut verdict = serde_json::Map::new();
        for z in 0..2u8 {
            for x in 0..2u8 {
                let b3 = self.qubit3_basis(z, x);
                branch.insert(format!("z{z} x{x}"), json!(b3.name().to_uppercase()));
                for q3 in 0..2u8 {
                    let b4 = self.qubit4_basis(z, x, q3);
                    leaf.insert(
                        format!("z{z} x{x} {}{q3}", b3.name()),
                        json!(b4.name().to_uppercase()),
                    );
                    for q4 in 0..2u8 {
                        verdict.insert(
                            format!("z{z} x{x} {}{q3} {}{q4}", b3.name(), b4.name()),
                            json!(format!("psi{}", self.answer(z, x, q3, q4))),
                        );
                    }
                }
            }
        }
        json!({ "branch": branch, "leaf": leaf, "verdict": verdict })
    }
}

pub fn decision_tree() -> &'static DecisionTree {
    static TREE: OnceLock<DecisionTree> = OnceLock::new();
    TREE.get_or_init(build_decision_tree)
}

type Qubit4Vector = [num_complex::Complex64; 2];

fn build_decision_tree() -> DecisionTree {
    let psi0 = state(StateName::Psi0);
    let psi1 = state(StateName::Psi1);
    let mut branch = [[BasisId::Z; 2]; 2];
    let mut leaf = [[[BasisId::Z; 2]; 2]; 2];
    let mut verdict = [[[[u8::MAX; 2]; 2]; 2]; 2];

    // Conditional qubit-4 vector (z-basis amplitudes) after observing
    // (z_i, x_j, t_k) on the first three qubits.
    let residual = |source: &StateVector, i: u8, j: u8, t: &StateVector| -> Qubit4Vector {
        let mut v = [num_complex::Complex64::ZERO; 2];
        for (l, slot) in v.iter_mut().enumerate() {
            let mut acc = num_complex::Complex64::ZERO;
            for m in 0..2u8 {
                let product = product_in_bases(
                    [BasisId::Z, BasisId::X, BasisId::Z, BasisId::Z],
                    [i, j, m, l as u8],
                );
                acc += t.amplitude(m as usize).conj() * product.inner(source).unwrap();
            }
            *slot = acc;
        }
        v
    };
    let norm = |v: &Qubit4Vector| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let dot =
        |a: &Qubit4Vector, b: &Qubit4Vector| a[0].conj() * b[0] + a[1].conj() * b[1];

    for i in 0..2u8 {
        for j in 0..2u8 {
            // The correct qubit-3 basis leaves orthogonal conditional states
            // on qubit 4; exactly one of the two candidates qualifies.
            let mut chosen: Option<(BasisId, Vec<(Qubit4Vector, Qubit4Vector)>)> = None;
            for candidate in [BasisId::A, BasisId::B] {
                let pair = candidate.pair();
                let mut conditionals = Vec::new();
                let mut valid = true;
                for k in 0..2u8 {
                    let v0 = residual(&psi0, i, j, pair.ket(k));
                    let v1 = residual(&psi1, i, j, pair.ket(k));
                    if norm(&v0) < 1e-9 || norm(&v1) < 1e-9 || dot(&v0, &v1).norm() > 1e-9 {
                        valid = false;
                        break;
                    }
                    conditionals.push((v0, v1));
                }
                if valid {
                    assert!(chosen.is_none(), "ambiguous qubit-3 basis at branch ({i},{j})");
                    chosen = Some((candidate, conditionals));
                }
            }
            let (basis3, conditionals) = chosen.expect("one qubit-3 basis must qualify");
            branch[i as usize][j as usize] = basis3;

            for (k, (v0, v1)) in conditionals.iter().enumerate() {
                // Qubit-4 basis: the named pair containing both conditional
                // states (up to phase).
                let mut found = None;
                for candidate in [BasisId::C, BasisId::D, BasisId::E, BasisId::F] {
                    let pair = candidate.pair();
                    for m0 in 0..2u8 {
                        let w0 = pair.ket(m0);
                        let w1 = pair.ket(1 - m0);
                        let f0 = dot(
                            &[w0.amplitude(0), w0.amplitude(1)],
                            v0,
                        )
                        .norm_sqr()
                            / (norm(v0) * norm(v0));
                        let f1 = dot(
                            &[w1.amplitude(0), w1.amplitude(1)],
                            v1,
                        )
                        .norm_sqr()
                            / (norm(v1) * norm(v1));
                        if f0 > 1.0 - 1e-9 && f1 > 1.0 - 1e-9 {
                            assert!(found.is_none(), "ambiguous qubit-4 basis");
                            found = Some((candidate, m0));
                        }
                    }
                }
                let (basis4, m0) = found.expect("one qubit-4 basis must match");
                leaf[i as usize][j as usize][k] = basis4;
                for l in 0..2u8 {
                    verdict[i as usize][j as usize][k][l as usize] =
                        if l == m0 { 0 } else { 1 };
                }
            }
        }
    }
    DecisionTree {
        branch,
        leaf,
        verdict,
    }
}

fn measure_in_basis(
    state: &StateVector,
    qubit: usize,
    pair: &BasisPair,
    rng: &mut RngStream,
) -> Result<(u8, StateVector)> {
    let (outcome, post) = state.measure(&pair.observable(qubit), rng)?;
    Ok((outcome as u8, post))
}

/// Measure the logical Z observable on the designated four-qubit block using
/// only fixed single-qubit measurements (z, z, x, x in block order).
pub fn measure_logical_z(
    state: &StateVector,
    block: &[usize; 4],
    rng: &mut RngStream,
) -> Result<(LogicalOutcome, StateVector)> {
    measure_logical_z_in_frame(state, block, &SingleQubitUnitary::identity(), rng)
}

/// Logical Z protocol with every measurement basis rotated into the player's
/// lab frame U. With the identity frame this is the plain protocol.
pub fn measure_logical_z_in_frame(
    state: &StateVector,
    block: &[usize; 4],
    frame: &SingleQubitUnitary,
    rng: &mut RngStream,
) -> Result<(LogicalOutcome, StateVector)> {
    let bases = [BasisId::Z, BasisId::Z, BasisId::X, BasisId::X];
    let mut current = state.clone();
    let mut transcript = Vec::with_capacity(4);
    let mut key = 0usize;
    for (&qubit, &basis) in block.iter().zip(bases.iter()) {
        let pair = basis.pair().rotated(frame);
        let (bit, post) = measure_in_basis(&current, qubit, &pair, rng)?;
        transcript.push(MeasurementRecord {
            qubit,
            basis,
            outcome: bit,
        });
        key = (key << 1) | bit as usize;
        current = post;
    }
    Ok((
        LogicalOutcome {
            answer: z_classification().answer(key),
            transcript,
        },
        current,
    ))
}

/// Measure the logical X observable on the designated block via the adaptive
/// sequential protocol: the qubit-3 and qubit-4 bases depend on the earlier
/// outcomes.
pub fn measure_logical_x(
    state: &StateVector,
    block: &[usize; 4],
    rng: &mut RngStream,
) -> Result<(LogicalOutcome, StateVector)> {
    measure_logical_x_in_frame(state, block, &SingleQubitUnitary::identity(), rng)
}

pub fn measure_logical_x_in_frame(
    state: &StateVector,
    block: &[usize; 4],
    frame: &SingleQubitUnitary,
    rng: &mut RngStream,
) -> Result<(LogicalOutcome, StateVector)> {
    let tree = decision_tree();
    let mut transcript = Vec::with_capacity(4);

    let (z_bit, s1) = measure_in_basis(state, block[0], &BasisId::Z.pair().rotated(frame), rng)?;
    transcript.push(MeasurementRecord {
        qubit: block[0],
        basis: BasisId::Z,
        outcome: z_bit,
    });
    let (x_bit, s2) = measure_in_basis(&s1, block[1], &BasisId::X.pair().rotated(frame), rng)?;
    transcript.push(MeasurementRecord {
        qubit: block[1],
        basis: BasisId::X,
        outcome: x_bit,
    });

    let basis3 = tree.qubit3_basis(z_bit, x_bit);
    let (q3_bit, s3) = measure_in_basis(&s2, block[2], &basis3.pair().rotated(frame), rng)?;
    transcript.push(MeasurementRecord {
        qubit: block[2],
        basis: basis3,
        outcome: q3_bit,
    });

    let basis4 = tree.qubit4_basis(z_bit, x_bit, q3_bit);
    let (q4_bit, s4) = measure_in_basis(&s3, block[3], &basis4.pair().rotated(frame), rng)?;
    transcript.push(MeasurementRecord {
        qubit: block[3],
        basis: basis4,
        outcome: q4_bit,
    });

    Ok((
        LogicalOutcome {
            answer: tree.answer(z_bit, x_bit, q3_bit, q4_bit),
            transcript,
        },
        s4,
    ))
}

/// Dispatch to the single-qubit protocol for the requested observable.
pub fn measure_logical(
    state: &StateVector,
    block: &[usize; 4],
    which: LogicalObservable,
    rng: &mut RngStream,
) -> Result<(LogicalOutcome, StateVector)> {
    match which {
        LogicalObservable::Z => measure_logical_z(state, block, rng),
        LogicalObservable::X => measure_logical_x(state, block, rng),
    }
}

/// Reference implementation: the collective two-projector measurement onto
/// the logical pair, performed directly on the block. The transcript is
/// empty because no single-qubit measurement happens.
pub fn measure_logical_oracle(
    state: &StateVector,
    block: &[usize; 4],
    which: LogicalObservable,
    rng: &mut RngStream,
) -> Result<(LogicalOutcome, StateVector)> {
    let (name0, name1) = match which {
        LogicalObservable::Z => (StateName::Phi0, StateName::Phi1),
        LogicalObservable::X => (StateName::Psi0, StateName::Psi1),
    };
    let s0 = crate::states::state(name0);
    let s1 = crate::states::state(name1);
    let obs = ProjectiveObservable::new(
        block.to_vec(),
        vec![
            ProjectorOutcome::new(name0.label(), vec![s0.amplitudes().to_vec()]),
            ProjectorOutcome::new(name1.label(), vec![s1.amplitudes().to_vec()]),
        ],
    )
    .expect("logical states are orthonormal");
    let (outcome, post) = state.measure(&obs, rng).map_err(|e| match e {
        Error::IncompleteMeasurement { total } => Error::OutsideLogicalSubspace {
            residual: (1.0 - total).abs(),
        },
        other => other,
    })?;
    Ok((
        LogicalOutcome {
            answer: outcome as u8,
            transcript: Vec::new(),
        },
        post,
    ))
}
