//! Canonical named states and measurement bases: the three-qubit GHZ pair,
//! the four-qubit rotationally invariant logical states, the twelve-qubit
//! shared resource built from them, and the identity/invariance verification
//! suites that pin every construction against its alternative expansion.
//!
//! All constants are computed from their radical expressions at double
//! precision; sign conventions of the derived measurement bases are kept
//! verbatim, including the leading minus signs.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sim::{haar_random_unitary, RngStream, SingleQubitUnitary, StateVector};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn im(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// Scalars of the adaptive discrimination protocol, derived from radicals.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProtocolConstants {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub u: f64,
}

pub fn constants() -> &'static ProtocolConstants {
    static CONSTANTS: OnceLock<ProtocolConstants> = OnceLock::new();
    CONSTANTS.get_or_init(|| {
        let alpha = (3.0 + 6.0f64.sqrt()).sqrt() / (2.0 * 6.0f64.sqrt());
        let beta = (3.0 - 6.0f64.sqrt()).sqrt() / (2.0 * 6.0f64.sqrt());
        let p = (2.0 - 2.0f64.sqrt()).sqrt() / 2.0;
        let q = (2.0 + 2.0f64.sqrt()).sqrt() / 2.0;
        ProtocolConstants {
            alpha,
            beta,
            p,
            q,
            r: (3.0 + 3.0f64.sqrt()) * q / (12.0 * alpha),
            s: (3.0 - 3.0f64.sqrt()) * q / (12.0 * beta),
            t: (3.0 - 3.0f64.sqrt()) * p / (12.0 * alpha),
            u: (3.0 + 3.0f64.sqrt()) * p / (12.0 * beta),
        }
    })
}

/// Named single-qubit measurement bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisId {
    Z,
    X,
    Y,
    A,
    B,
    C,
    D,
    E,
    F,
}

impl BasisId {
    pub const ALL: [BasisId; 9] = [
        BasisId::Z,
        BasisId::X,
        BasisId::Y,
        BasisId::A,
        BasisId::B,
        BasisId::C,
        BasisId::D,
        BasisId::E,
        BasisId::F,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BasisId::Z => "z",
            BasisId::X => "x",
            BasisId::Y => "y",
            BasisId::A => "a",
            BasisId::B => "b",
            BasisId::C => "c",
            BasisId::D => "d",
            BasisId::E => "e",
            BasisId::F => "f",
        }
    }

    pub fn pair(self) -> &'static BasisPair {
        static PAIRS: OnceLock<Vec<BasisPair>> = OnceLock::new();
        let pairs = PAIRS.get_or_init(|| BasisId::ALL.iter().map(|&id| BasisPair::build(id)).collect());
        &pairs[BasisId::ALL.iter().position(|&id| id == self).unwrap()]
    }
}

/// An orthonormal single-qubit ket pair {|k0⟩, |k1⟩}.
#[derive(Debug, Clone)]
pub struct BasisPair {
    pub id: BasisId,
    ket0: StateVector,
    ket1: StateVector,
}

impl BasisPair {
    fn build(id: BasisId) -> BasisPair {
        let k = constants();
        let h = FRAC_1_SQRT_2;
        let (k0, k1) = match id {
            BasisId::Z => ((re(1.0), re(0.0)), (re(0.0), re(1.0))),
            BasisId::X => ((re(h), re(h)), (re(h), re(-h))),
            BasisId::Y => ((re(h), im(h)), (re(h), im(-h))),
            BasisId::A => ((re(k.p), re(k.q)), (re(k.q), re(-k.p))),
            BasisId::B => ((re(-k.p), re(k.q)), (re(k.q), re(k.p))),
            BasisId::C => ((re(-k.r), re(k.s)), (re(-k.s), re(-k.r))),
            BasisId::D => ((re(k.t), re(k.u)), (re(k.u), re(-k.t))),
            BasisId::E => ((re(k.r), re(k.s)), (re(k.s), re(-k.r))),
            BasisId::F => ((re(-k.t), re(k.u)), (re(k.u), re(k.t))),
        };
        BasisPair {
            id,
            ket0: StateVector::single_qubit(k0.0, k0.1).expect("unit ket"),
            ket1: StateVector::single_qubit(k1.0, k1.1).expect("unit ket"),
        }
    }

    pub fn ket(&self, bit: u8) -> &StateVector {
        match bit {
            0 => &self.ket0,
            _ => &self.ket1,
        }
    }

    /// The same basis expressed in a rotated lab frame: {U|k0⟩, U|k1⟩}.
    pub fn rotated(&self, frame: &SingleQubitUnitary) -> BasisPair {
        BasisPair {
            id: self.id,
            ket0: frame.apply(&self.ket0),
            ket1: frame.apply(&self.ket1),
        }
    }

    /// Two-outcome projective observable measuring this basis on `qubit`.
    pub fn observable(&self, qubit: usize) -> crate::sim::ProjectiveObservable {
        crate::sim::ProjectiveObservable::single_qubit(
            qubit,
            &self.ket0,
            &self.ket1,
            format!("{}0", self.id.name()),
            format!("{}1", self.id.name()),
        )
        .expect("basis kets are orthonormal")
    }
}

/// The canonical constructed states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateName {
    Ghz,
    GhzPerp,
    Phi0,
    Phi1,
    Psi0,
    Psi1,
    Eta0,
    Eta1,
    Psi12,
}

impl StateName {
    pub const ALL: [StateName; 9] = [
        StateName::Ghz,
        StateName::GhzPerp,
        StateName::Phi0,
        StateName::Phi1,
        StateName::Psi0,
        StateName::Psi1,
        StateName::Eta0,
        StateName::Eta1,
        StateName::Psi12,
    ];

    pub fn label(self) -> &'static str {
        match self {
            StateName::Ghz => "ghz",
            StateName::GhzPerp => "ghz_perp",
            StateName::Phi0 => "phi0",
            StateName::Phi1 => "phi1",
            StateName::Psi0 => "psi0",
            StateName::Psi1 => "psi1",
            StateName::Eta0 => "eta0",
            StateName::Eta1 => "eta1",
            StateName::Psi12 => "psi12",
        }
    }

    pub fn parse(name: &str) -> Result<StateName> {
        StateName::ALL
            .iter()
            .copied()
            .find(|n| n.label() == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }
}

/// A named state together with its vector.
#[derive(Debug, Clone)]
pub struct NamedState {
    pub name: StateName,
    pub state: StateVector,
}

struct Catalog {
    states: Vec<StateVector>,
}

fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let half = re(0.5);
        let zk = |bit: u8| BasisId::Z.pair().ket(bit).clone();
        let z = |bits: [u8; 4]| {
            zk(bits[0]).tensor(&zk(bits[1])).tensor(&zk(bits[2])).tensor(&zk(bits[3]))
        };

        let phi0 = StateVector::linear_combination(&[
            (half, &z([0, 1, 0, 1])),
            (-half, &z([0, 1, 1, 0])),
            (-half, &z([1, 0, 0, 1])),
            (half, &z([1, 0, 1, 0])),
        ])
        .expect("unit norm");
        let third = re(1.0 / (2.0 * 3.0f64.sqrt()));
        let phi1 = StateVector::linear_combination(&[
            (2.0 * third, &z([0, 0, 1, 1])),
            (-third, &z([0, 1, 0, 1])),
            (-third, &z([0, 1, 1, 0])),
            (-third, &z([1, 0, 0, 1])),
            (-third, &z([1, 0, 1, 0])),
            (2.0 * third, &z([1, 1, 0, 0])),
        ])
        .expect("unit norm");

        let h = re(FRAC_1_SQRT_2);
        let ih = im(FRAC_1_SQRT_2);
        let psi0 = StateVector::linear_combination(&[(h, &phi0), (h, &phi1)]).unwrap();
        let psi1 = StateVector::linear_combination(&[(h, &phi0), (-h, &phi1)]).unwrap();
        let eta0 = StateVector::linear_combination(&[(h, &phi0), (ih, &phi1)]).unwrap();
        let eta1 = StateVector::linear_combination(&[(h, &phi0), (-ih, &phi1)]).unwrap();

        let psi12 = StateVector::linear_combination(&[
            (h, &eta0.tensor(&eta0).tensor(&eta0)),
            (h, &eta1.tensor(&eta1).tensor(&eta1)),
        ])
        .unwrap();

        let yk = |bit: u8| BasisId::Y.pair().ket(bit).clone();
        let ghz = StateVector::linear_combination(&[
            (h, &yk(0).tensor(&yk(0)).tensor(&yk(0))),
            (h, &yk(1).tensor(&yk(1)).tensor(&yk(1))),
        ])
        .unwrap();
        let zb = |bits: usize| StateVector::basis_state(3, bits);
        let ih2 = im(0.5);
        let ghz_perp = StateVector::linear_combination(&[
            (ih2, &zb(0b001)),
            (ih2, &zb(0b010)),
            (ih2, &zb(0b100)),
            (-ih2, &zb(0b111)),
        ])
        .unwrap();

        Catalog {
            states: vec![ghz, ghz_perp, phi0, phi1, psi0, psi1, eta0, eta1, psi12],
        }
    })
}

/// Construct a canonical state by name (cached).
pub fn make_named(name: StateName) -> NamedState {
    let idx = StateName::ALL.iter().position(|&n| n == name).unwrap();
    NamedState {
        name,
        state: catalog().states[idx].clone(),
    }
}

/// Shorthand for the state vector of a canonical state.
pub fn state(name: StateName) -> StateVector {
    make_named(name).state
}

/// The twelve-qubit state rebuilt from its logical z-basis expansion, used as
/// an independent cross-check of the product-form construction.
pub fn psi12_from_logical_expansion() -> StateVector {
    let phi0 = state(StateName::Phi0);
    let phi1 = state(StateName::Phi1);
    let half = re(0.5);
    StateVector::linear_combination(&[
        (half, &phi0.tensor(&phi0).tensor(&phi0)),
        (-half, &phi0.tensor(&phi1).tensor(&phi1)),
        (-half, &phi1.tensor(&phi0).tensor(&phi1)),
        (-half, &phi1.tensor(&phi1).tensor(&phi0)),
    ])
    .expect("unit norm")
}

/// Outcome of a single identity check.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub fidelity: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub tolerance: f64,
    pub identities: Vec<IdentityCheck>,
    pub all_pass: bool,
}

const DECOMPOSITION_TOL: f64 = 1e-10;

/// Check the eight alternative expansions of the GHZ state and of the
/// twelve-qubit state against their product-form constructions.
pub fn verify_decompositions() -> DecompositionReport {
    verify_decompositions_impl(false)
}

/// Same checks with one sign deliberately flipped; used as a self-test that
/// the checker can fail.
pub fn verify_decompositions_corrupted() -> DecompositionReport {
    verify_decompositions_impl(true)
}

fn verify_decompositions_impl(corrupt: bool) -> DecompositionReport {
    let half = re(0.5);
    let flip = if corrupt { -half } else { half };

    let k = |id: BasisId, bit: u8| id.pair().ket(bit).clone();
    let prod3 = |ids: [BasisId; 3], bits: [u8; 3]| {
        k(ids[0], bits[0]).tensor(&k(ids[1], bits[1])).tensor(&k(ids[2], bits[2]))
    };
    use BasisId::{X, Z};
    let ghz = state(StateName::Ghz);

    let s = |n: StateName| state(n);
    let lp = |names: [StateName; 3]| s(names[0]).tensor(&s(names[1])).tensor(&s(names[2]));
    use StateName::{Phi0, Phi1, Psi0, Psi1};
    let psi12 = state(StateName::Psi12);

    type Expansion = Vec<(Complex64, StateVector)>;
    let combos: Vec<(&str, &StateVector, Expansion)> = vec![
        (
            "ghz_zzz",
            &ghz,
            vec![
                (flip, prod3([Z, Z, Z], [0, 0, 0])),
                (-half, prod3([Z, Z, Z], [0, 1, 1])),
                (-half, prod3([Z, Z, Z], [1, 0, 1])),
                (-half, prod3([Z, Z, Z], [1, 1, 0])),
            ],
        ),
        (
            "ghz_zxx",
            &ghz,
            vec![
                (half, prod3([Z, X, X], [0, 0, 1])),
                (half, prod3([Z, X, X], [0, 1, 0])),
                (-half, prod3([Z, X, X], [1, 0, 0])),
                (half, prod3([Z, X, X], [1, 1, 1])),
            ],
        ),
        (
            "ghz_xzx",
            &ghz,
            vec![
                (half, prod3([X, Z, X], [0, 0, 1])),
                (-half, prod3([X, Z, X], [0, 1, 0])),
                (half, prod3([X, Z, X], [1, 0, 0])),
                (half, prod3([X, Z, X], [1, 1, 1])),
            ],
        ),
        (
            "ghz_xxz",
            &ghz,
            vec![
                (-half, prod3([X, X, Z], [0, 0, 1])),
                (half, prod3([X, X, Z], [0, 1, 0])),
                (half, prod3([X, X, Z], [1, 0, 0])),
                (half, prod3([X, X, Z], [1, 1, 1])),
            ],
        ),
        (
            "psi12_zzz",
            &psi12,
            vec![
                (half, lp([Phi0, Phi0, Phi0])),
                (-half, lp([Phi0, Phi1, Phi1])),
                (-half, lp([Phi1, Phi0, Phi1])),
                (-half, lp([Phi1, Phi1, Phi0])),
            ],
        ),
        (
            "psi12_zxx",
            &psi12,
            vec![
                (half, lp([Phi0, Psi0, Psi1])),
                (half, lp([Phi0, Psi1, Psi0])),
                (-half, lp([Phi1, Psi0, Psi0])),
                (half, lp([Phi1, Psi1, Psi1])),
            ],
        ),
        (
            "psi12_xzx",
            &psi12,
            vec![
                (half, lp([Psi0, Phi0, Psi1])),
                (-half, lp([Psi0, Phi1, Psi0])),
                (half, lp([Psi1, Phi0, Psi0])),
                (half, lp([Psi1, Phi1, Psi1])),
            ],
        ),
        (
            "psi12_xxz",
            &psi12,
            vec![
                (-half, lp([Psi0, Psi0, Phi1])),
                (half, lp([Psi0, Psi1, Phi0])),
                (half, lp([Psi1, Psi0, Phi0])),
                (half, lp([Psi1, Psi1, Phi1])),
            ],
        ),
    ];

    let identities: Vec<IdentityCheck> = combos
        .into_iter()
        .map(|(name, lhs, terms)| {
            let refs: Vec<(Complex64, &StateVector)> =
                terms.iter().map(|(c, s)| (*c, s)).collect();
            let rhs = StateVector::linear_combination(&refs).expect("expansion is normalized");
            let fidelity = lhs.fidelity(&rhs).expect("same dimension");
            IdentityCheck {
                name: name.to_string(),
                fidelity,
                pass: fidelity >= 1.0 - DECOMPOSITION_TOL,
            }
        })
        .collect();
    let all_pass = identities.iter().all(|c| c.pass);
    DecompositionReport {
        tolerance: DECOMPOSITION_TOL,
        identities,
        all_pass,
    }
}

/// The four-qubit logical pair expanded in the (z, z, x, x) product basis.
pub fn phi_zzxx_expansion(which: u8) -> StateVector {
    let k = |id: BasisId, bit: u8| id.pair().ket(bit).clone();
    let p4 = |bits: [u8; 4]| {
        k(BasisId::Z, bits[0])
            .tensor(&k(BasisId::Z, bits[1]))
            .tensor(&k(BasisId::X, bits[2]))
            .tensor(&k(BasisId::X, bits[3]))
    };
    if which == 0 {
        let half = re(0.5);
        StateVector::linear_combination(&[
            (-half, &p4([0, 1, 0, 1])),
            (half, &p4([0, 1, 1, 0])),
            (half, &p4([1, 0, 0, 1])),
            (-half, &p4([1, 0, 1, 0])),
        ])
        .unwrap()
    } else {
        let c = re(1.0 / (2.0 * 3.0f64.sqrt()));
        let terms: [(f64, [u8; 4]); 12] = [
            (1.0, [0, 0, 0, 0]),
            (-1.0, [0, 0, 0, 1]),
            (-1.0, [0, 0, 1, 0]),
            (1.0, [0, 0, 1, 1]),
            (-1.0, [0, 1, 0, 0]),
            (1.0, [0, 1, 1, 1]),
            (-1.0, [1, 0, 0, 0]),
            (1.0, [1, 0, 1, 1]),
            (1.0, [1, 1, 0, 0]),
            (1.0, [1, 1, 0, 1]),
            (1.0, [1, 1, 1, 0]),
            (1.0, [1, 1, 1, 1]),
        ];
        let states: Vec<StateVector> = terms.iter().map(|(_, b)| p4(*b)).collect();
        let refs: Vec<(Complex64, &StateVector)> = terms
            .iter()
            .zip(&states)
            .map(|((sign, _), s)| (re(*sign) * c, s))
            .collect();
        StateVector::linear_combination(&refs).unwrap()
    }
}

/// The adaptive-protocol expansion of ψ0/ψ1 over the sequential bases
/// (z, x, {a,b}, {c,d,e,f}).
pub fn psi_sequential_expansion(which: u8) -> StateVector {
    let k = |id: BasisId, bit: u8| id.pair().ket(bit).clone();
    let p4 = |ids: [BasisId; 4], bits: [u8; 4]| {
        k(ids[0], bits[0])
            .tensor(&k(ids[1], bits[1]))
            .tensor(&k(ids[2], bits[2]))
            .tensor(&k(ids[3], bits[3]))
    };
    use BasisId::{A, B, C, D, E, F, X, Z};
    let cs = constants();
    let (al, be) = (re(cs.alpha), re(cs.beta));
    let terms: Vec<(Complex64, StateVector)> = if which == 0 {
        vec![
            (al, p4([Z, X, A, C], [0, 0, 0, 0])),
            (be, p4([Z, X, A, D], [0, 0, 1, 1])),
            (al, p4([Z, X, B, E], [0, 1, 0, 0])),
            (be, p4([Z, X, B, F], [0, 1, 1, 1])),
            (be, p4([Z, X, B, F], [1, 0, 0, 0])),
            (al, p4([Z, X, B, E], [1, 0, 1, 1])),
            (-be, p4([Z, X, A, D], [1, 1, 0, 0])),
            (al, p4([Z, X, A, C], [1, 1, 1, 1])),
        ]
    } else {
        vec![
            (be, p4([Z, X, A, C], [0, 0, 0, 1])),
            (al, p4([Z, X, A, D], [0, 0, 1, 0])),
            (be, p4([Z, X, B, E], [0, 1, 0, 1])),
            (-al, p4([Z, X, B, F], [0, 1, 1, 0])),
            (al, p4([Z, X, B, F], [1, 0, 0, 1])),
            (-be, p4([Z, X, B, E], [1, 0, 1, 0])),
            (al, p4([Z, X, A, D], [1, 1, 0, 1])),
            (-be, p4([Z, X, A, C], [1, 1, 1, 0])),
        ]
    };
    let refs: Vec<(Complex64, &StateVector)> = terms.iter().map(|(c, s)| (*c, s)).collect();
    StateVector::linear_combination(&refs).expect("expansion is normalized")
}

/// Invariance sweep outcome.
#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub state: String,
    pub trials: usize,
    pub min_fidelity: f64,
    pub tolerance: f64,
    pub all_pass: bool,
    pub seed: u64,
}

/// Verify that a four-qubit logical state is unchanged (up to phase) by U⊗4
/// for Haar-random U.
pub fn verify_u4_invariance(
    name: StateName,
    trials: usize,
    rng: &mut RngStream,
) -> Result<InvarianceReport> {
    if !matches!(
        name,
        StateName::Phi0 | StateName::Phi1 | StateName::Psi0 | StateName::Psi1
    ) {
        return Err(Error::NotLogicalState(name.label().to_string()));
    }
    let seed = rng.seed();
    let original = state(name);
    let tolerance = 1e-10;
    let mut min_fidelity = f64::INFINITY;
    for _ in 0..trials {
        let u = haar_random_unitary(rng);
        let mut rotated = original.clone();
        for qubit in 0..4 {
            rotated = rotated.apply_local(&u, qubit)?;
        }
        min_fidelity = min_fidelity.min(rotated.fidelity(&original)?);
    }
    Ok(InvarianceReport {
        state: name.label().to_string(),
        trials,
        min_fidelity,
        tolerance,
        all_pass: min_fidelity >= 1.0 - tolerance,
        seed,
    })
}

/// Verify that the twelve-qubit state is unchanged by independent fourfold
/// rotations of the three blocks.
pub fn verify_psi12_invariance(trials: usize, rng: &mut RngStream) -> InvarianceReport {
    let seed = rng.seed();
    let original = state(StateName::Psi12);
    let tolerance = 1e-9;
    let mut min_fidelity = f64::INFINITY;
    for _ in 0..trials {
        let mut rotated = original.clone();
        for block in 0..3 {
            let u = haar_random_unitary(rng);
            for offset in 0..4 {
                rotated = rotated
                    .apply_local(&u, block * 4 + offset)
                    .expect("in range");
            }
        }
        min_fidelity = min_fidelity.min(rotated.fidelity(&original).expect("same size"));
    }
    InvarianceReport {
        state: StateName::Psi12.label().to_string(),
        trials,
        min_fidelity,
        tolerance,
        all_pass: min_fidelity >= 1.0 - tolerance,
        seed,
    }
}

/// Numeric checks on the protocol constants and derived bases.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub four_alpha_beta: f64,
    pub pq_norm: f64,
    pub rs_norm: f64,
    pub tu_norm: f64,
    pub max_basis_deviation: f64,
    pub all_pass: bool,
}

pub fn verify_constants() -> ConstantsReport {
    let k = constants();
    let four_alpha_beta = 4.0 * (k.alpha * k.alpha + k.beta * k.beta);
    let pq_norm = k.p * k.p + k.q * k.q;
    let rs_norm = k.r * k.r + k.s * k.s;
    let tu_norm = k.t * k.t + k.u * k.u;
    // orthonormality of every named basis pair
    let mut max_basis_deviation: f64 = 0.0;
    for id in BasisId::ALL {
        let pair = id.pair();
        let overlap = pair.ket(0).inner(pair.ket(1)).unwrap().norm();
        let n0 = (pair.ket(0).norm_sqr() - 1.0).abs();
        let n1 = (pair.ket(1).norm_sqr() - 1.0).abs();
        max_basis_deviation = max_basis_deviation.max(overlap).max(n0).max(n1);
    }
    let all_pass = (four_alpha_beta - 1.0).abs() <= 1e-14
        && (pq_norm - 1.0).abs() <= 1e-12
        && (rs_norm - 1.0).abs() <= 1e-12
        && (tu_norm - 1.0).abs() <= 1e-12
        && max_basis_deviation <= 1e-12;
    ConstantsReport {
        four_alpha_beta,
        pq_norm,
        rs_norm,
        tu_norm,
        max_basis_deviation,
        all_pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::ALGEBRAIC_TOL;

    #[test]
    fn constants_satisfy_their_radical_relations() {
        let report = verify_constants();
        assert!(report.all_pass, "{report:?}");
        assert!((report.four_alpha_beta - 1.0).abs() < 1e-14);
    }

    #[test]
    fn named_states_are_normalized_and_orthogonal_in_pairs() {
        for name in StateName::ALL {
            let s = state(name);
            assert!((s.norm_sqr() - 1.0).abs() < ALGEBRAIC_TOL, "{name:?}");
        }
        let pairs = [
            (StateName::Ghz, StateName::GhzPerp),
            (StateName::Phi0, StateName::Phi1),
            (StateName::Psi0, StateName::Psi1),
            (StateName::Eta0, StateName::Eta1),
        ];
        for (a, b) in pairs {
            let f = state(a).fidelity(&state(b)).unwrap();
            assert!(f < ALGEBRAIC_TOL, "{a:?} vs {b:?}: {f}");
        }
    }

    #[test]
    fn phi_amplitudes_match_their_expansions() {
        // phi0 at |z0,z1,z0,z1⟩ and phi1 at |z0,z0,z1,z1⟩
        let phi0 = state(StateName::Phi0);
        assert!((phi0.amplitude(0b0101).re - 0.5).abs() < ALGEBRAIC_TOL);
        assert!(phi0.amplitude(0b0101).im.abs() < ALGEBRAIC_TOL);
        let phi1 = state(StateName::Phi1);
        assert!((phi1.amplitude(0b0011).re - 1.0 / 3.0f64.sqrt()).abs() < ALGEBRAIC_TOL);
    }

    #[test]
    fn psi_and_eta_relations_hold_amplitude_wise() {
        let phi0 = state(StateName::Phi0);
        let phi1 = state(StateName::Phi1);
        let h = FRAC_1_SQRT_2;
        let cases = [
            (StateName::Psi0, re(h), re(h)),
            (StateName::Psi1, re(h), re(-h)),
            (StateName::Eta0, re(h), im(h)),
            (StateName::Eta1, re(h), im(-h)),
        ];
        for (name, c0, c1) in cases {
            let s = state(name);
            for i in 0..s.dim() {
                let expected = c0 * phi0.amplitude(i) + c1 * phi1.amplitude(i);
                assert!(
                    (s.amplitude(i) - expected).norm() < ALGEBRAIC_TOL,
                    "{name:?} amp {i}"
                );
            }
        }
    }

    #[test]
    fn psi12_routes_agree_and_share_support() {
        let via_eta = state(StateName::Psi12);
        let via_logical = psi12_from_logical_expansion();
        let f = via_eta.fidelity(&via_logical).unwrap();
        assert!(f > 1.0 - ALGEBRAIC_TOL, "fidelity {f}");
        let support = |s: &StateVector| {
            (0..s.dim())
                .filter(|&i| s.amplitude(i).norm() > 1e-12)
                .collect::<Vec<_>>()
        };
        assert_eq!(support(&via_eta), support(&via_logical));
    }

    #[test]
    fn decomposition_identities_all_pass() {
        let report = verify_decompositions();
        assert_eq!(report.identities.len(), 8);
        for check in &report.identities {
            assert!(check.pass, "{} fidelity {}", check.name, check.fidelity);
        }
        assert!(report.all_pass);
    }

    #[test]
    fn corrupted_decomposition_fails_with_quarter_fidelity() {
        let report = verify_decompositions_corrupted();
        assert!(!report.all_pass);
        let corrupted = &report.identities[0];
        assert!((corrupted.fidelity - 0.25).abs() < 1e-10, "{}", corrupted.fidelity);
        // only the corrupted identity fails
        assert_eq!(report.identities.iter().filter(|c| !c.pass).count(), 1);
    }

    #[test]
    fn zzxx_expansion_reproduces_the_logical_pair() {
        for which in [0u8, 1] {
            let name = if which == 0 { StateName::Phi0 } else { StateName::Phi1 };
            let f = phi_zzxx_expansion(which).fidelity(&state(name)).unwrap();
            assert!(f > 1.0 - 1e-12, "{name:?}: {f}");
        }
    }

    #[test]
    fn sequential_expansion_reproduces_the_psi_pair() {
        for which in [0u8, 1] {
            let name = if which == 0 { StateName::Psi0 } else { StateName::Psi1 };
            let f = psi_sequential_expansion(which).fidelity(&state(name)).unwrap();
            assert!(f > 1.0 - 1e-10, "{name:?}: {f}");
        }
    }

    #[test]
    fn ghz_is_orthogonal_to_its_partner() {
        let f = state(StateName::Ghz).fidelity(&state(StateName::GhzPerp)).unwrap();
        assert!(f < ALGEBRAIC_TOL);
    }

    #[test]
    fn u4_invariance_holds_for_logical_states() {
        for name in [StateName::Phi0, StateName::Phi1, StateName::Psi0, StateName::Psi1] {
            let mut rng = RngStream::new(101);
            let report = verify_u4_invariance(name, 100, &mut rng).unwrap();
            assert!(report.all_pass, "{name:?}: min {}", report.min_fidelity);
        }
    }

    #[test]
    fn u4_invariance_rejects_non_logical_states() {
        let mut rng = RngStream::new(3);
        assert!(matches!(
            verify_u4_invariance(StateName::Ghz, 1, &mut rng),
            Err(Error::NotLogicalState(_))
        ));
    }

    #[test]
    fn unequal_fourth_unitary_breaks_invariance() {
        let mut rng = RngStream::new(404);
        let u = haar_random_unitary(&mut rng);
        let v = haar_random_unitary(&mut rng);
        let phi0 = state(StateName::Phi0);
        let mut rotated = phi0.clone();
        for qubit in 0..3 {
            rotated = rotated.apply_local(&u, qubit).unwrap();
        }
        rotated = rotated.apply_local(&v, 3).unwrap();
        let f = rotated.fidelity(&phi0).unwrap();
        assert!(f < 0.999, "negative control fidelity {f}");
    }

    #[test]
    fn psi12_invariance_under_blockwise_rotations() {
        let mut rng = RngStream::new(2718);
        let report = verify_psi12_invariance(50, &mut rng);
        assert!(report.all_pass, "min fidelity {}", report.min_fidelity);
        // identity rotations leave it exactly unchanged
        let s = state(StateName::Psi12);
        assert!((s.fidelity(&s).unwrap() - 1.0).abs() < ALGEBRAIC_TOL);
    }

    #[test]
    fn partial_block_rotation_breaks_psi12_invariance() {
        let mut rng = RngStream::new(515);
        let u = haar_random_unitary(&mut rng);
        let psi12 = state(StateName::Psi12);
        let mut rotated = psi12.clone();
        for qubit in 0..3 {
            // malformed block rotation: only three of the four qubits
            rotated = rotated.apply_local(&u, qubit).unwrap();
        }
        let f = rotated.fidelity(&psi12).unwrap();
        assert!(f < 0.999, "negative control fidelity {f}");
    }

    #[test]
    fn unknown_state_name_is_rejected() {
        assert!(matches!(
            StateName::parse("banana"),
            Err(Error::UnknownState(_))
        ));
        assert_eq!(StateName::parse("psi12").unwrap(), StateName::Psi12);
    }
}
