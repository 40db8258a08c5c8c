//! The three-player question game: referee, win rule, classical strategies
//! with the exact brute-force bound, the GHZ shared-frame strategy, the
//! twelve-qubit frame-free strategy, the frame-scrambling adversary, and the
//! hidden-variable impossibility check.

use serde::Serialize;

use crate::error::Result;
use crate::protocols::{measure_logical, LogicalObservable, LogicalOutcome};
use crate::sim::{haar_random_unitary, RngStream};
use crate::states::{state, BasisId, StateName};

/// A question posed to one player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Question {
    Z,
    X,
}

/// The legal question combinations: all three players get Z, or exactly one
/// does and the other two get X.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum QuestionSet {
    Zzz,
    Zxx,
    Xzx,
    Xxz,
}

impl QuestionSet {
    pub const ALL: [QuestionSet; 4] = [
        QuestionSet::Zzz,
        QuestionSet::Zxx,
        QuestionSet::Xzx,
        QuestionSet::Xxz,
    ];

    pub fn questions(self) -> [Question; 3] {
        use Question::{X, Z};
        match self {
            QuestionSet::Zzz => [Z, Z, Z],
            QuestionSet::Zxx => [Z, X, X],
            QuestionSet::Xzx => [X, Z, X],
            QuestionSet::Xxz => [X, X, Z],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            QuestionSet::Zzz => "ZZZ",
            QuestionSet::Zxx => "ZXX",
            QuestionSet::Xzx => "XZX",
            QuestionSet::Xxz => "XXZ",
        }
    }

    pub fn is_all_z(self) -> bool {
        self == QuestionSet::Zzz
    }
}

/// Draw a question set uniformly from the four legal combinations.
pub fn referee_draw(rng: &mut RngStream) -> QuestionSet {
    QuestionSet::ALL[rng.pick(4)]
}

/// The win rule: with three Z questions the number of 0 answers must be odd;
/// with one Z and two X questions it must be even.
pub fn win_rule(questions: QuestionSet, answers: &[u8; 3]) -> bool {
    let zeros = answers.iter().filter(|&&a| a == 0).count();
    if questions.is_all_z() {
        zeros % 2 == 1
    } else {
        zeros % 2 == 0
    }
}

/// A deterministic classical strategy: each player fixes an answer for each
/// question in advance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassicalStrategy {
    /// Per player: (answer to Z, answer to X).
    pub choices: [(u8, u8); 3],
}

impl ClassicalStrategy {
    pub fn answer(&self, player: usize, question: Question) -> u8 {
        match question {
            Question::Z => self.choices[player].0,
            Question::X => self.choices[player].1,
        }
    }

    /// The simple strategy: always answer 1 to Z and 0 to X.
    pub fn best_simple() -> Self {
        ClassicalStrategy {
            choices: [(1, 0); 3],
        }
    }

    /// All 64 deterministic joint strategies.
    pub fn enumerate() -> Vec<ClassicalStrategy> {
        (0..64u8)
            .map(|code| {
                let pick = |i: usize| {
                    let bits = (code >> (2 * i)) & 0b11;
                    (bits >> 1, bits & 1)
                };
                ClassicalStrategy {
                    choices: [pick(0), pick(1), pick(2)],
                }
            })
            .collect()
    }

    /// Exact number of won question sets (out of four).
    pub fn exact_wins(&self) -> u32 {
        QuestionSet::ALL
            .iter()
            .filter(|&&qs| {
                let questions = qs.questions();
                let answers = [
                    self.answer(0, questions[0]),
                    self.answer(1, questions[1]),
                    self.answer(2, questions[2]),
                ];
                win_rule(qs, &answers)
            })
            .count() as u32
    }
}

/// Exact classical bound: the maximum win count over the uniform question
/// set among all 64 deterministic strategies, with every maximizer. Shared
/// randomness is a convex mixture of deterministic strategies, so it cannot
/// exceed this maximum.
#[derive(Debug, Clone, Serialize)]
pub struct ClassicalBoundReport {
    pub max_wins: u32,
    pub question_count: u32,
    pub maximizers: Vec<ClassicalStrategy>,
}

impl ClassicalBoundReport {
    pub fn probability(&self) -> f64 {
        self.max_wins as f64 / self.question_count as f64
    }
}

pub fn classical_bound_bruteforce() -> ClassicalBoundReport {
    let mut max_wins = 0;
    let mut maximizers = Vec::new();
    for strategy in ClassicalStrategy::enumerate() {
        let wins = strategy.exact_wins();
        match wins.cmp(&max_wins) {
            std::cmp::Ordering::Greater => {
                max_wins = wins;
                maximizers = vec![strategy];
            }
            std::cmp::Ordering::Equal => maximizers.push(strategy),
            std::cmp::Ordering::Less => {}
        }
    }
    ClassicalBoundReport {
        max_wins,
        question_count: 4,
        maximizers,
    }
}

/// How the adversary disorients players: not at all, one player, or all
/// three. Disorientation is a Haar-random rotation of the player's whole
/// lab, i.e. one unitary applied to every physical qubit he holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryMode {
    None,
    ScrambleOne,
    ScrambleAll,
}

impl AdversaryMode {
    pub fn label(self) -> &'static str {
        match self {
            AdversaryMode::None => "none",
            AdversaryMode::ScrambleOne => "scramble-one",
            AdversaryMode::ScrambleAll => "scramble-all",
        }
    }

    /// Which players get scrambled this trial.
    fn targets(self, rng: &mut RngStream) -> Vec<usize> {
        match self {
            AdversaryMode::None => Vec::new(),
            AdversaryMode::ScrambleOne => vec![rng.pick(3)],
            AdversaryMode::ScrambleAll => vec![0, 1, 2],
        }
    }
}

/// One complete game round.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub questions: QuestionSet,
    pub answers: [u8; 3],
    pub win: bool,
    pub strategy: &'static str,
    pub adversary: AdversaryMode,
    pub seed: u64,
    pub rng_algorithm: &'static str,
}

fn record(
    questions: QuestionSet,
    answers: [u8; 3],
    strategy: &'static str,
    adversary: AdversaryMode,
    seed: u64,
) -> TrialRecord {
    TrialRecord {
        questions,
        answers,
        win: win_rule(questions, &answers),
        strategy,
        adversary,
        seed,
        rng_algorithm: RngStream::ALGORITHM,
    }
}

/// Play one round with a deterministic classical strategy.
pub fn play_classical(questions: QuestionSet, strategy: &ClassicalStrategy) -> TrialRecord {
    let qs = questions.questions();
    let answers = [
        strategy.answer(0, qs[0]),
        strategy.answer(1, qs[1]),
        strategy.answer(2, qs[2]),
    ];
    record(questions, answers, "classical-best", AdversaryMode::None, 0)
}

/// Play one round of the shared-frame strategy: each player holds one qubit
/// of the GHZ triple and measures z or x on it.
pub fn play_ghz(
    questions: QuestionSet,
    rng: &mut RngStream,
    adversary: AdversaryMode,
) -> TrialRecord {
    let seed = rng.seed();
    // Separate streams keep the measurement randomness independent of how
    // many unitaries the adversary draws.
    let mut adversary_rng = rng.substream(1);
    let mut measure_rng = rng.substream(2);

    let mut shared = state(StateName::Ghz);
    for player in adversary.targets(&mut adversary_rng) {
        let u = haar_random_unitary(&mut adversary_rng);
        shared = shared.apply_local(&u, player).expect("in range");
    }

    let qs = questions.questions();
    let mut answers = [0u8; 3];
    for player in 0..3 {
        let basis = match qs[player] {
            Question::Z => BasisId::Z,
            Question::X => BasisId::X,
        };
        let (outcome, post) = shared
            .measure(&basis.pair().observable(player), &mut measure_rng)
            .expect("complete basis");
        answers[player] = outcome as u8;
        shared = post;
    }
    record(questions, answers, "ghz", adversary, seed)
}

/// Play one round of the frame-free strategy together with the per-player
/// measurement transcripts.
pub fn play_frame_free_detailed(
    questions: QuestionSet,
    rng: &mut RngStream,
    adversary: AdversaryMode,
) -> Result<(TrialRecord, [LogicalOutcome; 3])> {
    let seed = rng.seed();
    let mut adversary_rng = rng.substream(1);
    let mut measure_rng = rng.substream(2);

    let mut shared = state(StateName::Psi12);
    for player in adversary.targets(&mut adversary_rng) {
        let u = haar_random_unitary(&mut adversary_rng);
        for offset in 0..4 {
            shared = shared.apply_local(&u, player * 4 + offset)?;
        }
    }

    let qs = questions.questions();
    let mut answers = [0u8; 3];
    let mut outcomes: Vec<LogicalOutcome> = Vec::with_capacity(3);
    for player in 0..3 {
        let which = match qs[player] {
            Question::Z => LogicalObservable::Z,
            Question::X => LogicalObservable::X,
        };
        let block = [player * 4, player * 4 + 1, player * 4 + 2, player * 4 + 3];
        let (outcome, post) = measure_logical(&shared, &block, which, &mut measure_rng)?;
        answers[player] = outcome.answer;
        outcomes.push(outcome);
        shared = post;
    }
    let outcomes: [LogicalOutcome; 3] = outcomes.try_into().expect("three players");
    Ok((
        record(questions, answers, "frame-free", adversary, seed),
        outcomes,
    ))
}

/// Play one round of the frame-free strategy: each player holds a four-qubit
/// block of the twelve-qubit state and measures his logical observable with
/// single-qubit measurements only.
pub fn play_frame_free(
    questions: QuestionSet,
    rng: &mut RngStream,
    adversary: AdversaryMode,
) -> Result<TrialRecord> {
    play_frame_free_detailed(questions, rng, adversary).map(|(record, _)| record)
}

/// Brute-force check that no assignment of predefined values to the six
/// logical observables satisfies the four parity predictions.
#[derive(Debug, Clone, Serialize)]
pub struct HiddenVariableReport {
    pub assignment_count: usize,
    pub satisfying_all: usize,
    /// Assignments satisfying each single constraint.
    pub per_constraint_satisfied: [usize; 4],
    /// Assignments satisfying the other three when one constraint is dropped.
    pub drop_one_satisfying: [usize; 4],
    /// Row per assignment: which constraints it satisfies.
    pub satisfaction_matrix: Vec<[bool; 4]>,
}

/// Constraint per question set: the answers to the asked observables obey
/// the same parity rule as the game.
fn constraint_satisfied(qs: QuestionSet, z: [u8; 3], x: [u8; 3]) -> bool {
    let questions = qs.questions();
    let answers: [u8; 3] = std::array::from_fn(|p| match questions[p] {
        Question::Z => z[p],
        Question::X => x[p],
    });
    win_rule(qs, &answers)
}

pub fn hidden_variable_check() -> HiddenVariableReport {
    let mut satisfying_all = 0;
    let mut per_constraint_satisfied = [0usize; 4];
    let mut drop_one_satisfying = [0usize; 4];
    let mut satisfaction_matrix = Vec::with_capacity(64);
    for assignment in 0..64u8 {
        let bit = |i: u8| (assignment >> i) & 1;
        let z = [bit(0), bit(1), bit(2)];
        let x = [bit(3), bit(4), bit(5)];
        let row: [bool; 4] =
            std::array::from_fn(|i| constraint_satisfied(QuestionSet::ALL[i], z, x));
        if row.iter().all(|&ok| ok) {
            satisfying_all += 1;
        }
        for i in 0..4 {
            if row[i] {
                per_constraint_satisfied[i] += 1;
            }
            if (0..4).all(|j| j == i || row[j]) {
                drop_one_satisfying[i] += 1;
            }
        }
        satisfaction_matrix.push(row);
    }
    HiddenVariableReport {
        assignment_count: 64,
        satisfying_all,
        per_constraint_satisfied,
        drop_one_satisfying,
        satisfaction_matrix,
    }
}

/// Aggregate win-rate report over many seeded trials.
#[derive(Debug, Clone, Serialize)]
pub struct PlayReport {
    pub strategy: String,
    pub adversary: AdversaryMode,
    pub n_trials: usize,
    pub wins: usize,
    pub win_rate: f64,
    pub seed: u64,
    pub rng_algorithm: &'static str,
}

/// Which strategy a batch run should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    ClassicalBest,
    Ghz,
    FrameFree,
}

impl StrategyKind {
    pub fn label(self) -> &'static str {
        match self {
            StrategyKind::ClassicalBest => "classical-best",
            StrategyKind::Ghz => "ghz",
            StrategyKind::FrameFree => "frame-free",
        }
    }
}

/// Run `n_trials` full rounds: referee draw, play, aggregate. Trial i runs on
/// the derived substream i so trials are independent and order-free.
pub fn run_game(
    strategy: StrategyKind,
    adversary: AdversaryMode,
    n_trials: usize,
    seed: u64,
) -> Result<(PlayReport, Vec<TrialRecord>)> {
    let root = RngStream::new(seed);
    let simple = ClassicalStrategy::best_simple();
    let mut records = Vec::with_capacity(n_trials);
    for i in 0..n_trials {
        let mut trial_rng = root.substream(i as u64);
        let questions = referee_draw(&mut trial_rng);
        let record = match strategy {
            StrategyKind::ClassicalBest => play_classical(questions, &simple),
            StrategyKind::Ghz => play_ghz(questions, &mut trial_rng, adversary),
            StrategyKind::FrameFree => play_frame_free(questions, &mut trial_rng, adversary)?,
        };
        records.push(record);
    }
    let wins = records.iter().filter(|r| r.win).count();
    Ok((
        PlayReport {
            strategy: strategy.label().to_string(),
            adversary,
            n_trials,
            wins,
            win_rate: wins as f64 / n_trials as f64,
            seed,
            rng_algorithm: RngStream::ALGORITHM,
        },
        records,
    ))
}
