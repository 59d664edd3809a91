//! The eight hand-solved A₄ transforms and a replay harness for them.

use serde::Serialize;

use crate::ext::{ExtInt, Fin};
use crate::quasicone::QuasiconeMatrix;
use crate::strategy::{
    apply_strategy, succeeded, EngineConfig, StepError, StepRule, Strategy, StrategyState,
};

/// A printed `(input, strategy, output)` triple. Strategies are listed in
/// application order, i.e. reversed from the `e_… ∘ e_…` display.
#[derive(Clone, Debug)]
pub struct ManualCase {
    pub number: usize,
    pub input: &'static str,
    pub strategy: &'static str,
    /// The printed strategy fails the path condition; this is the replayable reading.
    pub corrected: Option<&'static str>,
    pub output: &'static str,
    /// Printed as `≅ 𝔤`.
    pub whole_algebra: bool,
}

pub fn manual_cases() -> Vec<ManualCase> {
    let case = |number, input, strategy, corrected, output, whole_algebra| ManualCase {
        number,
        input,
        strategy,
        corrected,
        output,
        whole_algebra,
    };
    vec![
        case(
            1,
            "* 1 1 0 -1 / 2 * 1 1 0 / 1 2 * 1 0 / 2 1 1 * 1 / 2 2 2 1 *",
            "-1, +3",
            None,
            "* 0 1 0 -1 / 2 * 1 1 0 / 1 0 * 1 0 / 2 1 1 * 1 / 2 2 2 1 *",
            false,
        ),
        case(
            2,
            "* 1 0 1 1 / 2 * 1 1 2 / 2 2 * 1 2 / 1 1 1 * 1 / 1 0 0 1 *",
            "+1, -3",
            None,
            "* 1 0 1 1 / 0 * -1 1 2 / 2 2 * 1 2 / 1 1 1 * 1 / 1 0 0 1 *",
            false,
        ),
        case(
            3,
            "* 1 1 0 1 / 2 * 1 1 1 / 1 2 * 1 1 / 2 1 1 * 1 / 1 1 1 1 *",
            "+1, +2, -7, -2, +4, +12",
            Some("+1, +2, -7, -2, +4, -12"),
            "* 1 2 0 1 / 0 * 0 -2 -2 / 0 2 * -1 1 / 2 4 3 * 3 / 1 1 3 1 *",
            false,
        ),
        case(
            4,
            "* 1 0 0 1 / 2 * 1 1 1 / 2 2 * 1 1 / 2 1 1 * 1 / 1 1 1 1 *",
            "+1, +2, -7, -2",
            None,
            "* 1 0 0 1 / 0 Z 1 -2 1 / 0 2 * -1 1 / 2 1 1 Z 1 / 1 1 1 1 *",
            true,
        ),
        case(
            5,
            "* 1 1 1 0 / 2 * 1 1 1 / 1 2 * 1 1 / 1 1 1 * 1 / 2 1 1 1 *",
            "-1, +3",
            None,
            "* 0 1 1 0 / 2 * 1 1 1 / 1 0 * 1 1 / 1 1 1 * 1 / 2 1 1 1 *",
            false,
        ),
        case(
            6,
            "* 1 0 1 0 / 2 * 1 1 1 / 2 2 * 1 1 / 1 1 1 * 1 / 2 1 1 1 *",
            "+1, -3",
            None,
            "* 1 0 1 0 / 0 * -1 1 1 / 2 2 * 1 1 / 1 1 1 * 1 / 2 1 1 1 *",
            false,
        ),
        case(
            7,
            "* 1 1 1 0 / 2 * 1 1 1 / 1 2 * 1 1 / 1 1 2 * 1 / 2 1 1 1 *",
            "+1, +2, -7, +12, +7, -1, -8, -2, -6, +3, +6",
            None,
            "* 2 2 2 2 / -1 * 0 1 2 / 0 2 * 2 1 / -1 1 0 * 2 / 0 0 1 0 *",
            false,
        ),
        case(
            8,
            "* 1 1 0 0 / 2 * 1 1 0 / 1 2 * 1 0 / 2 1 2 * 1 / 2 2 2 1 *",
            "+1, +2, -7, -2, +7, -3, -12, +2, -3",
            None,
            "* 3 2 0 0 / -1 * 0 -2 -2 / 0 2 * -1 -1 / 2 4 3 * 1 / 2 4 3 1 *",
            false,
        ),
    ]
}

/// How a replay ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Success,
    NoProgress,
    /// `ω < 1`: the subalgebra swallowed the Cartan part.
    Degenerate,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryDiff {
    pub row: usize,
    pub col: usize,
    pub computed: ExtInt,
    pub printed: ExtInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub number: usize,
    pub strategy: Strategy,
    pub resolved: Option<Strategy>,
    pub input_defect: ExtInt,
    pub printed_defect: ExtInt,
    pub computed_defect: Option<ExtInt>,
    pub printed_verdict: Verdict,
    pub verdict: Verdict,
    pub error: Option<String>,
    pub output: Option<QuasiconeMatrix>,
    pub diffs: Vec<EntryDiff>,
}

impl CaseResult {
    pub fn entry_exact(&self) -> bool {
        self.output.is_some() && self.diffs.is_empty()
    }

    pub fn flags_match(&self) -> bool {
        self.verdict == self.printed_verdict
    }

    pub fn passed(&self) -> bool {
        self.entry_exact() && self.flags_match()
    }
}

/// A named engine configuration for replay.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ReplayModel {
    pub name: &'static str,
    #[serde(skip)]
    pub config: EngineConfig,
}

pub fn replay_models() -> Vec<ReplayModel> {
    vec![
        ReplayModel { name: "closure", config: EngineConfig::default() },
        ReplayModel {
            name: "literal",
            config: EngineConfig { rule: StepRule::Literal, start_delta: 0 },
        },
        ReplayModel {
            name: "literal-start-delta",
            config: EngineConfig { rule: StepRule::Literal, start_delta: -1 },
        },
    ]
}

fn printed_verdict(case: &ManualCase, input: &QuasiconeMatrix, printed: &QuasiconeMatrix) -> Verdict {
    if case.whole_algebra || degenerate(printed) {
        return Verdict::Degenerate;
    }
    if printed.defect() < input.defect() || printed.is_gvm_complete() {
        Verdict::Success
    } else {
        Verdict::NoProgress
    }
}

/// Off-diagonal differences. A printed `ℤ` diagonal is checked through the verdict.
fn diff(computed: &QuasiconeMatrix, printed: &QuasiconeMatrix) -> Vec<EntryDiff> {
    printed
        .off_diagonal()
        .filter(|&p| computed[p] != printed[p])
        .map(|(row, col)| EntryDiff { row, col, computed: computed[(row, col)], printed: printed[(row, col)] })
        .collect()
}

/// `ω < 1`, or some pair sum below 1 (which the closure rule would fold into `ω`).
fn degenerate(m: &QuasiconeMatrix) -> bool {
    m.heisenberg() < Fin(1) || m.off_diagonal().any(|(p, q)| m[(p, q)] + m[(q, p)] < Fin(1))
}

pub fn replay_case(case: &ManualCase, config: &EngineConfig) -> CaseResult {
    let input = QuasiconeMatrix::parse_rows(case.input).expect("case input parses");
    let printed = QuasiconeMatrix::parse_rows(case.output).expect("case output parses");
    let strategy: Strategy = case.corrected.unwrap_or(case.strategy).parse().expect("case strategy parses");
    let start = StrategyState::start(input.clone(), config);
    let (state, verdict, error) = match apply_strategy(&start, &strategy, config) {
        Ok(s) => {
            let v = if degenerate(&s.matrix) {
                Verdict::Degenerate
            } else if succeeded(&input, &s) {
                Verdict::Success
            } else {
                Verdict::NoProgress
            };
            (Some(s), v, None)
        }
        Err(e) => match e.error {
            StepError::Degenerate(ref s) => (Some((**s).clone()), Verdict::Degenerate, Some(e.to_string())),
            _ => (None, Verdict::Failed, Some(e.to_string())),
        },
    };
    CaseResult {
        number: case.number,
        resolved: state.as_ref().map(StrategyState::resolved_strategy),
        strategy,
        input_defect: input.defect(),
        printed_defect: printed.defect(),
        computed_defect: state.as_ref().map(|s| s.matrix.defect()),
        printed_verdict: printed_verdict(case, &input, &printed),
        verdict,
        error,
        diffs: state.as_ref().map(|s| diff(&s.matrix, &printed)).unwrap_or_default(),
        output: state.map(|s| s.matrix),
    }
}

pub fn replay_manual_cases(config: &EngineConfig) -> Vec<CaseResult> {
    manual_cases().iter().map(|c| replay_case(c, config)).collect()
}
