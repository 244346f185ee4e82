//! Accuracy and c@1.
//!
//! All metrics are exact rationals. Display values are truncated (not rounded)
//! to two decimals.

use std::collections::HashMap;
use std::io::BufRead;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::CorpusEntry;

pub type Rational = Ratio<u64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("invalid counts: {0}")]
    InvalidCounts(String),
    #[error("gold logic-form file line {line}: {reason}")]
    GoldFormat { line: usize, reason: String },
}

/// Logic-translation counts: correctly transformed (CT) out of TQ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LogicEvalCounts {
    pub ct: u64,
    pub tq: u64,
}

impl LogicEvalCounts {
    pub fn new(ct: u64, tq: u64) -> Result<Self, EvalError> {
        if tq == 0 {
            return Err(EvalError::InvalidCounts("TQ must be at least 1".into()));
        }
        if ct > tq {
            return Err(EvalError::InvalidCounts(format!("CT={ct} exceeds TQ={tq}")));
        }
        Ok(LogicEvalCounts { ct, tq })
    }
}

/// Answer counts: correct (CA) and unanswered (UQ) out of TQ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AnswerEvalCounts {
    pub ca: u64,
    pub uq: u64,
    pub tq: u64,
}

impl AnswerEvalCounts {
    pub fn new(ca: u64, uq: u64, tq: u64) -> Result<Self, EvalError> {
        if tq == 0 {
            return Err(EvalError::InvalidCounts("TQ must be at least 1".into()));
        }
        if ca.checked_add(uq).is_none_or(|s| s > tq) {
            return Err(EvalError::InvalidCounts(format!("CA={ca} + UQ={uq} exceeds TQ={tq}")));
        }
        Ok(AnswerEvalCounts { ca, uq, tq })
    }

    /// Questions answered, but wrongly.
    pub fn incorrect(&self) -> u64 {
        self.tq - self.ca - self.uq
    }
}

/// CT / TQ
pub fn logic_accuracy(c: LogicEvalCounts) -> Rational {
    Ratio::new(c.ct, c.tq)
}

/// CA / TQ
pub fn answer_accuracy(c: AnswerEvalCounts) -> Rational {
    Ratio::new(c.ca, c.tq)
}

/// (CA + UQ * CA / TQ) / TQ, i.e. (CA * TQ + UQ * CA) / TQ².
pub fn c_at_1(c: AnswerEvalCounts) -> Rational {
    let (ca, uq, tq) = (c.ca as u128, c.uq as u128, c.tq as u128);
    let num = ca * tq + uq * ca;
    let den = tq * tq;
    let r = Ratio::new(num, den);
    Ratio::new_raw(
        u64::try_from(*r.numer()).expect("reduced c@1 numerator fits u64"),
        u64::try_from(*r.denom()).expect("reduced c@1 denominator fits u64"),
    )
}

/// Truncates a value in [0, 1] to two decimals: 13029/13225 → "0.98".
pub fn display_truncated(r: Rational) -> String {
    let hundredths = (*r.numer() as u128 * 100) / *r.denom() as u128;
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

pub fn display_exact(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Why logic translations failed; sums to TQ − CT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FailureBreakdown {
    pub ner_errors: u64,
    pub declarative_errors: u64,
    pub no_logic_form: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalReport {
    pub logic: Option<LogicEvalCounts>,
    pub answers: Option<AnswerEvalCounts>,
    pub logic_accuracy: Option<Rational>,
    pub answer_accuracy: Option<Rational>,
    pub c_at_1: Option<Rational>,
    pub failure_breakdown: Option<FailureBreakdown>,
}

impl EvalReport {
    pub fn from_counts(logic: Option<LogicEvalCounts>, answers: Option<AnswerEvalCounts>) -> Self {
        EvalReport {
            logic,
            answers,
            logic_accuracy: logic.map(logic_accuracy),
            answer_accuracy: answers.map(answer_accuracy),
            c_at_1: answers.map(c_at_1),
            failure_breakdown: None,
        }
    }

    pub fn with_breakdown(mut self, b: FailureBreakdown) -> Result<Self, EvalError> {
        let logic = self.logic.ok_or_else(|| EvalError::InvalidCounts("breakdown needs logic counts".into()))?;
        let sum = b.ner_errors + b.declarative_errors + b.no_logic_form;
        if sum != logic.tq - logic.ct {
            return Err(EvalError::InvalidCounts(format!(
                "breakdown sums to {sum}, expected TQ - CT = {}",
                logic.tq - logic.ct
            )));
        }
        self.failure_breakdown = Some(b);
        Ok(self)
    }

    /// One JSON object carrying counts, exact rationals and truncated decimals.
    pub fn to_record(&self) -> serde_json::Value {
        let mut rec = serde_json::Map::new();
        let mut put = |k: &str, v: serde_json::Value| {
            rec.insert(k.to_string(), v);
        };
        if let Some(l) = self.logic {
            put("tq", l.tq.into());
            put("ct", l.ct.into());
        }
        if let Some(a) = self.answers {
            put("tq", a.tq.into());
            put("ca", a.ca.into());
            put("uq", a.uq.into());
            put("incorrect", a.incorrect().into());
        }
        for (name, value) in [
            ("logic_accuracy", self.logic_accuracy),
            ("answer_accuracy", self.answer_accuracy),
            ("c_at_1", self.c_at_1),
        ] {
            if let Some(r) = value {
                put(name, display_exact(r).into());
                put(&format!("{name}_display"), display_truncated(r).into());
            }
        }
        if let Some(b) = self.failure_breakdown {
            put("failure_breakdown", serde_json::to_value(b).expect("plain struct"));
        }
        serde_json::Value::Object(rec)
    }
}

/// `question_id<TAB>rendered_logic_form` per line; blank and `#` lines skipped.
pub fn read_gold_logic_forms<R: BufRead>(input: R) -> Result<HashMap<String, String>, EvalError> {
    let mut gold = HashMap::new();
    for (i, line) in input.lines().enumerate() {
        let bad = |reason: String| EvalError::GoldFormat { line: i + 1, reason };
        let line = line.map_err(|e| bad(e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (id, form) = line.split_once('\t').ok_or_else(|| bad("expected question_id<TAB>logic_form".into()))?;
        gold.insert(id.trim().to_string(), form.trim().to_string());
    }
    Ok(gold)
}

/// Computes the report for a corpus run.
///
/// CT counts entries whose rendered logic form equals the gold string. CA counts
/// entries with `answer_found`. UQ counts entries with no surviving passage and
/// no answer; entries with passages but no answer count as incorrect.
pub fn evaluate_run(entries: &[CorpusEntry], gold: Option<&HashMap<String, String>>) -> Result<EvalReport, EvalError> {
    let tq = entries.len() as u64;
    let logic = gold
        .map(|gold| {
            let ct = entries
                .iter()
                .filter(|e| {
                    matches!(
                        (e.logic_form.as_ref(), gold.get(&e.question.id)),
                        (Some(lf), Some(g)) if lf.render() == *g
                    )
                })
                .count() as u64;
            LogicEvalCounts::new(ct, tq)
        })
        .transpose()?;
    let ca = entries.iter().filter(|e| e.answer_found).count() as u64;
    let uq = entries.iter().filter(|e| !e.answer_found && e.passages.is_empty()).count() as u64;
    let answers = AnswerEvalCounts::new(ca, uq, tq)?;
    Ok(EvalReport::from_counts(logic, Some(answers)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn answers(ca: u64, uq: u64, tq: u64) -> AnswerEvalCounts {
        AnswerEvalCounts::new(ca, uq, tq).unwrap()
    }

    /// Straight floating-point evaluation of the three formulas, kept apart from the rational code.
    fn float_oracle(ca: u64, uq: u64, tq: u64) -> (f64, f64) {
        let (ca, uq, tq) = (ca as f64, uq as f64, tq as f64);
        (ca / tq, (ca + uq * (ca / tq)) / tq)
    }

    #[test]
    fn logic_accuracy_examples() {
        let r = logic_accuracy(LogicEvalCounts::new(74, 115).unwrap());
        assert_eq!(display_exact(r), "74/115");
        assert_eq!(display_truncated(r), "0.64");
        assert!((*r.numer() as f64 / *r.denom() as f64 - 0.643478).abs() < 1e-6);
        assert_eq!(logic_accuracy(LogicEvalCounts::new(0, 115).unwrap()), Ratio::from_integer(0));
        assert_eq!(logic_accuracy(LogicEvalCounts::new(115, 115).unwrap()), Ratio::from_integer(1));
        assert!(LogicEvalCounts::new(116, 115).is_err());
        assert!(LogicEvalCounts::new(0, 0).is_err());
    }

    #[test]
    fn answer_metrics_examples() {
        let c = answers(101, 14, 115);
        assert_eq!(display_exact(answer_accuracy(c)), "101/115");
        assert_eq!(display_truncated(answer_accuracy(c)), "0.87");
        let c1 = c_at_1(c);
        assert_eq!(display_exact(c1), "13029/13225");
        assert_eq!(display_truncated(c1), "0.98");
        let (_, oracle) = float_oracle(101, 14, 115);
        assert!((*c1.numer() as f64 / *c1.denom() as f64 - oracle).abs() < 1e-12);

        assert_eq!(answer_accuracy(answers(0, 3, 10)), Ratio::from_integer(0));
        assert_eq!(answer_accuracy(answers(10, 0, 10)), Ratio::from_integer(1));
        assert_eq!(c_at_1(answers(7, 0, 10)), answer_accuracy(answers(7, 0, 10)));
        assert_eq!(c_at_1(answers(0, 9, 10)), Ratio::from_integer(0));
        assert!(AnswerEvalCounts::new(100, 16, 115).is_err());
    }

    #[test]
    fn truncation_not_rounding() {
        assert_eq!(display_truncated(Ratio::new(2, 3)), "0.66");
        assert_eq!(display_truncated(Ratio::from_integer(1)), "1.00");
        assert_eq!(display_truncated(Ratio::new(1, 20)), "0.05");
    }

    #[test]
    fn breakdown_must_sum() {
        let report = EvalReport::from_counts(Some(LogicEvalCounts::new(74, 115).unwrap()), Some(answers(101, 14, 115)));
        let ok = FailureBreakdown { ner_errors: 15, declarative_errors: 11, no_logic_form: 15 };
        let report = report.with_breakdown(ok).unwrap();
        let rec = report.to_record();
        assert_eq!(rec["c_at_1_display"], "0.98");
        assert_eq!(rec["failure_breakdown"]["declarative_errors"], 11);
        let bad = FailureBreakdown { no_logic_form: 14, ..ok };
        assert!(report.with_breakdown(bad).is_err());
    }

    #[test]
    fn gold_file() {
        let gold = read_gold_logic_forms("# c\nq1\t∃X, PERSON(X)\n\nq2\t∃X, DATE(X)\n".as_bytes()).unwrap();
        assert_eq!(gold.len(), 2);
        assert_eq!(gold["q1"], "∃X, PERSON(X)");
        assert!(matches!(read_gold_logic_forms("q1 no tab\n".as_bytes()), Err(EvalError::GoldFormat { line: 1, .. })));
    }

    #[test]
    fn empty_run_is_invalid() {
        assert!(matches!(evaluate_run(&[], None), Err(EvalError::InvalidCounts(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn counts() -> impl Strategy<Value = AnswerEvalCounts> {
            (1u64..5000)
                .prop_flat_map(|tq| (0..=tq, Just(tq)))
                .prop_flat_map(|(ca, tq)| (Just(ca), 0..=tq - ca, Just(tq)))
                .prop_map(|(ca, uq, tq)| answers(ca, uq, tq))
        }

        proptest! {
            #[test]
            fn c_at_1_dominates_accuracy(c in counts()) {
                let acc = answer_accuracy(c);
                let c1 = c_at_1(c);
                prop_assert!(c1 >= acc);
                prop_assert_eq!(c1 == acc, c.uq == 0 || c.ca == 0);
                prop_assert!(c1 <= Ratio::from_integer(1));
            }

            #[test]
            fn accuracy_monotone(c in counts()) {
                prop_assume!(c.ca + c.uq < c.tq);
                let more = answers(c.ca + 1, c.uq, c.tq);
                prop_assert!(answer_accuracy(more) > answer_accuracy(c));
            }
        }
    }
}
