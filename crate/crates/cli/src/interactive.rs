//! Prompted entry of one iteration's instruments.
//!
//! Prompts go to the given writer (stderr in the binary) and answers are
//! read line by line, so the same flow can be driven from a script.

use std::io::{BufRead, Write};

use aap_core::catalog::Catalog;
use aap_core::{
    DataInventory, DataItem, DataTag, GqFactor, GqFactorList, InstrumentBundle, IuChecklist,
    PeerRatingMatrix, PiAnswer, PiQuestionnaire, ProcessEntry, ProcessInventory, ProcessKind,
};

use crate::error::CliError;

const MAX_ATTEMPTS: usize = 3;

pub struct Prompter<R, W> {
    input: R,
    prompts: W,
}

impl<R: BufRead, W: Write> Prompter<R, W> {
    pub fn new(input: R, prompts: W) -> Self {
        Prompter { input, prompts }
    }

    fn line(&mut self, prompt: &str) -> Result<String, CliError> {
        write!(self.prompts, "{prompt}").map_err(|e| CliError::io("writing prompt", e))?;
        self.prompts
            .flush()
            .map_err(|e| CliError::io("writing prompt", e))?;
        let mut buf = String::new();
        let n = self
            .input
            .read_line(&mut buf)
            .map_err(|e| CliError::io("reading answer", e))?;
        if n == 0 {
            return Err(CliError::Usage(format!(
                "input ended at prompt `{}`",
                prompt.trim()
            )));
        }
        Ok(buf.trim().to_string())
    }

    /// Re-asks until `parse` accepts the answer, up to a few attempts.
    fn ask<T>(
        &mut self,
        prompt: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<T, CliError> {
        let mut last = String::new();
        for _ in 0..MAX_ATTEMPTS {
            let answer = self.line(prompt)?;
            match parse(&answer) {
                Ok(v) => return Ok(v),
                Err(e) => {
                    let _ = writeln!(self.prompts, "  {e}");
                    last = e;
                }
            }
        }
        Err(CliError::Usage(format!(
            "giving up on `{}`: {last}",
            prompt.trim()
        )))
    }

    fn score(&mut self, prompt: &str) -> Result<f64, CliError> {
        self.ask(prompt, parse_unit)
    }

    fn optional_score(&mut self, prompt: &str) -> Result<Option<f64>, CliError> {
        self.ask(prompt, |s| {
            if s.is_empty() {
                Ok(None)
            } else {
                parse_unit(s).map(Some)
            }
        })
    }

    pub fn bundle(&mut self, catalog: &Catalog) -> Result<InstrumentBundle, CliError> {
        let _ = writeln!(
            self.prompts,
            "People index: score each question from 0 to 1."
        );
        let mut answers = Vec::new();
        for q in &catalog.pi_questions {
            let score = self.score(&format!("  [{}] {}: ", q.id, q.prompt))?;
            answers.push(PiAnswer {
                question_id: q.id.clone(),
                score,
            });
        }
        let n = answers.len();
        let weights = self.ask("  Weights, comma-separated (blank for uniform): ", |s| {
            if s.is_empty() {
                return Ok(vec![1.0; n]);
            }
            let w = parse_list(s)?;
            if w.len() != n {
                return Err(format!("expected {n} weights, got {}", w.len()));
            }
            Ok(w)
        })?;
        let pi_questionnaire = PiQuestionnaire { answers, weights };

        let peer_ratings = self.peer_ratings()?;

        let _ = writeln!(
            self.prompts,
            "Data gathered: one item per entry, blank id to finish."
        );
        let mut items = Vec::new();
        loop {
            let id = self.line("  Item id: ")?;
            if id.is_empty() {
                break;
            }
            let description = self.line("  Description: ")?;
            let tags = self.ask("  Tags (immediate, future, or both): ", parse_tags)?;
            let usefulness = self.score("  Usefulness [0-1]: ")?;
            items.push(DataItem {
                item_id: id,
                description,
                tags,
                usefulness,
            });
        }

        let _ = writeln!(
            self.prompts,
            "Processes: one per entry, blank id to finish."
        );
        let mut processes = Vec::new();
        loop {
            let id = self.line("  Process id: ")?;
            if id.is_empty() {
                break;
            }
            let kind = self.ask("  Kind (core or supporting): ", |s| {
                match s.to_ascii_lowercase().as_str() {
                    "core" => Ok(ProcessKind::Core),
                    "supporting" => Ok(ProcessKind::Supporting),
                    other => Err(format!("`{other}` is neither core nor supporting")),
                }
            })?;
            let understanding = self.score("  Understanding [0-1]: ")?;
            processes.push(ProcessEntry {
                process_id: id,
                kind,
                understanding,
            });
        }

        let _ = writeln!(
            self.prompts,
            "Interface utility: score each question from 0 to 1."
        );
        let mut iu = Vec::new();
        for q in &catalog.iu_questions {
            iu.push(self.score(&format!("  [{}] {}: ", q.id, q.prompt))?);
        }

        let _ = writeln!(
            self.prompts,
            "Geographical factors: severity 0 (no hindrance) to 1 (maximal), blank if not applicable."
        );
        let mut factors = Vec::new();
        for template in &catalog.gq_factors {
            let prompt = format!("  [{}] {}: ", template.id, template.description);
            if let Some(severity) = self.optional_score(&prompt)? {
                factors.push(GqFactor {
                    factor_id: template.id.clone(),
                    description: template.description.clone(),
                    severity,
                });
            }
        }
        loop {
            let id = self.line("  Additional factor id (blank to finish): ")?;
            if id.is_empty() {
                break;
            }
            let description = self.line("  Description: ")?;
            let severity = self.score("  Severity [0-1]: ")?;
            factors.push(GqFactor {
                factor_id: id,
                description,
                severity,
            });
        }

        Ok(InstrumentBundle {
            pi_questionnaire,
            peer_ratings,
            data_inventory: DataInventory { items },
            process_inventory: ProcessInventory { processes },
            iu_checklist: IuChecklist { answers: iu },
            gq_factors: GqFactorList { factors },
        })
    }

    fn peer_ratings(&mut self) -> Result<Option<PeerRatingMatrix>, CliError> {
        let members = self.line("Peer ratings: member ids, comma-separated (blank to skip): ")?;
        if members.is_empty() {
            return Ok(None);
        }
        let member_ids: Vec<String> = members.split(',').map(|s| s.trim().to_string()).collect();
        let n = member_ids.len();
        let mut ratings = Vec::new();
        loop {
            let prompt = format!(
                "  Rater {} shares for {n} members (blank to finish): ",
                ratings.len() + 1
            );
            let row = self.ask(&prompt, |s| {
                if s.is_empty() {
                    return Ok(None);
                }
                let row = parse_list(s)?;
                if row.len() != n {
                    return Err(format!("expected {n} values, got {}", row.len()));
                }
                row.iter()
                    .try_for_each(|v| parse_unit(&v.to_string()).map(|_| ()))?;
                Ok(Some(row))
            })?;
            match row {
                Some(row) => ratings.push(row),
                None => break,
            }
        }
        Ok(Some(PeerRatingMatrix::new(member_ids, ratings)))
    }
}

fn parse_unit(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{}` is not a number", part.trim()))
        })
        .collect()
}

fn parse_tags(s: &str) -> Result<std::collections::BTreeSet<DataTag>, String> {
    match s.to_ascii_lowercase().as_str() {
        "immediate" => Ok([DataTag::Immediate].into()),
        "future" => Ok([DataTag::Future].into()),
        "both" | "immediate,future" | "future,immediate" => {
            Ok([DataTag::Immediate, DataTag::Future].into())
        }
        other => Err(format!("`{other}` is not one of immediate, future, both")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scripted_session() {
        let script = "\
0.8\n0.8\n0.8\n0.8\n0.8\n0.8\n0.8\n0.8\n\n\
\n\
erring-process\nfaulty step\nimmediate\n0.8\n\
hr-attrition\nstaff left\nfuture\n1.5\n0.8\n\
\n\
billing\ncore\n0.9\n\
\n\
0.8\n0.8\n0.8\n0.8\n\
0.2\n\n\n\n\
\n";
        let mut prompts = Vec::new();
        let bundle = Prompter::new(script.as_bytes(), &mut prompts)
            .bundle(&Catalog::default())
            .unwrap();
        assert_eq!(bundle.pi_questionnaire.answers.len(), 8);
        assert_eq!(bundle.pi_questionnaire.weights, vec![1.0; 8]);
        assert!(bundle.peer_ratings.is_none());
        assert_eq!(bundle.data_inventory.items.len(), 2);
        assert_eq!(bundle.data_inventory.items[1].usefulness, 0.8);
        assert_eq!(bundle.gq_factors.factors.len(), 1);
        assert_eq!(bundle.gq_factors.factors[0].factor_id, "ui_language");
        let text = String::from_utf8(prompts).unwrap();
        assert!(text.contains("outside [0, 1]"));
    }

    #[test]
    fn truncated_input_is_a_usage_error() {
        let err = Prompter::new("0.5\n".as_bytes(), Vec::new())
            .bundle(&Catalog::default())
            .unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
    }
}
