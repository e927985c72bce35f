//! The question/answer loop, driven by a terminal or by a file of answers.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use printsynth_service::{Answer, AnswerSource, QuestionView, Session, SessionState};

use crate::CliError;

pub const GREETING: &str = "Printer synthesis. To enter a new line, end the line with \\ and press Enter.";

/// Newlines shown as `\n` so a candidate fits on one line.
pub fn visible(word: &str) -> String {
    word.replace('\n', "\\n")
}

pub fn print_question(out: &mut dyn Write, q: &QuestionView) -> std::io::Result<()> {
    writeln!(out, "What should be the function output for the following input tree?")?;
    writeln!(out, "  {}", q.tree_text)?;
    if let Some(h) = &q.hint {
        writeln!(out, "  Something of the form: {}", visible(h))?;
    }
    for (i, s) in q.suggestions.iter().enumerate() {
        writeln!(out, "  {}) {}", i + 1, visible(s))?;
    }
    if !q.suggestions.is_empty() {
        writeln!(out, "{}", number_prompt(q.suggestions.len()))?;
    }
    Ok(())
}

fn number_prompt(n: usize) -> String {
    format!("Please enter a number between 1 and {n}, or 0 if you really want to enter your answer manually")
}

/// One answer line; a trailing backslash continues it on the next line
/// with a newline in between. `None` at end of input.
pub fn read_answer(input: &mut dyn BufRead) -> std::io::Result<Option<String>> {
    let mut word = String::new();
    loop {
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            return Ok(None);
        }
        let line = line.strip_suffix('\n').unwrap_or(&line);
        let line = line.strip_suffix('\r').unwrap_or(line);
        match line.strip_suffix('\\') {
            Some(head) => {
                word.push_str(head);
                word.push('\n');
            }
            None => {
                word.push_str(line);
                return Ok(Some(word));
            }
        }
    }
}

/// Reads an answer to `q` from the terminal: a suggestion number when
/// candidates are listed, otherwise free text.
fn ask(input: &mut dyn BufRead, out: &mut dyn Write, q: &QuestionView) -> Result<Answer, CliError> {
    out.flush()?;
    let n = q.suggestions.len();
    if n == 0 {
        return read_answer(input)?.map(Answer::Text).ok_or(CliError::InputEnded);
    }
    loop {
        let line = read_answer(input)?.ok_or(CliError::InputEnded)?;
        match line.trim().parse::<usize>() {
            Ok(0) => {
                writeln!(out, "Enter the output:")?;
                out.flush()?;
                return read_answer(input)?.map(Answer::Text).ok_or(CliError::InputEnded);
            }
            Ok(i) if i <= n => return Ok(Answer::Suggestion(i)),
            _ => {
                writeln!(out, "{}", number_prompt(n))?;
                out.flush()?;
            }
        }
    }
}

/// Runs the session to the end, answering from the terminal. Rejected
/// answers are reported and the question is asked again.
pub fn interactive(session: &mut Session, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "{GREETING}")?;
    loop {
        let q = match session.state() {
            SessionState::Asking(q) => q.clone(),
            SessionState::Rejected { question, message, .. } => {
                writeln!(out, "{message}")?;
                question.clone()
            }
            SessionState::Done { .. } => return Ok(()),
            SessionState::Failed { reason } => return Err(CliError::Failed(reason.clone())),
            SessionState::Created => unreachable!("sessions are started before the dialog"),
        };
        print_question(out, &q)?;
        let answer = ask(input, out, &q)?;
        let source = match answer {
            Answer::Suggestion(_) => AnswerSource::SuggestionIndex,
            Answer::Text(_) => AnswerSource::Human,
        };
        session.submit(answer, source)?;
    }
}

/// Runs the session to the end from a map of tree text to output. Stops at
/// the first missing or inconsistent answer.
pub fn scripted(
    session: &mut Session,
    answers: &HashMap<String, String>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    loop {
        let q = match session.state() {
            SessionState::Asking(q) => q.clone(),
            SessionState::Rejected { message, .. } => return Err(CliError::Rejected(message.clone())),
            SessionState::Done { .. } => return Ok(()),
            SessionState::Failed { reason } => return Err(CliError::Failed(reason.clone())),
            SessionState::Created => unreachable!("sessions are started before the dialog"),
        };
        print_question(out, &q)?;
        let word = answers
            .get(&q.tree_text)
            .ok_or_else(|| CliError::MissingAnswer(q.tree_text.clone()))?;
        writeln!(out, "> {}", visible(word))?;
        session.submit(Answer::Text(word.clone()), AnswerSource::Scripted)?;
    }
}
