use printsynth::adt::{desugar_primitives, domain_of, parse_adt, AdtDeclaration};
use printsynth::synthesis::{
    emit_code, AnswerOutcome, EmitOptions, Event, InferenceConfig, InferenceState, Question, QuestionKind, Stats,
    SynthesisError,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SessionError {
    #[error("the session is not waiting for an answer")]
    NotAwaiting,
    #[error("suggestion {index} does not exist, there are {count}")]
    SuggestionOutOfRange { index: usize, count: usize },
    #[error("transcript answers {tree} but the session asks {expected}")]
    Mismatch { tree: String, expected: String },
    #[error("the session is not done")]
    NotDone,
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub max_suggestions: usize,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            max_suggestions: InferenceConfig::default().max_suggestions,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerSource {
    Human,
    Scripted,
    SuggestionIndex,
}

/// What a session recorded, in order. Feeding the `AnswerGiven` events to a
/// fresh session over the same source reproduces it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TranscriptEvent {
    AskedQuestion {
        tree: String,
        hint: Option<String>,
        suggestions: Vec<String>,
    },
    AnswerGiven {
        tree: String,
        source: AnswerSource,
        word: String,
    },
    Inferred {
        tree: String,
        word: String,
    },
    RejectedAnswer {
        tree: String,
        word: String,
        message: String,
    },
    Emitted {
        code: String,
    },
}

/// A question as clients see it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionView {
    pub tree_text: String,
    pub hint: Option<String>,
    pub suggestions: Vec<String>,
    pub kind: String,
}

impl From<&Question> for QuestionView {
    fn from(q: &Question) -> Self {
        let kind = match q.kind() {
            QuestionKind::Plain => "plain",
            QuestionKind::Hint => "hint",
            QuestionKind::Suggestions => "suggestions",
        };
        QuestionView {
            tree_text: q.tree_text.clone(),
            hint: q.hint.clone(),
            suggestions: q.suggestions.clone(),
            kind: kind.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsView {
    pub testset_size: usize,
    pub inferred: usize,
    pub asked: usize,
    pub asked_plain: usize,
    pub asked_hint: usize,
    pub asked_suggestions: usize,
    pub rejected: usize,
    pub remaining: usize,
}

impl From<Stats> for StatsView {
    fn from(s: Stats) -> Self {
        StatsView {
            testset_size: s.testset_size,
            inferred: s.inferred,
            asked: s.asked(),
            asked_plain: s.asked_plain,
            asked_hint: s.asked_hint,
            asked_suggestions: s.asked_suggestions,
            rejected: s.rejected,
            remaining: s.remaining(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SessionState {
    Created,
    Asking(QuestionView),
    Rejected {
        question: QuestionView,
        message: String,
        examples: Vec<String>,
    },
    Done {
        code: String,
    },
    Failed {
        reason: String,
    },
}

impl SessionState {
    pub fn name(&self) -> &'static str {
        match self {
            SessionState::Created => "created",
            SessionState::Asking(_) => "asking",
            SessionState::Rejected { .. } => "rejected",
            SessionState::Done { .. } => "done",
            SessionState::Failed { .. } => "failed",
        }
    }
}

pub enum Answer {
    Text(String),
    /// 1-based, as listed to the user.
    Suggestion(usize),
}

/// Everything needed to rebuild a session.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SavedSession {
    pub adt_source: String,
    pub config: SessionConfig,
    pub transcript: Vec<TranscriptEvent>,
}

/// One synthesis run driven by answers from outside.
#[derive(Clone, Debug)]
pub struct Session {
    source: String,
    config: SessionConfig,
    decl: Option<AdtDeclaration>,
    engine: Option<InferenceState>,
    state: SessionState,
    transcript: Vec<TranscriptEvent>,
    seen_events: usize,
}

impl Session {
    pub fn new(source: impl Into<String>, config: SessionConfig) -> Self {
        Session {
            source: source.into(),
            config,
            decl: None,
            engine: None,
            state: SessionState::Created,
            transcript: Vec::new(),
            seen_events: 0,
        }
    }

    /// Builds the test set and records outputs up to the first question.
    /// Declaration errors leave the session `Failed`.
    pub fn start(&mut self) {
        if self.state != SessionState::Created {
            return;
        }
        let prepared = parse_adt(&self.source).and_then(|decl| {
            let domain = domain_of(&desugar_primitives(&decl))?;
            Ok((decl, domain))
        });
        let (decl, domain) = match prepared {
            Ok(p) => p,
            Err(e) => {
                self.state = SessionState::Failed { reason: e.to_string() };
                return;
            }
        };
        let config = InferenceConfig {
            max_suggestions: self.config.max_suggestions,
            check_invariants: false,
        };
        match InferenceState::new(&domain, config) {
            Ok(engine) => {
                self.decl = Some(decl);
                self.engine = Some(engine);
                self.sync(None);
            }
            Err(e) => self.state = SessionState::Failed { reason: e.to_string() },
        }
    }

    pub fn create(source: impl Into<String>, config: SessionConfig) -> Self {
        let mut s = Session::new(source, config);
        s.start();
        s
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn config(&self) -> SessionConfig {
        self.config
    }

    pub fn state(&self) -> &SessionState {
        &self.state
    }

    pub fn transcript(&self) -> &[TranscriptEvent] {
        &self.transcript
    }

    pub fn stats(&self) -> StatsView {
        self.engine.as_ref().map(|e| e.stats().into()).unwrap_or_default()
    }

    pub fn question(&self) -> Option<&QuestionView> {
        match &self.state {
            SessionState::Asking(q) | SessionState::Rejected { question: q, .. } => Some(q),
            _ => None,
        }
    }

    /// The emitted printer once the session is done.
    pub fn code(&self) -> Result<&str, SessionError> {
        match &self.state {
            SessionState::Done { code } => Ok(code),
            _ => Err(SessionError::NotDone),
        }
    }

    pub fn submit(&mut self, answer: Answer, source: AnswerSource) -> Result<&SessionState, SessionError> {
        let q = self.question().ok_or(SessionError::NotAwaiting)?;
        let tree = q.tree_text.clone();
        let word = match answer {
            Answer::Text(w) => w,
            Answer::Suggestion(i) => match i.checked_sub(1).and_then(|k| q.suggestions.get(k)) {
                Some(w) => w.clone(),
                None => {
                    return Err(SessionError::SuggestionOutOfRange {
                        index: i,
                        count: q.suggestions.len(),
                    })
                }
            },
        };
        let engine = self.engine.as_mut().expect("a question implies an engine");
        let outcome = engine.answer(&word)?;
        self.transcript.push(TranscriptEvent::AnswerGiven { tree, source, word });
        self.sync(Some(outcome));
        Ok(&self.state)
    }

    /// Copies new engine events into the transcript and recomputes the state.
    fn sync(&mut self, outcome: Option<AnswerOutcome>) {
        let engine = self.engine.as_ref().expect("started");
        for e in &engine.events()[self.seen_events..] {
            match e {
                Event::Inferred { tree, output } => self.transcript.push(TranscriptEvent::Inferred {
                    tree: tree.clone(),
                    word: output.clone(),
                }),
                Event::Asked { tree, .. } => {
                    let q = engine.question().expect("the last question is open");
                    self.transcript.push(TranscriptEvent::AskedQuestion {
                        tree: tree.clone(),
                        hint: q.hint.clone(),
                        suggestions: q.suggestions.clone(),
                    })
                }
                Event::Rejected { tree, answer, message } => self.transcript.push(TranscriptEvent::RejectedAnswer {
                    tree: tree.clone(),
                    word: answer.clone(),
                    message: message.clone(),
                }),
                Event::Answered { .. } => {}
            }
        }
        self.seen_events = engine.events().len();
        self.state = match (engine.question(), outcome) {
            (Some(q), Some(AnswerOutcome::Rejected { message, examples })) => SessionState::Rejected {
                question: q.into(),
                message,
                examples,
            },
            (Some(q), _) => SessionState::Asking(q.into()),
            (None, _) => match engine.finish() {
                Ok(sts) => {
                    let decl = self.decl.as_ref().expect("started");
                    let code = emit_code(&sts, decl, engine.asked(), EmitOptions::default());
                    self.transcript.push(TranscriptEvent::Emitted { code: code.clone() });
                    SessionState::Done { code }
                }
                Err(e) => SessionState::Failed { reason: e.to_string() },
            },
        };
    }

    pub fn save(&self) -> SavedSession {
        SavedSession {
            adt_source: self.source.clone(),
            config: self.config,
            transcript: self.transcript.clone(),
        }
    }

    /// Rebuilds a session by feeding the recorded answers to a fresh one.
    pub fn replay(source: &str, config: SessionConfig, transcript: &[TranscriptEvent]) -> Result<Self, SessionError> {
        let mut s = Session::create(source, config);
        for e in transcript {
            if let TranscriptEvent::AnswerGiven { tree, source, word } = e {
                match s.question() {
                    Some(q) if q.tree_text == *tree => {}
                    Some(q) => {
                        return Err(SessionError::Mismatch {
                            tree: tree.clone(),
                            expected: q.tree_text.clone(),
                        })
                    }
                    None => {
                        return Err(SessionError::Mismatch {
                            tree: tree.clone(),
                            expected: "nothing".into(),
                        })
                    }
                }
                s.submit(Answer::Text(word.clone()), *source)?;
            }
        }
        Ok(s)
    }

    pub fn restore(saved: &SavedSession) -> Result<Self, SessionError> {
        Session::replay(&saved.adt_source, saved.config, &saved.transcript)
    }
}
