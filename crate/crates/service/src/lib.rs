//! Interactive printer synthesis as resumable sessions.
//!
//! A [`Session`] wraps one inference run: it asks questions, validates
//! answers, and keeps a replayable [`TranscriptEvent`] log. The
//! [`SessionStore`] addresses sessions by id and can persist them to a
//! directory. [`api::router`] exposes the store over HTTP+JSON.

pub mod api;
mod session;
mod store;

pub use session::{
    Answer, AnswerSource, QuestionView, SavedSession, Session, SessionConfig, SessionError, SessionState, StatsView,
    TranscriptEvent,
};
pub use store::{SessionStore, StoreError};
