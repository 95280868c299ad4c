//! Translations between the calculi.

mod admin;
mod cps;
mod pi;
mod saturate;

use thiserror::Error;

use crate::ident::Ident;
use crate::typecheck::TypeError;

pub use admin::{embed_parallel, readback, readback_type, readback_with, to_admin, to_admin_type, ReadbackConfig};
pub use cps::{cont_type, cps_transform, cps_type};
pub use pi::{from_pi, to_pi};
pub use saturate::saturate_usages;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TranslationName {
    Adm,
    Readback,
    Cps,
    ToPi,
    FromPi,
    EmbedPar,
    Saturate,
}

impl TranslationName {
    pub const ALL: [TranslationName; 7] = [
        TranslationName::Adm,
        TranslationName::Readback,
        TranslationName::Cps,
        TranslationName::ToPi,
        TranslationName::FromPi,
        TranslationName::EmbedPar,
        TranslationName::Saturate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TranslationName::Adm => "adm",
            TranslationName::Readback => "readback",
            TranslationName::Cps => "cps",
            TranslationName::ToPi => "to-pi",
            TranslationName::FromPi => "from-pi",
            TranslationName::EmbedPar => "embed",
            TranslationName::Saturate => "saturate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("readback needs usage inf, but `{0}` has another usage")]
    UsageNotInfinite(Ident),
    #[error("not in CPS shape: {0}")]
    NotCpsShape(String),
    #[error("process is not typable: {0}")]
    UntypablePi(TypeError),
    #[error("source is not well typed: {0}")]
    IllTyped(TypeError),
    #[error("no well-typed value can replace the definition of `{0}`")]
    CannotSaturate(Ident),
    #[error("`{0}` is not fresh for the term")]
    NameNotFresh(Ident),
}
