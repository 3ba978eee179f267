//! Default instrument catalogues: the people-index questions, the
//! interface-utility questions and the geographical factors.
//!
//! The shipped lists are starting points. A deployment can point
//! [`Catalog::load_dir`] at a directory holding its own copies of any of the
//! three files to extend or replace them.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Question {
    pub id: String,
    pub prompt: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorTemplate {
    pub id: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub pi_questions: Vec<Question>,
    pub iu_questions: Vec<Question>,
    pub gq_factors: Vec<FactorTemplate>,
}

pub const PI_QUESTIONS_FILE: &str = "pi_questions.json";
pub const IU_QUESTIONS_FILE: &str = "iu_questions.json";
pub const GQ_FACTORS_FILE: &str = "gq_factors.json";

const PI_QUESTIONS: &str = include_str!("../catalog/pi_questions.json");
const IU_QUESTIONS: &str = include_str!("../catalog/iu_questions.json");
const GQ_FACTORS: &str = include_str!("../catalog/gq_factors.json");

impl Default for Catalog {
    fn default() -> Self {
        Catalog {
            pi_questions: serde_json::from_str(PI_QUESTIONS).expect("bundled PI catalogue"),
            iu_questions: serde_json::from_str(IU_QUESTIONS).expect("bundled IU catalogue"),
            gq_factors: serde_json::from_str(GQ_FACTORS).expect("bundled GQ catalogue"),
        }
    }
}

impl Catalog {
    /// Loads catalogue files from `dir`, falling back to the bundled copy
    /// for any file that is absent.
    pub fn load_dir(dir: &Path) -> io::Result<Self> {
        fn read<T: for<'de> Deserialize<'de>>(path: &Path, fallback: T) -> io::Result<T> {
            match std::fs::read_to_string(path) {
                Ok(text) => serde_json::from_str(&text).map_err(|e| {
                    io::Error::new(
                        io::ErrorKind::InvalidData,
                        format!("{}: {e}", path.display()),
                    )
                }),
                Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(fallback),
                Err(e) => Err(e),
            }
        }
        let defaults = Catalog::default();
        let catalog = Catalog {
            pi_questions: read(&dir.join(PI_QUESTIONS_FILE), defaults.pi_questions)?,
            iu_questions: read(&dir.join(IU_QUESTIONS_FILE), defaults.iu_questions)?,
            gq_factors: read(&dir.join(GQ_FACTORS_FILE), defaults.gq_factors)?,
        };
        if catalog.iu_questions.len() != crate::instruments::IU_QUESTIONS {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                "the interface checklist must have exactly 4 questions",
            ));
        }
        Ok(catalog)
    }
}
