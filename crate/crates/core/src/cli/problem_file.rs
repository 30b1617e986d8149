//! JSON problem files.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DiscreteProblem, ObjectKind, State};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub kind: ObjectKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agents: Option<Vec<String>>,
    pub states: Vec<State>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("problem file: {e}")))
    }

    pub fn from_problem(p: &DiscreteProblem, agents: Option<Vec<String>>) -> Self {
        Self {
            kind: p.kind(),
            agents,
            states: p.states().to_vec(),
        }
    }

    pub fn to_problem(&self) -> Result<DiscreteProblem> {
        let p = DiscreteProblem::new(self.kind, self.states.clone())?;
        if let Some(labels) = &self.agents {
            if labels.len() != p.n() {
                return Err(Error::InvalidArgument(format!(
                    "{} agent labels for {} agents",
                    labels.len(),
                    p.n()
                )));
            }
        }
        Ok(p)
    }

    /// Label of agent `i`: the file's label, else `a`, `b`, ... .
    pub fn label(&self, i: usize) -> String {
        match &self.agents {
            Some(l) => l[i].clone(),
            None if i < 26 => ((b'a' + i as u8) as char).to_string(),
            None => format!("agent{}", i + 1),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
