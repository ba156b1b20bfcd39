use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// The stochastic models handled by the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// The two 2-periodic alternating sequences, each with probability 1/2.
    Toy,
    /// Close-packed dimers with i.i.d. fair orientations.
    Dms,
    /// Image of the DMS under `v_n = -w_n w_{n+1}`.
    #[serde(rename = "factory")]
    FactorY,
    /// Thue–Morse magnitudes 1/5, 7/5 with i.i.d. fair signs.
    #[serde(rename = "tmcover")]
    TmCover,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Toy, Model::Dms, Model::FactorY, Model::TmCover];

    pub fn name(self) -> &'static str {
        match self {
            Model::Toy => "toy",
            Model::Dms => "dms",
            Model::FactorY => "factory",
            Model::TmCover => "tmcover",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s
            .trim()
            .to_ascii_lowercase()
            .replace(['-', '_'], "")
            .as_str()
        {
            "toy" => Ok(Model::Toy),
            "dms" => Ok(Model::Dms),
            "factory" | "y" => Ok(Model::FactorY),
            "tmcover" | "tm" => Ok(Model::TmCover),
            other => Err(Error::Parse(format!("unknown model `{other}`"))),
        }
    }
}
