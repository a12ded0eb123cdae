//! The solved sign choices, pinned in a checked-in fixture whose hash is
//! embedded in every report.

use serde::{Deserialize, Serialize};

use crate::cache::sha256_hex;
use crate::error::CalcError;
use crate::hairy::HatRule;
use crate::named::shoikhet;
use crate::operad::{ActionRule, OperadRule};
use crate::sign::{FlipReading, SignConvention};

/// The fixture as shipped with the crate.
pub const FIXTURE: &str = include_str!("../fixtures/sign_conventions.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParitySigns {
    pub parity: String,
    pub convention_id: String,
    pub vertex_transposition: i8,
    pub edge_transposition: i8,
    pub flip: i8,
    pub operad_rule: OperadRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignFixture {
    pub flip_reading: FlipReading,
    pub parities: Vec<ParitySigns>,
    pub hat_rule: HatRule,
    pub action_rule: ActionRule,
    /// Canonical keys and coefficients of the four-vertex cocycle.
    pub shoikhet: Vec<(String, String)>,
}

impl SignFixture {
    /// Recompute every entry from the library's current choices.
    pub fn solved() -> Result<SignFixture, CalcError> {
        let parities = [2i64, 3]
            .into_iter()
            .map(|n| {
                let conv = SignConvention::new(n);
                ParitySigns {
                    parity: if conv.n_odd() { "odd" } else { "even" }.to_string(),
                    convention_id: conv.id(),
                    vertex_transposition: conv.vertex_transposition(),
                    edge_transposition: conv.edge_transposition(),
                    flip: conv.flip(),
                    operad_rule: OperadRule::frozen(conv),
                }
            })
            .collect();
        let s = shoikhet()?;
        Ok(SignFixture {
            flip_reading: FlipReading::default(),
            parities,
            hat_rule: HatRule::FROZEN,
            action_rule: ActionRule::FROZEN,
            shoikhet: s.sorted_terms().into_iter().map(|(k, _, c)| (k, c.to_string())).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("fixture serializes");
        s.push('\n');
        s
    }

    pub fn shipped() -> Result<SignFixture, serde_json::Error> {
        serde_json::from_str(FIXTURE)
    }
}

/// SHA-256 of the shipped fixture text.
pub fn fixture_hash() -> String {
    sha256_hex(FIXTURE.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_fixture_matches_solved_signs() {
        let solved = SignFixture::solved().unwrap();
        assert_eq!(SignFixture::shipped().unwrap(), solved);
        assert_eq!(FIXTURE, solved.to_json(), "fixture text is not in canonical form");
        assert_eq!(fixture_hash().len(), 64);
    }
}
