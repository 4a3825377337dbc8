//! Bundled regression fans.

use crate::fan::FanData;
use crate::io::{parse_input_str, InputSpec};

pub const P1: &str = include_str!("../fixtures/p1.json");
pub const P2: &str = include_str!("../fixtures/p2.json");
pub const P1XP1: &str = include_str!("../fixtures/p1xp1.json");
pub const P1XP1_R2: &str = include_str!("../fixtures/p1xp1_r2.json");
pub const F1: &str = include_str!("../fixtures/f1.json");

pub const ALL: [&str; 5] = [P1, P2, P1XP1, P1XP1_R2, F1];

pub fn spec(text: &str) -> InputSpec {
    parse_input_str(text).expect("bundled fixture parses")
}

pub fn fan(text: &str) -> FanData {
    spec(text).to_fan().expect("bundled fixture is consistent")
}

pub fn p1() -> FanData {
    fan(P1)
}

pub fn p2() -> FanData {
    fan(P2)
}

pub fn p1xp1() -> FanData {
    fan(P1XP1)
}

pub fn p1xp1_r2() -> FanData {
    fan(P1XP1_R2)
}

pub fn f1() -> FanData {
    fan(F1)
}

pub fn all() -> Vec<FanData> {
    ALL.iter().map(|t| fan(t)).collect()
}
