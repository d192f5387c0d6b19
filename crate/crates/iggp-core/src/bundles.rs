//! Reference games shipped with the crate, embedded from `games/`. Each
//! bundle parses, stratifies, and plays out to completion; tests and the
//! examples lean on them, and the CLI accepts their names anywhere a game
//! file path is expected.

use crate::load::{load_game_from_texts, LoadError, LoadedGame};

#[derive(Clone, Copy, Debug)]
pub struct GameBundle {
    pub name: &'static str,
    pub gdl: &'static str,
    pub sig: &'static str,
    /// Where the encoding comes from; these are reconstructions, not the
    /// upstream competition files.
    pub provenance: &'static str,
}

pub const BUNDLES: &[GameBundle] = &[
    GameBundle {
        name: "rock_paper_scissors",
        gdl: include_str!("../games/rock_paper_scissors/game.gdl"),
        sig: include_str!("../games/rock_paper_scissors/signature.sig"),
        provenance: "Reconstruction of the GGP competition game; three fixed rounds, score and step fluents, one point per round won.",
    },
    GameBundle {
        name: "fizz_buzz",
        gdl: include_str!("../games/fizz_buzz/game.gdl"),
        sig: include_str!("../games/fizz_buzz/signature.sig"),
        provenance: "Reconstruction of the single-player GGP counting game; counter runs 1..31, reward banded on the success tally.",
    },
    GameBundle {
        name: "minimal_decay",
        gdl: include_str!("../games/minimal_decay/game.gdl"),
        sig: include_str!("../games/minimal_decay/signature.sig"),
        provenance: "Reconstruction of the one-rule warm-up game; a value decays to zero.",
    },
    GameBundle {
        name: "buttons_and_lights",
        gdl: include_str!("../games/buttons_and_lights/game.gdl"),
        sig: include_str!("../games/buttons_and_lights/signature.sig"),
        provenance: "Reconstruction of the GGP buttons puzzle; toggle/swap dynamics over three lamps, seven steps.",
    },
];

pub fn bundle_names() -> Vec<&'static str> {
    BUNDLES.iter().map(|b| b.name).collect()
}

pub fn find_bundle(name: &str) -> Option<&'static GameBundle> {
    BUNDLES.iter().find(|b| b.name == name)
}

/// Load and validate a bundled game by name.
pub fn load_bundle(name: &str) -> Result<LoadedGame, LoadError> {
    let bundle = find_bundle(name).ok_or_else(|| LoadError::UnknownBundle {
        name: name.to_string(),
    })?;
    load_game_from_texts(bundle.name, bundle.gdl, bundle.sig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameState;
    use crate::gdl::Term;
    use crate::symbol::Symbol;
    use std::collections::BTreeSet;

    #[test]
    fn unknown_bundle_is_an_error() {
        assert!(matches!(
            load_bundle("chess"),
            Err(LoadError::UnknownBundle { .. })
        ));
    }

    #[test]
    fn all_bundles_load() {
        for bundle in BUNDLES {
            let loaded = load_bundle(bundle.name).unwrap();
            assert!(!loaded.game.roles().is_empty(), "{} has roles", bundle.name);
        }
    }

    #[test]
    fn rps_contains_the_reference_rules() {
        let loaded = load_bundle("rock_paper_scissors").unwrap();
        let program = loaded.game.program();
        let text = program.to_gdl_string();
        assert!(text.contains("(<= (next (step ?v0)) (true (step ?v1)) (succ ?v1 ?v0))"));
        assert!(text.contains("(<= (wins ?v0) (does ?v0 ?v1) (does ?v2 ?v3) (distinct ?v0 ?v2) (beats ?v1 ?v3))"));
        let roles: Vec<&str> = loaded.game.roles().iter().map(|s| s.as_str()).collect();
        assert_eq!(roles, ["p1", "p2"]);
    }

    #[test]
    fn rps_initial_state_and_legal_moves() {
        let loaded = load_bundle("rock_paper_scissors").unwrap();
        let init = loaded.game.initial_state().unwrap();
        let expected = GameState::from_terms([
            Term::compound("score", vec![Term::constant("p1"), Term::constant("0")]),
            Term::compound("score", vec![Term::constant("p2"), Term::constant("0")]),
            Term::compound("step", vec![Term::constant("0")]),
        ]);
        assert_eq!(init, expected);
        let legal = loaded.game.legal_moves(&init).unwrap();
        let all: BTreeSet<Term> = ["paper", "scissors", "stone"].iter().map(|a| Term::constant(a)).collect();
        assert_eq!(legal[&Symbol::new("p1")], all);
        assert_eq!(legal[&Symbol::new("p2")], all);
    }

    #[test]
    fn fizz_buzz_terminal_fires_at_31() {
        let loaded = load_bundle("fizz_buzz").unwrap();
        let at = |n: &str| {
            GameState::from_terms([
                Term::compound("count", vec![Term::constant(n)]),
                Term::compound("success", vec![Term::constant("0")]),
            ])
        };
        assert!(!loaded.game.is_terminal(&at("27")).unwrap());
        assert!(loaded.game.is_terminal(&at("31")).unwrap());
        let roles: Vec<&str> = loaded.game.roles().iter().map(|s| s.as_str()).collect();
        assert_eq!(roles, ["player"]);
    }
}
