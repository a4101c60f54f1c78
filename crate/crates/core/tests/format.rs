use efcce::games::{generate, load, save, GameSpec};
use efcce::{expected_utility, Game};
use proptest::prelude::*;

fn same_game(a: &Game, b: &Game) {
    assert_eq!(a.num_players(), b.num_players());
    assert_eq!(a.sizes(), b.sizes());
    assert_eq!(a.num_terminals(), b.num_terminals());
    let ua: Vec<_> = a.treeplexes().iter().map(|t| efcce::strategy::uniform_strategy(t).values).collect();
    let ub: Vec<_> = b.treeplexes().iter().map(|t| efcce::strategy::uniform_strategy(t).values).collect();
    let (ea, eb) = (expected_utility(a, &ua).unwrap(), expected_utility(b, &ub).unwrap());
    for (x, y) in ea.iter().zip(&eb) {
        assert!((x - y).abs() <= 1e-12);
    }
}

#[test]
fn generated_games_round_trip() {
    for spec in [
        GameSpec::Kuhn2 { ranks: 3 },
        GameSpec::Kuhn3 { ranks: 4 },
        GameSpec::Goofspiel3 { ranks: 2 },
        GameSpec::Leduc3 { ranks: 2 },
        GameSpec::battleship(2, 2, 2),
    ] {
        let game = generate(&spec).unwrap();
        let text = save(&game).unwrap();
        let back = load(&text).unwrap();
        same_game(&game, &back);
        assert_eq!(save(&back).unwrap(), text, "{spec}");
    }
}

proptest! {
    #[test]
    fn loader_never_panics(text in "\\PC*") {
        let _ = load(&text);
    }

    #[test]
    fn loader_survives_mutations(cut in 0usize..400, byte in any::<u8>()) {
        let mut text = save(&generate(&GameSpec::Kuhn2 { ranks: 2 }).unwrap()).unwrap().into_bytes();
        let at = cut % text.len();
        text[at] = byte;
        if let Ok(s) = std::str::from_utf8(&text) {
            let _ = load(s);
        }
    }
}
