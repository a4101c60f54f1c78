#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(game) = efcce::games::load(text) else {
        return;
    };
    // anything that loads must save and load back to the same text
    let saved = efcce::games::save(&game).expect("loaded ids are savable");
    let again = efcce::games::load(&saved).expect("saved text loads");
    assert_eq!(efcce::games::save(&again).unwrap(), saved);
});
