#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|src: &str| {
    if let Ok((w, h)) = efcce_cli::parse_grid(src) {
        assert!((1..=64).contains(&w) && (1..=64).contains(&h));
    }
});
