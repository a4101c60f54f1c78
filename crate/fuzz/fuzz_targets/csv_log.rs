#![no_main]
use efcce::dynamics::log;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((n, rows)) = log::parse_csv(text) {
        let back = log::parse_csv(&log::to_csv(n, &rows)).expect("written logs parse");
        assert_eq!(back.0, n);
        assert_eq!(back.1.len(), rows.len());
    }
});
