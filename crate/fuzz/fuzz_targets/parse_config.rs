#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = rieszkit::config::RunConfig::parse(text) {
            // accepted configs must round-trip and hash deterministically
            let canonical = cfg.canonical_toml();
            let back = rieszkit::config::RunConfig::parse(&canonical)
                .expect("canonical form must reparse");
            assert_eq!(back, cfg);
            assert_eq!(back.config_hash(), cfg.config_hash());
        }
    }
});
