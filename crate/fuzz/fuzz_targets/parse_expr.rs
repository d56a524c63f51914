#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        if let Ok(ast) = rieszkit::expr::parse(src) {
            // printing a parsed expression must reach a fixed point
            let printed = ast.to_string();
            let reparsed = rieszkit::expr::parse(&printed)
                .expect("printed expression must reparse");
            assert_eq!(reparsed.to_string(), printed);
        }
    }
});
