#![no_main]

use libfuzzer_sys::fuzz_target;
use rieszkit::operator::{MatrixDump, TruncatedOperator};

fuzz_target!(|data: &[u8]| {
    if let Ok(dump) = serde_json::from_slice::<MatrixDump>(data) {
        if let Ok(op) = TruncatedOperator::from_dump(&dump) {
            // accepted dumps must round-trip
            let again = op.to_dump();
            assert_eq!(again.dim, dump.dim);
            assert_eq!(again.entries, dump.entries);
        }
    }
});
