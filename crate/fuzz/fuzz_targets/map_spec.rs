#![no_main]

use libfuzzer_sys::fuzz_target;
use loewner::linalg::{ComplexMatrix, Tolerances};
use loewner::maps::MapSpec;

fn small_numbers(text: &str) -> bool {
    text.split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .all(|t| t.parse::<u32>().is_ok_and(|n| n <= 64))
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = text.parse::<MapSpec>() else { return };
    if !text.contains('@') {
        let again: MapSpec = spec.to_string().parse().expect("displayed spec parses");
        assert_eq!(again, spec);
    }
    if small_numbers(text) {
        let no_files = |_: &str| -> loewner::Result<ComplexMatrix> {
            Err(loewner::Error::InvalidArgument("no files".into()))
        };
        let _ = spec.resolve(3, no_files, &Tolerances::default());
    }
});
