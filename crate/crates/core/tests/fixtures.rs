use std::fs;
use std::path::PathBuf;

use orbgrand_core::pattern::{read_patterns, write_patterns};
use orbgrand_core::schedule::Schedule;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

#[test]
fn golden_sequences() {
    for (label, schedule) in [("lwo", Schedule::Lwo), ("ilwo", Schedule::Ilwo), ("ilwo-approx", Schedule::IlwoApprox)] {
        for n in [5usize, 8, 16] {
            let path = fixture(&format!("{label}_n{n}_q200.txt"));
            let text = fs::read_to_string(&path).unwrap();
            let expected = read_patterns(text.as_bytes(), n).unwrap();
            let got = schedule.materialize(n, 200, None).unwrap();
            assert_eq!(got, expected, "{label} N={n}");

            let mut buf = Vec::new();
            write_patterns(&mut buf, &got).unwrap();
            assert_eq!(String::from_utf8(buf).unwrap(), text, "{label} N={n} text form");
        }
    }
}

#[test]
fn full_spaces_for_small_n() {
    for label in ["lwo", "ilwo"] {
        let text = fs::read_to_string(fixture(&format!("{label}_n5_q200.txt"))).unwrap();
        assert_eq!(read_patterns(text.as_bytes(), 5).unwrap().len(), 32);
    }
    // Every pattern of weight at most three fits below the generator's last level at N = 5.
    let text = fs::read_to_string(fixture("ilwo-approx_n5_q200.txt")).unwrap();
    assert_eq!(read_patterns(text.as_bytes(), 5).unwrap().len(), 26);
}

#[test]
fn file_schedule_replays_fixture() {
    let path = fixture("ilwo_n16_q200.txt");
    let replayed = Schedule::File(path).materialize(16, 50, Some(2)).unwrap();
    let direct = Schedule::Ilwo.materialize(16, 50, Some(2)).unwrap();
    assert_eq!(replayed, direct);
}
