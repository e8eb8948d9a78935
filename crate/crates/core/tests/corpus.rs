//! Regenerates the scrambled corpus from seeds and runs it through the text
//! format, so both the generator and the runner see fresh coordinates.

use hodgecalc::harness::corpus::scrambled_fixture;
use hodgecalc::harness::format::{parse_fixture, to_canonical_string, Verdict};
use hodgecalc::harness::runner::run_file;

#[test]
fn hundred_scrambled_fixtures_match_their_expectations() {
    let mut failed = 0;
    for seed in 0..100 {
        let f = scrambled_fixture(seed, 8).unwrap();
        let text = to_canonical_string(&f);
        let back = parse_fixture(&text).unwrap();
        assert_eq!(to_canonical_string(&back), text, "seed {seed}: text round trip");
        let r = run_file(&format!("scrambled-{seed}"), &back).unwrap();
        assert!(r.all_matched(), "seed {seed}:\n{r}");
        failed += r.outcomes.iter().filter(|o| o.expect == Verdict::Fail).count();
    }
    assert!(failed >= 100, "expected-failure checks: {failed}");
}
