use roseman::dga_core::Variant;
use roseman::moves::{check_move_pair, MOVE_PAIRS};

#[test]
fn every_pair_reduces_to_a_common_algebra() {
    let mut bad = Vec::new();
    for pair in MOVE_PAIRS {
        for v in Variant::ALL {
            match check_move_pair(pair, v) {
                Ok(o) if o.comparison.equal => {}
                Ok(o) => bad.push(format!("{} {v}: {}", pair.name, o.comparison.discrepancy.unwrap())),
                Err(e) => bad.push(format!("{} {v}: {e}", pair.name)),
            }
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}
