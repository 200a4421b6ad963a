//! Byte-exact golden files for the emitted symbolic objects. Regenerate with
//! `SSF_REGEN_GOLDEN=1 cargo test -p ssf-core --test goldens` after a
//! deliberate format or algebra change, and review the diff.

use ssf_core::invariants::{heat_invariant_closed, xn};
use std::fs;
use std::path::PathBuf;

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("golden")
        .join(name)
}

fn check(name: &str, emitted: &str) {
    let path = golden_path(name);
    if std::env::var_os("SSF_REGEN_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, emitted).unwrap();
        return;
    }
    let want = fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden {name}: {e}; regenerate with SSF_REGEN_GOLDEN=1"));
    assert_eq!(
        emitted, want,
        "golden mismatch for {name}; regenerate deliberately with SSF_REGEN_GOLDEN=1"
    );
}

#[test]
fn heat_invariants_match_goldens() {
    for d in 1..=3usize {
        for n in 1..=4u32 {
            let g = heat_invariant_closed(n, d).unwrap();
            check(&format!("heat_g{n}_d{d}.txt"), &(g.emit() + "\n"));
        }
    }
}

#[test]
fn resolvent_expansion_operators_match_goldens() {
    for d in 1..=3usize {
        for n in 1..=3u32 {
            let op = xn(n, d).unwrap();
            check(&format!("x{n}_d{d}.txt"), &(op.emit() + "\n"));
        }
    }
}

#[test]
fn emission_is_deterministic() {
    let a = heat_invariant_closed(4, 3).unwrap();
    let b = heat_invariant_closed(4, 3).unwrap();
    assert_eq!(a.emit(), b.emit());
    let p = xn(3, 2).unwrap();
    let q = xn(3, 2).unwrap();
    assert_eq!(p.emit(), q.emit());
}
