#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use zscrew::mangoldt::MangoldtTable;
use zscrew::zerotable::{load_zeros, ZeroTable};

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn zeros_path() -> PathBuf {
    std::env::var_os("ZSCREW_ZEROS").map(PathBuf::from).unwrap_or_else(|| workspace_root().join("data/zeros.txt"))
}

/// All 10⁵ zeros of the bundled table.
pub fn zeros() -> &'static ZeroTable {
    static Z: OnceLock<ZeroTable> = OnceLock::new();
    Z.get_or_init(|| load_zeros(&zeros_path(), 100_000).expect("zero table"))
}

/// Λ(n) to 2^24 (t ≤ 16.6).
pub fn small_table() -> &'static MangoldtTable {
    static T: OnceLock<MangoldtTable> = OnceLock::new();
    T.get_or_init(|| MangoldtTable::build(1 << 24, 1 << 31).expect("sieve"))
}

/// Λ(n) to 2^31, cached under target/.
pub fn full_table() -> &'static MangoldtTable {
    static T: OnceLock<MangoldtTable> = OnceLock::new();
    T.get_or_init(|| {
        let cache = workspace_root().join("target/lm_2p31.bin");
        if let Ok(t) = MangoldtTable::load_cache(&cache) {
            if t.limit() == 1 << 31 {
                return t;
            }
        }
        let t = MangoldtTable::build(1 << 31, 1 << 31).expect("sieve");
        let _ = std::fs::create_dir_all(cache.parent().unwrap());
        let _ = t.save_cache(&cache);
        t
    })
}

/// Naive Λ(n) by trial division.
pub fn von_mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    (n as f64).ln()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
