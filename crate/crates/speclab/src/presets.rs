//! The `speclab presets` listing.

use std::fmt::Write;

use speclab_core::sequences::{BackgroundPreset, PerturbationPreset};

use crate::config::{Kind, KEYS};

fn list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Presets, kinds and config keys, sorted by name.
pub fn listing() -> String {
    let mut s = String::new();
    let mut perturbations = PerturbationPreset::ALL;
    perturbations.sort_by_key(|p| p.name());
    let mut backgrounds = BackgroundPreset::ALL;
    backgrounds.sort_by_key(|p| p.name());

    s.push_str("perturbations:\n");
    for p in perturbations {
        let _ = writeln!(s, "  {:<18} {}", p.name(), p.summary());
    }
    s.push_str("backgrounds:\n");
    for b in backgrounds {
        let (a, bb) = b.vectors();
        let _ = writeln!(s, "  {:<18} a = [{}], b = [{}]", b.name(), list(&a), list(&bb));
    }
    let _ = writeln!(s, "  {:<18} seeded draw of period k (needs family.k)", "random");
    s.push_str("kinds:\n");
    for k in Kind::ALL {
        let _ = writeln!(s, "  {:<18} {}", k.name(), k.summary());
    }
    s.push_str("config keys (default):\n");
    for (key, default) in KEYS {
        let _ = writeln!(s, "  {key:<30} {default}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_is_stable_and_complete() {
        let a = listing();
        assert_eq!(a, listing());
        for name in ["trace_class_demo", "cesaro_demo", "period3_gap", "blockcheck", "ladder.n"] {
            assert!(a.contains(name), "{name}");
        }
    }
}
