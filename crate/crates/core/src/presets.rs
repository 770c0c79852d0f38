//! Built-in presentations.

use crate::words::{parse_presentation, Letter, Presentation, PresentationFile, Word};

const F2: &str = include_str!("../presets/f2.pres");
const F3: &str = include_str!("../presets/f3.pres");
const SURFACE2: &str = include_str!("../presets/surface2.pres");
const FIG8: &str = include_str!("../presets/fig8.pres");
const S3: &str = include_str!("../presets/s3.pres");
const Z2Z2: &str = include_str!("../presets/z2z2.pres");

/// Names accepted by [`preset`]; `lamplighter<m>` takes a numeric suffix.
pub const PRESET_NAMES: [&str; 7] = ["f2", "f3", "surface2", "fig8", "s3", "z2z2", "lamplighter<m>"];

/// Look up a preset by name, e.g. `fig8` or `lamplighter3`.
pub fn preset(name: &str) -> Option<PresentationFile> {
    let text = match name {
        "f2" => F2,
        "f3" => F3,
        "surface2" => SURFACE2,
        "fig8" => FIG8,
        "s3" => S3,
        "z2z2" => Z2Z2,
        other => {
            let m: u32 = other.strip_prefix("lamplighter")?.parse().ok()?;
            return (1..=5).contains(&m).then(|| PresentationFile { presentation: lamplighter(m), subgroups: Vec::new() });
        }
    };
    Some(parse_presentation(text).expect("built-in presets parse"))
}

pub fn free_group(rank: usize) -> Presentation {
    let names: Vec<String> = if rank <= 3 { ["a", "b", "c"][..rank].iter().map(|s| s.to_string()).collect() } else { (0..rank).map(|i| format!("x{i}")).collect() };
    Presentation::free(names).expect("valid names")
}

pub fn figure_eight() -> Presentation {
    preset("fig8").unwrap().presentation
}

pub fn surface_genus2() -> Presentation {
    preset("surface2").unwrap().presentation
}

pub fn symmetric3() -> Presentation {
    preset("s3").unwrap().presentation
}

/// `a^(t^i) = t⁻ⁱ a tⁱ` with `a`, `t` generators 0 and 1.
pub fn lamp(i: i64) -> Word {
    Word::generator(0).conjugate(&Word::power_of(1, i))
}

/// Finite quotient `ℤ/2 ≀ ℤ/2^m` of the lamplighter group:
/// `⟨a, t | a², t^(2^m), [a, a^(t^i)] for 1 ≤ i ≤ 2^(m−1)⟩`.
pub fn lamplighter(m: u32) -> Presentation {
    let period = 1i64 << m;
    let mut rels = vec![Word::power_of(0, 2), Word::power_of(1, period)];
    for i in 1..=period / 2 {
        let a = Word::generator(0);
        let c = lamp(i);
        rels.push(Word::from_letters(a.letters().iter().chain(c.letters()).copied().chain([Letter::neg(0)]).chain(c.inverse().letters().iter().copied())));
    }
    Presentation::new(vec!["a", "t"], rels).expect("valid lamplighter presentation")
}

/// Free product `A ∗ ℤ`: the generators and relators of `a` plus a new
/// generator named `t` (or `t_` if `t` is taken).
pub fn free_product_with_z(a: &Presentation) -> Presentation {
    let mut names: Vec<String> = a.names().to_vec();
    let mut t = "t".to_string();
    while names.contains(&t) {
        t.push('_');
    }
    names.push(t);
    Presentation::new(names, a.relators().to_vec()).expect("extending names keeps relators valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{enumerate, DEFAULT_COSET_CAP};
    use crate::words::SubgroupSpec;

    #[test]
    fn all_presets_parse() {
        for name in ["f2", "f3", "surface2", "fig8", "s3", "z2z2", "lamplighter2"] {
            assert!(preset(name).is_some(), "{name}");
        }
        assert!(preset("nope").is_none());
        assert_eq!(preset("fig8").unwrap().subgroup("base").unwrap().generators.len(), 2);
    }

    #[test]
    fn lamplighter_orders() {
        for m in 1..=3u32 {
            let p = lamplighter(m);
            let t = enumerate(&p, &SubgroupSpec::trivial(), DEFAULT_COSET_CAP).unwrap();
            assert_eq!(t.index(), 1usize << ((1 << m) + m));
        }
    }
}
