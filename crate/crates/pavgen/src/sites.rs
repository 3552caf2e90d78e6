//! Insertion sites. Sites of a length-n permutation are the n+1 gaps
//! around its entries, numbered right to left starting at 1; the empty
//! permutation has a single site.

use crate::error::{Error, Result};
use crate::pattern_set::PatternSet;
use crate::perm::Permutation;

/// Number of sites of `alpha` (n+1).
pub fn site_count(alpha: &Permutation) -> usize {
    alpha.len() + 1
}

/// Inserts the next-largest value (n+1) into the `site`th site of `alpha`.
/// Site 1 appends after the last entry; site n+1 prepends. The new maximum
/// lands at position n+2-site from the left.
pub fn insert_at_site(alpha: &Permutation, site: usize) -> Result<Permutation> {
    let n = alpha.len();
    if site == 0 || site > n + 1 {
        return Err(Error::SiteOutOfRange { site, len: n, max: n + 1 });
    }
    let mut entries = Vec::with_capacity(n + 1);
    entries.extend_from_slice(alpha.entries());
    entries.insert(n + 1 - site, n as u32 + 1);
    Ok(Permutation::from_valid(entries))
}

/// All sites of `alpha` whose insertion stays inside S(P), ascending.
/// Errors when `alpha` itself does not avoid `patterns`.
pub fn active_sites(alpha: &Permutation, patterns: &PatternSet) -> Result<Vec<usize>> {
    if !alpha.avoids_all(patterns) {
        return Err(Error::NotAvoiding(alpha.to_string()));
    }
    Ok(active_sites_unchecked(alpha, patterns))
}

/// As `active_sites`, with the avoidance precondition only checked in
/// debug builds. Used on oracle nodes, which avoid P by construction.
pub(crate) fn active_sites_unchecked(alpha: &Permutation, patterns: &PatternSet) -> Vec<usize> {
    debug_assert!(alpha.avoids_all(patterns));
    (1..=site_count(alpha))
        .filter(|&site| {
            insert_at_site(alpha, site)
                .expect("site in range")
                .avoids_all(patterns)
        })
        .collect()
}
