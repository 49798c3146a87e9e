//! Picks the profile entry that best satisfies a set of semantic
//! constraints.

use std::collections::BTreeSet;

use crate::error::{LexError, Result};
use crate::profiles::{Profile, ProfileEntry};
use crate::taxonomy::SynsetId;

/// All entries ordered best-first with their overlap scores.
///
/// Entries are ranked by constraint overlap, then higher corpus
/// frequency, then fewer unrequested tags, then lexicographic
/// description. With empty constraints or no overlapping entry this
/// degrades to a frequency ranking, so a single-entry profile always
/// returns its one description.
pub fn rank_descriptions<'p>(
    profile: &'p Profile,
    constraints: &BTreeSet<SynsetId>,
) -> Result<Vec<(&'p ProfileEntry, usize)>> {
    if profile.entries.is_empty() {
        return Err(LexError::Lookup(format!(
            "profile for {:?} has no entries",
            profile.entity
        )));
    }
    let mut scored: Vec<(&ProfileEntry, usize)> = profile
        .entries
        .iter()
        .map(|e| (e, e.tags.intersection(constraints).count()))
        .collect();
    scored.sort_by(|(a, sa), (b, sb)| {
        sb.cmp(sa)
            .then_with(|| b.frequency.cmp(&a.frequency))
            .then_with(|| {
                let excess_a = a.tags.difference(constraints).count();
                let excess_b = b.tags.difference(constraints).count();
                excess_a.cmp(&excess_b)
            })
            .then_with(|| a.description.cmp(&b.description))
    });
    Ok(scored)
}

/// The top-ranked entry; see [`rank_descriptions`] for the order.
pub fn choose_description<'p>(
    profile: &'p Profile,
    constraints: &BTreeSet<SynsetId>,
) -> Result<&'p ProfileEntry> {
    Ok(rank_descriptions(profile, constraints)?[0].0)
}
