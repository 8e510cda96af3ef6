//! Brute-force census of numerical semigroups, independent of the tree.
//!
//! Instead of walking the parent/child structure, this enumerates
//! candidate gap sets directly: a subset search over [1, 2*max_genus]
//! decides membership one integer at a time, pruning any branch where a
//! chosen gap is the sum of two already-chosen elements or where the gap
//! budget is exceeded. Every completed assignment is a numerical
//! semigroup (all gaps of a genus-g semigroup lie below 2g), and its
//! efficacy and descent class are computed from the definition alone.
//!
//! This is the oracle the fast traversal is checked against; it must not
//! share code with the incremental child derivation.

use crate::error::{Error, Result};
use crate::tree::CountTable;

/// The subset search is exponential; past this depth it stops being a
/// practical oracle.
pub const CENSUS_MAX_GENUS: u32 = 18;

struct Search {
    window: u32,
    max_genus: u32,
    table: CountTable,
}

impl Search {
    /// Is `v` a sum of two nonzero complement elements, looking only at
    /// decided positions (everything in [1, v-1] when v <= window + 1)?
    fn is_sum(gaps: u64, v: u32) -> bool {
        (1..=v / 2).any(|a| {
            let b = v - a;
            gaps >> a & 1 == 0 && gaps >> b & 1 == 0
        })
    }

    fn record(&mut self, gaps: u64) {
        let genus = gaps.count_ones();
        let f: i64 = if gaps == 0 {
            -1
        } else {
            63 - gaps.leading_zeros() as i64
        };
        let m: i64 = (1..)
            .find(|&x| x > self.window as i64 || gaps >> x & 1 == 0)
            .unwrap();
        let member = |x: i64| x >= 0 && (x > self.window as i64 || gaps >> x & 1 == 0);

        // efficacy from the definition: x in (f, f + 2m] that are not
        // sums of two nonzero elements
        let eff: Vec<i64> = (f + 1..=f + 2 * m)
            .filter(|&x| x > 0 && !(m..=x / 2).any(|a| member(a) && member(x - a)))
            .collect();
        let h = eff.len() as u32;
        let strongly = genus == 0 || eff.contains(&(m + f));
        self.table.tally_cell(genus, h, strongly);
    }

    fn walk(&mut self, n: u32, gaps: u64, count: u32) {
        if count == self.max_genus || n > self.window {
            // remaining positions are forced to be elements, which can
            // never violate closure; this completes exactly one semigroup
            self.record(gaps);
            return;
        }
        self.walk(n + 1, gaps, count);
        if !Self::is_sum(gaps, n) {
            self.walk(n + 1, gaps | 1 << n, count + 1);
        }
    }
}

/// Produces the same table as `count_tables` by exhaustive gap-set
/// search. Capped at genus 18.
pub fn brute_force_census(max_genus: u32) -> Result<CountTable> {
    if max_genus > CENSUS_MAX_GENUS {
        return Err(Error::CensusCapExceeded {
            requested: max_genus,
            cap: CENSUS_MAX_GENUS,
        });
    }
    let mut search = Search {
        window: 2 * max_genus,
        max_genus,
        table: CountTable::zeroed(max_genus),
    };
    search.walk(1, 0, 0);
    let mut table = search.table;
    table.finalize()?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{count_tables, TraversalOptions};

    #[test]
    fn small_counts() {
        let t = brute_force_census(4).unwrap();
        assert_eq!(t.n_values(), &[1, 1, 2, 4, 7]);
        assert_eq!(t.t(1, 2), 1);
        assert_eq!(t.t(2, 1), 1);
        assert_eq!(t.t(2, 3), 1);
    }

    #[test]
    fn agrees_with_tree_enumeration() {
        for g in 0..=9u32 {
            let census = brute_force_census(g).unwrap();
            let tree = count_tables(g, &TraversalOptions::serial()).unwrap();
            assert_eq!(census, tree, "genus {g}");
        }
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            brute_force_census(19),
            Err(Error::CensusCapExceeded { .. })
        ));
    }
}
