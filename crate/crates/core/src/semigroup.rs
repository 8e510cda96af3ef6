//! The numerical semigroup value type.
//!
//! A numerical semigroup is a subset of the nonnegative integers that is
//! closed under addition, contains 0, and has a finite complement (its
//! *gaps*). The type stores the sorted gap list plus cached derived data:
//! multiplicity `m` (least nonzero element), Frobenius number `f` (largest
//! gap, -1 for the full semigroup), genus `g` (number of gaps), the
//! effective generators, and the descent flags.
//!
//! An *effective generator* is an x > f that is not the sum of two nonzero
//! elements; removing it yields a child on the semigroup tree. The number
//! of effective generators is the node's *efficacy*. Each child inherits
//! the parent's effective generators above the removed x (its *weak*
//! generators) and can gain at most two new ones, which `children`
//! computes incrementally; `effective_generators_by_definition` recomputes
//! the same set from scratch so the two routes can be checked against
//! each other.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Semigroup {
    multiplicity: u32,
    frobenius: i64,
    genus: u32,
    gaps: Vec<u32>,
    effective_generators: Vec<u32>,
    strongly_descended: bool,
    super_strongly_descended: bool,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Semigroup {
    /// The tree root: all nonnegative integers. Genus 0, multiplicity 1,
    /// Frobenius -1 (max over an empty gap set), one effective generator.
    /// Declared strongly descended but not super-strongly descended.
    pub fn root() -> Self {
        Semigroup {
            multiplicity: 1,
            frobenius: -1,
            genus: 0,
            gaps: Vec::new(),
            effective_generators: vec![1],
            strongly_descended: true,
            super_strongly_descended: false,
        }
    }

    /// The semigroup generated by the given positive integers (all their
    /// nonnegative linear combinations). The generators must be setwise
    /// relatively prime, otherwise the complement would be infinite.
    pub fn from_generators(gens: &[u64]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if gens.contains(&0) {
            return Err(Error::ZeroGenerator);
        }
        let g = gens.iter().copied().fold(0, gcd);
        if g != 1 {
            return Err(Error::NotCoprime { gcd: g });
        }
        let mut sorted: Vec<u64> = gens.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let m = sorted[0] as usize;

        // Sieve reachable sums. Once m consecutive integers are reachable,
        // everything beyond them is too, so the gap set is complete. The
        // cutoff x1*x2 almost always suffices; the loop doubles it if not.
        let mut bound = if sorted.len() == 1 {
            2 * m + 2
        } else {
            (sorted[0] * sorted[1]) as usize + m + 2
        };
        loop {
            let mut reach = vec![false; bound + 1];
            reach[0] = true;
            for i in 1..=bound {
                reach[i] = sorted
                    .iter()
                    .take_while(|&&x| x as usize <= i)
                    .any(|&x| reach[i - x as usize]);
            }
            if let Some(run_start) = (0..=bound.saturating_sub(m))
                .find(|&i| (i..i + m).all(|j| reach[j]))
            {
                let gaps: Vec<u32> =
                    (1..run_start).filter(|&i| !reach[i]).map(|i| i as u32).collect();
                return Ok(Self::from_sorted_gaps_trusted(gaps));
            }
            bound *= 2;
        }
    }

    /// Builds a semigroup from its gap set, validating that the complement
    /// is closed under addition.
    pub fn from_gaps(gaps: &[u32]) -> Result<Self> {
        let mut sorted = gaps.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.first() == Some(&0) {
            return Err(Error::MalformedTable("0 cannot be a gap".into()));
        }
        let sg = Self::from_sorted_gaps_trusted(sorted);
        if let Some((a, b)) = sg.closure_violation() {
            return Err(Error::NotAGapSet(a, b, a + b));
        }
        Ok(sg)
    }

    /// Internal constructor: derives every cached field from a sorted,
    /// deduplicated gap list assumed to describe a genuine semigroup.
    pub(crate) fn from_sorted_gaps_trusted(gaps: Vec<u32>) -> Self {
        let genus = gaps.len() as u32;
        let frobenius = gaps.last().map_or(-1, |&f| f as i64);
        let multiplicity = (1u32..).find(|&x| gaps.binary_search(&x).is_err()).unwrap();
        let mut sg = Semigroup {
            multiplicity,
            frobenius,
            genus,
            gaps,
            effective_generators: Vec::new(),
            strongly_descended: false,
            super_strongly_descended: false,
        };
        sg.effective_generators = sg.effective_generators_by_definition();
        sg.strongly_descended = sg.genus == 0
            || sg
                .effective_generators
                .binary_search(&((sg.multiplicity as i64 + sg.frobenius) as u32))
                .is_ok();
        sg.super_strongly_descended = sg.is_ordinary() && sg.multiplicity >= 2;
        sg
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    /// Largest nonnegative integer not in the semigroup; -1 for the root.
    pub fn frobenius(&self) -> i64 {
        self.frobenius
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn gaps(&self) -> &[u32] {
        &self.gaps
    }

    pub fn effective_generators(&self) -> &[u32] {
        &self.effective_generators
    }

    /// Number of children on the semigroup tree.
    pub fn efficacy(&self) -> u32 {
        self.effective_generators.len() as u32
    }

    pub fn strongly_descended(&self) -> bool {
        self.strongly_descended
    }

    pub fn super_strongly_descended(&self) -> bool {
        self.super_strongly_descended
    }

    /// {0, m, m+1, ...}: every integer from the multiplicity on is an
    /// element. The root qualifies with m = 1.
    pub fn is_ordinary(&self) -> bool {
        self.genus == 0 || self.frobenius == self.multiplicity as i64 - 1
    }

    pub fn is_member(&self, n: i64) -> bool {
        if n < 0 {
            return false;
        }
        if n > self.frobenius {
            return true;
        }
        self.gaps.binary_search(&(n as u32)).is_err()
    }

    /// Recomputes the effective generators from the definition: x > f,
    /// x an element, x not the sum of two nonzero elements. All such x
    /// lie in (f, f + 2m], since any element above f + 2m is m plus an
    /// element above f.
    pub fn effective_generators_by_definition(&self) -> Vec<u32> {
        let f = self.frobenius;
        let m = self.multiplicity as i64;
        (f + 1..=f + 2 * m)
            .filter(|&x| x > 0 && !self.is_sum_of_two_nonzero(x))
            .map(|x| x as u32)
            .collect()
    }

    fn is_sum_of_two_nonzero(&self, v: i64) -> bool {
        let m = self.multiplicity as i64;
        (m..=v / 2).any(|a| self.is_member(a) && self.is_member(v - a))
    }

    /// The children on the semigroup tree: one per effective generator x,
    /// equal to this semigroup with x turned into a gap. Child fields are
    /// derived incrementally: the weak generators are this node's
    /// effective generators above x, the candidate m + x is kept when it
    /// is not a sum of two nonzero child elements (the strong generator),
    /// and m + x + 1 is appended exactly when the child is ordinary.
    pub fn children(&self) -> Vec<Semigroup> {
        let m = self.multiplicity;
        self.effective_generators
            .iter()
            .enumerate()
            .map(|(idx, &x)| {
                let mut gaps = self.gaps.clone();
                gaps.push(x);
                let child_m = if x == m { m + 1 } else { m };
                let child_ordinary = self.is_ordinary() && x == m;

                let mut eff: Vec<u32> =
                    self.effective_generators[idx + 1..].to_vec();
                let c1 = m + x;
                let member = |n: i64| -> bool {
                    n >= 0 && n != x as i64 && self.is_member(n)
                };
                let c1_is_sum = (child_m as i64..=c1 as i64 / 2)
                    .any(|a| member(a) && member(c1 as i64 - a));
                if !c1_is_sum {
                    eff.push(c1);
                }
                if child_ordinary {
                    eff.push(c1 + 1);
                }

                Semigroup {
                    multiplicity: child_m,
                    frobenius: x as i64,
                    genus: self.genus + 1,
                    gaps,
                    effective_generators: eff,
                    strongly_descended: child_ordinary || !c1_is_sum,
                    super_strongly_descended: child_ordinary,
                }
            })
            .collect()
    }

    /// The parent on the tree: this semigroup with its Frobenius number
    /// added back. Errors on the root.
    pub fn parent(&self) -> Result<Semigroup> {
        if self.genus == 0 {
            return Err(Error::RootHasNoParent);
        }
        let mut gaps = self.gaps.clone();
        gaps.pop();
        Ok(Self::from_sorted_gaps_trusted(gaps))
    }

    /// Checks closure under addition by scanning all pairs of elements up
    /// to f; sums involving anything larger land above f automatically.
    /// Returns an offending pair if there is one.
    pub fn closure_violation(&self) -> Option<(u64, u64)> {
        let f = self.frobenius;
        let elems: Vec<i64> = (1..=f).filter(|&x| self.is_member(x)).collect();
        for (i, &a) in elems.iter().enumerate() {
            for &b in &elems[i..] {
                if !self.is_member(a + b) {
                    return Some((a as u64, b as u64));
                }
            }
        }
        None
    }

    /// The minimal generating set: nonzero elements that are not sums of
    /// two nonzero elements. Used for display.
    pub fn minimal_generators(&self) -> Vec<u32> {
        if self.genus == 0 {
            return vec![1];
        }
        let f = self.frobenius;
        let m = self.multiplicity as i64;
        (m..=f + m)
            .filter(|&x| self.is_member(x) && !self.is_sum_of_two_nonzero(x))
            .map(|x| x as u32)
            .collect()
    }

    /// Gap list rendered as `{g1,g2,...}`.
    pub fn gaps_display(&self) -> String {
        let inner: Vec<String> = self.gaps.iter().map(|g| g.to_string()).collect();
        format!("{{{}}}", inner.join(","))
    }
}

impl fmt::Display for Semigroup {
    /// Renders the minimal generating set as `⟨a,b,…⟩`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> =
            self.minimal_generators().iter().map(|g| g.to_string()).collect();
        write!(out, "⟨{}⟩", gens.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_shape() {
        let r = Semigroup::root();
        assert_eq!(r.genus(), 0);
        assert_eq!(r.multiplicity(), 1);
        assert_eq!(r.frobenius(), -1);
        assert!(r.gaps().is_empty());
        assert_eq!(r.effective_generators(), &[1]);
        assert_eq!(r.efficacy(), 1);
        assert!(r.strongly_descended());
        assert!(!r.super_strongly_descended());
    }

    #[test]
    fn from_generators_examples() {
        let s = Semigroup::from_generators(&[3, 4]).unwrap();
        assert_eq!(s.gaps(), &[1, 2, 5]);
        assert_eq!(s.genus(), 3);
        assert_eq!(s.frobenius(), 5);
        assert_eq!(s.efficacy(), 0);

        let s = Semigroup::from_generators(&[4, 5, 6, 7]).unwrap();
        assert_eq!(s.genus(), 3);
        assert_eq!(s.frobenius(), 3);
        assert_eq!(s.efficacy(), 4);
        assert_eq!(s.effective_generators(), &[4, 5, 6, 7]);

        assert_eq!(Semigroup::from_generators(&[1]).unwrap(), Semigroup::root());
    }

    #[test]
    fn from_generators_rejects_bad_input() {
        assert!(matches!(
            Semigroup::from_generators(&[]),
            Err(Error::EmptyGenerators)
        ));
        assert!(matches!(
            Semigroup::from_generators(&[4, 6]),
            Err(Error::NotCoprime { gcd: 2 })
        ));
        assert!(matches!(
            Semigroup::from_generators(&[0, 3]),
            Err(Error::ZeroGenerator)
        ));
    }

    #[test]
    fn from_generators_setwise_coprime_only() {
        // pairwise non-coprime but setwise coprime
        let s = Semigroup::from_generators(&[4, 6, 9]).unwrap();
        assert_eq!(s.frobenius(), 11);
        assert!(s.closure_violation().is_none());
    }

    #[test]
    fn membership() {
        let s = Semigroup::from_generators(&[3, 4]).unwrap();
        assert!(!s.is_member(5));
        assert!(!s.is_member(-1));
        assert!(s.is_member(6));
        assert!(Semigroup::root().is_member(1));
    }

    #[test]
    fn ordinary_effective_generators() {
        for m in 2u64..=8 {
            let gens: Vec<u64> = (m..=2 * m - 1).collect();
            let s = Semigroup::from_generators(&gens).unwrap();
            assert!(s.is_ordinary());
            assert_eq!(s.genus(), m as u32 - 1);
            let expect: Vec<u32> = (m as u32..=2 * m as u32 - 1).collect();
            assert_eq!(s.effective_generators(), &expect[..]);
            assert_eq!(s.efficacy(), s.genus() + 1);
            assert!(s.super_strongly_descended());
        }
    }

    #[test]
    fn children_of_root_and_leaves() {
        let root = Semigroup::root();
        let kids = root.children();
        assert_eq!(kids.len(), 1);
        assert_eq!(kids[0].gaps(), &[1]);
        assert_eq!(kids[0].efficacy(), 2);

        let leaf = Semigroup::from_generators(&[3, 4]).unwrap();
        assert!(leaf.children().is_empty());

        let genus1 = &kids[0];
        assert_eq!(genus1.children().len(), 2);
    }

    #[test]
    fn children_match_definitional_construction() {
        // every incrementally derived field must equal the from-scratch one
        let mut frontier = vec![Semigroup::root()];
        for _ in 0..7 {
            let mut next = Vec::new();
            for sg in &frontier {
                for child in sg.children() {
                    let rebuilt = Semigroup::from_gaps(child.gaps()).unwrap();
                    assert_eq!(child, rebuilt, "mismatch at gaps {:?}", child.gaps());
                    assert!(child.frobenius() > sg.frobenius());
                    next.push(child);
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn parent_round_trip() {
        let genus1 = Semigroup::root().children().pop().unwrap();
        assert_eq!(genus1.parent().unwrap(), Semigroup::root());
        assert!(matches!(
            Semigroup::root().parent(),
            Err(Error::RootHasNoParent)
        ));

        let s = Semigroup::from_generators(&[4, 5, 6, 7]).unwrap();
        for child in s.children() {
            assert_eq!(child.parent().unwrap(), s);
        }

        // parent of <3,4> adjoins f = 5
        let s = Semigroup::from_generators(&[3, 4]).unwrap();
        assert_eq!(s.parent().unwrap().gaps(), &[1, 2]);
    }

    #[test]
    fn child_efficacy_ladder() {
        // children ordered by removed generator have k-1, k-2, ..., 0 weak
        // generators; total efficacy = weak + strong + super-strong
        let mut frontier = vec![Semigroup::root()];
        for _ in 0..6 {
            let mut next = Vec::new();
            for sg in &frontier {
                let k = sg.efficacy() as usize;
                let kids = sg.children();
                for (i, child) in kids.iter().enumerate() {
                    let weak = child
                        .effective_generators()
                        .iter()
                        .filter(|&&y| {
                            sg.effective_generators().binary_search(&y).is_ok()
                        })
                        .count();
                    assert_eq!(weak, k - 1 - i);
                    let mut expect = weak as u32;
                    if child.strongly_descended() && !child.super_strongly_descended() {
                        expect += 1;
                    }
                    if child.super_strongly_descended() {
                        expect += 2;
                    }
                    assert_eq!(child.efficacy(), expect);
                }
                next.extend(kids);
            }
            frontier = next;
        }
    }

    #[test]
    fn strong_descent_test_agreement() {
        let mut frontier = vec![Semigroup::root()];
        for _ in 0..7 {
            let mut next = Vec::new();
            for sg in &frontier {
                for child in sg.children() {
                    let mf = (child.multiplicity() as i64 + child.frobenius()) as u32;
                    let in_eff = child.effective_generators().binary_search(&mf).is_ok();
                    assert_eq!(child.strongly_descended(), in_eff);
                    next.push(child);
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn generator_window() {
        let mut frontier = vec![Semigroup::root()];
        for _ in 0..7 {
            let mut next = Vec::new();
            for sg in &frontier {
                for child in sg.children() {
                    let bound = child.frobenius() + 2 * child.multiplicity() as i64;
                    assert!(child
                        .effective_generators()
                        .iter()
                        .all(|&x| (x as i64) <= bound));
                    next.push(child);
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn display_renders_generators_and_gaps() {
        let s = Semigroup::from_generators(&[3, 4]).unwrap();
        assert_eq!(s.to_string(), "⟨3,4⟩");
        assert_eq!(s.gaps_display(), "{1,2,5}");
        assert_eq!(Semigroup::root().to_string(), "⟨1⟩");
        assert_eq!(Semigroup::root().gaps_display(), "{}");
    }
}
