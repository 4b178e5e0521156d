//! Projected counting over purged tables.
//!
//! Rows of a purged table are grouped into buckets by the projection of
//! their interpretation onto the projection atoms. For a set `ρ` of rows
//! from one bucket, `ipmc(ρ)` is the number of projected solutions shared
//! by every row of `ρ`.
//!
//! A bucket stores, for each set `R` of its rows, the number of projected
//! solutions that belong to exactly the rows of `R` (its Venn region). The
//! intersection count of `ρ` is then the sum over regions containing `ρ`.
//! Only nonzero regions are kept, so a bucket's size is bounded by the
//! number of distinct projections rather than by `2^|bucket|`. The literal
//! recursive definitions are provided as [`pcnt`] and [`IpmcEvaluator`] and agree
//! with this representation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::dp::{OriginSeq, Purged, TableAlgorithm, TabledTreeDecomposition};
use crate::program::Atom;

/// Largest bucket or origin set the literal subset enumerations accept.
pub const MAX_ENUMERATION: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjError {
    #[error("enumerating subsets of {size} elements exceeds the limit of {MAX_ENUMERATION}")]
    TooManySubsets { size: usize },
    #[error("stored counts are not consistent with any set of projected solutions")]
    InconsistentCounts,
    #[error("row {row} of node {node} is referenced by an origin but was purged")]
    OriginNotPurged { node: usize, row: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjBucket {
    /// Table row indices, sorted.
    pub rows: Vec<usize>,
    /// Nonzero region counts keyed by sets of positions into `rows`, sorted by key.
    regions: Vec<(FixedBitSet, BigUint)>,
}

impl ProjBucket {
    pub fn regions(&self) -> &[(FixedBitSet, BigUint)] {
        &self.regions
    }

    fn local(&self, row: usize) -> Option<usize> {
        self.rows.binary_search(&row).ok()
    }

    fn intersection_count(&self, locals: &FixedBitSet) -> BigUint {
        self.regions
            .iter()
            .filter(|(r, _)| locals.is_subset(r))
            .map(|(_, c)| c)
            .sum()
    }
}

/// The projection table `π(t)` of one node.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProjTable {
    pub buckets: Vec<ProjBucket>,
    locate: HashMap<usize, (usize, usize)>,
}

impl ProjTable {
    fn from_buckets(buckets: Vec<ProjBucket>) -> Self {
        let mut locate = HashMap::new();
        for (b, bucket) in buckets.iter().enumerate() {
            for (l, &row) in bucket.rows.iter().enumerate() {
                locate.insert(row, (b, l));
            }
        }
        ProjTable { buckets, locate }
    }

    fn from_regions(buckets: Vec<Vec<usize>>, regions: Vec<HashMap<FixedBitSet, BigUint>>) -> Self {
        let buckets = buckets
            .into_iter()
            .zip(regions)
            .map(|(rows, regions)| {
                let mut regions: Vec<(FixedBitSet, BigUint)> =
                    regions.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                regions.sort();
                ProjBucket { rows, regions }
            })
            .collect();
        Self::from_buckets(buckets)
    }

    /// Builds a table from explicit `⟨ρ, c⟩` entries over the given
    /// buckets. Missing sub-buckets count as 0.
    pub fn from_entries(buckets: Vec<Vec<usize>>, entries: &[(Vec<usize>, BigUint)]) -> Result<Self, ProjError> {
        let mut stored: Vec<HashMap<FixedBitSet, BigInt>> = vec![HashMap::new(); buckets.len()];
        let mut buckets = buckets;
        for b in &mut buckets {
            b.sort_unstable();
            if b.len() > MAX_ENUMERATION {
                return Err(ProjError::TooManySubsets { size: b.len() });
            }
        }
        let shell = Self::from_buckets(buckets.iter().map(|rows| ProjBucket { rows: rows.clone(), regions: Vec::new() }).collect());
        for (rho, c) in entries {
            if let Some((b, locals)) = shell.locals(rho) {
                *stored[b].entry(locals).or_default() += BigInt::from(c.clone());
            }
        }
        let mut regions = Vec::with_capacity(buckets.len());
        for (b, rows) in buckets.iter().enumerate() {
            let k = rows.len();
            let mut out = HashMap::new();
            for r in 1u64..(1 << k) {
                // count in exactly R = Σ_{T ⊇ R} (−1)^{|T∖R|} c(T)
                let mut exact = BigInt::zero();
                for (t, c) in &stored[b] {
                    let t = bits_to_mask(t);
                    if t & r == r {
                        if (t & !r).count_ones().is_multiple_of(2) {
                            exact += c;
                        } else {
                            exact -= c;
                        }
                    }
                }
                match exact.sign() {
                    Sign::Minus => return Err(ProjError::InconsistentCounts),
                    Sign::NoSign => {}
                    Sign::Plus => {
                        out.insert(mask_to_bits(r, k), exact.to_biguint().expect("positive"));
                    }
                }
            }
            regions.push(out);
        }
        Ok(Self::from_regions(buckets, regions))
    }

    /// Bucket index and local positions of `rho`, if it lies in one bucket.
    fn locals(&self, rho: &[usize]) -> Option<(usize, FixedBitSet)> {
        let &first = rho.first()?;
        let (b, _) = *self.locate.get(&first)?;
        let bucket = &self.buckets[b];
        let mut set = FixedBitSet::with_capacity(bucket.rows.len());
        for &row in rho {
            set.insert(bucket.local(row)?);
        }
        Some((b, set))
    }

    pub fn bucket_of(&self, row: usize) -> Option<usize> {
        self.locate.get(&row).map(|&(b, _)| b)
    }

    /// Stored intersection count for `rho`; 0 unless `rho` is a nonempty
    /// subset of one bucket.
    pub fn sipmc(&self, rho: &[usize]) -> BigUint {
        match self.locals(rho) {
            Some((b, locals)) => self.buckets[b].intersection_count(&locals),
            None => BigUint::zero(),
        }
    }

    /// `|ν(t)|`.
    pub fn num_rows(&self) -> usize {
        self.buckets.iter().map(|b| b.rows.len()).sum()
    }

    /// Number of sub-buckets, i.e. of logical `⟨ρ, c⟩` entries.
    pub fn num_entries(&self) -> BigUint {
        self.buckets
            .iter()
            .map(|b| (BigUint::one() << b.rows.len()) - BigUint::one())
            .sum()
    }

    /// Number of stored nonzero regions.
    pub fn num_regions(&self) -> usize {
        self.buckets.iter().map(|b| b.regions.len()).sum()
    }

    /// Every `⟨ρ, c⟩` entry, `ρ` as sorted row indices, in bucket order.
    pub fn entries(&self) -> Result<Vec<(Vec<usize>, BigUint)>, ProjError> {
        let mut out = Vec::new();
        for rho in subbuckets(&self.buckets.iter().map(|b| b.rows.clone()).collect::<Vec<_>>())? {
            let c = self.sipmc(&rho);
            out.push((rho, c));
        }
        Ok(out)
    }

    /// Sum of all region counts: the number of distinct projected solutions
    /// over all rows of the table.
    pub fn total(&self) -> BigUint {
        self.buckets.iter().flat_map(|b| b.regions.iter().map(|(_, c)| c)).sum()
    }
}

fn bits_to_mask(bits: &FixedBitSet) -> u64 {
    bits.ones().fold(0, |m, i| m | (1 << i))
}

fn mask_to_bits(mask: u64, len: usize) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(len);
    for i in 0..len {
        if mask >> i & 1 == 1 {
            set.insert(i);
        }
    }
    set
}

/// Groups `rows` by `interp(row) & pmask`, buckets ordered by that key.
pub fn buckets(rows: &[usize], interp: impl Fn(usize) -> u64, pmask: u64) -> Vec<Vec<usize>> {
    let mut by_key: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for &r in rows {
        by_key.entry(interp(r) & pmask).or_default().push(r);
    }
    by_key
        .into_values()
        .map(|mut b| {
            b.sort_unstable();
            b
        })
        .collect()
}

/// All nonempty subsets of each bucket, each sorted.
pub fn subbuckets(buckets: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, ProjError> {
    let mut out = Vec::new();
    for b in buckets {
        if b.len() > MAX_ENUMERATION {
            return Err(ProjError::TooManySubsets { size: b.len() });
        }
        for mask in 1u64..(1 << b.len()) {
            out.push(b.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &r)| r).collect());
        }
    }
    Ok(out)
}

/// Product-form stored count of a set of origin sequences: the product over
/// children of the stored count of the set of `i`-th components.
pub fn sipmc_seq(children: &[&ProjTable], origins: &[&OriginSeq]) -> BigUint {
    let mut product = BigUint::one();
    for (i, child) in children.iter().enumerate() {
        let mut column: Vec<usize> = origins.iter().map(|o| o[i] as usize).collect();
        column.sort_unstable();
        column.dedup();
        product *= child.sipmc(&column);
        if product.is_zero() {
            break;
        }
    }
    product
}

/// Alternating sum over the nonempty subsets of `origins`, by definition.
pub fn pcnt(origins: &BTreeSet<OriginSeq>, children: &[&ProjTable]) -> Result<BigInt, ProjError> {
    let all: Vec<&OriginSeq> = origins.iter().collect();
    if all.len() > MAX_ENUMERATION {
        return Err(ProjError::TooManySubsets { size: all.len() });
    }
    let mut total = BigInt::zero();
    for mask in 1u64..(1 << all.len()) {
        let subset: Vec<&OriginSeq> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
        let value = BigInt::from(sipmc_seq(children, &subset));
        if mask.count_ones() % 2 == 1 {
            total += value;
        } else {
            total -= value;
        }
    }
    Ok(total)
}

/// The recursive intersection count of `rho`, by definition, together with
/// the signed value before taking the absolute value. At a leaf every count
/// is 1.
pub struct IpmcEvaluator<'a> {
    origins: &'a dyn Fn(usize) -> Vec<OriginSeq>,
    children: &'a [&'a ProjTable],
    memo: HashMap<Vec<usize>, (BigUint, BigInt)>,
}

impl<'a> IpmcEvaluator<'a> {
    pub fn new(origins: &'a dyn Fn(usize) -> Vec<OriginSeq>, children: &'a [&'a ProjTable]) -> Self {
        IpmcEvaluator {
            origins,
            children,
            memo: HashMap::new(),
        }
    }

    pub fn pcnt(&self, rho: &[usize]) -> Result<BigInt, ProjError> {
        let origins: BTreeSet<OriginSeq> = rho.iter().flat_map(|&r| (self.origins)(r)).collect();
        pcnt(&origins, self.children)
    }

    /// `(ipmc, signed value before the absolute value)`.
    pub fn ipmc(&mut self, rho: &[usize]) -> Result<(BigUint, BigInt), ProjError> {
        if self.children.is_empty() {
            return Ok((BigUint::one(), BigInt::one()));
        }
        if rho.len() > MAX_ENUMERATION {
            return Err(ProjError::TooManySubsets { size: rho.len() });
        }
        if let Some(v) = self.memo.get(rho) {
            return Ok(v.clone());
        }
        let mut value = self.pcnt(rho)?;
        let full = (1u64 << rho.len()) - 1;
        for mask in 1..full {
            let phi: Vec<usize> = (0..rho.len()).filter(|i| mask >> i & 1 == 1).map(|i| rho[i]).collect();
            let (sub, _) = self.ipmc(&phi)?;
            if phi.len().is_multiple_of(2) {
                value += BigInt::from(sub);
            } else {
                value -= BigInt::from(sub);
            }
        }
        let result = (value.abs().to_biguint().expect("nonnegative"), value);
        self.memo.insert(rho.to_vec(), result.clone());
        Ok(result)
    }
}

/// Computes `π(t)` for the purged rows of one node, given the origin links
/// of those rows and the child projection tables. A node without children
/// is a leaf and every region is the single row with count 1.
pub fn proj_node(
    node: usize,
    buckets: Vec<Vec<usize>>,
    origins: &dyn Fn(usize) -> Vec<OriginSeq>,
    children: &[&ProjTable],
) -> Result<ProjTable, ProjError> {
    let mut all_regions = Vec::with_capacity(buckets.len());
    for rows in &buckets {
        let k = rows.len();
        let mut regions: HashMap<FixedBitSet, BigUint> = HashMap::new();
        if children.is_empty() {
            let mut all = FixedBitSet::with_capacity(k);
            all.insert_range(..);
            regions.insert(all, BigUint::one());
            all_regions.push(regions);
            continue;
        }
        // origin sequences of each row, located as (bucket, local) per child
        let mut groups: BTreeMap<Vec<usize>, Vec<Vec<SmallLocated>>> = BTreeMap::new();
        for (j, &row) in rows.iter().enumerate() {
            for seq in origins(row) {
                let mut key = Vec::with_capacity(children.len());
                let mut locals = SmallLocated::new();
                for (i, child) in children.iter().enumerate() {
                    let child_row = seq[i] as usize;
                    let &(b, l) = child.locate.get(&child_row).ok_or(ProjError::OriginNotPurged {
                        node,
                        row: child_row,
                    })?;
                    key.push(b);
                    locals.push(l);
                }
                let per_row = groups.entry(key).or_insert_with(|| vec![Vec::new(); k]);
                per_row[j].push(locals);
            }
        }
        for (key, per_row) in groups {
            match children.len() {
                1 => single_child(&children[0].buckets[key[0]], &per_row, &mut regions),
                2 => join(
                    &children[0].buckets[key[0]],
                    &children[1].buckets[key[1]],
                    &per_row,
                    &mut regions,
                ),
                n => unreachable!("node with {n} children"),
            }
        }
        all_regions.push(regions);
    }
    Ok(ProjTable::from_regions(buckets, all_regions))
}

type SmallLocated = smallvec::SmallVec<[usize; 2]>;

fn single_child(child: &ProjBucket, per_row: &[Vec<SmallLocated>], out: &mut HashMap<FixedBitSet, BigUint>) {
    let width = child.rows.len();
    let origin_sets: Vec<FixedBitSet> = per_row
        .iter()
        .map(|seqs| {
            let mut set = FixedBitSet::with_capacity(width);
            set.extend(seqs.iter().map(|s| s[0]));
            set
        })
        .collect();
    for (region, count) in &child.regions {
        let mut target = FixedBitSet::with_capacity(per_row.len());
        for (j, set) in origin_sets.iter().enumerate() {
            if !set.is_disjoint(region) {
                target.insert(j);
            }
        }
        if !target.is_clear() {
            *out.entry(target).or_default() += count;
        }
    }
}

fn join(
    left: &ProjBucket,
    right: &ProjBucket,
    per_row: &[Vec<SmallLocated>],
    out: &mut HashMap<FixedBitSet, BigUint>,
) {
    let width = right.rows.len();
    for (r1, c1) in &left.regions {
        // right-hand partners reachable from this left region, per row
        let partners: Vec<FixedBitSet> = per_row
            .iter()
            .map(|seqs| {
                let mut set = FixedBitSet::with_capacity(width);
                set.extend(seqs.iter().filter(|s| r1.contains(s[0])).map(|s| s[1]));
                set
            })
            .collect();
        if partners.iter().all(FixedBitSet::is_clear) {
            continue;
        }
        for (r2, c2) in &right.regions {
            let mut target = FixedBitSet::with_capacity(per_row.len());
            for (j, set) in partners.iter().enumerate() {
                if !set.is_disjoint(r2) {
                    target.insert(j);
                }
            }
            if !target.is_clear() {
                *out.entry(target).or_default() += c1 * c2;
            }
        }
    }
}

/// Bag-local mask of the projection atoms in `bag`.
pub fn projection_mask(bag: &[Atom], projection: &BTreeSet<Atom>) -> u64 {
    bag.iter()
        .enumerate()
        .filter(|(_, a)| projection.contains(a))
        .fold(0, |m, (i, _)| m | (1 << i))
}

/// Runs the projection pass over every node of a purged tabled
/// decomposition.
pub fn proj_pass<A: TableAlgorithm>(
    alg: &A,
    projection: &BTreeSet<Atom>,
    ttd: &TabledTreeDecomposition<'_, A::Row>,
    purged: &Purged,
) -> Result<Vec<ProjTable>, ProjError> {
    let td = ttd.td;
    let mut tables: Vec<ProjTable> = Vec::with_capacity(td.len());
    for t in 0..td.len() {
        let node = td.node(t);
        let table = ttd.table(t);
        let pmask = projection_mask(&node.bag, projection);
        let bs = buckets(&purged.kept[t], |r| alg.interpretation(&table.rows[r]), pmask);
        let children: Vec<&ProjTable> = node.children.iter().map(|&c| &tables[c]).collect();
        let origins = |r: usize| table.origins[r].clone();
        let pt = proj_node(t, bs, &origins, &children)?;
        tables.push(pt);
    }
    Ok(tables)
}

/// Sum of the stored counts at the root.
pub fn final_count(root: &ProjTable) -> BigUint {
    root.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    fn n(v: u32) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn bucket_grouping() {
        let interps = [0b00u64, 0b01, 0b10, 0b11];
        assert_eq!(buckets(&[0, 1, 2, 3], |r| interps[r], 0), vec![vec![0, 1, 2, 3]]);
        assert_eq!(buckets(&[0, 1, 2, 3], |r| interps[r], 0b01), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(buckets(&[0, 1, 2, 3], |r| interps[r], 0b11).len(), 4);
        assert!(buckets(&[], |r| interps[r], 0b11).is_empty());
    }

    #[test]
    fn subbucket_shapes() {
        assert_eq!(subbuckets(&[vec![0, 1]]).unwrap(), vec![vec![0], vec![1], vec![0, 1]]);
        assert_eq!(subbuckets(&[vec![0], vec![1]]).unwrap(), vec![vec![0], vec![1]]);
        assert!(subbuckets(&[]).unwrap().is_empty());
    }

    #[test]
    fn entries_round_trip() {
        let entries = vec![(vec![1], n(2)), (vec![4], n(1)), (vec![1, 4], n(1)), (vec![7], n(3))];
        let t = ProjTable::from_entries(vec![vec![1, 4], vec![7]], &entries).unwrap();
        let mut back = t.entries().unwrap();
        back.sort();
        let mut want = entries.clone();
        want.sort();
        assert_eq!(back, want);
        assert_eq!(t.sipmc(&[1, 7]), n(0));
        assert_eq!(t.sipmc(&[9]), n(0));
        assert_eq!(t.total(), n(5));
        assert!(ProjTable::from_entries(vec![vec![0, 1]], &[(vec![0], n(1)), (vec![0, 1], n(2))]).is_err());
    }

    #[test]
    fn fast_node_matches_literal_definition() {
        // child: bucket {0,1,2} and bucket {3}
        let child = ProjTable::from_entries(
            vec![vec![0, 1, 2], vec![3]],
            &[
                (vec![0], n(3)),
                (vec![1], n(2)),
                (vec![2], n(2)),
                (vec![0, 1], n(1)),
                (vec![0, 2], n(1)),
                (vec![1, 2], n(1)),
                (vec![0, 1, 2], n(1)),
                (vec![3], n(4)),
            ],
        )
        .unwrap();
        let origin_lists: Vec<Vec<OriginSeq>> =
            vec![vec![smallvec![0], smallvec![3]], vec![smallvec![1]], vec![smallvec![1], smallvec![2]]];
        let origins = |r: usize| origin_lists[r].clone();
        let children = [&child];
        let fast = proj_node(0, vec![vec![0, 1, 2]], &origins, &children).unwrap();
        let mut lit = IpmcEvaluator::new(&origins, &children);
        for rho in subbuckets(&[vec![0, 1, 2]]).unwrap() {
            let (v, signed) = lit.ipmc(&rho).unwrap();
            assert_eq!(fast.sipmc(&rho), v, "{rho:?}");
            let expected_sign = if rho.len() % 2 == 1 { Sign::Plus } else { Sign::Minus };
            assert!(signed.is_zero() || signed.sign() == expected_sign);
        }
    }

    #[test]
    fn fast_join_matches_literal_definition() {
        let left = ProjTable::from_entries(
            vec![vec![0, 1]],
            &[(vec![0], n(2)), (vec![1], n(2)), (vec![0, 1], n(1))],
        )
        .unwrap();
        let right = ProjTable::from_entries(
            vec![vec![0, 1, 2]],
            &[(vec![0], n(1)), (vec![1], n(2)), (vec![2], n(1)), (vec![1, 2], n(1))],
        )
        .unwrap();
        let origin_lists: Vec<Vec<OriginSeq>> = vec![
            vec![smallvec![0, 0], smallvec![1, 1]],
            vec![smallvec![1, 2]],
            vec![smallvec![0, 2], smallvec![0, 1]],
        ];
        let origins = |r: usize| origin_lists[r].clone();
        let children = [&left, &right];
        let fast = proj_node(0, vec![vec![0, 1, 2]], &origins, &children).unwrap();
        let mut lit = IpmcEvaluator::new(&origins, &children);
        for rho in subbuckets(&[vec![0, 1, 2]]).unwrap() {
            assert_eq!(fast.sipmc(&rho), lit.ipmc(&rho).unwrap().0, "{rho:?}");
        }
    }

    #[test]
    fn leaf_counts_one() {
        let origins = |_: usize| vec![OriginSeq::new()];
        let t = proj_node(0, vec![vec![0]], &origins, &[]).unwrap();
        assert_eq!(t.entries().unwrap(), vec![(vec![0], n(1))]);
        let empty = proj_node(0, vec![], &origins, &[]).unwrap();
        assert_eq!(empty.num_rows(), 0);
        assert_eq!(final_count(&empty), n(0));
    }
}
