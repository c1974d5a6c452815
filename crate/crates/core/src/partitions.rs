//! Partitions, strict partitions and Frobenius coordinates.
//!
//! Both partition types order by weight first and then by descending
//! lexicographic order of the parts, so enumeration runs
//! `∅, (1), (2), (1,1), (3), (2,1), (1,1,1), ...`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parts {0:?} are not a partition (non-increasing, positive)")]
    NotPartition(Vec<i64>),
    #[error("parts {0:?} are not a strict partition (strictly decreasing, positive)")]
    NotStrict(Vec<i64>),
    #[error("invalid Frobenius coordinates: {0}")]
    Frobenius(String),
    #[error("arms and legs differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

fn write_parts(f: &mut fmt::Formatter<'_>, parts: &[u32]) -> fmt::Result {
    write!(f, "(")?;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{p}")?;
    }
    write!(f, ")")
}

fn graded_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let wa: u32 = a.iter().sum();
    let wb: u32 = b.iter().sum();
    wa.cmp(&wb).then_with(|| b.cmp(a))
}

/// A non-increasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        let ok = parts.iter().all(|&p| p > 0) && parts.windows(2).all(|w| w[0] >= w[1]);
        if ok {
            Ok(Partition(parts))
        } else {
            Err(PartitionError::NotPartition(
                parts.iter().map(|&p| p as i64).collect(),
            ))
        }
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The hook `(k+1, 1^l)`, i.e. Frobenius `(k|l)`.
    pub fn hook(arm: u32, leg: u32) -> Self {
        let mut parts = vec![arm + 1];
        parts.extend(std::iter::repeat_n(1, leg as usize));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=first)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    pub fn frobenius(&self) -> FrobeniusCoord {
        let conj = self.conjugate();
        let r = self
            .0
            .iter()
            .enumerate()
            .take_while(|(i, &p)| p as usize > *i)
            .count();
        FrobeniusCoord {
            arms: (0..r).map(|i| self.0[i] - i as u32 - 1).collect(),
            legs: (0..r).map(|i| conj.0[i] - i as u32 - 1).collect(),
        }
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        graded_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

/// Frobenius coordinates `(k_1..k_r | l_1..l_r)`, both lists strictly
/// decreasing and non-negative.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FrobeniusCoord {
    arms: Vec<u32>,
    legs: Vec<u32>,
}

impl FrobeniusCoord {
    pub fn new(arms: Vec<u32>, legs: Vec<u32>) -> Result<Self, PartitionError> {
        if arms.len() != legs.len() {
            return Err(PartitionError::LengthMismatch(arms.len(), legs.len()));
        }
        let strict = |v: &[u32]| v.windows(2).all(|w| w[0] > w[1]);
        if !strict(&arms) || !strict(&legs) {
            return Err(PartitionError::Frobenius(format!(
                "{arms:?}|{legs:?} not strictly decreasing"
            )));
        }
        Ok(FrobeniusCoord { arms, legs })
    }

    pub fn arms(&self) -> &[u32] {
        &self.arms
    }

    pub fn legs(&self) -> &[u32] {
        &self.legs
    }

    pub fn rank(&self) -> usize {
        self.arms.len()
    }

    pub fn to_partition(&self) -> Partition {
        let r = self.rank();
        let mut parts: Vec<u32> = (0..r).map(|i| self.arms[i] + i as u32 + 1).collect();
        let mut i = r as u32 + 1;
        loop {
            let p = self
                .legs
                .iter()
                .enumerate()
                .filter(|&(j, &l)| l + j as u32 + 1 >= i)
                .count() as u32;
            if p == 0 {
                break;
            }
            parts.push(p);
            i += 1;
        }
        Partition(parts)
    }
}

impl fmt::Display for FrobeniusCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "({}|{})", join(&self.arms), join(&self.legs))
    }
}

impl fmt::Debug for FrobeniusCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A strictly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct StrictPartition(Vec<u32>);

impl StrictPartition {
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        let ok = parts.iter().all(|&p| p > 0) && parts.windows(2).all(|w| w[0] > w[1]);
        if ok {
            Ok(StrictPartition(parts))
        } else {
            Err(PartitionError::NotStrict(
                parts.iter().map(|&p| p as i64).collect(),
            ))
        }
    }

    pub fn empty() -> Self {
        StrictPartition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `λ'`: `λ` with a trailing 0 appended when the length is odd.
    pub fn padded(&self) -> PaddedStrict {
        let mut v = self.0.clone();
        if v.len() % 2 == 1 {
            v.push(0);
        }
        PaddedStrict(v)
    }
}

impl Ord for StrictPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        graded_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for StrictPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

impl fmt::Debug for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

/// Even-length padded form of a strict partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PaddedStrict(Vec<u32>);

impl PaddedStrict {
    pub fn rows(&self) -> &[u32] {
        &self.0
    }

    /// Half the length: the Pfaffian order.
    pub fn half_len(&self) -> usize {
        self.0.len() / 2
    }
}

/// A canonical index with the sign picked up while normalizing; `index` is
/// `None` exactly when `sign` is 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedIndex<T> {
    pub sign: i8,
    pub index: Option<T>,
}

impl<T> SignedIndex<T> {
    fn zero() -> Self {
        SignedIndex {
            sign: 0,
            index: None,
        }
    }
}

/// Sorts descending, returning the parity sign of the sorting permutation,
/// or `None` on a negative entry or a repeat.
fn sort_signed(v: &[i64]) -> Option<(i8, Vec<u32>)> {
    if v.iter().any(|&x| x < 0) {
        return None;
    }
    let mut inversions = 0usize;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            match v[i].cmp(&v[j]) {
                Ordering::Equal => return None,
                Ordering::Less => inversions += 1,
                Ordering::Greater => {}
            }
        }
    }
    let mut sorted: Vec<u32> = v.iter().map(|&x| x as u32).collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    Some((if inversions.is_multiple_of(2) { 1 } else { -1 }, sorted))
}

/// Extended Frobenius index: zero on negative or repeated entries, otherwise
/// skew-symmetric in arms and in legs separately.
pub fn normalize_extended_frobenius(
    arms: &[i64],
    legs: &[i64],
) -> Result<SignedIndex<FrobeniusCoord>, PartitionError> {
    if arms.len() != legs.len() {
        return Err(PartitionError::LengthMismatch(arms.len(), legs.len()));
    }
    let (Some((sa, a)), Some((sl, l))) = (sort_signed(arms), sort_signed(legs)) else {
        return Ok(SignedIndex::zero());
    };
    Ok(SignedIndex {
        sign: sa * sl,
        index: Some(FrobeniusCoord { arms: a, legs: l }),
    })
}

/// Extended strict index: zero on negative or repeated entries (two zeros
/// count as a repeat), otherwise the sorting sign and the sorted parts with a
/// single trailing zero dropped.
pub fn normalize_extended_strict(rows: &[i64]) -> SignedIndex<StrictPartition> {
    let Some((sign, mut parts)) = sort_signed(rows) else {
        return SignedIndex::zero();
    };
    if parts.last() == Some(&0) {
        parts.pop();
    }
    SignedIndex {
        sign,
        index: Some(StrictPartition(parts)),
    }
}

/// All partitions of exactly `n`, in descending lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All strict partitions of exactly `n`, in descending lexicographic order.
pub fn strict_partitions_of(n: u32) -> Vec<StrictPartition> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<StrictPartition>) {
        if rem == 0 {
            out.push(StrictPartition(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions of weight at most `max_weight`, in graded order.
pub fn enumerate_partitions(max_weight: u32) -> Vec<Partition> {
    (0..=max_weight).flat_map(partitions_of).collect()
}

/// All strict partitions of weight at most `max_weight`, in graded order.
pub fn enumerate_strict(max_weight: u32) -> Vec<StrictPartition> {
    (0..=max_weight).flat_map(strict_partitions_of).collect()
}
