//! External addresses: eventually periodic sequences of fundamental-domain
//! symbols, the combinatorial names of dynamic rays.
//!
//! Addresses are kept in canonical form: the period block is the minimal
//! repeating block and the preperiod is as short as possible (any tail of
//! the preperiod that merely rotates the period block is absorbed into it).
//! Comparison is lexicographic on the infinite symbol expansion, which for
//! the exponential model agrees with the vertical order of rays far inside
//! the tract.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::Result;

/// Eventually periodic integer sequence `pre₁,…,preₖ (per₁,…,perₚ)^∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExternalAddress {
    preperiod: Vec<i32>,
    period: Vec<i32>,
}

impl ExternalAddress {
    /// Builds an address from raw preperiod and period blocks and
    /// canonicalizes the representation. The period block must be nonempty.
    pub fn new(preperiod: Vec<i32>, period: Vec<i32>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidArgument(
                "address period block must be nonempty".into(),
            ));
        }
        let (preperiod, period) = canonicalize(preperiod, period);
        Ok(Self { preperiod, period })
    }

    /// Purely periodic address `\overline{block}`.
    pub fn periodic(block: &[i32]) -> Result<Self> {
        Self::new(Vec::new(), block.to_vec())
    }

    /// The fixed address `\overline{n}`.
    pub fn fixed(n: i32) -> Self {
        Self {
            preperiod: Vec::new(),
            period: vec![n],
        }
    }

    pub fn preperiod(&self) -> &[i32] {
        &self.preperiod
    }

    pub fn period_block(&self) -> &[i32] {
        &self.period
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// Symbol at position `k` of the infinite expansion (0-based).
    pub fn symbol_at(&self, k: usize) -> i32 {
        if k < self.preperiod.len() {
            self.preperiod[k]
        } else {
            self.period[(k - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn first_symbol(&self) -> i32 {
        self.symbol_at(0)
    }

    /// Largest absolute symbol over one preperiod plus one period block.
    pub fn max_abs_symbol(&self) -> i32 {
        self.preperiod
            .iter()
            .chain(self.period.iter())
            .map(|s| s.abs())
            .max()
            .unwrap_or(0)
    }

    /// Left shift: drops the first symbol. Purely periodic addresses rotate
    /// their period block, so the period length is preserved.
    pub fn shift(&self) -> Self {
        if self.preperiod.is_empty() {
            let mut period = self.period.clone();
            period.rotate_left(1);
            // rotations of a primitive block stay primitive
            Self {
                preperiod: Vec::new(),
                period,
            }
        } else {
            let (preperiod, period) =
                canonicalize(self.preperiod[1..].to_vec(), self.period.clone());
            Self { preperiod, period }
        }
    }

    /// Applies the shift `n` times.
    pub fn shift_n(&self, n: usize) -> Self {
        let mut a = self.clone();
        for _ in 0..n {
            a = a.shift();
        }
        a
    }
}

fn canonicalize(mut preperiod: Vec<i32>, mut period: Vec<i32>) -> (Vec<i32>, Vec<i32>) {
    // minimal repeating block
    let n = period.len();
    for d in 1..=n {
        if n % d == 0 && period.chunks(d).all(|chunk| chunk == &period[..d]) {
            period.truncate(d);
            break;
        }
    }
    // absorb preperiod symbols that only rotate the period block
    while let Some(&last) = preperiod.last() {
        if last == *period.last().expect("nonempty period") {
            preperiod.pop();
            period.rotate_right(1);
        } else {
            break;
        }
    }
    (preperiod, period)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl Ord for ExternalAddress {
    /// Lexicographic order on the infinite expansions. Two canonical
    /// eventually periodic sequences that agree on
    /// `|pre_a| + |pre_b| + lcm(|per_a|, |per_b|)` symbols are equal.
    fn cmp(&self, other: &Self) -> Ordering {
        let bound = self.preperiod.len()
            + other.preperiod.len()
            + lcm(self.period.len(), other.period.len());
        for k in 0..bound {
            match self.symbol_at(k).cmp(&other.symbol_at(k)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        debug_assert_eq!(self, other, "canonical forms of equal sequences differ");
        Ordering::Equal
    }
}

impl PartialOrd for ExternalAddress {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExternalAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i32]| {
            v.iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}|{}", join(&self.preperiod), join(&self.period))
    }
}

impl FromStr for ExternalAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::AddressParse(s.to_string());
        let (pre, per) = s.split_once('|').ok_or_else(err)?;
        let parse_list = |part: &str| -> Result<Vec<i32>> {
            if part.trim().is_empty() {
                return Ok(Vec::new());
            }
            part.split(',')
                .map(|tok| tok.trim().parse::<i32>().map_err(|_| err()))
                .collect()
        };
        let preperiod = parse_list(pre)?;
        let period = parse_list(per)?;
        if period.is_empty() {
            return Err(err());
        }
        Self::new(preperiod, period)
    }
}

impl Serialize for ExternalAddress {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExternalAddress {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(D::Error::custom)
    }
}

/// All purely periodic addresses whose period divides `p`, with symbols in
/// `[-m, m]`, sorted by the lexicographic order. The `(2m+1)^p` symbol
/// tuples are pairwise distinct as infinite sequences, so the count is
/// exactly `(2m+1)^p`.
pub fn enumerate_periodic(p: u32, m: u32) -> Vec<ExternalAddress> {
    assert!(p >= 1, "period must be positive");
    let p = p as usize;
    let alphabet: Vec<i32> = (-(m as i32)..=m as i32).collect();
    let mut out = std::collections::BTreeSet::new();
    let mut idx = vec![0usize; p];
    loop {
        let block: Vec<i32> = idx.iter().map(|&i| alphabet[i]).collect();
        out.insert(ExternalAddress::periodic(&block).expect("nonempty block"));
        // odometer over the alphabet
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < alphabet.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == p {
                return out.into_iter().collect();
            }
        }
    }
}
