//! Deterministic sparse linear sketches.
//!
//! A sketch compresses an integer vector `v` of dimension `n` to the single
//! field element `sum_i v_i * xbar^i mod p`. The modulus `p` is the least prime
//! above `(1 + n)^(2d) * n` and `xbar` is the least evaluation point for which
//! the map is injective on Boolean vectors with at most `d` ones, so those
//! vectors can be recovered exactly from their sketch. The map is linear over
//! all of `Z^n`, which is what lets a receiver subtract a known neighbor out
//! of a sketch without further communication.

pub mod prime;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use prime::smallest_prime_above;

/// Default upper bound on the number of d-sparse Boolean vectors a decode
/// table may hold.
pub const DEFAULT_TABLE_CAP: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SketchError {
    #[error("invalid sketch parameters n = {n}, d = {d}: need n >= 1 and d <= n")]
    BadParams { n: usize, d: usize },
    #[error("{count} sparse vectors exceed the decode table cap of {cap}")]
    CapExceeded { count: BigUint, cap: u64 },
    #[error("vector has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("value {value} has no d-sparse Boolean preimage")]
    NotDecodable { value: BigUint },
    #[error("decoded vector has weight {found}, expected {expected}")]
    WeightMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
}

pub type Result<T, E = SketchError> = std::result::Result<T, E>;

/// An element of `F_p`, always reduced modulo the owning parameters' prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(BigUint);

impl FieldElement {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_value(self) -> BigUint {
        self.0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

// Sketch values go out as decimal strings: they routinely exceed 2^53.
impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

/// Inverse of the sketch on d-sparse Boolean vectors, keyed by encoding.
#[derive(Clone)]
struct Indexed<K> {
    index: HashMap<K, u32>,
    offsets: Vec<u32>,
    supports: Vec<u32>,
}

impl<K: Hash + Eq> Indexed<K> {
    fn with_capacity(count: usize) -> Self {
        let mut offsets = Vec::with_capacity(count + 1);
        offsets.push(0);
        Indexed {
            index: HashMap::with_capacity(count),
            offsets,
            supports: Vec::new(),
        }
    }

    /// Returns false if `key` was already present.
    fn insert(&mut self, key: K, support: &[u32]) -> bool {
        let rank = (self.offsets.len() - 1) as u32;
        if self.index.insert(key, rank).is_some() {
            return false;
        }
        self.supports.extend_from_slice(support);
        self.offsets.push(self.supports.len() as u32);
        true
    }

    fn get(&self, key: &K) -> Option<&[u32]> {
        let rank = *self.index.get(key)? as usize;
        Some(&self.supports[self.offsets[rank] as usize..self.offsets[rank + 1] as usize])
    }
}

#[derive(Clone)]
enum DecodeTable {
    Word(Indexed<u64>),
    Wide(Indexed<BigUint>),
}

impl DecodeTable {
    fn lookup(&self, y: &BigUint) -> Option<&[u32]> {
        match self {
            DecodeTable::Word(t) => t.get(&y.to_u64()?),
            DecodeTable::Wide(t) => t.get(y),
        }
    }
}

/// Walks every support of size at most `d` in lexicographic order, keeping
/// the running encoding incrementally. Bails out on the first collision.
fn enumerate_supports<K, F>(n: usize, d: usize, powers: &[K], zero: K, count: usize, add: F) -> Option<Indexed<K>>
where
    K: Clone + Hash + Eq,
    F: Fn(&K, &K) -> K,
{
    fn walk<K: Clone + Hash + Eq, F: Fn(&K, &K) -> K>(
        start: usize,
        acc: K,
        support: &mut Vec<u32>,
        ctx: &mut (usize, usize, &[K], &F, Indexed<K>),
    ) -> bool {
        if !ctx.4.insert(acc.clone(), support) {
            return false;
        }
        if support.len() == ctx.1 {
            return true;
        }
        for i in start..ctx.0 {
            let next = (ctx.3)(&acc, &ctx.2[i]);
            support.push(i as u32);
            let ok = walk(i + 1, next, support, ctx);
            support.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    let mut ctx = (n, d, powers, &add, Indexed::with_capacity(count));
    let mut support = Vec::with_capacity(d);
    if walk(0, zero, &mut support, &mut ctx) {
        Some(ctx.4)
    } else {
        None
    }
}

/// Parameters of the sketch for dimension `n` and sparsity `d`.
#[derive(Clone)]
pub struct SketchParams {
    n: usize,
    d: usize,
    p: BigUint,
    xbar: BigUint,
    powers: Vec<BigUint>,
    // xbar = 2 and 2^n <= p: every Boolean vector encodes to its own binary value.
    binary: bool,
    table: OnceLock<DecodeTable>,
}

impl fmt::Debug for SketchParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SketchParams")
            .field("n", &self.n)
            .field("d", &self.d)
            .field("p", &self.p)
            .field("xbar", &self.xbar)
            .finish()
    }
}

/// Number of Boolean vectors of dimension `n` with at most `d` ones.
pub fn sparse_family_size(n: usize, d: usize) -> BigUint {
    let mut total = BigUint::zero();
    let mut binom = BigUint::one();
    for i in 0..=d.min(n) {
        total += &binom;
        binom = binom * (n - i) / (i + 1);
    }
    total
}

/// `(1 + n)^(2d) * n`, the bound the modulus must exceed.
pub fn modulus_bound(n: usize, d: usize) -> BigUint {
    num_traits::pow(BigUint::from(n + 1), 2 * d) * n
}

/// `ceil(log2 x)` for `x >= 1`.
pub fn ceil_log2(x: &BigUint) -> u64 {
    if x.is_zero() {
        return 0;
    }
    (x - 1u32).bits()
}

impl SketchParams {
    /// Builds the parameters for `(n, d)` with the default table cap.
    pub fn build(n: usize, d: usize) -> Result<Self> {
        Self::build_with_cap(n, d, DEFAULT_TABLE_CAP)
    }

    pub fn build_with_cap(n: usize, d: usize, cap: u64) -> Result<Self> {
        if n == 0 || d > n {
            return Err(SketchError::BadParams { n, d });
        }
        let p = smallest_prime_above(&modulus_bound(n, d));

        // For n >= 2 and d >= 1, x = 0 collides e_1 with the zero vector and
        // x = 1 collides e_0 with e_1, so 2 is minimal whenever it is injective.
        // It is injective on all Boolean vectors once 2^n <= p.
        if n >= 2 && d >= 1 && p.bits() > n as u64 {
            let powers = (0..n).map(|i| BigUint::one() << i).collect();
            return Ok(SketchParams {
                n,
                d,
                p,
                xbar: BigUint::from(2u32),
                powers,
                binary: true,
                table: OnceLock::new(),
            });
        }

        let count = sparse_family_size(n, d);
        if count > BigUint::from(cap) {
            return Err(SketchError::CapExceeded { count, cap });
        }
        let count = count.to_usize().expect("bounded by cap");

        let mut x = BigUint::zero();
        loop {
            let powers = power_table(&x, n, &p);
            if let Some(table) = Self::try_table(n, d, &p, &powers, count) {
                let params = SketchParams {
                    n,
                    d,
                    p,
                    xbar: x,
                    powers,
                    binary: false,
                    table: OnceLock::new(),
                };
                let _ = params.table.set(table);
                return Ok(params);
            }
            x += 1u32;
        }
    }

    fn try_table(n: usize, d: usize, p: &BigUint, powers: &[BigUint], count: usize) -> Option<DecodeTable> {
        if let Some(word) = p.to_u64() {
            let powers: Vec<u64> = powers.iter().map(|x| x.to_u64().unwrap()).collect();
            let add = |a: &u64, b: &u64| ((*a as u128 + *b as u128) % word as u128) as u64;
            enumerate_supports(n, d, &powers, 0u64, count, add).map(DecodeTable::Word)
        } else {
            let add = |a: &BigUint, b: &BigUint| {
                let s = a + b;
                if &s >= p {
                    s - p
                } else {
                    s
                }
            };
            enumerate_supports(n, d, powers, BigUint::zero(), count, add).map(DecodeTable::Wide)
        }
    }

    /// Shared, cached parameters. Building the decode table is the expensive
    /// part, so protocol runs reuse it across calls.
    pub fn shared(n: usize, d: usize) -> Result<Arc<SketchParams>> {
        const SLOTS: usize = 4;
        type Entry = ((usize, usize), Arc<SketchParams>);
        static CACHE: Mutex<Vec<Entry>> = Mutex::new(Vec::new());

        if let Some((_, hit)) = CACHE.lock().unwrap().iter().find(|(key, _)| *key == (n, d)) {
            return Ok(Arc::clone(hit));
        }
        let built = Arc::new(Self::build(n, d)?);
        let mut cache = CACHE.lock().unwrap();
        if cache.len() >= SLOTS {
            cache.remove(0);
        }
        cache.push(((n, d), Arc::clone(&built)));
        Ok(built)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn xbar(&self) -> &BigUint {
        &self.xbar
    }

    pub fn powers(&self) -> &[BigUint] {
        &self.powers
    }

    /// `ceil(log2 p)`: the width of a sketch value on the wire.
    pub fn modulus_bits(&self) -> u64 {
        ceil_log2(&self.p)
    }

    /// Reduces an arbitrary integer into the field.
    pub fn element(&self, value: &BigInt) -> FieldElement {
        let p = BigInt::from_biguint(Sign::Plus, self.p.clone());
        FieldElement(value.mod_floor(&p).into_parts().1)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement((&a.0 + &b.0) % &self.p)
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement((&a.0 + &self.p - &b.0) % &self.p)
    }

    /// `sum_i v_i * xbar^i mod p` over an integer vector.
    pub fn encode(&self, v: &[i64]) -> Result<FieldElement> {
        self.check_dim(v.len())?;
        let mut acc = BigInt::zero();
        for (&vi, pw) in v.iter().zip(&self.powers) {
            if vi != 0 {
                acc += BigInt::from(vi) * BigInt::from_biguint(Sign::Plus, pw.clone());
            }
        }
        Ok(self.element(&acc))
    }

    /// Encodes a Boolean vector.
    pub fn encode_bool(&self, b: &[bool]) -> Result<FieldElement> {
        self.check_dim(b.len())?;
        let mut acc = BigUint::zero();
        for (_, pw) in b.iter().zip(&self.powers).filter(|(bit, _)| **bit) {
            acc += pw;
        }
        Ok(FieldElement(acc % &self.p))
    }

    /// Encodes the Boolean vector whose ones sit at `support`.
    pub fn encode_support(&self, support: &[usize]) -> Result<FieldElement> {
        let mut acc = BigUint::zero();
        for &i in support {
            acc += &self.powers[self.check_index(i)?];
        }
        Ok(FieldElement(acc % &self.p))
    }

    /// Encoding of the standard basis vector `e_k`, i.e. `xbar^k`.
    pub fn encode_basis(&self, k: usize) -> Result<FieldElement> {
        Ok(FieldElement(&self.powers[self.check_index(k)?] % &self.p))
    }

    /// Recovers the support (sorted) of the unique d-sparse Boolean vector
    /// encoding to `y`. With `expected_weight`, also checks its popcount.
    pub fn decode(&self, y: &FieldElement, expected_weight: Option<usize>) -> Result<Vec<usize>> {
        let support = if self.binary {
            self.decode_binary(&y.0)?
        } else {
            let table = self.table.get_or_init(|| {
                let count = sparse_family_size(self.n, self.d).to_usize().unwrap();
                Self::try_table(self.n, self.d, &self.p, &self.powers, count).expect("xbar is injective")
            });
            table
                .lookup(&y.0)
                .ok_or_else(|| SketchError::NotDecodable { value: y.0.clone() })?
                .iter()
                .map(|&i| i as usize)
                .collect()
        };
        match expected_weight {
            Some(expected) if expected != support.len() => Err(SketchError::WeightMismatch {
                expected,
                found: support.len(),
            }),
            _ => Ok(support),
        }
    }

    /// Like [`decode`](Self::decode), returning the dense Boolean vector.
    pub fn decode_bool(&self, y: &FieldElement, expected_weight: Option<usize>) -> Result<Vec<bool>> {
        let mut out = vec![false; self.n];
        for i in self.decode(y, expected_weight)? {
            out[i] = true;
        }
        Ok(out)
    }

    fn decode_binary(&self, y: &BigUint) -> Result<Vec<usize>> {
        if y.bits() > self.n as u64 || y.count_ones() > self.d as u64 {
            return Err(SketchError::NotDecodable { value: y.clone() });
        }
        Ok((0..self.n).filter(|&i| y.bit(i as u64)).collect())
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.n {
            return Err(SketchError::DimensionMismatch { expected: self.n, got });
        }
        Ok(())
    }

    fn check_index(&self, index: usize) -> Result<usize> {
        if index >= self.n {
            return Err(SketchError::IndexOutOfRange { index, n: self.n });
        }
        Ok(index)
    }
}

fn power_table(x: &BigUint, n: usize, p: &BigUint) -> Vec<BigUint> {
    let mut powers = Vec::with_capacity(n);
    let mut acc = BigUint::one() % p;
    for _ in 0..n {
        powers.push(acc.clone());
        acc = (&acc * x) % p;
    }
    powers
}
