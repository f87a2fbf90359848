//! Binary multi-index algebra and the classical dyadic step-function systems.
//!
//! Two enumerations of the index set are in play and they do not agree:
//! the Paley map (used for Walsh functions) reads the word with its first
//! letter as the LOW bit, the natural map (used for Haar functions) reads it
//! with the first letter as the HIGH bit. Every public API states which one
//! it uses; mixing them up is the classic off-by-one of this domain.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::PiecewisePoly;
use crate::rational::rat_int;
use crate::scaled::ScaledPoly;

/// A finite binary word; the empty word is the concatenation identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    bits: Vec<u8>,
}

impl MultiIndex {
    pub fn new(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "multi-index letters must be 0 or 1");
        Self { bits }
    }

    pub fn empty() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        MultiIndex { bits }
    }

    /// True iff `other` equals `prefix ++ self` for some nonempty `prefix`.
    pub fn is_proper_suffix_of(&self, other: &MultiIndex) -> bool {
        self.len() < other.len() && other.bits[other.len() - self.len()..] == self.bits[..]
    }

    /// Displays as a bit string, the empty word as "e".
    pub fn to_bit_string(&self) -> String {
        if self.bits.is_empty() {
            "e".to_string()
        } else {
            self.bits.iter().map(|b| char::from(b'0' + b)).collect()
        }
    }

    /// All words of the given length, ordered by their Paley offset.
    pub fn all_of_length(len: u32) -> Vec<MultiIndex> {
        (0..1u64 << len)
            .map(|j| MultiIndex::new((0..len).map(|v| ((j >> v) & 1) as u8).collect()))
            .collect()
    }
}

/// Paley enumeration: word bits are the low binary digits, first letter lowest.
pub fn paley_index(alpha: &MultiIndex) -> u64 {
    let k = alpha.len() as u32;
    let mut n = 1u64 << k;
    for (v, &b) in alpha.bits.iter().enumerate() {
        n += (b as u64) << v;
    }
    n
}

/// Inverse of [`paley_index`]; n = 0 has no preimage.
pub fn paley_multiindex(n: u64) -> Result<MultiIndex> {
    let (k, j) = split_scale(n)?;
    Ok(MultiIndex::new((0..k).map(|v| ((j >> v) & 1) as u8).collect()))
}

/// Natural enumeration: first letter is the highest binary digit.
pub fn natural_index(alpha: &MultiIndex) -> u64 {
    let k = alpha.len() as u32;
    let mut n = 1u64 << k;
    for (i, &b) in alpha.bits.iter().enumerate() {
        n += (b as u64) << (k as usize - 1 - i);
    }
    n
}

/// Inverse of [`natural_index`]; n = 0 has no preimage.
pub fn natural_multiindex(n: u64) -> Result<MultiIndex> {
    let (k, j) = split_scale(n)?;
    Ok(MultiIndex::new((0..k).map(|i| ((j >> (k - 1 - i)) & 1) as u8).collect()))
}

/// Splits n >= 1 as n = 2^k + j with 0 <= j < 2^k.
pub fn split_scale(n: u64) -> Result<(u32, u64)> {
    if n == 0 {
        return Err(Error::ZeroIndexExcluded);
    }
    let k = 63 - n.leading_zeros();
    Ok((k, n - (1u64 << k)))
}

/// Number of square-wave factors of the n-th Walsh function (Paley).
pub fn chaos_order(n: u64) -> Result<u32> {
    let (_, j) = split_scale(n)?;
    Ok(j.count_ones() + 1)
}

/// The k-th Rademacher square wave at the requested dyadic level.
pub fn rademacher(k: u32, level: u32) -> Result<PiecewisePoly> {
    if level < k + 1 {
        return Err(Error::InsufficientResolution { needed: k + 1, got: level });
    }
    let pieces = (0..1u64 << level)
        .map(|i| {
            let sign = if (i >> (level - k - 1)) & 1 == 0 { 1 } else { -1 };
            vec![rat_int(sign)]
        })
        .collect();
    PiecewisePoly::new(level, pieces)
}

/// Sign of the n-th Walsh function (Paley, n >= 0) on piece i of the level grid.
/// Hadamard-kernel closed form, kept as an independent cross-check route.
#[cfg(test)]
fn walsh_sign(n: u64, i: u64, level: u32) -> i64 {
    debug_assert!(n < 1u64 << level || n == 0);
    let mut parity = 0u32;
    let mut bits = n;
    while bits != 0 {
        let v = bits.trailing_zeros();
        parity ^= ((i >> (level - 1 - v)) & 1) as u32;
        bits &= bits - 1;
    }
    if parity == 0 {
        1
    } else {
        -1
    }
}

/// The n-th Walsh function (Paley enumeration, n >= 1) as a product of
/// Rademacher factors.
pub fn walsh_fn(n: u64, level: u32) -> Result<PiecewisePoly> {
    let (k, j) = split_scale(n)?;
    if level < k + 1 {
        return Err(Error::InsufficientResolution { needed: k + 1, got: level });
    }
    let mut out = rademacher(k, level)?;
    for v in 0..k {
        if (j >> v) & 1 == 1 {
            out = out.product(&rademacher(v, level)?);
        }
    }
    Ok(out)
}

/// The n-th Haar function (natural position enumeration, n >= 1):
/// `2^{k/2}` times the Haar mother function squeezed onto `[j/2^k,(j+1)/2^k)`.
pub fn haar_fn(n: u64) -> Result<ScaledPoly> {
    let (k, j) = split_scale(n)?;
    let level = k + 1;
    let pieces = (0..1u64 << level)
        .map(|i| {
            if i == 2 * j {
                vec![rat_int(1)]
            } else if i == 2 * j + 1 {
                vec![rat_int(-1)]
            } else {
                vec![rat_int(0)]
            }
        })
        .collect();
    Ok(ScaledPoly::new(PiecewisePoly::new(level, pieces)?, k))
}

/// The sign matrix converting level-k Haar coefficients to Walsh coefficients.
///
/// `signs[i][j] * 2^{-k/2}` is the coefficient of the (2^k+j)-th Haar function
/// in the (2^k+i)-th Walsh function; the scaled matrix is unitary.
#[derive(Clone, Debug)]
pub struct WalshMatrixLevel {
    k: u32,
    signs: Vec<Vec<i8>>,
}

impl WalshMatrixLevel {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> usize {
        1usize << self.k
    }

    pub fn sign(&self, i: usize, j: usize) -> i8 {
        self.signs[i][j]
    }

    /// Exact unitarity check: signs^T signs 2^{-k} must be the identity.
    pub fn is_unitary(&self) -> bool {
        let n = self.size();
        for a in 0..n {
            for b in a..n {
                let dot: i64 = (0..n).map(|i| self.signs[i][a] as i64 * self.signs[i][b] as i64).sum();
                let expect = if a == b { 1i64 << self.k } else { 0 };
                if dot != expect {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds the level-k Walsh matrix from exact inner products of the two
/// systems rather than from an assumed Hadamard pattern.
pub fn walsh_matrix(k: u32) -> Result<WalshMatrixLevel> {
    let n = 1u64 << k;
    let scale = crate::rational::pow2(k as i64);
    let walsh: Vec<PiecewisePoly> =
        (0..n).map(|i| walsh_fn(n + i, k + 1)).collect::<Result<_>>()?;
    let mut signs = Vec::with_capacity(n as usize);
    for i in 0..n as usize {
        let mut row = Vec::with_capacity(n as usize);
        for j in 0..n as usize {
            let haar = haar_fn(n + j as u64)?;
            let entry = &scale * haar.poly().inner_product(&walsh[i]);
            let sign = if entry == rat_int(1) {
                1i8
            } else if entry == rat_int(-1) {
                -1i8
            } else {
                return Err(Error::InvariantViolation(format!(
                    "walsh matrix entry ({i},{j}) at level {k} is {entry}, expected +-1"
                )));
            };
            row.push(sign);
        }
        signs.push(row);
    }
    Ok(WalshMatrixLevel { k, signs })
}

/// Nonzero Walsh spectrum of `f` up to `max_index`, as Paley multi-indices.
pub fn walsh_spectrum(f: &PiecewisePoly, max_index: u64) -> Result<Vec<MultiIndex>> {
    let mut spectrum = Vec::new();
    for n in 1..=max_index {
        let (k, _) = split_scale(n)?;
        let w = walsh_fn(n, (k + 1).max(f.level()))?;
        if !f.inner_product(&w).is_zero() {
            spectrum.push(paley_multiindex(n)?);
        }
    }
    Ok(spectrum)
}
