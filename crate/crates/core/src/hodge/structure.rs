//! Dimension-level rational Hodge structures.
//!
//! A [`GradedHodgeStructure`] records the Hodge numbers `h^{p,q}` of a weight-`k`
//! structure, optionally refined by a grading: a character index `j mod m`
//! (for a `Z/m` action) and/or the sign of an involution. Graded pieces must
//! sum to the totals, and complex conjugation swaps piece `j` at `(p,q)` with
//! piece `m - j` at `(q,p)`.

use std::collections::BTreeMap;
use std::fmt;

use super::HodgeError;

/// Eigenvalue label of an involution on a graded piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
    /// The piece carries no involution data.
    None,
}

impl Sign {
    /// Sign of the tensor product of two eigenvectors.
    pub fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::None, _) | (_, Sign::None) => Sign::None,
            (a, b) if a == b => Sign::Plus,
            _ => Sign::Minus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::None => "0",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Sign> {
        match s {
            "+" => Some(Sign::Plus),
            "-" => Some(Sign::Minus),
            "0" => Some(Sign::None),
            _ => None,
        }
    }
}

/// Label of one graded piece: character index modulo `m` and involution sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PieceKey {
    pub character: u32,
    pub sign: Sign,
}

impl PieceKey {
    pub fn new(character: u32, sign: Sign) -> Self {
        Self { character, sign }
    }

    /// Key carrying only an involution sign (modulus 1).
    pub fn signed(sign: Sign) -> Self {
        Self { character: 0, sign }
    }
}

/// Grading of a Hodge structure by characters of `Z/m` and involution signs.
///
/// Each piece stores dimensions indexed by `p` (with `q = weight - p`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    pub(crate) modulus: u32,
    pub(crate) pieces: BTreeMap<PieceKey, Vec<u64>>,
}

impl Grading {
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&PieceKey, &[u64])> {
        self.pieces.iter().map(|(k, v)| (k, v.as_slice()))
    }

    fn drop_empty(&mut self) {
        self.pieces.retain(|_, v| v.iter().any(|&h| h != 0));
    }
}

/// Weight-`k` Hodge numbers with an optional grading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedHodgeStructure {
    weight: u32,
    /// `dims[p] = h^{p, weight - p}`.
    dims: Vec<u64>,
    grading: Option<Grading>,
}

/// Dimension entries `(p, q, h)` used to build a structure.
pub type Bidegree = (u32, u32);

impl GradedHodgeStructure {
    /// Validating constructor.
    ///
    /// `grading` is `(m, [(j, sign, p, q, h), ...])`.
    pub fn new(
        weight: u32,
        dims: &[(u32, u32, u64)],
        grading: Option<(u32, &[(u32, Sign, u32, u32, u64)])>,
    ) -> Result<Self, HodgeError> {
        let mut table = vec![0u64; weight as usize + 1];
        for &(p, q, h) in dims {
            if p + q != weight {
                return Err(HodgeError::BadBidegree { p, q, weight });
            }
            table[p as usize] += h;
        }
        let grading = match grading {
            None => None,
            Some((m, pieces)) => {
                if m == 0 {
                    return Err(HodgeError::GradingMismatch("grading modulus must be positive".into()));
                }
                let mut map: BTreeMap<PieceKey, Vec<u64>> = BTreeMap::new();
                for &(j, sign, p, q, h) in pieces {
                    if p + q != weight {
                        return Err(HodgeError::BadBidegree { p, q, weight });
                    }
                    if j >= m {
                        return Err(HodgeError::GradingMismatch(format!(
                            "character index {j} out of range for modulus {m}"
                        )));
                    }
                    let entry = map
                        .entry(PieceKey::new(j, sign))
                        .or_insert_with(|| vec![0; weight as usize + 1]);
                    entry[p as usize] += h;
                }
                let mut g = Grading { modulus: m, pieces: map };
                g.drop_empty();
                Some(g)
            }
        };
        Self::from_parts(weight, table, grading)
    }

    /// Ungraded structure from `h^{k,0}, h^{k-1,1}, ..., h^{0,k}`.
    pub fn from_hodge_numbers(weight: u32, numbers_from_top: &[u64]) -> Result<Self, HodgeError> {
        if numbers_from_top.len() != weight as usize + 1 {
            return Err(HodgeError::GradingMismatch(format!(
                "expected {} Hodge numbers for weight {weight}, got {}",
                weight + 1,
                numbers_from_top.len()
            )));
        }
        let dims: Vec<u64> = numbers_from_top.iter().rev().copied().collect();
        Self::from_parts(weight, dims, None)
    }

    /// Structure whose every piece carries the same involution sign.
    pub fn with_uniform_sign(mut self, sign: Sign) -> Self {
        let mut pieces = BTreeMap::new();
        if self.dimension() > 0 {
            pieces.insert(PieceKey::signed(sign), self.dims.clone());
        }
        self.grading = Some(Grading { modulus: 1, pieces });
        self
    }

    /// Zero structure of the given weight.
    pub fn zero(weight: u32) -> Self {
        Self {
            weight,
            dims: vec![0; weight as usize + 1],
            grading: None,
        }
    }

    /// The unit structure `Q(0)`: weight 0, dimension 1.
    pub fn unit() -> Self {
        Self {
            weight: 0,
            dims: vec![1],
            grading: None,
        }
    }

    pub(crate) fn from_parts(
        weight: u32,
        dims: Vec<u64>,
        grading: Option<Grading>,
    ) -> Result<Self, HodgeError> {
        debug_assert_eq!(dims.len(), weight as usize + 1);
        let hs = Self { weight, dims, grading };
        hs.validate()?;
        Ok(hs)
    }

    fn validate(&self) -> Result<(), HodgeError> {
        let k = self.weight as usize;
        for p in 0..=k {
            if self.dims[p] != self.dims[k - p] {
                return Err(HodgeError::SymmetryViolation {
                    p: p as u32,
                    q: (k - p) as u32,
                    h_pq: self.dims[p],
                    h_qp: self.dims[k - p],
                });
            }
        }
        if let Some(g) = &self.grading {
            let mut sum = vec![0u64; k + 1];
            for v in g.pieces.values() {
                if v.len() != k + 1 {
                    return Err(HodgeError::GradingMismatch("piece length differs from weight".into()));
                }
                for (s, h) in sum.iter_mut().zip(v) {
                    *s += h;
                }
            }
            if sum != self.dims {
                return Err(HodgeError::GradingMismatch(format!(
                    "graded pieces sum to {sum:?}, totals are {:?}",
                    self.dims
                )));
            }
            let m = g.modulus;
            for (key, v) in &g.pieces {
                let conj = PieceKey::new((m - key.character) % m, key.sign);
                let other = g.pieces.get(&conj);
                for p in 0..=k {
                    let mirrored = other.map_or(0, |w| w[k - p]);
                    if v[p] != mirrored {
                        return Err(HodgeError::GradingMismatch(format!(
                            "piece (j={}, {}) at ({p},{}) has dimension {} but its conjugate piece has {mirrored}",
                            key.character,
                            key.sign.symbol(),
                            k - p,
                            v[p]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// `h^{p,q}`; zero when `p + q` differs from the weight.
    pub fn h(&self, p: u32, q: u32) -> u64 {
        if p + q != self.weight {
            return 0;
        }
        self.dims[p as usize]
    }

    /// Hodge numbers ordered from `h^{k,0}` down to `h^{0,k}`.
    pub fn hodge_numbers(&self) -> Vec<u64> {
        self.dims.iter().rev().copied().collect()
    }

    /// Nonzero entries `(p, q, h)` with `p` descending.
    pub fn entries(&self) -> Vec<(u32, u32, u64)> {
        let k = self.weight;
        (0..=k)
            .rev()
            .filter(|&p| self.dims[p as usize] != 0)
            .map(|p| (p, k - p, self.dims[p as usize]))
            .collect()
    }

    pub fn dimension(&self) -> u64 {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dimension() == 0
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    pub fn without_grading(&self) -> Self {
        Self {
            weight: self.weight,
            dims: self.dims.clone(),
            grading: None,
        }
    }

    /// Dimension of one graded piece at `(p, q)`.
    pub fn piece_h(&self, key: PieceKey, p: u32, q: u32) -> u64 {
        if p + q != self.weight {
            return 0;
        }
        self.grading
            .as_ref()
            .and_then(|g| g.pieces.get(&key))
            .map_or(0, |v| v[p as usize])
    }

    /// Graded piece as a structure in its own right (conjugation-stable
    /// only when the piece is self-conjugate, so the result is ungraded and
    /// not re-validated for symmetry).
    pub fn piece(&self, key: PieceKey) -> Option<Vec<u64>> {
        self.grading.as_ref()?.pieces.get(&key).cloned()
    }

    /// Sub-structure made of the pieces with the given involution sign.
    ///
    /// Fails with `MissingSignData` when the structure carries no sign data
    /// (a zero structure has trivially empty parts).
    pub fn sign_part(&self, sign: Sign) -> Result<Self, HodgeError> {
        if self.is_zero() {
            return Ok(Self::zero(self.weight).with_uniform_sign(sign));
        }
        let g = self.grading.as_ref().ok_or(HodgeError::MissingSignData)?;
        if g.pieces.keys().any(|k| k.sign == Sign::None) {
            return Err(HodgeError::MissingSignData);
        }
        let k = self.weight as usize;
        let mut dims = vec![0u64; k + 1];
        let mut pieces = BTreeMap::new();
        for (key, v) in g.pieces.iter().filter(|(key, _)| key.sign == sign) {
            for (d, h) in dims.iter_mut().zip(v) {
                *d += h;
            }
            pieces.insert(*key, v.clone());
        }
        Self::from_parts(
            self.weight,
            dims,
            Some(Grading {
                modulus: g.modulus,
                pieces,
            }),
        )
    }

    /// True when every nonzero class sits in a single bidegree `(p,p)`.
    /// The zero structure counts as concentrated.
    pub fn is_concentrated_pp(&self) -> bool {
        let k = self.weight as usize;
        self.dims
            .iter()
            .enumerate()
            .all(|(p, &h)| h == 0 || 2 * p == k)
    }

    /// Two-variable Hodge polynomial `sum h^{p,q} x^p y^q`, as a map
    /// `(p, q) -> h`.
    pub fn hodge_polynomial(&self) -> BTreeMap<Bidegree, u64> {
        self.entries().into_iter().map(|(p, q, h)| ((p, q), h)).collect()
    }

    /// Hodge numbers of graded piece `key`, ordered by descending `p`.
    pub fn piece_numbers(&self, key: PieceKey) -> Vec<u64> {
        self.piece(key)
            .map(|v| v.into_iter().rev().collect())
            .unwrap_or_else(|| vec![0; self.weight as usize + 1])
    }

    pub(crate) fn dims_raw(&self) -> &[u64] {
        &self.dims
    }
}

impl fmt::Display for GradedHodgeStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H(w={}) (", self.weight)?;
        for (i, h) in self.hodge_numbers().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, ")")
    }
}
