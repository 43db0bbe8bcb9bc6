//! Exact arithmetic in F_q (q a prime power) and linear algebra over F_q^k.
//!
//! Elements of F_{p^e} are encoded as integers in `0..q`: the base-p digits
//! of an element are the coefficients of its polynomial representative, least
//! significant digit first. Extension fields reduce modulo the
//! lexicographically smallest monic irreducible polynomial of degree e over
//! F_p, so the encoding is identical across runs and platforms.
//!
//! Subspaces of F_q^k are stored as reduced-row-echelon bases, which makes
//! the representation canonical: two `Subspace` values are equal as sets of
//! vectors iff their stored bases are identical.

use thiserror::Error;

pub type FieldElem = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Full multiplication/inverse tables are built below this order.
const TABLE_LIMIT: u64 = 512;

/// Arithmetic context for F_q, q = p^e.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldContext {
    q: u64,
    p: u64,
    e: u32,
    /// Low coefficients a_0..a_{e-1} of the monic reduction polynomial
    /// x^e + a_{e-1} x^{e-1} + ... + a_0. Empty for prime fields.
    irred: Vec<u64>,
    /// x^e reduced: digits of -(a_0..a_{e-1}) mod p. Empty for prime fields.
    reduction: Vec<u64>,
    mul_table: Vec<FieldElem>,
    inv_table: Vec<FieldElem>,
}

/// Builds an arithmetic context for F_q.
pub fn make_field(q: u64) -> Result<FieldContext, GfError> {
    if q < 2 {
        return Err(GfError::NotPrimePower(q));
    }
    let p = smallest_prime_factor(q);
    let mut e = 0u32;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(GfError::NotPrimePower(q));
    }
    let (irred, reduction) = if e == 1 {
        (Vec::new(), Vec::new())
    } else {
        let irred = smallest_irreducible(p, e);
        let reduction: Vec<u64> = irred.iter().map(|&a| (p - a % p) % p).collect();
        (irred, reduction)
    };
    let mut field = FieldContext {
        q,
        p,
        e,
        irred,
        reduction,
        mul_table: Vec::new(),
        inv_table: Vec::new(),
    };
    if q <= TABLE_LIMIT {
        let mut mul = vec![0; (q * q) as usize];
        for a in 0..q as FieldElem {
            for b in 0..q as FieldElem {
                mul[(a as u64 * q + b as u64) as usize] = field.mul_raw(a, b);
            }
        }
        let mut inv = vec![0; q as usize];
        for a in 1..q as FieldElem {
            inv[a as usize] = field.inv_raw(a);
        }
        field.mul_table = mul;
        field.inv_table = inv;
    }
    Ok(field)
}

/// True iff q = p^e for some prime p and e >= 1.
pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
    }
    rest == 1
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

/// Monic polynomials of degree e over F_p, as coefficient vectors a_0..a_{e-1}
/// (the leading 1 is implicit), ordered by the integer Sum a_i p^i.
fn smallest_irreducible(p: u64, e: u32) -> Vec<u64> {
    let count = p.pow(e);
    for code in 0..count {
        let coeffs: Vec<u64> = (0..e).map(|i| code / p.pow(i) % p).collect();
        if poly_is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

/// Trial division by every monic polynomial of degree 1..=e/2.
fn poly_is_irreducible(p: u64, low: &[u64]) -> bool {
    let e = low.len() as u32;
    let mut full: Vec<u64> = low.to_vec();
    full.push(1);
    for d in 1..=e / 2 {
        for code in 0..p.pow(d) {
            let mut div: Vec<u64> = (0..d).map(|i| code / p.pow(i) % p).collect();
            div.push(1);
            if poly_rem_is_zero(p, &full, &div) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(p: u64, num: &[u64], den: &[u64]) -> bool {
    let mut rem: Vec<u64> = num.to_vec();
    let dd = den.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for (i, &c) in den.iter().enumerate() {
                let sub = lead * c % p;
                rem[shift + i] = (rem[shift + i] + p - sub) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

impl FieldContext {
    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.e
    }

    /// Low coefficients of the reduction polynomial (empty for prime fields).
    pub fn reduction_poly(&self) -> &[u64] {
        &self.irred
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.e == 1 {
            return ((a as u64 + b as u64) % self.p) as FieldElem;
        }
        // Digitwise addition mod p.
        let (mut out, mut scale) = (0u64, 1u64);
        let (mut x, mut y) = (a as u64, b as u64);
        for _ in 0..self.e {
            out += (x % self.p + y % self.p) % self.p * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        out as FieldElem
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.e == 1 {
            return ((self.p - a as u64 % self.p) % self.p) as FieldElem;
        }
        let (mut out, mut scale) = (0u64, 1u64);
        let mut x = a as u64;
        for _ in 0..self.e {
            out += (self.p - x % self.p) % self.p * scale;
            x /= self.p;
            scale *= self.p;
        }
        out as FieldElem
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if !self.mul_table.is_empty() {
            return self.mul_table[(a as u64 * self.q + b as u64) as usize];
        }
        self.mul_raw(a, b)
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        assert!(a != 0, "zero has no multiplicative inverse");
        if !self.inv_table.is_empty() {
            return self.inv_table[a as usize];
        }
        self.inv_raw(a)
    }

    fn mul_raw(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.e == 1 {
            return (a as u64 * b as u64 % self.p) as FieldElem;
        }
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; (2 * self.e - 1) as usize];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // Reduce degrees e..2e-2 using x^e = reduction(x).
        for d in (self.e as usize..prod.len()).rev() {
            let c = prod[d];
            if c != 0 {
                prod[d] = 0;
                for (i, &r) in self.reduction.iter().enumerate() {
                    prod[d - self.e as usize + i] =
                        (prod[d - self.e as usize + i] + c * r) % self.p;
                }
            }
        }
        self.undigits(&prod[..self.e as usize])
    }

    fn inv_raw(&self, a: FieldElem) -> FieldElem {
        // a^(q-2), by square and multiply.
        let mut result: FieldElem = 1;
        let mut base = a;
        let mut exp = self.q - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul_raw(result, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        result
    }

    fn digits(&self, a: FieldElem) -> Vec<u64> {
        let mut x = a as u64;
        (0..self.e)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn undigits(&self, digits: &[u64]) -> FieldElem {
        let mut out = 0u64;
        for &d in digits.iter().rev() {
            out = out * self.p + d;
        }
        out as FieldElem
    }
}

/// All q^k vectors of F_q^k in ascending integer-encoded order.
pub fn all_vectors(field: &FieldContext, k: usize) -> Vec<Vec<FieldElem>> {
    let q = field.order();
    let total = q.pow(k as u32);
    (0..total)
        .map(|code| {
            (0..k)
                .map(|i| (code / q.pow(i as u32) % q) as FieldElem)
                .collect()
        })
        .collect()
}

pub fn standard_basis_vector(k: usize, i: usize) -> Vec<FieldElem> {
    let mut v = vec![0; k];
    v[i] = 1;
    v
}

/// A subspace of F_q^k held as a reduced-row-echelon basis.
///
/// The derived `Ord` compares bases row-major, which doubles as the canonical
/// ordering used everywhere enumeration output must be reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<FieldElem>>,
}

impl Subspace {
    /// The zero subspace (empty basis).
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    /// Canonical subspace spanned by the given vectors. Zero and dependent
    /// vectors are permitted and ignored.
    pub fn span(
        field: &FieldContext,
        vectors: &[Vec<FieldElem>],
        ambient_dim: usize,
    ) -> Result<Self, GfError> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(GfError::DimensionMismatch {
                    expected: ambient_dim,
                    got: v.len(),
                });
            }
        }
        let basis = rref(field, vectors.to_vec(), ambient_dim);
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<FieldElem>] {
        &self.basis
    }

    /// Row-major element sequence of the basis; the canonical hash key.
    pub fn canonical_key(&self) -> Vec<FieldElem> {
        self.basis.iter().flatten().copied().collect()
    }

    /// Canonical representation of the subspace sum self + other.
    pub fn sum(&self, field: &FieldContext, other: &Subspace) -> Result<Subspace, GfError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(GfError::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Ok(Subspace {
            ambient_dim: self.ambient_dim,
            basis: rref(field, rows, self.ambient_dim),
        })
    }

    /// Extends the subspace by one additional vector.
    pub fn extend(&self, field: &FieldContext, v: &[FieldElem]) -> Result<Subspace, GfError> {
        if v.len() != self.ambient_dim {
            return Err(GfError::DimensionMismatch {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Ok(Subspace {
            ambient_dim: self.ambient_dim,
            basis: rref(field, rows, self.ambient_dim),
        })
    }

    /// True iff v lies in the subspace.
    pub fn contains(&self, field: &FieldContext, v: &[FieldElem]) -> Result<bool, GfError> {
        if v.len() != self.ambient_dim {
            return Err(GfError::DimensionMismatch {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        let mut r = v.to_vec();
        for row in &self.basis {
            let pivot = row.iter().position(|&c| c != 0).unwrap();
            if r[pivot] != 0 {
                let factor = r[pivot];
                for (dst, &src) in r.iter_mut().zip(row.iter()) {
                    *dst = field.sub(*dst, field.mul(factor, src));
                }
            }
        }
        Ok(r.iter().all(|&c| c == 0))
    }

    /// True iff other is a subspace of self.
    pub fn contains_subspace(
        &self,
        field: &FieldContext,
        other: &Subspace,
    ) -> Result<bool, GfError> {
        for row in &other.basis {
            if !self.contains(field, row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Reduced row echelon form; drops zero rows, normalizes pivots to 1 and
/// clears above each pivot.
fn rref(field: &FieldContext, mut rows: Vec<Vec<FieldElem>>, width: usize) -> Vec<Vec<FieldElem>> {
    let mut pivot_row = 0;
    for col in 0..width {
        let Some(sel) = (pivot_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, sel);
        let inv = field.inv(rows[pivot_row][col]);
        for c in col..width {
            rows[pivot_row][c] = field.mul(rows[pivot_row][c], inv);
        }
        for r in 0..rows.len() {
            if r != pivot_row && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in col..width {
                    let delta = field.mul(factor, rows[pivot_row][c]);
                    rows[r][c] = field.sub(rows[r][c], delta);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    rows
}
