//! Exact arithmetic in small finite fields GF(p^m).
//!
//! Elements are table indices: `0` is zero and `k >= 1` stands for `g^(k-1)`
//! where `g` is the root of the shipped primitive polynomial. Multiplication is
//! index arithmetic modulo `p^m - 1`; addition goes through a full addition
//! table, which is at most 81 x 81 bytes.

use std::fmt;

use thiserror::Error;

/// Default cap on the field order.
pub const DEFAULT_ORDER_CAP: usize = 81;

const PRIMITIVE_TABLE: &str = include_str!("../data/primitive_polynomials.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the cap {cap}")]
    CapExceeded { p: u32, m: u32, cap: usize },
    #[error("{order} is not the square of a prime power")]
    NotQuadratic { order: usize },
    #[error("subfield order {q} does not match a field of order {order}")]
    SubfieldMismatch { q: u32, order: usize },
    #[error("element {0} is not in the subfield")]
    NotInSubfield(u8),
    #[error("absolute trace needs characteristic 2")]
    OddCharacteristic,
    #[error("modulus polynomial for GF({p}^{m}) is not primitive")]
    NotPrimitive { p: u32, m: u32 },
}

/// A field element, addressed by table index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u8);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "0"),
            k => write!(f, "g^{}", k - 1),
        }
    }
}

/// Immutable arithmetic tables for GF(p^m).
#[derive(Clone)]
pub struct Field {
    p: u32,
    m: u32,
    order: usize,
    modulus: Vec<u32>,
    /// `exp_table[k]` = coefficient code of `g^k`, for `k < order - 1`.
    exp_table: Vec<u32>,
    /// coefficient code -> element index.
    log_table: Vec<u8>,
    add: Vec<u8>,
    neg: Vec<u8>,
    sub_q: Option<u32>,
    subfield: Vec<Elem>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.m)
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Splits a prime power into `(p, e)`.
pub fn prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut rest = n;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn table_entry(p: u32, m: u32) -> Option<Vec<u32>> {
    PRIMITIVE_TABLE
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .find_map(|line| {
            let nums: Vec<u32> = line.split_whitespace().map(|t| t.parse().unwrap()).collect();
            (nums[0] == p && nums[1] == m).then(|| nums[2..].to_vec())
        })
}

/// Powers of `x` modulo the monic polynomial with low coefficients `modulus`,
/// as coefficient codes. Returns `None` when `x` is not primitive.
fn power_cycle(p: u32, modulus: &[u32]) -> Option<Vec<u32>> {
    let m = modulus.len();
    let order = (p as usize).pow(m as u32);
    let encode = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &x| acc * p + x);
    let mut cur = vec![0u32; m];
    cur[0] = 1;
    let mut codes = Vec::with_capacity(order - 1);
    let mut seen = vec![false; order];
    for _ in 0..order - 1 {
        let code = encode(&cur);
        if seen[code as usize] || code == 0 {
            return None;
        }
        seen[code as usize] = true;
        codes.push(code);
        // multiply by x, then reduce x^m = -(c_0 + ... + c_{m-1} x^{m-1})
        let top = cur[m - 1];
        for i in (1..m).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        for (c, &mc) in cur.iter_mut().zip(modulus) {
            *c = (*c + p - (top * mc) % p) % p;
        }
    }
    (encode(&cur) == 1).then_some(codes)
}

/// Searches for the monic primitive polynomial of degree `m` over GF(p) with
/// the smallest code `sum(c_i p^i)`.
pub fn smallest_primitive_polynomial(p: u32, m: u32) -> Option<Vec<u32>> {
    let total = (p as u64).pow(m);
    (1..total).find_map(|code| {
        let coeffs: Vec<u32> = (0..m).map(|i| ((code / (p as u64).pow(i)) % p as u64) as u32).collect();
        if coeffs[0] == 0 {
            return None;
        }
        power_cycle(p, &coeffs).map(|_| coeffs)
    })
}

impl Field {
    /// GF(p^m) with the default order cap.
    pub fn new(p: u32, m: u32) -> Result<Field, GfError> {
        Field::with_cap(p, m, DEFAULT_ORDER_CAP)
    }

    /// The quadratic extension GF(q^2) of GF(q).
    pub fn quadratic(q: u32) -> Result<Field, GfError> {
        let (p, e) = prime_power(q).ok_or(GfError::NotPrime(q))?;
        Field::with_cap(p, 2 * e, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(p: u32, m: u32, cap: usize) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        let order = (p as usize).checked_pow(m).unwrap_or(usize::MAX);
        if order > cap || order > 256 {
            return Err(GfError::CapExceeded { p, m, cap });
        }
        let modulus = match table_entry(p, m) {
            Some(c) => c,
            None => smallest_primitive_polynomial(p, m).ok_or(GfError::NotPrimitive { p, m })?,
        };
        let exp_table = power_cycle(p, &modulus).ok_or(GfError::NotPrimitive { p, m })?;
        let mut log_table = vec![0u8; order];
        for (k, &code) in exp_table.iter().enumerate() {
            log_table[code as usize] = (k + 1) as u8;
        }
        let code_of = |e: usize| if e == 0 { 0 } else { exp_table[e - 1] };
        let add_codes = |a: u32, b: u32| {
            let (mut a, mut b) = (a, b);
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..m {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        };
        let mut add = vec![0u8; order * order];
        for a in 0..order {
            for b in 0..order {
                add[a * order + b] = log_table[add_codes(code_of(a), code_of(b)) as usize];
            }
        }
        let neg: Vec<u8> = (0..order)
            .map(|a| {
                let c = code_of(a);
                let mut out = 0u32;
                let mut place = 1u32;
                let mut rest = c;
                for _ in 0..m {
                    out += ((p - rest % p) % p) * place;
                    rest /= p;
                    place *= p;
                }
                log_table[out as usize]
            })
            .collect();
        let sub_q = if m % 2 == 0 { Some(p.pow(m / 2)) } else { None };
        let mut field = Field {
            p,
            m,
            order,
            modulus,
            exp_table,
            log_table,
            add,
            neg,
            sub_q,
            subfield: Vec::new(),
        };
        if let Some(q) = sub_q {
            field.subfield = field.elements().filter(|&x| field.pow(x, q as u64) == x).collect();
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Low coefficients `c_0..c_{m-1}` of the monic modulus polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Coefficient code `sum(a_i p^i)` of an element in the polynomial basis.
    pub fn code(&self, x: Elem) -> u32 {
        if x.is_zero() {
            0
        } else {
            self.exp_table[x.index() - 1]
        }
    }

    pub fn from_code(&self, code: u32) -> Elem {
        Elem(self.log_table[code as usize])
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, x: Elem) -> Option<u32> {
        (!x.is_zero()).then(|| x.0 as u32 - 1)
    }

    /// `g^k` for the primitive element `g`.
    pub fn gen_pow(&self, k: u64) -> Elem {
        Elem((k % (self.order as u64 - 1)) as u8 + 1)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order).map(|i| Elem(i as u8))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.order).map(|i| Elem(i as u8))
    }

    /// The prime-field element `k mod p`.
    pub fn from_int(&self, k: i64) -> Elem {
        let r = k.rem_euclid(self.p as i64) as u32;
        self.from_code(r)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let n1 = self.order - 1;
        let s = (a.index() - 1) + (b.index() - 1);
        Elem((if s >= n1 { s - n1 } else { s }) as u8 + 1)
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        let n1 = self.order - 1;
        Some(Elem(((n1 - (a.index() - 1)) % n1) as u8 + 1))
    }

    /// `a / b`; panics on division by zero.
    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b).expect("division by zero"))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let n1 = (self.order - 1) as u64;
        Elem((((a.index() as u64 - 1) * (e % n1)) % n1) as u8 + 1)
    }

    /// Order `q` of the subfield when this field is GF(q^2).
    pub fn subfield_order(&self) -> Option<u32> {
        self.sub_q
    }

    fn q(&self) -> u64 {
        self.sub_q.expect("field is not a quadratic extension") as u64
    }

    /// The elements of GF(q) inside GF(q^2), ascending by index.
    pub fn subfield(&self) -> &[Elem] {
        &self.subfield
    }

    pub fn in_subfield(&self, x: Elem) -> bool {
        self.sub_q.is_some() && self.conj(x) == x
    }

    /// `x -> x^q` for the quadratic extension; panics if there is none.
    #[inline]
    pub fn conj(&self, x: Elem) -> Elem {
        self.pow(x, self.q())
    }

    /// Checked form of [`Field::conj`]: `q` must satisfy `q^2 = |F|`.
    pub fn frobenius(&self, x: Elem, q: u32) -> Result<Elem, GfError> {
        if self.sub_q != Some(q) {
            return Err(GfError::SubfieldMismatch { q, order: self.order });
        }
        Ok(self.conj(x))
    }

    /// `x^(q+1)`, which lies in GF(q).
    #[inline]
    pub fn norm(&self, x: Elem) -> Elem {
        self.pow(x, self.q() + 1)
    }

    /// `x + x^q`, which lies in GF(q).
    #[inline]
    pub fn trace(&self, x: Elem) -> Elem {
        self.add(x, self.conj(x))
    }

    /// Squareness in GF(q) of an element of the subfield.
    ///
    /// For odd `q` this is Euler's criterion `y^((q-1)/2) = 1`; zero counts
    /// as a square. In even characteristic every element is a square.
    pub fn is_square_in_subfield(&self, y: Elem) -> Result<bool, GfError> {
        let q = self.sub_q.ok_or(GfError::NotQuadratic { order: self.order })?;
        if !self.in_subfield(y) {
            return Err(GfError::NotInSubfield(y.0));
        }
        if y.is_zero() || self.p == 2 {
            return Ok(true);
        }
        Ok(self.pow(y, ((q - 1) / 2) as u64) == Elem::ONE)
    }

    /// GF(q) -> GF(2) trace `y + y^2 + ... + y^(2^(e-1))` for `q = 2^e`.
    pub fn absolute_trace(&self, y: Elem) -> Result<u8, GfError> {
        if self.p != 2 {
            return Err(GfError::OddCharacteristic);
        }
        let q = self.sub_q.ok_or(GfError::NotQuadratic { order: self.order })?;
        if !self.in_subfield(y) {
            return Err(GfError::NotInSubfield(y.0));
        }
        let e = q.trailing_zeros();
        let mut acc = Elem::ZERO;
        let mut term = y;
        for _ in 0..e {
            acc = self.add(acc, term);
            term = self.mul(term, term);
        }
        match acc {
            Elem::ZERO => Ok(0),
            Elem::ONE => Ok(1),
            other => unreachable!("trace landed outside GF(2): {other:?}"),
        }
    }
}
