//! Residue fields `F_p` and `F_{p^2}`.
//!
//! Elements are encoded as small integers `a + b*p` standing for `a + b*w`,
//! where `w` is a root of the Conway polynomial of degree two over `F_p`.
//! Prime-field elements use the same encoding with `b = 0`, so the inclusion
//! `F_p -> F_{p^2}` is the identity on codes.

use std::collections::HashMap;
use std::fmt;

use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Primes supported by the residue-field registry.
pub const SUPPORTED_PRIMES: [u32; 4] = [2, 3, 5, 7];

/// Code of a finite-field element, interpreted relative to a [`Gf`].
pub type Code = u16;

/// Lookup-table backed finite field of order `p^k`, `k` in {1, 2}.
pub struct Gf {
    p: u32,
    k: u32,
    order: usize,
    /// `w^2 = w2_lin * w + w2_const` (only meaningful for `k = 2`).
    w2_lin: u32,
    w2_const: u32,
    add: Vec<Code>,
    mul: Vec<Code>,
    neg: Vec<Code>,
    inv: Vec<Code>,
    frob: Vec<Code>,
}

// Conway polynomials x^2 + a1 x + a0 over F_p.
fn conway_quadratic(p: u32) -> (u32, u32) {
    match p {
        2 => (1, 1),
        3 => (2, 2),
        5 => (4, 2),
        7 => (6, 3),
        _ => unreachable!("unsupported prime"),
    }
}

impl Gf {
    fn build(p: u32, k: u32) -> Gf {
        let order = p.pow(k) as usize;
        let (a1, a0) = if k == 2 { conway_quadratic(p) } else { (0, 0) };
        // w^2 = -a1 w - a0
        let w2_lin = (p - a1) % p;
        let w2_const = (p - a0) % p;
        let split = |c: usize| ((c as u32) % p, (c as u32) / p);
        let join = |a: u32, b: u32| (a % p + (b % p) * p) as Code;

        let mut add = vec![0; order * order];
        let mut mul = vec![0; order * order];
        for x in 0..order {
            let (xa, xb) = split(x);
            for y in 0..order {
                let (ya, yb) = split(y);
                add[x * order + y] = join(xa + ya, xb + yb);
                // (xa + xb w)(ya + yb w) = xa ya + (xa yb + xb ya) w + xb yb w^2
                let bb = xb * yb;
                let a = xa * ya + bb * w2_const;
                let b = xa * yb + xb * ya + bb * w2_lin;
                mul[x * order + y] = join(a, b);
            }
        }
        let mut neg = vec![0; order];
        let mut inv = vec![0; order];
        for x in 0..order {
            let (xa, xb) = split(x);
            neg[x] = join(p - xa, p - xb);
            if x != 0 {
                inv[x] = (1..order)
                    .find(|&y| mul[x * order + y] == 1)
                    .expect("field element without inverse") as Code;
            }
        }
        let mut gf = Gf {
            p,
            k,
            order,
            w2_lin,
            w2_const,
            add,
            mul,
            neg,
            inv,
            frob: Vec::new(),
        };
        gf.frob = (0..order).map(|x| gf.pow(x as Code, p as u64)).collect();
        gf
    }

    pub fn get(p: u32, k: u32) -> Result<&'static Gf> {
        REGISTRY
            .get(&(p, k))
            .ok_or(Error::UnsupportedField { p, k })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The prime subfield viewed through the registry.
    pub fn prime_field(&self) -> &'static Gf {
        Gf::get(self.p, 1).expect("prime field registered")
    }

    /// The quadratic extension of the prime field.
    pub fn quadratic(&self) -> &'static Gf {
        Gf::get(self.p, 2).expect("quadratic field registered")
    }

    /// Coefficients `w^2 = lin * w + constant` of the defining relation.
    pub fn w_relation(&self) -> (u32, u32) {
        (self.w2_lin, self.w2_const)
    }

    #[inline]
    pub fn add(&self, x: Code, y: Code) -> Code {
        self.add[x as usize * self.order + y as usize]
    }

    #[inline]
    pub fn sub(&self, x: Code, y: Code) -> Code {
        self.add(x, self.neg[y as usize])
    }

    #[inline]
    pub fn mul(&self, x: Code, y: Code) -> Code {
        self.mul[x as usize * self.order + y as usize]
    }

    #[inline]
    pub fn neg(&self, x: Code) -> Code {
        self.neg[x as usize]
    }

    /// Inverse of a nonzero element. Panics on zero.
    #[inline]
    pub fn inv(&self, x: Code) -> Code {
        assert!(x != 0, "inverse of zero in F_{}^{}", self.p, self.k);
        self.inv[x as usize]
    }

    /// `x^p`, the absolute Frobenius. On `F_{p^2}` this is the nontrivial automorphism.
    #[inline]
    pub fn frobenius(&self, x: Code) -> Code {
        self.frob[x as usize]
    }

    pub fn pow(&self, x: Code, mut e: u64) -> Code {
        let mut base = x;
        let mut acc: Code = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Code {
        n.rem_euclid(self.p as i64) as Code
    }

    /// Code of `a + b*w`.
    pub fn from_parts(&self, a: i64, b: i64) -> Code {
        let p = self.p as i64;
        (a.rem_euclid(p) + b.rem_euclid(p) * p) as Code
    }

    pub fn parts(&self, x: Code) -> (u32, u32) {
        (x as u32 % self.p, x as u32 / self.p)
    }

    /// Code of the generator `w` (only for the quadratic field).
    pub fn w(&self) -> Code {
        debug_assert_eq!(self.k, 2);
        self.p as Code
    }

    pub fn is_in_prime_field(&self, x: Code) -> bool {
        (x as u32) < self.p
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> Code {
        let n = (self.order - 1) as u64;
        let factors: Vec<u64> = (2..=n)
            .filter(|d| n.is_multiple_of(*d) && is_prime(*d))
            .collect();
        (1..self.order as Code)
            .find(|&g| factors.iter().all(|&f| self.pow(g, n / f) != 1))
            .expect("cyclic group has a generator")
    }

    /// Norm `x^(p+1)` from `F_{p^2}` to `F_p`.
    pub fn norm(&self, x: Code) -> Code {
        self.mul(x, self.frobenius(x))
    }

    pub fn elements(&self) -> impl Iterator<Item = Code> {
        0..self.order as Code
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Code> {
        1..self.order as Code
    }

    pub fn fmt_code(&self, x: Code) -> String {
        let (a, b) = self.parts(x);
        match (a, b) {
            (a, 0) => a.to_string(),
            (0, 1) => "w".to_string(),
            (0, b) => format!("{b}*w"),
            (a, 1) => format!("w+{a}"),
            (a, b) => format!("{b}*w+{a}"),
        }
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}

impl Eq for Gf {}

impl std::hash::Hash for Gf {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.k.hash(state);
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..n)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

static REGISTRY: Lazy<HashMap<(u32, u32), Gf>> = Lazy::new(|| {
    let mut m = HashMap::new();
    for p in SUPPORTED_PRIMES {
        for k in [1, 2] {
            m.insert((p, k), Gf::build(p, k));
        }
    }
    m
});

/// A finite-field element bundled with its field.
#[derive(Clone, Copy)]
pub struct FiniteElement {
    pub field: &'static Gf,
    pub code: Code,
}

impl FiniteElement {
    pub fn new(field: &'static Gf, code: Code) -> Self {
        FiniteElement { field, code }
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    pub fn inv(&self) -> Option<Self> {
        (self.code != 0).then(|| FiniteElement::new(self.field, self.field.inv(self.code)))
    }
}

impl PartialEq for FiniteElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.code == other.code
    }
}

impl Eq for FiniteElement {}

impl fmt::Debug for FiniteElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.fmt_code(self.code))
    }
}

impl std::ops::Add for FiniteElement {
    type Output = FiniteElement;
    fn add(self, rhs: Self) -> Self {
        FiniteElement::new(self.field, self.field.add(self.code, rhs.code))
    }
}

impl std::ops::Mul for FiniteElement {
    type Output = FiniteElement;
    fn mul(self, rhs: Self) -> Self {
        FiniteElement::new(self.field, self.field.mul(self.code, rhs.code))
    }
}
