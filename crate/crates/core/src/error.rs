//! Error taxonomy. Precondition violations are ordinary errors; a broken
//! rationality invariant gets its own variant because the underlying theorem
//! rules it out, so hitting it means the implementation is wrong.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `p` is not a prime number.
    NotPrime(u64),
    /// Requested field order exceeds the table size cap.
    SizeCap { q: u128, cap: u64 },
    /// A quadratic-tower operation was requested on an odd total degree.
    OddDegree { deg: u32 },
    /// Tower analysis is restricted to odd characteristic.
    EvenCharTower,
    /// Element encoding out of range for the field.
    ElementRange { encoding: u64, q: u64 },
    /// Unparseable element text.
    BadElement(String),
    /// `gcd(s, q-1) != 1`.
    NotInvertible { s: u64 },
    /// `s !≡ 1 (mod p-1)`, so an integer-valued sum is not guaranteed.
    NotRational { s: u64, p: u64 },
    /// `s !≡ 1 (mod p^n - 1)`: coset acceleration requires a normalized exponent.
    NotNormalized { s: u64 },
    /// A sum that the rationality theorem guarantees to be an integer came out
    /// irrational. This is an internal bug, never a usage error.
    IrrationalityBug { s: u64, a: u64 },
    /// Negative power of the zero element.
    ZeroInverse,
    /// `t` must divide `p^n + 1`.
    BadUnityOrder { t: u64, pn: u64 },
    /// The spectrum was requested over a subfield domain that does not exist.
    NoSubfieldDomain,
    /// The 4x4 multiplicity system is singular for these parameters.
    SingularSystem { detail: String },
    /// The naive and coset-accelerated paths disagreed; an internal bug.
    PathMismatch { s: u64, a: u64, naive: i64, accelerated: i64 },
    /// A scan sink failed to accept a verdict.
    Sink(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::SizeCap { q, cap } => {
                write!(f, "field order {q} exceeds the size cap {cap}")
            }
            Error::OddDegree { deg } => {
                write!(f, "quadratic tower needs an even total degree, got {deg}")
            }
            Error::EvenCharTower => {
                write!(f, "tower analysis requires odd characteristic")
            }
            Error::ElementRange { encoding, q } => {
                write!(f, "element encoding {encoding} out of range for field of order {q}")
            }
            Error::BadElement(text) => write!(f, "cannot parse element {text:?}"),
            Error::NotInvertible { s } => {
                write!(f, "exponent {s} is not invertible (gcd with q-1 exceeds 1)")
            }
            Error::NotRational { s, p } => {
                write!(f, "exponent {s} is not 1 mod {} so the sum need not be rational", p - 1)
            }
            Error::NotNormalized { s } => {
                write!(f, "exponent {s} is not 1 mod (p^n - 1); normalize it first")
            }
            Error::IrrationalityBug { s, a } => {
                write!(f, "internal error: irrational sum for s={s}, a={a} despite rational precondition")
            }
            Error::ZeroInverse => write!(f, "zero has no negative powers"),
            Error::BadUnityOrder { t, pn } => {
                write!(f, "{t} does not divide p^n + 1 = {}", pn + 1)
            }
            Error::NoSubfieldDomain => {
                write!(f, "subfield domain requested on a field without a quadratic subfield view")
            }
            Error::SingularSystem { detail } => write!(f, "singular multiplicity system: {detail}"),
            Error::PathMismatch { s, a, naive, accelerated } => write!(
                f,
                "internal error: naive path gave {naive} but coset path gave {accelerated} for s={s}, a={a}"
            ),
            Error::Sink(detail) => write!(f, "scan sink failure: {detail}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
