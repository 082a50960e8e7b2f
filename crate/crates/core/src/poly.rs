//! Binary polynomials over GF(2).
//!
//! Generator polynomials are written in octal following the usual turbo-code
//! convention: the binary expansion of the octal value is read from its most
//! significant bit, which is the coefficient of `D^0`, down to its least
//! significant bit, the coefficient of `D^ν`. Under this reading `13` is
//! `1 + D^2 + D^3` and `15` is `1 + D + D^3`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Largest supported degree.
pub const MAX_DEGREE: u32 = 24;

/// A non-zero polynomial over GF(2). Bit `j` of `coeffs` is the coefficient
/// of `D^j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryPolynomial {
    coeffs: u32,
}

impl BinaryPolynomial {
    pub fn from_coeffs(coeffs: u32) -> Result<Self> {
        if coeffs == 0 {
            return Err(Error::InvalidPolynomial("zero polynomial".into()));
        }
        let poly = Self { coeffs };
        if poly.degree() > MAX_DEGREE {
            return Err(Error::InvalidPolynomial(format!(
                "degree {} exceeds the supported maximum {MAX_DEGREE}",
                poly.degree()
            )));
        }
        Ok(poly)
    }

    /// Parses an octal generator, e.g. `"15"`.
    pub fn from_octal(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::Parse("empty octal string".into()));
        }
        if let Some(c) = text.chars().find(|c| !('0'..='7').contains(c)) {
            return Err(Error::Parse(format!(
                "'{c}' is not an octal digit in \"{text}\""
            )));
        }
        let digits = text.trim_start_matches('0');
        if digits.is_empty() {
            return Err(Error::InvalidPolynomial(format!(
                "\"{text}\" is the zero polynomial"
            )));
        }
        if digits.len() > 9 {
            return Err(Error::InvalidPolynomial(format!("\"{text}\" is too long")));
        }
        let value = u32::from_str_radix(digits, 8).map_err(|e| Error::Parse(e.to_string()))?;
        let width = 32 - value.leading_zeros();
        Self::from_coeffs(reverse_bits(value, width))
    }

    /// Octal form. Inverse of [`from_octal`](Self::from_octal) for every
    /// polynomial with a non-zero constant term.
    pub fn to_octal(&self) -> String {
        format!("{:o}", reverse_bits(self.coeffs, self.degree() + 1))
    }

    pub fn coeffs(&self) -> u32 {
        self.coeffs
    }

    pub fn degree(&self) -> u32 {
        31 - self.coeffs.leading_zeros()
    }

    pub fn coeff(&self, j: u32) -> bool {
        j < 32 && (self.coeffs >> j) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.coeffs.count_ones()
    }

    /// Smallest `L >= 1` such that this polynomial divides `D^L + 1`.
    pub fn period(&self) -> Result<u64> {
        let nu = self.degree();
        if nu == 0 {
            return Err(Error::Domain(
                "the period of a constant polynomial is undefined".into(),
            ));
        }
        if !self.coeff(0) {
            return Err(Error::Domain(format!(
                "{self} has no constant term, so it divides no D^L + 1"
            )));
        }
        // Powers of D modulo p; D is a unit because p(0) = 1.
        let top = 1u32 << nu;
        let mut x = 0b10u32;
        if nu == 1 {
            x ^= self.coeffs;
        }
        let mut l = 1u64;
        while x != 1 {
            x <<= 1;
            if x & top != 0 {
                x ^= self.coeffs;
            }
            l += 1;
        }
        Ok(l)
    }

    pub fn is_irreducible(&self) -> bool {
        let nu = self.degree();
        if nu == 0 {
            return false;
        }
        for d in 1..=nu / 2 {
            for divisor in (1u32 << d)..(1u32 << (d + 1)) {
                if rem(self.coeffs, divisor) == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Irreducible with maximal period `2^ν - 1`.
    pub fn is_primitive(&self) -> bool {
        let nu = self.degree();
        if nu == 0 || !self.coeff(0) || !self.is_irreducible() {
            return false;
        }
        self.period()
            .map(|l| l == (1u64 << nu) - 1)
            .unwrap_or(false)
    }

    /// Maximal-length sequence of the LFSR whose characteristic polynomial is
    /// `self`, started from the register state holding a single 1 in its most
    /// recent cell. Element 0 is that seed bit; the sequence repeats with
    /// period `2^ν - 1`.
    pub fn lfsr_sequence(&self, length: usize) -> Result<Vec<u8>> {
        let nu = self.degree();
        if nu < 2 || !self.is_primitive() {
            return Err(Error::Domain(format!(
                "{self} is not a primitive polynomial of degree >= 2"
            )));
        }
        // history[j-1] holds s_{t-j}
        let mut history = vec![0u8; nu as usize];
        let mut out = Vec::with_capacity(length);
        for t in 0..length {
            let mut bit = u8::from(t == 0);
            if t > 0 {
                for j in 1..=nu {
                    if self.coeff(j) {
                        bit ^= history[(j - 1) as usize];
                    }
                }
            }
            history.rotate_right(1);
            history[0] = bit;
            out.push(bit);
        }
        Ok(out)
    }
}

/// Autocorrelation at cyclic shift `shift` of the polar (±1) image of one
/// period of a binary sequence.
pub fn polar_autocorrelation(period: &[u8], shift: usize) -> i64 {
    let len = period.len();
    (0..len)
        .map(|i| {
            let a = 2 * i64::from(period[i]) - 1;
            let b = 2 * i64::from(period[(i + shift) % len]) - 1;
            a * b
        })
        .sum()
}

/// All primitive polynomials of the given degree, in increasing coefficient
/// order.
pub fn primitive_polynomials(degree: u32) -> Vec<BinaryPolynomial> {
    assert!(
        (1..=16).contains(&degree),
        "degree out of range for enumeration"
    );
    ((1u32 << degree) + 1..(1u32 << (degree + 1)))
        .step_by(2)
        .filter_map(|c| BinaryPolynomial::from_coeffs(c).ok())
        .filter(|p| p.is_primitive())
        .collect()
}

fn reverse_bits(value: u32, width: u32) -> u32 {
    if width == 0 {
        0
    } else {
        value.reverse_bits() >> (32 - width)
    }
}

fn rem(mut a: u32, b: u32) -> u32 {
    let db = 31 - b.leading_zeros();
    while a != 0 && 31 - a.leading_zeros() >= db {
        a ^= b << (31 - a.leading_zeros() - db);
    }
    a
}

impl FromStr for BinaryPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_octal(s)
    }
}

impl fmt::Display for BinaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for j in 0..=self.degree() {
            if !self.coeff(j) {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match j {
                0 => f.write_str("1")?,
                1 => f.write_str("D")?,
                _ => write!(f, "D^{j}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryPolynomial({} = {})", self.to_octal(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn oct(s: &str) -> BinaryPolynomial {
        BinaryPolynomial::from_octal(s).unwrap()
    }

    // Oracle: smallest L with p | D^L + 1 by explicit long division.
    fn period_by_division(p: BinaryPolynomial) -> u64 {
        (1..=(1u64 << p.degree()))
            .find(|&l| {
                let mut a = vec![0u8; l as usize + 1];
                a[0] = 1;
                a[l as usize] ^= 1;
                let d = p.degree() as usize;
                for i in (d..a.len()).rev() {
                    if a[i] == 1 {
                        for j in 0..=d {
                            if p.coeff(j as u32) {
                                a[i - d + j] ^= 1;
                            }
                        }
                    }
                }
                a.iter().all(|&b| b == 0)
            })
            .unwrap()
    }

    #[test]
    fn octal_reads_msb_as_constant_term() {
        assert_eq!(oct("15").coeffs(), 0b1011);
        assert_eq!(oct("15").to_string(), "1 + D + D^3");
        assert_eq!(oct("13").to_string(), "1 + D^2 + D^3");
        assert_eq!(oct("17").coeffs(), 0b1111);
        assert_eq!(oct("17").degree(), 3);
        assert_eq!(oct("1").degree(), 0);
        assert_eq!(oct("007"), oct("7"));
    }

    #[test]
    fn octal_errors() {
        assert!(matches!(
            BinaryPolynomial::from_octal(""),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            BinaryPolynomial::from_octal("18"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            BinaryPolynomial::from_octal("0"),
            Err(Error::InvalidPolynomial(_))
        ));
        assert!(matches!(
            BinaryPolynomial::from_octal("000"),
            Err(Error::InvalidPolynomial(_))
        ));
        assert!(BinaryPolynomial::from_octal("777777777").is_err());
    }

    #[test]
    fn periods() {
        assert_eq!(oct("15").period().unwrap(), 7);
        assert_eq!(oct("3").period().unwrap(), 1);
        assert_eq!(oct("17").period().unwrap(), 4);
        assert_eq!(period_by_division(oct("17")), 4);
        assert_eq!(oct("5").period().unwrap(), period_by_division(oct("5")));
        assert!(oct("1").period().is_err());
        let even = BinaryPolynomial::from_coeffs(0b110).unwrap();
        assert!(matches!(even.period(), Err(Error::Domain(_))));
    }

    #[test]
    fn period_matches_division_oracle() {
        for c in (3u32..256).step_by(2) {
            let p = BinaryPolynomial::from_coeffs(c).unwrap();
            assert_eq!(p.period().unwrap(), period_by_division(p), "{p:?}");
        }
    }

    #[test]
    fn primitivity() {
        assert!(oct("15").is_primitive());
        assert!(oct("13").is_primitive());
        assert!(!oct("17").is_primitive());
        assert!(!oct("17").is_irreducible());
        assert!(oct("7").is_primitive());
        assert!(!oct("5").is_primitive());
        assert!(oct("23").is_primitive());
        // 1 + D + D^2 + D^3 + D^4 is irreducible with period 5, not primitive
        assert!(oct("37").is_irreducible());
        assert!(!oct("37").is_primitive());
    }

    #[test]
    fn primitive_counts_match_totient() {
        // phi(2^n - 1) / n
        for (n, count) in [(2, 1), (3, 2), (4, 2), (5, 6), (6, 6), (7, 18), (8, 16)] {
            assert_eq!(primitive_polynomials(n).len(), count, "degree {n}");
        }
    }

    #[test]
    fn lfsr_sequences() {
        let s = oct("15").lfsr_sequence(7).unwrap();
        assert_eq!(s, vec![1, 1, 1, 0, 1, 0, 0]);
        assert_eq!(s.iter().filter(|&&b| b == 1).count(), 4);

        let s = oct("7").lfsr_sequence(6).unwrap();
        assert_eq!(s, vec![1, 1, 0, 1, 1, 0]);

        assert!(oct("17").lfsr_sequence(4).is_err());
        assert!(oct("3").lfsr_sequence(4).is_err());
    }

    #[test]
    fn m_sequence_balance_and_autocorrelation() {
        for nu in 2..=6u32 {
            let l = (1usize << nu) - 1;
            for p in primitive_polynomials(nu) {
                assert_eq!(p.period().unwrap(), l as u64);
                let seq = p.lfsr_sequence(2 * l).unwrap();
                assert_eq!(seq[..l], seq[l..]);
                let ones = seq[..l].iter().filter(|&&b| b == 1).count();
                assert_eq!(ones, 1 << (nu - 1));
                assert_eq!(polar_autocorrelation(&seq[..l], 0), l as i64);
                for j in 1..l {
                    assert_eq!(polar_autocorrelation(&seq[..l], j), -1, "{p:?} shift {j}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn octal_round_trip(c in 1u32..(1 << 20)) {
            // generators have a non-zero constant term
            let p = BinaryPolynomial::from_coeffs(c | 1).unwrap();
            prop_assert_eq!(BinaryPolynomial::from_octal(&p.to_octal()).unwrap(), p);
        }
    }
}
