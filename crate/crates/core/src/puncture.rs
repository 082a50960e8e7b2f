//! Periodic puncturing patterns.
//!
//! A row is a keep/drop vector of period `M`; column `m` (1-based) is active
//! at every time step `i` with `i mod M = m - 1`. Rows are written as bit
//! strings whose leftmost character is column 1.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::cwef::W2Paths;
use crate::encoder::RscCode;
use crate::{Error, Rate, Result};

/// Longest supported puncturing period after lcm extension.
pub const MAX_PERIOD: usize = 1 << 16;

/// 1-based column active at 0-based time step `step`.
#[inline]
pub fn column_index(step: usize, period: usize) -> usize {
    step % period + 1
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PunctureRow(Vec<bool>);

impl PunctureRow {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Parse("puncturing row must have period >= 1".into()));
        }
        if bits.len() > MAX_PERIOD {
            return Err(Error::Limit(format!(
                "puncturing period {} too long",
                bits.len()
            )));
        }
        Ok(Self(bits))
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        Self::new(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn ones(period: usize) -> Self {
        Self(vec![true; period.max(1)])
    }

    pub fn zeros(period: usize) -> Self {
        Self(vec![false; period.max(1)])
    }

    pub fn period(&self) -> usize {
        self.0.len()
    }

    /// Column `m` (1-based) with periodic extension, `m >= 1`.
    #[inline]
    pub fn get(&self, m: usize) -> bool {
        debug_assert!(m >= 1);
        self.0[(m - 1) % self.0.len()]
    }

    /// Flag active at 0-based time step `step`.
    #[inline]
    pub fn at_step(&self, step: usize) -> bool {
        self.0[step % self.0.len()]
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn complement(&self) -> Self {
        Self(self.0.iter().map(|b| !b).collect())
    }

    /// Row whose column `m` is this row's column `m + shift`.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut bits = self.0.clone();
        let len = bits.len();
        bits.rotate_left(shift % len);
        Self(bits)
    }

    /// Same flags written out over `period` columns; `period` must be a
    /// multiple of the current period.
    pub fn extended(&self, period: usize) -> Self {
        debug_assert_eq!(period % self.0.len(), 0);
        Self((0..period).map(|i| self.at_step(i)).collect())
    }
}

impl FromStr for PunctureRow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("'{other}' in puncturing row \"{s}\""))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }
}

impl fmt::Display for PunctureRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for PunctureRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

fn common_period(periods: &[usize]) -> Result<usize> {
    let p = periods.iter().fold(1usize, |acc, &p| acc.lcm(&p));
    if p > MAX_PERIOD {
        return Err(Error::Limit(format!(
            "common puncturing period {p} too long"
        )));
    }
    Ok(p)
}

/// The `2 x M` pattern of one rate-1/2 constituent: systematic row and
/// parity row, stored over their common period.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PuncturingPattern {
    p_u: PunctureRow,
    p_z: PunctureRow,
}

impl PuncturingPattern {
    pub fn new(p_u: PunctureRow, p_z: PunctureRow) -> Result<Self> {
        let m = common_period(&[p_u.period(), p_z.period()])?;
        Ok(Self {
            p_u: p_u.extended(m),
            p_z: p_z.extended(m),
        })
    }

    pub fn parse(p_u: &str, p_z: &str) -> Result<Self> {
        Self::new(p_u.parse()?, p_z.parse()?)
    }

    pub fn unpunctured() -> Self {
        Self {
            p_u: PunctureRow::ones(1),
            p_z: PunctureRow::ones(1),
        }
    }

    pub fn period(&self) -> usize {
        self.p_u.period()
    }

    pub fn systematic(&self) -> &PunctureRow {
        &self.p_u
    }

    pub fn parity(&self) -> &PunctureRow {
        &self.p_z
    }
}

/// Rows for the systematic output, the first parity output and the second
/// parity output of a PCCC. The second encoder's systematic output is never
/// sent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PcccPunctureSet {
    pub sys: PunctureRow,
    pub par1: PunctureRow,
    pub par2: PunctureRow,
}

impl PcccPunctureSet {
    pub fn new(sys: PunctureRow, par1: PunctureRow, par2: PunctureRow) -> Self {
        Self { sys, par1, par2 }
    }

    pub fn parse(sys: &str, par1: &str, par2: &str) -> Result<Self> {
        Ok(Self::new(sys.parse()?, par1.parse()?, par2.parse()?))
    }

    pub fn unpunctured() -> Self {
        Self::new(
            PunctureRow::ones(1),
            PunctureRow::ones(1),
            PunctureRow::ones(1),
        )
    }

    pub fn period(&self) -> Result<usize> {
        common_period(&[self.sys.period(), self.par1.period(), self.par2.period()])
    }

    /// Pattern seen by the first constituent encoder.
    pub fn first(&self) -> Result<PuncturingPattern> {
        PuncturingPattern::new(self.sys.clone(), self.par1.clone())
    }

    /// Pattern seen by the second constituent encoder (systematic row empty).
    pub fn second(&self) -> Result<PuncturingPattern> {
        PuncturingPattern::new(PunctureRow::zeros(1), self.par2.clone())
    }
}

impl fmt::Display for PcccPunctureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sys [{}] par1 [{}] par2 [{}]",
            self.sys, self.par1, self.par2
        )
    }
}

/// Core weights `z_core^1 … z_core^M`: the parity weight of the `L - 1`
/// zero-input steps of a weight-2 path when the first of them falls in
/// column `m`, i.e. `z_core^m = Σ_{i=1}^{L-1} y_i p_{z,(i+m-1)}`.
pub fn punctured_core_weights(code: &RscCode, p_z: &PunctureRow) -> Vec<u32> {
    let ys = code.weight2_parity_response();
    let l = code.period();
    (1..=p_z.period())
        .map(|m| {
            (1..l)
                .filter(|&i| ys[i - 1] == 1 && p_z.get(i + m - 1))
                .count() as u32
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PseudoVariant {
    /// Systematic row is the complement of the parity row; the second parity
    /// output is sent in full.
    A,
    /// Both parity outputs use the pseudo-random row; the systematic row is
    /// the complement with all but one zero turned into ones.
    B,
}

impl FromStr for PseudoVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Self::A),
            "B" | "b" => Ok(Self::B),
            other => Err(Error::Parse(format!(
                "unknown pseudo-random variant \"{other}\""
            ))),
        }
    }
}

impl fmt::Display for PseudoVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::A => "A",
            Self::B => "B",
        })
    }
}

/// Pseudo-random parity row of period `L`: column `m` is `y_m`, the parity
/// bit the encoder emits `m` zero-input steps after leaving the zero state.
pub fn pseudo_random_parity_row(code: &RscCode) -> Result<PunctureRow> {
    if code.memory() < 2 || !code.has_primitive_feedback() {
        return Err(Error::Domain(format!(
            "pseudo-random puncturing needs a primitive feedback polynomial of degree >= 2, got {}",
            code.feedback()
        )));
    }
    let row = PunctureRow::from_bits(&code.weight2_parity_response())?;
    if row.weight() != 1 << (code.memory() - 1) {
        return Err(Error::Domain(format!(
            "parity response of {code} is not an m-sequence (feedforward equals feedback?)"
        )));
    }
    Ok(row)
}

pub fn pseudo_random_pattern(code: &RscCode, variant: PseudoVariant) -> Result<PcccPunctureSet> {
    let p_z = pseudo_random_parity_row(code)?;
    match variant {
        PseudoVariant::A => {
            let period = p_z.period();
            Ok(PcccPunctureSet::new(
                p_z.complement(),
                p_z,
                PunctureRow::ones(period),
            ))
        }
        PseudoVariant::B => {
            let keep = p_z
                .bits()
                .iter()
                .rposition(|&b| b)
                .expect("m-sequence row has ones")
                + 1;
            pseudo_random_pattern_b(code, keep)
        }
    }
}

/// Variant B keeping the systematic zero at column `keep_zero` (1-based).
/// [`pseudo_random_pattern`] keeps the last one.
pub fn pseudo_random_pattern_b(code: &RscCode, keep_zero: usize) -> Result<PcccPunctureSet> {
    let p_z = pseudo_random_parity_row(code)?;
    if keep_zero == 0 || keep_zero > p_z.period() || !p_z.get(keep_zero) {
        let zeros: Vec<String> = (1..=p_z.period())
            .filter(|&m| p_z.get(m))
            .map(|m| m.to_string())
            .collect();
        return Err(Error::Domain(format!(
            "column {keep_zero} holds no systematic zero; choose one of {}",
            zeros.join(", ")
        )));
    }
    let sys = PunctureRow::new((1..=p_z.period()).map(|m| m != keep_zero).collect())?;
    Ok(PcccPunctureSet::new(sys, p_z.clone(), p_z))
}

/// Information bits per transmitted bit over the common period.
pub fn code_rate(set: &PcccPunctureSet) -> Result<Rate> {
    let period = set.period()?;
    let kept: usize = [&set.sys, &set.par1, &set.par2]
        .iter()
        .map(|row| row.weight() * (period / row.period()))
        .sum();
    if kept == 0 {
        return Err(Error::DegenerateRate);
    }
    Ok(Rate::new(period as u64, kept as u64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    /// Some weight-2 codeword has weight zero after puncturing.
    Catastrophic,
    /// Some circular shift of the parity row removes the whole core weight.
    SemiCatastrophic,
    Normal,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Catastrophic => "Catastrophic",
            Self::SemiCatastrophic => "SemiCatastrophic",
            Self::Normal => "Normal",
        })
    }
}

/// Default probe horizon for [`classify`]: `4L + 1`.
pub fn default_probe_length(code: &RscCode) -> usize {
    4 * code.period() + 1
}

/// Classifies a constituent pattern by inspecting every weight-2 path that
/// fits in `n_probe` steps and the punctured core weights.
pub fn classify(code: &RscCode, pattern: &PuncturingPattern, n_probe: usize) -> Classification {
    let paths = W2Paths::new(code, pattern);
    let l = code.period();
    let k_max = n_probe.saturating_sub(1) / l;
    let catastrophic = (1..=k_max.max(1)).any(|k| {
        (1..=pattern.period()).any(|m| {
            let (u, z) = paths.weights(k, m);
            u + z == 0
        })
    });
    if catastrophic {
        Classification::Catastrophic
    } else if paths.core_weights().contains(&0) {
        Classification::SemiCatastrophic
    } else {
        Classification::Normal
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{primitive_polynomials, BinaryPolynomial};

    fn code(fb: &str, ff: &str) -> RscCode {
        RscCode::from_octal(fb, ff).unwrap()
    }

    fn row(s: &str) -> PunctureRow {
        s.parse().unwrap()
    }

    fn pseudo_codes() -> Vec<RscCode> {
        (2..=6)
            .flat_map(|nu| {
                primitive_polynomials(nu).into_iter().map(move |fb| {
                    let all_ones = (1 << (nu + 1)) - 1;
                    let ff = BinaryPolynomial::from_coeffs(if fb.coeffs() == all_ones {
                        (1 << nu) | 1
                    } else {
                        all_ones
                    })
                    .unwrap();
                    RscCode::new(fb, ff).unwrap()
                })
            })
            .collect()
    }

    #[test]
    fn columns() {
        assert_eq!(column_index(0, 7), 1);
        assert_eq!(column_index(7, 7), 1);
        assert_eq!(column_index(8, 4), 1);
        assert_eq!(column_index(6, 7), 7);
        assert_eq!(column_index(5, 1), 1);
    }

    #[test]
    fn rows() {
        let r = row("0111010");
        assert_eq!(r.period(), 7);
        assert_eq!(r.weight(), 4);
        assert!(!r.get(1) && r.get(2) && !r.get(8) && r.get(9));
        assert_eq!(r.complement().to_string(), "1000101");
        assert_eq!(r.rotated(1).to_string(), "1110100");
        assert!("012".parse::<PunctureRow>().is_err());
        assert!("".parse::<PunctureRow>().is_err());
    }

    #[test]
    fn pattern_extends_to_common_period() {
        let p = PuncturingPattern::parse("10", "011").unwrap();
        assert_eq!(p.period(), 6);
        assert_eq!(p.systematic().to_string(), "101010");
        assert_eq!(p.parity().to_string(), "011011");
    }

    #[test]
    fn core_weights() {
        let c = code("15", "17");
        assert_eq!(
            punctured_core_weights(&c, &PunctureRow::ones(7)),
            vec![4; 7]
        );
        assert_eq!(
            punctured_core_weights(&c, &PunctureRow::ones(3)),
            vec![4; 3]
        );
        assert_eq!(
            punctured_core_weights(&c, &PunctureRow::zeros(5)),
            vec![0; 5]
        );
        let mut w = punctured_core_weights(&c, &row("0111010"));
        assert_eq!(w[0], 4);
        w.sort();
        assert_eq!(w, vec![2, 2, 2, 2, 2, 2, 4]);
    }

    #[test]
    fn table_one_pseudo_patterns() {
        let c = code("15", "17");
        let a = pseudo_random_pattern(&c, PseudoVariant::A).unwrap();
        assert_eq!(a.to_string(), "sys [1000101] par1 [0111010] par2 [1111111]");
        let b = pseudo_random_pattern(&c, PseudoVariant::B).unwrap();
        assert_eq!(b.to_string(), "sys [1111101] par1 [0111010] par2 [0111010]");
        assert_eq!(code_rate(&a).unwrap(), Rate::new(1, 2));
        assert_eq!(code_rate(&b).unwrap(), Rate::new(1, 2));
    }

    #[test]
    fn pseudo_requires_primitive_feedback() {
        assert!(matches!(
            pseudo_random_pattern(&code("17", "15"), PseudoVariant::A),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            pseudo_random_pattern(&code("15", "15"), PseudoVariant::A),
            Err(Error::Domain(_))
        ));
        assert!(pseudo_random_pattern_b(&code("15", "17"), 1).is_err());
        let b = pseudo_random_pattern_b(&code("15", "17"), 2).unwrap();
        assert_eq!(b.sys.to_string(), "1011111");
    }

    #[test]
    fn pseudo_family_properties() {
        for c in pseudo_codes() {
            let nu = c.memory();
            let l = c.period();
            let p_z = pseudo_random_parity_row(&c).unwrap();
            assert_eq!(p_z.period(), l);
            assert_eq!(p_z.weight(), 1 << (nu - 1));
            let w = punctured_core_weights(&c, &p_z);
            assert_eq!(
                w.iter().sum::<u32>(),
                (1 << (nu - 1)) + (l as u32 - 1) * (1 << (nu - 2))
            );
            assert_eq!(w.iter().filter(|&&x| x == 1 << (nu - 1)).count(), 1);
            assert_eq!(w.iter().filter(|&&x| x == 1 << (nu - 2)).count(), l - 1);
            for v in [PseudoVariant::A, PseudoVariant::B] {
                let set = pseudo_random_pattern(&c, v).unwrap();
                assert_eq!(code_rate(&set).unwrap(), Rate::new(1, 2), "{c:?} {v}");
                let n = default_probe_length(&c);
                assert_eq!(
                    classify(&c, &set.first().unwrap(), n),
                    Classification::Normal
                );
                assert_eq!(
                    classify(&c, &set.second().unwrap(), n),
                    Classification::Normal
                );
            }
        }
    }

    #[test]
    fn variant_a_rate_for_memory_two() {
        let set = pseudo_random_pattern(&code("7", "5"), PseudoVariant::A).unwrap();
        assert_eq!(code_rate(&set).unwrap(), Rate::new(1, 2));
    }

    #[test]
    fn rates() {
        assert_eq!(
            code_rate(&PcccPunctureSet::unpunctured()).unwrap(),
            Rate::new(1, 3)
        );
        let litt_b = PcccPunctureSet::parse("11", "10", "01").unwrap();
        assert_eq!(code_rate(&litt_b).unwrap(), Rate::new(1, 2));
        let litt_a = PcccPunctureSet::parse("0010", "1101", "1111").unwrap();
        assert_eq!(code_rate(&litt_a).unwrap(), Rate::new(1, 2));
        let mixed = PcccPunctureSet::parse("1", "10", "100").unwrap();
        assert_eq!(code_rate(&mixed).unwrap(), Rate::new(6, 11));
        let none = PcccPunctureSet::parse("0", "00", "000").unwrap();
        assert_eq!(code_rate(&none), Err(Error::DegenerateRate));
    }

    #[test]
    fn classification() {
        let c = code("15", "17");
        let n = default_probe_length(&c);
        let dead = PuncturingPattern::parse("0", "0").unwrap();
        assert_eq!(classify(&c, &dead, n), Classification::Catastrophic);
        assert_eq!(
            classify(&c, &PuncturingPattern::unpunctured(), n),
            Classification::Normal
        );

        // Weight-1 parity rows of period 7 keep one parity bit per period; a
        // shift that misses every y_i = 1 exists whenever the kept column
        // lines up with a zero of y.
        let semi: Vec<PunctureRow> = (0..7)
            .map(|j| PunctureRow::new((0..7).map(|i| i == j).collect()).unwrap())
            .filter(|p_z| {
                classify(
                    &c,
                    &PuncturingPattern::new(PunctureRow::ones(1), p_z.clone()).unwrap(),
                    n,
                ) == Classification::SemiCatastrophic
            })
            .collect();
        assert!(!semi.is_empty());
        for p_z in &semi {
            assert!(punctured_core_weights(&c, p_z).contains(&0));
        }
    }
}
