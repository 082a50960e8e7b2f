//! Conditional weight enumerating functions (CWEFs) of punctured RSC codes
//! for input weight two, in closed form.
//!
//! A weight-2 input whose encoder path remerges within the block has its two
//! ones exactly `kL` steps apart. The path of span `kL + 1` that leaves the
//! zero state in column `m` has systematic weight
//! `u(k,m) = p_{u,m} + p_{u,m+kL}` and parity weight
//!
//! ```text
//! z(k,m) = y_0 p_{z,m} + Σ_{j=0}^{k-1} z_core^{m+jL+1}
//!        + y_L Σ_{j=1}^{k-1} p_{z,m+jL} + y_r p_{z,m+kL}
//! ```
//!
//! where `y_0` and `y_r` are the parities of the diverging and remerging
//! transitions and `y_L` the parity of the zero-input step that closes each
//! period. For a feedforward polynomial of full degree `y_0 = y_r = 1` and
//! `y_L = 0`, which leaves the familiar three-term form. There are `N - kL`
//! such paths, spread over the `M` columns by [`group_multiplicity`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::encoder::RscCode;
use crate::puncture::{punctured_core_weights, PuncturingPattern};
use crate::{Error, Result};

/// Sparse enumerator `(u, z) -> count` for a fixed input weight and block
/// length. Keys are kept sorted; absent keys are zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cwef {
    w: u32,
    n: usize,
    terms: BTreeMap<(u32, u32), u128>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinWeights {
    /// Smallest `u + z`.
    pub d_min: u32,
    /// Smallest `z`.
    pub z_min: u32,
}

impl Cwef {
    pub fn new(w: u32, n: usize) -> Self {
        Self {
            w,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, u: u32, z: u32, count: u128) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        let slot = self.terms.entry((u, z)).or_insert(0);
        *slot = slot
            .checked_add(count)
            .ok_or(Error::Overflow("CWEF count"))?;
        Ok(())
    }

    pub fn get(&self, u: u32, z: u32) -> u128 {
        self.terms.get(&(u, z)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), u128)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total(&self) -> u128 {
        self.terms.values().sum()
    }

    /// Drops every term with `u + z > d_max`; returns whether any was dropped.
    pub fn truncate(&mut self, d_max: u32) -> bool {
        let before = self.terms.len();
        self.terms.retain(|&(u, z), _| u + z <= d_max);
        self.terms.len() != before
    }

    pub fn min_weights(&self) -> Result<MinWeights> {
        min_weights(self)
    }

    /// Line-oriented text form: `"w N"` then one `"u z count"` line per term.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.w, self.n);
        for (&(u, z), c) in &self.terms {
            let _ = writeln!(out, "{u} {z} {c}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing CWEF header".into()))?;
        let bad = |line: &str| Error::Parse(format!("malformed CWEF line \"{line}\""));
        let mut fields = header.split_whitespace();
        let (w, n) = match (fields.next(), fields.next(), fields.next()) {
            (Some(w), Some(n), None) => (
                w.parse().map_err(|_| bad(header))?,
                n.parse().map_err(|_| bad(header))?,
            ),
            _ => return Err(bad(header)),
        };
        let mut cwef = Cwef::new(w, n);
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad(line));
            }
            let u = f[0].parse().map_err(|_| bad(line))?;
            let z = f[1].parse().map_err(|_| bad(line))?;
            let c: u128 = f[2].parse().map_err(|_| bad(line))?;
            if c == 0 {
                return Err(bad(line));
            }
            cwef.add(u, z, c)?;
        }
        Ok(cwef)
    }
}

pub fn min_weights(c: &Cwef) -> Result<MinWeights> {
    let d_min = c
        .terms
        .keys()
        .map(|&(u, z)| u + z)
        .min()
        .ok_or(Error::EmptyEnumerator)?;
    let z_min = c
        .terms
        .keys()
        .map(|&(_, z)| z)
        .min()
        .ok_or(Error::EmptyEnumerator)?;
    Ok(MinWeights { d_min, z_min })
}

/// Number of weight-2 paths of span `kL + 1` that start in column `m` of a
/// period-`M` pattern within a block of `n` steps.
pub fn group_multiplicity(n: usize, k: usize, l: usize, period: usize, m: usize) -> u64 {
    debug_assert!((1..=period).contains(&m));
    let Some(starts) = n.checked_sub(k * l).filter(|&s| s > 0) else {
        return 0;
    };
    let base = (starts / period) as u64;
    if starts % period < m {
        base
    } else {
        base + 1
    }
}

/// Unpunctured weight-2 CWEF: `N - kL` paths of parity weight
/// `k·z_core + 2` for `k = 1 … ⌊(N-1)/L⌋`.
pub fn cwef_w2_unpunctured(code: &RscCode, n: usize) -> Cwef {
    cwef_w2_punctured(code, &PuncturingPattern::unpunctured(), n)
}

/// Precomputed ingredients for weight-2 path weights under one pattern.
#[derive(Clone, Debug)]
pub struct W2Paths {
    period: usize,
    code_period: usize,
    core: Vec<u32>,
    p_u: Vec<bool>,
    p_z: Vec<bool>,
    diverge: bool,
    remerge: bool,
    period_end: bool,
}

impl W2Paths {
    pub fn new(code: &RscCode, pattern: &PuncturingPattern) -> Self {
        let ys = code.weight2_parity_response();
        Self {
            period: pattern.period(),
            code_period: code.period(),
            core: punctured_core_weights(code, pattern.parity()),
            p_u: pattern.systematic().bits().to_vec(),
            p_z: pattern.parity().bits().to_vec(),
            diverge: code.diverge_parity() == 1,
            remerge: code.remerge_parity() == 1,
            period_end: ys[code.period() - 1] == 1,
        }
    }

    /// `z_core^1 … z_core^M`.
    pub fn core_weights(&self) -> &[u32] {
        &self.core
    }

    #[inline]
    fn pu(&self, m: usize) -> u32 {
        u32::from(self.p_u[(m - 1) % self.period])
    }

    #[inline]
    fn pz(&self, m: usize) -> u32 {
        u32::from(self.p_z[(m - 1) % self.period])
    }

    #[inline]
    fn core(&self, m: usize) -> u32 {
        self.core[(m - 1) % self.period]
    }

    /// `(u(k,m), z(k,m))` for `k >= 1` and `1 <= m <= M`.
    pub fn weights(&self, k: usize, m: usize) -> (u32, u32) {
        let mut acc = self.start(m);
        for j in 0..k {
            acc = self.extend(acc, m, j);
        }
        self.finish(acc, m, k)
    }

    // Running sums over whole periods, so a sweep over k costs O(k_max).
    fn start(&self, m: usize) -> (u32, u32) {
        (self.pu(m), u32::from(self.diverge) * self.pz(m))
    }

    fn extend(&self, (u, z): (u32, u32), m: usize, j: usize) -> (u32, u32) {
        let l = self.code_period;
        let mut z = z + self.core(m + j * l + 1);
        if j > 0 && self.period_end {
            z += self.pz(m + j * l);
        }
        (u, z)
    }

    fn finish(&self, (u, z): (u32, u32), m: usize, k: usize) -> (u32, u32) {
        let end = m + k * self.code_period;
        (u + self.pu(end), z + u32::from(self.remerge) * self.pz(end))
    }
}

/// Weights of the weight-2 path of span `kL + 1` starting in column `m`.
pub fn path_weights(code: &RscCode, pattern: &PuncturingPattern, k: usize, m: usize) -> (u32, u32) {
    W2Paths::new(code, pattern).weights(k, m)
}

/// Punctured weight-2 CWEF for block length `n`.
pub fn cwef_w2_punctured(code: &RscCode, pattern: &PuncturingPattern, n: usize) -> Cwef {
    let mut cwef = Cwef::new(2, n);
    let l = code.period();
    if n <= l {
        log::warn!("block length {n} <= period {l}: no weight-2 path fits");
        return cwef;
    }
    let paths = W2Paths::new(code, pattern);
    let period = pattern.period();
    let k_max = (n - 1) / l;
    for m in 1..=period {
        let mut acc = paths.start(m);
        for k in 1..=k_max {
            acc = paths.extend(acc, m, k - 1);
            let count = group_multiplicity(n, k, l, period, m);
            if count == 0 {
                continue;
            }
            let (u, z) = paths.finish(acc, m, k);
            // totals are bounded by N^2, far from u128 limits
            cwef.add(u, z, u128::from(count))
                .expect("weight-2 counts fit in u128");
        }
    }
    cwef
}

/// `d_min` and `z_min` of [`cwef_w2_punctured`] without building the
/// enumerator. `None` when no weight-2 path fits.
pub fn min_weights_w2(code: &RscCode, pattern: &PuncturingPattern, n: usize) -> Option<MinWeights> {
    let l = code.period();
    if n <= l {
        return None;
    }
    let paths = W2Paths::new(code, pattern);
    let period = pattern.period();
    let k_max = (n - 1) / l;
    let mut best: Option<MinWeights> = None;
    for m in 1..=period {
        let mut acc = paths.start(m);
        for k in 1..=k_max {
            acc = paths.extend(acc, m, k - 1);
            if group_multiplicity(n, k, l, period, m) == 0 {
                continue;
            }
            let (u, z) = paths.finish(acc, m, k);
            best = Some(match best {
                None => MinWeights {
                    d_min: u + z,
                    z_min: z,
                },
                Some(b) => MinWeights {
                    d_min: b.d_min.min(u + z),
                    z_min: b.z_min.min(z),
                },
            });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::primitive_polynomials;
    use crate::puncture::{
        pseudo_random_parity_row, pseudo_random_pattern, PseudoVariant, PunctureRow,
    };
    use crate::BinaryPolynomial;
    use proptest::prelude::*;

    fn code(fb: &str, ff: &str) -> RscCode {
        RscCode::from_octal(fb, ff).unwrap()
    }

    fn pat(u: &str, z: &str) -> PuncturingPattern {
        PuncturingPattern::parse(u, z).unwrap()
    }

    // Independent oracle: encode every weight-2 input and count weights.
    fn brute_w2(code: &RscCode, pattern: &PuncturingPattern, n: usize) -> Cwef {
        let mut c = Cwef::new(2, n);
        for a in 0..n {
            for b in a + 1..n {
                let mut input = vec![0u8; n];
                input[a] = 1;
                input[b] = 1;
                let (sys, par, st) = code.encode(&input);
                if st.0 != 0 {
                    continue;
                }
                let u = (0..n)
                    .filter(|&i| sys[i] == 1 && pattern.systematic().at_step(i))
                    .count();
                let z = (0..n)
                    .filter(|&i| par[i] == 1 && pattern.parity().at_step(i))
                    .count();
                c.add(u as u32, z as u32, 1).unwrap();
            }
        }
        c
    }

    #[test]
    fn unpunctured_examples() {
        let c = code("15", "17");
        let e = cwef_w2_unpunctured(&c, 8);
        assert_eq!(e.terms().collect::<Vec<_>>(), vec![((2, 6), 1)]);

        let e = cwef_w2_unpunctured(&c, 20);
        assert_eq!(
            e.terms().collect::<Vec<_>>(),
            vec![((2, 6), 13), ((2, 10), 6)]
        );
        assert_eq!(e, brute_w2(&c, &PuncturingPattern::unpunctured(), 20));
        assert_eq!(
            brute_w2(&c, &PuncturingPattern::unpunctured(), 20).total(),
            19
        );

        let e = cwef_w2_unpunctured(&code("23", "35"), 16);
        assert_eq!(e.len(), 1);
        assert_eq!(e.total(), 1);

        assert!(cwef_w2_unpunctured(&c, 7).is_empty());
    }

    #[test]
    fn multiplicities() {
        for m in 1..=6 {
            assert_eq!(group_multiplicity(20, 1, 7, 7, m), 2);
        }
        assert_eq!(group_multiplicity(20, 1, 7, 7, 7), 1);
        assert_eq!(group_multiplicity(1000, 3, 7, 4, 2), 245);
        assert_eq!(group_multiplicity(21, 3, 7, 4, 1), 0);
        assert_eq!(group_multiplicity(5, 1, 7, 4, 1), 0);
    }

    #[test]
    fn multiplicity_matches_position_count() {
        for n in 1..60 {
            for (l, period) in [(7, 4), (7, 7), (3, 5), (15, 2)] {
                for k in 1..5 {
                    for m in 1..=period {
                        let direct = (0..n)
                            .filter(|&i| i + k * l < n && i % period == m - 1)
                            .count() as u64;
                        assert_eq!(group_multiplicity(n, k, l, period, m), direct);
                    }
                }
            }
        }
    }

    #[test]
    fn path_weight_examples() {
        let c = code("15", "17");
        for k in 1..5 {
            for m in 1..=3 {
                assert_eq!(
                    path_weights(&c, &PuncturingPattern::unpunctured(), k, m),
                    (2, 4 * k as u32 + 2)
                );
            }
        }
        let a = pseudo_random_pattern(&c, PseudoVariant::A)
            .unwrap()
            .first()
            .unwrap();
        // m = 1: p_u = 1, p_z = 0, z_core^2 = 2
        assert_eq!(path_weights(&c, &a, 1, 1), (2, 2));
        // m = 7: the column whose successor carries the full core weight
        assert_eq!(path_weights(&c, &a, 1, 7), (2, 4));
    }

    #[test]
    fn path_weights_match_explicit_encoding() {
        let c = code("15", "17");
        let litt_a = pat("0010", "1101");
        let l = c.period();
        for k in 1..=3 {
            for m in 1..=4 {
                let start = m - 1;
                let n = start + k * l + 1;
                let mut input = vec![0u8; n];
                input[start] = 1;
                input[start + k * l] = 1;
                let (sys, par, _) = c.encode(&input);
                let u = (0..n)
                    .filter(|&i| sys[i] == 1 && litt_a.systematic().at_step(i))
                    .count() as u32;
                let z = (0..n)
                    .filter(|&i| par[i] == 1 && litt_a.parity().at_step(i))
                    .count() as u32;
                assert_eq!(path_weights(&c, &litt_a, k, m), (u, z), "k={k} m={m}");
            }
        }
    }

    #[test]
    fn equal_period_reduction() {
        // M = L: u(k,m) = 2 p_{u,m}, z(k,m) = k z_core^{m+1} + 2 p_{z,m}
        let c = code("15", "17");
        let set = pseudo_random_pattern(&c, PseudoVariant::B).unwrap();
        let p = set.first().unwrap();
        let paths = W2Paths::new(&c, &p);
        for k in 1..6 {
            for m in 1..=7 {
                let pu = p.systematic().get(m) as u32;
                let pz = p.parity().get(m) as u32;
                let core = paths.core_weights()[m % 7];
                assert_eq!(paths.weights(k, m), (2 * pu, k as u32 * core + 2 * pz));
            }
        }
    }

    #[test]
    fn pseudo_random_parity_weights_closed_form() {
        // z(k,m) = k 2^{ν-1} in the column preceding the full-weight core
        // shift (m = L), k 2^{ν-2} + 2 p_{z,m} elsewhere.
        for nu in 2..=6u32 {
            for fb in primitive_polynomials(nu) {
                let all_ones = (1 << (nu + 1)) - 1;
                let ff = BinaryPolynomial::from_coeffs(if fb.coeffs() == all_ones {
                    (1 << nu) | 1
                } else {
                    all_ones
                })
                .unwrap();
                let c = RscCode::new(fb, ff).unwrap();
                let l = c.period();
                let p_z = pseudo_random_parity_row(&c).unwrap();
                let p = PuncturingPattern::new(PunctureRow::ones(1), p_z.clone()).unwrap();
                for k in 1..=5 {
                    for m in 1..=l {
                        let expect = if m == l {
                            k as u32 * (1 << (nu - 1))
                        } else {
                            k as u32 * (1 << (nu - 2)) + 2 * p_z.get(m) as u32
                        };
                        assert_eq!(path_weights(&c, &p, k, m).1, expect, "{c:?} k={k} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn punctured_matches_brute_force() {
        let c = code("15", "17");
        let a = pseudo_random_pattern(&c, PseudoVariant::A).unwrap();
        for p in [
            a.first().unwrap(),
            a.second().unwrap(),
            pat("11", "10"),
            pat("0010", "1101"),
        ] {
            for n in [8, 14, 50] {
                assert_eq!(
                    cwef_w2_punctured(&c, &p, n),
                    brute_w2(&c, &p, n),
                    "{p:?} N={n}"
                );
            }
        }
        // feedforward of lower degree: y_L = 1 and no remerge parity
        let c = code("15", "3");
        for p in [PuncturingPattern::unpunctured(), pat("0010", "1101")] {
            assert_eq!(cwef_w2_punctured(&c, &p, 40), brute_w2(&c, &p, 40));
        }
    }

    #[test]
    fn unpunctured_equals_all_ones() {
        let c = code("23", "35");
        assert_eq!(
            cwef_w2_unpunctured(&c, 113),
            cwef_w2_punctured(&c, &pat("111", "11"), 113)
        );
    }

    #[test]
    fn minimum_weights() {
        let c = code("15", "17");
        let m = cwef_w2_unpunctured(&c, 100).min_weights().unwrap();
        assert_eq!(m, MinWeights { d_min: 8, z_min: 6 });

        let a = pseudo_random_pattern(&c, PseudoVariant::A).unwrap();
        let c1 = cwef_w2_punctured(&c, &a.first().unwrap(), 100);
        assert_eq!(c1.min_weights().unwrap().d_min, 4);
        let p_z = PuncturingPattern::new(PunctureRow::ones(1), a.par1.clone()).unwrap();
        assert_eq!(
            cwef_w2_punctured(&c, &p_z, 100)
                .min_weights()
                .unwrap()
                .z_min,
            2
        );

        assert_eq!(Cwef::new(2, 5).min_weights(), Err(Error::EmptyEnumerator));
    }

    #[test]
    fn text_format() {
        let c = cwef_w2_unpunctured(&code("15", "17"), 20);
        let text = c.to_text();
        assert_eq!(text, "2 20\n2 6 13\n2 10 6\n");
        assert_eq!(Cwef::from_text(&text).unwrap(), c);
        assert!(Cwef::from_text("2\n").is_err());
        assert!(Cwef::from_text("2 20\n1 2\n").is_err());
        assert!(Cwef::from_text("2 20\n1 2 0\n").is_err());
    }

    proptest! {
        #[test]
        fn count_conservation(
            n in 8usize..400,
            sys in "[01]{1,6}",
            par in "[01]{1,6}",
            ff in prop::sample::select(vec!["17", "11", "13", "3"]),
        ) {
            let c = code("15", ff);
            let p = pat(&sys, &par);
            let cwef = cwef_w2_punctured(&c, &p, n);
            let l = c.period();
            let expect: usize = (1..=(n - 1) / l).map(|k| n - k * l).sum();
            prop_assert_eq!(cwef.total(), expect as u128);
        }

        #[test]
        fn fast_minimum_weights_agree(
            n in 1usize..300,
            sys in "[01]{1,6}",
            par in "[01]{1,6}",
            fb in prop::sample::select(vec!["7", "15", "17", "23"]),
        ) {
            let c = code(fb, if fb == "23" { "35" } else if fb == "7" { "5" } else { "13" });
            let p = pat(&sys, &par);
            prop_assert_eq!(min_weights_w2(&c, &p, n), cwef_w2_punctured(&c, &p, n).min_weights().ok());
        }

        #[test]
        fn multiplicities_partition(n in 1usize..5000, k in 1usize..20, l in 1usize..40, period in 1usize..30) {
            let sum: u64 = (1..=period).map(|m| group_multiplicity(n, k, l, period, m)).sum();
            prop_assert_eq!(sum, n.saturating_sub(k * l) as u64);
        }
    }
}
