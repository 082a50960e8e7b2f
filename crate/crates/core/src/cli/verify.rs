use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cwef::{cwef_w2_punctured, Cwef, W2Paths};
use crate::oracle::{brute_force_cwef, exact_cwef_dp, MAX_BRUTE_FORCE_INPUTS, MAX_DP_DISTANCE};
use crate::pccc::binomial;
use crate::puncture::{
    classify, column_index, default_probe_length, pseudo_random_pattern, Classification,
    PseudoVariant, PunctureRow, PuncturingPattern,
};
use crate::RscCode;

pub const DEFAULT_BLOCK_LENGTHS: [usize; 5] = [40, 64, 113, 150, 200];
const GRID_CODES: [(&str, &str); 7] = [
    ("7", "5"),
    ("5", "7"),
    ("15", "17"),
    ("17", "15"),
    ("13", "15"),
    ("23", "35"),
    ("45", "67"),
];
const RANDOM_PATTERNS: usize = 20;
const GRID_SEED: u64 = 0x7062_6363;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyCase {
    pub code: RscCode,
    pub pattern: PuncturingPattern,
    pub n: usize,
    /// Columns by which the closed form's pattern is rotated; nonzero only
    /// as a negative control.
    pub shift: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// Closed form, DP and brute force compared.
    Full,
    /// Too many inputs for brute force: closed form against DP only.
    Reduced,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseReport {
    pub case: VerifyCase,
    pub passed: bool,
    pub coverage: Coverage,
    pub terms: usize,
    /// Mismatch description; empty on success.
    pub detail: String,
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.case;
        write!(
            f,
            "{} code {} sys [{}] par [{}] N={}",
            if self.passed { "PASS" } else { "FAIL" },
            c.code,
            c.pattern.systematic(),
            c.pattern.parity(),
            c.n
        )?;
        if c.shift != 0 {
            write!(f, " shift={}", c.shift)?;
        }
        match (self.passed, self.coverage) {
            (true, Coverage::Full) => {
                write!(f, ": closed form = DP = brute force ({} terms)", self.terms)
            }
            (true, Coverage::Reduced) => write!(
                f,
                ": closed form = DP ({} terms, reduced coverage)",
                self.terms
            ),
            (false, _) => write!(f, ": {}", self.detail),
        }
    }
}

fn random_row(rng: &mut ChaCha8Rng, period: usize) -> PunctureRow {
    PunctureRow::new((0..period).map(|_| rng.gen_bool(0.5)).collect()).expect("period >= 1")
}

/// Fixed rows, the pseudo-random rows when the code admits them, and
/// seeded random non-catastrophic rows.
pub fn grid_patterns(code: &RscCode, seed: u64) -> Vec<PuncturingPattern> {
    let p = |u: &str, z: &str| PuncturingPattern::parse(u, z).expect("fixed rows parse");
    let mut out = vec![
        PuncturingPattern::unpunctured(),
        p("0010", "1101"),
        p("0", "1111"),
        p("11", "10"),
        p("0", "01"),
    ];
    for variant in [PseudoVariant::A, PseudoVariant::B] {
        if let Ok(set) = pseudo_random_pattern(code, variant) {
            out.push(set.first().expect("pseudo rows share a period"));
            if variant == PseudoVariant::B {
                out.push(set.second().expect("pseudo rows share a period"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probe = default_probe_length(code);
    let mut added = 0;
    while added < RANDOM_PATTERNS {
        let period = rng.gen_range(1..=8);
        let pattern =
            PuncturingPattern::new(random_row(&mut rng, period), random_row(&mut rng, period))
                .expect("short rows");
        if classify(code, &pattern, probe) != Classification::Catastrophic
            && !out.contains(&pattern)
        {
            out.push(pattern);
            added += 1;
        }
    }
    out
}

pub fn default_grid() -> Vec<VerifyCase> {
    let mut grid = Vec::new();
    for (i, (fb, ff)) in GRID_CODES.iter().enumerate() {
        let code = RscCode::from_octal(fb, ff).expect("grid codes are valid");
        for pattern in grid_patterns(&code, GRID_SEED + i as u64) {
            for n in DEFAULT_BLOCK_LENGTHS {
                grid.push(VerifyCase {
                    code: code.clone(),
                    pattern: pattern.clone(),
                    n,
                    shift: 0,
                });
            }
        }
    }
    grid
}

fn shifted(pattern: &PuncturingPattern, shift: usize) -> PuncturingPattern {
    PuncturingPattern::new(
        pattern.systematic().rotated(shift),
        pattern.parity().rotated(shift),
    )
    .expect("rotation keeps the period")
}

fn diff_terms(a: &Cwef, b: &Cwef, names: (&str, &str)) -> String {
    let mut keys: Vec<(u32, u32)> = a.terms().chain(b.terms()).map(|(k, _)| k).collect();
    keys.sort_unstable();
    keys.dedup();
    let lines: Vec<String> = keys
        .into_iter()
        .filter(|&(u, z)| a.get(u, z) != b.get(u, z))
        .take(5)
        .map(|(u, z)| {
            format!(
                "(u={u}, z={z}) {} {} vs {} {}",
                names.0,
                a.get(u, z),
                names.1,
                b.get(u, z)
            )
        })
        .collect();
    lines.join("; ")
}

/// First `(k, m)` at which the closed-form path weights differ from an
/// explicit encoding of the same weight-2 input.
fn pinpoint(case: &VerifyCase) -> Option<String> {
    let closed = W2Paths::new(&case.code, &shifted(&case.pattern, case.shift));
    let l = case.code.period();
    let period = case.pattern.period();
    for k in 1..=(case.n.saturating_sub(1)) / l {
        for start in 0..(case.n - k * l).min(period) {
            let mut input = vec![0u8; case.n];
            input[start] = 1;
            input[start + k * l] = 1;
            let (sys, par, _) = case.code.encode(&input);
            let count = |bits: &[u8], row: &PunctureRow| {
                bits.iter()
                    .enumerate()
                    .filter(|&(i, &b)| b == 1 && row.at_step(i))
                    .count() as u32
            };
            let actual = (
                count(&sys, case.pattern.systematic()),
                count(&par, case.pattern.parity()),
            );
            let m = column_index(start, period);
            let predicted = closed.weights(k, m);
            if predicted != actual {
                return Some(format!(
                    "first mismatch at (k={k}, m={m}): closed form (u, z) = {predicted:?}, encoder {actual:?}"
                ));
            }
        }
    }
    None
}

pub fn run_case(case: &VerifyCase) -> CaseReport {
    let closed_pattern = shifted(&case.pattern, case.shift);
    let mut closed = cwef_w2_punctured(&case.code, &closed_pattern, case.n);
    let d_max = (2 * case.n as u32).min(MAX_DP_DISTANCE);
    closed.truncate(d_max);
    let report = |passed, coverage, detail: String| CaseReport {
        case: case.clone(),
        passed,
        coverage,
        terms: closed.len(),
        detail,
    };

    let dp = match exact_cwef_dp(&case.code, &case.pattern, case.n, 2, d_max) {
        Ok(dp) => dp.cwefs.into_iter().nth(2).expect("w_max = 2"),
        Err(e) => return report(false, Coverage::Reduced, format!("DP failed: {e}")),
    };
    let brute_feasible = binomial(case.n, 2).is_some_and(|c| c <= MAX_BRUTE_FORCE_INPUTS);
    let coverage = if brute_feasible {
        Coverage::Full
    } else {
        Coverage::Reduced
    };

    let mut problems = Vec::new();
    if closed != dp {
        problems.push(format!(
            "closed form vs DP: {}",
            diff_terms(&closed, &dp, ("closed", "dp"))
        ));
    }
    if brute_feasible {
        match brute_force_cwef(&case.code, &case.pattern, case.n, 2) {
            Ok(mut brute) => {
                brute.truncate(d_max);
                if brute != dp {
                    problems.push(format!(
                        "DP vs brute force: {}",
                        diff_terms(&dp, &brute, ("dp", "brute"))
                    ));
                }
            }
            Err(e) => problems.push(format!("brute force failed: {e}")),
        }
    }
    if problems.is_empty() {
        return report(true, coverage, String::new());
    }
    if let Some(at) = pinpoint(case) {
        problems.push(at);
    }
    report(false, coverage, problems.join("; "))
}

/// Runs every case in parallel; reports keep the grid order.
pub fn run_grid(grid: &[VerifyCase]) -> Vec<CaseReport> {
    grid.par_iter().map(run_case).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_large_enough() {
        let grid = default_grid();
        let codes: std::collections::BTreeSet<String> =
            grid.iter().map(|c| c.code.to_string()).collect();
        assert!(codes.len() >= 5);
        for code in &codes {
            let patterns: std::collections::BTreeSet<_> = grid
                .iter()
                .filter(|c| &c.code.to_string() == code)
                .map(|c| c.pattern.clone())
                .collect();
            assert!(patterns.len() >= 25, "{code}");
        }
        assert_eq!(grid, default_grid());
    }

    #[test]
    fn shifted_convention_is_pinpointed() {
        let case = VerifyCase {
            code: RscCode::from_octal("15", "17").unwrap(),
            pattern: PuncturingPattern::parse("0010", "1101").unwrap(),
            n: 40,
            shift: 1,
        };
        let r = run_case(&case);
        assert!(!r.passed);
        assert!(r.detail.contains("(k=1, m="), "{}", r.detail);
        assert!(run_case(&VerifyCase { shift: 0, ..case }).passed);
    }

    #[test]
    fn large_blocks_get_reduced_coverage() {
        let case = VerifyCase {
            code: RscCode::from_octal("7", "5").unwrap(),
            pattern: PuncturingPattern::parse("11", "10").unwrap(),
            n: 5000,
            shift: 0,
        };
        let r = run_case(&case);
        assert!(r.passed, "{r}");
        assert_eq!(r.coverage, Coverage::Reduced);
    }
}
