#![allow(dead_code)]

use pccc_bound::poly::{primitive_polynomials, BinaryPolynomial};
use pccc_bound::{PcccConfig, PcccPunctureSet, RscCode};

pub fn code_15_17() -> RscCode {
    RscCode::from_octal("15", "17").unwrap()
}

pub fn rows(name: &str) -> PcccPunctureSet {
    let (s, p1, p2) = match name {
        "Pseudo A" => ("1000101", "0111010", "1111111"),
        "Pseudo B" => ("1111101", "0111010", "0111010"),
        "Litt A" => ("0010", "1101", "1111"),
        "Litt B" => ("11", "10", "01"),
        other => panic!("unknown configuration {other}"),
    };
    PcccPunctureSet::parse(s, p1, p2).unwrap()
}

pub fn config(name: &str, n: usize) -> PcccConfig {
    PcccConfig::symmetric(code_15_17(), rows(name), n).unwrap()
}

pub const NAMED: [&str; 4] = ["Pseudo A", "Pseudo B", "Litt A", "Litt B"];

/// Every code with a primitive feedback of degree `nu` and a feedforward
/// of the same degree that differs from it.
pub fn primitive_codes(nu: u32) -> Vec<RscCode> {
    let mut out = Vec::new();
    for fb in primitive_polynomials(nu) {
        for c in ((1u32 << nu) | 1..1 << (nu + 1)).step_by(2) {
            let ff = BinaryPolynomial::from_coeffs(c).unwrap();
            if ff != fb {
                out.push(RscCode::new(fb, ff).unwrap());
            }
        }
    }
    out
}

/// Runs the command-line front end in-process.
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pccc-bound").chain(args.iter().copied());
    let code = pccc_bound::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let n = order as f64;
    (0..order)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=order {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `e^{x²/2} Q(x) = (1/√(2π)) ∫_0^∞ e^{-xs - s²/2} ds` by composite
/// Gauss-Legendre quadrature; the integrand is below `e^{-40}` past the
/// upper limit used.
pub fn scaled_q_quadrature(x: f64, rule: &[(f64, f64)]) -> f64 {
    let upper = -x + (x * x + 80.0).sqrt();
    let panels = 64;
    let h = upper / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for &(t, w) in rule {
            let s = mid + 0.5 * h * t;
            sum += w * (-x * s - 0.5 * s * s).exp();
        }
    }
    sum * 0.5 * h / (2.0 * std::f64::consts::PI).sqrt()
}

/// Double-double value `hi + lo`.
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn from_u128(n: u128) -> Self {
        let hi = n as f64;
        let rest = n as i128 - hi as i128;
        let mid = rest as f64;
        let lo = (rest - mid as i128) as f64;
        Dd::from_f64(hi)
            .add(Dd::from_f64(mid))
            .add(Dd::from_f64(lo))
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = two_sum(s, e + t);
        let (hi, lo) = two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let (hi, lo) = two_sum(p, e + self.hi * o.lo + self.lo * o.hi);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::from_f64(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::from_f64(-q2)));
        let q3 = r.hi / o.hi;
        Dd::from_f64(q1).add(Dd::from_f64(q2)).add(Dd::from_f64(q3))
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// `P(w)` recomputed in double-double from the exact slice.
pub fn union_bound_term_dd(
    slice: &pccc_bound::IowefSlice,
    rate: pccc_bound::Rate,
    ebn0_db: f64,
) -> f64 {
    let rate_dd =
        Dd::from_u128(u128::from(*rate.numer())).div(Dd::from_u128(u128::from(*rate.denom())));
    let gamma = 10f64.powf(ebn0_db / 10.0);
    let scale = Dd::from_u128(u128::from(slice.w())).div(Dd::from_u128(slice.n() as u128));
    let den = Dd::from_u128(slice.denominator());
    let mut sum = Dd::ZERO;
    for (d, num) in slice.numerators() {
        let x2 = Dd::from_f64(2.0 * f64::from(d) * gamma).mul(rate_dd);
        let q = pccc_bound::pccc::q_function(x2.to_f64().sqrt());
        sum = sum.add(scale.mul(Dd::from_u128(num).div(den)).mul(Dd::from_f64(q)));
    }
    sum.to_f64()
}
