//! Gamma function and compensated summation.
//!
//! The gamma function uses the Lanczos approximation with `g = 607/128` and
//! fifteen coefficients (Godfrey's set). Evaluated in double precision the
//! relative error on `(0, 172)` stays near `1e-15`, inside `1e-13`.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_091_82,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (z - 1)
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// Γ(x) for real `x`. Poles return `NaN`; overflow returns `+inf`.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.5 {
        // reflection
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    if x == x.floor() && x <= 23.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return f;
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power so that t^(z+1/2) does not overflow before e^-t is applied
    let half = t.powf(0.5 * (z + 0.5));
    SQRT_2PI * lanczos_sum(z) * half * (half * (-t).exp())
}

/// ln|Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x);
    }
    if x < 20.0 {
        return gamma(x).abs().ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// 1/Γ(x), zero at the poles.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

/// Kahan–Babuška (Neumaier) running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // reference values from a 50-digit evaluation
    const GAMMA_TABLE: [(f64, f64); 10] = [
        (0.1, 9.513_507_698_668_731_29),
        (0.5, 1.772_453_850_905_516_03),
        (1.25, 0.906_402_477_055_477_078),
        (1.5, 0.886_226_925_452_758_014),
        (2.5, 1.329_340_388_179_137_02),
        (3.7, 4.170_651_783_796_604_03),
        (10.3, 716_430.689_062_376_407),
        (33.3, 7.487_577_596_522_632_33e35),
        (100.5, 9.320_963_104_082_716_61e156),
        (170.5, 5.562_092_414_559_999_61e305),
    ];

    #[test]
    fn gamma_matches_reference_values() {
        for &(x, g) in &GAMMA_TABLE {
            assert!(rel(gamma(x), g) < 1e-13, "x={x}: {} vs {g}", gamma(x));
        }
    }

    #[test]
    fn gamma_integers_and_reflection() {
        assert_eq!(gamma(1.0), 1.0);
        assert_eq!(gamma(5.0), 24.0);
        assert!(rel(gamma(-0.5), -2.0 * 1.772_453_850_905_516) < 1e-14);
        assert!(gamma(-2.0).is_nan());
        assert_eq!(recip_gamma(-3.0), 0.0);
    }

    #[test]
    fn ln_gamma_consistent() {
        for &(x, g) in &GAMMA_TABLE {
            assert!((ln_gamma(x) - g.ln()).abs() < 1e-12 * g.ln().abs().max(1.0));
        }
        // ln Γ(1000) from Stirling with enough terms
        let x: f64 = 1000.0;
        let stirling = (x - 0.5) * x.ln() - x + LN_SQRT_2PI + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x.powi(3));
        assert!(rel(ln_gamma(x), stirling) < 1e-13);
    }

    #[test]
    fn compensated_sum_recovers_lost_bits() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-30);
    }
}
