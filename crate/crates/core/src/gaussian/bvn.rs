//! Bivariate normal distribution function.
//!
//! Drezner–Wesolowsky with the Gauss–Legendre refinements popularised by
//! Genz: 6, 12 or 20 nodes depending on |rho|, and an asymptotic expansion
//! for |rho| >= 0.925. Accurate to about 1e-15 absolute.

use super::normal::norm_cdf;
use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;

// Half-sets of Gauss–Legendre nodes (negative side) and weights on [-1, 1].
const GL6_X: [f64; 3] = [-0.932_469_514_203_152_2, -0.661_209_386_466_264_7, -0.238_619_186_083_197];
const GL6_W: [f64; 3] = [0.171_324_492_379_170_5, 0.360_761_573_048_138_4, 0.467_913_934_572_690_4];

const GL12_X: [f64; 6] = [
    -0.981_560_634_246_719_1,
    -0.904_117_256_370_475,
    -0.769_902_674_194_305,
    -0.587_317_954_286_617_1,
    -0.367_831_498_998_180_2,
    -0.125_233_408_511_469_2,
];
const GL12_W: [f64; 6] = [
    0.047_175_336_386_511_77,
    0.106_939_325_995_318_3,
    0.160_078_328_543_346_4,
    0.203_167_426_723_065_9,
    0.233_492_536_538_354_7,
    0.249_147_045_813_402_9,
];

const GL20_X: [f64; 10] = [
    -0.993_128_599_185_094_9,
    -0.963_971_927_277_913_8,
    -0.912_234_428_251_325_9,
    -0.839_116_971_822_218_8,
    -0.746_331_906_460_150_8,
    -0.636_053_680_726_515,
    -0.510_867_001_950_827_1,
    -0.373_706_088_715_419_6,
    -0.227_785_851_141_645_1,
    -0.076_526_521_133_497_33,
];
const GL20_W: [f64; 10] = [
    0.017_614_007_139_152_12,
    0.040_601_429_800_386_94,
    0.062_672_048_334_109_06,
    0.083_276_741_576_704_75,
    0.101_930_119_817_240_4,
    0.118_194_531_961_518_4,
    0.131_688_638_449_176_6,
    0.142_096_109_318_382_1,
    0.149_172_986_472_603_7,
    0.152_753_387_130_725_9,
];

fn nodes(abs_rho: f64) -> (&'static [f64], &'static [f64]) {
    if abs_rho < 0.3 {
        (&GL6_X, &GL6_W)
    } else if abs_rho < 0.75 {
        (&GL12_X, &GL12_W)
    } else {
        (&GL20_X, &GL20_W)
    }
}

/// `P(X <= a, Y <= b)` for standard normals with correlation `rho`.
///
/// Infinite limits are handled exactly; `rho` is clamped to [-1, 1].
pub fn bvn_cdf(a: f64, b: f64, rho: f64) -> f64 {
    if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
        return 0.0;
    }
    if a == f64::INFINITY {
        return norm_cdf(b);
    }
    if b == f64::INFINITY {
        return norm_cdf(a);
    }
    let rho = rho.clamp(-1.0, 1.0);
    if rho == 1.0 {
        return norm_cdf(a.min(b));
    }
    if rho == -1.0 {
        return (norm_cdf(a) - norm_cdf(-b)).max(0.0);
    }
    upper_orthant(-a, -b, rho).clamp(0.0, 1.0)
}

/// `P(X > h, Y > k)` for finite `h`, `k` and `|r| < 1`.
fn upper_orthant(h: f64, k: f64, r: f64) -> f64 {
    let (x, w) = nodes(r.abs());
    if r.abs() < 0.925 {
        let hk = h * k;
        let hs = 0.5 * (h * h + k * k);
        let asr = r.asin();
        let mut sum = 0.0;
        for (&xi, &wi) in x.iter().zip(w) {
            for node in [xi, -xi] {
                let sn = (0.5 * asr * (node + 1.0)).sin();
                sum += wi * ((sn * hk - hs) / (1.0 - sn * sn)).exp();
            }
        }
        return sum * asr / (2.0 * TWO_PI) + norm_cdf(-h) * norm_cdf(-k);
    }

    let k_eff = if r < 0.0 { -k } else { k };
    let hk = h * k_eff;
    let as_ = (1.0 - r) * (1.0 + r);
    let a = as_.sqrt();
    let bs = (h - k_eff) * (h - k_eff);
    let c = (4.0 - hk) / 8.0;
    let d = (12.0 - hk) / 16.0;

    let mut bvn = a
        * (-0.5 * (bs / as_ + hk)).exp()
        * (1.0 - c * (bs - as_) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as_ * as_ / 5.0);
    if hk > -160.0 {
        let b = bs.sqrt();
        bvn -= (-0.5 * hk).exp()
            * TWO_PI.sqrt()
            * norm_cdf(-b / a)
            * b
            * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    let half = 0.5 * a;
    for (&xi, &wi) in x.iter().zip(w) {
        for node in [xi, -xi] {
            let xs = (half * (node + 1.0)).powi(2);
            let rs = (1.0 - xs).sqrt();
            let damp = (-0.5 * (bs / xs + hk)).exp();
            let inner = (-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))).exp() / rs
                - (1.0 + c * xs * (1.0 + d * xs));
            bvn += half * wi * damp * inner;
        }
    }
    bvn = -bvn / TWO_PI;

    if r > 0.0 {
        bvn + norm_cdf(-h.max(k_eff))
    } else {
        -bvn + (norm_cdf(-h) - norm_cdf(-k_eff)).max(0.0)
    }
}
