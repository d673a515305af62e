#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use tcdyn_core::Complex64;

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights on the odd-indexed Kronrod nodes (1, 3, 5, 7)
const G_WEIGHTS: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kronrod = f(c) * K_WEIGHTS[7];
    let mut gauss = f(c) * G_WEIGHTS[3];
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        kronrod += s * K_WEIGHTS[i];
        if i % 2 == 1 {
            gauss += s * G_WEIGHTS[i / 2];
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).norm())
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of a complex integrand:
/// the interval with the largest error estimate is bisected until the summed
/// estimate meets `rel_tol` of a coarse `∫|f|`, or the interval budget runs out.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, rel_tol: f64) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let (rough, rough_err) = gk15(&f, a, b);
    let tol = rel_tol * abs_mass(&f, a, b).max(rough.norm());
    let mut parts = BinaryHeap::from([Part { lo: a, hi: b, value: rough, err: rough_err }]);
    let mut total = rough_err;
    for _ in 0..20_000 {
        if total <= tol {
            break;
        }
        let worst = parts.pop().unwrap();
        let mid = 0.5 * (worst.lo + worst.hi);
        let (l, le) = gk15(&f, worst.lo, mid);
        let (r, re) = gk15(&f, mid, worst.hi);
        total += le + re - worst.err;
        parts.push(Part { lo: worst.lo, hi: mid, value: l, err: le });
        parts.push(Part { lo: mid, hi: worst.hi, value: r, err: re });
    }
    parts.iter().map(|p| p.value).sum()
}

struct Part {
    lo: f64,
    hi: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Part {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Part {}

impl PartialOrd for Part {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Part {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Midpoint estimate of `∫|f|` on 2000 cells.
pub fn abs_mass<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> f64 {
    let n = 2000;
    let h = (b - a) / n as f64;
    (0..n).map(|k| f(a + (k as f64 + 0.5) * h).norm() * h).sum()
}
