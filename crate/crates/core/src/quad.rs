//! Adaptive Gauss-Kronrod (10/21 point) quadrature over finite and
//! semi-infinite ranges, for real and complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

// QUADPACK node and weight tables, kept at full published precision
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

// 10-point Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// Values that can be integrated: real or complex.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(self) -> f64 {
        self.norm()
    }
}

/// Stopping rule: stop once the summed error estimate is below
/// `max(abs, rel * |I|)` or `max_intervals` segments exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn rel(rel: f64) -> Self {
        Tolerance {
            rel,
            abs: 0.0,
            max_intervals: 4000,
        }
    }

    pub fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }

    pub fn with_max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::rel(1e-10)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

impl<V: QuadValue> Estimate<V> {
    /// Error estimate relative to |value| (infinite for an exact zero with
    /// nonzero error).
    pub fn rel_error(&self) -> f64 {
        let m = self.value.norm();
        if self.error == 0.0 {
            0.0
        } else if m == 0.0 {
            f64::INFINITY
        } else {
            self.error / m
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

impl<V> PartialEq for Segment<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<V> Eq for Segment<V> {}
impl<V> PartialOrd for Segment<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Segment<V> {
    // Ties broken by position so the refinement order is fully deterministic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk21<V: QuadValue, F: Fn(f64) -> V>(f: &F, a: f64, b: f64) -> (V, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[10];
    let mut gauss = V::zero();
    let mut vals = [(V::zero(), V::zero()); 10];
    for (j, x) in XGK.iter().take(10).enumerate() {
        let dx = h * x;
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        vals[j] = (f1, f2);
        kron = kron + (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut res_abs = fc.norm() * WGK[10];
    let mut res_asc = (fc - mean).norm() * WGK[10];
    for (j, (f1, f2)) in vals.iter().enumerate() {
        res_abs += WGK[j] * (f1.norm() + f2.norm());
        res_asc += WGK[j] * ((*f1 - mean).norm() + (*f2 - mean).norm());
    }
    let ah = h.abs();
    res_abs *= ah;
    res_asc *= ah;
    let mut err = ((kron - gauss) * h).norm();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (kron * h, err)
}

fn adapt<V: QuadValue, F: Fn(f64) -> V>(
    f: &F,
    points: &[f64],
    tol: Tolerance,
) -> (Estimate<V>, Vec<(f64, f64)>) {
    assert!(points.len() >= 2, "need at least two break points");
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment<V>> = Vec::new();
    for w in points.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (value, error) = gk21(f, w[0], w[1]);
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    let total = |heap: &BinaryHeap<Segment<V>>, frozen: &[Segment<V>]| {
        let mut v = V::zero();
        let mut e = 0.0;
        // Sum in position order so the result does not depend on heap layout.
        let mut all: Vec<&Segment<V>> = heap.iter().chain(frozen.iter()).collect();
        all.sort_by(|x, y| x.a.total_cmp(&y.a));
        for s in all {
            v = v + s.value;
            e += s.error;
        }
        (v, e)
    };
    let (mut value, mut error) = total(&heap, &frozen);
    let mut converged = error <= tol.target(value.norm());
    while !converged && heap.len() + frozen.len() < tol.max_intervals {
        let Some(worst) = heap.pop() else { break };
        let m = 0.5 * (worst.a + worst.b);
        let width = (worst.b - worst.a).abs();
        if width <= 1e-13 * worst.a.abs().max(worst.b.abs()) || m == worst.a || m == worst.b {
            frozen.push(worst);
            continue;
        }
        let (v1, e1) = gk21(f, worst.a, m);
        let (v2, e2) = gk21(f, m, worst.b);
        value = value - worst.value + v1 + v2;
        error += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: m,
            b: worst.b,
            value: v2,
            error: e2,
        });
        converged = error <= tol.target(value.norm());
    }
    let (value, error) = total(&heap, &frozen);
    let converged = error <= tol.target(value.norm());
    let mut parts: Vec<(f64, f64)> = heap
        .iter()
        .chain(frozen.iter())
        .map(|s| (s.a, s.b))
        .collect();
    parts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let intervals = parts.len();
    (
        Estimate {
            value,
            error,
            intervals,
            converged,
        },
        parts,
    )
}

/// Integrate `f` over the piecewise range given by sorted break `points`.
pub fn integrate<V: QuadValue, F: Fn(f64) -> V>(f: F, points: &[f64], tol: Tolerance) -> Estimate<V> {
    adapt(&f, points, tol).0
}

/// Same as [`integrate`] but also returns the final adaptive partition.
pub fn integrate_with_partition<V: QuadValue, F: Fn(f64) -> V>(
    f: F,
    points: &[f64],
    tol: Tolerance,
) -> (Estimate<V>, Vec<(f64, f64)>) {
    adapt(&f, points, tol)
}

/// Integrate over [a, inf) with the map x = a + scale * t / (1 - t).
///
/// `scale` should be of the order of the integrand's decay length.
pub fn integrate_to_infinity<V: QuadValue, F: Fn(f64) -> V>(
    f: F,
    a: f64,
    scale: f64,
    tol: Tolerance,
) -> Estimate<V> {
    let g = |t: f64| {
        let u = 1.0 - t;
        let x = a + scale * t / u;
        let v = f(x);
        if v.norm() == 0.0 {
            V::zero()
        } else {
            v * (scale / (u * u))
        }
    };
    adapt(&g, &[0.0, 1.0], tol).0
}

/// Sorted, deduplicated break points inside [a, b] (endpoints included).
pub fn breakpoints(a: f64, b: f64, interior: &[f64]) -> Vec<f64> {
    let mut p = vec![a, b];
    p.extend(interior.iter().copied().filter(|x| x.is_finite() && *x > a && *x < b));
    p.sort_by(f64::total_cmp);
    p.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * x.abs().max(y.abs()));
    p
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                let jf = j as f64;
                p0 = ((2.0 * jf + 1.0) * z * p1 - jf * p2) / (jf + 1.0);
            }
            dp = nf * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}
