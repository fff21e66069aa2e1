//! Bessel functions of the first kind for integer order, and the two-argument
//! generalized Bessel function
//!
//! ```text
//! J_m(x, y) = sum_k J_{m-2k}(x) J_k(y)
//! ```
//!
//! which are the Fourier coefficients of `exp(i (x sin t + y sin 2t))`.

/// Values below this are treated as negligible series tails.
const TAIL_EPS: f64 = 1e-16;
const RESCALE_AT: f64 = 1e250;

/// `J_0(x), J_1(x), ..., J_nmax(x)` by Miller's backward recurrence,
/// normalized with `J_0 + 2 sum_k J_2k = 1`.
pub fn bessel_j_seq(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let base = nmax.max(ax.ceil() as usize);
    let mut start = base + 30 + (10.0 * (base as f64).sqrt()) as usize;
    start += start % 2;

    let two_over_x = 2.0 / ax;
    let mut j_next = 0.0; // J_{k+1}
    let mut j_k = 1e-30; // J_k, arbitrary scale
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let j_prev = k as f64 * two_over_x * j_k - j_next;
        j_next = j_k;
        j_k = j_prev;
        // j_k now holds J_{k-1}
        let order = k - 1;
        if order <= nmax {
            out[order] = j_k;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * j_k;
        }
        if j_k.abs() > RESCALE_AT {
            j_k /= RESCALE_AT;
            j_next /= RESCALE_AT;
            norm /= RESCALE_AT;
            for v in out.iter_mut().take(nmax + 1).skip(order) {
                *v /= RESCALE_AT;
            }
        }
    }
    norm += j_k;
    for (n, v) in out.iter_mut().enumerate() {
        *v /= norm;
        if x < 0.0 && n % 2 == 1 {
            *v = -*v;
        }
    }
    out
}

/// `J_n(x)` for any integer order.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let seq = bessel_j_seq(n.unsigned_abs() as usize, x);
    let v = seq[n.unsigned_abs() as usize];
    if n < 0 && n % 2 != 0 {
        -v
    } else {
        v
    }
}

/// Table of `J_n(x)` for `|n| <= nmax`.
#[derive(Debug, Clone)]
pub struct BesselTable {
    values: Vec<f64>,
}

impl BesselTable {
    pub fn new(nmax: usize, x: f64) -> Self {
        BesselTable {
            values: bessel_j_seq(nmax, x),
        }
    }

    pub fn nmax(&self) -> usize {
        self.values.len() - 1
    }

    /// `J_n(x)`; zero outside the table, where the table was sized so that
    /// the omitted values are negligible.
    pub fn get(&self, n: i64) -> f64 {
        let idx = n.unsigned_abs() as usize;
        match self.values.get(idx) {
            Some(&v) if n < 0 && idx % 2 == 1 => -v,
            Some(&v) => v,
            None => 0.0,
        }
    }
}

/// Smallest `K > |y|` beyond which `sum_{|k| > K} |J_k(y)|` is below `TAIL_EPS`.
fn tail_order(y: &BesselTable, ay: f64) -> usize {
    let first = ay.floor() as usize + 1;
    for k in first..y.nmax() {
        let r = ay / (k + 1) as f64;
        if r < 1.0 {
            // |J_{k+j}| <= |J_k| r^j past the turning point
            let bound = 2.0 * y.get(k as i64).abs() * r / (1.0 - r);
            if bound < TAIL_EPS && y.get(k as i64).abs() < TAIL_EPS {
                return k;
            }
        }
    }
    y.nmax()
}

fn series_sizes(m: i32, x: f64, y: f64) -> (usize, usize) {
    let ay = y.abs();
    let ky = ay.ceil() as usize + 40 + (4.0 * ay.sqrt()) as usize;
    let kx = m.unsigned_abs() as usize + 2 * ky + x.abs().ceil() as usize + 40;
    (kx, ky)
}

/// Generalized Bessel function `J_m(x, y) = sum_k J_{m-2k}(x) J_k(y)`.
pub fn generalized_bessel(m: i32, x: f64, y: f64) -> f64 {
    let (kx, ky) = series_sizes(m, x, y);
    let jy = BesselTable::new(ky, y);
    let jx = BesselTable::new(kx, x);
    gb_from_tables(m, &jx, &jy, y.abs())
}

fn gb_from_tables(m: i32, jx: &BesselTable, jy: &BesselTable, ay: f64) -> f64 {
    let k_max = tail_order(jy, ay) as i64;
    let m = m as i64;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in -k_max..=k_max {
        let term = jx.get(m - 2 * k) * jy.get(k);
        // Neumaier summation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `J_m(x, y)` for every `m` in `-m_max..=m_max`, sharing the Bessel tables.
pub fn generalized_bessel_orders(m_max: usize, x: f64, y: f64) -> Vec<f64> {
    let (kx, ky) = series_sizes(m_max as i32, x, y);
    let jy = BesselTable::new(ky, y);
    let jx = BesselTable::new(kx, x);
    let ay = y.abs();
    (-(m_max as i32)..=m_max as i32)
        .map(|m| gb_from_tables(m, &jx, &jy, ay))
        .collect()
}
