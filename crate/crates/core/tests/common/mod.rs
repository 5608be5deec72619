//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use quantinv_core::exactnum::{IntPolynomial, Rational};
use rand::Rng;

#[derive(Clone, Copy, Debug)]
struct C(f64, f64);

impl C {
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C) -> C {
        let d = o.0 * o.0 + o.1 * o.1;
        C((self.0 * o.0 + self.1 * o.1) / d, (self.1 * o.0 - self.0 * o.1) / d)
    }
    fn abs(self) -> f64 {
        self.0.hypot(self.1)
    }
}

/// Complex roots by Durand-Kerner iteration on the monic normalization.
pub fn roots(coeffs: &[i64]) -> Vec<(f64, f64)> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n] as f64;
    let monic: Vec<f64> = coeffs.iter().map(|&c| c as f64 / lead).collect();
    let eval = |z: C| monic.iter().rev().fold(C(0.0, 0.0), |acc, &c| acc.mul(z).add(C(c, 0.0)));
    let radius = 1.0 + monic[..n].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..n)
        .map(|k| {
            let t = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            C(radius * t.cos(), radius * t.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let den = (0..n).filter(|&j| j != i).fold(C(1.0, 0.0), |acc, j| acc.mul(z[i].sub(z[j])));
            let step = eval(z[i]).div(den);
            if step.0.is_finite() && step.1.is_finite() {
                z[i] = z[i].sub(step);
                delta = delta.max(step.abs());
            }
        }
        if delta < 1e-15 {
            break;
        }
    }
    z.into_iter().map(|c| (c.0, c.1)).collect()
}

/// Floating Mahler measure `|lead|·∏ max(1, |root|)`.
pub fn mahler_f64(coeffs: &[i64]) -> f64 {
    let trimmed = trim(coeffs);
    let lead = (*trimmed.last().unwrap() as f64).abs();
    if trimmed.len() == 1 {
        return lead;
    }
    roots(&trimmed).iter().fold(lead, |m, &(re, im)| m * re.hypot(im).max(1.0))
}

pub fn trim(coeffs: &[i64]) -> Vec<i64> {
    let mut v = coeffs.to_vec();
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

pub fn poly_mul(p: &[i64], q: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

pub fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Random coefficients in `[-range, range]` with nonzero leading term.
pub fn random_poly<R: Rng>(rng: &mut R, degree: usize, range: i64) -> Vec<i64> {
    let mut c: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-range..=range)).collect();
    while c[degree] == 0 {
        c[degree] = rng.gen_range(-range..=range);
    }
    c
}

pub fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn content(c: &[i64]) -> i64 {
    c.iter().fold(0i128, |g, &x| gcd(g, x as i128)) as i64
}

/// Laplace expansion along the first row.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .filter(|&j| m[0][j] != 0)
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

/// Gcd of all maximal minors of the banded matrix built directly from `coeffs`.
pub fn banded_minor_gcd(coeffs: &[i64], j: usize) -> i128 {
    let k = coeffs.len() - 1;
    let rows = j + 1;
    let cols = j + k + 1;
    let m: Vec<Vec<i128>> = (0..rows)
        .map(|r| (0..cols).map(|c| if c >= r && c - r <= k { coeffs[c - r] as i128 } else { 0 }).collect())
        .collect();
    let mut g = 0i128;
    let mut idx: Vec<usize> = (0..rows).collect();
    loop {
        let sub: Vec<Vec<i128>> = m.iter().map(|row| idx.iter().map(|&c| row[c]).collect()).collect();
        g = gcd(g, det(&sub));
        let Some(i) = (0..rows).rev().find(|&i| idx[i] != i + cols - rows) else { break };
        idx[i] += 1;
        for t in i + 1..rows {
            idx[t] = idx[t - 1] + 1;
        }
    }
    g
}

pub fn int_poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64s(c)
}

pub fn rat(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn rat_f64(r: &Rational) -> f64 {
    r.to_f64()
}

/// Exact output sequence `⌊x_k⌋` of `x⁺ = a x + u`.
pub fn outputs(a: &Rational, x0: &Rational, word: &[Rational]) -> Vec<BigInt> {
    let mut x = x0.clone();
    let mut ys = vec![x.floor()];
    for u in word {
        x = &(a * &x) + u;
        ys.push(x.floor());
    }
    ys
}

/// Random rational `n/d` with `d ≤ max_den` strictly inside `(lo, hi)`.
pub fn random_rational<R: Rng>(rng: &mut R, lo: f64, hi: f64, max_den: i64) -> Rational {
    loop {
        let d = rng.gen_range(1..=max_den);
        let n = rng.gen_range((lo * d as f64).floor() as i64..=(hi * d as f64).ceil() as i64);
        let v = n as f64 / d as f64;
        if v > lo && v < hi {
            return Rational::new(n, d).unwrap();
        }
    }
}
