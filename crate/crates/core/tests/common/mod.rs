#![allow(dead_code)]

use speclab_core::{Complex64, TridiagonalMatrix};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Coefficients (constant term first) of `det(zI - A)` built from the
/// three-term determinant recurrence on polynomials.
pub fn char_poly(a: &TridiagonalMatrix) -> Vec<Complex64> {
    let mut prev = vec![c(0.0, 0.0)];
    let mut cur = vec![c(1.0, 0.0)];
    for j in 0..a.order() {
        let mut next = vec![c(0.0, 0.0); cur.len() + 1];
        for (i, &p) in cur.iter().enumerate() {
            next[i + 1] += p;
            next[i] -= a.diag()[j] * p;
        }
        if j >= 1 {
            let w = a.sub()[j - 1] * a.sup()[j - 1];
            for (i, &p) in prev.iter().enumerate() {
                next[i] -= w * p;
            }
        }
        prev = cur;
        cur = next;
    }
    cur
}

pub fn poly_eval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(c(0.0, 0.0), |acc, &k| acc * z + k)
}

/// Roots of a monic cubic `z³ + p2 z² + p1 z + p0` by Cardano's formula,
/// each polished by two Newton steps.
pub fn cardano(p: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(p.len(), 4);
    let (a, b, cc) = (p[2], p[1], p[0]);
    let shift = a / 3.0;
    let pp = b - a * a / 3.0;
    let qq = a * a * a * (2.0 / 27.0) - a * b / 3.0 + cc;
    let disc = (qq * qq / 4.0 + pp * pp * pp / 27.0).sqrt();
    let mut u = (-qq / 2.0 + disc).cbrt();
    if u.norm() < 1e-300 {
        u = (-qq / 2.0 - disc).cbrt();
    }
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut roots = Vec::new();
    for r in 0..3 {
        let uk = u * omega.powu(r);
        let vk = if uk.norm() < 1e-300 { c(0.0, 0.0) } else { -pp / (uk * 3.0) };
        roots.push(uk + vk - shift);
    }
    let dp: Vec<Complex64> = (1..p.len()).map(|i| p[i] * i as f64).collect();
    for z in roots.iter_mut() {
        for _ in 0..2 {
            let d = poly_eval(&dp, *z);
            if d.norm() > 1e-12 {
                *z -= poly_eval(p, *z) / d;
            }
        }
    }
    roots
}

/// Simultaneous (Durand–Kerner) iteration for all roots of a monic polynomial.
pub fn durand_kerner(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let seed = c(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * 2.0).collect();
    for _ in 0..2000 {
        let mut change: f64 = 0.0;
        for i in 0..n {
            let mut den = c(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = poly_eval(p, z[i]) / den;
            z[i] -= step;
            change = change.max(step.norm());
        }
        if change < 1e-15 {
            break;
        }
    }
    z
}

/// Optimal matching distance between two small multisets, by brute force
/// over permutations.
pub fn matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    fn go(a: &[Complex64], b: &mut Vec<Complex64>, k: usize, worst: f64, best: &mut f64) {
        if worst >= *best {
            return;
        }
        if k == a.len() {
            *best = worst;
            return;
        }
        for i in k..b.len() {
            b.swap(k, i);
            go(a, b, k + 1, worst.max((a[k] - b[k]).norm()), best);
            b.swap(k, i);
        }
    }
    let mut best = f64::INFINITY;
    go(a, &mut b.to_vec(), 0, 0.0, &mut best);
    best
}

pub fn golden(n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (1..=n).map(|j| 2.0 * (j as f64 * std::f64::consts::PI / (n + 1) as f64).cos()).collect();
    v.sort_by(f64::total_cmp);
    v
}
