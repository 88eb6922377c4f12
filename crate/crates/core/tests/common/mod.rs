//! Independent reference arithmetic shared by the integration tests.
#![allow(dead_code)]

use rmid_core::gf::PolyField;

/// Exponent vectors of total degree at most `k` in `m` variables, ascending
/// lexicographic with the first variable most significant.
pub fn monomials(k: u32, m: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for e in 0..=k {
        for mut rest in monomials(k - e, m - 1) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Term-by-term evaluation with polynomial-basis arithmetic, on raw indices.
pub fn eval_reference(field: &PolyField, k: u32, m: u32, coeffs: &[u32], r: &[u32]) -> u32 {
    let powers: Vec<Vec<u32>> = r
        .iter()
        .map(|&x| (0..=k).map(|e| field.pow(x, e as u64)).collect())
        .collect();
    let mut acc = 0;
    for (w, z) in coeffs.iter().zip(monomials(k, m)) {
        let mut term = *w;
        for (pw, &e) in powers.iter().zip(&z) {
            term = field.mul(term, pw[e as usize]);
        }
        acc = field.add(acc, term);
    }
    acc
}

/// All points of GF(q)^m as index vectors.
pub fn all_points(q: u32, m: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// Prime powers `2 <= q <= limit` by trial division.
pub fn prime_powers(limit: u32) -> Vec<u32> {
    (2..=limit)
        .filter(|&q| {
            let p = (2..=q).find(|d| q % d == 0).unwrap();
            let mut x = q;
            while x % p == 0 {
                x /= p;
            }
            x == 1
        })
        .collect()
}
