//! Exact irreducible degrees by Dixon's modular variant of Burnside's
//! algorithm.
//!
//! The class multiplication constants `a_{jik}` (with `C_j C_i = Σ_k a_{jik} C_k`)
//! define commuting matrices `M_j`, `(M_j)_{ik} = a_{jik}`, whose common
//! eigenvectors are the central characters `ω_π(K_k)`. Working over `F_p`
//! with `p ≡ 1 (mod exp G)` and `p > n` keeps every eigenvalue in the field
//! and every computation exact. The degree follows from
//! `d_π² · Σ_K ω_π(K) ω_π(K⁻¹) / |K| = n`.

use super::IrrepSpectrum;
use crate::error::{Error, Result};
use crate::group::{is_prime, FiniteGroup};

/// Largest group order the oracle accepts.
pub const DIXON_ORDER_CAP: usize = 400;

pub fn dixon_oracle(group: &FiniteGroup) -> Result<IrrepSpectrum> {
    let n = group.order();
    if n > DIXON_ORDER_CAP {
        return Err(Error::OrderCap { order: n, cap: DIXON_ORDER_CAP });
    }
    let classes = group.conjugacy_classes();
    let r = classes.len();
    let inverse_class = classes.inverse_classes(group);
    let p = choose_prime(group.exponent() as u64, n as u64);
    let field = Fp(p);

    // a[j][i][k]
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for (k, class) in classes.classes.iter().enumerate() {
        let z = class[0];
        for x in 0..n {
            let y = group.multiply(group.inverse(x), z);
            a[classes.class_of[x]][classes.class_of[y]][k] += 1;
        }
    }
    let mats: Vec<Vec<Vec<u64>>> =
        a.iter().map(|mj| mj.iter().map(|row| row.iter().map(|&v| v % p).collect()).collect()).collect();

    // split F_p^r into common eigenspaces, one class matrix at a time
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r).map(|i| unit(r, i)).collect()];
    for m in mats.iter().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
            } else {
                next.extend(field.split(m, &space)?);
            }
        }
        spaces = next;
    }
    if spaces.len() != r || spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::DegenerateSpectrum { attempts: 1, reason: "class matrices did not separate".into() });
    }

    let sizes = classes.sizes();
    let mut degrees = Vec::with_capacity(r);
    for space in &spaces {
        let w = &space[0];
        let norm = field.inv(w[0]).ok_or_else(|| bad("eigenvector vanishes on the identity class"))?;
        let omega: Vec<u64> = w.iter().map(|&x| field.mul(x, norm)).collect();
        let mut total = 0u64;
        for k in 0..r {
            let term = field.mul(omega[k], omega[inverse_class[k]]);
            let inv_size = field.inv(sizes[k] as u64 % p).ok_or_else(|| bad("class size divisible by p"))?;
            total = field.add(total, field.mul(term, inv_size));
        }
        let inv_total = field.inv(total).ok_or_else(|| bad("degenerate character norm"))?;
        let d_sq = field.mul(n as u64 % p, inv_total);
        let d = (1..=n)
            .take_while(|d| d * d <= n)
            .find(|&d| (d * d) as u64 == d_sq)
            .ok_or_else(|| bad("squared degree is not a square at most n"))?;
        degrees.push(d);
    }
    Ok(IrrepSpectrum::new(group.name(), degrees))
}

fn bad(reason: &str) -> Error {
    Error::DegenerateSpectrum { attempts: 1, reason: reason.into() }
}

/// Smallest prime `p > n` with `p ≡ 1 (mod e)`.
fn choose_prime(e: u64, n: u64) -> u64 {
    let mut p = e + 1;
    while p <= n.max(2) || !is_prime(p) {
        p += e;
    }
    p
}

fn unit(r: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

#[derive(Clone, Copy)]
struct Fp(u64);

impl Fp {
    fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b) % self.0
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    fn pow(self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        base %= self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv(self, a: u64) -> Option<u64> {
        (!a.is_multiple_of(self.0)).then(|| self.pow(a, self.0 - 2))
    }

    /// Splits the `m`-invariant subspace spanned by `basis` (column vectors of
    /// length `r`) into eigenspaces of `m`.
    fn split(self, m: &[Vec<u64>], basis: &[Vec<u64>]) -> Result<Vec<Vec<Vec<u64>>>> {
        let k = basis.len();
        let r = basis[0].len();
        let mb: Vec<Vec<u64>> = basis
            .iter()
            .map(|b| (0..r).map(|i| (0..r).fold(0, |acc, t| self.add(acc, self.mul(m[i][t], b[t])))).collect())
            .collect();
        // coordinates of each m·b in the basis: solve B x = m b
        let restricted = self.solve_in_basis(basis, &mb)?;
        let mut pieces = Vec::new();
        let mut found = 0;
        for lambda in 0..self.0 {
            let shifted: Vec<Vec<u64>> = (0..k)
                .map(|i| (0..k).map(|j| if i == j { self.sub(restricted[i][j], lambda) } else { restricted[i][j] }).collect())
                .collect();
            let kernel = self.kernel(&shifted);
            if kernel.is_empty() {
                continue;
            }
            found += kernel.len();
            let lifted: Vec<Vec<u64>> = kernel
                .iter()
                .map(|y| {
                    (0..r).map(|t| (0..k).fold(0, |acc, j| self.add(acc, self.mul(basis[j][t], y[j])))).collect()
                })
                .collect();
            pieces.push(lifted);
            if found == k {
                break;
            }
        }
        if found != k {
            return Err(bad("class matrix is not diagonalisable over the chosen field"));
        }
        Ok(pieces)
    }

    /// Returns the `k×k` matrix `X` (row-major, `X[i][j]` = coefficient of
    /// `basis[i]` in `targets[j]`).
    fn solve_in_basis(self, basis: &[Vec<u64>], targets: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
        let k = basis.len();
        let r = basis[0].len();
        // augmented r × (k + k) system [B | T]
        let mut aug: Vec<Vec<u64>> =
            (0..r).map(|t| basis.iter().map(|b| b[t]).chain(targets.iter().map(|v| v[t])).collect()).collect();
        for col in 0..k {
            let pivot = (col..r).find(|&i| aug[i][col] != 0).ok_or_else(|| bad("basis is rank deficient"))?;
            aug.swap(col, pivot);
            self.eliminate(&mut aug, col, col);
        }
        Ok((0..k).map(|i| (0..k).map(|j| aug[i][k + j]).collect()).collect())
    }

    /// Scales `rows[row]` so the entry at `col` is one and clears `col` in
    /// every other row.
    fn eliminate(self, rows: &mut [Vec<u64>], row: usize, col: usize) {
        let inv = self.inv(rows[row][col]).expect("nonzero pivot");
        for x in rows[row].iter_mut() {
            *x = self.mul(*x, inv);
        }
        let pivot = rows[row].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            let f = r[col];
            if i != row && f != 0 {
                for (x, &p) in r.iter_mut().zip(&pivot) {
                    *x = self.sub(*x, self.mul(f, p));
                }
            }
        }
    }

    /// Basis of the right null space of a square matrix.
    fn kernel(self, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let k = a.len();
        let mut m: Vec<Vec<u64>> = a.to_vec();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..k {
            let Some(pivot) = (row..k).find(|&i| m[i][col] != 0) else { continue };
            m.swap(row, pivot);
            self.eliminate(&mut m, row, col);
            pivot_cols.push(col);
            row += 1;
            if row == k {
                break;
            }
        }
        let free: Vec<usize> = (0..k).filter(|c| !pivot_cols.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; k];
                v[f] = 1;
                for (i, &pc) in pivot_cols.iter().enumerate() {
                    v[pc] = self.sub(0, m[i][f]);
                }
                v
            })
            .collect()
    }
}
