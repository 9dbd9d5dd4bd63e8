//! Seeded random inputs; every suite fixes its seed so failures reproduce.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Gen(ChaCha8Rng);

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.0.gen_bool(p)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
        (0..rows).map(|_| (0..cols).map(|_| self.int(-bound, bound)).collect()).collect()
    }

    /// A matrix with mostly zero entries, which keeps presentations interesting.
    pub fn sparse_matrix(&mut self, rows: usize, cols: usize, bound: i64, density: f64) -> Vec<Vec<i64>> {
        (0..rows)
            .map(|_| (0..cols).map(|_| if self.chance(density) { self.int(-bound, bound) } else { 0 }).collect())
            .collect()
    }

    /// A product of elementary operations; its determinant is ±1.
    pub fn unimodular(&mut self, n: usize, steps: usize) -> Vec<Vec<i64>> {
        let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        if n < 2 {
            return m;
        }
        for _ in 0..steps {
            let i = self.below(n);
            let j = (i + 1 + self.below(n - 1)) % n;
            let c = self.int(-2, 2);
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(src) {
                *x += c * y;
            }
        }
        m
    }

    /// A chain `d_1 | d_2 | ...` of non-units bounded by `max`.
    pub fn divisor_chain(&mut self, len: usize, max: i64) -> Vec<i64> {
        let mut out: Vec<i64> = Vec::new();
        for _ in 0..len {
            let base = out.last().copied().unwrap_or(1);
            let options: Vec<i64> = (2..=max / base).map(|c| c * base).collect();
            if options.is_empty() {
                break;
            }
            out.push(*self.pick(&options));
        }
        out
    }

    /// Relations for `Z^rank ⊕ ⊕ Z/d` hidden behind random unimodular changes of basis.
    /// Returns the number of generators and the relation rows.
    pub fn disguised_presentation(&mut self, rank: usize, factors: &[i64]) -> (usize, Vec<Vec<i64>>) {
        let k = factors.len();
        let g = rank + k;
        let d: Vec<Vec<i64>> = (0..k).map(|i| (0..g).map(|j| if i == j { factors[i] } else { 0 }).collect()).collect();
        let u = self.unimodular(k, 2 * k);
        let v = self.unimodular(g, 2 * g);
        let mul = |a: &[Vec<i64>], b: &[Vec<i64>], cols: usize| -> Vec<Vec<i64>> {
            a.iter().map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect()).collect()
        };
        (g, mul(&mul(&u, &d, g), &v, g))
    }
}
