//! Smith normal form over `Z` and `Z/n`.
//!
//! Works directly on canonical representatives of the ring. Pivots are chosen
//! by minimal norm (`|a|` over `Z`, `gcd(a, n)` over `Z/n`) and every 2x2 step
//! is unimodular over `Z`, hence invertible over each residue ring.

use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::ring::{extended_gcd, Int, RingSpec};

/// `u * a * v = d`, with inverses of both transforms kept alongside.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Int> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Returns `(D, U, V)` packed in a [`SmithForm`].
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let ring = a.ring().clone();
    let (rows, cols) = a.shape();
    let mut st = State {
        ring: ring.clone(),
        d: a.clone(),
        u: IntMatrix::identity(&ring, rows),
        v: IntMatrix::identity(&ring, cols),
        u_inv: IntMatrix::identity(&ring, rows),
        v_inv: IntMatrix::identity(&ring, cols),
    };
    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = st.min_pivot(t) else { break };
        st.swap_rows(t, pr);
        st.swap_cols(t, pc);
        loop {
            st.normalize_pivot(t);
            let mut clean = st.clear_column(t);
            clean &= st.clear_row(t);
            if !clean {
                continue;
            }
            // Enforce d_t | every remaining entry.
            match st.non_divisible_row(t) {
                Some(i) => st.add_row(t, i, &Int::one()),
                None => break,
            }
        }
    }
    SmithForm { d: st.d, u: st.u, v: st.v, u_inv: st.u_inv, v_inv: st.v_inv }
}

struct State {
    ring: RingSpec,
    d: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    u_inv: IntMatrix,
    v_inv: IntMatrix,
}

impl State {
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(Int, usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                if let Some(n) = self.ring.norm(self.d.get(i, j)) {
                    if best.as_ref().is_none_or(|(b, _, _)| n < *b) {
                        best = Some((n, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_columns(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_columns(a, b);
        self.v.swap_columns(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// r_i += c * r_k
    fn add_row(&mut self, i: usize, k: usize, c: &Int) {
        self.d.add_row_multiple(i, k, c);
        self.u.add_row_multiple(i, k, c);
        self.u_inv.add_column_multiple(k, i, &-c);
    }

    /// c_i += c * c_k
    fn add_col(&mut self, i: usize, k: usize, c: &Int) {
        self.d.add_column_multiple(i, k, c);
        self.v.add_column_multiple(i, k, c);
        self.v_inv.add_row_multiple(k, i, &-c);
    }

    fn normalize_pivot(&mut self, t: usize) {
        let s = self.ring.normalizing_unit(self.d.get(t, t));
        if s.is_one() {
            return;
        }
        let s_inv = self.ring.inverse(&s).expect("normalizing factor is a unit");
        self.d.scale_row(t, &s);
        self.u.scale_row(t, &s);
        self.u_inv.scale_column(t, &s_inv);
    }

    /// Bezout transform on rows `(t, i)` replacing the pivot by `gcd(p, b)`.
    fn bezout_rows(&mut self, t: usize, i: usize) {
        let p = self.d.get(t, t).clone();
        let b = self.d.get(i, t).clone();
        let (g, s, r) = extended_gcd(&p, &b);
        let fwd = [s.clone(), r.clone(), -(&b / &g), &p / &g];
        // inverse of [[s, r], [-b/g, p/g]] (det 1) acting on columns of u_inv
        let inv = [&p / &g, &b / &g, -r, s];
        self.d.combine_rows(t, i, &fwd);
        self.u.combine_rows(t, i, &fwd);
        self.u_inv.combine_columns(t, i, &inv);
    }

    fn bezout_cols(&mut self, t: usize, j: usize) {
        let p = self.d.get(t, t).clone();
        let b = self.d.get(t, j).clone();
        let (g, s, r) = extended_gcd(&p, &b);
        let fwd = [s.clone(), r.clone(), -(&b / &g), &p / &g];
        let inv = [&p / &g, &b / &g, -r, s];
        self.d.combine_columns(t, j, &fwd);
        self.v.combine_columns(t, j, &fwd);
        self.v_inv.combine_rows(t, j, &inv);
    }

    /// Returns true when no Bezout step was needed.
    fn clear_column(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.d.rows() {
            let b = self.d.get(i, t).clone();
            if b.is_zero() {
                continue;
            }
            let p = self.d.get(t, t).clone();
            match self.ring.divide(&p, &b) {
                Some(q) => self.add_row(i, t, &-q),
                None => {
                    self.bezout_rows(t, i);
                    self.normalize_pivot(t);
                    clean = false;
                }
            }
        }
        clean
    }

    fn clear_row(&mut self, t: usize) -> bool {
        let mut clean = true;
        for j in t + 1..self.d.cols() {
            let b = self.d.get(t, j).clone();
            if b.is_zero() {
                continue;
            }
            let p = self.d.get(t, t).clone();
            match self.ring.divide(&p, &b) {
                Some(q) => self.add_col(j, t, &-q),
                None => {
                    self.bezout_cols(t, j);
                    self.normalize_pivot(t);
                    clean = false;
                }
            }
        }
        clean
    }

    fn non_divisible_row(&self, t: usize) -> Option<usize> {
        let p = self.d.get(t, t);
        for i in t + 1..self.d.rows() {
            for j in t + 1..self.d.cols() {
                if !self.ring.divides(p, self.d.get(i, j)) {
                    return Some(i);
                }
            }
        }
        None
    }
}
