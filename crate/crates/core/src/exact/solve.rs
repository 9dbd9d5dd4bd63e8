//! Linear systems and kernels through the Smith normal form.

use num_traits::Zero;

use super::matrix::IntMatrix;
use super::ring::{Int, RingSpec};
use super::snf::{smith_normal_form, SmithForm};
use crate::error::{Error, Result};

/// Solution set of `A x = b`: a particular solution and generators of the kernel.
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Vec<Int>,
    /// Rows span `{x : A x = 0}`.
    pub kernel: IntMatrix,
}

/// Solve `A x = b` for a column vector `x`. `Ok(None)` when the system has no
/// solution over the ring.
pub fn solve_linear(a: &IntMatrix, b: &[Int]) -> Result<Option<Solution>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for a system with {} equations",
            b.len(),
            a.rows()
        )));
    }
    // A x = b is x^T A^T = b^T.
    let solver = LeftSolver::new(&a.transpose());
    Ok(solver.solve(b).map(|particular| Solution { particular, kernel: solver.kernel() }))
}

/// Rows generate the left kernel `{x : x A = 0}`; over `Z` they form a lattice basis.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    LeftSolver::new(a).kernel()
}

/// Reusable solver for `x A = y` against a fixed matrix `A`.
#[derive(Clone, Debug)]
pub struct LeftSolver {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    snf: SmithForm,
}

impl LeftSolver {
    pub fn new(a: &IntMatrix) -> Self {
        LeftSolver { ring: a.ring().clone(), rows: a.rows(), cols: a.cols(), snf: smith_normal_form(a) }
    }

    pub fn smith(&self) -> &SmithForm {
        &self.snf
    }

    fn diag(&self, i: usize) -> Int {
        if i < self.rows.min(self.cols) {
            self.snf.d.get(i, i).clone()
        } else {
            Int::zero()
        }
    }

    /// Some `x` (length `rows`) with `x A = y`, if one exists.
    pub fn solve(&self, y: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(y.len(), self.cols, "right-hand side must have one entry per column");
        // x A = y  <=>  (x U^-1) D = y V
        let w = self.snf.v.apply_row(y);
        let mut z = vec![Int::zero(); self.rows];
        for (j, wj) in w.iter().enumerate() {
            let d = self.diag(j);
            if j < self.rows {
                z[j] = self.ring.divide(&d, wj)?;
            } else if !wj.is_zero() {
                return None;
            }
        }
        Some(self.snf.u.apply_row(&z))
    }

    /// Generators of `{x : x A = 0}`.
    pub fn kernel(&self) -> IntMatrix {
        let mut rows = Vec::new();
        for i in 0..self.rows {
            let ann = self.ring.annihilator(&self.diag(i));
            if ann.is_zero() {
                continue;
            }
            let r: Vec<Int> = self.snf.u.row(i).iter().map(|e| self.ring.mul(e, &ann)).collect();
            if r.iter().any(|e| !e.is_zero()) {
                rows.push(r);
            }
        }
        IntMatrix::from_rows(&self.ring, self.rows, rows).expect("kernel rows have fixed width")
    }

    /// True when `y` lies in the row space of `A`.
    pub fn contains(&self, y: &[Int]) -> bool {
        self.solve(y).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn parity_obstruction() {
        let r = RingSpec::Integers;
        let a = IntMatrix::from_i64(&r, 1, &[vec![2]]).unwrap();
        assert!(solve_linear(&a, &ints(&[3])).unwrap().is_none());
    }

    #[test]
    fn mod_four_solution_and_kernel() {
        let r = RingSpec::modulo(4).unwrap();
        let a = IntMatrix::from_i64(&r, 1, &[vec![2]]).unwrap();
        let s = solve_linear(&a, &ints(&[2])).unwrap().unwrap();
        assert_eq!(s.particular, ints(&[1]));
        assert_eq!(s.kernel, IntMatrix::from_i64(&r, 1, &[vec![2]]).unwrap());
    }

    #[test]
    fn zero_system_has_full_kernel() {
        let r = RingSpec::Integers;
        let a = IntMatrix::zeros(&r, 2, 3);
        let s = solve_linear(&a, &ints(&[0, 0])).unwrap().unwrap();
        assert_eq!(s.particular, ints(&[0, 0, 0]));
        assert_eq!(s.kernel.rows(), 3);
        assert_eq!(s.kernel.determinant().unwrap().magnitude(), &1u32.into());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let r = RingSpec::Integers;
        let a = IntMatrix::zeros(&r, 2, 3);
        assert!(solve_linear(&a, &ints(&[0])).is_err());
    }

    #[test]
    fn difference_vector_kernel() {
        let r = RingSpec::Integers;
        let a = IntMatrix::from_i64(&r, 1, &[vec![1], vec![1]]).unwrap();
        let k = kernel_basis(&a);
        assert_eq!(k.rows(), 1);
        let row = k.row(0);
        assert!(row == ints(&[1, -1]).as_slice() || row == ints(&[-1, 1]).as_slice());
    }

    #[test]
    fn injective_has_empty_kernel() {
        let r = RingSpec::Integers;
        let a = IntMatrix::from_i64(&r, 1, &[vec![2]]).unwrap();
        assert_eq!(kernel_basis(&a).rows(), 0);
    }

    #[test]
    fn mod_six_kernel() {
        let r = RingSpec::modulo(6).unwrap();
        let a = IntMatrix::from_i64(&r, 1, &[vec![2]]).unwrap();
        assert_eq!(kernel_basis(&a), IntMatrix::from_i64(&r, 1, &[vec![3]]).unwrap());
    }
}
