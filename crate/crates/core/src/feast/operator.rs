use num_complex::Complex64;
use rayon::prelude::*;

use super::PhysicalFilter;
use crate::linalg::{CMatrix, HermitianPencil, ShiftedSystem};
use crate::Result;

/// Cache factorizations only while they fit in this many bytes.
const CACHE_BUDGET_BYTES: usize = 1 << 30;

/// `r(M) = constant + sum_j w_j (z_j B - A)^{-1} B` for one pencil and one
/// physical filter, with the shifted factorizations cached across calls.
///
/// For a real pencil only the upper-half-plane poles are factored: the
/// solve for `conj(z)` is `conj((z B - A)^{-1} conj(v))`. When additionally
/// the block is real and the filter comes in conjugate pairs, each pair
/// contributes `2 Re(w X)` and the result stays real.
pub struct FilterOperator<'a> {
    pencil: &'a HermitianPencil,
    filter: PhysicalFilter,
    /// Indices into the filter's pole list that are factored.
    factored: Vec<usize>,
    cache: Option<Vec<ShiftedSystem>>,
    use_conjugates: bool,
}

impl<'a> FilterOperator<'a> {
    pub fn new(pencil: &'a HermitianPencil, filter: PhysicalFilter) -> Result<Self> {
        let use_conjugates = pencil.real_symmetric() && filter.reducible;
        let factored: Vec<usize> = if use_conjugates {
            (0..filter.poles.len()).step_by(2).collect()
        } else {
            (0..filter.poles.len()).collect()
        };
        let n = pencil.n();
        let bytes = factored.len() * n * n * std::mem::size_of::<Complex64>();
        let cache = if bytes <= CACHE_BUDGET_BYTES {
            let systems: Result<Vec<_>> = factored
                .par_iter()
                .map(|&j| ShiftedSystem::factor(pencil, filter.poles[j]))
                .collect();
            Some(systems?)
        } else {
            None
        };
        Ok(Self {
            pencil,
            filter,
            factored,
            cache,
            use_conjugates,
        })
    }

    pub fn filter(&self) -> &PhysicalFilter {
        &self.filter
    }

    /// Whether conjugate-pair reduction is active for real blocks.
    pub fn uses_conjugate_pairs(&self) -> bool {
        self.use_conjugates
    }

    /// `Z = r(M) Y`. Solves run in parallel; contributions are summed in
    /// pole-storage order so the result does not depend on scheduling.
    pub fn apply(&self, y: &CMatrix) -> Result<CMatrix> {
        let by = self.pencil.apply_b(y)?;
        let real_block = y.is_real();
        let solves: Vec<CMatrix> = self
            .factored
            .par_iter()
            .enumerate()
            .map(|(slot, &j)| match &self.cache {
                Some(systems) => systems[slot].solve(self.pencil, &by),
                None => ShiftedSystem::factor(self.pencil, self.filter.poles[j])?
                    .solve(self.pencil, &by),
            })
            .collect::<Result<_>>()?;
        // Lower-pole solves for a complex block on a real pencil.
        let conj_solves: Vec<CMatrix> = if self.use_conjugates && !real_block {
            let by_conj = conj(&by);
            self.factored
                .par_iter()
                .enumerate()
                .map(|(slot, &j)| {
                    let x = match &self.cache {
                        Some(systems) => systems[slot].solve(self.pencil, &by_conj),
                        None => ShiftedSystem::factor(self.pencil, self.filter.poles[j])?
                            .solve(self.pencil, &by_conj),
                    }?;
                    Ok(conj(&x))
                })
                .collect::<Result<_>>()?
        } else {
            Vec::new()
        };

        let mut z = y.clone();
        z.scale(self.filter.constant);
        for (slot, (&j, x)) in self.factored.iter().zip(&solves).enumerate() {
            let w = self.filter.weights[j];
            if !self.use_conjugates {
                z.axpy(w, x)?;
            } else if real_block {
                for (zi, xi) in z.data_mut().iter_mut().zip(x.data()) {
                    *zi += Complex64::new(2.0 * (w * xi).re, 0.0);
                }
            } else {
                z.axpy(w, x)?;
                z.axpy(self.filter.weights[j + 1], &conj_solves[slot])?;
            }
        }
        Ok(z)
    }
}

fn conj(m: &CMatrix) -> CMatrix {
    let mut out = m.clone();
    for v in out.data_mut() {
        *v = v.conj();
    }
    out
}
