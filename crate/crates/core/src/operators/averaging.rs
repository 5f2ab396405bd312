//! Linear operators whose value at each pixel is a weighted sum of stencil
//! averages, together with their exact discrete adjoints.

use crate::grid::{GridField, RowAccumulator, RowPrefix, Stencil};
use rayon::prelude::*;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub stencil: u32,
    pub ai: i32,
    pub aj: i32,
    pub coeff: f64,
}

/// `A f(p) = Σ_terms(p) coeff · average of f over stencil placed at the term's anchor`.
#[derive(Debug, Clone)]
pub struct AveragingOperator {
    n: usize,
    stencils: Vec<Arc<Stencil>>,
    starts: Vec<usize>,
    terms: Vec<Term>,
}

impl AveragingOperator {
    /// `terms_of(p)` lists the terms of pixel `p = j·n + i`.
    pub fn from_terms(
        n: usize,
        stencils: Vec<Arc<Stencil>>,
        mut terms_of: impl FnMut(usize) -> Vec<Term>,
    ) -> Self {
        let mut starts = Vec::with_capacity(n * n + 1);
        let mut terms = Vec::with_capacity(n * n);
        starts.push(0);
        for p in 0..n * n {
            for t in terms_of(p) {
                debug_assert!((t.stencil as usize) < stencils.len());
                terms.push(t);
            }
            starts.push(terms.len());
        }
        Self { n, stencils, starts, terms }
    }

    /// Every pixel averages over the same stencils anchored at itself.
    pub fn centered(n: usize, parts: Vec<(Arc<Stencil>, f64)>) -> Self {
        let coeffs: Vec<f64> = parts.iter().map(|(_, c)| *c).collect();
        let stencils = parts.into_iter().map(|(s, _)| s).collect();
        Self::from_terms(n, stencils, |p| {
            let (i, j) = ((p % n) as i32, (p / n) as i32);
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &coeff)| Term { stencil: k as u32, ai: i, aj: j, coeff })
                .collect()
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self, p: usize) -> &[Term] {
        &self.terms[self.starts[p]..self.starts[p + 1]]
    }

    pub fn stencil(&self, k: u32) -> &Stencil {
        &self.stencils[k as usize]
    }

    pub fn apply(&self, f: &GridField) -> GridField {
        assert_eq!(f.n(), self.n, "grid size mismatch");
        let prefix = RowPrefix::build(f);
        let n = self.n;
        let mut out = vec![0.0; n * n];
        out.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
            for (i, slot) in row.iter_mut().enumerate() {
                let p = j * n + i;
                let mut acc = 0.0;
                for t in self.terms(p) {
                    acc += t.coeff * self.stencils[t.stencil as usize].average_at(&prefix, t.ai, t.aj);
                }
                *slot = acc;
            }
        });
        GridField::from_values(n, out)
    }

    /// Discrete adjoint with respect to `⟨f, g⟩ = Σ f g · spacing²`.
    pub fn adjoint(&self, g: &GridField) -> GridField {
        assert_eq!(g.n(), self.n, "grid size mismatch");
        let mut acc = RowAccumulator::new(self.n);
        for (p, &gp) in g.values().iter().enumerate() {
            if gp == 0.0 {
                continue;
            }
            for t in self.terms(p) {
                let st = &self.stencils[t.stencil as usize];
                st.scatter(&mut acc, t.ai, t.aj, gp * t.coeff * st.weight());
            }
        }
        acc.finish()
    }

    /// Keeps only the rows (output pixels) where `keep` holds.
    pub fn restricted_rows(&self, keep: &[bool]) -> AveragingOperator {
        assert_eq!(keep.len(), self.n * self.n);
        Self::from_terms(self.n, self.stencils.clone(), |p| {
            if keep[p] {
                self.terms(p).to_vec()
            } else {
                Vec::new()
            }
        })
    }
}
