use std::sync::Arc;

use super::cfinite::CFiniteModule;
use super::{ModuleAction, ModuleVector};
use crate::algebra::{AlgebraSpec, TorusElement};
use crate::error::{Error, Result};
use crate::scalar::ExactRational;
use crate::Sublattice;

/// Direct sum of modules that may be free over different commutative
/// subalgebras. Vectors are the concatenation of the parts' vectors.
#[derive(Clone, Debug)]
pub struct ModuleSum<Q: ExactRational> {
    spec: Arc<AlgebraSpec>,
    parts: Vec<CFiniteModule<Q>>,
}

impl<Q: ExactRational> ModuleSum<Q> {
    pub fn new(parts: Vec<CFiniteModule<Q>>) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Precondition("a direct sum needs at least one part".into()))?;
        let spec = first.spec().clone();
        if parts.iter().any(|p| **p.spec() != *spec) {
            return Err(Error::SpecMismatch);
        }
        Ok(Self { spec, parts })
    }

    pub fn parts(&self) -> &[CFiniteModule<Q>] {
        &self.parts
    }

    fn split_vector<'a>(&self, v: &'a ModuleVector<Q>) -> Result<Vec<&'a [TorusElement<Q>]>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let mut out = Vec::new();
        let mut start = 0;
        for p in &self.parts {
            out.push(&v[start..start + p.d()]);
            start += p.d();
        }
        Ok(out)
    }
}

impl<Q: ExactRational> ModuleAction<Q> for ModuleSum<Q> {
    fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    fn dim(&self) -> usize {
        self.parts.iter().map(CFiniteModule::d).sum()
    }

    fn c_lattices(&self) -> Vec<Sublattice> {
        let mut out: Vec<Sublattice> = Vec::new();
        for p in &self.parts {
            let c = p.c_lattice();
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    fn c_rank(&self) -> usize {
        self.parts.iter().map(CFiniteModule::r).max().unwrap_or(0)
    }

    fn component_ranks(&self) -> Vec<usize> {
        self.parts.iter().flat_map(ModuleAction::component_ranks).collect()
    }

    fn free_generators(&self) -> Vec<ModuleVector<Q>> {
        let mut out = Vec::new();
        for (i, p) in self.parts.iter().enumerate() {
            for g in p.free_generators() {
                let mut v = Vec::new();
                for (k, q) in self.parts.iter().enumerate() {
                    if k == i {
                        v.extend(g.iter().cloned());
                    } else {
                        v.extend(q.zero_vector());
                    }
                }
                out.push(v);
            }
        }
        out
    }

    fn zero_vector(&self) -> ModuleVector<Q> {
        self.parts.iter().flat_map(|p| p.zero_vector()).collect()
    }

    fn act_monomials(&self, exps: &[Vec<i64>], v: &ModuleVector<Q>) -> Result<Vec<ModuleVector<Q>>> {
        let pieces = self.split_vector(v)?;
        let mut images: Vec<ModuleVector<Q>> = vec![Vec::with_capacity(self.dim()); exps.len()];
        for (p, piece) in self.parts.iter().zip(pieces) {
            let part_images = p.act_monomials(exps, &piece.to_vec())?;
            for (img, part) in images.iter_mut().zip(part_images) {
                img.extend(part);
            }
        }
        Ok(images)
    }

    fn action_radius(&self) -> i64 {
        self.parts.iter().map(ModuleAction::action_radius).max().unwrap_or(0)
    }
}
