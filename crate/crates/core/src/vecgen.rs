//! Master-set generation from vector components.
//!
//! Every nonzero d-tuple over the component set is reduced to its projective
//! ray, rays are joined when their Hermitian inner product vanishes exactly,
//! and each orthogonal d-clique becomes an edge of the master hypergraph.

use std::collections::HashSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::cyclotomic::{infer_field_order, parse_component, CyclotomicNumber, FieldContext};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::ray::Ray;

/// Parse component tokens, using `order` when given and inferring it otherwise.
pub fn parse_components<S: AsRef<str>>(
    tokens: &[S],
    order: Option<u32>,
) -> Result<(Arc<FieldContext>, Vec<CyclotomicNumber>)> {
    let order = match order {
        Some(n) => n,
        None => infer_field_order(tokens)?,
    };
    let ctx = FieldContext::new(order)?;
    let comps = tokens
        .iter()
        .map(|t| parse_component(t.as_ref(), &ctx))
        .collect::<Result<Vec<_>>>()?;
    Ok((ctx, comps))
}

/// One ray per projective class of the nonzero tuples in `components^d`.
///
/// Tuples are visited lexicographically (first coordinate slowest, in the
/// order the components were given) and the first tuple of each class is kept
/// as its display representative.
pub fn enumerate_rays(components: &[CyclotomicNumber], d: usize) -> Result<Vec<Ray>> {
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    if components.is_empty() {
        return Err(Error::NoComponents);
    }
    if components.iter().all(CyclotomicNumber::is_zero) {
        return Err(Error::NoNonzeroComponent);
    }
    let base = components.len();
    let total = base.checked_pow(d as u32).ok_or(Error::BadDimension(d))?;
    let mut seen: HashSet<Ray> = HashSet::new();
    let mut rays = Vec::new();
    let mut digits = vec![0usize; d];
    for _ in 0..total {
        if digits.iter().any(|&i| !components[i].is_zero()) {
            let ray = Ray::new(digits.iter().map(|&i| components[i].clone()).collect())?;
            if !seen.contains(&ray) {
                seen.insert(ray.clone());
                rays.push(ray);
            }
        }
        for slot in digits.iter_mut().rev() {
            *slot += 1;
            if *slot < base {
                break;
            }
            *slot = 0;
        }
    }
    Ok(rays)
}

/// Adjacency bitsets: `adj[i]` holds every `j` with `<r_i, r_j> = 0`.
pub fn orthogonality_graph(rays: &[Ray]) -> Result<Vec<FixedBitSet>> {
    let n = rays.len();
    let mut adj = vec![FixedBitSet::with_capacity(n); n];
    let conj: Vec<Vec<CyclotomicNumber>> = rays
        .iter()
        .map(|r| r.entries().iter().map(CyclotomicNumber::conjugate).collect())
        .collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if rays[i].dim() != rays[j].dim() {
                return Err(Error::DimensionMismatch(rays[i].dim(), rays[j].dim()));
            }
            if hermitian_zero(&conj[i], rays[j].entries())? {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    Ok(adj)
}

fn hermitian_zero(conj_a: &[CyclotomicNumber], b: &[CyclotomicNumber]) -> Result<bool> {
    let mut acc: Option<CyclotomicNumber> = None;
    for (x, y) in conj_a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let p = x.checked_mul(y)?;
        acc = Some(match acc {
            None => p,
            Some(a) => a.checked_add(&p)?,
        });
    }
    Ok(acc.map_or(true, |a| a.is_zero()))
}

/// All `size`-cliques, each listed in increasing vertex order, found by
/// extending only with higher-indexed common neighbours.
pub fn cliques_of_size(adj: &[FixedBitSet], size: usize) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(size);
    let mut all = FixedBitSet::with_capacity(n);
    all.insert_range(..);
    extend_clique(adj, size, &mut stack, all, &mut out);
    out
}

fn extend_clique(
    adj: &[FixedBitSet],
    size: usize,
    stack: &mut Vec<usize>,
    candidates: FixedBitSet,
    out: &mut Vec<Vec<usize>>,
) {
    if stack.len() == size {
        out.push(stack.clone());
        return;
    }
    for v in candidates.ones() {
        let mut next = candidates.clone();
        next.intersect_with(&adj[v]);
        // keep only higher indices
        next.remove_range(..v + 1);
        if stack.len() + 1 + next.count_ones(..) < size {
            continue;
        }
        stack.push(v);
        extend_clique(adj, size, stack, next, out);
        stack.pop();
    }
}

/// A master hypergraph together with the component set that generated it.
#[derive(Clone, Debug)]
pub struct MasterSet {
    pub hypergraph: Hypergraph,
    pub components: Vec<CyclotomicNumber>,
    pub dimension: usize,
    /// Number of ray classes before basis-free rays were dropped.
    pub ray_classes: usize,
}

impl MasterSet {
    pub fn ray(&self, v: usize) -> &Ray {
        self.hypergraph
            .ray(v)
            .expect("master vertices always carry rays")
    }
}

/// Generate the master set; `Ok(None)` when no orthogonal basis exists.
pub fn build_master(components: &[CyclotomicNumber], d: usize) -> Result<Option<MasterSet>> {
    let rays = enumerate_rays(components, d)?;
    let adj = orthogonality_graph(&rays)?;
    let cliques = cliques_of_size(&adj, d);
    for c in &cliques {
        let mut common = adj[c[0]].clone();
        for &v in &c[1..] {
            common.intersect_with(&adj[v]);
        }
        assert!(
            common.is_clear(),
            "{} pairwise orthogonal rays in dimension {d}",
            d + 1
        );
    }
    if cliques.is_empty() {
        return Ok(None);
    }
    let mut map = vec![usize::MAX; rays.len()];
    let mut order = Vec::new();
    let edges: Vec<Vec<u32>> = cliques
        .iter()
        .map(|c| {
            c.iter()
                .map(|&r| {
                    if map[r] == usize::MAX {
                        map[r] = order.len();
                        order.push(r);
                    }
                    map[r] as u32
                })
                .collect()
        })
        .collect();
    let mut hypergraph = Hypergraph::new(order.len(), edges)?;
    hypergraph.set_coordinatization(order.iter().map(|&r| Some(rays[r].clone())).collect());
    Ok(Some(MasterSet {
        hypergraph,
        components: components.to_vec(),
        dimension: d,
        ray_classes: rays.len(),
    }))
}

/// Convenience wrapper: parse tokens, then build.
pub fn build_master_from_tokens<S: AsRef<str>>(
    tokens: &[S],
    d: usize,
    field_order: Option<u32>,
) -> Result<Option<MasterSet>> {
    let (_, comps) = parse_components(tokens, field_order)?;
    build_master(&comps, d)
}
