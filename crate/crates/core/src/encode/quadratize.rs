use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::registry::VarTable;
use crate::algebra::{Monomial, SparsePoly, VarId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainKind {
    /// u_{ij} = x_i^{2^j}
    Square { var: VarId, level: u32 },
    /// link of a product chain
    Product,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainVar {
    pub id: VarId,
    pub kind: ChainKind,
    /// The monomial in the input variables this variable stands for.
    pub definition: Monomial,
}

/// Output of [`quadratize`].
#[derive(Clone, Debug, PartialEq)]
pub struct Quadratization {
    pub squaring: Vec<SparsePoly>,
    pub products: Vec<SparsePoly>,
    /// f̂_j, aligned with the input list
    pub rewritten: Vec<SparsePoly>,
    pub new_vars: Vec<ChainVar>,
}

impl Quadratization {
    /// Squaring chains, product chains, then the rewritten targets.
    pub fn system(&self) -> Vec<SparsePoly> {
        self.squaring.iter().chain(&self.products).chain(&self.rewritten).cloned().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.new_vars.is_empty()
    }
}

fn chain_eq(lhs: VarId, a: VarId, b: VarId, template: &SparsePoly) -> SparsePoly {
    let ring = template.ring();
    let mut p = SparsePoly::var(ring, lhs);
    let rhs = Monomial::from_pairs([(a, 1), (b, 1)]);
    p.add_term(rhs, ring.neg(&ring.one()).expect("one"));
    p
}

/// Rewrites a system into degree ≤ 2 with squaring chains
/// u_{i1} = x_i², u_{i(j+1)} = u_{ij}² and one product chain per distinct
/// monomial of degree > 2. Input that is already quadratic comes back as is.
/// New variables are appended to `vars`.
pub fn quadratize(polys: &[SparsePoly], vars: &mut VarTable) -> Quadratization {
    if polys.iter().all(|p| p.total_degree() <= 2) {
        return Quadratization {
            squaring: Vec::new(),
            products: Vec::new(),
            rewritten: polys.to_vec(),
            new_vars: Vec::new(),
        };
    }
    let template = &polys[0];
    let ring = template.ring().clone();

    let all: BTreeSet<VarId> = polys.iter().flat_map(|p| p.vars()).collect();
    let mut squaring = Vec::new();
    let mut new_vars = Vec::new();
    // factor(i, ν) for ν ≥ 1
    let mut ups: HashMap<(VarId, u32), VarId> = HashMap::new();
    let mut defs: HashMap<VarId, Monomial> = HashMap::new();
    for &x in &all {
        defs.insert(x, Monomial::var(x));
        let d = polys.iter().map(|p| p.degree_in(x)).max().unwrap_or(0);
        if d < 2 {
            continue;
        }
        let levels = 31 - d.leading_zeros();
        let mut prev = x;
        for j in 1..=levels {
            let u = vars.fresh(&format!("u[{},{}]", vars.name(x), j));
            squaring.push(chain_eq(u, prev, prev, template));
            let def = Monomial::from_pairs([(x, 1u32 << j)]);
            defs.insert(u, def.clone());
            new_vars.push(ChainVar { id: u, kind: ChainKind::Square { var: x, level: j }, definition: def });
            ups.insert((x, j), u);
            prev = u;
        }
    }

    let mut products = Vec::new();
    let mut cache: BTreeMap<Monomial, Monomial> = BTreeMap::new();
    let mut counter = 0usize;
    let mut rewritten = Vec::with_capacity(polys.len());
    for p in polys {
        let mut out = SparsePoly::zero(&ring);
        for (m, c) in p.terms() {
            if let Some(r) = cache.get(m) {
                out.add_term(r.clone(), c.clone());
                continue;
            }
            let mut factors = Vec::new();
            for &(x, e) in m.pairs() {
                for nu in 0..32 {
                    if e >> nu & 1 == 1 {
                        factors.push(if nu == 0 { x } else { ups[&(x, nu)] });
                    }
                }
            }
            let repl = match factors.len() {
                0 => Monomial::one(),
                1 => Monomial::var(factors[0]),
                2 => Monomial::product(factors.iter().copied()),
                l => {
                    let mut prev = factors[0];
                    let mut prev_def = defs[&factors[0]].clone();
                    for &next in &factors[1..l - 1] {
                        counter += 1;
                        let v = vars.fresh(&format!("v[{counter}]"));
                        products.push(chain_eq(v, prev, next, template));
                        let def = prev_def.mul(&defs[&next]);
                        defs.insert(v, def.clone());
                        new_vars.push(ChainVar { id: v, kind: ChainKind::Product, definition: def.clone() });
                        prev = v;
                        prev_def = def;
                    }
                    Monomial::product([prev, factors[l - 1]])
                }
            };
            cache.insert(m.clone(), repl.clone());
            out.add_term(repl, c.clone());
        }
        rewritten.push(out);
    }
    Quadratization { squaring, products, rewritten, new_vars }
}
