//! Seed mutation with principal coefficients, used to check expansions independently of any
//! matching.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expand::{self, Options};
use crate::lpoly::{LPoly, Monomial};
use crate::surface::{TaggedArcSpec, Triangulation};

pub const DEFAULT_DEPTH: usize = 12;

/// Cluster and extended exchange matrix (`2n` rows, `n` columns; the lower half tracks
/// coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub cluster: Vec<LPoly>,
    pub ext: Vec<Vec<i64>>,
}

impl Seed {
    /// Initial seed with principal coefficients for a skew-symmetric matrix.
    pub fn principal(b: &[Vec<i64>]) -> Result<Seed> {
        let n = b.len();
        if b.iter().any(|r| r.len() != n) {
            return Err(Error::Check("exchange matrix is not square".into()));
        }
        if (0..n).any(|i| (0..n).any(|j| b[i][j] != -b[j][i])) {
            return Err(Error::Check("exchange matrix is not skew-symmetric".into()));
        }
        let mut ext = b.to_vec();
        for i in 0..n {
            let mut row = vec![0; n];
            row[i] = 1;
            ext.push(row);
        }
        Ok(Seed {
            cluster: (1..=n).map(|i| LPoly::x(n, i)).collect(),
            ext,
        })
    }

    pub fn from_triangulation(t: &Triangulation) -> Result<Seed> {
        Seed::principal(&t.exchange_matrix())
    }

    pub fn n(&self) -> usize {
        self.cluster.len()
    }

    pub fn is_skew(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| self.ext[i][j] == -self.ext[j][i]))
    }

    /// Mutation in direction `k`, 1-based.
    pub fn mutate(&self, k: usize) -> Result<Seed> {
        let n = self.n();
        if k == 0 || k > n {
            return Err(Error::Check(format!(
                "mutation direction {k} out of 1..={n}"
            )));
        }
        let k = k - 1;
        let mut plus = LPoly::one(n);
        let mut minus = LPoly::one(n);
        for i in 0..n {
            let b = self.ext[i][k];
            if b > 0 {
                plus = &plus * &self.cluster[i].pow(b as u32);
            } else if b < 0 {
                minus = &minus * &self.cluster[i].pow((-b) as u32);
            }
        }
        let mut yp = Monomial::one(n);
        let mut ym = Monomial::one(n);
        for j in 0..n {
            let c = self.ext[n + j][k];
            if c > 0 {
                yp.yexp[j] = c;
            } else {
                ym.yexp[j] = -c;
            }
        }
        let num = &plus.mul_monomial(&yp) + &minus.mul_monomial(&ym);
        let new = num.div_exact(&self.cluster[k])?;
        if new.has_negative_y() {
            return Err(Error::Check(format!(
                "negative coefficient exponent in {new}"
            )));
        }
        let mut cluster = self.cluster.clone();
        cluster[k] = new;
        let mut ext = self.ext.clone();
        for (i, row) in ext.iter_mut().enumerate() {
            for j in 0..n {
                row[j] = if i == k || j == k {
                    -self.ext[i][j]
                } else {
                    let (bik, bkj) = (self.ext[i][k], self.ext[k][j]);
                    self.ext[i][j] + bik.signum() * (bik * bkj).max(0)
                };
            }
        }
        Ok(Seed { cluster, ext })
    }

    fn key(&self) -> Vec<String> {
        let mut v: Vec<String> = self.cluster.iter().map(|p| p.to_string()).collect();
        v.sort();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Closure {
    /// Cluster variables, sorted by canonical text.
    pub variables: Vec<LPoly>,
    pub clusters: usize,
    /// No unexplored seed remained within the depth bound.
    pub complete: bool,
    pub depth: usize,
}

impl Closure {
    pub fn contains(&self, p: &LPoly) -> bool {
        self.variables.contains(p)
    }
}

/// Breadth-first search over mutation sequences up to `max_depth` mutations.
pub fn mutation_closure(seed: &Seed, max_depth: usize) -> Result<Closure> {
    let mut vars: BTreeMap<String, LPoly> = BTreeMap::new();
    let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
    let mut queue: VecDeque<(Seed, usize)> = VecDeque::new();
    for p in &seed.cluster {
        vars.insert(p.to_string(), p.clone());
    }
    seen.insert(seed.key());
    queue.push_back((seed.clone(), 0));
    let mut complete = true;
    let mut reached = 0;
    while let Some((s, d)) = queue.pop_front() {
        reached = reached.max(d);
        for k in 1..=s.n() {
            let m = s.mutate(k)?;
            let key = m.key();
            if seen.contains(&key) {
                continue;
            }
            if d == max_depth {
                complete = false;
                continue;
            }
            for p in &m.cluster {
                vars.entry(p.to_string()).or_insert_with(|| p.clone());
            }
            seen.insert(key);
            queue.push_back((m, d + 1));
        }
    }
    Ok(Closure {
        variables: vars.into_values().collect(),
        clusters: seen.len(),
        complete,
        depth: reached,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcCheck {
    pub arc: String,
    pub value: String,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub closure_size: usize,
    pub complete: bool,
    pub arcs: Vec<ArcCheck>,
    /// Distinct expansions among the checked arcs.
    pub distinct: usize,
}

impl Verification {
    pub fn all_members(&self) -> bool {
        self.arcs.iter().all(|a| a.member)
    }
}

/// Expands each arc and looks it up in the mutation closure of the triangulation's seed.
pub fn verify_against_formula(
    t: &Triangulation,
    arcs: &[TaggedArcSpec],
    opts: &Options,
    max_depth: usize,
) -> Result<Verification> {
    let closure = mutation_closure(&Seed::from_triangulation(t)?, max_depth)?;
    let mut out = Vec::new();
    let mut distinct = BTreeSet::new();
    for (i, d) in arcs.iter().enumerate() {
        let v = expand::cluster_variable(t, d, opts)?.value;
        distinct.insert(v.to_string());
        out.push(ArcCheck {
            arc: d.name.clone().unwrap_or_else(|| format!("arc {i}")),
            value: v.to_string(),
            member: closure.contains(&v),
        });
    }
    Ok(Verification {
        closure_size: closure.variables.len(),
        complete: closure.complete,
        arcs: out,
        distinct: distinct.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Seed {
        Seed::principal(&[vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn a2_first_mutations() {
        let s = a2();
        let m1 = s.mutate(1).unwrap();
        assert_eq!(
            m1.cluster[0],
            LPoly::parse(2, "1*x1^-1*x2^1 + 1*x1^-1*y1^1").unwrap()
        );
        let m2 = m1.mutate(2).unwrap();
        let expected = LPoly::parse(2, "1*x1^-1 + 1*x1^-1*x2^-1*y1^1 + 1*x2^-1*y1^1*y2^1").unwrap();
        assert_eq!(m2.cluster[1], expected);
    }

    #[test]
    fn involution_and_skew() {
        let s = a2();
        for k in 1..=2 {
            let m = s.mutate(k).unwrap();
            assert!(m.is_skew());
            assert_eq!(m.mutate(k).unwrap(), s);
        }
        assert!(s.mutate(3).is_err());
    }

    #[test]
    fn a2_closure_has_five() {
        let c = mutation_closure(&a2(), DEFAULT_DEPTH).unwrap();
        assert!(c.complete);
        assert_eq!(c.variables.len(), 5);
        assert_eq!(c.clusters, 5);
        let zero = mutation_closure(&a2(), 0).unwrap();
        assert_eq!(zero.variables.len(), 2);
        assert!(!zero.complete);
    }

    #[test]
    fn hexagon_diagonals_are_cluster_variables() {
        let t = crate::fixtures::hexagon_fan();
        let arcs = crate::generate::walk_arcs(&t, 6);
        let v = verify_against_formula(&t, &arcs, &Options::default(), DEFAULT_DEPTH).unwrap();
        assert!(v.complete);
        assert_eq!(v.closure_size, 9);
        assert_eq!(v.distinct, 6);
        assert!(v.all_members(), "{:?}", v.arcs);
    }

    #[test]
    fn two_notched_rule_against_closure() {
        use crate::expand::PqRule;
        let t = crate::fixtures::twice_punctured_monogon();
        let d = crate::fixtures::monogon_doubly_notched();
        let closure = mutation_closure(&Seed::from_triangulation(&t).unwrap(), 6).unwrap();
        assert!(!closure.complete);
        let member = |rule| {
            let o = Options {
                pq_rule: rule,
                ..Options::default()
            };
            closure.contains(&expand::cluster_variable(&t, &d, &o).unwrap().value)
        };
        assert!(member(PqRule::Principal));
        assert!(!member(PqRule::PlusOne));
    }
}
