//! Lattice-point enumeration in dilated polytopes: bounding-box scan over
//! the leading coordinates, with the last coordinate solved as an interval.

use super::polytope::RationalPolytope;
use crate::par;
use crate::rational::{ceil_i64, floor_i64, q};

#[derive(Debug, Clone)]
pub struct LatticeRegion {
    dim: usize,
    normals: Vec<Vec<i64>>,
    bounds: Vec<i64>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    empty: bool,
}

fn div_floor(a: i64, b: i64) -> i64 {
    let (a, b) = (a as i128, b as i128);
    let d = a / b;
    (if (a % b != 0) && ((a < 0) != (b < 0)) {
        d - 1
    } else {
        d
    }) as i64
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

impl LatticeRegion {
    /// Integer points of `scale * p`.
    pub fn new(p: &RationalPolytope, scale: i64) -> Self {
        let dim = p.dim();
        if p.is_empty() || scale <= 0 {
            return Self {
                dim,
                normals: Vec::new(),
                bounds: Vec::new(),
                lo: vec![0; dim],
                hi: vec![-1; dim],
                empty: p.is_empty() || scale < 0,
            };
        }
        let s = q(scale);
        let normals = p.inequalities().iter().map(|h| h.normal.clone()).collect();
        let bounds = p
            .inequalities()
            .iter()
            .map(|h| ceil_i64(&(&h.offset * &s)))
            .collect();
        let mut lo = vec![i64::MAX; dim];
        let mut hi = vec![i64::MIN; dim];
        for v in p.vertices() {
            for j in 0..dim {
                let x = &v[j] * &s;
                lo[j] = lo[j].min(floor_i64(&x));
                hi[j] = hi[j].max(ceil_i64(&x));
            }
        }
        Self {
            dim,
            normals,
            bounds,
            lo,
            hi,
            empty: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Admissible range of the last coordinate given the others.
    fn last_interval(&self, prefix: &[i64]) -> Option<(i64, i64)> {
        let last = self.dim - 1;
        let (mut lo, mut hi) = (self.lo[last], self.hi[last]);
        for (n, &b) in self.normals.iter().zip(&self.bounds) {
            let partial: i64 = n[..last].iter().zip(prefix).map(|(a, x)| a * x).sum();
            let rest = b - partial;
            let c = n[last];
            if c > 0 {
                lo = lo.max(div_ceil(rest, c));
            } else if c < 0 {
                hi = hi.min(div_floor(rest, c));
            } else if rest > 0 {
                return None;
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn walk<F: FnMut(&[i64])>(&self, prefix: &mut Vec<i64>, f: &mut F) {
        if prefix.len() == self.dim - 1 {
            if let Some((lo, hi)) = self.last_interval(prefix) {
                for x in lo..=hi {
                    prefix.push(x);
                    f(prefix);
                    prefix.pop();
                }
            }
            return;
        }
        let j = prefix.len();
        for x in self.lo[j]..=self.hi[j] {
            prefix.push(x);
            self.walk(prefix, f);
            prefix.pop();
        }
    }

    /// Fold each first-coordinate slab independently, slabs in order.
    fn per_slab<R, F>(&self, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(&mut dyn FnMut(&mut dyn FnMut(&[i64]))) -> R + Sync + Send,
    {
        if self.empty || self.dim == 0 {
            return Vec::new();
        }
        if self.dim == 1 {
            return vec![f(&mut |g| self.walk(&mut Vec::new(), &mut |p| g(p)))];
        }
        par::map_range(self.lo[0]..self.hi[0] + 1, |x0| {
            f(&mut |g| {
                let mut prefix = vec![x0];
                self.walk(&mut prefix, &mut |p| g(p));
            })
        })
    }

    /// All points, lexicographically ordered.
    pub fn points(&self) -> Vec<Vec<i64>> {
        self.filter(|_| true)
    }

    pub fn filter<P: Fn(&[i64]) -> bool + Sync + Send>(&self, pred: P) -> Vec<Vec<i64>> {
        self.per_slab(|visit| {
            let mut out = Vec::new();
            visit(&mut |p| {
                if pred(p) {
                    out.push(p.to_vec());
                }
            });
            out
        })
        .into_iter()
        .flatten()
        .collect()
    }

    pub fn count(&self) -> u64 {
        if self.empty || self.dim == 0 {
            return 0;
        }
        // The innermost interval length is summed directly.
        self.per_slab(|visit| {
            let mut c = 0u64;
            visit(&mut |_| c += 1);
            c
        })
        .into_iter()
        .sum()
    }

    pub fn count_where<P: Fn(&[i64]) -> bool + Sync + Send>(&self, pred: P) -> u64 {
        self.sum_map(|p| u64::from(pred(p)))
    }

    pub fn sum_map<M: Fn(&[i64]) -> u64 + Sync + Send>(&self, m: M) -> u64 {
        self.per_slab(|visit| {
            let mut c = 0u64;
            visit(&mut |p| c += m(p));
            c
        })
        .into_iter()
        .sum()
    }
}
