//! Graphs from hemisystems: strongly regular certification, the partial
//! quadrangle axioms, exact eigenspace tests, and graph6.

use std::collections::BTreeSet;

use petgraph::graph::UnGraph;
use petgraph::graph6::{from_graph6_representation, ToGraph6};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::knarr::GenQuadrangle;
use crate::par;

/// Simple undirected graph with sorted neighbour lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            if a == b {
                return Err(Error::Precondition(format!("loop at vertex {a}")));
            }
            if a as usize >= n || b as usize >= n {
                return Err(Error::Precondition(format!("edge ({a},{b}) out of range")));
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbours(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn adjacent(&self, a: u32, b: u32) -> bool {
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_symmetric(&self) -> bool {
        self.adj
            .iter()
            .enumerate()
            .all(|(a, l)| l.iter().all(|&b| b as usize != a && self.adjacent(b, a as u32)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, l)| l.iter().filter(move |&&b| b as usize > a).map(move |&b| (a as u32, b)))
    }

    pub fn to_graph6(&self) -> String {
        let mut g = UnGraph::<(), ()>::with_capacity(self.order(), self.edge_count());
        for _ in 0..self.order() {
            g.add_node(());
        }
        g.extend_with_edges(self.edges());
        g.graph6_string()
    }

    pub fn from_graph6(text: &str) -> Result<Graph> {
        let s = text.trim();
        let bytes = s.as_bytes();
        if bytes.is_empty() || bytes.iter().any(|&b| !(63..=126).contains(&b)) {
            return Err(Error::Parse("graph6 text must be printable bytes 63..126".into()));
        }
        let (n, header) = if bytes[0] == 126 {
            if bytes.len() < 4 || bytes[1] == 126 {
                return Err(Error::Parse("unsupported graph6 size prefix".into()));
            }
            let n = bytes[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, 4)
        } else {
            ((bytes[0] - 63) as usize, 1)
        };
        let body = (n * n.saturating_sub(1) / 2).div_ceil(6);
        if bytes.len() != header + body {
            return Err(Error::Parse(format!("graph6 length {} does not match order {n}", bytes.len())));
        }
        let (n, edges) = from_graph6_representation::<u32>(s.to_string());
        Graph::from_edges(n, edges)
    }

    /// Graph on the complementary edge set.
    pub fn complement(&self) -> Graph {
        let n = self.order() as u32;
        let edges: Vec<(u32, u32)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| !self.adjacent(a, b))
            .collect();
        Graph::from_edges(n as usize, edges).expect("valid")
    }

    /// Edge list text, one `a b` pair per line.
    pub fn edge_list(&self) -> String {
        self.edges().map(|(a, b)| format!("{a} {b}\n")).collect()
    }
}

/// Members of `lines` as vertices, adjacent when the two GQ lines meet.
pub fn concurrency_graph(g: &GenQuadrangle, lines: &[u32]) -> Graph {
    let mut vertex = vec![u32::MAX; g.num_lines()];
    for (i, &l) in lines.iter().enumerate() {
        vertex[l as usize] = i as u32;
    }
    let mut edges = Vec::new();
    for p in 0..g.num_points() as u32 {
        let on: Vec<u32> = g
            .lines_on(p)
            .iter()
            .map(|&l| vertex[l as usize])
            .filter(|&v| v != u32::MAX)
            .collect();
        for (i, &a) in on.iter().enumerate() {
            for &b in &on[i + 1..] {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(lines.len(), edges).expect("distinct lines")
}

/// Collinearity graph on the points of `g`.
pub fn point_graph(g: &GenQuadrangle) -> Graph {
    let lists = par::map_range(g.num_points(), |p| {
        let mut nb: Vec<u32> = g
            .lines_on(p as u32)
            .iter()
            .flat_map(|&l| g.points_on(l).iter().copied())
            .filter(|&x| x as usize != p)
            .collect();
        nb.sort_unstable();
        nb.dedup();
        nb
    });
    Graph { adj: lists }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SrgParams {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl SrgParams {
    pub fn feasible(&self) -> bool {
        self.k * (self.k.wrapping_sub(self.lambda).wrapping_sub(1)) == (self.v - self.k - 1) * self.mu
    }

    /// Point graph of a partial quadrangle PQ(s, t, mu).
    pub fn of_partial_quadrangle(s: usize, t: usize, mu: usize) -> SrgParams {
        SrgParams {
            v: 1 + s * (t + 1) * (mu + s * t) / mu,
            k: s * (t + 1),
            lambda: s - 1,
            mu,
        }
    }

    /// The partial quadrangle PQ((q-1)/2, q^2, (q-1)^2/2) of a hemisystem.
    pub fn of_hemisystem(q: usize) -> SrgParams {
        Self::of_partial_quadrangle((q - 1) / 2, q * q, (q - 1) * (q - 1) / 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SrgFailure {
    TooSmall,
    Complete,
    Empty,
    NotRegular { vertex: u32, degree: usize, expected: usize },
    /// A pair whose common-neighbour count differs from the first pair of its kind.
    Pair { a: u32, b: u32, adjacent: bool, common: usize, expected: usize },
}

/// Checks `A^2 = kI + lambda A + mu (J - I - A)` entrywise, through bitset
/// common-neighbour counts. Complete and empty graphs are rejected.
pub fn srg_check(g: &Graph) -> std::result::Result<SrgParams, SrgFailure> {
    let n = g.order();
    if n < 2 {
        return Err(SrgFailure::TooSmall);
    }
    let k = g.neighbours(0).len();
    if let Some(v) = (0..n as u32).find(|&v| g.neighbours(v).len() != k) {
        return Err(SrgFailure::NotRegular {
            vertex: v,
            degree: g.neighbours(v).len(),
            expected: k,
        });
    }
    if k == 0 {
        return Err(SrgFailure::Empty);
    }
    if k == n - 1 {
        return Err(SrgFailure::Complete);
    }
    let words = n.div_ceil(64);
    let rows: Vec<Vec<u64>> = (0..n as u32)
        .map(|v| {
            let mut r = vec![0u64; words];
            for &u in g.neighbours(v) {
                r[u as usize / 64] |= 1 << (u % 64);
            }
            r
        })
        .collect();
    let common = |a: usize, b: usize| -> usize {
        rows[a].iter().zip(&rows[b]).map(|(x, y)| (x & y).count_ones() as usize).sum()
    };
    let first_adj = g.neighbours(0)[0] as usize;
    let first_non = (1..n).find(|&b| !g.adjacent(0, b as u32)).expect("not complete");
    let lambda = common(0, first_adj);
    let mu = common(0, first_non);
    let bad = par::find_first(n, |a| {
        (a + 1..n).find_map(|b| {
            let adjacent = g.adjacent(a as u32, b as u32);
            let expected = if adjacent { lambda } else { mu };
            let c = common(a, b);
            (c != expected).then_some(SrgFailure::Pair {
                a: a as u32,
                b: b as u32,
                adjacent,
                common: c,
                expected,
            })
        })
    });
    match bad {
        Some(f) => Err(f),
        None => Ok(SrgParams { v: n, k, lambda, mu }),
    }
}

/// The partial quadrangle whose points are the members of `lines` and whose
/// lines are the points of `g`, checked on the incidence structure itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PqReport {
    /// Distinct sizes of the PQ lines (GQ points, counted in the set).
    pub line_sizes: BTreeSet<usize>,
    /// Distinct numbers of PQ lines through a PQ point.
    pub point_degrees: BTreeSet<usize>,
    /// Largest number of GQ points shared by two members.
    pub max_common_points: usize,
    /// Pairwise concurrent member triples without a common point.
    pub triangles: usize,
    pub mu_values: BTreeSet<usize>,
}

impl PqReport {
    pub fn is_pq(&self, s: usize, t: usize, mu: usize) -> bool {
        self.line_sizes == BTreeSet::from([s + 1])
            && self.point_degrees == BTreeSet::from([t + 1])
            && self.max_common_points <= 1
            && self.triangles == 0
            && self.mu_values == BTreeSet::from([mu])
    }
}

pub fn pq_check(g: &GenQuadrangle, lines: &[u32]) -> PqReport {
    let n = lines.len();
    let mut vertex = vec![u32::MAX; g.num_lines()];
    for (i, &l) in lines.iter().enumerate() {
        vertex[l as usize] = i as u32;
    }
    let pq_lines: Vec<Vec<u32>> = (0..g.num_points() as u32)
        .map(|p| {
            g.lines_on(p)
                .iter()
                .map(|&l| vertex[l as usize])
                .filter(|&v| v != u32::MAX)
                .collect()
        })
        .collect();
    let line_sizes = pq_lines.iter().map(Vec::len).collect();
    let point_degrees = lines.iter().map(|&l| g.points_on(l).len()).collect();

    let words = n.div_ceil(64);
    let mut rows = vec![vec![0u64; words]; n];
    let mut shared = vec![0u8; n * n];
    for on in &pq_lines {
        for &a in on {
            for &b in on {
                if a != b {
                    rows[a as usize][b as usize / 64] |= 1 << (b % 64);
                    shared[a as usize * n + b as usize] += 1;
                }
            }
        }
    }
    let stats = par::map_range(n, |a| {
        let mut max_common = 0usize;
        let mut triangles = 0usize;
        let mut mu = BTreeSet::new();
        for b in a + 1..n {
            let c = shared[a * n + b] as usize;
            max_common = max_common.max(c);
            let common: usize = rows[a]
                .iter()
                .zip(&rows[b])
                .map(|(x, y)| (x & y).count_ones() as usize)
                .sum();
            if c == 0 {
                mu.insert(common);
            } else if c == 1 {
                // Common neighbours through the meeting point are not triangles.
                let p = g
                    .points_on(lines[a])
                    .iter()
                    .find(|p| g.points_on(lines[b]).binary_search(p).is_ok())
                    .expect("meeting point");
                triangles += common - (pq_lines[*p as usize].len() - 2);
            }
        }
        (max_common, triangles, mu)
    });
    let mut rep = PqReport {
        line_sizes,
        point_degrees,
        max_common_points: 0,
        triangles: 0,
        mu_values: BTreeSet::new(),
    };
    for (m, t, u) in stats {
        rep.max_common_points = rep.max_common_points.max(m);
        // Each triangle is seen from each of its three edges.
        rep.triangles += t;
        rep.mu_values.extend(u);
    }
    rep.triangles /= 3;
    rep
}

/// Integer weight per vertex.
pub type PointFunction = Vec<i64>;

pub fn indicator(n: usize, members: &[u32]) -> PointFunction {
    let mut f = vec![0; n];
    for &m in members {
        f[m as usize] = 1;
    }
    f
}

fn apply(g: &Graph, f: &[i64]) -> Vec<i64> {
    par::map_range(g.order(), |v| g.neighbours(v as u32).iter().map(|&u| f[u as usize]).sum())
}

/// `(A - c I) f`.
fn shifted(g: &Graph, f: &[i64], c: i64) -> Vec<i64> {
    apply(g, f).iter().zip(f).map(|(a, x)| a - c * x).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    /// In V0 (+) V+ only.
    V0Plus,
    /// In V0 (+) V- only.
    V0Minus,
    /// In V0, the span of the all-one vector.
    Both,
    Neither,
}

/// Exact annihilator test on the point graph of a GQ of order (s, s^2),
/// whose eigenvalues are s(s^2+1), s-1 and -s^2-1.
pub fn eigenspace_membership(f: &[i64], g: &Graph, s: i64) -> Result<Membership> {
    if f.len() != g.order() {
        return Err(Error::Dimension(format!("function on {} points, graph on {}", f.len(), g.order())));
    }
    let k = s * (s * s + 1);
    let base = shifted(g, f, k);
    let minus = shifted(g, &base, -(s * s + 1)).iter().all(|&x| x == 0);
    let plus = shifted(g, &base, s - 1).iter().all(|&x| x == 0);
    Ok(match (plus, minus) {
        (true, true) => Membership::Both,
        (true, false) => Membership::V0Plus,
        (false, true) => Membership::V0Minus,
        (false, false) => Membership::Neither,
    })
}

/// Points collinear with every point of `pts` (excluding those points).
pub fn common_perp(g: &Graph, pts: &[u32]) -> Vec<u32> {
    let Some((&first, rest)) = pts.split_first() else {
        return Vec::new();
    };
    g.neighbours(first)
        .iter()
        .copied()
        .filter(|v| rest.iter().all(|&x| g.adjacent(x, *v)) && !pts.contains(v))
        .collect()
}

/// `T = {x,y}^perp + s x + s y` for non-collinear `x`, `y`.
pub fn tight_set(g: &Graph, x: u32, y: u32, s: i64) -> Result<PointFunction> {
    if x == y || g.adjacent(x, y) {
        return Err(Error::Precondition("tight set needs two non-collinear points".into()));
    }
    let mut t = indicator(g.order(), &common_perp(g, &[x, y]));
    t[x as usize] += s;
    t[y as usize] += s;
    Ok(t)
}

/// Verifies `A T = (s+1) j + (s-1) T` exactly.
pub fn tight_set_eigen_check(x: u32, y: u32, g: &Graph, s: i64) -> Result<bool> {
    let t = tight_set(g, x, y, s)?;
    let at = apply(g, &t);
    Ok(at.iter().zip(&t).all(|(a, v)| *a == (s + 1) + (s - 1) * v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InnerProduct {
    pub dot: i64,
    pub size_t: i64,
    pub size_h: i64,
    pub points: i64,
    /// `dot * |P| == |t| |h|`.
    pub holds: bool,
}

/// `t . h = |t| |h| / |P|` for `t` in V0 (+) V+ and `h` in V0 (+) V-; both
/// memberships are checked first.
pub fn inner_product_check(t: &[i64], h: &[i64], g: &Graph, s: i64) -> Result<InnerProduct> {
    let mt = eigenspace_membership(t, g, s)?;
    let mh = eigenspace_membership(h, g, s)?;
    if !matches!(mt, Membership::V0Plus | Membership::Both) || !matches!(mh, Membership::V0Minus | Membership::Both) {
        return Err(Error::Precondition(format!("memberships {mt:?} / {mh:?} do not fit")));
    }
    let dot: i64 = t.iter().zip(h).map(|(a, b)| a * b).sum();
    let size_t: i64 = t.iter().sum();
    let size_h: i64 = h.iter().sum();
    let points = g.order() as i64;
    Ok(InnerProduct {
        dot,
        size_t,
        size_h,
        points,
        holds: dot * points == size_t * size_h,
    })
}
