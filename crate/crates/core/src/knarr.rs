//! The Knarr model K(O) of a flock generalised quadrangle, and exhaustive
//! verification of the quadrangle axioms on any finite incidence structure.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blt::BltSet;
use crate::error::{Error, Result};
use crate::field::GaloisField;
use crate::par;
use crate::polar::{ReflexiveForm, SymplecticSpace};
use crate::projspace::{self, rank, PointIndex, Subspace, Vector};

/// Type tags for the elements of a Knarr model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    /// Point of PG(5,q) off the perp of the base point.
    I,
    /// Line in an element of O, not through the base point.
    II,
    /// The base point.
    III,
    /// Totally isotropic plane off the base point meeting some element of O in a line.
    A,
    /// Element of O.
    B,
    Unlabelled,
}

/// A finite point-line incidence structure with sorted incidence lists both ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenQuadrangle {
    pub q: usize,
    pub point_kinds: Vec<Kind>,
    pub line_kinds: Vec<Kind>,
    line_points: Vec<Vec<u32>>,
    point_lines: Vec<Vec<u32>>,
}

impl GenQuadrangle {
    pub fn new(q: usize, num_points: usize, mut line_points: Vec<Vec<u32>>) -> Result<Self> {
        let mut point_lines = vec![Vec::new(); num_points];
        for (l, pts) in line_points.iter_mut().enumerate() {
            pts.sort_unstable();
            pts.dedup();
            for &p in pts.iter() {
                let slot = point_lines
                    .get_mut(p as usize)
                    .ok_or_else(|| Error::Precondition(format!("line {l} lists unknown point {p}")))?;
                slot.push(l as u32);
            }
        }
        Ok(GenQuadrangle {
            q,
            point_kinds: vec![Kind::Unlabelled; num_points],
            line_kinds: vec![Kind::Unlabelled; line_points.len()],
            line_points,
            point_lines,
        })
    }

    pub fn num_points(&self) -> usize {
        self.point_lines.len()
    }

    pub fn num_lines(&self) -> usize {
        self.line_points.len()
    }

    pub fn points_on(&self, line: u32) -> &[u32] {
        &self.line_points[line as usize]
    }

    pub fn lines_on(&self, point: u32) -> &[u32] {
        &self.point_lines[point as usize]
    }

    pub fn incident(&self, point: u32, line: u32) -> bool {
        self.line_points[line as usize].binary_search(&point).is_ok()
    }

    pub fn collinear(&self, a: u32, b: u32) -> bool {
        let (x, y) = (self.lines_on(a), self.lines_on(b));
        let (mut i, mut j) = (0, 0);
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// `(s, t)` read from the first line and the first point.
    pub fn order(&self) -> (usize, usize) {
        let s = self.line_points.first().map_or(0, |l| l.len().saturating_sub(1));
        let t = self.point_lines.first().map_or(0, |p| p.len().saturating_sub(1));
        (s, t)
    }

    /// Swaps points and lines.
    pub fn dualize(&self) -> GenQuadrangle {
        GenQuadrangle {
            q: self.q,
            point_kinds: self.line_kinds.clone(),
            line_kinds: self.point_kinds.clone(),
            line_points: self.point_lines.clone(),
            point_lines: self.line_points.clone(),
        }
    }

    /// A copy with one line removed (for negative tests and tooling).
    pub fn without_line(&self, line: u32) -> GenQuadrangle {
        let lines: Vec<Vec<u32>> = self
            .line_points
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != line as usize)
            .map(|(_, p)| p.clone())
            .collect();
        let mut g = GenQuadrangle::new(self.q, self.num_points(), lines).expect("ids unchanged");
        g.point_kinds = self.point_kinds.clone();
        g.line_kinds = self
            .line_kinds
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != line as usize)
            .map(|(_, k)| *k)
            .collect();
        g
    }

    /// Header `gq q <q> points <np> lines <nl>`, then one line of point IDs per GQ line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "gq q {} points {} lines {}", self.q, self.num_points(), self.num_lines());
        for pts in &self.line_points {
            let ids: Vec<String> = pts.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", ids.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<GenQuadrangle> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty GQ file".into()))?;
        let tok: Vec<&str> = header.split_whitespace().collect();
        if tok.len() != 7 || tok[0] != "gq" || tok[1] != "q" || tok[3] != "points" || tok[5] != "lines" {
            return Err(Error::Parse(format!("bad GQ header: {header}")));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad integer {s}")));
        let (q, np, nl) = (num(tok[2])?, num(tok[4])?, num(tok[6])?);
        let line_points = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|x| x.parse::<u32>().map_err(|_| Error::Parse(format!("bad point id {x}"))))
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if line_points.len() != nl {
            return Err(Error::Parse(format!("header promises {nl} lines, found {}", line_points.len())));
        }
        GenQuadrangle::new(q, np, line_points).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Result of [`gq_verify`]; `violations` holds at most a handful of witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GqReport {
    pub order: (usize, usize),
    pub points: usize,
    pub lines: usize,
    pub checked_pairs: usize,
    pub violations: Vec<String>,
    pub violation_count: usize,
}

impl GqReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

const MAX_WITNESSES: usize = 8;

/// Exhaustive check of line sizes, point degrees, at most one line on two
/// points, and the unique-collinear-point axiom for every non-incident pair.
///
/// For each point X the lines through X are walked, then the other points on
/// them, then the lines through those: every line missing X must be reached
/// exactly once.
pub fn gq_verify(g: &GenQuadrangle) -> GqReport {
    let (s, t) = g.order();
    let nl = g.num_lines();
    let mut violations = Vec::new();
    for (l, pts) in g.line_points.iter().enumerate() {
        if pts.len() != s + 1 {
            violations.push(format!("line {l} has {} points, expected {}", pts.len(), s + 1));
        }
    }
    for (p, ls) in g.point_lines.iter().enumerate() {
        if ls.len() != t + 1 {
            violations.push(format!("point {p} is on {} lines, expected {}", ls.len(), t + 1));
        }
    }
    let per_point = par::map_range(g.num_points(), |x| {
        let x = x as u32;
        let mut hits = vec![0u32; nl];
        let mut seen = HashMap::new();
        let mut bad = Vec::new();
        for &l in g.lines_on(x) {
            for &y in g.points_on(l) {
                if y == x {
                    continue;
                }
                if let Some(prev) = seen.insert(y, l) {
                    bad.push(format!("points {x} and {y} share lines {prev} and {l}"));
                }
                for &m in g.lines_on(y) {
                    if m != l {
                        hits[m as usize] += 1;
                    }
                }
            }
        }
        let mut pairs = 0usize;
        for (m, &h) in hits.iter().enumerate() {
            if g.incident(x, m as u32) {
                continue;
            }
            pairs += 1;
            if h != 1 {
                bad.push(format!("point {x} is collinear with {h} points of line {m}"));
            }
        }
        (pairs, bad)
    });
    let mut checked_pairs = 0;
    let mut count = violations.len();
    for (pairs, bad) in per_point {
        checked_pairs += pairs;
        count += bad.len();
        violations.extend(bad);
    }
    violations.truncate(MAX_WITNESSES);
    GqReport {
        order: (s, t),
        points: g.num_points(),
        lines: nl,
        checked_pairs,
        violations,
        violation_count: count,
    }
}

/// The unique-collinear-point axiom on `samples` random non-incident pairs.
pub fn gq_verify_sampled(g: &GenQuadrangle, samples: usize, seed: u64) -> GqReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (np, nl) = (g.num_points(), g.num_lines());
    let mut pairs = Vec::with_capacity(samples);
    while pairs.len() < samples && np > 0 && nl > 0 {
        let x = rng.random_range(0..np) as u32;
        let m = rng.random_range(0..nl) as u32;
        if !g.incident(x, m) {
            pairs.push((x, m));
        }
    }
    let bad: Vec<Option<String>> = par::map_slice(&pairs, |&(x, m)| {
        let c = g.points_on(m).iter().filter(|&&y| g.collinear(x, y)).count();
        (c != 1).then(|| format!("point {x} is collinear with {c} points of line {m}"))
    });
    let violations: Vec<String> = bad.into_iter().flatten().collect();
    GqReport {
        order: g.order(),
        points: np,
        lines: nl,
        checked_pairs: pairs.len(),
        violation_count: violations.len(),
        violations: violations.into_iter().take(MAX_WITNESSES).collect(),
    }
}

/// K(O): W(5,q), a base point P, the q+1 planes O on P, and the incidence
/// structure with back-references to the underlying subspaces.
#[derive(Clone, Debug)]
pub struct KnarrModel {
    pub space: SymplecticSpace,
    pub base: Subspace,
    pub o: Vec<Subspace>,
    pub gq: GenQuadrangle,
    pub points: Vec<Subspace>,
    pub lines: Vec<Subspace>,
    point_ids: HashMap<Subspace, u32>,
    line_ids: HashMap<Subspace, u32>,
    /// For type (a) lines and type (ii) points, the index into `o` of the plane they meet in a line.
    o_of_line: Vec<Option<usize>>,
    o_of_point: Vec<Option<usize>>,
}

/// Lifts the lines of `blt` to planes on `point` through the quotient at `point`.
pub fn lift_blt(blt: &BltSet, w5: &SymplecticSpace, point: &Subspace) -> Result<Vec<Subspace>> {
    let quo = w5.quotient(point)?;
    if quo.space != blt.space {
        return Err(Error::Precondition(
            "quotient form differs from the BLT-set's form; standardize first".into(),
        ));
    }
    blt.lines.iter().map(|l| quo.lift(l)).collect()
}

/// Base point `<e1>` of the default W(5,q).
pub fn default_base(f: &GaloisField) -> Subspace {
    let mut v = vec![f.zero(); 6];
    v[0] = f.one();
    Subspace::point(f, &v).expect("nonzero")
}

impl KnarrModel {
    /// K(O) for a BLT-set on the default W(3,q) form, with P = <e1>.
    pub fn from_blt(blt: &BltSet) -> Result<KnarrModel> {
        let f = blt.field();
        let w5 = SymplecticSpace::new(f, 6)?;
        let p = default_base(f);
        let o = lift_blt(blt, &w5, &p)?;
        knarr_build(&w5, &p, &o)
    }

    pub fn field(&self) -> &GaloisField {
        self.space.field()
    }

    pub fn point_id(&self, s: &Subspace) -> Option<u32> {
        self.point_ids.get(s).copied()
    }

    pub fn line_id(&self, s: &Subspace) -> Option<u32> {
        self.line_ids.get(s).copied()
    }

    /// Index into `o` of the element a type-(a)/(b) line meets in a line.
    pub fn o_of_line(&self, id: u32) -> Option<usize> {
        self.o_of_line[id as usize]
    }

    /// Index into `o` of the element containing a type-(ii) point.
    pub fn o_of_point(&self, id: u32) -> Option<usize> {
        self.o_of_point[id as usize]
    }

    pub fn ids_of_kind_points(&self, k: Kind) -> impl Iterator<Item = u32> + '_ {
        (0..self.points.len() as u32).filter(move |&i| self.gq.point_kinds[i as usize] == k)
    }

    pub fn ids_of_kind_lines(&self, k: Kind) -> impl Iterator<Item = u32> + '_ {
        (0..self.lines.len() as u32).filter(move |&i| self.gq.line_kinds[i as usize] == k)
    }
}

/// Builds the incidence structure of K(O). IDs follow the kinds (i), (ii),
/// (iii) and (a), (b), each block sorted by subspace.
pub fn knarr_build(w5: &SymplecticSpace, p: &Subspace, o: &[Subspace]) -> Result<KnarrModel> {
    let f = w5.field().clone();
    let q = f.order();
    if w5.dim() != 6 {
        return Err(Error::Dimension("Knarr model lives in W(5,q)".into()));
    }
    if o.len() != q + 1 {
        return Err(Error::Precondition(format!("O must have {} planes", q + 1)));
    }
    for pi in o {
        if pi.dim() != 3 || !pi.contains(&f, p) || !w5.is_totally_isotropic(pi) {
            return Err(Error::Precondition(format!("{pi:?} is not a t.i. plane on P")));
        }
    }
    let pperp = w5.perp(p);
    let pv = p.point_vector().to_vec();

    let type_i: Vec<Subspace> = projspace::all_points(&f, 6)
        .into_iter()
        .filter(|x| !w5.form(x.point_vector(), &pv).is_zero())
        .collect();
    let mut type_ii: Vec<(Subspace, usize)> = Vec::new();
    for (k, pi) in o.iter().enumerate() {
        for l in projspace::enumerate_in(&f, pi, 2) {
            if !l.contains(&f, p) {
                type_ii.push((l, k));
            }
        }
    }
    type_ii.sort();
    for w in type_ii.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::Precondition("elements of O share a line".into()));
        }
    }

    let mut points = type_i.clone();
    points.extend(type_ii.iter().map(|(l, _)| l.clone()));
    points.push(p.clone());
    let n_i = type_i.len();
    let p_id = (points.len() - 1) as u32;

    let all_index = PointIndex::new(&f, 6, type_i.iter().map(|x| x.point_vector()));

    // Type (a): for each type (ii) line m, the t.i. planes through m in m^perp other than its O element.
    let per_m = par::map_slice(&type_ii, |(m, k)| -> Result<Vec<(Subspace, u32, usize)>> {
        let mid = (n_i + type_ii.binary_search_by(|(l, _)| l.cmp(m)).expect("present")) as u32;
        let planes = planes_on_line(&f, w5, m)?;
        Ok(planes
            .into_iter()
            .filter(|s| !s.contains(&f, p))
            .map(|s| (s, mid, *k))
            .collect())
    });
    let mut type_a = Vec::new();
    for r in per_m {
        type_a.extend(r?);
    }
    type_a.sort();
    let mut o_sorted: Vec<(Subspace, usize)> = o.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    o_sorted.sort();

    let mut line_points: Vec<Vec<u32>> = par::map_slice(&type_a, |(sigma, mid, _)| {
        let mut ids: Vec<u32> = sigma
            .points(&f)
            .iter()
            .filter(|x| !pperp.contains(&f, x))
            .map(|x| all_index.get(&f, x.point_vector()).expect("type (i) point"))
            .collect();
        ids.push(*mid);
        ids
    });
    for (pi, _) in &o_sorted {
        let mut ids = vec![p_id];
        ids.extend(
            type_ii
                .iter()
                .enumerate()
                .filter(|(_, (l, _))| pi.contains(&f, l))
                .map(|(j, _)| (n_i + j) as u32),
        );
        line_points.push(ids);
    }

    let mut gq = GenQuadrangle::new(q, points.len(), line_points)?;
    gq.point_kinds = (0..points.len())
        .map(|i| match i {
            i if i < n_i => Kind::I,
            i if i as u32 == p_id => Kind::III,
            _ => Kind::II,
        })
        .collect();
    gq.line_kinds = type_a
        .iter()
        .map(|_| Kind::A)
        .chain(o_sorted.iter().map(|_| Kind::B))
        .collect();

    let mut o_of_point = vec![None; points.len()];
    for (j, (_, k)) in type_ii.iter().enumerate() {
        o_of_point[n_i + j] = Some(*k);
    }
    let o_of_line: Vec<Option<usize>> = type_a
        .iter()
        .map(|(_, _, k)| Some(*k))
        .chain(o_sorted.iter().map(|(_, i)| Some(*i)))
        .collect();
    let lines: Vec<Subspace> = type_a
        .into_iter()
        .map(|(s, _, _)| s)
        .chain(o_sorted.into_iter().map(|(s, _)| s))
        .collect();
    let point_ids = points.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
    let line_ids = lines.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
    Ok(KnarrModel {
        space: w5.clone(),
        base: p.clone(),
        o: o.to_vec(),
        gq,
        points,
        lines,
        point_ids,
        line_ids,
        o_of_line,
        o_of_point,
    })
}

/// The q+1 totally isotropic planes through a t.i. line `m` of W(5,q).
pub fn planes_on_line(f: &GaloisField, w5: &SymplecticSpace, m: &Subspace) -> Result<Vec<Subspace>> {
    if m.dim() != 2 || !w5.is_totally_isotropic(m) {
        return Err(Error::Precondition(format!("{m:?} is not a t.i. line")));
    }
    let mperp = w5.perp(m);
    let mut base: Vec<Vector> = m.basis();
    let mut extra = Vec::new();
    for r in mperp.rows() {
        let mut trial = base.clone();
        trial.push(r.to_vec());
        if rank(f, &trial) > base.len() {
            base = trial;
            extra.push(r.to_vec());
        }
    }
    debug_assert_eq!(extra.len(), 2);
    let (u, v) = (&extra[0], &extra[1]);
    let mut out = vec![m.join_vector(f, v)];
    for c in f.elements() {
        out.push(m.join_vector(f, &projspace::axpy(f, c, v, u)));
    }
    out.sort();
    Ok(out)
}
