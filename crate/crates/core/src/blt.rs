//! BLT-sets of lines of W(3, q), traces, and the trace equivalence relation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{FieldElement, GaloisField, QuadraticExtension};
use crate::par;
use crate::polar::{ReflexiveForm, SymplecticSpace};
use crate::projspace::{self, parse_ints, PointIndex, Subspace, Vector};

/// Points and totally isotropic lines of a W(3, q), with incidence by ID.
#[derive(Clone, Debug)]
pub struct W3Geometry {
    pub space: SymplecticSpace,
    pub lines: Vec<Subspace>,
    pub points: Vec<Subspace>,
    line_points: Vec<Vec<u32>>,
    /// Lines meeting a line in exactly one point, sorted.
    meets: Vec<Vec<u32>>,
    line_id: HashMap<Subspace, u32>,
    point_index: PointIndex,
}

impl W3Geometry {
    pub fn new(space: &SymplecticSpace) -> Result<Self> {
        if space.dim() != 4 {
            return Err(Error::Dimension("W(3,q) needs a 4-dimensional space".into()));
        }
        let f = space.field().clone();
        let lines = space.enumerate_ti(2)?;
        let points = projspace::all_points(&f, 4);
        let point_index = PointIndex::new(&f, 4, points.iter().map(|p| p.point_vector()));
        let line_points: Vec<Vec<u32>> = lines
            .iter()
            .map(|l| {
                let mut ids: Vec<u32> = l
                    .points(&f)
                    .iter()
                    .map(|p| point_index.get(&f, p.point_vector()).expect("point indexed"))
                    .collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        let mut point_lines = vec![Vec::new(); points.len()];
        for (i, pts) in line_points.iter().enumerate() {
            for &p in pts {
                point_lines[p as usize].push(i as u32);
            }
        }
        let meets = line_points
            .iter()
            .enumerate()
            .map(|(i, pts)| {
                let mut m: Vec<u32> = pts
                    .iter()
                    .flat_map(|&p| point_lines[p as usize].iter().copied())
                    .filter(|&j| j as usize != i)
                    .collect();
                m.sort_unstable();
                m.dedup();
                m
            })
            .collect();
        let line_id = lines.iter().enumerate().map(|(i, l)| (l.clone(), i as u32)).collect();
        Ok(W3Geometry {
            space: space.clone(),
            lines,
            points,
            line_points,
            meets,
            line_id,
            point_index,
        })
    }

    pub fn field(&self) -> &GaloisField {
        self.space.field()
    }

    pub fn line_id(&self, l: &Subspace) -> Option<u32> {
        self.line_id.get(l).copied()
    }

    pub fn point_id(&self, p: &Subspace) -> Option<u32> {
        self.point_index.get(self.field(), p.point_vector())
    }

    pub fn line_points(&self, id: u32) -> &[u32] {
        &self.line_points[id as usize]
    }

    /// Lines other than `id` sharing a point with it.
    pub fn meeting(&self, id: u32) -> &[u32] {
        &self.meets[id as usize]
    }

    fn concurrency_counts(&self, members: &[u32]) -> Vec<u8> {
        let mut cnt = vec![0u8; self.lines.len()];
        for &b in members {
            for &m in self.meeting(b) {
                cnt[m as usize] = cnt[m as usize].saturating_add(1);
            }
        }
        cnt
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BltSet {
    pub space: SymplecticSpace,
    pub lines: Vec<Subspace>,
    pub label: String,
}

/// Outcome of [`is_blt`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BltVerdict {
    Blt,
    WrongCount { expected: usize, found: usize },
    NotIsotropic(Subspace),
    NotDisjoint(Subspace, Subspace),
    /// A line of W(3,q) concurrent with three or more members.
    Witness { line: Subspace, members: Vec<Subspace> },
}

impl BltVerdict {
    pub fn passed(&self) -> bool {
        *self == BltVerdict::Blt
    }
}

/// Checks the (0,2)-concurrency condition against every line of W(3,q).
pub fn is_blt(space: &SymplecticSpace, lines: &[Subspace]) -> Result<BltVerdict> {
    let geo = W3Geometry::new(space)?;
    is_blt_in(&geo, lines)
}

pub fn is_blt_in(geo: &W3Geometry, lines: &[Subspace]) -> Result<BltVerdict> {
    let f = geo.field();
    let q = f.order();
    if lines.len() != q + 1 {
        return Ok(BltVerdict::WrongCount {
            expected: q + 1,
            found: lines.len(),
        });
    }
    let mut ids = Vec::with_capacity(lines.len());
    for l in lines {
        if l.ambient() != 4 || l.dim() != 2 {
            return Err(Error::Precondition(format!("{l:?} is not a line of PG(3,q)")));
        }
        match geo.line_id(l) {
            Some(id) => ids.push(id),
            None => return Ok(BltVerdict::NotIsotropic(l.clone())),
        }
    }
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            if a == b || geo.meeting(a).binary_search(&b).is_ok() {
                return Ok(BltVerdict::NotDisjoint(
                    geo.lines[a as usize].clone(),
                    geo.lines[b as usize].clone(),
                ));
            }
        }
    }
    let cnt = geo.concurrency_counts(&ids);
    if let Some(m) = (0..cnt.len()).find(|&m| cnt[m] >= 3) {
        let line = geo.lines[m].clone();
        let members = lines
            .iter()
            .filter(|b| b.meet_dim(f, &line) > 0)
            .cloned()
            .collect();
        return Ok(BltVerdict::Witness { line, members });
    }
    Ok(BltVerdict::Blt)
}

/// The linear BLT-set: field reduction of the isotropic points of
/// `x1 y2^q + x2 y1^q` on GF(q^2)^2, on the alternating form `T(xi * beta)`.
pub fn linear_blt(f: &GaloisField) -> Result<BltSet> {
    let ext = QuadraticExtension::new(f)?;
    let e = &ext.ext;
    let herm = |x: [FieldElement; 2], y: [FieldElement; 2]| {
        e.add(e.mul(x[0], ext.frobenius(y[1])), e.mul(x[1], ext.frobenius(y[0])))
    };
    let xi = ext.xi();
    let reduce = |x: [FieldElement; 2]| -> Vector {
        let (a0, a1) = ext.split(x[0]);
        let (b0, b1) = ext.split(x[1]);
        vec![a0, a1, b0, b1]
    };
    let lift = |u: &[FieldElement]| -> [FieldElement; 2] { [ext.join(u[0], u[1]), ext.join(u[2], u[3])] };
    let unit = |i: usize| -> Vector {
        let mut v = vec![f.zero(); 4];
        v[i] = f.one();
        v
    };
    let gram: Vec<Vector> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let b = herm(lift(&unit(i)), lift(&unit(j)));
                    ext.rel_trace(e.mul(xi, b))
                })
                .collect()
        })
        .collect();
    let space = SymplecticSpace::with_gram(f, gram)?;
    let mut pts: Vec<[FieldElement; 2]> = vec![[e.zero(), e.one()]];
    pts.extend(
        e.elements()
            .filter(|&t| ext.rel_trace(t).is_zero())
            .map(|t| [e.one(), t]),
    );
    let lines = pts
        .into_iter()
        .map(|x| {
            debug_assert!(herm(x, x).is_zero());
            let y = [e.mul(xi, x[0]), e.mul(xi, x[1])];
            Subspace::from_rows(f, 4, &[reduce(x), reduce(y)])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BltSet {
        space,
        lines,
        label: "linear".into(),
    })
}

impl BltSet {
    pub fn field(&self) -> &GaloisField {
        self.space.field()
    }

    pub fn q(&self) -> usize {
        self.field().order()
    }

    pub fn verify(&self) -> Result<BltVerdict> {
        is_blt(&self.space, &self.lines)
    }

    /// Same set after a symplectic change of basis onto the default form.
    pub fn standardize(&self) -> Result<BltSet> {
        if self.space.is_default() {
            return Ok(self.clone());
        }
        let change = self.space.standardize(None)?;
        let f = self.field();
        Ok(BltSet {
            space: SymplecticSpace::new(f, 4)?,
            lines: self.lines.iter().map(|l| change.to_new(l)).collect(),
            label: self.label.clone(),
        })
    }

    /// Text form: field header, gram, then one `line` record per member.
    pub fn to_text(&self) -> String {
        let f = self.field();
        let mut out = String::new();
        let modulus: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "q {} p {} k {} modulus {}", f.order(), f.p(), f.k(), modulus.join(" "));
        let gram: Vec<String> = self
            .space
            .gram()
            .iter()
            .flat_map(|r| r.iter().map(|x| x.value().to_string()))
            .collect();
        let _ = writeln!(out, "gram {}", gram.join(" "));
        for l in &self.lines {
            let ints: Vec<String> = l.rows().flat_map(|r| r.iter().map(|x| x.value().to_string())).collect();
            let _ = writeln!(out, "line {}", ints.join(" "));
        }
        out
    }

    /// Parses [`to_text`](Self::to_text) output and rejects anything that is
    /// not a BLT-set.
    pub fn from_text(text: &str, label: &str) -> Result<BltSet> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty BLT file".into()))?;
        let tok: Vec<&str> = header.split_whitespace().collect();
        if tok.len() < 8 || tok[0] != "q" || tok[2] != "p" || tok[4] != "k" || tok[6] != "modulus" {
            return Err(Error::Parse(format!("bad header: {header}")));
        }
        let num = |s: &str| s.parse::<u32>().map_err(|_| Error::Parse(format!("bad integer {s}")));
        let (q, p, k) = (num(tok[1])?, num(tok[3])?, num(tok[5])?);
        let modulus = tok[7..].iter().map(|s| num(s)).collect::<Result<Vec<_>>>()?;
        let f = GaloisField::new(p, k, Some(modulus))?;
        if f.order() != q as usize {
            return Err(Error::Parse(format!("q = {q} does not match p^k")));
        }
        let elems = |s: &str, n: usize| -> Result<Vec<FieldElement>> {
            let ints = parse_ints(s)?;
            if ints.len() != n {
                return Err(Error::Parse(format!("expected {n} entries, found {}", ints.len())));
            }
            ints.into_iter().map(|x| f.element(x)).collect()
        };
        let g = lines
            .next()
            .and_then(|l| l.strip_prefix("gram"))
            .ok_or_else(|| Error::Parse("missing gram record".into()))?;
        let g = elems(g, 16)?;
        let space = SymplecticSpace::with_gram(&f, g.chunks(4).map(|c| c.to_vec()).collect())?;
        let mut members = Vec::new();
        for l in lines {
            let body = l
                .strip_prefix("line")
                .ok_or_else(|| Error::Parse(format!("unexpected record: {l}")))?;
            let v = elems(body, 8)?;
            members.push(Subspace::from_rows(&f, 4, &[v[..4].to_vec(), v[4..].to_vec()])?);
        }
        let verdict = is_blt(&space, &members)?;
        if !verdict.passed() {
            return Err(Error::Precondition(format!("not a BLT-set: {verdict:?}")));
        }
        Ok(BltSet {
            space,
            lines: members,
            label: label.to_string(),
        })
    }
}

/// All BLT-sets whose least member is the least t.i. line, candidates taken
/// in increasing line order. The second member fans out across workers.
pub fn search_blts(space: &SymplecticSpace, limit: Option<usize>) -> Result<Vec<BltSet>> {
    let geo = W3Geometry::new(space)?;
    let q = geo.field().order();
    let n = geo.lines.len();
    let first = 0u32;
    let base = geo.concurrency_counts(&[first]);
    let seconds: Vec<u32> = (1..n as u32).filter(|&c| base[c as usize] == 0).collect();
    let cap = limit.unwrap_or(usize::MAX);
    let branches = par::map_slice(&seconds, |&c| {
        let mut chosen = vec![first];
        let mut cnt = base.clone();
        let mut found = Vec::new();
        if try_add(&geo, &mut cnt, c) {
            chosen.push(c);
            extend(&geo, q + 1, &mut chosen, &mut cnt, &mut found, cap);
        }
        found
    });
    let mut out = Vec::new();
    for (i, ids) in branches.into_iter().flatten().enumerate() {
        if out.len() >= cap {
            break;
        }
        let lines: Vec<Subspace> = ids.iter().map(|&id| geo.lines[id as usize].clone()).collect();
        let verdict = is_blt_in(&geo, &lines)?;
        if !verdict.passed() {
            return Err(Error::Integrity(format!("search produced a non-BLT set: {verdict:?}")));
        }
        out.push(BltSet {
            space: space.clone(),
            lines,
            label: format!("found#{i}"),
        });
    }
    Ok(out)
}

fn try_add(geo: &W3Geometry, cnt: &mut [u8], c: u32) -> bool {
    if cnt[c as usize] != 0 || geo.meeting(c).iter().any(|&m| cnt[m as usize] >= 2) {
        return false;
    }
    for &m in geo.meeting(c) {
        cnt[m as usize] += 1;
    }
    true
}

fn remove(geo: &W3Geometry, cnt: &mut [u8], c: u32) {
    for &m in geo.meeting(c) {
        cnt[m as usize] -= 1;
    }
}

fn extend(geo: &W3Geometry, size: usize, chosen: &mut Vec<u32>, cnt: &mut [u8], out: &mut Vec<Vec<u32>>, cap: usize) {
    if out.len() >= cap {
        return;
    }
    if chosen.len() == size {
        out.push(chosen.clone());
        return;
    }
    let last = *chosen.last().expect("seeded");
    let remaining = size - chosen.len();
    let n = geo.lines.len() as u32;
    for c in last + 1..n {
        if ((n - c) as usize) < remaining {
            break;
        }
        if try_add(geo, cnt, c) {
            chosen.push(c);
            extend(geo, size, chosen, cnt, out, cap);
            chosen.pop();
            remove(geo, cnt, c);
        }
    }
}

/// Histogram of regulus sizes: for each triple of members, how many members
/// lie in the regulus of PG(3,q) through that triple.
pub type Fingerprint = BTreeMap<usize, usize>;

pub fn fingerprint(blt: &BltSet) -> Result<Fingerprint> {
    let f = blt.field();
    let m = blt.lines.len();
    let mut triples = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                triples.push((i, j, k));
            }
        }
    }
    let counts = par::map_slice(&triples, |&(i, j, k)| -> Result<usize> {
        let trans = transversals(f, &blt.lines[i], &blt.lines[j], &blt.lines[k])?;
        Ok(blt
            .lines
            .iter()
            .filter(|l| trans.iter().all(|t| t.meet_dim(f, l) > 0))
            .count())
    });
    let mut hist = Fingerprint::new();
    for c in counts {
        *hist.entry(c?).or_default() += 1;
    }
    Ok(hist)
}

/// The q+1 lines of PG(3,q) meeting three pairwise skew lines.
fn transversals(f: &GaloisField, a: &Subspace, b: &Subspace, c: &Subspace) -> Result<Vec<Subspace>> {
    a.points(f)
        .iter()
        .map(|x| {
            let y = x.join(f, b)?.meet(f, c)?;
            if y.dim() != 1 {
                return Err(Error::Precondition("lines are not pairwise skew".into()));
            }
            x.join(f, &y)
        })
        .collect()
}

/// Groups sets by fingerprint, classes in order of first appearance.
pub fn fingerprint_classes(sets: &[BltSet]) -> Result<Vec<(Fingerprint, Vec<usize>)>> {
    let prints = par::map_slice(sets, fingerprint);
    let mut classes: Vec<(Fingerprint, Vec<usize>)> = Vec::new();
    for (i, fp) in prints.into_iter().enumerate() {
        let fp = fp?;
        match classes.iter_mut().find(|(c, _)| *c == fp) {
            Some((_, members)) => members.push(i),
            None => classes.push((fp, vec![i])),
        }
    }
    Ok(classes)
}

/// Tr(a, b): the q+1 totally isotropic lines meeting both disjoint lines.
pub fn line_trace(space: &SymplecticSpace, a: &Subspace, b: &Subspace) -> Result<Vec<Subspace>> {
    let f = space.field();
    for l in [a, b] {
        if l.dim() != 2 || l.ambient() != 4 || !space.is_totally_isotropic(l) {
            return Err(Error::Precondition(format!("{l:?} is not a line of W(3,q)")));
        }
    }
    if a.meet_dim(f, b) != 0 {
        return Err(Error::Precondition("trace needs disjoint lines".into()));
    }
    let mut out = a
        .points(f)
        .iter()
        .map(|x| {
            let y = space.perp(x).meet(f, b)?;
            x.join(f, &y)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// Size of Tr(l1, l2) ∩ Tr(l1, l3).
pub fn trace_meet_size(space: &SymplecticSpace, l1: &Subspace, l2: &Subspace, l3: &Subspace) -> Result<usize> {
    let t2 = line_trace(space, l1, l2)?;
    let t3: BTreeSet<Subspace> = line_trace(space, l1, l3)?.into_iter().collect();
    Ok(t2.iter().filter(|t| t3.contains(t)).count())
}

/// Totally isotropic lines meeting no member of the set, in line order.
pub fn disjoint_lines(blt: &BltSet) -> Result<Vec<Subspace>> {
    let geo = W3Geometry::new(&blt.space)?;
    disjoint_lines_in(&geo, blt)
}

pub fn disjoint_lines_in(geo: &W3Geometry, blt: &BltSet) -> Result<Vec<Subspace>> {
    let ids = blt
        .lines
        .iter()
        .map(|l| geo.line_id(l).ok_or_else(|| Error::Precondition(format!("{l:?} is not t.i."))))
        .collect::<Result<Vec<_>>>()?;
    let cnt = geo.concurrency_counts(&ids);
    Ok((0..geo.lines.len())
        .filter(|&m| cnt[m] == 0 && !ids.contains(&(m as u32)))
        .map(|m| geo.lines[m].clone())
        .collect())
}

/// A split of a BLT-set into two halves, relative to a disjoint line `ell`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivPartition {
    pub blt: BltSet,
    pub ell: Subspace,
    pub class_plus: Vec<Subspace>,
    pub class_minus: Vec<Subspace>,
}

/// The classes of `b ≡ b'  iff  b = b' or Tr(b, ell) ∩ Tr(b', ell) = ∅`.
///
/// Transitivity and the class sizes are checked, not assumed. Every
/// intersection size is also checked to be 0 or 2. `class_plus` holds the
/// least member.
pub fn equiv_partition(blt: &BltSet, ell: &Subspace) -> Result<EquivPartition> {
    let f = blt.field();
    let space = &blt.space;
    if blt.lines.iter().any(|b| b.meet_dim(f, ell) != 0) {
        return Err(Error::Precondition("ell meets a member of the BLT-set".into()));
    }
    let traces: Vec<BTreeSet<Subspace>> = blt
        .lines
        .iter()
        .map(|b| Ok(line_trace(space, b, ell)?.into_iter().collect()))
        .collect::<Result<_>>()?;
    let m = blt.lines.len();
    let mut rel = vec![vec![true; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let common = traces[i].intersection(&traces[j]).count();
            if common != 0 && common != 2 {
                return Err(Error::Integrity(format!(
                    "traces of members {i} and {j} with ell share {common} lines"
                )));
            }
            rel[i][j] = common == 0;
            rel[j][i] = common == 0;
        }
    }
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if rel[i][j] && rel[j][k] && !rel[i][k] {
                    return Err(Error::Integrity(format!("relation not transitive on ({i},{j},{k})")));
                }
            }
        }
    }
    let least = (0..m).min_by(|&a, &b| blt.lines[a].cmp(&blt.lines[b])).expect("nonempty");
    let (plus, minus): (Vec<usize>, Vec<usize>) = (0..m).partition(|&j| rel[least][j]);
    let half = (blt.q() + 1) / 2;
    if plus.len() != half || minus.len() != half {
        return Err(Error::Integrity(format!(
            "classes of sizes {} and {}, expected {half} each",
            plus.len(),
            minus.len()
        )));
    }
    if plus.iter().any(|&a| minus.iter().any(|&b| rel[a][b])) {
        return Err(Error::Integrity("more than two classes".into()));
    }
    let pick = |ix: &[usize]| ix.iter().map(|&i| blt.lines[i].clone()).collect();
    Ok(EquivPartition {
        blt: blt.clone(),
        ell: ell.clone(),
        class_plus: pick(&plus),
        class_minus: pick(&minus),
    })
}

impl EquivPartition {
    /// An arbitrary split into two classes of members; no relation is assumed.
    pub fn from_classes(blt: &BltSet, ell: &Subspace, plus: Vec<Subspace>, minus: Vec<Subspace>) -> Result<Self> {
        let mut all: Vec<&Subspace> = plus.iter().chain(&minus).collect();
        all.sort();
        let mut members: Vec<&Subspace> = blt.lines.iter().collect();
        members.sort();
        if all != members {
            return Err(Error::Precondition("classes do not partition the BLT-set".into()));
        }
        Ok(EquivPartition {
            blt: blt.clone(),
            ell: ell.clone(),
            class_plus: plus,
            class_minus: minus,
        })
    }
}

/// `{<X, b ∩ X^perp> : b in lines}` for a point `X`.
pub fn projection_lines(space: &SymplecticSpace, x: &Subspace, lines: &[Subspace]) -> Result<BTreeSet<Subspace>> {
    let f = space.field();
    let xp = space.perp(x);
    lines
        .iter()
        .map(|b| {
            let y = b.meet(f, &xp)?;
            if y.dim() != 1 {
                return Err(Error::Precondition("X lies on a member".into()));
            }
            x.join(f, &y)
        })
        .collect()
}

/// Whether every point of `ell` sends both classes onto the same lines.
pub fn compatibility_check(part: &EquivPartition) -> Result<bool> {
    let space = &part.blt.space;
    for x in part.ell.points(space.field()) {
        let plus = projection_lines(space, &x, &part.class_plus)?;
        let minus = projection_lines(space, &x, &part.class_minus)?;
        if plus != minus {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every split of the set into halves (least member in `class_plus`) that is
/// compatible with `ell`.
pub fn compatible_partitions(blt: &BltSet, ell: &Subspace) -> Result<Vec<EquivPartition>> {
    let mut members = blt.lines.clone();
    members.sort();
    let m = members.len();
    let half = m / 2;
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        if mask & 1 == 0 || mask.count_ones() as usize != half {
            continue;
        }
        let (plus, minus): (Vec<usize>, Vec<usize>) = (0..m).partition(|&i| mask >> i & 1 == 1);
        let part = EquivPartition::from_classes(
            blt,
            ell,
            plus.iter().map(|&i| members[i].clone()).collect(),
            minus.iter().map(|&i| members[i].clone()).collect(),
        )?;
        if compatibility_check(&part)? {
            out.push(part);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> GaloisField {
        GaloisField::new(p, 1, None).unwrap()
    }

    #[test]
    fn linear_is_blt() {
        for p in [3, 5, 7] {
            let f = gf(p);
            let b = linear_blt(&f).unwrap();
            assert_eq!(b.lines.len(), p as usize + 1);
            assert!(b.lines.iter().all(|l| b.space.is_totally_isotropic(l)));
            assert_eq!(b.verify().unwrap(), BltVerdict::Blt);
            let s = b.standardize().unwrap();
            assert!(s.space.is_default());
            assert_eq!(s.verify().unwrap(), BltVerdict::Blt);
        }
        let f9 = GaloisField::new(3, 2, None).unwrap();
        assert!(linear_blt(&f9).unwrap().verify().unwrap().passed());
    }

    #[test]
    fn lines_through_a_point_fail_with_witness() {
        let f = gf(3);
        let w = SymplecticSpace::new(&f, 4).unwrap();
        let geo = W3Geometry::new(&w).unwrap();
        let p = &geo.points[0];
        let pencil: Vec<Subspace> = geo.lines.iter().filter(|l| l.contains(&f, p)).cloned().collect();
        assert_eq!(pencil.len(), 4);
        assert!(matches!(is_blt(&w, &pencil).unwrap(), BltVerdict::NotDisjoint(..)));
        assert!(matches!(is_blt(&w, &pencil[..3]).unwrap(), BltVerdict::WrongCount { .. }));
    }

    #[test]
    fn trace_basics() {
        let f = gf(3);
        let b = linear_blt(&f).unwrap().standardize().unwrap();
        let (x, y) = (&b.lines[0], &b.lines[1]);
        let t = line_trace(&b.space, x, y).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t, line_trace(&b.space, y, x).unwrap());
        for l in &t {
            assert_eq!(l.meet_dim(&f, x), 1);
            assert_eq!(l.meet_dim(&f, y), 1);
        }
        assert!(line_trace(&b.space, &t[0], x).is_err());
    }

    #[test]
    fn disjoint_lines_and_partition_q3() {
        let f = gf(3);
        let b = linear_blt(&f).unwrap().standardize().unwrap();
        let ells = disjoint_lines(&b).unwrap();
        assert_eq!(ells.len(), 12);
        for ell in &ells {
            let part = equiv_partition(&b, ell).unwrap();
            assert_eq!(part.class_plus.len(), 2);
            assert_eq!(part.class_minus.len(), 2);
            for x in &part.class_plus {
                for y in &part.class_minus {
                    assert_eq!(trace_meet_size(&b.space, ell, x, y).unwrap(), 2);
                }
            }
            assert!(compatibility_check(&part).unwrap());
            for x in ell.points(&f) {
                assert_eq!(projection_lines(&b.space, &x, &b.lines).unwrap().len(), 2);
            }
        }
    }

    #[test]
    fn swapped_partition_is_incompatible() {
        let f = gf(3);
        let b = linear_blt(&f).unwrap().standardize().unwrap();
        let ell = &disjoint_lines(&b).unwrap()[0];
        let part = equiv_partition(&b, ell).unwrap();
        let mut plus = part.class_plus.clone();
        let mut minus = part.class_minus.clone();
        std::mem::swap(&mut plus[1], &mut minus[0]);
        let broken = EquivPartition::from_classes(&b, ell, plus, minus).unwrap();
        assert!(!compatibility_check(&broken).unwrap());
    }

    #[test]
    fn text_roundtrip_and_rejection() {
        let f = gf(5);
        let b = linear_blt(&f).unwrap();
        let text = b.to_text();
        let back = BltSet::from_text(&text, "linear").unwrap();
        assert_eq!(back, b);
        let mut lines: Vec<&str> = text.lines().collect();
        lines[2] = lines[3];
        assert!(BltSet::from_text(&lines.join("\n"), "dup").is_err());
        assert!(BltSet::from_text(&text.replace("gram 0", "gram 1"), "gram").is_err());
    }

    #[test]
    fn search_q3_single_class() {
        let f = gf(3);
        let w = SymplecticSpace::new(&f, 4).unwrap();
        let found = search_blts(&w, None).unwrap();
        assert!(!found.is_empty());
        let classes = fingerprint_classes(&found).unwrap();
        assert_eq!(classes.len(), 1);
        let lin = linear_blt(&f).unwrap();
        assert_eq!(classes[0].0, fingerprint(&lin).unwrap());
        assert_eq!(classes[0].0, BTreeMap::from([(4, 4)]));
        assert_eq!(search_blts(&w, Some(1)).unwrap().len(), 1);
    }
}
