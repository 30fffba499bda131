//! Hemisystems of K(O) built from a line `ell`, a split of O and a choice of
//! planes S on `ell`, with the checks that certify them.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::blt::{compatibility_check, BltSet, EquivPartition};
use crate::error::{Error, Result};
use crate::knarr::{planes_on_line, GenQuadrangle, Kind, KnarrModel};
use crate::par;
use crate::polar::ReflexiveForm;
use crate::projspace::Subspace;

/// How to pick S among the q planes on `ell` other than `<P, ell>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SChoice {
    /// The (q-1)/2 least eligible planes.
    Default,
    /// Positions in the sorted list of eligible planes.
    Indices(Vec<usize>),
    Planes(Vec<Subspace>),
}

/// `ell`, the split `O+ | O-` (indices into the model's O) and S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HemisystemSpec {
    pub ell: Subspace,
    pub o_plus: Vec<usize>,
    pub o_minus: Vec<usize>,
    /// All q+1 t.i. planes on `ell`, sorted.
    pub planes_on_ell: Vec<Subspace>,
    /// Position of `<P, ell>` in `planes_on_ell`.
    pub base_plane: usize,
    pub s: Vec<usize>,
    pub s_c: Vec<usize>,
}

impl HemisystemSpec {
    pub fn new(model: &KnarrModel, ell: &Subspace, o_plus: Vec<usize>, o_minus: Vec<usize>, s: SChoice) -> Result<Self> {
        let f = model.field();
        let w = &model.space;
        let q = f.order();
        if ell.ambient() != 6 || ell.dim() != 2 || !w.is_totally_isotropic(ell) {
            return Err(Error::Precondition("ell must be a t.i. line of W(5,q)".into()));
        }
        if ell.contains(f, &model.base) || !w.perp(&model.base).contains(f, ell) {
            return Err(Error::Precondition("ell must lie in P^perp and miss P".into()));
        }
        if model.o.iter().any(|pi| pi.meet_dim(f, ell) != 0) {
            return Err(Error::Precondition("ell meets an element of O".into()));
        }
        let mut all: Vec<usize> = o_plus.iter().chain(&o_minus).copied().collect();
        all.sort_unstable();
        if all != (0..q + 1).collect::<Vec<_>>() || o_plus.len() != (q + 1) / 2 {
            return Err(Error::Precondition("O+ and O- must split O into halves".into()));
        }
        let planes_on_ell = planes_on_line(f, w, ell)?;
        let pl = ell.join(f, &model.base)?;
        let base_plane = planes_on_ell.iter().position(|s| *s == pl).expect("<P,ell> is t.i.");
        let eligible: Vec<usize> = (0..planes_on_ell.len()).filter(|&i| i != base_plane).collect();
        let mut s = match s {
            SChoice::Default => eligible[..(q - 1) / 2].to_vec(),
            SChoice::Indices(ix) => ix
                .iter()
                .map(|&i| {
                    eligible
                        .get(i)
                        .copied()
                        .ok_or_else(|| Error::Precondition(format!("S index {i} out of range 0..{q}")))
                })
                .collect::<Result<_>>()?,
            SChoice::Planes(planes) => planes
                .iter()
                .map(|p| {
                    planes_on_ell
                        .iter()
                        .position(|x| x == p)
                        .filter(|&i| i != base_plane)
                        .ok_or_else(|| Error::Precondition(format!("{p:?} is not an eligible plane on ell")))
                })
                .collect::<Result<_>>()?,
        };
        s.sort_unstable();
        s.dedup();
        if s.len() != (q - 1) / 2 {
            return Err(Error::Precondition(format!("S must have {} distinct planes", (q - 1) / 2)));
        }
        let s_c = eligible.into_iter().filter(|i| !s.contains(i)).collect();
        Ok(HemisystemSpec {
            ell: ell.clone(),
            o_plus,
            o_minus,
            planes_on_ell,
            base_plane,
            s,
            s_c,
        })
    }

    /// Spec from a split of the BLT-set and a line of the quotient at P.
    pub fn from_partition(model: &KnarrModel, part: &EquivPartition, s: SChoice) -> Result<Self> {
        let quo = model.space.quotient(&model.base)?;
        let ell = quo.embed(&part.ell);
        let index_of = |lines: &[Subspace]| -> Result<Vec<usize>> {
            lines
                .iter()
                .map(|b| {
                    let pi = quo.lift(b)?;
                    model
                        .o
                        .iter()
                        .position(|x| *x == pi)
                        .ok_or_else(|| Error::Precondition("partition member is not in O".into()))
                })
                .collect()
        };
        HemisystemSpec::new(model, &ell, index_of(&part.class_plus)?, index_of(&part.class_minus)?, s)
    }

    pub fn s_planes(&self) -> Vec<Subspace> {
        self.s.iter().map(|&i| self.planes_on_ell[i].clone()).collect()
    }

    pub fn s_c_planes(&self) -> Vec<Subspace> {
        self.s_c.iter().map(|&i| self.planes_on_ell[i].clone()).collect()
    }

    fn sign_of(&self, o_index: usize) -> Sign {
        if self.o_plus.contains(&o_index) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sign {
    Plus,
    Minus,
}

/// `X^pi = <ell, ell^perp ∩ <X, X^perp ∩ pi>>`.
pub fn x_pi(model: &KnarrModel, ell: &Subspace, x: &Subspace, pi: &Subspace) -> Result<Subspace> {
    let f = model.field();
    let w = &model.space;
    let xv = x.point_vector();
    if w.orthogonal_to(xv, &model.base) || w.orthogonal_to(xv, ell) {
        return Err(Error::Precondition("X must lie outside P^perp and ell^perp".into()));
    }
    if !model.o.contains(pi) {
        return Err(Error::Precondition("pi is not an element of O".into()));
    }
    let plane = x.join(f, &w.perp(x).meet(f, pi)?)?;
    let foot = w.perp(ell).meet(f, &plane)?;
    let out = ell.join(f, &foot)?;
    if out.dim() != 3 || !w.is_totally_isotropic(&out) {
        return Err(Error::Integrity(format!("X^pi is not a t.i. plane for X = {x:?}")));
    }
    Ok(out)
}

/// `X^pi` for every type-(i) point X off `ell^perp` and every element of O,
/// recorded as positions in the sorted planes on `ell`.
#[derive(Clone, Debug)]
pub struct XPiTable {
    pub points: Vec<u32>,
    pub images: Vec<Vec<u8>>,
}

impl XPiTable {
    pub fn new(model: &KnarrModel, ell: &Subspace, planes_on_ell: &[Subspace]) -> Result<Self> {
        let w = &model.space;
        let points: Vec<u32> = model
            .ids_of_kind_points(Kind::I)
            .filter(|&id| !w.orthogonal_to(model.points[id as usize].point_vector(), ell))
            .collect();
        let rows = par::map_slice(&points, |&id| -> Result<Vec<u8>> {
            let x = &model.points[id as usize];
            model
                .o
                .iter()
                .map(|pi| {
                    let img = x_pi(model, ell, x, pi)?;
                    planes_on_ell
                        .binary_search(&img)
                        .map(|i| i as u8)
                        .map_err(|_| Error::Integrity("X^pi is not a plane on ell".into()))
                })
                .collect()
        });
        Ok(XPiTable {
            points,
            images: rows.into_iter().collect::<Result<_>>()?,
        })
    }
}

/// Outcome of the strong condition, by direct evaluation and via the quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StrongCheck {
    pub direct: bool,
    pub via_quotient: bool,
}

/// For every X off `P^perp` and `ell^perp`: `{X^pi : pi in O+} = {X^pi : pi in O-}`.
/// The same question is answered by compatibility of `<P,ell>/P` with the
/// projected split; disagreement is an integrity failure.
pub fn strong_condition_check(model: &KnarrModel, spec: &HemisystemSpec, table: &XPiTable) -> Result<StrongCheck> {
    let direct = table.images.iter().all(|row| {
        let side = |sign: Sign| -> BTreeSet<u8> {
            row.iter()
                .enumerate()
                .filter(|&(k, _)| spec.sign_of(k) == sign)
                .map(|(_, &i)| i)
                .collect()
        };
        side(Sign::Plus) == side(Sign::Minus)
    });
    let via_quotient = quotient_compatibility(model, spec)?;
    if direct != via_quotient {
        return Err(Error::Integrity(format!(
            "strong condition {direct} disagrees with quotient compatibility {via_quotient}"
        )));
    }
    Ok(StrongCheck { direct, via_quotient })
}

fn quotient_compatibility(model: &KnarrModel, spec: &HemisystemSpec) -> Result<bool> {
    let f = model.field();
    let quo = model.space.quotient(&model.base)?;
    let project = |ix: &[usize]| -> Result<Vec<Subspace>> { ix.iter().map(|&i| quo.project(&model.o[i])).collect() };
    let blt = BltSet {
        space: quo.space.clone(),
        lines: model.o.iter().map(|pi| quo.project(pi)).collect::<Result<_>>()?,
        label: String::new(),
    };
    let ell_bar = quo.project(&spec.ell.join(f, &model.base)?)?;
    let part = EquivPartition::from_classes(&blt, &ell_bar, project(&spec.o_plus)?, project(&spec.o_minus)?)?;
    compatibility_check(&part)
}

/// For every X off `P^perp` and `ell^perp`:
/// `|{pi in O+ : X^pi in S}| = |{pi in O- : X^pi in S}|`.
pub fn regularity_check(spec: &HemisystemSpec, table: &XPiTable) -> bool {
    regularity_counts(spec, table).iter().all(|(a, b)| a == b)
}

/// The two sides of the regularity condition for each point of the table.
pub fn regularity_counts(spec: &HemisystemSpec, table: &XPiTable) -> Vec<(usize, usize)> {
    table
        .images
        .iter()
        .map(|row| {
            let count = |sign: Sign| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, &i)| spec.sign_of(k) == sign && spec.s.contains(&(i as usize)))
                    .count()
            };
            (count(Sign::Plus), count(Sign::Minus))
        })
        .collect()
}

/// The six line classes indexing the columns of the tactical table.
#[derive(Clone, Debug)]
pub struct LineClasses {
    pub o_plus: Vec<u32>,
    pub o_minus: Vec<u32>,
    pub l_plus_s: Vec<u32>,
    pub l_plus_sc: Vec<u32>,
    pub l_minus_s: Vec<u32>,
    pub l_minus_sc: Vec<u32>,
}

impl LineClasses {
    pub fn columns(&self) -> [&[u32]; 6] {
        [
            &self.o_plus,
            &self.o_minus,
            &self.l_plus_s,
            &self.l_plus_sc,
            &self.l_minus_s,
            &self.l_minus_sc,
        ]
    }
}

/// Type-(a) lines meeting an element of O± in a line and a plane of a given
/// set in a point.
pub fn line_classes(model: &KnarrModel, spec: &HemisystemSpec) -> LineClasses {
    let f = model.field();
    let type_a: Vec<u32> = model.ids_of_kind_lines(Kind::A).collect();
    let profile: Vec<Vec<bool>> = par::map_slice(&type_a, |&id| {
        let sigma = &model.lines[id as usize];
        spec.planes_on_ell.iter().map(|s| s.meet_dim(f, sigma) == 1).collect()
    });
    let mut c = LineClasses {
        o_plus: Vec::new(),
        o_minus: Vec::new(),
        l_plus_s: Vec::new(),
        l_plus_sc: Vec::new(),
        l_minus_s: Vec::new(),
        l_minus_sc: Vec::new(),
    };
    for id in model.ids_of_kind_lines(Kind::B) {
        match spec.sign_of(model.o_of_line(id).expect("type (b) line")) {
            Sign::Plus => c.o_plus.push(id),
            Sign::Minus => c.o_minus.push(id),
        }
    }
    for (&id, meets) in type_a.iter().zip(&profile) {
        let hits = |set: &[usize]| set.iter().any(|&i| meets[i]);
        let sign = spec.sign_of(model.o_of_line(id).expect("type (a) line"));
        let (s_col, sc_col) = match sign {
            Sign::Plus => (&mut c.l_plus_s, &mut c.l_plus_sc),
            Sign::Minus => (&mut c.l_minus_s, &mut c.l_minus_sc),
        };
        if hits(&spec.s) {
            s_col.push(id);
        }
        if hits(&spec.s_c) {
            sc_col.push(id);
        }
    }
    c
}

/// A certified line set of K(O).
#[derive(Clone, Debug)]
pub struct Hemisystem {
    pub spec: HemisystemSpec,
    /// Sorted GQ line IDs.
    pub lines: Vec<u32>,
    pub o_plus: usize,
    pub l_plus_s: usize,
    pub l_minus_sc: usize,
    pub report: HemisystemReport,
}

/// `O+ ∪ L+_S ∪ L-_{S^c}`, refusing to build when regularity fails.
pub fn build_hemisystem(model: &KnarrModel, spec: &HemisystemSpec, table: &XPiTable) -> Result<Hemisystem> {
    if !regularity_check(spec, table) {
        return Err(Error::Precondition("regularity condition fails for this choice".into()));
    }
    let c = line_classes(model, spec);
    let mut lines: Vec<u32> = c
        .o_plus
        .iter()
        .chain(&c.l_plus_s)
        .chain(&c.l_minus_sc)
        .copied()
        .collect();
    lines.sort_unstable();
    lines.dedup();
    let report = verify_hemisystem(&model.gq, &lines);
    Ok(Hemisystem {
        spec: spec.clone(),
        lines,
        o_plus: c.o_plus.len(),
        l_plus_s: c.l_plus_s.len(),
        l_minus_sc: c.l_minus_sc.len(),
        report,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HemisystemReport {
    pub size: usize,
    pub per_point: usize,
    pub passed: bool,
    /// `(point, count)` for the first few points with the wrong count.
    pub witnesses: Vec<(u32, usize)>,
    pub failures: usize,
}

/// Exhaustive per-point count: every point must be on exactly half its lines.
pub fn verify_hemisystem(g: &GenQuadrangle, lines: &[u32]) -> HemisystemReport {
    let mut member = vec![false; g.num_lines()];
    let mut out_of_range = false;
    for &l in lines {
        match member.get_mut(l as usize) {
            Some(m) => *m = true,
            None => out_of_range = true,
        }
    }
    let (_, t) = g.order();
    let want = (t + 1) / 2;
    let counts = par::map_range(g.num_points(), |p| {
        g.lines_on(p as u32).iter().filter(|&&l| member[l as usize]).count()
    });
    let bad: Vec<(u32, usize)> = counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c != want)
        .map(|(p, &c)| (p as u32, c))
        .collect();
    let distinct = member.iter().filter(|&&m| m).count();
    HemisystemReport {
        size: lines.len(),
        per_point: want,
        passed: bad.is_empty() && !out_of_range && distinct == lines.len() && (t + 1) % 2 == 0,
        failures: bad.len(),
        witnesses: bad.into_iter().take(8).collect(),
    }
}

/// Sorted complement of a line set.
pub fn complement(g: &GenQuadrangle, lines: &[u32]) -> Vec<u32> {
    let set: BTreeSet<u32> = lines.iter().copied().collect();
    (0..g.num_lines() as u32).filter(|l| !set.contains(l)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TacticalRow {
    pub label: String,
    pub points: usize,
    /// Lines of each column through a point of the row class; `None` if not constant.
    pub entries: [Option<usize>; 6],
    pub expected: [usize; 6],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TacticalTable {
    pub columns: [&'static str; 6],
    pub rows: Vec<TacticalRow>,
    pub matches: bool,
    /// Each row's H-columns (O+, L+_S, L-_Sc) sum to (q+1)/2.
    pub h_sums_ok: bool,
}

/// The tactical decomposition of the proof: P, type (i) points in S and S^c
/// planes, type (ii) points by O±, then type (i) points off `ell^perp`
/// grouped by `[a, a^c]`.
pub fn tactical_table(model: &KnarrModel, spec: &HemisystemSpec, table: &XPiTable) -> Result<TacticalTable> {
    let f = model.field();
    let q = f.order();
    let h = (q + 1) / 2;
    let classes = line_classes(model, spec);
    let cols = classes.columns();
    let mut col_of = vec![[false; 6]; model.lines.len()];
    for (c, ids) in cols.iter().enumerate() {
        for &l in ids.iter() {
            col_of[l as usize][c] = true;
        }
    }
    let entries_for = |p: u32| -> [usize; 6] {
        let mut e = [0usize; 6];
        for &l in model.gq.lines_on(p) {
            for (c, slot) in e.iter_mut().enumerate() {
                if col_of[l as usize][c] {
                    *slot += 1;
                }
            }
        }
        e
    };
    let collapse = |ids: &[u32]| -> [Option<usize>; 6] {
        let rows: Vec<[usize; 6]> = ids.iter().map(|&p| entries_for(p)).collect();
        let mut out = [None; 6];
        for (c, slot) in out.iter_mut().enumerate() {
            let first = rows.first().map(|r| r[c]);
            if rows.iter().all(|r| Some(r[c]) == first) {
                *slot = first;
            }
        }
        out
    };

    let s_planes = spec.s_planes();
    let sc_planes = spec.s_c_planes();
    let mut in_s = Vec::new();
    let mut in_sc = Vec::new();
    let off: BTreeSet<u32> = table.points.iter().copied().collect();
    for id in model.ids_of_kind_points(Kind::I) {
        if off.contains(&id) {
            continue;
        }
        let x = &model.points[id as usize];
        if s_planes.iter().any(|s| s.contains(f, x)) {
            in_s.push(id);
        } else if sc_planes.iter().any(|s| s.contains(f, x)) {
            in_sc.push(id);
        } else {
            return Err(Error::Integrity(format!("type (i) point {id} in ell^perp on no plane of S or S^c")));
        }
    }
    let mut ii_plus = Vec::new();
    let mut ii_minus = Vec::new();
    for id in model.ids_of_kind_points(Kind::II) {
        match spec.sign_of(model.o_of_point(id).expect("type (ii)")) {
            Sign::Plus => ii_plus.push(id),
            Sign::Minus => ii_minus.push(id),
        }
    }
    let p_id = model.point_id(&model.base).expect("base point");

    let mut rows = vec![
        ("P".to_string(), vec![p_id], [h, h, 0, 0, 0, 0]),
        ("(i) in S".to_string(), in_s, [0, 0, h, 0, h, 0]),
        ("(i) in S^c".to_string(), in_sc, [0, 0, 0, h, 0, h]),
        ("(ii) in O+".to_string(), ii_plus, [1, 0, (q - 1) / 2, h, 0, 0]),
        ("(ii) in O-".to_string(), ii_minus, [0, 1, 0, 0, (q - 1) / 2, h]),
    ];
    let mut groups: std::collections::BTreeMap<(usize, usize), Vec<u32>> = Default::default();
    for (&id, row) in table.points.iter().zip(&table.images) {
        let a = row.iter().filter(|&&i| spec.s.contains(&(i as usize))).count();
        let ac = row.iter().filter(|&&i| spec.s_c.contains(&(i as usize))).count();
        groups.entry((a, ac)).or_default().push(id);
    }
    let mut parity_ok = true;
    for ((a, ac), ids) in groups {
        parity_ok &= a % 2 == 0 && ac % 2 == 0 && a + ac == q + 1;
        rows.push((format!("X~ = [{a},{ac}]"), ids, [0, 0, a / 2, ac / 2, a / 2, ac / 2]));
    }
    let rows: Vec<TacticalRow> = rows
        .into_iter()
        .map(|(label, ids, expected)| TacticalRow {
            label,
            points: ids.len(),
            entries: collapse(&ids),
            expected,
        })
        .collect();
    let matches = parity_ok && rows.iter().all(|r| r.entries.iter().zip(&r.expected).all(|(e, x)| *e == Some(*x)));
    let h_sums_ok = rows.iter().all(|r| match (r.entries[0], r.entries[2], r.entries[5]) {
        (Some(a), Some(b), Some(c)) => a + b + c == h,
        _ => false,
    });
    Ok(TacticalTable {
        columns: ["O+", "O-", "L+_S", "L+_Sc", "L-_S", "L-_Sc"],
        rows,
        matches,
        h_sums_ok,
    })
}

/// `(|L+_{s}|, |L-_{s}|)` for each single eligible plane `s` on `ell`.
pub fn slice_counts(model: &KnarrModel, spec: &HemisystemSpec) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..spec.planes_on_ell.len() {
        if i == spec.base_plane {
            continue;
        }
        let single = HemisystemSpec {
            s: vec![i],
            s_c: Vec::new(),
            ..spec.clone()
        };
        let c = line_classes(model, &single);
        out.push((c.l_plus_s.len(), c.l_minus_s.len()));
    }
    out
}

/// Header `lineset lines <nl> size <n>`, then one line ID per row.
pub fn lineset_to_text(num_lines: usize, lines: &[u32]) -> String {
    let mut out = format!("lineset lines {num_lines} size {}\n", lines.len());
    for l in lines {
        out.push_str(&l.to_string());
        out.push('\n');
    }
    out
}

/// Parses [`lineset_to_text`] output into `(num_lines, ids)`. IDs are not
/// range-checked here; verification reports them.
pub fn lineset_from_text(text: &str) -> Result<(usize, Vec<u32>)> {
    let mut rows = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = rows.next().ok_or_else(|| Error::Parse("empty lineset file".into()))?;
    let tok: Vec<&str> = header.split_whitespace().collect();
    if tok.len() != 5 || tok[0] != "lineset" || tok[1] != "lines" || tok[3] != "size" {
        return Err(Error::Parse(format!("bad lineset header: {header}")));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad integer {s}")));
    let (nl, n) = (num(tok[2])?, num(tok[4])?);
    let ids = rows
        .flat_map(str::split_whitespace)
        .map(|x| x.parse::<u32>().map_err(|_| Error::Parse(format!("bad line id {x}"))))
        .collect::<Result<Vec<u32>>>()?;
    if ids.len() != n {
        return Err(Error::Parse(format!("header promises {n} lines, found {}", ids.len())));
    }
    Ok((nl, ids))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lineset_roundtrip() {
        let text = lineset_to_text(112, &[0, 5, 111]);
        assert_eq!(lineset_from_text(&text).unwrap(), (112, vec![0, 5, 111]));
        assert!(lineset_from_text("lineset lines 4 size 2\n1\n").is_err());
        assert!(lineset_from_text("lines 4\n").is_err());
    }
    use crate::blt::{disjoint_lines, equiv_partition, linear_blt};
    use crate::field::GaloisField;

    #[test]
    fn q3_every_ell_and_s() {
        let f = GaloisField::new(3, 1, None).unwrap();
        let b = linear_blt(&f).unwrap().standardize().unwrap();
        let model = KnarrModel::from_blt(&b).unwrap();
        let ells = disjoint_lines(&b).unwrap();
        for ell in &ells {
            let part = equiv_partition(&b, ell).unwrap();
            let spec = HemisystemSpec::from_partition(&model, &part, SChoice::Default).unwrap();
            let table = XPiTable::new(&model, &spec.ell, &spec.planes_on_ell).unwrap();
            for row in &table.images {
                assert_eq!(row.len(), 4);
            }
            assert_eq!(strong_condition_check(&model, &spec, &table).unwrap(), StrongCheck { direct: true, via_quotient: true });
            for i in 0..3 {
                let spec = HemisystemSpec::from_partition(&model, &part, SChoice::Indices(vec![i])).unwrap();
                let hs = build_hemisystem(&model, &spec, &table).unwrap();
                assert!(hs.report.passed, "{:?}", hs.report);
                assert_eq!((hs.lines.len(), hs.o_plus, hs.l_plus_s, hs.l_minus_sc), (56, 2, 18, 36));
                let tt = tactical_table(&model, &spec, &table).unwrap();
                assert!(tt.matches && tt.h_sums_ok, "{tt:?}");
                let comp = complement(&model.gq, &hs.lines);
                assert!(verify_hemisystem(&model.gq, &comp).passed);
                for (a, b) in slice_counts(&model, &spec) {
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn broken_partition_fails_both_routes() {
        let f = GaloisField::new(3, 1, None).unwrap();
        let b = linear_blt(&f).unwrap().standardize().unwrap();
        let model = KnarrModel::from_blt(&b).unwrap();
        let ell = &disjoint_lines(&b).unwrap()[0];
        let part = equiv_partition(&b, ell).unwrap();
        let good = HemisystemSpec::from_partition(&model, &part, SChoice::Default).unwrap();
        let mut plus = good.o_plus.clone();
        let mut minus = good.o_minus.clone();
        std::mem::swap(&mut plus[0], &mut minus[0]);
        let table = XPiTable::new(&model, &good.ell, &good.planes_on_ell).unwrap();
        let mut regular_for_all = true;
        for i in 0..3 {
            let spec = HemisystemSpec::new(&model, &good.ell, plus.clone(), minus.clone(), SChoice::Indices(vec![i])).unwrap();
            let strong = strong_condition_check(&model, &spec, &table).unwrap();
            assert!(!strong.direct && !strong.via_quotient);
            regular_for_all &= regularity_check(&spec, &table);
        }
        assert!(!regular_for_all);
    }

    #[test]
    fn x_pi_rejects_points_in_perp() {
        let f = GaloisField::new(3, 1, None).unwrap();
        let b = linear_blt(&f).unwrap().standardize().unwrap();
        let model = KnarrModel::from_blt(&b).unwrap();
        let ell = &disjoint_lines(&b).unwrap()[0];
        let spec = HemisystemSpec::from_partition(&model, &equiv_partition(&b, ell).unwrap(), SChoice::Default).unwrap();
        assert!(x_pi(&model, &spec.ell, &model.base, &model.o[0]).is_err());
    }

    #[test]
    fn random_line_set_fails() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let f = GaloisField::new(3, 1, None).unwrap();
        let b = linear_blt(&f).unwrap().standardize().unwrap();
        let model = KnarrModel::from_blt(&b).unwrap();
        let mut ids: Vec<u32> = (0..112).collect();
        ids.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(11));
        let rep = verify_hemisystem(&model.gq, &ids[..56]);
        assert!(!rep.passed);
        assert!(!rep.witnesses.is_empty());
    }
}
