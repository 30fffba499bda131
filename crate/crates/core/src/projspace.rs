//! Projective subspaces of PG(n-1, q) in reduced row-echelon form.
//!
//! A [`Subspace`] is always stored canonically, so equality, hashing and
//! ordering of subspaces are equality, hashing and ordering of their RREF
//! matrices. The ordering (ambient, dimension, then rows lexicographically by
//! element encoding) is the one every enumeration in the crate is sorted by.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElement, GaloisField};

pub type Vector = Vec<FieldElement>;

pub fn dot(f: &GaloisField, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter()
        .zip(b)
        .fold(f.zero(), |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Row vector times matrix.
pub fn vec_mat(f: &GaloisField, v: &[FieldElement], m: &[Vector]) -> Vector {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![f.zero(); cols];
    for (&c, row) in v.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

pub fn mat_mul(f: &GaloisField, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    a.iter().map(|row| vec_mat(f, row, b)).collect()
}

pub fn transpose(m: &[Vector]) -> Vec<Vector> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn identity(f: &GaloisField, n: usize) -> Vec<Vector> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect()
}

pub fn scale(f: &GaloisField, c: FieldElement, v: &[FieldElement]) -> Vector {
    v.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn axpy(f: &GaloisField, c: FieldElement, x: &[FieldElement], y: &[FieldElement]) -> Vector {
    x.iter().zip(y).map(|(&a, &b)| f.add(f.mul(c, a), b)).collect()
}

/// Scales `v` so its first nonzero entry is one. Returns `None` for zero.
pub fn normalize(f: &GaloisField, v: &[FieldElement]) -> Option<Vector> {
    let lead = v.iter().find(|x| !x.is_zero())?;
    let inv = f.inv_nonzero(*lead);
    Some(scale(f, inv, v))
}

/// In-place reduced row-echelon form. Zero rows are dropped; the pivot
/// columns are returned in order.
pub fn rref(f: &GaloisField, rows: &mut Vec<Vector>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv_nonzero(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = f.neg(rows[i][c]);
                let (pivot_row, other) = if i < r {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = rows.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (o, &pv) in other.iter_mut().zip(pivot_row.iter()) {
                    *o = f.add(*o, f.mul(factor, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(f: &GaloisField, rows: &[Vector]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of `{x : row . x = 0 for every row}` in `GF(q)^n`, in RREF.
pub fn null_space(f: &GaloisField, rows: &[Vector], n: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = if m.is_empty() { Vec::new() } else { rref(f, &mut m) };
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis: Vec<Vector> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); n];
            v[fc] = f.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect();
    if !basis.is_empty() {
        rref(f, &mut basis);
    }
    basis
}

/// Inverse of a square matrix.
pub fn invert(f: &GaloisField, m: &[Vector]) -> Result<Vec<Vector>> {
    let n = m.len();
    let mut aug: Vec<Vector> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return Err(Error::Precondition("matrix is singular".into()));
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: u8,
    r: u8,
    rows: Vec<FieldElement>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, ">")
    }
}

impl Subspace {
    /// Canonical form of the span of `rows`. Rejects an all-zero input.
    pub fn from_rows(f: &GaloisField, n: usize, rows: &[Vector]) -> Result<Self> {
        let s = Self::span_of(f, n, rows)?;
        if s.r == 0 {
            return Err(Error::Precondition("cannot span a subspace from zero vectors".into()));
        }
        Ok(s)
    }

    /// Like [`from_rows`](Self::from_rows) but returns the zero subspace for
    /// zero input.
    pub fn span_of(f: &GaloisField, n: usize, rows: &[Vector]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("expected vectors of length {n}")));
        }
        Ok(Self::from_rows_unchecked(f, n, rows.to_vec()))
    }

    pub(crate) fn from_rows_unchecked(f: &GaloisField, n: usize, mut rows: Vec<Vector>) -> Self {
        if !rows.is_empty() {
            rref(f, &mut rows);
        }
        Self::from_rref(n, rows)
    }

    fn from_rref(n: usize, rows: Vec<Vector>) -> Self {
        let r = rows.len();
        Subspace {
            n: n as u8,
            r: r as u8,
            rows: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        Subspace {
            n: n as u8,
            r: 0,
            rows: Vec::new(),
        }
    }

    pub fn full(f: &GaloisField, n: usize) -> Self {
        Self::from_rref(n, identity(f, n))
    }

    pub fn point(f: &GaloisField, v: &[FieldElement]) -> Result<Self> {
        Self::from_rows(f, v.len(), &[v.to_vec()])
    }

    /// Ambient vector dimension n.
    #[inline]
    pub fn ambient(&self) -> usize {
        self.n as usize
    }

    /// Algebraic dimension.
    #[inline]
    pub fn dim(&self) -> usize {
        self.r as usize
    }

    /// Projective dimension, `dim - 1` (so -1 for the zero subspace).
    pub fn proj_dim(&self) -> isize {
        self.r as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        let n = self.n as usize;
        &self.rows[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[FieldElement]> {
        self.rows.chunks(self.n.max(1) as usize).take(self.r as usize)
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    /// The normalized spanning vector of a point.
    pub fn point_vector(&self) -> &[FieldElement] {
        debug_assert_eq!(self.r, 1);
        self.row(0)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "ambient dimensions differ: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn join(&self, f: &GaloisField, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut rows = self.basis();
        rows.extend(other.basis());
        Ok(Self::from_rows_unchecked(f, self.ambient(), rows))
    }

    pub fn join_vector(&self, f: &GaloisField, v: &[FieldElement]) -> Subspace {
        let mut rows = self.basis();
        rows.push(v.to_vec());
        Self::from_rows_unchecked(f, self.ambient(), rows)
    }

    /// Vectors annihilating the subspace under the standard dot product.
    pub fn annihilator(&self, f: &GaloisField) -> Vec<Vector> {
        null_space(f, &self.basis(), self.ambient())
    }

    pub fn meet(&self, f: &GaloisField, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let n = self.ambient();
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(n));
        }
        let mut eqs = self.annihilator(f);
        eqs.extend(other.annihilator(f));
        Ok(Self::from_rref(n, null_space(f, &eqs, n)))
    }

    /// Algebraic dimension of the meet, via ranks only.
    pub fn meet_dim(&self, f: &GaloisField, other: &Subspace) -> usize {
        let mut rows = self.basis();
        rows.extend(other.basis());
        self.dim() + other.dim() - rank(f, &rows)
    }

    pub fn contains_vector(&self, f: &GaloisField, v: &[FieldElement]) -> bool {
        let mut rows = self.basis();
        rows.push(v.to_vec());
        rank(f, &rows) == self.dim()
    }

    pub fn contains(&self, f: &GaloisField, other: &Subspace) -> bool {
        self.n == other.n && other.rows().all(|r| self.contains_vector(f, r))
    }

    /// Every point of the subspace, sorted.
    pub fn points(&self, f: &GaloisField) -> Vec<Subspace> {
        let r = self.dim();
        if r == 0 {
            return Vec::new();
        }
        let basis = self.basis();
        let q = f.order();
        let mut out = Vec::with_capacity((q.pow(r as u32) - 1) / (q - 1));
        for coeffs in normalized_vectors(f, r) {
            let v = vec_mat(f, &coeffs, &basis);
            let v = normalize(f, &v).unwrap();
            out.push(Self::from_rref(self.ambient(), vec![v]));
        }
        out.sort();
        out
    }

    /// Row serialization: `n r` on the first line, then one row per line.
    pub fn serialize(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.r);
        for row in self.rows() {
            let ints: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            s.push_str(&ints.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn deserialize(f: &GaloisField, text: &str) -> Result<Subspace> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty subspace".into()))?;
        let hv = parse_ints(header)?;
        if hv.len() != 2 {
            return Err(Error::Parse("subspace header must be `n r`".into()));
        }
        let (n, r) = (hv[0] as usize, hv[1] as usize);
        let mut rows = Vec::with_capacity(r);
        for _ in 0..r {
            let line = lines.next().ok_or_else(|| Error::Parse("missing subspace row".into()))?;
            rows.push(parse_vector(f, line, n)?);
        }
        let s = Subspace::span_of(f, n, &rows)?;
        if s.dim() != r {
            return Err(Error::Parse("subspace rows are dependent".into()));
        }
        Ok(s)
    }
}

pub(crate) fn parse_ints(s: &str) -> Result<Vec<u32>> {
    s.split_whitespace()
        .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
        .collect()
}

pub(crate) fn parse_vector(f: &GaloisField, s: &str, n: usize) -> Result<Vector> {
    let ints = parse_ints(s)?;
    if ints.len() != n {
        return Err(Error::Parse(format!("expected {n} entries, found {}", ints.len())));
    }
    ints.into_iter().map(|v| f.element(v)).collect()
}

/// All nonzero vectors of `GF(q)^n` whose first nonzero entry is one, in
/// lexicographic order.
pub fn normalized_vectors(f: &GaloisField, n: usize) -> Vec<Vector> {
    let q = f.order();
    let mut out = Vec::new();
    for lead in 0..n {
        let tail = n - lead - 1;
        for code in 0..q.pow(tail as u32) {
            let mut v = vec![f.zero(); n];
            v[lead] = f.one();
            let mut c = code;
            for j in (lead + 1..n).rev() {
                v[j] = f.element((c % q) as u32).unwrap();
                c /= q;
            }
            out.push(v);
        }
    }
    out.sort();
    out
}

/// All points of PG(n-1, q), sorted.
pub fn all_points(f: &GaloisField, n: usize) -> Vec<Subspace> {
    normalized_vectors(f, n)
        .into_iter()
        .map(|v| Subspace::from_rref(n, vec![v]))
        .collect()
}

/// Dense lookup from (unnormalized) vectors to point ids.
#[derive(Clone, Debug)]
pub struct PointIndex {
    q: usize,
    n: usize,
    ids: Vec<u32>,
}

impl PointIndex {
    const NONE: u32 = u32::MAX;

    pub fn new<'a>(f: &GaloisField, n: usize, points: impl IntoIterator<Item = &'a [FieldElement]>) -> Self {
        let q = f.order();
        let mut idx = PointIndex {
            q,
            n,
            ids: vec![Self::NONE; q.pow(n as u32)],
        };
        for (i, v) in points.into_iter().enumerate() {
            let v = normalize(f, v).expect("nonzero point vector");
            let key = idx.key(&v);
            idx.ids[key] = i as u32;
        }
        idx
    }

    fn key(&self, v: &[FieldElement]) -> usize {
        v.iter().fold(0usize, |acc, x| acc * self.q + x.index())
    }

    pub fn get(&self, f: &GaloisField, v: &[FieldElement]) -> Option<u32> {
        debug_assert_eq!(v.len(), self.n);
        let v = normalize(f, v)?;
        let id = self.ids[self.key(&v)];
        (id != Self::NONE).then_some(id)
    }
}

/// Enumerates every `r`-dimensional subspace of `GF(q)^n` whose RREF rows
/// pass `accept(previous_rows, new_row)`. The predicate is applied as each
/// row is placed, which prunes whole subtrees. Output is sorted.
pub fn enumerate_subspaces<P>(f: &GaloisField, n: usize, r: usize, accept: P) -> Vec<Subspace>
where
    P: Fn(&[Vector], &[FieldElement]) -> bool,
{
    fn combos(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            cur.push(c);
            combos(n, r, c + 1, cur, out);
            cur.pop();
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn place<P: Fn(&[Vector], &[FieldElement]) -> bool>(
        f: &GaloisField,
        n: usize,
        pivots: &[usize],
        rows: &mut Vec<Vector>,
        accept: &P,
        out: &mut Vec<Subspace>,
    ) {
        let i = rows.len();
        if i == pivots.len() {
            out.push(Subspace::from_rref(n, rows.clone()));
            return;
        }
        let pc = pivots[i];
        let free: Vec<usize> = (pc + 1..n).filter(|c| !pivots.contains(c)).collect();
        let q = f.order();
        for code in 0..q.pow(free.len() as u32) {
            let mut v = vec![f.zero(); n];
            v[pc] = f.one();
            let mut c = code;
            for &col in free.iter().rev() {
                v[col] = f.element((c % q) as u32).unwrap();
                c /= q;
            }
            if accept(rows, &v) {
                rows.push(v);
                place(f, n, pivots, rows, accept, out);
                rows.pop();
            }
        }
    }

    let mut pivot_sets = Vec::new();
    combos(n, r, 0, &mut Vec::new(), &mut pivot_sets);
    let mut out = Vec::new();
    for pivots in pivot_sets {
        place(f, n, &pivots, &mut Vec::new(), &accept, &mut out);
    }
    out.sort();
    out
}

/// All `r`-dimensional subspaces contained in `s`, sorted.
pub fn enumerate_in(f: &GaloisField, s: &Subspace, r: usize) -> Vec<Subspace> {
    let basis = s.basis();
    let mut out: Vec<Subspace> = enumerate_subspaces(f, s.dim(), r, |_, _| true)
        .into_iter()
        .map(|t| {
            let rows = t.rows().map(|c| vec_mat(f, c, &basis)).collect();
            Subspace::from_rows_unchecked(f, s.ambient(), rows)
        })
        .collect();
    out.sort();
    out
}
