//! Symplectic polar spaces W(n-1, q) and the parabolic quadric Q(4, q).

use crate::error::{Error, Result};
use crate::field::{FieldElement, GaloisField};
use crate::projspace::{
    self, dot, enumerate_subspaces, invert, null_space, vec_mat, Subspace, Vector,
};

/// A bilinear form given by its Gram matrix, with the matching polarity.
pub trait ReflexiveForm {
    fn field(&self) -> &GaloisField;
    fn gram(&self) -> &[Vector];

    fn dim(&self) -> usize {
        self.gram().len()
    }

    fn form(&self, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
        let f = self.field();
        dot(f, &vec_mat(f, u, self.gram()), v)
    }

    fn perp(&self, s: &Subspace) -> Subspace {
        let f = self.field();
        let n = self.dim();
        let eqs: Vec<Vector> = s.rows().map(|r| vec_mat(f, r, self.gram())).collect();
        Subspace::from_rows_unchecked(f, n, null_space(f, &eqs, n))
    }

    /// `u` orthogonal to every vector of `s`.
    fn orthogonal_to(&self, u: &[FieldElement], s: &Subspace) -> bool {
        let f = self.field();
        let ug = vec_mat(f, u, self.gram());
        s.rows().all(|r| dot(f, &ug, r).is_zero())
    }
}

/// The alternating form `x1 y_n - x_n y1 + x2 y_{n-1} - ...` on `GF(q)^n`.
pub fn default_symplectic_gram(f: &GaloisField, n: usize) -> Vec<Vector> {
    let mut g = vec![vec![f.zero(); n]; n];
    for i in 0..n / 2 {
        g[i][n - 1 - i] = f.one();
        g[n - 1 - i][i] = f.neg(f.one());
    }
    g
}

#[derive(Clone, Debug)]
pub struct SymplecticSpace {
    field: GaloisField,
    gram: Vec<Vector>,
}

impl ReflexiveForm for SymplecticSpace {
    fn field(&self) -> &GaloisField {
        &self.field
    }
    fn gram(&self) -> &[Vector] {
        &self.gram
    }
}

impl PartialEq for SymplecticSpace {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.gram == other.gram
    }
}

impl SymplecticSpace {
    /// W(n-1, q) with the default antidiagonal form.
    pub fn new(field: &GaloisField, n: usize) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::Dimension(format!("symplectic dimension {n} must be even")));
        }
        Ok(SymplecticSpace {
            field: field.clone(),
            gram: default_symplectic_gram(field, n),
        })
    }

    /// Any nondegenerate alternating Gram matrix.
    pub fn with_gram(field: &GaloisField, gram: Vec<Vector>) -> Result<Self> {
        let n = gram.len();
        if n == 0 || n % 2 == 1 || gram.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("gram must be square of even size".into()));
        }
        for i in 0..n {
            if !gram[i][i].is_zero() {
                return Err(Error::Precondition("gram diagonal must be zero".into()));
            }
            for j in 0..n {
                if gram[i][j] != field.neg(gram[j][i]) {
                    return Err(Error::Precondition("gram must be skew".into()));
                }
            }
        }
        if projspace::rank(field, &gram) != n {
            return Err(Error::Precondition("gram is degenerate".into()));
        }
        Ok(SymplecticSpace {
            field: field.clone(),
            gram,
        })
    }

    pub fn is_default(&self) -> bool {
        self.gram == default_symplectic_gram(&self.field, self.dim())
    }

    pub fn is_totally_isotropic(&self, s: &Subspace) -> bool {
        let f = &self.field;
        let rows = s.basis();
        let grams: Vec<Vector> = rows.iter().map(|r| vec_mat(f, r, &self.gram)).collect();
        grams
            .iter()
            .enumerate()
            .all(|(i, g)| rows[i + 1..].iter().all(|r| dot(f, g, r).is_zero()))
    }

    /// All totally isotropic subspaces of algebraic dimension `r`, sorted.
    pub fn enumerate_ti(&self, r: usize) -> Result<Vec<Subspace>> {
        if r > self.dim() / 2 {
            return Err(Error::Precondition(format!(
                "no totally isotropic subspaces of dimension {r} in dimension {}",
                self.dim()
            )));
        }
        let f = &self.field;
        Ok(enumerate_subspaces(f, self.dim(), r, |prev, row| {
            let g = vec_mat(f, row, &self.gram);
            prev.iter().all(|p| dot(f, &g, p).is_zero())
        }))
    }

    /// Rows `a_1..a_n` with `a_i G a_j^T` equal to the default form, the first
    /// row being `first` when supplied.
    pub fn symplectic_basis(&self, first: Option<&[FieldElement]>) -> Result<Vec<Vector>> {
        let f = &self.field;
        let n = self.dim();
        let mut out = vec![Vec::new(); n];
        let mut rest = projspace::identity(f, n);
        for k in 0..n / 2 {
            let e = match (k, first) {
                (0, Some(v)) => {
                    if v.iter().all(|x| x.is_zero()) {
                        return Err(Error::Precondition("first basis vector is zero".into()));
                    }
                    v.to_vec()
                }
                _ => rest[0].clone(),
            };
            let eg = vec_mat(f, &e, &self.gram);
            let partner = rest
                .iter()
                .find(|r| !dot(f, &eg, r).is_zero())
                .ok_or_else(|| Error::Integrity("form degenerate on complement".into()))?;
            let c = f.inv_nonzero(dot(f, &eg, partner));
            let w = projspace::scale(f, c, partner);
            let wg = vec_mat(f, &w, &self.gram);
            let mut eqs: Vec<Vector> = vec![eg, wg];
            // Restrict to the orthogonal complement inside the current remainder.
            let rem = Subspace::from_rows_unchecked(f, n, rest.clone());
            let comp = Subspace::from_rows_unchecked(f, n, null_space(f, &eqs, n));
            let next = rem.meet(f, &comp)?;
            eqs.clear();
            out[k] = e;
            out[n - 1 - k] = w;
            rest = next.basis();
        }
        Ok(out)
    }

    /// Coordinate change taking this space to one with the default form.
    pub fn standardize(&self, first: Option<&[FieldElement]>) -> Result<CoordinateChange> {
        let basis = self.symplectic_basis(first)?;
        CoordinateChange::new(&self.field, basis)
    }

    /// The quotient `P^perp / P`, which is again symplectic of dimension n-2.
    pub fn quotient(&self, point: &Subspace) -> Result<Quotient> {
        let f = &self.field;
        let n = self.dim();
        if point.dim() != 1 || point.ambient() != n {
            return Err(Error::Precondition("quotient needs a point of the space".into()));
        }
        let p = point.point_vector().to_vec();
        let pg = vec_mat(f, &p, &self.gram);
        let j = (0..n)
            .find(|&i| !pg[i].is_zero())
            .ok_or_else(|| Error::Integrity("degenerate form".into()))?;
        let mut u = vec![f.zero(); n];
        u[j] = f.inv_nonzero(pg[j]);
        let ug = vec_mat(f, &u, &self.gram);
        let comp = null_space(f, &[pg, ug], n);
        let mut full = comp.clone();
        full.push(p.clone());
        full.push(u);
        let inverse = invert(f, &full)?;
        let qgram: Vec<Vector> = comp
            .iter()
            .map(|a| {
                let ag = vec_mat(f, a, &self.gram);
                comp.iter().map(|b| dot(f, &ag, b)).collect()
            })
            .collect();
        Ok(Quotient {
            space: SymplecticSpace::with_gram(f, qgram)?,
            point: point.clone(),
            point_perp: self.perp(point),
            complement: comp,
            inverse,
        })
    }
}

/// Coordinates with respect to a new basis: `x = y A`, so `y = x A^-1`.
#[derive(Clone, Debug)]
pub struct CoordinateChange {
    field: GaloisField,
    basis: Vec<Vector>,
    inverse: Vec<Vector>,
}

impl CoordinateChange {
    pub fn new(f: &GaloisField, basis: Vec<Vector>) -> Result<Self> {
        let inverse = invert(f, &basis)?;
        Ok(CoordinateChange {
            field: f.clone(),
            basis,
            inverse,
        })
    }

    pub fn to_new_vector(&self, x: &[FieldElement]) -> Vector {
        vec_mat(&self.field, x, &self.inverse)
    }

    pub fn to_old_vector(&self, y: &[FieldElement]) -> Vector {
        vec_mat(&self.field, y, &self.basis)
    }

    pub fn to_new(&self, s: &Subspace) -> Subspace {
        let rows = s.rows().map(|r| self.to_new_vector(r)).collect();
        Subspace::from_rows_unchecked(&self.field, s.ambient(), rows)
    }

    pub fn to_old(&self, s: &Subspace) -> Subspace {
        let rows = s.rows().map(|r| self.to_old_vector(r)).collect();
        Subspace::from_rows_unchecked(&self.field, s.ambient(), rows)
    }
}

/// `P^perp / P` realised on a fixed complement of `P` inside `P^perp`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub space: SymplecticSpace,
    pub point: Subspace,
    point_perp: Subspace,
    complement: Vec<Vector>,
    inverse: Vec<Vector>,
}

impl Quotient {
    /// Maps `S` with `P <= S <= P^perp` to the quotient, lowering dimension by one.
    pub fn project(&self, s: &Subspace) -> Result<Subspace> {
        let f = self.space.field();
        if !s.contains(f, &self.point) || !self.point_perp.contains(f, s) {
            return Err(Error::Precondition(format!(
                "{s:?} does not lie between the base point and its perp"
            )));
        }
        let m = self.complement.len();
        let rows: Vec<Vector> = s
            .rows()
            .map(|r| vec_mat(f, r, &self.inverse)[..m].to_vec())
            .collect();
        Ok(Subspace::from_rows_unchecked(f, m, rows))
    }

    /// Right inverse of [`project`](Self::project): `<P, T>` lifted.
    pub fn lift(&self, t: &Subspace) -> Result<Subspace> {
        let f = self.space.field();
        if t.ambient() != self.complement.len() {
            return Err(Error::Dimension("subspace is not in the quotient".into()));
        }
        let mut rows: Vec<Vector> = t.rows().map(|r| vec_mat(f, r, &self.complement)).collect();
        rows.push(self.point.point_vector().to_vec());
        Ok(Subspace::from_rows_unchecked(f, self.point.ambient(), rows))
    }

    /// Embeds a quotient subspace into the complement (without adding `P`).
    pub fn embed(&self, t: &Subspace) -> Subspace {
        let f = self.space.field();
        let rows = t.rows().map(|r| vec_mat(f, r, &self.complement)).collect();
        Subspace::from_rows_unchecked(f, self.point.ambient(), rows)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineType {
    External,
    Tangent,
    Secant,
    Singular,
}

/// The parabolic quadric `Q(x) = x1 x5 + x2 x4 + x3^2` of PG(4, q).
#[derive(Clone, Debug)]
pub struct Quadric {
    field: GaloisField,
    gram: Vec<Vector>,
}

impl ReflexiveForm for Quadric {
    fn field(&self) -> &GaloisField {
        &self.field
    }
    fn gram(&self) -> &[Vector] {
        &self.gram
    }
}

impl Quadric {
    pub fn parabolic(field: &GaloisField) -> Self {
        let f = field;
        let mut g = vec![vec![f.zero(); 5]; 5];
        g[0][4] = f.one();
        g[4][0] = f.one();
        g[1][3] = f.one();
        g[3][1] = f.one();
        g[2][2] = f.from_int(2);
        Quadric {
            field: field.clone(),
            gram: g,
        }
    }

    pub fn value(&self, x: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let t1 = f.mul(x[0], x[4]);
        let t2 = f.mul(x[1], x[3]);
        let t3 = f.mul(x[2], x[2]);
        f.add(f.add(t1, t2), t3)
    }

    /// `Q(u+v) - Q(u) - Q(v)`.
    pub fn polarization(&self, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let s: Vector = u.iter().zip(v).map(|(&a, &b)| f.add(a, b)).collect();
        f.sub(f.sub(self.value(&s), self.value(u)), self.value(v))
    }

    pub fn is_singular_point(&self, p: &Subspace) -> bool {
        self.value(p.point_vector()).is_zero()
    }

    pub fn singular_points(&self) -> Vec<Subspace> {
        projspace::all_points(&self.field, 5)
            .into_iter()
            .filter(|p| self.is_singular_point(p))
            .collect()
    }

    pub fn singular_points_on(&self, s: &Subspace) -> Vec<Subspace> {
        s.points(&self.field)
            .into_iter()
            .filter(|p| self.is_singular_point(p))
            .collect()
    }

    pub fn line_type(&self, line: &Subspace) -> Result<LineType> {
        if line.dim() != 2 || line.ambient() != 5 {
            return Err(Error::Precondition("line_type needs a line of PG(4,q)".into()));
        }
        let q = self.field.order();
        Ok(match self.singular_points_on(line).len() {
            0 => LineType::External,
            1 => LineType::Tangent,
            2 => LineType::Secant,
            c if c == q + 1 => LineType::Singular,
            c => return Err(Error::Integrity(format!("line with {c} singular points"))),
        })
    }

    /// Executable form of the isometry-type dichotomy: for an external line
    /// `e`, three distinct points `b` of the conic `e^perp` on the quadric and
    /// a singular point `v` off `pi1 = <b0,b1>^perp` whose perp meets `pi1` in
    /// a secant line, the lines `v^perp` cuts from `<b1,b2>^perp` and
    /// `<b2,b0>^perp` are one external and one secant.
    ///
    /// Configurations where either of those two meets is not a nondegenerate
    /// line are rejected as [`Error::Precondition`]; see [`DichotomyOutcome`].
    pub fn dichotomy_check(&self, e: &Subspace, b: [&Subspace; 3], v: &Subspace) -> Result<bool> {
        match self.dichotomy_outcome(e, b, v)? {
            DichotomyOutcome::Decided { differ } => Ok(differ),
            DichotomyOutcome::Degenerate(t2, t3) => Err(Error::Precondition(format!(
                "v^perp meets pi2, pi3 in degenerate lines ({t2:?}, {t3:?})"
            ))),
        }
    }

    /// Like [`dichotomy_check`](Self::dichotomy_check) but reports degenerate
    /// meets instead of rejecting them.
    pub fn dichotomy_outcome(&self, e: &Subspace, b: [&Subspace; 3], v: &Subspace) -> Result<DichotomyOutcome> {
        let f = &self.field;
        if self.line_type(e)? != LineType::External {
            return Err(Error::Precondition("e is not an external line".into()));
        }
        let conic_plane = self.perp(e);
        for (i, bi) in b.iter().enumerate() {
            if bi.dim() != 1 || !self.is_singular_point(bi) || !conic_plane.contains(f, bi) {
                return Err(Error::Precondition(format!("b{i} is not a point of the conic")));
            }
        }
        if b[0] == b[1] || b[1] == b[2] || b[0] == b[2] {
            return Err(Error::Precondition("conic points must be distinct".into()));
        }
        if v.dim() != 1 || !self.is_singular_point(v) {
            return Err(Error::Precondition("v is not a singular point".into()));
        }
        let plane = |x: &Subspace, y: &Subspace| -> Result<Subspace> { Ok(self.perp(&x.join(f, y)?)) };
        let pi1 = plane(b[0], b[1])?;
        if pi1.contains(f, v) {
            return Err(Error::Precondition("v lies in pi1".into()));
        }
        let vp = self.perp(v);
        let s1 = vp.meet(f, &pi1)?;
        if self.line_type(&s1)? != LineType::Secant {
            return Err(Error::Precondition("v^perp does not meet pi1 in a secant line".into()));
        }
        let t2 = self.meet_type(&vp, &plane(b[1], b[2])?)?;
        let t3 = self.meet_type(&vp, &plane(b[2], b[0])?)?;
        let nondegenerate = |t: Option<LineType>| matches!(t, Some(LineType::External | LineType::Secant));
        if nondegenerate(t2) && nondegenerate(t3) {
            Ok(DichotomyOutcome::Decided { differ: t2 != t3 })
        } else {
            Ok(DichotomyOutcome::Degenerate(t2, t3))
        }
    }

    fn meet_type(&self, a: &Subspace, b: &Subspace) -> Result<Option<LineType>> {
        let m = a.meet(&self.field, b)?;
        if m.dim() == 2 {
            Ok(Some(self.line_type(&m)?))
        } else {
            Ok(None)
        }
    }
}

/// Result of evaluating a dichotomy configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DichotomyOutcome {
    /// Both meets are nondegenerate lines; `differ` is whether their types differ.
    Decided { differ: bool },
    /// At least one meet is tangent, totally singular, or not a line (`None`).
    Degenerate(Option<LineType>, Option<LineType>),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> GaloisField {
        GaloisField::new(p, 1, None).unwrap()
    }

    fn v(f: &GaloisField, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn default_form_matches_coordinates() {
        let f = gf(5);
        let w = SymplecticSpace::new(&f, 6).unwrap();
        // x1y6 - x6y1 + x2y5 - x5y2 + x3y4 - x4y3
        let x = v(&f, &[1, 2, 3, 4, 0, 1]);
        let y = v(&f, &[2, 0, 1, 3, 4, 1]);
        let expect = f.from_int(1 * 1 - 1 * 2 + 2 * 4 - 0 * 0 + 3 * 3 - 4 * 1);
        assert_eq!(w.form(&x, &y), expect);
    }

    #[test]
    fn perp_examples() {
        let f = gf(3);
        let w = SymplecticSpace::new(&f, 6).unwrap();
        assert!(w.perp(&Subspace::full(&f, 6)).is_zero());
        let p = Subspace::point(&f, &v(&f, &[1, 0, 0, 0, 0, 0])).unwrap();
        let pp = w.perp(&p);
        assert_eq!(pp.dim(), 5);
        assert!(pp.rows().all(|r| r[5].is_zero()));
        assert!(w.is_totally_isotropic(&p));
        let l = Subspace::from_rows(&f, 6, &[v(&f, &[1, 0, 0, 0, 0, 0]), v(&f, &[0, 0, 0, 0, 0, 1])]).unwrap();
        assert!(!w.is_totally_isotropic(&l));
    }

    #[test]
    fn ti_counts() {
        let f = gf(3);
        let w3 = SymplecticSpace::new(&f, 4).unwrap();
        assert_eq!(w3.enumerate_ti(2).unwrap().len(), 40);
        let w5 = SymplecticSpace::new(&f, 6).unwrap();
        let planes = w5.enumerate_ti(3).unwrap();
        assert_eq!(planes.len(), 1120);
        assert!(planes.iter().all(|s| w5.is_totally_isotropic(s)));
        let p = Subspace::point(&f, &v(&f, &[1, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(planes.iter().filter(|s| s.contains(&f, &p)).count(), 40);
        assert!(w3.enumerate_ti(3).is_err());
    }

    #[test]
    fn quotient_at_e1() {
        let f = gf(3);
        let w5 = SymplecticSpace::new(&f, 6).unwrap();
        let p = Subspace::point(&f, &v(&f, &[1, 0, 0, 0, 0, 0])).unwrap();
        let quo = w5.quotient(&p).unwrap();
        assert!(quo.space.is_default());
        assert!(quo.project(&p).unwrap().is_zero());
        let planes: Vec<_> = w5
            .enumerate_ti(3)
            .unwrap()
            .into_iter()
            .filter(|s| s.contains(&f, &p))
            .collect();
        let mut images: Vec<_> = planes.iter().map(|s| quo.project(s).unwrap()).collect();
        for (s, t) in planes.iter().zip(&images) {
            assert_eq!(&quo.lift(t).unwrap(), s);
            assert!(quo.space.is_totally_isotropic(t));
        }
        images.sort();
        images.dedup();
        assert_eq!(images, SymplecticSpace::new(&f, 4).unwrap().enumerate_ti(2).unwrap());
        let off = Subspace::point(&f, &v(&f, &[0, 0, 0, 0, 0, 1])).unwrap();
        assert!(quo.project(&off.join(&f, &p).unwrap()).is_err());
    }

    #[test]
    fn symplectic_basis_standardizes() {
        for p in [3u32, 5, 7] {
            let f = gf(p);
            let w = SymplecticSpace::new(&f, 6).unwrap();
            let first = v(&f, &[0, 1, 2, 0, 1, 1]);
            let basis = w.symplectic_basis(Some(&first)).unwrap();
            assert_eq!(basis[0], first);
            for i in 0..6 {
                for j in 0..6 {
                    assert_eq!(w.form(&basis[i], &basis[j]), w.gram()[i][j]);
                }
            }
        }
    }

    #[test]
    fn quadric_line_types() {
        let f = gf(3);
        let qd = Quadric::parabolic(&f);
        assert_eq!(qd.singular_points().len(), 40);
        // <(1,0,0,0,c), e3> carries Q = c a^2 + b^2, external iff -c is a nonsquare.
        let e_of = |f: &GaloisField, c: FieldElement| {
            Subspace::from_rows(f, 5, &[vec![f.one(), f.zero(), f.zero(), f.zero(), c], v(f, &[0, 0, 1, 0, 0])]).unwrap()
        };
        let n = f.nonsquare();
        assert_eq!(qd.line_type(&e_of(&f, n)).unwrap(), LineType::Secant);
        assert_eq!(qd.line_type(&e_of(&f, f.one())).unwrap(), LineType::External);
        let f5 = gf(5);
        let q5 = Quadric::parabolic(&f5);
        assert_eq!(q5.line_type(&e_of(&f5, f5.nonsquare())).unwrap(), LineType::External);
        let sing = Subspace::from_rows(&f, 5, &[v(&f, &[1, 0, 0, 0, 0]), v(&f, &[0, 1, 0, 0, 0])]).unwrap();
        assert_eq!(qd.line_type(&sing).unwrap(), LineType::Singular);
        for a in f.elements() {
            for b in f.elements() {
                let x = v(&f, &[a.value() as i64, 1, b.value() as i64, 2, 0]);
                let y = v(&f, &[2, b.value() as i64, 1, 0, a.value() as i64]);
                assert_eq!(qd.polarization(&x, &y), qd.form(&x, &y));
            }
        }
    }

    #[test]
    fn secant_count_q3() {
        let f = gf(3);
        let qd = Quadric::parabolic(&f);
        let lines = enumerate_subspaces(&f, 5, 2, |_, _| true);
        let secants = lines
            .iter()
            .filter(|l| qd.line_type(l).unwrap() == LineType::Secant)
            .count();
        // Oracle: pairs of noncollinear singular points, each singular point
        // being collinear (on the quadric) with q(q+1) others.
        let pts = qd.singular_points();
        let mut noncollinear = 0;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                if !qd.form(a.point_vector(), b.point_vector()).is_zero() {
                    noncollinear += 1;
                }
            }
        }
        assert_eq!(noncollinear, 40 * (40 - 1 - 12) / 2);
        assert_eq!(secants, noncollinear);
    }

    #[test]
    fn dichotomy_on_fixed_conic_points() {
        // q = 5: -n is a nonsquare, so <(1,0,0,0,n), e3> is external.
        let f = gf(5);
        let qd = Quadric::parabolic(&f);
        let n = f.nonsquare();
        let z = f.zero();
        let o = f.one();
        let e = Subspace::from_rows(&f, 5, &[vec![o, z, z, z, n], vec![z, z, o, z, z]]).unwrap();
        let b0 = Subspace::point(&f, &[z, o, z, z, z]).unwrap();
        let b1 = Subspace::point(&f, &[z, z, z, o, z]).unwrap();
        let b2 = Subspace::point(&f, &[f.neg(o), o, z, n, n]).unwrap();
        let mut decided = 0;
        for v in qd.singular_points() {
            match qd.dichotomy_outcome(&e, [&b0, &b1, &b2], &v) {
                Ok(DichotomyOutcome::Decided { differ }) => {
                    assert!(differ);
                    decided += 1;
                }
                Ok(DichotomyOutcome::Degenerate(..)) => {
                    assert!(qd.form(v.point_vector(), b2.point_vector()).is_zero());
                    assert!(qd.dichotomy_check(&e, [&b0, &b1, &b2], &v).is_err());
                }
                Err(_) => {}
            }
        }
        assert!(decided > 0);
        let secant = Subspace::from_rows(&f, 5, &[vec![o, z, z, z, z], vec![z, z, z, z, o]]).unwrap();
        assert!(qd.dichotomy_check(&secant, [&b0, &b1, &b2], &b0).is_err());
    }
}
