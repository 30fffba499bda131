//! H(3,q^2), its field reduction to W(7,q), the projection to W(5,q), and
//! the comparison of the elliptic-quadric hemisystem with the construction
//! from a BLT-set.
//!
//! Conventions. The Hermitian form is `sum g_i x_i y_i^q` with Gram
//! `diag(N(w), 1, 1, 1)` for a primitive `w` of GF(q^2), so its determinant
//! is a nonsquare of GF(q) and the GF(q)-span `U` of the standard basis
//! carries an elliptic form. Field reduction writes `x_i = a + b xi` into
//! coordinates `2i` and `2i+1`; then `u (x) lambda` has coordinates
//! `u_i * split(lambda)`, which is the Kronecker product `u (x) w`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::blt::{equiv_partition, fingerprint, linear_blt, BltSet};
use crate::error::{Error, Result};
use crate::field::{FieldElement, GaloisField, QuadraticExtension};
use crate::hemisystem::{build_hemisystem, verify_hemisystem, HemisystemReport, HemisystemSpec, SChoice, XPiTable};
use crate::knarr::{default_base, knarr_build, planes_on_line, GenQuadrangle, KnarrModel};
use crate::par;
use crate::polar::{CoordinateChange, Quotient, ReflexiveForm, SymplecticSpace};
use crate::projspace::{self, dot, invert, mat_mul, vec_mat, Subspace, Vector};

type Matrix = Vec<Vector>;

/// H(3,q^2) with every isotropic point and totally isotropic line.
#[derive(Clone, Debug)]
pub struct HermitianSpace {
    pub ext: QuadraticExtension,
    /// Diagonal of the Gram matrix, as elements of GF(q).
    pub diag: [FieldElement; 4],
    pub points: Vec<Subspace>,
    pub lines: Vec<Subspace>,
    pub gq: GenQuadrangle,
    point_ids: HashMap<Subspace, u32>,
    line_ids: HashMap<Subspace, u32>,
}

impl HermitianSpace {
    pub fn new(f: &GaloisField) -> Result<Self> {
        if f.p() == 2 {
            return Err(Error::Precondition("q must be odd".into()));
        }
        let ext = QuadraticExtension::new(f)?;
        let e = ext.ext.clone();
        let d = ext.norm(e.primitive_element());
        let diag = [d, f.one(), f.one(), f.one()];

        let mut fibres = vec![Vec::new(); f.order()];
        for a in e.elements() {
            fibres[ext.norm(a).index()].push(a);
        }
        // Normalised vectors with sum g_i N(x_i) = 0: free middle coordinates,
        // last coordinate read off the norm fibres.
        let q2 = e.order();
        let mut points = Vec::new();
        for lead in 0..3 {
            let free = 2 - lead;
            for code in 0..q2.pow(free as u32) {
                let mut v = vec![e.zero(); 4];
                v[lead] = e.one();
                let mut c = code;
                for j in (lead + 1..3).rev() {
                    v[j] = e.element((c % q2) as u32)?;
                    c /= q2;
                }
                let partial = (lead..3).fold(f.zero(), |acc, i| f.add(acc, f.mul(diag[i], ext.norm(v[i]))));
                let need = f.div(f.neg(partial), diag[3])?;
                for &x in &fibres[need.index()] {
                    let mut w = v.clone();
                    w[3] = x;
                    points.push(Subspace::point(&e, &w)?);
                }
            }
        }
        points.sort();
        let point_ids: HashMap<Subspace, u32> = points.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();

        let mut h = HermitianSpace {
            ext,
            diag,
            points,
            lines: Vec::new(),
            gq: GenQuadrangle::new(f.order(), 0, Vec::new())?,
            point_ids,
            line_ids: HashMap::new(),
        };
        let n = h.points.len();
        let spans = par::map_range(n, |i| {
            let x = h.points[i].point_vector();
            (i + 1..n)
                .filter(|&j| h.form(x, h.points[j].point_vector()).is_zero())
                .map(|j| Subspace::from_rows(&e, 4, &[x.to_vec(), h.points[j].point_vector().to_vec()]))
                .collect::<Result<Vec<_>>>()
        });
        let mut lines = BTreeSet::new();
        for s in spans {
            lines.extend(s?);
        }
        h.lines = lines.into_iter().collect();
        let line_points = h
            .lines
            .iter()
            .map(|l| l.points(&e).iter().map(|p| h.point_ids[p]).collect())
            .collect();
        h.gq = GenQuadrangle::new(f.order(), n, line_points)?;
        h.line_ids = h.lines.iter().enumerate().map(|(i, l)| (l.clone(), i as u32)).collect();
        Ok(h)
    }

    pub fn base(&self) -> &GaloisField {
        &self.ext.base
    }

    /// `beta(x, y) = sum g_i x_i y_i^q`.
    pub fn form(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        let e = &self.ext.ext;
        (0..4).fold(e.zero(), |acc, i| {
            let g = self.ext.embed(self.diag[i]);
            e.add(acc, e.mul(e.mul(g, x[i]), self.ext.frobenius(y[i])))
        })
    }

    /// Determinant of the Gram matrix, in GF(q).
    pub fn gram_determinant(&self) -> FieldElement {
        let f = self.base();
        self.diag.iter().fold(f.one(), |acc, &d| f.mul(acc, d))
    }

    pub fn point_id(&self, s: &Subspace) -> Option<u32> {
        self.point_ids.get(s).copied()
    }

    pub fn line_id(&self, s: &Subspace) -> Option<u32> {
        self.line_ids.get(s).copied()
    }

    /// Image of a point or line under a GF(q)-matrix acting on the standard basis.
    fn image(&self, s: &Subspace, g: &Matrix) -> Subspace {
        let e = &self.ext.ext;
        let lifted: Matrix = g.iter().map(|r| r.iter().map(|&x| self.ext.embed(x)).collect()).collect();
        let rows: Vec<Vector> = s.rows().map(|r| vec_mat(e, r, &lifted)).collect();
        Subspace::from_rows(e, 4, &rows).expect("invertible matrix")
    }
}

/// Everything needed to send objects of H(3,q^2) to W(5,q): `Phi` into W(7,q),
/// the hyperplane `Pi = X^perp` for `X = <u (x) w>`, and the quotient at `X`
/// standardised so that the image of the base point is `<e1>`.
#[derive(Clone, Debug)]
pub struct FieldReduction {
    pub herm: HermitianSpace,
    pub w7: SymplecticSpace,
    /// Symmetric Gram of the elliptic form on U.
    pub beta1: Matrix,
    /// Alternating Gram of `T(xi l m^q)` on W = GF(q)^2.
    pub beta2: Matrix,
    /// Singular vector `u` of U whose span is the base point P.
    pub u: Vector,
    pub base_point: u32,
    pub x: Subspace,
    pub pi: Subspace,
    quotient: Quotient,
    change: CoordinateChange,
    pub w5: SymplecticSpace,
}

impl FieldReduction {
    pub fn new(f: &GaloisField) -> Result<Self> {
        let herm = HermitianSpace::new(f)?;
        let ext = &herm.ext;
        let e = &ext.ext;
        let unit = |i: usize, j: usize| -> Vector {
            let mut v = vec![e.zero(); 4];
            v[i] = if j == 0 { e.one() } else { ext.xi() };
            v
        };
        let gram: Matrix = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let h = herm.form(&unit(a / 2, a % 2), &unit(b / 2, b % 2));
                        ext.rel_trace(e.mul(ext.xi(), h))
                    })
                    .collect()
            })
            .collect();
        let w7 = SymplecticSpace::with_gram(f, gram)?;
        let beta1: Matrix = (0..4)
            .map(|i| (0..4).map(|j| if i == j { herm.diag[i] } else { f.zero() }).collect())
            .collect();
        let beta2: Matrix = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| {
                        let li = if i == 0 { e.one() } else { ext.xi() };
                        let lj = if j == 0 { e.one() } else { ext.xi() };
                        ext.rel_trace(e.mul(e.mul(ext.xi(), li), ext.frobenius(lj)))
                    })
                    .collect()
            })
            .collect();
        let u = projspace::normalized_vectors(f, 4)
            .into_iter()
            .find(|v| dot(f, &vec_mat(f, v, &beta1), v).is_zero())
            .ok_or_else(|| Error::Integrity("elliptic form has no singular vector".into()))?;
        let p_sub = Subspace::point(e, &u.iter().map(|&c| ext.embed(c)).collect::<Vec<_>>())?;
        let base_point = herm
            .point_id(&p_sub)
            .ok_or_else(|| Error::Integrity("base point is not isotropic".into()))?;
        let x = Subspace::point(f, &tensor(f, &u, &[f.one(), f.zero()]))?;
        let pi = w7.perp(&x);
        let quotient = w7.quotient(&x)?;
        let mut fr = FieldReduction {
            herm,
            w7,
            beta1,
            beta2,
            u,
            base_point,
            x,
            pi,
            change: CoordinateChange::new(f, projspace::identity(f, 6))?,
            quotient,
            w5: SymplecticSpace::new(f, 6)?,
        };
        let p_img = fr.rho_raw(&fr.phi(&fr.herm.points[base_point as usize]))?;
        if p_img.dim() != 1 {
            return Err(Error::Integrity("base point does not project to a point".into()));
        }
        fr.change = fr.quotient.space.standardize(Some(p_img.point_vector()))?;
        Ok(fr)
    }

    pub fn field(&self) -> &GaloisField {
        self.herm.base()
    }

    /// `Phi` on a single vector of GF(q^2)^4.
    pub fn phi_vector(&self, v: &[FieldElement]) -> Vector {
        v.iter()
            .flat_map(|&a| {
                let (a0, a1) = self.herm.ext.split(a);
                [a0, a1]
            })
            .collect()
    }

    /// `Phi(S)`: the GF(q)-span of `v` and `xi v` over the rows of `S`.
    pub fn phi(&self, s: &Subspace) -> Subspace {
        let e = &self.herm.ext.ext;
        let xi = self.herm.ext.xi();
        let rows: Vec<Vector> = s
            .rows()
            .flat_map(|r| [self.phi_vector(r), self.phi_vector(&projspace::scale(e, xi, r))])
            .collect();
        Subspace::from_rows(self.field(), 8, &rows).expect("nonzero")
    }

    fn rho_raw(&self, s: &Subspace) -> Result<Subspace> {
        let f = self.field();
        if !self.w7.is_totally_isotropic(s) {
            return Err(Error::Precondition("rho needs a totally isotropic subspace".into()));
        }
        let between = self.pi.meet(f, &s.join(f, &self.x)?)?;
        self.quotient.project(&between)
    }

    /// `rho(S) = (Pi ∩ <X, S>) / X`, in standardised W(5,q) coordinates.
    pub fn rho(&self, s: &Subspace) -> Result<Subspace> {
        Ok(self.change.to_new(&self.rho_raw(s)?))
    }

    pub fn phi_rho(&self, s: &Subspace) -> Result<Subspace> {
        self.rho(&self.phi(s))
    }

    /// `B(u1 (x) w1, u2 (x) w2) = beta1(u1,u2) beta2(w1,w2)` on all basis pairs.
    pub fn tensor_identity_holds(&self) -> bool {
        let f = self.field();
        let id4 = projspace::identity(f, 4);
        let id2 = projspace::identity(f, 2);
        id4.iter().all(|u1| {
            id4.iter().all(|u2| {
                id2.iter().all(|w1| {
                    id2.iter().all(|w2| {
                        let lhs = self.w7.form(&tensor(f, u1, w1), &tensor(f, u2, w2));
                        let b1 = dot(f, &vec_mat(f, u1, &self.beta1), u2);
                        let b2 = dot(f, &vec_mat(f, w1, &self.beta2), w2);
                        lhs == f.mul(b1, b2)
                    })
                })
            })
        })
    }
}

/// `u (x) w` in the interleaved coordinates.
pub fn tensor(f: &GaloisField, u: &[FieldElement], w: &[FieldElement]) -> Vector {
    u.iter().flat_map(|&a| w.iter().map(move |&b| f.mul(a, b))).collect()
}

/// The elliptic quadric E inside H(3,q^2) and the tangent/external split.
#[derive(Clone, Debug)]
pub struct EllipticData {
    /// H point IDs of E, sorted.
    pub points: Vec<u32>,
    /// Their images under `Phi rho`, as points of W(5,q).
    pub images: Vec<Subspace>,
    pub tangents: Vec<u32>,
    pub externals: Vec<u32>,
    /// Largest number of E points on one line (at most one).
    pub max_meet: usize,
}

pub fn elliptic_data(fr: &FieldReduction) -> Result<EllipticData> {
    let f = fr.field();
    let ext = &fr.herm.ext;
    let mut points: Vec<u32> = projspace::normalized_vectors(f, 4)
        .into_iter()
        .filter(|v| dot(f, &vec_mat(f, v, &fr.beta1), v).is_zero())
        .map(|v| {
            let w: Vec<FieldElement> = v.iter().map(|&c| ext.embed(c)).collect();
            let s = Subspace::point(&ext.ext, &w)?;
            fr.herm
                .point_id(&s)
                .ok_or_else(|| Error::Integrity("singular point of U is not Hermitian isotropic".into()))
        })
        .collect::<Result<_>>()?;
    points.sort_unstable();
    let images = points
        .iter()
        .map(|&p| fr.phi_rho(&fr.herm.points[p as usize]))
        .collect::<Result<Vec<_>>>()?;
    let g = &fr.herm.gq;
    let mut tangents = Vec::new();
    let mut externals = Vec::new();
    let mut max_meet = 0;
    for l in 0..g.num_lines() as u32 {
        let c = g.points_on(l).iter().filter(|p| points.binary_search(p).is_ok()).count();
        max_meet = max_meet.max(c);
        match c {
            0 => externals.push(l),
            _ => tangents.push(l),
        }
    }
    Ok(EllipticData {
        points,
        images,
        tangents,
        externals,
        max_meet,
    })
}

/// Generators `r_a r_c` of the spinor kernel, `c` the least anisotropic
/// vector with `Q(a)` in the same square class as `Q(c)`.
pub fn omega_generators(fr: &FieldReduction) -> Vec<Matrix> {
    let f = fr.field();
    let q_of = |a: &[FieldElement]| dot(f, &vec_mat(f, a, &fr.beta1), a);
    let aniso: Vec<Vector> = projspace::normalized_vectors(f, 4)
        .into_iter()
        .filter(|a| !q_of(a).is_zero())
        .collect();
    let reflect = |a: &[FieldElement]| -> Matrix {
        let ga = vec_mat(f, a, &fr.beta1);
        let c = f.div(f.from_int(2), q_of(a)).expect("anisotropic");
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let d = if i == j { f.one() } else { f.zero() };
                        f.sub(d, f.mul(c, f.mul(ga[i], a[j])))
                    })
                    .collect()
            })
            .collect()
    };
    let anchor_sq = aniso.iter().find(|a| f.is_square(q_of(a))).expect("square class");
    let anchor_ns = aniso.iter().find(|a| !f.is_square(q_of(a))).expect("nonsquare class");
    let (r_sq, r_ns) = (reflect(anchor_sq), reflect(anchor_ns));
    aniso
        .iter()
        .filter(|a| *a != anchor_sq && *a != anchor_ns)
        .map(|a| {
            let anchor = if f.is_square(q_of(a)) { &r_sq } else { &r_ns };
            mat_mul(f, &reflect(a), anchor)
        })
        .collect()
}

fn line_permutation(fr: &FieldReduction, g: &Matrix) -> Vec<u32> {
    par::map_slice(&fr.herm.lines, |l| {
        fr.herm.line_id(&fr.herm.image(l, g)).expect("isometry permutes lines")
    })
}

/// Orbits of the group generated by `perms` on `items`, each sorted, ordered by least member.
fn orbits(perms: &[Vec<u32>], items: &[u32]) -> Vec<Vec<u32>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in items {
        if !seen.insert(start) {
            continue;
        }
        let mut orbit = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for p in perms {
                let y = p[x as usize];
                if seen.insert(y) {
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// Orbit data for the elliptic isometry group and the hemisystem assembled from it.
#[derive(Clone, Debug)]
pub struct OrbitSplit {
    pub generators: usize,
    pub external_orbits: Vec<Vec<u32>>,
    pub tangent_orbits: Vec<Vec<u32>>,
    /// Orbits of the stabiliser of P on the q+1 lines on P.
    pub p_orbits: Vec<Vec<u32>>,
    pub omega: Vec<u32>,
    pub p_plus: Vec<u32>,
    pub p_minus: Vec<u32>,
    pub m_plus: Vec<u32>,
    pub m_minus: Vec<u32>,
    /// `P+ ∪ M+ ∪ M-`, sorted H line IDs.
    pub hemisystem: Vec<u32>,
    pub report: HemisystemReport,
    /// Every generator fixes the hemisystem setwise.
    pub invariant: bool,
    /// Nearby points with exactly two tangents, lying in different orbits.
    pub nearby_ok: bool,
    perms: Vec<Vec<u32>>,
}

pub fn omega_orbit_split(fr: &FieldReduction, ed: &EllipticData) -> Result<OrbitSplit> {
    let f = fr.field();
    let q = f.order();
    let gens = omega_generators(fr);
    let perms: Vec<Vec<u32>> = gens.iter().map(|g| line_permutation(fr, g)).collect();
    let external_orbits = orbits(&perms, &ed.externals);
    let tangent_orbits = orbits(&perms, &ed.tangents);
    let half = q * q * (q * q - 1) / 2;
    if external_orbits.len() != 2 || external_orbits.iter().any(|o| o.len() != half) {
        return Err(Error::Integrity(format!(
            "external orbit sizes {:?}, expected two of {half}",
            external_orbits.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }

    // Stabiliser of P by Schreier generators over the orbit of P on E.
    let herm = &fr.herm;
    let p = fr.base_point;
    let mut transversal: BTreeMap<u32, Matrix> = BTreeMap::from([(p, projspace::identity(f, 4))]);
    let mut queue = VecDeque::from([p]);
    while let Some(x) = queue.pop_front() {
        let tx = transversal[&x].clone();
        for g in &gens {
            let y = herm.point_id(&herm.image(&herm.points[x as usize], g)).expect("isotropic");
            if !transversal.contains_key(&y) {
                transversal.insert(y, mat_mul(f, &tx, g));
                queue.push_back(y);
            }
        }
    }
    let on_p: Vec<u32> = herm.gq.lines_on(p).to_vec();
    let mut stab_perms: Vec<Vec<u32>> = Vec::new();
    for (&x, tx) in &transversal {
        for g in &gens {
            let txg = mat_mul(f, tx, g);
            let y = herm.point_id(&herm.image(&herm.points[x as usize], g)).expect("isotropic");
            let s = mat_mul(f, &txg, &invert(f, &transversal[&y])?);
            let mut perm: Vec<u32> = (0..herm.lines.len() as u32).collect();
            for &l in &on_p {
                perm[l as usize] = herm.line_id(&herm.image(&herm.lines[l as usize], &s)).expect("line");
            }
            if !stab_perms.contains(&perm) {
                stab_perms.push(perm);
            }
        }
    }
    let p_orbits = orbits(&stab_perms, &on_p);
    if p_orbits.len() != 2 || p_orbits.iter().any(|o| o.len() != (q + 1) / 2) {
        return Err(Error::Integrity(format!(
            "orbits on lines on P have sizes {:?}",
            p_orbits.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    let omega = external_orbits[0].clone();
    let p_plus = p_orbits[0].clone();
    let p_minus = p_orbits[1].clone();

    let g = &herm.gq;
    // The unique line on P meeting a line m not on P.
    let foot = |m: u32| -> u32 {
        *on_p
            .iter()
            .find(|&&b| g.points_on(b).iter().any(|pt| g.incident(*pt, m)))
            .expect("GQ axiom")
    };
    let mut m_plus = Vec::new();
    let mut m_minus = Vec::new();
    for &m in &omega {
        if p_plus.contains(&foot(m)) {
            m_plus.push(m);
        } else {
            m_minus.push(m);
        }
    }
    for &m in &ed.tangents {
        if !on_p.contains(&m) && p_minus.contains(&foot(m)) {
            m_minus.push(m);
        }
    }
    m_minus.sort_unstable();
    let mut hemisystem: Vec<u32> = p_plus.iter().chain(&m_plus).chain(&m_minus).copied().collect();
    hemisystem.sort_unstable();
    let report = verify_hemisystem(g, &hemisystem);
    let invariant = perms.iter().all(|perm| {
        let mut img: Vec<u32> = hemisystem.iter().map(|&l| perm[l as usize]).collect();
        img.sort_unstable();
        img == hemisystem
    });

    let mut orbit_of = vec![usize::MAX; g.num_lines()];
    for (k, o) in tangent_orbits.iter().enumerate() {
        for &l in o {
            orbit_of[l as usize] = k;
        }
    }
    let nearby_ok = (0..g.num_points() as u32)
        .filter(|x| ed.points.binary_search(x).is_err())
        .all(|x| {
            let tang: Vec<u32> = g.lines_on(x).iter().copied().filter(|&l| orbit_of[l as usize] != usize::MAX).collect();
            tang.is_empty() || (tang.len() == 2 && orbit_of[tang[0] as usize] != orbit_of[tang[1] as usize])
        });

    Ok(OrbitSplit {
        generators: gens.len(),
        external_orbits,
        tangent_orbits,
        p_orbits,
        omega,
        p_plus,
        p_minus,
        m_plus,
        m_minus,
        hemisystem,
        report,
        invariant,
        nearby_ok,
        perms,
    })
}

/// K(O) for the image of the lines on P, and the incidence map from H(3,q^2).
#[derive(Clone, Debug)]
pub struct CpKnarr {
    pub blt: BltSet,
    pub model: KnarrModel,
    /// Knarr point ID of each H point, and Knarr line ID of each H line.
    pub point_map: Vec<u32>,
    pub line_map: Vec<u32>,
    /// Both maps are bijections and preserve incidence in both directions.
    pub isomorphic: bool,
    /// Same regulus fingerprint as the linear BLT-set.
    pub matches_linear: bool,
}

pub fn cp_knarr(fr: &FieldReduction) -> Result<CpKnarr> {
    let f = fr.field();
    let herm = &fr.herm;
    let p = default_base(f);
    let o: Vec<Subspace> = herm
        .gq
        .lines_on(fr.base_point)
        .iter()
        .map(|&l| fr.phi_rho(&herm.lines[l as usize]))
        .collect::<Result<_>>()?;
    let quo = fr.w5.quotient(&p)?;
    let lines = o.iter().map(|pi| quo.project(pi)).collect::<Result<Vec<_>>>()?;
    let blt = BltSet {
        space: quo.space.clone(),
        lines,
        label: "elliptic".into(),
    };
    if !blt.verify()?.passed() {
        return Err(Error::Integrity("images of the lines on P are not a BLT-set".into()));
    }
    let model = knarr_build(&fr.w5, &p, &o)?;
    let point_map = par::map_slice(&herm.points, |x| -> Result<u32> {
        let img = fr.phi_rho(x)?;
        model
            .point_id(&img)
            .ok_or_else(|| Error::Integrity(format!("image {img:?} is not a Knarr point")))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let line_map = par::map_slice(&herm.lines, |m| -> Result<u32> {
        let img = fr.phi_rho(m)?;
        model
            .line_id(&img)
            .ok_or_else(|| Error::Integrity(format!("image {img:?} is not a Knarr line")))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let bij = |m: &[u32], n: usize| m.iter().copied().collect::<BTreeSet<_>>().len() == n && m.len() == n;
    let g = &herm.gq;
    let isomorphic = bij(&point_map, model.gq.num_points())
        && bij(&line_map, model.gq.num_lines())
        && (0..g.num_lines() as u32).all(|l| {
            let mut img: Vec<u32> = g.points_on(l).iter().map(|&x| point_map[x as usize]).collect();
            img.sort_unstable();
            img == model.gq.points_on(line_map[l as usize])
        });
    let matches_linear = fingerprint(&blt)? == fingerprint(&linear_blt(f)?.standardize()?)?;
    Ok(CpKnarr {
        blt,
        model,
        point_map,
        line_map,
        isomorphic,
        matches_linear,
    })
}

/// The line `ell` spanned dually by the images of E, and the planes R on it.
#[derive(Clone, Debug)]
pub struct EllR {
    pub ell: Subspace,
    pub span_dim: usize,
    pub totally_isotropic: bool,
    pub in_base_perp: bool,
    pub misses_base: bool,
    pub disjoint_from_o: bool,
    /// Distinct planes `<ell, m ∩ ell^perp>` over tangent lines m.
    pub tangent_planes: usize,
    /// Positions in the sorted planes on `ell`.
    pub r: Vec<usize>,
    pub planes_on_ell: Vec<Subspace>,
}

impl EllR {
    pub fn holds(&self, q: usize) -> bool {
        self.span_dim == 4
            && self.totally_isotropic
            && self.in_base_perp
            && self.misses_base
            && self.disjoint_from_o
            && self.tangent_planes == 2
            && self.r.len() == (q - 1) / 2
    }
}

pub fn ell_r_from_e(fr: &FieldReduction, ed: &EllipticData, ck: &CpKnarr, split: &OrbitSplit) -> Result<EllR> {
    let f = fr.field();
    let w5 = &fr.w5;
    let span = Subspace::from_rows(f, 6, &ed.images.iter().map(|s| s.point_vector().to_vec()).collect::<Vec<_>>())?;
    let ell = w5.perp(&span);
    let base = &ck.model.base;
    let in_base_perp = w5.perp(base).contains(f, &ell);
    let planes_on_ell = if ell.dim() == 2 && w5.is_totally_isotropic(&ell) {
        planes_on_line(f, w5, &ell)?
    } else {
        Vec::new()
    };
    let ell_perp = w5.perp(&ell);
    let image = |l: u32| &ck.model.lines[ck.line_map[l as usize] as usize];
    let mut tangent_planes = BTreeSet::new();
    for &m in &ed.tangents {
        let foot = image(m).meet(f, &ell_perp)?;
        if foot.dim() == 1 && !ell.contains(f, &foot) {
            tangent_planes.insert(ell.join(f, &foot)?);
        }
    }
    let r: Vec<usize> = (0..planes_on_ell.len())
        .filter(|&i| split.m_plus.iter().any(|&m| planes_on_ell[i].meet_dim(f, image(m)) == 1))
        .collect();
    Ok(EllR {
        span_dim: span.dim(),
        totally_isotropic: w5.is_totally_isotropic(&ell),
        in_base_perp,
        misses_base: !ell.contains(f, base),
        disjoint_from_o: ck.model.o.iter().all(|pi| pi.meet_dim(f, &ell) == 0),
        tangent_planes: tangent_planes.len(),
        r,
        planes_on_ell,
        ell,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitTable {
    pub external: Vec<usize>,
    pub tangent: Vec<usize>,
    pub lines_on_p: Vec<usize>,
}

/// Outcome of comparing the two hemisystems of H(3,q^2).
#[derive(Clone, Debug, Serialize)]
pub struct CpReport {
    pub q: usize,
    pub hermitian_points: usize,
    pub hermitian_lines: usize,
    pub determinant_nonsquare: bool,
    pub tensor_identity: bool,
    pub elliptic_points: usize,
    pub tangents: usize,
    pub externals: usize,
    pub generators: usize,
    pub orbits: OrbitTable,
    pub orbit_hemisystem: HemisystemReport,
    pub orbit_hemisystem_invariant: bool,
    pub nearby_tangents_split: bool,
    pub knarr_isomorphic: bool,
    pub blt_matches_linear: bool,
    pub ell_solid_span: bool,
    pub ell_totally_isotropic: bool,
    pub ell_disjoint_from_o: bool,
    pub tangent_planes: usize,
    pub r_size: usize,
    pub m_plus: usize,
    pub l_plus_r: usize,
    pub partition_is_equivalence_split: bool,
    pub construction_hemisystem: HemisystemReport,
    pub images_equal: bool,
}

impl CpReport {
    /// The chain up to `|R|`.
    pub fn chain_holds(&self) -> bool {
        let q = self.q;
        let half = q * q * (q * q - 1) / 2;
        self.determinant_nonsquare
            && self.tensor_identity
            && self.elliptic_points == q * q + 1
            && self.orbits.external == [half, half]
            && self.orbits.lines_on_p == [(q + 1) / 2, (q + 1) / 2]
            && self.orbit_hemisystem.passed
            && self.orbit_hemisystem_invariant
            && self.knarr_isomorphic
            && self.ell_solid_span
            && self.ell_totally_isotropic
            && self.ell_disjoint_from_o
            && self.tangent_planes == 2
            && self.r_size == (q - 1) / 2
    }

    pub fn matched(&self) -> bool {
        let q = self.q;
        self.chain_holds()
            && self.images_equal
            && self.construction_hemisystem.passed
            && self.m_plus == q * q * (q * q - 1) / 4
            && self.l_plus_r == self.m_plus
            && self.partition_is_equivalence_split
    }
}

/// Full pipeline: the orbit hemisystem of H(3,q^2), mapped into K(O), against
/// the construction with `ell`, the orbit split of O and `S = R`.
pub fn cp_compare(f: &GaloisField) -> Result<CpReport> {
    let fr = FieldReduction::new(f)?;
    let q = f.order();
    let ed = elliptic_data(&fr)?;
    let split = omega_orbit_split(&fr, &ed)?;
    let ck = cp_knarr(&fr)?;
    let er = ell_r_from_e(&fr, &ed, &ck, &split)?;

    let o_index = |lines: &[u32]| -> Vec<usize> {
        lines
            .iter()
            .map(|&l| {
                let img = &ck.model.lines[ck.line_map[l as usize] as usize];
                ck.model.o.iter().position(|pi| pi == img).expect("line on P maps into O")
            })
            .collect()
    };
    let (o_plus, o_minus) = (o_index(&split.p_plus), o_index(&split.p_minus));

    let quo = fr.w5.quotient(&ck.model.base)?;
    let ell_w3 = quo.project(&er.ell.join(f, &ck.model.base)?)?;
    let partition_is_equivalence_split = match equiv_partition(&ck.blt, &ell_w3) {
        Ok(part) => {
            let set = |idx: &[usize]| idx.iter().map(|&i| ck.blt.lines[i].clone()).collect::<BTreeSet<_>>();
            let (a, b) = (set(&o_plus), set(&o_minus));
            let (c, d): (BTreeSet<_>, BTreeSet<_>) =
                (part.class_plus.iter().cloned().collect(), part.class_minus.iter().cloned().collect());
            (a == c && b == d) || (a == d && b == c)
        }
        Err(_) => false,
    };

    let mut built = None;
    if er.holds(q) {
        let planes = er.r.iter().map(|&i| er.planes_on_ell[i].clone()).collect();
        let spec = HemisystemSpec::new(&ck.model, &er.ell, o_plus, o_minus, SChoice::Planes(planes))?;
        let table = XPiTable::new(&ck.model, &spec.ell, &spec.planes_on_ell)?;
        built = Some(build_hemisystem(&ck.model, &spec, &table)?);
    }
    let mut mapped: Vec<u32> = split.hemisystem.iter().map(|&l| ck.line_map[l as usize]).collect();
    mapped.sort_unstable();
    let (construction_hemisystem, images_equal, l_plus_r) = match &built {
        Some(h) => (h.report.clone(), h.lines == mapped, h.l_plus_s),
        None => (verify_hemisystem(&ck.model.gq, &[]), false, 0),
    };

    Ok(CpReport {
        q,
        hermitian_points: fr.herm.points.len(),
        hermitian_lines: fr.herm.lines.len(),
        determinant_nonsquare: !f.is_square(fr.herm.gram_determinant()),
        tensor_identity: fr.tensor_identity_holds(),
        elliptic_points: ed.points.len(),
        tangents: ed.tangents.len(),
        externals: ed.externals.len(),
        generators: split.generators,
        orbits: OrbitTable {
            external: split.external_orbits.iter().map(Vec::len).collect(),
            tangent: split.tangent_orbits.iter().map(Vec::len).collect(),
            lines_on_p: split.p_orbits.iter().map(Vec::len).collect(),
        },
        orbit_hemisystem: split.report.clone(),
        orbit_hemisystem_invariant: split.invariant,
        nearby_tangents_split: split.nearby_ok,
        knarr_isomorphic: ck.isomorphic,
        blt_matches_linear: ck.matches_linear,
        ell_solid_span: er.span_dim == 4,
        ell_totally_isotropic: er.totally_isotropic && er.in_base_perp && er.misses_base,
        ell_disjoint_from_o: er.disjoint_from_o,
        tangent_planes: er.tangent_planes,
        r_size: er.r.len(),
        m_plus: split.m_plus.len(),
        l_plus_r,
        partition_is_equivalence_split,
        construction_hemisystem,
        images_equal,
    })
}

impl OrbitSplit {
    /// Line permutations induced by the generators.
    pub fn permutations(&self) -> &[Vec<u32>] {
        &self.perms
    }
}
