use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::gf::{Elem, Field};
use crate::graphcore::Graph;
use crate::projgeom::{HermitianGeometry, PlaneIncidence};

/// Where a unital came from. Field elements are stored by table index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum UnitalKind {
    /// the Hermitian curve of the identity form
    Classical,
    BuekenhoutMetz { alpha: u8, beta: u8 },
    /// the same unital in the coordinates used for the O'Nan witness family
    BuekenhoutMetzAlt { alpha: u8, beta: u8 },
    BuekenhoutTits { beta: u8, delta: u32 },
    Dual { of: Box<UnitalKind> },
    Imported,
}

impl UnitalKind {
    /// Known to be a Hermitian curve by construction.
    pub fn is_classical(&self) -> bool {
        match self {
            UnitalKind::Classical => true,
            UnitalKind::BuekenhoutMetz { alpha, .. } | UnitalKind::BuekenhoutMetzAlt { alpha, .. } => *alpha == 0,
            UnitalKind::Dual { of } => of.is_classical(),
            _ => false,
        }
    }
}

/// A set of `q^3 + 1` points of PG(2, q^2).
#[derive(Clone)]
pub struct Unital {
    plane: Arc<PlaneIncidence>,
    points: Vec<u32>,
    member: Vec<bool>,
    pub kind: UnitalKind,
}

impl fmt::Debug for Unital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Unital({:?}, {} points, {:?})", self.plane.space(), self.points.len(), self.kind)
    }
}

impl Unital {
    /// Wraps a point set without checking it; see [`validate_unital`].
    pub fn from_points(plane: Arc<PlaneIncidence>, mut points: Vec<u32>, kind: UnitalKind) -> Unital {
        points.sort_unstable();
        points.dedup();
        let mut member = vec![false; plane.num_points()];
        for &p in &points {
            member[p as usize] = true;
        }
        Unital { plane, points, member, kind }
    }

    pub fn plane(&self) -> &PlaneIncidence {
        &self.plane
    }

    pub fn plane_arc(&self) -> Arc<PlaneIncidence> {
        Arc::clone(&self.plane)
    }

    pub fn q(&self) -> u32 {
        self.plane.q()
    }

    /// Point indices, ascending.
    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn contains(&self, p: usize) -> bool {
        self.member[p]
    }

    /// Number of unital points on line `l`.
    pub fn line_meet(&self, l: usize) -> usize {
        self.plane.line_points(l).iter().filter(|&&p| self.member[p as usize]).count()
    }

    pub fn is_tangent(&self, l: usize) -> bool {
        self.line_meet(l) == 1
    }

    /// Tangent lines, ascending.
    pub fn tangent_lines(&self) -> Vec<u32> {
        (0..self.plane.num_lines()).filter(|&l| self.is_tangent(l)).map(|l| l as u32).collect()
    }

    /// Points off the unital, ascending: the vertices of its graph.
    pub fn external_points(&self) -> Vec<u32> {
        (0..self.plane.num_points() as u32).filter(|&p| !self.member[p as usize]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitalStats {
    pub tangents: usize,
    pub secants: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnitalViolation {
    Size { expected: usize, found: usize },
    /// first line (by index) meeting the set in neither 1 nor q + 1 points
    Line { line: usize, count: usize },
}

impl fmt::Display for UnitalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitalViolation::Size { expected, found } => write!(f, "{found} points instead of {expected}"),
            UnitalViolation::Line { line, count } => write!(f, "line {line} meets the set in {count} points"),
        }
    }
}

/// Checks every line of the plane.
pub fn validate_unital(plane: &PlaneIncidence, points: &[u32]) -> Result<UnitalStats, UnitalViolation> {
    let q = plane.q() as usize;
    let expected = q * q * q + 1;
    let mut member = vec![false; plane.num_points()];
    for &p in points {
        member[p as usize] = true;
    }
    let found = member.iter().filter(|&&m| m).count();
    if found != expected || found != points.len() {
        return Err(UnitalViolation::Size { expected, found: points.len() });
    }
    let mut stats = UnitalStats { tangents: 0, secants: 0 };
    for l in 0..plane.num_lines() {
        let count = plane.line_points(l).iter().filter(|&&p| member[p as usize]).count();
        match count {
            1 => stats.tangents += 1,
            c if c == q + 1 => stats.secants += 1,
            _ => return Err(UnitalViolation::Line { line: l, count }),
        }
    }
    Ok(stats)
}

fn checked(u: Unital) -> Result<Unital, ConstructionError> {
    validate_unital(&u.plane, &u.points).map_err(ConstructionError::NotUnital)?;
    Ok(u)
}

/// The Hermitian curve `X_0^(q+1) + X_1^(q+1) + X_2^(q+1) = 0`.
pub fn build_unital_classical(plane: Arc<PlaneIncidence>) -> Result<Unital, ConstructionError> {
    let h = HermitianGeometry::new(plane.space_arc(), None)?;
    let points = h.point_set().to_vec();
    checked(Unital::from_points(plane, points, UnitalKind::Classical))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BmParams {
    pub alpha: Elem,
    pub beta: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BmViolation {
    /// the family is only defined for q > 2
    OrderTooSmall,
    /// odd q: `(beta - beta^q)^2 + 4 alpha^(q+1)` is a square in GF(q)
    SquareDiscriminant,
    /// even q: beta lies in GF(q)
    BetaInSubfield,
    /// even q: `alpha^(q+1) / (beta + beta^q)^2` has absolute trace 1
    TraceOne,
}

impl fmt::Display for BmViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BmViolation::OrderTooSmall => "q must exceed 2",
            BmViolation::SquareDiscriminant => "(beta - beta^q)^2 + 4 alpha^(q+1) is a square in GF(q)",
            BmViolation::BetaInSubfield => "beta lies in GF(q)",
            BmViolation::TraceOne => "alpha^(q+1) / (beta + beta^q)^2 has absolute trace 1",
        })
    }
}

impl BmParams {
    pub fn from_indices(alpha: u8, beta: u8) -> BmParams {
        BmParams { alpha: Elem(alpha), beta: Elem(beta) }
    }

    pub fn check(&self, f: &Field) -> Result<(), BmViolation> {
        let q = f.subfield_order().expect("quadratic field");
        if q <= 2 {
            return Err(BmViolation::OrderTooSmall);
        }
        let (a, b) = (self.alpha, self.beta);
        if f.characteristic() != 2 {
            let d = f.sub(b, f.conj(b));
            let disc = f.add(f.mul(d, d), f.mul(f.from_int(4), f.norm(a)));
            if f.is_square_in_subfield(disc).expect("discriminant lies in GF(q)") {
                return Err(BmViolation::SquareDiscriminant);
            }
            return Ok(());
        }
        if f.in_subfield(b) {
            return Err(BmViolation::BetaInSubfield);
        }
        let t = f.trace(b);
        let y = f.div(f.norm(a), f.mul(t, t));
        if f.absolute_trace(y).expect("even characteristic") != 0 {
            return Err(BmViolation::TraceOne);
        }
        Ok(())
    }

    /// All valid pairs in table order.
    pub fn all_valid(f: &Field) -> Vec<BmParams> {
        let mut out = Vec::new();
        for a in f.elements() {
            for b in f.elements() {
                let p = BmParams { alpha: a, beta: b };
                if p.check(f).is_ok() {
                    out.push(p);
                }
            }
        }
        out
    }
}

/// `{(x, alpha x^2 + beta x^(q+1) + z, 1)} ∪ {(0, 1, 0)}`.
pub fn build_unital_bm(plane: Arc<PlaneIncidence>, p: BmParams) -> Result<Unital, ConstructionError> {
    let space = plane.space();
    let f = space.field();
    p.check(f).map_err(ConstructionError::BadBmParams)?;
    let mut points = vec![space.index_of(&[Elem::ZERO, Elem::ONE, Elem::ZERO]).unwrap() as u32];
    for x in f.elements() {
        let y0 = f.add(f.mul(p.alpha, f.mul(x, x)), f.mul(p.beta, f.norm(x)));
        for &z in f.subfield() {
            points.push(space.index_of(&[x, f.add(y0, z), Elem::ONE]).unwrap() as u32);
        }
    }
    let kind = UnitalKind::BuekenhoutMetz { alpha: p.alpha.0, beta: p.beta.0 };
    checked(Unital::from_points(Arc::clone(&plane), points, kind))
}

/// The same family written as
/// `{(-2 alpha x + (beta^q - beta) x^q, 1, alpha x^2 - beta^q x^(q+1) - z)} ∪ {(0, 0, 1)}`,
/// the frame in which the six-line O'Nan witnesses are stated (odd q).
pub fn build_unital_bm_alt(plane: Arc<PlaneIncidence>, p: BmParams) -> Result<Unital, ConstructionError> {
    let space = plane.space();
    let f = space.field();
    p.check(f).map_err(ConstructionError::BadBmParams)?;
    let bq = f.conj(p.beta);
    let c = f.sub(bq, p.beta);
    let two_a = f.mul(f.from_int(2), p.alpha);
    let mut points = vec![space.index_of(&[Elem::ZERO, Elem::ZERO, Elem::ONE]).unwrap() as u32];
    for x in f.elements() {
        let x0 = f.add(f.neg(f.mul(two_a, x)), f.mul(c, f.conj(x)));
        let y0 = f.sub(f.mul(p.alpha, f.mul(x, x)), f.mul(bq, f.norm(x)));
        for &z in f.subfield() {
            points.push(space.index_of(&[x0, Elem::ONE, f.sub(y0, z)]).unwrap() as u32);
        }
    }
    let kind = UnitalKind::BuekenhoutMetzAlt { alpha: p.alpha.0, beta: p.beta.0 };
    checked(Unital::from_points(Arc::clone(&plane), points, kind))
}

/// `{(x0 + x1 beta, (x0^(delta+2) + x0 x1 + x1^delta) beta + z, 1)} ∪ {(0, 1, 0)}`
/// with `q = 2^m`, `m` odd, `delta = 2^((m+1)/2)` and beta the first element
/// of GF(q^2) outside GF(q).
pub fn build_unital_bt(plane: Arc<PlaneIncidence>) -> Result<Unital, ConstructionError> {
    let space = plane.space();
    let f = space.field();
    let q = plane.q();
    let m = q.trailing_zeros();
    if !q.is_power_of_two() || m % 2 == 0 || m == 1 {
        return Err(ConstructionError::BadTitsOrder(q));
    }
    let delta = 1u64 << m.div_ceil(2);
    let beta = f.elements().find(|&x| !f.in_subfield(x)).expect("proper extension");
    let mut points = vec![space.index_of(&[Elem::ZERO, Elem::ONE, Elem::ZERO]).unwrap() as u32];
    for &x0 in f.subfield() {
        for &x1 in f.subfield() {
            let x = f.add(x0, f.mul(x1, beta));
            let s = f.add(f.add(f.pow(x0, delta + 2), f.mul(x0, x1)), f.pow(x1, delta));
            let y0 = f.mul(s, beta);
            for &z in f.subfield() {
                points.push(space.index_of(&[x, f.add(y0, z), Elem::ONE]).unwrap() as u32);
            }
        }
    }
    let kind = UnitalKind::BuekenhoutTits { beta: beta.0, delta: delta as u32 };
    checked(Unital::from_points(Arc::clone(&plane), points, kind))
}

/// Tangent lines of `u` read as points through the correlation
/// `[a, b, c] <-> (a, b, c)`.
pub fn dual_unital(u: &Unital) -> Result<Unital, ConstructionError> {
    let kind = match &u.kind {
        UnitalKind::Dual { of } => (**of).clone(),
        other => UnitalKind::Dual { of: Box::new(other.clone()) },
    };
    checked(Unital::from_points(u.plane_arc(), u.tangent_lines(), kind))
}

/// Γ_U: the external points, adjacent when their joining line is tangent.
/// Labels hold the point indices.
pub fn build_gamma_u(u: &Unital) -> Result<Graph, ConstructionError> {
    validate_unital(&u.plane, &u.points).map_err(ConstructionError::NotUnital)?;
    let verts = u.external_points();
    let np = u.plane.num_points();
    let mut index = vec![u32::MAX; np];
    for (i, &p) in verts.iter().enumerate() {
        index[p as usize] = i as u32;
    }
    let mut g = Graph::empty(verts.len());
    // every pair of points spans one line, so the graph is the union of the
    // cliques on the tangent lines
    for l in u.tangent_lines() {
        let off: Vec<usize> = u
            .plane
            .line_points(l as usize)
            .iter()
            .filter(|&&p| !u.member[p as usize])
            .map(|&p| index[p as usize] as usize)
            .collect();
        for (i, &a) in off.iter().enumerate() {
            for &b in &off[i + 1..] {
                g.add_edge(a, b);
            }
        }
    }
    g.set_labels(verts);
    Ok(g)
}

/// Sorted point indices, one per line, under a header naming the plane.
pub fn unital_text(u: &Unital) -> String {
    let mut s = format!("# unital n=2 q={} gram=identity\n", u.q());
    for p in &u.points {
        s.push_str(&p.to_string());
        s.push('\n');
    }
    s
}

pub fn parse_unital_text(plane: Arc<PlaneIncidence>, text: &str) -> Result<Unital, ConstructionError> {
    let err = |line: usize, msg: &str| ConstructionError::Parse { line, msg: msg.to_string() };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file"))?;
    let fields: Vec<&str> = header.trim_start_matches('#').split_whitespace().collect();
    if fields.first() != Some(&"unital") {
        return Err(err(1, "missing '# unital' header"));
    }
    for kv in &fields[1..] {
        match kv.split_once('=') {
            Some(("n", "2")) | Some(("gram", "identity")) => {}
            Some(("q", v)) if v.parse::<u32>().ok() == Some(plane.q()) => {}
            _ => return Err(err(1, &format!("header field '{kv}' does not match PG(2, {})", plane.q().pow(2)))),
        }
    }
    let mut points = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let p: u32 = line.parse().map_err(|_| err(i + 1, "not a point index"))?;
        if p as usize >= plane.num_points() {
            return Err(err(i + 1, "point index out of range"));
        }
        if points.last().is_some_and(|&last| last >= p) {
            return Err(err(i + 1, "indices must be strictly ascending"));
        }
        points.push(p);
    }
    checked(Unital::from_points(plane, points, UnitalKind::Imported))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::standard_plane;
    use crate::graphcore::{check_srg, SrgParams};

    #[test]
    fn classical_counts() {
        for q in [2, 3] {
            let u = build_unital_classical(standard_plane(q).unwrap()).unwrap();
            let q = q as usize;
            assert_eq!(u.points().len(), q * q * q + 1);
            let s = validate_unital(u.plane(), u.points()).unwrap();
            assert_eq!(s, UnitalStats { tangents: q * q * q + 1, secants: q.pow(4) - q.pow(3) + q * q });
        }
    }

    #[test]
    fn bm_parameter_conditions() {
        let plane = standard_plane(3).unwrap();
        let f = plane.space().field();
        let valid = BmParams::all_valid(f);
        assert!(valid.iter().any(|p| p.alpha.is_zero()));
        assert!(valid.iter().any(|p| !p.alpha.is_zero()));
        let bad = f
            .elements()
            .flat_map(|a| f.elements().map(move |b| BmParams { alpha: a, beta: b }))
            .find(|p| p.check(f).is_err())
            .unwrap();
        assert_eq!(build_unital_bm(plane, bad).unwrap_err(), ConstructionError::BadBmParams(BmViolation::SquareDiscriminant));
        let f4 = crate::gf::Field::quadratic(2).unwrap();
        assert_eq!(BmParams::from_indices(1, 2).check(&f4), Err(BmViolation::OrderTooSmall));
    }

    #[test]
    fn every_valid_bm_pair_at_q3_is_a_unital() {
        let plane = standard_plane(3).unwrap();
        for p in BmParams::all_valid(plane.space().field()) {
            let u = build_unital_bm(Arc::clone(&plane), p).unwrap();
            assert_eq!(u.points().len(), 28);
            let alt = build_unital_bm_alt(Arc::clone(&plane), p).unwrap();
            assert_eq!(alt.points().len(), 28);
        }
    }

    #[test]
    fn gamma_u_of_a_bm_unital() {
        let plane = standard_plane(3).unwrap();
        let p = BmParams::all_valid(plane.space().field()).into_iter().find(|p| !p.alpha.is_zero()).unwrap();
        let u = build_unital_bm(plane, p).unwrap();
        assert_eq!(check_srg(&build_gamma_u(&u).unwrap()), Ok(SrgParams::unital(3)));
    }

    #[test]
    fn tits_needs_odd_exponent() {
        assert_eq!(build_unital_bt(standard_plane(4).unwrap()).unwrap_err(), ConstructionError::BadTitsOrder(4));
        assert_eq!(build_unital_bt(standard_plane(2).unwrap()).unwrap_err(), ConstructionError::BadTitsOrder(2));
    }

    #[test]
    fn duality_is_an_involution() {
        let plane = standard_plane(3).unwrap();
        let p = BmParams::all_valid(plane.space().field()).into_iter().find(|p| !p.alpha.is_zero()).unwrap();
        let u = build_unital_bm(plane, p).unwrap();
        let d = dual_unital(&u).unwrap();
        let dd = dual_unital(&d).unwrap();
        assert_eq!(dd.points(), u.points());
        assert_eq!(dd.kind, u.kind);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let plane = standard_plane(2).unwrap();
        let u = build_unital_classical(Arc::clone(&plane)).unwrap();
        let text = unital_text(&u);
        let back = parse_unital_text(Arc::clone(&plane), &text).unwrap();
        assert_eq!(back.points(), u.points());
        assert!(matches!(
            parse_unital_text(Arc::clone(&plane), "# unital n=2 q=3 gram=identity\n1\n"),
            Err(ConstructionError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_unital_text(Arc::clone(&plane), "# unital n=2 q=2\n5\n3\n"),
            Err(ConstructionError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_unital_text(plane, "# unital q=2\n0\n1\n"),
            Err(ConstructionError::NotUnital(UnitalViolation::Size { .. }))
        ));
    }
}
