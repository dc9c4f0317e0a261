//! Normal-crossing surfaces described combinatorially.
//!
//! A [`Construct`] lists smooth rational components, each carrying curve
//! [`Branch`]es (normalizations of the double curves it contains), and
//! [`EdgeGluing`]s that identify the marked points of one branch with those of
//! another. Marked points that map to the same point of a component form a
//! *sheet*; sheets joined through the gluings form the points of the singular
//! locus. A point made of three gluing pairs whose three sheets pair up
//! cyclically is a triple point.
//!
//! Everything about the point structure is derived once, in
//! [`Construct::new`], so every later computation works on validated data.

mod checks;
mod combinatorial;
mod io;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::delta::{DeltaComplex2, Orientation, Side};
use crate::lattice::{DivisorClass, IntersectionLattice, LatticeError};

pub use checks::{
    singular_locus_genus, CheckError, CohomologyRanks, Diagonal, EdgeTripleReport, GluingDegreeReport, H11Report,
    VertexInertiaReport,
};
pub use combinatorial::{search_labelings, Coupling, LabelSearch, LabelingOutcome};
pub use io::ConstructFileError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BranchRef {
    pub component: usize,
    pub branch: usize,
}

impl fmt::Display for BranchRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.component, self.branch)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MarkRef {
    pub component: usize,
    pub branch: usize,
    pub label: String,
}

impl MarkRef {
    pub fn new(component: usize, branch: usize, label: impl Into<String>) -> Self {
        MarkRef { component, branch, label: label.into() }
    }

    pub fn branch_ref(&self) -> BranchRef {
        BranchRef { component: self.component, branch: self.branch }
    }
}

impl fmt::Display for MarkRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@[{},{}]", self.label, self.component, self.branch)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub class: DivisorClass,
    /// Simple nodes of the embedded image.
    pub nodes: u32,
    pub marks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub name: String,
    pub lattice: IntersectionLattice,
    pub branches: Vec<Branch>,
}

/// Identifies the normalizations of two branches; `map` pairs each mark of
/// `from` with a mark of `to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeGluing {
    pub from: BranchRef,
    pub to: BranchRef,
    pub map: Vec<(String, String)>,
}

/// A triple point as three corner slots in cyclic order. Each slot names one
/// mark of a distinct gluing pair through the point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriplePoint {
    pub slots: [MarkRef; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("branch {branch}: class has {got} coefficients, lattice rank is {expected}")]
    ClassSize { branch: BranchRef, expected: usize, got: usize },
    #[error("branch {branch}: {source}")]
    Intersection { branch: BranchRef, source: LatticeError },
    #[error("branch {branch}: duplicate mark `{label}`")]
    DuplicateMark { branch: BranchRef, label: String },
    #[error("gluing {gluing}: no branch {branch}")]
    MissingBranch { gluing: usize, branch: BranchRef },
    #[error("gluing {gluing}: a branch cannot be glued to itself")]
    SelfGluing { gluing: usize },
    #[error("branch {branch} appears in gluings {first} and {second}")]
    BranchGluedTwice { branch: BranchRef, first: usize, second: usize },
    #[error("gluing {gluing}: map is not a bijection between the marks of {from} and {to}")]
    NotBijection { gluing: usize, from: BranchRef, to: BranchRef },
    #[error("unknown mark {0}")]
    MissingMark(MarkRef),
    #[error("mark {0} listed in two identifications")]
    IdentifiedTwice(MarkRef),
    #[error("identification {index} spans several components")]
    IdentificationAcrossComponents { index: usize },
    #[error("point {{{marks}}} is not a normal crossing: {reason}")]
    NotNormalCrossing { marks: String, reason: String },
    #[error("triple point {index}: {reason}")]
    InconsistentTriplePoint { index: usize, reason: String },
}

/// One gluing pair: the `pair`-th entry of gluing `gluing`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Germ {
    pub gluing: usize,
    pub pair: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sheet {
    pub component: usize,
    pub marks: Vec<MarkRef>,
}

/// A point of the glued surface carrying marks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointClass {
    pub sheets: Vec<usize>,
    pub germs: Vec<Germ>,
}

impl PointClass {
    pub fn is_triple(&self) -> bool {
        self.germs.len() == 3
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct GermEnds {
    from_mark: usize,
    to_mark: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construct {
    components: Vec<Component>,
    gluings: Vec<EdgeGluing>,
    identifications: Vec<Vec<MarkRef>>,
    triple_points: Vec<TriplePoint>,
    marks: Vec<MarkRef>,
    germ_ends: BTreeMap<Germ, GermEnds>,
    sheet_of: Vec<usize>,
    sheets: Vec<Sheet>,
    classes: Vec<PointClass>,
    /// Germs of each triple point, aligned with `triple_points`.
    triple_germs: Vec<[Germ; 3]>,
}

impl Construct {
    /// Validates the data and derives sheets, point classes and triple points.
    /// When `triple_points` is `None` the triple points are read off the point
    /// classes; otherwise the given list must cover them exactly and fixes
    /// their cyclic orders.
    pub fn new(
        components: Vec<Component>,
        gluings: Vec<EdgeGluing>,
        identifications: Vec<Vec<MarkRef>>,
        triple_points: Option<Vec<TriplePoint>>,
    ) -> Result<Self, ConstructError> {
        let mut marks = Vec::new();
        let mut mark_index: HashMap<MarkRef, usize> = HashMap::new();
        for (c, comp) in components.iter().enumerate() {
            for (b, br) in comp.branches.iter().enumerate() {
                let branch = BranchRef { component: c, branch: b };
                if br.class.len() != comp.lattice.rank() {
                    return Err(ConstructError::ClassSize {
                        branch,
                        expected: comp.lattice.rank(),
                        got: br.class.len(),
                    });
                }
                let lattice_err = |source| ConstructError::Intersection { branch, source };
                comp.lattice.normal_degree_immersed(&br.class, br.nodes as i64).map_err(lattice_err)?;
                for other in &comp.branches[..b] {
                    comp.lattice.intersect(&br.class, &other.class).map_err(lattice_err)?;
                }
                for label in &br.marks {
                    let m = MarkRef::new(c, b, label.clone());
                    if mark_index.insert(m.clone(), marks.len()).is_some() {
                        return Err(ConstructError::DuplicateMark { branch, label: label.clone() });
                    }
                    marks.push(m);
                }
            }
        }

        let branch_exists = |r: &BranchRef| components.get(r.component).is_some_and(|c| r.branch < c.branches.len());
        let mut glued_in: HashMap<BranchRef, usize> = HashMap::new();
        let mut germ_ends = BTreeMap::new();
        for (g, gl) in gluings.iter().enumerate() {
            for r in [&gl.from, &gl.to] {
                if !branch_exists(r) {
                    return Err(ConstructError::MissingBranch { gluing: g, branch: *r });
                }
            }
            if gl.from == gl.to {
                return Err(ConstructError::SelfGluing { gluing: g });
            }
            for r in [gl.from, gl.to] {
                if let Some(first) = glued_in.insert(r, g) {
                    return Err(ConstructError::BranchGluedTwice { branch: r, first, second: g });
                }
            }
            let marks_of = |r: &BranchRef| {
                let mut v = components[r.component].branches[r.branch].marks.clone();
                v.sort();
                v
            };
            let mut lhs: Vec<String> = gl.map.iter().map(|(a, _)| a.clone()).collect();
            let mut rhs: Vec<String> = gl.map.iter().map(|(_, b)| b.clone()).collect();
            lhs.sort();
            rhs.sort();
            if lhs != marks_of(&gl.from) || rhs != marks_of(&gl.to) {
                return Err(ConstructError::NotBijection { gluing: g, from: gl.from, to: gl.to });
            }
            for (pair, (a, b)) in gl.map.iter().enumerate() {
                let from_mark = mark_index[&MarkRef::new(gl.from.component, gl.from.branch, a.clone())];
                let to_mark = mark_index[&MarkRef::new(gl.to.component, gl.to.branch, b.clone())];
                germ_ends.insert(Germ { gluing: g, pair }, GermEnds { from_mark, to_mark });
            }
        }

        // sheets: listed identifications plus singletons
        let mut sheet_of = vec![usize::MAX; marks.len()];
        let mut sheets = Vec::new();
        for (i, ident) in identifications.iter().enumerate() {
            let mut sheet = Sheet { component: ident.first().map_or(0, |m| m.component), marks: Vec::new() };
            for m in ident {
                let &k = mark_index.get(m).ok_or_else(|| ConstructError::MissingMark(m.clone()))?;
                if sheet_of[k] != usize::MAX {
                    return Err(ConstructError::IdentifiedTwice(m.clone()));
                }
                if m.component != sheet.component {
                    return Err(ConstructError::IdentificationAcrossComponents { index: i });
                }
                sheet_of[k] = sheets.len();
                sheet.marks.push(m.clone());
            }
            if !sheet.marks.is_empty() {
                sheets.push(sheet);
            }
        }
        for (k, m) in marks.iter().enumerate() {
            if sheet_of[k] == usize::MAX {
                sheet_of[k] = sheets.len();
                sheets.push(Sheet { component: m.component, marks: vec![m.clone()] });
            }
        }

        // points: sheets joined by gluing pairs
        let mut uf = UnionFind::<usize>::new(sheets.len());
        for ends in germ_ends.values() {
            uf.union(sheet_of[ends.from_mark], sheet_of[ends.to_mark]);
        }
        let mut by_root: BTreeMap<usize, PointClass> = BTreeMap::new();
        let mut order: Vec<usize> = Vec::new();
        for s in 0..sheets.len() {
            let r = uf.find(s);
            by_root
                .entry(r)
                .or_insert_with(|| {
                    order.push(r);
                    PointClass { sheets: Vec::new(), germs: Vec::new() }
                })
                .sheets
                .push(s);
        }
        for (&germ, ends) in &germ_ends {
            by_root.get_mut(&uf.find(sheet_of[ends.from_mark])).expect("root").germs.push(germ);
        }
        let classes: Vec<PointClass> = order.iter().map(|r| by_root.remove(r).expect("root")).collect();

        let is_glued = |m: &MarkRef| glued_in.contains_key(&m.branch_ref());
        for class in &classes {
            let describe = || {
                class
                    .sheets
                    .iter()
                    .flat_map(|&s| sheets[s].marks.iter().map(ToString::to_string))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            let fail = |reason: &str| ConstructError::NotNormalCrossing { marks: describe(), reason: reason.into() };
            if class.germs.is_empty() {
                continue;
            }
            if class.sheets.iter().flat_map(|&s| &sheets[s].marks).any(|m| !is_glued(m)) {
                return Err(fail("mixes a glued point with a mark on an unglued branch"));
            }
            match class.germs.len() {
                1 => {}
                3 => {
                    if class.sheets.len() != 3 || class.sheets.iter().any(|&s| sheets[s].marks.len() != 2) {
                        return Err(fail("a triple point needs three sheets of two marks each"));
                    }
                    for g in &class.germs {
                        let e = &germ_ends[g];
                        if sheet_of[e.from_mark] == sheet_of[e.to_mark] {
                            return Err(fail("a gluing pair lies inside one sheet"));
                        }
                    }
                }
                n => return Err(fail(&format!("{n} gluing pairs meet; expected 1 or 3"))),
            }
        }

        let mut x = Construct {
            components,
            gluings,
            identifications,
            triple_points: Vec::new(),
            marks,
            germ_ends,
            sheet_of,
            sheets,
            classes,
            triple_germs: Vec::new(),
        };
        match triple_points {
            None => x.derive_triple_points(),
            Some(tps) => x.adopt_triple_points(tps, &mark_index)?,
        }
        Ok(x)
    }

    fn tail_sheet(&self, g: Germ) -> usize {
        self.sheet_of[self.germ_ends[&g].from_mark]
    }

    fn head_sheet(&self, g: Germ) -> usize {
        self.sheet_of[self.germ_ends[&g].to_mark]
    }

    fn germ_sheets(&self, g: Germ) -> [usize; 2] {
        [self.tail_sheet(g), self.head_sheet(g)]
    }

    fn shared_sheet(&self, a: Germ, b: Germ) -> usize {
        let [a0, a1] = self.germ_sheets(a);
        let bs = self.germ_sheets(b);
        if bs.contains(&a0) {
            a0
        } else {
            debug_assert!(bs.contains(&a1));
            a1
        }
    }

    fn slot_of(&self, g: Germ) -> MarkRef {
        self.marks[self.germ_ends[&g].from_mark].clone()
    }

    /// Smallest germ first, crossed from its `from` sheet to its `to` sheet.
    fn derive_triple_points(&mut self) {
        let mut tps = Vec::new();
        for class in self.classes.iter().filter(|c| c.is_triple()) {
            let g0 = class.germs[0];
            let head = self.head_sheet(g0);
            let g1 = *class.germs[1..].iter().find(|&&g| self.germ_sheets(g).contains(&head)).expect("3-cycle");
            let g2 = *class.germs.iter().find(|&&g| g != g0 && g != g1).expect("three germs");
            tps.push([g0, g1, g2]);
        }
        self.triple_points = tps.iter().map(|gs| TriplePoint { slots: gs.map(|g| self.slot_of(g)) }).collect();
        self.triple_germs = tps;
    }

    fn adopt_triple_points(
        &mut self,
        tps: Vec<TriplePoint>,
        mark_index: &HashMap<MarkRef, usize>,
    ) -> Result<(), ConstructError> {
        let mut germ_of_mark: HashMap<usize, Germ> = HashMap::new();
        for (&g, e) in &self.germ_ends {
            germ_of_mark.insert(e.from_mark, g);
            germ_of_mark.insert(e.to_mark, g);
        }
        let class_of_germ: HashMap<Germ, usize> =
            self.classes.iter().enumerate().flat_map(|(i, c)| c.germs.iter().map(move |&g| (g, i))).collect();
        let mut covered = vec![None; self.classes.len()];
        let mut triple_germs = Vec::new();
        for (index, tp) in tps.iter().enumerate() {
            let bad = |reason: String| ConstructError::InconsistentTriplePoint { index, reason };
            let mut gs = Vec::new();
            for m in &tp.slots {
                let k = *mark_index.get(m).ok_or_else(|| bad(format!("unknown mark {m}")))?;
                let g = *germ_of_mark.get(&k).ok_or_else(|| bad(format!("mark {m} is not glued")))?;
                gs.push(g);
            }
            let class = class_of_germ[&gs[0]];
            if !self.classes[class].is_triple() {
                return Err(bad("slots do not lie on a triple point".into()));
            }
            if gs.iter().any(|g| class_of_germ[g] != class) {
                return Err(bad("slots lie on different points".into()));
            }
            if gs[0] == gs[1] || gs[1] == gs[2] || gs[0] == gs[2] {
                return Err(bad("two slots name the same gluing pair".into()));
            }
            if let Some(prev) = covered[class].replace(index) {
                return Err(bad(format!("same point as triple point {prev}")));
            }
            triple_germs.push([gs[0], gs[1], gs[2]]);
        }
        if let Some(missing) = self.classes.iter().enumerate().position(|(i, c)| c.is_triple() && covered[i].is_none())
        {
            let m = self.sheets[self.classes[missing].sheets[0]].marks[0].clone();
            return Err(ConstructError::InconsistentTriplePoint {
                index: tps.len(),
                reason: format!("the triple point through {m} is not listed"),
            });
        }
        self.triple_points = tps;
        self.triple_germs = triple_germs;
        Ok(())
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn gluings(&self) -> &[EdgeGluing] {
        &self.gluings
    }

    pub fn identifications(&self) -> &[Vec<MarkRef>] {
        &self.identifications
    }

    pub fn triple_points(&self) -> &[TriplePoint] {
        &self.triple_points
    }

    pub fn sheets(&self) -> &[Sheet] {
        &self.sheets
    }

    /// Points of the glued surface that carry marks, including plain marked
    /// points on unglued branches.
    pub fn point_classes(&self) -> &[PointClass] {
        &self.classes
    }

    pub fn branch(&self, r: BranchRef) -> &Branch {
        &self.components[r.component].branches[r.branch]
    }

    pub fn lattice(&self, component: usize) -> &IntersectionLattice {
        &self.components[component].lattice
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Components as vertices, gluings as edges (from → to) and triple points
    /// as triangles. Side `k` of a triangle runs along the gluing of slot `k`,
    /// from the sheet it shares with slot `k-1` to the sheet it shares with
    /// slot `k+1`; it is positive when that start sheet holds the `from` mark.
    pub fn dual_complex(&self) -> DeltaComplex2 {
        let mut d = DeltaComplex2::new();
        for c in &self.components {
            d.add_vertex(c.name.clone());
        }
        for (g, gl) in self.gluings.iter().enumerate() {
            d.add_edge(
                edge_name(g),
                self.components[gl.from.component].name.clone(),
                self.components[gl.to.component].name.clone(),
            );
        }
        for (t, gs) in self.triple_germs.iter().enumerate() {
            let sides = std::array::from_fn(|k| {
                let start = self.shared_sheet(gs[(k + 2) % 3], gs[k]);
                let o = if start == self.tail_sheet(gs[k]) { Orientation::Plus } else { Orientation::Minus };
                Side::new(edge_name(gs[k].gluing), o)
            });
            d.add_triangle(format!("T{t}"), sides);
        }
        d
    }

    /// Disjoint union; `other`'s component names get `prefix` and its
    /// references are shifted.
    pub fn disjoint_union(&self, other: &Construct, prefix: &str) -> Construct {
        let shift = self.components.len();
        let mv = |m: &MarkRef| MarkRef::new(m.component + shift, m.branch, m.label.clone());
        let mvb = |r: &BranchRef| BranchRef { component: r.component + shift, branch: r.branch };
        let mut components = self.components.clone();
        components
            .extend(other.components.iter().map(|c| Component { name: format!("{prefix}{}", c.name), ..c.clone() }));
        let mut gluings = self.gluings.clone();
        gluings.extend(other.gluings.iter().map(|g| EdgeGluing {
            from: mvb(&g.from),
            to: mvb(&g.to),
            map: g.map.clone(),
        }));
        let mut idents = self.identifications.clone();
        idents.extend(other.identifications.iter().map(|s| s.iter().map(mv).collect()));
        let mut tps = self.triple_points.clone();
        tps.extend(other.triple_points.iter().map(|t| TriplePoint { slots: t.slots.clone().map(|m| mv(&m)) }));
        Construct::new(components, gluings, idents, Some(tps)).expect("union of valid constructs")
    }
}

fn edge_name(g: usize) -> String {
    format!("C{g}")
}

/// One plane blown up in nine points carrying two nodal cubics: the first
/// through eight of the points, the second through all nine. They meet once
/// more, at a point identified with both nodes through the gluing, giving a
/// singular locus with a single triple point.
pub fn duncehat_construct() -> Construct {
    let lattice = IntersectionLattice::blown_up_plane(9);
    let first = lattice.plane_curve(3, &(1..=8).collect::<Vec<_>>());
    let second = lattice.plane_curve(3, &(1..=9).collect::<Vec<_>>());
    let marks = |p: &str| (1..=3).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
    let component = Component {
        name: "X".into(),
        lattice,
        branches: vec![
            Branch { class: first, nodes: 1, marks: marks("p") },
            Branch { class: second, nodes: 1, marks: marks("q") },
        ],
    };
    let pairs = [("p1", "q2"), ("p2", "q3"), ("p3", "q1")];
    let gluing = EdgeGluing {
        from: BranchRef { component: 0, branch: 0 },
        to: BranchRef { component: 0, branch: 1 },
        map: pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
    };
    let p = |l: &str| MarkRef::new(0, 0, l);
    let q = |l: &str| MarkRef::new(0, 1, l);
    let identifications = vec![vec![p("p1"), p("p2")], vec![q("q1"), q("q2")], vec![p("p3"), q("q3")]];
    Construct::new(vec![component], vec![gluing], identifications, None).expect("valid construct")
}
