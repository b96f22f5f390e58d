//! Local pictures of a topograph around the marked base `(1,0), (0,1)`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::TopographError;
use crate::forms::BinaryQuadraticForm;

pub const DEFAULT_MAX_DEPTH: u32 = 8;

type Vector = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    /// Representative of the lax vector, first nonzero coordinate positive.
    pub vector: Vector,
    pub value: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeVertex {
    /// Indices into [`TopographTree::regions`].
    pub regions: [usize; 3],
    /// Distance from the nearer end of the central edge.
    pub level: u32,
    /// Edge towards the central edge; `None` for its two ends.
    pub parent_edge: Option<usize>,
}

/// Direction of increase along an edge, relative to its `ends`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Increases from `ends.0` to `ends.1`.
    Forward,
    Backward,
    /// Constant progression.
    Unoriented,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEdge {
    pub ends: (usize, usize),
    /// The two regions the edge separates.
    pub regions: [usize; 2],
    pub orientation: Orientation,
}

/// Finite piece of the topograph: the central edge between the superbases
/// `{e1, e2, e1+e2}` and `{e1, e2, e1-e2}`, grown `depth - 1` levels outward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopographTree {
    pub form: BinaryQuadraticForm,
    pub depth: u32,
    pub regions: Vec<Region>,
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<TreeEdge>,
}

fn lax(v: Vector) -> Vector {
    if v.0 < 0 || (v.0 == 0 && v.1 < 0) {
        (-v.0, -v.1)
    } else {
        v
    }
}

fn add(u: Vector, v: Vector) -> Vector {
    (u.0 + v.0, u.1 + v.1)
}

fn sub(u: Vector, v: Vector) -> Vector {
    (u.0 - v.0, u.1 - v.1)
}

struct Builder<'a> {
    form: &'a BinaryQuadraticForm,
    regions: Vec<Region>,
    index: HashMap<Vector, usize>,
}

impl Builder<'_> {
    fn region(&mut self, v: Vector) -> usize {
        let v = lax(v);
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let value = self.form.evaluate_i64(v.0, v.1);
        self.regions.push(Region { vector: v, value });
        self.index.insert(v, self.regions.len() - 1);
        self.regions.len() - 1
    }

    fn vector(&self, r: usize) -> Vector {
        self.regions[r].vector
    }

    /// Region across the edge `{x, y}` from the vertex whose third region is `z`.
    fn across(&mut self, x: usize, y: usize, z: usize) -> usize {
        let (vx, vy, vz) = (self.vector(x), self.vector(y), self.vector(z));
        let sum = lax(add(vx, vy));
        let w = if sum == vz { sub(vx, vy) } else { add(vx, vy) };
        self.region(w)
    }

    fn orientation(&self, from_third: usize, to_third: usize) -> Orientation {
        let (from, to) = (
            &self.regions[from_third].value,
            &self.regions[to_third].value,
        );
        match from.cmp(to) {
            std::cmp::Ordering::Less => Orientation::Forward,
            std::cmp::Ordering::Greater => Orientation::Backward,
            std::cmp::Ordering::Equal => Orientation::Unoriented,
        }
    }
}

pub fn render_topograph(
    f: &BinaryQuadraticForm,
    depth: u32,
) -> Result<TopographTree, TopographError> {
    render_topograph_with(f, depth, DEFAULT_MAX_DEPTH)
}

pub fn render_topograph_with(
    f: &BinaryQuadraticForm,
    depth: u32,
    max_depth: u32,
) -> Result<TopographTree, TopographError> {
    if depth == 0 || depth > max_depth {
        return Err(TopographError::DepthExceeded {
            depth,
            max: max_depth,
        });
    }
    let mut b = Builder {
        form: f,
        regions: Vec::new(),
        index: HashMap::new(),
    };
    let e1 = b.region((1, 0));
    let e2 = b.region((0, 1));
    let plus = b.region((1, 1));
    let minus = b.region((1, -1));

    let mut vertices = vec![
        TreeVertex {
            regions: [e1, e2, plus],
            level: 0,
            parent_edge: None,
        },
        TreeVertex {
            regions: [e1, e2, minus],
            level: 0,
            parent_edge: None,
        },
    ];
    let mut edges = vec![TreeEdge {
        ends: (0, 1),
        regions: [e1, e2],
        orientation: b.orientation(plus, minus),
    }];

    let mut frontier: Vec<(usize, [usize; 2])> = vec![(0, [e1, e2]), (1, [e1, e2])];
    for level in 1..depth {
        let mut next = Vec::new();
        for (vi, came_from) in frontier {
            let [r0, r1, r2] = vertices[vi].regions;
            for (x, y, z) in [(r0, r1, r2), (r0, r2, r1), (r1, r2, r0)] {
                if [x, y] == came_from || [y, x] == came_from {
                    continue;
                }
                let w = b.across(x, y, z);
                vertices.push(TreeVertex {
                    regions: [x, y, w],
                    level,
                    parent_edge: Some(edges.len()),
                });
                let child = vertices.len() - 1;
                edges.push(TreeEdge {
                    ends: (vi, child),
                    regions: [x, y],
                    orientation: b.orientation(z, w),
                });
                next.push((child, [x, y]));
            }
        }
        frontier = next;
    }

    Ok(TopographTree {
        form: f.clone(),
        depth,
        regions: b.regions,
        vertices,
        edges,
    })
}

impl TopographTree {
    fn values(&self, v: &TreeVertex) -> String {
        let [a, b, c] = v.regions.map(|r| self.regions[r].value.to_string());
        format!("{a} | {b} | {c}")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph topograph {{");
        let _ = writeln!(out, "  // form {} depth {}", self.form, self.depth);
        for r in &self.regions {
            let _ = writeln!(
                out,
                "  // region ({},{}) = {}",
                r.vector.0, r.vector.1, r.value
            );
        }
        let _ = writeln!(out, "  node [shape=box, fontsize=10];");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", self.values(v));
        }
        for e in &self.edges {
            let [x, y] = e.regions.map(|r| &self.regions[r].value);
            let (from, to, attr) = match e.orientation {
                Orientation::Forward => (e.ends.0, e.ends.1, ""),
                Orientation::Backward => (e.ends.1, e.ends.0, ""),
                Orientation::Unoriented => (e.ends.0, e.ends.1, ", dir=none"),
            };
            let _ = writeln!(out, "  v{from} -> v{to} [label=\"{x}|{y}\"{attr}];");
        }
        let _ = writeln!(out, "}}");
        out
    }

    /// Indented outline. `->` marks an edge increasing away from the centre,
    /// `<-` one increasing towards it, `--` a constant edge.
    pub fn to_ascii(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "topograph of {} (depth {})", self.form, self.depth);
        let central = &self.edges[0];
        let _ = writeln!(
            out,
            "central edge {} {} [{}]",
            arrow(central.orientation),
            self.edge_label(central),
            self.values(&self.vertices[central.ends.1]),
        );
        for root in [0, 1] {
            self.ascii_subtree(root, &mut out);
        }
        out
    }

    fn edge_label(&self, e: &TreeEdge) -> String {
        let [x, y] = e.regions.map(|r| &self.regions[r].value);
        format!("{x}|{y}")
    }

    fn ascii_subtree(&self, vi: usize, out: &mut String) {
        let v = &self.vertices[vi];
        let indent = "  ".repeat(v.level as usize);
        match v.parent_edge {
            None => {
                let _ = writeln!(out, "[{}]", self.values(v));
            }
            Some(ei) => {
                let e = &self.edges[ei];
                let _ = writeln!(
                    out,
                    "{indent}{} {} [{}]",
                    arrow(e.orientation),
                    self.edge_label(e),
                    self.values(v)
                );
            }
        }
        for (ei, e) in self.edges.iter().enumerate().skip(1) {
            if e.ends.0 == vi && self.vertices[e.ends.1].parent_edge == Some(ei) {
                self.ascii_subtree(e.ends.1, out);
            }
        }
    }
}

fn arrow(o: Orientation) -> &'static str {
    match o {
        Orientation::Forward => "->",
        Orientation::Backward => "<-",
        Orientation::Unoriented => "--",
    }
}
