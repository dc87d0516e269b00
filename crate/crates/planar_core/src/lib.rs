//! Rotation-system embeddings of planar graphs with a distinguished outer face.
//!
//! A graph is stored as a *rotation system*: for every vertex, the cyclic
//! counter-clockwise order of its neighbours in some fixed planar drawing.
//! Faces are recovered by dart tracing, and one face is singled out as the
//! outer face by a *base side*: the directed edge (E1, E2) whose face is, by
//! convention, the outer one.  The boundary walk of the graph is that face,
//! reported in walk order starting at E1.
//!
//! The graphs of interest here are "fast-maximal": every face is a triangle
//! except possibly the outer face.  For such graphs the boundary walk is a
//! simple cycle and its length is called `gamma`.

use std::collections::VecDeque;
use std::fmt::Write as _;

/// Vertices are dense indices `0..n`.  By convention vertex 0 is E1 and
/// vertex 1 is E2 (the two ends of the base side).
pub type VertexId = usize;

/// Hard cap on graph size.  Everything downstream (scheme materialisation,
/// exhaustive colouring) is exponential in some parameter, so there is no
/// point in admitting graphs that could never be processed.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanarError {
    #[error("graph has {0} vertices, maximum is {MAX_VERTICES}")]
    TooLarge(usize),
    #[error("graph must have at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("vertex {0} out of range for {1} vertices")]
    BadVertex(VertexId, usize),
    #[error("rotation of vertex {0} mentions {1} twice")]
    DuplicateNeighbor(VertexId, VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("adjacency is not symmetric: {0} lists {1} but not vice versa")]
    Asymmetric(VertexId, VertexId),
    #[error("graph is not connected")]
    Disconnected,
    #[error("base side ({0}, {1}) is not an edge")]
    BadBase(VertexId, VertexId),
    #[error("boundary walk repeats vertex {0}")]
    BoundaryNotSimple(VertexId),
    #[error("face {0:?} is not a triangle and does not contain the base side")]
    NonTriangleFace(Vec<VertexId>),
    #[error("face walk of length {0} is too short")]
    DegenerateFace(usize),
    #[error("Euler check failed: V={v} E={e} F={f}")]
    EulerFailed { v: usize, e: usize, f: usize },
    #[error("wheel needs at least 3 rim vertices, got {0}")]
    BadWheel(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, PlanarError>;

/// A planar embedding: one counter-clockwise neighbour list per vertex plus
/// the base side that pins down the outer face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    rotations: Vec<Vec<VertexId>>,
    base: (VertexId, VertexId),
}

impl Embedding {
    /// Build an embedding from raw rotation lists.  Checks that the data is a
    /// simple, connected, symmetric adjacency structure and that the base
    /// side is an actual edge.  (Planarity itself is certified later by the
    /// Euler count in [`Embedding::validate_fast_maximal`].)
    pub fn new(rotations: Vec<Vec<VertexId>>, base: (VertexId, VertexId)) -> Result<Self> {
        let n = rotations.len();
        if n < 3 {
            return Err(PlanarError::TooSmall(n));
        }
        if n > MAX_VERTICES {
            return Err(PlanarError::TooLarge(n));
        }
        for (v, rot) in rotations.iter().enumerate() {
            for &w in rot {
                if w >= n {
                    return Err(PlanarError::BadVertex(w, n));
                }
                if w == v {
                    return Err(PlanarError::SelfLoop(v));
                }
                if rot.iter().filter(|&&x| x == w).count() > 1 {
                    return Err(PlanarError::DuplicateNeighbor(v, w));
                }
                if !rotations[w].contains(&v) {
                    return Err(PlanarError::Asymmetric(v, w));
                }
            }
        }
        let g = Embedding { rotations, base };
        if !g.is_adjacent(base.0, base.1) {
            return Err(PlanarError::BadBase(base.0, base.1));
        }
        // Connectivity by BFS from E1.
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &g.rotations[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(PlanarError::Disconnected);
        }
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.rotations.len()
    }

    pub fn n_edges(&self) -> usize {
        self.rotations.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotations[v].len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.rotations[v]
    }

    pub fn is_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.rotations[u].contains(&v)
    }

    pub fn base_side(&self) -> (VertexId, VertexId) {
        self.base
    }

    /// The dart-successor rule: the face walk entering `v` along (u, v)
    /// leaves along (v, w) where w follows u in the rotation at v.
    fn face_next(&self, u: VertexId, v: VertexId) -> VertexId {
        let rot = &self.rotations[v];
        let i = rot.iter().position(|&x| x == u).expect("dart tail not a neighbor");
        rot[(i + 1) % rot.len()]
    }

    /// Trace the face containing the dart (u, v); the returned walk lists the
    /// tail of every dart on the face, starting with `u`.
    pub fn face_of_dart(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        let mut walk = vec![u];
        let (mut a, mut b) = (u, v);
        loop {
            if b == u && self.face_next(a, b) == v {
                return walk;
            }
            walk.push(b);
            let c = self.face_next(a, b);
            a = b;
            b = c;
        }
    }

    /// All faces of the embedding.  Each dart lies on exactly one face; the
    /// faces are reported in order of their smallest unvisited dart, so the
    /// result is deterministic.  The outer face is included.
    pub fn faces(&self) -> Vec<Vec<VertexId>> {
        let n = self.n_vertices();
        // visited[v][i] marks the dart leaving v towards rotations[v][i].
        let mut visited: Vec<Vec<bool>> = self.rotations.iter().map(|r| vec![false; r.len()]).collect();
        let mut out = Vec::new();
        for u in 0..n {
            for i in 0..self.rotations[u].len() {
                if visited[u][i] {
                    continue;
                }
                let v = self.rotations[u][i];
                let walk = self.face_of_dart(u, v);
                for j in 0..walk.len() {
                    let a = walk[j];
                    let b = walk[(j + 1) % walk.len()];
                    let k = self.rotations[a].iter().position(|&x| x == b).unwrap();
                    visited[a][k] = true;
                }
                out.push(walk);
            }
        }
        out
    }

    /// The outer face, i.e. the face that contains the base dart (E1, E2),
    /// starting at E1.  For the graphs built here this walk runs E1, E2, ...
    /// in boundary order.
    pub fn boundary_walk(&self) -> Vec<VertexId> {
        self.face_of_dart(self.base.0, self.base.1)
    }

    /// Boundary length.
    pub fn gamma(&self) -> usize {
        self.boundary_walk().len()
    }

    /// Check the "fast-maximal" shape: the embedding is consistent (Euler
    /// formula holds), the boundary walk is a simple cycle through the base
    /// side, and every face other than the outer one is a triangle.
    pub fn validate_fast_maximal(&self) -> Result<()> {
        let v = self.n_vertices();
        let e = self.n_edges();
        let faces = self.faces();
        let f = faces.len();
        if v + f != e + 2 {
            return Err(PlanarError::EulerFailed { v, e, f });
        }
        let boundary = self.boundary_walk();
        let mut seen = vec![false; v];
        for &x in &boundary {
            if seen[x] {
                return Err(PlanarError::BoundaryNotSimple(x));
            }
            seen[x] = true;
        }
        for face in &faces {
            if face.len() < 3 {
                return Err(PlanarError::DegenerateFace(face.len()));
            }
            if face.len() > 3 && !is_same_cycle(face, &boundary) {
                return Err(PlanarError::NonTriangleFace(face.clone()));
            }
        }
        Ok(())
    }

    /// Vertices not on the boundary walk, in ascending order.
    pub fn interior_vertices(&self) -> Vec<VertexId> {
        let boundary = self.boundary_walk();
        let mut on_boundary = vec![false; self.n_vertices()];
        for &v in &boundary {
            on_boundary[v] = true;
        }
        (0..self.n_vertices()).filter(|&v| !on_boundary[v]).collect()
    }

    /// An i-graph has a nonempty, connected interior.
    pub fn is_i_graph(&self) -> bool {
        let interior = self.interior_vertices();
        if interior.is_empty() {
            return false;
        }
        let in_interior = |v: VertexId| interior.binary_search(&v).is_ok();
        let mut seen = vec![false; self.n_vertices()];
        let mut queue = VecDeque::from([interior[0]]);
        seen[interior[0]] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.rotations[v] {
                if in_interior(w) && !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == interior.len()
    }

    /// Plain-text dump: one rotation per line, then the base side and the
    /// boundary length.  Inverse of [`Embedding::parse`].
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (v, rot) in self.rotations.iter().enumerate() {
            let _ = write!(s, "{v}:");
            for &w in rot {
                let _ = write!(s, " {w}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "base: {} {}", self.base.0, self.base.1);
        let _ = writeln!(s, "gamma: {}", self.gamma());
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut rotations: Vec<(usize, Vec<VertexId>)> = Vec::new();
        let mut base = None;
        let mut gamma = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (head, rest) = line
                .split_once(':')
                .ok_or_else(|| PlanarError::Parse(format!("missing ':' in {line:?}")))?;
            let nums: Vec<usize> = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| PlanarError::Parse(format!("bad number {t:?}"))))
                .collect::<Result<_>>()?;
            match head.trim() {
                "base" => {
                    if nums.len() != 2 {
                        return Err(PlanarError::Parse("base needs two vertices".into()));
                    }
                    base = Some((nums[0], nums[1]));
                }
                "gamma" => {
                    if nums.len() != 1 {
                        return Err(PlanarError::Parse("gamma needs one number".into()));
                    }
                    gamma = Some(nums[0]);
                }
                v => {
                    let v: usize =
                        v.parse().map_err(|_| PlanarError::Parse(format!("bad vertex {v:?}")))?;
                    rotations.push((v, nums));
                }
            }
        }
        rotations.sort_by_key(|&(v, _)| v);
        for (i, &(v, _)) in rotations.iter().enumerate() {
            if v != i {
                return Err(PlanarError::Parse(format!("vertex ids not dense at {v}")));
            }
        }
        let base = base.ok_or_else(|| PlanarError::Parse("missing base line".into()))?;
        let g = Embedding::new(rotations.into_iter().map(|(_, r)| r).collect(), base)?;
        if let Some(k) = gamma {
            let actual = g.gamma();
            if k != actual {
                return Err(PlanarError::Parse(format!("gamma line says {k}, walk has length {actual}")));
            }
        }
        Ok(g)
    }

    /// Raw rotation lists, for code that performs embedding surgery and then
    /// rebuilds through [`Embedding::new`].
    pub fn rotations(&self) -> &[Vec<VertexId>] {
        &self.rotations
    }
}

/// True if `a` and `b` are the same cyclic sequence (same direction).
fn is_same_cycle(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    (0..n).any(|s| (0..n).all(|i| a[(s + i) % n] == b[i]))
}

/// The wheel with `n` rim vertices: a hub joined to a simple cycle, drawn
/// with the hub inside so that the rim is the boundary.
///
/// Vertex layout: E1 = 0 and E2 = 1 are consecutive rim vertices, the hub is
/// vertex 2, and the remaining rim vertices are 3..=n in boundary order, so
/// the boundary walk is (0, 1, 3, 4, ..., n).
pub fn build_wheel(n: usize) -> Result<Embedding> {
    if n < 3 {
        return Err(PlanarError::BadWheel(n));
    }
    if n + 1 > MAX_VERTICES {
        return Err(PlanarError::TooLarge(n + 1));
    }
    let hub = 2;
    let rim: Vec<VertexId> = std::iter::once(0).chain(std::iter::once(1)).chain(3..=n).collect();
    let mut rotations = vec![Vec::new(); n + 1];
    for (i, &v) in rim.iter().enumerate() {
        let prev = rim[(i + n - 1) % n];
        let next = rim[(i + 1) % n];
        // Counter-clockwise around a rim vertex: boundary successor, hub,
        // boundary predecessor.
        rotations[v] = vec![next, hub, prev];
    }
    rotations[hub] = rim;
    Embedding::new(rotations, (0, 1))
}
