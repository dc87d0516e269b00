//! Composition of two finished pieces at a cut.
//!
//! The pieces stay intact; they are joined along their outer regions in one
//! of four fixed patterns.  Each pattern admits a known number of color
//! permutations of the right piece per pair of certified colorings, so the
//! composite inherits a product lower bound on its joint-distinct colorings.

use crate::{check_alignment, BuilderError, Result};
use coloring_oracle::lower_bound;
use planar_core::{Embedding, VertexId};
use scheme::Scheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutShape {
    /// The pieces share one vertex: the left piece's last boundary vertex is
    /// identified with the right piece's E1.
    SharedVertex,
    /// The pieces share one edge: the left piece's last boundary edge is
    /// identified with the right piece's base edge.
    SharedEdge,
    /// Two bridge edges from one right boundary vertex to the left boundary
    /// edge E2–E4, closing a single new triangle.
    BridgePair,
    /// Three bridge edges closing two new triangles; the right piece is
    /// mirrored so the pattern fits the plane.
    BridgeTriple,
}

impl CutShape {
    /// Distinct recolorings of the right piece compatible with the cut, per
    /// pair of certified colorings: permutations of the four colors modulo
    /// the colors pinned across the cut.
    pub fn factor(self) -> u128 {
        match self {
            CutShape::SharedVertex => 6,
            CutShape::SharedEdge => 2,
            CutShape::BridgePair => 12,
            CutShape::BridgeTriple => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CutShape::SharedVertex => "shared-vertex",
            CutShape::SharedEdge => "shared-edge",
            CutShape::BridgePair => "bridge-pair",
            CutShape::BridgeTriple => "bridge-triple",
        }
    }
}

/// A composite graph together with its counting certificate.
#[derive(Debug)]
pub struct Composition {
    pub graph: Embedding,
    /// Outer vertices of both pieces, left boundary first, then the right
    /// boundary minus any identified vertices.  Colorings are counted by
    /// their restriction to this list.
    pub joint: Vec<VertexId>,
    /// Length of the joint; plays the role of the boundary length.
    pub gamma: usize,
    pub shape: CutShape,
    pub left_count: u128,
    pub right_count: u128,
    /// Guaranteed joint-distinct colorings: left rows × right rows × the
    /// recoloring factor of the cut.
    pub bound: u128,
}

impl Composition {
    /// Whether the certificate still clears the 2^(γ−3) requirement.
    pub fn meets_requirement(&self) -> bool {
        self.bound >= lower_bound(self.gamma)
    }
}

fn rotated_to(rot: &[VertexId], first: VertexId) -> Vec<VertexId> {
    let i = rot.iter().position(|&x| x == first).expect("anchor is a neighbour");
    rot[i..].iter().chain(&rot[..i]).cloned().collect()
}

/// Join two validated graph/scheme pairs at a cut of the given shape.
pub fn compose_at_cut(
    gl: &Embedding,
    sl: &Scheme,
    gr: &Embedding,
    sr: &Scheme,
    shape: CutShape,
) -> Result<Composition> {
    let bl = check_alignment(gl, sl)?;
    let br = check_alignment(gr, sr)?;
    let (gamma_l, gamma_r) = (bl.len(), br.len());
    let (nl, nr) = (gl.n_vertices(), gr.n_vertices());

    // The triple-bridge pattern only closes into triangles with the right
    // piece flipped over; reversing every rotation mirrors the embedding.
    let mut rrot: Vec<Vec<VertexId>> = gr.rotations().to_vec();
    if shape == CutShape::BridgeTriple {
        for r in rrot.iter_mut() {
            r.reverse();
        }
    }

    // Identify shared vertices, then number the remaining right vertices
    // after the left piece.
    let mut map = vec![usize::MAX; nr];
    match shape {
        CutShape::SharedVertex => map[br[0]] = bl[gamma_l - 1],
        CutShape::SharedEdge => {
            map[br[0]] = bl[gamma_l - 1];
            map[br[1]] = bl[gamma_l - 2];
        }
        CutShape::BridgePair | CutShape::BridgeTriple => {}
    }
    let mut next = nl;
    for r in map.iter_mut() {
        if *r == usize::MAX {
            *r = next;
            next += 1;
        }
    }

    let mut rot: Vec<Vec<VertexId>> = gl.rotations().to_vec();
    rot.resize(next, Vec::new());
    for (r, rr) in rrot.iter().enumerate() {
        if map[r] >= nl {
            rot[map[r]] = rr.iter().map(|&x| map[x]).collect();
        }
    }
    let mapped = |ids: &[VertexId]| -> Vec<VertexId> { ids.iter().map(|&x| map[x]).collect() };

    let mut joint: Vec<VertexId> = bl.clone();
    match shape {
        CutShape::SharedVertex => {
            // Both outer fans meet at the shared vertex: first the left fan
            // starting at its boundary successor E1, then the right fan
            // starting at E2 of the right piece.
            let v = bl[gamma_l - 1];
            let mut merged = rotated_to(&rot[v], bl[0]);
            merged.extend(mapped(&rotated_to(&rrot[br[0]], br[1])));
            rot[v] = merged;
            joint.extend(mapped(&br[1..]));
        }
        CutShape::SharedEdge => {
            let bv = bl[gamma_l - 1];
            let a = bl[gamma_l - 2];
            // Around a: the left fan up to its boundary predecessor, then the
            // right fan of E2 with the duplicate shared neighbour dropped.
            let mut ra = rotated_to(&rot[a], bv);
            let mut rea = rotated_to(&rrot[br[1]], br[2 % gamma_r]);
            debug_assert_eq!(rea.pop(), Some(br[0]));
            ra.extend(mapped(&rea));
            rot[a] = ra;
            // Around bv: the left fan ends at a, the right fan of E1 follows,
            // again without the duplicate.
            let mut rb = rotated_to(&rot[bv], bl[0]);
            let reb = rotated_to(&rrot[br[0]], br[1]);
            rb.extend(mapped(&reb[1..]));
            rot[bv] = rb;
            joint.extend(mapped(&br[2..]));
        }
        CutShape::BridgePair => {
            // One right vertex reaches over to the left boundary edge E2–E4.
            let x2 = bl[1];
            let x3 = bl[2];
            let y3 = map[br[2]];
            let mut r2 = rotated_to(&rot[x2], bl[2]);
            r2.push(y3);
            rot[x2] = r2;
            let mut r3 = rotated_to(&rot[x3], bl[3 % gamma_l]);
            r3.push(y3);
            rot[x3] = r3;
            let mut ry = rotated_to(&rot[y3], map[br[3 % gamma_r]]);
            ry.push(x3);
            ry.push(x2);
            rot[y3] = ry;
            joint.extend(mapped(&br));
        }
        CutShape::BridgeTriple => {
            let x2 = bl[1];
            let x3 = bl[2];
            let y2 = map[br[1]];
            let y3 = map[br[2]];
            let mut r2 = rotated_to(&rot[x2], bl[2]);
            r2.push(y2);
            rot[x2] = r2;
            let mut r3 = rotated_to(&rot[x3], bl[3 % gamma_l]);
            r3.push(y2);
            r3.push(y3);
            rot[x3] = r3;
            // Mirrored piece: the boundary successor of a right boundary
            // vertex is its former predecessor.
            let mut ry2 = rotated_to(&rot[y2], map[br[0]]);
            ry2.push(x3);
            ry2.push(x2);
            rot[y2] = ry2;
            let mut ry3 = rotated_to(&rot[y3], map[br[1]]);
            ry3.push(x3);
            rot[y3] = ry3;
            joint.extend(mapped(&br));
        }
    }

    let graph = Embedding::new(rot, gl.base_side())?;
    let euler = graph.n_vertices() as i64 - graph.n_edges() as i64 + graph.faces().len() as i64;
    if euler != 2 {
        return Err(BuilderError::Internal(format!(
            "composite is not planar: Euler characteristic {euler}"
        )));
    }
    let gamma = joint.len();
    let expected = match shape {
        CutShape::SharedVertex => gamma_l + gamma_r - 1,
        CutShape::SharedEdge => gamma_l + gamma_r - 2,
        CutShape::BridgePair | CutShape::BridgeTriple => gamma_l + gamma_r,
    };
    if gamma != expected {
        return Err(BuilderError::Internal(format!(
            "joint length {gamma}, cut arithmetic says {expected}"
        )));
    }
    let left_count = sl.count_guaranteed();
    let right_count = sr.count_guaranteed();
    Ok(Composition {
        graph,
        joint,
        gamma,
        shape,
        left_count,
        right_count,
        bound: left_count * right_count * shape.factor(),
    })
}
