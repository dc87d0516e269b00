//! Exhaustive 4-coloring ground truth.
//!
//! Everything else in this workspace *claims* things about proper 4-colorings
//! of fast-maximal planar graphs; this crate simply enumerates them.  To kill
//! the trivial color-permutation symmetry, colorings are normalized by fixing
//! f(E1) = 1 and f(E2) = 2 on the base side.  The remaining 12× symmetry
//! factor (choices of the images of colors 3 and 4 and of the unnamed pair)
//! is reported, never multiplied in.

use planar_core::{Embedding, PlanarError, VertexId};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Default cap for full enumeration; 4^|V| grows fast and the interesting
/// examples are all tiny.  Override with the env var `BOUNDARY_CENSUS_MAX_V`.
pub const DEFAULT_MAX_VERTICES: usize = 20;

/// Name of the environment variable that overrides [`DEFAULT_MAX_VERTICES`].
pub const MAX_VERTICES_ENV: &str = "BOUNDARY_CENSUS_MAX_V";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("graph has {n} vertices, oracle limit is {limit}")]
    GuardExceeded { n: usize, limit: usize },
    #[error("graph is not fast-maximal: {0}")]
    NotFastMaximal(PlanarError),
    #[error("boundary word has length {got}, boundary walk has length {expected}")]
    WordLength { expected: usize, got: usize },
    #[error("boundary word contains symbol {0:?}, expected digits 1-4")]
    BadSymbol(char),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// A full proper coloring, one color (1..=4) per vertex id.
pub type Coloring = Vec<u8>;

fn oracle_limit() -> usize {
    std::env::var(MAX_VERTICES_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_VERTICES)
}

/// Vertex order for backtracking: boundary walk first, then the interior in
/// ascending order.  Coloring the boundary first makes the boundary census
/// prefix-prunable and the output order deterministic.
fn search_order(g: &Embedding) -> Vec<VertexId> {
    let boundary = g.boundary_walk();
    let mut order = boundary.clone();
    let mut on_boundary = vec![false; g.n_vertices()];
    for &v in &boundary {
        on_boundary[v] = true;
    }
    order.extend((0..g.n_vertices()).filter(|&v| !on_boundary[v]));
    order
}

fn backtrack(
    g: &Embedding,
    order: &[VertexId],
    depth: usize,
    colors: &mut [u8],
    sink: &mut impl FnMut(&[u8]),
) {
    if depth == order.len() {
        sink(colors);
        return;
    }
    let v = order[depth];
    let fixed = colors[v];
    let candidates: &[u8] = if fixed != 0 { &[] } else { &[1, 2, 3, 4] };
    if fixed != 0 {
        // Pre-assigned (normalization or a boundary word): just check edges
        // to already-colored neighbours and descend.
        if g.neighbors(v).iter().all(|&w| colors[w] == 0 || colors[w] != fixed) {
            backtrack(g, order, depth + 1, colors, sink);
        }
        return;
    }
    for &c in candidates {
        if g.neighbors(v).iter().all(|&w| colors[w] != c) {
            colors[v] = c;
            backtrack(g, order, depth + 1, colors, sink);
            colors[v] = 0;
        }
    }
}

fn check_guard(g: &Embedding) -> Result<()> {
    let limit = oracle_limit();
    if g.n_vertices() > limit {
        return Err(OracleError::GuardExceeded { n: g.n_vertices(), limit });
    }
    g.validate_fast_maximal().map_err(OracleError::NotFastMaximal)
}

/// All proper 4-colorings of `g` with f(E1)=1, f(E2)=2, in a deterministic
/// (lexicographic over the search order) order.
pub fn enumerate_colorings(g: &Embedding) -> Result<Vec<Coloring>> {
    check_guard(g)?;
    let order = search_order(g);
    let (e1, e2) = g.base_side();
    let mut colors = vec![0u8; g.n_vertices()];
    colors[e1] = 1;
    colors[e2] = 2;
    let mut out = Vec::new();
    backtrack(g, &order, 0, &mut colors, &mut |c| out.push(c.to_vec()));
    Ok(out)
}

/// The boundary census: every distinct color word along the boundary walk,
/// with the number of full colorings that project onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub gamma: usize,
    /// word → number of full colorings projecting to it
    pub words: BTreeMap<String, usize>,
}

impl Census {
    pub fn count(&self) -> usize {
        self.words.len()
    }

    /// The theorem's lower bound for this boundary length.
    pub fn bound(&self) -> u128 {
        lower_bound(self.gamma)
    }

    pub fn ok(&self) -> bool {
        self.count() as u128 >= self.bound()
    }

    /// Text report: one `word count` line per census word, then a summary.
    pub fn report(&self) -> String {
        let mut s = String::new();
        for (word, mult) in &self.words {
            let _ = writeln!(s, "{word} {mult}");
        }
        let _ = writeln!(
            s,
            "gamma={} census={} bound={} ok={}",
            self.gamma,
            self.count(),
            self.bound(),
            self.ok()
        );
        s
    }
}

/// 2^(gamma-3), the guaranteed number of boundary-distinct colorings.
pub fn lower_bound(gamma: usize) -> u128 {
    1u128 << (gamma.saturating_sub(3))
}

pub fn boundary_census(g: &Embedding) -> Result<Census> {
    check_guard(g)?;
    let boundary = g.boundary_walk();
    let order = search_order(g);
    let (e1, e2) = g.base_side();
    let mut colors = vec![0u8; g.n_vertices()];
    colors[e1] = 1;
    colors[e2] = 2;
    let mut words: BTreeMap<String, usize> = BTreeMap::new();
    backtrack(g, &order, 0, &mut colors, &mut |c| {
        let word: String = boundary.iter().map(|&v| char::from(b'0' + c[v])).collect();
        *words.entry(word).or_insert(0) += 1;
    });
    Ok(Census { gamma: boundary.len(), words })
}

/// Census over an explicit vertex list instead of the boundary walk.
///
/// Composite graphs obtained by gluing two pieces at a cut are planar but not
/// fast-maximal (their outer region is not a single simple face), so
/// `boundary_census` refuses them.  Here only the size guard applies and the
/// caller supplies the projection list; `gamma` in the result is the length of
/// that list.
pub fn census_on(g: &Embedding, verts: &[VertexId]) -> Result<Census> {
    let limit = oracle_limit();
    if g.n_vertices() > limit {
        return Err(OracleError::GuardExceeded { n: g.n_vertices(), limit });
    }
    let mut order: Vec<VertexId> = Vec::new();
    let mut listed = vec![false; g.n_vertices()];
    for &v in verts {
        if !listed[v] {
            listed[v] = true;
            order.push(v);
        }
    }
    order.extend((0..g.n_vertices()).filter(|&v| !listed[v]));
    let (e1, e2) = g.base_side();
    let mut colors = vec![0u8; g.n_vertices()];
    colors[e1] = 1;
    colors[e2] = 2;
    let mut words: BTreeMap<String, usize> = BTreeMap::new();
    backtrack(g, &order, 0, &mut colors, &mut |c| {
        let word: String = verts.iter().map(|&v| char::from(b'0' + c[v])).collect();
        *words.entry(word).or_insert(0) += 1;
    });
    Ok(Census { gamma: verts.len(), words })
}

/// check_lower_bound: census size vs 2^(γ−3), with both numbers as witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundCheck {
    pub census: usize,
    pub bound: u128,
    pub ok: bool,
}

pub fn check_lower_bound(g: &Embedding) -> Result<BoundCheck> {
    let census = boundary_census(g)?;
    Ok(BoundCheck { census: census.count(), bound: census.bound(), ok: census.ok() })
}

/// Does some proper 4-coloring of `g` restrict to `word` on the boundary
/// walk?  The boundary is fully pinned, so only the interior is searched and
/// no size guard applies.
pub fn extends(g: &Embedding, word: &str) -> Result<bool> {
    let boundary = g.boundary_walk();
    if word.chars().count() != boundary.len() {
        return Err(OracleError::WordLength { expected: boundary.len(), got: word.chars().count() });
    }
    let mut colors = vec![0u8; g.n_vertices()];
    for (&v, ch) in boundary.iter().zip(word.chars()) {
        match ch {
            '1'..='4' => colors[v] = ch as u8 - b'0',
            _ => return Err(OracleError::BadSymbol(ch)),
        }
    }
    let order = search_order(g);
    let mut found = false;
    // Any single witness suffices; backtrack fully but record only the flag.
    // (Graphs here are small enough that early exit is not worth the code.)
    backtrack(g, &order, 0, &mut colors, &mut |_| found = true);
    Ok(found)
}
